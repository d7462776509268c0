//! Exact nonnegative fractions.
//!
//! Distances, defects, and bounds in this crate are counts over a degree `n`
//! and must compare exactly; floats only appear at the display boundary.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

/// A reduced nonnegative rational with `u64` numerator and denominator.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Frac {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };
    pub const ONE: Frac = Frac { num: 1, den: 1 };

    /// Builds `num/den` in lowest terms. Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Frac {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        Frac {
            num: num / g,
            den: den / g,
        }
    }

    /// Reduces a `u128` ratio, saturating at `u64::MAX` if the reduced
    /// numerator still does not fit. Saturation only arises for vacuously
    /// large bound values, never for distances (which are at most 1).
    fn from_u128(num: u128, den: u128) -> Frac {
        assert!(den != 0, "zero denominator");
        let mut a = num;
        let mut b = den;
        while b != 0 {
            (a, b) = (b, a % b);
        }
        let (num, den) = (num / a, den / a);
        if num > u64::MAX as u128 || den > u64::MAX as u128 {
            return Frac {
                num: u64::MAX,
                den: 1,
            };
        }
        Frac {
            num: num as u64,
            den: den as u64,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `self − other`, clamped at zero (these fractions are nonnegative).
    pub fn saturating_sub(self, other: Frac) -> Frac {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        if lhs <= rhs {
            return Frac::ZERO;
        }
        Frac::from_u128(lhs - rhs, self.den as u128 * other.den as u128)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Parses either `a/b` or a terminating decimal such as `0.05`.
    pub fn parse(text: &str) -> Result<Frac, ParseFracError> {
        let text = text.trim();
        if let Some((a, b)) = text.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad(text))?;
            let den: u64 = b.trim().parse().map_err(|_| bad(text))?;
            if den == 0 {
                return Err(bad(text));
            }
            return Ok(Frac::new(num, den));
        }
        if let Some((whole, fracpart)) = text.split_once('.') {
            if fracpart.is_empty() || !fracpart.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad(text));
            }
            let whole: u64 = if whole.is_empty() {
                0
            } else {
                whole.parse().map_err(|_| bad(text))?
            };
            let digits: u64 = fracpart.parse().map_err(|_| bad(text))?;
            let den = 10u64
                .checked_pow(fracpart.len() as u32)
                .ok_or_else(|| bad(text))?;
            let num = whole
                .checked_mul(den)
                .and_then(|w| w.checked_add(digits))
                .ok_or_else(|| bad(text))?;
            return Ok(Frac::new(num, den));
        }
        let num: u64 = text.parse().map_err(|_| bad(text))?;
        Ok(Frac::new(num, 1))
    }
}

fn bad(text: &str) -> ParseFracError {
    ParseFracError {
        text: text.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a fraction or terminating decimal: {text:?}")]
pub struct ParseFracError {
    text: String,
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Frac) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Frac) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl Add for Frac {
    type Output = Frac;

    fn add(self, rhs: Frac) -> Frac {
        let num = self.num as u128 * rhs.den as u128 + rhs.num as u128 * self.den as u128;
        let den = self.den as u128 * rhs.den as u128;
        Frac::from_u128(num, den)
    }
}

impl Mul for Frac {
    type Output = Frac;

    fn mul(self, rhs: Frac) -> Frac {
        Frac::from_u128(
            self.num as u128 * rhs.num as u128,
            self.den as u128 * rhs.den as u128,
        )
    }
}

impl Mul<u64> for Frac {
    type Output = Frac;

    fn mul(self, rhs: u64) -> Frac {
        Frac::from_u128(self.num as u128 * rhs as u128, self.den as u128)
    }
}

impl From<u64> for Frac {
    fn from(n: u64) -> Frac {
        Frac { num: n, den: 1 }
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Formats a float with six significant digits, the display convention for
/// every decimal this crate prints next to an exact value.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_on_construction() {
        let f = Frac::new(4, 10);
        assert_eq!((f.num(), f.den()), (2, 5));
        assert_eq!(Frac::new(0, 7), Frac::ZERO);
    }

    #[test]
    fn ordering_is_exact() {
        assert!(Frac::new(1, 3) < Frac::new(1, 2));
        assert!(Frac::new(2, 5) <= Frac::new(2, 5));
        assert!(Frac::new(7, 3) > Frac::ONE);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(Frac::new(1, 6) + Frac::new(1, 3), Frac::new(1, 2));
        assert_eq!(Frac::new(2, 5) * 3, Frac::new(6, 5));
        assert_eq!(Frac::new(1, 4) * Frac::new(2, 3), Frac::new(1, 6));
        assert_eq!(
            Frac::new(1, 2).saturating_sub(Frac::new(1, 3)),
            Frac::new(1, 6)
        );
        assert_eq!(Frac::new(1, 3).saturating_sub(Frac::new(1, 2)), Frac::ZERO);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Frac::parse("2/5").unwrap(), Frac::new(2, 5));
        assert_eq!(Frac::parse("0.05").unwrap(), Frac::new(1, 20));
        assert_eq!(Frac::parse(".5").unwrap(), Frac::new(1, 2));
        assert_eq!(Frac::parse("3").unwrap(), Frac::new(3, 1));
        assert!(Frac::parse("1/0").is_err());
        assert!(Frac::parse("a.b").is_err());
    }

    #[test]
    fn displays_reduced() {
        assert_eq!(Frac::new(2, 5).to_string(), "2/5");
        assert_eq!(Frac::ZERO.to_string(), "0");
        assert_eq!(Frac::new(3, 1).to_string(), "3");
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.4), "0.400000");
        assert_eq!(sig6(0.000123456789), "0.000123457");
        assert_eq!(sig6(0.0), "0.000000");
        assert_eq!(sig6(12.5), "12.5000");
    }
}
