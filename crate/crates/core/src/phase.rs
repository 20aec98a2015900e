//! Exact spider phases, stored as reduced rational multiples of π in `[0, 2π)`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

/// Default cap on the denominator accepted when converting a floating point
/// angle to an exact phase.
pub const DEFAULT_MAX_DENOMINATOR: i64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error("invalid phase literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in phase `{0}`")]
    ZeroDenominator(String),
    #[error("angle {0} is not a rational multiple of pi with denominator <= {1}")]
    NotRational(f64, i64),
}

/// A phase `numerator/denominator · π`, always reduced and normalised so that
/// `0 <= numerator/denominator < 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };
    pub const PI: Phase = Phase { num: 1, den: 1 };
    pub const HALF_PI: Phase = Phase { num: 1, den: 2 };
    pub const MINUS_HALF_PI: Phase = Phase { num: 3, den: 2 };
    pub const QUARTER_PI: Phase = Phase { num: 1, den: 4 };

    /// Builds `num/den · π`, reducing and normalising. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase denominator must be non-zero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num, den).max(1);
        num /= g;
        den /= g;
        num = num.rem_euclid(2 * den);
        if num == 0 {
            den = 1;
        }
        Phase { num, den }
    }

    /// `k · π/2`.
    pub fn quarter_turns(k: i64) -> Phase {
        Phase::new(k, 2)
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn denominator(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_pauli(self) -> bool {
        self.den == 1
    }

    pub fn is_clifford(self) -> bool {
        self.den <= 2
    }

    pub fn is_proper_clifford(self) -> bool {
        self.den == 2
    }

    /// Angle in radians, in `[0, 2π)`.
    pub fn to_radians(self) -> f64 {
        self.num as f64 / self.den as f64 * std::f64::consts::PI
    }

    /// Recovers an exact phase from an angle in radians, using a continued
    /// fraction expansion of `radians / π` with denominators up to `max_den`.
    pub fn from_radians(radians: f64, max_den: i64) -> Result<Phase, PhaseError> {
        let x = radians / std::f64::consts::PI;
        if !x.is_finite() {
            return Err(PhaseError::NotRational(radians, max_den));
        }
        let (n, d) = best_rational(x, max_den);
        if (n as f64 / d as f64 - x).abs() > 1e-9 * x.abs().max(1.0) {
            return Err(PhaseError::NotRational(radians, max_den));
        }
        Ok(Phase::new(n, d))
    }

    /// For Clifford phases, the number of quarter turns in `0..4`.
    pub fn as_quarter_turns(self) -> Option<i64> {
        match self.den {
            1 => Some(2 * self.num),
            2 => Some(self.num),
            _ => None,
        }
    }
}

fn best_rational(x: f64, max_den: i64) -> (i64, i64) {
    // convergents h/k of the continued fraction of x
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.saturating_mul(h1).saturating_add(h0);
        let k2 = a.saturating_mul(k1).saturating_add(k0);
        if k2 > max_den {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        (x.round() as i64, 1)
    } else {
        (h1, k1)
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        let g = gcd(self.den, rhs.den);
        let den = self.den / g * rhs.den;
        let num = self.num * (den / self.den) + rhs.num * (den / rhs.den);
        Phase::new(num, den)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.num, self.den)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}π", self.num, self.den)
    }
}

impl FromStr for Phase {
    type Err = PhaseError;

    /// Parses `"n/d"` or `"n"` (in units of π).
    fn from_str(s: &str) -> Result<Phase, PhaseError> {
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: i64 = n.parse().map_err(|_| PhaseError::Malformed(s.to_string()))?;
        let d: i64 = d.parse().map_err(|_| PhaseError::Malformed(s.to_string()))?;
        if d == 0 {
            return Err(PhaseError::ZeroDenominator(s.to_string()));
        }
        Ok(Phase::new(n, d))
    }
}

impl serde::Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Phase {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Phase, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
