//! Rational intervals and exact interval arithmetic.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use super::Rational;

/// Closed interval with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(r: Rational) -> Self {
        Self { lo: r.clone(), hi: r }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign if the whole interval is on one side of zero.
    pub fn definite_sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// True when `self` lies inside `other` (closed containment).
    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Self::new(lo, hi)
    }

    pub fn add_scalar(&self, r: &Rational) -> Self {
        Self::new(&self.lo + r, &self.hi + r)
    }

    pub fn mul_scalar(&self, r: &Rational) -> Self {
        match r.cmp(&Rational::zero()) {
            Ordering::Less => Self::new(&self.hi * r, &self.lo * r),
            _ => Self::new(&self.lo * r, &self.hi * r),
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // fall back on a scaled division for coefficients outside f64 range
        let n = r.numer();
        let d = r.denom();
        let bits = n.bits() as i64 - d.bits() as i64;
        if bits > 1023 {
            if n.sign() == num_bigint::Sign::Minus {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        } else {
            0.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    #[test]
    fn interval_mul_signs() {
        let a = RationalInterval::new(rat(-2, 1), rat(3, 1));
        let b = RationalInterval::new(rat(-1, 1), rat(5, 1));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-10, 1));
        assert_eq!(p.hi, rat(15, 1));
    }

    #[test]
    fn definite_sign() {
        assert_eq!(
            RationalInterval::new(rat(1, 3), rat(2, 1)).definite_sign(),
            Some(1)
        );
        assert_eq!(
            RationalInterval::new(rat(-1, 3), rat(2, 1)).definite_sign(),
            None
        );
    }
}
