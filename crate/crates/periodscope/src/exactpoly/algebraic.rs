//! Real algebraic numbers as (defining polynomial, isolating interval) pairs.
//!
//! The representation supports the two exact queries the rest of the library
//! needs: refining the enclosure, and deciding the sign of another rational
//! polynomial at the number. Sign queries first rule out a shared root via a
//! gcd, after which interval evaluation must eventually become definite.

use num_traits::Zero;

use super::interval::RationalInterval;
use super::poly::Poly;
use super::roots::IsolatedRoot;
use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    poly: Poly,
    interval: RationalInterval,
    sign_lo: i8,
}

impl AlgebraicNumber {
    pub fn from_rational(r: Rational) -> Self {
        let poly = Poly::new(vec![-r.clone(), Rational::from_integer(1.into())]);
        Self {
            poly,
            interval: RationalInterval::point(r),
            sign_lo: 0,
        }
    }

    /// Wraps an isolated root of a squarefree polynomial.
    pub fn from_isolated(defining: &Poly, root: &IsolatedRoot) -> Self {
        match &root.exact {
            Some(r) => Self::from_rational(r.clone()),
            None => Self {
                sign_lo: defining.sign_at(&root.interval.lo),
                poly: defining.squarefree_part(),
                interval: root.interval.clone(),
            },
        }
    }

    pub fn interval(&self) -> &RationalInterval {
        &self.interval
    }

    pub fn defining(&self) -> &Poly {
        &self.poly
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.interval.is_point() {
            Some(&self.interval.lo)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.interval.to_f64()
    }

    /// One bisection step of the enclosure.
    pub fn refine(&mut self) {
        if self.interval.is_point() {
            return;
        }
        let m = self.interval.midpoint();
        let sm = self.poly.sign_at(&m);
        if sm == 0 {
            self.interval = RationalInterval::point(m);
            return;
        }
        if sm == self.sign_lo {
            self.interval.lo = m;
        } else {
            self.interval.hi = m;
        }
    }

    pub fn refine_to_width(&mut self, eps: &Rational) {
        while !self.interval.is_point() && &self.interval.width() > eps {
            self.refine();
        }
    }

    /// Exact sign of `q` evaluated at this algebraic number.
    pub fn sign_of(&mut self, q: &Poly) -> Result<i8> {
        if q.is_zero() {
            return Ok(0);
        }
        if let Some(r) = self.as_rational() {
            return Ok(q.sign_at(r));
        }
        // shared-root test: gcd divides the squarefree defining polynomial,
        // so it has at most one root here, detectable by an endpoint sign flip
        let d = Poly::gcd(&self.poly, q);
        if d.deg() >= 1 {
            let slo = d.sign_at(&self.interval.lo);
            let shi = d.sign_at(&self.interval.hi);
            if slo == 0 || shi == 0 {
                return Err(Error::Internal(
                    "isolating interval endpoint is a root of the defining factor".into(),
                ));
            }
            if slo != shi {
                return Ok(0);
            }
        }
        for _ in 0..4096 {
            if let Some(s) = q.eval_interval(&self.interval).definite_sign() {
                return Ok(s);
            }
            self.refine();
            if let Some(r) = self.as_rational() {
                return Ok(q.sign_at(r));
            }
        }
        Err(Error::Internal(
            "sign refinement did not separate from zero".into(),
        ))
    }

    pub fn cmp_rational(&mut self, r: &Rational) -> Result<std::cmp::Ordering> {
        let q = Poly::new(vec![-r.clone(), Rational::from_integer(1.into())]);
        Ok(match self.sign_of(&q)? {
            0 => std::cmp::Ordering::Equal,
            1 => std::cmp::Ordering::Greater,
            _ => std::cmp::Ordering::Less,
        })
    }
}

/// Compares `p(a)` with `q(b)` for two algebraic numbers by interval
/// refinement. Fails if the two values cannot be separated (they may be
/// exactly equal, which this helper does not decide).
pub fn cmp_poly_values(
    a: &mut AlgebraicNumber,
    p: &Poly,
    b: &mut AlgebraicNumber,
    q: &Poly,
) -> Result<std::cmp::Ordering> {
    for _ in 0..512 {
        let ia = p.eval_interval(a.interval());
        let ib = q.eval_interval(b.interval());
        if ia.is_disjoint(&ib) {
            return Ok(if ia.hi < ib.lo {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            });
        }
        a.refine();
        b.refine();
    }
    Err(Error::IsolationInconclusive(
        "could not separate two algebraic values".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, roots};

    #[test]
    fn sqrt2_signs() {
        let p = Poly::from_i64(&[-2, 0, 1]);
        let roots = roots::isolate_roots(&p, &rat(0, 1), &rat(2, 1), &rat(1, 16)).unwrap();
        let mut a = AlgebraicNumber::from_isolated(&p, &roots[0]);
        // sign of x - 1 at sqrt2 is positive, of x - 3/2 negative
        assert_eq!(a.sign_of(&Poly::new(vec![rat(-1, 1), rat(1, 1)])).unwrap(), 1);
        assert_eq!(a.sign_of(&Poly::new(vec![rat(-3, 2), rat(1, 1)])).unwrap(), -1);
        // x^2 - 2 itself vanishes there
        assert_eq!(a.sign_of(&p).unwrap(), 0);
        // and (x^2-2)(x+5) vanishes too (shared factor)
        let q = &p * &Poly::from_i64(&[5, 1]);
        assert_eq!(a.sign_of(&q).unwrap(), 0);
    }

    #[test]
    fn refine_converges() {
        let p = Poly::from_i64(&[-2, 0, 1]);
        let roots = roots::isolate_roots(&p, &rat(0, 1), &rat(2, 1), &rat(1, 4)).unwrap();
        let mut a = AlgebraicNumber::from_isolated(&p, &roots[0]);
        a.refine_to_width(&rat(1, 1 << 30));
        assert!((a.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-8);
    }
}
