//! Rational functions in one variable with exact arithmetic, kept in lowest
//! terms. Used to carry non-polynomial potentials (and criterion functions
//! derived from them) through the exact elimination pipeline.

use super::poly::Poly;
use super::Rational;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self { num, den }.reduced()
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduced(self) -> Self {
        if self.num.is_zero() {
            return Self {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&self.num, &self.den);
        let (num, den) = if g.deg() >= 1 {
            (
                self.num.exact_div(&g).expect("gcd divides"),
                self.den.exact_div(&g).expect("gcd divides"),
            )
        } else {
            (self.num, self.den)
        };
        // normalize: monic denominator
        let l = den.leading();
        Self {
            num: num.mul_scalar(&(Rational::from_integer(1.into()) / l.clone())),
            den: den.mul_scalar(&(Rational::from_integer(1.into()) / l)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            &(&self.num * &other.den) - &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero rational function");
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> Self {
        Self::new(
            &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative()),
            &self.den * &self.den,
        )
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    #[test]
    fn reduce_and_derive() {
        // (x^2 - 1)/(x - 1) reduces to x + 1
        let f = RatFunc::new(Poly::from_i64(&[-1, 0, 1]), Poly::from_i64(&[-1, 1]));
        assert_eq!(f.num(), &Poly::from_i64(&[1, 1]));
        assert_eq!(f.den(), &Poly::one());

        // d/dx (1/x) = -1/x^2
        let g = RatFunc::new(Poly::one(), Poly::x());
        let d = g.derivative();
        assert_eq!(d.num(), &Poly::from_i64(&[-1]));
        assert_eq!(d.den(), &Poly::from_i64(&[0, 0, 1]));
    }

    #[test]
    fn derivative_of_g_over_g2_linear() {
        // G/g^2 for g = x is 1/2: derivative is zero
        let g = RatFunc::from_poly(Poly::x());
        let big_g = RatFunc::from_poly(Poly::x().antiderivative());
        let q = big_g.div(&g.mul(&g));
        assert_eq!(q.derivative(), RatFunc::zero());
        let _ = rat(1, 2);
    }
}
