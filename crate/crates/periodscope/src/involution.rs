//! The involution sigma pairing equal energy levels across the center, the
//! balance operator, and the criterion functions delta, phi, and the Loud
//! ratio G/(x - sigma(x))^2.
//!
//! For potentials with exact forms the criterion functions are carried as
//! reduced rational functions, which removes the 0/0 at the origin exactly;
//! the purely numeric path falls back to a two-term Taylor expansion of
//! delta near 0 where the raw closed form cancels catastrophically.

use crate::error::{Error, Result};
use crate::exactpoly::{Poly, RatFunc, Rational};
use crate::numeric::solve_bracketed;
use crate::potential::{PeriodAnnulus, Potential};

/// Criterion functions whose balance drives the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionKind {
    Delta,
    Phi,
    GOverG2,
}

/// Exact reduced criterion fractions.
#[derive(Clone)]
pub struct ExactCriteria {
    pub g: RatFunc,
    pub big_g: RatFunc,
    /// delta = (G/g^2)'
    pub delta: RatFunc,
    /// phi = delta' * G/g - delta/2
    pub phi: RatFunc,
    /// q = G/g^2
    pub q: RatFunc,
}

impl ExactCriteria {
    pub fn build(g: RatFunc, big_g: RatFunc) -> Self {
        let g2 = g.mul(&g);
        let q = big_g.div(&g2);
        let delta = q.derivative();
        let half = RatFunc::from_poly(Poly::constant(crate::exactpoly::rat(1, 2)));
        let phi = delta
            .derivative()
            .mul(&big_g.div(&g))
            .sub(&half.mul(&delta));
        Self { g, big_g, delta, phi, q }
    }
}

struct F64Frac {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl F64Frac {
    fn of(r: &RatFunc) -> Self {
        Self {
            num: r.num().to_f64_coeffs(),
            den: r.den().to_f64_coeffs(),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        crate::numeric::horner(&self.num, x) / crate::numeric::horner(&self.den, x)
    }
}

pub struct Involution<'a> {
    pot: &'a Potential,
    ann: &'a PeriodAnnulus,
    pub tol: f64,
    odd: bool,
    k: usize,
    delta0: f64,
    delta1: f64,
    exact: Option<ExactCriteria>,
    delta_f: Option<F64Frac>,
    phi_f: Option<F64Frac>,
    q_f: Option<F64Frac>,
}

/// Relative margin below x_M past which balance evaluation refuses to go;
/// the divergence at the outer boundary is asserted, never evaluated.
pub const BOUNDARY_MARGIN: f64 = 1e-9;

/// Switch radius for the two-term Taylor expansion of the numeric delta.
const TAYLOR_RADIUS: f64 = 1e-4;

impl<'a> Involution<'a> {
    pub fn new(pot: &'a Potential, ann: &'a PeriodAnnulus) -> Self {
        let odd = pot
            .poly()
            .map(|p| is_odd_poly(&p.g))
            .unwrap_or(false);
        let g1 = pot.dg(0.0);
        let g2 = pot.d2g(0.0);
        let g3 = pot.d3g(0.0);
        let (delta0, delta1) = if ann.k == 0 {
            (
                -g2 / (3.0 * g1 * g1),
                (5.0 * g2 * g2 - 3.0 * g1 * g3) / (12.0 * g1 * g1 * g1),
            )
        } else {
            (f64::NAN, f64::NAN)
        };
        let exact = pot.exact_forms().map(|f| ExactCriteria::build(f.g, f.big_g));
        let delta_f = exact.as_ref().map(|e| F64Frac::of(&e.delta));
        let phi_f = exact.as_ref().map(|e| F64Frac::of(&e.phi));
        let q_f = exact.as_ref().map(|e| F64Frac::of(&e.q));
        Self {
            pot,
            ann,
            tol: 1e-14,
            odd,
            k: ann.k,
            delta0,
            delta1,
            exact,
            delta_f,
            phi_f,
            q_f,
        }
    }

    pub fn exact_criteria(&self) -> Option<&ExactCriteria> {
        self.exact.as_ref()
    }

    pub fn is_odd_potential(&self) -> bool {
        self.odd
    }

    /// The unique z in (x_m, 0) with G(z) = G(x), for x in (0, x_M).
    pub fn sigma(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || x >= self.ann.x_big_m {
            return Err(Error::InvalidInput(format!(
                "sigma argument {} outside (0, x_M)",
                x
            )));
        }
        if self.odd {
            return Ok(-x);
        }
        let target = self.pot.big_g(x);
        let gfun = |z: f64| self.pot.big_g(z);
        // bracket [lo, 0) with G(lo) > target
        let lo = if self.ann.x_m.is_finite() {
            let xm = self.ann.x_m;
            let mut frac = 1e-3;
            let mut lo = xm + frac * (0.0 - xm).abs();
            let mut tries = 0;
            while gfun(lo) <= target && tries < 60 {
                frac *= 0.25;
                lo = xm + frac * (0.0 - xm).abs();
                tries += 1;
            }
            if gfun(lo) <= target {
                return Err(Error::NonConvergence(
                    "could not bracket sigma near x_m".into(),
                ));
            }
            lo
        } else {
            let mut lo = -1.0;
            while gfun(lo) <= target && lo > -1e154 {
                lo *= 2.0;
            }
            lo
        };
        let dfun = |z: f64| self.pot.g(z);
        solve_bracketed(gfun, Some(&dfun), lo, 0.0, target, self.tol)
    }

    /// delta = (G/g^2)' = (g^2 - 2 G g')/g^3, with the origin handled by its
    /// limit value for k = 0 and by side-signed divergence for k >= 1.
    pub fn delta(&self, x: f64) -> f64 {
        if x == 0.0 {
            return if self.k == 0 {
                self.delta0
            } else if x.is_sign_positive() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if let Some(fr) = &self.delta_f {
            return fr.eval(x);
        }
        if self.k == 0 && x.abs() < TAYLOR_RADIUS {
            return self.delta0 + self.delta1 * x;
        }
        let g = self.pot.g(x);
        let big_g = self.pot.big_g(x);
        let dg = self.pot.dg(x);
        (g * g - 2.0 * big_g * dg) / (g * g * g)
    }

    /// Exact rational evaluation of delta at a rational point (polynomial
    /// potentials and registered exact bundles).
    pub fn delta_exact(&self, x: &Rational) -> Option<Rational> {
        self.exact.as_ref().and_then(|e| e.delta.eval(x))
    }

    /// phi = delta' * G/g - delta/2, in the closed form
    /// (12 (G g')^2 - 4 g G (g'' G + g' g) - g^4) / (2 g^5).
    pub fn phi(&self, x: f64) -> f64 {
        if let Some(fr) = &self.phi_f {
            if x != 0.0 || self.k == 0 {
                return fr.eval(x);
            }
        }
        if x == 0.0 {
            return if self.k == 0 {
                -self.delta0 / 2.0
            } else {
                f64::INFINITY
            };
        }
        if self.k == 0 && x.abs() < TAYLOR_RADIUS {
            return -self.delta0 / 2.0;
        }
        let g = self.pot.g(x);
        let big_g = self.pot.big_g(x);
        let dg = self.pot.dg(x);
        let d2g = self.pot.d2g(x);
        let gg = big_g * dg;
        (12.0 * gg * gg - 4.0 * g * big_g * (d2g * big_g + dg * g) - g.powi(4))
            / (2.0 * g.powi(5))
    }

    /// G/g^2 (the ratio whose balance drives the exactness supplement).
    pub fn g_over_g2(&self, x: f64) -> f64 {
        if x == 0.0 && self.k == 0 {
            let g1 = self.pot.dg(0.0);
            return 1.0 / (2.0 * g1);
        }
        if let Some(fr) = &self.q_f {
            return fr.eval(x);
        }
        let g = self.pot.g(x);
        self.pot.big_g(x) / (g * g)
    }

    pub fn eval_criterion(&self, kind: CriterionKind, x: f64) -> f64 {
        match kind {
            CriterionKind::Delta => self.delta(x),
            CriterionKind::Phi => self.phi(x),
            CriterionKind::GOverG2 => self.g_over_g2(x),
        }
    }

    /// Balance f(x) - f(sigma(x)).
    pub fn balance(&self, kind: CriterionKind, x: f64) -> Result<f64> {
        if self.ann.x_big_m.is_finite() && x > self.ann.x_big_m * (1.0 - BOUNDARY_MARGIN) {
            return Err(Error::InvalidInput(
                "balance evaluated inside the boundary margin".into(),
            ));
        }
        let z = self.sigma(x)?;
        Ok(self.eval_criterion(kind, x) - self.eval_criterion(kind, z))
    }

    /// Loud test ratio P(x) = G(x)/(x - sigma(x))^2.
    pub fn loud_p(&self, x: f64) -> Result<f64> {
        let z = self.sigma(x)?;
        let d = x - z;
        Ok(self.pot.big_g(x) / (d * d))
    }

    /// Total derivative of P along the constraint G(x) = G(z), using the
    /// exact implicit-function slope dz/dx = g(x)/g(z).
    pub fn loud_total_derivative(&self, x: f64) -> Result<f64> {
        let z = self.sigma(x)?;
        let d = x - z;
        let g = self.pot.g(x);
        let gz = self.pot.g(z);
        let big_g = self.pot.big_g(x);
        Ok(g / (d * d) - 2.0 * big_g / (d * d * d) * (1.0 - g / gz))
    }
}

fn is_odd_poly(g: &Poly) -> bool {
    use num_traits::Zero;
    g.coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| i % 2 == 1 || c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use crate::potential::annulus;

    fn quartic_54() -> Potential {
        Potential::polynomial(Poly::new(vec![
            rat(0, 1),
            rat(1, 2),
            rat(-1, 2),
            rat(0, 1),
            rat(1, 1),
        ]))
    }

    #[test]
    fn sigma_odd_is_negation() {
        let p = Potential::polynomial(Poly::from_i64(&[0, 1, 0, -1, 0, 1]));
        let ann = annulus(&p).unwrap();
        let inv = Involution::new(&p, &ann);
        assert_eq!(inv.sigma(0.37).unwrap(), -0.37);
    }

    #[test]
    fn sigma_pairs_energy() {
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        let inv = Involution::new(&p, &ann);
        for &x in &[0.1, 0.3560526240, 0.7, 0.9] {
            let z = inv.sigma(x).unwrap();
            assert!(z > -1.0 && z < 0.0);
            assert!((p.big_g(z) - p.big_g(x)).abs() <= 1e-12 * p.big_g(x).max(1.0));
        }
        // paper-reported nodal pair
        let z = inv.sigma(0.3560526240).unwrap();
        assert!((z + 0.2935057702).abs() < 1e-8, "sigma = {}", z);
    }

    #[test]
    fn delta_linear_center_vanishes() {
        let p = Potential::polynomial(Poly::from_i64(&[0, 1]));
        let ann = annulus(&p).unwrap();
        let inv = Involution::new(&p, &ann);
        for &x in &[1e-6, 0.5, 3.0] {
            assert_eq!(inv.delta(x), 0.0);
            assert!(inv.phi(x).abs() < 1e-300);
        }
    }

    #[test]
    fn delta_at_origin_limit() {
        // quartic: delta(0) = -(1/3) g''(0)/g'(0)^2 = 4/3
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        let inv = Involution::new(&p, &ann);
        assert!((inv.delta(0.0) - 4.0 / 3.0).abs() < 1e-14);
        // reduced-fraction evaluation stays stable arbitrarily close to 0
        assert!((inv.delta(1e-9) - 4.0 / 3.0).abs() < 1e-7);
        // exact rational evaluation
        let d = inv.delta_exact(&rat(1, 2)).unwrap();
        let x = 0.5f64;
        let g = p.g(x);
        let expect = (g * g - 2.0 * p.big_g(x) * p.dg(x)) / (g * g * g);
        assert!((crate::exactpoly::rational_to_f64(&d) - expect).abs() < 1e-13);
    }

    #[test]
    fn nilpotent_delta_diverges_signed() {
        let p = Potential::polynomial(Poly::from_i64(&[0, 0, 0, 1, 1]));
        let ann = annulus(&p).unwrap();
        let inv = Involution::new(&p, &ann);
        assert!(inv.delta(1e-4) < -1e6);
        assert!(inv.delta(-1e-4) > 1e6);
    }

    #[test]
    fn balance_odd_is_twice_delta() {
        let p = Potential::polynomial(Poly::from_i64(&[0, 1, 0, -1, 0, 1]));
        let ann = annulus(&p).unwrap();
        let inv = Involution::new(&p, &ann);
        for &x in &[0.2, 0.675455402082, 2.0] {
            let b = inv.balance(CriterionKind::Delta, x).unwrap();
            assert!((b - 2.0 * inv.delta(x)).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn loud_p_linear_center() {
        let p = Potential::polynomial(Poly::from_i64(&[0, 1]));
        let ann = annulus(&p).unwrap();
        let inv = Involution::new(&p, &ann);
        for &x in &[0.3, 1.0, 5.0] {
            assert!((inv.loud_p(x).unwrap() - 0.125).abs() < 1e-13);
            assert!(inv.loud_total_derivative(x).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn phi_two_routes_agree() {
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        let inv = Involution::new(&p, &ann);
        // phi from the closed form vs delta' G/g - delta/2 by finite differences
        for i in 1..20 {
            let x = 0.045 * i as f64;
            let h = 1e-6;
            let dprime = (inv.delta(x + h) - inv.delta(x - h)) / (2.0 * h);
            let alt = dprime * p.big_g(x) / p.g(x) - inv.delta(x) / 2.0;
            let closed = inv.phi(x);
            assert!(
                (closed - alt).abs() <= 2e-4 * closed.abs().max(1.0),
                "x={} closed={} alt={}",
                x,
                closed,
                alt
            );
        }
    }
}
