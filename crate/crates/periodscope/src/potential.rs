//! Potentials g with primitive G, validation of the center hypotheses, and
//! the period-annulus geometry (x_m, x_M, h_s, nilpotency order, boundary
//! class).
//!
//! Polynomial potentials keep exact data alongside the f64 mirrors so the
//! downstream counting stays certified; smooth potentials are caller-supplied
//! bundles of g, its first three derivatives and G in closed form (the
//! library never differentiates numerically for criterion functions).

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{
    isolate_roots, rational_to_f64, AlgebraicNumber, Poly, RatFunc, Rational,
};
use crate::numeric::solve_bracketed;

pub type SmoothFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Exact rational-function forms of a non-polynomial potential, enabling the
/// certified elimination path for it.
#[derive(Clone)]
pub struct ExactForms {
    pub g: RatFunc,
    pub big_g: RatFunc,
}

#[derive(Clone)]
pub struct SmoothBundle {
    pub name: String,
    pub g: SmoothFn,
    pub dg: SmoothFn,
    pub d2g: SmoothFn,
    pub d3g: SmoothFn,
    pub big_g: SmoothFn,
    /// Open interval on which the bundle is defined.
    pub domain: (f64, f64),
    pub exact: Option<ExactForms>,
}

/// Exact polynomial potential with cached derivatives and f64 mirrors.
#[derive(Clone)]
pub struct PolyPotential {
    pub g: Poly,
    pub big_g: Poly,
    pub dg: Poly,
    pub d2g: Poly,
    pub d3g: Poly,
    gf: Vec<f64>,
    big_gf: Vec<f64>,
    dgf: Vec<f64>,
}

impl PolyPotential {
    pub fn new(g: Poly) -> Self {
        let big_g = g.antiderivative();
        let dg = g.derivative();
        let d2g = dg.derivative();
        let d3g = d2g.derivative();
        Self {
            gf: g.to_f64_coeffs(),
            big_gf: big_g.to_f64_coeffs(),
            dgf: dg.to_f64_coeffs(),
            g,
            big_g,
            dg,
            d2g,
            d3g,
        }
    }
}

#[derive(Clone)]
pub enum Potential {
    Polynomial(PolyPotential),
    Smooth(SmoothBundle),
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Polynomial(p) => write!(f, "Polynomial({:?})", p.g),
            Potential::Smooth(s) => write!(f, "Smooth({})", s.name),
        }
    }
}

impl Potential {
    pub fn polynomial(g: Poly) -> Self {
        Potential::Polynomial(PolyPotential::new(g))
    }

    pub fn poly(&self) -> Option<&PolyPotential> {
        match self {
            Potential::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// Exact rational-function forms of (g, G) when available.
    pub fn exact_forms(&self) -> Option<ExactForms> {
        match self {
            Potential::Polynomial(p) => Some(ExactForms {
                g: RatFunc::from_poly(p.g.clone()),
                big_g: RatFunc::from_poly(p.big_g.clone()),
            }),
            Potential::Smooth(s) => s.exact.clone(),
        }
    }

    pub fn g(&self, x: f64) -> f64 {
        match self {
            Potential::Polynomial(p) => crate::numeric::horner(&p.gf, x),
            Potential::Smooth(s) => (s.g)(x),
        }
    }

    pub fn big_g(&self, x: f64) -> f64 {
        match self {
            Potential::Polynomial(p) => crate::numeric::horner(&p.big_gf, x),
            Potential::Smooth(s) => (s.big_g)(x),
        }
    }

    pub fn dg(&self, x: f64) -> f64 {
        match self {
            Potential::Polynomial(p) => crate::numeric::horner(&p.dgf, x),
            Potential::Smooth(s) => (s.dg)(x),
        }
    }

    pub fn d2g(&self, x: f64) -> f64 {
        match self {
            Potential::Polynomial(p) => p.d2g.eval_f64(x),
            Potential::Smooth(s) => (s.d2g)(x),
        }
    }

    pub fn d3g(&self, x: f64) -> f64 {
        match self {
            Potential::Polynomial(p) => p.d3g.eval_f64(x),
            Potential::Smooth(s) => (s.d3g)(x),
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            Potential::Polynomial(_) => (f64::NEG_INFINITY, f64::INFINITY),
            Potential::Smooth(s) => s.domain,
        }
    }
}

const SMOOTH_DERIV_TOL: f64 = 1e-12;

/// Checks the center hypotheses and returns the nilpotency order k: the
/// first nonvanishing derivative of g at 0 must have odd order 2k+1 and be
/// positive.
pub fn validate(p: &Potential) -> Result<usize> {
    match p {
        Potential::Polynomial(pp) => {
            let val = pp.g.valuation().ok_or(Error::ZeroPolynomial)?;
            if val % 2 == 0 {
                return Err(Error::NotACenter(format!(
                    "first nonvanishing derivative of g at 0 has even order {}",
                    val
                )));
            }
            if pp.g.coeff(val).is_negative() {
                return Err(Error::NotACenter(format!(
                    "g^({})(0) < 0 at the origin",
                    val
                )));
            }
            Ok((val - 1) / 2)
        }
        Potential::Smooth(s) => {
            if (s.g)(0.0).abs() > SMOOTH_DERIV_TOL {
                return Err(Error::NotACenter("g(0) != 0".into()));
            }
            let d1 = (s.dg)(0.0);
            let d2 = (s.d2g)(0.0);
            let d3 = (s.d3g)(0.0);
            let k = if d1 > SMOOTH_DERIV_TOL {
                0
            } else if d1.abs() <= SMOOTH_DERIV_TOL && d2.abs() <= SMOOTH_DERIV_TOL && d3 > SMOOTH_DERIV_TOL
            {
                1
            } else {
                return Err(Error::NotACenter(
                    "cannot establish an odd positive leading derivative from g', g'', g'''".into(),
                ));
            };
            // sign certification by dense sampling on the declared domain
            let (lo, hi) = s.domain;
            for &(a, b, side) in &[(1e-6, hi, 1.0f64), (1e-6, -lo, -1.0)] {
                let b = if b.is_finite() { b * (1.0 - 1e-9) } else { 1e6 };
                if b <= a {
                    continue;
                }
                for t in crate::numeric::log_grid(a, b, 512) {
                    let x = side * t;
                    let v = x * (s.g)(x);
                    if v <= 0.0 && (s.g)(x).abs() > SMOOTH_DERIV_TOL {
                        return Err(Error::AssumptionViolated(x, "x*g(x) <= 0".into()));
                    }
                }
            }
            Ok(k)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryType {
    SaddlePolycycle,
    UnboundedSuperlinear,
    UnboundedSublinear,
    UnboundedSemilinear,
}

/// Exact value of the outer energy level.
#[derive(Clone, Debug)]
pub enum EnergyBound {
    Infinite,
    Rational(Rational),
    /// h_s = G(root) for an irrational zero of g.
    AtRoot(AlgebraicNumber),
}

/// Exact annulus data for the certified pipeline (polynomial potentials).
#[derive(Clone)]
pub struct AnnulusExact {
    pub g: Poly,
    pub big_g: Poly,
    /// Nearest zero of g left of the origin, if any.
    pub neg_root: Option<AlgebraicNumber>,
    /// Nearest zero of g right of the origin, if any.
    pub pos_root: Option<AlgebraicNumber>,
    pub h_s: EnergyBound,
    /// x_M as an algebraic number when h_s has a rational value.
    pub x_big_m: Option<AlgebraicNumber>,
    /// x_m likewise.
    pub x_small_m: Option<AlgebraicNumber>,
}

/// Geometry of the period annulus.
#[derive(Clone)]
pub struct PeriodAnnulus {
    pub k: usize,
    pub x_m: f64,
    pub x_big_m: f64,
    pub h_s: f64,
    pub boundary: BoundaryType,
    pub exact: Option<AnnulusExact>,
}

impl fmt::Debug for PeriodAnnulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PeriodAnnulus {{ k: {}, x_m: {}, x_M: {}, h_s: {}, boundary: {:?} }}",
            self.k, self.x_m, self.x_big_m, self.h_s, self.boundary
        )
    }
}

/// Energy level inside the annulus with its two turning points.
#[derive(Clone, Copy, Debug)]
pub struct EnergyLevel {
    pub h: f64,
    pub x_minus: f64,
    pub x_plus: f64,
}

fn upgrade_to_rational(g: &Poly, alg: AlgebraicNumber, rats: &[Rational]) -> AlgebraicNumber {
    if alg.as_rational().is_some() {
        return alg;
    }
    for r in rats {
        if alg.interval().contains(r) && g.eval(r).is_zero() {
            return AlgebraicNumber::from_rational(r.clone());
        }
    }
    alg
}

fn is_odd_poly(g: &Poly) -> bool {
    g.coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| i % 2 == 1 || c.is_zero())
}

/// Computes the period-annulus geometry. Requires `validate` to have passed.
pub fn annulus(p: &Potential) -> Result<PeriodAnnulus> {
    let k = validate(p)?;
    match p {
        Potential::Polynomial(pp) => annulus_polynomial(pp, k),
        Potential::Smooth(s) => annulus_smooth(s, k),
    }
}

fn annulus_polynomial(pp: &PolyPotential, k: usize) -> Result<PeriodAnnulus> {
    let g = &pp.g;
    let big_g = &pp.big_g;
    let eps = crate::exactpoly::default_eps();
    let bound = g.cauchy_bound() + Rational::from_integer(1.into());
    let rats = g.rational_roots();

    let neg = isolate_roots(g, &-bound.clone(), &Rational::zero(), &eps)?
        .into_iter()
        .last()
        .map(|r| upgrade_to_rational(g, AlgebraicNumber::from_isolated(&g.squarefree_part(), &r), &rats));
    let pos = isolate_roots(g, &Rational::zero(), &bound, &eps)?
        .into_iter()
        .next()
        .map(|r| upgrade_to_rational(g, AlgebraicNumber::from_isolated(&g.squarefree_part(), &r), &rats));

    let value_of = |root: &AlgebraicNumber| -> EnergyBound {
        match root.as_rational() {
            Some(r) => EnergyBound::Rational(big_g.eval(r)),
            None => EnergyBound::AtRoot(root.clone()),
        }
    };

    let h_s = match (&neg, &pos) {
        (None, None) => EnergyBound::Infinite,
        (Some(a), None) => value_of(a),
        (None, Some(b)) => value_of(b),
        (Some(a), Some(b)) => {
            if is_odd_poly(g) {
                // even G: both sides reach the same level
                value_of(b)
            } else {
                pick_min_side(big_g, a.clone(), b.clone())?
            }
        }
    };

    // f64 level
    let h_s_f64 = match &h_s {
        EnergyBound::Infinite => f64::INFINITY,
        EnergyBound::Rational(r) => rational_to_f64(r),
        EnergyBound::AtRoot(root) => {
            let mut root = root.clone();
            root.refine_to_width(&crate::exactpoly::rat(1, 1i64 << 48));
            big_g.eval_f64(root.to_f64())
        }
    };

    // exact x_M / x_m when the level is rational
    let tight = Rational::new(1.into(), num_bigint::BigInt::from(1u128 << 40));
    let (x_big_m_alg, x_small_m_alg) = match &h_s {
        EnergyBound::Rational(hv) => {
            let level = &(big_g.clone()) - &Poly::constant(hv.clone());
            let up = pos
                .as_ref()
                .map(|b| b.interval().hi.clone())
                .unwrap_or_else(|| level.cauchy_bound() + Rational::from_integer(1.into()));
            let dn = neg
                .as_ref()
                .map(|a| a.interval().lo.clone())
                .unwrap_or_else(|| -(level.cauchy_bound() + Rational::from_integer(1.into())));
            let xm_pos = isolate_roots(&level, &Rational::zero(), &up, &tight)?
                .into_iter()
                .next()
                .map(|r| AlgebraicNumber::from_isolated(&level.squarefree_part(), &r));
            let xm_neg = isolate_roots(&level, &dn, &Rational::zero(), &tight)?
                .into_iter()
                .last()
                .map(|r| AlgebraicNumber::from_isolated(&level.squarefree_part(), &r));
            (xm_pos, xm_neg)
        }
        EnergyBound::AtRoot(root) => {
            if is_odd_poly(g) {
                // x_M is the positive g-zero itself; x_m its mirror
                let pos_is_root = pos.clone();
                (pos_is_root, neg.clone())
            } else {
                (None, None)
            }
        }
        EnergyBound::Infinite => (None, None),
    };

    let x_big_m = x_big_m_alg
        .as_ref()
        .map(|a| {
            let mut a = a.clone();
            a.refine_to_width(&tight);
            a.to_f64()
        })
        .unwrap_or_else(|| {
            if h_s_f64.is_finite() {
                numeric_level_point(pp, h_s_f64, true, pos.as_ref())
            } else {
                f64::INFINITY
            }
        });
    let x_m = x_small_m_alg
        .as_ref()
        .map(|a| {
            let mut a = a.clone();
            a.refine_to_width(&tight);
            a.to_f64()
        })
        .unwrap_or_else(|| {
            if h_s_f64.is_finite() {
                numeric_level_point(pp, h_s_f64, false, neg.as_ref())
            } else {
                f64::NEG_INFINITY
            }
        });

    let boundary = if h_s_f64.is_finite() {
        BoundaryType::SaddlePolycycle
    } else if g.deg() >= 2 {
        BoundaryType::UnboundedSuperlinear
    } else {
        BoundaryType::UnboundedSemilinear
    };

    Ok(PeriodAnnulus {
        k,
        x_m,
        x_big_m,
        h_s: h_s_f64,
        boundary,
        exact: Some(AnnulusExact {
            g: g.clone(),
            big_g: big_g.clone(),
            neg_root: neg,
            pos_root: pos,
            h_s,
            x_big_m: x_big_m_alg,
            x_small_m: x_small_m_alg,
        }),
    })
}

/// Picks min(G(a), G(b)) with exact tie handling where possible.
fn pick_min_side(
    big_g: &Poly,
    mut a: AlgebraicNumber,
    mut b: AlgebraicNumber,
) -> Result<EnergyBound> {
    use std::cmp::Ordering;
    let val = |r: &AlgebraicNumber| r.as_rational().map(|x| big_g.eval(x));
    match (val(&a), val(&b)) {
        (Some(ga), Some(gb)) => Ok(EnergyBound::Rational(ga.min(gb))),
        (Some(ga), None) => {
            let q = &big_g.clone() - &Poly::constant(ga.clone());
            match b.sign_of(&q)? {
                -1 => Ok(EnergyBound::AtRoot(b)),
                _ => Ok(EnergyBound::Rational(ga)),
            }
        }
        (None, Some(gb)) => {
            let q = &big_g.clone() - &Poly::constant(gb.clone());
            match a.sign_of(&q)? {
                -1 => Ok(EnergyBound::AtRoot(a)),
                _ => Ok(EnergyBound::Rational(gb)),
            }
        }
        (None, None) => {
            match crate::exactpoly::algebraic::cmp_poly_values(&mut a, big_g, &mut b, big_g) {
                Ok(Ordering::Less) => Ok(EnergyBound::AtRoot(a)),
                Ok(_) => Ok(EnergyBound::AtRoot(b)),
                Err(_) => Err(Error::IsolationInconclusive(
                    "could not order the two boundary energy levels".into(),
                )),
            }
        }
    }
}

fn numeric_level_point(
    pp: &PolyPotential,
    hv: f64,
    positive: bool,
    root: Option<&AlgebraicNumber>,
) -> f64 {
    let gval = |x: f64| crate::numeric::horner(&pp.big_gf, x);
    let hi = root.map(|r| r.to_f64()).unwrap_or_else(|| {
        let mut b = 1.0;
        while gval(if positive { b } else { -b }) < hv && b < 1e12 {
            b *= 2.0;
        }
        b
    });
    let hi = if positive { hi.abs() } else { -hi.abs() };
    solve_bracketed(gval, None, 0.0, hi, hv, 1e-15).unwrap_or(hi)
}

fn annulus_smooth(s: &SmoothBundle, k: usize) -> Result<PeriodAnnulus> {
    let (dlo, dhi) = s.domain;
    let find_zero = |positive: bool| -> Option<f64> {
        let limit = if positive {
            if dhi.is_finite() { dhi * (1.0 - 1e-12) } else { 1e9 }
        } else if dlo.is_finite() {
            dlo * (1.0 - 1e-12)
        } else {
            -1e9
        };
        let grid = crate::numeric::log_grid(1e-9, limit.abs(), 2048);
        let mut prev = if positive { 1e-12 } else { -1e-12 };
        for t in grid {
            let x = if positive { t } else { -t };
            let v = (s.g)(x);
            if v == 0.0 {
                return Some(x);
            }
            if v.signum() != (s.g)(prev).signum() {
                return solve_bracketed(|y| (s.g)(y), None, prev.min(x), prev.max(x), 0.0, 1e-14).ok();
            }
            prev = x;
        }
        None
    };
    let zpos = find_zero(true);
    let zneg = find_zero(false);

    let side_level = |z: Option<f64>, positive: bool| -> f64 {
        match z {
            Some(x0) => (s.big_g)(x0),
            None => {
                // sample G toward the open end; divergence means an infinite level
                let end = if positive { dhi } else { dlo };
                let probe = if end.is_finite() {
                    end - (if positive { 1e-9 } else { -1e-9 }) * end.abs().max(1.0)
                } else if positive {
                    1e9
                } else {
                    -1e9
                };
                let v = (s.big_g)(probe);
                if v > 1e9 {
                    f64::INFINITY
                } else {
                    v
                }
            }
        }
    };
    let lev_pos = side_level(zpos, true);
    let lev_neg = side_level(zneg, false);
    let h_s = lev_pos.min(lev_neg);

    let x_big_m = if h_s.is_finite() {
        let hi = zpos.unwrap_or(if dhi.is_finite() { dhi * (1.0 - 1e-12) } else { 1e9 });
        solve_bracketed(|x| (s.big_g)(x), None, 0.0, hi, h_s, 1e-14).unwrap_or(hi)
    } else if dhi.is_finite() {
        dhi
    } else {
        f64::INFINITY
    };
    let x_m = if h_s.is_finite() {
        let lo = zneg.unwrap_or(if dlo.is_finite() { dlo * (1.0 - 1e-12) } else { -1e9 });
        solve_bracketed(|x| (s.big_g)(x), None, lo, 0.0, h_s, 1e-14).unwrap_or(lo)
    } else if dlo.is_finite() {
        dlo
    } else {
        f64::NEG_INFINITY
    };

    let boundary = if h_s.is_finite() {
        BoundaryType::SaddlePolycycle
    } else {
        // growth class of g(x)/x on an unbounded side
        let probe = |x: f64| (s.g)(x) / x;
        let x0 = if dhi.is_infinite() { 1e6 } else { -1e6 };
        let r = probe(x0).abs();
        if r > 1e3 {
            BoundaryType::UnboundedSuperlinear
        } else if r < 1e-3 {
            BoundaryType::UnboundedSublinear
        } else {
            BoundaryType::UnboundedSemilinear
        }
    };

    Ok(PeriodAnnulus {
        k,
        x_m,
        x_big_m,
        h_s,
        boundary,
        exact: None,
    })
}

/// Turning points of the orbit at energy h: the two solutions of G(x) = h
/// bracketing the origin, polished to relative tolerance 1e-14.
pub fn turning_points(p: &Potential, ann: &PeriodAnnulus, h: f64) -> Result<EnergyLevel> {
    if !(h > 0.0) || !(h < ann.h_s) {
        return Err(Error::EnergyOutOfRange { h, hs: ann.h_s });
    }
    let gfun = |x: f64| p.big_g(x);
    let dfun = |x: f64| p.g(x);

    let upper = if ann.x_big_m.is_finite() {
        ann.x_big_m
    } else {
        let mut b = 1.0;
        while gfun(b) < h && b < 1e154 {
            b *= 2.0;
        }
        b
    };
    let x_plus = solve_bracketed(gfun, Some(&dfun), 0.0, upper, h, 1e-14)?;

    let lower = if ann.x_m.is_finite() {
        // keep strictly inside the domain for smooth bundles with poles
        match p {
            Potential::Smooth(_) => ann.x_m + 1e-14 * ann.x_m.abs().max(1.0),
            _ => ann.x_m,
        }
    } else {
        let mut b = -1.0;
        while gfun(b) < h && b > -1e154 {
            b *= 2.0;
        }
        b
    };
    let x_minus = solve_bracketed(gfun, Some(&dfun), lower, 0.0, h, 1e-14)?;
    Ok(EnergyLevel { h, x_minus, x_plus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn quintic(k: Rational) -> Potential {
        // g = x + k x^3 + x^5
        Potential::polynomial(Poly::new(vec![
            rat(0, 1),
            rat(1, 1),
            rat(0, 1),
            k,
            rat(0, 1),
            rat(1, 1),
        ]))
    }

    fn quartic_54() -> Potential {
        // g = x(x+1)(x^2 - x + 1/2) = x/2 - x^2/2 + x^4
        Potential::polynomial(Poly::new(vec![
            rat(0, 1),
            rat(1, 2),
            rat(-1, 2),
            rat(0, 1),
            rat(1, 1),
        ]))
    }

    #[test]
    fn validate_orders() {
        assert_eq!(validate(&quintic(rat(1, 1))).unwrap(), 0);
        // nilpotent: g = x^3(x+1) = x^3 + x^4
        let nil = Potential::polynomial(Poly::from_i64(&[0, 0, 0, 1, 1]));
        assert_eq!(validate(&nil).unwrap(), 1);
        // not a center: g = x^2
        let bad = Potential::polynomial(Poly::from_i64(&[0, 0, 1]));
        assert!(matches!(validate(&bad), Err(Error::NotACenter(_))));
        // negative leading derivative: g = -x
        let bad2 = Potential::polynomial(Poly::from_i64(&[0, -1]));
        assert!(matches!(validate(&bad2), Err(Error::NotACenter(_))));
    }

    #[test]
    fn annulus_bounded_example() {
        let ann = annulus(&quartic_54()).unwrap();
        assert_eq!(ann.k, 0);
        assert!((ann.x_m + 1.0).abs() < 1e-12);
        assert!((ann.h_s - 13.0 / 60.0).abs() < 1e-15);
        assert!((ann.x_big_m - 0.9239964237445605).abs() < 1e-9, "{}", ann.x_big_m);
        assert_eq!(ann.boundary, BoundaryType::SaddlePolycycle);
        let ex = ann.exact.as_ref().unwrap();
        assert!(matches!(&ex.h_s, EnergyBound::Rational(r) if *r == rat(13, 60)));
    }

    #[test]
    fn annulus_global_center() {
        let ann = annulus(&quintic(rat(0, 1))).unwrap();
        assert!(ann.x_m.is_infinite() && ann.x_big_m.is_infinite());
        assert!(ann.h_s.is_infinite());
        assert_eq!(ann.boundary, BoundaryType::UnboundedSuperlinear);
    }

    #[test]
    fn annulus_linear_center() {
        let ann = annulus(&Potential::polynomial(Poly::from_i64(&[0, 1]))).unwrap();
        assert!(ann.h_s.is_infinite());
        assert_eq!(ann.boundary, BoundaryType::UnboundedSemilinear);
    }

    #[test]
    fn turning_points_linear() {
        let p = Potential::polynomial(Poly::from_i64(&[0, 1]));
        let ann = annulus(&p).unwrap();
        let lev = turning_points(&p, &ann, 0.5).unwrap();
        assert!((lev.x_plus - 1.0).abs() < 1e-12);
        assert!((lev.x_minus + 1.0).abs() < 1e-12);
    }

    #[test]
    fn turning_points_defining_equation() {
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        for h in [1e-6, 0.01, 0.1, 13.0 / 60.0 * (1.0 - 1e-9)] {
            let lev = turning_points(&p, &ann, h).unwrap();
            assert!(lev.x_minus < 0.0 && lev.x_plus > 0.0);
            assert!((p.big_g(lev.x_plus) - h).abs() <= 1e-12 * h.max(1.0));
            assert!((p.big_g(lev.x_minus) - h).abs() <= 1e-12 * h.max(1.0));
        }
    }

    #[test]
    fn turning_points_reject_out_of_range() {
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        assert!(turning_points(&p, &ann, 0.3).is_err());
        assert!(turning_points(&p, &ann, -0.1).is_err());
    }
}
