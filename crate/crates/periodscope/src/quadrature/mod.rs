//! Evaluation of the period function T(h) and its first two derivatives.
//!
//! The default route for T is the angular substitution G(x) = h sin^(2k+2)θ,
//! which turns the singular energy integral into a smooth one on
//! [-π/2, π/2]; the cross-check route applies tanh-sinh quadrature directly
//! to the singular form. T' and T'' integrate the balance of delta and phi
//! against g/sqrt(h - G) on (0, x_+(h)).

pub mod fractional;
pub mod rules;

use crate::error::{Error, Result};
use crate::involution::{CriterionKind, Involution};
use crate::numeric::solve_bracketed;
use crate::potential::{turning_points, PeriodAnnulus, Potential};
use rules::{adaptive_gl, tanh_sinh_strict};

/// One evaluated sample of the period function.
#[derive(Clone, Copy, Debug)]
pub struct PeriodSample {
    pub h: f64,
    pub t: f64,
    pub tp: Option<f64>,
    pub tpp: Option<f64>,
    pub method: &'static str,
    pub error: f64,
}

/// Default relative tolerance for the period quadratures.
pub const PERIOD_TOL: f64 = 1e-10;

fn check_energy(ann: &PeriodAnnulus, h: f64) -> Result<()> {
    if !(h > 0.0) || !(h < ann.h_s) {
        return Err(Error::EnergyOutOfRange { h, hs: ann.h_s });
    }
    Ok(())
}

/// Solves G(x) = target with sign(x) matching `positive`, on the monotone
/// side of the origin. The bracket endpoint `limit` must satisfy
/// G(limit) >= target.
fn level_point(pot: &Potential, target: f64, positive: bool, limit: f64) -> Result<f64> {
    if target == 0.0 {
        return Ok(0.0);
    }
    let g = |x: f64| pot.big_g(x);
    let dg = |x: f64| pot.g(x);
    if positive {
        solve_bracketed(g, Some(&dg), 0.0, limit, target, 1e-14)
    } else {
        solve_bracketed(g, Some(&dg), limit, 0.0, target, 1e-14)
    }
}

/// T(h) by the angular substitution (default method).
pub fn period(pot: &Potential, ann: &PeriodAnnulus, h: f64) -> Result<PeriodSample> {
    check_energy(ann, h)?;
    let k = ann.k as i32;
    let lev = turning_points(pot, ann, h)?;
    let integrand = |theta: f64| -> f64 {
        let s = theta.sin();
        if s == 0.0 {
            return f64::NAN; // never hit by the even-count panels
        }
        let target = h * s.powi(2 * k + 2);
        let x = if s > 0.0 {
            level_point(pot, target, true, lev.x_plus)
        } else {
            level_point(pot, target, false, lev.x_minus)
        };
        let x = match x {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let mut denom_sum = 0.0;
        let s2 = s * s;
        let mut p = 1.0;
        for _ in 0..=k {
            denom_sum += p;
            p *= s2;
        }
        s.powi(2 * k + 1) / (pot.g(x) * denom_sum.sqrt())
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let (v, e) = adaptive_gl(&integrand, -half_pi, half_pi, PERIOD_TOL)?;
    let t = 2.0 * (k as f64 + 1.0) * (2.0 * h).sqrt() * v;
    Ok(PeriodSample {
        h,
        t,
        tp: None,
        tpp: None,
        method: "theta-gauss-legendre",
        error: e * 2.0 * (k as f64 + 1.0) * (2.0 * h).sqrt(),
    })
}

/// T(h) by tanh-sinh quadrature directly on the singular energy integral
/// (cross-check method).
pub fn period_tanh_sinh(pot: &Potential, ann: &PeriodAnnulus, h: f64) -> Result<PeriodSample> {
    check_energy(ann, h)?;
    let lev = turning_points(pot, ann, h)?;
    let integrand = |x: f64| 1.0 / (h - pot.big_g(x)).max(0.0).sqrt();
    let (v, e) = tanh_sinh_strict(&integrand, lev.x_minus, lev.x_plus, 1e-11)?;
    Ok(PeriodSample {
        h,
        t: std::f64::consts::SQRT_2 * v,
        tp: None,
        tpp: None,
        method: "tanh-sinh-direct",
        error: std::f64::consts::SQRT_2 * e,
    })
}

/// T'(h) = (1/(sqrt(2) h)) int_0^{x_+(h)} B_sigma(delta)(x) g(x)/sqrt(h-G) dx.
pub fn dperiod(pot: &Potential, ann: &PeriodAnnulus, h: f64) -> Result<f64> {
    check_energy(ann, h)?;
    let inv = Involution::new(pot, ann);
    dperiod_with(&inv, pot, ann, h)
}

/// Same as `dperiod` with a caller-provided involution (avoids rebuilding
/// the criterion fractions inside grid sweeps).
pub fn dperiod_with(
    inv: &Involution,
    pot: &Potential,
    ann: &PeriodAnnulus,
    h: f64,
) -> Result<f64> {
    check_energy(ann, h)?;
    let lev = turning_points(pot, ann, h)?;
    let integrand = |x: f64| {
        let b = match inv.balance(CriterionKind::Delta, x) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        b * pot.g(x) / (h - pot.big_g(x)).max(0.0).sqrt()
    };
    let (v, _) = tanh_sinh_strict(&integrand, 0.0, lev.x_plus, 1e-11)?;
    Ok(v / (std::f64::consts::SQRT_2 * h))
}

/// T'(h) in the angular form (cross-check route):
/// (k+1) sqrt(2/h) int_0^{pi/2} B_sigma(delta)(x(θ)) sin^(2k+1)θ / sqrt(Σ) dθ.
pub fn dperiod_theta(pot: &Potential, ann: &PeriodAnnulus, h: f64) -> Result<f64> {
    check_energy(ann, h)?;
    let inv = Involution::new(pot, ann);
    let k = ann.k as i32;
    let lev = turning_points(pot, ann, h)?;
    let integrand = |theta: f64| -> f64 {
        let s = theta.sin();
        if s <= 0.0 {
            return 0.0;
        }
        let target = h * s.powi(2 * k + 2);
        let x = match level_point(pot, target, true, lev.x_plus) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let b = match inv.balance(CriterionKind::Delta, x) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let s2 = s * s;
        let mut denom_sum = 0.0;
        let mut p = 1.0;
        for _ in 0..=k {
            denom_sum += p;
            p *= s2;
        }
        b * s.powi(2 * k + 1) / denom_sum.sqrt()
    };
    let (v, _) = adaptive_gl(&integrand, 0.0, std::f64::consts::FRAC_PI_2, 1e-11)?;
    Ok((k as f64 + 1.0) * (2.0 / h).sqrt() * v)
}

/// T''(h) = (1/(sqrt(2) h^2)) int_0^{x_+(h)} B_sigma(phi)(x) g(x)/sqrt(h-G) dx.
pub fn d2period(pot: &Potential, ann: &PeriodAnnulus, h: f64) -> Result<f64> {
    check_energy(ann, h)?;
    let inv = Involution::new(pot, ann);
    d2period_with(&inv, pot, ann, h)
}

pub fn d2period_with(
    inv: &Involution,
    pot: &Potential,
    ann: &PeriodAnnulus,
    h: f64,
) -> Result<f64> {
    check_energy(ann, h)?;
    let lev = turning_points(pot, ann, h)?;
    let integrand = |x: f64| {
        let b = match inv.balance(CriterionKind::Phi, x) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        b * pot.g(x) / (h - pot.big_g(x)).max(0.0).sqrt()
    };
    let (v, _) = tanh_sinh_strict(&integrand, 0.0, lev.x_plus, 1e-11)?;
    Ok(v / (std::f64::consts::SQRT_2 * h * h))
}

/// Behavior of T and T' at the center.
#[derive(Clone, Copy, Debug)]
pub enum CenterAsymptotics {
    /// k = 0: finite limits.
    Regular { t0: f64, tp0: f64 },
    /// k >= 1: T -> +inf and T' -> -inf as h -> 0+.
    Divergent,
}

/// Closed-form limits of T and T' at h -> 0+ from derivatives of g at 0.
pub fn center_asymptotics(pot: &Potential, ann: &PeriodAnnulus) -> CenterAsymptotics {
    if ann.k >= 1 {
        return CenterAsymptotics::Divergent;
    }
    let g1 = pot.dg(0.0);
    let g2 = pot.d2g(0.0);
    let g3 = pot.d3g(0.0);
    let pi = std::f64::consts::PI;
    CenterAsymptotics::Regular {
        t0: 2.0 * pi / g1.sqrt(),
        tp0: pi * (5.0 * g2 * g2 - 3.0 * g1 * g3) / (12.0 * g1.powf(3.5)),
    }
}

/// Central finite-difference cross-check step for T' and T''.
pub fn fd_step(h: f64) -> f64 {
    (1e-6 * h).max(1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, Poly};
    use crate::potential::annulus;

    fn linear() -> Potential {
        Potential::polynomial(Poly::from_i64(&[0, 1]))
    }

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
    fn linear_center_is_isochronous() {
        let p = linear();
        let ann = annulus(&p).unwrap();
        for &h in &[0.01, 1.0, 100.0] {
            let s = period(&p, &ann, h).unwrap();
            assert!(
                (s.t - 2.0 * std::f64::consts::PI).abs() < 1e-10,
                "T({}) = {}",
                h,
                s.t
            );
            assert!(dperiod(&p, &ann, h).unwrap().abs() < 1e-9);
            assert!(d2period(&p, &ann, h).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn two_quadrature_routes_agree() {
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        for &frac in &[1e-4, 0.01, 0.3, 0.9, 0.999] {
            let h = ann.h_s * frac;
            let a = period(&p, &ann, h).unwrap().t;
            let b = period_tanh_sinh(&p, &ann, h).unwrap().t;
            assert!(
                (a - b).abs() <= 1e-8 * a.abs(),
                "h={} theta={} ts={}",
                h,
                a,
                b
            );
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        for &frac in &[0.05, 0.3, 0.7] {
            let h = ann.h_s * frac;
            let tp = dperiod(&p, &ann, h).unwrap();
            let e = fd_step(h);
            let fd = (period(&p, &ann, h + e).unwrap().t - period(&p, &ann, h - e).unwrap().t)
                / (2.0 * e);
            assert!(
                (tp - fd).abs() <= 1e-6 * tp.abs().max(1.0),
                "h={} tp={} fd={}",
                h,
                tp,
                fd
            );
            let tpp = d2period(&p, &ann, h).unwrap();
            let e2 = (1e-4 * h).max(1e-7);
            let fd2 = (period(&p, &ann, h + e2).unwrap().t - 2.0 * period(&p, &ann, h).unwrap().t
                + period(&p, &ann, h - e2).unwrap().t)
                / (e2 * e2);
            assert!(
                (tpp - fd2).abs() <= 1e-4 * tpp.abs().max(1.0) + 1e-3,
                "h={} tpp={} fd2={}",
                h,
                tpp,
                fd2
            );
        }
    }

    #[test]
    fn derivative_two_routes_agree() {
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        for &frac in &[0.05, 0.5, 0.9] {
            let h = ann.h_s * frac;
            let a = dperiod(&p, &ann, h).unwrap();
            let b = dperiod_theta(&p, &ann, h).unwrap();
            assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0), "{} vs {}", a, b);
        }
    }

    #[test]
    fn nilpotent_quartic_period_scaling() {
        // g = x^3: T(h) = c h^(-1/4) exactly; checks the angular form for k=1
        let p = Potential::polynomial(Poly::from_i64(&[0, 0, 0, 1]));
        let ann = annulus(&p).unwrap();
        assert_eq!(ann.k, 1);
        let t1 = period(&p, &ann, 1.0).unwrap().t;
        assert!((t1 - 5.24411510858424).abs() < 1e-8, "{}", t1);
        let t16 = period(&p, &ann, 16.0).unwrap().t;
        assert!((t16 - t1 / 2.0).abs() < 1e-8);
    }

    #[test]
    fn center_limits_quintic() {
        // g = x + k x^3 + x^5: T(0+) = 2 pi, T'(0+) = -3 k pi / 2
        for &kv in &[-1.0f64, 1.0, 5.0] {
            let k3 = rational_from(kv);
            let p = Potential::polynomial(Poly::new(vec![
                rat(0, 1),
                rat(1, 1),
                rat(0, 1),
                k3,
                rat(0, 1),
                rat(1, 1),
            ]));
            let ann = annulus(&p).unwrap();
            match center_asymptotics(&p, &ann) {
                CenterAsymptotics::Regular { t0, tp0 } => {
                    assert!((t0 - 2.0 * std::f64::consts::PI).abs() < 1e-12);
                    assert!((tp0 + 1.5 * kv * std::f64::consts::PI).abs() < 1e-10);
                }
                _ => panic!("expected regular center"),
            }
        }
    }

    fn rational_from(v: f64) -> crate::exactpoly::Rational {
        // exact small rationals for the test values above
        crate::exactpoly::Rational::new(((v * 10.0).round() as i64).into(), 10.into())
    }
}
