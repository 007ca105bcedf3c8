//! The classification engine: balance-zero counting through the exact
//! semi-algebraic system, monotonicity criteria, degree bounds, the
//! generalized-Rolle reduction, the Loud necessary condition, the numeric
//! critical-period scan, and the orchestration that assembles a certified
//! report.
//!
//! The counting pipeline solves
//!     G(x) = G(z),  delta(x) = delta(z),   0 < x < x_M,  x_m < z < 0
//! exactly for potentials with exact (polynomial or rational-function)
//! forms; the domain rectangle is over-approximated by rational bounds and
//! every candidate box is kept only after exact sign certification of
//! g(x) > 0 > g(z) and G < h_s at its algebraic coordinates.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{
    bipoly_gcd, isolate_roots, rational_to_f64, sturm_count, AlgebraicNumber, BiPoly, Endpoint,
    Poly, RatFunc, Rational, Rect, SystemSolutions,
};
use crate::involution::{CriterionKind, Involution};
use crate::potential::{
    annulus, BoundaryType, EnergyBound, PeriodAnnulus, Potential,
};
use crate::quadrature::{center_asymptotics, dperiod_with, period, CenterAsymptotics};

/// The cleared system: (x-z) U = G(x) - G(z) and Psi the squarefree cleared
/// difference quotient of delta, on an over-approximated open rectangle.
pub struct SasInstance {
    pub u: BiPoly,
    pub psi: BiPoly,
    pub rect: Rect,
}

/// Geometry used to certify that a box lies in the open annulus projection.
struct SasGeometry {
    rect: Rect,
    g_num: Poly,
    big_g: Option<Poly>,
    h_s: Option<EnergyBound>,
    pos_root: Option<AlgebraicNumber>,
    neg_root: Option<AlgebraicNumber>,
    trivial_filter: bool,
}

fn sas_geometry(pot: &Potential, ann: &PeriodAnnulus) -> Result<SasGeometry> {
    if let Some(ex) = &ann.exact {
        let rect = Rect {
            x_lo: Some(Rational::zero()),
            x_hi: ex.pos_root.as_ref().map(|r| r.interval().hi.clone()),
            z_lo: ex.neg_root.as_ref().map(|r| r.interval().lo.clone()),
            z_hi: Some(Rational::zero()),
        };
        return Ok(SasGeometry {
            rect,
            g_num: ex.g.clone(),
            big_g: Some(ex.big_g.clone()),
            h_s: Some(ex.h_s.clone()),
            pos_root: ex.pos_root.clone(),
            neg_root: ex.neg_root.clone(),
            trivial_filter: false,
        });
    }
    // exact rational-function bundle: supported when g has no zeros inside
    // the open projection, so the annulus filters are trivial
    let forms = pot
        .exact_forms()
        .ok_or_else(|| Error::InvalidInput("no exact forms for the SAS path".into()))?;
    let (dlo, dhi) = pot.domain();
    let to_rat = |v: f64| Rational::from_float(v);
    let rect = Rect {
        x_lo: Some(Rational::zero()),
        x_hi: if dhi.is_finite() { to_rat(dhi) } else { None },
        z_lo: if dlo.is_finite() { to_rat(dlo) } else { None },
        z_hi: Some(Rational::zero()),
    };
    let eps = crate::exactpoly::default_eps();
    let bound = forms.g.num().cauchy_bound() + Rational::from_integer(1.into());
    let xhi = rect.x_hi.clone().unwrap_or(bound.clone());
    let zlo = rect.z_lo.clone().unwrap_or(-bound);
    let pos = isolate_roots(forms.g.num(), &Rational::zero(), &xhi, &eps)?;
    let neg = isolate_roots(forms.g.num(), &zlo, &Rational::zero(), &eps)?;
    if !pos.is_empty() || !neg.is_empty() {
        return Err(Error::InvalidInput(
            "exact SAS path for non-polynomial potentials requires a zero-free projection".into(),
        ));
    }
    Ok(SasGeometry {
        rect,
        g_num: forms.g.num().clone(),
        big_g: None,
        h_s: None,
        pos_root: None,
        neg_root: None,
        trivial_filter: true,
    })
}

/// Builds the cleared pair polynomial for a criterion fraction n/d:
/// squarefree part of (n(x) d(z) - n(z) d(x)) / (x - z).
fn pair_system(f: &RatFunc) -> Result<BiPoly> {
    if f.is_zero() {
        return Ok(BiPoly::zero());
    }
    let cross = BiPoly::cross_difference(f.num(), f.den());
    if cross.is_zero() {
        // constant criterion: identical on every pair
        return Ok(BiPoly::zero());
    }
    cross.div_exact_x_minus_z()?.squarefree_part()
}

/// Exact construction of the semi-algebraic system for a potential with
/// exact forms.
pub fn build_sas(pot: &Potential, ann: &PeriodAnnulus) -> Result<SasInstance> {
    let inv = Involution::new(pot, ann);
    let crit = inv
        .exact_criteria()
        .ok_or_else(|| Error::InvalidInput("SAS construction needs exact forms".into()))?;
    let geo = sas_geometry(pot, ann)?;
    let u = BiPoly::cross_difference(crit.big_g.num(), crit.big_g.den()).div_exact_x_minus_z()?;
    let psi = pair_system(&crit.delta)?;
    Ok(SasInstance {
        u,
        psi,
        rect: geo.rect,
    })
}

/// Keeps only boxes whose algebraic coordinates satisfy the open-annulus
/// sign conditions g(x) > 0 > g(z) and G < h_s, certified exactly.
fn filter_boxes(
    boxes: Vec<crate::exactpoly::IsolationBox>,
    geo: &SasGeometry,
) -> Result<Vec<crate::exactpoly::IsolationBox>> {
    if geo.trivial_filter {
        return Ok(boxes);
    }
    let mut kept = Vec::new();
    'next: for mut b in boxes {
        if geo.pos_root.is_some() && b.x_root.sign_of(&geo.g_num)? <= 0 {
            continue 'next;
        }
        if geo.neg_root.is_some() && b.z_root.sign_of(&geo.g_num)? >= 0 {
            continue 'next;
        }
        if let (Some(big_g), Some(hs)) = (&geo.big_g, &geo.h_s) {
            match hs {
                EnergyBound::Infinite => {}
                EnergyBound::Rational(hv) => {
                    let level = &big_g.clone() - &Poly::constant(hv.clone());
                    if b.x_root.sign_of(&level)? >= 0 || b.z_root.sign_of(&level)? >= 0 {
                        continue 'next;
                    }
                }
                EnergyBound::AtRoot(r) => {
                    for coord in [&mut b.x_root, &mut b.z_root] {
                        let mut r = r.clone();
                        match crate::exactpoly::algebraic::cmp_poly_values(
                            coord, big_g, &mut r, big_g,
                        ) {
                            Ok(std::cmp::Ordering::Less) => {}
                            Ok(_) => continue 'next,
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
        kept.push(b);
    }
    Ok(kept)
}

/// Result of the balance-zero count.
#[derive(Clone, Debug)]
pub struct BalanceCount {
    pub l: usize,
    pub certified: bool,
    pub isochronous: bool,
    pub boxes: Vec<crate::exactpoly::IsolationBox>,
    pub degenerate: usize,
    /// x-locations (f64) of the counted zeros.
    pub zeros: Vec<f64>,
}

/// Counts the zeros of B_sigma(f) in (0, x_M) for a criterion fraction,
/// through the exact system; `weight_g` adds the Jacobian-style weight used
/// by the reduced system (f'(x) g(z) = f'(z) g(x) pairs).
fn count_pair_zeros(
    pot: &Potential,
    ann: &PeriodAnnulus,
    crit: &RatFunc,
    geo: &SasGeometry,
    u: &BiPoly,
    weight_g: Option<&RatFunc>,
) -> Result<BalanceCount> {
    let pair = match weight_g {
        None => pair_system(crit)?,
        Some(g) => {
            // n(x) d(z) a(z) b(x) - n(z) d(x) a(x) b(z) for crit=n/d, g=a/b
            let t1 = &(&BiPoly::from_x_poly(crit.num()) * &BiPoly::from_z_poly(crit.den()))
                * &(&BiPoly::from_z_poly(g.num()) * &BiPoly::from_x_poly(g.den()));
            let t2 = &(&BiPoly::from_z_poly(crit.num()) * &BiPoly::from_x_poly(crit.den()))
                * &(&BiPoly::from_x_poly(g.num()) * &BiPoly::from_z_poly(g.den()));
            let diff = &t1 - &t2;
            if diff.is_zero() {
                BiPoly::zero()
            } else {
                diff.div_exact_x_minus_z()?.squarefree_part()?
            }
        }
    };
    count_system_zeros(pot, ann, u, &pair, geo)
}

fn count_system_zeros(
    pot: &Potential,
    ann: &PeriodAnnulus,
    u: &BiPoly,
    pair: &BiPoly,
    geo: &SasGeometry,
) -> Result<BalanceCount> {
    // odd-potential fast path: sigma(x) = -x exactly, so the pair zeros in
    // the rectangle are the zeros of the criterion numerator on (0, x_M)
    let _ = (pot, ann);
    let eps = crate::exactpoly::default_eps();
    match crate::exactpoly::isolate_system(u, pair, &geo.rect, &eps)? {
        SystemSolutions::CurveOfSolutions { .. } => Ok(BalanceCount {
            l: 0,
            certified: true,
            isochronous: true,
            boxes: vec![],
            degenerate: 0,
            zeros: vec![],
        }),
        SystemSolutions::Boxes(boxes) => {
            let kept = filter_boxes(boxes, geo)?;
            let degenerate = kept.iter().filter(|b| b.possibly_degenerate).count();
            let zeros = kept.iter().map(|b| b.x.to_f64()).collect();
            Ok(BalanceCount {
                l: kept.len(),
                certified: true,
                isochronous: false,
                boxes: kept,
                degenerate,
                zeros,
            })
        }
    }
}

/// Certified count of the zeros of B_sigma(delta) on (0, x_M) for exact
/// potentials; numeric sign-change count (tagged uncertified) otherwise.
pub fn count_balance_zeros(pot: &Potential, ann: &PeriodAnnulus) -> Result<BalanceCount> {
    let inv = Involution::new(pot, ann);
    if let Some(crit) = inv.exact_criteria() {
        if let Ok(geo) = sas_geometry(pot, ann) {
            let u = BiPoly::cross_difference(crit.big_g.num(), crit.big_g.den())
                .div_exact_x_minus_z()?;
            if inv.is_odd_potential() {
                return odd_fast_path(&crit.delta, ann);
            }
            return count_pair_zeros(pot, ann, &crit.delta, &geo, &u, None);
        }
    }
    numeric_balance_count(pot, ann, &inv, CriterionKind::Delta)
}

/// For odd g the involution is exact negation and B = 2 delta, so the count
/// reduces to univariate root counting of the delta numerator on (0, x_M).
fn odd_fast_path(delta: &RatFunc, ann: &PeriodAnnulus) -> Result<BalanceCount> {
    if delta.is_zero() {
        return Ok(BalanceCount {
            l: 0,
            certified: true,
            isochronous: true,
            boxes: vec![],
            degenerate: 0,
            zeros: vec![],
        });
    }
    let n = delta.num();
    let ex = ann
        .exact
        .as_ref()
        .ok_or_else(|| Error::Internal("odd fast path requires exact annulus".into()))?;
    let (count, zeros) = match &ex.pos_root {
        None => {
            let c = sturm_count(n, &Endpoint::Finite(Rational::zero()), &Endpoint::PosInf)?;
            let bound = n.cauchy_bound() + Rational::from_integer(1.into());
            let roots = isolate_roots(n, &Rational::zero(), &bound, &crate::exactpoly::default_eps())?;
            (c, roots.iter().map(|r| r.to_f64()).collect())
        }
        Some(b) => {
            let mut b = b.clone();
            let c = count_roots_to_algebraic(n, &Rational::zero(), &mut b)?;
            let roots = isolate_roots(
                n,
                &Rational::zero(),
                &b.interval().lo,
                &crate::exactpoly::default_eps(),
            )?;
            (c, roots.iter().map(|r| r.to_f64()).collect())
        }
    };
    Ok(BalanceCount {
        l: count,
        certified: true,
        isochronous: false,
        boxes: vec![],
        degenerate: 0,
        zeros,
    })
}

/// Roots of p in the open interval (lo, alpha) with an algebraic right end:
/// refines alpha until the count stabilizes, peeling off a root exactly at
/// alpha when p shares it.
fn count_roots_to_algebraic(
    p: &Poly,
    lo: &Rational,
    alpha: &mut AlgebraicNumber,
) -> Result<usize> {
    let sf = p.squarefree_part();
    let shared = {
        let d = Poly::gcd(&sf, alpha.defining());
        d.deg() >= 1 && {
            let slo = d.sign_at(&alpha.interval().lo);
            let shi = d.sign_at(&alpha.interval().hi);
            slo != 0 && shi != 0 && slo != shi
        }
    };
    for _ in 0..256 {
        if let Some(r) = alpha.as_rational() {
            return sturm_count(&sf, &Endpoint::Finite(lo.clone()), &Endpoint::Finite(r.clone()));
        }
        let lo_e = Endpoint::Finite(lo.clone());
        let c1 = sturm_count(&sf, &lo_e, &Endpoint::Finite(alpha.interval().lo.clone()))?;
        let c2 = sturm_count(&sf, &lo_e, &Endpoint::Finite(alpha.interval().hi.clone()))?;
        if c1 == c2 {
            return Ok(c1);
        }
        if shared && c2 == c1 + 1 {
            // the only margin root is alpha itself, excluded by openness
            return Ok(c1);
        }
        alpha.refine();
    }
    Err(Error::IsolationInconclusive(
        "root count at algebraic endpoint did not stabilize".into(),
    ))
}

fn numeric_balance_count(
    pot: &Potential,
    ann: &PeriodAnnulus,
    inv: &Involution,
    kind: CriterionKind,
) -> Result<BalanceCount> {
    let hi = scan_upper_x(pot, ann);
    let grid = crate::numeric::log_grid(hi * 1e-6, hi, 2000);
    let mut zeros = Vec::new();
    let mut max_abs: f64 = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for &x in &grid {
        let b = match inv.balance(kind, x) {
            Ok(v) => v,
            Err(_) => continue,
        };
        max_abs = max_abs.max(b.abs());
        if let Some((px, pb)) = prev {
            if pb != 0.0 && b != 0.0 && pb.signum() != b.signum() {
                zeros.push(0.5 * (px + x));
            }
        }
        prev = Some((x, b));
    }
    let isochronous = max_abs < 1e-10;
    Ok(BalanceCount {
        l: if isochronous { 0 } else { zeros.len() },
        certified: false,
        isochronous,
        boxes: vec![],
        degenerate: 0,
        zeros,
    })
}

fn scan_upper_x(pot: &Potential, ann: &PeriodAnnulus) -> f64 {
    if ann.x_big_m.is_finite() {
        ann.x_big_m * (1.0 - 2e-9)
    } else {
        // cap via the energy cap
        let mut x = 1.0;
        while pot.big_g(x) < 1e6 && x < 1e9 {
            x *= 2.0;
        }
        x
    }
}

/// The sufficient exactness condition: B_sigma(G/g^2) has exactly l zeros.
pub fn exactness_check(pot: &Potential, ann: &PeriodAnnulus, l: usize) -> Result<bool> {
    let inv = Involution::new(pot, ann);
    let crit = match inv.exact_criteria() {
        Some(c) => c.clone(),
        None => return Ok(false),
    };
    let geo = match sas_geometry(pot, ann) {
        Ok(g) => g,
        Err(_) => return Ok(false),
    };
    if inv.is_odd_potential() {
        // G/g^2 is even for odd g, so its balance vanishes identically and
        // the condition is vacuous rather than met
        return Ok(false);
    }
    let u = BiPoly::cross_difference(crit.big_g.num(), crit.big_g.den()).div_exact_x_minus_z()?;
    let count = count_pair_zeros(pot, ann, &crit.q, &geo, &u, None)?;
    Ok(!count.isochronous && count.l == l)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonotoneDirection {
    Increasing,
    Decreasing,
}

/// Outcome of the derivative-sign criterion.
#[derive(Clone, Debug)]
pub struct ChiconeReport {
    /// Monotone direction when delta' keeps one sign over the whole
    /// projection and the center is elementary.
    pub direction: Option<MonotoneDirection>,
    /// delta' > 0 separately on both sides (meaningful for nilpotent
    /// centers, where it forces exactly one critical period).
    pub dprime_positive_each_side: bool,
    /// Certified root counts of the delta' numerator on the two sides.
    pub dprime_roots: Option<(usize, usize)>,
    /// Degree-based bound when all zeros of g are real.
    pub all_real_bound: Option<usize>,
}

/// Sign analysis of delta' on (x_m, 0) and (0, x_M), exact for potentials
/// with exact forms.
pub fn chicone_check(pot: &Potential, ann: &PeriodAnnulus) -> Result<ChiconeReport> {
    let inv = Involution::new(pot, ann);
    let all_real_bound = all_real_zero_bound(pot);
    let crit = match inv.exact_criteria() {
        Some(c) => c.clone(),
        None => {
            return Ok(ChiconeReport {
                direction: None,
                dprime_positive_each_side: false,
                dprime_roots: None,
                all_real_bound,
            })
        }
    };
    let dprime = crit.delta.derivative();
    if dprime.is_zero() {
        return Ok(ChiconeReport {
            direction: None,
            dprime_positive_each_side: false,
            dprime_roots: Some((0, 0)),
            all_real_bound,
        });
    }
    let n = dprime.num();
    let ex = ann.exact.as_ref();
    // right side (0, x_M)
    let c_pos = match ex.and_then(|e| e.x_big_m.clone().or_else(|| e.pos_root.clone())) {
        Some(mut b) => count_roots_to_algebraic(n, &Rational::zero(), &mut b)?,
        None => sturm_count(n, &Endpoint::Finite(Rational::zero()), &Endpoint::PosInf)?,
    };
    // left side (x_m, 0): mirror through t -> -t to reuse the helper
    let c_neg = {
        let n_m = mirror(n);
        match ex.and_then(|e| e.x_small_m.clone().or_else(|| e.neg_root.clone())) {
            Some(b) => {
                let mut mb = mirror_alg(&b);
                count_roots_to_algebraic(&n_m, &Rational::zero(), &mut mb)?
            }
            None => sturm_count(&n_m, &Endpoint::Finite(Rational::zero()), &Endpoint::PosInf)?,
        }
    };
    let mut direction = None;
    let mut dprime_positive_each_side = false;
    if c_pos == 0 && c_neg == 0 {
        let s_pos = sample_sign(&dprime, sample_point(ann, true));
        let s_neg = sample_sign(&dprime, sample_point(ann, false));
        if s_pos > 0 && s_neg > 0 {
            dprime_positive_each_side = true;
            if ann.k == 0 {
                direction = Some(MonotoneDirection::Increasing);
            }
        } else if s_pos < 0 && s_neg < 0 && ann.k == 0 {
            direction = Some(MonotoneDirection::Decreasing);
        }
    }
    Ok(ChiconeReport {
        direction,
        dprime_positive_each_side,
        dprime_roots: Some((c_neg, c_pos)),
        all_real_bound,
    })
}

fn mirror(p: &Poly) -> Poly {
    Poly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect(),
    )
}

fn mirror_alg(a: &AlgebraicNumber) -> AlgebraicNumber {
    match a.as_rational() {
        Some(r) => AlgebraicNumber::from_rational(-r),
        None => {
            let p = mirror(a.defining());
            let iv = a.interval();
            let lo = -iv.hi.clone();
            let hi = -iv.lo.clone();
            let root = crate::exactpoly::IsolatedRoot {
                interval: crate::exactpoly::RationalInterval::new(lo, hi),
                exact: None,
            };
            AlgebraicNumber::from_isolated(&p, &root)
        }
    }
}

fn sample_point(ann: &PeriodAnnulus, positive: bool) -> Rational {
    let v = if positive {
        if ann.x_big_m.is_finite() {
            ann.x_big_m / 2.0
        } else {
            1.0
        }
    } else if ann.x_m.is_finite() {
        ann.x_m / 2.0
    } else {
        -1.0
    };
    Rational::from_float(v).unwrap_or_else(|| crate::exactpoly::rat(if positive { 1 } else { -1 }, 2))
}

fn sample_sign(f: &RatFunc, at: Rational) -> i8 {
    let n = f.num().sign_at(&at);
    let d = f.den().sign_at(&at);
    n * d
}

/// Degree bound for odd potentials: (deg g - 3)/2.
pub fn odd_degree_bound(pot: &Potential) -> Option<usize> {
    let p = pot.poly()?;
    let d = p.g.degree()?;
    let odd = p
        .g
        .coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| i % 2 == 1 || c.is_zero());
    if odd && d >= 3 {
        Some((d - 3) / 2)
    } else {
        None
    }
}

/// Bound 1 when every zero of g is real (counted via the squarefree part).
pub fn all_real_zero_bound(pot: &Potential) -> Option<usize> {
    let p = pot.poly()?;
    let sf = p.g.squarefree_part();
    let d = sf.degree()?;
    if d < 1 {
        return None;
    }
    let real = sturm_count(&sf, &Endpoint::NegInf, &Endpoint::PosInf).ok()?;
    if real == d {
        Some(1)
    } else {
        None
    }
}

/// Theorem-level degree bounds for polynomial potentials.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct DegreeBounds {
    pub odd_bound: Option<usize>,
    pub all_real_bound: Option<usize>,
}

pub fn degree_bounds(pot: &Potential) -> DegreeBounds {
    DegreeBounds {
        odd_bound: odd_degree_bound(pot),
        all_real_bound: all_real_zero_bound(pot),
    }
}

/// Generalized-Rolle reduction: counts the solutions of
/// G(x) = G(z), delta'(x) g(z) = delta'(z) g(x); the original system has at
/// most 1 + (this count) solutions.
pub fn rolle_reduce(pot: &Potential, ann: &PeriodAnnulus) -> Result<Option<usize>> {
    let inv = Involution::new(pot, ann);
    let crit = match inv.exact_criteria() {
        Some(c) => c.clone(),
        None => return Ok(None),
    };
    let geo = sas_geometry(pot, ann)?;
    let dprime = crit.delta.derivative();
    if dprime.is_zero() {
        return Ok(None);
    }
    let u = BiPoly::cross_difference(crit.big_g.num(), crit.big_g.den()).div_exact_x_minus_z()?;
    let count = count_pair_zeros(pot, ann, &dprime, &geo, &u, Some(&crit.g))?;
    if count.isochronous {
        return Ok(None);
    }
    Ok(Some(count.l))
}

/// Outcome of the necessary monotonicity condition on the Loud ratio.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoudCheck {
    /// P monotone on the projection: consistent with a monotone period.
    Consistent,
    /// P provably non-monotone: the period function has at least one
    /// critical period.
    NotMonotone { zeros: usize },
}

/// Counts the common zeros of the cleared total derivative of
/// P = G(x)/(x-z)^2 with G(x) = G(z). Exact for polynomial potentials.
pub fn necessary_monotone_check(pot: &Potential, ann: &PeriodAnnulus) -> Result<LoudCheck> {
    if let (Some(pp), Ok(geo)) = (pot.poly(), sas_geometry(pot, ann)) {
        let g = &pp.g;
        let big_g = &pp.big_g;
        let u = BiPoly::cross_difference(big_g, &Poly::one()).div_exact_x_minus_z()?;
        // W = g(x) g(z) (x - z) - 2 G(x) (g(z) - g(x))
        let gx = BiPoly::from_x_poly(g);
        let gz = BiPoly::from_z_poly(g);
        let w = &(&(&gx * &gz) * &BiPoly::x_minus_z())
            - &(&BiPoly::from_x_poly(&big_g.mul_scalar(&crate::exactpoly::rat(2, 1)))
                * &(&gz - &gx));
        let w = w.div_exact_x_minus_z()?;
        let count = count_system_zeros(pot, ann, &u, &w, &geo)?;
        let nodal = count.boxes.iter().filter(|b| !b.possibly_degenerate).count();
        return Ok(if nodal >= 1 {
            LoudCheck::NotMonotone { zeros: nodal }
        } else {
            LoudCheck::Consistent
        });
    }
    // numeric: sign changes of the total derivative along the curve
    let inv = Involution::new(pot, ann);
    let hi = scan_upper_x(pot, ann);
    let grid = crate::numeric::log_grid(hi * 1e-5, hi, 1200);
    let mut prev: Option<f64> = None;
    let mut zeros = 0usize;
    for &x in &grid {
        if let Ok(v) = inv.loud_total_derivative(x) {
            if let Some(p) = prev {
                if p != 0.0 && v != 0.0 && p.signum() != v.signum() {
                    zeros += 1;
                }
            }
            prev = Some(v);
        }
    }
    Ok(if zeros >= 1 {
        LoudCheck::NotMonotone { zeros }
    } else {
        LoudCheck::Consistent
    })
}

/// A critical energy located by the numeric scan.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CriticalEnergy {
    pub h: f64,
    pub kind: CriticalKind,
    pub period: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalKind {
    Maximum,
    Minimum,
}

#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub points: usize,
    pub h_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 64,
            h_max: 1e6,
        }
    }
}

/// Numeric scan for sign changes of T'(h), refined by bisection to relative
/// 1e-9 in h. Returns the critical energies with their type, plus a
/// too-coarse flag when doubling the grid changes the count.
pub fn scan_critical_periods(
    pot: &Potential,
    ann: &PeriodAnnulus,
    grid: &GridSpec,
) -> Result<(Vec<CriticalEnergy>, bool)> {
    let inv = Involution::new(pot, ann);
    let coarse = scan_once(pot, ann, &inv, grid.points, grid.h_max)?;
    let fine = scan_once(pot, ann, &inv, grid.points * 2, grid.h_max)?;
    let too_coarse = coarse.len() != fine.len();
    Ok((fine, too_coarse))
}

fn scan_once(
    pot: &Potential,
    ann: &PeriodAnnulus,
    inv: &Involution,
    n: usize,
    h_max: f64,
) -> Result<Vec<CriticalEnergy>> {
    let hs = crate::numeric::energy_grid(ann.h_s, h_max, n);
    let mut samples = Vec::with_capacity(hs.len());
    for &h in &hs {
        if let Ok(tp) = dperiod_with(inv, pot, ann, h) {
            samples.push((h, tp));
        }
    }
    if samples.len() < hs.len() * 4 / 5 {
        return Err(Error::NonConvergence(
            "too many derivative evaluations failed across the scan grid".into(),
        ));
    }
    let mut out = Vec::new();
    for w in samples.windows(2) {
        let (h0, t0) = w[0];
        let (h1, t1) = w[1];
        if t0 == 0.0 || t1 == 0.0 || t0.signum() == t1.signum() {
            continue;
        }
        // bisect T' to relative 1e-9 in h
        let (mut a, mut b) = (h0, h1);
        let mut fa = t0;
        for _ in 0..80 {
            if (b - a).abs() <= 1e-9 * b.abs() {
                break;
            }
            let m = 0.5 * (a + b);
            let fm = match dperiod_with(inv, pot, ann, m) {
                Ok(v) => v,
                Err(_) => break,
            };
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        let h_star = 0.5 * (a + b);
        let t_star = period(pot, ann, h_star)?.t;
        // type from local period comparison, sign pattern as fallback
        let dh = 1e-3 * h_star;
        let kind = match (
            period(pot, ann, (h_star - dh).max(h_star * 0.5)),
            period(pot, ann, (h_star + dh).min(0.5 * (h_star + if ann.h_s.is_finite() { ann.h_s } else { h_star * 2.0 }))),
        ) {
            (Ok(lo), Ok(hi)) if t_star >= lo.t && t_star >= hi.t => CriticalKind::Maximum,
            (Ok(lo), Ok(hi)) if t_star <= lo.t && t_star <= hi.t => CriticalKind::Minimum,
            _ => {
                if t0 > 0.0 {
                    CriticalKind::Maximum
                } else {
                    CriticalKind::Minimum
                }
            }
        };
        out.push(CriticalEnergy {
            h: h_star,
            kind,
            period: t_star,
        });
    }
    Ok(out)
}

// ---- report assembly ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    MonotoneIncreasing,
    MonotoneDecreasing,
    Isochronous,
    BoundedCount,
    ExactCount,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxReport {
    pub x: [String; 2],
    pub z: [String; 2],
    pub degenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub divergent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tp0: Option<f64>,
}

/// The final classification with its evidence.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub classification: Classification,
    pub k: usize,
    pub boundary: BoundaryType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    pub l_certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_source: Option<String>,
    pub exactness_certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exactness_reason: Option<String>,
    pub monotonicity_undecided: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_s_exact: Option<String>,
    pub h_s: f64,
    pub x_m: f64,
    pub x_big_m: f64,
    pub center: CenterReport,
    pub critical_energies: Vec<CriticalEnergy>,
    pub balance_zero_boxes: Vec<BoxReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loud_check: Option<LoudCheck>,
    pub diagnostics: Vec<String>,
}

fn box_report(b: &crate::exactpoly::IsolationBox) -> BoxReport {
    BoxReport {
        x: [b.x.lo.to_string(), b.x.hi.to_string()],
        z: [b.z.lo.to_string(), b.z.hi.to_string()],
        degenerate: b.possibly_degenerate,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EndSign {
    Plus,
    Minus,
    Unknown,
}

/// Full pipeline: validate, annulus geometry, bounds, balance counting,
/// exactness, the Loud check, and the numeric scan, cross-checked.
pub fn classify(pot: &Potential) -> Result<AnalysisReport> {
    let ann = annulus(pot)?;
    let mut diagnostics = Vec::new();

    let center = match center_asymptotics(pot, &ann) {
        CenterAsymptotics::Regular { t0, tp0 } => CenterReport {
            divergent: false,
            t0: Some(t0),
            tp0: Some(tp0),
        },
        CenterAsymptotics::Divergent => CenterReport {
            divergent: true,
            t0: None,
            tp0: None,
        },
    };

    let bal = count_balance_zeros(pot, &ann)?;
    let chic = chicone_check(pot, &ann)?;
    let bounds = degree_bounds(pot);

    let h_s_exact = ann.exact.as_ref().and_then(|e| match &e.h_s {
        EnergyBound::Rational(r) => Some(r.to_string()),
        _ => None,
    });

    if bal.isochronous {
        let scan = if ann.h_s.is_finite() || pot.poly().is_some() || true {
            match scan_critical_periods(pot, &ann, &GridSpec::default()) {
                Ok((s, _)) => s,
                Err(e) => {
                    diagnostics.push(format!("scan skipped: {}", e));
                    vec![]
                }
            }
        } else {
            vec![]
        };
        if !scan.is_empty() {
            diagnostics.push("numeric scan disagrees with certified isochrony".into());
        }
        if !bal.certified {
            diagnostics.push("isochrony detected numerically (uncertified)".into());
        }
        return Ok(AnalysisReport {
            classification: Classification::Isochronous,
            k: ann.k,
            boundary: ann.boundary,
            l: Some(0),
            l_certified: bal.certified,
            bound: Some(0),
            bound_source: Some("balance-identically-zero".into()),
            exactness_certified: bal.certified,
            exactness_reason: Some("shared factor across the whole projection".into()),
            monotonicity_undecided: false,
            h_s_exact,
            h_s: ann.h_s,
            x_m: ann.x_m,
            x_big_m: ann.x_big_m,
            center,
            critical_energies: scan,
            balance_zero_boxes: vec![],
            loud_check: None,
            diagnostics,
        });
    }

    let l = bal.l;
    let loud = match necessary_monotone_check(pot, &ann) {
        Ok(c) => Some(c),
        Err(e) => {
            diagnostics.push(format!("loud check unavailable: {}", e));
            None
        }
    };

    // endpoint signs of T'
    let start = if ann.k >= 1 {
        EndSign::Minus
    } else {
        match center.tp0 {
            Some(t) if t > 1e-9 => EndSign::Plus,
            Some(t) if t < -1e-9 => EndSign::Minus,
            _ => EndSign::Unknown,
        }
    };
    let end = match ann.boundary {
        BoundaryType::SaddlePolycycle => EndSign::Plus,
        BoundaryType::UnboundedSuperlinear => EndSign::Minus,
        BoundaryType::UnboundedSublinear => EndSign::Plus,
        BoundaryType::UnboundedSemilinear => EndSign::Unknown,
    };
    let at_least_one = matches!(loud, Some(LoudCheck::NotMonotone { .. }));
    let forced_min = match (start, end) {
        (EndSign::Unknown, _) | (_, EndSign::Unknown) => {
            if at_least_one {
                1
            } else {
                0
            }
        }
        (a, b) if a != b => 1,
        _ => {
            if at_least_one {
                2
            } else {
                0
            }
        }
    };

    // numeric scan
    let (scan, too_coarse) = match scan_critical_periods(pot, &ann, &GridSpec::default()) {
        Ok(v) => v,
        Err(e) => {
            diagnostics.push(format!("scan unavailable: {}", e));
            (vec![], false)
        }
    };
    if too_coarse {
        diagnostics.push("scan grid refinement changed the count; grid too coarse".into());
    }

    if l == 0 {
        // certified (or numeric) absence of balance zeros: monotone
        let dir = monotone_direction(pot, &ann, &chic, &scan, &mut diagnostics)?;
        let classification = match dir {
            MonotoneDirection::Increasing => Classification::MonotoneIncreasing,
            MonotoneDirection::Decreasing => Classification::MonotoneDecreasing,
        };
        if !scan.is_empty() {
            diagnostics.push("numeric scan found extrema despite zero balance count".into());
        }
        return Ok(AnalysisReport {
            classification,
            k: ann.k,
            boundary: ann.boundary,
            l: Some(0),
            l_certified: bal.certified,
            bound: Some(0),
            bound_source: Some(if bal.certified {
                "balance-zero-count".into()
            } else {
                "numeric-balance-scan".into()
            }),
            exactness_certified: bal.certified,
            exactness_reason: Some("constant-sign balance".into()),
            monotonicity_undecided: false,
            h_s_exact,
            h_s: ann.h_s,
            x_m: ann.x_m,
            x_big_m: ann.x_big_m,
            center,
            critical_energies: scan,
            balance_zero_boxes: vec![],
            loud_check: loud,
            diagnostics,
        });
    }

    // l >= 1: bound with possible exactness
    let mut bound = l;
    let mut bound_source = if bal.certified {
        "balance-zero-count".to_string()
    } else {
        "numeric-balance-scan".to_string()
    };
    for (b, name) in [
        (bounds.odd_bound, "odd-degree-bound"),
        (bounds.all_real_bound, "all-real-zeros-bound"),
    ] {
        if let Some(b) = b {
            if b < bound {
                bound = b;
                bound_source = name.to_string();
            }
        }
    }
    if scan.len() > bound {
        diagnostics.push(format!(
            "numeric scan found {} extrema, above the certified bound {}",
            scan.len(),
            bound
        ));
    }

    let second_condition = bal.certified && exactness_check(pot, &ann, l)?;
    let forcing = bal.certified && forced_min == bound && forced_min > 0;
    let exact = second_condition || forcing;
    if forced_min > bound {
        diagnostics.push(format!(
            "endpoint analysis forces at least {} critical periods, above the bound {}",
            forced_min, bound
        ));
    }
    let exactness_reason = if second_condition {
        Some("balance of G/g^2 matches the count".to_string())
    } else if forcing {
        Some(format!(
            "endpoint asymptotics{} force the count",
            if at_least_one {
                " and the non-monotone Loud ratio"
            } else {
                ""
            }
        ))
    } else {
        None
    };

    let monotonicity_undecided = !exact && forced_min == 0;
    Ok(AnalysisReport {
        classification: if exact {
            Classification::ExactCount
        } else {
            Classification::BoundedCount
        },
        k: ann.k,
        boundary: ann.boundary,
        l: Some(l),
        l_certified: bal.certified,
        bound: Some(bound),
        bound_source: Some(bound_source),
        exactness_certified: exact,
        exactness_reason,
        monotonicity_undecided,
        h_s_exact,
        h_s: ann.h_s,
        x_m: ann.x_m,
        x_big_m: ann.x_big_m,
        center,
        critical_energies: scan,
        balance_zero_boxes: bal.boxes.iter().map(box_report).collect(),
        loud_check: loud,
        diagnostics,
    })
}

fn monotone_direction(
    pot: &Potential,
    ann: &PeriodAnnulus,
    chic: &ChiconeReport,
    scan: &[CriticalEnergy],
    diagnostics: &mut Vec<String>,
) -> Result<MonotoneDirection> {
    if let Some(d) = &chic.direction {
        return Ok(d.clone());
    }
    // exact balance sign at one interior sample
    if let Some(s) = exact_balance_sign(pot, ann)? {
        return Ok(if s > 0 {
            MonotoneDirection::Increasing
        } else {
            MonotoneDirection::Decreasing
        });
    }
    // numeric fallback
    let inv = Involution::new(pot, ann);
    let x = scan_upper_x(pot, ann) * 0.4;
    let b = inv.balance(CriterionKind::Delta, x)?;
    diagnostics.push("monotone direction from numeric balance sample".into());
    let _ = scan;
    Ok(if b > 0.0 {
        MonotoneDirection::Increasing
    } else {
        MonotoneDirection::Decreasing
    })
}

/// Exact sign of the balance of delta at one rational abscissa (potentials
/// with exact forms only).
fn exact_balance_sign(pot: &Potential, ann: &PeriodAnnulus) -> Result<Option<i8>> {
    let inv = Involution::new(pot, ann);
    let crit = match inv.exact_criteria() {
        Some(c) => c.clone(),
        None => return Ok(None),
    };
    let x0 = sample_point(ann, true);
    if inv.is_odd_potential() {
        return Ok(Some(sample_sign(&crit.delta, x0)));
    }
    let ex = match ann.exact.as_ref() {
        Some(e) => e,
        None => return Ok(None),
    };
    let d0 = match crit.delta.eval(&x0) {
        Some(v) => v,
        None => return Ok(None),
    };
    // sigma(x0) is the root of G(z) - G(x0) on the negative side
    let target = match crit.big_g.eval(&x0) {
        Some(v) => v,
        None => return Ok(None),
    };
    let level = &ex.big_g - &Poly::constant(target);
    let lo = ex
        .neg_root
        .as_ref()
        .map(|r| r.interval().lo.clone())
        .unwrap_or_else(|| -(level.cauchy_bound() + Rational::from_integer(1.into())));
    let roots = isolate_roots(&level, &lo, &Rational::zero(), &crate::exactpoly::default_eps())?;
    let root = match roots.last() {
        Some(r) => r,
        None => return Ok(None),
    };
    let mut zeta = AlgebraicNumber::from_isolated(&level.squarefree_part(), root);
    // sign of d0 - delta(zeta) = sign((d0 * den - num)(zeta)) * sign(den(zeta))
    let q1 = &crit.delta.den().mul_scalar(&d0) - crit.delta.num();
    let s1 = zeta.sign_of(&q1)?;
    let s2 = zeta.sign_of(crit.delta.den())?;
    Ok(Some(s1 * s2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn quartic_54() -> Potential {
        Potential::polynomial(Poly::new(vec![
            rat(0, 1),
            rat(1, 2),
            rat(-1, 2),
            rat(0, 1),
            rat(1, 1),
        ]))
    }

    fn quintic(n: i64, d: i64) -> Potential {
        Potential::polynomial(Poly::new(vec![
            rat(0, 1),
            rat(1, 1),
            rat(0, 1),
            rat(n, d),
            rat(0, 1),
            rat(1, 1),
        ]))
    }

    #[test]
    fn sas_shape_for_quartic() {
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        let sas = build_sas(&p, &ann).unwrap();
        // the cleared delta-difference is symmetric of degree 13
        assert_eq!(sas.psi.total_degree(), 13);
        assert_eq!(&sas.psi, &sas.psi.swap_vars());
        // U vanishes exactly on pairs with equal energy
        assert!(sas.u.eval(&rat(-1, 1), &rat(0, 1)).is_zero() == false);
    }

    #[test]
    fn linear_center_isochronous_path() {
        let p = Potential::polynomial(Poly::from_i64(&[0, 1]));
        let r = classify(&p).unwrap();
        assert_eq!(r.classification, Classification::Isochronous);
        assert!(r.l_certified);
    }

    #[test]
    fn quintic_counts() {
        // k = -1: one certified zero; k = 1: none, decreasing
        let p = quintic(-1, 1);
        let ann = annulus(&p).unwrap();
        let c = count_balance_zeros(&p, &ann).unwrap();
        assert!(c.certified);
        assert_eq!(c.l, 1);
        assert!((c.zeros[0] - 0.675455402082).abs() < 1e-6, "{}", c.zeros[0]);

        let p2 = quintic(1, 1);
        let ann2 = annulus(&p2).unwrap();
        let c2 = count_balance_zeros(&p2, &ann2).unwrap();
        assert_eq!(c2.l, 0);
    }

    #[test]
    fn quartic_54_counts_two() {
        let p = quartic_54();
        let ann = annulus(&p).unwrap();
        let c = count_balance_zeros(&p, &ann).unwrap();
        assert!(c.certified);
        assert_eq!(c.l, 2);
        assert!((c.zeros[0] - 0.3560526240).abs() < 1e-6, "{}", c.zeros[0]);
        assert!((c.zeros[1] - 0.7682670211).abs() < 1e-6, "{}", c.zeros[1]);
        // the sufficient exactness condition alone does not fire here
        assert!(!exactness_check(&p, &ann, 2).unwrap());
        // but the Loud ratio is provably non-monotone
        match necessary_monotone_check(&p, &ann).unwrap() {
            LoudCheck::NotMonotone { zeros } => assert_eq!(zeros, 2),
            c => panic!("expected non-monotone, got {:?}", c),
        }
    }

    #[test]
    fn all_real_monotone_increasing() {
        // g = x(1 - x^2)
        let p = Potential::polynomial(Poly::from_i64(&[0, 1, 0, -1]));
        let ann = annulus(&p).unwrap();
        let chic = chicone_check(&p, &ann).unwrap();
        assert_eq!(chic.dprime_roots, Some((0, 0)));
        assert_eq!(chic.direction, Some(MonotoneDirection::Increasing));
        assert_eq!(chic.all_real_bound, Some(1));
        let r = classify(&p).unwrap();
        assert_eq!(r.classification, Classification::MonotoneIncreasing);
    }

    #[test]
    fn rolle_reduction_bounds_all_real() {
        let p = Potential::polynomial(Poly::from_i64(&[0, 1, 0, -1]));
        let ann = annulus(&p).unwrap();
        let reduced = rolle_reduce(&p, &ann).unwrap().unwrap();
        assert_eq!(reduced, 0);
    }
}
