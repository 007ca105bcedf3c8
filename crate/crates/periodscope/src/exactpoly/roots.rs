//! Real-root counting and isolation for rational polynomials.
//!
//! Counting uses Sturm chains evaluated exactly at rational points. Isolation
//! runs Descartes-bound bisection (the 0/1 test via coefficient reversal and
//! Taylor shift) and every produced interval is re-verified with a Sturm
//! count, so the output is certified: disjoint intervals, one root each.

use num_traits::Zero;

use super::interval::RationalInterval;
use super::poly::Poly;
use super::Rational;
use crate::error::{Error, Result};

/// One isolated real root: either an exact rational point or an open
/// interval with non-root rational endpoints containing exactly one root.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub interval: RationalInterval,
    pub exact: Option<Rational>,
}

impl IsolatedRoot {
    pub fn to_f64(&self) -> f64 {
        self.interval.to_f64()
    }
}

/// Interval endpoint for counting; infinite ends use leading-term signs.
#[derive(Clone, Debug)]
pub enum Endpoint {
    NegInf,
    Finite(Rational),
    PosInf,
}

/// Sturm chain of a squarefree polynomial, each element normalized to a
/// primitive integer polynomial by a positive rational factor (sign-safe).
pub fn sturm_chain(p_squarefree: &Poly) -> Vec<Poly> {
    let prim = |q: &Poly| -> Poly {
        let (ints, _) = q.to_int_primitive();
        Poly::new(ints.into_iter().map(Rational::from_integer).collect())
    };
    let mut chain = vec![prim(p_squarefree)];
    let d = p_squarefree.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(prim(&d));
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(prim(&-&r));
    }
    chain
}

fn sign_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn variations_at(chain: &[Poly], e: &Endpoint) -> usize {
    sign_variations(chain.iter().map(|p| match e {
        Endpoint::Finite(x) => p.sign_at(x),
        Endpoint::PosInf => {
            let l = p.leading();
            if l.is_zero() {
                0
            } else if l > Rational::zero() {
                1
            } else {
                -1
            }
        }
        Endpoint::NegInf => {
            let l = p.leading();
            if l.is_zero() {
                0
            } else {
                let s: i8 = if l > Rational::zero() { 1 } else { -1 };
                if p.deg() % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }))
}

/// Removes the linear factor `x - e` when `e` is a root, so that open-interval
/// semantics hold with roots sitting exactly on an endpoint.
fn strip_endpoint_roots(mut p: Poly, endpoints: &[&Endpoint]) -> Poly {
    for e in endpoints {
        if let Endpoint::Finite(x) = e {
            if p.eval(x).is_zero() {
                let lin = Poly::new(vec![-x.clone(), Rational::from_integer(1.into())]);
                p = p.exact_div(&lin).expect("root factor divides");
            }
        }
    }
    p
}

/// Exact number of distinct real roots of `p` in the open interval.
pub fn sturm_count(p: &Poly, lo: &Endpoint, hi: &Endpoint) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let (Endpoint::Finite(a), Endpoint::Finite(b)) = (lo, hi) {
        if a >= b {
            return Ok(0);
        }
    }
    let sf = strip_endpoint_roots(p.squarefree_part(), &[lo, hi]);
    if sf.deg() == 0 {
        return Ok(0);
    }
    let chain = sturm_chain(&sf);
    let va = variations_at(&chain, lo);
    let vb = variations_at(&chain, hi);
    Ok(va.saturating_sub(vb))
}

/// Convenience wrapper for finite open intervals.
pub fn sturm_count_interval(p: &Poly, lo: &Rational, hi: &Rational) -> Result<usize> {
    sturm_count(
        p,
        &Endpoint::Finite(lo.clone()),
        &Endpoint::Finite(hi.clone()),
    )
}

/// Descartes bound for the number of roots in the open unit interval.
fn descartes_bound_01(p: &Poly) -> usize {
    let q = p.reversed().shift_one();
    sign_variations(q.coeffs().iter().map(|c| {
        if c.is_zero() {
            0
        } else if c > &Rational::zero() {
            1
        } else {
            -1
        }
    }))
}

fn descartes_bound_on(p: &Poly, a: &Rational, b: &Rational) -> usize {
    let w = b - a;
    descartes_bound_01(&p.compose_affine(a, &w))
}

/// Default isolation-interval refinement width: 2^-32.
pub fn default_eps() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 32))
}

/// Isolates every distinct real root of `p` in the open interval `(lo, hi)`.
///
/// Each returned interval is disjoint from the others, contains exactly one
/// root, and has width below `eps` (exact rational roots come back as point
/// intervals). Endpoints of the returned intervals are never roots.
pub fn isolate_roots(p: &Poly, lo: &Rational, hi: &Rational, eps: &Rational) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo >= hi {
        return Ok(vec![]);
    }
    let sf = strip_endpoint_roots(
        p.squarefree_part(),
        &[
            &Endpoint::Finite(lo.clone()),
            &Endpoint::Finite(hi.clone()),
        ],
    );
    if sf.deg() == 0 {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    subdivide(&sf, lo, hi, eps, 0, &mut out)?;
    out.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo));

    // independent certification of the Descartes output
    let chain = sturm_chain(&sf);
    for r in &out {
        match &r.exact {
            Some(x) => {
                if !sf.eval(x).is_zero() {
                    return Err(Error::Internal("claimed exact root does not vanish".into()));
                }
            }
            None => {
                let va = variations_at(&chain, &Endpoint::Finite(r.interval.lo.clone()));
                let vb = variations_at(&chain, &Endpoint::Finite(r.interval.hi.clone()));
                if va.saturating_sub(vb) != 1 {
                    return Err(Error::Internal(
                        "isolation interval failed Sturm verification".into(),
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn subdivide(
    p: &Poly,
    a: &Rational,
    b: &Rational,
    eps: &Rational,
    depth: usize,
    out: &mut Vec<IsolatedRoot>,
) -> Result<()> {
    if depth > 512 {
        return Err(Error::IsolationInconclusive(
            "bisection depth exceeded".into(),
        ));
    }
    match descartes_bound_on(p, a, b) {
        0 => Ok(()),
        1 => {
            out.push(refine_bracket(p, a.clone(), b.clone(), eps));
            Ok(())
        }
        _ => {
            // choose a split point that is not a root
            let two = Rational::from_integer(2.into());
            let mut m = (a + b) / &two;
            let mut reduced = p.clone();
            if p.eval(&m).is_zero() {
                out.push(IsolatedRoot {
                    interval: RationalInterval::point(m.clone()),
                    exact: Some(m.clone()),
                });
                let lin = Poly::new(vec![-m.clone(), Rational::from_integer(1.into())]);
                reduced = p.exact_div(&lin).expect("root factor divides");
                if reduced.eval(&m).is_zero() {
                    return Err(Error::Internal("input not squarefree in subdivide".into()));
                }
            } else {
                // nudge away from a root-free midpoint is unnecessary; m is fine
                let _ = &mut m;
            }
            subdivide(&reduced, a, &m, eps, depth + 1, out)?;
            subdivide(&reduced, &m, b, eps, depth + 1, out)
        }
    }
}

/// Shrinks a bracket known to contain exactly one simple root until its width
/// drops below `eps`, keeping endpoints off the root.
fn refine_bracket(p: &Poly, mut a: Rational, mut b: Rational, eps: &Rational) -> IsolatedRoot {
    let two = Rational::from_integer(2.into());
    let sa = p.sign_at(&a);
    debug_assert!(sa != 0 && p.sign_at(&b) != 0);
    let mut sa = sa;
    while &(&b - &a) > eps {
        let m = (&a + &b) / &two;
        let sm = p.sign_at(&m);
        if sm == 0 {
            return IsolatedRoot {
                interval: RationalInterval::point(m.clone()),
                exact: Some(m),
            };
        }
        if sm == sa {
            a = m;
            sa = sm;
        } else {
            b = m;
        }
    }
    IsolatedRoot {
        interval: RationalInterval::new(a, b),
        exact: None,
    }
}

/// Further bisects an isolating interval in place (used by consumers that
/// need tighter enclosures than the isolation eps).
pub fn refine_isolated(p: &Poly, root: &mut IsolatedRoot, eps: &Rational) {
    if root.exact.is_some() {
        return;
    }
    let r = refine_bracket(p, root.interval.lo.clone(), root.interval.hi.clone(), eps);
    *root = r;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn ep(n: i64, d: i64) -> Endpoint {
        Endpoint::Finite(rat(n, d))
    }

    #[test]
    fn count_x2_minus_2() {
        let p = Poly::from_i64(&[-2, 0, 1]);
        assert_eq!(sturm_count(&p, &ep(0, 1), &ep(2, 1)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &Endpoint::NegInf, &Endpoint::PosInf).unwrap(), 2);
    }

    #[test]
    fn count_quadratic_no_real_roots() {
        // 12u^2 + 18ku + 3k^2 + 20 at k=-1: 12u^2 - 18u + 23, discriminant < 0
        let p = Poly::from_i64(&[23, -18, 12]);
        assert_eq!(sturm_count(&p, &ep(0, 1), &ep(1_000_000, 1)).unwrap(), 0);
    }

    #[test]
    fn endpoint_roots_excluded() {
        // roots at 0, 1, 2; open (0,2) must count only x=1
        let p = &(&Poly::x() * &Poly::from_i64(&[-1, 1])) * &Poly::from_i64(&[-2, 1]);
        assert_eq!(sturm_count(&p, &ep(0, 1), &ep(2, 1)).unwrap(), 1);
    }

    #[test]
    fn isolate_sqrt2() {
        let p = Poly::from_i64(&[-2, 0, 1]);
        let roots = isolate_roots(&p, &rat(0, 1), &rat(2, 1), &rat(1, 100)).unwrap();
        assert_eq!(roots.len(), 1);
        let r = roots[0].to_f64();
        assert!((r - 1.41421356).abs() < 0.01, "got {}", r);
    }

    #[test]
    fn isolate_with_rational_root_at_midpoint() {
        // roots at 1/2 (the first midpoint of (0,1)), 1/4, 3/4 plus sqrt2
        let mk = |n: i64, d: i64| Poly::new(vec![-rat(n, d), rat(1, 1)]);
        let p = &(&(&mk(1, 2) * &mk(1, 4)) * &mk(3, 4)) * &Poly::from_i64(&[-2, 0, 1]);
        let roots = isolate_roots(&p, &rat(0, 1), &rat(2, 1), &rat(1, 1024)).unwrap();
        assert_eq!(roots.len(), 4);
        let exacts: Vec<_> = roots.iter().filter_map(|r| r.exact.clone()).collect();
        assert!(exacts.contains(&rat(1, 2)));
    }

    #[test]
    fn isolate_close_roots() {
        // (x - 10001/10000)(x - 10003/10000)(x - 1)
        let mk = |n: i64, d: i64| Poly::new(vec![-rat(n, d), rat(1, 1)]);
        let p = &(&mk(10001, 10000) * &mk(10003, 10000)) * &mk(1, 1);
        let roots = isolate_roots(&p, &rat(1, 2), &rat(2, 1), &rat(1, 1 << 20)).unwrap();
        assert_eq!(roots.len(), 3);
        for w in roots.windows(2) {
            assert!(w[0].interval.hi <= w[1].interval.lo);
        }
    }
}
