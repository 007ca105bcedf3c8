//! Built-in example potentials: the quintic family, the isochronous
//! non-polynomial center, the all-real and nilpotent cubic/quartic cases,
//! and the degree-five hyperelliptic family with complex critical points.

use std::sync::Arc;

use crate::exactpoly::{rat, Poly, RatFunc, Rational};
use crate::potential::{ExactForms, Potential, SmoothBundle};

/// g = x (the linear, globally isochronous center).
pub fn linear() -> Potential {
    Potential::polynomial(Poly::from_i64(&[0, 1]))
}

/// g = x + k x^3 + x^5 (global center for k > -2).
pub fn quintic(k: Rational) -> Potential {
    Potential::polynomial(Poly::new(vec![
        Rational::from_integer(0.into()),
        Rational::from_integer(1.into()),
        Rational::from_integer(0.into()),
        k,
        Rational::from_integer(0.into()),
        Rational::from_integer(1.into()),
    ]))
}

/// g = x (x + 1) (x^2 + beta x + alpha), the degree-five hyperelliptic
/// family; for beta^2 < 4 alpha the quadratic factor has no real roots.
pub fn hyperelliptic(beta: Rational, alpha: Rational) -> Potential {
    let x = Poly::x();
    let lin = Poly::new(vec![Rational::from_integer(1.into()), Rational::from_integer(1.into())]);
    let quad = Poly::new(vec![alpha, beta, Rational::from_integer(1.into())]);
    Potential::polynomial(&(&x * &lin) * &quad)
}

/// g = x (1 - x^2): elementary center, all zeros real.
pub fn all_real_cubic() -> Potential {
    Potential::polynomial(Poly::from_i64(&[0, 1, 0, -1]))
}

/// g = x^3 (x + 1): nilpotent center with a one-sided saddle loop.
pub fn nilpotent_quartic() -> Potential {
    Potential::polynomial(Poly::from_i64(&[0, 0, 0, 1, 1]))
}

/// g = x^3 (1 - x^2): nilpotent center, odd potential.
pub fn nilpotent_quintic() -> Potential {
    Potential::polynomial(Poly::from_i64(&[0, 0, 0, 1, 0, -1]))
}

/// The isochronous non-polynomial center
/// g(x) = (1 + x/4) - (1 + x/4)^(-3) on (-4, +inf), carrying its exact
/// rational-function forms alongside the float bundle.
pub fn loud_quarter() -> Potential {
    let q = |x: f64| 1.0 + 0.25 * x;
    let g: crate::potential::SmoothFn = Arc::new(move |x| q(x) - q(x).powi(-3));
    let dg: crate::potential::SmoothFn = Arc::new(move |x| 0.25 + 0.75 * q(x).powi(-4));
    let d2g: crate::potential::SmoothFn = Arc::new(move |x| -0.75 * q(x).powi(-5));
    let d3g: crate::potential::SmoothFn = Arc::new(move |x| 0.9375 * q(x).powi(-6));
    let big_g: crate::potential::SmoothFn =
        Arc::new(move |x| x + x * x / 8.0 + 2.0 * q(x).powi(-2) - 2.0);

    // g = ((4+x)^4 - 256) / (4 (4+x)^3), G = x^2 (x+8)^2 / (8 (x+4)^2)
    let g_exact = RatFunc::new(
        Poly::new(vec![rat(0, 1), rat(256, 1), rat(96, 1), rat(16, 1), rat(1, 1)]),
        Poly::new(vec![rat(256, 1), rat(192, 1), rat(48, 1), rat(4, 1)]),
    );
    let sq = |p: &Poly| p * p;
    let big_g_exact = RatFunc::new(
        sq(&(&Poly::x() * &Poly::from_i64(&[8, 1]))),
        sq(&Poly::from_i64(&[4, 1])).mul_scalar(&rat(8, 1)),
    );

    Potential::Smooth(SmoothBundle {
        name: "loud-quarter".into(),
        g,
        dg,
        d2g,
        d3g,
        big_g,
        domain: (-4.0, f64::INFINITY),
        exact: Some(ExactForms {
            g: g_exact,
            big_g: big_g_exact,
        }),
    })
}

/// Looks up a named potential accepted by the CLI.
pub fn named(name: &str) -> Option<Potential> {
    match name {
        "linear" => Some(linear()),
        "loud-quarter" => Some(loud_quarter()),
        _ => None,
    }
}

pub fn named_list() -> &'static [&'static str] {
    &["linear", "loud-quarter"]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loud_quarter_exact_forms_match_closures() {
        let p = loud_quarter();
        let forms = p.exact_forms().unwrap();
        for &x in &[-3.5, -1.0, 0.5, 2.0, 10.0] {
            assert!((forms.g.eval_f64(x) - p.g(x)).abs() < 1e-12 * p.g(x).abs().max(1.0));
            assert!(
                (forms.big_g.eval_f64(x) - p.big_g(x)).abs()
                    < 1e-11 * p.big_g(x).abs().max(1.0),
                "x={} exact={} closure={}",
                x,
                forms.big_g.eval_f64(x),
                p.big_g(x)
            );
        }
        // derivative closures are consistent with g
        for &x in &[-2.0, 1.0, 4.0] {
            let h = 1e-6;
            let fd = (p.g(x + h) - p.g(x - h)) / (2.0 * h);
            assert!((fd - p.dg(x)).abs() < 1e-7 * fd.abs().max(1.0));
        }
    }

    #[test]
    fn hyperelliptic_expansion() {
        // beta=-1, alpha=1/2 gives x^4 - x^2/2 + x/2
        let p = hyperelliptic(rat(-1, 1), rat(1, 2));
        let g = &p.poly().unwrap().g;
        assert_eq!(
            g,
            &Poly::new(vec![rat(0, 1), rat(1, 2), rat(-1, 2), rat(0, 1), rat(1, 1)])
        );
    }

    #[test]
    fn omega_cubic_registry_self_test() {
        // the substitution u = x^2 turns the delta numerator's sextic factor
        // into 4u^3 + 9ku^2 + (3k^2+20)u + 9k; its u-derivative
        // 12u^2 + 18ku + 3k^2 + 20 has no positive roots for k in (-2, 0)
        use crate::exactpoly::{sturm_count_interval};
        for k in [rat(-19, 10), rat(-1, 1), rat(-1, 10)] {
            let k2 = &k * &k;
            let deriv = Poly::new(vec![
                &k2 * rat(3, 1) + rat(20, 1),
                &k * rat(18, 1),
                rat(12, 1),
            ]);
            assert_eq!(
                sturm_count_interval(&deriv, &rat(0, 1), &rat(1_000_000, 1)).unwrap(),
                0
            );
            // and the cubic itself has exactly one positive root
            let omega = Poly::new(vec![
                &k * rat(9, 1),
                &k2 * rat(3, 1) + rat(20, 1),
                &k * rat(9, 1),
                rat(4, 1),
            ]);
            assert_eq!(
                sturm_count_interval(&omega, &rat(0, 1), &rat(1_000_000, 1)).unwrap(),
                1
            );
        }
    }
}
