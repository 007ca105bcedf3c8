//! Dense univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored by ascending degree with the invariant that the
//! leading coefficient is nonzero (the zero polynomial has an empty list).
//! All arithmetic is exact; nothing here touches floating point except the
//! explicit `to_f64` mirrors used by the quadrature layer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::interval::{rational_to_f64, RationalInterval};
use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*x", c)?,
                _ => write!(f, "({})*x^{}", c, i)?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn monomial(deg: usize, c: Rational) -> Self {
        let mut v = vec![Rational::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    /// Parses a comma-separated list of exact rational coefficients by
    /// ascending degree, e.g. `"0,1/2,-1/2,0,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (i, tok) in s.split(',').enumerate() {
            let t = tok.trim();
            if t.contains('.') || t.contains('e') || t.contains('E') {
                return Err(Error::InvalidInput(format!(
                    "coefficient {} ({:?}) must be an exact rational like \"-3\" or \"1/5\"",
                    i, t
                )));
            }
            let r: Rational = t.parse().map_err(|_| {
                Error::InvalidInput(format!("coefficient {} ({:?}) is not a rational", i, t))
            })?;
            coeffs.push(r);
        }
        Ok(Self::new(coeffs))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree treating the zero polynomial as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Order of vanishing at 0 (index of the first nonzero coefficient).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    /// Exact interval enclosure of the image of `iv` (Horner with interval ops).
    pub fn eval_interval(&self, iv: &RationalInterval) -> RationalInterval {
        let mut acc = RationalInterval::point(Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(iv).add_scalar(c);
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut v = vec![Rational::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            v.push(c / Rational::from_integer((i as i64 + 1).into()));
        }
        Poly::new(v)
    }

    pub fn mul_scalar(&self, r: &Rational) -> Poly {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division over the rationals: `self = q*d + r`, `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Poly::zero(), self.clone());
        }
        let qlen = rem.len() - dd;
        let mut q = vec![Rational::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    rem[i + j] = &rem[i + j] - t;
                }
            }
            q[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(q), Poly::new(rem))
    }

    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal(format!(
                "exact division left remainder {:?}",
                r
            )))
        }
    }

    /// Monic greatest common divisor (1 for coprime inputs).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
            // normalize to keep coefficient sizes in check
            if !b.is_zero() {
                let l = b.leading();
                b = b.mul_scalar(&(Rational::one() / l));
            }
        }
        if a.is_zero() {
            return a;
        }
        let l = a.leading();
        a.mul_scalar(&(Rational::one() / l))
    }

    /// Product of the distinct irreducible factors: `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_zero() || self.degree() == Some(0) {
            return self.clone();
        }
        let d = Poly::gcd(self, &self.derivative());
        self.exact_div(&d).expect("gcd divides")
    }

    /// Composition with an affine map: returns `p(a + b*x)`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Poly {
        let lin = Poly::new(vec![a.clone(), b.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Coefficient reversal: `x^deg * p(1/x)`.
    pub fn reversed(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.reverse();
        Poly::new(v)
    }

    /// Taylor shift by one: `p(x + 1)`, computed by repeated Horner steps on
    /// integer-normalized coefficients.
    pub fn shift_one(&self) -> Poly {
        let n = self.coeffs.len();
        if n == 0 {
            return Poly::zero();
        }
        let mut c = self.coeffs.clone();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].clone();
                c[j] = &c[j] + t;
            }
        }
        Poly::new(c)
    }

    /// Cauchy bound: every real root has absolute value below the result.
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.leading();
        if lead.is_zero() {
            return Rational::one();
        }
        let mut m = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let a = (c / &lead).abs();
            if a > m {
                m = a;
            }
        }
        m + Rational::one()
    }

    /// Clears denominators and removes integer content; the result has
    /// coprime integer coefficients, positive leading coefficient times the
    /// returned sign convention is preserved via the rational factor:
    /// `self = factor * primitive`.
    pub fn to_int_primitive(&self) -> (Vec<BigInt>, Rational) {
        if self.is_zero() {
            return (vec![], Rational::one());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if content.is_zero() {
            content = BigInt::one();
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
        (prim, Rational::new(content, den))
    }

    /// Rational roots of the polynomial, found by the rational-root test on
    /// the primitive integer form. Intended for inputs with modest
    /// coefficients; returns every rational root (without multiplicity).
    pub fn rational_roots(&self) -> Vec<Rational> {
        let sf = self.squarefree_part();
        if sf.degree().is_none() || sf.degree() == Some(0) {
            return vec![];
        }
        let (prim, _) = sf.to_int_primitive();
        let mut roots = Vec::new();
        // strip powers of x
        let val = prim.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if val > 0 {
            roots.push(Rational::zero());
        }
        let body = &prim[val..];
        if body.len() <= 1 {
            return roots;
        }
        let a0 = body[0].clone();
        let an = body.last().unwrap().clone();
        let pdivs = divisors_capped(&a0);
        let qdivs = divisors_capped(&an);
        for p in &pdivs {
            for q in &qdivs {
                for sign in [1i64, -1] {
                    let cand = Rational::new(p * BigInt::from(sign), q.clone());
                    if sf.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }
}

/// Positive divisors of |n|, capped to protect against huge coefficients.
fn divisors_capped(n: &BigInt) -> Vec<BigInt> {
    use num_traits::ToPrimitive;
    let a = n.abs();
    match a.to_u64() {
        Some(v) if v > 0 && v <= 1_000_000 => {
            let mut out = Vec::new();
            let mut i = 1u64;
            while i * i <= v {
                if v % i == 0 {
                    out.push(BigInt::from(i));
                    if i != v / i {
                        out.push(BigInt::from(v / i));
                    }
                }
                i += 1;
            }
            out.sort();
            out
        }
        _ => vec![BigInt::one()],
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::new(v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::new(v)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                v[i + j] = &v[i + j] + t;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    #[test]
    fn eval_examples() {
        // x^2 - 2 at 0
        let p = Poly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.eval(&rat(0, 1)), rat(-2, 1));

        // G of the quartic potential at -1 equals 13/60
        let g = Poly::new(vec![rat(0, 1), rat(1, 2), rat(-1, 2), rat(0, 1), rat(1, 1)]);
        let big_g = g.antiderivative();
        assert_eq!(big_g.eval(&rat(-1, 1)), rat(13, 60));

        // omega cubic at k = -1, u = 0
        let omega = Poly::new(vec![rat(-9, 1), rat(23, 1), rat(-9, 1), rat(4, 1)]);
        assert_eq!(omega.eval(&rat(0, 1)), rat(-9, 1));
    }

    #[test]
    fn antiderivative_examples() {
        let x = Poly::x();
        let ax = x.antiderivative();
        assert_eq!(ax, Poly::new(vec![rat(0, 1), rat(0, 1), rat(1, 2)]));

        let g = Poly::new(vec![rat(0, 1), rat(1, 2), rat(-1, 2), rat(0, 1), rat(1, 1)]);
        let big_g = g.antiderivative();
        let expect = Poly::new(vec![
            rat(0, 1),
            rat(0, 1),
            rat(1, 4),
            rat(-1, 6),
            rat(0, 1),
            rat(1, 5),
        ]);
        assert_eq!(big_g, expect);
        assert_eq!(big_g.derivative(), g);
    }

    #[test]
    fn divrem_and_gcd() {
        let a = Poly::from_i64(&[-2, 0, 1]); // x^2-2
        let b = Poly::from_i64(&[1, 1]); // x+1
        let (q, r) = a.divrem(&b);
        assert_eq!(&(&q * &b) + &r, a);

        let p = &a * &b;
        assert_eq!(Poly::gcd(&p, &b), Poly::new(vec![rat(1, 1), rat(1, 1)]));
    }

    #[test]
    fn squarefree() {
        let b = Poly::from_i64(&[1, 1]);
        let p = &(&b * &b) * &Poly::from_i64(&[-3, 1]);
        let sf = p.squarefree_part();
        assert_eq!(sf.degree(), Some(2));
        assert!(sf.eval(&rat(-1, 1)).is_zero());
        assert!(sf.eval(&rat(3, 1)).is_zero());
    }

    #[test]
    fn shift_and_reverse() {
        let p = Poly::from_i64(&[1, 2, 3]); // 3x^2+2x+1
        let s = p.shift_one();
        // p(x+1) = 3(x+1)^2+2(x+1)+1 = 3x^2+8x+6
        assert_eq!(s, Poly::from_i64(&[6, 8, 3]));
        assert_eq!(p.reversed(), Poly::from_i64(&[3, 2, 1]));
    }

    #[test]
    fn rational_roots_found() {
        // x(x+1)(2x-3)
        let p = &(&Poly::x() * &Poly::from_i64(&[1, 1])) * &Poly::from_i64(&[-3, 2]);
        let roots = p.rational_roots();
        assert_eq!(roots, vec![rat(-1, 1), rat(0, 1), rat(3, 2)]);
    }

    #[test]
    fn parse_rejects_floats() {
        assert!(Poly::parse("0,1.5").is_err());
        assert!(Poly::parse("0,1/2,-1/2,0,1").is_ok());
    }
}
