//! Dense univariate polynomials over the rationals, and rational root extraction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modular::{self, PolyP};
use super::multipoly::{Monomial, MultiPoly};
use super::rational::{denominator_lcm, Rational};

/// Coefficients lowest degree first; no trailing zeros (the zero polynomial is empty).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_default()
                        + o.coeffs.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let inv = d.leading().recip();
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = &r[i] * &inv;
            for j in 0..=dd {
                let t = &c * &d.coeffs[j];
                r[i - dd + j] -= t;
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), o.primitive());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Integer-coefficient primitive form with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let ints = self.integer_coefficients();
        let g = ints.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        let g = if ints.last().unwrap().is_negative() { -g } else { g };
        Self::new(
            ints.into_iter()
                .map(|c| Rational::from_integer(c / &g))
                .collect(),
        )
    }

    /// Coefficients scaled by the lcm of denominators.
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        let den = denominator_lcm(self.coeffs.iter());
        self.coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect()
    }

    /// Yun's square-free decomposition: `self = lc * prod_i factors[i]^(i+1)`, each factor monic.
    pub fn squarefree_decomposition(&self) -> Vec<UniPoly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).unwrap();
        let mut c = fp.div_exact(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.div_exact(&a).unwrap();
            if b.degree() == Some(0) {
                break;
            }
            c = d.div_exact(&a).unwrap();
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    pub fn to_multipoly(&self, var: usize) -> MultiPoly {
        MultiPoly::from_terms(self.coeffs.iter().enumerate().map(|(i, c)| {
            let mut e = [0; 3];
            e[var] = i as u32;
            (Monomial(e), c.clone())
        }))
    }

    /// Reads a polynomial that involves only `var`; `None` if other variables occur.
    pub fn from_multipoly(p: &MultiPoly, var: usize) -> Option<Self> {
        let n = p.degree_in(var).map(|d| d as usize + 1).unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); n];
        for (m, c) in p.terms() {
            if (0..3).any(|i| i != var && m.0[i] != 0) {
                return None;
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        Some(Self::new(coeffs))
    }

    fn reduce_mod(&self, p: u64) -> Option<PolyP> {
        let v: Option<Vec<u64>> = self
            .coeffs
            .iter()
            .map(|c| modular::reduce_rational(c, p))
            .collect();
        Some(modular::trim(v?))
    }
}

/// Rational roots with multiplicity, plus the square-free factors (of degree >= 2)
/// that carry no rational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub roots: Vec<(Rational, u32)>,
    /// `(factor, multiplicity)`; each factor is monic and has no rational root.
    pub residual: Vec<(UniPoly, u32)>,
}

impl RootReport {
    pub fn residual_degree(&self) -> usize {
        self.residual
            .iter()
            .map(|(f, m)| f.degree().unwrap_or(0) * *m as usize)
            .sum()
    }

    pub fn distinct_roots(&self) -> Vec<Rational> {
        self.roots.iter().map(|(r, _)| r.clone()).collect()
    }
}

/// All rational roots of a nonzero polynomial, with multiplicities, sorted ascending.
pub fn rational_roots(p: &UniPoly) -> RootReport {
    assert!(!p.is_zero(), "rational_roots of the zero polynomial");
    let mut roots = Vec::new();
    let mut residual = Vec::new();
    for (i, factor) in p.squarefree_decomposition().into_iter().enumerate() {
        let mult = i as u32 + 1;
        let mut rest = factor;
        for r in squarefree_roots(&rest) {
            rest = rest.div_exact(&UniPoly::linear(&r)).unwrap();
            roots.push((r, mult));
        }
        if rest.degree().unwrap_or(0) >= 1 {
            residual.push((rest.monic(), mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    RootReport { roots, residual }
}

/// Roots of a square-free polynomial, by roots mod a prime, Hensel lifting and exact checks.
fn squarefree_roots(f: &UniPoly) -> Vec<Rational> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut f = f.primitive();
    // zero roots first
    let zeros = f.coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push(Rational::zero());
        f = UniPoly::new(f.coeffs[zeros..].to_vec());
    }
    match f.degree() {
        Some(0) | None => return out,
        Some(1) => {
            out.push(-&f.coeffs[0] / &f.coeffs[1]);
            return out;
        }
        _ => {}
    }
    let ints = f.integer_coefficients();
    let lc = ints.last().unwrap().abs();
    let c0 = ints[0].abs();
    let bound: BigInt = &lc * &c0 * 2 + 1;
    let fp_deriv = f.derivative();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for p in modular::primes_below(1 << 61) {
        let fp = match f.reduce_mod(p) {
            Some(v) if v.len() == f.coeffs.len() => v,
            _ => continue,
        };
        let dp = modular::poly_deriv(&fp, p);
        if modular::poly_gcd(&fp, &dp, p).len() != 1 {
            continue;
        }
        let pb = modular::to_bigint(p);
        for r in modular::roots_mod_p(&fp, p, &mut rng) {
            if let Some(q) = lift_and_check(&f, &fp_deriv, &ints, r, &pb, &bound) {
                out.push(q);
            }
        }
        break;
    }
    out
}

fn eval_int(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn lift_and_check(
    f: &UniPoly,
    fd: &UniPoly,
    ints: &[BigInt],
    root: u64,
    p: &BigInt,
    bound: &BigInt,
) -> Option<Rational> {
    let dints = fd.integer_coefficients();
    // Newton iteration doubles the p-adic precision each step.
    let mut m = p.clone();
    let mut r = modular::to_bigint(root);
    while &m <= bound {
        let m2 = &m * &m;
        let fv = eval_int(ints, &r, &m2);
        let dv = eval_int(&dints, &r, &m2);
        let inv = inv_mod_big(&dv, &m2)?;
        r = (&r - fv * inv).mod_floor(&m2);
        m = m2;
    }
    let lc = ints.last().unwrap();
    let t = modular::symmetric(&(lc * &r), &m);
    let cand = Rational::new(t, lc.clone());
    if f.eval(&cand).is_zero() {
        Some(cand)
    } else {
        None
    }
}

/// Roots of a binary form in variables `s`, `t`: the affine roots of s/t, and the
/// multiplicity of the point (s:t) = (1:0).
pub fn binary_form_roots(p: &MultiPoly, s: usize, t: usize) -> (RootReport, u32) {
    // Dehomogenize at t = 1; the drop in degree is the multiplicity of the point at infinity.
    let d = p.total_degree().unwrap_or(0);
    let u = UniPoly::from_multipoly(&p.dehomogenize(t), s).expect("binary form in two variables");
    let at_inf = d - u.degree().unwrap_or(0) as u32;
    (rational_roots(&u), at_inf)
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multipoly(0))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    #[test]
    fn roots_of_simple_polynomials() {
        let r = rational_roots(&UniPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(r.roots, vec![(rat(-1), 1), (rat(1), 1)]);
        assert!(r.residual.is_empty());
        let r = rational_roots(&UniPoly::from_ints(&[1, 0, 1]));
        assert!(r.roots.is_empty());
        assert_eq!(r.residual_degree(), 2);
    }

    #[test]
    fn repeated_root_with_irrational_residual() {
        // (2x - 3)^2 (x^2 - 2)
        let f = UniPoly::from_ints(&[-3, 2])
            .pow(2)
            .mul(&UniPoly::from_ints(&[-2, 0, 1]));
        let r = rational_roots(&f);
        assert_eq!(r.roots, vec![(ratio(3, 2), 2)]);
        assert_eq!(r.residual, vec![(UniPoly::from_ints(&[-2, 0, 1]), 1)]);
    }

    #[test]
    fn roots_with_large_coefficients() {
        let big = Rational::new(BigInt::from(10).pow(30) + 7, BigInt::from(3).pow(25));
        let f = UniPoly::linear(&big)
            .mul(&UniPoly::linear(&ratio(-5, 7)))
            .mul(&UniPoly::from_ints(&[3, 1, 1]))
            .mul(&UniPoly::from_ints(&[0, 1]).pow(3));
        let r = rational_roots(&f);
        assert_eq!(r.roots, vec![(ratio(-5, 7), 1), (rat(0), 3), (big, 1)]);
        assert_eq!(r.residual_degree(), 2);
    }

    #[test]
    fn yun() {
        let f = UniPoly::from_ints(&[-1, 1])
            .mul(&UniPoly::from_ints(&[1, 1]).pow(3));
        let sq = f.squarefree_decomposition();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq[0], UniPoly::from_ints(&[-1, 1]));
        assert_eq!(sq[1], UniPoly::one());
        assert_eq!(sq[2], UniPoly::from_ints(&[1, 1]));
    }
}
