//! Sparse polynomials in x, y, z over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{denominator_lcm, numerator_gcd, Rational};

pub const VARS: [char; 3] = ['x', 'y', 'z'];

/// Exponent vector `[a, b, c]` for `x^a y^b z^c`.
///
/// Ordered graded-lexicographically with x > y > z.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn degree(&self) -> u32 {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn var(i: usize) -> Monomial {
        let mut e = [0; 3];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..3).all(|i| self.0[i] <= other.0[i])
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ]))
    }

    /// All monomials of total degree `d`, in descending graded-lex order.
    pub fn all_of_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                out.push(Monomial([a, b, d - a - b]));
            }
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn monomial(exps: [u32; 3]) -> Self {
        Self::term(Monomial(exps), Rational::one())
    }

    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i), Rational::one())
    }

    pub fn x() -> Self {
        Self::var(0)
    }
    pub fn y() -> Self {
        Self::var(1)
    }
    pub fn z() -> Self {
        Self::var(2)
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }

    /// Largest total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Smallest total degree among terms, i.e. the order at the origin; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn min_degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys();
        match it.next() {
            None => true,
            Some(first) => it.all(|m| m.degree() == first.degree()),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Drops every term of total degree `>= order`.
    pub fn truncate(&self, order: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            terms.insert(k.div(m)?, v.clone());
        }
        Some(MultiPoly { terms })
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut e = [u32::MAX; 3];
        for m in self.terms.keys() {
            for i in 0..3 {
                e[i] = e[i].min(m.0[i]);
            }
        }
        if self.is_zero() {
            Monomial::ONE
        } else {
            Monomial(e)
        }
    }

    /// Scaled so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coefficient();
        self.scale(&lc.recip())
    }

    /// Returns `(c, p)` with `self = c * p`, `p` having coprime integer coefficients
    /// and positive leading coefficient.
    pub fn integer_primitive(&self) -> (Rational, MultiPoly) {
        if self.is_zero() {
            return (Rational::one(), MultiPoly::zero());
        }
        let den = denominator_lcm(self.terms.values());
        let scaled: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = scaled.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        if self.leading_coefficient().is_negative() {
            g = -g;
        }
        let p = MultiPoly {
            terms: self
                .terms
                .keys()
                .zip(scaled)
                .map(|(m, n)| (*m, Rational::from_integer(n / &g)))
                .collect(),
        };
        (Rational::new(g, den), p)
    }

    /// Integer content of a polynomial with integral coefficients (gcd of numerators over lcm of denominators).
    pub fn rational_content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        Rational::new(
            numerator_gcd(self.terms.values()),
            denominator_lcm(self.terms.values()),
        )
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    pub fn max_coefficient_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    pub fn pow(&self, mut k: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, var: usize) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut n = *m;
            n.0[var] -= 1;
            terms.insert(n, c * Rational::from_integer(e.into()));
        }
        MultiPoly { terms }
    }

    pub fn eval(&self, point: &[Rational; 3]) -> Rational {
        // Power tables keep this linear in the number of terms.
        let mut pows: [Vec<Rational>; 3] = Default::default();
        for (i, table) in pows.iter_mut().enumerate() {
            let maxe = self.degree_in(i).unwrap_or(0) as usize;
            table.push(Rational::one());
            for k in 1..=maxe {
                let next = &table[k - 1] * &point[i];
                table.push(next);
            }
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c
                * &pows[0][m.0[0] as usize]
                * &pows[1][m.0[1] as usize]
                * &pows[2][m.0[2] as usize];
        }
        acc
    }

    /// Replaces variable `var` by the constant `value`.
    pub fn specialize(&self, var: usize, value: &Rational) -> MultiPoly {
        let maxe = self.degree_in(var).unwrap_or(0) as usize;
        let mut pows = vec![Rational::one()];
        for k in 1..=maxe {
            let next = &pows[k - 1] * value;
            pows.push(next);
        }
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut n = *m;
            n.0[var] = 0;
            out.add_term(n, c * &pows[m.0[var] as usize]);
        }
        out
    }

    /// Coefficients with respect to `var`: `self = sum_k out[k] * var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let n = self.degree_in(var).map(|d| d as usize + 1).unwrap_or(0);
        let mut out = vec![MultiPoly::zero(); n];
        for (m, c) in &self.terms {
            let mut k = *m;
            let e = k.0[var] as usize;
            k.0[var] = 0;
            out[e].terms.insert(k, c.clone());
        }
        out
    }

    pub fn from_coefficients_in(var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut k = *m;
                k.0[var] += e as u32;
                out.add_term(k, v.clone());
            }
        }
        out
    }

    /// Swaps or permutes variables: variable `i` of the result is variable `perm[i]` of `self`.
    pub fn permute(&self, perm: [usize; 3]) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = [0; 3];
                    for i in 0..3 {
                        e[perm[i]] = m.0[i];
                    }
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Sets a variable to 1 (dehomogenization).
    pub fn dehomogenize(&self, var: usize) -> MultiPoly {
        self.specialize(var, &Rational::one())
    }

    /// Homogenizes to degree `d` using variable `var`.
    pub fn homogenize(&self, var: usize, d: u32) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut k = *m;
            k.0[var] += d - m.degree();
            out.add_term(k, c.clone());
        }
        out
    }

    /// `self(s[0], s[1], s[2])`, by nested Horner evaluation in x, then y, with cached z-powers.
    pub fn substitute(&self, s: &[MultiPoly; 3]) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let by_x = self.coefficients_in(0);
        let maxz = self.degree_in(2).unwrap_or(0) as usize;
        let mut zpow = vec![MultiPoly::one()];
        for k in 1..=maxz {
            let next = &zpow[k - 1] * &s[2];
            zpow.push(next);
        }
        let eval_z = |p: &MultiPoly| -> MultiPoly {
            let mut parts: Vec<(MultiPoly, Rational)> = Vec::new();
            for (m, c) in &p.terms {
                parts.push((zpow[m.0[2] as usize].clone(), c.clone()));
            }
            linear_combination(&parts)
        };
        let eval_yz = |p: &MultiPoly| -> MultiPoly {
            let by_y = p.coefficients_in(1);
            let mut acc = MultiPoly::zero();
            for c in by_y.iter().rev() {
                acc = &acc * &s[1];
                if !c.is_zero() {
                    acc = &acc + &eval_z(c);
                }
            }
            acc
        };
        let mut acc = MultiPoly::zero();
        for c in by_x.iter().rev() {
            acc = &acc * &s[0];
            if !c.is_zero() {
                acc = &acc + &eval_yz(c);
            }
        }
        acc
    }

    /// Division with remainder by a single divisor (graded-lex order).
    ///
    /// The remainder has no term divisible by the divisor's leading monomial, so it is unique.
    pub fn div_rem(&self, divisor: &MultiPoly) -> (MultiPoly, MultiPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let lm = divisor.leading_monomial().unwrap();
        let lc_inv = divisor.leading_coefficient().recip();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        let mut out_rem = MultiPoly::zero();
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            match m.div(&lm) {
                Some(q) => {
                    let f = &c * &lc_inv;
                    quot.add_term(q, f.clone());
                    for (dm, dc) in &divisor.terms {
                        rem.add_term(dm.mul(&q), -(dc * &f));
                    }
                    debug_assert!(!rem.terms.contains_key(&m));
                }
                None => {
                    rem.terms.remove(&m);
                    out_rem.terms.insert(m, c);
                }
            }
        }
        (quot, out_rem)
    }

    pub fn rem(&self, divisor: &MultiPoly) -> MultiPoly {
        self.div_rem(divisor).1
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Coefficients scaled to integers with a common denominator: `self = (1/den) * sum`.
    pub(crate) fn to_integer_terms(&self) -> (BigInt, Vec<(Monomial, BigInt)>) {
        let den = denominator_lcm(self.terms.values());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let n = if den.is_one() {
                    c.numer().clone()
                } else {
                    c.numer() * (&den / c.denom())
                };
                (*m, n)
            })
            .collect();
        (den, terms)
    }

    pub(crate) fn from_integer_terms(den: &BigInt, terms: HashMap<Monomial, BigInt>) -> MultiPoly {
        let den_one = den.is_one();
        MultiPoly {
            terms: terms
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| {
                    let r = if den_one {
                        Rational::from_integer(c)
                    } else {
                        Rational::new(c, den.clone())
                    };
                    (m, r)
                })
                .collect(),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }
}

/// `sum c_i * p_i`, accumulated over integers.
pub fn linear_combination(parts: &[(MultiPoly, Rational)]) -> MultiPoly {
    let mut products: Vec<(Monomial, Rational)> = Vec::new();
    let mut den = BigInt::one();
    for (p, c) in parts {
        if c.is_zero() {
            continue;
        }
        for (m, v) in &p.terms {
            let prod = v * c;
            den = den.lcm(prod.denom());
            products.push((*m, prod));
        }
    }
    let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
    for (m, prod) in products {
        let n = prod.numer() * (&den / prod.denom());
        *acc.entry(m).or_insert_with(BigInt::zero) += n;
    }
    MultiPoly::from_integer_terms(&den, acc)
}

fn mul_polys(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero();
    }
    if a.terms.len() == 1 {
        let (m, c) = a.terms.iter().next().unwrap();
        return b.mul_monomial(m).scale(c);
    }
    if b.terms.len() == 1 {
        let (m, c) = b.terms.iter().next().unwrap();
        return a.mul_monomial(m).scale(c);
    }
    let (da, ta) = a.to_integer_terms();
    let (db, tb) = b.to_integer_terms();
    let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(ta.len() * 2);
    for (ma, ca) in &ta {
        for (mb, cb) in &tb {
            let e = acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero);
            *e += ca * cb;
        }
    }
    MultiPoly::from_integer_terms(&(da * db), acc)
}

fn add_polys(a: &MultiPoly, b: &MultiPoly, sign: bool) -> MultiPoly {
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.add_term(*m, if sign { c.clone() } else { -c.clone() });
    }
    out
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        add_polys(self, rhs, true)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        add_polys(self, rhs, false)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        mul_polys(self, rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$f(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", VARS[i])?;
        if e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

/// Canonical text: terms in descending graded-lex order, e.g. `x^5 + x^2*y*z^2 - z^5`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.degree() == 0 {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::rational::rat;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn linear_combination_with_shared_denominators() {
        let half = rat(1) / rat(2);
        let parts = vec![(p("1/2*x + 1/3"), half.clone()), (p("1/6*x"), rat(3))];
        assert_eq!(linear_combination(&parts), p("3/4*x + 1/6"));
        // substitution goes through the same path
        let s = [p("x + 4/7"), p("y"), p("1/2*x + 3/2")];
        let f = p("1/6*z^2 - 1/2*x*z + 1/4");
        let direct = &(&(&p("1/6") * &(&s[2] * &s[2])) - &(&p("1/2") * &(&s[0] * &s[2]))) + &p("1/4");
        assert_eq!(f.substitute(&s), direct);
    }

    #[test]
    fn grlex_order() {
        assert!(Monomial([1, 0, 0]) > Monomial([0, 1, 0]));
        assert!(Monomial([0, 0, 2]) > Monomial([1, 0, 0]));
        assert!(Monomial([2, 1, 2]) > Monomial([0, 0, 5]));
        assert!(Monomial([5, 0, 0]) > Monomial([2, 1, 2]));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("x+y") * &p("x-y"), p("x^2-y^2"));
        assert_eq!(&p("x^2*y - z^3") + &MultiPoly::zero(), p("x^2*y - z^3"));
        assert_eq!(&p("x^2*y-z^3") * &p("x^2"), p("x^4*y - x^2*z^3"));
    }

    #[test]
    fn substitute_examples() {
        let s = [p("z"), p("x"), p("y")];
        assert_eq!(p("x^2*y").substitute(&s), p("z^2*x"));
        let s = [p("y*z"), p("x*z"), p("z")];
        assert_eq!(p("x+y").substitute(&s), p("y*z+x*z"));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x^5").partial(0), p("5*x^4"));
        assert_eq!(p("x^2*y - z^3").partial(1), p("x^2"));
        assert_eq!(
            p("x^2*y*z^2 - z^5 + x^5").partial(2),
            p("2*x^2*y*z - 5*z^4")
        );
    }

    #[test]
    fn order_examples() {
        // the first and third components of the degree-5 example map in the chart y = 1
        assert_eq!(p("x^2*z^2 - z^5 + x^5").order(), Some(4));
        assert_eq!(MultiPoly::one().order(), Some(0));
        assert_eq!(p("x^3*z - x*z^4").order(), Some(4));
    }

    #[test]
    fn printing_is_descending_grlex() {
        assert_eq!(p("x^5 - z^5 + x^2*y*z^2").to_string(), "x^5 + x^2*y*z^2 - z^5");
        assert_eq!(p("-3/2*x + 1").to_string(), "-3/2*x + 1");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    #[test]
    fn division() {
        let a = p("x^3 + y^3");
        let b = p("x + y");
        assert_eq!(a.div_exact(&b), Some(p("x^2 - x*y + y^2")));
        let (q, r) = p("x^2 + 1").div_rem(&p("x"));
        assert_eq!(q, p("x"));
        assert_eq!(r, p("1"));
    }

    #[test]
    fn primitive_and_monic() {
        let (c, q) = p("-2/3*x + 4/3*y").integer_primitive();
        assert_eq!(c, Rational::new((-2).into(), 3.into()));
        assert_eq!(q, p("x - 2*y"));
        assert_eq!(p("3*x + 6").monic(), p("x + 2"));
    }

    #[test]
    fn eval_and_specialize() {
        let f = p("x^2*y*z^2 - z^5 + x^5");
        assert_eq!(f.eval(&[rat(1), rat(1), rat(1)]), rat(1));
        assert_eq!(f.specialize(1, &rat(1)), p("x^2*z^2 - z^5 + x^5"));
    }
}
