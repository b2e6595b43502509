//! Multivariate gcd by content / primitive-part recursion with a primitive
//! pseudo-remainder sequence, plus square-free decomposition.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modular::{self, PolyP};
use super::multipoly::{Monomial, MultiPoly};
use super::rational::Rational;

/// Greatest common divisor with leading graded-lex coefficient 1; `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = Monomial([
        ma.0[0].min(mb.0[0]),
        ma.0[1].min(mb.0[1]),
        ma.0[2].min(mb.0[2]),
    ]);
    let a = a.div_monomial(&ma).unwrap();
    let b = b.div_monomial(&mb).unwrap();
    let g = gcd_rec(&a, &b);
    g.mul_monomial(&mono).monic()
}

pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a MultiPoly>) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for p in polys {
        acc = gcd(&acc, p);
        if acc.is_constant() && !acc.is_zero() {
            return MultiPoly::one();
        }
    }
    acc
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if coprime_fast(&[a, b]) {
        return MultiPoly::one();
    }
    // Pick the shared variable with the smallest degree to keep the PRS short.
    let mut best: Option<(u32, usize)> = None;
    for v in 0..3 {
        let da = a.degree_in(v).unwrap_or(0);
        let db = b.degree_in(v).unwrap_or(0);
        if da > 0 && db > 0 {
            let k = da.max(db);
            if best.is_none_or(|(bk, _)| k < bk) {
                best = Some((k, v));
            }
        }
    }
    let v = match best {
        Some((_, v)) => v,
        None => {
            // No shared variable: the gcd lives in the contents.
            let va = (0..3).find(|&v| a.degree_in(v).unwrap_or(0) > 0).unwrap();
            let ca = content_in(a, va);
            return gcd_rec(&ca, b);
        }
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = prs_gcd(&pa, &pb, v);
    (&c * &g).monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let coeffs = p.coefficients_in(var);
    let mut acc = MultiPoly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        acc = if acc.is_zero() { c.monic() } else { gcd(&acc, c) };
        if acc.is_constant() {
            return MultiPoly::one();
        }
    }
    acc
}

pub fn primitive_part_in(p: &MultiPoly, var: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    p.div_exact(&c).expect("content divides").integer_primitive().1
}

fn trim(mut v: Vec<MultiPoly>) -> Vec<MultiPoly> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Pseudo-remainder of `a` by `b` as coefficient vectors in the main variable.
fn prem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        let mut next: Vec<MultiPoly> = r.iter().map(|c| c * lb).collect();
        for (j, bc) in b.iter().enumerate() {
            next[k + j] = &next[k + j] - &(&lr * bc);
        }
        r = trim(next);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn prs_gcd(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if b.is_zero() {
            return primitive_part_in(&a, v).monic();
        }
        if b.degree_in(v).unwrap_or(0) == 0 {
            return MultiPoly::one();
        }
        let r = prem(&a.coefficients_in(v), &b.coefficients_in(v));
        let r = MultiPoly::from_coefficients_in(v, &r);
        a = b;
        b = if r.is_zero() { r } else { primitive_part_in(&r, v) };
    }
}

/// Sound but incomplete coprimality test: `true` means the polynomials certainly have
/// constant gcd; `false` means "unknown".
///
/// For each variable, the others are specialized to random values mod a large prime.
/// If some input keeps its degree in that variable and the specialized images have
/// trivial gcd, the true gcd has degree 0 in that variable.
pub fn coprime_fast(polys: &[&MultiPoly]) -> bool {
    if polys.iter().any(|p| p.is_zero()) {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ff_ee11);
    let p = modular::primes_below(modular::LARGE_PRIME_START).next().unwrap();
    'var: for v in 0..3 {
        if polys.iter().all(|q| q.degree_in(v).unwrap_or(0) == 0) {
            continue;
        }
        for _attempt in 0..3 {
            let vals: [u64; 3] = [rng.gen_range(1..p), rng.gen_range(1..p), rng.gen_range(1..p)];
            let mut acc: Option<PolyP> = None;
            let mut kept = false;
            let mut ok = true;
            for q in polys {
                let h = match specialize_mod(q, v, &vals, p) {
                    Some(h) => h,
                    None => {
                        ok = false;
                        break;
                    }
                };
                if h.len() as u32 == q.degree_in(v).unwrap_or(0) + 1 {
                    kept = true;
                }
                acc = Some(match acc {
                    None => modular::poly_monic(&h, p),
                    Some(g) => modular::poly_gcd(&g, &h, p),
                });
            }
            if ok && kept && acc.is_some_and(|g| g.len() == 1) {
                continue 'var;
            }
        }
        return false;
    }
    true
}

/// Image of `q` in F_p[t] where variable `v` becomes t and the others take `vals`.
fn specialize_mod(q: &MultiPoly, v: usize, vals: &[u64; 3], p: u64) -> Option<PolyP> {
    let n = q.degree_in(v).unwrap_or(0) as usize + 1;
    let mut out = vec![0u64; n];
    for (m, c) in q.terms() {
        let mut coef = modular::reduce_rational(c, p)?;
        for i in 0..3 {
            if i != v {
                coef = modular::mulmod(coef, modular::powmod(vals[i], m.0[i] as u64, p), p);
            }
        }
        let k = m.0[v] as usize;
        out[k] = modular::addmod(out[k], coef, p);
    }
    Some(modular::trim(out))
}

/// Square-free decomposition `p = c * prod (f, k)` with pairwise coprime, square-free,
/// monic factors `f` of multiplicity `k`. Constant factors are dropped.
pub fn squarefree_decomposition(p: &MultiPoly) -> Vec<(MultiPoly, u32)> {
    let mut out: Vec<(MultiPoly, u32)> = Vec::new();
    if p.is_zero() || p.is_constant() {
        return out;
    }
    // Monomial part first, variable by variable.
    let mono = p.monomial_content();
    for v in 0..3 {
        if mono.0[v] > 0 {
            push_factor(&mut out, MultiPoly::var(v), mono.0[v]);
        }
    }
    let rest = p.div_monomial(&mono).unwrap();
    sqf_rec(&rest, 0, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.leading_monomial().cmp(&b.0.leading_monomial())));
    out
}

fn push_factor(out: &mut Vec<(MultiPoly, u32)>, f: MultiPoly, k: u32) {
    if f.is_constant() {
        return;
    }
    out.push((f.monic(), k));
}

fn sqf_rec(p: &MultiPoly, var: usize, out: &mut Vec<(MultiPoly, u32)>) {
    if p.is_constant() || var > 2 {
        return;
    }
    if p.degree_in(var).unwrap_or(0) == 0 {
        sqf_rec(p, var + 1, out);
        return;
    }
    let c = content_in(p, var);
    let pp = p.div_exact(&c).unwrap();
    // Yun's algorithm with respect to `var` on the primitive part.
    let d = pp.partial(var);
    let a0 = gcd(&pp, &d);
    let mut b = pp.div_exact(&a0).unwrap();
    let mut cc = d.div_exact(&a0).unwrap();
    let mut dd = &cc - &b.partial(var);
    let mut i = 1;
    loop {
        let a = gcd(&b, &dd);
        push_factor(out, a.clone(), i);
        b = b.div_exact(&a).unwrap();
        if b.is_constant() {
            break;
        }
        cc = dd.div_exact(&a).unwrap();
        dd = &cc - &b.partial(var);
        i += 1;
    }
    sqf_rec(&c, var + 1, out);
}

/// Product of `(f, k)` factors, for checking decompositions.
pub fn expand_factors(factors: &[(MultiPoly, u32)]) -> MultiPoly {
    factors
        .iter()
        .fold(MultiPoly::one(), |acc, (f, k)| &acc * &f.pow(*k))
}

/// The constant `c` with `p = c * expand_factors(factors)`.
pub fn decomposition_scalar(p: &MultiPoly, factors: &[(MultiPoly, u32)]) -> Rational {
    let e = expand_factors(factors);
    if e.is_zero() {
        return Rational::zero();
    }
    p.leading_coefficient() / e.leading_coefficient()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(gcd(&p("x^2-y^2"), &p("x-y")), p("x-y"));
        assert_eq!(gcd(&p("x^2*y*z"), &p("x*y^2*z")), p("x*y*z"));
        assert_eq!(gcd(&p("x^2*y*z"), &MultiPoly::zero()), p("x^2*y*z"));
        assert_eq!(gcd(&p("3*x+3"), &p("2*x+2")), p("x+1"));
    }

    #[test]
    fn nontrivial_common_factor() {
        let g = p("x^2*y - z^3");
        let a = &g * &p("x + 2*z");
        let b = &g * &p("y^2 - x*z + 1");
        assert_eq!(gcd(&a, &b), g);
        let h = p("x*y + y*z + 3");
        assert_eq!(gcd(&(&a * &h), &(&b * &h)), (&g * &h).monic());
    }

    #[test]
    fn fast_test_is_sound() {
        assert!(coprime_fast(&[&p("x^2*y - z^3"), &p("x^5 + z^5")]));
        assert!(!coprime_fast(&[&p("(x+y)*(x-z)"), &p("(x+y)*z")]));
    }

    #[test]
    fn squarefree() {
        let f = &(&p("x").pow(9) * &p("x^2*y - z^3")) * &p("5");
        let d = squarefree_decomposition(&f);
        assert_eq!(d, vec![(p("x^2*y - z^3"), 1), (p("x"), 9)]);
        let f = &p("(x+y)^2").pow(1) * &p("(x*y - z^2)^3");
        let d = squarefree_decomposition(&f);
        assert_eq!(d, vec![(p("x + y"), 2), (p("x*y - z^2"), 3)]);
    }
}
