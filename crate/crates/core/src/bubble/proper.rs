//! Proper base points: common zeros of the three components in P^2.
//!
//! After a shear moving a non-base point to (0:0:1), the x/y ratios of base points
//! with y != 0 are common roots of two resultants `Res_z(F, G)` and `Res_z(F, H)` of
//! random combinations. Those resultants are computed modulo primes by evaluation
//! and interpolation; their gcd is lifted by CRT and rational reconstruction, and
//! every rational root is verified with exact univariate gcds. The line y = 0 is
//! treated exactly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::anchor_chart;
use crate::algebra::modular::{self, PolyP};
use crate::algebra::unipoly::rational_roots;
use crate::algebra::{Monomial, MultiPoly, Rational, UniPoly};
use crate::error::{Error, Result};
use crate::plane_map::{PlaneMap, ProjPoint};

const SHEARS: [(i64, i64); 8] = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 3), (-3, 2), (5, -7)];

/// Proper base points with their multiplicities, sorted by descending coordinates.
pub fn proper_base_points(f: &PlaneMap) -> Result<Vec<(ProjPoint, u32)>> {
    let points = base_locus(f.components())?;
    let mut out = Vec::new();
    for p in points {
        let s = anchor_chart(&p);
        let m = f
            .components()
            .iter()
            .filter_map(|c| c.substitute(&s).order())
            .min()
            .expect("a map has a nonzero component");
        debug_assert!(m >= 1);
        out.push((p, m));
    }
    out.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(out)
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn univariate_gcd(polys: &[UniPoly]) -> Option<UniPoly> {
    let mut it = polys.iter().filter(|p| !p.is_zero());
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, p| acc.gcd(p)))
}

fn irrational(residual: &[(UniPoly, u32)], var: usize) -> Error {
    Error::IrrationalBaseLocus {
        residual: residual
            .iter()
            .map(|(p, _)| p.to_multipoly(var).to_string())
            .collect::<Vec<_>>()
            .join(", "),
    }
}

/// Common zeros of three homogeneous forms without common factor.
pub(crate) fn base_locus(comps: &[MultiPoly; 3]) -> Result<BTreeSet<ProjPoint>> {
    let d = comps[0].total_degree().unwrap_or(0).max(comps[1].total_degree().unwrap_or(0)).max(
        comps[2].total_degree().unwrap_or(0),
    );
    let mut found = BTreeSet::new();
    if d == 0 {
        return Ok(found);
    }
    let (alpha, beta) = SHEARS
        .iter()
        .copied()
        .find(|&(a, b)| comps.iter().any(|c| !c.eval(&[r(a), r(b), r(1)]).is_zero()))
        .ok_or_else(|| Error::Invalid("no shear avoids the base locus".into()))?;
    let shear = [
        &MultiPoly::x() + &MultiPoly::z().scale(&r(alpha)),
        &MultiPoly::y() + &MultiPoly::z().scale(&r(beta)),
        MultiPoly::z(),
    ];
    let g: Vec<MultiPoly> = comps.iter().map(|c| c.substitute(&shear)).collect();
    let unshear = |p: [Rational; 3]| -> ProjPoint {
        let [x, y, z] = p;
        ProjPoint::new([x + &z * r(alpha), y + &z * r(beta), z]).unwrap()
    };

    // y = 0: points (1:0:z); (0:0:1) is not a base point after the shear.
    let on_line: Vec<UniPoly> = g
        .iter()
        .map(|c| UniPoly::from_multipoly(&c.specialize(0, &r(1)).specialize(1, &r(0)), 2).unwrap())
        .collect();
    let common = univariate_gcd(&on_line)
        .ok_or_else(|| Error::Invalid("components share the factor y".into()))?;
    if common.degree().unwrap_or(0) > 0 {
        let rep = rational_roots(&common);
        if rep.residual_degree() > 0 {
            return Err(irrational(&rep.residual, 2));
        }
        for z in rep.distinct_roots() {
            found.insert(unshear([r(1), r(0), z]));
        }
    }

    // y = 1: the x-values are roots of G = gcd(Res_z(c0, c1), Res_z(c0, c2)) for random
    // combinations c_i. G is reconstructed from its images modulo several primes
    // until all of its roots are explained by exactly verified fibres.
    let ints: Vec<MultiPoly> = g.iter().map(|c| c.integer_primitive().1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ba5e);
    let mut primes = modular::primes_below(modular::LARGE_PRIME_START).skip(3);
    let mut unexplained = 0usize;
    for _attempt in 0..3 {
        let combos: Vec<MultiPoly> = (0..3)
            .map(|_| {
                let w: Vec<Rational> = (0..3).map(|_| r(rng.gen_range(-20..=20))).collect();
                &(&ints[0].scale(&w[0]) + &ints[1].scale(&w[1])) + &ints[2].scale(&w[2])
            })
            .collect();
        let lead = Monomial([0, 0, d]);
        if combos.iter().any(|c| c.coeff(&lead).is_zero()) {
            continue;
        }
        // CRT images of the monic square-free part of G, all of the same degree
        let mut acc: Option<(Vec<BigInt>, BigInt)> = None;
        let mut previous: Option<UniPoly> = None;
        for _ in 0..MAX_PRIMES {
            let p = primes.next().expect("enough primes");
            if modular::reduce_rational(&combos[0].coeff(&lead), p).unwrap_or(0) == 0 {
                continue;
            }
            let Some(r1) = resultant_in_t(&combos[0], &combos[1], d, p) else { continue };
            let Some(r2) = resultant_in_t(&combos[0], &combos[2], d, p) else { continue };
            if r1.is_empty() || r2.is_empty() {
                continue;
            }
            let gg = modular::poly_gcd(&r1, &r2, p);
            if gg.len() <= 1 {
                return Ok(found);
            }
            let sqf = {
                let dg = modular::poly_deriv(&gg, p);
                let c = modular::poly_gcd(&gg, &dg, p);
                modular::poly_monic(&modular::poly_divrem(&gg, &c, p).0, p)
            };
            acc = match acc {
                // unlucky primes raise the degree; keep the smallest one seen
                Some((u, m)) if u.len() < sqf.len() => Some((u, m)),
                Some((u, m)) if u.len() == sqf.len() => Some(crt(&u, &m, &sqf, p)),
                _ => {
                    previous = None;
                    Some((sqf.iter().map(|&c| modular::to_bigint(c)).collect(), modular::to_bigint(p)))
                }
            };
            let (u, m) = acc.as_ref().unwrap();
            let Some(coeffs) = u.iter().map(|c| modular::rational_reconstruct(c, m)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let candidate = UniPoly::new(coeffs);
            let total = candidate.degree().unwrap_or(0) as usize;
            let rep = rational_roots(&candidate);
            let mut explained = 0;
            let mut attempt_points = Vec::new();
            for t in rep.distinct_roots() {
                let fibre: Vec<UniPoly> = g
                    .iter()
                    .map(|c| UniPoly::from_multipoly(&c.specialize(0, &t).specialize(1, &r(1)), 2).unwrap())
                    .collect();
                let Some(common) = univariate_gcd(&fibre) else {
                    return Err(Error::Invalid("components share a linear factor".into()));
                };
                if common.degree().unwrap_or(0) == 0 {
                    continue;
                }
                let zs = rational_roots(&common);
                if zs.residual_degree() > 0 {
                    return Err(irrational(&zs.residual, 2));
                }
                explained += 1;
                for z in zs.distinct_roots() {
                    attempt_points.push(unshear([t.clone(), r(1), z]));
                }
            }
            unexplained = total - explained;
            if unexplained == 0 {
                found.extend(attempt_points);
                return Ok(found);
            }
            // a stable reconstruction with unexplained roots: try other combinations
            if previous.as_ref() == Some(&candidate) {
                break;
            }
            previous = Some(candidate);
        }
    }
    Err(Error::IrrationalBaseLocus {
        residual: format!("{} unresolved x/y value(s) of the base locus", unexplained),
    })
}

/// Primes per combination before giving up; 62 bits each.
const MAX_PRIMES: usize = 48;

fn crt(u: &[BigInt], m: &BigInt, v: &[u64], p: u64) -> (Vec<BigInt>, BigInt) {
    let m_inv = modular::invmod(modular::reduce_int(m, p), p).expect("distinct primes");
    let mp = m * modular::to_bigint(p);
    let out = u
        .iter()
        .zip(v)
        .map(|(a, &b)| {
            let diff = modular::submod(b, modular::reduce_int(a, p), p);
            let k = modular::mulmod(diff, m_inv, p);
            a + m * modular::to_bigint(k)
        })
        .collect();
    (out, mp)
}

/// `Res_z(a(t, 1, z), b(t, 1, z))` modulo `p` as a polynomial in `t`; `None` if a
/// coefficient denominator vanishes mod `p`.
fn resultant_in_t(a: &MultiPoly, b: &MultiPoly, d: u32, p: u64) -> Option<PolyP> {
    let n = (d * d + 1) as usize;
    let reduce = |q: &MultiPoly| -> Option<Vec<(u32, u32, u64)>> {
        q.terms()
            .map(|(m, c)| Some((m.0[0], m.0[2], modular::reduce_rational(c, p)?)))
            .collect()
    };
    let (ta, tb) = (reduce(a)?, reduce(b)?);
    let at = |terms: &[(u32, u32, u64)], pows: &[u64]| -> PolyP {
        let mut out = vec![0u64; d as usize + 1];
        for &(ex, ez, c) in terms {
            out[ez as usize] = modular::addmod(out[ez as usize], modular::mulmod(c, pows[ex as usize], p), p);
        }
        out
    };
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for j in 0..n as u64 {
        let t = j + 1;
        let mut pows = vec![1u64; d as usize + 1];
        for k in 1..pows.len() {
            pows[k] = modular::mulmod(pows[k - 1], t, p);
        }
        let fa = at(&ta, &pows);
        let fb = at(&tb, &pows);
        xs.push(t);
        ys.push(modular::resultant_mod_p(&fa, d as usize, &fb, d as usize, p));
    }
    Some(modular::interpolate(&xs, &ys, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(f: &str) -> Vec<(String, u32)> {
        proper_base_points(&PlaneMap::parse(f).unwrap())
            .unwrap()
            .into_iter()
            .map(|(p, m)| (p.to_string(), m))
            .collect()
    }

    #[test]
    fn standard_quadratic() {
        assert_eq!(
            pts("(y*z : x*z : x*y)"),
            vec![("(1:0:0)".to_string(), 1), ("(0:1:0)".to_string(), 1), ("(0:0:1)".to_string(), 1)]
        );
    }

    #[test]
    fn single_point_of_high_multiplicity() {
        let f = "(x^2*y*z^2 - z^5 + x^5 : x^2*(x^2*y - z^3) : x*z*(x^2*y - z^3))";
        assert_eq!(pts(f), vec![("(0:1:0)".to_string(), 4)]);
        assert!(pts("(x : y : z)").is_empty());
    }

    #[test]
    fn shifted_points_with_fractions() {
        // the standard quadratic map conjugated so base points move off the axes
        let f = PlaneMap::parse("(y*z : x*z : x*y)").unwrap();
        let a = crate::plane_map::Automorphism::from_ints([[2, 1, 0], [0, 3, 1], [1, 0, 5]]).unwrap();
        let g = crate::plane_map::act(&a, &f, crate::plane_map::Side::Conjugate);
        let got = proper_base_points(&g).unwrap();
        let mut expected: Vec<ProjPoint> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .map(|c| a.apply(&ProjPoint::from_ints(*c).unwrap()))
            .collect();
        expected.sort_by(|a, b| b.cmp(a));
        assert_eq!(got.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>(), expected);
    }

    #[test]
    fn irrational_points_are_reported() {
        // meets y = 0 where x^2 = 2 z^2
        let f = PlaneMap::parse("(y*(x^2 - 2*z^2) : y^2*z : z*(x^2 - 2*z^2))").unwrap();
        assert!(matches!(proper_base_points(&f), Err(Error::IrrationalBaseLocus { .. })));
    }
}
