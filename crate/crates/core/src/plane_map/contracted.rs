//! Curves contracted to points, found among the factors of the jacobian.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PlaneMap, ProjPoint};
use crate::algebra::gcd::squarefree_decomposition;
use crate::algebra::modular::{self, PolyP};
use crate::algebra::unipoly::binary_form_roots;
use crate::algebra::{MultiPoly, Rational};
use crate::error::{Error, Result};

/// An irreducible curve `V(polynomial)` mapped to the single point `image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedCurve {
    pub polynomial: MultiPoly,
    pub image: ProjPoint,
}

#[derive(Clone, Debug, Default)]
pub struct ContractedReport {
    /// Certified contracted curves whose irreducibility is established.
    pub curves: Vec<ContractedCurve>,
    /// Square-free jacobian factors of degree >= 4 with no rational linear factor;
    /// irreducibility unknown. Paired with the image when the factor is contracted.
    pub unsplit: Vec<(MultiPoly, Option<ProjPoint>)>,
}

/// Points sampled on each curve over F_p as an independent check of contraction.
pub const FIELD_CHECK_POINTS: usize = 20;

pub fn contracted_curves(f: &PlaneMap) -> Result<Vec<ContractedCurve>> {
    let r = contracted_curves_report(f)?;
    if let Some((h, _)) = r.unsplit.first() {
        return Err(Error::FactorizationIncomplete {
            factor: h.to_string(),
            degree: h.total_degree().unwrap_or(0),
        });
    }
    Ok(r.curves)
}

pub fn contracted_curves_report(f: &PlaneMap) -> Result<ContractedReport> {
    let jac = f.jacobian()?;
    let mut report = ContractedReport::default();
    let mut factors: Vec<MultiPoly> = Vec::new();
    for (h, _) in squarefree_decomposition(&jac) {
        let (lines, rest) = split_linear_factors(&h);
        factors.extend(lines);
        if rest.total_degree().unwrap_or(0) > 0 {
            factors.push(rest);
        }
    }
    for h in factors {
        let deg = h.total_degree().unwrap_or(0);
        let image = contraction_image(f, &h)?;
        if deg >= 4 {
            report.unsplit.push((h, image));
            continue;
        }
        if let Some(image) = image {
            if !field_check(f, &h, &image, FIELD_CHECK_POINTS) {
                return Err(Error::Invalid(format!(
                    "contraction of {} certified symbolically but fails the finite-field check",
                    h
                )));
            }
            report.curves.push(ContractedCurve {
                polynomial: h,
                image,
            });
        }
    }
    report.curves.sort_by(|a, b| {
        a.polynomial
            .total_degree()
            .cmp(&b.polynomial.total_degree())
            .then_with(|| b.polynomial.leading_monomial().cmp(&a.polynomial.leading_monomial()))
    });
    Ok(report)
}

/// Splits off the rational linear factors of a square-free form.
///
/// A line `ax + by + cz` with `a != 0` meets `z = 0` and `y = 0` at roots of the
/// restrictions of `h`; lines with `a = 0` pass through `(1:0:0)` and meet `x = 0`.
pub fn split_linear_factors(h: &MultiPoly) -> (Vec<MultiPoly>, MultiPoly) {
    let mut lines = Vec::new();
    let mono = h.monomial_content();
    let mut rest = h.div_monomial(&mono).unwrap();
    for v in 0..3 {
        for _ in 0..mono.0[v] {
            lines.push(MultiPoly::var(v));
        }
    }
    if rest.total_degree().unwrap_or(0) == 0 {
        return (lines, rest.monic());
    }
    let pts = |fixed: usize, a: usize, b: usize| -> Vec<[Rational; 3]> {
        let r = rest.specialize(fixed, &Rational::zero());
        let (roots, at_inf) = binary_form_roots(&r, a, b);
        let mut out: Vec<[Rational; 3]> = roots
            .distinct_roots()
            .into_iter()
            .map(|t| {
                let mut p: [Rational; 3] = Default::default();
                p[a] = t;
                p[b] = Rational::from_integer(1.into());
                p
            })
            .collect();
        if at_inf > 0 {
            let mut p: [Rational; 3] = Default::default();
            p[a] = Rational::from_integer(1.into());
            out.push(p);
        }
        out
    };
    let on_z = pts(2, 0, 1);
    let on_y = pts(1, 0, 2);
    let on_x = pts(0, 1, 2);
    let e0 = [Rational::from_integer(1.into()), Rational::zero(), Rational::zero()];
    let mut candidates: Vec<MultiPoly> = Vec::new();
    for p in &on_z {
        for q in &on_y {
            candidates.push(line_through(p, q));
        }
    }
    for q in &on_x {
        candidates.push(line_through(&e0, q));
    }
    for l in candidates {
        if l.is_zero() {
            continue;
        }
        while rest.total_degree().unwrap_or(0) > 0 {
            match rest.div_exact(&l) {
                Some(q) => {
                    rest = q;
                    lines.push(l.monic());
                }
                None => break,
            }
        }
    }
    (lines, rest.monic())
}

fn line_through(p: &[Rational; 3], q: &[Rational; 3]) -> MultiPoly {
    let c = [
        &p[1] * &q[2] - &p[2] * &q[1],
        &p[2] * &q[0] - &p[0] * &q[2],
        &p[0] * &q[1] - &p[1] * &q[0],
    ];
    MultiPoly::from_terms(
        c.into_iter()
            .enumerate()
            .map(|(i, v)| (crate::algebra::Monomial::var(i), v)),
    )
}

/// If `f` contracts `V(h)` (wedge criterion in the three affine charts), the image point.
pub fn contraction_image(f: &PlaneMap, h: &MultiPoly) -> Result<Option<ProjPoint>> {
    if !wedge_criterion(f, h) {
        return Ok(None);
    }
    // Normal forms mod h of the components are proportional to a common form.
    let r: Vec<MultiPoly> = f.components().iter().map(|c| c.rem(h)).collect();
    let k = match r.iter().position(|p| !p.is_zero()) {
        Some(k) => k,
        None => return Ok(None),
    };
    let lead = r[k].leading_monomial().unwrap();
    let mut coords: [Rational; 3] = Default::default();
    for i in 0..3 {
        let lam = r[i].coeff(&lead) / r[k].coeff(&lead);
        if r[i] != r[k].scale(&lam) {
            return Ok(None);
        }
        coords[i] = lam;
    }
    Ok(Some(ProjPoint::new(coords)?))
}

/// `(f_i ∂_a f_j − f_j ∂_a f_i) ∂_b h − (f_i ∂_b f_j − f_j ∂_b f_i) ∂_a h ≡ 0 mod h`
/// in each affine chart where the curve is visible, for all pairs `(i, j)`.
pub fn wedge_criterion(f: &PlaneMap, h: &MultiPoly) -> bool {
    let mut seen = false;
    for chart in 0..3 {
        let hh = h.dehomogenize(chart);
        if hh.total_degree().unwrap_or(0) == 0 {
            continue;
        }
        seen = true;
        let (a, b) = match chart {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let fs: Vec<MultiPoly> = f.components().iter().map(|c| c.dehomogenize(chart)).collect();
        let ha = hh.partial(a);
        let hb = hh.partial(b);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let wa = &(&fs[i] * &fs[j].partial(a)) - &(&fs[j] * &fs[i].partial(a));
            let wb = &(&fs[i] * &fs[j].partial(b)) - &(&fs[j] * &fs[i].partial(b));
            let w = &(&wa * &hb) - &(&wb * &ha);
            if !w.rem(&hh).is_zero() {
                return false;
            }
        }
    }
    seen
}

/// Evaluates `f` at points of `V(h)` over a large prime field and compares with `image`.
pub fn field_check(f: &PlaneMap, h: &MultiPoly, image: &ProjPoint, wanted: usize) -> bool {
    let p = modular::primes_below(modular::LARGE_PRIME_START).nth(1).unwrap();
    let img: Option<Vec<u64>> = image
        .coords()
        .iter()
        .map(|c| modular::reduce_rational(c, p))
        .collect();
    let Some(img) = img else { return true };
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    // Solve for the variable in which h has the largest degree.
    let v = (0..3).max_by_key(|&i| h.degree_in(i).unwrap_or(0)).unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != v).collect();
    let mut found = 0;
    for _ in 0..wanted * 20 {
        let mut pt = [0u64; 3];
        pt[others[0]] = rng.gen_range(0..p);
        pt[others[1]] = rng.gen_range(0..p);
        let Some(uni) = specialize_two(h, v, &pt, p) else { return true };
        for root in modular::roots_mod_p(&uni, p, &mut rng) {
            pt[v] = root;
            let val: Option<Vec<u64>> = f
                .components()
                .iter()
                .map(|c| eval_mod(c, &pt, p))
                .collect();
            let Some(val) = val else { return true };
            if val.iter().all(|&c| c == 0) {
                continue;
            }
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                if modular::mulmod(val[i], img[j], p) != modular::mulmod(val[j], img[i], p) {
                    return false;
                }
            }
            found += 1;
            if found >= wanted {
                return true;
            }
        }
    }
    found >= wanted
}

fn eval_mod(q: &MultiPoly, pt: &[u64; 3], p: u64) -> Option<u64> {
    let mut acc = 0;
    for (m, c) in q.terms() {
        let mut t = modular::reduce_rational(c, p)?;
        for i in 0..3 {
            t = modular::mulmod(t, modular::powmod(pt[i], m.0[i] as u64, p), p);
        }
        acc = modular::addmod(acc, t, p);
    }
    Some(acc)
}

fn specialize_two(q: &MultiPoly, v: usize, pt: &[u64; 3], p: u64) -> Option<PolyP> {
    let n = q.degree_in(v).unwrap_or(0) as usize + 1;
    let mut out = vec![0u64; n];
    for (m, c) in q.terms() {
        let mut t = modular::reduce_rational(c, p)?;
        for i in (0..3).filter(|&i| i != v) {
            t = modular::mulmod(t, modular::powmod(pt[i], m.0[i] as u64, p), p);
        }
        let k = m.0[v] as usize;
        out[k] = modular::addmod(out[k], t, p);
    }
    Some(modular::trim(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn psi() -> PlaneMap {
        PlaneMap::parse("(x^2*y*z^2 - z^5 + x^5 : x^2*(x^2*y - z^3) : x*z*(x^2*y - z^3))").unwrap()
    }

    #[test]
    fn psi_contracts_a_line_and_a_cuspidal_cubic() {
        let c = contracted_curves(&psi()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].polynomial, parse_poly("x").unwrap());
        assert_eq!(c[1].polynomial, parse_poly("x^2*y - z^3").unwrap());
        let e = ProjPoint::from_ints([1, 0, 0]).unwrap();
        assert!(c.iter().all(|cc| cc.image == e));
    }

    #[test]
    fn identity_contracts_nothing() {
        assert!(contracted_curves(&PlaneMap::identity()).unwrap().is_empty());
    }

    #[test]
    fn sigma_contracts_coordinate_lines() {
        let s = PlaneMap::parse("(y*z : x*z : x*y)").unwrap();
        let c = contracted_curves(&s).unwrap();
        let polys: Vec<String> = c.iter().map(|c| c.polynomial.to_string()).collect();
        assert_eq!(polys, vec!["x", "y", "z"]);
        assert_eq!(c[0].image, ProjPoint::from_ints([1, 0, 0]).unwrap());
    }

    #[test]
    fn linear_factor_extraction() {
        let h = parse_poly("(x + 2*y - z)*(3*y + z)*(x^2 + y^2 + z^2)").unwrap();
        let (lines, rest) = split_linear_factors(&h);
        assert_eq!(lines.len(), 2);
        assert_eq!(rest, parse_poly("x^2 + y^2 + z^2").unwrap());
    }

    #[test]
    fn wedge_rejects_non_contracted() {
        // the identity does not contract the line x = 0
        assert!(!wedge_criterion(&PlaneMap::identity(), &parse_poly("x").unwrap()));
    }
}
