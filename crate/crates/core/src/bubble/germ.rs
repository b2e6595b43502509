//! Germs of linear systems at a chart origin and the blow-up step.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::rational::denominator_lcm;
use crate::algebra::unipoly::rational_roots;
use crate::algebra::{Monomial, MultiPoly, Rational, UniPoly};
use crate::error::{Error, Result};

/// Three components in local coordinates `u` (variable x) and `v` (variable y).
/// With `precision: Some(p)`, every term of total degree below `p` is exact and no
/// higher terms are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystemGerm {
    pub comps: [MultiPoly; 3],
    pub precision: Option<u32>,
}

/// Result of blowing up the chart origin of a germ.
#[derive(Clone, Debug)]
pub struct Ascent {
    pub multiplicity: u32,
    /// Transform in the first chart, before translating to a point of the exceptional line.
    pub first: LinearSystemGerm,
    pub second: LinearSystemGerm,
    /// Values `c` (ascending) such that `First(c)` is again a base point.
    pub first_points: Vec<Rational>,
    pub second_origin: bool,
}

impl LinearSystemGerm {
    pub fn exact(comps: [MultiPoly; 3]) -> Self {
        LinearSystemGerm {
            comps,
            precision: None,
        }
    }

    pub fn truncated(comps: [MultiPoly; 3], precision: u32) -> Self {
        LinearSystemGerm {
            comps: comps.map(|c| c.truncate(precision)),
            precision: Some(precision),
        }
    }

    /// Minimal order among the components (the multiplicity at the origin).
    pub fn order(&self) -> Option<u32> {
        self.comps.iter().filter_map(|c| c.order()).min()
    }

    /// True when the stored terms cannot determine the multiplicity.
    pub fn is_underdetermined(&self) -> bool {
        match (self.precision, self.order()) {
            (Some(_), None) => true,
            (Some(p), Some(m)) => m >= p,
            (None, _) => false,
        }
    }

    pub fn is_base_point(&self) -> bool {
        self.comps.iter().all(|c| c.constant_term().is_zero())
    }

    /// The germ at `First(c)` on the exceptional line of the first chart.
    pub fn translate(&self, c: &Rational) -> LinearSystemGerm {
        let comps = self.comps.clone().map(|p| {
            let t = translate_v(&p, c);
            match self.precision {
                Some(pr) => t.truncate(pr),
                None => t,
            }
        });
        LinearSystemGerm {
            comps,
            precision: self.precision,
        }
    }
}

/// Blows up the chart origin. Fails with `NotABasePoint` if some component does not
/// vanish there.
pub fn blow_up_ascend(g: &LinearSystemGerm) -> Result<Ascent> {
    if !g.is_base_point() {
        return Err(Error::NotABasePoint);
    }
    if g.is_underdetermined() {
        return Err(Error::Invalid("germ precision too low to read the multiplicity".into()));
    }
    let m = g.order().ok_or(Error::ZeroMap)?;
    let new_prec = g.precision.map(|p| p - m);
    let mut first = g.comps.clone().map(|c| first_chart(&c, m));
    let mut second = g.comps.clone().map(|c| second_chart(&c, m));
    // First-chart terms are exact in u-degree only; translation must happen before
    // truncating, so the untruncated first transform is kept here.
    if let Some(p) = new_prec {
        second = second.map(|c| c.truncate(p));
        first = first.map(|c| c.truncate_u_degree(p));
    }
    let restricted: Vec<UniPoly> = g
        .comps
        .iter()
        .map(|c| {
            UniPoly::new(
                (0..=m)
                    .map(|b| c.coeff(&Monomial([m - b, b, 0])))
                    .collect(),
            )
        })
        .filter(|p| !p.is_zero())
        .collect();
    let mut common = restricted[0].clone();
    for r in &restricted[1..] {
        common = common.gcd(r);
    }
    let report = rational_roots(&common);
    if report.residual_degree() > 0 {
        let residual = report
            .residual
            .iter()
            .map(|(p, _)| p.to_multipoly(1).to_string())
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::IrrationalBaseLocus { residual });
    }
    let first_points = report.distinct_roots();
    let second_origin = g
        .comps
        .iter()
        .all(|c| c.coeff(&Monomial([0, m, 0])).is_zero());
    Ok(Ascent {
        multiplicity: m,
        first: LinearSystemGerm {
            comps: first,
            precision: new_prec,
        },
        second: LinearSystemGerm {
            comps: second,
            precision: new_prec,
        },
        first_points,
        second_origin,
    })
}

/// `p(u, uv) / u^m`.
pub(crate) fn first_chart(p: &MultiPoly, m: u32) -> MultiPoly {
    MultiPoly::from_terms(p.terms().map(|(mo, c)| {
        let [a, b, _] = mo.0;
        (Monomial([a + b - m, b, 0]), c.clone())
    }))
}

/// `p(uv, v) / v^m`.
pub(crate) fn second_chart(p: &MultiPoly, m: u32) -> MultiPoly {
    MultiPoly::from_terms(p.terms().map(|(mo, c)| {
        let [a, b, _] = mo.0;
        (Monomial([a, a + b - m, 0]), c.clone())
    }))
}

/// `p(u, v + c)`.
pub(crate) fn translate_v(p: &MultiPoly, c: &Rational) -> MultiPoly {
    if c.is_zero() {
        return p.clone();
    }
    let mut out = MultiPoly::zero();
    for (a, coeff) in p.coefficients_in(0).iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let uni = UniPoly::from_multipoly(coeff, 1).expect("coefficient is univariate in v");
        for (b, v) in taylor_shift(uni.coeffs(), c).into_iter().enumerate() {
            if !v.is_zero() {
                out.add_term(Monomial([a as u32, b as u32, 0]), v);
            }
        }
    }
    out
}

/// Coefficients of `f(v + r/s)` from those of `f`, over the integers:
/// `f(v + r/s) = s^-n Q(s v)` with `Q(w) = sum a_k s^(n-k) (w + r)^k`.
fn taylor_shift(coeffs: &[Rational], c: &Rational) -> Vec<Rational> {
    let n = coeffs.len().saturating_sub(1);
    let den = denominator_lcm(coeffs);
    let (r, s) = (c.numer(), c.denom());
    let mut s_pows = vec![BigInt::one()];
    for k in 1..=n {
        let next = &s_pows[k - 1] * s;
        s_pows.push(next);
    }
    let mut q: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a.numer() * (&den / a.denom()) * &s_pows[n - k])
        .collect();
    for i in 0..n {
        for j in (i..n).rev() {
            let t = &q[j + 1] * r;
            q[j] += t;
        }
    }
    q.into_iter()
        .enumerate()
        .map(|(j, v)| Rational::new(v, &den * &s_pows[n - j]))
        .collect()
}

/// Strict transform of a curve through the origin in the first chart at `First(c)`.
pub(crate) fn strict_first(h: &MultiPoly, c: &Rational) -> MultiPoly {
    let m = h.order().unwrap_or(0);
    translate_v(&first_chart(h, m), c)
}

/// Strict transform in the second chart.
pub(crate) fn strict_second(h: &MultiPoly) -> MultiPoly {
    let m = h.order().unwrap_or(0);
    second_chart(h, m)
}

trait TruncateU {
    fn truncate_u_degree(&self, p: u32) -> MultiPoly;
}

impl TruncateU for MultiPoly {
    fn truncate_u_degree(&self, p: u32) -> MultiPoly {
        MultiPoly::from_terms(
            self.terms()
                .filter(|(mo, _)| mo.0[0] < p)
                .map(|(mo, c)| (*mo, c.clone())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::algebra::rational::rat;

    fn germ(c: [&str; 3]) -> LinearSystemGerm {
        LinearSystemGerm::exact(c.map(|s| parse_poly(s).unwrap()))
    }

    #[test]
    fn ascend_general_lines() {
        let a = blow_up_ascend(&germ(["x", "y", "x + y"])).unwrap();
        assert_eq!(a.multiplicity, 1);
        assert!(a.first_points.is_empty());
        assert!(!a.second_origin);
        assert_eq!(a.first.comps[1].to_string(), "y");
    }

    #[test]
    fn ascend_tangent_direction() {
        // every member is tangent to v = 2u
        let a = blow_up_ascend(&germ(["y - 2*x", "x^2", "x*y"])).unwrap();
        assert_eq!(a.multiplicity, 1);
        assert_eq!(a.first_points, vec![rat(2)]);
        let next = a.first.translate(&rat(2));
        assert!(next.is_base_point());
        // direction along the v axis sits in the second chart
        let b = blow_up_ascend(&germ(["x", "y^2", "x*y"])).unwrap();
        assert!(b.second_origin);
        assert!(b.first_points.is_empty());
    }

    #[test]
    fn not_a_base_point() {
        assert_eq!(blow_up_ascend(&germ(["1 + x", "y", "x"])).unwrap_err(), Error::NotABasePoint);
    }

    #[test]
    fn translation() {
        let p = parse_poly("x*y^2 + y").unwrap();
        assert_eq!(translate_v(&p, &rat(1)).to_string(), "x*y^2 + 2*x*y + x + y + 1");
    }
}
