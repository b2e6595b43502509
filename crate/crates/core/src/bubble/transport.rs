//! Transport of (possibly infinitely near) points by a birational map.
//!
//! A point `p` that is not a base point of `f` is sent to a point `f•(p)`. To find
//! it, two smooth arcs through `p` with different tangents are pushed down to P^2,
//! mapped by `f`, and lifted again through successive blow-ups. The image arcs
//! share their tower exactly up to `f•(p)` and separate one level above it, since
//! `f` identifies neighbourhoods of `p` and `f•(p)` in suitable blow-ups.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::tree::{base_point_tree, BasePointTree};
use super::{BubblePoint, BubblePointJson, ChartStep};
use crate::algebra::series::Series;
use crate::algebra::rational::denominator_lcm;
use crate::algebra::{Rational, UniPoly};
use crate::error::{Error, Result};
use crate::plane_map::{PlaneMap, ProjPoint};

/// A map with its base-point tree computed once.
#[derive(Clone, Debug)]
pub struct ResolvedMap {
    pub map: PlaneMap,
    pub tree: BasePointTree,
}

impl ResolvedMap {
    pub fn new(map: PlaneMap) -> Result<Self> {
        let tree = base_point_tree(&map)?;
        Ok(ResolvedMap { map, tree })
    }

    pub fn from_parts(map: PlaneMap, tree: BasePointTree) -> Self {
        ResolvedMap { map, tree }
    }

    pub fn is_base_point(&self, p: &BubblePoint) -> bool {
        self.tree.contains(p)
    }

    pub fn push_forward(&self, p: &BubblePoint) -> Result<BubblePoint> {
        let t = self.push_forward_within(p, MAX_PRECISION)?;
        if t.complete {
            Ok(t.point)
        } else {
            Err(Error::TransportFailure {
                step: 0,
                point: p.to_string(),
                reason: format!("series precision {} insufficient", MAX_PRECISION),
            })
        }
    }

    /// Like `push_forward`, but stops doubling the series precision at `max_precision`
    /// and then returns the certified part of the image tower.
    pub fn push_forward_within(&self, p: &BubblePoint, max_precision: usize) -> Result<Transported> {
        push_forward_resolved(self, p, max_precision)
    }
}

/// An image point, or only a prefix of it when `complete` is false: the true image is
/// then `point` itself or infinitely near to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transported {
    pub point: BubblePoint,
    pub complete: bool,
}

/// `f•(p)`; fails with `IsBasePoint` when `p` is a base point of `f`.
pub fn push_forward_point(f: &PlaneMap, p: &BubblePoint) -> Result<BubblePoint> {
    ResolvedMap::new(f.clone())?.push_forward(p)
}

pub const MAX_PRECISION: usize = 1 << 13;

fn push_forward_resolved(rm: &ResolvedMap, p: &BubblePoint, max_precision: usize) -> Result<Transported> {
    if rm.is_base_point(p) {
        return Err(Error::IsBasePoint { point: p.to_string() });
    }
    let bound = p.level() + rm.tree.len() + 1;
    // an arc inside a contracted curve has a constant image and no lifted tower
    let arcs: Vec<[UniPoly; 3]> = ARC_SLOPES
        .iter()
        .map(|&(n, d)| arc_in_plane(p, &Rational::new(n.into(), d.into())))
        .filter(|arc| image_moves(&rm.map, arc))
        .take(2)
        .collect();
    if arcs.len() < 2 {
        return Err(Error::TransportFailure {
            step: 0,
            point: p.to_string(),
            reason: "no test arc with a non-constant image".into(),
        });
    }
    let mut prec = 16.min(max_precision);
    loop {
        match lift_and_compare(rm, &arcs, prec, bound)? {
            Lift::Separated(point) => return Ok(Transported { point, complete: true }),
            Lift::Short(prefix) if prec >= max_precision => {
                return prefix.map(|point| Transported { point, complete: false }).ok_or_else(|| {
                    Error::TransportFailure {
                        step: 0,
                        point: p.to_string(),
                        reason: format!("series precision {} does not determine the image", max_precision),
                    }
                })
            }
            Lift::Short(_) => prec = (prec * 2).min(max_precision),
        }
    }
}

enum Lift {
    /// The two image arcs separate right above this point.
    Separated(BubblePoint),
    /// Precision ran out while the arcs still agreed; carries the agreed part if the
    /// anchor was found.
    Short(Option<BubblePoint>),
}

fn lift_and_compare(rm: &ResolvedMap, arcs: &[[UniPoly; 3]], prec: usize, bound: usize) -> Result<Lift> {
    let mut towers = Vec::new();
    for arc in arcs {
        let series = arc.clone().map(|c| to_series(&c, prec));
        let image = image_on_arc(&rm.map, &series, prec);
        match SeriesTower::new(image)? {
            Some(t) => towers.push(t),
            None => return Ok(Lift::Short(None)),
        }
    }
    let (a, b) = towers.split_at_mut(1);
    let (a, b) = (&mut a[0], &mut b[0]);
    if a.anchor != b.anchor {
        return Err(Error::TransportFailure {
            step: 0,
            point: a.anchor.to_string(),
            reason: "image arcs start at different points".into(),
        });
    }
    let mut tower = Vec::new();
    loop {
        if tower.len() > bound {
            return Err(Error::DepthExceeded { bound });
        }
        let (Some(sa), Some(sb)) = (a.next_step()?, b.next_step()?) else {
            return Ok(Lift::Short(Some(BubblePoint::new(a.anchor.clone(), tower))));
        };
        if sa != sb {
            return Ok(Lift::Separated(BubblePoint::new(a.anchor.clone(), tower)));
        }
        tower.push(sa);
    }
}

const ARC_SLOPES: [(i64, i64); 8] = [(2, 1), (-3, 1), (5, 1), (-1, 2), (7, 3), (-4, 1), (1, 3), (11, 1)];

/// Certifies that `map` is not constant along `arc` by two sample values with
/// distinct images.
fn image_moves(map: &PlaneMap, arc: &[UniPoly; 3]) -> bool {
    let mut seen: Option<ProjPoint> = None;
    for (n, d) in [(1i64, 3i64), (-2, 7), (5, 11), (-7, 13), (3, 17), (13, 19)] {
        let t = Rational::new(n.into(), d.into());
        let at = arc.clone().map(|c| c.eval(&t));
        let Ok(q) = ProjPoint::new(map.eval_raw(&at)) else { continue };
        match &seen {
            Some(prev) if *prev != q => return true,
            Some(_) => {}
            None => seen = Some(q),
        }
    }
    false
}

/// The arc `(u, v) = (t, a t)` in the chart at `p`, written in homogeneous coordinates.
fn arc_in_plane(p: &BubblePoint, slope: &Rational) -> [UniPoly; 3] {
    let t = UniPoly::new(vec![Rational::zero(), Rational::one()]);
    let mut u = t.clone();
    let mut v = t.scale(slope);
    for step in p.tower.iter().rev() {
        match step {
            ChartStep::First(c) => {
                v = u.mul(&v.add(&UniPoly::constant(c.clone())));
            }
            ChartStep::Second => {
                u = u.mul(&v);
            }
        }
    }
    let k = p.anchor.anchor_index();
    let c = p.anchor.coords();
    let mut local = [u, v].into_iter();
    [0, 1, 2].map(|i| {
        if i == k {
            UniPoly::one()
        } else {
            local.next().unwrap().add(&UniPoly::constant(c[i].clone()))
        }
    })
}

fn to_series(p: &UniPoly, prec: usize) -> Series {
    let mut coeffs: Vec<Rational> = p.coeffs().iter().take(prec).cloned().collect();
    coeffs.resize(prec, Rational::zero());
    Series { coeffs }
}

/// `map(arc)` up to a common nonzero factor, computed over the integers: the arc
/// and the map are each scaled by one common denominator, which leaves the image
/// point unchanged.
fn image_on_arc(map: &PlaneMap, arc: &[Series; 3], prec: usize) -> [Series; 3] {
    let l = denominator_lcm(arc.iter().flat_map(|s| s.coeffs.iter()));
    let ints: Vec<Vec<BigInt>> = arc
        .iter()
        .map(|s| s.coeffs.iter().take(prec).map(|c| c.numer() * (&l / c.denom())).collect())
        .collect();
    let comps = map.components();
    let dm = denominator_lcm(comps.iter().flat_map(|c| c.terms().map(|(_, v)| v)));
    let d = map.degree() as usize;
    let pows: Vec<Vec<Vec<BigInt>>> = ints
        .iter()
        .map(|a| {
            let mut v = vec![unit(prec)];
            for k in 1..=d {
                let next = convolve(&v[k - 1], a, prec);
                v.push(next);
            }
            v
        })
        .collect();
    comps.clone().map(|c| {
        let mut acc = vec![BigInt::zero(); prec];
        for (m, v) in c.terms() {
            let [a, b, e] = m.0.map(|x| x as usize);
            let term = convolve(&convolve(&pows[0][a], &pows[1][b], prec), &pows[2][e], prec);
            let coeff = v.numer() * (&dm / v.denom());
            for (slot, t) in acc.iter_mut().zip(term) {
                if !t.is_zero() {
                    *slot += &coeff * t;
                }
            }
        }
        Series {
            coeffs: acc.into_iter().map(Rational::from_integer).collect(),
        }
    })
}

fn unit(prec: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); prec];
    if prec > 0 {
        v[0] = BigInt::one();
    }
    v
}

fn convolve(a: &[BigInt], b: &[BigInt], prec: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Order of a series: `Ok(k)` if known, `Err(p)` if zero to precision `p`.
fn order(s: &Series) -> std::result::Result<usize, usize> {
    s.valuation().ok_or(s.prec())
}

/// `a / b` for `ord b <= ord a`, with `ord b` known.
fn divide(a: &Series, b: &Series) -> Option<Series> {
    let k = b.valuation()?;
    if a.prec() <= k || b.prec() <= k {
        return None;
    }
    let inv = b.shift_down(k).inverse()?;
    let n = (a.prec() - k).min(inv.prec());
    Some(&a.shift_down(k).truncate(n) * &inv.truncate(n))
}

/// Lifts a truncated arc through the blow-ups it passes through.
struct SeriesTower {
    anchor: ProjPoint,
    u: Series,
    v: Series,
}

impl SeriesTower {
    fn new(image: [Series; 3]) -> Result<Option<Self>> {
        let Some(k) = image.iter().filter_map(|s| s.valuation()).min() else {
            return Ok(None);
        };
        let g = image.map(|c| c.shift_down(k));
        let at0 = [0, 1, 2].map(|i| g[i].coeffs.first().cloned().unwrap_or_else(Rational::zero));
        let anchor = ProjPoint::new(at0)?;
        let a = anchor.anchor_index();
        let others: Vec<usize> = (0..3).filter(|&i| i != a).collect();
        let c = anchor.coords();
        let Some(inv) = g[a].inverse() else { return Ok(None) };
        let local = |i: usize| &(&g[i] - &g[a].scale(&c[i])) * &inv;
        Ok(Some(SeriesTower {
            u: local(others[0]),
            v: local(others[1]),
            anchor,
        }))
    }

    fn next_step(&mut self) -> Result<Option<ChartStep>> {
        let first = match (order(&self.u), order(&self.v)) {
            (Ok(ou), Ok(ov)) => ou <= ov,
            (Ok(ou), Err(pv)) if pv > ou => true,
            (Err(pu), Ok(ov)) if pu > ov => false,
            _ => return Ok(None),
        };
        if first {
            let Some(w) = divide(&self.v, &self.u) else { return Ok(None) };
            if w.prec() == 0 {
                return Ok(None);
            }
            let c = w.coeffs[0].clone();
            self.v = w.add_const(&-c.clone());
            Ok(Some(ChartStep::First(c)))
        } else {
            let Some(w) = divide(&self.u, &self.v) else { return Ok(None) };
            self.u = w;
            Ok(Some(ChartStep::Second))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorialityReport {
    pub point: BubblePointJson,
    pub direct: BubblePointJson,
    pub stepwise: BubblePointJson,
    pub agree: bool,
}

/// Compares `(f∘g)•(p)` with `f•(g•(p))`.
pub fn composition_functoriality_check(f: &PlaneMap, g: &PlaneMap, p: &BubblePoint) -> Result<FunctorialityReport> {
    let fg = f.compose(g)?;
    let direct = push_forward_point(&fg, p)?;
    let mid = push_forward_point(g, p)?;
    let stepwise = push_forward_point(f, &mid)?;
    Ok(FunctorialityReport {
        point: p.to_json(),
        agree: direct == stepwise,
        direct: direct.to_json(),
        stepwise: stepwise.to_json(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::plane_map::inverse::inverse;

    fn psi() -> PlaneMap {
        PlaneMap::parse("(x^2*y*z^2 - z^5 + x^5 : x^2*(x^2*y - z^3) : x*z*(x^2*y - z^3))").unwrap()
    }

    fn pt(c: [i64; 3]) -> BubblePoint {
        BubblePoint::proper(ProjPoint::from_ints(c).unwrap())
    }

    #[test]
    fn test_arc_along_a_contracted_line_is_avoided() {
        // (1:-2:4) lies on the contracted line through two base points, in the
        // direction of the second default test arc
        let g = PlaneMap::parse(
            "(x^2 + 5/6*x*y - 1/2*x*z - y^2 - 11/6*y*z - 1/2*z^2 : 3/2*x^2 - 11/18*x*y - 13/6*x*z - 8/3*y^2 - 55/18*y*z - 1/3*z^2 : -x^2 - 8/9*x*y + 2/3*x*z - 1/6*y^2 + 2/9*y*z - 1/6*z^2)",
        )
        .unwrap();
        let img = push_forward_point(&g, &pt([1, -2, 4])).unwrap();
        assert_eq!(img.to_string(), "(0:1:-2/3) > first:14/45");
        assert_eq!(push_forward_point(&inverse(&g).unwrap(), &img).unwrap(), pt([1, -2, 4]));
    }

    #[test]
    fn generic_points_go_to_images() {
        let img = push_forward_point(&psi(), &pt([1, 2, 3])).unwrap();
        let direct = psi().evaluate(&ProjPoint::from_ints([1, 2, 3]).unwrap()).unwrap();
        assert_eq!(img, BubblePoint::proper(direct));
    }

    #[test]
    fn points_on_contracted_curves_go_infinitely_near() {
        // (1:1:1) lies on x^2 y = z^3, which is contracted to (1:0:0)
        let img = push_forward_point(&psi(), &pt([1, 1, 1])).unwrap();
        assert_eq!(img.to_string(), "(1:0:0) > first:1");
        // the line z = 0 goes to the last exceptional curve over (1:0:0), whose
        // blown-up points are (1:0:0), first:0 and first:1
        let f = PlaneMap::parse("(y*z + x^2 : x*z : z^2)").unwrap();
        let img = push_forward_point(&f, &pt([1, 0, 0])).unwrap();
        assert_eq!(img.level(), 3);
        assert_eq!(&img.tower[..2], &[ChartStep::First(rat(0)), ChartStep::First(rat(1))]);
        assert_eq!(f.evaluate(&ProjPoint::from_ints([1, 0, 0]).unwrap()).unwrap(), img.anchor);
    }

    #[test]
    fn base_points_are_rejected() {
        assert!(matches!(
            push_forward_point(&psi(), &pt([0, 1, 0])),
            Err(Error::IsBasePoint { .. })
        ));
    }

    #[test]
    fn inverse_undoes_transport() {
        let f = psi();
        let g = inverse(&f).unwrap();
        let p = BubblePoint::new(
            ProjPoint::from_ints([1, 0, 0]).unwrap(),
            vec![ChartStep::First(rat(3))],
        );
        let q = push_forward_point(&f, &p).unwrap();
        assert_eq!(push_forward_point(&g, &q).unwrap(), p);
    }

    #[test]
    fn functoriality_examples() {
        let s = PlaneMap::parse("(y*z : x*z : x*y)").unwrap();
        let r = composition_functoriality_check(&s, &s, &pt([1, 1, 1])).unwrap();
        assert!(r.agree);
        let r = composition_functoriality_check(&psi(), &psi(), &pt([1, 1, 1])).unwrap();
        assert!(r.agree);
    }
}
