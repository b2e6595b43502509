//! Rational self-maps of the projective plane given by three coprime forms.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::gcd::{coprime_fast, gcd_many};
use crate::algebra::linalg::{det3, inverse3, mat_mul3};
use crate::algebra::parse::parse_triple;
use crate::algebra::rational::{parse_rational, random_rational};
use crate::algebra::{parse_poly, MultiPoly, Rational};
use crate::error::{Error, Result};

pub mod contracted;
pub mod inverse;

pub use contracted::{contracted_curves, contracted_curves_report, ContractedCurve, ContractedReport};
pub use inverse::{inverse, inverse_with_seed, is_birational, verify_inverse, Birational};

/// Symbolic composition is refused beyond this degree.
pub const DEFAULT_DEGREE_CAP: u64 = 700;

/// A point of P^2 with the first nonzero coordinate scaled to 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [Rational; 3],
}

impl ProjPoint {
    pub fn new(coords: [Rational; 3]) -> Result<Self> {
        let k = coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::Invalid("point with all coordinates zero".into()))?;
        let s = coords[k].recip();
        Ok(ProjPoint {
            coords: [&coords[0] * &s, &coords[1] * &s, &coords[2] * &s],
        })
    }

    pub fn from_ints(c: [i64; 3]) -> Result<Self> {
        Self::new(c.map(|v| Rational::from_integer(v.into())))
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.coords
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn anchor_index(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }

    /// Parses `"a:b:c"` or `"(a:b:c)"` with rational entries.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Syntax {
                position: 0,
                message: "expected three coordinates separated by ':'".into(),
            });
        }
        let mut c: [Rational; 3] = Default::default();
        for (i, s) in parts.iter().enumerate() {
            c[i] = parse_rational(s).ok_or_else(|| Error::Syntax {
                position: 0,
                message: format!("bad coordinate '{}'", s.trim()),
            })?;
        }
        Self::new(c)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `(f0 : f1 : f2)`: coprime forms of a common degree, scaled so that the leading
/// graded-lex coefficient of the first nonzero component is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneMap {
    components: [MultiPoly; 3],
    degree: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MapJson {
    pub degree: u32,
    pub components: [String; 3],
}

impl PlaneMap {
    /// Validates homogeneity and degrees, removes the common factor and rescales.
    pub fn new(components: [MultiPoly; 3]) -> Result<Self> {
        Self::build(components, true)
    }

    fn build(components: [MultiPoly; 3], reduce: bool) -> Result<Self> {
        if components.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroMap);
        }
        for (i, c) in components.iter().enumerate() {
            if !c.is_homogeneous() {
                return Err(Error::Inhomogeneous { index: i });
            }
        }
        let degs: Vec<Option<u32>> = components.iter().map(|c| c.total_degree()).collect();
        let d = degs.iter().flatten().copied().next().unwrap();
        if degs.iter().flatten().any(|&e| e != d) {
            return Err(Error::MismatchedDegrees {
                degrees: [
                    degs[0].unwrap_or(0),
                    degs[1].unwrap_or(0),
                    degs[2].unwrap_or(0),
                ],
            });
        }
        let mut comps = components;
        if reduce {
            let nz: Vec<&MultiPoly> = comps.iter().filter(|c| !c.is_zero()).collect();
            let trivially_coprime = nz.len() > 1 && coprime_fast(&nz);
            if !trivially_coprime {
                let g = gcd_many(comps.iter());
                if !g.is_constant() {
                    comps = comps.map(|c| c.div_exact(&g).expect("gcd divides"));
                }
            }
        }
        let lead = comps.iter().find(|c| !c.is_zero()).unwrap().leading_coefficient();
        let s = lead.recip();
        let comps = comps.map(|c| c.scale(&s));
        let degree = comps.iter().find_map(|c| c.total_degree()).unwrap();
        Ok(PlaneMap {
            components: comps,
            degree,
        })
    }

    /// Builds a map from components already known to be coprime (only rescales).
    pub(crate) fn new_coprime(components: [MultiPoly; 3]) -> Result<Self> {
        Self::build(components, false)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_triple(text)?)
    }

    pub fn from_strs(c: [&str; 3]) -> Result<Self> {
        Self::new([parse_poly(c[0])?, parse_poly(c[1])?, parse_poly(c[2])?])
    }

    pub fn identity() -> Self {
        PlaneMap {
            components: [MultiPoly::x(), MultiPoly::y(), MultiPoly::z()],
            degree: 1,
        }
    }

    pub fn components(&self) -> &[MultiPoly; 3] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `self ∘ g`, with the default degree cap.
    pub fn compose(&self, g: &PlaneMap) -> Result<PlaneMap> {
        self.compose_capped(g, DEFAULT_DEGREE_CAP)
    }

    pub fn compose_capped(&self, g: &PlaneMap, cap: u64) -> Result<PlaneMap> {
        let d = self.degree as u64 * g.degree as u64;
        if d > cap {
            return Err(Error::DegreeCapExceeded { degree: d, cap });
        }
        let comps = [
            self.components[0].substitute(&g.components),
            self.components[1].substitute(&g.components),
            self.components[2].substitute(&g.components),
        ];
        PlaneMap::new(comps)
    }

    /// `self^n` for `n >= 1` by repeated composition on the right.
    pub fn iterate(&self, n: u32, cap: u64) -> Result<PlaneMap> {
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.compose_capped(self, cap)?;
        }
        Ok(acc)
    }

    pub fn eval_raw(&self, p: &[Rational; 3]) -> [Rational; 3] {
        [
            self.components[0].eval(p),
            self.components[1].eval(p),
            self.components[2].eval(p),
        ]
    }

    pub fn evaluate(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let v = self.eval_raw(p.coords());
        if v.iter().all(|c| c.is_zero()) {
            return Err(Error::IndeterminatePoint {
                point: p.to_string(),
            });
        }
        ProjPoint::new(v)
    }

    /// Determinant of the matrix of partial derivatives.
    pub fn jacobian(&self) -> Result<MultiPoly> {
        let d: Vec<Vec<MultiPoly>> = self
            .components
            .iter()
            .map(|f| (0..3).map(|v| f.partial(v)).collect())
            .collect();
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
            &(&d[r1][c1] * &d[r2][c2]) - &(&d[r1][c2] * &d[r2][c1])
        };
        let j = &(&(&d[0][0] * &minor(1, 2, 1, 2)) - &(&d[0][1] * &minor(1, 2, 0, 2)))
            + &(&d[0][2] * &minor(1, 2, 0, 1));
        if j.is_zero() {
            Err(Error::ZeroJacobian)
        } else {
            Ok(j)
        }
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            degree: self.degree,
            components: [
                self.components[0].to_string(),
                self.components[1].to_string(),
                self.components[2].to_string(),
            ],
        }
    }

    pub fn from_json(j: &MapJson) -> Result<Self> {
        let m = Self::from_strs([&j.components[0], &j.components[1], &j.components[2]])?;
        if m.degree != j.degree {
            return Err(Error::Invalid(format!(
                "declared degree {} but components have degree {}",
                j.degree, m.degree
            )));
        }
        Ok(m)
    }
}

impl fmt::Display for PlaneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} : {} : {})",
            self.components[0], self.components[1], self.components[2]
        )
    }
}

impl fmt::Debug for PlaneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneMap{}", self)
    }
}

/// Invertible 3x3 matrix acting on homogeneous coordinates, first nonzero entry scaled to 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Automorphism {
    m: [[Rational; 3]; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Conjugate,
}

impl Automorphism {
    pub fn new(m: [[Rational; 3]; 3]) -> Result<Self> {
        if det3(&m).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let first = m.iter().flatten().find(|v| !v.is_zero()).unwrap().recip();
        Ok(Automorphism {
            m: m.map(|row| row.map(|v| v * &first)),
        })
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(m.map(|r| r.map(|v| Rational::from_integer(v.into()))))
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
    }

    /// Entries `a/b` with `|a| <= 10`, `1 <= b <= 10`, resampled until invertible.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut m: [[Rational; 3]; 3] = Default::default();
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v = random_rational(rng, 10, 10);
                }
            }
            if let Ok(a) = Self::new(m) {
                return a;
            }
        }
    }

    pub fn matrix(&self) -> &[[Rational; 3]; 3] {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        Self::new(inverse3(&self.m).expect("invertible")).unwrap()
    }

    pub fn then(&self, other: &Automorphism) -> Self {
        Self::new(mat_mul3(&other.m, &self.m)).unwrap()
    }

    pub fn as_map(&self) -> PlaneMap {
        let comps = self.m.clone().map(|row| {
            MultiPoly::from_terms(
                row.into_iter()
                    .enumerate()
                    .map(|(j, c)| (crate::algebra::Monomial::var(j), c)),
            )
        });
        PlaneMap::new_coprime(comps).unwrap()
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let c = p.coords();
        let v = self.m.clone().map(|row| {
            row.iter()
                .zip(c.iter())
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        });
        ProjPoint::new(v).unwrap()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .m
            .iter()
            .map(|r| format!("[{}, {}, {}]", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `A∘f`, `f∘A` or `A∘f∘A⁻¹`.
pub fn act(a: &Automorphism, f: &PlaneMap, side: Side) -> PlaneMap {
    let am = a.as_map();
    let out = match side {
        Side::Left => am.compose_capped(f, u64::MAX),
        Side::Right => f.compose_capped(&am, u64::MAX),
        Side::Conjugate => am
            .compose_capped(f, u64::MAX)
            .and_then(|g| g.compose_capped(&a.inverse().as_map(), u64::MAX)),
    };
    out.expect("automorphism action preserves validity")
}

/// Scale-free check that two triples agree as maps.
pub fn same_map(a: &[MultiPoly; 3], b: &[MultiPoly; 3]) -> bool {
    (0..3).all(|i| (0..3).all(|j| (&a[i] * &b[j]) == (&a[j] * &b[i])))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn psi() -> PlaneMap {
        PlaneMap::parse("(x^2*y*z^2 - z^5 + x^5 : x^2*(x^2*y - z^3) : x*z*(x^2*y - z^3))").unwrap()
    }

    fn sigma() -> PlaneMap {
        PlaneMap::parse("(y*z : x*z : x*y)").unwrap()
    }

    #[test]
    fn parse_and_normalize() {
        assert_eq!(sigma().degree(), 2);
        assert_eq!(psi().degree(), 5);
        assert_eq!(
            psi().to_string(),
            "(x^5 + x^2*y*z^2 - z^5 : x^4*y - x^2*z^3 : x^3*y*z - x*z^4)"
        );
        let id = PlaneMap::parse("(x*z : y*z : z^2)").unwrap();
        assert!(id.is_identity());
        assert_eq!(PlaneMap::parse("(2*y : 4*x : 6*z)").unwrap().to_string(), "(y : 2*x : 3*z)");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(PlaneMap::parse("(0 : 0 : 0)"), Err(Error::ZeroMap));
        assert_eq!(
            PlaneMap::parse("(x + y^2 : y : z)"),
            Err(Error::Inhomogeneous { index: 0 })
        );
        assert!(matches!(
            PlaneMap::parse("(x : y^2 : z)"),
            Err(Error::MismatchedDegrees { .. })
        ));
        assert!(matches!(PlaneMap::parse("(x : y : z"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn compose_examples() {
        assert!(sigma().compose(&sigma()).unwrap().is_identity());
        assert_eq!(psi().compose(&PlaneMap::identity()).unwrap(), psi());
        assert_eq!(psi().compose(&psi()).unwrap().degree(), 25);
    }

    #[test]
    fn degree_cap() {
        let p2 = psi().compose(&psi()).unwrap();
        let big = PlaneMap::parse("(x^29 : y^29 : z^29)").unwrap();
        assert_eq!(
            p2.compose(&big),
            Err(Error::DegreeCapExceeded { degree: 725, cap: 700 })
        );
        assert_eq!(
            p2.compose_capped(&psi(), 100),
            Err(Error::DegreeCapExceeded { degree: 125, cap: 100 })
        );
    }

    #[test]
    fn evaluate_examples() {
        let p1 = ProjPoint::from_ints([0, 1, 0]).unwrap();
        assert!(matches!(psi().evaluate(&p1), Err(Error::IndeterminatePoint { .. })));
        let q = ProjPoint::from_ints([0, 0, 1]).unwrap();
        assert_eq!(psi().evaluate(&q).unwrap(), ProjPoint::from_ints([1, 0, 0]).unwrap());
        let r = ProjPoint::from_ints([1, 1, 1]).unwrap();
        assert_eq!(psi().evaluate(&r).unwrap(), ProjPoint::from_ints([1, 0, 0]).unwrap());
        assert_eq!(PlaneMap::identity().evaluate(&r).unwrap(), r);
    }

    #[test]
    fn jacobian_examples() {
        let j = sigma().jacobian().unwrap();
        assert_eq!(j, parse_poly("2*x*y*z").unwrap());
        let j = psi().jacobian().unwrap();
        assert_eq!(j, parse_poly("5*x^9*(x^2*y - z^3)").unwrap());
        let c = PlaneMap::parse("(x : x : z)").unwrap();
        assert_eq!(c.jacobian(), Err(Error::ZeroJacobian));
    }

    #[test]
    fn actions() {
        let perm = Automorphism::from_ints([[0, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap();
        assert_eq!(act(&perm, &sigma(), Side::Conjugate), sigma());
        assert_eq!(act(&Automorphism::identity(), &psi(), Side::Left), psi());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        use rand::SeedableRng;
        let a = Automorphism::random(&mut rng);
        assert_eq!(act(&a, &psi(), Side::Left).degree(), 5);
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn json_round_trip() {
        let j = psi().to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: MapJson = serde_json::from_str(&s).unwrap();
        assert_eq!(PlaneMap::from_json(&back).unwrap(), psi());
    }

    #[test]
    fn points() {
        let p = ProjPoint::parse("(2:4:-6)").unwrap();
        assert_eq!(p.to_string(), "(1:2:-3)");
        assert_eq!(ProjPoint::parse("0:0:3/4").unwrap().to_string(), "(0:0:1)");
        assert!(ProjPoint::parse("0:0:0").is_err());
    }
}
