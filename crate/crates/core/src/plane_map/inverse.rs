//! Inverses of birational maps by interpolation, certified symbolically.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{act, Automorphism, PlaneMap, Side};
use crate::algebra::linalg::nullspace_multimodular;
use crate::algebra::rational::{denominator_lcm, random_rational};
use crate::algebra::{Monomial, MultiPoly, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_INVERSE_SEED: u64 = 0x1f2e_3d4c;

/// A map together with a certified inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Birational {
    pub map: PlaneMap,
    pub inverse: PlaneMap,
}

impl Birational {
    /// Finds the inverse by interpolation.
    pub fn new(map: PlaneMap) -> Result<Self> {
        let inverse = inverse(&map)?;
        Ok(Birational { map, inverse })
    }

    /// Accepts a claimed inverse after symbolic verification.
    pub fn from_pair(map: PlaneMap, inverse: PlaneMap) -> Result<Self> {
        if !verify_inverse(&map, &inverse) {
            return Err(Error::NotBirational {
                reason: "supplied inverse does not compose to the identity".into(),
            });
        }
        Ok(Birational { map, inverse })
    }

    pub fn automorphism(a: &Automorphism) -> Self {
        Birational {
            map: a.as_map(),
            inverse: a.inverse().as_map(),
        }
    }

    pub fn identity() -> Self {
        Birational {
            map: PlaneMap::identity(),
            inverse: PlaneMap::identity(),
        }
    }

    pub fn inverted(&self) -> Self {
        Birational {
            map: self.inverse.clone(),
            inverse: self.map.clone(),
        }
    }

    /// `self ∘ other`, whose inverse is `other⁻¹ ∘ self⁻¹`.
    pub fn compose(&self, other: &Birational, cap: u64) -> Result<Self> {
        Ok(Birational {
            map: self.map.compose_capped(&other.map, cap)?,
            inverse: other.inverse.compose_capped(&self.inverse, cap)?,
        })
    }

    pub fn act(&self, a: &Automorphism, side: Side) -> Self {
        let ai = a.inverse();
        let inv_side = match side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Conjugate => Side::Conjugate,
        };
        let map = act(a, &self.map, side);
        let inverse = match side {
            Side::Conjugate => act(a, &self.inverse, Side::Conjugate),
            _ => act(&ai, &self.inverse, inv_side),
        };
        Birational { map, inverse }
    }

    pub fn degree(&self) -> u32 {
        self.map.degree()
    }
}

/// Inverse with the default sampling seed.
pub fn inverse(f: &PlaneMap) -> Result<PlaneMap> {
    inverse_with_seed(f, DEFAULT_INVERSE_SEED)
}

pub fn is_birational(f: &PlaneMap) -> bool {
    inverse(f).is_ok()
}

fn integer_point(p: &[Rational; 3]) -> [Rational; 3] {
    let den = denominator_lcm(p.iter());
    let scaled = p.clone().map(|c| c * Rational::from_integer(den.clone()));
    let g = scaled
        .iter()
        .fold(BigInt::zero(), |acc, c| num_integer::Integer::gcd(&acc, c.numer()));
    if g.is_zero() {
        return scaled;
    }
    scaled.map(|c| c / Rational::from_integer(g.clone()))
}

fn monomial_values(monos: &[Monomial], q: &[Rational; 3], d: u32) -> Vec<Rational> {
    let mut pows: [Vec<Rational>; 3] = Default::default();
    for i in 0..3 {
        pows[i].push(Rational::one());
        for k in 1..=d as usize {
            let next = &pows[i][k - 1] * &q[i];
            pows[i].push(next);
        }
    }
    monos
        .iter()
        .map(|m| &pows[0][m.0[0] as usize] * &pows[1][m.0[1] as usize] * &pows[2][m.0[2] as usize])
        .collect()
}

/// Interpolates `g` of degree `deg f` with `g(f(p)) ∥ p` on random samples, then
/// verifies `g∘f` and `f∘g` are the identity symbolically.
pub fn inverse_with_seed(f: &PlaneMap, seed: u64) -> Result<PlaneMap> {
    let jac = f.jacobian().map_err(|_| Error::NotBirational {
        reason: "jacobian vanishes identically".into(),
    })?;
    if f.degree() == 1 {
        let m = f.components().clone().map(|c| {
            [0, 1, 2].map(|j| c.coeff(&Monomial::var(j)))
        });
        let a = Automorphism::new(m)?;
        return Ok(a.inverse().as_map());
    }
    let d = f.degree();
    let monos = Monomial::all_of_degree(d);
    let m = monos.len();
    let n_samples = 3 * m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(2 * n_samples);
    let mut taken = 0;
    let mut tries = 0;
    while taken < n_samples {
        tries += 1;
        if tries > 50 * n_samples {
            return Err(Error::NotBirational {
                reason: "could not find enough regular sample points".into(),
            });
        }
        let p = [
            random_rational(&mut rng, 100, 100),
            random_rational(&mut rng, 100, 100),
            random_rational(&mut rng, 100, 100),
        ];
        if p.iter().all(|c| c.is_zero()) || jac.eval(&p).is_zero() {
            continue;
        }
        let q = f.eval_raw(&p);
        if q.iter().all(|c| c.is_zero()) {
            continue;
        }
        let p = integer_point(&p);
        let q = integer_point(&q);
        let vals = monomial_values(&monos, &q, d);
        let c = (0..3).rev().find(|&i| !p[i].is_zero()).unwrap();
        for a in (0..3).filter(|&a| a != c) {
            let mut row = vec![Rational::zero(); 3 * m];
            for (k, v) in vals.iter().enumerate() {
                row[a * m + k] = v * &p[c];
                row[c * m + k] = -(v * &p[a]);
            }
            rows.push(row);
        }
        taken += 1;
    }
    let basis = nullspace_multimodular(&rows, 3 * m);
    if basis.is_empty() {
        return Err(Error::NotBirational {
            reason: "no degree-d triple maps the samples back".into(),
        });
    }
    for attempt in 0..3 {
        let v: Vec<Rational> = if basis.len() == 1 {
            basis[0].clone()
        } else {
            let weights: Vec<Rational> = basis
                .iter()
                .map(|_| Rational::from_integer(rng.gen_range(-50i64..=50).into()))
                .collect();
            (0..3 * m)
                .map(|k| {
                    basis
                        .iter()
                        .zip(&weights)
                        .fold(Rational::zero(), |acc, (b, w)| acc + &b[k] * w)
                })
                .collect()
        };
        let comps = [0, 1, 2].map(|a| {
            MultiPoly::from_terms(monos.iter().enumerate().map(|(k, mo)| (*mo, v[a * m + k].clone())))
        });
        if let Ok(g) = PlaneMap::new(comps) {
            if verify_inverse(f, &g) {
                return Ok(g);
            }
        }
        if basis.len() == 1 && attempt == 0 {
            break;
        }
    }
    Err(Error::NotBirational {
        reason: "interpolated candidate fails symbolic verification".into(),
    })
}

/// True when `g(f)` and `f(g)` are both proportional to `(x, y, z)`.
pub fn verify_inverse(f: &PlaneMap, g: &PlaneMap) -> bool {
    is_identity_up_to_factor(g, f) && is_identity_up_to_factor(f, g)
}

/// Checks `outer(inner)` is `h·(x, y, z)` via the 2x2 minors, without a gcd.
fn is_identity_up_to_factor(outer: &PlaneMap, inner: &PlaneMap) -> bool {
    let c: Vec<MultiPoly> = outer
        .components()
        .iter()
        .map(|p| p.substitute(inner.components()))
        .collect();
    if c.iter().all(|p| p.is_zero()) {
        return false;
    }
    let v = [MultiPoly::x(), MultiPoly::y(), MultiPoly::z()];
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        if &c[a] * &v[b] != &c[b] * &v[a] {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_map::contracted_curves;

    fn psi() -> PlaneMap {
        PlaneMap::parse("(x^2*y*z^2 - z^5 + x^5 : x^2*(x^2*y - z^3) : x*z*(x^2*y - z^3))").unwrap()
    }

    #[test]
    fn sigma_is_an_involution() {
        let s = PlaneMap::parse("(y*z : x*z : x*y)").unwrap();
        assert_eq!(inverse(&s).unwrap(), s);
        assert!(inverse(&PlaneMap::identity()).unwrap().is_identity());
    }

    #[test]
    fn inverse_of_psi() {
        let g = inverse(&psi()).unwrap();
        assert_eq!(g.degree(), 5);
        // Independent oracle: the formula obtained offline by interpolation and
        // checked by direct substitution.
        let expected =
            PlaneMap::parse("(y^3*(x*y - z^2) : x*y*z^3 + y^5 - z^5 : y^2*z*(x*y - z^2))").unwrap();
        assert_eq!(g, expected);
        assert!(psi().compose(&g).unwrap().is_identity());
        assert!(g.compose(&psi()).unwrap().is_identity());
        let exc = contracted_curves(&g).unwrap();
        let names: Vec<String> = exc.iter().map(|c| c.polynomial.to_string()).collect();
        assert_eq!(names, vec!["y", "x*y - z^2"]);
    }

    #[test]
    fn squares_map_is_not_birational() {
        let f = PlaneMap::parse("(x^2 : y^2 : z^2)").unwrap();
        assert!(matches!(inverse(&f), Err(Error::NotBirational { .. })));
        assert!(!is_birational(&f));
    }

    #[test]
    fn degree_one() {
        let a = Automorphism::from_ints([[1, 2, 0], [0, 1, 0], [3, 0, 1]]).unwrap();
        let g = inverse(&a.as_map()).unwrap();
        assert!(a.as_map().compose(&g).unwrap().is_identity());
    }

    #[test]
    fn actions_carry_inverses() {
        let b = Birational::new(psi()).unwrap();
        let a = Automorphism::from_ints([[1, 1, 0], [0, 2, 1], [1, 0, 3]]).unwrap();
        for side in [Side::Left, Side::Right, Side::Conjugate] {
            let c = b.act(&a, side);
            assert!(verify_inverse(&c.map, &c.inverse), "{:?}", side);
        }
    }
}
