//! Named example maps.
//!
//! Every entry is returned as a [`Birational`] whose inverse is either known in
//! closed form (and verified symbolically) or found by interpolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::plane_map::{Automorphism, Birational, PlaneMap, DEFAULT_DEGREE_CAP};

pub const PSI: &str = "(x^2*y*z^2 - z^5 + x^5 : x^2*(x^2*y - z^3) : x*z*(x^2*y - z^3))";
pub const SIGMA: &str = "(y*z : x*z : x*y)";
pub const CHI: &str = "(x*z^5 + (y*z^2 + x^3)^2 : y*z^5 + x^3*z^3 : z^6)";

pub const NAMES: &[&str] = &["psi", "sigma", "chi", "chi_np", "shear-x", "shear-y", "random", "identity"];

/// Parameters consumed by the parametrised entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub n: u32,
    pub p: u32,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params { n: 2, p: 3, seed: 42 }
    }
}

pub fn psi() -> Birational {
    Birational::new(PlaneMap::parse(PSI).unwrap()).expect("the quintic example is birational")
}

pub fn sigma() -> Birational {
    let s = PlaneMap::parse(SIGMA).unwrap();
    Birational::from_pair(s.clone(), s).unwrap()
}

/// `(x + yⁿ, y)` homogenized: `(x z^{n-1} + yⁿ : y z^{n-1} : zⁿ)`, inverse `(x - yⁿ, y)`.
pub fn shear_x(n: u32) -> Result<Birational> {
    check_exponent(n)?;
    let m = n - 1;
    let f = PlaneMap::from_strs([
        &format!("x*z^{m} + y^{n}"),
        &format!("y*z^{m}"),
        &format!("z^{n}"),
    ])?;
    let g = PlaneMap::from_strs([
        &format!("x*z^{m} - y^{n}"),
        &format!("y*z^{m}"),
        &format!("z^{n}"),
    ])?;
    Birational::from_pair(f, g)
}

/// `(x, y + xᵖ)` homogenized: `(x z^{p-1} : y z^{p-1} + xᵖ : zᵖ)`, inverse `(x, y - xᵖ)`.
pub fn shear_y(p: u32) -> Result<Birational> {
    check_exponent(p)?;
    let m = p - 1;
    let f = PlaneMap::from_strs([
        &format!("x*z^{m}"),
        &format!("y*z^{m} + x^{p}"),
        &format!("z^{p}"),
    ])?;
    let g = PlaneMap::from_strs([
        &format!("x*z^{m}"),
        &format!("y*z^{m} - x^{p}"),
        &format!("z^{p}"),
    ])?;
    Birational::from_pair(f, g)
}

fn check_exponent(e: u32) -> Result<()> {
    if e == 0 || e > 40 {
        return Err(Error::Invalid(format!("exponent {} outside 1..=40", e)));
    }
    Ok(())
}

/// `(x + yⁿ, y) ∘ (x, y + xᵖ)` computed projectively.
pub fn chi_np(n: u32, p: u32) -> Result<Birational> {
    shear_x(n)?.compose(&shear_y(p)?, DEFAULT_DEGREE_CAP)
}

pub fn chi() -> Birational {
    let f = PlaneMap::parse(CHI).unwrap();
    let g = chi_np(2, 3).unwrap().inverse;
    Birational::from_pair(f, g).expect("the sextic example factors through the two shears")
}

pub fn random_automorphism(seed: u64) -> Automorphism {
    Automorphism::random(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// `count` automorphisms drawn from one stream seeded by `seed`.
pub fn random_automorphisms(seed: u64, count: usize) -> Vec<Automorphism> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| Automorphism::random(&mut rng)).collect()
}

/// Looks up a registered name, otherwise parses a literal map `(F : G : H)`.
pub fn lookup(name: &str, params: &Params) -> Result<Birational> {
    let key = name.trim().to_ascii_lowercase().replace('_', "-");
    match key.as_str() {
        "psi" => Ok(psi()),
        "psi-inverse" => Ok(psi().inverted()),
        "sigma" => Ok(sigma()),
        "chi" => Ok(chi()),
        "chi-np" => chi_np(params.n, params.p),
        "shear-x" | "henon-x" => shear_x(params.n),
        "shear-y" | "henon-y" => shear_y(params.p),
        "random" => Ok(Birational::automorphism(&random_automorphism(params.seed))),
        "identity" | "id" => Ok(Birational::identity()),
        _ => {
            if let Some(seed) = key.strip_prefix("random:") {
                let seed = seed
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad seed in '{}'", name)))?;
                return Ok(Birational::automorphism(&random_automorphism(seed)));
            }
            if !name.contains(':') {
                return Err(Error::Invalid(format!(
                    "unknown map '{}'; known names: {}",
                    name,
                    NAMES.join(", ")
                )));
            }
            Birational::new(PlaneMap::parse(name)?)
        }
    }
}

/// Like [`lookup`] but without requiring a literal map to be birational.
pub fn lookup_map(name: &str, params: &Params) -> Result<PlaneMap> {
    if name.contains(':') && !name.trim().to_ascii_lowercase().starts_with("random:") {
        return PlaneMap::parse(name);
    }
    Ok(lookup(name, params)?.map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_map::inverse::is_birational;

    #[test]
    fn chi_is_the_composite_of_the_shears() {
        assert_eq!(chi_np(2, 3).unwrap().map, PlaneMap::parse(CHI).unwrap());
        assert_eq!(chi().degree(), 6);
    }

    #[test]
    fn shears_homogenize_as_expected() {
        assert_eq!(
            shear_x(2).unwrap().map,
            PlaneMap::parse("(x*z + y^2 : y*z : z^2)").unwrap()
        );
        assert_eq!(shear_y(1).unwrap().degree(), 1);
        assert!(shear_x(0).is_err());
    }

    #[test]
    fn registered_maps_are_birational() {
        let params = Params::default();
        for name in NAMES {
            let b = lookup(name, &params).unwrap();
            assert!(is_birational(&b.map), "{}", name);
        }
    }

    #[test]
    fn literal_maps_and_seeds() {
        let p = Params::default();
        assert_eq!(lookup("(y*z:x*z:x*y)", &p).unwrap(), sigma());
        assert_eq!(lookup("random:7", &p).unwrap(), lookup("random", &Params { seed: 7, ..p }).unwrap());
        assert!(lookup("nonsense", &p).is_err());
        // not birational, but still a map
        assert_eq!(lookup_map("(x^2 : y^2 : x*z)", &p).unwrap().degree(), 2);
        assert!(lookup("(x^2 : y^2 : z^2)", &p).is_err());
        assert_eq!(random_automorphisms(5, 3), random_automorphisms(5, 3));
    }
}
