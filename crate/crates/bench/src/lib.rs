//! Shared fixtures for the benchmarks.

use cremona_core::algebra::parse_poly;
use cremona_core::{MultiPoly, PlaneMap};

pub fn poly(s: &str) -> MultiPoly {
    parse_poly(s).expect("fixture polynomial")
}

pub fn map(s: &str) -> PlaneMap {
    PlaneMap::parse(s).expect("fixture map")
}

/// Two sextics sharing the factor `x^2*y - z^3`.
pub fn gcd_pair() -> (MultiPoly, MultiPoly) {
    let common = poly("x^2*y - z^3");
    let a = &common * &poly("x^3 + 2*y^2*z - 5*x*z^2");
    let b = &common * &poly("y^3 - x*y*z + 7*z^3");
    (a, b)
}
