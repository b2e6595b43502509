pub mod gcd;
pub mod linalg;
pub mod modular;
pub mod multipoly;
pub mod parse;
pub mod rational;
pub mod resultant;
pub mod series;
pub mod unipoly;

pub use gcd::{gcd, gcd_many, squarefree_decomposition};
pub use multipoly::{Monomial, MultiPoly};
pub use parse::parse_poly;
pub use rational::Rational;
pub use resultant::resultant;
pub use unipoly::{rational_roots, RootReport, UniPoly};

/// Which algebraic operation `poly_arith` performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(p: &MultiPoly, q: &MultiPoly, op: ArithOp) -> MultiPoly {
    match op {
        ArithOp::Add => p + q,
        ArithOp::Sub => p - q,
        ArithOp::Mul => p * q,
    }
}
