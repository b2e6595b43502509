//! Truncated power series in one variable t over the rationals.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{denominator_lcm, Rational};

/// `sum c_k t^k` known modulo `t^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub coeffs: Vec<Rational>,
}

impl Series {
    pub fn zero(prec: usize) -> Self {
        Series {
            coeffs: vec![Rational::zero(); prec],
        }
    }

    pub fn constant(c: Rational, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if prec > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c * t^k`
    pub fn monomial(c: Rational, k: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if k < prec {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the first nonzero coefficient, `None` if zero to the known precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add_const(&self, c: &Rational) -> Self {
        let mut s = self.clone();
        if !s.coeffs.is_empty() {
            s.coeffs[0] += c;
        }
        s
    }

    /// Divides by `t^k`, losing `k` terms of precision.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Series {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(prec);
        Series { coeffs: c }
    }

    /// Multiplicative inverse of a unit series.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.prec();
        if self.coeffs.first()?.is_zero() {
            return None;
        }
        // self = A / D over the integers; with B_k = A_0^{k+1} [t^k](1/A),
        // B_k = -sum_{j=1..k} A_j B_{k-j} A_0^{j-1}.
        let (d, a) = to_integers(&self.coeffs);
        let mut a0_pows = vec![BigInt::one()];
        for k in 1..=n {
            let next = &a0_pows[k - 1] * &a[0];
            a0_pows.push(next);
        }
        let mut b: Vec<BigInt> = Vec::with_capacity(n);
        b.push(BigInt::one());
        for k in 1..n {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                if !a[j].is_zero() {
                    acc += &a[j] * &b[k - j] * &a0_pows[j - 1];
                }
            }
            b.push(-acc);
        }
        let coeffs = b
            .into_iter()
            .enumerate()
            .map(|(k, v)| Rational::new(v * &d, a0_pows[k + 1].clone()))
            .collect();
        Some(Series { coeffs })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Series::constant(Rational::one(), self.prec());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        let n = self.prec().min(o.prec());
        Series {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect(),
        }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        let n = self.prec().min(o.prec());
        Series {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect(),
        }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

/// Numerators over a common denominator.
fn to_integers(c: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let den = denominator_lcm(c);
    let nums = c.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    (den, nums)
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        let n = self.prec().min(o.prec());
        let (da, na) = to_integers(&self.coeffs[..n]);
        let (db, nb) = to_integers(&o.coeffs[..n]);
        let mut acc = vec![BigInt::zero(); n];
        for (i, a) in na.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in nb.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    acc[i + j] += a * b;
                }
            }
        }
        let den = da * db;
        Series {
            coeffs: acc.into_iter().map(|v| Rational::new(v, den.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn inverse_of_one_minus_t() {
        let s = Series {
            coeffs: vec![rat(1), rat(-1), rat(0), rat(0)],
        };
        let inv = s.inverse().unwrap();
        assert_eq!(inv.coeffs, vec![rat(1); 4]);
        assert_eq!((&s * &inv).coeffs, vec![rat(1), rat(0), rat(0), rat(0)]);
    }

    #[test]
    fn valuation_and_shift() {
        let s = Series::monomial(rat(3), 2, 5);
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s.shift_down(2).coeffs, vec![rat(3), rat(0), rat(0)]);
    }
}
