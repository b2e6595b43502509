//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::modular::{self, invmod, mulmod, submod};
use super::rational::Rational;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r][c..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (k, pv) in pivot_row.iter().enumerate().skip(c) {
                if !pv.is_zero() {
                    row[k] -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace `{v : m v = 0}`.
pub fn nullspace(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// RREF over F_p; returns pivot columns.
fn rref_mod_p(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = invmod(m[r][c], p).unwrap();
        for v in m[r][c..].iter_mut() {
            *v = mulmod(*v, inv, p);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for k in c..cols {
                if pivot_row[k] != 0 {
                    row[k] = submod(row[k], mulmod(f, pivot_row[k], p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Nullspace over F_p in reduced form (one basis vector per free column).
fn nullspace_mod_p(m: &[Vec<u64>], cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut a = m.to_vec();
    let pivots = rref_mod_p(&mut a, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = submod(0, a[row][f], p);
            }
            v
        })
        .collect();
    (free, basis)
}

/// The same reduced nullspace basis as [`nullspace`], computed by solving modulo several
/// large primes, combining by CRT and rational reconstruction, then checked exactly.
/// Falls back to exact elimination if reconstruction does not settle.
pub fn nullspace_multimodular(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut best_free: Option<Vec<usize>> = None;
    let mut residues: Vec<Vec<BigInt>> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<Vec<Rational>>> = None;
    for p in modular::primes_below(modular::LARGE_PRIME_START).take(40) {
        let reduced: Option<Vec<Vec<u64>>> = m
            .iter()
            .map(|row| row.iter().map(|c| modular::reduce_rational(c, p)).collect())
            .collect();
        let Some(reduced) = reduced else { continue };
        let (free, basis) = nullspace_mod_p(&reduced, cols, p);
        match &best_free {
            // fewer free columns means larger rank: earlier primes were unlucky
            Some(bf) if free.len() < bf.len() || (free.len() == bf.len() && free != *bf) => {
                best_free = Some(free);
                residues = basis.iter().map(|v| v.iter().map(|&x| modular::to_bigint(x)).collect()).collect();
                modulus = modular::to_bigint(p);
                last = None;
                continue;
            }
            Some(bf) if free.len() > bf.len() => continue,
            Some(_) => {}
            None => {
                best_free = Some(free);
                residues = basis.iter().map(|v| v.iter().map(|&x| modular::to_bigint(x)).collect()).collect();
                modulus = modular::to_bigint(p);
                continue;
            }
        }
        // CRT step
        let pb = modular::to_bigint(p);
        let inv = {
            let mm = modular::reduce_int(&modulus, p);
            modular::to_bigint(invmod(mm, p).unwrap())
        };
        for (rv, bv) in residues.iter_mut().zip(&basis) {
            for (r, &b) in rv.iter_mut().zip(bv) {
                let rp = modular::reduce_int(r, p);
                let delta = mulmod(submod(b, rp, p), modular::reduce_int(&inv, p), p);
                *r = &*r + &modulus * modular::to_bigint(delta);
            }
        }
        modulus *= &pb;
        let rec: Option<Vec<Vec<Rational>>> = residues
            .iter()
            .map(|v| v.iter().map(|r| modular::rational_reconstruct(r, &modulus)).collect())
            .collect();
        if let Some(rec) = rec {
            if last.as_ref() == Some(&rec) && rec.iter().all(|v| is_kernel_vector(m, v)) {
                return rec;
            }
            last = Some(rec);
        }
    }
    nullspace(m, cols)
}

fn is_kernel_vector(m: &[Vec<Rational>], v: &[Rational]) -> bool {
    m.iter().all(|row| {
        row.iter()
            .zip(v)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            .is_zero()
    })
}

pub fn det3(m: &[[Rational; 3]; 3]) -> Rational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Inverse of a 3x3 matrix via the adjugate; `None` when singular.
pub fn inverse3(m: &[[Rational; 3]; 3]) -> Option<[[Rational; 3]; 3]> {
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let c = |i: usize, j: usize| -> Rational {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    let mut out: [[Rational; 3]; 3] = Default::default();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            // adjugate is the transpose of the cofactor matrix
            *v = c(j, i) / &d;
        }
    }
    Some(out)
}

pub fn mat_mul3(a: &[[Rational; 3]; 3], b: &[[Rational; 3]; 3]) -> [[Rational; 3]; 3] {
    let mut out: [[Rational; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let s = row.iter().zip(v).fold(rat(0), |a, (x, y)| a + x * y);
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn multimodular_matches_exact() {
        let m = vec![
            vec![rat(1), rat(2), rat(3), rat(-1)],
            vec![rat(2), Rational::new(7.into(), 3.into()), rat(6), rat(0)],
        ];
        assert_eq!(nullspace_multimodular(&m, 4), nullspace(&m, 4));
    }

    #[test]
    fn inverse_round_trip() {
        let m = [
            [rat(2), rat(1), rat(0)],
            [rat(0), rat(1), rat(3)],
            [rat(1), rat(0), rat(1)],
        ];
        let inv = inverse3(&m).unwrap();
        let id = mat_mul3(&m, &inv);
        for (i, row) in id.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, rat((i == j) as i64));
            }
        }
    }
}
