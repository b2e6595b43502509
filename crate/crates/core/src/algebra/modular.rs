//! Arithmetic over prime fields F_p with p < 2^63, and dense polynomials over them.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::rational::Rational;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn invmod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

/// Deterministic Miller-Rabin for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes descending from `start` (inclusive).
pub fn primes_below(start: u64) -> impl Iterator<Item = u64> {
    let mut n = start;
    std::iter::from_fn(move || {
        while n > 2 {
            let c = n;
            n -= 1;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    })
}

/// Large primes used by default.
pub const LARGE_PRIME_START: u64 = (1u64 << 62) - 1;

pub fn reduce_int(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

/// Image of a rational in F_p; `None` if p divides the denominator.
pub fn reduce_rational(r: &Rational, p: u64) -> Option<u64> {
    let d = reduce_int(r.denom(), p);
    let inv = invmod(d, p)?;
    Some(mulmod(reduce_int(r.numer(), p), inv, p))
}

/// Rational reconstruction: finds `a/b ≡ u (mod m)` with `|a|, b <= sqrt(m/2)`.
pub fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Symmetric residue in `(-m/2, m/2]`.
pub fn symmetric(u: &BigInt, m: &BigInt) -> BigInt {
    let r = u.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

pub fn to_bigint(a: u64) -> BigInt {
    BigInt::from_biguint(Sign::Plus, a.into())
}

// ---- polynomials over F_p: coefficient vectors, lowest degree first, no trailing zeros ----

pub type PolyP = Vec<u64>;

pub fn trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &PolyP) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn poly_add(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        *o = addmod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p);
    }
    trim(out)
}

pub fn poly_sub(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        *o = submod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p);
    }
    trim(out)
}

pub fn poly_mul(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let v = acc[i + j] + x as u128 * y as u128;
            acc[i + j] = if v >= pp * pp { v % pp } else { v };
        }
    }
    trim(acc.into_iter().map(|v| (v % pp) as u64).collect())
}

pub fn poly_divrem(a: &PolyP, b: &PolyP, p: u64) -> (PolyP, PolyP) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    let db = b.len() - 1;
    let inv = invmod(*b.last().unwrap(), p).unwrap();
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = mulmod(r[i], inv, p);
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = submod(r[i - db + j], mulmod(c, b[j], p), p);
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn poly_rem(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    poly_divrem(a, b, p).1
}

pub fn poly_monic(a: &PolyP, p: u64) -> PolyP {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = invmod(lc, p).unwrap();
            a.iter().map(|&c| mulmod(c, inv, p)).collect()
        }
    }
}

pub fn poly_gcd(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    poly_monic(&a, p)
}

pub fn poly_deriv(a: &PolyP, p: u64) -> PolyP {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect(),
    )
}

pub fn poly_eval(a: &PolyP, x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| addmod(mulmod(acc, x, p), c, p))
}

/// `base^e mod modulus`.
pub fn poly_powmod(base: &PolyP, mut e: u64, modulus: &PolyP, p: u64) -> PolyP {
    let mut acc: PolyP = poly_rem(&vec![1], modulus, p);
    let mut b = poly_rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), modulus, p);
        }
        e >>= 1;
        if e > 0 {
            b = poly_rem(&poly_mul(&b, &b, p), modulus, p);
        }
    }
    acc
}

/// Distinct roots in F_p (p odd) by Cantor-Zassenhaus splitting of gcd(f, x^p - x).
pub fn roots_mod_p<R: Rng + ?Sized>(f: &PolyP, p: u64, rng: &mut R) -> Vec<u64> {
    let f = trim(f.clone());
    if f.len() <= 1 {
        return Vec::new();
    }
    let f = poly_monic(&f, p);
    let xp = poly_powmod(&vec![0, 1], p, &f, p);
    let g = poly_gcd(&f, &poly_sub(&xp, &vec![0, 1], p), p);
    let mut out = Vec::new();
    split_linear(&g, p, rng, &mut out);
    out.sort_unstable();
    out
}

fn split_linear<R: Rng + ?Sized>(g: &PolyP, p: u64, rng: &mut R, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(submod(0, mulmod(g[0], invmod(g[1], p).unwrap(), p), p)),
        _ => loop {
            let a = rng.gen_range(0..p);
            let h = poly_powmod(&vec![a, 1], (p - 1) / 2, g, p);
            let d = poly_gcd(g, &poly_sub(&h, &vec![1], p), p);
            if d.len() > 1 && d.len() < g.len() {
                let (q, _) = poly_divrem(g, &d, p);
                split_linear(&d, p, rng, out);
                split_linear(&poly_monic(&q, p), p, rng, out);
                return;
            }
        },
    }
}

/// Lagrange interpolation through `(xs[i], ys[i])` with distinct `xs`.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> PolyP {
    // Newton divided differences.
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = submod(coef[i], coef[i - 1], p);
            let den = submod(xs[i], xs[i - j], p);
            coef[i] = mulmod(num, invmod(den, p).expect("repeated node"), p);
        }
    }
    let mut out: PolyP = Vec::new();
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + coef[i]
        let mut next = vec![0; out.len() + 1];
        for (k, &c) in out.iter().enumerate() {
            next[k + 1] = addmod(next[k + 1], c, p);
            next[k] = submod(next[k], mulmod(c, xs[i], p), p);
        }
        next[0] = addmod(next[0], coef[i], p);
        out = trim(next);
    }
    out
}

/// Determinant of a square matrix over F_p by Gaussian elimination.
pub fn det_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let pivot = match (col..n).find(|&r| m[r][col] != 0) {
            Some(r) => r,
            None => return 0,
        };
        if pivot != col {
            m.swap(pivot, col);
            det = submod(0, det, p);
        }
        det = mulmod(det, m[col][col], p);
        let inv = invmod(m[col][col], p).unwrap();
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let f = mulmod(m[r][col], inv, p);
            for c in col..n {
                let v = mulmod(f, m[col][c], p);
                m[r][c] = submod(m[r][c], v, p);
            }
        }
    }
    det
}

/// Resultant of two dense polynomials over F_p via the Sylvester determinant,
/// taking the formal degrees `da`, `db` (leading coefficients may vanish).
pub fn resultant_mod_p(a: &PolyP, da: usize, b: &PolyP, db: usize, p: u64) -> u64 {
    let n = da + db;
    if n == 0 {
        return 1;
    }
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..db {
        for k in 0..=da {
            m[i][i + k] = *a.get(da - k).unwrap_or(&0);
        }
    }
    for i in 0..da {
        for k in 0..=db {
            m[db + i][i + k] = *b.get(db - k).unwrap_or(&0);
        }
    }
    det_mod_p(m, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(1_000_000_007));
        assert!(!is_prime(1) && !is_prime(561) && !is_prime(1_000_000_007u64 * 3));
        let p = primes_below(LARGE_PRIME_START).next().unwrap();
        assert!(p < (1 << 62) && is_prime(p));
    }

    #[test]
    fn reconstruct() {
        let m = BigInt::from(1_000_000_007u64);
        let r = Rational::new((-3).into(), 7.into());
        let u = reduce_rational(&r, 1_000_000_007).unwrap();
        assert_eq!(rational_reconstruct(&to_bigint(u), &m), Some(r));
    }

    #[test]
    fn roots_of_split_polynomial() {
        let p = 1_000_000_007;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x-1)(x-5)(x^2+1) has roots 1, 5 and ±i when -1 is a square; p ≡ 3 mod 4 here.
        let f = poly_mul(
            &poly_mul(&vec![p - 1, 1], &vec![p - 5, 1], p),
            &vec![1, 0, 1],
            p,
        );
        assert_eq!(roots_mod_p(&f, p, &mut rng), vec![1, 5]);
    }

    #[test]
    fn interpolation_round_trip() {
        let p = 101;
        let f = vec![3, 0, 7, 1];
        let xs: Vec<u64> = (1..=4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| poly_eval(&f, x, p)).collect();
        assert_eq!(interpolate(&xs, &ys, p), f);
    }

    #[test]
    fn resultant_small() {
        // Res(x - 2, x - 5) = (2 - 5) up to sign convention: Res(a, b) = b(root of a) for monic a.
        let p = 101;
        let r = resultant_mod_p(&vec![p - 2, 1], 1, &vec![p - 5, 1], 1, p);
        assert_eq!(r, p - 3);
    }
}
