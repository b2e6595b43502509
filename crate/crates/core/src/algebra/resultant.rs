//! Sylvester resultants of multivariate polynomials.

use super::multipoly::MultiPoly;

/// Resultant of `p` and `q` with respect to `var`, as the Sylvester determinant
/// (fraction-free Bareiss elimination over the polynomial ring).
///
/// When one argument has degree 0 in `var`, `Res(p, c) = c^deg(p)` and
/// `Res(c, q) = c^deg(q)`; two constants give 1.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: usize) -> MultiPoly {
    assert!(!p.is_zero() && !q.is_zero(), "resultant of a zero polynomial");
    let a = p.coefficients_in(var);
    let b = q.coefficients_in(var);
    let (m, n) = (a.len() - 1, b.len() - 1);
    if n == 0 {
        return b[0].pow(m as u32);
    }
    if m == 0 {
        return a[0].pow(n as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![MultiPoly::zero(); size]; size];
    for i in 0..n {
        for k in 0..=m {
            mat[i][i + k] = a[m - k].clone();
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + k] = b[n - k].clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant of a square polynomial matrix by Bareiss' fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return MultiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MultiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn linear_case() {
        let r = resultant(&p("z - x"), &p("z - y"), 2);
        assert!(r == p("x - y") || r == p("y - x"));
    }

    #[test]
    fn power_convention() {
        assert_eq!(resultant(&p("z^2"), &p("x"), 2), p("x^2"));
        assert_eq!(resultant(&p("x"), &p("z^3 + 1"), 2), p("x^3"));
        assert_eq!(resultant(&p("x"), &p("y"), 2), MultiPoly::one());
    }

    #[test]
    fn common_factor_gives_zero() {
        let g = p("z - x*y");
        let r = resultant(&(&g * &p("z + 1")), &(&g * &p("z^2 + y")), 2);
        assert!(r.is_zero());
    }
}
