//! Rank of finite families of Laurent polynomials over `Q`.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::laurent::LaurentPoly;

/// Rank of a list of rational row vectors, by Gaussian elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for k in c..cols {
                let d = &f * &m[r][k];
                m[i][k] -= d;
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the `Q`-span of the given polynomials.
pub fn span_rank(polys: &[LaurentPoly]) -> usize {
    let support: BTreeSet<&Vec<i64>> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e)).collect();
    let rows: Vec<Vec<BigRational>> =
        polys.iter().map(|p| support.iter().map(|e| p.coeff(e)).collect()).collect();
    rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_of_dependent_family() {
        let a = LaurentPoly::from_int_terms(1, &[(&[0], 1), (&[1], 1)]);
        let b = LaurentPoly::from_int_terms(1, &[(&[1], 1), (&[2], 1)]);
        let c = a.add(&b).unwrap();
        assert_eq!(span_rank(&[a.clone(), b.clone()]), 2);
        assert_eq!(span_rank(&[a, b, c]), 2);
        assert_eq!(span_rank(&[]), 0);
    }
}
