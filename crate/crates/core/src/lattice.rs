//! Exact integer linear algebra on small dense lattices.
//!
//! Everything here works over arbitrary-precision integers. Matrices act on
//! column vectors, so a lattice map `Z^n -> Z^m` is an `m x n` matrix and the
//! columns of a "basis matrix" are the basis vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols<T: Into<BigInt> + Clone>(cols: &[Vec<T>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix column");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone().into());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&owned, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_i64(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| to_i64(self.get(i, j))).collect()
    }

    pub fn to_rows_i64(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(to_i64).collect()).collect()
    }

    pub fn to_cols_i64(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.col_i64(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Matrix-vector product on machine integers. Exponent vectors in this
    /// crate are small, so overflow means a broken invariant.
    pub fn apply_i64(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| to_i64(self.get(i, j)) * v[j])
                    .sum()
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Keeps the listed columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        self.transpose().select_cols(rows).transpose()
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows_i64())
    }
}

pub(crate) fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("integer does not fit in i64")
}

/// Finitely generated abelian group `Z^free_rank + (+) Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinAbPresentation {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FinAbPresentation {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for FinAbPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `u * a * v == d`, with `u`, `v` unimodular and `d` diagonal with each
/// nonzero entry dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form. Pivots are chosen by least absolute value, ties broken
/// in row-major order, so the output is deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((pi, pj)) if d.get(pi, pj).abs() <= x.abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return Snf { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = -d.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = -d.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offending = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            if let Some(i) = offending {
                d.add_row(t, i, &BigInt::one());
                u.add_row(t, i, &BigInt::one());
                continue;
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, d, v }
}

/// Cokernel of `a: Z^cols -> Z^rows`.
pub fn cokernel(a: &IntMatrix) -> FinAbPresentation {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let torsion = snf.diagonal().into_iter().filter(|x| *x > BigInt::one()).collect();
    FinAbPresentation { free_rank: a.rows - rank, torsion }
}

/// Saturated basis (as columns, in Hermite form) of `{x : a x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let idx: Vec<usize> = (r..a.cols).collect();
    column_hermite_basis(&snf.v.select_cols(&idx))
}

/// Some integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, b.len(), "right-hand side has wrong length");
    let snf = smith_normal_form(a);
    let ub = snf.u.apply(b);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, c) in ub.iter().enumerate() {
        match diag.get(i) {
            Some(di) if !di.is_zero() => {
                if !c.is_multiple_of(di) {
                    return None;
                }
                y[i] = c / di;
            }
            _ => {
                if !c.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.v.apply(&y))
}

pub fn solve_integer_i64(a: &IntMatrix, b: &[i64]) -> Option<Vec<i64>> {
    let b: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
    solve_integer(a, &b).map(|x| x.iter().map(to_i64).collect())
}

/// Basis (columns) of the intersection of the column lattices of `b1`, `b2`.
/// Both inputs must have independent columns.
pub fn lattice_intersection(b1: &IntMatrix, b2: &IntMatrix) -> IntMatrix {
    assert_eq!(b1.rows, b2.rows, "lattices live in different ambient spaces");
    if b1.cols == 0 || b2.cols == 0 {
        return IntMatrix::zeros(b1.rows, 0);
    }
    let stacked = b1.hcat(&b2.neg());
    let k = kernel_basis(&stacked);
    let top: Vec<usize> = (0..b1.cols).collect();
    let coeffs = k.select_rows(&top);
    column_hermite_basis(&b1.mul(&coeffs))
}

/// Hermite-form basis of the lattice spanned by the columns of `gens`:
/// echelon, positive pivots, entries left of each pivot reduced into
/// `[0, pivot)`. Zero columns are dropped.
pub fn column_hermite_basis(gens: &IntMatrix) -> IntMatrix {
    let mut h = gens.transpose();
    let (k, dim) = (h.rows, h.cols);
    let mut r = 0;
    for col in 0..dim {
        if r == k {
            break;
        }
        loop {
            let best = (r..k)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(bi) = best else { break };
            h.swap_rows(r, bi);
            let p = h.get(r, col).clone();
            let mut done = true;
            for i in r + 1..k {
                let q = -h.get(i, col).div_floor(&p);
                if !q.is_zero() {
                    h.add_row(i, r, &q);
                }
                done &= h.get(i, col).is_zero();
            }
            if done {
                break;
            }
        }
        if r < k && !h.get(r, col).is_zero() {
            if h.get(r, col).is_negative() {
                h.negate_row(r);
            }
            let p = h.get(r, col).clone();
            for i in 0..r {
                let q = -h.get(i, col).div_floor(&p);
                if !q.is_zero() {
                    h.add_row(i, r, &q);
                }
            }
            r += 1;
        }
    }
    let keep: Vec<usize> = (0..r).collect();
    h.select_rows(&keep).transpose()
}

/// True when the columns are independent and span a saturated sublattice.
pub fn is_saturated_basis(b: &IntMatrix) -> bool {
    let snf = smith_normal_form(b);
    snf.rank() == b.cols && snf.diagonal().iter().all(|x| x.is_zero() || x.is_one())
}

/// Extends a saturated basis to a basis of the ambient lattice by greedily
/// appending standard unit vectors.
pub fn extend_to_basis(b: &IntMatrix) -> IntMatrix {
    assert!(is_saturated_basis(b), "only saturated bases can be extended");
    let n = b.rows;
    let mut cur = b.clone();
    for k in 0..n {
        if cur.cols == n {
            break;
        }
        let mut unit = IntMatrix::zeros(n, 1);
        unit.set(k, 0, BigInt::one());
        let cand = cur.hcat(&unit);
        if is_saturated_basis(&cand) {
            cur = cand;
        }
    }
    cur
}

/// Inverse of a unimodular matrix, `None` when `a` is not unimodular.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    if a.rows != a.cols {
        return None;
    }
    let snf = smith_normal_form(a);
    if snf.diagonal().iter().any(|x| !x.is_one()) {
        return None;
    }
    Some(snf.v.mul(&snf.u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn check_snf(a: &IntMatrix) -> Snf {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.u.det().abs().is_one());
        assert!(s.v.det().abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn snf_small_examples() {
        let s = check_snf(&m(&[&[0]]));
        assert_eq!(s.d, m(&[&[0]]));
        assert_eq!(s.u, IntMatrix::identity(1));
        assert_eq!(s.v, IntMatrix::identity(1));

        let s = check_snf(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));

        // rows/cols swapped by hand: [[1,0],[0,-2]] -> diag(1,2)
        let s = check_snf(&m(&[&[0, -2], &[1, 0]]));
        assert_eq!(s.d, m(&[&[1, 0], &[0, 2]]));
    }

    #[test]
    fn snf_divisibility_fix_up() {
        let s = check_snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel(&IntMatrix::identity(2)).is_trivial());
        let c = cokernel(&m(&[&[0, -2], &[1, 0]]));
        assert_eq!(c, FinAbPresentation { free_rank: 0, torsion: vec![BigInt::from(2)] });
        let c = cokernel(&m(&[&[2, 0], &[0, 0]]));
        assert_eq!(c, FinAbPresentation { free_rank: 1, torsion: vec![BigInt::from(2)] });
        assert_eq!(c.to_string(), "Z + Z/2");
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&m(&[&[1, 0]])).to_cols_i64(), vec![vec![0, 1]]);
        assert_eq!(kernel_basis(&m(&[&[0, 1], &[-2, 0]])).cols(), 0);
        let k = kernel_basis(&m(&[&[1, 1]])).to_cols_i64();
        assert_eq!(k.len(), 1);
        assert!(k[0] == vec![1, -1] || k[0] == vec![-1, 1]);
    }

    #[test]
    fn solve_examples() {
        let three_five = [BigInt::from(3), BigInt::from(5)];
        assert_eq!(solve_integer(&IntMatrix::identity(2), &three_five).unwrap(), three_five.to_vec());
        assert!(solve_integer(&m(&[&[2]]), &[BigInt::from(1)]).is_none());
        let a = m(&[&[2, 3]]);
        let x = solve_integer(&a, &[BigInt::from(1)]).unwrap();
        assert_eq!(a.apply(&x), vec![BigInt::from(1)]);
    }

    #[test]
    fn intersection_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(lattice_intersection(&id, &id), id);
        let b1 = IntMatrix::from_cols(&[vec![2, 0], vec![0, 1]], 2);
        let b2 = IntMatrix::from_cols(&[vec![1, 1]], 2);
        assert_eq!(lattice_intersection(&b1, &b2).to_cols_i64(), vec![vec![2, 2]]);
        assert_eq!(lattice_intersection(&b1, &IntMatrix::zeros(2, 0)).cols(), 0);
    }

    #[test]
    fn extension_and_inverse() {
        let b = IntMatrix::from_cols(&[vec![1, 1, 0]], 3);
        let full = extend_to_basis(&b);
        assert_eq!(full.cols(), 3);
        assert!(full.det().abs().is_one());
        let inv = unimodular_inverse(&full).unwrap();
        assert_eq!(inv.mul(&full), IntMatrix::identity(3));
        assert!(unimodular_inverse(&m(&[&[2]])).is_none());
    }

    #[test]
    fn determinant() {
        assert_eq!(m(&[&[0, 1], &[-2, 0]]).det(), BigInt::from(2));
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).det(), BigInt::from(-3));
    }
}
