//! Seeds `(N, I, E, F, [.,.])`, their derived lattice maps, principal
//! coefficients, and skew-seed mutation.
//!
//! `N` is `Z^rank` with its standard basis, `M = N^*` uses the dual basis, and
//! `M_I = N_I^*` is written in the basis dual to `E`. Index labels are
//! arbitrary distinct integers; internally every per-index array is ordered
//! as the labels are listed in `I`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{
    column_hermite_basis, extend_to_basis, is_saturated_basis, kernel_basis, solve_integer_i64,
    to_i64, unimodular_inverse, IntMatrix,
};

/// On-disk seed description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFile {
    pub rank: usize,
    #[serde(rename = "I")]
    pub indices: Vec<usize>,
    #[serde(rename = "F", default)]
    pub frozen: Vec<usize>,
    /// The vectors `e_i`, one per entry of `I`, in that order.
    #[serde(rename = "E")]
    pub e: Vec<Vec<i64>>,
    /// `bracket[a][b] = [n_a, n_b]` on the standard basis of `N`.
    pub bracket: Vec<Vec<i64>>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Seed {
    rank: usize,
    indices: Vec<usize>,
    frozen: BTreeSet<usize>,
    e: IntMatrix,
    bracket: IntMatrix,
}

/// A failed seed condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    NotSaturated,
    SelfBracket { index: usize },
    P2Zero { index: usize },
    P2NotPrimitive { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSaturated => write!(f, "E is not a basis of a saturated sublattice"),
            Violation::SelfBracket { index } => {
                write!(f, "[e_{index},e_{index}] != 0 for unfrozen {index}")
            }
            Violation::P2Zero { index } => write!(f, "p2(e_{index}) = 0"),
            Violation::P2NotPrimitive { index } => write!(f, "p2(e_{index}) not primitive"),
        }
    }
}

/// The lattice maps attached to a seed, as matrices acting on columns.
#[derive(Clone, Debug)]
pub struct DerivedMaps {
    /// `N -> M`, `n |-> [n, .]`
    pub p1: IntMatrix,
    /// `N -> M`, `n |-> [., n]`
    pub p2: IntMatrix,
    /// `N -> M_I`
    pub pbar1: IntMatrix,
    pub pbar2: IntMatrix,
    /// Saturated bases of `ker p1`, `ker p2`; these are also `kappa1`, `kappa2`.
    pub k1: IntMatrix,
    pub k2: IntMatrix,
    /// `M -> K1^*`, dual to `kappa1`.
    pub lambda: IntMatrix,
}

impl Seed {
    pub fn new(
        rank: usize,
        indices: Vec<usize>,
        frozen: Vec<usize>,
        e: Vec<Vec<i64>>,
        bracket: Vec<Vec<i64>>,
    ) -> Result<Seed> {
        let file = SeedFile { rank, indices, frozen, e, bracket };
        Seed::from_file(&file)
    }

    pub fn from_file(file: &SeedFile) -> Result<Seed> {
        let bad = |msg: String| Err(Error::InvalidSeed(msg));
        if file.rank == 0 {
            return bad("rank must be positive".into());
        }
        if file.indices.len() > file.rank {
            return bad(format!("|I| = {} exceeds rank {}", file.indices.len(), file.rank));
        }
        let labels: BTreeSet<usize> = file.indices.iter().copied().collect();
        if labels.len() != file.indices.len() {
            return bad("duplicate index labels".into());
        }
        if let Some(f) = file.frozen.iter().find(|f| !labels.contains(f)) {
            return bad(format!("frozen index {f} is not in I"));
        }
        if file.e.len() != file.indices.len() {
            return bad(format!("E has {} vectors but |I| = {}", file.e.len(), file.indices.len()));
        }
        if file.e.iter().any(|v| v.len() != file.rank) {
            return bad("every e_i must have length rank".into());
        }
        if file.bracket.len() != file.rank || file.bracket.iter().any(|r| r.len() != file.rank) {
            return bad("bracket must be rank x rank".into());
        }
        Ok(Seed {
            rank: file.rank,
            indices: file.indices.clone(),
            frozen: file.frozen.iter().copied().collect(),
            e: IntMatrix::from_cols(&file.e, file.rank),
            bracket: IntMatrix::from_rows(&file.bracket, file.rank),
        })
    }

    pub fn from_json(text: &str) -> Result<Seed> {
        let file: SeedFile = serde_json::from_str(text)?;
        Seed::from_file(&file)
    }

    pub fn to_file(&self) -> SeedFile {
        SeedFile {
            rank: self.rank,
            indices: self.indices.clone(),
            frozen: self.frozen.iter().copied().collect(),
            e: self.e.to_cols_i64(),
            bracket: self.bracket.to_rows_i64(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("seed serializes")
    }

    /// Short content hash used to key reports and caches.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn num_indices(&self) -> usize {
        self.indices.len()
    }

    pub fn frozen(&self) -> &BTreeSet<usize> {
        &self.frozen
    }

    pub fn is_frozen(&self, label: usize) -> bool {
        self.frozen.contains(&label)
    }

    pub fn unfrozen(&self) -> Vec<usize> {
        self.indices.iter().copied().filter(|i| !self.frozen.contains(i)).collect()
    }

    pub fn position(&self, label: usize) -> Result<usize> {
        self.indices.iter().position(|&i| i == label).ok_or(Error::InvalidIndex(label))
    }

    pub fn e_matrix(&self) -> &IntMatrix {
        &self.e
    }

    pub fn bracket_matrix(&self) -> &IntMatrix {
        &self.bracket
    }

    pub fn e(&self, label: usize) -> Result<Vec<i64>> {
        Ok(self.e.col_i64(self.position(label)?))
    }

    fn e_at(&self, pos: usize) -> Vec<i64> {
        self.e.col_i64(pos)
    }

    /// `[x, y]` for `x, y` in `N`.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let by = self.bracket.apply_i64(y);
        x.iter().zip(&by).map(|(a, b)| a * b).sum()
    }

    /// `p1(n) = [n, .]` in `M`.
    pub fn p1(&self, n: &[i64]) -> Vec<i64> {
        self.bracket.transpose().apply_i64(n)
    }

    /// `p2(n) = [., n]` in `M`.
    pub fn p2(&self, n: &[i64]) -> Vec<i64> {
        self.bracket.apply_i64(n)
    }

    /// `pbar1(n) = ([n, e_i])_i` in `M_I`.
    pub fn pbar1(&self, n: &[i64]) -> Vec<i64> {
        (0..self.indices.len()).map(|p| self.pair(n, &self.e_at(p))).collect()
    }

    pub fn pbar1_matrix(&self) -> IntMatrix {
        self.bracket.mul(&self.e).transpose()
    }

    /// `b[i][j] = [e_i, e_j]` over `I`.
    pub fn exchange_matrix(&self) -> IntMatrix {
        self.e.transpose().mul(&self.bracket).mul(&self.e)
    }

    /// Every failed seed condition; empty iff the seed is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !is_saturated_basis(&self.e) {
            out.push(Violation::NotSaturated);
        }
        for (pos, &label) in self.indices.iter().enumerate() {
            let e = self.e_at(pos);
            if !self.is_frozen(label) && self.pair(&e, &e) != 0 {
                out.push(Violation::SelfBracket { index: label });
            }
            let p2 = self.p2(&e);
            if p2.iter().all(|&x| x == 0) {
                out.push(Violation::P2Zero { index: label });
            } else if self.is_frozen(label) {
                let g = p2.iter().fold(0i64, |g, &x| g.gcd(&x));
                if g != 1 {
                    out.push(Violation::P2NotPrimitive { index: label });
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
            Err(Error::InvalidSeed(msgs.join("; ")))
        }
    }

    pub fn derive_maps(&self) -> DerivedMaps {
        let p1 = self.bracket.transpose();
        let p2 = self.bracket.clone();
        let k1 = kernel_basis(&p1);
        let k2 = kernel_basis(&p2);
        DerivedMaps {
            pbar1: self.pbar1_matrix(),
            pbar2: self.e.transpose().mul(&self.bracket),
            lambda: k1.transpose(),
            p1,
            p2,
            k1,
            k2,
        }
    }

    /// Skew-symmetrizers `d_j`, `j` in `I_uf` (listed in label order of
    /// `unfrozen()`), with `d_i [e_i,e_j] = -d_j [e_j,e_i]`. Each connected
    /// block of the unfrozen exchange graph is scaled to coprime positive
    /// integers.
    pub fn is_skew(&self) -> Option<Vec<BigInt>> {
        let uf: Vec<usize> = self.unfrozen();
        let pos: Vec<usize> = uf.iter().map(|&l| self.position(l).unwrap()).collect();
        let b = self.exchange_matrix();
        let bij = |a: usize, c: usize| -> BigInt { b.get(pos[a], pos[c]).clone() };
        let k = uf.len();
        for a in 0..k {
            if !bij(a, a).is_zero() {
                return None;
            }
        }
        let mut d: Vec<Option<BigRational>> = vec![None; k];
        let mut out = vec![BigInt::zero(); k];
        for start in 0..k {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(BigRational::one());
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(a) = queue.pop_front() {
                let da = d[a].clone().unwrap();
                for c in 0..k {
                    let (x, y) = (bij(a, c), bij(c, a));
                    if x.is_zero() && y.is_zero() {
                        continue;
                    }
                    if x.is_zero() || y.is_zero() || x.signum() == y.signum() {
                        return None;
                    }
                    // d_a x = -d_c y
                    let dc = -&da * BigRational::from(x) / BigRational::from(y);
                    match &d[c] {
                        Some(existing) if *existing != dc => return None,
                        Some(_) => {}
                        None => {
                            d[c] = Some(dc);
                            comp.push(c);
                            queue.push_back(c);
                        }
                    }
                }
            }
            let lcm = comp.iter().fold(BigInt::one(), |l, &c| l.lcm(d[c].as_ref().unwrap().denom()));
            let ints: Vec<BigInt> =
                comp.iter().map(|&c| (d[c].clone().unwrap() * BigRational::from(lcm.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            for (&c, v) in comp.iter().zip(ints) {
                out[c] = v / &g;
            }
        }
        debug_assert!(out.iter().all(|x| x.is_positive()));
        Some(out)
    }

    /// Seed mutation at an unfrozen index: `e_j -> -e_j` and
    /// `e_i -> e_i + max([e_i,e_j], 0) e_j` otherwise. The form is unchanged.
    pub fn mutate(&self, j: usize) -> Result<Seed> {
        let pj = self.position(j)?;
        if self.is_frozen(j) {
            return Err(Error::FrozenIndex(j));
        }
        if self.is_skew().is_none() {
            return Err(Error::NotSkew);
        }
        let ej = self.e_at(pj);
        let cols: Vec<Vec<i64>> = (0..self.indices.len())
            .map(|p| {
                let ei = self.e_at(p);
                if p == pj {
                    ei.iter().map(|x| -x).collect()
                } else {
                    let c = self.pair(&ei, &ej).max(0);
                    ei.iter().zip(&ej).map(|(a, b)| a + c * b).collect()
                }
            })
            .collect();
        Ok(Seed { e: IntMatrix::from_cols(&cols, self.rank), ..self.clone() })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<Seed> {
        path.iter().try_fold(self.clone(), |s, &j| s.mutate(j))
    }

    /// Exponents of the `X`-chart coordinates `z^{e_i}`.
    pub fn x_coordinates(&self) -> Vec<Vec<i64>> {
        self.e.to_cols_i64()
    }

    /// Exponents `m_i` in `M` of the `A`-chart coordinates: `<e_j, m_i> =
    /// delta_ij`, and `m_i` vanishes on the greedy unit-vector complement of
    /// `N_I`.
    pub fn a_coordinates(&self) -> Result<Vec<Vec<i64>>> {
        if !is_saturated_basis(&self.e) {
            return Err(Error::InvalidSeed("E is not a saturated basis".into()));
        }
        let basis = extend_to_basis(&self.e);
        let inv = unimodular_inverse(&basis).expect("extended basis is unimodular");
        Ok((0..self.indices.len()).map(|p| inv.row(p).iter().map(to_i64).collect()).collect())
    }

    /// A fixed section of `pbar1` over its image.
    pub fn section_of_pbar1(&self) -> Section {
        let pbar1 = self.pbar1_matrix();
        let image = column_hermite_basis(&pbar1);
        let cols: Vec<Vec<i64>> = (0..image.cols())
            .map(|j| solve_integer_i64(&pbar1, &image.col_i64(j)).expect("basis vector lies in the image"))
            .collect();
        Section { image_basis: image, preimages: IntMatrix::from_cols(&cols, self.rank) }
    }

    pub fn principal(&self) -> PrinSeed {
        PrinSeed::new(self)
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seed({})", self.to_json())
    }
}

/// A homomorphism `s: pbar1(N) -> N` with `pbar1 . s = id`, given on a
/// Hermite basis of the image.
#[derive(Clone, Debug)]
pub struct Section {
    pub image_basis: IntMatrix,
    pub preimages: IntMatrix,
}

impl Section {
    pub fn apply(&self, m0: &[i64]) -> Result<Vec<i64>> {
        let coeffs = solve_integer_i64(&self.image_basis, m0)
            .ok_or_else(|| Error::NotInImage(format!("{m0:?}")))?;
        Ok(self.preimages.apply_i64(&coeffs))
    }

    /// Another section, `s'(b_j) = s(b_j) + shift_j`. Each shift must lie in
    /// `ker pbar1` for the result to be a section.
    pub fn shifted(&self, shifts: &[Vec<i64>]) -> Section {
        assert_eq!(shifts.len(), self.preimages.cols());
        let cols: Vec<Vec<i64>> = (0..self.preimages.cols())
            .map(|j| self.preimages.col_i64(j).iter().zip(&shifts[j]).map(|(a, b)| a + b).collect())
            .collect();
        Section { image_basis: self.image_basis.clone(), preimages: IntMatrix::from_cols(&cols, self.preimages.rows()) }
    }
}

/// The principal-coefficient seed over `N_prin = N_I (+) M`.
///
/// `N_I` is written in the coordinates of the original `E` (so the first
/// `|I|` entries) and `M` in the dual standard basis. Exponents on the
/// `A_prin` side are therefore `(m, n)` with `m` in `M_I`, `n` in `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrinSeed {
    /// The underlying seed after the same mutations.
    pub base: Seed,
    pub seed: Seed,
}

impl PrinSeed {
    pub fn new(base: &Seed) -> PrinSeed {
        let k = base.num_indices();
        let r = base.rank();
        let exch = base.exchange_matrix();
        let et = base.e_matrix().transpose();
        let mut bracket = vec![vec![0i64; k + r]; k + r];
        for a in 0..k {
            for b in 0..k {
                bracket[a][b] = to_i64(exch.get(a, b));
            }
            for b in 0..r {
                bracket[a][k + b] = to_i64(et.get(a, b));
                bracket[k + b][a] = -to_i64(et.get(a, b));
            }
        }
        let e: Vec<Vec<i64>> = (0..k)
            .map(|p| {
                let mut v = vec![0; k + r];
                v[p] = 1;
                v
            })
            .collect();
        let seed = Seed::new(k + r, base.indices().to_vec(), base.frozen().iter().copied().collect(), e, bracket)
            .expect("principal seed is well formed");
        PrinSeed { base: base.clone(), seed }
    }

    pub fn mutate(&self, j: usize) -> Result<PrinSeed> {
        Ok(PrinSeed { base: self.base.mutate(j)?, seed: self.seed.mutate(j)? })
    }

    /// `p_{1,prin}((n, 0)) = (pbar1(n), n)` for `n` in `N_I` given in `E`-coordinates.
    pub fn p1_prin(&self, n_coords: &[i64]) -> Vec<i64> {
        let mut v = n_coords.to_vec();
        v.resize(self.seed.rank(), 0);
        self.seed.p1(&v)
    }
}

/// Brute helper used in reports: the exchange matrix as a label-keyed map.
pub fn exchange_map(seed: &Seed) -> BTreeMap<(usize, usize), i64> {
    let b = seed.exchange_matrix();
    let mut out = BTreeMap::new();
    for (a, &i) in seed.indices().iter().enumerate() {
        for (c, &j) in seed.indices().iter().enumerate() {
            out.insert((i, j), to_i64(b.get(a, c)));
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Seed;

    pub fn a2() -> Seed {
        Seed::new(2, vec![1, 2], vec![], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    pub fn a1f() -> Seed {
        Seed::new(2, vec![1, 2], vec![2], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    pub fn k() -> Seed {
        Seed::new(2, vec![1, 2], vec![2], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-2, 0]]).unwrap()
    }

    pub fn b2() -> Seed {
        Seed::new(2, vec![1, 2], vec![], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-2, 0]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn validation() {
        assert!(a2().validate().is_empty());
        assert!(a1f().validate().is_empty());
        assert!(k().validate().is_empty());

        let bad = Seed::new(2, vec![1, 2], vec![], vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 0]]).unwrap();
        let v = bad.validate();
        assert!(v.contains(&Violation::SelfBracket { index: 1 }));
        assert_eq!(Violation::SelfBracket { index: 1 }.to_string(), "[e_1,e_1] != 0 for unfrozen 1");

        // p2(e2) = (2, 0)
        let bad = Seed::new(2, vec![1, 2], vec![2], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 2], vec![-1, 0]]).unwrap();
        assert_eq!(bad.validate(), vec![Violation::P2NotPrimitive { index: 2 }]);

        let unsat = Seed::new(2, vec![1], vec![], vec![vec![2, 0]], vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert!(unsat.validate().contains(&Violation::NotSaturated));
    }

    #[test]
    fn structural_errors() {
        assert!(Seed::new(2, vec![1, 1], vec![], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-1, 0]]).is_err());
        assert!(Seed::new(2, vec![1], vec![3], vec![vec![1, 0]], vec![vec![0, 1], vec![-1, 0]]).is_err());
        assert!(Seed::from_json(r#"{"rank":2,"I":[1],"F":[],"E":[[1.5,0]],"bracket":[[0,1],[-1,0]]}"#).is_err());
    }

    #[test]
    fn derived_maps() {
        let s = a2();
        assert_eq!(s.pbar1(&[1, 0]), vec![0, 1]);
        assert_eq!(s.pbar1(&[0, 1]), vec![-1, 0]);
        assert_eq!(s.p2(&s.e(2).unwrap()), vec![1, 0]);
        let d = s.derive_maps();
        assert_eq!(d.k1.cols(), 0);

        let zero = Seed::new(2, vec![1], vec![], vec![vec![1, 0]], vec![vec![0, 0], vec![0, 0]]).unwrap();
        let d = zero.derive_maps();
        assert!(d.p1.is_zero() && d.p2.is_zero());
        assert_eq!(d.k2, IntMatrix::identity(2));
    }

    #[test]
    fn principal_seed_bracket() {
        let p = a2().principal();
        assert_eq!(p.seed.rank(), 4);
        let e1 = [1, 0, 0, 0];
        let e2 = [0, 1, 0, 0];
        let e1_dual = [0, 0, 1, 0];
        assert_eq!(p.seed.pair(&e1, &e2), 1);
        assert_eq!(p.seed.pair(&e1, &e1_dual), 1);
        assert_eq!(p.p1_prin(&[1, 0]), vec![0, 1, 1, 0]);
        for s in [a2(), a1f(), k()] {
            assert!(s.principal().seed.validate().is_empty());
        }
    }

    #[test]
    fn skew_detection() {
        assert_eq!(a2().is_skew().unwrap(), ints(&[1, 1]));
        // d_1 [e1,e2] = -d_2 [e2,e1] with [e1,e2] = 1, [e2,e1] = -2 forces d = (2, 1)
        assert_eq!(b2().is_skew().unwrap(), ints(&[2, 1]));
        let sym = Seed::new(2, vec![1, 2], vec![], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(sym.is_skew().is_none());
    }

    #[test]
    fn mutation_formula() {
        let s = a2().mutate(1).unwrap();
        assert_eq!(s.e(1).unwrap(), vec![-1, 0]);
        assert_eq!(s.e(2).unwrap(), vec![0, 1]);

        // [e2, e1] = 1
        let t = Seed::new(2, vec![1, 2], vec![], vec![vec![1, 0], vec![0, 1]], vec![vec![0, -1], vec![1, 0]]).unwrap();
        assert_eq!(t.mutate(1).unwrap().e(2).unwrap(), vec![1, 1]);

        assert!(matches!(a1f().mutate(2), Err(Error::FrozenIndex(2))));
        assert!(matches!(a2().mutate(7), Err(Error::InvalidIndex(7))));
        let sym = Seed::new(2, vec![1, 2], vec![], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(sym.mutate(1), Err(Error::NotSkew)));
    }

    #[test]
    fn double_mutation_shears_by_the_exchange_entry() {
        // mu_j mu_j fixes e_j and sends e_i to e_i + [e_i,e_j] e_j
        let s = a2();
        let twice = s.mutate(1).unwrap().mutate(1).unwrap();
        assert_eq!(twice.e(1).unwrap(), vec![1, 0]);
        assert_eq!(twice.e(2).unwrap(), vec![-1, 1]);
        assert!(twice.validate().is_empty());
    }

    #[test]
    fn a2_exchange_matrix_is_periodic_up_to_swap() {
        let s = a2();
        let end = s.mutate_path(&[1, 2, 1, 2, 1]).unwrap();
        let b0 = s.exchange_matrix();
        let b5 = end.exchange_matrix();
        for a in 0..2 {
            for c in 0..2 {
                assert_eq!(b5.get(a, c), b0.get(1 - a, 1 - c));
            }
        }
    }

    #[test]
    fn section_examples() {
        let s = a2();
        let sec = s.section_of_pbar1();
        assert_eq!(sec.apply(&[0, 1]).unwrap(), vec![1, 0]);
        for j in 0..sec.image_basis.cols() {
            let b = sec.image_basis.col_i64(j);
            assert_eq!(s.pbar1(&sec.apply(&b).unwrap()), b);
        }
        let sk = k();
        let sec = sk.section_of_pbar1();
        assert!(sec.apply(&[1, 0]).is_err());
        assert_eq!(sk.pbar1(&sec.apply(&[2, 1]).unwrap()), vec![2, 1]);
    }

    #[test]
    fn a_coordinates_of_principal_seed() {
        let p = a2().principal().mutate(1).unwrap();
        let coords = p.seed.a_coordinates().unwrap();
        assert_eq!(coords, vec![vec![-1, 0, 0, 0], vec![0, 1, 0, 0]]);
    }

    #[test]
    fn json_round_trip() {
        let s = k();
        let back = Seed::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.content_hash(), s.content_hash());
    }
}
