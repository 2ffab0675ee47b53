//! Chart gluing for the `A`, `X` and principal `A` sides, valuations along
//! the exceptional and frozen boundary divisors, the Picard group of the
//! partially compactified `X`-space, section membership, and Cartier
//! lattices of fan compactifications.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cokernel, column_hermite_basis, lattice_intersection, FinAbPresentation, IntMatrix};
use crate::laurent::{LaurentPoly, RationalFn};
use crate::seed::{PrinSeed, Seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    X,
    APrin,
}

impl Side {
    /// Number of variables of the chart tori on this side.
    pub fn dim(self, seed: &Seed) -> usize {
        match self {
            Side::A | Side::X => seed.rank(),
            Side::APrin => seed.rank() + seed.num_indices(),
        }
    }
}

/// Mutation data `(u, psi)` for index `j` of a seed, on the given side.
fn mutation_data(seed: &Seed, side: Side, j: usize) -> Result<(Vec<i64>, Vec<i64>)> {
    let e = seed.e(j)?;
    Ok(match side {
        Side::A | Side::APrin => (e.clone(), seed.p1(&e)),
        Side::X => (seed.p2(&e), e),
    })
}

/// The composed pullback of functions along a mutation path, from the chart
/// at the end of the path to the initial chart.
#[derive(Clone, Debug)]
pub struct PathPullback {
    side: Side,
    dim: usize,
    /// `(u, psi)` per unfrozen step, in path order.
    steps: Vec<(Vec<i64>, Vec<i64>)>,
    /// The seed reached at the end of the path (the principal seed on the
    /// `A_prin` side).
    end: Seed,
}

impl PathPullback {
    pub fn apply(&self, f: &RationalFn) -> Result<RationalFn> {
        if f.dim() != self.dim {
            return Err(Error::RankMismatch(self.dim, f.dim()));
        }
        self.steps.iter().rev().try_fold(f.clone(), |g, (u, psi)| g.mutation_pullback(u, psi))
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn end_seed(&self) -> &Seed {
        &self.end
    }

    /// Exponents of the cluster coordinates of the end chart.
    pub fn end_coordinates(&self) -> Result<Vec<Vec<i64>>> {
        chart_coordinates(&self.end, self.side)
    }
}

/// Exponents of the cluster coordinates of a chart: `e_i` on the `X` side,
/// the dual basis to `E` on the `A` sides.
pub fn chart_coordinates(seed: &Seed, side: Side) -> Result<Vec<Vec<i64>>> {
    match side {
        Side::X => Ok(seed.x_coordinates()),
        Side::A | Side::APrin => seed.a_coordinates(),
    }
}

/// Pullback along a path of indices. Frozen entries are chart inclusions and
/// act as the identity. On the `A_prin` side `seed` is the underlying seed.
pub fn transition_pullback(seed: &Seed, side: Side, path: &[usize]) -> Result<PathPullback> {
    let mut cur = match side {
        Side::APrin => PrinSeed::new(seed).seed,
        _ => seed.clone(),
    };
    let mut steps = Vec::new();
    for &j in path {
        cur.position(j)?;
        if cur.is_frozen(j) {
            continue;
        }
        steps.push(mutation_data(&cur, side, j)?);
        cur = cur.mutate(j)?;
    }
    Ok(PathPullback { side, dim: side.dim(seed), steps, end: cur })
}

fn nonzero(f: &RationalFn) -> Result<()> {
    if f.is_zero() {
        Err(Error::ZeroInput)
    } else {
        Ok(())
    }
}

/// Order of vanishing of a function on `U_0` along the exceptional divisor
/// `E_i` of the `X`-space.
pub fn exceptional_valuation(seed: &Seed, f: &RationalFn, i: usize) -> Result<i64> {
    nonzero(f)?;
    if seed.is_frozen(i) {
        return Err(Error::FrozenIndex(i));
    }
    let e = seed.e(i)?;
    let u: Vec<i64> = seed.p2(&e).iter().map(|x| -x).collect();
    let g = f.mutation_pullback(&u, &e)?;
    g.factor_order(&LaurentPoly::binomial(&e))
}

/// Order of vanishing along the frozen boundary divisor `D_i`.
pub fn frozen_valuation(seed: &Seed, side: Side, f: &RationalFn, i: usize) -> Result<i64> {
    nonzero(f)?;
    if !seed.is_frozen(i) {
        return Err(Error::InvalidIndex(i));
    }
    let e = seed.e(i)?;
    let u = match side {
        Side::X => seed.p2(&e),
        Side::A => e,
        Side::APrin => {
            let mut u = vec![0; side.dim(seed)];
            u[seed.position(i)?] = 1;
            u
        }
    };
    f.toric_valuation(&u)
}

/// The divisor `(z^n) = sum_i [n, e_i] e_i^*`.
pub fn divisor_of_monomial(seed: &Seed, n: &[i64]) -> Vec<i64> {
    seed.pbar1(n)
}

pub fn picard_group(seed: &Seed) -> FinAbPresentation {
    cokernel(&seed.pbar1_matrix())
}

fn check_degree(seed: &Seed, m: &[i64]) -> Result<()> {
    if m.len() != seed.num_indices() {
        return Err(Error::RankMismatch(seed.num_indices(), m.len()));
    }
    Ok(())
}

/// Whether `f` is a section of the divisorial sheaf of `W(m)` on the
/// partially compactified `X`-space, i.e. regular on `U_0` with
/// `(f) + W(m) >= 0`.
pub fn is_section(seed: &Seed, f: &RationalFn, m: &[i64]) -> Result<bool> {
    check_degree(seed, m)?;
    if f.is_laurent().is_none() {
        return Err(Error::NotRegularOnU0);
    }
    if f.is_zero() {
        return Ok(true);
    }
    for (pos, &i) in seed.indices().iter().enumerate() {
        let v = if seed.is_frozen(i) {
            frozen_valuation(seed, Side::X, f, i)?
        } else {
            exceptional_valuation(seed, f, i)?
        };
        if v < -m[pos] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lattice points of `[-r, r]^rank`, in lex order.
pub fn box_points(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// All `n` in the box of radius `r` with `z^n` a section of `W(m)`.
pub fn monomial_sections(seed: &Seed, m: &[i64], r: i64) -> Result<Vec<Vec<i64>>> {
    check_degree(seed, m)?;
    Ok(box_points(seed.rank(), r)
        .into_iter()
        .filter(|n| seed.pbar1(n).iter().zip(m).all(|(v, a)| v + a >= 0))
        .collect())
}

/// A fan on the frozen rays `p2(e_i)`, given by frozen-index sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn from_json(text: &str) -> Result<Fan> {
        Ok(serde_json::from_str(text)?)
    }

    /// The fan whose cones are the individual frozen rays.
    pub fn rays_only(seed: &Seed) -> Fan {
        Fan { cones: seed.frozen().iter().map(|&i| vec![i]).collect() }
    }

    /// Checks the fan against the seed and returns its maximal cones.
    pub fn maximal_cones(&self, seed: &Seed) -> Result<Vec<BTreeSet<usize>>> {
        let bad = |msg: String| Err(Error::InvalidFan(msg));
        let mut cones: Vec<BTreeSet<usize>> = Vec::new();
        for c in &self.cones {
            let set: BTreeSet<usize> = c.iter().copied().collect();
            if set.len() != c.len() {
                return bad(format!("repeated ray in cone {c:?}"));
            }
            if let Some(i) = set.iter().find(|i| !seed.is_frozen(**i)) {
                return bad(format!("ray {i} is not a frozen index"));
            }
            let gens: Vec<Vec<i64>> = set.iter().map(|&i| seed.p2(&seed.e(i).unwrap())).collect();
            if IntMatrix::from_cols(&gens, seed.rank()).rank() != set.len() {
                return bad(format!("cone {c:?} is not simplicial"));
            }
            cones.push(set);
        }
        let used: BTreeSet<usize> = cones.iter().flatten().copied().collect();
        if &used != seed.frozen() {
            return bad("the rays must be exactly the frozen directions".into());
        }
        let rays: Vec<Vec<i64>> = seed.frozen().iter().map(|&i| seed.p2(&seed.e(i).unwrap())).collect();
        let distinct: BTreeSet<&Vec<i64>> = rays.iter().collect();
        if distinct.len() != rays.len() {
            return bad("frozen directions p2(e_i) must be pairwise distinct".into());
        }
        let maximal: Vec<BTreeSet<usize>> = cones
            .iter()
            .filter(|c| !cones.iter().any(|d| d.len() > c.len() && c.is_subset(d)))
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(maximal)
    }
}

/// Basis (columns, in `M_I` coordinates) of the lattice of divisor classes
/// `sum a_i e_i^*` that are Cartier on the fan compactification: on each
/// maximal cone some `n` has `[n, e_i] = a_i` for every ray `i` of the cone.
pub fn cartier_sublattice(seed: &Seed, fan: &Fan) -> Result<IntMatrix> {
    let k = seed.num_indices();
    let pbar1 = seed.pbar1_matrix();
    let mut acc = IntMatrix::identity(k);
    for cone in fan.maximal_cones(seed)? {
        let rows: Vec<usize> = cone.iter().map(|&i| seed.position(i).unwrap()).collect();
        let mut gens = IntMatrix::zeros(k, 0);
        for p in 0..k {
            if !rows.contains(&p) {
                let mut v = vec![0i64; k];
                v[p] = 1;
                gens = gens.hcat(&IntMatrix::from_cols(&[v], k));
            }
        }
        let restricted = pbar1.select_rows(&rows);
        let image = column_hermite_basis(&restricted);
        let mut embedded = IntMatrix::zeros(k, image.cols());
        for (r, &p) in rows.iter().enumerate() {
            for c in 0..image.cols() {
                embedded.set(p, c, image.get(r, c).clone());
            }
        }
        let cone_lattice = gens.hcat(&embedded);
        acc = lattice_intersection(&acc, &cone_lattice);
    }
    Ok(column_hermite_basis(&acc))
}
