//! The map `p2~` from the twisted `X`-coordinates `z^m z^n` to the principal
//! `A`-torus, the `M_I`-grading on the principal side, and the checks that
//! identify the principal `A`-space with the relative spectrum of the Cox
//! ring and its fibers with universal torsors.
//!
//! Twisted `X`-exponents and principal `A`-exponents are both written
//! `(m, n)` with `m` in `M_I` (first `|I|` entries) and `n` in `N`.

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::atlas::{box_points, frozen_valuation, Side};
use crate::error::{Error, Result};
use crate::lattice::{extend_to_basis, unimodular_inverse, IntMatrix};
use crate::laurent::{LaurentPoly, RationalFn, TorusPoint};
use crate::report::Report;
use crate::seed::{Section, Seed};

fn split(seed: &Seed, q: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let k = seed.num_indices();
    (q[..k].to_vec(), q[k..].to_vec())
}

fn join(m: &[i64], n: &[i64]) -> Vec<i64> {
    m.iter().chain(n).copied().collect()
}

fn prin_dim(seed: &Seed) -> usize {
    seed.num_indices() + seed.rank()
}

/// `(m, n) |-> (m + pbar1(n), n)`.
pub fn p2_tilde_exponent(seed: &Seed, q: &[i64]) -> Vec<i64> {
    let (m, n) = split(seed, q);
    let pn = seed.pbar1(&n);
    join(&m.iter().zip(&pn).map(|(a, b)| a + b).collect::<Vec<_>>(), &n)
}

pub fn p2_tilde_pullback(seed: &Seed, f: &RationalFn) -> Result<RationalFn> {
    if f.dim() != prin_dim(seed) {
        return Err(Error::Malformed(format!("expected {} variables, got {}", prin_dim(seed), f.dim())));
    }
    f.map_exponents(prin_dim(seed), |q| p2_tilde_exponent(seed, q))
}

/// `deg z^(m,n) = m - pbar1(n)`.
pub fn degree_of(seed: &Seed, q: &[i64]) -> Vec<i64> {
    let (m, n) = split(seed, q);
    m.iter().zip(seed.pbar1(&n)).map(|(a, b)| a - b).collect()
}

fn poly_degree(seed: &Seed, p: &LaurentPoly) -> Option<Vec<i64>> {
    let degrees: BTreeSet<Vec<i64>> = p.terms().map(|(e, _)| degree_of(seed, e)).collect();
    if degrees.len() == 1 {
        degrees.into_iter().next()
    } else {
        None
    }
}

/// The degree of a homogeneous element of the principal `A`-side function
/// field, or `None` if it is not homogeneous (or zero).
pub fn homogeneous_degree(seed: &Seed, f: &RationalFn) -> Option<Vec<i64>> {
    let mut d = poly_degree(seed, f.numerator())?;
    for (g, k) in f.denominator() {
        let dg = poly_degree(seed, g)?;
        for (a, b) in d.iter_mut().zip(dg) {
            *a -= b * k as i64;
        }
    }
    Some(d)
}

/// Whether mutation of the principal seed at `j` preserves homogeneity and
/// degree of each sampled monomial.
pub fn check_prin_homogeneity(seed: &Seed, j: usize, samples: &[Vec<i64>]) -> Result<bool> {
    let pb = crate::atlas::transition_pullback(seed, Side::APrin, &[j])?;
    for q in samples {
        let img = pb.apply(&RationalFn::mono(q))?;
        if homogeneous_degree(seed, &img) != Some(degree_of(seed, q)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Base,
    Index(usize),
}

/// Generators, within the box, of the degree-`m` piece of the Cox sheaf on
/// a chart, written in twisted `X`-coordinates on `U_0`. Unfrozen charts use
/// `ell = k + <e_i, m> in [0, r]`.
pub fn graded_piece_generators(seed: &Seed, m: &[i64], chart: Chart, r: i64) -> Result<Vec<RationalFn>> {
    let kk = seed.num_indices();
    if m.len() != kk {
        return Err(Error::RankMismatch(kk, m.len()));
    }
    let mono = |n: &[i64]| RationalFn::mono(&join(m, n));
    let boxed = box_points(seed.rank(), r);
    match chart {
        Chart::Base => Ok(boxed.iter().map(|n| mono(n)).collect()),
        Chart::Index(i) => {
            let pos = seed.position(i)?;
            let e = seed.e(i)?;
            if seed.is_frozen(i) {
                return Ok(boxed.iter().filter(|n| seed.pair(n, &e) >= -m[pos]).map(|n| mono(n)).collect());
            }
            let g = RationalFn::from_poly(LaurentPoly::binomial(&join(&vec![0; kk], &e)));
            let mut out = Vec::new();
            for n in &boxed {
                for ell in 0..=r {
                    let k = ell - m[pos];
                    out.push(mono(n).mul(&g.pow(k - seed.pair(n, &e))?)?);
                }
            }
            Ok(out)
        }
    }
}

fn render_set(v: &[RationalFn]) -> Vec<String> {
    let s: BTreeSet<String> = v.iter().map(ToString::to_string).collect();
    s.into_iter().collect()
}

/// Compares the image of the chart generators under `p2~` with the
/// degree-`m` generators of the matching chart of the principal `A`-space.
pub fn verify_r(seed: &Seed, m: &[i64], chart: Chart, r: i64) -> Result<Report> {
    let mut report = Report::new(
        "R",
        &seed.content_hash(),
        json!({"degree": m, "chart": match chart { Chart::Base => 0, Chart::Index(i) => i }, "box_radius": r}),
    );
    let gens = graded_piece_generators(seed, m, chart, r)?;
    let boxed = box_points(seed.rank(), r);
    let direct_mono = |n: &[i64]| RationalFn::mono(&p2_tilde_exponent(seed, &join(m, n)));
    let mut images = Vec::with_capacity(gens.len());
    for g in &gens {
        images.push(p2_tilde_pullback(seed, g)?);
    }
    let expected: Vec<RationalFn> = match chart {
        Chart::Base => boxed.iter().map(|n| direct_mono(n)).collect(),
        Chart::Index(i) if seed.is_frozen(i) => {
            let mut v = Vec::new();
            for n in &boxed {
                let f = direct_mono(n);
                if frozen_valuation(seed, Side::APrin, &f, i)? >= 0 {
                    v.push(f);
                }
            }
            v
        }
        Chart::Index(i) => {
            // move to the coordinates of the mutated principal chart
            let pos = seed.position(i)?;
            let e = seed.e(i)?;
            let mut u = vec![0; prin_dim(seed)];
            u[pos] = -1;
            let w = join(&seed.pbar1(&e), &e);
            for img in images.iter_mut() {
                *img = img.mutation_pullback(&u, &w)?;
            }
            let g = RationalFn::from_poly(LaurentPoly::binomial(&w));
            let mut v = Vec::new();
            for n in &boxed {
                for ell in 0..=r {
                    v.push(direct_mono(n).mul(&g.pow(ell)?)?);
                }
            }
            for n in &boxed {
                if !images.contains(&direct_mono(n)) {
                    report.fail(json!({"missing_monomial": n}));
                }
            }
            v
        }
    };
    for img in &images {
        if img.is_laurent().is_none() {
            report.fail(json!({"not_laurent": img.to_string()}));
        } else if homogeneous_degree(seed, img).as_deref() != Some(m) {
            report.fail(json!({"wrong_degree": img.to_string()}));
        }
    }
    let (a, b) = (render_set(&images), render_set(&expected));
    if a != b {
        let only_image: Vec<&String> = a.iter().filter(|x| !b.contains(x)).take(5).collect();
        let only_direct: Vec<&String> = b.iter().filter(|x| !a.contains(x)).take(5).collect();
        report.fail(json!({"image_only": only_image, "direct_only": only_direct}));
    }
    report.note(json!({"generators": images.len()}));
    Ok(report)
}

/// A point `t` of `T_M`, its image on `T_{K1^*}`, and a section of `pbar1`.
#[derive(Clone, Debug)]
pub struct FiberSpec {
    pub t: TorusPoint,
    /// `z^{kappa_a}(t)` for the saturated basis `kappa_a` of `K1`.
    pub phi: Vec<BigRational>,
    pub k1: IntMatrix,
    pub section: Section,
}

/// The first `count` primes.
pub fn distinct_primes(count: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut c = 2i64;
    while out.len() < count {
        if out.iter().all(|p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

impl FiberSpec {
    pub fn new(seed: &Seed, t: TorusPoint) -> Result<Self> {
        if t.dim() != seed.rank() {
            return Err(Error::RankMismatch(seed.rank(), t.dim()));
        }
        let k1 = seed.derive_maps().k1;
        let phi = (0..k1.cols()).map(|a| t.monomial(&k1.col_i64(a))).collect();
        Ok(FiberSpec { t, phi, k1, section: seed.section_of_pbar1() })
    }

    /// `t` with distinct prime coordinates.
    pub fn generic(seed: &Seed) -> Self {
        let t = TorusPoint::from_ints(&distinct_primes(seed.rank())).unwrap();
        FiberSpec::new(seed, t).expect("dimensions agree")
    }

    pub fn with_section(mut self, section: Section) -> Self {
        self.section = section;
        self
    }
}

/// `(z^(m-m0, n+n0) - z^{n0}(t) z^(m,n), z^(m', n+n0) - z^(m',n) z^{n0}(t))`
/// with `n0 = s(m0)` and `m' = m + pbar1(n)`: the generator of the ideal cutting
/// the torsor out of the twisted `X`-space, and the generator of the fiber
/// ideal over `t` it should map to.
pub fn shifting_generator(
    seed: &Seed,
    m: &[i64],
    n: &[i64],
    m0: &[i64],
    spec: &FiberSpec,
) -> Result<(RationalFn, RationalFn)> {
    let n0 = spec.section.apply(m0)?;
    let c = spec.t.monomial(&n0);
    let shifted_n: Vec<i64> = n.iter().zip(&n0).map(|(a, b)| a + b).collect();
    let m_minus: Vec<i64> = m.iter().zip(m0).map(|(a, b)| a - b).collect();
    let dim = prin_dim(seed);
    let x_gen = LaurentPoly::from_terms(dim, [(join(&m_minus, &shifted_n), BigRational::from_integer(1.into())), (join(m, n), -c.clone())]);
    let mp: Vec<i64> = m.iter().zip(seed.pbar1(n)).map(|(a, b)| a + b).collect();
    let t_gen = LaurentPoly::from_terms(dim, [(join(&mp, &shifted_n), BigRational::from_integer(1.into())), (join(&mp, n), -c)]);
    Ok((x_gen.into(), t_gen.into()))
}

/// The generator used for randomized trials.
pub fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random trials of `p2~(shifting generator) = fiber generator`. With
/// `corrupt`, the first trial uses a sign-flipped generator and must fail.
pub fn verify_utor<R: Rng>(seed: &Seed, trials: usize, spec: &FiberSpec, rng: &mut R, corrupt: bool) -> Result<Report> {
    let primes: Vec<String> = spec.t.coords().iter().map(ToString::to_string).collect();
    let mut report =
        Report::new("UTor", &seed.content_hash(), json!({"trials": trials, "t": primes, "corrupt": corrupt}));
    let (k, r) = (seed.num_indices(), seed.rank());
    for trial in 0..trials {
        let m: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
        let n: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..=3)).collect();
        let n_prime: Vec<i64> = (0..r).map(|_| rng.gen_range(-3..=3)).collect();
        let m0 = seed.pbar1(&n_prime);
        let (mut x_gen, t_gen) = shifting_generator(seed, &m, &n, &m0, spec)?;
        if corrupt && trial == 0 {
            let sign_flipped = LaurentPoly::from_terms(
                x_gen.dim(),
                x_gen.numerator().terms().map(|(e, c)| (e.clone(), c.clone())).enumerate().map(|(idx, (e, c))| if idx == 0 { (e, -c) } else { (e, c) }),
            );
            x_gen = sign_flipped.into();
        }
        let image = p2_tilde_pullback(seed, &x_gen)?;
        if image != t_gen {
            report.fail(json!({"trial": trial, "m": m, "n": n, "m0": m0, "image": image.to_string(), "expected": t_gen.to_string()}));
        }
    }
    Ok(report)
}

/// `z^(m,n) |-> z^n(t) z^m`, a function on `M_I`-torus coordinates.
pub fn restrict_to_fiber_t(seed: &Seed, f: &RationalFn, spec: &FiberSpec) -> Result<RationalFn> {
    let k = seed.num_indices();
    let values: Vec<Option<BigRational>> =
        (0..prin_dim(seed)).map(|p| if p < k { None } else { Some(spec.t.coords()[p - k].clone()) }).collect();
    f.partial_evaluate(&values)
}

/// Splitting `N = K1 (+) C` used to write functions on the fiber of `X`
/// over `phi` in coordinates of `N / K1`.
#[derive(Clone, Debug)]
pub struct Splitting {
    /// Coordinates with respect to the basis `(kappa_1.., c_1..)`.
    inverse: IntMatrix,
    kernel_rank: usize,
}

impl Splitting {
    pub fn new(spec: &FiberSpec) -> Self {
        let basis = extend_to_basis(&spec.k1);
        Splitting { inverse: unimodular_inverse(&basis).expect("unimodular"), kernel_rank: spec.k1.cols() }
    }

    /// `(k-coordinates, class in N / K1)` of `n`.
    pub fn decompose(&self, n: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let c = self.inverse.apply_i64(n);
        (c[..self.kernel_rank].to_vec(), c[self.kernel_rank..].to_vec())
    }
}

/// `z^n |-> z^k(phi) z^{nbar}` for `n = lift(nbar) + k`, `k` in `K1`.
pub fn restrict_to_x_fiber(f: &RationalFn, spec: &FiberSpec, splitting: &Splitting) -> Result<RationalFn> {
    let r = splitting.inverse.rows();
    if f.dim() != r {
        return Err(Error::RankMismatch(r, f.dim()));
    }
    let coords = f.map_exponents(r, |n| splitting.inverse.apply_i64(n))?;
    let values: Vec<Option<BigRational>> =
        (0..r).map(|p| if p < splitting.kernel_rank { Some(spec.phi[p].clone()) } else { None }).collect();
    coords.partial_evaluate(&values)
}
