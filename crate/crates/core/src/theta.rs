//! Broken lines and theta functions on the principal `A`-space, and the
//! theta sections of line bundles on fibers of the `X`-space.
//!
//! Broken lines are enumerated backwards from the endpoint: the final
//! exponent `q + a psi_1 + b psi_2` fixes the direction of the last segment,
//! and at each wall crossing met on the way back the exponent before the
//! bend is recovered by removing one term of the crossing power of the wall
//! functions.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::atlas::{box_points, frozen_valuation, is_section, Side};
use crate::error::{Error, Result};
use crate::lattice::{solve_integer_i64, IntMatrix};
use crate::laurent::{LaurentPoly, RationalFn};
use crate::qlinalg::span_rank;
use crate::report::Report;
use crate::scattering::{Diagram, Pt, Status, Wall};
use crate::seed::Seed;
use crate::torsor::{homogeneous_degree, restrict_to_x_fiber, FiberSpec, Splitting};

/// Largest number of `psi`-steps tried when looking for a stable value.
const MAX_BUDGET: u32 = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct Bend {
    pub point: Pt,
    /// `(a, b)` with the selected term proportional to `z^{a psi_1 + b psi_2}`.
    pub step: (u32, u32),
    pub coeff: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrokenLine {
    pub endpoint: Pt,
    pub initial: Vec<i64>,
    /// Bends in the order the line meets them.
    pub bends: Vec<Bend>,
    pub exponent: Vec<i64>,
    pub coeff: BigRational,
}

#[derive(Clone, Debug)]
pub struct ThetaFunction {
    pub q: Vec<i64>,
    pub value: LaurentPoly,
    pub broken_lines: usize,
    /// True when the diagram is exact and the sum has stabilized.
    pub exact: bool,
    pub degree: Option<Vec<i64>>,
}

impl ThetaFunction {
    pub fn as_rational(&self) -> RationalFn {
        RationalFn::from_poly(self.value.clone())
    }
}

fn to_rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn bar(m: &[i64], diagram: &Diagram) -> [i64; 2] {
    diagram.plane.project(m)
}

fn pair(n: [i64; 2], m: [i64; 2]) -> i64 {
    n[0] * m[0] + n[1] * m[1]
}

/// A point near `hint` with large random denominators, off every wall.
pub fn generic_endpoint(diagram: &Diagram, hint: [i64; 2], salt: u64) -> Pt {
    let mut rng = ChaCha8Rng::seed_from_u64(salt);
    loop {
        let coord = |h: i64, rng: &mut ChaCha8Rng| {
            let d: i64 = rng.gen_range(1_000_000..2_000_000);
            let a: i64 = rng.gen_range(-(d / 8)..=d / 8);
            BigRational::new((h * d + a).into(), d.into())
        };
        let q = [coord(hint[0], &mut rng), coord(hint[1], &mut rng)];
        if !diagram.on_wall(&q) {
            return q;
        }
    }
}

/// Product of the crossing powers of the walls met at one point, as a
/// bivariate series in `(x, y) = (z^{psi_1}, z^{psi_2})` truncated to `cap`.
fn crossing_factor(walls: &[&Wall], mbar: [i64; 2], cap: (u32, u32)) -> BTreeMap<(u32, u32), BigRational> {
    let mut acc = BTreeMap::from([((0, 0), BigRational::one())]);
    for w in walls {
        let power = pair(w.normal, mbar).unsigned_abs();
        let (a, b) = w.direction;
        for _ in 0..power {
            let mut next = BTreeMap::new();
            for (&(x, y), c) in &acc {
                for (s, ws) in w.coeffs.iter().enumerate() {
                    if ws.is_zero() {
                        continue;
                    }
                    let key = (x + a * s as u32, y + b * s as u32);
                    if key.0 > cap.0 || key.1 > cap.1 {
                        continue;
                    }
                    let e: &mut BigRational = next.entry(key).or_insert_with(BigRational::zero);
                    *e += c * ws;
                }
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
        }
    }
    acc
}

struct Search<'a> {
    diagram: &'a Diagram,
    q: &'a [i64],
    final_exponent: Vec<i64>,
    out: Vec<BrokenLine>,
}

impl Search<'_> {
    /// Extends a broken line backwards from `point`, where its exponent is
    /// `m = q + deficit` and the bends found so far are `bends` (latest first).
    fn walk(&mut self, endpoint: &Pt, point: &Pt, m: Vec<i64>, deficit: (u32, u32), bends: &mut Vec<Bend>, coeff: BigRational) -> Result<()> {
        let mbar = bar(&m, self.diagram);
        let dir: Pt = [to_rat(mbar[0]), to_rat(mbar[1])];
        let hits = if mbar == [0, 0] { Vec::new() } else { self.diagram.hits(point, &dir, false)? };
        let Some((_, hit, walls)) = hits.into_iter().next() else {
            if deficit == (0, 0) {
                let mut ordered = bends.clone();
                ordered.reverse();
                self.out.push(BrokenLine { endpoint: endpoint.clone(), initial: self.q.to_vec(), bends: ordered, exponent: self.final_exponent.clone(), coeff });
            }
            return Ok(());
        };
        let factor = crossing_factor(&walls, mbar, deficit);
        for ((a, b), c) in factor {
            let prev = if (a, b) == (0, 0) {
                m.clone()
            } else {
                let step = self.diagram.plane.exponent((a, b));
                m.iter().zip(&step).map(|(x, y)| x - y).collect()
            };
            let straight = (a, b) == (0, 0);
            if !straight {
                bends.push(Bend { point: hit.clone(), step: (a, b), coeff: c.clone() });
            }
            self.walk(endpoint, &hit, prev, (deficit.0 - a, deficit.1 - b), bends, &coeff * &c)?;
            if !straight {
                bends.pop();
            }
        }
        Ok(())
    }
}

/// All broken lines with initial exponent `q` ending at `endpoint` whose
/// bends add at most `budget` multiples of `psi_1, psi_2` in total.
pub fn broken_lines(diagram: &Diagram, q: &[i64], endpoint: &Pt, budget: u32) -> Result<Vec<BrokenLine>> {
    if q.len() != diagram.plane.dim {
        return Err(Error::RankMismatch(diagram.plane.dim, q.len()));
    }
    if diagram.on_wall(endpoint) {
        return Err(Error::EndpointOnWall);
    }
    let second = diagram.plane.labels.len() == 2;
    let mut search = Search { diagram, q, final_exponent: Vec::new(), out: Vec::new() };
    for total in 0..=budget {
        for a in 0..=total {
            let b = total - a;
            if b > 0 && !second {
                continue;
            }
            let shift = diagram.plane.exponent((a, b));
            let m: Vec<i64> = q.iter().zip(&shift).map(|(x, y)| x + y).collect();
            search.final_exponent = m.clone();
            search.walk(endpoint, endpoint, m, (a, b), &mut Vec::new(), BigRational::one())?;
        }
    }
    Ok(search.out)
}

fn sum_lines(dim: usize, lines: &[BrokenLine]) -> LaurentPoly {
    LaurentPoly::from_terms(dim, lines.iter().map(|l| (l.exponent.clone(), l.coeff.clone())))
}

/// `theta_q` at `endpoint`. On an exact diagram the bend budget is raised
/// until two successive sums agree; otherwise it is the diagram's order.
pub fn theta(seed: &Seed, diagram: &Diagram, q: &[i64], endpoint: &Pt) -> Result<ThetaFunction> {
    let dim = diagram.plane.dim;
    let finish = |lines: Vec<BrokenLine>, exact: bool| {
        let value = sum_lines(dim, &lines);
        let degree = homogeneous_degree(seed, &RationalFn::from_poly(value.clone()));
        ThetaFunction { q: q.to_vec(), value, broken_lines: lines.len(), exact, degree }
    };
    if diagram.status != Status::Exact {
        let lines = broken_lines(diagram, q, endpoint, diagram.order)?;
        return Ok(finish(lines, false));
    }
    let qbar = bar(q, diagram);
    let mut budget = (2 * (qbar[0].unsigned_abs() + qbar[1].unsigned_abs()) as u32).max(2);
    let mut lines = broken_lines(diagram, q, endpoint, budget)?;
    while budget < MAX_BUDGET {
        let more = broken_lines(diagram, q, endpoint, budget + 2)?;
        if more.len() == lines.len() {
            return Ok(finish(more, true));
        }
        budget += 2;
        lines = more;
    }
    Ok(finish(lines, false))
}

fn split_m(seed: &Seed, q: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let k = seed.num_indices();
    (q[..k].to_vec(), q[k..].to_vec())
}

fn join(m: &[i64], n: &[i64]) -> Vec<i64> {
    m.iter().chain(n).copied().collect()
}

/// Checks `deg theta_q = deg z^q`, `theta_(m,n) = z^(0,n) theta_(m,0)` and
/// equality of frozen valuations of `theta_(m,n)` and `theta_(m,0)`.
pub fn theta_identities(seed: &Seed, diagram: &Diagram, q: &[i64], endpoint: &Pt) -> Result<Report> {
    let mut report = Report::new("ThetaIdentities", &seed.content_hash(), json!({"q": q}));
    let t = theta(seed, diagram, q, endpoint)?;
    if !t.exact {
        report.fail(json!({"q": q, "not_exact": true}));
        return Ok(report);
    }
    let expected_degree = crate::torsor::degree_of(seed, q);
    if t.degree.as_ref() != Some(&expected_degree) {
        report.fail(json!({"q": q, "degree": t.degree, "expected": expected_degree}));
    }
    let (m, n) = split_m(seed, q);
    let base = theta(seed, diagram, &join(&m, &vec![0; n.len()]), endpoint)?;
    let shifted = base.value.mul(&LaurentPoly::mono(&join(&vec![0; m.len()], &n)))?;
    if shifted != t.value {
        report.fail(json!({"q": q, "theta": t.value.to_string(), "shifted": shifted.to_string()}));
    }
    for &i in seed.frozen() {
        let a = frozen_valuation(seed, Side::APrin, &t.as_rational(), i)?;
        let b = frozen_valuation(seed, Side::APrin, &base.as_rational(), i)?;
        if a != b {
            report.fail(json!({"q": q, "frozen": i, "valuation": a, "unshifted": b}));
        }
    }
    Ok(report)
}

/// Whether `theta_q` is regular on the union of the initial and adjacent
/// principal charts and has nonnegative order along each frozen divisor.
pub fn xi_membership(seed: &Seed, diagram: &Diagram, q: &[i64], endpoint: &Pt) -> Result<bool> {
    if diagram.status != Status::Exact {
        return Err(Error::TruncatedOnly);
    }
    let t = theta(seed, diagram, q, endpoint)?;
    if !t.exact {
        return Err(Error::TruncatedOnly);
    }
    let f = t.as_rational();
    if f.is_zero() {
        return Ok(true);
    }
    for i in seed.unfrozen() {
        let pos = seed.position(i)?;
        let e = seed.e(i)?;
        let mut u = vec![0; diagram.plane.dim];
        u[pos] = -1;
        let w = join(&seed.pbar1(&e), &e);
        if f.mutation_pullback(&u, &w)?.is_laurent().is_none() {
            return Ok(false);
        }
    }
    for &i in seed.frozen() {
        if frozen_valuation(seed, Side::APrin, &f, i)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m` in the box with `m - lambda` in `pbar1(N)` and `(m, 0)` in `Xi`.
pub fn xi_lambda(seed: &Seed, diagram: &Diagram, lambda: &[i64], r: i64, endpoint: &Pt) -> Result<Vec<Vec<i64>>> {
    if lambda.len() != seed.num_indices() {
        return Err(Error::RankMismatch(seed.num_indices(), lambda.len()));
    }
    let p = seed.pbar1_matrix();
    let mut out = Vec::new();
    for m in box_points(seed.num_indices(), r) {
        let diff: Vec<i64> = m.iter().zip(lambda).map(|(a, b)| a - b).collect();
        if solve_integer_i64(&p, &diff).is_none() {
            continue;
        }
        if xi_membership(seed, diagram, &join(&m, &vec![0; seed.rank()]), endpoint)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// One theta section of `L_lambda` on the fiber `X_phi`.
#[derive(Clone, Debug)]
pub struct ThetaSection {
    pub m: Vec<i64>,
    /// `z^{s(m - lambda)} theta_(m,0)` as a function of `N`.
    pub on_x: RationalFn,
    /// Its restriction to the fiber over `phi`.
    pub on_fiber: RationalFn,
    pub is_section: bool,
}

#[derive(Clone, Debug)]
pub struct ThetaBasis {
    pub lambda: Vec<i64>,
    pub sections: Vec<ThetaSection>,
    pub independent: bool,
    /// "basis" only when the caller vouches for full generation of the
    /// global functions by theta functions; otherwise "independent sections".
    pub claim: &'static str,
}

/// The theta sections indexed by `xi_lambda(lambda, r)`.
pub fn theta_basis_sections(
    seed: &Seed,
    diagram: &Diagram,
    lambda: &[i64],
    spec: &FiberSpec,
    r: i64,
    endpoint: &Pt,
    full_generation: bool,
) -> Result<ThetaBasis> {
    let k = seed.num_indices();
    let splitting = Splitting::new(spec);
    let mut sections = Vec::new();
    for m in xi_lambda(seed, diagram, lambda, r, endpoint)? {
        let diff: Vec<i64> = m.iter().zip(lambda).map(|(a, b)| a - b).collect();
        let n0 = spec.section.apply(&diff)?;
        let t = theta(seed, diagram, &join(&m, &n0), endpoint)?;
        // every term has degree lambda, so its exponent is p2~(lambda, n)
        let mut on_x = LaurentPoly::zero(seed.rank());
        for (e, c) in t.value.terms() {
            let (a, n) = split_m(seed, e);
            let untwisted: Vec<i64> = a.iter().zip(seed.pbar1(&n)).map(|(x, y)| x - y).collect();
            if untwisted != lambda {
                return Err(Error::NotInImage(format!("term of degree {untwisted:?} in theta_{:?}", t.q)));
            }
            on_x.add_term(n, c.clone());
        }
        let on_x = RationalFn::from_poly(on_x);
        let ok = is_section(seed, &on_x, lambda)?;
        let on_fiber = restrict_to_x_fiber(&on_x, spec, &splitting)?;
        sections.push(ThetaSection { m: m[..k].to_vec(), on_x, on_fiber, is_section: ok });
    }
    let polys: Vec<LaurentPoly> = sections.iter().filter_map(|s| s.on_fiber.is_laurent()).collect();
    let independent = polys.len() == sections.len() && span_rank(&polys) == sections.len();
    let claim = if full_generation { "basis" } else { "independent sections" };
    Ok(ThetaBasis { lambda: lambda.to_vec(), sections, independent, claim })
}

/// The exponent `g` of `f` such that every exponent of `f` is `g` plus a
/// nonnegative combination of `psi_1, psi_2`.
pub fn g_vector(diagram: &Diagram, f: &LaurentPoly) -> Option<Vec<i64>> {
    let psi = &diagram.plane.psi;
    let basis = IntMatrix::from_cols(&[psi[0].clone(), psi[1].clone()], diagram.plane.dim);
    let exps: Vec<&Vec<i64>> = f.terms().map(|(e, _)| e).collect();
    exps.iter()
        .find(|g| {
            exps.iter().all(|e| {
                let d: Vec<i64> = e.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
                solve_integer_i64(&basis, &d).is_some_and(|c| c.iter().all(|x| *x >= 0))
            })
        })
        .map(|g| g.to_vec())
}

/// Every broken line bends only by terms of wall functions: recomputes each
/// line forwards from its bends and compares.
pub fn replay(diagram: &Diagram, line: &BrokenLine) -> bool {
    let mut m = line.initial.clone();
    let mut c = BigRational::one();
    for b in &line.bends {
        let step = diagram.plane.exponent(b.step);
        m = m.iter().zip(&step).map(|(x, y)| x + y).collect();
        c *= &b.coeff;
    }
    m == line.exponent && c == line.coeff && !c.is_negative()
}
