//! Scattering diagrams in the principal `M`-space for seeds with at most two
//! unfrozen directions.
//!
//! Every wall contains the joint `{<e_i, .> = 0 : i unfrozen}`, so the
//! diagram is described in the plane of coordinates `(<e_{i1}, q>, <e_{i2}, q>)`.
//! Wall functions are power series in a single monomial `t = z^w`, where
//! `w = a psi_1 + b psi_2` with `psi_i = p_{1,prin}(e_i)`. Crossing a wall with
//! normal `n` into the side where `n > 0` acts by `z^q |-> z^q f^{-<n, q>}`,
//! which for the initial walls is the principal `A`-side mutation pullback.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RationalFn};
use crate::seed::Seed;

pub type Pt = [BigRational; 2];

pub fn pt(a: i64, b: i64) -> Pt {
    [BigRational::from_integer(a.into()), BigRational::from_integer(b.into())]
}

pub fn ratio_pt(a: (i64, i64), b: (i64, i64)) -> Pt {
    [BigRational::new(a.0.into(), a.1.into()), BigRational::new(b.0.into(), b.1.into())]
}

fn dot2(n: [i64; 2], p: &Pt) -> BigRational {
    &p[0] * BigRational::from_integer(n[0].into()) + &p[1] * BigRational::from_integer(n[1].into())
}

fn primitive(v: [i64; 2]) -> [i64; 2] {
    let g = v[0].gcd(&v[1]);
    if g == 0 {
        v
    } else {
        [v[0] / g, v[1] / g]
    }
}

/// The plane of the joint quotient attached to a seed.
#[derive(Clone, Debug)]
pub struct Plane {
    /// Unfrozen labels (at most two).
    pub labels: Vec<usize>,
    positions: Vec<usize>,
    /// `psi_i = p_{1,prin}(e_i)` as principal exponents.
    pub psi: [Vec<i64>; 2],
    /// Plane coordinates of `psi_1`, `psi_2`.
    pub psi_bar: [[i64; 2]; 2],
    /// Number of principal exponent coordinates.
    pub dim: usize,
}

impl Plane {
    pub fn new(seed: &Seed) -> Result<Plane> {
        let labels = seed.unfrozen();
        if labels.len() > 2 {
            return Err(Error::UnsupportedRank(labels.len()));
        }
        let positions: Vec<usize> = labels.iter().map(|&l| seed.position(l).unwrap()).collect();
        let dim = seed.num_indices() + seed.rank();
        let prin = seed.principal();
        let mut psi = [vec![0; dim], vec![0; dim]];
        for (slot, &p) in positions.iter().enumerate() {
            let mut e = vec![0; dim];
            e[p] = 1;
            psi[slot] = prin.seed.p1(&e);
        }
        let mut plane = Plane { labels, positions, psi, psi_bar: [[0; 2]; 2], dim };
        plane.psi_bar = [plane.project(&plane.psi[0]), plane.project(&plane.psi[1])];
        Ok(plane)
    }

    pub fn project(&self, q: &[i64]) -> [i64; 2] {
        let mut out = [0; 2];
        for (slot, &p) in self.positions.iter().enumerate() {
            out[slot] = q[p];
        }
        out
    }

    /// The plane covector `n` as a vector of `N_prin`.
    pub fn lift_normal(&self, n: [i64; 2]) -> Vec<i64> {
        let mut u = vec![0; self.dim];
        for (slot, &p) in self.positions.iter().enumerate() {
            u[p] = n[slot];
        }
        u
    }

    /// `a psi_1 + b psi_2`
    pub fn exponent(&self, ab: (u32, u32)) -> Vec<i64> {
        (0..self.dim).map(|c| ab.0 as i64 * self.psi[0][c] + ab.1 as i64 * self.psi[1][c]).collect()
    }

    pub fn exponent_bar(&self, ab: (u32, u32)) -> [i64; 2] {
        let (a, b) = (ab.0 as i64, ab.1 as i64);
        [a * self.psi_bar[0][0] + b * self.psi_bar[1][0], a * self.psi_bar[0][1] + b * self.psi_bar[1][1]]
    }
}

/// Truncated univariate power series `sum c_s t^s`, `s <= len - 1`.
pub mod uni {
    use super::*;

    pub fn one(len: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); len];
        v[0] = BigRational::one();
        v
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let len = a.len().min(b.len());
        let mut out = vec![BigRational::zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Inverse of a series with constant term 1.
    pub fn inv(a: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len()];
        out[0] = BigRational::one();
        for d in 1..a.len() {
            let mut s = BigRational::zero();
            for k in 1..=d {
                s += &a[k] * &out[d - k];
            }
            out[d] = -s;
        }
        out
    }

    pub fn pow(a: &[BigRational], e: i64) -> Vec<BigRational> {
        let base = if e < 0 { inv(a) } else { a.to_vec() };
        let mut out = one(a.len());
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = mul(&out, &b);
            }
            k >>= 1;
            if k > 0 {
                b = mul(&b, &b);
            }
        }
        out
    }

    pub fn truncate(a: &[BigRational], len: usize) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = a.iter().take(len).cloned().collect();
        v.resize(len, BigRational::zero());
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    /// The whole line `n^perp` in the plane.
    Line,
    /// The half-line spanned by the given plane vector.
    Ray([i64; 2]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Wall {
    /// Primitive plane covector orthogonal to the wall.
    pub normal: [i64; 2],
    /// `t = x^a y^b` with `x = z^{psi_1}`, `y = z^{psi_2}`.
    pub direction: (u32, u32),
    /// Coefficients of the wall function in `t`, constant term 1.
    pub coeffs: Vec<BigRational>,
    pub support: Support,
    pub initial: bool,
}

impl Wall {
    /// The wall function as a Laurent polynomial in principal exponents.
    pub fn function(&self, plane: &Plane) -> LaurentPoly {
        let w = plane.exponent(self.direction);
        LaurentPoly::from_terms(
            plane.dim,
            self.coeffs.iter().enumerate().map(|(s, c)| (w.iter().map(|x| x * s as i64).collect(), c.clone())),
        )
    }

    /// Whether the point (assumed on the wall's line) lies on the support.
    fn contains(&self, p: &Pt) -> bool {
        match self.support {
            Support::Line => true,
            Support::Ray(d) => dot2(d, p).is_positive(),
        }
    }

    /// The rays of the support, as plane directions.
    fn rays(&self) -> Vec<[i64; 2]> {
        match self.support {
            Support::Line => {
                let d = [-self.normal[1], self.normal[0]];
                vec![d, [-d[0], -d[1]]]
            }
            Support::Ray(d) => vec![d],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Exact,
    Truncated(u32),
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pub plane: Plane,
    pub order: u32,
    pub walls: Vec<Wall>,
    pub status: Status,
}

/// Bivariate series in `x, y` truncated above total degree `order`.
#[derive(Clone, Debug, PartialEq)]
struct Series2 {
    order: u32,
    c: BTreeMap<(u32, u32), BigRational>,
}

impl Series2 {
    fn one(order: u32) -> Self {
        Series2 { order, c: BTreeMap::from([((0, 0), BigRational::one())]) }
    }

    fn add_term(&mut self, key: (u32, u32), v: BigRational) {
        if key.0 + key.1 > self.order || v.is_zero() {
            return;
        }
        let e = self.c.entry(key).or_insert_with(BigRational::zero);
        *e += v;
        if e.is_zero() {
            self.c.remove(&key);
        }
    }

    /// Product with a series in `t = x^w.0 y^w.1`.
    fn mul_uni(&self, w: (u32, u32), f: &[BigRational]) -> Self {
        let mut out = Series2 { order: self.order, c: BTreeMap::new() };
        for (&(i, j), v) in &self.c {
            for (s, fs) in f.iter().enumerate() {
                let key = (i + s as u32 * w.0, j + s as u32 * w.1);
                if key.0 + key.1 > self.order {
                    break;
                }
                out.add_term(key, v * fs);
            }
        }
        out
    }

    /// Substitution `x |-> x f^a`, `y |-> y f^b` with `f` a series in `t`.
    fn substitute(&self, w: (u32, u32), f: &[BigRational], a: i64, b: i64) -> Self {
        let mut out = Series2 { order: self.order, c: BTreeMap::new() };
        let mut cache: BTreeMap<i64, Vec<BigRational>> = BTreeMap::new();
        for (&(i, j), v) in &self.c {
            let e = a * i as i64 + b * j as i64;
            let fe = cache.entry(e).or_insert_with(|| uni::pow(f, e));
            let single = Series2 { order: self.order, c: BTreeMap::from([((i, j), v.clone())]) };
            for (k, x) in single.mul_uni(w, fe).c {
                out.add_term(k, x);
            }
        }
        out
    }

    fn coeff(&self, key: (u32, u32)) -> BigRational {
        self.c.get(&key).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Sort key placing plane directions in counterclockwise order from the
/// positive first axis.
fn angle_cmp(a: [i64; 2], b: [i64; 2]) -> Ordering {
    let half = |v: [i64; 2]| if v[1] > 0 || (v[1] == 0 && v[0] > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
        0.cmp(&cross)
    })
}

/// One step of a loop: a wall crossed, with `+1` when moving into the side
/// where its normal is positive.
struct Crossing<'a> {
    wall: &'a Wall,
    sign: i64,
}

impl Diagram {
    pub fn initial(seed: &Seed, order: u32) -> Result<Diagram> {
        let plane = Plane::new(seed)?;
        let mut walls = Vec::new();
        for slot in 0..plane.labels.len() {
            let mut normal = [0; 2];
            normal[slot] = 1;
            let direction = if slot == 0 { (1, 0) } else { (0, 1) };
            let mut coeffs = uni::one(order as usize + 1);
            if order > 0 {
                coeffs[1] = BigRational::one();
            }
            walls.push(Wall { normal, direction, coeffs, support: Support::Line, initial: true });
        }
        let status = if walls.len() < 2 { Status::Exact } else { Status::Truncated(order) };
        Ok(Diagram { plane, order, walls, status })
    }

    /// The action of crossing `wall` with the given sign on a twisted pair
    /// `(h1, h2)` accumulated so far: `h |-> g * (h o theta)`.
    fn cross_series(&self, h: &mut [Series2; 2], wall: &Wall, sign: i64) {
        let n = wall.normal;
        let pb = self.plane.psi_bar;
        let a = -sign * (n[0] * pb[0][0] + n[1] * pb[0][1]);
        let b = -sign * (n[0] * pb[1][0] + n[1] * pb[1][1]);
        let f = &wall.coeffs;
        for (k, hk) in h.iter_mut().enumerate() {
            let g = uni::pow(f, -sign * n[k]);
            *hk = hk.substitute(wall.direction, f, a, b).mul_uni(wall.direction, &g);
        }
    }

    fn loop_crossings(&self) -> Vec<Crossing<'_>> {
        let mut rays: Vec<([i64; 2], &Wall)> = Vec::new();
        for w in &self.walls {
            for d in w.rays() {
                rays.push((d, w));
            }
        }
        rays.sort_by(|a, b| angle_cmp(a.0, b.0));
        rays.into_iter()
            .map(|(d, wall)| {
                let rot = [-d[1], d[0]];
                let s = wall.normal[0] * rot[0] + wall.normal[1] * rot[1];
                Crossing { wall, sign: s.signum() }
            })
            .collect()
    }

    fn loop_series(&self) -> [Series2; 2] {
        let mut h = [Series2::one(self.order), Series2::one(self.order)];
        for c in self.loop_crossings() {
            self.cross_series(&mut h, c.wall, c.sign);
        }
        h
    }

    /// Inserts outgoing walls order by order until the loop around the joint
    /// is trivial up to the diagram's order, then checks exact consistency.
    pub fn complete(mut self) -> Result<Diagram> {
        if self.walls.len() < 2 {
            self.status = Status::Exact;
            return Ok(self);
        }
        for k in 1..=self.order {
            let h = self.loop_series();
            for i in 0..=k {
                let key = (i, k - i);
                let v = [h[0].coeff(key), h[1].coeff(key)];
                if v[0].is_zero() && v[1].is_zero() {
                    continue;
                }
                let g = i.gcd(&(k - i));
                let dir = (i / g, (k - i) / g);
                let wbar = self.plane.exponent_bar(dir);
                if wbar == [0, 0] {
                    return Err(Error::Inconsistent(k));
                }
                let normal = primitive([wbar[1], -wbar[0]]);
                let n = normal.map(|x| BigRational::from_integer(x.into()));
                if &v[0] * &n[1] != &v[1] * &n[0] {
                    return Err(Error::Inconsistent(k));
                }
                let lambda = (&v[0] * &n[0] + &v[1] * &n[1]) / (&n[0] * &n[0] + &n[1] * &n[1]);
                let ray = primitive([-wbar[0], -wbar[1]]);
                let rot = [-ray[1], ray[0]];
                let sign = (normal[0] * rot[0] + normal[1] * rot[1]).signum();
                let c = lambda * BigRational::from_integer(sign.into());
                let len = (self.order / (dir.0 + dir.1)) as usize + 1;
                let mut factor = uni::one(len);
                if (g as usize) < len {
                    factor[g as usize] = c;
                }
                match self.walls.iter_mut().find(|w| !w.initial && w.direction == dir && w.support == Support::Ray(ray)) {
                    Some(w) => w.coeffs = uni::mul(&w.coeffs, &factor),
                    None => self.walls.push(Wall { normal, direction: dir, coeffs: factor, support: Support::Ray(ray), initial: false }),
                }
            }
        }
        let h = self.loop_series();
        if h[0] != Series2::one(self.order) || h[1] != Series2::one(self.order) {
            return Err(Error::Inconsistent(self.order));
        }
        self.status = if self.loop_is_exact_identity()? { Status::Exact } else { Status::Truncated(self.order) };
        Ok(self)
    }

    /// Exact action of crossing `wall` with the given sign.
    pub fn cross(&self, f: &RationalFn, wall: &Wall, sign: i64) -> Result<RationalFn> {
        let u: Vec<i64> = self.plane.lift_normal(wall.normal).iter().map(|x| x * sign).collect();
        f.twist_pullback(&u, &wall.function(&self.plane))
    }

    /// The counterclockwise loop product applied to `f`, with the wall
    /// functions taken as the polynomials stored.
    pub fn loop_product(&self, f: &RationalFn) -> Result<RationalFn> {
        self.loop_crossings().iter().try_fold(f.clone(), |g, c| self.cross(&g, c.wall, c.sign))
    }

    fn loop_is_exact_identity(&self) -> Result<bool> {
        // a wall still changing at the truncation degree is not a polynomial yet
        let saturated = self.walls.iter().any(|w| {
            let top = (self.order / (w.direction.0 + w.direction.1)) as usize;
            w.coeffs.get(top).is_some_and(|c| !c.is_zero())
        });
        if saturated {
            return Ok(false);
        }
        for slot in 0..2 {
            let mut q = vec![0; self.plane.dim];
            q[self.plane.positions[slot]] = 1;
            let f = RationalFn::mono(&q);
            if self.loop_product(&f)? != f {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn inserted_walls(&self) -> usize {
        self.walls.iter().filter(|w| !w.initial).count()
    }

    /// Whether a plane point lies on the support of some wall.
    pub fn on_wall(&self, p: &Pt) -> bool {
        if p[0].is_zero() && p[1].is_zero() {
            return true;
        }
        self.walls.iter().any(|w| dot2(w.normal, p).is_zero() && w.contains(p))
    }

    /// Walls met by the segment (or ray when `to` is `None`) from `from` in
    /// direction `dir`, grouped by crossing parameter `s > 0` (and `s < 1`
    /// for a segment), in increasing order of `s`.
    pub fn hits(&self, from: &Pt, dir: &Pt, segment: bool) -> Result<Vec<(BigRational, Pt, Vec<&Wall>)>> {
        let mut out: Vec<(BigRational, Pt, Vec<&Wall>)> = Vec::new();
        for w in &self.walls {
            let nd = dot2(w.normal, dir);
            if nd.is_zero() {
                continue;
            }
            let s = -dot2(w.normal, from) / nd;
            if !s.is_positive() || (segment && s >= BigRational::one()) {
                continue;
            }
            let p: Pt = [&from[0] + &s * &dir[0], &from[1] + &s * &dir[1]];
            if p[0].is_zero() && p[1].is_zero() {
                return Err(Error::ThroughJoint);
            }
            if !w.contains(&p) {
                continue;
            }
            match out.iter_mut().find(|(t, _, _)| *t == s) {
                Some(entry) => entry.2.push(w),
                None => out.push((s, p, vec![w])),
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Path-ordered product along the straight segment `from -> to`.
    pub fn transport(&self, from: &Pt, to: &Pt, f: &RationalFn) -> Result<RationalFn> {
        if self.on_wall(from) || self.on_wall(to) {
            return Err(Error::EndpointOnWall);
        }
        let dir: Pt = [&to[0] - &from[0], &to[1] - &from[1]];
        let mut g = f.clone();
        for (_, _, walls) in self.hits(from, &dir, true)? {
            for w in walls {
                let sign = dot2(w.normal, &dir).signum();
                g = self.cross(&g, w, sign.to_integer().try_into().unwrap())?;
            }
        }
        Ok(g)
    }

    pub fn to_cache(&self, seed_hash: &str) -> DiagramCache {
        DiagramCache {
            seed_hash: seed_hash.into(),
            order: self.order,
            status: self.status.clone(),
            walls: self
                .walls
                .iter()
                .map(|w| CachedWall {
                    normal: w.normal,
                    direction: [w.direction.0, w.direction.1],
                    exponent: self.plane.exponent(w.direction),
                    coefficients: w.coeffs.iter().map(ToString::to_string).collect(),
                    support: w.support.clone(),
                    initial: w.initial,
                })
                .collect(),
        }
    }

    pub fn from_cache(seed: &Seed, cache: &DiagramCache) -> Result<Diagram> {
        let plane = Plane::new(seed)?;
        let mut walls = Vec::new();
        for w in &cache.walls {
            let coeffs = w
                .coefficients
                .iter()
                .map(|s| s.parse::<BigRational>().map_err(|_| Error::Malformed(format!("coefficient {s}"))))
                .collect::<Result<Vec<_>>>()?;
            walls.push(Wall {
                normal: w.normal,
                direction: (w.direction[0], w.direction[1]),
                coeffs,
                support: w.support.clone(),
                initial: w.initial,
            });
        }
        Ok(Diagram { plane, order: cache.order, walls, status: cache.status.clone() })
    }
}

/// Builds the initial diagram and completes it to the given order.
pub fn complete_to_order(seed: &Seed, order: u32) -> Result<Diagram> {
    Diagram::initial(seed, order)?.complete()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CachedWall {
    pub normal: [i64; 2],
    pub direction: [u32; 2],
    pub exponent: Vec<i64>,
    pub coefficients: Vec<String>,
    pub support: Support,
    pub initial: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramCache {
    pub seed_hash: String,
    pub order: u32,
    pub status: Status,
    pub walls: Vec<CachedWall>,
}
