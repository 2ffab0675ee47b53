//! Exact Laurent polynomials over `Q` and the rational functions produced by
//! composing mutation pullbacks.
//!
//! A [`RationalFn`] is a Laurent polynomial divided by a product of powers of
//! normalized polynomial factors. Factors are kept as produced rather than
//! factored further, so equality is decided by cross-multiplication.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(vec![0; dim], BigRational::one())
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn monomial(exp: Vec<i64>, coeff: BigRational) -> Self {
        let mut p = LaurentPoly::zero(exp.len());
        p.add_term(exp, coeff);
        p
    }

    /// `z^exp` with coefficient 1.
    pub fn mono(exp: &[i64]) -> Self {
        Self::monomial(exp.to_vec(), BigRational::one())
    }

    /// `1 + z^psi`
    pub fn binomial(psi: &[i64]) -> Self {
        let mut p = Self::one(psi.len());
        p.add_term(psi.to_vec(), BigRational::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, BigRational)>>(dim: usize, terms: I) -> Self {
        let mut p = LaurentPoly::zero(dim);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn from_int_terms(dim: usize, terms: &[(&[i64], i64)]) -> Self {
        Self::from_terms(dim, terms.iter().map(|(e, c)| (e.to_vec(), BigRational::from_integer((*c).into()))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[i64]) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_monomial(&self) -> Option<(&Vec<i64>, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exp: Vec<i64>, coeff: BigRational) {
        assert_eq!(exp.len(), self.dim, "exponent length");
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::RankMismatch(self.dim, other.dim))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(self.dim);
        }
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = LaurentPoly::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(add_vec(e1, e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = LaurentPoly::one(self.dim);
        for _ in 0..k {
            out = out.mul(self).expect("same dim");
        }
        out
    }

    /// Multiplies by `z^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (add_vec(e, shift), c.clone())).collect() }
    }

    /// Componentwise minimum of the exponents; `None` for zero.
    pub fn min_exponent(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()))
    }

    /// `min <u, e>` over the support.
    pub fn valuation(&self, u: &[i64]) -> Result<i64> {
        if u.len() != self.dim {
            return Err(Error::RankMismatch(self.dim, u.len()));
        }
        self.terms.keys().map(|e| dot(u, e)).min().ok_or(Error::ZeroInput)
    }

    /// `self / d` if it is a Laurent polynomial.
    ///
    /// Both sides are shifted into polynomials with no monomial factor and
    /// divided by lex long division, stopping at the first leading term that
    /// cannot be cancelled.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        assert_eq!(self.dim, d.dim);
        if self.is_zero() {
            return Some(self.clone());
        }
        let dmin = d.min_exponent().unwrap();
        let amin = self.min_exponent().unwrap();
        let dd = d.shift(&dmin.iter().map(|x| -x).collect::<Vec<_>>());
        let mut r = self.shift(&amin.iter().map(|x| -x).collect::<Vec<_>>());
        let (lt_e, lt_c) = dd.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut q = LaurentPoly::zero(self.dim);
        while let Some((re, rc)) = r.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let diff = sub_vec(&re, &lt_e);
            if diff.iter().any(|&x| x < 0) {
                return None;
            }
            let c = rc / &lt_c;
            for (e, x) in &dd.terms {
                r.add_term(add_vec(e, &diff), -(x * &c));
            }
            q.add_term(diff, c);
        }
        Some(q.shift(&sub_vec(&amin, &dmin)))
    }

    /// Largest `k` with `g^k` dividing `self` in the Laurent ring.
    pub fn factor_multiplicity(&self, g: &Self) -> Result<u32> {
        self.check_dim(g)?;
        if self.is_zero() || g.is_zero() {
            return Err(Error::ZeroInput);
        }
        if g.as_monomial().is_some() {
            return Err(Error::Malformed("multiplicity of a unit".into()));
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(g) {
            cur = q;
            k += 1;
        }
        Ok(k)
    }

    /// Applies the monomial map `z^e |-> z^{f(e)}`; `f` must be linear.
    pub fn map_exponents(&self, new_dim: usize, f: impl Fn(&[i64]) -> Vec<i64>) -> Self {
        let mut out = LaurentPoly::zero(new_dim);
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    /// Substitutes values for the coordinates marked `Some`; the rest stay
    /// as variables, in order.
    pub fn partial_evaluate(&self, values: &[Option<BigRational>]) -> Result<Self> {
        if values.len() != self.dim {
            return Err(Error::RankMismatch(self.dim, values.len()));
        }
        if values.iter().flatten().any(Zero::is_zero) {
            return Err(Error::Malformed("torus coordinates must be nonzero".into()));
        }
        let kept = values.iter().filter(|v| v.is_none()).count();
        let mut out = LaurentPoly::zero(kept);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exp = Vec::with_capacity(kept);
            for (x, v) in e.iter().zip(values) {
                match v {
                    Some(t) => coeff *= t.pow(*x as i32),
                    None => exp.push(*x),
                }
            }
            out.add_term(exp, coeff);
        }
        Ok(out)
    }

    pub fn evaluate(&self, p: &TorusPoint) -> Result<BigRational> {
        let vals: Vec<Option<BigRational>> = p.coords.iter().cloned().map(Some).collect();
        Ok(self.partial_evaluate(&vals)?.coeff(&[]))
    }

    /// `(Q, t)` with `self` pulled back along `z^phi |-> z^phi g^{-<phi,u>}`
    /// equal to `Q * g^t`, `Q` a Laurent polynomial.
    fn mutation_parts(&self, u: &[i64], g_powers: &mut Vec<LaurentPoly>, g: &LaurentPoly) -> (LaurentPoly, i64) {
        let t = self.terms.keys().map(|e| -dot(e, u)).min().unwrap_or(0);
        let mut q = LaurentPoly::zero(self.dim);
        for (e, c) in &self.terms {
            let k = (-dot(e, u) - t) as usize;
            while g_powers.len() <= k {
                let next = g_powers.last().unwrap().mul(g).unwrap();
                g_powers.push(next);
            }
            for (e2, c2) in &g_powers[k].terms {
                q.add_term(add_vec(e, e2), c * c2);
            }
        }
        (q, t)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = e.iter().all(|&x| x == 0);
            let exps: Vec<String> = e.iter().map(ToString::to_string).collect();
            if is_const {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "z^({})", exps.join(","))?;
            } else {
                write!(f, "{abs}*z^({})", exps.join(","))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A point of a split torus with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPoint {
    coords: Vec<BigRational>,
}

impl TorusPoint {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if coords.iter().any(Zero::is_zero) {
            return Err(Error::Malformed("torus coordinates must be nonzero".into()));
        }
        Ok(TorusPoint { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `z^exp` evaluated at this point.
    pub fn monomial(&self, exp: &[i64]) -> BigRational {
        self.coords.iter().zip(exp).fold(BigRational::one(), |acc, (t, &x)| acc * t.pow(x as i32))
    }
}

/// Writes a nonconstant factor as `c * z^m * F` with `F` free of monomial
/// factors and its lex-smallest coefficient equal to 1.
fn normalize_factor(f: &LaurentPoly) -> (BigRational, Vec<i64>, LaurentPoly) {
    let m = f.min_exponent().expect("nonzero factor");
    let shifted = f.shift(&m.iter().map(|x| -x).collect::<Vec<_>>());
    let c = shifted.terms.values().next().unwrap().clone();
    let normalized = shifted.scale(&c.recip());
    (c, m, normalized)
}

#[derive(Clone)]
pub struct RationalFn {
    num: LaurentPoly,
    den: BTreeMap<LaurentPoly, u32>,
}

impl RationalFn {
    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFn { num: p, den: BTreeMap::new() }
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(dim))
    }

    pub fn one(dim: usize) -> Self {
        Self::from_poly(LaurentPoly::one(dim))
    }

    pub fn mono(exp: &[i64]) -> Self {
        Self::from_poly(LaurentPoly::mono(exp))
    }

    /// `num / prod f^k`.
    pub fn from_parts(num: LaurentPoly, den: Vec<(LaurentPoly, u32)>) -> Result<Self> {
        let mut num = num;
        let mut map: BTreeMap<LaurentPoly, u32> = BTreeMap::new();
        for (f, k) in den {
            num.check_dim(&f)?;
            if k == 0 {
                continue;
            }
            if f.is_zero() {
                return Err(Error::DenominatorVanishes);
            }
            let (c, m, nf) = normalize_factor(&f);
            let c_k = c.pow(k as i32).recip();
            let shift: Vec<i64> = m.iter().map(|x| -x * k as i64).collect();
            num = num.shift(&shift).scale(&c_k);
            if nf.as_monomial().is_none() {
                *map.entry(nf).or_insert(0) += k;
            }
        }
        let mut out = RationalFn { num, den: map };
        out.reduce();
        Ok(out)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<LaurentPoly> = self.den.keys().cloned().collect();
        for f in keys {
            let k = self.den.get_mut(&f).unwrap();
            while *k > 0 {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        *k -= 1;
                    }
                    None => break,
                }
            }
            if *k == 0 {
                self.den.remove(&f);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.num.dim
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> impl Iterator<Item = (&LaurentPoly, u32)> {
        self.den.iter().map(|(f, k)| (f, *k))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn den_product(&self, skip: &BTreeMap<LaurentPoly, u32>) -> LaurentPoly {
        let mut p = LaurentPoly::one(self.dim());
        for (f, &k) in &self.den {
            let have = skip.get(f).copied().unwrap_or(0);
            p = p.mul(&f.pow(k.saturating_sub(have))).unwrap();
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let num = self.num.mul(&other.num)?;
        let mut den = self.den.clone();
        for (f, k) in &other.den {
            *den.entry(f.clone()).or_insert(0) += k;
        }
        let mut out = RationalFn { num, den };
        out.reduce();
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.num.check_dim(&other.num)?;
        let mut den = self.den.clone();
        for (f, &k) in &other.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let common = RationalFn { num: LaurentPoly::zero(self.dim()), den: den.clone() };
        let a = self.num.mul(&common.den_product(&self.den))?;
        let b = other.num.mul(&common.den_product(&other.den))?;
        let mut out = RationalFn { num: a.add(&b)?, den };
        out.reduce();
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = RationalFn { num: self.num.scale(c), den: self.den.clone() };
        out.reduce();
        out
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let num = self.den_product(&BTreeMap::new());
        RationalFn::from_parts(num, vec![(self.num.clone(), 1)])
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = RationalFn::one(self.dim());
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// Pullback along `mu_{u,psi}`: `z^phi |-> z^phi (1 + z^psi)^{-<phi,u>}`.
    pub fn mutation_pullback(&self, u: &[i64], psi: &[i64]) -> Result<Self> {
        if psi.len() != self.dim() {
            return Err(Error::RankMismatch(self.dim(), psi.len()));
        }
        self.twist_pullback(u, &LaurentPoly::binomial(psi))
    }

    /// `z^phi |-> z^phi g^{-<phi,u>}` for `g` supported on `u^perp`.
    pub fn twist_pullback(&self, u: &[i64], g: &LaurentPoly) -> Result<Self> {
        let dim = self.dim();
        if u.len() != dim {
            return Err(Error::RankMismatch(dim, u.len()));
        }
        self.num.check_dim(g)?;
        if let Some(pu) = g.terms().map(|(e, _)| dot(e, u)).find(|&x| x != 0) {
            return Err(Error::PsiUNotOrthogonal(pu));
        }
        let mut powers = vec![LaurentPoly::one(dim)];
        let (qn, tn) = self.num.mutation_parts(u, &mut powers, g);
        let mut total = tn;
        let mut den = Vec::new();
        for (f, &k) in &self.den {
            let (qf, tf) = f.mutation_parts(u, &mut powers, g);
            total -= tf * k as i64;
            den.push((qf, k));
        }
        let num = if total >= 0 {
            qn.mul(&g.pow(total as u32))?
        } else {
            den.push((g.clone(), (-total) as u32));
            qn
        };
        RationalFn::from_parts(num, den)
    }

    /// Applies the monomial map `z^e |-> z^{f(e)}`; `f` must be linear.
    pub fn map_exponents(&self, new_dim: usize, f: impl Fn(&[i64]) -> Vec<i64>) -> Result<Self> {
        let num = self.num.map_exponents(new_dim, &f);
        let den = self.den.iter().map(|(p, &k)| (p.map_exponents(new_dim, &f), k)).collect();
        RationalFn::from_parts(num, den)
    }

    pub fn partial_evaluate(&self, values: &[Option<BigRational>]) -> Result<Self> {
        let num = self.num.partial_evaluate(values)?;
        let mut den = Vec::new();
        for (f, &k) in &self.den {
            let g = f.partial_evaluate(values)?;
            if g.is_zero() {
                return Err(Error::DenominatorVanishes);
            }
            den.push((g, k));
        }
        RationalFn::from_parts(num, den)
    }

    pub fn evaluate(&self, p: &TorusPoint) -> Result<BigRational> {
        if p.dim() != self.dim() {
            return Err(Error::RankMismatch(self.dim(), p.dim()));
        }
        let mut value = self.num.evaluate(p)?;
        for (f, &k) in &self.den {
            let v = f.evaluate(p)?;
            if v.is_zero() {
                return Err(Error::DenominatorVanishes);
            }
            value /= v.pow(k as i32);
        }
        Ok(value)
    }

    /// Order of vanishing along the toric boundary divisor of `u`.
    pub fn toric_valuation(&self, u: &[i64]) -> Result<i64> {
        let mut v = self.num.valuation(u)?;
        for (f, &k) in &self.den {
            v -= f.valuation(u)? * k as i64;
        }
        Ok(v)
    }

    /// Multiplicity of `g` in the numerator minus in the denominator.
    pub fn factor_order(&self, g: &LaurentPoly) -> Result<i64> {
        let mut v = self.num.factor_multiplicity(g)? as i64;
        for (f, &k) in &self.den {
            v -= f.factor_multiplicity(g)? as i64 * k as i64;
        }
        Ok(v)
    }

    /// The Laurent polynomial this equals, if any.
    pub fn is_laurent(&self) -> Option<LaurentPoly> {
        let mut cur = self.num.clone();
        for (f, &k) in &self.den {
            for _ in 0..k {
                cur = cur.div_exact(f)?;
            }
        }
        Some(cur)
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        let a = self.num.mul(&other.den_product(&BTreeMap::new())).unwrap();
        let b = other.num.mul(&self.den_product(&BTreeMap::new())).unwrap();
        a == b
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(p, &k)| if k == 1 { format!("({p})") } else { format!("({p})^{k}") })
            .collect();
        write!(f, "({}) / {}", self.num, parts.join("*"))
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(dim: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(dim, terms)
    }

    #[test]
    fn normalization_cancels() {
        let g = LaurentPoly::binomial(&[1, 0]);
        let f = RationalFn::from_parts(g.clone(), vec![(g.clone(), 1)]).unwrap();
        assert_eq!(f.to_string(), "1");

        // (1 - z^{2psi}) / (1 + z^psi)
        let num = p(2, &[(&[0, 0], 1), (&[2, 4], -1)]);
        let f = RationalFn::from_parts(num, vec![(LaurentPoly::binomial(&[1, 2]), 1)]).unwrap();
        assert_eq!(f.is_laurent().unwrap(), p(2, &[(&[0, 0], 1), (&[1, 2], -1)]));
        assert_eq!(f.denominator().count(), 0);
    }

    #[test]
    fn factor_normalization_moves_units() {
        // 1 / (2 z^(1,0) + 2 z^(2,0)) = z^(-1,0)/2 / (1 + z^(1,0))
        let f = RationalFn::from_parts(LaurentPoly::one(2), vec![(p(2, &[(&[1, 0], 2), (&[2, 0], 2)]), 1)]).unwrap();
        assert_eq!(f.numerator().to_string(), "1/2*z^(-1,0)");
        assert_eq!(f.to_string(), "(1/2*z^(-1,0)) / (1 + z^(1,0))");
    }

    #[test]
    fn pullback_examples() {
        // A-side, SEED-A2, j = 1: u = e1, psi = p1(e1) = (0, 1)
        let f = RationalFn::mono(&[1, 0]).mutation_pullback(&[1, 0], &[0, 1]).unwrap();
        let expected = RationalFn::from_parts(LaurentPoly::mono(&[1, 0]), vec![(LaurentPoly::binomial(&[0, 1]), 1)]).unwrap();
        assert_eq!(f, expected);
        assert_eq!(f.to_string(), "(z^(1,0)) / (1 + z^(0,1))");
        let g = RationalFn::mono(&[0, 1]).mutation_pullback(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(g, RationalFn::mono(&[0, 1]));
        // X-side: u = p2(e1) = (0, -1), psi = e1
        let h = RationalFn::mono(&[0, 1]).mutation_pullback(&[0, -1], &[1, 0]).unwrap();
        assert_eq!(h.to_string(), "z^(0,1) + z^(1,1)");
        assert!(matches!(
            RationalFn::mono(&[0, 1]).mutation_pullback(&[1, 0], &[1, 0]),
            Err(Error::PsiUNotOrthogonal(1))
        ));
    }

    #[test]
    fn multiplicities() {
        let g = LaurentPoly::binomial(&[1, -1]);
        assert_eq!(g.pow(3).factor_multiplicity(&g).unwrap(), 3);
        let h = p(2, &[(&[0, 0], 1), (&[1, -1], 1), (&[2, -2], 1)]);
        assert_eq!(h.factor_multiplicity(&g).unwrap(), 0);
        assert_eq!(g.shift(&[5, 7]).factor_multiplicity(&g).unwrap(), 1);
        assert!(matches!(LaurentPoly::zero(2).factor_multiplicity(&g), Err(Error::ZeroInput)));
    }

    #[test]
    fn laurent_checks() {
        let g = LaurentPoly::binomial(&[0, 1]);
        let f = RationalFn::from_parts(g.pow(2), vec![(g.clone(), 1)]).unwrap();
        assert_eq!(f.is_laurent().unwrap(), g);
        let f = RationalFn::from_parts(LaurentPoly::mono(&[3, 1]), vec![(g, 1)]).unwrap();
        assert!(f.is_laurent().is_none());
    }

    #[test]
    fn valuations() {
        let u = [1, 2];
        assert_eq!(RationalFn::mono(&[3, -1]).toric_valuation(&u).unwrap(), 1);
        assert_eq!(RationalFn::from_poly(LaurentPoly::binomial(&[1, 0])).toric_valuation(&u).unwrap(), 0);
        // <u, psi> = -2
        let f = RationalFn::from_parts(LaurentPoly::mono(&[1, 1]), vec![(LaurentPoly::binomial(&[0, -1]), 1)]).unwrap();
        assert_eq!(f.toric_valuation(&u).unwrap(), 3 + 2);
        assert!(matches!(RationalFn::zero(2).toric_valuation(&u), Err(Error::ZeroInput)));
    }

    #[test]
    fn evaluation() {
        let pt = TorusPoint::from_ints(&[2, 3]).unwrap();
        assert_eq!(RationalFn::mono(&[1, 0]).evaluate(&pt).unwrap(), rat(2, 1));
        let f = RationalFn::from_parts(LaurentPoly::mono(&[1, 1]), vec![(LaurentPoly::binomial(&[0, 1]), 1)]).unwrap();
        assert_eq!(f.evaluate(&pt).unwrap(), rat(3, 2));
        let bad = TorusPoint::from_ints(&[-1, 5]).unwrap();
        let f = RationalFn::one(2).div(&LaurentPoly::binomial(&[1, 0]).into()).unwrap();
        assert!(matches!(f.evaluate(&bad), Err(Error::DenominatorVanishes)));
        assert!(TorusPoint::from_ints(&[0, 1]).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = RationalFn::one(1).div(&LaurentPoly::binomial(&[1]).into()).unwrap();
        let b = RationalFn::mono(&[1]).div(&LaurentPoly::binomial(&[1]).into()).unwrap();
        assert_eq!(a.add(&b).unwrap(), RationalFn::one(1));
        assert_eq!(RationalFn::mono(&[1]).mul(&RationalFn::mono(&[2])).unwrap(), RationalFn::mono(&[3]));
        assert!(RationalFn::mono(&[1]).add(&RationalFn::mono(&[1, 0])).is_err());
        let x = RationalFn::from_poly(p(1, &[(&[0], 1), (&[1], 3), (&[2], 1)]));
        assert_eq!(x.div(&x).unwrap(), RationalFn::one(1));
    }

    #[test]
    fn rendering_is_canonical() {
        let f = p(2, &[(&[1, 0], 1), (&[0, -1], -3), (&[0, 0], 1), (&[2, 2], 1)]).scale(&rat(1, 2));
        assert_eq!(f.to_string(), "-3/2*z^(0,-1) + 1/2 + 1/2*z^(1,0) + 1/2*z^(2,2)");
    }
}
