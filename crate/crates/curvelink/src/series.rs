//! Exact multivariate polynomial engine.
//!
//! Everything a pipeline produces is first a [`FactoredSeries`]: a formal
//! product of binomials `(t^v - 1)^e` with integer exponents `e`. Expansion
//! turns such a product into a [`SparsePoly`] (several variables, exact
//! division required) or into a truncated coefficient list (one variable).
//! Both expansions read the factors in the `(1 - t^v)` normalization — the
//! sign convention under which a one-branch result is the actual generating
//! series of the value semigroup. All arithmetic is exact; polynomial
//! coefficients are arbitrary-precision.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exponent scalar. Values at desk scale stay far below the `i128` range;
/// arithmetic is checked in debug builds.
pub type Exp = i128;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("substitution maps a nonzero exponent vector to zero")]
    DegenerateSubstitution,
    #[error("factored form is not a polynomial: division by t^{0:?} - 1 leaves a remainder")]
    NotAPolynomial(Vec<Exp>),
    #[error("series expansion requires a single variable, got arity {0}")]
    NotUnivariate(usize),
}

/// Exponent vector of a monomial `t_1^{a_1} ... t_r^{a_r}`.
///
/// Ordered by graded lexicographic order (total degree first, then
/// lexicographic), which fixes a deterministic monomial order for division
/// and rendering.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExpVec(Vec<Exp>);

impl ExpVec {
    pub fn new(coords: Vec<Exp>) -> Self {
        ExpVec(coords)
    }

    pub fn zeros(arity: usize) -> Self {
        ExpVec(vec![0; arity])
    }

    /// Standard basis vector `t_i` (0-based index).
    pub fn unit(arity: usize, i: usize) -> Self {
        let mut v = vec![0; arity];
        v[i] = 1;
        ExpVec(v)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Exp] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn total_degree(&self) -> Exp {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.arity(), other.arity());
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.arity(), other.arity());
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: Exp) -> ExpVec {
        ExpVec(self.0.iter().map(|a| a * k).collect())
    }

    /// True when `other` divides `self` as monomials.
    pub fn divisible_by(&self, other: &ExpVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Image under the linear map sending old variable `i` to the monomial
    /// `images[i]` of the new arity.
    pub fn map_variables(&self, images: &[ExpVec]) -> ExpVec {
        debug_assert_eq!(self.arity(), images.len());
        let new_arity = images.first().map_or(0, ExpVec::arity);
        let mut out = vec![0; new_arity];
        for (i, &a) in self.0.iter().enumerate() {
            if a != 0 {
                for (o, b) in out.iter_mut().zip(images[i].coords()) {
                    *o += a * b;
                }
            }
        }
        ExpVec(out)
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.arity(), other.arity());
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn monomial_string(v: &ExpVec) -> String {
    let mut parts = Vec::new();
    for (i, &a) in v.coords().iter().enumerate() {
        if a == 1 {
            parts.push(format!("t{}", i + 1));
        } else if a != 0 {
            parts.push(format!("t{}^{}", i + 1, a));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Formal product of binomials `(t^v - 1)^e`, stored as a canonical map from
/// exponent vector to nonzero integer power. This is the universal shape of
/// every pipeline output.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredSeries {
    arity: usize,
    factors: BTreeMap<ExpVec, i64>,
}

impl FactoredSeries {
    pub fn one(arity: usize) -> Self {
        FactoredSeries {
            arity,
            factors: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn factors(&self) -> impl Iterator<Item = (&ExpVec, i64)> {
        self.factors.iter().map(|(v, &e)| (v, e))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Multiplies in `(t^v - 1)^power`, merging and dropping cancelled factors.
    pub fn push_factor(&mut self, v: ExpVec, power: i64) -> Result<(), SeriesError> {
        if v.arity() != self.arity {
            return Err(SeriesError::Arity {
                expected: self.arity,
                got: v.arity(),
            });
        }
        debug_assert!(v.coords().iter().all(|&a| a >= 0));
        if power == 0 {
            return Ok(());
        }
        if v.is_zero() {
            // t^0 - 1 = 0 must never be constructed.
            return Err(SeriesError::DegenerateSubstitution);
        }
        let e = self.factors.entry(v.clone()).or_insert(0);
        *e += power;
        if *e == 0 {
            self.factors.remove(&v);
        }
        Ok(())
    }

    pub fn factor(arity: usize, v: ExpVec, power: i64) -> Result<Self, SeriesError> {
        let mut f = FactoredSeries::one(arity);
        f.push_factor(v, power)?;
        Ok(f)
    }

    pub fn mul(&self, other: &FactoredSeries) -> Result<FactoredSeries, SeriesError> {
        if other.arity != self.arity {
            return Err(SeriesError::Arity {
                expected: self.arity,
                got: other.arity,
            });
        }
        let mut out = self.clone();
        for (v, e) in &other.factors {
            out.push_factor(v.clone(), *e)?;
        }
        Ok(out)
    }

    /// Reindexes every factor through the substitution `old var i -> images[i]`.
    pub fn substitute(&self, images: &[ExpVec]) -> Result<FactoredSeries, SeriesError> {
        if images.len() != self.arity {
            return Err(SeriesError::Arity {
                expected: self.arity,
                got: images.len(),
            });
        }
        let new_arity = images.first().map_or(0, ExpVec::arity);
        let mut out = FactoredSeries::one(new_arity);
        for (v, e) in &self.factors {
            let w = v.map_variables(images);
            if w.is_zero() {
                return Err(SeriesError::DegenerateSubstitution);
            }
            out.push_factor(w, *e)?;
        }
        Ok(out)
    }

    /// Net powers split into (numerator, denominator) factor lists; the
    /// denominator powers are returned positive.
    pub fn split(&self) -> (Vec<(ExpVec, i64)>, Vec<(ExpVec, i64)>) {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (v, &e) in &self.factors {
            if e > 0 {
                num.push((v.clone(), e));
            } else {
                den.push((v.clone(), -e));
            }
        }
        (num, den)
    }

    /// Net sum of factor exponents. The product is read in the
    /// `(1 - t^v)` normalization, so expansions flip sign when this is odd.
    fn net_exponent(&self) -> i64 {
        self.factors.values().sum()
    }

    /// Exact multivariate expansion of `prod (1 - t^v)^e`; fails with
    /// [`SeriesError::NotAPolynomial`] when some denominator binomial does
    /// not divide the numerator.
    pub fn expand_polynomial(&self) -> Result<SparsePoly, SeriesError> {
        let (num, den) = self.split();
        let mut p = SparsePoly::one(self.arity);
        for (v, e) in num {
            for _ in 0..e {
                p = p.mul_binomial(&v);
            }
        }
        for (v, e) in den {
            for _ in 0..e {
                p = p.divide_exact_binomial(&v)?;
            }
        }
        if self.net_exponent().rem_euclid(2) == 1 {
            let mut neg = SparsePoly::zero(self.arity);
            for (v, c) in p.terms() {
                neg.add_term(v.clone(), -c);
            }
            p = neg;
        }
        Ok(p)
    }

    /// One-variable power-series expansion in the `(1 - t^a)` normalization,
    /// truncated at degree `n` inclusive: denominator factors expand as the
    /// geometric series `1 + t^a + t^{2a} + ...`, so one-branch results are
    /// genuine semigroup series.
    pub fn expand_series(&self, n: usize) -> Result<Vec<BigInt>, SeriesError> {
        if self.arity != 1 {
            return Err(SeriesError::NotUnivariate(self.arity));
        }
        let mut coeff = vec![BigInt::zero(); n + 1];
        coeff[0] = BigInt::one();
        for (v, &e) in &self.factors {
            let a = v.coords()[0];
            debug_assert!(a > 0);
            let a = a as usize;
            if e > 0 {
                for _ in 0..e {
                    // multiply by (1 - t^a)
                    let mut next = vec![BigInt::zero(); n + 1];
                    for (d, c) in coeff.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        next[d] += c;
                        if d + a <= n {
                            next[d + a] -= c;
                        }
                    }
                    coeff = next;
                }
            } else {
                for _ in 0..(-e) {
                    // multiply by 1 + t^a + t^{2a} + ..., telescoped as
                    // next[d] = coeff[d] + next[d - a].
                    let mut next = vec![BigInt::zero(); n + 1];
                    for d in 0..=n {
                        let mut c = coeff[d].clone();
                        if d >= a {
                            c += &next[d - a];
                        }
                        next[d] = c;
                    }
                    coeff = next;
                }
            }
        }
        Ok(coeff)
    }

    /// Renders the factored form as `(t1^a*t2^b - 1)^e * ...`, factors in
    /// ascending graded-lex order. Byte-deterministic.
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, (v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                out.push_str(" * ");
            }
            let _ = write!(out, "({} - 1)", monomial_string(v));
            if *e != 1 {
                let _ = write!(out, "^{}", e);
            }
        }
        out
    }
}

impl fmt::Display for FactoredSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Key factor `P(m,n,x) = (x^{mn}-1)(x-1) / ((x^m-1)(x^n-1))` for a monomial
/// `x`; collapses to 1 when `m` or `n` is 1.
pub fn key_p(m: Exp, n: Exp, x: &ExpVec) -> Result<FactoredSeries, SeriesError> {
    let mut f = FactoredSeries::one(x.arity());
    f.push_factor(x.scale(m * n), 1)?;
    f.push_factor(x.clone(), 1)?;
    f.push_factor(x.scale(m), -1)?;
    f.push_factor(x.scale(n), -1)?;
    Ok(f)
}

/// Key factor `Q(m,n,x,y) = ((y x^m)^n - 1) / (y x^m - 1)`; the constant 1
/// when `n = 1`.
pub fn key_q(m: Exp, n: Exp, x: &ExpVec, y: &ExpVec) -> Result<FactoredSeries, SeriesError> {
    let w = y.add(&x.scale(m));
    let mut f = FactoredSeries::one(x.arity());
    f.push_factor(w.scale(n), 1)?;
    f.push_factor(w, -1)?;
    Ok(f)
}

/// Key factor `B(m,n,x,y,z) = (y x^m)^n z^m - 1`, a single binomial.
pub fn key_b(
    m: Exp,
    n: Exp,
    x: &ExpVec,
    y: &ExpVec,
    z: &ExpVec,
) -> Result<FactoredSeries, SeriesError> {
    let w = y.add(&x.scale(m)).scale(n).add(&z.scale(m));
    FactoredSeries::factor(x.arity(), w, 1)
}

/// Expanded multivariate polynomial with arbitrary-precision coefficients.
/// Canonical: no zero coefficients; equality is map equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePoly {
    arity: usize,
    terms: BTreeMap<ExpVec, BigInt>,
}

impl SparsePoly {
    pub fn zero(arity: usize) -> Self {
        SparsePoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ExpVec::zeros(arity), BigInt::one());
        SparsePoly { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, v: &ExpVec) -> BigInt {
        self.terms.get(v).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, v: ExpVec, c: BigInt) {
        debug_assert_eq!(v.arity(), self.arity);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(v.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&v);
        }
    }

    /// Leading monomial in graded-lex order.
    pub fn leading(&self) -> Option<(&ExpVec, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.arity);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.add(v), a * b);
            }
        }
        out
    }

    /// Multiplies by the binomial `t^v - 1`.
    pub fn mul_binomial(&self, v: &ExpVec) -> SparsePoly {
        let mut out = SparsePoly::zero(self.arity);
        for (u, c) in &self.terms {
            out.add_term(u.add(v), c.clone());
            out.add_term(u.clone(), -c);
        }
        out
    }

    /// Exact division by `t^v - 1` in graded-lex order; errors when a nonzero
    /// remainder would appear.
    pub fn divide_exact_binomial(&self, v: &ExpVec) -> Result<SparsePoly, SeriesError> {
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(self.arity);
        while let Some((u, c)) = rem.leading() {
            if !u.divisible_by(v) {
                return Err(SeriesError::NotAPolynomial(v.coords().to_vec()));
            }
            let (u, c) = (u.clone(), c.clone());
            let q = u.sub(v);
            quot.add_term(q.clone(), c.clone());
            // rem -= c * t^q * (t^v - 1)
            rem.add_term(u, -c.clone());
            rem.add_term(q, c);
        }
        Ok(quot)
    }

    /// Substitutes every variable through `images`, re-canonicalizing.
    pub fn substitute(&self, images: &[ExpVec]) -> SparsePoly {
        let new_arity = images.first().map_or(0, ExpVec::arity);
        let mut out = SparsePoly::zero(new_arity);
        for (u, c) in &self.terms {
            out.add_term(u.map_variables(images), c.clone());
        }
        out
    }

    /// Componentwise maximum of all monomial exponents (the multidegree).
    pub fn multidegree(&self) -> ExpVec {
        let mut d = vec![0; self.arity];
        for u in self.terms.keys() {
            for (m, &a) in d.iter_mut().zip(u.coords()) {
                if a > *m {
                    *m = a;
                }
            }
        }
        ExpVec::new(d)
    }

    /// Checks the monomial-reversal symmetry `t^d p(1/t) = s * p(t)` for
    /// `s = 1` or `s = -1`, returning the sign when it holds.
    pub fn reciprocal_sign(&self) -> Option<i8> {
        let d = self.multidegree();
        let mut reversed = SparsePoly::zero(self.arity);
        for (u, c) in &self.terms {
            reversed.add_term(d.sub(u), c.clone());
        }
        if reversed == *self {
            Some(1)
        } else {
            let mut neg = SparsePoly::zero(self.arity);
            for (u, c) in &reversed.terms {
                neg.add_term(u.clone(), -c);
            }
            if neg == *self {
                Some(-1)
            } else {
                None
            }
        }
    }

    /// First monomial (graded-lex ascending) where the two polynomials
    /// disagree, with both coefficients.
    pub fn first_difference(&self, other: &SparsePoly) -> Option<(ExpVec, BigInt, BigInt)> {
        let mut keys: Vec<&ExpVec> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let a = self.coefficient(k);
            let b = other.coefficient(k);
            if a != b {
                return Some((k.clone(), a, b));
            }
        }
        None
    }

    /// Renders terms in graded-lex descending order, e.g. `t1^2*t2 - t1 + 1`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (v, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            let sign = c.is_negative();
            if i == 0 {
                if sign {
                    out.push('-');
                }
            } else if sign {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = monomial_string(v);
            if mono == "1" {
                let _ = write!(out, "{}", mag);
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{}*{}", mag, mono);
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// True when `p = s * t^v * q` for some sign `s` and monomial shift `t^v`
/// (Laurent shift allowed in either direction). Used to compare against
/// externally normalized Alexander polynomials.
pub fn equal_up_to_unit(p: &SparsePoly, q: &SparsePoly) -> bool {
    if p.arity() != q.arity() || p.num_terms() != q.num_terms() {
        return false;
    }
    if p.is_zero() {
        return true;
    }
    let (lp, cp) = p.leading().unwrap();
    let (lq, cq) = q.leading().unwrap();
    let shift = lp.sub(lq);
    let same_sign = cp.is_negative() == cq.is_negative();
    for ((u, a), (v, b)) in p.terms().zip(q.terms()) {
        if u.sub(v) != shift {
            return false;
        }
        let matches = if same_sign { a == b } else { *a == -b };
        if !matches {
            return false;
        }
    }
    true
}
