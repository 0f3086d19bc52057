//! Numerical semigroups of irreducible plane branches.
//!
//! A branch is described by its characteristic exponents `β_0 < β_1 < ... < β_g`.
//! From these we derive the gcd sequence `e_i`, the quotients `n_i = e_{i-1}/e_i`,
//! the Puiseux pairs `(p_i, m_i) = (e_{i-1}/e_i, β_i/e_i)` and the minimal
//! generators of the value semigroup via
//! `g_0 = β_0, g_1 = β_1, g_{i+1} = n_i g_i + β_{i+1} - β_i`.
//!
//! Conductor and membership are computed by enumeration, which is exact and
//! cheap at the scales this crate targets.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("invalid characteristic exponents: {0}")]
    InvalidCharExponents(String),
    #[error("generators have gcd {0} != 1, not a numerical semigroup")]
    NotNumericalSemigroup(i128),
    #[error("invalid gluing: {0}")]
    InvalidGluing(String),
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Characteristic exponents `β_0 < β_1 < ... < β_g` of a plane branch.
/// The smooth branch is `[1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharExponents {
    beta: Vec<i128>,
}

impl CharExponents {
    pub fn new(beta: Vec<i128>) -> Result<Self, SemigroupError> {
        if beta.is_empty() {
            return Err(SemigroupError::InvalidCharExponents(
                "empty exponent list".into(),
            ));
        }
        if beta[0] < 1 {
            return Err(SemigroupError::InvalidCharExponents(format!(
                "multiplicity {} < 1",
                beta[0]
            )));
        }
        let mut e = beta[0];
        for i in 1..beta.len() {
            if beta[i] <= beta[i - 1] {
                return Err(SemigroupError::InvalidCharExponents(format!(
                    "exponents not strictly increasing at index {}",
                    i
                )));
            }
            if beta[i] % e == 0 {
                return Err(SemigroupError::InvalidCharExponents(format!(
                    "e_{} = {} divides beta_{} = {}",
                    i - 1,
                    e,
                    i,
                    beta[i]
                )));
            }
            let next = gcd(e, beta[i]);
            debug_assert!(next < e);
            e = next;
        }
        if e != 1 {
            return Err(SemigroupError::InvalidCharExponents(format!(
                "gcd of all exponents is {} != 1",
                e
            )));
        }
        Ok(CharExponents { beta })
    }

    pub fn smooth() -> Self {
        CharExponents { beta: vec![1] }
    }

    pub fn exponents(&self) -> &[i128] {
        &self.beta
    }

    pub fn multiplicity(&self) -> i128 {
        self.beta[0]
    }

    /// Number of characteristic exponents past `β_0` (the genus).
    pub fn genus(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn is_smooth(&self) -> bool {
        self.beta.len() == 1
    }
}

/// Generators of a numerical semigroup in construction order, with the gcd
/// sequence `e_i = gcd(g_0..g_i)` and quotients `n_i = e_{i-1}/e_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemigroupGens {
    gens: Vec<i128>,
    e: Vec<i128>,
    n: Vec<i128>,
}

impl SemigroupGens {
    pub fn new(gens: Vec<i128>) -> Result<Self, SemigroupError> {
        if gens.is_empty() || gens.iter().any(|&g| g < 1) {
            return Err(SemigroupError::InvalidCharExponents(
                "generators must be positive".into(),
            ));
        }
        let mut e = Vec::with_capacity(gens.len());
        let mut n = Vec::new();
        let mut acc = gens[0];
        e.push(acc);
        for &g in &gens[1..] {
            let next = gcd(acc, g);
            if next == acc {
                return Err(SemigroupError::InvalidCharExponents(format!(
                    "generator {} is redundant for the gcd chain",
                    g
                )));
            }
            n.push(acc / next);
            e.push(next);
            acc = next;
        }
        Ok(SemigroupGens { gens, e, n })
    }

    pub fn trivial() -> Self {
        SemigroupGens {
            gens: vec![1],
            e: vec![1],
            n: vec![],
        }
    }

    pub fn gens(&self) -> &[i128] {
        &self.gens
    }

    pub fn e_sequence(&self) -> &[i128] {
        &self.e
    }

    pub fn n_sequence(&self) -> &[i128] {
        &self.n
    }
}

/// A branch with all derived semigroup data: characteristic exponents,
/// minimal generators, gcd sequence and Puiseux pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaneBranch {
    chars: CharExponents,
    gens: Vec<i128>,
    e: Vec<i128>,
    n: Vec<i128>,
    pairs: Vec<(i128, i128)>,
}

impl PlaneBranch {
    pub fn chars(&self) -> &CharExponents {
        &self.chars
    }

    /// Minimal generators `g_0, ..., g_g` of the value semigroup.
    pub fn gens(&self) -> &[i128] {
        &self.gens
    }

    /// `e_0, ..., e_g` with `e_i = gcd(β_0..β_i)`; `e_g = 1`.
    pub fn e_sequence(&self) -> &[i128] {
        &self.e
    }

    /// `n_1, ..., n_g` with `n_i = e_{i-1}/e_i` (index `i-1` in the slice).
    pub fn n_sequence(&self) -> &[i128] {
        &self.n
    }

    /// Puiseux pairs `(p_i, m_i) = (e_{i-1}/e_i, β_i/e_i)`.
    pub fn puiseux_pairs(&self) -> &[(i128, i128)] {
        &self.pairs
    }

    pub fn genus(&self) -> usize {
        self.chars.genus()
    }

    pub fn multiplicity(&self) -> i128 {
        self.chars.multiplicity()
    }

    pub fn is_smooth(&self) -> bool {
        self.chars.is_smooth()
    }

    /// `g_t` as an option; `None` encodes the `g_{g+1} = ∞` convention used
    /// in contact comparisons. Never enters arithmetic.
    pub fn gen_or_infinity(&self, t: usize) -> Option<i128> {
        self.gens.get(t).copied()
    }

    /// `e_t`, extended by `e_t = 1` past the last index.
    pub fn e_at(&self, t: usize) -> i128 {
        self.e.get(t).copied().unwrap_or(1)
    }

    pub fn semigroup(&self) -> SemigroupGens {
        SemigroupGens::new(self.gens.clone()).expect("derived generators are valid")
    }
}

/// Derives the minimal semigroup generators and all auxiliary sequences from
/// characteristic exponents.
pub fn gens_from_char(c: &CharExponents) -> PlaneBranch {
    let beta = c.exponents();
    let g = c.genus();
    let mut e = Vec::with_capacity(g + 1);
    let mut acc = beta[0];
    e.push(acc);
    for &b in &beta[1..] {
        acc = gcd(acc, b);
        e.push(acc);
    }
    let n: Vec<i128> = (1..=g).map(|i| e[i - 1] / e[i]).collect();
    let mut gens = Vec::with_capacity(g + 1);
    gens.push(beta[0]);
    if g >= 1 {
        gens.push(beta[1]);
        for i in 1..g {
            let next = n[i - 1] * gens[i] + beta[i + 1] - beta[i];
            gens.push(next);
        }
    }
    let pairs: Vec<(i128, i128)> = (1..=g).map(|i| (e[i - 1] / e[i], beta[i] / e[i])).collect();
    PlaneBranch {
        chars: c.clone(),
        gens,
        e,
        n,
        pairs,
    }
}

/// Rebuilds characteristic exponents from a list of Puiseux pairs
/// `(p_i, m_i)` with `p_i >= 2`, the inverse of [`PlaneBranch::puiseux_pairs`].
pub fn chars_from_pairs(pairs: &[(i128, i128)]) -> Result<CharExponents, SemigroupError> {
    let beta0: i128 = pairs.iter().map(|&(p, _)| p).product();
    let mut beta = vec![beta0];
    let mut e = beta0;
    for &(p, m) in pairs {
        e /= p;
        beta.push(m * e);
    }
    CharExponents::new(beta)
}

/// Membership test with the canonical bounded representation: returns the
/// unique coefficients `(a_0, ..., a_g)` with `0 <= a_i <= n_i - 1` for
/// `i >= 1` when the value lies in the semigroup.
pub fn membership(s: &SemigroupGens, value: i128) -> Option<Vec<i128>> {
    if value < 0 {
        return None;
    }
    fn go(gens: &[i128], n: &[i128], value: i128) -> Option<Vec<i128>> {
        if gens.len() == 1 {
            if value % gens[0] == 0 {
                return Some(vec![value / gens[0]]);
            }
            return None;
        }
        let last = gens.len() - 1;
        let bound = n[last - 1];
        for a in 0..bound {
            let rest = value - a * gens[last];
            if rest < 0 {
                break;
            }
            if let Some(mut coeffs) = go(&gens[..last], n, rest) {
                coeffs.push(a);
                return Some(coeffs);
            }
        }
        None
    }
    go(&s.gens, &s.n, value)
}

fn sieve(gens: &[i128], bound: usize) -> Vec<bool> {
    let mut hit = vec![false; bound + 1];
    hit[0] = true;
    for v in 0..=bound {
        if !hit[v] {
            continue;
        }
        for &g in gens {
            let w = v + g as usize;
            if w <= bound {
                hit[w] = true;
            }
        }
    }
    hit
}

/// Conductor (least value with `[c, ∞)` contained in the semigroup) and
/// symmetry, by enumeration.
pub fn conductor_and_symmetry(s: &SemigroupGens) -> Result<(i128, bool), SemigroupError> {
    let g = *s.e.last().unwrap();
    if g != 1 {
        return Err(SemigroupError::NotNumericalSemigroup(g));
    }
    let min = *s.gens.iter().min().unwrap();
    let max = *s.gens.iter().max().unwrap();
    // Schur bound on the Frobenius number plus room for the trailing run.
    let bound = ((min - 1) * (max - 1) + min + 1) as usize;
    let hit = sieve(&s.gens, bound);
    let mut conductor = 0usize;
    for v in (0..=bound).rev() {
        if !hit[v] {
            conductor = v + 1;
            break;
        }
    }
    let mut symmetric = true;
    if conductor > 0 {
        let frob = conductor - 1;
        for v in 0..conductor {
            if hit[v] == hit[frob - v] {
                symmetric = false;
                break;
            }
        }
    }
    Ok((conductor as i128, symmetric))
}

/// Gluing `k1 * S + k2 * N`: generators `k1 g_0, ..., k1 g_m, k2`.
/// Requires `gcd(k1, k2) = 1` and `k2` in the semigroup of `s`.
pub fn gluing(s: &SemigroupGens, k1: i128, k2: i128) -> Result<SemigroupGens, SemigroupError> {
    if k1 < 1 || k2 < 1 {
        return Err(SemigroupError::InvalidGluing(
            "multipliers must be positive".into(),
        ));
    }
    if gcd(k1, k2) != 1 {
        return Err(SemigroupError::InvalidGluing(format!(
            "gcd({}, {}) != 1",
            k1, k2
        )));
    }
    if membership(s, k2).is_none() {
        return Err(SemigroupError::InvalidGluing(format!(
            "{} is not in the base semigroup",
            k2
        )));
    }
    let mut gens: Vec<i128> = s.gens.iter().map(|&g| g * k1).collect();
    gens.push(k2);
    SemigroupGens::new(gens)
}

/// Indicator coefficients `c_0..c_N` with `c_v = 1` iff `v` lies in the
/// semigroup: the brute-force oracle for the one-branch series.
pub fn indicator_series(s: &SemigroupGens, order: usize) -> Vec<u8> {
    sieve(&s.gens, order).into_iter().map(|b| b as u8).collect()
}
