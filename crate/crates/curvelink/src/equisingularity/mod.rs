//! Multi-branch equisingularity data.
//!
//! An [`EquisigType`] is a list of branches (characteristic exponents) with
//! pairwise intersection multiplicities. The contact pair `(q, c)` of two
//! branches counts the shared characteristic levels and free points; both
//! representations are stored after validation and are interconvertible.
//!
//! The refined good order recursively partitions the branch set into
//! packages at each separation level: smooth packages (which continue past
//! the separation with free points) come first, singular packages (whose
//! characteristic term causes the separation) follow, ordered by decreasing
//! `g_{q+1}/e_q`.

mod model;
mod walk;

pub use model::{topological_model, PuiseuxTerm, TermKind, TopologicalModel};
pub use walk::{approximation_sequence, step_contact, ApproxStep, FactorSpec, StepKind, StepPart};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::semigroup::{gens_from_char, CharExponents, PlaneBranch, SemigroupError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EquisigError {
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("unrealizable intersection [C{i}, C{j}] = {m}: {reason}")]
    UnrealizableIntersection {
        i: usize,
        j: usize,
        m: i128,
        reason: String,
    },
    #[error("unattainable contact pair ({q}, {c}): {reason}")]
    UnattainableContact { q: usize, c: i128, reason: String },
    #[error(
        "unrealizable equisingularity type: triple ({0}, {1}, {2}) violates the tree condition"
    )]
    UnrealizableEquisigType(usize, usize, usize),
    #[error("inconsistent equisingularity data: {0}")]
    Internal(String),
}

/// Contact pair `(q, c)`: `q` shared characteristic levels, then `c` more
/// shared free points. Ordered lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct ContactPair {
    pub q: usize,
    pub c: i128,
}

impl ContactPair {
    pub fn new(q: usize, c: i128) -> Self {
        ContactPair { q, c }
    }
}

impl std::fmt::Display for ContactPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.q, self.c)
    }
}

/// Free-point capacity of level `t`: the number of free points between the
/// characteristic levels `t` and `t+1`, i.e. `floor((g_{t+1} - n_t g_t)/e_t)`
/// with the level-0 term taken as 0 (so `l_0 = floor(g_1/g_0)`). `None`
/// encodes infinity (no later characteristic level).
pub fn free_capacity(b: &PlaneBranch, t: usize) -> Option<i128> {
    let next = b.gen_or_infinity(t + 1)?;
    let prior = if t == 0 {
        0
    } else {
        b.n_sequence()[t - 1] * b.gens()[t]
    };
    Some((next - prior) / b.e_at(t))
}

fn min_opt(a: Option<i128>, b: Option<i128>) -> Option<i128> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

/// Requires the two branches to share characteristic structure through level
/// `t`: `e'_{j-1} g_j = e_{j-1} g'_j` for `1 <= j <= t`.
fn check_shared_prefix(a: &PlaneBranch, b: &PlaneBranch, t: usize) -> Result<(), String> {
    for j in 1..=t {
        let (ga, gb) = match (a.gen_or_infinity(j), b.gen_or_infinity(j)) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return Err(format!(
                    "branches do not share a characteristic level {}",
                    j
                ))
            }
        };
        if b.e_at(j - 1) * ga != a.e_at(j - 1) * gb {
            return Err(format!("characteristic levels {} differ", j));
        }
    }
    Ok(())
}

/// Computes the contact pair of two branches from their intersection
/// multiplicity, implementing the three complementary cases.
pub fn contact_pair(
    a: &PlaneBranch,
    b: &PlaneBranch,
    m: i128,
) -> Result<ContactPair, EquisigError> {
    let fail = |reason: String| EquisigError::UnrealizableIntersection {
        i: 0,
        j: 0,
        m,
        reason,
    };
    if m < a.multiplicity() * b.multiplicity() {
        return Err(fail("below the product of multiplicities".into()));
    }
    let max_t = a.genus().max(b.genus()) + 1;
    for t in 0..=max_t {
        let side_a = a.gen_or_infinity(t + 1).map(|g| b.e_at(t) * g);
        let side_b = b.gen_or_infinity(t + 1).map(|g| a.e_at(t) * g);
        let threshold = min_opt(side_a, side_b);
        let within = match threshold {
            Some(p) => m <= p,
            None => true,
        };
        if !within {
            continue;
        }
        check_shared_prefix(a, b, t).map_err(&fail)?;
        let strictly_below = match threshold {
            Some(p) => m < p,
            None => true,
        };
        if strictly_below {
            let base = if t == 0 {
                0
            } else {
                b.e_at(t - 1) * a.gens()[t]
            };
            let num = m - base;
            let den = a.e_at(t) * b.e_at(t);
            if num <= 0 || num % den != 0 {
                return Err(fail(format!("no integral free offset at level {}", t)));
            }
            let c = num / den;
            let cap = min_opt(free_capacity(a, t), free_capacity(b, t));
            if let Some(cap) = cap {
                if c > cap {
                    return Err(fail(format!(
                        "free offset {} exceeds capacity {} at level {}",
                        c, cap, t
                    )));
                }
            }
            return Ok(ContactPair::new(t, c));
        }
        // m equals the threshold
        if side_a == side_b {
            check_shared_prefix(a, b, t + 1).map_err(&fail)?;
            return Ok(ContactPair::new(t + 1, 0));
        }
        let cap = min_opt(free_capacity(a, t), free_capacity(b, t))
            .expect("finite threshold forces a finite capacity");
        return Ok(ContactPair::new(t, cap + 1));
    }
    Err(fail("no contact level matches".into()))
}

/// Exact inverse of [`contact_pair`]: the intersection multiplicity realizing
/// an attainable contact pair.
pub fn intersection_from_contact(
    a: &PlaneBranch,
    b: &PlaneBranch,
    contact: ContactPair,
) -> Result<i128, EquisigError> {
    let ContactPair { q, c } = contact;
    let fail = |reason: String| EquisigError::UnattainableContact { q, c, reason };
    if c == 0 {
        if q == 0 {
            return Err(fail("contact (0, 0) is not defined".into()));
        }
        check_shared_prefix(a, b, q).map_err(&fail)?;
        return Ok(b.e_at(q - 1) * a.gens()[q]);
    }
    check_shared_prefix(a, b, q).map_err(&fail)?;
    let la = free_capacity(a, q);
    let lb = free_capacity(b, q);
    let cap = min_opt(la, lb);
    let within = match cap {
        Some(l) => c <= l,
        None => true,
    };
    if within {
        let base = if q == 0 {
            0
        } else {
            b.e_at(q - 1) * a.gens()[q]
        };
        return Ok(base + c * a.e_at(q) * b.e_at(q));
    }
    let cap = cap.unwrap();
    if c == cap + 1 {
        let side_a = a.gen_or_infinity(q + 1).map(|g| b.e_at(q) * g);
        let side_b = b.gen_or_infinity(q + 1).map(|g| a.e_at(q) * g);
        if side_a == side_b {
            return Err(fail(
                "boundary offset with equal characteristic levels means deeper contact".into(),
            ));
        }
        return min_opt(side_a, side_b).ok_or_else(|| fail("no finite side".into()));
    }
    Err(fail(format!("free offset exceeds capacity {} + 1", cap)))
}

/// Pairwise data of a multi-branch curve: branches plus the symmetric
/// intersection and contact tables, stored canonically after validation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquisigType {
    branches: Vec<PlaneBranch>,
    inter: Vec<Vec<i128>>,
    contact: Vec<Vec<ContactPair>>,
}

impl EquisigType {
    pub fn single(chars: CharExponents) -> Self {
        EquisigType {
            branches: vec![gens_from_char(&chars)],
            inter: vec![vec![0]],
            contact: vec![vec![ContactPair::new(0, 0)]],
        }
    }

    /// Builds from branches and an intersection table given as entries
    /// `(i, j, m)` over 0-based indices; every unordered pair exactly once.
    pub fn from_intersections(
        chars: Vec<CharExponents>,
        entries: &[(usize, usize, i128)],
    ) -> Result<Self, EquisigError> {
        let r = chars.len();
        let branches: Vec<PlaneBranch> = chars.iter().map(gens_from_char).collect();
        let mut inter = vec![vec![0i128; r]; r];
        let mut seen = vec![vec![false; r]; r];
        for &(i, j, m) in entries {
            if i >= r || j >= r || i == j {
                return Err(EquisigError::Internal(format!(
                    "bad pair indices ({}, {})",
                    i, j
                )));
            }
            if seen[i][j] {
                return Err(EquisigError::Internal(format!(
                    "pair ({}, {}) given twice",
                    i, j
                )));
            }
            seen[i][j] = true;
            seen[j][i] = true;
            inter[i][j] = m;
            inter[j][i] = m;
        }
        for i in 0..r {
            for j in (i + 1)..r {
                if !seen[i][j] {
                    return Err(EquisigError::Internal(format!(
                        "missing intersection for pair ({}, {})",
                        i, j
                    )));
                }
            }
        }
        let mut contact = vec![vec![ContactPair::new(0, 0); r]; r];
        for i in 0..r {
            for j in (i + 1)..r {
                let cp =
                    contact_pair(&branches[i], &branches[j], inter[i][j]).map_err(|e| match e {
                        EquisigError::UnrealizableIntersection { m, reason, .. } => {
                            EquisigError::UnrealizableIntersection { i, j, m, reason }
                        }
                        other => other,
                    })?;
                contact[i][j] = cp;
                contact[j][i] = cp;
            }
        }
        let et = EquisigType {
            branches,
            inter,
            contact,
        };
        et.validate_tree()?;
        Ok(et)
    }

    /// Builds from contact pairs, converting to intersections immediately.
    pub fn from_contacts(
        chars: Vec<CharExponents>,
        entries: &[(usize, usize, ContactPair)],
    ) -> Result<Self, EquisigError> {
        let branches: Vec<PlaneBranch> = chars.iter().map(gens_from_char).collect();
        let mut inter_entries = Vec::with_capacity(entries.len());
        for &(i, j, cp) in entries {
            if i >= branches.len() || j >= branches.len() || i == j {
                return Err(EquisigError::Internal(format!(
                    "bad pair indices ({}, {})",
                    i, j
                )));
            }
            let m = intersection_from_contact(&branches[i], &branches[j], cp)?;
            inter_entries.push((i, j, m));
        }
        Self::from_intersections(chars, &inter_entries)
    }

    /// Tree condition: among the three contact pairs of any triple, the two
    /// smallest coincide.
    fn validate_tree(&self) -> Result<(), EquisigError> {
        let r = self.r();
        for i in 0..r {
            for j in (i + 1)..r {
                for k in (j + 1)..r {
                    let mut v = [self.contact[i][j], self.contact[i][k], self.contact[j][k]];
                    v.sort();
                    if v[0] != v[1] {
                        return Err(EquisigError::UnrealizableEquisigType(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.branches.len()
    }

    pub fn branch(&self, i: usize) -> &PlaneBranch {
        &self.branches[i]
    }

    pub fn branches(&self) -> &[PlaneBranch] {
        &self.branches
    }

    pub fn intersection(&self, i: usize, j: usize) -> i128 {
        self.inter[i][j]
    }

    pub fn contact(&self, i: usize, j: usize) -> ContactPair {
        self.contact[i][j]
    }

    /// Minimal contact over all pairs within an index set.
    pub fn min_contact(&self, set: &[usize]) -> ContactPair {
        let mut best: Option<ContactPair> = None;
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                let c = self.contact[i][j];
                best = Some(match best {
                    Some(b) if b <= c => b,
                    _ => c,
                });
            }
        }
        best.expect("min_contact needs at least two indices")
    }

    /// Applies a permutation: branch `k` of the result is branch `perm[k]`
    /// of `self`.
    pub fn reordered(&self, perm: &[usize]) -> EquisigType {
        let r = self.r();
        assert_eq!(perm.len(), r);
        let branches: Vec<PlaneBranch> = perm.iter().map(|&i| self.branches[i].clone()).collect();
        let mut inter = vec![vec![0i128; r]; r];
        let mut contact = vec![vec![ContactPair::new(0, 0); r]; r];
        for a in 0..r {
            for b in 0..r {
                inter[a][b] = self.inter[perm[a]][perm[b]];
                contact[a][b] = self.contact[perm[a]][perm[b]];
            }
        }
        EquisigType {
            branches,
            inter,
            contact,
        }
    }
}

/// Node kind of the package tree at a separation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StarKind {
    /// Some package's characteristic term realizes the separation.
    DeadArcStar,
    /// All packages separate at free points.
    OrdinarySeparation,
}

/// Recursive ordered partition of the branch indices produced by the refined
/// good order. Leaves are singletons; the left-to-right leaf order is the
/// good order itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PackageNode {
    /// Branch indices covered by this node, in good order.
    pub branches: Vec<usize>,
    /// Contact pair at this node; `None` on leaves.
    pub contact: Option<ContactPair>,
    pub star_kind: Option<StarKind>,
    /// Number of leading smooth packages among the children.
    pub smooth_count: usize,
    pub children: Vec<PackageNode>,
}

impl PackageNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn total_count(&self) -> usize {
        self.children.len()
    }

    fn leaves(&self, out: &mut Vec<usize>) {
        if self.is_leaf() {
            out.extend(&self.branches);
        } else {
            for c in &self.children {
                c.leaves(out);
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PackageTree {
    pub root: PackageNode,
}

impl PackageTree {
    pub fn leaf_order(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.root.leaves(&mut out);
        out
    }
}

/// Whether a package whose members have free capacity `cap` at level `q`
/// continues past a separation with offset `c` (smooth) or turns into its
/// characteristic term there (singular).
fn is_smooth_package(cap: Option<i128>, c: i128) -> bool {
    match cap {
        None => true,
        Some(l) => l >= c,
    }
}

fn partition_by<F: Fn(usize, usize) -> bool>(set: &[usize], same: F) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in set {
        let mut placed = false;
        for class in classes.iter_mut() {
            if same(class[0], i) {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    classes
}

fn order_node(et: &EquisigType, set: &[usize]) -> Result<PackageNode, EquisigError> {
    if set.len() == 1 {
        return Ok(PackageNode {
            branches: set.to_vec(),
            contact: None,
            star_kind: None,
            smooth_count: 0,
            children: Vec::new(),
        });
    }
    let node_contact = et.min_contact(set);
    let ContactPair { q, c } = node_contact;
    // Coarse classes: together iff contact strictly deeper than the node's.
    let coarse = partition_by(set, |a, b| et.contact(a, b) > node_contact);
    // Check the relation really is an equivalence (tree condition again).
    for class in &coarse {
        for &a in class {
            for &b in class {
                if a != b && !(et.contact(a, b) > node_contact) {
                    return Err(EquisigError::UnrealizableEquisigType(class[0], a, b));
                }
            }
        }
    }
    let mut smooth: Vec<Vec<usize>> = Vec::new();
    let mut singular: Vec<Vec<usize>> = Vec::new();
    for class in coarse {
        let caps: Vec<Option<i128>> = class
            .iter()
            .map(|&i| free_capacity(et.branch(i), q))
            .collect();
        let class_smooth = c >= 1 && is_smooth_package(caps[0], c);
        for (&i, &cap) in class.iter().zip(&caps) {
            if c >= 1 && is_smooth_package(cap, c) != class_smooth {
                return Err(EquisigError::Internal(format!(
                    "package members {} and {} disagree on separation kind",
                    class[0], i
                )));
            }
        }
        if class_smooth {
            smooth.push(class);
        } else {
            // Singular classes split further at the characteristic term: two
            // members stay together only when their contact exceeds (d, 0),
            // d being the characteristic level realized at this node.
            let d = if c == 0 { q } else { q + 1 };
            let deeper = ContactPair::new(d, 0);
            let sub = partition_by(&class, |a, b| et.contact(a, b) > deeper);
            singular.extend(sub);
        }
    }
    if c == 0 && !smooth.is_empty() {
        return Err(EquisigError::Internal(
            "free separation package at a characteristic-level node".into(),
        ));
    }
    // Smooth packages keep input order (stable); singular packages are
    // ordered by decreasing g_d / e_{d-1}, ties stable.
    let d = if c == 0 { q } else { q + 1 };
    singular.sort_by(|x, y| {
        let bx = et.branch(x[0]);
        let by = et.branch(y[0]);
        let (gx, ex) = (bx.gens()[d], bx.e_at(d - 1));
        let (gy, ey) = (by.gens()[d], by.e_at(d - 1));
        // descending gx/ex
        (gy * ex).cmp(&(gx * ey)).then(x[0].cmp(&y[0]))
    });
    let smooth_count = smooth.len();
    let star_kind = if singular.is_empty() {
        StarKind::OrdinarySeparation
    } else {
        StarKind::DeadArcStar
    };
    let mut children = Vec::new();
    let mut branches = Vec::new();
    for class in smooth.into_iter().chain(singular) {
        let child = order_node(et, &class)?;
        branches.extend(child.branches.iter().copied());
        children.push(child);
    }
    Ok(PackageNode {
        branches,
        contact: Some(node_contact),
        star_kind: Some(star_kind),
        smooth_count,
        children,
    })
}

/// Computes the refined good order. Returns the permutation (`perm[k]` is the
/// original index of the branch in position `k`) and the package tree over
/// the original indices.
pub fn validate_and_order(et: &EquisigType) -> Result<(Vec<usize>, PackageTree), EquisigError> {
    let set: Vec<usize> = (0..et.r()).collect();
    let root = order_node(et, &set)?;
    let tree = PackageTree { root };
    let perm = tree.leaf_order();
    Ok((perm, tree))
}

/// Targets of separation terms must land inside or outside a package as a
/// whole; exposed for the walk.
pub(crate) fn targets_intersect(targets: &BTreeSet<usize>, lo: usize, hi: usize) -> bool {
    targets.iter().any(|&t| t >= lo && t < hi)
}

/// Worked five-branch fixture: branches (3,14), smooth, (2,5), smooth,
/// smooth with the standard intersection table. Used across the test suite.
#[cfg(test)]
pub(crate) fn five_branch_fixture() -> EquisigType {
    let chars = vec![
        CharExponents::new(vec![3, 14]).unwrap(),
        CharExponents::smooth(),
        CharExponents::new(vec![2, 5]).unwrap(),
        CharExponents::smooth(),
        CharExponents::smooth(),
    ];
    let entries = [
        (0usize, 1usize, 6i128),
        (0, 2, 12),
        (0, 3, 14),
        (0, 4, 6),
        (1, 2, 5),
        (1, 3, 2),
        (1, 4, 2),
        (2, 3, 4),
        (2, 4, 4),
        (3, 4, 2),
    ];
    EquisigType::from_intersections(chars, &entries).unwrap()
}
