//! The ordered sequence of approximating curves.
//!
//! Walking the package tree in depth-first order visits the star points in
//! their total order. Each visited star point either consumes one shared
//! characteristic term of a package (an added semigroup generator) or splits
//! a package into its sub-packages, and defines a new approximating curve.
//! Star points that define no new curve (leftover free terms towards already
//! separated branches) are skipped.
//!
//! Every step records the variable substitution and the key-polynomial
//! factors it contributes, with exponent data drawn from the weight tables
//! and branch generators.

use super::model::{topological_model, PuiseuxTerm, TermKind, TopologicalModel};
use super::{
    intersection_from_contact, targets_intersect, validate_and_order, ContactPair, EquisigError,
    EquisigType, PackageNode,
};
use crate::semigroup::{chars_from_pairs, CharExponents};
use crate::series::{ExpVec, FactoredSeries, SeriesError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepKind {
    /// Generator added to an irreducible curve (common truncation chain).
    IrrGluing,
    /// Single separation of smooth branches with common contact.
    BaseSmooth,
    /// Single separation with at most one characteristic level per branch.
    BaseOnePair,
    /// First separation into packages.
    Sigma0Split,
    /// Generator added to one component.
    AddGenerator,
    /// Split at an ordinary separation point.
    SplitOrdinary,
    /// Split consuming characteristic terms of the singular packages.
    SplitWithGenerators,
    /// Generator added to a package of several branches.
    AddGeneratorMulti,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::IrrGluing => "irr-gluing",
            StepKind::BaseSmooth => "base-smooth",
            StepKind::BaseOnePair => "base-one-pair",
            StepKind::Sigma0Split => "sigma0-split",
            StepKind::AddGenerator => "add-generator",
            StepKind::SplitOrdinary => "split-ordinary",
            StepKind::SplitWithGenerators => "split-with-generators",
            StepKind::AddGeneratorMulti => "add-generator-multi",
        }
    }
}

/// A factor contributed by a step, over the arity after the step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FactorSpec {
    /// `Q(m, n, x, y) = ((y x^m)^n - 1)/(y x^m - 1)`
    Q {
        m: i128,
        n: i128,
        x: ExpVec,
        y: ExpVec,
    },
    /// `B(m, n, x, y, z) = (y x^m)^n z^m - 1`
    B {
        m: i128,
        n: i128,
        x: ExpVec,
        y: ExpVec,
        z: ExpVec,
    },
    /// `t^v - 1`
    Raw { v: ExpVec },
}

impl FactorSpec {
    pub fn to_factored(&self) -> Result<FactoredSeries, SeriesError> {
        match self {
            FactorSpec::Q { m, n, x, y } => crate::series::key_q(*m, *n, x, y),
            FactorSpec::B { m, n, x, y, z } => crate::series::key_b(*m, *n, x, y, z),
            FactorSpec::Raw { v } => FactoredSeries::factor(v.arity(), v.clone(), 1),
        }
    }
}

/// One package consumed by a step: its branch range in good order, the
/// winding of the consumed term, and whether that term was characteristic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StepPart {
    pub lo: usize,
    pub hi: usize,
    pub winding: i128,
    pub from_char: bool,
    pub term_numer: i128,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ApproxStep {
    pub star_id: String,
    pub kind: StepKind,
    /// Operated variable (component index before the step).
    pub var: usize,
    /// Substitution: old variable index to monomial over the new arity.
    pub substitution: Vec<ExpVec>,
    /// Key-polynomial factors over the new arity, in order.
    pub new_factors: Vec<FactorSpec>,
    pub parts: Vec<StepPart>,
    pub arity_before: usize,
    pub arity_after: usize,
}

struct Walk<'a> {
    et: &'a EquisigType,
    model: &'a TopologicalModel,
    next: Vec<usize>,
    chars_done: Vec<usize>,
    comps: Vec<(usize, usize)>,
    out: Vec<(ApproxStep, EquisigType)>,
}

impl<'a> Walk<'a> {
    fn term(&self, j: usize) -> Option<&PuiseuxTerm> {
        self.model.terms[j].get(self.next[j])
    }

    fn var_of(&self, lo: usize) -> usize {
        self.comps
            .iter()
            .position(|c| c.0 == lo)
            .expect("component present")
    }

    /// Product of windings of unconsumed terms of branch `j`.
    fn future_winding(&self, j: usize) -> i128 {
        self.model.terms[j][self.next[j]..]
            .iter()
            .map(|t| t.winding)
            .product()
    }

    /// Skips leading separation terms whose targets all left the package.
    fn skip_stale(&mut self, lo: usize, hi: usize) {
        for j in lo..hi {
            while let Some(t) = self.model.terms[j].get(self.next[j]) {
                match &t.kind {
                    TermKind::Separation(targets) if !targets_intersect(targets, lo, hi) => {
                        self.next[j] += 1;
                    }
                    _ => break,
                }
            }
        }
    }

    /// Exponent on the component holding branch `j0`, chosen so that later
    /// substitutions of that component land every branch on
    /// `[f_rep, f_j] / e` with `e` the rep's gcd value before this term.
    fn wout(&self, rep: usize, other: (usize, usize)) -> Result<i128, EquisigError> {
        let (olo, ohi) = other;
        let lev_e = self.et.branch(rep).e_at(self.chars_done[rep]);
        let j0 = olo;
        let denom = lev_e * self.future_winding(j0);
        let m = self.et.intersection(rep, j0);
        if m % denom != 0 {
            return Err(EquisigError::Internal(format!(
                "cross exponent [{}..{}] of branch {} is not integral",
                olo, ohi, rep
            )));
        }
        let w = m / denom;
        debug_assert!((olo..ohi)
            .all(|j| { self.et.intersection(rep, j) == w * lev_e * self.future_winding(j) }));
        Ok(w)
    }

    fn trunc_chars(&self, rep: usize) -> Result<CharExponents, EquisigError> {
        let pairs: Vec<(i128, i128)> = self.model.terms[rep][..self.next[rep]]
            .iter()
            .filter(|t| matches!(t.kind, TermKind::Characteristic(_)))
            .map(|t| (t.winding, t.numer))
            .collect();
        if pairs.is_empty() {
            return Ok(CharExponents::smooth());
        }
        chars_from_pairs(&pairs).map_err(EquisigError::from)
    }

    /// The current approximating curve: one branch per component, given by
    /// the consumed characteristic terms, with intersections read off the
    /// contact pairs.
    fn build_curve(&self) -> Result<EquisigType, EquisigError> {
        let chars: Vec<CharExponents> = self
            .comps
            .iter()
            .map(|&(lo, _)| self.trunc_chars(lo))
            .collect::<Result<_, _>>()?;
        if chars.len() == 1 {
            return Ok(EquisigType::single(chars.into_iter().next().unwrap()));
        }
        let branches: Vec<_> = chars.iter().map(crate::semigroup::gens_from_char).collect();
        let mut entries = Vec::new();
        for a in 0..self.comps.len() {
            for b in (a + 1)..self.comps.len() {
                let cp = self.et.contact(self.comps[a].0, self.comps[b].0);
                let m = intersection_from_contact(&branches[a], &branches[b], cp)?;
                entries.push((a, b, m));
            }
        }
        EquisigType::from_intersections(chars, &entries)
    }

    fn consume(&mut self, lo: usize, hi: usize, expect: (i128, i128)) -> Result<(), EquisigError> {
        for j in lo..hi {
            let t = self
                .term(j)
                .ok_or_else(|| EquisigError::Internal(format!("branch {} exhausted early", j)))?;
            if (t.winding, t.numer) != expect {
                return Err(EquisigError::Internal(format!(
                    "branch {} does not share the consumed term",
                    j
                )));
            }
            let is_char = matches!(t.kind, TermKind::Characteristic(_));
            self.next[j] += 1;
            if is_char {
                self.chars_done[j] += 1;
            }
        }
        Ok(())
    }

    fn add_generator_step(&mut self, var: usize, path: &str) -> Result<(), EquisigError> {
        let (lo, hi) = self.comps[var];
        let rep = lo;
        let term = self.term(rep).expect("term available").clone();
        debug_assert!(matches!(term.kind, TermKind::Characteristic(_)));
        let arity = self.comps.len();
        let p = term.winding;
        let w = term.weight;
        let mut y = ExpVec::zeros(arity);
        for o in 0..arity {
            if o != var {
                let wo = self.wout(rep, self.comps[o])?;
                y = y.add(&ExpVec::unit(arity, o).scale(wo));
            }
        }
        let q = FactorSpec::Q {
            m: w,
            n: p,
            x: ExpVec::unit(arity, var),
            y,
        };
        let substitution: Vec<ExpVec> = (0..arity)
            .map(|v| {
                let u = ExpVec::unit(arity, v);
                if v == var {
                    u.scale(p)
                } else {
                    u
                }
            })
            .collect();
        let kind = if arity == 1 {
            StepKind::IrrGluing
        } else if hi - lo == 1 {
            StepKind::AddGenerator
        } else {
            StepKind::AddGeneratorMulti
        };
        let star_id = if path.is_empty() {
            format!("alpha{}", self.chars_done[rep] + 1)
        } else {
            format!("alpha{}@{}", self.chars_done[rep] + 1, path)
        };
        self.consume(lo, hi, (term.winding, term.numer))?;
        let step = ApproxStep {
            star_id,
            kind,
            var,
            substitution,
            new_factors: vec![q],
            parts: vec![StepPart {
                lo,
                hi,
                winding: p,
                from_char: true,
                term_numer: term.numer,
            }],
            arity_before: arity,
            arity_after: arity,
        };
        let curve = self.build_curve()?;
        self.out.push((step, curve));
        Ok(())
    }

    fn split_step(
        &mut self,
        node: &PackageNode,
        var: usize,
        path: &str,
    ) -> Result<(), EquisigError> {
        let (lo, hi) = self.comps[var];
        let arity = self.comps.len();
        let s = node.children.len();
        let new_arity = arity + s - 1;
        let is_root = arity == 1;
        // New index of an old component.
        let remap = |v: usize| if v < var { v } else { v + s - 1 };
        // Gather per-child data before consuming anything.
        let mut parts = Vec::with_capacity(s);
        let mut windings = Vec::with_capacity(s);
        let mut weights = Vec::with_capacity(s);
        let mut cursor = lo;
        for child in &node.children {
            let clo = cursor;
            let chi = clo + child.branches.len();
            cursor = chi;
            debug_assert_eq!(child.branches[0], clo, "children contiguous in good order");
            let term = self
                .term(clo)
                .ok_or_else(|| EquisigError::Internal(format!("branch {} exhausted", clo)))?
                .clone();
            windings.push(term.winding);
            weights.push(term.weight);
            parts.push(StepPart {
                lo: clo,
                hi: chi,
                winding: term.winding,
                from_char: matches!(term.kind, TermKind::Characteristic(_)),
                term_numer: term.numer,
            });
        }
        if cursor != hi {
            return Err(EquisigError::Internal(
                "package children do not cover the component".into(),
            ));
        }
        // Cross exponents towards components outside the node.
        let mut outside: Vec<Vec<(usize, i128)>> = Vec::with_capacity(s);
        for part in &parts {
            let mut row = Vec::new();
            for o in 0..arity {
                if o != var {
                    row.push((remap(o), self.wout(part.lo, self.comps[o])?));
                }
            }
            outside.push(row);
        }
        let unit = |k: usize| ExpVec::unit(new_arity, var + k);
        let mut factors = Vec::with_capacity(s);
        // Q for the first sub-package.
        {
            let mut y = ExpVec::zeros(new_arity);
            for k in 1..s {
                y = y.add(&unit(k).scale(weights[k]));
            }
            for &(o, w) in &outside[0] {
                y = y.add(&ExpVec::unit(new_arity, o).scale(w));
            }
            factors.push(FactorSpec::Q {
                m: weights[0],
                n: windings[0],
                x: unit(0),
                y,
            });
        }
        // B for the later sub-packages; at the first separation the last
        // factor degenerates to a plain binomial.
        for l in 1..s {
            if is_root && l == s - 1 {
                let mut v = ExpVec::zeros(new_arity);
                for k in 0..s {
                    v = v.add(&unit(k).scale(windings[k]));
                }
                factors.push(FactorSpec::Raw {
                    v: v.scale(weights[s - 1]),
                });
            } else {
                let mut y = ExpVec::zeros(new_arity);
                for k in (l + 1)..s {
                    y = y.add(&unit(k).scale(weights[k]));
                }
                for &(o, w) in &outside[l] {
                    y = y.add(&ExpVec::unit(new_arity, o).scale(w));
                }
                let mut z = ExpVec::zeros(new_arity);
                for k in 0..l {
                    z = z.add(&unit(k).scale(windings[k]));
                }
                factors.push(FactorSpec::B {
                    m: weights[l],
                    n: windings[l],
                    x: unit(l),
                    y,
                    z,
                });
            }
        }
        let substitution: Vec<ExpVec> = (0..arity)
            .map(|v| {
                if v == var {
                    let mut m = ExpVec::zeros(new_arity);
                    for k in 0..s {
                        m = m.add(&unit(k).scale(windings[k]));
                    }
                    m
                } else {
                    ExpVec::unit(new_arity, remap(v))
                }
            })
            .collect();
        for part in &parts {
            self.consume(part.lo, part.hi, (part.winding, part.term_numer))?;
        }
        // Splice the component list.
        let children_ranges: Vec<(usize, usize)> = parts.iter().map(|p| (p.lo, p.hi)).collect();
        self.comps.splice(var..=var, children_ranges);
        let kind = if !is_root {
            if windings.iter().all(|&p| p == 1) {
                StepKind::SplitOrdinary
            } else {
                StepKind::SplitWithGenerators
            }
        } else {
            let all_singleton = parts.iter().all(|p| p.hi - p.lo == 1);
            let chars_left = (0..self.et.r()).any(|j| {
                self.model.terms[j][self.next[j]..]
                    .iter()
                    .any(|t| matches!(t.kind, TermKind::Characteristic(_)))
            });
            if all_singleton && !chars_left {
                if self.et.branches().iter().all(|b| b.is_smooth()) {
                    StepKind::BaseSmooth
                } else {
                    StepKind::BaseOnePair
                }
            } else {
                StepKind::Sigma0Split
            }
        };
        let star_id = if path.is_empty() {
            "sigma0".to_string()
        } else {
            format!("sigma0@{}", path)
        };
        let step = ApproxStep {
            star_id,
            kind,
            var,
            substitution,
            new_factors: factors,
            parts,
            arity_before: arity,
            arity_after: new_arity,
        };
        let curve = self.build_curve()?;
        self.out.push((step, curve));
        Ok(())
    }

    fn process(&mut self, node: &PackageNode, path: String) -> Result<(), EquisigError> {
        let lo = node.branches[0];
        let hi = lo + node.branches.len();
        if node.is_leaf() {
            loop {
                self.skip_stale(lo, hi);
                match self.term(lo) {
                    Some(t) if matches!(t.kind, TermKind::Characteristic(_)) => {
                        let var = self.var_of(lo);
                        self.add_generator_step(var, &path)?;
                    }
                    Some(_) => {
                        return Err(EquisigError::Internal(format!(
                            "unconsumed live separation term on branch {}",
                            lo
                        )))
                    }
                    None => break,
                }
            }
            return Ok(());
        }
        let ContactPair { q, c } = node.contact.unwrap();
        let shared = if c == 0 { q - 1 } else { q };
        while self.chars_done[lo] < shared {
            self.skip_stale(lo, hi);
            let var = self.var_of(lo);
            self.add_generator_step(var, &path)?;
        }
        self.skip_stale(lo, hi);
        let var = self.var_of(lo);
        self.split_step(node, var, &path)?;
        for (k, child) in node.children.iter().enumerate() {
            let child_path = if path.is_empty() {
                format!("I{}", k + 1)
            } else {
                format!("{}.I{}", path, k + 1)
            };
            self.process(child, child_path)?;
        }
        Ok(())
    }
}

/// Emits the totally ordered star-point steps and the approximating curve
/// after each. Branches and variables follow the refined good order; the
/// last curve equals the good-ordered input.
pub fn approximation_sequence(
    et: &EquisigType,
) -> Result<Vec<(ApproxStep, EquisigType)>, EquisigError> {
    let (perm, _) = validate_and_order(et)?;
    let ordered = et.reordered(&perm);
    let (tree_ordered, model) = {
        let (perm2, tree) = validate_and_order(&ordered)?;
        debug_assert!(perm2.iter().enumerate().all(|(a, &b)| a == b));
        (tree, topological_model(&ordered)?)
    };
    let r = ordered.r();
    let mut walk = Walk {
        et: &ordered,
        model: &model,
        next: vec![0; r],
        chars_done: vec![0; r],
        comps: vec![(0, r)],
        out: Vec::new(),
    };
    walk.process(&tree_ordered.root, String::new())?;
    for j in 0..r {
        if walk.next[j] != model.terms[j].len() {
            return Err(EquisigError::Internal(format!(
                "branch {} has unconsumed terms after the walk",
                j
            )));
        }
    }
    Ok(walk.out)
}

/// Separation-term offset of a consumed term relative to a truncation:
/// the contact pair between the post-step and pre-step component curves.
pub fn step_contact(
    before: &crate::semigroup::PlaneBranch,
    after: &crate::semigroup::PlaneBranch,
    part: &StepPart,
) -> ContactPair {
    let q = before.genus();
    if part.from_char {
        let cap = super::free_capacity(after, q).expect("characteristic term bounds the run");
        ContactPair::new(q, cap + 1)
    } else {
        let c = if q == 0 {
            part.term_numer
        } else {
            part.term_numer - before.chars().exponents()[q]
        };
        ContactPair::new(q, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::CharExponents;

    fn fixture_ordered() -> EquisigType {
        let et = super::super::five_branch_fixture();
        let (perm, _) = validate_and_order(&et).unwrap();
        et.reordered(&perm)
    }

    #[test]
    fn irreducible_chain() {
        let et = EquisigType::single(CharExponents::new(vec![4, 6, 13]).unwrap());
        let steps = approximation_sequence(&et).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(steps.iter().all(|(s, _)| s.kind == StepKind::IrrGluing));
        assert_eq!(steps[0].1.branch(0).gens(), &[2, 3]);
        assert_eq!(steps[1].1, et);
    }

    #[test]
    fn fixture_three_steps() {
        let et = fixture_ordered();
        let steps = approximation_sequence(&et).unwrap();
        assert_eq!(steps.len(), 3);
        assert_eq!(steps[0].0.kind, StepKind::Sigma0Split);
        assert_eq!(steps[0].0.star_id, "sigma0");
        assert_eq!(steps[1].0.kind, StepKind::SplitWithGenerators);
        assert_eq!(steps[1].0.star_id, "sigma0@I1");
        assert_eq!(steps[2].0.kind, StepKind::SplitWithGenerators);
        assert_eq!(steps[2].0.star_id, "sigma0@I2");
        // branch counts: 3, 4, 5
        assert_eq!(steps[0].1.r(), 3);
        assert_eq!(steps[1].1.r(), 4);
        assert_eq!(steps[2].1.r(), 5);
        // the last curve is the input
        assert_eq!(steps[2].1, et);
        // branch count increases sum to r - 1
        let increase: usize = steps
            .iter()
            .map(|(s, _)| s.arity_after - s.arity_before)
            .sum();
        assert_eq!(increase, et.r() - 1);
    }

    #[test]
    fn base_smooth_single_step() {
        // three smooth branches, common contact (0, 2)
        let chars = vec![
            CharExponents::smooth(),
            CharExponents::smooth(),
            CharExponents::smooth(),
        ];
        let entries = [(0usize, 1usize, 2i128), (0, 2, 2), (1, 2, 2)];
        let et = EquisigType::from_intersections(chars, &entries).unwrap();
        let steps = approximation_sequence(&et).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].0.kind, StepKind::BaseSmooth);
    }

    #[test]
    fn base_one_pair_single_step() {
        // smooth + (2,5) + (2,5) with contacts (0,3)/(1,0): a single
        // separation consumes everything
        let chars = vec![
            CharExponents::smooth(),
            CharExponents::new(vec![2, 5]).unwrap(),
            CharExponents::new(vec![2, 5]).unwrap(),
        ];
        let entries = [(0usize, 1usize, 5i128), (0, 2, 5), (1, 2, 10)];
        let et = EquisigType::from_intersections(chars, &entries).unwrap();
        let steps = approximation_sequence(&et).unwrap();
        assert_eq!(steps.len(), 1);
        let (step, curve) = &steps[0];
        assert_eq!(step.kind, StepKind::BaseOnePair);
        assert_eq!(step.parts.len(), 3);
        assert_eq!(curve, &et);
    }
}
