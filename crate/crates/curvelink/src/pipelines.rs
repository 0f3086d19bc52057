//! The three computations of the Poincare series / Alexander polynomial and
//! their cross-verification.
//!
//! * `poincare_factorization` reads the factors off the dual graph: the
//!   first-divisor denominator, the dead-arc quotients below and above the
//!   first separation point, and one `(t^v - 1)^{s-1}` per star.
//! * `poincare_iterative` folds the approximation sequence, multiplying the
//!   key-polynomial factors recorded by each step (exponents from the weight
//!   tables and branch generators).
//! * `alexander_iterative` folds the same sequence as a satellization chain,
//!   but derives every exponent from linking numbers: intersection tables of
//!   the approximating curves and pairings of consecutive truncations.
//!
//! For several branches all three must agree exactly; for one branch the
//! series identity `(t - 1) P(t) = Delta(t)` holds instead.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::equisingularity::{
    approximation_sequence, intersection_from_contact, step_contact, validate_and_order,
    EquisigError, EquisigType,
};
use crate::resolution_graph::{build, DualGraph, GraphError};
use crate::semigroup::{
    conductor_and_symmetry, gens_from_char, indicator_series, CharExponents, SemigroupError,
};
use crate::series::{key_b, key_p, key_q, Exp, ExpVec, FactoredSeries, SeriesError, SparsePoly};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Equisig(#[from] EquisigError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("pipeline step {id}: {detail}")]
    Step { id: String, detail: String },
    #[error("the graph factorization needs at least two branches")]
    NeedsSeveralBranches,
}

/// Default extra truncation past the conductor for one-branch series.
pub const DEFAULT_MARGIN: usize = 16;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expanded {
    Polynomial(SparsePoly),
    Series(Vec<BigInt>),
}

impl Expanded {
    pub fn as_polynomial(&self) -> Option<&SparsePoly> {
        match self {
            Expanded::Polynomial(p) => Some(p),
            Expanded::Series(_) => None,
        }
    }

    pub fn as_series(&self) -> Option<&[BigInt]> {
        match self {
            Expanded::Series(s) => Some(s),
            Expanded::Polynomial(_) => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceStep {
    pub id: String,
    /// Substitution applied to the accumulated series before multiplying.
    pub substitution: Option<Vec<ExpVec>>,
    /// Factors contributed by this step.
    pub factors: FactoredSeries,
    /// Accumulated factored series after the step.
    pub after: FactoredSeries,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PipelineResult {
    pub factored: FactoredSeries,
    pub expanded: Expanded,
    pub trace: Vec<TraceStep>,
}

impl PipelineResult {
    /// Re-runs the recorded trace from the empty product and checks it
    /// reproduces the factored result.
    pub fn replay_trace(&self) -> Result<bool, SeriesError> {
        let mut acc = FactoredSeries::one(1);
        for step in &self.trace {
            if let Some(sub) = &step.substitution {
                acc = acc.substitute(sub)?;
            }
            acc = acc.mul(&step.factors)?;
        }
        Ok(acc == self.factored)
    }
}

fn default_truncation(c: &CharExponents) -> Result<usize, PipelineError> {
    let s = gens_from_char(c).semigroup();
    let (conductor, _) = conductor_and_symmetry(&s)?;
    Ok(conductor as usize + DEFAULT_MARGIN)
}

/// One-variable Poincare series of an irreducible branch: the product of
/// `P(g_j/e_j, n_j, t^{e_j})` over the generators, divided by `t - 1`.
pub fn poincare_irreducible(
    c: &CharExponents,
    truncation: Option<usize>,
) -> Result<PipelineResult, PipelineError> {
    let b = gens_from_char(c);
    let n = match truncation {
        Some(n) => n,
        None => default_truncation(c)?,
    };
    let mut factored = FactoredSeries::factor(1, ExpVec::new(vec![1]), -1)?;
    for j in 1..=b.genus() {
        let scale = b.e_at(j);
        let x = ExpVec::new(vec![scale as Exp]);
        let m = b.gens()[j] / b.e_at(j);
        let factor = key_p(m, b.n_sequence()[j - 1], &x)?;
        factored = factored.mul(&factor)?;
    }
    let expanded = Expanded::Series(factored.expand_series(n)?);
    let trace = vec![TraceStep {
        id: "irreducible-chain".to_string(),
        substitution: None,
        factors: factored.clone(),
        after: factored.clone(),
    }];
    Ok(PipelineResult {
        factored,
        expanded,
        trace,
    })
}

/// Poincare series from the dual graph (several branches).
pub fn poincare_factorization(g: &DualGraph) -> Result<PipelineResult, PipelineError> {
    if g.r() < 2 {
        return Err(PipelineError::NeedsSeveralBranches);
    }
    let arity = g.r();
    let vec_of = |value: &[i128]| ExpVec::new(value.to_vec());
    let mut trace = Vec::new();
    let mut acc = FactoredSeries::one(arity);

    let mut p1 = FactoredSeries::one(arity);
    p1.push_factor(vec_of(&g.vertex(g.origin()).value), -1)?;
    for arc in g.below_arcs() {
        p1.push_factor(vec_of(&g.vertex(arc.sigma).value), 1)?;
        p1.push_factor(vec_of(&g.vertex(arc.rho).value), -1)?;
    }
    p1.push_factor(vec_of(&g.vertex(g.sigma0()).value), 1)?;
    acc = acc.mul(&p1)?;
    trace.push(TraceStep {
        id: "P1".to_string(),
        substitution: None,
        factors: p1,
        after: acc.clone(),
    });

    let mut p2 = FactoredSeries::one(arity);
    for arc in g.tilde_arcs() {
        p2.push_factor(vec_of(&g.vertex(arc.sigma).value), 1)?;
        p2.push_factor(vec_of(&g.vertex(arc.rho).value), -1)?;
    }
    acc = acc.mul(&p2)?;
    trace.push(TraceStep {
        id: "P2".to_string(),
        substitution: None,
        factors: p2,
        after: acc.clone(),
    });

    let mut p3 = FactoredSeries::one(arity);
    for v in g.vertices() {
        if v.s > 1 {
            p3.push_factor(vec_of(&v.value), (v.s - 1) as i64)?;
        }
    }
    acc = acc.mul(&p3)?;
    trace.push(TraceStep {
        id: "P3".to_string(),
        substitution: None,
        factors: p3,
        after: acc.clone(),
    });

    let expanded = Expanded::Polynomial(acc.expand_polynomial()?);
    Ok(PipelineResult {
        factored: acc,
        expanded,
        trace,
    })
}

fn fold_steps<F>(
    et: &EquisigType,
    base: FactoredSeries,
    truncation: Option<usize>,
    mut step_factors: F,
) -> Result<PipelineResult, PipelineError>
where
    F: FnMut(
        &crate::equisingularity::ApproxStep,
        &EquisigType,
        &EquisigType,
    ) -> Result<FactoredSeries, PipelineError>,
{
    let steps = approximation_sequence(et)?;
    let mut acc = base.clone();
    let mut trace = vec![TraceStep {
        id: "base".to_string(),
        substitution: None,
        factors: base,
        after: acc.clone(),
    }];
    let mut prev = EquisigType::single(CharExponents::smooth());
    for (step, after_curve) in &steps {
        let factors = step_factors(step, &prev, after_curve).map_err(|e| PipelineError::Step {
            id: step.star_id.clone(),
            detail: e.to_string(),
        })?;
        acc = acc.substitute(&step.substitution)?;
        acc = acc.mul(&factors)?;
        trace.push(TraceStep {
            id: step.star_id.clone(),
            substitution: Some(step.substitution.clone()),
            factors,
            after: acc.clone(),
        });
        prev = after_curve.clone();
    }
    let expanded = if et.r() == 1 {
        let n = match truncation {
            Some(n) => n,
            None => default_truncation(et.branch(0).chars())?,
        };
        Expanded::Series(acc.expand_series(n)?)
    } else {
        Expanded::Polynomial(acc.expand_polynomial()?)
    };
    Ok(PipelineResult {
        factored: acc,
        expanded,
        trace,
    })
}

/// Poincare series by folding the approximation sequence; exponents come
/// from the weight tables recorded in the steps.
pub fn poincare_iterative(
    et: &EquisigType,
    truncation: Option<usize>,
) -> Result<PipelineResult, PipelineError> {
    let base = FactoredSeries::factor(1, ExpVec::new(vec![1]), -1)?;
    fold_steps(et, base, truncation, |step, _before, _after| {
        let mut fs = FactoredSeries::one(step.arity_after);
        for spec in &step.new_factors {
            fs = fs.mul(&spec.to_factored()?)?;
        }
        Ok(fs)
    })
}

/// Multivariable Alexander polynomial by the same satellization order, with
/// every exponent derived from linking numbers: raw intersection entries of
/// the previous approximating curve and pairings of consecutive truncations.
pub fn alexander_iterative(
    et: &EquisigType,
    truncation: Option<usize>,
) -> Result<PipelineResult, PipelineError> {
    let base = FactoredSeries::one(1);
    let result = fold_steps(et, base, None, |step, before, after| {
        alexander_step(step, before, after)
    })?;
    // One branch: the Alexander polynomial is a genuine polynomial; expand
    // it exactly, and additionally as a series when a truncation is wanted.
    if et.r() == 1 {
        let expanded = match truncation {
            Some(n) => Expanded::Series(result.factored.expand_series(n)?),
            None => Expanded::Polynomial(result.factored.expand_polynomial()?),
        };
        return Ok(PipelineResult {
            factored: result.factored,
            expanded,
            trace: result.trace,
        });
    }
    Ok(result)
}

fn alexander_step(
    step: &crate::equisingularity::ApproxStep,
    before: &EquisigType,
    after: &EquisigType,
) -> Result<FactoredSeries, PipelineError> {
    let var = step.var;
    let s = step.parts.len();
    let arity = step.arity_after;
    let before_b = before.branch(var);
    // Cable pairing of each new component with the component it satellizes:
    // the intersection of consecutive truncation curves.
    let mut link = Vec::with_capacity(s);
    for (k, part) in step.parts.iter().enumerate() {
        let after_b = after.branch(var + k);
        let cp = step_contact(before_b, after_b, part);
        link.push(intersection_from_contact(after_b, before_b, cp)?);
    }
    let windings: Vec<i128> = step.parts.iter().map(|p| p.winding).collect();
    // Linking numbers with the untouched components: raw entries of the
    // previous curve's intersection table.
    let remap = |o: usize| if o < var { o } else { o + s - 1 };
    let outside: Vec<(usize, i128)> = (0..before.r())
        .filter(|&o| o != var)
        .map(|o| (remap(o), before.intersection(var, o)))
        .collect();
    let unit = |k: usize| ExpVec::unit(arity, var + k);
    let outside_vec = || {
        let mut y = ExpVec::zeros(arity);
        for &(o, a) in &outside {
            y = y.add(&ExpVec::unit(arity, o).scale(a));
        }
        y
    };
    if s == 1 {
        if step.arity_before == 1 {
            // knot chain: cabling multiplies by the model torus-knot factor
            return Ok(key_p(link[0], windings[0], &ExpVec::unit(1, 0))?);
        }
        let q = key_q(link[0], windings[0], &unit(0), &outside_vec())?;
        return Ok(q);
    }
    let is_root = step.arity_before == 1;
    let mut fs = FactoredSeries::one(arity);
    {
        let mut y = ExpVec::zeros(arity);
        for k in 1..s {
            y = y.add(&unit(k).scale(link[k]));
        }
        y = y.add(&outside_vec());
        fs = fs.mul(&key_q(link[0], windings[0], &unit(0), &y)?)?;
    }
    for l in 1..s {
        if is_root && l == s - 1 {
            let mut y = ExpVec::zeros(arity);
            for k in 0..l {
                y = y.add(&unit(k).scale(windings[k]));
            }
            fs = fs.mul(&key_q(windings[l], link[l], &unit(l), &y)?)?;
        } else {
            let mut y = ExpVec::zeros(arity);
            for k in (l + 1)..s {
                y = y.add(&unit(k).scale(link[k]));
            }
            y = y.add(&outside_vec());
            let mut z = ExpVec::zeros(arity);
            for k in 0..l {
                z = z.add(&unit(k).scale(windings[k]));
            }
            fs = fs.mul(&key_b(link[l], windings[l], &unit(l), &y, &z)?)?;
        }
    }
    Ok(fs)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerifyComparison {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerifyReport {
    /// Good order as original 1-based branch indices.
    pub order: Vec<usize>,
    pub comparisons: Vec<VerifyComparison>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.comparisons.iter().all(|c| c.pass)
    }
}

fn compare_polys(label: &str, a: &SparsePoly, b: &SparsePoly) -> VerifyComparison {
    match a.first_difference(b) {
        None => VerifyComparison {
            label: label.to_string(),
            pass: true,
            detail: format!("{} terms", a.num_terms()),
        },
        Some((v, ca, cb)) => VerifyComparison {
            label: label.to_string(),
            pass: false,
            detail: format!("first difference at t^{:?}: {} vs {}", v.coords(), ca, cb),
        },
    }
}

fn compare_series(label: &str, a: &[BigInt], b: &[BigInt]) -> VerifyComparison {
    let n = a.len().min(b.len());
    for k in 0..n {
        if a[k] != b[k] {
            return VerifyComparison {
                label: label.to_string(),
                pass: false,
                detail: format!("first difference at degree {}: {} vs {}", k, a[k], b[k]),
            };
        }
    }
    VerifyComparison {
        label: label.to_string(),
        pass: true,
        detail: format!("agree to degree {}", n - 1),
    }
}

/// Runs every applicable pipeline and reports the pairwise comparisons.
pub fn verify(et: &EquisigType, truncation: Option<usize>) -> Result<VerifyReport, PipelineError> {
    let (perm, _) = validate_and_order(et)?;
    let order: Vec<usize> = perm.iter().map(|&i| i + 1).collect();
    let mut comparisons = Vec::new();
    if et.r() == 1 {
        let chars = et.branch(0).chars();
        let n = match truncation {
            Some(n) => n,
            None => default_truncation(chars)?,
        };
        let irr = poincare_irreducible(chars, Some(n))?;
        let iter = poincare_iterative(et, Some(n))?;
        let alex = alexander_iterative(et, Some(n))?;
        let irr_series = irr.expanded.as_series().unwrap();
        let ind: Vec<BigInt> = indicator_series(&gens_from_char(chars).semigroup(), n)
            .into_iter()
            .map(BigInt::from)
            .collect();
        comparisons.push(compare_series(
            "poincare(irreducible) == semigroup indicator",
            irr_series,
            &ind,
        ));
        comparisons.push(compare_series(
            "poincare(iterative) == poincare(irreducible)",
            iter.expanded.as_series().unwrap(),
            irr_series,
        ));
        // (t - 1) P(t) = Delta(t), in the (1 - t) normalization
        let mut shifted = vec![BigInt::zero(); n + 1];
        for k in 0..=n {
            let mut v = irr_series[k].clone();
            if k > 0 {
                v -= &irr_series[k - 1];
            }
            shifted[k] = v;
        }
        comparisons.push(compare_series(
            "(t - 1) * poincare == alexander",
            &shifted,
            alex.expanded.as_series().unwrap(),
        ));
    } else {
        let graph = build(et)?;
        let fact = poincare_factorization(&graph)?;
        let iter = poincare_iterative(et, None)?;
        let alex = alexander_iterative(et, None)?;
        let pf = fact.expanded.as_polynomial().unwrap();
        let pi = iter.expanded.as_polynomial().unwrap();
        let pa = alex.expanded.as_polynomial().unwrap();
        comparisons.push(compare_polys(
            "poincare(factorization) == poincare(iterative)",
            pf,
            pi,
        ));
        comparisons.push(compare_polys("poincare(iterative) == alexander", pi, pa));
    }
    Ok(VerifyReport { order, comparisons })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::equal_up_to_unit;

    fn fixture() -> EquisigType {
        crate::equisingularity::five_branch_fixture()
    }

    fn expand(f: &FactoredSeries) -> SparsePoly {
        f.expand_polynomial().unwrap()
    }

    fn fixture_reference() -> SparsePoly {
        let mut f = FactoredSeries::one(5);
        f.push_factor(ExpVec::new(vec![2, 6, 2, 4, 2]), 2).unwrap();
        f.push_factor(ExpVec::new(vec![14, 42, 6, 12, 6]), 1)
            .unwrap();
        f.push_factor(ExpVec::new(vec![4, 12, 5, 10, 4]), 1)
            .unwrap();
        f.push_factor(ExpVec::new(vec![1, 3, 1, 2, 1]), -1).unwrap();
        expand(&f)
    }

    #[test]
    fn trefoil_alexander() {
        let et = EquisigType::single(CharExponents::new(vec![2, 3]).unwrap());
        let alex = alexander_iterative(&et, None).unwrap();
        let p = alex.expanded.as_polynomial().unwrap();
        assert_eq!(p.render(), "t1^2 - t1 + 1");
    }

    #[test]
    fn irreducible_matches_indicator() {
        for beta in [vec![2, 3], vec![3, 14], vec![4, 6, 13], vec![4, 6, 7]] {
            let chars = CharExponents::new(beta).unwrap();
            let b = gens_from_char(&chars);
            let (conductor, _) = conductor_and_symmetry(&b.semigroup()).unwrap();
            let n = conductor as usize + 10;
            let p = poincare_irreducible(&chars, Some(n)).unwrap();
            let series = p.expanded.as_series().unwrap();
            let ind = indicator_series(&b.semigroup(), n);
            for (k, c) in series.iter().enumerate() {
                assert_eq!(*c, BigInt::from(ind[k]));
            }
        }
    }

    #[test]
    fn fixture_all_pipelines_agree() {
        let et = fixture();
        let reference = fixture_reference();
        let g = build(&et).unwrap();
        let fact = poincare_factorization(&g).unwrap();
        assert_eq!(fact.expanded.as_polynomial().unwrap(), &reference);
        let iter = poincare_iterative(&et, None).unwrap();
        assert_eq!(iter.expanded.as_polynomial().unwrap(), &reference);
        let alex = alexander_iterative(&et, None).unwrap();
        assert_eq!(alex.expanded.as_polynomial().unwrap(), &reference);
    }

    #[test]
    fn fixture_intermediate_steps() {
        // P_{sigma0} and P_{sigma0^{I1}} as in the worked example.
        let et = fixture();
        let iter = poincare_iterative(&et, None).unwrap();
        // trace[0] is the base; steps follow
        let step1 = &iter.trace[1].after;
        let mut expect1 = FactoredSeries::one(3);
        expect1.push_factor(ExpVec::new(vec![2, 2, 2]), 2).unwrap();
        expect1.push_factor(ExpVec::new(vec![1, 1, 1]), -1).unwrap();
        assert_eq!(step1, &expect1);
        let step2 = &iter.trace[2].after;
        let mut expect2 = FactoredSeries::one(4);
        expect2
            .push_factor(ExpVec::new(vec![2, 6, 2, 2]), 2)
            .unwrap();
        expect2
            .push_factor(ExpVec::new(vec![14, 42, 6, 6]), 1)
            .unwrap();
        expect2
            .push_factor(ExpVec::new(vec![1, 3, 1, 1]), -1)
            .unwrap();
        assert_eq!(step2, &expect2);
    }

    #[test]
    fn fixture_alexander_intermediates_match() {
        // for several branches the link polynomial agrees with the series
        // at every approximation stage, not just at the end
        let et = fixture();
        let alex = alexander_iterative(&et, None).unwrap();
        let iter = poincare_iterative(&et, None).unwrap();
        for k in 1..iter.trace.len() {
            assert_eq!(alex.trace[k].after, iter.trace[k].after, "stage {}", k);
        }
    }

    #[test]
    fn trace_replays() {
        let et = fixture();
        for r in [
            poincare_iterative(&et, None).unwrap(),
            alexander_iterative(&et, None).unwrap(),
        ] {
            assert!(r.replay_trace().unwrap());
        }
    }

    #[test]
    fn transversal_lines_trivial() {
        let et = EquisigType::from_intersections(
            vec![CharExponents::smooth(), CharExponents::smooth()],
            &[(0, 1, 1)],
        )
        .unwrap();
        let g = build(&et).unwrap();
        let fact = poincare_factorization(&g).unwrap();
        assert_eq!(fact.expanded.as_polynomial().unwrap(), &SparsePoly::one(2));
        let iter = poincare_iterative(&et, None).unwrap();
        assert_eq!(iter.expanded.as_polynomial().unwrap(), &SparsePoly::one(2));
    }

    #[test]
    fn smooth_common_contact_closed_form() {
        // r smooth branches with common contact c: the closed form is
        // ((t_1...t_r)^c - 1)^{r-1} / (t_1...t_r - 1).
        for (r, c) in [(2usize, 3i128), (3, 2), (4, 1)] {
            let chars = vec![CharExponents::smooth(); r];
            let mut entries = Vec::new();
            for i in 0..r {
                for j in (i + 1)..r {
                    entries.push((i, j, c));
                }
            }
            let et = EquisigType::from_intersections(chars, &entries).unwrap();
            let mut expect = FactoredSeries::one(r);
            expect
                .push_factor(ExpVec::new(vec![c; r]), (r - 1) as i64)
                .unwrap();
            expect.push_factor(ExpVec::new(vec![1; r]), -1).unwrap();
            let expect = expand(&expect);
            let iter = poincare_iterative(&et, None).unwrap();
            assert_eq!(iter.expanded.as_polynomial().unwrap(), &expect);
            let fact = poincare_factorization(&build(&et).unwrap()).unwrap();
            assert_eq!(fact.expanded.as_polynomial().unwrap(), &expect);
            let alex = alexander_iterative(&et, None).unwrap();
            assert_eq!(alex.expanded.as_polynomial().unwrap(), &expect);
        }
    }

    #[test]
    fn one_pair_base_case_closed_form() {
        // smooth + (2,5) + (2,5) meeting at the characteristic window:
        // P = (t1^5 t2^10 t3^10 - 1)^2 / (t1 t2^2 t3^2 - 1), worked out by
        // hand from the dead-end and star values (5,10,10) over (1,2,2).
        let chars = vec![
            CharExponents::smooth(),
            CharExponents::new(vec![2, 5]).unwrap(),
            CharExponents::new(vec![2, 5]).unwrap(),
        ];
        let et =
            EquisigType::from_intersections(chars, &[(0, 1, 5), (0, 2, 5), (1, 2, 10)]).unwrap();
        let mut expect = FactoredSeries::one(3);
        expect.push_factor(ExpVec::new(vec![5, 10, 10]), 2).unwrap();
        expect.push_factor(ExpVec::new(vec![1, 2, 2]), -1).unwrap();
        let expect = expand(&expect);
        for result in [
            poincare_iterative(&et, None).unwrap(),
            poincare_factorization(&build(&et).unwrap()).unwrap(),
            alexander_iterative(&et, None).unwrap(),
        ] {
            assert_eq!(result.expanded.as_polynomial().unwrap(), &expect);
        }
    }

    #[test]
    fn stacked_singular_packages_closed_form() {
        // (2,5) and (3,7) separating at their shared maximal-contact point:
        // two stacked stars over the dead end (5,7) give
        // P = (t1^10 t2^14 - 1)(t1^14 t2^21 - 1) /
        //     ((t1^2 t2^3 - 1)(t1^5 t2^7 - 1)), worked out by hand.
        let chars = vec![
            CharExponents::new(vec![2, 5]).unwrap(),
            CharExponents::new(vec![3, 7]).unwrap(),
        ];
        let et = EquisigType::from_intersections(chars, &[(0, 1, 14)]).unwrap();
        let mut expect = FactoredSeries::one(2);
        expect.push_factor(ExpVec::new(vec![10, 14]), 1).unwrap();
        expect.push_factor(ExpVec::new(vec![14, 21]), 1).unwrap();
        expect.push_factor(ExpVec::new(vec![2, 3]), -1).unwrap();
        expect.push_factor(ExpVec::new(vec![5, 7]), -1).unwrap();
        let expect = expand(&expect);
        for result in [
            poincare_iterative(&et, None).unwrap(),
            poincare_factorization(&build(&et).unwrap()).unwrap(),
            alexander_iterative(&et, None).unwrap(),
        ] {
            assert_eq!(result.expanded.as_polynomial().unwrap(), &expect);
        }
    }

    #[test]
    fn reciprocity_and_denominators() {
        let et = fixture();
        let iter = poincare_iterative(&et, None).unwrap();
        let fact = poincare_factorization(&build(&et).unwrap()).unwrap();
        assert!(iter
            .expanded
            .as_polynomial()
            .unwrap()
            .reciprocal_sign()
            .is_some());
        let (_, den_i) = iter.factored.split();
        let (_, den_f) = fact.factored.split();
        assert_eq!(den_i, den_f);
        assert_eq!(den_i.len(), 1);
        assert_eq!(den_i[0].0.coords(), &[1, 3, 1, 2, 1]);
    }

    #[test]
    fn verify_reports() {
        let report = verify(&fixture(), None).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.order, vec![4, 1, 2, 3, 5]);

        let trefoil = EquisigType::single(CharExponents::new(vec![2, 3]).unwrap());
        let report = verify(&trefoil, Some(32)).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.comparisons.len(), 3);

        let deep = EquisigType::single(CharExponents::new(vec![3, 14]).unwrap());
        assert!(verify(&deep, None).unwrap().all_pass());
    }

    #[test]
    fn alexander_equals_unit_normalized_external() {
        // (2,5) torus knot: Delta = (t^10-1)(t-1)/((t^2-1)(t^5-1))
        let et = EquisigType::single(CharExponents::new(vec![2, 5]).unwrap());
        let alex = alexander_iterative(&et, None).unwrap();
        let p = alex.expanded.as_polynomial().unwrap();
        let direct = key_p(5, 2, &ExpVec::new(vec![1]))
            .unwrap()
            .expand_polynomial()
            .unwrap();
        assert!(equal_up_to_unit(p, &direct));
        assert_eq!(p, &direct);
    }
}
