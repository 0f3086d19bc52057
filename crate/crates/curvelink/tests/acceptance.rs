//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them all).

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use curvelink::equisingularity::{
    approximation_sequence, contact_pair, validate_and_order, EquisigType,
};
use curvelink::pipelines::{
    alexander_iterative, poincare_factorization, poincare_irreducible, poincare_iterative,
};
use curvelink::resolution_graph::build;
use curvelink::sampling::{random_chars, random_curve, SampleLimits};
use curvelink::semigroup::{
    conductor_and_symmetry, gens_from_char, indicator_series, CharExponents,
};
use curvelink::series::{ExpVec, FactoredSeries, SparsePoly};

fn five_branch_fixture() -> EquisigType {
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

fn factored(arity: usize, factors: &[(&[i128], i64)]) -> FactoredSeries {
    let mut f = FactoredSeries::one(arity);
    for (v, e) in factors {
        f.push_factor(ExpVec::new(v.to_vec()), *e).unwrap();
    }
    f
}

#[test]
fn criterion_1_five_branch_fixture_exact_match() {
    let start = Instant::now();
    let reference = factored(
        5,
        &[
            (&[2, 6, 2, 4, 2], 2),
            (&[14, 42, 6, 12, 6], 1),
            (&[4, 12, 5, 10, 4], 1),
            (&[1, 3, 1, 2, 1], -1),
        ],
    )
    .expand_polynomial()
    .unwrap();
    let et = five_branch_fixture();
    let fact = poincare_factorization(&build(&et).unwrap()).unwrap();
    let iter = poincare_iterative(&et, None).unwrap();
    let alex = alexander_iterative(&et, None).unwrap();
    assert_eq!(fact.expanded.as_polynomial().unwrap(), &reference);
    assert_eq!(iter.expanded.as_polynomial().unwrap(), &reference);
    assert_eq!(alex.expanded.as_polynomial().unwrap(), &reference);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {:?}", elapsed);
    println!(
        "criterion 1 (paper fixture, 3 pipelines exact): PASS ({:?})",
        elapsed
    );
}

#[test]
fn criterion_2_intermediate_approximations() {
    let et = five_branch_fixture();
    let iter = poincare_iterative(&et, None).unwrap();
    let expect1 = factored(3, &[(&[2, 2, 2], 2), (&[1, 1, 1], -1)]);
    let expect2 = factored(
        4,
        &[
            (&[2, 6, 2, 2], 2),
            (&[14, 42, 6, 6], 1),
            (&[1, 3, 1, 1], -1),
        ],
    );
    assert_eq!(iter.trace[1].after, expect1);
    assert_eq!(iter.trace[2].after, expect2);
    println!("criterion 2 (intermediate approximations exact): PASS");
}

#[test]
fn criterion_3_irreducible_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let limits = SampleLimits {
        max_genus: 3,
        max_mult: 12,
    };
    let mut checked = 0;
    while checked < 50 {
        let chars = random_chars(&mut rng, &limits);
        if chars.is_smooth() && checked % 3 != 0 {
            continue; // keep mostly singular branches in the corpus
        }
        let b = gens_from_char(&chars);
        let (conductor, _) = conductor_and_symmetry(&b.semigroup()).unwrap();
        let n = conductor as usize + 10;
        let p = poincare_irreducible(&chars, Some(n)).unwrap();
        let series = p.expanded.as_series().unwrap();
        let indicator = indicator_series(&b.semigroup(), n);
        for (k, c) in series.iter().enumerate() {
            assert_eq!(
                c,
                &BigInt::from(indicator[k]),
                "indicator mismatch for {:?} at degree {}",
                chars.exponents(),
                k
            );
        }
        // (t - 1) P(t) equals the Alexander series
        let et = EquisigType::single(chars.clone());
        let alex = alexander_iterative(&et, Some(n)).unwrap();
        let delta = alex.expanded.as_series().unwrap();
        for k in 0..=n {
            let mut expect = series[k].clone();
            if k > 0 {
                expect -= &series[k - 1];
            }
            assert_eq!(
                delta[k],
                expect,
                "alexander identity fails for {:?} at degree {}",
                chars.exponents(),
                k
            );
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {:?}", elapsed);
    println!(
        "criterion 3 (irreducible oracle, {} branches): PASS ({:?})",
        checked, elapsed
    );
}

fn random_corpus() -> Vec<EquisigType> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let limits = SampleLimits {
        max_genus: 2,
        max_mult: 6,
    };
    let mut corpus = Vec::new();
    while corpus.len() < 100 {
        let r = rng.gen_range(2..=4);
        corpus.push(random_curve(&mut rng, r, &limits));
    }
    corpus
}

#[test]
fn criterion_4_cross_pipeline_property_suite() {
    let start = Instant::now();
    let corpus = random_corpus();
    for (idx, et) in corpus.iter().enumerate() {
        let fact = poincare_factorization(&build(et).unwrap())
            .unwrap_or_else(|e| panic!("factorization failed on sample {}: {}", idx, e));
        let iter = poincare_iterative(et, None)
            .unwrap_or_else(|e| panic!("iterative failed on sample {}: {}", idx, e));
        let alex = alexander_iterative(et, None)
            .unwrap_or_else(|e| panic!("alexander failed on sample {}: {}", idx, e));
        let pf = fact.expanded.as_polynomial().unwrap();
        let pi = iter.expanded.as_polynomial().unwrap();
        let pa = alex.expanded.as_polynomial().unwrap();
        assert_eq!(pf, pi, "factorization != iterative on sample {}", idx);
        assert_eq!(pi, pa, "iterative != alexander on sample {}", idx);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {:?}", elapsed);
    println!(
        "criterion 4 (cross-pipeline agreement on {} samples): PASS ({:?})",
        corpus.len(),
        elapsed
    );
}

#[test]
fn criterion_5_invariant_suite() {
    let start = Instant::now();
    let corpus = random_corpus();
    for (idx, et) in corpus.iter().enumerate() {
        // contact/intersection round-trip on every pair
        for i in 0..et.r() {
            for j in (i + 1)..et.r() {
                let cp = contact_pair(et.branch(i), et.branch(j), et.intersection(i, j)).unwrap();
                assert_eq!(cp, et.contact(i, j), "contact round-trip on sample {}", idx);
            }
        }
        // branch semigroups are symmetric
        for b in et.branches() {
            let (_, symmetric) = conductor_and_symmetry(&b.semigroup()).unwrap();
            assert!(symmetric, "asymmetric branch semigroup on sample {}", idx);
        }
        // ordering is idempotent and the ordered leaves are contiguous
        let (perm, _) = validate_and_order(et).unwrap();
        let ordered = et.reordered(&perm);
        let (perm2, _) = validate_and_order(&ordered).unwrap();
        assert!(
            perm2.iter().enumerate().all(|(a, &b)| a == b),
            "good order not idempotent on sample {}",
            idx
        );
        // contiguity of packages: in good order, the contact of an outer
        // pair is the minimum over the pairs between them
        for i in 0..ordered.r() {
            for j in (i + 1)..ordered.r() {
                for k in (j + 1)..ordered.r() {
                    let expect = ordered.contact(i, j).min(ordered.contact(j, k));
                    assert_eq!(
                        ordered.contact(i, k),
                        expect,
                        "nesting fails at ({}, {}, {}) on sample {}",
                        i,
                        j,
                        k,
                        idx
                    );
                }
            }
        }
        // graph invariants: dead-arc multiple law, Noether reproduction,
        // and one star per characteristic level of each branch
        let g = build(et).unwrap();
        for arc in g.below_arcs().iter().chain(g.tilde_arcs()) {
            let rho = &g.vertex(arc.rho).value;
            let sigma = &g.vertex(arc.sigma).value;
            assert!(rho
                .iter()
                .zip(sigma)
                .all(|(r0, s0)| *s0 == r0 * arc.multiple));
        }
        g.check_intersections(&ordered).unwrap();
        for (i, b) in ordered.branches().iter().enumerate() {
            for k in 1..=b.genus() {
                let expect = b.n_sequence()[k - 1] * b.gens()[k];
                assert!(
                    g.vertices().iter().any(|v| v.value[i] == expect),
                    "no star realizes generator {} of branch {} on sample {}",
                    k,
                    i,
                    idx
                );
            }
        }
        // the approximation sequence ends on the input curve and grows the
        // branch count to r
        let steps = approximation_sequence(&ordered).unwrap();
        assert_eq!(&steps.last().unwrap().1, &ordered, "sample {}", idx);
        let increase: usize = steps
            .iter()
            .map(|(s, _)| s.arity_after - s.arity_before)
            .sum();
        assert_eq!(increase, et.r() - 1, "sample {}", idx);
        // exact divisibility (expansion succeeds), reciprocity, traces
        // replay, and both pipelines share the same denominators with the
        // first-divisor binomial among them
        let iter = poincare_iterative(et, None).unwrap();
        assert!(
            iter.replay_trace().unwrap(),
            "trace replay on sample {}",
            idx
        );
        let poly = iter.expanded.as_polynomial().unwrap();
        if !poly.is_zero() {
            assert!(
                poly.reciprocal_sign().is_some(),
                "reciprocity fails on sample {}",
                idx
            );
        }
        let fact = poincare_factorization(&g).unwrap();
        let (_, den_i) = iter.factored.split();
        let (_, den_f) = fact.factored.split();
        assert_eq!(den_i, den_f, "denominators differ on sample {}", idx);
        // the first-divisor binomial is the denominator, unless it cancels
        // against the first separation point sitting on the first divisor
        if g.sigma0() != g.origin() {
            let origin = ExpVec::new(g.vertex(g.origin()).value.to_vec());
            assert!(
                den_i.iter().any(|(v, e)| *v == origin && *e == 1),
                "first-divisor denominator missing on sample {}",
                idx
            );
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 5 (invariant suite on {} samples): PASS ({:?})",
        corpus.len(),
        elapsed
    );
}

#[test]
fn criterion_6_trefoil() {
    let et = EquisigType::single(CharExponents::new(vec![2, 3]).unwrap());
    let alex = alexander_iterative(&et, None).unwrap();
    let delta = alex.expanded.as_polynomial().unwrap();
    let mut expect = SparsePoly::zero(1);
    expect.add_term(ExpVec::new(vec![2]), BigInt::from(1));
    expect.add_term(ExpVec::new(vec![1]), BigInt::from(-1));
    expect.add_term(ExpVec::new(vec![0]), BigInt::from(1));
    assert_eq!(delta, &expect);
    // series identity (t - 1) P = Delta up to degree 32
    let n = 32;
    let p = poincare_irreducible(et.branch(0).chars(), Some(n)).unwrap();
    let series = p.expanded.as_series().unwrap();
    let delta_series = alexander_iterative(&et, Some(n)).unwrap();
    let delta_series = delta_series.expanded.as_series().unwrap();
    for k in 0..=n {
        let mut lhs = series[k].clone();
        if k > 0 {
            lhs -= &series[k - 1];
        }
        assert_eq!(lhs, delta_series[k]);
        if k > 2 {
            assert!(delta_series[k].is_zero());
        }
    }
    println!("criterion 6 (trefoil): PASS");
}
