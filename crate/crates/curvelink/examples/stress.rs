use curvelink::pipelines::{alexander_iterative, poincare_factorization, poincare_iterative};
use curvelink::resolution_graph::build;
use curvelink::sampling::{random_curve, SampleLimits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51A);
    let limits = SampleLimits {
        max_genus: 3,
        max_mult: 8,
    };
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2000);
    let mut max_terms = 0usize;
    for idx in 0..n {
        let r = rng.gen_range(2..=5);
        let et = random_curve(&mut rng, r, &limits);
        let g = build(&et).unwrap_or_else(|e| panic!("graph failed on {}: {}", idx, e));
        let f = poincare_factorization(&g).unwrap_or_else(|e| panic!("fact {}: {}", idx, e));
        let i = poincare_iterative(&et, None).unwrap_or_else(|e| panic!("iter {}: {}", idx, e));
        let a = alexander_iterative(&et, None).unwrap_or_else(|e| panic!("alex {}: {}", idx, e));
        let pf = f.expanded.as_polynomial().unwrap();
        let pi = i.expanded.as_polynomial().unwrap();
        let pa = a.expanded.as_polynomial().unwrap();
        assert_eq!(pf, pi, "fact != iter on sample {}", idx);
        assert_eq!(pi, pa, "iter != alex on sample {}", idx);
        assert!(pi.reciprocal_sign().is_some(), "reciprocity on {}", idx);
        max_terms = max_terms.max(pi.num_terms());
        if idx % 500 == 0 {
            eprintln!("... {} done (max terms {})", idx, max_terms);
        }
    }
    println!(
        "stress: {} samples agree across all three pipelines (max {} terms)",
        n, max_terms
    );
}
