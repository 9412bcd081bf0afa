use std::collections::HashMap;

use decos::oracle;
use decos::potentials::graph_log_prob;
use decos::{BackendSelection, ModelSpec, MoveKind, Sampler, SamplerConfig, VertexSet};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = ModelSpec> {
    prop_oneof![
        Just(ModelSpec::Uniform),
        (1usize..5).prop_map(|k| ModelSpec::MaxClique { k }),
        (0.0f64..3.0).prop_map(|alpha| ModelSpec::EdgePenalty { alpha }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lockstep_chains_stay_consistent(n in 2usize..11, seed in any::<u64>(), spec in model()) {
        let cfg = SamplerConfig { check_every: 25, ..SamplerConfig::new(n, 600, seed).with_model(spec) }
            .with_backend(BackendSelection::All);
        let mut s = Sampler::new(cfg).unwrap();
        let mut prev = 0usize;
        for _ in 0..600 {
            let r = s.step().unwrap();
            prop_assert!(!r.applied || (r.passed && r.legal == Some(true)));
            prop_assert_eq!(r.legal.is_some(), r.passed);
            let want = match (r.applied, r.kind) {
                (false, _) => prev,
                (true, MoveKind::Connect) => prev + 1,
                (true, MoveKind::Disconnect) => prev - 1,
            };
            prop_assert_eq!(r.edges, want);
            prev = r.edges;
            if let ModelSpec::MaxClique { k } = spec {
                let g = s.graph_state().unwrap().graph();
                prop_assert!(oracle::enumerate_cliques(g).iter().all(|c| c.len() <= k));
            }
        }
        for rep in s.representations() {
            prop_assert_eq!(rep.validate(), Ok(()));
        }
        let g = s.current_graph();
        prop_assert!(oracle::is_decomposable(&g));
        let model = spec.build::<f64>().unwrap();
        let seps: HashMap<VertexSet, usize> = oracle::separator_multiset(&g).unwrap().into_iter().collect();
        let fresh: f64 = graph_log_prob(&model, &oracle::enumerate_cliques(&g), &seps).unwrap();
        prop_assert!((s.log_pi() - fresh).abs() <= 1e-9 * fresh.abs().max(1.0));
    }

    #[test]
    fn restricted_search_leaves_the_trace_unchanged(n in 2usize..14, seed in any::<u64>()) {
        let plain = SamplerConfig::new(n, 800, seed);
        let restricted = SamplerConfig { restricted_search: true, ..plain.clone() };
        let a = Sampler::new(plain).unwrap().run().unwrap();
        let b = Sampler::new(restricted).unwrap().run().unwrap();
        prop_assert_eq!(a, b);
    }
}
