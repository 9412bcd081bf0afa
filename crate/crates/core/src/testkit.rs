//! Shared helpers for the backend unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::fixtures::{A, B, C, D};
use crate::potentials::PotentialModel;
use crate::rep_graph::GraphState;
use crate::repr::Representation;
use crate::set::VertexId;

/// Builds the two-triangle graph through legal connections only.
pub const TWO_TRIANGLES: [(VertexId, VertexId); 5] = [(B, C), (A, B), (A, C), (B, D), (C, D)];

/// Connects each pair in turn; every connection must be legal.
pub fn connect_all(rep: &mut dyn Representation, edges: &[(VertexId, VertexId)]) {
    for &(x, y) in edges {
        let (sxy, adjacent) = rep.find_sxy(x, y);
        assert!(!adjacent, "({x}, {y}) already present");
        let r = rep.connect_if_enabled(x, y, &sxy).unwrap();
        assert!(r.applied, "connecting ({x}, {y}) was rejected");
    }
}

pub fn lockstep_walk<R: Representation>(rep: &mut R, steps: usize, seed: u64, validate: bool) {
    lockstep_walk_with(rep, steps, seed, |r| {
        if validate {
            r.validate().unwrap();
        }
    });
}

/// Drives `rep` and a graph backend with the same uniform-model proposals,
/// asserting identical `S_xy`, decisions and graphs. `check` runs after
/// every applied move.
pub fn lockstep_walk_with<R: Representation>(rep: &mut R, steps: usize, seed: u64, mut check: impl FnMut(&R)) {
    let n = rep.vertex_count();
    let mut reference = GraphState::<f64, _>::trivial(n, PotentialModel::uniform()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for step in 0..steps {
        let x = rng.gen_range(0..n);
        let y = (x + rng.gen_range(1..n)) % n;
        let (sxy, adjacent) = reference.find_sxy(x, y);
        assert_eq!(
            rep.find_sxy(x, y),
            (sxy.clone(), adjacent),
            "find_sxy({x}, {y}) at step {step}"
        );
        assert_eq!(rep.has_edge(x, y), adjacent);
        let (ours, theirs) = if adjacent {
            let cxy = sxy.with(x).with(y);
            (
                rep.disconnect_if_enabled(x, y, &cxy).unwrap(),
                reference.disconnect_if_enabled(x, y, &cxy).unwrap(),
            )
        } else {
            (
                rep.connect_if_enabled(x, y, &sxy).unwrap(),
                reference.connect_if_enabled(x, y, &sxy).unwrap(),
            )
        };
        assert_eq!(ours, theirs, "decision on ({x}, {y}) at step {step}");
        if ours.applied {
            check(rep);
            assert_eq!(&rep.export_graph(), reference.graph(), "graphs differ at step {step}");
            assert_eq!(rep.cliques(), reference.cliques());
        }
    }
}
