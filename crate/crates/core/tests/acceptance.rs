//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::time::{Duration, Instant};

use decos::oracle;
use decos::potentials::graph_log_prob;
use decos::report::{self, TraceWriter};
use decos::{
    BackendSelection, GraphState, ModelSpec, MoveKind, PotentialModel, Sampler, SamplerConfig, UndirectedGraph,
    VertexSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:.1?}, limit {limit:?}"))
}

/// Bit `k` set when the `k`-th pair in lexicographic order is an edge.
fn edge_mask(g: &UndirectedGraph) -> usize {
    let n = g.vertex_count();
    let mut mask = 0;
    let mut k = 0;
    for x in 0..n {
        for y in x + 1..n {
            if g.has_edge(x, y) {
                mask |= 1 << k;
            }
            k += 1;
        }
    }
    mask
}

/// Chordless cycle of length at least four, by brute force over vertex
/// subsets: the induced subgraph must be connected and 2-regular.
fn has_chordless_cycle(g: &UndirectedGraph) -> bool {
    let n = g.vertex_count();
    (0u32..1 << n).filter(|s| s.count_ones() >= 4).any(|s| {
        let members: Vec<usize> = (0..n).filter(|v| s & (1 << v) != 0).collect();
        let deg = |v: usize| members.iter().filter(|&&w| g.has_edge(v, w)).count();
        if members.iter().any(|&v| deg(v) != 2) {
            return false;
        }
        let mut seen = 1u32 << members[0];
        let mut stack = vec![members[0]];
        while let Some(v) = stack.pop() {
            for &w in &members {
                if g.has_edge(v, w) && seen & (1 << w) == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        seen == s
    })
}

/// log π from the oracle's clique and separator structure.
fn oracle_log_pi(model: &PotentialModel<f64>, g: &UndirectedGraph) -> f64 {
    let cliques = oracle::enumerate_cliques(g);
    let seps: HashMap<VertexSet, usize> = oracle::separator_multiset(g).unwrap().into_iter().collect();
    graph_log_prob(model, &cliques, &seps).unwrap()
}

fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn total_variation(counts: &HashMap<usize, u64>, target: &BTreeMap<usize, f64>, total: u64) -> f64 {
    let mut tv = 0.0;
    for (mask, p) in target {
        let q = *counts.get(mask).unwrap_or(&0) as f64 / total as f64;
        tv += (q - p).abs();
    }
    // Mass on states outside the target support.
    tv += counts
        .iter()
        .filter(|(m, _)| !target.contains_key(m))
        .map(|(_, &c)| c as f64 / total as f64)
        .sum::<f64>();
    tv / 2.0
}

fn legality_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut pairs, mut mismatches) = (0usize, 0usize);
    for _ in 0..500 {
        let n = rng.gen_range(2..=12);
        let steps = rng.gen_range(0..=400);
        let mut g = GraphState::trivial(n, PotentialModel::uniform()).unwrap();
        // Same walk, restricted separation search.
        let mut restricted = GraphState::trivial(n, PotentialModel::uniform())
            .unwrap()
            .with_restricted_search(true);
        for _ in 0..steps {
            let x = rng.gen_range(0..n);
            let y = (x + rng.gen_range(1..n)) % n;
            if g.graph().has_edge(x, y) {
                if g.legality_disconnect(x, y) {
                    g.apply_disconnect(x, y).unwrap();
                    restricted.apply_disconnect(x, y).unwrap();
                }
            } else if g.legality_connect(x, y) {
                g.apply_connect(x, y).unwrap();
                restricted.apply_connect(x, y).unwrap();
            }
        }
        check(oracle::is_decomposable(g.graph()), || {
            "walk left the decomposable graphs".into()
        })?;
        for x in 0..n {
            for y in x + 1..n {
                let want = oracle::legality_oracle(g.graph(), x, y);
                let (full, fast) = if g.graph().has_edge(x, y) {
                    (g.legality_disconnect(x, y), restricted.legality_disconnect(x, y))
                } else {
                    (g.legality_connect(x, y), restricted.legality_connect(x, y))
                };
                pairs += 1;
                mismatches += usize::from(full != want) + usize::from(fast != want);
            }
        }
    }
    check(mismatches == 0, || {
        format!("{mismatches} mismatches over {pairs} pairs")
    })?;
    within(Duration::from_secs(120), start)?;
    Ok(format!("{pairs} pairs, full and restricted search, 0 mismatches"))
}

fn lockstep() -> Outcome {
    let start = Instant::now();
    let cfg = SamplerConfig::new(50, 200_000, 7).with_backend(BackendSelection::All);
    let mut s = Sampler::new(cfg).map_err(|e| e.to_string())?;
    let mut applied = 0u64;
    s.run_with(|r| {
        applied += u64::from(r.applied);
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    s.check_agreement(0, 0).map_err(|e| e.to_string())?;
    within(Duration::from_secs(300), start)?;
    Ok(format!(
        "{applied} applied moves, {} edges at the end, all backends agree",
        s.edge_count()
    ))
}

fn bookkeeping() -> Outcome {
    let models = [
        ModelSpec::Uniform,
        ModelSpec::MaxClique { k: 3 },
        ModelSpec::EdgePenalty { alpha: 0.5 },
    ];
    let mut notes = Vec::new();
    for spec in models {
        let cfg = SamplerConfig::new(30, 100_000, 11).with_model(spec);
        let mut s = Sampler::new(cfg).map_err(|e| e.to_string())?;
        s.run_with(|_| Ok(())).map_err(|e| e.to_string())?;
        let state = s.graph_state().unwrap();
        let g = state.graph();
        let model = spec.build::<f64>().unwrap();
        let cliques: std::collections::BTreeSet<_> = state.clique_set().iter().cloned().collect();
        check(cliques == oracle::enumerate_cliques(g), || {
            format!("{spec:?}: clique set differs")
        })?;
        check(
            state.separator_counts() == oracle::separator_multiset(g).unwrap(),
            || format!("{spec:?}: separator multiset differs"),
        )?;
        let fresh = oracle_log_pi(&model, g);
        for (who, tracked) in [("state", state.log_pi()), ("sampler", s.log_pi())] {
            check(relative_close(tracked, fresh, 1e-9), || {
                format!("{spec:?}: {who} log π {tracked} vs recomputed {fresh}")
            })?;
        }
        notes.push(format!("{} edges", s.edge_count()));
    }
    Ok(format!(
        "uniform, max-clique 3, edge-penalty 0.5 match ({})",
        notes.join(", ")
    ))
}

/// Empirical TV distance between the n=4 chain and `target` (edge mask to
/// probability).
fn n4_tv(spec: ModelSpec, target: &BTreeMap<usize, f64>, iterations: u64) -> Result<f64, String> {
    let cfg = SamplerConfig::new(4, iterations, 99).with_model(spec);
    let mut s = Sampler::new(cfg).map_err(|e| e.to_string())?;
    let mut counts: HashMap<usize, u64> = HashMap::new();
    for _ in 0..iterations {
        s.step().map_err(|e| e.to_string())?;
        *counts.entry(edge_mask(s.graph_state().unwrap().graph())).or_default() += 1;
    }
    Ok(total_variation(&counts, target, iterations))
}

fn decomposable_n4() -> Result<Vec<UndirectedGraph>, String> {
    let all: Vec<_> = oracle::all_graphs(4).collect();
    for g in &all {
        check(oracle::is_decomposable(g) != has_chordless_cycle(g), || {
            format!("oracle and brute force disagree on {:?}", g.edges().collect::<Vec<_>>())
        })?;
    }
    let dec: Vec<_> = all.into_iter().filter(|g| !has_chordless_cycle(g)).collect();
    check(dec.len() == 61, || {
        format!("{} decomposable graphs on 4 vertices, expected 61", dec.len())
    })?;
    Ok(dec)
}

fn stationary_uniform() -> Outcome {
    let start = Instant::now();
    let dec = decomposable_n4()?;
    let target: BTreeMap<usize, f64> = dec.iter().map(|g| (edge_mask(g), 1.0 / 61.0)).collect();
    let tv = n4_tv(ModelSpec::Uniform, &target, 5_000_000)?;
    check(tv < 0.02, || format!("TV {tv:.5} over 61 graphs"))?;
    within(Duration::from_secs(120), start)?;
    Ok(format!("TV {tv:.5} over 61 graphs"))
}

fn stationary_edge_penalty() -> Outcome {
    let alpha = 1.0;
    let model = PotentialModel::edge_penalty(alpha);
    let dec = decomposable_n4()?;
    let weights: Vec<(usize, f64)> = dec
        .iter()
        .map(|g| {
            let lp = oracle_log_pi(&model, g);
            // The product form collapses to e^{-α|E|}.
            assert_eq!(lp, -alpha * g.edge_count() as f64);
            (edge_mask(g), lp.exp())
        })
        .collect();
    let z: f64 = weights.iter().map(|(_, w)| w).sum();
    let target: BTreeMap<usize, f64> = weights.into_iter().map(|(m, w)| (m, w / z)).collect();
    let tv = n4_tv(ModelSpec::EdgePenalty { alpha }, &target, 5_000_000)?;
    check(tv < 0.02, || format!("TV {tv:.5}"))?;
    Ok(format!("α = 1, TV {tv:.5} against exact π"))
}

fn structural_invariants() -> Outcome {
    let cfg = SamplerConfig::new(30, 100_000, 5).with_backend(BackendSelection::All);
    let mut s = Sampler::new(cfg).map_err(|e| e.to_string())?;
    let mut checked = 0u64;
    for _ in 0..100_000 {
        let r = s.step().map_err(|e| e.to_string())?;
        if r.applied {
            for rep in s.representations() {
                rep.validate()
                    .map_err(|e| format!("{} at iteration {}: {e}", rep.kind(), r.iteration))?;
            }
            checked += 1;
        }
    }
    Ok(format!(
        "all four structures valid after each of {checked} applied moves"
    ))
}

fn edge_penalty_algebra() -> Outcome {
    let alpha = 1.0;
    let model = PotentialModel::edge_penalty(alpha);
    let cfg = SamplerConfig::new(12, u64::MAX, 3).with_model(ModelSpec::EdgePenalty { alpha });
    let mut s = Sampler::new(cfg).map_err(|e| e.to_string())?;
    let (mut accepted, mut prev) = (0, 0.0);
    while accepted < 10_000 {
        let r = s.step().map_err(|e| e.to_string())?;
        if !r.applied {
            continue;
        }
        accepted += 1;
        let want = match r.kind {
            MoveKind::Connect => -alpha,
            MoveKind::Disconnect => alpha,
        };
        check(r.log_pi - prev == want, || {
            format!("iteration {}: Δ {} for {:?}", r.iteration, r.log_pi - prev, r.kind)
        })?;
        let state = s.graph_state().unwrap();
        check(state.log_pi() == r.log_pi, || {
            format!("iteration {}: tracked values differ", r.iteration)
        })?;
        let fresh = oracle_log_pi(&model, state.graph());
        check(fresh == r.log_pi, || {
            format!("iteration {}: oracle {fresh} vs {}", r.iteration, r.log_pi)
        })?;
        prev = r.log_pi;
    }
    Ok(format!("{accepted} applied moves, Δ log π = ∓α exactly"))
}

fn acceptance_trend() -> Outcome {
    let mut rates = Vec::new();
    for n in [50, 100, 200] {
        let mut s = Sampler::new(SamplerConfig::new(n, 1_000_000, 1)).map_err(|e| e.to_string())?;
        s.run_with(|_| Ok(())).map_err(|e| e.to_string())?;
        rates.push((n, s.acceptance().overall()));
    }
    let shown = rates
        .iter()
        .map(|(n, a)| format!("n={n}: {a:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    check(rates.windows(2).all(|w| w[1].1 < w[0].1), || shown.clone())?;
    Ok(shown)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = SamplerConfig::new(20, 50_000, 42)
        .with_model(ModelSpec::EdgePenalty { alpha: 0.3 })
        .with_backend(BackendSelection::Junction);
    let mut bytes = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        report::sample_to_dir(&cfg, &out).map_err(|e| e.to_string())?;
        bytes.push(fs::read(out.join(report::TRACE_FILE)).map_err(|e| e.to_string())?);
    }
    check(bytes[0] == bytes[1], || "trace files differ".into())?;
    let mut s = Sampler::new(cfg.with_backend(BackendSelection::Graph)).map_err(|e| e.to_string())?;
    let mut w = TraceWriter::new(Vec::new());
    s.run_with(|r| w.write(r)).map_err(|e| e.to_string())?;
    let graph_bytes = w.finish().map_err(|e| e.to_string())?;
    check(graph_bytes == bytes[0], || {
        "graph backend trace differs from junction trace".into()
    })?;
    Ok(format!("{} bytes identical across runs and backends", bytes[0].len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle legality equivalence", legality_equivalence),
        ("cross-representation lockstep", lockstep),
        ("bookkeeping integrity", bookkeeping),
        ("stationary distribution, uniform", stationary_uniform),
        ("stationary distribution, edge penalty", stationary_edge_penalty),
        ("structural invariants", structural_invariants),
        ("edge-penalty algebra", edge_penalty_algebra),
        ("acceptance-rate trend", acceptance_trend),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
