//! Every greedy decision is re-derived from scratch: accepted edges must come
//! with a working witness, rejected edges must survive every fault set.

use itertools::Itertools;

use ft_spanner::blocking::extract_blocking_set;
use ft_spanner::generators::{complete_graph, cycle_graph, petersen, random_graph, WeightDist};
use ft_spanner::graph::{shortest_path_dist, FaultMode, FaultSet, Graph};
use ft_spanner::io::{format_trace, parse_trace};
use ft_spanner::spanner::{ft_greedy_spanner, Decision, SpannerParams};
use ft_spanner::verifier::{verify_ft_spanner, VerifyStrategy};
use ft_spanner::Error;

fn all_faults(g: &Graph, f: usize, mode: FaultMode) -> Vec<FaultSet> {
    let mut out = Vec::new();
    for size in 0..=f {
        match mode {
            FaultMode::Vertex => out.extend((0..g.n()).combinations(size).map(FaultSet::vertices)),
            FaultMode::Edge => out.extend(
                g.edges()
                    .iter()
                    .map(|e| e.pair())
                    .combinations(size)
                    .map(FaultSet::edges),
            ),
        }
    }
    out
}

fn replay_decisions(g: &Graph, params: SpannerParams) {
    let r = ft_greedy_spanner(g, params).unwrap();
    let mut prefix = Graph::empty(g.n());
    let k = params.stretch;
    for entry in &r.trace.entries {
        let (u, v, w) = (entry.edge.u, entry.edge.v, entry.edge.weight);
        let stretched =
            |faults: &FaultSet| shortest_path_dist(&prefix, u, v, faults).unwrap().as_f64() > k * w * (1.0 + 1e-12);
        match &entry.decision {
            Decision::Accepted(witness) => {
                assert!(witness.len() <= params.faults);
                assert!(!witness.contains_vertex(u) && !witness.contains_vertex(v));
                assert!(stretched(witness), "witness {witness} does not stretch {u}-{v}");
                // minimum size: no strictly smaller set works
                let smaller = all_faults(&prefix, witness.len().saturating_sub(1), params.mode);
                if !witness.is_empty() {
                    assert!(
                        !smaller
                            .iter()
                            .filter(|f| !f.contains_vertex(u) && !f.contains_vertex(v))
                            .any(&stretched),
                        "a smaller witness exists for {u}-{v}"
                    );
                }
                prefix = Graph::new(g.n(), prefix.edges().iter().copied().chain([entry.edge])).unwrap();
            }
            Decision::Rejected => {
                for f in all_faults(&prefix, params.faults, params.mode) {
                    if f.contains_vertex(u) || f.contains_vertex(v) {
                        continue;
                    }
                    assert!(!stretched(&f), "{u}-{v} rejected but {f} stretches it");
                }
            }
        }
    }
    assert!(prefix.same_edges(&r.spanner));
}

fn corpus() -> Vec<Graph> {
    let mut gs = vec![complete_graph(6), cycle_graph(7).unwrap(), petersen()];
    for seed in 0..6 {
        gs.push(random_graph(8, 0.6, seed, WeightDist::Uniform { lo: 1.0, hi: 3.0 }).unwrap());
        gs.push(random_graph(8, 0.5, 100 + seed, WeightDist::Unit).unwrap());
    }
    gs
}

#[test]
fn decisions_match_brute_force() {
    for g in corpus() {
        for f in 0..=2 {
            for mode in [FaultMode::Vertex, FaultMode::Edge] {
                for k in [1.0, 3.0, 5.0] {
                    replay_decisions(&g, SpannerParams::new(k, f, mode).unwrap());
                }
            }
        }
    }
}

#[test]
fn dropping_the_last_accepted_edge_is_caught() {
    // The last accepted edge has no later edges to compensate, so its witness
    // fault set breaks the spanner once the edge is gone.
    for g in corpus() {
        for mode in [FaultMode::Vertex, FaultMode::Edge] {
            let params = SpannerParams::new(3.0, 1, mode).unwrap();
            let r = ft_greedy_spanner(&g, params).unwrap();
            let Some(last) = r.trace.accepted().last().map(|(e, _)| *e) else {
                continue;
            };
            let broken = r.spanner.filter_edges(|e| e.pair() != last.pair());
            let report = verify_ft_spanner(&g, &broken, params, VerifyStrategy::Exhaustive).unwrap();
            assert!(!report.ok, "removing {} went unnoticed", last.pair());
        }
    }
}

#[test]
fn tampered_traces_are_rejected() {
    let r = ft_greedy_spanner(&complete_graph(5), SpannerParams::vertex(3.0, 1).unwrap()).unwrap();
    let text = format_trace(&r.trace);
    // a witness naming an endpoint of its own edge
    let bad = text.replacen("1 2 1 ACCEPT F: 0", "1 2 1 ACCEPT F: 1", 1);
    assert_ne!(bad, text);
    assert!(matches!(parse_trace(&bad), Err(Error::MalformedTrace(_))));
    // a witness larger than f
    let bad = text.replacen("1 2 1 ACCEPT F: 0", "1 2 1 ACCEPT F: 0 3", 1);
    assert!(parse_trace(&bad).is_err());
}

#[test]
fn edge_witness_must_be_in_the_prefix() {
    let r = ft_greedy_spanner(&complete_graph(5), SpannerParams::edge(3.0, 1).unwrap()).unwrap();
    let mut trace = r.trace.clone();
    let idx = trace
        .entries
        .iter()
        .position(|e| matches!(&e.decision, Decision::Accepted(w) if !w.is_empty()))
        .unwrap();
    // point the witness at an edge that is accepted later (or never)
    let later = trace.entries[idx + 1..]
        .iter()
        .map(|e| e.edge.pair())
        .next_back()
        .unwrap();
    trace.entries[idx].decision = Decision::Accepted(FaultSet::edges([later]));
    assert!(extract_blocking_set(&trace).is_err());
}
