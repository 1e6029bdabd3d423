//! Ground-truth stretch checks by explicit enumeration.
//!
//! A pair that is disconnected in `G \ F` imposes no constraint, and in
//! vertex mode a pair with a faulted endpoint does not exist in `G \ F`.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use rand::seq::index::sample;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{FaultMode, FaultSet, Graph, PathSearch, StretchCmp, VertexId, VertexPair};
use crate::seed::{derive_seed, rng_from};
use crate::spanner::SpannerParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyStrategy {
    Exhaustive,
    /// `trials` uniformly random fault sets of size exactly `f`.
    Sampled {
        trials: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StretchReport {
    pub ok: bool,
    /// `None` when no pair was constrained (e.g. fewer than two vertices).
    pub worst_pair: Option<(VertexId, VertexId)>,
    /// Largest observed `dist_H / dist_G`, infinite if `H \ F` disconnects a
    /// pair that `G \ F` connects. `1.0` when nothing was constrained.
    pub worst_stretch: f64,
    /// Fault set under which the worst pair was observed.
    pub witness_faults: FaultSet,
    pub fault_sets_checked: usize,
    /// Set for sampled passes: absence of a counterexample is evidence, not proof.
    pub evidence_only: bool,
}

impl StretchReport {
    pub const CSV_HEADER: &'static str = "verdict,stretch,faults,s,t,fault_sets,evidence_only";

    fn fmt_stretch(&self) -> String {
        if self.worst_stretch.is_infinite() {
            "inf".into()
        } else {
            format!("{}", self.worst_stretch)
        }
    }

    fn fmt_pair(&self) -> (String, String) {
        match self.worst_pair {
            Some((s, t)) => (s.to_string(), t.to_string()),
            None => ("-".into(), "-".into()),
        }
    }

    pub fn csv_row(&self) -> String {
        let (s, t) = self.fmt_pair();
        format!(
            "{},{},\"{}\",{},{},{},{}",
            if self.ok { "OK" } else { "FAIL" },
            self.fmt_stretch(),
            self.witness_faults,
            s,
            t,
            self.fault_sets_checked,
            self.evidence_only
        )
    }
}

/// `OK|FAIL stretch=<val> F=<members> pair=<s>,<t>`
impl fmt::Display for StretchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, t) = self.fmt_pair();
        write!(
            f,
            "{} stretch={} F={} pair={},{}",
            if self.ok { "OK" } else { "FAIL" },
            self.fmt_stretch(),
            self.witness_faults,
            s,
            t
        )
    }
}

/// One observed pair, ordered so that the "worst" candidate is the maximum:
/// larger stretch first, then the lexicographically smaller `(F, s, t)`.
#[derive(Debug, Clone)]
struct Observation {
    stretch: f64,
    faults: FaultSet,
    s: VertexId,
    t: VertexId,
}

fn worse(a: &Observation, b: &Observation) -> Ordering {
    a.stretch
        .total_cmp(&b.stretch)
        .then_with(|| (&b.faults, b.s, b.t).cmp(&(&a.faults, a.s, a.t)))
}

fn pick(a: Option<Observation>, b: Option<Observation>) -> Option<Observation> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if worse(&a, &b) == Ordering::Less { b } else { a }),
        (a, b) => a.or(b),
    }
}

#[derive(Debug, Clone, Default)]
struct Outcome {
    worst: Option<Observation>,
    worst_violation: Option<Observation>,
}

impl Outcome {
    fn merge(self, other: Outcome) -> Outcome {
        Outcome {
            worst: pick(self.worst, other.worst),
            worst_violation: pick(self.worst_violation, other.worst_violation),
        }
    }
}

struct Checker<'a> {
    g: &'a Graph,
    h: &'a Graph,
    stretch: f64,
    cmp: StretchCmp,
}

impl Checker<'_> {
    fn under(&self, faults: &FaultSet, gs: &mut PathSearch, hs: &mut PathSearch) -> Outcome {
        gs.apply(self.g, faults, true);
        hs.apply(self.h, faults, true);
        let mut out = Outcome::default();
        for s in self.g.vertices() {
            if faults.contains_vertex(s) {
                continue;
            }
            let dg = gs.distances_from(self.g, s);
            let dh = hs.distances_from(self.h, s);
            for t in (s.index() + 1)..self.g.n() {
                if faults.contains_vertex(VertexId(t)) || dg[t].is_infinite() {
                    continue;
                }
                let obs = Observation {
                    stretch: dh[t] / dg[t],
                    faults: faults.clone(),
                    s,
                    t: VertexId(t),
                };
                let violated = self.cmp.exceeds(dh[t], self.stretch * dg[t]);
                if violated {
                    out.worst_violation = pick(out.worst_violation.take(), Some(obs.clone()));
                }
                out.worst = pick(out.worst.take(), Some(obs));
            }
        }
        gs.apply(self.g, faults, false);
        hs.apply(self.h, faults, false);
        out
    }

    fn run(&self, fault_sets: &[FaultSet], mode: FaultMode, evidence_only: bool) -> StretchReport {
        let n = self.g.n();
        let outcome = fault_sets
            .par_iter()
            .map_init(
                || (PathSearch::new(n), PathSearch::new(n)),
                |(gs, hs), f| self.under(f, gs, hs),
            )
            .reduce(Outcome::default, Outcome::merge);
        let ok = outcome.worst_violation.is_none();
        let chosen = outcome.worst_violation.or(outcome.worst);
        match chosen {
            Some(obs) => StretchReport {
                ok,
                worst_pair: Some((obs.s, obs.t)),
                worst_stretch: obs.stretch,
                witness_faults: obs.faults,
                fault_sets_checked: fault_sets.len(),
                evidence_only: evidence_only && ok,
            },
            None => StretchReport {
                ok,
                worst_pair: None,
                worst_stretch: 1.0,
                witness_faults: FaultSet::empty(mode),
                fault_sets_checked: fault_sets.len(),
                evidence_only: evidence_only && ok,
            },
        }
    }
}

fn check_inputs(g: &Graph, h: &Graph, stretch: f64) -> Result<()> {
    if !(stretch.is_finite() && stretch >= 1.0) {
        return Err(Error::InvalidParams(format!("stretch must be >= 1, got {stretch}")));
    }
    h.check_subgraph_of(g)
}

/// Is `h` a `stretch`-spanner of `g`?
pub fn verify_spanner(g: &Graph, h: &Graph, stretch: f64) -> Result<StretchReport> {
    check_inputs(g, h, stretch)?;
    let checker = Checker {
        g,
        h,
        stretch,
        cmp: StretchCmp::for_graph(g, stretch),
    };
    Ok(checker.run(&[FaultSet::empty(FaultMode::Vertex)], FaultMode::Vertex, false))
}

/// Is `h` an `f`-fault-tolerant `stretch`-spanner of `g`?
pub fn verify_ft_spanner(
    g: &Graph,
    h: &Graph,
    params: SpannerParams,
    strategy: VerifyStrategy,
) -> Result<StretchReport> {
    check_inputs(g, h, params.stretch)?;
    let fault_sets = match strategy {
        VerifyStrategy::Exhaustive => all_fault_sets(g, params.faults, params.mode),
        VerifyStrategy::Sampled { trials, seed } => sampled_fault_sets(g, params.faults, params.mode, trials, seed),
    };
    let checker = Checker {
        g,
        h,
        stretch: params.stretch,
        cmp: StretchCmp::for_graph(g, params.stretch),
    };
    Ok(checker.run(
        &fault_sets,
        params.mode,
        matches!(strategy, VerifyStrategy::Sampled { .. }),
    ))
}

fn fault_universe_size(g: &Graph, mode: FaultMode) -> usize {
    match mode {
        FaultMode::Vertex => g.n(),
        FaultMode::Edge => g.edge_count(),
    }
}

/// Every fault set of size at most `f`, by size then lexicographically.
pub fn all_fault_sets(g: &Graph, f: usize, mode: FaultMode) -> Vec<FaultSet> {
    let mut out = Vec::new();
    match mode {
        FaultMode::Vertex => {
            for size in 0..=f.min(g.n()) {
                out.extend(g.vertices().combinations(size).map(FaultSet::vertices));
            }
        }
        FaultMode::Edge => {
            let pairs = g.sorted_pairs();
            for size in 0..=f.min(pairs.len()) {
                out.extend(pairs.iter().copied().combinations(size).map(FaultSet::edges));
            }
        }
    }
    out
}

fn sampled_fault_sets(g: &Graph, f: usize, mode: FaultMode, trials: usize, seed: u64) -> Vec<FaultSet> {
    let universe = fault_universe_size(g, mode);
    let size = f.min(universe);
    let pairs: Vec<VertexPair> = if mode == FaultMode::Edge {
        g.sorted_pairs()
    } else {
        Vec::new()
    };
    (0..trials)
        .map(|i| {
            let mut rng = rng_from(derive_seed(seed, i as u64));
            let picked = sample(&mut rng, universe, size).into_vec();
            match mode {
                FaultMode::Vertex => FaultSet::vertices(picked),
                FaultMode::Edge => FaultSet::edges(picked.into_iter().map(|i| pairs[i])),
            }
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Approximate pair checks for exhaustive verification:
/// `sum_{i <= f} C(N, i) * n^2`.
pub fn exhaustive_cost(g: &Graph, params: &SpannerParams) -> u128 {
    let universe = fault_universe_size(g, params.mode);
    let sets: u128 = (0..=params.faults.min(universe))
        .map(|i| binomial(universe, i))
        .fold(0u128, u128::saturating_add);
    sets.saturating_mul((g.n() as u128).pow(2))
}

/// Refuses exhaustive verification above `budget` pair checks.
pub fn check_budget(g: &Graph, params: &SpannerParams, budget: u128) -> Result<u128> {
    let estimate = exhaustive_cost(g, params);
    if estimate > budget {
        Err(Error::OverBudget { estimate, budget })
    } else {
        Ok(estimate)
    }
}
