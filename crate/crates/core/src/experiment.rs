//! Size-scaling sweeps over `(n, f)` at a fixed stretch, with log-log fits.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{random_graph, WeightDist};
use crate::graph::{FaultMode, Graph};
use crate::seed::derive_seed;
use crate::spanner::{ft_greedy_spanner_with, SpannerParams, WitnessOracle};
use crate::verifier::{check_budget, verify_ft_spanner, VerifyStrategy};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphFamily {
    Complete(WeightDist),
    Random { p: f64, weights: WeightDist },
}

impl GraphFamily {
    pub fn build(&self, n: usize, seed: u64) -> Result<Graph> {
        match *self {
            GraphFamily::Complete(w) => random_graph(n, 1.0, seed, w),
            GraphFamily::Random { p, weights } => random_graph(n, p, seed, weights),
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::Complete(w) => write!(f, "complete:{w}"),
            GraphFamily::Random { p, weights } => write!(f, "random:{p}:{weights}"),
        }
    }
}

impl FromStr for GraphFamily {
    type Err = Error;

    /// `complete[:<weights>]` or `random:<p>[:<weights>]`, where `<weights>`
    /// is `unit` or `uniform:lo:hi`.
    fn from_str(s: &str) -> Result<Self> {
        let weights = |rest: Option<&str>| rest.map_or(Ok(WeightDist::Unit), str::parse);
        if let Some(rest) = s.strip_prefix("complete") {
            return match rest {
                "" => Ok(GraphFamily::Complete(WeightDist::Unit)),
                r => Ok(GraphFamily::Complete(weights(r.strip_prefix(':'))?)),
            };
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let (p, w) = match rest.split_once(':') {
                Some((p, w)) => (p, Some(w)),
                None => (rest, None),
            };
            let p = p
                .parse()
                .map_err(|_| Error::InvalidParams(format!("bad edge probability in `{s}`")))?;
            return Ok(GraphFamily::Random {
                p,
                weights: weights(w)?,
            });
        }
        Err(Error::InvalidParams(format!(
            "unknown graph family `{s}`; expected complete[:weights] or random:p[:weights]"
        )))
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub family: GraphFamily,
    pub n_values: Vec<usize>,
    pub f_values: Vec<usize>,
    pub stretch: f64,
    pub mode: FaultMode,
    /// Independent graphs per `n`; graph `r` uses seed `derive_seed(seed, r)`
    /// and is shared across all `f` values.
    pub repetitions: usize,
    pub seed: u64,
    pub oracle: WitnessOracle,
    /// Exhaustively verify every output; refused up front if any instance
    /// would exceed `budget` pair checks.
    pub verify: bool,
    pub budget: u128,
}

impl ExperimentConfig {
    pub fn new(family: GraphFamily, n_values: Vec<usize>, f_values: Vec<usize>, stretch: f64, mode: FaultMode) -> Self {
        ExperimentConfig {
            family,
            n_values,
            f_values,
            stretch,
            mode,
            repetitions: 1,
            seed: 0,
            oracle: WitnessOracle::default(),
            verify: false,
            budget: 1_000_000_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.f_values.is_empty() {
            return Err(Error::InvalidParams("experiment needs at least one n and one f".into()));
        }
        if self.n_values.contains(&0) {
            return Err(Error::InvalidParams("n values must be positive".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidParams("repetitions must be positive".into()));
        }
        // f = 0 is the classic greedy and a legitimate sweep point
        SpannerParams::new(self.stretch, 0, self.mode).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub f: usize,
    pub k: f64,
    pub mode: FaultMode,
    pub edges_in_g: usize,
    pub edges_in_h: usize,
    pub moore_reference: Option<f64>,
    pub runtime_ms: f64,
    pub seed: u64,
}

impl ScalingRow {
    pub const CSV_HEADER: &'static str = "n,f,k,mode,edges_in_G,edges_in_H,moore_reference,runtime_ms,seed";

    pub fn csv_row(&self) -> String {
        let moore = self.moore_reference.map(|m| format!("{m:.3}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{:.3},{}",
            self.n, self.f, self.k, self.mode, self.edges_in_g, self.edges_in_h, moore, self.runtime_ms, self.seed
        )
    }
}

/// `n^{1+1/κ} · f^{1-1/κ}` with `κ = (k+1)/2`. Even integer stretches have no
/// `2κ-1` form and get no reference curve.
pub fn moore_reference(n: usize, f: usize, k: f64) -> Option<f64> {
    if k.fract() == 0.0 && (k as i64) % 2 == 0 {
        return None;
    }
    let kappa = (k + 1.0) / 2.0;
    let f = f.max(1) as f64;
    Some((n as f64).powf(1.0 + 1.0 / kappa) * f.powf(1.0 - 1.0 / kappa))
}

/// Least-squares slope of `ln y` against `ln x`. `None` with fewer than two
/// distinct `x` or a non-positive coordinate.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let len = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / len;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx < 1e-12 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitAxis {
    /// Exponent in `n` at a fixed `f`.
    N,
    /// Exponent in `f` at a fixed `n`.
    F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub axis: FitAxis,
    /// The value of the other parameter.
    pub fixed: usize,
    pub exponent: f64,
    pub points: usize,
}

impl fmt::Display for ScalingFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.axis {
            FitAxis::N => write!(
                f,
                "# fit n-exponent f={} exponent={:.4} points={}",
                self.fixed, self.exponent, self.points
            ),
            FitAxis::F => write!(
                f,
                "# fit f-exponent n={} exponent={:.4} points={}",
                self.fixed, self.exponent, self.points
            ),
        }
    }
}

/// One n-fit per `f` and one f-fit per `n`, wherever at least two distinct
/// values of the swept parameter exist. `f = 0` rows are left out of f-fits.
pub fn fit_exponents(rows: &[ScalingRow]) -> Vec<ScalingFit> {
    let mut fs: Vec<usize> = rows.iter().map(|r| r.f).collect();
    fs.sort_unstable();
    fs.dedup();
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();

    let mut fits = Vec::new();
    for &f in &fs {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.f == f)
            .map(|r| (r.n as f64, r.edges_in_h as f64))
            .collect();
        if let Some(exponent) = loglog_slope(&pts) {
            fits.push(ScalingFit {
                axis: FitAxis::N,
                fixed: f,
                exponent,
                points: pts.len(),
            });
        }
    }
    for &n in &ns {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.n == n && r.f > 0)
            .map(|r| (r.f as f64, r.edges_in_h as f64))
            .collect();
        if let Some(exponent) = loglog_slope(&pts) {
            fits.push(ScalingFit {
                axis: FitAxis::F,
                fixed: n,
                exponent,
                points: pts.len(),
            });
        }
    }
    fits
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub rows: Vec<ScalingRow>,
    pub fits: Vec<ScalingFit>,
}

impl ExperimentReport {
    pub fn fit(&self, axis: FitAxis, fixed: usize) -> Option<f64> {
        self.fits
            .iter()
            .find(|x| x.axis == axis && x.fixed == fixed)
            .map(|x| x.exponent)
    }

    /// Mean `|E(H)|` over repetitions, per `f`, at the given `n`.
    pub fn mean_edges_by_f(&self, n: usize) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for r in self.rows.iter().filter(|r| r.n == n) {
            match out.iter().position(|&(f, _)| f == r.f) {
                Some(i) => {
                    out[i].1 += r.edges_in_h as f64;
                    counts[i] += 1;
                }
                None => {
                    out.push((r.f, r.edges_in_h as f64));
                    counts.push(1);
                }
            }
        }
        for (o, c) in out.iter_mut().zip(counts) {
            o.1 /= c as f64;
        }
        out.sort_by_key(|&(f, _)| f);
        out
    }

    /// Header, rows, then one `#` summary line per fit. With
    /// `include_runtime = false` the runtime column is zeroed so the output
    /// is byte-for-byte reproducible.
    pub fn to_csv(&self, include_runtime: bool) -> String {
        let mut out = String::new();
        out.push_str(ScalingRow::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let mut r = r.clone();
            if !include_runtime {
                r.runtime_ms = 0.0;
            }
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        for fit in &self.fits {
            let _ = writeln!(out, "{fit}");
        }
        out
    }
}

pub fn run_scaling(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let seeds: Vec<u64> = (0..config.repetitions as u64)
        .map(|r| derive_seed(config.seed, r))
        .collect();
    let mut graphs = Vec::new();
    for &n in &config.n_values {
        for &seed in &seeds {
            graphs.push((n, seed, config.family.build(n, seed)?));
        }
    }
    if config.verify {
        for (_, _, g) in &graphs {
            for &f in &config.f_values {
                check_budget(g, &SpannerParams::new(config.stretch, f, config.mode)?, config.budget)?;
            }
        }
    }

    let tasks: Vec<(&(usize, u64, Graph), usize)> = graphs
        .iter()
        .flat_map(|g| config.f_values.iter().map(move |&f| (g, f)))
        .collect();
    let mut rows = tasks
        .into_par_iter()
        .map(|(&(n, seed, ref g), f)| -> Result<ScalingRow> {
            let params = SpannerParams::new(config.stretch, f, config.mode)?;
            let start = Instant::now();
            let h = ft_greedy_spanner_with(g, params, config.oracle)?.spanner;
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            if config.verify {
                let report = verify_ft_spanner(g, &h, params, VerifyStrategy::Exhaustive)?;
                if !report.ok {
                    return Err(Error::VerificationFailed(format!("n={n} f={f} seed={seed}: {report}")));
                }
            }
            Ok(ScalingRow {
                n,
                f,
                k: config.stretch,
                mode: config.mode,
                edges_in_g: g.edge_count(),
                edges_in_h: h.edge_count(),
                moore_reference: moore_reference(n, f, config.stretch),
                runtime_ms,
                seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.n, r.f, r.seed));
    let fits = fit_exponents(&rows);
    Ok(ExperimentReport { rows, fits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(1.5)))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(5.0, 1.0), (5.0, 2.0)]), None);
        assert_eq!(loglog_slope(&[(1.0, 0.0), (2.0, 2.0)]), None);
    }

    #[test]
    fn moore_reference_values() {
        // k = 3 → κ = 2: n^{3/2} f^{1/2}
        assert!((moore_reference(100, 4, 3.0).unwrap() - 2000.0).abs() < 1e-9);
        assert_eq!(moore_reference(100, 4, 4.0), None);
        assert!(moore_reference(100, 1, 2.5).is_some());
    }

    #[test]
    fn family_parsing() {
        assert_eq!(
            "complete".parse::<GraphFamily>().unwrap(),
            GraphFamily::Complete(WeightDist::Unit)
        );
        assert_eq!(
            "complete:uniform:1:2".parse::<GraphFamily>().unwrap(),
            GraphFamily::Complete(WeightDist::Uniform { lo: 1.0, hi: 2.0 })
        );
        assert_eq!(
            "random:0.25".parse::<GraphFamily>().unwrap(),
            GraphFamily::Random {
                p: 0.25,
                weights: WeightDist::Unit
            }
        );
        for bad in ["cycle", "random:x", "complete:uniform:2", "complete:uniform:2:1"] {
            assert!(bad.parse::<GraphFamily>().is_err(), "{bad}");
        }
        let fam = GraphFamily::Random {
            p: 0.5,
            weights: WeightDist::Uniform { lo: 1.0, hi: 3.0 },
        };
        assert_eq!(fam.to_string().parse::<GraphFamily>().unwrap(), fam);
    }

    #[test]
    fn small_sweep_is_sorted_and_deterministic() {
        let mut cfg = ExperimentConfig::new(
            GraphFamily::Complete(WeightDist::Uniform { lo: 1.0, hi: 2.0 }),
            vec![12, 8],
            vec![2, 0, 1],
            3.0,
            FaultMode::Vertex,
        );
        cfg.repetitions = 2;
        cfg.seed = 5;
        cfg.verify = true;
        let a = run_scaling(&cfg).unwrap();
        assert_eq!(a.rows.len(), 12);
        assert!(a
            .rows
            .windows(2)
            .all(|w| (w[0].n, w[0].f, w[0].seed) <= (w[1].n, w[1].f, w[1].seed)));
        assert!(a.rows.iter().all(|r| r.edges_in_h <= r.edges_in_g));
        let b = run_scaling(&cfg).unwrap();
        assert_eq!(a.to_csv(false), b.to_csv(false));
        let csv = a.to_csv(false);
        assert!(csv.starts_with("n,f,k,mode,edges_in_G,edges_in_H,moore_reference,runtime_ms,seed\n8,0,3,vertex,28,"));
        assert!(csv.contains("# fit n-exponent f=1"));
        assert!(csv.contains("# fit f-exponent n=12"));
        assert!(a.fit(FitAxis::F, 8).is_some());
    }

    #[test]
    fn verification_budget_is_enforced() {
        let mut cfg = ExperimentConfig::new(
            GraphFamily::Complete(WeightDist::Unit),
            vec![30],
            vec![3],
            3.0,
            FaultMode::Edge,
        );
        cfg.verify = true;
        cfg.budget = 1000;
        assert!(matches!(run_scaling(&cfg), Err(Error::OverBudget { .. })));
    }

    #[test]
    fn bad_configs() {
        let fam = GraphFamily::Complete(WeightDist::Unit);
        assert!(run_scaling(&ExperimentConfig::new(fam, vec![], vec![1], 3.0, FaultMode::Vertex)).is_err());
        assert!(run_scaling(&ExperimentConfig::new(fam, vec![0], vec![1], 3.0, FaultMode::Vertex)).is_err());
        assert!(run_scaling(&ExperimentConfig::new(fam, vec![5], vec![1], 0.5, FaultMode::Vertex)).is_err());
    }
}
