use ft_spanner::blocking::{subsample_experiment, RateEstimate};
use ft_spanner::generators::{cycle_graph, lower_bound_product, BlockingReading};
use ft_spanner::graph::ProductKind;

#[test]
fn lower_bound_products_keep_enough_edges() {
    for g in [6, 8] {
        for f in [4, 8] {
            let base = cycle_graph(g).unwrap();
            for kind in [ProductKind::Cartesian, ProductKind::Tensor] {
                let inst = lower_bound_product(&base, f, kind).unwrap();
                for reading in [BlockingReading::SharedEndpoint, BlockingReading::SameBaseEdge] {
                    if !inst.audit(reading).unwrap().verified {
                        continue;
                    }
                    let b = inst.claimed(reading).unwrap();
                    let r = subsample_experiment(inst.graph(), &b, f, inst.blocking_length, 1000, 11).unwrap();
                    assert_eq!(r.girth_pass_rate, 1.0);
                    let finals: Vec<f64> = r.rows.iter().map(|row| row.edges_final as f64).collect();
                    let est = RateEstimate::from_samples(&finals);
                    let label = format!("C{g} {kind} f={f} {reading}");
                    // The asymptotic m/(4f^2) - |B|/(8f^3) assumes a sample fraction of
                    // 1/(2f); at these sizes the sample is 2 vertices, so the finite-n
                    // expectation m*p2 - sum p_arity takes its place.
                    assert!(
                        est.mean >= 0.5 * r.exact_expectation_bound,
                        "{label}: mean {} < half of {}",
                        est.mean,
                        r.exact_expectation_bound
                    );
                    // the exact expectation bound holds at this n, not just asymptotically
                    assert!(
                        est.mean >= r.exact_expectation_bound - 3.0 * est.std_err,
                        "{label}: mean {} +- {} vs exact bound {}",
                        est.mean,
                        est.std_err,
                        r.exact_expectation_bound
                    );
                }
            }
        }
    }
}
