//! Decodable region of the two-dimensional bound for (3,6) codes, with the
//! scalar thresholds as reference lines, written as CSV.
//!
//! Usage: `cargo run --release --example decodable_region [N] > region.csv`

use ldpc_bounds::de::DeConfig;
use ldpc_bounds::threshold::{measure_threshold, region_sweep, MeasureBound};
use ldpc_bounds::{DegreeEnsemble, IterationLimits};

fn main() -> ldpc_bounds::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(40);
    let e = DegreeEnsemble::regular(3, 6)?;
    let limits = IterationLimits::default();
    let de = DeConfig::default();
    let ub_cb = measure_threshold(MeasureBound::UbCb, &e, 1e-6, &limits, &de);
    let ub_sb = measure_threshold(MeasureBound::UbSb, &e, 1e-6, &limits, &de);

    let grid = region_sweep(&e, n, n, &limits)?;
    let certified = grid.points.iter().filter(|p| p.decodable).count();
    eprintln!(
        "{} feasible points, {certified} certified decodable",
        grid.points.len()
    );
    eprintln!("reference lines: cb = {ub_cb:.4}, sb = {ub_sb:.4}");
    // The scalar inner bound is contained in the two-dimensional one.
    let outside = grid
        .points
        .iter()
        .filter(|p| p.cb < ub_cb && !p.decodable)
        .count();
    eprintln!("points with cb below {ub_cb:.4} not certified: {outside}");
    print!("{}", grid.to_csv());
    Ok(())
}
