//! Sampled density evolution thresholds for the regular (3,6) ensemble.
//!
//! Usage: `cargo run --release --example density_evolution [population] [steps]`

use std::time::Instant;

use ldpc_bounds::de::{bec_threshold, de_threshold_in, DeConfig};
use ldpc_bounds::family::ChannelFamily;
use ldpc_bounds::DegreeEnsemble;

fn main() -> ldpc_bounds::Result<()> {
    let mut args = std::env::args().skip(1);
    let population = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let steps = args.next().and_then(|s| s.parse().ok()).unwrap_or(12);
    let e = DegreeEnsemble::regular(3, 6)?;
    println!("exact BEC threshold: {:.6}", bec_threshold(&e));

    let cfg = DeConfig {
        population_size: population,
        ..DeConfig::default()
    };
    let brackets = [
        (ChannelFamily::Bsc, 0.06, 0.11),
        (ChannelFamily::Bec, 0.40, 0.46),
        (ChannelFamily::BiAwgn, 0.8, 0.95),
        (ChannelFamily::BiLaplace, 0.55, 0.75),
        (ChannelFamily::BiRayleigh, 0.55, 0.75),
    ];
    for (family, lo, hi) in brackets {
        let start = Instant::now();
        let t = de_threshold_in(family, &e, &cfg, lo, hi, steps)?;
        println!(
            "{:<9} {} = {:.4}  [{:.4}, {:.4}]  {:.1}s{}",
            family.label(),
            family.parameter_name(),
            t.value,
            t.lo,
            t.hi,
            start.elapsed().as_secs_f64(),
            t.warning
                .map(|w| format!("  warning: {w}"))
                .unwrap_or_default()
        );
    }
    Ok(())
}
