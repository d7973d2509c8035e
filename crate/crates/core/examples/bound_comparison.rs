//! Channel thresholds of the regular (3,6) ensemble under each iterative bound.
//!
//! Usage: `cargo run --release --example bound_comparison [--with-de]`
//!
//! Without `--with-de` the ub-sb-star column uses the BSC DE threshold 0.0837
//! instead of recomputing it.

use std::time::Instant;

use ldpc_bounds::binary::ub_sb_star;
use ldpc_bounds::de::DeConfig;
use ldpc_bounds::family::ChannelFamily;
use ldpc_bounds::threshold::{channel_threshold, measure_threshold, Certifier, MeasureBound};
use ldpc_bounds::{BoundKind, DegreeEnsemble, IterationLimits};

fn main() -> ldpc_bounds::Result<()> {
    let with_de = std::env::args().any(|a| a == "--with-de");
    let e = DegreeEnsemble::regular(3, 6)?;
    let limits = IterationLimits::default();
    let de = DeConfig {
        population_size: 100_000,
        ..DeConfig::default()
    };

    let cb_star = measure_threshold(MeasureBound::UbCb, &e, 1e-7, &limits, &de);
    let sb_star = measure_threshold(MeasureBound::UbSb, &e, 1e-7, &limits, &de);
    let sb_star_de = if with_de {
        measure_threshold(MeasureBound::UbSbStar, &e, 1e-4, &limits, &de)
    } else {
        ub_sb_star(0.0837)
    };
    println!("CB* (ub-cb)       {cb_star:.4}");
    println!("SB* (ub-sb)       {sb_star:.4}");
    println!("SB* (ub-sb-star)  {sb_star_de:.4}");
    println!();

    let columns = [
        Certifier::Bound(BoundKind::UbSb),
        Certifier::Bound(BoundKind::UbCb),
        Certifier::Bound(BoundKind::UbCbSb),
        Certifier::SbStar(sb_star_de),
        Certifier::Bound(BoundKind::LbCb),
    ];
    print!("{:<10}", "family");
    for c in &columns {
        print!("{:>11}", c.label());
    }
    println!("{:>9}", "time");
    for family in ChannelFamily::ALL {
        let start = Instant::now();
        print!("{:<10}", family.label());
        for c in &columns {
            match channel_threshold(c, family, &e, 1e-5, &limits) {
                Ok(r) => print!("{:>11.4}", r.value()),
                Err(_) => print!("{:>11}", "-"),
            }
        }
        println!("{:>8.1}s", start.elapsed().as_secs_f64());
    }
    Ok(())
}
