//! CB-vector bound and stability conditions for codes over Z_m.
//!
//! Usage: `cargo run --example zm_stability`

use ldpc_bounds::zm::{convergence_rate, gfq_stability, sufficient_stability, zm_iterate};
use ldpc_bounds::{DegreeEnsemble, IterationLimits, MscChannel};

fn main() -> ldpc_bounds::Result<()> {
    let e = DegreeEnsemble::regular(3, 6)?;
    let limits = IterationLimits::default();
    for noise in [0.0005, 0.002, 0.005, 0.05] {
        // Symbol kept with probability 1 - noise, otherwise uniform over the rest.
        let mut p = vec![noise / 5.0; 6];
        p[0] = 1.0 - noise;
        let v0 = MscChannel::new(p)?.cb_vector();
        let run = zm_iterate(&v0, &e, &limits);
        println!(
            "Z_6, noise {noise:.4}: max cb {:.4} -> {:?} after {} iterations",
            v0.max_off_zero(),
            run.verdict,
            run.iterations
        );
    }

    let irregular = DegreeEnsemble::new(vec![(2, 0.3), (3, 0.4), (8, 0.3)], vec![(7, 1.0)])?;
    println!("\nensemble with λ2 = 0.3, ρ'(1) = 6");
    for noise in [0.2, 0.4, 0.6] {
        let mut p = vec![noise / 4.0; 5];
        p[0] = 1.0 - noise;
        let v0 = MscChannel::new(p)?.cb_vector();
        let gf = gfq_stability(&irregular, &v0, 5)?;
        println!(
            "GF(5), noise {noise:.1}: sufficient {} (GF(5) form {}), rate {:.3}",
            sufficient_stability(&irregular, &v0),
            gf.sufficient,
            convergence_rate(&irregular, &v0)
        );
    }
    Ok(())
}
