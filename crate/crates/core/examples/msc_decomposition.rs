//! Splitting symmetric channels into mixtures of MSCs, and symmetrizing an
//! asymmetric one.
//!
//! Usage: `cargo run --example msc_decomposition`

use ldpc_bounds::channel::decompose::{msc_decompose, symmetrize, CondMatrix, OutputPermutation};
use ldpc_bounds::channel::msc::x_erasure_decompose;
use ldpc_bounds::MscChannel;

fn show(label: &str, mix: &ldpc_bounds::MscMixture) {
    println!("{label}: cb vector {:?}", mix.cb_vector().values());
    for (w, ch) in mix.atoms() {
        println!("  {w:.4} x {:?}", ch.probs());
    }
}

fn main() -> ldpc_bounds::Result<()> {
    // Binary channel with two reliability classes: outputs (0, 1) and (2, 3)
    // are swapped by the input flip.
    let two_class = CondMatrix::new(vec![vec![0.54, 0.06, 0.3, 0.1], vec![0.06, 0.54, 0.1, 0.3]])?;
    let t = OutputPermutation::new(vec![1, 0, 3, 2])?;
    show("two-class binary channel", &msc_decompose(&two_class, &t)?);

    let z = CondMatrix::new(vec![vec![1.0, 0.0], vec![0.2, 0.8]])?;
    show("symmetrized z-channel", &symmetrize(&z)?);
    match msc_decompose(&z, &OutputPermutation::cyclic(2)) {
        Ok(_) => println!("z-channel decomposed directly"),
        Err(e) => println!("direct decomposition refused: {e}"),
    }

    let ch = MscChannel::new(vec![0.6, 0.25, 0.1, 0.05])?;
    let split = x_erasure_decompose(&ch, 1)?;
    println!(
        "\nZ_4 channel {:?} split on x = 1: erasure weight {:.3}",
        ch.probs(),
        split.weight
    );
    let back = split.reconstruct(ch.m());
    println!("  reconstructed {back:?}");
    Ok(())
}
