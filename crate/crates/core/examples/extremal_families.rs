//! Extremal BSC mixtures for a given (CB, SB) pair, checked against a grid LP.
//!
//! Usage: `cargo run --release --example extremal_families`

use ldpc_bounds::extremal::{
    check_node_dual, check_node_maximizer, check_node_transfer, check_node_value, lp_oracle,
    s_envelope, variable_node_transfer, variable_node_upper_family,
};
use ldpc_bounds::NoisePair;

fn main() -> ldpc_bounds::Result<()> {
    let np = NoisePair::new(0.5, 0.3)?;
    println!("channel measures cb = {}, sb = {}", np.cb, np.sb);
    println!(
        "check-node maximizer atoms {:?}",
        check_node_maximizer(np).atoms()
    );
    println!(
        "variable-node upper family {:?}",
        variable_node_upper_family(np).atoms()
    );
    println!();
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "b", "check", "dual", "check LP", "var env", "var LP"
    );
    for b in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let chk = check_node_value(np, b);
        let dual = check_node_dual(np, b).objective(np);
        let chk_lp = lp_oracle(|a| check_node_transfer(a, b), np.cb, np.sb, 400)?;
        let var = s_envelope(np, b);
        let var_lp = lp_oracle(|a| variable_node_transfer(a, b), np.cb, np.sb, 400)?;
        println!("{b:>5.1} {chk:>10.6} {dual:>10.6} {chk_lp:>10.6} {var:>10.6} {var_lp:>10.6}");
    }
    Ok(())
}
