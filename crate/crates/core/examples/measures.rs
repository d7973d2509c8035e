//! CB, SB and error probability for a few channels, from spec strings.
//!
//! Usage: `cargo run --example measures [SPEC ...]`

use ldpc_bounds::channel::spec::{parse_channel, ChannelSpec};

fn main() {
    let mut specs: Vec<String> = std::env::args().skip(1).collect();
    if specs.is_empty() {
        specs = [
            "bsc:0.1",
            "bec:0.3",
            "biawgn:0.8",
            "bilc:0.6",
            "rayleigh:0.6",
            "bnsc:0.0,0.2",
            "mix:(0.5,0.05);(0.5,0.2)",
            "msc:0.7,0.1,0.1,0.1",
        ]
        .map(String::from)
        .to_vec();
    }
    for spec in specs {
        match parse_channel(&spec) {
            Ok(ChannelSpec::Binary(ch)) => {
                let (cb, sb) = (ch.cb().unwrap(), ch.sb().unwrap());
                let pe = ch.pe().map_or("-".to_string(), |p| format!("{p:.5}"));
                println!("{spec:<24} cb {cb:.5}  sb {sb:.5}  pe {pe}");
            }
            Ok(ChannelSpec::Msc(ch)) => {
                let v = ch.cb_vector();
                println!(
                    "{spec:<24} cb {:?}  cutoff rate {:.4} bits",
                    v.values()
                        .iter()
                        .map(|x| (x * 1e5).round() / 1e5)
                        .collect::<Vec<_>>(),
                    v.cutoff_rate()
                );
            }
            Err(e) => println!("{spec:<24} error: {e}"),
        }
    }
}
