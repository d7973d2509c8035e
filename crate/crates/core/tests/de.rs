//! Sampled density evolution against exact recursions and symmetry.

use ldpc_bounds::de::{
    bec_threshold, de_step, de_threshold, run_de, DeConfig, LlrPopulation, LlrSampler,
};
use ldpc_bounds::family::ChannelFamily;
use ldpc_bounds::zm::necessary_stability_violated;
use ldpc_bounds::{BinaryChannel, CbVector, DegreeEnsemble};

fn cfg(population_size: usize) -> DeConfig {
    DeConfig {
        population_size,
        ..DeConfig::default()
    }
}

/// `E[1{m > -τ} e^{-m}]` against `P(m < τ)` for a symmetric density.
fn symmetry_gap(samples: &[f64], tau: f64) -> (f64, f64) {
    let n = samples.len() as f64;
    let lhs = samples
        .iter()
        .filter(|&&m| -m < tau)
        .map(|&m| (-m).exp())
        .sum::<f64>()
        / n;
    let rhs = samples.iter().filter(|&&m| m < tau).count() as f64 / n;
    (lhs, rhs)
}

#[test]
fn populations_stay_symmetric() {
    let e = DegreeEnsemble::regular(3, 6).unwrap();
    let n = 200_000;
    for ch in [
        BinaryChannel::bsc(0.07).unwrap(),
        BinaryChannel::bi_awgn(0.85).unwrap(),
        BinaryChannel::bi_laplace(0.6).unwrap(),
    ] {
        let sampler = LlrSampler::new(&ch).unwrap();
        let mut pop = LlrPopulation::from_channel(&sampler, n, 11);
        for it in 1..=3 {
            pop = de_step(&pop, &e, &sampler, it);
        }
        for tau in [-2.0, -1.0, 0.0, 0.5, 1.0] {
            let (lhs, rhs) = symmetry_gap(&pop.samples, tau);
            // Monte Carlo error of the weighted mean; weights are at most e^τ.
            let tol = 5.0 * f64::exp(tau.max(0.0)) / (n as f64).sqrt() + 1e-3;
            assert!((lhs - rhs).abs() < tol, "{ch:?} τ = {tau}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn sampled_bec_matches_exact_recursion() {
    let e = DegreeEnsemble::regular(3, 6).unwrap();
    let exact = bec_threshold(&e);
    let t = de_threshold(ChannelFamily::Bec, &e, &cfg(50_000), 14).unwrap();
    assert!((t.value - exact).abs() < 0.005, "{} vs {exact}", t.value);
}

#[test]
fn stability_violation_blocks_decoding() {
    // λ2 ρ'(1) = 0.5 * 5 = 2.5, so any BSC with cb > 0.4 violates stability.
    let e = DegreeEnsemble::new(vec![(2, 0.5), (3, 0.5)], vec![(6, 1.0)]).unwrap();
    let p = 0.05;
    let ch = BinaryChannel::bsc(p).unwrap();
    let v = CbVector::binary(ch.cb().unwrap()).unwrap();
    assert!(necessary_stability_violated(&e, &v));
    let out = run_de(&ch, &e, &cfg(50_000)).unwrap();
    assert!(!out.decodable);
    assert!(out.error_fraction > 1e-10);
}

#[test]
fn runs_are_reproducible() {
    let e = DegreeEnsemble::regular(3, 6).unwrap();
    let ch = BinaryChannel::bi_awgn(0.9).unwrap();
    let a = run_de(&ch, &e, &cfg(20_000)).unwrap();
    let b = run_de(&ch, &e, &cfg(20_000)).unwrap();
    assert_eq!(a, b);
}
