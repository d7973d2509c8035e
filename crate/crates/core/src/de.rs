//! Density evolution for binary-input symmetric channels.
//!
//! The BEC recursion is exact. Other channels use population dynamics: a fixed
//! number of LLR samples (conditioned on the all-zero codeword) is pushed
//! through the check and variable node maps, resampling inputs each time.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::BinaryChannel;
use crate::ensemble::DegreeEnsemble;
use crate::error::{Error, Result};
use crate::family::ChannelFamily;

/// Magnitude at which finite LLRs are saturated in the check-node rule.
pub const LLR_SATURATION: f64 = 40.0;

const CHUNK: usize = 4096;

/// Sup of `eps` such that `x <- eps λ(1 - ρ(1 - x))` tends to zero, to within `1e-6`.
pub fn bec_threshold(e: &DegreeEnsemble) -> f64 {
    let decodes = |eps: f64| {
        let mut x = eps;
        for _ in 0..1_000_000 {
            // 1 - ρ(1 - x) without cancellation for small x.
            let check: f64 = e
                .rho()
                .iter()
                .map(|&(k, m)| -m * ((k as f64 - 1.0) * (-x).ln_1p()).exp_m1())
                .sum();
            let next = eps * e.lambda_eval(check);
            if next < 1e-12 {
                return true;
            }
            if next >= x {
                return false;
            }
            x = next;
        }
        // Still strictly shrinking: only a slow linear approach to zero does this.
        true
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if decodes(hi) {
        return hi;
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if decodes(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Draws channel LLRs `ln P(y|0)/P(y|1)` given input 0.
#[derive(Debug, Clone)]
pub enum LlrSampler {
    Bsc {
        p: f64,
        llr: f64,
    },
    Bec {
        eps: f64,
    },
    BiAwgn {
        sigma: f64,
    },
    BiLaplace {
        lambda: f64,
    },
    BiRayleigh {
        sigma: f64,
    },
    Mixture {
        pick: WeightedIndex<f64>,
        parts: Vec<LlrSampler>,
    },
}

impl LlrSampler {
    pub fn new(ch: &BinaryChannel) -> Result<Self> {
        ch.validate()?;
        Ok(match *ch {
            BinaryChannel::Bsc { p } => Self::bsc(p),
            BinaryChannel::Bec { eps } => LlrSampler::Bec { eps },
            BinaryChannel::BiAwgn { sigma } => LlrSampler::BiAwgn { sigma },
            BinaryChannel::BiLaplace { lambda } => LlrSampler::BiLaplace { lambda },
            BinaryChannel::BiRayleigh { sigma } => LlrSampler::BiRayleigh { sigma },
            BinaryChannel::BscMixture { ref atoms } => LlrSampler::Mixture {
                pick: WeightedIndex::new(atoms.iter().map(|(w, _)| *w))
                    .map_err(|e| Error::Domain(format!("mixture weights: {e}")))?,
                parts: atoms.iter().map(|&(_, p)| Self::bsc(p)).collect(),
            },
            BinaryChannel::Bnsc { .. } => {
                return Err(Error::Unsupported(
                    "density evolution for non-symmetric channels".into(),
                ))
            }
        })
    }

    fn bsc(p: f64) -> Self {
        let llr = if p <= 0.0 {
            f64::INFINITY
        } else {
            ((1.0 - p) / p).ln()
        };
        LlrSampler::Bsc { p, llr }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            LlrSampler::Bsc { p, llr } => {
                if rng.gen::<f64>() < *p {
                    -llr
                } else {
                    *llr
                }
            }
            LlrSampler::Bec { eps } => {
                if rng.gen::<f64>() < *eps {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            LlrSampler::BiAwgn { sigma } => {
                let n: f64 = rng.sample(StandardNormal);
                let y = 1.0 + sigma * n;
                2.0 * y / (sigma * sigma)
            }
            LlrSampler::BiLaplace { lambda } => {
                let mag: f64 = rng.sample(Exp1);
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                let y = 1.0 + lambda * sign * mag;
                ((y + 1.0).abs() - (y - 1.0).abs()) / lambda
            }
            LlrSampler::BiRayleigh { sigma } => {
                let e: f64 = rng.sample(Exp1);
                let a = e.sqrt();
                let n: f64 = rng.sample(StandardNormal);
                let y = a + sigma * n;
                2.0 * a * y / (sigma * sigma)
            }
            LlrSampler::Mixture { pick, parts } => parts[pick.sample(rng)].sample(rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeConfig {
    pub population_size: usize,
    pub max_iter: usize,
    pub target_pe: f64,
    pub seed: u64,
}

impl Default for DeConfig {
    fn default() -> Self {
        DeConfig {
            population_size: 200_000,
            max_iter: 500,
            target_pe: 1e-5,
            seed: 1,
        }
    }
}

/// Variable-to-check LLR samples for input 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrPopulation {
    pub samples: Vec<f64>,
    pub seed: u64,
}

impl LlrPopulation {
    pub fn from_channel(sampler: &LlrSampler, size: usize, seed: u64) -> Self {
        let samples = fill_chunks(size, seed, 0, |rng, _| sampler.sample(rng));
        LlrPopulation { samples, seed }
    }

    /// `P(m < 0) + P(m = 0) / 2`.
    pub fn error_fraction(&self) -> f64 {
        let bad: f64 = self
            .samples
            .iter()
            .map(|&m| {
                if m < 0.0 {
                    1.0
                } else if m == 0.0 {
                    0.5
                } else {
                    0.0
                }
            })
            .sum();
        bad / self.samples.len() as f64
    }
}

/// Fills `size` values chunk by chunk; every chunk has its own RNG stream so
/// results do not depend on the number of worker threads.
fn fill_chunks<F>(size: usize, seed: u64, stream: u64, f: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng, usize) -> f64 + Sync,
{
    let mut out = vec![0.0; size];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(c, chunk)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream.wrapping_mul(1 << 24).wrapping_add(c as u64));
            for (i, slot) in chunk.iter_mut().enumerate() {
                *slot = f(&mut rng, c * CHUNK + i);
            }
        });
    out
}

/// `ln((e^x + 1)/(e^x - 1))`, its own inverse on `(0, ∞)`.
fn phi(x: f64) -> f64 {
    if x <= 0.0 {
        f64::INFINITY
    } else if x == f64::INFINITY {
        0.0
    } else {
        (2.0 / x.exp_m1()).ln_1p()
    }
}

/// `2 artanh(Π tanh(m_i / 2))` with finite magnitudes saturated at 40.
pub fn check_combine(msgs: impl IntoIterator<Item = f64>) -> f64 {
    let mut negative = false;
    let mut sum = 0.0;
    let mut all_infinite = true;
    for m in msgs {
        if m == 0.0 {
            return 0.0;
        }
        negative ^= m < 0.0;
        let mag = m.abs();
        if mag.is_finite() {
            all_infinite = false;
            sum += phi(mag.min(LLR_SATURATION));
        }
    }
    let mag = if all_infinite {
        f64::INFINITY
    } else {
        phi(sum).min(LLR_SATURATION)
    };
    if negative {
        -mag
    } else {
        mag
    }
}

struct DegreeSampler {
    degrees: Vec<usize>,
    pick: WeightedIndex<f64>,
}

impl DegreeSampler {
    fn new(d: &[(usize, f64)]) -> Self {
        DegreeSampler {
            degrees: d.iter().map(|(k, _)| *k).collect(),
            pick: WeightedIndex::new(d.iter().map(|(_, m)| *m)).expect("valid ensemble masses"),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.degrees[self.pick.sample(rng)]
    }
}

/// One round of population dynamics; `iteration` selects the RNG streams.
pub fn de_step(
    pop: &LlrPopulation,
    e: &DegreeEnsemble,
    channel: &LlrSampler,
    iteration: u64,
) -> LlrPopulation {
    let n = pop.samples.len();
    let rho = DegreeSampler::new(e.rho());
    let lambda = DegreeSampler::new(e.lambda());
    let checks = fill_chunks(n, pop.seed, 2 * iteration + 1, |rng, _| {
        let k = rho.sample(rng);
        check_combine((1..k).map(|_| pop.samples[rng.gen_range(0..n)]))
    });
    let samples = fill_chunks(n, pop.seed, 2 * iteration + 2, |rng, _| {
        let k = lambda.sample(rng);
        let mut m = channel.sample(rng);
        for _ in 1..k {
            m += checks[rng.gen_range(0..n)];
        }
        m
    });
    LlrPopulation {
        samples,
        seed: pop.seed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeOutcome {
    pub decodable: bool,
    pub iterations: usize,
    pub error_fraction: f64,
}

/// Iterations over which the error fraction must shrink by [`STALL_RATIO`].
const STALL_WINDOW: usize = 40;
const STALL_RATIO: f64 = 0.99;

/// Runs population DE until the error fraction falls below `target_pe`, stops
/// improving, or `max_iter` is reached.
pub fn run_de(ch: &BinaryChannel, e: &DegreeEnsemble, cfg: &DeConfig) -> Result<DeOutcome> {
    let sampler = LlrSampler::new(ch)?;
    let mut pop = LlrPopulation::from_channel(&sampler, cfg.population_size, cfg.seed);
    let mut history = vec![pop.error_fraction()];
    for it in 1..=cfg.max_iter {
        pop = de_step(&pop, e, &sampler, it as u64);
        let pe = pop.error_fraction();
        history.push(pe);
        if pe < cfg.target_pe {
            return Ok(DeOutcome {
                decodable: true,
                iterations: it,
                error_fraction: pe,
            });
        }
        if it >= STALL_WINDOW && pe > STALL_RATIO * history[it - STALL_WINDOW] {
            return Ok(DeOutcome {
                decodable: false,
                iterations: it,
                error_fraction: pe,
            });
        }
    }
    Ok(DeOutcome {
        decodable: false,
        iterations: cfg.max_iter,
        error_fraction: *history.last().expect("nonempty"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeThreshold {
    pub family: ChannelFamily,
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    /// Set when a re-check at the brackets disagreed with the bisection.
    pub warning: Option<String>,
}

/// Bisects the family parameter on the DE verdict (`steps >= 12`).
pub fn de_threshold(
    family: ChannelFamily,
    e: &DegreeEnsemble,
    cfg: &DeConfig,
    steps: usize,
) -> Result<DeThreshold> {
    let (lo, hi) = family.range();
    de_threshold_in(family, e, cfg, lo, hi, steps)
}

/// As [`de_threshold`] but within an explicit starting bracket.
pub fn de_threshold_in(
    family: ChannelFamily,
    e: &DegreeEnsemble,
    cfg: &DeConfig,
    mut lo: f64,
    mut hi: f64,
    steps: usize,
) -> Result<DeThreshold> {
    let decodes = |x: f64| -> Result<bool> { Ok(run_de(&family.channel(x)?, e, cfg)?.decodable) };
    let mut warning = None;
    if !decodes(lo)? || decodes(hi)? {
        warning = Some(format!(
            "bracket [{lo}, {hi}] does not straddle the decodability flip"
        ));
    }
    for _ in 0..steps.max(12) {
        let mid = 0.5 * (lo + hi);
        if decodes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(DeThreshold {
        family,
        lo,
        hi,
        value: 0.5 * (lo + hi),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bec_threshold_three_six() {
        let t = bec_threshold(&DegreeEnsemble::regular(3, 6).unwrap());
        assert!((t - 0.4294).abs() < 1e-4, "{t}");
    }

    #[test]
    fn bec_threshold_cycle_ensemble_is_one() {
        let t = bec_threshold(&DegreeEnsemble::regular(2, 2).unwrap());
        assert!(t > 1.0 - 2e-6, "{t}");
    }

    #[test]
    fn check_rule_edges() {
        assert_eq!(check_combine([f64::INFINITY, f64::INFINITY]), f64::INFINITY);
        assert_eq!(
            check_combine([f64::INFINITY, -f64::INFINITY]),
            -f64::INFINITY
        );
        assert_eq!(check_combine([3.0, 0.0]), 0.0);
        let m = check_combine([2.0, -1.5]);
        let direct = -2.0 * ((1.0f64).tanh() * (0.75f64).tanh()).atanh();
        assert!((m - direct).abs() < 1e-12);
        assert_eq!(
            check_combine([1e3, 1e3]),
            LLR_SATURATION.min(phi(2.0 * phi(40.0)))
        );
    }

    #[test]
    fn perfect_population_is_fixed() {
        let e = DegreeEnsemble::regular(3, 6).unwrap();
        let sampler = LlrSampler::new(&BinaryChannel::bec(0.0).unwrap()).unwrap();
        let pop = LlrPopulation::from_channel(&sampler, 1000, 3);
        let next = de_step(&pop, &e, &sampler, 1);
        assert!(next.samples.iter().all(|m| *m == f64::INFINITY));
    }

    #[test]
    fn zero_population_keeps_only_channel_information() {
        let e = DegreeEnsemble::regular(3, 6).unwrap();
        let sampler = LlrSampler::new(&BinaryChannel::bsc(0.1).unwrap()).unwrap();
        let pop = LlrPopulation {
            samples: vec![0.0; 500],
            seed: 5,
        };
        let next = de_step(&pop, &e, &sampler, 1);
        let llr = (0.9f64 / 0.1).ln();
        assert!(next.samples.iter().all(|m| (m.abs() - llr).abs() < 1e-12));
    }

    #[test]
    fn population_is_deterministic() {
        let sampler = LlrSampler::new(&BinaryChannel::bi_awgn(0.8).unwrap()).unwrap();
        let a = LlrPopulation::from_channel(&sampler, 10_000, 42);
        let b = LlrPopulation::from_channel(&sampler, 10_000, 42);
        assert_eq!(a, b);
    }

    #[test]
    fn bnsc_is_unsupported() {
        let err = LlrSampler::new(&BinaryChannel::z_channel(0.1).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }
}
