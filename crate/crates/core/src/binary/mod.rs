//! Iterative CB/SB bounds for binary LDPC ensembles.
//!
//! Each bound replaces the true message densities by extremal channels with
//! the same noise measure, giving a scalar (or two-dimensional) recursion whose
//! convergence to zero certifies decodability:
//!
//! * [`BoundKind::UbCb`]: check nodes as BECs, valid also for non-symmetric channels.
//! * [`BoundKind::LbCb`]: check nodes as BSCs; non-convergence certifies failure.
//! * [`BoundKind::UbSb`]: check nodes as BECs and variable inputs as BSCs, matched in SB.
//! * [`BoundKind::UbCbSb`]: tracks `(CB, SB)` jointly through the extremal families.

pub mod combine;
pub mod replacement;

use serde::{Deserialize, Serialize};

use crate::channel::{bsc_sb, NoisePair};
use crate::ensemble::DegreeEnsemble;
use crate::extremal::variable_node_upper_family;

pub use combine::{phi_variable_sb, sb_of_bsc_combination, sb_of_grouped};

/// CB bound of a check node whose inputs are BECs: `1 - Π(1 - cb_i)`.
pub fn cb_check_bec(cbs: &[f64]) -> f64 {
    1.0 - cbs.iter().map(|c| 1.0 - c).product::<f64>()
}

/// CB of a check node whose inputs are BSCs: `sqrt(1 - Π(1 - cb_i²))`.
pub fn cb_check_bsc(cbs: &[f64]) -> f64 {
    (1.0 - cbs.iter().map(|c| 1.0 - c * c).product::<f64>())
        .max(0.0)
        .sqrt()
}

/// CB of a variable node: `Π cb_i`.
pub fn cb_var(cbs: &[f64]) -> f64 {
    cbs.iter().product()
}

pub fn ub_cb_step(cb: f64, e: &DegreeEnsemble, cb0: f64) -> f64 {
    (cb0 * e.lambda_eval(1.0 - e.rho_eval(1.0 - cb))).clamp(0.0, 1.0)
}

pub fn lb_cb_step(cb: f64, e: &DegreeEnsemble, cb0: f64) -> f64 {
    let c2 = 1.0 - cb * cb;
    let check: f64 = e
        .rho()
        .iter()
        .map(|&(k, m)| m * (1.0 - c2.powi(k as i32 - 1)).max(0.0).sqrt())
        .sum();
    (cb0 * e.lambda_eval(check)).clamp(0.0, 1.0)
}

pub fn ub_sb_step(sb: f64, e: &DegreeEnsemble, sb0: f64) -> f64 {
    let u = (1.0 - e.rho_eval(1.0 - sb)).clamp(0.0, 1.0);
    let (a0, a) = (sb0.sqrt(), u.sqrt());
    let out: f64 = e
        .lambda()
        .iter()
        .map(|&(k, m)| m * sb_of_grouped(&[(a0, 1), (a, k - 1)]))
        .sum();
    out.clamp(0.0, 1.0)
}

/// Check-node stage of the two-dimensional bound.
pub fn two_dim_check_step(np: NoisePair, e: &DegreeEnsemble) -> NoisePair {
    let NoisePair { cb, sb } = np;
    if cb <= 0.0 || sb <= 0.0 {
        return NoisePair::PERFECT;
    }
    let sb_out = 1.0 - e.rho_eval(1.0 - sb);
    let t = np.ratio();
    let active = (cb * cb / sb).min(1.0);
    let cb_out: f64 = e
        .rho()
        .iter()
        .map(|&(k, m)| {
            let n = k - 1;
            if active >= 1.0 {
                return m * (1.0 - (1.0 - t * t).powi(n as i32)).max(0.0).sqrt();
            }
            // Binomial law of how many inputs are the non-perfect atom.
            let (lp, lq) = (active.ln(), (-active).ln_1p());
            let mut log_binom = 0.0;
            let mut acc = 0.0;
            for i in 1..=n {
                log_binom += ((n - i + 1) as f64).ln() - (i as f64).ln();
                let w = (log_binom + i as f64 * lp + (n - i) as f64 * lq).exp();
                acc += w * (1.0 - (1.0 - t * t).powi(i as i32)).max(0.0).sqrt();
            }
            m * acc
        })
        .sum();
    NoisePair::tightened(cb_out, sb_out)
}

/// Variable-node stage of the two-dimensional bound; `np0` is the channel.
pub fn two_dim_var_step(np0: NoisePair, np: NoisePair, e: &DegreeEnsemble) -> NoisePair {
    if np.cb <= 0.0 || np.sb <= 0.0 {
        return NoisePair::PERFECT;
    }
    let cb_out = np0.cb * e.lambda_eval(np.cb);
    let fam0 = variable_node_upper_family(np0);
    let fam = variable_node_upper_family(np);
    let sb_out: f64 = e
        .lambda()
        .iter()
        .map(|&(k, m)| m * phi_variable_sb(&fam0, &fam, k - 1))
        .sum();
    NoisePair::tightened(cb_out, sb_out)
}

/// SB threshold certified by a BSC density-evolution threshold `p*`.
///
/// Any BI-SO channel with `SB <= 4 p*(1 - p*)` is decodable.
pub fn ub_sb_star(p_star: f64) -> f64 {
    bsc_sb(p_star.clamp(0.0, 0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    UbCb,
    LbCb,
    UbSb,
    UbCbSb,
}

impl BoundKind {
    pub fn uses_sb(self) -> bool {
        matches!(self, BoundKind::UbSb | BoundKind::UbCbSb)
    }

    pub fn label(self) -> &'static str {
        match self {
            BoundKind::UbCb => "ub-cb",
            BoundKind::LbCb => "lb-cb",
            BoundKind::UbSb => "ub-sb",
            BoundKind::UbCbSb => "ub-cbsb",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationLimits {
    pub max_iter: usize,
    /// The tracked measure must fall below this to count as decodable.
    pub decode_eps: f64,
    /// A change smaller than this above `decode_eps` counts as a stall.
    pub stall_eps: f64,
}

impl Default for IterationLimits {
    fn default() -> Self {
        IterationLimits {
            max_iter: 10_000,
            decode_eps: 1e-10,
            stall_eps: 1e-13,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Decodable,
    NotDecodable,
    Inconclusive,
}

impl Verdict {
    pub fn is_decodable(self) -> bool {
        self == Verdict::Decodable
    }
}

/// One iterate; `cb` is absent for the SB-only bound and `sb` for the CB-only ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub cb: Option<f64>,
    pub sb: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTrajectory {
    pub states: Vec<BoundState>,
    pub verdict: Verdict,
    pub iterations: usize,
}

impl BoundTrajectory {
    pub fn last(&self) -> BoundState {
        *self
            .states
            .last()
            .expect("trajectory holds the start state")
    }
}

/// Runs a bound recursion from the channel's own measures.
pub fn iterate_bound(
    kind: BoundKind,
    start: NoisePair,
    e: &DegreeEnsemble,
    limits: &IterationLimits,
) -> BoundTrajectory {
    let state = |np: NoisePair| match kind {
        BoundKind::UbCb | BoundKind::LbCb => BoundState {
            cb: Some(np.cb),
            sb: None,
        },
        BoundKind::UbSb => BoundState {
            cb: None,
            sb: Some(np.sb),
        },
        BoundKind::UbCbSb => BoundState {
            cb: Some(np.cb),
            sb: Some(np.sb),
        },
    };
    let step = |np: NoisePair| match kind {
        BoundKind::UbCb => NoisePair {
            cb: ub_cb_step(np.cb, e, start.cb),
            sb: 0.0,
        },
        BoundKind::LbCb => NoisePair {
            cb: lb_cb_step(np.cb, e, start.cb),
            sb: 0.0,
        },
        BoundKind::UbSb => NoisePair {
            cb: 0.0,
            sb: ub_sb_step(np.sb, e, start.sb),
        },
        BoundKind::UbCbSb => two_dim_var_step(start, two_dim_check_step(np, e), e),
    };
    // The measure whose vanishing certifies decoding.
    let tracked = |np: NoisePair| {
        if kind == BoundKind::UbSb {
            np.sb
        } else {
            np.cb
        }
    };

    let mut states = vec![state(start)];
    let mut current = start;
    for it in 1..=limits.max_iter {
        let next = step(current);
        states.push(state(next));
        if tracked(next) < limits.decode_eps {
            return BoundTrajectory {
                states,
                verdict: Verdict::Decodable,
                iterations: it,
            };
        }
        let change = (next.cb - current.cb)
            .abs()
            .max((next.sb - current.sb).abs());
        if change < limits.stall_eps {
            return BoundTrajectory {
                states,
                verdict: Verdict::NotDecodable,
                iterations: it,
            };
        }
        current = next;
    }
    BoundTrajectory {
        states,
        verdict: Verdict::Inconclusive,
        iterations: limits.max_iter,
    }
}
