//! Binary-input channel models and their noise measures.
//!
//! Two scalar measures are tracked for every binary-input channel under a
//! uniform input: the Bhattacharyya parameter `CB = E[sqrt(p(x̄|y)/p(x|y))]` and
//! the soft-bit value `SB = 2 E[p(x̄|y)]`. Both are 0 for a noise-free channel
//! and 1 when the output is independent of the input, and every channel obeys
//! `SB <= CB <= sqrt(SB)`.
//!
//! The m-ary side (symmetric channels, CB vectors, MSC decomposition) lives in
//! [`msc`] and [`decompose`]; channel spec strings are parsed by [`spec`].

pub mod decompose;
pub mod msc;
pub mod quadrature;
pub mod spec;

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Slack used when validating probability vectors and moment orderings.
pub const PROB_TOL: f64 = 1e-12;

/// Absolute tolerance for the SB integrals of the continuous-output channels.
pub const QUAD_TOL: f64 = 1e-9;

/// Binary-input memoryless channel models.
///
/// Inputs are `{0, 1}`; the continuous-output models map `0 -> +1` and `1 -> -1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BinaryChannel {
    /// Binary symmetric channel with crossover probability `p ∈ [0, 1/2]`.
    Bsc { p: f64 },
    /// Binary erasure channel.
    Bec { eps: f64 },
    /// BPSK over additive white Gaussian noise with standard deviation `sigma`.
    BiAwgn { sigma: f64 },
    /// BPSK over additive Laplace noise `p(y) = exp(-|y|/lambda) / (2 lambda)`.
    BiLaplace { lambda: f64 },
    /// BPSK with unit-energy Rayleigh amplitude known at the receiver, plus
    /// Gaussian noise of standard deviation `sigma`.
    BiRayleigh { sigma: f64 },
    /// Binary-input binary-output non-symmetric channel:
    /// `p01 = P(Y=1|X=0)`, `p10 = P(Y=0|X=1)`, with `p01 + p10 <= 1`.
    Bnsc { p01: f64, p10: f64 },
    /// Mixture of BSCs observed with side information; atoms are `(weight, p)`.
    BscMixture { atoms: Vec<(f64, f64)> },
}

impl BinaryChannel {
    pub fn bsc(p: f64) -> Result<Self> {
        let ch = BinaryChannel::Bsc { p };
        ch.validate()?;
        Ok(ch)
    }

    pub fn bec(eps: f64) -> Result<Self> {
        let ch = BinaryChannel::Bec { eps };
        ch.validate()?;
        Ok(ch)
    }

    pub fn bi_awgn(sigma: f64) -> Result<Self> {
        let ch = BinaryChannel::BiAwgn { sigma };
        ch.validate()?;
        Ok(ch)
    }

    pub fn bi_laplace(lambda: f64) -> Result<Self> {
        let ch = BinaryChannel::BiLaplace { lambda };
        ch.validate()?;
        Ok(ch)
    }

    pub fn bi_rayleigh(sigma: f64) -> Result<Self> {
        let ch = BinaryChannel::BiRayleigh { sigma };
        ch.validate()?;
        Ok(ch)
    }

    /// Builds a BNSC, relabelling the outputs when `p01 + p10 > 1`.
    pub fn bnsc(p01: f64, p10: f64) -> Result<Self> {
        check_prob("p01", p01)?;
        check_prob("p10", p10)?;
        let (p01, p10) = if p01 + p10 > 1.0 {
            (1.0 - p01, 1.0 - p10)
        } else {
            (p01, p10)
        };
        Ok(BinaryChannel::Bnsc { p01, p10 })
    }

    /// The z-channel: a BNSC with `p01 = 0`.
    pub fn z_channel(p10: f64) -> Result<Self> {
        Self::bnsc(0.0, p10)
    }

    /// Builds a BSC mixture; weights are renormalized after validation.
    pub fn bsc_mixture(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let ch = BinaryChannel::BscMixture { atoms };
        ch.validate()?;
        let BinaryChannel::BscMixture { atoms } = ch else {
            unreachable!()
        };
        let total: f64 = atoms.iter().map(|(w, _)| w).sum();
        Ok(BinaryChannel::BscMixture {
            atoms: atoms.into_iter().map(|(w, p)| (w / total, p)).collect(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BinaryChannel::Bsc { p } => check_crossover("p", p),
            BinaryChannel::Bec { eps } => check_prob("eps", eps),
            BinaryChannel::BiAwgn { sigma } | BinaryChannel::BiRayleigh { sigma } => {
                check_scale("sigma", sigma)
            }
            BinaryChannel::BiLaplace { lambda } => check_scale("lambda", lambda),
            BinaryChannel::Bnsc { p01, p10 } => {
                check_prob("p01", p01)?;
                check_prob("p10", p10)?;
                if p01 + p10 > 1.0 + PROB_TOL {
                    return domain(format!("bnsc requires p01 + p10 <= 1, got {}", p01 + p10));
                }
                Ok(())
            }
            BinaryChannel::BscMixture { ref atoms } => {
                if atoms.is_empty() {
                    return domain("bsc mixture needs at least one atom");
                }
                for &(w, p) in atoms {
                    if !(w >= 0.0 && w.is_finite()) {
                        return domain(format!("mixture weight {w} is negative"));
                    }
                    check_crossover("p", p)?;
                }
                let total: f64 = atoms.iter().map(|(w, _)| w).sum();
                if (total - 1.0).abs() > PROB_TOL {
                    return domain(format!("mixture weights sum to {total}, expected 1"));
                }
                Ok(())
            }
        }
    }

    /// True for the models whose MAP error probability is computed exactly.
    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            BinaryChannel::Bsc { .. }
                | BinaryChannel::Bec { .. }
                | BinaryChannel::Bnsc { .. }
                | BinaryChannel::BscMixture { .. }
        )
    }

    /// Output-symmetric (BI-SO) models.
    pub fn is_symmetric(&self) -> bool {
        match *self {
            BinaryChannel::Bnsc { p01, p10 } => (p01 - p10).abs() <= PROB_TOL,
            _ => true,
        }
    }

    /// Bhattacharyya noise parameter under a uniform input.
    pub fn cb(&self) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            BinaryChannel::Bsc { p } => bsc_cb(p),
            BinaryChannel::Bec { eps } => eps,
            BinaryChannel::BiAwgn { sigma } => (-1.0 / (2.0 * sigma * sigma)).exp(),
            BinaryChannel::BiLaplace { lambda } => (1.0 + lambda) / lambda * (-1.0 / lambda).exp(),
            BinaryChannel::BiRayleigh { sigma } => 1.0 / (1.0 + 1.0 / (2.0 * sigma * sigma)),
            BinaryChannel::Bnsc { p01, p10 } => {
                (p01 * (1.0 - p10)).sqrt() + (p10 * (1.0 - p01)).sqrt()
            }
            BinaryChannel::BscMixture { ref atoms } => {
                atoms.iter().map(|&(w, p)| w * bsc_cb(p)).sum()
            }
        })
    }

    /// Soft-bit value under a uniform input.
    pub fn sb(&self) -> Result<f64> {
        self.validate()?;
        match *self {
            BinaryChannel::Bsc { p } => Ok(bsc_sb(p)),
            BinaryChannel::Bec { eps } => Ok(eps),
            BinaryChannel::BiAwgn { sigma } => awgn_sb(sigma),
            BinaryChannel::BiLaplace { lambda } => {
                let e = (-1.0 / lambda).exp();
                Ok(e / (1.0 / lambda).cosh() + 2.0 * e * (1.0 / (2.0 * lambda)).tanh().atan())
            }
            BinaryChannel::BiRayleigh { sigma } => rayleigh_sb(sigma),
            BinaryChannel::Bnsc { .. } => {
                let r = self.reverse_form()?;
                Ok(r.r0 * bsc_sb(r.r01) + r.r1 * bsc_sb(r.r10))
            }
            BinaryChannel::BscMixture { ref atoms } => {
                Ok(atoms.iter().map(|&(w, p)| w * bsc_sb(p)).sum())
            }
        }
    }

    /// MAP bit-error probability under a uniform input; ties are broken by a fair coin.
    pub fn pe(&self) -> Result<f64> {
        self.validate()?;
        match *self {
            BinaryChannel::Bsc { p } => Ok(p),
            BinaryChannel::Bec { eps } => Ok(eps / 2.0),
            BinaryChannel::Bnsc { p01, p10 } => {
                Ok(0.5 * ((1.0 - p01).min(p10) + p01.min(1.0 - p10)))
            }
            BinaryChannel::BscMixture { ref atoms } => Ok(atoms.iter().map(|&(w, p)| w * p).sum()),
            _ => Err(Error::Unsupported(format!(
                "error probability of continuous-output channel {}",
                self.name()
            ))),
        }
    }

    pub fn noise_pair(&self) -> Result<NoisePair> {
        NoisePair::new(self.cb()?, self.sb()?)
    }

    /// Reverse-channel (output-to-input) description of a BNSC.
    pub fn reverse_form(&self) -> Result<ReverseBnsc> {
        match *self {
            BinaryChannel::Bnsc { p01, p10 } => {
                self.validate()?;
                Ok(ReverseBnsc::from_forward(p01, p10))
            }
            _ => Err(Error::Unsupported(format!(
                "reverse form is defined for bnsc, not {}",
                self.name()
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BinaryChannel::Bsc { .. } => "bsc",
            BinaryChannel::Bec { .. } => "bec",
            BinaryChannel::BiAwgn { .. } => "biawgn",
            BinaryChannel::BiLaplace { .. } => "bilc",
            BinaryChannel::BiRayleigh { .. } => "rayleigh",
            BinaryChannel::Bnsc { .. } => "bnsc",
            BinaryChannel::BscMixture { .. } => "mix",
        }
    }
}

fn check_prob(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        domain(format!("{name} = {v} outside [0, 1]"))
    }
}

fn check_crossover(name: &str, v: f64) -> Result<()> {
    if (0.0..=0.5).contains(&v) {
        Ok(())
    } else {
        domain(format!("{name} = {v} outside [0, 1/2]"))
    }
}

fn check_scale(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} = {v} must be positive and finite"))
    }
}

/// `2 sqrt(p(1-p))`, the CB of a BSC.
pub fn bsc_cb(p: f64) -> f64 {
    2.0 * (p * (1.0 - p)).max(0.0).sqrt()
}

/// `4 p(1-p)`, the SB of a BSC.
pub fn bsc_sb(p: f64) -> f64 {
    4.0 * p * (1.0 - p)
}

/// Crossover probability of the BSC whose Bhattacharyya index is `a = 2 sqrt(p(1-p))`.
pub fn bsc_crossover(a: f64) -> f64 {
    let a = a.clamp(0.0, 1.0);
    // (1 - sqrt(1 - a²)) / 2 written to avoid cancellation for small a.
    0.5 * a * a / (1.0 + (1.0 - a * a).sqrt())
}

/// `2 / (1 + e^z)` without overflow.
pub(crate) fn soft_bit_weight(z: f64) -> f64 {
    if z > 0.0 {
        let e = (-z).exp();
        2.0 * e / (1.0 + e)
    } else {
        2.0 / (1.0 + z.exp())
    }
}

fn gaussian(y: f64, mean: f64, sigma: f64) -> f64 {
    let d = (y - mean) / sigma;
    (-0.5 * d * d).exp() / (sigma * (2.0 * PI).sqrt())
}

/// SB of a BPSK symbol with amplitude `amp` in Gaussian noise: `E[2/(1+e^m)]`, `m = 2 amp y/σ²`.
fn gaussian_sb_given_amplitude(amp: f64, sigma: f64, tol: f64) -> Result<f64> {
    if amp == 0.0 {
        return Ok(1.0);
    }
    let s2 = sigma * sigma;
    quadrature::integrate(
        |y| gaussian(y, amp, sigma) * soft_bit_weight(2.0 * amp * y / s2),
        amp - 30.0 * sigma,
        amp + 30.0 * sigma,
        tol,
    )
}

fn awgn_sb(sigma: f64) -> Result<f64> {
    gaussian_sb_given_amplitude(1.0, sigma, QUAD_TOL)
}

fn rayleigh_sb(sigma: f64) -> Result<f64> {
    let failure: Cell<Option<Error>> = Cell::new(None);
    let outer = quadrature::integrate(
        |a| {
            let density = 2.0 * a * (-a * a).exp();
            if density < 1e-300 {
                return 0.0;
            }
            match gaussian_sb_given_amplitude(a, sigma, QUAD_TOL * 0.1) {
                Ok(v) => density * v,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        },
        0.0,
        8.0,
        QUAD_TOL,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(outer),
    }
}

/// A `(CB, SB)` pair satisfying `SB <= CB <= sqrt(SB)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisePair {
    pub cb: f64,
    pub sb: f64,
}

impl NoisePair {
    pub fn new(cb: f64, sb: f64) -> Result<Self> {
        let np = NoisePair { cb, sb };
        if np.is_valid() {
            Ok(np)
        } else {
            domain(format!(
                "(cb, sb) = ({cb}, {sb}) violates sb <= cb <= sqrt(sb) on [0, 1]"
            ))
        }
    }

    pub const PERFECT: NoisePair = NoisePair { cb: 0.0, sb: 0.0 };
    pub const USELESS: NoisePair = NoisePair { cb: 1.0, sb: 1.0 };

    /// Pair of a BSC with Bhattacharyya index `cb`.
    pub fn bsc_consistent(cb: f64) -> Self {
        NoisePair { cb, sb: cb * cb }
    }

    pub fn is_valid(&self) -> bool {
        let NoisePair { cb, sb } = *self;
        cb.is_finite()
            && sb.is_finite()
            && (-PROB_TOL..=1.0 + PROB_TOL).contains(&cb)
            && (-PROB_TOL..=1.0 + PROB_TOL).contains(&sb)
            && sb <= cb + PROB_TOL
            && cb <= sb.max(0.0).sqrt() + PROB_TOL
    }

    /// Tightens a pair of upper bounds into the feasible set.
    ///
    /// If the true channel has `cb <= C` and `sb <= S`, then also
    /// `sb <= min(S, C)` and `cb <= min(C, sqrt(S))`.
    pub fn tightened(cb: f64, sb: f64) -> Self {
        let cb = cb.clamp(0.0, 1.0);
        let sb = sb.clamp(0.0, 1.0).min(cb);
        let cb = cb.min(sb.sqrt());
        NoisePair { cb, sb }
    }

    /// `t = SB / CB`, the largest Bhattacharyya index used by the extremal families.
    pub fn ratio(&self) -> f64 {
        if self.cb <= 0.0 {
            0.0
        } else {
            (self.sb / self.cb).min(1.0)
        }
    }
}

/// A BNSC seen from the output: two BSCs `r01`, `r10` selected with
/// probabilities `R(0)`, `R(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReverseBnsc {
    pub r0: f64,
    pub r1: f64,
    /// `P(X=1 | Y=0)`.
    pub r01: f64,
    /// `P(X=0 | Y=1)`.
    pub r10: f64,
}

impl ReverseBnsc {
    pub fn from_forward(p01: f64, p10: f64) -> Self {
        let r0 = (1.0 - p01 + p10) / 2.0;
        let r1 = (1.0 + p01 - p10) / 2.0;
        let r01 = if r0 > 0.0 { p10 / (2.0 * r0) } else { 0.0 };
        let r10 = if r1 > 0.0 { p01 / (2.0 * r1) } else { 0.0 };
        ReverseBnsc { r0, r1, r01, r10 }
    }

    /// Recovers `(p01, p10)` by Bayes' rule under a uniform input.
    pub fn to_forward(&self) -> (f64, f64) {
        // P(Y=1, X=0) = R1 r10 and P(X=0) = 1/2.
        (2.0 * self.r1 * self.r10, 2.0 * self.r0 * self.r01)
    }

    pub fn cb(&self) -> f64 {
        self.r0 * bsc_cb(self.r01) + self.r1 * bsc_cb(self.r10)
    }

    pub fn sb(&self) -> f64 {
        self.r0 * bsc_sb(self.r01) + self.r1 * bsc_sb(self.r10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bsc_endpoints() {
        assert_eq!(BinaryChannel::bsc(0.0).unwrap().cb().unwrap(), 0.0);
        assert_abs_diff_eq!(
            BinaryChannel::bsc(0.5).unwrap().cb().unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            BinaryChannel::bsc(0.1).unwrap().sb().unwrap(),
            0.36,
            epsilon = 1e-15
        );
        assert_eq!(BinaryChannel::bsc(0.1).unwrap().pe().unwrap(), 0.1);
    }

    #[test]
    fn awgn_cb_at_table_threshold() {
        let cb = BinaryChannel::bi_awgn(0.7690).unwrap().cb().unwrap();
        assert_abs_diff_eq!(cb, 0.4294, epsilon = 1e-3);
    }

    #[test]
    fn bec_measures() {
        let ch = BinaryChannel::bec(0.3).unwrap();
        assert_eq!(ch.cb().unwrap(), 0.3);
        assert_eq!(ch.sb().unwrap(), 0.3);
        assert_eq!(BinaryChannel::bec(0.42).unwrap().sb().unwrap(), 0.42);
        assert_eq!(ch.pe().unwrap(), 0.15);
    }

    #[test]
    fn z_channel_cb() {
        let ch = BinaryChannel::bnsc(0.0, 0.2).unwrap();
        assert_abs_diff_eq!(ch.cb().unwrap(), 0.2_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn mixture_pe_averages() {
        let ch = BinaryChannel::bsc_mixture(vec![(0.5, 0.0), (0.5, 0.5)]).unwrap();
        assert_abs_diff_eq!(ch.pe().unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn rayleigh_sb_at_table_threshold() {
        let sb = BinaryChannel::bi_rayleigh(0.5804).unwrap().sb().unwrap();
        assert_abs_diff_eq!(sb, 0.3068, epsilon = 2e-3);
    }

    #[test]
    fn continuous_pe_is_unsupported() {
        let err = BinaryChannel::bi_awgn(0.8).unwrap().pe().unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(BinaryChannel::bsc(0.6).is_err());
        assert!(BinaryChannel::bec(-0.1).is_err());
        assert!(BinaryChannel::bi_awgn(0.0).is_err());
        assert!(BinaryChannel::bsc_mixture(vec![(0.5, 0.1)]).is_err());
        assert!(BinaryChannel::BscMixture {
            atoms: vec![(0.5, 0.1)]
        }
        .cb()
        .is_err());
        assert!(BinaryChannel::bsc_mixture(vec![]).is_err());
    }

    #[test]
    fn bnsc_relabels_outputs() {
        let ch = BinaryChannel::bnsc(0.9, 0.3).unwrap();
        assert_eq!(
            ch,
            BinaryChannel::Bnsc {
                p01: 0.09999999999999998,
                p10: 0.7
            }
        );
        // Relabelling does not change the measures.
        let direct = (0.9f64 * 0.7).sqrt() + (0.3f64 * 0.1).sqrt();
        assert_abs_diff_eq!(ch.cb().unwrap(), direct, epsilon = 1e-12);
    }

    #[test]
    fn reverse_form_examples() {
        let r = BinaryChannel::bnsc(0.0, 0.2)
            .unwrap()
            .reverse_form()
            .unwrap();
        assert_abs_diff_eq!(r.r0, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(r.r1, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(r.r01, 1.0 / 6.0, epsilon = 1e-15);
        assert_eq!(r.r10, 0.0);

        let r = BinaryChannel::bnsc(0.13, 0.13)
            .unwrap()
            .reverse_form()
            .unwrap();
        assert_abs_diff_eq!(r.r0, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.r01, 0.13, epsilon = 1e-15);
        assert_abs_diff_eq!(r.r10, 0.13, epsilon = 1e-15);

        let ch = BinaryChannel::bnsc(0.1, 0.3).unwrap();
        let r = ch.reverse_form().unwrap();
        assert_abs_diff_eq!(r.cb(), ch.cb().unwrap(), epsilon = 1e-12);
        let (p01, p10) = r.to_forward();
        assert_abs_diff_eq!(p01, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(p10, 0.3, epsilon = 1e-12);
    }

    #[test]
    fn noise_pair_ordering() {
        assert!(NoisePair::new(0.4, 0.2).is_ok());
        assert!(NoisePair::new(0.4, 0.1).is_err());
        assert!(NoisePair::new(0.4, 0.5).is_err());
        let np = NoisePair::tightened(0.3, 0.5);
        assert!(np.is_valid());
        assert_eq!(np.sb, 0.3);
    }

    #[test]
    fn crossover_inverts_index() {
        for &p in &[0.0, 1e-9, 0.01, 0.2, 0.5] {
            assert_abs_diff_eq!(bsc_crossover(bsc_cb(p)), p, epsilon = 1e-12);
        }
    }
}
