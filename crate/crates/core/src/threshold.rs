//! Threshold searches: scalar measure thresholds, bisection over channel
//! families, and decodable-region sweeps in the `(CB, SB)` plane.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binary::{iterate_bound, ub_sb_star, BoundKind, IterationLimits};
use crate::channel::NoisePair;
use crate::de::{de_threshold_in, DeConfig};
use crate::ensemble::DegreeEnsemble;
use crate::error::{Error, Result};
use crate::family::ChannelFamily;

/// Default number of bisection steps.
pub const DEFAULT_STEPS: usize = 24;

/// Scalar thresholds on a single channel measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureBound {
    UbCb,
    UbSb,
    UbSbStar,
}

/// How a channel is judged decodable during a family search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certifier {
    Bound(BoundKind),
    /// Decodable iff the channel SB is below this value.
    SbStar(f64),
    De(DeConfig),
}

impl Certifier {
    pub fn label(&self) -> &'static str {
        match self {
            Certifier::Bound(k) => k.label(),
            Certifier::SbStar(_) => "ub-sb-star",
            Certifier::De(_) => "de",
        }
    }
}

fn bisect(mut lo: f64, mut hi: f64, tol: f64, mut decodes: impl FnMut(f64) -> bool) -> (f64, f64) {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if decodes(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Largest channel measure for which the scalar recursion still converges.
///
/// `UbSbStar` runs DE on the BSC family with `de` and returns `4p*(1 - p*)`.
pub fn measure_threshold(
    kind: MeasureBound,
    e: &DegreeEnsemble,
    tol: f64,
    limits: &IterationLimits,
    de: &DeConfig,
) -> f64 {
    let tol = tol.max(1e-15);
    let run = |bound: BoundKind, np: NoisePair| {
        iterate_bound(bound, np, e, limits).verdict.is_decodable()
    };
    match kind {
        MeasureBound::UbCb => {
            let (lo, hi) = bisect(0.0, 1.0, tol, |c| {
                run(BoundKind::UbCb, NoisePair { cb: c, sb: 0.0 })
            });
            0.5 * (lo + hi)
        }
        MeasureBound::UbSb => {
            let (lo, hi) = bisect(0.0, 1.0, tol, |s| {
                run(BoundKind::UbSb, NoisePair { cb: 0.0, sb: s })
            });
            0.5 * (lo + hi)
        }
        MeasureBound::UbSbStar => {
            let (lo, hi) = ChannelFamily::Bsc.range();
            let steps = steps_for(lo, hi, tol / 4.0).max(12);
            let t = de_threshold_in(ChannelFamily::Bsc, e, de, lo, hi, steps)
                .expect("BSC family is valid on its whole range");
            ub_sb_star(t.value)
        }
    }
}

fn steps_for(lo: f64, hi: f64, tol: f64) -> usize {
    ((hi - lo) / tol).log2().ceil().max(1.0) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub parameter: String,
    /// Largest parameter found decodable.
    pub lo: f64,
    /// Smallest parameter found not decodable.
    pub hi: f64,
    pub source: String,
    /// Number of bisection probes.
    pub iterations: usize,
}

impl ThresholdResult {
    pub fn value(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn to_json(&self, family: ChannelFamily, e: &DegreeEnsemble) -> serde_json::Value {
        serde_json::json!({
            "schema": "ldpc-bounds/threshold/1",
            "bound": self.source,
            "family": family.label(),
            "parameter": self.parameter,
            "ensemble": e.label(),
            "lo": self.lo,
            "hi": self.hi,
            "value": self.value(),
            "iterations": self.iterations,
        })
    }
}

/// Verdict of `cert` on one channel of the family; `Inconclusive` counts as not decodable.
pub fn family_decodes(
    cert: &Certifier,
    family: ChannelFamily,
    param: f64,
    e: &DegreeEnsemble,
    limits: &IterationLimits,
) -> Result<bool> {
    let ch = family.channel(param)?;
    let needs_symmetry = !matches!(cert, Certifier::Bound(BoundKind::UbCb | BoundKind::LbCb));
    if needs_symmetry && !family.is_symmetric() {
        return Err(Error::Unsupported(format!(
            "{} requires a symmetric channel, {} is not",
            cert.label(),
            family.label()
        )));
    }
    Ok(match cert {
        Certifier::Bound(kind) => {
            let cb = ch.cb()?;
            let sb = if kind.uses_sb() { ch.sb()? } else { 0.0 };
            let start = if *kind == BoundKind::UbCbSb {
                NoisePair::tightened(cb, sb)
            } else {
                NoisePair { cb, sb }
            };
            iterate_bound(*kind, start, e, limits)
                .verdict
                .is_decodable()
        }
        Certifier::SbStar(star) => ch.sb()? < *star,
        Certifier::De(cfg) => crate::de::run_de(&ch, e, cfg)?.decodable,
    })
}

/// Bisects the family parameter on the certifier's verdict until the bracket
/// is at most `tol` wide.
pub fn channel_threshold(
    cert: &Certifier,
    family: ChannelFamily,
    e: &DegreeEnsemble,
    tol: f64,
    limits: &IterationLimits,
) -> Result<ThresholdResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (lo0, hi0) = family.range();
    let decodes = |x: f64| family_decodes(cert, family, x, e, limits);
    let (at_lo, at_hi) = (decodes(lo0)?, decodes(hi0)?);
    if !at_lo || at_hi {
        return Err(Error::NonMonotone(format!(
            "{} on {}: verdict {} at {} = {lo0}, {} at {hi0}",
            cert.label(),
            family.label(),
            verdict_word(at_lo),
            family.parameter_name(),
            verdict_word(at_hi),
        )));
    }
    let mut failure = None;
    let mut probes = 0;
    let (lo, hi) = bisect(lo0, hi0, tol, |x| {
        probes += 1;
        match decodes(x) {
            Ok(d) => d,
            Err(err) => {
                failure.get_or_insert(err);
                false
            }
        }
    });
    if let Some(err) = failure {
        return Err(err);
    }
    // Probes are deterministic, so disagreement here means a non-monotone verdict.
    if !decodes(lo)? || decodes(hi)? {
        return Err(Error::NonMonotone(format!(
            "{} on {}: re-evaluation at bracket [{lo}, {hi}] disagrees",
            cert.label(),
            family.label()
        )));
    }
    Ok(ThresholdResult {
        parameter: family.parameter_name().to_string(),
        lo,
        hi,
        source: cert.label().to_string(),
        iterations: probes,
    })
}

fn verdict_word(decodable: bool) -> &'static str {
    if decodable {
        "decodable"
    } else {
        "not decodable"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub cb: f64,
    pub sb: f64,
    pub decodable: bool,
    pub iterations: usize,
}

/// Points of a `(CB, SB)` grid that satisfy `sb <= cb <= sqrt(sb)`, with the
/// two-dimensional bound's verdict. A point marked decodable is certified;
/// an unmarked point may still be decodable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub points: Vec<RegionPoint>,
}

/// Overlay lines: `cb = ub_cb`, `sb = ub_sb`, `sb = ub_sb_star`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionOverlay {
    pub ub_cb: f64,
    pub ub_sb: f64,
    pub ub_sb_star: f64,
}

impl RegionGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cb,sb,decodable,iterations\n");
        for p in &self.points {
            writeln!(out, "{},{},{},{}", p.cb, p.sb, p.decodable, p.iterations)
                .expect("write to string");
        }
        out
    }
}

impl RegionOverlay {
    pub fn compute(e: &DegreeEnsemble, tol: f64, limits: &IterationLimits, de: &DeConfig) -> Self {
        let m = |k| measure_threshold(k, e, tol, limits, de);
        RegionOverlay {
            ub_cb: m(MeasureBound::UbCb),
            ub_sb: m(MeasureBound::UbSb),
            ub_sb_star: m(MeasureBound::UbSbStar),
        }
    }

    pub fn to_json(&self, e: &DegreeEnsemble) -> serde_json::Value {
        serde_json::json!({
            "schema": "ldpc-bounds/region-overlay/1",
            "ensemble": e.label(),
            "ub_cb": self.ub_cb,
            "ub_sb": self.ub_sb,
            "ub_sb_star": self.ub_sb_star,
        })
    }
}

/// Evaluates the two-dimensional bound on an `n_cb x n_sb` grid over `[0, 1]²`.
pub fn region_sweep(
    e: &DegreeEnsemble,
    n_cb: usize,
    n_sb: usize,
    limits: &IterationLimits,
) -> Result<RegionGrid> {
    if n_cb < 2 || n_sb < 2 {
        return Err(Error::Domain(format!(
            "grid must be at least 2x2, got {n_cb}x{n_sb}"
        )));
    }
    let axis = |i: usize, n: usize| i as f64 / (n - 1) as f64;
    let feasible: Vec<(f64, f64)> = (0..n_cb)
        .flat_map(|i| (0..n_sb).map(move |j| (axis(i, n_cb), axis(j, n_sb))))
        .filter(|&(cb, sb)| NoisePair { cb, sb }.is_valid())
        .collect();
    let points = feasible
        .par_iter()
        .map(|&(cb, sb)| {
            let run = iterate_bound(BoundKind::UbCbSb, NoisePair::tightened(cb, sb), e, limits);
            RegionPoint {
                cb,
                sb,
                decodable: run.verdict.is_decodable(),
                iterations: run.iterations,
            }
        })
        .collect();
    Ok(RegionGrid { points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e36() -> DegreeEnsemble {
        DegreeEnsemble::regular(3, 6).unwrap()
    }

    #[test]
    fn scalar_thresholds() {
        let lim = IterationLimits::default();
        let de = DeConfig::default();
        let cb = measure_threshold(MeasureBound::UbCb, &e36(), 1e-6, &lim, &de);
        assert!((cb - 0.4294).abs() < 5e-4, "{cb}");
        let sb = measure_threshold(MeasureBound::UbSb, &e36(), 1e-6, &lim, &de);
        assert!((sb - 0.2632).abs() < 5e-4, "{sb}");
    }

    #[test]
    fn z_channel_ub_cb() {
        let r = channel_threshold(
            &Certifier::Bound(BoundKind::UbCb),
            ChannelFamily::ZChannel,
            &e36(),
            1e-6,
            &IterationLimits::default(),
        )
        .unwrap();
        assert!((r.value() - 0.1844).abs() < 1e-3, "{r:?}");
        assert!(r.hi - r.lo <= 1e-6);
    }

    #[test]
    fn sb_star_certifier_inverts_the_family_sb() {
        let r = channel_threshold(
            &Certifier::SbStar(0.3068),
            ChannelFamily::Bsc,
            &e36(),
            1e-7,
            &IterationLimits::default(),
        )
        .unwrap();
        assert!((r.value() - 0.0837).abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn unsupported_measure_is_an_error() {
        let r = channel_threshold(
            &Certifier::Bound(BoundKind::UbSb),
            ChannelFamily::ZChannel,
            &e36(),
            1e-3,
            &IterationLimits::default(),
        );
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn region_corners_and_feasibility() {
        let g = region_sweep(&e36(), 11, 11, &IterationLimits::default()).unwrap();
        let at = |cb: f64, sb: f64| {
            g.points
                .iter()
                .find(|p| (p.cb - cb).abs() < 1e-12 && (p.sb - sb).abs() < 1e-12)
                .copied()
        };
        assert!(at(0.0, 0.0).unwrap().decodable);
        assert!(!at(1.0, 1.0).unwrap().decodable);
        assert!(at(0.5, 0.1).is_none());
        assert!(g
            .points
            .iter()
            .all(|p| p.sb <= p.cb + 1e-12 && p.cb <= p.sb.sqrt() + 1e-12));
        assert!(g.to_csv().starts_with("cb,sb,decodable,iterations\n"));
        assert!(region_sweep(&e36(), 1, 5, &IterationLimits::default()).is_err());
    }
}
