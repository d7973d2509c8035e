//! Extremal BSC mixtures under `(CB, SB)` moment constraints.
//!
//! A BI-SO channel is a mixture of BSCs indexed by `a = 2 sqrt(p(1-p))`. Its CB
//! is `E[a]` and its SB is `E[a²]`, so a `(CB, SB)` pair constrains the first two
//! moments of the mixing law. The functions here give the mixtures that
//! maximize (or upper bound) a node's output noise under such constraints.

mod lp;

pub use lp::lp_oracle;

use serde::{Deserialize, Serialize};

use crate::channel::{NoisePair, PROB_TOL};
use crate::error::{domain, Result};

/// Tolerance on `t - cb` below which the upper family collapses to a BSC.
pub const COLLAPSE_TOL: f64 = 1e-14;

/// A finite mixture of BSCs: `(weight, a)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicBscFamily {
    atoms: Vec<(f64, f64)>,
}

impl AtomicBscFamily {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return domain("bsc family needs at least one atom");
        }
        for &(w, a) in &atoms {
            if !(w >= 0.0 && w.is_finite()) {
                return domain(format!("atom weight {w} is negative"));
            }
            if !(0.0..=1.0).contains(&a) {
                return domain(format!("atom index {a} outside [0, 1]"));
            }
        }
        let total: f64 = atoms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > PROB_TOL {
            return domain(format!("atom weights sum to {total}, expected 1"));
        }
        Ok(Self::from_trusted(atoms))
    }

    /// Drops zero-weight atoms; callers guarantee a valid partition of unity.
    fn from_trusted(atoms: Vec<(f64, f64)>) -> Self {
        let atoms: Vec<_> = atoms
            .into_iter()
            .filter(|(w, _)| *w > 0.0)
            .map(|(w, a)| (w, a.clamp(0.0, 1.0)))
            .collect();
        debug_assert!(!atoms.is_empty());
        AtomicBscFamily { atoms }
    }

    pub fn single(a: f64) -> Self {
        AtomicBscFamily {
            atoms: vec![(1.0, a.clamp(0.0, 1.0))],
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|&(w, a)| w * f(a)).sum()
    }

    /// `E[a]`, the CB of the mixture.
    pub fn mean(&self) -> f64 {
        self.expect(|a| a)
    }

    /// `E[a²]`, the SB of the mixture.
    pub fn second_moment(&self) -> f64 {
        self.expect(|a| a * a)
    }
}

/// CB transfer of a check node joining a BSC of index `a` with a channel of CB `b`.
pub fn check_node_transfer(a: f64, b: f64) -> f64 {
    (a * a * (1.0 - b * b) + b * b).sqrt()
}

/// SB of a variable node joining BSCs of indices `a` and `b`.
pub fn variable_node_transfer(a: f64, b: f64) -> f64 {
    let den = a * a * (1.0 - b * b) + b * b;
    if den <= 0.0 {
        0.0
    } else {
        a * a * b * b / den
    }
}

/// The mixture maximizing `E[check_node_transfer(a, b)]` for every `b`:
/// mass `cb/t` at `a = t = sb/cb` and the rest at `a = 0`.
pub fn check_node_maximizer(np: NoisePair) -> AtomicBscFamily {
    if np.cb <= 0.0 || np.sb <= 0.0 {
        return AtomicBscFamily::single(0.0);
    }
    let t = np.ratio();
    let w = (np.cb / t).min(1.0);
    AtomicBscFamily::from_trusted(vec![(1.0 - w, 0.0), (w, t)])
}

/// Optimal value of the check-node problem at `b`.
pub fn check_node_value(np: NoisePair, b: f64) -> f64 {
    check_node_maximizer(np).expect(|a| check_node_transfer(a, b))
}

/// Dual certificate `y0 + a y1 + a² y2 >= check_node_transfer(a, b)` for all `a ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub y0: f64,
    pub y1: f64,
    pub y2: f64,
}

impl DualCertificate {
    pub fn at(&self, a: f64) -> f64 {
        self.y0 + a * self.y1 + a * a * self.y2
    }

    /// Dual objective `y0 + cb y1 + sb y2`.
    pub fn objective(&self, np: NoisePair) -> f64 {
        self.y0 + np.cb * self.y1 + np.sb * self.y2
    }
}

pub fn check_node_dual(np: NoisePair, b: f64) -> DualCertificate {
    if np.cb <= 0.0 || np.sb <= 0.0 {
        return DualCertificate {
            y0: b,
            y1: (1.0 - b * b).max(0.0).sqrt(),
            y2: 0.0,
        };
    }
    let t = np.ratio();
    let b2 = b * b;
    let q = t * t * (1.0 - b2) + b2;
    let root = q.sqrt();
    DualCertificate {
        y0: b,
        y1: (2.0 / t) * ((t * t * (1.0 - b2) + 2.0 * b2) / (2.0 * root) - b),
        y2: (b - b2 / root) / (t * t),
    }
}

/// Tight upper bound on `E[variable_node_transfer(a, b)]` over mixtures with
/// `E[a] <= cb` and `E[a²] <= sb`.
pub fn s_envelope(np: NoisePair, b: f64) -> f64 {
    let NoisePair { cb, sb } = np;
    if cb <= 0.0 || sb <= 0.0 || b <= 0.0 {
        return 0.0;
    }
    let t = np.ratio();
    let b2 = b * b;
    if b2 <= cb * cb / (1.0 + cb * cb) {
        cb * cb * b2 / (cb * cb * (1.0 - b2) + b2)
    } else if b2 <= t * t / (1.0 + t * t) {
        0.5 * cb * b / (1.0 - b2).sqrt()
    } else {
        sb * b2 / (t * t * (1.0 - b2) + b2)
    }
}

/// The mixture attaining [`s_envelope`] at `b`.
pub fn variable_node_pointwise_maximizer(np: NoisePair, b: f64) -> AtomicBscFamily {
    let NoisePair { cb, sb } = np;
    if cb <= 0.0 || sb <= 0.0 {
        return AtomicBscFamily::single(0.0);
    }
    let t = np.ratio();
    let b2 = b * b;
    if b2 <= cb * cb / (1.0 + cb * cb) {
        AtomicBscFamily::single(cb)
    } else if b2 <= t * t / (1.0 + t * t) {
        let a = (b2 / (1.0 - b2)).sqrt();
        let w = (cb / a).min(1.0);
        AtomicBscFamily::from_trusted(vec![(w, a), (1.0 - w, 0.0)])
    } else {
        check_node_maximizer(np)
    }
}

/// A three-atom mixture whose variable-node SB dominates [`s_envelope`] for
/// every `b` simultaneously. It need not satisfy the CB constraint itself.
pub fn variable_node_upper_family(np: NoisePair) -> AtomicBscFamily {
    let NoisePair { cb: c, sb } = np;
    if c <= 0.0 || sb <= 0.0 {
        return AtomicBscFamily::single(0.0);
    }
    let t = np.ratio();
    if t - c <= COLLAPSE_TOL {
        return AtomicBscFamily::single(c);
    }
    let f = upper_family_middle_weight(c, t);
    AtomicBscFamily::from_trusted(vec![
        ((1.0 - f) * t / (t + c), c),
        (f, sb.sqrt()),
        ((1.0 - f) * c / (t + c), t),
    ])
}

/// Weight of the middle atom at `sqrt(sb)`; zero unless `t` is far above `c`.
fn upper_family_middle_weight(c: f64, t: f64) -> f64 {
    let root_tc = (t * c).sqrt();
    if 2.0 * root_tc - t + (c * (2.0 * t - c)).sqrt() >= 0.0 {
        return 0.0;
    }
    let d2 = (t - c) * (t - c);
    let eta = |w: f64| w * w * w - 2.0 * t * w * w + d2 * w;
    let eta_prime = |w: f64| 3.0 * w * w - 4.0 * t * w + d2;
    let w_star = if eta_prime(2.0 * root_tc) <= 0.0 {
        2.0 * root_tc
    } else {
        (2.0 * t - (4.0 * t * t - 3.0 * d2).sqrt()) / 3.0
    };
    (eta(w_star) / (2.0 * t * d2)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn np(cb: f64, sb: f64) -> NoisePair {
        NoisePair::new(cb, sb).unwrap()
    }

    #[test]
    fn check_maximizer_examples() {
        let bsc = check_node_maximizer(np(0.3, 0.09));
        assert_eq!(bsc.atoms().len(), 1);
        assert_abs_diff_eq!(bsc.atoms()[0].1, 0.3, epsilon = 1e-15);

        let bec = check_node_maximizer(np(0.25, 0.25));
        assert_eq!(bec.atoms(), &[(0.75, 0.0), (0.25, 1.0)]);

        let fam = check_node_maximizer(np(0.4, 0.2));
        assert_abs_diff_eq!(fam.atoms()[0].0, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(fam.atoms()[1].0, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(fam.atoms()[1].1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(fam.mean(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(fam.second_moment(), 0.2, epsilon = 1e-15);

        assert_eq!(
            check_node_maximizer(NoisePair::PERFECT).atoms(),
            &[(1.0, 0.0)]
        );
    }

    #[test]
    fn dual_matches_primal() {
        let p = np(0.4, 0.2);
        for &b in &[0.0, 0.3, 0.6, 1.0] {
            let dual = check_node_dual(p, b);
            assert_abs_diff_eq!(dual.objective(p), check_node_value(p, b), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(check_node_value(p, 0.0), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(check_node_value(p, 1.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn envelope_endpoints() {
        let p = np(0.4, 0.2);
        assert_eq!(s_envelope(p, 0.0), 0.0);
        assert_abs_diff_eq!(s_envelope(p, 1.0), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn envelope_matches_pointwise_maximizer() {
        let p = np(0.35, 0.2);
        for i in 0..=100 {
            let b = i as f64 / 100.0;
            let fam = variable_node_pointwise_maximizer(p, b);
            let value = fam.expect(|a| variable_node_transfer(a, b));
            assert_abs_diff_eq!(value, s_envelope(p, b), epsilon = 1e-12);
        }
    }

    #[test]
    fn upper_family_collapses_for_bsc() {
        let fam = variable_node_upper_family(np(0.3, 0.09));
        assert_eq!(fam.atoms().len(), 1);
        assert_abs_diff_eq!(fam.atoms()[0].1, 0.3, epsilon = 1e-12);
    }

    #[test]
    fn upper_family_example() {
        let fam = variable_node_upper_family(np(0.4, 0.2));
        let total: f64 = fam.atoms().iter().map(|(w, _)| w).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-15);
        // f = 0 here, so only the outer atoms at cb and t remain.
        assert_eq!(fam.atoms().len(), 2);
        assert_abs_diff_eq!(fam.atoms()[0].1, 0.4);
        assert_abs_diff_eq!(fam.atoms()[1].1, 0.5);
        assert_abs_diff_eq!(fam.atoms()[0].0, 0.5 / 0.9, epsilon = 1e-15);
    }

    #[test]
    fn upper_family_uses_middle_atom_when_t_is_large() {
        let fam = variable_node_upper_family(np(0.05, 0.045));
        assert_eq!(fam.atoms().len(), 3);
        assert_abs_diff_eq!(fam.atoms()[1].1, 0.045f64.sqrt(), epsilon = 1e-15);
        assert!(fam.atoms()[1].0 > 0.0);
    }
}
