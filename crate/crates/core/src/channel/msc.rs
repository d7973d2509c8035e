//! m-ary symmetric channels (MSCs), their mixtures, and pairwise noise measures.

use serde::{Deserialize, Serialize};

use super::PROB_TOL;
use crate::error::{domain, Result};

/// `P(Y = x + i | X = x) = p[i]` over `Z_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MscChannel {
    p: Vec<f64>,
}

impl MscChannel {
    /// Validates `p` as a probability vector of length `m >= 2` and renormalizes it.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return domain(format!("msc alphabet size {} < 2", p.len()));
        }
        check_distribution(&p)?;
        let total: f64 = p.iter().sum();
        Ok(MscChannel {
            p: p.into_iter().map(|v| v / total).collect(),
        })
    }

    pub fn perfect(m: usize) -> Result<Self> {
        let mut p = vec![0.0; m];
        if let Some(first) = p.first_mut() {
            *first = 1.0;
        }
        Self::new(p)
    }

    /// The x-erasure channel: half of the mass stays put, half moves by `x`.
    pub fn x_erasure(m: usize, x: usize) -> Result<Self> {
        if x % m.max(1) == 0 {
            return domain("x-erasure channel needs x != 0");
        }
        let mut p = vec![0.0; m];
        p[0] = 0.5;
        p[x % m] = 0.5;
        Self::new(p)
    }

    /// Binary symmetric channel as an MSC over `Z_2`.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::new(vec![1.0 - p, p])
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    /// `p[i mod m]`, accepting negative offsets.
    pub fn at(&self, i: isize) -> f64 {
        self.p[i.rem_euclid(self.m() as isize) as usize]
    }

    pub fn cb_vector(&self) -> CbVector {
        let m = self.m();
        let v = (0..m)
            .map(|x| {
                (0..m)
                    .map(|y| (self.p[y] * self.p[(y + x) % m]).sqrt())
                    .sum::<f64>()
                    .min(1.0)
            })
            .collect();
        CbVector { v }
    }

    /// MAP error probability between the two hypotheses `0` and `x`.
    pub fn pairwise_pe(&self, x: usize) -> Result<f64> {
        let m = self.m();
        if x % m == 0 {
            return domain("pairwise error probability needs x != 0");
        }
        Ok(0.5
            * (0..m)
                .map(|y| self.p[y].min(self.p[(y + x) % m]))
                .sum::<f64>())
    }

    /// m-ary MAP symbol error probability under a uniform input.
    pub fn pe(&self) -> f64 {
        1.0 - self.p.iter().cloned().fold(0.0, f64::max)
    }
}

/// A probabilistic combination of MSCs sharing the same alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MscMixture {
    m: usize,
    atoms: Vec<(f64, MscChannel)>,
}

impl MscMixture {
    pub fn new(atoms: Vec<(f64, MscChannel)>) -> Result<Self> {
        let Some(m) = atoms.first().map(|(_, c)| c.m()) else {
            return domain("msc mixture needs at least one atom");
        };
        if let Some((_, c)) = atoms.iter().find(|(_, c)| c.m() != m) {
            return domain(format!("mixture atoms disagree on m: {m} vs {}", c.m()));
        }
        let weights: Vec<f64> = atoms.iter().map(|(w, _)| *w).collect();
        check_distribution(&weights)?;
        let total: f64 = weights.iter().sum();
        Ok(MscMixture {
            m,
            atoms: atoms.into_iter().map(|(w, c)| (w / total, c)).collect(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn atoms(&self) -> &[(f64, MscChannel)] {
        &self.atoms
    }

    pub fn cb_vector(&self) -> CbVector {
        let mut v = vec![0.0; self.m];
        for (w, ch) in &self.atoms {
            for (acc, c) in v.iter_mut().zip(ch.cb_vector().v) {
                *acc += w * c;
            }
        }
        CbVector::from_raw(v.into_iter().map(|c| c.min(1.0)).collect())
    }

    pub fn pairwise_pe(&self, x: usize) -> Result<f64> {
        self.atoms
            .iter()
            .map(|(w, ch)| ch.pairwise_pe(x).map(|pe| w * pe))
            .sum()
    }

    /// Symbol error probability `1 - E[max_i p_i]`.
    pub fn pe(&self) -> f64 {
        self.atoms.iter().map(|(w, ch)| w * ch.pe()).sum()
    }
}

impl From<MscChannel> for MscMixture {
    fn from(ch: MscChannel) -> Self {
        MscMixture {
            m: ch.m(),
            atoms: vec![(1.0, ch)],
        }
    }
}

fn check_distribution(p: &[f64]) -> Result<()> {
    if let Some(bad) = p.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return domain(format!("probability entry {bad} is negative or not finite"));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return domain(format!("probabilities sum to {total}, expected 1"));
    }
    Ok(())
}

/// Pairwise Bhattacharyya parameters `v[x] = CB(0 -> x)` of an m-ary symmetric channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbVector {
    v: Vec<f64>,
}

impl CbVector {
    /// Validates entries in `[0, 1]`, `v[0] = 1`, and `v[x] = v[m - x]`.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        let m = v.len();
        if m < 2 {
            return domain(format!("cb vector length {m} < 2"));
        }
        if let Some(bad) = v.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return domain(format!("cb entry {bad} outside [0, 1]"));
        }
        if (v[0] - 1.0).abs() > PROB_TOL {
            return domain(format!("cb vector has v[0] = {}, expected 1", v[0]));
        }
        for x in 1..m {
            if (v[x] - v[m - x]).abs() > 1e-9 {
                return domain(format!("cb vector not symmetric at x = {x}"));
            }
        }
        Ok(CbVector { v })
    }

    pub(crate) fn from_raw(v: Vec<f64>) -> Self {
        CbVector { v }
    }

    /// The binary vector `(1, cb)`.
    pub fn binary(cb: f64) -> Result<Self> {
        Self::new(vec![1.0, cb])
    }

    /// `(1, 0, ..., 0)`: the perfect channel.
    pub fn perfect(m: usize) -> Self {
        let mut v = vec![0.0; m];
        v[0] = 1.0;
        CbVector { v }
    }

    /// `(1, 1, ..., 1)`: the useless channel.
    pub fn useless(m: usize) -> Self {
        CbVector { v: vec![1.0; m] }
    }

    pub fn m(&self) -> usize {
        self.v.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn into_values(self) -> Vec<f64> {
        self.v
    }

    pub fn max_off_zero(&self) -> f64 {
        self.v[1..].iter().cloned().fold(0.0, f64::max)
    }

    pub fn sum_off_zero(&self) -> f64 {
        self.v[1..].iter().sum()
    }

    /// Cutoff rate in bits: `log2 m - log2 sum_x v[x]`.
    pub fn cutoff_rate(&self) -> f64 {
        (self.m() as f64).log2() - self.v.iter().sum::<f64>().log2()
    }
}

impl std::ops::Index<usize> for CbVector {
    type Output = f64;
    fn index(&self, x: usize) -> &f64 {
        &self.v[x]
    }
}

/// An MSC written as a degraded version of `{(1 - w): perfect, (w): x-erasure}`.
#[derive(Debug, Clone, PartialEq)]
pub struct XErasureSplit {
    pub x: usize,
    pub weight: f64,
    /// Channel applied after the perfect branch; absent when `weight = 1`.
    pub r: Option<MscChannel>,
    /// Channel applied after the x-erasure branch; absent when `weight = 0`.
    pub s: Option<MscChannel>,
}

impl XErasureSplit {
    /// The MSC probability vector implied by the split.
    pub fn reconstruct(&self, m: usize) -> Vec<f64> {
        (0..m as isize)
            .map(|i| {
                let direct = self
                    .r
                    .as_ref()
                    .map_or(0.0, |r| (1.0 - self.weight) * r.at(i));
                let erased = self.s.as_ref().map_or(0.0, |s| {
                    self.weight * 0.5 * (s.at(i) + s.at(i - self.x as isize))
                });
                direct + erased
            })
            .collect()
    }
}

pub fn x_erasure_decompose(ch: &MscChannel, x: usize) -> Result<XErasureSplit> {
    let m = ch.m() as isize;
    let xi = x as isize;
    let weight = 2.0 * ch.pairwise_pe(x)?;
    let pair_min = |i: isize, j: isize| ch.at(i).min(ch.at(j));

    let r = if weight < 1.0 {
        let r: Vec<f64> = (0..m)
            .map(|i| {
                let rest = ch.at(i) - 0.5 * pair_min(i, i + xi) - 0.5 * pair_min(i, i - xi);
                rest.max(0.0) / (1.0 - weight)
            })
            .collect();
        Some(MscChannel::new(r)?)
    } else {
        None
    };
    let s = if weight > 0.0 {
        let s: Vec<f64> = (0..m).map(|i| pair_min(i, i + xi) / weight).collect();
        Some(MscChannel::new(s)?)
    } else {
        None
    };
    Ok(XErasureSplit { x, weight, r, s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cb_vector_examples() {
        let p = 0.11;
        let v = MscChannel::bsc(p).unwrap().cb_vector();
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], 2.0 * (p * (1.0 - p)).sqrt(), epsilon = 1e-15);

        let a = MscChannel::new(vec![0.5, 0.5, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(a.cb_vector().values(), &[1.0, 0.5, 0.0, 0.0, 0.0, 0.5]);
        let b = MscChannel::new(vec![0.5, 0.0, 0.5, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(b.cb_vector().values(), &[1.0, 0.0, 0.5, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn cutoff_rate_examples() {
        assert_abs_diff_eq!(CbVector::binary(0.0).unwrap().cutoff_rate(), 1.0);
        assert_abs_diff_eq!(CbVector::binary(1.0).unwrap().cutoff_rate(), 0.0);
        let v = CbVector::new(vec![1.0, 0.5, 0.0, 0.0, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(v.cutoff_rate(), 6f64.log2() - 1.0, epsilon = 1e-14);
    }

    #[test]
    fn pairwise_pe_examples() {
        assert_eq!(MscChannel::perfect(4).unwrap().pairwise_pe(1).unwrap(), 0.0);
        assert_abs_diff_eq!(MscChannel::bsc(0.2).unwrap().pairwise_pe(1).unwrap(), 0.2);
        let e = MscChannel::x_erasure(5, 2).unwrap();
        assert_abs_diff_eq!(e.pairwise_pe(2).unwrap(), 0.25);
        assert!(e.pairwise_pe(0).is_err());
    }

    #[test]
    fn split_of_perfect_channel() {
        let split = x_erasure_decompose(&MscChannel::perfect(4).unwrap(), 1).unwrap();
        assert_eq!(split.weight, 0.0);
        assert_eq!(split.r, Some(MscChannel::perfect(4).unwrap()));
        assert!(split.s.is_none());
    }

    #[test]
    fn split_of_erasure_channel_reconstructs() {
        let e = MscChannel::x_erasure(4, 1).unwrap();
        let split = x_erasure_decompose(&e, 1).unwrap();
        assert_abs_diff_eq!(split.weight, 0.5);
        assert_eq!(split.s.as_ref().unwrap().probs(), &[1.0, 0.0, 0.0, 0.0]);
        for (a, b) in split.reconstruct(4).iter().zip(e.probs()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn mixture_rejects_mismatched_alphabets() {
        let a = MscChannel::perfect(2).unwrap();
        let b = MscChannel::perfect(3).unwrap();
        assert!(MscMixture::new(vec![(0.5, a), (0.5, b)]).is_err());
    }

    #[test]
    fn cb_vector_rejects_asymmetry() {
        assert!(CbVector::new(vec![1.0, 0.2, 0.3]).is_err());
        assert!(CbVector::new(vec![0.9, 0.2]).is_err());
    }
}
