//! SB of a variable node that combines independent BSC observations.
//!
//! Each BSC is given by its index `a = 2 sqrt(p(1-p))`. Observations with the
//! same index are grouped, so the exact sum runs over flip counts per group
//! rather than over individual sign patterns. Large instances fall back to a
//! quantized LLR density convolved by FFT.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::channel::{bsc_crossover, soft_bit_weight};
use crate::extremal::AtomicBscFamily;

/// Largest number of distinct flip-count patterns summed exactly.
pub const EXACT_PATTERN_CAP: u64 = 1 << 20;

/// Largest `atoms^d` for which mixture selections are enumerated exactly.
pub const EXACT_SELECTION_CAP: f64 = 1e5;

/// Saturation level of the quantized LLR grid.
pub const GRID_LLR_MAX: f64 = 40.0;

/// Half the number of bins on each side of zero (bins span `[-40, 40]`).
pub const GRID_HALF_BINS: usize = 1 << 13;

/// Index values closer than this are treated as the same BSC.
const SAME_INDEX_TOL: f64 = 1e-15;

/// SB of the combination of BSCs with indices `a_i`.
pub fn sb_of_bsc_combination(indices: &[f64]) -> f64 {
    let groups: Vec<(f64, usize)> = indices.iter().map(|&a| (a, 1)).collect();
    sb_of_grouped(&groups)
}

/// Same as [`sb_of_bsc_combination`] with `(a, multiplicity)` pairs.
pub fn sb_of_grouped(groups: &[(f64, usize)]) -> f64 {
    let groups = merge_groups(groups);
    if groups.iter().any(|&(a, _)| a <= 0.0) {
        return 0.0;
    }
    // a = 1 contributes LLR 0 and drops out.
    let groups: Vec<(f64, usize)> = groups.into_iter().filter(|&(a, _)| a < 1.0).collect();
    if groups.is_empty() {
        return 1.0;
    }
    let patterns = groups
        .iter()
        .try_fold(1u64, |acc, &(_, n)| acc.checked_mul(n as u64 + 1));
    match patterns {
        Some(p) if p <= EXACT_PATTERN_CAP => sb_exact(&groups),
        _ => {
            let mut grid = LlrGrid::point(0.0);
            for &(a, n) in &groups {
                grid = grid.convolve(&LlrGrid::bsc_power(a, n));
            }
            grid.soft_bit()
        }
    }
}

fn merge_groups(groups: &[(f64, usize)]) -> Vec<(f64, usize)> {
    let mut sorted: Vec<(f64, usize)> = groups
        .iter()
        .filter(|(_, n)| *n > 0)
        .map(|&(a, n)| (a.clamp(0.0, 1.0), n))
        .collect();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, usize)> = Vec::with_capacity(sorted.len());
    for (a, n) in sorted {
        match out.last_mut() {
            Some(last) if (last.0 - a).abs() <= SAME_INDEX_TOL => last.1 += n,
            _ => out.push((a, n)),
        }
    }
    out
}

/// `(crossover p, LLR magnitude)` of a BSC with index `0 < a < 1`.
fn bsc_llr(a: f64) -> (f64, f64) {
    let p = bsc_crossover(a);
    (p, ((1.0 - p) / p).ln())
}

/// `P(k flips out of n)` for `k = 0..=n`.
fn flip_pmf(p: f64, n: usize) -> Vec<f64> {
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let mut log_binom = 0.0;
    (0..=n)
        .map(|k| {
            if k > 0 {
                log_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
            }
            (log_binom + k as f64 * lp + (n - k) as f64 * lq).exp()
        })
        .collect()
}

fn sb_exact(groups: &[(f64, usize)]) -> f64 {
    let parts: Vec<(Vec<f64>, f64, usize)> = groups
        .iter()
        .map(|&(a, n)| {
            let (p, m) = bsc_llr(a);
            (flip_pmf(p, n), m, n)
        })
        .collect();
    fn walk(parts: &[(Vec<f64>, f64, usize)], prob: f64, llr: f64) -> f64 {
        match parts.split_first() {
            None => prob * soft_bit_weight(llr),
            Some(((pmf, m, n), rest)) => pmf
                .iter()
                .enumerate()
                .filter(|(_, pk)| **pk > 0.0)
                .map(|(k, pk)| walk(rest, prob * pk, llr + (*n as f64 - 2.0 * k as f64) * m))
                .sum(),
        }
    }
    walk(&parts, 1.0, 0.0)
}

/// Expected SB when one BSC is drawn from `ch0` and `d` more are drawn
/// independently from `chin`, then combined at a variable node.
pub fn phi_variable_sb(ch0: &AtomicBscFamily, chin: &AtomicBscFamily, d: usize) -> f64 {
    if d == 0 {
        return ch0.second_moment();
    }
    let k = chin.atoms().len();
    if (k as f64).powi(d as i32) <= EXACT_SELECTION_CAP {
        phi_exact(ch0, chin, d)
    } else {
        let inner = LlrGrid::family(chin).power(d);
        ch0.atoms()
            .iter()
            .map(|&(w, a)| w * inner.convolve(&LlrGrid::bsc_power(a, 1)).soft_bit())
            .sum()
    }
}

/// Enumerates multisets of `chin` atoms with multinomial weights.
fn phi_exact(ch0: &AtomicBscFamily, chin: &AtomicBscFamily, d: usize) -> f64 {
    let atoms = chin.atoms();
    let log_fact: Vec<f64> = (0..=d)
        .scan(0.0, |acc, i| {
            if i > 0 {
                *acc += (i as f64).ln();
            }
            Some(*acc)
        })
        .collect();
    let mut counts = vec![0usize; atoms.len()];
    let mut total = 0.0;
    loop {
        if counts.iter().sum::<usize>() == d {
            let log_w = log_fact[d]
                + counts
                    .iter()
                    .zip(atoms)
                    .map(|(&n, &(w, _))| n as f64 * w.ln() - log_fact[n])
                    .sum::<f64>();
            let weight = log_w.exp();
            if weight > 0.0 {
                let mut groups: Vec<(f64, usize)> = counts
                    .iter()
                    .zip(atoms)
                    .map(|(&n, &(_, a))| (a, n))
                    .collect();
                groups.push((0.0, 0));
                for &(w0, a0) in ch0.atoms() {
                    *groups.last_mut().expect("slot for ch0") = (a0, 1);
                    total += weight * w0 * sb_of_grouped(&groups);
                }
            }
        }
        // Advance the odometer over counts with total <= d.
        let mut i = 0;
        loop {
            if i == counts.len() {
                return total;
            }
            counts[i] += 1;
            if counts.iter().sum::<usize>() <= d {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// Probability mass on a uniform LLR grid over `[-40, 40]`; mass beyond the
/// ends is folded into the end bins.
#[derive(Debug, Clone)]
struct LlrGrid {
    mass: Vec<f64>,
}

impl LlrGrid {
    const BINS: usize = 2 * GRID_HALF_BINS + 1;

    fn step() -> f64 {
        GRID_LLR_MAX / GRID_HALF_BINS as f64
    }

    fn index(llr: f64) -> usize {
        let i = (llr / Self::step()).round() + GRID_HALF_BINS as f64;
        i.clamp(0.0, (Self::BINS - 1) as f64) as usize
    }

    fn point(llr: f64) -> Self {
        let mut mass = vec![0.0; Self::BINS];
        mass[Self::index(llr)] = 1.0;
        LlrGrid { mass }
    }

    /// Exact law of the LLR sum of `n` copies of one BSC, then quantized.
    fn bsc_power(a: f64, n: usize) -> Self {
        let mut mass = vec![0.0; Self::BINS];
        if a <= 0.0 {
            mass[Self::BINS - 1] = 1.0;
        } else if a >= 1.0 {
            mass[GRID_HALF_BINS] = 1.0;
        } else {
            let (p, m) = bsc_llr(a);
            for (k, pk) in flip_pmf(p, n).into_iter().enumerate() {
                mass[Self::index((n as f64 - 2.0 * k as f64) * m)] += pk;
            }
        }
        LlrGrid { mass }
    }

    fn family(fam: &AtomicBscFamily) -> Self {
        let mut mass = vec![0.0; Self::BINS];
        for &(w, a) in fam.atoms() {
            for (acc, v) in mass.iter_mut().zip(Self::bsc_power(a, 1).mass) {
                *acc += w * v;
            }
        }
        LlrGrid { mass }
    }

    fn power(&self, d: usize) -> Self {
        let mut result = LlrGrid::point(0.0);
        let mut base = self.clone();
        let mut e = d;
        while e > 0 {
            if e & 1 == 1 {
                result = result.convolve(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.convolve(&base);
            }
        }
        result
    }

    fn convolve(&self, other: &Self) -> Self {
        let n = Self::BINS;
        let len = (2 * n - 1).next_power_of_two();
        let fft = planner_forward(len);
        let ifft = planner_inverse(len);
        let lift = |v: &[f64]| {
            let mut buf: Vec<Complex<f64>> = v.iter().map(|&x| Complex::new(x, 0.0)).collect();
            buf.resize(len, Complex::new(0.0, 0.0));
            fft.process(&mut buf);
            buf
        };
        let mut prod: Vec<Complex<f64>> = lift(&self.mass)
            .into_iter()
            .zip(lift(&other.mass))
            .map(|(x, y)| x * y)
            .collect();
        ifft.process(&mut prod);
        let scale = 1.0 / len as f64;
        // Linear index s = i + j holds LLR (s - 2c) * step; re-center on c.
        let mut mass = vec![0.0; n];
        for (s, v) in prod.iter().take(2 * n - 1).enumerate() {
            let k = (s as isize - GRID_HALF_BINS as isize).clamp(0, n as isize - 1) as usize;
            mass[k] += (v.re * scale).max(0.0);
        }
        LlrGrid { mass }
    }

    fn soft_bit(&self) -> f64 {
        let step = Self::step();
        self.mass
            .iter()
            .enumerate()
            .map(|(i, &w)| w * soft_bit_weight((i as f64 - GRID_HALF_BINS as f64) * step))
            .sum()
    }
}

fn planner_forward(len: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_forward(len)
}

fn planner_inverse(len: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_inverse(len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_bsc_gives_index_squared() {
        for &a in &[0.01, 0.3, 0.77, 0.999] {
            assert_abs_diff_eq!(sb_of_bsc_combination(&[a]), a * a, epsilon = 1e-12);
        }
    }

    #[test]
    fn perfect_and_useless_observations() {
        assert_eq!(sb_of_bsc_combination(&[0.4, 0.0, 0.9]), 0.0);
        assert_abs_diff_eq!(sb_of_bsc_combination(&[0.6, 1.0]), 0.36, epsilon = 1e-12);
        assert_eq!(sb_of_bsc_combination(&[1.0, 1.0]), 1.0);
    }

    #[test]
    fn grouping_matches_sign_enumeration() {
        let a: [f64; 5] = [0.5, 0.5, 0.7, 0.3, 0.7];
        let mut brute = 0.0;
        for mask in 0..(1u32 << a.len()) {
            let mut prob = 1.0;
            let mut llr: f64 = 0.0;
            for (i, &ai) in a.iter().enumerate() {
                let p = (1.0 - (1.0 - ai * ai).sqrt()) / 2.0;
                let m = ((1.0 - p) / p).ln();
                if mask >> i & 1 == 1 {
                    prob *= p;
                    llr -= m;
                } else {
                    prob *= 1.0 - p;
                    llr += m;
                }
            }
            brute += prob * 2.0 / (1.0 + llr.exp());
        }
        assert_abs_diff_eq!(sb_of_bsc_combination(&a), brute, epsilon = 1e-13);
    }

    #[test]
    fn grid_path_agrees_with_exact() {
        let groups = [(0.6, 7), (0.85, 5)];
        let exact = sb_exact(&groups);
        let mut grid = LlrGrid::point(0.0);
        for &(a, n) in &groups {
            grid = grid.convolve(&LlrGrid::bsc_power(a, n));
        }
        assert_abs_diff_eq!(grid.soft_bit(), exact, epsilon = 1e-4);
    }

    #[test]
    fn grid_power_agrees_with_exact_phi() {
        let ch0 = AtomicBscFamily::new(vec![(0.4, 0.5), (0.6, 0.2)]).unwrap();
        let chin = AtomicBscFamily::new(vec![(0.3, 0.9), (0.5, 0.6), (0.2, 0.4)]).unwrap();
        let exact = phi_exact(&ch0, &chin, 6);
        let inner = LlrGrid::family(&chin).power(6);
        let approx: f64 = ch0
            .atoms()
            .iter()
            .map(|&(w, a)| w * inner.convolve(&LlrGrid::bsc_power(a, 1)).soft_bit())
            .sum();
        assert_abs_diff_eq!(approx, exact, epsilon = 1e-4);
    }

    #[test]
    fn phi_degenerate_cases() {
        let ch0 = AtomicBscFamily::new(vec![(0.5, 0.2), (0.5, 0.6)]).unwrap();
        let chin = AtomicBscFamily::single(0.5);
        assert_abs_diff_eq!(
            phi_variable_sb(&ch0, &chin, 0),
            0.5 * 0.04 + 0.5 * 0.36,
            epsilon = 1e-15
        );
        let single = AtomicBscFamily::single(0.3);
        assert_abs_diff_eq!(
            phi_variable_sb(&single, &chin, 3),
            sb_of_bsc_combination(&[0.3, 0.5, 0.5, 0.5]),
            epsilon = 1e-14
        );
    }
}
