//! CB-vector bound for LDPC codes over `Z_m` and the associated stability tests.
//!
//! Check nodes combine CB vectors by circular convolution (an upper bound),
//! variable nodes by component-wise product (exact), giving the recursion
//! `v' = min(1, v0 • λ_•(ρ_⊗(v)))`.

use serde::{Deserialize, Serialize};

use crate::binary::{IterationLimits, Verdict};
use crate::channel::msc::CbVector;
use crate::ensemble::DegreeEnsemble;
use crate::error::{domain, Result};

fn same_m(u: &CbVector, v: &CbVector) -> Result<()> {
    if u.m() == v.m() {
        Ok(())
    } else {
        domain(format!(
            "cb vectors of different sizes {} and {}",
            u.m(),
            v.m()
        ))
    }
}

/// `(u ⊗ v)[x] = Σ_z u[z] v[x - z]`, unclipped.
pub fn cb_vec_convolve(u: &CbVector, v: &CbVector) -> Result<CbVector> {
    same_m(u, v)?;
    Ok(convolve(u.values(), v.values()))
}

fn convolve(u: &[f64], v: &[f64]) -> CbVector {
    let m = u.len();
    let out = (0..m)
        .map(|x| (0..m).map(|z| u[z] * v[(x + m - z) % m]).sum())
        .collect();
    CbVector::from_raw(out)
}

pub fn cb_vec_pointwise(u: &CbVector, v: &CbVector) -> Result<CbVector> {
    same_m(u, v)?;
    Ok(CbVector::from_raw(
        u.values()
            .iter()
            .zip(v.values())
            .map(|(a, b)| a * b)
            .collect(),
    ))
}

/// `Σ_k ρ_k v^{⊗(k-1)}`.
fn check_stage(v: &CbVector, e: &DegreeEnsemble) -> Vec<f64> {
    let m = v.m();
    let mut out = vec![0.0; m];
    let mut power = CbVector::perfect(m);
    let mut exponent = 0usize;
    for &(k, mass) in e.rho() {
        let mut missing = k - 1 - exponent;
        let mut base = v.clone();
        while missing > 0 {
            if missing & 1 == 1 {
                power = convolve(power.values(), base.values());
            }
            missing >>= 1;
            if missing > 0 {
                base = convolve(base.values(), base.values());
            }
        }
        exponent = k - 1;
        for (acc, p) in out.iter_mut().zip(power.values()) {
            *acc += mass * p;
        }
    }
    out
}

pub fn zm_bound_step(v: &CbVector, v0: &CbVector, e: &DegreeEnsemble) -> Result<CbVector> {
    same_m(v, v0)?;
    let w = check_stage(v, e);
    let out = v0
        .values()
        .iter()
        .zip(&w)
        .map(|(c0, wx)| {
            let var: f64 = e
                .lambda()
                .iter()
                .map(|&(k, mass)| mass * wx.powi(k as i32 - 1))
                .sum();
            (c0 * var).min(1.0)
        })
        .collect();
    Ok(CbVector::from_raw(out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZmRun {
    pub verdict: Verdict,
    pub iterations: usize,
    pub trajectory: Vec<CbVector>,
}

impl ZmRun {
    pub fn last(&self) -> &CbVector {
        self.trajectory
            .last()
            .expect("trajectory holds the start vector")
    }
}

pub fn zm_iterate(v0: &CbVector, e: &DegreeEnsemble, limits: &IterationLimits) -> ZmRun {
    let mut trajectory = vec![v0.clone()];
    if v0.max_off_zero() < limits.decode_eps {
        return ZmRun {
            verdict: Verdict::Decodable,
            iterations: 0,
            trajectory,
        };
    }
    let mut current = v0.clone();
    for it in 1..=limits.max_iter {
        let next = zm_bound_step(&current, v0, e).expect("sizes agree");
        let change = next
            .values()
            .iter()
            .zip(current.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let done = next.max_off_zero() < limits.decode_eps;
        trajectory.push(next.clone());
        if done {
            return ZmRun {
                verdict: Verdict::Decodable,
                iterations: it,
                trajectory,
            };
        }
        if change < limits.stall_eps {
            return ZmRun {
                verdict: Verdict::NotDecodable,
                iterations: it,
                trajectory,
            };
        }
        current = next;
    }
    ZmRun {
        verdict: Verdict::Inconclusive,
        iterations: limits.max_iter,
        trajectory,
    }
}

/// `λ2 ρ'(1) v[x] < 1` for every `x != 0`.
pub fn sufficient_stability(e: &DegreeEnsemble, v: &CbVector) -> bool {
    e.lambda2() * e.rho_prime1() * v.max_off_zero() < 1.0
}

/// Some `x != 0` has `λ2 ρ'(1) v[x] > 1`.
pub fn necessary_stability_violated(e: &DegreeEnsemble, v: &CbVector) -> bool {
    e.lambda2() * e.rho_prime1() * v.max_off_zero() > 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stability {
    pub sufficient: bool,
    pub necessary_violated: bool,
}

/// Stability over GF(q): the predicates applied to the average of `v[x != 0]`.
pub fn gfq_stability(e: &DegreeEnsemble, v: &CbVector, q: usize) -> Result<Stability> {
    if !is_prime(q) {
        return domain(format!("q = {q} is not prime"));
    }
    if v.m() != q {
        return domain(format!("cb vector has m = {}, expected q = {q}", v.m()));
    }
    let factor = e.lambda2() * e.rho_prime1() * v.sum_off_zero() / (q - 1) as f64;
    Ok(Stability {
        sufficient: factor < 1.0,
        necessary_violated: factor > 1.0,
    })
}

/// Asymptotic per-iteration contraction `λ2 ρ'(1) max_{x != 0} v0[x]`.
pub fn convergence_rate(e: &DegreeEnsemble, v0: &CbVector) -> f64 {
    e.lambda2() * e.rho_prime1() * v0.max_off_zero()
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}
