//! Edge-perspective degree distributions of LDPC ensembles.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub const MAX_DEGREE: usize = 10_000;

/// Tolerance on the mass sums when an ensemble is parsed from JSON.
pub const PARSE_MASS_TOL: f64 = 1e-9;

/// `λ(x) = Σ λ_k x^{k-1}` and `ρ(x) = Σ ρ_k x^{k-1}`, stored as sparse `(k, mass)` lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble", into = "RawEnsemble")]
pub struct DegreeEnsemble {
    lambda: Vec<(usize, f64)>,
    rho: Vec<(usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct RawEnsemble {
    lambda: Vec<(usize, f64)>,
    rho: Vec<(usize, f64)>,
}

impl TryFrom<RawEnsemble> for DegreeEnsemble {
    type Error = crate::error::Error;
    fn try_from(raw: RawEnsemble) -> Result<Self> {
        DegreeEnsemble::with_tolerance(raw.lambda, raw.rho, PARSE_MASS_TOL)
    }
}

impl From<DegreeEnsemble> for RawEnsemble {
    fn from(e: DegreeEnsemble) -> Self {
        RawEnsemble {
            lambda: e.lambda,
            rho: e.rho,
        }
    }
}

impl DegreeEnsemble {
    /// Masses must sum to 1 within `1e-12`.
    pub fn new(lambda: Vec<(usize, f64)>, rho: Vec<(usize, f64)>) -> Result<Self> {
        Self::with_tolerance(lambda, rho, 1e-12)
    }

    fn with_tolerance(lambda: Vec<(usize, f64)>, rho: Vec<(usize, f64)>, tol: f64) -> Result<Self> {
        Ok(DegreeEnsemble {
            lambda: normalize("lambda", lambda, tol)?,
            rho: normalize("rho", rho, tol)?,
        })
    }

    pub fn regular(dv: usize, dc: usize) -> Result<Self> {
        Self::new(vec![(dv, 1.0)], vec![(dc, 1.0)])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).or_else(|e| domain(format!("bad ensemble json: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ensemble serializes")
    }

    pub fn lambda(&self) -> &[(usize, f64)] {
        &self.lambda
    }

    pub fn rho(&self) -> &[(usize, f64)] {
        &self.rho
    }

    pub fn lambda_eval(&self, x: f64) -> f64 {
        poly_eval(&self.lambda, x)
    }

    pub fn rho_eval(&self, x: f64) -> f64 {
        poly_eval(&self.rho, x)
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda
            .iter()
            .find(|(k, _)| *k == 2)
            .map_or(0.0, |(_, m)| *m)
    }

    /// `ρ'(1) = Σ ρ_k (k - 1)`.
    pub fn rho_prime1(&self) -> f64 {
        self.rho.iter().map(|&(k, m)| m * (k - 1) as f64).sum()
    }

    pub fn design_rate(&self) -> f64 {
        let inv = |d: &[(usize, f64)]| d.iter().map(|&(k, m)| m / k as f64).sum::<f64>();
        1.0 - inv(&self.rho) / inv(&self.lambda)
    }

    pub fn max_lambda_degree(&self) -> usize {
        self.lambda.iter().map(|(k, _)| *k).max().unwrap_or(0)
    }

    pub fn max_rho_degree(&self) -> usize {
        self.rho.iter().map(|(k, _)| *k).max().unwrap_or(0)
    }

    /// Short label such as `(3,6)` for regular ensembles, `irregular` otherwise.
    pub fn label(&self) -> String {
        match (self.lambda.as_slice(), self.rho.as_slice()) {
            ([(dv, _)], [(dc, _)]) => format!("({dv},{dc})"),
            _ => "irregular".to_string(),
        }
    }
}

fn poly_eval(d: &[(usize, f64)], x: f64) -> f64 {
    d.iter().map(|&(k, m)| m * x.powi(k as i32 - 1)).sum()
}

fn normalize(name: &str, mut d: Vec<(usize, f64)>, tol: f64) -> Result<Vec<(usize, f64)>> {
    if d.is_empty() {
        return domain(format!("{name} has no degrees"));
    }
    for &(k, m) in &d {
        if !(2..=MAX_DEGREE).contains(&k) {
            return domain(format!("{name} degree {k} outside 2..={MAX_DEGREE}"));
        }
        if !(m >= 0.0 && m.is_finite()) {
            return domain(format!("{name} mass {m} at degree {k} is negative"));
        }
    }
    d.sort_by_key(|(k, _)| *k);
    if d.windows(2).any(|w| w[0].0 == w[1].0) {
        return domain(format!("{name} lists a degree twice"));
    }
    let total: f64 = d.iter().map(|(_, m)| m).sum();
    if (total - 1.0).abs() > tol {
        return domain(format!("{name} masses sum to {total}, expected 1"));
    }
    d.retain(|(_, m)| *m > 0.0);
    Ok(d.into_iter().map(|(k, m)| (k, m / total)).collect())
}
