//! Brute-force grid LP over BSC mixtures with two moment constraints.
//!
//! maximize   Σ w_i f(a_i)
//! subject to Σ w_i = 1,  Σ w_i a_i <= cb,  Σ w_i a_i² <= sb,  w >= 0
//!
//! with `a_i = i / n`. Three equality rows mean every vertex has at most three
//! basic variables, so all bases are enumerated directly.

use crate::error::{domain, Result};

const FEAS_TOL: f64 = 1e-12;

pub fn lp_oracle(transfer: impl Fn(f64) -> f64, cb: f64, sb: f64, grid_n: usize) -> Result<f64> {
    if grid_n < 50 {
        return domain(format!("grid_n = {grid_n} < 50"));
    }
    if !(cb >= 0.0 && sb >= 0.0) {
        return domain(format!("moment bounds ({cb}, {sb}) must be nonnegative"));
    }
    let a: Vec<f64> = (0..=grid_n).map(|i| i as f64 / grid_n as f64).collect();
    let f: Vec<f64> = a.iter().map(|&x| transfer(x)).collect();
    let n = a.len();
    let mut best = f64::NEG_INFINITY;

    // One atom, both moment slacks basic.
    for i in 0..n {
        if a[i] <= cb + FEAS_TOL && a[i] * a[i] <= sb + FEAS_TOL {
            best = best.max(f[i]);
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            // Two atoms with tight second moment, first-moment slack basic.
            let (ai2, aj2) = (a[i] * a[i], a[j] * a[j]);
            let wi = (sb - aj2) / (ai2 - aj2);
            let wj = 1.0 - wi;
            if wi >= -FEAS_TOL && wj >= -FEAS_TOL && wi * a[i] + wj * a[j] <= cb + FEAS_TOL {
                best = best.max(wi * f[i] + wj * f[j]);
            }
            // Two atoms with tight first moment, second-moment slack basic.
            let wi = (cb - a[j]) / (a[i] - a[j]);
            let wj = 1.0 - wi;
            if wi >= -FEAS_TOL && wj >= -FEAS_TOL && wi * ai2 + wj * aj2 <= sb + FEAS_TOL {
                best = best.max(wi * f[i] + wj * f[j]);
            }
        }
    }

    // Three atoms with both moments tight (Vandermonde solve).
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (a[i], a[j], a[k]);
                let wx = (sb - (y + z) * cb + y * z) / ((x - y) * (x - z));
                if wx < -FEAS_TOL {
                    continue;
                }
                let wy = (sb - (x + z) * cb + x * z) / ((y - x) * (y - z));
                if wy < -FEAS_TOL {
                    continue;
                }
                let wz = (sb - (x + y) * cb + x * y) / ((z - x) * (z - y));
                if wz < -FEAS_TOL {
                    continue;
                }
                best = best.max(wx * f[i] + wy * f[j] + wz * f[k]);
            }
        }
    }

    if best.is_finite() {
        Ok(best)
    } else {
        domain(format!(
            "no mixture on the grid meets cb <= {cb}, sb <= {sb}"
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_objective_hits_first_moment() {
        let v = lp_oracle(|a| a, 0.4, 0.2, 50).unwrap();
        assert!((v - 0.4).abs() < 1e-12, "{v}");
    }

    #[test]
    fn rejects_small_grid_and_negative_bounds() {
        assert!(lp_oracle(|a| a, 0.4, 0.2, 10).is_err());
        assert!(lp_oracle(|a| a, -0.1, 0.2, 50).is_err());
    }
}
