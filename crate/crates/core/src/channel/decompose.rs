//! Splitting circularly symmetric channels into MSC atoms, and symmetrizing
//! arbitrary m-ary-input channels.

use serde::{Deserialize, Serialize};

use super::msc::{MscChannel, MscMixture};
use crate::error::{domain, Error, Result};

/// Tolerance of the circular-symmetry test.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Row-stochastic matrix `P(y | x)` with inputs `x ∈ Z_m` and finitely many outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CondMatrix {
    rows: Vec<Vec<f64>>,
}

impl CondMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() < 2 {
            return domain(format!("need at least 2 inputs, got {}", rows.len()));
        }
        let n = rows[0].len();
        if n == 0 {
            return domain("conditional matrix has no outputs");
        }
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return domain(format!("row {x} has {} outputs, expected {n}", row.len()));
            }
            if let Some(bad) = row.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
                return domain(format!("row {x} has invalid entry {bad}"));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > super::PROB_TOL {
                return domain(format!("row {x} sums to {total}, expected 1"));
            }
        }
        Ok(CondMatrix { rows })
    }

    pub fn from_msc(ch: &MscChannel) -> Self {
        let m = ch.m();
        let rows = (0..m)
            .map(|x| (0..m).map(|y| ch.at(y as isize - x as isize)).collect())
            .collect();
        CondMatrix { rows }
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.rows[x][y]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// A bijection on output indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputPermutation {
    image: Vec<usize>,
}

impl OutputPermutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || seen[y] {
                return domain(format!("output map is not a permutation of 0..{n}"));
            }
            seen[y] = true;
        }
        Ok(OutputPermutation { image })
    }

    /// `y -> y + 1 mod m`, the transform of an MSC.
    pub fn cyclic(m: usize) -> Self {
        OutputPermutation {
            image: (0..m).map(|y| (y + 1) % m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, y: usize) -> usize {
        self.image[y]
    }

    pub fn apply_n(&self, mut y: usize, n: usize) -> usize {
        for _ in 0..n {
            y = self.image[y];
        }
        y
    }
}

/// Decomposes a circularly symmetric channel into one MSC per output orbit.
///
/// The channel must satisfy `P(y | 0) = P(T^x(y) | x)` for all `x, y`. Orbits of
/// zero probability are dropped.
pub fn msc_decompose(cond: &CondMatrix, t: &OutputPermutation) -> Result<MscMixture> {
    let m = cond.inputs();
    let n = cond.outputs();
    if t.len() != n {
        return domain(format!(
            "transform acts on {} outputs, channel has {n}",
            t.len()
        ));
    }
    if (0..n).any(|y| t.apply_n(y, m) != y) {
        return domain(format!("transform does not satisfy T^{m} = identity"));
    }
    for x in 0..m {
        for y in 0..n {
            let lhs = cond.prob(y, 0);
            let rhs = cond.prob(t.apply_n(y, x), x);
            if (lhs - rhs).abs() > SYMMETRY_TOL {
                return Err(Error::NotSymmetric { x, y, lhs, rhs });
            }
        }
    }

    let mut visited = vec![false; n];
    let mut atoms = Vec::new();
    for y0 in 0..n {
        if visited[y0] {
            continue;
        }
        let mut orbit = vec![y0];
        visited[y0] = true;
        let mut y = t.apply(y0);
        while y != y0 {
            visited[y] = true;
            orbit.push(y);
            y = t.apply(y);
        }
        let weight: f64 = orbit.iter().map(|&y| cond.prob(y, 0)).sum();
        for x in 1..m {
            let wx: f64 = orbit.iter().map(|&y| cond.prob(y, x)).sum();
            debug_assert!((wx - weight).abs() < 1e-9 * orbit.len() as f64);
        }
        if weight <= 0.0 {
            continue;
        }
        // A short orbit repeats each output m/d times along i = 0..m; share its mass.
        let d = orbit.len();
        let share = (m / d) as f64;
        let p = (0..m)
            .map(|i| cond.prob(orbit[i % d], 0) / (weight * share))
            .collect();
        atoms.push((weight, MscChannel::new(p)?));
    }
    MscMixture::new(atoms)
}

/// The channel `x -> (w, y)` where `w` is uniform on `Z_m` and `y` is the
/// original channel's output for input `x + w`.
///
/// Output `(w, y)` has index `w * n + y`; the result is circularly symmetric
/// under `(w, y) -> (w - 1, y)`.
pub fn symmetrized_matrix(cond: &CondMatrix) -> (CondMatrix, OutputPermutation) {
    let m = cond.inputs();
    let n = cond.outputs();
    let rows = (0..m)
        .map(|x| {
            (0..m)
                .flat_map(|w| (0..n).map(move |y| cond.prob(y, (x + w) % m) / m as f64))
                .collect()
        })
        .collect();
    let image = (0..m * n)
        .map(|i| {
            let (w, y) = (i / n, i % n);
            ((w + m - 1) % m) * n + y
        })
        .collect();
    (CondMatrix { rows }, OutputPermutation { image })
}

pub fn symmetrize(cond: &CondMatrix) -> Result<MscMixture> {
    let (sym, t) = symmetrized_matrix(cond);
    msc_decompose(&sym, &t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bsc_is_one_atom() {
        let cond = CondMatrix::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let mix = msc_decompose(&cond, &OutputPermutation::new(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(mix.atoms().len(), 1);
        assert_abs_diff_eq!(mix.atoms()[0].0, 1.0);
        assert_eq!(mix.atoms()[0].1.probs(), &[0.9, 0.1]);
    }

    #[test]
    fn two_bsc_classes_are_recovered() {
        // Outputs 0,1 carry BSC(0.1) with prob 0.7; outputs 2,3 carry BSC(0.3) with prob 0.3.
        let cond = CondMatrix::new(vec![
            vec![0.7 * 0.9, 0.7 * 0.1, 0.3 * 0.7, 0.3 * 0.3],
            vec![0.7 * 0.1, 0.7 * 0.9, 0.3 * 0.3, 0.3 * 0.7],
        ])
        .unwrap();
        let t = OutputPermutation::new(vec![1, 0, 3, 2]).unwrap();
        let mix = msc_decompose(&cond, &t).unwrap();
        assert_eq!(mix.atoms().len(), 2);
        let (w0, a0) = &mix.atoms()[0];
        let (w1, a1) = &mix.atoms()[1];
        assert_abs_diff_eq!(*w0, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(a0.probs()[1], 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(*w1, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(a1.probs()[1], 0.3, epsilon = 1e-12);
    }

    #[test]
    fn msc_decomposes_to_itself() {
        let ch = MscChannel::new(vec![0.6, 0.3, 0.1]).unwrap();
        let mix = msc_decompose(&CondMatrix::from_msc(&ch), &OutputPermutation::cyclic(3)).unwrap();
        assert_eq!(mix.atoms().len(), 1);
        for (a, b) in mix.atoms()[0].1.probs().iter().zip(ch.probs()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn short_orbit_splits_mass() {
        // Output 2 is fixed by T: a BEC-like erasure symbol.
        let cond = CondMatrix::new(vec![vec![0.6, 0.0, 0.4], vec![0.0, 0.6, 0.4]]).unwrap();
        let t = OutputPermutation::new(vec![1, 0, 2]).unwrap();
        let mix = msc_decompose(&cond, &t).unwrap();
        assert_eq!(mix.atoms().len(), 2);
        assert_eq!(mix.atoms()[1].1.probs(), &[0.5, 0.5]);
        assert_abs_diff_eq!(mix.cb_vector()[1], 0.4, epsilon = 1e-15);
    }

    #[test]
    fn asymmetry_is_reported() {
        let cond = CondMatrix::new(vec![vec![1.0, 0.0], vec![0.2, 0.8]]).unwrap();
        let err = msc_decompose(&cond, &OutputPermutation::new(vec![1, 0]).unwrap()).unwrap_err();
        match err {
            Error::NotSymmetric { x, y, .. } => assert_eq!((x, y), (1, 0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symmetrized_z_channel_keeps_cb() {
        let cond = CondMatrix::new(vec![vec![1.0, 0.0], vec![0.2, 0.8]]).unwrap();
        let mix = symmetrize(&cond).unwrap();
        assert_abs_diff_eq!(mix.cb_vector()[1], 0.2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn symmetrizing_an_msc_keeps_its_cb_vector() {
        let ch = MscChannel::new(vec![0.5, 0.2, 0.2, 0.1]).unwrap();
        let mix = symmetrize(&CondMatrix::from_msc(&ch)).unwrap();
        for (a, b) in mix.cb_vector().values().iter().zip(ch.cb_vector().values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}
