//! Exact CB of small bit-to-sequence channels, and the effect of replacing a
//! coordinate's BSC mixture by a single BSC with the same average `4p(1-p)`.
//!
//! A bit `X` (with any prior) is mapped, possibly at random, to a codeword
//! `W ∈ {0,1}^n`; coordinate `i` is observed through a BSC mixture whose atom
//! index is known to the receiver. The replacement never lowers the CB of the
//! `X -> Y` channel.

use crate::channel::{bsc_crossover, bsc_sb};
use crate::error::{domain, Error, Result};

pub const MAX_COORDS: usize = 12;
pub const MAX_ATOMS: usize = 3;
/// Cap on the number of distinct observations `Π (2 · atoms_i)`.
pub const MAX_OUTPUTS: usize = 1 << 22;

/// A randomized map from a bit to codewords of length `n`, stored as
/// `(probability, codeword bits)` lists for `X = 0` and `X = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BitMapper {
    pub n: usize,
    pub codewords: [Vec<(f64, u32)>; 2],
}

impl BitMapper {
    /// `X -> (X, X, ..., X)`.
    pub fn repetition(n: usize) -> Self {
        let ones = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
        BitMapper {
            n,
            codewords: [vec![(1.0, 0)], vec![(1.0, ones)]],
        }
    }

    /// Cycle-free unrolling of BP around one edge: the root bit, then `depth`
    /// levels where every bit has `dv - 1` child checks, each with `dc - 1`
    /// child bits that sum to the parent bit. All consistent leaf patterns are
    /// equally likely.
    pub fn support_tree(dv: usize, dc: usize, depth: usize) -> Result<Self> {
        if dv < 2 || dc < 2 {
            return domain("support tree needs dv, dc >= 2");
        }
        // parents[c] = position of the bit that check c constrains.
        let mut checks: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut frontier = vec![0usize];
        let mut n = 1usize;
        for _ in 0..depth {
            let mut next = Vec::new();
            for &bit in &frontier {
                for _ in 0..dv - 1 {
                    let children: Vec<usize> = (n..n + dc - 1).collect();
                    n += dc - 1;
                    if n > MAX_COORDS {
                        return Err(Error::Oversize(format!(
                            "support tree ({dv},{dc}) depth {depth} exceeds {MAX_COORDS} coordinates"
                        )));
                    }
                    next.extend(&children);
                    checks.push((bit, children));
                }
            }
            frontier = next;
        }
        let mut codewords = [Vec::new(), Vec::new()];
        for word in 0u32..(1u32 << n) {
            let ok = checks.iter().all(|(parent, children)| {
                let parity = children.iter().fold(0, |acc, &c| acc ^ (word >> c & 1));
                parity == (word >> parent & 1)
            });
            if ok {
                codewords[(word & 1) as usize].push((1.0, word));
            }
        }
        for list in &mut codewords {
            let k = list.len() as f64;
            for entry in list.iter_mut() {
                entry.0 = 1.0 / k;
            }
        }
        Ok(BitMapper { n, codewords })
    }
}

/// A bit-to-sequence channel with one BSC mixture `(weight, p)` per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceChannel {
    pub prior0: f64,
    pub mapper: BitMapper,
    pub coords: Vec<Vec<(f64, f64)>>,
}

impl SequenceChannel {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.prior0) {
            return domain(format!("prior {} outside [0, 1]", self.prior0));
        }
        if self.coords.len() != self.mapper.n {
            return domain(format!(
                "{} coordinate channels for codewords of length {}",
                self.coords.len(),
                self.mapper.n
            ));
        }
        if self.mapper.n > MAX_COORDS {
            return Err(Error::Oversize(format!(
                "{} coordinates > {MAX_COORDS}",
                self.mapper.n
            )));
        }
        let mut outputs = 1usize;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_empty() || c.len() > MAX_ATOMS {
                return Err(Error::Oversize(format!(
                    "coordinate {i} has {} atoms, expected 1..={MAX_ATOMS}",
                    c.len()
                )));
            }
            if c.iter().any(|&(w, p)| w < 0.0 || !(0.0..=0.5).contains(&p)) {
                return domain(format!("coordinate {i} has an invalid atom"));
            }
            outputs = outputs.saturating_mul(2 * c.len());
        }
        if outputs > MAX_OUTPUTS {
            return Err(Error::Oversize(format!(
                "{outputs} observations > {MAX_OUTPUTS}"
            )));
        }
        Ok(())
    }

    /// `CB = Σ_y 2 sqrt(P(X=0, y) P(X=1, y))` by exhaustive enumeration.
    pub fn cb(&self) -> Result<f64> {
        self.validate()?;
        let n = self.mapper.n;
        let sizes: Vec<usize> = self.coords.iter().map(|c| c.len()).collect();
        let mut atom_idx = vec![0usize; n];
        let mut total = 0.0;
        loop {
            let side: f64 = (0..n).map(|i| self.coords[i][atom_idx[i]].0).product();
            if side > 0.0 {
                for z in 0u32..(1u32 << n) {
                    let joint = |x: usize| -> f64 {
                        self.mapper.codewords[x]
                            .iter()
                            .map(|&(pc, word)| {
                                pc * (0..n)
                                    .map(|i| {
                                        let p = self.coords[i][atom_idx[i]].1;
                                        if (word ^ z) >> i & 1 == 1 {
                                            p
                                        } else {
                                            1.0 - p
                                        }
                                    })
                                    .product::<f64>()
                            })
                            .sum()
                    };
                    let p0 = self.prior0 * joint(0);
                    let p1 = (1.0 - self.prior0) * joint(1);
                    total += side * 2.0 * (p0 * p1).sqrt();
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(total);
                }
                atom_idx[i] += 1;
                if atom_idx[i] < sizes[i] {
                    break;
                }
                atom_idx[i] = 0;
                i += 1;
            }
        }
    }

    /// The same channel with coordinate `i` replaced by its SB-matched BSC.
    pub fn with_replacement(&self, i: usize) -> Result<Self> {
        let Some(coord) = self.coords.get(i) else {
            return domain(format!("no coordinate {i}"));
        };
        let beta: f64 = coord.iter().map(|&(w, p)| w * bsc_sb(p)).sum();
        let mut out = self.clone();
        out.coords[i] = vec![(1.0, bsc_crossover(beta.clamp(0.0, 1.0).sqrt()))];
        Ok(out)
    }
}

/// CB before and after replacing coordinate `i`; the second is never smaller.
pub fn replacement_check(ch: &SequenceChannel, i: usize) -> Result<(f64, f64)> {
    Ok((ch.cb()?, ch.with_replacement(i)?.cb()?))
}

/// CB of `X -> Z` through one BSC given the joint law `[[a, b], [c, d]]` of
/// `(W, X)` in the other coordinates' posterior; concave in `4p(1-p)`.
pub fn single_coordinate_cb(a: f64, b: f64, c: f64, d: f64, p: f64) -> f64 {
    2.0 * ((a * (1.0 - p) + c * p) * (b * (1.0 - p) + d * p)).sqrt()
        + 2.0 * ((a * p + c * (1.0 - p)) * (b * p + d * (1.0 - p))).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bsc_coordinate_is_left_alone() {
        let ch = SequenceChannel {
            prior0: 0.5,
            mapper: BitMapper::repetition(3),
            coords: vec![
                vec![(1.0, 0.1)],
                vec![(0.5, 0.05), (0.5, 0.25)],
                vec![(1.0, 0.2)],
            ],
        };
        let (before, after) = replacement_check(&ch, 0).unwrap();
        assert_abs_diff_eq!(before, after, epsilon = 1e-14);
    }

    #[test]
    fn single_repetition_coordinate_is_its_bhattacharyya() {
        let ch = SequenceChannel {
            prior0: 0.5,
            mapper: BitMapper::repetition(1),
            coords: vec![vec![(1.0, 0.1)]],
        };
        assert_abs_diff_eq!(ch.cb().unwrap(), 0.6, epsilon = 1e-14);
    }

    #[test]
    fn mixture_replacement_raises_cb() {
        for prior0 in [0.5, 0.7] {
            let ch = SequenceChannel {
                prior0,
                mapper: BitMapper::repetition(3),
                coords: vec![
                    vec![(0.5, 0.05), (0.5, 0.25)],
                    vec![(1.0, 0.1)],
                    vec![(1.0, 0.3)],
                ],
            };
            let (before, after) = replacement_check(&ch, 0).unwrap();
            assert!(after >= before - 1e-12, "{before} > {after}");
        }
    }

    #[test]
    fn support_tree_shape() {
        let t = BitMapper::support_tree(2, 3, 2).unwrap();
        assert_eq!(t.n, 7);
        assert_eq!(t.codewords[0].len(), 8);
        assert_eq!(t.codewords[1].len(), 8);
        assert!(BitMapper::support_tree(3, 6, 2).is_err());
    }

    #[test]
    fn oversize_is_rejected() {
        let ch = SequenceChannel {
            prior0: 0.5,
            mapper: BitMapper::repetition(2),
            coords: vec![vec![(0.25, 0.1); 4], vec![(1.0, 0.1)]],
        };
        assert!(matches!(ch.cb(), Err(Error::Oversize(_))));
    }
}
