//! Disordered periodic spin-½ chain with a scalar-chirality term:
//!
//! `H = Σ_j [J S_j·S_{j+1} + h_j S^z_j + K S_j·(S_{j+1} × S_{j+2})]`,
//!
//! restricted to a fixed total `S^z`. Basis states are bitstrings with bit `j`
//! set when site `j` is up, listed in increasing integer order.
//!
//! The chirality operator is expanded in ladder operators as
//! `(i/2) Σ_cyc S^z_a (S^+_b S^-_c − S^-_b S^+_c)` over the cyclic
//! assignments `(a, b, c)` of the three sites.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{substream, Domain, Gaussian};
use crate::{c64, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpinChainSpec {
    pub length: usize,
    pub j_coupling: f64,
    /// Standard deviation of the site fields `h_j`.
    pub h_strength: f64,
    pub k_chirality: f64,
    /// Total `S^z` of the block.
    pub sz_sector: f64,
    pub seed: u64,
}

impl Default for SpinChainSpec {
    fn default() -> Self {
        SpinChainSpec {
            length: 13,
            j_coupling: 1.0,
            h_strength: 0.2,
            k_chirality: 0.0,
            sz_sector: 0.5,
            seed: 0,
        }
    }
}

impl SpinChainSpec {
    /// Number of up spins in the sector.
    pub fn n_up(&self) -> Result<usize> {
        let invalid = || Error::InvalidSector {
            length: self.length,
            sz: self.sz_sector,
        };
        if self.length < 4 || self.length > 30 {
            return Err(invalid());
        }
        let up = 0.5 * self.length as f64 + self.sz_sector;
        if !((up - up.round()).abs() < 1e-9) || up < -1e-9 || up > self.length as f64 + 1e-9 {
            return Err(invalid());
        }
        Ok(up.round() as usize)
    }
}

/// Bitstrings of the sector in increasing order.
pub fn spin_basis(spec: &SpinChainSpec) -> Result<Vec<u32>> {
    let up = spec.n_up()? as u32;
    Ok((0u32..1 << spec.length).filter(|s| s.count_ones() == up).collect())
}

/// Site fields `h_j` of disorder realisation `realization`.
pub fn spin_fields(spec: &SpinChainSpec, realization: usize) -> Vec<f64> {
    let mut g = Gaussian::new(substream(spec.seed, Domain::SpinDisorder, realization as u64));
    (0..spec.length).map(|_| spec.h_strength * g.sample()).collect()
}

fn sz(state: u32, site: usize) -> f64 {
    if state >> site & 1 == 1 {
        0.5
    } else {
        -0.5
    }
}

/// Dense Hamiltonian block for disorder realisation `realization`.
pub fn spin_chain_block(spec: &SpinChainSpec, realization: usize) -> Result<Mat<c64>> {
    let basis = spin_basis(spec)?;
    let fields = spin_fields(spec, realization);
    Ok(block_with_fields(spec, &basis, &fields))
}

pub(crate) fn block_with_fields(spec: &SpinChainSpec, basis: &[u32], fields: &[f64]) -> Mat<c64> {
    let l = spec.length;
    let dim = basis.len();
    let index = |s: u32| basis.binary_search(&s).expect("ladder terms conserve S^z");
    let mut h = Mat::<c64>::zeros(dim, dim);
    let (jc, k) = (spec.j_coupling, spec.k_chirality);
    for (col, &s) in basis.iter().enumerate() {
        let mut diag = 0.0;
        for j in 0..l {
            let j1 = (j + 1) % l;
            diag += jc * sz(s, j) * sz(s, j1) + fields[j] * sz(s, j);
            // ½J (S⁺S⁻ + S⁻S⁺) flips an antiparallel pair
            if (s >> j & 1) != (s >> j1 & 1) {
                let t = s ^ (1 << j) ^ (1 << j1);
                h[(index(t), col)] += c64::new(0.5 * jc, 0.0);
            }
            if k != 0.0 {
                let sites = [j, j1, (j + 2) % l];
                for r in 0..3 {
                    let (a, b, c) = (sites[r], sites[(r + 1) % 3], sites[(r + 2) % 3]);
                    let (ub, uc) = (s >> b & 1, s >> c & 1);
                    if ub == uc {
                        continue;
                    }
                    // S⁺_b S⁻_c needs b down, c up and enters with +; S⁻_b S⁺_c with −
                    let sign = if ub == 0 { 1.0 } else { -1.0 };
                    let t = s ^ (1 << b) ^ (1 << c);
                    h[(index(t), col)] += c64::new(0.0, 0.5 * k * sign * sz(s, a));
                }
            }
        }
        h[(col, col)] += c64::new(diag, 0.0);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_error, max_abs_diff};

    #[test]
    fn sector_dimensions() {
        assert_eq!(spin_basis(&SpinChainSpec::default()).unwrap().len(), 1716);
        let s = SpinChainSpec {
            length: 4,
            sz_sector: 0.0,
            ..Default::default()
        };
        assert_eq!(
            spin_basis(&s).unwrap(),
            vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]
        );
        assert!(SpinChainSpec {
            length: 13,
            sz_sector: 0.0,
            ..Default::default()
        }
        .n_up()
        .is_err());
        assert!(SpinChainSpec {
            length: 3,
            sz_sector: 0.5,
            ..Default::default()
        }
        .n_up()
        .is_err());
        assert!(SpinChainSpec {
            length: 6,
            sz_sector: 4.0,
            ..Default::default()
        }
        .n_up()
        .is_err());
    }

    fn scaled(m: Mat<c64>, f: f64) -> Mat<c64> {
        Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * f)
    }

    // Full 2^L Hamiltonian from explicit spin matrices. Single-site basis
    // ordering is (up, down); bit j of a state index is 1 when site j is up.
    fn tensor_oracle(l: usize, jc: f64, k: f64, fields: &[f64]) -> Mat<c64> {
        let z = c64::new(0.0, 0.0);
        let half = c64::new(0.5, 0.0);
        let ih = c64::new(0.0, 0.5);
        let sx = [[z, half], [half, z]];
        let sy = [[z, -ih], [ih, z]];
        let szm = [[half, z], [z, -half]];
        let spin = [sx, sy, szm];
        let dim = 1usize << l;
        let std_index = |state: usize, site: usize| if state >> site & 1 == 1 { 0 } else { 1 };
        // (operator on site) as a dense 2^L matrix
        let site_op = |o: &[[c64; 2]; 2], site: usize| {
            Mat::<c64>::from_fn(dim, dim, |r, c| {
                if (r ^ c) & !(1 << site) != 0 {
                    return z;
                }
                o[std_index(r, site)][std_index(c, site)]
            })
        };
        let ops: Vec<Vec<Mat<c64>>> = (0..l).map(|j| spin.iter().map(|o| site_op(o, j)).collect()).collect();
        let mut h = Mat::<c64>::zeros(dim, dim);
        let levi = |a: usize, b: usize, c: usize| -> f64 {
            ((b as f64 - a as f64) * (c as f64 - a as f64) * (c as f64 - b as f64)) / 2.0
        };
        for j in 0..l {
            let (j1, j2) = ((j + 1) % l, (j + 2) % l);
            for a in 0..3 {
                h += scaled(&ops[j][a] * &ops[j1][a], jc);
            }
            h += scaled(ops[j][2].clone(), fields[j]);
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        let e = levi(a, b, c);
                        if e != 0.0 {
                            h += scaled(&ops[j][a] * &ops[j1][b] * &ops[j2][c], k * e);
                        }
                    }
                }
            }
        }
        h
    }

    #[test]
    fn levi_civita_helper() {
        let levi = |a: f64, b: f64, c: f64| (b - a) * (c - a) * (c - b) / 2.0;
        assert_eq!(levi(0.0, 1.0, 2.0), 1.0);
        assert_eq!(levi(1.0, 0.0, 2.0), -1.0);
        assert_eq!(levi(2.0, 0.0, 1.0), 1.0);
        assert_eq!(levi(0.0, 0.0, 2.0), 0.0);
    }

    #[test]
    fn block_matches_tensor_product_oracle() {
        for (k, sz_sector) in [(0.0, 0.0), (0.7, 0.0), (0.7, 1.0), (0.3, -1.0)] {
            let spec = SpinChainSpec {
                length: 4,
                k_chirality: k,
                sz_sector,
                j_coupling: 1.3,
                h_strength: 0.5,
                seed: 2,
            };
            let basis = spin_basis(&spec).unwrap();
            let fields = spin_fields(&spec, 0);
            let block = block_with_fields(&spec, &basis, &fields);
            let full = tensor_oracle(4, 1.3, k, &fields);
            let projected = Mat::<c64>::from_fn(basis.len(), basis.len(), |r, c| {
                full[(basis[r] as usize, basis[c] as usize)]
            });
            assert!(
                max_abs_diff(block.as_ref(), projected.as_ref()) < 1e-12,
                "K={k} sz={sz_sector}"
            );
            // nothing leaks between sectors
            let sz_total = |s: usize| s.count_ones() as f64 - 2.0;
            for r in 0..16 {
                for c in 0..16 {
                    if sz_total(r) != sz_total(c) {
                        assert!(full[(r, c)].norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn hermitian_and_real_without_chirality() {
        for k in [0.0, 0.01, 0.6] {
            let spec = SpinChainSpec {
                length: 9,
                k_chirality: k,
                ..Default::default()
            };
            let h = spin_chain_block(&spec, 0).unwrap();
            assert!(hermiticity_error(h.as_ref()) < 1e-12);
            let max_im = (0..h.nrows())
                .flat_map(|i| (0..h.ncols()).map(move |j| (i, j)))
                .map(|(i, j)| h[(i, j)].im.abs())
                .fold(0.0, f64::max);
            if k == 0.0 {
                assert_eq!(max_im, 0.0);
            } else {
                assert!(max_im > 0.0);
            }
        }
    }

    #[test]
    fn fields_are_deterministic() {
        let spec = SpinChainSpec::default();
        assert_eq!(spin_fields(&spec, 3), spin_fields(&spec, 3));
        assert_ne!(spin_fields(&spec, 3), spin_fields(&spec, 4));
        let g = SpinChainSpec {
            h_strength: 0.0,
            ..spec
        };
        assert!(spin_fields(&g, 0).iter().all(|&h| h == 0.0));
    }
}
