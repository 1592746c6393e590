//! Quarter Sinai billiard on a square lattice with Peierls phases.
//!
//! Sites are the integer points `0 ≤ x ≤ W`, `0 ≤ y ≤ H` outside the quarter
//! ellipse `(x/a)² + (y/b)² ≤ 1` centred on the origin corner. Hopping uses
//! the Landau gauge: the bond `(x, y) → (x, y+1)` carries `t·e^{iBx}`, so
//! every plaquette encloses flux `B` (radians). Horizontal bonds are real.
//! The default 80 × 90 rectangle with axes 45 and 35 has 6096 sites.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::elliptic_k_modulus;
use crate::{c64, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BilliardSpec {
    pub rect_width: u32,
    pub rect_height: u32,
    /// Ellipse semi-axis along `x`; a non-positive axis disables the carve-out.
    pub ellipse_a: f64,
    /// Ellipse semi-axis along `y`.
    pub ellipse_b: f64,
    pub onsite: f64,
    pub hopping: f64,
    /// Flux per plaquette in radians.
    pub b_field: f64,
}

impl Default for BilliardSpec {
    fn default() -> Self {
        BilliardSpec {
            rect_width: 80,
            rect_height: 90,
            ellipse_a: 45.0,
            ellipse_b: 35.0,
            onsite: 4.0,
            hopping: -1.0,
            b_field: 0.0,
        }
    }
}

impl BilliardSpec {
    /// The 40 × 45 geometry with proportionally halved ellipse axes.
    pub fn reduced() -> Self {
        BilliardSpec {
            rect_width: 40,
            rect_height: 45,
            ellipse_a: 22.5,
            ellipse_b: 17.5,
            ..Default::default()
        }
    }

    fn carved(&self, x: u32, y: u32) -> bool {
        if self.ellipse_a <= 0.0 || self.ellipse_b <= 0.0 {
            return false;
        }
        let (u, v) = (x as f64 / self.ellipse_a, y as f64 / self.ellipse_b);
        u * u + v * v <= 1.0
    }

    /// Lattice sites in `x`-major order.
    pub fn sites(&self) -> Vec<(u32, u32)> {
        (0..=self.rect_width)
            .flat_map(|x| (0..=self.rect_height).map(move |y| (x, y)))
            .filter(|&(x, y)| !self.carved(x, y))
            .collect()
    }
}

/// Sparse Hamiltonian: site coordinates and `(row, col, value)` triplets
/// covering both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct BilliardHamiltonian {
    pub sites: Vec<(u32, u32)>,
    pub entries: Vec<(usize, usize, c64)>,
}

impl BilliardHamiltonian {
    pub fn dim(&self) -> usize {
        self.sites.len()
    }

    pub fn to_dense(&self) -> Mat<c64> {
        let n = self.dim();
        let mut h = Mat::<c64>::zeros(n, n);
        for &(i, j, v) in &self.entries {
            h[(i, j)] += v;
        }
        h
    }

    /// Real part of the dense matrix; exact when `B = 0`.
    pub fn to_dense_real(&self) -> Mat<f64> {
        let n = self.dim();
        let mut h = Mat::<f64>::zeros(n, n);
        for &(i, j, v) in &self.entries {
            h[(i, j)] += v.re;
        }
        h
    }

    /// `site_index,x,y` CSV.
    pub fn write_sites_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "site_index,x,y")?;
        for (i, (x, y)) in self.sites.iter().enumerate() {
            writeln!(w, "{i},{x},{y}")?;
        }
        Ok(())
    }
}

pub fn billiard_hamiltonian(spec: &BilliardSpec) -> Result<BilliardHamiltonian> {
    let sites = spec.sites();
    if sites.is_empty() {
        return Err(Error::Geometry("no lattice sites outside the ellipse".into()));
    }
    let index: HashMap<(u32, u32), usize> = sites.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let t = spec.hopping;
    let mut entries = Vec::with_capacity(5 * sites.len());
    for (i, &(x, y)) in sites.iter().enumerate() {
        entries.push((i, i, c64::new(spec.onsite, 0.0)));
        if let Some(&j) = index.get(&(x + 1, y)) {
            entries.push((j, i, c64::new(t, 0.0)));
            entries.push((i, j, c64::new(t, 0.0)));
        }
        if let Some(&j) = index.get(&(x, y + 1)) {
            let hop = c64::cis(spec.b_field * x as f64) * t;
            entries.push((j, i, hop));
            entries.push((i, j, hop.conj()));
        }
    }
    Ok(BilliardHamiltonian { sites, entries })
}

/// Density of states of the infinite square lattice with on-site energy 4
/// and hopping −1: `K(√(1 − ((E−4)/4)²)) / (2π²)` inside the band, 0 outside.
///
/// The logarithmic van Hove singularity at `E = 4` is returned as `+∞`.
pub fn billiard_dos_theory(energy: f64) -> f64 {
    let u = (energy - 4.0) / 4.0;
    if !(u.abs() < 1.0) {
        return 0.0;
    }
    if u == 0.0 {
        return f64::INFINITY;
    }
    let k = ((1.0 - u) * (1.0 + u)).sqrt();
    match elliptic_k_modulus(k) {
        Ok(kk) => kk / (2.0 * PI * PI),
        // k rounds to 1 only within ~1e-8 of the band centre
        Err(_) => f64::INFINITY,
    }
}

/// One row of an empirical density of states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DosRow {
    pub energy: f64,
    pub rho_emp: f64,
    pub rho_theory: f64,
}

/// Histogram of `eigenvalues` on `[lo, hi)` with bins of `bin_width`,
/// normalised by the total number of eigenvalues, with the theory evaluated
/// at bin centres.
pub fn dos_histogram(eigenvalues: &[f64], lo: f64, hi: f64, bin_width: f64) -> Result<Vec<DosRow>> {
    if !(bin_width > 0.0 && lo < hi) {
        return Err(Error::domain("dos_histogram", "need lo < hi and a positive bin width"));
    }
    if eigenvalues.is_empty() {
        return Err(Error::EmptySelection);
    }
    let n_bins = ((hi - lo) / bin_width).round() as usize;
    let mut counts = vec![0u64; n_bins];
    for &e in eigenvalues {
        let b = ((e - lo) / bin_width).floor();
        if b >= 0.0 && (b as usize) < n_bins {
            counts[b as usize] += 1;
        }
    }
    let total = eigenvalues.len() as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(b, &c)| {
            let energy = lo + (b as f64 + 0.5) * bin_width;
            DosRow {
                energy,
                rho_emp: c as f64 / (total * bin_width),
                rho_theory: billiard_dos_theory(energy),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, eigvalsh_real, hermiticity_error};

    #[test]
    fn default_geometry_site_count() {
        assert_eq!(BilliardSpec::default().sites().len(), 6096);
        assert_eq!(BilliardSpec::reduced().sites().len(), 1554);
    }

    #[test]
    fn open_square_spectrum() {
        // 3×3 open square: 4 − 2(cos(kπ/4) + cos(k′π/4)), k, k′ ∈ {1, 2, 3}
        let spec = BilliardSpec {
            rect_width: 2,
            rect_height: 2,
            ellipse_a: 0.0,
            ellipse_b: 0.0,
            ..Default::default()
        };
        let h = billiard_hamiltonian(&spec).unwrap();
        assert_eq!(h.dim(), 9);
        let evals = eigh(h.to_dense().as_ref()).unwrap().eigenvalues;
        let mut want: Vec<f64> = (1..=3)
            .flat_map(|k| {
                (1..=3).map(move |kp| 4.0 - 2.0 * ((k as f64 * PI / 4.0).cos() + (kp as f64 * PI / 4.0).cos()))
            })
            .collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in evals.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_field_is_real_symmetric() {
        let h = billiard_hamiltonian(&BilliardSpec::reduced()).unwrap();
        assert!(h.entries.iter().all(|e| e.2.im == 0.0));
        let d = h.to_dense();
        assert_eq!(hermiticity_error(d.as_ref()), 0.0);
    }

    #[test]
    fn field_breaks_reality_but_keeps_hermiticity() {
        let spec = BilliardSpec {
            b_field: 0.3,
            ..BilliardSpec::reduced()
        };
        let d = billiard_hamiltonian(&spec).unwrap().to_dense();
        assert!(hermiticity_error(d.as_ref()) < 1e-15);
        assert!((0..d.nrows()).any(|i| (0..d.ncols()).any(|j| d[(i, j)].im != 0.0)));
    }

    #[test]
    fn plaquette_flux() {
        // product of hoppings around (1,1)-(2,1)-(2,2)-(1,2) carries phase B
        let b = 0.37;
        let spec = BilliardSpec {
            rect_width: 4,
            rect_height: 4,
            ellipse_a: 0.0,
            ellipse_b: 0.0,
            b_field: b,
            ..Default::default()
        };
        let h = billiard_hamiltonian(&spec).unwrap();
        let d = h.to_dense();
        let idx = |x: u32, y: u32| h.sites.iter().position(|&s| s == (x, y)).unwrap();
        let (a, bb, c, e) = (idx(1, 1), idx(2, 1), idx(2, 2), idx(1, 2));
        let loop_product = d[(bb, a)] * d[(c, bb)] * d[(e, c)] * d[(a, e)];
        assert!((loop_product.arg() - b).abs() < 1e-14, "{}", loop_product.arg());
    }

    #[test]
    fn spectrum_within_gershgorin_band() {
        let h = billiard_hamiltonian(&BilliardSpec::reduced()).unwrap();
        let e = eigvalsh_real(h.to_dense_real().as_ref()).unwrap();
        assert!(e.iter().all(|x| (-1e-12..=8.0 + 1e-12).contains(x)));
    }

    #[test]
    fn dos_theory_values() {
        assert_eq!(billiard_dos_theory(-0.1), 0.0);
        assert_eq!(billiard_dos_theory(8.0), 0.0);
        assert_eq!(billiard_dos_theory(4.0), f64::INFINITY);
        assert!((billiard_dos_theory(4.0 + 1.3) - billiard_dos_theory(4.0 - 1.3)).abs() < 1e-15);
        // K(√3/2) by the arithmetic-geometric mean
        let (mut a, mut g) = (1.0f64, 0.5f64);
        for _ in 0..30 {
            (a, g) = (0.5 * (a + g), (a * g).sqrt());
        }
        let want = PI / (2.0 * a) / (2.0 * PI * PI);
        assert!((billiard_dos_theory(2.0) - want).abs() < 1e-13);
        assert!((billiard_dos_theory(2.0) - 0.1093).abs() < 1e-4);
    }

    #[test]
    fn sites_csv() {
        let spec = BilliardSpec {
            rect_width: 1,
            rect_height: 1,
            ellipse_a: 0.0,
            ellipse_b: 0.0,
            ..Default::default()
        };
        let h = billiard_hamiltonian(&spec).unwrap();
        let mut buf = Vec::new();
        h.write_sites_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "site_index,x,y\n0,0,0\n1,0,1\n2,1,0\n3,1,1\n"
        );
    }

    #[test]
    fn empty_geometry_is_an_error() {
        let spec = BilliardSpec {
            rect_width: 2,
            rect_height: 2,
            ellipse_a: 10.0,
            ellipse_b: 10.0,
            ..Default::default()
        };
        assert!(matches!(billiard_hamiltonian(&spec), Err(Error::Geometry(_))));
    }
}
