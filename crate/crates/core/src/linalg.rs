//! Dense Hermitian and unitary eigen-decompositions.
//!
//! Both routines run faer single-threaded (`Par::Seq`), so the output bits
//! never depend on how many worker threads the caller uses.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::{c64, Mat, MatRef, Par};

use crate::error::{Error, Result};

/// Eigenvalues (or eigen-angles) in ascending order with orthonormal
/// eigenvectors stored as the columns of `eigenvectors`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat<c64>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `j` as a contiguous slice.
    pub fn eigenvector(&self, j: usize) -> &[c64] {
        let col = self.eigenvectors.col(j);
        col.try_as_col_major()
            .expect("eigenvector storage is column-major")
            .as_slice()
    }

    /// `max_ij |A - V diag(λ) V†|` for a Hermitian `A`.
    pub fn reconstruction_error(&self, a: MatRef<'_, c64>) -> f64 {
        let v = &self.eigenvectors;
        let n = self.dim();
        let scaled = Mat::from_fn(n, n, |i, j| v[(i, j)] * self.eigenvalues[j]);
        max_abs_diff(a, (&scaled * v.adjoint()).as_ref())
    }

    /// `max_ij |V†V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.eigenvectors;
        let gram = v.adjoint() * v;
        let n = self.dim();
        max_abs_diff(gram.as_ref(), Mat::<c64>::identity(n, n).as_ref())
    }
}

pub fn max_abs(a: MatRef<'_, c64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

pub fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// `max_ij |H_ij - conj(H_ji)|`.
pub fn hermiticity_error(h: MatRef<'_, c64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..h.ncols() {
        for i in 0..=j.min(h.nrows() - 1) {
            m = m.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    m
}

/// `max_ij |U†U - I|`.
pub fn unitarity_error(u: MatRef<'_, c64>) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    max_abs_diff(gram.as_ref(), Mat::<c64>::identity(n, n).as_ref())
}

// Rotate each column so its largest-magnitude entry (first on ties) is real
// and positive.
fn fix_phases(v: &mut Mat<c64>) {
    for j in 0..v.ncols() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for i in 0..v.nrows() {
            let a = v[(i, j)].norm();
            if a > best_abs * (1.0 + 1e-12) {
                best = i;
                best_abs = a;
            }
        }
        if best_abs > 0.0 {
            let p = v[(best, j)];
            let phase = p.conj() / p.norm();
            for i in 0..v.nrows() {
                v[(i, j)] *= phase;
            }
            v[(best, j)] = c64::new(v[(best, j)].norm(), 0.0);
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix (lower triangle is read).
///
/// Eigenvalues ascend; ties keep the solver's order. Each eigenvector's
/// largest component is made real positive.
pub fn eigh(h: MatRef<'_, c64>) -> Result<EigenSystem> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h.ncols(),
        });
    }
    let scale = max_abs(h);
    let herm = hermiticity_error(h);
    if herm > 1e-12 * scale.max(1.0) {
        return Err(Error::Eigen {
            dim: n,
            max_abs: scale,
            detail: format!("input is not Hermitian (deviation {herm:e})"),
        });
    }
    let mut u = Mat::<c64>::zeros(n, n);
    let mut s = faer::diag::Diag::<c64>::zeros(n);
    let par = Par::Seq;
    let mut mem = MemBuffer::new(evd::self_adjoint_evd_scratch::<c64>(
        n,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    evd::self_adjoint_evd(
        h,
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|e| Error::Eigen {
        dim: n,
        max_abs: scale,
        detail: format!("{e:?}"),
    })?;
    let eigenvalues: Vec<f64> = (0..n).map(|i| s.column_vector()[i].re).collect();
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigen {
            dim: n,
            max_abs: scale,
            detail: "non-finite eigenvalue".into(),
        });
    }
    fix_phases(&mut u);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors: u,
    })
}

/// Eigenvalues only, for a real symmetric matrix given in its lower triangle.
pub fn eigvalsh_real(h: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let n = h.nrows();
    let mut s = faer::diag::Diag::<f64>::zeros(n);
    let par = Par::Seq;
    let mut mem = MemBuffer::new(evd::self_adjoint_evd_scratch::<f64>(
        n,
        ComputeEigenvectors::No,
        par,
        Default::default(),
    ));
    evd::self_adjoint_evd(h, s.as_mut(), None, par, MemStack::new(&mut mem), Default::default()).map_err(|e| {
        Error::Eigen {
            dim: n,
            max_abs: f64::NAN,
            detail: format!("{e:?}"),
        }
    })?;
    Ok((0..n).map(|i| s.column_vector()[i]).collect())
}

/// Eigen-decomposition of a real symmetric matrix (lower triangle is read).
///
/// Returns ascending eigenvalues and real orthonormal eigenvectors, each
/// with its largest-magnitude component made positive.
pub fn eigh_real(h: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h.ncols(),
        });
    }
    let mut u = Mat::<f64>::zeros(n, n);
    let mut s = faer::diag::Diag::<f64>::zeros(n);
    let par = Par::Seq;
    let mut mem = MemBuffer::new(evd::self_adjoint_evd_scratch::<f64>(
        n,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    evd::self_adjoint_evd(
        h,
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|e| Error::Eigen {
        dim: n,
        max_abs: f64::NAN,
        detail: format!("{e:?}"),
    })?;
    let eigenvalues: Vec<f64> = (0..n).map(|i| s.column_vector()[i]).collect();
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigen {
            dim: n,
            max_abs: f64::NAN,
            detail: "non-finite eigenvalue".into(),
        });
    }
    for j in 0..n {
        let mut best = 0;
        for i in 0..n {
            if u[(i, j)].abs() > u[(best, j)].abs() * (1.0 + 1e-12) {
                best = i;
            }
        }
        if u[(best, j)] < 0.0 {
            for i in 0..n {
                u[(i, j)] = -u[(i, j)];
            }
        }
    }
    Ok((eigenvalues, u))
}

/// Eigen-decomposition of a unitary matrix.
///
/// Returns eigen-angles `φ ∈ (-π, π]` in ascending order. The complex Schur
/// vectors of a normal matrix are its eigenvectors; faer's general
/// eigensolver is used and the columns are re-orthonormalised by modified
/// Gram–Schmidt in angle order, which only matters for (near-)degenerate angles.
pub fn unitary_eigs(u: MatRef<'_, c64>) -> Result<EigenSystem> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.ncols(),
        });
    }
    let deviation = unitarity_error(u);
    if deviation > 1e-8 {
        return Err(Error::NonUnitary { deviation });
    }
    let mut vecs = Mat::<c64>::zeros(n, n);
    let mut s = faer::diag::Diag::<c64>::zeros(n);
    let par = Par::Seq;
    let mut mem = MemBuffer::new(evd::evd_scratch::<c64>(
        n,
        ComputeEigenvectors::No,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    evd::evd_cplx(
        u,
        s.as_mut(),
        None,
        Some(vecs.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|e| Error::Eigen {
        dim: n,
        max_abs: max_abs(u),
        detail: format!("{e:?}"),
    })?;

    let mut angles: Vec<(f64, usize)> = (0..n)
        .map(|i| {
            let z = s.column_vector()[i];
            let mut a = z.im.atan2(z.re);
            if a <= -std::f64::consts::PI {
                a = std::f64::consts::PI;
            }
            (a, i)
        })
        .collect();
    angles.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    let mut out = Mat::<c64>::zeros(n, n);
    for (k, &(_, src)) in angles.iter().enumerate() {
        for i in 0..n {
            out[(i, k)] = vecs[(i, src)];
        }
    }
    for k in 0..n {
        for p in 0..k {
            let mut dot = c64::new(0.0, 0.0);
            for i in 0..n {
                dot += out[(i, p)].conj() * out[(i, k)];
            }
            for i in 0..n {
                let d = out[(i, p)] * dot;
                out[(i, k)] -= d;
            }
        }
        let norm = (0..n).map(|i| out[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Eigen {
                dim: n,
                max_abs: max_abs(u),
                detail: "eigenvector collapsed during orthonormalisation".into(),
            });
        }
        for i in 0..n {
            out[(i, k)] /= norm;
        }
    }
    fix_phases(&mut out);
    Ok(EigenSystem {
        eigenvalues: angles.into_iter().map(|(a, _)| a).collect(),
        eigenvectors: out,
    })
}

impl EigenSystem {
    /// `max_ij |U - V e^{iΦ} V†|` for a unitary `U`.
    pub fn unitary_reconstruction_error(&self, u: MatRef<'_, c64>) -> f64 {
        let v = &self.eigenvectors;
        let n = self.dim();
        let scaled = Mat::from_fn(n, n, |i, j| v[(i, j)] * c64::cis(self.eigenvalues[j]));
        max_abs_diff(u, (&scaled * v.adjoint()).as_ref())
    }
}
