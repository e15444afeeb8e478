//! Dense complex Hermitian matrix core.
//!
//! Everything downstream (effects, observables, the order module) goes
//! through the types here: [`CMatrix`] wraps a dense complex matrix that has
//! been checked Hermitian at construction, and [`eig_h`] provides the sorted
//! spectral decomposition the rest of the library relies on.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::PovError;
use crate::tol::{EIG_CLUSTER_GAP, TOL_COMM, TOL_EIG, TOL_HERM, TOL_PSD, TOL_SIMDIAG};

/// Dense d×d complex matrix flagged Hermitian at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    inner: DMatrix<Complex64>,
}

impl CMatrix {
    /// Build from a dense matrix, verifying finiteness and hermiticity.
    pub fn new_hermitian(m: DMatrix<Complex64>) -> Result<Self, PovError> {
        if !m.is_square() {
            return Err(PovError::DimMismatch(format!(
                "expected square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        for z in m.iter() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(PovError::InvalidInput("non-finite matrix entry".into()));
            }
        }
        let mut defect = 0.0f64;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let d = (m[(i, j)] - m[(j, i)].conj()).norm();
                defect = defect.max(d);
            }
        }
        if defect > TOL_HERM {
            return Err(PovError::NonHermitian { defect });
        }
        // symmetrize so downstream arithmetic sees an exactly hermitian matrix
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(CMatrix { inner: herm })
    }

    /// Zero matrix.
    pub fn zeros(dim: usize) -> Self {
        CMatrix { inner: DMatrix::zeros(dim, dim) }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        CMatrix { inner: DMatrix::identity(dim, dim) }
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        CMatrix { inner: m }
    }

    /// Convenience constructor from row-major real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, PovError> {
        let d = rows.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(PovError::DimMismatch("ragged rows".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(x, 0.0);
            }
        }
        Self::new_hermitian(m)
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    /// Sup-norm (max entry modulus).
    pub fn sup_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Sup-norm distance to another matrix.
    pub fn sup_dist(&self, other: &CMatrix) -> f64 {
        sup_dist(&self.inner, &other.inner)
    }

    /// Entrywise sum (hermiticity is preserved exactly).
    pub fn add(&self, other: &CMatrix) -> CMatrix {
        CMatrix { inner: &self.inner + &other.inner }
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        CMatrix { inner: &self.inner - &other.inner }
    }

    /// Scale by a real factor.
    pub fn scale(&self, factor: f64) -> CMatrix {
        CMatrix { inner: &self.inner * Complex64::new(factor, 0.0) }
    }

    /// trace(self · other), a real number for Hermitian arguments.
    pub fn trace_product(&self, other: &CMatrix) -> f64 {
        (&self.inner * &other.inner).trace().re
    }

    /// Matrix rank: number of eigenvalues above `threshold` in modulus.
    pub fn rank(&self, threshold: f64) -> usize {
        let evd = eig_h(self).expect("hermitian by construction");
        evd.eigenvalues.iter().filter(|l| l.abs() > threshold).count()
    }

    /// U f(Λ) U* for a real function of the spectrum.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let evd = eig_h(self).expect("hermitian by construction");
        let d = self.dim();
        let mut diag = DMatrix::zeros(d, d);
        for (i, &l) in evd.eigenvalues.iter().enumerate() {
            diag[(i, i)] = Complex64::new(f(l), 0.0);
        }
        let u = evd.vectors.matrix();
        CMatrix::new_hermitian(u * diag * u.adjoint()).expect("hermitian by construction")
    }
}

fn sup_dist(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Spectral decomposition of a Hermitian matrix: ascending eigenvalues and a
/// unitary matrix of eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the corresponding eigenvectors.
    pub vectors: CMatrix,
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_h(a: &CMatrix) -> Result<EigenDecomposition, PovError> {
    let d = a.dim();
    let se = nalgebra::SymmetricEigen::new(a.inner.clone());
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&i, &j| {
        se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(d, d);
    for (col, &i) in idx.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }
    let recon_defect = {
        let mut diag = DMatrix::zeros(d, d);
        for (i, &l) in eigenvalues.iter().enumerate() {
            diag[(i, i)] = Complex64::new(l, 0.0);
        }
        sup_dist(&(&vectors * diag * vectors.adjoint()), &a.inner)
    };
    let unit_defect = sup_dist(&(vectors.adjoint() * &vectors), &DMatrix::identity(d, d));
    if recon_defect > TOL_EIG || unit_defect > TOL_EIG {
        return Err(PovError::NumericalFailure(format!(
            "eigendecomposition residual {recon_defect:e}, unitarity defect {unit_defect:e}"
        )));
    }
    Ok(EigenDecomposition { eigenvalues, vectors: CMatrix { inner: vectors } })
}

/// Loewner order: a <= b iff min eigenvalue of (b - a) >= -TOL_PSD.
pub fn loewner_leq(a: &CMatrix, b: &CMatrix) -> Result<bool, PovError> {
    if a.dim() != b.dim() {
        return Err(PovError::DimMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    let diff = b.sub(a);
    let evd = eig_h(&diff)?;
    Ok(evd.eigenvalues[0] >= -TOL_PSD)
}

/// True iff the commutator norm ||ab - ba||_sup is below TOL_COMM.
pub fn commutes(a: &CMatrix, b: &CMatrix) -> Result<bool, PovError> {
    Ok(commutator_norm(a, b)? <= TOL_COMM)
}

pub(crate) fn commutator_norm(a: &CMatrix, b: &CMatrix) -> Result<f64, PovError> {
    if a.dim() != b.dim() {
        return Err(PovError::DimMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    let comm = &a.inner * &b.inner - &b.inner * &a.inner;
    Ok(comm.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Common eigenbasis of pairwise-commuting Hermitian matrices.
///
/// Returns the unitary `U` and, per input matrix, the vector of eigenvalues
/// read along the columns of `U`: column `x` carries the point-spectrum tuple
/// `(v_1[x], ..., v_m[x])`.
///
/// Uses deterministic sequential eigenspace refinement: diagonalize the first
/// matrix, partition columns into eigenvalue clusters (gap > 1e-7), then
/// recurse on the compressions of the remaining matrices within each cluster.
pub fn simultaneous_eigenbasis(
    effects: &[CMatrix],
) -> Result<(CMatrix, Vec<Vec<f64>>), PovError> {
    if effects.is_empty() {
        return Err(PovError::InvalidInput("empty list of effects".into()));
    }
    let d = effects[0].dim();
    for e in effects {
        if e.dim() != d {
            return Err(PovError::DimMismatch("unequal dims in effect list".into()));
        }
    }
    for i in 0..effects.len() {
        for j in (i + 1)..effects.len() {
            let norm = commutator_norm(&effects[i], &effects[j])?;
            if norm > TOL_COMM {
                return Err(PovError::NotCommuting { defect: norm });
            }
        }
    }

    let mut basis: DMatrix<Complex64> = DMatrix::identity(d, d);
    // Column index ranges of the current invariant subspaces.
    let mut blocks: Vec<(usize, usize)> = vec![(0, d)];

    for a in effects {
        let mut next_blocks = Vec::new();
        for &(lo, hi) in &blocks {
            let width = hi - lo;
            if width == 1 {
                next_blocks.push((lo, hi));
                continue;
            }
            let sub = basis.columns(lo, width).into_owned();
            let compressed = sub.adjoint() * &a.inner * &sub;
            let comp = CMatrix::new_hermitian(compressed).map_err(|_| {
                PovError::DegeneracyResolutionFailed { residual: f64::NAN }
            })?;
            let evd = eig_h(&comp)?;
            let rotated = &sub * evd.vectors.matrix();
            for (k, col) in rotated.column_iter().enumerate() {
                basis.set_column(lo + k, &col);
            }
            // split into clusters along eigenvalue gaps
            let mut start = 0usize;
            for k in 1..width {
                if evd.eigenvalues[k] - evd.eigenvalues[k - 1] > EIG_CLUSTER_GAP {
                    next_blocks.push((lo + start, lo + k));
                    start = k;
                }
            }
            next_blocks.push((lo + start, hi));
        }
        blocks = next_blocks;
    }

    // Read eigenvalues off the refined basis and verify the residuals.
    let mut values = Vec::with_capacity(effects.len());
    for a in effects {
        let transformed = basis.adjoint() * &a.inner * &basis;
        let mut v = Vec::with_capacity(d);
        let mut off = 0.0f64;
        for x in 0..d {
            v.push(transformed[(x, x)].re);
            for y in 0..d {
                if x != y {
                    off = off.max(transformed[(x, y)].norm());
                }
            }
        }
        if off > TOL_SIMDIAG {
            return Err(PovError::DegeneracyResolutionFailed { residual: off });
        }
        values.push(v);
    }
    Ok((CMatrix { inner: basis }, values))
}

/// Min and max eigenvalue of a Hermitian matrix.
pub fn spectral_bounds(a: &CMatrix) -> Result<(f64, f64), PovError> {
    let evd = eig_h(a)?;
    Ok((evd.eigenvalues[0], *evd.eigenvalues.last().expect("nonempty spectrum")))
}

/// True iff `a` is positive semidefinite within TOL_PSD.
pub fn is_psd(a: &CMatrix) -> Result<bool, PovError> {
    Ok(spectral_bounds(a)?.0 >= -TOL_PSD)
}

/// Real trace of a Hermitian matrix.
pub fn trace(a: &CMatrix) -> f64 {
    a.inner.trace().re
}

/// Rank-one matrix λ·u·u* from a column of a unitary.
pub fn rank_one(scale: f64, u: &DVector<Complex64>) -> CMatrix {
    let m = u * u.adjoint() * Complex64::new(scale, 0.0);
    // u u* is hermitian up to rounding; symmetrize through the constructor
    CMatrix::new_hermitian(m).expect("rank-one outer product is hermitian")
}
