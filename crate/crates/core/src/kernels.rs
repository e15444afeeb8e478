//! Markov kernels between finite outcome spaces, represented as
//! row-stochastic matrices, plus the weak (masked) variant, smearing of
//! observables, action on measures, Bayes reversal, and product measures.

use crate::effects::EffectElement;
use crate::error::PovError;
use crate::observables::Observable;

const ROW_SUM_TOL: f64 = 1e-10;
const ENTRY_CLAMP: f64 = 1e-12;

/// Row-stochastic matrix: `rows[i][j]` is the confidence that source outcome
/// i is reported as target outcome j.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovKernel {
    rows: Vec<Vec<f64>>,
}

impl MarkovKernel {
    /// Validate a kernel. Rows with sums within 1e-10 of 1 are renormalized;
    /// entries within 1e-12 of [0,1] are clamped; worse violations are
    /// rejected.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, PovError> {
        Self::with_row_tol(rows, ROW_SUM_TOL)
    }

    /// Like [`MarkovKernel::new`] but with an explicit row-sum repair
    /// tolerance; used for witnesses recovered from the LP solver, whose
    /// residuals are bounded by the feasibility tolerance instead.
    pub fn with_row_tol(rows: Vec<Vec<f64>>, row_tol: f64) -> Result<Self, PovError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(PovError::InvalidInput("empty kernel".into()));
        }
        let l = rows[0].len();
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != l {
                return Err(PovError::DimMismatch(format!("ragged kernel row {i}")));
            }
            let mut clamped = Vec::with_capacity(l);
            for &v in &row {
                if !v.is_finite() || v < -ENTRY_CLAMP || v > 1.0 + ENTRY_CLAMP {
                    return Err(PovError::InvalidInput(format!(
                        "kernel entry {v} at row {i} escapes [0, 1]"
                    )));
                }
                clamped.push(v.clamp(0.0, 1.0));
            }
            let sum: f64 = clamped.iter().sum();
            if (sum - 1.0).abs() > row_tol {
                return Err(PovError::InvalidInput(format!(
                    "kernel row {i} sums to {sum}"
                )));
            }
            for v in &mut clamped {
                *v /= sum;
            }
            out.push(clamped);
        }
        Ok(MarkovKernel { rows: out })
    }

    /// Identity kernel on `n` outcomes.
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        MarkovKernel { rows }
    }

    pub fn source_size(&self) -> usize {
        self.rows.len()
    }

    pub fn target_size(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }
}

/// A kernel-shaped matrix whose Markov conditions are required only on the
/// rows in `support_mask` (finite "almost everywhere" semantics).
#[derive(Debug, Clone, PartialEq)]
pub struct WeakMarkovKernel {
    rows: Vec<Vec<f64>>,
    support_mask: Vec<bool>,
}

impl WeakMarkovKernel {
    /// Rows inside the mask must satisfy the Markov-kernel invariants.
    pub fn new(rows: Vec<Vec<f64>>, support_mask: Vec<bool>) -> Result<Self, PovError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(PovError::InvalidInput("empty kernel".into()));
        }
        if support_mask.len() != rows.len() {
            return Err(PovError::DimMismatch("mask length != row count".into()));
        }
        let l = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != l {
                return Err(PovError::DimMismatch(format!("ragged kernel row {i}")));
            }
            if support_mask[i] {
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOL
                    || row.iter().any(|&v| v < -ENTRY_CLAMP || v > 1.0 + ENTRY_CLAMP)
                {
                    return Err(PovError::InvalidInput(format!(
                        "masked row {i} violates the kernel conditions"
                    )));
                }
            }
        }
        Ok(WeakMarkovKernel { rows, support_mask })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn support_mask(&self) -> &[bool] {
        &self.support_mask
    }

    pub fn source_size(&self) -> usize {
        self.rows.len()
    }

    pub fn target_size(&self) -> usize {
        self.rows[0].len()
    }
}

/// Kernel composition ν₁·ν₂ (matrix product), itself row-stochastic.
pub fn compose(nu1: &MarkovKernel, nu2: &MarkovKernel) -> Result<MarkovKernel, PovError> {
    if nu1.target_size() != nu2.source_size() {
        return Err(PovError::DimMismatch(format!(
            "inner sizes {} vs {}",
            nu1.target_size(),
            nu2.source_size()
        )));
    }
    let k = nu1.source_size();
    let m = nu2.target_size();
    let mut rows = vec![vec![0.0; m]; k];
    for i in 0..k {
        for (y, &w) in nu1.rows[i].iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for h in 0..m {
                rows[i][h] += w * nu2.rows[y][h];
            }
        }
    }
    MarkovKernel::new(rows)
}

/// The 0-1 kernel of a deterministic map: row i has a single 1 in column
/// `f(i)`.
pub fn deterministic_kernel(
    source_size: usize,
    target_size: usize,
    f: impl Fn(usize) -> Option<usize>,
) -> Result<MarkovKernel, PovError> {
    let mut rows = vec![vec![0.0; target_size]; source_size];
    for (i, row) in rows.iter_mut().enumerate() {
        let j = f(i).ok_or_else(|| {
            PovError::PartialFunction(format!("no image for source outcome {i}"))
        })?;
        if j >= target_size {
            return Err(PovError::PartialFunction(format!(
                "image {j} of outcome {i} out of range"
            )));
        }
        row[j] = 1.0;
    }
    MarkovKernel::new(rows)
}

/// Smear ξ by ν with default target labels 0..l-1.
pub fn smear(xi: &Observable, nu: &MarkovKernel) -> Result<Observable, PovError> {
    let labels: Vec<f64> = (0..nu.target_size()).map(|j| j as f64).collect();
    smear_with_labels(xi, nu, &labels)
}

/// Smear ξ by ν: the target atom at label y_j is Σ_i ν_ij ξ(x_i).
/// Normalization of the result follows from row-stochasticity.
pub fn smear_with_labels(
    xi: &Observable,
    nu: &MarkovKernel,
    target_labels: &[f64],
) -> Result<Observable, PovError> {
    if nu.source_size() != xi.outcome_count() {
        return Err(PovError::DimMismatch(format!(
            "kernel source {} vs {} atoms",
            nu.source_size(),
            xi.outcome_count()
        )));
    }
    if target_labels.len() != nu.target_size() {
        return Err(PovError::DimMismatch(format!(
            "{} labels vs kernel target {}",
            target_labels.len(),
            nu.target_size()
        )));
    }
    let mut atoms: Vec<EffectElement> = Vec::with_capacity(nu.target_size());
    for j in 0..nu.target_size() {
        let mut atom = xi.atoms()[0].zero_like();
        for (i, source_atom) in xi.atoms().iter().enumerate() {
            let w = nu.entry(i, j);
            if w != 0.0 {
                atom = atom.raw_add(&source_atom.raw_scale(w))?;
            }
        }
        atoms.push(atom);
    }
    Observable::new(target_labels.to_vec(), atoms)
}

/// Push a probability vector through a kernel: (p·ν)_j = Σ_i p_i ν_ij.
pub fn apply_to_measure(nu: &MarkovKernel, p: &[f64]) -> Result<Vec<f64>, PovError> {
    if p.len() != nu.source_size() {
        return Err(PovError::DimMismatch(format!(
            "measure size {} vs kernel source {}",
            p.len(),
            nu.source_size()
        )));
    }
    let mut out = vec![0.0; nu.target_size()];
    for (i, &w) in p.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += w * nu.entry(i, j);
        }
    }
    Ok(out)
}

/// Weak-kernel variant: the measure must be supported inside the mask.
pub fn apply_weak_to_measure(
    nu: &WeakMarkovKernel,
    p: &[f64],
) -> Result<Vec<f64>, PovError> {
    if p.len() != nu.source_size() {
        return Err(PovError::DimMismatch(format!(
            "measure size {} vs kernel source {}",
            p.len(),
            nu.source_size()
        )));
    }
    let mut out = vec![0.0; nu.target_size()];
    for (i, &w) in p.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        if !nu.support_mask[i] {
            return Err(PovError::MaskViolation(i));
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += w * nu.rows[i][j];
        }
    }
    Ok(out)
}

/// Bayes reversal: ν'_ji = p_i ν_ij / (p·ν)_j on the support of p·ν, with
/// the mask marking the supported target rows. Satisfies ν'(ν(p)) = p.
pub fn reverse_kernel(
    nu: &MarkovKernel,
    p: &[f64],
) -> Result<WeakMarkovKernel, PovError> {
    let image = apply_to_measure(nu, p)?;
    let l = nu.target_size();
    let k = nu.source_size();
    let mut rows = vec![vec![0.0; k]; l];
    let mut mask = vec![false; l];
    for j in 0..l {
        if image[j] > 0.0 {
            mask[j] = true;
            for i in 0..k {
                rows[j][i] = p[i] * nu.entry(i, j) / image[j];
            }
        }
    }
    WeakMarkovKernel::new(rows, mask)
}

/// The product measure P×ν: matrix with entries p_i·ν_ij, total mass 1,
/// marginals P (rows) and ν(P) (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductMeasure {
    entries: Vec<Vec<f64>>,
}

impl ProductMeasure {
    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    /// Row marginal, equal to P.
    pub fn source_marginal(&self) -> Vec<f64> {
        self.entries.iter().map(|row| row.iter().sum()).collect()
    }

    /// Column marginal, equal to ν(P).
    pub fn target_marginal(&self) -> Vec<f64> {
        let l = self.entries[0].len();
        let mut out = vec![0.0; l];
        for row in &self.entries {
            for (j, &v) in row.iter().enumerate() {
                out[j] += v;
            }
        }
        out
    }
}

/// Build P×ν from a probability vector and a kernel.
pub fn product_measure(p: &[f64], nu: &MarkovKernel) -> Result<ProductMeasure, PovError> {
    if p.len() != nu.source_size() {
        return Err(PovError::DimMismatch(format!(
            "measure size {} vs kernel source {}",
            p.len(),
            nu.source_size()
        )));
    }
    let entries = p
        .iter()
        .enumerate()
        .map(|(i, &w)| nu.rows[i].iter().map(|&v| w * v).collect())
        .collect();
    Ok(ProductMeasure { entries })
}
