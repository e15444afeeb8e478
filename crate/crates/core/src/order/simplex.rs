//! Phase-1 simplex feasibility solver: dense tableau, Bland's anti-cycling
//! rule, fixed variable order. Problems here are tiny (at most a few hundred
//! variables), so the implementation favors robustness over speed.

use crate::error::PovError;

const PIVOT_TOL: f64 = 1e-11;

/// Equality-constrained feasibility problem: A·x = b, x >= 0, plus optional
/// index groups whose variables must sum to 1.
#[derive(Debug, Clone)]
pub struct FeasibilityProblem {
    num_vars: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl FeasibilityProblem {
    pub fn new(num_vars: usize) -> Self {
        FeasibilityProblem { num_vars, rows: Vec::new(), rhs: Vec::new() }
    }

    /// Add an equality constraint Σ coeff_i · x_i = rhs.
    pub fn add_equality(&mut self, coeffs: Vec<f64>, rhs: f64) -> Result<(), PovError> {
        if coeffs.len() != self.num_vars {
            return Err(PovError::DimMismatch(format!(
                "{} coefficients for {} variables",
                coeffs.len(),
                self.num_vars
            )));
        }
        if !rhs.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PovError::InvalidInput("non-finite constraint data".into()));
        }
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        Ok(())
    }

    /// Require the variables in `group` to sum to 1.
    pub fn add_unit_sum_group(&mut self, group: &[usize]) -> Result<(), PovError> {
        let mut coeffs = vec![0.0; self.num_vars];
        for &i in group {
            if i >= self.num_vars {
                return Err(PovError::InvalidInput(format!("variable index {i} out of range")));
            }
            coeffs[i] = 1.0;
        }
        self.add_equality(coeffs, 1.0)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    /// Sup-norm residual of A·x - b.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, &b)| {
                let lhs: f64 = row.iter().zip(x).map(|(c, v)| c * v).sum();
                (lhs - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Outcome of the feasibility solve.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityOutcome {
    Feasible(Vec<f64>),
    Infeasible,
}

/// Solve the feasibility problem by phase-1 simplex.
///
/// Feasibility is accepted when the residual is within `tol_feas`;
/// infeasibility is trusted only when the phase-1 optimum exceeds
/// 10·tol_feas. The gray zone in between raises `NumericalFailure` rather
/// than emitting a wrong mathematical verdict.
pub fn solve_feasibility(
    prob: &FeasibilityProblem,
    tol_feas: f64,
) -> Result<FeasibilityOutcome, PovError> {
    let m = prob.rows.len();
    let n = prob.num_vars;
    if m == 0 {
        return Ok(FeasibilityOutcome::Feasible(vec![0.0; n]));
    }

    // tableau columns: n structural vars, m artificials, then the rhs
    let total = n + m;
    let mut tableau = vec![vec![0.0f64; total + 1]; m];
    for (i, (row, &b)) in prob.rows.iter().zip(&prob.rhs).enumerate() {
        let flip = if b < 0.0 { -1.0 } else { 1.0 };
        for (j, &c) in row.iter().enumerate() {
            tableau[i][j] = flip * c;
        }
        tableau[i][n + i] = 1.0;
        tableau[i][total] = flip * b;
    }
    let mut basis: Vec<usize> = (n..total).collect();
    let mut is_basic = vec![false; total];
    for &v in &basis {
        is_basic[v] = true;
    }

    // reduced-cost row for minimizing the sum of artificials:
    // z_j - c_j = Σ_i T[i][j] - c_j over the artificial-basic start
    let mut zrow = vec![0.0f64; total + 1];
    for j in 0..=total {
        let mut s = 0.0;
        for row in tableau.iter() {
            s += row[j];
        }
        zrow[j] = s;
    }
    for j in n..total {
        zrow[j] -= 1.0;
    }

    let max_iters = 50 * (m + n).max(10);
    let mut optimal = false;
    for _ in 0..max_iters {
        // Bland: entering variable is the smallest nonbasic structural
        // index with positive reduced cost. Basic columns have reduced cost
        // zero in exact arithmetic and artificials must never re-enter;
        // skipping both guards against noise-level reduced costs triggering
        // pivots on tiny elements that corrupt the tableau.
        let entering = (0..n).find(|&j| !is_basic[j] && zrow[j] > PIVOT_TOL);
        let Some(enter) = entering else {
            optimal = true;
            break;
        };

        // ratio test, ties broken by smallest basis variable (Bland)
        let mut pivot_row: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let a = tableau[i][enter];
            if a > PIVOT_TOL {
                // rhs entries can round slightly negative on degenerate
                // bases; clamping keeps the ratio test nonnegative
                let ratio = tableau[i][total].max(0.0) / a;
                let better = match pivot_row {
                    None => true,
                    Some(r) => {
                        ratio < best_ratio - PIVOT_TOL
                            || (ratio < best_ratio + PIVOT_TOL && basis[i] < basis[r])
                    }
                };
                if better {
                    best_ratio = ratio;
                    pivot_row = Some(i);
                }
            }
        }
        let Some(prow) = pivot_row else {
            return Err(PovError::NumericalFailure(
                "phase-1 pivot column has no positive entry".into(),
            ));
        };

        // pivot
        let pivot = tableau[prow][enter];
        for v in tableau[prow].iter_mut() {
            *v /= pivot;
        }
        for i in 0..m {
            if i != prow {
                let factor = tableau[i][enter];
                if factor != 0.0 {
                    for j in 0..=total {
                        tableau[i][j] -= factor * tableau[prow][j];
                    }
                }
            }
        }
        let zfactor = zrow[enter];
        if zfactor != 0.0 {
            for j in 0..=total {
                zrow[j] -= zfactor * tableau[prow][j];
            }
        }
        is_basic[basis[prow]] = false;
        is_basic[enter] = true;
        basis[prow] = enter;
    }
    if !optimal {
        return Err(PovError::NumericalFailure(
            "phase-1 simplex hit the iteration cap".into(),
        ));
    }

    // phase-1 objective: total artificial mass left in the basis
    let objective: f64 = basis
        .iter()
        .zip(tableau.iter())
        .filter(|(&v, _)| v >= n)
        .map(|(_, row)| row[total])
        .sum();

    if objective > 10.0 * tol_feas {
        return Ok(FeasibilityOutcome::Infeasible);
    }

    let mut x = vec![0.0f64; n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = tableau[i][total].max(0.0);
        }
    }
    let residual = prob.residual(&x);
    if residual <= tol_feas {
        Ok(FeasibilityOutcome::Feasible(x))
    } else if objective <= tol_feas {
        Err(PovError::NumericalFailure(format!(
            "phase-1 optimum {objective:e} but residual {residual:e}"
        )))
    } else {
        Err(PovError::NumericalFailure(format!(
            "phase-1 optimum {objective:e} in the gray zone"
        )))
    }
}
