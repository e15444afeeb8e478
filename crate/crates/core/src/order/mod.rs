//! The decision layer: the fuzzy preorder and equivalence between
//! observables, clean (minimal) observables and rank-one refinements,
//! PV-mother extraction for commuting ranges, and the sufficiency suite
//! (pairwise Hellinger, family sufficiency, Blackwell recovery, and the
//! seven-way equivalence battery). Decisions about the existence of a
//! smearing kernel reduce to LP feasibility problems solved by the phase-1
//! simplex in [`simplex`].

mod simplex;

pub use simplex::{solve_feasibility, FeasibilityOutcome, FeasibilityProblem};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divergences::hellinger;
use crate::effects::{self, Backend, EffectElement, State};
use crate::error::PovError;
use crate::hermit::{self, CMatrix};
use crate::kernels::{self, MarkovKernel, WeakMarkovKernel};
use crate::observables::{self, Observable};
use crate::sampling;
use crate::tol::{RANK_THRESHOLD, TOL_COMM, TOL_SUFF};
use crate::Tolerances;

/// Sampled Hellinger gaps at or below this bound count as passing evidence.
const BATTERY_GAP_PASS: f64 = 1e-8;

/// Real-coordinate encoding of an effect: a Hermitian d×d equality
/// contributes d² real constraints (d diagonal, d(d-1)/2 real parts,
/// d(d-1)/2 imaginary parts); a tribe element contributes its n coordinates.
fn encode_effect(e: &EffectElement) -> Vec<f64> {
    match e {
        EffectElement::Hilbert(a) => {
            let d = a.dim();
            let m = a.matrix();
            let mut out = Vec::with_capacity(d * d);
            for i in 0..d {
                out.push(m[(i, i)].re);
            }
            for i in 0..d {
                for j in (i + 1)..d {
                    out.push(m[(i, j)].re);
                }
            }
            for i in 0..d {
                for j in (i + 1)..d {
                    out.push(m[(i, j)].im);
                }
            }
            out
        }
        EffectElement::Tribe(v) => v.clone(),
    }
}

/// Verdict of a preorder query, with the witness kernel when it holds.
#[derive(Debug, Clone)]
pub struct PreorderWitness {
    pub holds: bool,
    pub witness: Option<MarkovKernel>,
    /// Sup-norm defect of re-smearing the source by the witness.
    pub residual: f64,
}

/// Decide ξ ⪯ η: does a row-stochastic ν exist with η(y_j) = Σ_i ν_ij ξ(x_i)
/// as operator equalities? Solved by LP feasibility.
pub fn preorder_leq(
    xi: &Observable,
    eta: &Observable,
    tols: &Tolerances,
) -> Result<PreorderWitness, PovError> {
    if xi.backend() != eta.backend() {
        return Err(PovError::BackendMismatch("preorder operands".into()));
    }
    if xi.element_size() != eta.element_size() {
        return Err(PovError::DimMismatch(format!(
            "{} vs {}",
            xi.element_size(),
            eta.element_size()
        )));
    }
    let k = xi.outcome_count();
    let l = eta.outcome_count();
    let source_codes: Vec<Vec<f64>> = xi.atoms().iter().map(encode_effect).collect();
    let target_codes: Vec<Vec<f64>> = eta.atoms().iter().map(encode_effect).collect();
    let coords = source_codes[0].len();

    // variable v(i, j) = nu_ij at index i*l + j
    let mut prob = FeasibilityProblem::new(k * l);
    for (j, target) in target_codes.iter().enumerate() {
        for c in 0..coords {
            let mut coeffs = vec![0.0; k * l];
            for (i, source) in source_codes.iter().enumerate() {
                coeffs[i * l + j] = source[c];
            }
            prob.add_equality(coeffs, target[c])?;
        }
    }
    for i in 0..k {
        let group: Vec<usize> = (0..l).map(|j| i * l + j).collect();
        prob.add_unit_sum_group(&group)?;
    }

    match solve_feasibility(&prob, tols.feas)? {
        FeasibilityOutcome::Infeasible => Ok(PreorderWitness {
            holds: false,
            witness: None,
            residual: f64::INFINITY,
        }),
        FeasibilityOutcome::Feasible(x) => {
            let rows: Vec<Vec<f64>> = (0..k).map(|i| x[i * l..(i + 1) * l].to_vec()).collect();
            let witness =
                MarkovKernel::with_row_tol(rows, (10.0 * tols.feas).max(1e-6))?;
            let resmear = kernels::smear_with_labels(xi, &witness, eta.labels())?;
            let residual = resmear.atom_sup_dist(eta)?;
            if residual > tols.feas {
                return Err(PovError::NumericalFailure(format!(
                    "witness reconstruction residual {residual:e}"
                )));
            }
            Ok(PreorderWitness { holds: true, witness: Some(witness), residual })
        }
    }
}

/// Result of the two-sided preorder query.
#[derive(Debug, Clone)]
pub struct FuzzyEquivalence {
    pub equivalent: bool,
    /// Witness for ξ ⪯ η.
    pub forward: PreorderWitness,
    /// Witness for η ⪯ ξ.
    pub backward: PreorderWitness,
}

/// ξ ∼ η: the preorder holds in both directions.
pub fn fuzzy_equivalent(
    xi: &Observable,
    eta: &Observable,
    tols: &Tolerances,
) -> Result<FuzzyEquivalence, PovError> {
    let forward = preorder_leq(xi, eta, tols)?;
    let backward = preorder_leq(eta, xi, tols)?;
    Ok(FuzzyEquivalence {
        equivalent: forward.holds && backward.holds,
        forward,
        backward,
    })
}

/// Spectral split of every atom into rank-one effects, with the label map
/// that pushes the refinement back onto the original observable.
#[derive(Debug, Clone)]
pub struct RankOneRefinement {
    /// Observable with fresh labels 0, 1, ..., every atom of matrix rank 1.
    pub refined: Observable,
    /// `label_map[i]` is the original label the refined label `i` collapses
    /// to, so `pushforward(refined, |x| label_map[x as usize])` recovers the
    /// input.
    pub label_map: Vec<f64>,
}

/// Split each atom A_i = Σ_j a_ij P_ij into its rank-one spectral pieces
/// (eigenvalues at or below the rank threshold are dropped).
pub fn rank_one_refinement(eta: &Observable) -> Result<RankOneRefinement, PovError> {
    if eta.backend() != Backend::Hilbert {
        return Err(PovError::BackendMismatch("rank-one refinement needs hilbert".into()));
    }
    let mut atoms: Vec<EffectElement> = Vec::new();
    let mut label_map: Vec<f64> = Vec::new();
    for (atom, &label) in eta.atoms().iter().zip(eta.labels()) {
        let EffectElement::Hilbert(a) = atom else { unreachable!() };
        let evd = hermit::eig_h(a)?;
        for (idx, &lambda) in evd.eigenvalues.iter().enumerate() {
            if lambda > RANK_THRESHOLD {
                let u = evd.vectors.matrix().column(idx).into_owned();
                let piece = hermit::rank_one(lambda, &u);
                atoms.push(EffectElement::Hilbert(piece));
                label_map.push(label);
            }
        }
    }
    let labels: Vec<f64> = (0..atoms.len()).map(|i| i as f64).collect();
    let refined = Observable::new(labels, atoms)?;
    Ok(RankOneRefinement { refined, label_map })
}

/// Primary cleanness criterion: every nonzero atom has matrix rank 1.
pub fn is_clean(eta: &Observable) -> Result<bool, PovError> {
    if eta.backend() != Backend::Hilbert {
        return Err(PovError::BackendMismatch("cleanness needs hilbert".into()));
    }
    for atom in eta.atoms() {
        let EffectElement::Hilbert(a) = atom else { unreachable!() };
        if a.rank(RANK_THRESHOLD) > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cleanness verdict with per-instance LP evidence.
#[derive(Debug, Clone)]
pub struct CleanReport {
    pub clean: bool,
    pub refinement: RankOneRefinement,
    /// Verdict of refinement ⪯ η (always holds: η is a pushforward of it).
    pub refinement_below_eta: PreorderWitness,
    /// Verdict of η ⪯ refinement; fails on the non-clean instances where the
    /// refinement is strictly finer.
    pub eta_below_refinement: PreorderWitness,
}

/// Rank-based cleanness plus the LP cross-check on the rank-one refinement.
pub fn is_clean_with_evidence(
    eta: &Observable,
    tols: &Tolerances,
) -> Result<CleanReport, PovError> {
    let clean = is_clean(eta)?;
    let refinement = rank_one_refinement(eta)?;
    let refinement_below_eta = preorder_leq(&refinement.refined, eta, tols)?;
    let eta_below_refinement = preorder_leq(eta, &refinement.refined, tols)?;
    Ok(CleanReport { clean, refinement, refinement_below_eta, eta_below_refinement })
}

/// E^B ⪯ E^A for two-valued observables: true iff A = tB + sB' for some
/// t, s in [0,1]. Solved as a 2-variable least squares on the span, falling
/// back to LP feasibility with box constraints when the span degenerates.
pub fn two_valued_leq(
    b: &EffectElement,
    a: &EffectElement,
    tols: &Tolerances,
) -> Result<Option<(f64, f64)>, PovError> {
    if b.backend() != Backend::Hilbert || a.backend() != Backend::Hilbert {
        return Err(PovError::BackendMismatch("two-valued order needs hilbert".into()));
    }
    if b.size() != a.size() {
        return Err(PovError::DimMismatch(format!("{} vs {}", b.size(), a.size())));
    }
    let u = encode_effect(b);
    let v = encode_effect(&effects::orthosupplement(b));
    let w = encode_effect(a);

    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(p, q)| p * q).sum() };
    let guu = dot(&u, &u);
    let guv = dot(&u, &v);
    let gvv = dot(&v, &v);
    let det = guu * gvv - guv * guv;
    if det > 1e-12 {
        let rhs_u = dot(&u, &w);
        let rhs_v = dot(&v, &w);
        let t = (gvv * rhs_u - guv * rhs_v) / det;
        let s = (guu * rhs_v - guv * rhs_u) / det;
        let (tc, sc) = (t.clamp(0.0, 1.0), s.clamp(0.0, 1.0));
        let sup_res = u
            .iter()
            .zip(&v)
            .zip(&w)
            .map(|((&uu, &vv), &ww)| (tc * uu + sc * vv - ww).abs())
            .fold(0.0, f64::max);
        if sup_res <= tols.eq && (t - tc).abs() <= 1e-9 && (s - sc).abs() <= 1e-9 {
            return Ok(Some((tc, sc)));
        }
        if sup_res > tols.eq && (t - tc).abs() <= 1e-9 && (s - sc).abs() <= 1e-9 {
            // interior least-squares optimum already misses: no box point
            // can do better
            return Ok(None);
        }
    }

    // degenerate span (B proportional to I) or clamped optimum: LP with box
    // constraints t + t_slack = 1, s + s_slack = 1
    let mut prob = FeasibilityProblem::new(4);
    for c in 0..w.len() {
        prob.add_equality(vec![u[c], v[c], 0.0, 0.0], w[c])?;
    }
    prob.add_equality(vec![1.0, 0.0, 1.0, 0.0], 1.0)?;
    prob.add_equality(vec![0.0, 1.0, 0.0, 1.0], 1.0)?;
    match solve_feasibility(&prob, tols.feas)? {
        FeasibilityOutcome::Feasible(x) => Ok(Some((x[0].clamp(0.0, 1.0), x[1].clamp(0.0, 1.0)))),
        FeasibilityOutcome::Infeasible => Ok(None),
    }
}

/// E^A is minimal among two-valued observables iff ||A|| = ||A'|| = 1, i.e.
/// the spectrum of A touches both 0 and 1.
pub fn two_valued_is_minimal(
    a: &EffectElement,
    tols: &Tolerances,
) -> Result<bool, PovError> {
    let EffectElement::Hilbert(m) = a else {
        return Err(PovError::BackendMismatch("two-valued minimality needs hilbert".into()));
    };
    let (lo, hi) = hermit::spectral_bounds(m)?;
    Ok(hi >= 1.0 - tols.eq && lo <= tols.eq)
}

/// PV mother of an observable with mutually commuting range: the sharp
/// observable of joint-eigenspace projections and the kernel of shared
/// eigenvalues, with smear(ξ, ν) = η.
pub fn pvm_mother(
    eta: &Observable,
    tols: &Tolerances,
) -> Result<(Observable, MarkovKernel), PovError> {
    if eta.backend() != Backend::Hilbert {
        return Err(PovError::BackendMismatch("pv mother needs hilbert".into()));
    }
    let mats: Vec<CMatrix> = eta
        .atoms()
        .iter()
        .map(|a| match a {
            EffectElement::Hilbert(m) => m.clone(),
            EffectElement::Tribe(_) => unreachable!(),
        })
        .collect();
    for i in 0..mats.len() {
        for j in (i + 1)..mats.len() {
            let norm = hermit::commutator_norm(&mats[i], &mats[j])?;
            if norm > TOL_COMM {
                return Err(PovError::NotCommuting { defect: norm });
            }
        }
    }
    let (basis, values) = hermit::simultaneous_eigenbasis(&mats)?;
    let dim = basis.dim();
    let atom_count = mats.len();

    // group basis columns by their point-spectrum tuple (threshold 1e-7)
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for col in 0..dim {
        let found = groups.iter().position(|g| {
            let rep = g[0];
            (0..atom_count).all(|k| (values[k][col] - values[k][rep]).abs() <= 1e-7)
        });
        match found {
            Some(gi) => groups[gi].push(col),
            None => groups.push(vec![col]),
        }
    }

    let mut projections: Vec<EffectElement> = Vec::with_capacity(groups.len());
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(groups.len());
    for group in &groups {
        let mut p = CMatrix::zeros(dim);
        for &col in group {
            let u = basis.matrix().column(col).into_owned();
            p = p.add(&hermit::rank_one(1.0, &u));
        }
        projections.push(EffectElement::hilbert(p)?);
        let row: Vec<f64> = (0..atom_count)
            .map(|k| {
                let mean: f64 =
                    group.iter().map(|&c| values[k][c]).sum::<f64>() / group.len() as f64;
                mean.clamp(0.0, 1.0)
            })
            .collect();
        rows.push(row);
    }
    let labels: Vec<f64> = (0..groups.len()).map(|g| g as f64).collect();
    let mother = Observable::new(labels, projections)?;
    let kernel = MarkovKernel::with_row_tol(rows, 1e-8)?;

    let resmeared = kernels::smear_with_labels(&mother, &kernel, eta.labels())?;
    let defect = resmeared.atom_sup_dist(eta)?;
    if defect > tols.eq {
        return Err(PovError::NumericalFailure(format!(
            "pv mother reconstruction defect {defect:e}"
        )));
    }
    Ok((mother, kernel))
}

/// For a 0-1 kernel witnessing smear(ξ, ν) = η, verify that every η-atom is
/// ξ(S) for S = {i : ν_ij = 1} — the range-inclusion direction for
/// deterministic kernels.
pub fn range_inclusion_check(
    xi: &Observable,
    eta: &Observable,
    nu: &MarkovKernel,
    tols: &Tolerances,
) -> Result<bool, PovError> {
    for (i, row) in nu.rows().iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v.abs() > tols.eq && (v - 1.0).abs() > tols.eq {
                return Err(PovError::NotDeterministicKernel { row: i, col: j, value: v });
            }
        }
    }
    let smeared = kernels::smear_with_labels(xi, nu, eta.labels())?;
    let defect = smeared.atom_sup_dist(eta)?;
    if defect > tols.eq {
        return Err(PovError::NotASmearing { defect });
    }
    for (j, atom) in eta.atoms().iter().enumerate() {
        let support: Vec<usize> = (0..xi.outcome_count())
            .filter(|&i| (nu.entry(i, j) - 1.0).abs() <= tols.eq)
            .collect();
        let sum = xi.measure_of(&support)?;
        if sum.sup_dist(atom)? > tols.eq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hellinger evidence attached to a pairwise-sufficiency verdict.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HellingerEvidence {
    pub before: f64,
    pub after: f64,
}

/// ν is sufficient for {p, q} iff it preserves the Hellinger distance
/// (strictly convex with finite values).
pub fn pairwise_sufficient(
    nu: &MarkovKernel,
    p: &[f64],
    q: &[f64],
) -> Result<(bool, HellingerEvidence), PovError> {
    let before = hellinger(p, q)?;
    let after = hellinger(
        &kernels::apply_to_measure(nu, p)?,
        &kernels::apply_to_measure(nu, q)?,
    )?;
    Ok(((before - after).abs() <= TOL_SUFF, HellingerEvidence { before, after }))
}

/// Uniform convex combination of the family; its support is the union of
/// the members' supports, so every member is absolutely continuous with
/// respect to it.
pub fn dominating_mixture(family: &[Vec<f64>]) -> Result<Vec<f64>, PovError> {
    if family.is_empty() {
        return Err(PovError::EmptyFamily);
    }
    let n = family[0].len();
    let mut out = vec![0.0; n];
    for member in family {
        if member.len() != n {
            return Err(PovError::DimMismatch("family members of unequal length".into()));
        }
        for (o, &v) in out.iter_mut().zip(member) {
            *o += v;
        }
    }
    let scale = 1.0 / family.len() as f64;
    for o in &mut out {
        *o *= scale;
    }
    Ok(out)
}

/// Family sufficiency via the pairwise reduction against the dominating
/// mixture.
pub fn sufficient_for_family(
    nu: &MarkovKernel,
    family: &[Vec<f64>],
) -> Result<bool, PovError> {
    let mixture = dominating_mixture(family)?;
    for member in family {
        let (ok, _) = pairwise_sufficient(nu, member, &mixture)?;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Blackwell sufficiency: a single LP feasibility over a candidate recovery
/// kernel ν' (target → source, rows stochastic on the support of the image
/// mixture) with (p_k·ν)·ν' = p_k for every family member simultaneously.
pub fn blackwell_sufficient(
    nu: &MarkovKernel,
    family: &[Vec<f64>],
    tols: &Tolerances,
) -> Result<(bool, Option<WeakMarkovKernel>), PovError> {
    if family.is_empty() {
        return Err(PovError::EmptyFamily);
    }
    let k = nu.source_size();
    let l = nu.target_size();
    let images: Vec<Vec<f64>> = family
        .iter()
        .map(|p| kernels::apply_to_measure(nu, p))
        .collect::<Result<_, _>>()?;
    let image_mixture = dominating_mixture(&images)?;
    let mask: Vec<bool> = image_mixture.iter().map(|&v| v > 0.0).collect();
    let masked: Vec<usize> = (0..l).filter(|&j| mask[j]).collect();

    // variable v(j, i) at index pos(j)*k + i for masked target rows j
    let nvars = masked.len() * k;
    let mut prob = FeasibilityProblem::new(nvars);
    for (p, image) in family.iter().zip(&images) {
        for i in 0..k {
            let mut coeffs = vec![0.0; nvars];
            for (pos, &j) in masked.iter().enumerate() {
                coeffs[pos * k + i] = image[j];
            }
            prob.add_equality(coeffs, p[i])?;
        }
    }
    for pos in 0..masked.len() {
        let group: Vec<usize> = (0..k).map(|i| pos * k + i).collect();
        prob.add_unit_sum_group(&group)?;
    }

    match solve_feasibility(&prob, tols.feas)? {
        FeasibilityOutcome::Infeasible => Ok((false, None)),
        FeasibilityOutcome::Feasible(x) => {
            let mut rows = vec![vec![0.0; k]; l];
            for (pos, &j) in masked.iter().enumerate() {
                let mut row: Vec<f64> = x[pos * k..(pos + 1) * k].to_vec();
                let sum: f64 = row.iter().sum();
                if sum > 0.0 {
                    for v in &mut row {
                        *v = (*v / sum).clamp(0.0, 1.0);
                    }
                }
                rows[j] = row;
            }
            let recovery = WeakMarkovKernel::new(rows, mask)?;
            Ok((true, Some(recovery)))
        }
    }
}

/// Verdicts and numeric evidence for the sufficiency equivalence battery.
///
/// `blackwell` and `fuzzy_equivalent` are exact (LP-decided over a spanning
/// state family / at operator level); `pairwise` and `vs_mixture` are
/// sampled Hellinger checks — necessary-condition evidence that can refute
/// but not prove.
#[derive(Debug, Clone, Serialize)]
pub struct SufficiencyReport {
    pub pairwise: bool,
    pub vs_mixture: bool,
    pub hellinger_max_gap: f64,
    pub blackwell: bool,
    pub fuzzy_equivalent: bool,
    /// Whether the two exact items agree.
    pub agree: bool,
    pub note: String,
}

/// Canonical spanning family of density matrices: I/d plus the Hermitian
/// basis perturbations I/d ± H_b/(2d), kept PSD with an eigenvalue floor of
/// 1e-6 by mixing with I/d.
pub fn spanning_states(dim: usize) -> Vec<State> {
    use num_complex::Complex64;
    let mut hermitian_basis: Vec<CMatrix> = Vec::new();
    for i in 0..dim {
        let mut diag = vec![0.0; dim];
        diag[i] = 1.0;
        hermitian_basis.push(CMatrix::from_diagonal(&diag));
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut sym = nalgebra::DMatrix::zeros(dim, dim);
            sym[(i, j)] = Complex64::new(1.0, 0.0);
            sym[(j, i)] = Complex64::new(1.0, 0.0);
            hermitian_basis.push(CMatrix::new_hermitian(sym).expect("symmetric basis element"));
            let mut asym = nalgebra::DMatrix::zeros(dim, dim);
            asym[(i, j)] = Complex64::new(0.0, 1.0);
            asym[(j, i)] = Complex64::new(0.0, -1.0);
            hermitian_basis
                .push(CMatrix::new_hermitian(asym).expect("antisymmetric basis element"));
        }
    }

    let mixed = CMatrix::identity(dim).scale(1.0 / dim as f64);
    let mut states = vec![State::density(mixed.clone()).expect("maximally mixed state")];
    for h in &hermitian_basis {
        let traceless = h.sub(&CMatrix::identity(dim).scale(hermit::trace(h) / dim as f64));
        for sign in [1.0, -1.0] {
            let mut rho = mixed.add(&traceless.scale(sign / (2.0 * dim as f64)));
            let min_eig = hermit::spectral_bounds(&rho).expect("hermitian").0;
            if min_eig < 1e-6 {
                // mix towards I/d until the floor holds
                let lambda = (1e-6 - min_eig) / (1.0 / dim as f64 - min_eig);
                rho = rho.scale(1.0 - lambda).add(&mixed.scale(lambda));
            }
            if let Ok(state) = State::density(rho) {
                states.push(state);
            }
        }
    }
    states
}

/// Run the full sufficiency battery for a smearing ξ ⪯ η via ν, with a
/// faithful reference state m0 and `n_states` extra sampled states.
pub fn equivalence_battery(
    xi: &Observable,
    eta: &Observable,
    nu: &MarkovKernel,
    m0: &State,
    n_states: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<SufficiencyReport, PovError> {
    if xi.backend() != Backend::Hilbert {
        return Err(PovError::BackendMismatch("battery needs the hilbert backend".into()));
    }
    if !m0.is_faithful() {
        return Err(PovError::NotFaithful(m0.min_weight()));
    }
    let smeared = kernels::smear_with_labels(xi, nu, eta.labels())?;
    let defect = smeared.atom_sup_dist(eta)?;
    if defect > tols.eq {
        return Err(PovError::NotASmearing { defect });
    }

    // exact items: operator-level LPs and the Blackwell LP over a spanning
    // state family (valid because the Blackwell constraint is linear in P)
    let equivalence = fuzzy_equivalent(xi, eta, tols)?;
    let dim = xi.element_size();
    let spanning = spanning_states(dim);
    let spanning_family: Vec<Vec<f64>> = spanning
        .iter()
        .map(|m| observables::distribution(xi, m))
        .collect::<Result<_, _>>()?;
    let (blackwell, _recovery) = blackwell_sufficient(nu, &spanning_family, tols)?;

    // sampled items: Hellinger-gap evidence on canonical plus random states
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = spanning;
    for _ in 0..n_states {
        sampled.push(sampling::random_density(dim, &mut rng));
    }
    let reference = observables::distribution(xi, m0)?;
    let reference_image = kernels::apply_to_measure(nu, &reference)?;

    let mut mixture_gap = 0.0f64;
    let mut distributions = Vec::with_capacity(sampled.len());
    for m in &sampled {
        let p = observables::distribution(xi, m)?;
        let before = hellinger(&p, &reference)?;
        let after = hellinger(&kernels::apply_to_measure(nu, &p)?, &reference_image)?;
        mixture_gap = mixture_gap.max((before - after).abs());
        distributions.push(p);
    }
    let mut pairwise_gap = 0.0f64;
    for a in 0..distributions.len() {
        for b in (a + 1)..distributions.len() {
            let before = hellinger(&distributions[a], &distributions[b])?;
            let after = hellinger(
                &kernels::apply_to_measure(nu, &distributions[a])?,
                &kernels::apply_to_measure(nu, &distributions[b])?,
            )?;
            pairwise_gap = pairwise_gap.max((before - after).abs());
        }
    }

    Ok(SufficiencyReport {
        pairwise: pairwise_gap <= BATTERY_GAP_PASS,
        vs_mixture: mixture_gap <= BATTERY_GAP_PASS,
        hellinger_max_gap: mixture_gap.max(pairwise_gap),
        blackwell,
        fuzzy_equivalent: equivalence.equivalent,
        agree: blackwell == equivalence.equivalent,
        note: "pairwise and vs_mixture are sampled evidence, not proofs".into(),
    })
}
