//! Finite-outcome observables: normalized effect-valued measures over a
//! finite set of real outcome labels, together with pushforward along label
//! maps, mean values, spectra, and the state-to-distribution map.

use crate::effects::{self, Backend, EffectElement, State};
use crate::error::PovError;
use crate::tol::TOL_EQ;

/// A finite-outcome observable: strictly increasing real labels and one
/// effect per label, summing to the 1-element.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    labels: Vec<f64>,
    atoms: Vec<EffectElement>,
}

impl Observable {
    /// Validate and canonically sort an observable.
    ///
    /// Atoms must share a backend/shape and sum to the 1-element within
    /// TOL_EQ; labels must be distinct finite reals.
    pub fn new(labels: Vec<f64>, atoms: Vec<EffectElement>) -> Result<Self, PovError> {
        if labels.is_empty() || labels.len() != atoms.len() {
            return Err(PovError::InvalidInput(format!(
                "{} labels vs {} atoms",
                labels.len(),
                atoms.len()
            )));
        }
        for (index, atom) in atoms.iter().enumerate() {
            if atom.backend() != atoms[0].backend() || atom.size() != atoms[0].size() {
                return Err(PovError::InvalidAtom {
                    index,
                    reason: "backend or shape differs from first atom".into(),
                });
            }
        }
        for &l in &labels {
            if !l.is_finite() {
                return Err(PovError::InvalidInput(format!("non-finite label {l}")));
            }
        }
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&i, &j| labels[i].total_cmp(&labels[j]));
        for w in order.windows(2) {
            if labels[w[0]] == labels[w[1]] {
                return Err(PovError::DuplicateLabel(labels[w[0]]));
            }
        }
        let labels: Vec<f64> = order.iter().map(|&i| labels[i]).collect();
        let atoms: Vec<EffectElement> = order.iter().map(|&i| atoms[i].clone()).collect();

        let mut sum = atoms[0].clone();
        for atom in &atoms[1..] {
            sum = sum.raw_add(atom)?;
        }
        let defect = sum.sup_dist(&atoms[0].one_like())?;
        if defect > TOL_EQ {
            return Err(PovError::NotNormalized { defect });
        }
        Ok(Observable { labels, atoms })
    }

    /// Two-valued observable E^A with labels {0, 1}: E^A(1) = A, E^A(0) = A'.
    pub fn two_valued(a: EffectElement) -> Result<Self, PovError> {
        let complement = effects::orthosupplement(&a);
        Observable::new(vec![0.0, 1.0], vec![complement, a])
    }

    /// Trivial observable: the single atom 1 at label 0.
    pub fn trivial_like(atom: &EffectElement) -> Self {
        Observable { labels: vec![0.0], atoms: vec![atom.one_like()] }
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn atoms(&self) -> &[EffectElement] {
        &self.atoms
    }

    pub fn outcome_count(&self) -> usize {
        self.labels.len()
    }

    pub fn backend(&self) -> Backend {
        self.atoms[0].backend()
    }

    /// Hilbert dimension or tribe base-set size of the atoms.
    pub fn element_size(&self) -> usize {
        self.atoms[0].size()
    }

    /// ξ(E) for a label subset E, given by atom indices.
    pub fn measure_of(&self, indices: &[usize]) -> Result<EffectElement, PovError> {
        let mut sum = self.atoms[0].zero_like();
        for &i in indices {
            if i >= self.atoms.len() {
                return Err(PovError::InvalidInput(format!("atom index {i} out of range")));
            }
            sum = sum.raw_add(&self.atoms[i])?;
        }
        Ok(sum)
    }

    /// Max sup-distance between corresponding atoms; requires equal label
    /// lists to be meaningful, so it compares positionally.
    pub fn atom_sup_dist(&self, other: &Observable) -> Result<f64, PovError> {
        if self.outcome_count() != other.outcome_count() {
            return Err(PovError::DimMismatch(format!(
                "{} vs {} outcomes",
                self.outcome_count(),
                other.outcome_count()
            )));
        }
        let mut worst = 0.0f64;
        for (a, b) in self.atoms.iter().zip(other.atoms.iter()) {
            worst = worst.max(a.sup_dist(b)?);
        }
        Ok(worst)
    }
}

/// Pushforward f∘ξ: the atom at result label y is the sum of ξ-atoms over
/// f^{-1}(y). `f` must return finite values on every label.
pub fn pushforward(
    xi: &Observable,
    f: impl Fn(f64) -> f64,
) -> Result<Observable, PovError> {
    let mut targets: Vec<f64> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &x) in xi.labels.iter().enumerate() {
        let y = f(x);
        if !y.is_finite() {
            return Err(PovError::PartialFunction(format!("f({x}) is not finite")));
        }
        match targets.iter().position(|&t| t == y) {
            Some(k) => groups[k].push(i),
            None => {
                targets.push(y);
                groups.push(vec![i]);
            }
        }
    }
    let atoms: Vec<EffectElement> = groups
        .iter()
        .map(|g| xi.measure_of(g))
        .collect::<Result<_, _>>()?;
    Observable::new(targets, atoms)
}

/// Mean value Σ x_i · m(ξ(x_i)).
pub fn mean_value(m: &State, xi: &Observable) -> Result<f64, PovError> {
    let mut acc = 0.0;
    for (x, atom) in xi.labels.iter().zip(&xi.atoms) {
        acc += x * effects::state_eval(m, atom)?;
    }
    Ok(acc)
}

/// The probability distribution of ξ in the state m: one entry per outcome
/// label, in canonical label order.
pub fn distribution(xi: &Observable, m: &State) -> Result<Vec<f64>, PovError> {
    xi.atoms.iter().map(|atom| effects::state_eval(m, atom)).collect()
}

/// Labels whose atom is nonzero (sup-norm above TOL_EQ).
pub fn spectrum(xi: &Observable) -> Vec<f64> {
    xi.labels
        .iter()
        .zip(&xi.atoms)
        .filter(|(_, atom)| !atom.is_zero(TOL_EQ))
        .map(|(&l, _)| l)
        .collect()
}

/// True iff every atom is sharp.
pub fn is_sharp_observable(xi: &Observable) -> bool {
    xi.atoms.iter().all(effects::is_sharp)
}
