//! Effect-algebra elements and states, with two concrete backends:
//! Hilbert-space effects (0 <= A <= I on C^d) and finite tribes
//! (vectors in [0,1]^n, which for n = 1 double as the [0,1] algebra).

use crate::error::PovError;
use crate::hermit::{self, CMatrix};
use crate::tol::{TOL_EQ, TOL_PSD, TOL_TRACE};

/// Which concrete effect algebra an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Hilbert,
    Tribe,
}

/// An element of an effect algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum EffectElement {
    /// Hermitian matrix with 0 <= A <= I.
    Hilbert(CMatrix),
    /// Pointwise values in [0,1] over a finite base set.
    Tribe(Vec<f64>),
}

/// Outcome of a partial operation: defined or not, as a domain value.
#[derive(Debug, Clone, PartialEq)]
pub enum Partial {
    Defined(EffectElement),
    Undefined,
}

impl EffectElement {
    /// Hilbert-backend effect; rejects matrices outside [0, I] by more than
    /// TOL_PSD.
    pub fn hilbert(a: CMatrix) -> Result<Self, PovError> {
        let (lo, hi) = hermit::spectral_bounds(&a)?;
        if lo < -TOL_PSD || hi > 1.0 + TOL_PSD {
            return Err(PovError::InvalidInput(format!(
                "spectrum [{lo}, {hi}] escapes [0, 1]"
            )));
        }
        Ok(EffectElement::Hilbert(a))
    }

    /// Tribe-backend effect; coordinates within TOL_PSD of [0,1] are clamped,
    /// worse violations are rejected.
    pub fn tribe(values: Vec<f64>) -> Result<Self, PovError> {
        if values.is_empty() {
            return Err(PovError::InvalidInput("empty base set".into()));
        }
        let mut clamped = Vec::with_capacity(values.len());
        for &v in &values {
            if !v.is_finite() || v < -TOL_PSD || v > 1.0 + TOL_PSD {
                return Err(PovError::InvalidInput(format!("coordinate {v} escapes [0, 1]")));
            }
            clamped.push(v.clamp(0.0, 1.0));
        }
        Ok(EffectElement::Tribe(clamped))
    }

    /// The 0-element of the algebra containing `self`.
    pub fn zero_like(&self) -> EffectElement {
        match self {
            EffectElement::Hilbert(a) => EffectElement::Hilbert(CMatrix::zeros(a.dim())),
            EffectElement::Tribe(v) => EffectElement::Tribe(vec![0.0; v.len()]),
        }
    }

    /// The 1-element of the algebra containing `self`.
    pub fn one_like(&self) -> EffectElement {
        match self {
            EffectElement::Hilbert(a) => EffectElement::Hilbert(CMatrix::identity(a.dim())),
            EffectElement::Tribe(v) => EffectElement::Tribe(vec![1.0; v.len()]),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            EffectElement::Hilbert(_) => Backend::Hilbert,
            EffectElement::Tribe(_) => Backend::Tribe,
        }
    }

    /// Hilbert dimension or tribe base-set size.
    pub fn size(&self) -> usize {
        match self {
            EffectElement::Hilbert(a) => a.dim(),
            EffectElement::Tribe(v) => v.len(),
        }
    }

    /// Sup-norm distance; errors on backend or shape mismatch.
    pub fn sup_dist(&self, other: &EffectElement) -> Result<f64, PovError> {
        match (self, other) {
            (EffectElement::Hilbert(a), EffectElement::Hilbert(b)) => {
                check_dims(a.dim(), b.dim())?;
                Ok(a.sup_dist(b))
            }
            (EffectElement::Tribe(a), EffectElement::Tribe(b)) => {
                check_dims(a.len(), b.len())?;
                Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
            }
            _ => Err(PovError::BackendMismatch("hilbert vs tribe".into())),
        }
    }

    /// True iff the element is the 0-element within `tol` (sup-norm).
    pub fn is_zero(&self, tol: f64) -> bool {
        match self {
            EffectElement::Hilbert(a) => a.sup_norm() <= tol,
            EffectElement::Tribe(v) => v.iter().all(|x| x.abs() <= tol),
        }
    }

    /// Raw sum without the <= 1 check; used by observables where the total is
    /// validated against the 1-element afterwards.
    pub(crate) fn raw_add(&self, other: &EffectElement) -> Result<EffectElement, PovError> {
        match (self, other) {
            (EffectElement::Hilbert(a), EffectElement::Hilbert(b)) => {
                check_dims(a.dim(), b.dim())?;
                Ok(EffectElement::Hilbert(a.add(b)))
            }
            (EffectElement::Tribe(a), EffectElement::Tribe(b)) => {
                check_dims(a.len(), b.len())?;
                Ok(EffectElement::Tribe(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => Err(PovError::BackendMismatch("hilbert vs tribe".into())),
        }
    }

    pub(crate) fn raw_scale(&self, factor: f64) -> EffectElement {
        match self {
            EffectElement::Hilbert(a) => EffectElement::Hilbert(a.scale(factor)),
            EffectElement::Tribe(v) => {
                EffectElement::Tribe(v.iter().map(|x| x * factor).collect())
            }
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<(), PovError> {
    if a != b {
        return Err(PovError::DimMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

/// Partial sum: a + b when the sum stays below the 1-element, otherwise
/// `Undefined` (a domain outcome, not an error).
pub fn oplus(a: &EffectElement, b: &EffectElement) -> Result<Partial, PovError> {
    let sum = a.raw_add(b)?;
    let defined = match &sum {
        EffectElement::Hilbert(s) => {
            hermit::spectral_bounds(s)?.1 <= 1.0 + TOL_PSD
        }
        EffectElement::Tribe(v) => v.iter().all(|&x| x <= 1.0 + TOL_PSD),
    };
    if defined {
        Ok(Partial::Defined(sum))
    } else {
        Ok(Partial::Undefined)
    }
}

/// The unique b with a ⊕ b = 1, i.e. 1 - a (same arithmetic on both sides).
pub fn orthosupplement(a: &EffectElement) -> EffectElement {
    match a {
        EffectElement::Hilbert(m) => {
            EffectElement::Hilbert(CMatrix::identity(m.dim()).sub(m))
        }
        EffectElement::Tribe(v) => EffectElement::Tribe(v.iter().map(|x| 1.0 - x).collect()),
    }
}

/// b - a, defined only when a <= b.
pub fn ominus(b: &EffectElement, a: &EffectElement) -> Result<EffectElement, PovError> {
    if !partial_order_leq(a, b)? {
        return Err(PovError::NotComparable("ominus requires a <= b".into()));
    }
    match (b, a) {
        (EffectElement::Hilbert(b), EffectElement::Hilbert(a)) => {
            Ok(EffectElement::Hilbert(b.sub(a)))
        }
        (EffectElement::Tribe(b), EffectElement::Tribe(a)) => {
            Ok(EffectElement::Tribe(b.iter().zip(a).map(|(x, y)| x - y).collect()))
        }
        _ => unreachable!("backend checked by partial_order_leq"),
    }
}

/// Effect-algebra order: Loewner order on the Hilbert backend, coordinatewise
/// order (with TOL_PSD slack) on tribes.
pub fn partial_order_leq(a: &EffectElement, b: &EffectElement) -> Result<bool, PovError> {
    match (a, b) {
        (EffectElement::Hilbert(a), EffectElement::Hilbert(b)) => hermit::loewner_leq(a, b),
        (EffectElement::Tribe(a), EffectElement::Tribe(b)) => {
            check_dims(a.len(), b.len())?;
            Ok(a.iter().zip(b).all(|(x, y)| *x <= *y + TOL_PSD))
        }
        _ => Err(PovError::BackendMismatch("hilbert vs tribe".into())),
    }
}

/// Sharpness: A = A^2 on the Hilbert backend, characteristic functions on
/// tribes.
pub fn is_sharp(a: &EffectElement) -> bool {
    match a {
        EffectElement::Hilbert(m) => {
            let sq = CMatrix::new_hermitian(m.matrix() * m.matrix())
                .expect("square of hermitian is hermitian");
            sq.sup_dist(m) <= TOL_EQ
        }
        EffectElement::Tribe(v) => {
            v.iter().all(|&x| x.abs() <= TOL_EQ || (x - 1.0).abs() <= TOL_EQ)
        }
    }
}

/// Isotropic index: greatest n with n·a <= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsotropicIndex {
    Finite(u64),
    Infinite,
}

/// Greatest n such that the n-fold sum of `a` stays in the algebra;
/// infinite exactly for a = 0.
pub fn isotropic_index(a: &EffectElement) -> IsotropicIndex {
    let norm = match a {
        EffectElement::Hilbert(m) => hermit::spectral_bounds(m)
            .expect("hermitian by construction")
            .1,
        EffectElement::Tribe(v) => v.iter().cloned().fold(0.0, f64::max),
    };
    if norm <= TOL_PSD {
        return IsotropicIndex::Infinite;
    }
    // boundary handling: n * norm <= 1 + TOL_PSD counts
    let n = ((1.0 + TOL_PSD) / norm).floor() as u64;
    IsotropicIndex::Finite(n.max(1))
}

/// A state: density matrix on the Hilbert backend, probability vector on the
/// tribe base set.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Hilbert(CMatrix),
    Tribe(Vec<f64>),
}

impl State {
    /// Density matrix state: Hermitian, PSD, trace 1 within TOL_TRACE.
    pub fn density(rho: CMatrix) -> Result<Self, PovError> {
        if !hermit::is_psd(&rho)? {
            return Err(PovError::InvalidInput("density matrix not PSD".into()));
        }
        let tr = hermit::trace(&rho);
        if (tr - 1.0).abs() > TOL_TRACE {
            return Err(PovError::InvalidInput(format!("trace {tr} != 1")));
        }
        Ok(State::Hilbert(rho))
    }

    /// Probability vector on a finite base set.
    pub fn probability(p: Vec<f64>) -> Result<Self, PovError> {
        if p.is_empty() {
            return Err(PovError::InvalidInput("empty base set".into()));
        }
        if p.iter().any(|&x| !x.is_finite() || x < -TOL_PSD) {
            return Err(PovError::InvalidInput("negative weight".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > TOL_TRACE {
            return Err(PovError::InvalidInput(format!("total mass {total} != 1")));
        }
        Ok(State::Tribe(p.iter().map(|&x| x.max(0.0)).collect()))
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        State::Hilbert(CMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn backend(&self) -> Backend {
        match self {
            State::Hilbert(_) => Backend::Hilbert,
            State::Tribe(_) => Backend::Tribe,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            State::Hilbert(rho) => rho.dim(),
            State::Tribe(p) => p.len(),
        }
    }

    /// Full support / full rank: min eigenvalue (or weight) > 1e-9.
    pub fn is_faithful(&self) -> bool {
        self.min_weight() > 1e-9
    }

    /// Min eigenvalue (Hilbert) or min weight (tribe).
    pub fn min_weight(&self) -> f64 {
        match self {
            State::Hilbert(rho) => {
                hermit::spectral_bounds(rho).expect("hermitian by construction").0
            }
            State::Tribe(p) => p.iter().cloned().fold(f64::INFINITY, f64::min),
        }
    }
}

/// Evaluate a state on an effect: trace(ρA).re on the Hilbert backend, the
/// finite Butnariu-Klement integral Σ_x f(x)P(x) on tribes.
///
/// The tribe sum runs in base-set index order, so it is bitwise deterministic.
pub fn state_eval(m: &State, a: &EffectElement) -> Result<f64, PovError> {
    match (m, a) {
        (State::Hilbert(rho), EffectElement::Hilbert(a)) => {
            check_dims(rho.dim(), a.dim())?;
            Ok(rho.trace_product(a).clamp(0.0, 1.0))
        }
        (State::Tribe(p), EffectElement::Tribe(f)) => {
            check_dims(p.len(), f.len())?;
            let mut acc = 0.0;
            for (w, v) in p.iter().zip(f) {
                acc += w * v;
            }
            Ok(acc)
        }
        _ => Err(PovError::BackendMismatch("state/effect backends differ".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[f64]) -> EffectElement {
        EffectElement::tribe(v.to_vec()).unwrap()
    }

    #[test]
    fn oplus_tribe_scalar() {
        // [0,1] algebra as a 1-point tribe
        match oplus(&t(&[0.3]), &t(&[0.4])).unwrap() {
            Partial::Defined(EffectElement::Tribe(v)) => assert!((v[0] - 0.7).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(oplus(&t(&[0.7]), &t(&[0.5])).unwrap(), Partial::Undefined);
    }

    #[test]
    fn oplus_hilbert_diag() {
        let a = EffectElement::hilbert(CMatrix::from_diagonal(&[0.5, 0.1])).unwrap();
        let b = EffectElement::hilbert(CMatrix::from_diagonal(&[0.5, 0.2])).unwrap();
        match oplus(&a, &b).unwrap() {
            Partial::Defined(s) => {
                let want =
                    EffectElement::hilbert(CMatrix::from_diagonal(&[1.0, 0.3])).unwrap();
                assert!(s.sup_dist(&want).unwrap() < 1e-12);
            }
            Partial::Undefined => panic!("sum should be defined"),
        }
    }

    #[test]
    fn orthosupplement_examples() {
        let zero = t(&[0.0, 0.0]);
        assert_eq!(orthosupplement(&zero), t(&[1.0, 1.0]));
        let a = EffectElement::hilbert(CMatrix::from_diagonal(&[0.9, 0.4])).unwrap();
        let want = EffectElement::hilbert(CMatrix::from_diagonal(&[0.1, 0.6])).unwrap();
        assert!(orthosupplement(&a).sup_dist(&want).unwrap() < 1e-12);
    }

    #[test]
    fn ominus_example() {
        let b = EffectElement::hilbert(CMatrix::from_diagonal(&[1.0, 0.3])).unwrap();
        let a = EffectElement::hilbert(CMatrix::from_diagonal(&[0.5, 0.1])).unwrap();
        let want = EffectElement::hilbert(CMatrix::from_diagonal(&[0.5, 0.2])).unwrap();
        assert!(ominus(&b, &a).unwrap().sup_dist(&want).unwrap() < 1e-12);
        assert!(matches!(ominus(&a, &b), Err(PovError::NotComparable(_))));
    }

    #[test]
    fn order_examples() {
        let a = t(&[0.2, 0.9]);
        let b = t(&[0.3, 0.8]);
        assert!(!partial_order_leq(&a, &b).unwrap());
        assert!(partial_order_leq(&a, &a).unwrap());
        assert!(partial_order_leq(&a.zero_like(), &a).unwrap());
    }

    #[test]
    fn sharpness_examples() {
        let half = CMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let e = EffectElement::hilbert(half).unwrap();
        assert!(is_sharp(&e)); // idempotent projection
        assert!(is_sharp(&e.zero_like()));
        assert!(is_sharp(&e.one_like()));
        assert!(!is_sharp(&t(&[0.5])));
        let soft = EffectElement::hilbert(CMatrix::from_diagonal(&[0.8, 0.3])).unwrap();
        assert!(!is_sharp(&soft));
    }

    #[test]
    fn isotropic_examples() {
        assert_eq!(isotropic_index(&t(&[0.0])), IsotropicIndex::Infinite);
        assert_eq!(isotropic_index(&t(&[1.0])), IsotropicIndex::Finite(1));
        assert_eq!(isotropic_index(&t(&[0.3])), IsotropicIndex::Finite(3));
        let half = EffectElement::hilbert(CMatrix::from_diagonal(&[0.5, 0.5])).unwrap();
        assert_eq!(isotropic_index(&half), IsotropicIndex::Finite(2));
    }

    #[test]
    fn state_eval_examples() {
        let rho = State::density(CMatrix::from_diagonal(&[0.5, 0.5])).unwrap();
        let a = EffectElement::hilbert(CMatrix::from_diagonal(&[0.8, 0.2])).unwrap();
        assert!((state_eval(&rho, &a).unwrap() - 0.5).abs() < 1e-12);
        assert!((state_eval(&rho, &a.one_like()).unwrap() - 1.0).abs() < 1e-12);
        assert!(state_eval(&rho, &a.zero_like()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn faithful_flags() {
        assert!(State::maximally_mixed(3).is_faithful());
        let pure = State::density(CMatrix::from_diagonal(&[1.0, 0.0])).unwrap();
        assert!(!pure.is_faithful());
        assert!(State::probability(vec![0.4, 0.6]).unwrap().is_faithful());
        assert!(!State::probability(vec![1.0, 0.0]).unwrap().is_faithful());
    }
}
