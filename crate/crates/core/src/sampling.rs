//! Seeded random generators for matrices, states, observables and kernels.
//! All functions are deterministic given the RNG state; callers seed a
//! `ChaCha8Rng` so runs are reproducible.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::effects::{EffectElement, State};
use crate::hermit::{self, CMatrix};
use crate::kernels::MarkovKernel;
use crate::observables::Observable;

fn ginibre(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random Hermitian matrix (G + G*)/2 from a complex Ginibre sample.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(dim, rng);
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    CMatrix::new_hermitian(h).expect("symmetrized sample is hermitian")
}

/// Haar-ish random unitary: the eigenvector matrix of a random Hermitian
/// sample.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let h = random_hermitian(dim, rng);
    hermit::eig_h(&h).expect("random spectrum is simple a.s.").vectors
}

/// Random full-rank density matrix G G* / tr(G G*).
pub fn random_density(dim: usize, rng: &mut impl Rng) -> State {
    let g = ginibre(dim, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    let rho = CMatrix::new_hermitian(w * Complex64::new(1.0 / tr, 0.0))
        .expect("Wishart sample is hermitian");
    State::density(rho).expect("normalized Wishart sample is a density matrix")
}

/// Random rank-one PVM: projections onto the columns of a random unitary,
/// labels 0..dim-1.
pub fn random_pvm(dim: usize, rng: &mut impl Rng) -> Observable {
    let u = random_unitary(dim, rng);
    let atoms: Vec<EffectElement> = (0..dim)
        .map(|c| {
            let col: DVector<Complex64> = u.matrix().column(c).into_owned();
            EffectElement::hilbert(hermit::rank_one(1.0, &col))
                .expect("projection is an effect")
        })
        .collect();
    let labels: Vec<f64> = (0..dim).map(|i| i as f64).collect();
    Observable::new(labels, atoms).expect("projections onto a unitary basis sum to I")
}

/// Random POVM with `outcomes` atoms: A_i = M^{-1/2} G_i G_i* M^{-1/2} with
/// M = Σ G_i G_i*. Generically none of the atoms commute.
pub fn random_povm(dim: usize, outcomes: usize, rng: &mut impl Rng) -> Observable {
    assert!(outcomes >= 1);
    let wisharts: Vec<DMatrix<Complex64>> = (0..outcomes)
        .map(|_| {
            let g = ginibre(dim, rng);
            &g * g.adjoint()
        })
        .collect();
    let mut total = DMatrix::zeros(dim, dim);
    for w in &wisharts {
        total += w;
    }
    let m = CMatrix::new_hermitian(total).expect("sum of Wisharts is hermitian");
    let m_inv_sqrt = m.spectral_map(|l| 1.0 / l.sqrt());
    let atoms: Vec<EffectElement> = wisharts
        .into_iter()
        .map(|w| {
            let a = m_inv_sqrt.matrix() * w * m_inv_sqrt.matrix();
            EffectElement::hilbert(
                CMatrix::new_hermitian(a).expect("conjugated Wishart is hermitian"),
            )
            .expect("normalized atom is an effect")
        })
        .collect();
    let labels: Vec<f64> = (0..outcomes).map(|i| i as f64).collect();
    Observable::new(labels, atoms).expect("atoms sum to I by construction")
}

/// Random probability vector (normalized uniform weights).
pub fn random_probability(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut p: Vec<f64> = (0..n).map(|_| rng.gen_range(1e-3..1.0)).collect();
    let total: f64 = p.iter().sum();
    for v in &mut p {
        *v /= total;
    }
    p
}

/// Random row-stochastic kernel with strictly positive entries.
pub fn random_kernel(source: usize, target: usize, rng: &mut impl Rng) -> MarkovKernel {
    let rows: Vec<Vec<f64>> = (0..source).map(|_| random_probability(target, rng)).collect();
    MarkovKernel::new(rows).expect("normalized rows are stochastic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reproducible() {
        let a = random_density(3, &mut ChaCha8Rng::seed_from_u64(5));
        let b = random_density(3, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    #[test]
    fn pvm_is_sharp() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pvm = random_pvm(3, &mut rng);
        assert!(observables::is_sharp_observable(&pvm));
    }

    #[test]
    fn povm_normalized_and_noncommuting() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let povm = random_povm(3, 4, &mut rng);
        assert_eq!(povm.outcome_count(), 4);
        let EffectElement::Hilbert(a) = &povm.atoms()[0] else { unreachable!() };
        let EffectElement::Hilbert(b) = &povm.atoms()[1] else { unreachable!() };
        assert!(!hermit::commutes(a, b).unwrap());
    }

    #[test]
    fn density_faithful() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        assert!(random_density(4, &mut rng).is_faithful());
    }

    #[test]
    fn kernel_rows_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let k = random_kernel(3, 5, &mut rng);
        for row in k.rows() {
            let s: f64 = row.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            assert!(row.iter().all(|&v| v > 0.0));
        }
    }
}
