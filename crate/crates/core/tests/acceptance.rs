//! Acceptance gate: nine numbered criteria, one pass/fail line each.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use povcal::divergences::{self, ExtendedReal};
use povcal::effects::{self, EffectElement, Partial, State};
use povcal::hermit::{self, CMatrix};
use povcal::kernels::{self, MarkovKernel};
use povcal::observables::Observable;
use povcal::order;
use povcal::sampling;
use povcal::Tolerances;

fn report(criterion: usize, name: &str, pass: bool) {
    println!("criterion {criterion} ({name}): {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} ({name}) failed");
}

/// Random Hilbert effect: a random Hermitian matrix rescaled so its spectrum
/// fills [lo, hi].
fn random_effect_in(dim: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> EffectElement {
    let h = sampling::random_hermitian(dim, rng);
    let (a, b) = hermit::spectral_bounds(&h).unwrap();
    let scaled = if b - a > 1e-12 {
        h.spectral_map(|x| lo + (x - a) / (b - a) * (hi - lo))
    } else {
        CMatrix::identity(dim).scale(0.5 * (lo + hi))
    };
    EffectElement::hilbert(scaled).unwrap()
}

fn random_tribe_effect(n: usize, rng: &mut impl Rng) -> EffectElement {
    EffectElement::tribe((0..n).map(|_| rng.gen_range(0.0..1.0)).collect()).unwrap()
}

fn defined(p: Partial) -> Option<EffectElement> {
    match p {
        Partial::Defined(e) => Some(e),
        Partial::Undefined => None,
    }
}

#[test]
fn criterion_1_effect_algebra_axioms() {
    const TOL: f64 = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut ok = true;

    for backend in 0..2 {
        for _ in 0..1000 {
            let (a, b, c, m) = if backend == 0 {
                let d = rng.gen_range(2..=4);
                (
                    random_effect_in(d, 0.0, 1.0, &mut rng),
                    random_effect_in(d, 0.0, 1.0, &mut rng),
                    random_effect_in(d, 0.0, 1.0, &mut rng),
                    sampling::random_density(d, &mut rng),
                )
            } else {
                let n = rng.gen_range(1..=6);
                (
                    random_tribe_effect(n, &mut rng),
                    random_tribe_effect(n, &mut rng),
                    random_tribe_effect(n, &mut rng),
                    State::probability(sampling::random_probability(n, &mut rng)).unwrap(),
                )
            };

            // (EAi) commutativity: a + b and b + a agree in definedness and value
            let ab = effects::oplus(&a, &b).unwrap();
            let ba = effects::oplus(&b, &a).unwrap();
            match (&ab, &ba) {
                (Partial::Defined(x), Partial::Defined(y)) => {
                    ok &= x.sup_dist(y).unwrap() <= TOL;
                }
                (Partial::Undefined, Partial::Undefined) => {}
                _ => ok = false,
            }

            // (EAii) associativity on thirds, where all sums are defined
            let a3 = a.clone();
            let (a3, b3, c3) = (scale_third(&a3), scale_third(&b), scale_third(&c));
            let left = defined(effects::oplus(&defined(effects::oplus(&a3, &b3).unwrap()).unwrap(), &c3).unwrap()).unwrap();
            let right = defined(effects::oplus(&a3, &defined(effects::oplus(&b3, &c3).unwrap()).unwrap()).unwrap()).unwrap();
            ok &= left.sup_dist(&right).unwrap() <= TOL;

            // (EAiii) orthosupplement exists and is unique
            let comp = effects::orthosupplement(&a);
            let total = defined(effects::oplus(&a, &comp).unwrap()).unwrap();
            ok &= total.sup_dist(&a.one_like()).unwrap() <= TOL;
            // any c with a + c = 1 equals the orthosupplement
            let recovered = effects::ominus(&a.one_like(), &a).unwrap();
            ok &= recovered.sup_dist(&comp).unwrap() <= TOL;

            // (EAiv) zero-one law: a + 1 defined forces a = 0
            if let Partial::Defined(_) = effects::oplus(&a, &a.one_like()).unwrap() {
                ok &= a.is_zero(1e-8);
            }

            // state additivity on the defined sum
            if let Partial::Defined(s) = &ab {
                let lhs = effects::state_eval(&m, s).unwrap();
                let rhs = effects::state_eval(&m, &a).unwrap()
                    + effects::state_eval(&m, &b).unwrap();
                ok &= (lhs - rhs).abs() <= TOL;
            }
        }
    }
    report(1, "effect-algebra axioms", ok);
}

fn scale_third(a: &EffectElement) -> EffectElement {
    match a {
        EffectElement::Hilbert(m) => EffectElement::hilbert(m.scale(1.0 / 3.0)).unwrap(),
        EffectElement::Tribe(v) => {
            EffectElement::tribe(v.iter().map(|x| x / 3.0).collect()).unwrap()
        }
    }
}

#[test]
fn criterion_2_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut ok = true;
    for name in divergences::BUILTIN_NAMES {
        let gen = divergences::builtin(name).unwrap();
        for _ in 0..500 {
            let k = rng.gen_range(2..=6);
            let l = rng.gen_range(2..=6);
            let p = sampling::random_probability(k, &mut rng);
            let q = sampling::random_probability(k, &mut rng);
            let nu = sampling::random_kernel(k, l, &mut rng);
            match divergences::monotonicity_gap(&gen, &p, &q, &nu).unwrap() {
                ExtendedReal::Finite(gap) => ok &= gap >= -1e-9,
                ExtendedReal::Infinity => {}
            }
        }
    }
    report(2, "data-processing monotonicity", ok);
}

/// A split-then-label kernel: each source outcome spreads over its own
/// disjoint block of targets, so a deterministic merge recovers the source.
fn split_kernel(k: usize, per_block: usize, rng: &mut impl Rng) -> MarkovKernel {
    let l = k * per_block;
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row = vec![0.0; l];
            let weights = sampling::random_probability(per_block, rng);
            for (j, w) in weights.into_iter().enumerate() {
                row[i * per_block + j] = w;
            }
            row
        })
        .collect();
    MarkovKernel::new(rows).unwrap()
}

fn permutation_kernel(k: usize, rng: &mut impl Rng) -> MarkovKernel {
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    kernels::deterministic_kernel(k, k, |i| Some(perm[i])).unwrap()
}

#[test]
fn criterion_3_sufficiency_cross_validation() {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut ok = true;

    // random kernels: the two criteria must agree
    for _ in 0..200 {
        let k = rng.gen_range(2..=5);
        let l = rng.gen_range(2..=5);
        let p = sampling::random_probability(k, &mut rng);
        let q = sampling::random_probability(k, &mut rng);
        let nu = sampling::random_kernel(k, l, &mut rng);
        let (pairwise, _) = order::pairwise_sufficient(&nu, &p, &q).unwrap();
        let (blackwell, _) = order::blackwell_sufficient(&nu, &[p, q], &tols).unwrap();
        ok &= pairwise == blackwell;
    }

    // constructed sufficient kernels: both true, Hellinger gap <= 1e-10
    for trial in 0..50 {
        let k = rng.gen_range(2..=5);
        let nu = if trial % 2 == 0 {
            permutation_kernel(k, &mut rng)
        } else {
            split_kernel(k, rng.gen_range(2..=3), &mut rng)
        };
        let p = sampling::random_probability(k, &mut rng);
        let q = sampling::random_probability(k, &mut rng);
        let (pairwise, ev) = order::pairwise_sufficient(&nu, &p, &q).unwrap();
        let (blackwell, recovery) =
            order::blackwell_sufficient(&nu, &[p.clone(), q.clone()], &tols).unwrap();
        ok &= pairwise && blackwell && recovery.is_some();
        ok &= (ev.before - ev.after).abs() <= 1e-10;
    }
    report(3, "sufficiency cross-validation", ok);
}

#[test]
fn criterion_4_mother_round_trip() {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut ok = true;

    for _ in 0..100 {
        let d = rng.gen_range(2..=4);
        let l = rng.gen_range(2..=4);
        let pvm = sampling::random_pvm(d, &mut rng);
        let nu = sampling::random_kernel(d, l, &mut rng);
        let eta = kernels::smear(&pvm, &nu).unwrap();
        let (mother, kernel) = order::pvm_mother(&eta, &tols).unwrap();
        let resmeared = kernels::smear_with_labels(&mother, &kernel, eta.labels()).unwrap();
        ok &= resmeared.atom_sup_dist(&eta).unwrap() <= 1e-8;
    }

    for _ in 0..20 {
        let d = rng.gen_range(2..=4);
        let povm = sampling::random_povm(d, d + 1, &mut rng);
        ok &= matches!(
            order::pvm_mother(&povm, &tols),
            Err(povcal::PovError::NotCommuting { .. })
        );
    }
    report(4, "sharp mother round trip", ok);
}

#[test]
fn criterion_5_clean_battery() {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut ok = true;

    // 25 rank-one atomic instances
    for _ in 0..25 {
        let d = rng.gen_range(2..=3);
        let pvm = sampling::random_pvm(d, &mut rng);
        let instance = relabel_randomly(&pvm, &mut rng);
        let evidence = order::is_clean_with_evidence(&instance, &tols).unwrap();
        ok &= evidence.clean;
        ok &= evidence.refinement_below_eta.holds && evidence.eta_below_refinement.holds;
    }

    // 25 instances with a rank >= 2 atom: strictly positive smearing of a
    // d=3 PVM onto 2 outcomes
    for _ in 0..25 {
        let pvm = sampling::random_pvm(3, &mut rng);
        let nu = sampling::random_kernel(3, 2, &mut rng);
        let eta = kernels::smear(&pvm, &nu).unwrap();
        let evidence = order::is_clean_with_evidence(&eta, &tols).unwrap();
        ok &= !evidence.clean;
        ok &= evidence.refinement_below_eta.holds;
        ok &= !evidence.eta_below_refinement.holds;
    }
    report(5, "clean observables", ok);
}

fn relabel_randomly(xi: &Observable, rng: &mut impl Rng) -> Observable {
    let shift: f64 = rng.gen_range(-3.0..3.0);
    Observable::new(
        xi.labels().iter().map(|&l| l + shift).collect(),
        xi.atoms().to_vec(),
    )
    .unwrap()
}

fn random_projection(dim: usize, rank: usize, rng: &mut impl Rng) -> EffectElement {
    let u = sampling::random_unitary(dim, rng);
    let mut p = CMatrix::zeros(dim);
    for c in 0..rank {
        let col: DVector<Complex64> = u.matrix().column(c).into_owned();
        p = p.add(&hermit::rank_one(1.0, &col));
    }
    EffectElement::hilbert(p).unwrap()
}

#[test]
fn criterion_6_two_valued_observables() {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut ok = true;

    // agreement with the general preorder LP, mixing generic and
    // constructed-comparable pairs
    for trial in 0..200 {
        let d = rng.gen_range(2..=3);
        let b = random_effect_in(d, 0.0, 1.0, &mut rng);
        let a = if trial % 2 == 0 {
            random_effect_in(d, 0.0, 1.0, &mut rng)
        } else {
            let t: f64 = rng.gen_range(0.05..0.95);
            let s: f64 = rng.gen_range(0.05..0.95);
            let EffectElement::Hilbert(bm) = &b else { unreachable!() };
            let comp = bm.scale(-1.0).add(&CMatrix::identity(d));
            EffectElement::hilbert(bm.scale(t).add(&comp.scale(s))).unwrap()
        };
        let closed_form = order::two_valued_leq(&b, &a, &tols).unwrap().is_some();
        let lp = order::preorder_leq(
            &Observable::two_valued(b.clone()).unwrap(),
            &Observable::two_valued(a.clone()).unwrap(),
            &tols,
        )
        .unwrap()
        .holds;
        ok &= closed_form == lp;
        if let Some((t, s)) = order::two_valued_leq(&b, &a, &tols).unwrap() {
            // the witness pair really reproduces A
            let EffectElement::Hilbert(bm) = &b else { unreachable!() };
            let EffectElement::Hilbert(am) = &a else { unreachable!() };
            let comp = bm.scale(-1.0).add(&CMatrix::identity(d));
            ok &= bm.scale(t).add(&comp.scale(s)).sup_dist(am) <= 1e-7;
        }
    }

    // minimality: nontrivial projections yes, strict contractions no
    for _ in 0..20 {
        let d = rng.gen_range(2..=4);
        let rank = rng.gen_range(1..d);
        let p = random_projection(d, rank, &mut rng);
        ok &= order::two_valued_is_minimal(&p, &tols).unwrap();
        let contraction = random_effect_in(d, 0.05, 0.95, &mut rng);
        ok &= !order::two_valued_is_minimal(&contraction, &tols).unwrap();
    }

    // A = I/2 is dominated by every E^B with (t, s) = (1/2, 1/2)
    for _ in 0..20 {
        let d = rng.gen_range(2..=3);
        let b = random_effect_in(d, 0.0, 1.0, &mut rng);
        let half = EffectElement::hilbert(CMatrix::identity(d).scale(0.5)).unwrap();
        let (t, s) = order::two_valued_leq(&b, &half, &tols).unwrap().unwrap();
        ok &= (t - 0.5).abs() <= 1e-7 && (s - 0.5).abs() <= 1e-7;
    }
    report(6, "two-valued observables", ok);
}

#[test]
fn criterion_7_battery_agreement() {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut ok = true;

    for scenario in 0..50 {
        let d = rng.gen_range(2..=3);
        let xi = sampling::random_povm(d, 3, &mut rng);
        let equivalent_case = scenario % 2 == 0;
        let nu = if equivalent_case {
            split_kernel(3, 2, &mut rng)
        } else {
            kernels::deterministic_kernel(3, 2, |i| Some(i.min(1))).unwrap()
        };
        let eta = kernels::smear(&xi, &nu).unwrap();
        let m0 = State::maximally_mixed(d);
        let seed = 9000 + scenario as u64;
        let report_out =
            order::equivalence_battery(&xi, &eta, &nu, &m0, 6, seed, &tols).unwrap();
        ok &= report_out.agree;
        ok &= report_out.fuzzy_equivalent == equivalent_case;
        if report_out.fuzzy_equivalent {
            ok &= report_out.hellinger_max_gap <= 1e-8;
            ok &= report_out.pairwise && report_out.vs_mixture;
        } else {
            ok &= report_out.hellinger_max_gap > 1e-6;
        }
    }
    report(7, "sufficiency battery agreement", ok);
}

#[test]
fn criterion_8_preorder_transitivity() {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut ok = true;

    for _ in 0..100 {
        let d = rng.gen_range(2..=3);
        let k = rng.gen_range(2..=4);
        let xi = sampling::random_povm(d, k, &mut rng);
        let nu1 = sampling::random_kernel(k, rng.gen_range(2..=4), &mut rng);
        let nu2 = sampling::random_kernel(nu1.target_size(), rng.gen_range(2..=4), &mut rng);
        let eta = kernels::smear(&xi, &nu1).unwrap();
        let zeta = kernels::smear(&eta, &nu2).unwrap();
        let composed = kernels::compose(&nu1, &nu2).unwrap();
        let direct = kernels::smear_with_labels(&xi, &composed, zeta.labels()).unwrap();
        ok &= direct.atom_sup_dist(&zeta).unwrap() <= 1e-8;
        let verdict = order::preorder_leq(&xi, &zeta, &tols).unwrap();
        ok &= verdict.holds && verdict.residual <= 1e-7;
    }
    report(8, "preorder transitivity", ok);
}

#[test]
fn criterion_9_tribe_integral_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut ok = true;

    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let p = sampling::random_probability(n, &mut rng);
        let effect = EffectElement::tribe(f.clone()).unwrap();
        let state = State::probability(p.clone()).unwrap();
        let got = effects::state_eval(&state, &effect).unwrap();
        // bitwise-identical to the index-order sum
        let mut want = 0.0f64;
        for (w, v) in p.iter().zip(&f) {
            want += w * v;
        }
        ok &= got == want;
    }
    report(9, "finite tribe integral", ok);
}
