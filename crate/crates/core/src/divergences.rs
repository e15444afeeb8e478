//! f-divergences over finite probability vectors with full
//! Lebesgue-decomposition semantics: the singular part is charged at the
//! generator's slope at infinity, and divergences may be infinite.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::PovError;
use crate::kernels::{self, MarkovKernel};

/// A finite real or +∞, with the measure-theoretic convention 0·∞ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(*x),
            ExtendedReal::Infinity => None,
        }
    }

    /// weight · value with 0·∞ = 0.
    fn weighted(weight: f64, value: ExtendedReal) -> ExtendedReal {
        if weight == 0.0 {
            return ExtendedReal::Finite(0.0);
        }
        match value {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(weight * x),
            ExtendedReal::Infinity => ExtendedReal::Infinity,
        }
    }

    fn add(self, other: ExtendedReal) -> ExtendedReal {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::Infinity,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinity => write!(f, "inf"),
        }
    }
}

/// A convex function on (0, ∞) together with its boundary behavior, driving
/// the f-divergence engine.
#[derive(Clone)]
pub struct ConvexGenerator {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    f_at_0: ExtendedReal,
    f_inf: ExtendedReal,
    strictly_convex: bool,
}

impl fmt::Debug for ConvexGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexGenerator")
            .field("name", &self.name)
            .field("f_at_0", &self.f_at_0)
            .field("f_inf", &self.f_inf)
            .field("strictly_convex", &self.strictly_convex)
            .finish()
    }
}

impl ConvexGenerator {
    /// Construct a generator, checking midpoint convexity on 1000 seeded
    /// sample points and that `f_at_1` matches f(1).
    pub fn new(
        name: &str,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f_at_0: ExtendedReal,
        f_inf: ExtendedReal,
        strictly_convex: bool,
        f_at_1: f64,
    ) -> Result<Self, PovError> {
        if (f(1.0) - f_at_1).abs() > 1e-12 {
            return Err(PovError::InvalidInput(format!(
                "f(1) = {} but f_at_1 = {}",
                f(1.0),
                f_at_1
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6f6e7665);
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(1e-3..10.0);
            let y: f64 = rng.gen_range(1e-3..10.0);
            let mid = 0.5 * (x + y);
            if f(mid) > 0.5 * (f(x) + f(y)) + 1e-9 {
                return Err(PovError::InvalidInput(format!(
                    "midpoint convexity fails at ({x}, {y})"
                )));
            }
        }
        Ok(ConvexGenerator {
            name: name.to_string(),
            f: Arc::new(f),
            f_at_0,
            f_inf,
            strictly_convex,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn strictly_convex(&self) -> bool {
        self.strictly_convex
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

/// Built-in generator names accepted by the CLI.
pub const BUILTIN_NAMES: [&str; 3] = ["tv", "kl", "hellinger"];

/// Built-in generators: total variation `tv` (f = |u-1|), relative entropy
/// `kl` (f = -log u), and Hellinger `hellinger` (f = 1 - sqrt u).
pub fn builtin(name: &str) -> Result<ConvexGenerator, PovError> {
    match name {
        "tv" => ConvexGenerator::new(
            "tv",
            |u| (u - 1.0).abs(),
            ExtendedReal::Finite(1.0),
            ExtendedReal::Finite(1.0),
            false,
            0.0,
        ),
        "kl" => ConvexGenerator::new(
            "kl",
            |u| -u.ln(),
            ExtendedReal::Infinity,
            ExtendedReal::Finite(0.0),
            true,
            0.0,
        ),
        "hellinger" => ConvexGenerator::new(
            "hellinger",
            |u| 1.0 - u.sqrt(),
            ExtendedReal::Finite(1.0),
            ExtendedReal::Finite(0.0),
            true,
            0.0,
        ),
        other => Err(PovError::UnknownGenerator(other.to_string())),
    }
}

/// D_f(p, q) = Σ_{q_i>0} q_i f(p_i/q_i) + f_∞ · Σ_{q_i=0} p_i, with the
/// conventions q_i·f(0) for p_i = 0 < q_i and 0·∞ = 0.
pub fn f_divergence(
    gen: &ConvexGenerator,
    p: &[f64],
    q: &[f64],
) -> Result<ExtendedReal, PovError> {
    if p.len() != q.len() {
        return Err(PovError::DimMismatch(format!("{} vs {}", p.len(), q.len())));
    }
    let mut acc = ExtendedReal::Finite(0.0);
    let mut singular_mass = 0.0;
    for (&pi, &qi) in p.iter().zip(q.iter()) {
        if qi > 0.0 {
            let term = if pi > 0.0 {
                ExtendedReal::Finite(qi * gen.eval(pi / qi))
            } else {
                ExtendedReal::weighted(qi, gen.f_at_0)
            };
            acc = acc.add(term);
        } else {
            singular_mass += pi;
        }
    }
    Ok(acc.add(ExtendedReal::weighted(singular_mass, gen.f_inf)))
}

/// Hellinger distance H(p, q) = 1 - Σ √(p_i q_i), the f-divergence of the
/// `hellinger` generator in closed form.
pub fn hellinger(p: &[f64], q: &[f64]) -> Result<f64, PovError> {
    if p.len() != q.len() {
        return Err(PovError::DimMismatch(format!("{} vs {}", p.len(), q.len())));
    }
    let affinity: f64 = p.iter().zip(q.iter()).map(|(&a, &b)| (a * b).sqrt()).sum();
    Ok(1.0 - affinity)
}

/// D_f(p,q) - D_f(νp, νq) as an extended real.
///
/// If D_f(p,q) = ∞ the gap is reported as +∞ (monotonicity trivially holds).
/// An infinite image divergence with finite input cannot occur for a valid
/// kernel and raises `MonotonicityViolation` as an internal-consistency
/// alarm.
pub fn monotonicity_gap(
    gen: &ConvexGenerator,
    p: &[f64],
    q: &[f64],
    nu: &MarkovKernel,
) -> Result<ExtendedReal, PovError> {
    let before = f_divergence(gen, p, q)?;
    let image_p = kernels::apply_to_measure(nu, p)?;
    let image_q = kernels::apply_to_measure(nu, q)?;
    let after = f_divergence(gen, &image_p, &image_q)?;
    match (before, after) {
        (ExtendedReal::Infinity, _) => Ok(ExtendedReal::Infinity),
        (ExtendedReal::Finite(_), ExtendedReal::Infinity) => {
            Err(PovError::MonotonicityViolation)
        }
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
            Ok(ExtendedReal::Finite(a - b))
        }
    }
}
