//! Entangling power: the largest entropy of entanglement `U` creates from a
//! product pure input, `max_{ψA, ψB} E(U(ψA ⊗ ψB))`, in ebits.
//!
//! Each restart starts from a random product state and alternates between
//! improving `ψA` with `ψB` fixed and vice versa. Either half-step maximizes
//! `S(Tr_B ΦΦ†)` over `Φ = L x` for a fixed linear `L` and unit `x`, by
//! Riemannian gradient ascent on the sphere with a backtracking step size.
//! The gradient is `−2 L† (log ρ_A ⊗ I) Φ` projected onto the tangent space.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tensor::{
    c64, hermitian_eigen, kron, random_product_state, reduced_state, CMatrix, CVector, Gate, PureState, Side,
};
use crate::tol;

/// Eigenvalues of `ρ_A` are clamped here before taking the logarithm.
const LOG_FLOOR: f64 = 1e-15;
const STEPS_PER_HALF: usize = 50;
/// Armijo constant for the sufficient-increase test.
const ARMIJO: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct EntanglingPowerResult {
    /// Ebits.
    pub value: f64,
    pub argmax_a: PureState,
    pub argmax_b: PureState,
    pub restarts: usize,
    pub seed: u64,
    /// Restarts that stopped on the improvement criterion rather than the
    /// iteration cap.
    pub converged_restarts: usize,
}

#[derive(Clone, Debug)]
pub struct EntanglingOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub min_improvement: f64,
}

impl Default for EntanglingOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            seed: 0,
            max_iterations: 500,
            min_improvement: 1e-10,
        }
    }
}

pub fn entangling_power_estimate(g: &Gate, restarts: usize, seed: u64) -> Result<EntanglingPowerResult> {
    entangling_power_with(
        g,
        &EntanglingOptions {
            restarts,
            seed,
            ..Default::default()
        },
    )
}

/// Restart `r` draws its start from stream `r` of the seeded generator, so a
/// larger restart budget never lowers the estimate.
pub fn entangling_power_with(g: &Gate, opts: &EntanglingOptions) -> Result<EntanglingPowerResult> {
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let runs: Vec<Result<Run>> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(r as u64);
            let (a, b) = random_product_state(g.d(), &mut rng);
            optimize(g, a.into_inner(), b.into_inner(), opts)
        })
        .collect();
    let mut best: Option<Run> = None;
    let mut converged_restarts = 0;
    for run in runs {
        let run = run?;
        converged_restarts += run.converged as usize;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    Ok(EntanglingPowerResult {
        value: best.value,
        argmax_a: PureState::normalized(best.a)?,
        argmax_b: PureState::normalized(best.b)?,
        restarts: opts.restarts,
        seed: opts.seed,
        converged_restarts,
    })
}

/// Entropy of entanglement of `U(a ⊗ b)` in ebits.
pub fn output_entanglement(g: &Gate, a: &PureState, b: &PureState) -> Result<f64> {
    let phi = g.matrix() * a.tensor(b).amplitudes();
    Ok(entropy_and_log(&phi, g.d())?.0)
}

struct Run {
    value: f64,
    a: CVector,
    b: CVector,
    converged: bool,
}

fn column(v: &CVector) -> CMatrix {
    CMatrix::from_column_slice(v.len(), 1, v.as_slice())
}

fn optimize(g: &Gate, mut a: CVector, mut b: CVector, opts: &EntanglingOptions) -> Result<Run> {
    let d = g.d();
    let u = g.matrix();
    let id = CMatrix::identity(d, d);
    let mut value = entropy_and_log(&(u * a.kronecker(&b)), d)?.0;
    let mut converged = false;
    for _ in 0..opts.max_iterations {
        let start = value;
        let l_a = u * kron(&id, &column(&b));
        (a, _) = ascend(&l_a, a, d)?;
        let l_b = u * kron(&column(&a), &id);
        (b, value) = ascend(&l_b, b, d)?;
        if value - start < opts.min_improvement {
            converged = true;
            break;
        }
    }
    Ok(Run { value, a, b, converged })
}

/// Entropy (ebits) of `Φ`'s A marginal and `(ln ρ_A ⊗ I) Φ`.
fn entropy_and_log(phi: &CVector, d: usize) -> Result<(f64, CVector)> {
    let rho = reduced_state(phi, (d, d), Side::A)?;
    let (values, vectors) = hermitian_eigen(&rho);
    let entropy = values
        .iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p >= tol::ENTROPY_CUTOFF)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0);
    let logs = CMatrix::from_diagonal(&CVector::from_iterator(
        d,
        values.iter().map(|&p| c64(p.max(LOG_FLOOR).ln(), 0.0)),
    ));
    let log_rho = &vectors * logs * vectors.adjoint();
    let amplitudes = CMatrix::from_fn(d, d, |i, j| phi[i * d + j]);
    let applied = log_rho * amplitudes;
    Ok((entropy, CVector::from_fn(d * d, |k, _| applied[(k / d, k % d)])))
}

/// Gradient ascent of the output entropy over unit `x` for `Φ = L x`.
fn ascend(l: &CMatrix, mut x: CVector, d: usize) -> Result<(CVector, f64)> {
    let (mut value, mut log_phi) = entropy_and_log(&(l * &x), d)?;
    let mut step: f64 = 1.0;
    for _ in 0..STEPS_PER_HALF {
        let euclid = l.adjoint() * &log_phi * c64(-2.0, 0.0);
        let grad = &euclid - &x * x.dotc(&euclid);
        // entropy is in bits, the gradient in nats
        let slope = grad.norm_squared() / std::f64::consts::LN_2;
        if slope < 1e-28 {
            break;
        }
        step = (step * 2.0).min(8.0);
        let mut moved = false;
        while step > 1e-14 {
            let candidate = (&x + &grad * c64(step, 0.0)).normalize();
            let (v, lp) = entropy_and_log(&(l * &candidate), d)?;
            if v - value >= ARMIJO * step * slope {
                (x, value, log_phi) = (candidate, v, lp);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Ok((x, value))
}
