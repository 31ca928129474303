//! Excitation damping and thermal states, with exact noisy-state Fisher
//! information.
//!
//! Both noisy families are diagonal in the instantaneous eigenbasis, so
//! their d-derivative is the commutator of the derivative operator with the
//! diagonal weight matrix, and the SLD engine evaluates their QFI exactly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fockspace::{self, DensityOperator};
use crate::qfi::{self, QfiMethod, QfiReport};
use crate::special::{HermiteOrder, LengthScale};
use crate::{Error, Result};

/// Excitation-loss channel: Kraus sum
/// Σ_j (γ^j/j!) (1−γ)^{N̂/2} a^j ρ a†ʲ (1−γ)^{N̂/2}.
///
/// γ = 0 is the identity channel; γ = 1 sends everything to the ground
/// state. On |ψ_n⟩⟨ψ_n| the output weights are Binomial(n, γ) over n−j.
pub fn damping_channel(rho: &DensityOperator, gamma: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&gamma) || !gamma.is_finite() {
        return Err(Error::Domain(format!("loss γ = {gamma} outside [0,1]")));
    }
    let cutoff = rho.cutoff();
    let (a, _) = fockspace::ladder_ops(cutoff);
    // Kraus sum Σ_j (γ^j/j!) D a^j ρ a†ʲ D with D = (1−γ)^{N̂/2}. The
    // diagonal factor acts after the lowering, so it sandwiches each term
    // on the output indices; (1−γ)^0 is 1 even at γ = 1.
    let decay = |k: usize| -> f64 {
        if k == 0 {
            1.0
        } else {
            (1.0 - gamma).powf(0.5 * k as f64)
        }
    };
    let mut out = DMatrix::<Complex64>::zeros(cutoff, cutoff);
    let mut term = rho.matrix().clone();
    let mut weight = 1.0f64; // γ^j/j!
    for j in 0..cutoff {
        if j > 0 {
            weight *= gamma / j as f64;
            term = &a.matrix * term * a.matrix.adjoint();
            if weight == 0.0 || term.norm() * weight < 1.0e-16 {
                break;
            }
        }
        for i in 0..cutoff {
            for k in 0..cutoff {
                out[(i, k)] += term[(i, k)] * (weight * decay(i) * decay(k));
            }
        }
    }
    let trace: Complex64 = out.diagonal().iter().sum();
    if (trace.re - 1.0).abs() > 1.0e-9 {
        return Err(Error::NotNormalized((trace.re - 1.0).abs()));
    }
    Ok(DensityOperator::new_unchecked(rho.d(), out))
}

/// The damped number state: diagonal with Binomial(n, γ) weights on n−j.
pub fn damped_fock_state(
    n: HermiteOrder,
    gamma: f64,
    d: LengthScale,
    cutoff: usize,
) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&gamma) || !gamma.is_finite() {
        return Err(Error::Domain(format!("loss γ = {gamma} outside [0,1]")));
    }
    if n >= cutoff {
        return Err(Error::Domain(format!(
            "excitation {n} does not fit cutoff {cutoff}"
        )));
    }
    let mut m = DMatrix::<Complex64>::zeros(cutoff, cutoff);
    let mut binom = 1.0f64;
    for j in 0..=n {
        // weight C(n,j) γ^j (1−γ)^{n−j} on excitation n−j
        let w = binom * gamma.powi(j as i32) * (1.0 - gamma).powi((n - j) as i32);
        m[(n - j, n - j)] = Complex64::new(w, 0.0);
        binom *= (n - j) as f64 / (j + 1) as f64;
    }
    // γ ∈ {0,1} make the powi products exact; renormalize interior values.
    let trace: f64 = m.diagonal().iter().map(|c| c.re).sum();
    m /= Complex64::new(trace, 0.0);
    Ok(DensityOperator::new_unchecked(d, m))
}

/// Exact QFI of the damped number state plus the small-γ prediction
/// (n²+n+1)/(2d²) − γ·n²/d².
#[derive(Debug, Clone)]
pub struct DampedFockQfi {
    pub report: QfiReport,
    pub first_order_prediction: f64,
}

pub fn damped_fock_qfi(n: HermiteOrder, gamma: f64, d: LengthScale) -> Result<DampedFockQfi> {
    let cutoff = n + 8;
    let rho = damped_fock_state(n, gamma, d, cutoff)?;
    let drho = diagonal_state_derivative(&rho);
    let (_, value) = qfi::sld_mixed(&rho, &drho)?;
    let nf = n as f64;
    let d2 = d.get() * d.get();
    Ok(DampedFockQfi {
        report: QfiReport {
            value,
            method: QfiMethod::SldEigen,
            cutoff,
            estimated_error: 1.0e-12 * value,
        },
        first_order_prediction: (nf * nf + nf + 1.0) / (2.0 * d2) - gamma * nf * nf / d2,
    })
}

/// ∂_d ρ for a state that is diagonal in the instantaneous eigenbasis with
/// d-independent weights: every eigenvector moves by the derivative
/// operator, so ∂ρ = [D, ρ].
pub(crate) fn diagonal_state_derivative(rho: &DensityOperator) -> DMatrix<Complex64> {
    let dm = fockspace::derivative_operator(rho.d(), rho.cutoff());
    &dm.matrix * rho.matrix() - rho.matrix() * &dm.matrix
}

/// Thermal state: geometric weights p_n = ξⁿ(1−ξ) in the basis at d.
pub fn thermal_state(xi: f64, d: LengthScale, cutoff: usize) -> Result<DensityOperator> {
    if !(0.0..1.0).contains(&xi) {
        return Err(Error::Domain(format!("thermal parameter ξ = {xi} outside [0,1)")));
    }
    let mut m = DMatrix::<Complex64>::zeros(cutoff, cutoff);
    let mut w = 1.0 - xi;
    let mut total = 0.0;
    for k in 0..cutoff {
        m[(k, k)] = Complex64::new(w, 0.0);
        total += w;
        w *= xi;
    }
    m /= Complex64::new(total, 0.0);
    Ok(DensityOperator::new_unchecked(d, m))
}

/// QFI of the thermal state, with the cutoff raised until the geometric
/// tail is below 1e−10.
pub fn thermal_qfi(xi: f64, d: LengthScale) -> Result<QfiReport> {
    if !(0.0..=0.99).contains(&xi) {
        return Err(Error::Domain(format!("thermal parameter ξ = {xi} outside [0, 0.99]")));
    }
    if xi == 0.0 {
        return Ok(QfiReport {
            value: 0.5 / (d.get() * d.get()),
            method: QfiMethod::SldEigen,
            cutoff: 8,
            estimated_error: 0.0,
        });
    }
    const MAX_CUTOFF: usize = 4096;
    // ξ^C < 1e−10 fixes the cutoff up to a safety buffer.
    let needed = ((-10.0 * std::f64::consts::LN_10) / xi.ln()).ceil() as usize + 16;
    let mut cutoff = needed.next_power_of_two().max(32);
    loop {
        if cutoff > MAX_CUTOFF {
            return Err(Error::CutoffInsufficient {
                cutoff,
                leakage: xi.powi(MAX_CUTOFF as i32),
                tolerance: 1.0e-10,
            });
        }
        if xi.powi(cutoff as i32) < 1.0e-10 {
            break;
        }
        cutoff *= 2;
    }
    let rho = thermal_state(xi, d, cutoff)?;
    let drho = diagonal_state_derivative(&rho);
    let (_, value) = qfi::sld_mixed(&rho, &drho)?;
    Ok(QfiReport {
        value,
        method: QfiMethod::SldEigen,
        cutoff,
        estimated_error: 1.0e-10 / (d.get() * d.get()),
    })
}
