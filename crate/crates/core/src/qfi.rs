//! Quantum and classical Fisher information for the length-scale parameter.
//!
//! Five engines are provided and cross-checked against each other:
//!
//! - closed forms for coherent, displaced-squeezed, and number-state probes,
//! - a pure-state numeric engine built on the derivative operator,
//! - a mixed-state engine from the symmetric logarithmic derivative (SLD),
//! - a Bures-fidelity finite-difference oracle,
//! - Gauss–Hermite quadrature of the classical Fisher information (CFI) of
//!   the position measurement.
//!
//! The mean-square-noise reciprocal (∂⟨A⟩)²/Var(A) of a fixed observable is
//! also here; it lower-bounds the CFI, which lower-bounds the QFI.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fockspace::{
    self, fidelity_mixed, DensityOperator, FockVector, TruncatedOperator,
};
use crate::linalg;
use crate::special::{self, HermiteOrder, LengthScale};
use crate::{Error, Result};

/// Which engine produced a Fisher-information value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QfiMethod {
    Analytic,
    PureNumeric,
    SldEigen,
    FidelityFd,
    CfiQuadrature,
}

impl std::fmt::Display for QfiMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            QfiMethod::Analytic => "analytic",
            QfiMethod::PureNumeric => "pure-numeric",
            QfiMethod::SldEigen => "sld-eigen",
            QfiMethod::FidelityFd => "fidelity-fd",
            QfiMethod::CfiQuadrature => "cfi-quadrature",
        };
        f.write_str(s)
    }
}

/// A Fisher-information value with provenance and an error estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QfiReport {
    pub value: f64,
    pub method: QfiMethod,
    pub cutoff: usize,
    pub estimated_error: f64,
}

/// QFI of a coherent probe with real displacement α: (1 + 2α²)/(2d²).
pub fn qfi_coherent(alpha: f64, d: LengthScale) -> f64 {
    (1.0 + 2.0 * alpha * alpha) / (2.0 * d.get() * d.get())
}

/// QFI of the displaced-squeezed probe with real displacement α and width
/// factor D ≥ 1: (1 + 2α²D)/(2d²). Squeezing alone (α = 0) gains nothing.
pub fn qfi_displaced_squeezed(alpha: f64, big_d: f64, d: LengthScale) -> Result<f64> {
    if !(big_d >= 1.0) || !big_d.is_finite() {
        return Err(Error::Domain(format!("width factor D = {big_d} must be ≥ 1")));
    }
    Ok((1.0 + 2.0 * alpha * alpha * big_d) / (2.0 * d.get() * d.get()))
}

/// QFI of the number-state probe |ψ_n(d)⟩: (n² + n + 1)/(2d²), i.e.
/// Heisenberg scaling in the excitation number.
pub fn qfi_fock(n: HermiteOrder, d: LengthScale) -> f64 {
    let nf = n as f64;
    (nf * nf + nf + 1.0) / (2.0 * d.get() * d.get())
}

/// Pure-state QFI 4(⟨∂ψ|∂ψ⟩ − |⟨ψ|∂ψ⟩|²) with ∂ψ from the derivative
/// operator applied to the coefficients.
pub fn qfi_pure_numeric(state: &FockVector) -> Result<QfiReport> {
    let cutoff = state.cutoff();
    let tail = state.tail_mass(4);
    if tail > 1.0e-8 {
        return Err(Error::CutoffInsufficient {
            cutoff,
            leakage: tail,
            tolerance: 1.0e-8,
        });
    }
    let dm = fockspace::derivative_operator(state.d(), cutoff);
    let dpsi = &dm.matrix * state.coeffs();
    let grad_sq = dpsi.dotc(&dpsi).re;
    let overlap = state.coeffs().dotc(&dpsi);
    let value = 4.0 * (grad_sq - overlap.norm_sqr());
    // The derivative couples n to n±2; mass near the edge bounds the error.
    let edge_scale = (cutoff as f64) / (2.0 * d_sq(state));
    Ok(QfiReport {
        value,
        method: QfiMethod::PureNumeric,
        cutoff,
        estimated_error: tail * edge_scale,
    })
}

fn d_sq(state: &FockVector) -> f64 {
    let d = state.d().get();
    d * d
}

/// SLD and QFI of a mixed state from its eigendecomposition.
///
/// With ρ = Σ p_j |e_j⟩⟨e_j| and G = ⟨e_j|∂ρ|e_k⟩, the SLD matrix elements
/// are L_{jk} = 2 G_{jk}/(p_j + p_k) on pairs above the rank threshold
/// ε_rank = 1e−12·max p, zero elsewhere; QFI = Σ 2|G_{jk}|²/(p_j + p_k).
pub fn sld_mixed(
    rho: &DensityOperator,
    drho: &nalgebra::DMatrix<Complex64>,
) -> Result<(TruncatedOperator, f64)> {
    let n = rho.cutoff();
    if drho.nrows() != n || drho.ncols() != n {
        return Err(Error::CutoffMismatch(n, drho.nrows()));
    }
    let dev = linalg::hermitian_deviation(drho);
    if dev > 1.0e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let (values, vectors) = linalg::eigh(rho.matrix())?;
    let p_max = values[n - 1].max(0.0);
    let eps_rank = 1.0e-12 * p_max;
    let g = vectors.adjoint() * drho * &vectors;
    let mut l_eig = nalgebra::DMatrix::<Complex64>::zeros(n, n);
    let mut qfi = 0.0f64;
    let mut any = false;
    for j in 0..n {
        for k in 0..n {
            let denom = values[j].max(0.0) + values[k].max(0.0);
            if denom > eps_rank {
                any = true;
                l_eig[(j, k)] = 2.0 * g[(j, k)] / Complex64::new(denom, 0.0);
                qfi += 2.0 * g[(j, k)].norm_sqr() / denom;
            }
        }
    }
    if !any {
        return Err(Error::DegenerateRank);
    }
    let l = &vectors * l_eig * vectors.adjoint();
    Ok((TruncatedOperator::new("L_d", l), qfi))
}

/// Bures finite-difference oracle: QFI = −4 ∂²_{d'} √F(ρ_d, ρ_{d'}) at
/// d' = d, by a Richardson-extrapolated second central difference.
pub fn qfi_fidelity_fd<F>(family: F, d: LengthScale, h: f64) -> Result<QfiReport>
where
    F: Fn(LengthScale) -> Result<DensityOperator>,
{
    let dv = d.get();
    if !(h > 0.0) || h < 1.0e-6 * dv || h > 1.0e-2 * dv {
        return Err(Error::Domain(format!(
            "step h = {h} outside [1e-6, 1e-2]·d for d = {dv}"
        )));
    }
    let center = family(d)?;
    let second_diff = |step: f64| -> Result<f64> {
        let plus = family(LengthScale::new(dv + step)?)?.scale_flow(d)?;
        let minus = family(LengthScale::new(dv - step)?)?.scale_flow(d)?;
        let fp = fidelity_mixed(&center, &plus)?.sqrt();
        let fm = fidelity_mixed(&center, &minus)?.sqrt();
        Ok(-4.0 * (fp - 2.0 + fm) / (step * step))
    };
    let coarse = second_diff(h)?;
    let fine = second_diff(0.5 * h)?;
    let value = (4.0 * fine - coarse) / 3.0;
    if value < -1.0e-6 {
        return Err(Error::NegativeCurvature(value));
    }
    Ok(QfiReport {
        value: value.max(0.0),
        method: QfiMethod::FidelityFd,
        cutoff: center.cutoff(),
        estimated_error: (fine - coarse).abs(),
    })
}

/// Classical Fisher information of the position measurement,
/// 4∫(∂_d √p_d)² dx, by Gauss–Hermite quadrature in u = x√d.
///
/// For probes with a real position wavefunction the integrand reduces to
/// the square of the derivative wavefunction and the quadrature is exact;
/// complex probes use the general ratio form, with near-zero-density nodes
/// dropped (their contribution vanishes with the density).
pub fn cfi_position(state: &FockVector) -> Result<QfiReport> {
    let cutoff = state.cutoff();
    let tail = state.tail_mass(4);
    if tail > 1.0e-8 {
        return Err(Error::CutoffInsufficient {
            cutoff,
            leakage: tail,
            tolerance: 1.0e-8,
        });
    }
    let dm = fockspace::derivative_operator(state.d(), cutoff);
    let dcoeffs: DVector<Complex64> = &dm.matrix * state.coeffs();
    let real = state.is_real(1.0e-13);
    let nodes = special::gauss_hermite_nodes(special::default_node_count(cutoff - 1))?;
    let mut acc = 0.0f64;
    let mut dropped = 0.0f64;
    for &(u, w) in &nodes {
        if w == 0.0 {
            continue;
        }
        let h = special::hermite_normalized_all(cutoff - 1, u);
        let mut t = Complex64::new(0.0, 0.0);
        let mut dt = Complex64::new(0.0, 0.0);
        for k in 0..cutoff {
            t += state.coeffs()[k] * h[k];
            dt += dcoeffs[k] * h[k];
        }
        if real {
            acc += w * dt.norm_sqr();
        } else {
            let p = t.norm_sqr();
            let num = t.conj() * dt;
            let grad = 2.0 * num.re;
            if p > 1.0e-300 {
                acc += w * grad * grad / p;
            } else {
                dropped += w;
            }
        }
    }
    let value = if real { 4.0 * acc } else { acc };
    if !value.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "non-finite CFI quadrature at cutoff {cutoff}"
        )));
    }
    Ok(QfiReport {
        value,
        method: QfiMethod::CfiQuadrature,
        cutoff,
        estimated_error: if real { 1.0e-12 * value } else { dropped + 1.0e-9 * value },
    })
}

/// Breakdown of the moment-based sensitivity of an observable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MsnBreakdown {
    /// ⟨A⟩ on the probe.
    pub average: f64,
    /// ∂_d⟨A⟩.
    pub derivative: f64,
    /// Var(A) on the probe.
    pub variance: f64,
    /// (∂_d⟨A⟩)²/Var(A); `None` when the variance vanishes.
    pub msn: Option<f64>,
}

/// Components of (∂⟨A⟩)²/Var(A) for a Hermitian observable and an explicit
/// probe derivative vector (in the same basis as the probe).
pub fn msn_components(
    a: &TruncatedOperator,
    state: &FockVector,
    dstate: &DVector<Complex64>,
) -> Result<MsnBreakdown> {
    let cutoff = state.cutoff();
    if a.cutoff() != cutoff || dstate.len() != cutoff {
        return Err(Error::CutoffMismatch(a.cutoff(), cutoff));
    }
    let dev = linalg::hermitian_deviation(&a.matrix);
    if dev > 1.0e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let a_psi = &a.matrix * state.coeffs();
    let average = state.coeffs().dotc(&a_psi).re;
    let derivative = 2.0 * dstate.dotc(&a_psi).re;
    let second = a_psi.dotc(&a_psi).re;
    let variance = (second - average * average).max(0.0);
    let msn = if variance > 0.0 {
        Some(derivative * derivative / variance)
    } else {
        None
    };
    Ok(MsnBreakdown {
        average,
        derivative,
        variance,
        msn,
    })
}

/// Reciprocal of the mean square noise of `a` on a pure probe whose only
/// d-dependence is the instantaneous basis (derivative = D·coefficients).
pub fn msn_reciprocal(a: &TruncatedOperator, state: &FockVector) -> Result<f64> {
    let dm = fockspace::derivative_operator(state.d(), state.cutoff());
    let dstate = &dm.matrix * state.coeffs();
    let parts = msn_components(a, state, &dstate)?;
    parts.msn.ok_or(Error::ZeroVariance)
}
