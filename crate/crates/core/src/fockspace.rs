//! Truncated Fock-space representation and the d-dependence machinery.
//!
//! States are always stored in the *instantaneous eigenbasis* `{|ψ_n(d)⟩}`
//! at their own parameter value. In that coordinate system the derivative of
//! every basis state is one sparse constant matrix (`derivative_operator`),
//! and changing the basis parameter is the exact one-parameter unitary flow
//! generated by `A = (ia² − ia†²)/4` (`apply_scale_flow`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::linalg;
use crate::special::{self, HermiteOrder, LengthScale};
use crate::{Error, Result};

const NORM_TOL: f64 = 1.0e-9;
const LEAKAGE_TOL: f64 = 1.0e-8;

/// Pure-state coefficients over `{|ψ_n(d)⟩}` up to a cutoff.
#[derive(Debug, Clone)]
pub struct FockVector {
    d: LengthScale,
    coeffs: DVector<Complex64>,
}

impl FockVector {
    /// Wrap coefficients, requiring unit norm within 1e−9.
    pub fn new(d: LengthScale, coeffs: DVector<Complex64>) -> Result<Self> {
        let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let dev = (norm_sq - 1.0).abs();
        if dev > NORM_TOL {
            return Err(Error::NotNormalized(dev));
        }
        Ok(Self { d, coeffs })
    }

    /// Basis eigenstate |ψ_n(d)⟩ itself.
    pub fn basis_state(n: HermiteOrder, d: LengthScale, cutoff: usize) -> Result<Self> {
        if n >= cutoff {
            return Err(Error::Domain(format!(
                "excitation {n} does not fit cutoff {cutoff}"
            )));
        }
        let mut coeffs = DVector::zeros(cutoff);
        coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(Self { d, coeffs })
    }

    pub fn d(&self) -> LengthScale {
        self.d
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &DVector<Complex64> {
        &self.coeffs
    }

    /// ⟨self|other⟩ for states in the same basis.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self.coeffs.dotc(&other.coeffs))
    }

    /// Probability mass on the top `k` coefficients (truncation monitor).
    pub fn tail_mass(&self, k: usize) -> f64 {
        let start = self.cutoff().saturating_sub(k);
        self.coeffs
            .iter()
            .skip(start)
            .map(|c| c.norm_sqr())
            .sum()
    }

    /// Position wavefunction Σ c_n ψ_n(d, x).
    pub fn wavefunction(&self, x: f64) -> Result<Complex64> {
        let u = x * self.d.get().sqrt();
        let envelope = self.d.get().powf(0.25) * (-0.5 * u * u).exp();
        let h = special::hermite_normalized_all(self.cutoff() - 1, u);
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, hv) in self.coeffs.iter().zip(h.iter()) {
            acc += c * *hv;
        }
        Ok(acc * envelope)
    }

    /// True when every coefficient is real up to `tol` (implies a real
    /// position wavefunction).
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    /// Rank-one density operator |ψ⟩⟨ψ|.
    pub fn to_density(&self) -> DensityOperator {
        let m = &self.coeffs * self.coeffs.adjoint();
        DensityOperator {
            d: self.d,
            matrix: m,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.cutoff() != other.cutoff() {
            return Err(Error::CutoffMismatch(self.cutoff(), other.cutoff()));
        }
        if self.d != other.d {
            return Err(Error::BasisMismatch(self.d.get(), other.d.get()));
        }
        Ok(())
    }
}

/// Hermitian positive unit-trace matrix in the truncated basis at `d`.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    d: LengthScale,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Validate Hermiticity (1e−12), unit trace (1e−9), and positivity
    /// (eigenvalues ≥ −1e−10).
    pub fn new(d: LengthScale, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > 1.0e-12 {
            return Err(Error::NotHermitian(dev));
        }
        let trace: Complex64 = matrix.diagonal().iter().sum();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::NotNormalized((trace.re - 1.0).abs() + trace.im.abs()));
        }
        let (values, _) = linalg::eigh(&matrix)?;
        if values[0] < -1.0e-10 {
            return Err(Error::Domain(format!(
                "density operator has negative eigenvalue {:.3e}",
                values[0]
            )));
        }
        Ok(Self { d, matrix })
    }

    pub(crate) fn new_unchecked(d: LengthScale, matrix: DMatrix<Complex64>) -> Self {
        Self { d, matrix }
    }

    pub fn d(&self) -> LengthScale {
        self.d
    }

    pub fn cutoff(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Re-express the same physical state in the basis at `target_d`.
    pub fn scale_flow(&self, target_d: LengthScale) -> Result<Self> {
        let u = flow_unitary(self.d, target_d, self.cutoff())?;
        let m = &u * &self.matrix * u.adjoint();
        Ok(Self {
            d: target_d,
            matrix: m,
        })
    }
}

/// Labeled complex matrix in the truncated basis.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    pub label: String,
    pub matrix: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn new(label: impl Into<String>, matrix: DMatrix<Complex64>) -> Self {
        Self {
            label: label.into(),
            matrix,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Annihilation and creation operators: ⟨n−1|a|n⟩ = √n, a† = aᵀ*.
pub fn ladder_ops(cutoff: usize) -> (TruncatedOperator, TruncatedOperator) {
    let mut a = DMatrix::<Complex64>::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    (
        TruncatedOperator::new("a", a),
        TruncatedOperator::new("a_dag", a_dag),
    )
}

/// The matrix D whose column n is ∂_d|ψ_n(d)⟩ in the basis at d:
/// entries (n−2, n) = √(n(n−1))/(4d) and (n+2, n) = −√((n+1)(n+2))/(4d).
pub fn derivative_operator(d: LengthScale, cutoff: usize) -> TruncatedOperator {
    let mut m = DMatrix::<Complex64>::zeros(cutoff, cutoff);
    let s = 1.0 / (4.0 * d.get());
    for n in 0..cutoff {
        if n >= 2 {
            m[(n - 2, n)] = Complex64::new((n as f64 * (n as f64 - 1.0)).sqrt() * s, 0.0);
        }
        if n + 2 < cutoff {
            m[(n + 2, n)] =
                Complex64::new(-((n as f64 + 1.0) * (n as f64 + 2.0)).sqrt() * s, 0.0);
        }
    }
    TruncatedOperator::new("D_d", m)
}

/// Scale-flow generator A = (ia² − ia†²)/4, Hermitian; D = −iA/d away from
/// the truncation edge.
pub fn scale_generator(cutoff: usize) -> TruncatedOperator {
    let (a, a_dag) = ladder_ops(cutoff);
    let i = Complex64::new(0.0, 1.0);
    let m = (&a.matrix * &a.matrix).map(|v| i * v) - (&a_dag.matrix * &a_dag.matrix).map(|v| i * v);
    TruncatedOperator::new("A", m / Complex64::new(4.0, 0.0))
}

/// Unitary carrying coefficients from the basis at `from` to the basis at
/// `to`: exp(i·ln(to/from)·A).
pub(crate) fn flow_unitary(
    from: LengthScale,
    to: LengthScale,
    cutoff: usize,
) -> Result<DMatrix<Complex64>> {
    let theta = (to.get() / from.get()).ln();
    let a = scale_generator(cutoff);
    linalg::unitary_from_generator(&a.matrix, theta)
}

/// Re-express `state` in the basis at `target_d` via the exact scale flow.
///
/// The flow is unitary on the untruncated space; support spilling past the
/// truncation edge shows up as trailing-coefficient mass, which is checked
/// against 1e−8 and reported as a cutoff error when exceeded.
pub fn apply_scale_flow(state: &FockVector, target_d: LengthScale) -> Result<FockVector> {
    let u = flow_unitary(state.d, target_d, state.cutoff())?;
    let coeffs = &u * state.coeffs();
    let out = FockVector {
        d: target_d,
        coeffs,
    };
    let leakage = out.tail_mass(4);
    if leakage > LEAKAGE_TOL {
        return Err(Error::CutoffInsufficient {
            cutoff: state.cutoff(),
            leakage,
            tolerance: LEAKAGE_TOL,
        });
    }
    Ok(out)
}

/// Coefficients of the fiducial vacuum |ψ_0(1)⟩ in the basis at `d`: an
/// anti-squeezed state supported on even excitations,
/// c_{2k} = √C(2k,k) · (t/2)^k / √cosh r with r = ln(d)/2, t = tanh r.
pub fn vacuum_in_basis(d: LengthScale, cutoff: usize) -> Result<FockVector> {
    if cutoff < 8 || cutoff % 2 != 0 {
        return Err(Error::Domain(format!(
            "vacuum expansion needs an even cutoff ≥ 8, got {cutoff}"
        )));
    }
    let r = 0.5 * d.get().ln();
    let t = r.tanh();
    let scale = 1.0 / r.cosh().sqrt();
    let mut coeffs = DVector::<Complex64>::zeros(cutoff);
    let mut binom_sqrt = 1.0f64; // √C(2k,k)
    let mut ratio = 1.0f64; // (t/2)^k
    let mut mass = 0.0f64;
    for k in 0..cutoff / 2 {
        if k > 0 {
            let kf = k as f64;
            binom_sqrt *= (2.0 * kf * (2.0 * kf - 1.0)).sqrt() / kf;
            ratio *= 0.5 * t;
        }
        let c = scale * binom_sqrt * ratio;
        coeffs[2 * k] = Complex64::new(c, 0.0);
        mass += c * c;
    }
    let deficit = 1.0 - mass;
    if deficit > LEAKAGE_TOL {
        return Err(Error::CutoffInsufficient {
            cutoff,
            leakage: deficit,
            tolerance: LEAKAGE_TOL,
        });
    }
    coeffs /= Complex64::new(mass.sqrt(), 0.0);
    Ok(FockVector { d, coeffs })
}

/// Coherent state with Poisson amplitudes c_n = e^{−|α|²/2} αⁿ/√n!.
pub fn coherent_vector(alpha: Complex64, d: LengthScale, cutoff: usize) -> Result<FockVector> {
    let energy = alpha.norm_sqr();
    if energy > cutoff as f64 / 4.0 {
        return Err(Error::Domain(format!(
            "|α|² = {energy:.3} exceeds cutoff/4 = {}",
            cutoff as f64 / 4.0
        )));
    }
    let mut coeffs = DVector::<Complex64>::zeros(cutoff);
    let mut c = Complex64::new((-0.5 * energy).exp(), 0.0);
    coeffs[0] = c;
    for n in 1..cutoff {
        c *= alpha / Complex64::new((n as f64).sqrt(), 0.0);
        coeffs[n] = c;
    }
    let mass: f64 = coeffs.iter().map(|v| v.norm_sqr()).sum();
    coeffs /= Complex64::new(mass.sqrt(), 0.0);
    Ok(FockVector { d, coeffs })
}

/// Displaced-squeezed probe: real displacement `alpha`, width factor
/// `big_d ≥ 1`, i.e. wavefunction ∝ exp(−D·d·(x − x₀)²/2) with
/// x₀ = α√(2/d). Coefficients follow the two-term recurrence of the
/// squeezed-coherent expansion with squeeze parameter r = ln(big_d)/2.
pub fn displaced_squeezed_vector(
    alpha: f64,
    big_d: f64,
    d: LengthScale,
    cutoff: usize,
) -> Result<FockVector> {
    if !(big_d >= 1.0) || !big_d.is_finite() {
        return Err(Error::Domain(format!("width factor D = {big_d} must be ≥ 1")));
    }
    let r = 0.5 * big_d.ln();
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut coeffs = DVector::<Complex64>::zeros(cutoff);
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    coeffs[0] = cur;
    for n in 0..cutoff - 1 {
        let nf = n as f64;
        let next = (Complex64::new(alpha * (ch + sh), 0.0) * cur
            - Complex64::new(sh * nf.sqrt(), 0.0) * prev)
            / Complex64::new(ch * (nf + 1.0).sqrt(), 0.0);
        prev = cur;
        cur = next;
        coeffs[n + 1] = cur;
    }
    let mass: f64 = coeffs.iter().map(|v| v.norm_sqr()).sum();
    let tail: f64 = coeffs
        .iter()
        .skip(cutoff.saturating_sub(4))
        .map(|v| v.norm_sqr())
        .sum();
    if tail / mass > LEAKAGE_TOL {
        return Err(Error::CutoffInsufficient {
            cutoff,
            leakage: tail / mass,
            tolerance: LEAKAGE_TOL,
        });
    }
    coeffs /= Complex64::new(mass.sqrt(), 0.0);
    Ok(FockVector { d, coeffs })
}

/// |⟨s1|s2⟩|² for pure states in the same basis.
pub fn fidelity_pure(s1: &FockVector, s2: &FockVector) -> Result<f64> {
    Ok(s1.inner(s2)?.norm_sqr().min(1.0))
}

/// Uhlmann fidelity (tr √(√ρ σ √ρ))² for density operators in the same basis.
pub fn fidelity_mixed(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.cutoff() != sigma.cutoff() {
        return Err(Error::CutoffMismatch(rho.cutoff(), sigma.cutoff()));
    }
    if rho.d != sigma.d {
        return Err(Error::BasisMismatch(rho.d.get(), sigma.d.get()));
    }
    let root = linalg::sqrt_psd(&rho.matrix)?;
    let inner = &root * &sigma.matrix * &root;
    let (values, _) = linalg::eigh(&inner)?;
    // Eigenvalue noise ~1e-16 would contribute ~1e-8 per mode after the
    // square root; clip relative to the largest eigenvalue first.
    let top = values.iter().fold(0.0f64, |m, &v| m.max(v));
    let floor = 1.0e-14 * top;
    let tr: f64 = values
        .iter()
        .filter(|&&v| v > floor)
        .map(|&v| v.sqrt())
        .sum();
    Ok((tr * tr).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ls(v: f64) -> LengthScale {
        LengthScale::new(v).unwrap()
    }

    #[test]
    fn ladder_structure() {
        let (a, a_dag) = ladder_ops(2);
        assert_relative_eq!(a.matrix[(0, 1)].re, 1.0);
        assert_eq!(a.matrix[(1, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(a_dag.matrix, a.matrix.adjoint());

        let (a, a_dag) = ladder_ops(8);
        let number = &a_dag.matrix * &a.matrix;
        for n in 0..8 {
            assert_relative_eq!(number[(n, n)].re, n as f64, epsilon = 1e-14);
        }
        let comm = &a.matrix * &a_dag.matrix - &number;
        for n in 0..7 {
            assert_relative_eq!(comm[(n, n)].re, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn derivative_operator_first_columns() {
        let d = ls(1.0);
        let m = &derivative_operator(d, 8).matrix;
        assert_relative_eq!(m[(2, 0)].re, -2.0f64.sqrt() / 4.0, epsilon = 1e-14);
        assert_relative_eq!(m[(3, 1)].re, -6.0f64.sqrt() / 4.0, epsilon = 1e-14);
        // Antisymmetric real, entries scaled by 1/(4d).
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(m[(i, j)].im, 0.0);
                assert_relative_eq!(m[(i, j)].re, -m[(j, i)].re, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn scale_generator_matches_derivative() {
        let cutoff = 12;
        let a = scale_generator(cutoff);
        assert!(linalg::hermitian_deviation(&a.matrix) < 1e-14);
        for n in 0..cutoff {
            assert_eq!(a.matrix[(n, n)], Complex64::new(0.0, 0.0));
            if n + 2 < cutoff {
                let expect = -((n as f64 + 1.0) * (n as f64 + 2.0)).sqrt() / 4.0;
                assert_relative_eq!(a.matrix[(n + 2, n)].im, expect, epsilon = 1e-14);
            }
        }
        // D = −iA/d away from the truncation edge.
        let d = ls(1.7);
        let dm = &derivative_operator(d, cutoff).matrix;
        let minus_i_a = a.matrix.map(|v| v * Complex64::new(0.0, -1.0) / d.get());
        for i in 0..cutoff - 2 {
            for j in 0..cutoff - 2 {
                assert!((dm[(i, j)] - minus_i_a[(i, j)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn lemma_consistency_with_finite_differences() {
        // Column n of D, synthesized in position space, must match the
        // finite-difference d-derivative of psi(n, d, x).
        let d = 1.3;
        let h = 1.0e-5;
        let cutoff = 32;
        let dm = &derivative_operator(ls(d), cutoff).matrix;
        for n in [0usize, 1, 5, 12, 20] {
            for x in [-1.9f64, 0.3, 0.8, 2.4] {
                let fd = (special::psi(n, ls(d + h), x).unwrap()
                    - special::psi(n, ls(d - h), x).unwrap())
                    / (2.0 * h);
                let mut synth = 0.0;
                for m in 0..cutoff {
                    let c = dm[(m, n)].re;
                    if c != 0.0 {
                        synth += c * special::psi(m, ls(d), x).unwrap();
                    }
                }
                let scale = fd.abs().max(1e-4);
                assert!(
                    (fd - synth).abs() / scale < 1e-6,
                    "n={n} x={x}: fd {fd:.3e} vs synth {synth:.3e}"
                );
            }
        }
    }

    #[test]
    fn flow_identity_and_round_trip() {
        let state = coherent_vector(Complex64::new(0.8, 0.2), ls(1.0), 48).unwrap();
        let same = apply_scale_flow(&state, ls(1.0)).unwrap();
        assert!((same.coeffs() - state.coeffs()).norm() < 1e-12);

        let there = apply_scale_flow(&state, ls(1.8)).unwrap();
        let back = apply_scale_flow(&there, ls(1.0)).unwrap();
        assert!((back.coeffs() - state.coeffs()).norm() < 1e-8);
    }

    #[test]
    fn flow_matches_derivative_operator() {
        // (flow(s, d(1+h)) − s)/(d·h) ≈ −D·s: the coefficients of a fixed
        // physical state obey dc/dd = −D c.
        let d = 1.0;
        let h = 1.0e-6;
        let state = FockVector::basis_state(4, ls(d), 32).unwrap();
        let moved = apply_scale_flow(&state, ls(d * (1.0 + h))).unwrap();
        let fd = (moved.coeffs() - state.coeffs()) / Complex64::new(d * h, 0.0);
        let expect = -(&derivative_operator(ls(d), 32).matrix * state.coeffs());
        assert!((fd - expect).norm() < 1e-4);
    }

    #[test]
    fn vacuum_expansion_closed_form() {
        let d = ls(std::f64::consts::E);
        let v = vacuum_in_basis(d, 64).unwrap();
        // ln d = 1: leading coefficient 1/√cosh(1/2).
        assert_relative_eq!(v.coeffs()[0].re, 1.0 / 0.5f64.cosh().sqrt(), epsilon = 1e-9);
        assert_relative_eq!(v.coeffs()[2].re, 0.307719, epsilon = 1e-6);
        assert_eq!(v.coeffs()[1], Complex64::new(0.0, 0.0));
        assert_eq!(v.coeffs()[3], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn vacuum_expansion_matches_flow() {
        for dv in [0.4f64, 2.0, std::f64::consts::E, 5.0] {
            let closed = vacuum_in_basis(ls(dv), 96).unwrap();
            let flowed =
                apply_scale_flow(&FockVector::basis_state(0, ls(1.0), 96).unwrap(), ls(dv))
                    .unwrap();
            assert!(
                (closed.coeffs() - flowed.coeffs()).norm() < 1e-7,
                "d = {dv}"
            );
        }
    }

    #[test]
    fn vacuum_expansion_overlap_integral() {
        // ⟨ψ_2(d)|ψ_0(1)⟩ by direct quadrature equals coefficient c_2.
        let dv = 2.0;
        let v = vacuum_in_basis(ls(dv), 64).unwrap();
        let mut acc = 0.0;
        let step = 1.0e-3;
        let mut x = -10.0;
        while x <= 10.0 {
            acc += special::psi(2, ls(dv), x).unwrap() * special::psi(0, ls(1.0), x).unwrap()
                * step;
            x += step;
        }
        assert_relative_eq!(acc, v.coeffs()[2].re, epsilon = 1e-6);
    }

    #[test]
    fn trivial_vacuum_at_unit_scale() {
        let v = vacuum_in_basis(ls(1.0), 16).unwrap();
        assert_relative_eq!(v.coeffs()[0].re, 1.0, epsilon = 1e-14);
        for n in 1..16 {
            assert_eq!(v.coeffs()[n], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn coherent_vector_basics() {
        let zero = coherent_vector(Complex64::new(0.0, 0.0), ls(1.0), 16).unwrap();
        assert_relative_eq!(zero.coeffs()[0].re, 1.0, epsilon = 1e-14);

        let alpha = Complex64::new(1.2, -0.4);
        let v = coherent_vector(alpha, ls(1.0), 64).unwrap();
        let (a, a_dag) = ladder_ops(64);
        let number = &a_dag.matrix * &a.matrix;
        let mean = v.coeffs().dotc(&(&number * v.coeffs())).re;
        assert_relative_eq!(mean, alpha.norm_sqr(), epsilon = 1e-9);
    }

    #[test]
    fn coherent_overlap_across_scales() {
        // Ground-state overlap across scales: |⟨ψ_0(d)|ψ_0(d')⟩|² at
        // d = 1, d' = 4 is (2/√5)² = 0.8.
        let d1 = ls(1.0);
        let d2 = ls(4.0);
        let v1 = FockVector::basis_state(0, d1, 96).unwrap();
        let moved = apply_scale_flow(&v1, d2).unwrap();
        let v2 = FockVector::basis_state(0, d2, 96).unwrap();
        let f = fidelity_pure(&moved, &v2).unwrap();
        assert_relative_eq!(f, 0.8, epsilon = 1e-8);
    }

    #[test]
    fn fidelity_pure_cases() {
        let s = coherent_vector(Complex64::new(0.5, 0.1), ls(1.0), 32).unwrap();
        assert_relative_eq!(fidelity_pure(&s, &s).unwrap(), 1.0, epsilon = 1e-12);
        let f0 = FockVector::basis_state(0, ls(1.0), 32).unwrap();
        let f3 = FockVector::basis_state(3, ls(1.0), 32).unwrap();
        assert_eq!(fidelity_pure(&f0, &f3).unwrap(), 0.0);
    }

    #[test]
    fn fidelity_mixed_reduces_to_pure() {
        let s1 = coherent_vector(Complex64::new(0.7, 0.0), ls(1.0), 48).unwrap();
        let s2 = displaced_squeezed_vector(0.4, 2.0, ls(1.0), 48).unwrap();
        let pure = fidelity_pure(&s1, &s2).unwrap();
        let mixed = fidelity_mixed(&s1.to_density(), &s2.to_density()).unwrap();
        assert_relative_eq!(pure, mixed, epsilon = 1e-9);
    }

    #[test]
    fn fidelity_rejects_mismatched_inputs() {
        let s1 = FockVector::basis_state(0, ls(1.0), 16).unwrap();
        let s2 = FockVector::basis_state(0, ls(1.0), 32).unwrap();
        assert!(matches!(
            fidelity_pure(&s1, &s2),
            Err(Error::CutoffMismatch(16, 32))
        ));
        let s3 = FockVector::basis_state(0, ls(2.0), 16).unwrap();
        assert!(matches!(
            fidelity_pure(&s1, &s3),
            Err(Error::BasisMismatch(_, _))
        ));
    }

    #[test]
    fn displaced_squeezed_wavefunction_shape() {
        // ψ(x) ∝ exp(−D d (x − x₀)²/2) with x₀ = α√(2/d).
        let (alpha, big_d, dv) = (0.9, 3.0, 1.4);
        let s = displaced_squeezed_vector(alpha, big_d, ls(dv), 128).unwrap();
        let x0 = alpha * (2.0 / dv).sqrt();
        let probe = |x: f64| s.wavefunction(x).unwrap().re;
        let (xa, xb) = (x0 + 0.3, x0 + 0.7);
        let measured = (probe(xa) / probe(xb)).ln();
        let expect = 0.5 * big_d * dv * ((xb - x0).powi(2) - (xa - x0).powi(2));
        assert_relative_eq!(measured, expect, epsilon = 1e-8);
    }

    #[test]
    fn flow_leakage_is_reported() {
        let state = FockVector::basis_state(14, ls(1.0), 16).unwrap();
        let err = apply_scale_flow(&state, ls(6.0)).unwrap_err();
        assert!(matches!(err, Error::CutoffInsufficient { .. }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn flow_is_unitary_and_invertible(
            n in 0usize..=6,
            target in 0.5f64..2.0,
        ) {
            let state = FockVector::basis_state(n, ls(1.0), 48).unwrap();
            let moved = apply_scale_flow(&state, ls(target)).unwrap();
            let norm: f64 = moved.coeffs().iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() < 1e-10);
            let back = apply_scale_flow(&moved, ls(1.0)).unwrap();
            prop_assert!((back.coeffs() - state.coeffs()).norm() < 1e-8);
        }
    }
}
