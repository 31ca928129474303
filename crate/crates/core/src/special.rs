//! Hermite polynomials, normalized oscillator eigenfunctions, and
//! Gauss–Hermite quadrature.
//!
//! The position density of the n-th oscillator eigenstate at length-scale
//! parameter `d` is `psi(n, d, x)²` with
//!
//! ```text
//! psi(n, d, x) = (d/π)^{1/4} (2ⁿ n!)^{-1/2} e^{-d x²/2} H_n(x √d).
//! ```
//!
//! Everything here evaluates through the normalized-function three-term
//! recurrence, so no factorial or 2ⁿ factor is ever formed and orders in the
//! hundreds stay representable.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Excitation number of an oscillator eigenstate.
pub type HermiteOrder = usize;

/// The estimation target `d = L⁻²`: positive, finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LengthScale(f64);

impl LengthScale {
    pub fn new(d: f64) -> Result<Self> {
        if !d.is_finite() {
            return Err(Error::NonFinite(format!("length scale d = {d}")));
        }
        if d <= 0.0 {
            return Err(Error::Domain(format!("length scale d = {d} must be > 0")));
        }
        Ok(Self(d))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Physicists' Hermite polynomial H_n(u) by the recurrence
/// H_{k+1} = 2u·H_k − 2k·H_{k−1}.
///
/// Overflow is an error, never a silent saturation: the recurrence grows
/// roughly like (2u)ⁿ·n!^{1/2} and leaves f64 range near n·u² ~ 700.
pub fn hermite_eval(n: HermiteOrder, u: f64) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::NonFinite(format!("hermite argument u = {u}")));
    }
    let mut prev = 1.0f64;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * u;
    for k in 1..n {
        let next = 2.0 * u * cur - 2.0 * (k as f64) * prev;
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return Err(Error::HermiteOverflow { n, u });
        }
    }
    Ok(cur)
}

/// Normalized oscillator eigenfunction psi(n, d, x).
///
/// Uses the normalized recurrence
/// `ψ_{k+1} = √(2/(k+1))·u·ψ_k − √(k/(k+1))·ψ_{k−1}` with `u = x√d`,
/// which keeps every intermediate of order one times the Gaussian envelope.
pub fn psi(n: HermiteOrder, d: LengthScale, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(format!("position x = {x}")));
    }
    let u = x * d.get().sqrt();
    let envelope = d.get().powf(0.25) * (-0.5 * u * u).exp();
    Ok(envelope * hermite_normalized(n, u))
}

/// h̃_n(u) = H_n(u) / √(2ⁿ n! √π), so that psi(n,d,x) = d^{1/4} e^{-u²/2} h̃_n(u).
fn hermite_normalized(n: HermiteOrder, u: f64) -> f64 {
    let mut prev = std::f64::consts::PI.powf(-0.25);
    if n == 0 {
        return prev;
    }
    let mut cur = std::f64::consts::SQRT_2 * u * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of h̃_0(u) .. h̃_{n_max}(u) in one recurrence pass.
pub(crate) fn hermite_normalized_all(n_max: HermiteOrder, u: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = std::f64::consts::PI.powf(-0.25);
    out.push(prev);
    if n_max == 0 {
        return out;
    }
    let mut cur = std::f64::consts::SQRT_2 * u * prev;
    out.push(cur);
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// log psi(n,d,x)², the per-sample log-likelihood contribution.
///
/// Returns −∞ at the zeros of H_n; that sentinel is a valid value, so the
/// MLE objective can be evaluated on grids that straddle nodes.
pub fn log_density(n: HermiteOrder, d: LengthScale, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(format!("position x = {x}")));
    }
    let u = x * d.get().sqrt();
    // h̃_n with running renormalization so huge |u| cannot overflow.
    let mut offset = 0.0f64;
    let mut prev = std::f64::consts::PI.powf(-0.25);
    let mut cur = if n == 0 {
        prev
    } else {
        std::f64::consts::SQRT_2 * u * prev
    };
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1.0e150 {
            prev /= 1.0e150;
            cur /= 1.0e150;
            offset += 150.0 * std::f64::consts::LN_10;
        }
    }
    if cur == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(0.5 * d.get().ln() - u * u + 2.0 * (cur.abs().ln() + offset))
}

/// Default Gauss–Hermite node count for integrands built from states
/// supported up to excitation `n_max`: exact for the degree ≤ 4·n_max
/// polynomial×Gaussian integrands of every Fisher-information use.
pub fn default_node_count(n_max: HermiteOrder) -> usize {
    4 * (n_max + 8)
}

/// `k` Gauss–Hermite nodes and weights for the weight function e^{−u²},
/// exact for polynomials of degree ≤ 2k−1.
///
/// Golub–Welsch nodes: eigenvalues of the symmetric tridiagonal Jacobi
/// matrix with off-diagonals √(k/2). Weights are 1/Σ_{j<k} h̃_j(node)²
/// through the same recurrence as the eigenfunctions; unlike the squared
/// first eigenvector component, this keeps full *relative* accuracy on the
/// exponentially small extreme-node weights. Weights below f64 range come
/// back as exact 0 and should be skipped by consumers.
pub fn gauss_hermite_nodes(k: usize) -> Result<Vec<(f64, f64)>> {
    if k == 0 {
        return Err(Error::Domain("node count must be ≥ 1".into()));
    }
    if k == 1 {
        return Ok(vec![(0.0, std::f64::consts::PI.sqrt())]);
    }
    let mut jacobi = DMatrix::<f64>::zeros(k, k);
    for j in 1..k {
        let b = (j as f64 / 2.0).sqrt();
        jacobi[(j - 1, j)] = b;
        jacobi[(j, j - 1)] = b;
    }
    let se = jacobi
        .try_symmetric_eigen(1.0e-14, 10_000)
        .ok_or(Error::EigenFailure(k))?;
    let mut out: Vec<(f64, f64)> = (0..k)
        .map(|j| {
            let node = se.eigenvalues[j];
            let h = hermite_normalized_all(k - 1, node);
            let denom: f64 = h.iter().map(|v| v * v).sum();
            let w = if denom.is_finite() { 1.0 / denom } else { 0.0 };
            (node, w)
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn d(v: f64) -> LengthScale {
        LengthScale::new(v).unwrap()
    }

    #[test]
    fn hermite_low_orders() {
        assert_eq!(hermite_eval(0, 1.7).unwrap(), 1.0);
        assert_relative_eq!(hermite_eval(2, 1.0).unwrap(), 2.0, epsilon = 1e-14);
        assert_relative_eq!(hermite_eval(3, 0.5).unwrap(), -5.0, epsilon = 1e-14);
    }

    #[test]
    fn hermite_overflow_is_signaled() {
        let err = hermite_eval(400, 40.0).unwrap_err();
        assert!(matches!(err, Error::HermiteOverflow { .. }));
    }

    #[test]
    fn psi_ground_state_at_origin() {
        assert_relative_eq!(
            psi(0, d(1.0), 0.0).unwrap(),
            std::f64::consts::PI.powf(-0.25),
            epsilon = 1e-12
        );
        assert_eq!(psi(1, d(1.0), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn psi_normalization_by_quadrature() {
        // ∫ psi² dx = (1/√d) ∫ e^{-u²} h̃_n(u)² du: Gauss–Hermite is exact.
        for &n in &[0usize, 1, 7, 25, 50] {
            for &dv in &[0.5, 1.0, 3.0] {
                let nodes = gauss_hermite_nodes(default_node_count(n)).unwrap();
                let total: f64 = nodes
                    .iter()
                    .filter(|&&(_, w)| w > 0.0)
                    .map(|&(u, w)| {
                        let h = hermite_normalized(n, u);
                        w * h * h
                    })
                    .sum();
                let _ = dv;
                assert_relative_eq!(total, 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn psi_stable_at_high_order() {
        let v = psi(200, d(1.0), 1.3).unwrap();
        assert!(v.is_finite());
        assert!(v.abs() < 1.0);
    }

    #[test]
    fn log_density_values_and_sentinels() {
        assert_relative_eq!(
            log_density(0, d(1.0), 0.0).unwrap(),
            -0.5 * std::f64::consts::PI.ln(),
            epsilon = 1e-12
        );
        assert_eq!(log_density(1, d(2.0), 0.0).unwrap(), f64::NEG_INFINITY);
        // H_2 vanishes at u = 1/√2; the nearest f64 leaves a ~1e-16 residual
        // in the recurrence, so the log density is merely deeply negative.
        let x_star = 0.5f64.sqrt();
        assert!(log_density(2, d(1.0), x_star).unwrap() < -30.0);
    }

    #[test]
    fn log_density_matches_direct_psi() {
        for &n in &[0usize, 1, 3, 9] {
            for &x in &[-2.3, 0.4, 1.9] {
                let p = psi(n, d(1.7), x).unwrap();
                assert_relative_eq!(
                    log_density(n, d(1.7), x).unwrap(),
                    (p * p).ln(),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn gauss_hermite_small_counts() {
        let one = gauss_hermite_nodes(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_relative_eq!(one[0].0, 0.0, epsilon = 1e-14);
        assert_relative_eq!(one[0].1, std::f64::consts::PI.sqrt(), epsilon = 1e-14);

        let two = gauss_hermite_nodes(2).unwrap();
        assert_relative_eq!(two[0].0, -0.5f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(two[1].0, 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn gauss_hermite_weight_sum_and_moments() {
        for &k in &[3usize, 8, 40, 120] {
            let nodes = gauss_hermite_nodes(k).unwrap();
            let total: f64 = nodes.iter().map(|&(_, w)| w).sum();
            assert_relative_eq!(total, std::f64::consts::PI.sqrt(), epsilon = 1e-10);
            // ∫ u² e^{-u²} du = √π/2.
            let m2: f64 = nodes.iter().map(|&(u, w)| w * u * u).sum();
            assert_relative_eq!(m2, 0.5 * std::f64::consts::PI.sqrt(), epsilon = 1e-10);
        }
    }

    #[test]
    fn length_scale_rejects_bad_values() {
        assert!(LengthScale::new(0.0).is_err());
        assert!(LengthScale::new(-2.0).is_err());
        assert!(LengthScale::new(f64::NAN).is_err());
        assert!(LengthScale::new(f64::INFINITY).is_err());
    }

    /// Naive textbook eigenfunction formula with explicit factorials, for
    /// cross-checks.
    fn psi_naive(n: usize, dv: f64, x: f64) -> f64 {
        let u = x * dv.sqrt();
        let mut fact = 1.0f64;
        for k in 1..=n {
            fact *= k as f64;
        }
        (dv / std::f64::consts::PI).powf(0.25)
            * (2.0f64.powi(n as i32) * fact).powf(-0.5)
            * (-0.5 * u * u).exp()
            * hermite_eval(n, u).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recurrence_matches_naive_formula(
            n in 0usize..=20,
            dv in 0.1f64..10.0,
            x in -4.0f64..4.0,
        ) {
            let fast = psi(n, d(dv), x).unwrap();
            let naive = psi_naive(n, dv, x);
            let scale = naive.abs().max(1e-3);
            prop_assert!((fast - naive).abs() / scale < 1e-12);
        }

        #[test]
        fn scaling_covariance(
            n in 0usize..=30,
            dv in 0.1f64..10.0,
            x in -4.0f64..4.0,
        ) {
            let lhs = psi(n, d(dv), x).unwrap();
            let rhs = dv.powf(0.25) * psi(n, d(1.0), x * dv.sqrt()).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn orthonormality_by_quadrature(
            n in 0usize..=50,
            m in 0usize..=50,
            dv in 0.1f64..10.0,
        ) {
            // ∫ psi_n psi_m dx reduces to ∫ e^{-u²} h̃_n h̃_m du, d-independent.
            let _ = dv;
            let nodes = gauss_hermite_nodes(default_node_count(n.max(m))).unwrap();
            let overlap: f64 = nodes
                .iter()
                .filter(|&&(_, w)| w > 0.0)
                .map(|&(u, w)| {
                    let h = hermite_normalized_all(n.max(m), u);
                    w * h[n] * h[m]
                })
                .sum();
            let expect = if n == m { 1.0 } else { 0.0 };
            prop_assert!((overlap - expect).abs() < 1e-10);
        }
    }
}
