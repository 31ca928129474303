//! Quantitative acceptance gate. Each test prints one `criterion N: PASS`
//! line (visible with `--nocapture`) or fails with the measured value in
//! the panic message.

use lsq_core::channels::{damped_fock_qfi, thermal_qfi};
use lsq_core::fockspace::{self, coherent_vector, displaced_squeezed_vector, FockVector};
use lsq_core::inference::{
    gamma_posterior, jeffreys_posterior, mc_benchmark, mle_estimate, mom_estimate, sample_position,
    EstimatorKind, SampleBatch,
};
use lsq_core::multimode::{
    bell_readout_msn, dense_two_mode_qfi, ghz_state, multimode_qfi, pair_state, sequence_state,
    vacuum_projection_scan, PairKind,
};
use lsq_core::qfi::{
    cfi_position, qfi_coherent, qfi_displaced_squeezed, qfi_fidelity_fd, qfi_fock,
    qfi_pure_numeric, sld_mixed,
};
use lsq_core::LengthScale;
use num_complex::Complex64;
use std::time::Instant;

fn ls(v: f64) -> LengthScale {
    LengthScale::new(v).unwrap()
}

#[test]
fn criterion_01_closed_form_qfi_triangle() {
    let start = Instant::now();
    for n in 0usize..=20 {
        for &dv in &[0.5f64, 1.0, 2.0] {
            let d = ls(dv);
            let analytic = qfi_fock(n, d);
            let cutoff = n + 9;

            let rho = FockVector::basis_state(n, d, cutoff).unwrap().to_density();
            let dm = fockspace::derivative_operator(d, cutoff);
            let drho = &dm.matrix * rho.matrix() - rho.matrix() * &dm.matrix;
            let (_, sld_value) = sld_mixed(&rho, &drho).unwrap();
            assert!(
                (sld_value - analytic).abs() <= 1.0e-8 * analytic,
                "criterion 1: FAIL — SLD QFI {sld_value} vs analytic {analytic} at n={n}, d={dv}"
            );

            let family = |dp: LengthScale| {
                Ok(FockVector::basis_state(n, dp, cutoff)?.to_density())
            };
            let h = 1.0e-4 * dv;
            let fd = qfi_fidelity_fd(family, d, h).unwrap().value;
            assert!(
                (fd - analytic).abs() <= 1.0e-4 * analytic,
                "criterion 1: FAIL — Bures FD QFI {fd} vs analytic {analytic} at n={n}, d={dv}"
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < 10.0,
        "criterion 1: FAIL — runtime {elapsed:.2}s exceeds 10s"
    );
    println!("criterion 1: PASS");
}

#[test]
fn criterion_02_gaussian_benchmarks() {
    let d = ls(1.3);
    for &alpha in &[0.0f64, 0.5, 1.5, 3.0] {
        let state = coherent_vector(Complex64::new(alpha, 0.0), d, 128).unwrap();
        let numeric = qfi_pure_numeric(&state).unwrap().value;
        let analytic = qfi_coherent(alpha, d);
        assert!(
            (numeric - analytic).abs() <= 1.0e-8 * analytic,
            "criterion 2: FAIL — coherent α={alpha}: numeric {numeric} vs analytic {analytic}"
        );
    }
    for &(alpha, big_d) in &[(0.0f64, 2.0f64), (0.7, 1.5), (1.2, 4.0)] {
        let state = displaced_squeezed_vector(alpha, big_d, d, 256).unwrap();
        let numeric = qfi_pure_numeric(&state).unwrap().value;
        let analytic = qfi_displaced_squeezed(alpha, big_d, d).unwrap();
        assert!(
            (numeric - analytic).abs() <= 1.0e-8 * analytic,
            "criterion 2: FAIL — displaced-squeezed (α={alpha}, D={big_d}): \
             numeric {numeric} vs analytic {analytic}"
        );
    }
    // Squeezed vacuum: QFI independent of the squeezing strength D.
    let reference = qfi_displaced_squeezed(0.0, 1.0, d).unwrap();
    for &big_d in &[1.0f64, 2.0, 5.0, 9.0] {
        let state = displaced_squeezed_vector(0.0, big_d, d, 256).unwrap();
        let numeric = qfi_pure_numeric(&state).unwrap().value;
        assert!(
            (numeric - reference).abs() <= 1.0e-8 * reference,
            "criterion 2: FAIL — squeezed vacuum D={big_d}: {numeric} vs D-independent {reference}"
        );
    }
    println!("criterion 2: PASS");
}

#[test]
fn criterion_03_position_measurement_optimality() {
    let d = ls(1.0);
    for n in 0usize..=20 {
        let state = FockVector::basis_state(n, d, n + 9).unwrap();
        let cfi = cfi_position(&state).unwrap().value;
        let qfi = qfi_fock(n, d);
        assert!(
            (cfi - qfi).abs() <= 1.0e-8 * qfi,
            "criterion 3: FAIL — Fock n={n}: CFI {cfi} vs QFI {qfi}"
        );
    }
    for &alpha in &[0.4f64, 1.0, 2.0] {
        let state = coherent_vector(Complex64::new(alpha, 0.0), d, 96).unwrap();
        let cfi = cfi_position(&state).unwrap().value;
        let qfi = qfi_coherent(alpha, d);
        assert!(
            (cfi - qfi).abs() <= 1.0e-8 * qfi,
            "criterion 3: FAIL — coherent α={alpha}: CFI {cfi} vs QFI {qfi}"
        );
    }
    // Imaginary displacement: the position readout loses information.
    let state = coherent_vector(Complex64::new(0.0, 1.0), d, 96).unwrap();
    let cfi = cfi_position(&state).unwrap().value;
    let qfi = qfi_pure_numeric(&state).unwrap().value;
    assert!(
        cfi < 0.9 * qfi,
        "criterion 3: FAIL — α=i: CFI {cfi} not 10% below QFI {qfi}"
    );
    println!("criterion 3: PASS");
}

#[test]
fn criterion_04_damping_channel() {
    let d = ls(1.0);
    let gamma = 1.0e-5;
    for n in 2usize..=6 {
        let base = damped_fock_qfi(n, 0.0, d).unwrap().report.value;
        let bumped = damped_fock_qfi(n, gamma, d).unwrap().report.value;
        let slope = (bumped - base) / gamma;
        let expect = -((n * n) as f64) / (d.get() * d.get());
        assert!(
            (slope - expect).abs() <= 0.05 * expect.abs(),
            "criterion 4: FAIL — n={n}: γ-slope {slope} vs −n²/d² = {expect}"
        );
    }
    let mut previous = f64::INFINITY;
    let mut g = 0.0f64;
    while g <= 0.3 + 1.0e-12 {
        let value = damped_fock_qfi(4, g, d).unwrap().report.value;
        assert!(
            value <= previous + 1.0e-10,
            "criterion 4: FAIL — QFI rose from {previous} to {value} at γ={g}"
        );
        previous = value;
        g += 0.05;
    }
    println!("criterion 4: PASS");
}

#[test]
fn criterion_05_thermal_state() {
    for &dv in &[0.5f64, 1.0, 2.0] {
        let d = ls(dv);
        let pure = thermal_qfi(0.0, d).unwrap().value;
        assert_eq!(
            pure,
            1.0 / (2.0 * dv * dv),
            "criterion 5: FAIL — thermal ξ=0 QFI {pure} differs from 1/(2d²)"
        );
        let bound = 1.0 / (dv * dv);
        let mut xi = 0.0f64;
        while xi <= 0.9 + 1.0e-12 {
            let value = thermal_qfi(xi, d).unwrap().value;
            assert!(
                value <= bound,
                "criterion 5: FAIL — thermal QFI {value} above 1/d² = {bound} at ξ={xi}, d={dv}"
            );
            xi += 0.1;
        }
    }
    println!("criterion 5: PASS");
}

#[test]
fn criterion_06_entangled_pairs() {
    let d = ls(1.0);
    let kinds = [
        PairKind::SwapSym,
        PairKind::SwapAntisym,
        PairKind::SuperPlus,
        PairKind::SuperMinus,
    ];
    for kind in kinds {
        for &(n, m) in &[(0usize, 4usize), (1, 6), (2, 7)] {
            let s = pair_state(kind, n, m, d, m + 10).unwrap();
            let q = multimode_qfi(&s).unwrap().value;
            let product = qfi_fock(n, d) + qfi_fock(m, d);
            assert!(
                (q - product).abs() <= 1.0e-9 * product,
                "criterion 6: FAIL — {kind:?} ({n},{m}): gap {} not 0",
                q - product
            );
        }
    }
    for kind in [PairKind::SuperMinus, PairKind::SwapSym] {
        for &(n, m) in &[(1usize, 3usize), (3, 5), (4, 6)] {
            let s = pair_state(kind, n, m, d, m + 10).unwrap();
            let q = multimode_qfi(&s).unwrap().value;
            let product = qfi_fock(n, d) + qfi_fock(m, d);
            assert!(
                q > product + 1.0e-6,
                "criterion 6: FAIL — {kind:?} ({n},{m}): QFI {q} not above product {product}"
            );
        }
    }
    // Sequence-state gap ratio against n²/d² at ℓ = 2, n = 80.
    let (ell, n) = (2usize, 80usize);
    let s = sequence_state(ell, n, d, n + 2 * ell + 10).unwrap();
    let q = multimode_qfi(&s).unwrap().value;
    let gap = q - 2.0 * qfi_fock(n, d);
    let ratio = gap / ((n * n) as f64);
    let target = 2.0 * ell as f64 / (2.0 * (2.0 * ell as f64 + 1.0));
    assert!(
        (ratio - target).abs() <= 0.1 * target,
        "criterion 6: FAIL — sequence ℓ={ell}, n={n}: gap ratio {ratio:.6} vs target {target} ± 10%"
    );
    println!("criterion 6: PASS");
}

#[test]
fn criterion_07_ghz_scaling() {
    let d = ls(1.0);
    let n = 1usize;
    let cutoff = n + 12;
    // Exact agreement with the dense two-mode brute force at N = 2.
    let s2 = ghz_state(2, n, d, cutoff).unwrap();
    let sparse = multimode_qfi(&s2).unwrap().value;
    let dense = dense_two_mode_qfi(&s2.to_dense_two_mode().unwrap(), d);
    assert!(
        (sparse - dense).abs() <= 1.0e-9 * dense,
        "criterion 7: FAIL — N=2 sparse {sparse} vs dense {dense}"
    );
    // Log-log slope of QFI vs N over N ∈ {2..6}.
    let points: Vec<(f64, f64)> = (2usize..=6)
        .map(|nn| {
            let s = ghz_state(nn, n, d, cutoff).unwrap();
            let q = multimode_qfi(&s).unwrap().value;
            ((nn as f64).ln(), q.ln())
        })
        .collect();
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    assert!(
        (slope - 2.0).abs() <= 0.05,
        "criterion 7: FAIL — log-log slope {slope:.4} vs 2.0 ± 0.05 over N ∈ {{2..6}}"
    );
    println!("criterion 7: PASS");
}

#[test]
fn criterion_08_bell_and_vacuum_readouts() {
    // Single-mode vacuum projection: derivative exactly 0 for odd n.
    let scan = vacuum_projection_scan(&[1, 3, 5, 7, 9], ls(1.5)).unwrap();
    for entry in &scan.entries {
        assert_eq!(
            entry.derivative, 0.0,
            "criterion 8: FAIL — odd n={} has nonzero derivative {}",
            entry.n, entry.derivative
        );
    }
    // Two-copy Bell readout at d = 2, n = 30.
    let n = 30usize;
    let readout = bell_readout_msn(n, ls(2.0), 4 * n + 32).unwrap();
    let msn = readout.msn.unwrap_or(0.0);
    let ratio = msn / ((n * n) as f64);
    assert!(
        (ratio - 1.0).abs() <= 0.25,
        "criterion 8: FAIL — msn/n² = {ratio:.3e} at d=2, n={n}, not within 25% of 1"
    );
    println!("criterion 8: PASS");
}

#[test]
fn criterion_09_estimation_monte_carlo() {
    let start = Instant::now();
    let (n, d, shots, reps, seed) = (3usize, ls(1.0), 10_000usize, 500usize, 42u64);

    let mle = mc_benchmark(n, d, shots, reps, EstimatorKind::Mle, seed).unwrap();
    assert!(
        (0.9..=1.1).contains(&mle.variance_over_crb),
        "criterion 9: FAIL — MLE variance/CRB {} outside [0.9, 1.1]",
        mle.variance_over_crb
    );
    assert!(
        mle.bias.abs() < 2.0 * mle.bias_stderr,
        "criterion 9: FAIL — MLE bias {} above 2×SEM {}",
        mle.bias,
        2.0 * mle.bias_stderr
    );

    let mom = mc_benchmark(n, d, shots, reps, EstimatorKind::Mom, seed).unwrap();
    assert!(
        (3.1..=3.8).contains(&mom.variance_over_crb),
        "criterion 9: FAIL — MOM variance/CRB {} outside [3.1, 3.8] (target 169/49 ≈ {:.4})",
        mom.variance_over_crb,
        mom.mom_predicted_ratio
    );
    assert!(
        mom.bias.abs() < 2.0 * mom.bias_stderr,
        "criterion 9: FAIL — MOM bias {} above 2×SEM {}",
        mom.bias,
        2.0 * mom.bias_stderr
    );

    // n = 1: the three estimators coincide exactly, replicate by replicate.
    for rep in 0..20u64 {
        let batch = sample_position(1, d, 200, seed + rep).unwrap();
        let mom1 = mom_estimate(&batch).unwrap().d_hat;
        let mle1 = mle_estimate(&batch).unwrap().d_hat;
        let bayes = jeffreys_posterior(&batch).unwrap().mean();
        assert!(
            mom1 == mle1 && mle1 == bayes,
            "criterion 9: FAIL — n=1 estimators differ: MOM {mom1}, MLE {mle1}, Jeffreys {bayes}"
        );
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < 300.0,
        "criterion 9: FAIL — runtime {elapsed:.1}s exceeds 5 min"
    );
    println!("criterion 9: PASS");
}

#[test]
fn criterion_10_gamma_conjugacy() {
    let d = ls(1.4);
    let batch = sample_position(1, d, 250, 7).unwrap();
    let m = batch.len() as f64;
    let sum_sq = batch.sum_sq();

    let (shape0, rate0) = (2.5f64, 0.8f64);
    let post = gamma_posterior(&batch, shape0, rate0).unwrap();
    assert_eq!(post.shape, 1.5 * m + shape0, "criterion 10: FAIL — shape");
    assert_eq!(post.rate, sum_sq + rate0, "criterion 10: FAIL — rate");

    // Empty batch: the posterior is the prior.
    let empty = SampleBatch::from_samples(1, vec![]).unwrap();
    let unchanged = gamma_posterior(&empty, shape0, rate0).unwrap();
    assert_eq!((unchanged.shape, unchanged.rate), (shape0, rate0));

    // Prior → Jeffreys (shape, rate → 0): posterior mean tends to the MLE.
    let mle = mle_estimate(&batch).unwrap().d_hat;
    let jeffreys = jeffreys_posterior(&batch).unwrap().mean();
    assert_eq!(
        jeffreys, mle,
        "criterion 10: FAIL — Jeffreys mean {jeffreys} vs MLE {mle}"
    );
    let nearly = gamma_posterior(&batch, 1.0e-9, 1.0e-9).unwrap().mean();
    assert!(
        (nearly - mle).abs() <= 1.0e-9 * mle,
        "criterion 10: FAIL — vanishing-prior mean {nearly} vs MLE {mle}"
    );
    println!("criterion 10: PASS");
}
