//! Entangled multi-oscillator probes and two-copy readouts.
//!
//! General-N states are kept in a sparse superposition-of-products form:
//! each branch is a complex weight times a product of single-mode vectors.
//! The multimode QFI is 4·Var(Σ_j A_j)/d² with A the scale-flow generator,
//! evaluated exactly from pairwise branch expectations, so a GHZ-like state
//! at N = 6 never needs the dense 6-mode tensor. Dense two-mode arithmetic
//! is retained as an independent oracle.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fockspace;
use crate::qfi::{QfiMethod, QfiReport};
use crate::special::{HermiteOrder, LengthScale};
use crate::{Error, Result};

/// One product branch: weight · f_1 ⊗ f_2 ⊗ … ⊗ f_N.
#[derive(Debug, Clone)]
pub struct Branch {
    pub weight: Complex64,
    pub factors: Vec<DVector<Complex64>>,
}

/// Superposition of product branches over N modes, all in the basis at `d`.
#[derive(Debug, Clone)]
pub struct MultimodeVector {
    d: LengthScale,
    mode_count: usize,
    cutoff: usize,
    branches: Vec<Branch>,
}

impl MultimodeVector {
    pub fn new(d: LengthScale, branches: Vec<Branch>) -> Result<Self> {
        let first = branches
            .first()
            .ok_or_else(|| Error::Domain("state needs at least one branch".into()))?;
        let mode_count = first.factors.len();
        let cutoff = first.factors[0].len();
        for b in &branches {
            if b.factors.len() != mode_count {
                return Err(Error::Domain("branches disagree on mode count".into()));
            }
            if b.factors.iter().any(|f| f.len() != cutoff) {
                return Err(Error::CutoffMismatch(cutoff, 0));
            }
        }
        Ok(Self {
            d,
            mode_count,
            cutoff,
            branches,
        })
    }

    pub fn d(&self) -> LengthScale {
        self.d
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// ⟨Ψ|Ψ⟩ from the branch Gram matrix.
    pub fn norm_sqr(&self) -> f64 {
        let mut total = Complex64::new(0.0, 0.0);
        for p in &self.branches {
            for q in &self.branches {
                let mut ov = p.weight.conj() * q.weight;
                for j in 0..self.mode_count {
                    ov *= p.factors[j].dotc(&q.factors[j]);
                }
                total += ov;
            }
        }
        total.re
    }

    /// Dense C×C amplitude matrix for N = 2 (row = mode 1, column = mode 2).
    pub fn to_dense_two_mode(&self) -> Result<DMatrix<Complex64>> {
        if self.mode_count != 2 {
            return Err(Error::Domain(format!(
                "dense form only for 2 modes, state has {}",
                self.mode_count
            )));
        }
        let mut amps = DMatrix::<Complex64>::zeros(self.cutoff, self.cutoff);
        for b in &self.branches {
            amps += &b.factors[0] * b.factors[1].transpose() * b.weight;
        }
        Ok(amps)
    }
}

/// Which maximally entangled pair construction to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    /// (|n,m⟩ + |m,n⟩)/√2
    SwapSym,
    /// (|n,m⟩ − |m,n⟩)/√2
    SwapAntisym,
    /// (|n⟩⊗|n⟩ + |m⟩⊗|m⟩)/√2
    SuperPlus,
    /// (|n⟩⊗|n⟩ − |m⟩⊗|m⟩)/√2
    SuperMinus,
}

fn basis_vec(n: usize, cutoff: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(cutoff);
    v[n] = Complex64::new(1.0, 0.0);
    v
}

/// Two-mode entangled pair over eigenstates n and m.
pub fn pair_state(
    kind: PairKind,
    n: HermiteOrder,
    m: HermiteOrder,
    d: LengthScale,
    cutoff: usize,
) -> Result<MultimodeVector> {
    if n == m {
        return Err(Error::Domain(
            "pair constructions need distinct excitations n ≠ m".into(),
        ));
    }
    if cutoff < n.max(m) + 8 {
        return Err(Error::Domain(format!(
            "cutoff {cutoff} below max(n,m)+8 = {}",
            n.max(m) + 8
        )));
    }
    let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let branches = match kind {
        PairKind::SwapSym | PairKind::SwapAntisym => {
            let sign = if kind == PairKind::SwapSym { 1.0 } else { -1.0 };
            vec![
                Branch {
                    weight: w,
                    factors: vec![basis_vec(n, cutoff), basis_vec(m, cutoff)],
                },
                Branch {
                    weight: w * sign,
                    factors: vec![basis_vec(m, cutoff), basis_vec(n, cutoff)],
                },
            ]
        }
        PairKind::SuperPlus | PairKind::SuperMinus => {
            let sign = if kind == PairKind::SuperPlus { 1.0 } else { -1.0 };
            vec![
                Branch {
                    weight: w,
                    factors: vec![basis_vec(n, cutoff), basis_vec(n, cutoff)],
                },
                Branch {
                    weight: w * sign,
                    factors: vec![basis_vec(m, cutoff), basis_vec(m, cutoff)],
                },
            ]
        }
    };
    MultimodeVector::new(d, branches)
}

/// Two-mode sequence state (2ℓ+1)^{-1/2} Σ_{j=−ℓ}^{ℓ} (−1)^{δ_{j0}} |ψ_{n+2j}⟩^{⊗2}.
pub fn sequence_state(
    ell: usize,
    n: HermiteOrder,
    d: LengthScale,
    cutoff: usize,
) -> Result<MultimodeVector> {
    if n <= 2 * ell {
        return Err(Error::Domain(format!(
            "sequence state needs n > 2ℓ, got n = {n}, ℓ = {ell}"
        )));
    }
    if cutoff < n + 2 * ell + 8 {
        return Err(Error::Domain(format!(
            "cutoff {cutoff} below n + 2ℓ + 8 = {}",
            n + 2 * ell + 8
        )));
    }
    let scale = 1.0 / ((2 * ell + 1) as f64).sqrt();
    let mut branches = Vec::with_capacity(2 * ell + 1);
    for j in -(ell as isize)..=(ell as isize) {
        let k = (n as isize + 2 * j) as usize;
        let sign = if j == 0 { -1.0 } else { 1.0 };
        branches.push(Branch {
            weight: Complex64::new(sign * scale, 0.0),
            factors: vec![basis_vec(k, cutoff), basis_vec(k, cutoff)],
        });
    }
    MultimodeVector::new(d, branches)
}

/// GHZ-like two-branch state over N modes: with b± = (|ψ_n⟩ ± i|ψ_{n+2}⟩)/√2,
/// the state (b₊^{⊗N} + b₋^{⊗N})/√2. Expected excitation N(n+1); the
/// branch-conjugate symmetry keeps the N-dimensional wavefunction real.
pub fn ghz_state(
    mode_count: usize,
    n: HermiteOrder,
    d: LengthScale,
    cutoff: usize,
) -> Result<MultimodeVector> {
    if mode_count == 0 {
        return Err(Error::Domain("need at least one mode".into()));
    }
    if cutoff < n + 10 {
        return Err(Error::Domain(format!(
            "cutoff {cutoff} below n + 10 = {}",
            n + 10
        )));
    }
    let i = Complex64::new(0.0, 1.0);
    let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut plus = basis_vec(n, cutoff);
    let mut minus = basis_vec(n, cutoff);
    plus += basis_vec(n + 2, cutoff) * i;
    minus -= basis_vec(n + 2, cutoff) * i;
    plus *= half;
    minus *= half;
    let branches = vec![
        Branch {
            weight: half,
            factors: vec![plus; mode_count],
        },
        Branch {
            weight: half,
            factors: vec![minus; mode_count],
        },
    ];
    MultimodeVector::new(d, branches)
}

/// Exact multimode QFI 4·Var(Σ_j A_j)/d² from pairwise branch expectations
/// of the scale generator A and A², A⊗A across modes.
pub fn multimode_qfi(state: &MultimodeVector) -> Result<QfiReport> {
    let c = state.cutoff();
    let nmodes = state.mode_count;
    let a = fockspace::scale_generator(c);
    let a_sq = &a.matrix * &a.matrix;

    // Per branch pair: single-mode overlaps and matrix elements of A, A².
    let nb = state.branches.len();
    let mut norm = Complex64::new(0.0, 0.0);
    let mut x_mean = Complex64::new(0.0, 0.0);
    let mut x_sq = Complex64::new(0.0, 0.0);
    for p in 0..nb {
        for q in 0..nb {
            let bp = &state.branches[p];
            let bq = &state.branches[q];
            let w = bp.weight.conj() * bq.weight;
            let mut s = vec![Complex64::new(0.0, 0.0); nmodes];
            let mut av = vec![Complex64::new(0.0, 0.0); nmodes];
            let mut av2 = vec![Complex64::new(0.0, 0.0); nmodes];
            for j in 0..nmodes {
                s[j] = bp.factors[j].dotc(&bq.factors[j]);
                av[j] = bp.factors[j].dotc(&(&a.matrix * &bq.factors[j]));
                av2[j] = bp.factors[j].dotc(&(&a_sq * &bq.factors[j]));
            }
            let prod_excluding = |skip: &[usize]| -> Complex64 {
                let mut acc = Complex64::new(1.0, 0.0);
                for (j, sv) in s.iter().enumerate() {
                    if !skip.contains(&j) {
                        acc *= *sv;
                    }
                }
                acc
            };
            norm += w * prod_excluding(&[]);
            for j in 0..nmodes {
                x_mean += w * av[j] * prod_excluding(&[j]);
                x_sq += w * av2[j] * prod_excluding(&[j]);
                for k in 0..nmodes {
                    if k != j {
                        x_sq += w * av[j] * av[k] * prod_excluding(&[j, k]);
                    }
                }
            }
        }
    }
    let norm = norm.re;
    if norm < 1.0e-12 {
        return Err(Error::NotNormalized(1.0));
    }
    let mean = x_mean / Complex64::new(norm, 0.0);
    let second = x_sq.re / norm;
    let var = second - mean.norm_sqr();
    let d2 = state.d.get() * state.d.get();
    Ok(QfiReport {
        value: 4.0 * var / d2,
        method: QfiMethod::PureNumeric,
        cutoff: c,
        estimated_error: 1.0e-12 * (4.0 * var / d2).abs(),
    })
}

/// Dense two-mode pure-state QFI oracle:
/// 4(‖(D₁+D₂)Ψ‖² − |⟨Ψ|(D₁+D₂)Ψ⟩|²) on a C×C amplitude matrix.
pub fn dense_two_mode_qfi(amps: &DMatrix<Complex64>, d: LengthScale) -> f64 {
    let c = amps.nrows();
    let dm = fockspace::derivative_operator(d, c);
    // Mode 2 action is on the right by Dᵀ; D is real antisymmetric.
    let dpsi = &dm.matrix * amps + amps * dm.matrix.transpose();
    let norm: f64 = amps.iter().map(|v| v.norm_sqr()).sum();
    let grad: f64 = dpsi.iter().map(|v| v.norm_sqr()).sum();
    let mut mixed = Complex64::new(0.0, 0.0);
    for (x, y) in amps.iter().zip(dpsi.iter()) {
        mixed += x.conj() * y;
    }
    4.0 * (grad / norm - (mixed / Complex64::new(norm, 0.0)).norm_sqr())
}

/// Result of the two-copy Bell-projection readout on |ψ_n(d)⟩^{⊗2}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BellReadout {
    pub average: f64,
    pub derivative: f64,
    pub variance: f64,
    /// (∂⟨A⟩)²/Var(A); `None` when the variance vanishes.
    pub msn: Option<f64>,
    /// Truncation-edge mass of the rotated reference state.
    pub leakage: f64,
}

/// Mean-square-noise readout of the projection onto the two-copy reference
/// e^{π/4(a†₁a₂ − a†₂a₁)} e^{iπ/2 a†₂a₂} |ψ_0(1)⟩^{⊗2}, probe |ψ_n(d)⟩^{⊗2}.
///
/// The beam splitter and phase rotate the oscillator modes *at the current
/// d*, so the reference carries d-dependence through the vacuum expansion
/// on both sides of the apparatus; the derivative below includes it.
pub fn bell_readout_msn(n: HermiteOrder, d: LengthScale, cutoff: usize) -> Result<BellReadout> {
    if cutoff < 4 * n + 32 {
        return Err(Error::Domain(format!(
            "cutoff {cutoff} below 4n + 32 = {}",
            4 * n + 32
        )));
    }
    let cutoff = if cutoff % 2 == 0 { cutoff } else { cutoff + 1 };
    let v = fockspace::vacuum_in_basis(d, cutoff)?;
    let dm = fockspace::derivative_operator(d, cutoff);
    // Coefficients of the fixed physical vacuum flow with dc/dd = −D c.
    let vdot = -(&dm.matrix * v.coeffs());

    let phase = |w: &DVector<Complex64>| -> DVector<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        DVector::from_iterator(cutoff, w.iter().enumerate().map(|(k, c)| c * i.powu(k as u32)))
    };
    let v2 = phase(v.coeffs());
    let psi = v.coeffs() * v2.transpose();
    let dpsi = &vdot * v2.transpose() + v.coeffs() * phase(&vdot).transpose();

    let phi = beam_splitter_exp(&psi, std::f64::consts::FRAC_PI_4);
    let phi_dot = beam_splitter_exp(&dpsi, std::f64::consts::FRAC_PI_4);

    let mut leakage = 0.0;
    for k in 0..cutoff {
        for edge in 0..2 {
            leakage += phi[(cutoff - 1 - edge, k)].norm_sqr();
            if k < cutoff - 2 {
                leakage += phi[(k, cutoff - 1 - edge)].norm_sqr();
            }
        }
    }
    let norm: f64 = phi.iter().map(|c| c.norm_sqr()).sum();
    leakage += (norm - 1.0).abs();
    if leakage > 1.0e-8 {
        return Err(Error::CutoffInsufficient {
            cutoff,
            leakage,
            tolerance: 1.0e-8,
        });
    }

    let overlap = phi[(n, n)];
    let doverlap = phi_dot[(n, n)];
    let average = overlap.norm_sqr();
    let derivative = 2.0 * (overlap.conj() * doverlap).re;
    let variance = (average * (1.0 - average)).max(0.0);
    let msn = if variance > 0.0 {
        Some(derivative * derivative / variance)
    } else {
        None
    };
    Ok(BellReadout {
        average,
        derivative,
        variance,
        msn,
        leakage,
    })
}

/// exp(θ·(a†₁a₂ − a†₂a₁)) applied to a two-mode amplitude matrix, by
/// sub-stepped Taylor series (matrix-free: the generator couples only
/// neighboring excitation pairs).
fn beam_splitter_exp(amps: &DMatrix<Complex64>, theta: f64) -> DMatrix<Complex64> {
    let c = amps.nrows();
    let apply_gen = |x: &DMatrix<Complex64>| -> DMatrix<Complex64> {
        let mut y = DMatrix::<Complex64>::zeros(c, c);
        for m in 0..c {
            for k in 0..c {
                let mut acc = Complex64::new(0.0, 0.0);
                if m >= 1 && k + 1 < c {
                    acc += x[(m - 1, k + 1)]
                        * ((m as f64) * (k as f64 + 1.0)).sqrt();
                }
                if m + 1 < c && k >= 1 {
                    acc -= x[(m + 1, k - 1)]
                        * ((m as f64 + 1.0) * (k as f64)).sqrt();
                }
                y[(m, k)] = acc;
            }
        }
        y
    };
    let norm_bound = 2.0 * c as f64;
    let substeps = (theta.abs() * norm_bound).ceil().max(1.0) as usize;
    let dt = theta / substeps as f64;
    let mut state = amps.clone();
    for _ in 0..substeps {
        let mut acc = state.clone();
        let mut term = state;
        for order in 1..=40 {
            term = apply_gen(&term) * Complex64::new(dt / order as f64, 0.0);
            acc += &term;
            if term.norm() < 1.0e-16 * acc.norm() {
                break;
            }
        }
        state = acc;
    }
    state
}

/// One row of a single-mode projective-readout scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanEntry {
    pub n: usize,
    pub average: f64,
    pub derivative: f64,
    pub variance: f64,
    pub msn: Option<f64>,
}

/// Scan of moment-readout quantities over probe excitations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReadoutScan {
    pub observable: String,
    pub d: LengthScale,
    pub cutoff: usize,
    pub entries: Vec<ScanEntry>,
}

/// Mean-square-noise scan for the single-mode vacuum projection
/// A = |ψ_0(1)⟩⟨ψ_0(1)| on probes |ψ_n(d)⟩: ⟨A⟩ = v_n² with v the vacuum
/// expansion at d, derivative −2 v_n (Dv)_n. Exactly zero for odd n.
pub fn vacuum_projection_scan(n_list: &[usize], d: LengthScale) -> Result<ReadoutScan> {
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let mut cutoff = (2 * n_max + 32).max(48);
    if cutoff % 2 == 1 {
        cutoff += 1;
    }
    let v = fockspace::vacuum_in_basis(d, cutoff)?;
    let dm = fockspace::derivative_operator(d, cutoff);
    let dv = &dm.matrix * v.coeffs();
    let mut entries = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n >= cutoff {
            return Err(Error::Domain(format!(
                "excitation {n} does not fit cutoff {cutoff}"
            )));
        }
        let vn = v.coeffs()[n].re;
        let average = vn * vn;
        let derivative = -2.0 * vn * dv[n].re;
        let variance = (average * (1.0 - average)).max(0.0);
        let msn = if variance > 0.0 {
            Some(derivative * derivative / variance)
        } else {
            None
        };
        entries.push(ScanEntry {
            n,
            average,
            derivative,
            variance,
            msn,
        });
    }
    Ok(ReadoutScan {
        observable: "vacuum-projection".into(),
        d,
        cutoff,
        entries,
    })
}
