//! Command implementations: resolve flags, call the library, emit tables
//! and JSON reports.

use crate::format::{
    parse_range, parse_range_usize, read_sample_csv, samples_to_csv, sig17, write_atomic,
    write_report,
};
use crate::{ChannelArgs, CliError, EstimateArgs, McArgs, MultimodeArgs, QfiArgs, SampleArgs};
use lsq_core::channels::{damped_fock_qfi, damped_fock_state, thermal_qfi, thermal_state};
use lsq_core::fockspace::{
    self, coherent_vector, displaced_squeezed_vector, DensityOperator, FockVector,
};
use lsq_core::inference::{
    gamma_posterior, jeffreys_posterior, mc_benchmark, mle_estimate, mom_estimate, sample_position,
    EstimatorKind, SampleBatch, RNG_ALGORITHM,
};
use lsq_core::multimode::{
    bell_readout_msn, dense_two_mode_qfi, ghz_state, multimode_qfi, pair_state, sequence_state,
    vacuum_projection_scan, MultimodeVector, PairKind,
};
use lsq_core::qfi::{
    cfi_position, qfi_coherent, qfi_displaced_squeezed, qfi_fidelity_fd, qfi_fock,
    qfi_pure_numeric, sld_mixed,
};
use lsq_core::LengthScale;
use num_complex::Complex64;
use serde_json::json;

const SCHEMA: &str = "lsq-report/1";

fn length_scale(v: f64) -> Result<LengthScale, CliError> {
    Ok(LengthScale::new(v)?)
}

fn pair_kind(label: &str) -> Result<PairKind, CliError> {
    match label {
        "swap-sym" => Ok(PairKind::SwapSym),
        "swap-antisym" => Ok(PairKind::SwapAntisym),
        "super-plus" => Ok(PairKind::SuperPlus),
        "super-minus" => Ok(PairKind::SuperMinus),
        other => Err(CliError::Validation(format!("unknown pair kind `{other}`"))),
    }
}

fn estimator_kind(label: &str) -> Result<EstimatorKind, CliError> {
    label
        .parse::<EstimatorKind>()
        .map_err(|_| CliError::Validation(format!("unknown estimator `{label}`")))
}

/// One computed table row of the qfi/channel/multimode commands.
struct Row {
    value: f64,
    method: String,
    cutoff: usize,
    estimated_error: f64,
}

/// The probe families the `qfi` command accepts, with their resolved
/// parameters.
enum Family {
    Fock { n: usize },
    Coherent { alpha: Complex64 },
    DisplacedSqueezed { alpha: f64, squeeze: f64 },
    Damped { n: usize, gamma: f64 },
    Thermal { xi: f64 },
    Pair { kind: PairKind, n: usize, m: usize },
    Sequence { ell: usize, n: usize },
    Ghz { modes: usize, n: usize },
}

impl Family {
    fn from_args(args: &QfiArgs) -> Result<Self, CliError> {
        match args.state.as_str() {
            "fock" => Ok(Family::Fock { n: args.n }),
            "coherent" => Ok(Family::Coherent {
                alpha: Complex64::new(args.alpha, args.alpha_im),
            }),
            "displaced-squeezed" => Ok(Family::DisplacedSqueezed {
                alpha: args.alpha,
                squeeze: args.squeeze,
            }),
            "damped" => Ok(Family::Damped {
                n: args.n,
                gamma: args.gamma,
            }),
            "thermal" => Ok(Family::Thermal { xi: args.xi }),
            "pair" => Ok(Family::Pair {
                kind: pair_kind(&args.kind)?,
                n: args.n,
                m: args.m.ok_or_else(|| {
                    CliError::Validation("pair states need --m".into())
                })?,
            }),
            "sequence" => Ok(Family::Sequence {
                ell: args.ell,
                n: args.n,
            }),
            "ghz" => Ok(Family::Ghz {
                modes: args.modes,
                n: args.n,
            }),
            other => Err(CliError::Validation(format!(
                "unknown state family `{other}`"
            ))),
        }
    }

    /// Engine used when `--method auto` is requested, and the reference
    /// engine for `--verify`.
    fn default_method(&self) -> &'static str {
        match self {
            Family::Fock { .. }
            | Family::Coherent { .. }
            | Family::DisplacedSqueezed { .. }
            | Family::Thermal { .. } => "analytic",
            Family::Damped { .. } => "sld-eigen",
            Family::Pair { .. } | Family::Sequence { .. } | Family::Ghz { .. } => "pure-numeric",
        }
    }

    fn default_cutoff(&self) -> usize {
        match self {
            Family::Fock { n } => n + 9,
            Family::Coherent { alpha } => ((8.0 * alpha.norm_sqr()) as usize + 48).max(96),
            Family::DisplacedSqueezed { .. } => 256,
            Family::Damped { n, .. } => n + 8,
            Family::Thermal { xi } => thermal_cutoff(*xi),
            Family::Pair { n, m, .. } => *n.max(m) + 10,
            Family::Sequence { ell, n } => n + 2 * ell + 10,
            Family::Ghz { n, .. } => n + 12,
        }
    }

    fn single_mode_vector(&self, d: LengthScale, cutoff: usize) -> Result<FockVector, CliError> {
        match self {
            Family::Fock { n } => Ok(FockVector::basis_state(*n, d, cutoff)?),
            Family::Coherent { alpha } => Ok(coherent_vector(*alpha, d, cutoff)?),
            Family::DisplacedSqueezed { alpha, squeeze } => {
                Ok(displaced_squeezed_vector(*alpha, *squeeze, d, cutoff)?)
            }
            _ => Err(CliError::Validation(format!(
                "method not defined for state `{}`",
                self.label()
            ))),
        }
    }

    fn multimode_vector(
        &self,
        d: LengthScale,
        cutoff: usize,
    ) -> Result<MultimodeVector, CliError> {
        match self {
            Family::Pair { kind, n, m } => Ok(pair_state(*kind, *n, *m, d, cutoff)?),
            Family::Sequence { ell, n } => Ok(sequence_state(*ell, *n, d, cutoff)?),
            Family::Ghz { modes, n } => Ok(ghz_state(*modes, *n, d, cutoff)?),
            _ => Err(CliError::Validation(format!(
                "state `{}` is single-mode",
                self.label()
            ))),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Family::Fock { .. } => "fock",
            Family::Coherent { .. } => "coherent",
            Family::DisplacedSqueezed { .. } => "displaced-squeezed",
            Family::Damped { .. } => "damped",
            Family::Thermal { .. } => "thermal",
            Family::Pair { .. } => "pair",
            Family::Sequence { .. } => "sequence",
            Family::Ghz { .. } => "ghz",
        }
    }
}

/// Truncation at which the geometric thermal tail drops below 1e−14.
fn thermal_cutoff(xi: f64) -> usize {
    if xi <= 0.0 {
        return 16;
    }
    let c = (1.0e-14f64.ln() / xi.ln()).ceil() as usize;
    c.clamp(16, 4096)
}

/// SLD-engine QFI of a state family that is diagonal in the instantaneous
/// eigenbasis: ∂ρ = [D, ρ].
fn sld_qfi_of(rho: &DensityOperator) -> Result<f64, CliError> {
    let dm = fockspace::derivative_operator(rho.d(), rho.cutoff());
    let drho = &dm.matrix * rho.matrix() - rho.matrix() * &dm.matrix;
    let (_, value) = sld_mixed(rho, &drho)?;
    Ok(value)
}

fn qfi_row(
    family: &Family,
    method: &str,
    d: LengthScale,
    cutoff: usize,
) -> Result<Row, CliError> {
    let row = |value: f64, cutoff: usize, err: f64| Row {
        value,
        method: method.to_string(),
        cutoff,
        estimated_error: err,
    };
    match method {
        "analytic" => {
            let value = match family {
                Family::Fock { n } => qfi_fock(*n, d),
                Family::Coherent { alpha } => {
                    if alpha.im != 0.0 {
                        return Err(CliError::Validation(
                            "analytic coherent QFI requires a real displacement".into(),
                        ));
                    }
                    qfi_coherent(alpha.re, d)
                }
                Family::DisplacedSqueezed { alpha, squeeze } => {
                    qfi_displaced_squeezed(*alpha, *squeeze, d)?
                }
                Family::Thermal { xi } => thermal_qfi(*xi, d)?.value,
                _ => {
                    return Err(CliError::Validation(format!(
                        "no analytic QFI for state `{}`",
                        family.label()
                    )))
                }
            };
            Ok(row(value, 0, 0.0))
        }
        "pure-numeric" => {
            if matches!(
                family,
                Family::Pair { .. } | Family::Sequence { .. } | Family::Ghz { .. }
            ) {
                let state = family.multimode_vector(d, cutoff)?;
                let r = multimode_qfi(&state)?;
                Ok(row(r.value, r.cutoff, r.estimated_error))
            } else {
                let state = family.single_mode_vector(d, cutoff)?;
                let r = qfi_pure_numeric(&state)?;
                Ok(row(r.value, r.cutoff, r.estimated_error))
            }
        }
        "sld-eigen" => match family {
            Family::Damped { n, gamma } => {
                let rho = damped_fock_state(*n, *gamma, d, cutoff)?;
                Ok(row(sld_qfi_of(&rho)?, cutoff, 0.0))
            }
            Family::Thermal { xi } => {
                let rho = thermal_state(*xi, d, cutoff)?;
                Ok(row(sld_qfi_of(&rho)?, cutoff, 0.0))
            }
            _ => {
                let rho = family.single_mode_vector(d, cutoff)?.to_density();
                Ok(row(sld_qfi_of(&rho)?, cutoff, 0.0))
            }
        },
        "fidelity-fd" => {
            let h = 1.0e-4 * d.get();
            let fam = |dp: LengthScale| family.single_mode_vector(dp, cutoff).map_or_else(
                |e| Err(lsq_core::Error::Domain(format!("{e:?}"))),
                |s| Ok(s.to_density()),
            );
            let r = qfi_fidelity_fd(fam, d, h)?;
            Ok(row(r.value, r.cutoff, r.estimated_error))
        }
        "cfi-quadrature" => {
            let state = family.single_mode_vector(d, cutoff)?;
            let r = cfi_position(&state)?;
            Ok(row(r.value, r.cutoff, r.estimated_error))
        }
        other => Err(CliError::Validation(format!("unknown method `{other}`"))),
    }
}

/// Reference value and tolerance used by `--verify` for a given engine.
fn verify_row(
    family: &Family,
    row: &Row,
    d: LengthScale,
    cutoff: usize,
    tolerance: Option<f64>,
) -> Result<(), CliError> {
    let reference = match family {
        // Self-consistency under a deeper truncation for the mixed
        // channels without a per-γ closed form.
        Family::Damped { n, gamma } => {
            sld_qfi_of(&damped_fock_state(*n, *gamma, d, cutoff + 8)?)?
        }
        _ => qfi_row(family, family.default_method(), d, cutoff)?.value,
    };
    let tol = tolerance.unwrap_or(match row.method.as_str() {
        "fidelity-fd" => 1.0e-4,
        _ => 1.0e-8,
    });
    let deviation = (row.value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE);
    if deviation > tol {
        return Err(CliError::Tolerance(format!(
            "method {} value {} deviates from reference {} by {deviation:.3e} (> {tol:.1e}) at d = {}",
            row.method,
            row.value,
            reference,
            d.get()
        )));
    }
    Ok(())
}

pub fn cmd_qfi(args: &QfiArgs) -> Result<(), CliError> {
    let family = Family::from_args(args)?;
    let d_values = parse_range(&args.d)?;
    let cutoff = args.cutoff.unwrap_or_else(|| family.default_cutoff());
    let methods: Vec<String> = args
        .method
        .iter()
        .map(|m| {
            if m == "auto" {
                family.default_method().to_string()
            } else {
                m.clone()
            }
        })
        .collect();

    let mut results = Vec::new();
    println!("state d method qfi estimated_error");
    for &dv in &d_values {
        let d = length_scale(dv)?;
        for method in &methods {
            let row = qfi_row(&family, method, d, cutoff)?;
            if args.verify && method != family.default_method() {
                verify_row(&family, &row, d, cutoff, args.tolerance)?;
            }
            println!(
                "{} {} {} {} {:.3e}",
                family.label(),
                dv,
                row.method,
                row.value,
                row.estimated_error
            );
            results.push(json!({
                "d": dv,
                "method": row.method,
                "value": row.value,
                "cutoff": row.cutoff,
                "estimated_error": row.estimated_error,
            }));
        }
    }

    if let Some(path) = &args.out {
        let report = json!({
            "schema": SCHEMA,
            "command": "qfi",
            "config": {
                "state": family.label(),
                "n": args.n,
                "m": args.m,
                "alpha": args.alpha,
                "alpha_im": args.alpha_im,
                "squeeze": args.squeeze,
                "gamma": args.gamma,
                "xi": args.xi,
                "kind": args.kind,
                "ell": args.ell,
                "modes": args.modes,
                "d": args.d,
                "methods": methods,
                "cutoff": cutoff,
                "verify": args.verify,
                "tolerance": args.tolerance,
            },
            "results": results,
        });
        write_report(path, &report)?;
    }
    Ok(())
}

pub fn cmd_sample(args: &SampleArgs) -> Result<(), CliError> {
    if args.shots == 0 {
        return Err(CliError::Validation("--shots must be ≥ 1".into()));
    }
    let d = length_scale(args.d)?;
    let batch = sample_position(args.n, d, args.shots, args.seed)?;
    write_atomic(&args.out, samples_to_csv(&batch.samples).as_bytes())?;
    println!(
        "wrote {} samples to {} (n={} d={} seed={} sum_sq={})",
        batch.len(),
        args.out.display(),
        args.n,
        args.d,
        args.seed,
        sig17(batch.sum_sq())
    );
    if let Some(path) = &args.report {
        let report = json!({
            "schema": SCHEMA,
            "command": "sample",
            "config": {
                "n": args.n,
                "d": args.d,
                "shots": args.shots,
                "seed": args.seed,
                "out": args.out.display().to_string(),
            },
            "rng": RNG_ALGORITHM,
            "results": {
                "sum_sq": batch.sum_sq(),
                "generator": batch.generator,
            },
        });
        write_report(path, &report)?;
    }
    Ok(())
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let samples = read_sample_csv(&args.input)?;
    let batch = SampleBatch::from_samples(args.n, samples)?;
    let kind = estimator_kind(&args.estimator)?;

    let (d_hat, detail) = match kind {
        EstimatorKind::Mom => {
            let r = mom_estimate(&batch)?;
            (
                r.d_hat,
                json!({
                    "estimator": "mom",
                    "d_hat": r.d_hat,
                    "sample_count": r.sample_count,
                    "asymptotic_variance": r.asymptotic_variance,
                    "crb": r.crb,
                }),
            )
        }
        EstimatorKind::Mle => {
            let r = mle_estimate(&batch)?;
            (
                r.d_hat,
                json!({
                    "estimator": "mle",
                    "d_hat": r.d_hat,
                    "sample_count": r.sample_count,
                    "log_likelihood": r.log_likelihood,
                    "iterations": r.iterations,
                    "bracket": r.bracket,
                    "crb": r.crb,
                }),
            )
        }
        EstimatorKind::Jeffreys => {
            let posterior = match (args.prior_shape, args.prior_rate) {
                (None, None) => jeffreys_posterior(&batch)?,
                (Some(shape), Some(rate)) => gamma_posterior(&batch, shape, rate)?,
                _ => {
                    return Err(CliError::Validation(
                        "--prior-shape and --prior-rate must be given together".into(),
                    ))
                }
            };
            (
                posterior.mean(),
                json!({
                    "estimator": "jeffreys",
                    "d_hat": posterior.mean(),
                    "sample_count": batch.len(),
                    "posterior_shape": posterior.shape,
                    "posterior_rate": posterior.rate,
                }),
            )
        }
    };
    println!("d_hat={}", sig17(d_hat));

    if let Some(path) = &args.out {
        let report = json!({
            "schema": SCHEMA,
            "command": "estimate",
            "config": {
                "estimator": args.estimator,
                "n": args.n,
                "in": args.input.display().to_string(),
                "prior_shape": args.prior_shape,
                "prior_rate": args.prior_rate,
            },
            "results": detail,
        });
        write_report(path, &report)?;
    }
    Ok(())
}

pub fn cmd_mc(args: &McArgs) -> Result<(), CliError> {
    let kind = estimator_kind(&args.estimator)?;
    let d = length_scale(args.d)?;
    let report = mc_benchmark(args.n, d, args.shots, args.reps, kind, args.seed)?;
    println!(
        "estimator={} n={} d={} shots={} reps={} seed={}",
        args.estimator, args.n, args.d, args.shots, args.reps, args.seed
    );
    println!(
        "mean_estimate={} bias={} bias_stderr={}",
        sig17(report.mean_estimate),
        sig17(report.bias),
        sig17(report.bias_stderr)
    );
    println!(
        "variance={} crb={} variance_over_crb={} failures={}",
        sig17(report.variance),
        sig17(report.crb),
        sig17(report.variance_over_crb),
        report.failures
    );
    if let Some(path) = &args.out {
        let value = json!({
            "schema": SCHEMA,
            "command": "mc",
            "config": {
                "n": args.n,
                "d": args.d,
                "shots": args.shots,
                "reps": args.reps,
                "estimator": args.estimator,
                "seed": args.seed,
            },
            "rng": RNG_ALGORITHM,
            "results": report,
        });
        write_report(path, &value)?;
    }
    Ok(())
}

pub fn cmd_channel(args: &ChannelArgs) -> Result<(), CliError> {
    let d = length_scale(args.d)?;
    let mut results = Vec::new();
    match args.kind.as_str() {
        "damping" => {
            println!("gamma qfi first_order_prediction");
            for gamma in parse_range(&args.gamma)? {
                let r = damped_fock_qfi(args.n, gamma, d)?;
                println!(
                    "{} {} {}",
                    gamma, r.report.value, r.first_order_prediction
                );
                results.push(json!({
                    "gamma": gamma,
                    "qfi": r.report.value,
                    "first_order_prediction": r.first_order_prediction,
                    "cutoff": r.report.cutoff,
                }));
            }
        }
        "thermal" => {
            println!("xi qfi");
            for xi in parse_range(&args.xi)? {
                let r = thermal_qfi(xi, d)?;
                println!("{} {}", xi, r.value);
                results.push(json!({ "xi": xi, "qfi": r.value, "cutoff": r.cutoff }));
            }
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown channel type `{other}`"
            )))
        }
    }
    if let Some(path) = &args.out {
        let report = json!({
            "schema": SCHEMA,
            "command": "channel",
            "config": {
                "type": args.kind,
                "n": args.n,
                "gamma": args.gamma,
                "xi": args.xi,
                "d": args.d,
            },
            "results": results,
        });
        write_report(path, &report)?;
    }
    Ok(())
}

pub fn cmd_multimode(args: &MultimodeArgs) -> Result<(), CliError> {
    let d = length_scale(args.d)?;
    let mut results = Vec::new();
    match args.readout.as_deref() {
        Some("bell") => {
            let n_values = parse_range_usize(&args.n)?;
            println!("n average derivative variance msn leakage");
            for &n in &n_values {
                let cutoff = args.cutoff.unwrap_or(4 * n + 32);
                let r = bell_readout_msn(n, d, cutoff)?;
                println!(
                    "{} {} {} {} {} {:.3e}",
                    n,
                    r.average,
                    r.derivative,
                    r.variance,
                    r.msn.map_or("none".to_string(), |v| v.to_string()),
                    r.leakage
                );
                results.push(json!({
                    "n": n,
                    "average": r.average,
                    "derivative": r.derivative,
                    "variance": r.variance,
                    "msn": r.msn,
                    "leakage": r.leakage,
                }));
            }
        }
        Some("vacuum") => {
            let n_values = parse_range_usize(&args.n)?;
            let scan = vacuum_projection_scan(&n_values, d)?;
            println!("n average derivative variance msn");
            for e in &scan.entries {
                println!(
                    "{} {} {} {} {}",
                    e.n,
                    e.average,
                    e.derivative,
                    e.variance,
                    e.msn.map_or("none".to_string(), |v| v.to_string())
                );
                results.push(json!({
                    "n": e.n,
                    "average": e.average,
                    "derivative": e.derivative,
                    "variance": e.variance,
                    "msn": e.msn,
                }));
            }
        }
        Some(other) => {
            return Err(CliError::Validation(format!(
                "unknown readout `{other}` (expected bell or vacuum)"
            )))
        }
        None => {
            let n_values = parse_range_usize(&args.n)?;
            println!("state n qfi dense_check");
            for &n in &n_values {
                let state = build_multimode(args, n, d)?;
                let qfi = multimode_qfi(&state)?.value;
                let dense = if state.mode_count() == 2 {
                    Some(dense_two_mode_qfi(&state.to_dense_two_mode()?, d))
                } else {
                    None
                };
                println!(
                    "{} {} {} {}",
                    args.state,
                    n,
                    qfi,
                    dense.map_or("none".to_string(), |v| v.to_string())
                );
                results.push(json!({
                    "state": args.state,
                    "n": n,
                    "qfi": qfi,
                    "dense_check": dense,
                }));
            }
        }
    }
    if let Some(path) = &args.out {
        let report = json!({
            "schema": SCHEMA,
            "command": "multimode",
            "config": {
                "readout": args.readout,
                "state": args.state,
                "n": args.n,
                "m": args.m,
                "kind": args.kind,
                "ell": args.ell,
                "modes": args.modes,
                "d": args.d,
                "cutoff": args.cutoff,
            },
            "results": results,
        });
        write_report(path, &report)?;
    }
    Ok(())
}

fn build_multimode(
    args: &MultimodeArgs,
    n: usize,
    d: LengthScale,
) -> Result<MultimodeVector, CliError> {
    match args.state.as_str() {
        "pair" => {
            let m = args
                .m
                .ok_or_else(|| CliError::Validation("pair states need --m".into()))?;
            let cutoff = args.cutoff.unwrap_or(n.max(m) + 10);
            Ok(pair_state(pair_kind(&args.kind)?, n, m, d, cutoff)?)
        }
        "sequence" => {
            let cutoff = args.cutoff.unwrap_or(n + 2 * args.ell + 10);
            Ok(sequence_state(args.ell, n, d, cutoff)?)
        }
        "ghz" => {
            let cutoff = args.cutoff.unwrap_or(n + 12);
            Ok(ghz_state(args.modes, n, d, cutoff)?)
        }
        other => Err(CliError::Validation(format!(
            "unknown multimode state `{other}`"
        ))),
    }
}
