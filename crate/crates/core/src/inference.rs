//! Position-measurement sampling and estimation of the length scale.
//!
//! Sampling inverts a tabulated CDF (deterministic given the seed), and the
//! estimators are the method of moments, a bracketed maximum-likelihood
//! search, and the gamma conjugate posterior that exists for the first
//! excited state. A seeded Monte Carlo harness checks estimator variance
//! against the Cramér-Rao bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::qfi::qfi_fock;
use crate::special::{self, HermiteOrder, LengthScale};
use crate::{Error, Result};

/// The pinned RNG algorithm, recorded in outputs for reproducibility.
pub const RNG_ALGORITHM: &str = "chacha12";

/// M position outcomes with provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleBatch {
    pub n: HermiteOrder,
    pub d_true: Option<LengthScale>,
    pub samples: Vec<f64>,
    pub seed: Option<u64>,
    pub generator: String,
}

impl SampleBatch {
    /// Wrap external data (no generator provenance). An empty batch is
    /// allowed: point estimators reject it, the conjugate update returns
    /// the prior.
    pub fn from_samples(n: HermiteOrder, samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|q| !q.is_finite()) {
            return Err(Error::BadBatch("non-finite sample".into()));
        }
        Ok(Self {
            n,
            d_true: None,
            samples,
            seed: None,
            generator: "external".into(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sum_sq(&self) -> f64 {
        self.samples.iter().map(|q| q * q).sum()
    }
}

/// Which estimator produced a point estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    Mom,
    Mle,
    /// Posterior mean under the Jeffreys prior (first excited state only).
    Jeffreys,
}

impl std::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EstimatorKind::Mom => "mom",
            EstimatorKind::Mle => "mle",
            EstimatorKind::Jeffreys => "jeffreys",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mom" => Ok(Self::Mom),
            "mle" => Ok(Self::Mle),
            "jeffreys" => Ok(Self::Jeffreys),
            other => Err(Error::Domain(format!("unknown estimator {other:?}"))),
        }
    }
}

/// A point estimate with diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateReport {
    pub kind: EstimatorKind,
    pub d_hat: f64,
    pub sample_count: usize,
    pub log_likelihood: Option<f64>,
    pub iterations: usize,
    pub bracket: Option<(f64, f64)>,
    /// Delta-method asymptotic variance (method of moments only).
    pub asymptotic_variance: Option<f64>,
    /// 1/(M·QFI) at the point estimate.
    pub crb: Option<f64>,
}

/// Gamma distribution in shape/rate form.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GammaPosterior {
    pub shape: f64,
    pub rate: f64,
}

impl GammaPosterior {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0) || !(rate > 0.0) {
            return Err(Error::Domain(format!(
                "gamma parameters must be positive, got shape {shape}, rate {rate}"
            )));
        }
        Ok(Self { shape, rate })
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }
}

const TAIL_TOL: f64 = 1.0e-12;
const MAX_WIDENINGS: usize = 8;

/// Tabulated-CDF inverse sampler for the density psi(n, d, x)².
///
/// The CDF is integrated by composite Simpson on a uniform grid over
/// [−x_max, x_max]; the starting half-width √((4n+6)/d) is doubled until
/// the missing tail mass is below 1e−12. The inverse is a Fritsch–Carlson
/// monotone cubic through (CDF, x) with exact slopes 1/pdf, so draws are
/// smooth in the uniform variate and deterministic given the seed.
#[derive(Debug, Clone)]
pub struct PositionSampler {
    n: HermiteOrder,
    d: LengthScale,
    xs: Vec<f64>,
    cdf: Vec<f64>,
    slopes: Vec<f64>,
}

impl PositionSampler {
    pub fn new(n: HermiteOrder, d: LengthScale) -> Result<Self> {
        let mut x_max = ((4.0 * n as f64 + 6.0) / d.get()).sqrt();
        for widening in 0..=MAX_WIDENINGS {
            let (xs, pdf, cdf) = tabulate_cdf(n, d, x_max)?;
            let total = *cdf.last().unwrap();
            if 1.0 - total <= TAIL_TOL {
                return Self::from_table(n, d, xs, pdf, cdf, total);
            }
            if widening == MAX_WIDENINGS {
                return Err(Error::QuadratureFailure(format!(
                    "tail mass {:.3e} above {TAIL_TOL:.1e} after {MAX_WIDENINGS} widenings",
                    1.0 - total
                )));
            }
            x_max *= 2.0;
        }
        unreachable!()
    }

    fn from_table(
        n: HermiteOrder,
        d: LengthScale,
        xs: Vec<f64>,
        pdf: Vec<f64>,
        cdf: Vec<f64>,
        total: f64,
    ) -> Result<Self> {
        let k = xs.len();
        // Normalize, then build monotone slopes dx/du with u the normalized
        // CDF: exact value 1/pdf, limited by three times the neighboring
        // secants so the cubic stays monotone even across density zeros.
        let cdf: Vec<f64> = cdf.iter().map(|c| (c / total).clamp(0.0, 1.0)).collect();
        let mut slopes = vec![0.0f64; k];
        for i in 0..k {
            let exact = if pdf[i] > 0.0 {
                total / pdf[i]
            } else {
                f64::INFINITY
            };
            let left = if i > 0 {
                let du = cdf[i] - cdf[i - 1];
                if du > 0.0 {
                    (xs[i] - xs[i - 1]) / du
                } else {
                    0.0
                }
            } else {
                f64::INFINITY
            };
            let right = if i + 1 < k {
                let du = cdf[i + 1] - cdf[i];
                if du > 0.0 {
                    (xs[i + 1] - xs[i]) / du
                } else {
                    0.0
                }
            } else {
                f64::INFINITY
            };
            let cap = 3.0 * left.min(right);
            slopes[i] = exact.min(cap).max(0.0);
            if !slopes[i].is_finite() {
                slopes[i] = 0.0;
            }
        }
        Ok(Self {
            n,
            d,
            xs,
            cdf,
            slopes,
        })
    }

    pub fn n(&self) -> HermiteOrder {
        self.n
    }

    pub fn d(&self) -> LengthScale {
        self.d
    }

    /// Quantile function: monotone-cubic inverse of the tabulated CDF.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        // Last index with cdf ≤ u.
        let mut lo = 0usize;
        let mut hi = self.cdf.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cdf[mid] <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let du = self.cdf[hi] - self.cdf[lo];
        if du <= 0.0 {
            return self.xs[lo];
        }
        let t = (u - self.cdf[lo]) / du;
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        h00 * self.xs[lo]
            + h10 * du * self.slopes[lo]
            + h01 * self.xs[hi]
            + h11 * du * self.slopes[hi]
    }

    /// CDF value at x (for goodness-of-fit checks), by interpolation.
    pub fn cdf_at(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= *self.xs.last().unwrap() {
            return 1.0;
        }
        let step = self.xs[1] - self.xs[0];
        let idx = (((x - self.xs[0]) / step) as usize).min(self.xs.len() - 2);
        let t = (x - self.xs[idx]) / step;
        self.cdf[idx] + t * (self.cdf[idx + 1] - self.cdf[idx])
    }

    /// Draw `count` outcomes with the pinned RNG and the given seed.
    pub fn draw(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..count).map(|_| self.quantile(rng.gen::<f64>())).collect()
    }
}

fn tabulate_cdf(
    n: HermiteOrder,
    d: LengthScale,
    x_max: f64,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let intervals = (256 * (n + 1)).max(2048);
    let step = 2.0 * x_max / intervals as f64;
    let pdf_at = |x: f64| -> Result<f64> {
        let v = special::psi(n, d, x)?;
        Ok(v * v)
    };
    let mut xs = Vec::with_capacity(intervals + 1);
    let mut pdf = Vec::with_capacity(intervals + 1);
    for i in 0..=intervals {
        let x = -x_max + step * i as f64;
        xs.push(x);
        pdf.push(pdf_at(x)?);
    }
    let mut cdf = Vec::with_capacity(intervals + 1);
    cdf.push(0.0);
    let mut acc = 0.0;
    for i in 0..intervals {
        let mid = pdf_at(0.5 * (xs[i] + xs[i + 1]))?;
        acc += step / 6.0 * (pdf[i] + 4.0 * mid + pdf[i + 1]);
        cdf.push(acc);
    }
    Ok((xs, pdf, cdf))
}

/// Draw M i.i.d. position outcomes from psi(n, d, x)².
pub fn sample_position(
    n: HermiteOrder,
    d: LengthScale,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::BadBatch("sample count must be ≥ 1".into()));
    }
    let sampler = PositionSampler::new(n, d)?;
    Ok(SampleBatch {
        n,
        d_true: Some(d),
        samples: sampler.draw(count, seed),
        seed: Some(seed),
        generator: format!("{RNG_ALGORITHM}/cdf-inversion"),
    })
}

/// The closed-form estimate M(2n+1)/(2Σq²), shared by the method of
/// moments and by the exact maximizers for n ∈ {0, 1}.
fn scaled_inverse_moment(n: HermiteOrder, m: usize, sum_sq: f64) -> f64 {
    (m as f64) * (2.0 * n as f64 + 1.0) / (2.0 * sum_sq)
}

/// Method of moments: d̂ = M(2n+1)/(2Σq²), the reciprocal of the unbiased
/// 1/d estimate X_M = 2Σq²/(M(2n+1)).
pub fn mom_estimate(batch: &SampleBatch) -> Result<EstimateReport> {
    let sum_sq = batch.sum_sq();
    if !(sum_sq > 0.0) {
        return Err(Error::BadBatch("all samples are zero".into()));
    }
    let m = batch.len();
    let n = batch.n;
    let d_hat = scaled_inverse_moment(n, m, sum_sq);
    let nf = n as f64;
    let asym = 2.0 * (nf * nf + nf + 1.0) * d_hat * d_hat
        / (m as f64 * (2.0 * nf + 1.0) * (2.0 * nf + 1.0));
    let crb = 1.0 / (m as f64 * qfi_fock(n, LengthScale::new(d_hat)?));
    Ok(EstimateReport {
        kind: EstimatorKind::Mom,
        d_hat,
        sample_count: m,
        log_likelihood: None,
        iterations: 0,
        bracket: None,
        asymptotic_variance: Some(asym),
        crb: Some(crb),
    })
}

/// Log-likelihood l_M(d) = Σ_i log psi(n, d, q_i)² in natural log;
/// −∞ when some q_i√d hits a Hermite node.
pub fn log_likelihood(d: LengthScale, batch: &SampleBatch) -> Result<f64> {
    let mut acc = 0.0;
    for &q in &batch.samples {
        let v = special::log_density(batch.n, d, q)?;
        if v == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        acc += v;
    }
    Ok(acc)
}

const MLE_GRID: usize = 400;
const MLE_REL_WIDTH: f64 = 1.0e-10;

/// Maximum-likelihood estimate.
///
/// For n ∈ {0, 1} the likelihood is an exponential family in Σq² and the
/// maximizer is closed-form (and equals the method of moments at n = 1).
/// Otherwise: log-spaced grid of 400 points on [d̂_MOM/10, 10·d̂_MOM] to
/// bracket the global maximum (−∞ grid values skipped), then golden-section
/// refinement to relative width 1e−10. A boundary bracket is widened once.
pub fn mle_estimate(batch: &SampleBatch) -> Result<EstimateReport> {
    let mom = mom_estimate(batch)?;
    let m = batch.len();
    let n = batch.n;
    if n <= 1 {
        let d_hat = scaled_inverse_moment(n, m, batch.sum_sq());
        let ll = log_likelihood(LengthScale::new(d_hat)?, batch)?;
        return Ok(EstimateReport {
            kind: EstimatorKind::Mle,
            d_hat,
            sample_count: m,
            log_likelihood: Some(ll),
            iterations: 0,
            bracket: None,
            asymptotic_variance: None,
            crb: Some(1.0 / (m as f64 * qfi_fock(n, LengthScale::new(d_hat)?))),
        })
    }

    let objective = |d: f64| -> Result<f64> { log_likelihood(LengthScale::new(d)?, batch) };
    let mut lo = mom.d_hat / 10.0;
    let mut hi = mom.d_hat * 10.0;
    let mut iterations = 0usize;
    for attempt in 0..2 {
        let ratio = (hi / lo).ln();
        let mut best: Option<(usize, f64, f64)> = None;
        let mut grid = Vec::with_capacity(MLE_GRID);
        for i in 0..MLE_GRID {
            let d = lo * (ratio * i as f64 / (MLE_GRID - 1) as f64).exp();
            let v = objective(d)?;
            iterations += 1;
            grid.push((d, v));
            if v.is_finite() {
                let better = match best {
                    None => true,
                    Some((_, _, bv)) => {
                        v > bv
                            || (v == bv
                                && (d - mom.d_hat).abs()
                                    < (grid[best.unwrap().0].0 - mom.d_hat).abs())
                    }
                };
                if better {
                    best = Some((i, d, v));
                }
            }
        }
        let (idx, d_best, v_best) = best.ok_or_else(|| {
            Error::EstimatorFailure("no finite likelihood value on the search grid".into())
        })?;
        let boundary = idx == 0 || idx == MLE_GRID - 1;
        if boundary && attempt == 0 {
            lo /= 10.0;
            hi *= 10.0;
            continue;
        }
        let a = if idx > 0 { grid[idx - 1].0 } else { grid[idx].0 };
        let b = if idx + 1 < MLE_GRID {
            grid[idx + 1].0
        } else {
            grid[idx].0
        };
        let (d_hat, ll, gold_iters) = golden_section_max(&objective, a, b, d_best, v_best)?;
        iterations += gold_iters;
        return Ok(EstimateReport {
            kind: EstimatorKind::Mle,
            d_hat,
            sample_count: m,
            log_likelihood: Some(ll),
            iterations,
            bracket: Some((a, b)),
            asymptotic_variance: None,
            crb: Some(1.0 / (m as f64 * qfi_fock(n, LengthScale::new(d_hat)?))),
        });
    }
    Err(Error::EstimatorFailure(
        "likelihood maximum escaped the widened bracket".into(),
    ))
}

fn golden_section_max<F>(
    objective: &F,
    mut a: f64,
    mut b: f64,
    seed_x: f64,
    seed_v: f64,
) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = objective(x1)?;
    let mut f2 = objective(x2)?;
    let mut iters = 2usize;
    let mut best = (seed_x, seed_v);
    while (b - a) > MLE_REL_WIDTH * best.0.abs().max(1e-300) && iters < 200 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = objective(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = objective(x1)?;
        }
        iters += 1;
        let (cx, cv) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if cv > best.1 {
            best = (cx, cv);
        }
    }
    Ok((best.0, best.1, iters))
}

/// Gamma conjugate update for the first excited state: prior (s, λ) maps to
/// posterior (3M/2 + s, Σq² + λ). Rejected for n ≠ 1: the likelihood is an
/// exponential family in Σq² only for n ≤ 1, and the n = 0 case is the
/// plain Gaussian handled by the same formula with shape M/2 (not exposed
/// here because the source theorem is stated for n = 1).
pub fn gamma_posterior(
    batch: &SampleBatch,
    prior_shape: f64,
    prior_rate: f64,
) -> Result<GammaPosterior> {
    if batch.n != 1 {
        return Err(Error::Domain(format!(
            "conjugate update requires probe n = 1, got n = {}",
            batch.n
        )));
    }
    let prior = GammaPosterior::new(prior_shape, prior_rate)?;
    if batch.is_empty() {
        return Ok(prior);
    }
    GammaPosterior::new(
        1.5 * batch.len() as f64 + prior.shape,
        batch.sum_sq() + prior.rate,
    )
}

/// Jeffreys-prior posterior for the first excited state: Gamma(3M/2, Σq²),
/// proper for M ≥ 1; its mean equals the MLE and the method of moments.
pub fn jeffreys_posterior(batch: &SampleBatch) -> Result<GammaPosterior> {
    if batch.n != 1 {
        return Err(Error::Domain(format!(
            "Jeffreys posterior requires probe n = 1, got n = {}",
            batch.n
        )));
    }
    if batch.is_empty() {
        return Err(Error::BadBatch(
            "Jeffreys posterior needs at least one sample".into(),
        ));
    }
    GammaPosterior::new(1.5 * batch.len() as f64, batch.sum_sq())
}

/// Scale-invariant estimation cost: Ci(ε·|ln(d̂/d)|), the cosine integral
/// of the scaled log-ratio. Diverges to −∞ at d̂ = d (returned as the
/// sentinel value).
pub fn covariant_cost(d_hat: f64, d: f64, eps: f64) -> Result<f64> {
    if !(d_hat > 0.0 && d > 0.0 && eps > 0.0) {
        return Err(Error::Domain(format!(
            "covariant cost needs positive arguments, got ({d_hat}, {d}, {eps})"
        )));
    }
    let t = (d_hat / d).ln().abs();
    if t == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(cosine_integral(eps * t))
}

/// Ci(x) for x > 0: power series below x = 2, Lentz continued fraction for
/// the exponential integral E₁(ix) above.
fn cosine_integral(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    if x <= 2.0 {
        let mut sum = 0.0f64;
        let mut term = 1.0f64;
        let x2 = x * x;
        for k in 1..=100 {
            let kf = k as f64;
            // term = (−1)^k x^{2k}/(2k)!
            term *= -x2 / ((2.0 * kf - 1.0) * (2.0 * kf));
            let contrib = term / (2.0 * kf);
            sum += contrib;
            if contrib.abs() < 1.0e-18 * sum.abs().max(1.0) {
                break;
            }
        }
        return EULER_GAMMA + x.ln() + sum;
    }
    // Modified Lentz evaluation of the continued fraction for E₁(ix);
    // then Ci(x) = −Re[e^{−ix}·h] with h the continued-fraction value.
    use num_complex::Complex64;
    const FPMIN: f64 = 1.0e-300;
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / FPMIN, 0.0);
    let mut dd = one / b;
    let mut h = dd;
    for i in 2..=200 {
        let a = -((i - 1) as f64) * ((i - 1) as f64);
        b += Complex64::new(2.0, 0.0);
        dd = one / (dd * a + b);
        c = b + a / c;
        let del = c * dd;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1.0e-16 {
            break;
        }
    }
    let h = Complex64::new(x.cos(), -x.sin()) * h;
    -h.re
}

/// Aggregate result of a seeded Monte Carlo estimator benchmark.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McReport {
    pub estimator: EstimatorKind,
    pub n: HermiteOrder,
    pub d_true: LengthScale,
    pub shots: usize,
    pub reps: usize,
    pub seed: u64,
    pub rng: String,
    pub mean_estimate: f64,
    pub bias: f64,
    /// Standard error of the mean estimate.
    pub bias_stderr: f64,
    pub variance: f64,
    pub crb: f64,
    pub variance_over_crb: f64,
    /// (n²+n+1)²/(2n+1)², the predicted variance/CRB ratio for the method
    /// of moments.
    pub mom_predicted_ratio: f64,
    pub failures: usize,
}

/// Run `reps` independent replicates of sample-then-estimate; replicate i
/// uses seed `seed + i`, so the result is deterministic under any thread
/// schedule. Estimator failures are counted and tolerated up to 1% of reps.
pub fn mc_benchmark(
    n: HermiteOrder,
    d: LengthScale,
    shots: usize,
    reps: usize,
    estimator: EstimatorKind,
    seed: u64,
) -> Result<McReport> {
    if reps < 2 {
        return Err(Error::Domain(format!("need at least 2 replicates, got {reps}")));
    }
    let sampler = PositionSampler::new(n, d)?;
    let mut results: Vec<(usize, Result<f64>)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let samples = sampler.draw(shots, seed + rep as u64);
            let run = SampleBatch {
                n,
                d_true: Some(d),
                samples,
                seed: Some(seed + rep as u64),
                generator: format!("{RNG_ALGORITHM}/cdf-inversion"),
            };
            let est = match estimator {
                EstimatorKind::Mom => mom_estimate(&run).map(|r| r.d_hat),
                EstimatorKind::Mle => mle_estimate(&run).map(|r| r.d_hat),
                EstimatorKind::Jeffreys => jeffreys_posterior(&run).map(|p| p.mean()),
            };
            (rep, est)
        })
        .collect();
    results.sort_by_key(|(rep, _)| *rep);

    let mut estimates = Vec::with_capacity(reps);
    let mut failures = 0usize;
    for (_, r) in results {
        match r {
            Ok(v) => estimates.push(v),
            Err(_) => failures += 1,
        }
    }
    if failures * 100 > reps {
        return Err(Error::EstimatorFailure(format!(
            "{failures} of {reps} replicates failed"
        )));
    }
    let count = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / count;
    let variance =
        estimates.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1.0);
    let crb = 1.0 / (shots as f64 * qfi_fock(n, d));
    let nf = n as f64;
    let predicted = ((nf * nf + nf + 1.0) / (2.0 * nf + 1.0)).powi(2);
    Ok(McReport {
        estimator,
        n,
        d_true: d,
        shots,
        reps,
        seed,
        rng: RNG_ALGORITHM.into(),
        mean_estimate: mean,
        bias: mean - d.get(),
        bias_stderr: (variance / count).sqrt(),
        variance,
        crb,
        variance_over_crb: variance / crb,
        mom_predicted_ratio: predicted,
        failures,
    })
}
