//! Seeded Monte Carlo over the physical FTR channel model.
//!
//! Samples are drawn from the generative definition of the channel (two
//! specular rays with a common Gamma-distributed power fluctuation plus a
//! complex Gaussian diffuse term), never from the series expansion, so the
//! estimators are an independent oracle for every closed form in the crate.
//!
//! Determinism: each batch b owns ChaCha8 streams 2b (main link) and 2b+1
//! (eavesdropper) under one seed, batches are merged in index order, and
//! per-sample draw order is fixed (fluctuation, phase 1, phase 2, diffuse
//! re, diffuse im). Results are therefore byte-identical for a fixed
//! (seed, n_samples, batch) regardless of thread count.

use crate::error::{FtrError, Result};
use crate::ftr::{average_snr, snr_cdf, CoefficientTable, FtrParams, LinkBudget};
use crate::secrecy::WiretapScenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

/// Sample budget, seed, and batch granularity for all estimators.
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    pub n_samples: usize,
    pub seed: u64,
    /// Samples per parallel batch; part of the deterministic stream layout,
    /// so changing it changes the (still deterministic) estimate.
    pub batch: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            n_samples: 1_000_000,
            seed: 1,
            batch: 65_536,
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(FtrError::InvalidParam("n_samples must be >= 1".into()));
        }
        if self.batch == 0 {
            return Err(FtrError::InvalidParam("batch must be >= 1".into()));
        }
        Ok(())
    }
}

/// Point estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct EstimateWithError {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl EstimateWithError {
    /// |mean - reference| measured in standard errors.
    pub fn sigmas_from(&self, reference: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - reference).abs() / self.std_error
        }
    }
}

/// Generative sampler for one link's instantaneous SNR.
pub struct SnrSampler {
    v1: f64,
    v2: f64,
    sigma: f64,
    gain: f64,
    fluctuation: Gamma<f64>,
    rng: ChaCha8Rng,
}

impl SnrSampler {
    /// `stream` selects a ChaCha8 sub-stream; distinct streams under the
    /// same seed never overlap.
    pub fn new(params: &FtrParams, budget: &LinkBudget, seed: u64, stream: u64) -> Result<Self> {
        // Specular amplitudes from (K, delta): V1 V2 = sigma^2 K delta,
        // V1^2 + V2^2 = 2 sigma^2 K.
        let root = (1.0 - params.delta * params.delta).max(0.0).sqrt();
        let v1 = (params.sigma2 * params.k * (1.0 + root)).sqrt();
        let v2 = (params.sigma2 * params.k * (1.0 - root)).sqrt();
        let fluctuation = Gamma::new(params.m, 1.0 / params.m).map_err(|e| {
            FtrError::InvalidParam(format!("fluctuation sampler rejected m={}: {e}", params.m))
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Ok(Self {
            v1,
            v2,
            sigma: params.sigma2.sqrt(),
            gain: budget.gain(),
            fluctuation,
            rng,
        })
    }

    /// One instantaneous SNR draw; order of underlying draws is fixed.
    pub fn draw(&mut self) -> f64 {
        let zeta = self.fluctuation.sample(&mut self.rng);
        let phi1 = self.rng.random::<f64>() * std::f64::consts::TAU;
        let phi2 = self.rng.random::<f64>() * std::f64::consts::TAU;
        let z_re: f64 = StandardNormal.sample(&mut self.rng);
        let z_im: f64 = StandardNormal.sample(&mut self.rng);
        let amp = zeta.sqrt();
        let re = amp * (self.v1 * phi1.cos() + self.v2 * phi2.cos()) + self.sigma * z_re;
        let im = amp * (self.v1 * phi1.sin() + self.v2 * phi2.sin()) + self.sigma * z_im;
        self.gain * (re * re + im * im)
    }
}

impl Iterator for SnrSampler {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.draw())
    }
}

/// Running first and second central moments with an exact pairwise merge.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }

    fn estimate(self) -> EstimateWithError {
        let n = self.n as f64;
        let std_error = if self.n > 1 {
            (self.m2 / (n - 1.0) / n).sqrt()
        } else {
            f64::INFINITY
        };
        EstimateWithError {
            mean: self.mean,
            std_error,
            n: self.n as usize,
        }
    }
}

fn batch_counts(cfg: &SampleConfig) -> Vec<usize> {
    let full = cfg.n_samples / cfg.batch;
    let rem = cfg.n_samples % cfg.batch;
    let mut counts = vec![cfg.batch; full];
    if rem > 0 {
        counts.push(rem);
    }
    counts
}

/// One link per batch: stream = 2 * batch index.
fn run_single<T, F>(params: &FtrParams, budget: &LinkBudget, cfg: &SampleConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(SnrSampler, usize) -> T + Sync,
{
    cfg.validate()?;
    // Construct once to surface parameter errors before the parallel region.
    SnrSampler::new(params, budget, cfg.seed, 0)?;
    let counts = batch_counts(cfg);
    Ok(counts
        .par_iter()
        .enumerate()
        .map(|(b, &count)| {
            let sampler = SnrSampler::new(params, budget, cfg.seed, 2 * b as u64)
                .expect("sampler construction validated above");
            f(sampler, count)
        })
        .collect())
}

/// Paired links per batch: streams 2b (main) and 2b + 1 (eavesdropper).
fn run_paired<T, F>(w: &WiretapSampling, cfg: &SampleConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(SnrSampler, SnrSampler, usize) -> T + Sync,
{
    cfg.validate()?;
    SnrSampler::new(&w.main, &w.main_budget, cfg.seed, 0)?;
    SnrSampler::new(&w.eaves, &w.eaves_budget, cfg.seed, 1)?;
    let counts = batch_counts(cfg);
    Ok(counts
        .par_iter()
        .enumerate()
        .map(|(b, &count)| {
            let d = SnrSampler::new(&w.main, &w.main_budget, cfg.seed, 2 * b as u64)
                .expect("sampler construction validated above");
            let e = SnrSampler::new(&w.eaves, &w.eaves_budget, cfg.seed, 2 * b as u64 + 1)
                .expect("sampler construction validated above");
            f(d, e, count)
        })
        .collect())
}

/// Physical description of the wiretap pair for sampling: raw fading
/// parameters plus the deterministic budget of each link.
#[derive(Debug, Clone, Copy)]
pub struct WiretapSampling {
    pub main: FtrParams,
    pub main_budget: LinkBudget,
    pub eaves: FtrParams,
    pub eaves_budget: LinkBudget,
    pub rate_nats: f64,
}

impl WiretapSampling {
    /// Folds each budget gain into the diffuse power, yielding the
    /// effective scenario the closed forms consume.
    pub fn effective_scenario(&self) -> Result<WiretapScenario> {
        let main = self
            .main
            .with_sigma2(self.main.sigma2 * self.main_budget.gain())?;
        let eaves = self
            .eaves
            .with_sigma2(self.eaves.sigma2 * self.eaves_budget.gain())?;
        WiretapScenario::new(main, eaves, self.rate_nats)
    }

    /// Wraps an already-effective scenario with unit budgets.
    pub fn from_effective(scenario: &WiretapScenario) -> Self {
        Self {
            main: scenario.main,
            main_budget: LinkBudget::unit(),
            eaves: scenario.eaves,
            eaves_budget: LinkBudget::unit(),
            rate_nats: scenario.rate_nats,
        }
    }
}

/// Mean instantaneous SNR of one link.
pub fn estimate_mean_snr(
    params: &FtrParams,
    budget: &LinkBudget,
    cfg: &SampleConfig,
) -> Result<EstimateWithError> {
    let batches = run_single(params, budget, cfg, |mut sampler, count| {
        let mut m = Moments::default();
        for _ in 0..count {
            m.push(sampler.draw());
        }
        m
    })?;
    Ok(batches
        .into_iter()
        .fold(Moments::default(), Moments::merge)
        .estimate())
}

/// Average secrecy capacity estimator: mean of max(ln(1+g_D)-ln(1+g_E), 0).
pub fn estimate_asc(w: &WiretapSampling, cfg: &SampleConfig) -> Result<EstimateWithError> {
    let batches = run_paired(w, cfg, |mut d, mut e, count| {
        let mut m = Moments::default();
        for _ in 0..count {
            let c = d.draw().ln_1p() - e.draw().ln_1p();
            m.push(c.max(0.0));
        }
        m
    })?;
    Ok(batches
        .into_iter()
        .fold(Moments::default(), Moments::merge)
        .estimate())
}

fn binary_estimate(successes: u64, n: usize) -> EstimateWithError {
    let p = successes as f64 / n as f64;
    EstimateWithError {
        mean: p,
        // Normal-approximation error of a proportion.
        std_error: (p * (1.0 - p) / n as f64).sqrt(),
        n,
    }
}

fn estimate_event<F>(w: &WiretapSampling, cfg: &SampleConfig, event: F) -> Result<EstimateWithError>
where
    F: Fn(f64, f64) -> bool + Sync,
{
    let batches = run_paired(w, cfg, |mut d, mut e, count| {
        let mut hits = 0u64;
        for _ in 0..count {
            if event(d.draw(), e.draw()) {
                hits += 1;
            }
        }
        hits
    })?;
    Ok(binary_estimate(batches.into_iter().sum(), cfg.n_samples))
}

/// Exact outage estimator: P(1 + g_D < Theta (1 + g_E)).
pub fn estimate_sop(w: &WiretapSampling, cfg: &SampleConfig) -> Result<EstimateWithError> {
    let theta = w.rate_nats.exp();
    estimate_event(w, cfg, move |gd, ge| 1.0 + gd < theta * (1.0 + ge))
}

/// Outage lower-bound estimator: P(g_D < Theta g_E).
pub fn estimate_sop_lower(w: &WiretapSampling, cfg: &SampleConfig) -> Result<EstimateWithError> {
    let theta = w.rate_nats.exp();
    estimate_event(w, cfg, move |gd, ge| gd < theta * ge)
}

/// Strict-positivity estimator: P(g_D > g_E); ignores the scenario rate.
pub fn estimate_spsc(w: &WiretapSampling, cfg: &SampleConfig) -> Result<EstimateWithError> {
    estimate_event(w, cfg, |gd, ge| gd > ge)
}

/// Kolmogorov-Smirnov comparison of the generative sampler against a
/// truncated analytic CDF.
#[derive(Debug, Clone, Copy)]
pub struct KsOutcome {
    pub statistic: f64,
    /// Two-sided 1% critical value sqrt(-ln(alpha/2)/2) / sqrt(n).
    pub critical_1pct: f64,
    pub n: usize,
}

impl KsOutcome {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical_1pct
    }
}

/// Draws n samples, sorts them, and returns the sup-distance between the
/// empirical distribution and `snr_cdf` over the given table.
pub fn ks_statistic(
    params: &FtrParams,
    budget: &LinkBudget,
    table: &CoefficientTable,
    cfg: &SampleConfig,
) -> Result<KsOutcome> {
    let batches = run_single(params, budget, cfg, |mut sampler, count| {
        let mut v = Vec::with_capacity(count);
        for _ in 0..count {
            v.push(sampler.draw());
        }
        v
    })?;
    let mut samples = Vec::with_capacity(cfg.n_samples);
    for b in batches {
        samples.extend_from_slice(&b);
    }
    samples.sort_unstable_by(f64::total_cmp);
    let cdf: Vec<f64> = samples
        .par_iter()
        .map(|&x| snr_cdf(table, x))
        .collect();
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, f) in cdf.iter().enumerate() {
        let below = f - i as f64 / n;
        let above = (i as f64 + 1.0) / n - f;
        d = d.max(below).max(above);
    }
    let alpha: f64 = 0.01;
    Ok(KsOutcome {
        statistic: d,
        critical_1pct: (-(alpha / 2.0).ln() / 2.0).sqrt() / n.sqrt(),
        n: samples.len(),
    })
}

/// Mean SNR identity used by `validate`: compares the sampled mean to
/// gain * 2 sigma^2 (1 + K) in standard errors.
pub fn mean_snr_discrepancy(
    params: &FtrParams,
    budget: &LinkBudget,
    cfg: &SampleConfig,
) -> Result<(EstimateWithError, f64)> {
    let est = estimate_mean_snr(params, budget, cfg)?;
    let expected = average_snr(params, budget);
    let sigmas = est.sigmas_from(expected);
    Ok((est, sigmas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ftr::{build_coefficient_table, Truncation};

    fn quick_cfg(n: usize) -> SampleConfig {
        SampleConfig {
            n_samples: n,
            seed: 42,
            batch: 16_384,
        }
    }

    #[test]
    fn sampler_is_deterministic_per_seed_and_stream() {
        let p = FtrParams::new(5.5, 15.0, 0.4, 0.7).unwrap();
        let b = LinkBudget::unit();
        let a: Vec<f64> = SnrSampler::new(&p, &b, 7, 3).unwrap().take(100).collect();
        let c: Vec<f64> = SnrSampler::new(&p, &b, 7, 3).unwrap().take(100).collect();
        assert_eq!(a, c);
        let other: Vec<f64> = SnrSampler::new(&p, &b, 7, 4).unwrap().take(100).collect();
        assert_ne!(a, other);
    }

    #[test]
    fn estimates_are_reproducible_across_runs() {
        let p = FtrParams::new(2.5, 3.0, 0.9, 0.5).unwrap();
        let b = LinkBudget::unit();
        let cfg = quick_cfg(50_000);
        let e1 = estimate_mean_snr(&p, &b, &cfg).unwrap();
        let e2 = estimate_mean_snr(&p, &b, &cfg).unwrap();
        assert_eq!(e1.mean.to_bits(), e2.mean.to_bits());
        assert_eq!(e1.std_error.to_bits(), e2.std_error.to_bits());
    }

    #[test]
    fn sampled_mean_matches_analytic_mean_with_budget() {
        let p = FtrParams::new(5.5, 15.0, 0.4, 0.7).unwrap();
        let b = LinkBudget::new(2.0, 1.5, 2.0, 3.0).unwrap();
        let (est, sigmas) = mean_snr_discrepancy(&p, &b, &quick_cfg(200_000)).unwrap();
        assert!(
            sigmas < 3.0,
            "sampled mean {} vs analytic {} at {:.1} sigma",
            est.mean,
            average_snr(&p, &b),
            sigmas
        );
    }

    #[test]
    fn rayleigh_special_case_passes_ks() {
        // K = 0 collapses the model to an exponential SNR law.
        let p = FtrParams::new(3.5, 0.0, 0.0, 0.5).unwrap();
        let b = LinkBudget::unit();
        let t = build_coefficient_table(&p, &Truncation::default()).unwrap();
        let ks = ks_statistic(&p, &b, &t, &quick_cfg(100_000)).unwrap();
        assert!(
            ks.passes(),
            "KS statistic {} above 1% critical value {}",
            ks.statistic,
            ks.critical_1pct
        );
    }

    #[test]
    fn paired_events_are_complementary_on_shared_streams() {
        let p = FtrParams::new(5.5, 8.0, 0.4, 0.7).unwrap();
        let s = WiretapScenario::new(p, p, 0.0).unwrap();
        let w = WiretapSampling::from_effective(&s);
        let cfg = quick_cfg(100_000);
        // Same seed and streams: the strict events partition the samples.
        let spsc = estimate_spsc(&w, &cfg).unwrap();
        let sopl = estimate_sop_lower(&w, &cfg).unwrap();
        assert!((spsc.mean + sopl.mean - 1.0).abs() < 1e-12);
        assert!(spsc.sigmas_from(0.5) < 3.0);
    }

    #[test]
    fn asc_estimator_agrees_with_closed_form() {
        let main = FtrParams::new(5.5, 15.0, 0.4, 1.0).unwrap();
        let eaves = FtrParams::new(8.5, 5.0, 0.35, 0.4).unwrap();
        let s = WiretapScenario::new(main, eaves, 0.0).unwrap();
        let closed = crate::secrecy::asc(&s, &Truncation::default()).unwrap().value;
        let est = estimate_asc(&WiretapSampling::from_effective(&s), &quick_cfg(200_000)).unwrap();
        assert!(
            est.sigmas_from(closed) < 3.0,
            "MC {} vs closed {} at {:.1} sigma",
            est.mean,
            closed,
            est.sigmas_from(closed)
        );
    }

    #[test]
    fn effective_scenario_folds_budget_gain() {
        let p = FtrParams::new(2.5, 3.0, 0.48, 1.0).unwrap();
        let w = WiretapSampling {
            main: p,
            main_budget: LinkBudget::new(4.0, 1.0, 2.0, 2.0).unwrap(),
            eaves: p,
            eaves_budget: LinkBudget::unit(),
            rate_nats: 0.3,
        };
        let s = w.effective_scenario().unwrap();
        assert!((s.main.sigma2 - 4.0).abs() < 1e-15);
        assert!((s.eaves.sigma2 - 1.0).abs() < 1e-15);
        assert!((s.rho() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sample_config_validates() {
        assert!(quick_cfg(10).validate().is_ok());
        assert!(SampleConfig {
            n_samples: 0,
            ..quick_cfg(10)
        }
        .validate()
        .is_err());
        assert!(SampleConfig {
            batch: 0,
            ..quick_cfg(10)
        }
        .validate()
        .is_err());
    }
}
