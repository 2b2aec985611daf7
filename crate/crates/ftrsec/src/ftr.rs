//! Fluctuating two-ray (FTR) channel model: parameter sets, the Erlang
//! mixture representation of the SNR distribution, link-budget scaling, and
//! the truncated coefficient table driving every closed-form metric.
//!
//! The instantaneous SNR density is the countable mixture
//! f(g) = sum_j w_j Erlang(g; j+1, 2 sigma^2) with mixture masses
//! w_j = (m^m / Gamma(m)) K^j d_j / j!, which sum to exactly 1. Truncating
//! at mass defect eps(N) = 1 - sum_{j<=N} w_j gives computable series whose
//! error is controlled by eps alone.

use crate::error::{FtrError, Result};
use crate::kahan::KahanSum;
use crate::quad;
use crate::special;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Shape parameters of one FTR link. `m` is the shape of the Gamma
/// fluctuation of the two specular rays, `k` the ratio of specular to
/// diffuse power, `delta` in [0, 1] the amplitude similarity of the rays,
/// and `sigma2` the per-dimension diffuse power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtrParams {
    pub m: f64,
    pub k: f64,
    pub delta: f64,
    pub sigma2: f64,
}

impl FtrParams {
    pub fn new(m: f64, k: f64, delta: f64, sigma2: f64) -> Result<Self> {
        if m <= 0.0 || !m.is_finite() {
            return Err(FtrError::InvalidParam(format!("m must be > 0, got {m}")));
        }
        if k < 0.0 || !k.is_finite() {
            return Err(FtrError::InvalidParam(format!("K must be >= 0, got {k}")));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(FtrError::InvalidParam(format!(
                "delta must lie in [0, 1], got {delta}"
            )));
        }
        if sigma2 <= 0.0 || !sigma2.is_finite() {
            return Err(FtrError::InvalidParam(format!(
                "sigma2 must be > 0, got {sigma2}"
            )));
        }
        Ok(Self {
            m,
            k,
            delta,
            sigma2,
        })
    }

    /// Same shape with the diffuse power replaced.
    pub fn with_sigma2(&self, sigma2: f64) -> Result<Self> {
        Self::new(self.m, self.k, self.delta, sigma2)
    }
}

/// Deterministic path-loss budget: gain = eb_n0 * r^(-eta), valid up to the
/// line-of-sight range r_los.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub eb_n0: f64,
    pub r: f64,
    pub eta: f64,
    pub r_los: f64,
}

/// Path-loss exponents outside this range are physically implausible for
/// terrestrial links and trigger a warning (not an error).
pub const ETA_PLAUSIBLE: (f64, f64) = (1.5, 8.0);

impl LinkBudget {
    pub fn new(eb_n0: f64, r: f64, eta: f64, r_los: f64) -> Result<Self> {
        if eb_n0 <= 0.0 || !eb_n0.is_finite() {
            return Err(FtrError::InvalidParam(format!(
                "eb_n0 must be > 0, got {eb_n0}"
            )));
        }
        if r <= 0.0 || !r.is_finite() {
            return Err(FtrError::InvalidParam(format!(
                "distance r must be > 0, got {r}"
            )));
        }
        if !eta.is_finite() || eta < 0.0 {
            return Err(FtrError::InvalidParam(format!(
                "path-loss exponent must be finite and >= 0, got {eta}"
            )));
        }
        if r_los <= 0.0 || !r_los.is_finite() {
            return Err(FtrError::InvalidParam(format!(
                "r_los must be > 0, got {r_los}"
            )));
        }
        if r > r_los {
            return Err(FtrError::InvalidParam(format!(
                "distance r = {r} exceeds the line-of-sight range r_los = {r_los}"
            )));
        }
        Ok(Self {
            eb_n0,
            r,
            eta,
            r_los,
        })
    }

    /// Neutral budget: unit energy at unit distance.
    pub fn unit() -> Self {
        Self {
            eb_n0: 1.0,
            r: 1.0,
            eta: 2.0,
            r_los: 1.0,
        }
    }

    /// Deterministic SNR gain applied to the fading power.
    pub fn gain(&self) -> f64 {
        self.eb_n0 * self.r.powf(-self.eta)
    }

    /// Non-fatal plausibility diagnostics.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.eta < ETA_PLAUSIBLE.0 || self.eta > ETA_PLAUSIBLE.1 {
            out.push(format!(
                "path-loss exponent {} outside plausible range [{}, {}]",
                self.eta, ETA_PLAUSIBLE.0, ETA_PLAUSIBLE.1
            ));
        }
        out
    }
}

/// Mean SNR of the link: gain * 2 sigma^2 (1 + K).
pub fn average_snr(params: &FtrParams, budget: &LinkBudget) -> f64 {
    budget.gain() * 2.0 * params.sigma2 * (1.0 + params.k)
}

/// Diffuse power that realizes a requested mean SNR under a budget.
pub fn sigma2_for_avg_snr(avg_snr: f64, k: f64, budget: &LinkBudget) -> Result<f64> {
    if avg_snr <= 0.0 || !avg_snr.is_finite() {
        return Err(FtrError::InvalidParam(format!(
            "average SNR must be > 0, got {avg_snr}"
        )));
    }
    Ok(avg_snr / (budget.gain() * 2.0 * (1.0 + k)))
}

/// Truncation policy for the coefficient table.
#[derive(Debug, Clone, Copy)]
pub struct Truncation {
    /// Mass defect at which the series is cut.
    pub target_eps: f64,
    /// Hard cap on the highest retained index.
    pub n_max: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            target_eps: 1e-5,
            n_max: 200,
        }
    }
}

impl Truncation {
    pub fn validate(&self) -> Result<()> {
        if !self.target_eps.is_finite() || self.target_eps <= 0.0 || self.target_eps > 1.0 {
            return Err(FtrError::InvalidParam(format!(
                "target_eps must lie in (0, 1], got {}",
                self.target_eps
            )));
        }
        if self.n_max == 0 || self.n_max > 10_000 {
            return Err(FtrError::InvalidParam(format!(
                "n_max must lie in [1, 10000], got {}",
                self.n_max
            )));
        }
        Ok(())
    }
}

type DKey = (u64, u64, u64);

/// ln d_j values are pure functions of (m, K, delta); sweeps vary sigma2
/// and rate only, so the cache turns table rebuilds into lookups.
fn d_cache() -> &'static Mutex<HashMap<DKey, Vec<f64>>> {
    static CACHE: OnceLock<Mutex<HashMap<DKey, Vec<f64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// ln d_j by order-doubling Gauss-Legendre quadrature of
/// d_j = Gamma(m+j) (1/pi) int_0^pi (1+D cos t)^j / (m + K(1+D cos t))^(m+j) dt
/// with the integrand exponent rescaled by its probed peak.
fn ln_d_quadrature(m: f64, k: f64, delta: f64, j: usize) -> Result<f64> {
    let jf = j as f64;
    let ln_g = |theta: f64| -> f64 {
        let u = (1.0 + delta * theta.cos()).max(0.0);
        let base = (m + k * u).ln();
        if u == 0.0 {
            if j == 0 {
                -m * base
            } else {
                f64::NEG_INFINITY
            }
        } else {
            jf * u.ln() - (m + jf) * base
        }
    };
    let mut peak = f64::NEG_INFINITY;
    for i in 0..=64 {
        peak = peak.max(ln_g(std::f64::consts::PI * i as f64 / 64.0));
    }
    let integral = quad::integrate_doubling(0.0, std::f64::consts::PI, 1e-12, |theta| {
        let e = ln_g(theta) - peak;
        if e < -745.0 {
            0.0
        } else {
            e.exp()
        }
    })?;
    Ok(special::ln_gamma(m + jf)? + peak + (integral / std::f64::consts::PI).ln())
}

fn ln_d_cached(m: f64, k: f64, delta: f64, j: usize) -> Result<f64> {
    let key = (m.to_bits(), k.to_bits(), delta.to_bits());
    {
        let cache = d_cache().lock().expect("d cache poisoned");
        if let Some(v) = cache.get(&key) {
            if j < v.len() {
                return Ok(v[j]);
            }
        }
    }
    // Computed outside the lock; duplicated work on a race is harmless
    // because the value is deterministic.
    let mut fresh = Vec::new();
    let have = {
        let cache = d_cache().lock().expect("d cache poisoned");
        cache.get(&key).map_or(0, Vec::len)
    };
    for jj in have..=j {
        fresh.push(ln_d_quadrature(m, k, delta, jj)?);
    }
    let mut cache = d_cache().lock().expect("d cache poisoned");
    let entry = cache.entry(key).or_default();
    for (offset, v) in fresh.into_iter().enumerate() {
        if have + offset == entry.len() {
            entry.push(v);
        }
    }
    Ok(cache[&key][j])
}

/// Series coefficient d_j of the FTR SNR expansion.
pub fn d_coefficient(params: &FtrParams, j: usize) -> Result<f64> {
    Ok(ln_d_cached(params.m, params.k, params.delta, j)?.exp())
}

/// Truncated Erlang-mixture representation of one link's SNR law.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    params: FtrParams,
    ln_d: Vec<f64>,
    ln_w: Vec<f64>,
    weights: Vec<f64>,
    /// suffix[s] = sum of weights for j >= s; drives the O(N) CDF form.
    suffix: Vec<f64>,
    eps: f64,
    converged: bool,
}

impl CoefficientTable {
    pub fn params(&self) -> &FtrParams {
        &self.params
    }

    /// Highest retained mixture index N.
    pub fn n_trunc(&self) -> usize {
        self.weights.len() - 1
    }

    /// Mass defect eps(N) of the retained mixture.
    pub fn truncation_defect(&self) -> f64 {
        self.eps
    }

    /// False when the defect target was not reached within n_max terms.
    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn d(&self, j: usize) -> f64 {
        self.ln_d[j].exp()
    }

    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Test hook: returns a copy with d_j (hence w_j) scaled by `factor`,
    /// used to prove the statistical checks can detect coefficient damage.
    #[doc(hidden)]
    pub fn with_scaled_coefficient(&self, j: usize, factor: f64) -> Self {
        let mut out = self.clone();
        out.ln_d[j] += factor.ln();
        out.ln_w[j] += factor.ln();
        out.weights[j] *= factor;
        let mut acc = KahanSum::new();
        for &w in &out.weights {
            acc.add(w);
        }
        out.eps = (1.0 - acc.value()).max(0.0);
        out.suffix = suffix_sums(&out.weights);
        out
    }
}

fn suffix_sums(weights: &[f64]) -> Vec<f64> {
    let mut suffix = vec![0.0; weights.len()];
    let mut acc = KahanSum::new();
    for (j, &w) in weights.iter().enumerate().rev() {
        acc.add(w);
        suffix[j] = acc.value();
    }
    suffix
}

/// Builds the truncated table, extending until the mass defect drops to
/// `target_eps` or `n_max` is hit (the latter yields `converged() == false`,
/// not an error, so callers can inspect the partial table).
pub fn build_coefficient_table(params: &FtrParams, trunc: &Truncation) -> Result<CoefficientTable> {
    trunc.validate()?;
    let ln_prefactor = params.m * params.m.ln() - special::ln_gamma(params.m)?;
    let ln_k = if params.k > 0.0 {
        params.k.ln()
    } else {
        f64::NEG_INFINITY
    };
    let mut ln_d = Vec::new();
    let mut ln_w = Vec::new();
    let mut weights = Vec::new();
    let mut mass = KahanSum::new();
    let mut eps = 1.0;
    let mut converged = false;
    for j in 0..=trunc.n_max {
        let ld = ln_d_cached(params.m, params.k, params.delta, j)?;
        // K^j with the j = 0 term pinned to 1 so K = 0 stays finite.
        let lw = if j == 0 {
            ln_prefactor + ld
        } else {
            ln_prefactor + j as f64 * ln_k + ld - special::ln_gamma(j as f64 + 1.0)?
        };
        ln_d.push(ld);
        ln_w.push(lw);
        let w = lw.exp();
        weights.push(w);
        mass.add(w);
        eps = (1.0 - mass.value()).max(0.0);
        if eps <= trunc.target_eps {
            converged = true;
            break;
        }
    }
    let suffix = suffix_sums(&weights);
    Ok(CoefficientTable {
        params: *params,
        ln_d,
        ln_w,
        weights,
        suffix,
        eps,
        converged,
    })
}

/// Mass defect eps(n) = 1 - sum_{j<=n} w_j for any n up to the table size.
pub fn truncation_error(table: &CoefficientTable, n: usize) -> Result<f64> {
    if n > table.n_trunc() {
        return Err(FtrError::InvalidParam(format!(
            "eps({n}) requested but the table holds indices 0..={}",
            table.n_trunc()
        )));
    }
    let mut mass = KahanSum::new();
    for &w in &table.weights[..=n] {
        mass.add(w);
    }
    Ok((1.0 - mass.value()).clamp(0.0, 1.0))
}

/// Truncated SNR density at `gamma`; zero for negative arguments.
pub fn snr_pdf(table: &CoefficientTable, gamma: f64) -> f64 {
    if gamma < 0.0 {
        return 0.0;
    }
    let two_s2 = 2.0 * table.params.sigma2;
    if gamma == 0.0 {
        // Only the j = 0 (exponential) component is nonzero at the origin.
        return table.weights[0] / two_s2;
    }
    let ln_gamma_arg = gamma.ln();
    let ln_two_s2 = two_s2.ln();
    let x = gamma / two_s2;
    let mut acc = KahanSum::new();
    let mut ln_fact = 0.0;
    for (j, &lw) in table.ln_w.iter().enumerate() {
        if j > 0 {
            ln_fact += (j as f64).ln();
        }
        if lw == f64::NEG_INFINITY {
            continue;
        }
        let ln_term = lw - ln_fact + (j as f64) * ln_gamma_arg - (j as f64 + 1.0) * ln_two_s2 - x;
        if ln_term > -745.0 {
            acc.add(ln_term.exp());
        }
    }
    acc.value()
}

/// Truncated SNR distribution function, clamped to [0, 1]. Evaluates as
/// W_N - sum_s suffix[s] * Poisson(s; x) with x = gamma / (2 sigma^2),
/// which costs one exp and O(N) multiplies.
pub fn snr_cdf(table: &CoefficientTable, gamma: f64) -> f64 {
    if gamma <= 0.0 {
        return 0.0;
    }
    let x = gamma / (2.0 * table.params.sigma2);
    let mut acc = KahanSum::new();
    acc.add(1.0 - table.eps);
    // e^-x underflows only when every Poisson term is far below f64 range,
    // where F = W_N to machine precision.
    let mut poisson = (-x).exp();
    for (s, &c) in table.suffix.iter().enumerate() {
        acc.add(-c * poisson);
        poisson *= x / (s as f64 + 1.0);
    }
    acc.value().clamp(0.0, 1.0)
}

/// Reference CDF route: per-component regularized incomplete gamma. Kept
/// for cross-checking `snr_cdf`; O(N) special-function calls per point.
pub fn snr_cdf_by_gamma(table: &CoefficientTable, gamma: f64) -> Result<f64> {
    if gamma <= 0.0 {
        return Ok(0.0);
    }
    let x = gamma / (2.0 * table.params.sigma2);
    let mut acc = KahanSum::new();
    for (j, &w) in table.weights.iter().enumerate() {
        if w > 0.0 {
            acc.add(w * special::regularized_lower_gamma(j as f64 + 1.0, x)?);
        }
    }
    Ok(acc.value().clamp(0.0, 1.0))
}

#[cfg(test)]
// Frozen reference constants keep their full printed precision.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn table(m: f64, k: f64, delta: f64, sigma2: f64) -> CoefficientTable {
        let p = FtrParams::new(m, k, delta, sigma2).unwrap();
        build_coefficient_table(&p, &Truncation::default()).unwrap()
    }

    #[test]
    fn params_validation_rejects_bad_values() {
        assert!(FtrParams::new(0.0, 1.0, 0.5, 1.0).is_err());
        assert!(FtrParams::new(1.0, -0.1, 0.5, 1.0).is_err());
        assert!(FtrParams::new(1.0, 1.0, 1.2, 1.0).is_err());
        assert!(FtrParams::new(1.0, 1.0, 0.5, 0.0).is_err());
        assert!(FtrParams::new(2.5, 3.0, 1.0, 0.5).is_ok());
    }

    #[test]
    fn budget_validation_and_gain() {
        assert!(LinkBudget::new(1.0, 2.0, 2.0, 1.0).is_err());
        let b = LinkBudget::new(4.0, 2.0, 2.0, 5.0).unwrap();
        assert_relative_eq!(b.gain(), 1.0, max_relative = 1e-15);
        assert!(b.warnings().is_empty());
        let implausible = LinkBudget::new(1.0, 1.0, 9.5, 2.0).unwrap();
        assert_eq!(implausible.warnings().len(), 1);
    }

    #[test]
    fn delta_zero_reduces_to_closed_form_coefficients() {
        // At delta = 0 the angular integral is constant:
        // d_j = Gamma(m+j) / (m+K)^(m+j). 30-digit references.
        let p = FtrParams::new(2.5, 3.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(
            d_coefficient(&p, 0).unwrap(),
            0.0187382692919165120,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            d_coefficient(&p, 4).unwrap(),
            0.00443467680462336709,
            max_relative = 1e-12
        );
        let p = FtrParams::new(15.5, 5.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(
            d_coefficient(&p, 2).unwrap(),
            9.48328066738232845e-10,
            max_relative = 1e-12
        );
    }

    #[test]
    fn k_zero_collapses_to_exponential_snr() {
        let t = table(3.5, 0.0, 0.0, 0.5);
        assert_eq!(t.n_trunc(), 0);
        assert!(t.truncation_defect() < 1e-10);
        // 2 sigma^2 = 1: density e^-g, distribution 1 - e^-g.
        assert_relative_eq!(snr_pdf(&t, 1.0), (-1.0f64).exp(), max_relative = 1e-10);
        assert_relative_eq!(
            snr_cdf(&t, 2.0),
            1.0 - (-2.0f64).exp(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn reference_parameter_rows_reach_published_truncation() {
        let cases = [
            (15.5, 5.0, 0.4, 24, 6.27e-6),
            (8.5, 5.0, 0.35, 27, 6.025e-6),
            (25.5, 3.0, 0.48, 16, 8.447e-6),
        ];
        for (m, k, delta, n_expect, eps_expect) in cases {
            let t = table(m, k, delta, 1.0);
            assert!(t.converged());
            assert_eq!(t.n_trunc(), n_expect);
            assert_relative_eq!(t.truncation_defect(), eps_expect, max_relative = 0.02);
        }
    }

    #[test]
    fn truncation_error_is_monotone_and_indexed_safely() {
        let t = table(8.5, 5.0, 0.35, 1.0);
        let mut prev = truncation_error(&t, 0).unwrap();
        assert!(prev < 1.0);
        for n in 1..=t.n_trunc() {
            let e = truncation_error(&t, n).unwrap();
            assert!(e <= prev + 1e-15, "eps must not increase at n={n}");
            prev = e;
        }
        assert_relative_eq!(prev, t.truncation_defect(), epsilon = 1e-15);
        assert!(truncation_error(&t, t.n_trunc() + 1).is_err());
    }

    #[test]
    fn unconverged_build_returns_partial_table() {
        let p = FtrParams::new(2.5, 15.0, 0.9, 0.5).unwrap();
        let t = build_coefficient_table(
            &p,
            &Truncation {
                target_eps: 1e-5,
                n_max: 40,
            },
        )
        .unwrap();
        assert!(!t.converged());
        assert_eq!(t.n_trunc(), 40);
        assert!(t.truncation_defect() > 1e-5);
    }

    #[test]
    fn pdf_mass_matches_truncation_defect() {
        // Simpson on [0, tail] against 1 - eps; the tail is chosen so the
        // discarded mass is far below the comparison tolerance.
        let t = table(8.5, 5.0, 0.35, 0.5);
        let tail = 60.0 * t.params().sigma2 * (1.0 + t.params().k);
        let n = 40_000;
        let h = tail / n as f64;
        let mut acc = KahanSum::new();
        for i in 0..=n {
            let coef = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc.add(coef * snr_pdf(&t, i as f64 * h));
        }
        let integral = acc.value() * h / 3.0;
        assert_relative_eq!(integral, 1.0 - t.truncation_defect(), epsilon = 1e-8);
    }

    #[test]
    fn cdf_fast_form_matches_incomplete_gamma_route() {
        let t = table(5.5, 15.0, 0.4, 0.7);
        let mean = 2.0 * 0.7 * 16.0;
        for frac in [1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 12.0] {
            let g = frac * mean;
            let fast = snr_cdf(&t, g);
            let reference = snr_cdf_by_gamma(&t, g).unwrap();
            assert!(
                (fast - reference).abs() <= 1e-12,
                "cdf mismatch at gamma={g}: {fast} vs {reference}"
            );
        }
    }

    #[test]
    fn cdf_is_consistent_with_pdf_derivative() {
        let t = table(2.5, 3.0, 0.9, 0.5);
        for g in [0.1, 0.5, 1.0, 3.0, 8.0] {
            let h = 1e-5;
            let numeric = (snr_cdf(&t, g + h) - snr_cdf(&t, g - h)) / (2.0 * h);
            assert_relative_eq!(numeric, snr_pdf(&t, g), max_relative = 1e-6);
        }
    }

    #[test]
    fn average_snr_matches_moment_of_density() {
        let p = FtrParams::new(5.5, 15.0, 0.4, 0.7).unwrap();
        let b = LinkBudget::unit();
        let t = build_coefficient_table(&p, &Truncation::default()).unwrap();
        // Mixture mean = sum_j w_j (j+1) 2 sigma^2, defect-corrected.
        let mut acc = KahanSum::new();
        for (j, &w) in t.weights().iter().enumerate() {
            acc.add(w * (j as f64 + 1.0) * 2.0 * p.sigma2);
        }
        let truncated_mean = acc.value();
        let exact = average_snr(&p, &b);
        assert!((truncated_mean - exact).abs() / exact < 1e-3);
        assert_relative_eq!(exact, 2.0 * 0.7 * 16.0, max_relative = 1e-15);
    }

    #[test]
    fn average_snr_scales_with_budget_and_inverts() {
        let b = LinkBudget::new(2.0, 3.0, 2.5, 10.0).unwrap();
        let p = FtrParams::new(2.5, 3.0, 0.48, 1.3).unwrap();
        let snr = average_snr(&p, &b);
        assert_relative_eq!(
            snr,
            2.0 * 3.0f64.powf(-2.5) * 2.0 * 1.3 * 4.0,
            max_relative = 1e-14
        );
        let s2 = sigma2_for_avg_snr(snr, p.k, &b).unwrap();
        assert_relative_eq!(s2, 1.3, max_relative = 1e-14);
    }

    #[test]
    fn scaled_coefficient_hook_breaks_mass_balance() {
        let t = table(8.5, 5.0, 0.35, 0.5);
        let bad = t.with_scaled_coefficient(1, 1.01);
        assert!(bad.truncation_defect() < t.truncation_defect());
        assert!((bad.weight(1) / t.weight(1) - 1.01).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn cdf_is_monotone_and_bounded(
            m in 0.6f64..30.0,
            k in 0.0f64..16.0,
            delta in 0.0f64..1.0,
            scale in 0.1f64..4.0,
        ) {
            let p = FtrParams::new(m, k, delta, scale).unwrap();
            let t = build_coefficient_table(&p, &Truncation::default()).unwrap();
            let mean = 2.0 * scale * (1.0 + k);
            let mut prev = 0.0;
            for i in 0..=40 {
                let g = mean * i as f64 / 8.0;
                let f = snr_cdf(&t, g);
                prop_assert!((0.0..=1.0).contains(&f));
                prop_assert!(f + 1e-12 >= prev);
                prev = f;
            }
        }
    }
}
