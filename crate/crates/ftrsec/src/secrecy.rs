//! Closed-form secrecy metrics for a wiretap pair of independent FTR links,
//! plus the quadrature oracles used to certify them.
//!
//! With both SNR laws expanded as Erlang mixtures, every metric reduces to
//! positive sums of three primitives: cumulative scaled exponential
//! integrals (capacity terms), Poisson survival functions (outage above
//! threshold offset), and binomial survival functions (one Erlang variable
//! exceeding another). All assemblies below are cancellation-free: terms
//! are nonnegative and bounded, so truncation defect is the only error
//! source beyond machine rounding.

use crate::error::{FtrError, Result};
use crate::ftr::{build_coefficient_table, CoefficientTable, FtrParams, Truncation};
use crate::kahan::KahanSum;
use crate::quad;
use crate::special;

/// Secrecy-rate unit accepted at the interface; all internals use nats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateUnit {
    Nats,
    Bits,
}

impl std::str::FromStr for RateUnit {
    type Err = FtrError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nats" | "nat" => Ok(RateUnit::Nats),
            "bits" | "bit" => Ok(RateUnit::Bits),
            other => Err(FtrError::InvalidParam(format!(
                "unknown rate unit '{other}' (expected nats or bits)"
            ))),
        }
    }
}

/// Converts a nonnegative secrecy rate to nats.
pub fn rate_to_nats(rate: f64, unit: RateUnit) -> Result<f64> {
    if rate < 0.0 || !rate.is_finite() {
        return Err(FtrError::InvalidParam(format!(
            "secrecy rate must be finite and >= 0, got {rate}"
        )));
    }
    Ok(match unit {
        RateUnit::Nats => rate,
        RateUnit::Bits => rate * std::f64::consts::LN_2,
    })
}

/// A wiretap scenario: main link D, eavesdropper link E, and the target
/// secrecy rate in nats. The stored parameters are effective (any
/// deterministic link-budget gain is already folded into sigma2).
#[derive(Debug, Clone, Copy)]
pub struct WiretapScenario {
    pub main: FtrParams,
    pub eaves: FtrParams,
    pub rate_nats: f64,
}

impl WiretapScenario {
    pub fn new(main: FtrParams, eaves: FtrParams, rate_nats: f64) -> Result<Self> {
        if rate_nats < 0.0 || !rate_nats.is_finite() {
            return Err(FtrError::InvalidParam(format!(
                "rate_nats must be finite and >= 0, got {rate_nats}"
            )));
        }
        Ok(Self {
            main,
            eaves,
            rate_nats,
        })
    }

    /// Outage threshold Theta = e^rate; Theta = 1 at rate 0.
    pub fn theta(&self) -> f64 {
        self.rate_nats.exp()
    }

    /// Mean-SNR ratio rho between the main and eavesdropper links.
    pub fn rho(&self) -> f64 {
        (self.main.sigma2 * (1.0 + self.main.k)) / (self.eaves.sigma2 * (1.0 + self.eaves.k))
    }

    /// Same links at a different secrecy rate.
    pub fn with_rate_nats(&self, rate_nats: f64) -> Result<Self> {
        Self::new(self.main, self.eaves, rate_nats)
    }
}

/// A metric value with the truncation bookkeeping needed to judge it.
#[derive(Debug, Clone)]
pub struct MetricResult {
    pub value: f64,
    pub n_trunc_main: usize,
    pub n_trunc_eaves: usize,
    /// Sum of the two mass defects: first-order bound on truncation error.
    pub eps_bound: f64,
    pub warnings: Vec<String>,
}

/// Negative excursions beyond this magnitude are reported, not silently
/// clamped; smaller ones are rounding residue of an exact-zero limit.
const CLAMP_REPORT_THRESHOLD: f64 = 1e-6;

fn build_pair(
    scenario: &WiretapScenario,
    trunc: &Truncation,
) -> Result<(CoefficientTable, CoefficientTable, Vec<String>)> {
    let main = build_coefficient_table(&scenario.main, trunc)?;
    let eaves = build_coefficient_table(&scenario.eaves, trunc)?;
    let mut warnings = Vec::new();
    if !main.converged() {
        warnings.push(format!(
            "main-link table stopped at N={} with defect {:.3e} above target {:.3e}",
            main.n_trunc(),
            main.truncation_defect(),
            trunc.target_eps
        ));
    }
    if !eaves.converged() {
        warnings.push(format!(
            "eavesdropper table stopped at N={} with defect {:.3e} above target {:.3e}",
            eaves.n_trunc(),
            eaves.truncation_defect(),
            trunc.target_eps
        ));
    }
    Ok((main, eaves, warnings))
}

fn metric_result(
    value: f64,
    main: &CoefficientTable,
    eaves: &CoefficientTable,
    warnings: Vec<String>,
) -> MetricResult {
    MetricResult {
        value,
        n_trunc_main: main.n_trunc(),
        n_trunc_eaves: eaves.n_trunc(),
        eps_bound: main.truncation_defect() + eaves.truncation_defect(),
        warnings,
    }
}

/// cum[w] = sum over n in 1..=w of e^mu E_n(mu); cum[0] = 0. These are the
/// capacity kernels S(w, mu) with the Gamma(w) mu^-w prefactor already
/// cancelled against the Erlang normalization.
fn en_scaled_cumulative(mu: f64, up_to: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(0.0);
    let mut acc = KahanSum::new();
    for n in 1..=up_to {
        acc.add(special::exp_integral_en_scaled(n as u32, mu)?);
        out.push(acc.value());
    }
    Ok(out)
}

/// Average secrecy capacity in nats: E[ln(1+g_D) - ln(1+g_E)]^+ under
/// independent FTR fading, via the Erlang-mixture reduction.
pub fn asc(scenario: &WiretapScenario, trunc: &Truncation) -> Result<MetricResult> {
    let (main, eaves, mut warnings) = build_pair(scenario, trunc)?;
    let mu_d = 1.0 / (2.0 * scenario.main.sigma2);
    let mu_e = 1.0 / (2.0 * scenario.eaves.sigma2);
    let mu_de = mu_d + mu_e;
    let n_d = main.n_trunc();
    let n_e = eaves.n_trunc();
    let cum_d = en_scaled_cumulative(mu_d, n_d + 1)?;
    let cum_e = en_scaled_cumulative(mu_e, n_e + 1)?;
    let cum_de = en_scaled_cumulative(mu_de, n_d + n_e + 1)?;
    // p and q are the negative-binomial success/failure masses of the
    // cross terms; every coefficient below is a NB pmf value, hence <= 1.
    let p_d = mu_e / mu_de;
    let q_d = mu_d / mu_de;

    let mut total = KahanSum::new();
    for (j_d, &w_d) in main.weights().iter().enumerate() {
        if w_d == 0.0 {
            continue;
        }
        for (j_e, &w_e) in eaves.weights().iter().enumerate() {
            if w_e == 0.0 {
                continue;
            }
            let mut cross = KahanSum::new();
            // T2: main-link capacity screened by the eavesdropper CDF tail.
            let mut coef = ((j_d as f64 + 1.0) * q_d.ln()).exp();
            for n in 0..=j_e {
                if coef == 0.0 {
                    break;
                }
                cross.add(coef * cum_de[j_d + n + 1]);
                coef *= (j_d + n + 1) as f64 / (n + 1) as f64 * p_d;
            }
            // T3: mirror term with the roles of D and E exchanged.
            let mut coef = ((j_e as f64 + 1.0) * p_d.ln()).exp();
            for n in 0..=j_d {
                if coef == 0.0 {
                    break;
                }
                cross.add(coef * cum_de[j_e + n + 1]);
                coef *= (j_e + n + 1) as f64 / (n + 1) as f64 * q_d;
            }
            total.add(w_d * w_e * (cum_d[j_d + 1] + cum_e[j_e + 1] - cross.value()));
        }
    }
    for (j_e, &w_e) in eaves.weights().iter().enumerate() {
        total.add(-w_e * cum_e[j_e + 1]);
    }
    let raw = total.value();
    if raw < -CLAMP_REPORT_THRESHOLD {
        warnings.push(format!(
            "average secrecy capacity clamped from {raw:.3e} to 0"
        ));
    }
    Ok(metric_result(raw.max(0.0), &main, &eaves, warnings))
}

/// Survival function of a Poisson(x) count: sf[s] = P(X > s) for
/// s = 0..=n_max. Tail-summed from above when the mass sits below s,
/// complemented otherwise, so small values keep full relative precision.
fn poisson_sf_table(x: f64, n_max: usize, ln_fact: &[f64]) -> Vec<f64> {
    let mut sf = vec![0.0; n_max + 1];
    if x == 0.0 {
        return sf;
    }
    let ln_x = x.ln();
    for (s, slot) in sf.iter_mut().enumerate() {
        let sf64 = s as f64;
        if x <= sf64 + 1.0 {
            // P(X > s) summed upward from i = s+1: terms decay at least
            // geometrically with ratio x / (s+2) < 1.
            let mut term = ((sf64 + 1.0) * ln_x - ln_fact[s + 1] - x).exp();
            let mut acc = KahanSum::new();
            let mut i = s + 1;
            loop {
                acc.add(term);
                i += 1;
                term *= x / i as f64;
                if term < acc.value() * 1e-17 || i > s + 600 {
                    break;
                }
            }
            *slot = acc.value();
        } else {
            // Mass is mostly above s: the complement loses nothing.
            let mut acc = KahanSum::new();
            for (i, lf) in ln_fact.iter().enumerate().take(s + 1) {
                let lt = i as f64 * ln_x - lf - x;
                if lt > -745.0 {
                    acc.add(lt.exp());
                }
            }
            *slot = (1.0 - acc.value()).clamp(0.0, 1.0);
        }
    }
    sf
}

/// Survival function of a Binomial(m, p) count at k: P(X > k), with the
/// success/failure probabilities supplied in log form to avoid forming
/// 1 - p.
fn binomial_sf(k: usize, m: usize, ln_p: f64, ln_q: f64, ln_fact: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for i in (k + 1)..=m {
        let lt = ln_fact[m] - ln_fact[i] - ln_fact[m - i]
            + i as f64 * ln_p
            + (m - i) as f64 * ln_q;
        if lt > -745.0 {
            acc.add(lt.exp());
        }
    }
    acc.value().clamp(0.0, 1.0)
}

fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(0.0);
    for i in 1..=n {
        t.push(t[i - 1] + (i as f64).ln());
    }
    t
}

/// Shared kernel for sop and sop_lower. `threshold_scale` is Theta sigma_E^2
/// (the scaled eavesdropper power against which the main link competes) and
/// `poisson_x` is the Poisson intensity (Theta - 1) mu_D carrying the
/// constant threshold offset; sop_lower drops the offset, so it passes 0.
fn outage_assembly(
    main: &CoefficientTable,
    eaves: &CoefficientTable,
    threshold_scale: f64,
    poisson_x: f64,
) -> f64 {
    let sigma2_d = main.params().sigma2;
    let t = threshold_scale;
    // z = t / (t + sigma_D^2) and 1/beta = sigma_D^2 / (t + sigma_D^2):
    // the success/failure masses of the Erlang comparison.
    let z = t / (t + sigma2_d);
    let ln_z = t.ln() - (t + sigma2_d).ln();
    let ln_inv_beta = sigma2_d.ln() - (t + sigma2_d).ln();
    let n_d = main.n_trunc();
    let n_e = eaves.n_trunc();
    let ln_fact = ln_factorial_table(n_d + n_e + 2);
    let poisson_sf = poisson_sf_table(poisson_x, n_d, &ln_fact);

    let mut total = KahanSum::new();
    for (j_d, &w_d) in main.weights().iter().enumerate() {
        if w_d == 0.0 {
            continue;
        }
        for (j_e, &w_e) in eaves.weights().iter().enumerate() {
            if w_e == 0.0 {
                continue;
            }
            // Outage term = P(NB tail) + convolution of NB mass with the
            // Poisson survival of the threshold offset; all positive.
            let mut term = KahanSum::new();
            term.add(binomial_sf(j_d, j_d + j_e + 1, ln_z, ln_inv_beta, &ln_fact));
            if poisson_x > 0.0 {
                let mut nb = ((j_e as f64 + 1.0) * ln_inv_beta).exp();
                for q in 0..=j_d {
                    if nb == 0.0 {
                        break;
                    }
                    term.add(nb * poisson_sf[j_d - q]);
                    nb *= (j_e + q + 1) as f64 / (q + 1) as f64 * z;
                }
            }
            total.add(w_d * w_e * term.value());
        }
    }
    total.value().clamp(0.0, 1.0)
}

/// Exact secrecy outage probability P(ln((1+g_D)/(1+g_E)) < rate).
pub fn sop(scenario: &WiretapScenario, trunc: &Truncation) -> Result<MetricResult> {
    let (main, eaves, warnings) = build_pair(scenario, trunc)?;
    let theta = scenario.theta();
    let mu_d = 1.0 / (2.0 * scenario.main.sigma2);
    let value = outage_assembly(
        &main,
        &eaves,
        theta * scenario.eaves.sigma2,
        (theta - 1.0) * mu_d,
    );
    Ok(metric_result(value, &main, &eaves, warnings))
}

/// Lower bound on the outage probability: P(g_D < Theta g_E), dropping the
/// additive Theta - 1 offset. Coincides with `sop` exactly at rate 0.
pub fn sop_lower(scenario: &WiretapScenario, trunc: &Truncation) -> Result<MetricResult> {
    let (main, eaves, warnings) = build_pair(scenario, trunc)?;
    let theta = scenario.theta();
    let value = outage_assembly(&main, &eaves, theta * scenario.eaves.sigma2, 0.0);
    Ok(metric_result(value, &main, &eaves, warnings))
}

/// Probability of strictly positive secrecy capacity P(g_D > g_E); the
/// scenario's rate is irrelevant because strict positivity is a rate-0
/// event. Defined as the exact complement of `sop_lower` at rate 0.
pub fn spsc(scenario: &WiretapScenario, trunc: &Truncation) -> Result<MetricResult> {
    let at_zero = scenario.with_rate_nats(0.0)?;
    let mut lower = sop_lower(&at_zero, trunc)?;
    lower.value = 1.0 - lower.value;
    Ok(lower)
}

fn oracle_integral(
    trunc_label: &str,
    out: quad::QuadOutcome,
) -> Result<f64> {
    if !out.converged {
        return Err(FtrError::NonConvergence(format!(
            "{trunc_label} oracle quadrature hit its refinement cap"
        )));
    }
    Ok(out.value)
}

const ORACLE_REL_TOL: f64 = 1e-10;

/// Quadrature route to the average secrecy capacity, sharing only the
/// pdf/cdf primitives with the closed form:
/// I1 + I2 - I3 with I1 = int ln(1+g) f_D F_E, I2 = int ln(1+g) f_E F_D,
/// I3 = int ln(1+g) f_E.
pub fn asc_quadrature_oracle(scenario: &WiretapScenario, trunc: &Truncation) -> Result<f64> {
    asc_quadrature_oracle_tol(scenario, trunc, ORACLE_REL_TOL)
}

/// Same oracle at an explicit quadrature tolerance.
pub fn asc_quadrature_oracle_tol(
    scenario: &WiretapScenario,
    trunc: &Truncation,
    rel_tol: f64,
) -> Result<f64> {
    let (main, eaves, _) = build_pair(scenario, trunc)?;
    let i1 = oracle_integral(
        "asc I1",
        quad::integrate_zero_inf(rel_tol, |g| {
            g.ln_1p() * crate::ftr::snr_pdf(&main, g) * crate::ftr::snr_cdf(&eaves, g)
        }),
    )?;
    let i2 = oracle_integral(
        "asc I2",
        quad::integrate_zero_inf(rel_tol, |g| {
            g.ln_1p() * crate::ftr::snr_pdf(&eaves, g) * crate::ftr::snr_cdf(&main, g)
        }),
    )?;
    let i3 = oracle_integral(
        "asc I3",
        quad::integrate_zero_inf(rel_tol, |g| g.ln_1p() * crate::ftr::snr_pdf(&eaves, g)),
    )?;
    Ok(i1 + i2 - i3)
}

/// Quadrature route to the exact outage probability:
/// int F_D(Theta g + Theta - 1) f_E(g) dg.
pub fn sop_quadrature_oracle(scenario: &WiretapScenario, trunc: &Truncation) -> Result<f64> {
    sop_quadrature_oracle_tol(scenario, trunc, ORACLE_REL_TOL)
}

/// Same oracle at an explicit quadrature tolerance.
pub fn sop_quadrature_oracle_tol(
    scenario: &WiretapScenario,
    trunc: &Truncation,
    rel_tol: f64,
) -> Result<f64> {
    let (main, eaves, _) = build_pair(scenario, trunc)?;
    let theta = scenario.theta();
    oracle_integral(
        "sop",
        quad::integrate_zero_inf(rel_tol, |g| {
            crate::ftr::snr_cdf(&main, theta.mul_add(g, theta - 1.0))
                * crate::ftr::snr_pdf(&eaves, g)
        }),
    )
}

/// Quadrature route to the outage lower bound: int F_D(Theta g) f_E(g) dg.
pub fn sop_lower_quadrature_oracle(
    scenario: &WiretapScenario,
    trunc: &Truncation,
) -> Result<f64> {
    sop_lower_quadrature_oracle_tol(scenario, trunc, ORACLE_REL_TOL)
}

/// Same oracle at an explicit quadrature tolerance.
pub fn sop_lower_quadrature_oracle_tol(
    scenario: &WiretapScenario,
    trunc: &Truncation,
    rel_tol: f64,
) -> Result<f64> {
    let (main, eaves, _) = build_pair(scenario, trunc)?;
    let theta = scenario.theta();
    oracle_integral(
        "sop_lower",
        quad::integrate_zero_inf(rel_tol, |g| {
            crate::ftr::snr_cdf(&main, theta * g) * crate::ftr::snr_pdf(&eaves, g)
        }),
    )
}

/// Complement route to strict positivity: 1 - sop_lower at rate 0.
pub fn spsc_quadrature_oracle_tol(
    scenario: &WiretapScenario,
    trunc: &Truncation,
    rel_tol: f64,
) -> Result<f64> {
    let zero_rate = scenario.with_rate_nats(0.0)?;
    Ok(1.0 - sop_lower_quadrature_oracle_tol(&zero_rate, trunc, rel_tol)?)
}
