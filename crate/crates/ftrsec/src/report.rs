//! Command implementations behind the CLI: truncation tables, metric
//! evaluation, parameter sweeps with CSV output, and the
//! analytic-vs-Monte-Carlo validation gate. All report text is a pure
//! function of (config, flags), so repeated runs are byte-identical.

use crate::config::{db_to_linear, ScenarioConfig};
use crate::error::{FtrError, Result};
use crate::ftr::{
    average_snr, build_coefficient_table, sigma2_for_avg_snr, truncation_error, Truncation,
};
use crate::mc::{self, EstimateWithError, SampleConfig, WiretapSampling};
use crate::secrecy::{self, MetricResult, WiretapScenario};
use rayon::prelude::*;
use std::fmt::Write as _;

/// Floats in reports and CSV cells carry 9 significant digits.
pub fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Closed form vs quadrature oracle acceptance band.
pub const ORACLE_REL_GATE: f64 = 1e-4;
pub const ORACLE_ABS_GATE: f64 = 1e-8;

/// Monte Carlo agreement limit in standard errors.
pub const MC_SIGMA_LIMIT: f64 = 4.0;

pub fn oracle_tolerance(value: f64) -> f64 {
    (ORACLE_REL_GATE * value.abs()).max(ORACLE_ABS_GATE)
}

/// MC agreement: within `MC_SIGMA_LIMIT` standard errors, or (for binary
/// estimators that saw zero failures) within the 3/n exact-binomial bound.
fn mc_agrees(est: &EstimateWithError, reference: f64) -> bool {
    est.sigmas_from(reference) <= MC_SIGMA_LIMIT
        || (reference - est.mean).abs() <= 3.0 / est.n as f64
}

/// Rendered command output; `gate_failed` requests exit code 4 without
/// being an execution error.
#[derive(Debug)]
pub struct CommandOutput {
    pub text: String,
    pub gate_failed: bool,
}

/// Secrecy metric selector shared by `metric` and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Asc,
    Sop,
    SopLower,
    Spsc,
}

impl std::str::FromStr for Metric {
    type Err = FtrError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "asc" => Ok(Metric::Asc),
            "sop" => Ok(Metric::Sop),
            "sopl" | "sop_lower" => Ok(Metric::SopLower),
            "spsc" => Ok(Metric::Spsc),
            other => Err(FtrError::InvalidParam(format!(
                "unknown metric '{other}' (expected asc|sop|sopl|spsc)"
            ))),
        }
    }
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Asc => "asc",
            Metric::Sop => "sop",
            Metric::SopLower => "sopl",
            Metric::Spsc => "spsc",
        }
    }

    pub fn evaluate(self, scenario: &WiretapScenario, trunc: &Truncation) -> Result<MetricResult> {
        match self {
            Metric::Asc => secrecy::asc(scenario, trunc),
            Metric::Sop => secrecy::sop(scenario, trunc),
            Metric::SopLower => secrecy::sop_lower(scenario, trunc),
            Metric::Spsc => secrecy::spsc(scenario, trunc),
        }
    }

    pub fn oracle(
        self,
        scenario: &WiretapScenario,
        trunc: &Truncation,
        rel_tol: f64,
    ) -> Result<f64> {
        match self {
            Metric::Asc => secrecy::asc_quadrature_oracle_tol(scenario, trunc, rel_tol),
            Metric::Sop => secrecy::sop_quadrature_oracle_tol(scenario, trunc, rel_tol),
            Metric::SopLower => secrecy::sop_lower_quadrature_oracle_tol(scenario, trunc, rel_tol),
            Metric::Spsc => secrecy::spsc_quadrature_oracle_tol(scenario, trunc, rel_tol),
        }
    }

    pub fn mc_estimate(
        self,
        sampling: &WiretapSampling,
        cfg: &SampleConfig,
    ) -> Result<EstimateWithError> {
        match self {
            Metric::Asc => mc::estimate_asc(sampling, cfg),
            Metric::Sop => mc::estimate_sop(sampling, cfg),
            Metric::SopLower => mc::estimate_sop_lower(sampling, cfg),
            Metric::Spsc => mc::estimate_spsc(sampling, cfg),
        }
    }
}

/// Truncation table for both channels: rows (m, K, delta, N, eps), with a
/// minimality self-check eps(N) <= target < eps(N-1). Exceeding n_max is a
/// non-convergence error.
pub fn cmd_truncation(config: &ScenarioConfig) -> Result<String> {
    let trunc = config.truncation;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "truncation report: target_eps = {}, n_max = {}",
        trunc.target_eps, trunc.n_max
    );
    let _ = writeln!(out, "channel,m,k,delta,n_trunc,eps");
    let mut minimal = true;
    for (name, params) in [("main", &config.main), ("eaves", &config.eaves)] {
        let table = build_coefficient_table(params, &trunc)?;
        if !table.converged() {
            return Err(FtrError::NonConvergence(format!(
                "{name} channel still has mass defect {:.3e} after n_max = {} terms \
                 (target_eps = {})",
                table.truncation_defect(),
                trunc.n_max,
                trunc.target_eps
            )));
        }
        let n = table.n_trunc();
        minimal &= n == 0 || truncation_error(&table, n - 1)? > trunc.target_eps;
        let _ = writeln!(
            out,
            "{name},{},{},{},{n},{}",
            params.m,
            params.k,
            params.delta,
            fmt9(table.truncation_defect())
        );
    }
    let _ = writeln!(
        out,
        "self-check eps(N) <= target_eps < eps(N-1): {}",
        if minimal { "ok" } else { "violated" }
    );
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MetricFlags {
    pub oracle: bool,
    pub mc: bool,
}

/// Single metric evaluation with optional quadrature-oracle gate and
/// Monte Carlo cross-check.
pub fn cmd_metric(
    config: &ScenarioConfig,
    metric: Metric,
    flags: &MetricFlags,
) -> Result<CommandOutput> {
    let scenario = config.scenario()?;
    let r = metric.evaluate(&scenario, &config.truncation)?;
    let mut out = String::new();
    let _ = writeln!(out, "metric = {}", metric.name());
    let _ = writeln!(out, "value = {}", fmt9(r.value));
    let _ = writeln!(out, "n_trunc_main = {}", r.n_trunc_main);
    let _ = writeln!(out, "n_trunc_eaves = {}", r.n_trunc_eaves);
    let _ = writeln!(out, "eps_bound = {}", fmt9(r.eps_bound));
    for w in &r.warnings {
        let _ = writeln!(out, "warning = {w}");
    }
    let mut gate_failed = false;
    if flags.oracle {
        let o = metric.oracle(&scenario, &config.truncation, config.quad_rel_tol)?;
        let delta = r.value - o;
        let ok = delta.abs() <= oracle_tolerance(r.value);
        let _ = writeln!(out, "oracle = {}", fmt9(o));
        let _ = writeln!(out, "oracle_delta = {}", fmt9(delta));
        let _ = writeln!(
            out,
            "oracle_check = {} (|delta| <= max({ORACLE_REL_GATE:e}*|value|, {ORACLE_ABS_GATE:e}))",
            if ok { "PASS" } else { "FAIL" }
        );
        gate_failed |= !ok;
    }
    if flags.mc {
        let est = metric.mc_estimate(&config.sampling()?, &config.mc)?;
        let _ = writeln!(out, "mc_mean = {}", fmt9(est.mean));
        let _ = writeln!(out, "mc_stderr = {}", fmt9(est.std_error));
        let _ = writeln!(out, "mc_sigmas = {:.2}", est.sigmas_from(r.value));
    }
    Ok(CommandOutput {
        text: out,
        gate_failed,
    })
}

/// Sweep variable: which scenario knob the x-axis drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    /// Main-link mean SNR in dB (adjusts main.sigma2 through the budget).
    GammaDDb,
    /// Eavesdropper mean SNR in dB.
    GammaEDb,
    /// Mean-SNR ratio main/eavesdropper in dB (adjusts main.sigma2).
    RhoDb,
    /// Secrecy rate in the config's rate unit.
    Rate,
}

impl std::str::FromStr for SweepVar {
    type Err = FtrError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gamma_d_db" => Ok(SweepVar::GammaDDb),
            "gamma_e_db" => Ok(SweepVar::GammaEDb),
            "rho_db" => Ok(SweepVar::RhoDb),
            "rate" => Ok(SweepVar::Rate),
            other => Err(FtrError::InvalidParam(format!(
                "unknown sweep variable '{other}' (expected gamma_d_db|gamma_e_db|rho_db|rate)"
            ))),
        }
    }
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::GammaDDb => "gamma_d_db",
            SweepVar::GammaEDb => "gamma_e_db",
            SweepVar::RhoDb => "rho_db",
            SweepVar::Rate => "rate",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepRequest {
    pub var: SweepVar,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub metric: Metric,
    pub oracle: bool,
    pub mc: bool,
}

pub const CSV_HEADER: &str =
    "sweep_var,value,metric,analytic,oracle,mc_mean,mc_stderr,n_trunc_d,n_trunc_e";

/// Rewrites the scenario so the sweep variable takes value `v`.
fn apply_sweep_value(config: &ScenarioConfig, var: SweepVar, v: f64) -> Result<ScenarioConfig> {
    let mut out = config.clone();
    match var {
        SweepVar::GammaDDb => {
            let s2 = sigma2_for_avg_snr(db_to_linear(v), config.main.k, &config.budget)?;
            out.main = config.main.with_sigma2(s2)?;
        }
        SweepVar::GammaEDb => {
            let s2 = sigma2_for_avg_snr(db_to_linear(v), config.eaves.k, &config.budget)?;
            out.eaves = config.eaves.with_sigma2(s2)?;
        }
        SweepVar::RhoDb => {
            // Both links share the budget, so the raw sigma2 ratio equals
            // the effective mean-SNR ratio.
            let rho = db_to_linear(v);
            let s2 =
                rho * config.eaves.sigma2 * (1.0 + config.eaves.k) / (1.0 + config.main.k);
            out.main = config.main.with_sigma2(s2)?;
        }
        SweepVar::Rate => {
            if v < 0.0 {
                return Err(FtrError::InvalidParam(format!(
                    "rate sweep values must be >= 0, got {v}"
                )));
            }
            out.rate_value = v;
        }
    }
    Ok(out)
}

fn sweep_row(config: &ScenarioConfig, req: &SweepRequest, v: f64) -> Result<(String, bool)> {
    let point = apply_sweep_value(config, req.var, v)?;
    let scenario = point.scenario()?;
    let r = req.metric.evaluate(&scenario, &point.truncation)?;
    let mut gate_failed = false;
    let oracle_cell = if req.oracle {
        let o = req.metric.oracle(&scenario, &point.truncation, point.quad_rel_tol)?;
        gate_failed = (r.value - o).abs() > oracle_tolerance(r.value);
        fmt9(o)
    } else {
        String::new()
    };
    let (mc_mean, mc_stderr) = if req.mc {
        let est = req.metric.mc_estimate(&point.sampling()?, &point.mc)?;
        (fmt9(est.mean), fmt9(est.std_error))
    } else {
        (String::new(), String::new())
    };
    let line = format!(
        "{},{},{},{},{},{},{},{},{}",
        req.var.name(),
        fmt9(v),
        req.metric.name(),
        fmt9(r.value),
        oracle_cell,
        mc_mean,
        mc_stderr,
        r.n_trunc_main,
        r.n_trunc_eaves
    );
    Ok((line, gate_failed))
}

/// Evaluates the metric over an inclusive linear grid and renders the CSV.
/// Points run concurrently; rows are emitted in sweep order.
pub fn cmd_sweep(config: &ScenarioConfig, req: &SweepRequest) -> Result<CommandOutput> {
    if req.points < 2 {
        return Err(FtrError::InvalidParam(format!(
            "sweep needs points >= 2, got {}",
            req.points
        )));
    }
    if req.from >= req.to || !req.from.is_finite() || !req.to.is_finite() {
        return Err(FtrError::InvalidParam(format!(
            "sweep range must satisfy from < to, got [{}, {}]",
            req.from, req.to
        )));
    }
    let step = (req.to - req.from) / (req.points - 1) as f64;
    let values: Vec<f64> = (0..req.points)
        .map(|i| {
            if i + 1 == req.points {
                req.to
            } else {
                req.from + step * i as f64
            }
        })
        .collect();
    let rows: Vec<Result<(String, bool)>> = values
        .par_iter()
        .map(|&v| sweep_row(config, req, v))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "{CSV_HEADER}");
    let mut gate_failed = false;
    for row in rows {
        let (line, failed) = row?;
        gate_failed |= failed;
        let _ = writeln!(out, "{line}");
    }
    Ok(CommandOutput {
        text: out,
        gate_failed,
    })
}

/// Companion gnuplot script for a sweep CSV.
pub fn gnuplot_script(csv_path: &str, req: &SweepRequest) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# companion plot script; run: gnuplot -p <this file>");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set xlabel '{}'", req.var.name());
    let _ = writeln!(s, "set ylabel '{}'", req.metric.name());
    let _ = writeln!(s, "set grid");
    if matches!(req.metric, Metric::Sop | Metric::SopLower) {
        let _ = writeln!(s, "set logscale y");
    }
    let mut plot = format!(
        "plot '{csv_path}' skip 1 using 2:4 with linespoints title '{} analytic'",
        req.metric.name()
    );
    if req.oracle {
        plot.push_str(", '' skip 1 using 2:5 with points pt 6 title 'quadrature'");
    }
    if req.mc {
        plot.push_str(", '' skip 1 using 2:6:7 with yerrorbars title 'monte carlo'");
    }
    let _ = writeln!(s, "{plot}");
    s
}

/// Full analytic-vs-sampling gate: distribution checks per channel, metric
/// agreement against quadrature and Monte Carlo, and the exact identities.
/// `gate_failed` is set if any check fails.
pub fn cmd_validate(config: &ScenarioConfig) -> Result<CommandOutput> {
    if config.mc.n_samples < 10_000 {
        return Err(FtrError::InvalidParam(format!(
            "validate needs mc.samples >= 10000 for meaningful checks, got {}",
            config.mc.n_samples
        )));
    }
    let trunc = config.truncation;
    let scenario = config.scenario()?;
    let sampling = config.sampling()?;
    let mc_cfg = config.mc;
    let mut checks: Vec<(String, bool, String)> = Vec::new();

    for (name, raw, eff) in [
        ("main", &config.main, &scenario.main),
        ("eaves", &config.eaves, &scenario.eaves),
    ] {
        // Closed forms consume effective parameters; the sampler applies
        // the budget physically. Comparing the two exercises both paths.
        let table = build_coefficient_table(eff, &trunc)?;
        checks.push((
            format!("truncation_{name}"),
            table.converged(),
            format!(
                "N = {}, mass defect {} (target {})",
                table.n_trunc(),
                fmt9(table.truncation_defect()),
                fmt9(trunc.target_eps)
            ),
        ));
        let ks = mc::ks_statistic(raw, &config.budget, &table, &mc_cfg)?;
        checks.push((
            format!("ks_{name}"),
            ks.passes(),
            format!(
                "statistic {} vs 1% critical {}",
                fmt9(ks.statistic),
                fmt9(ks.critical_1pct)
            ),
        ));
        let (est, sigmas) = mc::mean_snr_discrepancy(raw, &config.budget, &mc_cfg)?;
        checks.push((
            format!("mean_snr_{name}"),
            sigmas <= MC_SIGMA_LIMIT,
            format!(
                "sampled {} vs analytic {} ({:.2} se, limit {})",
                fmt9(est.mean),
                fmt9(average_snr(raw, &config.budget)),
                sigmas,
                MC_SIGMA_LIMIT
            ),
        ));
    }

    for metric in [Metric::Asc, Metric::Sop, Metric::SopLower, Metric::Spsc] {
        let r = metric.evaluate(&scenario, &trunc)?;
        let o = metric.oracle(&scenario, &trunc, config.quad_rel_tol)?;
        let tol = oracle_tolerance(r.value);
        checks.push((
            format!("oracle_{}", metric.name()),
            (r.value - o).abs() <= tol,
            format!(
                "closed {} vs quadrature {} (|delta| {} <= {})",
                fmt9(r.value),
                fmt9(o),
                fmt9((r.value - o).abs()),
                fmt9(tol)
            ),
        ));
        let est = metric.mc_estimate(&sampling, &mc_cfg)?;
        checks.push((
            format!("mc_{}", metric.name()),
            mc_agrees(&est, r.value),
            format!(
                "closed {} vs sampled {} +/- {} ({:.2} se, limit {})",
                fmt9(r.value),
                fmt9(est.mean),
                fmt9(est.std_error),
                est.sigmas_from(r.value),
                MC_SIGMA_LIMIT
            ),
        ));
    }

    let zero = scenario.with_rate_nats(0.0)?;
    let spsc_v = secrecy::spsc(&scenario, &trunc)?.value;
    let sopl0 = secrecy::sop_lower(&zero, &trunc)?.value;
    let sop0 = secrecy::sop(&zero, &trunc)?.value;
    checks.push((
        "identity_spsc_complement".into(),
        (spsc_v + sopl0 - 1.0).abs() <= 1e-12,
        format!(
            "|spsc + sopl(0) - 1| = {} (limit 1e-12)",
            fmt9((spsc_v + sopl0 - 1.0).abs())
        ),
    ));
    checks.push((
        "identity_rate_zero".into(),
        (sop0 - sopl0).abs() <= 1e-10,
        format!(
            "|sop(0) - sopl(0)| = {} (limit 1e-10)",
            fmt9((sop0 - sopl0).abs())
        ),
    ));
    let sop_v = secrecy::sop(&scenario, &trunc)?.value;
    let sopl_v = secrecy::sop_lower(&scenario, &trunc)?.value;
    checks.push((
        "bound_order".into(),
        sopl_v <= sop_v,
        format!("sopl {} <= sop {}", fmt9(sopl_v), fmt9(sop_v)),
    ));

    let mut out = String::new();
    let _ = writeln!(out, "validation report");
    let _ = writeln!(
        out,
        "samples = {}, seed = {}, target_eps = {}, n_max = {}, quad_rel_tol = {}",
        mc_cfg.n_samples, mc_cfg.seed, trunc.target_eps, trunc.n_max, config.quad_rel_tol
    );
    let mut passed = 0usize;
    for (i, (name, ok, detail)) in checks.iter().enumerate() {
        if *ok {
            passed += 1;
        }
        let _ = writeln!(
            out,
            "[{:2}] {} {:<24} {}",
            i + 1,
            if *ok { "PASS" } else { "FAIL" },
            name,
            detail
        );
    }
    let _ = writeln!(out, "summary: {passed}/{} checks passed", checks.len());
    Ok(CommandOutput {
        text: out,
        gate_failed: passed != checks.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "\
main.m = 5.5
main.k = 15
main.delta = 0.4
main.sigma2 = 0.7
eaves.m = 8.5
eaves.k = 5
eaves.delta = 0.35
eaves.sigma2 = 0.4
mc.samples = 40000
mc.seed = 7
";

    fn cfg() -> ScenarioConfig {
        BASE.parse().unwrap()
    }

    #[test]
    fn fmt9_prints_nine_significant_digits() {
        assert_eq!(fmt9(1.0), "1.00000000e0");
        assert_eq!(fmt9(-0.000123456789), "-1.23456789e-4");
        assert_eq!(fmt9(6.27e-6), "6.27000000e-6");
    }

    #[test]
    fn truncation_report_lists_both_channels_and_self_checks() {
        let text = cmd_truncation(&cfg()).unwrap();
        assert!(text.contains("channel,m,k,delta,n_trunc,eps"));
        assert!(text.contains("main,5.5,15,0.4,"));
        assert!(text.contains("eaves,8.5,5,0.35,"));
        assert!(text.ends_with("self-check eps(N) <= target_eps < eps(N-1): ok\n"));
    }

    #[test]
    fn truncation_failure_is_a_nonconvergence_error() {
        let mut c = cfg();
        c.truncation.n_max = 3;
        match cmd_truncation(&c) {
            Err(e) => assert_eq!(e.exit_code(), 3),
            Ok(_) => panic!("expected non-convergence"),
        }
    }

    #[test]
    fn metric_report_carries_oracle_gate() {
        let out = cmd_metric(&cfg(), Metric::Asc, &MetricFlags { oracle: true, mc: false })
            .unwrap();
        assert!(!out.gate_failed, "{}", out.text);
        assert!(out.text.contains("oracle_check = PASS"));
        assert!(out.text.contains("n_trunc_main = "));
    }

    #[test]
    fn sweep_emits_exact_header_and_ordered_rows() {
        let req = SweepRequest {
            var: SweepVar::RhoDb,
            from: 0.0,
            to: 8.0,
            points: 5,
            metric: Metric::SopLower,
            oracle: false,
            mc: false,
        };
        let out = cmd_sweep(&cfg(), &req).unwrap();
        let lines: Vec<&str> = out.text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 6);
        let xs: Vec<f64> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert!(lines[1].starts_with("rho_db,0.00000000e0,sopl,"));
        // Empty oracle and MC cells keep their commas.
        assert_eq!(lines[1].matches(',').count(), 8);
    }

    #[test]
    fn sweep_rejects_degenerate_ranges() {
        let base = SweepRequest {
            var: SweepVar::Rate,
            from: 1.0,
            to: 1.0,
            points: 2,
            metric: Metric::Sop,
            oracle: false,
            mc: false,
        };
        assert_eq!(cmd_sweep(&cfg(), &base).unwrap_err().exit_code(), 2);
        let few = SweepRequest {
            points: 1,
            to: 2.0,
            ..base
        };
        assert_eq!(cmd_sweep(&cfg(), &few).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn sweep_gamma_d_actually_moves_the_mean_snr() {
        let point = apply_sweep_value(&cfg(), SweepVar::GammaDDb, 12.0).unwrap();
        let mean = average_snr(&point.main, &point.budget);
        assert!((10.0 * mean.log10() - 12.0).abs() < 1e-12);
        // rho sweep fixes the effective ratio.
        let point = apply_sweep_value(&cfg(), SweepVar::RhoDb, 6.0).unwrap();
        let s = point.scenario().unwrap();
        assert!((10.0 * s.rho().log10() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn validate_small_sample_budget_is_a_config_error() {
        let mut c = cfg();
        c.mc.n_samples = 1_000;
        assert_eq!(cmd_validate(&c).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn validate_passes_and_is_deterministic_on_a_modest_budget() {
        let c = cfg();
        let a = cmd_validate(&c).unwrap();
        assert!(!a.gate_failed, "{}", a.text);
        assert!(a.text.contains("summary: "));
        assert!(!a.text.contains("FAIL"), "{}", a.text);
        let b = cmd_validate(&c).unwrap();
        assert_eq!(a.text, b.text);
    }

    #[test]
    fn gnuplot_script_references_csv_and_columns() {
        let req = SweepRequest {
            var: SweepVar::GammaEDb,
            from: -5.0,
            to: 15.0,
            points: 3,
            metric: Metric::Sop,
            oracle: true,
            mc: true,
        };
        let s = gnuplot_script("out.csv", &req);
        assert!(s.contains("plot 'out.csv'"));
        assert!(s.contains("using 2:4"));
        assert!(s.contains("using 2:5"));
        assert!(s.contains("using 2:6:7"));
        assert!(s.contains("set logscale y"));
    }
}
