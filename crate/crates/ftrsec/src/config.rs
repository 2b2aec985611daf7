//! Scenario files: flat `key = value` lines with dotted section names.
//!
//! Grammar: one `key = value` pair per line, `#` starts a full-line
//! comment, blank lines are ignored. Sections are `main.*`, `eaves.*`,
//! `budget.*`, `rate.*`, `numerics.*`, and `mc.*`; every key outside the
//! two channel sections has a default, each channel requires `m`, `k`,
//! `delta`, and exactly one of `sigma2` or `avg_snr_db`. Errors carry the
//! 1-based line of the offending entry.

use crate::error::{FtrError, Result};
use crate::ftr::{sigma2_for_avg_snr, FtrParams, LinkBudget, Truncation};
use crate::mc::{SampleConfig, WiretapSampling};
use crate::secrecy::{rate_to_nats, RateUnit, WiretapScenario};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

/// Power ratio from decibels: 10^(db/10).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Decibels from a positive power ratio.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// A fully resolved scenario: channel parameters hold the raw (pre-gain)
/// diffuse power; `budget` applies to both links.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub main: FtrParams,
    pub eaves: FtrParams,
    pub budget: LinkBudget,
    /// E_b/N_0 in dB exactly as configured, kept so serialization
    /// round-trips bit-identically.
    pub eb_n0_db: f64,
    pub rate_value: f64,
    pub rate_unit: RateUnit,
    pub truncation: Truncation,
    /// Relative tolerance handed to quadrature oracles.
    pub quad_rel_tol: f64,
    pub mc: SampleConfig,
}

struct RawEntry {
    line: usize,
    value: String,
}

type RawMap = HashMap<String, RawEntry>;

fn parse_entries(text: &str) -> Result<RawMap> {
    let mut map = RawMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(FtrError::Config {
                line,
                msg: format!("expected `key = value`, got `{trimmed}`"),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(FtrError::Config {
                line,
                msg: "key and value must both be nonempty".into(),
            });
        }
        if let Some(prev) = map.get(&key) {
            return Err(FtrError::Config {
                line,
                msg: format!("duplicate key `{key}` (first set on line {})", prev.line),
            });
        }
        map.insert(key, RawEntry { line, value });
    }
    Ok(map)
}

fn take_f64(map: &mut RawMap, key: &str) -> Result<Option<(f64, usize)>> {
    match map.remove(key) {
        None => Ok(None),
        Some(e) => match e.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some((v, e.line))),
            _ => Err(FtrError::Config {
                line: e.line,
                msg: format!("`{key}` must be a finite number, got `{}`", e.value),
            }),
        },
    }
}

fn take_usize(map: &mut RawMap, key: &str) -> Result<Option<(usize, usize)>> {
    match map.remove(key) {
        None => Ok(None),
        Some(e) => match e.value.parse::<usize>() {
            Ok(v) => Ok(Some((v, e.line))),
            Err(_) => Err(FtrError::Config {
                line: e.line,
                msg: format!("`{key}` must be a nonnegative integer, got `{}`", e.value),
            }),
        },
    }
}

fn take_u64(map: &mut RawMap, key: &str) -> Result<Option<(u64, usize)>> {
    match map.remove(key) {
        None => Ok(None),
        Some(e) => match e.value.parse::<u64>() {
            Ok(v) => Ok(Some((v, e.line))),
            Err(_) => Err(FtrError::Config {
                line: e.line,
                msg: format!("`{key}` must be a nonnegative integer, got `{}`", e.value),
            }),
        },
    }
}

fn req_f64(map: &mut RawMap, key: &str) -> Result<(f64, usize)> {
    take_f64(map, key)?
        .ok_or_else(|| FtrError::ConfigGeneral(format!("missing required key `{key}`")))
}

fn check(cond: bool, line: usize, msg: String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(FtrError::Config { line, msg })
    }
}

fn parse_budget(map: &mut RawMap) -> Result<(LinkBudget, f64)> {
    let eb_n0_db = take_f64(map, "budget.eb_n0_db")?.map_or(0.0, |(v, _)| v);
    let (r, r_line) = take_f64(map, "budget.r")?.unwrap_or((1.0, 0));
    let (eta, eta_line) = take_f64(map, "budget.eta")?.unwrap_or((2.0, 0));
    let (r_los, los_line) = take_f64(map, "budget.r_los")?.unwrap_or((1.0, 0));
    check(r > 0.0, r_line, format!("`budget.r` must be > 0, got {r}"))?;
    check(
        eta > 0.0,
        eta_line,
        format!("`budget.eta` must be > 0, got {eta}"),
    )?;
    check(
        r_los > 0.0,
        los_line,
        format!("`budget.r_los` must be > 0, got {r_los}"),
    )?;
    check(
        r <= r_los,
        r_line.max(los_line),
        format!("`budget.r` ({r}) must not exceed `budget.r_los` ({r_los})"),
    )?;
    let budget = LinkBudget::new(db_to_linear(eb_n0_db), r, eta, r_los)
        .map_err(|e| FtrError::ConfigGeneral(e.to_string()))?;
    Ok((budget, eb_n0_db))
}

fn parse_channel(map: &mut RawMap, section: &str, budget: &LinkBudget) -> Result<FtrParams> {
    let (m, m_line) = req_f64(map, &format!("{section}.m"))?;
    let (k, k_line) = req_f64(map, &format!("{section}.k"))?;
    let (delta, d_line) = req_f64(map, &format!("{section}.delta"))?;
    check(m > 0.0, m_line, format!("`{section}.m` must be > 0, got {m}"))?;
    check(
        k >= 0.0,
        k_line,
        format!("`{section}.k` must be >= 0, got {k}"),
    )?;
    check(
        (0.0..=1.0).contains(&delta),
        d_line,
        format!("`{section}.delta` must lie in [0, 1], got {delta}"),
    )?;
    let sigma2 = take_f64(map, &format!("{section}.sigma2"))?;
    let avg = take_f64(map, &format!("{section}.avg_snr_db"))?;
    let (sigma2, s_line) = match (sigma2, avg) {
        (Some(s), None) => s,
        (None, Some((db, line))) => {
            let s = sigma2_for_avg_snr(db_to_linear(db), k, budget)
                .map_err(|e| FtrError::Config {
                    line,
                    msg: e.to_string(),
                })?;
            (s, line)
        }
        (Some((_, line)), Some(_)) => {
            return Err(FtrError::Config {
                line,
                msg: format!("give exactly one of `{section}.sigma2` or `{section}.avg_snr_db`"),
            })
        }
        (None, None) => {
            return Err(FtrError::ConfigGeneral(format!(
                "section `{section}` needs one of `{section}.sigma2` or `{section}.avg_snr_db`"
            )))
        }
    };
    check(
        sigma2 > 0.0,
        s_line,
        format!("`{section}` diffuse power must resolve to > 0, got {sigma2}"),
    )?;
    FtrParams::new(m, k, delta, sigma2).map_err(|e| FtrError::ConfigGeneral(e.to_string()))
}

impl std::str::FromStr for ScenarioConfig {
    type Err = FtrError;

    fn from_str(text: &str) -> Result<Self> {
        let mut map = parse_entries(text)?;

        let (budget, eb_n0_db) = parse_budget(&mut map)?;
        let main = parse_channel(&mut map, "main", &budget)?;
        let eaves = parse_channel(&mut map, "eaves", &budget)?;

        let (rate_value, rate_line) = take_f64(&mut map, "rate.value")?.unwrap_or((0.0, 0));
        check(
            rate_value >= 0.0,
            rate_line,
            format!("`rate.value` must be >= 0, got {rate_value}"),
        )?;
        let rate_unit = match map.remove("rate.unit") {
            None => RateUnit::Bits,
            Some(e) => e.value.parse::<RateUnit>().map_err(|err| FtrError::Config {
                line: e.line,
                msg: err.to_string(),
            })?,
        };

        let (target_eps, eps_line) =
            take_f64(&mut map, "numerics.target_eps")?.unwrap_or((1e-5, 0));
        check(
            target_eps > 0.0 && target_eps <= 1.0,
            eps_line,
            format!("`numerics.target_eps` must lie in (0, 1], got {target_eps}"),
        )?;
        let (n_max, n_line) = take_usize(&mut map, "numerics.n_max")?.unwrap_or((200, 0));
        check(
            (1..=10_000).contains(&n_max),
            n_line,
            format!("`numerics.n_max` must lie in [1, 10000], got {n_max}"),
        )?;
        let truncation = Truncation { target_eps, n_max };
        let (quad_rel_tol, q_line) =
            take_f64(&mut map, "numerics.quad_rel_tol")?.unwrap_or((1e-10, 0));
        check(
            (1e-14..=1e-2).contains(&quad_rel_tol),
            q_line,
            format!("`numerics.quad_rel_tol` must lie in [1e-14, 1e-2], got {quad_rel_tol}"),
        )?;

        let (samples, samples_line) =
            take_usize(&mut map, "mc.samples")?.unwrap_or((1_000_000, 0));
        check(
            samples >= 1,
            samples_line,
            format!("`mc.samples` must be >= 1, got {samples}"),
        )?;
        let seed = take_u64(&mut map, "mc.seed")?.map_or(1, |(v, _)| v);
        let mc = SampleConfig {
            n_samples: samples,
            seed,
            ..SampleConfig::default()
        };

        if let Some((key, entry)) = map.iter().min_by_key(|(_, e)| e.line) {
            return Err(FtrError::Config {
                line: entry.line,
                msg: format!("unknown key `{key}`"),
            });
        }

        Ok(Self {
            main,
            eaves,
            budget,
            eb_n0_db,
            rate_value,
            rate_unit,
            truncation,
            quad_rel_tol,
            mc,
        })
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            FtrError::ConfigGeneral(format!("cannot read {}: {e}", path.display()))
        })?;
        text.parse()
    }

    /// Secrecy rate in nats.
    pub fn rate_nats(&self) -> Result<f64> {
        rate_to_nats(self.rate_value, self.rate_unit)
    }

    /// Physical sampling description: raw parameters plus the shared budget.
    pub fn sampling(&self) -> Result<WiretapSampling> {
        Ok(WiretapSampling {
            main: self.main,
            main_budget: self.budget,
            eaves: self.eaves,
            eaves_budget: self.budget,
            rate_nats: self.rate_nats()?,
        })
    }

    /// Effective scenario for the closed forms (budget gain folded in).
    pub fn scenario(&self) -> Result<WiretapScenario> {
        self.sampling()?.effective_scenario()
    }

    /// Canonical serialization. Floats use the shortest round-tripping
    /// decimal form, so parsing the output reproduces every resolved value
    /// bit for bit.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# canonical scenario (diffuse powers resolved)");
        for (name, p) in [("main", &self.main), ("eaves", &self.eaves)] {
            let _ = writeln!(s, "{name}.m = {}", p.m);
            let _ = writeln!(s, "{name}.k = {}", p.k);
            let _ = writeln!(s, "{name}.delta = {}", p.delta);
            let _ = writeln!(s, "{name}.sigma2 = {}", p.sigma2);
        }
        let _ = writeln!(s, "budget.eb_n0_db = {}", self.eb_n0_db);
        let _ = writeln!(s, "budget.r = {}", self.budget.r);
        let _ = writeln!(s, "budget.eta = {}", self.budget.eta);
        let _ = writeln!(s, "budget.r_los = {}", self.budget.r_los);
        let _ = writeln!(s, "rate.value = {}", self.rate_value);
        let unit = match self.rate_unit {
            RateUnit::Nats => "nats",
            RateUnit::Bits => "bits",
        };
        let _ = writeln!(s, "rate.unit = {unit}");
        let _ = writeln!(s, "numerics.target_eps = {}", self.truncation.target_eps);
        let _ = writeln!(s, "numerics.n_max = {}", self.truncation.n_max);
        let _ = writeln!(s, "numerics.quad_rel_tol = {}", self.quad_rel_tol);
        let _ = writeln!(s, "mc.samples = {}", self.mc.n_samples);
        let _ = writeln!(s, "mc.seed = {}", self.mc.seed);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
main.m = 5.5
main.k = 15
main.delta = 0.4
main.sigma2 = 0.7

# eavesdropper
eaves.m = 8.5
eaves.k = 5
eaves.delta = 0.35
eaves.sigma2 = 0.4
";

    fn parse(text: &str) -> Result<ScenarioConfig> {
        text.parse()
    }

    #[test]
    fn minimal_config_gets_documented_defaults() {
        let c = parse(MINIMAL).unwrap();
        assert_eq!(c.main.m, 5.5);
        assert_eq!(c.eaves.sigma2, 0.4);
        assert_eq!(c.budget.gain(), 1.0);
        assert_eq!(c.rate_value, 0.0);
        assert_eq!(c.rate_unit, RateUnit::Bits);
        assert_eq!(c.truncation.target_eps, 1e-5);
        assert_eq!(c.truncation.n_max, 200);
        assert_eq!(c.quad_rel_tol, 1e-10);
        assert_eq!(c.mc.n_samples, 1_000_000);
        assert_eq!(c.mc.seed, 1);
    }

    #[test]
    fn avg_snr_db_resolves_diffuse_power_through_the_budget() {
        let text = "\
main.m = 5.5
main.k = 15
main.delta = 0.4
main.avg_snr_db = 10
eaves.m = 8.5
eaves.k = 5
eaves.delta = 0.35
eaves.sigma2 = 0.4
budget.eb_n0_db = 3
budget.r = 2
budget.eta = 2.5
budget.r_los = 4
";
        let c = parse(text).unwrap();
        // Resolved sigma2 must reproduce the requested mean SNR exactly.
        let mean = crate::ftr::average_snr(&c.main, &c.budget);
        assert!((linear_to_db(mean) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn error_lines_point_at_the_offending_entry() {
        let broken = MINIMAL.replace("main.delta = 0.4", "main.delta = 1.4");
        match parse(&broken).unwrap_err() {
            FtrError::Config { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("main.delta"), "{msg}");
            }
            other => panic!("expected line-tagged error, got {other}"),
        }
    }

    #[test]
    fn sigma2_and_avg_snr_are_mutually_exclusive() {
        let both = format!("{MINIMAL}main.avg_snr_db = 5\n");
        let err = parse(&both).unwrap_err();
        assert!(err.to_string().contains("exactly one"), "{err}");
        assert_eq!(err.exit_code(), 2);

        let neither = MINIMAL.replace("eaves.sigma2 = 0.4", "");
        let err = parse(&neither).unwrap_err();
        assert!(err.to_string().contains("eaves.sigma2"), "{err}");
    }

    #[test]
    fn unknown_duplicate_and_malformed_keys_are_rejected_with_lines() {
        let unknown = format!("{MINIMAL}main.shape = 2\n");
        match parse(&unknown).unwrap_err() {
            FtrError::Config { line, msg } => {
                assert_eq!(line, 11);
                assert!(msg.contains("main.shape"), "{msg}");
            }
            other => panic!("unexpected {other}"),
        }

        let dup = format!("{MINIMAL}main.m = 6\n");
        assert!(parse(&dup).unwrap_err().to_string().contains("duplicate"));

        let noeq = MINIMAL.replace("main.k = 15", "main.k 15");
        match parse(&noeq).unwrap_err() {
            FtrError::Config { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other}"),
        }

        let bad = MINIMAL.replace("eaves.k = 5", "eaves.k = five");
        assert!(parse(&bad).unwrap_err().to_string().contains("finite number"));
    }

    #[test]
    fn round_trip_reproduces_every_resolved_value() {
        let text = format!(
            "{MINIMAL}budget.eb_n0_db = 2.5\nbudget.r = 1.7\nbudget.eta = 3.1\n\
             budget.r_los = 2.0\nrate.value = 1.5\nrate.unit = nats\n\
             numerics.target_eps = 1e-6\nnumerics.n_max = 300\n\
             numerics.quad_rel_tol = 1e-11\nmc.samples = 250000\nmc.seed = 9\n"
        );
        let a = parse(&text).unwrap();
        let b = parse(&a.to_text()).unwrap();
        assert_eq!(a.main.sigma2.to_bits(), b.main.sigma2.to_bits());
        assert_eq!(a.eaves.m.to_bits(), b.eaves.m.to_bits());
        assert_eq!(a.budget.gain().to_bits(), b.budget.gain().to_bits());
        assert_eq!(a.rate_nats().unwrap().to_bits(), b.rate_nats().unwrap().to_bits());
        assert_eq!(a.truncation.n_max, b.truncation.n_max);
        assert_eq!(a.quad_rel_tol.to_bits(), b.quad_rel_tol.to_bits());
        assert_eq!(a.mc.seed, b.mc.seed);
        assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn avg_snr_round_trips_to_the_same_scenario() {
        let text = "\
main.m = 2.5
main.k = 3
main.delta = 0.9
main.avg_snr_db = 7.3
eaves.m = 2.5
eaves.k = 3
eaves.delta = 0.9
eaves.sigma2 = 0.5
budget.eb_n0_db = -2
";
        let a: ScenarioConfig = text.parse().unwrap();
        let b: ScenarioConfig = a.to_text().parse().unwrap();
        let sa = a.scenario().unwrap();
        let sb = b.scenario().unwrap();
        assert_eq!(sa.main.sigma2.to_bits(), sb.main.sigma2.to_bits());
        assert_eq!(sa.eaves.sigma2.to_bits(), sb.eaves.sigma2.to_bits());
    }

    #[test]
    fn budget_geometry_is_validated() {
        let text = format!("{MINIMAL}budget.r = 3\nbudget.r_los = 2\n");
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("r_los"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rate_parses_units_and_rejects_nonsense() {
        let nats = format!("{MINIMAL}rate.value = 2\nrate.unit = nats\n");
        assert_eq!(parse(&nats).unwrap().rate_nats().unwrap(), 2.0);
        let bits = format!("{MINIMAL}rate.value = 2\n");
        assert!(
            (parse(&bits).unwrap().rate_nats().unwrap() - 2.0 * std::f64::consts::LN_2).abs()
                < 1e-15
        );
        let junk = format!("{MINIMAL}rate.unit = furlongs\n");
        assert!(parse(&junk).unwrap_err().to_string().contains("furlongs"));
        let negative = format!("{MINIMAL}rate.value = -1\n");
        assert!(parse(&negative).is_err());
    }
}
