//! Helpers shared by the integration tests: an independent composite
//! Simpson integrator (deliberately not the crate's Gauss-Legendre code)
//! and builders for the pinned benchmark parameter sets.

#![allow(dead_code)]

use ftrsec::ftr::FtrParams;
use ftrsec::secrecy::{rate_to_nats, RateUnit, WiretapScenario};

/// Composite Simpson rule with `n` panels (n even). Plain summation is
/// adequate here: positive integrands keep the relative rounding error
/// near n * machine-eps.
pub fn simpson<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    assert!(n >= 2 && n.is_multiple_of(2), "simpson needs an even panel count");
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    for i in (1..n).step_by(2) {
        odd += f((i as f64).mul_add(h, a));
    }
    let mut even = 0.0;
    for i in (2..n).step_by(2) {
        even += f((i as f64).mul_add(h, a));
    }
    (f(a) + f(b) + 4.0 * odd + 2.0 * even) * h / 3.0
}

pub fn params(m: f64, k: f64, delta: f64, sigma2: f64) -> FtrParams {
    FtrParams::new(m, k, delta, sigma2).expect("valid test parameters")
}

/// Channel pinned to a mean SNR in dB under a unit budget:
/// sigma2 = 10^(db/10) / (2 (1 + K)).
pub fn params_snr_db(m: f64, k: f64, delta: f64, snr_db: f64) -> FtrParams {
    let sigma2 = 10f64.powf(snr_db / 10.0) / (2.0 * (1.0 + k));
    params(m, k, delta, sigma2)
}

pub fn scenario_bits(main: FtrParams, eaves: FtrParams, rate_bits: f64) -> WiretapScenario {
    let rate = rate_to_nats(rate_bits, RateUnit::Bits).expect("valid rate");
    WiretapScenario::new(main, eaves, rate).expect("valid scenario")
}

/// Main/eavesdropper channels used by the ASC and outage benchmark plots.
pub fn benchmark_pair_snr_db(gamma_d_db: f64, gamma_e_db: f64) -> (FtrParams, FtrParams) {
    (
        params_snr_db(5.5, 15.0, 0.4, gamma_d_db),
        params_snr_db(8.5, 5.0, 0.35, gamma_e_db),
    )
}

/// Relative agreement gate with an absolute floor for near-zero values.
pub fn within_rel_or_floor(got: f64, want: f64, rel: f64, floor: f64) -> bool {
    (got - want).abs() <= (rel * want.abs()).max(floor)
}
