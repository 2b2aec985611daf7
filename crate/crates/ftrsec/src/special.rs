//! Special functions needed by the secrecy metrics: log-gamma, the lower
//! incomplete gamma function, the generalized exponential integral E_n (plain
//! and exponentially scaled), the upper incomplete gamma function at
//! nonpositive integer order, and the secrecy kernel
//! S(w, mu) = integral of ln(1+t) t^(w-1) e^(-mu t) over t in [0, inf).

use crate::error::{FtrError, Result};
use crate::kahan::KahanSum;
use crate::quad;

/// Iteration budget and target accuracy for series and continued fractions.
#[derive(Debug, Clone, Copy)]
pub struct SpecialFnAccuracy {
    /// Relative term size at which a series or continued fraction stops.
    pub target_rel: f64,
    /// Hard iteration cap before reporting non-convergence.
    pub max_iter: usize,
}

impl Default for SpecialFnAccuracy {
    fn default() -> Self {
        Self {
            target_rel: 1e-15,
            max_iter: 500,
        }
    }
}

impl SpecialFnAccuracy {
    pub fn validate(&self) -> Result<()> {
        if !self.target_rel.is_finite() || self.target_rel <= 0.0 || self.target_rel >= 1e-3 {
            return Err(FtrError::InvalidParam(format!(
                "target_rel must lie in (0, 1e-3), got {}",
                self.target_rel
            )));
        }
        if self.max_iter < 10 {
            return Err(FtrError::InvalidParam(format!(
                "max_iter must be at least 10, got {}",
                self.max_iter
            )));
        }
        Ok(())
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_7;
const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;

/// Lanczos coefficients for g = 607/128, accurate to ~1e-15 over the
/// positive axis.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162e-6,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(FtrError::Domain(format!(
            "ln_gamma requires finite x > 0, got {x}"
        )));
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos sum on its accurate branch.
        let sin_pi_x = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI.ln() - sin_pi_x.ln() - lanczos_ln_gamma(1.0 - x));
    }
    Ok(lanczos_ln_gamma(x))
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_TWO_PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
/// by power series for x < a + 1 and by the Lentz continued fraction for
/// the complement otherwise.
pub fn regularized_lower_gamma(a: f64, x: f64) -> Result<f64> {
    if a <= 0.0 || !a.is_finite() {
        return Err(FtrError::Domain(format!(
            "regularized_lower_gamma requires a > 0, got {a}"
        )));
    }
    if x < 0.0 || !x.is_finite() {
        return Err(FtrError::Domain(format!(
            "regularized_lower_gamma requires finite x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let acc = SpecialFnAccuracy::default();
    let ln_prefactor = a * x.ln() - x - ln_gamma(a)?;
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = KahanSum::new();
        sum.add(term);
        for n in 1..=acc.max_iter {
            term *= x / (a + n as f64);
            sum.add(term);
            if term.abs() < sum.value().abs() * acc.target_rel {
                return Ok((sum.value() * ln_prefactor.exp()).min(1.0));
            }
        }
        Err(FtrError::NonConvergence(format!(
            "lower-gamma series stalled at a={a}, x={x}"
        )))
    } else {
        // Lentz continued fraction for Q(a, x).
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=acc.max_iter {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an.mul_add(d, b);
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < acc.target_rel {
                let q = ln_prefactor.exp() * h;
                return Ok((1.0 - q).clamp(0.0, 1.0));
            }
        }
        Err(FtrError::NonConvergence(format!(
            "upper-gamma continued fraction stalled at a={a}, x={x}"
        )))
    }
}

/// Lower incomplete gamma function gamma(a, x); overflows to +inf for
/// a beyond ~171 where Gamma(a) itself overflows.
pub fn lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    let p = regularized_lower_gamma(a, x)?;
    Ok(p * ln_gamma(a)?.exp())
}

/// Generalized exponential integral E_n(x) for n >= 1, x > 0: power series
/// with the digamma term for x <= 1, Lentz continued fraction beyond.
pub fn exp_integral_en(n: u32, x: f64) -> Result<f64> {
    if x > 1.0 {
        Ok(en_continued_fraction(n, x)? * (-x).exp())
    } else {
        en_series(n, x)
    }
}

/// Exponentially scaled variant e^x E_n(x): the continued fraction yields
/// it directly, so it stays finite for arbitrarily large x.
pub fn exp_integral_en_scaled(n: u32, x: f64) -> Result<f64> {
    if x > 1.0 {
        en_continued_fraction(n, x)
    } else {
        Ok(en_series(n, x)? * x.exp())
    }
}

fn en_domain_check(n: u32, x: f64) -> Result<()> {
    if n == 0 {
        return Err(FtrError::Domain("E_n requires n >= 1".into()));
    }
    if x <= 0.0 || !x.is_finite() {
        return Err(FtrError::Domain(format!(
            "E_n requires finite x > 0, got {x}"
        )));
    }
    Ok(())
}

/// Continued fraction value of e^x E_n(x), valid for x > 1.
fn en_continued_fraction(n: u32, x: f64) -> Result<f64> {
    en_domain_check(n, x)?;
    let acc = SpecialFnAccuracy::default();
    let nm1 = (n - 1) as f64;
    let mut b = x + n as f64;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=acc.max_iter {
        let a = -(i as f64) * (nm1 + i as f64);
        b += 2.0;
        d = 1.0 / a.mul_add(d, b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < acc.target_rel {
            return Ok(h);
        }
    }
    Err(FtrError::NonConvergence(format!(
        "E_n continued fraction stalled at n={n}, x={x}"
    )))
}

/// Power-series value of E_n(x), valid for 0 < x <= 1.
fn en_series(n: u32, x: f64) -> Result<f64> {
    en_domain_check(n, x)?;
    let acc = SpecialFnAccuracy::default();
    let nm1 = n - 1;
    let mut ans = if nm1 == 0 {
        -x.ln() - EULER_GAMMA
    } else {
        1.0 / nm1 as f64
    };
    let mut fact = 1.0;
    for i in 1..=acc.max_iter {
        fact *= -x / i as f64;
        let del = if i != nm1 as usize {
            -fact / (i as f64 - nm1 as f64)
        } else {
            // The i = n-1 term carries the logarithm and digamma(n).
            let psi = -EULER_GAMMA + (1..=nm1).map(|k| 1.0 / k as f64).sum::<f64>();
            fact * (psi - x.ln())
        };
        ans += del;
        if del.abs() < ans.abs() * acc.target_rel {
            return Ok(ans);
        }
    }
    Err(FtrError::NonConvergence(format!(
        "E_n series stalled at n={n}, x={x}"
    )))
}

/// Upper incomplete gamma function at nonpositive integer order:
/// Gamma(-n, x) = x^(-n) E_(n+1)(x) for n >= 0, x > 0.
pub fn upper_incomplete_gamma_nonpos(order: i32, x: f64) -> Result<f64> {
    if order > 0 {
        return Err(FtrError::Domain(format!(
            "upper_incomplete_gamma_nonpos requires order <= 0, got {order}"
        )));
    }
    let n = (-order) as u32;
    Ok(x.powi(order) * exp_integral_en(n + 1, x)?)
}

/// Value of S(w, mu) with its log (always finite when the value may
/// overflow) and a flag recording whether the quadrature fallback ran.
#[derive(Debug, Clone, Copy)]
pub struct SFunctionValue {
    pub value: f64,
    pub ln_value: f64,
    pub used_quadrature: bool,
}

/// Largest summand allowed to dominate before the closed form is declared
/// cancellation-unsafe. The summands e^mu E_n(mu) are all positive, so this
/// guard is insurance against a regression, not an expected path.
const S_CANCELLATION_GUARD: f64 = 1e-9;

/// S(w, mu) = integral of ln(1+t) t^(w-1) e^(-mu t) dt over [0, inf)
/// = Gamma(w) mu^(-w) sum over n in 1..=w of e^mu E_n(mu).
pub fn s_function(w: u32, mu: f64) -> Result<SFunctionValue> {
    if w == 0 {
        return Err(FtrError::Domain("s_function requires w >= 1".into()));
    }
    if mu <= 0.0 || !mu.is_finite() {
        return Err(FtrError::Domain(format!(
            "s_function requires finite mu > 0, got {mu}"
        )));
    }
    let mut sum = KahanSum::new();
    let mut largest: f64 = 0.0;
    let mut healthy = true;
    for n in 1..=w {
        let term = exp_integral_en_scaled(n, mu)?;
        largest = largest.max(term.abs());
        sum.add(term);
        if !term.is_finite() {
            healthy = false;
            break;
        }
    }
    let total = sum.value();
    if healthy && total.is_finite() && total >= S_CANCELLATION_GUARD * largest {
        let ln_value = ln_gamma(w as f64)? - w as f64 * mu.ln() + total.ln();
        return Ok(SFunctionValue {
            value: ln_value.exp(),
            ln_value,
            used_quadrature: false,
        });
    }
    let (ln_value, converged) = s_quadrature(w, mu, 1e-12)?;
    if !converged {
        return Err(FtrError::NonConvergence(format!(
            "s_function quadrature fallback stalled at w={w}, mu={mu}"
        )));
    }
    Ok(SFunctionValue {
        value: ln_value.exp(),
        ln_value,
        used_quadrature: true,
    })
}

/// Quadrature evaluation of ln S(w, mu) with the integrand's exponent
/// rescaled by its peak so the dynamic range stays representable even when
/// S overflows f64 (e.g. w = 40, mu = 0.01 gives S ~ 1e127).
pub(crate) fn s_quadrature(w: u32, mu: f64, rel_tol: f64) -> Result<(f64, bool)> {
    let wm1 = (w - 1) as f64;
    let ln_h = |t: f64| -> f64 {
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        t.ln_1p().ln() + wm1 * t.ln() - mu * t
    };
    let mut peak = f64::NEG_INFINITY;
    for t in [wm1 / mu, 1.0 / mu, 1.0, 1e-3] {
        if t > 0.0 {
            peak = peak.max(ln_h(t));
        }
    }
    let out = quad::integrate_zero_inf(rel_tol, |t| {
        let e = ln_h(t) - peak;
        if e < -745.0 {
            0.0
        } else {
            e.exp()
        }
    });
    if out.value.is_nan() || out.value <= 0.0 {
        return Err(FtrError::NonConvergence(format!(
            "s_function quadrature collapsed at w={w}, mu={mu}"
        )));
    }
    Ok((peak + out.value.ln(), out.converged))
}
