//! Closed-form generalization and concentration bounds.
//!
//! `m = ⌊n/k⌋` is the effective sample size. Every function returns the raw
//! value, which may exceed 1; [`clamp_unit`] is for reporting. Large powers
//! are assembled in log space and the `log10_*` variants stay finite where
//! the plain value underflows.

use std::f64::consts::{E, LN_10, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("{name} must be at least 1")]
    ZeroParameter { name: &'static str },
    #[error("k = {k} exceeds n = {n}, so m = ⌊n/k⌋ = 0")]
    EmptyBlocks { n: u64, k: u64 },
    #[error("epsilon = {0} is outside (0, 1]")]
    EpsilonOutOfRange(f64),
    #[error("epsilon = {0} must be non-negative")]
    NegativeEpsilon(f64),
    #[error("log argument 2em/d = {0} is not greater than 1")]
    LogArgument(f64),
    #[error("C = {0} is below e")]
    MgfConstant(f64),
    #[error("{name} = {value} must be positive and finite")]
    NonPositive { name: &'static str, value: f64 },
}

/// `min(1, value)`, for display next to the raw value.
pub fn clamp_unit(value: f64) -> f64 {
    value.min(1.0)
}

/// `⌊n/k⌋`, rejecting `k = 0` and `n < k`.
pub fn effective_sample_size(n: u64, k: u64) -> Result<u64, BoundError> {
    if k == 0 {
        return Err(BoundError::ZeroParameter { name: "k" });
    }
    match n / k {
        0 => Err(BoundError::EmptyBlocks { n, k }),
        m => Ok(m),
    }
}

fn check_dm(d: u64, m: u64) -> Result<(), BoundError> {
    if d == 0 {
        return Err(BoundError::ZeroParameter { name: "d" });
    }
    if m == 0 {
        return Err(BoundError::ZeroParameter { name: "m" });
    }
    Ok(())
}

fn check_unit_epsilon(eps: f64) -> Result<(), BoundError> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(BoundError::EpsilonOutOfRange(eps))
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), BoundError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(BoundError::NonPositive { name, value })
    }
}

/// `ln(2em/d)`.
fn ln_growth(d: u64, m: u64) -> f64 {
    (2.0 * E * m as f64 / d as f64).ln()
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

/// `2·sqrt(2d·ln(2em/d)/m)`.
pub fn classical_vc_expected(d: u64, m: u64) -> Result<f64, BoundError> {
    check_dm(d, m)?;
    let arg = 2.0 * E * m as f64 / d as f64;
    if arg <= 1.0 {
        return Err(BoundError::LogArgument(arg));
    }
    Ok(2.0 * (2.0 * d as f64 * arg.ln() / m as f64).sqrt())
}

/// Expected sup-deviation bound for a class of VC dimension `d` with a
/// training domain of `n` constants and fragments of size `k`.
pub fn expected_error_bound(d: u64, n: u64, k: u64) -> Result<f64, BoundError> {
    classical_vc_expected(d, effective_sample_size(n, k)?)
}

/// Natural log of `4(2em/d)^d·exp(−mε²/8)`.
pub fn ln_classical_vc_tail(d: u64, m: u64, eps: f64) -> Result<f64, BoundError> {
    check_dm(d, m)?;
    check_positive("epsilon", eps)?;
    let m = m as f64;
    Ok(4f64.ln() + d as f64 * ln_growth(d, m as u64) - m * eps * eps / 8.0)
}

pub fn classical_vc_tail(d: u64, m: u64, eps: f64) -> Result<f64, BoundError> {
    Ok(ln_classical_vc_tail(d, m, eps)?.exp())
}

pub fn log10_classical_vc_tail(d: u64, m: u64, eps: f64) -> Result<f64, BoundError> {
    Ok(ln_classical_vc_tail(d, m, eps)? / LN_10)
}

/// Natural log of `exp(−mε²/4) + ε·sqrt(8πm)·(2em/d)^d·exp(−mε²/8)`.
pub fn ln_tail_bound(d: u64, n: u64, k: u64, eps: f64) -> Result<f64, BoundError> {
    let m = effective_sample_size(n, k)?;
    check_dm(d, m)?;
    check_unit_epsilon(eps)?;
    let mf = m as f64;
    let first = -mf * eps * eps / 4.0;
    let second = eps.ln() + 0.5 * (8.0 * PI * mf).ln() + d as f64 * ln_growth(d, m) - mf * eps * eps / 8.0;
    Ok(log_sum_exp(first, second))
}

pub fn tail_bound(d: u64, n: u64, k: u64, eps: f64) -> Result<f64, BoundError> {
    Ok(ln_tail_bound(d, n, k, eps)?.exp())
}

pub fn log10_tail_bound(d: u64, n: u64, k: u64, eps: f64) -> Result<f64, BoundError> {
    Ok(ln_tail_bound(d, n, k, eps)? / LN_10)
}

/// Natural log of `(1 + sqrt(8πm)·(2em/d)^d)·exp(−mε²/8)`.
pub fn ln_tail_bound_simplified(d: u64, n: u64, k: u64, eps: f64) -> Result<f64, BoundError> {
    let m = effective_sample_size(n, k)?;
    check_dm(d, m)?;
    check_unit_epsilon(eps)?;
    let mf = m as f64;
    let growth = 0.5 * (8.0 * PI * mf).ln() + d as f64 * ln_growth(d, m);
    Ok(log_sum_exp(0.0, growth) - mf * eps * eps / 8.0)
}

pub fn tail_bound_simplified(d: u64, n: u64, k: u64, eps: f64) -> Result<f64, BoundError> {
    Ok(ln_tail_bound_simplified(d, n, k, eps)?.exp())
}

pub fn log10_tail_bound_simplified(d: u64, n: u64, k: u64, eps: f64) -> Result<f64, BoundError> {
    Ok(ln_tail_bound_simplified(d, n, k, eps)? / LN_10)
}

/// `2·exp(−2qε²)`.
pub fn hoeffding_block_bound(q: u64, eps: f64) -> Result<f64, BoundError> {
    log10_hoeffding_block_bound(q, eps)?;
    Ok(2.0 * (-2.0 * q as f64 * eps * eps).exp())
}

pub fn log10_hoeffding_block_bound(q: u64, eps: f64) -> Result<f64, BoundError> {
    if q == 0 {
        return Err(BoundError::ZeroParameter { name: "q" });
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(BoundError::NegativeEpsilon(eps));
    }
    Ok((2f64.ln() - 2.0 * q as f64 * eps * eps) / LN_10)
}

/// `1 + λC·sqrt(πB)·exp(λ²B/4)`: bounds `E[exp(λX)]` for non-negative `X`
/// with `P[X ≥ t] ≤ C·exp(−t²/B)`.
pub fn mgf_bound(c: f64, b: f64, lambda: f64) -> Result<f64, BoundError> {
    if !(c >= E && c.is_finite()) {
        return Err(BoundError::MgfConstant(c));
    }
    check_positive("B", b)?;
    check_positive("lambda", lambda)?;
    Ok(1.0 + lambda * c * (PI * b).sqrt() * (lambda * lambda * b / 4.0).exp())
}

/// Parameters shared by the bound evaluations of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub d: u64,
    pub n: u64,
    pub k: u64,
    pub epsilon: Option<f64>,
    pub q: Option<u64>,
    pub c: Option<f64>,
    pub b: Option<f64>,
    pub lambda: Option<f64>,
}

/// One evaluated bound: raw, clamped and base-10 log values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub name: String,
    pub raw: f64,
    pub clamped: f64,
    pub log10: f64,
}

impl BoundValue {
    pub fn new(name: &str, raw: f64) -> Self {
        Self::with_log10(name, raw, raw.log10())
    }

    pub fn with_log10(name: &str, raw: f64, log10: f64) -> Self {
        BoundValue {
            name: name.to_string(),
            raw,
            clamped: clamp_unit(raw),
            log10,
        }
    }
}

impl BoundInputs {
    pub fn m(&self) -> Result<u64, BoundError> {
        effective_sample_size(self.n, self.k)
    }

    /// Every bound the supplied parameters determine.
    pub fn evaluate(&self) -> Result<Vec<BoundValue>, BoundError> {
        let m = self.m()?;
        let mut out = Vec::new();
        let expected = expected_error_bound(self.d, self.n, self.k)?;
        out.push(BoundValue::new("expected-error", expected));
        out.push(BoundValue::new(
            "classical-vc-expected",
            classical_vc_expected(self.d, m)?,
        ));
        if let Some(eps) = self.epsilon {
            let ln = ln_tail_bound(self.d, self.n, self.k, eps)?;
            out.push(BoundValue::with_log10("tail", ln.exp(), ln / LN_10));
            let ln = ln_tail_bound_simplified(self.d, self.n, self.k, eps)?;
            out.push(BoundValue::with_log10("tail-simplified", ln.exp(), ln / LN_10));
            let ln = ln_classical_vc_tail(self.d, m, eps)?;
            out.push(BoundValue::with_log10("classical-vc-tail", ln.exp(), ln / LN_10));
            if let Some(q) = self.q {
                out.push(BoundValue::with_log10(
                    "hoeffding-blocks",
                    hoeffding_block_bound(q, eps)?,
                    log10_hoeffding_block_bound(q, eps)?,
                ));
            }
        }
        if let (Some(c), Some(b), Some(lambda)) = (self.c, self.b, self.lambda) {
            out.push(BoundValue::new("mgf", mgf_bound(c, b, lambda)?));
        }
        Ok(out)
    }
}
