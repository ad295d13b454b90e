//! Tsallis and Rényi q-entropies of spectra and the normalized Tsallis
//! conditional entropy.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use crate::state::{DensityMatrix, Subsystem};

/// Below this distance from `q = 1` the Tsallis and Rényi formulas switch to
/// an `expm1`-based evaluation that does not cancel.
const NEAR_ONE: f64 = 1e-6;

/// Entropic index: a finite `q > 0` (with `q = 1` meaning von Neumann) or the
/// `q → ∞` limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropicIndex {
    Finite(f64),
    Infinity,
}

impl EntropicIndex {
    pub fn finite(q: f64) -> Result<Self> {
        validate_q(q)?;
        Ok(EntropicIndex::Finite(q))
    }
}

impl fmt::Display for EntropicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropicIndex::Finite(q) => write!(f, "{q}"),
            EntropicIndex::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for EntropicIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(EntropicIndex::Infinity),
            other => {
                let q: f64 = other.parse().map_err(|_| Error::InvalidQ(f64::NAN))?;
                if q.is_infinite() && q > 0.0 {
                    return Ok(EntropicIndex::Infinity);
                }
                EntropicIndex::finite(q)
            }
        }
    }
}

impl serde::Serialize for EntropicIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            EntropicIndex::Finite(q) => s.serialize_f64(*q),
            EntropicIndex::Infinity => s.serialize_str("inf"),
        }
    }
}

pub(crate) fn validate_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidQ(q));
    }
    Ok(())
}

/// Eigenvalues clamped into `[0, 1]`; tiny negative round-off becomes 0.
fn clamped(spec: &Spectrum) -> impl Iterator<Item = f64> + '_ {
    spec.values().iter().map(|&v| v.clamp(0.0, 1.0))
}

/// `Tr rho^q = sum_i lambda_i^q`, with `0^q = 0`.
pub fn omega_q(spec: &Spectrum, q: f64) -> Result<f64> {
    validate_q(q)?;
    Ok(clamped(spec).filter(|&v| v > 0.0).map(|v| v.powf(q)).sum())
}

/// `-sum_i lambda_i ln lambda_i`.
pub fn von_neumann_entropy(spec: &Spectrum) -> f64 {
    -clamped(spec).filter(|&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}

/// `omega_q - 1` computed as `sum_i lambda_i expm1((q-1) ln lambda_i)`,
/// exact to round-off for `q` near 1 on normalized spectra.
fn omega_minus_one(spec: &Spectrum, q: f64) -> f64 {
    clamped(spec)
        .filter(|&v| v > 0.0)
        .map(|v| v * ((q - 1.0) * v.ln()).exp_m1())
        .sum()
}

/// Tsallis entropy `(1 - omega_q) / (q - 1)`; von Neumann at `q = 1`.
pub fn tsallis_entropy(spec: &Spectrum, q: f64) -> Result<f64> {
    validate_q(q)?;
    if q == 1.0 {
        return Ok(von_neumann_entropy(spec));
    }
    if (q - 1.0).abs() < NEAR_ONE {
        return Ok(-omega_minus_one(spec, q) / (q - 1.0));
    }
    Ok((1.0 - omega_q(spec, q)?) / (q - 1.0))
}

/// `ln omega_q`, evaluated as `q ln lambda_max + ln sum_i (lambda_i / lambda_max)^q`
/// so that large `q` does not underflow.
pub fn ln_omega_q(spec: &Spectrum, q: f64) -> Result<f64> {
    validate_q(q)?;
    if (q - 1.0).abs() < NEAR_ONE {
        return Ok(omega_minus_one(spec, q).ln_1p());
    }
    let top = spec.max().clamp(0.0, 1.0);
    let scaled: f64 = clamped(spec).filter(|&v| v > 0.0).map(|v| (v / top).powf(q)).sum();
    Ok(q * top.ln() + scaled.ln())
}

/// Rényi entropy `ln(omega_q) / (1 - q)`; von Neumann at `q = 1`.
pub fn renyi_entropy(spec: &Spectrum, q: f64) -> Result<f64> {
    validate_q(q)?;
    if q == 1.0 {
        return Ok(von_neumann_entropy(spec));
    }
    Ok(ln_omega_q(spec, q)? / (1.0 - q))
}

/// `S_∞ = -ln lambda_max`.
pub fn renyi_entropy_inf(spec: &Spectrum) -> f64 {
    -spec.max().clamp(0.0, 1.0).ln()
}

/// Maps a Rényi entropy to the Tsallis entropy of the same spectrum,
/// `(exp((1-q) x) - 1) / (1 - q)`.
pub fn tsallis_from_renyi(renyi: f64, q: f64) -> f64 {
    if q == 1.0 {
        return renyi;
    }
    ((1.0 - q) * renyi).exp_m1() / (1.0 - q)
}

/// `[S_q(joint) - S_q(marginal)] / [1 + (1-q) S_q(marginal)]`, where the
/// marginal is the conditioning subsystem.
///
/// The denominator is `omega_q(marginal)` and the numerator is
/// `(omega_q(marginal) - omega_q(joint)) / (q - 1)`, so the ratio is
/// `(1 - omega_q(joint) / omega_q(marginal)) / (q - 1)`; the omega ratio is
/// taken in log space, which keeps the value finite for any `q`.
pub fn conditional_tsallis(joint: &Spectrum, marginal: &Spectrum, q: f64) -> Result<f64> {
    validate_q(q)?;
    if q == 1.0 {
        return Ok(von_neumann_entropy(joint) - von_neumann_entropy(marginal));
    }
    let log_ratio = ln_omega_q(joint, q)? - ln_omega_q(marginal, q)?;
    Ok(-log_ratio.exp_m1() / (q - 1.0))
}

/// `S^R_q(joint) - S^R_q(marginal)`; same sign as [`conditional_tsallis`].
pub fn conditional_renyi(joint: &Spectrum, marginal: &Spectrum, q: EntropicIndex) -> Result<f64> {
    Ok(match q {
        EntropicIndex::Finite(q) => renyi_entropy(joint, q)? - renyi_entropy(marginal, q)?,
        EntropicIndex::Infinity => renyi_entropy_inf(joint) - renyi_entropy_inf(marginal),
    })
}

/// Tsallis conditional entropy of `rho`, conditioned on the given subsystem:
/// `conditioned_on = B` yields `S_q(A|B)`.
pub fn conditional_q_entropy(rho: &DensityMatrix, q: f64, conditioned_on: Subsystem) -> Result<f64> {
    validate_q(q)?;
    let joint = rho.spectrum()?;
    let marginal = rho.partial_trace(conditioned_on).spectrum()?;
    conditional_tsallis(&joint, &marginal, q)
}

/// Entropic summary of a bipartite state at one index `q`.
///
/// At `q = ∞` the Tsallis-based fields (`omega_*`, `tsallis_*` and
/// `conditional_*`) are `None`, since they all degenerate to 0 in the limit;
/// the Rényi fields carry the `-ln lambda_max` values instead.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct EntropyReport {
    pub q: EntropicIndex,
    pub omega_q_joint: Option<f64>,
    pub omega_q_a: Option<f64>,
    pub omega_q_b: Option<f64>,
    pub tsallis_joint: Option<f64>,
    pub tsallis_a: Option<f64>,
    pub tsallis_b: Option<f64>,
    pub conditional_a_given_b: Option<f64>,
    pub conditional_b_given_a: Option<f64>,
    pub renyi_joint: f64,
    pub renyi_a: f64,
    pub renyi_b: f64,
    pub renyi_conditional_a_given_b: f64,
    pub renyi_conditional_b_given_a: f64,
}

impl EntropyReport {
    pub fn from_spectra(joint: &Spectrum, spec_a: &Spectrum, spec_b: &Spectrum, q: EntropicIndex) -> Result<Self> {
        let renyi = |s: &Spectrum| match q {
            EntropicIndex::Finite(q) => renyi_entropy(s, q),
            EntropicIndex::Infinity => Ok(renyi_entropy_inf(s)),
        };
        let (renyi_joint, renyi_a, renyi_b) = (renyi(joint)?, renyi(spec_a)?, renyi(spec_b)?);
        let mut report = EntropyReport {
            q,
            omega_q_joint: None,
            omega_q_a: None,
            omega_q_b: None,
            tsallis_joint: None,
            tsallis_a: None,
            tsallis_b: None,
            conditional_a_given_b: None,
            conditional_b_given_a: None,
            renyi_joint,
            renyi_a,
            renyi_b,
            renyi_conditional_a_given_b: renyi_joint - renyi_b,
            renyi_conditional_b_given_a: renyi_joint - renyi_a,
        };
        if let EntropicIndex::Finite(q) = q {
            report.omega_q_joint = Some(omega_q(joint, q)?);
            report.omega_q_a = Some(omega_q(spec_a, q)?);
            report.omega_q_b = Some(omega_q(spec_b, q)?);
            report.tsallis_joint = Some(tsallis_entropy(joint, q)?);
            report.tsallis_a = Some(tsallis_entropy(spec_a, q)?);
            report.tsallis_b = Some(tsallis_entropy(spec_b, q)?);
            report.conditional_a_given_b = Some(conditional_tsallis(joint, spec_b, q)?);
            report.conditional_b_given_a = Some(conditional_tsallis(joint, spec_a, q)?);
        }
        Ok(report)
    }

    pub fn for_state(rho: &DensityMatrix, q: EntropicIndex) -> Result<Self> {
        let joint = rho.spectrum()?;
        let spec_a = rho.partial_trace(Subsystem::A).spectrum()?;
        let spec_b = rho.partial_trace(Subsystem::B).spectrum()?;
        Self::from_spectra(&joint, &spec_a, &spec_b, q)
    }
}
