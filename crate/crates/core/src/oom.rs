//! Order-of-magnitude reading of disbelief: a probability `p` has
//! disbelief `⌊−log_ε p⌋`, so `κ = k` exactly when `p ∈ (ε^-(k+1), ε^-k]`.
//!
//! This module converts probabilistic lotteries into Spohnian ones and
//! reports how far the order of magnitude of the von Neumann–Morgenstern
//! expected utility is from the min-plus combination of the orders of
//! the individual probabilities and utilities.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtNat, INF};
use crate::kappa::normalize;
use crate::lottery::{PrizeSet, SimpleLottery};

/// Tolerance for `Σ p = 1`.
pub const SUM_TOLERANCE: f64 = 1e-9;
/// Relative tolerance when a value is compared to an exact power of ε.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EpsilonBase(f64);

impl EpsilonBase {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_finite() && epsilon > 1.0 {
            Ok(EpsilonBase(epsilon))
        } else {
            Err(Error::OutOfRange(format!("epsilon must be a finite real > 1, got {epsilon}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `ε^-k`
    pub fn power(self, k: u64) -> f64 {
        match i32::try_from(k) {
            Ok(k) => self.0.powi(-k),
            Err(_) => 0.0,
        }
    }
}

impl Default for EpsilonBase {
    fn default() -> Self {
        EpsilonBase(10.0)
    }
}

impl TryFrom<f64> for EpsilonBase {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        EpsilonBase::new(v)
    }
}

impl From<EpsilonBase> for f64 {
    fn from(e: EpsilonBase) -> f64 {
        e.0
    }
}

/// `⌊−log_ε p⌋`, with `κ(0) = ∞`.
///
/// The logarithm gives a first guess that is then corrected against the
/// powers of ε, treating values within [`BOUNDARY_TOLERANCE`] of
/// `ε^-k` as equal to it.
pub fn kappa_of(p: f64, eps: EpsilonBase) -> Result<ExtNat> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("probability {p} is outside [0, 1]")));
    }
    if p == 0.0 {
        return Ok(INF);
    }
    let guess = (-p.ln() / eps.get().ln()).floor();
    let mut k = if guess.is_finite() && guess > 0.0 { guess as u64 } else { 0 };
    let at_most = |k: u64| p <= eps.power(k) * (1.0 + BOUNDARY_TOLERANCE);
    while k > 0 && !at_most(k) {
        k -= 1;
    }
    while at_most(k + 1) && eps.power(k + 1) > 0.0 {
        k += 1;
    }
    Ok(ExtNat::new(k))
}

/// A lottery with probabilities and normalized utilities per prize.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbLottery {
    prizes: Arc<PrizeSet>,
    probs: Vec<f64>,
    utils: Vec<f64>,
}

impl ProbLottery {
    /// Probabilities must be non-negative and sum to 1; utilities lie in
    /// `[0, 1]`, weakly decrease along the prize order, and run from 1 at
    /// the best prize to 0 at the worst.
    pub fn new(prizes: &Arc<PrizeSet>, probs: Vec<f64>, utils: Vec<f64>) -> Result<Self> {
        let r = prizes.len();
        for (name, v) in [("probs", &probs), ("utils", &utils)] {
            if v.len() != r {
                return Err(Error::OutOfRange(format!("{name} has {} entries for {r} prizes", v.len())));
            }
            if let Some(x) = v.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::OutOfRange(format!("{name} entry {x} is outside [0, 1]")));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::OutOfRange(format!("probabilities sum to {total}, not 1")));
        }
        if utils[0] != 1.0 || utils[r - 1] != 0.0 {
            return Err(Error::OutOfRange("utilities must be 1 at the best prize and 0 at the worst".into()));
        }
        if utils.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::OutOfRange("utilities must weakly decrease along the prize order".into()));
        }
        Ok(ProbLottery { prizes: prizes.clone(), probs, utils })
    }

    pub fn prizes(&self) -> &Arc<PrizeSet> {
        &self.prizes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn utils(&self) -> &[f64] {
        &self.utils
    }
}

/// Converts each probability to its order of magnitude, then shifts so
/// the minimum is 0.
pub fn spohnian_from_prob(l: &ProbLottery, eps: EpsilonBase) -> Result<SimpleLottery> {
    let raw = l.probs.iter().map(|&p| kappa_of(p, eps)).collect::<Result<Vec<_>>>()?;
    SimpleLottery::new(&l.prizes, normalize(&raw)?)
}

/// `Σ p_i u(o_i)`
pub fn vnm_eu(l: &ProbLottery) -> f64 {
    l.probs.iter().zip(&l.utils).map(|(p, u)| p * u).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    /// Order of magnitude of the expected utility.
    pub kappa_of_eu: ExtNat,
    /// `min_i κ(p_i) + κ(u_i)` over prizes with positive utility.
    pub qualitative_eu: ExtNat,
    /// `kappa_of_eu − qualitative_eu`; 0 when both are infinite.
    pub gap: i64,
}

pub fn order_agreement(l: &ProbLottery, eps: EpsilonBase) -> Result<AgreementReport> {
    let kappa_of_eu = kappa_of(vnm_eu(l).min(1.0), eps)?;
    let mut qualitative_eu = INF;
    for (&p, &u) in l.probs.iter().zip(&l.utils) {
        if u > 0.0 {
            qualitative_eu = qualitative_eu.min(kappa_of(p, eps)?.checked_add(kappa_of(u, eps)?)?);
        }
    }
    let gap = match (kappa_of_eu, qualitative_eu) {
        (ExtNat::Fin(a), ExtNat::Fin(b)) => i64::try_from(i128::from(a) - i128::from(b))
            .map_err(|_| Error::OutOfRange("gap does not fit a signed integer".into()))?,
        (INF, INF) => 0,
        _ => {
            return Err(Error::OutOfRange(format!(
                "expected utility order {kappa_of_eu} and qualitative order {qualitative_eu} disagree on zero"
            )))
        }
    };
    Ok(AgreementReport { kappa_of_eu, qualitative_eu, gap })
}

/// `⌈log_ε r⌉ + 1`, the largest gap that floor effects can produce over
/// `r` prizes.
pub fn gap_bound(r: usize, eps: EpsilonBase) -> i64 {
    let mut k = 0i64;
    let mut reach = 1.0f64;
    while reach < r as f64 {
        reach *= eps.get();
        k += 1;
    }
    k + 1
}
