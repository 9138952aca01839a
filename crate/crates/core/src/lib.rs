//! Spohn's epistemic-belief calculus and qualitative expected utility.
//!
//! - [`kappa`]: disbelief functions over finite frames.
//! - [`lottery`]: Spohnian lottery trees and their reduction.
//! - [`utility`]: the `B0` utility scale and min-plus expected utility.
//! - [`decision`]: ranking acts, maximin, and disagreement search.
//! - [`oom`]: order-of-magnitude reading of probabilities.

pub mod decision;
pub mod error;
pub mod ext;
pub mod kappa;
pub mod lottery;
pub mod oom;
pub mod utility;

pub use decision::{
    find_maximin_disagreement, product_problem, search_maximin_disagreement, DecisionProblem,
    Disagreement, MaximinAct, RankedAct, SearchBounds, SearchOutcome,
};
pub use error::{Error, Result};
pub use ext::{ExtInt, ExtNat, INF, ZERO};
pub use kappa::{normalize, DisbeliefFunction, DisbeliefRecord, Frame};
pub use lottery::{Branch, BranchRecord, Lottery, LotteryRecord, PrizeSet, SimpleLottery, Tree};
pub use oom::{
    gap_bound, kappa_of, order_agreement, spohnian_from_prob, vnm_eu, AgreementReport,
    EpsilonBase, ProbLottery,
};
pub use utility::{
    compare_standard, evaluate, evaluate_simple, min_vectors, standard_equivalent,
    standard_lottery, PrizeAssessment, UtilityValue, UtilityVector,
};
