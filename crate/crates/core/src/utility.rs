//! Qualitative utility on the `B0` scale.
//!
//! A utility is a pair `(κ1, κr)`: the standard lottery `[o1.κ1, or.κr]`
//! over the best and worst prizes. Pairs in `B0` have `min(κ1, κr) = 0`,
//! and `κr − κ1` is an order isomorphism onto `Z ∪ {−∞, +∞}`.
//!
//! Expected utility is min-plus: a node's value is the componentwise
//! minimum over branches of `δ_i + U(child_i)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtInt, ExtNat, INF, ZERO};
use crate::lottery::{same_prizes, Lottery, PrizeSet, SimpleLottery, Tree};

/// An unconstrained pair, as produced by shifting a utility by a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UtilityVector {
    pub first: ExtNat,
    pub second: ExtNat,
}

impl UtilityVector {
    pub fn new(first: impl Into<ExtNat>, second: impl Into<ExtNat>) -> Self {
        UtilityVector { first: first.into(), second: second.into() }
    }

    /// `c + (x, y) = (x + c, y + c)`
    pub fn add_scalar(self, c: ExtNat) -> Result<Self> {
        Ok(UtilityVector { first: self.first.checked_add(c)?, second: self.second.checked_add(c)? })
    }

    pub fn into_value(self) -> Result<UtilityValue> {
        UtilityValue::new(self.first, self.second)
    }
}

/// Componentwise minimum.
pub fn min_vectors<I: IntoIterator<Item = UtilityVector>>(vs: I) -> Result<UtilityVector> {
    vs.into_iter()
        .reduce(|a, b| UtilityVector { first: a.first.min(b.first), second: a.second.min(b.second) })
        .ok_or(Error::EmptyList)
}

/// A member of `B0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(ExtNat, ExtNat)", into = "(ExtNat, ExtNat)")]
pub struct UtilityValue {
    first: ExtNat,
    second: ExtNat,
}

impl UtilityValue {
    /// Utility of the best prize, `(0, ∞)`.
    pub const BEST: UtilityValue = UtilityValue { first: ZERO, second: INF };
    /// Utility of the worst prize, `(∞, 0)`.
    pub const WORST: UtilityValue = UtilityValue { first: INF, second: ZERO };
    pub const NEUTRAL: UtilityValue = UtilityValue { first: ZERO, second: ZERO };

    pub fn new(first: impl Into<ExtNat>, second: impl Into<ExtNat>) -> Result<Self> {
        let (first, second) = (first.into(), second.into());
        let fits = |v: ExtNat| v.finite().is_none_or(|x| x <= i64::MAX as u64);
        if !(fits(first) && fits(second)) {
            return Err(Error::OutOfRange(format!("({first}, {second}) exceeds the scalar range")));
        }
        if first.min(second).is_zero() {
            Ok(UtilityValue { first, second })
        } else {
            Err(Error::NotInB0(first, second))
        }
    }

    /// The `B0` element whose scalar utility is `u`.
    pub fn from_scalar(u: ExtInt) -> Self {
        match u {
            ExtInt::PosInf => Self::BEST,
            ExtInt::NegInf => Self::WORST,
            ExtInt::Fin(v) if v >= 0 => UtilityValue { first: ZERO, second: ExtNat::new(v as u64) },
            ExtInt::Fin(v) => UtilityValue { first: ExtNat::new(v.unsigned_abs()), second: ZERO },
        }
    }

    pub fn first(self) -> ExtNat {
        self.first
    }

    pub fn second(self) -> ExtNat {
        self.second
    }

    pub fn vector(self) -> UtilityVector {
        UtilityVector { first: self.first, second: self.second }
    }

    /// `κr − κ1`.
    pub fn scalar(self) -> ExtInt {
        ExtInt::difference(self.second, self.first)
            .expect("B0 has at most one non-zero component and both fit in i64")
    }
}

impl From<UtilityValue> for (ExtNat, ExtNat) {
    fn from(v: UtilityValue) -> Self {
        (v.first, v.second)
    }
}

impl TryFrom<(ExtNat, ExtNat)> for UtilityValue {
    type Error = Error;

    fn try_from((a, b): (ExtNat, ExtNat)) -> Result<Self> {
        UtilityValue::new(a, b)
    }
}

impl fmt::Display for UtilityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Preference between two standard lotteries. `s` is strictly preferred
/// to `t` when
///
/// 1. both put 0 on the best prize and `s` disbelieves the worst more, or
/// 2. `s` puts 0 on the best prize and `t` does not, or
/// 3. both put 0 on the worst prize and `s` disbelieves the best less.
pub fn compare_standard(s: UtilityValue, t: UtilityValue) -> Ordering {
    let prefers = |a: UtilityValue, b: UtilityValue| {
        (a.first.is_zero() && b.first.is_zero() && a.second > b.second)
            || (a.first.is_zero() && !b.first.is_zero())
            || (a.first < b.first && a.second.is_zero() && b.second.is_zero())
    };
    if s == t {
        Ordering::Equal
    } else if prefers(s, t) {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl PartialOrd for UtilityValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UtilityValue {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_standard(*self, *other)
    }
}

/// For each prize, the standard lottery judged indifferent to it.
///
/// Standard lotteries are built over two reference outcomes. By default
/// these are the best and worst prizes themselves; they can also be
/// outcomes outside the prize set, such as "no damage" and "complete
/// destruction" for prizes that are earthquake intensities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrizeAssessment {
    prizes: Arc<PrizeSet>,
    values: Vec<UtilityValue>,
    references: Option<(String, String)>,
}

impl PrizeAssessment {
    /// Values are indexed like the prize set. The best prize must map to
    /// `(0, ∞)`, the worst to `(∞, 0)`, and scalar utilities must strictly
    /// decrease along the preference order.
    pub fn new(prizes: &Arc<PrizeSet>, values: Vec<UtilityValue>) -> Result<Self> {
        Self::check_len(prizes, &values)?;
        if values[0] != UtilityValue::BEST {
            return Err(Error::InvalidAssessment(format!(
                "{} must map to (0,inf)",
                prizes.best()
            )));
        }
        if values[values.len() - 1] != UtilityValue::WORST {
            return Err(Error::InvalidAssessment(format!(
                "{} must map to (inf,0)",
                prizes.worst()
            )));
        }
        Self::check_monotone(prizes, &values)?;
        Ok(PrizeAssessment { prizes: prizes.clone(), values, references: None })
    }

    /// Assessment against external reference outcomes `best` and `worst`.
    /// Only strict monotonicity is required.
    pub fn with_references(
        prizes: &Arc<PrizeSet>,
        values: Vec<UtilityValue>,
        best: impl Into<String>,
        worst: impl Into<String>,
    ) -> Result<Self> {
        let (best, worst) = (best.into(), worst.into());
        if best == worst {
            return Err(Error::DuplicateLabel(best));
        }
        Self::check_len(prizes, &values)?;
        Self::check_monotone(prizes, &values)?;
        Ok(PrizeAssessment { prizes: prizes.clone(), values, references: Some((best, worst)) })
    }

    fn check_len(prizes: &PrizeSet, values: &[UtilityValue]) -> Result<()> {
        if values.len() != prizes.len() {
            return Err(Error::LengthMismatch { expected: prizes.len(), actual: values.len() });
        }
        Ok(())
    }

    fn check_monotone(prizes: &PrizeSet, values: &[UtilityValue]) -> Result<()> {
        for i in 1..values.len() {
            if values[i].scalar() >= values[i - 1].scalar() {
                return Err(Error::InvalidAssessment(format!(
                    "{} {} is not strictly below {} {}",
                    prizes.label(i),
                    values[i],
                    prizes.label(i - 1),
                    values[i - 1]
                )));
            }
        }
        Ok(())
    }

    /// Builds from `(label, value)` pairs in any order; every prize must
    /// appear exactly once.
    pub fn from_pairs<I, S>(prizes: &Arc<PrizeSet>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, UtilityValue)>,
        S: AsRef<str>,
    {
        PrizeAssessment::new(prizes, Self::collect(prizes, pairs)?)
    }

    pub(crate) fn collect<I, S>(prizes: &Arc<PrizeSet>, pairs: I) -> Result<Vec<UtilityValue>>
    where
        I: IntoIterator<Item = (S, UtilityValue)>,
        S: AsRef<str>,
    {
        let mut slots: Vec<Option<UtilityValue>> = vec![None; prizes.len()];
        for (label, v) in pairs {
            let label = label.as_ref();
            let i = prizes.index_of(label).ok_or_else(|| Error::UnknownPrize(label.to_owned()))?;
            if slots[i].replace(v).is_some() {
                return Err(Error::DuplicateLabel(label.to_owned()));
            }
        }
        slots
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::UnassessedPrize(prizes.label(i).to_owned())))
            .collect()
    }

    /// Labels of the outcomes the standard lotteries are built over.
    pub fn reference_labels(&self) -> (&str, &str) {
        match &self.references {
            Some((b, w)) => (b, w),
            None => (self.prizes.best(), self.prizes.worst()),
        }
    }

    pub fn has_external_references(&self) -> bool {
        self.references.is_some()
    }

    pub fn prizes(&self) -> &Arc<PrizeSet> {
        &self.prizes
    }

    pub fn values(&self) -> &[UtilityValue] {
        &self.values
    }

    pub fn value_of(&self, label: &str) -> Result<UtilityValue> {
        self.prizes
            .index_of(label)
            .map(|i| self.values[i])
            .ok_or_else(|| Error::UnassessedPrize(label.to_owned()))
    }
}

/// Qualitative expected utility, evaluated directly on the tree.
pub fn evaluate(lottery: &Lottery, assessment: &PrizeAssessment) -> Result<UtilityValue> {
    let same = same_prizes(lottery.prizes(), assessment.prizes());
    eval_tree(lottery, assessment, same)
}

fn eval_tree(l: &Lottery, a: &PrizeAssessment, same: bool) -> Result<UtilityValue> {
    match l.tree() {
        Tree::Leaf(i) if same => Ok(a.values[*i]),
        Tree::Leaf(i) => a.value_of(l.prizes().label(*i)),
        Tree::Node(branches) => {
            let shifted = branches
                .iter()
                .map(|b| eval_tree(&b.child, a, same)?.vector().add_scalar(b.delta))
                .collect::<Result<Vec<_>>>()?;
            min_vectors(shifted)?.into_value()
        }
    }
}

/// Utility of a simple lottery: `min_j (κ_j + U(o_j))`.
pub fn evaluate_simple(s: &SimpleLottery, assessment: &PrizeAssessment) -> Result<UtilityValue> {
    let shifted = s
        .prizes()
        .labels()
        .iter()
        .zip(s.deltas())
        .map(|(label, &d)| assessment.value_of(label)?.vector().add_scalar(d))
        .collect::<Result<Vec<_>>>()?;
    min_vectors(shifted)?.into_value()
}

/// The unique standard lottery `[o1.κ1, or.κr]` indifferent to `lottery`,
/// over the two reference outcomes.
pub fn standard_equivalent(lottery: &Lottery, assessment: &PrizeAssessment) -> Result<SimpleLottery> {
    let u = evaluate(lottery, assessment)?;
    let (best, worst) = assessment.reference_labels();
    let pair = PrizeSet::new([best, worst])?;
    SimpleLottery::new(&pair, vec![u.first, u.second])
}

/// Rebuilds a lottery over the full prize set that is indifferent to the
/// given utility: `[o1.κ1, or.κr]` as a depth-one tree. Only meaningful
/// when the best and worst prizes are the reference outcomes.
pub fn standard_lottery(prizes: &Arc<PrizeSet>, u: UtilityValue) -> Result<Lottery> {
    let mut branches = vec![(u.first, Lottery::leaf(prizes, prizes.best())?)];
    branches.push((u.second, Lottery::leaf(prizes, prizes.worst())?));
    Lottery::node(branches)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> ExtNat {
        ExtNat::new(v)
    }

    fn uv(a: ExtNat, b: ExtNat) -> UtilityValue {
        UtilityValue::new(a, b).unwrap()
    }

    #[test]
    fn b0_membership() {
        assert!(UtilityValue::new(n(0), n(3)).is_ok());
        assert_eq!(UtilityValue::new(n(1), n(3)), Err(Error::NotInB0(n(1), n(3))));
        assert_eq!(UtilityValue::new(INF, INF), Err(Error::NotInB0(INF, INF)));
    }

    #[test]
    fn scalar_utilities() {
        assert_eq!(UtilityValue::BEST.scalar(), ExtInt::PosInf);
        assert_eq!(UtilityValue::NEUTRAL.scalar(), ExtInt::Fin(0));
        assert_eq!(uv(n(4), n(0)).scalar(), ExtInt::Fin(-4));
        assert_eq!(UtilityValue::WORST.scalar(), ExtInt::NegInf);
        for u in [-7, 0, 5] {
            assert_eq!(UtilityValue::from_scalar(ExtInt::Fin(u)).scalar(), ExtInt::Fin(u));
        }
    }

    #[test]
    fn shifting() {
        assert_eq!(UtilityVector::new(0, 2).add_scalar(n(3)), Ok(UtilityVector::new(3, 5)));
        let v = UtilityVector::new(4, 0);
        assert_eq!(v.add_scalar(n(0)), Ok(v));
        assert_eq!(
            UtilityVector::new(n(0), INF).add_scalar(n(2)),
            Ok(UtilityVector::new(n(2), INF))
        );
    }

    #[test]
    fn componentwise_min() {
        assert_eq!(
            min_vectors([UtilityVector::new(0, 5), UtilityVector::new(3, 0)]),
            Ok(UtilityVector::new(0, 0))
        );
        let v = UtilityVector::new(2, 9);
        assert_eq!(min_vectors([v]), Ok(v));
        assert_eq!(
            min_vectors([UtilityVector::new(n(2), INF), UtilityVector::new(INF, n(1))]),
            Ok(UtilityVector::new(2, 1))
        );
        assert_eq!(min_vectors(Vec::new()), Err(Error::EmptyList));
    }

    #[test]
    fn standard_order_cases() {
        assert_eq!(compare_standard(uv(n(0), n(5)), uv(n(0), n(3))), Ordering::Greater);
        assert_eq!(compare_standard(uv(n(0), n(0)), uv(n(2), n(0))), Ordering::Greater);
        assert_eq!(compare_standard(uv(n(3), n(0)), uv(n(3), n(0))), Ordering::Equal);
        assert_eq!(compare_standard(uv(n(1), n(0)), uv(n(4), n(0))), Ordering::Greater);
        assert_eq!(compare_standard(uv(INF, n(0)), uv(n(4), n(0))), Ordering::Less);
    }

    #[test]
    fn assessment_endpoints_and_monotonicity() {
        let p = PrizeSet::numbered(3).unwrap();
        let ok = PrizeAssessment::new(
            &p,
            vec![UtilityValue::BEST, uv(n(0), n(3)), UtilityValue::WORST],
        );
        assert!(ok.is_ok());
        assert_eq!(
            PrizeAssessment::new(&p, vec![uv(n(0), n(3)), uv(n(0), n(1)), UtilityValue::WORST]),
            Err(Error::InvalidAssessment("o1 must map to (0,inf)".into()))
        );
        assert!(matches!(
            PrizeAssessment::new(&p, vec![UtilityValue::BEST, UtilityValue::BEST, UtilityValue::WORST]),
            Err(Error::InvalidAssessment(_))
        ));
        assert_eq!(
            PrizeAssessment::from_pairs(&p, [("o1", UtilityValue::BEST), ("o3", UtilityValue::WORST)]),
            Err(Error::UnassessedPrize("o2".into()))
        );
    }

    fn two_level_assessed() -> (Lottery, PrizeAssessment) {
        let p = PrizeSet::numbered(3).unwrap();
        let leaf = |l: &str| Lottery::leaf(&p, l).unwrap();
        let left =
            Lottery::node(vec![(n(4), leaf("o1")), (n(0), leaf("o2")), (n(0), leaf("o3"))]).unwrap();
        let right = Lottery::node(vec![(n(0), leaf("o1")), (n(2), leaf("o3"))]).unwrap();
        let l = Lottery::node(vec![(n(0), left), (n(5), right)]).unwrap();
        let a = PrizeAssessment::new(
            &p,
            vec![UtilityValue::BEST, uv(n(0), n(3)), UtilityValue::WORST],
        )
        .unwrap();
        (l, a)
    }

    #[test]
    fn two_level_assessed_utility() {
        // Left child: min((4,∞), (0,3), (∞,0)) = (0,0); right: min((0,∞), (∞,2)) = (0,2);
        // root: min((0,0), 5 + (0,2)) = (0,0).
        let (l, a) = two_level_assessed();
        assert_eq!(evaluate(&l, &a), Ok(UtilityValue::NEUTRAL));
        let s = standard_equivalent(&l, &a).unwrap();
        assert_eq!(s.deltas(), &[n(0), n(0)]);
        assert_eq!(s.prizes().labels(), &["o1", "o3"]);
    }

    #[test]
    fn prize_leaves() {
        let (_, a) = two_level_assessed();
        let p = a.prizes().clone();
        assert_eq!(evaluate(&Lottery::leaf(&p, "o1").unwrap(), &a), Ok(UtilityValue::BEST));
        let worst = standard_equivalent(&Lottery::leaf(&p, "o3").unwrap(), &a).unwrap();
        assert_eq!(worst.deltas(), &[INF, n(0)]);
    }

    #[test]
    fn unassessed_prize_in_foreign_set() {
        let (_, a) = two_level_assessed();
        let q = PrizeSet::new(["o1", "o9"]).unwrap();
        let l = Lottery::leaf(&q, "o9").unwrap();
        assert_eq!(evaluate(&l, &a), Err(Error::UnassessedPrize("o9".into())));
    }

    #[test]
    fn external_references_relax_endpoints() {
        let p = PrizeSet::new(["q0", "q1", "q2"]).unwrap();
        let values = vec![UtilityValue::BEST, uv(n(0), n(2)), uv(n(5), n(0))];
        assert!(PrizeAssessment::new(&p, values.clone()).is_err());
        let a = PrizeAssessment::with_references(&p, values, "intact", "ruined").unwrap();
        assert_eq!(a.reference_labels(), ("intact", "ruined"));
        let l = Lottery::leaf(&p, "q2").unwrap();
        let s = standard_equivalent(&l, &a).unwrap();
        assert_eq!(s.prizes().labels(), &["intact", "ruined"]);
        assert_eq!(s.deltas(), &[n(5), n(0)]);
        let flat = vec![UtilityValue::BEST, uv(n(0), n(2)), uv(n(0), n(2))];
        assert!(PrizeAssessment::with_references(&p, flat, "intact", "ruined").is_err());
    }

    #[test]
    fn utility_value_json() {
        let v = uv(n(0), INF);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[0,"inf"]"#);
        assert!(serde_json::from_str::<UtilityValue>("[1,2]").is_err());
    }
}
