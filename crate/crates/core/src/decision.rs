//! Decision problems: acts map states to prizes, a disbelief function
//! ranks the states, and acts are compared by qualitative expected
//! utility or by the maximin rule.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::{ExtInt, ExtNat, INF, ZERO};
use crate::kappa::{DisbeliefFunction, Frame};
use crate::lottery::{PrizeSet, SimpleLottery};
use crate::utility::{evaluate_simple, PrizeAssessment, UtilityValue};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionProblem {
    belief: DisbeliefFunction,
    acts: Vec<String>,
    /// `outcomes[act][state]` is a prize index.
    outcomes: Vec<Vec<usize>>,
    assessment: PrizeAssessment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedAct {
    pub act: String,
    pub utility: UtilityValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximinAct {
    pub act: String,
    /// Index of the least preferred prize the act can reach.
    pub worst: usize,
}

impl DecisionProblem {
    /// `acts` lists each act with its outcome (a prize label) per state,
    /// in the order of the belief's frame.
    pub fn new<A, S>(
        belief: DisbeliefFunction,
        assessment: PrizeAssessment,
        acts: impl IntoIterator<Item = (A, Vec<S>)>,
    ) -> Result<Self>
    where
        A: Into<String>,
        S: AsRef<str>,
    {
        let prizes = assessment.prizes().clone();
        let states = belief.frame().len();
        let mut names = Vec::new();
        let mut outcomes = Vec::new();
        let mut seen = HashSet::new();
        for (name, row) in acts {
            let name: String = name.into();
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateLabel(name));
            }
            if row.len() != states {
                return Err(Error::InvalidProblem(format!(
                    "act `{name}` has {} outcomes for {states} states",
                    row.len()
                )));
            }
            let row = row
                .iter()
                .map(|p| {
                    let p = p.as_ref();
                    prizes.index_of(p).ok_or_else(|| Error::UnknownPrize(p.to_owned()))
                })
                .collect::<Result<Vec<_>>>()?;
            names.push(name);
            outcomes.push(row);
        }
        if names.is_empty() {
            return Err(Error::InvalidProblem("no acts".into()));
        }
        Ok(DecisionProblem { belief, acts: names, outcomes, assessment })
    }

    pub fn states(&self) -> &Frame {
        self.belief.frame()
    }

    pub fn belief(&self) -> &DisbeliefFunction {
        &self.belief
    }

    pub fn acts(&self) -> &[String] {
        &self.acts
    }

    pub fn prizes(&self) -> &Arc<PrizeSet> {
        self.assessment.prizes()
    }

    pub fn assessment(&self) -> &PrizeAssessment {
        &self.assessment
    }

    /// Prize label of `act` in each state.
    pub fn outcome_row(&self, act: &str) -> Result<Vec<&str>> {
        let a = self.act_index(act)?;
        Ok(self.outcomes[a].iter().map(|&i| self.prizes().label(i)).collect())
    }

    fn act_index(&self, act: &str) -> Result<usize> {
        self.acts
            .iter()
            .position(|a| a == act)
            .ok_or_else(|| Error::UnknownAct(act.to_owned()))
    }

    /// Each prize gets the disbelief of the event "the act yields it".
    pub fn act_lottery(&self, act: &str) -> Result<SimpleLottery> {
        Ok(self.lottery_at(self.act_index(act)?))
    }

    fn lottery_at(&self, a: usize) -> SimpleLottery {
        let mut deltas = vec![INF; self.prizes().len()];
        for (&prize, &d) in self.outcomes[a].iter().zip(self.belief.potential()) {
            deltas[prize] = deltas[prize].min(d);
        }
        SimpleLottery::new(self.prizes(), deltas).expect("belief potential attains 0")
    }

    /// Acts by descending qualitative expected utility; ties keep input order.
    pub fn rank_acts(&self) -> Result<Vec<RankedAct>> {
        let mut ranked = (0..self.acts.len())
            .map(|a| {
                Ok(RankedAct {
                    act: self.acts[a].clone(),
                    utility: evaluate_simple(&self.lottery_at(a), &self.assessment)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ranked.sort_by(|x, y| y.utility.scalar().cmp(&x.utility.scalar()));
        Ok(ranked)
    }

    /// Acts by their worst reachable prize, best worst-case first; prizes
    /// disbelieved with certainty are not reachable. Ties keep input order.
    pub fn maximin_rank(&self) -> Vec<MaximinAct> {
        let mut ranked: Vec<MaximinAct> = (0..self.acts.len())
            .map(|a| MaximinAct {
                act: self.acts[a].clone(),
                worst: worst_reachable(self.lottery_at(a).deltas()),
            })
            .collect();
        ranked.sort_by_key(|m| m.worst);
        ranked
    }

    /// The two rules disagree when each strictly prefers its own top act
    /// over the other rule's top act.
    pub fn disagreement(&self) -> Result<Option<Disagreement>> {
        let qual = self.rank_acts()?;
        let maximin = self.maximin_rank();
        let q_top = &qual[0];
        let m_top = &maximin[0];
        if q_top.act == m_top.act {
            return Ok(None);
        }
        let q_other = qual.iter().find(|r| r.act == m_top.act).expect("same act set");
        let m_other = maximin.iter().find(|r| r.act == q_top.act).expect("same act set");
        let strict = q_top.utility.scalar() > q_other.utility.scalar() && m_top.worst < m_other.worst;
        Ok(strict.then(|| Disagreement {
            qualitative_top: q_top.act.clone(),
            maximin_top: m_top.act.clone(),
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub qualitative_top: String,
    pub maximin_top: String,
}

fn worst_reachable(deltas: &[ExtNat]) -> usize {
    deltas.iter().rposition(|d| d.is_finite()).expect("a simple lottery reaches some prize")
}

/// Limits for [`find_maximin_disagreement`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Problems with 2 up to this many prizes are enumerated.
    pub max_prizes: usize,
    /// Finite deltas and intermediate assessment scalars range over
    /// `0..=max_delta` and `-max_delta..=max_delta`.
    pub max_delta: u64,
    pub acts: usize,
    /// Stop after examining this many candidate problems.
    pub max_candidates: Option<u64>,
}

impl SearchBounds {
    pub fn new(max_prizes: usize, max_delta: u64) -> Self {
        SearchBounds { max_prizes, max_delta, acts: 2, max_candidates: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub witness: Option<DecisionProblem>,
    pub examined: u64,
    /// True when `max_candidates` stopped the search early.
    pub truncated: bool,
}

/// First witness, in canonical enumeration order, where the qualitative
/// and maximin rules disagree.
pub fn find_maximin_disagreement(bounds: &SearchBounds) -> Option<DecisionProblem> {
    search_maximin_disagreement(bounds).witness
}

/// Enumerates prize counts, then strictly decreasing assessments of the
/// intermediate prizes, then every tuple of normalized act lotteries.
pub fn search_maximin_disagreement(bounds: &SearchBounds) -> SearchOutcome {
    let mut examined = 0u64;
    if bounds.acts < 2 {
        return SearchOutcome { witness: None, examined, truncated: false };
    }
    let d = bounds.max_delta as i64;
    for r in 2..=bounds.max_prizes {
        let prizes = PrizeSet::numbered(r).expect("r >= 2");
        let lotteries = simple_lotteries(&prizes, bounds.max_delta);
        let worst: Vec<usize> = lotteries.iter().map(|l| worst_reachable(l.deltas())).collect();
        for middle in decreasing_sequences(r - 2, -d, d) {
            let mut values = vec![UtilityValue::BEST];
            values.extend(middle.iter().map(|&u| UtilityValue::from_scalar(ExtInt::Fin(u))));
            values.push(UtilityValue::WORST);
            let assessment = PrizeAssessment::new(&prizes, values).expect("strictly decreasing");
            let utility: Vec<ExtInt> = lotteries
                .iter()
                .map(|l| evaluate_simple(l, &assessment).expect("small values").scalar())
                .collect();

            let mut tuple = vec![0usize; bounds.acts];
            loop {
                if bounds.max_candidates.is_some_and(|cap| examined >= cap) {
                    return SearchOutcome { witness: None, examined, truncated: true };
                }
                examined += 1;
                if disagrees(&tuple, &utility, &worst) {
                    let chosen: Vec<&SimpleLottery> = tuple.iter().map(|&i| &lotteries[i]).collect();
                    let witness = product_problem(&chosen, &assessment)
                        .expect("constructed from valid lotteries");
                    return SearchOutcome { witness: Some(witness), examined, truncated: false };
                }
                if !advance(&mut tuple, lotteries.len()) {
                    break;
                }
            }
        }
    }
    SearchOutcome { witness: None, examined, truncated: false }
}

fn disagrees(tuple: &[usize], utility: &[ExtInt], worst: &[usize]) -> bool {
    // Stable tops: first maximal utility, first minimal worst index.
    let q_top = (0..tuple.len()).fold(0, |b, i| if utility[tuple[i]] > utility[tuple[b]] { i } else { b });
    let m_top = (0..tuple.len()).fold(0, |b, i| if worst[tuple[i]] < worst[tuple[b]] { i } else { b });
    q_top != m_top
        && utility[tuple[q_top]] > utility[tuple[m_top]]
        && worst[tuple[m_top]] < worst[tuple[q_top]]
}

fn advance(tuple: &mut [usize], base: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Every normalized delta vector over `{0..=max, ∞}`, in odometer order
/// with `∞` as the largest digit.
fn simple_lotteries(prizes: &Arc<PrizeSet>, max: u64) -> Vec<SimpleLottery> {
    let digits: Vec<ExtNat> = (0..=max).map(ExtNat::new).chain([INF]).collect();
    let mut idx = vec![0usize; prizes.len()];
    let mut out = Vec::new();
    loop {
        let deltas: Vec<ExtNat> = idx.iter().map(|&i| digits[i]).collect();
        if deltas.contains(&ZERO) {
            out.push(SimpleLottery::new(prizes, deltas).expect("min is 0"));
        }
        if !advance(&mut idx, digits.len()) {
            break;
        }
    }
    out
}

/// Strictly decreasing sequences of `len` integers in `[lo, hi]`, in
/// lexicographic order from the largest.
fn decreasing_sequences(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn go(len: usize, lo: i64, hi: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let remaining = (len - prefix.len()) as i64;
        let mut v = hi;
        while v - (remaining - 1) >= lo {
            prefix.push(v);
            go(len, lo, v - 1, prefix, out);
            prefix.pop();
            v -= 1;
        }
    }
    let mut out = Vec::new();
    go(len, lo, hi, &mut Vec::new(), &mut out);
    out
}

/// Realizes independent act lotteries as one decision problem: states
/// are tuples of prize indices, a state's disbelief is the sum of the
/// per-act deltas, and act `k` yields the `k`-th prize of the tuple.
/// Acts are named `A`, `B`, `C`, ...
pub fn product_problem(
    lotteries: &[&SimpleLottery],
    assessment: &PrizeAssessment,
) -> Result<DecisionProblem> {
    let prizes = assessment.prizes();
    let r = prizes.len();
    let n = lotteries.len();
    if n == 0 {
        return Err(Error::InvalidProblem("no acts".into()));
    }
    let mut labels = Vec::new();
    let mut potential = Vec::new();
    let mut rows: Vec<Vec<&str>> = vec![Vec::new(); n];
    let mut idx = vec![0usize; n];
    loop {
        let label = idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("_");
        labels.push(format!("s{label}"));
        let mut d = ZERO;
        for (k, &i) in idx.iter().enumerate() {
            d = d.checked_add(lotteries[k].deltas()[i])?;
            rows[k].push(prizes.label(i));
        }
        potential.push(d);
        if !advance(&mut idx, r) {
            break;
        }
    }
    let belief = DisbeliefFunction::new(Frame::new(labels)?, potential)?;
    let acts = rows.into_iter().enumerate().map(|(k, row)| (act_name(k), row));
    DecisionProblem::new(belief, assessment.clone(), acts)
}

fn act_name(k: usize) -> String {
    let mut s = String::new();
    let mut k = k;
    loop {
        s.insert(0, (b'A' + (k % 26) as u8) as char);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    s
}
