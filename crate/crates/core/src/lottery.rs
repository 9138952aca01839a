//! Spohnian lotteries: trees whose leaves are prizes and whose internal
//! nodes carry a normalized disbelief vector over their children.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtNat, INF, ZERO};

/// Prize labels ordered from most to least preferred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrizeSet {
    prizes: Vec<String>,
    index: HashMap<String, usize>,
}

impl PrizeSet {
    pub fn new<I, S>(prizes: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let prizes: Vec<String> = prizes.into_iter().map(Into::into).collect();
        if prizes.len() < 2 {
            return Err(Error::TooFewPrizes(prizes.len()));
        }
        let mut index = HashMap::with_capacity(prizes.len());
        for (i, p) in prizes.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(p.clone()));
            }
        }
        Ok(Arc::new(PrizeSet { prizes, index }))
    }

    /// `o1, o2, …, o_count`.
    pub fn numbered(count: usize) -> Result<Arc<Self>> {
        PrizeSet::new((1..=count).map(|i| format!("o{i}")))
    }

    pub fn len(&self) -> usize {
        self.prizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prizes.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.prizes
    }

    pub fn label(&self, i: usize) -> &str {
        &self.prizes[i]
    }

    pub fn best(&self) -> &str {
        &self.prizes[0]
    }

    pub fn worst(&self) -> &str {
        &self.prizes[self.prizes.len() - 1]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownPrize(label.to_owned()))
    }
}

pub(crate) fn same_prizes(a: &Arc<PrizeSet>, b: &Arc<PrizeSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A depth-one lottery, identified with its disbelief vector over the
/// whole prize set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleLottery {
    prizes: Arc<PrizeSet>,
    deltas: Vec<ExtNat>,
}

impl SimpleLottery {
    pub fn new(prizes: &Arc<PrizeSet>, deltas: Vec<ExtNat>) -> Result<Self> {
        if deltas.len() != prizes.len() {
            return Err(Error::LengthMismatch { expected: prizes.len(), actual: deltas.len() });
        }
        match ExtNat::min_of(deltas.iter().copied()) {
            ZERO => Ok(SimpleLottery { prizes: prizes.clone(), deltas }),
            INF => Err(Error::AllInfinite),
            min => Err(Error::NodeNotNormalized(min)),
        }
    }

    /// A prize as a lottery: 0 at the prize, `∞` elsewhere.
    pub fn prize(prizes: &Arc<PrizeSet>, label: &str) -> Result<Self> {
        let i = prizes.require(label)?;
        Ok(SimpleLottery::prize_at(prizes, i))
    }

    pub(crate) fn prize_at(prizes: &Arc<PrizeSet>, i: usize) -> Self {
        let mut deltas = vec![INF; prizes.len()];
        deltas[i] = ZERO;
        SimpleLottery { prizes: prizes.clone(), deltas }
    }

    pub fn prizes(&self) -> &Arc<PrizeSet> {
        &self.prizes
    }

    pub fn deltas(&self) -> &[ExtNat] {
        &self.deltas
    }

    pub fn delta_of(&self, label: &str) -> Result<ExtNat> {
        Ok(self.deltas[self.prizes.require(label)?])
    }

    /// The depth-one tree with one branch per prize, including prizes
    /// disbelieved with certainty.
    pub fn to_lottery(&self) -> Lottery {
        let branches = self
            .deltas
            .iter()
            .enumerate()
            .map(|(i, &delta)| Branch {
                delta,
                child: Lottery { prizes: self.prizes.clone(), tree: Tree::Leaf(i) },
            })
            .collect();
        Lottery { prizes: self.prizes.clone(), tree: Tree::Node(branches) }
    }
}

impl fmt::Display for SimpleLottery {
    /// `o1:4 o2:0 o3:0`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (label, d)) in self.prizes.labels().iter().zip(&self.deltas).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{label}:{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub delta: ExtNat,
    pub child: Lottery,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    /// Index into the prize set.
    Leaf(usize),
    Node(Vec<Branch>),
}

/// A well-formed lottery tree over one prize set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lottery {
    prizes: Arc<PrizeSet>,
    tree: Tree,
}

impl Lottery {
    pub fn leaf(prizes: &Arc<PrizeSet>, label: &str) -> Result<Self> {
        let i = prizes.require(label)?;
        Ok(Lottery { prizes: prizes.clone(), tree: Tree::Leaf(i) })
    }

    pub fn node(branches: Vec<(ExtNat, Lottery)>) -> Result<Self> {
        let first = branches.first().ok_or(Error::EmptyBranches)?;
        let prizes = first.1.prizes.clone();
        if branches.iter().any(|(_, c)| !same_prizes(&c.prizes, &prizes)) {
            return Err(Error::PrizeSetMismatch);
        }
        let min = ExtNat::min_of(branches.iter().map(|(d, _)| *d));
        if !min.is_zero() {
            return Err(Error::NodeNotNormalized(min));
        }
        let branches = branches.into_iter().map(|(delta, child)| Branch { delta, child }).collect();
        Ok(Lottery { prizes, tree: Tree::Node(branches) })
    }

    pub fn prizes(&self) -> &Arc<PrizeSet> {
        &self.prizes
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn depth(&self) -> usize {
        match &self.tree {
            Tree::Leaf(_) => 0,
            Tree::Node(bs) => 1 + bs.iter().map(|b| b.child.depth()).max().unwrap_or(0),
        }
    }

    /// Collapses the tree bottom-up: `κ_j = min_i (δ_i + κ_ij)` where
    /// `κ_ij` is the reduced delta of prize `j` in child `i`.
    pub fn reduce(&self) -> Result<SimpleLottery> {
        match &self.tree {
            Tree::Leaf(i) => Ok(SimpleLottery::prize_at(&self.prizes, *i)),
            Tree::Node(branches) => {
                let mut acc = vec![INF; self.prizes.len()];
                for b in branches {
                    if b.delta.is_inf() {
                        continue;
                    }
                    let child = b.child.reduce()?;
                    for (slot, k) in acc.iter_mut().zip(child.deltas) {
                        *slot = (*slot).min(b.delta.checked_add(k)?);
                    }
                }
                SimpleLottery::new(&self.prizes, acc)
            }
        }
    }

    pub fn to_record(&self) -> LotteryRecord {
        match &self.tree {
            Tree::Leaf(i) => LotteryRecord::Leaf(self.prizes.label(*i).to_owned()),
            Tree::Node(bs) => LotteryRecord::Node(
                bs.iter()
                    .map(|b| BranchRecord { delta: b.delta, child: b.child.to_record() })
                    .collect(),
            ),
        }
    }

    pub fn from_record(prizes: &Arc<PrizeSet>, record: &LotteryRecord) -> Result<Self> {
        match record {
            LotteryRecord::Leaf(label) => Lottery::leaf(prizes, label),
            LotteryRecord::Node(bs) => Lottery::node(
                bs.iter()
                    .map(|b| Ok((b.delta, Lottery::from_record(prizes, &b.child)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

/// Wire form of a lottery: a prize label, or a list of branches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LotteryRecord {
    Leaf(String),
    Node(Vec<BranchRecord>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchRecord {
    pub delta: ExtNat,
    pub child: LotteryRecord,
}
