//! Spohnian disbelief functions over a finite frame of worlds.
//!
//! A disbelief function is fully determined by its potential, the degree
//! of disbelief of each singleton world. The degree of an event is the
//! minimum over its worlds (`∞` for the empty event), and the potential
//! must attain 0 somewhere.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtInt, ExtNat, INF, ZERO};

/// An ordered set of distinctly labelled worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    worlds: Vec<String>,
    index: HashMap<String, usize>,
}

impl Frame {
    pub fn new<I, S>(worlds: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let worlds: Vec<String> = worlds.into_iter().map(Into::into).collect();
        if worlds.is_empty() {
            return Err(Error::EmptyFrame);
        }
        let mut index = HashMap::with_capacity(worlds.len());
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(w.clone()));
            }
        }
        Ok(Frame { worlds, index })
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn index_of(&self, world: &str) -> Option<usize> {
        self.index.get(world).copied()
    }

    /// Membership mask of an event given by world labels.
    pub fn mask<S: AsRef<str>>(&self, event: &[S]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.len()];
        for w in event {
            let w = w.as_ref();
            let i = self.index_of(w).ok_or_else(|| Error::UnknownWorld(w.to_owned()))?;
            mask[i] = true;
        }
        Ok(mask)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.worlds.join(","))
    }
}

/// A normalized disbelief potential over a [`Frame`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisbeliefFunction {
    frame: Arc<Frame>,
    potential: Vec<ExtNat>,
}

/// Shifts a raw potential so its finite minimum becomes 0.
pub fn normalize(potential: &[ExtNat]) -> Result<Vec<ExtNat>> {
    let min = ExtNat::min_of(potential.iter().copied());
    if min.is_inf() {
        return Err(Error::AllInfinite);
    }
    Ok(potential
        .iter()
        .map(|v| v.checked_sub(min).expect("min is finite and no larger than any entry"))
        .collect())
}

impl DisbeliefFunction {
    /// Accepts the potential only if it already satisfies S1.
    pub fn new(frame: impl Into<Arc<Frame>>, potential: Vec<ExtNat>) -> Result<Self> {
        let frame = frame.into();
        if potential.len() != frame.len() {
            return Err(Error::LengthMismatch { expected: frame.len(), actual: potential.len() });
        }
        match ExtNat::min_of(potential.iter().copied()) {
            ZERO => Ok(DisbeliefFunction { frame, potential }),
            INF => Err(Error::AllInfinite),
            min => Err(Error::NotNormalized(min)),
        }
    }

    /// Builds a function from a raw potential, shifting it down first.
    pub fn normalized(frame: impl Into<Arc<Frame>>, potential: &[ExtNat]) -> Result<Self> {
        let frame = frame.into();
        if potential.len() != frame.len() {
            return Err(Error::LengthMismatch { expected: frame.len(), actual: potential.len() });
        }
        let potential = normalize(potential)?;
        Ok(DisbeliefFunction { frame, potential })
    }

    /// The vacuous function: every world has disbelief 0.
    pub fn vacuous(frame: impl Into<Arc<Frame>>) -> Self {
        let frame = frame.into();
        let potential = vec![ZERO; frame.len()];
        DisbeliefFunction { frame, potential }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn frame_arc(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn potential(&self) -> &[ExtNat] {
        &self.potential
    }

    pub fn of_world(&self, world: &str) -> Result<ExtNat> {
        self.frame
            .index_of(world)
            .map(|i| self.potential[i])
            .ok_or_else(|| Error::UnknownWorld(world.to_owned()))
    }

    fn of_mask(&self, mask: &[bool]) -> ExtNat {
        ExtNat::min_of(
            self.potential.iter().zip(mask).filter(|(_, &m)| m).map(|(v, _)| *v),
        )
    }

    /// Disbelief of an event: minimum over its worlds, `∞` when empty.
    pub fn disbelief_of_event<S: AsRef<str>>(&self, event: &[S]) -> Result<ExtNat> {
        let mask = self.frame.mask(event)?;
        Ok(self.of_mask(&mask))
    }

    /// Conditions on `event`: worlds outside it become `∞`, worlds inside
    /// are shifted down by the disbelief of the event.
    pub fn condition<S: AsRef<str>>(&self, event: &[S]) -> Result<Self> {
        let mask = self.frame.mask(event)?;
        let base = self.of_mask(&mask);
        if base.is_inf() {
            return Err(Error::ConditionOnDisbelievedCertainty);
        }
        let potential = self
            .potential
            .iter()
            .zip(&mask)
            .map(|(v, &inside)| {
                if inside {
                    v.checked_sub(base).expect("event min bounds every member")
                } else {
                    INF
                }
            })
            .collect();
        Ok(DisbeliefFunction { frame: self.frame.clone(), potential })
    }

    /// Pointwise sum of two potentials on the same frame, renormalized.
    pub fn combine(&self, other: &DisbeliefFunction) -> Result<Self> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch);
        }
        let raw = self
            .potential
            .iter()
            .zip(&other.potential)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Result<Vec<_>>>()?;
        DisbeliefFunction::normalized(self.frame.clone(), &raw)
    }

    /// Coarsens the frame. Each world maps to a coarse label; the coarse
    /// frame lists labels in order of first appearance and each coarse
    /// potential is the minimum over its preimage.
    pub fn marginalize<F>(&self, grouping: F) -> Result<Self>
    where
        F: Fn(&str) -> Option<String>,
    {
        let mut labels: Vec<String> = Vec::new();
        let mut slot: HashMap<String, usize> = HashMap::new();
        let mut potential: Vec<ExtNat> = Vec::new();
        for (world, &v) in self.frame.worlds().iter().zip(&self.potential) {
            let label = grouping(world).ok_or_else(|| Error::UngroupedWorld(world.clone()))?;
            match slot.get(&label) {
                Some(&i) => potential[i] = potential[i].min(v),
                None => {
                    slot.insert(label.clone(), labels.len());
                    labels.push(label);
                    potential.push(v);
                }
            }
        }
        DisbeliefFunction::new(Frame::new(labels)?, potential)
    }

    /// Marginalizes with an explicit world → label table.
    pub fn marginalize_by(&self, grouping: &HashMap<String, String>) -> Result<Self> {
        self.marginalize(|w| grouping.get(w).cloned())
    }

    /// Signed belief degree: `−δ(A)` when `A` is disbelieved, otherwise
    /// the disbelief of its complement.
    pub fn belief<S: AsRef<str>>(&self, event: &[S]) -> Result<ExtInt> {
        let mask = self.frame.mask(event)?;
        let d = self.of_mask(&mask);
        if d.is_zero() {
            let complement: Vec<bool> = mask.iter().map(|m| !m).collect();
            ExtInt::try_from(self.of_mask(&complement))
        } else {
            Ok(ExtInt::try_from(d)?.neg())
        }
    }

    /// `δ(A ∩ B) = δ(A) + δ(B)`.
    pub fn independent<S: AsRef<str>, T: AsRef<str>>(&self, a: &[S], b: &[T]) -> Result<bool> {
        let ma = self.frame.mask(a)?;
        let mb = self.frame.mask(b)?;
        let both: Vec<bool> = ma.iter().zip(&mb).map(|(x, y)| *x && *y).collect();
        let sum = self.of_mask(&ma).checked_add(self.of_mask(&mb))?;
        Ok(self.of_mask(&both) == sum)
    }
}

/// Wire form: `{"worlds": [...], "potential": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisbeliefRecord {
    pub worlds: Vec<String>,
    pub potential: Vec<ExtNat>,
}

impl From<&DisbeliefFunction> for DisbeliefRecord {
    fn from(d: &DisbeliefFunction) -> Self {
        DisbeliefRecord { worlds: d.frame.worlds().to_vec(), potential: d.potential.clone() }
    }
}

impl TryFrom<DisbeliefRecord> for DisbeliefFunction {
    type Error = Error;

    fn try_from(r: DisbeliefRecord) -> Result<Self> {
        DisbeliefFunction::new(Frame::new(r.worlds)?, r.potential)
    }
}
