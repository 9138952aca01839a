//! The problem file: one JSON document per problem, with `"inf"` as the
//! infinity literal.
//!
//! ```json
//! {
//!   "comment": "optional free text",
//!   "prizes": ["o1", "o2", "o3"],
//!   "assessment": { "o1": [0, "inf"], "o2": [0, 3], "o3": ["inf", 0] },
//!   "reference": { "best": "no damage", "worst": "destroyed" },
//!   "lottery": [ { "delta": 0, "child": "o2" }, { "delta": 5, "child": "o1" } ],
//!   "decision": {
//!     "states": ["s1", "s2"],
//!     "belief": [0, 2],
//!     "acts": [ { "name": "a", "outcomes": ["o1", "o3"] } ]
//!   },
//!   "prob_lottery": { "probs": [0.9, 0.1, 0.0], "utils": [1, 0.5, 0], "epsilon": 10 }
//! }
//! ```
//!
//! Only `prizes` is mandatory; each command checks for the sections it
//! needs. `reference` is only meaningful alongside `assessment`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use spohn_core::{
    DecisionProblem, DisbeliefFunction, EpsilonBase, ExtNat, Frame, Lottery, LotteryRecord,
    PrizeAssessment, PrizeSet, ProbLottery, UtilityValue,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub prizes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assessment: Option<BTreeMap<String, (ExtNat, ExtNat)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lottery: Option<LotteryRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prob_lottery: Option<ProbSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    pub best: String,
    pub worst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionSection {
    pub states: Vec<String>,
    pub belief: Vec<ExtNat>,
    pub acts: Vec<ActSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActSection {
    pub name: String,
    pub outcomes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbSection {
    pub probs: Vec<f64>,
    pub utils: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// A JSON syntax or schema error with its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.column, self.message)
    }
}

pub fn parse(text: &str) -> Result<ProblemFile, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_owned(),
        None => msg.to_owned(),
    }
}

/// Every section of a problem file, validated. Sections that were absent
/// are `None`; sections that failed validation are `None` and leave a
/// diagnostic behind.
#[derive(Debug, Default)]
pub struct Loaded {
    pub prizes: Option<Arc<PrizeSet>>,
    pub assessment: Option<PrizeAssessment>,
    pub lottery: Option<Lottery>,
    pub decision: Option<DecisionProblem>,
    pub prob_lottery: Option<ProbLottery>,
    pub epsilon: Option<EpsilonBase>,
    pub diagnostics: Vec<String>,
}

impl Loaded {
    pub fn is_clean(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

pub fn load(file: &ProblemFile) -> Loaded {
    let mut out = Loaded::default();
    let prizes = match PrizeSet::new(file.prizes.iter().cloned()) {
        Ok(p) => p,
        Err(e) => {
            out.diagnostics.push(format!("prizes: {e}"));
            return out;
        }
    };
    out.prizes = Some(prizes.clone());

    if let Some(raw) = &file.assessment {
        out.assessment = load_assessment(&prizes, raw, file.reference.as_ref(), &mut out.diagnostics);
    } else if file.reference.is_some() {
        out.diagnostics.push("reference: given without an assessment".into());
    }

    if let Some(rec) = &file.lottery {
        match Lottery::from_record(&prizes, rec) {
            Ok(l) => out.lottery = Some(l),
            Err(e) => out.diagnostics.push(format!("lottery: {e}")),
        }
    }

    if let Some(d) = &file.decision {
        match &out.assessment {
            Some(a) => match load_decision(d, a) {
                Ok(p) => out.decision = Some(p),
                Err(e) => out.diagnostics.push(format!("decision: {e}")),
            },
            None if file.assessment.is_none() => {
                out.diagnostics.push("decision: requires an assessment section".into())
            }
            None => {}
        }
    }

    if let Some(p) = &file.prob_lottery {
        match ProbLottery::new(&prizes, p.probs.clone(), p.utils.clone()) {
            Ok(l) => out.prob_lottery = Some(l),
            Err(e) => out.diagnostics.push(format!("prob_lottery: {e}")),
        }
        if let Some(eps) = p.epsilon {
            match EpsilonBase::new(eps) {
                Ok(e) => out.epsilon = Some(e),
                Err(e) => out.diagnostics.push(format!("prob_lottery: {e}")),
            }
        }
    }
    out
}

fn load_assessment(
    prizes: &Arc<PrizeSet>,
    raw: &BTreeMap<String, (ExtNat, ExtNat)>,
    reference: Option<&Reference>,
    diagnostics: &mut Vec<String>,
) -> Option<PrizeAssessment> {
    let before = diagnostics.len();
    let mut pairs = Vec::new();
    for (label, &(k1, kr)) in raw {
        if prizes.index_of(label).is_none() {
            diagnostics.push(format!("assessment: unknown prize `{label}`"));
            continue;
        }
        match UtilityValue::new(k1, kr) {
            Ok(v) => pairs.push((label.as_str(), v)),
            Err(e) => diagnostics.push(format!("assessment: {label}: {e}")),
        }
    }
    for label in prizes.labels() {
        if !raw.contains_key(label) {
            diagnostics.push(format!("assessment: prize `{label}` has no assessment"));
        }
    }
    if diagnostics.len() > before {
        return None;
    }
    let mut values = vec![UtilityValue::NEUTRAL; prizes.len()];
    for (label, v) in pairs {
        values[prizes.index_of(label).expect("checked above")] = v;
    }
    let built = match reference {
        Some(r) => PrizeAssessment::with_references(prizes, values, &r.best, &r.worst),
        None => PrizeAssessment::new(prizes, values),
    };
    built
        .map_err(|e| diagnostics.push(strip_assessment_prefix(&e.to_string())))
        .ok()
}

fn strip_assessment_prefix(msg: &str) -> String {
    if msg.starts_with("assessment: ") {
        msg.to_owned()
    } else {
        format!("assessment: {msg}")
    }
}

fn load_decision(d: &DecisionSection, a: &PrizeAssessment) -> spohn_core::Result<DecisionProblem> {
    let frame = Frame::new(d.states.iter().cloned())?;
    let belief = DisbeliefFunction::new(frame, d.belief.clone())?;
    DecisionProblem::new(belief, a.clone(), d.acts.iter().map(|act| (act.name.clone(), act.outcomes.clone())))
}

impl ProblemFile {
    /// The file form of a decision problem, including its assessment.
    pub fn from_decision(p: &DecisionProblem) -> Self {
        let prizes = p.prizes();
        let a = p.assessment();
        let assessment = prizes
            .labels()
            .iter()
            .zip(a.values())
            .map(|(l, v)| (l.clone(), (v.first(), v.second())))
            .collect();
        let reference = a.has_external_references().then(|| {
            let (best, worst) = a.reference_labels();
            Reference { best: best.to_owned(), worst: worst.to_owned() }
        });
        let acts = p
            .acts()
            .iter()
            .map(|name| ActSection {
                name: name.clone(),
                outcomes: p
                    .outcome_row(name)
                    .expect("act from the problem")
                    .into_iter()
                    .map(str::to_owned)
                    .collect(),
            })
            .collect();
        ProblemFile {
            comment: None,
            prizes: prizes.labels().to_vec(),
            assessment: Some(assessment),
            reference,
            lottery: None,
            decision: Some(DecisionSection {
                states: p.states().worlds().to_vec(),
                belief: p.belief().potential().to_vec(),
                acts,
            }),
            prob_lottery: None,
        }
    }
}
