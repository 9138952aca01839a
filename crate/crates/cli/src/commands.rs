//! Command implementations. Each takes the problem file's text and
//! returns what to print and the process exit code.

use serde::{Deserialize, Serialize};
use spohn_core::{
    gap_bound, order_agreement, search_maximin_disagreement, spohnian_from_prob, vnm_eu,
    EpsilonBase, ExtInt, ExtNat, SearchBounds, SimpleLottery, UtilityValue,
};

use crate::problem::{self, Loaded, ProblemFile};

/// Environment variable capping how many candidate problems `search`
/// examines.
pub const SEARCH_BOUND_VAR: &str = "KAPPA_SEARCH_BOUND";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Validation = 1,
    Parse = 2,
    Internal = 3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub exit: Exit,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, exit: Exit::Success }
    }

    fn fail(exit: Exit, text: String) -> Self {
        Output { text, exit }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub json: bool,
    pub epsilon: Option<f64>,
}

// ---------------------------------------------------------------------------
// Reports: the `--json` output of each command
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleLotteryReport {
    pub prizes: Vec<String>,
    pub deltas: Vec<ExtNat>,
}

impl From<&SimpleLottery> for SimpleLotteryReport {
    fn from(s: &SimpleLottery) -> Self {
        SimpleLotteryReport { prizes: s.prizes().labels().to_vec(), deltas: s.deltas().to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtilityReport {
    pub utility: UtilityValue,
    pub scalar: ExtInt,
    pub standard_lottery: SimpleLotteryReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedActReport {
    pub act: String,
    pub utility: UtilityValue,
    pub scalar: ExtInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximinActReport {
    pub act: String,
    pub worst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisagreementReport {
    pub qualitative_top: String,
    pub maximin_top: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub qualitative: Vec<RankedActReport>,
    pub maximin: Vec<MaximinActReport>,
    pub disagreement: Option<DisagreementReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub epsilon: f64,
    pub spohnian: SimpleLotteryReport,
    pub vnm_eu: f64,
    pub kappa_of_eu: ExtNat,
    pub qualitative_eu: ExtNat,
    pub gap: i64,
    pub gap_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub examined: u64,
    pub truncated: bool,
    pub witness: Option<ProblemFile>,
    pub disagreement: Option<DisagreementReport>,
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn emit<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

fn parse_and_load(text: &str) -> Result<Loaded, Output> {
    let file = problem::parse(text).map_err(|e| Output::fail(Exit::Parse, e.to_string()))?;
    let loaded = problem::load(&file);
    if !loaded.is_clean() {
        return Err(Output::fail(Exit::Validation, loaded.diagnostics.join("\n")));
    }
    Ok(loaded)
}

fn require<T>(section: Option<T>, name: &str) -> Result<T, Output> {
    section.ok_or_else(|| Output::fail(Exit::Validation, format!("missing section `{name}`")))
}

fn internal(e: spohn_core::Error) -> Output {
    Output::fail(Exit::Internal, format!("internal invariant breach: {e}"))
}

fn collapse(r: Result<Output, Output>) -> Output {
    r.unwrap_or_else(|e| e)
}

fn pair(u: UtilityValue) -> String {
    format!("({},{})", u.first(), u.second())
}

/// `x` with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

pub fn cmd_validate(text: &str, opts: Options) -> Output {
    let (diagnostics, exit) = match problem::parse(text) {
        Err(e) => (vec![e.to_string()], Exit::Parse),
        Ok(file) => {
            let l = problem::load(&file);
            let exit = if l.is_clean() { Exit::Success } else { Exit::Validation };
            (l.diagnostics, exit)
        }
    };
    let valid = exit == Exit::Success;
    let text = if opts.json {
        emit(&ValidateReport { valid, diagnostics })
    } else if valid {
        "ok".to_owned()
    } else {
        diagnostics.join("\n")
    };
    Output { text, exit }
}

pub fn cmd_reduce(text: &str, opts: Options) -> Output {
    collapse((|| {
        let l = parse_and_load(text)?;
        let lottery = require(l.lottery, "lottery")?;
        let s = lottery.reduce().map_err(internal)?;
        Ok(Output::ok(if opts.json { emit(&SimpleLotteryReport::from(&s)) } else { s.to_string() }))
    })())
}

pub fn utility_report(text: &str) -> Result<UtilityReport, Output> {
    let l = parse_and_load(text)?;
    let lottery = require(l.lottery, "lottery")?;
    let a = require(l.assessment, "assessment")?;
    let u = spohn_core::evaluate(&lottery, &a).map_err(internal)?;
    let s = spohn_core::standard_equivalent(&lottery, &a).map_err(internal)?;
    Ok(UtilityReport { utility: u, scalar: u.scalar(), standard_lottery: (&s).into() })
}

pub fn cmd_utility(text: &str, opts: Options) -> Output {
    collapse(utility_report(text).map(|r| {
        Output::ok(if opts.json { emit(&r) } else { format!("{}  u = {}", r.utility, r.scalar) })
    }))
}

pub fn rank_report(text: &str) -> Result<RankReport, Output> {
    let l = parse_and_load(text)?;
    let p = require(l.decision, "decision")?;
    let qualitative = p
        .rank_acts()
        .map_err(internal)?
        .into_iter()
        .map(|r| RankedActReport { scalar: r.utility.scalar(), act: r.act, utility: r.utility })
        .collect();
    let maximin = p
        .maximin_rank()
        .into_iter()
        .map(|m| MaximinActReport { worst: p.prizes().label(m.worst).to_owned(), act: m.act })
        .collect();
    let disagreement = p.disagreement().map_err(internal)?.map(|d| DisagreementReport {
        qualitative_top: d.qualitative_top,
        maximin_top: d.maximin_top,
    });
    Ok(RankReport { qualitative, maximin, disagreement })
}

pub fn cmd_rank(text: &str, opts: Options) -> Output {
    collapse(rank_report(text).map(|r| {
        if opts.json {
            return Output::ok(emit(&r));
        }
        let mut out = String::from("qualitative expected utility:\n");
        for a in &r.qualitative {
            out.push_str(&format!("  {} {}  u = {}\n", a.act, pair(a.utility), a.scalar));
        }
        out.push_str("maximin:\n");
        for m in &r.maximin {
            out.push_str(&format!("  {}  worst = {}\n", m.act, m.worst));
        }
        match &r.disagreement {
            Some(d) => out.push_str(&format!(
                "disagreement: qualitative prefers {}, maximin prefers {}",
                d.qualitative_top, d.maximin_top
            )),
            None => out.push_str("disagreement: none"),
        }
        Output::ok(out)
    }))
}

pub fn bridge_report(text: &str, epsilon: Option<f64>) -> Result<BridgeReport, Output> {
    let l = parse_and_load(text)?;
    let pl = require(l.prob_lottery, "prob_lottery")?;
    let eps = match epsilon {
        Some(e) => EpsilonBase::new(e).map_err(|e| Output::fail(Exit::Validation, format!("--epsilon: {e}")))?,
        None => l.epsilon.unwrap_or_default(),
    };
    let s = spohnian_from_prob(&pl, eps).map_err(internal)?;
    let agreement = order_agreement(&pl, eps).map_err(internal)?;
    Ok(BridgeReport {
        epsilon: eps.get(),
        spohnian: (&s).into(),
        vnm_eu: vnm_eu(&pl),
        kappa_of_eu: agreement.kappa_of_eu,
        qualitative_eu: agreement.qualitative_eu,
        gap: agreement.gap,
        gap_bound: gap_bound(pl.prizes().len(), eps),
    })
}

pub fn cmd_bridge(text: &str, opts: Options) -> Output {
    collapse(bridge_report(text, opts.epsilon).map(|r| {
        if opts.json {
            return Output::ok(emit(&r));
        }
        let deltas: Vec<String> = r.spohnian.deltas.iter().map(ToString::to_string).collect();
        Output::ok(format!(
            "spohnian: ({})\nvnm eu: {}\nkappa of eu: {}\nqualitative eu: {}\ngap: {} (bound {})",
            deltas.join(","),
            sig6(r.vnm_eu),
            r.kappa_of_eu,
            r.qualitative_eu,
            r.gap,
            r.gap_bound
        ))
    }))
}

/// Reads the candidate cap from [`SEARCH_BOUND_VAR`].
pub fn search_cap_from_env() -> Result<Option<u64>, Output> {
    match std::env::var(SEARCH_BOUND_VAR) {
        Err(_) => Ok(None),
        Ok(v) => v.trim().parse::<u64>().map(Some).map_err(|_| {
            Output::fail(Exit::Validation, format!("{SEARCH_BOUND_VAR} must be a non-negative integer, got `{v}`"))
        }),
    }
}

pub fn search_report(bounds: &SearchBounds) -> Result<SearchReport, Output> {
    let outcome = search_maximin_disagreement(bounds);
    let disagreement = match &outcome.witness {
        Some(w) => {
            let d = w.disagreement().map_err(internal)?.ok_or_else(|| {
                Output::fail(Exit::Internal, "internal invariant breach: witness does not disagree".into())
            })?;
            Some(DisagreementReport { qualitative_top: d.qualitative_top, maximin_top: d.maximin_top })
        }
        None => None,
    };
    Ok(SearchReport {
        examined: outcome.examined,
        truncated: outcome.truncated,
        witness: outcome.witness.as_ref().map(ProblemFile::from_decision),
        disagreement,
    })
}

pub fn cmd_search(bounds: SearchBounds, opts: Options) -> Output {
    collapse((|| {
        let cap = search_cap_from_env()?;
        let bounds = SearchBounds { max_candidates: cap.or(bounds.max_candidates), ..bounds };
        let r = search_report(&bounds)?;
        if opts.json {
            return Ok(Output::ok(emit(&r)));
        }
        let mut out = format!("examined {} candidate problems", r.examined);
        if r.truncated {
            out.push_str(&format!(" (stopped by {SEARCH_BOUND_VAR})"));
        }
        match (&r.witness, &r.disagreement) {
            (Some(w), Some(d)) => {
                let p = problem::load(w).decision.expect("witness is valid");
                out.push_str("\nwitness:\n");
                for act in p.acts() {
                    let l = p.act_lottery(act).map_err(internal)?;
                    out.push_str(&format!("  {act}: {l}\n"));
                }
                let a = p.assessment();
                let assessed: Vec<String> = p
                    .prizes()
                    .labels()
                    .iter()
                    .zip(a.values())
                    .map(|(l, v)| format!("{l}={}", pair(*v)))
                    .collect();
                out.push_str(&format!("  assessment: {}\n", assessed.join(" ")));
                out.push_str(&format!(
                    "qualitative prefers {}, maximin prefers {}",
                    d.qualitative_top, d.maximin_top
                ));
            }
            _ => out.push_str("\nno disagreement found"),
        }
        Ok(Output::ok(out))
    })())
}
