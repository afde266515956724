//! The stable JSON report envelope emitted by every `srtool` subcommand.
//!
//! A [`Report`] echoes the command and inputs, records the precision
//! settings in force, and carries one typed [`Payload`]. Serialization is
//! deterministic (ordered maps, rational values as exact strings), so fixed
//! inputs at a fixed version produce byte-identical documents — the
//! golden-file contract the CLI tests pin down. The machine-readable shape
//! is mirrored in `schemas/report.schema.json` at the repository root.

use serde::Serialize;

use crate::classify::{ExponentSet, PreserverFamily, Query};
use crate::expsum::{Bracket, ExpSum, TaylorCoeff};
use crate::interval::CertCtx;
use crate::matcore::{MinorWitness, PatternConstraints, SignPattern};
use crate::rat::format_rational;
use crate::witnesses::{MatrixData, ViolationClaim, WitnessReport};

/// Precision settings in force for a report's certified paths.
#[derive(Debug, Clone, Serialize)]
pub struct Precision {
    pub bits: u32,
    pub max_bits: u32,
    pub tol: f64,
}

impl Precision {
    pub fn from_ctx(ctx: &CertCtx) -> Precision {
        Precision {
            bits: ctx.bits,
            max_bits: ctx.max_bits,
            tol: ctx.tol,
        }
    }
}

/// Outcome of a `check` run.
#[derive(Debug, Clone, Serialize)]
pub struct CheckPayload {
    /// `"ssr-detect"`, `"sr"`, or `"ssr"`.
    pub check: String,
    /// `None` when the verdict is undetermined at the precision cap.
    pub holds: Option<bool>,
    /// Detected (ssr-detect) or requested (sr/ssr) pattern.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<SignPattern>,
    /// Violating or undetermined minor, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MinorWitness>,
    /// Per-level sign options for the non-strict condition (ssr-detect runs
    /// report these as context).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compatible: Option<PatternConstraints>,
}

/// One exponent probed by `powers`.
#[derive(Debug, Clone, Serialize)]
pub struct GridPoint {
    pub alpha: String,
    pub admissible: bool,
    /// Compact witness summary when inadmissible and constructible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSummary>,
    /// Set when no witness is constructed (admissible, or a carved-out
    /// regime); explains why.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Compact form of a [`WitnessReport`] for grid listings.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub construction: String,
    pub violation: ViolationClaim,
}

impl From<&WitnessReport> for WitnessSummary {
    fn from(rep: &WitnessReport) -> WitnessSummary {
        WitnessSummary {
            family: rep.family.map(|f| f.id().to_string()),
            construction: rep.construction.clone(),
            violation: rep.violation.clone(),
        }
    }
}

/// Payload of `powers`: the admissible set and the probed grid.
#[derive(Debug, Clone, Serialize)]
pub struct PowersPayload {
    pub query: Query,
    pub admissible: ExponentSet,
    pub grid: Vec<GridPoint>,
}

/// One `(coef, base)` term of an exponential sum, as exact strings.
#[derive(Debug, Clone, Serialize)]
pub struct TermData {
    pub coef: String,
    pub base: String,
}

/// Payload of `expsum`: the expanded sum and requested analyses.
#[derive(Debug, Clone, Serialize)]
pub struct ExpsumPayload {
    pub terms: Vec<TermData>,
    pub descartes_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taylor: Option<Vec<TaylorCoeff>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brackets: Option<BracketsPayload>,
}

/// Root brackets found on a closed interval.
#[derive(Debug, Clone, Serialize)]
pub struct BracketsPayload {
    pub lo: String,
    pub hi: String,
    pub brackets: Vec<Bracket>,
}

pub fn expsum_terms(sum: &ExpSum) -> Vec<TermData> {
    sum.terms()
        .iter()
        .map(|(c, b)| TermData {
            coef: format_rational(c),
            base: format_rational(b),
        })
        .collect()
}

/// Payload of `gen`: the generated matrix and its certified pattern.
#[derive(Debug, Clone, Serialize)]
pub struct GenPayload {
    pub matrix: MatrixData,
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<SignPattern>,
    pub seed: u64,
    pub trial: u64,
}

/// The result payload of one subcommand.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Payload {
    Check(CheckPayload),
    Classify { family: PreserverFamily },
    Powers(PowersPayload),
    Witness { report: WitnessReport },
    Expsum(ExpsumPayload),
    Gen(GenPayload),
}

/// The envelope: command echo, precision settings, and one payload.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub precision: Precision,
    /// Input echo (file names, query parameters, flags) as given.
    pub inputs: serde_json::Value,
    pub result: Payload,
}

impl Report {
    pub fn new(
        version: &str,
        command: &str,
        inputs: serde_json::Value,
        ctx: &CertCtx,
        result: Payload,
    ) -> Report {
        Report {
            tool: "srtool".to_string(),
            version: version.to_string(),
            command: command.to_string(),
            precision: Precision::from_ctx(ctx),
            inputs,
            result,
        }
    }

    /// Deterministic pretty JSON with a trailing newline (the golden-file
    /// byte format).
    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}
