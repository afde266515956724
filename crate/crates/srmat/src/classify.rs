//! Classification of entrywise preservers.
//!
//! For each shape `(m, n)`, preservation mode (SR or SSR), and scope (one
//! fixed sign pattern, or all patterns at once), the classification describes
//! **exactly** which entrywise maps send every matrix of the class back into
//! it. The answer is always a short union of clauses — scaled powers, scaled
//! signum maps, nonzero constants, two-sided piecewise powers, or "anything
//! with the right value signs" in the degenerate low-dimensional cases — with
//! one genuinely open cell: strict 2×2 preservation across all patterns.
//!
//! Dimension thresholds matter more than the dimensions themselves: the
//! behavior stabilizes at `d = min(m, n) ≥ 4` (fixed pattern) and at
//! `min(m, n) ≥ 3` / square `n ≥ 4` (all patterns), which is why the tables
//! below branch on small `d` and then flatten.
//!
//! Sign patterns with `ε₁ = −1` force one-signed *negative* entries; their
//! preserver families are exactly the reflections `f(x) ↦ −f(−x)` of the
//! `ε₁ = +1` families, with the `ε₂ = ε₃` and `ε₂ ≠ ε₃` branches trading
//! places (negation flips the sign of every odd-order minor, so the pattern
//! seen by the reflected family has `ε₃` negated). The tables here encode the
//! reflected families literally rather than by reference.

use crate::funcspec::{Dom, FuncKind, FunctionSpec};
use crate::matcore::SignPattern;
use crate::rat::{format_rational, Q};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;

/// Preservation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sr,
    Ssr,
}

/// Whether one fixed pattern or all patterns must be preserved.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "scope", rename_all = "snake_case")]
pub enum Scope {
    FixedPattern { eps: SignPattern },
    AllPatterns,
}

/// Requested entry domain, as named in queries. For fixed patterns the name
/// refers to the one-signed domain matching `ε₁` (so `nonneg` means `(−∞,0]`
/// when `ε₁ = −1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryDomain {
    Nonneg,
    Positive,
    Real,
    RealNonzero,
}

impl std::str::FromStr for EntryDomain {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nonneg" => Ok(EntryDomain::Nonneg),
            "positive" => Ok(EntryDomain::Positive),
            "real" => Ok(EntryDomain::Real),
            "real-nonzero" => Ok(EntryDomain::RealNonzero),
            _ => Err(format!(
                "invalid entry domain {s:?} (expected nonneg|positive|real|real-nonzero)"
            )),
        }
    }
}

/// A classification query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Query {
    pub m: usize,
    pub n: usize,
    pub mode: Mode,
    #[serde(flatten)]
    pub scope: Scope,
    pub entry_domain: EntryDomain,
}

impl Query {
    pub fn d(&self) -> usize {
        self.m.min(self.n)
    }

    pub fn eps(&self) -> Option<&SignPattern> {
        match &self.scope {
            Scope::FixedPattern { eps } => Some(eps),
            Scope::AllPatterns => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("membership is undecidable here: {0}")]
    PartialUndecidable(String),
}

// ----------------------------------------------------------------------
// Exponent sets
// ----------------------------------------------------------------------

/// One endpoint of an interval of exponents.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Endpoint {
    NegInf,
    PosInf,
    Finite {
        #[serde(serialize_with = "crate::rat::ser_q")]
        v: Q,
        closed: bool,
    },
}

/// An interval of admissible exponents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

/// A canonical set of exponents: disjoint intervals in increasing order plus
/// isolated points not contained in any interval, sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ExponentSet {
    pub intervals: Vec<ExpInterval>,
    #[serde(serialize_with = "ser_q_vec")]
    pub points: Vec<Q>,
}

fn ser_q_vec<S: serde::Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&format_rational(q))?;
    }
    seq.end()
}

impl ExponentSet {
    pub fn empty() -> ExponentSet {
        ExponentSet::default()
    }

    pub fn points(ps: &[i64]) -> ExponentSet {
        let mut points: Vec<Q> = ps.iter().map(|&p| crate::rat::qi(p)).collect();
        points.sort();
        points.dedup();
        ExponentSet {
            intervals: vec![],
            points,
        }
    }

    pub fn interval(lo: Endpoint, hi: Endpoint) -> ExponentSet {
        ExponentSet {
            intervals: vec![ExpInterval { lo, hi }],
            points: vec![],
        }
    }

    /// `[0, ∞)`
    pub fn zero_to_inf_closed() -> ExponentSet {
        ExponentSet::interval(
            Endpoint::Finite {
                v: Q::zero(),
                closed: true,
            },
            Endpoint::PosInf,
        )
    }

    /// `(0, ∞)`
    pub fn zero_to_inf_open() -> ExponentSet {
        ExponentSet::interval(
            Endpoint::Finite {
                v: Q::zero(),
                closed: false,
            },
            Endpoint::PosInf,
        )
    }

    /// `[0, 1]`
    pub fn unit_closed() -> ExponentSet {
        ExponentSet::interval(
            Endpoint::Finite {
                v: Q::zero(),
                closed: true,
            },
            Endpoint::Finite {
                v: Q::one(),
                closed: true,
            },
        )
    }

    /// `(0, 1]`
    pub fn unit_half_open() -> ExponentSet {
        ExponentSet::interval(
            Endpoint::Finite {
                v: Q::zero(),
                closed: false,
            },
            Endpoint::Finite {
                v: Q::one(),
                closed: true,
            },
        )
    }

    /// `[1, ∞)`
    pub fn one_to_inf() -> ExponentSet {
        ExponentSet::interval(
            Endpoint::Finite {
                v: Q::one(),
                closed: true,
            },
            Endpoint::PosInf,
        )
    }

    /// `{0} ∪ [1, ∞)`
    pub fn zero_point_and_one_to_inf() -> ExponentSet {
        ExponentSet {
            intervals: vec![ExpInterval {
                lo: Endpoint::Finite {
                    v: Q::one(),
                    closed: true,
                },
                hi: Endpoint::PosInf,
            }],
            points: vec![Q::zero()],
        }
    }

    /// All of ℝ.
    pub fn all_reals() -> ExponentSet {
        ExponentSet::interval(Endpoint::NegInf, Endpoint::PosInf)
    }

    /// ℝ \ {0}
    pub fn nonzero_reals() -> ExponentSet {
        ExponentSet {
            intervals: vec![
                ExpInterval {
                    lo: Endpoint::NegInf,
                    hi: Endpoint::Finite {
                        v: Q::zero(),
                        closed: false,
                    },
                },
                ExpInterval {
                    lo: Endpoint::Finite {
                        v: Q::zero(),
                        closed: false,
                    },
                    hi: Endpoint::PosInf,
                },
            ],
            points: vec![],
        }
    }

    pub fn contains(&self, alpha: &Q) -> bool {
        if self.points.iter().any(|p| p == alpha) {
            return true;
        }
        self.intervals.iter().any(|iv| {
            let lo_ok = match &iv.lo {
                Endpoint::NegInf => true,
                Endpoint::PosInf => false,
                Endpoint::Finite { v, closed } => {
                    if *closed {
                        alpha >= v
                    } else {
                        alpha > v
                    }
                }
            };
            let hi_ok = match &iv.hi {
                Endpoint::PosInf => true,
                Endpoint::NegInf => false,
                Endpoint::Finite { v, closed } => {
                    if *closed {
                        alpha <= v
                    } else {
                        alpha < v
                    }
                }
            };
            lo_ok && hi_ok
        })
    }

    /// Structural subset test, sufficient for the simple sets in the tables.
    pub fn is_subset_of(&self, other: &ExponentSet) -> bool {
        for p in &self.points {
            if !other.contains(p) {
                return false;
            }
        }
        for iv in &self.intervals {
            if !other.covers_interval(iv) {
                return false;
            }
        }
        true
    }

    fn covers_interval(&self, iv: &ExpInterval) -> bool {
        self.intervals.iter().any(|o| {
            endpoint_le_lo(&o.lo, &iv.lo) && endpoint_ge_hi(&o.hi, &iv.hi)
        })
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.points.is_empty()
    }
}

/// `a ≤ b` for lower endpoints (a less restrictive lower bound covers).
fn endpoint_le_lo(a: &Endpoint, b: &Endpoint) -> bool {
    match (a, b) {
        (Endpoint::NegInf, _) => true,
        (_, Endpoint::NegInf) => false,
        (Endpoint::Finite { v: va, closed: ca }, Endpoint::Finite { v: vb, closed: cb }) => {
            va < vb || (va == vb && (*ca || !*cb))
        }
        (Endpoint::Finite { .. }, Endpoint::PosInf) => true,
        (Endpoint::PosInf, _) => false,
    }
}

/// `a ≥ b` for upper endpoints.
fn endpoint_ge_hi(a: &Endpoint, b: &Endpoint) -> bool {
    match (a, b) {
        (Endpoint::PosInf, _) => true,
        (_, Endpoint::PosInf) => false,
        (Endpoint::Finite { v: va, closed: ca }, Endpoint::Finite { v: vb, closed: cb }) => {
            va > vb || (va == vb && (*ca || !*cb))
        }
        (Endpoint::Finite { .. }, Endpoint::NegInf) => true,
        (Endpoint::NegInf, _) => false,
    }
}

impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<String> = Vec::new();
        for p in &self.points {
            pieces.push(format!("{{{}}}", format_rational(p)));
        }
        for iv in &self.intervals {
            let lo = match &iv.lo {
                Endpoint::NegInf => "(-inf".to_string(),
                Endpoint::PosInf => unreachable!("empty interval"),
                Endpoint::Finite { v, closed } => {
                    format!("{}{}", if *closed { "[" } else { "(" }, format_rational(v))
                }
            };
            let hi = match &iv.hi {
                Endpoint::PosInf => "inf)".to_string(),
                Endpoint::NegInf => unreachable!("empty interval"),
                Endpoint::Finite { v, closed } => {
                    format!("{}{}", format_rational(v), if *closed { "]" } else { ")" })
                }
            };
            pieces.push(format!("{lo},{hi}"));
        }
        if pieces.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{}", pieces.join(" u "))
    }
}

// ----------------------------------------------------------------------
// Clauses and families
// ----------------------------------------------------------------------

/// Allowed range of a scalar coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefRange {
    Any,
    NonNeg,
    Positive,
    NonPos,
    Negative,
    NonZero,
}

impl CoefRange {
    pub fn contains(&self, c: &Q) -> bool {
        match self {
            CoefRange::Any => true,
            CoefRange::NonNeg => !c.is_negative(),
            CoefRange::Positive => c.is_positive(),
            CoefRange::NonPos => !c.is_positive(),
            CoefRange::Negative => c.is_negative(),
            CoefRange::NonZero => !c.is_zero(),
        }
    }

    /// The reflected range under `f(x) ↦ −f(−x)` (coefficient negates).
    pub fn reflected(&self) -> CoefRange {
        match self {
            CoefRange::Any => CoefRange::Any,
            CoefRange::NonNeg => CoefRange::NonPos,
            CoefRange::Positive => CoefRange::Negative,
            CoefRange::NonPos => CoefRange::NonNeg,
            CoefRange::Negative => CoefRange::Positive,
            CoefRange::NonZero => CoefRange::NonZero,
        }
    }
}

/// Value-level constraints for the "any function" clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueConstraint {
    /// `f ≥ 0` everywhere on the domain.
    NonNegValues,
    /// `f > 0` everywhere on the domain.
    PositiveValues,
    /// `f ≤ 0` everywhere on the domain.
    NonPosValues,
    /// `f < 0` everywhere on the domain.
    NegativeValues,
    /// No constraint at all.
    Unconstrained,
    /// `f(x) ≠ 0` for every `x` in the domain.
    NowhereZero,
    /// Either `f` is one-signed on all of ℝ, or `f(0) = 0` and `f` is
    /// one-signed on each open half-line separately.
    SignDichotomy,
    /// `f` is strictly one-signed (no zeros) on each open half-line, with the
    /// two half-line signs independent.
    HalfLinesStrictlyOneSigned,
}

/// One clause of a preserver family.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Clause {
    AnyFunction {
        constraint: ValueConstraint,
    },
    /// `f ≡ c`, `c ≠ 0`.
    Constant {
        c: CoefRange,
    },
    /// `f(x) = c·sgn(x)` on sign-symmetric domains; on one-signed domains the
    /// same map reads `f = c` off zero with `f(0) = 0`.
    ScaledSignum {
        c: CoefRange,
    },
    /// `f(x) = c·x^α` (equivalently `c·|x|^α` on one-signed negative
    /// domains), with `α` ranging over the attached set.
    ScaledPower {
        c: CoefRange,
        exponents: ExponentSet,
    },
    /// `f(x) = c₁·|x|^{α₁}` for `x < 0` and `c₂·x^{α₂}` for `x > 0`, with the
    /// value at 0 forced to 0 when 0 is in the domain.
    PiecewiseTwoSided {
        neg_c: CoefRange,
        neg_exponents: ExponentSet,
        pos_c: CoefRange,
        pos_exponents: ExponentSet,
        zero_in_domain: bool,
    },
    /// The open cell: no complete description is known; the partial necessary
    /// conditions live in `funcspec::check_lemma37_conditions`.
    Partial {
        reason: String,
    },
}

/// The classified family of preservers for one query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreserverFamily {
    pub query: Query,
    /// Domain on which member functions act.
    pub function_domain: Dom,
    /// The clauses, whose union is the family.
    pub clauses: Vec<Clause>,
    /// Remarks (branch taken, reflection applied, …).
    pub notes: Vec<String>,
}

impl PreserverFamily {
    pub fn has_partial(&self) -> bool {
        self.clauses.iter().any(|c| matches!(c, Clause::Partial { .. }))
    }
}

// ----------------------------------------------------------------------
// Query validation
// ----------------------------------------------------------------------

/// Validates a query and resolves the function domain.
pub fn validate(q: &Query) -> Result<Dom, ClassifyError> {
    if q.m == 0 || q.n == 0 {
        return Err(ClassifyError::InvalidQuery(
            "matrix dimensions must be positive".into(),
        ));
    }
    if let Some(eps) = q.eps() {
        if eps.d() != q.d() {
            return Err(ClassifyError::InvalidQuery(format!(
                "pattern length {} does not match d = min(m,n) = {}",
                eps.d(),
                q.d()
            )));
        }
        if eps.0.iter().any(|&s| s != 1 && s != -1) {
            return Err(ClassifyError::InvalidQuery(
                "pattern entries must be +1 or -1".into(),
            ));
        }
    }
    match (&q.scope, q.mode, q.entry_domain) {
        (Scope::FixedPattern { eps }, Mode::Sr, EntryDomain::Nonneg) => {
            Ok(if eps.eps(1) == 1 { Dom::NonNeg } else { Dom::NonPos })
        }
        (Scope::FixedPattern { eps }, Mode::Ssr, EntryDomain::Positive) => {
            Ok(if eps.eps(1) == 1 { Dom::Positive } else { Dom::Negative })
        }
        (Scope::FixedPattern { .. }, Mode::Sr, other) => Err(ClassifyError::InvalidQuery(format!(
            "fixed-pattern SR queries require entry domain 'nonneg', got {other:?}"
        ))),
        (Scope::FixedPattern { .. }, Mode::Ssr, other) => Err(ClassifyError::InvalidQuery(format!(
            "fixed-pattern SSR queries require entry domain 'positive', got {other:?}"
        ))),
        (Scope::AllPatterns, Mode::Sr, EntryDomain::Real) => Ok(Dom::Real),
        (Scope::AllPatterns, Mode::Ssr, EntryDomain::RealNonzero) => Ok(Dom::RealNonZero),
        (Scope::AllPatterns, Mode::Sr, EntryDomain::Nonneg) => Ok(Dom::NonNeg),
        (Scope::AllPatterns, Mode::Ssr, EntryDomain::Positive) => Ok(Dom::Positive),
        (Scope::AllPatterns, mode, other) => Err(ClassifyError::InvalidQuery(format!(
            "all-pattern {mode:?} queries accept entry domain {}, got {other:?}",
            match mode {
                Mode::Sr => "'real' or 'nonneg'",
                Mode::Ssr => "'real-nonzero' or 'positive'",
            }
        ))),
    }
}

// ----------------------------------------------------------------------
// The decision tables
// ----------------------------------------------------------------------

/// Branch selector for fixed-pattern queries with `d ≥ 3`: whether the
/// pattern behaves like `ε₂ = ε₃` **after** reflecting `ε₁ = −1` patterns to
/// their one-signed-positive base form (reflection negates odd orders, so it
/// swaps the literal branches).
pub(crate) fn base_branch_eq(eps: &SignPattern) -> bool {
    let e1 = eps.eps(1);
    let e2 = eps.eps(2);
    let e3 = eps.eps(3);
    if e1 == 1 {
        e2 == e3
    } else {
        e2 == -e3
    }
}

/// Classifies a validated query.
pub fn classify(q: &Query) -> Result<PreserverFamily, ClassifyError> {
    let function_domain = validate(q)?;
    let d = q.d();
    let mut notes = Vec::new();
    let clauses = match (&q.scope, q.mode, q.entry_domain) {
        (Scope::FixedPattern { eps }, mode, _) => {
            let reflected = eps.eps(1) == -1;
            if reflected {
                notes.push(
                    "pattern has negative first-order sign; family is the reflection \
                     f(x) -> -f(-x) of the corresponding one-signed-positive family, \
                     with the d=3 branches exchanged"
                        .into(),
                );
            }
            if d >= 3 {
                notes.push(format!(
                    "branch: effective second/third-order relation is '{}'",
                    if base_branch_eq(eps) { "equal" } else { "unequal" }
                ));
            }
            let base = fixed_clauses_base(
                d,
                if d >= 3 { Some(base_branch_eq(eps)) } else { None },
                mode,
            );
            if reflected {
                base.into_iter().map(reflect_clause).collect()
            } else {
                base
            }
        }
        (Scope::AllPatterns, Mode::Sr, EntryDomain::Real) => all_sr_real(q.m, q.n),
        (Scope::AllPatterns, Mode::Ssr, EntryDomain::RealNonzero) => all_ssr_nonzero(q.m, q.n),
        (Scope::AllPatterns, Mode::Sr, EntryDomain::Nonneg) => all_sr_nonneg(q.m, q.n),
        (Scope::AllPatterns, Mode::Ssr, EntryDomain::Positive) => all_ssr_positive(q.m, q.n),
        _ => unreachable!("validate filtered other combinations"),
    };
    Ok(PreserverFamily {
        query: q.clone(),
        function_domain,
        clauses,
        notes,
    })
}

/// Fixed-pattern tables for the one-signed-positive base form (`ε₁ = +1`).
fn fixed_clauses_base(d: usize, branch_eq: Option<bool>, mode: Mode) -> Vec<Clause> {
    match mode {
        Mode::Sr => match (d, branch_eq) {
            (1, _) => vec![Clause::AnyFunction {
                constraint: ValueConstraint::NonNegValues,
            }],
            (2, _) => vec![
                Clause::ScaledSignum { c: CoefRange::NonNeg },
                Clause::ScaledPower {
                    c: CoefRange::NonNeg,
                    exponents: ExponentSet::zero_to_inf_closed(),
                },
            ],
            (3, Some(false)) => vec![
                Clause::ScaledSignum { c: CoefRange::NonNeg },
                Clause::ScaledPower {
                    c: CoefRange::NonNeg,
                    exponents: ExponentSet::unit_closed(),
                },
            ],
            (3, Some(true)) => vec![Clause::ScaledPower {
                c: CoefRange::NonNeg,
                exponents: ExponentSet::zero_point_and_one_to_inf(),
            }],
            (_, Some(false)) => vec![
                Clause::ScaledSignum { c: CoefRange::NonNeg },
                Clause::ScaledPower {
                    c: CoefRange::NonNeg,
                    exponents: ExponentSet::points(&[0, 1]),
                },
            ],
            (_, Some(true)) => vec![Clause::ScaledPower {
                c: CoefRange::NonNeg,
                exponents: ExponentSet::points(&[0, 1]),
            }],
            _ => unreachable!("d >= 3 requires a branch"),
        },
        Mode::Ssr => match (d, branch_eq) {
            (1, _) => vec![Clause::AnyFunction {
                constraint: ValueConstraint::PositiveValues,
            }],
            (2, _) => vec![Clause::ScaledPower {
                c: CoefRange::Positive,
                exponents: ExponentSet::zero_to_inf_open(),
            }],
            (3, Some(false)) => vec![Clause::ScaledPower {
                c: CoefRange::Positive,
                exponents: ExponentSet::unit_half_open(),
            }],
            (3, Some(true)) => vec![Clause::ScaledPower {
                c: CoefRange::Positive,
                exponents: ExponentSet::one_to_inf(),
            }],
            (_, Some(_)) => vec![Clause::ScaledPower {
                c: CoefRange::Positive,
                exponents: ExponentSet::points(&[1]),
            }],
            _ => unreachable!("d >= 3 requires a branch"),
        },
    }
}

/// Reflection `f(x) ↦ −f(−x)` at the clause level: coefficient ranges negate;
/// exponent sets and structural shapes are unchanged.
fn reflect_clause(c: Clause) -> Clause {
    match c {
        Clause::AnyFunction { constraint } => Clause::AnyFunction {
            constraint: match constraint {
                ValueConstraint::NonNegValues => ValueConstraint::NonPosValues,
                ValueConstraint::PositiveValues => ValueConstraint::NegativeValues,
                ValueConstraint::NonPosValues => ValueConstraint::NonNegValues,
                ValueConstraint::NegativeValues => ValueConstraint::PositiveValues,
                other => other,
            },
        },
        Clause::Constant { c } => Clause::Constant { c: c.reflected() },
        Clause::ScaledSignum { c } => Clause::ScaledSignum { c: c.reflected() },
        Clause::ScaledPower { c, exponents } => Clause::ScaledPower {
            c: c.reflected(),
            exponents,
        },
        Clause::PiecewiseTwoSided {
            neg_c,
            neg_exponents,
            pos_c,
            pos_exponents,
            zero_in_domain,
        } => Clause::PiecewiseTwoSided {
            // Reflection swaps the half-lines.
            neg_c: pos_c.reflected(),
            neg_exponents: pos_exponents,
            pos_c: neg_c.reflected(),
            pos_exponents: neg_exponents,
            zero_in_domain,
        },
        partial @ Clause::Partial { .. } => partial,
    }
}

/// All-pattern SR preservers on real entries.
fn all_sr_real(m: usize, n: usize) -> Vec<Clause> {
    let square = m == n;
    let d = m.min(n);
    if square && n == 1 {
        return vec![Clause::AnyFunction {
            constraint: ValueConstraint::Unconstrained,
        }];
    }
    if (square && n == 2) || (!square && d == 1) {
        return vec![Clause::AnyFunction {
            constraint: ValueConstraint::SignDichotomy,
        }];
    }
    if (square && n == 3) || (!square && d == 2) {
        return vec![
            Clause::Constant { c: CoefRange::NonZero },
            Clause::PiecewiseTwoSided {
                neg_c: CoefRange::Any,
                neg_exponents: ExponentSet::zero_to_inf_closed(),
                pos_c: CoefRange::Any,
                pos_exponents: ExponentSet::zero_to_inf_closed(),
                zero_in_domain: true,
            },
        ];
    }
    vec![
        Clause::Constant { c: CoefRange::NonZero },
        Clause::PiecewiseTwoSided {
            neg_c: CoefRange::Any,
            neg_exponents: ExponentSet::points(&[1]),
            pos_c: CoefRange::Any,
            pos_exponents: ExponentSet::points(&[1]),
            zero_in_domain: true,
        },
    ]
}

/// All-pattern SSR preservers on nonzero real entries.
fn all_ssr_nonzero(m: usize, n: usize) -> Vec<Clause> {
    let square = m == n;
    let d = m.min(n);
    if square && n == 1 {
        return vec![Clause::AnyFunction {
            constraint: ValueConstraint::NowhereZero,
        }];
    }
    if (m, n) == (2, 2) {
        return vec![Clause::Partial {
            reason: "the strict 2x2 all-pattern case has no complete classification; \
                     necessary conditions are available via the 2x2 lemma checks"
                .into(),
        }];
    }
    if !square && d == 1 {
        return vec![Clause::AnyFunction {
            constraint: ValueConstraint::HalfLinesStrictlyOneSigned,
        }];
    }
    if !square && d == 2 {
        return vec![Clause::PiecewiseTwoSided {
            neg_c: CoefRange::NonZero,
            neg_exponents: ExponentSet::nonzero_reals(),
            pos_c: CoefRange::NonZero,
            pos_exponents: ExponentSet::nonzero_reals(),
            zero_in_domain: false,
        }];
    }
    vec![Clause::PiecewiseTwoSided {
        neg_c: CoefRange::NonZero,
        neg_exponents: ExponentSet::points(&[1]),
        pos_c: CoefRange::NonZero,
        pos_exponents: ExponentSet::points(&[1]),
        zero_in_domain: false,
    }]
}

/// All-pattern SR preservers restricted to nonnegative entries.
fn all_sr_nonneg(m: usize, n: usize) -> Vec<Clause> {
    let square = m == n;
    let d = m.min(n);
    if (square && n <= 2) || (!square && d == 1) {
        return vec![Clause::AnyFunction {
            constraint: ValueConstraint::NonNegValues,
        }];
    }
    if (square && n == 3) || (!square && d == 2) {
        return vec![Clause::ScaledPower {
            c: CoefRange::NonNeg,
            exponents: ExponentSet::zero_to_inf_closed(),
        }];
    }
    vec![Clause::ScaledPower {
        c: CoefRange::NonNeg,
        exponents: ExponentSet::points(&[0, 1]),
    }]
}

/// All-pattern SSR preservers restricted to positive entries.
fn all_ssr_positive(m: usize, n: usize) -> Vec<Clause> {
    let square = m == n;
    let d = m.min(n);
    if (m, n) == (2, 2) {
        return vec![Clause::Partial {
            reason: "the strict 2x2 all-pattern case has no complete classification even \
                     for positive entries"
                .into(),
        }];
    }
    if (square && n == 1) || (!square && d == 1) {
        return vec![Clause::AnyFunction {
            constraint: ValueConstraint::PositiveValues,
        }];
    }
    if !square && d == 2 {
        return vec![Clause::ScaledPower {
            c: CoefRange::Positive,
            exponents: ExponentSet::nonzero_reals(),
        }];
    }
    vec![Clause::ScaledPower {
        c: CoefRange::Positive,
        exponents: ExponentSet::points(&[1]),
    }]
}

// ----------------------------------------------------------------------
// Admissible exponents
// ----------------------------------------------------------------------

/// The set of exponents `α` for which the power map (`c·x^α` with admissible
/// `c ≠ 0`, magnitude form on negative inputs) preserves the queried class.
pub fn admissible_exponents(q: &Query) -> Result<ExponentSet, ClassifyError> {
    validate(q)?;
    let d = q.d();
    Ok(match (&q.scope, q.mode) {
        (Scope::FixedPattern { eps }, Mode::Sr) => match d {
            1 | 2 => ExponentSet::zero_to_inf_closed(),
            3 => {
                if base_branch_eq(eps) {
                    ExponentSet::zero_point_and_one_to_inf()
                } else {
                    ExponentSet::unit_closed()
                }
            }
            _ => ExponentSet::points(&[0, 1]),
        },
        (Scope::FixedPattern { eps }, Mode::Ssr) => match d {
            1 => ExponentSet::all_reals(),
            2 => ExponentSet::zero_to_inf_open(),
            3 => {
                if base_branch_eq(eps) {
                    ExponentSet::one_to_inf()
                } else {
                    ExponentSet::unit_half_open()
                }
            }
            _ => ExponentSet::points(&[1]),
        },
        (Scope::AllPatterns, Mode::Sr) => {
            let square = q.m == q.n;
            if (square && q.n <= 3) || (!square && d <= 2) {
                // α = 0 gives the nonzero constant map (0^0 := 1), which
                // preserves SR, so the closed endpoint is included.
                ExponentSet::zero_to_inf_closed()
            } else {
                ExponentSet::points(&[0, 1])
            }
        }
        (Scope::AllPatterns, Mode::Ssr) => match d {
            1 => ExponentSet::all_reals(),
            2 => ExponentSet::nonzero_reals(),
            _ => ExponentSet::points(&[1]),
        },
    })
}

// ----------------------------------------------------------------------
// Membership
// ----------------------------------------------------------------------

/// Canonical description of a function's behavior on one open half-line:
/// either a power form `c·|x|^α`, or something else.
#[derive(Debug, Clone, PartialEq)]
enum HalfForm {
    /// `c·|x|^α` with the stated constants (includes constants via α = 0 and
    /// the zero function via c = 0).
    Power { c: Q, alpha: Q },
}

/// Extracts `(negative half, value at 0 if defined, positive half)` in power
/// form. All `FunctionSpec` kinds are half-line powers, which is what makes
/// exact membership decidable.
fn half_forms(f: &FunctionSpec) -> (HalfForm, Option<Q>, HalfForm) {
    match &f.kind {
        FuncKind::Power { c, alpha } => {
            let at0 = if alpha.is_zero() {
                Some(c.clone())
            } else if alpha.is_positive() {
                Some(Q::zero())
            } else {
                None
            };
            (
                HalfForm::Power {
                    c: c.clone(),
                    alpha: alpha.clone(),
                },
                at0,
                HalfForm::Power {
                    c: c.clone(),
                    alpha: alpha.clone(),
                },
            )
        }
        FuncKind::ScaledSignum { c } => (
            HalfForm::Power {
                c: -c.clone(),
                alpha: Q::zero(),
            },
            Some(Q::zero()),
            HalfForm::Power {
                c: c.clone(),
                alpha: Q::zero(),
            },
        ),
        FuncKind::Constant { c } => (
            HalfForm::Power {
                c: c.clone(),
                alpha: Q::zero(),
            },
            Some(c.clone()),
            HalfForm::Power {
                c: c.clone(),
                alpha: Q::zero(),
            },
        ),
        FuncKind::PiecewiseTwoSided {
            neg_c,
            neg_alpha,
            pos_c,
            pos_alpha,
            at_zero,
        } => (
            HalfForm::Power {
                c: neg_c.clone(),
                alpha: neg_alpha.clone(),
            },
            Some(at_zero.clone()),
            HalfForm::Power {
                c: pos_c.clone(),
                alpha: pos_alpha.clone(),
            },
        ),
    }
}

/// Whether a half-line power form matches `coef ∈ range`, `α ∈ exps`,
/// treating the zero function (`c = 0`) as exponent-free.
fn power_matches(form: &HalfForm, range: CoefRange, exps: &ExponentSet) -> bool {
    let HalfForm::Power { c, alpha } = form;
    if c.is_zero() {
        return range.contains(c);
    }
    range.contains(c) && exps.contains(alpha)
}

/// Sign of a half-line power form as a constant sign over the open half-line
/// (`None` if it is the zero function there — sign 0).
fn half_sign(form: &HalfForm) -> i8 {
    let HalfForm::Power { c, .. } = form;
    if c.is_zero() {
        0
    } else if c.is_positive() {
        1
    } else {
        -1
    }
}

/// Decides membership of `f` in the preserver family for `q`. Exact: every
/// comparison is between rationals. Errors on the open `(2,2)` strict cell.
pub fn is_member(f: &FunctionSpec, q: &Query) -> Result<bool, ClassifyError> {
    let family = classify(q)?;
    if family.has_partial() {
        return Err(ClassifyError::PartialUndecidable(
            "membership in the strict 2x2 all-pattern family cannot be decided".into(),
        ));
    }
    // The function must be usable on the family's domain at all: its declared
    // domain must cover it, and it must be defined at 0 when 0 is included.
    if !domain_covers(f.domain, family.function_domain) {
        return Ok(false);
    }
    let (neg, at0, pos) = half_forms(f);
    let zero_in_domain = matches!(family.function_domain, Dom::NonNeg | Dom::NonPos | Dom::Real);
    if zero_in_domain && at0.is_none() {
        return Ok(false); // undefined at 0 (negative exponent)
    }
    for clause in &family.clauses {
        if clause_admits(clause, &family, &neg, &at0, &pos) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `outer` is usable on `inner`: every point of `inner` lies in `outer`.
fn domain_covers(outer: Dom, inner: Dom) -> bool {
    let covers = |d: Dom| -> (bool, bool, bool) {
        // (negatives, zero, positives)
        match d {
            Dom::NonNeg => (false, true, true),
            Dom::Positive => (false, false, true),
            Dom::NonPos => (true, true, false),
            Dom::Negative => (true, false, false),
            Dom::Real => (true, true, true),
            Dom::RealNonZero => (true, false, true),
        }
    };
    let (on, oz, op) = covers(outer);
    let (inn, iz, ip) = covers(inner);
    (!inn || on) && (!iz || oz) && (!ip || op)
}

fn clause_admits(
    clause: &Clause,
    family: &PreserverFamily,
    neg: &HalfForm,
    at0: &Option<Q>,
    pos: &HalfForm,
) -> bool {
    let dom = family.function_domain;
    let has_neg = matches!(dom, Dom::NonPos | Dom::Negative | Dom::Real | Dom::RealNonZero);
    let has_pos = matches!(dom, Dom::NonNeg | Dom::Positive | Dom::Real | Dom::RealNonZero);
    let has_zero = matches!(dom, Dom::NonNeg | Dom::NonPos | Dom::Real);
    match clause {
        Clause::AnyFunction { constraint } => {
            let z = at0.clone();
            let sn = half_sign(neg);
            let sp = half_sign(pos);
            match constraint {
                ValueConstraint::Unconstrained => true,
                ValueConstraint::NonNegValues => {
                    (!has_neg || sn >= 0)
                        && (!has_pos || sp >= 0)
                        && (!has_zero || z.map_or(false, |v| !v.is_negative()))
                }
                ValueConstraint::NonPosValues => {
                    (!has_neg || sn <= 0)
                        && (!has_pos || sp <= 0)
                        && (!has_zero || z.map_or(false, |v| !v.is_positive()))
                }
                ValueConstraint::PositiveValues => {
                    // Strict positivity of a power form on an open half-line
                    // means a positive coefficient.
                    (!has_neg || sn > 0)
                        && (!has_pos || sp > 0)
                        && (!has_zero || z.map_or(false, |v| v.is_positive()))
                }
                ValueConstraint::NegativeValues => {
                    (!has_neg || sn < 0)
                        && (!has_pos || sp < 0)
                        && (!has_zero || z.map_or(false, |v| v.is_negative()))
                }
                ValueConstraint::NowhereZero => {
                    (!has_neg || sn != 0) && (!has_pos || sp != 0) && !has_zero
                }
                ValueConstraint::HalfLinesStrictlyOneSigned => {
                    (!has_neg || sn != 0) && (!has_pos || sp != 0)
                }
                ValueConstraint::SignDichotomy => {
                    match &z {
                        Some(v) if v.is_zero() => {
                            // Each half-line one-signed (possibly zero).
                            true
                        }
                        Some(_) => {
                            // f(0) ≠ 0: f must be one-signed on all of ℝ.
                            let z_sign: i8 = if z.as_ref().unwrap().is_positive() { 1 } else { -1 };
                            (sn == 0 || sn == z_sign) && (sp == 0 || sp == z_sign)
                        }
                        None => false,
                    }
                }
            }
        }
        Clause::Constant { c } => {
            // f ≡ const on the whole domain.
            let HalfForm::Power { c: cp, alpha: ap } = pos;
            let HalfForm::Power { c: cn, alpha: an } = neg;
            let const_pos = !has_pos || ap.is_zero() || cp.is_zero();
            let const_neg = !has_neg || an.is_zero() || cn.is_zero();
            if !(const_pos && const_neg) {
                return false;
            }
            // Collect the constant value on each present region and require
            // agreement.
            let mut val: Option<Q> = None;
            let mut push = |v: Q| -> bool {
                match &val {
                    None => {
                        val = Some(v);
                        true
                    }
                    Some(w) => *w == v,
                }
            };
            if has_pos {
                let HalfForm::Power { c: cp, .. } = pos;
                if !push(cp.clone()) {
                    return false;
                }
            }
            if has_neg {
                let HalfForm::Power { c: cn, .. } = neg;
                if !push(cn.clone()) {
                    return false;
                }
            }
            if has_zero {
                match at0 {
                    Some(v) => {
                        if !push(v.clone()) {
                            return false;
                        }
                    }
                    None => return false,
                }
            }
            val.map_or(false, |v| c.contains(&v))
        }
        Clause::ScaledSignum { c } => {
            // f(x) = s·sgn(x) extensionally on the domain.
            let HalfForm::Power { c: cp, alpha: ap } = pos;
            let HalfForm::Power { c: cn, alpha: an } = neg;
            // Determine the candidate s from whichever half is present.
            let mut s: Option<Q> = None;
            if has_pos {
                if !(ap.is_zero() || cp.is_zero()) {
                    return false;
                }
                s = Some(cp.clone());
            }
            if has_neg {
                if !(an.is_zero() || cn.is_zero()) {
                    return false;
                }
                let cand = -cn.clone();
                match &s {
                    None => s = Some(cand),
                    Some(v) => {
                        if *v != cand {
                            return false;
                        }
                    }
                }
            }
            if has_zero && at0.as_ref().map_or(true, |v| !v.is_zero()) {
                return false;
            }
            s.map_or(false, |v| c.contains(&v))
        }
        Clause::ScaledPower { c, exponents } => {
            // One power form across the domain: on one-signed domains only
            // the present half matters; on two-sided domains both halves must
            // be the same magnitude power (this clause never appears for
            // two-sided domains in the tables, but stay general).
            let mut ok = true;
            if has_pos {
                ok &= power_matches(pos, *c, exponents);
            }
            if has_neg {
                ok &= power_matches(neg, *c, exponents);
            }
            if has_pos && has_neg {
                let HalfForm::Power { c: cp, .. } = pos;
                let HalfForm::Power { c: cn, .. } = neg;
                ok &= cp == cn;
            }
            if !ok {
                return false;
            }
            if has_zero {
                // Value at 0 must equal c·0^α for some admissible α matching
                // the half-line form: α > 0 gives 0; α = 0 gives c.
                let Some(z) = at0 else { return false };
                let HalfForm::Power { c: cc, alpha } = if has_pos { pos } else { neg };
                let expected = if cc.is_zero() {
                    Q::zero()
                } else if alpha.is_zero() {
                    cc.clone()
                } else if alpha.is_positive() {
                    Q::zero()
                } else {
                    return false;
                };
                if *z != expected {
                    return false;
                }
            }
            true
        }
        Clause::PiecewiseTwoSided {
            neg_c,
            neg_exponents,
            pos_c,
            pos_exponents,
            zero_in_domain,
        } => {
            if has_pos && !power_matches(pos, *pos_c, pos_exponents) {
                return false;
            }
            if has_neg && !power_matches(neg, *neg_c, neg_exponents) {
                return false;
            }
            if *zero_in_domain {
                // Value at zero forced to 0.
                match at0 {
                    Some(v) if v.is_zero() => {}
                    _ => return false,
                }
            }
            true
        }
        Clause::Partial { .. } => false,
    }
}

/// Whether the scaled signum map preserves the queried class (for any
/// admissible nonzero scaling). Derived from the tables: the strict mode
/// flattens signum images (their order-2 minors vanish), and the non-strict
/// branches admit signum exactly where a signum clause appears.
pub fn signum_preserves(q: &Query) -> Result<bool, ClassifyError> {
    validate(q)?;
    let d = q.d();
    Ok(match (&q.scope, q.mode) {
        (_, Mode::Ssr) => d == 1,
        (Scope::FixedPattern { eps }, Mode::Sr) => d <= 2 || !base_branch_eq(eps),
        (Scope::AllPatterns, Mode::Sr) => {
            let square = q.m == q.n;
            (square && q.n <= 3) || (!square && d <= 2)
        }
    })
}

// ----------------------------------------------------------------------
// Empirical testing
// ----------------------------------------------------------------------

/// Result of sampling-based preserver testing.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalReport {
    pub trials: usize,
    pub violations: usize,
    /// Up to 8 recorded counterexamples: (trial index, source entries,
    /// violating minor of the image).
    pub examples: Vec<EmpiricalViolation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalViolation {
    pub trial: u64,
    pub source_entries: Vec<String>,
    pub witness: crate::matcore::MinorWitness,
}

/// Applies `f` entrywise to `trials` generated matrices of the queried class
/// and certifies each image. Randomness is splittable: trial `t` uses stream
/// `t` of the seeded generator, so runs are reproducible and order
/// independent.
pub fn test_preserver_empirically(
    f: &FunctionSpec,
    q: &Query,
    trials: u64,
    seed: u64,
    ctx: &crate::interval::CertCtx,
) -> Result<EmpiricalReport, ClassifyError> {
    validate(q)?;
    let mut violations = 0usize;
    let mut examples = Vec::new();
    for trial in 0..trials {
        let (source, eps) = crate::genmat::query_source(q, seed, trial)
            .map_err(|e| ClassifyError::InvalidQuery(format!("generator failure: {e}")))?;
        let image = match f.apply_entrywise(&source) {
            Ok(img) => img,
            Err(_) => {
                // An undefined value on a legal source is itself a violation
                // of preservation (the map does not act on the class).
                violations += 1;
                if examples.len() < 8 {
                    examples.push(EmpiricalViolation {
                        trial,
                        source_entries: source.entry_strings(),
                        witness: crate::matcore::MinorWitness {
                            k: 0,
                            rows: vec![],
                            cols: vec![],
                            verdict: crate::value::SignVerdict::Undetermined { width: 0.0 },
                            value: Some("entrywise image undefined".into()),
                        },
                    });
                }
                continue;
            }
        };
        let bad = match (&q.scope, q.mode) {
            (Scope::FixedPattern { .. }, Mode::Sr) => {
                match image.check_sr_with(&eps, ctx) {
                    Ok(crate::matcore::SrOutcome::Holds) => None,
                    Ok(out) => out.witness().cloned(),
                    Err(_) => None,
                }
            }
            (Scope::FixedPattern { .. }, Mode::Ssr) => {
                match image.check_ssr_with(&eps, ctx) {
                    Ok(crate::matcore::SrOutcome::Holds) => None,
                    Ok(out) => out.witness().cloned(),
                    Err(_) => None,
                }
            }
            (Scope::AllPatterns, Mode::Sr) => match image.compatible_patterns(ctx) {
                Ok(pc) if pc.is_sr_any() => None,
                Ok(_) => Some(crate::matcore::MinorWitness {
                    k: 0,
                    rows: vec![],
                    cols: vec![],
                    verdict: crate::value::SignVerdict::Undetermined { width: 0.0 },
                    value: Some("no sign pattern is compatible with the image".into()),
                }),
                Err(crate::matcore::MatError::UndeterminedSign(w)) => Some(w),
                Err(_) => None,
            },
            (Scope::AllPatterns, Mode::Ssr) => {
                let rep = image.detect_ssr(ctx);
                if rep.is_ssr {
                    None
                } else {
                    rep.violating_minor
                }
            }
        };
        if let Some(w) = bad {
            violations += 1;
            if examples.len() < 8 {
                examples.push(EmpiricalViolation {
                    trial,
                    source_entries: source.entry_strings(),
                    witness: w,
                });
            }
        }
    }
    Ok(EmpiricalReport {
        trials: trials as usize,
        violations,
        examples,
    })
}
