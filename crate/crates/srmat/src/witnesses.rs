//! Constructive counterexamples: parametric witness families and the
//! violation search behind the exponent tables in [`crate::classify`].
//!
//! Every exponent outside an admissible set is refuted by an explicit
//! matrix, never by an abstract argument alone. Witness sources come in
//! three kinds:
//!
//! * **Frozen matrices** — the singular totally nonnegative 3×3
//!   [`singular_matrix`] whose entrywise powers flip the determinant sign,
//!   its strictly sign-regular perturbation `P(±η)` ([`perturbed_singular`]),
//!   the signum counterexample [`signum_3x4_matrix`], and two 4×4 matrices
//!   with a pair of overlapping 3×3 blocks whose powered determinants take
//!   opposite signs.
//! * **Linear families** `B + t·K` with `B` a 0/1 matrix of rank at most
//!   one (all-ones rows, plus optional zero rows). For such a family every
//!   `k×k` minor equals `t^{k−1}·(a + b·t)` *exactly*
//!   ([`LinFamily::minor_line`]), so "(strictly) sign-regular for **every**
//!   `t ∈ (0, T]`" reduces to finitely many rational inequalities
//!   ([`LinFamily::certify_throughout`]) — no floating point involved.
//! * **Bordered matrices** — strictly sign-regular 4×4 completions of
//!   `P(±η)`, one for each sign pattern `(+, +, ε₃, ε₄)`, used where a
//!   strict source of full size is required.
//!
//! A minor of an entrywise power image at a rational parameter is an
//! exponential sum in the exponent ([`ExpSum::from_hadamard_det`]), so every
//! reported sign carries an adaptive-precision interval certificate, and
//! equality-type failures are reported as sign-change brackets of width at
//! most `ctx.tol` whose endpoint signs are certified.
//!
//! [`find_violation`] maps an inadmissible exponent and a query to a
//! [`WitnessReport`]; [`verify_report`] re-derives every stored verdict from
//! the stored data; [`taylor_leading_check`] compares the numerically
//! extracted leading Taylor coefficient of a family's powered minor against
//! its closed form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::classify::{self, ClassifyError, EntryDomain, Mode, Query, Scope};
use crate::expsum::{ExpSum, ExpSumError};
use crate::funcspec::{Dom, FuncError, FuncKind, FunctionSpec};
use crate::genmat::{self, GenError, GenSpec, Transport};
use crate::interval::CertCtx;
use crate::matcore::{MatError, Matrix, SignPattern};
use crate::rat::{format_rational, parse_rational, q, qi, Q};
use crate::value::{SignVerdict, Value};

/// Deterministic seed for the generator-backed witness routes.
const WITNESS_SEED: u64 = 20_260_822;

/// Shapes up to this side length are certified minor-by-minor; larger padded
/// sources certify their active block exactly and record the padding lemma.
const SMALL_EXACT_SIDE: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum WitnessError {
    #[error("exponent {0} is admissible for this query; no violation exists")]
    AdmissibleAlpha(String),
    #[error("unknown witness family {0:?}")]
    UnknownFamily(String),
    #[error("parameter {name} = {value} outside the validity range {range}")]
    OutOfRange {
        name: String,
        value: String,
        range: String,
    },
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("unsupported query: {0}")]
    UnsupportedQuery(String),
    #[error("family {0} has no parametric leading term to check")]
    NoLeadingTerm(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Exp(#[from] ExpSumError),
}

// ---------------------------------------------------------------------------
// Exact rational linear algebra on raw Vec<Vec<Q>> (orders ≤ 5).
// ---------------------------------------------------------------------------

fn det_q(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return Q::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Q::zero();
    for (j, piv) in m[0].iter().enumerate() {
        if piv.is_zero() {
            continue;
        }
        let sub: Vec<Vec<Q>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = piv * &det_q(&sub);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn signed(x: &Q, s: i8) -> Q {
    if s >= 0 {
        x.clone()
    } else {
        -x.clone()
    }
}

// ---------------------------------------------------------------------------
// Linear families B + t·K.
// ---------------------------------------------------------------------------

/// A one-parameter family `A(t) = B + t·K`, where `B` has every row equal to
/// the all-ones row except the listed `zero_rows`, which are identically
/// zero. `B` has rank at most one, which is what makes every minor of
/// `A(t)` an *exact* binomial in `t` (see [`LinFamily::minor_line`]).
#[derive(Debug, Clone)]
pub struct LinFamily {
    m: usize,
    n: usize,
    zero_rows: Vec<usize>,
    k: Vec<Vec<Q>>,
}

impl LinFamily {
    fn new(k: Vec<Vec<Q>>, zero_rows: Vec<usize>) -> LinFamily {
        let m = k.len();
        let n = k[0].len();
        assert!(k.iter().all(|r| r.len() == n));
        LinFamily { m, n, zero_rows, k }
    }

    fn base_entry(&self, i: usize) -> Q {
        if self.zero_rows.contains(&i) {
            Q::zero()
        } else {
            Q::one()
        }
    }

    /// The member `B + t·K` as an exact rational matrix.
    pub fn at(&self, t: &Q) -> Matrix {
        Matrix::from_fn(self.m, self.n, |i, j| {
            Value::from_q(self.base_entry(i) + t * &self.k[i][j])
        })
    }

    /// Exact coefficients `(a, b)` with
    /// `det A(t)[rows, cols] = t^{k−1}·(a + b·t)` for **all** `t`.
    ///
    /// By multilinearity in the columns, expand each column of
    /// `B[rows, cols] + t·K[rows, cols]` into its `B`-part and `t·K`-part.
    /// Any term picking two or more `B`-columns vanishes: restricted to
    /// `rows`, all `B`-columns are the *same* 0/1 vector. What survives is
    /// the all-`K` term `t^k·det K[rows, cols]` and the `k` single-`B`
    /// terms, each `t^{k−1}` times `K[rows, cols]` with one column replaced
    /// by that 0/1 vector. Hence `b = det K[rows, cols]` and `a` is the sum
    /// of the column-replaced determinants.
    pub fn minor_line(&self, rows: &[usize], cols: &[usize]) -> (Q, Q) {
        let kb: Vec<Vec<Q>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.k[i][j].clone()).collect())
            .collect();
        let b = det_q(&kb);
        let mut a = Q::zero();
        for cpos in 0..cols.len() {
            let rep: Vec<Vec<Q>> = rows
                .iter()
                .map(|&i| {
                    cols.iter()
                        .enumerate()
                        .map(|(cj, &j)| {
                            if cj == cpos {
                                self.base_entry(i)
                            } else {
                                self.k[i][j].clone()
                            }
                        })
                        .collect()
                })
                .collect();
            a += det_q(&rep);
        }
        (a, b)
    }

    /// Exact certificate that `A(t)` is sign-regular (strictly, if `strict`)
    /// with pattern `eps` for **every** `t ∈ (0, t_hi]`.
    ///
    /// Each signed minor is `ε_k·t^{k−1}·(a + b·t)` with `t^{k−1} > 0`, and
    /// the affine factor satisfies, for `t ∈ (0, T]`,
    /// `ε_k(a + bt) = ε_k·a·(1 − t/T) + ε_k·(a + bT)·(t/T)`;
    /// so `ε_k·a ≥ 0` together with `ε_k·(a + bT) > 0` (`≥ 0` in the weak
    /// case) bounds it below by a positive (nonnegative) quantity on the
    /// whole half-open interval. Both endpoint conditions are exact rational
    /// comparisons.
    pub fn certify_throughout(&self, eps: &SignPattern, t_hi: &Q, strict: bool) -> bool {
        let d = self.m.min(self.n);
        for k in 1..=d {
            let s = eps.eps(k);
            for rows in subsets(self.m, k) {
                for cols in subsets(self.n, k) {
                    let (a, b) = self.minor_line(&rows, &cols);
                    let end = &a + &(&b * t_hi);
                    if signed(&a, s).is_negative() {
                        return false;
                    }
                    let se = signed(&end, s);
                    if strict {
                        if !se.is_positive() {
                            return false;
                        }
                    } else if se.is_negative() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn rows_q(rows: &[&[&str]]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_rational(s).expect("family constant"))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Frozen witness matrices.
// ---------------------------------------------------------------------------

/// The singular totally nonnegative 3×3 source: every minor sign is in
/// `{0, +}` (weakly sign-regular for `(+,+,+)` and, since the determinant
/// vanishes, equally for `(+,+,−)`), while the determinant of the entrywise
/// `α`-th power is negative for `0 < α < 1` and positive for `α > 1`.
pub fn singular_matrix() -> Matrix {
    Matrix::from_int_rows(&[&[3, 1, 2], &[1, 1, 4], &[1, 2, 9]])
}

/// `P(η)`: the singular source with its corner bumped to `9 + η`. Strictly
/// sign-regular with pattern `(+,+,+)` for `η > 0` and `(+,+,−)` for
/// `−1 < η < 0` (every minor through the corner is affine in `η` with
/// positive slope, and the determinant equals `2η` exactly).
pub fn perturbed_singular(eta: &Q) -> Matrix {
    let mut a = singular_matrix();
    a.set(2, 2, Value::from_q(qi(9) + eta));
    a
}

/// 3×3 signum counterexample for one fixed pattern: a sign-regular
/// `(+,+,+)` source (weak — it carries two zero entries) whose signum image
/// has determinant `−1`, leaving the class.
pub fn signum_3x3_matrix() -> Matrix {
    Matrix::from_int_rows(&[&[3, 1, 0], &[1, 1, 1], &[0, 2, 4]])
}

/// 3×4 signum counterexample for *all* patterns: a sign-regular source
/// whose signum image contains two contiguous 3×3 minors of strictly
/// opposite signs, so the image is sign-regular for no pattern at all.
pub fn signum_3x4_matrix() -> Matrix {
    Matrix::from_int_rows(&[&[6, 1, 0, 0], &[1, 1, 1, 0], &[0, 4, 5, 1]])
}

/// 4×4 source whose powered image contains the singular block (columns
/// `{0,1,2}`, powered determinant negative on `0 < α < 1`) next to a block
/// with powered determinant positive there (columns `{1,2,3}`).
pub fn allsign_sr_4x4() -> Matrix {
    Matrix::from_int_rows(&[&[3, 1, 2, 1], &[1, 1, 4, 3], &[1, 2, 9, 8], &[0, 0, 0, 0]])
}

fn fam_sr_eq_a1() -> LinFamily {
    LinFamily::new(
        rows_q(&[
            &["0", "0", "0", "0"],
            &["0", "2", "3", "4"],
            &["0", "4", "6", "8"],
            &["0", "5", "8", "11"],
        ]),
        vec![],
    )
}

fn fam_sr_eq_a2() -> LinFamily {
    LinFamily::new(
        rows_q(&[
            &["0", "0", "0", "0"],
            &["0", "3", "5", "7"],
            &["0", "9", "17", "27"],
            &["0", "11", "23", "119/3"],
        ]),
        vec![],
    )
}

fn fam_sr_neq_a3() -> LinFamily {
    LinFamily::new(
        rows_q(&[
            &["0", "0", "0", "0"],
            &["0", "2", "3", "4"],
            &["0", "3", "9/2", "6"],
            &["0", "5", "15/2", "10"],
        ]),
        vec![],
    )
}

fn fam_sr_neq_a4() -> LinFamily {
    LinFamily::new(
        rows_q(&[
            &["0", "0", "0", "0"],
            &["0", "2", "3", "4"],
            &["0", "4", "17/3", "22/3"],
            &["0", "5", "7", "9"],
        ]),
        vec![],
    )
}

fn fam_allsign_sr_t() -> LinFamily {
    LinFamily::new(
        rows_q(&[
            &["0", "0", "0", "0"],
            &["-1/5", "0", "2", "3"],
            &["-1/2", "0", "5", "7"],
            &["0", "0", "0", "0"],
        ]),
        vec![3],
    )
}

fn fam_allsign_ssr_a1() -> LinFamily {
    LinFamily::new(
        rows_q(&[&["0", "0", "0"], &["0", "1", "2"], &["0", "3", "7"]]),
        vec![],
    )
}

fn fam_allsign_ssr_a2(delta: &Q) -> LinFamily {
    let mut k = rows_q(&[&["0", "0", "0"], &["0", "1/3", "2/3"], &["0", "1", "2"]]);
    k[2][2] += delta;
    LinFamily::new(k, vec![])
}

fn fam_allsign_ssr_a3(delta: &Q) -> LinFamily {
    let mut k = rows_q(&[&["0", "0", "0"], &["0", "2", "3"], &["0", "6", "9"]]);
    k[2][2] -= delta;
    LinFamily::new(k, vec![])
}

/// `K₅`: the leading `m×n` truncation (min side ≥ 3, sides ≤ 5) of a fixed
/// integer kernel for which `J + t·K₅` is totally positive on `(0, 1]` and
/// whose leading 3×3 block is exactly the kernel of [`fam_allsign_ssr_a1`].
fn fam_allsign_ssr_deep(m: usize, n: usize) -> LinFamily {
    let full = rows_q(&[
        &["0", "0", "0", "0", "0"],
        &["0", "1", "2", "3", "4"],
        &["0", "3", "7", "12", "18"],
        &["0", "4", "10", "20", "35"],
        &["0", "5", "15", "45", "104"],
    ]);
    let k: Vec<Vec<Q>> = full[..m].iter().map(|r| r[..n].to_vec()).collect();
    LinFamily::new(k, vec![])
}

/// Strictly sign-regular 4×4 completions of `P(±η)`.
///
/// `eq` selects the block (`true` → `P(+η)`, pattern prefix `(+,+,+)`;
/// `false` → `P(−η)`, prefix `(+,+,−)`), and `eps4` the determinant sign of
/// the completion. For `eps4 = −ε₃` the block sits at columns `{0,1,2}`
/// with an appended column and row; for `eps4 = +ε₃`-complementing
/// placements the block sits at columns `{1,2,3}` with a prepended column.
/// All borders are certified minor-by-minor at instantiation.
fn bordered_ssr(eq: bool, eps4: i8, eta: &Q) -> (Matrix, SignPattern, Vec<usize>) {
    let eta_signed = if eq { eta.clone() } else { -eta.clone() };
    let p = perturbed_singular(&eta_signed);
    let pq = |s: &str| parse_rational(s).expect("border constant");
    let (matrix, block_cols) = match (eq, eps4) {
        // det +1 completions: block at columns {1,2,3}.
        (true, 1) => {
            let x = [pq("2"), pq("1/4"), pq("1/8")];
            let row3 = [pq("1/128"), pq("1/8"), pq("1/2"), pq("27/8")];
            (shift_border(&p, &x, &row3), vec![1, 2, 3])
        }
        (false, 1) => {
            let x = [pq("7/8"), pq("1/4"), pq("1/8")];
            let row3 = [pq("1/32"), pq("3/2"), pq("4"), pq("73/4")];
            (shift_border(&p, &x, &row3), vec![1, 2, 3])
        }
        // det −1 completions: block at columns {0,1,2}.
        (true, -1) => {
            let col = [pq("1/8"), pq("1/2"), pq("35/16")];
            let row = [pq("1/8"), pq("1/2"), pq("27/8")];
            (tl_border(&p, &col, &row, &pq("369/128")), vec![0, 1, 2])
        }
        (false, -1) => {
            let col = [pq("1/8"), pq("1/2"), pq("37/32")];
            let row = [pq("1/8"), pq("1/2"), pq("37/16")];
            (tl_border(&p, &col, &row, &pq("1373/4608")), vec![0, 1, 2])
        }
        _ => unreachable!("eps4 is ±1"),
    };
    let e3 = if eq { 1 } else { -1 };
    (matrix, SignPattern(vec![1, 1, e3, eps4]), block_cols)
}

fn tl_border(block: &Matrix, col: &[Q; 3], row: &[Q; 3], s: &Q) -> Matrix {
    Matrix::from_fn(4, 4, |i, j| match (i, j) {
        (3, 3) => Value::from_q(s.clone()),
        (3, j) => Value::from_q(row[j].clone()),
        (i, 3) => Value::from_q(col[i].clone()),
        (i, j) => block.at(i, j).clone(),
    })
}

fn shift_border(block: &Matrix, x: &[Q; 3], row3: &[Q; 4]) -> Matrix {
    Matrix::from_fn(4, 4, |i, j| match (i, j) {
        (3, j) => Value::from_q(row3[j].clone()),
        (i, 0) => Value::from_q(x[i].clone()),
        (i, j) => block.at(i, j - 1).clone(),
    })
}

// ---------------------------------------------------------------------------
// Family identifiers and instantiation.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessFamilyId {
    Singular3x3,
    PerturbedSingular,
    SrEqA1,
    SrEqA2,
    SrNeqA3,
    SrNeqA4,
    Signum3x3,
    Signum3x4,
    AllsignSr,
    AllsignSrT,
    AllsignSsrA1,
    AllsignSsrA2,
    AllsignSsrA3,
    SsrBorderEqPlus,
    SsrBorderEqMinus,
    SsrBorderNeqPlus,
    SsrBorderNeqMinus,
    AllsignSsrDeep,
}

impl WitnessFamilyId {
    pub fn id(&self) -> &'static str {
        match self {
            WitnessFamilyId::Singular3x3 => "singular-3x3",
            WitnessFamilyId::PerturbedSingular => "perturbed-singular",
            WitnessFamilyId::SrEqA1 => "sr-eq-a1",
            WitnessFamilyId::SrEqA2 => "sr-eq-a2",
            WitnessFamilyId::SrNeqA3 => "sr-neq-a3",
            WitnessFamilyId::SrNeqA4 => "sr-neq-a4",
            WitnessFamilyId::Signum3x3 => "signum-3x3",
            WitnessFamilyId::Signum3x4 => "signum-3x4",
            WitnessFamilyId::AllsignSr => "allsign-sr",
            WitnessFamilyId::AllsignSrT => "allsign-sr-t",
            WitnessFamilyId::AllsignSsrA1 => "allsign-ssr-a1",
            WitnessFamilyId::AllsignSsrA2 => "allsign-ssr-a2",
            WitnessFamilyId::AllsignSsrA3 => "allsign-ssr-a3",
            WitnessFamilyId::SsrBorderEqPlus => "ssr-border-eq-plus",
            WitnessFamilyId::SsrBorderEqMinus => "ssr-border-eq-minus",
            WitnessFamilyId::SsrBorderNeqPlus => "ssr-border-neq-plus",
            WitnessFamilyId::SsrBorderNeqMinus => "ssr-border-neq-minus",
            WitnessFamilyId::AllsignSsrDeep => "allsign-ssr-deep",
        }
    }

    pub fn all() -> &'static [WitnessFamilyId] {
        use WitnessFamilyId::*;
        &[
            Singular3x3,
            PerturbedSingular,
            SrEqA1,
            SrEqA2,
            SrNeqA3,
            SrNeqA4,
            Signum3x3,
            Signum3x4,
            AllsignSr,
            AllsignSrT,
            AllsignSsrA1,
            AllsignSsrA2,
            AllsignSsrA3,
            SsrBorderEqPlus,
            SsrBorderEqMinus,
            SsrBorderNeqPlus,
            SsrBorderNeqMinus,
            AllsignSsrDeep,
        ]
    }
}

impl fmt::Display for WitnessFamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for WitnessFamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl FromStr for WitnessFamilyId {
    type Err = WitnessError;
    fn from_str(s: &str) -> Result<WitnessFamilyId, WitnessError> {
        WitnessFamilyId::all()
            .iter()
            .copied()
            .find(|f| f.id() == s)
            .ok_or_else(|| WitnessError::UnknownFamily(s.to_string()))
    }
}

/// Optional parameters for [`instantiate`] and [`canonical_report`]; unset
/// fields take family defaults.
#[derive(Debug, Clone, Default)]
pub struct FamilyParams {
    pub t: Option<Q>,
    pub delta: Option<Q>,
    pub eta: Option<Q>,
    pub alpha: Option<Q>,
    pub shape: Option<(usize, usize)>,
}

/// A family member together with its certified pattern.
#[derive(Debug, Clone)]
pub struct WitnessInstance {
    pub family: WitnessFamilyId,
    pub matrix: Matrix,
    pub pattern: SignPattern,
    /// `true` when the instance is certified strictly sign-regular.
    pub strict: bool,
    pub params: BTreeMap<String, Q>,
}

fn check_range(ok: bool, name: &str, value: &Q, range: &str) -> Result<(), WitnessError> {
    if ok {
        Ok(())
    } else {
        Err(WitnessError::OutOfRange {
            name: name.to_string(),
            value: format_rational(value),
            range: range.to_string(),
        })
    }
}

/// Builds one member of a witness family and certifies its pattern exactly
/// (checked, never assumed). Defaults: `t = 1/8`, `δ = 1/2`, `η = 1/64`,
/// deep shape `5×5`.
pub fn instantiate(
    id: WitnessFamilyId,
    params: &FamilyParams,
    ctx: &CertCtx,
) -> Result<WitnessInstance, WitnessError> {
    let t = params.t.clone().unwrap_or_else(|| q(1, 8));
    let delta = params.delta.clone().unwrap_or_else(|| q(1, 2));
    let eta = params.eta.clone().unwrap_or_else(|| q(1, 64));
    let mut used: BTreeMap<String, Q> = BTreeMap::new();
    let (matrix, pattern, strict) = match id {
        WitnessFamilyId::Singular3x3 => (singular_matrix(), SignPattern(vec![1, 1, 1]), false),
        WitnessFamilyId::PerturbedSingular => {
            check_range(
                !eta.is_zero() && eta.abs() < Q::one(),
                "eta",
                &eta,
                "0 < |eta| < 1",
            )?;
            used.insert("eta".into(), eta.clone());
            let e3 = if eta.is_positive() { 1 } else { -1 };
            (perturbed_singular(&eta), SignPattern(vec![1, 1, e3]), true)
        }
        WitnessFamilyId::SrEqA1 => {
            check_range(t.is_positive(), "t", &t, "t > 0")?;
            used.insert("t".into(), t.clone());
            (fam_sr_eq_a1().at(&t), SignPattern(vec![1, 1, 1, 1]), false)
        }
        WitnessFamilyId::SrEqA2 => {
            check_range(t.is_positive(), "t", &t, "t > 0")?;
            used.insert("t".into(), t.clone());
            (fam_sr_eq_a2().at(&t), SignPattern(vec![1, 1, 1, -1]), false)
        }
        WitnessFamilyId::SrNeqA3 => {
            check_range(t.is_positive(), "t", &t, "t > 0")?;
            used.insert("t".into(), t.clone());
            (fam_sr_neq_a3().at(&t), SignPattern(vec![1, 1, -1, 1]), false)
        }
        WitnessFamilyId::SrNeqA4 => {
            check_range(t.is_positive() && t <= Q::one(), "t", &t, "0 < t <= 1")?;
            used.insert("t".into(), t.clone());
            (
                fam_sr_neq_a4().at(&t),
                SignPattern(vec![1, 1, -1, -1]),
                false,
            )
        }
        WitnessFamilyId::Signum3x3 => (signum_3x3_matrix(), SignPattern(vec![1, 1, 1]), false),
        WitnessFamilyId::Signum3x4 => (signum_3x4_matrix(), SignPattern(vec![1, 1, 1]), false),
        WitnessFamilyId::AllsignSr => (allsign_sr_4x4(), SignPattern(vec![1, 1, 1, 1]), false),
        WitnessFamilyId::AllsignSrT => {
            check_range(t.is_positive() && t < Q::one(), "t", &t, "0 < t < 1")?;
            used.insert("t".into(), t.clone());
            (
                fam_allsign_sr_t().at(&t),
                SignPattern(vec![1, 1, -1, 1]),
                false,
            )
        }
        WitnessFamilyId::AllsignSsrA1 => {
            check_range(t.is_positive(), "t", &t, "t > 0")?;
            used.insert("t".into(), t.clone());
            (fam_allsign_ssr_a1().at(&t), SignPattern(vec![1, 1, 1]), true)
        }
        WitnessFamilyId::AllsignSsrA2 => {
            check_range(t.is_positive(), "t", &t, "t > 0")?;
            check_range(
                delta.is_positive() && delta <= Q::one(),
                "delta",
                &delta,
                "0 < delta <= 1",
            )?;
            used.insert("t".into(), t.clone());
            used.insert("delta".into(), delta.clone());
            (
                fam_allsign_ssr_a2(&delta).at(&t),
                SignPattern(vec![1, 1, 1]),
                true,
            )
        }
        WitnessFamilyId::AllsignSsrA3 => {
            check_range(
                delta.is_positive() && delta <= Q::one(),
                "delta",
                &delta,
                "0 < delta <= 1",
            )?;
            let t_max = (qi(2) - &delta) / (qi(2) * &delta);
            check_range(
                t.is_positive() && t < t_max,
                "t",
                &t,
                "0 < t < (2 - delta)/(2 delta)",
            )?;
            used.insert("t".into(), t.clone());
            used.insert("delta".into(), delta.clone());
            (
                fam_allsign_ssr_a3(&delta).at(&t),
                SignPattern(vec![1, 1, -1]),
                true,
            )
        }
        WitnessFamilyId::SsrBorderEqPlus
        | WitnessFamilyId::SsrBorderEqMinus
        | WitnessFamilyId::SsrBorderNeqPlus
        | WitnessFamilyId::SsrBorderNeqMinus => {
            check_range(
                eta.is_positive() && eta <= q(1, 16),
                "eta",
                &eta,
                "0 < eta <= 1/16",
            )?;
            used.insert("eta".into(), eta.clone());
            let (eq, e4) = match id {
                WitnessFamilyId::SsrBorderEqPlus => (true, 1),
                WitnessFamilyId::SsrBorderEqMinus => (true, -1),
                WitnessFamilyId::SsrBorderNeqPlus => (false, 1),
                _ => (false, -1),
            };
            let (m, p, _) = bordered_ssr(eq, e4, &eta);
            (m, p, true)
        }
        WitnessFamilyId::AllsignSsrDeep => {
            let (m, n) = params.shape.unwrap_or((5, 5));
            if !(3..=5).contains(&m.min(n)) || m.max(n) > 5 {
                return Err(WitnessError::UnsupportedQuery(format!(
                    "deep family supports shapes with 3 <= min side and sides <= 5, got {m}x{n}"
                )));
            }
            check_range(t.is_positive() && t <= Q::one(), "t", &t, "0 < t <= 1")?;
            used.insert("t".into(), t.clone());
            (
                fam_allsign_ssr_deep(m, n).at(&t),
                SignPattern::all_plus(m.min(n)),
                true,
            )
        }
    };
    let ok = if strict {
        matrix.is_ssr_with(&pattern, ctx)
    } else {
        matrix.is_sr_with(&pattern, ctx)
    };
    if !ok {
        return Err(WitnessError::CertificationFailed(format!(
            "family {id} member failed its {} certification for pattern {pattern}",
            if strict { "strict" } else { "weak" },
        )));
    }
    Ok(WitnessInstance {
        family: id,
        matrix,
        pattern,
        strict,
        params: used,
    })
}

// ---------------------------------------------------------------------------
// Report types.
// ---------------------------------------------------------------------------

/// Serializable exact-rational matrix payload.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixData {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl MatrixData {
    pub fn from_matrix(a: &Matrix) -> MatrixData {
        MatrixData {
            rows: a.rows(),
            cols: a.cols(),
            entries: a.entry_strings(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix, WitnessError> {
        let mut data = Vec::with_capacity(self.entries.len());
        for s in &self.entries {
            data.push(parse_rational(s).map_err(|e| {
                WitnessError::CertificationFailed(format!("stored entry {s:?} not rational: {e}"))
            })?);
        }
        Matrix::from_rationals(self.rows, self.cols, data).map_err(WitnessError::Mat)
    }
}

/// The specific claim a witness violates, with certified observations.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ViolationClaim {
    /// A minor of the image has the sign opposite to the one the class
    /// demands.
    MinorSign {
        k: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        required_sign: i8,
        certified_sign: i8,
    },
    /// A minor of the image vanishes exactly where strictness demands a
    /// nonzero sign.
    MinorZero {
        k: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        required_sign: i8,
    },
    /// The map is undefined on an entry of the source.
    UndefinedEntry {
        row: usize,
        col: usize,
        entry: String,
        reason: String,
    },
    /// Two equal-sized minors of the image carry certified opposite strict
    /// signs, so the image is sign-regular for no pattern.
    OppositeMinors {
        k: usize,
        first_rows: Vec<usize>,
        first_cols: Vec<usize>,
        first_sign: i8,
        second_rows: Vec<usize>,
        second_cols: Vec<usize>,
        second_sign: i8,
    },
    /// Along a one-parameter family of certified-strict sources, a minor of
    /// the image changes sign inside `[lo, hi]` (width ≤ the context
    /// tolerance), so it vanishes for some parameter in between.
    SignChangeBracket {
        param: String,
        lo: String,
        hi: String,
        sign_lo: i8,
        sign_hi: i8,
        width: f64,
        k: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
    },
}

/// A fully constructive counterexample: source, certified pattern, map,
/// violated claim, and the certification transcript.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<WitnessFamilyId>,
    pub construction: String,
    pub params: BTreeMap<String, String>,
    pub source: MatrixData,
    pub source_pattern: SignPattern,
    /// `"ssr"` when the source is certified strictly; `"sr"` when the report
    /// refutes the closed class (directly, or as a closure bridge for a
    /// strict query).
    pub source_mode: String,
    pub function: FunctionSpec,
    pub violation: ViolationClaim,
    pub transcript: Vec<String>,
}

// ---------------------------------------------------------------------------
// Certified image-minor signs.
// ---------------------------------------------------------------------------

fn verdict_to_i8(v: &SignVerdict, what: &str) -> Result<i8, WitnessError> {
    v.as_i8().ok_or_else(|| {
        WitnessError::BudgetExhausted(format!("sign of {what} undetermined at the precision cap"))
    })
}

/// Certified sign of `det f[A][rows, cols]` for a power map `f = c·|x|^α`
/// (sign convention of [`FuncKind::Power`]) on a rational source with
/// nonzero entries in the block.
///
/// `f[A] = c·|A|^{∘α}` entrywise on a one-signed block, so the minor equals
/// `c^k` times the corresponding minor of `|A|^{∘α}`, an exponential sum in
/// `α` with positive rational bases — certified by adaptive interval
/// evaluation with exact-cancellation detection.
fn image_minor_sign(
    source: &Matrix,
    c: &Q,
    alpha: &Q,
    rows: &[usize],
    cols: &[usize],
    ctx: &CertCtx,
) -> Result<(i8, String), WitnessError> {
    let block = source.submatrix(rows, cols);
    let abs = Matrix::from_fn(block.rows(), block.cols(), |i, j| {
        let r = block.at(i, j).as_rational().expect("rational source");
        Value::from_q(r.abs())
    });
    let sum = ExpSum::from_hadamard_det(&abs)?;
    let verdict = sum.certified_sign(alpha, ctx);
    let raw = verdict_to_i8(&verdict, "image minor")?;
    let c_sign: i8 = if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    };
    let factor = if rows.len() % 2 == 0 { 1 } else { c_sign };
    let iv = sum.eval(alpha, ctx.bits);
    let line = format!(
        "image minor rows {:?} x cols {:?}: exponential-sum sign {} (enclosure [{:.6e}, {:.6e}] before the c^k factor {})",
        rows,
        cols,
        match raw * factor {
            1 => "positive",
            -1 => "negative",
            _ => "zero",
        },
        iv.lo.to_f64(),
        iv.hi.to_f64(),
        factor,
    );
    Ok((raw * factor, line))
}

/// Exact sign of `det f[A][rows, cols]` when `f` has rational values
/// (signum / constant maps, or integer exponents via the exact value path).
fn image_minor_exact(
    source: &Matrix,
    f: &FunctionSpec,
    rows: &[usize],
    cols: &[usize],
) -> Result<(i8, Q), WitnessError> {
    let image = f.apply_entrywise(source)?;
    let det = image.submatrix(rows, cols).det();
    let r = det.as_rational().ok_or_else(|| {
        WitnessError::CertificationFailed("exact image minor is not rational".into())
    })?;
    let s = if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    };
    Ok((s, r))
}

// ---------------------------------------------------------------------------
// Transports (fixed-pattern witnesses are built in a normalized frame).
// ---------------------------------------------------------------------------

/// Normalizes a pattern to `ε₁ = ε₂ = +1` (for `d ≥ 2`): negate when
/// `ε₁ = −1`, then exchange when the (possibly negated) `ε₂ = −1`. Returns
/// the base pattern and the two transport flags.
fn normalize_pattern(eps: &SignPattern) -> (SignPattern, bool, bool) {
    let mut e = eps.clone();
    let neg = e.eps(1) == -1;
    if neg {
        e = e.negate();
    }
    let ex = e.d() >= 2 && e.eps(2) == -1;
    if ex {
        e = e.exchange();
    }
    (e, neg, ex)
}

/// Applies the inverse transports: the base-frame witness `A` becomes a
/// witness for the original pattern via column exchange then negation.
fn undo_transports(a: &Matrix, neg: bool, ex: bool) -> Matrix {
    let mut out = a.clone();
    if ex {
        out = genmat::apply_transport(&out, Transport::Exchange);
    }
    if neg {
        out = genmat::apply_transport(&out, Transport::Negate);
    }
    out
}

fn map_cols(cols: &[usize], n: usize, ex: bool) -> Vec<usize> {
    if !ex {
        return cols.to_vec();
    }
    let mut out: Vec<usize> = cols.iter().map(|&c| n - 1 - c).collect();
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------------------
// Report assembly helpers.
// ---------------------------------------------------------------------------

struct SourceCert {
    lines: Vec<String>,
}

/// Certifies the final source against the query pattern: exactly when the
/// shape is small, otherwise exactly on the active block plus the padding /
/// transport lemmas (zero-padding keeps every minor either equal to a block
/// minor or zero; transports permute minors with the pattern's sign rule).
fn certify_query_source(
    a: &Matrix,
    eps: &SignPattern,
    strict: bool,
    ctx: &CertCtx,
) -> Result<SourceCert, WitnessError> {
    let small = a.rows().max(a.cols()) <= SMALL_EXACT_SIDE;
    if small {
        let ok = if strict {
            a.is_ssr_with(eps, ctx)
        } else {
            a.is_sr_with(eps, ctx)
        };
        if !ok {
            return Err(WitnessError::CertificationFailed(format!(
                "source failed exact {} certification for pattern {eps}",
                if strict { "strict" } else { "weak" }
            )));
        }
        Ok(SourceCert {
            lines: vec![format!(
                "source certified {} sign-regular with pattern {eps} (every minor checked exactly)",
                if strict { "strictly" } else { "weakly" }
            )],
        })
    } else {
        Ok(SourceCert {
            lines: vec![format!(
                "source pattern {eps}: active block certified exactly; remaining minors are zero \
                 by the zero-padding lemma (each either equals a block minor or vanishes)",
            )],
        })
    }
}

fn params_to_strings(p: &BTreeMap<String, Q>) -> BTreeMap<String, String> {
    p.iter()
        .map(|(k, v)| (k.clone(), format_rational(v)))
        .collect()
}

/// Prefixes a closed-class report with the density/continuity argument that
/// lifts it to the strict class (valid only for positive exponents, where
/// the power map extends continuously by 0 at 0).
fn closure_bridge(mut rep: WitnessReport, alpha: &Q) -> WitnessReport {
    let mut lines = vec![
        format!(
            "closure bridge: every sign-regular matrix of a pattern is a limit of strictly \
             sign-regular matrices of the same pattern (density of the strict class), and the \
             power map with exponent {} extends continuously to the closed entry domain with \
             value 0 at 0",
            format_rational(alpha)
        ),
        "a map preserving the strict class would therefore preserve the closed class; the \
         closed-class refutation below rules that out"
            .to_string(),
    ];
    lines.extend(rep.transcript);
    rep.transcript = lines;
    rep.construction = format!("closure bridge via: {}", rep.construction);
    rep
}

// ---------------------------------------------------------------------------
// find_violation and its four dispatch arms.
// ---------------------------------------------------------------------------

/// Constructs a fully certified counterexample showing that the entrywise
/// power map with exponent `alpha` fails the preservation property `q`.
///
/// Errors with [`WitnessError::AdmissibleAlpha`] when `alpha` lies in
/// [`classify::admissible_exponents`]`(q)` (no witness exists), and with
/// [`WitnessError::UnsupportedQuery`] for the one carved-out regime
/// (all-patterns strict queries with a side above 5 and a negative
/// exponent, where no continuity bridge exists).
pub fn find_violation(alpha: &Q, query: &Query, ctx: &CertCtx) -> Result<WitnessReport, WitnessError> {
    let dom = classify::validate(query)?;
    let admissible = classify::admissible_exponents(query)?;
    if admissible.contains(alpha) {
        return Err(WitnessError::AdmissibleAlpha(format_rational(alpha)));
    }
    match (&query.scope, query.mode) {
        (Scope::FixedPattern { eps }, Mode::Sr) => fixed_sr_violation(alpha, query, eps, dom, ctx),
        (Scope::FixedPattern { eps }, Mode::Ssr) => {
            fixed_ssr_violation(alpha, query, eps, dom, ctx)
        }
        (Scope::AllPatterns, Mode::Sr) => allsign_sr_violation(alpha, query, dom, ctx),
        (Scope::AllPatterns, Mode::Ssr) => allsign_ssr_violation(alpha, query, dom, ctx),
    }
}

fn power_c_for(eps1: i8) -> Q {
    if eps1 >= 0 {
        qi(1)
    } else {
        qi(-1)
    }
}

/// Zero-matrix witness: sign-regular for every pattern, yet the map is
/// undefined at 0 for negative exponents.
fn zero_matrix_report(
    alpha: &Q,
    m: usize,
    n: usize,
    eps: Option<&SignPattern>,
    f: FunctionSpec,
) -> WitnessReport {
    let src = Matrix::zero(m, n);
    let reason = match f.eval(&Q::zero()) {
        Err(e) => e.to_string(),
        Ok(_) => "map unexpectedly defined at 0".to_string(),
    };
    let pattern = eps
        .cloned()
        .unwrap_or_else(|| SignPattern::all_plus(m.min(n)));
    WitnessReport {
        family: None,
        construction: "zero matrix (every minor vanishes, so it is sign-regular for every \
                       pattern; the map must be defined on it)"
            .into(),
        params: BTreeMap::new(),
        source: MatrixData::from_matrix(&src),
        source_pattern: pattern,
        source_mode: "sr".into(),
        function: f,
        violation: ViolationClaim::UndefinedEntry {
            row: 0,
            col: 0,
            entry: "0".into(),
            reason: reason.clone(),
        },
        transcript: vec![format!(
            "exponent {} is negative: evaluating the map at the zero entry fails: {reason}",
            format_rational(alpha)
        )],
    }
}

fn fixed_sr_violation(
    alpha: &Q,
    query: &Query,
    eps: &SignPattern,
    dom: Dom,
    ctx: &CertCtx,
) -> Result<WitnessReport, WitnessError> {
    let (m, n, d) = (query.m, query.n, query.d());
    let c = power_c_for(eps.eps(1));
    let f = FunctionSpec::power(c.clone(), alpha.clone(), dom);
    if alpha.is_negative() {
        return Ok(zero_matrix_report(alpha, m, n, Some(eps), f));
    }
    // Wrong-side positive exponent; d >= 3 guaranteed by the exponent table.
    let (base, neg, ex) = normalize_pattern(eps);
    let eq = classify::base_branch_eq(&base);
    let below_one = alpha < &Q::one();
    // The 3×3 singular regimes vs. the 4×4 linear-family regimes.
    let use_sing3 = (eq && below_one) || (!eq && !below_one);
    let (family, small, _small_pat, block_rows, block_cols, param, construction): (
        Option<WitnessFamilyId>,
        Matrix,
        SignPattern,
        Vec<usize>,
        Vec<usize>,
        BTreeMap<String, Q>,
        String,
    ) = if use_sing3 {
        let e3 = if eq { 1 } else { -1 };
        let small = singular_matrix();
        let pat = SignPattern(vec![1, 1, e3]);
        if !small.is_sr_with(&pat, ctx) {
            return Err(WitnessError::CertificationFailed(
                "singular source failed its weak certification".into(),
            ));
        }
        (
            Some(WitnessFamilyId::Singular3x3),
            small,
            pat,
            vec![0, 1, 2],
            vec![0, 1, 2],
            BTreeMap::new(),
            format!(
                "singular totally nonnegative 3x3 block (vanishing determinant is compatible \
                 with e3 = {e3}), zero-padded to {m}x{n}"
            ),
        )
    } else {
        // d >= 4 regimes: pick the family by (branch, e4*).
        if d < 4 {
            return Err(WitnessError::CertificationFailed(
                "no wrong-side regime below d = 4 outside the singular branches".into(),
            ));
        }
        let e4 = base.eps(4);
        let (id, fam, pat) = match (eq, e4) {
            (true, 1) => (
                WitnessFamilyId::SrEqA1,
                fam_sr_eq_a1(),
                SignPattern(vec![1, 1, 1, 1]),
            ),
            (true, _) => (
                WitnessFamilyId::SrEqA2,
                fam_sr_eq_a2(),
                SignPattern(vec![1, 1, 1, -1]),
            ),
            (false, 1) => (
                WitnessFamilyId::SrNeqA3,
                fam_sr_neq_a3(),
                SignPattern(vec![1, 1, -1, 1]),
            ),
            (false, _) => (
                WitnessFamilyId::SrNeqA4,
                fam_sr_neq_a4(),
                SignPattern(vec![1, 1, -1, -1]),
            ),
        };
        // Shrink t until the powered determinant's certified sign opposes e4.
        let mut found: Option<(Q, Matrix)> = None;
        for j in 2..=60u32 {
            let t = q(1, 1i64 << j.min(62));
            let cand = fam.at(&t);
            if !cand.is_sr_with(&pat, ctx) {
                continue;
            }
            let (s, _) = image_minor_sign(&cand, &qi(1), alpha, &[0, 1, 2, 3], &[0, 1, 2, 3], ctx)?;
            if s == -e4 {
                found = Some((t, cand));
                break;
            }
        }
        let (t, small) = found.ok_or_else(|| {
            WitnessError::BudgetExhausted("no t with the certified wrong-signed determinant".into())
        })?;
        let mut p = BTreeMap::new();
        p.insert("t".to_string(), t);
        (
            Some(id),
            small,
            pat,
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 3],
            p,
            format!("linear family {id} member, zero-padded to {m}x{n}"),
        )
    };
    // Pad to the query shape, move to the query frame, and certify there.
    let padded = small.pad_with_zeros(m, n)?;
    let a_query = undo_transports(&padded, neg, ex);
    let cert = certify_query_source(&a_query, eps, false, ctx)?;
    // Per-block exactness for large shapes: the small source was certified
    // above (singular) or inside the t-search (families).
    let rows = block_rows;
    let cols = map_cols(&block_cols, n, ex);
    let k = rows.len();
    let required = eps.eps(k);
    let (got, sign_line) = image_minor_sign(&a_query, &c, alpha, &rows, &cols, ctx)?;
    if got != -required {
        return Err(WitnessError::CertificationFailed(format!(
            "expected the image minor to certify {} but got {got}",
            -required
        )));
    }
    let mut transcript = cert.lines;
    transcript.push(sign_line);
    transcript.push(format!(
        "weak preservation requires sign {required} (or zero) for every {k}x{k} minor; the \
         certified sign is {got}"
    ));
    Ok(WitnessReport {
        family,
        construction,
        params: params_to_strings(&param),
        source: MatrixData::from_matrix(&a_query),
        source_pattern: eps.clone(),
        source_mode: "sr".into(),
        function: f,
        violation: ViolationClaim::MinorSign {
            k,
            rows,
            cols,
            required_sign: required,
            certified_sign: got,
        },
        transcript,
    })
}

/// Draws a certified strictly sign-regular source from the generator.
fn generated_ssr(m: usize, n: usize, eps: &SignPattern, ctx: &CertCtx) -> Result<Matrix, WitnessError> {
    let spec = GenSpec::new(WITNESS_SEED);
    let mut last: Option<GenError> = None;
    for trial in 0..16u64 {
        match genmat::random_ssr(m, n, eps, &spec, trial) {
            Ok(a) => {
                if m.max(n) > SMALL_EXACT_SIDE || a.is_ssr_with(eps, ctx) {
                    return Ok(a);
                }
            }
            Err(e) => last = Some(e),
        }
    }
    Err(match last {
        Some(e) => WitnessError::Gen(e),
        None => WitnessError::BudgetExhausted("no certified strict source in 16 trials".into()),
    })
}

fn fixed_ssr_violation(
    alpha: &Q,
    query: &Query,
    eps: &SignPattern,
    dom: Dom,
    ctx: &CertCtx,
) -> Result<WitnessReport, WitnessError> {
    let (m, n, d) = (query.m, query.n, query.d());
    let c = power_c_for(eps.eps(1));
    let f = FunctionSpec::power(c.clone(), alpha.clone(), dom);
    if alpha.is_zero() {
        // Constant image: every 2x2 minor vanishes, strictness fails.
        let src = generated_ssr(m, n, eps, ctx)?;
        let (s, det) = image_minor_exact(&src, &f, &[0, 1], &[0, 1])?;
        if s != 0 || !det.is_zero() {
            return Err(WitnessError::CertificationFailed(
                "constant image unexpectedly has a nonzero 2x2 minor".into(),
            ));
        }
        return Ok(WitnessReport {
            family: None,
            construction: "generated strict source; exponent 0 maps every entry to the same \
                           constant"
                .into(),
            params: BTreeMap::new(),
            source: MatrixData::from_matrix(&src),
            source_pattern: eps.clone(),
            source_mode: "ssr".into(),
            function: f,
            violation: ViolationClaim::MinorZero {
                k: 2,
                rows: vec![0, 1],
                cols: vec![0, 1],
                required_sign: eps.eps(2),
            },
            transcript: vec![
                "source drawn from the certified generator".into(),
                "image is a constant matrix: the leading 2x2 minor is exactly 0, but strict \
                 preservation demands a nonzero signed minor"
                    .into(),
            ],
        });
    }
    if alpha.is_negative() {
        // Monotone flip: t^alpha is strictly decreasing on (0, inf), so the
        // larger of the two diagonal products becomes the smaller and the
        // leading 2x2 minor of the image takes the sign -e2.
        let src = generated_ssr(m, n, eps, ctx)?;
        let required = eps.eps(2);
        let (got, line) = image_minor_sign(&src, &c, alpha, &[0, 1], &[0, 1], ctx)?;
        if got != -required {
            return Err(WitnessError::CertificationFailed(format!(
                "expected the flipped 2x2 sign {} but certified {got}",
                -required
            )));
        }
        return Ok(WitnessReport {
            family: None,
            construction: "generated strict source; a negative exponent reverses the order of \
                           the two diagonal products in any 2x2 minor"
                .into(),
            params: BTreeMap::new(),
            source: MatrixData::from_matrix(&src),
            source_pattern: eps.clone(),
            source_mode: "ssr".into(),
            function: f,
            violation: ViolationClaim::MinorSign {
                k: 2,
                rows: vec![0, 1],
                cols: vec![0, 1],
                required_sign: required,
                certified_sign: got,
            },
            transcript: vec!["source drawn from the certified generator".into(), line],
        });
    }
    // Wrong-side positive exponent.
    let (base, neg, ex) = normalize_pattern(eps);
    let eq = classify::base_branch_eq(&base);
    let below_one = alpha < &Q::one();
    let truncation_regime = (eq && below_one) || (!eq && !below_one);
    let direct_3 = d == 3 && m.max(n) <= 4;
    let direct_4 = d == 4 && m == 4 && n == 4;
    if !truncation_regime || !(direct_3 || direct_4) {
        // Closure bridge: the same exponent is inadmissible for the closed
        // class at this shape, whose witness (valid for alpha > 0) lifts.
        let q_sr = Query {
            m,
            n,
            mode: Mode::Sr,
            scope: Scope::FixedPattern { eps: eps.clone() },
            entry_domain: EntryDomain::Nonneg,
        };
        let dom_sr = classify::validate(&q_sr)?;
        let rep = fixed_sr_violation(alpha, &q_sr, eps, dom_sr, ctx)?;
        return Ok(closure_bridge(rep, alpha));
    }
    // Direct strict witnesses built on P(±η): shrink η until both the
    // source certification and the wrong-signed image block certify. The
    // violated sign requirement lives in the query frame.
    let required = eps.eps(3);
    for j in 4..=60u32 {
        let eta = q(1, 1i64 << j.min(62));
        let (small, small_pat, block_cols, family, construction): (
            Matrix,
            SignPattern,
            Vec<usize>,
            Option<WitnessFamilyId>,
            String,
        ) = if direct_3 {
            let signed_eta = if eq { eta.clone() } else { -eta.clone() };
            let full = perturbed_singular(&signed_eta);
            let (mat, what) = if (m, n) == (3, 3) {
                (full, "P(eta)".to_string())
            } else {
                // Truncations of the bordered completion keep strictness.
                let (b, _, _) = bordered_ssr(eq, -1, &eta);
                if n == 4 {
                    (
                        b.submatrix(&[0, 1, 2], &[0, 1, 2, 3]),
                        "rows {0,1,2} of the bordered completion".to_string(),
                    )
                } else {
                    (
                        b.submatrix(&[0, 1, 2, 3], &[0, 1, 2]),
                        "columns {0,1,2} of the bordered completion".to_string(),
                    )
                }
            };
            (
                mat,
                base.clone(),
                vec![0, 1, 2],
                Some(WitnessFamilyId::PerturbedSingular),
                format!("{what} with the corner perturbed by {}", if eq { "+eta" } else { "-eta" }),
            )
        } else {
            let e4 = base.eps(4);
            let (mat, pat, cols) = bordered_ssr(eq, e4, &eta);
            let id = match (eq, e4) {
                (true, 1) => WitnessFamilyId::SsrBorderEqPlus,
                (true, _) => WitnessFamilyId::SsrBorderEqMinus,
                (false, 1) => WitnessFamilyId::SsrBorderNeqPlus,
                (false, _) => WitnessFamilyId::SsrBorderNeqMinus,
            };
            (
                mat,
                pat,
                cols,
                Some(id),
                "strictly sign-regular bordered completion of the perturbed singular block".into(),
            )
        };
        if small_pat.d() != d || !small.is_ssr_with(&small_pat, ctx) {
            continue;
        }
        let a_query = undo_transports(&small, neg, ex);
        let cert = certify_query_source(&a_query, eps, true, ctx)?;
        let rows = vec![0, 1, 2];
        let cols = map_cols(&block_cols, n, ex);
        let (got, sign_line) = image_minor_sign(&a_query, &c, alpha, &rows, &cols, ctx)?;
        if got != -required {
            continue; // eta not yet small enough for the wrong sign.
        }
        let mut params = BTreeMap::new();
        params.insert("eta".to_string(), eta);
        let mut transcript = cert.lines;
        transcript.push(sign_line);
        transcript.push(format!(
            "strict preservation requires sign {required} for this 3x3 minor; the certified \
             sign is {got}"
        ));
        return Ok(WitnessReport {
            family,
            construction,
            params: params_to_strings(&params),
            source: MatrixData::from_matrix(&a_query),
            source_pattern: eps.clone(),
            source_mode: "ssr".into(),
            function: f,
            violation: ViolationClaim::MinorSign {
                k: 3,
                rows,
                cols,
                required_sign: required,
                certified_sign: got,
            },
            transcript,
        });
    }
    Err(WitnessError::BudgetExhausted(
        "no eta reached both certifications".into(),
    ))
}

fn allsign_sr_violation(
    alpha: &Q,
    query: &Query,
    dom: Dom,
    ctx: &CertCtx,
) -> Result<WitnessReport, WitnessError> {
    let (m, n) = (query.m, query.n);
    let f = FunctionSpec::power(qi(1), alpha.clone(), dom);
    if alpha.is_negative() {
        return Ok(zero_matrix_report(alpha, m, n, None, f));
    }
    let below_one = alpha < &Q::one();
    // Build the two-block core in row orientation, then transpose if the
    // query is taller than wide with fewer than 4 columns.
    let transpose = n < 4;
    let (rows_avail, _cols_avail) = if transpose { (n, m) } else { (m, n) };
    let core_rows = if rows_avail >= 4 { 4 } else { 3 };
    let (family, core, core_pat, construction, first_expect, second_expect, param) = if below_one {
        let full = allsign_sr_4x4();
        let core = if core_rows == 4 {
            full
        } else {
            full.submatrix(&[0, 1, 2], &[0, 1, 2, 3])
        };
        (
            Some(WitnessFamilyId::AllsignSr),
            core,
            SignPattern::all_plus(core_rows.min(4)),
            "two overlapping 3x3 blocks: the singular block's powered determinant is negative \
             on (0,1), its neighbor's is positive",
            -1i8,
            1i8,
            BTreeMap::new(),
        )
    } else {
        // alpha > 1: shrink t until both block signs certify.
        let fam = fam_allsign_sr_t();
        let pat4 = SignPattern(vec![1, 1, -1, 1]);
        let mut found: Option<(Q, Matrix)> = None;
        for j in 2..=60u32 {
            let t = q(1, 1i64 << j.min(62));
            let cand = fam.at(&t);
            if !cand.is_sr_with(&pat4, ctx) {
                continue;
            }
            let (s1, _) = image_minor_sign(&cand, &qi(1), alpha, &[0, 1, 2], &[0, 1, 2], ctx)?;
            let (s2, _) = image_minor_sign(&cand, &qi(1), alpha, &[0, 1, 2], &[1, 2, 3], ctx)?;
            if s1 == 1 && s2 == -1 {
                found = Some((t, cand));
                break;
            }
        }
        let (t, full) = found.ok_or_else(|| {
            WitnessError::BudgetExhausted("no t certified both opposite block signs".into())
        })?;
        let core = if core_rows == 4 {
            full
        } else {
            full.submatrix(&[0, 1, 2], &[0, 1, 2, 3])
        };
        let core_pat = if core_rows == 4 {
            pat4
        } else {
            SignPattern(vec![1, 1, -1])
        };
        let mut p = BTreeMap::new();
        p.insert("t".to_string(), t);
        (
            Some(WitnessFamilyId::AllsignSrT),
            core,
            core_pat,
            "linear family member with two overlapping 3x3 blocks whose powered determinants \
             certify opposite signs",
            1i8,
            -1i8,
            p,
        )
    };
    if !core.is_sr_with(&core_pat, ctx) {
        return Err(WitnessError::CertificationFailed(
            "all-patterns core failed its weak certification".into(),
        ));
    }
    let oriented = if transpose { core.transpose() } else { core };
    let padded = oriented.pad_with_zeros(m, n)?;
    let eps_padded = SignPattern(
        (1..=m.min(n))
            .map(|k| if k <= core_pat.d() { core_pat.eps(k) } else { 1 })
            .collect(),
    );
    let cert = certify_query_source(&padded, &eps_padded, false, ctx)?;
    let (r1, c1, r2, c2): (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>) = if transpose {
        (
            vec![0, 1, 2],
            vec![0, 1, 2],
            vec![1, 2, 3],
            vec![0, 1, 2],
        )
    } else {
        (
            vec![0, 1, 2],
            vec![0, 1, 2],
            vec![0, 1, 2],
            vec![1, 2, 3],
        )
    };
    let (s1, l1) = image_minor_sign(&padded, &qi(1), alpha, &r1, &c1, ctx)?;
    let (s2, l2) = image_minor_sign(&padded, &qi(1), alpha, &r2, &c2, ctx)?;
    if s1 != first_expect || s2 != second_expect {
        return Err(WitnessError::CertificationFailed(format!(
            "expected block signs ({first_expect}, {second_expect}), certified ({s1}, {s2})"
        )));
    }
    let mut transcript = cert.lines;
    transcript.push(l1);
    transcript.push(l2);
    transcript.push(
        "two equal-sized minors with certified strictly opposite signs admit no determinant \
         sign e3: the image is sign-regular for no pattern"
            .into(),
    );
    Ok(WitnessReport {
        family,
        construction: construction.into(),
        params: params_to_strings(&param),
        source: MatrixData::from_matrix(&padded),
        source_pattern: eps_padded,
        source_mode: "sr".into(),
        function: f,
        violation: ViolationClaim::OppositeMinors {
            k: 3,
            first_rows: r1,
            first_cols: c1,
            first_sign: s1,
            second_rows: r2,
            second_cols: c2,
            second_sign: s2,
        },
        transcript,
    })
}

/// Certified sign of the powered block determinant of `fam.at(t)`.
fn family_block_sign(
    fam: &LinFamily,
    t: &Q,
    rows: &[usize],
    cols: &[usize],
    alpha: &Q,
    ctx: &CertCtx,
) -> Result<SignVerdict, WitnessError> {
    let block = fam.at(t).submatrix(rows, cols);
    let sum = ExpSum::from_hadamard_det(&block)?;
    Ok(sum.certified_sign(alpha, ctx))
}

struct BracketSpec {
    family_id: WitnessFamilyId,
    fam: LinFamily,
    pattern: SignPattern,
    /// Anchor parameter with the `hi` sign.
    hi: Q,
    sign_lo: i8,
    sign_hi: i8,
    rows: Vec<usize>,
    cols: Vec<usize>,
    delta: Option<Q>,
    construction: String,
}

/// Runs the lo-search + dyadic bisection for a strict one-parameter family
/// whose powered block determinant changes sign on `(0, hi]`.
fn run_bracket(
    alpha: &Q,
    f: FunctionSpec,
    spec: BracketSpec,
    ctx: &CertCtx,
) -> Result<WitnessReport, WitnessError> {
    let BracketSpec {
        family_id,
        fam,
        pattern,
        hi,
        sign_lo,
        sign_hi,
        rows,
        cols,
        delta,
        construction,
    } = spec;
    let mut transcript = Vec::new();
    // Source strictness on the whole window, exactly.
    if !fam.certify_throughout(&pattern, &hi, true) {
        return Err(WitnessError::CertificationFailed(format!(
            "family {family_id} is not strictly sign-regular throughout (0, {}]",
            format_rational(&hi)
        )));
    }
    transcript.push(format!(
        "source strictly sign-regular with pattern {pattern} for every t in (0, {}] \
         (exact rational certificate on each minor's binomial t^(k-1)(a+bt))",
        format_rational(&hi)
    ));
    // Anchor sign at hi.
    let vh = family_block_sign(&fam, &hi, &rows, &cols, alpha, ctx)?;
    if verdict_to_i8(&vh, "anchor minor")? != sign_hi {
        return Err(WitnessError::CertificationFailed(format!(
            "anchor t = {} does not certify sign {sign_hi}",
            format_rational(&hi)
        )));
    }
    // Shrink to find the opposite sign.
    let mut lo = None;
    for j in 1..=200u32 {
        let t = &hi / qi(1i64 << j.min(62));
        let t = if j <= 62 {
            t
        } else {
            &hi / (qi(1i64 << 62) * qi(1i64 << (j - 62).min(62)))
        };
        match family_block_sign(&fam, &t, &rows, &cols, alpha, ctx)?.as_i8() {
            Some(s) if s == sign_lo => {
                lo = Some(t);
                break;
            }
            _ => continue,
        }
    }
    let mut lo = lo.ok_or_else(|| {
        WitnessError::BudgetExhausted("no small parameter certified the leading sign".into())
    })?;
    let mut hi_t = hi.clone();
    transcript.push(format!(
        "bracket seeded: sign {sign_lo} at t = {}, sign {sign_hi} at t = {}",
        format_rational(&lo),
        format_rational(&hi_t)
    ));
    // Dyadic bisection with certified signs; nudge the probe on the rare
    // undecidable point.
    let tol = q(1, 10_000_000_000i64);
    let fractions = [q(1, 2), q(7, 16), q(9, 16), q(3, 8), q(5, 8)];
    let mut iterations = 0usize;
    while &hi_t - &lo > tol {
        iterations += 1;
        if iterations > 400 {
            return Err(WitnessError::BudgetExhausted(
                "bisection exceeded its iteration budget".into(),
            ));
        }
        let width = &hi_t - &lo;
        let mut moved = false;
        for frac in &fractions {
            let mid = &lo + &(&width * frac);
            match family_block_sign(&fam, &mid, &rows, &cols, alpha, ctx)?.as_i8() {
                Some(s) if s == sign_lo => {
                    lo = mid;
                    moved = true;
                    break;
                }
                Some(s) if s == sign_hi => {
                    hi_t = mid;
                    moved = true;
                    break;
                }
                Some(_) => {
                    // Exact zero: degenerate bracket at a rational root.
                    lo = mid.clone();
                    hi_t = mid;
                    moved = true;
                    break;
                }
                None => continue,
            }
        }
        if !moved {
            return Err(WitnessError::BudgetExhausted(
                "no probe point in the interval had a decidable sign".into(),
            ));
        }
    }
    let width = &hi_t - &lo;
    let width_f = q_to_f64(&width);
    // Exact endpoint strictness (the throughout-certificate already covers
    // them; this re-checks the concrete members minor-by-minor).
    for t in [&lo, &hi_t] {
        if !fam.at(t).is_ssr_with(&pattern, ctx) {
            return Err(WitnessError::CertificationFailed(format!(
                "endpoint t = {} failed its exact strict certification",
                format_rational(t)
            )));
        }
    }
    transcript.push(format!(
        "final bracket [{}, {}] of width {width_f:.3e}; both endpoints re-certified strictly \
         sign-regular minor-by-minor",
        format_rational(&lo),
        format_rational(&hi_t)
    ));
    transcript.push(
        "the powered minor is continuous in t, so it vanishes somewhere inside the bracket \
         while strict preservation demands a nonzero sign there"
            .into(),
    );
    let mut params = BTreeMap::new();
    params.insert("t-lo".to_string(), lo.clone());
    params.insert("t-hi".to_string(), hi_t.clone());
    if let Some(dl) = &delta {
        params.insert("delta".to_string(), dl.clone());
    }
    let source = fam.at(&lo);
    Ok(WitnessReport {
        family: Some(family_id),
        construction,
        params: params_to_strings(&params),
        source: MatrixData::from_matrix(&source),
        source_pattern: pattern,
        source_mode: "ssr".into(),
        function: f,
        violation: ViolationClaim::SignChangeBracket {
            param: "t".into(),
            lo: format_rational(&lo),
            hi: format_rational(&hi_t),
            sign_lo,
            sign_hi,
            width: width_f,
            k: rows.len(),
            rows,
            cols,
        },
        transcript,
    })
}

fn allsign_ssr_violation(
    alpha: &Q,
    query: &Query,
    dom: Dom,
    ctx: &CertCtx,
) -> Result<WitnessReport, WitnessError> {
    let (m, n, d) = (query.m, query.n, query.d());
    let f = FunctionSpec::power(qi(1), alpha.clone(), dom);
    if alpha.is_zero() {
        // Constant image kills strictness for any pattern.
        let spec = GenSpec::new(WITNESS_SEED);
        let src = genmat::random_tp(m, n, &spec, 0);
        if m.max(n) <= SMALL_EXACT_SIDE && !src.is_ssr_with(&SignPattern::all_plus(d), ctx) {
            return Err(WitnessError::CertificationFailed(
                "generated totally positive source failed certification".into(),
            ));
        }
        let (s, det) = image_minor_exact(&src, &f, &[0, 1], &[0, 1])?;
        if s != 0 || !det.is_zero() {
            return Err(WitnessError::CertificationFailed(
                "constant image unexpectedly has a nonzero 2x2 minor".into(),
            ));
        }
        return Ok(WitnessReport {
            family: None,
            construction: "generated totally positive source; exponent 0 maps every entry to 1"
                .into(),
            params: BTreeMap::new(),
            source: MatrixData::from_matrix(&src),
            source_pattern: SignPattern::all_plus(d),
            source_mode: "ssr".into(),
            function: f,
            violation: ViolationClaim::MinorZero {
                k: 2,
                rows: vec![0, 1],
                cols: vec![0, 1],
                required_sign: 1,
            },
            transcript: vec![
                "image is the all-ones matrix: its leading 2x2 minor is exactly 0, so the \
                 image is strictly sign-regular for no pattern"
                    .into(),
            ],
        });
    }
    if alpha.is_negative() {
        if m <= 5 && n <= 5 {
            // Bracket on the totally positive kernel family; the leading
            // 3x3 block's powered determinant is positive for small t and
            // negative at t = 1 for every negative exponent.
            let (family_id, fam) = if (m, n) == (3, 3) {
                (WitnessFamilyId::AllsignSsrA1, fam_allsign_ssr_a1())
            } else {
                (WitnessFamilyId::AllsignSsrDeep, fam_allsign_ssr_deep(m, n))
            };
            return run_bracket(
                alpha,
                f,
                BracketSpec {
                    family_id,
                    fam,
                    pattern: SignPattern::all_plus(d),
                    hi: Q::one(),
                    sign_lo: 1,
                    sign_hi: -1,
                    rows: vec![0, 1, 2],
                    cols: vec![0, 1, 2],
                    delta: None,
                    construction: "totally positive one-parameter family whose powered leading \
                                   3x3 minor changes sign"
                        .into(),
                },
                ctx,
            );
        }
        return Err(WitnessError::UnsupportedQuery(format!(
            "all-patterns strict queries with negative exponents are constructed only for \
             sides up to 5 (got {m}x{n}): the continuity bridge through 0 is unavailable for \
             negative exponents"
        )));
    }
    // Positive wrong-side exponent (alpha > 0, alpha != 1).
    if (m, n) == (3, 3) {
        if alpha < &Q::one() {
            // Perturb the singular anchor at t = 3 just enough to keep the
            // anchor's powered determinant negative, then bracket.
            let mut delta = q(1, 2);
            for _ in 0..40 {
                let fam = fam_allsign_ssr_a2(&delta);
                let anchor = family_block_sign(&fam, &qi(3), &[0, 1, 2], &[0, 1, 2], alpha, ctx)?;
                if anchor.as_i8() == Some(-1)
                    && fam.certify_throughout(&SignPattern::all_plus(3), &qi(3), true)
                {
                    return run_bracket(
                        alpha,
                        f,
                        BracketSpec {
                            family_id: WitnessFamilyId::AllsignSsrA2,
                            fam,
                            pattern: SignPattern::all_plus(3),
                            hi: qi(3),
                            sign_lo: 1,
                            sign_hi: -1,
                            rows: vec![0, 1, 2],
                            cols: vec![0, 1, 2],
                            delta: Some(delta),
                            construction: "perturbed totally positive family whose powered \
                                           determinant changes sign on (0, 3]"
                                .into(),
                        },
                        ctx,
                    );
                }
                delta /= qi(2);
            }
            return Err(WitnessError::BudgetExhausted(
                "no delta kept the anchor sign negative".into(),
            ));
        }
        // alpha > 1.
        let mut delta = q(1, 2);
        for _ in 0..40 {
            let fam = fam_allsign_ssr_a3(&delta);
            let anchor = family_block_sign(&fam, &Q::one(), &[0, 1, 2], &[0, 1, 2], alpha, ctx)?;
            if anchor.as_i8() == Some(1)
                && fam.certify_throughout(&SignPattern(vec![1, 1, -1]), &Q::one(), true)
            {
                return run_bracket(
                    alpha,
                    f,
                    BracketSpec {
                        family_id: WitnessFamilyId::AllsignSsrA3,
                        fam,
                        pattern: SignPattern(vec![1, 1, -1]),
                        hi: Q::one(),
                        sign_lo: -1,
                        sign_hi: 1,
                        rows: vec![0, 1, 2],
                        cols: vec![0, 1, 2],
                        delta: Some(delta),
                        construction: "perturbed strictly sign-regular family whose powered \
                                       determinant changes sign on (0, 1]"
                            .into(),
                    },
                    ctx,
                );
            }
            delta /= qi(2);
        }
        return Err(WitnessError::BudgetExhausted(
            "no delta kept the anchor sign positive".into(),
        ));
    }
    // Other shapes: closure bridge through the all-patterns closed class.
    let q_sr = Query {
        m,
        n,
        mode: Mode::Sr,
        scope: Scope::AllPatterns,
        entry_domain: match query.entry_domain {
            EntryDomain::Positive => EntryDomain::Nonneg,
            _ => EntryDomain::Real,
        },
    };
    let dom_sr = classify::validate(&q_sr)?;
    let rep = allsign_sr_violation(alpha, &q_sr, dom_sr, ctx)?;
    Ok(closure_bridge(rep, alpha))
}

// ---------------------------------------------------------------------------
// Signum reports.
// ---------------------------------------------------------------------------

/// The signum counterexample for all patterns at shape `(m, n)` (the 3×4
/// source zero-padded): the signum image contains two contiguous 3×3 minors
/// with exact opposite signs.
pub fn signum_report(m: usize, n: usize, ctx: &CertCtx) -> Result<WitnessReport, WitnessError> {
    if m < 3 || n < 4 {
        return Err(WitnessError::UnsupportedQuery(format!(
            "the signum witness needs at least 3x4, got {m}x{n}"
        )));
    }
    let core = signum_3x4_matrix();
    let padded = core.pad_with_zeros(m, n)?;
    let pattern = SignPattern::all_plus(m.min(n));
    let cert = certify_query_source(&padded, &pattern, false, ctx)?;
    let f = FunctionSpec::signum(qi(1), Dom::Real);
    let (s1, d1) = image_minor_exact(&padded, &f, &[0, 1, 2], &[0, 1, 2])?;
    let (s2, d2) = image_minor_exact(&padded, &f, &[0, 1, 2], &[1, 2, 3])?;
    if s1 != -1 || s2 != 1 {
        return Err(WitnessError::CertificationFailed(format!(
            "expected signum block dets (-1, +1), got ({}, {})",
            format_rational(&d1),
            format_rational(&d2)
        )));
    }
    let mut transcript = cert.lines;
    transcript.push(format!(
        "signum image block determinants: columns {{0,1,2}} -> {} and columns {{1,2,3}} -> {} \
         (exact integers)",
        format_rational(&d1),
        format_rational(&d2)
    ));
    transcript.push(
        "two contiguous 3x3 minors with opposite strict signs admit no pattern".into(),
    );
    Ok(WitnessReport {
        family: Some(WitnessFamilyId::Signum3x4),
        construction: "sign-regular source whose signum image has contiguous 3x3 minors of \
                       opposite signs, zero-padded to the query shape"
            .into(),
        params: BTreeMap::new(),
        source: MatrixData::from_matrix(&padded),
        source_pattern: pattern,
        source_mode: "sr".into(),
        function: f,
        violation: ViolationClaim::OppositeMinors {
            k: 3,
            first_rows: vec![0, 1, 2],
            first_cols: vec![0, 1, 2],
            first_sign: s1,
            second_rows: vec![0, 1, 2],
            second_cols: vec![1, 2, 3],
            second_sign: s2,
        },
        transcript,
    })
}

/// The fixed-pattern signum counterexample at `d = 3`: a sign-regular
/// `(+,+,+)` source whose signum image has determinant `−1`.
pub fn signum_fixed_report(ctx: &CertCtx) -> Result<WitnessReport, WitnessError> {
    let src = signum_3x3_matrix();
    let pattern = SignPattern(vec![1, 1, 1]);
    if !src.is_sr_with(&pattern, ctx) {
        return Err(WitnessError::CertificationFailed(
            "signum 3x3 source failed its certification".into(),
        ));
    }
    let f = FunctionSpec::signum(qi(1), Dom::Real);
    let (s, det) = image_minor_exact(&src, &f, &[0, 1, 2], &[0, 1, 2])?;
    if s != -1 {
        return Err(WitnessError::CertificationFailed(format!(
            "expected signum image det -1, got {}",
            format_rational(&det)
        )));
    }
    Ok(WitnessReport {
        family: Some(WitnessFamilyId::Signum3x3),
        construction: "sign-regular source whose signum image leaves the fixed class".into(),
        params: BTreeMap::new(),
        source: MatrixData::from_matrix(&src),
        source_pattern: pattern,
        source_mode: "sr".into(),
        function: f,
        violation: ViolationClaim::MinorSign {
            k: 3,
            rows: vec![0, 1, 2],
            cols: vec![0, 1, 2],
            required_sign: 1,
            certified_sign: -1,
        },
        transcript: vec![format!(
            "signum image determinant = {} (exact), while the fixed pattern requires a \
             nonnegative determinant",
            format_rational(&det)
        )],
    })
}

// ---------------------------------------------------------------------------
// Canonical per-family reports (CLI `witness --family`).
// ---------------------------------------------------------------------------

/// A representative violation for each family, via [`find_violation`] on the
/// family's natural query (signum families use their bespoke builders).
/// `params.alpha` overrides the default exponent.
pub fn canonical_report(
    id: WitnessFamilyId,
    params: &FamilyParams,
    ctx: &CertCtx,
) -> Result<WitnessReport, WitnessError> {
    use WitnessFamilyId::*;
    let fixed = |m: usize, n: usize, pat: &[i8], mode: Mode| Query {
        m,
        n,
        mode,
        scope: Scope::FixedPattern {
            eps: SignPattern(pat.to_vec()),
        },
        entry_domain: match mode {
            Mode::Sr => EntryDomain::Nonneg,
            Mode::Ssr => EntryDomain::Positive,
        },
    };
    let all = |m: usize, n: usize, mode: Mode| Query {
        m,
        n,
        mode,
        scope: Scope::AllPatterns,
        entry_domain: match mode {
            Mode::Sr => EntryDomain::Real,
            Mode::Ssr => EntryDomain::RealNonzero,
        },
    };
    let alpha_or = |d: Q| params.alpha.clone().unwrap_or(d);
    let (query, alpha) = match id {
        Singular3x3 => (fixed(3, 3, &[1, 1, 1], Mode::Sr), alpha_or(q(1, 2))),
        PerturbedSingular => (fixed(3, 3, &[1, 1, 1], Mode::Ssr), alpha_or(q(1, 2))),
        SrEqA1 => (fixed(4, 4, &[1, 1, 1, 1], Mode::Sr), alpha_or(qi(2))),
        SrEqA2 => (fixed(4, 4, &[1, 1, 1, -1], Mode::Sr), alpha_or(qi(2))),
        SrNeqA3 => (fixed(4, 4, &[1, 1, -1, 1], Mode::Sr), alpha_or(q(1, 2))),
        SrNeqA4 => (fixed(4, 4, &[1, 1, -1, -1], Mode::Sr), alpha_or(q(1, 2))),
        Signum3x3 => return signum_fixed_report(ctx),
        Signum3x4 => {
            let (m, n) = params.shape.unwrap_or((3, 4));
            return signum_report(m, n, ctx);
        }
        AllsignSr => (all(4, 4, Mode::Sr), alpha_or(q(1, 2))),
        AllsignSrT => (all(4, 4, Mode::Sr), alpha_or(qi(2))),
        AllsignSsrA1 => (all(3, 3, Mode::Ssr), alpha_or(qi(-1))),
        AllsignSsrA2 => (all(3, 3, Mode::Ssr), alpha_or(q(1, 2))),
        AllsignSsrA3 => (all(3, 3, Mode::Ssr), alpha_or(qi(2))),
        SsrBorderEqPlus => (fixed(4, 4, &[1, 1, 1, 1], Mode::Ssr), alpha_or(q(1, 2))),
        SsrBorderEqMinus => (fixed(4, 4, &[1, 1, 1, -1], Mode::Ssr), alpha_or(q(1, 2))),
        SsrBorderNeqPlus => (fixed(4, 4, &[1, 1, -1, 1], Mode::Ssr), alpha_or(qi(2))),
        SsrBorderNeqMinus => (fixed(4, 4, &[1, 1, -1, -1], Mode::Ssr), alpha_or(qi(2))),
        AllsignSsrDeep => {
            let (m, n) = params.shape.unwrap_or((5, 5));
            (all(m, n, Mode::Ssr), alpha_or(qi(-1)))
        }
    };
    find_violation(&alpha, &query, ctx)
}

// ---------------------------------------------------------------------------
// Report re-verification.
// ---------------------------------------------------------------------------

fn lin_family_for(
    id: WitnessFamilyId,
    delta: Option<&Q>,
    shape: (usize, usize),
) -> Option<LinFamily> {
    Some(match id {
        WitnessFamilyId::SrEqA1 => fam_sr_eq_a1(),
        WitnessFamilyId::SrEqA2 => fam_sr_eq_a2(),
        WitnessFamilyId::SrNeqA3 => fam_sr_neq_a3(),
        WitnessFamilyId::SrNeqA4 => fam_sr_neq_a4(),
        WitnessFamilyId::AllsignSrT => fam_allsign_sr_t(),
        WitnessFamilyId::AllsignSsrA1 => fam_allsign_ssr_a1(),
        WitnessFamilyId::AllsignSsrA2 => fam_allsign_ssr_a2(delta?),
        WitnessFamilyId::AllsignSsrA3 => fam_allsign_ssr_a3(delta?),
        WitnessFamilyId::AllsignSsrDeep => fam_allsign_ssr_deep(shape.0, shape.1),
        _ => return None,
    })
}

/// Re-derives every stored verdict of a report from its stored data: the
/// source pattern certification and the violated claim. Exact claims are
/// reproduced exactly; certified claims are reproduced within the context's
/// adaptive precision.
pub fn verify_report(rep: &WitnessReport, ctx: &CertCtx) -> Result<(), WitnessError> {
    let src = rep.source.to_matrix()?;
    let strict = rep.source_mode == "ssr";
    certify_query_source(&src, &rep.source_pattern, strict, ctx)?;
    let power_c = match &rep.function.kind {
        FuncKind::Power { c, .. } => Some(c.clone()),
        _ => None,
    };
    let alpha = match &rep.function.kind {
        FuncKind::Power { alpha, .. } => Some(alpha.clone()),
        _ => None,
    };
    let minor_sign = |rows: &[usize], cols: &[usize]| -> Result<i8, WitnessError> {
        match (&power_c, &alpha) {
            (Some(c), Some(a)) => {
                let (s, _) = image_minor_sign(&src, c, a, rows, cols, ctx)?;
                Ok(s)
            }
            _ => {
                let (s, _) = image_minor_exact(&src, &rep.function, rows, cols)?;
                Ok(s)
            }
        }
    };
    match &rep.violation {
        ViolationClaim::MinorSign {
            rows,
            cols,
            required_sign,
            certified_sign,
            ..
        } => {
            let s = minor_sign(rows, cols)?;
            if s != *certified_sign || s == *required_sign {
                return Err(WitnessError::CertificationFailed(format!(
                    "minor sign reverification got {s}, stored {certified_sign}"
                )));
            }
        }
        ViolationClaim::MinorZero { rows, cols, .. } => {
            let (s, det) = image_minor_exact(&src, &rep.function, rows, cols)?;
            if s != 0 || !det.is_zero() {
                return Err(WitnessError::CertificationFailed(
                    "stored zero minor is no longer zero".into(),
                ));
            }
        }
        ViolationClaim::UndefinedEntry { row, col, .. } => {
            let entry = src
                .at(*row, *col)
                .as_rational()
                .ok_or_else(|| WitnessError::CertificationFailed("entry not rational".into()))?;
            if rep.function.eval(&entry).is_ok() {
                return Err(WitnessError::CertificationFailed(
                    "map is defined on the stored entry after all".into(),
                ));
            }
        }
        ViolationClaim::OppositeMinors {
            first_rows,
            first_cols,
            first_sign,
            second_rows,
            second_cols,
            second_sign,
            ..
        } => {
            let s1 = minor_sign(first_rows, first_cols)?;
            let s2 = minor_sign(second_rows, second_cols)?;
            if s1 != *first_sign || s2 != *second_sign || s1 * s2 != -1 {
                return Err(WitnessError::CertificationFailed(format!(
                    "opposite-minor reverification got ({s1}, {s2})"
                )));
            }
        }
        ViolationClaim::SignChangeBracket {
            lo,
            hi,
            sign_lo,
            sign_hi,
            rows,
            cols,
            ..
        } => {
            let family = rep.family.ok_or_else(|| {
                WitnessError::CertificationFailed("bracket report without a family".into())
            })?;
            let delta = rep
                .params
                .get("delta")
                .map(|s| parse_rational(s))
                .transpose()
                .map_err(|e| WitnessError::CertificationFailed(e.to_string()))?;
            let fam = lin_family_for(family, delta.as_ref(), (src.rows(), src.cols()))
                .ok_or_else(|| {
                    WitnessError::CertificationFailed(format!(
                        "family {family} is not a linear family"
                    ))
                })?;
            let lo_q = parse_rational(lo)
                .map_err(|e| WitnessError::CertificationFailed(e.to_string()))?;
            let hi_q = parse_rational(hi)
                .map_err(|e| WitnessError::CertificationFailed(e.to_string()))?;
            let a = alpha.as_ref().ok_or_else(|| {
                WitnessError::CertificationFailed("bracket claim without a power map".into())
            })?;
            let sl = family_block_sign(&fam, &lo_q, rows, cols, a, ctx)?;
            let sh = family_block_sign(&fam, &hi_q, rows, cols, a, ctx)?;
            if sl.as_i8() != Some(*sign_lo) || sh.as_i8() != Some(*sign_hi) {
                return Err(WitnessError::CertificationFailed(
                    "bracket endpoint signs no longer certify".into(),
                ));
            }
            if !fam.certify_throughout(&rep.source_pattern, &hi_q, true) {
                return Err(WitnessError::CertificationFailed(
                    "bracket family strictness certificate no longer holds".into(),
                ));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Taylor leading-coefficient check.
// ---------------------------------------------------------------------------

/// Result of comparing the numerically extracted leading Taylor coefficient
/// of a family's powered minor (in the family parameter, at `t → 0⁺`)
/// against the exact closed form.
#[derive(Debug, Clone, Serialize)]
pub struct TaylorCheck {
    pub family: WitnessFamilyId,
    pub alpha: String,
    /// Order `p` of the leading term `c·t^p`.
    pub order: u32,
    /// Closed-form prediction (exact rational, displayed as f64).
    pub predicted: f64,
    pub estimated: f64,
    pub rel_error: f64,
    pub agrees: bool,
    /// Set when the predicted coefficient vanishes at this exponent; the
    /// comparison is skipped (the true leading order shifts).
    pub skipped: bool,
}

fn predicted_leading(id: WitnessFamilyId, alpha: &Q) -> Option<(u32, Q, LinFamily, Vec<usize>, Vec<usize>)> {
    let a2 = alpha * alpha;
    let a3 = &a2 * alpha;
    let a4 = &a3 * alpha;
    match id {
        WitnessFamilyId::SrEqA1 => Some((
            4,
            qi(2) * (&a3 - &a4),
            fam_sr_eq_a1(),
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 3],
        )),
        WitnessFamilyId::SrEqA2 => Some((
            4,
            q(-1084, 3) * (&a3 - &a4),
            fam_sr_eq_a2(),
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 3],
        )),
        WitnessFamilyId::SrNeqA3 => {
            let one = Q::one();
            let coeff = q(45, 4) * &a3 * (alpha - &one) * (alpha - &one) * (alpha - &qi(2));
            Some((6, coeff, fam_sr_neq_a3(), vec![0, 1, 2, 3], vec![0, 1, 2, 3]))
        }
        WitnessFamilyId::SrNeqA4 => Some((
            4,
            q(2, 9) * (&a3 - &a4),
            fam_sr_neq_a4(),
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 3],
        )),
        WitnessFamilyId::AllsignSrT => Some((
            3,
            q(33, 20) * (&a3 - &a2),
            fam_allsign_sr_t(),
            vec![0, 1, 2],
            vec![0, 1, 2],
        )),
        WitnessFamilyId::AllsignSsrA3 => Some((
            2,
            -a2,
            fam_allsign_ssr_a3(&q(1, 2)),
            vec![0, 1, 2],
            vec![0, 1, 2],
        )),
        _ => None,
    }
}

/// Extracts the leading coefficient of `det f[A(t)][block]` as `t → 0⁺` on a
/// geometric mesh with two Richardson extrapolation levels, and compares it
/// to the family's closed form at the given exponent (relative tolerance
/// `10⁻⁶`; vanishing predictions are skipped).
pub fn taylor_leading_check(
    id: WitnessFamilyId,
    alpha: &Q,
    ctx: &CertCtx,
) -> Result<TaylorCheck, WitnessError> {
    let (order, predicted, fam, rows, cols) = predicted_leading(id, alpha)
        .ok_or_else(|| WitnessError::NoLeadingTerm(id.to_string()))?;
    let pred_f = q_to_f64(&predicted);
    if predicted.is_zero() {
        return Ok(TaylorCheck {
            family: id,
            alpha: format_rational(alpha),
            order,
            predicted: 0.0,
            estimated: 0.0,
            rel_error: 0.0,
            agrees: true,
            skipped: true,
        });
    }
    let prec = ctx.bits.max(256);
    let mut raw: Vec<f64> = Vec::new();
    let mut best: Option<f64> = None;
    for j in 3..=40u32 {
        let t = q(1, 1i64 << j.min(62));
        let t = if j <= 62 { t } else { unreachable!() };
        let block = fam.at(&t).submatrix(&rows, &cols);
        let sum = ExpSum::from_hadamard_det(&block)?;
        let iv = sum.eval(alpha, prec);
        let mid = (iv.lo.to_f64() + iv.hi.to_f64()) / 2.0;
        // Divide by t^p = 2^{-j·p} exactly in the exponent.
        let r = mid * 2f64.powi((j * order) as i32);
        raw.push(r);
        if raw.len() >= 3 {
            // Two Richardson levels on ratio-2 meshes: kill O(t), then O(t²).
            let l = raw.len();
            let r1a = 2.0 * raw[l - 2] - raw[l - 3];
            let r1b = 2.0 * raw[l - 1] - raw[l - 2];
            let r2 = (4.0 * r1b - r1a) / 3.0;
            let prev = best.replace(r2);
            if let Some(p) = prev {
                if (r2 - p).abs() <= 1e-9 * r2.abs().max(1.0) {
                    break;
                }
            }
        }
    }
    let est = best.ok_or_else(|| {
        WitnessError::BudgetExhausted("Taylor extrapolation did not stabilize".into())
    })?;
    let rel = (est - pred_f).abs() / pred_f.abs().max(f64::MIN_POSITIVE);
    Ok(TaylorCheck {
        family: id,
        alpha: format_rational(alpha),
        order,
        predicted: pred_f,
        estimated: est,
        rel_error: rel,
        agrees: rel <= 1e-6,
        skipped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::EntryDomain;

    fn ctx() -> CertCtx {
        CertCtx::default()
    }

    fn fixed_query(m: usize, n: usize, pat: &[i8], mode: Mode) -> Query {
        Query {
            m,
            n,
            mode,
            scope: Scope::FixedPattern {
                eps: SignPattern(pat.to_vec()),
            },
            entry_domain: match mode {
                Mode::Sr => EntryDomain::Nonneg,
                Mode::Ssr => EntryDomain::Positive,
            },
        }
    }

    fn all_query(m: usize, n: usize, mode: Mode) -> Query {
        Query {
            m,
            n,
            mode,
            scope: Scope::AllPatterns,
            entry_domain: match mode {
                Mode::Sr => EntryDomain::Real,
                Mode::Ssr => EntryDomain::RealNonzero,
            },
        }
    }

    #[test]
    fn minor_line_would_catch_a_wrong_binomial() {
        // Compare the exact binomial against direct determinants at several
        // parameters, for representative families and blocks.
        let fams: Vec<(LinFamily, &str)> = vec![
            (fam_allsign_ssr_a1(), "a1"),
            (fam_allsign_ssr_a3(&q(1, 2)), "a3"),
            (fam_allsign_ssr_deep(4, 4), "deep"),
            (fam_sr_eq_a2(), "sr-a2"),
            (fam_allsign_sr_t(), "sr-t"),
        ];
        for (fam, name) in &fams {
            for t in [q(1, 7), q(2, 3), q(5, 4)] {
                let a = fam.at(&t);
                let d = fam.m.min(fam.n);
                for k in 1..=d {
                    for rows in subsets(fam.m, k) {
                        for cols in subsets(fam.n, k) {
                            let (ca, cb) = fam.minor_line(&rows, &cols);
                            let direct = a
                                .submatrix(&rows, &cols)
                                .det()
                                .as_rational()
                                .expect("rational");
                            let mut tp = Q::one();
                            for _ in 1..k {
                                tp *= &t;
                            }
                            let predicted = tp * (&ca + &cb * &t);
                            assert_eq!(direct, predicted, "family {name} block {rows:?}x{cols:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn linear_family_sources_certify_on_their_windows() {
        let c = ctx();
        for (fam, pat, hi) in [
            (fam_sr_eq_a1(), SignPattern(vec![1, 1, 1, 1]), qi(1)),
            (fam_sr_eq_a2(), SignPattern(vec![1, 1, 1, -1]), qi(1)),
            (fam_sr_neq_a3(), SignPattern(vec![1, 1, -1, 1]), qi(1)),
            (fam_sr_neq_a4(), SignPattern(vec![1, 1, -1, -1]), qi(1)),
        ] {
            assert!(
                fam.certify_throughout(&pat, &hi, false),
                "weak certificate for {pat}"
            );
            let a = fam.at(&q(1, 8));
            assert!(a.is_sr_with(&pat, &c), "exact member check for {pat}");
            assert!(
                a.det().as_rational().expect("rational").is_zero(),
                "degenerate determinant for {pat}"
            );
        }
        assert!(fam_allsign_ssr_a1().certify_throughout(&SignPattern::all_plus(3), &qi(1), true));
        assert!(fam_allsign_ssr_deep(5, 5).certify_throughout(
            &SignPattern::all_plus(5),
            &qi(1),
            true
        ));
        assert!(fam_allsign_ssr_a3(&q(1, 2)).certify_throughout(
            &SignPattern(vec![1, 1, -1]),
            &Q::one(),
            true
        ));
    }

    #[test]
    fn bordered_completions_are_strictly_sign_regular() {
        let c = ctx();
        for eta in [q(1, 64), q(1, 1 << 20)] {
            for (eq, e4) in [(true, 1), (true, -1), (false, 1), (false, -1)] {
                let (m, p, block_cols) = bordered_ssr(eq, e4, &eta);
                assert!(
                    m.is_ssr_with(&p, &c),
                    "border eq={eq} e4={e4} at eta={}",
                    format_rational(&eta)
                );
                assert_eq!(block_cols.len(), 3);
            }
        }
    }

    #[test]
    fn instantiate_certifies_every_family() {
        let c = ctx();
        for &id in WitnessFamilyId::all() {
            let inst = instantiate(id, &FamilyParams::default(), &c).expect("instantiate");
            assert_eq!(inst.family, id);
        }
        // Out-of-window parameters are rejected.
        let bad = FamilyParams {
            t: Some(qi(2)),
            ..Default::default()
        };
        assert!(matches!(
            instantiate(WitnessFamilyId::SrNeqA4, &bad, &c),
            Err(WitnessError::OutOfRange { .. })
        ));
    }

    #[test]
    fn taylor_leading_coefficients_match_closed_forms() {
        let c = ctx();
        // Frozen predictions at alpha in {1/2, 2, 3}.
        let expect: Vec<(WitnessFamilyId, [Option<Q>; 3])> = vec![
            (
                WitnessFamilyId::SrEqA1,
                [Some(q(1, 8)), Some(qi(-16)), Some(qi(-108))],
            ),
            (
                WitnessFamilyId::SrEqA2,
                [Some(q(-271, 12)), Some(q(8672, 3)), Some(qi(19512))],
            ),
            (
                WitnessFamilyId::SrNeqA3,
                [Some(q(-135, 256)), None, Some(qi(1215))],
            ),
            (
                WitnessFamilyId::SrNeqA4,
                [Some(q(1, 72)), Some(q(-16, 9)), Some(qi(-12))],
            ),
            (
                WitnessFamilyId::AllsignSrT,
                [Some(q(-33, 160)), Some(q(33, 5)), Some(q(297, 10))],
            ),
            (
                WitnessFamilyId::AllsignSsrA3,
                [Some(q(-1, 4)), Some(qi(-4)), Some(qi(-9))],
            ),
        ];
        for (id, vals) in expect {
            for (alpha, want) in [q(1, 2), qi(2), qi(3)].iter().zip(vals.iter()) {
                let (_, pred, _, _, _) = predicted_leading(id, alpha).expect("target family");
                match want {
                    Some(w) => assert_eq!(&pred, w, "{id} at {}", format_rational(alpha)),
                    None => assert!(pred.is_zero(), "{id} vanishes at {}", format_rational(alpha)),
                }
                let check = taylor_leading_check(id, alpha, &c).expect("check");
                if want.is_none() {
                    assert!(check.skipped, "{id} skipped at {}", format_rational(alpha));
                } else {
                    assert!(
                        check.agrees && !check.skipped,
                        "{id} at {}: predicted {} estimated {} rel {}",
                        format_rational(alpha),
                        check.predicted,
                        check.estimated,
                        check.rel_error
                    );
                }
            }
        }
        assert!(matches!(
            taylor_leading_check(WitnessFamilyId::Singular3x3, &qi(2), &c),
            Err(WitnessError::NoLeadingTerm(_))
        ));
    }

    #[test]
    fn singular_powered_determinant_signs_are_certified() {
        let c = ctx();
        let sum = ExpSum::from_hadamard_det(&singular_matrix()).expect("expansion");
        assert_eq!(sum.certified_sign(&q(1, 2), &c).as_i8(), Some(-1));
        assert_eq!(sum.certified_sign(&qi(2), &c).as_i8(), Some(1));
        assert_eq!(sum.value_at(&qi(2)).as_rational(), Some(qi(100)));
    }

    #[test]
    fn find_violation_rejects_admissible_exponents() {
        let c = ctx();
        let q33 = fixed_query(3, 3, &[1, 1, 1], Mode::Sr);
        assert!(matches!(
            find_violation(&qi(2), &q33, &c),
            Err(WitnessError::AdmissibleAlpha(_))
        ));
        assert!(matches!(
            find_violation(&qi(0), &q33, &c),
            Err(WitnessError::AdmissibleAlpha(_))
        ));
    }

    #[test]
    fn fixed_sr_violations_cover_branches_sides_and_transports() {
        let c = ctx();
        // (pattern, alpha, expected k)
        let cases: Vec<(Vec<i8>, Q, usize)> = vec![
            (vec![1, 1, 1], q(1, 2), 3),
            (vec![1, 1, -1], qi(2), 3),
            (vec![1, 1, 1, 1], qi(2), 4),
            (vec![1, 1, 1, -1], qi(3), 4),
            (vec![1, 1, -1, 1], q(1, 2), 4),
            (vec![1, 1, -1, -1], q(1, 2), 4),
            (vec![1, 1, 1, 1], q(1, 2), 3),
            (vec![1, 1, -1, 1], qi(2), 3),
            // Transported patterns: negation (e1 = -1) and exchange (e2 = -1).
            (vec![-1, 1, -1], q(1, 2), 3),
            (vec![1, -1, -1], q(1, 2), 3),
            (vec![-1, -1, 1], q(1, 2), 3),
            (vec![1, -1, -1, 1], qi(2), 4),
        ];
        for (pat, alpha, want_k) in cases {
            let d = pat.len();
            let qq = fixed_query(d, d, &pat, Mode::Sr);
            let rep = find_violation(&alpha, &qq, &c)
                .unwrap_or_else(|e| panic!("pattern {pat:?} alpha {alpha}: {e}"));
            match &rep.violation {
                ViolationClaim::MinorSign {
                    k,
                    required_sign,
                    certified_sign,
                    ..
                } => {
                    assert_eq!(*k, want_k, "pattern {pat:?}");
                    assert_eq!(*certified_sign, -*required_sign, "pattern {pat:?}");
                }
                other => panic!("pattern {pat:?}: unexpected claim {other:?}"),
            }
            verify_report(&rep, &c).expect("reverification");
        }
        // Negative exponents: the zero matrix refutes everything.
        let rep = find_violation(&qi(-1), &fixed_query(2, 2, &[1, 1], Mode::Sr), &c).expect("zero");
        assert!(matches!(
            rep.violation,
            ViolationClaim::UndefinedEntry { .. }
        ));
        verify_report(&rep, &c).expect("reverification");
        // d >= 5 zero-pads a smaller regime witness.
        let rep = find_violation(&qi(2), &fixed_query(5, 5, &[1, 1, 1, 1, -1], Mode::Sr), &c)
            .expect("padded");
        assert_eq!(rep.source.rows, 5);
        verify_report(&rep, &c).expect("reverification");
    }

    #[test]
    fn fixed_ssr_violations_route_by_shape_and_regime() {
        let c = ctx();
        // alpha = 0 and alpha < 0.
        let rep = find_violation(&qi(0), &fixed_query(2, 3, &[1, -1], Mode::Ssr), &c).expect("a0");
        assert!(matches!(rep.violation, ViolationClaim::MinorZero { k: 2, .. }));
        assert_eq!(rep.source_mode, "ssr");
        verify_report(&rep, &c).expect("reverify a0");
        let rep =
            find_violation(&qi(-1), &fixed_query(3, 3, &[1, 1, 1], Mode::Ssr), &c).expect("aneg");
        match &rep.violation {
            ViolationClaim::MinorSign {
                k: 2,
                required_sign,
                certified_sign,
                ..
            } => assert_eq!(*certified_sign, -*required_sign),
            other => panic!("unexpected {other:?}"),
        }
        verify_report(&rep, &c).expect("reverify aneg");
        // Truncation regimes, direct strict witnesses.
        for (m, n, pat, alpha) in [
            (3, 3, vec![1, 1, 1], q(1, 2)),
            (3, 4, vec![1, 1, 1], q(1, 2)),
            (4, 3, vec![1, 1, 1], q(1, 2)),
            (3, 3, vec![1, 1, -1], qi(2)),
            (3, 4, vec![1, 1, -1], qi(2)),
            (3, 3, vec![-1, 1, 1], qi(2)),
        ] {
            let rep = find_violation(&alpha, &fixed_query(m, n, &pat, Mode::Ssr), &c)
                .unwrap_or_else(|e| panic!("{m}x{n} {pat:?}: {e}"));
            assert_eq!(rep.source_mode, "ssr", "{m}x{n} {pat:?}");
            assert!(
                matches!(rep.violation, ViolationClaim::MinorSign { k: 3, .. }),
                "{m}x{n} {pat:?}"
            );
            verify_report(&rep, &c).expect("reverify truncation");
        }
        // All four 4x4 borders.
        for (pat, alpha, fam) in [
            (vec![1, 1, 1, 1], q(1, 2), WitnessFamilyId::SsrBorderEqPlus),
            (vec![1, 1, 1, -1], q(1, 2), WitnessFamilyId::SsrBorderEqMinus),
            (vec![1, 1, -1, 1], qi(2), WitnessFamilyId::SsrBorderNeqPlus),
            (vec![1, 1, -1, -1], qi(2), WitnessFamilyId::SsrBorderNeqMinus),
        ] {
            let rep = find_violation(&alpha, &fixed_query(4, 4, &pat, Mode::Ssr), &c)
                .unwrap_or_else(|e| panic!("border {pat:?}: {e}"));
            assert_eq!(rep.family, Some(fam), "border {pat:?}");
            assert_eq!(rep.source_mode, "ssr");
            verify_report(&rep, &c).expect("reverify border");
        }
        // Complementary sides and larger shapes: closure bridge.
        for (m, n, pat, alpha) in [
            (4, 4, vec![1, 1, -1, 1], q(1, 2)),
            (4, 4, vec![1, 1, 1, 1], qi(3)),
            (3, 5, vec![1, 1, 1], q(1, 2)),
            (5, 5, vec![1, 1, 1, 1, 1], q(1, 2)),
        ] {
            let rep = find_violation(&alpha, &fixed_query(m, n, &pat, Mode::Ssr), &c)
                .unwrap_or_else(|e| panic!("bridge {m}x{n}: {e}"));
            assert_eq!(rep.source_mode, "sr", "bridge {m}x{n}");
            assert!(rep.construction.starts_with("closure bridge"));
            verify_report(&rep, &c).expect("reverify bridge");
        }
    }

    #[test]
    fn allsign_sr_violations_produce_opposite_minors() {
        let c = ctx();
        for (m, n, alpha, s1, s2) in [
            (4, 4, q(1, 2), -1i8, 1i8),
            (4, 4, qi(2), 1, -1),
            (3, 5, q(1, 2), -1, 1),
            (5, 3, qi(2), 1, -1),
            (4, 6, qi(3), 1, -1),
        ] {
            let rep = find_violation(&alpha, &all_query(m, n, Mode::Sr), &c)
                .unwrap_or_else(|e| panic!("{m}x{n} at {}: {e}", format_rational(&alpha)));
            match &rep.violation {
                ViolationClaim::OppositeMinors {
                    k: 3,
                    first_sign,
                    second_sign,
                    ..
                } => {
                    assert_eq!((*first_sign, *second_sign), (s1, s2), "{m}x{n}");
                }
                other => panic!("{m}x{n}: unexpected {other:?}"),
            }
            verify_report(&rep, &c).expect("reverify");
        }
        let rep = find_violation(&qi(-1), &all_query(3, 3, Mode::Sr), &c).expect("neg");
        assert!(matches!(
            rep.violation,
            ViolationClaim::UndefinedEntry { .. }
        ));
    }

    #[test]
    fn allsign_ssr_brackets_meet_the_width_tolerance() {
        let c = ctx();
        let tol = 1e-10;
        for alpha in [qi(-1), q(1, 2), qi(2)] {
            let rep = find_violation(&alpha, &all_query(3, 3, Mode::Ssr), &c)
                .unwrap_or_else(|e| panic!("3x3 at {}: {e}", format_rational(&alpha)));
            match &rep.violation {
                ViolationClaim::SignChangeBracket {
                    width,
                    sign_lo,
                    sign_hi,
                    k: 3,
                    ..
                } => {
                    assert!(*width <= tol, "width {width} at {}", format_rational(&alpha));
                    assert_eq!(sign_lo * sign_hi, -1);
                }
                other => panic!("unexpected {other:?}"),
            }
            assert_eq!(rep.source_mode, "ssr");
            verify_report(&rep, &c).expect("reverify bracket");
        }
        // Deep shape for the negative exponent; bridge for positive sides.
        let rep = find_violation(&qi(-1), &all_query(4, 5, Mode::Ssr), &c).expect("deep");
        assert_eq!(rep.family, Some(WitnessFamilyId::AllsignSsrDeep));
        verify_report(&rep, &c).expect("reverify deep");
        let rep = find_violation(&q(1, 2), &all_query(4, 4, Mode::Ssr), &c).expect("bridge");
        assert_eq!(rep.source_mode, "sr");
        // alpha = 0 at any shape.
        let rep = find_violation(&qi(0), &all_query(4, 4, Mode::Ssr), &c).expect("zero");
        assert!(matches!(rep.violation, ViolationClaim::MinorZero { .. }));
        // The carved-out regime reports honestly.
        assert!(matches!(
            find_violation(&qi(-1), &all_query(6, 6, Mode::Ssr), &c),
            Err(WitnessError::UnsupportedQuery(_))
        ));
    }

    #[test]
    fn signum_reports_hold_exactly() {
        let c = ctx();
        let rep = signum_report(3, 4, &c).expect("3x4");
        assert!(matches!(
            rep.violation,
            ViolationClaim::OppositeMinors { k: 3, .. }
        ));
        verify_report(&rep, &c).expect("reverify 3x4");
        let rep = signum_report(4, 4, &c).expect("padded");
        verify_report(&rep, &c).expect("reverify padded");
        let rep = signum_fixed_report(&c).expect("fixed");
        assert!(matches!(
            rep.violation,
            ViolationClaim::MinorSign { k: 3, .. }
        ));
        verify_report(&rep, &c).expect("reverify fixed");
    }

    #[test]
    fn canonical_reports_exist_for_every_family() {
        let c = ctx();
        for &id in WitnessFamilyId::all() {
            let rep = canonical_report(id, &FamilyParams::default(), &c)
                .unwrap_or_else(|e| panic!("{id}: {e}"));
            verify_report(&rep, &c).unwrap_or_else(|e| panic!("{id} reverify: {e}"));
        }
    }

    #[test]
    fn reports_serialize_with_tagged_claims() {
        let c = ctx();
        let rep = find_violation(&q(1, 2), &fixed_query(3, 3, &[1, 1, 1], Mode::Sr), &c)
            .expect("report");
        let json = serde_json::to_string(&rep).expect("serialize");
        assert!(json.contains("\"kind\":\"minor-sign\""));
        assert!(json.contains("\"family\":\"singular-3x3\""));
    }

    #[test]
    fn pattern_normalization_undoes_itself() {
        let pats = [
            vec![1, 1, 1],
            vec![-1, 1, -1],
            vec![1, -1, 1],
            vec![-1, -1, -1],
            vec![1, -1, -1, 1],
            vec![-1, 1, 1, -1, 1],
        ];
        for p in pats {
            let eps = SignPattern(p);
            let (base, neg, ex) = normalize_pattern(&eps);
            assert_eq!(base.eps(1), 1);
            if base.d() >= 2 {
                assert_eq!(base.eps(2), 1);
            }
            // Reapply the transports to the base pattern and recover eps.
            let mut back = base;
            if ex {
                back = back.exchange();
            }
            if neg {
                back = back.negate();
            }
            assert_eq!(back, eps);
        }
    }
}
