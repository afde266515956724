//! Matrices over exact scalars: minors, sign-regularity detection, and the
//! standard transforms (column exchange, negation, diagonal scaling,
//! normalization, zero-padding).
//!
//! # Conventions
//!
//! * Indices are 0-based everywhere, including JSON reports.
//! * A sign pattern `ε = (ε₁, …, ε_d)` for an `m×n` matrix has length
//!   `d = min(m, n)`; `ε_k` constrains the `k×k` minors. Patterns render as
//!   compact strings of `+`/`-`, e.g. `"++-"`.
//! * Minor lists are ordered lexicographically: row sets in lexicographic
//!   order, and for each row set, column sets in lexicographic order. "First
//!   violating minor" always refers to this order, making every detection
//!   verdict deterministic.

use crate::interval::{CertCtx, Iv};
use crate::rat::{format_rational, Q};
use crate::value::{SignVerdict, Value};
use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Errors from matrix construction and transforms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatError {
    #[error("entry count {got} does not match shape {m}x{n}")]
    ShapeMismatch { m: usize, n: usize, got: usize },
    #[error("operation requires a square matrix, got {m}x{n}")]
    NotSquare { m: usize, n: usize },
    #[error("operation requires a 3x3 matrix, got {m}x{n}")]
    Not3x3 { m: usize, n: usize },
    #[error("entry ({i},{j}) must be nonzero and invertible for this transform")]
    NonInvertibleEntry { i: usize, j: usize },
    #[error("target shape {m}x{n} smaller than source {sm}x{sn}")]
    PadShrinks { m: usize, n: usize, sm: usize, sn: usize },
    #[error("sign pattern length {got} does not match d=min(m,n)={d}")]
    PatternLength { d: usize, got: usize },
    #[error("sign of minor {0:?} undetermined at the precision cap")]
    UndeterminedSign(MinorWitness),
    #[error("diagonal scaling requires strictly positive diagonal entries")]
    NonPositiveDiagonal,
}

/// A sign pattern `(ε₁, …, ε_d)` with entries `±1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern(pub Vec<i8>);

impl SignPattern {
    pub fn all_plus(d: usize) -> SignPattern {
        SignPattern(vec![1; d])
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    /// `ε_k` with the mathematical 1-based index `k`.
    pub fn eps(&self, k: usize) -> i8 {
        self.0[k - 1]
    }

    /// Pattern of the column-exchanged matrix `A·P_n`: `ε_k ↦ (−1)^⌊k/2⌋ ε_k`.
    pub fn exchange(&self) -> SignPattern {
        SignPattern(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| {
                    let k = i + 1;
                    if (k / 2) % 2 == 1 {
                        -e
                    } else {
                        e
                    }
                })
                .collect(),
        )
    }

    /// Pattern of the negated matrix `−A`: `ε_k ↦ (−1)^k ε_k`.
    pub fn negate(&self) -> SignPattern {
        SignPattern(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| if (i + 1) % 2 == 1 { -e } else { e })
                .collect(),
        )
    }

    pub fn truncated(&self, d: usize) -> SignPattern {
        SignPattern(self.0[..d].to_vec())
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", if s >= 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

impl FromStr for SignPattern {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        for ch in s.chars() {
            match ch {
                '+' => out.push(1),
                '-' => out.push(-1),
                ',' | ' ' | '(' | ')' => {}
                _ => return Err(format!("invalid sign pattern character {ch:?} in {s:?}")),
            }
        }
        if out.is_empty() {
            return Err(format!("empty sign pattern {s:?}"));
        }
        Ok(SignPattern(out))
    }
}

impl Serialize for SignPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Location and certified sign of one minor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorWitness {
    pub k: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(flatten)]
    pub verdict: SignVerdict,
    /// Exact symbolic form of the minor value, when computed symbolically.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

/// One minor with its exact value, as returned by [`Matrix::all_minors`].
#[derive(Debug, Clone)]
pub struct Minor {
    pub k: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Value,
}

/// Verdict of checking one fixed pattern against all minors.
#[derive(Debug, Clone, PartialEq)]
pub enum SrOutcome {
    /// Certified: every minor satisfies the required sign condition.
    Holds,
    /// Certified counterexample: this minor violates the condition.
    Fails(MinorWitness),
    /// Neither certified: a minor's sign could not be separated from zero at
    /// the precision cap (exact zeros are always recognized, so this can only
    /// happen for genuinely nonzero, adversarially small values).
    Undetermined(MinorWitness),
}

impl SrOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, SrOutcome::Holds)
    }

    pub fn witness(&self) -> Option<&MinorWitness> {
        match self {
            SrOutcome::Holds => None,
            SrOutcome::Fails(w) | SrOutcome::Undetermined(w) => Some(w),
        }
    }
}

/// Report of strict sign-regularity detection.
#[derive(Debug, Clone, Serialize)]
pub struct SsrReport {
    pub is_ssr: bool,
    /// The unique strict pattern when `is_ssr`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<SignPattern>,
    /// First (lexicographic) minor incompatible with strictness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_minor: Option<MinorWitness>,
}

/// Per-order sign options compatible with the (non-strict) SR condition.
#[derive(Debug, Clone, Serialize)]
pub struct LevelOptions {
    pub k: usize,
    pub allow_plus: bool,
    pub allow_minus: bool,
}

/// All sign patterns a matrix is SR for, order by order.
#[derive(Debug, Clone, Serialize)]
pub struct PatternConstraints {
    pub per_level: Vec<LevelOptions>,
}

impl PatternConstraints {
    /// True when at least one full pattern is compatible.
    pub fn is_sr_any(&self) -> bool {
        self.per_level.iter().all(|l| l.allow_plus || l.allow_minus)
    }

    /// Enumerates all compatible patterns (cartesian product of level options).
    pub fn patterns(&self) -> Vec<SignPattern> {
        let mut acc: Vec<Vec<i8>> = vec![Vec::new()];
        for level in &self.per_level {
            let mut opts = Vec::new();
            if level.allow_plus {
                opts.push(1i8);
            }
            if level.allow_minus {
                opts.push(-1i8);
            }
            if opts.is_empty() {
                return Vec::new();
            }
            let mut next = Vec::with_capacity(acc.len() * opts.len());
            for prefix in &acc {
                for &o in &opts {
                    let mut p = prefix.clone();
                    p.push(o);
                    next.push(p);
                }
            }
            acc = next;
        }
        acc.into_iter().map(SignPattern).collect()
    }
}

/// Zero-pattern consistency report for TN₂-type matrices.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroPatternReport {
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending_entry: Option<(usize, usize)>,
}

/// An `m×n` matrix over exact scalars, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    m: usize,
    n: usize,
    data: Vec<Value>,
}

impl Matrix {
    pub fn from_values(m: usize, n: usize, data: Vec<Value>) -> Result<Matrix, MatError> {
        if data.len() != m * n {
            return Err(MatError::ShapeMismatch {
                m,
                n,
                got: data.len(),
            });
        }
        Ok(Matrix { m, n, data })
    }

    pub fn from_rationals(m: usize, n: usize, data: Vec<Q>) -> Result<Matrix, MatError> {
        Matrix::from_values(m, n, data.into_iter().map(Value::from_q).collect())
    }

    /// Builds from integer rows; panics on ragged input (test convenience).
    pub fn from_int_rows(rows: &[&[i64]]) -> Matrix {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            assert_eq!(r.len(), n, "ragged rows");
            data.extend(r.iter().map(|&x| Value::from_int(x)));
        }
        Matrix { m, n, data }
    }

    /// Builds from rational rows; panics on ragged input (test convenience).
    pub fn from_q_rows(rows: Vec<Vec<Q>>) -> Matrix {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            assert_eq!(r.len(), n, "ragged rows");
            data.extend(r.into_iter().map(Value::from_q));
        }
        Matrix { m, n, data }
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> Value) -> Matrix {
        let mut data = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { m, n, data }
    }

    pub fn zero(m: usize, n: usize) -> Matrix {
        Matrix {
            m,
            n,
            data: vec![Value::zero(); m * n],
        }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    /// `d = min(m, n)`, the number of minor orders.
    pub fn d(&self) -> usize {
        self.m.min(self.n)
    }

    pub fn at(&self, i: usize, j: usize) -> &Value {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Value) {
        self.data[i * self.n + j] = v;
    }

    /// All entries as rationals, if every entry is rational.
    pub fn as_rational_entries(&self) -> Option<Vec<Q>> {
        self.data.iter().map(|v| v.as_rational()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, self.m, |i, j| self.at(j, i).clone())
    }

    pub fn negated(&self) -> Matrix {
        Matrix {
            m: self.m,
            n: self.n,
            data: self.data.iter().map(|v| v.neg()).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.at(rows[i], cols[j]).clone()
        })
    }

    /// Entry strings for serialization: exact rationals as `p/q`, radicals in
    /// symbolic display form.
    pub fn entry_strings(&self) -> Vec<String> {
        self.data
            .iter()
            .map(|v| match v.as_rational() {
                Some(q) => format_rational(&q),
                None => v.to_string(),
            })
            .collect()
    }

    // ------------------------------------------------------------------
    // Determinants and minors
    // ------------------------------------------------------------------

    /// Exact determinant (square). Rational matrices use exact Gaussian
    /// elimination; radical-valued matrices expand symbolically.
    pub fn det(&self) -> Value {
        assert_eq!(self.m, self.n, "det requires square");
        if let Some(qs) = self.as_rational_entries() {
            return Value::from_q(det_rational(&qs, self.n));
        }
        det_symbolic(self)
    }

    /// All `k×k` minors with exact values, lexicographic in (rows, cols).
    pub fn all_minors(&self, k: usize) -> Vec<Minor> {
        assert!(k >= 1 && k <= self.d(), "minor order out of range");
        if let Some(qs) = self.as_rational_entries() {
            let levels = minors_dp(&qs, self.m, self.n, k, q_ring());
            return collect_level(self, k, &levels[k - 1], Value::from_q);
        }
        let vals: Vec<Value> = self.data.clone();
        let levels = minors_dp(&vals, self.m, self.n, k, value_ring());
        collect_level(self, k, &levels[k - 1], |v| v)
    }

    /// Signs of all minors of all orders `1..=d`, computed in the cheapest
    /// sound lane (exact rational / interval with exact fallback), streamed to
    /// the visitor in lexicographic order per level. The visitor returns
    /// `false` to stop early.
    fn scan_minor_signs(
        &self,
        ctx: &CertCtx,
        max_k: usize,
        mut visit: impl FnMut(usize, &[usize], &[usize], SignVerdict) -> bool,
    ) {
        if let Some(qs) = self.as_rational_entries() {
            let levels = minors_dp(&qs, self.m, self.n, max_k, q_ring());
            for (ki, level) in levels.iter().enumerate() {
                let k = ki + 1;
                for ((rows, cols), v) in level_iter(self, k, level) {
                    let verdict = sign_of_q(v);
                    if !visit(k, &rows, &cols, verdict) {
                        return;
                    }
                }
            }
            return;
        }
        // Interval lane with exact symbolic fallback for straddlers.
        let prec = ctx.bits;
        let ivs: Vec<Iv> = self.data.iter().map(|v| v.enclose(prec)).collect();
        let levels = minors_dp(&ivs, self.m, self.n, max_k, iv_ring());
        for (ki, level) in levels.iter().enumerate() {
            let k = ki + 1;
            for ((rows, cols), iv) in level_iter(self, k, level) {
                let verdict = match iv.sign() {
                    Some(1) => SignVerdict::Positive,
                    Some(-1) => SignVerdict::Negative,
                    _ => {
                        // Exact fallback: symbolic minor decides zero/nonzero;
                        // certified_sign escalates precision for nonzero values.
                        let sub = self.submatrix(&rows, &cols);
                        det_symbolic(&sub).certified_sign(ctx)
                    }
                };
                if !visit(k, &rows, &cols, verdict) {
                    return;
                }
            }
        }
    }

    // ------------------------------------------------------------------
    // Sign-regularity detection
    // ------------------------------------------------------------------

    /// Detects strict sign-regularity: every minor of order `k` nonzero with
    /// one common sign `ε_k`. Deterministic: the reported violating minor is
    /// the lexicographically first failure.
    pub fn detect_ssr(&self, ctx: &CertCtx) -> SsrReport {
        let d = self.d();
        let mut pattern = Vec::with_capacity(d);
        let mut violation: Option<MinorWitness> = None;
        self.scan_minor_signs(ctx, d, |k, rows, cols, verdict| {
            let expected = pattern.get(k - 1).copied();
            let s = verdict.as_i8();
            let ok = match (expected, s) {
                (None, Some(s)) if s != 0 => {
                    pattern.push(s);
                    true
                }
                (Some(e), Some(s)) => s == e,
                _ => false,
            };
            if !ok {
                violation = Some(MinorWitness {
                    k,
                    rows: rows.to_vec(),
                    cols: cols.to_vec(),
                    verdict,
                    value: None,
                });
                return false;
            }
            true
        });
        match violation {
            Some(w) => SsrReport {
                is_ssr: false,
                pattern: None,
                violating_minor: Some(w),
            },
            None => SsrReport {
                is_ssr: true,
                pattern: Some(SignPattern(pattern)),
                violating_minor: None,
            },
        }
    }

    /// Checks the non-strict SR condition for a fixed pattern: every `k×k`
    /// minor `M` satisfies `ε_k · M ≥ 0`.
    pub fn check_sr_with(&self, eps: &SignPattern, ctx: &CertCtx) -> Result<SrOutcome, MatError> {
        self.check_pattern(eps, ctx, false)
    }

    /// Checks the strict SSR condition for a fixed pattern: every `k×k`
    /// minor `M` satisfies `ε_k · M > 0`.
    pub fn check_ssr_with(&self, eps: &SignPattern, ctx: &CertCtx) -> Result<SrOutcome, MatError> {
        self.check_pattern(eps, ctx, true)
    }

    fn check_pattern(
        &self,
        eps: &SignPattern,
        ctx: &CertCtx,
        strict: bool,
    ) -> Result<SrOutcome, MatError> {
        let d = self.d();
        if eps.d() != d {
            return Err(MatError::PatternLength { d, got: eps.d() });
        }
        let mut out = SrOutcome::Holds;
        self.scan_minor_signs(ctx, d, |k, rows, cols, verdict| {
            let want = eps.eps(k);
            let fine = match verdict.as_i8() {
                Some(0) => !strict,
                Some(s) => s == want,
                None => false,
            };
            if !fine {
                let w = MinorWitness {
                    k,
                    rows: rows.to_vec(),
                    cols: cols.to_vec(),
                    verdict: verdict.clone(),
                    value: None,
                };
                out = if verdict.as_i8().is_some() {
                    SrOutcome::Fails(w)
                } else {
                    SrOutcome::Undetermined(w)
                };
                return false;
            }
            true
        });
        Ok(out)
    }

    /// True iff the SR condition for `eps` is positively certified.
    pub fn is_sr_with(&self, eps: &SignPattern, ctx: &CertCtx) -> bool {
        self.check_sr_with(eps, ctx).map_or(false, |o| o.holds())
    }

    /// True iff the SSR condition for `eps` is positively certified.
    pub fn is_ssr_with(&self, eps: &SignPattern, ctx: &CertCtx) -> bool {
        self.check_ssr_with(eps, ctx).map_or(false, |o| o.holds())
    }

    /// Computes, order by order, which signs are compatible with the
    /// non-strict SR condition (both signs when all minors of an order
    /// vanish; none when both strict signs occur).
    pub fn compatible_patterns(&self, ctx: &CertCtx) -> Result<PatternConstraints, MatError> {
        let d = self.d();
        let mut has_pos = vec![false; d];
        let mut has_neg = vec![false; d];
        let mut undet: Option<MinorWitness> = None;
        self.scan_minor_signs(ctx, d, |k, rows, cols, verdict| match verdict.as_i8() {
            Some(1) => {
                has_pos[k - 1] = true;
                true
            }
            Some(-1) => {
                has_neg[k - 1] = true;
                true
            }
            Some(_) => true,
            None => {
                undet = Some(MinorWitness {
                    k,
                    rows: rows.to_vec(),
                    cols: cols.to_vec(),
                    verdict,
                    value: None,
                });
                false
            }
        });
        if let Some(w) = undet {
            return Err(MatError::UndeterminedSign(w));
        }
        Ok(PatternConstraints {
            per_level: (0..d)
                .map(|i| LevelOptions {
                    k: i + 1,
                    allow_plus: !has_neg[i],
                    allow_minus: !has_pos[i],
                })
                .collect(),
        })
    }

    // ------------------------------------------------------------------
    // Transforms
    // ------------------------------------------------------------------

    /// Reverses the column order (`A ↦ A·P_n`) and returns the induced map on
    /// sign patterns: order `k` minors change sign by `(−1)^⌊k/2⌋`.
    pub fn exchange_conjugate(&self) -> (Matrix, Vec<i8>) {
        let out = Matrix::from_fn(self.m, self.n, |i, j| self.at(i, self.n - 1 - j).clone());
        let signs = (1..=self.d())
            .map(|k| if (k / 2) % 2 == 1 { -1 } else { 1 })
            .collect();
        (out, signs)
    }

    /// `E·A·F` for strictly positive rational diagonals `E = diag(e)`,
    /// `F = diag(f)`. Positive diagonal scaling preserves every sign-regularity
    /// class, which is what makes it usable for normalization and for
    /// enriching generated families.
    pub fn diagonal_scale(&self, e: &[Q], f: &[Q]) -> Result<Matrix, MatError> {
        if e.len() != self.m || f.len() != self.n {
            return Err(MatError::ShapeMismatch {
                m: self.m,
                n: self.n,
                got: e.len().max(f.len()),
            });
        }
        if e.iter().chain(f.iter()).any(|x| !x.is_positive()) {
            return Err(MatError::NonPositiveDiagonal);
        }
        Ok(Matrix::from_fn(self.m, self.n, |i, j| {
            self.at(i, j).scale(&(&e[i] * &f[j]))
        }))
    }

    /// Normalizes a 3×3 matrix with nonzero first row and first column to the
    /// form `[[1,1,1],[1,x₁,x₂],[1,x₃,x₄]]` by an invertible diagonal
    /// equivalence `E·A·F` with `E = diag(1/a₀₀, 1/a₁₀, 1/a₂₀)` and
    /// `F = diag(1, a₀₀/a₀₁, a₀₀/a₀₂)`. Returns the normalized matrix and
    /// `(x₁, x₂, x₃, x₄)`.
    pub fn normalize_3x3(&self) -> Result<(Matrix, [Value; 4]), MatError> {
        if self.m != 3 || self.n != 3 {
            return Err(MatError::Not3x3 { m: self.m, n: self.n });
        }
        let inv = |i: usize, j: usize| -> Result<Value, MatError> {
            self.at(i, j)
                .inverse()
                .ok_or(MatError::NonInvertibleEntry { i, j })
        };
        let e = [inv(0, 0)?, inv(1, 0)?, inv(2, 0)?];
        let a00 = self.at(0, 0).clone();
        let f = [Value::one(), a00.mul(&inv(0, 1)?), a00.mul(&inv(0, 2)?)];
        let out = Matrix::from_fn(3, 3, |i, j| e[i].mul(self.at(i, j)).mul(&f[j]));
        let xs = [
            out.at(1, 1).clone(),
            out.at(1, 2).clone(),
            out.at(2, 1).clone(),
            out.at(2, 2).clone(),
        ];
        Ok((out, xs))
    }

    /// Zero-pattern consistency required of TN₂ matrices: a zero entry must
    /// sit in an all-zero southwest block, an all-zero northeast block, an
    /// all-zero row, or an all-zero column. (Zero tests are exact.)
    pub fn tn2_zero_pattern_check(&self) -> ZeroPatternReport {
        let zero = |i: usize, j: usize| self.at(i, j).is_zero();
        for i in 0..self.m {
            for j in 0..self.n {
                if !zero(i, j) {
                    continue;
                }
                let sw = (i..self.m).all(|k| (0..=j).all(|l| zero(k, l)));
                let ne = (0..=i).all(|k| (j..self.n).all(|l| zero(k, l)));
                let row = (0..self.n).all(|l| zero(i, l));
                let col = (0..self.m).all(|k| zero(k, j));
                if !(sw || ne || row || col) {
                    return ZeroPatternReport {
                        consistent: false,
                        offending_entry: Some((i, j)),
                    };
                }
            }
        }
        ZeroPatternReport {
            consistent: true,
            offending_entry: None,
        }
    }

    /// Embeds the matrix in the top-left corner of an `m×n` zero matrix.
    pub fn pad_with_zeros(&self, m: usize, n: usize) -> Result<Matrix, MatError> {
        if m < self.m || n < self.n {
            return Err(MatError::PadShrinks {
                m,
                n,
                sm: self.m,
                sn: self.n,
            });
        }
        let mut out = Matrix::zero(m, n);
        for i in 0..self.m {
            for j in 0..self.n {
                out.set(i, j, self.at(i, j).clone());
            }
        }
        Ok(out)
    }
}

// ----------------------------------------------------------------------
// Generic minor dynamic programming
// ----------------------------------------------------------------------

/// Minimal ring interface for the minor DP, instantiated with exact
/// rationals, symbolic values, and intervals.
struct Ring<T> {
    zero: fn() -> T,
    add: fn(&T, &T) -> T,
    sub: fn(&T, &T) -> T,
    mul: fn(&T, &T) -> T,
}

fn q_ring() -> Ring<Q> {
    Ring {
        zero: Q::zero,
        add: |a, b| a + b,
        sub: |a, b| a - b,
        mul: |a, b| a * b,
    }
}

fn value_ring() -> Ring<Value> {
    Ring {
        zero: Value::zero,
        add: Value::add,
        sub: Value::sub,
        mul: Value::mul,
    }
}

fn iv_ring() -> Ring<Iv> {
    Ring {
        zero: || Iv::zero(8),
        add: Iv::add,
        sub: Iv::sub,
        mul: Iv::mul,
    }
}

type LevelMap<T> = HashMap<(u64, u64), T>;

/// Computes all minors of orders `1..=max_k` by expanding along the last row
/// of each row set, reusing the previous order's minors. Returns one map per
/// order, keyed by (row bitmask, column bitmask).
fn minors_dp<T: Clone>(
    entries: &[T],
    m: usize,
    n: usize,
    max_k: usize,
    ring: Ring<T>,
) -> Vec<LevelMap<T>> {
    let mut levels: Vec<LevelMap<T>> = Vec::with_capacity(max_k);
    let mut first = LevelMap::new();
    for i in 0..m {
        for j in 0..n {
            first.insert((1u64 << i, 1u64 << j), entries[i * n + j].clone());
        }
    }
    levels.push(first);
    for k in 2..=max_k {
        let prev = &levels[k - 2];
        let mut cur = LevelMap::new();
        for rows in (0..m).combinations(k) {
            let rmask: u64 = rows.iter().map(|&i| 1u64 << i).sum();
            let last = *rows.last().unwrap();
            let rprev = rmask & !(1u64 << last);
            for cols in (0..n).combinations(k) {
                let cmask: u64 = cols.iter().map(|&j| 1u64 << j).sum();
                let mut acc = (ring.zero)();
                for (idx, &c) in cols.iter().enumerate() {
                    let term = (ring.mul)(&entries[last * n + c], &prev[&(rprev, cmask & !(1u64 << c))]);
                    // Cofactor sign: the last row sits at position k-1; the
                    // column c at position idx.
                    if (k - 1 + idx) % 2 == 0 {
                        acc = (ring.add)(&acc, &term);
                    } else {
                        acc = (ring.sub)(&acc, &term);
                    }
                }
                cur.insert((rmask, cmask), acc);
            }
        }
        levels.push(cur);
    }
    levels
}

/// Iterates a DP level in lexicographic (rows, cols) order.
fn level_iter<'a, T>(
    a: &Matrix,
    k: usize,
    level: &'a LevelMap<T>,
) -> impl Iterator<Item = ((Vec<usize>, Vec<usize>), &'a T)> {
    let m = a.rows();
    let n = a.cols();
    (0..m).combinations(k).flat_map(move |rows| {
        let rmask: u64 = rows.iter().map(|&i| 1u64 << i).sum();
        (0..n).combinations(k).map(move |cols| {
            let cmask: u64 = cols.iter().map(|&j| 1u64 << j).sum();
            ((rows.clone(), cols), &level[&(rmask, cmask)])
        })
    })
}

fn collect_level<T: Clone>(
    a: &Matrix,
    k: usize,
    level: &LevelMap<T>,
    wrap: impl Fn(T) -> Value,
) -> Vec<Minor> {
    level_iter(a, k, level)
        .map(|((rows, cols), v)| Minor {
            k,
            rows,
            cols,
            value: wrap(v.clone()),
        })
        .collect()
}

fn sign_of_q(v: &Q) -> SignVerdict {
    if v.is_zero() {
        SignVerdict::Zero
    } else if v.is_positive() {
        SignVerdict::Positive
    } else {
        SignVerdict::Negative
    }
}

/// Exact determinant of a rational matrix by Gaussian elimination with exact
/// pivoting.
fn det_rational(entries: &[Q], n: usize) -> Q {
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| entries[i * n..(i + 1) * n].to_vec())
        .collect();
    let mut det = Q::from_integer(1.into());
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Symbolic determinant by cofactor expansion along the first row (used for
/// radical-valued matrices; sizes stay small).
fn det_symbolic(a: &Matrix) -> Value {
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return Value::one();
    }
    if n == 1 {
        return a.at(0, 0).clone();
    }
    let mut acc = Value::zero();
    let rest_rows: Vec<usize> = (1..n).collect();
    for j in 0..n {
        if a.at(0, j).is_zero() {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let sub = a.submatrix(&rest_rows, &cols);
        let term = a.at(0, j).mul(&det_symbolic(&sub));
        if j % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}
