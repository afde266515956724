//! Exponential sums `F(α) = Σᵢ cᵢ · bᵢ^α` with rational coefficients and
//! positive rational bases.
//!
//! Determinants of Hadamard powers expand into exactly this shape: for a
//! square matrix `A` with positive rational entries,
//! `det(A^∘α) = Σ_σ sgn(σ) · (Π_i a_{i,σ(i)})^α`, one term per permutation,
//! with equal products merged. Root counting (a Descartes bound from the
//! coefficient sign sequence), certified evaluation, Taylor data at `α = 0`,
//! and bisection-based root bracketing together drive the witness searches:
//! a sign change of `F` between two certified evaluations is an exact proof
//! that some `α` in between kills or flips the determinant.

use crate::interval::{pow_q_point, CertCtx, Iv};
use crate::matcore::Matrix;
use crate::rat::{format_rational, Q};
use crate::value::{SignVerdict, Value};
use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Maximum matrix size for the permutation expansion (`n! ≤ 720` terms).
pub const MAX_HADAMARD_N: usize = 6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExpSumError {
    #[error("Hadamard determinant expansion requires a square matrix, got {m}x{n}")]
    NotSquare { m: usize, n: usize },
    #[error("matrix size {n} exceeds the permutation-expansion cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("entry ({i},{j}) must be a positive rational for the expansion")]
    BadEntry { i: usize, j: usize },
    #[error("empty or inverted interval [{lo}, {hi}]")]
    BadInterval { lo: String, hi: String },
}

/// An exponential sum with strictly positive rational bases, terms sorted by
/// increasing base, coefficients nonzero, equal bases merged.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum {
    terms: Vec<(Q, Q)>, // (coef, base)
}

impl ExpSum {
    /// Builds from raw `(coef, base)` pairs; merges equal bases, drops zero
    /// coefficients. Panics on a non-positive base (internal misuse).
    pub fn from_terms(raw: Vec<(Q, Q)>) -> ExpSum {
        let mut merged: BTreeMap<Q, Q> = BTreeMap::new();
        for (c, b) in raw {
            assert!(b.is_positive(), "exponential-sum base must be positive");
            *merged.entry(b).or_insert_with(Q::zero) += c;
        }
        ExpSum {
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(b, c)| (c, b))
                .collect(),
        }
    }

    /// Expands `det(A^∘α)` over permutations. Requires a square matrix with
    /// positive rational entries and `n ≤ 6`.
    pub fn from_hadamard_det(a: &Matrix) -> Result<ExpSum, ExpSumError> {
        let (m, n) = (a.rows(), a.cols());
        if m != n {
            return Err(ExpSumError::NotSquare { m, n });
        }
        if n > MAX_HADAMARD_N {
            return Err(ExpSumError::TooLarge {
                n,
                cap: MAX_HADAMARD_N,
            });
        }
        let mut entries: Vec<Q> = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                match a.at(i, j).as_rational() {
                    Some(q) if q.is_positive() => entries.push(q),
                    _ => return Err(ExpSumError::BadEntry { i, j }),
                }
            }
        }
        let mut raw = Vec::new();
        for perm in (0..n).permutations(n) {
            let mut prod = Q::one();
            for (i, &j) in perm.iter().enumerate() {
                prod *= &entries[i * n + j];
            }
            let sgn = if permutation_sign(&perm) { Q::one() } else { -Q::one() };
            raw.push((sgn, prod));
        }
        Ok(ExpSum::from_terms(raw))
    }

    pub fn terms(&self) -> &[(Q, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact value as a radical sum at rational `α` (used for certified
    /// signs; exact zeros cancel structurally).
    pub fn value_at(&self, alpha: &Q) -> Value {
        let mut acc = Value::zero();
        for (c, b) in &self.terms {
            let p = Value::rational_pow(b, alpha).expect("positive base");
            acc = acc.add(&p.scale(c));
        }
        acc
    }

    /// Interval evaluation at rational `α`, tightened until the enclosure
    /// width is at most `2^-precision` times the magnitude scale
    /// `Σ |cᵢ| bᵢ^α` (so `precision` bits of the sum are certified).
    pub fn eval(&self, alpha: &Q, precision: u32) -> Iv {
        if self.terms.is_empty() {
            return Iv::zero(precision.max(8));
        }
        let mut working = precision + 16;
        loop {
            let mut sum = Iv::zero(working);
            let mut scale = Iv::zero(working);
            for (c, b) in &self.terms {
                let p = pow_q_point(b, alpha, working);
                sum = sum.add(&p.mul_q(c, working));
                scale = scale.add(&p.mul_q(&c.abs(), working));
            }
            // width(sum) ≤ 2^-precision * scale_hi ?
            let target = {
                let mut t = scale.hi.clone();
                t >>= precision;
                t
            };
            let width = {
                use rug::float::Round;
                let (w, _) =
                    rug::Float::with_val_round(working, &sum.hi - &sum.lo, Round::Up);
                w
            };
            if width <= target || working >= precision + 4096 {
                return sum;
            }
            working *= 2;
        }
    }

    /// Descartes-style bound: the number of real roots of `F` (with
    /// multiplicity) is at most the number of sign changes of the coefficient
    /// sequence ordered by increasing base.
    pub fn descartes_bound(&self) -> usize {
        let mut changes = 0;
        let mut last: Option<bool> = None;
        for (c, _) in &self.terms {
            let pos = c.is_positive();
            if let Some(prev) = last {
                if prev != pos {
                    changes += 1;
                }
            }
            last = Some(pos);
        }
        changes
    }

    /// Taylor data of `F` at `α = 0` up to order `k`: coefficient `j` is
    /// `Σᵢ cᵢ (ln bᵢ)^j / j!`.
    ///
    /// * `j = 0`: the exact rational `Σ cᵢ`.
    /// * `j = 1`: enclosure plus an exact-zero decision via the rational
    ///   identity `Π bᵢ^(cᵢ·L) = 1` (`L` the lcm of coefficient denominators).
    /// * `j ≥ 2`: enclosure only, with the symbolic recipe recorded; no exact
    ///   zero claim is made.
    pub fn taylor_at_zero(&self, k: usize, ctx: &CertCtx) -> Vec<TaylorCoeff> {
        let mut out = Vec::with_capacity(k + 1);
        for j in 0..=k {
            out.push(self.taylor_coeff(j, ctx));
        }
        out
    }

    fn taylor_coeff(&self, j: usize, ctx: &CertCtx) -> TaylorCoeff {
        let recipe = format!(
            "sum over terms of c * ln(b)^{j} / {j}! with (c, b) in {}",
            self.terms
                .iter()
                .map(|(c, b)| format!("({}, {})", format_rational(c), format_rational(b)))
                .join(", ")
        );
        if j == 0 {
            let s: Q = self.terms.iter().map(|(c, _)| c.clone()).sum();
            return TaylorCoeff {
                j,
                exact: Some(format_rational(&s)),
                exact_zero: s.is_zero(),
                enclosure: enclose_to_pair(&Iv::from_q(&s, ctx.bits)),
                recipe,
            };
        }
        let exact_zero = if j == 1 { self.log_combination_is_zero() } else { false };
        let iv = self.taylor_enclosure(j, ctx.bits);
        TaylorCoeff {
            j,
            exact: if exact_zero { Some("0".into()) } else { None },
            exact_zero,
            enclosure: enclose_to_pair(&iv),
            recipe,
        }
    }

    /// Decides `Σ cᵢ ln bᵢ = 0` exactly: with `L = lcm(denom cᵢ)`, the claim
    /// is equivalent to the rational identity `Π bᵢ^(cᵢ·L) = 1`.
    fn log_combination_is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let mut l = num_bigint::BigInt::one();
        for (c, _) in &self.terms {
            l = l.lcm(c.denom());
        }
        let mut prod = Q::one();
        for (c, b) in &self.terms {
            let e = (c * Q::from_integer(l.clone())).to_integer();
            let e32 = match e.to_i32() {
                Some(v) => v,
                None => return false, // exponent too large to decide cheaply: claim nothing
            };
            if b.is_zero() {
                return false;
            }
            prod *= crate::interval::pow_rational_int(b, e32);
        }
        prod.is_one()
    }

    /// Interval enclosure of `Σ cᵢ (ln bᵢ)^j / j!`.
    fn taylor_enclosure(&self, j: usize, prec: u32) -> Iv {
        use rug::float::Round;
        let mut acc = Iv::zero(prec);
        for (c, b) in &self.terms {
            // ln b enclosure
            let br = crate::interval::to_rug_rational(b);
            let (mut lo, _) = rug::Float::with_val_round(prec, &br, Round::Down);
            let (mut hi, _) = rug::Float::with_val_round(prec, &br, Round::Up);
            lo.ln_round(Round::Down);
            hi.ln_round(Round::Up);
            let ln_iv = Iv { lo, hi };
            // (ln b)^j by repeated interval multiplication
            let mut p = Iv::from_q(&Q::one(), prec);
            for _ in 0..j {
                p = p.mul(&ln_iv);
            }
            acc = acc.add(&p.mul_q(c, prec));
        }
        let fact: Q = {
            let mut f = Q::one();
            for i in 1..=j as i64 {
                f *= Q::from_integer(i.into());
            }
            Q::one() / f
        };
        acc.mul_q(&fact, prec)
    }

    /// Certified sign of `F(α)` at rational `α`: exact cancellation yields
    /// `Zero`, otherwise directed intervals at escalating precision.
    pub fn certified_sign(&self, alpha: &Q, ctx: &CertCtx) -> SignVerdict {
        self.value_at(alpha).certified_sign(ctx)
    }

    /// Brackets the sign changes of `F` inside `[lo, hi]` by bisection.
    ///
    /// Strategy: certify signs on a uniform grid, then bisect every adjacent
    /// sign change down to width ≤ `ctx.tol`. An exact root at a sample point
    /// yields the degenerate bracket `[r, r]`. The bracket count never
    /// exceeds [`ExpSum::descartes_bound`] (roots of even multiplicity do not
    /// change sign and are not reported).
    pub fn bracket_roots(&self, lo: &Q, hi: &Q, ctx: &CertCtx) -> Result<Vec<Bracket>, ExpSumError> {
        if lo >= hi {
            return Err(ExpSumError::BadInterval {
                lo: format_rational(lo),
                hi: format_rational(hi),
            });
        }
        const GRID: usize = 64;
        let step = (hi - lo) / Q::from_integer((GRID as i64).into());
        let mut points: Vec<(Q, SignVerdict)> = Vec::with_capacity(GRID + 1);
        for i in 0..=GRID {
            let x = lo + &step * Q::from_integer((i as i64).into());
            let s = self.certified_sign(&x, ctx);
            points.push((x, s));
        }
        let mut out = Vec::new();
        for i in 0..GRID {
            let (xa, sa) = points[i].clone();
            let (xb, sb) = points[i + 1].clone();
            if sa.is_zero() {
                out.push(Bracket {
                    lo: xa.clone(),
                    hi: xa.clone(),
                    sign_lo: SignVerdict::Zero,
                    sign_hi: SignVerdict::Zero,
                });
                continue;
            }
            match (sa.as_i8(), sb.as_i8()) {
                (Some(a), Some(b)) if a != 0 && b != 0 && a != b => {
                    out.push(self.bisect_change(xa, sa, xb, sb, ctx));
                }
                _ => {}
            }
        }
        // The final grid point: an exact root there is a degenerate bracket.
        if let Some((x, s)) = points.last() {
            if s.is_zero() {
                out.push(Bracket {
                    lo: x.clone(),
                    hi: x.clone(),
                    sign_lo: SignVerdict::Zero,
                    sign_hi: SignVerdict::Zero,
                });
            }
        }
        debug_assert!(out.len() <= self.descartes_bound());
        Ok(out)
    }

    fn bisect_change(
        &self,
        mut lo: Q,
        mut s_lo: SignVerdict,
        mut hi: Q,
        mut s_hi: SignVerdict,
        ctx: &CertCtx,
    ) -> Bracket {
        let tol = Q::from_float(ctx.tol).unwrap_or_else(|| crate::rat::q(1, 10_000_000_000));
        while (&hi - &lo) > tol {
            let mid = (&lo + &hi) / Q::from_integer(2.into());
            let sm = self.certified_sign(&mid, ctx);
            match sm.as_i8() {
                Some(0) => {
                    return Bracket {
                        lo: mid.clone(),
                        hi: mid,
                        sign_lo: SignVerdict::Zero,
                        sign_hi: SignVerdict::Zero,
                    };
                }
                Some(s) if Some(s) == s_lo.as_i8() => {
                    lo = mid;
                    s_lo = sm;
                }
                Some(_) => {
                    hi = mid;
                    s_hi = sm;
                }
                None => break, // cannot refine further at the precision cap
            }
        }
        Bracket {
            lo,
            hi,
            sign_lo: s_lo,
            sign_hi: s_hi,
        }
    }
}

impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, b)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}^a", format_rational(c), format_rational(b))?;
        }
        Ok(())
    }
}

impl Serialize for ExpSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (c, b) in &self.terms {
            seq.serialize_element(&serde_json::json!({
                "coef": format_rational(c),
                "base": format_rational(b),
            }))?;
        }
        seq.end()
    }
}

/// One Taylor coefficient of an exponential sum at `α = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct TaylorCoeff {
    pub j: usize,
    /// Exact rational value when available (always for `j = 0`; for `j = 1`
    /// only the exact-zero case is decidable).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub exact_zero: bool,
    /// Directed enclosure `[lo, hi]` as f64 bounds (outward rounded).
    pub enclosure: (f64, f64),
    /// Human-checkable description of the exact quantity.
    pub recipe: String,
}

/// A certified sign-change bracket `[lo, hi]` (degenerate when `lo = hi`:
/// an exact root at that rational point).
#[derive(Debug, Clone, Serialize)]
pub struct Bracket {
    #[serde(serialize_with = "ser_q")]
    pub lo: Q,
    #[serde(serialize_with = "ser_q")]
    pub hi: Q,
    pub sign_lo: SignVerdict,
    pub sign_hi: SignVerdict,
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

fn enclose_to_pair(iv: &Iv) -> (f64, f64) {
    use rug::float::Round;
    (iv.lo.to_f64_round(Round::Down), iv.hi.to_f64_round(Round::Up))
}

/// Parity of a permutation given as an image list: `true` for even.
fn permutation_sign(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut even = true;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            even = !even;
        }
    }
    even
}
