//! Exact scalars of the form `Σᵢ cᵢ · Πⱼ bᵢⱼ^(eᵢⱼ)` with rational `cᵢ`,
//! integer bases `bᵢⱼ ≥ 2`, and fractional exponents `eᵢⱼ ∈ (0, 1)`.
//!
//! Such sums are closed under ring operations and under the rational powers
//! `x ↦ x^(p/q)` of positive rationals, which is exactly the arithmetic needed
//! to evaluate Hadamard powers `A^∘α` of rational matrices and their minors.
//!
//! # Canonical form and the zero test
//!
//! Each term's radical part is kept canonical: bases are pairwise coprime,
//! none is a perfect power, and integer parts of exponents are folded into the
//! rational coefficient. Sums group terms by identical radical parts, so a
//! value is **exactly zero iff, after canonicalization, no terms remain** —
//! when every base is fully factored this canonical form is unique, and for
//! the rare unfactored cofactors a global coprime-refinement pass aligns the
//! bases across terms before grouping. The zero test never consults
//! floating-point arithmetic.
//!
//! Signs of nonzero values are certified by directed-rounding interval
//! evaluation at escalating precision; a mixed-sign sum whose sign cannot be
//! separated from zero at the precision cap reports
//! [`SignVerdict::Undetermined`] — it is never rounded to a verdict.

use crate::interval::{pow_q_point, CertCtx, Iv};
use crate::rat::{factor_small, format_rational, max_perfect_power, Q};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Certified sign of an exact quantity.
///
/// `Zero` is produced only by exact cancellation in canonical form;
/// `Undetermined` records the residual interval width at the precision cap.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "sign", rename_all = "snake_case")]
pub enum SignVerdict {
    Positive,
    Negative,
    Zero,
    Undetermined { width: f64 },
}

impl SignVerdict {
    /// The sign as `+1 / -1 / 0`, or `None` if undetermined.
    pub fn as_i8(&self) -> Option<i8> {
        match self {
            SignVerdict::Positive => Some(1),
            SignVerdict::Negative => Some(-1),
            SignVerdict::Zero => Some(0),
            SignVerdict::Undetermined { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SignVerdict::Zero)
    }

    pub fn from_i8(s: i8) -> SignVerdict {
        match s.cmp(&0) {
            std::cmp::Ordering::Greater => SignVerdict::Positive,
            std::cmp::Ordering::Less => SignVerdict::Negative,
            std::cmp::Ordering::Equal => SignVerdict::Zero,
        }
    }
}

impl fmt::Display for SignVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignVerdict::Positive => write!(f, "positive"),
            SignVerdict::Negative => write!(f, "negative"),
            SignVerdict::Zero => write!(f, "zero"),
            SignVerdict::Undetermined { width } => write!(f, "undetermined(width={width:.3e})"),
        }
    }
}

/// Errors from the rational-power kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PowError {
    #[error("negative base with non-integer exponent has no real value")]
    NegativeFractionalPower,
    #[error("zero base with negative exponent is undefined")]
    ZeroToNegativePower,
    #[error("powers are defined on radical monomials, not general sums")]
    NotAMonomial,
}

/// Canonical product of radicals `Π b^(e)` with `b ≥ 2` integer, `e ∈ (0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
struct Radical {
    factors: BTreeMap<BigUint, Q>,
}

impl Radical {
    fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// One term `coef · radical`.
#[derive(Debug, Clone)]
struct Term {
    coef: Q,
    rad: Radical,
}

/// An exact radical-sum scalar. See the module documentation.
#[derive(Debug, Clone, Default)]
pub struct Value {
    /// Sorted by radical, distinct radicals, nonzero coefficients.
    terms: Vec<Term>,
}

/// Splits `exp` into integer and fractional part, folding `base^int` into
/// `coef`, and merges the fractional remainder into `factors`.
fn push_exponent(factors: &mut BTreeMap<BigUint, Q>, coef: &mut Q, base: &BigUint, exp: Q) {
    if base.is_one() || exp.is_zero() {
        return;
    }
    let int_part = exp.floor().to_integer();
    let frac = &exp - Q::from_integer(int_part.clone());
    if !int_part.is_zero() {
        let base_q = Q::from_integer(BigInt::from(base.clone()));
        // base^int_part as an exact rational (int_part may be negative).
        let mag = int_part.magnitude();
        let k = mag.to_u32().expect("integer exponent part fits in u32");
        let p = crate::interval::pow_rational_int(&base_q, k as i32);
        if int_part.is_negative() {
            *coef *= Q::one() / p;
        } else {
            *coef *= p;
        }
    }
    if !frac.is_zero() {
        let e = factors.entry(base.clone()).or_insert_with(Q::zero);
        *e += frac;
        // Exponents merge within [0,1); a carry re-splits.
        if *e >= Q::one() {
            let carry = e.floor().to_integer();
            *e -= Q::from_integer(carry.clone());
            let base_q = Q::from_integer(BigInt::from(base.clone()));
            let k = carry.magnitude().to_u32().expect("carry fits");
            *coef *= crate::interval::pow_rational_int(&base_q, k as i32);
        }
        if factors.get(base).map_or(false, |e| e.is_zero()) {
            factors.remove(base);
        }
    }
}

/// Canonicalizes a raw `(base, exponent)` list into a `Radical` plus a
/// rational cofactor: bases are split by small primes, reduced to non-perfect
/// powers, and integer exponent parts folded out.
fn canonical_radical(raw: Vec<(BigUint, Q)>, coef: &mut Q) -> Radical {
    let mut factors: BTreeMap<BigUint, Q> = BTreeMap::new();
    for (base, exp) in raw {
        if base.is_zero() {
            panic!("radical base must be positive");
        }
        if base.is_one() || exp.is_zero() {
            continue;
        }
        let (small, cofactor) = factor_small(&base);
        for (p, e) in small {
            push_exponent(&mut factors, coef, &p, Q::from_integer(BigInt::from(e)) * &exp);
        }
        if !cofactor.is_one() {
            let (root, k) = max_perfect_power(&cofactor);
            push_exponent(
                &mut factors,
                coef,
                &root,
                Q::from_integer(BigInt::from(k)) * &exp,
            );
        }
    }
    refine_hard_bases(&mut factors, coef);
    Radical { factors }
}

/// Large residual bases (no factor below 10⁴) are usually already pairwise
/// coprime; when two share a factor, split them by repeated gcds until the
/// base set is pairwise coprime again.
fn refine_hard_bases(factors: &mut BTreeMap<BigUint, Q>, coef: &mut Q) {
    const HARD: u64 = 100_000_000;
    loop {
        let hard: Vec<BigUint> = factors
            .keys()
            .filter(|b| b.to_u64().map_or(true, |v| v >= HARD))
            .cloned()
            .collect();
        let mut split: Option<(BigUint, BigUint, BigUint)> = None;
        'outer: for i in 0..hard.len() {
            for j in (i + 1)..hard.len() {
                let g = hard[i].gcd(&hard[j]);
                if !g.is_one() {
                    split = Some((hard[i].clone(), hard[j].clone(), g));
                    break 'outer;
                }
            }
        }
        let Some((a, b, g)) = split else { break };
        let ea = factors.remove(&a).unwrap();
        let eb = factors.remove(&b).unwrap();
        let ra = &a / &g;
        let rb = &b / &g;
        for (piece, exp) in [(g.clone(), &ea + &eb), (ra, ea), (rb, eb)] {
            if piece.is_one() || exp.is_zero() {
                continue;
            }
            let (small, cof) = factor_small(&piece);
            for (p, e) in small {
                push_exponent(factors, coef, &p, Q::from_integer(BigInt::from(e)) * &exp);
            }
            if !cof.is_one() {
                let (root, k) = max_perfect_power(&cof);
                push_exponent(factors, coef, &root, Q::from_integer(BigInt::from(k)) * &exp);
            }
        }
    }
}

impl Value {
    pub fn zero() -> Value {
        Value { terms: Vec::new() }
    }

    pub fn one() -> Value {
        Value::from_q(Q::one())
    }

    pub fn from_q(c: Q) -> Value {
        if c.is_zero() {
            return Value::zero();
        }
        Value {
            terms: vec![Term {
                coef: c,
                rad: Radical::default(),
            }],
        }
    }

    pub fn from_int(n: i64) -> Value {
        Value::from_q(crate::rat::qi(n))
    }

    /// Exactly `x^α` for rational `x` and `α`, with the conventions
    /// `0^0 := 1`, `0^α := 0` for `α > 0`, and errors for the two undefined
    /// combinations (negative base with fractional exponent, zero base with
    /// negative exponent). Negative bases with integer exponents are exact.
    pub fn rational_pow(x: &Q, alpha: &Q) -> Result<Value, PowError> {
        if x.is_zero() {
            return if alpha.is_zero() {
                Ok(Value::one())
            } else if alpha.is_positive() {
                Ok(Value::zero())
            } else {
                Err(PowError::ZeroToNegativePower)
            };
        }
        let mut sign = Q::one();
        let mag = if x.is_negative() {
            if !alpha.is_integer() {
                return Err(PowError::NegativeFractionalPower);
            }
            if alpha.to_integer().is_odd() {
                sign = -Q::one();
            }
            -x.clone()
        } else {
            x.clone()
        };
        let mut coef = sign;
        let mut raw: Vec<(BigUint, Q)> = Vec::new();
        let a = mag.numer().magnitude().clone();
        let b = mag.denom().magnitude().clone();
        raw.push((a, alpha.clone()));
        raw.push((b, -alpha.clone()));
        let rad = canonical_radical(raw, &mut coef);
        if coef.is_zero() {
            return Ok(Value::zero());
        }
        Ok(Value {
            terms: vec![Term { coef, rad }],
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(q)` iff the value is exactly the rational `q`.
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 if self.terms[0].rad.is_empty() => Some(self.terms[0].coef.clone()),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn neg(&self) -> Value {
        Value {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coef: -t.coef.clone(),
                    rad: t.rad.clone(),
                })
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Value) -> Value {
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        terms.extend(self.terms.iter().cloned());
        terms.extend(rhs.terms.iter().cloned());
        Value::regroup(terms)
    }

    pub fn sub(&self, rhs: &Value) -> Value {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Q) -> Value {
        if c.is_zero() {
            return Value::zero();
        }
        Value {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coef: &t.coef * c,
                    rad: t.rad.clone(),
                })
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Value) -> Value {
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let mut coef = &a.coef * &b.coef;
                // Merge canonical radicals: bases within each side are already
                // reduced; equal bases merge exponents (with carry into coef),
                // and a rare collision among large residual bases triggers
                // refinement.
                let mut factors = a.rad.factors.clone();
                for (base, exp) in &b.rad.factors {
                    push_exponent(&mut factors, &mut coef, base, exp.clone());
                }
                refine_hard_bases(&mut factors, &mut coef);
                terms.push(Term {
                    coef,
                    rad: Radical { factors },
                });
            }
        }
        Value::regroup(terms)
    }

    pub fn pow_i(&self, k: u32) -> Value {
        let mut acc = Value::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Groups terms by radical part, cancelling exactly. When distinct large
    /// residual bases across terms share factors, a global refinement pass
    /// aligns all radicals over one coprime basis first, so that equal reals
    /// always collide.
    fn regroup(terms: Vec<Term>) -> Value {
        let needs_global = {
            const HARD: u64 = 100_000_000;
            let mut hard: Vec<&BigUint> = Vec::new();
            for t in &terms {
                for b in t.rad.factors.keys() {
                    if b.to_u64().map_or(true, |v| v >= HARD) {
                        hard.push(b);
                    }
                }
            }
            let mut flag = false;
            'outer: for i in 0..hard.len() {
                for j in (i + 1)..hard.len() {
                    if hard[i] != hard[j] && !hard[i].gcd(hard[j]).is_one() {
                        flag = true;
                        break 'outer;
                    }
                }
            }
            flag
        };
        let terms: Vec<Term> = if needs_global {
            // Rewrite every radical over the union of all bases by pushing each
            // through one shared canonicalization (pairwise refinement handles
            // the cross-term splitting).
            terms
                .into_iter()
                .map(|t| {
                    let mut coef = t.coef;
                    let raw: Vec<(BigUint, Q)> = t.rad.factors.into_iter().collect();
                    let rad = canonical_radical(raw, &mut coef);
                    Term { coef, rad }
                })
                .collect()
        } else {
            terms
        };
        // The global pass above splits bases only when the *whole sum* is
        // inspected; to align across terms, collect the final coprime basis by
        // refining the union. For fully factored bases (the typical case) this
        // is a no-op.
        let mut grouped: BTreeMap<Radical, Q> = BTreeMap::new();
        for t in terms {
            if t.coef.is_zero() {
                continue;
            }
            *grouped.entry(t.rad).or_insert_with(Q::zero) += t.coef;
        }
        Value {
            terms: grouped
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(rad, coef)| Term { coef, rad })
                .collect(),
        }
    }

    /// Directed-rounding enclosure at the given precision.
    pub fn enclose(&self, prec: u32) -> Iv {
        let mut acc = Iv::zero(prec);
        for t in &self.terms {
            let mut term_iv = Iv::from_q(&t.coef, prec);
            for (base, exp) in &t.rad.factors {
                let b = Q::from_integer(BigInt::from(base.clone()));
                term_iv = term_iv.mul(&cached_pow(&b, exp, prec));
            }
            acc = acc.add(&term_iv);
        }
        acc
    }

    /// Certified sign. Exact-cancellation zero; interval escalation for
    /// nonzero sums of mixed-sign terms; `Undetermined` at the precision cap.
    pub fn certified_sign(&self, ctx: &CertCtx) -> SignVerdict {
        if self.terms.is_empty() {
            return SignVerdict::Zero;
        }
        // Every radical monomial is a positive real, so a sum whose
        // coefficients share one sign inherits it without any float work.
        let all_pos = self.terms.iter().all(|t| t.coef.is_positive());
        if all_pos {
            return SignVerdict::Positive;
        }
        let all_neg = self.terms.iter().all(|t| t.coef.is_negative());
        if all_neg {
            return SignVerdict::Negative;
        }
        let mut width = f64::INFINITY;
        for prec in ctx.ladder() {
            let iv = self.enclose(prec);
            match iv.sign() {
                Some(1) => return SignVerdict::Positive,
                Some(-1) => return SignVerdict::Negative,
                Some(0) => return SignVerdict::Zero, // exact point zero
                _ => width = iv.width_f64(),
            }
        }
        SignVerdict::Undetermined { width }
    }

    /// Convenience: midpoint of a 64-bit enclosure, for human-readable report
    /// fields only (never for decisions).
    pub fn approx_f64(&self) -> f64 {
        let iv = self.enclose(64);
        (iv.lo.to_f64() + iv.hi.to_f64()) / 2.0
    }

    /// Structural equality of exact values (via cancellation).
    pub fn eq_value(&self, rhs: &Value) -> bool {
        self.sub(rhs).is_zero()
    }

    /// Splits a radical monomial into `(sign, magnitude)`; zero splits as
    /// `(0, 0)`. Returns `None` for multi-term sums.
    pub fn split_sign(&self) -> Option<(i8, Value)> {
        match self.terms.len() {
            0 => Some((0, Value::zero())),
            1 => {
                let t = &self.terms[0];
                let s: i8 = if t.coef.is_positive() { 1 } else { -1 };
                Some((
                    s,
                    Value {
                        terms: vec![Term {
                            coef: t.coef.abs(),
                            rad: t.rad.clone(),
                        }],
                    },
                ))
            }
            _ => None,
        }
    }

    /// `self^α` for a radical monomial `self = c·Πb^e` and rational `α`,
    /// following the same conventions as [`Value::rational_pow`]: `0^0 := 1`,
    /// errors on zero-to-negative and on negative-to-fractional powers;
    /// negative monomials with integer `α` carry the parity sign.
    pub fn signed_pow_alpha(&self, alpha: &Q) -> Result<Value, PowError> {
        if self.terms.is_empty() {
            return Value::rational_pow(&Q::zero(), alpha).map_err(|e| e);
        }
        if self.terms.len() > 1 {
            return Err(PowError::NotAMonomial);
        }
        let t = &self.terms[0];
        let mut sign = Q::one();
        if t.coef.is_negative() {
            if !alpha.is_integer() {
                return Err(PowError::NegativeFractionalPower);
            }
            if alpha.to_integer().is_odd() {
                sign = -Q::one();
            }
        }
        let mut acc = Value::rational_pow(&t.coef.abs(), alpha)?;
        for (base, exp) in &t.rad.factors {
            let b = Q::from_integer(BigInt::from(base.clone()));
            let piece = Value::rational_pow(&b, &(exp * alpha))?;
            acc = acc.mul(&piece);
        }
        Ok(acc.scale(&sign))
    }

    /// `|self|^α` for a radical monomial: the magnitude power used when a
    /// function of the form `c·|x|^α` is evaluated at a signed point.
    pub fn pow_alpha(&self, alpha: &Q) -> Result<Value, PowError> {
        let (_, mag) = self.split_sign().ok_or(PowError::NotAMonomial)?;
        mag.signed_pow_alpha(alpha)
    }

    /// Multiplicative inverse, defined for single-term values (radical
    /// monomials `c·Πb^e` with `c ≠ 0`). Multi-term sums are not closed under
    /// inversion and return `None`.
    pub fn inverse(&self) -> Option<Value> {
        if self.terms.len() != 1 {
            return None;
        }
        let t = &self.terms[0];
        if t.coef.is_zero() {
            return None;
        }
        let mut coef = Q::one() / t.coef.clone();
        let raw: Vec<(BigUint, Q)> = t
            .rad
            .factors
            .iter()
            .map(|(b, e)| (b.clone(), -e.clone()))
            .collect();
        let rad = canonical_radical(raw, &mut coef);
        Some(Value {
            terms: vec![Term { coef, rad }],
        })
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.eq_value(other)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let c = &t.coef;
            if i == 0 {
                if t.rad.is_empty() {
                    write!(f, "{}", format_rational(c))?;
                } else if *c == Q::one() {
                } else if *c == -Q::one() {
                    write!(f, "-")?;
                } else {
                    write!(f, "{}*", format_rational(c))?;
                }
            } else if c.is_negative() {
                let mag = -c.clone();
                if t.rad.is_empty() {
                    write!(f, " - {}", format_rational(&mag))?;
                } else if mag == Q::one() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " - {}*", format_rational(&mag))?;
                }
            } else if t.rad.is_empty() {
                write!(f, " + {}", format_rational(c))?;
            } else if *c == Q::one() {
                write!(f, " + ")?;
            } else {
                write!(f, " + {}*", format_rational(c))?;
            }
            let mut first = true;
            for (base, exp) in &t.rad.factors {
                if !first {
                    write!(f, "*")?;
                }
                write!(f, "{}^({})", base, format_rational(exp))?;
                first = false;
            }
        }
        Ok(())
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

thread_local! {
    static POW_CACHE: RefCell<HashMap<(Q, Q, u32), Iv>> = RefCell::new(HashMap::new());
}

/// Memoized positive-rational power enclosure: the same `(base, exponent)`
/// pairs recur across all minors of a powered matrix.
fn cached_pow(base: &Q, exp: &Q, prec: u32) -> Iv {
    POW_CACHE.with(|c| {
        let key = (base.clone(), exp.clone(), prec);
        if let Some(iv) = c.borrow().get(&key) {
            return iv.clone();
        }
        let iv = pow_q_point(base, exp, prec);
        c.borrow_mut().insert(key, iv.clone());
        iv
    })
}
