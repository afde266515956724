//! Directed-rounding interval arithmetic over MPFR floats.
//!
//! Every interval `[lo, hi]` satisfies `lo ≤ x ≤ hi` for the exact real `x` it
//! encloses; all endpoint computations round outward (`lo` toward −∞, `hi`
//! toward +∞). Intervals are used **only** to certify the sign or magnitude of
//! quantities already known exactly in symbolic form — an interval straddling
//! zero is never interpreted as "equal to zero".

use crate::rat::Q;
use num_traits::Signed;
use rug::float::Round;
use rug::{Float, Integer, Rational};
use std::cmp::Ordering;

/// Certification context: working precision, escalation cap, and the width
/// tolerance used by bracket searches.
#[derive(Debug, Clone)]
pub struct CertCtx {
    /// Initial mantissa precision in bits.
    pub bits: u32,
    /// Precision cap: precision doubles until it reaches this, then the
    /// computation reports `Undetermined` rather than looping forever.
    pub max_bits: u32,
    /// Width tolerance for bracketing searches (interpreted as an absolute
    /// width on the quantity being bracketed).
    pub tol: f64,
}

impl Default for CertCtx {
    fn default() -> Self {
        CertCtx {
            bits: 128,
            max_bits: 1024,
            tol: 1e-10,
        }
    }
}

impl CertCtx {
    /// Precision ladder: `bits`, `2·bits`, … clamped to end at `max_bits`.
    pub fn ladder(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut b = self.bits.max(8);
        loop {
            out.push(b.min(self.max_bits));
            if b >= self.max_bits {
                break;
            }
            b = b.saturating_mul(2);
        }
        out.dedup();
        out
    }
}

/// Converts an exact rational to a `rug::Rational`.
pub fn to_rug_rational(x: &Q) -> Rational {
    let n = Integer::from_str_radix(&x.numer().to_str_radix(16), 16).expect("numer conversion");
    let d = Integer::from_str_radix(&x.denom().to_str_radix(16), 16).expect("denom conversion");
    Rational::from((n, d))
}

fn ln_dir(mut x: Float, round: Round) -> Float {
    Float::ln_round(&mut x, round);
    x
}

fn exp_dir(mut x: Float, round: Round) -> Float {
    Float::exp_round(&mut x, round);
    x
}

/// A closed interval with MPFR endpoints.
#[derive(Debug, Clone)]
pub struct Iv {
    pub lo: Float,
    pub hi: Float,
}

impl Iv {
    /// Encloses an exact rational at the given precision.
    pub fn from_q(x: &Q, prec: u32) -> Iv {
        let r = to_rug_rational(x);
        let (lo, _) = Float::with_val_round(prec, &r, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &r, Round::Up);
        Iv { lo, hi }
    }

    /// The exact zero interval.
    pub fn zero(prec: u32) -> Iv {
        Iv {
            lo: Float::with_val(prec, 0),
            hi: Float::with_val(prec, 0),
        }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    /// `self + rhs`, outward rounded.
    pub fn add(&self, rhs: &Iv) -> Iv {
        let prec = self.prec().max(rhs.prec());
        let (lo, _) = Float::with_val_round(prec, &self.lo + &rhs.lo, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &self.hi + &rhs.hi, Round::Up);
        Iv { lo, hi }
    }

    /// `self - rhs`, outward rounded.
    pub fn sub(&self, rhs: &Iv) -> Iv {
        let prec = self.prec().max(rhs.prec());
        let (lo, _) = Float::with_val_round(prec, &self.lo - &rhs.hi, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &self.hi - &rhs.lo, Round::Up);
        Iv { lo, hi }
    }

    /// `-self` (negation is exact).
    pub fn neg(&self) -> Iv {
        let prec = self.prec();
        let (lo, _) = Float::with_val_round(prec, -&self.hi, Round::Down);
        let (hi, _) = Float::with_val_round(prec, -&self.lo, Round::Up);
        Iv { lo, hi }
    }

    /// `self * rhs`, outward rounded over all endpoint products.
    pub fn mul(&self, rhs: &Iv) -> Iv {
        let prec = self.prec().max(rhs.prec());
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let (down, _) = Float::with_val_round(prec, a * b, Round::Down);
            let (up, _) = Float::with_val_round(prec, a * b, Round::Up);
            lo = Some(match lo {
                None => down,
                Some(cur) => {
                    if down < cur {
                        down
                    } else {
                        cur
                    }
                }
            });
            hi = Some(match hi {
                None => up,
                Some(cur) => {
                    if up > cur {
                        up
                    } else {
                        cur
                    }
                }
            });
        }
        Iv {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// Multiplication by an exact rational.
    pub fn mul_q(&self, c: &Q, prec: u32) -> Iv {
        self.mul(&Iv::from_q(c, prec))
    }

    /// Determines the sign if the interval excludes zero; `Some(0)` when the
    /// interval is the exact point zero, `None` when it straddles zero.
    pub fn sign(&self) -> Option<i8> {
        match (self.lo.cmp0(), self.hi.cmp0()) {
            (Some(Ordering::Greater), _) => Some(1),
            (_, Some(Ordering::Less)) => Some(-1),
            (Some(Ordering::Equal), Some(Ordering::Equal)) => Some(0),
            _ => None,
        }
    }

    /// Upper bound on the interval width as an `f64` (+∞ on overflow).
    pub fn width_f64(&self) -> f64 {
        let prec = self.prec();
        let (w, _) = Float::with_val_round(prec, &self.hi - &self.lo, Round::Up);
        w.to_f64_round(Round::Up)
    }

    /// True when the entire interval lies strictly below the rational `x`.
    pub fn strictly_below(&self, x: &Q) -> bool {
        let bound = Iv::from_q(x, self.prec());
        self.hi < bound.lo
    }

    /// True when the entire interval lies strictly above the rational `x`.
    pub fn strictly_above(&self, x: &Q) -> bool {
        let bound = Iv::from_q(x, self.prec());
        self.lo > bound.hi
    }
}

/// Encloses `base^e` for an exact positive rational `base` and rational
/// exponent `e`, via `exp(e · ln base)` with directed rounding at every step.
///
/// Panics if `base ≤ 0`: callers only pass canonical radical bases and grid
/// points, which are strictly positive.
pub fn pow_q_point(base: &Q, e: &Q, prec: u32) -> Iv {
    assert!(
        base.is_positive(),
        "pow_q_point requires a positive base, got {base}"
    );
    if e.is_integer() {
        if let Ok(k32) = i32::try_from(e.to_integer()) {
            return Iv::from_q(&pow_rational_int(base, k32), prec);
        }
    }
    let b = to_rug_rational(base);
    let (b_lo, _) = Float::with_val_round(prec, &b, Round::Down);
    let (b_hi, _) = Float::with_val_round(prec, &b, Round::Up);
    let ln_iv = Iv {
        lo: ln_dir(b_lo, Round::Down),
        hi: ln_dir(b_hi, Round::Up),
    };
    let t = ln_iv.mul(&Iv::from_q(e, prec));
    Iv {
        lo: exp_dir(t.lo, Round::Down),
        hi: exp_dir(t.hi, Round::Up),
    }
}

/// Exact `base^k` for integer `k` (possibly negative); requires `base ≠ 0`
/// when `k < 0`.
pub fn pow_rational_int(base: &Q, k: i32) -> Q {
    use num_traits::{One, Zero};
    if k == 0 {
        return Q::one();
    }
    assert!(!(base.is_zero() && k < 0), "0 raised to a negative power");
    base.pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    #[test]
    fn rational_enclosure_brackets_value() {
        let x = q(1, 3);
        let iv = Iv::from_q(&x, 64);
        assert!(iv.lo < iv.hi);
        assert_eq!(iv.sign(), Some(1));
        assert!(iv.width_f64() < 1e-15);
    }

    #[test]
    fn multiplication_is_outward_rounded() {
        let a = Iv::from_q(&q(1, 3), 64);
        let b = Iv::from_q(&q(-3, 7), 64);
        let p = a.mul(&b);
        assert_eq!(p.sign(), Some(-1));
        // 1/3 * -3/7 = -1/7: the product interval must contain it.
        let exact = Iv::from_q(&q(-1, 7), 256);
        assert!(p.lo <= exact.lo && exact.hi <= p.hi);
    }

    #[test]
    fn pow_encloses_known_radicals() {
        let iv = pow_q_point(&q(2, 1), &q(1, 2), 128);
        assert_eq!(iv.sign(), Some(1));
        let lo = iv.lo.to_f64();
        let hi = iv.hi.to_f64();
        assert!(lo <= 1.4142135623730951 && 1.4142135623730951 <= hi);
        assert!(hi - lo < 1e-30);
    }

    #[test]
    fn pow_integer_exponent_takes_exact_path() {
        let iv = pow_q_point(&q(3, 2), &q(-2, 1), 64);
        let exact = Iv::from_q(&q(4, 9), 256);
        assert!(iv.lo <= exact.lo && exact.hi <= iv.hi);
    }

    #[test]
    fn sign_detection_never_invents_a_sign_for_zero() {
        let a = Iv::from_q(&q(1, 1), 64);
        let b = Iv::from_q(&q(-1, 1), 64);
        let s = a.add(&b);
        assert!(s.width_f64() < 1e-15);
        assert!(s.sign() != Some(1) && s.sign() != Some(-1));
    }

    #[test]
    fn precision_ladder_escalates_to_cap() {
        let ctx = CertCtx::default();
        assert_eq!(ctx.ladder(), vec![128, 256, 512, 1024]);
        let ctx2 = CertCtx {
            bits: 100,
            max_bits: 300,
            tol: 1e-10,
        };
        assert_eq!(ctx2.ladder(), vec![100, 200, 300]);
    }
}
