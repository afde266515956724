//! Exact linear-algebra kernel for sign-regular matrices and their entrywise
//! preservers.
//!
//! A matrix is *sign-regular* (SR) with pattern `ε = (ε₁, …, ε_d)`,
//! `d = min(m, n)`, when every `k×k` minor has sign `ε_k` or vanishes, and
//! *strictly sign-regular* (SSR) when every such minor is nonzero with sign
//! `ε_k`. Totally positive (TP) and totally non-negative (TN) matrices are the
//! all-plus special cases.
//!
//! The crate answers three families of questions with certificates rather than
//! floating-point guesses:
//!
//! * **Detection** — is a given rational (or radical-valued) matrix SR/SSR, and
//!   with which patterns? ([`matcore`])
//! * **Classification** — which entrywise maps `f` send every SR/SSR matrix of
//!   a given shape back into the class? The answer is a small family of scaled
//!   power and signum functions depending on the shape, the pattern, and
//!   whether one pattern or all patterns must be preserved. ([`classify`])
//! * **Certification** — for every inadmissible power `α`, produce a concrete
//!   matrix witnessing the failure, with an exactly checkable transcript.
//!   ([`witnesses`], [`genmat`], [`expsum`])
//!
//! # Arithmetic model
//!
//! All scalars are elements of the ring generated by the rationals together
//! with real radicals `b^{p/q}` (`b` a positive rational): see [`value::Value`].
//! Equality with zero is decided **exactly** via a canonical form; the sign of
//! a provably nonzero value is certified with directed-rounding interval
//! arithmetic at escalating precision ([`interval`]). A [`SignVerdict::Zero`]
//! therefore always means *exactly zero*, never "smaller than a tolerance".

pub mod classify;
pub mod expsum;
pub mod funcspec;
pub mod genmat;
pub mod interval;
pub mod matcore;
pub mod rat;
pub mod report;
pub mod value;
pub mod witnesses;

pub use interval::CertCtx;
pub use matcore::{Matrix, SignPattern};
pub use rat::Q;
pub use value::{SignVerdict, Value};

/// Crate version string embedded in every JSON report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
