//! Golden decision tables for `classify` / `admissible_exponents`, encoded by
//! hand and checked exhaustively: every sign pattern at every shape with
//! `d = min(m,n) <= 6`, all four entry-domain variants of the all-pattern
//! scope, and structural invariances (transport group, transposition,
//! dimension monotonicity) up to `d = 8`.
//!
//! The tests re-derive the expected branch for each pattern through an
//! independent implementation of the sign-pattern transport group, so the
//! library's closed-form branch rule is cross-validated rather than copied.

use srmat::classify::{
    admissible_exponents, classify, is_member, signum_preserves, Clause, ClassifyError, CoefRange,
    EntryDomain, ExponentSet, Mode, Query, Scope, ValueConstraint,
};
use srmat::funcspec::{Dom, FunctionSpec};
use srmat::rat::{q, qi};
use srmat::SignPattern;

// ---------------------------------------------------------------------------
// Independent transport-group implementation (test-local).
// ---------------------------------------------------------------------------

/// Sign action of flipping every other row/column: `eps_k -> (-1)^k eps_k`.
fn negate(eps: &[i8]) -> Vec<i8> {
    eps.iter()
        .enumerate()
        .map(|(i, &s)| if (i + 1) % 2 == 1 { -s } else { s })
        .collect()
}

/// Sign action of reversing the column order: `eps_k -> (-1)^(k(k-1)/2) eps_k`
/// (the sign of the order-reversing permutation on k letters), which equals
/// `(-1)^(floor(k/2))`.
fn exchange(eps: &[i8]) -> Vec<i8> {
    eps.iter()
        .enumerate()
        .map(|(i, &s)| {
            let k = i + 1;
            if (k / 2) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect()
}

/// Normalizes a pattern to its base form with `eps_1 = eps_2 = +1` by the two
/// transports above, and reports the base.
fn base_form(eps: &[i8]) -> Vec<i8> {
    let mut cur = eps.to_vec();
    if cur[0] == -1 {
        cur = negate(&cur);
    }
    if cur.len() >= 2 && cur[1] == -1 {
        cur = exchange(&cur);
    }
    assert_eq!(cur[0], 1);
    if cur.len() >= 2 {
        assert_eq!(cur[1], 1);
    }
    cur
}

/// Branch selector for `d >= 3`: true on the "equal" branch, i.e. the base
/// form has positive third-order sign.
fn branch_eq(eps: &[i8]) -> bool {
    assert!(eps.len() >= 3);
    base_form(eps)[2] == 1
}

/// All `2^d` sign patterns of length `d`.
fn all_patterns(d: usize) -> Vec<Vec<i8>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..d {
        acc = acc
            .into_iter()
            .flat_map(|p| {
                let mut a = p.clone();
                a.push(1i8);
                let mut b = p;
                b.push(-1i8);
                [a, b]
            })
            .collect();
    }
    acc
}

fn fixed_query(m: usize, n: usize, mode: Mode, eps: &[i8]) -> Query {
    Query {
        m,
        n,
        mode,
        scope: Scope::FixedPattern {
            eps: SignPattern(eps.to_vec()),
        },
        entry_domain: match mode {
            Mode::Sr => EntryDomain::Nonneg,
            Mode::Ssr => EntryDomain::Positive,
        },
    }
}

fn all_query(m: usize, n: usize, mode: Mode, entry_domain: EntryDomain) -> Query {
    Query {
        m,
        n,
        mode,
        scope: Scope::AllPatterns,
        entry_domain,
    }
}

/// The shapes exercised for a given `d`: square and both rectangular
/// orientations.
fn shapes(d: usize) -> [(usize, usize); 3] {
    [(d, d), (d, d + 2), (d + 2, d)]
}

// ---------------------------------------------------------------------------
// Hand-encoded expected exponent sets.
// ---------------------------------------------------------------------------

fn expected_fixed_sr(d: usize, eps: &[i8]) -> ExponentSet {
    match d {
        1 | 2 => ExponentSet::zero_to_inf_closed(),
        3 => {
            if branch_eq(eps) {
                ExponentSet::zero_point_and_one_to_inf()
            } else {
                ExponentSet::unit_closed()
            }
        }
        _ => ExponentSet::points(&[0, 1]),
    }
}

fn expected_fixed_ssr(d: usize, eps: &[i8]) -> ExponentSet {
    match d {
        1 => ExponentSet::all_reals(),
        2 => ExponentSet::zero_to_inf_open(),
        3 => {
            if branch_eq(eps) {
                ExponentSet::one_to_inf()
            } else {
                ExponentSet::unit_half_open()
            }
        }
        _ => ExponentSet::points(&[1]),
    }
}

fn expected_all_sr(m: usize, n: usize) -> ExponentSet {
    let d = m.min(n);
    if (m == n && n <= 3) || (m != n && d <= 2) {
        ExponentSet::zero_to_inf_closed()
    } else {
        ExponentSet::points(&[0, 1])
    }
}

fn expected_all_ssr(m: usize, n: usize) -> ExponentSet {
    match m.min(n) {
        1 => ExponentSet::all_reals(),
        2 => ExponentSet::nonzero_reals(),
        _ => ExponentSet::points(&[1]),
    }
}

// ---------------------------------------------------------------------------
// Fixed-pattern tables, exhaustive for d <= 6.
// ---------------------------------------------------------------------------

#[test]
fn fixed_sr_admissible_sets_exhaustive() {
    for d in 1..=6 {
        for (m, n) in shapes(d) {
            for eps in all_patterns(d) {
                let qy = fixed_query(m, n, Mode::Sr, &eps);
                let got = admissible_exponents(&qy).unwrap();
                assert_eq!(
                    got,
                    expected_fixed_sr(d, &eps),
                    "SR {m}x{n} pattern {eps:?}"
                );
            }
        }
    }
}

#[test]
fn fixed_ssr_admissible_sets_exhaustive() {
    for d in 1..=6 {
        for (m, n) in shapes(d) {
            for eps in all_patterns(d) {
                let qy = fixed_query(m, n, Mode::Ssr, &eps);
                let got = admissible_exponents(&qy).unwrap();
                assert_eq!(
                    got,
                    expected_fixed_ssr(d, &eps),
                    "SSR {m}x{n} pattern {eps:?}"
                );
            }
        }
    }
}

/// Shorthand for the coefficient ranges appearing in the fixed tables; the
/// reflection `f(x) -> -f(-x)` (applied for `eps_1 = -1`) negates them.
fn expect_coef(base: CoefRange, reflected: bool) -> CoefRange {
    if reflected {
        base.reflected()
    } else {
        base
    }
}

#[test]
fn fixed_sr_clause_shapes_exhaustive() {
    for d in 1..=6 {
        for (m, n) in shapes(d) {
            for eps in all_patterns(d) {
                let reflected = eps[0] == -1;
                let fam = classify(&fixed_query(m, n, Mode::Sr, &eps)).unwrap();
                assert!(!fam.has_partial());
                let label = format!("SR {m}x{n} {eps:?}");
                if reflected {
                    assert!(
                        fam.notes.iter().any(|s| s.contains("reflection")),
                        "{label}: reflection note missing"
                    );
                }
                let want_c = expect_coef(CoefRange::NonNeg, reflected);
                match d {
                    1 => {
                        assert_eq!(fam.clauses.len(), 1, "{label}");
                        let want = if reflected {
                            ValueConstraint::NonPosValues
                        } else {
                            ValueConstraint::NonNegValues
                        };
                        assert_eq!(
                            fam.clauses[0],
                            Clause::AnyFunction { constraint: want },
                            "{label}"
                        );
                    }
                    2 => {
                        assert_eq!(
                            fam.clauses,
                            vec![
                                Clause::ScaledSignum { c: want_c },
                                Clause::ScaledPower {
                                    c: want_c,
                                    exponents: ExponentSet::zero_to_inf_closed(),
                                },
                            ],
                            "{label}"
                        );
                    }
                    3 => {
                        if branch_eq(&eps) {
                            assert_eq!(
                                fam.clauses,
                                vec![Clause::ScaledPower {
                                    c: want_c,
                                    exponents: ExponentSet::zero_point_and_one_to_inf(),
                                }],
                                "{label}"
                            );
                        } else {
                            assert_eq!(
                                fam.clauses,
                                vec![
                                    Clause::ScaledSignum { c: want_c },
                                    Clause::ScaledPower {
                                        c: want_c,
                                        exponents: ExponentSet::unit_closed(),
                                    },
                                ],
                                "{label}"
                            );
                        }
                    }
                    _ => {
                        if branch_eq(&eps) {
                            assert_eq!(
                                fam.clauses,
                                vec![Clause::ScaledPower {
                                    c: want_c,
                                    exponents: ExponentSet::points(&[0, 1]),
                                }],
                                "{label}"
                            );
                        } else {
                            assert_eq!(
                                fam.clauses,
                                vec![
                                    Clause::ScaledSignum { c: want_c },
                                    Clause::ScaledPower {
                                        c: want_c,
                                        exponents: ExponentSet::points(&[0, 1]),
                                    },
                                ],
                                "{label}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn fixed_ssr_clause_shapes_exhaustive() {
    for d in 1..=6 {
        for (m, n) in shapes(d) {
            for eps in all_patterns(d) {
                let reflected = eps[0] == -1;
                let fam = classify(&fixed_query(m, n, Mode::Ssr, &eps)).unwrap();
                assert!(!fam.has_partial());
                let label = format!("SSR {m}x{n} {eps:?}");
                let want_c = expect_coef(CoefRange::Positive, reflected);
                if d == 1 {
                    let want = if reflected {
                        ValueConstraint::NegativeValues
                    } else {
                        ValueConstraint::PositiveValues
                    };
                    assert_eq!(
                        fam.clauses,
                        vec![Clause::AnyFunction { constraint: want }],
                        "{label}"
                    );
                    continue;
                }
                let exponents = match d {
                    2 => ExponentSet::zero_to_inf_open(),
                    3 => {
                        if branch_eq(&eps) {
                            ExponentSet::one_to_inf()
                        } else {
                            ExponentSet::unit_half_open()
                        }
                    }
                    _ => ExponentSet::points(&[1]),
                };
                assert_eq!(
                    fam.clauses,
                    vec![Clause::ScaledPower {
                        c: want_c,
                        exponents,
                    }],
                    "{label}"
                );
            }
        }
    }
}

/// The function domain resolves from the first-order sign: one-signed
/// families act on the matching half-line.
#[test]
fn fixed_function_domains_follow_first_order_sign() {
    for d in 1..=4 {
        for eps in all_patterns(d) {
            let sr = classify(&fixed_query(d, d, Mode::Sr, &eps)).unwrap();
            let ssr = classify(&fixed_query(d, d, Mode::Ssr, &eps)).unwrap();
            if eps[0] == 1 {
                assert_eq!(sr.function_domain, Dom::NonNeg);
                assert_eq!(ssr.function_domain, Dom::Positive);
            } else {
                assert_eq!(sr.function_domain, Dom::NonPos);
                assert_eq!(ssr.function_domain, Dom::Negative);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// All-pattern tables, every shape with d <= 6, all four entry domains.
// ---------------------------------------------------------------------------

#[test]
fn all_pattern_admissible_sets_every_shape() {
    for m in 1..=8usize {
        for n in 1..=8usize {
            if m.min(n) > 6 {
                continue;
            }
            let sr = admissible_exponents(&all_query(m, n, Mode::Sr, EntryDomain::Real)).unwrap();
            assert_eq!(sr, expected_all_sr(m, n), "all-SR {m}x{n}");
            let ssr =
                admissible_exponents(&all_query(m, n, Mode::Ssr, EntryDomain::RealNonzero))
                    .unwrap();
            assert_eq!(ssr, expected_all_ssr(m, n), "all-SSR {m}x{n}");

            // Entry-domain corollaries share the exponent tables: restricting
            // the entries does not enlarge or shrink the admissible powers.
            let sr_nn =
                admissible_exponents(&all_query(m, n, Mode::Sr, EntryDomain::Nonneg)).unwrap();
            assert_eq!(sr_nn, sr, "all-SR nonneg {m}x{n}");
            let ssr_pos =
                admissible_exponents(&all_query(m, n, Mode::Ssr, EntryDomain::Positive)).unwrap();
            assert_eq!(ssr_pos, ssr, "all-SSR positive {m}x{n}");
        }
    }
}

#[test]
fn all_sr_real_clause_shapes() {
    for m in 1..=8usize {
        for n in 1..=8usize {
            if m.min(n) > 6 {
                continue;
            }
            let fam = classify(&all_query(m, n, Mode::Sr, EntryDomain::Real)).unwrap();
            assert_eq!(fam.function_domain, Dom::Real);
            let label = format!("all-SR real {m}x{n}");
            let d = m.min(n);
            let square = m == n;
            if square && n == 1 {
                assert_eq!(
                    fam.clauses,
                    vec![Clause::AnyFunction {
                        constraint: ValueConstraint::Unconstrained
                    }],
                    "{label}"
                );
            } else if (square && n == 2) || (!square && d == 1) {
                assert_eq!(
                    fam.clauses,
                    vec![Clause::AnyFunction {
                        constraint: ValueConstraint::SignDichotomy
                    }],
                    "{label}"
                );
            } else {
                let exps = if (square && n == 3) || (!square && d == 2) {
                    ExponentSet::zero_to_inf_closed()
                } else {
                    ExponentSet::points(&[1])
                };
                assert_eq!(
                    fam.clauses,
                    vec![
                        Clause::Constant {
                            c: CoefRange::NonZero
                        },
                        Clause::PiecewiseTwoSided {
                            neg_c: CoefRange::Any,
                            neg_exponents: exps.clone(),
                            pos_c: CoefRange::Any,
                            pos_exponents: exps,
                            zero_in_domain: true,
                        },
                    ],
                    "{label}"
                );
            }
        }
    }
}

#[test]
fn all_ssr_nonzero_clause_shapes() {
    for m in 1..=8usize {
        for n in 1..=8usize {
            if m.min(n) > 6 {
                continue;
            }
            let fam = classify(&all_query(m, n, Mode::Ssr, EntryDomain::RealNonzero)).unwrap();
            assert_eq!(fam.function_domain, Dom::RealNonZero);
            let label = format!("all-SSR nonzero {m}x{n}");
            let d = m.min(n);
            if (m, n) == (1, 1) {
                assert_eq!(
                    fam.clauses,
                    vec![Clause::AnyFunction {
                        constraint: ValueConstraint::NowhereZero
                    }],
                    "{label}"
                );
            } else if (m, n) == (2, 2) {
                assert!(fam.has_partial(), "{label}: the strict 2x2 cell is open");
                assert_eq!(fam.clauses.len(), 1, "{label}");
            } else if m != n && d == 1 {
                assert_eq!(
                    fam.clauses,
                    vec![Clause::AnyFunction {
                        constraint: ValueConstraint::HalfLinesStrictlyOneSigned
                    }],
                    "{label}"
                );
            } else {
                let exps = if m != n && d == 2 {
                    ExponentSet::nonzero_reals()
                } else {
                    ExponentSet::points(&[1])
                };
                assert_eq!(
                    fam.clauses,
                    vec![Clause::PiecewiseTwoSided {
                        neg_c: CoefRange::NonZero,
                        neg_exponents: exps.clone(),
                        pos_c: CoefRange::NonZero,
                        pos_exponents: exps,
                        zero_in_domain: false,
                    }],
                    "{label}"
                );
            }
        }
    }
}

#[test]
fn all_pattern_entry_domain_corollary_clauses() {
    // Nonnegative-entry SR corollary.
    for (m, n, want) in [
        (1usize, 1usize, None),
        (2, 2, None),
        (1, 7, None),
        (3, 3, Some(ExponentSet::zero_to_inf_closed())),
        (2, 5, Some(ExponentSet::zero_to_inf_closed())),
        (4, 4, Some(ExponentSet::points(&[0, 1]))),
        (3, 6, Some(ExponentSet::points(&[0, 1]))),
    ] {
        let fam = classify(&all_query(m, n, Mode::Sr, EntryDomain::Nonneg)).unwrap();
        assert_eq!(fam.function_domain, Dom::NonNeg);
        match want {
            None => assert_eq!(
                fam.clauses,
                vec![Clause::AnyFunction {
                    constraint: ValueConstraint::NonNegValues
                }],
                "all-SR nonneg {m}x{n}"
            ),
            Some(exps) => assert_eq!(
                fam.clauses,
                vec![Clause::ScaledPower {
                    c: CoefRange::NonNeg,
                    exponents: exps,
                }],
                "all-SR nonneg {m}x{n}"
            ),
        }
    }
    // Positive-entry SSR corollary.
    for (m, n, want) in [
        (1usize, 1usize, None),
        (1, 4, None),
        (2, 5, Some(ExponentSet::nonzero_reals())),
        (3, 3, Some(ExponentSet::points(&[1]))),
        (4, 6, Some(ExponentSet::points(&[1]))),
    ] {
        let fam = classify(&all_query(m, n, Mode::Ssr, EntryDomain::Positive)).unwrap();
        assert_eq!(fam.function_domain, Dom::Positive);
        match want {
            None => assert_eq!(
                fam.clauses,
                vec![Clause::AnyFunction {
                    constraint: ValueConstraint::PositiveValues
                }],
                "all-SSR positive {m}x{n}"
            ),
            Some(exps) => assert_eq!(
                fam.clauses,
                vec![Clause::ScaledPower {
                    c: CoefRange::Positive,
                    exponents: exps,
                }],
                "all-SSR positive {m}x{n}"
            ),
        }
    }
    // The strict 2x2 cell stays open on positive entries too.
    let fam = classify(&all_query(2, 2, Mode::Ssr, EntryDomain::Positive)).unwrap();
    assert!(fam.has_partial());
}

// ---------------------------------------------------------------------------
// Invariances, pushed to d = 8.
// ---------------------------------------------------------------------------

/// The admissible set is invariant under the transport group: negation and
/// column reversal carry (S)SR matrices of one pattern onto another, commuting
/// with entrywise magnitude-power maps.
#[test]
fn transport_invariance_to_d8() {
    for d in 1..=8usize {
        for eps in all_patterns(d) {
            for mode in [Mode::Sr, Mode::Ssr] {
                let here = admissible_exponents(&fixed_query(d, d, mode, &eps)).unwrap();
                for other in [negate(&eps), exchange(&eps), negate(&exchange(&eps))] {
                    let there = admissible_exponents(&fixed_query(d, d, mode, &other)).unwrap();
                    assert_eq!(
                        here, there,
                        "{mode:?} d={d}: {eps:?} vs transported {other:?}"
                    );
                }
            }
        }
    }
}

/// Transposition preserves every minor up to row/column exchange, so the
/// admissible set only depends on `d` — including rectangular shapes.
#[test]
fn transpose_invariance_to_d8() {
    for d in 1..=8usize {
        for extra in [0usize, 1, 3] {
            let (m, n) = (d, d + extra);
            for eps in [vec![1i8; d], {
                let mut e = vec![1i8; d];
                if d >= 3 {
                    e[2] = -1;
                }
                e
            }] {
                for mode in [Mode::Sr, Mode::Ssr] {
                    let a = admissible_exponents(&fixed_query(m, n, mode, &eps)).unwrap();
                    let b = admissible_exponents(&fixed_query(n, m, mode, &eps)).unwrap();
                    assert_eq!(a, b, "{mode:?} {m}x{n} vs transpose, {eps:?}");
                }
            }
            // All-pattern scopes transpose too.
            let a = admissible_exponents(&all_query(m, n, Mode::Sr, EntryDomain::Real)).unwrap();
            let b = admissible_exponents(&all_query(n, m, Mode::Sr, EntryDomain::Real)).unwrap();
            assert_eq!(a, b, "all-SR {m}x{n} vs transpose");
            let a =
                admissible_exponents(&all_query(m, n, Mode::Ssr, EntryDomain::RealNonzero))
                    .unwrap();
            let b =
                admissible_exponents(&all_query(n, m, Mode::Ssr, EntryDomain::RealNonzero))
                    .unwrap();
            assert_eq!(a, b, "all-SSR {m}x{n} vs transpose");
        }
    }
}

/// Growing `d` only shrinks the admissible set: a preserver for `(d+1)`-sized
/// queries preserves the leading `d`-sized truncations.
#[test]
fn admissible_sets_shrink_with_d_to_8() {
    for d in 1..=7usize {
        for eps in all_patterns(d + 1) {
            let prefix: Vec<i8> = eps[..d].to_vec();
            for mode in [Mode::Sr, Mode::Ssr] {
                let big = admissible_exponents(&fixed_query(d + 1, d + 1, mode, &eps)).unwrap();
                let small = admissible_exponents(&fixed_query(d, d, mode, &prefix)).unwrap();
                assert!(
                    big.is_subset_of(&small),
                    "{mode:?}: set for d={} {eps:?} not within set for prefix {prefix:?}",
                    d + 1
                );
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Signum admission.
// ---------------------------------------------------------------------------

#[test]
fn signum_preservation_table() {
    // Fixed scope: admitted for SR exactly at d <= 2 or on the unequal
    // branch; for SSR only at d = 1.
    for d in 1..=6usize {
        for eps in all_patterns(d) {
            let sr = signum_preserves(&fixed_query(d, d, Mode::Sr, &eps)).unwrap();
            let want_sr = d <= 2 || !branch_eq(&eps);
            assert_eq!(sr, want_sr, "SR d={d} {eps:?}");
            let ssr = signum_preserves(&fixed_query(d, d, Mode::Ssr, &eps)).unwrap();
            assert_eq!(ssr, d == 1, "SSR d={d} {eps:?}");
        }
    }
    // All-pattern scope on real entries: admitted exactly on the small cells.
    for m in 1..=6usize {
        for n in 1..=6usize {
            let got = signum_preserves(&all_query(m, n, Mode::Sr, EntryDomain::Real)).unwrap();
            let want = (m == n && n <= 3) || (m != n && m.min(n) <= 2);
            assert_eq!(got, want, "all-SR {m}x{n}");
            let got =
                signum_preserves(&all_query(m, n, Mode::Ssr, EntryDomain::RealNonzero)).unwrap();
            assert_eq!(got, m.min(n) == 1, "all-SSR {m}x{n}");
        }
    }
}

/// `signum_preserves` agrees with deciding membership of `sgn` itself
/// wherever membership is decidable.
#[test]
fn signum_preserves_matches_is_member() {
    let mut checked = 0usize;
    for d in 1..=5usize {
        for eps in all_patterns(d) {
            for mode in [Mode::Sr, Mode::Ssr] {
                let qy = fixed_query(d, d, mode, &eps);
                let dom = classify(&qy).unwrap().function_domain;
                let sgn = FunctionSpec::signum(qi(1), dom);
                // On one-signed negative domains the admitted signum carries a
                // negative coefficient; try both and compare the disjunction.
                let sgn_neg = FunctionSpec::signum(qi(-1), dom);
                let member =
                    is_member(&sgn, &qy).unwrap() || is_member(&sgn_neg, &qy).unwrap();
                assert_eq!(
                    member,
                    signum_preserves(&qy).unwrap(),
                    "{mode:?} d={d} {eps:?}"
                );
                checked += 1;
            }
        }
    }
    for (m, n) in [(1, 1), (1, 3), (2, 2), (2, 4), (3, 3), (4, 4), (3, 5)] {
        let qy = all_query(m, n, Mode::Sr, EntryDomain::Real);
        let sgn = FunctionSpec::signum(qi(1), Dom::Real);
        assert_eq!(
            is_member(&sgn, &qy).unwrap(),
            signum_preserves(&qy).unwrap(),
            "all-SR {m}x{n}"
        );
        checked += 1;
    }
    assert!(checked > 60);
}

// ---------------------------------------------------------------------------
// Membership spot table.
// ---------------------------------------------------------------------------

#[test]
fn membership_spot_checks() {
    // Fixed SR, d = 4, equal branch: powers 0 and 1 with nonnegative
    // coefficient, nothing else.
    let q44 = fixed_query(4, 4, Mode::Sr, &[1, 1, 1, 1]);
    let member = |f: &FunctionSpec| is_member(f, &q44).unwrap();
    assert!(member(&FunctionSpec::power(qi(3), qi(1), Dom::NonNeg)));
    assert!(member(&FunctionSpec::power(qi(2), qi(0), Dom::NonNeg)));
    assert!(member(&FunctionSpec::constant(qi(2), Dom::NonNeg)));
    assert!(member(&FunctionSpec::power(qi(0), qi(7), Dom::NonNeg)), "zero map");
    assert!(!member(&FunctionSpec::power(qi(1), qi(2), Dom::NonNeg)));
    assert!(!member(&FunctionSpec::power(qi(1), q(1, 2), Dom::NonNeg)));
    assert!(!member(&FunctionSpec::power(qi(-1), qi(1), Dom::NonNeg)));
    assert!(!member(&FunctionSpec::signum(qi(1), Dom::NonNeg)), "eq branch rejects signum");
    // A function declared on a smaller domain than the family needs is out.
    assert!(!member(&FunctionSpec::power(qi(1), qi(1), Dom::Positive)));

    // Same shape, unequal branch: signum joins, exponent set unchanged.
    let q44n = fixed_query(4, 4, Mode::Sr, &[1, 1, -1, 1]);
    assert!(is_member(&FunctionSpec::signum(qi(2), Dom::NonNeg), &q44n).unwrap());
    assert!(is_member(&FunctionSpec::power(qi(1), qi(1), Dom::NonNeg), &q44n).unwrap());
    assert!(!is_member(&FunctionSpec::power(qi(1), qi(2), Dom::NonNeg), &q44n).unwrap());

    // Fixed SSR, d = 2: every positive power with positive coefficient; no
    // constants, no zero map, no negative exponents.
    let q22 = fixed_query(2, 2, Mode::Ssr, &[1, 1]);
    assert!(is_member(&FunctionSpec::power(q(1, 3), q(7, 2), Dom::Positive), &q22).unwrap());
    assert!(!is_member(&FunctionSpec::power(qi(1), qi(0), Dom::Positive), &q22).unwrap());
    assert!(!is_member(&FunctionSpec::power(qi(1), qi(-1), Dom::Positive), &q22).unwrap());
    assert!(!is_member(&FunctionSpec::power(qi(0), qi(1), Dom::Positive), &q22).unwrap());
    assert!(!is_member(&FunctionSpec::constant(qi(5), Dom::Positive), &q22).unwrap());

    // Fixed SSR, d = 3, equal branch vs unequal branch at alpha = 1/2 and 2.
    let e3 = fixed_query(3, 3, Mode::Ssr, &[1, 1, 1]);
    let n3 = fixed_query(3, 3, Mode::Ssr, &[1, 1, -1]);
    let half = FunctionSpec::power(qi(1), q(1, 2), Dom::Positive);
    let two = FunctionSpec::power(qi(1), qi(2), Dom::Positive);
    assert!(!is_member(&half, &e3).unwrap());
    assert!(is_member(&two, &e3).unwrap());
    assert!(is_member(&half, &n3).unwrap());
    assert!(!is_member(&two, &n3).unwrap());

    // Reflected fixed SSR d = 2 (eps_1 = -1): negative coefficients admitted,
    // positive rejected; the domain is the negative half-line.
    let qneg = fixed_query(2, 2, Mode::Ssr, &[-1, 1]);
    assert!(is_member(&FunctionSpec::power(qi(-2), qi(1), Dom::Negative), &qneg).unwrap());
    assert!(!is_member(&FunctionSpec::power(qi(2), qi(1), Dom::Negative), &qneg).unwrap());

    // All-pattern SR on real entries, large cell: constants and identity-like
    // piecewise maps only.
    let q55 = all_query(5, 5, Mode::Sr, EntryDomain::Real);
    assert!(is_member(&FunctionSpec::constant(qi(3), Dom::Real), &q55).unwrap());
    assert!(is_member(&FunctionSpec::power(qi(2), qi(1), Dom::Real), &q55).unwrap());
    assert!(!is_member(&FunctionSpec::power(qi(1), qi(2), Dom::Real), &q55).unwrap());
    let skew = FunctionSpec {
        kind: srmat::funcspec::FuncKind::PiecewiseTwoSided {
            neg_c: qi(-1),
            neg_alpha: qi(1),
            pos_c: qi(2),
            pos_alpha: qi(1),
            at_zero: qi(0),
        },
        domain: Dom::Real,
    };
    assert!(is_member(&skew, &q55).unwrap(), "independent half-line slopes");
    let skew_bad_zero = FunctionSpec {
        kind: srmat::funcspec::FuncKind::PiecewiseTwoSided {
            neg_c: qi(-1),
            neg_alpha: qi(1),
            pos_c: qi(2),
            pos_alpha: qi(1),
            at_zero: qi(1),
        },
        domain: Dom::Real,
    };
    assert!(
        !is_member(&skew_bad_zero, &q55).unwrap(),
        "nonzero value at 0 breaks the piecewise clause"
    );

    // All-pattern SR mid cell admits genuine two-sided powers.
    let q33 = all_query(3, 3, Mode::Sr, EntryDomain::Real);
    let two_sided = FunctionSpec {
        kind: srmat::funcspec::FuncKind::PiecewiseTwoSided {
            neg_c: qi(3),
            neg_alpha: q(1, 2),
            pos_c: qi(1),
            pos_alpha: qi(4),
            at_zero: qi(0),
        },
        domain: Dom::Real,
    };
    assert!(is_member(&two_sided, &q33).unwrap());
    assert!(!is_member(&two_sided, &q55).unwrap());

    // The open strict 2x2 cell refuses to decide.
    let q22open = all_query(2, 2, Mode::Ssr, EntryDomain::RealNonzero);
    let f = FunctionSpec::power(qi(1), qi(1), Dom::RealNonZero);
    assert!(matches!(
        is_member(&f, &q22open),
        Err(ClassifyError::PartialUndecidable(_))
    ));
}

// ---------------------------------------------------------------------------
// Validation corners.
// ---------------------------------------------------------------------------

#[test]
fn validation_rejects_malformed_queries() {
    // Pattern length must match d.
    let qy = fixed_query(3, 3, Mode::Sr, &[1, 1]);
    assert!(classify(&qy).is_err());
    // Fixed-pattern scopes pin their entry domains.
    let mut qy = fixed_query(3, 3, Mode::Sr, &[1, 1, 1]);
    qy.entry_domain = EntryDomain::Real;
    assert!(classify(&qy).is_err());
    let mut qy = fixed_query(3, 3, Mode::Ssr, &[1, 1, 1]);
    qy.entry_domain = EntryDomain::Nonneg;
    assert!(classify(&qy).is_err());
    // All-pattern SR rejects the strict domains and vice versa.
    assert!(classify(&all_query(3, 3, Mode::Sr, EntryDomain::RealNonzero)).is_err());
    assert!(classify(&all_query(3, 3, Mode::Ssr, EntryDomain::Real)).is_err());
    // Degenerate shapes.
    assert!(classify(&all_query(0, 3, Mode::Sr, EntryDomain::Real)).is_err());
}
