//! Randomized invariants for the arithmetic and character layers.
//!
//! Case counts are kept low: every generated value goes through exact
//! arithmetic, and the point is coverage of algebraic laws rather than
//! volume.

use gradec_core::{
    emit_session, fingerprint, fingerprint_equal, fixture, graded_character, parse_scalar,
    parse_session_str, GradedModuleRep, LaurentPoly, Matrix, Ring, Scalar,
};
use proptest::prelude::*;
use std::sync::Arc;

fn poly_ring() -> Ring {
    Ring::poly(Ring::Rat, &["a"])
}

fn laurent_ring() -> Ring {
    Ring::laurent(Ring::Int, &["v"])
}

/// c1 + c2 * x^e as a scalar in `ring`, where `x` is the sole variable.
fn sparse_scalar(ring: &Ring, var: &str, c1: i64, c2: i64, e: i64) -> Scalar {
    let lead = Scalar::from_int(ring, c2)
        .mul(&Scalar::var(ring, var).unwrap().pow(e).unwrap());
    Scalar::from_int(ring, c1).add(&lead)
}

fn small_laurent(ring: &Ring, terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(
        ring,
        "q",
        terms.iter().map(|&(e, c)| (e, Scalar::from_int(ring, c))),
    )
}

fn rational_matrix(entries: &[Vec<i64>]) -> Matrix {
    let ring = Ring::Rat;
    Matrix::from_rows(
        &ring,
        entries
            .iter()
            .map(|row| row.iter().map(|&n| Scalar::from_int(&ring, n)).collect())
            .collect(),
    )
}

/// Block diagonal sum of two graded modules over the same algebra.
fn direct_sum(a: &GradedModuleRep, b: &GradedModuleRep) -> GradedModuleRep {
    let field = a.field().clone();
    let mut degrees = a.degrees().to_vec();
    degrees.extend_from_slice(b.degrees());
    let n = a.dim();
    let action = (0..a.algebra().dim())
        .map(|m| {
            Matrix::from_fn(&field, n + b.dim(), n + b.dim(), |i, j| {
                if i < n && j < n {
                    a.action(m).get(i, j).clone()
                } else if i >= n && j >= n {
                    b.action(m).get(i - n, j - n).clone()
                } else {
                    Scalar::zero(&field)
                }
            })
        })
        .collect();
    GradedModuleRep::new(Arc::clone(a.algebra()), field, degrees, action).unwrap()
}

/// The exterior fixture module together with a couple of shifts, used as
/// building blocks for random direct sums.
fn exterior_blocks() -> Vec<GradedModuleRep> {
    let session = gradec_core::fixture_session("exterior").unwrap();
    let base = session.modules[0].1.clone();
    vec![base.shift(-1), base.clone(), base.shift(2)]
}

fn assemble(blocks: &[GradedModuleRep], counts: &[usize]) -> Option<GradedModuleRep> {
    let mut acc: Option<GradedModuleRep> = None;
    for (block, &count) in blocks.iter().zip(counts) {
        for _ in 0..count {
            acc = Some(match acc {
                Some(prev) => direct_sum(&prev, block),
                None => block.clone(),
            });
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn polynomial_scalars_round_trip_through_text(
        c1 in -12i64..=12,
        c2 in -12i64..=12,
        e in 0i64..=4,
    ) {
        let ring = poly_ring();
        let s = sparse_scalar(&ring, "a", c1, c2, e);
        let reparsed = parse_scalar(&s.to_string(), &ring).unwrap();
        prop_assert_eq!(reparsed, s);
    }

    #[test]
    fn laurent_scalars_round_trip_through_text(
        c1 in -12i64..=12,
        c2 in -12i64..=12,
        e in -4i64..=4,
    ) {
        let ring = laurent_ring();
        let s = sparse_scalar(&ring, "v", c1, c2, e);
        let reparsed = parse_scalar(&s.to_string(), &ring).unwrap();
        prop_assert_eq!(reparsed, s);
    }

    #[test]
    fn fraction_scalars_round_trip_through_text(
        num in -9i64..=9,
        nume in 0i64..=3,
        den in 1i64..=5,
        dene in 1i64..=3,
    ) {
        let ring = Ring::frac(poly_ring());
        // (num * a^nume) / (a^dene + den): the denominator is nonzero
        // because den >= 1, so inversion always succeeds.
        let numerator = sparse_scalar(&ring, "a", 0, num, nume);
        let denominator = sparse_scalar(&ring, "a", den, 1, dene);
        let s = numerator.mul(&denominator.inv().unwrap());
        let reparsed = parse_scalar(&s.to_string(), &ring).unwrap();
        prop_assert_eq!(reparsed, s);
    }
}

fn laurent_terms() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-3i64..=3, -5i64..=5), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn laurent_multiplication_is_commutative_and_associative(
        ta in laurent_terms(),
        tb in laurent_terms(),
        tc in laurent_terms(),
    ) {
        let ring = Ring::Int;
        let p = small_laurent(&ring, &ta);
        let q = small_laurent(&ring, &tb);
        let r = small_laurent(&ring, &tc);
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
    }

    #[test]
    fn evaluation_at_one_is_a_ring_homomorphism(
        ta in laurent_terms(),
        tb in laurent_terms(),
    ) {
        let ring = Ring::Int;
        let p = small_laurent(&ring, &ta);
        let q = small_laurent(&ring, &tb);
        prop_assert_eq!(
            p.mul(&q).eval_at_one(),
            p.eval_at_one().mul(&q.eval_at_one())
        );
        prop_assert_eq!(
            p.add(&q).eval_at_one(),
            p.eval_at_one().add(&q.eval_at_one())
        );
    }

    #[test]
    fn laurent_shift_composes_additively(
        ta in laurent_terms(),
        j in -3i64..=3,
        k in -3i64..=3,
    ) {
        let p = small_laurent(&Ring::Int, &ta);
        prop_assert_eq!(p.shift(j).shift(k), p.shift(j + k));
        prop_assert_eq!(p.shift(j).eval_at_one(), p.eval_at_one());
    }
}

fn square_entries(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn charpoly_of_a_block_diagonal_matrix_factors(
        ea in (1usize..=3).prop_flat_map(square_entries),
        eb in (1usize..=3).prop_flat_map(square_entries),
    ) {
        let a = rational_matrix(&ea);
        let b = rational_matrix(&eb);
        let n = a.nrows();
        let ring = Ring::Rat;
        let block = Matrix::from_fn(&ring, n + b.nrows(), n + b.nrows(), |i, j| {
            if i < n && j < n {
                a.get(i, j).clone()
            } else if i >= n && j >= n {
                b.get(i - n, j - n).clone()
            } else {
                Scalar::zero(&ring)
            }
        });
        prop_assert_eq!(block.charpoly(), a.charpoly().mul(&b.charpoly()));
    }

    #[test]
    fn charpoly_is_invariant_under_permutation_conjugation(
        (entries, perm) in (1usize..=4).prop_flat_map(|n| {
            (square_entries(n), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        }),
    ) {
        let a = rational_matrix(&entries);
        let n = a.nrows();
        let ring = Ring::Rat;
        let p = Matrix::from_fn(&ring, n, n, |i, j| {
            if perm[i] == j { Scalar::one(&ring) } else { Scalar::zero(&ring) }
        });
        let conjugated = p.mul(&a).mul(&p.transpose());
        prop_assert_eq!(conjugated.charpoly(), a.charpoly());
    }
}

fn block_counts() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..=2, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn graded_characters_add_over_direct_sums(
        ca in block_counts(),
        cb in block_counts(),
    ) {
        let blocks = exterior_blocks();
        let (m, n) = match (assemble(&blocks, &ca), assemble(&blocks, &cb)) {
            (Some(m), Some(n)) => (m, n),
            _ => return Ok(()),
        };
        let lhs = graded_character(&direct_sum(&m, &n));
        let rhs = graded_character(&m).add(&graded_character(&n)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_characters_track_shifts(
        ca in block_counts(),
        j in -3i64..=3,
    ) {
        let blocks = exterior_blocks();
        let m = match assemble(&blocks, &ca) {
            Some(m) => m,
            None => return Ok(()),
        };
        prop_assert_eq!(graded_character(&m.shift(j)), graded_character(&m).shift(j));
    }

    #[test]
    fn fingerprints_are_multiplicative_over_direct_sums(
        ca in block_counts(),
        cb in block_counts(),
    ) {
        let blocks = exterior_blocks();
        let (m, n) = match (assemble(&blocks, &ca), assemble(&blocks, &cb)) {
            (Some(m), Some(n)) => (m, n),
            _ => return Ok(()),
        };
        let whole = fingerprint(&direct_sum(&m, &n), 2);
        let parts = fingerprint(&m, 2).mul(&fingerprint(&n, 2)).unwrap();
        prop_assert_eq!(fingerprint_equal(&whole, &parts).unwrap(), true);
    }
}

fn fixture_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(gradec_core::FIXTURE_NAMES.as_slice())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sessions_survive_an_emit_parse_cycle(
        name in fixture_name(),
        label in "[a-z][a-z0-9-]{0,11}",
    ) {
        let mut file = fixture(name).unwrap();
        file.name = label;
        let first = emit_session(&file);
        let second = emit_session(&parse_session_str(&first).unwrap().file);
        prop_assert_eq!(first, second);
    }
}
