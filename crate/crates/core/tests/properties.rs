//! Randomized properties: scalar field axioms, pairing against the
//! triple-product trace, linearity of the pairing, and agreement of the
//! fast multiplication paths with the schoolbook product.

use proptest::prelude::*;

use orbitmul_core::scalar::rat;
use orbitmul_core::tensor::{identity_tensor, mm_tensor, outer, pairing};
use orbitmul_core::{
    naive_multiply, strassen_reference, BilinearAlgorithm, ComplexFloat, Matrix, MultCounter,
    One, QuadExt, Rational, Scalar, Tensor3, Vector, Zero,
};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

/// Three elements of one quadratic field (binary operations require a shared
/// radicand).
fn arb_quad_triple() -> impl Strategy<Value = (QuadExt, QuadExt, QuadExt)> {
    (
        prop::sample::select(vec![2u64, 3, 5, 6, 30]),
        proptest::array::uniform6(arb_rational()),
    )
        .prop_map(|(d, [a1, b1, a2, b2, a3, b3])| {
            (
                QuadExt::new(a1, b1, d).unwrap(),
                QuadExt::new(a2, b2, d).unwrap(),
                QuadExt::new(a3, b3, d).unwrap(),
            )
        })
}

fn arb_complex() -> impl Strategy<Value = ComplexFloat> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| ComplexFloat::new(re, im))
}

fn arb_matrix(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    proptest::collection::vec(arb_rational(), n * n).prop_map(move |entries| {
        Matrix::from_rows(entries.chunks(n).map(|row| row.to_vec()).collect())
    })
}

fn field_axioms<S: Scalar>(x: &S, y: &S, z: &S) {
    // Addition: commutative, associative, identity, inverses.
    assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
    assert_eq!(
        (x.clone() + y.clone()) + z.clone(),
        x.clone() + (y.clone() + z.clone())
    );
    assert_eq!(x.clone() + S::zero(), x.clone());
    assert_eq!(x.clone() + (-x.clone()), S::zero());
    assert_eq!(x.clone() - y.clone(), x.clone() + (-y.clone()));
    // Multiplication: commutative, associative, identity.
    assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
    assert_eq!(
        (x.clone() * y.clone()) * z.clone(),
        x.clone() * (y.clone() * z.clone())
    );
    assert_eq!(x.clone() * S::one(), x.clone());
    // Distributivity.
    assert_eq!(
        x.clone() * (y.clone() + z.clone()),
        x.clone() * y.clone() + x.clone() * z.clone()
    );
    // Multiplicative inverse off zero.
    if !x.is_zero() {
        assert_eq!(x.clone() * x.inv().unwrap(), S::one());
    } else {
        assert!(x.inv().is_err());
    }
}

proptest! {
    #[test]
    fn rational_field_axioms(
        x in arb_rational(),
        y in arb_rational(),
        z in arb_rational(),
    ) {
        field_axioms(&x, &y, &z);
    }

    #[test]
    fn quadratic_field_axioms((x, y, z) in arb_quad_triple()) {
        field_axioms(&x, &y, &z);
    }

    #[test]
    fn complex_float_axioms_hold_approximately(
        x in arb_complex(),
        y in arb_complex(),
        z in arb_complex(),
    ) {
        prop_assert!((x + y - (y + x)).mag() <= 1e-12);
        prop_assert!(((x + y) + z - (x + (y + z))).mag() <= 1e-12);
        prop_assert!((x * y - y * x).mag() <= 1e-12);
        prop_assert!(((x * y) * z - x * (y * z)).mag() <= 1e-10);
        prop_assert!((x * (y + z) - (x * y + x * z)).mag() <= 1e-10);
        if x.mag() > 1e-6 {
            prop_assert!((x * x.inv().unwrap() - ComplexFloat::one()).mag() <= 1e-9);
        }
    }

    #[test]
    fn quad_inverse_reverses_multiplication((x, y, _) in arb_quad_triple()) {
        prop_assume!(!y.is_zero());
        let q = x.checked_div(&y).unwrap();
        prop_assert_eq!(q * y, x);
    }

    #[test]
    fn quad_to_float_is_a_homomorphism((x, y, _) in arb_quad_triple()) {
        let sum = (x.clone() + y.clone()).to_float();
        let sum_f = x.to_float() + y.to_float();
        prop_assert!((sum - sum_f).mag() <= 1e-9);
        let prod = (x.clone() * y.clone()).to_float();
        let prod_f = x.to_float() * y.to_float();
        prop_assert!((prod - prod_f).mag() <= 1e-9 * (1.0 + x.mag() * y.mag()));
    }

    #[test]
    fn quad_order_matches_float_order((x, y, _) in arb_quad_triple()) {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x < y, fx < fy);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_equals_triple_product_trace(
        n in 1usize..=4,
        seed_entries in proptest::collection::vec(arb_rational(), 48),
    ) {
        let take = |offset: usize| {
            Matrix::from_rows(
                (0..n)
                    .map(|i| seed_entries[offset + i * n..offset + (i + 1) * n].to_vec())
                    .collect(),
            )
        };
        let a = take(0);
        let b = take(16);
        let c = take(32);
        let t: Tensor3<Rational> = mm_tensor(n);
        prop_assert_eq!(pairing(&t, &a, &b, &c), a.mul(&b).mul(&c).trace());
    }

    #[test]
    fn pairing_with_identity_tensor_is_trace_product(
        a in arb_matrix(3),
        b in arb_matrix(3),
        c in arb_matrix(3),
    ) {
        let t: Tensor3<Rational> = identity_tensor(3);
        prop_assert_eq!(pairing(&t, &a, &b, &c), a.trace() * b.trace() * c.trace());
    }

    #[test]
    fn pairing_is_linear_in_each_slot(
        a in arb_matrix(2),
        a2 in arb_matrix(2),
        b in arb_matrix(2),
        c in arb_matrix(2),
        coeff in arb_rational(),
    ) {
        let t: Tensor3<Rational> = mm_tensor(2);
        let lhs = pairing(&t, &a.scale(&coeff).add(&a2), &b, &c);
        let rhs = coeff * pairing(&t, &a, &b, &c) + pairing(&t, &a2, &b, &c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn outer_product_is_rank_one_and_conjugates_the_bra(
        u in proptest::collection::vec(arb_complex(), 3),
        v in proptest::collection::vec(arb_complex(), 3),
    ) {
        let uv = outer(
            &Vector::from_vec(u.clone()),
            &Vector::from_vec(v.clone()),
        );
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((uv[(i, j)] - u[i] * v[j].conj()).mag() <= 1e-12);
            }
        }
        // Self outer products are Hermitian.
        let uu = outer(&Vector::from_vec(u.clone()), &Vector::from_vec(u));
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((uu[(i, j)] - uu[(j, i)].conj()).mag() <= 1e-12);
            }
        }
    }

    #[test]
    fn recursive_multiplication_agrees_with_schoolbook(
        size in 1usize..=6,
        entries in proptest::collection::vec(-9i64..=9, 72),
    ) {
        let take = |offset: usize| {
            Matrix::<Rational>::from_rows(
                (0..size)
                    .map(|i| {
                        entries[offset + i * size..offset + (i + 1) * size]
                            .iter()
                            .map(|&x| rat(x, 1))
                            .collect()
                    })
                    .collect(),
            )
        };
        let a = take(0);
        let b = take(36);
        let alg = BilinearAlgorithm::from_decomposition(&strassen_reference(), 0.0).unwrap();
        let mut fast_count = MultCounter::new();
        let fast = alg.multiply_recursive(&a, &b, &mut fast_count).unwrap();
        let mut naive_count = MultCounter::new();
        let naive = naive_multiply(&a, &b, &mut naive_count).unwrap();
        prop_assert_eq!(fast, naive);
        prop_assert_eq!(naive_count.total(), (size * size * size) as u64);
        // Padded recursion costs 7^k for the smallest 2^k >= size.
        let k = (0..).find(|&k| 2usize.pow(k) >= size).unwrap();
        prop_assert_eq!(fast_count.total(), 7u64.pow(k));
    }
}
