//! Exact scalars, univariate polynomials and truncated power series.

mod cyclo;
mod series;
mod unipoly;

pub use cyclo::{cyclotomic_coeffs, euler_phi, CycloScalar};
pub use series::TruncSeries;
pub use unipoly::{cyclotomic_polynomial, UniPoly};

#[cfg(test)]
mod props {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn scalar(m: u32) -> impl Strategy<Value = CycloScalar> {
        prop::collection::vec((-20i64..20, 1i64..6), euler_phi(m)).prop_map(move |v| {
            CycloScalar::from_coeffs(
                m,
                v.into_iter()
                    .map(|(n, d)| BigRational::new(n.into(), d.into()))
                    .collect(),
            )
        })
    }

    fn triple() -> impl Strategy<Value = (CycloScalar, CycloScalar, CycloScalar)> {
        prop::sample::select(vec![1u32, 4, 5, 12])
            .prop_flat_map(|m| (scalar(m), scalar(m), scalar(m)))
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in triple()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn series_product_is_truncated_poly_product(
            p in prop::collection::vec(-5i64..5, 1..6),
            q in prop::collection::vec(-5i64..5, 1..6),
            order in 0usize..8,
        ) {
            let (p, q) = (UniPoly::from_i64s(&p), UniPoly::from_i64s(&q));
            let lhs = TruncSeries::from_poly(&p, order).mul(&TruncSeries::from_poly(&q, order));
            prop_assert_eq!(lhs, TruncSeries::from_poly(&(&p * &q), order));
        }

        #[test]
        fn reciprocal_inverts(tail in prop::collection::vec(-4i64..4, 0..5), c0 in 1i64..4, order in 0usize..8) {
            let mut coeffs = vec![c0];
            coeffs.extend(tail);
            let s = TruncSeries::from_poly(&UniPoly::from_i64s(&coeffs), order);
            prop_assert_eq!(s.mul(&s.reciprocal().unwrap()), TruncSeries::one(order));
        }
    }
}
