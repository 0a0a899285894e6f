use frobenius_core::exact::{self, rat, RationalMatrix};
use frobenius_core::gallery::{self, cyclic_support, family_support};
use frobenius_core::sln::{certify, kirillov_matrix};
use frobenius_core::{Family, Functional, LieSupport};
use num::Integer;
use proptest::prelude::*;

fn coprime() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=8).prop_flat_map(|n| (Just(n), 1..n)).prop_filter("coprime", |&(n, m)| n.gcd(&m) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cyclic_support_is_a_tree_of_n_minus_one_pairs((n, m) in coprime()) {
        let (s, _) = cyclic_support(n, m).unwrap();
        prop_assert_eq!(s.len(), n - 1);
        prop_assert!(gallery::gamma_graph(n, &s).is_tree());
        let g = LieSupport::parabolic(n, m).unwrap();
        prop_assert!(s.iter().all(|p| g.contains(*p)));
    }

    #[test]
    fn cyclic_functional_is_frobenius((n, m) in coprime()) {
        let (g, s) = family_support(Family::Cyclic, n, m).unwrap();
        let km = kirillov_matrix(&g, &Functional::from_support(&s)).unwrap();
        prop_assert!(km.matrix.is_skew_symmetric());
        prop_assert!(certify(&km).frobenius);
    }

    #[test]
    fn parabolic_dimension(n in 2usize..=12, k in 0usize..11) {
        let m = 1 + k % (n - 1);
        prop_assert_eq!(LieSupport::parabolic(n, m).unwrap().dim(), n * n - m * (n - m) - 1);
    }

    #[test]
    fn inverse_round_trips(entries in proptest::collection::vec(-5i64..=5, 16)) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(<[i64]>::to_vec).collect();
        let a = RationalMatrix::from_i64_rows(&rows).unwrap();
        match exact::invert(&a) {
            Ok(inv) => {
                prop_assert!(a.mul(&inv).unwrap().is_identity());
                prop_assert_eq!(exact::rank(&a), 4);
            }
            Err(_) => prop_assert_eq!(exact::determinant(&a).unwrap(), rat(0)),
        }
    }
}
