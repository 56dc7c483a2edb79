use proptest::prelude::*;
use strongdim::complexcat::complex_from_picks;
use strongdim::homlin::{decompose, is_isomorphic};
use strongdim::{Complex, FieldTag, Gf2, MonomialAlgebra, Rational};

fn ex45() -> MonomialAlgebra {
    MonomialAlgebra::from_spec(
        &[1, 2, 3],
        &[("a", 1, 2), ("b", 2, 3)],
        &[&["a", "b"]],
        FieldTag::Rational,
    )
    .unwrap()
}

fn build<F: strongdim::Field>(alg: &MonomialAlgebra, sizes: &[usize], picks: &[usize]) -> Complex<F> {
    let mut it = picks.iter().cycle();
    complex_from_picks(alg, sizes, &mut |m| it.next().unwrap() % m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn differentials_square_to_zero(sizes in prop::collection::vec(0usize..3, 2..5), picks in prop::collection::vec(0usize..1000, 1..40)) {
        let alg = ex45();
        let x: Complex<Rational> = build(&alg, &sizes, &picks);
        prop_assert!(x.is_complex(&alg));
    }

    #[test]
    fn embeddings_invert(sizes in prop::collection::vec(0usize..3, 2..5), picks in prop::collection::vec(0usize..1000, 1..40)) {
        let alg = ex45();
        let x: Complex<Rational> = build(&alg, &sizes, &picks);
        prop_assert_eq!(x.embed_left().drop_first(), x.clone());
        prop_assert_eq!(x.embed_right().drop_last(), x);
    }

    #[test]
    fn decomposition_reassembles(sizes in prop::collection::vec(0usize..3, 2..4), picks in prop::collection::vec(0usize..1000, 1..30)) {
        let alg = ex45();
        let x: Complex<Gf2> = build(&alg, &sizes, &picks);
        prop_assume!(!x.is_zero());
        let parts = decompose(&alg, &x).unwrap();
        let total: usize = parts.iter().map(|p| p.summand_count()).sum();
        prop_assert_eq!(total, x.summand_count());
        let mut sum = Complex::zero(x.window());
        for p in &parts {
            sum = sum.direct_sum_raw(p).unwrap();
        }
        prop_assert!(is_isomorphic(&alg, &sum, &x).unwrap());
    }

    #[test]
    fn stripping_keeps_homotopy_length(sizes in prop::collection::vec(0usize..3, 2..5), picks in prop::collection::vec(0usize..1000, 1..40)) {
        let alg = ex45();
        let x: Complex<Rational> = build(&alg, &sizes, &picks);
        let s = x.strip_contractible(&alg);
        prop_assert!(s.is_complex(&alg));
        prop_assert_eq!(s.length(&alg), x.length(&alg));
        prop_assert_eq!(s.strip_contractible(&alg).summand_count(), s.summand_count());
    }
}
