use strongdim::arquiver::{build_ar_quiver, check_theorem_3_21, gamma_bar};
use strongdim::complexcat::make_stalk;
use strongdim::enumerate::{brute_force_indecomposables, enumerate_indecomposables, max_length, EnumConfig, BRUTE_FORCE_LIMIT};
use strongdim::homlin::is_isomorphic;
use strongdim::sgldim::{compute_sgldim, sgldim_fast};
use strongdim::{AlgElement, Complex, FieldTag, Gf2, MonomialAlgebra, PathMatrix, Rational};

fn ex47(tag: FieldTag) -> MonomialAlgebra {
    MonomialAlgebra::from_spec(
        &[1, 2, 3, 4, 5, 6],
        &[
            ("alpha", 1, 2),
            ("beta", 2, 3),
            ("gamma", 3, 4),
            ("delta", 4, 5),
            ("eta", 5, 6),
        ],
        &[&["alpha", "beta"], &["beta", "gamma"], &["delta", "eta"]],
        tag,
    )
    .unwrap()
}

fn arrow_matrix(alg: &MonomialAlgebra, names: &[&str]) -> PathMatrix<Rational> {
    let el = AlgElement::from_arrows(alg, names).unwrap();
    let mut m = PathMatrix::zero(vec![el.source], vec![el.target]);
    m.set(0, 0, &el).unwrap();
    m
}

#[test]
fn example_47_strong_global_dimension() {
    let alg = ex47(FieldTag::Rational);
    assert_eq!(alg.global_dimension::<Rational>().unwrap(), 3);
    let report = compute_sgldim::<Rational>(&alg, 16).unwrap();
    assert_eq!((report.m0, report.sgldim), (6, 4));
    let expected = Complex::new(
        &alg,
        5,
        vec![vec![5], vec![4], vec![2], vec![1], vec![0]],
        vec![
            arrow_matrix(&alg, &["eta"]),
            arrow_matrix(&alg, &["gamma", "delta"]),
            arrow_matrix(&alg, &["beta"]),
            arrow_matrix(&alg, &["alpha"]),
        ],
    )
    .unwrap();
    assert!(is_isomorphic(&alg, &report.witness, &expected).unwrap());
    assert_eq!(sgldim_fast::<Rational>(&alg, 16).unwrap().sgldim, 4);
}

#[test]
fn example_47_window_five_over_gf2() {
    let alg = ex47(FieldTag::Prime(2));
    let u = enumerate_indecomposables::<Gf2>(&alg, 5, &EnumConfig::default()).unwrap();
    let (len, w) = max_length(&alg, &u).unwrap();
    assert_eq!(len, 4);
    assert_eq!(u.reps[w.unwrap()].describe(&alg), "P6 -> P5 -> P3 -> P2 -> P1");
}

#[test]
fn stalks_are_classes_everywhere() {
    let alg = ex47(FieldTag::Rational);
    let u = enumerate_indecomposables::<Rational>(&alg, 3, &EnumConfig::default()).unwrap();
    for v in 0..alg.vertex_count() {
        for pos in 1..=3 {
            let s = make_stalk::<Rational>(v, pos, 3).unwrap();
            assert!(u.find(&alg, &s).unwrap().is_some());
        }
    }
}

#[test]
fn oracle_matches_closure_on_example_45() {
    let alg = MonomialAlgebra::from_spec(
        &[1, 2, 3],
        &[("a", 1, 2), ("b", 2, 3)],
        &[&["a", "b"]],
        FieldTag::Prime(2),
    )
    .unwrap();
    let closure = enumerate_indecomposables::<Gf2>(&alg, 2, &EnumConfig::default()).unwrap();
    let oracle = brute_force_indecomposables::<Gf2>(&alg, 2, 2, BRUTE_FORCE_LIMIT).unwrap();
    assert_eq!(closure.signatures(&alg), oracle.signatures(&alg));
}

#[test]
fn example_45_quivers_agree_across_windows() {
    let alg = MonomialAlgebra::from_spec(
        &[1, 2, 3],
        &[("a", 1, 2), ("b", 2, 3)],
        &[&["a", "b"]],
        FieldTag::Rational,
    )
    .unwrap();
    let q3 = build_ar_quiver::<Rational>(&alg, 3).unwrap();
    let q4 = build_ar_quiver::<Rational>(&alg, 4).unwrap();
    assert!(check_theorem_3_21(&alg, &q3, &q4).unwrap().passed());
    let gb = gamma_bar(&alg, &q3).unwrap();
    assert_eq!(gb.quiver.labels[gb.anchor], "P3 -> P2 -> P1");
    assert!(gb.classes.iter().all(|&k| !q3.flags[k].proj_injective()));
}
