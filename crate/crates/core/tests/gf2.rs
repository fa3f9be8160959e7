mod common;

use hoct::gf2::{enumerate_gl, gl_order, is_invertible, mat_apply, mat_invert, mat_mul, random_invertible};
use hoct::{Error, GF2Matrix, Z2Vec};
use proptest::prelude::*;

fn v(s: &str) -> Z2Vec {
    Z2Vec::parse(s).unwrap()
}

#[test]
fn identity_fixes_every_vector() {
    let id = GF2Matrix::identity(4).unwrap();
    for x in 0..16 {
        let x = Z2Vec::new(4, x).unwrap();
        assert_eq!(mat_apply(&id, &x).unwrap(), x);
    }
}

#[test]
fn swap_and_hand_example() {
    let swap = GF2Matrix::permutation(&[2, 1, 3]).unwrap();
    assert_eq!(mat_apply(&swap, &v("101")).unwrap(), v("011"));
    let g = GF2Matrix::parse_rows(&["110", "010", "001"]).unwrap();
    assert_eq!(mat_apply(&g, &v("110")).unwrap(), v("010"));
}

#[test]
fn bit_strings_put_x1_first() {
    let x = v("100");
    assert_eq!(x.get(1), 1);
    assert_eq!(x.get(3), 0);
    assert_eq!(x.to_bit_string(), "100");
    assert_eq!(x.weight(), 1);
}

#[test]
fn inversion() {
    let id = GF2Matrix::identity(5).unwrap();
    assert_eq!(mat_invert(&id).unwrap(), id);
    let perm = GF2Matrix::permutation(&[3, 1, 4, 2]).unwrap();
    assert_eq!(mat_invert(&perm).unwrap(), perm.transpose());
    let singular = GF2Matrix::parse_rows(&["11", "11"]).unwrap();
    assert!(!is_invertible(&singular));
    assert_eq!(mat_invert(&singular), Err(Error::Singular));
}

#[test]
fn gl_counts_match_product_formula() {
    for n in 2..=4 {
        let all: Vec<_> = enumerate_gl(n).unwrap().collect();
        assert_eq!(all.len() as u64, common::gl_order(n as u32));
        assert_eq!(gl_order(n), common::gl_order(n as u32) as u128);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(is_invertible));
    }
}

#[test]
fn enumeration_is_capped() {
    assert!(matches!(enumerate_gl(6), Err(Error::Cap(6, 5))));
}

#[test]
fn random_invertible_is_seeded() {
    assert_eq!(random_invertible(6, 11).unwrap(), random_invertible(6, 11).unwrap());
    let distinct: std::collections::HashSet<_> = (0..100).map(|s| random_invertible(6, s).unwrap()).collect();
    assert!(distinct.len() >= 99);
}

#[test]
fn dimension_errors() {
    assert!(Z2Vec::new(17, 0).is_err());
    assert!(Z2Vec::parse("10a").is_err());
    let a = GF2Matrix::identity(3).unwrap();
    let b = GF2Matrix::identity(4).unwrap();
    assert!(mat_mul(&a, &b).is_err());
    assert!(mat_apply(&a, &v("10")).is_err());
}

fn matrix(n: usize) -> impl Strategy<Value = GF2Matrix> {
    any::<u64>().prop_map(move |s| random_invertible(n, s).unwrap())
}

proptest! {
    #[test]
    fn inverse_undoes_apply(g in matrix(4)) {
        let inv = mat_invert(&g).unwrap();
        for x in 0..16 {
            let x = Z2Vec::new(4, x).unwrap();
            prop_assert_eq!(mat_apply(&inv, &mat_apply(&g, &x).unwrap()).unwrap(), x);
        }
        prop_assert_eq!(mat_mul(&g, &inv).unwrap(), GF2Matrix::identity(4).unwrap());
    }

    #[test]
    fn product_applies_right_factor_first(a in matrix(5), b in matrix(5), x in 0u32..32) {
        let x = Z2Vec::new(5, x).unwrap();
        let ab = mat_mul(&a, &b).unwrap();
        prop_assert_eq!(mat_apply(&ab, &x).unwrap(), mat_apply(&a, &mat_apply(&b, &x).unwrap()).unwrap());
    }

    #[test]
    fn product_is_associative(a in matrix(6), b in matrix(6), c in matrix(6)) {
        let left = mat_mul(&mat_mul(&a, &b).unwrap(), &c).unwrap();
        let right = mat_mul(&a, &mat_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn row_strings_round_trip(g in matrix(7)) {
        prop_assert_eq!(GF2Matrix::parse_rows(&g.row_strings()).unwrap(), g.clone());
        prop_assert_eq!(common::rank(&g.row_strings()), 7);
    }
}
