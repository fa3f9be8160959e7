mod common;

use std::collections::BTreeMap;

use hoct::equivalence::{
    backtrack_search, brute_force_search, build_transform, cl_block_equivalences, heuristic_search, invariant_verdict,
    recipe_target, tilde_chain, tilde_equivalence, verify_equivalence, BacktrackOptions, Recipe, Verdict,
};
use hoct::forms::{make_alpha_pq, make_tilde, substitute};
use hoct::gf2::{mat_invert, random_invertible};
use hoct::{Error, GF2Matrix};
use proptest::prelude::*;

fn golden_transforms() -> BTreeMap<String, Vec<String>> {
    let path = format!("{}/tests/golden/transforms.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn smallest_recipes() -> Vec<Recipe> {
    vec![
        Recipe::Lemma4k { k: 1, variant: false },
        Recipe::Lemma4k { k: 1, variant: true },
        Recipe::Lemma4k2 { k: 1 },
        Recipe::Lemma4k3Odd { k: 1 },
        Recipe::Lemma4k3Even { k: 2 },
        Recipe::Lemma4k1Odd { k: 1 },
        Recipe::Lemma4k1OddPost { k: 1 },
        Recipe::Lemma4k1Even { k: 2 },
        Recipe::Lemma4k1EvenPost { k: 2 },
        Recipe::CliffPlus2 { n: 1 },
        Recipe::CliffMinus2 { n: 1 },
        Recipe::O23Flip,
        Recipe::FinalFlip,
    ]
}

#[test]
fn transcriptions_match_golden_rows() {
    let golden = golden_transforms();
    for r in smallest_recipes() {
        let g = build_transform(r).unwrap();
        assert_eq!(g.row_strings(), golden[r.name()], "{}", r.name());
        assert_eq!(common::rank(&g.row_strings()), r.dim());
    }
}

#[test]
fn recipes_reject_out_of_range_parameters() {
    for r in [
        Recipe::Lemma4k { k: 0, variant: false },
        Recipe::Lemma4k2 { k: 0 },
        Recipe::Lemma4k3Odd { k: 2 },
        Recipe::Lemma4k3Even { k: 1 },
        Recipe::Lemma4k1Even { k: 0 },
        Recipe::CliffPlus2 { n: 0 },
        Recipe::Lemma4k { k: 5, variant: false },
    ] {
        assert!(matches!(build_transform(r), Err(Error::InvalidParams(_))), "{r:?}");
    }
}

#[test]
fn every_recipe_is_invertible_across_its_range() {
    for k in 1..=3 {
        let mut rs = vec![
            Recipe::Lemma4k { k, variant: false },
            Recipe::Lemma4k { k, variant: true },
            Recipe::Lemma4k2 { k },
        ];
        if k % 2 == 1 {
            rs.extend([
                Recipe::Lemma4k3Odd { k },
                Recipe::Lemma4k1Odd { k },
                Recipe::Lemma4k1OddPost { k },
            ]);
        } else {
            rs.extend([
                Recipe::Lemma4k3Even { k },
                Recipe::Lemma4k1Even { k },
                Recipe::Lemma4k1EvenPost { k },
            ]);
        }
        for r in rs {
            assert!(build_transform(r).unwrap().is_invertible(), "{r:?}");
        }
    }
    for n in 1..=10 {
        assert!(build_transform(Recipe::CliffPlus2 { n }).unwrap().is_invertible());
        assert!(build_transform(Recipe::CliffMinus2 { n }).unwrap().is_invertible());
    }
}

#[test]
fn recipe_targets_hold_pointwise() {
    let mut covered = 0;
    for k in 1..=3 {
        let mut rs = vec![
            Recipe::Lemma4k { k, variant: false },
            Recipe::Lemma4k { k, variant: true },
            Recipe::Lemma4k2 { k },
        ];
        if k % 2 == 1 {
            rs.extend([
                Recipe::Lemma4k3Odd { k },
                Recipe::Lemma4k1Odd { k },
                Recipe::Lemma4k1OddPost { k },
            ]);
        } else {
            rs.extend([
                Recipe::Lemma4k3Even { k },
                Recipe::Lemma4k1Even { k },
                Recipe::Lemma4k1EvenPost { k },
            ]);
        }
        for r in rs {
            let n = r.dim();
            let rows = build_transform(r).unwrap().row_strings();
            for p in 0..=n {
                let Ok(target) = recipe_target(r, p, n - p) else {
                    continue;
                };
                covered += 1;
                // target(x) = alpha_{p,q}(Gx)
                assert!(
                    common::equivalent_under(n, |x| target.eval_bits(x), |y| common::alpha_pq(p, y), &rows),
                    "{} at ({p},{})",
                    r.name(),
                    n - p
                );
            }
        }
    }
    assert!(covered > 30);
}

#[test]
fn verify_equivalence_contract() {
    let a = make_alpha_pq(1, 3).unwrap();
    assert!(verify_equivalence(&a, &a, &GF2Matrix::identity(4).unwrap()).unwrap());
    let b = make_alpha_pq(0, 3).unwrap();
    assert!(matches!(
        verify_equivalence(&a, &b, &GF2Matrix::identity(3).unwrap()),
        Err(Error::DimensionMismatch(..))
    ));
    let singular = GF2Matrix::parse_rows(&["1100", "1100", "0010", "0001"]).unwrap();
    assert_eq!(verify_equivalence(&a, &a, &singular), Err(Error::Singular));
}

#[test]
fn exhaustive_search_examples() {
    let a = |p, q| make_alpha_pq(p, q).unwrap();
    assert!(brute_force_search(&a(3, 0), &a(1, 2)).unwrap().is_equivalent());
    let v = brute_force_search(&a(0, 3), &a(1, 2)).unwrap();
    assert!(matches!(&v, Verdict::Inequivalent { invariant, .. } if invariant == "exhaustive"));
    assert!(brute_force_search(&a(4, 0), &a(2, 2)).unwrap().is_equivalent());
    assert!(brute_force_search(&a(2, 2), &a(1, 3)).unwrap().is_inequivalent());
    assert!(matches!(brute_force_search(&a(3, 3), &a(2, 4)), Err(Error::Cap(6, 5))));
}

#[test]
fn heuristic_search_examples() {
    let a04 = make_alpha_pq(0, 4).unwrap();
    assert_eq!(
        heuristic_search(&a04, &a04, 3, 10).unwrap(),
        Verdict::Equivalent {
            witness: GF2Matrix::identity(4).unwrap()
        }
    );
    let v = heuristic_search(&a04, &make_alpha_pq(2, 2).unwrap(), 3, 10).unwrap();
    assert!(v.is_inequivalent());
    assert!(invariant_verdict(&a04, &make_alpha_pq(2, 2).unwrap()).is_some());

    let (a05, t05) = (make_alpha_pq(0, 5).unwrap(), make_tilde(0, 5).unwrap());
    let found = heuristic_search(&a05, &t05, 7, 100_000).unwrap();
    let w = found.witness().expect("witness within budget");
    assert!(verify_equivalence(&a05, &t05, w).unwrap());
    assert_eq!(heuristic_search(&a05, &t05, 7, 100_000).unwrap(), found);
}

#[test]
fn verdict_json_shape() {
    let eq = Verdict::Equivalent {
        witness: GF2Matrix::identity(2).unwrap(),
    };
    assert_eq!(
        serde_json::to_string(&eq).unwrap(),
        r#"{"verdict":"equivalent","witness":{"n":2,"rows":["10","01"]}}"#
    );
    let v = invariant_verdict(&make_alpha_pq(0, 7).unwrap(), &make_alpha_pq(7, 0).unwrap()).unwrap();
    let json: serde_json::Value = serde_json::to_value(&v).unwrap();
    assert_eq!(json["verdict"], "inequivalent");
    assert_eq!(json["invariant"], "zero_count");
    assert_eq!(json["lhs"], 36);
}

#[test]
fn searches_agree_up_to_dimension_four() {
    for n in 3..=4 {
        for p in 0..=n {
            for p2 in 0..=n {
                let (a, b) = (make_alpha_pq(p, n - p).unwrap(), make_alpha_pq(p2, n - p2).unwrap());
                let brute = brute_force_search(&a, &b).unwrap().is_equivalent();
                let bt = backtrack_search(&a, &b, BacktrackOptions::default()).unwrap();
                assert_eq!(bt.is_equivalent(), brute);
                assert_eq!(bt.is_inequivalent(), !brute);
                let hc = heuristic_search(&a, &b, 1, 200_000).unwrap();
                assert!(!hc.is_equivalent() || brute);
                if brute {
                    assert!(
                        hc.is_equivalent(),
                        "hill climbing missed ({p},{}) ~ ({p2},{})",
                        n - p,
                        n - p2
                    );
                }
            }
        }
    }
}

#[test]
fn backtracking_options() {
    let (a, t) = (make_alpha_pq(2, 5).unwrap(), make_tilde(2, 5).unwrap());
    let v = backtrack_search(&a, &t, BacktrackOptions::default()).unwrap();
    assert!(verify_equivalence(&a, &t, v.witness().unwrap()).unwrap());
    let starved = backtrack_search(
        &a,
        &t,
        BacktrackOptions {
            node_limit: 1,
            fix_first_coordinate: false,
        },
    )
    .unwrap();
    assert!(matches!(starved, Verdict::Unknown { .. }));
    let x = make_tilde(1, 3).unwrap();
    let fixed = backtrack_search(
        &x,
        &x,
        BacktrackOptions {
            node_limit: 1_000_000,
            fix_first_coordinate: true,
        },
    )
    .unwrap();
    assert_eq!(fixed.witness().unwrap().apply_bits(1) & 1, 1);
}

#[test]
fn tilde_chains() {
    assert_eq!(tilde_equivalence(0, 3).unwrap(), GF2Matrix::identity(3).unwrap());
    for (p, q) in [(0, 4), (2, 3), (3, 4), (4, 4), (1, 8)] {
        let chain = tilde_chain(p, q).unwrap();
        assert!(chain.final_composed_check);
        assert_eq!(chain.lhs(), &make_alpha_pq(p, q).unwrap());
        assert_eq!(chain.rhs(), &make_tilde(p, q).unwrap());
        for pair in chain.links.windows(2) {
            assert_eq!(pair[0].rhs_form, pair[1].lhs_form);
        }
        for link in &chain.links {
            assert!(verify_equivalence(&link.lhs_form, &link.rhs_form, &link.witness).unwrap());
            // the inverse witness works for the swapped pair
            let inv = mat_invert(&link.witness).unwrap();
            assert!(verify_equivalence(&link.rhs_form, &link.lhs_form, &inv).unwrap());
            assert!(!link.provenance.is_empty());
        }
    }
    assert!(tilde_chain(1, 1).is_err());
}

#[test]
fn clifford_blocks() {
    let k1 = cl_block_equivalences(1, 7, 1000).unwrap();
    assert!(k1
        .iter()
        .any(|e| e.provenance == "identity" && e.witness == GF2Matrix::identity(2).unwrap()));
    for e in cl_block_equivalences(2, 7, 1000).unwrap() {
        assert_eq!(e.provenance, "search:exhaustive");
        assert!(verify_equivalence(&e.lhs_form, &e.rhs_form, &e.witness).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn invariants_never_separate_equivalent_forms(p in 0usize..=6, s in any::<u64>()) {
        let a = make_alpha_pq(p, 6 - p).unwrap();
        let g = random_invertible(6, s).unwrap();
        let b = substitute(&a, &g).unwrap();
        prop_assert!(invariant_verdict(&a, &b).is_none());
    }

    #[test]
    fn witnesses_compose(p in 0usize..=5, s in any::<u64>(), t in any::<u64>()) {
        let a = make_alpha_pq(p, 5 - p).unwrap();
        let (g, h) = (random_invertible(5, s).unwrap(), random_invertible(5, t).unwrap());
        // b = a o g^-1, so a(x) = b(gx)
        let b = substitute(&a, &mat_invert(&g).unwrap()).unwrap();
        let c = substitute(&b, &mat_invert(&h).unwrap()).unwrap();
        prop_assert!(verify_equivalence(&a, &b, &g).unwrap());
        prop_assert!(verify_equivalence(&b, &c, &h).unwrap());
        prop_assert!(verify_equivalence(&a, &c, &h.mul(&g).unwrap()).unwrap());
    }
}
