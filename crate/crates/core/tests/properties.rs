mod common;

use std::collections::BTreeSet;

use common::*;
use dset_core::axioms::is_dset;
use dset_core::generators::{apply_coloring, gen_random, Coloring, TreeSpec};
use dset_core::homtypes::{extend_partial_iso, extend_partial_iso_brute, qftp_base, PartialIso};
use dset_core::indiscernible::{classify_sequence, weakly_indiscernible_over, SequenceWindow, WindowClass};
use dset_core::json::{dset_from_str, dset_to_value, tree_from_str, tree_to_value};
use dset_core::splitting::{enumerate_splittings, extend_by_point, induced_splitting};
use dset_core::tree::{d_from_tree, shape_form, tree_from_dset, LeafTree};
use dset_core::{are_isomorphic, DSet, ElementId};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_tree(leaves: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = LeafTree> {
    (leaves, any::<u64>()).prop_map(|(k, seed)| gen_random(TreeSpec::Random { leaves: k }, seed).unwrap())
}

fn shuffled(n: usize, len: usize, seed: u64) -> Vec<ElementId> {
    let mut v: Vec<ElementId> = (0..n).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    v.truncate(len);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_relation_is_path_disjointness(t in random_tree(3..=8)) {
        let d = d_from_tree(&t);
        prop_assert!(matches_tree(&d, &t));
        prop_assert!(is_dset(&d));
    }

    #[test]
    fn reconstruction_round_trips(t in random_tree(3..=9)) {
        let d = d_from_tree(&t);
        let back = tree_from_dset(&d).unwrap();
        prop_assert_eq!(shape_form(&back), shape_form(&t));
        prop_assert_eq!(d_from_tree(&back), d);
    }

    #[test]
    fn splittings_match_partition_oracle(t in random_tree(3..=6)) {
        let d = d_from_tree(&t);
        let got: BTreeSet<_> = enumerate_splittings(&d).unwrap().iter().map(sectors_of).collect();
        prop_assert_eq!(got, splittings_oracle(&d));
    }

    #[test]
    fn point_extension_induces_its_splitting(t in random_tree(3..=7), pick in any::<prop::sample::Index>()) {
        let d = d_from_tree(&t);
        let all = enumerate_splittings(&d).unwrap();
        let s = &all[pick.index(all.len())];
        let ext = extend_by_point(&d, s).unwrap();
        prop_assert!(is_dset(&ext));
        let universe: Vec<ElementId> = d.elements().collect();
        prop_assert_eq!(induced_oracle(&ext, &universe, d.len()), s.sectors().to_vec());
        prop_assert_eq!(&induced_splitting(&ext, &universe, d.len()).unwrap(), s);
    }

    #[test]
    fn qftp_base_predicts_every_atom(t in random_tree(4..=8), seed in any::<u64>(), size in 2usize..6) {
        let d = d_from_tree(&t);
        let order = shuffled(d.len(), d.len(), seed);
        let e = order[0];
        let mut set: Vec<ElementId> = order[1..].iter().copied().take(size).collect();
        set.sort_unstable();
        let base = qftp_base(&d, &set, e).unwrap();
        prop_assert!(base.base.len() <= 3);
        for &y1 in &set {
            for &y2 in &set {
                for &y3 in &set {
                    prop_assert_eq!(base.predict(&d, y1, y2, y3), d.holds(e, y1, y2, y3));
                }
            }
        }
    }

    #[test]
    fn extension_search_matches_oracle(t in random_tree(4..=7), seed in any::<u64>(), size in 1usize..4, colors in 1u32..3) {
        let d = apply_coloring(&d_from_tree(&t), Coloring::RoundRobin { colors }, 0).unwrap();
        // Grow a partial isomorphism one oracle-approved pair at a time.
        let dom = shuffled(d.len(), size + 1, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut pairs: Vec<(ElementId, ElementId)> = Vec::new();
        for &a in &dom[..size] {
            let options = extensions_oracle(&d, &pairs, a);
            pairs.push((a, *options.choose(&mut rng).expect("a colour class has room")));
        }
        let m = PartialIso::new(pairs.iter().copied()).unwrap();
        let x = dom[size];
        let expected = extensions_oracle(&d, &pairs, x);
        prop_assert_eq!(extend_partial_iso_brute(&d, &m, x).unwrap(), expected.clone());
        prop_assert_eq!(extend_partial_iso(&d, &m, x).unwrap(), expected);
    }

    #[test]
    fn classification_agrees_with_order_invariance(t in random_tree(5..=9), seed in any::<u64>()) {
        let d = d_from_tree(&t);
        let s = shuffled(d.len(), 5, seed);
        let invariant = weakly_indiscernible_oracle(&d, &s, &[]);
        let class = classify_sequence(&d, &s).unwrap();
        prop_assert_eq!(invariant, matches!(class, WindowClass::Petaled | WindowClass::Monotonic), "{:?}", class);
    }

    #[test]
    fn weak_indiscernibility_matches_oracle(t in random_tree(6..=9), seed in any::<u64>(), params in 0usize..3) {
        let d = d_from_tree(&t);
        let order = shuffled(d.len(), d.len(), seed);
        let s = &order[..5];
        let b = &order[5..(5 + params).min(order.len())];
        let v = weakly_indiscernible_over(&d, &SequenceWindow::singletons(s), b).unwrap();
        prop_assert_eq!(v.indiscernible, weakly_indiscernible_oracle(&d, s, b));
        prop_assert_eq!(v.witness.is_some(), !v.indiscernible);
    }

    #[test]
    fn isomorphism_finds_relabelings(t in random_tree(3..=8), seed in any::<u64>()) {
        let d1 = d_from_tree(&t);
        let perm = shuffled(d1.len(), d1.len(), seed);
        let d2 = d_from_tree(&t.relabeled(&perm).unwrap());
        let f = are_isomorphic(&d1, &d2, false).unwrap().expect("relabelings are isomorphic");
        prop_assert!(all_quads(d1.len()).all(|[w, x, y, z]| d1.holds(w, x, y, z) == d2.holds(f[w], f[x], f[y], f[z])));
    }

    #[test]
    fn json_round_trips(t in random_tree(2..=8), colors in 1u32..4) {
        let d = apply_coloring(&d_from_tree(&t), Coloring::RoundRobin { colors }, 0).unwrap();
        prop_assert_eq!(dset_from_str(&dset_to_value(&d).to_string()).unwrap(), d);
        let back = tree_from_str(&tree_to_value(&t).to_string()).unwrap();
        prop_assert_eq!(back, t);
    }
}

#[test]
fn non_tree_relations_are_rejected() {
    let bad = DSet::new(4, [[0, 1, 2, 3], [0, 2, 1, 3]]).unwrap();
    assert!(tree_from_dset(&bad).is_err());
}
