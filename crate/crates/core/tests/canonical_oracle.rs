//! Canonical codes against brute-force isomorphism.

mod common;

use common::{all_markings, isomorphic, naive_skeletons, random_tree};
use follab_core::canonical::canonical_form_mod_flip;
use follab_core::{canonical_form, canonical_representative, flip, LevelTree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Codes agree exactly when the brute-force search finds an isomorphism.
fn check_complete(trees: &[LevelTree]) {
    let codes: Vec<_> = trees.iter().map(|t| canonical_form(t).unwrap()).collect();
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            assert_eq!(
                codes[i] == codes[j],
                isomorphic(&trees[i], &trees[j]),
                "code/isomorphism disagreement:\n{}\n{}",
                trees[i].to_json(),
                trees[j].to_json()
            );
        }
    }
}

#[test]
fn complete_on_small_marked_trees() {
    for s in 0..=3 {
        let mut trees = Vec::new();
        for skel in naive_skeletons(s) {
            trees.extend(all_markings(&skel, 2));
        }
        check_complete(&trees);
    }
}

#[test]
fn complete_on_random_trees_up_to_twenty_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in [4usize, 6, 9] {
        // Re-marking a few fixed shapes gives many isomorphic and
        // near-isomorphic pairs.
        let shapes: Vec<LevelTree> = (0..4).map(|_| random_tree(&mut rng, s, 0)).collect();
        let mut trees = Vec::new();
        for shape in &shapes {
            for _ in 0..15 {
                let mut t = shape.clone();
                let n = t.edges.len();
                for i in 0..3 {
                    let e = rand::Rng::gen_range(&mut rng, 0..n);
                    t.edges[e].marks.push(follab_core::MarkPoint::new(format!("x{i}")));
                }
                assert!(t.vertices.len() <= 20);
                trees.push(t);
            }
        }
        check_complete(&trees);
    }
}

#[test]
fn invariant_under_relabeling_and_reordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let t = random_tree(&mut rng, 5, 3);
        let mut u = t.clone();
        for (i, v) in u.vertices.iter_mut().enumerate() {
            let old = std::mem::replace(&mut v.id, format!("w{i}"));
            for e in u.edges.iter_mut() {
                if e.lower.vertex == old {
                    e.lower.vertex = format!("w{i}");
                }
                if e.upper.vertex == old {
                    e.upper.vertex = format!("w{i}");
                }
            }
        }
        u.edges.reverse();
        u.vertices.reverse();
        assert!(isomorphic(&t, &u));
        assert_eq!(canonical_form(&t).unwrap(), canonical_form(&u).unwrap());
        assert_eq!(canonical_representative(&t).unwrap(), canonical_representative(&u).unwrap());
    }
}

#[test]
fn representative_is_isomorphic_to_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let t = random_tree(&mut rng, 6, 4);
        let r = canonical_representative(&t).unwrap();
        assert!(r.is_valid());
        assert!(isomorphic(&t, &r));
    }
}

#[test]
fn mod_flip_code_matches_flip_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let a = random_tree(&mut rng, 3, 2);
        let b = random_tree(&mut rng, 3, 2);
        let fb = flip(&b).unwrap();
        assert_eq!(canonical_form_mod_flip(&b).unwrap(), canonical_form_mod_flip(&fb).unwrap());
        let same_orbit = isomorphic(&a, &b) || isomorphic(&a, &fb);
        assert_eq!(
            canonical_form_mod_flip(&a).unwrap() == canonical_form_mod_flip(&b).unwrap(),
            same_orbit
        );
    }
}
