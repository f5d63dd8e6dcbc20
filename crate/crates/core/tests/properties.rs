use std::collections::HashSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pancake_core::construct::{base_cycle, construct_cycle, lift, merge_bounds, splice, MergePlan};
use pancake_core::graph::{copy_id, quotient_graph, quotient_of_cycle};
use pancake_core::group::order;
use pancake_core::{EdgeLabel, GenPerm, GraphParams};

fn all_elements(m: u32, n: usize) -> Vec<GenPerm> {
    let count = order(m, n).unwrap();
    (0..count)
        .map(|k| GenPerm::unrank(m, n, k).unwrap())
        .collect()
}

/// Shapes small enough to enumerate.
const SMALL: [(u32, usize); 5] = [(1, 3), (2, 2), (3, 2), (2, 3), (4, 2)];

#[test]
fn group_axioms_exhaustive() {
    for (m, n) in SMALL {
        let els = all_elements(m, n);
        let e = GenPerm::identity(m, n).unwrap();
        for a in &els {
            assert_eq!(a.multiply(&e).unwrap(), *a);
            assert_eq!(e.multiply(a).unwrap(), *a);
            assert!(a.multiply(&a.inverse()).unwrap().is_identity());
            assert!(a.inverse().multiply(a).unwrap().is_identity());
        }
        // Associativity on every triple is cubic; a stride keeps it quick
        // while still mixing all elements.
        let step = if els.len() > 20 { 7 } else { 1 };
        for a in els.iter().step_by(step) {
            for b in &els {
                let ab = a.multiply(b).unwrap();
                for c in els.iter().step_by(step) {
                    assert_eq!(
                        ab.multiply(c).unwrap(),
                        a.multiply(&b.multiply(c).unwrap()).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn rank_is_a_bijection() {
    for (m, n) in SMALL.into_iter().chain([(3, 3), (5, 2)]) {
        let els = all_elements(m, n);
        let distinct: HashSet<&GenPerm> = els.iter().collect();
        assert_eq!(distinct.len(), els.len());
        for (k, p) in els.iter().enumerate() {
            assert_eq!(p.rank(), k as u64);
        }
    }
}

#[test]
fn merge_bound_inequalities_hold() {
    for m in 3..=8u32 {
        for n in 3..=6usize {
            let (s, big) = merge_bounds(m, n).unwrap();
            let mn = m as usize * n;
            if (m, n) != (3, 3) {
                assert!(s + 2 * mn - 1 < big, "m={m} n={n}");
            }
            assert!(big - s > s, "m={m} n={n}");
            assert!(s + 3 < big && s + 4 < big, "m={m} n={n}");
            // The merge range reaches the whole graph with q = mn.
            assert_eq!(mn * (big - 1) + mn, order(m, n).unwrap() as usize);
        }
    }
}

#[test]
fn shortest_merge_overshoots_one_copy_at_three_three() {
    let (s, big) = merge_bounds(3, 3).unwrap();
    assert_eq!((s, big), (3, 18));
    assert_eq!(s + 2 * 9 - 1, 20);
    assert!(s + 2 * 9 - 1 > big + 1);
}

fn shape() -> impl Strategy<Value = (u32, usize)> {
    prop::sample::select(vec![
        (1u32, 4usize),
        (2, 3),
        (3, 3),
        (4, 2),
        (5, 2),
        (3, 4),
        (6, 3),
    ])
}

fn element() -> impl Strategy<Value = GenPerm> {
    shape().prop_flat_map(|(m, n)| {
        (0..order(m, n).unwrap()).prop_map(move |k| GenPerm::unrank(m, n, k).unwrap())
    })
}

fn element_with_index() -> impl Strategy<Value = (GenPerm, usize)> {
    element().prop_flat_map(|p| {
        let n = p.n();
        (Just(p), 1..=n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn flip_and_flop_undo_each_other((p, i) in element_with_index()) {
        prop_assert_eq!(p.flip(i).unwrap().flop(i).unwrap(), p.clone());
        prop_assert_eq!(p.flop(i).unwrap().flip(i).unwrap(), p.clone());
        // Applying a flip m times returns to the start for i = 1.
        let mut q = p.clone();
        for _ in 0..p.m() {
            q = q.flip(1).unwrap();
        }
        prop_assert_eq!(q, p);
    }
}

fn translation_triple() -> impl Strategy<Value = (GenPerm, GenPerm, usize)> {
    prop::sample::select(vec![(3u32, 3usize), (4, 2), (5, 2)]).prop_flat_map(|(m, n)| {
        let count = order(m, n).unwrap();
        (0..count, 0..count, 1..=n).prop_map(move |(a, b, i)| {
            (
                GenPerm::unrank(m, n, a).unwrap(),
                GenPerm::unrank(m, n, b).unwrap(),
                i,
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn left_multiplication_commutes_with_moves((g, x, i) in translation_triple()) {
        let gx = g.multiply(&x).unwrap();
        prop_assert_eq!(g.multiply(&x.flip(i).unwrap()).unwrap(), gx.flip(i).unwrap());
        prop_assert_eq!(g.multiply(&x.flop(i).unwrap()).unwrap(), gx.flop(i).unwrap());
    }

    #[test]
    fn rank_round_trips(p in element()) {
        prop_assert_eq!(GenPerm::unrank(p.m(), p.n(), p.rank()).unwrap(), p.clone());
        prop_assert_eq!(GenPerm::parse(&p.to_string(), p.m()).unwrap(), p);
    }

    #[test]
    fn label_text_round_trips(index in 1usize..20, flip in any::<bool>()) {
        let l = if flip { EdgeLabel::flip(index) } else { EdgeLabel::flop(index) };
        prop_assert_eq!(l.to_string().parse::<EdgeLabel>().unwrap(), l);
        prop_assert_eq!(l.inverse().inverse(), l);
    }

    #[test]
    fn copies_are_isomorphic(m in 3u32..=5, len_seed in 0usize..1000, shift in 0u64..1000) {
        // A cycle lifted into copy n^0 and moved by any element stays a cycle
        // of the same length, wholly inside one copy.
        let low = (m as usize).min(6);
        let total = 2 * (m as usize).pow(2);
        let step = if m % 2 == 0 { 2 } else { 1 };
        let choices: Vec<usize> = (low..=total).step_by(step).collect();
        let len = choices[len_seed % choices.len()];
        let c = lift(&construct_cycle(m, 2, len).unwrap()).unwrap();
        let g = GenPerm::unrank(m, 3, shift % order(m, 3).unwrap()).unwrap();
        let moved = pancake_core::CycleWitness::new(c.params, g.multiply(&c.start).unwrap(), c.word.clone());
        moved.verify().unwrap();
        let copies: HashSet<_> = moved.vertices().unwrap().iter().map(|v| copy_id(v).unwrap()).collect();
        prop_assert_eq!(copies.len(), 1);
    }
}

/// A random plan for `UP(m, n)`: random `q`, distinct base edges and
/// sub-lengths drawn from `(s, M]` (even for even `m`).
pub fn random_plan(
    rng: &mut ChaCha8Rng,
    m: u32,
    n: usize,
) -> (MergePlan, Vec<pancake_core::CycleWitness>) {
    let (s, big) = merge_bounds(m, n).unwrap();
    let mn = m as usize * n;
    let q = rng.gen_range(1..=mn);
    let mut edges: Vec<usize> = (0..mn).collect();
    edges.shuffle(rng);
    edges.truncate(q);
    let lengths: Vec<usize> = (s + 1..=big).filter(|l| m % 2 == 1 || l % 2 == 0).collect();
    let subs_len: Vec<usize> = (0..q).map(|_| *lengths.choose(rng).unwrap()).collect();
    let plan = MergePlan::with_edges(m, n, subs_len.clone(), &edges).unwrap();
    let subs = subs_len
        .iter()
        .map(|&l| lift(&construct_cycle(m, n - 1, l).unwrap()).unwrap())
        .collect();
    (plan, subs)
}

#[test]
fn merged_cycles_contract_to_quotient_cycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..100 {
        let (m, n) = if k % 2 == 0 { (3, 3) } else { (4, 3) };
        let (plan, subs) = random_plan(&mut rng, m, n);
        let merged = splice(&plan, &subs).unwrap();
        let walk = quotient_of_cycle(&merged).unwrap();
        let quotient = quotient_graph(&GraphParams::undirected(m, n).unwrap()).unwrap();
        assert!(quotient.is_complete_multipartite());
        let distinct: HashSet<_> = walk.iter().collect();
        assert_eq!(distinct.len(), walk.len(), "copy revisited");
        assert_eq!(walk.len(), m as usize * n);
        for (i, &a) in walk.iter().enumerate() {
            assert!(quotient.has_edge(a, walk[(i + 1) % walk.len()]));
        }
    }
}

#[test]
fn splice_length_law_on_random_plans() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (m, n) in [(3u32, 3usize), (4, 3), (3, 4)] {
        for _ in 0..40 {
            let (plan, subs) = random_plan(&mut rng, m, n);
            let merged = splice(&plan, &subs).unwrap();
            let law: usize =
                plan.sub_lengths.iter().map(|l| l - 1).sum::<usize>() + 2 * m as usize * n - plan.q;
            assert_eq!(merged.len(), law);
            merged.verify().unwrap();
        }
    }
}

#[test]
fn sub_cycles_above_copy_size_use_the_top_index() {
    for (m, n) in [(3u32, 3usize), (4, 3)] {
        let (s, big) = merge_bounds(m, n).unwrap();
        for len in (s + 1..=big).filter(|l| m % 2 == 1 || l % 2 == 0) {
            let c = construct_cycle(m, n - 1, len).unwrap();
            assert!(c.word.iter().any(|l| l.index == n - 1), "m={m} len={len}");
        }
    }
}

#[test]
fn base_cycle_visits_every_copy_once() {
    for (m, n) in [(3u32, 3usize), (4, 3), (2, 4), (1, 4)] {
        let c = base_cycle(m, n).unwrap();
        let walk = quotient_of_cycle(&c).unwrap();
        assert_eq!(walk.len(), m as usize * n);
        let distinct: HashSet<_> = walk.iter().collect();
        assert_eq!(distinct.len(), walk.len());
    }
}

#[test]
fn range_completeness_spot_check_four_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let total = order(4, 3).unwrap() as usize;
    for _ in 0..40 {
        let target = 2 * rng.gen_range(2..=total / 2);
        let c = construct_cycle(4, 3, target).unwrap();
        assert_eq!(c.len(), target);
        c.verify().unwrap();
    }
}

#[test]
fn witnesses_survive_rotation_and_reversal() {
    for target in [3usize, 10, 20, 19, 100, 162] {
        let c = construct_cycle(3, 3, target).unwrap();
        for k in [0, 1, target / 2, target - 1] {
            c.rotate(k).unwrap().verify().unwrap();
        }
        c.reversed().verify().unwrap();
    }
}
