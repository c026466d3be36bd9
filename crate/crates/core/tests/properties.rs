mod common;

use conelab_core::boundary::{divergence_profile, mitra_profile, BoundaryCut, Embedding};
use conelab_core::complex::build_bass_serre_ball;
use conelab_core::electrify::{cone_extension, ConeSet};
use conelab_core::graph::families;
use conelab_core::group::{cayley_ball, Group, GroupScenario, Letter, Subgroup, Word};
use conelab_core::metric::{delta_four_point, quasiconvexity_constant};
use conelab_core::{rat, DeltaMode, Rat};
use proptest::prelude::*;

use common::*;

fn small_graph() -> impl Strategy<Value = Small> {
    (2usize..=10, 0usize..=10, 1i64..=3, any::<u64>())
        .prop_map(|(n, extra, len, seed)| random_small(n, extra, len, seed))
}

fn word(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, prop::bool::ANY), 0..=max_len).prop_map(|ls| {
        Word(
            ls.into_iter()
                .map(|(gen, pos)| Letter {
                    gen,
                    exp: if pos { 1 } else { -1 },
                })
                .collect(),
        )
    })
}

fn scenario(json: &str) -> GroupScenario {
    GroupScenario::from_json(json).unwrap()
}

fn group_classes() -> Vec<Group> {
    [
        r#"{"kind":"free_product_cyclic","orders":[2,3,0]}"#,
        r#"{"kind":"free_group","rank":2}"#,
        r#"{"kind":"semidirect_z_free","rank":3}"#,
        r#"{"kind":"amalgam",
            "left":{"kind":"free_product_cyclic","orders":[2,3],"generators":["a","b"]},
            "right":{"kind":"free_product_cyclic","orders":[3,0],"generators":["c","d"]},
            "identifications":[["b","c"]]}"#,
    ]
    .iter()
    .map(|j| scenario(j).group)
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distances_are_a_metric(s in small_graph()) {
        let g = s.graph();
        let d = floyd_warshall(&s);
        for u in 0..s.n {
            for v in 0..s.n {
                let duv = g.distance(u, v).unwrap();
                prop_assert_eq!(duv, rat(d[u][v]));
                prop_assert_eq!(duv, g.distance(v, u).unwrap());
                for w in 0..s.n {
                    prop_assert!(duv <= g.distance(u, w).unwrap() + g.distance(w, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn interval_is_the_geodesic_union(s in small_graph()) {
        let g = s.graph();
        let d = floyd_warshall(&s);
        for u in 0..s.n {
            for v in 0..s.n {
                prop_assert_eq!(g.interval(u, v).unwrap(), geodesic_union(&s, &d, u, v));
            }
        }
    }

    #[test]
    fn geodesic_has_the_distance_as_length(s in small_graph(), a in any::<usize>(), b in any::<usize>()) {
        let g = s.graph();
        let (u, v) = (a % s.n, b % s.n);
        let p = g.geodesic(u, v).unwrap();
        prop_assert_eq!(p.start(), u);
        prop_assert_eq!(p.end(), v);
        let len: Rat = p.vertices.windows(2).map(|w| g.edge_length(w[0], w[1]).unwrap()).sum();
        prop_assert_eq!(len, g.distance(u, v).unwrap());
    }

    #[test]
    fn gromov_product_is_bounded_by_distances(s in small_graph(), z in any::<usize>(), a in any::<usize>(), b in any::<usize>()) {
        let g = s.graph();
        let (z, a, b) = (z % s.n, a % s.n, b % s.n);
        let p = g.gromov_product(z, a, b).unwrap();
        prop_assert!(p >= rat(0));
        prop_assert!(p <= g.distance(z, a).unwrap().min(g.distance(z, b).unwrap()));
    }

    #[test]
    fn trees_have_zero_delta(n in 1usize..60, seed in any::<u64>()) {
        let t = families::random_tree(n, seed);
        prop_assert_eq!(delta_four_point(&t, DeltaMode::default()).unwrap().delta, rat(0));
    }

    #[test]
    fn quasiconvexity_matches_brute_force(s in small_graph(), picks in prop::collection::vec(any::<usize>(), 1..4)) {
        let g = s.graph();
        let d = floyd_warshall(&s);
        let mut set: Vec<usize> = picks.iter().map(|p| p % s.n).collect();
        set.sort_unstable();
        set.dedup();
        prop_assert_eq!(quasiconvexity_constant(&g, &set).unwrap(), rat(quasiconvexity_brute(&s, &d, &set)));
    }

    #[test]
    fn coning_never_lengthens(s in small_graph(), picks in prop::collection::vec(any::<usize>(), 1..6)) {
        let g = s.graph();
        let members: Vec<usize> = picks.iter().map(|p| p % s.n).collect();
        let ext = cone_extension(&g, &[ConeSet::new(0, members.clone())]).unwrap();
        for u in 0..s.n {
            for v in 0..s.n {
                prop_assert!(ext.distance(u, v).unwrap() <= g.distance(u, v).unwrap());
            }
        }
        for &a in &members {
            for &b in &members {
                prop_assert!(ext.distance(a, b).unwrap() <= rat(2));
            }
        }
    }

    #[test]
    fn divergence_tail_is_nondecreasing(n in 2usize..40, seed in any::<u64>(), len in 1usize..12) {
        let t = families::random_tree(n, seed);
        let mut rng = random_rng(seed);
        let seq: Vec<usize> = (0..len).map(|_| rng_pick(&mut rng, n)).collect();
        let prof = divergence_profile(&t, &seq, 0).unwrap();
        prop_assert!(prof.tail_infimum.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity_embedding_has_mitra_profile_n(n in 2usize..30, seed in any::<u64>()) {
        let t = families::random_tree(n, seed);
        let map: Vec<usize> = (0..n).collect();
        let emb = Embedding::identity(&t, &map).unwrap();
        let ecc = t.distances_from(0).unwrap().into_iter().max().unwrap().to_integer() as usize;
        let prof = mitra_profile(&emb, 0, ecc, BoundaryCut::default()).unwrap();
        for k in 0..=ecc {
            prop_assert_eq!(prof.m(k), Some(rat(k as i64)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_form_is_idempotent_and_multiplicative(class in 0usize..4, w1 in word(4, 14), w2 in word(4, 14)) {
        let g = &group_classes()[class];
        let k = g.generator_count();
        let clamp = |w: &Word| Word(w.0.iter().map(|l| Letter { gen: l.gen % k, exp: l.exp }).collect());
        let (w1, w2) = (clamp(&w1), clamp(&w2));
        let n1 = g.normal_form(&w1);
        prop_assert_eq!(g.normal_form(&n1), n1.clone());
        prop_assert_eq!(g.normal_form(&w1.concat(&w2)), g.normal_form(&n1.concat(&g.normal_form(&w2))));
        prop_assert!(g.normal_form(&w1.concat(&w1.inverse())).is_empty());
    }

    #[test]
    fn cyclic_normal_form_matches_stack_reduction(w in word(3, 20)) {
        let orders = [2u32, 3, 0];
        let g = scenario(r#"{"kind":"free_product_cyclic","orders":[2,3,0]}"#).group;
        let runs: Vec<(usize, i64)> = w.0.iter().map(|l| (l.gen, i64::from(l.exp))).collect();
        let expect = reduce_cyclic_word(&orders, &runs);
        let got: i64 = expect.iter().map(|(_, e)| e.abs()).sum();
        prop_assert_eq!(g.normal_form(&w).len() as i64, got);
    }

    #[test]
    fn coset_key_is_constant_on_cosets(w in word(3, 10), h in word(1, 6)) {
        let g = scenario(r#"{"kind":"free_product_cyclic","orders":[2,3,0]}"#).group;
        let sub = Subgroup::generated_by(&g, "H", &[1]).unwrap();
        let x = g.element(&w);
        let h = g.element(&Word(h.0.iter().map(|l| Letter { gen: 1, exp: l.exp }).collect()));
        prop_assert_eq!(sub.coset_key(&x), sub.coset_key(&g.mul(&x, &h)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_amalgams_develop_into_trees(
        left in prop::collection::vec(prop::sample::select(vec![2u32, 3, 0]), 1..3),
        right in prop::collection::vec(prop::sample::select(vec![2u32, 3, 0]), 1..3),
        radius in 1usize..4,
    ) {
        let mut right = right;
        right[0] = left[0];
        let names = |p: &str, n: usize| (0..n).map(|i| format!("\"{p}{i}\"")).collect::<Vec<_>>().join(",");
        let json = format!(
            r#"{{"kind":"amalgam",
                "left":{{"kind":"free_product_cyclic","orders":{left:?},"generators":[{}]}},
                "right":{{"kind":"free_product_cyclic","orders":{right:?},"generators":[{}]}},
                "identifications":[["l0","r0"]]}}"#,
            names("l", left.len()),
            names("r", right.len())
        );
        let s = scenario(&json);
        let ball = build_bass_serre_ball(&s, radius, 200_000).unwrap();
        prop_assert!(ball.is_tree());
    }
}

#[test]
fn free_group_balls_have_closed_form_size() {
    for rank in 1..=3usize {
        let g = scenario(&format!(r#"{{"kind":"free_group","rank":{rank}}}"#)).group;
        let gens: Vec<usize> = (0..rank).collect();
        for r in 0..=4u32 {
            let ball = cayley_ball(&g, &gens, r as usize, 1_000_000).unwrap();
            let k = rank as u64;
            let expect = if k == 1 {
                1 + 2 * r as u64
            } else {
                1 + 2 * k * ((2 * k - 1).pow(r) - 1) / (2 * k - 2)
            };
            assert_eq!(ball.len() as u64, expect, "rank {rank}, radius {r}");
        }
    }
}
