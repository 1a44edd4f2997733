//! The library against brute-force reference implementations.

mod common;

use ashg::nearby::{enumerate_all_stable, nearest_stable_in, nearest_stable_up_to_symmetry};
use ashg::{
    classify_deviation, enumerate_within, is_stable, partition_distance, social_welfare, utility, ClassTag, Partition,
    StabilityNotion, Target,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CLASSES: [(ClassTag, &[i64]); 4] = [
    (ClassTag::General, &[-2, -1, 0, 1, 2]),
    (ClassTag::Strict, &[-3, -1, 1, 2]),
    (ClassTag::Feng, &[-1, 0, 1]),
    (ClassTag::Feg, &[-1, 1]),
];

#[test]
fn distance_matches_move_graph_on_four_agents() {
    let all = all_label_vectors(4);
    assert_eq!(all.len(), 15);
    for a in &all {
        for b in &all {
            assert_eq!(partition_distance(&partition_of(a), &partition_of(b)).unwrap(), bfs_distance(a, b), "{a:?} {b:?}");
        }
    }
}

#[test]
fn distance_matches_move_graph_on_sampled_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [5, 6] {
        for _ in 0..300 {
            let (a, b) = (random_labels(&mut rng, n), random_labels(&mut rng, n));
            assert_eq!(partition_distance(&partition_of(&a), &partition_of(&b)).unwrap(), bfs_distance(&a, &b));
        }
    }
}

#[test]
fn utility_and_welfare_are_plain_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in 0..200 {
        let (class, palette) = CLASSES[t % 4];
        let n = rng.gen_range(2..=7);
        let g = random_game(&mut rng, n, t % 2 == 0, class, palette);
        let labels = random_labels(&mut rng, n);
        let p = partition_of(&labels);
        let l = labels_of(&p);
        for i in 0..n {
            assert_eq!(utility(&g, &p, i).unwrap(), common::utility(&g, &l, i, l[i]));
        }
        assert_eq!(social_welfare(&g, &p).unwrap(), welfare(&g, &l));
    }
}

#[test]
fn deviation_kinds_follow_the_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 0..400 {
        let (class, palette) = CLASSES[t % 4];
        let n = rng.gen_range(2..=6);
        let g = random_game(&mut rng, n, t % 3 == 0, class, palette);
        let p = partition_of(&random_labels(&mut rng, n));
        let l = labels_of(&p);
        for i in 0..n {
            for c in 0..p.num_coalitions() {
                if c == l[i] {
                    continue;
                }
                let got = classify_deviation(&g, &p, i, Target::Coalition(c)).unwrap();
                let want = common::kinds(&g, &l, i, c);
                for x in StabilityNotion::ALL {
                    assert_eq!(got.contains(x), want.contains(&x));
                }
            }
            if p.coalition_containing(i).len() > 1 {
                let got = classify_deviation(&g, &p, i, Target::NewSingleton).unwrap();
                let want = common::kinds(&g, &l, i, p.num_coalitions());
                for x in StabilityNotion::ALL {
                    assert_eq!(got.contains(x), want.contains(&x));
                }
            }
        }
    }
}

#[test]
fn enumerate_all_stable_matches_filtering_every_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for t in 0..24 {
        let (class, palette) = CLASSES[t % 4];
        let n = rng.gen_range(3..=6);
        let g = random_game(&mut rng, n, t % 2 == 0, class, palette);
        for x in StabilityNotion::ALL {
            let mut want: Vec<Partition> =
                all_label_vectors(n).iter().filter(|l| stable(&g, l, x)).map(|l| partition_of(l)).collect();
            let mut got = enumerate_all_stable(&g, x, 10).unwrap();
            want.sort_by(|a, b| a.key().cmp(b.key()));
            got.sort_by(|a, b| a.key().cmp(b.key()));
            assert_eq!(got, want);
        }
    }
}

#[test]
fn bounded_enumeration_is_the_distance_ball() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let n = rng.gen_range(3..=6);
        let k = rng.gen_range(0..=3);
        let start = random_labels(&mut rng, n);
        let p = partition_of(&start);
        let dist = bfs_all(&start);
        let mut got: Vec<Vec<usize>> = Vec::new();
        for item in enumerate_within(&p, k) {
            let (q, d) = item.unwrap();
            let lq = labels_of(&q);
            assert_eq!(d, dist[&normalize(&lq)]);
            got.push(normalize(&lq));
        }
        let mut want: Vec<Vec<usize>> =
            dist.into_iter().filter(|&(_, d)| d <= k).map(|(l, _)| l).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        let bound: usize = (0..=k).map(|j| n.pow(2 * j as u32)).sum();
        assert!(got.len() <= bound);
    }
}

#[test]
fn nearest_stable_is_the_closest_stable_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for t in 0..60 {
        let (class, palette) = CLASSES[t % 4];
        let n = rng.gen_range(3..=7);
        let g = random_game(&mut rng, n, t % 2 == 0, class, palette);
        let start = random_labels(&mut rng, n);
        let p = partition_of(&start);
        let k = rng.gen_range(0..=3);
        let dist = bfs_all(&start);
        for x in StabilityNotion::ALL {
            let best = dist.iter().filter(|(l, _)| stable(&g, l, x)).map(|(_, &d)| d).min();
            let found = nearest_stable_in(&g, &p, x, k, 10_000_000).unwrap();
            assert_eq!(found.distance, best.filter(|&d| d <= k));
            if let Some(q) = &found.partition {
                assert!(stable(&g, &labels_of(q), x));
                assert!(is_stable(&g, q, x));
            }
        }
    }
}

#[test]
fn symmetry_reduced_search_finds_the_same_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for t in 0..40 {
        // Blocks of interchangeable agents: a few groups with shared values.
        let sizes: Vec<usize> = (0..rng.gen_range(2..=3)).map(|_| rng.gen_range(1..=3)).collect();
        let mut b = ashg::BlockGameBuilder::new(ashg::Rational::from(-1));
        let blocks: Vec<usize> = sizes.iter().map(|&s| b.block(s)).collect();
        for &x in &blocks {
            for &y in &blocks {
                if x <= y {
                    let v = ashg::Rational::from([-1, 1, 2][rng.gen_range(0..3)]);
                    if x == y {
                        b.within(x, v);
                    } else {
                        b.set_sym(x, y, v);
                    }
                }
            }
        }
        let g = b.build(true, ClassTag::General).unwrap();
        let n = g.n();
        let p = partition_of(&random_labels(&mut rng, n));
        let x = StabilityNotion::ALL[t % 4];
        let plain = nearest_stable_in(&g, &p, x, 4, 10_000_000).unwrap();
        let reduced = nearest_stable_up_to_symmetry(&g, &p, x, 4, 10_000_000).unwrap();
        assert_eq!(plain.distance, reduced.distance);
        assert!(reduced.explored <= plain.explored);
        if let Some(q) = reduced.partition {
            assert!(stable(&g, &labels_of(&q), x));
            assert_eq!(Some(partition_distance(&p, &q).unwrap()), plain.distance);
        }
    }
}
