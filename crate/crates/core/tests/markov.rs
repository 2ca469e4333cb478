use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use imset::markov::{markov_basis, markov_basis_with, orbit, subconfiguration, MarkovOptions, TieBreak};
use imset::relations::Move;
use imset::{Configuration, GroundSet};

fn nonzero_counts(m: &BTreeMap<usize, usize>) -> BTreeMap<usize, usize> {
    m.iter().filter(|(_, &c)| c > 0).map(|(&d, &c)| (d, c)).collect()
}

/// Every fiber of degree <= cap is connected under the orbit closure of the
/// representatives; checked by breadth-first search over all multisets.
fn assert_fibers_connected(config: &Configuration, reps: &[Move], cap: usize) {
    let pos: HashMap<usize, usize> = config.columns().iter().enumerate().map(|(j, e)| (e.rank, j)).collect();
    let mut moves: Vec<Vec<i64>> = Vec::new();
    for r in reps {
        for m in orbit(config, r).unwrap() {
            let mut v = vec![0i64; config.cols()];
            for (rank, &k) in m.coeffs().iter().enumerate() {
                if k != 0 {
                    v[pos[&rank]] = k;
                }
            }
            moves.push(v.iter().map(|x| -x).collect());
            moves.push(v);
        }
    }
    for d in 2..=cap {
        let mut fibers: HashMap<Vec<i64>, Vec<Vec<i64>>> = HashMap::new();
        let mut x = vec![0i64; config.cols()];
        fn rec(
            j: usize,
            left: usize,
            x: &mut Vec<i64>,
            config: &Configuration,
            out: &mut HashMap<Vec<i64>, Vec<Vec<i64>>>,
        ) {
            if j == x.len() {
                if left == 0 {
                    let img = config.apply(x).unwrap().values().to_vec();
                    out.entry(img).or_default().push(x.clone());
                }
                return;
            }
            for k in 0..=left {
                x[j] = k as i64;
                rec(j + 1, left - k, x, config, out);
            }
            x[j] = 0;
        }
        rec(0, d, &mut x, config, &mut fibers);
        for (_, members) in fibers {
            let all: HashSet<Vec<i64>> = members.iter().cloned().collect();
            let mut seen = HashSet::from([members[0].clone()]);
            let mut queue = VecDeque::from([members[0].clone()]);
            while let Some(cur) = queue.pop_front() {
                for z in &moves {
                    let next: Vec<i64> = cur.iter().zip(z).map(|(a, b)| a + b).collect();
                    if next.iter().all(|&v| v >= 0) && seen.insert(next.clone()) {
                        assert!(all.contains(&next));
                        queue.push_back(next);
                    }
                }
            }
            assert_eq!(seen.len(), all.len(), "disconnected fiber at degree {d}");
        }
    }
}

#[test]
fn n3_basis_connects_all_fibers() {
    let g = GroundSet::new(3).unwrap();
    let config = Configuration::full(&g).unwrap();
    let r = markov_basis(&config, 4).unwrap();
    assert_eq!(nonzero_counts(&r.per_degree_counts), BTreeMap::from([(2, 1)]));
    assert!(r.complete);
    assert_fibers_connected(&config, &r.representatives, 4);
}

#[test]
fn n4_basis_connects_all_fibers() {
    let g = GroundSet::new(4).unwrap();
    let config = Configuration::full(&g).unwrap();
    let r = markov_basis(&config, 4).unwrap();
    assert_eq!(
        nonzero_counts(&r.per_degree_counts),
        BTreeMap::from([(2, 2), (3, 1), (4, 4)])
    );
    assert!(r.complete);
    assert_fibers_connected(&config, &r.representatives, 3);
}

#[test]
fn n5_degree_four() {
    let g = GroundSet::new(5).unwrap();
    let config = Configuration::full(&g).unwrap();
    let r = markov_basis(&config, 4).unwrap();
    assert_eq!(
        nonzero_counts(&r.per_degree_counts),
        BTreeMap::from([(2, 3), (3, 2), (4, 11)])
    );
    assert!(!r.complete);
    let mut opts = MarkovOptions::new(4);
    opts.tie_break = TieBreak::Greatest;
    let rev = markov_basis_with(&config, &opts).unwrap();
    assert_eq!(rev.per_degree_counts, r.per_degree_counts);
}

#[test]
fn subconfigurations_are_square_free() {
    for n in 3..=4 {
        let g = GroundSet::new(n).unwrap();
        for t in g.triplets(false) {
            if t.union() != g.full() {
                continue;
            }
            let config = subconfiguration(&g, &t).unwrap();
            let r = markov_basis(&config, 5).unwrap();
            assert!(!r.complete);
            for m in &r.representatives {
                assert!(m.max_abs() <= 1, "{}", m);
            }
            assert_fibers_connected(&config, &r.representatives, 3);
        }
    }
}
