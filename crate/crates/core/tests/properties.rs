use std::cmp::Ordering;

use imset::ground::{elementary_cmp, graded_cmp};
use imset::imset::decompose_semi_elementary;
use imset::linalg::{rat, RationalMatrix};
use imset::membership::{classify, ImsetClass, Witness};
use imset::relations::{basic_moves, reduce_to_basis, Move};
use imset::supermodular::{is_supermodular, standardize, SetFunction};
use imset::{GroundSet, Imset, Subset, Triplet};
use proptest::prelude::*;

fn triplet_from_labels(labels: &[u8]) -> Option<Triplet> {
    let part = |k: u8| Subset::from_elements((0..labels.len()).filter(|&i| labels[i] == k));
    Triplet::new(part(0), part(1), part(2)).ok().filter(|t| !t.is_trivial())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graded_order_is_consistent(s in 0u32..64, t in 0u32..64, u in 0u32..64) {
        let (s, t, u) = (Subset::from_mask(s), Subset::from_mask(t), Subset::from_mask(u));
        prop_assert_eq!(graded_cmp(s, t), graded_cmp(t, s).reverse());
        prop_assert_eq!(graded_cmp(s, t) == Ordering::Equal, s == t);
        if graded_cmp(s, t).is_le() && graded_cmp(t, u).is_le() {
            prop_assert!(graded_cmp(s, u).is_le());
        }
    }

    #[test]
    fn elementary_order_is_consistent(i in 0usize..240, j in 0usize..240) {
        let g = GroundSet::new(6).unwrap();
        let (x, y) = (g.elementary(i), g.elementary(j));
        prop_assert_eq!(elementary_cmp(x, y), i.cmp(&j));
    }

    #[test]
    fn decomposition_re_sums(labels in proptest::collection::vec(0u8..4, 2..=6)) {
        let g = GroundSet::new(labels.len()).unwrap();
        if let Some(t) = triplet_from_labels(&labels) {
            let parts = decompose_semi_elementary(&g, &t).unwrap();
            let mut u = Imset::zero(&g);
            for (e, k) in &parts {
                u.add_elementary(e, *k as i64).unwrap();
            }
            prop_assert_eq!(u, Imset::semi_elementary(&g, &t));
            let total: u64 = parts.iter().map(|(_, k)| k).sum();
            prop_assert_eq!(total as usize, t.a().len() * t.b().len());
        }
    }

    #[test]
    fn standardization_keeps_supermodularity(w in proptest::collection::vec(0i64..5, 11), m in proptest::collection::vec(-5i64..5, 5)) {
        let g = GroundSet::new(4).unwrap();
        // nonnegative combination of elementary-indicator functions plus a modular part
        let mut f = SetFunction::from_i64_fn(&g, |s| m[0] + s.elements().map(|i| m[i + 1]).sum::<i64>());
        for (k, &c) in w.iter().enumerate() {
            let a = g.subsets()[k + 5];
            f = f.checked_add(&SetFunction::indicator_up(&g, a).scale(&rat(c))).unwrap();
        }
        prop_assert!(is_supermodular(&f));
        let s = standardize(&f);
        prop_assert!(is_supermodular(&s));
        prop_assert!(s.is_monotone());
        prop_assert!(s.values().iter().all(|v| *v >= rat(0)));
    }

    #[test]
    fn kernel_vectors_reduce_exactly(coeffs in proptest::collection::vec(-3i64..=3, 48)) {
        let g = GroundSet::new(4).unwrap();
        let basis = basic_moves(&g).unwrap();
        let mut z = Move::zero(&g);
        for (m, &k) in basis.iter().zip(&coeffs) {
            z = z.checked_sub_scaled(m, -k).unwrap();
        }
        let steps = reduce_to_basis(&z).unwrap();
        let mut acc = Move::zero(&g);
        for (m, k) in &steps {
            prop_assert!(basis.contains(m));
            acc = acc.checked_sub_scaled(m, -k).unwrap();
        }
        prop_assert_eq!(acc, z);
    }

    #[test]
    fn sums_of_elementary_imsets_are_combinatorial(picks in proptest::collection::vec(0usize..24, 1..6)) {
        let g = GroundSet::new(4).unwrap();
        let mut u = Imset::zero(&g);
        for &p in &picks {
            u.add_elementary(g.elementary(p), 1).unwrap();
        }
        let r = classify(&u).unwrap();
        prop_assert_eq!(r.class, ImsetClass::Combinatorial);
        prop_assert_eq!(r.degree, picks.len() as i64);
        let Some(Witness::Integer(w)) = r.witness else { panic!("no witness") };
        let mut back = Imset::zero(&g);
        for (i, &k) in w.iter().enumerate() {
            back.add_elementary(g.elementary(i), k as i64).unwrap();
        }
        prop_assert_eq!(back, u);
    }

    #[test]
    fn lp_answers_carry_valid_certificates(
        entries in proptest::collection::vec(-3i64..=3, 12),
        b in proptest::collection::vec(-4i64..=4, 3),
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(<[i64]>::to_vec).collect();
        let a = RationalMatrix::from_i64_rows(&rows).unwrap();
        let b: Vec<_> = b.into_iter().map(rat).collect();
        let ans = a.lp_feasible(&b).unwrap();
        prop_assert!(ans.verify(&a, &b));
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }
}
