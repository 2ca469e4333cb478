use std::collections::BTreeMap;

use imset::relations::{enumerate_small_relations, RelationClass};
use imset::GroundSet;

#[test]
fn two_by_m_relations_n4_are_semigraphoid_multiples() {
    let g = GroundSet::new(4).unwrap();
    let rels = enumerate_small_relations(&g, 2, 6, 6).unwrap();
    assert!(!rels.is_empty());
    let mut by_degree = BTreeMap::new();
    for r in &rels {
        assert_eq!(r.k, 2);
        assert_eq!(r.classification, RelationClass::TwoByTwoSemigraphoid, "{}", r.relation);
        *by_degree.entry(r.degree).or_insert(0) += 1;
    }
    // 24 unit relations (48 ordered moves up to sign), scaled by 1..=3
    assert_eq!(by_degree, BTreeMap::from([(2, 24), (4, 24), (6, 24)]));
}

#[test]
fn three_by_m_relations_n4_fall_under_the_classification() {
    let g = GroundSet::new(4).unwrap();
    let rels = enumerate_small_relations(&g, 3, 3, 6).unwrap();
    let mut cyclic = 0;
    let mut containing = 0;
    for r in rels.iter().filter(|r| r.k == 3) {
        match r.classification {
            RelationClass::ThreeByThreeCyclic => cyclic += 1,
            RelationClass::ContainsTwoByTwo => containing += 1,
            other => panic!("{} classified {other}", r.relation),
        }
    }
    assert!(cyclic > 0);
    assert!(containing > 0);
}
