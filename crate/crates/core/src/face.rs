//! Faces of the elementary imset cone through semi-elementary imsets: their
//! extreme rays, the orthogonal indicator family and dimensions.

use rayon::prelude::*;

use crate::ci::{face_matrix, is_structural};
use crate::error::{ImsetError, Result};
use crate::ground::{ElementaryIndex, GroundSet, Subset, Triplet};
use crate::imset::Imset;
use crate::linalg::{integer_rank, rat, Rational};
use crate::supermodular::SetFunction;

/// Elementary imsets ⟨a|b|Γ⟩ with a ∈ A, b ∈ B and C ⊆ Γ ⊆ ABC∖ab, in
/// elementary order.
pub fn extreme_set(g: &GroundSet, t: &Triplet) -> Result<Vec<ElementaryIndex>> {
    if t.is_trivial() {
        return Err(ImsetError::Precondition("face needs nonempty A and B".into()));
    }
    let ab = t.a().union(t.b());
    let mut out = Vec::new();
    for a in t.a().elements() {
        for b in t.b().elements() {
            let free = ab.without(a).without(b);
            for x in free.subsets() {
                let r = g
                    .elementary_rank(a, b, t.c().union(x))
                    .expect("disjoint by construction");
                out.push(*g.elementary(r));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// (2^|A| − 1)(2^|B| − 1).
pub fn dimension_formula(t: &Triplet) -> usize {
    ((1usize << t.a().len()) - 1) * ((1usize << t.b().len()) - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// 1_{T⊆•}
    Up,
    /// 1_{T⊇•}
    Down,
}

/// A 0/1 indicator function from the orthogonal family of a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Indicator {
    pub family: u8,
    pub direction: Direction,
    pub set: Subset,
}

impl Indicator {
    pub fn value(&self, s: Subset) -> i64 {
        match self.direction {
            Direction::Up => self.set.is_subset_of(s) as i64,
            Direction::Down => s.is_subset_of(self.set) as i64,
        }
    }

    pub fn inner_elementary(&self, e: &ElementaryIndex) -> i64 {
        self.value(e.top()) + self.value(e.cond) - self.value(e.cond.with(e.a)) - self.value(e.cond.with(e.b))
    }

    pub fn to_set_function(&self, g: &GroundSet) -> SetFunction {
        SetFunction::from_fn(g, |s| rat(self.value(s)))
    }

    pub fn values(&self, g: &GroundSet) -> Vec<i64> {
        g.subsets().iter().map(|&s| self.value(s)).collect()
    }

    /// "up:ab" or "down:ab".
    pub fn descriptor(&self, g: &GroundSet) -> String {
        let dir = match self.direction {
            Direction::Up => "up",
            Direction::Down => "down",
        };
        format!("{dir}:{}", g.format_subset(self.set))
    }
}

/// The four indicator families orthogonal to the face of ⟨A|B|C⟩, with
/// D = N∖ABC:
/// 1. 1_{A₁C⊆•} for A₁ ⊆ A,
/// 2. 1_{B₁C⊆•} for ∅ ≠ B₁ ⊆ B,
/// 3. 1_{EC₁⊇•} for E ⊆ AB and C₁ ⊊ C,
/// 4. 1_{ED₁⊆•} for E ⊆ ABC and ∅ ≠ D₁ ⊆ D.
pub fn orthogonal_set(g: &GroundSet, t: &Triplet) -> Result<Vec<Indicator>> {
    if t.is_trivial() {
        return Err(ImsetError::Precondition("face needs nonempty A and B".into()));
    }
    let (a, b, c) = (t.a(), t.b(), t.c());
    let d = g.complement(t.union());
    let mut families: [Vec<Indicator>; 4] = Default::default();
    let up = |family: u8, set: Subset| Indicator {
        family,
        direction: Direction::Up,
        set,
    };
    for a1 in a.subsets() {
        families[0].push(up(1, a1.union(c)));
    }
    for b1 in b.subsets().filter(|s| !s.is_empty()) {
        families[1].push(up(2, b1.union(c)));
    }
    for e in a.union(b).subsets() {
        for c1 in c.subsets().filter(|&s| s != c) {
            families[2].push(Indicator {
                family: 3,
                direction: Direction::Down,
                set: e.union(c1),
            });
        }
    }
    for e in t.union().subsets() {
        for d1 in d.subsets().filter(|s| !s.is_empty()) {
            families[3].push(up(4, e.union(d1)));
        }
    }
    Ok(families
        .into_iter()
        .flat_map(|mut fam| {
            fam.sort_by_key(|x| x.set);
            fam
        })
        .collect())
}

/// Extreme rays and orthogonal family of the face through u⟨A|B|C⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDescription {
    pub triplet: Triplet,
    pub extreme_set: Vec<ElementaryIndex>,
    pub orthogonal_set: Vec<Indicator>,
    pub dimension: usize,
}

impl FaceDescription {
    pub fn to_json(&self, g: &GroundSet) -> serde_json::Value {
        serde_json::json!({
            "triplet": g.format_triplet(&self.triplet),
            "dimension": self.dimension,
            "extreme_rays": self.extreme_set.iter().map(|e| g.format_elementary(e)).collect::<Vec<_>>(),
            "orthogonal_functions": self.orthogonal_set.iter().map(|f| f.descriptor(g)).collect::<Vec<_>>(),
        })
    }
}

fn elementary_rows(g: &GroundSet, es: &[ElementaryIndex]) -> Vec<Vec<i64>> {
    es.iter().map(|e| Imset::elementary(g, e).values().to_vec()).collect()
}

/// Dimension is the rank of the extreme rays; it is cross-checked against
/// the closed formula in debug builds.
pub fn face_description(g: &GroundSet, t: &Triplet) -> Result<FaceDescription> {
    let extreme = extreme_set(g, t)?;
    let orthogonal = orthogonal_set(g, t)?;
    let dimension = integer_rank(&elementary_rows(g, &extreme));
    debug_assert_eq!(dimension, dimension_formula(t), "face dimension mismatch");
    Ok(FaceDescription {
        triplet: *t,
        extreme_set: extreme,
        orthogonal_set: orthogonal,
        dimension,
    })
}

/// Outcome of checking that E(N) splits into the extreme set and the
/// elementary imsets separated by the orthogonal family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTheoremReport {
    pub triplet: Triplet,
    /// Members of the extreme set with a nonzero pairing.
    pub members_not_orthogonal: Vec<ElementaryIndex>,
    /// Non-members with no orthogonal function pairing to exactly 1.
    pub non_members_unseparated: Vec<ElementaryIndex>,
    /// Every pairing of an indicator with an elementary imset is 0 or 1.
    pub pairings_binary: bool,
    pub orthogonal_count: usize,
    pub orthogonal_rank: usize,
    pub extreme_rank: usize,
    pub dimension_formula: usize,
}

impl FaceTheoremReport {
    pub fn passed(&self) -> bool {
        let n_sets = self.orthogonal_count + self.dimension_formula;
        self.members_not_orthogonal.is_empty()
            && self.non_members_unseparated.is_empty()
            && self.pairings_binary
            && self.orthogonal_rank == self.orthogonal_count
            && self.extreme_rank == self.dimension_formula
            && n_sets.is_power_of_two()
    }
}

pub fn verify_face_theorem(g: &GroundSet, t: &Triplet) -> Result<FaceTheoremReport> {
    let extreme = extreme_set(g, t)?;
    let orthogonal = orthogonal_set(g, t)?;
    let pairings: Vec<Vec<i64>> = g
        .elementaries()
        .par_iter()
        .map(|e| orthogonal.iter().map(|f| f.inner_elementary(e)).collect())
        .collect();
    let mut members_not_orthogonal = Vec::new();
    let mut non_members_unseparated = Vec::new();
    for (e, row) in g.elementaries().iter().zip(&pairings) {
        if extreme.binary_search(e).is_ok() {
            if row.iter().any(|&x| x != 0) {
                members_not_orthogonal.push(*e);
            }
        } else if !row.contains(&1) {
            non_members_unseparated.push(*e);
        }
    }
    let pairings_binary = pairings.iter().flatten().all(|&x| x == 0 || x == 1);
    let orthogonal_rows: Vec<Vec<i64>> = orthogonal.iter().map(|f| f.values(g)).collect();
    Ok(FaceTheoremReport {
        triplet: *t,
        members_not_orthogonal,
        non_members_unseparated,
        pairings_binary,
        orthogonal_count: orthogonal.len(),
        orthogonal_rank: integer_rank(&orthogonal_rows),
        extreme_rank: integer_rank(&elementary_rows(g, &extreme)),
        dimension_formula: dimension_formula(t),
    })
}

/// Elementary imsets v with μu − v in the elementary cone for some μ >= 0:
/// the extreme rays of the smallest face containing `u`.
pub fn face_of_structural(u: &Imset) -> Result<Vec<ElementaryIndex>> {
    if !is_structural(u)? {
        return Err(ImsetError::NotStructural);
    }
    let g = u.ground();
    let a = face_matrix(u)?;
    let flags: Vec<bool> = g
        .elementaries()
        .par_iter()
        .map(|e| {
            let b: Vec<Rational> = Imset::elementary(g, e).values().iter().map(|&x| rat(x)).collect();
            a.lp_feasible(&b).map(|r| r.is_feasible())
        })
        .collect::<Result<_>>()?;
    Ok(g.elementaries()
        .iter()
        .zip(flags)
        .filter(|(_, f)| *f)
        .map(|(e, _)| *e)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supermodular::is_supermodular;

    fn names(g: &GroundSet, es: &[ElementaryIndex]) -> Vec<String> {
        es.iter().map(|e| g.format_elementary(e)).collect()
    }

    #[test]
    fn extreme_set_examples() {
        let g4 = GroundSet::new(4).unwrap();
        let t = g4.parse_triplet("a|b|cd").unwrap();
        assert_eq!(names(&g4, &extreme_set(&g4, &t).unwrap()), ["a|b|cd"]);
        let g3 = GroundSet::new(3).unwrap();
        let t = g3.parse_triplet("a|bc|0").unwrap();
        assert_eq!(
            names(&g3, &extreme_set(&g3, &t).unwrap()),
            ["a|b|0", "a|c|0", "a|c|b", "a|b|c"]
        );
        let t = g4.parse_triplet("ab|cd|0").unwrap();
        assert_eq!(extreme_set(&g4, &t).unwrap().len(), 16);
    }

    #[test]
    fn orthogonal_set_examples() {
        let g4 = GroundSet::new(4).unwrap();
        let t = g4.parse_triplet("a|b|cd").unwrap();
        assert_eq!(orthogonal_set(&g4, &t).unwrap().len(), 15);
        let g2 = GroundSet::new(2).unwrap();
        let t = g2.parse_triplet("a|b|0").unwrap();
        let m = orthogonal_set(&g2, &t).unwrap();
        let d: Vec<String> = m.iter().map(|f| f.descriptor(&g2)).collect();
        assert_eq!(d, ["up:0", "up:a", "up:b"]);
        for f in &orthogonal_set(&g4, &g4.parse_triplet("a|bc|0").unwrap()).unwrap() {
            assert!(is_supermodular(&f.to_set_function(&g4)));
        }
    }

    #[test]
    fn theorem_holds_for_all_triplets_n4() {
        let g = GroundSet::new(4).unwrap();
        for t in g.triplets(false) {
            let r = verify_face_theorem(&g, &t).unwrap();
            assert!(r.passed(), "{}", g.format_triplet(&t));
        }
    }

    #[test]
    fn separation_witness() {
        let g = GroundSet::new(4).unwrap();
        let t = g.parse_triplet("a|bc|0").unwrap();
        let e = g.parse_elementary("a|d|0").unwrap();
        let m = orthogonal_set(&g, &t).unwrap();
        assert!(m.iter().any(|f| f.inner_elementary(&e) == 1));
    }

    #[test]
    fn face_of_semi_elementary_matches() {
        let g = GroundSet::new(3).unwrap();
        let t = g.parse_triplet("a|bc|0").unwrap();
        let u = Imset::semi_elementary(&g, &t);
        assert_eq!(face_of_structural(&u).unwrap(), extreme_set(&g, &t).unwrap());
        let e = g.parse_elementary("b|c|a").unwrap();
        assert_eq!(face_of_structural(&Imset::elementary(&g, &e)).unwrap(), vec![e]);
    }
}
