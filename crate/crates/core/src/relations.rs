//! Moves in the integer kernel of the configuration: the 2×2 semi-graphoid
//! moves, lattice-basis reduction and classification of small relations.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{ImsetError, Result};
use crate::ground::{ElementaryIndex, GroundSet, Subset};
use crate::imset::Imset;
use crate::membership::{search_decompositions, SearchOptions};

/// An integer kernel vector over E(N), indexed by elementary rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Move {
    ground: GroundSet,
    coeffs: Vec<i64>,
}

impl Move {
    pub fn new(g: &GroundSet, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != g.elementary_count() {
            return Err(ImsetError::Dimension {
                expected: g.elementary_count(),
                got: coeffs.len(),
            });
        }
        let m = Move {
            ground: g.clone(),
            coeffs,
        };
        if !m.image()?.is_zero() {
            return Err(ImsetError::NotInKernel);
        }
        Ok(m)
    }

    /// Builds from (elementary, coefficient) pairs; repeated terms add up.
    pub fn from_terms<I>(g: &GroundSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ElementaryIndex, i64)>,
    {
        let mut coeffs = vec![0i64; g.elementary_count()];
        for (e, k) in terms {
            coeffs[e.rank] = coeffs[e.rank].checked_add(k).ok_or(ImsetError::Overflow)?;
        }
        Move::new(g, coeffs)
    }

    pub(crate) fn from_kernel_vector(g: &GroundSet, coeffs: Vec<i64>) -> Self {
        let m = Move {
            ground: g.clone(),
            coeffs,
        };
        debug_assert!(m.image().is_ok_and(|u| u.is_zero()));
        m
    }

    pub fn zero(g: &GroundSet) -> Self {
        Move {
            ground: g.clone(),
            coeffs: vec![0; g.elementary_count()],
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Σ_u z(u)·u.
    pub fn image(&self) -> Result<Imset> {
        let mut u = Imset::zero(&self.ground);
        for (r, &k) in self.coeffs.iter().enumerate() {
            if k != 0 {
                u.add_elementary(self.ground.elementary(r), k)?;
            }
        }
        Ok(u)
    }

    pub fn positive(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &k)| k > 0).map(|(r, &k)| (r, k))
    }

    pub fn negative(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &k)| k < 0).map(|(r, &k)| (r, -k))
    }

    /// Sum of the positive coefficients.
    pub fn degree(&self) -> i64 {
        self.positive().map(|(_, k)| k).sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.coeffs.iter().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn checked_sub_scaled(&self, other: &Move, k: i64) -> Result<Move> {
        self.check_ground(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| {
                y.checked_mul(k)
                    .and_then(|p| x.checked_sub(p))
                    .ok_or(ImsetError::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Move {
            ground: self.ground.clone(),
            coeffs,
        })
    }

    pub fn negated(&self) -> Move {
        Move {
            ground: self.ground.clone(),
            coeffs: self.coeffs.iter().map(|k| -k).collect(),
        }
    }

    fn check_ground(&self, other: &Move) -> Result<()> {
        if self.ground != other.ground {
            return Err(ImsetError::GroundSetMismatch);
        }
        Ok(())
    }

    fn side_json(&self, side: impl Iterator<Item = (usize, i64)>) -> serde_json::Value {
        let g = &self.ground;
        let map = side
            .map(|(r, k)| (g.format_elementary(g.elementary(r)), serde_json::Value::from(k)))
            .collect();
        serde_json::Value::Object(map)
    }

    /// `{"lhs": {triplet: multiplicity}, "rhs": {...}}`, lhs the positive part.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lhs": self.side_json(self.positive()),
            "rhs": self.side_json(self.negative()),
        })
    }

    pub fn from_json(g: &GroundSet, value: &serde_json::Value) -> Result<Move> {
        let mut coeffs = vec![0i64; g.elementary_count()];
        for (key, sign) in [("lhs", 1i64), ("rhs", -1)] {
            let side = value
                .get(key)
                .and_then(|v| v.as_object())
                .ok_or_else(|| ImsetError::parse("move", &value.to_string(), format!("missing object \"{key}\"")))?;
            for (name, k) in side {
                let e = g.parse_elementary(name)?;
                let k = k
                    .as_i64()
                    .filter(|&k| k >= 0)
                    .ok_or_else(|| ImsetError::parse("move", name, "multiplicity must be a nonnegative integer"))?;
                coeffs[e.rank] += sign * k;
            }
        }
        Move::new(g, coeffs)
    }

    fn fmt_side(&self, f: &mut fmt::Formatter<'_>, side: Vec<(usize, i64)>) -> fmt::Result {
        if side.is_empty() {
            return f.write_str("0");
        }
        for (i, (r, k)) in side.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if k != 1 {
                write!(f, "{k} ")?;
            }
            f.write_str(&self.ground.format_elementary(self.ground.elementary(r)))?;
        }
        Ok(())
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_side(f, self.positive().collect())?;
        f.write_str(" = ")?;
        self.fmt_side(f, self.negative().collect())
    }
}

impl fmt::Debug for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Move({self})")
    }
}

fn rank_of(g: &GroundSet, a: usize, b: usize, c: Subset) -> usize {
    g.elementary_rank(a, b, c).expect("disjoint elementary triplet")
}

/// δ⟨a|b1|C⟩ + δ⟨a|b2|b1C⟩ − δ⟨a|b2|C⟩ − δ⟨a|b1|b2C⟩.
pub fn basic_move(g: &GroundSet, a: usize, b1: usize, b2: usize, cond: Subset) -> Result<Move> {
    let n = g.n();
    if a >= n || b1 >= n || b2 >= n || a == b1 || a == b2 || b1 == b2 {
        return Err(ImsetError::Precondition(
            "basic move needs three distinct elements".into(),
        ));
    }
    if !g.contains_subset(cond) || cond.contains(a) || cond.contains(b1) || cond.contains(b2) {
        return Err(ImsetError::NotDisjoint);
    }
    let mut coeffs = vec![0i64; g.elementary_count()];
    coeffs[rank_of(g, a, b1, cond)] += 1;
    coeffs[rank_of(g, a, b2, cond.with(b1))] += 1;
    coeffs[rank_of(g, a, b2, cond)] -= 1;
    coeffs[rank_of(g, a, b1, cond.with(b2))] -= 1;
    Ok(Move::from_kernel_vector(g, coeffs))
}

/// All basic moves over ordered (a, b1, b2, C); the two orders of b1, b2
/// give a move and its negative.
pub fn basic_moves(g: &GroundSet) -> Result<Vec<Move>> {
    if g.n() < 3 {
        return Err(ImsetError::Precondition(
            "no relations exist for fewer than three variables".into(),
        ));
    }
    let mut out = Vec::new();
    for &c in g.subsets() {
        let free = g.complement(c);
        for a in free.elements() {
            for b1 in free.without(a).elements() {
                for b2 in free.without(a).without(b1).elements() {
                    out.push(basic_move(g, a, b1, b2, c)?);
                }
            }
        }
    }
    Ok(out)
}

/// u⟨a|b1|b2C⟩ + u⟨a|b2|b3C⟩ + u⟨a|b3|b1C⟩ − u⟨a|b2|b1C⟩ − u⟨a|b3|b2C⟩ − u⟨a|b1|b3C⟩.
pub fn cyclic_move(
    g: &GroundSet,
    a: usize,
    b: [usize; 3],
    cond: Subset,
) -> Result<Move> {
    let mut terms = Vec::with_capacity(6);
    for i in 0..3 {
        let (x, y) = (b[i], b[(i + 1) % 3]);
        let pos = g
            .elementary_rank(a, x, cond.with(y))
            .ok_or(ImsetError::NotDisjoint)?;
        let neg = g
            .elementary_rank(a, y, cond.with(x))
            .ok_or(ImsetError::NotDisjoint)?;
        terms.push((*g.elementary(pos), 1));
        terms.push((*g.elementary(neg), -1));
    }
    Move::from_terms(g, terms)
}

fn cyclic_moves(g: &GroundSet) -> Vec<Move> {
    let mut out = Vec::new();
    if g.n() < 4 {
        return out;
    }
    for &c in g.subsets() {
        let free = g.complement(c);
        for a in free.elements() {
            let rest: Vec<usize> = free.without(a).elements().collect();
            for &b1 in &rest {
                for &b2 in &rest {
                    for &b3 in &rest {
                        if b1 < b2 && b1 < b3 && b2 != b3 {
                            out.push(cyclic_move(g, a, [b1, b2, b3], c).expect("valid triple"));
                        }
                    }
                }
            }
        }
    }
    out
}

/// `z = k·m` for a basic move `m` whose least term is positive.
fn as_single_basic(z: &Move) -> Option<(Move, i64)> {
    let support: Vec<usize> = (0..z.coeffs.len()).filter(|&r| z.coeffs[r] != 0).collect();
    if support.len() != 4 || z.ground.n() < 3 {
        return None;
    }
    let k = z.coeffs[support[0]];
    if support.iter().any(|&r| z.coeffs[r].abs() != k.abs()) {
        return None;
    }
    let unit: Vec<i64> = z.coeffs.iter().map(|x| x / k).collect();
    basic_moves(&z.ground)
        .ok()?
        .into_iter()
        .find(|m| m.coeffs == unit)
        .map(|m| (m, k))
}

/// Expresses a kernel vector as an integer combination of basic moves by
/// repeatedly cancelling its least elementary term.
pub fn reduce_to_basis(z: &Move) -> Result<Vec<(Move, i64)>> {
    let g = z.ground().clone();
    if !z.image()?.is_zero() {
        return Err(ImsetError::NotInKernel);
    }
    let mut steps: Vec<(Move, i64)> = Vec::new();
    if let Some(step) = as_single_basic(z) {
        steps.push(step);
        return Ok(steps);
    }
    let mut rest = z.clone();
    while let Some(r) = rest.coeffs.iter().position(|&k| k != 0) {
        let e = *g.elementary(r);
        let k = rest.coeffs[r];
        let free: Vec<usize> = g.complement(e.cond).elements().collect();
        let beta = free[free.len() - 1];
        let alpha = free[free.len() - 2];
        let step = if e.b < beta {
            basic_move(&g, e.a, e.b, beta, e.cond)?
        } else if e.a < alpha {
            basic_move(&g, e.b, e.a, alpha, e.cond)?
        } else {
            // The greatest triplet over C cannot lead a kernel vector.
            return Err(ImsetError::NotInKernel);
        };
        debug_assert_eq!(step.coeffs[..=r].iter().filter(|&&x| x != 0).count(), 1);
        rest = rest.checked_sub_scaled(&step, k)?;
        match steps.iter_mut().find(|(m, _)| *m == step) {
            Some((_, acc)) => *acc = acc.checked_add(k).ok_or(ImsetError::Overflow)?,
            None => steps.push((step, k)),
        }
    }
    steps.retain(|(_, k)| *k != 0);
    Ok(steps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationClass {
    TwoByTwoSemigraphoid,
    ThreeByThreeCyclic,
    ContainsTwoByTwo,
    Other,
}

impl RelationClass {
    pub fn name(self) -> &'static str {
        match self {
            RelationClass::TwoByTwoSemigraphoid => "two-by-two-semigraphoid",
            RelationClass::ThreeByThreeCyclic => "three-by-three-cyclic",
            RelationClass::ContainsTwoByTwo => "contains-2x2",
            RelationClass::Other => "other",
        }
    }
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A k by m relation α·u = β·v read off a nonzero move, oriented so k ≤ m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationForm {
    pub k: usize,
    pub m: usize,
    pub degree: i64,
    pub classification: RelationClass,
    pub relation: Move,
}

impl RelationForm {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "m": self.m,
            "degree": self.degree,
            "classification": self.classification.name(),
            "relation": self.relation.to_json(),
            "text": self.relation.to_string(),
        })
    }
}

/// Lookup tables shared across many classifications over one ground set.
pub(crate) struct Classifier {
    basic: Vec<Move>,
    basic_keys: HashSet<Vec<i64>>,
    cyclic_keys: HashSet<Vec<i64>>,
}

impl Classifier {
    pub(crate) fn new(g: &GroundSet) -> Self {
        let basic = if g.n() >= 3 {
            basic_moves(g).expect("n >= 3")
        } else {
            Vec::new()
        };
        let basic_keys = basic.iter().map(|m| m.coeffs.clone()).collect();
        let cyclic_keys = cyclic_moves(g)
            .into_iter()
            .flat_map(|m| [m.negated().coeffs, m.coeffs])
            .collect();
        Classifier {
            basic,
            basic_keys,
            cyclic_keys,
        }
    }

    fn orient(z: &Move) -> Move {
        let k = z.positive().count();
        let m = z.negative().count();
        let first_negative = z.coeffs.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
        if k > m || (k == m && first_negative) {
            z.negated()
        } else {
            z.clone()
        }
    }

    pub(crate) fn classify(&self, z: &Move) -> Result<RelationForm> {
        if z.is_zero() {
            return Err(ImsetError::Precondition("relation must be nonzero".into()));
        }
        let z = Self::orient(z);
        let k = z.positive().count();
        let m = z.negative().count();
        let t = z.max_abs();
        let uniform = z.coeffs.iter().all(|&x| x == 0 || x.abs() == t);
        let unit: Vec<i64> = z.coeffs.iter().map(|x| x / t).collect();
        let classification = if uniform && k == 2 && m == 2 && self.basic_keys.contains(&unit) {
            RelationClass::TwoByTwoSemigraphoid
        } else if uniform && k == 3 && m == 3 && self.cyclic_keys.contains(&unit) {
            RelationClass::ThreeByThreeCyclic
        } else if self.contains_basic(&z) {
            RelationClass::ContainsTwoByTwo
        } else {
            RelationClass::Other
        };
        Ok(RelationForm {
            k,
            m,
            degree: z.degree(),
            classification,
            relation: z,
        })
    }

    /// Some side of a basic move lies inside one side of `z`.
    fn contains_basic(&self, z: &Move) -> bool {
        self.basic.iter().any(|b| {
            let side: Vec<usize> = b.positive().map(|(r, _)| r).collect();
            side.iter().all(|&r| z.coeffs[r] > 0) || side.iter().all(|&r| z.coeffs[r] < 0)
        })
    }
}

pub fn classify_relation(z: &Move) -> Result<RelationForm> {
    if !z.image()?.is_zero() {
        return Err(ImsetError::NotInKernel);
    }
    Classifier::new(z.ground()).classify(z)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn coefficient_vectors(k: usize, bound: i64, degree: i64) -> Vec<Vec<i64>> {
    fn rec(k: usize, bound: i64, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let slots = (k - cur.len() - 1) as i64;
        for x in 1..=bound.min(left - slots) {
            cur.push(x);
            rec(k, bound, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, bound, degree, &mut Vec::new(), &mut out);
    out
}

/// Every nonzero kernel vector with min(#positive, #negative) ≤ `k_max`,
/// all |coefficients| ≤ `coeff_bound` and degree ≤ `degree_bound`, classified.
/// Exhaustive; meant for n ≤ 4 and degree ≤ 6.
pub fn enumerate_small_relations(
    g: &GroundSet,
    k_max: usize,
    coeff_bound: i64,
    degree_bound: i64,
) -> Result<Vec<RelationForm>> {
    if g.n() < 3 || k_max == 0 || coeff_bound <= 0 || degree_bound <= 0 {
        return Ok(Vec::new());
    }
    let classifier = Classifier::new(g);
    let e = g.elementary_count();
    let mut jobs = Vec::new();
    for k in 1..=k_max.min(e) {
        let alphas = coefficient_vectors(k, coeff_bound, degree_bound);
        for cols in combinations(e, k) {
            for alpha in &alphas {
                jobs.push((cols.clone(), alpha.clone()));
            }
        }
    }
    let found: Vec<Vec<RelationForm>> = jobs
        .par_iter()
        .map(|(cols, alpha)| -> Result<Vec<RelationForm>> {
            let k = cols.len();
            let mut u = Imset::zero(g);
            let mut allowed = vec![true; e];
            for (&c, &a) in cols.iter().zip(alpha) {
                u.add_elementary(g.elementary(c), a)?;
                allowed[c] = false;
            }
            let opts = SearchOptions {
                allowed: Some(allowed),
                max_mult: Some(coeff_bound as u64),
                ..SearchOptions::default()
            };
            let mut out = Vec::new();
            let mut failure = None;
            search_decompositions(&u, &opts, |w| {
                let support: Vec<usize> = (0..e).filter(|&r| w[r] > 0).collect();
                // k == m relations are kept in the orientation whose least term is positive.
                if support.len() < k || (support.len() == k && support[0] < cols[0]) {
                    return true;
                }
                let mut coeffs: Vec<i64> = w.iter().map(|&x| -(x as i64)).collect();
                for (&c, &a) in cols.iter().zip(alpha) {
                    coeffs[c] = a;
                }
                match classifier.classify(&Move::from_kernel_vector(g, coeffs)) {
                    Ok(f) => out.push(f),
                    Err(err) => failure = Some(err),
                }
                failure.is_none()
            })?;
            match failure {
                Some(err) => Err(err),
                None => Ok(out),
            }
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<RelationForm> = found.into_iter().flatten().collect();
    all.sort_by(|x, y| {
        (x.k, x.m, x.degree)
            .cmp(&(y.k, y.m, y.degree))
            .then_with(|| y.relation.coeffs.cmp(&x.relation.coeffs))
    });
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::integer_rank;

    fn mv(g: &GroundSet, lhs: &[&str], rhs: &[&str]) -> Move {
        let terms = lhs
            .iter()
            .map(|s| (g.parse_elementary(s).unwrap(), 1))
            .chain(rhs.iter().map(|s| (g.parse_elementary(s).unwrap(), -1)));
        Move::from_terms(g, terms).unwrap()
    }

    #[test]
    fn basic_move_counts_and_kernel_rank() {
        for (n, count, kernel) in [(3, 6, 2), (4, 48, 13)] {
            let g = GroundSet::new(n).unwrap();
            let moves = basic_moves(&g).unwrap();
            assert_eq!(moves.len(), count);
            let rows: Vec<Vec<i64>> = moves.iter().map(|m| m.coeffs().to_vec()).collect();
            assert_eq!(integer_rank(&rows), kernel);
            for m in &moves {
                assert!(m.image().unwrap().is_zero());
                assert_eq!(m.coeffs().iter().sum::<i64>(), 0);
            }
        }
        assert!(basic_moves(&GroundSet::new(2).unwrap()).is_err());
    }

    #[test]
    fn rejects_non_kernel() {
        let g = GroundSet::new(3).unwrap();
        let mut c = vec![0; 6];
        c[0] = 1;
        assert_eq!(Move::new(&g, c).unwrap_err(), ImsetError::NotInKernel);
    }

    #[test]
    fn reduce_basic_move_is_itself() {
        let g = GroundSet::new(4).unwrap();
        for m in basic_moves(&g).unwrap() {
            let steps = reduce_to_basis(&m).unwrap();
            assert_eq!(steps.len(), 1);
            assert!(steps[0].0 == m && steps[0].1 == 1 || steps[0].0 == m.negated() && steps[0].1 == -1);
        }
        assert!(reduce_to_basis(&Move::zero(&g)).unwrap().is_empty());
    }

    #[test]
    fn reduce_cyclic_relation() {
        let g = GroundSet::new(4).unwrap();
        let z = cyclic_move(&g, 0, [1, 2, 3], Subset::default()).unwrap();
        let steps = reduce_to_basis(&z).unwrap();
        let mut acc = Move::zero(&g);
        for (m, k) in &steps {
            acc = acc.checked_sub_scaled(m, -k).unwrap();
        }
        assert_eq!(acc, z);
    }

    #[test]
    fn classify_examples() {
        let g = GroundSet::new(4).unwrap();
        let two = mv(&g, &["a|b|0", "a|c|b"], &["a|c|0", "a|b|c"]);
        assert_eq!(
            classify_relation(&two).unwrap().classification,
            RelationClass::TwoByTwoSemigraphoid
        );
        let cyc = cyclic_move(&g, 0, [1, 2, 3], Subset::default()).unwrap();
        let f = classify_relation(&cyc.negated()).unwrap();
        assert_eq!(f.classification, RelationClass::ThreeByThreeCyclic);
        assert_eq!((f.k, f.m, f.degree), (3, 3, 3));
        let c = |s: &str| g.parse_elementary(s).unwrap();
        let z = Move::from_terms(
            &g,
            [
                (c("a|c|0"), 2),
                (c("a|b|c"), 1),
                (c("b|c|a"), 1),
                (c("a|b|0"), -1),
                (c("b|c|0"), -1),
                (c("a|c|b"), -2),
            ],
        )
        .unwrap();
        let f = classify_relation(&z).unwrap();
        assert_eq!(f.classification, RelationClass::ContainsTwoByTwo);
        assert_eq!((f.k, f.m, f.degree), (3, 3, 4));
    }

    #[test]
    fn json_round_trip() {
        let g = GroundSet::new(4).unwrap();
        let m = mv(&g, &["a|b|d", "a|c|bd"], &["a|c|d", "a|b|cd"]);
        let back = Move::from_json(&g, &m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.to_string(), "a|b|d + a|c|bd = a|c|d + a|b|cd");
    }

    #[test]
    fn n3_two_by_two_relations() {
        let g = GroundSet::new(3).unwrap();
        let rels = enumerate_small_relations(&g, 2, 6, 6).unwrap();
        assert!(!rels.is_empty());
        for r in &rels {
            assert_eq!(r.classification, RelationClass::TwoByTwoSemigraphoid);
            for (i, _) in r.relation.positive().chain(r.relation.negative()) {
                let e = g.elementary(i);
                assert!(e.cond.is_empty() || e.cond.len() == 1);
            }
        }
        // one unit relation per choice of the common element, up to sign
        assert_eq!(rels.iter().filter(|r| r.degree == 2).count(), 3);
    }
}
