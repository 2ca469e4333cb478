//! Ground sets, subsets, triplets and the canonical orders on P(N) and E(N).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{ImsetError, Result};

pub const MAX_VARIABLES: usize = 12;

/// A subset of the ground set, stored as a bitmask over label indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(items: I) -> Self {
        Subset(items.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    /// Elements in increasing label order.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> Submasks {
        Submasks {
            set: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset({:#b})", self.0)
    }
}

/// Graded order: cardinality first, ties broken lexicographically on the
/// sorted label strings.
pub fn graded_cmp(s: Subset, t: Subset) -> Ordering {
    match s.len().cmp(&t.len()) {
        Ordering::Equal if s == t => Ordering::Equal,
        // equal size: the first differing sorted position is the lowest
        // label of the symmetric difference
        Ordering::Equal => {
            let low = (s.0 ^ t.0).trailing_zeros();
            if s.0 >> low & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        other => other,
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_cmp(*self, *other)
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub struct Submasks {
    set: u32,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        let following = cur.wrapping_sub(self.set) & self.set;
        self.next = (following != 0).then_some(following);
        Some(Subset(cur))
    }
}

/// An elementary triplet ⟨a|b|C⟩ with `a < b` and its rank in E(N).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ElementaryIndex {
    pub a: usize,
    pub b: usize,
    pub cond: Subset,
    pub rank: usize,
}

impl ElementaryIndex {
    pub fn triplet(&self) -> Triplet {
        Triplet {
            a: Subset::singleton(self.a),
            b: Subset::singleton(self.b),
            c: self.cond,
        }
    }

    /// The set `abC`.
    pub fn top(&self) -> Subset {
        self.cond.with(self.a).with(self.b)
    }
}

/// Elementary order: by `C` in graded order, then `b`, then `a`.
pub fn elementary_cmp(u: &ElementaryIndex, v: &ElementaryIndex) -> Ordering {
    graded_cmp(u.cond, v.cond)
        .then(u.b.cmp(&v.b))
        .then(u.a.cmp(&v.a))
}

/// Alternative order used in the basis construction of the relation lattice:
/// larger binary weight of `C` first, then larger `b`, then larger `a`.
pub fn elementary_weight_cmp(u: &ElementaryIndex, v: &ElementaryIndex) -> Ordering {
    v.cond
        .mask()
        .cmp(&u.cond.mask())
        .then(v.b.cmp(&u.b))
        .then(v.a.cmp(&u.a))
}

impl Ord for ElementaryIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        elementary_cmp(self, other)
    }
}

impl PartialOrd for ElementaryIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A disjoint triplet ⟨A|B|C⟩, kept with `A` preceding `B` in graded order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Triplet {
    a: Subset,
    b: Subset,
    c: Subset,
}

impl Triplet {
    pub fn new(a: Subset, b: Subset, c: Subset) -> Result<Self> {
        if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
            return Err(ImsetError::NotDisjoint);
        }
        let (a, b) = if graded_cmp(a, b) == Ordering::Greater {
            (b, a)
        } else {
            (a, b)
        };
        Ok(Triplet { a, b, c })
    }

    pub fn a(&self) -> Subset {
        self.a
    }

    pub fn b(&self) -> Subset {
        self.b
    }

    pub fn c(&self) -> Subset {
        self.c
    }

    pub fn union(&self) -> Subset {
        self.a.union(self.b).union(self.c)
    }

    pub fn is_elementary(&self) -> bool {
        self.a.len() == 1 && self.b.len() == 1
    }

    /// A or B empty: the statement holds for every distribution.
    pub fn is_trivial(&self) -> bool {
        self.a.is_empty() || self.b.is_empty()
    }
}

/// Ordering of general triplets extending the elementary order.
impl Ord for Triplet {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_cmp(self.c, other.c)
            .then(graded_cmp(self.b, other.b))
            .then(graded_cmp(self.a, other.a))
    }
}

impl PartialOrd for Triplet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Tables {
    n: usize,
    labels: Vec<char>,
    by_rank: Vec<Subset>,
    rank_of: Vec<u32>,
    elementary: Vec<ElementaryIndex>,
    // indexed by cond mask * n * n + a * n + b
    elementary_lookup: Vec<u32>,
}

/// The ground set N together with the precomputed order tables.
#[derive(Clone)]
pub struct GroundSet {
    inner: Arc<Tables>,
}

impl GroundSet {
    /// Ground set with labels `a`, `b`, `c`, ...
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=MAX_VARIABLES).contains(&n) {
            return Err(ImsetError::GroundSetSize {
                n,
                max: MAX_VARIABLES,
            });
        }
        Self::with_labels((0..n).map(|i| (b'a' + i as u8) as char).collect())
    }

    pub fn with_labels(labels: Vec<char>) -> Result<Self> {
        let n = labels.len();
        if !(1..=MAX_VARIABLES).contains(&n) {
            return Err(ImsetError::GroundSetSize {
                n,
                max: MAX_VARIABLES,
            });
        }
        for (i, &c) in labels.iter().enumerate() {
            if c == '0' || c == '|' || c == ',' || c.is_whitespace() || c.is_control() {
                return Err(ImsetError::InvalidLabels(format!("reserved character {c:?}")));
            }
            if labels[..i].contains(&c) {
                return Err(ImsetError::InvalidLabels(format!("duplicate label {c:?}")));
            }
        }

        let size = 1usize << n;
        let mut by_rank: Vec<Subset> = (0..size as u32).map(Subset).collect();
        by_rank.sort_by(|s, t| graded_cmp(*s, *t));
        let mut rank_of = vec![0u32; size];
        for (r, s) in by_rank.iter().enumerate() {
            rank_of[s.mask() as usize] = r as u32;
        }

        let mut elementary = Vec::new();
        for &cond in &by_rank {
            for b in 0..n {
                if cond.contains(b) {
                    continue;
                }
                for a in 0..b {
                    if cond.contains(a) {
                        continue;
                    }
                    elementary.push(ElementaryIndex {
                        a,
                        b,
                        cond,
                        rank: elementary.len(),
                    });
                }
            }
        }
        let mut elementary_lookup = vec![u32::MAX; size * n * n];
        for e in &elementary {
            elementary_lookup[e.cond.mask() as usize * n * n + e.a * n + e.b] = e.rank as u32;
        }

        Ok(GroundSet {
            inner: Arc::new(Tables {
                n,
                labels,
                by_rank,
                rank_of,
                elementary,
                elementary_lookup,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn labels(&self) -> &[char] {
        &self.inner.labels
    }

    pub fn label(&self, i: usize) -> char {
        self.inner.labels[i]
    }

    /// |P(N)|.
    pub fn size(&self) -> usize {
        1 << self.inner.n
    }

    pub fn full(&self) -> Subset {
        Subset((1u32 << self.inner.n) - 1)
    }

    pub fn complement(&self, s: Subset) -> Subset {
        self.full().difference(s)
    }

    /// Subset at position `rank` of the graded order.
    pub fn subset_at(&self, rank: usize) -> Subset {
        self.inner.by_rank[rank]
    }

    pub fn rank(&self, s: Subset) -> usize {
        self.inner.rank_of[s.mask() as usize] as usize
    }

    /// All subsets in ascending graded order.
    pub fn subsets(&self) -> &[Subset] {
        &self.inner.by_rank
    }

    /// Elementary triplets in ascending elementary order.
    pub fn elementaries(&self) -> &[ElementaryIndex] {
        &self.inner.elementary
    }

    pub fn elementary_count(&self) -> usize {
        self.inner.elementary.len()
    }

    pub fn elementary(&self, rank: usize) -> &ElementaryIndex {
        &self.inner.elementary[rank]
    }

    /// Looks up ⟨a|b|C⟩; the two singletons may be given in either order.
    pub fn elementary_rank(&self, a: usize, b: usize, cond: Subset) -> Option<usize> {
        let n = self.inner.n;
        if a >= n || b >= n || a == b || cond.mask() >> n != 0 {
            return None;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let r = self.inner.elementary_lookup[cond.mask() as usize * n * n + a * n + b];
        (r != u32::MAX).then_some(r as usize)
    }

    pub fn elementary_of(&self, t: &Triplet) -> Option<&ElementaryIndex> {
        if !t.is_elementary() {
            return None;
        }
        let a = t.a().min_element()?;
        let b = t.b().min_element()?;
        self.elementary_rank(a, b, t.c()).map(|r| self.elementary(r))
    }

    pub fn contains_subset(&self, s: Subset) -> bool {
        s.mask() >> self.inner.n == 0
    }

    pub fn label_index(&self, c: char) -> Option<usize> {
        self.inner.labels.iter().position(|&l| l == c)
    }

    pub fn format_subset(&self, s: Subset) -> String {
        if s.is_empty() {
            return "0".to_string();
        }
        s.elements().map(|i| self.label(i)).collect()
    }

    pub fn parse_subset(&self, text: &str) -> Result<Subset> {
        let text = text.trim();
        if text == "0" {
            return Ok(Subset::EMPTY);
        }
        if text.is_empty() {
            return Err(ImsetError::parse("subset", text, "empty string"));
        }
        let mut s = Subset::EMPTY;
        for c in text.chars() {
            let i = self
                .label_index(c)
                .ok_or_else(|| ImsetError::parse("subset", text, format!("unknown label {c:?}")))?;
            if s.contains(i) {
                return Err(ImsetError::parse("subset", text, format!("repeated label {c:?}")));
            }
            s = s.with(i);
        }
        Ok(s)
    }

    pub fn format_triplet(&self, t: &Triplet) -> String {
        format!(
            "{}|{}|{}",
            self.format_subset(t.a()),
            self.format_subset(t.b()),
            self.format_subset(t.c())
        )
    }

    pub fn format_elementary(&self, e: &ElementaryIndex) -> String {
        self.format_triplet(&e.triplet())
    }

    pub fn parse_triplet(&self, text: &str) -> Result<Triplet> {
        let parts: Vec<&str> = text.trim().split('|').collect();
        if parts.len() != 3 {
            return Err(ImsetError::parse("triplet", text, "expected A|B|C"));
        }
        let a = self.parse_subset(parts[0])?;
        let b = self.parse_subset(parts[1])?;
        let c = self.parse_subset(parts[2])?;
        Triplet::new(a, b, c)
            .map_err(|_| ImsetError::parse("triplet", text, "sets are not pairwise disjoint"))
    }

    pub fn parse_elementary(&self, text: &str) -> Result<ElementaryIndex> {
        let t = self.parse_triplet(text)?;
        self.elementary_of(&t)
            .copied()
            .ok_or_else(|| ImsetError::parse("elementary triplet", text, "not elementary"))
    }

    /// Disjoint triplets with `A`, `B` nonempty, in ascending order.
    /// With `elementary_only` this is E(N).
    pub fn triplets(&self, elementary_only: bool) -> Vec<Triplet> {
        if elementary_only {
            return self.elementaries().iter().map(|e| e.triplet()).collect();
        }
        let mut out = Vec::new();
        for &c in self.subsets() {
            let rest = self.complement(c);
            for b in rest.subsets().filter(|b| !b.is_empty()) {
                for a in rest.difference(b).subsets() {
                    if !a.is_empty() && graded_cmp(a, b) == Ordering::Less {
                        out.push(Triplet { a, b, c });
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl PartialEq for GroundSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.labels == other.inner.labels
    }
}

impl Eq for GroundSet {}

impl std::hash::Hash for GroundSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.labels.hash(state);
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: String = self.inner.labels.iter().collect();
        f.debug_struct("GroundSet")
            .field("n", &self.inner.n)
            .field("labels", &labels)
            .finish()
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// |E(N)| = C(n,2) 2^(n-2).
pub fn elementary_count_formula(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    binomial(n as u64, 2) as usize * (1 << (n - 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(g: &GroundSet) -> Vec<String> {
        g.subsets().iter().map(|&s| g.format_subset(s)).collect()
    }

    #[test]
    fn graded_order_n4() {
        let g = GroundSet::new(4).unwrap();
        let expected = [
            "0", "a", "b", "c", "d", "ab", "ac", "ad", "bc", "bd", "cd", "abc", "abd", "acd",
            "bcd", "abcd",
        ];
        assert_eq!(names(&g), expected);
        assert_eq!(g.rank(g.parse_subset("ab").unwrap()), 5);
    }

    #[test]
    fn elementary_order_n4() {
        let g = GroundSet::new(4).unwrap();
        let got: Vec<String> = g.elementaries().iter().map(|e| g.format_elementary(e)).collect();
        let expected = [
            "a|b|0", "a|c|0", "b|c|0", "a|d|0", "b|d|0", "c|d|0", "b|c|a", "b|d|a", "c|d|a",
            "a|c|b", "a|d|b", "c|d|b", "a|b|c", "a|d|c", "b|d|c", "a|b|d", "a|c|d", "b|c|d",
            "c|d|ab", "b|d|ac", "b|c|ad", "a|d|bc", "a|c|bd", "a|b|cd",
        ];
        assert_eq!(got, expected);
        let top = g.parse_elementary("a|b|cd").unwrap();
        assert_eq!(top.rank, 23);
    }

    #[test]
    fn elementary_lookup_is_symmetric() {
        let g = GroundSet::new(5).unwrap();
        for e in g.elementaries() {
            assert_eq!(g.elementary_rank(e.a, e.b, e.cond), Some(e.rank));
            assert_eq!(g.elementary_rank(e.b, e.a, e.cond), Some(e.rank));
        }
        assert_eq!(g.elementary_rank(0, 1, Subset::singleton(0)), None);
    }

    #[test]
    fn counts_match_formula() {
        for n in 1..=8 {
            let g = GroundSet::new(n).unwrap();
            assert_eq!(g.elementary_count(), elementary_count_formula(n));
        }
    }

    #[test]
    fn parse_round_trip() {
        let g = GroundSet::new(4).unwrap();
        for &s in g.subsets() {
            assert_eq!(g.parse_subset(&g.format_subset(s)).unwrap(), s);
        }
        assert!(g.parse_subset("aa").is_err());
        assert!(g.parse_subset("ae").is_err());
        assert!(g.parse_triplet("a|a|0").is_err());
        let t = g.parse_triplet("cd|ab|0").unwrap();
        assert_eq!(g.format_triplet(&t), "ab|cd|0");
    }

    #[test]
    fn submasks_cover_all() {
        let s = Subset::from_mask(0b1011);
        let subs: Vec<u32> = s.subsets().map(|t| t.mask()).collect();
        assert_eq!(subs, [0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(Subset::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn triplet_enumeration_n3() {
        let g = GroundSet::new(3).unwrap();
        let ts = g.triplets(false);
        // ⟨a|b|c⟩-type: 3 with C=∅ two singletons, 3 with one in C, plus 3 of shape ⟨x|yz|∅⟩
        assert_eq!(ts.len(), 9);
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn weight_order_puts_top_first() {
        let g = GroundSet::new(4).unwrap();
        let mut es = g.elementaries().to_vec();
        es.sort_by(elementary_weight_cmp);
        assert_eq!(g.format_elementary(&es[0]), "a|b|cd");
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(GroundSet::with_labels(vec!['a', 'a']).is_err());
        assert!(GroundSet::with_labels(vec!['0']).is_err());
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(13).is_err());
    }
}
