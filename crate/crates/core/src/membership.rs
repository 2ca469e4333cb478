//! Membership in the lattice L*, the structural cone S(N) and the
//! combinatorial semigroup C(N).

use std::fmt;

use crate::error::{ImsetError, Result};
use crate::ground::GroundSet;
use crate::imset::{Configuration, Imset};
use crate::linalg::{rat, Rational, RationalMatrix};

/// Node budget of the default combinatorial search.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ImsetClass {
    None,
    Lattice,
    Structural,
    Combinatorial,
}

impl ImsetClass {
    pub fn name(self) -> &'static str {
        match self {
            ImsetClass::None => "none",
            ImsetClass::Lattice => "lattice",
            ImsetClass::Structural => "structural",
            ImsetClass::Combinatorial => "combinatorial",
        }
    }
}

impl fmt::Display for ImsetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coefficients over E(N) in elementary order.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Rational(Vec<Rational>),
    Integer(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipResult {
    pub class: ImsetClass,
    pub witness: Option<Witness>,
    /// ⟨f*, u⟩ with f*(S) = |S|(|S|−1)/2.
    pub degree: i64,
}

impl MembershipResult {
    pub fn to_json(&self, g: &GroundSet) -> serde_json::Value {
        let witness = match &self.witness {
            None => serde_json::Value::Null,
            Some(w) => {
                let mut map = serde_json::Map::new();
                match w {
                    Witness::Integer(c) => {
                        for (r, &k) in c.iter().enumerate() {
                            if k != 0 {
                                map.insert(g.format_elementary(g.elementary(r)), k.into());
                            }
                        }
                    }
                    Witness::Rational(c) => {
                        for (r, q) in c.iter().enumerate() {
                            if *q != rat(0) {
                                map.insert(
                                    g.format_elementary(g.elementary(r)),
                                    q.to_string().into(),
                                );
                            }
                        }
                    }
                }
                serde_json::Value::Object(map)
            }
        };
        serde_json::json!({
            "class": self.class.name(),
            "degree": self.degree,
            "witness": witness,
        })
    }
}

/// Knobs of the depth-first decomposition search.
#[derive(Clone, Debug)]
pub(crate) struct SearchOptions {
    /// Columns of E(N) that may be used; all when `None`.
    pub allowed: Option<Vec<bool>>,
    pub max_mult: Option<u64>,
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            allowed: None,
            max_mult: None,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

struct Search<'a, F: FnMut(&[u64]) -> bool> {
    g: &'a GroundSet,
    residual: Vec<i64>,
    counts: Vec<u64>,
    /// Elementary ranks grouped by the rank of their conditioning set.
    blocks: Vec<Vec<usize>>,
    /// Rank ranges of each cardinality layer.
    layer_end: Vec<usize>,
    max_mult: u64,
    budget: u64,
    nodes: u64,
    stopped: bool,
    visit: F,
}

impl<F: FnMut(&[u64]) -> bool> Search<'_, F> {
    fn apply(&mut self, e: usize, x: i64) {
        let el = *self.g.elementary(e);
        let g = self.g;
        self.residual[g.rank(el.cond)] -= x;
        self.residual[g.rank(el.cond.with(el.a))] += x;
        self.residual[g.rank(el.cond.with(el.b))] += x;
        self.residual[g.rank(el.top())] -= x;
        self.counts[e] = (self.counts[e] as i64 + x) as u64;
    }

    fn node(&mut self, start: usize, degree_left: i64) -> Result<()> {
        if self.stopped {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ImsetError::Budget(format!(
                "combinatorial search exceeded {} nodes",
                self.budget
            )));
        }
        let Some(s0) = (start..self.residual.len()).find(|&r| self.residual[r] != 0) else {
            if !(self.visit)(&self.counts) {
                self.stopped = true;
            }
            return Ok(());
        };
        let total = self.residual[s0];
        if total < 0 || total > degree_left {
            return Ok(());
        }
        // Later blocks of this cardinality only add mass to their own set.
        let layer = self.g.subset_at(s0).len();
        if self.residual[s0 + 1..self.layer_end[layer]].iter().any(|&v| v < 0) {
            return Ok(());
        }
        let block = self.blocks[s0].clone();
        if block.is_empty() {
            return Ok(());
        }
        self.compose(&block, 0, total, s0, degree_left - total)
    }

    fn compose(
        &mut self,
        block: &[usize],
        j: usize,
        left: i64,
        s0: usize,
        degree_after: i64,
    ) -> Result<()> {
        let e = block[j];
        if j + 1 == block.len() {
            if left as u64 > self.max_mult {
                return Ok(());
            }
            self.apply(e, left);
            let r = self.node(s0 + 1, degree_after);
            self.apply(e, -left);
            return r;
        }
        let top = left.min(self.max_mult as i64);
        for x in 0..=top {
            if self.stopped {
                break;
            }
            self.apply(e, x);
            let r = self.compose(block, j + 1, left - x, s0, degree_after);
            self.apply(e, -x);
            r?;
        }
        Ok(())
    }
}

/// Enumerates nonnegative integer combinations of elementary imsets equal to
/// `u` in lexicographic order of the coefficient vector; `visit` returns
/// false to stop. Returns false when the search was stopped early.
pub(crate) fn search_decompositions<F: FnMut(&[u64]) -> bool>(
    u: &Imset,
    opts: &SearchOptions,
    visit: F,
) -> Result<bool> {
    let g = u.ground();
    let degree = u.degree();
    if degree < 0 {
        return Ok(true);
    }
    let mut blocks = vec![Vec::new(); g.size()];
    for e in g.elementaries() {
        if opts.allowed.as_ref().is_none_or(|a| a[e.rank]) {
            blocks[g.rank(e.cond)].push(e.rank);
        }
    }
    let mut layer_end = vec![0; g.n() + 1];
    for (r, s) in g.subsets().iter().enumerate() {
        layer_end[s.len()] = r + 1;
    }
    let mut search = Search {
        g,
        residual: u.values().to_vec(),
        counts: vec![0; g.elementary_count()],
        blocks,
        layer_end,
        max_mult: opts.max_mult.unwrap_or(i64::MAX as u64).min(i64::MAX as u64),
        budget: opts.node_budget,
        nodes: 0,
        stopped: false,
        visit,
    };
    search.node(0, degree)?;
    Ok(!search.stopped)
}

/// Up to `limit` witnesses of u ∈ C(N) in lexicographic order.
pub fn combinatorial_decompositions(u: &Imset, limit: usize) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    search_decompositions(u, &SearchOptions::default(), |w| {
        out.push(w.to_vec());
        out.len() < limit
    })?;
    if out.is_empty() {
        return Err(ImsetError::NotCombinatorial);
    }
    Ok(out)
}

/// A rational witness of u ∈ K*(N), or `None` when u lies outside the cone.
pub fn structural_witness(u: &Imset) -> Result<Option<Vec<Rational>>> {
    let g = u.ground();
    if g.n() < 2 {
        return Ok(u.is_zero().then(Vec::new));
    }
    let config = Configuration::full(g)?;
    let a = RationalMatrix::from_i64_rows(&config.dense())?;
    let b: Vec<Rational> = u.values().iter().map(|&v| rat(v)).collect();
    Ok(a.lp_feasible(&b)?.witness().map(|w| w.to_vec()))
}

/// Strongest of the classes lattice ⊇ structural ⊇ combinatorial holding for `u`.
pub fn classify(u: &Imset) -> Result<MembershipResult> {
    classify_with_budget(u, DEFAULT_NODE_BUDGET)
}

pub fn classify_with_budget(u: &Imset, node_budget: u64) -> Result<MembershipResult> {
    let degree = u.degree();
    let mut result = MembershipResult {
        class: ImsetClass::None,
        witness: None,
        degree,
    };
    if !u.is_member_l_star() {
        return Ok(result);
    }
    result.class = ImsetClass::Lattice;
    let Some(rational) = structural_witness(u)? else {
        return Ok(result);
    };
    result.class = ImsetClass::Structural;
    result.witness = Some(Witness::Rational(rational));
    let opts = SearchOptions {
        node_budget,
        ..SearchOptions::default()
    };
    let mut found = None;
    search_decompositions(u, &opts, |w| {
        found = Some(w.to_vec());
        false
    })?;
    if let Some(w) = found {
        result.class = ImsetClass::Combinatorial;
        result.witness = Some(Witness::Integer(w));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imset::decompose_semi_elementary;

    fn resum(g: &GroundSet, w: &[u64]) -> Imset {
        let mut u = Imset::zero(g);
        for (r, &k) in w.iter().enumerate() {
            u.add_elementary(g.elementary(r), k as i64).unwrap();
        }
        u
    }

    #[test]
    fn semi_elementary_is_combinatorial() {
        let g = GroundSet::new(4).unwrap();
        let t = g.parse_triplet("ab|cd|0").unwrap();
        let u = Imset::semi_elementary(&g, &t);
        let res = classify(&u).unwrap();
        assert_eq!(res.class, ImsetClass::Combinatorial);
        assert_eq!(res.degree, 4);
        let Some(Witness::Integer(w)) = &res.witness else { panic!() };
        assert_eq!(resum(&g, w), u);
        assert_eq!(w.iter().sum::<u64>(), 4);
        let canonical = decompose_semi_elementary(&g, &t).unwrap();
        let mut v = vec![0u64; g.elementary_count()];
        for (e, k) in canonical {
            v[e.rank] = k;
        }
        assert!(combinatorial_decompositions(&u, 1000).unwrap().contains(&v));
    }

    #[test]
    fn example_imset() {
        let g = GroundSet::new(4).unwrap();
        let mut u = Imset::zero(&g);
        for s in ["c|d|ab", "a|b|0", "a|b|c", "a|b|d"] {
            u.add_elementary(&g.parse_elementary(s).unwrap(), 1).unwrap();
        }
        let res = classify(&u).unwrap();
        assert_eq!(res.class, ImsetClass::Combinatorial);
        assert_eq!(res.degree, 4);
    }

    #[test]
    fn delta_full_is_none() {
        let g = GroundSet::new(3).unwrap();
        let u = Imset::delta(&g, g.full());
        assert_eq!(classify(&u).unwrap().class, ImsetClass::None);
        assert!(combinatorial_decompositions(&u, 3).is_err());
    }

    #[test]
    fn negative_elementary_is_lattice_only() {
        let g = GroundSet::new(3).unwrap();
        let u = -&Imset::elementary(&g, g.elementary(0));
        assert_eq!(classify(&u).unwrap().class, ImsetClass::Lattice);
    }

    #[test]
    fn elementary_has_unique_witness() {
        let g = GroundSet::new(4).unwrap();
        for e in g.elementaries() {
            let ws = combinatorial_decompositions(&Imset::elementary(&g, e), 10).unwrap();
            assert_eq!(ws.len(), 1);
            assert_eq!(ws[0][e.rank], 1);
        }
    }

    #[test]
    fn relation_sides_are_both_witnesses() {
        let g = GroundSet::new(3).unwrap();
        let mut u = Imset::zero(&g);
        for s in ["a|b|0", "a|c|b"] {
            u.add_elementary(&g.parse_elementary(s).unwrap(), 1).unwrap();
        }
        let ws = combinatorial_decompositions(&u, 10).unwrap();
        assert_eq!(ws.len(), 2);
        assert!(ws[0] < ws[1]);
        for w in &ws {
            assert_eq!(resum(&g, w), u);
        }
    }

    #[test]
    fn witnesses_stay_in_face() {
        let g = GroundSet::new(3).unwrap();
        let t = g.parse_triplet("a|bc|0").unwrap();
        let face = crate::face::extreme_set(&g, &t).unwrap();
        let u = Imset::semi_elementary(&g, &t);
        for w in combinatorial_decompositions(&u, 100).unwrap() {
            for (r, &k) in w.iter().enumerate() {
                if k > 0 {
                    assert!(face.iter().any(|e| e.rank == r));
                }
            }
        }
    }
}
