//! Minimal Markov bases of the configuration by fiber connectivity, with
//! reduction modulo relabelling of the ground set.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{ImsetError, Result};
use crate::face::extreme_set;
use crate::ground::{GroundSet, Subset, Triplet};
use crate::imset::Configuration;
use crate::relations::Move;

/// Memory ceiling of the multiset enumeration.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Largest ground set whose full symmetric group is enumerated.
pub const MAX_SYMMETRY_N: usize = 7;

/// Which pair of fiber elements becomes the connecting move.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Components ordered by least member; move min(K1) − min(Kj).
    #[default]
    Least,
    /// Components ordered by greatest member, descending; move max(K1) − max(Kj).
    Greatest,
}

#[derive(Clone, Debug)]
pub struct MarkovOptions {
    pub degree_cap: usize,
    pub tie_break: TieBreak,
    pub memory_budget: u64,
}

impl MarkovOptions {
    pub fn new(degree_cap: usize) -> Self {
        MarkovOptions {
            degree_cap,
            tie_break: TieBreak::Least,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MarkovBasisReport {
    pub degree_cap: usize,
    /// Representatives per degree modulo relabelling.
    pub per_degree_counts: BTreeMap<usize, usize>,
    /// Size of the minimal basis per degree, before symmetry reduction.
    pub per_degree_basis_size: BTreeMap<usize, usize>,
    pub representatives: Vec<Move>,
    pub complete: bool,
}

impl MarkovBasisReport {
    pub fn to_json(&self) -> serde_json::Value {
        let counts: serde_json::Map<String, serde_json::Value> = self
            .per_degree_counts
            .iter()
            .map(|(d, c)| (d.to_string(), (*c).into()))
            .collect();
        let sizes: serde_json::Map<String, serde_json::Value> = self
            .per_degree_basis_size
            .iter()
            .map(|(d, c)| (d.to_string(), (*c).into()))
            .collect();
        serde_json::json!({
            "degree_cap": self.degree_cap,
            "per_degree_counts": counts,
            "per_degree_basis_size": sizes,
            "complete": self.complete,
            "representatives": self.representatives.iter().map(|m| {
                let mut v = m.to_json();
                v["degree"] = m.degree().into();
                v
            }).collect::<Vec<_>>(),
        })
    }

    /// Degree and representative count, one row per degree.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,representatives\n");
        for (d, c) in &self.per_degree_counts {
            out.push_str(&format!("{d},{c}\n"));
        }
        out
    }
}

/// A relabelling of N acting on subsets and on elementary ranks.
#[derive(Clone, Debug)]
pub(crate) struct LabelPermutation {
    /// Image of each subset rank.
    pub subsets: Vec<usize>,
    /// Image of each elementary rank.
    pub elementaries: Vec<usize>,
}

impl LabelPermutation {
    fn new(g: &GroundSet, sigma: &[usize]) -> Self {
        let map = |s: Subset| Subset::from_elements(s.elements().map(|i| sigma[i]));
        let subsets = g.subsets().iter().map(|&s| g.rank(map(s))).collect();
        let elementaries = g
            .elementaries()
            .iter()
            .map(|e| {
                g.elementary_rank(sigma[e.a], sigma[e.b], map(e.cond))
                    .expect("relabelling keeps disjointness")
            })
            .collect();
        LabelPermutation {
            subsets,
            elementaries,
        }
    }

    fn apply(&self, coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0; coeffs.len()];
        for (r, &k) in coeffs.iter().enumerate() {
            out[self.elementaries[r]] = k;
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// The full symmetric group on the labels of `g`.
pub(crate) fn label_group(g: &GroundSet) -> Result<Vec<LabelPermutation>> {
    if g.n() > MAX_SYMMETRY_N {
        return Err(ImsetError::Budget(format!(
            "symmetric group enumeration limited to n <= {MAX_SYMMETRY_N}"
        )));
    }
    Ok(permutations(g.n())
        .iter()
        .map(|s| LabelPermutation::new(g, s))
        .collect())
}

/// Relabellings mapping the column set of `config` onto itself.
pub(crate) fn configuration_group(config: &Configuration) -> Result<Vec<LabelPermutation>> {
    let g = config.ground();
    let mut member = vec![false; g.elementary_count()];
    for e in config.columns() {
        member[e.rank] = true;
    }
    Ok(label_group(g)?
        .into_iter()
        .filter(|p| (0..member.len()).all(|r| !member[r] || member[p.elementaries[r]]))
        .collect())
}

fn canonical_under(group: &[LabelPermutation], coeffs: &[i64]) -> Vec<i64> {
    let neg: Vec<i64> = coeffs.iter().map(|k| -k).collect();
    let mut best: Option<Vec<i64>> = None;
    for p in group {
        for z in [coeffs, &neg[..]] {
            let img = p.apply(z);
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap_or_else(|| coeffs.to_vec())
}

fn reduce_under(g: &GroundSet, group: &[LabelPermutation], moves: &[Move]) -> Vec<Move> {
    let mut reps: Vec<Vec<i64>> = moves
        .par_iter()
        .map(|m| canonical_under(group, m.coeffs()))
        .collect();
    reps.sort();
    reps.dedup();
    reps.into_iter()
        .map(|c| Move::from_kernel_vector(g, c))
        .collect()
}

/// Orbit representatives under relabelling and side swap; each
/// representative is the lexicographically least element of its orbit.
pub fn symmetry_reduce(moves: &[Move]) -> Result<Vec<Move>> {
    let Some(first) = moves.first() else {
        return Ok(Vec::new());
    };
    let g = first.ground().clone();
    if moves.iter().any(|m| *m.ground() != g) {
        return Err(ImsetError::GroundSetMismatch);
    }
    Ok(reduce_under(&g, &label_group(&g)?, moves))
}

/// All images of `z` under relabellings preserving the columns of `config`.
pub fn orbit(config: &Configuration, z: &Move) -> Result<Vec<Move>> {
    let g = config.ground();
    let mut out: Vec<Vec<i64>> = configuration_group(config)?
        .iter()
        .map(|p| p.apply(z.coeffs()))
        .collect();
    out.sort();
    out.dedup();
    Ok(out
        .into_iter()
        .map(|c| Move::from_kernel_vector(g, c))
        .collect())
}

/// Columns ⟨a|b|Γ⟩ with a ∈ A, b ∈ B and C ⊆ Γ ⊆ ABC∖ab.
pub fn subconfiguration(g: &GroundSet, t: &Triplet) -> Result<Configuration> {
    if t.union() != g.full() {
        return Err(ImsetError::Precondition(
            "sub-configuration needs ABC = N".into(),
        ));
    }
    Ok(Configuration::with_columns(g, extreme_set(g, t)?))
}

fn multiset_count(m: usize, d: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..d as u128 {
        c = c * (m as u128 + i) / (i + 1);
    }
    c
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Union-find over fiber members.
struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Components {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A fiber of one degree whose members fall into several components.
struct SplitFiber {
    image: Vec<i32>,
    moves: Vec<Vec<i64>>,
}

struct DegreeData<'a> {
    config: &'a Configuration,
    d: usize,
    /// Column indices of each multiset, `d` per entry, in lexicographic order.
    members: Vec<u8>,
}

impl DegreeData<'_> {
    fn member(&self, i: usize) -> &[u8] {
        &self.members[i * self.d..(i + 1) * self.d]
    }

    fn image(&self, i: usize) -> Vec<i32> {
        let mut v = vec![0i32; self.config.rows()];
        for &c in self.member(i) {
            for (r, x) in self.config.column_support(c as usize) {
                v[r] += x as i32;
            }
        }
        v
    }

    fn coeffs(&self, i: usize, sign: i64, out: &mut [i64]) {
        for &c in self.member(i) {
            out[self.config.columns()[c as usize].rank] += sign;
        }
    }

    /// Splits a fiber (members in increasing order) into components of the
    /// shared-column graph and returns one connecting move per extra component.
    fn connect(&self, fiber: &[usize], tie: TieBreak) -> Vec<Vec<i64>> {
        let mut uf = Components::new(fiber.len());
        let mut first_with: HashMap<u8, usize> = HashMap::new();
        for (i, &m) in fiber.iter().enumerate() {
            for &c in self.member(m) {
                match first_with.get(&c) {
                    Some(&j) => uf.union(i, j),
                    None => {
                        first_with.insert(c, i);
                    }
                }
            }
        }
        // Component roots are least members, so roots come in increasing order.
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..fiber.len() {
            let r = uf.find(i);
            comps.entry(r).or_default().push(fiber[i]);
        }
        if comps.len() < 2 {
            return Vec::new();
        }
        let mut chosen: Vec<usize> = match tie {
            TieBreak::Least => comps.values().map(|c| c[0]).collect(),
            TieBreak::Greatest => comps.values().map(|c| *c.last().unwrap()).collect(),
        };
        if tie == TieBreak::Greatest {
            chosen.sort_unstable_by(|a, b| b.cmp(a));
        }
        let e = self.config.ground().elementary_count();
        chosen[1..]
            .iter()
            .map(|&j| {
                let mut z = vec![0i64; e];
                self.coeffs(chosen[0], 1, &mut z);
                self.coeffs(j, -1, &mut z);
                z
            })
            .collect()
    }
}

fn enumerate_multisets(config: &Configuration, d: usize, weights: &[u64]) -> (Vec<u8>, Vec<(u64, u32)>) {
    let m = config.cols();
    let count = multiset_count(m, d) as usize;
    let mut members = Vec::with_capacity(count * d);
    let mut keys = Vec::with_capacity(count);
    let mut idx = vec![0usize; d];
    let mut i = 0u32;
    loop {
        let key = idx.iter().fold(0u64, |acc, &c| acc.wrapping_add(weights[c]));
        members.extend(idx.iter().map(|&c| c as u8));
        keys.push((key, i));
        i += 1;
        // next nondecreasing sequence
        let mut p = d;
        while p > 0 && idx[p - 1] == m - 1 {
            p -= 1;
        }
        if p == 0 {
            break;
        }
        let v = idx[p - 1] + 1;
        for x in &mut idx[p - 1..] {
            *x = v;
        }
    }
    (members, keys)
}

pub fn markov_basis(config: &Configuration, degree_cap: usize) -> Result<MarkovBasisReport> {
    markov_basis_with(config, &MarkovOptions::new(degree_cap))
}

pub fn markov_basis_with(config: &Configuration, opts: &MarkovOptions) -> Result<MarkovBasisReport> {
    if opts.degree_cap < 2 {
        return Err(ImsetError::Precondition("degree cap must be at least 2".into()));
    }
    let g = config.ground();
    let m = config.cols();
    if m > u8::MAX as usize + 1 {
        return Err(ImsetError::Budget("too many columns for fiber enumeration".into()));
    }
    for d in 2..=opts.degree_cap {
        let bytes = multiset_count(m, d) * (16 + d as u128);
        if bytes > opts.memory_budget as u128 || multiset_count(m, d) > u32::MAX as u128 {
            return Err(ImsetError::Budget(format!(
                "degree {d} needs about {} MiB of fiber storage",
                bytes >> 20
            )));
        }
    }
    let group = configuration_group(config)?;
    let row_weights: Vec<u64> = (0..config.rows()).map(|r| splitmix(r as u64 + 1)).collect();
    let weights: Vec<u64> = (0..m)
        .map(|j| {
            config.column_support(j).iter().fold(0u64, |acc, &(r, x)| {
                acc.wrapping_add(row_weights[r].wrapping_mul(x as u64))
            })
        })
        .collect();

    let mut per_degree_counts = BTreeMap::new();
    let mut per_degree_basis_size = BTreeMap::new();
    let mut representatives = Vec::new();
    for d in 2..=opts.degree_cap {
        let (members, mut keys) = enumerate_multisets(config, d, &weights);
        keys.par_sort_unstable();
        let data = DegreeData { config, d, members };
        let mut groups = Vec::new();
        let mut start = 0;
        for i in 1..=keys.len() {
            if i == keys.len() || keys[i].0 != keys[start].0 {
                if i - start > 1 {
                    groups.push(start..i);
                }
                start = i;
            }
        }
        let split: Vec<SplitFiber> = groups
            .into_par_iter()
            .flat_map_iter(|range| {
                let mut fibers: BTreeMap<Vec<i32>, Vec<usize>> = BTreeMap::new();
                for &(_, i) in &keys[range] {
                    fibers.entry(data.image(i as usize)).or_default().push(i as usize);
                }
                let mut out = Vec::new();
                for (image, mut fiber) in fibers {
                    if fiber.len() < 2 {
                        continue;
                    }
                    fiber.sort_unstable();
                    let moves = data.connect(&fiber, opts.tie_break);
                    if !moves.is_empty() {
                        out.push((fiber[0], SplitFiber { image, moves }));
                    }
                }
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<BTreeMap<usize, SplitFiber>>()
            .into_values()
            .collect();
        per_degree_basis_size.insert(d, split.iter().map(|f| f.moves.len()).sum());

        // One fiber per relabelling orbit, the first in canonical fiber order.
        let canon: Vec<Vec<i32>> = split
            .par_iter()
            .map(|f| {
                group
                    .iter()
                    .map(|p| {
                        let mut v = vec![0i32; f.image.len()];
                        for (r, &x) in f.image.iter().enumerate() {
                            v[p.subsets[r]] = x;
                        }
                        v
                    })
                    .min()
                    .unwrap_or_else(|| f.image.clone())
            })
            .collect();
        let mut seen = std::collections::HashSet::new();
        let mut local = Vec::new();
        for (f, c) in split.iter().zip(canon) {
            if seen.insert(c) {
                local.extend(f.moves.iter().map(|z| Move::from_kernel_vector(g, z.clone())));
            }
        }
        let reps = reduce_under(g, &group, &local);
        per_degree_counts.insert(d, reps.len());
        representatives.extend(reps);
    }
    let n = g.n();
    let complete = config.is_full()
        && (n <= 2 || (n == 3 && opts.degree_cap >= 2) || (n == 4 && opts.degree_cap >= 4));
    Ok(MarkovBasisReport {
        degree_cap: opts.degree_cap,
        per_degree_counts,
        per_degree_basis_size,
        representatives,
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(r: &MarkovBasisReport) -> Vec<(usize, usize)> {
        r.per_degree_counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&d, &c)| (d, c))
            .collect()
    }

    #[test]
    fn n3() {
        let g = GroundSet::new(3).unwrap();
        let r = markov_basis(&Configuration::full(&g).unwrap(), 3).unwrap();
        assert_eq!(counts(&r), vec![(2, 1)]);
        assert!(r.complete);
    }

    #[test]
    fn n4() {
        let g = GroundSet::new(4).unwrap();
        let config = Configuration::full(&g).unwrap();
        let r = markov_basis(&config, 4).unwrap();
        assert_eq!(counts(&r), vec![(2, 2), (3, 1), (4, 4)]);
        assert!(r.complete);
        let mut opts = MarkovOptions::new(4);
        opts.tie_break = TieBreak::Greatest;
        let rev = markov_basis_with(&config, &opts).unwrap();
        assert_eq!(rev.per_degree_counts, r.per_degree_counts);
        assert_eq!(rev.per_degree_basis_size, r.per_degree_basis_size);
    }

    #[test]
    fn mirrored_relation_pair_is_one_orbit() {
        let g = GroundSet::new(4).unwrap();
        let mv = |l: [&str; 2], r: [&str; 2]| {
            let t = |s: &str| g.parse_elementary(s).unwrap();
            Move::from_terms(&g, [(t(l[0]), 1), (t(l[1]), 1), (t(r[0]), -1), (t(r[1]), -1)]).unwrap()
        };
        let x = mv(["a|b|d", "a|c|bd"], ["a|c|d", "a|b|cd"]);
        let y = mv(["a|b|c", "b|d|ac"], ["b|d|c", "a|b|cd"]);
        assert_eq!(symmetry_reduce(&[x.clone(), y]).unwrap().len(), 1);
        assert_eq!(symmetry_reduce(&[x.clone()]).unwrap().len(), 1);
        let basic = crate::relations::basic_moves(&g).unwrap();
        assert_eq!(symmetry_reduce(&basic).unwrap().len(), 2);
    }

    #[test]
    fn subconfiguration_shapes() {
        let g = GroundSet::new(3).unwrap();
        let c = subconfiguration(&g, &g.parse_triplet("a|bc|0").unwrap()).unwrap();
        assert_eq!((c.rows(), c.cols()), (8, 4));
        let g4 = GroundSet::new(4).unwrap();
        let c = subconfiguration(&g4, &g4.parse_triplet("a|b|cd").unwrap()).unwrap();
        assert_eq!(c.cols(), 1);
        assert!(subconfiguration(&g4, &g4.parse_triplet("a|b|c").unwrap()).is_err());
    }

    #[test]
    fn multiset_enumeration_count() {
        let g = GroundSet::new(3).unwrap();
        let c = Configuration::full(&g).unwrap();
        let (members, keys) = enumerate_multisets(&c, 3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(keys.len() as u128, multiset_count(6, 3));
        assert_eq!(members.len(), keys.len() * 3);
    }
}
