//! Integer-valued functions on P(N) and the configuration of elementary imsets.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{ImsetError, Result};
use crate::ground::{ElementaryIndex, GroundSet, Subset, Triplet};

/// An integer-valued function on P(N), indexed by graded rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Imset {
    ground: GroundSet,
    values: Vec<i64>,
}

impl Imset {
    pub fn zero(g: &GroundSet) -> Self {
        Imset {
            ground: g.clone(),
            values: vec![0; g.size()],
        }
    }

    /// Values listed in graded order.
    pub fn from_values(g: &GroundSet, values: Vec<i64>) -> Result<Self> {
        if values.len() != g.size() {
            return Err(ImsetError::Dimension {
                expected: g.size(),
                got: values.len(),
            });
        }
        Ok(Imset {
            ground: g.clone(),
            values,
        })
    }

    pub fn delta(g: &GroundSet, s: Subset) -> Self {
        let mut u = Imset::zero(g);
        u.values[g.rank(s)] = 1;
        u
    }

    /// u⟨A|B|C⟩ = δ_ABC + δ_C − δ_AC − δ_BC, zero when A or B is empty.
    pub fn semi_elementary(g: &GroundSet, t: &Triplet) -> Self {
        let mut u = Imset::zero(g);
        if t.is_trivial() {
            return u;
        }
        u.values[g.rank(t.union())] += 1;
        u.values[g.rank(t.c())] += 1;
        u.values[g.rank(t.a().union(t.c()))] -= 1;
        u.values[g.rank(t.b().union(t.c()))] -= 1;
        u
    }

    pub fn elementary(g: &GroundSet, e: &ElementaryIndex) -> Self {
        Self::semi_elementary(g, &e.triplet())
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, s: Subset) -> i64 {
        self.values[self.ground.rank(s)]
    }

    pub fn set(&mut self, s: Subset, v: i64) {
        let r = self.ground.rank(s);
        self.values[r] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Nonzero entries in graded order.
    pub fn support(&self) -> impl Iterator<Item = (Subset, i64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(r, &v)| (self.ground.subset_at(r), v))
    }

    fn same_ground(&self, other: &Imset) -> Result<()> {
        if self.ground != other.ground {
            return Err(ImsetError::GroundSetMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Imset) -> Result<Imset> {
        self.same_ground(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x.checked_add(*y).ok_or(ImsetError::Overflow))
            .collect::<Result<_>>()?;
        Ok(Imset {
            ground: self.ground.clone(),
            values,
        })
    }

    pub fn checked_sub(&self, other: &Imset) -> Result<Imset> {
        self.checked_add(&other.checked_scale(-1)?)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Imset> {
        let values = self
            .values
            .iter()
            .map(|x| x.checked_mul(k).ok_or(ImsetError::Overflow))
            .collect::<Result<_>>()?;
        Ok(Imset {
            ground: self.ground.clone(),
            values,
        })
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &Imset, k: i64) -> Result<()> {
        self.same_ground(other)?;
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x = y
                .checked_mul(k)
                .and_then(|p| x.checked_add(p))
                .ok_or(ImsetError::Overflow)?;
        }
        Ok(())
    }

    /// `self += k * u⟨e⟩` touching only the four nonzero entries.
    pub fn add_elementary(&mut self, e: &ElementaryIndex, k: i64) -> Result<()> {
        let g = &self.ground;
        let slots = [
            (g.rank(e.top()), k),
            (g.rank(e.cond), k),
            (g.rank(e.cond.with(e.a)), -k),
            (g.rank(e.cond.with(e.b)), -k),
        ];
        for (r, d) in slots {
            self.values[r] = self.values[r].checked_add(d).ok_or(ImsetError::Overflow)?;
        }
        Ok(())
    }

    /// Integer inner product with another integer function on P(N).
    pub fn dot(&self, other: &[i64]) -> i128 {
        self.values
            .iter()
            .zip(other)
            .map(|(&x, &y)| x as i128 * y as i128)
            .sum()
    }

    /// Membership in L*(N), the integer lattice generated by E(N): the total
    /// sum and every per-element sum over supersets of {e} vanish.
    pub fn is_member_l_star(&self) -> bool {
        let g = &self.ground;
        let mut total: i128 = 0;
        let mut per = vec![0i128; g.n()];
        for (r, &v) in self.values.iter().enumerate() {
            if v == 0 {
                continue;
            }
            total += v as i128;
            for e in g.subset_at(r).elements() {
                per[e] += v as i128;
            }
        }
        total == 0 && per.iter().all(|&x| x == 0)
    }

    /// Degree ⟨f*, u⟩ with f*(S) = |S|(|S|−1)/2; equals the number of
    /// elementary imsets in any decomposition into elementary ones.
    pub fn degree(&self) -> i64 {
        self.values
            .iter()
            .enumerate()
            .map(|(r, &v)| {
                let k = self.ground.subset_at(r).len() as i64;
                v * k * (k - 1) / 2
            })
            .sum()
    }

    /// JSON map {subset: value}, zeros omitted.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .support()
            .map(|(s, v)| (self.ground.format_subset(s), serde_json::Value::from(v)))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(g: &GroundSet, value: &serde_json::Value) -> Result<Imset> {
        let obj = value
            .as_object()
            .ok_or_else(|| ImsetError::parse("imset", &value.to_string(), "expected a JSON object"))?;
        let mut u = Imset::zero(g);
        for (k, v) in obj {
            let s = g.parse_subset(k)?;
            let x = v
                .as_i64()
                .ok_or_else(|| ImsetError::parse("imset", &v.to_string(), "expected an integer"))?;
            let r = g.rank(s);
            u.values[r] = u.values[r].checked_add(x).ok_or(ImsetError::Overflow)?;
        }
        Ok(u)
    }

    /// Human readable form such as `δ_abcd - δ_bcd - δ_acd + δ_cd`, largest
    /// sets first.
    pub fn to_delta_notation(&self) -> String {
        let mut out = String::new();
        for r in (0..self.values.len()).rev() {
            let v = self.values[r];
            if v == 0 {
                continue;
            }
            let name = self.ground.format_subset(self.ground.subset_at(r));
            let mag = v.unsigned_abs();
            let coeff = if mag == 1 { String::new() } else { format!("{mag}") };
            if out.is_empty() {
                if v < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if v < 0 { " - " } else { " + " });
            }
            out.push_str(&format!("{coeff}δ_{name}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for Imset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Imset({})", self.to_delta_notation())
    }
}

impl fmt::Display for Imset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_delta_notation())
    }
}

impl std::ops::Add for &Imset {
    type Output = Imset;

    fn add(self, rhs: &Imset) -> Imset {
        self.checked_add(rhs).expect("imset addition")
    }
}

impl std::ops::Sub for &Imset {
    type Output = Imset;

    fn sub(self, rhs: &Imset) -> Imset {
        self.checked_sub(rhs).expect("imset subtraction")
    }
}

impl std::ops::Neg for &Imset {
    type Output = Imset;

    fn neg(self) -> Imset {
        self.checked_scale(-1).expect("imset negation")
    }
}

impl std::ops::Mul<&Imset> for i64 {
    type Output = Imset;

    fn mul(self, rhs: &Imset) -> Imset {
        rhs.checked_scale(self).expect("imset scaling")
    }
}

/// Canonical decomposition of u⟨A|B|C⟩ into elementary imsets: split the
/// largest label off B until B is a singleton, then off A the same way.
pub fn decompose_semi_elementary(
    g: &GroundSet,
    t: &Triplet,
) -> Result<Vec<(ElementaryIndex, u64)>> {
    if t.is_trivial() {
        return Err(ImsetError::Precondition(
            "decomposition needs nonempty A and B".into(),
        ));
    }
    fn split(g: &GroundSet, a: Subset, b: Subset, c: Subset, out: &mut BTreeMap<usize, u64>) {
        if b.len() > 1 {
            let top = b.max_element().unwrap();
            let rest = b.without(top);
            split(g, a, rest, c, out);
            split(g, a, Subset::singleton(top), rest.union(c), out);
        } else if a.len() > 1 {
            let top = a.max_element().unwrap();
            let rest = a.without(top);
            split(g, rest, b, c, out);
            split(g, Subset::singleton(top), b, rest.union(c), out);
        } else {
            let r = g
                .elementary_rank(a.min_element().unwrap(), b.min_element().unwrap(), c)
                .expect("disjoint singletons");
            *out.entry(r).or_default() += 1;
        }
    }
    let mut acc = BTreeMap::new();
    split(g, t.a(), t.b(), t.c(), &mut acc);
    Ok(acc
        .into_iter()
        .map(|(r, k)| (*g.elementary(r), k))
        .collect())
}

/// Axis orientation for configuration export.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Rows and columns ascending.
    #[default]
    Ascending,
    /// Both axes descending, the layout of the printed table.
    Descending,
}

/// The matrix whose columns are the elementary imsets, possibly restricted
/// to a subset of E(N).
#[derive(Clone, Debug)]
pub struct Configuration {
    ground: GroundSet,
    columns: Vec<ElementaryIndex>,
}

impl Configuration {
    pub fn full(g: &GroundSet) -> Result<Self> {
        if g.n() < 2 {
            return Err(ImsetError::Precondition(
                "configuration needs at least two variables".into(),
            ));
        }
        Ok(Configuration {
            ground: g.clone(),
            columns: g.elementaries().to_vec(),
        })
    }

    /// Restriction to the given elementary triplets, kept in ascending order.
    pub fn with_columns(g: &GroundSet, mut columns: Vec<ElementaryIndex>) -> Self {
        columns.sort();
        columns.dedup();
        Configuration {
            ground: g.clone(),
            columns,
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn columns(&self) -> &[ElementaryIndex] {
        &self.columns
    }

    pub fn rows(&self) -> usize {
        self.ground.size()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn is_full(&self) -> bool {
        self.columns.len() == self.ground.elementary_count()
    }

    pub fn column_imset(&self, j: usize) -> Imset {
        Imset::elementary(&self.ground, &self.columns[j])
    }

    /// The four nonzero rows of column `j` as (rank, value).
    pub fn column_support(&self, j: usize) -> [(usize, i64); 4] {
        let g = &self.ground;
        let e = &self.columns[j];
        [
            (g.rank(e.cond), 1),
            (g.rank(e.cond.with(e.a)), -1),
            (g.rank(e.cond.with(e.b)), -1),
            (g.rank(e.top()), 1),
        ]
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.column_support(col)
            .iter()
            .find(|(r, _)| *r == row)
            .map_or(0, |(_, v)| *v)
    }

    /// Dense row-major matrix.
    pub fn dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols()]; self.rows()];
        for j in 0..self.cols() {
            for (r, v) in self.column_support(j) {
                m[r][j] = v;
            }
        }
        m
    }

    /// A·x for an integer weight per column.
    pub fn apply(&self, x: &[i64]) -> Result<Imset> {
        if x.len() != self.cols() {
            return Err(ImsetError::Dimension {
                expected: self.cols(),
                got: x.len(),
            });
        }
        let mut u = Imset::zero(&self.ground);
        for (j, &k) in x.iter().enumerate() {
            if k != 0 {
                u.add_elementary(&self.columns[j], k)?;
            }
        }
        Ok(u)
    }

    pub fn column_position(&self, e: &ElementaryIndex) -> Option<usize> {
        self.columns.binary_search(e).ok()
    }

    pub fn to_csv(&self, orientation: Orientation) -> String {
        let g = &self.ground;
        let mut rows: Vec<usize> = (0..self.rows()).collect();
        let mut cols: Vec<usize> = (0..self.cols()).collect();
        if orientation == Orientation::Descending {
            rows.reverse();
            cols.reverse();
        }
        let dense = self.dense();
        let mut out = String::new();
        for &j in &cols {
            out.push(',');
            out.push_str(&g.format_elementary(&self.columns[j]));
        }
        out.push('\n');
        for &r in &rows {
            out.push_str(&g.format_subset(g.subset_at(r)));
            for &j in &cols {
                out.push(',');
                out.push_str(&dense[r][j].to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g4() -> GroundSet {
        GroundSet::new(4).unwrap()
    }

    #[test]
    fn delta_positions() {
        let g = g4();
        assert_eq!(Imset::delta(&g, Subset::EMPTY).values()[0], 1);
        assert_eq!(Imset::delta(&g, g.full()).values()[15], 1);
        let ab = g.parse_subset("ab").unwrap();
        assert_eq!(Imset::delta(&g, ab).values()[5], 1);
    }

    #[test]
    fn semi_elementary_shapes() {
        let g2 = GroundSet::new(2).unwrap();
        let u = Imset::semi_elementary(&g2, &g2.parse_triplet("a|b|0").unwrap());
        assert_eq!(u.values(), &[1, -1, -1, 1]);
        let g = g4();
        let t = Triplet::new(Subset::EMPTY, Subset::singleton(1), Subset::singleton(2)).unwrap();
        assert!(Imset::semi_elementary(&g, &t).is_zero());
        let u = Imset::semi_elementary(&g, &g.parse_triplet("a|b|cd").unwrap());
        assert_eq!(u.to_delta_notation(), "δ_abcd - δ_bcd - δ_acd + δ_cd");
    }

    #[test]
    fn decomposition_examples() {
        let g = g4();
        let dec = decompose_semi_elementary(&g, &g.parse_triplet("a|bc|0").unwrap()).unwrap();
        let names: Vec<_> = dec.iter().map(|(e, k)| (g.format_elementary(e), *k)).collect();
        assert_eq!(names, [("a|b|0".to_string(), 1), ("a|c|b".to_string(), 1)]);

        let t = g.parse_triplet("ab|cd|0").unwrap();
        let dec = decompose_semi_elementary(&g, &t).unwrap();
        assert_eq!(dec.iter().map(|(_, k)| k).sum::<u64>(), 4);
        let mut sum = Imset::zero(&g);
        for (e, k) in &dec {
            sum.add_elementary(e, *k as i64).unwrap();
        }
        assert_eq!(sum, Imset::semi_elementary(&g, &t));
    }

    #[test]
    fn lattice_membership() {
        let g = g4();
        for e in g.elementaries() {
            assert!(Imset::elementary(&g, e).is_member_l_star());
        }
        assert!(!Imset::delta(&g, Subset::EMPTY).is_member_l_star());
    }

    #[test]
    fn degree_counts_elementary_terms() {
        let g = g4();
        let t = g.parse_triplet("ab|cd|0").unwrap();
        assert_eq!(Imset::semi_elementary(&g, &t).degree(), 4);
    }

    #[test]
    fn json_round_trip() {
        let g = g4();
        let u = Imset::semi_elementary(&g, &g.parse_triplet("a|bc|d").unwrap());
        let back = Imset::from_json(&g, &u.to_json()).unwrap();
        assert_eq!(u, back);
    }

    #[test]
    fn configuration_n2() {
        let g = GroundSet::new(2).unwrap();
        let c = Configuration::full(&g).unwrap();
        assert_eq!(c.dense(), vec![vec![1], vec![-1], vec![-1], vec![1]]);
        assert!(Configuration::full(&GroundSet::new(1).unwrap()).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let g = GroundSet::new(2).unwrap();
        let u = Imset::from_values(&g, vec![i64::MAX, 0, 0, 0]).unwrap();
        assert_eq!(u.checked_add(&u), Err(ImsetError::Overflow));
    }
}
