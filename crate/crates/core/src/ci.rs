//! Conditional independence: multiinformation of discrete distributions,
//! semi-graphoid closure and the independence model of a structural imset.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{ImsetError, Result};
use crate::ground::{GroundSet, Subset, Triplet};
use crate::imset::{Configuration, Imset};
use crate::linalg::{rat, Rational, RationalMatrix};

pub const MAX_TABLE_VARIABLES: usize = 6;
pub const MAX_STATES: usize = 8;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
const SUM_TOLERANCE: f64 = 1e-12;

/// Dense joint probability table, row-major with the first variable slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    ground: GroundSet,
    cardinalities: Vec<usize>,
    probabilities: Vec<f64>,
}

impl JointTable {
    pub fn new(cardinalities: Vec<usize>, probabilities: Vec<f64>) -> Result<Self> {
        let n = cardinalities.len();
        if n == 0 || n > MAX_TABLE_VARIABLES {
            return Err(ImsetError::InvalidDistribution(format!(
                "need 1 to {MAX_TABLE_VARIABLES} variables, got {n}"
            )));
        }
        if let Some(&c) = cardinalities.iter().find(|&&c| c == 0 || c > MAX_STATES) {
            return Err(ImsetError::InvalidDistribution(format!(
                "state counts must lie in 1..={MAX_STATES}, got {c}"
            )));
        }
        let cells: usize = cardinalities.iter().product();
        if probabilities.len() != cells {
            return Err(ImsetError::InvalidDistribution(format!(
                "expected {cells} probabilities, got {}",
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(ImsetError::InvalidDistribution(format!("invalid probability {p}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(ImsetError::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(JointTable {
            ground: GroundSet::new(n)?,
            cardinalities,
            probabilities,
        })
    }

    /// Like [`JointTable::new`] but rescales nonnegative weights to sum to one.
    pub fn normalized(cardinalities: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(ImsetError::InvalidDistribution("weights must have a positive finite sum".into()));
        }
        let mut probabilities: Vec<f64> = weights.iter().map(|w| w / total).collect();
        // push the rounding residue onto the largest cell so the sum check passes
        let residue = 1.0 - probabilities.iter().sum::<f64>();
        if let Some(max) = probabilities
            .iter_mut()
            .max_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
        {
            *max += residue;
        }
        Self::new(cardinalities, probabilities)
    }

    /// `{"cardinalities": [...], "probabilities": [...]}`.
    pub fn from_json(value: &serde_json::Value, normalize: bool) -> Result<Self> {
        let bad = |why: &str| ImsetError::parse("joint table", &value.to_string(), why);
        let cards = value
            .get("cardinalities")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing \"cardinalities\" array"))?
            .iter()
            .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| bad("cardinality is not a nonnegative integer")))
            .collect::<Result<Vec<_>>>()?;
        let probs = value
            .get("probabilities")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("missing \"probabilities\" array"))?
            .iter()
            .map(|v| v.as_f64().ok_or_else(|| bad("probability is not a number")))
            .collect::<Result<Vec<_>>>()?;
        if normalize {
            Self::normalized(cards, probs)
        } else {
            Self::new(cards, probs)
        }
    }

    /// Rows `s_1,...,s_n,p` with 0-based states; a non-numeric first row is
    /// treated as a header. State counts are one more than the largest
    /// state seen; absent cells have probability zero.
    pub fn from_csv(text: &str, normalize: bool) -> Result<Self> {
        let mut rows: Vec<(Vec<usize>, f64)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() < 2 {
                return Err(ImsetError::parse("joint table row", line, "need states and a probability"));
            }
            let (states, p) = fields.split_at(fields.len() - 1);
            let parsed: std::result::Result<Vec<usize>, _> = states.iter().map(|s| s.parse::<usize>()).collect();
            let prob = p[0].parse::<f64>();
            match (parsed, prob) {
                (Ok(states), Ok(prob)) => rows.push((states, prob)),
                _ if lineno == 0 && rows.is_empty() => continue,
                _ => return Err(ImsetError::parse("joint table row", line, "expected integers and a number")),
            }
        }
        let n = rows.first().map(|r| r.0.len()).ok_or_else(|| ImsetError::parse("joint table", text, "no rows"))?;
        if rows.iter().any(|r| r.0.len() != n) {
            return Err(ImsetError::parse("joint table", text, "rows have different lengths"));
        }
        let cards: Vec<usize> = (0..n).map(|i| rows.iter().map(|r| r.0[i]).max().unwrap_or(0) + 1).collect();
        if n > MAX_TABLE_VARIABLES || cards.iter().any(|&c| c > MAX_STATES) {
            return Err(ImsetError::InvalidDistribution("table exceeds size limits".into()));
        }
        let cells: usize = cards.iter().product();
        let mut probs = vec![0.0; cells];
        for (states, p) in rows {
            let idx = states.iter().zip(&cards).fold(0, |acc, (s, c)| acc * c + s);
            probs[idx] += p;
        }
        if normalize {
            Self::normalized(cards, probs)
        } else {
            Self::new(cards, probs)
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Marginal table of the variables in `s`, row-major in label order.
    pub fn marginal(&self, s: Subset) -> Vec<f64> {
        let vars: Vec<usize> = s.elements().collect();
        let size: usize = vars.iter().map(|&v| self.cardinalities[v]).product();
        let mut out = vec![0.0; size];
        let n = self.cardinalities.len();
        let mut state = vec![0usize; n];
        for &p in &self.probabilities {
            if p > 0.0 {
                let idx = vars.iter().fold(0, |acc, &v| acc * self.cardinalities[v] + state[v]);
                out[idx] += p;
            }
            // odometer, last variable fastest
            for v in (0..n).rev() {
                state[v] += 1;
                if state[v] < self.cardinalities[v] {
                    break;
                }
                state[v] = 0;
            }
        }
        out
    }

    /// Shannon entropy (natural log) of the marginal on `s`.
    pub fn entropy(&self, s: Subset) -> f64 {
        self.marginal(s)
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.ln())
            .sum()
    }
}

/// A floating-point function on P(N), indexed by graded rank.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSetFunction {
    ground: GroundSet,
    values: Vec<f64>,
}

impl RealSetFunction {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, s: Subset) -> f64 {
        self.values[self.ground.rank(s)]
    }

    pub fn inner(&self, u: &Imset) -> f64 {
        self.values
            .iter()
            .zip(u.values())
            .filter(|(_, &k)| k != 0)
            .map(|(f, &k)| f * k as f64)
            .sum()
    }

    pub fn inner_triplet(&self, t: &Triplet) -> f64 {
        if t.is_trivial() {
            return 0.0;
        }
        self.get(t.union()) + self.get(t.c()) - self.get(t.a().union(t.c())) - self.get(t.b().union(t.c()))
    }

    pub fn is_supermodular(&self, tol: f64) -> bool {
        self.ground
            .elementaries()
            .iter()
            .all(|e| self.inner_triplet(&e.triplet()) >= -tol)
    }
}

/// m_P(S) = Σ_{i∈S} H(P^i) − H(P^S), the relative entropy of P^S with
/// respect to the product of its one-dimensional marginals.
pub fn multiinformation(p: &JointTable) -> Result<RealSetFunction> {
    let g = p.ground().clone();
    let singles: Vec<f64> = (0..g.n()).map(|i| p.entropy(Subset::singleton(i))).collect();
    let values: Vec<f64> = g
        .subsets()
        .par_iter()
        .map(|&s| {
            if s.len() <= 1 {
                0.0
            } else {
                s.elements().map(|i| singles[i]).sum::<f64>() - p.entropy(s)
            }
        })
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ImsetError::InvalidDistribution("multiinformation is not finite".into()));
    }
    Ok(RealSetFunction { ground: g, values })
}

/// |⟨m_P, u⟨t⟩⟩| < tol.
pub fn ci_holds(p: &JointTable, t: &Triplet, tol: f64) -> Result<bool> {
    Ok(multiinformation(p)?.inner_triplet(t).abs() < tol)
}

/// A set of nontrivial independence statements; trivial ones are implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiModel {
    ground: GroundSet,
    statements: BTreeSet<Triplet>,
}

impl CiModel {
    pub fn new(g: &GroundSet) -> Self {
        CiModel {
            ground: g.clone(),
            statements: BTreeSet::new(),
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn insert(&mut self, t: Triplet) -> bool {
        !t.is_trivial() && self.statements.insert(t)
    }

    pub fn contains(&self, t: &Triplet) -> bool {
        t.is_trivial() || self.statements.contains(t)
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triplet> {
        self.statements.iter()
    }

    /// Sorted triplet strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.statements.iter().map(|t| self.ground.format_triplet(t)).collect()
    }

    pub fn is_semigraphoid_closed(&self) -> bool {
        semigraphoid_closure(&self.ground, self.statements.iter().copied()) == *self
    }
}

/// Least set containing `statements` closed under symmetry, decomposition,
/// weak union and contraction.
pub fn semigraphoid_closure(g: &GroundSet, statements: impl IntoIterator<Item = Triplet>) -> CiModel {
    // oriented statements (A, B, C); both orientations are kept
    let mut known: HashSet<(Subset, Subset, Subset)> = HashSet::new();
    // (A, C) -> all B with ⟨A|B|C⟩ known
    let mut by_ac: HashMap<(Subset, Subset), Vec<Subset>> = HashMap::new();
    let mut queue: Vec<(Subset, Subset, Subset)> = Vec::new();

    let push = |a: Subset,
                b: Subset,
                c: Subset,
                known: &mut HashSet<(Subset, Subset, Subset)>,
                by_ac: &mut HashMap<(Subset, Subset), Vec<Subset>>,
                queue: &mut Vec<(Subset, Subset, Subset)>| {
        if a.is_empty() || b.is_empty() {
            return;
        }
        for (x, y) in [(a, b), (b, a)] {
            if known.insert((x, y, c)) {
                by_ac.entry((x, c)).or_default().push(y);
                queue.push((x, y, c));
            }
        }
    };

    for t in statements {
        push(t.a(), t.b(), t.c(), &mut known, &mut by_ac, &mut queue);
    }

    while let Some((a, b, c)) = queue.pop() {
        // decomposition and weak union: ⟨A|B'D|C⟩ ⇒ ⟨A|B'|C⟩, ⟨A|B'|DC⟩
        for b1 in b.subsets() {
            if b1.is_empty() || b1 == b {
                continue;
            }
            let d = b.difference(b1);
            push(a, b1, c, &mut known, &mut by_ac, &mut queue);
            push(a, b1, c.union(d), &mut known, &mut by_ac, &mut queue);
        }
        // contraction with this statement as ⟨A|B|DC'⟩ and ⟨A|D|C'⟩ known
        for d in c.subsets() {
            if d.is_empty() {
                continue;
            }
            let c0 = c.difference(d);
            if known.contains(&(a, d, c0)) {
                push(a, b.union(d), c0, &mut known, &mut by_ac, &mut queue);
            }
        }
        // contraction with this statement as ⟨A|D|C⟩ and ⟨A|B''|DC⟩ known
        if let Some(others) = by_ac.get(&(a, c.union(b))).cloned() {
            for b2 in others {
                push(a, b2.union(b), c, &mut known, &mut by_ac, &mut queue);
            }
        }
    }

    let mut model = CiModel::new(g);
    for (a, b, c) in known {
        model.insert(Triplet::new(a, b, c).expect("closure keeps disjointness"));
    }
    model
}

/// Every nontrivial triplet t with |⟨m_P, u⟨t⟩⟩| < tol.
pub fn ci_model_of_p(p: &JointTable, tol: f64) -> Result<CiModel> {
    let m = multiinformation(p)?;
    let g = p.ground();
    let mut model = CiModel::new(g);
    for t in g.triplets(false) {
        if m.inner_triplet(&t).abs() < tol {
            model.insert(t);
        }
    }
    Ok(model)
}

fn imset_column(u: &Imset) -> Vec<Rational> {
    u.values().iter().map(|&x| rat(x)).collect()
}

/// Whether `u` lies in the cone generated by the elementary imsets.
pub fn is_structural(u: &Imset) -> Result<bool> {
    let g = u.ground();
    if g.n() < 2 {
        return Ok(u.is_zero());
    }
    let config = Configuration::full(g)?;
    let a = RationalMatrix::from_i64_rows(&config.dense())?;
    Ok(a.lp_feasible(&imset_column(u))?.is_feasible())
}

/// Columns [u | −A]: `v` is feasible right-hand side iff μu − v lies in
/// the elementary cone for some μ >= 0.
pub(crate) fn face_matrix(u: &Imset) -> Result<RationalMatrix> {
    let config = Configuration::full(u.ground())?;
    let rows: Vec<Vec<Rational>> = config
        .dense()
        .iter()
        .zip(u.values())
        .map(|(row, &uv)| std::iter::once(rat(uv)).chain(row.iter().map(|&x| rat(-x))).collect())
        .collect();
    RationalMatrix::from_rows(rows)
}

/// t belongs to the model of `u` iff μu − u⟨t⟩ lies in the elementary cone
/// for some rational μ >= 0.
pub fn ci_model_of_imset(u: &Imset) -> Result<CiModel> {
    if !is_structural(u)? {
        return Err(ImsetError::NotStructural);
    }
    let g = u.ground();
    let a = face_matrix(u)?;
    let triplets = g.triplets(false);
    let verdicts: Vec<bool> = triplets
        .par_iter()
        .map(|t| {
            let b = imset_column(&Imset::semi_elementary(g, t));
            a.lp_feasible(&b).map(|r| r.is_feasible())
        })
        .collect::<Result<_>>()?;
    let mut model = CiModel::new(g);
    for (t, ok) in triplets.into_iter().zip(verdicts) {
        if ok {
            model.insert(t);
        }
    }
    Ok(model)
}

/// Checks of the six-term identity among elementary imsets at a fixed a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeByThreeReport {
    /// u⟨a|b|c⟩+u⟨a|c|d⟩+u⟨a|d|b⟩ = u⟨a|c|b⟩+u⟨a|d|c⟩+u⟨a|b|d⟩.
    pub identity_holds: bool,
    /// Both chain expansions sum to 3·u⟨a|bcd|∅⟩.
    pub first_expansion_holds: bool,
    pub second_expansion_holds: bool,
    /// The difference of the two expansions is the difference of the two
    /// sides of the identity.
    pub expansions_give_identity: bool,
    /// The difference, as a vector over E(N), is in the configuration kernel.
    pub difference_in_kernel: bool,
    /// The left side admits no semi-graphoid inference.
    pub left_side_closed: bool,
}

impl ThreeByThreeReport {
    pub fn passed(&self) -> bool {
        self.identity_holds
            && self.first_expansion_holds
            && self.second_expansion_holds
            && self.expansions_give_identity
            && self.difference_in_kernel
            && self.left_side_closed
    }
}

pub fn equivalence_3x3_check(g: &GroundSet) -> Result<ThreeByThreeReport> {
    if g.n() < 4 {
        return Err(ImsetError::Precondition("the six-term identity needs four variables".into()));
    }
    let (a, b, c, d) = (0usize, 1usize, 2usize, 3usize);
    let el = |x: usize, y: usize, cond: &[usize]| -> Imset {
        let t = Triplet::new(Subset::singleton(x), Subset::singleton(y), Subset::from_elements(cond.iter().copied()))
            .expect("disjoint");
        Imset::semi_elementary(g, &t)
    };
    let sum = |terms: &[Imset]| -> Imset { terms.iter().fold(Imset::zero(g), |acc, t| &acc + t) };

    let lhs = sum(&[el(a, b, &[c]), el(a, c, &[d]), el(a, d, &[b])]);
    let rhs = sum(&[el(a, c, &[b]), el(a, d, &[c]), el(a, b, &[d])]);

    // u⟨a|x|∅⟩ + u⟨a|y|x⟩ + u⟨a|z|xy⟩ = u⟨a|xyz|∅⟩
    let chain = |x: usize, y: usize, z: usize| sum(&[el(a, x, &[]), el(a, y, &[x]), el(a, z, &[x, y])]);
    let whole = Imset::semi_elementary(
        g,
        &Triplet::new(Subset::singleton(a), Subset::from_elements([b, c, d]), Subset::EMPTY)?,
    );
    let three = 3 * &whole;
    let first_terms = [chain(b, c, d), chain(c, d, b), chain(d, b, c)];
    let second_terms = [chain(b, d, c), chain(c, b, d), chain(d, c, b)];
    let first = sum(&first_terms);
    let second = sum(&second_terms);
    let chains_ok = first_terms.iter().chain(&second_terms).all(|t| *t == whole);

    let config = Configuration::full(g)?;
    let mut z = vec![0i64; config.cols()];
    for (x, y, cond, sign) in [
        (a, b, vec![c], 1),
        (a, c, vec![d], 1),
        (a, d, vec![b], 1),
        (a, c, vec![b], -1),
        (a, d, vec![c], -1),
        (a, b, vec![d], -1),
    ] {
        let r = g
            .elementary_rank(x, y, Subset::from_elements(cond))
            .expect("elementary triplet");
        z[r] += sign;
    }
    let difference_in_kernel = config.apply(&z)?.is_zero();

    let left = [
        Triplet::new(Subset::singleton(a), Subset::singleton(b), Subset::singleton(c))?,
        Triplet::new(Subset::singleton(a), Subset::singleton(c), Subset::singleton(d))?,
        Triplet::new(Subset::singleton(a), Subset::singleton(d), Subset::singleton(b))?,
    ];
    let closure = semigraphoid_closure(g, left);

    Ok(ThreeByThreeReport {
        identity_holds: lhs == rhs,
        first_expansion_holds: chains_ok && first == three,
        second_expansion_holds: chains_ok && second == three,
        expansions_give_identity: &first - &second == &lhs - &rhs,
        difference_in_kernel,
        left_side_closed: closure.len() == 3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(g: &GroundSet, s: &str) -> Triplet {
        g.parse_triplet(s).unwrap()
    }

    fn markov_chain() -> JointTable {
        // a -> c -> b, variables ordered a, b, c
        let pa = [0.3, 0.7];
        let pc_a = [[0.9, 0.1], [0.2, 0.8]];
        let pb_c = [[0.6, 0.4], [0.15, 0.85]];
        let mut probs = vec![0.0; 8];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    probs[a * 4 + b * 2 + c] = pa[a] * pc_a[a][c] * pb_c[c][b];
                }
            }
        }
        JointTable::normalized(vec![2, 2, 2], probs).unwrap()
    }

    #[test]
    fn product_distribution_has_zero_multiinformation() {
        let pa = [0.25, 0.75];
        let pb = [0.5, 0.2, 0.3];
        let probs: Vec<f64> = pa.iter().flat_map(|x| pb.iter().map(move |y| x * y)).collect();
        let p = JointTable::normalized(vec![2, 3], probs).unwrap();
        let m = multiinformation(&p).unwrap();
        assert!(m.values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn perfect_correlation() {
        let p = JointTable::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let m = multiinformation(&p).unwrap();
        let g = p.ground();
        assert!((m.get(g.full()) - 2f64.ln()).abs() < 1e-12);
        assert!(!ci_holds(&p, &t(g, "a|b|0"), DEFAULT_TOLERANCE).unwrap());
    }

    #[test]
    fn markov_chain_model() {
        let p = markov_chain();
        let g = p.ground().clone();
        assert!(ci_holds(&p, &t(&g, "a|b|c"), DEFAULT_TOLERANCE).unwrap());
        let model = ci_model_of_p(&p, DEFAULT_TOLERANCE).unwrap();
        let closure = semigraphoid_closure(&g, [t(&g, "a|b|c")]);
        assert_eq!(model, closure);
        assert!(model.is_semigraphoid_closed());
    }

    #[test]
    fn table_validation() {
        assert!(JointTable::new(vec![2], vec![0.5, 0.6]).is_err());
        assert!(JointTable::new(vec![2], vec![-0.5, 1.5]).is_err());
        assert!(JointTable::new(vec![9], vec![1.0 / 9.0; 9]).is_err());
        let p = JointTable::from_csv("a,b,p\n0,0,0.5\n1,1,0.5\n", false).unwrap();
        assert_eq!(p.cardinalities(), &[2, 2]);
        let j = serde_json::json!({"cardinalities": [2], "probabilities": [1, 3]});
        assert!(JointTable::from_json(&j, false).is_err());
        assert!(JointTable::from_json(&j, true).is_ok());
    }

    #[test]
    fn closure_examples() {
        let g = GroundSet::new(3).unwrap();
        let c = semigraphoid_closure(&g, [t(&g, "a|bc|0")]);
        assert_eq!(c.to_strings(), ["a|b|0", "a|c|0", "a|bc|0", "a|c|b", "a|b|c"]);
        assert!(semigraphoid_closure(&g, []).is_empty());
        let g4 = GroundSet::new(4).unwrap();
        let left = [t(&g4, "a|b|c"), t(&g4, "a|c|d"), t(&g4, "a|d|b")];
        assert_eq!(semigraphoid_closure(&g4, left).len(), 3);
    }

    #[test]
    fn contraction_fires() {
        let g = GroundSet::new(3).unwrap();
        let c = semigraphoid_closure(&g, [t(&g, "a|b|c"), t(&g, "a|c|0")]);
        assert!(c.contains(&t(&g, "a|bc|0")));
    }

    #[test]
    fn model_of_elementary_imset() {
        let g = GroundSet::new(3).unwrap();
        let e = t(&g, "a|b|c");
        let u = Imset::semi_elementary(&g, &e);
        let model = ci_model_of_imset(&u).unwrap();
        assert_eq!(model.to_strings(), ["a|b|c"]);
        assert_eq!(ci_model_of_imset(&Imset::delta(&g, Subset::EMPTY)), Err(ImsetError::NotStructural));
    }

    #[test]
    fn three_by_three() {
        let g = GroundSet::new(4).unwrap();
        assert!(equivalence_3x3_check(&g).unwrap().passed());
    }
}
