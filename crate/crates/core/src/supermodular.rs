//! Rational set functions on P(N), supermodularity, standardization and the
//! skeletal (extreme ray) test, with constructors for known skeletal families.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{ImsetError, Result};
use crate::ground::{ElementaryIndex, GroundSet, Subset};
use crate::imset::Imset;
use crate::linalg::{integer_rank, rat, Rational, RationalMatrix};

/// An exact-rational function on P(N), indexed by graded rank.
#[derive(Clone, PartialEq, Eq)]
pub struct SetFunction {
    ground: GroundSet,
    values: Vec<Rational>,
}

impl SetFunction {
    pub fn zero(g: &GroundSet) -> Self {
        SetFunction {
            ground: g.clone(),
            values: vec![Rational::zero(); g.size()],
        }
    }

    pub fn from_values(g: &GroundSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != g.size() {
            return Err(ImsetError::Dimension {
                expected: g.size(),
                got: values.len(),
            });
        }
        Ok(SetFunction {
            ground: g.clone(),
            values,
        })
    }

    pub fn from_fn(g: &GroundSet, f: impl Fn(Subset) -> Rational) -> Self {
        SetFunction {
            ground: g.clone(),
            values: g.subsets().iter().map(|&s| f(s)).collect(),
        }
    }

    pub fn from_i64_fn(g: &GroundSet, f: impl Fn(Subset) -> i64) -> Self {
        Self::from_fn(g, |s| rat(f(s)))
    }

    /// 1 on supersets of `a`, the function 1_{A⊆•}.
    pub fn indicator_up(g: &GroundSet, a: Subset) -> Self {
        Self::from_i64_fn(g, |s| a.is_subset_of(s) as i64)
    }

    /// 1 on subsets of `a`, the function 1_{A⊇•}.
    pub fn indicator_down(g: &GroundSet, a: Subset) -> Self {
        Self::from_i64_fn(g, |s| s.is_subset_of(a) as i64)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, s: Subset) -> &Rational {
        &self.values[self.ground.rank(s)]
    }

    pub fn set(&mut self, s: Subset, v: Rational) {
        let r = self.ground.rank(s);
        self.values[r] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> SetFunction {
        SetFunction {
            ground: self.ground.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn checked_add(&self, other: &SetFunction) -> Result<SetFunction> {
        if self.ground != other.ground {
            return Err(ImsetError::GroundSetMismatch);
        }
        Ok(SetFunction {
            ground: self.ground.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x + y)
                .collect(),
        })
    }

    /// Σ_S f(S) u(S).
    pub fn inner(&self, u: &Imset) -> Result<Rational> {
        if self.ground != *u.ground() {
            return Err(ImsetError::GroundSetMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(u.values())
            .filter(|(_, &k)| k != 0)
            .map(|(f, &k)| f * rat(k))
            .sum())
    }

    /// ⟨f, u⟨a|b|C⟩⟩ = f(abC) + f(C) − f(aC) − f(bC).
    pub fn inner_elementary(&self, e: &ElementaryIndex) -> Rational {
        self.get(e.top()) + self.get(e.cond) - self.get(e.cond.with(e.a)) - self.get(e.cond.with(e.b))
    }

    /// f(S) = 0 whenever |S| <= 1.
    pub fn is_standardized(&self) -> bool {
        self.ground
            .subsets()
            .iter()
            .take_while(|s| s.len() <= 1)
            .all(|&s| self.get(s).is_zero())
    }

    /// S ↦ f(N∖S).
    pub fn reflect(&self) -> SetFunction {
        let g = &self.ground;
        SetFunction::from_fn(g, |s| self.get(g.complement(s)).clone())
    }

    /// Non-decreasing along inclusion.
    pub fn is_monotone(&self) -> bool {
        let g = &self.ground;
        g.subsets().iter().all(|&s| {
            (0..g.n())
                .filter(|&i| !s.contains(i))
                .all(|i| self.get(s.with(i)) >= self.get(s))
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .ground
            .subsets()
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(&s, v)| (self.ground.format_subset(s), serde_json::Value::from(v.to_string())))
            .collect();
        serde_json::Value::Object(map)
    }

    /// Accepts values as "p/q" strings or JSON integers; missing sets are 0.
    pub fn from_json(g: &GroundSet, value: &serde_json::Value) -> Result<SetFunction> {
        let obj = value.as_object().ok_or_else(|| {
            ImsetError::parse("set function", &value.to_string(), "expected a JSON object")
        })?;
        let mut f = SetFunction::zero(g);
        for (k, v) in obj {
            let s = g.parse_subset(k)?;
            f.set(s, parse_rational_json(v)?);
        }
        Ok(f)
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p
        .parse()
        .map_err(|_| ImsetError::parse("rational", text, "bad numerator"))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| ImsetError::parse("rational", text, "bad denominator"))?;
    if q.is_zero() {
        return Err(ImsetError::parse("rational", text, "zero denominator"));
    }
    Ok(Rational::new(p, q))
}

fn parse_rational_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(rat(i)),
            None => Err(ImsetError::parse("rational", &n.to_string(), "expected an integer or \"p/q\"")),
        },
        other => Err(ImsetError::parse("rational", &other.to_string(), "expected an integer or \"p/q\"")),
    }
}

impl fmt::Debug for SetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFunction({})", self.to_json())
    }
}

/// The first elementary triplet (in elementary order) with a negative inner
/// product, if any.
pub fn supermodularity_violation(f: &SetFunction) -> Option<ElementaryIndex> {
    f.ground()
        .elementaries()
        .par_iter()
        .find_first(|e| f.inner_elementary(e).is_negative())
        .copied()
}

pub fn is_supermodular(f: &SetFunction) -> bool {
    supermodularity_violation(f).is_none()
}

/// Both `f` and `−f` supermodular.
pub fn is_modular(f: &SetFunction) -> bool {
    f.ground()
        .elementaries()
        .par_iter()
        .all(|e| f.inner_elementary(e).is_zero())
}

/// Coefficients of f(E) = λ_∅ + Σ_{e∈E} λ_e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularCoefficients {
    pub empty: Rational,
    pub per_element: Vec<Rational>,
}

pub fn modular_coefficients(f: &SetFunction) -> Result<ModularCoefficients> {
    if !is_modular(f) {
        return Err(ImsetError::NotModular);
    }
    let empty = f.get(Subset::EMPTY).clone();
    let per_element = (0..f.ground().n())
        .map(|i| f.get(Subset::singleton(i)) - &empty)
        .collect();
    Ok(ModularCoefficients { empty, per_element })
}

/// f̄ = f − f_L where f_L is the modular function agreeing with f on sets of
/// size at most one.
pub fn standardize(f: &SetFunction) -> SetFunction {
    let g = f.ground();
    let empty = f.get(Subset::EMPTY).clone();
    let lambda: Vec<Rational> = (0..g.n())
        .map(|i| f.get(Subset::singleton(i)) - &empty)
        .collect();
    SetFunction::from_fn(g, |s| {
        let modular: Rational = s.elements().map(|i| lambda[i].clone()).sum::<Rational>() + &empty;
        f.get(s) - modular
    })
}

/// Data behind a skeletal verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletalReport {
    pub skeletal: bool,
    /// Elementary triplets with ⟨f̄, u⟩ = 0.
    pub tight: Vec<ElementaryIndex>,
    pub tight_rank: usize,
    /// 2^n − n − 2, one less than the dimension of the standardized cone.
    pub required_rank: usize,
}

pub fn skeletal_report(f: &SetFunction) -> Result<SkeletalReport> {
    if let Some(e) = supermodularity_violation(f) {
        return Err(ImsetError::NotSupermodular {
            triplet: f.ground().format_elementary(&e),
        });
    }
    let g = f.ground();
    let fbar = standardize(f);
    let dim = g.size() - g.n() - 1;
    let required_rank = dim.saturating_sub(1);
    let tight: Vec<ElementaryIndex> = g
        .elementaries()
        .iter()
        .filter(|e| fbar.inner_elementary(e).is_zero())
        .copied()
        .collect();
    let rows: Vec<Vec<i64>> = tight
        .iter()
        .map(|e| Imset::elementary(g, e).values().to_vec())
        .collect();
    let tight_rank = integer_rank(&rows);
    let skeletal = dim > 0 && !fbar.is_zero() && tight_rank == required_rank;
    Ok(SkeletalReport {
        skeletal,
        tight,
        tight_rank,
        required_rank,
    })
}

/// Whether `f` spans an extreme ray of the standardized supermodular cone.
pub fn is_skeletal(f: &SetFunction) -> Result<bool> {
    Ok(skeletal_report(f)?.skeletal)
}

fn hypothesis(constructor: &'static str, index: impl Into<String>, reason: impl Into<String>) -> ImsetError {
    ImsetError::Hypothesis {
        constructor,
        index: index.into(),
        reason: reason.into(),
    }
}

fn require_standardized_supermodular(constructor: &'static str, what: &str, f: &SetFunction) -> Result<()> {
    if let Some(s) = f
        .ground()
        .subsets()
        .iter()
        .take_while(|s| s.len() <= 1)
        .find(|&&s| !f.get(s).is_zero())
    {
        return Err(hypothesis(
            constructor,
            format!("{what}({})", f.ground().format_subset(*s)),
            "input is not standardized",
        ));
    }
    if let Some(e) = supermodularity_violation(f) {
        return Err(hypothesis(
            constructor,
            format!("{what} at {}", f.ground().format_elementary(&e)),
            "input is not supermodular",
        ));
    }
    Ok(())
}

/// Maps the i-th variable of a smaller ground set to the i-th smallest
/// element of `a` and pulls `h` back along S ↦ S ∩ A.
fn pull_back(h: &SetFunction, a: Subset) -> impl Fn(Subset) -> Subset {
    let positions: Vec<usize> = a.elements().collect();
    debug_assert_eq!(positions.len(), h.ground().n());
    move |s: Subset| {
        Subset::from_elements(
            positions
                .iter()
                .enumerate()
                .filter(|(_, &p)| s.contains(p))
                .map(|(i, _)| i),
        )
    }
}

/// Skeletal constructors; each checks the hypotheses of its source result.
pub mod constructors {
    use super::*;

    /// S ↦ max(|S| − k, 0), for 1 <= k < n.
    pub fn max_k(g: &GroundSet, k: usize) -> Result<SetFunction> {
        if k == 0 || k >= g.n() {
            return Err(hypothesis("max_k", format!("k={k}"), format!("need 1 <= k < n = {}", g.n())));
        }
        Ok(SetFunction::from_i64_fn(g, |s| s.len().saturating_sub(k) as i64))
    }

    /// 1_{A⊆•}, skeletal for |A| >= 2.
    pub fn indicator_superset(g: &GroundSet, a: Subset) -> Result<SetFunction> {
        if !g.contains_subset(a) {
            return Err(hypothesis("indicator_superset", format!("{:#b}", a.mask()), "set outside the ground set"));
        }
        if a.len() < 2 {
            return Err(hypothesis(
                "indicator_superset",
                g.format_subset(a),
                "need |A| >= 2",
            ));
        }
        Ok(SetFunction::indicator_up(g, a))
    }

    /// S ↦ f(N∖S).
    pub fn reflect(f: &SetFunction) -> SetFunction {
        f.reflect()
    }

    /// S ↦ h(S ∩ A) on `target`; the variables of `h` map to the elements of
    /// `a` in increasing order.
    pub fn extend_marginal(h: &SetFunction, target: &GroundSet, a: Subset) -> Result<SetFunction> {
        if !target.contains_subset(a) || a.len() != h.ground().n() {
            return Err(hypothesis(
                "extend_marginal",
                format!("{:#b}", a.mask()),
                format!("A must be a subset of N with {} elements", h.ground().n()),
            ));
        }
        if let Some(e) = supermodularity_violation(h) {
            return Err(hypothesis(
                "extend_marginal",
                h.ground().format_elementary(&e),
                "input is not supermodular",
            ));
        }
        let map = pull_back(h, a);
        Ok(SetFunction::from_fn(target, |s| h.get(map(s)).clone()))
    }

    /// New last variable; f vanishes where it is absent and equals `f1`
    /// where it is present.
    pub fn extend_zero_slice(f1: &SetFunction) -> Result<SetFunction> {
        require_standardized_supermodular("extend_zero_slice", "f1", f1)?;
        let n = f1.ground().n();
        let g = GroundSet::new(n + 1)?;
        Ok(SetFunction::from_fn(&g, |s| {
            if s.contains(n) {
                f1.get(s.without(n)).clone()
            } else {
                Rational::zero()
            }
        }))
    }

    /// New last variable; f equals `f0` where it is absent and S ↦ |S∖n|
    /// where it is present. Needs `f0` skeletal with unit top increments.
    pub fn extend_modular_top(f0: &SetFunction) -> Result<SetFunction> {
        let g0 = f0.ground();
        let n = g0.n();
        let top = g0.full();
        for i in 0..n {
            let inc = f0.get(top) - f0.get(top.without(i));
            if !inc.is_one() {
                return Err(hypothesis(
                    "extend_modular_top",
                    format!("i={}", g0.label(i)),
                    format!("f0(N') - f0(N'\\i) = {inc}, need 1"),
                ));
            }
        }
        let report = skeletal_report(f0).map_err(|e| hypothesis("extend_modular_top", "f0", e.to_string()))?;
        if !report.skeletal {
            return Err(hypothesis(
                "extend_modular_top",
                "f0",
                format!("not skeletal (tight rank {} of {})", report.tight_rank, report.required_rank),
            ));
        }
        let g = GroundSet::new(n + 1)?;
        Ok(SetFunction::from_fn(&g, |s| {
            if s.contains(n) {
                rat(s.len() as i64 - 1)
            } else {
                f0.get(s).clone()
            }
        }))
    }

    /// Duplicates the last variable x of `fp`: on n+1 variables, f takes
    /// f'(·, x=1) when both copies are present and f'(·, x=0) otherwise.
    pub fn duplicate_coordinate(fp: &SetFunction) -> Result<SetFunction> {
        require_standardized_supermodular("duplicate_coordinate", "f'", fp)?;
        let n = fp.ground().n();
        let last = n - 1;
        let g = GroundSet::new(n + 1)?;
        Ok(SetFunction::from_fn(&g, |s| {
            let base = s.without(n).without(last);
            if s.contains(last) && s.contains(n) {
                fp.get(base.with(last)).clone()
            } else {
                fp.get(base).clone()
            }
        }))
    }

    /// f(S) = g(S ∩ A) h(S ∖ A) on `target`, with `a` and its complement
    /// receiving the variables of `g` and `h` in increasing order.
    pub fn product(gf: &SetFunction, hf: &SetFunction, target: &GroundSet, a: Subset) -> Result<SetFunction> {
        let b = target.complement(a);
        if !target.contains_subset(a) || a.len() != gf.ground().n() || b.len() != hf.ground().n() {
            return Err(hypothesis(
                "product",
                format!("{:#b}", a.mask()),
                "A and its complement must match the factor sizes",
            ));
        }
        require_standardized_supermodular("product", "g", gf)?;
        require_standardized_supermodular("product", "h", hf)?;
        let ma = pull_back(gf, a);
        let mb = pull_back(hf, b);
        Ok(SetFunction::from_fn(target, |s| gf.get(ma(s)) * hf.get(mb(s))))
    }

    /// The four-variable function with value 4 on N, 2 on every triple and
    /// 1 on every pair except ab.
    pub fn reino_m() -> SetFunction {
        let g = GroundSet::new(4).expect("n=4");
        let ab = Subset::from_mask(0b11);
        SetFunction::from_i64_fn(&g, |s| match s.len() {
            4 => 4,
            3 => 2,
            2 if s != ab => 1,
            _ => 0,
        })
    }
}

/// H-description of a cone given by generators: `equalities · x = 0` and
/// `inequalities · x >= 0`.
#[derive(Clone, Debug)]
struct ConeDescription {
    equalities: Vec<Vec<Rational>>,
    inequalities: Vec<Vec<Rational>>,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// Facets by brute force over (d−1)-subsets of generators; fine for the
/// small explicit cones this is meant for.
fn describe_cone(dim: usize, generators: &[Vec<Rational>]) -> Result<ConeDescription> {
    let gens = RationalMatrix::from_rows(generators.to_vec())?;
    let equalities = if generators.is_empty() {
        (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect()
    } else {
        gens.nullspace()
    };
    let d = dim - equalities.len();
    let mut inequalities: Vec<Vec<Rational>> = Vec::new();
    if d == 0 {
        return Ok(ConeDescription { equalities, inequalities });
    }
    let k = generators.len();
    let choose = crate::ground::binomial(k as u64, (d - 1) as u64);
    if choose > 200_000 {
        return Err(ImsetError::Budget(format!(
            "facet enumeration over {choose} generator subsets"
        )));
    }
    let mut combo: Vec<usize> = (0..d - 1).collect();
    loop {
        let mut rows: Vec<Vec<Rational>> = combo.iter().map(|&i| generators[i].clone()).collect();
        rows.extend(equalities.iter().cloned());
        let m = RationalMatrix::from_rows(rows)?;
        let ns = if d == 1 {
            // the span itself is a ray: the normal is any vector in the span
            // pairing positively with it
            vec![generators.iter().find(|g| g.iter().any(|x| !x.is_zero())).cloned().unwrap_or_default()]
        } else {
            m.nullspace()
        };
        if ns.len() == 1 && !ns[0].is_empty() {
            let w = &ns[0];
            let vals: Vec<Rational> = generators.iter().map(|g| dot(w, g)).collect();
            let all_nonneg = vals.iter().all(|v| !v.is_negative());
            let all_nonpos = vals.iter().all(|v| !v.is_positive());
            let nontrivial = vals.iter().any(|v| !v.is_zero());
            if nontrivial && (all_nonneg || all_nonpos) {
                let w: Vec<Rational> = if all_nonneg { w.clone() } else { w.iter().map(|x| -x).collect() };
                if !inequalities.contains(&w) {
                    inequalities.push(w);
                }
            }
        }
        if d == 1 {
            break;
        }
        // next combination
        let mut i = d - 1;
        loop {
            if i == 0 {
                return Ok(ConeDescription { equalities, inequalities });
            }
            i -= 1;
            if combo[i] < k - (d - 1) + i {
                combo[i] += 1;
                for j in i + 1..d - 1 {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
    Ok(ConeDescription { equalities, inequalities })
}

fn check_generators(dim: usize, generators: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    for g in generators {
        if g.len() != dim {
            return Err(ImsetError::Dimension { expected: dim, got: g.len() });
        }
        if g.iter().any(Signed::is_negative) {
            return Err(ImsetError::Precondition("generators must be nonnegative".into()));
        }
    }
    let nonzero: Vec<Vec<Rational>> = generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if !nonzero.is_empty() {
        // pointed iff no nonnegative combination with unit weight sums to zero
        let mut rows: Vec<Vec<Rational>> = (0..dim).map(|i| nonzero.iter().map(|g| g[i].clone()).collect()).collect();
        rows.push(vec![Rational::one(); nonzero.len()]);
        let a = RationalMatrix::from_rows(rows)?;
        let mut b = vec![Rational::zero(); dim];
        b.push(Rational::one());
        if a.lp_feasible(&b)?.is_feasible() {
            return Err(ImsetError::NotPointed);
        }
    }
    Ok(nonzero)
}

/// Whether g(x)h(y) spans an extreme ray of M(G,H), the cone of nonnegative
/// f on X×Y whose rows lie in cone(H) and whose columns lie in cone(G).
pub fn product_cone_extreme_check(
    g_generators: &[Vec<Rational>],
    h_generators: &[Vec<Rational>],
    g: &[Rational],
    h: &[Rational],
) -> Result<bool> {
    let nx = g.len();
    let ny = h.len();
    let gg = check_generators(nx, g_generators)?;
    let hh = check_generators(ny, h_generators)?;
    let gd = describe_cone(nx, &gg)?;
    let hd = describe_cone(ny, &hh)?;

    let idx = |x: usize, y: usize| x * ny + y;
    let f: Vec<Rational> = (0..nx * ny).map(|i| &g[i / ny] * &h[i % ny]).collect();
    if f.iter().all(Zero::is_zero) {
        return Ok(false);
    }

    let mut equalities: Vec<Vec<Rational>> = Vec::new();
    let mut inequalities: Vec<Vec<Rational>> = Vec::new();
    for i in 0..nx * ny {
        let mut row = vec![Rational::zero(); nx * ny];
        row[i] = Rational::one();
        inequalities.push(row);
    }
    for x in 0..nx {
        let lift = |w: &Vec<Rational>| {
            let mut row = vec![Rational::zero(); nx * ny];
            for y in 0..ny {
                row[idx(x, y)] = w[y].clone();
            }
            row
        };
        equalities.extend(hd.equalities.iter().map(lift));
        inequalities.extend(hd.inequalities.iter().map(lift));
    }
    for y in 0..ny {
        let lift = |w: &Vec<Rational>| {
            let mut row = vec![Rational::zero(); nx * ny];
            for x in 0..nx {
                row[idx(x, y)] = w[x].clone();
            }
            row
        };
        equalities.extend(gd.equalities.iter().map(lift));
        inequalities.extend(gd.inequalities.iter().map(lift));
    }

    if equalities.iter().any(|w| !dot(w, &f).is_zero())
        || inequalities.iter().any(|w| dot(w, &f).is_negative())
    {
        return Ok(false);
    }
    let mut tight = equalities;
    tight.extend(inequalities.into_iter().filter(|w| dot(w, &f).is_zero()));
    if tight.is_empty() {
        return Ok(nx * ny == 1);
    }
    Ok(RationalMatrix::from_rows(tight)?.rank() == nx * ny - 1)
}

#[cfg(test)]
mod tests {
    use super::constructors::*;
    use super::*;
    use crate::linalg::ratio;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn half_square(g: &GroundSet) -> SetFunction {
        SetFunction::from_fn(g, |s| ratio((s.len() * s.len()) as i64, 2))
    }

    #[test]
    fn homogeneity() {
        for n in 2..=5 {
            let g = g(n);
            let f = half_square(&g);
            assert!(g.elementaries().iter().all(|e| f.inner_elementary(e).is_one()));
        }
    }

    #[test]
    fn supermodularity_examples() {
        let g = g(4);
        assert!(is_supermodular(&half_square(&g)));
        for k in 1..4 {
            assert!(is_supermodular(&max_k(&g, k).unwrap()));
        }
        let neg = SetFunction::from_i64_fn(&g, |s| -((s == g.full()) as i64));
        let v = supermodularity_violation(&neg).unwrap();
        assert_eq!(g.format_elementary(&v), "c|d|ab");
        let top = g.parse_elementary("a|b|cd").unwrap();
        assert!(neg.inner_elementary(&top).is_negative());
    }

    #[test]
    fn modular_examples() {
        let g = g(3);
        let card = SetFunction::from_i64_fn(&g, |s| s.len() as i64);
        let c = modular_coefficients(&card).unwrap();
        assert_eq!(c.empty, rat(0));
        assert!(c.per_element.iter().all(|x| x.is_one()));
        let sq = SetFunction::from_i64_fn(&g, |s| (s.len() * s.len()) as i64);
        assert!(!is_modular(&sq));
        assert!(modular_coefficients(&sq).is_err());
        let one = SetFunction::from_i64_fn(&g, |_| 1);
        assert_eq!(modular_coefficients(&one).unwrap().empty, rat(1));
    }

    #[test]
    fn standardization() {
        let g = g(4);
        let f = standardize(&half_square(&g));
        for &s in g.subsets() {
            let k = s.len() as i64;
            assert_eq!(*f.get(s), rat(k * (k - 1) / 2));
        }
        assert_eq!(standardize(&f), f);
        let card = SetFunction::from_i64_fn(&g, |s| 3 * s.len() as i64 - 2);
        assert!(standardize(&card).is_zero());
    }

    #[test]
    fn skeletal_examples() {
        assert!(is_skeletal(&reino_m()).unwrap());
        let g3 = g(3);
        assert!(is_skeletal(&max_k(&g3, 1).unwrap()).unwrap());
        let sum = max_k(&g3, 1).unwrap().checked_add(&max_k(&g3, 2).unwrap()).unwrap();
        assert!(!is_skeletal(&sum).unwrap());
        assert!(!is_skeletal(&SetFunction::zero(&g3)).unwrap());
        let neg = SetFunction::from_i64_fn(&g3, |s| -(s.len() as i64 * s.len() as i64));
        assert!(matches!(is_skeletal(&neg), Err(ImsetError::NotSupermodular { .. })));
    }

    #[test]
    fn indicator_and_reflection() {
        let g3 = g(3);
        let ab = g3.parse_subset("ab").unwrap();
        let f = indicator_superset(&g3, ab).unwrap();
        assert!(is_skeletal(&f).unwrap());
        let r = reflect(&f);
        assert_eq!(r, SetFunction::indicator_down(&g3, g3.complement(ab)));
        assert!(is_skeletal(&r).unwrap());
        assert!(indicator_superset(&g3, Subset::singleton(0)).is_err());
    }

    #[test]
    fn product_of_max_functions() {
        let g2 = g(2);
        let m1 = max_k(&g2, 1).unwrap();
        let g4 = g(4);
        let f = product(&m1, &m1, &g4, g4.parse_subset("ab").unwrap()).unwrap();
        assert!(is_skeletal(&f).unwrap());
        let bad = SetFunction::from_i64_fn(&g2, |s| s.len() as i64);
        assert!(matches!(
            product(&bad, &m1, &g4, g4.parse_subset("ab").unwrap()),
            Err(ImsetError::Hypothesis { .. })
        ));
    }

    #[test]
    fn extensions() {
        let g3 = g(3);
        let m = max_k(&g3, 1).unwrap();
        assert!(is_skeletal(&extend_zero_slice(&m).unwrap()).unwrap());
        assert!(is_skeletal(&duplicate_coordinate(&m).unwrap()).unwrap());
        let top = max_k(&g3, 2).unwrap();
        assert!(is_skeletal(&extend_modular_top(&top).unwrap()).unwrap());
        assert!(is_skeletal(&extend_modular_top(&m).unwrap()).unwrap());
        let ind = indicator_superset(&g3, g3.parse_subset("ab").unwrap()).unwrap();
        let err = extend_modular_top(&ind).unwrap_err();
        assert!(matches!(err, ImsetError::Hypothesis { constructor: "extend_modular_top", .. }));
        let g4 = g(4);
        let e = extend_marginal(&m, &g4, g4.parse_subset("acd").unwrap()).unwrap();
        assert!(is_skeletal(&e).unwrap());
    }

    #[test]
    fn product_cone_examples() {
        let e = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        let orthant = vec![e(&[1, 0]), e(&[0, 1])];
        assert!(product_cone_extreme_check(&orthant, &orthant, &e(&[1, 0]), &e(&[0, 1])).unwrap());
        assert!(!product_cone_extreme_check(&orthant, &orthant, &e(&[1, 1]), &e(&[0, 1])).unwrap());
        let neg = vec![e(&[1, -1])];
        assert!(product_cone_extreme_check(&neg, &orthant, &e(&[1, 0]), &e(&[0, 1])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = reino_m().scale(&ratio(1, 3));
        let back = SetFunction::from_json(f.ground(), &f.to_json()).unwrap();
        assert_eq!(f, back);
    }
}
