//! Self-verification suite: one check per acceptance criterion plus a
//! seeded property sweep over every module.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ci::{
    ci_model_of_imset, ci_model_of_p, equivalence_3x3_check, multiinformation, semigraphoid_closure,
    JointTable,
};
use crate::face::{
    dimension_formula, extreme_set, face_of_structural, orthogonal_set, verify_face_theorem,
};
use crate::ground::{
    binomial, elementary_cmp, graded_cmp, ElementaryIndex, GroundSet, Subset, Triplet,
};
use crate::imset::{decompose_semi_elementary, Configuration, Imset, Orientation};
use crate::linalg::{integer_rank, rat, ratio, Rational, RationalMatrix};
use crate::markov::{markov_basis, markov_basis_with, orbit, subconfiguration, MarkovOptions, TieBreak};
use crate::membership::{classify, ImsetClass, Witness};
use crate::relations::{
    basic_moves, cyclic_move, enumerate_small_relations, reduce_to_basis, Move, RelationClass,
};
use crate::supermodular::{
    constructors, is_modular, is_skeletal, is_supermodular, standardize, SetFunction,
};

/// The 16×24 configuration for n = 4, both axes descending.
pub const CONFIGURATION_N4_DESCENDING: &str = include_str!("../data/configuration_n4_descending.csv");

/// Seed of every randomized check.
pub const SEED: u64 = 0x5EED_1A7E;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Every check at full size.
    All,
    /// Five-variable sweeps sampled, everything else unchanged.
    Quick,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
        })
    }
}

type CheckResult = std::result::Result<String, String>;
type CheckFn = fn(Suite) -> CheckResult;

const CHECKS: [(&str, CheckFn); 15] = [
    ("elementary count", check_counting),
    ("configuration golden", check_golden),
    ("homogeneity", check_homogeneity),
    ("elementary extreme rays", check_extreme_rays),
    ("face dimension sweep", check_dimension_sweep),
    ("face theorem", check_face_theorem),
    ("example imset end-to-end", check_example),
    ("skeletal constructors", check_constructors),
    ("lattice basis reduction", check_reduction),
    ("small relation classification", check_small_relations),
    ("markov basis n=4", check_markov_n4),
    ("markov basis n=5 to degree 4", check_markov_n5),
    ("square-free sub-configurations", check_square_free),
    ("conditional independence", check_ci),
    ("property suite", check_properties),
];

pub fn check_names() -> Vec<(usize, &'static str)> {
    CHECKS.iter().enumerate().map(|(i, (n, _))| (i + 1, *n)).collect()
}

/// Runs check `id` (1-based).
pub fn run_check(id: usize, suite: Suite) -> Option<CheckOutcome> {
    let (name, f) = CHECKS.get(id.checked_sub(1)?)?;
    let start = Instant::now();
    let result = std::panic::catch_unwind(|| f(suite))
        .unwrap_or_else(|_| Err("check panicked".to_string()));
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CheckOutcome {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_suite(suite: Suite) -> Vec<CheckOutcome> {
    (1..=CHECKS.len()).filter_map(|i| run_check(i, suite)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ground(n: usize) -> std::result::Result<GroundSet, String> {
    GroundSet::new(n).map_err(err)
}

fn check_counting(_: Suite) -> CheckResult {
    for n in 2..=8 {
        let g = ground(n)?;
        let expected = binomial(n as u64, 2) as usize * (1usize << (n - 2));
        let listed = g.triplets(true).len();
        ensure(g.elementary_count() == expected && listed == expected, || {
            format!("n={n}: counted {} listed {listed}, expected {expected}", g.elementary_count())
        })?;
    }
    Ok("|E(N)| = C(n,2)·2^(n-2) for n = 2..8".into())
}

fn check_golden(_: Suite) -> CheckResult {
    let g = ground(4)?;
    let csv = Configuration::full(&g).map_err(err)?.to_csv(Orientation::Descending);
    ensure(csv == CONFIGURATION_N4_DESCENDING, || {
        "configuration CSV differs from the golden table".into()
    })?;
    Ok("16×24 matrix matches bit-exactly".into())
}

fn check_homogeneity(_: Suite) -> CheckResult {
    for n in 2..=6 {
        let g = ground(n)?;
        let f = SetFunction::from_fn(&g, |s| ratio((s.len() * s.len()) as i64, 2));
        if let Some(e) = g.elementaries().iter().find(|e| f.inner_elementary(e) != rat(1)) {
            return Err(format!("n={n}: ⟨f,u⟩ ≠ 1 at {}", g.format_elementary(e)));
        }
    }
    Ok("⟨|S|²/2, u⟩ = 1 for every elementary u, n = 2..6".into())
}

fn imset_column(u: &Imset) -> Vec<Rational> {
    u.values().iter().map(|&x| rat(x)).collect()
}

/// u is not in the cone of the remaining elementary imsets.
fn is_extreme_by_exclusion(g: &GroundSet, e: &ElementaryIndex) -> std::result::Result<bool, String> {
    let others: Vec<Vec<Rational>> = g
        .elementaries()
        .iter()
        .filter(|x| x.rank != e.rank)
        .map(|x| imset_column(&Imset::elementary(g, x)))
        .collect();
    let b = imset_column(&Imset::elementary(g, e));
    if others.is_empty() {
        return Ok(b.iter().any(|x| *x != rat(0)));
    }
    let a = RationalMatrix::from_columns(g.size(), &others).map_err(err)?;
    let answer = a.lp_feasible(&b).map_err(err)?;
    ensure(answer.verify(&a, &b), || "LP answer failed verification".into())?;
    Ok(!answer.is_feasible())
}

fn check_extreme_rays(_: Suite) -> CheckResult {
    let mut total = 0;
    for n in 2..=5 {
        let g = ground(n)?;
        let flags: Vec<std::result::Result<bool, String>> =
            g.elementaries().par_iter().map(|e| is_extreme_by_exclusion(&g, e)).collect();
        for (e, f) in g.elementaries().iter().zip(flags) {
            ensure(f?, || format!("n={n}: {} lies in the cone of the others", g.format_elementary(e)))?;
        }
        total += g.elementary_count();
    }
    Ok(format!("{total} elementary imsets are extreme (n = 2..5)"))
}

fn sample<T: Clone>(items: &[T], every: usize) -> Vec<T> {
    items.iter().step_by(every.max(1)).cloned().collect()
}

fn check_dimension_sweep(suite: Suite) -> CheckResult {
    let mut count = 0;
    for n in 2..=5 {
        let g = ground(n)?;
        let all = g.triplets(false);
        let ts = if n == 5 && suite == Suite::Quick { sample(&all, 7) } else { all };
        let bad: Vec<String> = ts
            .par_iter()
            .filter_map(|t| {
                let ext = extreme_set(&g, t).ok()?;
                let rows: Vec<Vec<i64>> = ext.iter().map(|e| Imset::elementary(&g, e).values().to_vec()).collect();
                let dim = ((1usize << t.a().len()) - 1) * ((1usize << t.b().len()) - 1);
                let orth = orthogonal_set(&g, t).ok()?.len();
                (integer_rank(&rows) != dim || orth != g.size() - dim).then(|| g.format_triplet(t))
            })
            .collect();
        ensure(bad.is_empty(), || format!("n={n}: failures at {}", bad.join(", ")))?;
        count += ts.len();
    }
    Ok(format!("{count} triplets: rank and orthogonal count match (2^|A|-1)(2^|B|-1)"))
}

fn check_face_theorem(suite: Suite) -> CheckResult {
    let mut count = 0;
    for n in [4, 5] {
        let g = ground(n)?;
        let all = g.triplets(false);
        let ts = match (n, suite) {
            (4, _) => all,
            (_, Suite::All) => sample(&all, 3),
            _ => sample(&all, 19),
        };
        let bad: Vec<String> = ts
            .par_iter()
            .filter(|t| !verify_face_theorem(&g, t).is_ok_and(|r| r.passed()))
            .map(|t| g.format_triplet(t))
            .collect();
        ensure(bad.is_empty(), || format!("n={n}: failures at {}", bad.join(", ")))?;
        count += ts.len();
    }
    Ok(format!("{count} triplets verified in both directions with independent orthogonal sets"))
}

/// u⟨c|d|ab⟩ + u⟨a|b|∅⟩ + u⟨a|b|c⟩ + u⟨a|b|d⟩ over {a,b,c,d}.
pub fn example_imset() -> Imset {
    let g = GroundSet::new(4).expect("n=4");
    let mut u = Imset::zero(&g);
    for s in ["c|d|ab", "a|b|0", "a|b|c", "a|b|d"] {
        u.add_elementary(&g.parse_elementary(s).expect("valid"), 1).expect("small");
    }
    u
}

fn check_example(_: Suite) -> CheckResult {
    let u = example_imset();
    let g = u.ground().clone();
    let m = constructors::reino_m();
    let abcd = Imset::elementary(&g, &g.parse_elementary("a|b|cd").map_err(err)?);
    ensure(m.inner(&u).map_err(err)? == rat(0), || "⟨m,u⟩ ≠ 0".into())?;
    ensure(m.inner(&abcd).map_err(err)? == rat(1), || "⟨m,u⟨a|b|cd⟩⟩ ≠ 1".into())?;
    ensure(is_skeletal(&m).map_err(err)?, || "m is not skeletal".into())?;
    let model = ci_model_of_imset(&u).map_err(err)?;
    for s in ["c|d|ab", "a|b|0", "a|b|c", "a|b|d"] {
        let t = g.parse_triplet(s).map_err(err)?;
        ensure(model.contains(&t), || format!("model misses {s}"))?;
    }
    ensure(!model.contains(&g.parse_triplet("a|b|cd").map_err(err)?), || {
        "model contains a|b|cd".into()
    })?;
    Ok(format!("⟨m,u⟩=0, ⟨m,u⟨a|b|cd⟩⟩=1, m skeletal, model of u has {} statements", model.len()))
}

/// Skeletal seeds on `n` variables: max_k, superset indicators, and the
/// four-variable example function.
fn skeletal_seeds(n: usize) -> Vec<SetFunction> {
    let g = GroundSet::new(n).expect("small n");
    let mut out: Vec<SetFunction> = (1..n).filter_map(|k| constructors::max_k(&g, k).ok()).collect();
    for &s in g.subsets() {
        if let Ok(f) = constructors::indicator_superset(&g, s) {
            out.push(f);
        }
    }
    if n == 4 {
        out.push(constructors::reino_m());
    }
    out
}

fn constructor_outputs(max_n: usize, sampled: Option<usize>) -> Vec<(String, SetFunction)> {
    let mut out = Vec::new();
    let mut push = |name: String, f: SetFunction| out.push((name, f));
    for n in 2..=max_n {
        let g = GroundSet::new(n).expect("small n");
        for k in 1..n {
            push(format!("max_k n={n} k={k}"), constructors::max_k(&g, k).expect("valid"));
        }
        for &s in g.subsets() {
            if let Ok(f) = constructors::indicator_superset(&g, s) {
                push(format!("indicator {}", g.format_subset(s)), f.clone());
                push(format!("reflect indicator {}", g.format_subset(s)), constructors::reflect(&f));
            }
        }
        for (i, h) in skeletal_seeds(n).iter().enumerate() {
            push(format!("reflect seed {i} n={n}"), constructors::reflect(h));
        }
        // extensions from n-1 variables
        if n >= 3 {
            for (i, f1) in skeletal_seeds(n - 1).iter().enumerate() {
                if let Ok(f) = constructors::extend_zero_slice(f1) {
                    push(format!("zero slice seed {i} n={n}"), f);
                }
                if let Ok(f) = constructors::extend_modular_top(f1) {
                    push(format!("modular top seed {i} n={n}"), f);
                }
                if let Ok(f) = constructors::duplicate_coordinate(f1) {
                    push(format!("duplicate seed {i} n={n}"), f);
                }
            }
        }
        for &a in g.subsets() {
            if a.len() >= 2 && a.len() < n {
                for (i, h) in skeletal_seeds(a.len()).iter().enumerate() {
                    if let Ok(f) = constructors::extend_marginal(h, &g, a) {
                        push(format!("marginal {} seed {i}", g.format_subset(a)), f);
                    }
                }
            }
            let b = g.complement(a);
            if a.len() >= 2 && b.len() >= 2 {
                for (i, x) in skeletal_seeds(a.len()).iter().enumerate() {
                    for (j, y) in skeletal_seeds(b.len()).iter().enumerate() {
                        if let Ok(f) = constructors::product(x, y, &g, a) {
                            push(format!("product {} seeds {i},{j}", g.format_subset(a)), f);
                        }
                    }
                }
            }
        }
    }
    if let Some(every) = sampled {
        let five: Vec<(String, SetFunction)> = constructor_outputs_at(max_n + 1);
        out.extend(sample(&five, every));
    }
    out
}

fn constructor_outputs_at(n: usize) -> Vec<(String, SetFunction)> {
    constructor_outputs(n, None)
        .into_iter()
        .filter(|(_, f)| f.ground().n() == n)
        .collect()
}

fn check_constructors(suite: Suite) -> CheckResult {
    let every = if suite == Suite::All { 3 } else { 17 };
    let outputs = constructor_outputs(4, Some(every));
    let bad: Vec<String> = outputs
        .par_iter()
        .filter(|(_, f)| !is_skeletal(f).unwrap_or(false))
        .map(|(name, _)| name.clone())
        .collect();
    ensure(bad.is_empty(), || format!("not skeletal: {}", bad.join("; ")))?;
    let kinds: std::collections::BTreeSet<&str> =
        outputs.iter().map(|(n, _)| n.split(' ').next().unwrap_or("")).collect();
    ensure(kinds.len() >= 8, || format!("constructor families exercised: {kinds:?}"))?;
    Ok(format!("{} constructor outputs skeletal across {} families", outputs.len(), kinds.len()))
}

/// Random kernel vector: a combination of basic moves with coefficients
/// in [-bound, bound], rejected until nonzero.
fn random_kernel_vector(g: &GroundSet, rng: &mut ChaCha8Rng, bound: i64) -> Move {
    let basis = basic_moves(g).expect("n >= 3");
    loop {
        let mut z = Move::zero(g);
        let terms = rng.gen_range(1..=6);
        for _ in 0..terms {
            let m = basis.choose(rng).expect("nonempty");
            let k = rng.gen_range(-bound..=bound);
            z = z.checked_sub_scaled(m, -k).expect("small");
        }
        if !z.is_zero() && z.max_abs() <= bound {
            return z;
        }
    }
}

fn reduces_exactly(z: &Move) -> std::result::Result<usize, String> {
    let steps = reduce_to_basis(z).map_err(err)?;
    let basic = basic_moves(z.ground()).map_err(err)?;
    let mut acc = Move::zero(z.ground());
    for (m, k) in &steps {
        ensure(basic.contains(m), || format!("{m} is not a basic move"))?;
        acc = acc.checked_sub_scaled(m, -k).map_err(err)?;
    }
    ensure(acc == *z, || format!("combination does not re-sum to {z}"))?;
    Ok(steps.len())
}

fn check_reduction(suite: Suite) -> CheckResult {
    let g = ground(4)?;
    let count = if suite == Suite::All { 1000 } else { 200 };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let vectors: Vec<Move> = (0..count).map(|_| random_kernel_vector(&g, &mut rng, 5)).collect();
    let lengths: Vec<usize> = vectors.par_iter().map(reduces_exactly).collect::<std::result::Result<_, _>>()?;
    let cyc = cyclic_move(&g, 0, [1, 2, 3], Subset::default()).map_err(err)?;
    let cyc_len = reduces_exactly(&cyc)?;
    Ok(format!(
        "{count} random kernel vectors (max {} basic moves) and the 3×3 relation ({cyc_len} moves) re-sum exactly",
        lengths.iter().max().unwrap_or(&0)
    ))
}

fn check_small_relations(_: Suite) -> CheckResult {
    let g = ground(4)?;
    let two = enumerate_small_relations(&g, 2, 6, 6).map_err(err)?;
    ensure(!two.is_empty(), || "no 2-by-m relations found".into())?;
    for r in &two {
        ensure(r.classification == RelationClass::TwoByTwoSemigraphoid, || {
            format!("2-by-{} relation {} classified {}", r.m, r.relation, r.classification)
        })?;
    }
    let three: Vec<_> = enumerate_small_relations(&g, 3, 3, 6)
        .map_err(err)?
        .into_iter()
        .filter(|r| r.k == 3)
        .collect();
    let mut cyclic = 0;
    for r in &three {
        match r.classification {
            RelationClass::ThreeByThreeCyclic => cyclic += 1,
            RelationClass::ContainsTwoByTwo => {}
            c => return Err(format!("3-by-{} relation {} classified {c}", r.m, r.relation)),
        }
    }
    Ok(format!(
        "{} two-by-m relations all semi-graphoid multiples; {} three-by-m relations ({cyclic} cyclic, rest contain a 2×2)",
        two.len(),
        three.len()
    ))
}

fn counts_text(r: &crate::markov::MarkovBasisReport) -> String {
    r.per_degree_counts
        .iter()
        .map(|(d, c)| format!("{d}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn markov_counts_check(n: usize, cap: usize, expected: &[(usize, usize)], complete: bool) -> CheckResult {
    let g = ground(n)?;
    let r = markov_basis(&Configuration::full(&g).map_err(err)?, cap).map_err(err)?;
    let got: Vec<(usize, usize)> = r.per_degree_counts.iter().map(|(&d, &c)| (d, c)).collect();
    ensure(got == expected, || format!("counts {}", counts_text(&r)))?;
    ensure(r.complete == complete, || format!("complete = {}", r.complete))?;
    Ok(format!("counts {} complete={}", counts_text(&r), r.complete))
}

fn check_markov_n4(_: Suite) -> CheckResult {
    markov_counts_check(4, 4, &[(2, 2), (3, 1), (4, 4)], true)
}

fn check_markov_n5(_: Suite) -> CheckResult {
    markov_counts_check(5, 4, &[(2, 3), (3, 2), (4, 11)], false)
}

fn check_square_free(suite: Suite) -> CheckResult {
    let mut configs = 0;
    let mut moves = 0;
    for n in 2..=5 {
        let g = ground(n)?;
        let cap = match (n, suite) {
            (5, Suite::Quick) => 3,
            (5, Suite::All) => 4,
            _ => 6,
        };
        for t in g.triplets(false).into_iter().filter(|t| t.union() == g.full()) {
            let config = subconfiguration(&g, &t).map_err(err)?;
            let r = markov_basis(&config, cap).map_err(err)?;
            if let Some(m) = r.representatives.iter().find(|m| m.max_abs() > 1) {
                return Err(format!("{}: move {m} is not square-free", g.format_triplet(&t)));
            }
            configs += 1;
            moves += r.representatives.len();
        }
    }
    Ok(format!("{configs} sub-configurations, {moves} representative moves, all coefficients in {{0,±1}}"))
}

/// P(a,b,c) = P(a) P(c|a) P(b|c) with generic parameters.
pub fn markov_chain_table() -> JointTable {
    let pa = [0.3, 0.7];
    let pc_a = [[0.2, 0.8], [0.65, 0.35]];
    let pb_c = [[0.9, 0.1], [0.25, 0.75]];
    let mut p = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                p.push(pa[a] * pc_a[a][c] * pb_c[c][b]);
            }
        }
    }
    JointTable::new(vec![2, 2, 2], p).expect("valid table")
}

fn product_table(marginals: &[Vec<f64>]) -> JointTable {
    let mut p = vec![1.0];
    for m in marginals {
        p = p.iter().flat_map(|x| m.iter().map(move |y| x * y)).collect();
    }
    JointTable::new(marginals.iter().map(Vec::len).collect(), p).expect("valid table")
}

fn check_ci(_: Suite) -> CheckResult {
    let p = markov_chain_table();
    let g = p.ground().clone();
    let model = ci_model_of_p(&p, 1e-9).map_err(err)?;
    let closure = semigraphoid_closure(&g, [g.parse_triplet("a|b|c").map_err(err)?]);
    ensure(model == closure, || {
        format!("model {:?} vs closure {:?}", model.to_strings(), closure.to_strings())
    })?;
    let q = product_table(&[vec![0.2, 0.8], vec![0.5, 0.3, 0.2], vec![0.6, 0.4]]);
    let m = multiinformation(&q).map_err(err)?;
    let worst = m.values().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    ensure(worst <= 1e-12, || format!("product multiinformation reaches {worst:e}"))?;
    let report = equivalence_3x3_check(&ground(4)?).map_err(err)?;
    ensure(report.passed(), || format!("{report:?}"))?;
    Ok(format!(
        "chain model = closure of {{a|b|c}} ({} statements), product max |m| = {worst:.1e}, 3×3 report exact",
        model.len()
    ))
}

fn check_properties(suite: Suite) -> CheckResult {
    let results = properties::run(suite);
    let failed: Vec<String> = results
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("{} property groups green", results.len()))
}

/// Seeded randomized checks of every module's invariants.
pub mod properties {
    use super::*;

    type Prop = fn(&mut ChaCha8Rng, Suite) -> CheckResult;

    const PROPS: [(&str, Prop); 24] = [
        ("orders are total", orders_total),
        ("rank round trips", rank_round_trip),
        ("semi-elementary identity", semi_elementary_identity),
        ("columns in L*", columns_in_lattice),
        ("canonical decomposition", canonical_decomposition),
        ("configuration rank", configuration_rank),
        ("lp answers verify", lp_answers_verify),
        ("rank of transpose", rank_transpose),
        ("lp determinism", lp_determinism),
        ("standardization", standardization),
        ("skeletal invariance", skeletal_invariance),
        ("reflection", reflection),
        ("indicator pairings", indicator_pairings),
        ("multiinformation", multiinformation_props),
        ("completeness consistency", completeness_consistency),
        ("face invariance", face_invariance),
        ("face dimensions", face_dimensions),
        ("conditioning shift", conditioning_shift),
        ("faces of semi-elementary imsets", faces_of_semi_elementary),
        ("combinatorial witnesses", combinatorial_witnesses),
        ("membership scaling", membership_scaling),
        ("moves in kernel", moves_in_kernel),
        ("reduction re-sums", reduction_resums),
        ("markov soundness", markov_soundness),
    ];

    pub fn names() -> Vec<&'static str> {
        PROPS.iter().map(|(n, _)| *n).collect()
    }

    pub fn run(suite: Suite) -> Vec<(&'static str, CheckResult)> {
        PROPS
            .par_iter()
            .enumerate()
            .map(|(i, (name, f))| {
                let mut rng = ChaCha8Rng::seed_from_u64(SEED.wrapping_add(i as u64));
                let r = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(&mut rng, suite)))
                    .unwrap_or_else(|_| Err("panicked".into()));
                (*name, r)
            })
            .collect()
    }

    fn random_subset(rng: &mut ChaCha8Rng, within: Subset) -> Subset {
        Subset::from_elements(within.elements().filter(|_| rng.gen_bool(0.5)))
    }

    fn random_elementary(rng: &mut ChaCha8Rng, g: &GroundSet) -> ElementaryIndex {
        *g.elementary(rng.gen_range(0..g.elementary_count()))
    }

    /// Disjoint nonempty A, B and arbitrary C, or None when n is too small.
    fn random_triplet(rng: &mut ChaCha8Rng, g: &GroundSet) -> Triplet {
        loop {
            let labels: Vec<u8> = (0..g.n()).map(|_| rng.gen_range(0..4)).collect();
            let part = |k: u8| Subset::from_elements((0..g.n()).filter(|&i| labels[i] == k));
            if let Ok(t) = Triplet::new(part(0), part(1), part(2)) {
                if !t.is_trivial() {
                    return t;
                }
            }
        }
    }

    fn orders_total(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        use std::cmp::Ordering::*;
        let g = ground(6)?;
        for _ in 0..2000 {
            let [s, t, u] = [(); 3].map(|_| random_subset(rng, g.full()));
            ensure(graded_cmp(s, t) == graded_cmp(t, s).reverse(), || "graded order not antisymmetric".into())?;
            ensure((graded_cmp(s, t) == Equal) == (s == t), || "graded order not total".into())?;
            if graded_cmp(s, t) != Greater && graded_cmp(t, u) != Greater {
                ensure(graded_cmp(s, u) != Greater, || "graded order not transitive".into())?;
            }
            let [x, y, z] = [(); 3].map(|_| random_elementary(rng, &g));
            ensure(elementary_cmp(&x, &y) == elementary_cmp(&y, &x).reverse(), || {
                "elementary order not antisymmetric".into()
            })?;
            ensure((elementary_cmp(&x, &y) == Equal) == (x == y), || "elementary order not total".into())?;
            if elementary_cmp(&x, &y) != Greater && elementary_cmp(&y, &z) != Greater {
                ensure(elementary_cmp(&x, &z) != Greater, || "elementary order not transitive".into())?;
            }
        }
        Ok("2000 random triples".into())
    }

    fn rank_round_trip(_: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for n in 2..=7 {
            let g = ground(n)?;
            for (r, s) in g.subsets().iter().enumerate() {
                ensure(g.rank(*s) == r, || format!("subset rank {r}"))?;
            }
            for (r, e) in g.elementaries().iter().enumerate() {
                ensure(e.rank == r && g.elementary_rank(e.a, e.b, e.cond) == Some(r), || {
                    format!("elementary rank {r}")
                })?;
                let parsed = g.parse_elementary(&g.format_elementary(e)).map_err(err)?;
                ensure(parsed.rank == r, || format!("label round trip at {r}"))?;
            }
        }
        Ok("n = 2..7".into())
    }

    fn semi_elementary_identity(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for _ in 0..500 {
            let g = ground(rng.gen_range(3..=6))?;
            let t = random_triplet(rng, &g);
            if t.b().len() < 2 {
                continue;
            }
            let b = random_subset(rng, t.b());
            if b.is_empty() || b == t.b() {
                continue;
            }
            let d = t.b().difference(b);
            let lhs = Imset::semi_elementary(&g, &t);
            let x = Imset::semi_elementary(&g, &Triplet::new(t.a(), b, t.c()).map_err(err)?);
            let y = Imset::semi_elementary(&g, &Triplet::new(t.a(), d, b.union(t.c())).map_err(err)?);
            ensure(lhs == &x + &y, || format!("identity fails at {}", g.format_triplet(&t)))?;
        }
        Ok("500 random splits".into())
    }

    fn columns_in_lattice(_: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for n in 2..=6 {
            let g = ground(n)?;
            let config = Configuration::full(&g).map_err(err)?;
            for j in 0..config.cols() {
                ensure(config.column_imset(j).is_member_l_star(), || format!("column {j} at n={n}"))?;
            }
        }
        Ok("n = 2..6".into())
    }

    fn canonical_decomposition(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for _ in 0..300 {
            let g = ground(rng.gen_range(2..=6))?;
            let t = random_triplet(rng, &g);
            let parts = decompose_semi_elementary(&g, &t).map_err(err)?;
            let mut u = Imset::zero(&g);
            for (e, k) in &parts {
                u.add_elementary(e, *k as i64).map_err(err)?;
            }
            ensure(u == Imset::semi_elementary(&g, &t), || format!("{} does not re-sum", g.format_triplet(&t)))?;
            let total: u64 = parts.iter().map(|(_, k)| k).sum();
            ensure(total as usize == t.a().len() * t.b().len(), || "multiplicity".into())?;
        }
        Ok("300 random triplets".into())
    }

    fn configuration_rank(_: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for n in 2..=6 {
            let g = ground(n)?;
            let r = integer_rank(&Configuration::full(&g).map_err(err)?.dense());
            ensure(r == (1 << n) - n - 1, || format!("rank {r} at n={n}"))?;
        }
        Ok("rank = 2^n - n - 1 for n = 2..6".into())
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RationalMatrix {
        let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        RationalMatrix::from_i64_rows(&data).expect("rectangular")
    }

    fn lp_answers_verify(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        let mut feasible = 0;
        for _ in 0..300 {
            let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=6));
            let a = random_matrix(rng, r, c);
            let b: Vec<Rational> = (0..r).map(|_| rat(rng.gen_range(-4..=4))).collect();
            let ans = a.lp_feasible(&b).map_err(err)?;
            ensure(ans.verify(&a, &b), || "answer failed verification".into())?;
            feasible += ans.is_feasible() as usize;
        }
        Ok(format!("300 random systems, {feasible} feasible"))
    }

    fn rank_transpose(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for _ in 0..300 {
            let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let a = random_matrix(rng, r, c);
            ensure(a.rank() == a.transpose().rank(), || "rank differs from transpose".into())?;
        }
        Ok("300 random matrices".into())
    }

    fn lp_determinism(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for _ in 0..100 {
            let a = random_matrix(rng, 4, 6);
            let b: Vec<Rational> = (0..4).map(|_| rat(rng.gen_range(-4..=4))).collect();
            let x = a.lp_feasible(&b).map_err(err)?;
            let y = a.lp_feasible(&b).map_err(err)?;
            ensure(x == y, || "repeated call differs".into())?;
        }
        Ok("100 repeated calls".into())
    }

    fn random_modular(rng: &mut ChaCha8Rng, g: &GroundSet) -> SetFunction {
        let c0 = ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        let cs: Vec<Rational> = (0..g.n()).map(|_| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
        SetFunction::from_fn(g, |s| s.elements().fold(c0.clone(), |acc, i| acc + &cs[i]))
    }

    /// Positive combination of skeletal seeds plus a modular part.
    fn random_supermodular(rng: &mut ChaCha8Rng, n: usize) -> SetFunction {
        let g = GroundSet::new(n).expect("small n");
        let seeds = skeletal_seeds(n);
        let mut f = random_modular(rng, &g);
        for _ in 0..rng.gen_range(1..=4) {
            let s = seeds.choose(rng).expect("seeds");
            f = f.checked_add(&s.scale(&ratio(rng.gen_range(1..=5), rng.gen_range(1..=3)))).expect("same ground");
        }
        f
    }

    fn standardization(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for _ in 0..100 {
            let n = rng.gen_range(2..=5);
            let f = random_supermodular(rng, n);
            ensure(is_supermodular(&f), || "generator produced a non-supermodular function".into())?;
            let s = standardize(&f);
            ensure(is_supermodular(&s), || "standardized not supermodular".into())?;
            ensure(s.values().iter().all(|v| *v >= rat(0)), || "standardized negative".into())?;
            ensure(s.is_monotone(), || "standardized not monotone".into())?;
            ensure(s.is_standardized(), || "not standardized".into())?;
            ensure(is_modular(&f.checked_add(&s.scale(&rat(-1))).map_err(err)?), || {
                "difference not modular".into()
            })?;
        }
        Ok("100 random supermodular functions".into())
    }

    fn skeletal_invariance(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for _ in 0..60 {
            let n = rng.gen_range(2..=4);
            let g = GroundSet::new(n).expect("small");
            let f = random_supermodular(rng, n);
            let base = is_skeletal(&f).map_err(err)?;
            let c = ratio(rng.gen_range(1..=7), rng.gen_range(1..=4));
            ensure(is_skeletal(&f.scale(&c)).map_err(err)? == base, || "scaling changed the verdict".into())?;
            let shifted = f.checked_add(&random_modular(rng, &g)).map_err(err)?;
            ensure(is_skeletal(&shifted).map_err(err)? == base, || "modular shift changed the verdict".into())?;
        }
        Ok("60 random functions".into())
    }

    fn reflection(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for _ in 0..60 {
            let n = rng.gen_range(2..=4);
            let f = random_supermodular(rng, n);
            ensure(f.reflect().reflect() == f, || "reflection not an involution".into())?;
            ensure(is_skeletal(&f.reflect()).map_err(err)? == is_skeletal(&f).map_err(err)?, || {
                "reflection changed the verdict".into()
            })?;
        }
        Ok("60 random functions".into())
    }

    fn indicator_pairings(_: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for n in 2..=4 {
            let g = ground(n)?;
            for &a in g.subsets() {
                for f in [SetFunction::indicator_up(&g, a), SetFunction::indicator_down(&g, a)] {
                    for e in g.elementaries() {
                        let v = f.inner_elementary(e);
                        ensure(v == rat(0) || v == rat(1), || format!("pairing {v}"))?;
                    }
                }
            }
        }
        Ok("n = 2..4 exhaustive".into())
    }

    fn random_table(rng: &mut ChaCha8Rng, n: usize) -> JointTable {
        let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
        let cells: usize = cards.iter().product();
        let w: Vec<f64> = (0..cells).map(|_| rng.gen_range(0.05..1.0)).collect();
        JointTable::normalized(cards, w).expect("valid")
    }

    fn multiinformation_props(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for _ in 0..40 {
            let n = rng.gen_range(2..=4);
            let p = random_table(rng, n);
            ensure(multiinformation(&p).map_err(err)?.is_supermodular(1e-9), || "m_P not supermodular".into())?;
            ensure(ci_model_of_p(&p, 1e-9).map_err(err)?.is_semigraphoid_closed(), || {
                "model not closed".into()
            })?;
        }
        Ok("40 random tables".into())
    }

    fn structured_tables() -> Vec<JointTable> {
        let mut out = vec![
            markov_chain_table(),
            product_table(&[vec![0.3, 0.7], vec![0.6, 0.4], vec![0.1, 0.9]]),
            product_table(&[vec![0.25, 0.75], vec![0.5, 0.5], vec![0.2, 0.8], vec![0.45, 0.55]]),
        ];
        // (a,b) dependent, independent of c
        let ab = [0.1, 0.2, 0.3, 0.4];
        let c = [0.35, 0.65];
        let p: Vec<f64> = ab.iter().flat_map(|x| c.iter().map(move |y| x * y)).collect();
        out.push(JointTable::new(vec![2, 2, 2], p).expect("valid"));
        out
    }

    fn completeness_consistency(_: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for (i, p) in structured_tables().iter().enumerate() {
            let g = p.ground();
            let model = ci_model_of_p(p, 1e-9).map_err(err)?;
            let mut u = Imset::zero(g);
            for t in model.iter() {
                u = u.checked_add(&Imset::semi_elementary(g, t)).map_err(err)?;
            }
            let back = ci_model_of_imset(&u).map_err(err)?;
            ensure(back == model, || {
                format!("table {i}: {:?} vs {:?}", back.to_strings(), model.to_strings())
            })?;
        }
        Ok("structured tables".into())
    }

    fn random_combinatorial(rng: &mut ChaCha8Rng, g: &GroundSet, max_degree: usize) -> Imset {
        let mut u = Imset::zero(g);
        for _ in 0..rng.gen_range(1..=max_degree) {
            u.add_elementary(&random_elementary(rng, g), 1).expect("small");
        }
        u
    }

    fn face_invariance(rng: &mut ChaCha8Rng, suite: Suite) -> CheckResult {
        let g = ground(4)?;
        let rounds = if suite == Suite::All { 6 } else { 3 };
        for _ in 0..rounds {
            let u = random_combinatorial(rng, &g, 3);
            let model = ci_model_of_imset(&u).map_err(err)?;
            let face = face_of_structural(&u).map_err(err)?;
            let v = face.choose(rng).expect("nonempty face");
            let w = u.checked_add(&Imset::elementary(&g, v)).map_err(err)?;
            ensure(ci_model_of_imset(&w).map_err(err)? == model, || "model changed inside the face".into())?;
        }
        Ok(format!("{rounds} random structural imsets"))
    }

    fn face_dimensions(_: &mut ChaCha8Rng, suite: Suite) -> CheckResult {
        for n in 2..=5 {
            let g = ground(n)?;
            let all = g.triplets(false);
            let ts = if n == 5 && suite == Suite::Quick { sample(&all, 11) } else { all };
            let bad = ts.par_iter().find_any(|t| {
                let dim = dimension_formula(t);
                let ext: Vec<Vec<i64>> = extreme_set(&g, t)
                    .expect("nontrivial")
                    .iter()
                    .map(|e| Imset::elementary(&g, e).values().to_vec())
                    .collect();
                let orth = orthogonal_set(&g, t).expect("nontrivial");
                let orth_rows: Vec<Vec<i64>> = orth
                    .iter()
                    .map(|f| f.values(&g))
                    .collect();
                let perpendicular = orth.iter().all(|f| ext.iter().all(|u| {
                    f.values(&g).iter().zip(u).map(|(&x, &y)| x * y).sum::<i64>() == 0
                }));
                let mut both = ext.clone();
                both.extend(orth_rows.iter().cloned());
                !(orth.len() + dim == g.size()
                    && integer_rank(&ext) == dim
                    && integer_rank(&orth_rows) == orth.len()
                    && perpendicular
                    && integer_rank(&both) == g.size())
            });
            if let Some(t) = bad {
                return Err(format!("n={n}: {}", g.format_triplet(t)));
            }
        }
        Ok("n = 2..5".into())
    }

    fn conditioning_shift(_: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for n in 2..=5 {
            let g = ground(n)?;
            for t in g.triplets(false) {
                let base = Triplet::new(t.a(), t.b(), Subset::default()).map_err(err)?;
                let shifted: Vec<(usize, usize, Subset)> = extreme_set(&g, &t)
                    .map_err(err)?
                    .iter()
                    .map(|e| (e.a, e.b, e.cond.difference(t.c())))
                    .collect();
                let plain: Vec<(usize, usize, Subset)> =
                    extreme_set(&g, &base).map_err(err)?.iter().map(|e| (e.a, e.b, e.cond)).collect();
                let mut x = shifted.clone();
                let mut y = plain;
                x.sort();
                y.sort();
                ensure(x == y, || format!("shift not bijective at {}", g.format_triplet(&t)))?;
                let rank = |ts: &[ElementaryIndex]| {
                    integer_rank(&ts.iter().map(|e| Imset::elementary(&g, e).values().to_vec()).collect::<Vec<_>>())
                };
                ensure(rank(&extreme_set(&g, &t).map_err(err)?) == rank(&extreme_set(&g, &base).map_err(err)?), || {
                    format!("rank differs at {}", g.format_triplet(&t))
                })?;
            }
        }
        Ok("n = 2..5".into())
    }

    fn faces_of_semi_elementary(_: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for n in 2..=4 {
            let g = ground(n)?;
            let ts = g.triplets(false);
            let bad = ts.par_iter().find_any(|t| {
                face_of_structural(&Imset::semi_elementary(&g, t)).ok() != extreme_set(&g, t).ok()
            });
            if let Some(t) = bad {
                return Err(format!("face mismatch at {}", g.format_triplet(t)));
            }
        }
        Ok("n = 2..4".into())
    }

    fn combinatorial_witnesses(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for _ in 0..60 {
            let g = ground(rng.gen_range(2..=4))?;
            let u = random_combinatorial(rng, &g, 5);
            let r = classify(&u).map_err(err)?;
            ensure(r.class == ImsetClass::Combinatorial, || format!("classified {}", r.class))?;
            let Some(Witness::Integer(w)) = &r.witness else {
                return Err("missing integer witness".into());
            };
            let mut back = Imset::zero(&g);
            for (i, &k) in w.iter().enumerate() {
                back.add_elementary(g.elementary(i), k as i64).map_err(err)?;
            }
            ensure(back == u, || "witness does not re-sum".into())?;
            ensure(w.iter().sum::<u64>() as i64 == r.degree, || "degree mismatch".into())?;
        }
        Ok("60 random combinatorial imsets".into())
    }

    fn membership_scaling(rng: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        let mut structural = 0;
        for _ in 0..60 {
            let g = ground(rng.gen_range(3..=4))?;
            let mut u = Imset::zero(&g);
            for _ in 0..rng.gen_range(1..=4) {
                u.add_elementary(&random_elementary(rng, &g), rng.gen_range(-1..=2)).map_err(err)?;
            }
            let r = classify(&u).map_err(err)?;
            let c = rng.gen_range(2..=3);
            let rc = classify(&u.checked_scale(c).map_err(err)?).map_err(err)?;
            let is_s = |k: ImsetClass| k >= ImsetClass::Structural;
            ensure(is_s(r.class) == is_s(rc.class), || "scaling changed structural status".into())?;
            if is_s(r.class) {
                structural += 1;
                ensure(r.class == ImsetClass::Combinatorial, || "structural but not combinatorial at n <= 4".into())?;
            }
            if let Some(Witness::Rational(w)) = &r.witness {
                let config = Configuration::full(&g).map_err(err)?;
                let a = RationalMatrix::from_i64_rows(&config.dense()).map_err(err)?;
                ensure(a.mul_vec(w).map_err(err)? == imset_column(&u), || "rational witness fails".into())?;
                ensure(w.iter().all(|x| *x >= rat(0)), || "negative witness".into())?;
            }
        }
        Ok(format!("60 random lattice points, {structural} structural"))
    }

    fn moves_in_kernel(_: &mut ChaCha8Rng, _: Suite) -> CheckResult {
        for n in 3..=5 {
            let g = ground(n)?;
            for m in basic_moves(&g).map_err(err)? {
                ensure(m.image().map_err(err)?.is_zero(), || format!("{m} not in kernel"))?;
                ensure(m.coeffs().iter().sum::<i64>() == 0, || format!("{m} does not sum to zero"))?;
            }
        }
        let r = markov_basis(&Configuration::full(&ground(4)?).map_err(err)?, 4).map_err(err)?;
        for m in &r.representatives {
            ensure(m.image().map_err(err)?.is_zero() && m.coeffs().iter().sum::<i64>() == 0, || {
                format!("{m} not a move")
            })?;
        }
        Ok("basic moves n = 3..5 and markov representatives n = 4".into())
    }

    fn reduction_resums(rng: &mut ChaCha8Rng, suite: Suite) -> CheckResult {
        let per_n = if suite == Suite::All { 200 } else { 50 };
        for n in 3..=5 {
            let g = ground(n)?;
            for _ in 0..per_n {
                reduces_exactly(&random_kernel_vector(&g, rng, 5))?;
            }
        }
        Ok(format!("{per_n} random vectors for each n = 3..5"))
    }

    fn fibers_connected(config: &Configuration, reps: &[Move], cap: usize) -> CheckResult {
        let pos: std::collections::HashMap<usize, usize> =
            config.columns().iter().enumerate().map(|(j, e)| (e.rank, j)).collect();
        let mut moves: Vec<Vec<i64>> = Vec::new();
        for r in reps {
            for m in orbit(config, r).map_err(err)? {
                let mut v = vec![0i64; config.cols()];
                for (rank, &k) in m.coeffs().iter().enumerate() {
                    if k != 0 {
                        v[pos[&rank]] = k;
                    }
                }
                moves.push(v.iter().map(|x| -x).collect());
                moves.push(v);
            }
        }
        for d in 2..=cap {
            let mut fibers: std::collections::HashMap<Vec<i64>, Vec<Vec<i64>>> = Default::default();
            let mut idx = vec![0usize; d];
            loop {
                let mut x = vec![0i64; config.cols()];
                for &c in &idx {
                    x[c] += 1;
                }
                let img = config.apply(&x).map_err(err)?.values().to_vec();
                fibers.entry(img).or_default().push(x);
                let mut p = d;
                while p > 0 && idx[p - 1] == config.cols() - 1 {
                    p -= 1;
                }
                if p == 0 {
                    break;
                }
                let v = idx[p - 1] + 1;
                for y in &mut idx[p - 1..] {
                    *y = v;
                }
            }
            for members in fibers.values() {
                let all: std::collections::HashSet<&Vec<i64>> = members.iter().collect();
                let mut seen = std::collections::HashSet::from([members[0].clone()]);
                let mut stack = vec![members[0].clone()];
                while let Some(cur) = stack.pop() {
                    for z in &moves {
                        let next: Vec<i64> = cur.iter().zip(z).map(|(a, b)| a + b).collect();
                        if next.iter().all(|&v| v >= 0) && seen.insert(next.clone()) {
                            ensure(all.contains(&next), || "move left the fiber".into())?;
                            stack.push(next);
                        }
                    }
                }
                ensure(seen.len() == all.len(), || format!("disconnected fiber at degree {d}"))?;
            }
        }
        Ok(String::new())
    }

    fn markov_soundness(_: &mut ChaCha8Rng, suite: Suite) -> CheckResult {
        for (n, cap) in [(3, 4), (4, 4)] {
            let config = Configuration::full(&ground(n)?).map_err(err)?;
            let r = markov_basis(&config, cap).map_err(err)?;
            fibers_connected(&config, &r.representatives, cap)?;
            let mut opts = MarkovOptions::new(cap);
            opts.tie_break = TieBreak::Greatest;
            let rev = markov_basis_with(&config, &opts).map_err(err)?;
            ensure(rev.per_degree_counts == r.per_degree_counts, || "tie-break changed counts".into())?;
            ensure(rev.per_degree_basis_size == r.per_degree_basis_size, || "tie-break changed basis size".into())?;
        }
        if suite == Suite::All {
            let config = Configuration::full(&ground(5)?).map_err(err)?;
            let r = markov_basis(&config, 4).map_err(err)?;
            let mut opts = MarkovOptions::new(4);
            opts.tie_break = TieBreak::Greatest;
            let rev = markov_basis_with(&config, &opts).map_err(err)?;
            ensure(rev.per_degree_counts == r.per_degree_counts, || "tie-break changed counts at n=5".into())?;
        }
        let g = ground(4)?;
        let t = g.parse_triplet("ab|cd|0").map_err(err)?;
        let config = subconfiguration(&g, &t).map_err(err)?;
        let r = markov_basis(&config, 4).map_err(err)?;
        fibers_connected(&config, &r.representatives, 4)?;
        Ok("fibers connected up to the cap; counts stable under reversed tie-break".into())
    }
}
