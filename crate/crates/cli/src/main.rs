use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use imset::ci::{ci_model_of_imset, ci_model_of_p, semigraphoid_closure, CiModel, JointTable};
use imset::face::{face_description, face_of_structural};
use imset::imset::decompose_semi_elementary;
use imset::markov::{markov_basis_with, subconfiguration, MarkovOptions, TieBreak};
use imset::membership::{classify_with_budget, DEFAULT_NODE_BUDGET};
use imset::relations::{enumerate_small_relations, reduce_to_basis, Move};
use imset::supermodular::{constructors, skeletal_report, standardize, supermodularity_violation, SetFunction};
use imset::verify::{run_suite, Suite};
use imset::{Configuration, GroundSet, Imset, ImsetError, Orientation};
use serde_json::{json, Value};

const SCHEMA: &str = "imset-kit/1";

#[derive(Parser)]
#[command(name = "imset-kit", version, about = "Exact imset calculus for conditional-independence structures")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Output format; not every command supports csv.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisOrder {
    Ascending,
    Descending,
    /// Layout of the printed table (descending).
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    MaxK,
    Indicator,
    Reflect,
    Marginal,
    ZeroSlice,
    ModularTop,
    Duplicate,
    Product,
    Example,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Quick,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreakArg {
    Least,
    Greatest,
}

#[derive(Subcommand)]
enum Command {
    /// Configuration matrix of elementary imsets.
    Config {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = AxisOrder::Ascending)]
        orientation: AxisOrder,
    },
    /// Supermodularity verdict with a violating elementary triplet.
    CheckSupermodular {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Skeletal verdict with the rank of the tight elementary imsets.
    Skeletal {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Build a set function from one of the skeletal constructions.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        /// Input functions for reflect, marginal, zero-slice, modular-top,
        /// duplicate (one) and product (two).
        inputs: Vec<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Subset argument, e.g. `ab`.
        #[arg(long)]
        set: Option<String>,
    },
    /// Canonical elementary decomposition of a semi-elementary imset.
    Decompose {
        triplet: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Lattice, structural or combinatorial membership of an imset.
    ClassifyImset {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Extreme rays, orthogonal indicators and dimension of a face.
    Face {
        triplet: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Extreme rays of the face generated by a structural imset.
    FaceOf {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Conditional-independence model of a distribution or an imset.
    CiModel {
        /// Joint table as JSON or CSV (by extension).
        #[arg(long, conflicts_with = "imset", required_unless_present = "imset")]
        dist: Option<PathBuf>,
        #[arg(long)]
        imset: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Rescale probabilities to sum to one.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Semi-graphoid closure of a JSON list of statements.
    Closure {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Combination of basic moves equal to a kernel vector.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Classified enumeration of small relations.
    Relations {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        degree_max: i64,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
    },
    /// Markov basis representatives up to a degree cap.
    Markov {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree_cap: usize,
        /// Restrict to the face of a triplet with ABC = N.
        #[arg(long)]
        sub: Option<String>,
        #[arg(long, value_enum, default_value_t = TieBreakArg::Least)]
        tie_break: TieBreakArg,
        /// Memory budget for fiber enumeration, in MiB.
        #[arg(long)]
        memory_mib: Option<u64>,
    },
    /// Run the self-verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

enum Failure {
    Input(String),
    Budget(String),
    Verify(String),
}

impl From<ImsetError> for Failure {
    fn from(e: ImsetError) -> Self {
        match e {
            ImsetError::Budget(_) => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// Smallest n whose default labels cover every letter in the strings.
fn infer_n<'a>(keys: impl IntoIterator<Item = &'a str>) -> usize {
    let mut n = 1;
    for k in keys {
        for c in k.chars().filter(|c| c.is_ascii_lowercase()) {
            n = n.max((c as u8 - b'a') as usize + 1);
        }
    }
    n
}

fn ground_for<'a>(n: Option<usize>, keys: impl IntoIterator<Item = &'a str>) -> Result<GroundSet, Failure> {
    let n = match n {
        Some(n) => n,
        None => infer_n(keys),
    };
    Ok(GroundSet::new(n)?)
}

fn object_keys(v: &Value) -> Vec<&str> {
    v.as_object().map(|m| m.keys().map(String::as_str).collect()).unwrap_or_default()
}

/// A bare `{subset: value}` map, or this tool's own output with the map
/// under `key` and the ground size under "n".
fn payload(v: Value, key: &str, n: Option<usize>) -> (Value, Option<usize>) {
    if v.get("schema").is_some() {
        let inner_n = v.get("n").and_then(Value::as_u64).map(|x| x as usize);
        (v.get(key).cloned().unwrap_or(Value::Null), n.or(inner_n))
    } else {
        (v, n)
    }
}

fn load_set_function(path: &Path, n: Option<usize>) -> Result<SetFunction, Failure> {
    let (v, n) = payload(read_json(path)?, "function", n);
    let g = ground_for(n, object_keys(&v))?;
    Ok(SetFunction::from_json(&g, &v)?)
}

fn load_imset(path: &Path, n: Option<usize>) -> Result<Imset, Failure> {
    let (v, n) = payload(read_json(path)?, "imset", n);
    let g = ground_for(n, object_keys(&v))?;
    Ok(Imset::from_json(&g, &v)?)
}

fn with_schema(command: &str, mut body: Value) -> String {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), SCHEMA.into());
    out.insert("command".into(), command.into());
    if let Value::Object(m) = &mut body {
        out.append(m);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(out)).expect("serializable");
    s.push('\n');
    s
}

fn no_csv(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(input(format!("{command} has no csv output")));
    }
    Ok(())
}

fn model_json(m: &CiModel) -> Value {
    json!({ "n": m.ground().n(), "size": m.len(), "statements": m.to_strings() })
}

fn model_text(m: &CiModel) -> String {
    let mut s: String = m.to_strings().iter().map(|t| format!("{t}\n")).collect();
    if s.is_empty() {
        s.push_str("(empty model)\n");
    }
    s
}

fn run(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Config { n, orientation } => {
            let g = GroundSet::new(*n)?;
            let config = Configuration::full(&g)?;
            let orient = match orientation {
                AxisOrder::Ascending => Orientation::Ascending,
                AxisOrder::Descending | AxisOrder::Table => Orientation::Descending,
            };
            Ok(match fmt {
                Format::Csv | Format::Text => config.to_csv(orient),
                Format::Json => {
                    let mut rows: Vec<usize> = (0..config.rows()).collect();
                    let mut cols: Vec<usize> = (0..config.cols()).collect();
                    if orient == Orientation::Descending {
                        rows.reverse();
                        cols.reverse();
                    }
                    let dense = config.dense();
                    with_schema(
                        "config",
                        json!({
                            "n": n,
                            "rows": rows.iter().map(|&r| g.format_subset(g.subset_at(r))).collect::<Vec<_>>(),
                            "columns": cols.iter().map(|&j| g.format_elementary(&config.columns()[j])).collect::<Vec<_>>(),
                            "matrix": rows.iter().map(|&r| cols.iter().map(|&j| dense[r][j]).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        }),
                    )
                }
            })
        }
        Command::CheckSupermodular { file, n } => {
            no_csv(fmt, "check-supermodular")?;
            let f = load_set_function(file, *n)?;
            let g = f.ground();
            let violation = supermodularity_violation(&f);
            Ok(match fmt {
                Format::Text => match violation {
                    None => "supermodular\n".into(),
                    Some(e) => format!(
                        "not supermodular: ⟨f, u⟨{}⟩⟩ = {}\n",
                        g.format_elementary(&e),
                        f.inner_elementary(&e)
                    ),
                },
                _ => with_schema(
                    "check-supermodular",
                    json!({
                        "supermodular": violation.is_none(),
                        "violation": violation.map(|e| json!({
                            "triplet": g.format_elementary(&e),
                            "value": f.inner_elementary(&e).to_string(),
                        })),
                    }),
                ),
            })
        }
        Command::Skeletal { file, n } => {
            no_csv(fmt, "skeletal")?;
            let f = load_set_function(file, *n)?;
            let g = f.ground();
            let r = skeletal_report(&f)?;
            Ok(match fmt {
                Format::Text => format!(
                    "{} (tight rank {} of {}, {} tight elementary imsets)\n",
                    if r.skeletal { "skeletal" } else { "not skeletal" },
                    r.tight_rank,
                    r.required_rank,
                    r.tight.len()
                ),
                _ => with_schema(
                    "skeletal",
                    json!({
                        "skeletal": r.skeletal,
                        "tight_rank": r.tight_rank,
                        "required_rank": r.required_rank,
                        "tight": r.tight.iter().map(|e| g.format_elementary(e)).collect::<Vec<_>>(),
                        "standardized": standardize(&f).to_json(),
                    }),
                ),
            })
        }
        Command::Construct { family, inputs, n, k, set } => {
            no_csv(fmt, "construct")?;
            let f = construct(*family, inputs, *n, *k, set.as_deref())?;
            Ok(match fmt {
                Format::Text => {
                    let g = f.ground();
                    g.subsets()
                        .iter()
                        .map(|&s| format!("{} {}\n", g.format_subset(s), f.get(s)))
                        .collect()
                }
                _ => with_schema("construct", json!({ "n": f.ground().n(), "function": f.to_json() })),
            })
        }
        Command::Decompose { triplet, n } => {
            no_csv(fmt, "decompose")?;
            let g = ground_for(*n, [triplet.as_str()])?;
            let t = g.parse_triplet(triplet)?;
            let parts = decompose_semi_elementary(&g, &t)?;
            let u = Imset::semi_elementary(&g, &t);
            Ok(match fmt {
                Format::Text => {
                    let terms: Vec<String> = parts
                        .iter()
                        .map(|(e, k)| {
                            let name = g.format_elementary(e);
                            if *k == 1 { name } else { format!("{k} {name}") }
                        })
                        .collect();
                    format!("{} = {}\n{}\n", g.format_triplet(&t), terms.join(" + "), u)
                }
                _ => with_schema(
                    "decompose",
                    json!({
                        "n": g.n(),
                        "triplet": g.format_triplet(&t),
                        "imset": u.to_json(),
                        "terms": parts.iter().map(|(e, k)| json!({"triplet": g.format_elementary(e), "multiplicity": k})).collect::<Vec<_>>(),
                    }),
                ),
            })
        }
        Command::ClassifyImset { file, n, budget } => {
            no_csv(fmt, "classify-imset")?;
            let u = load_imset(file, *n)?;
            let r = classify_with_budget(&u, *budget)?;
            Ok(match fmt {
                Format::Text => format!("{} (degree {})\n{}\n", r.class, r.degree, u),
                _ => with_schema("classify-imset", r.to_json(u.ground())),
            })
        }
        Command::Face { triplet, n } => {
            no_csv(fmt, "face")?;
            let g = ground_for(*n, [triplet.as_str()])?;
            let t = g.parse_triplet(triplet)?;
            let d = face_description(&g, &t)?;
            Ok(match fmt {
                Format::Text => format!(
                    "face of {}: dimension {}, {} extreme rays, {} orthogonal functions\nrays: {}\northogonal: {}\n",
                    g.format_triplet(&t),
                    d.dimension,
                    d.extreme_set.len(),
                    d.orthogonal_set.len(),
                    d.extreme_set.iter().map(|e| g.format_elementary(e)).collect::<Vec<_>>().join(" "),
                    d.orthogonal_set.iter().map(|f| f.descriptor(&g)).collect::<Vec<_>>().join(" "),
                ),
                _ => with_schema("face", d.to_json(&g)),
            })
        }
        Command::FaceOf { file, n } => {
            no_csv(fmt, "face-of")?;
            let u = load_imset(file, *n)?;
            let g = u.ground();
            let rays = face_of_structural(&u)?;
            let names: Vec<String> = rays.iter().map(|e| g.format_elementary(e)).collect();
            Ok(match fmt {
                Format::Text => format!("{} extreme rays\n{}\n", names.len(), names.join(" ")),
                _ => with_schema("face-of", json!({ "n": g.n(), "imset": u.to_json(), "extreme_rays": names })),
            })
        }
        Command::CiModel { dist, imset, tol, normalize, n } => {
            no_csv(fmt, "ci-model")?;
            let model = if let Some(path) = dist {
                let p = load_table(path, *normalize)?;
                ci_model_of_p(&p, *tol)?
            } else {
                let path = imset.as_ref().ok_or_else(|| input("need --dist or --imset"))?;
                ci_model_of_imset(&load_imset(path, *n)?)?
            };
            Ok(match fmt {
                Format::Text => model_text(&model),
                _ => with_schema("ci-model", model_json(&model)),
            })
        }
        Command::Closure { file, n } => {
            no_csv(fmt, "closure")?;
            let v = read_json(file)?;
            let items = v.as_array().ok_or_else(|| input("expected a JSON array of statements"))?;
            let texts: Vec<&str> = items
                .iter()
                .map(|x| x.as_str().ok_or_else(|| input("statements must be strings")))
                .collect::<Result<_, _>>()?;
            let g = ground_for(*n, texts.iter().copied())?;
            let ts = texts.iter().map(|t| g.parse_triplet(t)).collect::<Result<Vec<_>, _>>()?;
            let model = semigraphoid_closure(&g, ts);
            Ok(match fmt {
                Format::Text => model_text(&model),
                _ => with_schema("closure", model_json(&model)),
            })
        }
        Command::Reduce { file, n } => {
            no_csv(fmt, "reduce")?;
            let v = read_json(file)?;
            let mut keys = Vec::new();
            for side in ["lhs", "rhs"] {
                keys.extend(object_keys(&v[side]));
            }
            let g = ground_for(*n, keys)?;
            let z = Move::from_json(&g, &v)?;
            let steps = reduce_to_basis(&z)?;
            Ok(match fmt {
                Format::Text => {
                    let mut s = format!("{z}\n");
                    for (m, k) in &steps {
                        s.push_str(&format!("{k:+} x ({m})\n"));
                    }
                    s
                }
                _ => with_schema(
                    "reduce",
                    json!({
                        "move": z.to_json(),
                        "combination": steps.iter().map(|(m, k)| json!({"coefficient": k, "basic_move": m.to_json()})).collect::<Vec<_>>(),
                    }),
                ),
            })
        }
        Command::Relations { n, k, degree_max, coeff_bound } => {
            let g = GroundSet::new(*n)?;
            let rels = enumerate_small_relations(&g, *k, *coeff_bound, *degree_max)?;
            Ok(match fmt {
                Format::Csv => {
                    let mut s = String::from("k,m,degree,classification,relation\n");
                    for r in &rels {
                        s.push_str(&format!("{},{},{},{},\"{}\"\n", r.k, r.m, r.degree, r.classification, r.relation));
                    }
                    s
                }
                Format::Text => rels
                    .iter()
                    .map(|r| format!("[{}] {}\n", r.classification, r.relation))
                    .collect(),
                Format::Json => with_schema(
                    "relations",
                    json!({
                        "n": n,
                        "k": k,
                        "degree_max": degree_max,
                        "coeff_bound": coeff_bound,
                        "count": rels.len(),
                        "relations": rels.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    }),
                ),
            })
        }
        Command::Markov { n, degree_cap, sub, tie_break, memory_mib } => {
            let g = GroundSet::new(*n)?;
            let config = match sub {
                Some(t) => subconfiguration(&g, &g.parse_triplet(t)?)?,
                None => Configuration::full(&g)?,
            };
            let mut opts = MarkovOptions::new(*degree_cap);
            opts.tie_break = match tie_break {
                TieBreakArg::Least => TieBreak::Least,
                TieBreakArg::Greatest => TieBreak::Greatest,
            };
            if let Some(m) = memory_mib {
                opts.memory_budget = m << 20;
            }
            let r = markov_basis_with(&config, &opts)?;
            Ok(match fmt {
                Format::Csv => r.to_csv(),
                Format::Text => {
                    let mut s = String::new();
                    for (d, c) in &r.per_degree_counts {
                        s.push_str(&format!("degree {d}: {c} representatives\n"));
                    }
                    for m in &r.representatives {
                        s.push_str(&format!("{m}\n"));
                    }
                    s.push_str(&format!("complete: {}\n", r.complete));
                    s
                }
                Format::Json => {
                    let mut body = r.to_json();
                    body["n"] = (*n).into();
                    if let Some(t) = sub {
                        body["sub"] = t.as_str().into();
                    }
                    with_schema("markov", body)
                }
            })
        }
        Command::Verify { suite } => {
            no_csv(fmt, "verify")?;
            let suite = match suite {
                SuiteArg::All => Suite::All,
                SuiteArg::Quick => Suite::Quick,
            };
            let results = run_suite(suite);
            let passed = results.iter().all(|r| r.passed);
            let out = match fmt {
                Format::Text => results
                    .iter()
                    .map(|r| format!("{} {:>2} {}: {}\n", if r.passed { "PASS" } else { "FAIL" }, r.id, r.name, r.detail))
                    .collect(),
                _ => with_schema(
                    "verify",
                    json!({
                        "passed": passed,
                        "checks": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    }),
                ),
            };
            if passed {
                Ok(out)
            } else {
                Err(Failure::Verify(out))
            }
        }
    }
}

fn load_table(path: &Path, normalize: bool) -> Result<JointTable, Failure> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        Ok(JointTable::from_csv(&text, normalize)?)
    } else {
        Ok(JointTable::from_json(&read_json(path)?, normalize)?)
    }
}

fn construct(
    family: Family,
    inputs: &[PathBuf],
    n: Option<usize>,
    k: Option<usize>,
    set: Option<&str>,
) -> Result<SetFunction, Failure> {
    let need_n = || n.ok_or_else(|| input("this family needs --n"));
    let one = || -> Result<SetFunction, Failure> {
        match inputs {
            [p] => load_set_function(p, None),
            _ => Err(input("this family takes exactly one input function")),
        }
    };
    let subset = |g: &GroundSet| -> Result<imset::Subset, Failure> {
        Ok(g.parse_subset(set.ok_or_else(|| input("this family needs --set"))?)?)
    };
    Ok(match family {
        Family::MaxK => {
            let g = GroundSet::new(need_n()?)?;
            constructors::max_k(&g, k.ok_or_else(|| input("max-k needs --k"))?)?
        }
        Family::Indicator => {
            let g = GroundSet::new(need_n()?)?;
            constructors::indicator_superset(&g, subset(&g)?)?
        }
        Family::Reflect => constructors::reflect(&one()?),
        Family::Marginal => {
            let g = GroundSet::new(need_n()?)?;
            constructors::extend_marginal(&one()?, &g, subset(&g)?)?
        }
        Family::ZeroSlice => constructors::extend_zero_slice(&one()?)?,
        Family::ModularTop => constructors::extend_modular_top(&one()?)?,
        Family::Duplicate => constructors::duplicate_coordinate(&one()?)?,
        Family::Product => {
            let [p, q] = inputs else {
                return Err(input("product takes two input functions"));
            };
            let g = GroundSet::new(need_n()?)?;
            constructors::product(&load_set_function(p, None)?, &load_set_function(q, None)?, &g, subset(&g)?)?
        }
        Family::Example => constructors::reino_m(),
    })
}

fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (text, code) = match run(&cli) {
        Ok(s) => (s, 0),
        Err(Failure::Verify(s)) => (s, 1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(3);
        }
    };
    if let Err(e) = emit(&text, cli.output.as_deref()).or_else(|e| match e.kind() {
        std::io::ErrorKind::BrokenPipe => Ok(()),
        _ => Err(e),
    }) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
