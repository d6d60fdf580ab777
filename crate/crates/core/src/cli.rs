//! Command-line front end: subcommands, report emission and the batch runner.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::constructs::{self, BlockParams};
use crate::error::{Error, Result};
use crate::fraclp::{intersection_number, transversal_report};
use crate::io::{self, Provenance};
use crate::pseudofield::{self, DefinableSpec, PrimeField};
use crate::rational::{self, parse_q, Q};
use crate::setfam::{self, RationalWeights, SetFamily, TupleMode};
use crate::sqfint::{self, GSystem, SpecialFormula};
use crate::typecount::dividing::{internal_dividing_check, DeltaFormula, NODE_BUDGET};
use crate::typecount::hyper::find_kddd;
use crate::typecount::{self, CountOptions, FiniteStructure, TypeQuery};
use crate::vc;

#[derive(Parser, Debug, Clone)]
#[command(name = "fhplab", version, about = "Fractional Helly experiments on finite set systems")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 0, env = "FHPLAB_SEED")]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "FHPLAB_MAX_GROUND", default_value_t = constructs::DEFAULT_CAP,
          value_parser = positive)]
    pub max_ground: usize,
    #[arg(long, global = true, env = "FHPLAB_MAX_TRIALS", default_value_t = 10_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub max_trials: u64,
    #[arg(long, global = true, env = "FHPLAB_N_CAP", default_value_t = 6,
          value_parser = positive)]
    pub n_cap: usize,
    /// Record wall-clock runtime in the report (breaks byte-identical reruns).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Cons_k, best beta and optional (p,k), beta and weighted checks.
    Analyze(AnalyzeArgs),
    /// Intersection number and fractional transversal.
    Lp {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 8)]
        transversal_cap: usize,
    },
    /// VC dimension and dual shatter function.
    Vc {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    /// Generate an explicit construction as a family file.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Square-free arithmetic.
    #[command(subcommand)]
    Sqf(SqfCmd),
    /// Definable families over prime fields.
    #[command(subcommand)]
    Ff(FfCmd),
    /// Positive types and f_phi over finite structures.
    #[command(subcommand, name = "count-types")]
    CountTypes(TypesCmd),
    /// Run a list of commands, one report file per entry.
    Batch {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub alpha: String,
    /// Also check the (p,k)-property.
    #[arg(long)]
    pub pk: Option<usize>,
    /// (p,k) over strictly increasing index tuples.
    #[arg(long)]
    pub distinct: bool,
    /// Fail (exit 1) if alpha holds but no beta-fraction subfamily intersects.
    #[arg(long)]
    pub beta: Option<String>,
    /// JSON object index -> weight for the weighted check.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum ConstructCmd {
    Block {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        pprime: usize,
        #[arg(long, default_value_t = 2)]
        kprime: usize,
        /// Defaults to half of prod_(j<k)(1 - j/r).
        #[arg(long)]
        alpha: Option<String>,
    },
    Grid {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    Cross {
        #[arg(long)]
        n: usize,
    },
    Caps {
        #[arg(long)]
        w: usize,
        #[arg(long)]
        depth: usize,
    },
    Shattered {
        #[arg(long)]
        m: usize,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ground: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Uniform members of this size instead of independent density.
        #[arg(long)]
        uniform: Option<usize>,
    },
    /// Rainbow subfamily by seeded random colorings.
    Furedi {
        #[arg(long)]
        family: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SystemInput {
    /// G-system JSON file.
    #[arg(long, conflicts_with = "shifts")]
    pub system: Option<PathBuf>,
    /// Shorthand for x + c_i square-free, e.g. 0,1,2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub shifts: Option<Vec<i64>>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum SqfCmd {
    Count {
        #[command(flatten)]
        input: SystemInput,
        #[arg(long)]
        window: i64,
    },
    Psat {
        #[command(flatten)]
        input: SystemInput,
        #[arg(long)]
        p: Option<u64>,
    },
    Certificate {
        #[arg(long, conflicts_with = "slots")]
        formula: Option<PathBuf>,
        #[arg(long)]
        slots: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        tail_prime: u64,
    },
    Experiment {
        #[arg(long)]
        formula: PathBuf,
        /// JSON list of [c, c'] pairs.
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        window: i64,
        #[arg(long, default_value_t = 10_000)]
        tail_prime: u64,
    },
    Dickson {
        /// Forms a*x+b written a:b, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        forms: Vec<String>,
        #[arg(long, default_value_t = 0)]
        bound: u64,
    },
    /// Seeded admissible shift systems checked against the density certificate.
    Shifts {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        slots: usize,
        #[arg(long, default_value_t = 60)]
        max_shift: i64,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        windows: Vec<i64>,
        #[arg(long, default_value_t = 10_000)]
        tail_prime: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SpecInput {
    #[arg(long, conflicts_with = "builtin")]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Lines,
    Circles,
}

#[derive(Subcommand, Debug, Clone)]
pub enum FfCmd {
    Family {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        input: SpecInput,
    },
    Fit {
        #[arg(long)]
        count: u128,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1")]
        c: String,
    },
    Fhp {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        input: SpecInput,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: String,
        /// Also fit (dimension, measure) to every member.
        #[arg(long)]
        fit: bool,
    },
    Colorful {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',')]
        specs: Vec<PathBuf>,
        #[arg(long, value_enum, value_delimiter = ',')]
        builtins: Vec<Builtin>,
        #[arg(long)]
        alpha: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct StructureInput {
    #[arg(long, conflicts_with = "family")]
    pub structure: Option<PathBuf>,
    /// Encode a family: points and members as elements, E(x, y) for membership.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// TypeQuery JSON; defaults to E(x; y).
    #[arg(long)]
    pub query: Option<PathBuf>,
    /// Parameter pool; defaults to the family's members or the whole universe.
    #[arg(long, value_delimiter = ',')]
    pub pool: Option<Vec<u64>>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum TypesCmd {
    Types {
        #[command(flatten)]
        input: StructureInput,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    F {
        #[command(flatten)]
        input: StructureInput,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    Probe {
        #[command(flatten)]
        input: StructureInput,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        l_values: Vec<usize>,
        #[arg(long)]
        d: usize,
    },
    Divides {
        #[command(flatten)]
        input: StructureInput,
        /// Parameter tuples of the type, e.g. 3 or 3;4 for two instances.
        #[arg(long, value_delimiter = ';')]
        instances: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        domain: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        over: Vec<u64>,
        /// JSON list of Delta formulas.
        #[arg(long)]
        delta: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    Kddd {
        /// JSON list of edges.
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
}

/// A finished command: its report body and whether every checked property held.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub kind: &'static str,
    pub result: Value,
    pub ok: bool,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn q_arg(s: &str, name: &str) -> Result<Q> {
    parse_q(s).map_err(|e| Error::arg(format!("--{name}: {e}")))
}

fn load_family(path: &Path) -> Result<(SetFamily, Vec<String>)> {
    let p = io::parse_family(path)?;
    Ok((p.family, p.warnings))
}

fn load_weights(path: &Path) -> Result<RationalWeights> {
    let raw: BTreeMap<String, Value> = io::read_json(path)?;
    let mut map = BTreeMap::new();
    for (k, v) in raw {
        let i: usize = k
            .parse()
            .map_err(|_| Error::Parse(format!("weight key {k:?} is not an index")))?;
        let w = match &v {
            Value::String(s) => parse_q(s)?,
            other => rational::from_json(other)
                .ok_or_else(|| Error::Parse(format!("weight for {i} is not a rational")))?,
        };
        map.insert(i, w);
    }
    RationalWeights::new(map)
}

fn analyze(a: &AnalyzeArgs) -> Result<Outcome> {
    let (family, warnings) = load_family(&a.family)?;
    let alpha = q_arg(&a.alpha, "alpha")?;
    let fhp = setfam::check_fhp_instance(&family, a.k, &alpha)?;
    let mut ok = true;
    let mut out = json!({ "fhp": value(&fhp), "warnings": warnings });
    if let Some(p) = a.pk {
        let mode = if a.distinct {
            TupleMode::Distinct
        } else {
            TupleMode::WithRepetition
        };
        let pk = setfam::check_pk_property_mode(&family, p, a.k, mode)?;
        ok &= pk.holds;
        out["pk"] = value(&pk);
    }
    if let Some(b) = &a.beta {
        let beta = q_arg(b, "beta")?;
        let holds = !fhp.hypothesis_holds || fhp.best_beta >= beta;
        ok &= holds;
        out["beta_claim"] = json!({ "beta": rational::to_json(&beta), "holds": holds });
    }
    if let Some(w) = &a.weights {
        let weights = load_weights(w)?;
        let d = a.d.unwrap_or(a.k);
        out["measure"] = value(&setfam::measure_fhp_check(&family, &weights, d, &alpha)?);
    }
    Ok(Outcome {
        kind: "analyze",
        result: out,
        ok,
    })
}

fn lp(family: &Path, cap: usize) -> Result<Outcome> {
    let (family, warnings) = load_family(family)?;
    let i = intersection_number(&family)?;
    let t = transversal_report(&family, cap)?;
    let product = t.tau_star.as_ref().map(|tau| &i.value * tau);
    let holds = i.degenerate || product.as_ref().is_some_and(Q::is_one);
    Ok(Outcome {
        kind: "lp",
        result: json!({
            "intersection_number": value(&i),
            "transversal": value(&t),
            "duality_product": product.as_ref().map(rational::to_json),
            "duality_holds": holds,
            "warnings": warnings,
        }),
        ok: holds,
    })
}

fn construct(c: &ConstructCmd, common: &Common) -> Result<Outcome> {
    let cap = common.max_ground;
    let (family, prov) = match c {
        ConstructCmd::Block {
            k,
            r,
            m,
            gamma,
            pprime,
            kprime,
            alpha,
        } => {
            let mut params = BlockParams {
                k: *k,
                alpha: Q::zero(),
                gamma: q_arg(gamma, "gamma")?,
                p_prime: *pprime,
                k_prime: *kprime,
                r: *r,
                m: *m,
            };
            params.alpha = match alpha {
                Some(s) => q_arg(s, "alpha")?,
                None => params.block_product() / Q::from_integer(2.into()),
            };
            (
                constructs::build_block_counterexample(&params, cap)?,
                Provenance {
                    construction: "block".into(),
                    params: value(&params),
                    seed: None,
                },
            )
        }
        ConstructCmd::Grid { k, m } => (
            constructs::build_tp2_grid(*k, *m, cap)?,
            Provenance {
                construction: "grid".into(),
                params: json!({ "k": k, "m": m }),
                seed: None,
            },
        ),
        ConstructCmd::Cross { n } => (
            constructs::build_two_order_cross(*n, cap)?,
            Provenance {
                construction: "cross".into(),
                params: json!({ "n": n }),
                seed: None,
            },
        ),
        ConstructCmd::Caps { w, depth } => (
            constructs::build_caps_family(*w, *depth, cap)?,
            Provenance {
                construction: "caps".into(),
                params: json!({ "w": w, "depth": depth }),
                seed: None,
            },
        ),
        ConstructCmd::Shattered { m } => (
            constructs::build_shattered_pairs(*m, cap)?,
            Provenance {
                construction: "shattered".into(),
                params: json!({ "m": m }),
                seed: None,
            },
        ),
        ConstructCmd::Random {
            n,
            ground,
            density,
            uniform,
        } => {
            if *ground > cap {
                return Err(Error::Cap {
                    what: "random ground set".into(),
                    needed: *ground as u128,
                    cap: cap as u128,
                });
            }
            let fam = match uniform {
                Some(k) => constructs::random_uniform_family(common.seed, *n, *ground, *k)?,
                None => {
                    if !(0.0..=1.0).contains(density) {
                        return Err(Error::arg("--density must lie in [0, 1]"));
                    }
                    constructs::random_family(common.seed, *n, *ground, *density)?
                }
            };
            (
                fam,
                Provenance {
                    construction: "random".into(),
                    params: json!({ "n": n, "ground": ground, "density": density, "uniform": uniform }),
                    seed: Some(common.seed),
                },
            )
        }
        ConstructCmd::Furedi { family } => {
            let (fam, _) = load_family(family)?;
            let found = constructs::furedi_extract(&fam, common.max_trials, common.seed)?;
            return Ok(Outcome {
                kind: "furedi",
                ok: found.is_some(),
                result: json!({ "extraction": found.as_ref().map(value) }),
            });
        }
    };
    Ok(Outcome {
        kind: "family",
        result: Value::String(io::emit_family(&family, Some(&prov))),
        ok: true,
    })
}

fn load_system(input: &SystemInput) -> Result<GSystem> {
    match (&input.system, &input.shifts) {
        (Some(path), _) => {
            let sys: GSystem = io::read_json(path)?;
            GSystem::new(sys.formula, sys.c, sys.c_prime)
        }
        (None, Some(shifts)) => Ok(GSystem::shifts(shifts)),
        (None, None) => Err(Error::arg("give --system or --shifts")),
    }
}

fn sqf(c: &SqfCmd, common: &Common) -> Result<Outcome> {
    let (kind, result, ok) = match c {
        SqfCmd::Count { input, window } => {
            let sys = load_system(input)?;
            let count = sqfint::count_solutions_window(&sys, *window)?;
            ("sqf.count", json!({ "system": value(&sys), "window": window, "count": count }), true)
        }
        SqfCmd::Psat { input, p } => {
            let sys = load_system(input)?;
            let primes = match p {
                Some(p) => vec![*p],
                None => sqfint::primes_up_to(sys.formula.cutoff().max(2)),
            };
            let checks = primes
                .iter()
                .map(|&p| sqfint::p_satisfiable(&sys, p))
                .collect::<Result<Vec<_>>>()?;
            let ok = checks.iter().all(|c| c.sat);
            ("sqf.psat", json!({ "system": value(&sys), "checks": value(&checks), "satisfiable": ok }), ok)
        }
        SqfCmd::Certificate {
            formula,
            slots,
            tail_prime,
        } => {
            let f = match (formula, slots) {
                (Some(path), _) => io::read_json::<SpecialFormula>(path)?,
                (None, Some(n)) => SpecialFormula::squarefree_shifts(*n),
                (None, None) => return Err(Error::arg("give --formula or --slots")),
            };
            let cert = sqfint::density_certificate(&f, *tail_prime)?;
            let ok = !cert.degenerate;
            ("sqf.certificate", value(&cert), ok)
        }
        SqfCmd::Experiment {
            formula,
            params,
            k,
            alpha,
            window,
            tail_prime,
        } => {
            let f: SpecialFormula = io::read_json(formula)?;
            let ps: Vec<(Vec<i64>, Vec<i64>)> = io::read_json(params)?;
            let alpha = q_arg(alpha, "alpha")?;
            let r = sqfint::sqf_fhp_experiment(&f, &ps, *k, &alpha, *window, *tail_prime)?;
            ("sqf.experiment", value(&r), true)
        }
        SqfCmd::Dickson { forms, bound } => {
            let parsed = forms
                .iter()
                .map(|s| {
                    let (a, b) = s
                        .split_once(':')
                        .ok_or_else(|| Error::arg(format!("form {s:?} is not a:b")))?;
                    let a = a.trim().parse().map_err(|_| Error::arg(format!("bad coefficient in {s:?}")))?;
                    let b = b.trim().parse().map_err(|_| Error::arg(format!("bad constant in {s:?}")))?;
                    Ok((a, b))
                })
                .collect::<Result<Vec<(i64, i64)>>>()?;
            let r = sqfint::dickson_admissible(&parsed, *bound)?;
            let ok = r.admissible;
            ("sqf.dickson", value(&r), ok)
        }
        SqfCmd::Shifts {
            count,
            slots,
            max_shift,
            windows,
            tail_prime,
        } => {
            let cert = sqfint::density_certificate(&SpecialFormula::squarefree_shifts(*slots), *tail_prime)?;
            let mut r = crate::combin::rng(common.seed);
            let mut rows = Vec::new();
            let mut ok = true;
            for _ in 0..*count {
                let sys = sqfint::random_admissible_shifts(&mut r, *slots, *max_shift)?;
                for &t in windows {
                    let c = sqfint::count_solutions_window(&sys, t)?;
                    let floor_err = sqfint::error_term_floor(&sys, t);
                    let bound = &cert.epsilon_lower * rational::qi(t) - rational::qi(floor_err);
                    let holds = rational::qi(c) >= bound;
                    ok &= holds;
                    rows.push(json!({
                        "shifts": sys.c,
                        "window": t,
                        "count": c,
                        "lower_bound": rational::to_json(&bound),
                        "error_term": sqfint::error_term(&sys, t),
                        "holds": holds,
                    }));
                }
            }
            ("sqf.shifts", json!({ "certificate": value(&cert), "checks": rows }), ok)
        }
    };
    Ok(Outcome { kind, result, ok })
}

fn load_spec(input: &SpecInput) -> Result<DefinableSpec> {
    match (&input.spec, input.builtin) {
        (Some(path), _) => io::read_json(path),
        (None, Some(b)) => Ok(builtin_spec(b)),
        (None, None) => Err(Error::arg("give --spec or --builtin")),
    }
}

fn builtin_spec(b: Builtin) -> DefinableSpec {
    match b {
        Builtin::Lines => pseudofield::lines_spec(),
        Builtin::Circles => pseudofield::circles_spec(),
    }
}

fn ff(c: &FfCmd) -> Result<Outcome> {
    let (kind, result, ok) = match c {
        FfCmd::Family { p, input } => {
            let field = PrimeField::new(*p)?;
            let fam = pseudofield::definable_family(&field, &load_spec(input)?)?;
            let mut v: Value = serde_json::from_str(&io::emit_family(&fam.family, None)).expect("family JSON");
            v["empty_parameter_set"] = json!(fam.empty_parameter_set());
            ("ff.family", v, true)
        }
        FfCmd::Fit { count, q, n, c } => {
            let fit = pseudofield::dim_meas_fit(*count, *q, *n, &q_arg(c, "c")?)?;
            let ok = fit.within_bound && !fit.ambiguous;
            ("ff.fit", value(&fit), ok)
        }
        FfCmd::Fhp {
            p,
            input,
            k,
            alpha,
            fit,
        } => {
            let field = PrimeField::new(*p)?;
            let spec = load_spec(input)?;
            let alpha = q_arg(alpha, "alpha")?;
            let r = pseudofield::ff_fhp_experiment(&field, &spec, *k, &alpha)?;
            let mut v = value(&r);
            if *fit {
                let fam = pseudofield::definable_family(&field, &spec)?;
                let fits = (0..fam.family.len())
                    .map(|i| {
                        pseudofield::dim_meas_fit(
                            fam.family.member(i).count_ones(..) as u128,
                            *p,
                            fam.dim as u32,
                            &Q::one(),
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                v["fits"] = value(&fits);
            }
            ("ff.fhp", v, true)
        }
        FfCmd::Colorful {
            p,
            specs,
            builtins,
            alpha,
        } => {
            let field = PrimeField::new(*p)?;
            let mut all = specs
                .iter()
                .map(|s| io::read_json::<DefinableSpec>(s))
                .collect::<Result<Vec<_>>>()?;
            all.extend(builtins.iter().map(|&b| builtin_spec(b)));
            let r = pseudofield::colorful_ff_experiment(&field, &all, &q_arg(alpha, "alpha")?)?;
            ("ff.colorful", value(&r), true)
        }
    };
    Ok(Outcome { kind, result, ok })
}

fn membership_query() -> TypeQuery {
    use crate::formula::{var, Formula};
    TypeQuery::new(
        Formula::Rel {
            name: "E".into(),
            args: vec![var("x"), var("y")],
        },
        &["x"],
        &["y"],
    )
}

fn load_structure(input: &StructureInput) -> Result<(FiniteStructure, TypeQuery, Vec<u64>)> {
    let (s, default_pool) = match (&input.structure, &input.family) {
        (Some(path), _) => {
            let s: FiniteStructure = io::read_json(path)?;
            let pool = (0..crate::formula::Interpretation::size(&s)).collect();
            (s, pool)
        }
        (None, Some(path)) => FiniteStructure::from_family(&load_family(path)?.0)?,
        (None, None) => return Err(Error::arg("give --structure or --family")),
    };
    let query = match &input.query {
        Some(path) => io::read_json(path)?,
        None => membership_query(),
    };
    let pool = input.pool.clone().unwrap_or(default_pool);
    Ok((s, query, pool))
}

fn count_types(c: &TypesCmd, common: &Common) -> Result<Outcome> {
    let opts = CountOptions {
        seed: common.seed,
        ..CountOptions::default()
    };
    let (kind, result, ok) = match c {
        TypesCmd::Types { input, k, cap } => {
            let (s, q, pool) = load_structure(input)?;
            let types = typecount::enumerate_types(&s, &q, &pool, *k, *cap)?;
            ("types.enumerate", json!({ "count": types.len(), "types": value(&types), "caveat": typecount::AMBIENT_CAVEAT }), true)
        }
        TypesCmd::F { input, m, k, l } => {
            let (s, q, pool) = load_structure(input)?;
            let r = typecount::f_phi(&s, &q, *m, *k, &pool, *l, &opts)?;
            ("types.f_phi", value(&r), true)
        }
        TypesCmd::Probe {
            input,
            m,
            k,
            l_values,
            d,
        } => {
            let (s, q, pool) = load_structure(input)?;
            let r = typecount::power_saving_probe(&s, &q, *m, *k, &pool, l_values, *d, &opts)?;
            ("types.probe", value(&r), true)
        }
        TypesCmd::Divides {
            input,
            instances,
            domain,
            over,
            delta,
            n,
            k,
        } => {
            if *n > common.n_cap {
                return Err(Error::Cap {
                    what: "sequence length".into(),
                    needed: *n as u128,
                    cap: common.n_cap as u128,
                });
            }
            let (s, q, _) = load_structure(input)?;
            let params = instances
                .iter()
                .map(|t| {
                    t.split(',')
                        .map(|x| x.trim().parse::<u64>().map_err(|_| Error::arg(format!("bad instance {t:?}"))))
                        .collect::<Result<Vec<u64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut elems: Vec<u64> = params.iter().flatten().copied().collect();
            elems.sort_unstable();
            elems.dedup();
            let types = typecount::enumerate_types(&s, &q, &elems, params.len().max(1), 100_000)?;
            let Some(p) = types.into_iter().find(|t| {
                t.instances.len() == params.len() && params.iter().all(|b| t.instances.contains(b))
            }) else {
                return Err(Error::arg("the given instances are not a consistent type"));
            };
            let delta: Vec<DeltaFormula> = match delta {
                Some(path) => io::read_json(path)?,
                None => Vec::new(),
            };
            let r = internal_dividing_check(&s, &q, &p, domain, over, &delta, *n, *k, NODE_BUDGET)?;
            ("types.divides", value(&r), true)
        }
        TypesCmd::Kddd { edges, k, d } => {
            let e: Vec<Vec<usize>> = io::read_json(edges)?;
            let found = find_kddd(&e, *k, *d)?;
            ("types.kddd", json!({ "k": k, "d": d, "parts": found }), true)
        }
    };
    Ok(Outcome { kind, result, ok })
}

#[derive(Debug, Clone, Deserialize)]
struct BatchEntry {
    name: String,
    args: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct BatchConfig {
    entries: Vec<BatchEntry>,
}

fn batch(config: &Path, out_dir: &Path, jobs: usize, common: &Common) -> Result<Outcome> {
    let cfg: BatchConfig = io::read_json(config)?;
    std::fs::create_dir_all(out_dir)?;
    for e in &cfg.entries {
        if e.name.is_empty() || e.name.contains(['/', '\\']) {
            return Err(Error::arg(format!("batch entry name {:?} is not a file name", e.name)));
        }
    }
    let jobs = jobs.max(1);
    let chunk = cfg.entries.len().div_ceil(jobs).max(1);
    let results: Vec<Value> = thread::scope(|s| {
        let handles: Vec<_> = cfg
            .entries
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|e| run_entry(e, out_dir, common)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("batch worker panicked"))
            .collect()
    });
    let ok = results.iter().all(|r| r["exit_code"] == 0);
    Ok(Outcome {
        kind: "batch",
        result: json!({ "entries": results }),
        ok,
    })
}

fn run_entry(e: &BatchEntry, out_dir: &Path, common: &Common) -> Value {
    let mut argv: Vec<OsString> = vec!["fhplab".into()];
    argv.extend(e.args.iter().map(OsString::from));
    let parsed = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(err) => return json!({ "name": e.name, "exit_code": 2, "error": err.to_string() }),
    };
    if matches!(parsed.command, Command::Batch { .. }) {
        return json!({ "name": e.name, "exit_code": 2, "error": "nested batch entries are not allowed" });
    }
    let mut cli = parsed;
    cli.common.timing |= common.timing;
    let ext = match cli.common.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let path = out_dir.join(format!("{}.{ext}", e.name));
    let (code, error) = match execute(&cli).and_then(|(text, ok)| {
        io::write_atomic(&path, &text)?;
        Ok(ok)
    }) {
        Ok(true) => (0, None),
        Ok(false) => (1, None),
        Err(err) => (2, Some(err.to_string())),
    };
    json!({ "name": e.name, "exit_code": code, "report": path.display().to_string(), "error": error })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let common = &cli.common;
    match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Lp {
            family,
            transversal_cap,
        } => lp(family, *transversal_cap),
        Command::Vc { family, sizes, cap } => {
            let (fam, _) = load_family(family)?;
            let r = vc::shatter_report(&fam, *cap, sizes, common.seed)?;
            Ok(Outcome {
                kind: "vc",
                result: value(&r),
                ok: true,
            })
        }
        Command::Construct(c) => construct(c, common),
        Command::Sqf(c) => sqf(c, common),
        Command::Ff(c) => ff(c),
        Command::CountTypes(c) => count_types(c, common),
        Command::Batch {
            config,
            out_dir,
            jobs,
        } => batch(config, out_dir, *jobs, common),
    }
}

/// Runs one parsed command and renders its report; the flag is false when a
/// checked property failed.
pub fn execute(cli: &Cli) -> Result<(String, bool)> {
    let start = Instant::now();
    let out = dispatch(cli)?;
    let c = &cli.common;
    if let (Value::String(text), Format::Json) = (&out.result, c.format) {
        // family files are emitted verbatim so they parse back bit-exactly
        return Ok((text.clone(), out.ok));
    }
    let result = match out.result {
        Value::String(text) => serde_json::from_str(&text).expect("family file is JSON"),
        other => other,
    };
    let mut report = if out.kind == "family" {
        result
    } else {
        io::envelope(
            out.kind,
            &command_name(&cli.command),
            c.seed,
            json!({ "max_ground": c.max_ground, "max_trials": c.max_trials, "n_cap": c.n_cap }),
            result,
        )
    };
    if c.timing {
        report["runtime_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    let text = match c.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => io::to_csv(&report)?,
    };
    Ok((text, out.ok))
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Analyze(_) => "analyze",
        Command::Lp { .. } => "lp",
        Command::Vc { .. } => "vc",
        Command::Construct(_) => "construct",
        Command::Sqf(_) => "sqf",
        Command::Ff(_) => "ff",
        Command::CountTypes(_) => "count-types",
        Command::Batch { .. } => "batch",
    }
    .to_string()
}

/// Process entry point: 0 on success, 1 when a checked property fails, 2 on
/// usage or input errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok((text, ok)) => {
            match &cli.common.out {
                Some(path) => {
                    if let Err(e) = io::write_atomic(path, &text) {
                        eprintln!("error: {e}");
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
