//! Command-line front end: parse instances, run analyses, emit text, CSV,
//! and DOT reports, and generate gadget instances.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::bias::{build_model, BiasModel};
use crate::distribution::{
    cdf_at, cost_distribution_sparse, enumerate_feasible_paths, law_from_paths, monte_carlo,
    CdfBackend, Caps, DEFAULT_DENSE_CAP, DEFAULT_ENUM_LIMIT, DEFAULT_SPARSE_CAP,
};
use crate::generators::{gen_akerlof, gen_exponential_chain, gen_ksum, gen_partition};
use crate::graph::{parse_task_graph, validate, Severity, ValidationReport};
use crate::moments::{chebyshev_reward, moments};
use crate::rational::{approx_f64, format_rational, parse_rational};
use crate::structural::path_count_bounds;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "biaswalk", version, about = "Exact analysis of present-biased agents on weighted task DAGs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summarize an instance: sizes, distances, feasible edges, structure.
    Analyze {
        file: PathBuf,
        /// Cap for the exhaustive feedback-vertex search.
        #[arg(long, default_value_t = 6)]
        fvs_cap: usize,
    },
    /// Exact or sampled law of the traversal cost (CSV), or a CDF value.
    Distribution {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Threshold ratio P/Q: print Pr(cost <= floor(threshold * d(s,t))).
        #[arg(long)]
        threshold: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SPARSE_CAP)]
        sparse_cap: usize,
        #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
        dense_cap: u128,
        #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
        enum_limit: usize,
    },
    /// Minimum realized cost, its probability, and the ratio to d(s,t).
    Mci { file: PathBuf },
    /// Maximum positive-probability cost and the ratio to d(s,t).
    Maxci { file: PathBuf },
    /// Exact expectation and variance of the cost and its ratio.
    Moments { file: PathBuf },
    /// Chebyshev motivation reward at the given confidence.
    Reward {
        file: PathBuf,
        #[arg(long, default_value = "3/4")]
        confidence: String,
    },
    /// Emit a gadget instance in the canonical text format.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Emit DOT with feasible edges bold and infeasible edges dashed.
    ExportDot { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// Procrastination chain of day vertices.
    Akerlof {
        #[arg(long, default_value_t = 5)]
        days: u32,
        #[arg(long, default_value_t = 6)]
        review_cost: u64,
        #[arg(long, default_value_t = 3)]
        distraction_cost: u64,
        #[arg(long, default_value = "1/2")]
        beta: String,
    },
    /// Chain of k branch gadgets with 2^k equiprobable distinct costs.
    Expchain {
        #[arg(long)]
        k: u32,
        /// Per-gadget weight budget A; defaults to 2^k + 2.
        #[arg(long)]
        big_a: Option<i128>,
    },
    /// Diamond chain encoding partition counting over the given numbers.
    Partition {
        #[arg(required = true)]
        values: Vec<u64>,
    },
    /// Gadget chain encoding k-sum selection.
    Ksum {
        /// One comma-separated set per flag, e.g. --set 1,2 --set 3.
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
        #[arg(long)]
        target_sum: i64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Sparse,
    Dense,
    Enumerate,
    Montecarlo,
}

/// Process exit code for an error: 2 parse, 3 validation, 4 cap exceeded,
/// 5 domain (usage errors exit 1 before reaching here).
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        Error::InvalidGraph(_) | Error::Cycle | Error::InvalidPolicy(_) => 3,
        Error::CapExceeded(_) => 4,
        Error::ZeroOptimalDistance(_) | Error::Domain(_) | Error::Generator(_) => 5,
    }
}

fn validation_failure(report: &ValidationReport) -> Error {
    let msgs: Vec<String> = report
        .issues
        .iter()
        .filter(|i| i.severity == Severity::Error)
        .map(|i| i.message.clone())
        .collect();
    Error::InvalidGraph(msgs.join("; "))
}

struct LoadedModel {
    model: BiasModel,
    report: ValidationReport,
}

fn load_model(path: &PathBuf) -> Result<LoadedModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { line: 0, msg: format!("cannot read {}: {e}", path.display()) })?;
    let inst = parse_task_graph(&text)?;
    let report = validate(&inst.graph);
    if !report.ok {
        return Err(validation_failure(&report));
    }
    let policy = if inst.explicit_policy.is_empty() { None } else { Some(&inst.explicit_policy) };
    let model = build_model(&inst.graph, &inst.beta, policy)?;
    Ok(LoadedModel { model, report })
}

fn rat_line(label: &str, q: &BigRational) -> String {
    format!("{label} = {} ({:.6})\n", format_rational(q), approx_f64(q))
}

fn require_ratio(r: Option<BigRational>) -> Result<BigRational> {
    r.ok_or_else(|| Error::ZeroOptimalDistance("d(s,t) = 0, the cost ratio is undefined".into()))
}

fn distribution_csv(entries: &BTreeMap<BigInt, BigRational>) -> String {
    let mut out = String::from("cost,probability_num,probability_den\n");
    for (c, p) in entries {
        let _ = writeln!(out, "{c},{},{}", p.numer(), p.denom());
    }
    out
}

/// Runs a parsed command and returns the stdout payload.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Analyze { file, fvs_cap } => cmd_analyze(file, *fvs_cap),
        Command::Distribution { file, mode, threshold, samples, seed, sparse_cap, dense_cap, enum_limit } => {
            let caps = Caps { sparse_states: *sparse_cap, dense_cells: *dense_cap, enum_limit: *enum_limit };
            cmd_distribution(file, *mode, threshold.as_deref(), *samples, *seed, caps)
        }
        Command::Mci { file } => {
            let lm = load_model(file)?;
            let r = crate::distribution::min_cost_of_irrationality(&lm.model)?;
            let ratio = require_ratio(r.ratio)?;
            let p = r.prob.expect("minimum DP always reports a probability");
            Ok(format!("W={} p={} ratio={}\n", r.cost, format_rational(&p), format_rational(&ratio)))
        }
        Command::Maxci { file } => {
            let lm = load_model(file)?;
            let r = crate::distribution::max_cost_of_irrationality(&lm.model)?;
            let ratio = require_ratio(r.ratio)?;
            Ok(format!("W={} ratio={}\n", r.cost, format_rational(&ratio)))
        }
        Command::Moments { file } => {
            let lm = load_model(file)?;
            let rep = moments(&lm.model)?;
            let mut out = String::new();
            out += &rat_line("E_C", &rep.e_c);
            out += &rat_line("Var_C", &rep.var_c);
            match (&rep.e_x, &rep.var_x) {
                (Some(ex), Some(vx)) => {
                    out += &rat_line("E_X", ex);
                    out += &rat_line("Var_X", vx);
                }
                _ => out += "E_X, Var_X unavailable: zero optimal distance\n",
            }
            Ok(out)
        }
        Command::Reward { file, confidence } => {
            let lm = load_model(file)?;
            let conf = parse_rational(confidence)?;
            let reward = chebyshev_reward(&lm.model, &conf)?;
            Ok(rat_line("reward", &reward))
        }
        Command::Generate { family } => cmd_generate(family),
        Command::ExportDot { file } => {
            let lm = load_model(file)?;
            Ok(render_dot(&lm.model))
        }
    }
}

fn cmd_analyze(file: &PathBuf, fvs_cap: usize) -> Result<String> {
    let lm = load_model(file)?;
    let m = &lm.model;
    let g = m.graph();
    let table = m.perception();
    let structure = path_count_bounds(g, fvs_cap)?;
    let mut out = String::new();
    let _ = writeln!(out, "vertices = {}", g.vertex_count());
    let _ = writeln!(out, "edges = {}", g.edge_count());
    let _ = writeln!(out, "beta = {}", format_rational(m.beta()));
    let _ = writeln!(out, "d(s,t) = {}", m.optimal_distance());
    out += &rat_line("zeta(s)", &table.perceived[g.source()]);
    let _ = writeln!(out, "feasible_edges = {}", table.feasible_edges.len());
    let _ = writeln!(out, "fes = {}", structure.fes);
    match structure.fvs {
        Some(k) => {
            let _ = writeln!(out, "fvs = {k}");
        }
        None => {
            let _ = writeln!(out, "fvs > {fvs_cap} (search cap)");
        }
    }
    let _ = writeln!(out, "path_bound_fes = {}", structure.path_bound_fes);
    if let Some(b) = &structure.path_bound_fvs {
        let _ = writeln!(out, "path_bound_fvs = {b}");
    }
    for issue in &lm.report.issues {
        let _ = writeln!(out, "warning[{}]: {}", issue.code, issue.message);
    }
    Ok(out)
}

fn cmd_distribution(
    file: &PathBuf,
    mode: Mode,
    threshold: Option<&str>,
    samples: u64,
    seed: u64,
    caps: Caps,
) -> Result<String> {
    let lm = load_model(file)?;
    let m = &lm.model;
    if let Some(t) = threshold {
        let ratio = parse_rational(t)?;
        let backend = match mode {
            Mode::Auto => CdfBackend::Auto,
            Mode::Sparse | Mode::Enumerate => CdfBackend::Sparse,
            Mode::Dense => CdfBackend::Dense,
            Mode::Montecarlo => {
                return Err(Error::Domain("threshold queries need an exact backend".into()))
            }
        };
        let p = cdf_at(m, &ratio, backend, caps)?;
        return Ok(format!("{}\n", format_rational(&p)));
    }
    match mode {
        Mode::Auto | Mode::Sparse => {
            let d = cost_distribution_sparse(m, caps.sparse_states)?;
            Ok(distribution_csv(&d.entries))
        }
        Mode::Dense => Err(Error::Domain(
            "the dense backend answers threshold queries; pass --threshold".into(),
        )),
        Mode::Enumerate => {
            let paths = enumerate_feasible_paths(m, caps.enum_limit)?;
            let d = law_from_paths(&paths, m.optimal_distance().clone());
            Ok(distribution_csv(&d.entries))
        }
        Mode::Montecarlo => {
            let freq = monte_carlo(m, samples, seed);
            let mut out = String::from("cost,count\n");
            for (c, n) in &freq {
                let _ = writeln!(out, "{c},{n}");
            }
            Ok(out)
        }
    }
}

fn cmd_generate(family: &Family) -> Result<String> {
    let inst = match family {
        Family::Akerlof { days, review_cost, distraction_cost, beta } => {
            gen_akerlof(*days, *review_cost, *distraction_cost, parse_rational(beta)?)?
        }
        Family::Expchain { k, big_a } => gen_exponential_chain(*k, big_a.map(BigInt::from))?,
        Family::Partition { values } => gen_partition(values)?,
        Family::Ksum { sets, target_sum } => {
            let parsed: Result<Vec<Vec<u64>>> = sets
                .iter()
                .map(|s| {
                    s.split(',')
                        .map(|x| {
                            x.trim()
                                .parse::<u64>()
                                .map_err(|_| Error::Domain(format!("bad set element '{x}'")))
                        })
                        .collect()
                })
                .collect();
            gen_ksum(&parsed?, *target_sum)?
        }
    };
    Ok(inst.to_canonical_text())
}

fn render_dot(m: &BiasModel) -> String {
    let g = m.graph();
    let table = m.perception();
    let mut out = String::from("digraph taskgraph {\n");
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  \"{}\" [shape=doublecircle];", g.source());
    let _ = writeln!(out, "  \"{}\" [shape=doublecircle];", g.target());
    for (u, v, w) in g.edges() {
        if table.feasible_edges.contains(&(u.to_string(), v.to_string())) {
            let p = m.transition_prob(u, v);
            let _ = writeln!(
                out,
                "  \"{u}\" -> \"{v}\" [style=bold, label=\"{w} (p={}/{})\"];",
                p.numer(),
                p.denom()
            );
        } else {
            let _ = writeln!(out, "  \"{u}\" -> \"{v}\" [style=dashed, label=\"{w}\"];");
        }
    }
    out += "}\n";
    out
}
