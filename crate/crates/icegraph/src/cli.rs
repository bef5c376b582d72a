//! Command-line interface.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use icegraph_core::eo_exact::{eo_count, rt};
use icegraph_core::estimates::{report_with, ReportOptions};
use icegraph_core::generators::{random_regular, random_switchings, LatticeSpec, Permutation};
use icegraph_core::mc::MCConfig;
use icegraph_core::numeric::ln_big;
use icegraph_core::spanning::{
    cubic_lattice_tau_limit, ice_ic_tau, square_lattice_tau_limit, tree_count_exact, tree_entropy,
    tree_entropy_float, triangular_tau_limit, tube_tau_limit,
};
use icegraph_core::transfer::TransferSystem;
use icegraph_core::{Error, Graph};

use crate::experiment::{pearson, run_experiment_corrupt};
use crate::io::{read_graph, to_edge_list, ParseError};
use crate::output::{key_values, Cell};
use crate::{parallel, tables};

#[derive(Debug, Parser)]
#[command(name = "icegraph", version, about = "Residual entropy and spanning-tree entropy of graphs")]
pub struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for Monte-Carlo sampling (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Emit CSV instead of aligned text.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print numbers with full precision instead of 6 decimals.
    #[arg(long, global = true)]
    pub full_precision: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    Tubes,
    ThreeCycles,
    Cliques,
    Hypercubes,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph: `gen torus 16 16`, `gen hypercube 8`,
    /// `gen corrupt --in g.txt --switches 5000`, `gen random-regular 100 4`.
    Gen {
        #[arg(required = true, num_args = 1..)]
        family: Vec<String>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        switches: Option<usize>,
    },
    /// Exact number of Eulerian orientations and the residual entropy.
    ExactEo {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Monte-Carlo estimate of the residual entropy.
    McEo {
        #[arg(long = "in")]
        input: PathBuf,
        /// Trials per batch.
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1000)]
        batches: usize,
    },
    /// Spanning-tree count and entropy, or a lattice constant.
    Trees {
        #[arg(long = "in", required_unless_present = "constant")]
        input: Option<PathBuf>,
        /// Require the exact count.
        #[arg(long)]
        exact: bool,
        /// One of square, cubic, triangular, ice-ic, tube:<m>.
        #[arg(long, conflicts_with = "input")]
        constant: Option<String>,
    },
    /// Transfer-matrix limit of ρ(G □ C_ℓ) as ℓ → ∞.
    Transfer {
        /// Fiber family (`cycle 5`, `torus 3 4`) or a graph file.
        #[arg(long, required = true, num_args = 1..)]
        fiber: Vec<String>,
        /// `auto` uses the family's symmetries, `none` only complement.
        #[arg(long, default_value = "auto")]
        gens: String,
    },
    /// Estimates and bounds for a graph.
    Estimates {
        #[arg(long = "in")]
        input: PathBuf,
        /// Run Monte-Carlo when exact counting is not attempted.
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 100)]
        batches: usize,
        /// Largest edge count for exact counting.
        #[arg(long, default_value_t = 80)]
        exact_edges: usize,
    },
    /// Number of regular tournaments on m vertices.
    Rt { m: usize },
    /// Reproduce a table of limits.
    Table {
        name: TableName,
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long)]
        max_d: Option<u32>,
        /// Largest fiber solved by transfer matrix in the three-cycle table.
        #[arg(long, default_value_t = 12)]
        max_fiber: usize,
        /// Trials per batch for Monte-Carlo columns; omitted columns without it.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 100)]
        batches: usize,
    },
    /// Correlation experiment on randomly switched copies of a lattice.
    Experiment {
        /// Base lattice, e.g. `torus 40 40`.
        #[arg(long, required = true, num_args = 1..)]
        base: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        max_switches: usize,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 100)]
        batches: usize,
    },
}

fn tokens(args: &[String]) -> Vec<String> {
    args.iter()
        .flat_map(|a| a.split(|c: char| c.is_whitespace() || c == ':' || c == ','))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Parses `family p1 p2 ...` into a lattice description.
pub fn parse_family(args: &[String]) -> anyhow::Result<LatticeSpec> {
    let toks = tokens(args);
    let (name, rest) = toks.split_first().ok_or_else(|| anyhow!("missing family name"))?;
    let nums: Vec<usize> = rest
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| Error::invalid(format!("bad parameter {t:?}"))))
        .collect::<Result<_, _>>()?;
    let one = |what: &str| -> anyhow::Result<usize> {
        match nums[..] {
            [x] => Ok(x),
            _ => Err(Error::invalid(format!("{what} takes exactly one parameter")).into()),
        }
    };
    let two = |what: &str| -> anyhow::Result<(usize, usize)> {
        match nums[..] {
            [x, y] => Ok((x, y)),
            _ => Err(Error::invalid(format!("{what} takes exactly two parameters")).into()),
        }
    };
    let spec = match name.as_str() {
        "cycle" => LatticeSpec::Cycle(one("cycle")?),
        "clique" => LatticeSpec::Clique(one("clique")?),
        "hypercube" => LatticeSpec::Hypercube(one("hypercube")? as u32),
        "torus" => LatticeSpec::Torus(nums.clone()),
        "triangular" => {
            let (a, b) = two("triangular")?;
            LatticeSpec::TriangularTorus(a, b)
        }
        "ice-ic" => LatticeSpec::IceIc(one("ice-ic")?),
        "ice-ih" => LatticeSpec::IceIh(one("ice-ih")?),
        "clique-cycle" => {
            let (m, len) = two("clique-cycle")?;
            LatticeSpec::CliqueCycle { m, len }
        }
        other => return Err(Error::invalid(format!("unknown family {other:?}")).into()),
    };
    spec.validate()?;
    Ok(spec)
}

fn fiber_and_generators(args: &[String], gens: &str) -> anyhow::Result<(Graph, Vec<Permutation>)> {
    let auto = match gens {
        "auto" => true,
        "none" => false,
        other => bail!(Error::invalid(format!("--gens must be auto or none, got {other:?}"))),
    };
    if let [single] = args {
        let path = Path::new(single);
        if path.is_file() {
            return Ok((read_graph(path)?, Vec::new()));
        }
    }
    let spec = parse_family(args)?;
    let generators = if auto { spec.automorphism_generators()? } else { Vec::new() };
    Ok((spec.make()?, generators))
}

fn mc_config(cli: &Cli, trials: u64, batches: usize) -> MCConfig {
    MCConfig {
        trials_per_batch: trials,
        batches,
        seed: cli.seed,
        workers: cli.threads,
    }
}

fn big_cell(x: &num_bigint::BigUint) -> Cell {
    Cell::Text(x.to_string())
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> anyhow::Result<()> {
    let (csv, full) = (cli.csv, cli.full_precision);
    let text = match &cli.command {
        Command::Gen {
            family,
            input,
            switches,
        } => {
            let toks = tokens(family);
            let g = match toks.first().map(String::as_str) {
                Some("corrupt") => {
                    let path = input.as_ref().ok_or_else(|| Error::invalid("gen corrupt needs --in"))?;
                    let count = switches.ok_or_else(|| Error::invalid("gen corrupt needs --switches"))?;
                    random_switchings(&read_graph(path)?, count, cli.seed)?.0
                }
                Some("random-regular") => {
                    let nums: Vec<usize> = toks[1..]
                        .iter()
                        .map(|t| t.parse().map_err(|_| Error::invalid(format!("bad parameter {t:?}"))))
                        .collect::<Result<_, _>>()?;
                    let [n, d] = nums[..] else {
                        bail!(Error::invalid("random-regular takes n and d"));
                    };
                    random_regular(n, d, cli.seed)?
                }
                _ => parse_family(family)?.make()?,
            };
            to_edge_list(&g)
        }
        Command::ExactEo { input } => {
            let g = read_graph(input)?;
            let eo = eo_count(&g)?;
            let rho = if eo.bits() == 0 {
                Cell::Empty
            } else {
                Cell::Num(ln_big(&eo) / g.n() as f64)
            };
            key_values(
                &[
                    ("n", g.n().into()),
                    ("edges", g.edge_count().into()),
                    ("eo", big_cell(&eo)),
                    ("rho", rho),
                ],
                csv,
                full,
            )
        }
        Command::McEo {
            input,
            trials,
            batches,
        } => {
            let g = read_graph(input)?;
            let est = parallel::estimate(&g, &mc_config(cli, *trials, *batches))?;
            let rho_hat = icegraph_core::estimates::pauling(&g.degrees())?;
            if csv {
                key_values(
                    &[
                        ("n", g.n().into()),
                        ("edges", g.edge_count().into()),
                        ("rho_hat", rho_hat.into()),
                        ("rho", est.rho.into()),
                        ("rho_lo", est.rho_ci.0.into()),
                        ("rho_hi", est.rho_ci.1.into()),
                        ("ns_per_trial", est.ns_per_trial.into()),
                    ],
                    true,
                    full,
                )
            } else {
                let mut pairs: Vec<(&str, Cell)> = vec![
                    ("t_mean", est.t_mean.into()),
                    ("rho", est.rho.into()),
                    ("rho_lo", est.rho_ci.0.into()),
                    ("rho_hi", est.rho_ci.1.into()),
                    ("trials", est.trials_total.into()),
                    ("trials_per_sec", (1e9 / est.ns_per_trial).into()),
                    ("ns_per_trial", est.ns_per_trial.into()),
                ];
                if est.scale_log2 > 0 {
                    pairs.insert(1, ("t_scale_log2", est.scale_log2.into()));
                }
                key_values(&pairs, false, full)
            }
        }
        Command::Trees {
            input,
            exact,
            constant,
        } => {
            if let Some(name) = constant {
                let value = match name.as_str() {
                    "square" => square_lattice_tau_limit(),
                    "cubic" => cubic_lattice_tau_limit()?,
                    "triangular" => triangular_tau_limit(),
                    "ice-ic" => ice_ic_tau()?,
                    other => match other.strip_prefix("tube:") {
                        Some(m) => tube_tau_limit(m.parse().map_err(|_| Error::invalid("tube:<m> needs an integer"))?)?,
                        None => bail!(Error::invalid(format!("unknown constant {other:?}"))),
                    },
                };
                key_values(&[("constant", name.as_str().into()), ("tau", value.into())], csv, full)
            } else {
                let g = read_graph(input.as_ref().expect("clap enforces --in"))?;
                let count = if *exact {
                    let t = tree_count_exact(&g)?;
                    let tau = ln_big(&t) / g.n() as f64;
                    (Some(t), tau)
                } else {
                    let t = if g.n() > 400 { tree_entropy_float(&g)? } else { tree_entropy(&g)? };
                    (t.exact, t.tau)
                };
                let t_cell = count.0.as_ref().map_or(Cell::Empty, big_cell);
                key_values(&[("n", g.n().into()), ("trees", t_cell), ("tau", count.1.into())], csv, full)
            }
        }
        Command::Transfer { fiber, gens } => {
            let (g, generators) = fiber_and_generators(fiber, gens)?;
            let sys = TransferSystem::build(&g, &generators)?;
            key_values(
                &[
                    ("n", g.n().into()),
                    ("orbits", sys.orbits().len().into()),
                    ("lambda", sys.lambda().into()),
                    ("rho_limit", sys.rho_limit().into()),
                ],
                csv,
                full,
            )
        }
        Command::Estimates {
            input,
            mc,
            trials,
            batches,
            exact_edges,
        } => {
            let g = read_graph(input)?;
            let options = ReportOptions {
                exact_edge_limit: *exact_edges,
                mc: mc.then(|| mc_config(cli, *trials, *batches)),
            };
            let r = report_with(&g, &options, parallel::estimate)?;
            let conj = r.conjecture_upper;
            let mc_est = r.rho_mc.as_ref();
            key_values(
                &[
                    ("n", r.n.into()),
                    ("edges", r.edges.into()),
                    ("d_min", r.degree_stats.d_min.into()),
                    ("d_max", r.degree_stats.d_max.into()),
                    ("d_mean", r.degree_stats.d_mean.into()),
                    ("rho_hat", r.rho_hat.into()),
                    ("tau", r.tau.into()),
                    ("rho_tau", r.rho_tau.into()),
                    ("schrijver_upper", r.schrijver_upper.into()),
                    ("las_vergnas_upper", r.las_vergnas_upper.into()),
                    ("new_bound_upper", r.new_bound_upper.into()),
                    ("conjecture_upper", conj.map(|c| c.value).into()),
                    (
                        "conjecture_kind",
                        conj.map_or(Cell::Empty, |c| if c.asymptotic { "asymptotic" } else { "exact" }.into()),
                    ),
                    ("rho_exact", r.rho_exact.into()),
                    ("rho_mc", mc_est.map(|m| m.rho).into()),
                    ("rho_mc_lo", mc_est.map(|m| m.rho_ci.0).into()),
                    ("rho_mc_hi", mc_est.map(|m| m.rho_ci.1).into()),
                ],
                csv,
                full,
            )
        }
        Command::Rt { m } => {
            let value = rt(*m)?;
            key_values(&[("m", (*m).into()), ("rt", big_cell(&value))], csv, full)
        }
        Command::Table {
            name,
            max_m,
            max_d,
            max_fiber,
            trials,
            batches,
        } => {
            let table = match name {
                TableName::Tubes => tables::tubes(max_m.unwrap_or(16))?,
                TableName::ThreeCycles => tables::three_cycles(*max_fiber)?,
                TableName::Cliques => tables::cliques(max_m.unwrap_or(11))?,
                TableName::Hypercubes => {
                    let cfg = trials.map(|t| mc_config(cli, t, *batches));
                    tables::hypercubes(max_d.unwrap_or(14), cfg.as_ref())?
                }
            };
            table.render(csv, full)
        }
        Command::Experiment {
            base,
            max_switches,
            samples,
            trials,
            batches,
        } => {
            let spec = parse_family(base)?;
            let cfg = mc_config(cli, *trials, *batches);
            let rows = match &cli.out {
                Some(path) => {
                    let mut f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    run_experiment_corrupt(&spec, *max_switches, *samples, &cfg, &mut f)?
                }
                None => run_experiment_corrupt(&spec, *max_switches, *samples, &cfg, &mut io::stdout().lock())?,
            };
            let rho: Vec<f64> = rows.iter().map(|r| r.rho_mc).collect();
            let heuristic: Vec<f64> = rows.iter().map(|r| r.rho_tau).collect();
            if let Some(r) = pearson(&rho, &heuristic) {
                eprintln!("pearson(rho_mc, rho_tau) = {}", crate::output::fmt_num(r, full));
            }
            return Ok(());
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Process exit code for an error: 2 for bad input, 3 for resource limits,
/// 4 for non-convergence.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let core = err.downcast_ref::<Error>().or_else(|| match err.downcast_ref::<ParseError>() {
        Some(ParseError::Graph(e)) => Some(e),
        _ => None,
    });
    match core {
        Some(Error::ResourceLimit(_)) => 3,
        Some(Error::NoConvergence(_)) => 4,
        _ => 2,
    }
}
