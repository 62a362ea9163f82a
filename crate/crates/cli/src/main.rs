use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use flowpoly::geometry::VerifyOptions;
use flowpoly::graph::parse_graph;
use flowpoly::reduction::{stream_leaf_census, visit_dissection, DEFAULT_NODE_CAP};
use flowpoly::suite::{run_suites, Suite, SuiteConfig};
use flowpoly::{
    canonical_reduction_tree, count_flows, ehrhart_polynomial, lidskii_count, lidskii_count_c_form, lidskii_volume,
    reduction_tree_with_source, verify_dissection, DirectedMultigraph, FlowInstance, NetflowVector,
    ReductionOptions,
};

#[derive(Parser)]
#[command(name = "flowpoly", version)]
#[command(about = "Exact volumes and lattice-point counts of flow polytopes")]
struct Cli {
    /// Maximum number of reduction-tree nodes or dissection cells to build
    #[arg(long, global = true, env = "FLOWPOLY_NODE_CAP", default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the integer flows of F_G(a)
    Kostant {
        #[arg(long)]
        graph: PathBuf,
        /// a_1,...,a_n (sink inferred) or all n+1 entries
        #[arg(long, allow_hyphen_values = true)]
        netflow: String,
        #[arg(long, value_enum, default_value_t = Emit::Human)]
        emit: Emit,
    },
    /// Ehrhart polynomial of F_G(a), coefficients from t^0 upward
    Ehrhart {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        netflow: String,
        #[arg(long, value_enum, default_value_t = Emit::Human)]
        emit: Emit,
    },
    /// Evaluate a Lidskii formula
    Lidskii {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: LidskiiMode,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "c")]
        netflow: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long, value_enum, default_value_t = Emit::Human)]
        emit: Emit,
    },
    /// Build the canonical reduction tree R_G, or R_G^c with --c
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        c: Option<String>,
        #[arg(long, value_enum, default_value_t = ReduceEmit::Census)]
        emit: ReduceEmit,
    },
    /// Dissect F_{G(c)}(e_0 - e_{n+1}) into unimodular simplices
    Dissect {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long, value_enum, default_value_t = DissectEmit::Summary)]
        emit: DissectEmit,
        /// With --emit report: also probe all pairs of cells for overlaps (slow)
        #[arg(long)]
        debug_pairwise_disjoint: bool,
    },
    /// Run verification suites over exhaustive families of small graphs
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long)]
        max_edges: Option<usize>,
        /// Largest netflow (or c) entry in the family
        #[arg(long)]
        max_netflow: Option<i64>,
        #[arg(long)]
        debug_pairwise_disjoint: bool,
        /// Skew every closed-formula value by one; the run must then fail
        #[arg(long)]
        debug_corrupt_formula: bool,
        #[arg(long, value_enum, default_value_t = Emit::Human)]
        emit: Emit,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LidskiiMode {
    Volume,
    Count,
    CForm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReduceEmit {
    Dot,
    Json,
    Census,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DissectEmit {
    Cells,
    Summary,
    Report,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Eq2,
    Eq1,
    Thm41,
    Census,
    Noncrossing,
    Dissection,
    InVector,
    Fidelity,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Eq2 => vec![Suite::Eq2],
            SuiteArg::Eq1 => vec![Suite::Eq1],
            SuiteArg::Thm41 => vec![Suite::Thm41],
            SuiteArg::Census => vec![Suite::Census],
            SuiteArg::Noncrossing => vec![Suite::Noncrossing],
            SuiteArg::Dissection => vec![Suite::Dissection],
            SuiteArg::InVector => vec![Suite::InVector],
            SuiteArg::Fidelity => vec![Suite::Fidelity],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

fn load_graph(path: &Path) -> Result<DirectedMultigraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_ints(text: &str, what: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .with_context(|| format!("bad {what} entry {part:?}"))
        })
        .collect()
}

/// Accepts either the first `n` entries (sink inferred) or all `n + 1`.
fn parse_netflow(text: &str, g: &DirectedMultigraph) -> Result<NetflowVector> {
    let values = parse_ints(text, "netflow")?;
    let n = g.vertex_count() - 1;
    if values.len() == n {
        Ok(NetflowVector::from_supplies(&values))
    } else if values.len() == n + 1 {
        Ok(NetflowVector::new(values)?)
    } else {
        bail!("netflow has {} entries; the graph needs {n} or {}", values.len(), n + 1)
    }
}

fn parse_c(text: &str, g: &DirectedMultigraph) -> Result<Vec<i64>> {
    let c = parse_ints(text, "c")?;
    let n = g.vertex_count() - 1;
    if c.len() != n {
        bail!("c has {} entries; the graph needs {n}", c.len());
    }
    Ok(c)
}

fn print_integer(label: &str, value: &BigUint, emit: Emit) {
    match emit {
        Emit::Human => println!("{value}"),
        Emit::Json => println!("{}", json!({ label: value.to_string() })),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let reduction = ReductionOptions { node_cap: cli.node_cap };
    match cli.command {
        Command::Kostant { graph, netflow, emit } => {
            let g = load_graph(&graph)?;
            let a = parse_netflow(&netflow, &g)?;
            print_integer("count", &count_flows(&FlowInstance::new(g, a)?), emit);
        }
        Command::Ehrhart { graph, netflow, emit } => {
            let g = load_graph(&graph)?;
            let a = parse_netflow(&netflow, &g)?;
            let p = ehrhart_polynomial(&FlowInstance::new(g, a)?)?;
            match emit {
                Emit::Human => println!("{p}"),
                Emit::Json => println!("{}", serde_json::to_string(&p)?),
            }
        }
        Command::Lidskii {
            graph,
            mode,
            netflow,
            c,
            emit,
        } => {
            let g = load_graph(&graph)?;
            let value = match (mode, netflow, c) {
                (LidskiiMode::Volume, Some(a), None) => lidskii_volume(&g, &parse_netflow(&a, &g)?)?,
                (LidskiiMode::Count, Some(a), None) => lidskii_count(&g, &parse_netflow(&a, &g)?)?,
                (LidskiiMode::CForm, None, Some(c)) => lidskii_count_c_form(&g, &parse_c(&c, &g)?)?,
                (LidskiiMode::CForm, _, _) => bail!("--mode c-form takes --c"),
                _ => bail!("--mode volume and --mode count take --netflow"),
            };
            let label = match mode {
                LidskiiMode::Volume => "volume",
                _ => "count",
            };
            print_integer(label, &value, emit);
        }
        Command::Reduce { graph, c, emit } => {
            let g = load_graph(&graph)?;
            let c = c.map(|c| parse_c(&c, &g)).transpose()?;
            match emit {
                ReduceEmit::Dot => {
                    let tree = match &c {
                        Some(c) => reduction_tree_with_source(&g, c, &reduction)?,
                        None => canonical_reduction_tree(&g, &reduction)?,
                    };
                    print!("{}", tree.to_dot());
                }
                ReduceEmit::Json => {
                    let census = stream_leaf_census(&g, c.as_deref(), &reduction)?;
                    println!("{}", serde_json::to_string(&census)?);
                }
                ReduceEmit::Census => {
                    let census = stream_leaf_census(&g, c.as_deref(), &reduction)?;
                    for entry in &census.entries {
                        let m: Vec<String> = entry.composition.iter().map(|j| (j + 1).to_string()).collect();
                        let parts: Vec<String> = entry.composition.iter().map(u64::to_string).collect();
                        let suffix = c.as_ref().map(|c| format!("{c:?}")).unwrap_or_default();
                        println!("j=({}) leaf=G[{}]{suffix} count={}", parts.join(","), m.join(","), entry.count);
                    }
                    println!("total leaves: {}", census.total());
                }
            }
        }
        Command::Dissect {
            graph,
            c,
            emit,
            debug_pairwise_disjoint,
        } => {
            let g = load_graph(&graph)?;
            let c = parse_c(&c, &g)?;
            match emit {
                DissectEmit::Cells => {
                    let mut cells = Vec::new();
                    visit_dissection(&g, &c, &reduction, |cell| {
                        cells.push(cell);
                        Ok(())
                    })?;
                    println!("{}", serde_json::to_string(&cells)?);
                }
                DissectEmit::Summary => {
                    let mut per_leaf: Vec<(Vec<u64>, u64)> = Vec::new();
                    let total = visit_dissection(&g, &c, &reduction, |cell| {
                        if per_leaf.len() == cell.leaf {
                            per_leaf.push((cell.composition, 0));
                        }
                        per_leaf[cell.leaf].1 += 1;
                        Ok(())
                    })?;
                    for (leaf, (j, n)) in per_leaf.iter().enumerate() {
                        let parts: Vec<String> = j.iter().map(u64::to_string).collect();
                        println!("leaf {leaf} j=({}) cells={n}", parts.join(","));
                    }
                    println!("cells: {total}");
                }
                DissectEmit::Report => {
                    let options = VerifyOptions {
                        reduction,
                        pairwise_disjoint: debug_pairwise_disjoint,
                    };
                    let report = verify_dissection(&g, &c, &options)?;
                    print!("{report}");
                    if !report.passed() {
                        return Ok(ExitCode::FAILURE);
                    }
                }
            }
        }
        Command::Verify {
            suite,
            max_vertices,
            max_edges,
            max_netflow,
            debug_pairwise_disjoint,
            debug_corrupt_formula,
            emit,
        } => {
            let config = SuiteConfig {
                max_vertices,
                max_edges,
                max_netflow,
                reduction,
                pairwise_disjoint: debug_pairwise_disjoint,
                corrupt: debug_corrupt_formula,
            };
            let outcomes = run_suites(&suite.suites(), &config)?;
            for outcome in &outcomes {
                if outcome.instances == 0 {
                    eprintln!("warning: suite {} ran 0 instances", outcome.suite);
                }
                match emit {
                    Emit::Human => println!("{outcome}"),
                    Emit::Json => println!("{}", serde_json::to_string(outcome)?),
                }
            }
            if !outcomes.iter().all(|o| o.passed()) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn netflow_forms() {
        let g = DirectedMultigraph::complete(4);
        assert_eq!(parse_netflow("1,0,0", &g).unwrap().entries(), &[1, 0, 0, -1]);
        assert_eq!(parse_netflow("1, 0, 0, -1", &g).unwrap().entries(), &[1, 0, 0, -1]);
        assert!(parse_netflow("1,0,0,0", &g).is_err());
        assert!(parse_netflow("1,0", &g).is_err());
        assert!(parse_netflow("1,x,0", &g).is_err());
    }

    #[test]
    fn cli_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
