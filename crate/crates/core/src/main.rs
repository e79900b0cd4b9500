use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ugts::backward::{Mode, SearchConfig};
use ugts::frontend::{self, canonical_graphs, parse_spec, render_dot, SpecFile};
use ugts::graph::{within_path_bound, PathBound};
use ugts::oracle::{self, EnumBounds, SuccessorTable, GUARD};
use ugts::rules::PreparedRule;

const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ugts",
    version,
    about = "Coverability checking for graph transformation systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the backward search from the error graphs and judge every init.
    Check {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::General)]
        mode: ModeArg,
        /// Path bound k, required in restricted mode.
        #[arg(long)]
        path_bound: Option<usize>,
        /// Sweep budget (general mode defaults to 1000).
        #[arg(long)]
        max_iterations: Option<usize>,
        /// Write one DOT file per basis member into this directory.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        #[arg(long)]
        no_postcond_lift: bool,
        /// Use |V|+|E| as the instantiation bound for every rule.
        #[arg(long)]
        coarse_bound: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare backward steps against brute-force predecessor computation
    /// on the bundled dining philosophers rules.
    Selftest {
        /// Largest host size (nodes plus edges) to enumerate.
        #[arg(long, default_value_t = 5)]
        max_size: usize,
    },
    /// Print a named graph of a specification as DOT.
    Show {
        spec: PathBuf,
        #[arg(long)]
        graph: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Restricted,
    General,
}

fn load(path: &Path) -> Result<SpecFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_spec(&text).map_err(|e| format!("{}:{e}", path.display()))
}

#[allow(clippy::too_many_arguments)]
fn check(
    spec: &Path,
    mode: ModeArg,
    path_bound: Option<usize>,
    max_iterations: Option<usize>,
    emit_dot: Option<&Path>,
    no_postcond_lift: bool,
    coarse_bound: bool,
    json: bool,
) -> Result<u8, String> {
    let spec = load(spec)?;
    let mut cfg = match mode {
        ModeArg::General => SearchConfig::general(),
        ModeArg::Restricted => {
            let k = path_bound.ok_or("restricted mode needs --path-bound")?;
            SearchConfig::restricted(k)
        }
    };
    if let Some(k) = path_bound {
        cfg.path_bound = Some(PathBound(k));
    }
    if max_iterations.is_some() {
        cfg.max_iterations = max_iterations;
    }
    cfg.postcond_lift = !no_postcond_lift;
    cfg.coarse_bound = coarse_bound;
    let (state, report) = frontend::check(&spec, &cfg).map_err(|e| e.to_string())?;

    if let Some(dir) = emit_dot {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        for (i, g) in canonical_graphs(state.working.graphs(), &spec.signature)
            .iter()
            .enumerate()
        {
            let name = format!("b{i}");
            let path = dir.join(format!("{name}.dot"));
            fs::write(&path, render_dot(g, &spec.signature, &name))
                .map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }

    if json {
        println!("{}", report.to_json());
    } else {
        let s = &report.stats;
        println!(
            "{} after {} sweeps, {} backward steps, {} ms",
            if report.stationary {
                "stationary"
            } else {
                "budget exhausted"
            },
            s.iterations,
            s.backward_steps,
            s.wall_ms
        );
        println!("basis: {} graphs", report.basis.len());
        for g in &report.basis {
            println!("  {g}");
        }
        for (name, v) in &report.verdicts {
            if cfg.mode == Mode::Restricted {
                let g = spec.graph(name).expect("init resolved");
                if !within_path_bound(g, cfg.path_bound.expect("restricted has a bound")) {
                    println!("{name}: {v} (outside the path bound)");
                    continue;
                }
            }
            println!("{name}: {v}");
        }
    }
    Ok(if !report.stationary {
        EXIT_BUDGET
    } else if report.verdicts.values().all(|v| v == "safe") {
        0
    } else {
        1
    })
}

fn selftest(max_size: usize) -> Result<u8, String> {
    if max_size > GUARD {
        return Err(format!("--max-size is limited to {GUARD}"));
    }
    let spec = frontend::fixtures::dining();
    let rules: Vec<PreparedRule> = spec.rules.iter().cloned().map(PreparedRule::new).collect();
    let k = 3;
    let cfg = SearchConfig::restricted(k);
    let bounds = EnumBounds {
        path_bound: Some(PathBound(k)),
        ..EnumBounds::elements(max_size)
    };
    let hosts = oracle::enumerate_graphs(&spec.signature, bounds).map_err(|e| e.to_string())?;
    println!(
        "{} hosts up to {max_size} elements within path bound {k}",
        hosts.len()
    );
    let table = SuccessorTable::build(&rules, hosts);
    let mut targets: Vec<(String, _)> = spec
        .errors
        .iter()
        .cloned()
        .zip(spec.error_graphs())
        .collect();
    for r in &spec.rules {
        targets.push((format!("{} right side", r.name), r.base.rhs.clone()));
    }
    let mut failed = 0;
    for (name, g) in &targets {
        let d = oracle::agreement(&rules, g, &table, &cfg, max_size);
        if d.is_empty() {
            println!("ok    {name}");
        } else {
            failed += 1;
            println!(
                "FAIL  {name}: {} missing, {} extra",
                d.missing.len(),
                d.extra.len()
            );
        }
    }
    Ok(u8::from(failed > 0))
}

fn show(spec: &Path, graph: &str) -> Result<u8, String> {
    let spec = load(spec)?;
    let g = spec
        .graph(graph)
        .ok_or_else(|| format!("no graph named {graph}"))?;
    print!("{}", render_dot(g, &spec.signature, graph));
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check {
            spec,
            mode,
            path_bound,
            max_iterations,
            emit_dot,
            no_postcond_lift,
            coarse_bound,
            json,
        } => check(
            spec,
            *mode,
            *path_bound,
            *max_iterations,
            emit_dot.as_deref(),
            *no_postcond_lift,
            *coarse_bound,
            *json,
        ),
        Command::Selftest { max_size } => selftest(*max_size),
        Command::Show { spec, graph } => show(spec, graph),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
