//! Command-line front end. `run` never exits the process so it can be
//! driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decomp::format::{parse_decomposition, write_decomposition};
use crate::decomp::{
    decompose_heuristic, exact_kfree_decomposition, kfree_heuristic, kfree_width, min_degree_decomposition,
    tame_heuristic, tame_width, tree_width, uncontract_subdivision, validate, width, Decomposition,
    DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::grids::format::write_coords;
use crate::grids::{
    find_even_grid_subdivision, find_even_rooted_grid_minor, make_cylindrical_grid, make_grid, make_parity_handle,
    EvenGridBranch,
    make_parity_vortex, make_rooted_grid, random_signing,
};
use crate::ip::format::write_result;
use crate::ip::{brute_force_oracle, solve_dp};
use crate::matrix::check_dmod_bounds;
use crate::matrix::format::parse_instance;
use crate::sgraph::format::{
    parse_graph, parse_path_map, write_graph, write_minor_model, write_path_map, write_subdivision_model,
};
use crate::sgraph::{subdivide_even_edges, verify_minor_model, verify_subdivision_model, Parity, RootedSignedGraph};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "TDMTW_THREADS";

#[derive(Parser, Debug)]
#[command(name = "tdmtw", version, about = "Integer programs with two nonzeros per row, signed graphs and their decompositions")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance by dynamic programming over a K-free decomposition.
    Solve {
        #[arg(short, long)]
        instance: PathBuf,
        /// K-free decomposition of the instance graph; a heuristic one when omitted.
        #[arg(short, long)]
        decomposition: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve an instance by enumerating its box.
    Oracle {
        #[arg(short, long)]
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute a decomposition of an instance graph or a graph file.
    Decompose {
        #[arg(short, long, conflicts_with = "graph", required_unless_present = "graph")]
        instance: Option<PathBuf>,
        #[arg(short, long)]
        graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = KindArg::Tdm)]
        kind: KindArg,
        /// Width evaluations the TDM search may spend.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Optimal K-free decomposition (at most 16 vertices).
        #[arg(long)]
        exact: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a decomposition against a graph.
    Validate {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        decomposition: PathBuf,
    },
    /// Print the width of a decomposition.
    Width {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        decomposition: PathBuf,
    },
    /// Generate a grid family member.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        k: usize,
        /// Ring length of a cylinder.
        #[arg(long)]
        m: Option<usize>,
        /// Replace the family's parities.
        #[arg(long, value_enum)]
        signing: Option<Signing>,
        /// Write the coordinate sidecar here.
        #[arg(long)]
        coords: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report Δ and the four Δ-modularity bounds for an instance matrix.
    CheckDmod {
        #[arg(short, long)]
        instance: PathBuf,
    },
    /// Find an even k×k grid in a signed k²×k² grid.
    FindEvenGrid {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Find the rooted grid as a rooted minor instead.
        #[arg(long)]
        rooted: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Subdivide even edges, or map a decomposition back through a path map.
    Translate {
        #[arg(long, conflicts_with = "uncontract", required_unless_present = "uncontract", requires = "map")]
        subdivide_even: bool,
        /// Turn a decomposition of the subdivided graph into one of `--graph`.
        #[arg(long, requires_all = ["decomposition", "map"])]
        uncontract: bool,
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        decomposition: Option<PathBuf>,
        /// Path map: written with --subdivide-even, read with --uncontract.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Tree,
    Kfree,
    Tocp,
    Tdm,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Grid,
    RootedGrid,
    Handle,
    Vortex,
    Cylinder,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Signing {
    Even,
    Odd,
    Random,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| with_path(e, path))
}

fn with_path(e: std::io::Error, path: &Path) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| with_path(e, p)),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn say(out: &mut dyn Write, text: impl AsRef<str>) -> Result<()> {
    Ok(writeln!(out, "{}", text.as_ref())?)
}

fn load_graph(path: &Path) -> Result<RootedSignedGraph> {
    parse_graph(&read(path)?)
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool built by an earlier call in this process stays in place
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs one invocation and returns its exit code: 0 on success (optimal
/// for solvers), 2 for an infeasible instance, 1 on any error or invalid
/// decomposition.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                1
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    configure_threads();
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Solve { instance, decomposition, output } => {
            let inst = parse_instance(&read(&instance)?)?;
            let d = match decomposition {
                Some(p) => match parse_decomposition(&read(&p)?)? {
                    Decomposition::KFree(d) => d,
                    other => {
                        return Err(Error::Decomposition(format!(
                            "solve needs a kfree decomposition, got {}",
                            other.kind().keyword()
                        )))
                    }
                },
                None => kfree_heuristic(&inst.graph()),
            };
            let r = solve_dp(&inst, &d)?;
            emit(out, output.as_ref(), &write_result(&r))?;
            Ok(r.status().exit_code())
        }
        Command::Oracle { instance, output } => {
            let inst = parse_instance(&read(&instance)?)?;
            let r = brute_force_oracle(&inst)?;
            emit(out, output.as_ref(), &write_result(&r))?;
            Ok(r.status().exit_code())
        }
        Command::Decompose { instance, graph, kind, budget, exact, output } => {
            let g = match (instance, graph) {
                (Some(i), _) => parse_instance(&read(&i)?)?.graph(),
                (None, Some(g)) => load_graph(&g)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            if exact && !matches!(kind, KindArg::Kfree) {
                return Err(Error::Decomposition("--exact applies to --kind kfree only".into()));
            }
            let (d, w, note): (Decomposition, usize, &str) = match kind {
                KindArg::Tree => {
                    let d = min_degree_decomposition(&g);
                    let w = tree_width(&d, &g)?;
                    (d.into(), w, "")
                }
                KindArg::Kfree if exact => {
                    let (w, d) = exact_kfree_decomposition(&g)?;
                    (d.into(), w, " (optimal)")
                }
                KindArg::Kfree => {
                    let d = kfree_heuristic(&g);
                    let w = kfree_width(&d, &g)?;
                    (d.into(), w, "")
                }
                KindArg::Tocp => {
                    let d = tame_heuristic(&g)?;
                    let w = tame_width(&d, &g)?;
                    (d.into(), w, "")
                }
                KindArg::Tdm => {
                    let h = decompose_heuristic(&g, budget, cli.seed)?;
                    let note = if h.exhausted { " (budget exhausted)" } else { "" };
                    (h.decomposition.into(), h.width, note)
                }
            };
            emit(out, output.as_ref(), &format!("# width {w}{note}\n{}", write_decomposition(&d)))?;
            Ok(0)
        }
        Command::Validate { graph, decomposition } => {
            let g = load_graph(&graph)?;
            let d = parse_decomposition(&read(&decomposition)?)?;
            let vs = validate(&d, &g);
            if vs.is_empty() {
                say(out, "ok")?;
                return Ok(0);
            }
            for v in &vs {
                say(out, format!("invalid {}: {v}", v.clause()))?;
            }
            Ok(1)
        }
        Command::Width { graph, decomposition } => {
            let g = load_graph(&graph)?;
            let d = parse_decomposition(&read(&decomposition)?)?;
            say(out, width(&d, &g)?.to_string())?;
            Ok(0)
        }
        Command::Gen { family, k, m, signing, coords, output } => {
            let (g, c) = match family {
                Family::Grid => make_grid(k)?,
                Family::RootedGrid => make_rooted_grid(k)?,
                Family::Handle => make_parity_handle(k)?,
                Family::Vortex => make_parity_vortex(k)?,
                Family::Cylinder => make_cylindrical_grid(k, m.ok_or_else(|| Error::Grid("cylinder needs --m".into()))?)?,
            };
            if m.is_some() && !matches!(family, Family::Cylinder) {
                return Err(Error::Grid("--m applies to cylinders only".into()));
            }
            let g = match signing {
                None => g,
                Some(Signing::Even) => g.with_uniform_parity(Parity::Even),
                Some(Signing::Odd) => g.with_uniform_parity(Parity::Odd),
                Some(Signing::Random) => random_signing(&g, &mut ChaCha8Rng::seed_from_u64(cli.seed)),
            };
            if let Some(p) = coords {
                emit(out, Some(&p), &write_coords(&c))?;
            }
            emit(out, output.as_ref(), &write_graph(&g))?;
            Ok(0)
        }
        Command::CheckDmod { instance } => {
            let inst = parse_instance(&read(&instance)?)?;
            let report = check_dmod_bounds(&inst.a)?;
            say(out, report.to_string().trim_end())?;
            Ok(if report.all_hold() { 0 } else { 1 })
        }
        Command::FindEvenGrid { graph, k, rooted, output } => {
            let g = load_graph(&graph)?;
            if rooted {
                let (guest, m) = find_even_rooted_grid_minor(&g, k)?;
                let verdict = verify_minor_model(&g, &guest, &m, true);
                let head = match &verdict {
                    Ok(()) => "# verify ok".to_string(),
                    Err(v) => format!("# verify failed: {v}"),
                };
                emit(out, output.as_ref(), &format!("{head}\n{}", write_minor_model(&m)))?;
                return Ok(if verdict.is_ok() { 0 } else { 1 });
            }
            let found = find_even_grid_subdivision(&g, k)?;
            let verdict = verify_subdivision_model(&g, &found.guest, &found.model);
            let head = match &verdict {
                Ok(()) => match found.branch {
                    EvenGridBranch::Subgrid { a, b } => format!("# verify ok (subgrid a={a} b={b})"),
                    EvenGridBranch::Routed => "# verify ok (routed)".to_string(),
                },
                Err(v) => format!("# verify failed: {v}"),
            };
            emit(out, output.as_ref(), &format!("{head}\n{}", write_subdivision_model(&found.model)))?;
            Ok(if verdict.is_ok() { 0 } else { 1 })
        }
        Command::Translate { subdivide_even, uncontract, graph, decomposition, map, output } => {
            let g = load_graph(&graph)?;
            if subdivide_even {
                let (h, pm) = subdivide_even_edges(&g);
                emit(out, output.as_ref(), &write_graph(&h))?;
                emit(out, map.as_ref(), &write_path_map(&pm))?;
                return Ok(0);
            }
            debug_assert!(uncontract);
            let (d, map) = (decomposition.unwrap(), map.unwrap());
            let d = parse_decomposition(&read(&d)?)?;
            let pm = parse_path_map(&read(&map)?)?;
            let back = uncontract_subdivision(&d, &g, &pm)?;
            emit(out, output.as_ref(), &write_decomposition(&back))?;
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("tdmtw").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn gen_rooted_grid() {
        let (code, out, _) = call(&["gen", "--family", "rooted-grid", "--k", "2"]);
        assert_eq!(code, 0);
        let g = parse_graph(&out).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.roots().len()), (4, 4, 2));
    }

    #[test]
    fn bad_flags() {
        let (code, _, err) = call(&["gen", "--family", "torus", "--k", "2"]);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
        assert_eq!(call(&[]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["gen", "--family", "grid", "--k", "0"]).0, 1);
    }
}
