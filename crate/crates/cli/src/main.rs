use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mtgraph::config::{RunConfig, DEFAULT_SEED};
use mtgraph::designs::{build_design, build_regular_3graph, pack, verify_design};
use mtgraph::family::{is_mt_free, ToyFamily, Verdict};
use mtgraph::forge::{assemble_gi, construct_params, verify_divisibility, AssemblyLimits, FamilyParams};
use mtgraph::lagrange::{design_lagrangian, maximize, CliqueComplement, MaximizeConfig};
use mtgraph::num::{rat, rational_string, to_f64};
use mtgraph::pipeline::{pipeline, ToySpec};
use mtgraph::region::{blowup_points, emit_region, semibipartite_curve, RegionMarkers};
use mtgraph::symm::{max_colorable_edges, run_symmetrization, SymmetrizationMode};
use mtgraph::verify::verify_all;
use mtgraph::{hg3, Budget, Hypergraph};

#[derive(Parser)]
#[command(name = "mtgraph", version, about = "Extremal triple systems from block designs: build, optimize, verify")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "MTGRAPH_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true, default_value_t = 50_000_000)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Vertex,
    Class,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinFamily {
    /// [K4^3]
    K4,
    /// [K4^3, Fano plane]
    K4Fano,
}

#[derive(clap::Args)]
struct FamilyArgs {
    /// Directory of .hg3 templates G_1, G_2, ... (taken in file-name order).
    #[arg(long, alias = "toy-gis", conflicts_with = "family")]
    gis: Option<PathBuf>,
    /// A built-in template list.
    #[arg(long, value_enum)]
    family: Option<BuiltinFamily>,
    /// Largest core size; defaults to the largest template.
    #[arg(long)]
    n_t: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for Q and derive s_i, k_i, n_i and lambda_t.
    ConstructParams {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        q: u64,
        #[arg(long = "C", alias = "c")]
        c: u64,
        #[arg(long)]
        s1: Option<u64>,
        /// Raise C to the known lower terms 2k_t^3 and 3^8.
        #[arg(long)]
        raise_c: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify an (n,k)-design; writes its blocks as a k-uniform .hg3 file.
    BuildDesign {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build an s-regular 3-graph on n vertices.
    BuildRegular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Find a relabelling that makes S' edge-disjoint from a forbidden 3-graph.
    Pack {
        #[arg(long, alias = "sprime")]
        s_prime: PathBuf,
        #[arg(long)]
        forbidden: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble G = K_n^3 minus (H(D) and a packed s-regular graph).
    BuildGi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        out: PathBuf,
        /// Assembly summary as JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Maximize the Lagrangian of a 3-graph.
    Lagrangian {
        #[arg(long)]
        input: PathBuf,
        /// The input lists the triples missing from the complete graph.
        #[arg(long)]
        complement: bool,
        /// Compare with the closed form for these n,k,s.
        #[arg(long, alias = "exact-formula")]
        design: Option<ToySpec>,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        /// Stop a start once the first-order residual drops below this.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Decide whether a 3-graph is M_t-free.
    CheckFree {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Run Zykov symmetrization and certify the final graph.
    Symmetrize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Vertex)]
        mode: Mode,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Largest n-vertex blow-up of one of the templates.
    Mfrak {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        family: FamilyArgs,
        /// Enumerate all compositions up to this many; hill-climb above.
        #[arg(long, default_value_t = 10_000_000)]
        enumeration_limit: u128,
    },
    /// Emit region points (CSV) and a plotting script.
    FeasibleRegion {
        /// FamilyParams JSON for the marker lines.
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        toy_gis: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Blow-up multiples.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        multiples: Vec<usize>,
        #[arg(long, default_value_t = 30)]
        semibipartite_n: usize,
    },
    /// Write a parameter/toy/region bundle with a hashed manifest.
    Pipeline {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        q: u64,
        #[arg(long = "C", alias = "c")]
        c: u64,
        /// Toy instance n,k,s (repeatable).
        #[arg(long)]
        toy: Vec<ToySpec>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every check and write summary.json and manifest.json.
    VerifyAll {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Extra .hg3 files to parse as checks.
        #[arg(long)]
        fixture: Vec<PathBuf>,
    },
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<Hypergraph> {
    hg3::read(path).with_context(|| format!("reading {}", path.display()))
}

fn read_dir_graphs(dir: &Path) -> Result<Vec<Hypergraph>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "hg3"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no .hg3 files in {}", dir.display());
    }
    paths.iter().map(|p| read_graph(p)).collect()
}

fn load_family(args: &FamilyArgs) -> Result<ToyFamily> {
    let mut fam = match (&args.gis, args.family) {
        (Some(dir), _) => {
            let graphs = read_dir_graphs(dir)?;
            let n_t = graphs.iter().map(|g| g.vertex_count()).max().unwrap_or(0);
            ToyFamily::new(dir.display().to_string(), graphs, n_t)?
        }
        (None, Some(BuiltinFamily::K4)) => ToyFamily::k4(),
        (None, Some(BuiltinFamily::K4Fano)) | (None, None) => ToyFamily::k4_fano(),
    };
    if let Some(n_t) = args.n_t {
        fam.n_t = n_t;
    }
    Ok(fam)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let seed = cli.seed;
    match cli.command {
        Command::ConstructParams { t, q, c, s1, raise_c, out } => {
            let s1 = s1.map(num_bigint::BigUint::from);
            let p = construct_params(t, &q.into(), &c.into(), s1.as_ref(), raise_c)?;
            let d = verify_divisibility(&p);
            emit(&json!({ "params": p, "divisibility": d }), out.as_deref())?;
        }
        Command::BuildDesign { n, k, out } => {
            let d = build_design(n, k, &mut Budget::new("design", cli.budget))?;
            verify_design(&d)?;
            hg3::write(&out, &d.blocks)?;
            emit(&serde_json::to_value(d.summary())?, None)?;
        }
        Command::BuildRegular { n, s, out } => {
            let h = build_regular_3graph(n, s, seed, &mut Budget::new("regular", cli.budget))?;
            hg3::write(&out, &h)?;
            emit(&json!({ "n": n, "s": s, "edges": h.len() }), None)?;
        }
        Command::Pack { s_prime, forbidden, out } => {
            let w = pack(&read_graph(&s_prime)?, &read_graph(&forbidden)?, seed, &mut Budget::new("packing", cli.budget))?;
            emit(&serde_json::to_value(&w)?, out.as_deref())?;
        }
        Command::BuildGi { n, k, s, out, summary } => {
            let a = assemble_gi(n, k, s, seed, &AssemblyLimits::default())?;
            let g = a.g.as_ref().context("G is too large to materialize; only its summary is available")?;
            hg3::write(&out, g)?;
            emit(&serde_json::to_value(a.summary())?, summary.as_deref())?;
        }
        Command::Lagrangian { input, complement, design, starts, tol, threads } => {
            let h = read_graph(&input)?;
            let config = MaximizeConfig { starts, tol, seed, threads, ..Default::default() };
            let report = if complement {
                maximize(&CliqueComplement::new(&h)?, &config)
            } else {
                maximize(&h, &config)
            };
            let mut v = json!({ "report": report });
            if let Some(d) = design {
                let closed = design_lagrangian(d.n as u64, d.k as u64, d.s as u64);
                let gap = (report.best_value - to_f64(&closed.value)).abs();
                v["closed_form"] = json!(rational_string(&closed.value));
                v["closed_form_hypothesis"] = json!(closed.hypothesis_holds);
                v["gap"] = json!(gap);
            }
            emit(&v, None)?;
        }
        Command::CheckFree { input, family } => {
            let h = read_graph(&input)?;
            let fam = load_family(&family)?;
            let verdict = is_mt_free(&h, &fam, &mut Budget::new("freeness", cli.budget))?;
            let free = match &verdict {
                Verdict::Yes(_) => json!(true),
                Verdict::No(_) => json!(false),
                Verdict::Indeterminate { .. } => json!(null),
            };
            emit(&json!({ "free": free, "verdict": verdict }), None)?;
        }
        Command::Symmetrize { input, mode, trace, family } => {
            let h = read_graph(&input)?;
            let fam = if family.gis.is_some() || family.family.is_some() { Some(load_family(&family)?) } else { None };
            let mode = match mode {
                Mode::Vertex => SymmetrizationMode::Vertex,
                Mode::Class => SymmetrizationMode::Class,
            };
            let tr = run_symmetrization(&h, fam.as_ref(), mode, &mut Budget::new("symmetrization", cli.budget))?;
            let v = serde_json::to_value(&tr)?;
            match trace {
                Some(p) => {
                    emit(&v, Some(&p))?;
                    emit(&json!({ "steps": tr.steps.len() - 1, "outcome": tr.outcome }), None)?;
                }
                None => emit(&v, None)?,
            }
        }
        Command::Mfrak { n, family, enumeration_limit } => {
            let fam = load_family(&family)?;
            let m = max_colorable_edges(&fam.graphs, n, enumeration_limit)?;
            emit(&serde_json::to_value(&m)?, None)?;
        }
        Command::FeasibleRegion { family, toy_gis, out, multiples, semibipartite_n } => {
            let mut markers = RegionMarkers::default();
            if let Some(p) = family {
                let params: FamilyParams = serde_json::from_str(&fs::read_to_string(&p)?)
                    .with_context(|| format!("parsing {}", p.display()))?;
                markers = RegionMarkers::from_params(&params);
            }
            let mut points = Vec::new();
            if let Some(dir) = toy_gis {
                for (i, g) in read_dir_graphs(&dir)?.iter().enumerate() {
                    points.extend(blowup_points(g, &multiples, &format!("blowup({})", i + 1), 2_000_000)?);
                    markers.verticals.push(rat(1, 1) - rat(1, g.vertex_count() as i64));
                }
            }
            let alphas: Vec<_> = (1..10).map(|i| rat(i, 10)).collect();
            points.extend(semibipartite_curve(semibipartite_n, &alphas)?);
            let script = emit_region(&points, &markers, &out)?;
            emit(&json!({ "points": points.len(), "csv": out, "script": script }), None)?;
        }
        Command::Pipeline { t, q, c, toy, out } => {
            let b = pipeline(t, q, c, &toy, seed, &AssemblyLimits::default(), &out)?;
            emit(&serde_json::to_value(&b.manifest)?, None)?;
        }
        Command::VerifyAll { config, out, jobs, fixture } => {
            let mut cfg = match config {
                Some(p) => RunConfig::from_json_file(&p)?,
                None => RunConfig { seed, ..Default::default() },
            };
            if let Some(o) = out {
                cfg.out_dir = o;
            }
            if let Some(j) = jobs {
                cfg.jobs = j;
            }
            cfg.fixtures.extend(fixture);
            let (summary, _) = verify_all(&cfg)?;
            for c in &summary.checks {
                println!("{} {} ({} ms): {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.millis, c.detail);
            }
            std::process::exit(summary.exit_code());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
