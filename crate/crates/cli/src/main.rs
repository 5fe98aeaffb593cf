//! Batch front-end: generate instances, solve, verify certificates, run the
//! brute-force oracles, lift to surfaces, draw, and benchmark.
//!
//! Exit codes: 0 success, 1 validation failure, 2 size-bound violation.

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;
use tricds_core::fixtures::{self, Fixture};
use tricds_core::greedy::{
    self, better_bound, simple_bound, Algo, CdsCertificate, EngineMode,
};
use tricds_core::onebend;
use tricds_core::oracle;
use tricds_core::plane::PlaneGraph;
use tricds_core::surface;

const EXIT_VALIDATION: i32 = 1;
const EXIT_BOUND: i32 = 2;

#[derive(Parser)]
#[command(name = "tricds", about = "Connected dominating sets of planar and surface triangulations", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenType {
    K4,
    Wheel,
    Nested,
    Gh,
    Random,
    Torus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Simple,
    Better,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Reference,
    Incremental,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a triangulation (or a torus grid in the surface format).
    Gen {
        #[arg(long = "type", value_enum)]
        gtype: GenType,
        /// rings for `nested`, grid size for `torus`
        #[arg(long)]
        k: Option<u32>,
        /// rim size for `wheel`
        #[arg(long)]
        r: Option<u32>,
        /// vertex count for `random`
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// diagonal flips after stacked growth (`random` only)
        #[arg(long)]
        flips: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a CDS engine on a rotation file; self-verifies before exiting.
    Solve {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value = "incremental")]
        engine: EngineArg,
        file: PathBuf,
        /// write the certificate JSON
        #[arg(long)]
        cert: Option<PathBuf>,
        /// write the spanning tree (`child parent` lines)
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Check a certificate against a graph.
    Verify { file: PathBuf, cert: PathBuf },
    /// Brute-force minima on a small graph (JSON to stdout).
    Oracle { file: PathBuf },
    /// Connected dominating set of a surface triangulation.
    SurfaceSolve {
        file: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Render a layout (optionally the spanning tree and envelope curve).
    Draw {
        file: PathBuf,
        #[arg(long)]
        tree: bool,
        #[arg(long)]
        curve: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Wall-time benchmark over random triangulations.
    Bench {
        /// comma-separated sizes, e.g. 1e4,1e5,2e5
        #[arg(long, default_value = "1e4,1e5")]
        sizes: String,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(EXIT_VALIDATION);
        }
    }
}

fn load_graph(path: &PathBuf) -> anyhow::Result<PlaneGraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    if path.extension().map_or(false, |e| e == "json") {
        Ok(fixtures::from_json(&text)?)
    } else {
        Ok(fixtures::parse(&text)?)
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.cmd {
        Cmd::Gen {
            gtype,
            k,
            r,
            n,
            seed,
            flips,
            output,
        } => {
            let text = match gtype {
                GenType::K4 => fixtures::serialize(&fixtures::gen_fixture(Fixture::K4)?, &[]),
                GenType::Gh => {
                    fixtures::serialize(&fixtures::gen_fixture(Fixture::GoldnerHarary)?, &[])
                }
                GenType::Wheel => {
                    let r = r.ok_or_else(|| anyhow!("--r required for wheel"))?;
                    fixtures::serialize(&fixtures::gen_fixture(Fixture::Wheel(r))?, &[])
                }
                GenType::Nested => {
                    let k = k.ok_or_else(|| anyhow!("--k required for nested"))?;
                    fixtures::serialize(&fixtures::gen_fixture(Fixture::NestedTriangles(k))?, &[])
                }
                GenType::Random => {
                    let n = n.ok_or_else(|| anyhow!("--n required for random"))?;
                    let flips = flips.unwrap_or(n);
                    let g = fixtures::gen_random_triangulation(n, seed, flips)?;
                    fixtures::serialize(
                        &g,
                        &[format!("prng: chacha8 seed={seed} flips={flips} n={n}")],
                    )
                }
                GenType::Torus => {
                    let k = k.ok_or_else(|| anyhow!("--k required for torus"))? as usize;
                    surface::serialize_surface(&surface::gen_torus_grid(k)?)
                }
            };
            std::fs::write(&output, text).with_context(|| format!("writing {output:?}"))?;
            Ok(0)
        }
        Cmd::Solve {
            algo,
            engine,
            file,
            cert,
            tree,
        } => {
            let g = load_graph(&file)?;
            let mode = match engine {
                EngineArg::Reference => EngineMode::Reference,
                EngineArg::Incremental => EngineMode::Incremental,
            };
            let certificate = match algo {
                AlgoArg::Simple => greedy::simple_greedy(&g, mode)?,
                AlgoArg::Better => greedy::better_greedy(&g, mode)?,
            };
            let report = greedy::verify_certificate(&g, &certificate);
            if !report.ok() {
                eprintln!("certificate failed self-verification: {:?}", report.failures);
                return Ok(EXIT_VALIDATION);
            }
            let n = g.vertex_count();
            let bound = match certificate.algo {
                Algo::Simple if n >= 4 => Some(simple_bound(n)),
                Algo::Better if n >= 3 => Some(better_bound(n)),
                _ => None,
            };
            if let Some(b) = bound {
                if certificate.x.len() > b {
                    eprintln!("size bound violated: |X| = {} > {b}", certificate.x.len());
                    return Ok(EXIT_BOUND);
                }
            }
            println!(
                "n={} algo={:?} |X|={} bound={} steps={}",
                n,
                certificate.algo,
                certificate.x.len(),
                bound.map_or("-".to_string(), |b| b.to_string()),
                certificate.steps.len()
            );
            if let Some(path) = cert {
                std::fs::write(&path, serde_json::to_string_pretty(&certificate)?)?;
            }
            if let Some(path) = tree {
                let t = greedy::spanning_tree_from_cds(&g, &certificate.x)?;
                let mut out = String::new();
                let _ = writeln!(out, "# root {}", t.root);
                for v in g.alive_vertices() {
                    let _ = writeln!(out, "{v} {}", t.parent[v as usize]);
                }
                std::fs::write(&path, out)?;
            }
            Ok(0)
        }
        Cmd::Verify { file, cert } => {
            let g = load_graph(&file)?;
            let text = std::fs::read_to_string(&cert)?;
            let certificate: CdsCertificate = serde_json::from_str(&text)?;
            let report = greedy::verify_certificate(&g, &certificate);
            if report.ok() {
                println!("certificate ok: |X| = {}", certificate.x.len());
                Ok(0)
            } else {
                for f in &report.failures {
                    eprintln!("verification failure: {f}");
                }
                Ok(EXIT_VALIDATION)
            }
        }
        Cmd::Oracle { file } => {
            let g = load_graph(&file)?;
            let (min_cds, _) = oracle::min_cds_bruteforce(&g)?;
            let max_leaf = oracle::max_leaf_spanning_tree_bruteforce(&g)?;
            let (max_outerplane, _) = oracle::max_outerplane_induced_bruteforce(&g)?;
            println!(
                "{}",
                serde_json::json!({
                    "min_cds": min_cds,
                    "max_leaf": max_leaf,
                    "max_outerplane": max_outerplane,
                })
            );
            Ok(0)
        }
        Cmd::SurfaceSolve { file, cert } => {
            let text = std::fs::read_to_string(&file)?;
            let map = surface::parse_surface(&text)?;
            let result = surface::surface_cds(&map)?;
            if !surface::surface_dominating(&map, &result.x)
                || !surface::surface_connected(&map, &result.x)
            {
                eprintln!("surface CDS failed verification");
                return Ok(EXIT_VALIDATION);
            }
            println!(
                "n={} genus={} |X|={} |V(Z)|={} planar_n={} planar_|X'|={}",
                map.vertex_count(),
                result.genus,
                result.x.len(),
                result.z_vertices.len(),
                result.planar_n,
                result.planar_x_size
            );
            if let Some(path) = cert {
                std::fs::write(
                    &path,
                    serde_json::to_string_pretty(&serde_json::json!({
                        "n": map.vertex_count(),
                        "genus": result.genus,
                        "X": result.x,
                        "z_vertices": result.z_vertices,
                    }))?,
                )?;
            }
            Ok(0)
        }
        Cmd::Draw {
            file,
            tree,
            curve,
            output,
        } => {
            let g = load_graph(&file)?;
            let layout = onebend::straight_line_layout(&g)?;
            let (tree_obj, curve_obj) = if tree || curve {
                let cert = greedy::better_greedy(&g, EngineMode::Incremental)?;
                let t = greedy::spanning_tree_from_cds(&g, &cert.x)?.with_internal_root(&g);
                let c = if curve {
                    Some(onebend::build_envelope_curve(&g, &t)?)
                } else {
                    None
                };
                (Some(t), c)
            } else {
                (None, None)
            };
            let svg = onebend::export_svg(&g, &layout, tree_obj.as_ref(), curve_obj.as_ref());
            std::fs::write(&output, svg)?;
            Ok(0)
        }
        Cmd::Bench { sizes, seeds, csv } => {
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|t| {
                    let t = t.trim();
                    t.parse::<f64>()
                        .map(|f| f as usize)
                        .map_err(|_| anyhow!("bad size {t:?}"))
                })
                .collect::<anyhow::Result<_>>()?;
            let mut rows = vec!["n,seed,algo,x,bound,ratio,ms".to_string()];
            let mut jobs = Vec::new();
            for &n in &sizes {
                for seed in 0..seeds {
                    jobs.push((n, seed));
                }
            }
            let results: Vec<anyhow::Result<Vec<String>>> = jobs
                .par_iter()
                .map(|&(n, seed)| {
                    let g = fixtures::gen_random_triangulation(n, seed, n)?;
                    let mut out = Vec::new();
                    for algo in [AlgoArg::Better, AlgoArg::Simple] {
                        let t0 = Instant::now();
                        let cert = match algo {
                            AlgoArg::Simple => greedy::simple_greedy(&g, EngineMode::Incremental)?,
                            AlgoArg::Better => greedy::better_greedy(&g, EngineMode::Incremental)?,
                        };
                        let ms = t0.elapsed().as_secs_f64() * 1e3;
                        let (name, bound) = match algo {
                            AlgoArg::Simple => ("simple", simple_bound(n)),
                            AlgoArg::Better => ("better", better_bound(n)),
                        };
                        if cert.x.len() > bound {
                            bail!("bound violated: n={n} seed={seed} {name}");
                        }
                        out.push(format!(
                            "{n},{seed},{name},{},{bound},{:.4},{ms:.2}",
                            cert.x.len(),
                            cert.x.len() as f64 / n as f64,
                        ));
                    }
                    Ok(out)
                })
                .collect();
            for r in results {
                rows.extend(r?);
            }
            let table = rows.join("\n") + "\n";
            match csv {
                Some(path) => std::fs::write(&path, table)?,
                None => print!("{table}"),
            }
            Ok(0)
        }
    }
}
