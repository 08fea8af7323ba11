use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use quadflip::canon::canonical_code;
use quadflip::curves::{dual_cubication, extract_curves, skeleton_dot};
use quadflip::flips::{
    apply_flip, diagonal_rotation, diagonal_sites, diagonal_slide, flip_sites, site_at,
    stabilize_complex, DiagonalKind, DualPath, FlipError, FlipKind,
};
use quadflip::homology::{j_invariant, HomologyError, MarkedCubication};
use quadflip::models::standard_model;
use quadflip::qgm::{parse_marking, parse_qgm, write_marking, write_qgm};
use quadflip::search::{
    census, flip_path, parse_sequence, replay_sequence, write_sequence, Budget, PathOutcome, SearchError,
};
use quadflip::{classify_surface, BoundarySignature, QuadGMap, SurfaceClass};

/// Cubications of surfaces and cubical flips.
#[derive(Parser)]
#[command(name = "quadflip", version)]
struct Cli {
    /// Seed for randomized tie-breaking. Every operation is currently
    /// deterministic, so the value only appears in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a QGM file.
    Check { file: PathBuf },
    /// Surface type and cell counts.
    Info { file: PathBuf },
    /// The curve system dual to the squares.
    Curves { file: PathBuf },
    /// The invariant j, for a given marking or an automatic one.
    Invariant {
        file: PathBuf,
        /// `cycle d1 d2 ...` lines, one dart per edge.
        #[arg(long)]
        marking: Option<PathBuf>,
    },
    #[command(subcommand)]
    Flip(FlipCommand),
    /// Diagonal slide or rotation.
    Diag {
        #[arg(value_parser = ["slide", "rotate"])]
        kind: String,
        file: PathBuf,
        /// Anchor of the site; the first site if omitted.
        #[arg(long)]
        site: Option<u32>,
        /// Slide the diameter the other way.
        #[arg(long)]
        backward: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Add the circle around an edge path.
    Stabilize {
        file: PathBuf,
        /// First dart of the path.
        #[arg(long, default_value_t = 0)]
        start: u32,
        /// Corners turned at each inner vertex, comma separated.
        #[arg(long, value_delimiter = ',')]
        turns: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild the cubication dual to the curve arrangement.
    Dual {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a flip sequence from A to B.
    Path {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Where to write the sequence; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate cubications and connect them by flips.
    Census {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        max_faces: usize,
        /// Boundary edge counts per component, e.g. `4` or `4,6`.
        #[arg(long)]
        boundary: Option<String>,
        /// Face cap for path searches between components.
        #[arg(long)]
        search_faces: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
    },
    /// Write a standard model as QGM.
    Model {
        name: String,
        params: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a drawing.
    Export {
        file: PathBuf,
        /// Graphviz output of the 1-skeleton.
        #[arg(long)]
        dot: bool,
        /// Draw the curve arrangement instead of the skeleton.
        #[arg(long)]
        curves: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FlipCommand {
    /// List the sites of one kind.
    List {
        file: PathBuf,
        #[arg(long)]
        kind: FlipKind,
    },
    /// Apply one flip, or a sequence file of `kind anchor` lines.
    Apply {
        file: PathBuf,
        #[arg(long, requires = "site", conflicts_with = "sequence")]
        kind: Option<FlipKind>,
        /// Anchor dart of the site.
        #[arg(long)]
        site: Option<u32>,
        #[arg(long)]
        sequence: Option<PathBuf>,
        /// Carry this marking through and write it next to the output.
        #[arg(long)]
        marking: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Face cap for intermediate complexes; endpoints + 8 if omitted.
    #[arg(long)]
    max_faces: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    max_states: usize,
}

/// Failure with its exit status: 1 bad input, 2 search exhausted,
/// 3 internal invariant violation.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: 1, error: e.into() }
    }
}

fn internal(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 3, error: e.into() }
}

fn flip_failure(e: FlipError) -> Failure {
    match e {
        FlipError::Internal(_) => internal(e),
        other => other.into(),
    }
}

fn search_failure(e: SearchError) -> Failure {
    match e {
        SearchError::Internal(_) => internal(e),
        other => other.into(),
    }
}

fn load(path: &Path) -> Result<QuadGMap, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_qgm(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn load_marking(q: QuadGMap, path: Option<&Path>) -> Result<MarkedCubication, Failure> {
    let marked = match path {
        None => MarkedCubication::auto(q),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let cycles = parse_marking(&text).with_context(|| format!("parsing {}", p.display()))?;
            MarkedCubication::from_dart_cycles(q, &cycles)
        }
    };
    marked.map_err(|e| match e {
        HomologyError::Internal(_) => internal(e),
        other => other.into(),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut stdout = io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                // a closed pipe (`| head`) is not an error of ours
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check { file } => {
            let q = load(&file)?;
            let class = classify_surface(&q)?;
            let code = canonical_code(&q)?;
            println!("ok darts={} surface={} code={code}", q.n_darts(), class.name().replace(' ', "_"));
        }
        Command::Info { file } => {
            let q = load(&file)?;
            let c = classify_surface(&q)?;
            let (v, e, f) = q.cell_counts();
            let orient = if c.orientable { "orientable" } else { "non-orientable" };
            println!("{} {orient} χ={} V={v} E={e} F={f} b={}", c.name(), c.euler, c.boundary_count);
        }
        Command::Curves { file } => {
            let curves = extract_curves(&load(&file)?)?;
            print!("{}", curves.report());
            println!("circles={} intervals={}", curves.circles(), curves.intervals());
        }
        Command::Invariant { file, marking } => {
            let m = load_marking(load(&file)?, marking.as_deref())?;
            let j = j_invariant(&m).map_err(internal)?;
            println!("{j}");
        }
        Command::Flip(FlipCommand::List { file, kind }) => {
            let q = load(&file)?;
            let text: String = flip_sites(&q, kind).iter().map(|s| format!("{s}\n")).collect();
            emit(None, &text)?;
        }
        Command::Flip(FlipCommand::Apply { file, kind, site, sequence, marking, out }) => {
            let q = load(&file)?;
            let steps = match (kind, site, sequence) {
                (Some(k), Some(a), None) => vec![(k, a)],
                (None, None, Some(p)) => {
                    let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    parse_sequence(&text)?
                }
                _ => return Err(anyhow!("give either --kind and --site, or --sequence").into()),
            };
            match marking {
                None => {
                    let end = replay_sequence(&q, &steps)?.pop().expect("replay keeps the input");
                    emit(out.as_deref(), &write_qgm(&end))?;
                }
                Some(mp) => {
                    let mut m = load_marking(q, Some(&mp))?;
                    for &(k, a) in &steps {
                        let s = site_at(m.complex(), k, a).map_err(flip_failure)?;
                        m = apply_flip(&m, &s).map_err(flip_failure)?;
                    }
                    emit(out.as_deref(), &write_qgm(m.complex()))?;
                    if let Some(o) = &out {
                        let mpath = o.with_extension("marking");
                        emit(Some(&mpath), &write_marking(&m.dart_cycles()))?;
                    }
                }
            }
        }
        Command::Diag { kind, file, site, backward, out } => {
            let q = load(&file)?;
            let dk = match (kind.as_str(), backward) {
                ("rotate", _) => DiagonalKind::Rotation,
                (_, false) => DiagonalKind::SlideForward,
                (_, true) => DiagonalKind::SlideBackward,
            };
            let sites = diagonal_sites(&q, dk);
            let s = match site {
                Some(a) => sites.into_iter().find(|s| s.anchor == a),
                None => sites.into_iter().next(),
            }
            .ok_or_else(|| anyhow!("no {dk} site{}", site.map_or(String::new(), |a| format!(" anchored at {a}"))))?;
            let r = if dk == DiagonalKind::Rotation { diagonal_rotation(&q, &s) } else { diagonal_slide(&q, &s) };
            emit(out.as_deref(), &write_qgm(&r.map_err(flip_failure)?))?;
        }
        Command::Stabilize { file, start, turns, out } => {
            let q = load(&file)?;
            let r = stabilize_complex(&q, &DualPath { start, turns }).map_err(flip_failure)?;
            emit(out.as_deref(), &write_qgm(&r))?;
        }
        Command::Dual { file, out } => {
            let q = load(&file)?;
            let curves = extract_curves(&q)?;
            let d = dual_cubication(&curves.arrangement)?;
            emit(out.as_deref(), &write_qgm(&d))?;
        }
        Command::Path { a, b, budget, out } => {
            let (qa, qb) = (load(&a)?, load(&b)?);
            let mut bud = Budget::for_endpoints(&qa, &qb);
            if let Some(f) = budget.max_faces {
                bud.max_faces = f;
            }
            bud.max_states = budget.max_states;
            let r = flip_path(&qa, &qb, &bud).map_err(search_failure)?;
            match r.outcome {
                PathOutcome::Found(sites) => {
                    eprintln!("found length={} states={}", sites.len(), r.states_visited);
                    emit(out.as_deref(), &write_sequence(&sites))?;
                }
                PathOutcome::Exhausted(dim) => {
                    return Err(Failure {
                        code: 2,
                        error: anyhow!("search exhausted ({dim}) after {} states", r.states_visited),
                    });
                }
            }
        }
        Command::Census { surface, max_faces, boundary, search_faces, max_states } => {
            let class = SurfaceClass::from_name(&surface).ok_or_else(|| anyhow!("unknown surface `{surface}`"))?;
            let sig = match &boundary {
                Some(s) => Some(BoundarySignature::parse(s).ok_or_else(|| anyhow!("bad boundary `{s}`"))?),
                None => None,
            };
            let budget = Budget::new(search_faces.unwrap_or(max_faces + 8), max_states);
            let report = census(&class, max_faces, sig.as_ref(), &budget).map_err(search_failure)?;
            emit(None, &format!("{}seed={}\n", report.render(), cli.seed))?;
            if !report.unresolved.is_empty() {
                return Err(Failure { code: 2, error: anyhow!("some components could not be joined within budget") });
            }
        }
        Command::Model { name, params, out } => {
            let q = standard_model(&name, &params)?;
            emit(out.as_deref(), &write_qgm(&q))?;
        }
        Command::Export { file, dot, curves, out } => {
            if !dot {
                return Err(anyhow!("only --dot export is supported").into());
            }
            let q = load(&file)?;
            let text = if curves { extract_curves(&q)?.arrangement.to_dot() } else { skeleton_dot(&q) };
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_is_stable_under_round_trip() {
        let q = standard_model("cube_sphere", &[]).unwrap();
        let back = parse_qgm(&write_qgm(&q)).unwrap();
        assert_eq!(canonical_code(&q).unwrap(), canonical_code(&back).unwrap());
    }
}
