//! lpack: verify lattice packings, subdivision schemes, colorings and bounds.
//!
//! Exit status: 0 when the requested check succeeds, 1 when it fails (the
//! report says why), 2 for usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lattice_packing::bounds::{corollary_bound, distance_check, reproduce_tables, CorollaryError};
use lattice_packing::coloring::{
    derive_33_coloring, find_plan, load_pattern, plan_catalog, render_ppm, render_svg,
    shipped_pattern, verify_plan, verify_s_coloring, verify_torus, ColoringPlan, PatternGrid,
    PeriodicColoring,
};
use lattice_packing::density::{
    density_lower_bound, feasibility_sum, fmt_rational, k_area_direct, k_area_formula,
    DEFAULT_HORIZON, DEFAULT_LOWER_BOUND_CAP,
};
use lattice_packing::lattice::{ball, ball_size_formula, sphere, sphere_size_formula};
use lattice_packing::packings::{base_packing, find_scheme, scheme_catalog};
use lattice_packing::{distance, LatticeKind, LinearPackingSpec, SequenceSpec, Vertex};

#[derive(Parser)]
#[command(
    name = "lpack",
    version,
    about = "Packing colorings of the hexagonal, square and triangular lattices"
)]
struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graph distance between two vertices.
    Distance {
        #[arg(long)]
        lattice: LatticeKind,
        #[arg(long, allow_hyphen_values = true)]
        from: Vertex,
        #[arg(long, allow_hyphen_values = true)]
        to: Vertex,
    },
    /// Size of the ball (or sphere) of radius n, checked against the closed form.
    Ball {
        #[arg(long)]
        lattice: LatticeKind,
        #[arg(long)]
        radius: u64,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        center: Vertex,
        /// Count the sphere instead of the ball.
        #[arg(long)]
        sphere: bool,
        /// Also list the vertices.
        #[arg(long)]
        list: bool,
    },
    /// The k-area A(k) as an exact rational.
    Karea {
        #[arg(long)]
        lattice: LatticeKind,
        #[arg(long)]
        k: i64,
        /// Also compute it by direct enumeration around this vertex.
        #[arg(long, allow_hyphen_values = true)]
        direct: Option<Vertex>,
    },
    /// Minimum distance of a lattice coset, optionally against a claimed radius.
    VerifyPacking {
        #[arg(long)]
        lattice: LatticeKind,
        /// Use base packing X_i instead of explicit generators.
        #[arg(long, conflicts_with_all = ["g1", "g2"])]
        base: Option<u64>,
        #[arg(long, requires = "g2", allow_hyphen_values = true)]
        g1: Option<Vertex>,
        #[arg(long, requires = "g1", allow_hyphen_values = true)]
        g2: Option<Vertex>,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        offset: Vertex,
        /// Claimed packing radius: pairwise distances must exceed it.
        #[arg(long)]
        radius: Option<u64>,
    },
    /// Verify catalog subdivision schemes.
    VerifyScheme {
        #[arg(long, required_unless_present = "all")]
        id: Option<String>,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// Every catalog entry for k, m in 1..=cap.
        #[arg(long, conflicts_with = "id")]
        all: bool,
        #[arg(long, default_value_t = 3)]
        cap: u64,
    },
    /// Build and verify coloring plans.
    VerifyPlan {
        /// Catalog plan name, e.g. "(3,3)-hex".
        #[arg(long, group = "source")]
        plan: Option<String>,
        /// Plan file (one plan or an array of plans, JSON).
        #[arg(long, group = "source")]
        file: Option<PathBuf>,
        #[arg(long, group = "source")]
        all: bool,
        /// Write the fundamental domain of the (single) coloring here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Density certificate that no coloring exists.
    Feasibility {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        /// Print the full certificate.
        #[arg(long)]
        report: bool,
    },
    /// Density lower bound on the number of colors.
    LowerBound {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = DEFAULT_LOWER_BOUND_CAP)]
        cap: u64,
    },
    /// Search for a corollary witness and build the coloring it describes.
    Corollary {
        #[arg(long)]
        lattice: LatticeKind,
        /// Sequence prefix, e.g. 2,3,3,5.
        #[arg(long, value_delimiter = ',')]
        sequence: Vec<u64>,
    },
    /// Distance-coloring closed form next to the shipped partitions.
    DistanceChromatic {
        #[arg(long)]
        lattice: LatticeKind,
        #[arg(long)]
        d: u64,
    },
    /// Reproduce the (d,n) bound tables.
    Tables {
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the 24x24 pattern as a (1,2,...,17)-packing coloring.
    PatternVerify {
        /// Pattern file (default: the shipped one).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Verify in the plane instead of on the torus.
        #[arg(long)]
        plane: bool,
    },
    /// Derive the 33-color (3,3) coloring from the pattern.
    #[command(name = "derive-33")]
    Derive33 {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Draw a coloring as SVG or PPM.
    Render {
        #[arg(long, group = "what")]
        plan: Option<String>,
        #[arg(long, group = "what")]
        pattern: bool,
        #[arg(long, group = "what")]
        derive_33: bool,
        #[arg(long, value_enum, default_value_t = ImageFormat::Svg)]
        format: ImageFormat,
        #[arg(long)]
        out: PathBuf,
        /// Pixels per vertex.
        #[arg(long, default_value_t = 12)]
        cell: u32,
    },
    /// Write catalog plans as JSON plan files.
    ExportPlan {
        #[arg(long, required_unless_present = "all")]
        plan: Option<String>,
        #[arg(long, conflicts_with = "plan")]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the scheme catalog as JSON Lines, one instantiated scheme per line.
    ExportSchemes {
        #[arg(long, default_value_t = 3)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct SeqArgs {
    #[arg(long)]
    lattice: LatticeKind,
    #[arg(long, requires = "n", conflicts_with = "sequence")]
    d: Option<u64>,
    #[arg(long, requires = "d")]
    n: Option<u64>,
    /// Explicit nondecreasing sequence, e.g. 2,3,3,5.
    #[arg(long, value_delimiter = ',')]
    sequence: Option<Vec<u64>>,
}

impl SeqArgs {
    fn spec(&self) -> Result<SequenceSpec> {
        let spec = match (&self.sequence, self.d, self.n) {
            (Some(s), _, _) => SequenceSpec::Explicit(s.clone()),
            (None, Some(d), Some(n)) => SequenceSpec::dn(d, n),
            _ => bail!("give --d and --n, or --sequence"),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageFormat {
    Svg,
    Ppm,
}

/// Outcome of a subcommand that ran to completion.
enum Verdict {
    Ok,
    Failed,
}

impl Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Ok
        } else {
            Verdict::Failed
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => match std::io::stdout().write_all(bytes) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => Ok(r?),
        },
    }
}

fn pattern_from(file: Option<&Path>) -> Result<PatternGrid> {
    Ok(match file {
        Some(p) => load_pattern(p)?,
        None => shipped_pattern()?,
    })
}

fn load_plans(path: &Path) -> Result<Vec<ColoringPlan>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    } else {
        Ok(vec![ColoringPlan::from_json(&text)?])
    }
}

fn run(command: Command) -> Result<Verdict> {
    match command {
        Command::Distance { lattice, from, to } => {
            println!("{}", distance(lattice, from, to));
            Ok(Verdict::Ok)
        }
        Command::Ball {
            lattice,
            radius,
            center,
            sphere: use_sphere,
            list,
        } => {
            let (verts, formula) = if use_sphere {
                (
                    sphere(lattice, center, radius),
                    sphere_size_formula(lattice, radius as i64)?,
                )
            } else {
                (
                    ball(lattice, center, radius),
                    ball_size_formula(lattice, radius as i64)?,
                )
            };
            println!("{}", verts.len());
            if list {
                for v in &verts {
                    println!("{v}");
                }
            }
            if verts.len() as u64 != formula {
                println!("closed form gives {formula}");
                return Ok(Verdict::Failed);
            }
            Ok(Verdict::Ok)
        }
        Command::Karea { lattice, k, direct } => {
            let formula = k_area_formula(lattice, k)?;
            println!("{}", fmt_rational(&formula));
            if let Some(center) = direct {
                let d = k_area_direct(lattice, k, center)?;
                println!("direct: {}", fmt_rational(&d));
                return Ok(Verdict::from(d == formula));
            }
            Ok(Verdict::Ok)
        }
        Command::VerifyPacking {
            lattice,
            base,
            g1,
            g2,
            offset,
            radius,
        } => {
            let spec = match (base, g1, g2) {
                (Some(i), _, _) => base_packing(lattice, i)
                    .with_context(|| format!("no base packing X_{i} for {lattice}"))?,
                (None, Some(g1), Some(g2)) => {
                    LinearPackingSpec::new(lattice, g1, g2, Vertex::ORIGIN)?
                }
                _ => bail!("give --base or both --g1 and --g2"),
            }
            .with_offset(offset);
            let cert = spec.min_pair_distance(radius.unwrap_or(0));
            println!("packing {spec}");
            println!("density: {}", fmt_rational(&spec.density()));
            println!("min distance: {}", cert.min_distance);
            println!("certified radius: {}", cert.certified_radius());
            match radius {
                Some(r) if cert.is_valid() => {
                    println!("OK: {r}-packing");
                    Ok(Verdict::Ok)
                }
                Some(r) => {
                    println!("FAILED: not a {r}-packing");
                    Ok(Verdict::Failed)
                }
                None => Ok(Verdict::Ok),
            }
        }
        Command::VerifyScheme { id, k, m, all, cap } => {
            let mut jobs = Vec::new();
            if all {
                for e in scheme_catalog() {
                    for (k, m) in e.default_params(cap) {
                        jobs.push(e.instantiate(k, m)?);
                    }
                }
            } else {
                let id = id.expect("clap requires --id without --all");
                jobs.push(find_scheme(&id)?.instantiate(k, m)?);
            }
            let mut failed = 0;
            for s in &jobs {
                let r = s.verify();
                if all && r.passed() {
                    println!("scheme {}: OK", r.name);
                } else {
                    println!("{r}");
                }
                if !r.passed() {
                    failed += 1;
                }
            }
            if all {
                println!("{} schemes, {} failed", jobs.len(), failed);
            }
            Ok(Verdict::from(failed == 0))
        }
        Command::VerifyPlan {
            plan,
            file,
            all,
            dump,
        } => {
            let plans: Vec<ColoringPlan> = match (plan, file, all) {
                (Some(name), _, _) => vec![find_plan(&name)?.clone()],
                (None, Some(path), _) => load_plans(&path)?,
                (None, None, true) => plan_catalog().to_vec(),
                _ => bail!("give --plan, --file or --all"),
            };
            if dump.is_some() && plans.len() != 1 {
                bail!("--dump needs exactly one plan");
            }
            let mut ok = true;
            for p in &plans {
                let (report, built) = verify_plan(p);
                if plans.len() > 1 {
                    println!("{}: {report}", p.name);
                } else {
                    println!("{report}");
                }
                ok &= report.passed();
                if let (Some(path), Some(b)) = (&dump, built) {
                    write_out(Some(path), b.coloring.export_text().as_bytes())?;
                }
            }
            Ok(Verdict::from(ok))
        }
        Command::Feasibility {
            seq,
            horizon,
            report,
        } => {
            let spec = seq.spec()?;
            let cert = feasibility_sum(seq.lattice, &spec, horizon)?;
            if report {
                println!("{cert}");
            }
            if cert.is_infeasible() {
                println!("INFEASIBLE (chi = infinity)");
                Ok(Verdict::Ok)
            } else {
                println!(
                    "INCONCLUSIVE (density bound {} >= 1)",
                    lattice_packing::density::decimal_up(&cert.total_bound, 6)
                );
                Ok(Verdict::Failed)
            }
        }
        Command::LowerBound { seq, cap } => {
            let spec = seq.spec()?;
            match density_lower_bound(seq.lattice, &spec, cap) {
                Ok(b) => {
                    println!("{b}");
                    Ok(Verdict::Ok)
                }
                Err(e) => {
                    println!("no finite bound: {e}");
                    Ok(Verdict::Failed)
                }
            }
        }
        Command::Corollary { lattice, sequence } => match corollary_bound(lattice, &sequence) {
            Err(e @ CorollaryError::Inapplicable { .. }) => {
                println!("{e}");
                Ok(Verdict::Failed)
            }
            Err(e) => Err(e.into()),
            Ok(None) => {
                println!("no witness within the prefix");
                Ok(Verdict::Failed)
            }
            Ok(Some(w)) => {
                println!("{w}");
                let (report, _) = verify_plan(&w.to_plan());
                println!("coloring: {report}");
                Ok(Verdict::from(w.validate().is_ok() && report.passed()))
            }
        },
        Command::DistanceChromatic { lattice, d } => {
            if d == 0 {
                bail!("--d must be positive");
            }
            let c = distance_check(lattice, d);
            println!("{}", c.formula);
            println!("density floor: {}", c.density_floor);
            if let Some(p) = c.partition {
                println!("partition into {d}-packings: {p}");
            }
            if let Some(flag) = &c.flag {
                println!("FLAG: {flag}");
            }
            Ok(Verdict::Ok)
        }
        Command::Tables { format, out } => {
            let report = reproduce_tables();
            let text = match format {
                TableFormat::Text => report.to_text(),
                TableFormat::Csv => report.to_csv(),
                TableFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
            };
            write_out(out.as_deref(), text.as_bytes())?;
            Ok(Verdict::from(report.all_match()))
        }
        Command::PatternVerify { file, plane } => {
            let grid = pattern_from(file.as_deref())?;
            let spec = SequenceSpec::Explicit((1..=17).collect());
            let coloring = grid.to_coloring();
            let r = if plane {
                verify_s_coloring(&coloring, &spec)
            } else {
                verify_torus(&coloring, &spec)
            };
            println!("{r}");
            Ok(Verdict::from(r.ok))
        }
        Command::Derive33 { file, dump } => {
            let grid = pattern_from(file.as_deref())?;
            let derived = match derive_33_coloring(&grid) {
                Ok(d) => d,
                Err(e) => {
                    println!("FAILED: {e}");
                    return Ok(Verdict::Failed);
                }
            };
            for c in &derived.claims {
                let verdict = if c.holds { "holds" } else { "FAILS" };
                println!("claim {verdict}: {} ({})", c.statement, c.detail);
            }
            for f in &derived.flags {
                println!("FLAG: {f}");
            }
            let r = verify_s_coloring(&derived.coloring, &SequenceSpec::dn(3, 3));
            println!("{r}");
            if let Some(path) = dump {
                write_out(Some(&path), derived.coloring.export_text().as_bytes())?;
            }
            Ok(Verdict::from(r.ok && r.color_count <= 33))
        }
        Command::Render {
            plan,
            pattern,
            derive_33,
            format,
            out,
            cell,
        } => {
            let coloring: PeriodicColoring = if let Some(name) = plan {
                let (report, built) = verify_plan(find_plan(&name)?);
                match built {
                    Some(b) if report.passed() => b.coloring,
                    _ => {
                        println!("{report}");
                        return Ok(Verdict::Failed);
                    }
                }
            } else if pattern {
                shipped_pattern()?.to_coloring()
            } else if derive_33 {
                derive_33_coloring(&shipped_pattern()?)?.coloring
            } else {
                bail!("give --plan, --pattern or --derive-33");
            };
            let bytes = match format {
                ImageFormat::Svg => render_svg(&coloring, cell).into_bytes(),
                ImageFormat::Ppm => render_ppm(&coloring, cell),
            };
            write_out(Some(&out), &bytes)?;
            println!(
                "wrote {} ({}x{} vertices, {} colors)",
                out.display(),
                coloring.width,
                coloring.height,
                coloring.color_count()
            );
            Ok(Verdict::Ok)
        }
        Command::ExportPlan { plan, all, out } => {
            let text = if all {
                serde_json::to_string_pretty(plan_catalog())?
            } else {
                find_plan(&plan.expect("clap requires --plan without --all"))?.to_json()
            };
            write_out(out.as_deref(), (text + "\n").as_bytes())?;
            Ok(Verdict::Ok)
        }
        Command::ExportSchemes { cap, out } => {
            let mut text = String::new();
            for e in scheme_catalog() {
                for (k, m) in e.default_params(cap) {
                    let s = e.instantiate(k, m)?;
                    let record = serde_json::json!({
                        "id": e.id,
                        "k": k,
                        "m": m,
                        "kind": e.kind,
                        "description": e.description,
                        "scheme": s,
                    });
                    text.push_str(&serde_json::to_string(&record)?);
                    text.push('\n');
                }
            }
            write_out(out.as_deref(), text.as_bytes())?;
            Ok(Verdict::Ok)
        }
    }
}
