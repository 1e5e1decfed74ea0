//! `perfdisc`: accumulation-time fields for the perforated unit disc.

mod presets;

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use perfdisc::field_io::{
    compare_fields, sweep, sweep_with, Evaluator, FieldGrid, FieldKind, SweepOptions, VERSION,
};
use perfdisc::morphogen::{
    acc_time_1d_exact, acc_time_1d_laplace, acc_time_1d_numeric, truncated_acc_time_1d, DEFAULT_LAPLACE_S,
};
use perfdisc::oracle::{acc_time_fd_on, build_grid_with, HoleBoundary};
use perfdisc::spectral::principal_eigenvalue;
use perfdisc::{Morphogen1DParams, Point, RawScene, Scene};
use serde_json::{json, Value};

const DEFAULT_S_BASE: f64 = perfdisc::asymptotics::DEFAULT_S_BASE;

#[derive(Parser)]
#[command(name = "perfdisc", version, about = "Accumulation time in a unit disc with small absorbing holes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state concentration u*(x).
    Steady(FieldArgs),
    /// Order-one accumulation time T(x).
    Acctime(FieldArgs),
    /// Accumulation time from the Laplace-space solution at finite s.
    AcctimeNp {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = DEFAULT_S_BASE)]
        s_base: f64,
    },
    /// Single-mode accumulation time T0(x) (one hole only).
    T0(FieldArgs),
    /// Principal eigenvalue and relaxation time, as JSON.
    Eigen {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-difference accumulation time on a square lattice.
    Oracle(OracleArgs),
    /// Error report of the finite-s asymptotics against the lattice solution.
    Compare {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Radius masked around hole centres; defaults to 3ε.
        #[arg(long)]
        exclusion: Option<f64>,
        /// Radius masked around x0 when Γ0 > 0.
        #[arg(long, default_value_t = 0.1)]
        source_exclusion: f64,
    },
    /// One-dimensional accumulation time profiles as CSV.
    Sweep1d(Sweep1dArgs),
    /// List the named scenes, or write them to a directory as JSON.
    Presets {
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SceneArgs {
    /// Scene JSON file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    scene: Option<PathBuf>,
    /// Named scene (see `presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Override the logarithmic gauge.
    #[arg(long, conflicts_with = "epsilon")]
    nu: Option<f64>,
    /// Override the hole radius.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Accept scenes whose initial mass exceeds the growth condition.
    #[arg(long)]
    allow_overshoot: bool,
}

impl SceneArgs {
    fn load(&self) -> anyhow::Result<Scene> {
        let mut raw: RawScene = match (&self.scene, &self.preset) {
            (Some(path), _) => {
                let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
                serde_json::from_reader(io::BufReader::new(file)).map_err(perfdisc::Error::from)?
            }
            (None, Some(name)) => match presets::find(name) {
                Some(p) => p.scene,
                None => bail!("unknown preset `{name}`"),
            },
            (None, None) => unreachable!("clap requires a scene source"),
        };
        if let Some(nu) = self.nu {
            raw.nu = Some(nu);
            raw.epsilon = None;
        }
        if let Some(eps) = self.epsilon {
            raw.epsilon = Some(eps);
            raw.nu = None;
        }
        raw.allow_overshoot |= self.allow_overshoot;
        Ok(raw.validate()?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Cut {
    R,
    Theta,
}

#[derive(Args)]
struct FieldArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// Nodes per side of the sampling lattice over [-1, 1]^2.
    #[arg(long, default_value_t = 100)]
    grid: usize,
    /// Radius masked around holes and x0; defaults to 2ε.
    #[arg(long)]
    exclusion: Option<f64>,
    /// Emit a line profile instead of a 2D field.
    #[arg(long, value_enum)]
    cut: Option<Cut>,
    /// Polar angle of a radial cut.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Radius of an angular cut.
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    /// Samples along a cut.
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Boundary {
    Ghost,
    Staircase,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// Lattice spacing.
    #[arg(long, default_value_t = 1.0 / 128.0)]
    h: f64,
    #[arg(long, default_value_t = DEFAULT_S_BASE)]
    s_base: f64,
    /// Treatment of hole boundaries on the lattice.
    #[arg(long, value_enum, default_value = "ghost")]
    boundary: Boundary,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Sweep1dArgs {
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 1.0)]
    j: f64,
    /// Interval length, used by the single-mode profile.
    #[arg(long, default_value_t = 50.0)]
    l: f64,
    /// Right end of the profile, in length constants.
    #[arg(long, default_value_t = 5.0)]
    x_max: f64,
    #[arg(long, default_value_t = 51)]
    points: usize,
    /// Laplace variable for the transform route, in units of k.
    #[arg(long, default_value_t = DEFAULT_LAPLACE_S)]
    s: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: Option<&Path>, value: &Value) -> anyhow::Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_grid(path: Option<&Path>, grid: &FieldGrid) -> anyhow::Result<()> {
    let mut w = output(path)?;
    grid.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn run_field(args: &FieldArgs, kind: FieldKind) -> anyhow::Result<()> {
    let scene = args.scene.load()?;
    let out = args.out.as_deref();
    let Some(cut) = args.cut else {
        let mut opts = SweepOptions::square(args.grid);
        opts.exclusion = args.exclusion;
        return write_grid(out, &sweep(&scene, kind, opts)?);
    };
    if args.points < 2 {
        bail!("a cut needs at least 2 points");
    }
    let eval = Evaluator::new(&scene, kind)?;
    let exclusion = args.exclusion.unwrap_or(2.0 * scene.epsilon());
    let mut header = json!({
        "scene_hash": scene.fingerprint(),
        "field": kind.name(),
        "version": VERSION,
        "exclusion": exclusion,
    });
    let samples: Vec<(f64, f64)> = (0..args.points)
        .map(|i| {
            let t = i as f64 / (args.points - 1) as f64;
            match cut {
                Cut::R => (t, args.theta),
                Cut::Theta => (args.radius, 2.0 * PI * t),
            }
        })
        .collect();
    match cut {
        Cut::R => header["theta"] = json!(args.theta),
        Cut::Theta => header["radius"] = json!(args.radius),
    }
    if let FieldKind::AccTimeNonperturbative { s_base } = kind {
        header["s_base"] = json!(s_base);
    }
    let mut w = output(out)?;
    writeln!(w, "# {header}")?;
    writeln!(w, "r,theta,x,y,value")?;
    for (r, theta) in samples {
        let x = Point::polar(r, theta);
        let v = if perfdisc::field_io::is_masked(&scene, x, exclusion) {
            f64::NAN
        } else {
            eval.eval(x).unwrap_or(f64::NAN)
        };
        let v = if v.is_nan() { "nan".to_string() } else { v.to_string() };
        writeln!(w, "{r},{theta},{},{},{v}", x.x, x.y)?;
    }
    w.flush()?;
    Ok(())
}

fn oracle_field(args: &OracleArgs, scene: &Scene) -> anyhow::Result<FieldGrid> {
    let boundary = match args.boundary {
        Boundary::Ghost => HoleBoundary::GhostFluid,
        Boundary::Staircase => HoleBoundary::Staircase,
    };
    let grid = build_grid_with(scene, args.h, boundary)?;
    Ok(acc_time_fd_on(&grid, scene, args.s_base)?)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Steady(a) => run_field(&a, FieldKind::SteadyState),
        Command::Acctime(a) => run_field(&a, FieldKind::AccTimeOrder1),
        Command::AcctimeNp { field, s_base } => run_field(&field, FieldKind::AccTimeNonperturbative { s_base }),
        Command::T0(a) => run_field(&a, FieldKind::TruncatedAccTime),
        Command::Eigen { scene, out } => {
            let scene = scene.load()?;
            let est = principal_eigenvalue(&scene)?;
            let report = json!({
                "lambda_root": est.lambda_root,
                "lambda_two_term": est.lambda_two_term,
                "tau": est.tau,
                "n_holes": est.n_holes,
                "scene_hash": scene.fingerprint(),
                "version": VERSION,
            });
            write_json(out.as_deref(), &report)
        }
        Command::Oracle(a) => {
            let scene = a.scene.load()?;
            write_grid(a.out.as_deref(), &oracle_field(&a, &scene)?)
        }
        Command::Compare {
            oracle,
            exclusion,
            source_exclusion,
        } => {
            let scene = oracle.scene.load()?;
            let fd = oracle_field(&oracle, &scene)?;
            let np = Evaluator::new(&scene, FieldKind::AccTimeNonperturbative { s_base: oracle.s_base })?;
            let asym = sweep_with(&scene, "acc_time_nonperturbative", SweepOptions::square(fd.nx), |x| np.eval(x))?;
            let hole_r = exclusion.unwrap_or(3.0 * scene.epsilon());
            let mut excl: Vec<(Point, f64)> = scene.centers().map(|c| (c, hole_r)).collect();
            if scene.gamma0() != 0.0 {
                excl.push((scene.x0(), source_exclusion));
            }
            let report = compare_fields(&asym, &fd, &excl)?;
            let value = json!({
                "report": report,
                "h": fd.metadata.params.get("h"),
                "s_base": oracle.s_base,
                "hole_exclusion": hole_r,
                "source_exclusion": source_exclusion,
                "scene_hash": scene.fingerprint(),
                "version": VERSION,
            });
            write_json(oracle.out.as_deref(), &value)
        }
        Command::Sweep1d(a) => {
            let p = Morphogen1DParams::new(a.d, a.k, a.j, a.l)?;
            if a.points < 2 {
                bail!("a profile needs at least 2 points");
            }
            let header = json!({
                "field": "acc_time_1d",
                "D": a.d, "k": a.k, "J": a.j, "L": a.l, "s": a.s,
                "version": VERSION,
            });
            let mut w = output(a.out.as_deref())?;
            writeln!(w, "# {header}")?;
            writeln!(w, "x,exact,numeric,laplace,truncated")?;
            for i in 0..a.points {
                let x = a.x_max * p.xi() * i as f64 / (a.points - 1) as f64;
                writeln!(
                    w,
                    "{x},{},{},{},{}",
                    acc_time_1d_exact(x, &p)?,
                    acc_time_1d_numeric(x, &p)?,
                    acc_time_1d_laplace(x, &p, a.s)?,
                    truncated_acc_time_1d(x, &p)?
                )?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Presets { out_dir } => {
            let all = presets::all();
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir)?;
                for p in &all {
                    let path = dir.join(format!("{}.json", p.name));
                    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    serde_json::to_writer_pretty(file, &p.scene)?;
                }
            }
            write_json(None, &Value::Array(all.iter().map(presets::describe).collect()))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e.downcast_ref::<perfdisc::Error>().map_or("Cli", |e| e.kind());
            let message = format!("{e:#}");
            eprintln!("{}", json!({ "error": kind, "message": message }));
            log::debug!("{e:?}");
            ExitCode::FAILURE
        }
    }
}
