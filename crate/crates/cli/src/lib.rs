//! Command implementations for the `zpow` binary. Every command writes its
//! data either to `--out` or to standard output and is a pure function of its
//! arguments.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;
use zpow_core::asymptotics::{asymptotic_table, loglog_fit, Ray};
use zpow_core::checks::{all_pass, report_csv, verify_grid, Tolerances};
use zpow_core::discrete_log::{green_predictor, log_predictor, GreenGrid, LogGrid};
use zpow_core::gridfile::{read_grid, write_grid};
use zpow_core::ortho::{moment_hypergeometric, moment_residue};
use zpow_core::pattern::{extract_pattern, kite_overlaps, render_svg, SvgOptions};
use zpow_core::{evolve_grid, BigComplex, PowerMapGrid, PrecisionContext};

/// Environment variable holding the default mantissa precision.
pub const BITS_ENV: &str = "ZPOW_BITS";

#[derive(Parser, Debug)]
#[command(
    name = "zpow",
    version,
    about = "Discrete power map Z^a: evolution, identity checks, asymptotic tables and circle patterns"
)]
pub struct Cli {
    /// Mantissa bits of the working precision (>= 64).
    #[arg(long, global = true, env = BITS_ENV, default_value_t = 256)]
    pub bits: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evolve Z^a on {0..N}² and write a grid file; residuals go to stdout
    /// (stderr when the grid itself goes to stdout).
    Evolve(EvolveArgs),
    /// Run the identity suite; CSV columns: name,residual,tolerance,pass,site.
    /// Exit status 1 if any check fails.
    Verify(VerifyArgs),
    /// Relative error against the continuous power law; CSV columns:
    /// ray,n,m,r,rel_error,predicted_re,predicted_im,actual_re,actual_im,
    /// followed by a '#' row with the log-log slope of rel_error over r >= 20.
    Table(TableArgs),
    /// Discrete logarithm and Green's function on three rays at even sites;
    /// CSV columns: ray,n,m,r,L_re,L_im,L_err,L_dev,ell,ell_err,ell_dev where
    /// *_err is the extrapolation estimate and *_dev the distance to the
    /// asymptotic law; '#' rows give log-log slopes of the deviations.
    Loggreen(LogGreenArgs),
    /// Render the orthogonal circle pattern as SVG; a summary goes to stdout
    /// (stderr when the SVG goes to stdout).
    Pattern(PatternArgs),
    /// Moments H_s for one (n, m); CSV columns:
    /// s,residue_re,residue_im,hypergeometric_re,hypergeometric_im,rel_diff.
    Moments(MomentArgs),
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    /// Exponent in (0, 2); decimal or p/q.
    #[arg(long)]
    pub a: String,
    /// Grid size N >= 2.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "1")]
    pub a: String,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Single tolerance overriding every per-check default.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Verify this grid file instead of evolving one.
    #[arg(long, conflicts_with_all = ["a", "n"])]
    pub grid: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum RayArg {
    Diagonal,
    N2m,
    M2n,
    All,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub a: String,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = RayArg::Diagonal)]
    pub ray: RayArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LogGreenArgs {
    /// Largest lattice index on the rays.
    #[arg(long, default_value_t = 60)]
    pub n: usize,
    /// Step in a for the difference quotients.
    #[arg(long, default_value_t = 1e-12)]
    pub eps: f64,
    /// Also emit every even site of {1..W}² (ray column "window").
    #[arg(long, default_value_t = 0)]
    pub window: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PatternArgs {
    #[arg(long)]
    pub a: String,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Radius-spread and orthogonality tolerance.
    #[arg(long, default_value_t = 1e-25)]
    pub tol: f64,
    /// Side of the lower-left window probed for kite overlaps (0 skips).
    #[arg(long, default_value_t = 0)]
    pub window: usize,
    #[arg(long, default_value_t = 100.0)]
    pub scale: f64,
    #[arg(long)]
    pub no_kites: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MomentArgs {
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated configuration shared by the commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub ctx: PrecisionContext,
    pub a: Float,
}

impl RunConfig {
    pub fn new(bits: u32, a: &str) -> anyhow::Result<Self> {
        let ctx = PrecisionContext::with_bits(bits)?;
        let a = ctx.parse_real(a)?;
        if !(a > 0 && a < 2) {
            bail!("a = {} is outside (0, 2)", a.to_f64());
        }
        Ok(RunConfig { ctx, a })
    }
}

fn check_size(n: usize) -> anyhow::Result<()> {
    if n < 2 {
        bail!("N = {n} < 2");
    }
    Ok(())
}

/// Data sink plus a flag telling whether it is standard output.
fn sink(out: &Option<PathBuf>) -> anyhow::Result<(Box<dyn Write>, bool)> {
    Ok(match out {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            (Box::new(BufWriter::new(f)), false)
        }
        None => (Box::new(BufWriter::new(io::stdout())), true),
    })
}

/// Summary lines go to stdout unless the data already does.
fn summary(data_on_stdout: bool, text: &str) {
    if data_on_stdout {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
}

fn sig(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

fn evolve(cfg: &RunConfig, n: usize) -> anyhow::Result<PowerMapGrid> {
    check_size(n)?;
    evolve_grid(&cfg.a, n, &cfg.ctx).context("evolution failed")
}

fn residual_summary(g: &PowerMapGrid) -> String {
    let cr = g.cross_ratio_worst().unwrap_or((0.0, (0, 0)));
    let co = g.constraint_worst().unwrap_or((0.0, (0, 0)));
    format!(
        "a={} N={} bits={}\ncross_ratio_residual={:.3e} at {:?}\nconstraint_residual={:.3e} at {:?}\n",
        sig(&g.a, 20),
        g.size,
        g.prec(),
        cr.0,
        cr.1,
        co.0,
        co.1
    )
}

/// Runs one parsed invocation and returns the process exit status.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Evolve(args) => {
            let cfg = RunConfig::new(cli.bits, &args.a)?;
            let g = evolve(&cfg, args.n)?;
            let (mut w, on_stdout) = sink(&args.out)?;
            write_grid(&g, &mut w)?;
            w.flush()?;
            summary(on_stdout, &residual_summary(&g));
            Ok(0)
        }
        Command::Verify(args) => {
            let (g, ctx) = match &args.grid {
                Some(path) => {
                    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
                    let g = read_grid(BufReader::new(f))?;
                    let ctx = PrecisionContext::with_bits(g.prec())?;
                    (g, ctx)
                }
                None => {
                    let cfg = RunConfig::new(cli.bits, &args.a)?;
                    (evolve(&cfg, args.n)?, cfg.ctx)
                }
            };
            let tol = args.tol.map_or_else(Tolerances::default, Tolerances::uniform);
            let results = verify_grid(&g, &ctx, &tol);
            let (mut w, _) = sink(&args.out)?;
            w.write_all(report_csv(&results).as_bytes())?;
            w.flush()?;
            Ok(if all_pass(&results) { 0 } else { 1 })
        }
        Command::Table(args) => {
            let cfg = RunConfig::new(cli.bits, &args.a)?;
            let g = evolve(&cfg, args.n)?;
            let rays: Vec<Ray> = match args.ray {
                RayArg::Diagonal => vec![Ray::Diagonal],
                RayArg::N2m => vec![Ray::NTwiceM],
                RayArg::M2n => vec![Ray::MTwiceN],
                RayArg::All => Ray::ALL.to_vec(),
            };
            let (mut w, _) = sink(&args.out)?;
            writeln!(w, "ray,n,m,r,rel_error,predicted_re,predicted_im,actual_re,actual_im")?;
            let mut pts = Vec::new();
            for ray in rays {
                for row in asymptotic_table(&g, ray, &cfg.ctx)? {
                    writeln!(
                        w,
                        "{},{},{},{:.6},{:.6e},{},{},{},{}",
                        ray.name(),
                        row.n,
                        row.m,
                        row.r,
                        row.rel_error,
                        sig(&row.predicted.re, 20),
                        sig(&row.predicted.im, 20),
                        sig(&row.actual.re, 20),
                        sig(&row.actual.im, 20)
                    )?;
                    if row.r >= 20.0 {
                        pts.push((row.r, row.rel_error));
                    }
                }
            }
            if pts.len() >= 2 {
                let (s, b) = loglog_fit(&pts);
                writeln!(w, "# loglog fit over r >= 20: slope={s:.6} intercept={b:.6} points={}", pts.len())?;
            } else {
                writeln!(w, "# loglog fit over r >= 20: not enough points")?;
            }
            w.flush()?;
            Ok(0)
        }
        Command::Loggreen(args) => {
            let ctx = PrecisionContext::with_bits(cli.bits)?;
            check_size(args.n)?;
            let eps = Float::with_val(cli.bits, args.eps);
            let logs = LogGrid::compute(args.n, &eps, &ctx)?;
            let green = GreenGrid::compute(args.n + 1, &eps, &ctx)?;
            let (mut w, _) = sink(&args.out)?;
            writeln!(w, "ray,n,m,r,L_re,L_im,L_err,L_dev,ell,ell_err,ell_dev")?;
            let (mut pl, mut pg) = (Vec::new(), Vec::new());
            let win = args.window.min(args.n);
            let window: Vec<(usize, usize)> =
                (1..=win).flat_map(|n| (1..=win).map(move |m| (n, m))).collect();
            let groups = Ray::ALL
                .iter()
                .map(|ray| (ray.name(), ray.sites(args.n).collect::<Vec<_>>()))
                .chain(std::iter::once(("window", window)));
            for (name, sites) in groups {
                for (n, m) in sites.into_iter().filter(|(n, m)| (n + m) % 2 == 0) {
                    let l = logs.get(n, m)?;
                    let e = green.get(n, m)?;
                    let ldev = (&l.value - &log_predictor(n, m, &ctx)?).abs().to_f64();
                    let gdev = (e.value.clone() - green_predictor(n, m, &ctx)?).abs().to_f64();
                    let r = (n as f64).hypot(m as f64);
                    writeln!(
                        w,
                        "{name},{n},{m},{r:.6},{},{},{:.3e},{:.6e},{},{:.3e},{:.6e}",
                        sig(&l.value.re, 20),
                        sig(&l.value.im, 20),
                        l.error,
                        ldev,
                        sig(&e.value, 20),
                        e.error,
                        gdev
                    )?;
                    if name == Ray::Diagonal.name() && r >= 30.0 {
                        pl.push((r, ldev));
                        pg.push((r, gdev));
                    }
                }
            }
            for (name, pts) in [("L_dev", &pl), ("ell_dev", &pg)] {
                if pts.len() >= 2 {
                    let (s, b) = loglog_fit(pts);
                    writeln!(w, "# {name} loglog fit on n=m, r >= 30: slope={s:.6} intercept={b:.6}")?;
                }
            }
            w.flush()?;
            Ok(0)
        }
        Command::Pattern(args) => {
            let cfg = RunConfig::new(cli.bits, &args.a)?;
            let g = evolve(&cfg, args.n)?;
            let doc = extract_pattern(&g, args.tol)?;
            let opts = SvgOptions {
                scale: args.scale,
                draw_kites: !args.no_kites,
                ..SvgOptions::default()
            };
            let svg = render_svg(&doc, &opts)?;
            let (mut w, on_stdout) = sink(&args.out)?;
            w.write_all(&svg)?;
            w.flush()?;
            let mut text = format!(
                "circles={} points={} kites={}\nmax_radius_spread={:.3e}\nmax_orthogonality={:.3e}\nnegative_kites={}\n",
                doc.circles.len(),
                doc.points.len(),
                doc.kites.len(),
                doc.max_spread,
                doc.max_orthogonality,
                doc.negative_kites().len()
            );
            if args.window > 0 {
                let overlaps = kite_overlaps(&doc, args.window.min(args.n));
                text.push_str(&format!("kite_overlaps={}\n", overlaps.len()));
            }
            summary(on_stdout, &text);
            Ok(0)
        }
        Command::Moments(args) => {
            let cfg = RunConfig::new(cli.bits, &args.a)?;
            if args.n == 0 || args.m == 0 {
                bail!("n and m must be positive");
            }
            let (mut w, _) = sink(&args.out)?;
            writeln!(w, "s,residue_re,residue_im,hypergeometric_re,hypergeometric_im,rel_diff")?;
            for s in 0..args.n + args.m {
                let r = moment_residue(s, args.n, args.m, &cfg.a, &cfg.ctx)?;
                let (hr, hi, d) = match moment_hypergeometric(s, args.n, args.m, &cfg.a, &cfg.ctx) {
                    Ok(h) => {
                        let d = rel(&h.value, &r);
                        (sig(&h.value.re, 20), sig(&h.value.im, 20), format!("{d:.3e}"))
                    }
                    Err(_) => (String::new(), String::new(), String::new()),
                };
                writeln!(w, "{s},{},{},{hr},{hi},{d}", sig(&r.re, 20), sig(&r.im, 20))?;
            }
            w.flush()?;
            Ok(0)
        }
    }
}

fn rel(x: &BigComplex, y: &BigComplex) -> f64 {
    ((x - y).abs() / y.abs()).to_f64()
}
