use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mlsurf_core::baker_akhiezer::ba_theta_assembly;
use mlsurf_core::parse::{
    format_complex, parse_complex_list, parse_key_values, parse_period_matrix,
    parse_theta_ba_inputs,
};
use mlsurf_core::report::{
    curve_info, parse_grid, run_verification, sample_surface, with_thread_cap, write_csv,
    FamilySpec, GridSpec, TolProfile, VerifyOptions, DEFAULT_STEP,
};
use mlsurf_core::theta::{riemann_theta, LatticeTruncation};

#[derive(Parser)]
#[command(
    name = "mlsurf",
    version,
    about = "Minimal Lagrangian surfaces from reducible spectral curves"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every check over a grid and print a pass/fail report.
    Verify {
        #[command(flatten)]
        fam: FamilyArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Also write the report as JSON.
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Sample φ, E, G, β and K on a grid as CSV.
    Sample {
        #[command(flatten)]
        fam: FamilyArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the derived constants of a spectral curve.
    CurveInfo {
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Evaluate the Riemann theta function or a theta-assembled BA function.
    Theta {
        #[arg(long)]
        period_file: Option<PathBuf>,
        /// Whitespace-separated complex entries, e.g. "0.1+0.2j 0.3".
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long)]
        ba_inputs: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        x: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        y: f64,
        /// Lattice radius; chosen automatically when omitted.
        #[arg(long)]
        radius: Option<u32>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyKind {
    Spectral,
    Cone,
}

#[derive(Copy, Clone, ValueEnum)]
enum Profile {
    Strict,
    Fd,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_im: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// `key = value` file with a, b, q1, gamma_im (or family, m, n).
    #[arg(long)]
    scenario: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value = "64x64")]
    grid: String,
    #[arg(long, value_enum, default_value = "strict")]
    tol_profile: Profile,
    /// Finite-difference step.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    h: f64,
}

/// Verdict of a run that completed; errors exit with 2 instead.
enum Outcome {
    Pass,
    Fail,
}

impl FamilyArgs {
    fn resolve(&self) -> anyhow::Result<FamilySpec> {
        let mut kind = self.family;
        let (mut a, mut b, mut q1, mut g) = (self.a, self.b, self.q1, self.gamma_im);
        let (mut m, mut n) = (self.m, self.n);
        if let Some(path) = &self.scenario {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let kv = parse_key_values(&text)?;
            let num = |k: &str| -> anyhow::Result<Option<f64>> {
                kv.get(k)
                    .map(|v| {
                        v.parse::<f64>()
                            .map_err(|_| anyhow!("scenario key {k}: bad number '{v}'"))
                    })
                    .transpose()
            };
            let int = |k: &str| -> anyhow::Result<Option<u32>> {
                kv.get(k)
                    .map(|v| {
                        v.parse::<u32>()
                            .map_err(|_| anyhow!("scenario key {k}: bad integer '{v}'"))
                    })
                    .transpose()
            };
            for k in kv.keys() {
                if !["family", "a", "b", "q1", "gamma_im", "m", "n"].contains(&k.as_str()) {
                    bail!("unknown scenario key '{k}'");
                }
            }
            if let Some(f) = kv.get("family") {
                kind = Some(match f.as_str() {
                    "spectral" => FamilyKind::Spectral,
                    "cone" => FamilyKind::Cone,
                    other => bail!("unknown family '{other}'"),
                });
            }
            // command-line values override the scenario
            a = a.or(num("a")?);
            b = b.or(num("b")?);
            q1 = q1.or(num("q1")?);
            g = g.or(num("gamma_im")?);
            m = m.or(int("m")?);
            n = n.or(int("n")?);
        }
        let kind = kind.unwrap_or(if m.is_some() || n.is_some() {
            FamilyKind::Cone
        } else {
            FamilyKind::Spectral
        });
        match kind {
            FamilyKind::Spectral => {
                let need =
                    |v: Option<f64>, name: &str| v.ok_or_else(|| anyhow!("missing --{name}"));
                Ok(FamilySpec::Spectral {
                    a: need(a, "a")?,
                    b: need(b, "b")?,
                    q1: need(q1, "q1")?,
                    gamma_im: need(g, "gamma-im")?,
                })
            }
            FamilyKind::Cone => Ok(FamilySpec::Cone {
                m: m.ok_or_else(|| anyhow!("missing --m"))?,
                n: n.ok_or_else(|| anyhow!("missing --n"))?,
            }),
        }
    }
}

impl GridArgs {
    fn options(&self) -> anyhow::Result<VerifyOptions> {
        let (nx, ny) = parse_grid(&self.grid)?;
        if !(self.h > 0.0 && self.h.is_finite()) {
            bail!("--h must be a positive number");
        }
        let mut o = VerifyOptions::new(GridSpec::periodic(nx, ny));
        o.profile = match self.tol_profile {
            Profile::Strict => TolProfile::Strict,
            Profile::Fd => TolProfile::Fd,
        };
        o.h = self.h;
        Ok(o)
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var("MLSURF_THREADS").ok()?.trim().parse().ok()
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.cmd {
        Cmd::Verify {
            fam,
            grid,
            json_out,
        } => {
            let spec = fam.resolve()?;
            let opts = grid.options()?;
            let report = with_thread_cap(thread_cap(), || run_verification(&spec, &opts))?;
            print!("{}", report.to_text());
            if let Some(path) = json_out {
                let json = serde_json::to_string_pretty(&report)?;
                fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if report.pass {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Cmd::Sample { fam, grid, out } => {
            let spec = fam.resolve()?;
            let opts = grid.options()?;
            let rows = with_thread_cap(thread_cap(), || sample_surface(&spec, &opts))?;
            match out {
                Some(path) => {
                    let f = fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    write_csv(&rows, std::io::BufWriter::new(f))?;
                }
                None => write_csv(&rows, std::io::stdout().lock())?,
            }
            Ok(Outcome::Pass)
        }
        Cmd::CurveInfo { fam } => match fam.resolve()? {
            FamilySpec::Spectral { a, b, q1, gamma_im } => {
                print!("{}", curve_info(a, b, q1, gamma_im)?);
                Ok(Outcome::Pass)
            }
            FamilySpec::Cone { .. } => bail!("curve-info needs a spectral family"),
        },
        Cmd::Theta {
            period_file,
            z,
            ba_inputs,
            x,
            y,
            radius,
        } => {
            if let Some(path) = ba_inputs {
                let text = fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let inp = parse_theta_ba_inputs(&text)?;
                let trunc = match radius {
                    Some(r) => LatticeTruncation::new(r)?,
                    None => LatticeTruncation::auto(&inp.b, 0.0),
                };
                let v = ba_theta_assembly(&inp, x, y, &trunc)?;
                println!("{}", format_complex(v));
                return Ok(Outcome::Pass);
            }
            let path =
                period_file.ok_or_else(|| anyhow!("theta needs --period-file or --ba-inputs"))?;
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let b = parse_period_matrix(&text)?;
            let z = match z {
                Some(s) => parse_complex_list(&s)?,
                None => vec![Default::default(); b.genus()],
            };
            let trunc = match radius {
                Some(r) => LatticeTruncation::new(r)?,
                None => LatticeTruncation::auto_for(&b, &z),
            };
            let v = riemann_theta(&z, &b, &trunc)?;
            println!("{}", format_complex(v));
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(Outcome::Pass)) => ExitCode::SUCCESS,
        Ok(Ok(Outcome::Fail)) => ExitCode::from(1),
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(1),
    }
}
