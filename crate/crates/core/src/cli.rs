//! Command-line front end: `verify`, `witness` and `sample`.
//!
//! Ladder settings come from an optional TOML file with the keys `dim`, `phi`,
//! `K`, `signed` and `t_rule`; command-line flags override the file.
//!
//! Exit codes: 0 when everything passes, 1 when a suite check fails, 2 for a
//! configuration error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::block::PointEval;
use crate::error::{LabError, Result};
use crate::ladder::{build_ladder, witness_csv, LadderParams, Side, TRule, WitnessRecord, DEFAULT_LEVELS};
use crate::operators::{det_hessian, mean_curvature};
use crate::phi::AdmissiblePhi;
use crate::verify::{run_suite, Check, Suite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "regularity-lab", version, about = "Numerical checks for the ladder construction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and print a pass/fail table.
    Verify(VerifyArgs),
    /// Emit the per-level witness table.
    Witness(LadderArgs),
    /// Sample u and its derivatives on a planar grid.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct LadderArgs {
    /// Profile: `log`, `loglog` or `pow:<alpha>` with alpha in (0, 1).
    #[arg(long)]
    pub phi: Option<String>,
    /// Ambient dimension n >= 2.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Truncation depth (1..=12).
    #[arg(long = "K", alias = "k")]
    pub levels: Option<usize>,
    /// Use both the plus and the minus balls (the default).
    #[arg(long, overrides_with = "single_sum")]
    pub signed: bool,
    /// Keep only the balls around +R_k ζ₀.
    #[arg(long = "single-sum")]
    pub single_sum: bool,
    /// `default` or `recip:<c>` for t_k = c/(k+1).
    #[arg(long = "t-rule")]
    pub t_rule: Option<String>,
    /// Seed for the quasi-random sample points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with ladder settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// One of phi, block, ladder, ma, geometry, radial, gallery, all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[command(flatten)]
    pub ladder: LadderArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Points per axis.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Ball level; the grid covers the local square [-1, 1]² in (y₁, y₂).
    #[arg(long, conflicts_with = "region")]
    pub ball: Option<usize>,
    /// Side of the ball.
    #[arg(long, value_enum, default_value_t = SideArg::Plus)]
    pub side: SideArg,
    /// Global box `x0,x1,y0,y1` in the (x₁, x₂) plane; other coordinates are 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub region: Option<Vec<f64>>,
    #[command(flatten)]
    pub ladder: LadderArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

/// Contents of the optional TOML file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dim: Option<usize>,
    pub phi: Option<String>,
    #[serde(rename = "K")]
    pub levels: Option<usize>,
    pub signed: Option<bool>,
    pub t_rule: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))
    }

    pub fn from_params(p: &LadderParams) -> Self {
        Self {
            dim: Some(p.n),
            phi: Some(p.phi.to_string()),
            levels: Some(p.levels),
            signed: Some(p.signed),
            t_rule: Some(p.t_rule.to_string()),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain table")
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub phi: AdmissiblePhi,
    pub dim: usize,
    #[serde(rename = "K")]
    pub levels: usize,
    pub signed: bool,
    pub t_rule: TRule,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub suite: Option<String>,
}

impl RunConfig {
    pub fn resolve(command: &str, args: &LadderArgs, suite: Option<String>) -> Result<Self> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let phi_text = args.phi.clone().or(file.phi).unwrap_or_else(|| "log".into());
        let t_text = args.t_rule.clone().or(file.t_rule).unwrap_or_else(|| "default".into());
        let signed = if args.single_sum {
            false
        } else if args.signed {
            true
        } else {
            file.signed.unwrap_or(true)
        };
        Ok(Self {
            command: command.into(),
            phi: phi_text.parse()?,
            dim: args.dim.or(file.dim).unwrap_or(3),
            levels: args.levels.or(file.levels).unwrap_or(DEFAULT_LEVELS),
            signed,
            t_rule: t_text.parse()?,
            out: args.out.clone(),
            format: args.format,
            seed: args.seed,
            suite,
        })
    }

    pub fn ladder_params(&self) -> Result<LadderParams> {
        let p = LadderParams::new(self.dim, self.phi)
            .with_levels(self.levels)
            .with_signed(self.signed)
            .with_t_rule(self.t_rule);
        p.validate()?;
        Ok(p)
    }
}

/// What a command produced, before it is written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub code: i32,
    pub body: String,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema: u32,
    config: FileConfig,
    seed: u64,
    suite: &'a str,
    passed: bool,
    checks: &'a [Check],
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput> {
    let suite_name = cfg.suite.as_deref().unwrap_or("all");
    let suite: Suite = suite_name.parse()?;
    let params = cfg.ladder_params()?;
    let checks = run_suite(suite, params, cfg.seed)?;
    let passed = checks.iter().all(|c| !c.failed());
    let body = match cfg.format {
        Format::Json => {
            let report = VerifyReport {
                schema: SCHEMA_VERSION,
                config: FileConfig::from_params(&params),
                seed: cfg.seed,
                suite: suite_name,
                passed,
                checks: &checks,
            };
            serde_json::to_string_pretty(&report).expect("serializable") + "\n"
        }
        Format::Csv => verify_table(&checks),
    };
    Ok(CommandOutput {
        code: if passed { EXIT_PASS } else { EXIT_FAILURE },
        body,
    })
}

fn verify_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        let status = match c.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        let pad = width - c.name.chars().count();
        let _ = writeln!(s, "{status}  {:<9}{}{}  {}", c.suite, c.name, " ".repeat(pad), c.detail);
    }
    let failed = checks.iter().filter(|c| c.failed()).count();
    let _ = writeln!(s, "{} checks, {failed} failed", checks.len());
    s
}

#[derive(Serialize)]
struct WitnessReport<'a> {
    schema: u32,
    config: FileConfig,
    witnesses: &'a [WitnessRecord],
}

pub fn cmd_witness(cfg: &RunConfig) -> Result<CommandOutput> {
    let params = cfg.ladder_params()?;
    let ladder = build_ladder(params)?;
    let records = ladder.witness_sequence();
    let body = match cfg.format {
        Format::Csv => witness_csv(&records),
        Format::Json => {
            let report = WitnessReport {
                schema: SCHEMA_VERSION,
                config: FileConfig::from_params(&params),
                witnesses: &records,
            };
            serde_json::to_string_pretty(&report).expect("serializable") + "\n"
        }
    };
    Ok(CommandOutput { code: EXIT_PASS, body })
}

/// Area covered by [`cmd_sample`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleRegion {
    /// Local square `[-1, 1]²` in ball `k`.
    Ball { k: usize, side: Side },
    /// Global box `[x0, x1] × [y0, y1]` in the `(x₁, x₂)` plane.
    Box { x0: f64, x1: f64, y0: f64, y1: f64 },
}

fn sample_header(n: usize) -> String {
    let mut cols = vec!["a".to_string(), "b".to_string(), "value".to_string()];
    cols.extend((1..=n).map(|i| format!("grad_{i}")));
    for i in 1..=n {
        for j in i..=n {
            cols.push(format!("hess_{i}{j}"));
        }
    }
    cols.extend(["laplacian", "det", "H"].map(String::from));
    cols.join(",")
}

fn sample_row(out: &mut String, a: f64, b: f64, pe: &PointEval) {
    let n = pe.gradient.len();
    let _ = write!(out, "{a:.16e},{b:.16e},{:.16e}", pe.value);
    for g in pe.gradient.iter() {
        let _ = write!(out, ",{g:.16e}");
    }
    for i in 0..n {
        for j in i..n {
            let _ = write!(out, ",{:.16e}", pe.hessian[(i, j)]);
        }
    }
    let h = mean_curvature(pe).h;
    let _ = writeln!(out, ",{:.16e},{:.16e},{h:.16e}", pe.laplacian, det_hessian(pe));
}

/// Grid samples of `u`, one row per node, rows ordered by the second
/// coordinate and then the first. Columns `a,b` are the plotting coordinates
/// (local `y₁, y₂` in a ball, global `x₁, x₂` in a box); derivatives are
/// always with respect to the global variable.
pub fn cmd_sample(cfg: &RunConfig, region: SampleRegion, grid: usize) -> Result<CommandOutput> {
    if grid < 2 {
        return Err(LabError::Config("grid needs at least 2 points per axis".into()));
    }
    let params = cfg.ladder_params()?;
    let ladder = build_ladder(params)?;
    let n = params.n;
    let (lo_a, hi_a, lo_b, hi_b) = match region {
        SampleRegion::Ball { k, .. } => {
            if k == 0 || k > params.levels {
                return Err(LabError::Config(format!("ball {k} is outside 1..={}", params.levels)));
            }
            (-1.0, 1.0, -1.0, 1.0)
        }
        SampleRegion::Box { x0, x1, y0, y1 } => {
            if !(x0 < x1 && y0 < y1) {
                return Err(LabError::Config("box needs x0 < x1 and y0 < y1".into()));
            }
            (x0, x1, y0, y1)
        }
    };
    let node = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (grid - 1) as f64;
    let mut body = sample_header(n);
    body.push('\n');
    for j in 0..grid {
        let b = node(lo_b, hi_b, j);
        for i in 0..grid {
            let a = node(lo_a, hi_a, i);
            let mut p = vec![0.0; n];
            p[0] = a;
            p[1] = b;
            let pe = match region {
                SampleRegion::Ball { k, side } => ladder.eval_local(k, side, &p),
                SampleRegion::Box { .. } => ladder.u_eval(&p),
            };
            sample_row(&mut body, a, b, &pe);
        }
    }
    Ok(CommandOutput { code: EXIT_PASS, body })
}

fn dispatch(cli: Cli) -> Result<(CommandOutput, Option<PathBuf>)> {
    match cli.command {
        Command::Verify(a) => {
            let cfg = RunConfig::resolve("verify", &a.ladder, Some(a.suite))?;
            Ok((cmd_verify(&cfg)?, cfg.out))
        }
        Command::Witness(a) => {
            let cfg = RunConfig::resolve("witness", &a, None)?;
            Ok((cmd_witness(&cfg)?, cfg.out))
        }
        Command::Sample(a) => {
            let cfg = RunConfig::resolve("sample", &a.ladder, None)?;
            let region = match (&a.region, a.ball) {
                (Some(r), _) => match r[..] {
                    [x0, x1, y0, y1] => SampleRegion::Box { x0, x1, y0, y1 },
                    _ => return Err(LabError::Config("--region takes x0,x1,y0,y1".into())),
                },
                (None, k) => SampleRegion::Ball {
                    k: k.unwrap_or(1),
                    side: match a.side {
                        SideArg::Plus => Side::Plus,
                        SideArg::Minus => Side::Minus,
                    },
                },
            };
            Ok((cmd_sample(&cfg, region, a.grid)?, cfg.out))
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes its
/// output to `--out` or `stdout`. Diagnostics go to `stderr`. Returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (output, path) = match dispatch(cli) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return match e {
                LabError::Io(_) => EXIT_FAILURE,
                _ => EXIT_CONFIG,
            };
        }
    };
    let written = match path {
        Some(p) => fs::write(&p, &output.body).map_err(|e| format!("{}: {e}", p.display())),
        None => stdout.write_all(output.body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_FAILURE;
    }
    output.code
}
