mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::ExperimentConfig;
use output::{Manifest, OutDir};

/// Exit status when a run finished but missed a tolerance under `--strict`.
const EXIT_TOLERANCE: u8 = 3;

#[derive(Parser)]
#[command(name = "binsamp", version, about = "Walsh sampling and boundary wavelet reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file of `[section]` and `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit nonzero when any computation misses its tolerance.
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for the measurement noise.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// transform: forward|inverse; reconstruct: gs|pbdw|truncated-walsh|all;
    /// gramian: wht|direct.
    #[arg(long, global = true)]
    method: Option<String>,
    /// Daubechies order.
    #[arg(long = "p", global = true)]
    p: Option<String>,
    /// Top level; `2^R` functions per axis.
    #[arg(long = "R", global = true)]
    r: Option<String>,
    /// Coarsest level.
    #[arg(long = "J0", global = true)]
    j0: Option<String>,
    /// Dimension.
    #[arg(long = "d", global = true)]
    d: Option<String>,
    /// Grid depth.
    #[arg(long = "q", global = true)]
    q: Option<String>,
    /// Stability threshold.
    #[arg(long, global = true)]
    theta: Option<String>,
    /// Walsh samples per axis.
    #[arg(long = "M", global = true)]
    m: Option<String>,
    /// kaczmarz|paley|natural.
    #[arg(long, global = true)]
    ordering: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Discrete Walsh transform of a sample file.
    Transform {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Stable sampling rate for levels R_min..=R.
    Ssr {
        #[arg(long = "R-min")]
        r_min: Option<String>,
        #[arg(long)]
        granularity: Option<String>,
        #[arg(long)]
        cap: Option<String>,
    },
    /// Reconstruct a signal from its Walsh samples.
    Reconstruct {
        /// cos|step-mix.
        #[arg(long)]
        signal: Option<String>,
        /// Grid samples of a custom signal.
        #[arg(long)]
        signal_file: Option<PathBuf>,
        /// Standard deviation of additive Gaussian measurement noise.
        #[arg(long)]
        noise_sigma: Option<String>,
        /// Basis exported by the gramian command.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Dump the cross-Gramian and the basis.
    Gramian {
        /// csv|binary.
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Walsh decay profile of the scaling-function pieces.
    Decay {
        #[arg(long, allow_negative_numbers = true)]
        piece: Option<String>,
        #[arg(long)]
        m_max: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Transform { .. } => "transform",
            Command::Ssr { .. } => "ssr",
            Command::Reconstruct { .. } => "reconstruct",
            Command::Gramian { .. } => "gramian",
            Command::Decay { .. } => "decay",
        }
    }
}

fn path_str(p: &std::path::Path) -> String {
    p.to_string_lossy().into_owned()
}

/// Flags as `(section, key, value)` overrides, applied after the file.
fn overrides(cli: &Cli) -> binsamp::Result<Vec<(&'static str, &'static str, String)>> {
    let mut v = Vec::new();
    let mut push = |s, k, val: &Option<String>| {
        if let Some(x) = val {
            v.push((s, k, x.clone()));
        }
    };
    push("wavelet", "p", &cli.p);
    push("wavelet", "R", &cli.r);
    push("wavelet", "J0", &cli.j0);
    push("wavelet", "d", &cli.d);
    push("wavelet", "q", &cli.q);
    push("sampling", "theta", &cli.theta);
    push("sampling", "M", &cli.m);
    push("sampling", "ordering", &cli.ordering);
    push("output", "seed", &cli.seed);
    push("output", "dir", &cli.out.as_deref().map(path_str));
    match &cli.command {
        Command::Transform { input } => push("transform", "input", &input.as_deref().map(path_str)),
        Command::Ssr {
            r_min,
            granularity,
            cap,
        } => {
            push("ssr", "R_min", r_min);
            push("ssr", "granularity", granularity);
            push("ssr", "cap", cap);
        }
        Command::Reconstruct {
            signal,
            signal_file,
            noise_sigma,
            basis,
        } => {
            push("signal", "builtin", signal);
            push("signal", "file", &signal_file.as_deref().map(path_str));
            push("noise", "sigma", noise_sigma);
            push("wavelet", "basis_file", &basis.as_deref().map(path_str));
        }
        Command::Gramian { format, basis } => {
            push("gramian", "format", format);
            push("wavelet", "basis_file", &basis.as_deref().map(path_str));
        }
        Command::Decay { piece, m_max } => {
            push("decay", "piece", piece);
            push("decay", "m_max", m_max);
        }
    }
    if let Some(m) = &cli.method {
        let (section, key) = match cli.command {
            Command::Transform { .. } => ("transform", "direction"),
            Command::Reconstruct { .. } => ("reconstruct", "methods"),
            Command::Gramian { .. } => ("gramian", "method"),
            _ => {
                return Err(binsamp::Error::Parse(format!(
                    "--method is not used by the {} command",
                    cli.command.name()
                )))
            }
        };
        v.push((section, key, m.clone()));
    }
    Ok(v)
}

fn resolve(cli: &Cli) -> binsamp::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| binsamp::Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_text(&text)
            .map_err(|e| binsamp::Error::Parse(format!("{}: {e}", path.display())))?;
    }
    for (section, key, value) in overrides(cli)? {
        cfg.set(section, key, &value)?;
    }
    if cli.strict {
        cfg.strict = true;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("binsamp: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut out = match OutDir::create(&cfg.out) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("binsamp: cannot create {}: {e}", cfg.out.display());
            return ExitCode::FAILURE;
        }
    };

    let start = Instant::now();
    let result = match cli.command {
        Command::Transform { .. } => commands::transform(&cfg, &mut out),
        Command::Ssr { .. } => commands::ssr(&cfg, &mut out),
        Command::Reconstruct { .. } => commands::reconstruct(&cfg, &mut out),
        Command::Gramian { .. } => commands::gramian(&cfg, &mut out),
        Command::Decay { .. } => commands::decay(&cfg, &mut out),
    };
    let elapsed = start.elapsed().as_secs_f64();

    let mut manifest = Manifest {
        command: cli.command.name().to_string(),
        config: cfg.render(),
        results: Vec::new(),
    };
    let (passed, code) = match &result {
        Ok(o) => {
            manifest.results = o.results.clone();
            let code = if cfg.strict && !o.passed {
                ExitCode::from(EXIT_TOLERANCE)
            } else {
                ExitCode::SUCCESS
            };
            (Some(o.passed), code)
        }
        Err(e) => {
            manifest.results = vec![("error".into(), e.to_string())];
            (None, ExitCode::FAILURE)
        }
    };
    let mut files = out.files().to_vec();
    files.push("manifest.txt".into());
    let text = manifest.render(elapsed, passed, &files);
    if let Err(e) = out.write("manifest.txt", &text) {
        eprintln!("binsamp: cannot write manifest: {e}");
        return ExitCode::FAILURE;
    }
    match &result {
        Ok(o) => {
            for (k, v) in &o.results {
                println!("{k} = {v}");
            }
            if !o.passed {
                eprintln!("binsamp: some computations missed their tolerance");
            }
        }
        Err(e) => eprintln!("binsamp: {e}"),
    }
    code
}
