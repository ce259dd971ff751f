//! Command-line front end: build or load a chain, then analyze one set,
//! sweep a profile, compute mixing bounds, or audit every inequality.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use isomix::error::Error;
use isomix::gradients::{self, GradP, Sign};
use isomix::io;
use isomix::isoperimetry;
use isomix::profile::{self, SetQuantity, Window};
use isomix::spectral;
use isomix::verify;
use isomix::zoo::{self, ZooSpec};
use isomix::{MarkovChain, StateSet};

const THREADS_ENV: &str = "ISOMIX_THREADS";

#[derive(Parser)]
#[command(
    name = "isomix",
    version,
    about = "Isoperimetric functionals, set profiles and mixing bounds for finite Markov chains"
)]
struct Cli {
    /// Worker threads; falls back to ISOMIX_THREADS, then all cores
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

/// Exactly one chain source: a JSON file or a generated zoo chain.
#[derive(Args)]
struct Source {
    /// Chain file: {"n":, "P": [[..]], "pi": optional}
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with = "zoo",
        required_unless_present = "zoo"
    )]
    chain: Option<PathBuf>,

    /// Zoo family name followed by its numeric parameters
    #[arg(long, value_name = "FAMILY PARAMS", num_args = 1.., allow_negative_numbers = true)]
    zoo: Option<Vec<String>>,
}

impl Source {
    /// The chain plus the canonical set, for families that define one.
    fn load(&self) -> Result<(MarkovChain, Option<StateSet>), Error> {
        if let Some(path) = &self.chain {
            return Ok((io::load_chain(path)?, None));
        }
        let words = self.zoo.as_ref().expect("clap enforces one source");
        let family = words[0].clone();
        let params = words[1..]
            .iter()
            .map(|w| {
                w.parse::<f64>()
                    .map_err(|_| Error::BadParam(format!("parameter {w:?} is not a number")))
            })
            .collect::<Result<Vec<f64>, Error>>()?;
        ZooSpec { family, params }.build()
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the chain families, or build one and export/summarize it
    Zoo {
        /// Family name; omit to list every family
        family: Option<String>,
        /// Numeric parameters for the family
        #[arg(allow_negative_numbers = true)]
        params: Vec<f64>,
        /// Write the chain as JSON instead of printing a summary
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Spread record, gradients and sandwich bounds for one set
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Comma-separated state indices; defaults to the zoo family's set
        #[arg(long, value_name = "I,J,...")]
        set: Option<String>,
        /// Compute on the time reversal
        #[arg(long)]
        reversed: bool,
        /// Write JSON here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Enumerate subsets and emit a quantity profile
    Profile {
        #[command(flatten)]
        source: Source,
        /// conductance, psi_plus, psi_minus, psi_gl, psi_mod, psi_evo,
        /// psi_big, psi_plus_rev or gl_weight
        #[arg(long, value_name = "NAME")]
        quantity: String,
        /// at_most_x (default) or half_to_x
        #[arg(long, default_value = "at_most_x")]
        window: String,
        /// csv (default) or json
        #[arg(long, default_value = "csv")]
        format: String,
        /// Acknowledge enumerating more than the default 22 states
        #[arg(long, value_name = "N")]
        max_states: Option<usize>,
        /// Write here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Mixing-time report: exact times plus every applicable bound
    Bounds {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Exact mixing times and spectral gap only
    Mixing {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run every identity and inequality over all proper subsets
    Verify {
        #[command(flatten)]
        source: Source,
        /// Acknowledge enumerating more than the default 22 states
        #[arg(long, value_name = "N")]
        max_states: Option<usize>,
        /// Write the full report as JSON
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn parse_set(chain: &MarkovChain, text: &str) -> Result<StateSet, Error> {
    let indices = text
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::BadParam(format!("set index {s:?} is not an integer")))
        })
        .collect::<Result<Vec<usize>, Error>>()?;
    StateSet::from_indices(chain, &indices)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        None => println!("{}", text.trim_end()),
    }
    Ok(())
}

fn cmd_zoo(family: Option<String>, params: Vec<f64>, out: Option<PathBuf>) -> Result<u8, Error> {
    let Some(family) = family else {
        println!("available chain families:");
        for (name, signature, summary) in zoo::families() {
            println!("  {name} {signature}\n      {summary}");
        }
        return Ok(0);
    };
    let (chain, set) = ZooSpec { family, params }.build()?;
    match out {
        Some(path) => {
            io::save_chain(&chain, &path)?;
            println!("wrote {}", path.display());
        }
        None => {
            println!(
                "{} states, lazy: {}, reversible: {}",
                chain.n(),
                chain.is_lazy(),
                chain.is_reversible()
            );
            if let Some(set) = set {
                println!(
                    "canonical set: {:?} with measure {:.6}",
                    set.members(),
                    set.measure()
                );
            }
        }
    }
    Ok(0)
}

fn cmd_analyze(
    source: &Source,
    set: Option<String>,
    reversed: bool,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let (chain, canonical) = source.load()?;
    let a = match set {
        Some(text) => parse_set(&chain, &text)?,
        None => canonical.ok_or_else(|| {
            Error::BadParam("this chain defines no canonical set; pass --set".into())
        })?,
    };
    let work = if reversed {
        chain.reversal()
    } else {
        chain.clone()
    };

    let record = isoperimetry::spread_record(&chain, &a, reversed);
    let gradient_reports: Vec<_> = [Sign::Plus, Sign::Minus]
        .into_iter()
        .flat_map(|sign| {
            [GradP::One, GradP::Two, GradP::Infinity]
                .into_iter()
                .map(move |p| (p, sign))
        })
        .map(|(p, sign)| gradients::h_p(&work, &a, p, sign))
        .collect();

    let mut report = json!({
        "chain": {
            "n": chain.n(),
            "lazy": chain.is_lazy(),
            "reversible": chain.is_reversible(),
        },
        "set": a.members(),
        "set_measure": a.measure(),
        "reversed": reversed,
        "record": record,
        "gradients": gradient_reports,
    });
    for sign in [Sign::Plus, Sign::Minus] {
        let key = format!("sandwich_{}", sign.label());
        match gradients::sandwich(&work, &a, sign) {
            Ok(s) => report[key] = serde_json::to_value(&s).expect("serializable"),
            Err(e) => report["sandwich_skipped"] = json!(e.to_string()),
        }
    }
    emit(
        &serde_json::to_string_pretty(&report).expect("serializable"),
        out.as_ref(),
    )?;
    Ok(0)
}

fn cmd_profile(
    source: &Source,
    quantity: &str,
    window: &str,
    format: &str,
    max_states: Option<usize>,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let (chain, _) = source.load()?;
    let quantity = SetQuantity::parse(quantity)?;
    let window = Window::parse(window)?;
    let prof = match max_states {
        Some(limit) => profile::profile_with_limit(&chain, quantity, window, limit)?,
        None => profile::profile(&chain, quantity, window)?,
    };
    let text = match format {
        "csv" => io::profile_csv(&prof),
        "json" => {
            let value = json!({
                "quantity": quantity.name(),
                "x": prof.xs(),
                "value": prof.values(),
                "end": prof.end(),
                "caveats": ["discrete-outer-sets"],
            });
            serde_json::to_string_pretty(&value).expect("serializable")
        }
        other => {
            return Err(Error::BadParam(format!(
                "unknown format {other:?}; expected csv or json"
            )))
        }
    };
    emit(&text, out.as_ref())?;
    Ok(0)
}

fn cmd_bounds(source: &Source, epsilon: f64, out: Option<PathBuf>) -> Result<u8, Error> {
    let (chain, _) = source.load()?;
    let report = spectral::mixing_report(&chain, epsilon)?;
    emit(
        &serde_json::to_string_pretty(&report).expect("serializable"),
        out.as_ref(),
    )?;
    Ok(0)
}

fn cmd_mixing(source: &Source, epsilon: f64, out: Option<PathBuf>) -> Result<u8, Error> {
    let (chain, _) = source.load()?;
    let tau = spectral::exact_mixing(&chain, epsilon, spectral::Metric::Tv)?;
    let chi2 = spectral::exact_mixing(&chain, epsilon, spectral::Metric::Chi2)?;
    let mut value = json!({
        "epsilon": epsilon,
        "tau_exact": tau,
        "chi2_exact": chi2,
    });
    if chain.is_reversible() {
        let gap = spectral::spectral_gap(&chain)?;
        value["spectral_gap"] = json!(gap.lambda);
    }
    emit(
        &serde_json::to_string_pretty(&value).expect("serializable"),
        out.as_ref(),
    )?;
    Ok(0)
}

fn cmd_verify(
    source: &Source,
    max_states: Option<usize>,
    out: Option<PathBuf>,
) -> Result<u8, Error> {
    let (chain, _) = source.load()?;
    let report = match max_states {
        Some(limit) => verify::verify_chain_with_limit(&chain, limit)?,
        None => verify::verify_chain(&chain)?,
    };
    println!(
        "{} states, {} subsets, {} checks, {} violation(s)",
        report.n_states,
        report.subsets_checked,
        report.checks_run,
        report.violations.len()
    );
    for v in report.violations.iter().take(20) {
        println!(
            "  {} on {:?}: lhs {:.6} vs rhs {:.6} (slack {:.1e})",
            v.check, v.set, v.lhs, v.rhs, v.slack
        );
    }
    if report.violations.len() > 20 {
        println!("  ... and {} more", report.violations.len() - 20);
    }
    if let Some(path) = out {
        std::fs::write(
            &path,
            serde_json::to_string_pretty(&report).expect("serializable"),
        )?;
        println!("wrote {}", path.display());
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8, Error> {
    let threads = cli.threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::BadParam("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::BadParam(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Zoo {
            family,
            params,
            out,
        } => cmd_zoo(family, params, out),
        Command::Analyze {
            source,
            set,
            reversed,
            out,
        } => cmd_analyze(&source, set, reversed, out),
        Command::Profile {
            source,
            quantity,
            window,
            format,
            max_states,
            out,
        } => cmd_profile(&source, &quantity, &window, &format, max_states, out),
        Command::Bounds {
            source,
            epsilon,
            out,
        } => cmd_bounds(&source, epsilon, out),
        Command::Mixing {
            source,
            epsilon,
            out,
        } => cmd_mixing(&source, epsilon, out),
        Command::Verify {
            source,
            max_states,
            out,
        } => cmd_verify(&source, max_states, out),
    }
}

fn main() -> ExitCode {
    // Die quietly when the reader goes away (e.g. piping into head).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
