use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use classforge::report;
use classforge::{Error, DEFAULT_BUDGET};

mod cache;

use cache::Cache;

/// Class groups, elliptic-curve torsion and descent for the families
/// y^2 = x^3 + n, Q(sqrt(n - m^3)) and Q(cbrt(n)).
#[derive(Parser, Debug)]
#[command(name = "classforge", version)]
struct Cli {
    /// JSON cache file (falls back to $CLASSFORGE_CACHE)
    #[arg(long, global = true, env = "CLASSFORGE_CACHE")]
    cache: Option<PathBuf>,
    /// Step budget for each computation
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rational torsion of y^2 = x^3 + a x + b
    #[command(allow_negative_numbers = true)]
    Torsion {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
    },
    /// Class group of Q(sqrt(d)), d < 0 squarefree
    #[command(allow_negative_numbers = true)]
    Classgroup {
        #[arg(long)]
        d: i64,
    },
    /// Pure cubic field Q(cbrt(m)) and its class group
    #[command(allow_negative_numbers = true)]
    Cubic {
        #[arg(long)]
        m: i64,
    },
    /// Class of the ideal of norm w through u + sqrt(d) when u^2 - d = w^p
    #[command(allow_negative_numbers = true)]
    Specialize {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        u: i64,
        #[arg(long)]
        w: i64,
        #[arg(long)]
        p: u32,
    },
    /// Point search and x - theta descent on y^2 = x^3 + n
    #[command(allow_negative_numbers = true)]
    Descent {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        search_bound: i64,
    },
    /// l-ranks of class groups of Q(sqrt(n - m^3)) over a range of m
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        m_from: i64,
        #[arg(long)]
        m_to: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Class groups of Q(cbrt(n)) over a range of n
    #[command(allow_negative_numbers = true)]
    ScanCubic {
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
    },
    /// Recompute the audited numerical claims
    Audit,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Command {
    /// Cache key; the budget is left out since it only decides whether a
    /// result is produced, never which one.
    fn key(&self) -> String {
        match self {
            Command::Torsion { a, b } => format!("torsion a={a} b={b}"),
            Command::Classgroup { d } => format!("classgroup d={d}"),
            Command::Cubic { m } => format!("cubic m={m}"),
            Command::Specialize { d, u, w, p } => format!("specialize d={d} u={u} w={w} p={p}"),
            Command::Descent { n, search_bound } => {
                format!("descent n={n} search-bound={search_bound}")
            }
            Command::Scan {
                n,
                l,
                m_from,
                m_to,
                format,
                ..
            } => format!("scan n={n} l={l} m-from={m_from} m-to={m_to} format={format:?}")
                .to_lowercase(),
            Command::ScanCubic { from, to } => format!("scan-cubic from={from} to={to}"),
            Command::Audit => "audit".into(),
        }
    }

    fn run(&self, budget: u64) -> classforge::Result<String> {
        let json = |v: serde_json::Value| report::render(&v);
        Ok(match *self {
            Command::Torsion { a, b } => json(report::torsion_report(a, b)?),
            Command::Classgroup { d } => json(report::classgroup_report(d, budget)?),
            Command::Cubic { m } => json(report::cubic_report(m, budget)?),
            Command::Specialize { d, u, w, p } => json(report::specialize_report(d, u, w, p)?),
            Command::Descent { n, search_bound } => {
                json(report::descent_report(n, search_bound, budget)?)
            }
            Command::Scan {
                n,
                l,
                m_from,
                m_to,
                format,
                ..
            } => {
                let rep = classforge::scan::scan_quadratic(n, l, m_from, m_to, budget)?;
                match format {
                    Format::Json => json(report::scan_json(&rep)),
                    Format::Csv => report::scan_csv(&rep),
                }
            }
            Command::ScanCubic { from, to } => json(report::scan_cubic_report(from, to, budget)?),
            Command::Audit => json(report::audit_report(budget)?),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cache = match cli.cache.as_deref().map(Cache::open).transpose() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let key = cli.command.key();
    let cached = cache.as_ref().and_then(|c| c.get(&key).cloned());
    let output = match cached {
        Some(text) => text,
        None => match cli.command.run(cli.budget) {
            Ok(text) => {
                if let Some(c) = cache.as_mut() {
                    c.insert(key, text.clone());
                    if let Err(e) = c.save() {
                        eprintln!("warning: {e}");
                    }
                }
                text
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(match e {
                    Error::InvalidInput { .. } => 2,
                    Error::LimitExceeded { .. } => 3,
                });
            }
        },
    };
    drop(cache);
    if let Command::Scan {
        out: Some(path), ..
    } = &cli.command
    {
        if let Err(e) = std::fs::write(path, &output) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
        return ExitCode::SUCCESS;
    }
    print!("{output}");
    ExitCode::SUCCESS
}
