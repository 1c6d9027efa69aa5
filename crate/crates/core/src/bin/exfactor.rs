use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use exfactor::pipeline::{factorize, parse_poly, read_factorization, to_json, to_text, FactorOptions};
use exfactor::Error;

/// Factor a bivariate integer polynomial exactly over the rationals.
#[derive(Parser, Debug)]
#[command(name = "exfactor", version)]
struct Cli {
    /// File holding the polynomial, or `-` for stdin.
    input: Option<String>,
    /// Polynomial given on the command line.
    #[arg(long, conflicts_with = "input")]
    expr: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    max_restarts: usize,
    #[arg(long, default_value_t = 65_536)]
    max_bits: u32,
    /// Exchange x and y for parts of lower degree in x than in y.
    #[arg(long)]
    swap_vars: bool,
    #[arg(long)]
    json: bool,
    /// Print run statistics to stderr.
    #[arg(long)]
    stats: bool,
    /// Check a factorization file (text or JSON) against the input instead of factoring.
    #[arg(long, value_name = "FACTORS_FILE")]
    verify_only: Option<String>,
}

fn read_source(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let text = match (&cli.expr, &cli.input) {
        (Some(e), _) => e.clone(),
        (None, Some(path)) => read_source(path)?,
        (None, None) => read_source("-")?,
    };
    let f = match parse_poly(text.trim()) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("exfactor: {e}");
            return Ok(ExitCode::from(2));
        }
    };

    if let Some(path) = &cli.verify_only {
        let claimed = match read_factorization(&read_source(path)?) {
            Ok(g) => g,
            Err(e) => {
                eprintln!("exfactor: {path}: {e}");
                return Ok(ExitCode::from(2));
            }
        };
        return Ok(if claimed == f {
            println!("ok");
            ExitCode::SUCCESS
        } else {
            println!("mismatch");
            ExitCode::from(4)
        });
    }

    let opts = FactorOptions {
        seed: cli.seed,
        max_restarts: cli.max_restarts,
        max_bits: cli.max_bits,
        swap_vars: cli.swap_vars,
        ..Default::default()
    };
    let result = match factorize(&f, &opts) {
        Ok(r) => r,
        Err(e @ Error::FactorizationFailed { .. }) => {
            eprintln!("exfactor: {e}");
            return Ok(ExitCode::from(3));
        }
        Err(e) => return Err(e.to_string()),
    };
    if cli.json {
        println!("{}", to_json(&result));
    } else {
        print!("{}", to_text(&result));
    }
    if cli.stats {
        let s = serde_json::to_string_pretty(&result.stats).map_err(|e| e.to_string())?;
        eprintln!("{s}");
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("exfactor: {msg}");
            ExitCode::from(1)
        }
    }
}
