//! Batch evaluator for derived Rees algebra and blow-up scripts.
//! Exit codes: 0 all verdicts non-failing, 1 evaluation or verdict failure,
//! 2 at least one inconclusive verdict.

mod eval;
mod script;

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

#[derive(Parser)]
#[command(name = "derees", version, about = "derived Rees algebra and blow-up reports")]
struct Args {
    /// script file, or `-` for stdin
    script: String,
    /// emit JSON instead of aligned text
    #[arg(long)]
    json: bool,
    /// global enumeration bound (maximum total monomial degree)
    #[arg(long, default_value_t = 8)]
    bound: u32,
    /// homological window used by range-limited checks
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [-3, 3], allow_hyphen_values = true)]
    range: Vec<i64>,
    /// seed for randomized property-test scripts
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let _ = (args.seed, &args.range);
    let src = if args.script == "-" {
        let mut s = String::new();
        if std::io::stdin().read_to_string(&mut s).is_err() {
            eprintln!("error: could not read stdin");
            return ExitCode::from(1);
        }
        s
    } else {
        match std::fs::read_to_string(&args.script) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: could not read {}: {}", args.script, e);
                return ExitCode::from(1);
            }
        }
    };
    let start = Instant::now();
    let stmts = match script::parse(&src) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    };
    let flags = eval::Flags { bound: args.bound };
    let (out, outcome) = match eval::evaluate(&stmts, &flags) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        print!("{}", eval::render_text(&out, start.elapsed().as_millis()));
    }
    let failing = out
        .reports
        .iter()
        .flat_map(|r| &r.verdicts)
        .any(|v| v.status == "false");
    if failing {
        ExitCode::from(1)
    } else {
        match outcome {
            eval::Outcome::Ok => ExitCode::SUCCESS,
            eval::Outcome::Inconclusive => ExitCode::from(2),
        }
    }
}
