use std::process::ExitCode;

use clap::Parser;
use cymono::{error_report, run, workers_from_env, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let outcome = workers_from_env().and_then(|w| run(&cli, w));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e @ CliError::Usage(_)) => {
            eprintln!("cymono: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("cymono {name}: {e}");
            println!("{}", error_report(name, &e).to_json());
            return ExitCode::from(1);
        }
    };
    let dir = cymono::resolve_config(&cli).map(|c| c.output_dir);
    let written = dir.and_then(|d| outcome.write(&d));
    match written {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("cymono {name}: {e}");
            return ExitCode::from(1);
        }
    }
    let rep = &outcome.report;
    for c in &rep.checks {
        eprintln!(
            "{} {} value {:.3e} tol {:.1e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.check,
            c.value,
            c.tolerance
        );
    }
    if rep.pass {
        ExitCode::SUCCESS
    } else {
        let failed = serde_json::json!({ "command": rep.command, "pass": false, "failures": rep.failures() });
        println!(
            "{}",
            serde_json::to_string_pretty(&failed).expect("failure report")
        );
        ExitCode::from(1)
    }
}
