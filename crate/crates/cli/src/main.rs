use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use dce_cli::{execute, parse_threads, Cli, CliError, THREADS_ENV};
use dce_core::quantities::{CheckStatus, ValidityCheck};

fn real_main(cli: Cli) -> anyhow::Result<u8> {
    let out = cli.out.clone();
    let threads = parse_threads(std::env::var(THREADS_ENV).ok().as_deref())?;
    let cfg = cli.resolve()?;
    let (text, report) = execute(&cfg, threads)?;
    match &out {
        Some(path) => std::fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .context("writing to standard output")?,
    }
    let mut flagged: BTreeMap<(&str, CheckStatus), (usize, &ValidityCheck)> = BTreeMap::new();
    for check in report.records.iter().flat_map(|r| &r.validity.checks) {
        if check.status != CheckStatus::Pass {
            flagged.entry((&check.name, check.status)).or_insert((0, check)).0 += 1;
        }
    }
    for ((name, status), (count, first)) in flagged {
        let status = dce_cli::output::status_str(status);
        let scope = if count > 1 { format!(" in {count} records, first") } else { String::new() };
        eprintln!(
            "dce: {name} {status}{scope}: ratio {:.4e} (threshold {}); {}",
            first.ratio, first.threshold, first.note
        );
    }
    Ok(report.outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match real_main(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("dce: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code)
        }
    }
}
