mod args;
mod commands;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use args::{Cli, Command, OutputArgs};
use commands::{CliError, Run};

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Zc(o) => o,
        Command::Elements(a) => &a.output,
        Command::Spectrum(a) => &a.output,
        Command::Scan(a) => &a.output,
        Command::Verify(a) => &a.output,
        Command::Trial(a) => &a.output,
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Zc(_) => "zc",
        Command::Elements(_) => "elements",
        Command::Spectrum(_) => "spectrum",
        Command::Scan(_) => "scan",
        Command::Verify(_) => "verify",
        Command::Trial(_) => "trial",
    }
}

fn write_run(run: &Run, command: &str, output: &OutputArgs) -> io::Result<()> {
    let mut meta = run.meta.clone();
    let mut config = run.config.clone();
    if let Value::Object(map) = &mut config {
        map.insert("command".into(), Value::from(command));
        map.insert(
            "format".into(),
            Value::from(format!("{:?}", output.format).to_lowercase()),
        );
    }
    meta.insert("config".into(), config);
    meta.insert("seed".into(), Value::from(output.seed));
    meta.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));

    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table::write_table(&run.table, &meta, output.format, &mut w)?;
            w.flush()
        }
        None => table::write_table(&run.table, &meta, output.format, io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Zc(_) => commands::zc(),
        Command::Elements(a) => commands::elements(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Scan(a) => commands::scan(a),
        Command::Verify(a) => commands::verify(a),
        Command::Trial(a) => commands::trial(a),
    };
    let run = match result {
        Ok(run) => run,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_run(&run, command_name(&cli.command), output_args(&cli.command)) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    match run.failure {
        Some(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
