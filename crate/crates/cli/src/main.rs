use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cardinal_cli::config::{parse_list, Command, OutputFormat, Overrides, RunConfig};
use cardinal_cli::error::Result as CliResult;
use cardinal_cli::{execute, exit_status, render};

/// A parsed `--degrees` or `--sizes` list.
#[derive(Debug, Clone)]
struct List<T>(Vec<T>);

fn degree_list(text: &str) -> Result<List<u32>, String> {
    parse_list(text).map(List)
}

fn size_list(text: &str) -> Result<List<usize>, String> {
    parse_list(text).map(List)
}

#[derive(Debug, Parser)]
#[command(name = "cardinal", version, about = "Condition numbers of cardinal B-spline collocation matrices")]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,
    /// Spline degrees, e.g. `2,5,9` or `2..30`.
    #[arg(long, value_parser = degree_list)]
    degrees: Option<List<u32>>,
    /// Knot counts n, e.g. `64,128` or `16..512:16`.
    #[arg(long, value_parser = size_list)]
    sizes: Option<List<usize>>,
    /// Working precision in bits.
    #[arg(long)]
    precision: Option<u32>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write output to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 uses all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Cross-check small instances against the dense eigensolver.
    #[arg(long)]
    oracle: bool,
    /// Largest periodization order covered by `scan` when no sizes are given.
    #[arg(long)]
    max_order: Option<usize>,
    /// TOML file with defaults for any of the options above.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn overrides(self) -> CliResult<(Command, Overrides)> {
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        let flags = Overrides {
            degrees: self.degrees.map(|l| l.0),
            sizes: self.sizes.map(|l| l.0),
            precision: self.precision,
            format: self.format,
            out: self.out,
            jobs: self.jobs,
            oracle: self.oracle.then_some(true),
            max_order: self.max_order,
        };
        Ok((self.command, flags.over(file)))
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    let (command, overrides) = cli.overrides()?;
    let config = RunConfig::resolve(command, overrides)?;
    let report = execute(&config)?;
    match &config.output_path {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            render(&config, &report, &mut out)?;
            out.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            render(&config, &report, &mut out)?;
            out.flush()?;
        }
    }
    if config.command == Command::Scan {
        let get = |k: &str| report.summary.iter().find(|(key, _)| *key == k).map(|(_, v)| v.to_string());
        eprintln!(
            "scan: {} cells, {} agree, {} disagree, {} indeterminate",
            get("cells").unwrap_or_default(),
            get("agree").unwrap_or_default(),
            get("disagree").unwrap_or_default(),
            get("indeterminate").unwrap_or_default(),
        );
    }
    if report.counterexamples > 0 {
        eprintln!("COUNTEREXAMPLE: {} cell(s) contradict the predicted minimal indices", report.counterexamples);
    }
    if report.uncertified_cells() > 0 {
        eprintln!(
            "warning: {} value(s) have fewer certified digits than displayed (marked '~')",
            report.uncertified_cells()
        );
    }
    if report.cross_check_failures > 0 {
        eprintln!("error: {} cross-check failure(s)", report.cross_check_failures);
    }
    Ok(exit_status(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn flag_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_lists_and_flags() {
        let cli = Cli::try_parse_from(["cardinal", "scan", "--degrees", "2..4,9", "--sizes", "16..48:16", "--oracle"]).unwrap();
        let (command, o) = cli.overrides().unwrap();
        assert_eq!(command, Command::Scan);
        assert_eq!(o.degrees.unwrap(), [2, 3, 4, 9]);
        assert_eq!(o.sizes.unwrap(), [16, 32, 48]);
        assert_eq!(o.oracle, Some(true));
        assert!(Cli::try_parse_from(["cardinal", "table99"]).is_err());
        assert!(Cli::try_parse_from(["cardinal", "scan", "--degrees", "x"]).is_err());
    }
}
