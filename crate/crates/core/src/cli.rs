//! The `digraphe` command line.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::formats::{transliterate_html, transliterate_text_stream, HtmlOptions};
use crate::table::{parse_table, MappingTable};
use crate::transducer::{Direction, Mode, Transliterator};
use crate::validate::validate_table;
use crate::verifier::{check_round_trip, count_realizable};

/// Environment variable listing directories searched for table files.
pub const TABLE_DIR_ENV: &str = "DIGRAPHE_TABLE_DIR";

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "digraphe", version, about = "Latin <-> Ajami transliteration for Senegalese languages")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert text or HTML between scripts.
    Convert(ConvertArgs),
    /// Check a table for collisions and decodability.
    Validate(ValidateArgs),
    /// Exhaustively convert short words there and back.
    Roundtrip(RoundtripArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    LatinToAjami,
    AjamiToLatin,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::LatinToAjami => Direction::LatinToAjami,
            DirectionArg::AjamiToLatin => Direction::AjamiToLatin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Html,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ModeArg {
    Strict,
    #[default]
    Lenient,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Lenient => Mode::Lenient,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long, value_enum)]
    pub direction: DirectionArg,
    /// Table file; relative names are also looked up in $DIGRAPHE_TABLE_DIR.
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t)]
    pub mode: ModeArg,
    /// Input file (standard input when absent).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write a JSON conversion report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Comma-separated elements copied verbatim (HTML only).
    #[arg(long, value_delimiter = ',')]
    pub skip_elements: Option<Vec<String>>,
    /// Add a dir attribute to the root element (HTML only).
    #[arg(long)]
    pub set_dir: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub table: PathBuf,
    /// Write the validation report as JSON here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[arg(long)]
    pub table: PathBuf,
    /// Longest word, in graphemes, to enumerate.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_length: u32,
    /// Write the round-trip report as JSON here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Standard streams, swappable for tests.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn io(what: &str, path: &Path, err: io::Error) -> Self {
        Self::new(EXIT_IO, format!("{what} {}: {err}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            _ => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

/// Finds a table file, trying the path as given and then each directory of
/// `search_path` (with and without a `.tbl` extension).
pub fn resolve_table(path: &Path, search_path: Option<&std::ffi::OsStr>) -> Option<PathBuf> {
    if path.is_file() {
        return Some(path.to_path_buf());
    }
    if path.is_absolute() {
        return None;
    }
    let dirs = search_path.map(|s| std::env::split_paths(s).collect::<Vec<_>>()).unwrap_or_default();
    for dir in dirs {
        let candidate = dir.join(path);
        if candidate.is_file() {
            return Some(candidate);
        }
        if path.extension().is_none() {
            let candidate = candidate.with_extension("tbl");
            if candidate.is_file() {
                return Some(candidate);
            }
        }
    }
    None
}

fn load_table(path: &Path) -> Result<MappingTable, Failure> {
    let search = std::env::var_os(TABLE_DIR_ENV);
    let found = resolve_table(path, search.as_deref()).ok_or_else(|| {
        Failure::new(EXIT_IO, format!("table file {} not found", path.display()))
    })?;
    let raw = std::fs::read(&found).map_err(|e| Failure::io("cannot read table", &found, e))?;
    parse_table(&raw).map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", found.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let json = serde_json::to_string_pretty(value).expect("reports serialize");
    std::fs::write(path, json + "\n").map_err(|e| Failure::io("cannot write report", path, e))
}

/// Runs one command and returns the process exit code.
pub fn run(config: CliConfig) -> u8 {
    let stdin = io::stdin();
    let mut stdin = stdin.lock();
    let stdout = io::stdout();
    let mut stdout = BufWriter::new(stdout.lock());
    let mut stderr = io::stderr();
    let code = run_with(
        config,
        Streams {
            stdin: &mut stdin,
            stdout: &mut stdout,
            stderr: &mut stderr,
        },
    );
    if stdout.flush().is_err() {
        return EXIT_IO;
    }
    code
}

pub fn run_with(config: CliConfig, io: Streams<'_>) -> u8 {
    let result = match config.command {
        Command::Convert(args) => convert(args, io.stdin, io.stdout),
        Command::Validate(args) => validate(args, io.stdout),
        Command::Roundtrip(args) => roundtrip(args, io.stdout, io.stderr),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.stderr, "digraphe: {}", f.message);
            f.code
        }
    }
}

fn convert(args: ConvertArgs, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> Result<u8, Failure> {
    if args.format == Format::Text && (args.set_dir || args.skip_elements.is_some()) {
        return Err(Failure::new(
            EXIT_USAGE,
            "--set-dir and --skip-elements only apply to --format html",
        ));
    }
    let table = load_table(&args.table)?;
    let report = validate_table(&table);
    if !report.accepted() {
        let msgs: Vec<String> = report.errors.iter().map(|d| format!("{}: {}", d.code, d.message)).collect();
        return Err(Failure::new(
            EXIT_FAILURE,
            format!("table {} is not valid: {}", args.table.display(), msgs.join("; ")),
        ));
    }
    let tr = Transliterator::new(&table, args.direction.into())?;
    let mode: Mode = args.mode.into();

    let mut file_in;
    let input: &mut dyn BufRead = match &args.input {
        Some(path) => {
            let f = File::open(path).map_err(|e| Failure::io("cannot open input", path, e))?;
            file_in = BufReader::new(f);
            &mut file_in
        }
        None => stdin,
    };
    let mut file_out;
    let output: &mut dyn Write = match &args.output {
        Some(path) => {
            let f = File::create(path).map_err(|e| Failure::io("cannot create output", path, e))?;
            file_out = BufWriter::new(f);
            &mut file_out
        }
        None => stdout,
    };

    let conversion = match args.format {
        Format::Text => transliterate_text_stream(input, &mut *output, &tr, mode)?,
        Format::Html => {
            let mut raw = Vec::new();
            input.read_to_end(&mut raw).map_err(Error::from)?;
            let mut options = HtmlOptions::default().with_dir_attribute(args.set_dir);
            if let Some(names) = &args.skip_elements {
                options = options.with_skip_elements(names.iter().map(|n| n.trim()).filter(|n| !n.is_empty()));
            }
            let (bytes, report) = transliterate_html(&raw, &tr, mode, &options)?;
            output.write_all(&bytes).map_err(Error::from)?;
            report
        }
    };
    output.flush().map_err(Error::from)?;
    if let Some(path) = &args.report {
        write_json(path, &conversion)?;
    }
    Ok(EXIT_OK)
}

fn validate(args: ValidateArgs, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let table = load_table(&args.table)?;
    let report = validate_table(&table);
    let print = |out: &mut dyn Write| -> io::Result<()> {
        for d in &report.errors {
            writeln!(out, "error {} (line {}): {}", d.code, line_label(d.line), d.message)?;
        }
        for d in &report.warnings {
            writeln!(out, "warning {} (line {}): {}", d.code, line_label(d.line), d.message)?;
        }
        writeln!(out, "decodable forward: {}", report.decodable_forward)?;
        writeln!(out, "decodable reverse: {}", report.decodable_reverse)?;
        writeln!(
            out,
            "{}: {} rules, {} errors, {} warnings",
            if report.accepted() { "accepted" } else { "rejected" },
            table.rules.len(),
            report.errors.len(),
            report.warnings.len()
        )
    };
    print(stdout).map_err(Error::from)?;
    if let Some(path) = &args.report {
        write_json(path, &report)?;
    }
    Ok(if report.accepted() { EXIT_OK } else { EXIT_FAILURE })
}

fn line_label(line: Option<usize>) -> String {
    line.map_or_else(|| "-".to_owned(), |l| l.to_string())
}

fn roundtrip(args: RoundtripArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8, Failure> {
    let table = load_table(&args.table)?;
    let max_length = args.max_length as usize;
    if max_length > 5 {
        let _ = writeln!(
            stderr,
            "digraphe: enumerating {} words, this may take a while",
            count_realizable(&table, max_length)
        );
    }
    let report = check_round_trip(&table, max_length)?;
    let print = |out: &mut dyn Write| -> io::Result<()> {
        for f in &report.failures {
            writeln!(out, "FAIL {:?} -> {:?} -> {:?}", f.input, f.forward_output, f.back_output)?;
        }
        writeln!(
            out,
            "{}: {} words up to {} graphemes, {} failures",
            if report.passed { "passed" } else { "failed" },
            report.strings_tested,
            report.max_length,
            report.failures.len()
        )
    };
    print(stdout).map_err(Error::from)?;
    if let Some(path) = &args.report {
        write_json(path, &report)?;
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_search_path() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("wolof.tbl"), "@language wolof\n").unwrap();
        let search = dir.path().as_os_str();
        assert_eq!(
            resolve_table(Path::new("wolof.tbl"), Some(search)),
            Some(dir.path().join("wolof.tbl"))
        );
        assert_eq!(
            resolve_table(Path::new("wolof"), Some(search)),
            Some(dir.path().join("wolof.tbl"))
        );
        assert_eq!(resolve_table(Path::new("pulaar"), Some(search)), None);
        assert_eq!(resolve_table(Path::new("wolof.tbl"), None), None);
    }

    #[test]
    fn parse_flags() {
        let c = CliConfig::try_parse_from([
            "digraphe", "convert", "--direction", "ajami-to-latin", "--table", "t.tbl", "--format", "html",
            "--skip-elements", "script,pre", "--set-dir",
        ])
        .unwrap();
        let Command::Convert(a) = c.command else { panic!() };
        assert_eq!(a.direction, DirectionArg::AjamiToLatin);
        assert_eq!(a.skip_elements.unwrap(), ["script", "pre"]);
        assert_eq!(a.mode, ModeArg::Lenient);

        assert!(CliConfig::try_parse_from(["digraphe", "convert", "--table", "t"]).is_err());
        assert!(CliConfig::try_parse_from(["digraphe", "validate"]).is_err());
        assert!(CliConfig::try_parse_from(["digraphe", "roundtrip", "--table", "t", "--max-length", "0"]).is_err());
    }
}
