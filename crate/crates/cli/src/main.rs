//! `qgcipher` command-line front end.
//!
//! Exit codes: 0 success, 1 experiment check failed, 2 I/O error,
//! 64 usage error, 65 malformed input data.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qgcipher::codec::{
    bytes_to_symbols, format_symbol_text, parse_key, parse_symbol_text, serialize_key, symbols_to_bytes,
};
use qgcipher::experiment::{reference_quasigroup, run_experiment, ExperimentConfig, ExperimentReport, Outcome};
use qgcipher::stats::{
    chi_square_uniformity, count_ngrams, detect_classes, LetterDistribution, NGramDistribution,
    DEFAULT_CLASS_THRESHOLD,
};
use qgcipher::{random_quasigroup, PeKey, RoundParams, SymbolString};

/// Largest alphabet order the CLI accepts.
const MAX_CLI_ORDER: usize = 256;

#[derive(Parser)]
#[command(name = "qgcipher", version, about = "Quasigroup PE-transformation cipher and statistics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Raw bytes, split big-endian into symbols (orders 2, 4, 16, 256).
    Bytes,
    /// Whitespace-separated 1-based symbols.
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random key file.
    Genkey {
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt a file with PE^(n).
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decrypt a file produced by `encrypt`.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write n-gram distributions and uniformity statistics as CSV.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long = "m-max", default_value_t = 4)]
        m_max: usize,
        #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
        overlapping: bool,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce the skewed-source experiment and write CSV data and a summary.
    Experiment {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        length: usize,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
        /// 1-based leader used in every round.
        #[arg(long, default_value_t = 4)]
        leader: u32,
        #[arg(long, default_value_t = 3)]
        d1: usize,
        /// Alphabet order; other than 4 needs --dist and uses a seeded random quasigroup.
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Comma-separated letter probabilities.
        #[arg(long)]
        dist: Option<String>,
        /// Take the quasigroup and rounds from a key file instead.
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long = "m-max", default_value_t = 4)]
        m_max: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
    Data(String),
    ChecksFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed => 1,
            CliError::Io { .. } => 2,
            CliError::Usage(_) => 64,
            CliError::Data(_) => 65,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Data(m) => write!(f, "invalid data: {m}"),
            CliError::ChecksFailed => write!(f, "one or more experiment checks failed"),
        }
    }
}

fn data(e: qgcipher::Error) -> CliError {
    CliError::Data(e.to_string())
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(io_err(path))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read_bytes(path)?).map_err(|_| CliError::Data(format!("{} is not UTF-8", path.display())))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn check_cli_order(order: usize) -> Result<(), CliError> {
    if !(2..=MAX_CLI_ORDER).contains(&order) {
        return Err(CliError::Usage(format!("order must be in 2..={MAX_CLI_ORDER}, got {order}")));
    }
    Ok(())
}

fn load_key(path: &Path) -> Result<PeKey, CliError> {
    let key = parse_key(&read_text(path)?).map_err(data)?;
    if key.order() > MAX_CLI_ORDER {
        return Err(CliError::Data(format!("key order {} exceeds {MAX_CLI_ORDER}", key.order())));
    }
    Ok(key)
}

fn decode(raw: &[u8], format: Format, order: usize) -> Result<SymbolString, CliError> {
    match format {
        Format::Bytes => bytes_to_symbols(raw, order).map_err(data),
        Format::Text => {
            let text = std::str::from_utf8(raw).map_err(|_| CliError::Data("input is not UTF-8".into()))?;
            parse_symbol_text(text, order).map_err(data)
        }
    }
}

fn encode(s: &SymbolString, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Bytes => symbols_to_bytes(s, s.order()).map_err(data),
        Format::Text => Ok(format_symbol_text(s).into_bytes()),
    }
}

fn run_genkey(order: usize, rounds: usize, seed: u64, out: &Path) -> Result<(), CliError> {
    check_cli_order(order)?;
    if rounds == 0 {
        return Err(CliError::Usage("rounds must be at least 1".into()));
    }
    let key = PeKey::random(order, rounds, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    write_file(out, serialize_key(&key).as_bytes())
}

fn run_cipher(key: &Path, input: &Path, out: &Path, format: Format, decrypt: bool) -> Result<(), CliError> {
    let key = load_key(key)?;
    let raw = read_bytes(input)?;
    let symbols = decode(&raw, format, key.order())?;
    if symbols.is_empty() {
        return Err(CliError::Data("input is empty".into()));
    }
    let result = if decrypt {
        key.decrypt(&symbols)
    } else {
        key.encrypt(&symbols)
    }
    .map_err(data)?;
    write_file(out, &encode(&result, format)?)
}

fn tuple_label(d: &NGramDistribution, rank: usize) -> String {
    d.tuple(rank)
        .iter()
        .map(|&s| (s as u32 + 1).to_string())
        .collect::<Vec<_>>()
        .join("-")
}

struct Csv {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl Csv {
    fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self, CliError> {
        let path = dir.join(name);
        let file = fs::File::create(&path).map_err(io_err(&path))?;
        let mut csv = Csv {
            writer: csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file),
            path,
        };
        csv.row(header.iter().map(|s| s.to_string()))?;
        Ok(csv)
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) -> Result<(), CliError> {
        self.writer.write_record(fields).map_err(|e| CliError::Io {
            path: self.path.clone(),
            source: e.into(),
        })
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush().map_err(io_err(&self.path))
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn run_analyze(
    input: &Path,
    format: Format,
    order: usize,
    m_max: usize,
    overlapping: bool,
    out: &Path,
) -> Result<(), CliError> {
    check_cli_order(order)?;
    if !(1..=8).contains(&m_max) {
        return Err(CliError::Usage(format!("--m-max must be in 1..=8, got {m_max}")));
    }
    let symbols = decode(&read_bytes(input)?, format, order)?;
    if symbols.is_empty() {
        return Err(CliError::Data("input is empty".into()));
    }
    create_dir(out)?;
    let mut summary = Csv::create(
        out,
        "summary.csv",
        &[
            "m", "overlapping", "windows", "statistic", "df", "p_value", "l1", "max_dev", "expected_count",
            "class_score", "classes_detected",
        ],
    )?;
    for m in 1..=m_max.min(symbols.len()) {
        let d = count_ngrams(&symbols, m, overlapping).map_err(data)?;
        let mut table = Csv::create(out, &format!("ngram_m{m}.csv"), &["rank", "tuple", "count", "prob"])?;
        for (rank, (&count, prob)) in d.counts().iter().zip(d.probabilities()).enumerate() {
            table.row([(rank + 1).to_string(), tuple_label(&d, rank), count.to_string(), prob.to_string()])?;
        }
        table.finish()?;
        let u = chi_square_uniformity(&d).map_err(data)?;
        let (score, detected) = if m == 2 {
            let c = detect_classes(&d, order, DEFAULT_CLASS_THRESHOLD).map_err(data)?;
            (c.separation_score.to_string(), c.classes_detected.to_string())
        } else {
            (String::new(), String::new())
        };
        summary.row([
            m.to_string(),
            overlapping.to_string(),
            u.windows.to_string(),
            u.statistic.to_string(),
            u.df.to_string(),
            u.p_value.to_string(),
            u.l1.to_string(),
            u.max_dev.to_string(),
            u.expected_count.to_string(),
            score,
            detected,
        ])?;
    }
    summary.finish()
}

#[allow(clippy::too_many_arguments)]
fn experiment_config(
    seed: u64,
    length: usize,
    rounds: usize,
    leader: u32,
    d1: usize,
    order: usize,
    dist: Option<&str>,
    key: Option<&Path>,
    m_max: usize,
) -> Result<ExperimentConfig, CliError> {
    if length == 0 {
        return Err(CliError::Usage("--length must be positive".into()));
    }
    if !(1..=8).contains(&m_max) {
        return Err(CliError::Usage(format!("--m-max must be in 1..=8, got {m_max}")));
    }
    let (quasigroup, round_params) = match key {
        Some(path) => {
            let key = load_key(path)?;
            (key.quasigroup().clone(), key.rounds().to_vec())
        }
        None => {
            check_cli_order(order)?;
            if rounds == 0 {
                return Err(CliError::Usage("rounds must be at least 1".into()));
            }
            if leader == 0 || leader as usize > order {
                return Err(CliError::Usage(format!("--leader must be in 1..={order}")));
            }
            let params = RoundParams::from_external(leader, d1).map_err(|e| CliError::Usage(e.to_string()))?;
            let q = if order == 4 {
                reference_quasigroup()
            } else {
                random_quasigroup(order, seed).map_err(|e| CliError::Usage(e.to_string()))?
            };
            (q, vec![params; rounds])
        }
    };
    let order = quasigroup.order();
    let distribution = match dist {
        Some(text) => {
            let probs = text
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Usage(format!("cannot parse --dist {text:?}")))?;
            LetterDistribution::new(probs).map_err(|e| CliError::Usage(e.to_string()))?
        }
        None if order == 4 => LetterDistribution::skewed4(),
        None => return Err(CliError::Usage(format!("--dist is required for order {order}"))),
    };
    if distribution.order() != order {
        return Err(CliError::Usage(format!(
            "--dist has {} letters, alphabet has {order}",
            distribution.order()
        )));
    }
    Ok(ExperimentConfig {
        quasigroup,
        distribution,
        length,
        rounds: round_params,
        seed,
        max_tuple: m_max,
        ..ExperimentConfig::default()
    })
}

fn write_experiment(report: &ExperimentReport, out: &Path) -> Result<(), CliError> {
    create_dir(out)?;
    for t in &report.tuples {
        let mut csv = Csv::create(
            out,
            &format!("tuples_m{}.csv", t.m),
            &["rank", "tuple", "input_prob", "output_prob"],
        )?;
        for (rank, (i, o)) in t.input.probabilities().into_iter().zip(t.output.probabilities()).enumerate() {
            csv.row([(rank + 1).to_string(), tuple_label(&t.input, rank), i.to_string(), o.to_string()])?;
        }
        csv.finish()?;
    }

    let mut pairs = Csv::create(out, "pairs_e1_pe1.csv", &["rank", "tuple", "e_prob", "pe_prob"])?;
    for (rank, (e, p)) in report
        .e_pairs
        .probabilities()
        .into_iter()
        .zip(report.pe_pairs.probabilities())
        .enumerate()
    {
        pairs.row([(rank + 1).to_string(), tuple_label(&report.e_pairs, rank), e.to_string(), p.to_string()])?;
    }
    pairs.finish()?;

    let mut classes = Csv::create(
        out,
        "classes.csv",
        &["transform", "class", "mean", "size", "expected_mean", "separation_score", "detected"],
    )?;
    for (name, report_classes) in [("E1", &report.e_classes), ("PE1", &report.pe_classes)] {
        if let Some(c) = report_classes {
            for (i, (mean, size)) in c.class_means.iter().zip(&c.class_sizes).enumerate() {
                classes.row([
                    name.to_string(),
                    (i + 1).to_string(),
                    mean.to_string(),
                    size.to_string(),
                    report.expected_class_means[i].to_string(),
                    c.separation_score.to_string(),
                    c.classes_detected.to_string(),
                ])?;
            }
        }
    }
    classes.finish()?;

    let mut summary = Csv::create(out, "summary.csv", &["check", "outcome", "detail"])?;
    for c in &report.checks {
        summary.row([c.name.clone(), outcome_label(c.outcome).to_string(), c.detail.clone()])?;
    }
    summary.finish()
}

fn outcome_label(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
        Outcome::Skipped => "skipped",
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Genkey { order, rounds, seed, out } => run_genkey(order, rounds, seed, &out),
        Command::Encrypt { key, input, out, format } => run_cipher(&key, &input, &out, format, false),
        Command::Decrypt { key, input, out, format } => run_cipher(&key, &input, &out, format, true),
        Command::Analyze {
            input,
            format,
            order,
            m_max,
            overlapping,
            out,
        } => run_analyze(&input, format, order, m_max, overlapping, &out),
        Command::Experiment {
            seed,
            length,
            rounds,
            leader,
            d1,
            order,
            dist,
            key,
            m_max,
            out,
        } => {
            let config = experiment_config(seed, length, rounds, leader, d1, order, dist.as_deref(), key.as_deref(), m_max)?;
            let report = run_experiment(&config).map_err(data)?;
            write_experiment(&report, &out)?;
            for c in &report.checks {
                println!("{:<20} {:<8} {}", c.name, outcome_label(c.outcome), c.detail);
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::ChecksFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qgcipher: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
