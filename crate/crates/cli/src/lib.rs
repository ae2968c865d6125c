//! Argument parsing and subcommand implementations for the `teamsignal` binary.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use teamsignal::lexicon::{concordance, concordance_jsonl, concordance_text};
use teamsignal::survey::{plot_csv, read_survey_csv, score_all, scores_csv, select_extreme_teams, ReverseItems};
use teamsignal::{
    build_team_report, compare_teams, default_lexicon, load_lexicon, parse_export, redact_users, AuthorFilter, Corpus,
    GapMode, Lexicon, MetricsOptions, PsScore, ReportConfig, ReportFormat, SurveyResponse, TeamReport,
};

#[derive(Debug, Parser)]
#[command(name = "teamsignal", version, about = "Psychological-safety signals from team chat exports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build per-team reports and, with a survey, a high/low comparison.
    Analyze(AnalyzeArgs),
    /// Print lexicon hits for one sub-category with surrounding messages.
    Concordance(ConcordanceArgs),
    /// Check that exports, lexicon and survey load, and print counts.
    Validate(ValidateArgs),
    /// Lexicon utilities.
    #[command(subcommand)]
    Lexicon(LexiconCommand),
}

#[derive(Debug, Subcommand)]
pub enum LexiconCommand {
    /// Print the lexicon (default or `--lexicon`) as TOML.
    Print {
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
    },
}

/// Options shared by every command that reads exports.
#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// File of user ids (one per line) whose messages, reactions and mentions are removed.
    #[arg(long, value_name = "FILE")]
    pub redact: Option<PathBuf>,
    /// Lexicon TOML file; the built-in lexicon is used otherwise.
    #[arg(long, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    /// Drop messages by this author id before analysis (repeatable).
    #[arg(long = "exclude-author", value_name = "ID")]
    pub exclude_authors: Vec<String>,
    /// Drop messages without an author (e.g. integrations).
    #[arg(long)]
    pub exclude_unattributed: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Export directories or zip files, as PATH or TEAM=PATH.
    #[arg(required = true, value_name = "EXPORT")]
    pub exports: Vec<String>,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_name = "DIR", default_value = "reports")]
    pub out_dir: PathBuf,
    /// Report formats to write (comma separated).
    #[arg(long, value_name = "FMT", value_delimiter = ',', default_value = "json,csv")]
    pub format: Vec<String>,
    /// Survey responses CSV (team_id,period,respondent,q1..q7).
    #[arg(long, value_name = "FILE")]
    pub survey: Option<PathBuf>,
    #[arg(long, value_name = "N", default_value_t = 10)]
    pub top_emoji: usize,
    /// Reverse-coded survey items, e.g. `1,3,5`, or `none`.
    #[arg(long, value_name = "LIST", default_value = "1,3,5")]
    pub reverse_items: String,
    #[arg(long, value_enum, default_value_t = GapModeArg::Pooled)]
    pub gap_mode: GapModeArg,
    /// Clamp reply latencies and message gaps to this many seconds.
    #[arg(long, value_name = "SECS")]
    pub duration_cap: Option<u64>,
    /// File of custom emoji names (one per line); otherwise the bundled standard list decides.
    #[arg(long, value_name = "FILE")]
    pub custom_emoji: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GapModeArg {
    Pooled,
    PerChannel,
}

impl From<GapModeArg> for GapMode {
    fn from(g: GapModeArg) -> GapMode {
        match g {
            GapModeArg::Pooled => GapMode::Pooled,
            GapModeArg::PerChannel => GapMode::PerChannel,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConcordanceArgs {
    /// Export directory or zip file.
    #[arg(value_name = "EXPORT")]
    pub export: String,
    #[arg(long, value_name = "NAME")]
    pub sub_category: String,
    /// Messages of context on each side.
    #[arg(long, value_name = "N", default_value_t = 2)]
    pub context: usize,
    #[arg(long, value_enum, default_value_t = ConcordanceFormat::Text)]
    pub format: ConcordanceFormat,
    #[command(flatten)]
    pub corpus: CorpusArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConcordanceFormat {
    Text,
    Jsonl,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(value_name = "EXPORT")]
    pub exports: Vec<String>,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_name = "FILE")]
    pub survey: Option<PathBuf>,
}

/// A failure attributed to the pipeline stage that produced it.
#[derive(Debug)]
pub struct CliError {
    pub module: &'static str,
    pub message: String,
}

impl CliError {
    fn new(module: &'static str, message: impl fmt::Display) -> Self {
        CliError { module, message: message.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.module, self.message)
    }
}

impl std::error::Error for CliError {}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(&args, out),
        Command::Concordance(args) => cmd_concordance(&args, out),
        Command::Validate(args) => cmd_validate(&args, out),
        Command::Lexicon(LexiconCommand::Print { lexicon }) => {
            let lex = load_lexicon_arg(lexicon.as_deref())?;
            emit(out, &lex.to_toml())
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::new("cli", format!("writing output: {e}")))
}

/// `TEAM=PATH` or a bare path (team named after the path's file stem).
pub fn parse_export_arg(arg: &str) -> (Option<String>, PathBuf) {
    match arg.split_once('=') {
        Some((name, path)) if !name.is_empty() && !name.contains(['/', '\\']) => {
            (Some(name.to_string()), PathBuf::from(path))
        }
        _ => (None, PathBuf::from(arg)),
    }
}

/// Non-empty, non-comment lines of a list file, trimmed of surrounding colons.
fn read_id_list(path: &Path, module: &'static str) -> Result<BTreeSet<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::new(module, format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(|l| l.trim().trim_matches(':'))
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}

fn load_lexicon_arg(path: Option<&Path>) -> Result<Lexicon> {
    match path {
        Some(p) => load_lexicon(p).map_err(|e| CliError::new("lexicon", format!("{}: {e}", p.display()))),
        None => Ok(default_lexicon()),
    }
}

fn load_corpus(arg: &str, args: &CorpusArgs, redact: Option<&BTreeSet<String>>) -> Result<Corpus> {
    let (name, path) = parse_export_arg(arg);
    let corpus = parse_export(&path).map_err(|e| CliError::new("ingest", format!("{}: {e}", path.display())))?;
    let corpus = match name {
        Some(n) => corpus.with_team_id(n),
        None => corpus,
    };
    let corpus = match redact {
        Some(ids) => redact_users(&corpus, ids),
        None => corpus,
    };
    let filter = AuthorFilter {
        exclude: args.exclude_authors.iter().cloned().collect(),
        exclude_unattributed: args.exclude_unattributed,
    };
    Ok(if filter.is_noop() { corpus } else { corpus.filter_authors(&filter) })
}

fn load_redaction(args: &CorpusArgs) -> Result<Option<BTreeSet<String>>> {
    args.redact.as_deref().map(|p| read_id_list(p, "ingest")).transpose()
}

fn parse_reverse_items(s: &str) -> Result<ReverseItems> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("none") {
        return Ok(ReverseItems::none());
    }
    let items = s
        .split(',')
        .map(|p| p.trim().parse::<u8>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CliError::new("survey", format!("--reverse-items `{s}`: {e}")))?;
    ReverseItems::new(items).map_err(|e| CliError::new("survey", e))
}

fn load_survey(path: &Path) -> Result<Vec<SurveyResponse>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::new("survey", format!("{}: {e}", path.display())))?;
    read_survey_csv(file).map_err(|e| CliError::new("survey", format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str, out: &mut dyn Write) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::new("report", format!("writing {}: {e}", path.display())))?;
    emit(out, &format!("wrote {}\n", path.display()))
}

pub fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let formats = args
        .format
        .iter()
        .map(|f| f.parse::<ReportFormat>().map_err(|e| CliError::new("report", e)))
        .collect::<Result<Vec<_>>>()?;
    let lexicon = load_lexicon_arg(args.corpus.lexicon.as_deref())?;
    let redact = load_redaction(&args.corpus)?;
    let reverse = parse_reverse_items(&args.reverse_items)?;
    let custom_emoji = args.custom_emoji.as_deref().map(|p| read_id_list(p, "metrics")).transpose()?;
    let config = ReportConfig {
        n_emoji: args.top_emoji,
        metrics: MetricsOptions { gap_mode: args.gap_mode.into(), duration_cap_secs: args.duration_cap },
        custom_emoji,
    };
    let survey = args.survey.as_deref().map(load_survey).transpose()?;

    let mut reports: BTreeMap<String, TeamReport> = BTreeMap::new();
    for arg in &args.exports {
        let corpus = load_corpus(arg, &args.corpus, redact.as_ref())?;
        let report = build_team_report(&corpus, &lexicon, &config).map_err(|e| CliError::new("report", e))?;
        if reports.insert(report.team_id.clone(), report).is_some() {
            return Err(CliError::new(
                "cli",
                format!("team `{}` given more than once; name exports with TEAM=PATH", corpus.team_id()),
            ));
        }
    }

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::new("report", format!("creating {}: {e}", args.out_dir.display())))?;
    for report in reports.values() {
        for fmt in &formats {
            let path = args.out_dir.join(format!("{}.report.{}", report.team_id, fmt.extension()));
            write_file(&path, &report.render(*fmt), out)?;
        }
    }

    let Some(responses) = survey else {
        return Ok(());
    };
    let scores: Vec<PsScore> = score_all(&responses, &reverse).map_err(|e| CliError::new("survey", e))?;
    write_file(&args.out_dir.join("survey_scores.csv"), &scores_csv(&scores), out)?;
    let json = serde_json::to_string_pretty(&scores).expect("scores serialize") + "\n";
    write_file(&args.out_dir.join("survey_scores.json"), &json, out)?;
    write_file(&args.out_dir.join("survey_plot.csv"), &plot_csv(&scores), out)?;
    if reports.len() < 2 {
        return Ok(());
    }
    let selection = select_extreme_teams(&scores).map_err(|e| CliError::new("survey", e))?;
    let pick = |team: &str| {
        reports.get(team).cloned().ok_or_else(|| {
            CliError::new(
                "survey",
                format!(
                    "selected team `{team}` has no export among: {}",
                    reports.keys().cloned().collect::<Vec<_>>().join(", ")
                ),
            )
        })
    };
    let (high, low) = (pick(&selection.high_team)?, pick(&selection.low_team)?);
    let comparison = compare_teams(high, low).map_err(|e| CliError::new("report", e))?.with_selection(selection);
    let mut comparison_formats = vec![ReportFormat::Markdown];
    comparison_formats.extend(formats.iter().filter(|f| **f != ReportFormat::Markdown));
    for fmt in comparison_formats {
        let path = args.out_dir.join(format!("comparison.{}", fmt.extension()));
        write_file(&path, &comparison.render(fmt), out)?;
    }
    Ok(())
}

pub fn cmd_concordance(args: &ConcordanceArgs, out: &mut dyn Write) -> Result<()> {
    let lexicon = load_lexicon_arg(args.corpus.lexicon.as_deref())?;
    let redact = load_redaction(&args.corpus)?;
    let corpus = load_corpus(&args.export, &args.corpus, redact.as_ref())?;
    let entries =
        concordance(&corpus, &lexicon, &args.sub_category, args.context).map_err(|e| CliError::new("lexicon", e))?;
    let text = match args.format {
        ConcordanceFormat::Text => concordance_text(&entries),
        ConcordanceFormat::Jsonl => concordance_jsonl(&entries),
    };
    emit(out, &text)
}

pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<()> {
    let lexicon = load_lexicon_arg(args.corpus.lexicon.as_deref())?;
    emit(out, &format!("lexicon: OK ({} sub-categories, sha256 {})\n", lexicon.entries().len(), lexicon.digest()))?;
    let redact = load_redaction(&args.corpus)?;
    for arg in &args.exports {
        let corpus = load_corpus(arg, &args.corpus, redact.as_ref())?;
        let analytic = corpus.analytic_messages().count();
        emit(
            out,
            &format!(
                "export {}: OK ({} channels, {} users, {} messages, {} analytic)\n",
                corpus.team_id(),
                corpus.channels().len(),
                corpus.users().len(),
                corpus.message_count(),
                analytic
            ),
        )?;
        if analytic == 0 {
            emit(out, &format!("warning: export {} has zero messages\n", corpus.team_id()))?;
        }
    }
    if let Some(path) = &args.survey {
        let responses = load_survey(path)?;
        let teams: BTreeSet<&str> = responses.iter().map(|r| r.team_id.as_str()).collect();
        let periods: BTreeSet<u32> = responses.iter().map(|r| r.period).collect();
        emit(
            out,
            &format!("survey: OK ({} responses, {} teams, {} periods)\n", responses.len(), teams.len(), periods.len()),
        )?;
    }
    emit(out, "OK\n")
}
