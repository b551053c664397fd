//! Command-line front end: documents, commands and reports.

pub mod commands;
pub mod doc;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::run;
pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "chaincond", version, about = "Chain conditions, completions and symmetric names on finite posets")]
pub struct Cli {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarize a poset: subsets, automorphisms, corank, completion.
    Analyze(AnalyzeArgs),
    /// Decide chain conditions at a threshold.
    Cc(CcArgs),
    /// Regular open completion.
    Complete(CompleteArgs),
    /// Decide which conditions force a formula.
    Force(ForceArgs),
    /// Check hereditary symmetry of names and the symmetry lemma.
    Sym(SymArgs),
    /// Check all implications between the chain conditions.
    Audit(AuditArgs),
    /// Search a corpus of small posets for a counterexample.
    Search(SearchArgs),
    /// Print the canonical form of a document.
    Fmt(FmtArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub poset: PathBuf,
    /// Comma-separated element ids to classify; repeatable.
    #[arg(long = "subset", value_name = "IDS")]
    pub subsets: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CcArgs {
    pub poset: PathBuf,
    /// Symmetry structure; decides the relative conditions.
    #[arg(long)]
    pub structure: Option<PathBuf>,
    /// Variant to decide; repeatable.
    #[arg(long = "variant", value_name = "V")]
    pub variants: Vec<chaincond::chain::CCVariant>,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Decide all four variants.
    #[arg(long)]
    pub all: bool,
    /// Quantify only over sets that are not unions of orbits of the group.
    #[arg(long)]
    pub exclude_trivial: bool,
}

#[derive(Debug, Args)]
pub struct CompleteArgs {
    pub poset: PathBuf,
    /// Comma-separated element ids whose images should be extended to a maximal antichain.
    #[arg(long, value_name = "IDS")]
    pub extend: Option<String>,
}

#[derive(Debug, Args)]
pub struct ForceArgs {
    pub poset: PathBuf,
    pub names: PathBuf,
    /// Formula document, or an inline JSON formula.
    pub formula: String,
}

#[derive(Debug, Args)]
pub struct SymArgs {
    pub poset: PathBuf,
    pub structure: PathBuf,
    pub names: PathBuf,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    pub poset: PathBuf,
    #[arg(long)]
    pub structure: Option<PathBuf>,
    #[arg(long)]
    pub exclude_trivial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Exhaustive,
    Trees,
    BinaryTrees,
    Random,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub predicate: String,
    #[arg(long, default_value_t = 5)]
    pub max_size: usize,
    /// Seed for the random corpus; implies `--corpus random` when no corpus is given.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub corpus: Option<CorpusKind>,
    /// Size of the random corpus.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// Stop after this many witnesses.
    #[arg(long, default_value_t = 1)]
    pub witnesses: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DocKind {
    Poset,
    Structure,
    Names,
    Formula,
}

#[derive(Debug, Args)]
pub struct FmtArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "poset")]
    pub kind: DocKind,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Cc(_) => "cc",
            Command::Complete(_) => "complete",
            Command::Force(_) => "force",
            Command::Sym(_) => "sym",
            Command::Audit(_) => "audit",
            Command::Search(_) => "search",
            Command::Fmt(_) => "fmt",
        }
    }
}

/// Parses arguments, runs, and renders; returns (stdout, stderr, exit code).
pub fn execute<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { report::EXIT_ERROR } else { 0 };
            let text = e.render().to_string();
            return if e.use_stderr() {
                (String::new(), text, code)
            } else {
                (text, String::new(), code)
            };
        }
    };
    let name = cli.command.name();
    match run(&cli.command) {
        Ok(Output::Report(r)) => {
            let out = if cli.json { r.to_json() } else { r.to_text() };
            (out, String::new(), r.exit)
        }
        Ok(Output::Raw(text)) => (text, String::new(), report::EXIT_HOLDS),
        Err(msg) => {
            let r = Report::error(name, &msg);
            let out = if cli.json { r.to_json() } else { String::new() };
            (out, format!("error: {msg}\n"), report::EXIT_ERROR)
        }
    }
}

/// What a command produces.
#[derive(Debug)]
pub enum Output {
    Report(Report),
    /// Verbatim text (canonical documents).
    Raw(String),
}
