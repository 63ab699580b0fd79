//! Batch entry points over `venue-core`. Each subcommand loads its inputs,
//! calls the library and renders the result; [`run`] writes everything meant
//! for stdout into the supplied writer.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use venue_core::dataset::{self, GeneratorConfig};
use venue_core::evaluation::{default_grid, evaluate, SplitSpec};
use venue_core::{
    recommend_for, validate, Channel, ConferenceInstance, ParticipantId, ParticipantRecommendations, Thresholds,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] venue_core::Error),
    #[error("{} violation(s)", .0.len())]
    Violations(Vec<String>),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("cannot write to stdout: {0}")]
    Stdout(#[from] io::Error),
}

impl CliError {
    /// 1 for invalid input, 2 for I/O failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(venue_core::Error::Io { .. } | venue_core::Error::Unwritable(_)) => 2,
            CliError::Write { .. } | CliError::Stdout(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Parser)]
#[command(
    name = "venue",
    version,
    about = "Socially-aware session recommendation for conferences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded synthetic dataset.
    Generate(GenerateArgs),
    /// Check a dataset file; exits 0 iff it has no violations.
    Validate { file: PathBuf },
    /// Print one participant's recommendations on both channels.
    Recommend(RecommendArgs),
    /// Split, sweep one channel's threshold and run the ablations.
    Evaluate(EvaluateArgs),
    /// Write the rating matrix and contact log as CSV.
    ExportCsv(ExportArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 78)]
    pub participants: usize,
    #[arg(long, default_value_t = 20)]
    pub presenters: usize,
    #[arg(long, default_value_t = 30)]
    pub sessions: usize,
    /// Size of the topic-tag vocabulary.
    #[arg(long, default_value_t = 24)]
    pub tags: usize,
    #[arg(long, default_value_t = 0.25)]
    pub rating_density: f64,
    /// Longest total contact time between two participants, in minutes.
    #[arg(long, default_value_t = 80)]
    pub max_duration: u32,
    #[arg(long, default_value_t = 7)]
    pub max_frequency: u32,
    #[arg(long, default_value_t = 0.1)]
    pub contact_density: f64,
    /// Length of the conference day, in minutes.
    #[arg(long, default_value_t = 720)]
    pub frame: u32,
    #[arg(long, default_value_t = 60)]
    pub session_length: u32,
    #[arg(long, default_value_t = 4)]
    pub locations: usize,
    #[arg(long, default_value_t = 0.6)]
    pub availability: f64,
    #[arg(long)]
    pub out: PathBuf,
}

impl GenerateArgs {
    pub fn config(&self) -> GeneratorConfig {
        GeneratorConfig {
            seed: self.seed,
            n_participants: self.participants,
            n_presenters: self.presenters,
            n_sessions: self.sessions,
            tag_vocabulary: self.tags,
            rating_density: self.rating_density,
            max_contact_duration: self.max_duration,
            max_contact_frequency: self.max_frequency,
            contact_density: self.contact_density,
            frame_t: self.frame,
            session_length: self.session_length,
            n_locations: self.locations,
            availability_coverage: self.availability,
        }
    }
}

/// Overrides for the thresholds stored in the dataset file.
#[derive(Debug, Clone, Default, Args)]
pub struct ThresholdArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub top_n: Option<usize>,
}

impl ThresholdArgs {
    pub fn apply(&self, base: Thresholds) -> Result<Thresholds> {
        let t = Thresholds {
            gamma: self.gamma.unwrap_or(base.gamma),
            beta: self.beta.unwrap_or(base.beta),
            delta: self.delta.unwrap_or(base.delta),
            top_n: self.top_n.unwrap_or(base.top_n),
            frame_t: base.frame_t,
        };
        let v = t.violations();
        if v.is_empty() {
            Ok(t)
        } else {
            Err(CliError::Violations(v))
        }
    }
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub participant: String,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    pub file: PathBuf,
    /// social_context (gamma sweep) or social_relations (beta sweep).
    #[arg(long)]
    pub channel: Channel,
    /// Comma-separated ascending threshold values; defaults to the channel's standard grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    pub split_seed: u64,
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    /// Sweep CSV destination.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional CSV destination for the ablation rows.
    #[arg(long)]
    pub ablation_out: Option<PathBuf>,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub ratings: PathBuf,
    #[arg(long)]
    pub contacts: PathBuf,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn load_valid(path: &Path) -> Result<ConferenceInstance> {
    let conf = dataset::load(path)?;
    let v = validate(&conf);
    if v.is_empty() {
        Ok(conf)
    } else {
        Err(CliError::Violations(v))
    }
}

/// Dataset label used in report headers: the file name without directories,
/// so output does not depend on where the file lives.
pub fn dataset_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn render_recommendations(
    participant: &ParticipantId,
    t: &Thresholds,
    recs: &ParticipantRecommendations,
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "participant {participant} (gamma={} beta={} delta={} top_n={})",
        t.gamma, t.beta, t.delta, t.top_n
    );
    for channel in Channel::ALL {
        let list = recs.channel(channel);
        let _ = writeln!(out, "{channel}: {}", list.len());
        for (rank, r) in list.iter().enumerate() {
            let e = &r.explanation;
            let kinds: Vec<&str> = e.relation_kinds.iter().map(|k| k.code()).collect();
            let _ = write!(
                out,
                "  {:>2}. {} by {} score={:.6} [{}]",
                rank + 1,
                r.session,
                r.presenter,
                r.score,
                kinds.join(" ")
            );
            let gates = [
                ("pearson", e.gate_values.pearson),
                ("tie", e.gate_values.tie_strength),
                ("centrality", e.gate_values.degree_centrality),
            ];
            for (name, value) in gates {
                if let Some(v) = value {
                    let _ = write!(out, " {name}={v:.6}");
                }
            }
            let m = &e.matched_slot;
            let _ = writeln!(out, " at {} {}-{}", m.location, m.window.start, m.window.end);
        }
    }
    out
}

pub fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::Generate(args) => {
            let conf = dataset::generate(&args.config())?;
            dataset::save(&conf, &args.out)?;
            writeln!(
                out,
                "wrote {}: {} participants, {} presenters, {} sessions",
                args.out.display(),
                conf.roster.len(),
                conf.presenters.len(),
                conf.sessions.len()
            )?;
        }
        Command::Validate { file } => {
            let conf = dataset::load(&file)?;
            let v = validate(&conf);
            if !v.is_empty() {
                return Err(CliError::Violations(v));
            }
            writeln!(
                out,
                "ok: {} participants, {} sessions, {} ratings, {} contacts",
                conf.roster.len(),
                conf.sessions.len(),
                conf.ratings.len(),
                conf.contacts.len()
            )?;
        }
        Command::Recommend(args) => {
            let conf = load_valid(&args.file)?;
            let t = args.thresholds.apply(conf.thresholds)?;
            let p = ParticipantId::new(args.participant.as_str());
            let recs = recommend_for(&conf.with_thresholds(t), &p)?;
            out.write_all(render_recommendations(&p, &t, &recs).as_bytes())?;
        }
        Command::Evaluate(args) => {
            let conf = load_valid(&args.file)?;
            let conf = conf.with_thresholds(args.thresholds.apply(conf.thresholds)?);
            let grid = args.grid.clone().unwrap_or_else(|| default_grid(args.channel));
            let spec = SplitSpec {
                train_fraction: args.train_fraction,
                seed: args.split_seed,
            };
            let run = evaluate(&conf, spec, args.channel, &grid, &dataset_label(&args.file))?;
            write_file(&args.out, &run.sweep.to_csv()?)?;
            if let Some(path) = &args.ablation_out {
                write_file(path, &run.ablation.to_csv()?)?;
            }
            write!(out, "{}\n{}", run.sweep.to_table(), run.ablation.to_table())?;
        }
        Command::ExportCsv(args) => {
            let conf = load_valid(&args.file)?;
            write_file(&args.ratings, &dataset::ratings_csv(&conf)?)?;
            write_file(&args.contacts, &dataset::contacts_csv(&conf)?)?;
            writeln!(out, "wrote {} and {}", args.ratings.display(), args.contacts.display())?;
        }
    }
    Ok(())
}
