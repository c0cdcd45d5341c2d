//! `usageprof` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 I/O failure.

mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use usageprof::decoder::{read_predictions_jsonl, write_predictions_jsonl, Decoder, ExecutionPath};
use usageprof::metrics::{self, read_truth_csv, write_truth_csv, TableFixture};
use usageprof::parallel::{self, Execution};
use usageprof::profile::{build_profile, read_meta_csv, WeightScheme};
use usageprof::saliency::{read_pgm_stream, select_salient, DEFAULT_TAU};
use usageprof::smoothing::smooth;
use usageprof::synth::{generate_batch, ClipRequest};
use usageprof::{parse_score_file, ScoreSeries};

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{context}{source}")]
    Invalid {
        context: String,
        #[source]
        source: usageprof::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Invalid { .. } | CliError::Usage(_) => 1,
        }
    }
}

impl From<usageprof::Error> for CliError {
    fn from(source: usageprof::Error) -> Self {
        CliError::Invalid {
            context: String::new(),
            source,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn invalid_in(path: &Path) -> impl FnOnce(usageprof::Error) -> CliError + '_ {
    move |source| CliError::Invalid {
        context: format!("{}: ", path.display()),
        source,
    }
}

#[derive(Parser)]
#[command(name = "usageprof", version, about = "Usage profiles from tutorial-video classifier scores")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select salient frames from a concatenated binary PGM stream
    Saliency {
        /// PGM stream, `-` for stdin
        #[arg(default_value = "-")]
        input: PathBuf,
        /// Minimum mean absolute difference (fraction of full scale)
        #[arg(long, default_value_t = DEFAULT_TAU)]
        tau: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Moving-average smoothing of a score file
    Smooth {
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        window_seconds: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Decode score files into execution-path predictions (JSON lines)
    Decode {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Maximum number of worker threads
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Confusion matrix, precision/recall/F1 and AP
    Evaluate {
        /// Ground truth CSV (video_id,path)
        #[arg(long, requires = "pred", conflicts_with = "table")]
        truth: Option<PathBuf>,
        /// Predictions as JSON lines
        #[arg(long, requires = "truth")]
        pred: Option<PathBuf>,
        /// Published confusion table fixture
        #[arg(long)]
        table: Option<PathBuf>,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Popularity-weighted usage profile
    Profile {
        #[arg(long)]
        pred: PathBuf,
        /// Metadata CSV (video_id,views,rating)
        #[arg(long)]
        meta: PathBuf,
        /// views | views-times-rating | uniform
        #[arg(long, default_value = "views")]
        scheme: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Write synthetic score files and a truth manifest
    Synth {
        /// Path name or glyph, or `all` to cycle through the five paths
        #[arg(long)]
        path: String,
        #[arg(long)]
        fps: f64,
        #[arg(long)]
        frames: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of clips; clip i uses seed + i
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct OutArg {
    /// Output file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|source| CliError::Io {
            path: "<stdin>".into(),
            source,
        })?;
        return Ok(buf);
    }
    fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_text(path: &Path) -> CliResult<String> {
    String::from_utf8(read(path)?).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: io::Error::new(io::ErrorKind::InvalidData, e),
    })
}

fn write_to(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: &OutArg, mut text: String) -> CliResult<()> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.out {
        Some(path) => write_to(path, text.as_bytes()),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn load_series(path: &Path) -> CliResult<ScoreSeries> {
    parse_score_file(&read(path)?).map_err(invalid_in(path))
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Saliency { input, tau, out } => {
            let frames = read_pgm_stream(&read(&input)?).map_err(invalid_in(&input))?;
            let selected = select_salient(&frames, tau)?;
            emit(&out, serde_json::to_string(&selected).expect("indices serialize"))
        }
        Command::Smooth {
            input,
            window_seconds,
            out,
        } => {
            let series = load_series(&input)?;
            emit(&out, smooth(&series, window_seconds)?.to_json())
        }
        Command::Decode { inputs, jobs, out } => {
            let decoder = Decoder::default();
            let results = parallel::with_jobs(jobs, || {
                parallel::map(&inputs, Execution::Parallel, |path| {
                    let series = load_series(path)?;
                    decoder.decode(&series).map_err(invalid_in(path))
                })
            });
            let predictions = results.into_iter().collect::<CliResult<Vec<_>>>()?;
            emit(&out, write_predictions_jsonl(&predictions))
        }
        Command::Evaluate {
            truth,
            pred,
            table,
            out,
        } => {
            let report = match (truth, pred, table) {
                (Some(truth), Some(pred), None) => {
                    let truth_rows = read_truth_csv(&read_text(&truth)?).map_err(invalid_in(&truth))?;
                    let predictions =
                        read_predictions_jsonl(&read_text(&pred)?).map_err(invalid_in(&pred))?;
                    report::Report::from_evaluation(&metrics::evaluate_paths(&truth_rows, &predictions)?)
                }
                (None, None, Some(table)) => {
                    let fixture = TableFixture::parse(&read_text(&table)?).map_err(invalid_in(&table))?;
                    report::Report::from_fixture(&fixture)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "evaluate needs either --truth and --pred, or --table".into(),
                    ))
                }
            };
            if let Some(path) = out {
                write_to(&path, report.to_json().as_bytes())?;
            }
            emit(&OutArg { out: None }, report.to_text())
        }
        Command::Profile {
            pred,
            meta,
            scheme,
            out,
        } => {
            let scheme: WeightScheme = scheme.parse()?;
            let predictions = read_predictions_jsonl(&read_text(&pred)?).map_err(invalid_in(&pred))?;
            let meta_rows = read_meta_csv(&read_text(&meta)?).map_err(invalid_in(&meta))?;
            emit(&out, build_profile(&predictions, &meta_rows, scheme)?.to_json())
        }
        Command::Synth {
            path,
            fps,
            frames,
            noise,
            seed,
            count,
            out,
        } => {
            let paths: Vec<ExecutionPath> = if path.eq_ignore_ascii_case("all") {
                ExecutionPath::ALL.to_vec()
            } else {
                vec![path.parse()?]
            };
            let requests: Vec<ClipRequest> = (0..count)
                .map(|i| ClipRequest {
                    path: paths[i % paths.len()],
                    fps,
                    frames,
                    noise,
                    seed: seed + i as u64,
                })
                .collect();
            let clips = generate_batch(&requests, Execution::Parallel)?;
            fs::create_dir_all(&out).map_err(|source| CliError::Io {
                path: out.display().to_string(),
                source,
            })?;
            let mut manifest = Vec::with_capacity(clips.len());
            for clip in &clips {
                let id = clip.series.video_id().to_string();
                write_to(&out.join(format!("{id}.json")), clip.series.to_json().as_bytes())?;
                manifest.push((id, clip.path));
            }
            write_to(&out.join("truth.csv"), write_truth_csv(&manifest).as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("usageprof: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
