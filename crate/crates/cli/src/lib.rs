//! File-in/file-out pipeline over `lombardi_core`.
//!
//! Exit codes: 0 success, 1 failed validation or round trip, 2 unreadable
//! or malformed input, 3 degenerate configuration after all retries.

pub mod svg;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use lombardi_core::arrangement::{describe, realize_search, CombinatorialDescription, EuclideanLine};
use lombardi_core::drawing::{
    construct_full, construct_restricted, extract_description, validate, with_retries, Construction, DrawingError,
    ValidateOptions,
};
use lombardi_core::files::{
    lines_to_records, read_json, records_to_lines, to_json, write_json, ArrangementFile, DrawingFile, FileError,
    GraphFile, LineRecord,
};
use lombardi_core::geom::Tolerance;
use lombardi_core::reduction::{build_core, build_full};

#[derive(Debug, Parser)]
#[command(name = "lombardi", version, about = "Lombardi drawings of pseudoline gadget graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Angle tolerance in radians.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_angle: f64,
    /// Length tolerance, relative to the drawing's vertex diameter.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_len: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Step budget of the realization search.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub budget: u64,
    /// Perturbed retries after a degenerate configuration.
    #[arg(long, global = true, default_value_t = 3)]
    pub retries: usize,
    /// SVG pixels per unit.
    #[arg(long, global = true, default_value_t = 100.0)]
    pub scale: f64,
    /// Use the full graph with circle gadgets instead of the core graph.
    #[arg(long, global = true)]
    pub full: bool,
}

impl Options {
    fn tol(&self) -> Tolerance {
        Tolerance::new(self.tol_len, self.tol_angle)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lines file to arrangement file.
    Describe {
        #[arg(long)]
        lines: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arrangement file to graph file.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lines and/or arrangement to drawing file. Without lines, the
    /// arrangement is realized by a budgeted search.
    Draw {
        #[arg(long)]
        lines: Option<PathBuf>,
        #[arg(long)]
        arrangement: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the graph the drawing is indexed by.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Checks a drawing against a graph; exit 0 iff it is a Lombardi drawing.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        drawing: PathBuf,
    },
    /// Reads the arrangement back out of a drawing.
    Extract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        drawing: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lines through reduction, drawing, validation and extraction; exit 0
    /// iff the extracted arrangement equals the lines' description.
    Roundtrip {
        #[arg(long)]
        lines: PathBuf,
    },
    /// Drawing file to SVG. Segment edges need the graph.
    Render {
        #[arg(long)]
        drawing: PathBuf,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::File(_) | CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
            CliError::Degenerate(_) => 3,
        }
    }
}

impl From<DrawingError> for CliError {
    fn from(e: DrawingError) -> Self {
        match e {
            DrawingError::DegenerateConfiguration(_) | DrawingError::SlotTangentMismatch { .. } => {
                CliError::Degenerate(e.to_string())
            }
            DrawingError::CoverageMismatch(_) | DrawingError::Arrangement(_) | DrawingError::Reduction(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// What a successful command has to say; written to stdout.
pub type Report = String;

fn emit(out: &Option<PathBuf>, text: String) -> Result<Report, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| FileError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn read_lines(path: &Path) -> Result<Vec<EuclideanLine>, CliError> {
    let records: Vec<LineRecord> = read_json(path)?;
    Ok(records_to_lines(&records))
}

fn read_arrangement(path: &Path) -> Result<CombinatorialDescription, CliError> {
    let file: ArrangementFile = read_json(path)?;
    Ok(file.to_description()?)
}

fn describe_lines(lines: &[EuclideanLine], tol: Tolerance) -> Result<CombinatorialDescription, CliError> {
    describe(lines, tol).map_err(|e| CliError::Input(e.to_string()))
}

fn construct(
    lines: &[EuclideanLine],
    d: &CombinatorialDescription,
    opts: &Options,
    full: bool,
) -> Result<Construction, CliError> {
    let tol = opts.tol();
    let build = |l: &[EuclideanLine]| {
        if full {
            construct_full(l, d, tol)
        } else {
            construct_restricted(l, d, tol)
        }
    };
    let (c, _) = with_retries(lines, d, tol, opts.retries, opts.seed, build)?;
    Ok(c)
}

/// Runs one command. On success returns the text for stdout.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let opts = &cli.opts;
    let tol = opts.tol();
    match &cli.command {
        Command::Describe { lines, out } => {
            let d = describe_lines(&read_lines(lines)?, tol)?;
            emit(out, to_json(&ArrangementFile::from_description(&d))?)
        }
        Command::Reduce { input, out } => {
            let d = read_arrangement(input)?;
            let g = if opts.full { build_full(&d) } else { build_core(&d) }
                .map_err(|e| CliError::Input(e.to_string()))?;
            emit(out, to_json(&GraphFile::from_graph(&g))?)
        }
        Command::Draw {
            lines,
            arrangement,
            out,
            graph_out,
        } => {
            let (lines, d) = match (lines, arrangement) {
                (Some(l), arr) => {
                    let lines = read_lines(l)?;
                    let d = match arr {
                        Some(a) => read_arrangement(a)?,
                        None => describe_lines(&lines, tol)?,
                    };
                    (lines, d)
                }
                (None, Some(a)) => {
                    let d = read_arrangement(a)?;
                    let lines = realize_search(&d, opts.budget, opts.seed)
                        .map_err(|e| CliError::Input(e.to_string()))?
                        .ok_or_else(|| CliError::Failed(format!("no realization of {d} found within the budget")))?;
                    (lines, d)
                }
                (None, None) => return Err(CliError::Input("draw needs --lines or --arrangement".into())),
            };
            let c = construct(&lines, &d, opts, opts.full)?;
            if let Some(path) = graph_out {
                write_json(path, &GraphFile::from_graph(&c.graph))?;
            }
            emit(out, to_json(&DrawingFile::from_drawing(&c.drawing))?)
        }
        Command::Validate { graph, drawing } => {
            let g = read_json::<GraphFile>(graph)?.to_graph()?;
            let dr = read_json::<DrawingFile>(drawing)?.to_drawing()?;
            let report = validate(&g, &dr, None, tol, ValidateOptions::default())?;
            if report.passed() {
                Ok(format!("{report}\n"))
            } else {
                Err(CliError::Failed(report.to_string()))
            }
        }
        Command::Extract { graph, drawing, out } => {
            let g = read_json::<GraphFile>(graph)?.to_graph()?;
            let dr = read_json::<DrawingFile>(drawing)?.to_drawing()?;
            let d = extract_description(&g, &dr, tol)?;
            emit(out, to_json(&ArrangementFile::from_description(&d))?)
        }
        Command::Roundtrip { lines } => {
            let lines = read_lines(lines)?;
            let d = describe_lines(&lines, tol)?;
            let c = construct(&lines, &d, opts, true)?;
            let report = validate(&c.graph, &c.drawing, None, tol, ValidateOptions::default())?;
            if !report.passed() {
                return Err(CliError::Failed(report.to_string()));
            }
            let found = extract_description(&c.graph, &c.drawing, tol)?;
            if found == d {
                Ok(format!("round trip ok: {d}\n"))
            } else {
                Err(CliError::Failed(format!("round trip changed {d} into {found}")))
            }
        }
        Command::Render { drawing, graph, out } => {
            let dr = read_json::<DrawingFile>(drawing)?.to_drawing()?;
            let g = match graph {
                Some(p) => Some(read_json::<GraphFile>(p)?.to_graph()?),
                None => None,
            };
            if let Some(g) = &g {
                dr.covers(g)?;
            }
            let svg = svg::render_svg(&dr, g.as_ref(), opts.scale)
                .ok_or_else(|| CliError::Input("drawing has segment edges; pass --graph".into()))?;
            emit(out, svg)
        }
    }
}

/// Writes lines to a file in the lines format.
pub fn write_lines(path: &Path, lines: &[EuclideanLine]) -> Result<(), FileError> {
    write_json(path, &lines_to_records(lines))
}
