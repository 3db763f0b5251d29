//! `superpoly` command line.
//!
//! Exit codes: 0 success, 1 no embedding (verify-super), 2 parse or I/O
//! error, 3 graph too small, 4 timeout (incumbent still written), 5 mode or
//! provenance mismatch, 6 extraction failure, 7 other solver failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use log::{debug, info};

use superpoly::coloring::{self, ColoringError, TwoColorCodec};
use superpoly::dispatch::{self, DispatchError, ExtractKind, Extraction, Mode, RunOptions};
use superpoly::geometry::is_superpolyomino;
use superpoly::render::to_svg;
use superpoly::setcover;
use superpoly::text::{self, InstanceFile, Provenance};

#[derive(Parser)]
#[command(name = "superpoly", version, about = "Smallest superpolyomino toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the coloring reduction of a graph.
    GenColoring {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Replace every cell by a gray/black macrocell.
        #[arg(long)]
        two_color: bool,
    },
    /// Build the one-color set-cover reduction.
    GenSetcover {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an instance.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: CliMode,
        /// Seconds before the exact search returns its incumbent.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        window: Option<i32>,
        #[arg(long)]
        layout_out: Option<PathBuf>,
    },
    /// List the offsets at which PIECE embeds in CONTAINER.
    VerifySuper {
        #[arg(long)]
        container: PathBuf,
        #[arg(long)]
        piece: PathBuf,
    },
    /// Read a coloring or cover back from a layout.
    Extract {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        layout: PathBuf,
        #[arg(long, value_enum)]
        kind: CliKind,
    },
    /// Render a polyomino or instance file.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Exact,
    Steiner,
    Greedy,
    Brute,
    Deck,
    Aligned,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Exact => Mode::Exact,
            CliMode::Steiner => Mode::Steiner,
            CliMode::Greedy => Mode::Greedy,
            CliMode::Brute => Mode::Brute,
            CliMode::Deck => Mode::Deck,
            CliMode::Aligned => Mode::Aligned,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CliKind {
    Coloring,
    Cover,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn parse<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<InstanceFile, Failure> {
    parse(path, text::parse_instance(&read(path)?))
}

fn dispatch_failure(e: DispatchError, extraction: bool) -> Failure {
    let code = match &e {
        DispatchError::Provenance(_) => 5,
        DispatchError::Coloring(ColoringError::GraphTooSmall(_)) => 3,
        DispatchError::Coloring(_) | DispatchError::SetCover(_) if extraction => 6,
        _ => 7,
    };
    Failure::new(code, e)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::GenColoring { graph, out, two_color } => {
            let g = parse(&graph, text::parse_graph(&read(&graph)?))?;
            let mut ci = coloring::build_instance(&g).map_err(|e| match e {
                ColoringError::GraphTooSmall(_) => Failure::new(3, e),
                other => Failure::new(7, other),
            })?;
            if two_color {
                ci = coloring::to_two_color_instance(&ci, &TwoColorCodec::default()).map_err(|e| Failure::new(7, e))?;
            }
            let prov = Provenance::Coloring { graph: g, two_color };
            write(&out, &text::emit_instance(ci.instance(), Some(&prov)))?;
            println!(
                "pieces={} total_cells={}",
                ci.instance().len(),
                ci.instance().total_cells()
            );
            Ok(0)
        }
        Command::GenSetcover { cover, out } => {
            let sc = parse(&cover, text::parse_setcover(&read(&cover)?))?;
            let inst = setcover::build_instance(&sc);
            write(&out, &text::emit_instance(&inst, Some(&Provenance::SetCover(sc))))?;
            println!(
                "pieces={} pbar={} total_cells={}",
                inst.len(),
                inst.piece(0).size(),
                inst.total_cells()
            );
            Ok(0)
        }
        Command::Solve {
            instance,
            mode,
            timeout,
            threads,
            window,
            layout_out,
        } => {
            let file = load_instance(&instance)?;
            let opts = RunOptions {
                time_limit: timeout.map(Duration::from_secs_f64),
                workers: threads,
                window,
            };
            let mode = Mode::from(mode);
            info!("solving {} pieces with mode {mode}", file.instance.len());
            let out = dispatch::run(&file, mode, &opts).map_err(|e| dispatch_failure(e, false))?;
            let r = &out.result;
            debug!("incumbents: {:?}", r.stats.incumbents);
            let mut line = format!("size={} optimal={} nodes={}", r.size, r.optimal, r.stats.nodes);
            if r.helper_cells > 0 {
                line.push_str(&format!(" helpers={}", r.helper_cells));
            }
            if let Some(cover) = &out.cover {
                let ids: Vec<String> = cover.iter().map(|j| j.to_string()).collect();
                line.push_str(&format!(" cover={}", ids.join(",")));
            }
            println!("{line}");
            if let Some(path) = layout_out {
                write(&path, &text::emit_layout(&file.instance, &r.layout))?;
            }
            Ok(if r.stats.timed_out { 4 } else { 0 })
        }
        Command::VerifySuper { container, piece } => {
            let c = parse(&container, text::parse_polyomino(&read(&container)?))?;
            let p = parse(&piece, text::parse_polyomino(&read(&piece)?))?;
            let offsets = is_superpolyomino(&c, &p);
            for o in &offsets {
                println!("offset={},{}", o.dx, o.dy);
            }
            println!("embeddings={}", offsets.len());
            Ok(if offsets.is_empty() { 1 } else { 0 })
        }
        Command::Extract { instance, layout, kind } => {
            let file = load_instance(&instance)?;
            let lay = parse(&layout, text::parse_layout(&read(&layout)?, &file.instance))?;
            let kind = match kind {
                CliKind::Coloring => ExtractKind::Coloring,
                CliKind::Cover => ExtractKind::Cover,
            };
            match dispatch::extract(&file, &lay, kind).map_err(|e| dispatch_failure(e, true))? {
                Extraction::Coloring(classes) => {
                    println!("classes={}", classes.len());
                    for c in classes {
                        let vs: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                        println!("class={}", vs.join(","));
                    }
                }
                Extraction::Cover(cover) => {
                    let ids: Vec<String> = cover.iter().map(|j| j.to_string()).collect();
                    println!("cover={} k={}", ids.join(","), cover.len());
                }
            }
            Ok(0)
        }
        Command::Render { input, format, out } => {
            let body = read(&input)?;
            let is_instance = body.lines().any(|l| l.starts_with("poly "));
            let rendered = if is_instance {
                let file = parse(&input, text::parse_instance(&body))?;
                match format {
                    Format::Ascii => text::emit_instance(&file.instance, file.provenance.as_ref()),
                    Format::Svg => to_svg(file.instance.pieces()),
                }
            } else {
                let p = parse(&input, text::parse_polyomino(&body))?;
                match format {
                    Format::Ascii => text::emit_polyomino(&p),
                    Format::Svg => to_svg(&[("piece".to_string(), p)]),
                }
            };
            match out {
                Some(path) => write(&path, &rendered)?,
                None => print!("{rendered}"),
            }
            Ok(0)
        }
    }
}

fn init_logging() {
    let level = match std::env::var("SUPERPOLY_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Warn,
    };
    env_logger::Builder::new().filter_level(level).init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
