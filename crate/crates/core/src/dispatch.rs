//! Mode dispatch shared by the command line and the C bindings.
//!
//! Reduction-aware modes (`deck`, `aligned`) and extraction rebuild the
//! reduction from the instance's provenance header and refuse to run when
//! the file's pieces do not match what the reduction would generate.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

use crate::coloring::{self, ColoringError, ColoringInstance, TwoColorCodec};
use crate::instance::Layout;
use crate::setcover::{self, SetCoverError, SetCoverInstance};
use crate::solver::{self, SolveError, SolveMode, SolveResult, SolverConfig};
use crate::text::{InstanceFile, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Steiner,
    Greedy,
    Brute,
    Deck,
    Aligned,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "exact" => Mode::Exact,
            "steiner" => Mode::Steiner,
            "greedy" => Mode::Greedy,
            "brute" => Mode::Brute,
            "deck" => Mode::Deck,
            "aligned" => Mode::Aligned,
            other => return Err(format!("unknown mode {other:?}")),
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Steiner => "steiner",
            Mode::Greedy => "greedy",
            Mode::Brute => "brute",
            Mode::Deck => "deck",
            Mode::Aligned => "aligned",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractKind {
    Coloring,
    Cover,
}

#[derive(Debug, Error)]
pub enum DispatchError {
    #[error("provenance mismatch: {0}")]
    Provenance(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    SetCover(#[from] SetCoverError),
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub time_limit: Option<Duration>,
    pub workers: usize,
    pub window: Option<i32>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            time_limit: None,
            workers: 1,
            window: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: SolveResult,
    /// Set indices of the cover, for `aligned` runs.
    pub cover: Option<BTreeSet<usize>>,
}

/// Rebuilds the coloring reduction named by the provenance header.
pub fn coloring_from(file: &InstanceFile) -> Result<ColoringInstance, DispatchError> {
    let Some(Provenance::Coloring { graph, two_color }) = &file.provenance else {
        return Err(DispatchError::Provenance("instance is not a coloring reduction".into()));
    };
    let mut ci = coloring::build_instance(graph)?;
    if *two_color {
        ci = coloring::to_two_color_instance(&ci, &TwoColorCodec::default())?;
    }
    if ci.instance() != &file.instance {
        return Err(DispatchError::Provenance(
            "pieces differ from the coloring reduction of the recorded graph".into(),
        ));
    }
    Ok(ci)
}

/// Rebuilds the set-cover reduction named by the provenance header.
pub fn setcover_from(file: &InstanceFile) -> Result<SetCoverInstance, DispatchError> {
    let Some(Provenance::SetCover(sc)) = &file.provenance else {
        return Err(DispatchError::Provenance(
            "instance is not a set-cover reduction".into(),
        ));
    };
    if setcover::build_instance(sc) != file.instance {
        return Err(DispatchError::Provenance(
            "pieces differ from the set-cover reduction of the recorded sets".into(),
        ));
    }
    Ok(sc.clone())
}

pub fn run(file: &InstanceFile, mode: Mode, opts: &RunOptions) -> Result<Outcome, DispatchError> {
    let generic = |m: SolveMode| -> Result<Outcome, DispatchError> {
        let cfg = SolverConfig {
            mode: m,
            window: opts.window,
            time_limit: opts.time_limit,
            workers: opts.workers.max(1),
            filter_subshapes: true,
        };
        Ok(Outcome {
            result: solver::solve(&file.instance, &cfg)?,
            cover: None,
        })
    };
    match mode {
        Mode::Exact => generic(SolveMode::ExactContact),
        Mode::Steiner => generic(SolveMode::ExactSteiner),
        Mode::Greedy => generic(SolveMode::Greedy),
        Mode::Brute => generic(SolveMode::Brute),
        Mode::Deck => {
            let ci = coloring_from(file)?;
            Ok(Outcome {
                result: coloring::deck_solve(&ci)?,
                cover: None,
            })
        }
        Mode::Aligned => {
            let sc = setcover_from(file)?;
            let (result, cover) = setcover::aligned_solve(&sc)?;
            Ok(Outcome {
                result,
                cover: Some(cover),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extraction {
    Coloring(Vec<Vec<usize>>),
    Cover(BTreeSet<usize>),
}

pub fn extract(file: &InstanceFile, lay: &Layout, kind: ExtractKind) -> Result<Extraction, DispatchError> {
    match kind {
        ExtractKind::Coloring => {
            let ci = coloring_from(file)?;
            Ok(Extraction::Coloring(coloring::extract_coloring(&ci, lay)?))
        }
        ExtractKind::Cover => {
            let sc = setcover_from(file)?;
            Ok(Extraction::Cover(setcover::extract_cover(&sc, lay)?))
        }
    }
}
