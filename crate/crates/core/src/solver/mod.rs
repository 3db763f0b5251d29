//! Smallest-superpolyomino solvers.
//!
//! * [`solve_exact`]: branch-and-bound over layouts. Contact mode grows a
//!   connected union one piece at a time; Steiner mode additionally allows
//!   helper cells that connect otherwise disjoint components.
//! * [`solve_brute`]: exhaustive offset enumeration, used as an oracle.
//! * [`solve_greedy`]: pairwise maximum-overlap merging.
//! * [`solve_line_single_color`]: the one-color row case.

mod brute;
mod exact;
mod greedy;
mod steiner;

use std::time::Duration;

use thiserror::Error;

use crate::geometry::{is_superpolyomino, Offset};
use crate::instance::{evaluate_layout, Instance, Layout, LayoutError};

pub use brute::{solve_brute, MAX_BRUTE_TUPLES};
pub use exact::solve_exact;
pub use greedy::solve_greedy;
pub use steiner::steiner_helper_count;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveMode {
    ExactContact,
    ExactSteiner,
    Greedy,
    Brute,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub mode: SolveMode,
    /// Bound on `|dx|` and `|dy|` of any offset relative to the pinned
    /// piece. `None` uses [`Instance::default_window`].
    pub window: Option<i32>,
    pub time_limit: Option<Duration>,
    pub workers: usize,
    /// Drop pieces contained in other pieces before searching.
    pub filter_subshapes: bool,
}

impl SolverConfig {
    pub fn new(mode: SolveMode) -> Self {
        SolverConfig {
            mode,
            window: None,
            time_limit: None,
            workers: 1,
            filter_subshapes: true,
        }
    }

    pub fn with_window(mut self, window: i32) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn without_filter(mut self) -> Self {
        self.filter_subshapes = false;
        self
    }

    fn resolve_window(&self, inst: &Instance) -> Result<i32, SolveError> {
        let w = self.window.unwrap_or_else(|| inst.default_window());
        if w < inst.max_dim() {
            return Err(SolveError::WindowTooSmall {
                window: w,
                required: inst.max_dim(),
            });
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
    /// `(time since start, size)` each time the incumbent improved.
    pub incumbents: Vec<(Duration, usize)>,
    pub timed_out: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub layout: Layout,
    /// Cells in the superpolyomino, including helper cells.
    pub size: usize,
    pub optimal: bool,
    /// Helper cells beyond the union of pieces. Nonzero only in Steiner mode.
    pub helper_cells: usize,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("instance is empty")]
    EmptyInstance,
    #[error("window {window} is smaller than the largest piece dimension {required}")]
    WindowTooSmall { window: i32, required: i32 },
    #[error("search space of {tuples} offset tuples exceeds the brute-force guard")]
    SearchSpaceTooLarge { tuples: u128 },
    #[error("no valid layout within the search window")]
    NoValidLayout,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("mode {0:?} is not handled by this solver")]
    WrongMode(SolveMode),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// Runs whichever solver `cfg.mode` selects.
pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    match cfg.mode {
        SolveMode::ExactContact | SolveMode::ExactSteiner => solve_exact(inst, cfg),
        SolveMode::Greedy => solve_greedy(inst),
        SolveMode::Brute => solve_brute(inst, cfg.resolve_window(inst)?),
    }
}

/// Pieces kept by the subshape filter, and where each dropped piece sits
/// inside a kept one.
#[derive(Debug, Clone)]
pub(crate) struct Reduction {
    pub kept: Vec<usize>,
    /// `(dropped piece, kept container, offset inside container)`.
    pub dropped: Vec<(usize, usize, Offset)>,
}

impl Reduction {
    pub fn reduced_instance(&self, inst: &Instance) -> Instance {
        inst.permuted(&self.kept)
    }

    /// Expands a layout of the reduced instance to all pieces, anchored at piece 0.
    pub fn expand(&self, total: usize, reduced: &Layout) -> Layout {
        let mut offsets = vec![Offset::ZERO; total];
        for (k, &i) in self.kept.iter().enumerate() {
            offsets[i] = reduced.offsets()[k];
        }
        for &(i, container, inner) in &self.dropped {
            offsets[i] = offsets[container] + inner;
        }
        Layout::new(offsets).anchored()
    }
}

pub(crate) fn reduce_subshapes(inst: &Instance) -> Reduction {
    let n = inst.len();
    let mut embed: Vec<Vec<Option<Offset>>> = vec![vec![None; n]; n];
    for (i, row) in embed.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            if i != j {
                *slot = is_superpolyomino(inst.piece(j), inst.piece(i)).first().copied();
            }
        }
    }
    // i is dropped when it embeds in j and either j does not embed back
    // (strictly larger) or j is an earlier duplicate.
    let dropped_flag: Vec<bool> = (0..n)
        .map(|i| (0..n).any(|j| embed[i][j].is_some() && (embed[j][i].is_none() || j < i)))
        .collect();
    let kept: Vec<usize> = (0..n).filter(|&i| !dropped_flag[i]).collect();
    let dropped = (0..n)
        .filter(|&i| dropped_flag[i])
        .map(|i| {
            let k = *kept
                .iter()
                .find(|&&k| embed[i][k].is_some())
                .expect("containment is transitive, so some kept piece contains i");
            (i, k, embed[i][k].unwrap())
        })
        .collect();
    Reduction { kept, dropped }
}

/// Removes every piece that is a subshape of another remaining piece,
/// keeping the first of identical duplicates. Order is otherwise stable.
pub fn subshape_filter(inst: &Instance) -> Instance {
    reduce_subshapes(inst).reduced_instance(inst)
}

/// One-color rows: the longest row contains every other, so stacking all
/// rows at the origin is optimal. One pass over the pieces.
pub fn solve_line_single_color(inst: &Instance) -> Result<SolveResult, SolveError> {
    let start = std::time::Instant::now();
    let mut color = None;
    let mut longest = 0;
    for (name, p) in inst.pieces() {
        if p.height() != 1 || p.size() as i32 != p.width() {
            return Err(SolveError::PreconditionViolated(format!("{name} is not a single row")));
        }
        for (_, c) in p.cells() {
            if *color.get_or_insert(*c) != *c {
                return Err(SolveError::PreconditionViolated(format!(
                    "{name} breaks the single common color"
                )));
            }
        }
        longest = longest.max(p.size());
    }
    let layout = Layout::new(vec![Offset::ZERO; inst.len()]);
    debug_assert_eq!(evaluate_layout(inst, &layout), Ok(longest));
    Ok(SolveResult {
        layout,
        size: longest,
        optimal: true,
        helper_cells: 0,
        stats: SearchStats {
            nodes: inst.len() as u64,
            elapsed: start.elapsed(),
            incumbents: vec![(start.elapsed(), longest)],
            timed_out: false,
        },
    })
}
