//! Branch-and-bound for the smallest superpolyomino.
//!
//! Contact mode pins the largest piece at the origin and repeatedly attaches
//! any unplaced piece at an offset where it is compatible with, and overlaps
//! or edge-touches, the current union. Every connected layout is reachable
//! this way because its pieces can be attached along a spanning tree of
//! their contact graph. Candidates are expanded by piece index, then by
//! `(dy, dx)`, so the first optimal leaf found is canonical.
//!
//! Pruning uses `max(|union|, largest unplaced piece)`: the union only grows
//! and must eventually contain every piece.
//!
//! Top-level branches may run on a thread pool. Each branch prunes against
//! its own incumbent with `>=` and against the shared incumbent with `>`, so
//! no branch ever discards its first optimal leaf and the reported layout
//! is independent of scheduling.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::geometry::{Cell, ColorId, Offset, Polyomino};
use crate::instance::{Instance, Layout};

use super::greedy::solve_greedy;
use super::steiner::steiner_helper_count;
use super::{reduce_subshapes, Reduction, SearchStats, SolveError, SolveMode, SolveResult, SolverConfig};

const DIRS: [Offset; 5] = [
    Offset::new(0, 0),
    Offset::new(1, 0),
    Offset::new(-1, 0),
    Offset::new(0, 1),
    Offset::new(0, -1),
];

struct Shared {
    start: Instant,
    deadline: Option<Instant>,
    stop: AtomicBool,
    nodes: AtomicU64,
    best: AtomicUsize,
    history: Mutex<Vec<(Duration, usize)>>,
}

impl Shared {
    fn record(&self, size: usize) {
        let prev = self.best.fetch_min(size, Ordering::SeqCst);
        if size < prev {
            self.history
                .lock()
                .expect("history lock")
                .push((self.start.elapsed(), size));
        }
    }

    fn check_time(&self) -> bool {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.stop.store(true, Ordering::Relaxed);
            }
        }
        self.stop.load(Ordering::Relaxed)
    }
}

#[derive(Clone)]
struct PartialLayout<'a> {
    pieces: &'a [Polyomino],
    union: HashMap<Cell, ColorId>,
    /// Union cells in insertion order, for undo.
    added: Vec<Cell>,
    offsets: Vec<Option<Offset>>,
}

impl<'a> PartialLayout<'a> {
    fn new(pieces: &'a [Polyomino]) -> Self {
        PartialLayout {
            pieces,
            union: HashMap::new(),
            added: Vec::new(),
            offsets: vec![None; pieces.len()],
        }
    }

    fn fits(&self, piece: usize, o: Offset) -> bool {
        self.pieces[piece]
            .cells()
            .iter()
            .all(|(c, col)| self.union.get(&(*c + o)).is_none_or(|u| u == col))
    }

    /// Places a piece, returning how many new cells it added.
    fn place(&mut self, piece: usize, o: Offset) -> usize {
        let before = self.added.len();
        for (c, col) in self.pieces[piece].cells() {
            let t = *c + o;
            if self.union.insert(t, *col).is_none() {
                self.added.push(t);
            }
        }
        self.offsets[piece] = Some(o);
        self.added.len() - before
    }

    fn unplace(&mut self, piece: usize, added: usize) {
        for _ in 0..added {
            let c = self.added.pop().expect("undo stack");
            self.union.remove(&c);
        }
        self.offsets[piece] = None;
    }

    fn unplaced(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.pieces.len()).filter(|&i| self.offsets[i].is_none())
    }

    fn lower_bound(&self) -> usize {
        self.unplaced()
            .map(|i| self.pieces[i].size())
            .max()
            .unwrap_or(0)
            .max(self.union.len())
    }

    /// Offsets where `piece` touches or overlaps the union compatibly.
    fn contact_offsets(&self, piece: usize, window: i32) -> Vec<Offset> {
        let mut set = BTreeSet::new();
        for u in &self.added {
            for (c, _) in self.pieces[piece].cells() {
                for d in DIRS {
                    let o = Offset::new(u.x - c.x, u.y - c.y) + d;
                    if o.max_abs() <= window {
                        set.insert(o);
                    }
                }
            }
        }
        set.into_iter().filter(|o| self.fits(piece, *o)).collect()
    }

    fn snapshot(&self) -> Vec<Offset> {
        self.offsets.iter().map(|o| o.expect("complete layout")).collect()
    }
}

struct Branch<'s, 'a> {
    shared: &'s Shared,
    window: i32,
    state: PartialLayout<'a>,
    bound: usize,
    best: Option<Vec<Offset>>,
    nodes: u64,
}

impl Branch<'_, '_> {
    fn dfs(&mut self) {
        self.nodes += 1;
        if self.nodes % 256 == 1 && self.shared.check_time() {
            return;
        }
        if self.shared.stop.load(Ordering::Relaxed) {
            return;
        }
        if self.state.unplaced().next().is_none() {
            let size = self.state.union.len();
            if size < self.bound {
                self.bound = size;
                self.best = Some(self.state.snapshot());
                self.shared.record(size);
            }
            return;
        }
        let lb = self.state.lower_bound();
        if lb >= self.bound || lb > self.shared.best.load(Ordering::Relaxed) {
            return;
        }
        let unplaced: Vec<usize> = self.state.unplaced().collect();
        for p in unplaced {
            for o in self.state.contact_offsets(p, self.window) {
                let added = self.state.place(p, o);
                self.dfs();
                self.state.unplace(p, added);
            }
        }
    }
}

fn contact_search(
    pieces: &[Polyomino],
    root: usize,
    window: i32,
    seed: usize,
    workers: usize,
    shared: &Shared,
) -> Option<(usize, Vec<Offset>)> {
    let mut root_state = PartialLayout::new(pieces);
    root_state.place(root, Offset::ZERO);
    if pieces.len() == 1 {
        let size = pieces[0].size();
        shared.record(size);
        return Some((size, vec![Offset::ZERO]));
    }
    let branches: Vec<(usize, Offset)> = root_state
        .unplaced()
        .flat_map(|p| root_state.contact_offsets(p, window).into_iter().map(move |o| (p, o)))
        .collect();
    let run = |&(p, o): &(usize, Offset)| {
        if shared.check_time() {
            return None;
        }
        let mut branch = Branch {
            shared,
            window,
            state: root_state.clone(),
            bound: seed + 1,
            best: None,
            nodes: 0,
        };
        branch.state.place(p, o);
        branch.dfs();
        shared.nodes.fetch_add(branch.nodes, Ordering::Relaxed);
        branch.best.map(|b| (branch.bound, b))
    };
    let results: Vec<Option<(usize, Vec<Offset>)>> = if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| branches.par_iter().map(run).collect())
    } else {
        branches.iter().map(run).collect()
    };
    // Smallest size wins; earlier branch wins ties.
    results
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(usize, Vec<Offset>)>, cand| match acc {
            Some(a) if a.0 <= cand.0 => Some(a),
            _ => Some(cand),
        })
}

/// Searches layouts whose union may be disconnected, charging helper cells
/// for connecting components. Only layouts strictly smaller than `bound`
/// are reported.
fn steiner_search(
    pieces: &[Polyomino],
    root: usize,
    window: i32,
    bound: usize,
    shared: &Shared,
) -> Option<(usize, usize, Vec<Offset>)> {
    struct Steiner<'s, 'a> {
        shared: &'s Shared,
        order: Vec<usize>,
        offsets: Vec<Offset>,
        state: PartialLayout<'a>,
        bound: usize,
        best: Option<(usize, usize, Vec<Offset>)>,
        nodes: u64,
    }
    impl Steiner<'_, '_> {
        fn dfs(&mut self, depth: usize) {
            self.nodes += 1;
            if self.nodes.is_multiple_of(1024) && self.shared.check_time() {
                return;
            }
            if self.shared.stop.load(Ordering::Relaxed) || self.state.union.len() >= self.bound {
                return;
            }
            if depth == self.order.len() {
                let size = self.state.union.len();
                let comps = crate::geometry::components(self.state.union.keys().copied()).len();
                if size + comps > self.bound {
                    return;
                }
                let helpers = steiner_helper_count(self.state.union.keys().copied());
                if size + helpers < self.bound {
                    self.bound = size + helpers;
                    self.best = Some((size + helpers, helpers, self.state.snapshot()));
                    self.shared.record(size + helpers);
                }
                return;
            }
            let p = self.order[depth];
            for i in 0..self.offsets.len() {
                let o = self.offsets[i];
                if self.state.fits(p, o) {
                    let added = self.state.place(p, o);
                    self.dfs(depth + 1);
                    self.state.unplace(p, added);
                }
            }
        }
    }

    let mut offsets: Vec<Offset> = (-window..=window)
        .flat_map(|dy| (-window..=window).map(move |dx| Offset::new(dx, dy)))
        .collect();
    offsets.sort();
    let mut state = PartialLayout::new(pieces);
    state.place(root, Offset::ZERO);
    let mut s = Steiner {
        shared,
        order: (0..pieces.len()).filter(|&i| i != root).collect(),
        offsets,
        state,
        bound,
        best: None,
        nodes: 0,
    };
    s.dfs(0);
    shared.nodes.fetch_add(s.nodes, Ordering::Relaxed);
    s.best
}

/// Exact branch-and-bound in contact or Steiner mode.
///
/// On timeout the best layout found so far is returned with
/// `optimal = false` and `stats.timed_out = true`.
pub fn solve_exact(inst: &Instance, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    if !matches!(cfg.mode, SolveMode::ExactContact | SolveMode::ExactSteiner) {
        return Err(SolveError::WrongMode(cfg.mode));
    }
    if inst.is_empty() {
        return Err(SolveError::EmptyInstance);
    }
    let window = cfg.resolve_window(inst)?;
    let start = Instant::now();
    let reduction = if cfg.filter_subshapes {
        reduce_subshapes(inst)
    } else {
        Reduction {
            kept: (0..inst.len()).collect(),
            dropped: Vec::new(),
        }
    };
    let reduced = reduction.reduced_instance(inst);
    let pieces: Vec<Polyomino> = reduced.polyominoes().cloned().collect();
    let seed = solve_greedy(&reduced)?;
    let shared = Shared {
        start,
        deadline: cfg.time_limit.map(|d| start + d),
        stop: AtomicBool::new(false),
        nodes: AtomicU64::new(0),
        best: AtomicUsize::new(seed.size),
        history: Mutex::new(vec![(start.elapsed(), seed.size)]),
    };
    // Largest piece first; lowest index on ties.
    let root = (0..pieces.len())
        .max_by(|&a, &b| pieces[a].size().cmp(&pieces[b].size()).then(b.cmp(&a)))
        .expect("nonempty");

    let found = contact_search(&pieces, root, window, seed.size, cfg.workers, &shared);
    let mut helper_cells = 0;
    let (mut size, mut reduced_layout) = match &found {
        Some((size, offsets)) => (*size, Layout::new(offsets.clone())),
        None => (seed.size, seed.layout.clone()),
    };
    if cfg.mode == SolveMode::ExactSteiner && !shared.stop.load(Ordering::Relaxed) {
        if let Some((s, h, offsets)) = steiner_search(&pieces, root, window, size, &shared) {
            size = s;
            helper_cells = h;
            reduced_layout = Layout::new(offsets);
        }
    }
    let timed_out = shared.stop.load(Ordering::Relaxed);
    let layout = reduction.expand(inst.len(), &reduced_layout);
    let mut incumbents = shared.history.into_inner().expect("history lock");
    incumbents.sort();
    Ok(SolveResult {
        layout,
        size,
        optimal: !timed_out && found.is_some(),
        helper_cells,
        stats: SearchStats {
            nodes: shared.nodes.into_inner(),
            elapsed: start.elapsed(),
            incumbents,
            timed_out,
        },
    })
}
