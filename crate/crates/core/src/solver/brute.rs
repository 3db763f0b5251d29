use std::collections::HashMap;
use std::time::Instant;

use crate::geometry::{compatible, components, Cell, Offset};
use crate::instance::{evaluate_layout, Instance, Layout};

use super::{SearchStats, SolveError, SolveResult};

/// Largest number of offset tuples [`solve_brute`] will enumerate.
pub const MAX_BRUTE_TUPLES: u128 = 100_000_000;

/// Exhaustive search: piece 0 at the origin, every other piece at every
/// offset in `[-window, window]^2`, visited in `(dy, dx)` order. Prefixes
/// that are incompatible, or whose union already reaches the incumbent
/// size, are skipped since no completion of them can be a strictly better
/// valid layout. Connectivity is checked only for improving leaves.
pub fn solve_brute(inst: &Instance, window: i32) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    if inst.is_empty() {
        return Err(SolveError::EmptyInstance);
    }
    let side = (2 * window as u128) + 1;
    let tuples = side.pow(2 * (inst.len() as u32 - 1));
    if tuples > MAX_BRUTE_TUPLES {
        return Err(SolveError::SearchSpaceTooLarge { tuples });
    }
    let mut offsets: Vec<Offset> = (-window..=window)
        .flat_map(|dy| (-window..=window).map(move |dx| Offset::new(dx, dy)))
        .collect();
    offsets.sort();

    let mut state = Brute {
        inst,
        offsets: &offsets,
        current: vec![Offset::ZERO; inst.len()],
        cover: HashMap::new(),
        best: None,
        stats: SearchStats::default(),
        start,
    };
    state.add(0, Offset::ZERO);
    state.descend(1);
    let mut stats = state.stats;
    stats.elapsed = start.elapsed();
    let (size, layout) = state.best.ok_or(SolveError::NoValidLayout)?;
    debug_assert_eq!(evaluate_layout(inst, &layout), Ok(size));
    Ok(SolveResult {
        layout,
        size,
        optimal: true,
        helper_cells: 0,
        stats,
    })
}

struct Brute<'a> {
    inst: &'a Instance,
    offsets: &'a [Offset],
    current: Vec<Offset>,
    /// Union of the placed prefix with per-cell multiplicity.
    cover: HashMap<Cell, u32>,
    best: Option<(usize, Layout)>,
    stats: SearchStats,
    start: Instant,
}

impl Brute<'_> {
    fn add(&mut self, i: usize, o: Offset) {
        for (c, _) in self.inst.piece(i).cells() {
            *self.cover.entry(*c + o).or_insert(0) += 1;
        }
    }

    fn remove(&mut self, i: usize, o: Offset) {
        for (c, _) in self.inst.piece(i).cells() {
            let cell = *c + o;
            let n = self.cover.get_mut(&cell).expect("cell was added");
            *n -= 1;
            if *n == 0 {
                self.cover.remove(&cell);
            }
        }
    }

    fn beaten(&self) -> bool {
        self.best.as_ref().is_some_and(|(b, _)| self.cover.len() >= *b)
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.inst.len() {
            self.stats.nodes += 1;
            if self.beaten() || components(self.cover.keys().copied()).len() != 1 {
                return;
            }
            let size = self.cover.len();
            self.stats.incumbents.push((self.start.elapsed(), size));
            self.best = Some((size, Layout::new(self.current.clone())));
            return;
        }
        let piece = self.inst.piece(depth);
        for &o in self.offsets {
            let ok = (0..depth).all(|j| compatible(self.inst.piece(j), piece, o - self.current[j]));
            if !ok {
                continue;
            }
            self.current[depth] = o;
            self.add(depth, o);
            if !self.beaten() {
                self.descend(depth + 1);
            }
            self.remove(depth, o);
        }
    }
}
