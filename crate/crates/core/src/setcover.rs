//! Set cover to one-color smallest superpolyomino.
//!
//! Element `i` of the universe `{1..n}` becomes a gray *element polyomino*:
//! an `(n+1) x (n+1)` base, a one-wide flagpole rising from the base's top
//! left cell to height `3n`, and an `n`-wide flag at row `n + 2i`.
//!
//! The *set polyomino* `Pbar` has one gadget per set `S_j`: a base with cell
//! `(1, 1)` punched out, the same flagpole, and a flag at row `n + 2e` for
//! every `e` in `S_j`. Gadget bases sit side by side with a one-column gap,
//! bridged by a single cell in the bottom row.
//!
//! Aligning element `i` with gadget `j` costs exactly the puncture when
//! `i ∈ S_j`, so a rules-abiding layout costs `|Pbar| + k` for a cover of
//! size `k`. Any other placement costs at least `|Pbar| + n`.

use std::collections::BTreeSet;
use std::time::Instant;

use thiserror::Error;

use crate::geometry::{Cell, ColorId, Offset, Polyomino};
use crate::instance::{evaluate_layout, Instance, Layout, LayoutError};
use crate::solver::{SearchStats, SolveResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetCoverError {
    #[error("universe size {0} is below 2")]
    UniverseTooSmall(usize),
    #[error("no sets given")]
    NoSets,
    #[error("set {set} contains {element}, outside 1..={n}")]
    ElementOutOfRange { set: usize, element: usize, n: usize },
    #[error("element {0} is not covered by any set")]
    Uncovered(usize),
    #[error("element {element} is outside 1..={n}")]
    BadElement { element: usize, n: usize },
    #[error("instance exceeds the exhaustive guard (n = {n}, m = {m}, limit {limit})")]
    TooLarge { n: usize, m: usize, limit: usize },
    #[error("element {element} is assigned to set {set}, which does not contain it")]
    NotRulesAbiding { element: usize, set: usize },
    #[error("assignment has {found} entries for {expected} elements")]
    AssignmentLength { expected: usize, found: usize },
    #[error("element {element} sits at offset {offset} relative to Pbar, not on a gadget base")]
    MisalignedElement { element: usize, offset: Offset },
    #[error("element {element} is aligned with set {set}, which does not contain it")]
    WrongSet { element: usize, set: usize },
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// Universe `{1..n}` and sets `S_1..S_m` (1-indexed everywhere public).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetCoverInstance {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    /// Validates and normalizes (sorts, dedups) each set.
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<SetCoverInstance, SetCoverError> {
        if n < 2 {
            return Err(SetCoverError::UniverseTooSmall(n));
        }
        if sets.is_empty() {
            return Err(SetCoverError::NoSets);
        }
        let mut covered = vec![false; n + 1];
        let mut clean = Vec::with_capacity(sets.len());
        for (j, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            for &e in &s {
                if e == 0 || e > n {
                    return Err(SetCoverError::ElementOutOfRange {
                        set: j + 1,
                        element: e,
                        n,
                    });
                }
                covered[e] = true;
            }
            clean.push(s);
        }
        if let Some(e) = (1..=n).find(|&e| !covered[e]) {
            return Err(SetCoverError::Uncovered(e));
        }
        Ok(SetCoverInstance { n, sets: clean })
    }

    /// The instance drawn in the reduction's worked example.
    pub fn worked_example() -> SetCoverInstance {
        SetCoverInstance::new(4, vec![vec![1, 2], vec![1, 4], vec![2, 3, 4], vec![2, 4]]).unwrap()
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Set `j` (1-indexed).
    pub fn set(&self, j: usize) -> &[usize] {
        &self.sets[j - 1]
    }

    pub fn contains(&self, j: usize, element: usize) -> bool {
        self.set(j).binary_search(&element).is_ok()
    }

    /// `Σ_j |S_j|`.
    pub fn incidence_count(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn is_cover(&self, chosen: &BTreeSet<usize>) -> bool {
        (1..=self.n).all(|e| chosen.iter().any(|&j| self.contains(j, e)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementPolyomino {
    pub element: usize,
    pub polyomino: Polyomino,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    /// x of the gadget base's lower-left corner, `(n + 2)(j - 1)`.
    pub base_x: i32,
    pub puncture: Cell,
    pub flag_rows: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPolyomino {
    pub polyomino: Polyomino,
    pub gadgets: Vec<Gadget>,
}

fn gray(cells: impl IntoIterator<Item = (i32, i32)>) -> Polyomino {
    Polyomino::from_cells(cells.into_iter().map(|(x, y)| (Cell::new(x, y), ColorId::GRAY)))
        .expect("gadget shapes are connected")
}

/// Base, flagpole and one flag, all gray.
pub fn build_element_polyomino(n: usize, i: usize) -> Result<ElementPolyomino, SetCoverError> {
    if n < 2 {
        return Err(SetCoverError::UniverseTooSmall(n));
    }
    if i == 0 || i > n {
        return Err(SetCoverError::BadElement { element: i, n });
    }
    let n = n as i32;
    let base = (0..=n).flat_map(|y| (0..=n).map(move |x| (x, y)));
    let pole = (n..=3 * n).map(|y| (0, y));
    let flag_y = n + 2 * i as i32;
    let flag = (1..=n).map(move |x| (x, flag_y));
    Ok(ElementPolyomino {
        element: i,
        polyomino: gray(base.chain(pole).chain(flag)),
    })
}

pub fn build_set_polyomino(sc: &SetCoverInstance) -> SetPolyomino {
    let n = sc.universe_size() as i32;
    let mut cells = Vec::new();
    let mut gadgets = Vec::new();
    for (j, set) in sc.sets().iter().enumerate() {
        let x0 = (n + 2) * j as i32;
        let puncture = (x0 + 1, 1);
        cells.extend(
            (0..=n)
                .flat_map(|y| (0..=n).map(move |x| (x0 + x, y)))
                .filter(|&c| c != puncture),
        );
        cells.extend((n..=3 * n).map(|y| (x0, y)));
        let flag_rows: Vec<i32> = set.iter().map(|&e| n + 2 * e as i32).collect();
        for &fy in &flag_rows {
            cells.extend((1..=n).map(|x| (x0 + x, fy)));
        }
        if j > 0 {
            cells.push((x0 - 1, 0));
        }
        gadgets.push(Gadget {
            base_x: x0,
            puncture: Cell::new(puncture.0, puncture.1),
            flag_rows,
        });
    }
    cells.sort_unstable();
    cells.dedup();
    SetPolyomino {
        polyomino: gray(cells),
        gadgets,
    }
}

/// `[Pbar, P_1, ..., P_n]`.
pub fn build_instance(sc: &SetCoverInstance) -> Instance {
    let mut pieces = vec![("Pbar".to_string(), build_set_polyomino(sc).polyomino)];
    for i in 1..=sc.universe_size() {
        let p = build_element_polyomino(sc.universe_size(), i).expect("element in range");
        pieces.push((format!("P{i}"), p.polyomino));
    }
    Instance::new(pieces).expect("names are unique")
}

/// `assignment[i - 1]` is the set element `i` is aligned with.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlignmentAssignment(pub Vec<usize>);

impl AlignmentAssignment {
    pub fn image(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }
}

fn gadget_x(sc: &SetCoverInstance, j: usize) -> i32 {
    (sc.universe_size() as i32 + 2) * (j as i32 - 1)
}

/// `Pbar` at the origin and each element on its assigned gadget base.
pub fn aligned_layout(sc: &SetCoverInstance, a: &AlignmentAssignment) -> Result<Layout, SetCoverError> {
    if a.0.len() != sc.universe_size() {
        return Err(SetCoverError::AssignmentLength {
            expected: sc.universe_size(),
            found: a.0.len(),
        });
    }
    let mut offsets = vec![Offset::ZERO];
    for (idx, &j) in a.0.iter().enumerate() {
        let element = idx + 1;
        if j == 0 || j > sc.set_count() || !sc.contains(j, element) {
            return Err(SetCoverError::NotRulesAbiding { element, set: j });
        }
        offsets.push(Offset::new(gadget_x(sc, j), 0));
    }
    Ok(Layout::new(offsets))
}

pub const MAX_ALIGNED: usize = 12;

/// Minimizes the number of distinct gadgets used over rules-abiding
/// assignments, by depth-first search over elements in order and their
/// containing sets in order.
pub fn aligned_solve(sc: &SetCoverInstance) -> Result<(SolveResult, BTreeSet<usize>), SetCoverError> {
    let start = Instant::now();
    let (n, m) = (sc.universe_size(), sc.set_count());
    if n > MAX_ALIGNED || m > MAX_ALIGNED {
        return Err(SetCoverError::TooLarge {
            n,
            m,
            limit: MAX_ALIGNED,
        });
    }
    struct Search<'a> {
        sc: &'a SetCoverInstance,
        assignment: Vec<usize>,
        uses: Vec<usize>,
        distinct: usize,
        best: Option<(usize, Vec<usize>)>,
        nodes: u64,
    }
    impl Search<'_> {
        fn go(&mut self, element: usize) {
            self.nodes += 1;
            if self.best.as_ref().is_some_and(|(b, _)| self.distinct >= *b) {
                return;
            }
            if element > self.sc.universe_size() {
                self.best = Some((self.distinct, self.assignment.clone()));
                return;
            }
            for j in 1..=self.sc.set_count() {
                if !self.sc.contains(j, element) {
                    continue;
                }
                if self.uses[j] == 0 {
                    self.distinct += 1;
                }
                self.uses[j] += 1;
                self.assignment.push(j);
                self.go(element + 1);
                self.assignment.pop();
                self.uses[j] -= 1;
                if self.uses[j] == 0 {
                    self.distinct -= 1;
                }
            }
        }
    }
    let mut s = Search {
        sc,
        assignment: Vec::with_capacity(n),
        uses: vec![0; m + 1],
        distinct: 0,
        best: None,
        nodes: 0,
    };
    s.go(1);
    let (_, assignment) = s.best.expect("every element is covered by some set");
    let assignment = AlignmentAssignment(assignment);
    let layout = aligned_layout(sc, &assignment)?;
    let size = evaluate_layout(&build_instance(sc), &layout)?;
    let elapsed = start.elapsed();
    Ok((
        SolveResult {
            layout,
            size,
            optimal: true,
            helper_cells: 0,
            stats: SearchStats {
                nodes: s.nodes,
                elapsed,
                incumbents: vec![(elapsed, size)],
                timed_out: false,
            },
        },
        assignment.image(),
    ))
}

/// Reads the cover off a layout of [`build_instance`]: every element must
/// sit on a gadget base of a set containing it.
pub fn extract_cover(sc: &SetCoverInstance, lay: &Layout) -> Result<BTreeSet<usize>, SetCoverError> {
    let n = sc.universe_size();
    if lay.len() != n + 1 {
        return Err(LayoutError::LengthMismatch {
            expected: n + 1,
            found: lay.len(),
        }
        .into());
    }
    let origin = lay.offsets()[0];
    let mut cover = BTreeSet::new();
    for element in 1..=n {
        let rel = lay.offsets()[element] - origin;
        let j = (1..=sc.set_count())
            .find(|&j| rel == Offset::new(gadget_x(sc, j), 0))
            .ok_or(SetCoverError::MisalignedElement { element, offset: rel })?;
        if !sc.contains(j, element) {
            return Err(SetCoverError::WrongSet { element, set: j });
        }
        cover.insert(j);
    }
    Ok(cover)
}

/// Whether `offset` puts element `i`'s base on the punctured base of a set containing `i`.
pub fn is_rules_abiding(sc: &SetCoverInstance, i: usize, offset: Offset) -> bool {
    offset.dy == 0 && (1..=sc.set_count()).any(|j| offset.dx == gadget_x(sc, j) && sc.contains(j, i))
}

/// Union size of `Pbar` at the origin and element `i` at `offset`.
/// Connectivity is not required.
pub fn misalignment_size(sc: &SetCoverInstance, i: usize, offset: Offset) -> Result<usize, SetCoverError> {
    let pbar = build_set_polyomino(sc).polyomino;
    let element = build_element_polyomino(sc.universe_size(), i)?.polyomino;
    Ok(misalignment_size_with(&pbar, &element, offset))
}

fn misalignment_size_with(pbar: &Polyomino, element: &Polyomino, offset: Offset) -> usize {
    let fresh = element
        .cells()
        .iter()
        .filter(|(c, _)| !pbar.contains(*c + offset))
        .count();
    pbar.size() + fresh
}

/// Smallest union over all non-rules-abiding placements in a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisalignmentAudit {
    pub pbar_size: usize,
    pub placements: usize,
    pub min_size: usize,
    pub argmin: (usize, Offset),
}

impl MisalignmentAudit {
    /// The lower bound every cheating placement should respect.
    pub fn bound(&self, n: usize) -> usize {
        self.pbar_size + n
    }
}

/// Default sweep window for element offsets: `[-(3n+2), (n+2)m + 3n]` on both axes.
pub fn audit_window(sc: &SetCoverInstance) -> (i32, i32) {
    let (n, m) = (sc.universe_size() as i32, sc.set_count() as i32);
    (-(3 * n + 2), (n + 2) * m + 3 * n)
}

/// Sweeps every element over every offset in `[lo, hi]^2`, skipping
/// rules-abiding placements.
pub fn audit_misalignment(sc: &SetCoverInstance, lo: i32, hi: i32) -> MisalignmentAudit {
    let pbar = build_set_polyomino(sc).polyomino;
    let mut audit = MisalignmentAudit {
        pbar_size: pbar.size(),
        placements: 0,
        min_size: usize::MAX,
        argmin: (0, Offset::ZERO),
    };
    for i in 1..=sc.universe_size() {
        let element = build_element_polyomino(sc.universe_size(), i)
            .expect("element in range")
            .polyomino;
        for dy in lo..=hi {
            for dx in lo..=hi {
                let o = Offset::new(dx, dy);
                if is_rules_abiding(sc, i, o) {
                    continue;
                }
                audit.placements += 1;
                let size = misalignment_size_with(&pbar, &element, o);
                if size < audit.min_size {
                    audit.min_size = size;
                    audit.argmin = (i, o);
                }
            }
        }
    }
    audit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_superpolyomino;

    #[test]
    fn element_sizes() {
        let p = build_element_polyomino(4, 1).unwrap();
        assert_eq!(p.polyomino.size(), 37);
        assert!((1..=4).all(|x| p.polyomino.contains(Cell::new(x, 6))));
        assert!(!p.polyomino.contains(Cell::new(1, 8)));

        let top = build_element_polyomino(4, 4).unwrap().polyomino;
        assert_eq!(top.height(), 13);
        assert!(top.contains(Cell::new(0, 12)) && top.contains(Cell::new(1, 12)));

        assert_eq!(build_element_polyomino(2, 1).unwrap().polyomino.size(), 15);
        assert!(matches!(
            build_element_polyomino(4, 5),
            Err(SetCoverError::BadElement { element: 5, n: 4 })
        ));
        assert!(build_element_polyomino(4, 0).is_err());
    }

    #[test]
    fn worked_set_polyomino() {
        let sc = SetCoverInstance::worked_example();
        let sp = build_set_polyomino(&sc);
        assert_eq!(sp.polyomino.size(), 167);
        assert_eq!(sp.gadgets.len(), 4);
        assert_eq!(sp.gadgets[2].flag_rows, vec![8, 10, 12]);
        for g in &sp.gadgets {
            assert!(!sp.polyomino.contains(g.puncture));
        }
        // Gap columns carry exactly one cell, in the bottom row.
        for j in 1..4 {
            let gap = 6 * j - 1;
            let count = (0..sp.polyomino.height())
                .filter(|&y| sp.polyomino.contains(Cell::new(gap, y)))
                .count();
            assert_eq!(count, 1);
            assert!(sp.polyomino.contains(Cell::new(gap, 0)));
        }
    }

    #[test]
    fn single_set_has_no_connector() {
        for n in 2..=5 {
            let sc = SetCoverInstance::new(n, vec![(1..=n).collect()]).unwrap();
            assert_eq!(build_set_polyomino(&sc).polyomino.size(), 2 * n * n + 4 * n);
        }
    }

    #[test]
    fn instance_shapes() {
        let sc = SetCoverInstance::worked_example();
        let inst = build_instance(&sc);
        assert_eq!(inst.len(), 5);
        assert_eq!(inst.pieces()[0].0, "Pbar");
        assert_eq!(inst.total_cells(), 167 + 4 * 37);
        let small = SetCoverInstance::new(2, vec![vec![1, 2]]).unwrap();
        assert_eq!(build_instance(&small).len(), 3);
        assert!(inst.polyominoes().all(|p| p.colors() == vec![ColorId::GRAY]));
    }

    #[test]
    fn worked_cover_layout() {
        let sc = SetCoverInstance::worked_example();
        let a = AlignmentAssignment(vec![1, 1, 3, 3]);
        let lay = aligned_layout(&sc, &a).unwrap();
        assert_eq!(evaluate_layout(&build_instance(&sc), &lay), Ok(169));
        assert_eq!(extract_cover(&sc, &lay).unwrap(), BTreeSet::from([1, 3]));
        assert_eq!(
            aligned_layout(&sc, &AlignmentAssignment(vec![3, 1, 3, 3])),
            Err(SetCoverError::NotRulesAbiding { element: 1, set: 3 })
        );
    }

    #[test]
    fn every_set_used() {
        let sc = SetCoverInstance::worked_example();
        let lay = aligned_layout(&sc, &AlignmentAssignment(vec![1, 4, 3, 2])).unwrap();
        assert_eq!(evaluate_layout(&build_instance(&sc), &lay), Ok(167 + 4));
    }

    #[test]
    fn aligned_solve_examples() {
        let (r, cover) = aligned_solve(&SetCoverInstance::worked_example()).unwrap();
        assert_eq!(r.size, 169);
        assert_eq!(cover, BTreeSet::from([1, 3]));

        let single = SetCoverInstance::new(2, vec![vec![1, 2]]).unwrap();
        let (r, cover) = aligned_solve(&single).unwrap();
        assert_eq!(r.size, build_set_polyomino(&single).polyomino.size() + 1);
        assert_eq!(cover, BTreeSet::from([1]));

        let big = SetCoverInstance::new(13, vec![(1..=13).collect()]).unwrap();
        assert!(matches!(aligned_solve(&big), Err(SetCoverError::TooLarge { .. })));
    }

    #[test]
    fn extract_errors() {
        let sc = SetCoverInstance::worked_example();
        let mut offs = aligned_layout(&sc, &AlignmentAssignment(vec![1, 1, 3, 3]))
            .unwrap()
            .offsets()
            .to_vec();
        offs[3] = offs[3] + Offset::new(1, 0);
        assert_eq!(
            extract_cover(&sc, &Layout::new(offs)),
            Err(SetCoverError::MisalignedElement {
                element: 3,
                offset: Offset::new(13, 0)
            })
        );
        let wrong = Layout::new(vec![
            Offset::ZERO,
            Offset::new(12, 0),
            Offset::ZERO,
            Offset::new(12, 0),
            Offset::new(12, 0),
        ]);
        assert_eq!(
            extract_cover(&sc, &wrong),
            Err(SetCoverError::WrongSet { element: 1, set: 3 })
        );
        // Translating the whole layout does not matter.
        let lay = aligned_layout(&sc, &AlignmentAssignment(vec![2, 1, 3, 2])).unwrap();
        assert_eq!(
            extract_cover(&sc, &lay.shifted(Offset::new(-7, 4))).unwrap(),
            BTreeSet::from([1, 2, 3])
        );
    }

    #[test]
    fn misalignment_examples() {
        let sc = SetCoverInstance::worked_example();
        assert_eq!(misalignment_size(&sc, 1, Offset::new(12, 0)).unwrap(), 172);
        assert_eq!(misalignment_size(&sc, 1, Offset::ZERO).unwrap(), 168);
        for j in 0..4 {
            let left = Offset::new(6 * j - 1, 0);
            assert!(misalignment_size(&sc, 1, left).unwrap() >= 167 + 4);
        }
    }

    #[test]
    fn aligned_element_is_subshape_of_patched_gadget() {
        let sc = SetCoverInstance::worked_example();
        let inst = build_instance(&sc);
        let lay = aligned_layout(&sc, &AlignmentAssignment(vec![1, 1, 3, 3])).unwrap();
        let union = crate::instance::layout_union(&inst, &lay).unwrap();
        let (sup, _) = crate::geometry::normalize(&union).unwrap();
        for p in inst.polyominoes() {
            assert!(!is_superpolyomino(&sup, p).is_empty());
        }
    }

    #[test]
    fn invalid_instances() {
        assert_eq!(
            SetCoverInstance::new(1, vec![vec![1]]),
            Err(SetCoverError::UniverseTooSmall(1))
        );
        assert_eq!(SetCoverInstance::new(3, vec![]), Err(SetCoverError::NoSets));
        assert_eq!(
            SetCoverInstance::new(3, vec![vec![1, 2]]),
            Err(SetCoverError::Uncovered(3))
        );
        assert!(matches!(
            SetCoverInstance::new(3, vec![vec![1, 2, 4]]),
            Err(SetCoverError::ElementOutOfRange { element: 4, .. })
        ));
    }
}
