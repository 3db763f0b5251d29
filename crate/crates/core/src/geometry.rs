//! Lattice geometry for colored polyominoes.
//!
//! A [`Polyomino`] is a nonempty, 4-connected set of lattice cells, each
//! carrying a [`ColorId`]. Polyominoes are always stored normalized: the
//! bounding box corner sits at `(0, 0)`. Intermediate unions that may be
//! disconnected or unnormalized live in a [`CellCluster`].
//!
//! Only translations are considered. Two polyominoes placed at a relative
//! [`Offset`] are *compatible* when every cell they share has the same color.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

/// Index of a color in a [`Palette`](crate::text::Palette).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorId(pub u8);

impl ColorId {
    pub const GRAY: ColorId = ColorId(0);
    pub const BLACK: ColorId = ColorId(1);
    pub const RED: ColorId = ColorId(2);
    pub const GREEN: ColorId = ColorId(3);
    pub const BLUE: ColorId = ColorId(4);
    pub const PURPLE: ColorId = ColorId(5);
    pub const ORANGE: ColorId = ColorId(6);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A lattice cell. `y` grows upward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    pub fn neighbors(self) -> [Cell; 4] {
        [
            Cell::new(self.x + 1, self.y),
            Cell::new(self.x - 1, self.y),
            Cell::new(self.x, self.y + 1),
            Cell::new(self.x, self.y - 1),
        ]
    }
}

// Row-major, bottom row first: (y, x).
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A translation vector. Ordered lexicographically by `(dy, dx)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Offset {
    pub dx: i32,
    pub dy: i32,
}

impl Offset {
    pub const ZERO: Offset = Offset { dx: 0, dy: 0 };

    pub const fn new(dx: i32, dy: i32) -> Self {
        Offset { dx, dy }
    }

    /// Chebyshev norm, used for search windows.
    pub fn max_abs(self) -> i32 {
        self.dx.abs().max(self.dy.abs())
    }
}

impl Ord for Offset {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dy, self.dx).cmp(&(other.dy, other.dx))
    }
}

impl PartialOrd for Offset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Offset {
    type Output = Offset;
    fn add(self, rhs: Offset) -> Offset {
        Offset::new(self.dx + rhs.dx, self.dy + rhs.dy)
    }
}

impl Sub for Offset {
    type Output = Offset;
    fn sub(self, rhs: Offset) -> Offset {
        Offset::new(self.dx - rhs.dx, self.dy - rhs.dy)
    }
}

impl Neg for Offset {
    type Output = Offset;
    fn neg(self) -> Offset {
        Offset::new(-self.dx, -self.dy)
    }
}

impl Add<Offset> for Cell {
    type Output = Cell;
    fn add(self, rhs: Offset) -> Cell {
        Cell::new(self.x + rhs.dx, self.y + rhs.dy)
    }
}

impl Sub for Cell {
    type Output = Offset;
    fn sub(self, rhs: Cell) -> Offset {
        Offset::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dx, self.dy)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("cell cluster is empty")]
    EmptyCluster,
    #[error("cell cluster is not 4-connected ({components} components)")]
    DisconnectedCluster { components: usize },
    #[error("color conflict at cell {cell}")]
    ColorConflict { cell: Cell },
}

/// A finite colored cell set with no shape invariants.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CellCluster {
    cells: BTreeMap<Cell, ColorId>,
}

impl CellCluster {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a cell, returning the color previously stored there.
    pub fn insert(&mut self, cell: Cell, color: ColorId) -> Option<ColorId> {
        self.cells.insert(cell, color)
    }

    pub fn get(&self, cell: Cell) -> Option<ColorId> {
        self.cells.get(&cell).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells in `(y, x)` order.
    pub fn iter(&self) -> impl Iterator<Item = (Cell, ColorId)> + '_ {
        self.cells.iter().map(|(c, col)| (*c, *col))
    }

    /// Number of 4-connected components.
    pub fn component_count(&self) -> usize {
        components(self.cells.keys().copied()).len()
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.component_count() == 1
    }

    /// Merges `other` in. Fails on the first cell (in `other`'s order) whose
    /// color disagrees; `self` is left partially updated in that case.
    pub fn merge(&mut self, other: &CellCluster) -> Result<(), GeometryError> {
        for (cell, color) in other.iter() {
            match self.cells.insert(cell, color) {
                Some(prev) if prev != color => {
                    self.cells.insert(cell, prev);
                    return Err(GeometryError::ColorConflict { cell });
                }
                _ => {}
            }
        }
        Ok(())
    }
}

impl FromIterator<(Cell, ColorId)> for CellCluster {
    fn from_iter<I: IntoIterator<Item = (Cell, ColorId)>>(iter: I) -> Self {
        CellCluster {
            cells: iter.into_iter().collect(),
        }
    }
}

/// Splits a cell set into 4-connected components, each sorted, ordered by
/// their smallest cell.
pub fn components<I: IntoIterator<Item = Cell>>(cells: I) -> Vec<Vec<Cell>> {
    let mut remaining: HashSet<Cell> = cells.into_iter().collect();
    let mut seeds: Vec<Cell> = remaining.iter().copied().collect();
    seeds.sort();
    let mut out = Vec::new();
    for seed in seeds {
        if !remaining.remove(&seed) {
            continue;
        }
        let mut comp = vec![seed];
        let mut queue = VecDeque::from([seed]);
        while let Some(c) = queue.pop_front() {
            for n in c.neighbors() {
                if remaining.remove(&n) {
                    comp.push(n);
                    queue.push_back(n);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// A normalized, connected, nonempty colored polyomino.
///
/// Cells are kept sorted in `(y, x)` order alongside a dense row-major grid
/// for constant-time color lookup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polyomino {
    cells: Vec<(Cell, ColorId)>,
    width: i32,
    height: i32,
    grid: Vec<Option<ColorId>>,
}

impl Polyomino {
    /// Builds a polyomino from arbitrary cells, discarding the normalizing offset.
    pub fn from_cells<I: IntoIterator<Item = (Cell, ColorId)>>(cells: I) -> Result<Polyomino, GeometryError> {
        normalize(&cells.into_iter().collect()).map(|(p, _)| p)
    }

    /// A `width x height` rectangle of one color.
    pub fn rectangle(width: i32, height: i32, color: ColorId) -> Polyomino {
        assert!(width > 0 && height > 0, "rectangle must be nonempty");
        Polyomino::from_cells((0..height).flat_map(|y| (0..width).map(move |x| (Cell::new(x, y), color))))
            .expect("rectangles are connected")
    }

    /// Number of cells, |P|.
    pub fn size(&self) -> usize {
        self.cells.len()
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    /// Larger bounding-box dimension.
    pub fn max_dim(&self) -> i32 {
        self.width.max(self.height)
    }

    pub fn cells(&self) -> &[(Cell, ColorId)] {
        &self.cells
    }

    pub fn color_at(&self, cell: Cell) -> Option<ColorId> {
        if cell.x < 0 || cell.y < 0 || cell.x >= self.width || cell.y >= self.height {
            return None;
        }
        self.grid[(cell.y * self.width + cell.x) as usize]
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.color_at(cell).is_some()
    }

    /// Distinct colors used, ascending.
    pub fn colors(&self) -> Vec<ColorId> {
        let mut cs: Vec<ColorId> = self.cells.iter().map(|(_, c)| *c).collect();
        cs.sort();
        cs.dedup();
        cs
    }

    pub fn to_cluster(&self) -> CellCluster {
        self.cells.iter().copied().collect()
    }
}

/// Translates a cluster so its bounding-box corner is `(0, 0)`.
///
/// Returns the polyomino and the offset that was applied.
pub fn normalize(cluster: &CellCluster) -> Result<(Polyomino, Offset), GeometryError> {
    if cluster.is_empty() {
        return Err(GeometryError::EmptyCluster);
    }
    let comps = cluster.component_count();
    if comps != 1 {
        return Err(GeometryError::DisconnectedCluster { components: comps });
    }
    let min_x = cluster.iter().map(|(c, _)| c.x).min().unwrap();
    let min_y = cluster.iter().map(|(c, _)| c.y).min().unwrap();
    let max_x = cluster.iter().map(|(c, _)| c.x).max().unwrap();
    let max_y = cluster.iter().map(|(c, _)| c.y).max().unwrap();
    let shift = Offset::new(-min_x, -min_y);
    let width = max_x - min_x + 1;
    let height = max_y - min_y + 1;
    let mut grid = vec![None; (width * height) as usize];
    let cells: Vec<(Cell, ColorId)> = cluster
        .iter()
        .map(|(c, col)| {
            let t = c + shift;
            grid[(t.y * width + t.x) as usize] = Some(col);
            (t, col)
        })
        .collect();
    Ok((
        Polyomino {
            cells,
            width,
            height,
            grid,
        },
        shift,
    ))
}

pub fn translate(p: &Polyomino, o: Offset) -> CellCluster {
    p.cells.iter().map(|(c, col)| (*c + o, *col)).collect()
}

/// True iff every cell shared by `pu` and `pv` translated by `o` has equal color.
pub fn compatible(pu: &Polyomino, pv: &Polyomino, o: Offset) -> bool {
    pv.cells
        .iter()
        .all(|(c, col)| pu.color_at(*c + o).is_none_or(|other| other == *col))
}

/// Number of cells `pu` shares with `pv` translated by `o`, ignoring color.
pub fn overlap_count(pu: &Polyomino, pv: &Polyomino, o: Offset) -> usize {
    pv.cells.iter().filter(|(c, _)| pu.contains(*c + o)).count()
}

/// Union of `pu` and `pv` translated by `o`.
pub fn superimpose(pu: &Polyomino, pv: &Polyomino, o: Offset) -> Result<CellCluster, GeometryError> {
    let mut union = pu.to_cluster();
    union.merge(&translate(pv, o))?;
    Ok(union)
}

/// All offsets at which `piece` lies entirely inside `container` with
/// matching colors, in `(dy, dx)` order. Empty means not a superpolyomino.
pub fn is_superpolyomino(container: &Polyomino, piece: &Polyomino) -> Vec<Offset> {
    let mut out = Vec::new();
    for dy in 0..=(container.height - piece.height) {
        for dx in 0..=(container.width - piece.width) {
            let o = Offset::new(dx, dy);
            if piece
                .cells
                .iter()
                .all(|(c, col)| container.color_at(*c + o) == Some(*col))
            {
                out.push(o);
            }
        }
    }
    out
}

fn touches(pu: &Polyomino, pv: &Polyomino, o: Offset) -> bool {
    pv.cells
        .iter()
        .any(|(c, _)| (*c + o).neighbors().iter().any(|n| pu.contains(*n)))
}

/// Offset of `pv` maximizing shared cells with `pu`, over placements that are
/// compatible and whose union is connected. Ties go to the smallest `(dy, dx)`.
pub fn max_overlap(pu: &Polyomino, pv: &Polyomino) -> (Offset, usize) {
    let mut best: Option<(Offset, usize)> = None;
    for dy in -pv.height..=pu.height {
        for dx in -pv.width..=pu.width {
            let o = Offset::new(dx, dy);
            if !compatible(pu, pv, o) {
                continue;
            }
            let shared = overlap_count(pu, pv, o);
            if shared == 0 && !touches(pu, pv, o) {
                continue;
            }
            if best.is_none_or(|(_, b)| shared > b) {
                best = Some((o, shared));
            }
        }
    }
    // Side-by-side placement along the bottom row always touches.
    best.expect("an edge-adjacent placement always exists")
}
