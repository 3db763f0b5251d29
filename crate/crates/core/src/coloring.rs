//! Graph coloring to smallest superpolyomino.
//!
//! Vertex `v` of `G = (V, E)` becomes a `2|V| x |V|` gray rectangle with four
//! distinctly colored corners. Row 1 carries one special cell per vertex at
//! `(2i + 1, 1)`: black for `v` itself, red for neighbors of `v`, and absent
//! otherwise. Two vertex pieces stack at the identity offset exactly when
//! the vertices are independent, so a stack ("deck") is an independent set
//! and `k` decks side by side realize a `k`-coloring.
//!
//! The two-color variant replaces every cell by an 8x8 macrocell whose three
//! diagonal bit cells spell the original color index.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use thiserror::Error;

use crate::geometry::{normalize, overlap_count, Cell, CellCluster, ColorId, GeometryError, Offset, Polyomino};
use crate::instance::{evaluate_layout, Instance, Layout, LayoutError};
use crate::solver::{SearchStats, SolveResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("graph has {0} vertices; the reduction needs at least 3")]
    GraphTooSmall(usize),
    #[error("graph has {0} vertices; exhaustive deck search allows at most {max}", max = MAX_DECK_VERTICES)]
    TooManyVertices(usize),
    #[error("not a partition of the vertices: {0}")]
    NotAPartition(String),
    #[error("part contains the edge ({0}, {1})")]
    PartNotIndependent(usize, usize),
    #[error("pieces of adjacent vertices {0} and {1} share an offset")]
    DeckNotIndependent(usize, usize),
    #[error("pieces of vertices {0} and {1} overlap without sharing an offset")]
    OffDeckOverlap(usize, usize),
    #[error("color index {0} does not fit in three bits")]
    PaletteTooLarge(u8),
    #[error("malformed macrocell at block ({bx}, {by}): {reason}")]
    MalformedMacrocell { bx: i32, by: i32, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Graph, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph { n, edges: set })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Every labeled graph on `n` vertices, by edge bitmask.
    pub fn census(n: usize) -> Vec<Graph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        (0u64..1 << pairs.len())
            .map(|mask| {
                Graph::new(
                    n,
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, e)| *e),
                )
                .unwrap()
            })
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// First edge inside `set`, if any.
    pub fn edge_within(&self, set: &[usize]) -> Option<(usize, usize)> {
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                if self.adjacent(u, v) {
                    return Some((u.min(v), u.max(v)));
                }
            }
        }
        None
    }
}

/// Pieces of the coloring reduction; piece `i` encodes vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringInstance {
    graph: Graph,
    instance: Instance,
    /// 1 for the plain reduction, 8 for the macrocell variant.
    scale: i32,
}

impl ColoringInstance {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn scale(&self) -> i32 {
        self.scale
    }

    pub fn is_two_color(&self) -> bool {
        self.scale == TwoColorCodec::SIDE
    }

    /// Horizontal distance between adjacent decks.
    pub fn deck_stride(&self) -> i32 {
        2 * self.graph.n as i32 * self.scale
    }
}

pub fn build_vertex_polyomino(g: &Graph, v: usize) -> Result<Polyomino, ColoringError> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(ColoringError::GraphTooSmall(n));
    }
    assert!(v < n, "vertex {v} out of range");
    let (w, h) = (2 * n as i32, n as i32);
    let mut cells = CellCluster::new();
    for y in 0..h {
        for x in 0..w {
            cells.insert(Cell::new(x, y), ColorId::GRAY);
        }
    }
    cells.insert(Cell::new(0, 0), ColorId::GREEN);
    cells.insert(Cell::new(w - 1, 0), ColorId::BLUE);
    cells.insert(Cell::new(0, h - 1), ColorId::PURPLE);
    cells.insert(Cell::new(w - 1, h - 1), ColorId::ORANGE);
    let cells: CellCluster = cells
        .iter()
        .filter_map(|(c, col)| {
            if c.y != 1 || c.x % 2 == 0 {
                return Some((c, col));
            }
            let i = (c.x as usize - 1) / 2;
            if i == v {
                Some((c, ColorId::BLACK))
            } else if g.adjacent(v, i) {
                Some((c, ColorId::RED))
            } else {
                None
            }
        })
        .collect();
    let (p, shift) = normalize(&cells)?;
    debug_assert_eq!(shift, Offset::ZERO);
    Ok(p)
}

pub fn build_instance(g: &Graph) -> Result<ColoringInstance, ColoringError> {
    let pieces = (0..g.vertex_count())
        .map(|v| Ok((format!("v{v}"), build_vertex_polyomino(g, v)?)))
        .collect::<Result<Vec<_>, ColoringError>>()?;
    Ok(ColoringInstance {
        graph: g.clone(),
        instance: Instance::new(pieces).expect("vertex names are unique"),
        scale: 1,
    })
}

/// The macrocell version of a plain coloring instance.
pub fn to_two_color_instance(ci: &ColoringInstance, codec: &TwoColorCodec) -> Result<ColoringInstance, ColoringError> {
    assert_eq!(ci.scale, 1, "instance is already two-color");
    let pieces = ci
        .instance
        .pieces()
        .iter()
        .map(|(name, p)| Ok((name.clone(), to_two_color(p, codec)?)))
        .collect::<Result<Vec<_>, ColoringError>>()?;
    Ok(ColoringInstance {
        graph: ci.graph.clone(),
        instance: Instance::new(pieces).expect("names unchanged"),
        scale: TwoColorCodec::SIDE,
    })
}

fn check_partition(n: usize, parts: &[Vec<usize>]) -> Result<(), ColoringError> {
    let mut seen = vec![false; n];
    for part in parts {
        if part.is_empty() {
            return Err(ColoringError::NotAPartition("empty part".into()));
        }
        for &v in part {
            if v >= n {
                return Err(ColoringError::NotAPartition(format!("vertex {v} out of range")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(ColoringError::NotAPartition(format!("vertex {v} repeated")));
            }
        }
    }
    match seen.iter().position(|s| !s) {
        Some(v) => Err(ColoringError::NotAPartition(format!("vertex {v} missing"))),
        None => Ok(()),
    }
}

/// Places every vertex of part `j` at `(j * stride, 0)`.
pub fn deck_layout(ci: &ColoringInstance, partition: &[Vec<usize>]) -> Result<Layout, ColoringError> {
    let n = ci.graph.vertex_count();
    check_partition(n, partition)?;
    let mut offsets = vec![Offset::ZERO; n];
    for (j, part) in partition.iter().enumerate() {
        if let Some((u, v)) = ci.graph.edge_within(part) {
            return Err(ColoringError::PartNotIndependent(u, v));
        }
        for &v in part {
            offsets[v] = Offset::new(j as i32 * ci.deck_stride(), 0);
        }
    }
    Ok(Layout::new(offsets))
}

pub const MAX_DECK_VERTICES: usize = 10;

/// Minimum deck-layout size over all partitions of `V` into independent sets.
///
/// Partitions are enumerated as restricted growth strings; the first
/// partition reaching the minimum is reported.
pub fn deck_solve(ci: &ColoringInstance) -> Result<SolveResult, ColoringError> {
    let start = Instant::now();
    let n = ci.graph.vertex_count();
    if n > MAX_DECK_VERTICES {
        return Err(ColoringError::TooManyVertices(n));
    }
    struct Search<'a> {
        ci: &'a ColoringInstance,
        parts: Vec<Vec<usize>>,
        best: Option<(usize, Layout)>,
        stats: SearchStats,
        start: Instant,
    }
    impl Search<'_> {
        fn go(&mut self, v: usize) -> Result<(), ColoringError> {
            if v == self.ci.graph.vertex_count() {
                self.stats.nodes += 1;
                let lay = deck_layout(self.ci, &self.parts)?;
                let size = evaluate_layout(self.ci.instance(), &lay)?;
                if self.best.as_ref().is_none_or(|(b, _)| size < *b) {
                    self.stats.incumbents.push((self.start.elapsed(), size));
                    self.best = Some((size, lay));
                }
                return Ok(());
            }
            for j in 0..=self.parts.len() {
                if j == self.parts.len() {
                    self.parts.push(vec![v]);
                    self.go(v + 1)?;
                    self.parts.pop();
                } else if self.parts[j].iter().all(|&u| !self.ci.graph.adjacent(u, v)) {
                    self.parts[j].push(v);
                    self.go(v + 1)?;
                    self.parts[j].pop();
                }
            }
            Ok(())
        }
    }
    let mut s = Search {
        ci,
        parts: Vec::new(),
        best: None,
        stats: SearchStats::default(),
        start,
    };
    s.go(0)?;
    let (size, layout) = s.best.expect("the singleton partition is always independent");
    let mut stats = s.stats;
    stats.elapsed = start.elapsed();
    Ok(SolveResult {
        layout,
        size,
        optimal: true,
        helper_cells: 0,
        stats,
    })
}

/// Groups vertices by identical offset; each group must be independent.
/// Groups are ordered by their smallest vertex.
pub fn extract_coloring(ci: &ColoringInstance, lay: &Layout) -> Result<Vec<Vec<usize>>, ColoringError> {
    let n = ci.graph.vertex_count();
    if lay.len() != n {
        return Err(LayoutError::LengthMismatch {
            expected: n,
            found: lay.len(),
        }
        .into());
    }
    let mut groups: BTreeMap<Offset, Vec<usize>> = BTreeMap::new();
    for (v, o) in lay.offsets().iter().enumerate() {
        groups.entry(*o).or_default().push(v);
    }
    let polys = ci.instance.pieces();
    let offs = lay.offsets();
    for u in 0..n {
        for v in u + 1..n {
            if offs[u] != offs[v] && overlap_count(&polys[u].1, &polys[v].1, offs[v] - offs[u]) > 0 {
                return Err(ColoringError::OffDeckOverlap(u, v));
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    for c in &classes {
        if let Some((u, v)) = ci.graph.edge_within(c) {
            return Err(ColoringError::DeckNotIndependent(u, v));
        }
    }
    Ok(classes)
}

/// Smallest `k` with `size <= 2 k nv^2`.
pub fn threshold_k(size: usize, nv: usize) -> usize {
    size.div_ceil(2 * nv * nv)
}

/// Smallest `k` with `size <= 128 k nv^2`, the macrocell analogue of [`threshold_k`].
pub fn threshold_k_two_color(size: usize, nv: usize) -> usize {
    size.div_ceil(128 * nv * nv)
}

/// 8x8 macrocell encoding of colors into gray and black.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoColorCodec {
    /// Bit cells, least significant first.
    pub bit_cells: [Cell; 3],
    pub boundary: ColorId,
    pub fill: ColorId,
    /// Color of a set bit; a clear bit uses `fill`.
    pub one: ColorId,
}

impl TwoColorCodec {
    pub const SIDE: i32 = 8;

    fn bit_of(&self, c: Cell) -> Option<usize> {
        self.bit_cells.iter().position(|b| *b == c)
    }

    fn macrocell(&self, color: ColorId) -> Result<Vec<(Cell, ColorId)>, ColoringError> {
        if color.0 >= 8 {
            return Err(ColoringError::PaletteTooLarge(color.0));
        }
        let s = Self::SIDE;
        let mut out = Vec::with_capacity((s * s) as usize);
        for y in 0..s {
            for x in 0..s {
                let c = Cell::new(x, y);
                let col = if x == 0 || y == 0 || x == s - 1 || y == s - 1 {
                    self.boundary
                } else if let Some(bit) = self.bit_of(c) {
                    if color.0 >> bit & 1 == 1 {
                        self.one
                    } else {
                        self.fill
                    }
                } else {
                    self.fill
                };
                out.push((c, col));
            }
        }
        Ok(out)
    }
}

impl Default for TwoColorCodec {
    fn default() -> Self {
        TwoColorCodec {
            bit_cells: [Cell::new(2, 2), Cell::new(3, 3), Cell::new(4, 4)],
            boundary: ColorId::BLACK,
            fill: ColorId::GRAY,
            one: ColorId::BLACK,
        }
    }
}

pub fn to_two_color(p: &Polyomino, codec: &TwoColorCodec) -> Result<Polyomino, ColoringError> {
    let s = TwoColorCodec::SIDE;
    let mut cells = Vec::with_capacity(p.size() * (s * s) as usize);
    for (c, col) in p.cells() {
        let block = Offset::new(c.x * s, c.y * s);
        cells.extend(codec.macrocell(*col)?.into_iter().map(|(m, mc)| (m + block, mc)));
    }
    Ok(Polyomino::from_cells(cells)?)
}

pub fn from_two_color(p: &Polyomino, codec: &TwoColorCodec) -> Result<Polyomino, ColoringError> {
    let s = TwoColorCodec::SIDE;
    if p.width() % s != 0 || p.height() % s != 0 {
        return Err(ColoringError::MalformedMacrocell {
            bx: p.width() / s,
            by: p.height() / s,
            reason: "bounding box is not a multiple of the macrocell side".into(),
        });
    }
    let mut out = Vec::new();
    for by in 0..p.height() / s {
        for bx in 0..p.width() / s {
            let origin = Offset::new(bx * s, by * s);
            let bad = |reason: String| ColoringError::MalformedMacrocell { bx, by, reason };
            let present = (0..s * s)
                .filter(|i| p.contains(Cell::new(i % s, i / s) + origin))
                .count();
            if present == 0 {
                continue;
            }
            if present != (s * s) as usize {
                return Err(bad(format!("{present} of {} cells present", s * s)));
            }
            let mut value = 0u8;
            for y in 0..s {
                for x in 0..s {
                    let local = Cell::new(x, y);
                    let col = p.color_at(local + origin).expect("checked present");
                    let on_boundary = x == 0 || y == 0 || x == s - 1 || y == s - 1;
                    if on_boundary {
                        if col != codec.boundary {
                            return Err(bad(format!("boundary cell {local} is not the boundary color")));
                        }
                    } else if let Some(bit) = codec.bit_of(local) {
                        if col == codec.one {
                            value |= 1 << bit;
                        } else if col != codec.fill {
                            return Err(bad(format!("bit cell {local} has an unexpected color")));
                        }
                    } else if col != codec.fill {
                        return Err(bad(format!("interior cell {local} is not the fill color")));
                    }
                }
            }
            out.push((Cell::new(bx, by), ColorId(value)));
        }
    }
    Ok(Polyomino::from_cells(out)?)
}
