//! Problem instances, candidate layouts, and layout evaluation.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::geometry::{components, Cell, CellCluster, ColorId, Offset, Polyomino};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance has no pieces")]
    Empty,
    #[error("duplicate piece name {0:?}")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("layout has {found} offsets for {expected} pieces")]
    LengthMismatch { expected: usize, found: usize },
    #[error("pieces {first} and {second} disagree on the color of cell {cell}")]
    IncompatiblePair { first: usize, second: usize, cell: Cell },
    #[error("union of placed pieces has {components} components")]
    DisconnectedUnion { components: usize },
}

/// Named pieces to be covered by one superpolyomino.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pieces: Vec<(String, Polyomino)>,
    total_cells: usize,
}

impl Instance {
    pub fn new(pieces: Vec<(String, Polyomino)>) -> Result<Instance, InstanceError> {
        if pieces.is_empty() {
            return Err(InstanceError::Empty);
        }
        let mut names = HashSet::new();
        for (name, _) in &pieces {
            if !names.insert(name.as_str()) {
                return Err(InstanceError::DuplicateName(name.clone()));
            }
        }
        let total_cells = pieces.iter().map(|(_, p)| p.size()).sum();
        Ok(Instance { pieces, total_cells })
    }

    /// Names pieces `p0`, `p1`, ...
    pub fn from_polyominoes(polys: Vec<Polyomino>) -> Result<Instance, InstanceError> {
        Instance::new(
            polys
                .into_iter()
                .enumerate()
                .map(|(i, p)| (format!("p{i}"), p))
                .collect(),
        )
    }

    pub fn pieces(&self) -> &[(String, Polyomino)] {
        &self.pieces
    }

    pub fn piece(&self, i: usize) -> &Polyomino {
        &self.pieces[i].1
    }

    pub fn polyominoes(&self) -> impl Iterator<Item = &Polyomino> {
        self.pieces.iter().map(|(_, p)| p)
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Sum of piece sizes (the input size `n`).
    pub fn total_cells(&self) -> usize {
        self.total_cells
    }

    pub fn max_piece_size(&self) -> usize {
        self.polyominoes().map(Polyomino::size).max().unwrap_or(0)
    }

    pub fn max_dim(&self) -> i32 {
        self.polyominoes().map(Polyomino::max_dim).max().unwrap_or(0)
    }

    /// Sum over pieces of the larger bounding dimension. Any edge-adjacent
    /// chain of the pieces fits in this window around piece 0.
    pub fn default_window(&self) -> i32 {
        self.polyominoes().map(Polyomino::max_dim).sum()
    }

    /// The same pieces in a different order.
    pub fn permuted(&self, order: &[usize]) -> Instance {
        Instance::new(order.iter().map(|&i| self.pieces[i].clone()).collect())
            .expect("a permutation keeps names unique")
    }
}

/// One offset per instance piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layout(Vec<Offset>);

impl Layout {
    pub fn new(offsets: Vec<Offset>) -> Layout {
        Layout(offsets)
    }

    pub fn offsets(&self) -> &[Offset] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Translates every offset by the same amount.
    pub fn shifted(&self, by: Offset) -> Layout {
        Layout(self.0.iter().map(|o| *o + by).collect())
    }

    /// Re-anchors so the first piece sits at `(0, 0)`.
    pub fn anchored(&self) -> Layout {
        match self.0.first() {
            Some(first) => self.shifted(-*first),
            None => self.clone(),
        }
    }

    pub fn scaled(&self, factor: i32) -> Layout {
        Layout(
            self.0
                .iter()
                .map(|o| Offset::new(o.dx * factor, o.dy * factor))
                .collect(),
        )
    }
}

/// Union of all placed pieces. Checks compatibility but not connectivity.
pub fn layout_union(inst: &Instance, lay: &Layout) -> Result<CellCluster, LayoutError> {
    if lay.len() != inst.len() {
        return Err(LayoutError::LengthMismatch {
            expected: inst.len(),
            found: lay.len(),
        });
    }
    let mut owner: HashMap<Cell, (ColorId, usize)> = HashMap::with_capacity(inst.total_cells());
    for (i, (p, o)) in inst.polyominoes().zip(lay.offsets()).enumerate() {
        for (c, col) in p.cells() {
            let t = *c + *o;
            match owner.get(&t) {
                Some((other, j)) if *other != *col => {
                    return Err(LayoutError::IncompatiblePair {
                        first: *j,
                        second: i,
                        cell: t,
                    })
                }
                Some(_) => {}
                None => {
                    owner.insert(t, (*col, i));
                }
            }
        }
    }
    Ok(owner.into_iter().map(|(c, (col, _))| (c, col)).collect())
}

/// Size of the union of all placed pieces. The layout must be compatible and
/// its union 4-connected.
pub fn evaluate_layout(inst: &Instance, lay: &Layout) -> Result<usize, LayoutError> {
    let union = layout_union(inst, lay)?;
    let comps = components(union.iter().map(|(c, _)| c)).len();
    if comps != 1 {
        return Err(LayoutError::DisconnectedUnion { components: comps });
    }
    Ok(union.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{is_superpolyomino, normalize};

    fn unit(color: ColorId) -> Polyomino {
        Polyomino::rectangle(1, 1, color)
    }

    #[test]
    fn stacked_units() {
        let inst = Instance::from_polyominoes(vec![unit(ColorId::GRAY), unit(ColorId::GRAY)]).unwrap();
        let lay = Layout::new(vec![Offset::ZERO, Offset::ZERO]);
        assert_eq!(evaluate_layout(&inst, &lay), Ok(1));
    }

    #[test]
    fn disconnected_units() {
        let inst = Instance::from_polyominoes(vec![unit(ColorId::GRAY), unit(ColorId::GRAY)]).unwrap();
        let lay = Layout::new(vec![Offset::ZERO, Offset::new(3, 0)]);
        assert_eq!(
            evaluate_layout(&inst, &lay),
            Err(LayoutError::DisconnectedUnion { components: 2 })
        );
    }

    #[test]
    fn incompatible_pair_reports_indices() {
        let inst = Instance::from_polyominoes(vec![
            unit(ColorId::GRAY),
            Polyomino::rectangle(2, 1, ColorId::GRAY),
            unit(ColorId::RED),
        ])
        .unwrap();
        let lay = Layout::new(vec![Offset::ZERO, Offset::ZERO, Offset::new(1, 0)]);
        assert_eq!(
            evaluate_layout(&inst, &lay),
            Err(LayoutError::IncompatiblePair {
                first: 1,
                second: 2,
                cell: Cell::new(1, 0)
            })
        );
        assert!(matches!(
            evaluate_layout(&inst, &Layout::new(vec![Offset::ZERO])),
            Err(LayoutError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn union_contains_every_piece() {
        let inst = Instance::from_polyominoes(vec![
            Polyomino::rectangle(2, 1, ColorId::GRAY),
            Polyomino::rectangle(1, 3, ColorId::GRAY),
        ])
        .unwrap();
        let lay = Layout::new(vec![Offset::ZERO, Offset::new(1, -1)]);
        assert_eq!(evaluate_layout(&inst, &lay), Ok(4));
        let (sup, _) = normalize(&layout_union(&inst, &lay).unwrap()).unwrap();
        for p in inst.polyominoes() {
            assert!(!is_superpolyomino(&sup, p).is_empty());
        }
    }

    #[test]
    fn instance_invariants() {
        assert_eq!(Instance::new(vec![]), Err(InstanceError::Empty));
        let inst = Instance::from_polyominoes(vec![
            Polyomino::rectangle(2, 2, ColorId::GRAY),
            Polyomino::rectangle(3, 1, ColorId::GRAY),
        ])
        .unwrap();
        assert_eq!(inst.total_cells(), 7);
        assert_eq!(inst.default_window(), 5);
        assert_eq!(inst.permuted(&[1, 0]).piece(0).size(), 3);
    }
}
