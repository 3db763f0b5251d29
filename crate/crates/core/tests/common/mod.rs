//! Random generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use superpoly::coloring::Graph;
use superpoly::geometry::{normalize, Cell, CellCluster, ColorId, Offset, Polyomino};
use superpoly::instance::Instance;
use superpoly::setcover::SetCoverInstance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Grows a connected polyomino from the origin. Each step picks a frontier
/// cell by `pick % frontier.len()` and colors it `color % colors`.
pub fn grow(steps: &[(usize, u8)], colors: u8) -> Polyomino {
    let mut cluster = CellCluster::new();
    let mut taken = BTreeSet::from([Cell::new(0, 0)]);
    cluster.insert(Cell::new(0, 0), ColorId(steps.first().map_or(0, |s| s.1 % colors)));
    for &(pick, color) in steps.iter().skip(1) {
        let frontier: Vec<Cell> = taken
            .iter()
            .flat_map(|c| c.neighbors())
            .filter(|n| !taken.contains(n))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let c = frontier[pick % frontier.len()];
        taken.insert(c);
        cluster.insert(c, ColorId(color % colors));
    }
    normalize(&cluster).unwrap().0
}

/// Connected subshape of `p` grown from one of its cells, with the offset
/// at which it sits inside `p`.
pub fn grow_inside(p: &Polyomino, start: usize, steps: &[usize]) -> (Polyomino, Offset) {
    let cells = p.cells();
    let seed = cells[start % cells.len()].0;
    let mut taken = BTreeSet::from([seed]);
    for &pick in steps {
        let frontier: Vec<Cell> = taken
            .iter()
            .flat_map(|c| c.neighbors())
            .filter(|n| p.contains(*n) && !taken.contains(n))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if frontier.is_empty() {
            break;
        }
        taken.insert(frontier[pick % frontier.len()]);
    }
    let cluster: CellCluster = taken.iter().map(|c| (*c, p.color_at(*c).unwrap())).collect();
    let (sub, shift) = normalize(&cluster).unwrap();
    (sub, -shift)
}

pub fn poly_strategy(max_cells: usize, colors: u8) -> impl Strategy<Value = Polyomino> {
    prop::collection::vec((0usize..64, 0u8..colors), 1..=max_cells).prop_map(move |s| grow(&s, colors))
}

pub fn random_poly(r: &mut ChaCha8Rng, max_cells: usize, colors: u8) -> Polyomino {
    let n = r.gen_range(1..=max_cells);
    let steps: Vec<(usize, u8)> = (0..n).map(|_| (r.gen_range(0..64), r.gen_range(0..colors))).collect();
    grow(&steps, colors)
}

/// Up to `max_pieces` pieces whose sizes sum to at most `max_cells`.
pub fn random_instance(r: &mut ChaCha8Rng, max_pieces: usize, max_cells: usize, colors: u8) -> Instance {
    let k = r.gen_range(1..=max_pieces);
    let mut budget = max_cells;
    let mut polys = Vec::new();
    for i in 0..k {
        let room = budget - (k - 1 - i);
        let p = random_poly(r, room.max(1), colors);
        budget -= p.size();
        polys.push(p);
    }
    Instance::from_polyominoes(polys).unwrap()
}

pub fn row(colors: &[u8]) -> Polyomino {
    Polyomino::from_cells(
        colors
            .iter()
            .enumerate()
            .map(|(x, c)| (Cell::new(x as i32, 0), ColorId(*c))),
    )
    .unwrap()
}

pub fn random_graph(r: &mut ChaCha8Rng, n: usize) -> Graph {
    let p: f64 = r.gen_range(0.2..0.8);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| r.gen_bool(p))
        .collect();
    Graph::new(n, edges).unwrap()
}

/// A valid set system with `n` elements and `m` sets: every element lands
/// in at least one set and no set is empty.
pub fn random_setcover(r: &mut ChaCha8Rng, n: usize, m: usize) -> SetCoverInstance {
    loop {
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
        for e in 1..=n {
            let home = r.gen_range(0..m);
            sets[home].insert(e);
            for s in sets.iter_mut() {
                if r.gen_bool(0.3) {
                    s.insert(e);
                }
            }
        }
        sets.shuffle(r);
        let sets: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        if let Ok(sc) = SetCoverInstance::new(n, sets) {
            return sc;
        }
    }
}
