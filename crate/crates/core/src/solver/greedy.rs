use std::time::Instant;

use crate::geometry::{max_overlap, normalize, superimpose, Offset, Polyomino};
use crate::instance::{Instance, Layout};

use super::{SearchStats, SolveError, SolveResult};

struct Cluster {
    shape: Polyomino,
    /// Original piece index and its offset in `shape`'s frame.
    members: Vec<(usize, Offset)>,
}

/// Repeatedly merges the pair of clusters with the largest compatible,
/// connected overlap until one remains. Ties go to the smallest index pair.
pub fn solve_greedy(inst: &Instance) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    if inst.is_empty() {
        return Err(SolveError::EmptyInstance);
    }
    let mut clusters: Vec<Cluster> = inst
        .polyominoes()
        .enumerate()
        .map(|(i, p)| Cluster {
            shape: p.clone(),
            members: vec![(i, Offset::ZERO)],
        })
        .collect();
    let mut nodes = 0u64;
    while clusters.len() > 1 {
        let mut best: Option<(usize, usize, Offset, usize)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                nodes += 1;
                let (o, shared) = max_overlap(&clusters[i].shape, &clusters[j].shape);
                if best.is_none_or(|(.., b)| shared > b) {
                    best = Some((i, j, o, shared));
                }
            }
        }
        let (i, j, o, _) = best.expect("at least two clusters");
        let union = superimpose(&clusters[i].shape, &clusters[j].shape, o)
            .expect("max_overlap only returns compatible offsets");
        let (shape, shift) = normalize(&union).expect("max_overlap only returns connected unions");
        let right = clusters.remove(j);
        let left = &mut clusters[i];
        let mut members: Vec<(usize, Offset)> = left.members.iter().map(|&(p, off)| (p, off + shift)).collect();
        members.extend(right.members.iter().map(|&(p, off)| (p, off + o + shift)));
        *left = Cluster { shape, members };
    }
    let root = clusters.pop().expect("one cluster remains");
    let mut offsets = vec![Offset::ZERO; inst.len()];
    for (p, off) in root.members {
        offsets[p] = off;
    }
    let size = root.shape.size();
    Ok(SolveResult {
        layout: Layout::new(offsets).anchored(),
        size,
        // The largest piece is a lower bound on any superpolyomino.
        optimal: size == inst.max_piece_size(),
        helper_cells: 0,
        stats: SearchStats {
            nodes,
            elapsed: start.elapsed(),
            incumbents: vec![(start.elapsed(), size)],
            timed_out: false,
        },
    })
}
