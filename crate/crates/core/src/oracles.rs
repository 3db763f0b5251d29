//! Brute-force reference answers for the reductions.
//!
//! Chromatic number by plain backtracking, set cover by combination
//! enumeration, and closed-form gadget sizes. Nothing here calls into the
//! polyomino code.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::coloring::Graph;
use crate::setcover::SetCoverInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("input of size {size} exceeds the oracle limit {limit}")]
    TooLarge { size: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringWitness {
    pub classes: Vec<Vec<usize>>,
}

impl ColoringWitness {
    pub fn k(&self) -> usize {
        self.classes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverWitness {
    pub sets: BTreeSet<usize>,
}

impl CoverWitness {
    pub fn k(&self) -> usize {
        self.sets.len()
    }
}

pub const MAX_COLORING_VERTICES: usize = 10;
pub const MAX_COVER_SETS: usize = 20;

fn colorable(g: &Graph, k: usize, v: usize, used: usize, colors: &mut Vec<usize>) -> bool {
    if v == g.vertex_count() {
        return true;
    }
    // A vertex never needs a color beyond the next fresh one.
    for c in 0..k.min(used + 1) {
        if (0..v).all(|u| !(g.adjacent(u, v) && colors[u] == c)) {
            colors[v] = c;
            if colorable(g, k, v + 1, used.max(c + 1), colors) {
                return true;
            }
        }
    }
    false
}

/// Minimum proper coloring; among minimum colorings, the lexicographically
/// least color vector in vertex order.
pub fn chromatic_number(g: &Graph) -> Result<ColoringWitness, OracleError> {
    let n = g.vertex_count();
    if n > MAX_COLORING_VERTICES {
        return Err(OracleError::TooLarge {
            size: n,
            limit: MAX_COLORING_VERTICES,
        });
    }
    if n == 0 {
        return Ok(ColoringWitness { classes: Vec::new() });
    }
    for k in 1..=n {
        let mut colors = vec![usize::MAX; n];
        if colorable(g, k, 0, 0, &mut colors) {
            let mut classes = vec![Vec::new(); k];
            for (v, c) in colors.into_iter().enumerate() {
                classes[c].push(v);
            }
            classes.retain(|c| !c.is_empty());
            return Ok(ColoringWitness { classes });
        }
    }
    unreachable!("n colors always suffice")
}

/// Minimum-cardinality cover; among those, the lexicographically least
/// index combination.
pub fn min_set_cover(sc: &SetCoverInstance) -> Result<CoverWitness, OracleError> {
    let m = sc.set_count();
    if m > MAX_COVER_SETS {
        return Err(OracleError::TooLarge {
            size: m,
            limit: MAX_COVER_SETS,
        });
    }
    let masks: Vec<u128> = sc
        .sets()
        .iter()
        .map(|s| s.iter().fold(0u128, |acc, &e| acc | 1u128 << (e - 1)))
        .collect();
    let n = sc.universe_size();
    if n > 128 {
        return Err(OracleError::TooLarge { size: n, limit: 128 });
    }
    let full: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    // suffix[i] = union of masks[i..], for pruning hopeless branches.
    let mut suffix = vec![0u128; m + 1];
    for i in (0..m).rev() {
        suffix[i] = suffix[i + 1] | masks[i];
    }

    fn pick(
        masks: &[u128],
        suffix: &[u128],
        full: u128,
        from: usize,
        left: usize,
        covered: u128,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if covered == full {
            return true;
        }
        if left == 0 || covered | suffix[from] != full {
            return false;
        }
        for i in from..masks.len() {
            chosen.push(i);
            if pick(masks, suffix, full, i + 1, left - 1, covered | masks[i], chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    for k in 1..=m {
        let mut chosen = Vec::new();
        if pick(&masks, &suffix, full, 0, k, 0, &mut chosen) {
            return Ok(CoverWitness {
                sets: chosen.into_iter().map(|i| i + 1).collect(),
            });
        }
    }
    unreachable!("all sets together cover the universe")
}

/// `2 nv^2 - (nv - 1 - degree)`.
pub fn vertex_poly_size(nv: usize, degree: usize) -> usize {
    assert!(degree < nv, "degree {degree} must be below {nv}");
    2 * nv * nv - (nv - 1 - degree)
}

/// `n^2 + 5n + 1`.
pub fn element_poly_size(n: usize) -> usize {
    n * n + 5 * n + 1
}

/// `m(n^2 + 4n) + n Σ|S_j| + (m - 1)`.
pub fn set_poly_size(sc: &SetCoverInstance) -> usize {
    let (n, m) = (sc.universe_size(), sc.set_count());
    m * (n * n + 4 * n) + n * sc.incidence_count() + (m - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_proper(g: &Graph, w: &ColoringWitness) -> bool {
        let mut seen: Vec<usize> = w.classes.iter().flatten().copied().collect();
        seen.sort();
        seen == (0..g.vertex_count()).collect::<Vec<_>>() && w.classes.iter().all(|c| g.edge_within(c).is_none())
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&Graph::complete(3)).unwrap().k(), 3);
        for n in 1..=6 {
            assert_eq!(chromatic_number(&Graph::empty(n)).unwrap().k(), 1);
        }
        let c5 = chromatic_number(&Graph::cycle(5)).unwrap();
        assert_eq!(c5.k(), 3);
        assert!(is_proper(&Graph::cycle(5), &c5));
        assert_eq!(chromatic_number(&Graph::cycle(6)).unwrap().k(), 2);
        assert!(chromatic_number(&Graph::empty(11)).is_err());
    }

    #[test]
    fn chromatic_census_properties() {
        for n in 3..=5 {
            for g in Graph::census(n) {
                let w = chromatic_number(&g).unwrap();
                assert!(is_proper(&g, &w));
                assert!(w.k() <= g.max_degree() + 1);
            }
        }
    }

    #[test]
    fn cover_examples() {
        let fig = min_set_cover(&SetCoverInstance::worked_example()).unwrap();
        assert_eq!(fig.sets, BTreeSet::from([1, 3]));
        let one = SetCoverInstance::new(5, vec![vec![1, 2], (1..=5).collect()]).unwrap();
        assert_eq!(min_set_cover(&one).unwrap().sets, BTreeSet::from([2]));
        let singles = SetCoverInstance::new(4, (1..=4).map(|e| vec![e]).collect()).unwrap();
        assert_eq!(min_set_cover(&singles).unwrap().k(), 4);
    }

    #[test]
    fn cover_is_minimal_by_exhaustion() {
        // All set systems over n = 3 with m = 3 sets drawn from nonempty subsets.
        let subsets: Vec<Vec<usize>> = (1u8..8)
            .map(|mask| (1..=3).filter(|e| mask >> (e - 1) & 1 == 1).collect())
            .collect();
        for a in &subsets {
            for b in &subsets {
                for c in &subsets {
                    let Ok(sc) = SetCoverInstance::new(3, vec![a.clone(), b.clone(), c.clone()]) else {
                        continue;
                    };
                    let w = min_set_cover(&sc).unwrap();
                    assert!(sc.is_cover(&w.sets));
                    let best = (1u8..8)
                        .map(|pick| {
                            (1..=3)
                                .filter(|j| pick >> (j - 1) & 1 == 1)
                                .collect::<BTreeSet<usize>>()
                        })
                        .filter(|s| sc.is_cover(s))
                        .map(|s| s.len())
                        .min()
                        .unwrap();
                    assert_eq!(w.k(), best);
                }
            }
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(vertex_poly_size(3, 2), 18);
        assert_eq!(vertex_poly_size(3, 0), 16);
        for nv in 3..8 {
            assert_eq!(vertex_poly_size(nv, nv - 1), 2 * nv * nv);
        }
        assert_eq!(set_poly_size(&SetCoverInstance::worked_example()), 167);
        assert_eq!(element_poly_size(4), 37);
        assert_eq!(element_poly_size(2), 15);
    }
}
