//! Minimum number of helper cells needed to join a disconnected union.
//!
//! Each component of the union is a terminal. Union cells cost nothing to
//! traverse and every empty cell costs one. The minimum node-weighted Steiner
//! tree is found with the Dreyfus-Wagner recurrence on the bounding box of
//! the union grown by one cell; a rectilinear Steiner tree never needs to
//! leave the bounding box of its terminals.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::geometry::{components, Cell};

pub fn steiner_helper_count<I: IntoIterator<Item = Cell>>(cells: I) -> usize {
    let comps = components(cells);
    if comps.len() <= 1 {
        return 0;
    }
    let all = comps.iter().flatten();
    let x0 = all.clone().map(|c| c.x).min().unwrap() - 1;
    let x1 = all.clone().map(|c| c.x).max().unwrap() + 1;
    let y0 = all.clone().map(|c| c.y).min().unwrap() - 1;
    let y1 = all.map(|c| c.y).max().unwrap() + 1;
    let w = (x1 - x0 + 1) as usize;
    let h = (y1 - y0 + 1) as usize;
    let idx = |c: Cell| (c.y - y0) as usize * w + (c.x - x0) as usize;

    let mut weight = vec![1u32; w * h];
    let mut terminal_cells: Vec<Vec<usize>> = Vec::with_capacity(comps.len());
    for comp in &comps {
        let ids: Vec<usize> = comp.iter().map(|c| idx(*c)).collect();
        for &i in &ids {
            weight[i] = 0;
        }
        terminal_cells.push(ids);
    }
    let neighbors = |v: usize| {
        let (x, y) = (v % w, v / w);
        let mut out = [usize::MAX; 4];
        if x > 0 {
            out[0] = v - 1;
        }
        if x + 1 < w {
            out[1] = v + 1;
        }
        if y > 0 {
            out[2] = v - w;
        }
        if y + 1 < h {
            out[3] = v + w;
        }
        out
    };
    let relax = |dist: &mut Vec<u32>| {
        let mut heap: BinaryHeap<Reverse<(u32, usize)>> = dist
            .iter()
            .enumerate()
            .filter(|(_, d)| **d < u32::MAX)
            .map(|(v, d)| Reverse((*d, v)))
            .collect();
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for u in neighbors(v) {
                if u == usize::MAX {
                    continue;
                }
                let nd = d + weight[u];
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(Reverse((nd, u)));
                }
            }
        }
    };

    let k = comps.len();
    let full = (1usize << k) - 1;
    let mut dp: Vec<Vec<u32>> = vec![Vec::new(); full + 1];
    for (t, cells) in terminal_cells.iter().enumerate() {
        let mut dist = vec![u32::MAX; w * h];
        for &i in cells {
            dist[i] = 0;
        }
        relax(&mut dist);
        dp[1 << t] = dist;
    }
    for set in 1..=full {
        if set.count_ones() < 2 {
            continue;
        }
        let mut dist = vec![u32::MAX; w * h];
        let low = set & set.wrapping_neg();
        let rest = set ^ low;
        // Enumerate splits whose first half contains the lowest terminal.
        let mut sub = rest;
        loop {
            let a = low | sub;
            let b = set ^ a;
            if b != 0 {
                for v in 0..w * h {
                    let (da, db) = (dp[a][v], dp[b][v]);
                    if da < u32::MAX && db < u32::MAX {
                        dist[v] = dist[v].min(da + db - weight[v]);
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        relax(&mut dist);
        dp[set] = dist;
    }
    dp[full].iter().copied().min().unwrap() as usize
}
