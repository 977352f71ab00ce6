use std::collections::VecDeque;

use super::{Hypergraph, Indexed, Vertex};
use crate::{Error, Result};

fn bfs(g: &Indexed, from: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.n()];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for &j in &g.incidence[v] {
            for &u in &g.edges[j as usize] {
                let u = u as usize;
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
    }
    dist
}

/// Length of the shortest edge chain from `x` to `y`; `None` when they lie in
/// different components.
pub fn distance(g: &Hypergraph, x: Vertex, y: Vertex) -> Result<Option<u32>> {
    for v in [x, y] {
        if !g.contains_vertex(v) {
            return Err(Error::Domain(format!("vertex {v} not in hypergraph")));
        }
    }
    let ix = Indexed::new(g);
    Ok(bfs(&ix, ix.index[&x])[ix.index[&y]])
}

/// All-pairs distances; rows and columns follow ascending vertex labels.
pub fn distance_matrix(g: &Hypergraph) -> (Vec<Vertex>, Vec<Vec<Option<u32>>>) {
    let ix = Indexed::new(g);
    let rows = (0..ix.n()).map(|v| bfs(&ix, v)).collect();
    (ix.labels.clone(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_distances() {
        let h1 = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 1]], [9]).unwrap();
        assert_eq!(distance(&h1, 2, 2).unwrap(), Some(0));
        assert_eq!(distance(&h1, 1, 2).unwrap(), Some(1));
        assert_eq!(distance(&h1, 2, 4).unwrap(), Some(2));
        assert_eq!(distance(&h1, 2, 9).unwrap(), None);
        assert!(distance(&h1, 2, 5).is_err());
        let path = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5], [5, 6, 7]], []).unwrap();
        assert_eq!(distance(&path, 1, 7).unwrap(), Some(3));
        let (labels, m) = distance_matrix(&path);
        assert_eq!(labels, (1..=7).collect::<Vec<_>>());
        assert_eq!(m[0][6], Some(3));
        assert_eq!(m[3][1], Some(2));
    }
}
