use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::dilworth::flat_label;
use crate::error::{Error, Result};
use crate::matroid::Matroid;

/// Simple undirected graph with labeled vertices; edges are stored as `(low, high)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    pub labels: Vec<String>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(labels: Vec<String>) -> Self {
        Graph { labels, edges: BTreeSet::new() }
    }

    /// Adds `{a, b}`; returns `false` if it was already present.
    pub fn add_edge(&mut self, a: usize, b: usize) -> bool {
        assert!(a != b && a < self.labels.len() && b < self.labels.len(), "edge endpoints");
        self.edges.insert((a.min(b), a.max(b)))
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// The common degree when all vertices share one.
    pub fn regularity(&self) -> Option<usize> {
        let degrees: BTreeSet<usize> = (0..self.vertex_count()).map(|v| self.degree(v)).collect();
        (degrees.len() == 1).then(|| *degrees.iter().next().expect("one degree"))
    }

    /// Length of a shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let adjacency: Vec<Vec<usize>> = (0..self.vertex_count()).map(|v| self.neighbors(v)).collect();
        let mut best: Option<usize> = None;
        for root in 0..self.vertex_count() {
            let mut dist = vec![usize::MAX; self.vertex_count()];
            let mut parent = vec![usize::MAX; self.vertex_count()];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &w in &adjacency[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let cycle = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(cycle, |b| b.min(cycle)));
                    }
                }
            }
        }
        best
    }
}

/// Vertices are the rank-1 and rank-2 flats of a rank-3 matroid; edges are containments.
pub fn link_graph(m: &Matroid) -> Result<Graph> {
    if m.rank() != 3 {
        return Err(Error::Precondition(format!("link graphs need rank 3, got {}", m.rank())));
    }
    if m.loops() != 0 {
        return Err(Error::Precondition("link graphs need a loopless matroid".into()));
    }
    let lattice = m.flats();
    let points: Vec<u64> = lattice.of_rank(1).collect();
    let lines: Vec<u64> = lattice.of_rank(2).collect();
    let labels = points.iter().chain(&lines).map(|&f| flat_label(m, f)).collect();
    let mut g = Graph::new(labels);
    for (p, &pf) in points.iter().enumerate() {
        for (l, &lf) in lines.iter().enumerate() {
            if pf & lf == pf {
                g.add_edge(p, points.len() + l);
            }
        }
    }
    Ok(g)
}

/// Repeatedly replaces a degree-2 vertex and its two edges by an edge between its
/// neighbors; fails if that edge already exists.
pub fn smooth_degree2(g: &Graph) -> Result<Graph> {
    let mut alive = vec![true; g.vertex_count()];
    let mut edges = g.edges.clone();
    let neighbors = |edges: &BTreeSet<(usize, usize)>, v: usize| -> Vec<usize> {
        edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    };
    while let Some(v) = (0..g.vertex_count()).find(|&v| alive[v] && neighbors(&edges, v).len() == 2) {
        let nb = neighbors(&edges, v);
        let (a, b) = (nb[0].min(nb[1]), nb[0].max(nb[1]));
        if edges.contains(&(a, b)) {
            return Err(Error::MultiEdge(format!(
                "smoothing {} would double the edge {}–{}",
                g.labels[v], g.labels[a], g.labels[b]
            )));
        }
        edges.remove(&(a.min(v), a.max(v)));
        edges.remove(&(b.min(v), b.max(v)));
        edges.insert((a, b));
        alive[v] = false;
    }
    let index: Vec<Option<usize>> = alive
        .iter()
        .scan(0usize, |next, &keep| {
            Some(keep.then(|| {
                *next += 1;
                *next - 1
            }))
        })
        .collect();
    let mut out = Graph::new((0..g.vertex_count()).filter(|&v| alive[v]).map(|v| g.labels[v].clone()).collect());
    for (a, b) in edges {
        out.add_edge(index[a].expect("alive"), index[b].expect("alive"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilworth::tilde_dilworth_uniform;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::new((0..n).map(|v| v.to_string()).collect());
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    fn petersen() -> Graph {
        let outer: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let spokes: Vec<_> = (0..5).map(|i| (i, i + 5)).collect();
        let inner: Vec<_> = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5)).collect();
        graph(10, &[outer, spokes, inner].concat())
    }

    #[test]
    fn path_smooths_to_an_edge() {
        let s = smooth_degree2(&graph(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!((s.vertex_count(), s.edges.iter().copied().collect::<Vec<_>>()), (2, vec![(0, 1)]));
    }

    #[test]
    fn petersen_is_fixed() {
        let p = petersen();
        assert_eq!(smooth_degree2(&p).unwrap(), p);
        assert_eq!((p.regularity(), p.girth()), (Some(3), Some(5)));
    }

    #[test]
    fn triangle_smoothing_doubles_an_edge() {
        assert!(matches!(smooth_degree2(&graph(3, &[(0, 1), (1, 2), (0, 2)])), Err(Error::MultiEdge(_))));
    }

    #[test]
    fn link_of_line_matroid_is_petersen_after_smoothing() {
        let g = link_graph(&tilde_dilworth_uniform(4, 2).unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (13, 18));
        let s = smooth_degree2(&g).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count(), s.regularity(), s.girth()), (10, 15, Some(3), Some(5)));
    }

    #[test]
    fn link_of_u34() {
        let m = Matroid::uniform(3, (1..=4).map(|k| k.to_string()).collect()).unwrap();
        let g = link_graph(&m).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (10, 12));
        assert!(link_graph(&Matroid::uniform(2, vec!["a".into(), "b".into()]).unwrap()).is_err());
    }
}
