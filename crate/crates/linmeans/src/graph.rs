//! Undirected binary networks and their random-walk transition matrices.
//!
//! A [`Graph`] stores one group's adjacency structure: symmetric, binary,
//! zero diagonal. [`row_normalize`] divides each row by its degree to obtain
//! the transition matrix `H` of a random walk on the network, and
//! [`leave_one_out`] builds the transition matrix `H_i` of the subnetwork in
//! which every link involving agent `i` has been removed. The leave-one-out
//! matrix is *not* obtained by zeroing row and column `i` of `H`: its row
//! sums are recomputed on the reduced network, so the remaining link weights
//! of agents that were connected to `i` are rescaled upward.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// One group's undirected binary network.
///
/// Invariants, enforced at construction: entries in {0,1}, symmetric, zero
/// diagonal. Stored as sorted neighbor lists; dense views are materialized
/// on demand (groups are small, tens of agents).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Build a graph from unordered agent pairs.
    ///
    /// Duplicate edges (including `(j, i)` after `(i, j)`) collapse to a
    /// single undirected link. Self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut neighbors = vec![Vec::new(); n];
        for &(i, j) in edges {
            if i == j {
                return Err(Error::SelfLoop { i, j });
            }
            for index in [i, j] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if !neighbors[i].contains(&j) {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Self { n, neighbors })
    }

    /// Number of agents.
    pub fn len(&self) -> usize {
        self.n
    }

    /// True when the group has no agents.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Degree of agent `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    /// Sorted neighbors of agent `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Whether agents `i` and `j` are linked.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].binary_search(&j).is_ok()
    }

    /// Total number of undirected links.
    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All links as `(i, j)` pairs with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for &j in &self.neighbors[i] {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Dense adjacency matrix `A`.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for &j in &self.neighbors[i] {
                a[(i, j)] = 1.0;
            }
        }
        a
    }

    /// True when every agent can reach every other agent.
    ///
    /// The empty graph on one agent is connected; on two or more agents any
    /// isolated agent makes the graph disconnected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &j in &self.neighbors[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == self.n
    }
}

/// A row-stochastic (or row-zero) walk matrix on a group.
///
/// Every row sums to exactly 1 or is identically zero; isolated agents keep
/// a zero row rather than being dropped, preserving index alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    weights: DMatrix<f64>,
}

impl TransitionMatrix {
    /// Number of agents.
    pub fn len(&self) -> usize {
        self.weights.nrows()
    }

    /// True when the group has no agents.
    pub fn is_empty(&self) -> bool {
        self.weights.nrows() == 0
    }

    /// Dense weight matrix.
    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Matrix–vector product `H v`.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.weights * v
    }
}

/// Row-normalize the adjacency matrix into the walk transition matrix `H`.
///
/// `(H)_{i,j} = (A)_{i,j} / deg(i)` when agent `i` has at least one link;
/// isolated agents get a zero row.
pub fn row_normalize(g: &Graph) -> TransitionMatrix {
    let n = g.len();
    let mut weights = DMatrix::zeros(n, n);
    for i in 0..n {
        let deg = g.degree(i);
        if deg > 0 {
            let w = 1.0 / deg as f64;
            for &j in g.neighbors(i) {
                weights[(i, j)] = w;
            }
        }
    }
    TransitionMatrix { weights }
}

/// Transition matrix `H_i` of the subnetwork that excludes agent `i`.
///
/// Links involving `i` are removed and the remaining rows are re-normalized
/// by their degree *within the subnetwork*. Row `i` and column `i` are
/// identically zero; agents isolated in the subnetwork get a zero row.
pub fn leave_one_out(g: &Graph, i: usize) -> Result<TransitionMatrix> {
    let n = g.len();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let mut weights = DMatrix::zeros(n, n);
    for row in 0..n {
        if row == i {
            continue;
        }
        let deg = leave_out_degree(g, row, i);
        if deg == 0 {
            continue;
        }
        let w = 1.0 / deg as f64;
        for &j in g.neighbors(row) {
            if j != i {
                weights[(row, j)] = w;
            }
        }
    }
    Ok(TransitionMatrix { weights })
}

/// Degree of `row` in the subnetwork that excludes `excluded`.
pub(crate) fn leave_out_degree(g: &Graph, row: usize, excluded: usize) -> usize {
    let deg = g.degree(row);
    if g.has_edge(row, excluded) {
        deg - 1
    } else {
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn builds_path_graph() {
        let g = path3();
        let a = g.adjacency_matrix();
        assert_eq!(a.row(0).iter().copied().collect::<Vec<_>>(), [0.0, 1.0, 0.0]);
        assert_eq!(a.row(1).iter().copied().collect::<Vec<_>>(), [1.0, 0.0, 1.0]);
        assert_eq!(a.row(2).iter().copied().collect::<Vec<_>>(), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn empty_edge_list_gives_zero_matrix() {
        let g = Graph::from_edges(3, &[]).unwrap();
        assert_eq!(g.adjacency_matrix(), DMatrix::zeros(3, 3));
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn duplicate_and_reversed_edges_collapse() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn rejects_self_loop() {
        assert!(matches!(
            Graph::from_edges(3, &[(1, 1)]),
            Err(Error::SelfLoop { i: 1, j: 1 })
        ));
    }

    #[test]
    fn rejects_out_of_range_edge() {
        assert!(matches!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        ));
    }

    #[test]
    fn row_normalize_path() {
        let h = row_normalize(&path3());
        let m = h.as_matrix();
        assert_eq!(m.row(1).iter().copied().collect::<Vec<_>>(), [0.5, 0.0, 0.5]);
        assert_eq!(m[(0, 1)], 1.0);
        assert_eq!(m[(2, 1)], 1.0);
    }

    #[test]
    fn row_normalize_empty_network() {
        let g = Graph::from_edges(3, &[]).unwrap();
        assert_eq!(*row_normalize(&g).as_matrix(), DMatrix::zeros(3, 3));
    }

    #[test]
    fn row_normalize_complete_four() {
        let edges: Vec<_> = (0..4)
            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
            .collect();
        let g = Graph::from_edges(4, &edges).unwrap();
        let m = row_normalize(&g);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0.0 } else { 1.0 / 3.0 };
                assert!((m.as_matrix()[(i, j)] - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn leave_one_out_path_endpoint() {
        // Removing agent 0 leaves the single link (1, 2).
        let h0 = leave_one_out(&path3(), 0).unwrap();
        let m = h0.as_matrix();
        assert_eq!(m.row(1).iter().copied().collect::<Vec<_>>(), [0.0, 0.0, 1.0]);
        assert_eq!(m.row(2).iter().copied().collect::<Vec<_>>(), [0.0, 1.0, 0.0]);
        assert!(m.row(0).iter().all(|&v| v == 0.0));
        assert!(m.column(0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn leave_one_out_path_center_is_zero() {
        // Removing the center of the path isolates both endpoints.
        let h1 = leave_one_out(&path3(), 1).unwrap();
        assert_eq!(*h1.as_matrix(), DMatrix::zeros(3, 3));
    }

    #[test]
    fn leave_one_out_complete_three() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let h2 = leave_one_out(&g, 2).unwrap();
        let m = h2.as_matrix();
        assert_eq!(m.row(0).iter().copied().collect::<Vec<_>>(), [0.0, 1.0, 0.0]);
        assert_eq!(m.row(1).iter().copied().collect::<Vec<_>>(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn leave_one_out_rejects_bad_index() {
        assert!(leave_one_out(&path3(), 3).is_err());
    }

    #[test]
    fn leave_one_out_differs_from_zeroing_h() {
        // On the triangle, zeroing row/column 2 of H leaves rows summing to
        // 1/2; the true H_2 rescales them back to 1.
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let h = row_normalize(&g);
        let h2 = leave_one_out(&g, 2).unwrap();
        assert_eq!(h.as_matrix()[(0, 1)], 0.5);
        assert_eq!(h2.as_matrix()[(0, 1)], 1.0);
    }

    #[test]
    fn connectivity() {
        assert!(path3().is_connected());
        assert!(!Graph::from_edges(3, &[(0, 1)]).unwrap().is_connected());
        assert!(Graph::from_edges(1, &[]).unwrap().is_connected());
    }
}
