//! Commutator closure of a seed observable and its evolution generator.
//!
//! Writing the Heisenberg-picture observable as `sum_j gamma_j(t) P_j` over the
//! closure nodes `P_j`, the equation of motion `dO/dt = i [H, O]` becomes the
//! linear system `d gamma / dt = A gamma` with a real generator `A`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

pub const DEFAULT_MAX_NODES: usize = 4096;

/// Largest tolerated real part of a raw commutator coefficient (it must be purely imaginary).
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-12;

/// Directed commutator edge: `[H, nodes[from]]` contains `2i * weight * nodes[to]`.
///
/// `weight` follows the pictorial convention where the common `2i` is dropped;
/// the contributing Hamiltonian string is kept for symbolic labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
    pub term: PauliString,
}

#[derive(Clone, Debug)]
pub struct ClosureGraph {
    nodes: Vec<PauliString>,
    index: BTreeMap<PauliString, usize>,
    edges: Vec<Edge>,
    hamiltonian: PauliSum,
}

impl ClosureGraph {
    pub fn nodes(&self) -> &[PauliString] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn seed(&self) -> &PauliString {
        &self.nodes[0]
    }

    pub fn seed_index(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &PauliString) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Edges ordered by `(from, to)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn num_qubits(&self) -> usize {
        self.hamiltonian.num_qubits()
    }

    /// Number of distinct neighbours of each node (edge direction ignored).
    pub fn degrees(&self) -> Vec<usize> {
        let mut nb = vec![std::collections::BTreeSet::new(); self.nodes.len()];
        for e in &self.edges {
            nb[e.from].insert(e.to);
            nb[e.to].insert(e.from);
        }
        nb.iter().map(|s| s.len()).collect()
    }

    /// True when the graph is a simple path through all nodes.
    pub fn is_path(&self) -> bool {
        let n = self.nodes.len();
        if n == 1 {
            return self.edges.is_empty();
        }
        let deg = self.degrees();
        let ends = deg.iter().filter(|&&d| d == 1).count();
        let inner = deg.iter().filter(|&&d| d == 2).count();
        let undirected: std::collections::BTreeSet<_> =
            self.edges.iter().map(|e| (e.from.min(e.to), e.from.max(e.to))).collect();
        ends == 2 && inner == n - 2 && undirected.len() == n - 1
    }

    /// Re-checks closure: every commutator with `H` stays inside the node set.
    pub fn is_closed(&self) -> Result<bool> {
        for p in &self.nodes {
            for q in self.hamiltonian.commutator_with(p)?.keys() {
                if !self.index.contains_key(q) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Breadth-first closure of `seed` under commutation with `h`.
///
/// Children of a node are visited in lexicographic order of the resulting
/// string, so node indices are reproducible. Node 0 is the seed.
pub fn build_closure(h: &PauliSum, seed: &PauliString, max_nodes: usize) -> Result<ClosureGraph> {
    if seed.num_qubits() != h.num_qubits() {
        return Err(Error::DimensionMismatch { left: h.num_qubits(), right: seed.num_qubits() });
    }
    if max_nodes == 0 {
        return Err(Error::ClosureOverflow { max_nodes });
    }
    let mut nodes = vec![seed.clone()];
    let mut index = BTreeMap::from([(seed.clone(), 0usize)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(k) = queue.pop_front() {
        let node = nodes[k].clone();
        // Distinct Hamiltonian strings give distinct products, so each child has one source term.
        let mut children = BTreeMap::new();
        for (term, w) in h.iter() {
            if let Some(c) = term.commutator(&node)? {
                let coeff = c.coefficient() * w;
                children.insert(c.phased.string, (coeff, term.clone()));
            }
        }
        for (child, (coeff, term)) in children {
            if coeff.re.abs() > IMAGINARY_RESIDUE_TOL {
                return Err(Error::ImaginaryResidue {
                    from: node.to_string(),
                    to: child.to_string(),
                    residue: coeff.re.abs(),
                });
            }
            if coeff.im == 0.0 {
                continue;
            }
            let to = match index.get(&child) {
                Some(&j) => j,
                None => {
                    if nodes.len() >= max_nodes {
                        return Err(Error::ClosureOverflow { max_nodes });
                    }
                    let j = nodes.len();
                    nodes.push(child.clone());
                    index.insert(child, j);
                    queue.push_back(j);
                    j
                }
            };
            edges.push(Edge { from: k, to, weight: coeff.im / 2.0, term });
        }
    }
    edges.sort_by_key(|e| (e.from, e.to));
    Ok(ClosureGraph { nodes, index, edges, hamiltonian: h.clone() })
}

/// Real generator `A` with `d gamma_j / dt = sum_k A[j][k] gamma_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMatrix {
    matrix: DMatrix<f64>,
}

impl GeneratorMatrix {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        assert!(matrix.is_square(), "generator must be square");
        GeneratorMatrix { matrix }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.matrix[(row, col)]
    }

    /// `max |A + A^T|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        (&self.matrix + self.matrix.transpose()).amax()
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        self.antisymmetry_defect() <= tol
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        self.matrix.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }
}

/// Generator of the closure: `A[to][from] = i * c = -2 * weight` for each edge.
pub fn generator_matrix(g: &ClosureGraph) -> GeneratorMatrix {
    let n = g.len();
    let mut a = DMatrix::zeros(n, n);
    for e in &g.edges {
        a[(e.to, e.from)] += -2.0 * e.weight;
    }
    GeneratorMatrix { matrix: a }
}

/// Graphviz rendering of the closure in the pictorial convention.
///
/// Each commuting pair is drawn once, pointing away from the node whose commutator
/// carries the `+` sign. Edges are labelled with the symbol of the contributing
/// Hamiltonian term when `symbols` names it, otherwise with the numeric magnitude.
pub fn export_dot(g: &ClosureGraph, symbols: Option<&BTreeMap<PauliString, String>>) -> String {
    let mut out = String::from("digraph closure {\n    rankdir=LR;\n");
    for (k, p) in g.nodes.iter().enumerate() {
        let _ = writeln!(out, "    n{k} [label=\"{p}\"];");
    }
    for e in g.edges.iter().filter(|e| e.weight > 0.0) {
        let label = symbols.and_then(|s| s.get(&e.term)).cloned().unwrap_or_else(|| format!("{}", e.weight));
        let _ = writeln!(out, "    n{} -> n{} [label=\"{label}\"];", e.from, e.to);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_heisenberg_chain, build_xx_chain, christandl_couplings, ChainSpec};

    fn ps(s: &str, n: usize) -> PauliString {
        PauliString::parse(s, n).unwrap()
    }

    fn xx5() -> PauliSum {
        build_xx_chain(5, &[1.0, 2.0, 3.0, 4.0]).unwrap()
    }

    #[test]
    fn five_site_xx_closure_is_the_expected_path() {
        let g = build_closure(&xx5(), &ps("X5", 5), DEFAULT_MAX_NODES).unwrap();
        let names: Vec<_> = g.nodes().iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["X5", "Y4 Z5", "X3 Z4 Z5", "Y2 Z3 Z4 Z5", "X1 Z2 Z3 Z4 Z5"]);
        assert!(g.is_path());
        assert!(g.is_closed().unwrap());
    }

    #[test]
    fn three_site_xx_closure() {
        let h = build_xx_chain(3, &[1.0, 1.0]).unwrap();
        let g = build_closure(&h, &ps("X3", 3), 16).unwrap();
        let names: Vec<_> = g.nodes().iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["X3", "Y2 Z3", "X1 Z2 Z3"]);
    }

    #[test]
    fn identity_seed_is_a_single_node() {
        let g = build_closure(&xx5(), &PauliString::identity(5), 8).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.edges().is_empty());
        assert!(g.is_path());
        assert_eq!(generator_matrix(&g).matrix(), &DMatrix::zeros(1, 1));
    }

    #[test]
    fn commuting_seed_is_a_single_node() {
        let h = build_heisenberg_chain(3, &[1.0, 1.0]).unwrap();
        // total-Z conservation: Z1 alone does not commute, but the chain's symmetry string Z1 Z2 Z3 does
        let g = build_closure(&h, &ps("Z1 Z2 Z3", 3), 8).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn overflow_is_reported() {
        let err = build_closure(&xx5(), &ps("X5", 5), 4).unwrap_err();
        assert!(matches!(err, Error::ClosureOverflow { max_nodes: 4 }));
        assert!(build_closure(&xx5(), &ps("X5", 5), 5).is_ok());
        assert!(build_closure(&xx5(), &ps("X4", 4), 5).is_err());
    }

    #[test]
    fn zero_couplings_disconnect() {
        let h = build_xx_chain(5, &[1.0, 0.0, 1.0, 1.0]).unwrap();
        let g = build_closure(&h, &ps("X5", 5), 64).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.nodes().iter().all(|p| p.site_letter(1).unwrap() == crate::Letter::I));
    }

    #[test]
    fn generator_rows_follow_the_recurrences() {
        let g = build_closure(&xx5(), &ps("X5", 5), 64).unwrap();
        let a = generator_matrix(&g);
        // node 0 = X5 couples only to node 1 = Y4 Z5, magnitude 2 J4
        let row: Vec<f64> = (0..5).map(|k| a.get(0, k)).collect();
        assert_eq!(row, [0.0, -8.0, 0.0, 0.0, 0.0]);
        assert_eq!(a.get(1, 0), 8.0);
        assert_eq!(a.get(1, 2), 6.0);
        assert!(a.is_antisymmetric(0.0));
    }

    #[test]
    fn three_site_generator_spectrum() {
        let j = 0.9;
        let h = build_xx_chain(3, &[j, j]).unwrap();
        let g = build_closure(&h, &ps("X3", 3), 16).unwrap();
        let a = generator_matrix(&g);
        // spectrum of A is i times the spectrum of the Hermitian matrix -iA
        let herm = a.matrix().map(|v| num_complex::Complex64::new(0.0, -v));
        let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let w = 2.0 * 2f64.sqrt() * j;
        for (got, want) in ev.iter().zip([-w, 0.0, w]) {
            assert!((got - want).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn dot_export_matches_the_pictorial_graph() {
        let spec = ChainSpec::xx(5, christandl_couplings(5, 1.0).unwrap());
        let h = crate::chain::build_generic(&spec).unwrap();
        let g = build_closure(&h, &ps("X5", 5), 64).unwrap();
        let sym = spec.term_symbols();
        let dot = export_dot(&g, Some(&sym));
        assert_eq!(dot.matches("->").count(), 4);
        assert_eq!(dot.matches("[label=").count(), 9);
        // [H, Y4 Z5] carries +2i J4 X5: edge points from Y4 Z5 to X5
        assert!(dot.contains("n1 -> n0 [label=\"J4\"]"), "{dot}");
        assert!(dot.contains("n1 -> n2 [label=\"J3\"]"), "{dot}");
        assert_eq!(dot, export_dot(&g, Some(&sym)));
        let numeric = export_dot(&g, None);
        assert!(numeric.contains("n1 -> n0 [label=\"2\"]"), "{numeric}");

        let single = build_closure(&h, &PauliString::identity(5), 4).unwrap();
        let dot = export_dot(&single, None);
        assert_eq!(dot, "digraph closure {\n    rankdir=LR;\n    n0 [label=\"I\"];\n}\n");
    }

    #[test]
    fn heisenberg_three_site_closure() {
        let h = build_heisenberg_chain(3, &[1.0, 1.0]).unwrap();
        let g = build_closure(&h, &ps("X3", 3), 4096).unwrap();
        assert!(g.is_closed().unwrap());
        assert!(generator_matrix(&g).is_antisymmetric(0.0));
        let with_x1: Vec<_> =
            g.nodes().iter().filter(|p| p.site_letter(1).unwrap() == crate::Letter::X).map(|p| p.to_string()).collect();
        assert!(with_x1.contains(&"X1".to_string()) && with_x1.contains(&"X1 Z2 Z3".to_string()), "{with_x1:?}");
    }
}
