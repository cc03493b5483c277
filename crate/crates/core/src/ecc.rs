//! Systematic Reed-Solomon codes on bit vectors and the coded adjacency
//! matrix `C(G)`.
//!
//! A message `x` of length `n` is the list of values at `1..=n` of the unique
//! polynomial of degree below `n` over `F_q`; the codeword appends its values at
//! `n+1..=n+k`. Two distinct messages therefore differ in more than `k`
//! codeword positions.

use alloc::vec::Vec;

use crate::field::{FieldError, PrimeField};
use crate::graphs::{GraphClass, GraphError, LabeledGraph};
use crate::matrix::SquareMatrix;

/// Code with message length `n`, redundancy `k`, over `F_q` with `q` the least
/// prime above `n + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParams {
    n: usize,
    k: usize,
    q: PrimeField,
    // weights[j * n + i] = L_i(n + 1 + j), the Lagrange basis polynomial of
    // node i + 1 evaluated at the j-th redundancy point.
    weights: Vec<u64>,
}

impl CodeParams {
    pub fn new(n: usize, k: usize) -> Result<Self, FieldError> {
        assert!(n >= 1, "message length must be positive");
        assert!(k <= n, "redundancy may not exceed the message length");
        let q = PrimeField::above((n + k) as u64)?;
        let mut weights = Vec::with_capacity(k * n);
        for j in 0..k {
            let t = q.elem((n + 1 + j) as u64);
            for i in 1..=n {
                let xi = q.elem(i as u64);
                let mut num = q.one();
                let mut den = q.one();
                for m in (1..=n).filter(|&m| m != i) {
                    let xm = q.elem(m as u64);
                    num = num * (t - xm);
                    den = den * (xi - xm);
                }
                let inv = den.inverse().expect("interpolation nodes are distinct mod q");
                weights.push((num * inv).value());
            }
        }
        Ok(CodeParams { n, k, q, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> PrimeField {
        self.q
    }

    /// The `k` redundancy symbols `P_x(n+1), .., P_x(n+k)` of a bit vector
    /// packed into `bits` (bit `i` is coordinate `i + 1`).
    pub fn redundancy(&self, bits: u64) -> Vec<u64> {
        let q = self.q;
        (0..self.k)
            .map(|j| {
                let w = &self.weights[j * self.n..(j + 1) * self.n];
                (0..self.n)
                    .filter(|&i| (bits >> i) & 1 == 1)
                    .fold(q.zero(), |acc, i| acc + q.elem_exact(w[i]))
                    .value()
            })
            .collect()
    }

    /// The full codeword of a packed bit vector.
    pub fn encode_bits(&self, bits: u64) -> Vec<u64> {
        let mut word: Vec<u64> = (0..self.n).map(|i| (bits >> i) & 1).collect();
        word.extend(self.redundancy(bits));
        word
    }
}

/// `C(x)`: `x` followed by its redundancy symbols.
pub fn encode(x: &[bool], params: &CodeParams) -> Vec<u64> {
    assert_eq!(x.len(), params.n(), "message length does not match the code");
    assert!(x.len() <= 64, "messages are at most 64 bits");
    let bits = x
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
    params.encode_bits(bits)
}

/// `C(G) = [A(G) Ã(G); Ã(G)^T 0]` over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedGraph {
    params: CodeParams,
    matrix: SquareMatrix,
}

impl CodedGraph {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }
}

pub fn encode_graph(g: &LabeledGraph, params: &CodeParams) -> CodedGraph {
    let n = params.n();
    assert_eq!(g.n(), n, "graph order does not match the code");
    let mut matrix = SquareMatrix::zeros(n + params.k());
    for i in 0..n {
        let row = params.encode_bits(g.row(i));
        for (j, &v) in row.iter().enumerate() {
            matrix.set(i, j, v);
            if j >= n {
                matrix.set(j, i, v);
            }
        }
    }
    CodedGraph {
        params: params.clone(),
        matrix,
    }
}

/// Number of differing rows of two equal-size square matrices.
pub fn row_distance(m: &SquareMatrix, other: &SquareMatrix) -> usize {
    assert_eq!(m.dim(), other.dim(), "row distance needs equal dimensions");
    m.rows().zip(other.rows()).filter(|(a, b)| a != b).count()
}

/// `B(G, k)`: the members of `universe` at adjacency row distance exactly `k`
/// from `g`. With `k = 0` this is `{G}` when `G` is in the universe.
pub fn ball(
    g: &LabeledGraph,
    k: usize,
    universe: &GraphClass,
) -> Result<Vec<LabeledGraph>, GraphError> {
    Ok(universe
        .enumerate(g.n())?
        .iter()
        .filter(|h| g.row_distance(h) == k)
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::all_graphs;
    use alloc::vec;

    fn hamming(a: &[u64], b: &[u64]) -> usize {
        a.iter().zip(b).filter(|(x, y)| x != y).count()
    }

    #[test]
    fn encode_examples() {
        let p = CodeParams::new(2, 1).unwrap();
        assert_eq!(p.q().modulus(), 5);
        assert_eq!(encode(&[true, false], &p), vec![1, 0, 4]);
        assert_eq!(encode(&[false, true], &p), vec![0, 1, 2]);
        for (n, k) in [(1, 0), (3, 2), (6, 6)] {
            let p = CodeParams::new(n, k).unwrap();
            assert!(encode(&vec![false; n], &p).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn graph_examples() {
        let p = CodeParams::new(2, 1).unwrap();
        let edge = LabeledGraph::complete(2);
        let c = encode_graph(&edge, &p);
        assert_eq!(
            c.matrix(),
            &SquareMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 4], vec![2, 4, 0]])
        );
        let empty = encode_graph(&LabeledGraph::empty(2), &p);
        assert_eq!(empty.matrix(), &SquareMatrix::zeros(3));
        assert_eq!(row_distance(c.matrix(), empty.matrix()), 3);
        assert_eq!(row_distance(c.matrix(), c.matrix()), 0);
        assert_eq!(
            row_distance(&edge.adjacency_matrix(), &LabeledGraph::empty(2).adjacency_matrix()),
            2
        );
    }

    #[test]
    fn systematic_and_distance_small() {
        for n in 1..=6 {
            for k in 0..=n {
                let p = CodeParams::new(n, k).unwrap();
                let words: Vec<Vec<u64>> = (0..1u64 << n).map(|x| p.encode_bits(x)).collect();
                for (x, w) in words.iter().enumerate() {
                    for i in 0..n {
                        assert_eq!(w[i], (x as u64 >> i) & 1);
                    }
                    for v in &words[..x] {
                        assert!(hamming(w, v) > k);
                    }
                }
            }
        }
    }

    #[test]
    fn coded_graph_invariants() {
        let all = all_graphs();
        for n in 1..=4 {
            for k in [1, n] {
                let p = CodeParams::new(n, k).unwrap();
                for g in all.enumerate(n).unwrap() {
                    let c = encode_graph(g, &p);
                    let m = c.matrix();
                    assert!(m.is_symmetric());
                    for i in 0..n + k {
                        for j in 0..n + k {
                            if i < n && j < n {
                                assert_eq!(m.get(i, j), u64::from(g.has_edge(i, j)));
                            } else if i >= n && j >= n {
                                assert_eq!(m.get(i, j), 0);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ball_examples() {
        let all = all_graphs();
        let e2 = LabeledGraph::empty(2);
        assert_eq!(ball(&e2, 2, &all).unwrap(), vec![LabeledGraph::complete(2)]);
        assert!(ball(&e2, 1, &all).unwrap().is_empty());
        assert_eq!(ball(&e2, 0, &all).unwrap(), vec![e2.clone()]);
        assert_eq!(ball(&LabeledGraph::empty(3), 2, &all).unwrap().len(), 3);
        assert!(ball(&LabeledGraph::empty(7), 2, &all).is_err());
    }

    #[test]
    #[should_panic(expected = "equal dimensions")]
    fn row_distance_mismatch() {
        row_distance(&SquareMatrix::zeros(2), &SquareMatrix::zeros(3));
    }
}
