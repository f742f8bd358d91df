//! Exact spanning-tree counts via the matrix-tree theorem.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::SignedGraph;

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Every intermediate division is exact.
pub fn bareiss_determinant<T>(mut m: Vec<Vec<T>>) -> T
where
    T: Clone + Integer + Signed,
{
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            let lead = m[i][k].clone();
            for j in k + 1..n {
                let value = m[i][j].clone() * pivot.clone() - lead.clone() * m[k][j].clone();
                m[i][j] = value / prev.clone();
            }
            m[i][k] = T::zero();
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Number of spanning trees of a connected graph.
///
/// Pendant vertices are peeled off first since they never change the count;
/// the determinant is then taken over the reduced Laplacian of the 2-core.
pub fn count_spanning_trees(g: &SignedGraph) -> Result<BigUint> {
    g.require_connected()?;
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    while let Some(v) = queue.pop_front() {
        if removed[v] || degree[v] != 1 {
            continue;
        }
        removed[v] = true;
        for &(w, _) in g.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    let core: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    if core.len() <= 1 {
        return Ok(BigUint::from(1u8));
    }
    let mut index = vec![usize::MAX; n];
    for (i, &v) in core.iter().enumerate() {
        index[v] = i;
    }
    // Drop the last core vertex to get the reduced Laplacian.
    let size = core.len() - 1;
    let mut lap = vec![vec![BigInt::zero(); size]; size];
    for e in g.edges() {
        let (a, b) = (index[e.u], index[e.v]);
        if a == usize::MAX || b == usize::MAX {
            continue;
        }
        if a < size {
            lap[a][a] += 1;
        }
        if b < size {
            lap[b][b] += 1;
        }
        if a < size && b < size {
            lap[a][b] -= 1;
            lap[b][a] -= 1;
        }
    }
    let det = bareiss_determinant(lap);
    det.to_biguint()
        .ok_or_else(|| Error::OracleMismatch(format!("negative tree count {det}")))
}
