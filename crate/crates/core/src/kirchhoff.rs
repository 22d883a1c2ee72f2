//! Exact impurity counts and probabilities from the reduced Laplacian of
//! `H⊥`.
//!
//! `A` is indexed by the faces: 4 on the diagonal, −1 between adjacent
//! faces. `b` marks faces joined to `f*` by a lattice edge. The solution of
//! `A p = b`, extended by `p_{f*} = 1`, is the chance that a random walk from
//! each face is absorbed at `f*` through a lattice edge. With `det A`
//! spanning trees of `H⊥`, a diagonal edge whose `W1` end is `v` carries the
//! impurity in `det A · p_v` coverings of `G`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{diagonal_edges, DualGraph, Edge, TemperleyTriple, Vertex};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KirchhoffError {
    #[error("edge {0} is not diagonal")]
    NotDiagonal(Edge),
    #[error("edge {0} is not an edge of G")]
    NotInG(Edge),
    #[error("Laplacian system is singular")]
    SingularSystem,
}

/// `A p = b` over the faces, in lexicographic face order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianSystem {
    pub order: Vec<Vertex>,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
    pub d_star: usize,
}

pub fn build_system(hp: &DualGraph) -> LaplacianSystem {
    let mut order = hp.faces.clone();
    order.sort_unstable();
    let index: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = order.len();
    let mut a = vec![vec![0i64; n]; n];
    let mut b = vec![0i64; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 4;
    }
    for e in &hp.edges {
        let (u, v) = e.ends;
        match (index.get(&u), index.get(&v)) {
            (Some(&i), Some(&j)) => {
                a[i][j] = -1;
                a[j][i] = -1;
            }
            (Some(&i), None) | (None, Some(&i)) if e.lattice => b[i] = 1,
            _ => {}
        }
    }
    LaplacianSystem { order, a, b, d_star: hp.d_star }
}

fn big_matrix(sys: &LaplacianSystem, with_rhs: bool) -> Vec<Vec<BigInt>> {
    sys.a
        .iter()
        .zip(&sys.b)
        .map(|(row, &rhs)| {
            let mut r: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
            if with_rhs {
                r.push(BigInt::from(rhs));
            }
            r
        })
        .collect()
}

/// Fraction-free elimination in place on the first `n` columns. Returns the
/// determinant of the leading `n × n` block; every division is exact.
fn bareiss(m: &mut [Vec<BigInt>], n: usize) -> BigInt {
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        let width = m[k].len();
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &m[n - 1][n - 1]
    }
}

/// `|det A|`, the number of spanning trees of `H⊥`.
pub fn tree_count(sys: &LaplacianSystem) -> BigInt {
    let mut m = big_matrix(sys, false);
    bareiss(&mut m, sys.order.len()).abs()
}

/// Exact solution of `A p = b`, by face order.
pub fn solve_p(sys: &LaplacianSystem) -> Result<Vec<BigRational>, KirchhoffError> {
    let n = sys.order.len();
    let mut m = big_matrix(sys, true);
    if bareiss(&mut m, n).is_zero() {
        return Err(KirchhoffError::SingularSystem);
    }
    let mut p = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= BigRational::from_integer(m[i][j].clone()) * &p[j];
        }
        p[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Ok(p)
}

/// Everything needed to answer count and probability queries for one region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub system: LaplacianSystem,
    pub det: BigInt,
    /// `p_v` for every face and for `f*`.
    pub p: BTreeMap<Vertex, BigRational>,
    pub f_star: Vertex,
}

impl Solution {
    /// `4 Σ p_v + d* − 3`, the sum running over faces and `f*`.
    pub fn normaliser(&self) -> BigRational {
        let sum: BigRational = self.p.values().sum();
        sum * BigRational::from_integer(4.into())
            + BigRational::from_integer(BigInt::from(self.system.d_star as i64 - 3))
    }

    pub fn total(&self) -> BigInt {
        let t = self.normaliser() * BigRational::from_integer(self.det.clone());
        debug_assert!(t.is_integer());
        t.to_integer()
    }

    fn p_of(&self, e: Edge) -> Result<&BigRational, KirchhoffError> {
        let v = e.w1_endpoint().ok_or(KirchhoffError::NotDiagonal(e))?;
        self.p.get(&v).ok_or(KirchhoffError::NotInG(e))
    }

    pub fn count(&self, e: Edge) -> Result<BigInt, KirchhoffError> {
        let c = self.p_of(e)? * BigRational::from_integer(self.det.clone());
        debug_assert!(c.is_integer());
        Ok(c.to_integer())
    }

    pub fn probability(&self, e: Edge) -> Result<BigRational, KirchhoffError> {
        Ok(self.p_of(e)? / self.normaliser())
    }
}

pub fn solve(t: &TemperleyTriple) -> Result<Solution, KirchhoffError> {
    let system = build_system(&t.h_perp);
    let det = tree_count(&system);
    let values = solve_p(&system)?;
    let mut p: BTreeMap<Vertex, BigRational> = system.order.iter().copied().zip(values).collect();
    p.insert(t.f_star(), BigRational::one());
    Ok(Solution { system, det, p, f_star: t.f_star() })
}

fn check_edge(t: &TemperleyTriple, e: Edge) -> Result<(), KirchhoffError> {
    if !e.is_diagonal() {
        return Err(KirchhoffError::NotDiagonal(e));
    }
    if !t.g.contains_edge(e) {
        return Err(KirchhoffError::NotInG(e));
    }
    Ok(())
}

/// Number of coverings of `G` with the impurity at `e`: `|det A| · p_v`.
pub fn coverings_with_impurity(t: &TemperleyTriple, e: Edge) -> Result<BigInt, KirchhoffError> {
    check_edge(t, e)?;
    solve(t)?.count(e)
}

/// `|det A| (4 Σ p_v + d* − 3)`.
pub fn total_coverings(t: &TemperleyTriple) -> Result<BigInt, KirchhoffError> {
    Ok(solve(t)?.total())
}

/// Probability that a uniform covering of `G` has its impurity at `e`.
pub fn impurity_probability(t: &TemperleyTriple, e: Edge) -> Result<BigRational, KirchhoffError> {
    check_edge(t, e)?;
    solve(t)?.probability(e)
}

/// Every diagonal edge of `G` with its exact probability, sorted by edge.
pub fn edge_probabilities(t: &TemperleyTriple) -> Result<Vec<(Edge, BigRational)>, KirchhoffError> {
    let s = solve(t)?;
    diagonal_edges(&t.g)
        .into_iter()
        .map(|e| Ok((e, s.probability(e)?)))
        .collect()
}
