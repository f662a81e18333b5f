use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::net::CpNet;
use crate::error::Result;

/// Structural class of the parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetClass {
    /// Every node has at most one parent.
    pub is_tree: bool,
    /// Underlying undirected graph is a forest.
    pub is_polytree: bool,
    /// At most one directed path between every ordered node pair.
    pub is_dpsc: bool,
    /// Largest number of distinct directed paths between two distinct nodes
    /// (0 when the graph has no edges).
    pub max_delta: BigUint,
}

/// Path counts from every source: `counts[s][t]` = number of directed paths
/// s → t (with `counts[s][s] = 1`).
pub fn path_counts(net: &CpNet) -> Result<Vec<Vec<BigUint>>> {
    let order = net.require_acyclic()?;
    let n = net.len();
    let children = net.children();
    let mut all = Vec::with_capacity(n);
    for s in 0..n {
        let mut counts = vec![BigUint::zero(); n];
        counts[s] = BigUint::one();
        for &v in &order {
            if counts[v].is_zero() {
                continue;
            }
            let c = counts[v].clone();
            for &ch in &children[v] {
                counts[ch] += &c;
            }
        }
        all.push(counts);
    }
    Ok(all)
}

pub fn classify_structure(net: &CpNet) -> Result<NetClass> {
    let counts = path_counts(net)?;
    let n = net.len();
    let is_tree = (0..n).all(|v| net.parents(v).len() <= 1);

    // union-find over the undirected skeleton
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut is_polytree = true;
    for v in 0..n {
        for &p in net.parents(v) {
            let (a, b) = (find(&mut parent, v), find(&mut parent, p));
            if a == b {
                is_polytree = false;
            } else {
                parent[a] = b;
            }
        }
    }

    let mut max_delta = BigUint::zero();
    for (s, row) in counts.iter().enumerate() {
        for (t, c) in row.iter().enumerate() {
            if s != t && *c > max_delta {
                max_delta = c.clone();
            }
        }
    }
    let is_dpsc = max_delta <= BigUint::one();
    Ok(NetClass {
        is_tree,
        is_polytree,
        is_dpsc,
        max_delta,
    })
}
