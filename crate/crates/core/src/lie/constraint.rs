use serde::Serialize;

use crate::algebra::DigraphAlgebra;
use crate::ideals::BlockIdeal;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    /// Classes as sorted member lists, ordered by smallest member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
        out.sort();
        out
    }
}

/// Blocks joined by the strict pairs missing from `K`. Blocks in one
/// component must carry equal scalars in any Lie addend for `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub components: Vec<Vec<usize>>,
    pub free_nodes: Vec<usize>,
}

impl ConstraintGraph {
    pub fn new(alg: &DigraphAlgebra, k: &BlockIdeal) -> Self {
        let p = alg.blocks().count();
        let edges: Vec<(usize, usize)> =
            alg.blocks().strict_pairs().into_iter().filter(|&(u, v)| !k.contains(u, v)).collect();
        let mut uf = UnionFind::new(p);
        let mut touched = vec![false; p];
        for &(u, v) in &edges {
            uf.union(u, v);
            touched[u] = true;
            touched[v] = true;
        }
        let components = uf.classes().into_iter().filter(|c| touched[c[0]]).collect();
        let free_nodes = (0..p).filter(|&u| !touched[u]).collect();
        ConstraintGraph { nodes: p, edges, components, free_nodes }
    }

    pub fn component_of(&self, u: usize) -> Option<usize> {
        self.components.iter().position(|c| c.contains(&u))
    }

    /// Same graph with 1-based block labels, for reports.
    pub fn one_based(&self) -> ConstraintGraph {
        let shift = |v: &Vec<usize>| v.iter().map(|x| x + 1).collect::<Vec<_>>();
        ConstraintGraph {
            nodes: self.nodes,
            edges: self.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect(),
            components: self.components.iter().map(shift).collect(),
            free_nodes: shift(&self.free_nodes),
        }
    }
}
