//! Shared brute-force oracles: an explicit ball of the tree as a graph with
//! honest breadth-first search, independent of the address arithmetic and
//! closed-form counting used by the library.

use std::collections::HashMap;
use std::collections::VecDeque;
use treeharmonic::tree_model::{SemiRegularTree, VertexAddress};

pub struct BallGraph {
    pub vertices: Vec<VertexAddress>,
    pub index: HashMap<VertexAddress, usize>,
    pub adjacency: Vec<Vec<usize>>,
}

impl BallGraph {
    pub fn new(tree: &SemiRegularTree, radius: usize) -> Self {
        let mut vertices = Vec::new();
        for depth in 0..=radius {
            vertices.extend(tree.addresses_at_depth(depth));
        }
        let index: HashMap<VertexAddress, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (i, v) in vertices.iter().enumerate() {
            if let Some(parent) = v.parent() {
                let p = index[&parent];
                adjacency[i].push(p);
                adjacency[p].push(i);
            }
        }
        BallGraph {
            vertices,
            index,
            adjacency,
        }
    }

    pub fn bfs_distances(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertices.len()];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(dist[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn root_index(&self) -> usize {
        self.index[&VertexAddress::root()]
    }
}
