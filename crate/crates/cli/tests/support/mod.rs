//! Support for the acceptance suite: an independent brute-force ball oracle
//! and helpers for driving the compiled binary.

// shared by several test targets; not every target uses every item
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::process::{Command, Output};
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

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treeharmonic"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn report(criterion: usize, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {criterion} failed: {detail}");
}
