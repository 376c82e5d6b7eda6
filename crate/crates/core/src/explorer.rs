//! Breadth-first exploration of the mutation graph of a seed.
//!
//! Nodes are canonical seeds. Each BFS level is expanded in parallel and
//! merged in (parent id, direction index) order, so node ids and edge lists
//! do not depend on scheduling.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{newton, normal_form_2d};
use crate::error::{Error, Result};
use crate::seeds::{EquivalenceGroup, LGSeed, SeedMutation, Verdict};

pub const DEFAULT_DEPTH_LIMIT: usize = 8;

#[derive(Clone, Debug)]
pub struct ExploreOptions {
    /// Largest depth accepted by [`explore_with`].
    pub depth_limit: usize,
    pub group: EquivalenceGroup,
    /// Run the full LG-seed test on every new node.
    pub verify_seeds: bool,
    pub parallel: bool,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            depth_limit: DEFAULT_DEPTH_LIMIT,
            group: EquivalenceGroup::default(),
            verify_seeds: false,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub seed: LGSeed,
    pub depth: usize,
}

/// A mutation of node `from` in its direction `index` lands on node `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

impl MutationGraph {
    /// Number of nodes first seen at each depth.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for n in &self.nodes {
            if out.len() <= n.depth {
                out.resize(n.depth + 1, 0);
            }
            out[n.depth] += 1;
        }
        out
    }

    pub fn out_degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|e| e.from == id).count()
    }

    /// Checks structural invariants of an imported graph.
    pub fn validate(&self) -> Result<()> {
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i {
                return Err(Error::Invalid(format!(
                    "node at position {i} has id {}",
                    n.id
                )));
            }
        }
        for e in &self.edges {
            if e.from >= self.nodes.len() || e.to >= self.nodes.len() {
                return Err(Error::Invalid(format!("edge {e:?} has a missing endpoint")));
            }
            if e.index >= self.nodes[e.from].seed.directions().len() {
                return Err(Error::Invalid(format!(
                    "edge {e:?} has a bad direction index"
                )));
            }
        }
        Ok(())
    }
}

pub fn explore(root: &LGSeed, depth: usize) -> Result<MutationGraph> {
    explore_with(root, depth, &ExploreOptions::default())
}

struct Child {
    indices: Vec<usize>,
    seed: LGSeed,
}

/// Mutates `seed` once per distinct direction; equal directions give equal
/// children, so their edges share one computation.
fn expand(
    seed: &LGSeed,
    opts: &ExploreOptions,
) -> std::result::Result<Vec<Child>, (usize, String)> {
    let dirs = seed.directions();
    let mut out: Vec<Child> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for (j, d) in dirs.iter().enumerate() {
        if let Some(k) = reps.iter().position(|&r| &dirs[r] == d) {
            out[k].indices.push(j);
            continue;
        }
        let child = match seed.mutate(j).map_err(|e| (j, e.to_string()))? {
            SeedMutation::Seed(s) => s,
            SeedMutation::NonLaurent(nl) => {
                return Err((
                    j,
                    format!(
                        "pole of order {} along {}",
                        nl.witness.power(),
                        nl.witness.factor()
                    ),
                ))
            }
        };
        if opts.verify_seeds {
            if let Verdict::Failed {
                direction, iterate, ..
            } = child.is_lg_seed().map_err(|e| (j, e.to_string()))?
            {
                return Err((
                    j,
                    format!(
                        "child fails the seed test at direction {direction}, iterate {iterate}"
                    ),
                ));
            }
        }
        let canon = child
            .canonical_form(opts.group)
            .map_err(|e| (j, e.to_string()))?
            .into_seed();
        reps.push(j);
        out.push(Child {
            indices: vec![j],
            seed: canon,
        });
    }
    Ok(out)
}

pub fn explore_with(root: &LGSeed, depth: usize, opts: &ExploreOptions) -> Result<MutationGraph> {
    if depth > opts.depth_limit {
        return Err(Error::DepthLimit {
            depth,
            limit: opts.depth_limit,
        });
    }
    if opts.verify_seeds {
        if let Verdict::Failed {
            direction, iterate, ..
        } = root.is_lg_seed()?
        {
            return Err(Error::NonLaurentPath {
                path: vec![],
                detail: format!(
                    "root fails the seed test at direction {direction}, iterate {iterate}"
                ),
            });
        }
    }
    let root = root.canonical_form(opts.group)?.into_seed();
    let mut nodes = vec![GraphNode {
        id: 0,
        seed: root.clone(),
        depth: 0,
    }];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut index: HashMap<LGSeed, usize> = HashMap::from([(root, 0)]);
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];

    for level in 0..depth {
        let expanded: Vec<_> = if opts.parallel {
            frontier
                .par_iter()
                .map(|&id| expand(&nodes[id].seed, opts))
                .collect()
        } else {
            frontier
                .iter()
                .map(|&id| expand(&nodes[id].seed, opts))
                .collect()
        };
        let mut next = Vec::new();
        for (&id, result) in frontier.iter().zip(expanded) {
            let children = result.map_err(|(j, detail)| {
                let mut path = path_to(&parent, id);
                path.push(j);
                Error::NonLaurentPath { path, detail }
            })?;
            let mut pending: Vec<(usize, usize)> = Vec::new();
            for child in children {
                let to = match index.get(&child.seed) {
                    Some(&to) => to,
                    None => {
                        let to = nodes.len();
                        index.insert(child.seed.clone(), to);
                        nodes.push(GraphNode {
                            id: to,
                            seed: child.seed,
                            depth: level + 1,
                        });
                        parent.push(Some((id, child.indices[0])));
                        next.push(to);
                        to
                    }
                };
                pending.extend(child.indices.iter().map(|&j| (j, to)));
            }
            pending.sort_unstable();
            edges.extend(pending.into_iter().map(|(index, to)| GraphEdge {
                from: id,
                to,
                index,
            }));
        }
        frontier = next;
    }
    Ok(MutationGraph { nodes, edges })
}

fn path_to(parent: &[Option<(usize, usize)>], mut id: usize) -> Vec<usize> {
    let mut path = Vec::new();
    while let Some((p, j)) = parent[id] {
        path.push(j);
        id = p;
    }
    path.reverse();
    path
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            other => Err(Error::Invalid(format!("unknown format {other:?}"))),
        }
    }
}

pub fn export_graph(g: &MutationGraph, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Json => serde_json::to_string_pretty(g)
            .map(|s| s + "\n")
            .map_err(|e| Error::Internal(e.to_string())),
        ExportFormat::Dot => to_dot(g),
    }
}

pub fn import_graph(json: &str) -> Result<MutationGraph> {
    let g: MutationGraph =
        serde_json::from_str(json).map_err(|e| Error::Invalid(format!("graph JSON: {e}")))?;
    g.validate()?;
    Ok(g)
}

/// DOT text with one node per seed, labelled by the normal form of its
/// Newton polygon.
fn to_dot(g: &MutationGraph) -> Result<String> {
    let mut out = String::from("digraph mutations {\n");
    for n in &g.nodes {
        let label = if n.seed.potential().is_zero() {
            "0".to_string()
        } else {
            normal_form_2d(&newton(n.seed.potential())?)?.signature()
        };
        writeln!(out, "  n{} [label=\"{}\", depth={}];", n.id, label, n.depth)
            .expect("string write");
    }
    for e in &g.edges {
        writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.index).expect("string write");
    }
    out.push_str("}\n");
    Ok(out)
}
