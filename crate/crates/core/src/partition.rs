//! Monochromatic partitioning of labeled DAGs under a path-cost budget, and
//! the conversion from a schematic to an instance of that problem.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::ceil_log2;
use crate::error::PartitionError;
use crate::schematic::MooreSchematic;

pub type NodeId = u64;

/// Bit label of a node. Unlabeled nodes stand in for blank start and final
/// states and form a third color of their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NodeLabel {
    Zero,
    One,
    Unlabeled,
}

impl NodeLabel {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            NodeLabel::One
        } else {
            NodeLabel::Zero
        }
    }

    fn symbol(self) -> char {
        match self {
            NodeLabel::Zero => '0',
            NodeLabel::One => '1',
            NodeLabel::Unlabeled => 'B',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    labels: BTreeMap<NodeId, NodeLabel>,
    edges: BTreeSet<(NodeId, NodeId)>,
    paths: Vec<Vec<NodeId>>,
    pub tau: u64,
    pub k: Option<usize>,
}

/// Node-to-partition assignment. Partition indices start at 1.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Partitioning {
    pub assignment: BTreeMap<NodeId, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PartitionViolation {
    Unassigned {
        node: NodeId,
    },
    UnknownNode {
        node: NodeId,
    },
    ZeroIndex {
        node: NodeId,
    },
    Mixed {
        partition: usize,
    },
    Cost {
        cost: u64,
        tau: u64,
    },
    /// Strict mode only: indices must cover exactly `1..=k`.
    Count {
        expected: usize,
        found: usize,
    },
    EmptyPartition {
        partition: usize,
    },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::Unassigned { node } => write!(f, "node {node} has no partition"),
            PartitionViolation::UnknownNode { node } => write!(f, "node {node} is not in the instance"),
            PartitionViolation::ZeroIndex { node } => write!(f, "node {node} is assigned partition 0"),
            PartitionViolation::Mixed { partition } => {
                write!(f, "partition {partition} mixes labels")
            }
            PartitionViolation::Cost { cost, tau } => write!(f, "path cost {cost} exceeds tau {tau}"),
            PartitionViolation::Count { expected, found } => {
                write!(f, "expected {expected} partitions, found {found}")
            }
            PartitionViolation::EmptyPartition { partition } => {
                write!(f, "partition {partition} is empty")
            }
        }
    }
}

impl PartitionInstance {
    /// Checks that edges join known nodes, the graph is acyclic and every
    /// trace path walks existing edges.
    pub fn new(
        labels: BTreeMap<NodeId, NodeLabel>,
        edges: BTreeSet<(NodeId, NodeId)>,
        paths: Vec<Vec<NodeId>>,
        tau: u64,
        k: Option<usize>,
    ) -> Result<Self, PartitionError> {
        let invalid = |m: String| Err(PartitionError::Invalid(m));
        for &(u, v) in &edges {
            if !labels.contains_key(&u) || !labels.contains_key(&v) {
                return invalid(format!("edge {u} -> {v} names an unknown node"));
            }
        }
        for (i, p) in paths.iter().enumerate() {
            if p.is_empty() {
                return invalid(format!("trace path {i} is empty"));
            }
            if let Some(&node) = p.iter().find(|n| !labels.contains_key(n)) {
                return invalid(format!("trace path {i} visits unknown node {node}"));
            }
            if let Some(w) = p.windows(2).find(|w| !edges.contains(&(w[0], w[1]))) {
                return invalid(format!("trace path {i} uses missing edge {} -> {}", w[0], w[1]));
            }
        }
        let mut indegree: HashMap<NodeId, usize> = labels.keys().map(|&n| (n, 0)).collect();
        for &(_, v) in &edges {
            *indegree.get_mut(&v).expect("checked above") += 1;
        }
        let mut ready: Vec<NodeId> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&n, _)| n).collect();
        let mut seen = 0;
        while let Some(u) = ready.pop() {
            seen += 1;
            for &(_, v) in edges.range((u, NodeId::MIN)..=(u, NodeId::MAX)) {
                let d = indegree.get_mut(&v).expect("checked above");
                *d -= 1;
                if *d == 0 {
                    ready.push(v);
                }
            }
        }
        if seen != labels.len() {
            return invalid("graph has a cycle".into());
        }
        Ok(PartitionInstance { labels, edges, paths, tau, k })
    }

    pub fn labels(&self) -> &BTreeMap<NodeId, NodeLabel> {
        &self.labels
    }

    pub fn edges(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.edges
    }

    pub fn paths(&self) -> &[Vec<NodeId>] {
        &self.paths
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Every node in a partition of its own, numbered by ascending id.
    pub fn identity_partitioning(&self) -> Partitioning {
        Partitioning { assignment: self.labels.keys().enumerate().map(|(i, &n)| (n, i + 1)).collect() }
    }

    /// Text form, one record per line.
    pub fn to_text(&self) -> String {
        let mut out = String::from("PARTINST v1\n");
        for (id, label) in &self.labels {
            let _ = writeln!(out, "node {id} {}", label.symbol());
        }
        for (u, v) in &self.edges {
            let _ = writeln!(out, "edge {u} {v}");
        }
        for (i, p) in self.paths.iter().enumerate() {
            let _ = write!(out, "path {i}");
            for n in p {
                let _ = write!(out, " {n}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "tau {}", self.tau);
        if let Some(k) = self.k {
            let _ = writeln!(out, "k {k}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, PartitionError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        match lines.next() {
            Some((_, "PARTINST v1")) => {}
            Some((line, other)) => {
                return Err(PartitionError::Parse { line, message: format!("bad header {other:?}") })
            }
            None => return Err(PartitionError::Parse { line: 1, message: "empty input".into() }),
        }
        let mut labels = BTreeMap::new();
        let mut edges = BTreeSet::new();
        let mut paths: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        let mut tau = None;
        let mut k = None;
        for (line, l) in lines {
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let err = |message: String| PartitionError::Parse { line, message };
            let fields: Vec<&str> = l.split_whitespace().collect();
            let num = |s: &str| s.parse::<u64>().map_err(|_| err(format!("expected an integer, found {s:?}")));
            match fields.as_slice() {
                ["node", id, label] => {
                    let label = match *label {
                        "0" => NodeLabel::Zero,
                        "1" => NodeLabel::One,
                        "B" => NodeLabel::Unlabeled,
                        other => return Err(err(format!("bad label {other:?}"))),
                    };
                    if labels.insert(num(id)?, label).is_some() {
                        return Err(err(format!("node {id} declared twice")));
                    }
                }
                ["edge", u, v] => {
                    edges.insert((num(u)?, num(v)?));
                }
                ["path", i, nodes @ ..] => {
                    let nodes = nodes.iter().map(|s| num(s)).collect::<Result<Vec<_>, _>>()?;
                    if paths.insert(num(i)? as usize, nodes).is_some() {
                        return Err(err(format!("path {i} declared twice")));
                    }
                }
                ["tau", t] => tau = Some(num(t)?),
                ["k", v] => k = Some(num(v)? as usize),
                _ => return Err(err(format!("unrecognised record {l:?}"))),
            }
        }
        if paths.keys().enumerate().any(|(i, &p)| i != p) {
            return Err(PartitionError::Invalid("path indices must run 0, 1, 2, ...".into()));
        }
        let tau = tau.ok_or_else(|| PartitionError::Invalid("missing tau record".into()))?;
        Self::new(labels, edges, paths.into_values().collect(), tau, k)
    }
}

impl Partitioning {
    /// Parses `<node> <partition>` lines.
    pub fn parse(text: &str) -> Result<Self, PartitionError> {
        let mut assignment = BTreeMap::new();
        for (i, l) in text.lines().enumerate() {
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let err = || PartitionError::Parse {
                line: i + 1,
                message: format!("expected `<node> <partition>`, found {l:?}"),
            };
            let mut it = l.split_whitespace();
            let node = it.next().and_then(|s| s.parse().ok()).ok_or_else(err)?;
            let part = it.next().and_then(|s| s.parse().ok()).ok_or_else(err)?;
            if it.next().is_some() || assignment.insert(node, part).is_some() {
                return Err(err());
            }
        }
        Ok(Partitioning { assignment })
    }

    pub fn to_text(&self) -> String {
        self.assignment.iter().map(|(n, p)| format!("{n} {p}\n")).collect()
    }

    /// Number of distinct partition indices in use.
    pub fn partition_count(&self) -> usize {
        self.assignment.values().collect::<BTreeSet<_>>().len()
    }
}

/// Partition indices along trace path `i`, with consecutive repeats merged.
pub fn partition_path(inst: &PartitionInstance, p: &Partitioning, i: usize) -> Result<Vec<usize>, PartitionError> {
    let path = inst.paths.get(i).ok_or(PartitionError::PathOutOfRange(i))?;
    let mut out: Vec<usize> = Vec::with_capacity(path.len());
    for n in path {
        let g = *p.assignment.get(n).ok_or_else(|| PartitionError::Invalid(format!("node {n} has no partition")))?;
        if out.last() != Some(&g) {
            out.push(g);
        }
    }
    Ok(out)
}

fn all_partition_paths(inst: &PartitionInstance, p: &Partitioning) -> Result<Vec<Vec<usize>>, PartitionError> {
    (0..inst.paths.len()).map(|i| partition_path(inst, p, i)).collect()
}

fn successor_sets(paths: &[Vec<usize>]) -> HashMap<usize, HashSet<usize>> {
    let mut next: HashMap<usize, HashSet<usize>> = HashMap::new();
    for path in paths {
        for w in path.windows(2) {
            next.entry(w[0]).or_default().insert(w[1]);
        }
    }
    next
}

/// Number of distinct partitions that directly follow `g` on some
/// partition path.
pub fn partition_degree(inst: &PartitionInstance, p: &Partitioning, g: usize) -> Result<usize, PartitionError> {
    let paths = all_partition_paths(inst, p)?;
    Ok(successor_sets(&paths).get(&g).map_or(0, HashSet::len))
}

/// Largest, over trace paths, of the summed `⌈log₂ degree⌉` of the
/// partitions the path passes through.
pub fn tau_cost(inst: &PartitionInstance, p: &Partitioning) -> Result<u64, PartitionError> {
    let paths = all_partition_paths(inst, p)?;
    Ok(cost_of(&paths))
}

fn cost_of(paths: &[Vec<usize>]) -> u64 {
    let next = successor_sets(paths);
    let bits = |g: &usize| next.get(g).map_or(0, |s| ceil_log2(s.len() as u64)) as u64;
    paths.iter().map(|path| path.iter().map(bits).sum()).max().unwrap_or(0)
}

/// Everything wrong with `p` as a solution. In strict mode the used indices
/// must be exactly `1..=k`, with `k` from the instance when present.
pub fn check(inst: &PartitionInstance, p: &Partitioning, strict: bool) -> Vec<PartitionViolation> {
    let mut out = Vec::new();
    for &node in inst.labels.keys() {
        if !p.assignment.contains_key(&node) {
            out.push(PartitionViolation::Unassigned { node });
        }
    }
    let mut colors: BTreeMap<usize, BTreeSet<NodeLabel>> = BTreeMap::new();
    for (&node, &g) in &p.assignment {
        match inst.labels.get(&node) {
            None => out.push(PartitionViolation::UnknownNode { node }),
            Some(_) if g == 0 => out.push(PartitionViolation::ZeroIndex { node }),
            Some(&label) => {
                colors.entry(g).or_default().insert(label);
            }
        }
    }
    for (&partition, set) in &colors {
        if set.len() > 1 {
            out.push(PartitionViolation::Mixed { partition });
        }
    }
    if out.is_empty() {
        let cost = tau_cost(inst, p).expect("assignment covers every node");
        if cost > inst.tau {
            out.push(PartitionViolation::Cost { cost, tau: inst.tau });
        }
    }
    if strict {
        let found = colors.len();
        let expected = inst.k.unwrap_or(found);
        if expected != found {
            out.push(PartitionViolation::Count { expected, found });
        }
        let top = colors.keys().next_back().copied().unwrap_or(0);
        for partition in 1..=top {
            if !colors.contains_key(&partition) {
                out.push(PartitionViolation::EmptyPartition { partition });
            }
        }
    }
    out
}

/// Default node cap for [`brute_force_min_k`].
pub const BRUTE_FORCE_CAP: usize = 12;

/// Fewest partitions meeting the instance's `tau`, by exhaustive search in
/// increasing partition count. `Ok(None)` means no partitioning meets `tau`.
pub fn brute_force_min_k(inst: &PartitionInstance, cap: usize) -> Result<Option<Partitioning>, PartitionError> {
    let nodes: Vec<NodeId> = inst.labels.keys().copied().collect();
    if nodes.len() > cap {
        return Err(PartitionError::CapExceeded { nodes: nodes.len(), cap });
    }
    let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let labels: Vec<NodeLabel> = inst.labels.values().copied().collect();
    let paths: Vec<Vec<usize>> = inst.paths.iter().map(|p| p.iter().map(|n| index[n]).collect()).collect();
    let search = Search { labels: &labels, paths: &paths, tau: inst.tau };
    for k in 1..=nodes.len().max(1) {
        let mut blocks = vec![0usize; nodes.len()];
        let mut colors = Vec::with_capacity(k);
        if search.fill(0, k, &mut blocks, &mut colors) {
            let assignment = nodes.iter().zip(&blocks).map(|(&n, &b)| (n, b + 1)).collect();
            return Ok(Some(Partitioning { assignment }));
        }
    }
    Ok(None)
}

struct Search<'a> {
    labels: &'a [NodeLabel],
    paths: &'a [Vec<usize>],
    tau: u64,
}

impl Search<'_> {
    /// Restricted-growth enumeration of set partitions with exactly `k`
    /// blocks, pruning blocks that would mix labels.
    fn fill(&self, i: usize, k: usize, blocks: &mut [usize], colors: &mut Vec<NodeLabel>) -> bool {
        let n = blocks.len();
        if i == n {
            return colors.len() == k && self.within_budget(blocks);
        }
        if colors.len() + (n - i) < k {
            return false;
        }
        for b in 0..colors.len() {
            if colors[b] == self.labels[i] {
                blocks[i] = b;
                if self.fill(i + 1, k, blocks, colors) {
                    return true;
                }
            }
        }
        if colors.len() < k {
            blocks[i] = colors.len();
            colors.push(self.labels[i]);
            let found = self.fill(i + 1, k, blocks, colors);
            colors.pop();
            if found {
                return true;
            }
        }
        false
    }

    fn within_budget(&self, blocks: &[usize]) -> bool {
        let paths: Vec<Vec<usize>> = self
            .paths
            .iter()
            .map(|p| {
                let mut out: Vec<usize> = Vec::with_capacity(p.len());
                for &n in p {
                    if out.last() != Some(&blocks[n]) {
                        out.push(blocks[n]);
                    }
                }
                out
            })
            .collect();
        cost_of(&paths) <= self.tau
    }
}

/// The partition instance whose identity partitioning prices each path of
/// `d` exactly as the encoder does.
///
/// Nodes are the schematic's states under their own ids, a blank start
/// included as an unlabeled node. The final state is kept only after a state
/// offering both an unconditional and an end edge, where it is the
/// alternative a continue marker chooses against. Trace paths are the
/// schematic's start-to-final paths, trimmed the same way.
pub fn schematic_to_instance(d: &MooreSchematic, tau: u64) -> Result<PartitionInstance, PartitionError> {
    let states = d.states();
    let keeps_final = |id: usize| states[id].edges.uncond.is_some() && states[id].edges.end.is_some();
    let mut labels = BTreeMap::new();
    let mut edges = BTreeSet::new();
    let mut paths = Vec::new();
    for path in d.enumerate_paths() {
        let mut nodes = path.states.clone();
        if nodes.len() >= 2 && !keeps_final(nodes[nodes.len() - 2]) {
            nodes.pop();
        }
        for &id in &nodes {
            let label = states[id].output.bit().map_or(NodeLabel::Unlabeled, NodeLabel::from_bit);
            labels.insert(id as NodeId, label);
        }
        for w in nodes.windows(2) {
            edges.insert((w[0] as NodeId, w[1] as NodeId));
        }
        paths.push(nodes.into_iter().map(|id| id as NodeId).collect());
    }
    PartitionInstance::new(labels, edges, paths, tau, None)
}
