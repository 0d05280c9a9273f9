//! Schematic construction: a trie-shaped Moore machine built string by
//! string, then reduced bottom-up by merging states whose output and
//! successor structure coincide.

use std::collections::{HashMap, VecDeque};

use crate::bits::BitString;
use crate::corpus::Corpus;
use crate::error::CorpusError;
use crate::schematic::{Edges, MooreSchematic, OutputSymbol, State, StateId, TransitionLabel};

/// Successor structure of a state, tagged by shape so that an unconditional
/// edge never collides with a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyShape {
    NoEdges,
    EndOnly(StateId),
    UncondOnly(StateId),
    UncondAndEnd(StateId, StateId),
    Branch(StateId, StateId),
    BranchAndEnd(StateId, StateId, StateId),
    /// Label set outside the allowed combinations; never produced by
    /// construction.
    Other(Edges),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MergeKey {
    pub output: OutputSymbol,
    pub shape: KeyShape,
}

impl MergeKey {
    pub fn of(output: OutputSymbol, e: &Edges) -> Self {
        let shape = match (e.zero, e.one, e.uncond, e.end) {
            (None, None, None, None) => KeyShape::NoEdges,
            (None, None, None, Some(t)) => KeyShape::EndOnly(t),
            (None, None, Some(u), None) => KeyShape::UncondOnly(u),
            (None, None, Some(u), Some(t)) => KeyShape::UncondAndEnd(u, t),
            (Some(z), Some(o), None, None) => KeyShape::Branch(z, o),
            (Some(z), Some(o), None, Some(t)) => KeyShape::BranchAndEnd(z, o, t),
            _ => KeyShape::Other(*e),
        };
        MergeKey { output, shape }
    }

    pub fn of_state(s: &State) -> Self {
        Self::of(s.output, &s.edges)
    }
}

/// What construction did, for inspection in tests and CLI summaries.
/// Ids in `stage2_order` and `merges` refer to the trie before reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildTrace {
    pub stage1_state_count: usize,
    pub stage2_order: Vec<StateId>,
    /// `(removed, representative)` pairs in processing order.
    pub merges: Vec<(StateId, StateId)>,
    pub collapsed_start: bool,
    /// Trie id to final id; `None` for removed states.
    pub id_map: Vec<Option<StateId>>,
}

#[derive(Debug, Clone)]
struct Node {
    output: OutputSymbol,
    edges: Edges,
    is_final: bool,
    parent: Option<(StateId, TransitionLabel)>,
}

#[derive(Debug, Default)]
struct Trie {
    nodes: Vec<Node>,
}

impl Trie {
    fn add(&mut self, output: OutputSymbol, parent: Option<(StateId, TransitionLabel)>) -> StateId {
        let id = self.nodes.len();
        self.nodes.push(Node { output, edges: Edges::default(), is_final: false, parent });
        if let Some((p, label)) = parent {
            *self.nodes[p].edges.slot(label) = Some(id);
        }
        id
    }

    fn output_of(&self, id: StateId) -> OutputSymbol {
        self.nodes[id].output
    }

    fn insert(&mut self, item: &BitString) {
        let mut s = 0;
        for b in item.iter() {
            let want = OutputSymbol::from_bit(b);
            let e = self.nodes[s].edges;
            if e.zero.is_none() && e.one.is_none() && e.uncond.is_none() {
                self.add(want, Some((s, TransitionLabel::Unconditional)));
            }
            if let Some(u) = self.nodes[s].edges.uncond {
                if self.output_of(u) != want {
                    let label = TransitionLabel::on_bit(!b);
                    let edges = &mut self.nodes[s].edges;
                    edges.uncond = None;
                    *edges.slot(label) = Some(u);
                    self.nodes[u].parent = Some((s, label));
                }
            }
            let e = self.nodes[s].edges;
            let via_uncond = e.uncond.filter(|&u| self.output_of(u) == want);
            s = match e.on_bit(b).or(via_uncond) {
                Some(next) => next,
                None => self.add(want, Some((s, TransitionLabel::on_bit(b)))),
            };
        }
        let f = self.add(OutputSymbol::Blank, Some((s, TransitionLabel::OnEnd)));
        self.nodes[f].is_final = true;
    }

    fn build(corpus: &Corpus) -> Trie {
        let mut trie = Trie { nodes: Vec::with_capacity(corpus.total_bits() + corpus.n() + 1) };
        trie.add(OutputSymbol::Blank, None);
        for item in corpus.iter() {
            trie.insert(item);
        }
        trie
    }

    /// Breadth-first order from the root, children in label order
    /// `0`, `1`, `E`, `U`, reversed so deeper states come first.
    fn depth_order(&self) -> Vec<StateId> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut queue = VecDeque::from([0]);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            let e = &self.nodes[s].edges;
            queue.extend([e.zero, e.one, e.end, e.uncond].into_iter().flatten());
        }
        order.reverse();
        order
    }

    fn into_schematic(self, alive: &[bool], start: StateId) -> (MooreSchematic, Vec<Option<StateId>>) {
        let mut id_map = vec![None; self.nodes.len()];
        let mut next = 0;
        for (old, &keep) in alive.iter().enumerate() {
            if keep {
                id_map[old] = Some(next);
                next += 1;
            }
        }
        let remap = |t: Option<StateId>| t.map(|t| id_map[t].expect("edge to removed state"));
        let states = self
            .nodes
            .into_iter()
            .zip(alive)
            .filter(|(_, &keep)| keep)
            .map(|(node, _)| State {
                id: 0,
                output: node.output,
                edges: Edges {
                    zero: remap(node.edges.zero),
                    one: remap(node.edges.one),
                    uncond: remap(node.edges.uncond),
                    end: remap(node.edges.end),
                },
                is_final: node.is_final,
                depth: 0,
            })
            .collect();
        let start = id_map[start].expect("start kept");
        (MooreSchematic::from_parts(states, start, Vec::new()), id_map)
    }
}

/// The unreduced trie: a directed tree rooted at a blank start state with
/// one final leaf per corpus string.
pub fn construct_stage1(corpus: &Corpus) -> MooreSchematic {
    let trie = Trie::build(corpus);
    let alive = vec![true; trie.nodes.len()];
    trie.into_schematic(&alive, 0).0
}

/// Builds the reduced schematic for `corpus`. The auxiliary output is empty.
pub fn construct(corpus: &Corpus) -> (MooreSchematic, BuildTrace) {
    let mut trie = Trie::build(corpus);
    let stage1_state_count = trie.nodes.len();
    let order = trie.depth_order();

    let mut alive = vec![true; stage1_state_count];
    let mut table: HashMap<MergeKey, StateId> = HashMap::with_capacity(stage1_state_count);
    let mut merges = Vec::new();
    for &s in &order {
        let key = MergeKey::of(trie.nodes[s].output, &trie.nodes[s].edges);
        match table.get(&key) {
            None => {
                table.insert(key, s);
            }
            Some(_) if s == 0 => break,
            Some(&rep) => {
                // Tree invariant: every non-root trie node has exactly one parent,
                // and representatives are never removed.
                let (parent, label) = trie.nodes[s].parent.expect("non-root node has a parent");
                let slot = trie.nodes[parent].edges.slot(label);
                assert_eq!(*slot, Some(s), "parent edge out of sync");
                *slot = Some(rep);
                alive[s] = false;
                merges.push((s, rep));
            }
        }
    }

    let mut start = 0;
    let mut collapsed_start = false;
    let root = &trie.nodes[0].edges;
    if let (None, None, Some(u), None) = (root.zero, root.one, root.uncond, root.end) {
        alive[0] = false;
        start = u;
        collapsed_start = true;
    }

    let (schematic, id_map) = trie.into_schematic(&alive, start);
    let trace = BuildTrace { stage1_state_count, stage2_order: order, merges, collapsed_start, id_map };
    (schematic, trace)
}

/// Validates raw items as a corpus, then constructs.
pub fn construct_items(items: Vec<BitString>) -> Result<(MooreSchematic, BuildTrace), CorpusError> {
    Ok(construct(&Corpus::new(items)?))
}

/// One bottom-up hash-consing pass over an arbitrary acyclic schematic.
/// Returns the reduced machine and the `(removed, representative)` pairs.
/// On `construct` output this finds nothing to merge.
pub fn reduce(d: &MooreSchematic) -> Result<(MooreSchematic, Vec<(StateId, StateId)>), crate::error::GraphError> {
    let order = d.topological_order()?;
    let n = d.len();
    let mut rep: Vec<StateId> = (0..n).collect();
    let mut table: HashMap<MergeKey, StateId> = HashMap::with_capacity(n);
    let mut merges = Vec::new();
    for &id in order.iter().rev() {
        let s = &d.states()[id];
        let canon = Edges {
            zero: s.edges.zero.map(|t| rep[t]),
            one: s.edges.one.map(|t| rep[t]),
            uncond: s.edges.uncond.map(|t| rep[t]),
            end: s.edges.end.map(|t| rep[t]),
        };
        let key = MergeKey::of(s.output, &canon);
        match table.get(&key) {
            Some(&r) if id != d.start() => {
                rep[id] = r;
                merges.push((id, r));
            }
            _ => {
                table.entry(key).or_insert(id);
            }
        }
    }
    let mut new_id = vec![usize::MAX; n];
    let mut states = Vec::new();
    for id in 0..n {
        if rep[id] == id {
            new_id[id] = states.len();
            states.push(d.states()[id].clone());
        }
    }
    let map = |t: Option<StateId>| t.map(|t| new_id[rep[t]]);
    for s in &mut states {
        s.edges = Edges {
            zero: map(s.edges.zero),
            one: map(s.edges.one),
            uncond: map(s.edges.uncond),
            end: map(s.edges.end),
        };
    }
    let start = new_id[rep[d.start()]];
    Ok((MooreSchematic::from_parts(states, start, d.aux().to_vec()), merges))
}
