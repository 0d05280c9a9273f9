//! Acyclic Moore machine schematics: data model, structural validation, the
//! fixed decoding procedure and the graph utilities the other modules share.
//!
//! A schematic reads a stream code bit by bit. Outputs live on states, not
//! edges. Transitions come in four kinds:
//!
//! * `OnZero` / `OnOne` consume one input bit and must lead to a state
//!   emitting that same bit;
//! * `Unconditional` consumes nothing;
//! * `OnEnd` fires only once the input is exhausted and leads to a final
//!   state.
//!
//! When a state offers both `Unconditional` and `OnEnd`, a remaining input
//! bit is a continue marker and has to be `1`.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::bits::{BitString, StreamCode};
use crate::error::{DecodeError, GraphError};

pub type StateId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OutputSymbol {
    BitZero,
    BitOne,
    Blank,
}

impl OutputSymbol {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            OutputSymbol::BitOne
        } else {
            OutputSymbol::BitZero
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            OutputSymbol::BitZero => Some(false),
            OutputSymbol::BitOne => Some(true),
            OutputSymbol::Blank => None,
        }
    }

    pub fn is_blank(self) -> bool {
        self == OutputSymbol::Blank
    }
}

impl fmt::Display for OutputSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputSymbol::BitZero => "0",
            OutputSymbol::BitOne => "1",
            OutputSymbol::Blank => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TransitionLabel {
    OnZero,
    OnOne,
    OnEnd,
    Unconditional,
}

impl TransitionLabel {
    pub fn on_bit(bit: bool) -> Self {
        if bit {
            TransitionLabel::OnOne
        } else {
            TransitionLabel::OnZero
        }
    }

    pub fn symbol(self) -> char {
        match self {
            TransitionLabel::OnZero => '0',
            TransitionLabel::OnOne => '1',
            TransitionLabel::Unconditional => 'U',
            TransitionLabel::OnEnd => 'E',
        }
    }
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// The allowed combinations of outgoing labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeShape {
    NoEdges,
    EndOnly,
    UncondOnly,
    UncondAndEnd,
    Branch,
    BranchAndEnd,
}

/// Outgoing transitions of one state, at most one per label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Edges {
    pub zero: Option<StateId>,
    pub one: Option<StateId>,
    pub uncond: Option<StateId>,
    pub end: Option<StateId>,
}

impl Edges {
    pub fn get(&self, label: TransitionLabel) -> Option<StateId> {
        match label {
            TransitionLabel::OnZero => self.zero,
            TransitionLabel::OnOne => self.one,
            TransitionLabel::Unconditional => self.uncond,
            TransitionLabel::OnEnd => self.end,
        }
    }

    pub fn slot(&mut self, label: TransitionLabel) -> &mut Option<StateId> {
        match label {
            TransitionLabel::OnZero => &mut self.zero,
            TransitionLabel::OnOne => &mut self.one,
            TransitionLabel::Unconditional => &mut self.uncond,
            TransitionLabel::OnEnd => &mut self.end,
        }
    }

    pub fn on_bit(&self, bit: bool) -> Option<StateId> {
        if bit {
            self.one
        } else {
            self.zero
        }
    }

    /// Present edges in serialization order: `0`, `1`, `U`, `E`.
    pub fn iter(&self) -> impl Iterator<Item = (TransitionLabel, StateId)> {
        [
            (TransitionLabel::OnZero, self.zero),
            (TransitionLabel::OnOne, self.one),
            (TransitionLabel::Unconditional, self.uncond),
            (TransitionLabel::OnEnd, self.end),
        ]
        .into_iter()
        .filter_map(|(label, target)| target.map(|t| (label, t)))
    }

    pub fn is_empty(&self) -> bool {
        self.zero.is_none() && self.one.is_none() && self.uncond.is_none() && self.end.is_none()
    }

    pub fn has_conditional(&self) -> bool {
        self.zero.is_some() || self.one.is_some()
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    /// `None` when the label set is not one of the six allowed combinations.
    pub fn shape(&self) -> Option<EdgeShape> {
        match (self.zero.is_some(), self.one.is_some(), self.uncond.is_some(), self.end.is_some()) {
            (false, false, false, false) => Some(EdgeShape::NoEdges),
            (false, false, false, true) => Some(EdgeShape::EndOnly),
            (false, false, true, false) => Some(EdgeShape::UncondOnly),
            (false, false, true, true) => Some(EdgeShape::UncondAndEnd),
            (true, true, false, false) => Some(EdgeShape::Branch),
            (true, true, false, true) => Some(EdgeShape::BranchAndEnd),
            _ => None,
        }
    }

    fn label_set(&self) -> String {
        let labels: Vec<String> = self.iter().map(|(l, _)| l.to_string()).collect();
        format!("{{{}}}", labels.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub id: StateId,
    pub output: OutputSymbol,
    pub edges: Edges,
    pub is_final: bool,
    /// Breadth-first distance from the start state; `usize::MAX` when the
    /// state is unreachable.
    pub depth: usize,
}

/// An immutable acyclic Moore machine together with its auxiliary output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreSchematic {
    states: Vec<State>,
    start: StateId,
    aux: Vec<u8>,
}

/// One structural defect found by [`MooreSchematic::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingStart { start: StateId },
    IdMismatch { index: usize, id: StateId },
    DanglingEdge { state: StateId, label: TransitionLabel, target: StateId },
    LabelSet { state: StateId, labels: String },
    BranchOutput { state: StateId, label: TransitionLabel, target: StateId },
    EndTarget { state: StateId, target: StateId },
    FinalFlag { state: StateId },
    BlankInterior { state: StateId },
    DeadEnd { state: StateId },
    Cycle { state: StateId },
    Unreachable { state: StateId },
    UncollapsedStart { state: StateId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingStart { start } => write!(f, "start state {start} does not exist"),
            Violation::IdMismatch { index, id } => {
                write!(f, "state at index {index} carries id {id}")
            }
            Violation::DanglingEdge { state, label, target } => {
                write!(f, "state {state}: {label}-edge targets missing state {target}")
            }
            Violation::LabelSet { state, labels } => {
                write!(f, "state {state}: edge labels {labels} are not an allowed combination")
            }
            Violation::BranchOutput { state, label, target } => {
                write!(f, "state {state}: {label}-edge leads to state {target} with a different output")
            }
            Violation::EndTarget { state, target } => {
                write!(f, "state {state}: end edge leads to non-final state {target}")
            }
            Violation::FinalFlag { state } => {
                write!(f, "state {state}: final flag disagrees with blank output and empty edge set")
            }
            Violation::BlankInterior { state } => {
                write!(f, "state {state}: blank output on a state that is neither start nor final")
            }
            Violation::DeadEnd { state } => write!(f, "state {state}: no outgoing edges but not final"),
            Violation::Cycle { state } => write!(f, "state {state} lies on a cycle"),
            Violation::Unreachable { state } => write!(f, "state {state} is unreachable from start"),
            Violation::UncollapsedStart { state } => {
                write!(f, "start state {state} is blank with a single unconditional edge")
            }
        }
    }
}

/// A maximal start-to-final path and the bits emitted along it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub states: Vec<StateId>,
    pub output: BitString,
}

impl MooreSchematic {
    /// Assembles a schematic from raw parts. Ids are reassigned to match
    /// positions and depths are recomputed; nothing is validated.
    pub fn from_parts(mut states: Vec<State>, start: StateId, aux: Vec<u8>) -> Self {
        for (i, s) in states.iter_mut().enumerate() {
            s.id = i;
        }
        let mut d = MooreSchematic { states, start, aux };
        d.recompute_depths();
        d
    }

    fn recompute_depths(&mut self) {
        for s in &mut self.states {
            s.depth = usize::MAX;
        }
        if self.start >= self.states.len() {
            return;
        }
        let mut queue = VecDeque::from([self.start]);
        self.states[self.start].depth = 0;
        while let Some(id) = queue.pop_front() {
            let next = self.states[id].depth + 1;
            let targets: Vec<_> = self.states[id].edges.iter().map(|(_, t)| t).collect();
            for t in targets {
                if let Some(s) = self.states.get_mut(t) {
                    if s.depth == usize::MAX {
                        s.depth = next;
                        queue.push_back(t);
                    }
                }
            }
        }
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> Option<&State> {
        self.states.get(id)
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn aux(&self) -> &[u8] {
        &self.aux
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Number of states emitting a 0 or 1.
    pub fn emitting_state_count(&self) -> usize {
        self.states.iter().filter(|s| !s.output.is_blank()).count()
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states.iter().filter(|s| s.is_final).map(|s| s.id)
    }

    /// Every violated structural invariant, each naming the offending state.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.states.len();
        if self.start >= n {
            out.push(Violation::MissingStart { start: self.start });
            return out;
        }
        for (index, s) in self.states.iter().enumerate() {
            if s.id != index {
                out.push(Violation::IdMismatch { index, id: s.id });
            }
        }
        let mut dangling = false;
        for s in &self.states {
            for (label, target) in s.edges.iter() {
                if target >= n {
                    dangling = true;
                    out.push(Violation::DanglingEdge { state: s.id, label, target });
                }
            }
        }
        if dangling {
            return out;
        }
        for s in &self.states {
            if s.edges.shape().is_none() {
                out.push(Violation::LabelSet { state: s.id, labels: s.edges.label_set() });
            }
            for bit in [false, true] {
                if let Some(t) = s.edges.on_bit(bit) {
                    if self.states[t].output != OutputSymbol::from_bit(bit) {
                        out.push(Violation::BranchOutput {
                            state: s.id,
                            label: TransitionLabel::on_bit(bit),
                            target: t,
                        });
                    }
                }
            }
            if let Some(t) = s.edges.end {
                if !self.states[t].is_final {
                    out.push(Violation::EndTarget { state: s.id, target: t });
                }
            }
            let terminal = s.output.is_blank() && s.edges.is_empty();
            if s.is_final != terminal {
                out.push(Violation::FinalFlag { state: s.id });
            }
            if s.output.is_blank() && s.id != self.start && !s.is_final {
                out.push(Violation::BlankInterior { state: s.id });
            }
            if s.edges.is_empty() && !s.is_final && !(s.id == self.start && terminal) {
                out.push(Violation::DeadEnd { state: s.id });
            }
        }
        let start = &self.states[self.start];
        if start.output.is_blank() && start.edges.shape() == Some(EdgeShape::UncondOnly) {
            out.push(Violation::UncollapsedStart { state: self.start });
        }
        if let Err(GraphError::Cycle(state)) = self.topological_order() {
            out.push(Violation::Cycle { state });
        }
        for s in &self.states {
            if s.depth == usize::MAX {
                out.push(Violation::Unreachable { state: s.id });
            }
        }
        out
    }

    /// Runs the machine on `code` and returns the emitted bits.
    pub fn decode(&self, code: &StreamCode) -> Result<BitString, DecodeError> {
        let input = code.bits();
        let mut pos = 0;
        let mut out = BitString::new();
        let mut id = self.start;
        for _ in 0..=self.states.len() {
            let s = &self.states[id];
            if let Some(b) = s.output.bit() {
                out.push(b);
            }
            if s.edges.is_empty() {
                if pos == input.len() && s.is_final {
                    return Ok(out);
                }
                return Err(DecodeError::TrailingInput { state: id, position: pos });
            }
            let e = &s.edges;
            id = if let Some(b) = input.get(pos) {
                if e.has_conditional() {
                    pos += 1;
                    e.on_bit(b).ok_or(DecodeError::MissingTransition { state: id, position: pos - 1 })?
                } else if let (Some(u), Some(_)) = (e.uncond, e.end) {
                    if !b {
                        return Err(DecodeError::BadMarker { state: id, position: pos });
                    }
                    pos += 1;
                    u
                } else if let Some(u) = e.uncond {
                    u
                } else {
                    return Err(DecodeError::MissingTransition { state: id, position: pos });
                }
            } else if let Some(t) = e.end {
                t
            } else if let (Some(u), false) = (e.uncond, e.has_conditional()) {
                u
            } else {
                return Err(DecodeError::InputExhausted { state: id });
            };
        }
        Err(DecodeError::NoHalt)
    }

    /// Topological order of all states; ties broken by ascending id.
    pub fn topological_order(&self) -> Result<Vec<StateId>, GraphError> {
        let n = self.states.len();
        let mut indegree = vec![0usize; n];
        for s in &self.states {
            for (_, t) in s.edges.iter() {
                if t >= n {
                    return Err(GraphError::UnknownState(t));
                }
                indegree[t] += 1;
            }
        }
        let mut ready: BinaryHeap<Reverse<StateId>> = (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(id)) = ready.pop() {
            order.push(id);
            for (_, t) in self.states[id].edges.iter() {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(Reverse(t));
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(GraphError::Cycle(stuck));
        }
        Ok(order)
    }

    /// Distinct successor ids of `id`, in label order.
    pub fn successors(&self, id: StateId) -> Vec<StateId> {
        let mut out: Vec<StateId> = Vec::with_capacity(4);
        for (_, t) in self.states[id].edges.iter() {
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }

    /// Generated sets for every state, filled bottom-up so shared subgraphs
    /// are expanded once.
    pub fn all_gen_sets(&self) -> Result<Vec<BTreeSet<BitString>>, GraphError> {
        let order = self.topological_order()?;
        let mut sets: Vec<BTreeSet<BitString>> = vec![BTreeSet::new(); self.states.len()];
        for &id in order.iter().rev() {
            sets[id] = self.gen_from_children(id, &sets);
        }
        Ok(sets)
    }

    fn gen_from_children(&self, id: StateId, sets: &[BTreeSet<BitString>]) -> BTreeSet<BitString> {
        let s = &self.states[id];
        if s.edges.is_empty() {
            return BTreeSet::from([BitString::new()]);
        }
        let mut set = BTreeSet::new();
        for t in self.successors(id) {
            for tail in &sets[t] {
                set.insert(match s.output.bit() {
                    Some(b) => tail.prepended(b),
                    None => tail.clone(),
                });
            }
        }
        set
    }

    /// Set of strings emitted from `a` (including its own bit) to any final state.
    pub fn gen_set(&self, a: StateId) -> Result<BTreeSet<BitString>, GraphError> {
        if a >= self.states.len() {
            return Err(GraphError::UnknownState(a));
        }
        let mut memo: Vec<Option<BTreeSet<BitString>>> = vec![None; self.states.len()];
        let mut on_stack = vec![false; self.states.len()];
        // Explicit stack: (state, children expanded?)
        let mut stack = vec![(a, false)];
        while let Some((id, expanded)) = stack.pop() {
            if memo[id].is_some() {
                continue;
            }
            if expanded {
                let children: Vec<_> = self.successors(id);
                let s = &self.states[id];
                let mut set = BTreeSet::new();
                if s.edges.is_empty() {
                    set.insert(BitString::new());
                }
                for t in children {
                    for tail in memo[t].as_ref().expect("child filled") {
                        set.insert(match s.output.bit() {
                            Some(b) => tail.prepended(b),
                            None => tail.clone(),
                        });
                    }
                }
                memo[id] = Some(set);
                on_stack[id] = false;
            } else {
                if on_stack[id] {
                    return Err(GraphError::Cycle(id));
                }
                on_stack[id] = true;
                stack.push((id, true));
                for t in self.successors(id) {
                    if memo[t].is_none() {
                        if on_stack[t] {
                            return Err(GraphError::Cycle(t));
                        }
                        stack.push((t, false));
                    }
                }
            }
        }
        Ok(memo[a].take().expect("root filled"))
    }

    /// All maximal start-to-final paths, in label order (`0`, `1`, `U`, `E`).
    pub fn enumerate_paths(&self) -> Vec<Path> {
        let mut paths = Vec::new();
        let mut states = vec![self.start];
        let mut output = BitString::new();
        self.paths_from(&mut states, &mut output, &mut paths);
        paths
    }

    fn paths_from(&self, states: &mut Vec<StateId>, output: &mut BitString, paths: &mut Vec<Path>) {
        let id = *states.last().expect("non-empty");
        let s = &self.states[id];
        let emitted = s.output.bit();
        if let Some(b) = emitted {
            output.push(b);
        }
        if s.edges.is_empty() {
            paths.push(Path { states: states.clone(), output: output.clone() });
        }
        for (_, t) in s.edges.iter() {
            states.push(t);
            self.paths_from(states, output, paths);
            states.pop();
        }
        if emitted.is_some() {
            output.pop();
        }
    }

    /// Number of maximal paths, saturating at `u128::MAX`.
    pub fn count_paths(&self) -> Result<u128, GraphError> {
        let order = self.topological_order()?;
        let mut counts = vec![0u128; self.states.len()];
        for &id in order.iter().rev() {
            let s = &self.states[id];
            counts[id] = if s.edges.is_empty() {
                1
            } else {
                s.edges.iter().fold(0u128, |acc, (_, t)| acc.saturating_add(counts[t]))
            };
        }
        Ok(counts[self.start])
    }
}

/// Hamming distance, or `None` when the lengths differ.
pub fn hamming(a: &BitString, b: &BitString) -> Option<usize> {
    (a.len() == b.len()).then(|| a.iter().zip(b.iter()).filter(|(x, y)| x != y).count())
}

/// Incremental assembly of hand-built schematics.
#[derive(Debug, Default)]
pub struct SchematicBuilder {
    states: Vec<State>,
}

impl SchematicBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, output: OutputSymbol) -> StateId {
        let id = self.states.len();
        self.states.push(State { id, output, edges: Edges::default(), is_final: false, depth: 0 });
        id
    }

    pub fn add_bit(&mut self, bit: bool) -> StateId {
        self.add_state(OutputSymbol::from_bit(bit))
    }

    pub fn add_final(&mut self) -> StateId {
        let id = self.add_state(OutputSymbol::Blank);
        self.states[id].is_final = true;
        id
    }

    pub fn edge(&mut self, from: StateId, label: TransitionLabel, to: StateId) -> &mut Self {
        *self.states[from].edges.slot(label) = Some(to);
        self
    }

    pub fn build(self, start: StateId) -> MooreSchematic {
        MooreSchematic::from_parts(self.states, start, Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use TransitionLabel::*;

    /// {0, 00, 01}: A(0) start with end, 0 and 1 edges; B, C end edges; shared final.
    fn zero_family() -> MooreSchematic {
        let mut b = SchematicBuilder::new();
        let a = b.add_bit(false);
        let bb = b.add_bit(false);
        let c = b.add_bit(true);
        let f = b.add_final();
        b.edge(a, OnEnd, f).edge(a, OnZero, bb).edge(a, OnOne, c);
        b.edge(bb, OnEnd, f).edge(c, OnEnd, f);
        b.build(a)
    }

    fn chain_101() -> MooreSchematic {
        let mut b = SchematicBuilder::new();
        let s = [b.add_bit(true), b.add_bit(false), b.add_bit(true)];
        let f = b.add_final();
        b.edge(s[0], Unconditional, s[1]).edge(s[1], Unconditional, s[2]).edge(s[2], OnEnd, f);
        b.build(s[0])
    }

    #[test]
    fn single_final_start_is_valid() {
        let mut b = SchematicBuilder::new();
        let f = b.add_final();
        let d = b.build(f);
        assert!(d.validate().is_empty());
        assert_eq!(d.decode(&StreamCode::empty()), Ok(BitString::new()));
    }

    #[test]
    fn branch_into_wrong_output_is_reported() {
        let mut b = SchematicBuilder::new();
        let s0 = b.add_state(OutputSymbol::Blank);
        let x = b.add_bit(true);
        let y = b.add_bit(true);
        let f = b.add_final();
        b.edge(s0, OnZero, x).edge(s0, OnOne, y).edge(x, OnEnd, f).edge(y, OnEnd, f);
        let v = b.build(s0).validate();
        assert_eq!(v, vec![Violation::BranchOutput { state: s0, label: OnZero, target: x }]);
        assert!(v[0].to_string().contains("state 0"));
    }

    #[test]
    fn structural_violations() {
        let mut b = SchematicBuilder::new();
        let s0 = b.add_state(OutputSymbol::Blank);
        let x = b.add_bit(false);
        let y = b.add_bit(true);
        let lone = b.add_bit(true);
        b.edge(s0, Unconditional, x).edge(x, OnZero, x).edge(y, OnEnd, y);
        let v = b.build(s0).validate();
        assert!(v.contains(&Violation::UncollapsedStart { state: s0 }));
        assert!(v.contains(&Violation::LabelSet { state: x, labels: "{0}".into() }));
        assert!(v.contains(&Violation::Cycle { state: x }));
        assert!(v.contains(&Violation::EndTarget { state: y, target: y }));
        assert!(v.contains(&Violation::DeadEnd { state: lone }));
        assert!(v.contains(&Violation::Unreachable { state: lone }));
    }

    #[test]
    fn decode_chain_without_input() {
        let d = chain_101();
        assert!(d.validate().is_empty());
        assert_eq!(d.decode(&StreamCode::empty()), Ok(bits("101")));
        // Unconditional edges are taken without consuming, so a stray bit
        // is left over at the final state.
        assert!(matches!(d.decode(&StreamCode::from(bits("1"))), Err(DecodeError::MissingTransition { .. })));
    }

    #[test]
    fn decode_zero_family() {
        let d = zero_family();
        assert!(d.validate().is_empty());
        assert_eq!(d.decode(&StreamCode::empty()), Ok(bits("0")));
        assert_eq!(d.decode(&StreamCode::from(bits("0"))), Ok(bits("00")));
        assert_eq!(d.decode(&StreamCode::from(bits("1"))), Ok(bits("01")));
        assert!(matches!(
            d.decode(&StreamCode::from(bits("11"))),
            Err(DecodeError::MissingTransition { position: 1, .. })
        ));
    }

    #[test]
    fn continue_marker_must_be_one() {
        // {0, 01}: A(0) with unconditional to B(1) and end.
        let mut b = SchematicBuilder::new();
        let a = b.add_bit(false);
        let bb = b.add_bit(true);
        let f = b.add_final();
        b.edge(a, Unconditional, bb).edge(a, OnEnd, f).edge(bb, OnEnd, f);
        let d = b.build(a);
        assert!(d.validate().is_empty());
        assert_eq!(d.decode(&StreamCode::empty()), Ok(bits("0")));
        assert_eq!(d.decode(&StreamCode::from(bits("1"))), Ok(bits("01")));
        assert_eq!(d.decode(&StreamCode::from(bits("0"))), Err(DecodeError::BadMarker { state: a, position: 0 }));
    }

    #[test]
    fn exhausted_at_branch_without_end() {
        let mut b = SchematicBuilder::new();
        let s0 = b.add_state(OutputSymbol::Blank);
        let x = b.add_bit(false);
        let y = b.add_bit(true);
        let f = b.add_final();
        b.edge(s0, OnZero, x).edge(s0, OnOne, y).edge(x, OnEnd, f).edge(y, OnEnd, f);
        let d = b.build(s0);
        assert_eq!(d.decode(&StreamCode::empty()), Err(DecodeError::InputExhausted { state: s0 }));
    }

    #[test]
    fn gen_sets_and_paths_agree() {
        let d = zero_family();
        let expected: BTreeSet<_> = ["0", "00", "01"].iter().map(|s| bits(s)).collect();
        assert_eq!(d.gen_set(d.start()).unwrap(), expected);
        assert_eq!(d.gen_set(3).unwrap(), BTreeSet::from([BitString::new()]));
        assert_eq!(d.all_gen_sets().unwrap()[0], expected);
        let paths = d.enumerate_paths();
        assert_eq!(paths.len(), 3);
        let outputs: BTreeSet<_> = paths.into_iter().map(|p| p.output).collect();
        assert_eq!(outputs, expected);
        assert_eq!(d.count_paths(), Ok(3));
        assert_eq!(d.gen_set(9), Err(GraphError::UnknownState(9)));
    }

    #[test]
    fn single_chain_has_one_path() {
        let d = chain_101();
        let paths = d.enumerate_paths();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].output, bits("101"));
        assert_eq!(paths[0].states, vec![0, 1, 2, 3]);
    }

    #[test]
    fn hamming_cases() {
        assert_eq!(hamming(&bits("00101"), &bits("00101")), Some(0));
        assert_eq!(hamming(&bits("00001"), &bits("00101")), Some(1));
        assert_eq!(hamming(&bits("0"), &bits("00")), None);
    }

    #[test]
    fn depths_are_bfs_distances() {
        let d = zero_family();
        let depths: Vec<_> = d.states().iter().map(|s| s.depth).collect();
        assert_eq!(depths, vec![0, 1, 1, 1]);
    }
}
