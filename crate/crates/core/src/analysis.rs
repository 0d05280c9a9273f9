//! Measurement of schematics against a corpus: code lengths, reconstruction
//! error, the two minimality conditions, and supersequence extraction.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::bits::BitString;
use crate::corpus::Corpus;
use crate::encode::encode;
use crate::error::{CorpusError, GraphError};
use crate::schematic::{hamming, MooreSchematic, StateId};

/// `⌈log₂ n⌉`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Smallest maximum code length any lossless scheme can reach for `n`
/// strings: `log₂(n + 1) − 1`.
pub fn code_length_lower_bound(n: usize) -> f64 {
    ((n as f64) + 1.0).log2() - 1.0
}

/// `⌈log₂ n⌉ − (log₂(n + 1) − 1)`.
pub fn optimality_gap(n: usize) -> f64 {
    ceil_log2(n as u64) as f64 - code_length_lower_bound(n)
}

/// A corpus item that did not survive encode-then-decode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemFailure {
    pub index: usize,
    pub item: BitString,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub z: usize,
    pub schematic_states: usize,
    pub emitting_states: usize,
    pub path_count: u64,
    pub max_code_len: usize,
    /// Code-length target the scheme is held to, `⌈log₂ n⌉` by default.
    pub code_len_budget: usize,
    pub code_len_lower_bound: f64,
    /// Largest relative Hamming error; `None` if any item failed outright.
    pub epsilon_measured: Option<f64>,
    pub failures: Vec<ItemFailure>,
    pub minimality_gen_violations: Vec<(StateId, StateId)>,
    pub minimality_prefix_violations: Vec<(StateId, StateId)>,
    pub gen_check_complete: bool,
    pub prefix_check_complete: bool,
}

impl VerificationReport {
    pub fn compression_holds(&self) -> bool {
        self.max_code_len <= self.code_len_budget
    }

    pub fn correctness_holds(&self) -> bool {
        self.failures.is_empty() && self.epsilon_measured == Some(0.0)
    }

    pub fn minimality_holds(&self) -> bool {
        self.minimality_gen_violations.is_empty() && self.minimality_prefix_violations.is_empty()
    }

    pub fn paths_match_corpus(&self) -> bool {
        self.path_count == self.n as u64
    }
}

/// Measures `d` against `corpus` with the default code-length budget.
pub fn verify(d: &MooreSchematic, corpus: &Corpus) -> VerificationReport {
    verify_with_budget(d, corpus, ceil_log2(corpus.n() as u64) as usize, DEFAULT_PREFIX_BUDGET)
}

pub fn verify_with_budget(
    d: &MooreSchematic,
    corpus: &Corpus,
    code_len_budget: usize,
    prefix_budget: usize,
) -> VerificationReport {
    let mut max_code_len = 0;
    let mut epsilon: f64 = 0.0;
    let mut failures = Vec::new();
    for (index, item) in corpus.iter().enumerate() {
        let fail = |reason: String| ItemFailure { index, item: item.clone(), reason };
        let code = match encode(d, d.aux(), item) {
            Ok(code) => code,
            Err(e) => {
                failures.push(fail(e.to_string()));
                continue;
            }
        };
        max_code_len = max_code_len.max(code.len());
        match d.decode(&code).map(|out| hamming(&out, item)) {
            Ok(Some(0)) => {}
            Ok(Some(h)) => epsilon = epsilon.max(h as f64 / item.len() as f64),
            Ok(None) => failures.push(fail("decoded length differs".into())),
            Err(e) => failures.push(fail(e.to_string())),
        }
    }
    let minimality = check_minimality_conditions(d, prefix_budget);
    let path_count = d.count_paths().map(|c| u64::try_from(c).unwrap_or(u64::MAX)).unwrap_or(0);
    VerificationReport {
        n: corpus.n(),
        z: corpus.z(),
        schematic_states: d.len(),
        emitting_states: d.emitting_state_count(),
        path_count,
        max_code_len,
        code_len_budget,
        code_len_lower_bound: code_length_lower_bound(corpus.n()),
        epsilon_measured: failures.is_empty().then_some(epsilon),
        failures,
        minimality_gen_violations: minimality.gen_violations,
        minimality_prefix_violations: minimality.prefix_violations,
        gen_check_complete: minimality.gen_check_complete,
        prefix_check_complete: minimality.prefix_check_complete,
    }
}

/// Default cap on `(state, prefix)` pairs explored by the prefix check.
pub const DEFAULT_PREFIX_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MinimalityReport {
    /// Unordered pairs of distinct states with equal generated sets.
    pub gen_violations: Vec<(StateId, StateId)>,
    /// Pairs of distinct states reachable from start by equal output.
    pub prefix_violations: Vec<(StateId, StateId)>,
    /// False when generated sets were too large to materialise.
    pub gen_check_complete: bool,
    /// False when the prefix walk hit its budget before finishing.
    pub prefix_check_complete: bool,
}

/// Cap on the total bits held by materialised generated sets.
pub const GEN_SET_BUDGET: u128 = 1 << 26;

/// Upper estimate of the bits needed to hold every generated set.
fn gen_set_footprint(d: &MooreSchematic) -> Option<u128> {
    let order = d.topological_order().ok()?;
    let mut paths = vec![0u128; d.len()];
    let mut longest = vec![0u128; d.len()];
    let mut total = 0u128;
    for &id in order.iter().rev() {
        let s = &d.states()[id];
        let own = s.output.bit().is_some() as u128;
        if s.edges.is_empty() {
            paths[id] = 1;
        }
        for (_, t) in s.edges.iter() {
            paths[id] = paths[id].saturating_add(paths[t]);
            longest[id] = longest[id].max(longest[t]);
        }
        longest[id] += own;
        total = total.saturating_add(paths[id].saturating_mul(longest[id] + 1));
    }
    Some(total)
}

/// Checks both minimality conditions directly from generated sets and
/// root-path outputs. Cyclic input yields no gen violations and an
/// incomplete prefix check.
pub fn check_minimality_conditions(d: &MooreSchematic, prefix_budget: usize) -> MinimalityReport {
    let gen_check_complete = gen_set_footprint(d).is_some_and(|bits| bits <= GEN_SET_BUDGET);
    let sets = if gen_check_complete { d.all_gen_sets() } else { Err(GraphError::Cycle(d.start())) };
    let gen_violations = match sets {
        Ok(sets) => {
            let mut groups: HashMap<&BTreeSet<BitString>, Vec<StateId>> = HashMap::new();
            for (id, set) in sets.iter().enumerate() {
                groups.entry(set).or_default().push(id);
            }
            let mut pairs: Vec<(StateId, StateId)> = groups
                .values()
                .flat_map(|ids| {
                    ids.iter().enumerate().flat_map(move |(i, &a)| ids[i + 1..].iter().map(move |&b| (a, b)))
                })
                .collect();
            pairs.sort_unstable();
            pairs
        }
        Err(_) => Vec::new(),
    };
    let (prefix_violations, prefix_check_complete) = prefix_collisions(d, prefix_budget);
    MinimalityReport { gen_violations, prefix_violations, gen_check_complete, prefix_check_complete }
}

/// Walks every root path, mapping each emitted prefix to the state reached.
/// Bit, blank start and final states are keyed apart, so a final state never
/// collides with the state that emitted the string's last bit, nor with a
/// blank start when the empty string is in the corpus.
fn prefix_collisions(d: &MooreSchematic, budget: usize) -> (Vec<(StateId, StateId)>, bool) {
    if d.topological_order().is_err() {
        return (Vec::new(), false);
    }
    let mut seen: HashMap<(BitString, bool, bool), StateId> = HashMap::new();
    let mut violations = BTreeSet::new();
    let mut visits = 0usize;
    let mut stack: Vec<(StateId, BitString)> = vec![(d.start(), BitString::new())];
    while let Some((id, mut prefix)) = stack.pop() {
        visits += 1;
        if visits > budget {
            return (violations.into_iter().collect(), false);
        }
        let s = &d.states()[id];
        if let Some(b) = s.output.bit() {
            prefix.push(b);
        }
        let key = (prefix.clone(), s.output.is_blank(), s.is_final);
        match seen.get(&key) {
            Some(&other) if other != id => {
                violations.insert((other.min(id), other.max(id)));
            }
            Some(_) => {}
            None => {
                seen.insert(key, id);
            }
        }
        for t in d.successors(id) {
            stack.push((t, prefix.clone()));
        }
    }
    (violations.into_iter().collect(), true)
}

/// Concatenates the bits of emitting states in topological order (ties by
/// ascending id), optionally restricted to a subset of states. The result
/// is a common supersequence of every string whose path lies in the subset;
/// it is not claimed to be shortest.
pub fn extract_supersequence(
    d: &MooreSchematic,
    restrict_to: Option<&BTreeSet<StateId>>,
) -> Result<BitString, GraphError> {
    let order = d.topological_order()?;
    Ok(order
        .into_iter()
        .filter(|id| restrict_to.is_none_or(|set| set.contains(id)))
        .filter_map(|id| d.states()[id].output.bit())
        .collect())
}

/// States on the output paths of `strings`. Bits that leave the machine end
/// that string's walk.
pub fn states_on_paths(d: &MooreSchematic, strings: &[BitString]) -> BTreeSet<StateId> {
    let mut out = BTreeSet::new();
    for s in strings {
        let mut id = d.start();
        out.insert(id);
        let mut bits = s.iter().peekable();
        if let Some(b) = d.states()[id].output.bit() {
            if bits.next() != Some(b) {
                continue;
            }
        }
        for b in bits {
            let next = d.successors(id).into_iter().find(|&t| d.states()[t].output.bit() == Some(b));
            match next {
                Some(t) => {
                    id = t;
                    out.insert(t);
                }
                None => break,
            }
        }
        if let Some(f) = d.states()[id].edges.end {
            out.insert(f);
        }
    }
    out
}

/// Two-pointer subsequence test.
pub fn is_subsequence(needle: &BitString, haystack: &BitString) -> bool {
    let mut hay = haystack.iter();
    needle.iter().all(|b| hay.any(|h| h == b))
}

/// Majority-merge: repeatedly emit the bit that heads the most unfinished
/// strings (ties go to 0) and advance every string headed by it.
pub fn greedy_scs(strings: &[BitString]) -> BitString {
    let mut heads = vec![0usize; strings.len()];
    let mut out = BitString::new();
    loop {
        let (mut zeros, mut ones) = (0usize, 0usize);
        for (s, &h) in strings.iter().zip(&heads) {
            match s.get(h) {
                Some(false) => zeros += 1,
                Some(true) => ones += 1,
                None => {}
            }
        }
        if zeros + ones == 0 {
            return out;
        }
        let bit = ones > zeros;
        out.push(bit);
        for (s, h) in strings.iter().zip(heads.iter_mut()) {
            if s.get(*h) == Some(bit) {
                *h += 1;
            }
        }
    }
}

/// All-zero padding string of length `⌈β(z·log₂Σ|cᵢ| + 1)⌉`, the filler used
/// when reducing bounded-code minimisation to supersequence approximation.
/// Fixture only; nothing here depends on it being optimal.
pub fn padding_string(corpus: &Corpus, beta: f64) -> BitString {
    let total = corpus.total_bits().max(1) as f64;
    let len = (beta * (corpus.z() as f64 * total.log2() + 1.0)).ceil() as usize;
    BitString::from_bits(vec![false; len])
}

/// `corpus` plus its padding string.
pub fn padded_corpus(corpus: &Corpus, beta: f64) -> Result<Corpus, CorpusError> {
    let mut items = corpus.items().to_vec();
    items.push(padding_string(corpus, beta));
    Corpus::new(items)
}
