//! Fixtures and reference oracles shared by the integration tests. The
//! oracles here deliberately avoid the library's own analysis routines.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use ccss_core::bits::bits;
use ccss_core::schematic::{MooreSchematic, SchematicBuilder, StateId, TransitionLabel::*};
use ccss_core::{BitString, Corpus};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const VOWELS: [(&str, &str); 5] = [("a", "00001"), ("e", "00101"), ("i", "01001"), ("o", "01111"), ("u", "10101")];

pub fn vowels() -> Corpus {
    Corpus::new(VOWELS.iter().map(|(_, s)| bits(s)).collect()).unwrap()
}

pub fn corpus(items: &[&str]) -> Corpus {
    Corpus::new(items.iter().map(|s| bits(s)).collect()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bits(rng: &mut impl Rng, len: usize) -> BitString {
    (0..len).map(|_| rng.gen::<bool>()).collect()
}

/// `n` distinct strings with lengths drawn from `lengths`.
pub fn random_corpus(rng: &mut impl Rng, n: usize, lengths: std::ops::RangeInclusive<usize>) -> Corpus {
    let mut seen = BTreeSet::new();
    let mut items = Vec::with_capacity(n);
    while items.len() < n {
        let len = rng.gen_range(lengths.clone());
        let s = random_bits(rng, len);
        if seen.insert(s.clone()) {
            items.push(s);
        }
    }
    Corpus::new(items).unwrap()
}

/// The shared randomized suite: `count` corpora, n uniform in [1, 200],
/// item lengths uniform in [0, 64].
pub fn suite(count: usize, seed: u64) -> Vec<Corpus> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=200);
            random_corpus(&mut r, n, 0..=64)
        })
        .collect()
}

pub const SUITE_SEED: u64 = 0x5eed_c0de;

/// Hand-merged nine-bit-state variant of the vowel schematic that still
/// generates every vowel but admits extra strings, pushing `o` to a 5-bit
/// code.
pub fn merged_vowel_variant() -> MooreSchematic {
    let mut b = SchematicBuilder::new();
    let s = b.add_state(ccss_core::OutputSymbol::Blank);
    let a = b.add_bit(false);
    let r = b.add_bit(true);
    let bb = b.add_bit(false);
    let k = b.add_bit(true);
    let x4 = b.add_bit(false);
    let p = b.add_bit(true);
    let x2 = b.add_bit(false);
    let x1 = b.add_bit(true);
    let r2 = b.add_bit(false);
    let f = b.add_final();
    b.edge(s, OnZero, a).edge(s, OnOne, r);
    b.edge(a, OnZero, bb).edge(a, OnOne, k);
    b.edge(bb, OnZero, x4).edge(bb, OnOne, p);
    b.edge(k, OnZero, x4).edge(k, OnOne, r);
    b.edge(x4, Unconditional, x2);
    b.edge(x2, Unconditional, x1);
    b.edge(x1, OnEnd, f);
    b.edge(p, OnZero, x2).edge(p, OnOne, x1);
    b.edge(r, OnZero, r2).edge(r, OnOne, p);
    b.edge(r2, Unconditional, p);
    b.build(s)
}

/// Every string generated from each state, by plain recursion over edges.
pub fn oracle_gen_sets(d: &MooreSchematic) -> Vec<BTreeSet<String>> {
    fn walk(d: &MooreSchematic, id: StateId, memo: &mut HashMap<StateId, BTreeSet<String>>) -> BTreeSet<String> {
        if let Some(set) = memo.get(&id) {
            return set.clone();
        }
        let s = &d.states()[id];
        let head = match s.output.bit() {
            Some(true) => "1",
            Some(false) => "0",
            None => "",
        };
        let mut set = BTreeSet::new();
        let targets: Vec<StateId> = s.edges.iter().map(|(_, t)| t).collect();
        if targets.is_empty() {
            set.insert(head.to_string());
        }
        for t in targets {
            for tail in walk(d, t, memo) {
                set.insert(format!("{head}{tail}"));
            }
        }
        memo.insert(id, set.clone());
        set
    }
    let mut memo = HashMap::new();
    (0..d.len()).map(|id| walk(d, id, &mut memo)).collect()
}

/// Pairs of distinct states with identical generated sets.
pub fn oracle_gen_violations(d: &MooreSchematic) -> Vec<(StateId, StateId)> {
    let mut groups: BTreeMap<BTreeSet<String>, Vec<StateId>> = BTreeMap::new();
    for (id, set) in oracle_gen_sets(d).into_iter().enumerate() {
        groups.entry(set).or_default().push(id);
    }
    let mut out = Vec::new();
    for ids in groups.values() {
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                out.push((ids[i], ids[j]));
            }
        }
    }
    out.sort_unstable();
    out
}

/// All root paths as state sequences, by recursion.
pub fn oracle_paths(d: &MooreSchematic) -> Vec<Vec<StateId>> {
    fn walk(d: &MooreSchematic, path: &mut Vec<StateId>, out: &mut Vec<Vec<StateId>>) {
        let id = *path.last().unwrap();
        let targets: Vec<StateId> = d.states()[id].edges.iter().map(|(_, t)| t).collect();
        if targets.is_empty() {
            out.push(path.clone());
        }
        for t in targets {
            path.push(t);
            walk(d, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(d, &mut vec![d.start()], &mut out);
    out
}

/// Pairs of distinct states of the same kind (bit, blank start, final)
/// reached by root paths with identical output.
pub fn oracle_prefix_violations(d: &MooreSchematic) -> BTreeSet<(StateId, StateId)> {
    let mut reached: BTreeMap<(String, bool, bool), BTreeSet<StateId>> = BTreeMap::new();
    for path in oracle_paths(d) {
        let mut out = String::new();
        for &id in &path {
            let s = &d.states()[id];
            if let Some(b) = s.output.bit() {
                out.push(if b { '1' } else { '0' });
            }
            reached.entry((out.clone(), s.output.is_blank(), s.is_final)).or_default().insert(id);
        }
    }
    let mut pairs = BTreeSet::new();
    for ids in reached.values() {
        let ids: Vec<_> = ids.iter().copied().collect();
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                pairs.insert((ids[i], ids[j]));
            }
        }
    }
    pairs
}

/// Output of a path, as a `0`/`1` string.
pub fn path_output(d: &MooreSchematic, path: &[StateId]) -> String {
    path.iter().filter_map(|&id| d.states()[id].output.bit()).map(|b| if b { '1' } else { '0' }).collect()
}

/// Code bits spent along `path`: a branch bit per conditional step, a marker
/// per unconditional step taken where an end edge was also offered.
pub fn oracle_code_len(d: &MooreSchematic, path: &[StateId]) -> usize {
    path.windows(2)
        .filter(|w| {
            let e = &d.states()[w[0]].edges;
            let conditional = e.zero == Some(w[1]) || e.one == Some(w[1]);
            let marked = e.uncond == Some(w[1]) && e.end.is_some();
            conditional || marked
        })
        .count()
}

/// Greedy left-to-right subsequence test over characters.
pub fn oracle_is_subsequence(needle: &str, hay: &str) -> bool {
    let mut it = hay.chars();
    needle.chars().all(|c| it.by_ref().any(|h| h == c))
}

/// In-degree of every state.
pub fn in_degrees(d: &MooreSchematic) -> Vec<usize> {
    let mut deg = vec![0; d.len()];
    for s in d.states() {
        for (_, t) in s.edges.iter() {
            deg[t] += 1;
        }
    }
    deg
}

pub fn ceil_log2(n: usize) -> usize {
    let mut bits = 0;
    while (1usize << bits) < n {
        bits += 1;
    }
    bits
}
