mod common;

use std::collections::HashSet;

use ccss_core::analysis::{check_minimality_conditions, extract_supersequence, is_subsequence, DEFAULT_PREFIX_BUDGET};
use ccss_core::construct::reduce;
use ccss_core::format::{frame_code, read_packed, read_schematic, unframe_code, write_packed, write_schematic};
use ccss_core::{construct, encode, BitString, Corpus, StreamCode};
use common::*;
use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

fn bit_string(max_len: usize) -> impl Strategy<Value = BitString> {
    vec(any::<bool>(), 0..=max_len).prop_map(BitString::from_bits)
}

fn corpus_strategy(max_n: usize, max_len: usize) -> impl Strategy<Value = Corpus> {
    btree_set(bit_string(max_len), 1..=max_n).prop_map(|set| Corpus::new(set.into_iter().collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn roundtrip_and_injective(c in corpus_strategy(40, 24)) {
        let (d, _) = construct(&c);
        prop_assert!(d.validate().is_empty());
        let mut seen = HashSet::new();
        for item in c.iter() {
            let code = encode(&d, d.aux(), item).unwrap();
            prop_assert_eq!(&d.decode(&code).unwrap(), item);
            prop_assert!(code.len() < c.n().max(2));
            prop_assert!(seen.insert(code));
        }
    }

    #[test]
    fn path_count_equals_n(c in corpus_strategy(30, 16)) {
        let (d, _) = construct(&c);
        prop_assert_eq!(d.count_paths().unwrap(), c.n() as u128);
        let outputs: HashSet<String> = oracle_paths(&d).iter().map(|p| path_output(&d, p)).collect();
        let items: HashSet<String> = c.iter().map(|s| s.to_string()).collect();
        prop_assert_eq!(outputs, items);
    }

    #[test]
    fn gen_sets_match_oracle(c in corpus_strategy(12, 8)) {
        let (d, _) = construct(&c);
        let oracle = oracle_gen_sets(&d);
        let lib = d.all_gen_sets().unwrap();
        for (o, l) in oracle.iter().zip(&lib) {
            let l: std::collections::BTreeSet<String> = l.iter().map(|s| s.to_string()).collect();
            prop_assert_eq!(o, &l);
        }
    }

    #[test]
    fn minimality_on_tries_matches_oracle(c in corpus_strategy(10, 6)) {
        let tree = ccss_core::construct_stage1(&c);
        let lib = check_minimality_conditions(&tree, DEFAULT_PREFIX_BUDGET);
        prop_assert_eq!(lib.gen_violations, oracle_gen_violations(&tree));
        prop_assert_eq!(lib.prefix_violations.into_iter().collect::<std::collections::BTreeSet<_>>(), oracle_prefix_violations(&tree));
    }

    #[test]
    fn reduction_is_a_fixed_point(c in corpus_strategy(30, 16)) {
        let (d, _) = construct(&c);
        prop_assert_eq!(reduce(&d).unwrap().1, vec![]);
    }

    #[test]
    fn trace_accounts_for_merges(c in corpus_strategy(30, 16)) {
        let (d, trace) = construct(&c);
        prop_assert_eq!(trace.merges.len(), trace.stage1_state_count - d.len() - trace.collapsed_start as usize);
    }

    #[test]
    fn text_and_packed_roundtrip(c in corpus_strategy(30, 16)) {
        let (d, _) = construct(&c);
        let text = write_schematic(&d);
        let back = read_schematic(&text).unwrap();
        prop_assert_eq!(write_schematic(&back), text.clone());
        let packed = read_packed(&write_packed(&d)).unwrap();
        prop_assert_eq!(write_schematic(&packed), text);
    }

    #[test]
    fn extracted_supersequence_embeds_items(c in corpus_strategy(30, 16)) {
        let (d, _) = construct(&c);
        let s = extract_supersequence(&d, None).unwrap();
        prop_assert_eq!(s.len(), d.emitting_state_count());
        for item in c.iter() {
            prop_assert!(is_subsequence(item, &s));
        }
    }

    #[test]
    fn frames_roundtrip(b in bit_string(300)) {
        let code = StreamCode::from(b);
        prop_assert_eq!(unframe_code(&frame_code(&code)).unwrap(), code);
    }

    #[test]
    fn foreign_strings_are_rejected_or_decode_to_themselves(c in corpus_strategy(20, 10), probe in bit_string(10)) {
        let (d, _) = construct(&c);
        match encode(&d, d.aux(), &probe) {
            Ok(code) => {
                prop_assert!(c.contains(&probe));
                prop_assert_eq!(d.decode(&code).unwrap(), probe);
            }
            Err(_) => prop_assert!(!c.contains(&probe)),
        }
    }
}
