mod common;

use ccss_core::analysis::{extract_supersequence, greedy_scs, verify};
use ccss_core::bits::bits;
use ccss_core::construct::{construct_items, reduce};
use ccss_core::error::{DecodeError, RejectReason};
use ccss_core::format::{frame_code, read_packed, read_schematic, write_packed, write_schematic};
use ccss_core::partition::{schematic_to_instance, tau_cost};
use ccss_core::{construct, encode, StreamCode};
use common::*;

#[test]
fn vowel_structure() {
    let c = vowels();
    let (d, trace) = construct(&c);
    assert!(d.validate().is_empty());
    assert_eq!(d.len(), 13);
    assert_eq!(d.emitting_state_count(), 11);
    assert_eq!(d.final_states().count(), 1);
    let finals = 1;
    assert_eq!(
        trace.merges.len(),
        trace.stage1_state_count - finals - d.len() + finals - trace.collapsed_start as usize
    );
    assert!(!trace.collapsed_start);
    let text = write_schematic(&d);
    assert_eq!(text.lines().filter(|l| l.starts_with("state ")).count(), 13);
    assert_eq!(read_packed(&write_packed(&d)).map(|back| write_schematic(&back)), Ok(text));
}

#[test]
fn vowel_codes_decode() {
    let (d, _) = construct(&vowels());
    for (_, s) in VOWELS {
        let code = encode(&d, d.aux(), &bits(s)).unwrap();
        assert_eq!(d.decode(&code).unwrap(), bits(s));
    }
    let u = encode(&d, d.aux(), &bits("10101")).unwrap();
    assert_eq!(frame_code(&u), vec![0x01, 0x80]);
    let err = encode(&d, d.aux(), &bits("10100")).unwrap_err();
    assert_eq!(err.reason, RejectReason::NoMatchingTransition);
    assert_eq!(err.position, 4);
    assert!(matches!(d.decode(&StreamCode::from(bits("0000"))), Err(DecodeError::MissingTransition { .. })));
    assert!(matches!(d.decode(&StreamCode::from(bits("00"))), Err(DecodeError::InputExhausted { .. })));
}

#[test]
fn vowel_supersequences() {
    let c = vowels();
    let (d, _) = construct(&c);
    let s = extract_supersequence(&d, None).unwrap();
    assert_eq!(s.len(), 11);
    let g = greedy_scs(c.items());
    assert!(g.len() <= s.len());
}

#[test]
fn vowel_partition_instance() {
    let (d, _) = construct(&vowels());
    let inst = schematic_to_instance(&d, 3).unwrap();
    assert_eq!(inst.node_count(), 12);
    assert_eq!(inst.paths().len(), 5);
    assert_eq!(tau_cost(&inst, &inst.identity_partitioning()).unwrap(), 3);
}

#[test]
fn staircase_exceeds_log_bound() {
    // Five strings, yet every extra leading zero adds a junction.
    let c = corpus(&["1", "01", "001", "0001", "00001"]);
    let (d, _) = construct(&c);
    let r = verify(&d, &c);
    assert!(r.correctness_holds());
    assert_eq!(r.max_code_len, 4);
    assert_eq!(r.code_len_budget, 3);
    assert!(!r.compression_holds());
    assert!(r.max_code_len < c.n());
}

#[test]
fn sixteen_strings_of_twelve_bits() {
    let mut r = rng(16);
    let c = random_corpus(&mut r, 16, 12..=12);
    let (d, _) = construct(&c);
    let report = verify(&d, &c);
    assert!(report.correctness_holds() && report.minimality_holds());
    assert!(report.max_code_len <= 15);
    assert!(report.max_code_len >= 4);
}

#[test]
fn merged_variant_analysis() {
    let d = merged_vowel_variant();
    let r = verify(&d, &vowels());
    assert!(r.correctness_holds());
    assert_eq!(r.max_code_len, 5);
    let codes: Vec<String> = VOWELS.iter().map(|(_, s)| encode(&d, d.aux(), &bits(s)).unwrap().to_string()).collect();
    assert_eq!(codes, ["000", "0010", "010", "01111", "100"]);
    assert_eq!(r.path_count, 12);
    assert!(r.minimality_gen_violations.is_empty());
}

#[test]
fn small_schematic_texts() {
    let (d, trace) = construct_items(vec![bits("101")]).unwrap();
    assert!(trace.collapsed_start);
    assert_eq!(
        write_schematic(&d),
        "CCSS-AMM v1\nstates 4\nstate 0 1 -\nstate 1 0 -\nstate 2 1 -\nstate 3 B F\nstart 0\n\
         edge 0 U 1\nedge 1 U 2\nedge 2 E 3\n"
    );
    let (d, _) = construct_items(vec![bits("0"), bits("00"), bits("01")]).unwrap();
    let back = read_schematic(&write_schematic(&d)).unwrap();
    assert_eq!(reduce(&back).unwrap().1, vec![]);
}

#[test]
fn verify_reports_rejections() {
    let (d, _) = construct(&vowels());
    let other = corpus(&["00001", "11111"]);
    let r = verify(&d, &other);
    assert_eq!(r.epsilon_measured, None);
    assert_eq!(r.failures.len(), 1);
    assert_eq!(r.failures[0].index, 1);
}
