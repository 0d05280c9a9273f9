use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::FormatError;
use crate::schematic::{Edges, MooreSchematic, OutputSymbol, State, StateId, TransitionLabel};

pub const HEADER: &str = "CCSS-AMM v1";

/// Old ids in canonical order: breadth-first from start, children visited
/// as `0`, `1`, `U`, `E`. Unreachable states follow in ascending id order.
pub fn canonical_order(d: &MooreSchematic) -> Vec<StateId> {
    let n = d.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    if d.start() < n {
        seen[d.start()] = true;
        queue.push_back(d.start());
    }
    while let Some(id) = queue.pop_front() {
        order.push(id);
        for (_, t) in d.states()[id].edges.iter() {
            if t < n && !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    order.extend((0..n).filter(|&id| !seen[id]));
    order
}

/// Canonical text form. Aux bytes, when present, go on an `aux <hex>` line
/// before `start`.
pub fn write_schematic(d: &MooreSchematic) -> String {
    let order = canonical_order(d);
    let mut new_id = vec![0; d.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    let mut out = String::with_capacity(40 * d.len() + 32);
    let _ = writeln!(out, "{HEADER}\nstates {}", d.len());
    for (new, &old) in order.iter().enumerate() {
        let s = &d.states()[old];
        let _ = writeln!(out, "state {new} {} {}", s.output, if s.is_final { 'F' } else { '-' });
    }
    if !d.aux().is_empty() {
        let _ = writeln!(out, "aux {}", hex::encode(d.aux()));
    }
    if d.start() < d.len() {
        let _ = writeln!(out, "start {}", new_id[d.start()]);
    }
    for &old in &order {
        for (label, t) in d.states()[old].edges.iter() {
            let t = new_id.get(t).copied().unwrap_or(t);
            let _ = writeln!(out, "edge {} {} {t}", new_id[old], label.symbol());
        }
    }
    out
}

/// Parses the text form and validates the result. State ids must run
/// `0..count` in order; edge lines may come in any order.
pub fn read_schematic(text: &str) -> Result<MooreSchematic, FormatError> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((_, l)) => return Err(FormatError::Version(l.to_string())),
        None => return Err(FormatError::Version(String::new())),
    }
    let parse_err = |line: usize, message: String| FormatError::Parse { line, message };
    let num = |line: usize, s: &str| -> Result<usize, FormatError> {
        s.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found {s:?}")))
    };
    let (line, l) = lines.next().ok_or_else(|| parse_err(2, "missing states line".into()))?;
    let count = match l.split(' ').collect::<Vec<_>>().as_slice() {
        ["states", n] => num(line, n)?,
        _ => return Err(parse_err(line, format!("expected `states <count>`, found {l:?}"))),
    };
    let mut states = Vec::with_capacity(count);
    let mut start = None;
    let mut aux = Vec::new();
    for (line, l) in lines {
        if l.is_empty() {
            continue;
        }
        let fields: Vec<&str> = l.split(' ').collect();
        match fields.as_slice() {
            ["state", id, output, flag] if states.len() < count => {
                if num(line, id)? != states.len() {
                    return Err(parse_err(line, format!("expected state {}, found {id}", states.len())));
                }
                let output = match *output {
                    "0" => OutputSymbol::BitZero,
                    "1" => OutputSymbol::BitOne,
                    "B" => OutputSymbol::Blank,
                    other => return Err(parse_err(line, format!("bad output symbol {other:?}"))),
                };
                let is_final = match *flag {
                    "F" => true,
                    "-" => false,
                    other => return Err(parse_err(line, format!("bad final flag {other:?}"))),
                };
                states.push(State { id: states.len(), output, edges: Edges::default(), is_final, depth: 0 });
            }
            ["aux", hex] if start.is_none() => {
                aux = hex::decode(hex).map_err(|e| parse_err(line, format!("bad aux bytes: {e}")))?;
            }
            ["start", id] if states.len() == count && start.is_none() => start = Some(num(line, id)?),
            ["edge", from, label, to] if start.is_some() => {
                let from = num(line, from)?;
                let to = num(line, to)?;
                let label = match *label {
                    "0" => TransitionLabel::OnZero,
                    "1" => TransitionLabel::OnOne,
                    "U" => TransitionLabel::Unconditional,
                    "E" => TransitionLabel::OnEnd,
                    other => return Err(parse_err(line, format!("bad edge label {other:?}"))),
                };
                let state =
                    states.get_mut(from).ok_or_else(|| parse_err(line, format!("edge from unknown state {from}")))?;
                let slot = state.edges.slot(label);
                if slot.is_some() {
                    return Err(parse_err(line, format!("state {from} has two {label}-edges")));
                }
                *slot = Some(to);
            }
            _ => return Err(parse_err(line, format!("unexpected line {l:?}"))),
        }
    }
    if states.len() != count {
        return Err(parse_err(count + 2, format!("expected {count} state lines, found {}", states.len())));
    }
    let start = start.ok_or_else(|| parse_err(count + 3, "missing start line".into()))?;
    let d = MooreSchematic::from_parts(states, start, aux);
    let violations = d.validate();
    if violations.is_empty() {
        Ok(d)
    } else {
        Err(FormatError::Invalid(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::construct::construct_items;

    #[test]
    fn empty_string_schematic() {
        let (d, _) = construct_items(vec![bits("")]).unwrap();
        let text = write_schematic(&d);
        assert_eq!(text, "CCSS-AMM v1\nstates 2\nstate 0 B -\nstate 1 B F\nstart 0\nedge 0 E 1\n");
        assert_eq!(write_schematic(&read_schematic(&text).unwrap()), text);
    }

    #[test]
    fn prefix_family_roundtrip() {
        let (d, _) = construct_items(vec![bits("0"), bits("00"), bits("01")]).unwrap();
        let text = write_schematic(&d);
        let back = read_schematic(&text).unwrap();
        assert_eq!(write_schematic(&back), text);
        assert!(text.lines().all(|l| !l.ends_with(' ')));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(read_schematic("CCSS-AMM v2\n"), Err(FormatError::Version("CCSS-AMM v2".into())));
        let dangling = "CCSS-AMM v1\nstates 2\nstate 0 B -\nstate 1 B F\nstart 0\nedge 0 E 5\n";
        assert!(matches!(read_schematic(dangling), Err(FormatError::Invalid(_))));
        let garbled = "CCSS-AMM v1\nstates 1\nstate 0 X F\nstart 0\n";
        assert!(matches!(read_schematic(garbled), Err(FormatError::Parse { line: 3, .. })));
        let twice = "CCSS-AMM v1\nstates 2\nstate 0 B -\nstate 1 B F\nstart 0\nedge 0 E 1\nedge 0 E 1\n";
        assert!(matches!(read_schematic(twice), Err(FormatError::Parse { line: 7, .. })));
    }
}
