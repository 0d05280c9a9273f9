use crate::analysis::ceil_log2;
use crate::bits::{BitReader, BitWriter};
use crate::error::FormatError;
use crate::schematic::{EdgeShape, Edges, MooreSchematic, OutputSymbol, State, StateId};

pub const PACKED_MAGIC: &[u8; 4] = b"CCSB";
const VERSION: u8 = 1;

/// Ids in depth-first preorder from start, children visited `0`, `1`, `U`,
/// `E`, so that most edges point at the next id.
fn preorder(d: &MooreSchematic) -> Vec<StateId> {
    let mut seen = vec![false; d.len()];
    let mut order = Vec::with_capacity(d.len());
    let mut stack = vec![d.start()];
    while let Some(id) = stack.pop() {
        if std::mem::replace(&mut seen[id], true) {
            continue;
        }
        order.push(id);
        let targets: Vec<StateId> = d.states()[id].edges.iter().map(|(_, t)| t).collect();
        stack.extend(targets.into_iter().rev().filter(|&t| !seen[t]));
    }
    order
}

fn shape_code(shape: EdgeShape) -> u64 {
    match shape {
        EdgeShape::NoEdges => 0,
        EdgeShape::EndOnly => 1,
        EdgeShape::UncondOnly => 2,
        EdgeShape::UncondAndEnd => 3,
        EdgeShape::Branch => 4,
        EdgeShape::BranchAndEnd => 5,
    }
}

fn output_code(o: OutputSymbol) -> u64 {
    match o {
        OutputSymbol::BitZero => 0,
        OutputSymbol::BitOne => 1,
        OutputSymbol::Blank => 2,
    }
}

fn write_body(d: &MooreSchematic, order: &[StateId], w: &mut BitWriter) {
    let mut new_id = vec![0; d.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    let width = ceil_log2(order.len() as u64);
    for (new, &old) in order.iter().enumerate() {
        let s = &d.states()[old];
        let shape = s.edges.shape().expect("valid schematic");
        w.write_bits(output_code(s.output), 2);
        w.write_bits(shape_code(shape), 3);
        for (_, t) in s.edges.iter() {
            let t = new_id[t];
            if t == new + 1 {
                w.write_bit(true);
            } else {
                w.write_bit(false);
                w.write_bits(t as u64, width);
            }
        }
    }
}

/// Compact binary form: magic, version byte, LEB128 state count, LEB128 aux
/// length and aux bytes, then a bit stream with per state a 2-bit output,
/// a 3-bit edge shape, and per edge either a `1` (target is the next id) or
/// a `0` followed by the target id in `⌈log₂ count⌉` bits.
///
/// Panics if `d` fails validation.
pub fn write_packed(d: &MooreSchematic) -> Vec<u8> {
    assert!(d.validate().is_empty(), "write_packed needs a valid schematic");
    let order = preorder(d);
    let mut out = PACKED_MAGIC.to_vec();
    out.push(VERSION);
    leb128::write::unsigned(&mut out, order.len() as u64).expect("Vec write");
    leb128::write::unsigned(&mut out, d.aux().len() as u64).expect("Vec write");
    out.extend_from_slice(d.aux());
    let mut w = BitWriter::new();
    write_body(d, &order, &mut w);
    out.extend(w.finish());
    out
}

/// Exact size of [`write_packed`] output in bits, before padding the final
/// byte.
pub fn packed_bit_len(d: &MooreSchematic) -> usize {
    let order = preorder(d);
    let mut header = Vec::new();
    leb128::write::unsigned(&mut header, order.len() as u64).expect("Vec write");
    leb128::write::unsigned(&mut header, d.aux().len() as u64).expect("Vec write");
    let mut w = BitWriter::new();
    write_body(d, &order, &mut w);
    8 * (PACKED_MAGIC.len() + 1 + header.len() + d.aux().len()) + w.bit_len()
}

pub fn read_packed(bytes: &[u8]) -> Result<MooreSchematic, FormatError> {
    let err = |message: &str| FormatError::Parse { line: 0, message: message.to_string() };
    if bytes.len() < 5 || &bytes[..4] != PACKED_MAGIC {
        return Err(FormatError::Version("missing packed magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(FormatError::Version(format!("packed version {}", bytes[4])));
    }
    let mut rest = &bytes[5..];
    let count = leb128::read::unsigned(&mut rest).map_err(|_| err("bad state count"))? as usize;
    let aux_len = leb128::read::unsigned(&mut rest).map_err(|_| err("bad aux length"))? as usize;
    if rest.len() < aux_len {
        return Err(err("truncated aux bytes"));
    }
    let aux = rest[..aux_len].to_vec();
    let mut r = BitReader::new(&rest[aux_len..]);
    let width = ceil_log2(count as u64);
    let mut states = Vec::with_capacity(count.min(bytes.len() * 8));
    for id in 0..count {
        let truncated = || err("truncated state stream");
        let output = match r.read_bits(2).ok_or_else(truncated)? {
            0 => OutputSymbol::BitZero,
            1 => OutputSymbol::BitOne,
            2 => OutputSymbol::Blank,
            _ => return Err(err("bad output code")),
        };
        let (cond, uncond, end) = match r.read_bits(3).ok_or_else(truncated)? {
            0 => (false, false, false),
            1 => (false, false, true),
            2 => (false, true, false),
            3 => (false, true, true),
            4 => (true, false, false),
            5 => (true, false, true),
            _ => return Err(err("bad shape code")),
        };
        let mut target = || -> Result<Option<StateId>, FormatError> {
            if r.read_bit().ok_or_else(truncated)? {
                Ok(Some(id + 1))
            } else {
                Ok(Some(r.read_bits(width).ok_or_else(truncated)? as StateId))
            }
        };
        let mut edges = Edges::default();
        if cond {
            edges.zero = target()?;
            edges.one = target()?;
        }
        if uncond {
            edges.uncond = target()?;
        }
        if end {
            edges.end = target()?;
        }
        let is_final = output.is_blank() && edges.is_empty();
        states.push(State { id, output, edges, is_final, depth: 0 });
    }
    if !r.padding_is_zero() {
        return Err(err("nonzero padding"));
    }
    if rest.len() - aux_len != r.position().div_ceil(8) {
        return Err(err("trailing bytes after state stream"));
    }
    let d = MooreSchematic::from_parts(states, 0, aux);
    let violations = d.validate();
    if violations.is_empty() {
        Ok(d)
    } else {
        Err(FormatError::Invalid(violations))
    }
}
