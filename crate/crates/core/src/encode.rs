//! Encoding: walk the unique path emitting a string and record one bit per
//! junction.

use crate::bits::{BitString, StreamCode};
use crate::corpus::Corpus;
use crate::error::{EncodeError, RejectReason};
use crate::schematic::MooreSchematic;

/// Stream code for `c`. At a branch the branch bit is appended; at a state
/// offering both an unconditional edge and an end edge, continuing costs a
/// `1` marker; a plain unconditional step costs nothing.
///
/// `aux` is the auxiliary construction output, empty for this scheme.
pub fn encode(d: &MooreSchematic, _aux: &[u8], c: &BitString) -> Result<StreamCode, EncodeError> {
    let reject = |position, state, reason| Err(EncodeError { position, state, reason });
    let mut id = d.start();
    let mut pos = 0;
    let start = &d.states()[id];
    if let Some(bit) = start.output.bit() {
        if c.get(0) != Some(bit) {
            return reject(0, id, RejectReason::StartMismatch);
        }
        pos = 1;
    }
    let mut code = BitString::with_capacity(c.len());
    while let Some(b) = c.get(pos) {
        let e = &d.states()[id].edges;
        let next = if e.has_conditional() {
            let next = e.on_bit(b);
            if next.is_some() {
                code.push(b);
            }
            next
        } else {
            let next = e.uncond.filter(|&u| d.states()[u].output.bit() == Some(b));
            if next.is_some() && e.end.is_some() {
                code.push(true);
            }
            next
        };
        match next {
            Some(n) => id = n,
            None => return reject(pos, id, RejectReason::NoMatchingTransition),
        }
        pos += 1;
    }
    if d.states()[id].edges.end.is_none() {
        return reject(pos, id, RejectReason::NoEndTransition);
    }
    Ok(StreamCode::from(code))
}

/// One code per corpus item, in corpus order.
pub fn encode_all(d: &MooreSchematic, corpus: &Corpus) -> Result<Vec<(BitString, StreamCode)>, EncodeError> {
    corpus.iter().map(|item| encode(d, d.aux(), item).map(|code| (item.clone(), code))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::construct::construct;

    fn corpus(items: &[&str]) -> Corpus {
        Corpus::new(items.iter().map(|s| bits(s)).collect()).unwrap()
    }

    #[test]
    fn single_chain_has_empty_code() {
        let c = corpus(&["101"]);
        let (d, _) = construct(&c);
        assert_eq!(encode(&d, &[], &bits("101")), Ok(StreamCode::empty()));
        assert_eq!(encode_all(&d, &c).unwrap(), vec![(bits("101"), StreamCode::empty())]);
    }

    #[test]
    fn prefix_family_codes() {
        let (d, _) = construct(&corpus(&["0", "00", "01"]));
        assert_eq!(encode(&d, &[], &bits("0")).unwrap().to_string(), "");
        assert_eq!(encode(&d, &[], &bits("00")).unwrap().to_string(), "0");
        assert_eq!(encode(&d, &[], &bits("01")).unwrap().to_string(), "1");
        let err = encode(&d, &[], &bits("11")).unwrap_err();
        assert_eq!(err.reason, RejectReason::StartMismatch);
        assert_eq!(err.position, 0);
    }

    #[test]
    fn continue_marker_is_emitted() {
        let c = corpus(&["0", "01"]);
        let (d, _) = construct(&c);
        assert_eq!(encode(&d, &[], &bits("0")).unwrap().to_string(), "");
        assert_eq!(encode(&d, &[], &bits("01")).unwrap().to_string(), "1");
    }

    #[test]
    fn rejection_positions() {
        let (d, _) = construct(&corpus(&["0110", "0111"]));
        let err = encode(&d, &[], &bits("010")).unwrap_err();
        assert_eq!((err.position, err.reason), (2, RejectReason::NoMatchingTransition));
        let err = encode(&d, &[], &bits("011")).unwrap_err();
        assert_eq!((err.position, err.reason), (3, RejectReason::NoEndTransition));
        let err = encode(&d, &[], &bits("01101")).unwrap_err();
        assert_eq!((err.position, err.reason), (4, RejectReason::NoMatchingTransition));
    }

    #[test]
    fn empty_string_codes() {
        let c = corpus(&["", "1", "10"]);
        let (d, _) = construct(&c);
        for (item, code) in encode_all(&d, &c).unwrap() {
            assert_eq!(d.decode(&code).unwrap(), item);
        }
        assert_eq!(encode(&d, &[], &bits("")).unwrap().to_string(), "");
        assert_eq!(encode(&d, &[], &bits("1")).unwrap().to_string(), "1");
        assert_eq!(encode(&d, &[], &bits("10")).unwrap().to_string(), "11");
    }
}
