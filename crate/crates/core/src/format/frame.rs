use crate::bits::{BitReader, BitString, BitWriter, StreamCode};
use crate::error::FrameError;

/// LEB128 bit count followed by the bits, most-significant first, with the
/// last byte zero-padded.
pub fn frame_code(code: &StreamCode) -> Vec<u8> {
    let mut out = Vec::with_capacity(10 + code.len().div_ceil(8));
    leb128::write::unsigned(&mut out, code.len() as u64).expect("writing to a Vec cannot fail");
    let mut w = BitWriter::new();
    for b in code.bits().iter() {
        w.write_bit(b);
    }
    out.extend(w.finish());
    out
}

/// Size in bits of the frame for a code of `code_bits` bits.
pub fn framed_len(code_bits: usize) -> usize {
    let mut prefix = 1;
    let mut v = code_bits as u64 >> 7;
    while v > 0 {
        prefix += 1;
        v >>= 7;
    }
    8 * (prefix + code_bits.div_ceil(8))
}

/// Reads one frame from the front of `bytes`, returning the code and the
/// number of bytes consumed.
pub fn read_frame(bytes: &[u8]) -> Result<(StreamCode, usize), FrameError> {
    let mut rest = bytes;
    let count = leb128::read::unsigned(&mut rest).map_err(|e| match e {
        leb128::read::Error::Overflow => FrameError::Overflow,
        leb128::read::Error::IoError(_) => FrameError::Truncated,
    })?;
    let header = bytes.len() - rest.len();
    let count = usize::try_from(count).map_err(|_| FrameError::Overflow)?;
    let body = count.div_ceil(8);
    if rest.len() < body {
        return Err(FrameError::Truncated);
    }
    let mut r = BitReader::new(&rest[..body]);
    let bits: BitString = (0..count).map(|_| r.read_bit().expect("length checked")).collect();
    if !r.padding_is_zero() {
        return Err(FrameError::NonzeroPadding);
    }
    Ok((StreamCode::from(bits), header + body))
}

/// Inverse of [`frame_code`]; the frame must span all of `bytes`.
pub fn unframe_code(bytes: &[u8]) -> Result<StreamCode, FrameError> {
    let (code, used) = read_frame(bytes)?;
    match bytes.len() - used {
        0 => Ok(code),
        extra => Err(FrameError::TrailingBytes(extra)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn code(s: &str) -> StreamCode {
        StreamCode::from(bits(s))
    }

    #[test]
    fn known_frames() {
        assert_eq!(frame_code(&code("")), vec![0x00]);
        assert_eq!(frame_code(&code("1")), vec![0x01, 0x80]);
        assert_eq!(frame_code(&code("011")), vec![0x03, 0x60]);
    }

    #[test]
    fn long_count_uses_two_bytes() {
        let c = StreamCode::from(BitString::from_bits(vec![true; 130]));
        let f = frame_code(&c);
        assert_eq!(&f[..2], &[0x82, 0x01]);
        assert_eq!(f.len() * 8, framed_len(130));
        assert_eq!(unframe_code(&f).unwrap(), c);
    }

    #[test]
    fn errors() {
        assert_eq!(unframe_code(&[]), Err(FrameError::Truncated));
        assert_eq!(unframe_code(&[0x80]), Err(FrameError::Truncated));
        assert_eq!(unframe_code(&[0x09, 0xff]), Err(FrameError::Truncated));
        assert_eq!(unframe_code(&[0x01, 0xc0]), Err(FrameError::NonzeroPadding));
        assert_eq!(unframe_code(&[0x00, 0x00]), Err(FrameError::TrailingBytes(1)));
        let mut huge = vec![0xff; 10];
        huge.push(0x01);
        assert_eq!(unframe_code(&huge), Err(FrameError::Overflow));
    }

    #[test]
    fn read_frame_reports_consumed() {
        let mut bytes = frame_code(&code("011"));
        bytes.extend(frame_code(&code("")));
        let (first, used) = read_frame(&bytes).unwrap();
        assert_eq!((first, used), (code("011"), 2));
        assert_eq!(unframe_code(&bytes[used..]).unwrap(), code(""));
    }
}
