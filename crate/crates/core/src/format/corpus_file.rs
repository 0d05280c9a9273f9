use std::collections::HashMap;
use std::str::FromStr;

use crate::bits::BitString;
use crate::corpus::Corpus;
use crate::error::CorpusReadError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputMode {
    /// One item per line, written as `0`/`1` characters.
    Bitlines,
    /// One item per file, bits taken most-significant first.
    Bytes,
}

impl FromStr for InputMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bitlines" => Ok(InputMode::Bitlines),
            "bytes" => Ok(InputMode::Bytes),
            other => Err(format!("unknown input mode {other:?}")),
        }
    }
}

/// Parses newline-delimited bit strings. An empty line is the empty string.
/// A trailing `\r` on a line is ignored.
pub fn read_bitlines(text: &str, dedupe: bool) -> Result<Corpus, CorpusReadError> {
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let item: BitString = line.parse().map_err(|e: crate::error::ParseBitsError| CorpusReadError::BadChar {
            line: i + 1,
            column: e.position + 1,
            found: e.found,
        })?;
        items.push(item);
    }
    collect(items, dedupe)
}

/// One item per byte buffer. Duplicate positions are reported one-based.
pub fn read_byte_items<B: AsRef<[u8]>>(files: &[B], dedupe: bool) -> Result<Corpus, CorpusReadError> {
    collect(files.iter().map(|f| BitString::from_bytes_msb(f.as_ref())).collect(), dedupe)
}

fn collect(items: Vec<BitString>, dedupe: bool) -> Result<Corpus, CorpusReadError> {
    if items.is_empty() {
        return Err(CorpusReadError::Empty);
    }
    let mut first_seen: HashMap<&BitString, usize> = HashMap::new();
    let mut keep = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        match first_seen.get(item) {
            Some(&first) if !dedupe => return Err(CorpusReadError::Duplicate { first: first + 1, second: i + 1 }),
            Some(_) => {}
            None => {
                first_seen.insert(item, i);
                keep.push(i);
            }
        }
    }
    let mut items = items;
    let kept: Vec<BitString> = if keep.len() == items.len() {
        items
    } else {
        keep.into_iter().map(|i| std::mem::take(&mut items[i])).collect()
    };
    Ok(Corpus::new(kept).expect("items are distinct and non-empty"))
}

/// Bitlines text for `corpus`, one item per line, each line LF-terminated.
pub fn write_bitlines(corpus: &Corpus) -> String {
    let mut out = String::with_capacity(corpus.total_bits() + corpus.n());
    for item in corpus.iter() {
        out.push_str(&item.to_string());
        out.push('\n');
    }
    out
}
