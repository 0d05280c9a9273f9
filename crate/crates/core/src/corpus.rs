use std::collections::HashMap;

use crate::bits::BitString;
use crate::error::CorpusError;

/// An ordered set of distinct bit strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    items: Vec<BitString>,
}

impl Corpus {
    /// Rejects empty input and duplicates, reporting the first repeated pair.
    pub fn new(items: Vec<BitString>) -> Result<Self, CorpusError> {
        if items.is_empty() {
            return Err(CorpusError::Empty);
        }
        let mut seen: HashMap<&BitString, usize> = HashMap::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            if let Some(&first) = seen.get(item) {
                return Err(CorpusError::Duplicate { first, second: i });
            }
            seen.insert(item, i);
        }
        Ok(Corpus { items })
    }

    /// Keeps the first occurrence of each string.
    pub fn deduplicated(items: Vec<BitString>) -> Result<Self, CorpusError> {
        let mut seen = std::collections::HashSet::with_capacity(items.len());
        let items: Vec<_> = items.into_iter().filter(|s| seen.insert(s.clone())).collect();
        Corpus::new(items)
    }

    pub fn items(&self) -> &[BitString] {
        &self.items
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    /// Length of the longest item.
    pub fn z(&self) -> usize {
        self.items.iter().map(BitString::len).max().unwrap_or(0)
    }

    pub fn total_bits(&self) -> usize {
        self.items.iter().map(BitString::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitString> {
        self.items.iter()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.items.contains(s)
    }
}
