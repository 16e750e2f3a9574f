//! Source lists: ordered sequences of distinct byte strings.
//!
//! The list order is the order of the elements as given (rank of the i-th
//! element is `i`, 1-based); no lexicographic sorting is applied.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ListError {
    #[error("list must contain at least one element")]
    Empty,
    #[error("duplicate element at position {0}")]
    Duplicate(usize),
    #[error("blank line at line {0}")]
    BlankLine(usize),
}

/// A linearly ordered list of distinct elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceList {
    elements: Vec<Vec<u8>>,
}

impl SourceList {
    pub fn new(elements: Vec<Vec<u8>>) -> Result<Self, ListError> {
        if elements.is_empty() {
            return Err(ListError::Empty);
        }
        let mut seen = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if seen.insert(e.as_slice(), i).is_some() {
                return Err(ListError::Duplicate(i + 1));
            }
        }
        Ok(SourceList { elements })
    }

    /// Parses the text list format: one element per line, file order is list
    /// order, blank lines are forbidden.
    pub fn from_text(text: &str) -> Result<Self, ListError> {
        let mut elements = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                return Err(ListError::BlankLine(i + 1));
            }
            elements.push(line.as_bytes().to_vec());
        }
        Self::new(elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[Vec<u8>] {
        &self.elements
    }

    /// 1-based rank of `element`, if present.
    pub fn rank_of(&self, element: &[u8]) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e == element)
            .map(|i| i + 1)
    }

    /// Element at 1-based rank `rank`.
    pub fn at_rank(&self, rank: usize) -> &[u8] {
        &self.elements[rank - 1]
    }

    /// Element -> 1-based rank map for repeated lookups.
    pub fn rank_map(&self) -> HashMap<&[u8], usize> {
        self.elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_slice(), i + 1))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicates() {
        assert_eq!(SourceList::new(vec![]), Err(ListError::Empty));
        let dup = vec![b"a".to_vec(), b"b".to_vec(), b"a".to_vec()];
        assert_eq!(SourceList::new(dup), Err(ListError::Duplicate(3)));
    }

    #[test]
    fn text_format() {
        let l = SourceList::from_text("c\na\nb").unwrap();
        assert_eq!(l.len(), 3);
        // file order is list order, not sorted order
        assert_eq!(l.rank_of(b"c"), Some(1));
        assert_eq!(l.rank_of(b"b"), Some(3));
        assert_eq!(l.rank_of(b"x"), None);
        assert_eq!(
            SourceList::from_text("a\n\nb"),
            Err(ListError::BlankLine(2))
        );
        assert_eq!(SourceList::from_text(""), Err(ListError::Empty));
    }
}
