use std::fmt;
use std::ops::{BitAnd, BitOr, BitOrAssign, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Set of edge labels drawn from `1..=128`, stored as a bitset.
///
/// Ordering is by the underlying bit pattern, which is the order used for
/// deterministic enumeration of flats.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelSet(u128);

impl LabelSet {
    pub const MAX_LABEL: usize = 128;
    pub const EMPTY: LabelSet = LabelSet(0);

    pub const fn from_bits(bits: u128) -> Self {
        LabelSet(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// Panics if `label` is outside `1..=128`.
    pub fn singleton(label: usize) -> Self {
        assert!(
            (1..=Self::MAX_LABEL).contains(&label),
            "label {label} out of range"
        );
        LabelSet(1u128 << (label - 1))
    }

    /// All labels `1..=m`.
    pub fn full(m: usize) -> Self {
        assert!(m <= Self::MAX_LABEL);
        if m == Self::MAX_LABEL {
            LabelSet(u128::MAX)
        } else {
            LabelSet((1u128 << m) - 1)
        }
    }

    pub fn try_from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Result<Self> {
        let mut s = LabelSet::EMPTY;
        for l in labels {
            if !(1..=Self::MAX_LABEL).contains(&l) {
                return Err(Error::Parse(format!(
                    "label {l} outside 1..={}",
                    Self::MAX_LABEL
                )));
            }
            s.insert(l);
        }
        Ok(s)
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=Self::MAX_LABEL).contains(&label) && self.0 >> (label - 1) & 1 == 1
    }

    pub fn insert(&mut self, label: usize) {
        *self |= LabelSet::singleton(label);
    }

    pub fn remove(&mut self, label: usize) {
        self.0 &= !LabelSet::singleton(label).0;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: LabelSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min_label(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn max_label(self) -> Option<usize> {
        (self.0 != 0).then(|| 128 - self.0.leading_zeros() as usize)
    }

    /// Labels in increasing order.
    pub fn iter(self) -> LabelIter {
        LabelIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// 0/1 indicator vector of length `m`.
    pub fn indicator(self, m: usize) -> Vec<i64> {
        (1..=m).map(|l| i64::from(self.contains(l))).collect()
    }

    /// Compact rendering: `23` when every label is a single digit,
    /// otherwise comma separated (`9,11`).
    pub fn compact(self, separate: bool) -> String {
        let parts: Vec<String> = self.iter().map(|l| l.to_string()).collect();
        parts.join(if separate { "," } else { "" })
    }
}

pub struct LabelIter(u128);

impl Iterator for LabelIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for LabelIter {}

impl BitOr for LabelSet {
    type Output = LabelSet;
    fn bitor(self, rhs: LabelSet) -> LabelSet {
        LabelSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for LabelSet {
    fn bitor_assign(&mut self, rhs: LabelSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for LabelSet {
    type Output = LabelSet;
    fn bitand(self, rhs: LabelSet) -> LabelSet {
        LabelSet(self.0 & rhs.0)
    }
}

impl Sub for LabelSet {
    type Output = LabelSet;
    fn sub(self, rhs: LabelSet) -> LabelSet {
        LabelSet(self.0 & !rhs.0)
    }
}

impl FromIterator<usize> for LabelSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = LabelSet::EMPTY;
        for l in iter {
            s.insert(l);
        }
        s
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.compact(true))
    }
}

impl Serialize for LabelSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for LabelSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        LabelSet::try_from_labels(v).map_err(serde::de::Error::custom)
    }
}

/// Lexicographic comparison of label sets as sorted label lists.
pub fn lex_cmp(a: LabelSet, b: LabelSet) -> std::cmp::Ordering {
    a.iter().cmp(b.iter())
}
