//! Subsets of the color palette `[r] = {1, ..., r}` as fixed-width bitmasks.
//!
//! These are the index sets `R` of the distributions `a(R)`, `b(R)`: the set
//! of colors appearing in a column or row. Color `i` lives at bit `i-1`.
//! Four 64-bit words cap the palette at 256 colors, which covers every
//! construction this crate builds (the universal family is exercised up to
//! `r = 200`).

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

pub const MAX_COLORS: u16 = 256;
const WORDS: usize = (MAX_COLORS as usize) / 64;

/// A subset of `{1, ..., r}`. Two sets are only comparable/combinable when
/// they share the same `r`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColorSet {
    r: u16,
    words: [u64; WORDS],
}

impl ColorSet {
    /// The empty subset of `[r]`. Panics if `r` is 0 or above `MAX_COLORS`.
    pub fn empty(r: u16) -> Self {
        assert!(
            (1..=MAX_COLORS).contains(&r),
            "palette size {r} outside 1..={MAX_COLORS}"
        );
        ColorSet {
            r,
            words: [0; WORDS],
        }
    }

    /// `{1, ..., r}` itself.
    pub fn full(r: u16) -> Self {
        let mut s = ColorSet::empty(r);
        for i in 1..=r {
            s.insert(i);
        }
        s
    }

    pub fn singleton(r: u16, color: u16) -> Self {
        let mut s = ColorSet::empty(r);
        s.insert(color);
        s
    }

    /// Build from an iterator of colors; errors on out-of-range colors
    /// (the parser path). In-code construction uses `insert`.
    pub fn try_from_colors(r: u16, colors: impl IntoIterator<Item = u16>) -> Result<Self> {
        if r == 0 || r > MAX_COLORS {
            return Err(Error::domain(format!(
                "palette size {r} outside 1..={MAX_COLORS}"
            )));
        }
        let mut s = ColorSet::empty(r);
        for c in colors {
            if c < 1 || c > r {
                return Err(Error::domain(format!("color {c} outside [{r}]")));
            }
            s.insert(c);
        }
        Ok(s)
    }

    pub fn from_colors(r: u16, colors: impl IntoIterator<Item = u16>) -> Self {
        ColorSet::try_from_colors(r, colors).unwrap()
    }

    pub fn r(&self) -> u16 {
        self.r
    }

    /// Add a color. Panics on a color outside `[r]`; out-of-range input from
    /// files is rejected earlier by `try_from_colors`.
    pub fn insert(&mut self, color: u16) {
        assert!(
            color >= 1 && color <= self.r,
            "color {color} outside [{}]",
            self.r
        );
        let b = (color - 1) as usize;
        self.words[b / 64] |= 1u64 << (b % 64);
    }

    pub fn contains(&self, color: u16) -> bool {
        if color < 1 || color > self.r {
            return false;
        }
        let b = (color - 1) as usize;
        self.words[b / 64] >> (b % 64) & 1 == 1
    }

    pub fn card(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn check_same_r(&self, other: &ColorSet) {
        assert_eq!(
            self.r, other.r,
            "color sets over different palettes ({} vs {})",
            self.r, other.r
        );
    }

    pub fn intersect(&self, other: &ColorSet) -> ColorSet {
        self.check_same_r(other);
        let words = std::array::from_fn(|i| self.words[i] & other.words[i]);
        ColorSet { r: self.r, words }
    }

    pub fn union(&self, other: &ColorSet) -> ColorSet {
        self.check_same_r(other);
        let words = std::array::from_fn(|i| self.words[i] | other.words[i]);
        ColorSet { r: self.r, words }
    }

    pub fn minus(&self, other: &ColorSet) -> ColorSet {
        self.check_same_r(other);
        let words = std::array::from_fn(|i| self.words[i] & !other.words[i]);
        ColorSet { r: self.r, words }
    }

    pub fn is_disjoint(&self, other: &ColorSet) -> bool {
        self.check_same_r(other);
        (0..WORDS).all(|i| self.words[i] & other.words[i] == 0)
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.check_same_r(other);
        (0..WORDS).all(|i| self.words[i] & !other.words[i] == 0)
    }

    /// Colors in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u16> + '_ {
        let r = self.r;
        (1..=r).filter(move |&c| self.contains(c))
    }

    pub fn min_color(&self) -> Option<u16> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some((i * 64) as u16 + w.trailing_zeros() as u16 + 1);
            }
        }
        None
    }

    /// Image under a color relabeling: `perm[i-1]` is where color `i` goes.
    pub fn permute(&self, perm: &[u16]) -> ColorSet {
        assert_eq!(perm.len(), self.r as usize);
        let mut s = ColorSet::empty(self.r);
        for c in self.iter() {
            s.insert(perm[(c - 1) as usize]);
        }
        s
    }

    /// All supersets of `self` within `[r]`. Exponential in `r - |self|`;
    /// guarded to keep test-time usage honest.
    pub fn upward_closure(&self) -> Vec<ColorSet> {
        let missing: Vec<u16> = (1..=self.r).filter(|&c| !self.contains(c)).collect();
        assert!(
            missing.len() <= 20,
            "upward closure of a set missing {} colors is too large",
            missing.len()
        );
        let mut out = Vec::with_capacity(1 << missing.len());
        for mask in 0u32..(1 << missing.len()) {
            let mut s = *self;
            for (j, &c) in missing.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    s.insert(c);
                }
            }
            out.push(s);
        }
        out
    }
}

/// Canonical order: by cardinality, then by ascending element list
/// (lexicographic). This single order drives file serialization, map
/// iteration, and tie-breaking in the support-pair search.
impl Ord for ColorSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check_same_r(other);
        match self.card().cmp(&other.card()) {
            Ordering::Equal => {}
            o => return o,
        }
        // Equal cardinality: ascending element lists compare by the smallest
        // element where the sets differ.
        for i in 0..WORDS {
            let diff = self.words[i] ^ other.words[i];
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if self.words[i] & low != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for ColorSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ColorSet {
    /// `{i,j,...}` ascending; `{}` for the empty set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, c) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse `{i,j,...}` over the palette `[r]`, rejecting out-of-range colors
/// and duplicates.
pub fn parse_color_set(s: &str, r: u16) -> Result<ColorSet> {
    let inner = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::parse(format!("invalid color set '{s}'")))?;
    let mut set = ColorSet::try_from_colors(r, [])?;
    if inner.is_empty() {
        return Ok(set);
    }
    for part in inner.split(',') {
        let c: u16 = part
            .parse()
            .map_err(|_| Error::parse(format!("invalid color '{part}' in '{s}'")))?;
        if c < 1 || c > r {
            return Err(Error::parse(format!("color {c} outside [{r}] in '{s}'")));
        }
        if set.contains(c) {
            return Err(Error::parse(format!("duplicate color {c} in '{s}'")));
        }
        set.insert(c);
    }
    Ok(set)
}
