//! Solution profiles: the pair of distributions `a(R)`, `b(R)` over color
//! subsets, one entry per support set, zeros omitted.
//!
//! A profile abstracts a coloring square down to the proportion of columns
//! (`a`) and rows (`b`) whose exact color set is `R`. The coloring
//! constraints are:
//!
//! 1. every stored value lies in (0, 1],
//! 2. each side sums to exactly 1,
//! 3. marginals `a_i = sum over R containing i of a(R)` (same for `b_i`),
//! 4. the objective is `max_i a_i + b_i`,
//! 5. supports cross-intersect: `a(R1) > 0` and `b(R2) > 0` force
//!    `R1 and R2` to share a color (the cell where that column meets that
//!    row needs one).

use crate::colorset::{parse_color_set, ColorSet};
use crate::error::{Error, Result};
use crate::rational::Rational;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn letter(self) -> char {
        match self {
            Side::A => 'a',
            Side::B => 'b',
        }
    }
}

/// A (possibly invalid) profile. Construction never checks the coloring
/// constraints; `validate` reports violations as data so callers like the
/// CLI `verify` command can list all of them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolutionProfile {
    r: u16,
    a: BTreeMap<ColorSet, Rational>,
    b: BTreeMap<ColorSet, Rational>,
}

/// One violated coloring constraint, with its witnesses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// A stored value is zero or negative (zeros must be omitted).
    NonPositiveValue {
        side: Side,
        set: ColorSet,
        value: Rational,
    },
    /// The empty set carries mass; every row/column contains some color.
    EmptySupportSet { side: Side },
    /// A side does not sum to exactly 1.
    SumNotOne { side: Side, sum: Rational },
    /// Disjoint supports across the two sides.
    DisjointSupports { a_set: ColorSet, b_set: ColorSet },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveValue { side, set, value } => {
                write!(f, "{}({set}) = {value} is not positive", side.letter())
            }
            Violation::EmptySupportSet { side } => {
                write!(f, "{}({{}}) is stored but must be 0", side.letter())
            }
            Violation::SumNotOne { side, sum } => {
                write!(f, "{}-side sums to {sum}, not 1", side.letter())
            }
            Violation::DisjointSupports { a_set, b_set } => {
                write!(f, "supports a({a_set}) and b({b_set}) are disjoint")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exact marginals of a valid profile, indexed by color, plus the objective
/// `max_i a_i + b_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Marginals {
    a: Vec<Rational>,
    b: Vec<Rational>,
    objective: Rational,
}

impl Marginals {
    pub fn a(&self, color: u16) -> &Rational {
        &self.a[(color - 1) as usize]
    }

    pub fn b(&self, color: u16) -> &Rational {
        &self.b[(color - 1) as usize]
    }

    pub fn coverage(&self, color: u16) -> Rational {
        self.a(color) + self.b(color)
    }

    pub fn objective(&self) -> &Rational {
        &self.objective
    }

    pub fn r(&self) -> u16 {
        self.a.len() as u16
    }
}

impl SolutionProfile {
    pub fn new(r: u16) -> Self {
        assert!(r >= 1, "profile needs at least one color");
        SolutionProfile {
            r,
            a: BTreeMap::new(),
            b: BTreeMap::new(),
        }
    }

    pub fn r(&self) -> u16 {
        self.r
    }

    /// Set an entry. A zero value removes the key (zeros are never stored);
    /// the set must be over the same palette.
    pub fn set(&mut self, side: Side, set: ColorSet, value: Rational) {
        assert_eq!(set.r(), self.r, "color set over a different palette");
        let map = match side {
            Side::A => &mut self.a,
            Side::B => &mut self.b,
        };
        if value.is_zero() {
            map.remove(&set);
        } else {
            map.insert(set, value);
        }
    }

    pub fn get(&self, side: Side, set: &ColorSet) -> Rational {
        self.side(side)
            .get(set)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn side(&self, side: Side) -> &BTreeMap<ColorSet, Rational> {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    /// Support sets of one side in canonical order.
    pub fn supports(&self, side: Side) -> Vec<ColorSet> {
        self.side(side).keys().copied().collect()
    }

    /// Swap the two sides. The coloring problem is symmetric under
    /// transposing the square, so this maps valid profiles to valid
    /// profiles with the same objective.
    pub fn transpose(&self) -> SolutionProfile {
        SolutionProfile {
            r: self.r,
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// Check every coloring constraint and report all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for side in [Side::A, Side::B] {
            let map = self.side(side);
            for (set, value) in map {
                if !value.is_positive() {
                    violations.push(Violation::NonPositiveValue {
                        side,
                        set: *set,
                        value: value.clone(),
                    });
                }
                if set.is_empty() {
                    violations.push(Violation::EmptySupportSet { side });
                }
            }
            let sum: Rational = map.values().cloned().sum();
            if sum != Rational::one() {
                violations.push(Violation::SumNotOne { side, sum });
            }
        }
        for ra in self.a.keys() {
            for rb in self.b.keys() {
                if !ra.is_empty() && !rb.is_empty() && ra.is_disjoint(rb) {
                    violations.push(Violation::DisjointSupports {
                        a_set: *ra,
                        b_set: *rb,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    fn raw_marginals(&self) -> Marginals {
        let mut a = vec![Rational::zero(); self.r as usize];
        let mut b = vec![Rational::zero(); self.r as usize];
        for (set, value) in &self.a {
            for c in set.iter() {
                a[(c - 1) as usize] += value;
            }
        }
        for (set, value) in &self.b {
            for c in set.iter() {
                b[(c - 1) as usize] += value;
            }
        }
        let objective = (0..self.r as usize)
            .map(|i| &a[i] + &b[i])
            .max()
            .expect("r >= 1");
        Marginals { a, b, objective }
    }

    /// Exact marginals; errors on an invalid profile.
    pub fn marginals(&self) -> Result<Marginals> {
        let report = self.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::domain(format!("invalid profile: {v}")));
        }
        Ok(self.raw_marginals())
    }

    /// Marginals without the validity gate, for reporting on profiles that
    /// may violate constraints (CLI `verify`).
    pub fn marginals_unchecked(&self) -> Marginals {
        self.raw_marginals()
    }

    /// `sum_i a_i * b_i` and whether it is at least 1. For any profile
    /// satisfying the coloring constraints the answer is yes: each product
    /// is the area color `i` can cover in the unit-square picture, and the
    /// colors together must cover everything.
    pub fn area_check(&self) -> (Rational, bool) {
        let m = self.raw_marginals();
        let total: Rational = (1..=self.r).map(|i| m.a(i) * m.b(i)).sum();
        let ok = total >= Rational::one();
        (total, ok)
    }

    /// The double-counting identity `sum_i a_i = sum_R |R| a(R)` (and the
    /// b-side analogue), checked exactly.
    pub fn weight_identity(&self) -> bool {
        let m = self.raw_marginals();
        for (side, marg) in [(Side::A, &m.a), (Side::B, &m.b)] {
            let lhs: Rational = marg.iter().cloned().sum();
            let rhs: Rational = self
                .side(side)
                .iter()
                .map(|(set, v)| Rational::from_int(set.card() as i64) * v.clone())
                .sum();
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Small-support exclusion: when the objective is below `1/t`, no
    /// support set of cardinality at most `t` can carry mass. Returns true
    /// when the implication holds (vacuously when the objective is >= 1/t).
    pub fn small_set_predicate(&self, t: u32) -> bool {
        assert!(t >= 1);
        let m = self.raw_marginals();
        let threshold = Rational::new(1, t as i64);
        if m.objective >= threshold {
            return true;
        }
        for side in [Side::A, Side::B] {
            for set in self.side(side).keys() {
                if set.card() <= t {
                    return false;
                }
            }
        }
        true
    }

    /// Mass of a family of sets on one side: `sum over R in family` of the
    /// stored value. With the family taken as the upward closure of `{i}`
    /// this is exactly the marginal `a_i` / `b_i`.
    pub fn aggregate(&self, side: Side, family: &[ColorSet]) -> Rational {
        let map = self.side(side);
        let mut seen = std::collections::BTreeSet::new();
        let mut total = Rational::zero();
        for set in family {
            if seen.insert(*set) {
                if let Some(v) = map.get(set) {
                    total += v;
                }
            }
        }
        total
    }

    /// Delete `eps` of the mass on `set` from one side and rescale that side
    /// back to total 1: the target becomes `(v - eps)/(1 - eps)`, every
    /// other entry `v/(1 - eps)`. The improvement move behind the
    /// no-strict-maximum property of optimal solutions.
    pub fn delete_and_rescale(
        &self,
        side: Side,
        set: &ColorSet,
        eps: &Rational,
    ) -> Result<SolutionProfile> {
        let value = match self.side(side).get(set) {
            Some(v) => v.clone(),
            None => {
                return Err(Error::domain(format!(
                    "{}({set}) is not in the support",
                    side.letter()
                )))
            }
        };
        if !eps.is_positive() || eps >= &value {
            return Err(Error::domain(format!("eps = {eps} outside (0, {value})")));
        }
        if eps >= &Rational::one() {
            return Err(Error::domain(format!("eps = {eps} not below 1")));
        }
        let scale = (Rational::one() - eps.clone()).recip()?;
        let mut out = self.clone();
        let map = match side {
            Side::A => &mut out.a,
            Side::B => &mut out.b,
        };
        for (s, v) in map.iter_mut() {
            if s == set {
                *v = (v.clone() - eps.clone()) * scale.clone();
            } else {
                *v = v.clone() * scale.clone();
            }
        }
        Ok(out)
    }

    /// Serialize in the line-oriented profile format:
    /// `r=<r>`, then `a <set> <value>` lines, then `b` lines, each side in
    /// canonical (cardinality, ascending elements) order.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("r={}\n", self.r);
        for side in [Side::A, Side::B] {
            for (set, value) in self.side(side) {
                out.push_str(&format!("{} {set} {value}\n", side.letter()));
            }
        }
        out
    }

    /// Parse the profile format. Rejects duplicate keys, zero values, and
    /// out-of-range colors; constraint violations (bad sums, disjoint
    /// supports) parse fine and are left to `validate`.
    pub fn parse(text: &str) -> Result<SolutionProfile> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("empty profile"))?;
        let r: u16 = header
            .strip_prefix("r=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::parse(format!("expected 'r=<integer>', got '{header}'")))?;
        if r == 0 {
            return Err(Error::parse("r must be positive"));
        }
        let mut profile = SolutionProfile::new(r);
        for line in lines {
            let mut parts = line.split_whitespace();
            let (side_tok, set_tok, val_tok) =
                match (parts.next(), parts.next(), parts.next(), parts.next()) {
                    (Some(s), Some(c), Some(v), None) => (s, c, v),
                    _ => return Err(Error::parse(format!("malformed entry '{line}'"))),
                };
            let side = match side_tok {
                "a" => Side::A,
                "b" => Side::B,
                _ => return Err(Error::parse(format!("unknown side '{side_tok}'"))),
            };
            let set = parse_color_set(set_tok, r)?;
            let value: Rational = val_tok.parse()?;
            if value.is_zero() {
                return Err(Error::parse(format!(
                    "zero value for {}({set}); omit zero entries",
                    side.letter()
                )));
            }
            let map = match side {
                Side::A => &mut profile.a,
                Side::B => &mut profile.b,
            };
            if map.contains_key(&set) {
                return Err(Error::parse(format!(
                    "duplicate key {}({set})",
                    side.letter()
                )));
            }
            map.insert(set, value);
        }
        Ok(profile)
    }
}
