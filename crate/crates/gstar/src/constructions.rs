//! The explicit profile constructions and closed-form bound formulas.
//!
//! Each construction is described as a partition of the unit square into
//! full-height columns of stacked rectangles, one color per rectangle; the
//! emitted object is the profile `a(R), b(R)` read off that picture (column
//! sets with their widths, row-strip sets with their heights). The geometric
//! picture is documentation; the profile is the optimization object.
//!
//! Families:
//! - `square_grid(t)`: `t^2` colors in a `t x t` grid, objective `2/t`,
//!   optimal (it meets the `2/sqrt(r)` lower bound with equality),
//! - `square_minus_one(t)`: `t^2 - 1` colors, objective
//!   `1/t - 1/t^2 + 1/(t-1)`, optimal for `t >= 3`,
//! - `universal_low` / `universal_high`: column layouts covering every `r`
//!   (regimes `t^2 <= r <= t(t+1)` and `t(t+1) <= r <= (t+1)^2`),
//! - `small_catalog(2..=8)`: the proven-optimal profiles for small `r`.

use crate::colorset::ColorSet;
use crate::error::{Error, Result};
use crate::profile::{Side, SolutionProfile};
use crate::rational::Rational;
use std::collections::BTreeMap;

/// One full-height column: a width and a bottom-to-top stack of
/// (height, color) rectangles. Heights must sum to 1.
struct Column {
    width: Rational,
    cells: Vec<(Rational, u16)>,
}

/// Read the profile off a column layout: `a` groups columns by their color
/// set; `b` cuts the square into maximal horizontal strips with a constant
/// row color set and records their heights.
fn profile_from_columns(r: u16, columns: &[Column]) -> SolutionProfile {
    debug_assert_eq!(
        columns.iter().map(|c| c.width.clone()).sum::<Rational>(),
        Rational::one(),
        "column widths must sum to 1"
    );
    let mut profile = SolutionProfile::new(r);

    let mut a_mass: BTreeMap<ColorSet, Rational> = BTreeMap::new();
    for col in columns {
        debug_assert_eq!(
            col.cells.iter().map(|(h, _)| h.clone()).sum::<Rational>(),
            Rational::one(),
            "cell heights must sum to 1"
        );
        let set = ColorSet::from_colors(r, col.cells.iter().map(|&(_, c)| c));
        *a_mass.entry(set).or_insert_with(Rational::zero) += &col.width;
    }
    for (set, mass) in a_mass {
        profile.set(Side::A, set, mass);
    }

    // Horizontal breakpoints: every cell boundary of every column.
    let mut cuts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    for col in columns {
        let mut y = Rational::zero();
        for (h, _) in &col.cells {
            y += h;
            cuts.push(y.clone());
        }
    }
    cuts.sort();
    cuts.dedup();

    let mut b_mass: BTreeMap<ColorSet, Rational> = BTreeMap::new();
    for w in cuts.windows(2) {
        let (y0, y1) = (&w[0], &w[1]);
        let mut set = ColorSet::empty(r);
        for col in columns {
            // the cell of this column covering the strip [y0, y1)
            let mut y = Rational::zero();
            for (h, color) in &col.cells {
                let top = &y + h;
                if &top > y0 {
                    set.insert(*color);
                    break;
                }
                y = top;
            }
        }
        *b_mass.entry(set).or_insert_with(Rational::zero) += &(y1 - y0);
    }
    for (set, mass) in b_mass {
        profile.set(Side::B, set, mass);
    }

    debug_assert!(profile.is_valid(), "construction produced invalid profile");
    profile
}

/// `t^2` colors in a `t x t` grid of squares, one color each: every color
/// covers one column of width `1/t` and one row of height `1/t`, so every
/// coverage `a_i + b_i` equals `2/t`.
pub fn square_grid(t: u16) -> SolutionProfile {
    assert!(t >= 1, "grid side must be positive");
    let r = t * t;
    let h = Rational::new(1, t as i64);
    let columns: Vec<Column> = (0..t)
        .map(|i| Column {
            width: h.clone(),
            // the cell at height j (from the bottom) holds color
            // (t-1-j)*t + i + 1, so the top row reads 1..t left to right
            cells: (0..t)
                .map(|j| (h.clone(), (t - 1 - j) * t + i + 1))
                .collect(),
        })
        .collect();
    profile_from_columns(r, &columns)
}

/// `t^2 - 1` colors for `t >= 3`: a left block of `(t-1) * t` rectangles of
/// width `1/(t-1) - 1/t^2` and height `1/t`, and a right block of `t-1`
/// rectangles of width `1/t - 1/t^2` and height `1/(t-1)`. Objective
/// `1/t - 1/t^2 + 1/(t-1)`.
pub fn square_minus_one(t: u16) -> Result<SolutionProfile> {
    if t < 3 {
        return Err(Error::domain(format!(
            "square-minus-one needs t >= 3, got {t} (the optimality argument breaks at t = 2)"
        )));
    }
    let r = t * t - 1;
    let ti = t as i64;
    let left_w = Rational::new(1, ti - 1) - Rational::new(1, ti * ti);
    let left_h = Rational::new(1, ti);
    let right_w = Rational::new(1, ti) - Rational::new(1, ti * ti);
    let right_h = Rational::new(1, ti - 1);

    let mut columns = Vec::new();
    for i in 0..t - 1 {
        columns.push(Column {
            width: left_w.clone(),
            cells: (0..t)
                .map(|j| (left_h.clone(), (t - j - 1) * (t - 1) + i + 1))
                .collect(),
        });
    }
    columns.push(Column {
        width: right_w,
        cells: (0..t - 1).map(|j| (right_h.clone(), r - j)).collect(),
    });
    Ok(profile_from_columns(r, &columns))
}

fn isqrt(r: u32) -> u32 {
    let mut t = (r as f64).sqrt() as u32;
    while (t + 1) * (t + 1) <= r {
        t += 1;
    }
    while t * t > r {
        t -= 1;
    }
    t
}

/// Objective of the low-regime universal construction,
/// `2/t + 1/(t+1) + r/(t(t+1)) - r/t^2`.
pub fn universal_low_objective(r: u32) -> Result<Rational> {
    let t = isqrt(r);
    if !(t * t <= r && r <= t * (t + 1)) {
        return Err(Error::domain(format!("no t with t^2 <= {r} <= t(t+1)")));
    }
    let (t, r) = (t as i64, r as i64);
    Ok(
        Rational::new(2, t) + Rational::new(1, t + 1) + Rational::new(r, t * (t + 1))
            - Rational::new(r, t * t),
    )
}

/// Objective of the high-regime universal construction,
/// `2/(t+1) + 1/t + r/(t+1)^2 - r/(t(t+1))`.
pub fn universal_high_objective(r: u32) -> Result<Rational> {
    let t = high_regime_t(r)?;
    let (t, r) = (t as i64, r as i64);
    Ok(
        Rational::new(2, t + 1) + Rational::new(1, t) + Rational::new(r, (t + 1) * (t + 1))
            - Rational::new(r, t * (t + 1)),
    )
}

fn high_regime_t(r: u32) -> Result<u32> {
    // t with t(t+1) <= r <= (t+1)^2
    let s = isqrt(r);
    for t in [s.saturating_sub(1), s] {
        if t >= 1 && t * (t + 1) <= r && r <= (t + 1) * (t + 1) {
            return Ok(t);
        }
    }
    Err(Error::domain(format!("no t with t(t+1) <= {r} <= (t+1)^2")))
}

/// Low-regime universal construction for `t^2 <= r <= t(t+1)`: `p` columns
/// of width `x` split into `t` cells and `q` columns of width `(1-px)/q`
/// split into `t+1` cells, with `p = t(t+1) - r`, `q = r - t^2` and
/// `x = p/t^2 + q/(t(t+1))` balancing the per-rectangle side sums.
pub fn universal_low(r: u16) -> Result<SolutionProfile> {
    let t32 = isqrt(r as u32);
    if !(t32 * t32 <= r as u32 && (r as u32) <= t32 * (t32 + 1)) {
        return Err(Error::domain(format!("no t with t^2 <= {r} <= t(t+1)")));
    }
    let t = t32 as u16;
    let p = t * (t + 1) - r;
    let q = r - t * t;
    let ti = t as i64;
    let x = Rational::new(p as i64, ti * ti) + Rational::new(q as i64, ti * (ti + 1));

    let mut columns = Vec::new();
    for i in 0..p {
        let h = Rational::new(1, ti);
        columns.push(Column {
            width: x.clone(),
            cells: (0..t)
                .map(|j| (h.clone(), (t - j - 1) * p + i + 1))
                .collect(),
        });
    }
    if q > 0 {
        let w = (Rational::one() - Rational::from_int(p as i64) * x.clone())
            .checked_div(&Rational::from_int(q as i64))?;
        let h = Rational::new(1, ti + 1);
        for i in 0..q {
            columns.push(Column {
                width: w.clone(),
                cells: (0..=t)
                    .map(|j| (h.clone(), (t - j) * q + i + 1 + p * t))
                    .collect(),
            });
        }
    }
    Ok(profile_from_columns(r, &columns))
}

/// High-regime universal construction for `t(t+1) <= r <= (t+1)^2`, with
/// `p = r - t(t+1)`, `q = t+1-p` and `x = p/(t+1)^2 + q/(t(t+1))`.
pub fn universal_high(r: u16) -> Result<SolutionProfile> {
    let t = high_regime_t(r as u32)? as u16;
    let p = r - t * (t + 1);
    let q = t + 1 - p;
    let ti = t as i64;
    let x = Rational::new(p as i64, (ti + 1) * (ti + 1)) + Rational::new(q as i64, ti * (ti + 1));

    let mut columns = Vec::new();
    for i in 0..p {
        let h = Rational::new(1, ti + 1);
        columns.push(Column {
            width: x.clone(),
            cells: (0..=t).map(|j| (h.clone(), (t - j) * p + i + 1)).collect(),
        });
    }
    if q > 0 {
        let w = (Rational::one() - Rational::from_int(p as i64) * x.clone())
            .checked_div(&Rational::from_int(q as i64))?;
        let h = Rational::new(1, ti);
        for i in 0..q {
            columns.push(Column {
                width: w.clone(),
                cells: (0..t)
                    .map(|j| (h.clone(), (t - j - 1) * q + i + 1 + p * (t + 1)))
                    .collect(),
            });
        }
    }
    Ok(profile_from_columns(r, &columns))
}

/// Universal construction for any `r >= 1`: the low form where it applies,
/// otherwise the high form. On boundary values both apply and agree; the
/// low form is returned for determinism.
pub fn universal(r: u16) -> Result<SolutionProfile> {
    if r == 0 {
        return Err(Error::domain("r must be positive"));
    }
    match universal_low(r) {
        Ok(p) => {
            if let Ok(high) = universal_high_objective(r as u32) {
                debug_assert_eq!(
                    p.marginals().expect("valid construction").objective(),
                    &high
                );
            }
            Ok(p)
        }
        Err(_) => universal_high(r),
    }
}

/// The combined universal objective (low where it applies, else high).
pub fn universal_objective(r: u32) -> Result<Rational> {
    if r == 0 {
        return Err(Error::domain("r must be positive"));
    }
    universal_low_objective(r).or_else(|_| universal_high_objective(r))
}

/// The proven-optimal profiles for `2 <= r <= 8` (`r = 4` is the
/// `2 x 2` grid).
pub fn small_catalog(r: u16) -> Result<SolutionProfile> {
    let half = Rational::new(1, 2);
    let third = Rational::new(1, 3);
    match r {
        // one column per color, every row sees both
        2 => Ok(profile_from_columns(
            2,
            &[
                Column {
                    width: half.clone(),
                    cells: vec![(Rational::one(), 1)],
                },
                Column {
                    width: half,
                    cells: vec![(Rational::one(), 2)],
                },
            ],
        )),
        // narrow solid column, wide column split in two
        3 => Ok(profile_from_columns(
            3,
            &[
                Column {
                    width: Rational::new(1, 4),
                    cells: vec![(Rational::one(), 1)],
                },
                Column {
                    width: Rational::new(3, 4),
                    cells: vec![(half.clone(), 3), (half, 2)],
                },
            ],
        )),
        4 => Ok(square_grid(2)),
        // transposed so the 2-set side carries {1,2} and {3,4,5}
        5 => Ok(profile_from_columns(
            5,
            &[
                Column {
                    width: Rational::new(5, 12),
                    cells: vec![(half.clone(), 2), (half, 1)],
                },
                Column {
                    width: Rational::new(7, 12),
                    cells: vec![(third.clone(), 5), (third.clone(), 4), (third.clone(), 3)],
                },
            ],
        )
        .transpose()),
        // 2 x 3 blocks
        6 => Ok(profile_from_columns(
            6,
            &[
                Column {
                    width: half.clone(),
                    cells: vec![(third.clone(), 5), (third.clone(), 3), (third.clone(), 1)],
                },
                Column {
                    width: half,
                    cells: vec![(third.clone(), 6), (third.clone(), 4), (third.clone(), 2)],
                },
            ],
        )),
        // two half-split columns plus a third-split column
        7 => Ok(profile_from_columns(
            7,
            &[
                Column {
                    width: Rational::new(5, 18),
                    cells: vec![(half.clone(), 3), (half.clone(), 1)],
                },
                Column {
                    width: Rational::new(5, 18),
                    cells: vec![(half.clone(), 4), (half, 2)],
                },
                Column {
                    width: Rational::new(4, 9),
                    cells: vec![(third.clone(), 7), (third.clone(), 6), (third, 5)],
                },
            ],
        )),
        8 => square_minus_one(3),
        _ => Err(Error::domain(format!(
            "catalog covers 2 <= r <= 8, got {r}"
        ))),
    }
}

/// Best known construction for a given `r`: the catalog for `r <= 8`,
/// the grid at perfect squares, the square-minus-one family at
/// `t^2 - 1` (`t >= 3`), the universal layout otherwise.
pub fn auto(r: u16) -> Result<SolutionProfile> {
    if r == 0 {
        return Err(Error::domain("r must be positive"));
    }
    if r == 1 {
        return Ok(square_grid(1));
    }
    if r <= 8 {
        return small_catalog(r);
    }
    let t = isqrt(r as u32) as u16;
    if t * t == r {
        return Ok(square_grid(t));
    }
    if (t + 1) * (t + 1) - 1 == r && t + 1 >= 3 {
        return square_minus_one(t + 1);
    }
    universal(r)
}

/// Lower and upper bounds on the optimal coverage constant for one `r`.
///
/// `lower_sq` is the square `4/r` of the `2/sqrt(r)` lower bound (kept
/// squared so comparisons stay rational). `upper` is the best construction
/// objective. `exact` is populated where the value is proven: `r <= 9`,
/// perfect squares, and `t^2 - 1` for `t >= 3`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundTable {
    pub r: u32,
    pub lower_sq: Rational,
    pub upper: Rational,
    pub exact: Option<Rational>,
}

impl BoundTable {
    /// CSV row `r,lower_sq,upper,exact` with an empty last field when the
    /// exact value is unknown.
    pub fn csv_row(&self) -> String {
        let exact = self
            .exact
            .as_ref()
            .map(|e| e.to_string())
            .unwrap_or_default();
        format!("{},{},{},{}", self.r, self.lower_sq, self.upper, exact)
    }
}

/// Column-aligned text rendering of bound-table rows, headed
/// `r lower_sq upper exact` ("-" where no exact value is known).
pub fn text_table(rows: &[BoundTable]) -> String {
    let mut cells: Vec<[String; 4]> = vec![[
        "r".into(),
        "lower_sq".into(),
        "upper".into(),
        "exact".into(),
    ]];
    for row in rows {
        cells.push([
            row.r.to_string(),
            row.lower_sq.to_string(),
            row.upper.to_string(),
            row.exact
                .as_ref()
                .map(|e| e.to_string())
                .unwrap_or_else(|| "-".into()),
        ]);
    }
    let widths: Vec<usize> = (0..4)
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap())
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn bound_table(r: u32) -> Result<BoundTable> {
    if r == 0 {
        return Err(Error::domain("r must be positive"));
    }
    let lower_sq = Rational::new(4, r as i64);
    let t = isqrt(r);
    let mut upper = universal_objective(r)?;
    if t * t == r {
        upper = upper.min(Rational::new(2, t as i64));
    }
    if r >= 8 && (t + 1) * (t + 1) - 1 == r {
        let ti = (t + 1) as i64;
        upper =
            upper.min(Rational::new(1, ti) - Rational::new(1, ti * ti) + Rational::new(1, ti - 1));
    }
    let known_small: Option<Rational> = match r {
        1 => Some(Rational::from_int(2)),
        2 => Some(Rational::new(3, 2)),
        3 => Some(Rational::new(5, 4)),
        4 => Some(Rational::one()),
        5 => Some(Rational::new(11, 12)),
        6 => Some(Rational::new(5, 6)),
        7 => Some(Rational::new(7, 9)),
        8 => Some(Rational::new(13, 18)),
        9 => Some(Rational::new(2, 3)),
        _ => None,
    };
    if let Some(v) = &known_small {
        upper = upper.min(v.clone());
    }
    let exact = if known_small.is_some() {
        known_small
    } else if t * t == r || ((t + 1) * (t + 1) - 1 == r && t + 1 >= 3) {
        Some(upper.clone())
    } else {
        None
    };
    if let Some(e) = &exact {
        debug_assert_eq!(e, &upper);
    }
    debug_assert!(&upper * &upper * Rational::from_int(r as i64) >= Rational::from_int(4));
    Ok(BoundTable {
        r,
        lower_sq,
        upper,
        exact,
    })
}

/// True when `value` meets the `2/sqrt(r)` lower bound with equality, i.e.
/// `value^2 * r == 4`. Rational equality, no square roots taken.
pub fn meets_grid_lower_bound_exactly(value: &Rational, r: u32) -> bool {
    value * value * Rational::from_int(r as i64) == Rational::from_int(4)
}

/// Empirical flag: all coverages `a_i + b_i` equal. Holds for every
/// construction in this module by design; unproven in general, so this is
/// asserted on outputs only, never assumed.
pub fn coverages_all_equal(p: &SolutionProfile) -> bool {
    let m = p.marginals_unchecked();
    let first = m.coverage(1);
    (2..=p.r()).all(|i| m.coverage(i) == first)
}

/// Largest cross-support overlap `|R1 n R2|` over `a(R1), b(R2) > 0`. The
/// constructions never exceed 1 (no wasted area); kept as a regression
/// check on outputs.
pub fn max_cross_overlap(p: &SolutionProfile) -> u32 {
    let mut best = 0;
    for r1 in p.supports(Side::A) {
        for r2 in p.supports(Side::B) {
            best = best.max(r1.intersect(&r2).card());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rq(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn objective(p: &SolutionProfile) -> Rational {
        p.marginals().unwrap().objective().clone()
    }

    fn cs(r: u16, colors: &[u16]) -> ColorSet {
        ColorSet::from_colors(r, colors.iter().copied())
    }

    #[test]
    fn grid_profiles() {
        let p = square_grid(3);
        assert_eq!(p.r(), 9);
        assert_eq!(objective(&p), rq(2, 3));
        // exactly the 3x3 grid profile
        assert_eq!(p.get(Side::A, &cs(9, &[1, 4, 7])), rq(1, 3));
        assert_eq!(p.get(Side::A, &cs(9, &[2, 5, 8])), rq(1, 3));
        assert_eq!(p.get(Side::A, &cs(9, &[3, 6, 9])), rq(1, 3));
        assert_eq!(p.get(Side::B, &cs(9, &[1, 2, 3])), rq(1, 3));
        assert_eq!(p.get(Side::B, &cs(9, &[7, 8, 9])), rq(1, 3));

        assert_eq!(objective(&square_grid(1)), rq(2, 1));
        assert_eq!(objective(&square_grid(2)), Rational::one());
    }

    #[test]
    fn square_minus_one_values() {
        assert_eq!(objective(&square_minus_one(3).unwrap()), rq(13, 18));
        assert_eq!(objective(&square_minus_one(5).unwrap()), rq(41, 100));
        assert_eq!(objective(&square_minus_one(4).unwrap()), rq(25, 48));
        assert!(square_minus_one(2).is_err());
    }

    #[test]
    fn square_minus_one_is_the_eight_color_figure() {
        let p = square_minus_one(3).unwrap();
        assert_eq!(p.get(Side::A, &cs(8, &[1, 3, 5])), rq(7, 18));
        assert_eq!(p.get(Side::A, &cs(8, &[2, 4, 6])), rq(7, 18));
        assert_eq!(p.get(Side::A, &cs(8, &[7, 8])), rq(2, 9));
        assert_eq!(p.get(Side::B, &cs(8, &[1, 2, 7])), rq(1, 3));
        assert_eq!(p.get(Side::B, &cs(8, &[3, 4, 7])), rq(1, 6));
        assert_eq!(p.get(Side::B, &cs(8, &[3, 4, 8])), rq(1, 6));
        assert_eq!(p.get(Side::B, &cs(8, &[5, 6, 8])), rq(1, 3));
    }

    #[test]
    fn universal_low_values() {
        assert_eq!(objective(&universal_low(5).unwrap()), rq(11, 12));
        assert_eq!(objective(&universal_low(4).unwrap()), Rational::one());
        assert_eq!(objective(&universal_low(28).unwrap()), rq(19, 50));
        assert!(universal_low(8).is_err());
    }

    #[test]
    fn universal_low_28_matches_worked_layout() {
        // t = 5, cell counts (5,5,6,6,6): two columns of width 9/50 with 5
        // cells, three of width 16/75 with 6 cells
        let p = universal_low(28).unwrap();
        let a = p.supports(Side::A);
        assert_eq!(a.len(), 5);
        let five_cell: Vec<_> = a.iter().filter(|s| s.card() == 5).collect();
        let six_cell: Vec<_> = a.iter().filter(|s| s.card() == 6).collect();
        assert_eq!(five_cell.len(), 2);
        assert_eq!(six_cell.len(), 3);
        assert_eq!(p.get(Side::A, five_cell[0]), rq(9, 50));
        assert_eq!(p.get(Side::A, six_cell[0]), rq(16, 75));
    }

    #[test]
    fn universal_high_values() {
        assert_eq!(objective(&universal_high(8).unwrap()), rq(13, 18));
        assert_eq!(objective(&universal_high(6).unwrap()), rq(5, 6));
        assert_eq!(objective(&universal_high(3).unwrap()), rq(5, 4));
        assert!(universal_high(5).is_err());
    }

    #[test]
    fn regimes_agree_on_boundaries() {
        for t in 1u32..=10 {
            // r = t(t+1): both regimes
            let r = t * (t + 1);
            assert_eq!(
                universal_low_objective(r).unwrap(),
                universal_high_objective(r).unwrap(),
                "boundary r = {r}"
            );
            // r = t^2: low(t) agrees with the grid value, and with high(t-1)
            let r = t * t;
            assert_eq!(universal_low_objective(r).unwrap(), rq(2, t as i64));
            if t >= 2 {
                assert_eq!(universal_high_objective(r).unwrap(), rq(2, t as i64));
            }
            // r = (t+1)^2 from the high side
            let r = (t + 1) * (t + 1);
            assert_eq!(universal_high_objective(r).unwrap(), rq(2, (t + 1) as i64));
        }
    }

    #[test]
    fn universal_objective_nonincreasing_to_200() {
        let mut prev = universal_objective(1).unwrap();
        for r in 2u32..=200 {
            let cur = universal_objective(r).unwrap();
            assert!(cur <= prev, "universal objective increased at r = {r}");
            prev = cur;
        }
    }

    #[test]
    fn catalog_matches_proven_values() {
        let expected = [
            (2u16, rq(3, 2)),
            (3, rq(5, 4)),
            (4, Rational::one()),
            (5, rq(11, 12)),
            (6, rq(5, 6)),
            (7, rq(7, 9)),
            (8, rq(13, 18)),
        ];
        for (r, v) in expected {
            let p = small_catalog(r).unwrap();
            assert_eq!(objective(&p), v, "catalog r = {r}");
            assert!(p.is_valid());
        }
        assert!(small_catalog(1).is_err());
        assert!(small_catalog(9).is_err());
    }

    #[test]
    fn catalog_two_is_the_half_split() {
        let p = small_catalog(2).unwrap();
        assert_eq!(p.get(Side::A, &cs(2, &[1])), rq(1, 2));
        assert_eq!(p.get(Side::A, &cs(2, &[2])), rq(1, 2));
        assert_eq!(p.get(Side::B, &cs(2, &[1, 2])), Rational::one());
    }

    #[test]
    fn catalog_five_has_two_set_b_side() {
        let p = small_catalog(5).unwrap();
        assert_eq!(p.get(Side::B, &cs(5, &[1, 2])), rq(5, 12));
        assert_eq!(p.get(Side::B, &cs(5, &[3, 4, 5])), rq(7, 12));
        assert_eq!(p.supports(Side::B).len(), 2);
        assert_eq!(p.supports(Side::A).len(), 4);
    }

    #[test]
    fn catalog_six_small_set_exclusion() {
        // objective 5/6 < 1, so no singleton support can carry mass
        let p = small_catalog(6).unwrap();
        assert!(p.small_set_predicate(1));
        assert!(p.supports(Side::A).iter().all(|s| s.card() >= 2));
        assert!(p.supports(Side::B).iter().all(|s| s.card() >= 2));
    }

    #[test]
    fn catalog_seven() {
        let p = small_catalog(7).unwrap();
        assert_eq!(objective(&p), rq(7, 9));
        assert_eq!(p.get(Side::A, &cs(7, &[1, 3])), rq(5, 18));
        assert_eq!(p.get(Side::A, &cs(7, &[5, 6, 7])), rq(4, 9));
    }

    #[test]
    fn construction_outputs_keep_the_empirical_properties() {
        let mut profiles = vec![
            square_grid(1),
            square_grid(2),
            square_grid(3),
            square_grid(4),
            square_minus_one(3).unwrap(),
            square_minus_one(4).unwrap(),
            square_minus_one(5).unwrap(),
        ];
        for r in 2..=8 {
            profiles.push(small_catalog(r).unwrap());
        }
        for r in 9..=30 {
            profiles.push(universal(r).unwrap());
        }
        for p in &profiles {
            assert!(p.is_valid(), "r = {}", p.r());
            let (_, ok) = p.area_check();
            assert!(ok, "area check failed for r = {}", p.r());
            assert!(coverages_all_equal(p), "unequal coverages at r = {}", p.r());
            assert!(
                max_cross_overlap(p) <= 1,
                "cross overlap above 1 at r = {}",
                p.r()
            );
        }
    }

    #[test]
    fn bound_tables() {
        let t9 = bound_table(9).unwrap();
        assert_eq!(t9.exact, Some(rq(2, 3)));
        assert_eq!(t9.upper, rq(2, 3));

        let t7 = bound_table(7).unwrap();
        assert_eq!(t7.exact, Some(rq(7, 9)));
        assert_eq!(t7.lower_sq, rq(4, 7));

        let t10 = bound_table(10).unwrap();
        assert_eq!(t10.upper, rq(23, 36));
        assert_eq!(t10.exact, None);

        let t8 = bound_table(8).unwrap();
        assert_eq!(t8.csv_row(), "8,1/2,13/18,13/18");
        assert_eq!(t10.csv_row(), "10,2/5,23/36,");
        assert_eq!(
            text_table(&[t8.clone(), t10.clone()]),
            " r  lower_sq  upper  exact\n 8       1/2  13/18  13/18\n10       2/5  23/36      -\n"
        );

        // upper respects the squared lower bound everywhere
        for r in 1..=60 {
            let t = bound_table(r).unwrap();
            assert!(&t.upper * &t.upper * Rational::from_int(r as i64) >= Rational::from_int(4));
        }
    }

    #[test]
    fn grid_bound_equality_is_exactly_perfect_squares() {
        assert!(meets_grid_lower_bound_exactly(&Rational::one(), 4));
        assert!(meets_grid_lower_bound_exactly(&rq(2, 3), 9));
        assert!(!meets_grid_lower_bound_exactly(&rq(11, 12), 5));
    }

    #[test]
    fn auto_dispatch() {
        assert_eq!(objective(&auto(1).unwrap()), rq(2, 1));
        assert_eq!(objective(&auto(8).unwrap()), rq(13, 18));
        assert_eq!(objective(&auto(9).unwrap()), rq(2, 3));
        assert_eq!(objective(&auto(15).unwrap()), rq(25, 48)); // 4^2 - 1
        assert_eq!(objective(&auto(10).unwrap()), rq(23, 36)); // universal
    }
}
