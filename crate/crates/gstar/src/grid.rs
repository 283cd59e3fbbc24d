//! Concrete coloring squares: discretization of profiles, extension to
//! arbitrary sizes, touched-vertex accounting, and the brute-force oracle
//! for the integer quantity `g(n, r)`.
//!
//! A coloring square is the `n x n` matrix view of an edge coloring of
//! `K_{n,n}`: cell `(column u_j, row v_k)` holds the color of the edge
//! `{u_j, v_k}`. A color touches `(columns containing it) + (rows
//! containing it)` vertices.

use crate::colorset::ColorSet;
use crate::error::{Error, Result};
use crate::profile::{Side, SolutionProfile};
use crate::rational::{lcm_denominators, Rational};
use num::bigint::BigInt;
use num::{One, ToPrimitive};
use rayon::prelude::*;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

/// An `n x n` grid of colors in `1..=r`, row-major: `cells[row * n + col]`
/// is the color at (column `col`, row `row`), zero-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoringSquare {
    n: usize,
    r: u16,
    cells: Vec<u32>,
}

/// Per-color column/row containment counts for one square.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColorTouch {
    pub columns: usize,
    pub rows: usize,
}

impl ColorTouch {
    pub fn touched(&self) -> usize {
        self.columns + self.rows
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TouchReport {
    /// Indexed by color - 1.
    pub per_color: Vec<ColorTouch>,
    pub max_touched: usize,
}

impl ColoringSquare {
    pub fn new(n: usize, r: u16, cells: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("square side must be positive"));
        }
        if cells.len() != n * n {
            return Err(Error::domain(format!(
                "expected {} cells, got {}",
                n * n,
                cells.len()
            )));
        }
        for &c in &cells {
            if c < 1 || c > r as u32 {
                return Err(Error::domain(format!("cell color {c} outside [{r}]")));
            }
        }
        Ok(ColoringSquare { n, r, cells })
    }

    pub fn constant(n: usize, r: u16, color: u32) -> Result<Self> {
        ColoringSquare::new(n, r, vec![color; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u16 {
        self.r
    }

    pub fn color_at(&self, col: usize, row: usize) -> u32 {
        self.cells[row * self.n + col]
    }

    /// Colors appearing in one column.
    fn column_set(&self, col: usize) -> ColorSet {
        ColorSet::from_colors(
            self.r,
            (0..self.n).map(|row| self.color_at(col, row) as u16),
        )
    }

    fn row_set(&self, row: usize) -> ColorSet {
        ColorSet::from_colors(
            self.r,
            (0..self.n).map(|col| self.color_at(col, row) as u16),
        )
    }

    /// Serialize: header `n=<n> r=<r>`, then line `k` (1-based) carries row
    /// `v_k` as comma-separated colors of `(u_1, v_k) ... (u_n, v_k)`.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("n={} r={}\n", self.n, self.r);
        for row in 0..self.n {
            let line: Vec<String> = (0..self.n)
                .map(|col| self.color_at(col, row).to_string())
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<ColoringSquare> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("empty square file"))?;
        let mut n: Option<usize> = None;
        let mut r: Option<u16> = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("n=") {
                n = v.parse().ok();
            } else if let Some(v) = tok.strip_prefix("r=") {
                r = v.parse().ok();
            }
        }
        let (n, r) = match (n, r) {
            (Some(n), Some(r)) if n > 0 && r > 0 => (n, r),
            _ => {
                return Err(Error::parse(format!(
                    "expected header 'n=<n> r=<r>', got '{header}'"
                )))
            }
        };
        let mut cells = Vec::with_capacity(n * n);
        let mut rows = 0;
        for line in lines {
            let entries: Vec<&str> = line.split(',').collect();
            if entries.len() != n {
                return Err(Error::parse(format!(
                    "row {} has {} entries, expected {n}",
                    rows + 1,
                    entries.len()
                )));
            }
            for e in entries {
                let c: u32 = e
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("invalid color '{e}'")))?;
                cells.push(c);
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::parse(format!("expected {n} rows, got {rows}")));
        }
        ColoringSquare::new(n, r, cells)
    }
}

/// Count, per color, the columns and rows containing it. The number of
/// touched vertices of color `i` is the sum of the two counts.
pub fn touched_counts(sq: &ColoringSquare) -> TouchReport {
    let mut per_color: Vec<ColorTouch> = (0..sq.r)
        .map(|_| ColorTouch {
            columns: 0,
            rows: 0,
        })
        .collect();
    for col in 0..sq.n {
        for c in sq.column_set(col).iter() {
            per_color[(c - 1) as usize].columns += 1;
        }
    }
    for row in 0..sq.n {
        for c in sq.row_set(row).iter() {
            per_color[(c - 1) as usize].rows += 1;
        }
    }
    let max_touched = per_color.iter().map(|t| t.touched()).max().unwrap_or(0);
    TouchReport {
        per_color,
        max_touched,
    }
}

/// The discretization grain: the lcm `N` of all denominators appearing in
/// the profile. Any multiple of `N` columns/rows realizes the profile with
/// integer block sizes.
pub fn discretization_grain(p: &SolutionProfile) -> BigInt {
    let mut values: Vec<Rational> = Vec::new();
    for side in [Side::A, Side::B] {
        values.extend(p.side(side).values().cloned());
    }
    if values.is_empty() {
        BigInt::one()
    } else {
        lcm_denominators(&values)
    }
}

/// Discretize a valid profile at size `n = t * N`: columns are split into
/// contiguous blocks of `a(R) * n` columns in canonical key order (rows
/// likewise), and the cell where block `R1` meets block `R2` gets
/// `min(R1 n R2)` (any shared color works; the minimum fixes one).
pub fn profile_to_square(p: &SolutionProfile, t: u32) -> Result<ColoringSquare> {
    if t == 0 {
        return Err(Error::domain("t must be positive"));
    }
    if !p.is_valid() {
        return Err(Error::domain("cannot discretize an invalid profile"));
    }
    let grain = discretization_grain(p);
    let n_big = &grain * BigInt::from(t);
    let n = n_big
        .to_usize()
        .filter(|&n| n <= 1 << 16)
        .ok_or_else(|| Error::domain(format!("discretized size {n_big} is too large")))?;

    // block sizes per side, in canonical key order
    let block_sizes = |side: Side| -> Vec<(ColorSet, usize)> {
        p.side(side)
            .iter()
            .map(|(set, v)| {
                let count = v * &Rational::from_bigint(n_big.clone());
                debug_assert!(count.is_integer());
                (*set, count.numer().to_usize().expect("block fits"))
            })
            .collect()
    };
    let cols = block_sizes(Side::A);
    let rows = block_sizes(Side::B);

    let mut col_set = Vec::with_capacity(n);
    for (set, size) in &cols {
        col_set.extend(std::iter::repeat_n(*set, *size));
    }
    let mut row_set = Vec::with_capacity(n);
    for (set, size) in &rows {
        row_set.extend(std::iter::repeat_n(*set, *size));
    }
    debug_assert_eq!(col_set.len(), n);
    debug_assert_eq!(row_set.len(), n);

    let mut cells = Vec::with_capacity(n * n);
    for row_colors in &row_set {
        for col_colors in &col_set {
            let shared = col_colors.intersect(row_colors);
            let color = shared
                .min_color()
                .ok_or_else(|| Error::domain("valid profile has intersecting supports"))?;
            cells.push(color as u32);
        }
    }
    ColoringSquare::new(n, p.r(), cells)
}

/// Extend a square to side `n` by copying the last column rightward and
/// then the (extended) last row upward. No color touches a new row while
/// columns are copied, and vice versa, so each color gains at most
/// `2 * (n - old_n)` touched vertices.
pub fn extend_square(sq: &ColoringSquare, n: usize) -> Result<ColoringSquare> {
    if n < sq.n {
        return Err(Error::domain(format!(
            "cannot extend a {}-square down to {n}",
            sq.n
        )));
    }
    if n == sq.n {
        return Ok(sq.clone());
    }
    let mut cells = Vec::with_capacity(n * n);
    for row in 0..sq.n {
        for col in 0..n {
            cells.push(sq.color_at(col.min(sq.n - 1), row));
        }
    }
    for _ in sq.n..n {
        let last_row_start = (sq.n - 1) * n;
        let last_row: Vec<u32> = cells[last_row_start..last_row_start + n].to_vec();
        cells.extend(last_row);
    }
    ColoringSquare::new(n, sq.r, cells)
}

/// Read the profile back off a square: `a(R)` is the fraction of columns
/// whose color set is exactly `R`. The output is always a valid profile.
pub fn square_to_profile(sq: &ColoringSquare) -> SolutionProfile {
    let mut p = SolutionProfile::new(sq.r);
    let n = Rational::from_int(sq.n as i64);
    let share = Rational::one().checked_div(&n).unwrap();
    for col in 0..sq.n {
        let set = sq.column_set(col);
        let old = p.get(Side::A, &set);
        p.set(Side::A, set, old + share.clone());
    }
    for row in 0..sq.n {
        let set = sq.row_set(row);
        let old = p.get(Side::B, &set);
        p.set(Side::B, set, old + share.clone());
    }
    debug_assert!(p.is_valid());
    p
}

/// Discretize a profile for an arbitrary target size `n`: the largest
/// multiple of the grain `N` not above `n`, extended up to `n`. For
/// `n < N` there is no base square to extend; any coloring stays within
/// the `2(N-1)` additive allowance, so a constant coloring is used.
pub fn discretize_for_size(p: &SolutionProfile, n: usize) -> Result<ColoringSquare> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let grain = discretization_grain(p);
    let t = (BigInt::from(n) / &grain).to_u32().unwrap_or(0);
    if t == 0 {
        return ColoringSquare::constant(n, p.r(), 1);
    }
    extend_square(&profile_to_square(p, t)?, n)
}

/// Options for the brute-force oracle. `prune` controls both the
/// color-permutation symmetry fix and the partial-count cutoff; turning it
/// off exists to validate that pruning never changes the result.
#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub budget: u64,
    pub prune: bool,
    pub jobs: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            budget: crate::DEFAULT_BUDGET,
            prune: true,
            jobs: 1,
        }
    }
}

/// Exact `g(n, r)` by exhausting all `r^(n^2)` colorings (up to color
/// permutation when pruning): the minimum over colorings of the maximum
/// touched-vertex count. Errors when `r^(n^2)` exceeds the budget.
pub fn brute_force_g(n: usize, r: u16, budget: u64) -> Result<usize> {
    brute_force_g_with(
        n,
        r,
        OracleOptions {
            budget,
            ..OracleOptions::default()
        },
    )
}

pub fn brute_force_g_with(n: usize, r: u16, opts: OracleOptions) -> Result<usize> {
    if n == 0 || r == 0 {
        return Err(Error::domain("n and r must be positive"));
    }
    if r > 64 {
        return Err(Error::domain("oracle supports at most 64 colors"));
    }
    // budget guard on the full search space r^(n^2)
    let total = BigInt::from(r).pow((n * n) as u32);
    if total > BigInt::from(opts.budget) {
        return Err(Error::BudgetExceeded {
            needed: format!("{r}^{} = {total} colorings", n * n),
            budget: opts.budget,
        });
    }

    // Work is partitioned over the first one or two cells' colors. With
    // pruning the first cell is fixed to color 1: every coloring is
    // color-permutation equivalent to one of that form, and the max
    // touched count is permutation invariant.
    let first: Vec<u32> = if opts.prune {
        vec![1]
    } else {
        (1..=r as u32).collect()
    };
    let mut prefixes: Vec<Vec<u32>> = Vec::new();
    for &c0 in &first {
        if n * n >= 2 {
            for c1 in 1..=r as u32 {
                prefixes.push(vec![c0, c1]);
            }
        } else {
            prefixes.push(vec![c0]);
        }
    }

    let best = AtomicUsize::new(2 * n + 1);
    let run = |prefix: &Vec<u32>| {
        let mut state = DfsState::new(n, r, opts.prune, &best);
        state.run_with_prefix(prefix);
    };
    if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
        pool.install(|| prefixes.par_iter().for_each(run));
    } else {
        prefixes.iter().for_each(run);
    }
    Ok(best.load(AtomicOrdering::SeqCst))
}

/// Depth-first fill of the square in row-major order with incremental
/// per-color column/row containment counts. Touched counts only grow as
/// cells are filled, so any color reaching the best known complete value
/// prunes the subtree; the shared cutoff only ever shrinks, which skips
/// provably-not-better branches and leaves the minimum schedule-independent.
struct DfsState<'a> {
    n: usize,
    r: u16,
    prune: bool,
    best: &'a AtomicUsize,
    col_mask: Vec<u64>,
    row_mask: Vec<u64>,
    col_count: Vec<usize>,
    row_count: Vec<usize>,
}

impl<'a> DfsState<'a> {
    fn new(n: usize, r: u16, prune: bool, best: &'a AtomicUsize) -> Self {
        DfsState {
            n,
            r,
            prune,
            best,
            col_mask: vec![0; n],
            row_mask: vec![0; n],
            col_count: vec![0; r as usize],
            row_count: vec![0; r as usize],
        }
    }

    /// Returns (was new in column, was new in row).
    fn apply(&mut self, cell: usize, color: u32) -> (bool, bool) {
        let (row, col) = (cell / self.n, cell % self.n);
        let bit = 1u64 << (color - 1);
        let c = (color - 1) as usize;
        let new_col = self.col_mask[col] & bit == 0;
        let new_row = self.row_mask[row] & bit == 0;
        if new_col {
            self.col_mask[col] |= bit;
            self.col_count[c] += 1;
        }
        if new_row {
            self.row_mask[row] |= bit;
            self.row_count[c] += 1;
        }
        (new_col, new_row)
    }

    fn unapply(&mut self, cell: usize, color: u32, undo: (bool, bool)) {
        let (row, col) = (cell / self.n, cell % self.n);
        let bit = 1u64 << (color - 1);
        let c = (color - 1) as usize;
        if undo.0 {
            self.col_mask[col] &= !bit;
            self.col_count[c] -= 1;
        }
        if undo.1 {
            self.row_mask[row] &= !bit;
            self.row_count[c] -= 1;
        }
    }

    fn dead(&self, color: u32) -> bool {
        let c = (color - 1) as usize;
        self.prune
            && self.col_count[c] + self.row_count[c] >= self.best.load(AtomicOrdering::Relaxed)
    }

    fn run_with_prefix(&mut self, prefix: &[u32]) {
        for (cell, &color) in prefix.iter().enumerate() {
            self.apply(cell, color);
            if self.dead(color) {
                return; // state is task-local, no need to unwind
            }
        }
        self.dfs(prefix.len());
    }

    fn dfs(&mut self, cell: usize) {
        if cell == self.n * self.n {
            let max = (0..self.r as usize)
                .map(|c| self.col_count[c] + self.row_count[c])
                .max()
                .unwrap_or(0);
            self.best.fetch_min(max, AtomicOrdering::SeqCst);
            return;
        }
        for color in 1..=self.r as u32 {
            let undo = self.apply(cell, color);
            if !self.dead(color) {
                self.dfs(cell + 1);
            }
            self.unapply(cell, color, undo);
        }
    }
}
