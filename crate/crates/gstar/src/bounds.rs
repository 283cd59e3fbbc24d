//! Exact evaluators for the closed-form area bounds, plus an independent
//! feasible-point maximizer that validates each closed form numerically.
//!
//! The bounds cap `sum c_i d_i` (the area a group of colors can cover)
//! under side-sum constraints like `sum c_i >= 1` and per-color caps
//! `c_i + d_i <= k`:
//!
//! - `lemma3_bound`: one group constraint, cap `k - 1/s`,
//! - `lemma6_bound`: `c`-side and `d`-side group constraints sharing `I`,
//!   cap `|I| k^2/4 + 2|O1| e(k-e)` with `e = (2 - |I|k) / (2|O1|)`,
//! - `lemma7_bound`: two `c`-side group constraints sharing `I`, cap
//!   `|I| e1(k-e1) + 2|O1| e2(k-e2)`,
//! - `lemma4_interval` / `corollary1_max`: bounds on `sum max(c_i, d_i)`
//!   given covered area, with square roots.
//!
//! The irrational bounds are exposed both as floats (display) and as exact
//! squared-comparison predicates: an inequality against a rational like
//! `0.69` is never decided with float error.
//!
//! `numeric_max` is one-sided by construction: it returns the exact
//! objective of an exactly-feasible point (found by float search, snapped
//! to rationals, repaired onto the feasible set), so it can never exceed a
//! correct bound.

use crate::error::{Error, Result};
use crate::lp::{solve_min, LinearProgram, LpOutcome, Rel};
use crate::rational::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

fn rq(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn check_k(k: &Rational) -> Result<()> {
    if !k.is_positive() || k > &Rational::one() {
        return Err(Error::domain(format!("k = {k} outside (0, 1]")));
    }
    Ok(())
}

/// Cap on `sum_{i in [s]} c_i d_i` when `sum c_i >= 1` and
/// `c_i + d_i <= k <= 2/s`: exactly `k - 1/s`.
pub fn lemma3_bound(s: u32, k: &Rational) -> Result<Rational> {
    if s == 0 {
        return Err(Error::domain("s must be positive"));
    }
    check_k(k)?;
    if k > &rq(2, s as i64) {
        return Err(Error::domain(format!("k = {k} above 2/{s}")));
    }
    Ok(k - &rq(1, s as i64))
}

/// Cap on `sum_{i in [s]} c_i d_i` with `|I| = inner >= 1`,
/// `|O1| = |O2| = outer >= 1`, group sums `sum_{I u O1} c_i >= 1` and
/// `sum_{I u O2} d_i >= 1`, and `c_i + d_i <= k < 2/(inner+outer)`:
/// `inner * k^2/4 + 2 * outer * e(k-e)` with `e = (2 - inner*k)/(2*outer)`.
pub fn lemma6_bound(inner: u32, outer: u32, k: &Rational) -> Result<Rational> {
    if inner == 0 || outer == 0 {
        return Err(Error::domain("group sizes must be positive"));
    }
    check_k(k)?;
    if k >= &rq(2, (inner + outer) as i64) {
        return Err(Error::domain(format!(
            "k = {k} not below 2/({inner}+{outer})"
        )));
    }
    let e = (Rational::from_int(2) - rq(inner as i64, 1) * k.clone())
        .checked_div(&rq(2 * outer as i64, 1))?;
    let quarter = (k * k).checked_div(&Rational::from_int(4))?;
    Ok(rq(inner as i64, 1) * quarter + rq(2 * outer as i64, 1) * &e * (k - &e))
}

/// Cap on `sum_{i in [s]} c_i d_i` with two `c`-side group sums
/// `sum_{I u O1} c_i >= 1`, `sum_{I u O2} c_i >= 1` (`inner` may be 0):
/// `inner * e1(k-e1) + 2 * outer * e2(k-e2)` with
/// `e1 = (2 + inner*k)/(2*inner + outer) - k/2` and
/// `e2 = (1 + inner*k/2)/(2*inner + outer)`.
///
/// The formula leaves its meaningful domain for some degenerate parameters
/// (for example `inner = 0`, `outer = 1` makes `e2 = 1 > k`); evaluation is
/// guarded to `e1, e2 in [0, k]` and errors otherwise rather than guessing
/// an extension.
pub fn lemma7_bound(inner: u32, outer: u32, k: &Rational) -> Result<Rational> {
    if outer == 0 {
        return Err(Error::domain("outer group size must be positive"));
    }
    check_k(k)?;
    if k >= &rq(2, (inner + outer) as i64) {
        return Err(Error::domain(format!(
            "k = {k} not below 2/({inner}+{outer})"
        )));
    }
    let denom = rq((2 * inner + outer) as i64, 1);
    let half_k = k.checked_div(&Rational::from_int(2))?;
    let e1 = (Rational::from_int(2) + rq(inner as i64, 1) * k.clone()).checked_div(&denom)?
        - half_k.clone();
    let e2 = (Rational::one() + rq(inner as i64, 1) * half_k).checked_div(&denom)?;
    for (name, e) in [("e1", &e1), ("e2", &e2)] {
        if e.is_negative() || e > k {
            return Err(Error::domain(format!(
                "{name} = {e} outside [0, k]; parameters leave the bound's domain"
            )));
        }
    }
    Ok(rq(inner as i64, 1) * &e1 * (k - &e1) + rq(2 * outer as i64, 1) * &e2 * (k - &e2))
}

/// Which end of a `base +/- scale * sqrt(radicand)` interval.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Endpoint {
    Lower,
    Upper,
}

/// Exact comparison of a rational `x` against `base +/- scale*sqrt(d)`
/// (`scale >= 0`, `d >= 0`) through squaring; no floats involved.
fn cmp_vs_sqrt_form(
    x: &Rational,
    base: &Rational,
    scale: &Rational,
    d: &Rational,
    endpoint: Endpoint,
) -> Ordering {
    debug_assert!(!scale.is_negative() && !d.is_negative());
    let t = x - base;
    let rhs_sq = scale * scale * d.clone();
    if rhs_sq.is_zero() {
        return t.cmp_exact(&Rational::zero());
    }
    match endpoint {
        Endpoint::Upper => {
            // x vs base + sqrt(rhs_sq)
            if !t.is_positive() {
                Ordering::Less
            } else {
                (&t * &t).cmp_exact(&rhs_sq)
            }
        }
        Endpoint::Lower => {
            // x vs base - sqrt(rhs_sq)
            if !t.is_negative() {
                Ordering::Greater
            } else {
                rhs_sq.cmp_exact(&(&t * &t))
            }
        }
    }
}

fn lemma4_parts(s: u32, k: &Rational, area: &Rational) -> Result<(Rational, Rational, Rational)> {
    if s == 0 {
        return Err(Error::domain("s must be positive"));
    }
    check_k(k)?;
    if area.is_negative() || area > &Rational::one() {
        return Err(Error::domain(format!("A = {area} outside [0, 1]")));
    }
    let d = (k * k).checked_div(&Rational::from_int(4))? - area.checked_div(&rq(s as i64, 1))?;
    if d.is_negative() {
        return Err(Error::domain(format!(
            "negative radicand: k^2/4 < A/s for k = {k}, A = {area}, s = {s}"
        )));
    }
    let base = rq(s as i64, 1) * k.checked_div(&Rational::from_int(2))?;
    Ok((base, rq(s as i64, 1), d))
}

/// The interval `[s(k/2 - sqrt(k^2/4 - A/s)), s(k/2 + sqrt(k^2/4 - A/s))]`
/// bracketing `sum min(c_i, d_i)` and `sum max(c_i, d_i)` when
/// `c_i + d_i <= k` and `sum c_i d_i >= A`. Floats with relative error
/// below 1e-12; exact comparisons go through `lemma4_endpoint_cmp`.
pub fn lemma4_interval(s: u32, k: &Rational, area: &Rational) -> Result<(f64, f64)> {
    let (base, scale, d) = lemma4_parts(s, k, area)?;
    let root = d.to_f64().sqrt();
    Ok((
        base.to_f64() - scale.to_f64() * root,
        base.to_f64() + scale.to_f64() * root,
    ))
}

/// Exact position of `x` relative to a lemma-4 interval endpoint.
pub fn lemma4_endpoint_cmp(
    s: u32,
    k: &Rational,
    area: &Rational,
    x: &Rational,
    endpoint: Endpoint,
) -> Result<Ordering> {
    let (base, scale, d) = lemma4_parts(s, k, area)?;
    Ok(cmp_vs_sqrt_form(x, &base, &scale, &d, endpoint))
}

fn corollary1_parts(r: u32, s: u32, k: &Rational) -> Result<(Rational, Rational, Rational)> {
    if s == 0 || s > r {
        return Err(Error::domain(format!(
            "need 1 <= s <= r, got s = {s}, r = {r}"
        )));
    }
    check_k(k)?;
    // specialization of the interval bound with A = 1 - (r-s) k^2/4
    let spill = rq((r - s) as i64, 1) * (k * k).checked_div(&Rational::from_int(4))?;
    let area = Rational::one() - spill;
    if area.is_negative() || area > Rational::one() {
        return Err(Error::domain(format!(
            "1 - (r-s)k^2/4 = {area} outside [0, 1]"
        )));
    }
    lemma4_parts(s, k, &area)
}

/// Upper end `s(k/2 + sqrt(r k^2 / (4s) - 1/s))` of the coverage interval
/// for `s` of `r` colors whose rectangles tile the unit square.
pub fn corollary1_max(r: u32, s: u32, k: &Rational) -> Result<f64> {
    let (base, scale, d) = corollary1_parts(r, s, k)?;
    Ok(base.to_f64() + scale.to_f64() * d.to_f64().sqrt())
}

/// Exact position of `x` relative to the corollary's upper endpoint.
pub fn corollary1_cmp(r: u32, s: u32, k: &Rational, x: &Rational) -> Result<Ordering> {
    let (base, scale, d) = corollary1_parts(r, s, k)?;
    Ok(cmp_vs_sqrt_form(x, &base, &scale, &d, Endpoint::Upper))
}

/// A query against one of the closed-form bounds, for the numeric
/// maximizer. `inner`/`outer` are the group sizes `|I|` and `|O1| = |O2|`.
#[derive(Clone, Debug)]
pub enum BoundQuery {
    Lemma3 { s: u32, k: Rational },
    Lemma4 { s: u32, k: Rational, area: Rational },
    Lemma6 { inner: u32, outer: u32, k: Rational },
    Lemma7 { inner: u32, outer: u32, k: Rational },
    Corollary1 { r: u32, s: u32, k: Rational },
}

impl BoundQuery {
    pub fn k(&self) -> &Rational {
        match self {
            BoundQuery::Lemma3 { k, .. }
            | BoundQuery::Lemma4 { k, .. }
            | BoundQuery::Lemma6 { k, .. }
            | BoundQuery::Lemma7 { k, .. }
            | BoundQuery::Corollary1 { k, .. } => k,
        }
    }
}

/// After eliminating `d_i = k - c_i` (which never hurts any of these
/// objectives or constraints), every query becomes: maximize a concave
/// function of `c in [0, k]^dim` subject to group half-spaces and, for the
/// interval bounds, the disc `sum c_i (k - c_i) >= A`.
struct SearchSpec {
    dim: usize,
    k: Rational,
    /// (coordinate indices, relation, rhs); Ge means `sum >= rhs`
    halfspaces: Vec<(Vec<usize>, Rel, Rational)>,
    /// Some(A): require `sum over all coords of c(k-c) >= A`
    min_area: Option<Rational>,
    /// number of leading coordinates whose `max(c, k-c)` is summed;
    /// None means the objective is `sum c(k-c)` over all coordinates
    max_terms: Option<usize>,
}

fn search_spec(q: &BoundQuery) -> Result<SearchSpec> {
    // surface domain errors first so the search always has a valid spec
    match q {
        BoundQuery::Lemma3 { s, k } => {
            lemma3_bound(*s, k)?;
            Ok(SearchSpec {
                dim: *s as usize,
                k: k.clone(),
                halfspaces: vec![((0..*s as usize).collect(), Rel::Ge, Rational::one())],
                min_area: None,
                max_terms: None,
            })
        }
        BoundQuery::Lemma6 { inner, outer, k } => {
            lemma6_bound(*inner, *outer, k)?;
            let (ni, no) = (*inner as usize, *outer as usize);
            let c_side: Vec<usize> = (0..ni + no).collect();
            let d_side: Vec<usize> = (0..ni).chain(ni + no..ni + 2 * no).collect();
            // sum_{I u O2} (k - c) >= 1  <=>  sum_{I u O2} c <= k(ni+no) - 1
            let d_rhs = k.clone() * rq((ni + no) as i64, 1) - Rational::one();
            Ok(SearchSpec {
                dim: ni + 2 * no,
                k: k.clone(),
                halfspaces: vec![(c_side, Rel::Ge, Rational::one()), (d_side, Rel::Le, d_rhs)],
                min_area: None,
                max_terms: None,
            })
        }
        BoundQuery::Lemma7 { inner, outer, k } => {
            lemma7_bound(*inner, *outer, k)?;
            let (ni, no) = (*inner as usize, *outer as usize);
            let first: Vec<usize> = (0..ni + no).collect();
            let second: Vec<usize> = (0..ni).chain(ni + no..ni + 2 * no).collect();
            Ok(SearchSpec {
                dim: ni + 2 * no,
                k: k.clone(),
                halfspaces: vec![
                    (first, Rel::Ge, Rational::one()),
                    (second, Rel::Ge, Rational::one()),
                ],
                min_area: None,
                max_terms: None,
            })
        }
        BoundQuery::Lemma4 { s, k, area } => {
            lemma4_parts(*s, k, area)?;
            Ok(SearchSpec {
                dim: *s as usize,
                k: k.clone(),
                halfspaces: vec![],
                min_area: Some(area.clone()),
                max_terms: Some(*s as usize),
            })
        }
        BoundQuery::Corollary1 { r, s, k } => {
            corollary1_parts(*r, *s, k)?;
            Ok(SearchSpec {
                dim: *r as usize,
                k: k.clone(),
                halfspaces: vec![],
                min_area: Some(Rational::one()),
                max_terms: Some(*s as usize),
            })
        }
    }
}

impl SearchSpec {
    fn feasible_exact(&self, c: &[Rational]) -> bool {
        for x in c {
            if x.is_negative() || x > &self.k {
                return false;
            }
        }
        for (coords, rel, rhs) in &self.halfspaces {
            let sum: Rational = coords.iter().map(|&i| c[i].clone()).sum();
            let ok = match rel {
                Rel::Ge => &sum >= rhs,
                Rel::Le => &sum <= rhs,
                Rel::Eq => &sum == rhs,
            };
            if !ok {
                return false;
            }
        }
        if let Some(a) = &self.min_area {
            let covered: Rational = c.iter().map(|x| x * &(&self.k - x)).sum();
            if &covered < a {
                return false;
            }
        }
        true
    }

    fn objective_exact(&self, c: &[Rational]) -> Rational {
        match self.max_terms {
            None => c.iter().map(|x| x * &(&self.k - x)).sum(),
            Some(s) => c[..s]
                .iter()
                .map(|x| {
                    let d = &self.k - x;
                    if x >= &d {
                        x.clone()
                    } else {
                        d
                    }
                })
                .sum(),
        }
    }

    /// An exactly feasible point to repair toward. It must be strictly
    /// inside the half-spaces whenever possible: blending toward a point
    /// that itself sits on a constraint boundary can never repair a float
    /// point that violates that constraint. For disc-constrained queries
    /// the disc's center (the box midpoint) does the job; otherwise a
    /// max-slack point is found by an exact LP (maximize the common slack
    /// `tau` of all half-spaces, encoded as minimizing `1 - tau`).
    fn anchor(&self) -> Result<Vec<Rational>> {
        if self.min_area.is_some() {
            let mid = self.k.checked_div(&Rational::from_int(2))?;
            return Ok(vec![mid; self.dim]);
        }
        let n = self.dim;
        let tau = n;
        let z = n + 1;
        let mut constraints: Vec<(Vec<Rational>, Rel, Rational)> = Vec::new();
        for (coords, rel, rhs) in &self.halfspaces {
            let mut row = vec![Rational::zero(); n + 2];
            for &i in coords {
                row[i] = Rational::one();
            }
            match rel {
                Rel::Ge => row[tau] = -Rational::one(),
                Rel::Le => row[tau] = Rational::one(),
                Rel::Eq => {}
            }
            constraints.push((row, *rel, rhs.clone()));
        }
        for i in 0..n {
            let mut row = vec![Rational::zero(); n + 2];
            row[i] = Rational::one();
            constraints.push((row, Rel::Le, self.k.clone()));
        }
        let mut row = vec![Rational::zero(); n + 2];
        row[tau] = Rational::one();
        row[z] = Rational::one();
        constraints.push((row, Rel::Eq, Rational::one()));
        let lp = LinearProgram {
            variables: (0..n)
                .map(|i| format!("c_{i}"))
                .chain(["tau".to_string(), "z".to_string()])
                .collect(),
            objective: z,
            constraints,
            unit_box: vec![false; n + 2],
        };
        match solve_min(&lp)? {
            LpOutcome::Optimal { assignment, .. } => Ok(assignment[..n].to_vec()),
            _ => Err(Error::domain("bound query has an empty feasible region")),
        }
    }

    // float-side helpers

    fn project_single(&self, set: usize, c: &mut [f64]) {
        let k = self.k.to_f64();
        if set == 0 {
            for x in c.iter_mut() {
                *x = x.clamp(0.0, k);
            }
        } else if set <= self.halfspaces.len() {
            let (coords, rel, rhs) = &self.halfspaces[set - 1];
            let sum: f64 = coords.iter().map(|&i| c[i]).sum();
            let rhs = rhs.to_f64();
            let gap = match rel {
                Rel::Ge if sum < rhs => rhs - sum,
                Rel::Le if sum > rhs => rhs - sum,
                _ => 0.0,
            };
            if gap != 0.0 {
                let shift = gap / coords.len() as f64;
                for &i in coords {
                    c[i] += shift;
                }
            }
        } else if let Some(a) = &self.min_area {
            // the area constraint is a disc around the box midpoint:
            // sum (c - k/2)^2 <= dim * k^2/4 - A
            let rho_sq = (self.dim as f64 * k * k / 4.0 - a.to_f64()).max(0.0);
            let norm_sq: f64 = c.iter().map(|x| (x - k / 2.0).powi(2)).sum();
            if norm_sq > rho_sq && norm_sq > 0.0 {
                let scale = (rho_sq / norm_sq).sqrt();
                for x in c.iter_mut() {
                    *x = k / 2.0 + (*x - k / 2.0) * scale;
                }
            }
        }
    }

    /// Dykstra's alternating projections onto box, half-spaces, and disc:
    /// unlike plain cyclic projection this converges to the metric
    /// projection onto the intersection, which projected gradient ascent
    /// needs to reach the constrained maximum.
    fn project(&self, c: &mut [f64]) {
        let n_sets = 1 + self.halfspaces.len() + usize::from(self.min_area.is_some());
        if n_sets == 1 {
            self.project_single(0, c);
            return;
        }
        let mut corrections = vec![vec![0.0; self.dim]; n_sets];
        for _ in 0..30 {
            for (set, p) in corrections.iter_mut().enumerate() {
                let shifted: Vec<f64> = c.iter().zip(p.iter()).map(|(x, d)| x + d).collect();
                let mut projected = shifted.clone();
                self.project_single(set, &mut projected);
                for i in 0..self.dim {
                    p[i] = shifted[i] - projected[i];
                    c[i] = projected[i];
                }
            }
        }
    }

    fn float_objective(&self, c: &[f64]) -> f64 {
        let k = self.k.to_f64();
        match self.max_terms {
            None => c.iter().map(|x| x * (k - x)).sum(),
            Some(s) => c[..s].iter().map(|x| x.max(k - x)).sum(),
        }
    }
}

/// Feasible-point maximizer: float search (projected ascent, multi-start),
/// exact snap-and-repair toward the anchor, exact objective. Returns a
/// float that never overstates the exact value found.
pub fn numeric_max(q: &BoundQuery, resolution: u32) -> Result<f64> {
    Ok(numeric_max_exact(q, resolution)?.to_f64_floor())
}

/// The exact rational value behind `numeric_max`.
pub fn numeric_max_exact(q: &BoundQuery, resolution: u32) -> Result<Rational> {
    if resolution < 8 {
        return Err(Error::domain("resolution must be at least 8"));
    }
    let spec = search_spec(q)?;
    let anchor = spec.anchor()?;
    debug_assert!(spec.feasible_exact(&anchor));
    let k = spec.k.to_f64();
    // the concave-quadratic path contracts toward the optimum by half per
    // step, so accuracy saturates long before the resolution cap
    let iters = (resolution as usize).clamp(8, 160);
    let mut rng = ChaCha8Rng::seed_from_u64(0x67_73_74_61_72);

    let mut starts: Vec<Vec<f64>> = Vec::new();
    starts.push(anchor.iter().map(|x| x.to_f64()).collect());
    for _ in 0..2 {
        starts.push((0..spec.dim).map(|_| rng.gen_range(0.0..=k)).collect());
    }

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    match spec.max_terms {
        None => {
            // concave quadratic: projected gradient, step 1/L with L = 2
            for mut c in starts {
                spec.project(&mut c);
                for _ in 0..iters {
                    for x in c.iter_mut() {
                        *x += 0.25 * (k - 2.0 * *x);
                    }
                    spec.project(&mut c);
                }
                candidates.push(c);
            }
        }
        Some(s) => {
            // piecewise-linear convex objective: per sign pattern the
            // objective is linear, so ascend each pattern separately and
            // keep every endpoint; a far-point projection along the
            // pattern direction seeds the ascent at the boundary
            if s > 12 {
                return Err(Error::domain(
                    "numeric search supports at most 12 max-terms",
                ));
            }
            for pattern in 0u32..(1 << s) {
                let sigma: Vec<f64> = (0..spec.dim)
                    .map(|i| {
                        if i < s {
                            if pattern >> i & 1 == 1 {
                                1.0
                            } else {
                                -1.0
                            }
                        } else {
                            0.0
                        }
                    })
                    .collect();
                let mut far: Vec<f64> = sigma
                    .iter()
                    .map(|&g| k / 2.0 + g * k * spec.dim as f64)
                    .collect();
                spec.project(&mut far);
                let mut best = far.clone();
                let mut c = far;
                for t in 0..iters {
                    let step = k / (4.0 + t as f64);
                    for (x, g) in c.iter_mut().zip(&sigma) {
                        *x += step * g;
                    }
                    spec.project(&mut c);
                    if spec.float_objective(&c) > spec.float_objective(&best) {
                        best = c.clone();
                    }
                }
                candidates.push(best);
            }
        }
    }

    // snap to exact rationals, repair onto the feasible set, evaluate
    let mut best: Option<Rational> = None;
    let thetas: Vec<Rational> = [0i64, 1, 4, 16, 64, 256, 1 << 10, 1 << 12, 1 << 14, 1 << 16]
        .iter()
        .map(|&num| {
            if num == 0 {
                Rational::zero()
            } else {
                Rational::new(num, 1 << 20)
            }
        })
        .chain([rq(1, 8), rq(1, 2), Rational::one()])
        .collect();
    for c in candidates {
        let snapped: Vec<Rational> = c
            .iter()
            .map(|&x| {
                let v = Rational::from_f64_exact(x.clamp(0.0, k));
                v.min(spec.k.clone()).max(Rational::zero())
            })
            .collect();
        for theta in &thetas {
            let blend: Vec<Rational> = snapped
                .iter()
                .zip(&anchor)
                .map(|(x, a)| {
                    x.clone() * (Rational::one() - theta.clone()) + a.clone() * theta.clone()
                })
                .collect();
            if spec.feasible_exact(&blend) {
                let value = spec.objective_exact(&blend);
                if best.as_ref().is_none_or(|b| &value > b) {
                    best = Some(value);
                }
                break;
            }
        }
    }
    best.ok_or_else(|| Error::domain("no feasible point found"))
}
