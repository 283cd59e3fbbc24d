//! Exact rational linear programming and the restricted coloring LP.
//!
//! The solver is a dense two-phase primal simplex over `Rational` entries
//! with Bland's anti-cycling rule, so it terminates and is deterministic:
//! identical inputs produce identical optimal assignments. Exactness is the
//! point; every certificate this crate emits re-verifies by substituting the
//! assignment back into the constraints.
//!
//! `build_coloring_lp` materializes the coloring problem restricted to a
//! support pair `(P1, P2)`: variables `a(R)` for `R` in `P1`, `b(R)` for `R`
//! in `P2`, the marginals `a_i`, `b_i`, and the objective variable `m`,
//! minimized subject to
//!
//! - `0 <= a(R) <= 1`, `0 <= b(R) <= 1` (box),
//! - each side summing to 1,
//! - `a_i = sum of a(R) over R containing i` (same for `b_i`),
//! - `m >= a_i + b_i` for every color.
//!
//! Sets outside the support are simply not materialized, which pins them
//! to zero.

use crate::colorset::ColorSet;
use crate::error::{Error, Result};
use crate::profile::{Side, SolutionProfile};
use crate::rational::Rational;
use std::cmp::Ordering;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

/// `minimize variables[objective]` subject to the rows and optional unit
/// boxes. All variables are implicitly nonnegative; `unit_box[j]` adds
/// `x_j <= 1`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub variables: Vec<String>,
    pub objective: usize,
    pub constraints: Vec<(Vec<Rational>, Rel, Rational)>,
    pub unit_box: Vec<bool>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        assignment: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

fn validate(lp: &LinearProgram) -> Result<()> {
    let n = lp.variables.len();
    if n == 0 {
        return Err(Error::domain("LP has no variables"));
    }
    if lp.objective >= n {
        return Err(Error::domain("objective variable index out of range"));
    }
    if lp.unit_box.len() != n {
        return Err(Error::domain("unit_box length does not match variables"));
    }
    let mut objective_appears = false;
    for (coeffs, _, _) in &lp.constraints {
        if coeffs.len() != n {
            return Err(Error::domain(
                "constraint row length does not match variables",
            ));
        }
        if !coeffs[lp.objective].is_zero() {
            objective_appears = true;
        }
    }
    if !objective_appears && !lp.unit_box[lp.objective] {
        return Err(Error::domain("objective variable appears in no constraint"));
    }
    Ok(())
}

/// Substitute an assignment into every constraint (including boxes and
/// nonnegativity) and check it exactly.
pub fn check_assignment(lp: &LinearProgram, assignment: &[Rational]) -> bool {
    if assignment.len() != lp.variables.len() {
        return false;
    }
    for x in assignment {
        if x.is_negative() {
            return false;
        }
    }
    for (j, boxed) in lp.unit_box.iter().enumerate() {
        if *boxed && assignment[j] > Rational::one() {
            return false;
        }
    }
    for (coeffs, rel, rhs) in &lp.constraints {
        let lhs: Rational = coeffs.iter().zip(assignment).map(|(c, x)| c * x).sum();
        let ok = match rel {
            Rel::Le => lhs <= *rhs,
            Rel::Eq => lhs == *rhs,
            Rel::Ge => lhs >= *rhs,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Dense simplex tableau in standard form: rows `Ax = b` with `b >= 0`,
/// slack and artificial columns appended after the structural variables.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    obj: Vec<Rational>,
    obj_value: Rational,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    /// Express the objective row in terms of the current basis (price out
    /// every basic column).
    fn price_out(&mut self) {
        for (i, &bv) in self.basis.iter().enumerate() {
            if !self.obj[bv].is_zero() {
                let factor = self.obj[bv].clone();
                for j in 0..self.cols {
                    let delta = &factor * &self.rows[i][j];
                    self.obj[j] -= &delta;
                }
                self.obj_value -= &(&factor * &self.rhs[i]);
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        let inv = pivot.recip().expect("pivot element is nonzero");
        for j in 0..self.cols {
            self.rows[row][j] = &self.rows[row][j] * &inv;
        }
        self.rhs[row] = &self.rhs[row] * &inv;
        for i in 0..self.rows.len() {
            if i != row && !self.rows[i][col].is_zero() {
                let factor = self.rows[i][col].clone();
                for j in 0..self.cols {
                    let delta = &factor * &self.rows[row][j];
                    self.rows[i][j] -= &delta;
                }
                let delta = &factor * &self.rhs[row];
                self.rhs[i] -= &delta;
            }
        }
        if !self.obj[col].is_zero() {
            let factor = self.obj[col].clone();
            for j in 0..self.cols {
                let delta = &factor * &self.rows[row][j];
                self.obj[j] -= &delta;
            }
            let delta = &factor * &self.rhs[row];
            self.obj_value -= &delta;
        }
        self.basis[row] = col;
    }

    /// Minimize the current objective with Bland's rule: entering column is
    /// the lowest-index one with a negative reduced cost, leaving row is the
    /// ratio-test winner with the lowest basic variable index. Returns false
    /// on unboundedness.
    fn run_simplex(&mut self, allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.cols).find(|&j| allowed[j] && self.obj[j].is_negative());
            let col = match entering {
                Some(c) => c,
                None => return true,
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][col];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => match ratio.cmp(lr) {
                            Ordering::Less => true,
                            Ordering::Equal => self.basis[i] < self.basis[*li],
                            Ordering::Greater => false,
                        },
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Exact minimization. The witness assignment satisfies every constraint
/// exactly (`check_assignment` re-verifies it).
pub fn solve_min(lp: &LinearProgram) -> Result<LpOutcome> {
    validate(lp)?;
    let n = lp.variables.len();

    // Collect rows: stated constraints plus unit boxes, normalized to
    // nonnegative right-hand sides.
    let mut rows: Vec<(Vec<Rational>, Rel, Rational)> = lp.constraints.clone();
    for (j, boxed) in lp.unit_box.iter().enumerate() {
        if *boxed {
            let mut coeffs = vec![Rational::zero(); n];
            coeffs[j] = Rational::one();
            rows.push((coeffs, Rel::Le, Rational::one()));
        }
    }
    for (coeffs, rel, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for c in coeffs.iter_mut() {
                *c = -&*c;
            }
            *rhs = -&*rhs;
            *rel = match rel {
                Rel::Le => Rel::Ge,
                Rel::Eq => Rel::Eq,
                Rel::Ge => Rel::Le,
            };
        }
    }

    let m = rows.len();
    let n_slack: usize = rows.iter().filter(|(_, rel, _)| *rel != Rel::Eq).count();
    let n_art: usize = rows.iter().filter(|(_, rel, _)| *rel != Rel::Le).count();
    let cols = n + n_slack + n_art;

    let mut t = Tableau {
        rows: vec![vec![Rational::zero(); cols]; m],
        rhs: vec![Rational::zero(); m],
        obj: vec![Rational::zero(); cols],
        obj_value: Rational::zero(),
        basis: vec![0; m],
        cols,
    };

    let mut slack_at = n;
    let mut art_at = n + n_slack;
    let mut artificials = Vec::new();
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        for (j, c) in coeffs.iter().enumerate() {
            t.rows[i][j] = c.clone();
        }
        t.rhs[i] = rhs.clone();
        match rel {
            Rel::Le => {
                t.rows[i][slack_at] = Rational::one();
                t.basis[i] = slack_at;
                slack_at += 1;
            }
            Rel::Ge => {
                t.rows[i][slack_at] = -Rational::one();
                slack_at += 1;
                t.rows[i][art_at] = Rational::one();
                t.basis[i] = art_at;
                artificials.push(art_at);
                art_at += 1;
            }
            Rel::Eq => {
                t.rows[i][art_at] = Rational::one();
                t.basis[i] = art_at;
                artificials.push(art_at);
                art_at += 1;
            }
        }
    }

    // Phase 1: minimize the sum of artificials.
    if !artificials.is_empty() {
        for &a in &artificials {
            t.obj[a] = Rational::one();
        }
        t.price_out();
        let allowed = vec![true; cols];
        let bounded = t.run_simplex(&allowed);
        debug_assert!(bounded, "phase 1 objective is bounded below by 0");
        if t.obj_value.is_negative() {
            // obj_value tracks -(current objective); phase-1 optimum > 0
            // means no feasible point.
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining artificials out of the basis; a row where no
        // structural/slack column can pivot is redundant and harmless
        // (the artificial stays basic at zero and is barred from re-entry).
        for i in 0..m {
            if artificials.contains(&t.basis[i]) {
                if let Some(col) = (0..n + n_slack).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, col);
                }
            }
        }
    }

    // Phase 2: minimize the designated variable, artificials barred.
    t.obj = vec![Rational::zero(); cols];
    t.obj_value = Rational::zero();
    t.obj[lp.objective] = Rational::one();
    t.price_out();
    let mut allowed = vec![true; cols];
    for &a in &artificials {
        allowed[a] = false;
    }
    if !t.run_simplex(&allowed) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut assignment = vec![Rational::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            assignment[bv] = t.rhs[i].clone();
        }
    }
    // obj_value accumulated -(objective); the optimum is its negation.
    let value = -t.obj_value;
    debug_assert!(check_assignment(lp, &assignment));
    debug_assert_eq!(assignment[lp.objective], value);
    Ok(LpOutcome::Optimal { value, assignment })
}

/// Variable layout of a coloring LP, for mapping assignments back to
/// profiles and human-readable certificates.
pub struct ColoringLp {
    pub lp: LinearProgram,
    pub r: u16,
    p1: Vec<ColorSet>,
    p2: Vec<ColorSet>,
}

impl ColoringLp {
    /// Extract the profile part of an optimal assignment; the variable
    /// layout is `a(R)` for R in P1, `b(R)` for R in P2, the marginals,
    /// then `m`. Zeros are omitted.
    pub fn profile_of(&self, assignment: &[Rational]) -> SolutionProfile {
        let mut profile = SolutionProfile::new(self.r);
        for (k, set) in self.p1.iter().enumerate() {
            profile.set(Side::A, *set, assignment[k].clone());
        }
        for (k, set) in self.p2.iter().enumerate() {
            profile.set(Side::B, *set, assignment[self.p1.len() + k].clone());
        }
        profile
    }
}

/// Build the coloring LP for a support pair. Families are deduplicated and
/// put in canonical order, which fixes the variable order and hence the
/// (Bland-determined) optimal vertex reported.
pub fn build_coloring_lp(r: u16, p1: &[ColorSet], p2: &[ColorSet]) -> Result<ColoringLp> {
    if r == 0 {
        return Err(Error::domain("r must be positive"));
    }
    let canon = |fam: &[ColorSet]| -> Result<Vec<ColorSet>> {
        let mut v: Vec<ColorSet> = fam.to_vec();
        for s in &v {
            if s.r() != r {
                return Err(Error::domain(format!(
                    "support set {s} is over r={}, expected r={r}",
                    s.r()
                )));
            }
        }
        v.sort();
        v.dedup();
        Ok(v)
    };
    let p1 = canon(p1)?;
    let p2 = canon(p2)?;
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::domain("empty support family"));
    }

    let ra = r as usize;
    let na = p1.len();
    let nb = p2.len();
    let n = na + nb + 2 * ra + 1;
    let idx_a = |k: usize| k;
    let idx_b = |k: usize| na + k;
    let idx_ai = |i: usize| na + nb + i;
    let idx_bi = |i: usize| na + nb + ra + i;
    let idx_m = na + nb + 2 * ra;

    let mut variables = Vec::with_capacity(n);
    for s in &p1 {
        variables.push(format!("a({s})"));
    }
    for s in &p2 {
        variables.push(format!("b({s})"));
    }
    for i in 1..=r {
        variables.push(format!("a_{i}"));
    }
    for i in 1..=r {
        variables.push(format!("b_{i}"));
    }
    variables.push("m".to_string());

    let mut constraints = Vec::new();
    let zero_row = || vec![Rational::zero(); n];

    // each side sums to 1
    let mut row = zero_row();
    for k in 0..na {
        row[idx_a(k)] = Rational::one();
    }
    constraints.push((row, Rel::Eq, Rational::one()));
    let mut row = zero_row();
    for k in 0..nb {
        row[idx_b(k)] = Rational::one();
    }
    constraints.push((row, Rel::Eq, Rational::one()));

    // marginal definitions
    for i in 1..=r {
        let mut row = zero_row();
        row[idx_ai((i - 1) as usize)] = Rational::one();
        for (k, s) in p1.iter().enumerate() {
            if s.contains(i) {
                row[idx_a(k)] = -Rational::one();
            }
        }
        constraints.push((row, Rel::Eq, Rational::zero()));

        let mut row = zero_row();
        row[idx_bi((i - 1) as usize)] = Rational::one();
        for (k, s) in p2.iter().enumerate() {
            if s.contains(i) {
                row[idx_b(k)] = -Rational::one();
            }
        }
        constraints.push((row, Rel::Eq, Rational::zero()));
    }

    // m dominates every coverage a_i + b_i
    for i in 0..ra {
        let mut row = zero_row();
        row[idx_ai(i)] = Rational::one();
        row[idx_bi(i)] = Rational::one();
        row[idx_m] = -Rational::one();
        constraints.push((row, Rel::Le, Rational::zero()));
    }

    // unit box on the distribution variables only; marginals and m are
    // bounded through the equalities
    let mut unit_box = vec![false; n];
    unit_box[..na + nb].fill(true);

    Ok(ColoringLp {
        lp: LinearProgram {
            variables,
            objective: idx_m,
            constraints,
            unit_box,
        },
        r,
        p1,
        p2,
    })
}

fn has_disjoint_cross_pair(p1: &[ColorSet], p2: &[ColorSet]) -> bool {
    p1.iter().any(|r1| p2.iter().any(|r2| r1.is_disjoint(r2)))
}

/// `h_r(P1, P2)`: 2 when the pair admits a disjoint cross pair (including
/// any empty set, which is disjoint from everything) or when either family
/// is empty (the restricted LP would be infeasible, and 2 is always
/// achievable); otherwise the exact LP optimum. Always in [0, 2].
pub fn h_value(r: u16, p1: &[ColorSet], p2: &[ColorSet]) -> Result<Rational> {
    Ok(h_witness(r, p1, p2)?.0)
}

/// `h_value` plus the witnessing profile when the value comes from an LP
/// solve (`None` for the guarded value 2).
pub fn h_witness(
    r: u16,
    p1: &[ColorSet],
    p2: &[ColorSet],
) -> Result<(Rational, Option<SolutionProfile>)> {
    if r == 0 {
        return Err(Error::domain("r must be positive"));
    }
    for s in p1.iter().chain(p2.iter()) {
        if s.r() != r {
            return Err(Error::domain(format!(
                "support set {s} is over r={}, expected r={r}",
                s.r()
            )));
        }
    }
    if p1.is_empty() || p2.is_empty() || has_disjoint_cross_pair(p1, p2) {
        return Ok((Rational::from_int(2), None));
    }
    let coloring = build_coloring_lp(r, p1, p2)?;
    match solve_min(&coloring.lp)? {
        LpOutcome::Optimal { value, assignment } => {
            let profile = coloring.profile_of(&assignment);
            Ok((value, Some(profile)))
        }
        // Unreachable for nonempty families without disjoint pairs: setting
        // all mass on one set per side is always feasible.
        _ => Err(Error::domain("coloring LP unexpectedly infeasible")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn cs(rr: u16, colors: &[u16]) -> ColorSet {
        ColorSet::from_colors(rr, colors.iter().copied())
    }

    fn lp_min_of_maxima() -> LinearProgram {
        // minimize m subject to m >= 3/4, m >= 1/2
        LinearProgram {
            variables: vec!["m".into()],
            objective: 0,
            constraints: vec![
                (vec![Rational::one()], Rel::Ge, r(3, 4)),
                (vec![Rational::one()], Rel::Ge, r(1, 2)),
            ],
            unit_box: vec![false],
        }
    }

    #[test]
    fn minimize_over_lower_bounds() {
        match solve_min(&lp_min_of_maxima()).unwrap() {
            LpOutcome::Optimal { value, assignment } => {
                assert_eq!(value, r(3, 4));
                assert_eq!(assignment[0], r(3, 4));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn symmetric_split() {
        // minimize m s.t. x + y = 1, m >= x, m >= y, x,y in [0,1]
        let lp = LinearProgram {
            variables: vec!["x".into(), "y".into(), "m".into()],
            objective: 2,
            constraints: vec![
                (
                    vec![Rational::one(), Rational::one(), Rational::zero()],
                    Rel::Eq,
                    Rational::one(),
                ),
                (
                    vec![Rational::one(), Rational::zero(), -Rational::one()],
                    Rel::Le,
                    Rational::zero(),
                ),
                (
                    vec![Rational::zero(), Rational::one(), -Rational::one()],
                    Rel::Le,
                    Rational::zero(),
                ),
            ],
            unit_box: vec![true, true, false],
        };
        match solve_min(&lp).unwrap() {
            LpOutcome::Optimal { value, assignment } => {
                assert_eq!(value, r(1, 2));
                assert!(check_assignment(&lp, &assignment));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        // x >= 2, x in [0,1]
        let lp = LinearProgram {
            variables: vec!["x".into()],
            objective: 0,
            constraints: vec![(vec![Rational::one()], Rel::Ge, r(2, 1))],
            unit_box: vec![true],
        };
        assert!(matches!(solve_min(&lp).unwrap(), LpOutcome::Infeasible));
    }

    #[test]
    fn designated_variable_objective_floors_at_zero() {
        // All variables are nonnegative and the objective is one of them,
        // so minimization can never be unbounded; x tied to y still stops
        // at the floor.
        let lp = LinearProgram {
            variables: vec!["x".into(), "y".into()],
            objective: 0,
            constraints: vec![(
                vec![Rational::one(), -Rational::one()],
                Rel::Eq,
                Rational::zero(),
            )],
            unit_box: vec![false, false],
        };
        match solve_min(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, Rational::zero()),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn determinism() {
        let lp = lp_min_of_maxima();
        let a = solve_min(&lp).unwrap();
        let b = solve_min(&lp).unwrap();
        match (a, b) {
            (
                LpOutcome::Optimal { assignment: x, .. },
                LpOutcome::Optimal { assignment: y, .. },
            ) => assert_eq!(x, y),
            _ => panic!("expected optimal"),
        }
    }

    #[test]
    fn two_color_lp_optimum() {
        let p1 = [cs(2, &[1]), cs(2, &[2])];
        let p2 = [cs(2, &[1, 2])];
        let coloring = build_coloring_lp(2, &p1, &p2).unwrap();
        match solve_min(&coloring.lp).unwrap() {
            LpOutcome::Optimal { value, assignment } => {
                assert_eq!(value, r(3, 2));
                assert!(check_assignment(&coloring.lp, &assignment));
                let profile = coloring.profile_of(&assignment);
                assert!(profile.is_valid());
                assert_eq!(profile.marginals().unwrap().objective(), &r(3, 2));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn single_color_forced_full_coverage() {
        let value = h_value(1, &[cs(1, &[1])], &[cs(1, &[1])]).unwrap();
        assert_eq!(value, r(2, 1));
    }

    #[test]
    fn nine_color_grid_pair() {
        let p1 = [cs(9, &[1, 4, 7]), cs(9, &[2, 5, 8]), cs(9, &[3, 6, 9])];
        let p2 = [cs(9, &[1, 2, 3]), cs(9, &[4, 5, 6]), cs(9, &[7, 8, 9])];
        assert_eq!(h_value(9, &p1, &p2).unwrap(), r(2, 3));
    }

    #[test]
    fn h_guards() {
        // disjoint cross pair
        assert_eq!(h_value(2, &[cs(2, &[1])], &[cs(2, &[2])]).unwrap(), r(2, 1));
        // empty family
        assert_eq!(h_value(2, &[], &[cs(2, &[1])]).unwrap(), r(2, 1));
        // empty set in a family is disjoint from everything
        assert_eq!(
            h_value(2, &[ColorSet::empty(2)], &[cs(2, &[1, 2])]).unwrap(),
            r(2, 1)
        );
    }

    #[test]
    fn three_color_figure_pair() {
        let p1 = [cs(3, &[1]), cs(3, &[2, 3])];
        let p2 = [cs(3, &[1, 2]), cs(3, &[1, 3])];
        let (value, witness) = h_witness(3, &p1, &p2).unwrap();
        assert_eq!(value, r(5, 4));
        let profile = witness.unwrap();
        assert!(profile.is_valid());
        assert_eq!(profile.marginals().unwrap().objective(), &r(5, 4));
    }

    #[test]
    fn mismatched_palette_rejected() {
        assert!(h_value(3, &[cs(2, &[1])], &[cs(3, &[1])]).is_err());
        assert!(build_coloring_lp(2, &[cs(3, &[1])], &[cs(3, &[1])]).is_err());
    }

    #[test]
    fn support_growth_never_increases_optimum() {
        // Adding a set to P1 (keeping compatibility) adds a variable and
        // cannot increase the minimum.
        let base = h_value(3, &[cs(3, &[1, 2])], &[cs(3, &[1, 3]), cs(3, &[2, 3])]).unwrap();
        let grown = h_value(
            3,
            &[cs(3, &[1, 2]), cs(3, &[1, 2, 3])],
            &[cs(3, &[1, 3]), cs(3, &[2, 3])],
        )
        .unwrap();
        assert!(grown <= base);
    }
}
