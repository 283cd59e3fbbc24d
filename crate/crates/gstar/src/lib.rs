//! Exact computation of the optimal monochromatic-coverage constant `g*(r)`
//! for `r`-edge-colorings of complete bipartite graphs `K_{n,n}`.
//!
//! For a coloring of `K_{n,n}`, a color *touches* a vertex when some edge at
//! that vertex carries it; `g(n,r)` is the minimum over colorings of the
//! maximum number of vertices a single color touches. Per column/row
//! proportions this reduces to a family of exact-rational linear programs
//! whose minimum over support pairs is `g*(r)`, with
//! `g*(r) * n <= g(n,r) <= g*(r) * n + C_r`.
//!
//! The crate provides:
//! - exact rational arithmetic and color-subset primitives ([`rational`],
//!   [`colorset`]),
//! - solution profiles `a(R), b(R)` with validation and the executable
//!   identities they satisfy ([`profile`]),
//! - an exact simplex solver and the restricted coloring LP `h_r(P1,P2)`
//!   ([`lp`]),
//! - exhaustive support-pair search with symmetry reduction and verifiable
//!   certificates ([`search`]),
//! - the known optimal / near-optimal profile constructions and bound
//!   tables ([`constructions`]),
//! - concrete coloring squares, discretization, and a brute-force `g(n,r)`
//!   oracle ([`grid`]),
//! - exact evaluators for the closed-form area bounds plus an independent
//!   numeric maximizer ([`bounds`]).

pub mod bounds;
pub mod colorset;
pub mod constructions;
pub mod error;
pub mod grid;
pub mod lp;
pub mod profile;
pub mod rational;
pub mod search;

pub use colorset::ColorSet;
pub use error::{Error, Result};
pub use grid::ColoringSquare;
pub use profile::{Marginals, Side, SolutionProfile};
pub use rational::{lcm_denominators, Rational};
pub use search::Certificate;

/// Default budget for the support-pair enumeration (pairs visited) and the
/// brute-force oracle (colorings), overridable via `GSTAR_BUDGET`.
pub const DEFAULT_BUDGET: u64 = 1 << 24;
