//! Solvers and analysis tools for altered Wythoff and Linear Nimhoff games.
//!
//! An *altered* game fixes the P/N labels of finitely many positions in
//! advance and computes the rest as usual. This crate provides:
//!
//! - [`game`]: positions, move rules, alterations, label grids.
//! - [`oracle`]: dense retrograde labeling for any Linear Nimhoff rule set,
//!   the exact closed-form beams of the unaltered Wythoff game, and beam
//!   slope estimation.
//! - [`solver`]: the incremental column-by-column engine for altered
//!   Wythoff games, with saturation tracking and bitstring extraction.
//! - [`strings`]: the bitstring calculus the engine reduces to after
//!   saturation — updates, the substitution morphism, balance, area between
//!   staircases, defects.
//! - [`offsets`]: the translation aligning an altered game with the
//!   unaltered one, computed three independent ways, plus finite-radius
//!   similarity ratios.
//! - [`config`] / [`render`] / [`cli`]: job files, PPM/SVG output, and the
//!   `nimhoff` command-line tool.

pub mod cli;
pub mod config;
pub mod game;
pub mod offsets;
pub mod oracle;
pub mod render;
pub mod solver;
pub mod strings;

pub use game::{Alteration, Label, LabelGrid, Point, Position, Rule, RuleSet};
