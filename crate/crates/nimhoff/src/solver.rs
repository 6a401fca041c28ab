//! The incremental column-by-column engine for altered Wythoff games.
//!
//! Columns are computed left to right. For each column the scan walks rows
//! upward; a cell is the column's P-position when its row, its falling
//! diagonal, and the column below it are all still free of P-positions
//! (dictated cells keep their dictated labels instead). Once every column
//! left of `t` is done, two structures summarize everything the scan needs:
//! which rows hold a P-position, and which diagonals do. Diagonals are keyed
//! globally by c = y − x; the per-column row window [ℓ, u] of touched
//! diagonals is recovered arithmetically as c + t.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::game::{Alteration, Label, Position};
use crate::strings::BitString;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum SolverError {
    /// The upward scan passed the provable height bound without finding a
    /// P-position; this indicates a bug, not a property of the input.
    #[error("column {column}: no P-position found by row {row}")]
    BoundViolation { column: i64, row: i64 },
    #[error("no saturated natural column within {0} columns")]
    CapExceeded(i64),
    #[error("no P-positions recorded yet")]
    NoPositions,
}

/// How a computed column relates to the tracked diagonal window [ℓ, u] of
/// the previous column.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ColumnCase {
    /// Column left of the alteration bound; labels may be dictated.
    Altered,
    /// No prior P-positions, or a first natural column whose P-position
    /// falls outside the three regular patterns below.
    Boundary,
    /// P-position at row ℓ: the window grows to (ℓ, u+1).
    AtLower,
    /// P-position at row u+2: the window shifts to (ℓ+1, u+2).
    AboveUpper,
    /// P-position strictly inside the window, filling an unused diagonal:
    /// the window shifts to (ℓ+1, u+1).
    GapFill,
}

/// One computed column and where its P-positions landed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColumnResult {
    pub column: i64,
    pub found: Vec<Position>,
    pub case: ColumnCase,
}

/// The engine's mutable state: the next column index plus the row/diagonal
/// coverage accumulated so far.
#[derive(Clone, Debug)]
pub struct SolverState {
    alteration: Alteration,
    t: i64,
    used_rows: Vec<bool>,
    used_diags: HashSet<i64>,
    diag_min: i64,
    diag_max: i64,
    used_cols: BTreeSet<i64>,
    p_positions: Vec<Position>,
}

impl SolverState {
    pub fn new(alteration: Alteration) -> Self {
        SolverState {
            alteration,
            t: 0,
            used_rows: Vec::new(),
            used_diags: HashSet::new(),
            diag_min: 0,
            diag_max: 0,
            used_cols: BTreeSet::new(),
            p_positions: Vec::new(),
        }
    }

    pub fn alteration(&self) -> &Alteration {
        &self.alteration
    }

    /// The next column the engine will compute.
    pub fn next_column(&self) -> i64 {
        self.t
    }

    pub fn p_positions(&self) -> &[Position] {
        &self.p_positions
    }

    pub fn used_cols(&self) -> &BTreeSet<i64> {
        &self.used_cols
    }

    fn row_used(&self, y: i64) -> bool {
        debug_assert!(y >= 0);
        self.used_rows.get(y as usize).copied().unwrap_or(false)
    }

    fn diag_used(&self, c: i64) -> bool {
        self.used_diags.contains(&c)
    }

    fn record(&mut self, p: Position) {
        // Dictated columns may stack several P-positions on one row or
        // diagonal; the coverage flags simply saturate.
        let y = p.y as usize;
        if y >= self.used_rows.len() {
            self.used_rows.resize(y + 1, false);
        }
        self.used_rows[y] = true;
        let c = p.y - p.x;
        if self.used_diags.is_empty() {
            self.diag_min = c;
            self.diag_max = c;
        } else {
            self.diag_min = self.diag_min.min(c);
            self.diag_max = self.diag_max.max(c);
        }
        self.used_diags.insert(c);
        self.used_cols.insert(p.x);
        self.p_positions.push(p);
    }

    /// Lowest row of the last computed column whose falling diagonal holds a
    /// P-position (ℓ), or None before the first P-position exists.
    pub fn lower(&self) -> Option<i64> {
        if self.used_diags.is_empty() {
            None
        } else {
            Some(self.diag_min + self.t - 1)
        }
    }

    /// Highest such row (u).
    pub fn upper(&self) -> Option<i64> {
        if self.used_diags.is_empty() {
            None
        } else {
            Some(self.diag_max + self.t - 1)
        }
    }

    /// True when the used diagonals form a contiguous interval.
    pub fn is_saturated(&self) -> Result<bool, SolverError> {
        Ok(self.unused_diag_count()? == 0)
    }

    /// Number of diagonals strictly inside [min, max] without a P-position.
    pub fn unused_diag_count(&self) -> Result<i64, SolverError> {
        if self.used_diags.is_empty() {
            return Err(SolverError::NoPositions);
        }
        Ok(self.diag_max - self.diag_min + 1 - self.used_diags.len() as i64)
    }

    /// The row occupancy over [ℓ, u] as a bitstring (used row → 1).
    pub fn extract_bitstring(&self) -> Result<BitString, SolverError> {
        let l = self.lower().ok_or(SolverError::NoPositions)?;
        let u = self.upper().expect("lower implies upper");
        Ok(BitString::from_bits((l..=u).map(|y| self.row_used(y))))
    }

    /// Computes the next column, updates the state, and reports what was
    /// found. Errors only if the scan overruns the provable height bound.
    pub fn advance_column(&mut self) -> Result<ColumnResult, SolverError> {
        let t = self.t;
        let m_x = self.alteration.m_x();
        let m_y = self.alteration.m_y();
        // No P-position in column t can sit above m_y + 2t.
        let scan_cap = m_y + 2 * t;
        let window = match (self.lower(), self.upper()) {
            (Some(l), Some(u)) => Some((l, u)),
            _ => None,
        };

        let mut found = Vec::new();
        if t < m_x {
            let mut y = 0;
            loop {
                if y >= m_y && !found.is_empty() {
                    break;
                }
                if y > scan_cap {
                    return Err(SolverError::BoundViolation { column: t, row: y });
                }
                match self.alteration.dictate(Position::new(t, y)) {
                    Some(Label::P) => found.push(Position::new(t, y)),
                    Some(Label::N) => {}
                    None => {
                        if found.is_empty() && !self.row_used(y) && !self.diag_used(y - t) {
                            found.push(Position::new(t, y));
                        }
                    }
                }
                y += 1;
            }
        } else {
            // Natural column: exactly one P-position. After the first
            // natural column every row below ℓ is known to be used, so the
            // scan can start at ℓ.
            let mut y = match window {
                Some((l, _)) if t > m_x => l,
                _ => 0,
            };
            loop {
                if y > scan_cap {
                    return Err(SolverError::BoundViolation { column: t, row: y });
                }
                if !self.row_used(y) && !self.diag_used(y - t) {
                    found.push(Position::new(t, y));
                    break;
                }
                y += 1;
            }
        }

        let case = if t < m_x {
            ColumnCase::Altered
        } else {
            match window {
                None => ColumnCase::Boundary,
                Some((l, u)) => {
                    let y = found[0].y;
                    if y == l {
                        ColumnCase::AtLower
                    } else if y == u + 2 {
                        ColumnCase::AboveUpper
                    } else if l + 1 < y && y < u + 1 {
                        ColumnCase::GapFill
                    } else {
                        // Only the first natural column can land outside
                        // the pattern (rows below ℓ are not yet filled in).
                        debug_assert_eq!(t, m_x);
                        ColumnCase::Boundary
                    }
                }
            }
        };

        for &p in &found {
            self.record(p);
        }
        self.t += 1;
        Ok(ColumnResult {
            column: t,
            found,
            case,
        })
    }

    /// Advances until the first natural column whose resulting state is
    /// saturated and returns that column index, leaving the state one
    /// column past it. Returns immediately if the state is already there.
    pub fn run_to_saturation(&mut self, cap: i64) -> Result<i64, SolverError> {
        let m_x = self.alteration.m_x();
        if self.t > m_x && !self.used_diags.is_empty() && self.is_saturated()? {
            return Ok(self.t - 1);
        }
        loop {
            if self.t > cap {
                return Err(SolverError::CapExceeded(cap));
            }
            let col = self.advance_column()?.column;
            if col >= m_x && self.is_saturated()? {
                return Ok(col);
            }
        }
    }
}

/// Runs a fresh engine through columns 0..=t_max and returns every
/// P-position found together with the per-column trace.
pub fn solve(
    alteration: &Alteration,
    t_max: i64,
) -> Result<(BTreeSet<Position>, Vec<ColumnResult>), SolverError> {
    assert!(t_max >= 0);
    let mut state = SolverState::new(alteration.clone());
    let mut trace = Vec::with_capacity(t_max as usize + 1);
    while state.next_column() <= t_max {
        trace.push(state.advance_column()?);
    }
    Ok((state.p_positions().iter().copied().collect(), trace))
}
