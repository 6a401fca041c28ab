//! The translation connecting an altered game to the unaltered one: three
//! ways to compute it (co-running bitstrings, row/diagonal/column counting,
//! and the closed form for solid boxes), plus the finite-radius similarity
//! ratio used to measure how close the translated sets actually are.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::game::{Alteration, Point};
use crate::solver::{solve, SolverError, SolverState};
use crate::strings::{defects, differ_by_defects, is_balanced, StringsError};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum OffsetError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Strings(#[from] StringsError),
    #[error("games did not align within {0} columns")]
    CapExceeded(i64),
}

/// Which construction produced an offset.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OffsetMethod {
    Unique,
    General,
    Box,
}

impl fmt::Display for OffsetMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OffsetMethod::Unique => "unique",
            OffsetMethod::General => "general",
            OffsetMethod::Box => "box",
        })
    }
}

/// Row/diagonal/column coverage of the P-positions in the dictated columns
/// 0..first_natural_column.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CoverageStats {
    pub rows: i64,
    pub diags: i64,
    pub cols: i64,
    /// First column right of every dictated cell; equals `cols`, since each
    /// dictated column acquires at least one P-position.
    pub first_natural_column: i64,
}

/// A computed translation (dx, dy) with provenance and diagnostics.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OffsetReport {
    pub dx: i64,
    pub dy: i64,
    pub method: OffsetMethod,
    pub t_sat: Option<i64>,
    pub defect_count: Option<usize>,
    pub coverage: Option<CoverageStats>,
}

impl fmt::Display for OffsetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "method: {}", self.method)?;
        writeln!(f, "dx: {}", self.dx)?;
        writeln!(f, "dy: {}", self.dy)?;
        if let Some(t) = self.t_sat {
            writeln!(f, "t_sat: {t}")?;
        }
        if let Some(d) = self.defect_count {
            writeln!(f, "defects: {d}")?;
        }
        if let Some(c) = self.coverage {
            writeln!(f, "rows: {}", c.rows)?;
            writeln!(f, "diags: {}", c.diags)?;
            writeln!(f, "cols: {}", c.cols)?;
        }
        Ok(())
    }
}

/// Constructive offset: run the altered game to saturation, read the
/// horizontal shift off the bitstring length (dx = u − ℓ − t, constant from
/// saturation on), then co-run the unaltered game dx columns ahead until the
/// two bitstrings differ only by defects; the vertical shift is the gap
/// between the two ℓ values at that moment.
pub fn unique_offset(alteration: &Alteration, cap: i64) -> Result<OffsetReport, OffsetError> {
    let mut altered = SolverState::new(alteration.clone());
    let t_sat = altered.run_to_saturation(cap)?;
    let shift =
        |st: &SolverState| st.upper().unwrap() - st.lower().unwrap() - (st.next_column() - 1);
    let dx = shift(&altered);
    for _ in 0..10 {
        altered.advance_column()?;
        assert_eq!(
            shift(&altered),
            dx,
            "shift must be constant after saturation"
        );
    }

    // The unaltered game runs dx columns ahead (behind, when dx < 0): at
    // altered column c both bitstrings then have length c + dx + 1.
    while altered.next_column() - 1 + dx < 0 {
        altered.advance_column()?;
    }
    let mut natural = SolverState::new(Alteration::empty());
    while natural.next_column() <= altered.next_column() - 1 + dx {
        natural.advance_column()?;
    }
    loop {
        let s_altered = altered.extract_bitstring()?;
        let s_natural = natural.extract_bitstring()?;
        debug_assert_eq!(s_altered.len(), s_natural.len());
        if is_balanced(&s_altered, &s_natural) && differ_by_defects(&s_altered, &s_natural)? {
            let dy = natural.lower().unwrap() - altered.lower().unwrap();
            let defect_count = defects(&s_altered, &s_natural)?.len();
            return Ok(OffsetReport {
                dx,
                dy,
                method: OffsetMethod::Unique,
                t_sat: Some(t_sat),
                defect_count: Some(defect_count),
                coverage: None,
            });
        }
        if altered.next_column() > cap {
            return Err(OffsetError::CapExceeded(cap));
        }
        altered.advance_column()?;
        natural.advance_column()?;
    }
}

/// Counting offset: run only the dictated columns, count the rows (r),
/// diagonals (d) and columns (c) holding P-positions, and return (d−c, d−r).
pub fn general_offset(alteration: &Alteration) -> Result<OffsetReport, OffsetError> {
    let boundary = alteration.m_x();
    let mut st = SolverState::new(alteration.clone());
    while st.next_column() < boundary {
        st.advance_column()?;
    }
    let rows = st
        .p_positions()
        .iter()
        .map(|p| p.y)
        .collect::<BTreeSet<i64>>()
        .len() as i64;
    let diags = st
        .p_positions()
        .iter()
        .map(|p| p.y - p.x)
        .collect::<BTreeSet<i64>>()
        .len() as i64;
    let cols = st.used_cols().len() as i64;
    assert_eq!(
        cols, boundary,
        "every dictated column acquires a P-position"
    );
    Ok(OffsetReport {
        dx: diags - cols,
        dy: diags - rows,
        method: OffsetMethod::General,
        t_sat: None,
        defect_count: None,
        coverage: Some(CoverageStats {
            rows,
            diags,
            cols,
            first_natural_column: boundary,
        }),
    })
}

/// Closed-form offset for the alteration that dictates the whole a-wide,
/// b-tall box at the origin as P: (b−1, a−1).
pub fn box_offset(a: i64, b: i64) -> OffsetReport {
    assert!(
        a >= 1 && b >= 1,
        "box sides must be positive, got ({a}, {b})"
    );
    OffsetReport {
        dx: b - 1,
        dy: a - 1,
        method: OffsetMethod::Box,
        t_sat: None,
        defect_count: None,
        coverage: None,
    }
}

/// Exact Jaccard ratio of two point sets inside the disk of radius
/// `radius`: |A∩B∩D| / |A∪B∩D|, defined as 1 when the union is empty.
pub fn similarity_ratio(a: &BTreeSet<Point>, b: &BTreeSet<Point>, radius: i64) -> Ratio<i64> {
    let in_disk = |p: &&Point| p.0 * p.0 + p.1 * p.1 <= radius * radius;
    let inter = a.intersection(b).filter(in_disk).count() as i64;
    let union = a.union(b).filter(in_disk).count() as i64;
    if union == 0 {
        Ratio::from_integer(1)
    } else {
        Ratio::new(inter, union)
    }
}

/// The P-positions of an altered game with x ≤ t_max, as raw points.
pub fn altered_p_points(
    alteration: &Alteration,
    t_max: i64,
) -> Result<BTreeSet<Point>, SolverError> {
    let (pset, _) = solve(alteration, t_max)?;
    Ok(pset.into_iter().map(|p| p.point()).collect())
}
