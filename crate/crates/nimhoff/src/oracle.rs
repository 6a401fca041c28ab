//! Ground-truth labeling for any Linear Nimhoff rule set and alteration,
//! plus the closed-form beams of the unaltered Wythoff game. Everything else
//! in the crate is validated against this module.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::game::{Alteration, Label, LabelGrid, Position, RuleSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum OracleError {
    #[error("beam slope estimation needs at least {needed} usable P-positions, found {found}")]
    InsufficientData { needed: usize, found: usize },
}

/// A named irrational beam direction with its double-precision value.
#[derive(Clone, Copy, Debug)]
pub struct BeamConstant {
    pub name: &'static str,
    pub exact_form: &'static str,
    pub value: f64,
}

/// The golden ratio; the unaltered game's beams have slopes φ and 1/φ.
pub const PHI: BeamConstant = BeamConstant {
    name: "phi",
    exact_form: "(1+sqrt(5))/2",
    value: 1.618_033_988_749_895,
};

pub const PHI_SQ: BeamConstant = BeamConstant {
    name: "phi^2",
    exact_form: "(3+sqrt(5))/2",
    value: 2.618033988749895,
};

// Beam steps of the rule set {(1,0), (0,2), (1,1)}: consecutive P-positions
// of the steep beam step by (1/sqrt(3), 1+1/sqrt(3)) on average, those of
// the shallow beam by (2+sqrt(3), 1+sqrt(3)).
pub const INV_SQRT_3: BeamConstant = BeamConstant {
    name: "1/sqrt(3)",
    exact_form: "1/sqrt(3)",
    value: 0.5773502691896258,
};

pub const ONE_PLUS_INV_SQRT_3: BeamConstant = BeamConstant {
    name: "1+1/sqrt(3)",
    exact_form: "1+1/sqrt(3)",
    value: 1.5773502691896257,
};

pub const TWO_PLUS_SQRT_3: BeamConstant = BeamConstant {
    name: "2+sqrt(3)",
    exact_form: "2+sqrt(3)",
    value: 3.732_050_807_568_877,
};

pub const ONE_PLUS_SQRT_3: BeamConstant = BeamConstant {
    name: "1+sqrt(3)",
    exact_form: "1+sqrt(3)",
    value: 2.732050807568877,
};

/// Integer square root ⌊√n⌋, exact for every input.
pub fn isqrt(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r > 0 && r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// ⌊φ·n⌋ in exact integer arithmetic: ⌊(n + ⌊√(5n²)⌋)/2⌋.
pub fn floor_phi(n: u64) -> u64 {
    let nn = n as u128;
    ((nn + isqrt(5 * nn * nn)) / 2) as u64
}

/// Both beams of the unaltered game for 0 ≤ n ≤ n_max: (⌊φ²n⌋, ⌊φn⌋) and
/// (⌊φn⌋, ⌊φ²n⌋), with ⌊φ²n⌋ = n + ⌊φn⌋.
pub fn wythoff_beams(n_max: u64) -> BTreeSet<Position> {
    let mut set = BTreeSet::new();
    for n in 0..=n_max {
        let lo = floor_phi(n);
        let hi = n + lo;
        assert!(
            hi <= i64::MAX as u64,
            "beam coordinate overflows i64 at n = {n}"
        );
        set.insert(Position::new(hi as i64, lo as i64));
        set.insert(Position::new(lo as i64, hi as i64));
    }
    set
}

/// Labels the rectangle [0, width) × [0, height) by retrograde analysis.
/// Dictated cells keep their dictated labels; any other cell is N exactly
/// when some move (x−ka, y−kb), k ≥ 1, lands in-quadrant on a P cell.
///
/// Cells are finalized in non-decreasing x+y order; every rule strictly
/// decreases x+y, so all predecessors of a cell are final when it is
/// reached. Per rule, a "P seen along this ray" flag is carried forward
/// cell-to-cell, so the whole grid costs O(cells · rules).
pub fn oracle_labels(
    ruleset: &RuleSet,
    alteration: &Alteration,
    width: i64,
    height: i64,
) -> LabelGrid {
    assert!(width >= 1 && height >= 1, "grid must be non-empty");
    let rules = ruleset.rules();
    let w = width as usize;
    let cells = w * height as usize;
    let mut labels = vec![Label::N; cells];
    // seen[r][c] = some (x−ka, y−kb) with k ≥ 0 is labeled P, for cell c
    let mut seen: Vec<Vec<bool>> = vec![vec![false; cells]; rules.len()];
    let idx = |x: i64, y: i64| y as usize * w + x as usize;

    for s in 0..width + height - 1 {
        let x_lo = (s - (height - 1)).max(0);
        let x_hi = s.min(width - 1);
        for x in x_lo..=x_hi {
            let y = s - x;
            let label = match alteration.dictate(Position::new(x, y)) {
                Some(l) => l,
                None => {
                    let mut next_wins = false;
                    for (ri, r) in rules.iter().enumerate() {
                        let (px, py) = (x - r.a, y - r.b);
                        if px >= 0 && py >= 0 && seen[ri][idx(px, py)] {
                            next_wins = true;
                            break;
                        }
                    }
                    if next_wins {
                        Label::N
                    } else {
                        Label::P
                    }
                }
            };
            labels[idx(x, y)] = label;
            for (ri, r) in rules.iter().enumerate() {
                let (px, py) = (x - r.a, y - r.b);
                seen[ri][idx(x, y)] =
                    label == Label::P || (px >= 0 && py >= 0 && seen[ri][idx(px, py)]);
            }
        }
    }
    LabelGrid::from_parts(width, height, labels, ruleset.clone(), alteration.clone())
}

/// Order-independent recheck of a finished grid straight from the move
/// definition, by scanning whole rays. Quadratic; meant for tests and the
/// `verify` command, not for production labeling.
pub fn labels_consistent(grid: &LabelGrid) -> bool {
    let rules = grid.ruleset().rules().to_vec();
    let alt = grid.alteration().clone();
    for y in 0..grid.height() {
        for x in 0..grid.width() {
            let actual = grid.label(x, y);
            if let Some(dictated) = alt.dictate(Position::new(x, y)) {
                if actual != dictated {
                    return false;
                }
                continue;
            }
            let mut reaches_p = false;
            'rules: for r in &rules {
                let (mut px, mut py) = (x - r.a, y - r.b);
                while px >= 0 && py >= 0 {
                    if grid.label(px, py) == Label::P {
                        reaches_p = true;
                        break 'rules;
                    }
                    px -= r.a;
                    py -= r.b;
                }
            }
            let expected = if reaches_p { Label::N } else { Label::P };
            if actual != expected {
                return false;
            }
        }
    }
    true
}

/// Least-squares slope through the origin and the worst perpendicular
/// residual, one entry per beam, sorted by slope.
///
/// P-positions outside the altered box are split into `expected_beams`
/// clusters by a 1-d k-means over their y/x ratios, seeded from the
/// outermost half of the points (where the ratios are closest to the true
/// slopes); points on the x = 0 column have no ratio and are ignored.
pub fn estimate_beam_slopes(
    grid: &LabelGrid,
    expected_beams: usize,
) -> Result<Vec<(f64, f64)>, OracleError> {
    assert!(expected_beams >= 1);
    let alt = grid.alteration();
    let pts: Vec<Position> = grid
        .p_positions()
        .filter(|p| !(p.x < alt.m_x() && p.y < alt.m_y()))
        .filter(|p| p.x > 0)
        .collect();
    let needed = 2 * expected_beams;
    if pts.len() < needed {
        return Err(OracleError::InsufficientData {
            needed,
            found: pts.len(),
        });
    }

    let mut by_norm = pts.clone();
    by_norm.sort_by_key(|p| std::cmp::Reverse(p.x * p.x + p.y * p.y));
    let outer = &by_norm[..by_norm.len().div_ceil(2)];
    let mut ratios: Vec<f64> = outer.iter().map(|p| p.y as f64 / p.x as f64).collect();
    ratios.sort_by(f64::total_cmp);

    let k = expected_beams;
    let mut centers: Vec<f64> = (0..k)
        .map(|i| ratios[(2 * i + 1) * (ratios.len() - 1) / (2 * k)])
        .collect();
    for _ in 0..100 {
        let mut sums = vec![0.0f64; k];
        let mut counts = vec![0usize; k];
        for &r in &ratios {
            let c = nearest(&centers, r);
            sums[c] += r;
            counts[c] += 1;
        }
        let next: Vec<f64> = (0..k)
            .map(|i| {
                if counts[i] > 0 {
                    sums[i] / counts[i] as f64
                } else {
                    centers[i]
                }
            })
            .collect();
        if next == centers {
            break;
        }
        centers = next;
    }

    let mut clusters: Vec<Vec<Position>> = vec![Vec::new(); k];
    for p in &pts {
        clusters[nearest(&centers, p.y as f64 / p.x as f64)].push(*p);
    }
    let mut out = Vec::with_capacity(k);
    for cluster in &clusters {
        if cluster.len() < 2 {
            return Err(OracleError::InsufficientData {
                needed: 2,
                found: cluster.len(),
            });
        }
        let (mut sxx, mut sxy) = (0.0f64, 0.0f64);
        for p in cluster {
            sxx += (p.x * p.x) as f64;
            sxy += (p.x * p.y) as f64;
        }
        let slope = sxy / sxx;
        let scale = (1.0 + slope * slope).sqrt();
        let max_residual = cluster
            .iter()
            .map(|p| (p.y as f64 - slope * p.x as f64).abs() / scale)
            .fold(0.0, f64::max);
        out.push((slope, max_residual));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

fn nearest(centers: &[f64], r: f64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &c) in centers.iter().enumerate() {
        let d = (r - c).abs();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}
