//! Shared vocabulary for two-pile subtraction games on the quarter-plane:
//! positions, move rules, alterations, and dense P/N label grids.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A lattice point, possibly with negative coordinates (e.g. after a
/// translation). Game positions proper are [`Position`].
pub type Point = (i64, i64);

/// A game state: the sizes of the two piles. Both are non-negative.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub x: i64,
    pub y: i64,
}

impl Position {
    /// Panics if either coordinate is negative.
    pub fn new(x: i64, y: i64) -> Self {
        assert!(
            x >= 0 && y >= 0,
            "pile sizes are non-negative, got ({x}, {y})"
        );
        Position { x, y }
    }

    pub fn point(self) -> Point {
        (self.x, self.y)
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The value of a position: P means the previous mover wins with optimal
/// play, N means the next mover does.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Label {
    P,
    N,
}

/// One move rule: subtract (k·a, k·b) from the piles, for any k ≥ 1 that
/// keeps both piles non-negative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Rule {
    pub a: i64,
    pub b: i64,
}

impl Rule {
    /// Panics on a negative component or on the null direction (0, 0).
    pub fn new(a: i64, b: i64) -> Self {
        assert!(
            a >= 0 && b >= 0 && (a, b) != (0, 0),
            "a rule is a non-zero pair of non-negative integers, got ({a}, {b})"
        );
        Rule { a, b }
    }
}

/// A non-empty ordered set of pairwise-distinct move rules.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    /// Panics if `rules` is empty or contains a duplicate.
    pub fn new(rules: Vec<Rule>) -> Self {
        assert!(!rules.is_empty(), "a rule set needs at least one rule");
        for (i, r) in rules.iter().enumerate() {
            assert!(!rules[..i].contains(r), "duplicate rule ({}, {})", r.a, r.b);
        }
        RuleSet { rules }
    }

    /// Take from pile 1, take from pile 2, or take equally from both:
    /// {(1,0), (0,1), (1,1)}.
    pub fn wythoff() -> Self {
        RuleSet::new(vec![Rule::new(1, 0), Rule::new(0, 1), Rule::new(1, 1)])
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// True when the rules equal {(1,0), (0,1), (1,1)} in any order.
    pub fn is_wythoff(&self) -> bool {
        let mut pairs: Vec<(i64, i64)> = self.rules.iter().map(|r| (r.a, r.b)).collect();
        pairs.sort_unstable();
        pairs == [(0, 1), (1, 0), (1, 1)]
    }
}

/// A position cannot be dictated as both P and N.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
#[error("position ({x}, {y}) is dictated as both P and N")]
pub struct OverlapError {
    pub x: i64,
    pub y: i64,
}

/// Finitely many positions whose labels are fixed in advance, together with
/// the smallest box [0, m_x) × [0, m_y) containing them all.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alteration {
    p_set: BTreeSet<Position>,
    n_set: BTreeSet<Position>,
    m_x: i64,
    m_y: i64,
}

impl Alteration {
    /// Builds an alteration from dictated P and N positions. Duplicates
    /// within a list are dropped; a position in both lists is an error.
    /// (m_x, m_y) is derived as 1 + the maximum coordinate over both sets,
    /// (0, 0) when the alteration is empty.
    pub fn new(
        p: impl IntoIterator<Item = Position>,
        n: impl IntoIterator<Item = Position>,
    ) -> Result<Self, OverlapError> {
        let p_set: BTreeSet<Position> = p.into_iter().collect();
        let n_set: BTreeSet<Position> = n.into_iter().collect();
        if let Some(both) = p_set.intersection(&n_set).next() {
            return Err(OverlapError {
                x: both.x,
                y: both.y,
            });
        }
        let m_x = p_set
            .iter()
            .chain(&n_set)
            .map(|q| q.x + 1)
            .max()
            .unwrap_or(0);
        let m_y = p_set
            .iter()
            .chain(&n_set)
            .map(|q| q.y + 1)
            .max()
            .unwrap_or(0);
        Ok(Alteration {
            p_set,
            n_set,
            m_x,
            m_y,
        })
    }

    /// The unaltered game.
    pub fn empty() -> Self {
        Alteration {
            p_set: BTreeSet::new(),
            n_set: BTreeSet::new(),
            m_x: 0,
            m_y: 0,
        }
    }

    /// Every cell of the a-wide, b-tall box at the origin dictated as P.
    pub fn solid_p_box(a: i64, b: i64) -> Self {
        assert!(
            a >= 1 && b >= 1,
            "box sides must be positive, got ({a}, {b})"
        );
        let cells = (0..a).flat_map(|x| (0..b).map(move |y| Position::new(x, y)));
        Alteration::new(cells, []).expect("a pure P box cannot overlap")
    }

    pub fn p_set(&self) -> &BTreeSet<Position> {
        &self.p_set
    }

    pub fn n_set(&self) -> &BTreeSet<Position> {
        &self.n_set
    }

    pub fn m_x(&self) -> i64 {
        self.m_x
    }

    pub fn m_y(&self) -> i64 {
        self.m_y
    }

    pub fn is_empty(&self) -> bool {
        self.p_set.is_empty() && self.n_set.is_empty()
    }

    /// The dictated label of `pos`, if any.
    pub fn dictate(&self, pos: Position) -> Option<Label> {
        if self.p_set.contains(&pos) {
            Some(Label::P)
        } else if self.n_set.contains(&pos) {
            Some(Label::N)
        } else {
            None
        }
    }
}

/// A dense P/N labeling of the rectangle [0, width) × [0, height) for some
/// rule set and alteration.
#[derive(Clone, PartialEq, Debug)]
pub struct LabelGrid {
    width: i64,
    height: i64,
    labels: Vec<Label>,
    ruleset: RuleSet,
    alteration: Alteration,
}

impl LabelGrid {
    pub(crate) fn from_parts(
        width: i64,
        height: i64,
        labels: Vec<Label>,
        ruleset: RuleSet,
        alteration: Alteration,
    ) -> Self {
        assert!(width >= 1 && height >= 1);
        assert_eq!(labels.len(), (width * height) as usize);
        let grid = LabelGrid {
            width,
            height,
            labels,
            ruleset,
            alteration,
        };
        debug_assert!(grid.dictated_cells_match());
        grid
    }

    fn dictated_cells_match(&self) -> bool {
        let alt = &self.alteration;
        alt.p_set()
            .iter()
            .chain(alt.n_set())
            .filter(|p| p.x < self.width && p.y < self.height)
            .all(|p| Some(self.label(p.x, p.y)) == alt.dictate(*p))
    }

    pub fn width(&self) -> i64 {
        self.width
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    /// Panics outside the rectangle.
    pub fn label(&self, x: i64, y: i64) -> Label {
        assert!(
            x >= 0 && x < self.width && y >= 0 && y < self.height,
            "({x}, {y}) outside {}x{} grid",
            self.width,
            self.height
        );
        self.labels[(y * self.width + x) as usize]
    }

    pub fn p_positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.height).flat_map(move |y| {
            (0..self.width)
                .filter(move |&x| self.label(x, y) == Label::P)
                .map(move |x| Position::new(x, y))
        })
    }

    pub fn ruleset(&self) -> &RuleSet {
        &self.ruleset
    }

    pub fn alteration(&self) -> &Alteration {
        &self.alteration
    }
}

/// Translates every point of a finite set by (dx, dy). The result may
/// contain negative coordinates.
pub fn offset_set<I>(set: I, dx: i64, dy: i64) -> BTreeSet<Point>
where
    I: IntoIterator<Item = Point>,
{
    set.into_iter().map(|(x, y)| (x + dx, y + dy)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pos(x: i64, y: i64) -> Position {
        Position::new(x, y)
    }

    #[test]
    fn misere_alteration_box() {
        let alt = Alteration::new([], [pos(0, 0)]).unwrap();
        assert_eq!((alt.m_x(), alt.m_y()), (1, 1));
        assert_eq!(alt.dictate(pos(0, 0)), Some(Label::N));
        assert_eq!(alt.dictate(pos(1, 0)), None);
    }

    #[test]
    fn empty_alteration_box() {
        let alt = Alteration::new([], []).unwrap();
        assert_eq!((alt.m_x(), alt.m_y()), (0, 0));
        assert!(alt.is_empty());
    }

    #[test]
    fn overlap_is_rejected() {
        let err = Alteration::new([pos(0, 0)], [pos(0, 0)]).unwrap_err();
        assert_eq!(err, OverlapError { x: 0, y: 0 });
    }

    #[test]
    fn duplicates_are_dropped() {
        let alt = Alteration::new([pos(1, 2), pos(1, 2)], [pos(0, 0)]).unwrap();
        assert_eq!(alt.p_set().len(), 1);
        // Rebuilding from its own sets is a no-op.
        let again =
            Alteration::new(alt.p_set().iter().copied(), alt.n_set().iter().copied()).unwrap();
        assert_eq!(alt, again);
    }

    #[test]
    fn box_bounds_are_tight() {
        let alt = Alteration::new([pos(2, 5), pos(4, 1)], [pos(0, 0)]).unwrap();
        assert_eq!((alt.m_x(), alt.m_y()), (5, 6));
        let all: Vec<Position> = alt.p_set().iter().chain(alt.n_set()).copied().collect();
        assert!(all.iter().all(|p| p.x < alt.m_x() && p.y < alt.m_y()));
        assert!(all.iter().any(|p| p.x == alt.m_x() - 1));
        assert!(all.iter().any(|p| p.y == alt.m_y() - 1));
    }

    #[test]
    fn offset_examples() {
        let s: BTreeSet<Point> = [(0, 0), (1, 2)].into_iter().collect();
        assert_eq!(offset_set(s.iter().copied(), 0, 0), s);
        let single: BTreeSet<Point> = [(0, 0)].into_iter().collect();
        assert_eq!(
            offset_set(single.iter().copied(), 12, 7),
            [(12, 7)].into_iter().collect()
        );
        let back: BTreeSet<Point> = [(1, 2)].into_iter().collect();
        assert_eq!(
            offset_set(back.iter().copied(), -1, -2),
            [(0, 0)].into_iter().collect()
        );
    }

    #[test]
    fn wythoff_recognition() {
        assert!(RuleSet::wythoff().is_wythoff());
        let reordered = RuleSet::new(vec![Rule::new(1, 1), Rule::new(0, 1), Rule::new(1, 0)]);
        assert!(reordered.is_wythoff());
        let other = RuleSet::new(vec![Rule::new(1, 0), Rule::new(0, 2), Rule::new(1, 1)]);
        assert!(!other.is_wythoff());
    }

    proptest! {
        #[test]
        fn offset_round_trips(
            points in proptest::collection::btree_set((0i64..500, 0i64..500), 0..40),
            dx in -300i64..300,
            dy in -300i64..300,
        ) {
            let shifted = offset_set(points.iter().copied(), dx, dy);
            prop_assert_eq!(shifted.len(), points.len());
            prop_assert_eq!(offset_set(shifted.into_iter(), -dx, -dy), points);
        }

        #[test]
        fn alteration_box_is_minimal(
            p in proptest::collection::btree_set((0i64..30, 0i64..30), 0..10),
            n in proptest::collection::btree_set((0i64..30, 0i64..30), 0..10),
        ) {
            let p: BTreeSet<Position> = p.into_iter().map(|(x, y)| pos(x, y)).collect();
            let n: BTreeSet<Position> = n.difference(&p.iter().map(|q| (q.x, q.y)).collect())
                .map(|&(x, y)| pos(x, y))
                .collect();
            let alt = Alteration::new(p.iter().copied(), n.iter().copied()).unwrap();
            let all: Vec<Position> = alt.p_set().iter().chain(alt.n_set()).copied().collect();
            if all.is_empty() {
                prop_assert_eq!((alt.m_x(), alt.m_y()), (0, 0));
            } else {
                prop_assert_eq!(alt.m_x(), all.iter().map(|q| q.x).max().unwrap() + 1);
                prop_assert_eq!(alt.m_y(), all.iter().map(|q| q.y).max().unwrap() + 1);
            }
        }
    }
}
