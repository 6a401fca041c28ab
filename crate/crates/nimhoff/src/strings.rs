//! The bitstring calculus behind the column engine: the Wythoff update, the
//! substitution morphism w (0 → 001, 1 → 01), balance, the area between two
//! string staircases, defects, and the coordinate maps that transport area
//! units through w.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::game::Point;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum StringsError {
    #[error("the empty string cannot be updated")]
    Empty,
    #[error("strings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("strings are not balanced")]
    NotBalanced,
    #[error("no result within {0} update steps")]
    CapExceeded(u64),
    #[error("invalid character {0:?}, expected '0' or '1'")]
    InvalidCharacter(char),
}

/// A finite sequence over {0, 1} with cached counts. Indexing in the public
/// API is 1-based, matching how defect indices are reported.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    bits: Vec<bool>,
    ones: usize,
}

impl BitString {
    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let ones = bits.iter().filter(|&&b| b).count();
        BitString { bits, ones }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    pub fn zeros(&self) -> usize {
        self.bits.len() - self.ones
    }

    /// The i-th character, 1-based. Panics out of range.
    pub fn bit(&self, i: usize) -> bool {
        assert!(
            i >= 1 && i <= self.bits.len(),
            "index {i} out of 1..={}",
            self.bits.len()
        );
        self.bits[i - 1]
    }

    /// Number of ones among the first `len` characters.
    pub fn ones_in_prefix(&self, len: usize) -> usize {
        assert!(len <= self.bits.len());
        self.bits[..len].iter().filter(|&&b| b).count()
    }

    fn as_slice(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = StringsError;

    fn from_str(s: &str) -> Result<Self, StringsError> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(StringsError::InvalidCharacter(other)),
            }
        }
        Ok(BitString::from_bits(bits))
    }
}

/// One step of the string rewrite: a leading 0 is flipped to 1 and a 0 is
/// appended; a leading 1 is removed and 01 is appended. Always lengthens the
/// string by one.
pub fn wythoff_update(s: &BitString) -> Result<BitString, StringsError> {
    let bits = s.as_slice();
    let &first = bits.first().ok_or(StringsError::Empty)?;
    let mut out = Vec::with_capacity(bits.len() + 1);
    if first {
        out.extend_from_slice(&bits[1..]);
        out.push(false);
        out.push(true);
    } else {
        out.push(true);
        out.extend_from_slice(&bits[1..]);
        out.push(false);
    }
    Ok(BitString::from_bits(out))
}

/// The substitution morphism: every 0 becomes 001 and every 1 becomes 01,
/// simultaneously. Applying it equals applying 2·zeros + ones single updates.
pub fn w_morphism(s: &BitString) -> BitString {
    let mut out = Vec::with_capacity(3 * s.zeros() + 2 * s.ones());
    for &b in s.as_slice() {
        if b {
            out.extend_from_slice(&[false, true]);
        } else {
            out.extend_from_slice(&[false, false, true]);
        }
    }
    BitString::from_bits(out)
}

/// Inverts [`w_morphism`] when possible: parses the string left to right
/// into 001 and 01 tokens. The parse is forced at every step (the token is
/// determined by the first two characters), so greedy parsing is complete.
pub fn w_preimage(s: &BitString) -> Option<BitString> {
    let bits = s.as_slice();
    let mut out = Vec::with_capacity(bits.len() / 2);
    let mut i = 0;
    while i < bits.len() {
        if bits[i] {
            return None;
        }
        if i + 1 >= bits.len() {
            return None;
        }
        if bits[i + 1] {
            out.push(true);
            i += 2;
        } else {
            if i + 2 >= bits.len() || !bits[i + 2] {
                return None;
            }
            out.push(false);
            i += 3;
        }
    }
    Some(BitString::from_bits(out))
}

/// Same length and same number of ones.
pub fn is_balanced(s: &BitString, t: &BitString) -> bool {
    s.len() == t.len() && s.ones() == t.ones()
}

/// Smallest k such that k simultaneous updates make the strings balanced.
pub fn balance_time(s: &BitString, t: &BitString, cap: u64) -> Result<u64, StringsError> {
    if s.is_empty() || t.is_empty() {
        return Err(StringsError::Empty);
    }
    if s.len() != t.len() {
        return Err(StringsError::LengthMismatch(s.len(), t.len()));
    }
    let mut s = s.clone();
    let mut t = t.clone();
    let mut k = 0;
    while !is_balanced(&s, &t) {
        if k >= cap {
            return Err(StringsError::CapExceeded(cap));
        }
        s = wythoff_update(&s)?;
        t = wythoff_update(&t)?;
        k += 1;
    }
    Ok(k)
}

/// One cell of area between two string staircases. Reading a string as a
/// lattice path (0 = right, 1 = up), the unit (x, y) is the cell whose
/// lower-left corner is (x, y).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct AreaUnit {
    pub x: i64,
    pub y: i64,
}

/// Prefix geometry of one string: for each count k, where the k-th zero/one
/// falls. Backs the below/above tests in O(1) per query.
struct PathProfile {
    // ones_at[k] = ones in the shortest prefix holding k+1 zeros
    ones_at: Vec<usize>,
    // zeros_at[k] = zeros in the shortest prefix holding k+1 ones
    zeros_at: Vec<usize>,
}

impl PathProfile {
    fn new(s: &BitString) -> Self {
        let mut ones_at = Vec::with_capacity(s.zeros());
        let mut zeros_at = Vec::with_capacity(s.ones());
        let (mut zeros, mut ones) = (0usize, 0usize);
        for &b in s.as_slice() {
            if b {
                zeros_at.push(zeros);
                ones += 1;
            } else {
                ones_at.push(ones);
                zeros += 1;
            }
        }
        PathProfile { ones_at, zeros_at }
    }

    // Some prefix has at most x zeros and at least y+1 ones.
    fn below(&self, x: i64, y: i64) -> bool {
        match self.zeros_at.get(y as usize) {
            Some(&z) => (z as i64) <= x,
            None => false,
        }
    }

    // Some prefix has at most y ones and at least x+1 zeros.
    fn above(&self, x: i64, y: i64) -> bool {
        match self.ones_at.get(x as usize) {
            Some(&o) => (o as i64) <= y,
            None => false,
        }
    }
}

/// All units of area lying between two balanced strings: above one string's
/// path and below the other's. Enumerates the bounded candidate rectangle
/// directly; every use is desk-scale.
pub fn units_between(s: &BitString, t: &BitString) -> Result<BTreeSet<AreaUnit>, StringsError> {
    if !is_balanced(s, t) {
        return Err(StringsError::NotBalanced);
    }
    let ps = PathProfile::new(s);
    let pt = PathProfile::new(t);
    let mut units = BTreeSet::new();
    for x in 0..=s.zeros() as i64 {
        for y in 0..=s.ones() as i64 {
            let between = (ps.above(x, y) && pt.below(x, y)) || (pt.above(x, y) && ps.below(x, y));
            if between {
                units.insert(AreaUnit { x, y });
            }
        }
    }
    Ok(units)
}

/// The number of units of area between two balanced strings.
pub fn area_between(s: &BitString, t: &BitString) -> Result<usize, StringsError> {
    Ok(units_between(s, t)?.len())
}

/// Indices (1-based) where an isolated single-cell disagreement sits: the
/// prefixes before it are balanced, the strings disagree there and at the
/// next index, and the first string changes character between the two.
pub fn defects(s: &BitString, t: &BitString) -> Result<Vec<usize>, StringsError> {
    if !is_balanced(s, t) {
        return Err(StringsError::NotBalanced);
    }
    let mut out = Vec::new();
    let (mut ones_s, mut ones_t) = (0usize, 0usize);
    for i in 1..s.len() {
        // ones_s/ones_t now count the prefixes of length i-1
        let balanced_before = ones_s == ones_t;
        if balanced_before
            && s.bit(i) != t.bit(i)
            && s.bit(i) != s.bit(i + 1)
            && s.bit(i + 1) != t.bit(i + 1)
        {
            out.push(i);
        }
        ones_s += s.bit(i) as usize;
        ones_t += t.bit(i) as usize;
    }
    Ok(out)
}

/// True when every index where the strings disagree is part of a defect,
/// i.e. a defect sits there or one position earlier. Vacuously true for
/// equal strings.
pub fn differ_by_defects(s: &BitString, t: &BitString) -> Result<bool, StringsError> {
    let defect_at: BTreeSet<usize> = defects(s, t)?.into_iter().collect();
    for i in 1..=s.len() {
        if s.bit(i) != t.bit(i)
            && !defect_at.contains(&i)
            && !(i >= 2 && defect_at.contains(&(i - 1)))
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Forward transport of an area unit through one application of w.
pub fn f_map((x, y): Point) -> Point {
    (2 * x + y + 1, x + y)
}

/// Inverse of [`f_map`]: pulls an area unit back through one application of w.
pub fn g_map((x, y): Point) -> Point {
    (x - y - 1, 2 * y - x + 1)
}

/// n-fold composition of [`g_map`] in closed form via Fibonacci numbers
/// (F_1 = F_2 = 1): g^n(x, y) = (F_{2n-1}x − F_{2n}y − F_{2n},
/// −F_{2n}x + F_{2n+1}y + F_{2n+1} − 1).
pub fn g_power(n: u32, (x, y): Point) -> Point {
    assert!(n >= 1, "g_power needs n >= 1");
    let (mut prev, mut cur) = (1i64, 1i64); // F_1, F_2
    for _ in 0..2 * n - 2 {
        let next = prev + cur;
        prev = cur;
        cur = next;
    }
    let (f_odd, f_even) = (prev, cur); // F_{2n-1}, F_{2n}
    let f_next = prev + cur; // F_{2n+1}
    (
        f_odd * x - f_even * y - f_even,
        -f_even * x + f_next * y + f_next - 1,
    )
}

/// Applies simultaneous updates until the strings differ by defects,
/// returning the update count and the final pair.
pub fn converge_to_defects(
    s: &BitString,
    t: &BitString,
    cap: u64,
) -> Result<(u64, BitString, BitString), StringsError> {
    if s.is_empty() || t.is_empty() {
        return Err(StringsError::Empty);
    }
    if s.len() != t.len() {
        return Err(StringsError::LengthMismatch(s.len(), t.len()));
    }
    let mut s = s.clone();
    let mut t = t.clone();
    let mut k = 0u64;
    let mut balanced_at: Option<(u64, usize)> = None;
    loop {
        if is_balanced(&s, &t) {
            if balanced_at.is_none() {
                balanced_at = Some((k, s.len()));
            }
            if differ_by_defects(&s, &t)? {
                let (k_bal, len_bal) = balanced_at.unwrap();
                debug_assert!(
                    k <= k_bal.saturating_add(updates_spent_by_w_iterations(len_bal)),
                    "defect form took longer than the guaranteed bound"
                );
                return Ok((k, s, t));
            }
        }
        if k >= cap {
            return Err(StringsError::CapExceeded(cap));
        }
        s = wythoff_update(&s)?;
        t = wythoff_update(&t)?;
        k += 1;
    }
}

// Update budget of len+1 applications of w to a string of length `len`:
// one application of w spends at most 2·len updates and at most triples the
// length. Deliberately loose; it only guards the convergence loop.
fn updates_spent_by_w_iterations(len: usize) -> u64 {
    let mut total = 0u64;
    let mut cur = len as u64;
    for _ in 0..len + 1 {
        total = total.saturating_add(cur.saturating_mul(2));
        cur = cur.saturating_mul(3);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn update_examples() {
        assert_eq!(wythoff_update(&bs("1")).unwrap(), bs("01"));
        assert_eq!(wythoff_update(&bs("01")).unwrap(), bs("110"));
        assert_eq!(wythoff_update(&bs("0010")).unwrap(), bs("10100"));
        assert_eq!(
            wythoff_update(&BitString::from_bits([])),
            Err(StringsError::Empty)
        );
    }

    #[test]
    fn morphism_examples() {
        assert_eq!(w_morphism(&bs("0010")), bs("00100101001"));
        assert_eq!(w_morphism(&bs("1")), bs("01"));
        assert_eq!(w_morphism(&bs("0")), bs("001"));
        assert_eq!(
            w_morphism(&BitString::from_bits([])),
            BitString::from_bits([])
        );
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(w_preimage(&bs("00100101001")), Some(bs("0010")));
        assert_eq!(w_preimage(&bs("01")), Some(bs("1")));
        assert_eq!(w_preimage(&bs("11")), None);
        assert_eq!(w_preimage(&bs("0")), None);
        assert_eq!(
            w_preimage(&BitString::from_bits([])),
            Some(BitString::from_bits([]))
        );
    }

    #[test]
    fn balance_examples() {
        assert!(is_balanced(&bs("01"), &bs("10")));
        assert!(!is_balanced(&bs("01"), &bs("11")));
        assert!(is_balanced(&bs("00100111"), &bs("11001100")));
        assert_eq!(balance_time(&bs("01"), &bs("10"), 100).unwrap(), 0);
        assert_eq!(balance_time(&bs("0"), &bs("1"), 100).unwrap(), 1);
        assert_eq!(
            balance_time(&bs("0"), &bs("11"), 100),
            Err(StringsError::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn balance_time_within_proof_bound() {
        // Hand-run: "00"/"11" first balance after five simultaneous updates.
        let s = bs("00");
        let k = balance_time(&s, &bs("11"), 100).unwrap();
        assert_eq!(k, 5);
        // The string with the larger deficit ("00") pays at most
        // 2·(2·zeros + ones) updates.
        assert!(k as usize <= 2 * (2 * s.zeros() + s.ones()));
    }

    #[test]
    fn units_examples() {
        let units = units_between(&bs("01"), &bs("10")).unwrap();
        assert_eq!(units, [AreaUnit { x: 0, y: 0 }].into_iter().collect());

        let same = units_between(&bs("0110"), &bs("0110")).unwrap();
        assert!(same.is_empty());

        let block = units_between(&bs("0011"), &bs("1100")).unwrap();
        let expect: BTreeSet<AreaUnit> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .into_iter()
            .map(|(x, y)| AreaUnit { x, y })
            .collect();
        assert_eq!(block, expect);

        assert_eq!(
            units_between(&bs("01"), &bs("11")),
            Err(StringsError::NotBalanced)
        );
    }

    #[test]
    fn area_examples() {
        assert_eq!(area_between(&bs("00100111"), &bs("11001100")).unwrap(), 10);
        assert_eq!(area_between(&bs("0101"), &bs("0101")).unwrap(), 0);
        assert_eq!(area_between(&bs("0011"), &bs("1100")).unwrap(), 4);
    }

    #[test]
    fn defect_examples() {
        assert_eq!(defects(&bs("01"), &bs("10")).unwrap(), vec![1]);
        assert_eq!(
            defects(&bs("0101"), &bs("0101")).unwrap(),
            Vec::<usize>::new()
        );
        assert_eq!(
            defects(&bs("0011"), &bs("1100")).unwrap(),
            Vec::<usize>::new()
        );
    }

    #[test]
    fn differ_by_defects_examples() {
        assert!(differ_by_defects(&bs("01"), &bs("10")).unwrap());
        assert!(!differ_by_defects(&bs("0011"), &bs("1100")).unwrap());
        assert!(differ_by_defects(&bs("0101"), &bs("0101")).unwrap());
    }

    #[test]
    fn map_examples() {
        assert_eq!(f_map((0, 0)), (1, 0));
        assert_eq!(g_map((1, 0)), (0, 0));
        assert_eq!(f_map((1, 2)), (5, 3));
        assert_eq!(g_power(1, (3, 1)), (1, 0));
        // g composed twice is (2x−3y−3, −3x+5y+4).
        assert_eq!(g_power(2, (3, 3)), (2 * 3 - 3 * 3 - 3, -3 * 3 + 5 * 3 + 4));
        assert_eq!(g_power(2, (3, 3)), g_map(g_map((3, 3))));
    }

    #[test]
    fn convergence_examples() {
        let (n, s, t) = converge_to_defects(&bs("01"), &bs("10"), 1000).unwrap();
        assert_eq!(n, 0);
        assert_eq!((s, t), (bs("01"), bs("10")));

        let (_, s, t) = converge_to_defects(&bs("0011"), &bs("1100"), 10_000).unwrap();
        assert_eq!(defects(&s, &t).unwrap().len(), 4);

        let (n, _, _) = converge_to_defects(&bs("0101"), &bs("0101"), 1000).unwrap();
        assert_eq!(n, 0);

        assert_eq!(
            converge_to_defects(&bs("0"), &bs("1"), 0),
            Err(StringsError::CapExceeded(0))
        );
    }

    fn all_strings(len: usize) -> Vec<BitString> {
        (0..(1u32 << len))
            .map(|m| BitString::from_bits((0..len).map(|i| m >> i & 1 == 1)))
            .collect()
    }

    #[test]
    fn morphism_facts_small_exhaustive() {
        for len in 0..=10 {
            for s in all_strings(len) {
                let w = w_morphism(&s);
                assert_eq!(w.len(), 3 * s.zeros() + 2 * s.ones());
                assert_eq!(w.zeros(), 2 * s.zeros() + s.ones());
                assert_eq!(w.ones(), s.len());
                if !s.is_empty() {
                    assert!(!w.bit(1), "w(s) starts with 0");
                    assert!(w.bit(w.len()), "w(s) ends with 1");
                }
                for i in 1..w.len() {
                    assert!(!(w.bit(i) && w.bit(i + 1)), "no 11 in w(s)");
                }
                for i in 1..w.len().saturating_sub(1) {
                    assert!(w.bit(i) || w.bit(i + 1) || w.bit(i + 2), "no 000 in w(s)");
                }
                assert_eq!(w_preimage(&w), Some(s));
            }
        }
    }

    #[test]
    fn morphism_equals_repeated_updates() {
        for len in 1..=10 {
            for s in all_strings(len) {
                let mut via_updates = s.clone();
                for _ in 0..2 * s.zeros() + s.ones() {
                    via_updates = wythoff_update(&via_updates).unwrap();
                }
                assert_eq!(w_morphism(&s), via_updates);
            }
        }
    }

    #[test]
    fn preimage_of_clean_prefixes() {
        // Prefixes of w(s) that do not end in a zero are themselves images
        // of prefixes of s.
        for s in all_strings(8) {
            let w = w_morphism(&s);
            for cut in 0..=w.len() {
                if cut > 0 && !w.bit(cut) {
                    continue;
                }
                let prefix = BitString::from_bits((1..=cut).map(|i| w.bit(i)));
                let sigma = w_preimage(&prefix).expect("clean prefix parses");
                assert!(sigma.len() <= s.len());
                assert!((1..=sigma.len()).all(|i| sigma.bit(i) == s.bit(i)));
            }
        }
    }

    proptest! {
        #[test]
        fn update_lengthens_by_one(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
            let s = BitString::from_bits(bits);
            let u = wythoff_update(&s).unwrap();
            prop_assert_eq!(u.len(), s.len() + 1);
        }

        #[test]
        fn f_and_g_are_inverse(x in -1000i64..1000, y in -1000i64..1000) {
            prop_assert_eq!(g_map(f_map((x, y))), (x, y));
            prop_assert_eq!(f_map(g_map((x, y))), (x, y));
        }

        #[test]
        fn g_power_matches_iteration(n in 1u32..=20, x in -1000i64..1000, y in -1000i64..1000) {
            let mut p = (x, y);
            for _ in 0..n {
                p = g_map(p);
            }
            prop_assert_eq!(g_power(n, (x, y)), p);
        }
    }
}
