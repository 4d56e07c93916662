//! The rank-2 character lattice of the diagonal torus `T ⊂ PGL₃`.
//!
//! Characters are stored in Cartesian coordinates `(m1, m2)`. The trigonal
//! coordinate `m0 = -m1 - m2` is always derived.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A torus character, serialized as `[m1, m2]`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Character {
    pub m1: i64,
    pub m2: i64,
}

impl Character {
    pub const ZERO: Character = Character { m1: 0, m2: 0 };

    pub const fn new(m1: i64, m2: i64) -> Self {
        Character { m1, m2 }
    }

    /// Builds the character whose trigonal coordinates at the two indices
    /// complementary to `i` are `(mj, mk)`, with `j < k`.
    pub fn from_pair(i: usize, mj: i64, mk: i64) -> Self {
        match i {
            0 => Character::new(mj, mk),
            1 => Character::new(-mj - mk, mk),
            2 => Character::new(mk, -mj - mk),
            _ => panic!("trigonal index out of range: {i}"),
        }
    }

    pub fn m0(&self) -> i64 {
        -self.m1 - self.m2
    }

    /// Trigonal coordinate `m_i = <τ_i, χ>`.
    pub fn m(&self, i: usize) -> i64 {
        match i {
            0 => self.m0(),
            1 => self.m1,
            2 => self.m2,
            _ => panic!("trigonal index out of range: {i}"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m1 == 0 && self.m2 == 0
    }

    pub fn scale(self, n: i64) -> Self {
        Character::new(self.m1 * n, self.m2 * n)
    }
}

/// `(m0, m1, m2)` with `m0 = -m1 - m2`.
pub fn trigonal(c: Character) -> (i64, i64, i64) {
    (c.m0(), c.m1, c.m2)
}

impl From<[i64; 2]> for Character {
    fn from([m1, m2]: [i64; 2]) -> Self {
        Character::new(m1, m2)
    }
}

impl From<Character> for [i64; 2] {
    fn from(c: Character) -> Self {
        [c.m1, c.m2]
    }
}

impl Add for Character {
    type Output = Character;
    fn add(self, rhs: Character) -> Character {
        Character::new(self.m1 + rhs.m1, self.m2 + rhs.m2)
    }
}

impl Sub for Character {
    type Output = Character;
    fn sub(self, rhs: Character) -> Character {
        Character::new(self.m1 - rhs.m1, self.m2 - rhs.m2)
    }
}

impl Neg for Character {
    type Output = Character;
    fn neg(self) -> Character {
        Character::new(-self.m1, -self.m2)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m1, self.m2)
    }
}

/// A one-parameter subgroup `γ: C* → T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 2]", into = "[i64; 2]")]
pub struct Gamma {
    g1: i64,
    g2: i64,
}

impl Gamma {
    pub fn new(g1: i64, g2: i64) -> Result<Self> {
        if g1 == 0 && g2 == 0 {
            return Err(Error::Precondition("gamma must be nonzero".into()));
        }
        Ok(Gamma { g1, g2 })
    }

    pub fn g1(&self) -> i64 {
        self.g1
    }

    pub fn g2(&self) -> i64 {
        self.g2
    }
}

impl TryFrom<[i64; 2]> for Gamma {
    type Error = Error;
    fn try_from([g1, g2]: [i64; 2]) -> Result<Self> {
        Gamma::new(g1, g2)
    }
}

impl From<Gamma> for [i64; 2] {
    fn from(g: Gamma) -> Self {
        [g.g1, g.g2]
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.g1, self.g2)
    }
}

/// `<γ, χ> = g1·m1 + g2·m2`.
pub fn pair(g: Gamma, c: Character) -> i64 {
    g.g1 * c.m1 + g.g2 * c.m2
}

/// An undecorated character table: character → positive multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharMultiset {
    entries: BTreeMap<Character, u64>,
}

impl CharMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Character, mult: u64) {
        if mult > 0 {
            *self.entries.entry(c).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, c: Character) -> u64 {
        self.entries.get(&c).copied().unwrap_or(0)
    }

    pub fn rank(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Character, u64)> + '_ {
        self.entries.iter().map(|(c, m)| (*c, *m))
    }
}

impl FromIterator<(Character, u64)> for CharMultiset {
    fn from_iter<I: IntoIterator<Item = (Character, u64)>>(iter: I) -> Self {
        let mut t = CharMultiset::new();
        for (c, m) in iter {
            t.insert(c, m);
        }
        t
    }
}

impl FromIterator<Character> for CharMultiset {
    fn from_iter<I: IntoIterator<Item = Character>>(iter: I) -> Self {
        iter.into_iter().map(|c| (c, 1)).collect()
    }
}

/// Componentwise `Σ multiplicity·χ`, accumulated in 128 bits.
pub fn char_sum(t: &CharMultiset) -> Character {
    let (mut s1, mut s2) = (0i128, 0i128);
    for (c, m) in t.iter() {
        s1 += c.m1 as i128 * m as i128;
        s2 += c.m2 as i128 * m as i128;
    }
    Character::new(
        i64::try_from(s1).expect("character sum overflows i64"),
        i64::try_from(s2).expect("character sum overflows i64"),
    )
}

/// Translates every key by `w`.
pub fn shift(t: &CharMultiset, w: Character) -> CharMultiset {
    t.iter().map(|(c, m)| (c + w, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ms(items: &[((i64, i64), u64)]) -> CharMultiset {
        items
            .iter()
            .map(|&((a, b), m)| (Character::new(a, b), m))
            .collect()
    }

    #[test]
    fn trigonal_examples() {
        assert_eq!(trigonal(Character::new(0, 0)), (0, 0, 0));
        assert_eq!(trigonal(Character::new(1, 1)), (-2, 1, 1));
        assert_eq!(trigonal(Character::new(3, -1)), (-2, 3, -1));
    }

    #[test]
    fn pair_examples() {
        let g = |a, b| Gamma::new(a, b).unwrap();
        assert_eq!(pair(g(1, 2), Character::new(3, -1)), 1);
        assert_eq!(pair(g(1, 1), Character::ZERO), 0);
        assert_eq!(pair(g(1, 5), Character::new(-5, 1)), 0);
        assert!(Gamma::new(0, 0).is_err());
    }

    #[test]
    fn char_sum_examples() {
        assert_eq!(char_sum(&CharMultiset::new()), Character::ZERO);
        assert_eq!(char_sum(&ms(&[((1, 1), 1)])), Character::new(1, 1));
        assert_eq!(
            char_sum(&ms(&[((1, 0), 2), ((0, -1), 1)])),
            Character::new(2, -1)
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(
            shift(&ms(&[((1, 1), 1)]), Character::new(-1, -1)),
            ms(&[((0, 0), 1)])
        );
        let t = ms(&[((0, 0), 2), ((1, 0), 1)]);
        assert_eq!(shift(&t, Character::ZERO), t);
        assert_eq!(
            shift(&t, Character::new(1, 2)),
            ms(&[((1, 2), 2), ((2, 2), 1)])
        );
    }

    #[test]
    fn from_pair_matches_trigonal_coordinates() {
        for i in 0..3 {
            let c = Character::from_pair(i, 4, -7);
            let others: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            assert_eq!(c.m(others[0]), 4);
            assert_eq!(c.m(others[1]), -7);
            assert_eq!(c.m(i), 3);
        }
    }

    #[test]
    fn serializes_as_pair() {
        let s = serde_json::to_string(&Character::new(3, -1)).unwrap();
        assert_eq!(s, "[3,-1]");
        let back: Character = serde_json::from_str(&s).unwrap();
        assert_eq!(back, Character::new(3, -1));
    }

    fn small_char() -> impl Strategy<Value = Character> {
        (-50i64..50, -50i64..50).prop_map(|(a, b)| Character::new(a, b))
    }

    proptest! {
        #[test]
        fn trigonal_sums_to_zero(c in small_char()) {
            let (a, b, d) = trigonal(c);
            prop_assert_eq!(a + b + d, 0);
        }

        #[test]
        fn pair_is_additive(g1 in -20i64..20, g2 in 1i64..20, c in small_char(), d in small_char()) {
            let g = Gamma::new(g1, g2).unwrap();
            prop_assert_eq!(pair(g, c + d), pair(g, c) + pair(g, d));
        }

        #[test]
        fn shift_moves_sum_by_rank(items in proptest::collection::vec((small_char(), 1u64..4), 0..8), w in small_char()) {
            let t: CharMultiset = items.into_iter().collect();
            let lhs = char_sum(&shift(&t, w));
            let rhs = char_sum(&t) + w.scale(t.rank() as i64);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
