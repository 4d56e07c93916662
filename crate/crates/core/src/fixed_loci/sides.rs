use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Jump widths `(a0, a1, a2)` of the three filtrations of a stable toric bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 3]", into = "[i64; 3]")]
pub struct SideTriple([i64; 3]);

impl SideTriple {
    /// Accepts positive widths satisfying the strict triangle inequalities.
    pub fn new(a: [i64; 3]) -> Result<Self> {
        if a.iter().any(|&x| x <= 0) {
            return Err(Error::Precondition(format!(
                "side widths must be positive: {a:?}"
            )));
        }
        let [a0, a1, a2] = a;
        if a0 >= a1 + a2 || a1 >= a0 + a2 || a2 >= a0 + a1 {
            return Err(Error::Precondition(format!(
                "side widths violate the triangle inequalities: {a:?}"
            )));
        }
        Ok(SideTriple(a))
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn as_array(&self) -> [i64; 3] {
        self.0
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `(-a0 + a1 + a2)² - 4·a1·a2`, which equals `c1² - 4c2`.
    pub fn discriminant(&self) -> i64 {
        let [a0, a1, a2] = self.0;
        let x = -a0 + a1 + a2;
        x * x - 4 * a1 * a2
    }

    /// The `c2` of the bundle with `c1 = -1` carrying these widths.
    pub fn effective_c2(&self) -> i64 {
        (1 - self.discriminant()) / 4
    }
}

impl TryFrom<[i64; 3]> for SideTriple {
    type Error = Error;
    fn try_from(a: [i64; 3]) -> Result<Self> {
        SideTriple::new(a)
    }
}

impl From<SideTriple> for [i64; 3] {
    fn from(a: SideTriple) -> Self {
        a.0
    }
}

impl fmt::Display for SideTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2] = self.0;
        write!(f, "({a0},{a1},{a2})")
    }
}

/// All side triples of stable toric bundles with `c1 = -1` and `c2 = c`, sorted.
///
/// With `x = -a0 + a1 + a2` the discriminant identity reads
/// `a1·a2 = (x² + 4c - 1)/4`, so `x` is odd, and `a0 > 0` together with the
/// triangle inequalities bounds it by `1 ≤ x ≤ 2c - 1`.
pub fn side_triples(c: i64) -> Result<Vec<SideTriple>> {
    if c <= 0 {
        return Err(Error::Bogomolov(c));
    }
    let mut out = Vec::new();
    for x in (1..2 * c).step_by(2) {
        let product = (x * x + 4 * c - 1) / 4;
        for a1 in 1..=product {
            if product % a1 != 0 {
                continue;
            }
            let a2 = product / a1;
            let a0 = a1 + a2 - x;
            if a0 > 0 && x < 2 * a1 && x < 2 * a2 {
                out.push(SideTriple::new([a0, a1, a2])?);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `(c1, c2)` of the toric bundle with widths `a` and thresholds `s`.
pub fn chern_from_data(a: SideTriple, s: [i64; 3]) -> Result<(i64, i64)> {
    let c1 = 2 * s.iter().sum::<i64>() + a.sum();
    let numerator = c1 * c1 - a.discriminant();
    if numerator % 4 != 0 {
        return Err(Error::NonIntegralC2 { numerator });
    }
    Ok((c1, numerator / 4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Exhaustive search over `a_i ≤ 4c`, independent of the divisor walk.
    fn brute_force(c: i64) -> BTreeSet<[i64; 3]> {
        let mut out = BTreeSet::new();
        let bound = 4 * c;
        for a0 in 1..=bound {
            for a1 in 1..=bound {
                for a2 in 1..=bound {
                    let tri = a0 < a1 + a2 && a1 < a0 + a2 && a2 < a0 + a1;
                    let x = -a0 + a1 + a2;
                    if tri && x * x - 4 * a1 * a2 == 1 - 4 * c {
                        out.insert([a0, a1, a2]);
                    }
                }
            }
        }
        out
    }

    fn arrays(v: Vec<SideTriple>) -> Vec<[i64; 3]> {
        v.into_iter().map(|a| a.as_array()).collect()
    }

    #[test]
    fn small_charges() {
        assert_eq!(arrays(side_triples(1).unwrap()), vec![[1, 1, 1]]);
        assert_eq!(
            arrays(side_triples(2).unwrap()),
            vec![[1, 2, 2], [2, 1, 2], [2, 2, 1]]
        );
        assert!(matches!(side_triples(0), Err(Error::Bogomolov(0))));
        assert!(side_triples(-3).is_err());
    }

    #[test]
    fn matches_brute_force() {
        for c in 1..=9 {
            let got: BTreeSet<[i64; 3]> = arrays(side_triples(c).unwrap()).into_iter().collect();
            assert_eq!(got, brute_force(c), "c = {c}");
        }
    }

    #[test]
    fn every_triple_has_odd_perimeter_and_right_c2() {
        for c in 1..=12 {
            for a in side_triples(c).unwrap() {
                assert_eq!(a.sum() % 2, 1, "{a}");
                assert_eq!(a.effective_c2(), c);
            }
        }
    }

    #[test]
    fn chern_examples() {
        let a = |v| SideTriple::new(v).unwrap();
        assert_eq!(chern_from_data(a([1, 1, 1]), [-2, 0, 0]).unwrap(), (-1, 1));
        assert_eq!(chern_from_data(a([1, 2, 2]), [-3, 0, 0]).unwrap(), (-1, 2));
        assert_eq!(chern_from_data(a([1, 1, 1]), [0, 0, 0]).unwrap(), (3, 3));
    }

    #[test]
    fn rejects_degenerate_sides() {
        assert!(SideTriple::new([1, 1, 2]).is_err());
        assert!(SideTriple::new([0, 1, 1]).is_err());
    }
}
