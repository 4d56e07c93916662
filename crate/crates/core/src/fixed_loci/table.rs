use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Neg, Sub};

use crate::lattice::{CharMultiset, Character};

/// A divisor class in `A¹((P¹)^N)`, as integer coordinates in the basis `h_1..h_N`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivClass(Vec<i64>);

impl DivClass {
    pub fn zero(n: usize) -> Self {
        DivClass(vec![0; n])
    }

    /// The pull-back `e_f` of `O_{P¹}(1)` from factor `f` (0-based).
    pub fn unit(n: usize, f: usize) -> Self {
        let mut v = vec![0; n];
        v[f] = 1;
        DivClass(v)
    }

    pub fn from_coords(v: Vec<i64>) -> Self {
        DivClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Index of the factor if this is a unit vector `e_f`.
    pub fn unit_factor(&self) -> Option<usize> {
        let mut hit = None;
        for (f, &x) in self.0.iter().enumerate() {
            match x {
                0 => {}
                1 if hit.is_none() => hit = Some(f),
                _ => return None,
            }
        }
        hit
    }
}

impl Sub for &DivClass {
    type Output = DivClass;
    fn sub(self, rhs: &DivClass) -> DivClass {
        assert_eq!(
            self.0.len(),
            rhs.0.len(),
            "divisor classes over different factor sets"
        );
        DivClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        DivClass(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first || c < 0 {
                f.write_str(if c < 0 { "-" } else { "+" })?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "h{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// An equivariant bundle on a fixed component, split into character eigenbundles,
/// each recorded by the first Chern classes of its line-bundle pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTable {
    n_factors: usize,
    entries: BTreeMap<Character, Vec<(DivClass, u32)>>,
}

impl DecoratedTable {
    pub fn new(n_factors: usize) -> Self {
        DecoratedTable {
            n_factors,
            entries: BTreeMap::new(),
        }
    }

    pub fn n_factors(&self) -> usize {
        self.n_factors
    }

    pub fn insert(&mut self, c: Character, class: DivClass, mult: u32) {
        assert_eq!(class.len(), self.n_factors);
        if mult == 0 {
            return;
        }
        let roots = self.entries.entry(c).or_default();
        match roots.iter_mut().find(|(cl, _)| *cl == class) {
            Some((_, m)) => *m += mult,
            None => {
                roots.push((class, mult));
                roots.sort();
            }
        }
    }

    pub fn trivial(&mut self, c: Character) {
        self.insert(c, DivClass::zero(self.n_factors), 1);
    }

    /// Appends every root of `other`.
    pub fn extend(&mut self, other: &DecoratedTable) {
        assert_eq!(self.n_factors, other.n_factors);
        for (c, class, m) in other.roots() {
            self.insert(c, class.clone(), m);
        }
    }

    pub fn rank(&self) -> u64 {
        self.entries
            .values()
            .flat_map(|r| r.iter().map(|(_, m)| *m as u64))
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn roots(&self) -> impl Iterator<Item = (Character, &DivClass, u32)> + '_ {
        self.entries
            .iter()
            .flat_map(|(c, rs)| rs.iter().map(move |(cl, m)| (*c, cl, *m)))
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        self.entries.keys().copied()
    }

    pub fn get(&self, c: Character) -> &[(DivClass, u32)] {
        self.entries.get(&c).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn char_multiset(&self) -> CharMultiset {
        self.roots().map(|(c, _, m)| (c, m as u64)).collect()
    }

    pub fn translated(&self, w: Character) -> DecoratedTable {
        let mut out = DecoratedTable::new(self.n_factors);
        for (c, cl, m) in self.roots() {
            out.insert(c + w, cl.clone(), m);
        }
        out
    }
}
