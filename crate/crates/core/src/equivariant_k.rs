//! Virtual decorated character tables: equivariant K-classes over a fixed
//! component, and the `Ext¹(E,E)` class read off the monad complex
//!
//! ```text
//! 0 → ⊕ End(U_i) → V⊗(Hom(U0,U1) ⊕ Hom(U1,U2)) → Λ²V⊗Hom(U0,U2) → 0
//! ```
//!
//! whose cohomology is `C` on the left and `Ext¹(E,E)` on the right.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use crate::chow::{euler_factor, TruncPoly};
use crate::error::{Error, Result};
use crate::fixed_loci::{u_table, DecoratedTable, DivClass, FixedComponent, Orientation};
use crate::lattice::Character;

/// Signed multiplicities of decorated roots. Canonical: no zero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualTable {
    n_factors: usize,
    entries: BTreeMap<Character, BTreeMap<DivClass, i64>>,
}

impl VirtualTable {
    pub fn new(n_factors: usize) -> Self {
        VirtualTable {
            n_factors,
            entries: BTreeMap::new(),
        }
    }

    pub fn n_factors(&self) -> usize {
        self.n_factors
    }

    pub fn add(&mut self, c: Character, class: DivClass, mult: i64) {
        assert_eq!(
            class.len(),
            self.n_factors,
            "divisor class over the wrong factor set"
        );
        if mult == 0 {
            return;
        }
        let roots = self.entries.entry(c).or_default();
        let m = roots.entry(class).or_insert(0);
        *m += mult;
        if *m == 0 {
            roots.retain(|_, m| *m != 0);
            if roots.is_empty() {
                self.entries.remove(&c);
            }
        }
    }

    /// Adds `sign` times every root of `other`.
    pub fn accumulate(&mut self, other: &VirtualTable, sign: i64) {
        assert_eq!(self.n_factors, other.n_factors);
        for (c, class, m) in other.roots() {
            self.add(c, class.clone(), sign * m);
        }
    }

    pub fn rank(&self) -> i64 {
        self.entries.values().flat_map(|r| r.values()).sum()
    }

    pub fn rank_at(&self, c: Character) -> i64 {
        self.entries.get(&c).map(|r| r.values().sum()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        self.entries.keys().copied()
    }

    pub fn roots(&self) -> impl Iterator<Item = (Character, &DivClass, i64)> + '_ {
        self.entries
            .iter()
            .flat_map(|(c, r)| r.iter().map(move |(cl, m)| (*c, cl, *m)))
    }

    /// Roots at one character.
    pub fn at(&self, c: Character) -> impl Iterator<Item = (&DivClass, i64)> + '_ {
        self.entries
            .get(&c)
            .into_iter()
            .flat_map(|r| r.iter().map(|(cl, m)| (cl, *m)))
    }

    /// Splits into the part at `c` and the rest.
    pub fn split_at(&self, c: Character) -> (VirtualTable, VirtualTable) {
        let mut hit = VirtualTable::new(self.n_factors);
        let mut rest = self.clone();
        if let Some(roots) = rest.entries.remove(&c) {
            hit.entries.insert(c, roots);
        }
        (hit, rest)
    }

    pub fn translated(&self, w: Character) -> VirtualTable {
        let mut out = VirtualTable::new(self.n_factors);
        for (c, cl, m) in self.roots() {
            out.add(c + w, cl.clone(), m);
        }
        out
    }

    /// Total Chern class `∏ (1 + c)^m`.
    pub fn total_chern(&self) -> Result<TruncPoly> {
        let mut out = TruncPoly::one(self.n_factors);
        for (_, class, m) in self.roots() {
            out = out.mul(&euler_factor(&BigRational::one(), class, m)?)?;
        }
        Ok(out)
    }
}

impl From<&DecoratedTable> for VirtualTable {
    fn from(t: &DecoratedTable) -> Self {
        let mut out = VirtualTable::new(t.n_factors());
        for (c, class, m) in t.roots() {
            out.add(c, class.clone(), m as i64);
        }
        out
    }
}

/// A torus module with trivial decorations, given by its weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedModule {
    weights: Vec<Character>,
}

impl FixedModule {
    pub fn new(weights: Vec<Character>) -> Self {
        FixedModule { weights }
    }

    /// `V`, weights `0, e1, e2`.
    pub fn standard(orientation: Orientation) -> Self {
        FixedModule::oriented(&[(0, 0), (1, 0), (0, 1)], orientation)
    }

    /// `Λ²V`, weights `e1, e2, e1+e2`.
    pub fn wedge2(orientation: Orientation) -> Self {
        FixedModule::oriented(&[(1, 0), (0, 1), (1, 1)], orientation)
    }

    fn oriented(ws: &[(i64, i64)], orientation: Orientation) -> Self {
        let s = orientation.sign();
        FixedModule::new(
            ws.iter()
                .map(|&(a, b)| Character::new(a, b).scale(s))
                .collect(),
        )
    }

    pub fn weights(&self) -> &[Character] {
        &self.weights
    }
}

/// `Hom(A, B) = A* ⊗ B`.
pub fn hom(a: &VirtualTable, b: &VirtualTable) -> VirtualTable {
    assert_eq!(a.n_factors, b.n_factors, "hom over different factor sets");
    let mut out = VirtualTable::new(a.n_factors);
    for (ca, cla, ma) in a.roots() {
        for (cb, clb, mb) in b.roots() {
            out.add(cb - ca, clb - cla, ma * mb);
        }
    }
    out
}

pub fn tensor_fixed(m: &FixedModule, a: &VirtualTable) -> VirtualTable {
    let mut out = VirtualTable::new(a.n_factors);
    for &w in &m.weights {
        out.accumulate(&a.translated(w), 1);
    }
    out
}

/// The Euler-characteristic identity of the monad complex, without checks.
pub fn ext1_from_u(u: &[VirtualTable; 3], orientation: Orientation) -> VirtualTable {
    let n = u[0].n_factors;
    let v = FixedModule::standard(orientation);
    let v2 = FixedModule::wedge2(orientation);
    let mut out = VirtualTable::new(n);
    out.add(Character::ZERO, DivClass::zero(n), 1);
    for ui in u {
        out.accumulate(&hom(ui, ui), -1);
    }
    out.accumulate(&tensor_fixed(&v, &hom(&u[0], &u[1])), 1);
    out.accumulate(&tensor_fixed(&v, &hom(&u[1], &u[2])), 1);
    out.accumulate(&tensor_fixed(&v2, &hom(&u[0], &u[2])), -1);
    out
}

/// The three monad terms `U_0, U_1, U_2` of a component.
pub fn u_tables(comp: &FixedComponent) -> Result<[VirtualTable; 3]> {
    Ok([
        (&u_table(comp, 0)?).into(),
        (&u_table(comp, 1)?).into(),
        (&u_table(comp, 2)?).into(),
    ])
}

/// `Ext¹(E,E)` over `comp`, checked for rank `4(k-1)` and non-negative
/// multiplicity at every character.
pub fn ext1_table(comp: &FixedComponent, orientation: Orientation) -> Result<VirtualTable> {
    let ext = ext1_from_u(&u_tables(comp)?, orientation);
    let expected = 4 * (comp.k() - 1);
    if ext.rank() != expected {
        return Err(Error::ConventionBreach {
            component: comp.label(),
            detail: format!("Ext¹ rank {}, expected {expected}", ext.rank()),
        });
    }
    if let Some(c) = ext.characters().find(|&c| ext.rank_at(c) < 0) {
        return Err(Error::ConventionBreach {
            component: comp.label(),
            detail: format!("negative multiplicity {} at character {c}", ext.rank_at(c)),
        });
    }
    Ok(ext)
}

/// `Ext¹` split into its zero-weight part (the tangent space of `Y`) and the
/// normal part, after checking the zero part has rank `N`.
pub fn split_tangent(
    comp: &FixedComponent,
    ext: &VirtualTable,
) -> Result<(VirtualTable, VirtualTable)> {
    let (zero, normal) = ext.split_at(Character::ZERO);
    if zero.rank() != comp.n_factors() as i64 {
        return Err(Error::TangentMismatch {
            component: comp.label(),
            found: zero.rank(),
            expected: comp.n_factors(),
        });
    }
    Ok((zero, normal))
}

pub fn normal_table(comp: &FixedComponent, orientation: Orientation) -> Result<VirtualTable> {
    let ext = ext1_table(comp, orientation)?;
    Ok(split_tangent(comp, &ext)?.1)
}

/// `∏ (1 + 2h_f)`, the total Chern class of `T_{(P¹)^N}`.
pub fn tangent_chern(n: usize) -> TruncPoly {
    let mut out = TruncPoly::one(n);
    for f in 0..n {
        out = out
            .mul(&TruncPoly::linear(
                BigRational::one(),
                &DivClass::from_coords(two_at(n, f)),
            ))
            .expect("same factor count");
    }
    out
}

fn two_at(n: usize, f: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[f] = 2;
    v
}
