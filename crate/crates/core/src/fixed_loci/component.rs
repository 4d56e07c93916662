use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{char_sum, Character};

use super::corner::{corner_configs, CornerConfig};
use super::sides::{chern_from_data, side_triples, SideTriple};
use super::table::{DecoratedTable, DivClass};

/// The complementary index pair `(j, k)`, `j < k`, of corner `i`.
pub fn complement(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("corner index out of range: {i}"),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Seed thresholds `(s1, s2)` placed before normalization.
    pub seed: (i64, i64),
}

/// One connected component `Y ≅ (P¹)^N` of the torus-fixed locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComponent {
    k: i64,
    d: [usize; 3],
    a: SideTriple,
    s: [i64; 3],
    corners: [CornerConfig; 3],
    factor_offset: [usize; 3],
    n_factors: usize,
}

impl FixedComponent {
    /// Places the data with thresholds `s` as given; no normalization.
    pub fn new(k: i64, a: SideTriple, s: [i64; 3], corners: [CornerConfig; 3]) -> Result<Self> {
        let d = [
            corners[0].defect(),
            corners[1].defect(),
            corners[2].defect(),
        ];
        let total: usize = d.iter().sum();
        if k < 1 || total as i64 > k - 1 {
            return Err(Error::Precondition(format!(
                "defect {total} out of range for k = {k}"
            )));
        }
        let (c1, c2) = chern_from_data(a, s)?;
        if c1 != -1 || c2 != k - total as i64 {
            return Err(Error::Precondition(format!(
                "side/threshold data has (c1, c2) = ({c1}, {c2}), expected (-1, {})",
                k - total as i64
            )));
        }
        for (i, corner) in corners.iter().enumerate() {
            let (j, l) = complement(i);
            if corner.strip_widths() != (a.get(j), a.get(l)) {
                return Err(Error::Precondition(format!(
                    "corner {i} built for strips {:?}, component has ({}, {})",
                    corner.strip_widths(),
                    a.get(j),
                    a.get(l)
                )));
            }
        }
        let n = [
            corners[0].free_count(),
            corners[1].free_count(),
            corners[2].free_count(),
        ];
        Ok(FixedComponent {
            k,
            d,
            a,
            s,
            corners,
            factor_offset: [0, n[0], n[0] + n[1]],
            n_factors: n.iter().sum(),
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn defects(&self) -> [usize; 3] {
        self.d
    }

    pub fn total_defect(&self) -> usize {
        self.d.iter().sum()
    }

    pub fn sides(&self) -> SideTriple {
        self.a
    }

    pub fn thresholds(&self) -> [i64; 3] {
        self.s
    }

    pub fn corners(&self) -> &[CornerConfig; 3] {
        &self.corners
    }

    /// `N = dim Y`.
    pub fn n_factors(&self) -> usize {
        self.n_factors
    }

    /// Global factor index of free class `local` in corner `corner`.
    pub fn factor_of_class(&self, corner: usize, local: usize) -> usize {
        assert!(local < self.corners[corner].free_count());
        self.factor_offset[corner] + local
    }

    /// Thresholds of `E(n)`: only the slanted strip moves.
    fn twisted(&self, n: i64) -> [i64; 3] {
        [self.s[0] + n, self.s[1], self.s[2]]
    }

    /// Translates the toric structure so that every character moves by `w`.
    pub fn translate(&self, w: Character) -> FixedComponent {
        let mut out = self.clone();
        for i in 0..3 {
            out.s[i] += w.m(i);
        }
        out
    }

    /// Applies [`normalization_shift`].
    pub fn normalized(&self) -> FixedComponent {
        self.translate(normalization_shift(self))
    }

    /// True if `det H¹(E) = det H¹(E(-1))` as torus modules.
    pub fn is_normalized(&self) -> bool {
        normalization_shift(self).is_zero()
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FixedComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} d={:?} a={} s={:?} N={}",
            self.k, self.d, self.a, self.s, self.n_factors
        )?;
        for c in &self.corners {
            write!(f, " [λ={:?} ρ={:?}]", c.lambda_b(), c.rho())?;
        }
        Ok(())
    }
}

/// Every fixed component of `M(2,-1,k)`, normalized, in canonical order
/// (total defect, defect split, side triple, corner configuration indices).
pub fn assemble_components(k: i64) -> Result<Vec<FixedComponent>> {
    assemble_components_with(k, EnumerationOptions::default())
}

pub fn assemble_components_with(k: i64, opts: EnumerationOptions) -> Result<Vec<FixedComponent>> {
    if k < 1 {
        return Err(Error::Precondition(format!(
            "k must be at least 1, got {k}"
        )));
    }
    let mut out = Vec::new();
    for d in 0..k as usize {
        let triples = side_triples(k - d as i64)?;
        for d0 in 0..=d {
            for d1 in 0..=d - d0 {
                let split = [d0, d1, d - d0 - d1];
                for &a in &triples {
                    let (s1, s2) = opts.seed;
                    // c1 = -1 makes the sum of thresholds (-1 - Σa)/2, an integer.
                    let s0 = (-1 - a.sum()) / 2 - s1 - s2;
                    let configs: Vec<Vec<CornerConfig>> = (0..3)
                        .map(|i| {
                            let (j, l) = complement(i);
                            corner_configs(split[i], a.get(j), a.get(l))
                        })
                        .collect::<Result<_>>()?;
                    for c0 in &configs[0] {
                        for c1 in &configs[1] {
                            for c2 in &configs[2] {
                                let comp = FixedComponent::new(
                                    k,
                                    a,
                                    [s0, s1, s2],
                                    [c0.clone(), c1.clone(), c2.clone()],
                                )?;
                                out.push(comp.normalized());
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `H¹(E**(n))`: the lattice points of the hexagon cut out by the three strips,
/// each with multiplicity one and trivial decoration.
pub fn hexagon_table(comp: &FixedComponent, n: i64) -> DecoratedTable {
    let s = comp.twisted(n);
    let a = comp.a;
    let mut out = DecoratedTable::new(comp.n_factors);
    for m1 in s[1] + 1..=s[1] + a.get(1) {
        for m2 in s[2] + 1..=s[2] + a.get(2) {
            let c = Character::new(m1, m2);
            if (s[0] + 1..=s[0] + a.get(0)).contains(&c.m0()) {
                out.trivial(c);
            }
        }
    }
    out
}

/// `H⁰(C_i(n))` with the eigenbundle decorations of corner `corner`.
pub fn torsion_table(comp: &FixedComponent, corner: usize, n: i64) -> DecoratedTable {
    let s = comp.twisted(n);
    let (j, l) = complement(corner);
    let mut out = DecoratedTable::new(comp.n_factors);
    for root in comp.corners[corner].torsion() {
        let (u, v) = root.cell;
        let c = Character::from_pair(corner, s[j] + u, s[l] + v);
        let class = match root.free_class {
            Some(f) => DivClass::unit(comp.n_factors, comp.factor_of_class(corner, f)),
            None => DivClass::zero(comp.n_factors),
        };
        out.insert(c, class, 1);
    }
    out
}

fn cohomology_table(comp: &FixedComponent, n: i64) -> DecoratedTable {
    let mut t = hexagon_table(comp, n);
    for corner in 0..3 {
        t.extend(&torsion_table(comp, corner, n));
    }
    t
}

/// The translation `w` making the character sums of `H¹(E)` and `H¹(E(-1))` agree.
pub fn normalization_shift(comp: &FixedComponent) -> Character {
    shift_from_sums(
        char_sum(&cohomology_table(comp, 0).char_multiset()),
        char_sum(&cohomology_table(comp, -1).char_multiset()),
    )
}

/// Solves `sum_e + (k-1)·w = sum_e1 + k·w`, where `sum_e` is the character sum of
/// `H¹(E)` (rank `k-1`) and `sum_e1` that of `H¹(E(-1))` (rank `k`).
pub fn shift_from_sums(sum_e: Character, sum_e1: Character) -> Character {
    sum_e - sum_e1
}

/// `U_i = H¹(E(i-2))` for `i ∈ {0,1,2}`, ranks `(k-1, k, k-1)`.
pub fn u_table(comp: &FixedComponent, i: usize) -> Result<DecoratedTable> {
    assert!(i < 3, "monad index out of range: {i}");
    let t = cohomology_table(comp, i as i64 - 2);
    let expected = if i == 1 { comp.k } else { comp.k - 1 };
    if t.rank() as i64 != expected {
        return Err(Error::RankMismatch {
            component: comp.label(),
            detail: format!("rank U_{i} = {}, expected {expected}", t.rank()),
        });
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::CharMultiset;

    fn side(a: [i64; 3]) -> SideTriple {
        SideTriple::new(a).unwrap()
    }

    fn k1_seed() -> FixedComponent {
        let a = side([1, 1, 1]);
        let corners = [0, 1, 2].map(|_| CornerConfig::trivial(1, 1));
        FixedComponent::new(1, a, [-2, 0, 0], corners).unwrap()
    }

    #[test]
    fn k1_hexagons_before_normalization() {
        let c = k1_seed();
        let t = hexagon_table(&c, -1);
        assert_eq!(
            t.char_multiset(),
            [Character::new(1, 1)].into_iter().collect::<CharMultiset>()
        );
        assert!(hexagon_table(&c, 0).is_empty());
        assert!(hexagon_table(&c, -2).is_empty());
    }

    #[test]
    fn k1_normalization() {
        let c = k1_seed();
        assert_eq!(normalization_shift(&c), Character::new(-1, -1));
        let n = c.normalized();
        assert!(n.is_normalized());
        let u1 = u_table(&n, 1).unwrap();
        assert_eq!(u1.rank(), 1);
        assert_eq!(u1.get(Character::ZERO), &[(DivClass::zero(0), 1)]);
        assert!(u_table(&n, 0).unwrap().is_empty());
        assert!(u_table(&n, 2).unwrap().is_empty());
    }

    #[test]
    fn shift_rule() {
        let c = Character::new;
        assert_eq!(shift_from_sums(c(0, 0), c(1, 1)), c(-1, -1));
        assert_eq!(shift_from_sums(c(5, -2), c(5, -2)), Character::ZERO);
        assert_eq!(shift_from_sums(c(3, 4), c(1, 2)), c(2, 2));
    }

    #[test]
    fn side_122_has_one_character_in_h1() {
        let a = side([1, 2, 2]);
        let corners = [
            CornerConfig::trivial(2, 2),
            CornerConfig::trivial(1, 2),
            CornerConfig::trivial(1, 2),
        ];
        let c = FixedComponent::new(2, a, [-3, 0, 0], corners).unwrap();
        assert_eq!(hexagon_table(&c, 0).rank(), 1);
        assert_eq!(hexagon_table(&c, -1).rank(), 2);
        assert_eq!(hexagon_table(&c, -2).rank(), 1);
    }

    #[test]
    fn k1_and_k2_component_counts() {
        let k1 = assemble_components(1).unwrap();
        assert_eq!(k1.len(), 1);
        assert_eq!(k1[0].sides().as_array(), [1, 1, 1]);
        assert_eq!(k1[0].n_factors(), 0);

        let k2 = assemble_components(2).unwrap();
        assert_eq!(k2.len(), 9);
        assert!(k2.iter().all(|c| c.n_factors() == 0));
        assert_eq!(k2.iter().filter(|c| c.total_defect() == 0).count(), 3);
        assert_eq!(k2.iter().filter(|c| c.total_defect() == 1).count(), 6);
    }

    #[test]
    fn euler_characteristic_k3() {
        let comps = assemble_components(3).unwrap();
        let euler: usize = comps.iter().map(|c| 1usize << c.n_factors()).sum();
        assert_eq!(euler, 48);
    }

    #[test]
    fn torsion_tip_of_strip_j() {
        let a = side([1, 1, 1]);
        let cfg = corner_configs(1, 1, 1)
            .unwrap()
            .into_iter()
            .find(|c| c.rho().contains(&(1, 0)))
            .unwrap();
        let corners = [
            cfg,
            CornerConfig::trivial(1, 1),
            CornerConfig::trivial(1, 1),
        ];
        let c = FixedComponent::new(2, a, [-2, 0, 0], corners).unwrap();
        let t = torsion_table(&c, 0, 0);
        // Corner 0 reads (m1, m2) = (s1 + a_j, s2).
        assert_eq!(
            t.roots().collect::<Vec<_>>(),
            vec![(Character::new(1, 0), &DivClass::zero(0), 1)]
        );
        // Corner 0 does not move under twisting.
        assert_eq!(torsion_table(&c, 0, -1), t);
    }

    #[test]
    fn free_class_decoration() {
        let a = side([1, 1, 1]);
        let cfg = corner_configs(3, 1, 1)
            .unwrap()
            .into_iter()
            .find(|c| c.free_count() == 1)
            .unwrap();
        let corners = [
            CornerConfig::trivial(1, 1),
            CornerConfig::trivial(1, 1),
            cfg,
        ];
        let c = FixedComponent::new(4, a, [-2, 0, 0], corners).unwrap();
        assert_eq!(c.n_factors(), 1);
        let t = torsion_table(&c, 2, 0);
        assert_eq!(t.rank(), 3);
        let decorated: Vec<_> = t.roots().filter(|(_, cl, _)| !cl.is_zero()).collect();
        assert_eq!(decorated.len(), 1);
        assert_eq!(decorated[0].1, &DivClass::unit(1, 0));
        assert_eq!(decorated[0].0, Character::from_pair(2, -2, 0));
    }

    #[test]
    fn rejects_bad_data() {
        assert!(assemble_components(0).is_err());
        let a = side([1, 1, 1]);
        let corners = [0, 1, 2].map(|_| CornerConfig::trivial(1, 1));
        assert!(FixedComponent::new(1, a, [0, 0, 0], corners.clone()).is_err());
        assert!(FixedComponent::new(2, a, [-2, 0, 0], corners).is_err());
    }
}
