//! Local bifiltration data at one torus-fixed point of P².
//!
//! In local coordinates `(u, v) = (m_j - s_j, m_k - s_k)` the reflexive hull has
//! the dimension table
//!
//! ```text
//!   barD = 2  on Q = {u ≤ 0, v ≤ 0}
//!   barD = 1  on the strip {0 < u ≤ a_j, v ≤ 0}  (line L^j)
//!          and on the strip {u ≤ 0, 0 < v ≤ a_k}  (line L^k)
//!   barD = 0  elsewhere
//! ```
//!
//! A torsion-free subsheaf is described by a sub-table `D ≤ barD`, non-increasing
//! in both coordinates, with finite total defect. We encode it as a Young diagram
//! `λ_b` (up-set of `Q` where `D ≤ 1`) and an up-set `ρ` of the support `R` of
//! `barD` (where `D` drops once more), with `ρ ∩ Q ⊆ λ_b`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// A cell `(u, v)` of a corner table.
pub type Cell = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassTag {
    /// Contains cells of the strip carrying `L^j`.
    ForcedJ,
    /// Contains cells of the strip carrying `L^k`.
    ForcedK,
    /// Carries an unconstrained line; contributes one `P¹` factor.
    Free,
}

/// A line-equality class of rank-1 cells, restricted to the scan window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineClass {
    pub tag: ClassTag,
    /// Sorted lexicographically; `cells[0]` is the class representative.
    pub cells: Vec<Cell>,
}

/// One copy of a character in `H⁰(C_i)`, located at a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TorsionRoot {
    pub cell: Cell,
    /// Local free-class index when the root is the quotient `V/ℓ` of a free line.
    pub free_class: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerConfig {
    defect: usize,
    a_j: i64,
    a_k: i64,
    /// Row lengths of `λ_b`; row `r` holds the cells `(u, -r)` with `-len < u ≤ 0`.
    lambda_b: Vec<usize>,
    rho: BTreeSet<Cell>,
    classes: Vec<LineClass>,
    free_count: usize,
    torsion: Vec<TorsionRoot>,
}

impl CornerConfig {
    /// Builds and validates a configuration from its `(λ_b, ρ)` encoding.
    ///
    /// Returns `Ok(None)` when the data is a legal sub-table but some rank-1
    /// class would have to equal both `L^j` and `L^k`.
    pub fn from_parts(
        a_j: i64,
        a_k: i64,
        lambda_b: Vec<usize>,
        rho: BTreeSet<Cell>,
    ) -> Result<Option<CornerConfig>> {
        if a_j <= 0 || a_k <= 0 {
            return Err(Error::Precondition("strip widths must be positive".into()));
        }
        if lambda_b.windows(2).any(|w| w[0] < w[1]) || lambda_b.last() == Some(&0) {
            return Err(Error::Parse(format!(
                "lambda_b is not a Young diagram: {lambda_b:?}"
            )));
        }
        let region = Region { a_j, a_k };
        for &c in &rho {
            if !region.in_r(c) {
                return Err(Error::Parse(format!(
                    "rho cell {c:?} outside the rank-1 support"
                )));
            }
            for up in [(c.0 + 1, c.1), (c.0, c.1 + 1)] {
                if region.in_r(up) && !rho.contains(&up) {
                    return Err(Error::Parse(format!("rho is not up-closed at {c:?}")));
                }
            }
        }
        let mut cfg = CornerConfig {
            defect: lambda_b.iter().sum::<usize>() + rho.len(),
            a_j,
            a_k,
            lambda_b,
            rho,
            classes: Vec::new(),
            free_count: 0,
            torsion: Vec::new(),
        };
        if cfg.rho.iter().any(|&c| region.in_q(c) && !cfg.in_lambda(c)) {
            return Err(Error::Parse("rho ∩ Q must lie inside lambda_b".into()));
        }
        if !cfg.classify() {
            return Ok(None);
        }
        cfg.torsion = cfg.torsion_roots();
        Ok(Some(cfg))
    }

    /// The trivial configuration (no defect).
    pub fn trivial(a_j: i64, a_k: i64) -> CornerConfig {
        CornerConfig::from_parts(a_j, a_k, Vec::new(), BTreeSet::new())
            .expect("trivial corner data is well-formed")
            .expect("trivial corner data is valid")
    }

    pub fn defect(&self) -> usize {
        self.defect
    }

    pub fn strip_widths(&self) -> (i64, i64) {
        (self.a_j, self.a_k)
    }

    pub fn lambda_b(&self) -> &[usize] {
        &self.lambda_b
    }

    pub fn rho(&self) -> &BTreeSet<Cell> {
        &self.rho
    }

    pub fn classes(&self) -> &[LineClass] {
        &self.classes
    }

    pub fn free_count(&self) -> usize {
        self.free_count
    }

    /// Free classes in factor order (by lexicographically minimal cell).
    pub fn free_classes(&self) -> impl Iterator<Item = &LineClass> {
        self.classes.iter().filter(|c| c.tag == ClassTag::Free)
    }

    pub fn torsion(&self) -> &[TorsionRoot] {
        &self.torsion
    }

    fn region(&self) -> Region {
        Region {
            a_j: self.a_j,
            a_k: self.a_k,
        }
    }

    fn in_lambda(&self, (u, v): Cell) -> bool {
        if u > 0 || v > 0 {
            return false;
        }
        let row = (-v) as usize;
        row < self.lambda_b.len() && ((-u) as usize) < self.lambda_b[row]
    }

    pub fn bar_dim(&self, c: Cell) -> u8 {
        self.region().bar_dim(c)
    }

    /// Dimension of the subsheaf's space at `c`.
    pub fn dim(&self, c: Cell) -> u8 {
        let bar = self.bar_dim(c);
        let drop = self.in_lambda(c) as u8 + self.rho.contains(&c) as u8;
        bar.saturating_sub(drop)
    }

    /// Cells `u ∈ [-(d+1), a_j]`, `v ∈ [-(d+1), a_k]`. All defect cells lie inside;
    /// strip cells on the lower and left edges stand in for the unbounded strips.
    pub fn window(&self) -> impl Iterator<Item = Cell> + '_ {
        let lo = -(self.defect as i64) - 1;
        (lo..=self.a_j).flat_map(move |u| (lo..=self.a_k).map(move |v| (u, v)))
    }

    /// Groups rank-1 cells into line-equality classes. Two rank-1 cells `c ≤ c'`
    /// force `V(c') ⊆ V(c)`, hence equal lines; along a monotone path between them
    /// every cell is rank 1, so the classes are the side-adjacency components.
    fn classify(&mut self) -> bool {
        let ones: Vec<Cell> = self.window().filter(|&c| self.dim(c) == 1).collect();
        let index: BTreeMap<Cell, usize> = ones.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut parent: Vec<usize> = (0..ones.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, &(u, v)) in ones.iter().enumerate() {
            for nb in [(u + 1, v), (u, v + 1)] {
                if let Some(&j) = index.get(&nb) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
        for (i, &cell) in ones.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(cell);
        }
        let mut classes = Vec::with_capacity(groups.len());
        for (_, mut cells) in groups {
            cells.sort();
            let forced_j = cells.iter().any(|&(u, _)| u > 0);
            let forced_k = cells.iter().any(|&(_, v)| v > 0);
            let tag = match (forced_j, forced_k) {
                (true, true) => return false,
                (true, false) => ClassTag::ForcedJ,
                (false, true) => ClassTag::ForcedK,
                (false, false) => ClassTag::Free,
            };
            classes.push(LineClass { tag, cells });
        }
        classes.sort_by(|x, y| x.cells[0].cmp(&y.cells[0]));
        debug_assert_eq!(
            classes
                .iter()
                .filter(|c| c.tag == ClassTag::ForcedJ)
                .count(),
            1
        );
        debug_assert_eq!(
            classes
                .iter()
                .filter(|c| c.tag == ClassTag::ForcedK)
                .count(),
            1
        );
        self.free_count = classes.iter().filter(|c| c.tag == ClassTag::Free).count();
        self.classes = classes;
        true
    }

    fn free_index_of(&self, c: Cell) -> Option<usize> {
        self.free_classes()
            .position(|cl| cl.cells.binary_search(&c).is_ok())
    }

    fn torsion_roots(&self) -> Vec<TorsionRoot> {
        let mut cells: BTreeSet<Cell> = self.rho.clone();
        for (r, &len) in self.lambda_b.iter().enumerate() {
            for u in 0..len {
                cells.insert((-(u as i64), -(r as i64)));
            }
        }
        let mut out = Vec::with_capacity(self.defect);
        for c in cells {
            let (bar, dim) = (self.bar_dim(c), self.dim(c));
            if bar == 2 && dim == 1 {
                out.push(TorsionRoot {
                    cell: c,
                    free_class: self.free_index_of(c),
                });
            } else {
                for _ in dim..bar {
                    out.push(TorsionRoot {
                        cell: c,
                        free_class: None,
                    });
                }
            }
        }
        debug_assert_eq!(out.len(), self.defect);
        out
    }
}

#[derive(Clone, Copy)]
struct Region {
    a_j: i64,
    a_k: i64,
}

impl Region {
    fn in_q(&self, (u, v): Cell) -> bool {
        u <= 0 && v <= 0
    }

    fn in_r(&self, (u, v): Cell) -> bool {
        (u <= self.a_j && v <= 0) || (u <= 0 && v <= self.a_k)
    }

    fn bar_dim(&self, c: Cell) -> u8 {
        if self.in_q(c) {
            2
        } else if self.in_r(c) {
            1
        } else {
            0
        }
    }
}

/// All Young diagrams of size `n`, as weakly decreasing row lengths.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All up-closed subsets of size `n` of the rank-1 support `R`.
fn rank_one_upsets(region: Region, n: usize) -> BTreeSet<BTreeSet<Cell>> {
    let mut layer: BTreeSet<BTreeSet<Cell>> = BTreeSet::new();
    layer.insert(BTreeSet::new());
    let seeds = [(region.a_j, 0), (0, region.a_k)];
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for set in &layer {
            let mut candidates: BTreeSet<Cell> = seeds.into_iter().collect();
            for &(u, v) in set {
                candidates.insert((u - 1, v));
                candidates.insert((u, v - 1));
            }
            for c in candidates {
                if !region.in_r(c) || set.contains(&c) {
                    continue;
                }
                let addable = [(c.0 + 1, c.1), (c.0, c.1 + 1)]
                    .iter()
                    .all(|up| !region.in_r(*up) || set.contains(up));
                if addable {
                    let mut grown = set.clone();
                    grown.insert(c);
                    next.insert(grown);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Every valid corner configuration with total defect `defect`.
///
/// Ordered by `|ρ|`, then `ρ` (as a sorted cell set), then `λ_b` in reverse
/// lexicographic row order.
pub fn corner_configs(defect: usize, a_j: i64, a_k: i64) -> Result<Vec<CornerConfig>> {
    if a_j <= 0 || a_k <= 0 {
        return Err(Error::Precondition("strip widths must be positive".into()));
    }
    let region = Region { a_j, a_k };
    let mut out = Vec::new();
    for rho_size in 0..=defect {
        let lambdas = partitions(defect - rho_size);
        for rho in rank_one_upsets(region, rho_size) {
            for lambda in &lambdas {
                let covers = rho.iter().filter(|&&c| region.in_q(c)).all(|&(u, v)| {
                    let row = (-v) as usize;
                    row < lambda.len() && ((-u) as usize) < lambda[row]
                });
                if !covers {
                    continue;
                }
                if let Some(cfg) = CornerConfig::from_parts(a_j, a_k, lambda.clone(), rho.clone())?
                {
                    out.push(cfg);
                }
            }
        }
    }
    Ok(out)
}
