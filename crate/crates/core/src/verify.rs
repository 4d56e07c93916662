//! Structural checks over every fixed component of a given `k`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::bott::{evaluate_components, generic_gammas, normal_characters, EvalOptions};
use crate::equivariant_k::{ext1_table, split_tangent, tangent_chern};
use crate::error::{Error, Result};
use crate::fixed_loci::{
    assemble_components_with, corner_configs, hexagon_table, normalization_shift, torsion_table,
    u_table, Cell, CornerConfig, EnumerationOptions, FixedComponent, Orientation,
};
use crate::serial::component_json;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported only; never fails the run.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    fn info(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            status: Status::Info,
            detail: detail.into(),
        });
    }

    /// Records the first failure over `comps`, or a pass.
    fn per_component<F>(&mut self, name: &str, comps: &[FixedComponent], mut f: F)
    where
        F: FnMut(&FixedComponent) -> std::result::Result<(), String>,
    {
        match comps.iter().find_map(|c| f(c).err().map(|e| (c, e))) {
            None => self.push(name, true, format!("{} components", comps.len())),
            Some((c, e)) => self.push(name, false, format!("{e} [{c}]")),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub enumeration: EnumerationOptions,
    pub orientation: Orientation,
    /// Also compare a_k under two generic γ and two seeds.
    pub independence: bool,
}

impl VerifyOptions {
    pub fn for_k(k: i64) -> Self {
        VerifyOptions {
            enumeration: EnumerationOptions::default(),
            orientation: Orientation::Standard,
            independence: k <= 4,
        }
    }
}

/// Number of partitions of `n`, admitting parts one size at a time.
pub fn partition_count(n: usize) -> u64 {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for m in part..=n {
            p[m] += p[m - part];
        }
    }
    p[n]
}

/// `Σ_{configs} 2^{N} = Σ_{p+q=d} P(p)·P(q)` for one corner.
pub fn fiber_identity(defect: usize, a_j: i64, a_k: i64) -> Result<(u64, u64)> {
    let lhs = corner_configs(defect, a_j, a_k)?
        .iter()
        .map(|c| 1u64 << c.free_count())
        .sum();
    let rhs = (0..=defect)
        .map(|p| partition_count(p) * partition_count(defect - p))
        .sum();
    Ok((lhs, rhs))
}

/// True if the classes generated by componentwise comparability of rank-1
/// cells coincide with the stored classes.
pub fn comparability_agrees(cfg: &CornerConfig) -> bool {
    let ones: Vec<Cell> = cfg.window().filter(|&c| cfg.dim(c) == 1).collect();
    let mut label: Vec<usize> = (0..ones.len()).collect();
    // Relabel to the smallest reachable index until stable; windows are tiny.
    loop {
        let mut changed = false;
        for i in 0..ones.len() {
            for j in 0..ones.len() {
                let (a, b) = (ones[i], ones[j]);
                if a.0 <= b.0 && a.1 <= b.1 && label[i] != label[j] {
                    let m = label[i].min(label[j]);
                    label[i] = m;
                    label[j] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut groups: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
    for (i, &c) in ones.iter().enumerate() {
        groups.entry(label[i]).or_default().push(c);
    }
    let mut ours: Vec<Vec<Cell>> = groups.into_values().collect();
    let mut stored: Vec<Vec<Cell>> = cfg.classes().iter().map(|cl| cl.cells.clone()).collect();
    ours.iter_mut().for_each(|g| g.sort());
    ours.sort();
    stored.sort();
    ours == stored
}

fn numerology(k: i64, report: &mut Report) {
    let (u0, u1, u2) = (k - 1, k, k - 1);
    let dim_m = 1 - (u0 * u0 + u1 * u1 + u2 * u2) + 3 * u0 * u1 + 3 * u1 * u2 - 3 * u0 * u2;
    let codim = 3 * u0 * u2;
    let dim_g = u0 * (3 * u1 - u0) + (3 * u1 * u2 - u1 * u1 - u2 * u2 + 1);
    report.push(
        "numerology",
        u1.gcd(&u2) == 1
            && dim_m == 4 * (k - 1)
            && codim == 3 * (k - 1) * (k - 1)
            && dim_g == dim_m + codim,
        format!("u = ({u0},{u1},{u2}), dim = {dim_m}, codim = {codim}, ambient dim = {dim_g}"),
    );
}

/// Runs every structural check for `k`. Only bad input is an `Err`; broken
/// invariants are failed checks.
pub fn verify(k: i64, opts: &VerifyOptions) -> Result<Report> {
    if k < 1 {
        return Err(Error::Precondition(format!(
            "k must be at least 1, got {k}"
        )));
    }
    let mut report = Report::default();
    numerology(k, &mut report);

    let comps = assemble_components_with(k, opts.enumeration)?;
    let euler: u64 = comps.iter().map(|c| 1u64 << c.n_factors()).sum();
    report.info(
        "enumeration",
        format!("{} components, Σ 2^N = {euler}", comps.len()),
    );

    report.per_component("hexagon counts", &comps, |c| {
        let m = k - c.total_defect() as i64;
        let got = [0, -1, -2].map(|n| hexagon_table(c, n).rank() as i64);
        let want = [m - 1, m, m - 1];
        (got == want)
            .then_some(())
            .ok_or(format!("{got:?} != {want:?}"))
    });
    report.per_component("torsion lengths", &comps, |c| {
        for n in [-2, -1, 0] {
            let got: Vec<usize> = (0..3)
                .map(|i| torsion_table(c, i, n).rank() as usize)
                .collect();
            if got != c.defects() {
                return Err(format!("twist {n}: {got:?} != {:?}", c.defects()));
            }
        }
        Ok(())
    });
    report.per_component("line classes", &comps, |c| {
        c.corners().iter().enumerate().try_for_each(|(i, cfg)| {
            comparability_agrees(cfg).then_some(()).ok_or(format!(
                "corner {i}: comparability classes differ from adjacency classes"
            ))
        })
    });
    report.per_component("U ranks", &comps, |c| {
        (0..3).try_for_each(|i| u_table(c, i).map(|_| ()).map_err(|e| e.to_string()))
    });
    report.per_component("normalization", &comps, |c| {
        let w = normalization_shift(c);
        w.is_zero()
            .then_some(())
            .ok_or(format!("residual shift {w}"))
    });

    let mut exts = Vec::with_capacity(comps.len());
    report.per_component("Ext¹ rank and sign", &comps, |c| {
        let e = ext1_table(c, opts.orientation).map_err(|e| e.to_string())?;
        exts.push(e);
        Ok(())
    });
    if exts.len() == comps.len() {
        let mut normals = Vec::with_capacity(comps.len());
        let mut it = exts.iter();
        report.per_component("tangent part", &comps, |c| {
            let (zero, normal) = split_tangent(c, it.next().unwrap()).map_err(|e| e.to_string())?;
            let chern = zero.total_chern().map_err(|e| e.to_string())?;
            normals.push(normal);
            (chern == tangent_chern(c.n_factors()))
                .then_some(())
                .ok_or(format!("zero-part Chern class {chern}"))
        });
        let negative: usize = exts
            .iter()
            .map(|e| e.roots().filter(|r| r.2 < 0).count())
            .sum();
        report.info(
            "per-class multiplicities",
            format!("{negative} (character, class) entries with negative multiplicity"),
        );
        if opts.independence && normals.len() == comps.len() {
            independence(k, &comps, &normals, opts, &mut report)?;
        }
    }

    let max_defect = (k - 1).max(0) as usize;
    let mut bad = None;
    'outer: for d in 0..=max_defect {
        for a_j in 1..=4 {
            for a_k in 1..=4 {
                let (lhs, rhs) = fiber_identity(d, a_j, a_k)?;
                if lhs != rhs {
                    bad = Some(format!("d = {d}, a = ({a_j},{a_k}): {lhs} != {rhs}"));
                    break 'outer;
                }
            }
        }
    }
    let detail = bad
        .clone()
        .unwrap_or(format!("d ≤ {max_defect}, strips ≤ 4"));
    report.push("fiber count", bad.is_none(), detail);
    Ok(report)
}

fn independence(
    k: i64,
    comps: &[FixedComponent],
    normals: &[crate::equivariant_k::VirtualTable],
    opts: &VerifyOptions,
    report: &mut Report,
) -> Result<()> {
    let excluded = normal_characters(normals);
    let gammas: Vec<_> = generic_gammas(&excluded).take(2).collect();
    let eval = |g| {
        let o = EvalOptions {
            gamma: Some(g),
            orientation: opts.orientation,
            enumeration: opts.enumeration,
        };
        evaluate_components(k, comps, &o).map(|e| e.value)
    };
    match (eval(gammas[0]), eval(gammas[1])) {
        (Ok(x), Ok(y)) => report.push(
            "gamma independence",
            x == y,
            format!("γ = {} gives {x}, γ = {} gives {y}", gammas[0], gammas[1]),
        ),
        (Err(e), _) | (_, Err(e)) => report.push("gamma independence", false, e.to_string()),
    }

    let other_seed = if opts.enumeration.seed == (0, 0) {
        (5, -3)
    } else {
        (0, 0)
    };
    let other = assemble_components_with(k, EnumerationOptions { seed: other_seed })?;
    let key = |cs: &[FixedComponent]| {
        let mut v: Vec<String> = cs.iter().map(component_json).collect();
        v.sort();
        v
    };
    let same_set = key(comps) == key(&other);
    let o = EvalOptions {
        gamma: Some(gammas[0]),
        orientation: opts.orientation,
        enumeration: opts.enumeration,
    };
    let values = evaluate_components(k, comps, &o)
        .and_then(|a| evaluate_components(k, &other, &o).map(|b| (a.value, b.value)));
    match values {
        Ok((a, b)) => report.push(
            "seed independence",
            same_set && a == b,
            format!(
                "seeds {:?} and {other_seed:?}: components {}, a_k {a} vs {b}",
                opts.enumeration.seed,
                if same_set { "identical" } else { "differ" }
            ),
        ),
        Err(e) => report.push("seed independence", false, e.to_string()),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let p: Vec<u64> = (0..10).map(partition_count).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn k3_passes() {
        let report = verify(3, &VerifyOptions::for_k(3)).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.checks.iter().any(|c| c.name == "seed independence"));
    }

    #[test]
    fn reflected_fails() {
        let mut opts = VerifyOptions::for_k(3);
        opts.orientation = Orientation::Reflected;
        assert!(!verify(3, &opts).unwrap().passed());
    }

    #[test]
    fn rejects_k0() {
        assert!(verify(0, &VerifyOptions::for_k(0)).is_err());
    }
}
