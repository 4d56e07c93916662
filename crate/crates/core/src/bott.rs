//! Bott residue evaluation of `a_k = ∫ c_top(G^{⊕4})`, where `G = U_2`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::chow::TruncPoly;
use crate::equivariant_k::{normal_table, VirtualTable};
use crate::error::{Error, Result};
use crate::fixed_loci::{
    assemble_components_with, u_table, DecoratedTable, EnumerationOptions, FixedComponent,
    Orientation, CALIBRATED_ORIENTATION,
};
use crate::lattice::{pair, Character, Gamma};

/// The residue of one fixed component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    /// Position in canonical enumeration order.
    pub id: usize,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub k: i64,
    pub value: BigInt,
    pub gamma: Gamma,
    pub components: usize,
    pub contributions: Vec<Contribution>,
    pub warning: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// `None` selects the first generic candidate.
    pub gamma: Option<Gamma>,
    pub orientation: Orientation,
    pub enumeration: EnumerationOptions,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            gamma: None,
            orientation: CALIBRATED_ORIENTATION,
            enumeration: EnumerationOptions::default(),
        }
    }
}

pub const K1_WARNING: &str = "k = 1: the moduli space is a point and G has rank 0, so the \
     computed constant is 1; tabulations listing a_1 = 0 use a different convention";

/// Candidates `(1, 2), (1, 3), …` that pair nonzero with every excluded character.
pub fn generic_gammas(excluded: &BTreeSet<Character>) -> impl Iterator<Item = Gamma> + '_ {
    (2i64..).filter_map(move |q| {
        let g = Gamma::new(1, q).expect("nonzero");
        excluded.iter().all(|&c| pair(g, c) != 0).then_some(g)
    })
}

/// The first generic candidate; terminates since each nonzero character kills at most one `q`.
pub fn select_gamma(excluded: &BTreeSet<Character>) -> Gamma {
    generic_gammas(excluded)
        .next()
        .expect("finitely many candidates are excluded")
}

/// Every character that appears in some normal table.
pub fn normal_characters<'a, I>(tables: I) -> BTreeSet<Character>
where
    I: IntoIterator<Item = &'a VirtualTable>,
{
    tables.into_iter().flat_map(|t| t.characters()).collect()
}

/// `∫_Y ∏_{U_2}(⟨γ,χ⟩ + c)^{4m} / ∏_{normal}(⟨γ,χ⟩ + c)^m`.
pub fn contribution_from_tables(
    u2: &DecoratedTable,
    normal: &VirtualTable,
    g: Gamma,
    label: &str,
) -> Result<BigRational> {
    let n = normal.n_factors();
    if u2.n_factors() != n {
        return Err(Error::FactorMismatch(u2.n_factors(), n));
    }
    let mut num = TruncPoly::one(n);
    let mut den = TruncPoly::one(n);
    for (c, class, m) in u2.roots() {
        let t = pair(g, c);
        if t == 0 && class.is_zero() {
            return Ok(BigRational::zero());
        }
        let t = BigInt::from(t);
        for _ in 0..4 * m {
            num.mul_linear(&t, class)?;
        }
    }
    for (c, class, m) in normal.roots() {
        let t = pair(g, c);
        if t == 0 {
            return Err(Error::NonGenericGamma {
                g1: g.g1(),
                g2: g.g2(),
                component: label.to_string(),
            });
        }
        let t = BigInt::from(t);
        let target = if m > 0 { &mut den } else { &mut num };
        for _ in 0..m.abs() {
            target.mul_linear(&t, class)?;
        }
    }
    Ok(num.mul(&den.invert_unit()?)?.integrate())
}

pub fn component_contribution(
    comp: &FixedComponent,
    g: Gamma,
    orientation: Orientation,
) -> Result<BigRational> {
    let normal = normal_table(comp, orientation)?;
    contribution_from_tables(&u_table(comp, 2)?, &normal, g, &comp.label())
}

/// Normal tables of every component, computed in parallel.
pub fn normal_tables(
    comps: &[FixedComponent],
    orientation: Orientation,
) -> Result<Vec<VirtualTable>> {
    comps
        .par_iter()
        .map(|c| normal_table(c, orientation))
        .collect()
}

/// Sums the residues over `comps`, which must be every component for `k`.
pub fn evaluate_components(
    k: i64,
    comps: &[FixedComponent],
    opts: &EvalOptions,
) -> Result<Evaluation> {
    if k < 1 {
        return Err(Error::Precondition(format!(
            "k must be at least 1, got {k}"
        )));
    }
    let normals = normal_tables(comps, opts.orientation)?;
    let gamma = match opts.gamma {
        Some(g) => g,
        None => select_gamma(&normal_characters(&normals)),
    };
    let values: Vec<BigRational> = comps
        .par_iter()
        .zip(&normals)
        .map(|(comp, normal)| {
            contribution_from_tables(&u_table(comp, 2)?, normal, gamma, &comp.label())
        })
        .collect::<Result<_>>()?;
    let total = values.iter().fold(BigRational::zero(), |acc, v| acc + v);
    if !total.is_integer() {
        return Err(Error::LocalizationInconsistency {
            k,
            total: total.to_string(),
        });
    }
    Ok(Evaluation {
        k,
        value: total.to_integer(),
        gamma,
        components: comps.len(),
        contributions: values
            .into_iter()
            .enumerate()
            .map(|(id, value)| Contribution { id, value })
            .collect(),
        warning: (k == 1).then(|| K1_WARNING.to_string()),
    })
}

pub fn evaluate(k: i64, opts: &EvalOptions) -> Result<Evaluation> {
    let comps = assemble_components_with(k, opts.enumeration)?;
    evaluate_components(k, &comps, opts)
}

pub fn correlation_constant(k: i64, gamma: Option<Gamma>) -> Result<BigInt> {
    let opts = EvalOptions {
        gamma,
        ..EvalOptions::default()
    };
    Ok(evaluate(k, &opts)?.value)
}
