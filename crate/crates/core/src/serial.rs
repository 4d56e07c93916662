//! JSON records for components, contributions and `Ext¹` tables.
//!
//! Components are written one per line. A line with a `summary` key closes an
//! enumeration and is skipped on re-ingestion.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::equivariant_k::VirtualTable;
use crate::error::{Error, Result};
use crate::fixed_loci::{complement, CornerConfig, FixedComponent, SideTriple};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerRecord {
    pub lambda_b: Vec<usize>,
    pub rho: Vec<[i64; 2]>,
    /// Number of free line classes, which is this corner's share of `N`.
    pub free_classes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub k: i64,
    pub d: [usize; 3],
    pub a: SideTriple,
    pub s: [i64; 3],
    pub corners: [CornerRecord; 3],
    #[serde(rename = "N")]
    pub n: usize,
}

fn corner_record(c: &CornerConfig) -> CornerRecord {
    CornerRecord {
        lambda_b: c.lambda_b().to_vec(),
        rho: c.rho().iter().map(|&(u, v)| [u, v]).collect(),
        free_classes: c.free_count(),
    }
}

impl From<&FixedComponent> for ComponentRecord {
    fn from(comp: &FixedComponent) -> Self {
        let [c0, c1, c2] = comp.corners();
        ComponentRecord {
            k: comp.k(),
            d: comp.defects(),
            a: comp.sides(),
            s: comp.thresholds(),
            corners: [corner_record(c0), corner_record(c1), corner_record(c2)],
            n: comp.n_factors(),
        }
    }
}

impl TryFrom<&ComponentRecord> for FixedComponent {
    type Error = Error;

    fn try_from(r: &ComponentRecord) -> Result<Self> {
        let mut corners = Vec::with_capacity(3);
        for (i, cr) in r.corners.iter().enumerate() {
            let (j, l) = complement(i);
            let rho: BTreeSet<_> = cr.rho.iter().map(|&[u, v]| (u, v)).collect();
            let cfg = CornerConfig::from_parts(r.a.get(j), r.a.get(l), cr.lambda_b.clone(), rho)?
                .ok_or_else(|| {
                Error::Parse(format!("corner {i} has a doubly forced line class"))
            })?;
            if cfg.free_count() != cr.free_classes {
                return Err(Error::Parse(format!(
                    "corner {i} free class count does not match its tables"
                )));
            }
            corners.push(cfg);
        }
        let corners: [CornerConfig; 3] = corners.try_into().expect("three corners");
        let comp = FixedComponent::new(r.k, r.a, r.s, corners)?;
        if comp.defects() != r.d || comp.n_factors() != r.n {
            return Err(Error::Parse(
                "recorded defects or N disagree with the corners".into(),
            ));
        }
        Ok(comp)
    }
}

pub fn component_json(comp: &FixedComponent) -> String {
    serde_json::to_string(&ComponentRecord::from(comp)).expect("records serialize")
}

pub fn summary_json(comps: &[FixedComponent]) -> String {
    let euler: u64 = comps.iter().map(|c| 1u64 << c.n_factors()).sum();
    json!({"summary": {"components": comps.len(), "euler_characteristic": euler}}).to_string()
}

/// Writes every component followed by the summary line.
pub fn write_components<W: Write>(mut w: W, comps: &[FixedComponent]) -> std::io::Result<()> {
    for c in comps {
        writeln!(w, "{}", component_json(c))?;
    }
    writeln!(w, "{}", summary_json(comps))
}

pub fn read_components<R: BufRead>(r: R) -> Result<Vec<FixedComponent>> {
    let mut out = Vec::new();
    for (no, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        if value.get("summary").is_some() {
            continue;
        }
        let record: ComponentRecord = serde_json::from_value(value)
            .map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        out.push(FixedComponent::try_from(&record)?);
    }
    Ok(out)
}

/// `p/q` in lowest terms, `p` alone for integers.
pub fn rational_string(r: &BigRational) -> String {
    r.to_string()
}

pub fn contribution_json(id: usize, value: &BigRational) -> String {
    json!({"id": id, "value": rational_string(value)}).to_string()
}

pub fn virtual_table_json(t: &VirtualTable) -> Value {
    Value::Array(
        t.characters()
            .map(|c| {
                let roots: Vec<Value> = t
                    .at(c)
                    .map(|(cl, m)| json!({"class": cl.coords(), "mult": m}))
                    .collect();
                json!({"char": [c.m1, c.m2], "roots": roots})
            })
            .collect(),
    )
}
