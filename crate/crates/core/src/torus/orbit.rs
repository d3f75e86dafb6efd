use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LabelLayout, QuadraticTorus, TorusKind};
use crate::error::{Error, Result};
use crate::padic::Zpk;
use crate::tree::TreePoint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRow {
    pub label: usize,
    pub torsion: u64,
    pub free: Vec<u64>,
    pub w: TreePoint,
}

/// The bijection `H_j → U_0 · w_j` for an inert torus, with `w_j` the base
/// vertex `v_j` or base edge `e_j = (v_{j-1} → v_j)`.
///
/// A fixed topological generator `g` labels `H_j` cyclically by `h`; rows are
/// stored under the split label `(h mod (p+1), h mod p^(j-1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTable {
    p: u64,
    d: i64,
    level: usize,
    rotation: u64,
    layout: LabelLayout,
    rows: Vec<OrbitRow>,
    projection: Vec<usize>,
    lookup: HashMap<TreePoint, usize>,
}

/// The cyclic exponent `h` with the given torsion and free residues.
pub(crate) fn crt_label(p: u64, j: usize, torsion: u64, free: u64) -> u64 {
    if j <= 1 {
        return torsion;
    }
    let ring = Zpk::new(p, j as u32 - 1).expect("valid level");
    let inv = ring.inv(ring.reduce(p + 1)).expect("p + 1 is a unit");
    let t = ring.mul(ring.sub(ring.reduce(free), ring.reduce(torsion)), inv);
    torsion + (p + 1) * t
}

impl OrbitTable {
    pub fn build(torus: &QuadraticTorus, level: usize, edges: bool) -> Result<Self> {
        Self::build_rotated(torus, level, edges, 0)
    }

    /// Same table for the base sequence moved by `σ = g^rotation`, so the row
    /// labeled `h` holds `g^(h + rotation) · w_j`.
    pub fn build_rotated(torus: &QuadraticTorus, level: usize, edges: bool, rotation: u64) -> Result<Self> {
        let TorusKind::Inert { d } = torus.kind() else {
            return Err(Error::InvalidInput("orbit tables are built for inert tori".into()));
        };
        if edges && level == 0 {
            return Err(Error::InvalidInput("edge orbits start at level 1".into()));
        }
        let p = torus.p();
        let layout = LabelLayout::inert(p);
        let (vs, es) = torus.base_sequence(level)?;
        let base: TreePoint = if edges { es[level - 1].into() } else { vs[level].into() };
        let gen = torus.generator()?;
        let sigma = torus.pow(&gen, rotation)?;
        let rows: Result<Vec<OrbitRow>> = (0..layout.size(level))
            .into_par_iter()
            .map(|label| {
                let (torsion, free) = layout.split(level, label);
                let h = crt_label(p, level, torsion, free[0]);
                let t = torus.mul(&torus.pow(&gen, h)?, &sigma)?;
                Ok(OrbitRow { label, torsion, free, w: torus.act(&t, &base)? })
            })
            .collect();
        let rows = rows?;
        let mut lookup = HashMap::with_capacity(rows.len());
        for row in &rows {
            if let Some(first) = lookup.insert(row.w, row.label) {
                return Err(Error::TransitivityViolation { level, first, second: row.label });
            }
        }
        let projection = if level == 0 { Vec::new() } else { (0..rows.len()).map(|x| layout.project(level - 1, x)).collect() };
        Ok(OrbitTable { p, d, level, rotation, layout, rows, projection, lookup })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn layout(&self) -> &LabelLayout {
        &self.layout
    }

    pub fn rows(&self) -> &[OrbitRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn label_of(&self, w: &TreePoint) -> Option<usize> {
        self.lookup.get(w).copied()
    }

    /// Label at level `j - 1` of each row.
    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn rotation(&self) -> u64 {
        self.rotation
    }
}

#[derive(Serialize, Deserialize)]
struct RowWire {
    h: Vec<u64>,
    w: TreePoint,
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    p: u64,
    d: i64,
    level: usize,
    rotation: u64,
    layout: LabelLayout,
    rows: Vec<RowWire>,
    projection: Vec<usize>,
}

impl Serialize for OrbitTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableWire {
            p: self.p,
            d: self.d,
            level: self.level,
            rotation: self.rotation,
            layout: self.layout,
            rows: self
                .rows
                .iter()
                .map(|r| RowWire { h: std::iter::once(r.torsion).chain(r.free.iter().copied()).collect(), w: r.w })
                .collect(),
            projection: self.projection.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbitTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = TableWire::deserialize(d)?;
        let mut rows = Vec::with_capacity(w.rows.len());
        let mut lookup = HashMap::new();
        for r in w.rows {
            let (&torsion, free) = r.h.split_first().ok_or_else(|| D::Error::custom("empty label"))?;
            let label = w.layout.join(w.level, torsion, free);
            if lookup.insert(r.w, label).is_some() {
                return Err(D::Error::custom("duplicate orbit point"));
            }
            rows.push(OrbitRow { label, torsion, free: free.to_vec(), w: r.w });
        }
        Ok(OrbitTable {
            p: w.p,
            d: w.d,
            level: w.level,
            rotation: w.rotation,
            layout: w.layout,
            rows,
            projection: w.projection,
            lookup,
        })
    }
}
