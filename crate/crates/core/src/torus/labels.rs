use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the level `j` of a tower maps to the free quotient `(Z/p^m(j))^δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelMap {
    /// `m(j) = max(j - 1, 0)`; level 0 carries no torsion. The local inert model.
    Shifted,
    /// `m(j) = j`; every level carries the full torsion factor.
    Aligned,
}

/// Labels of `H_j ≅ Z/t_j × (Z/p^m(j))^δ`, flattened as `τ · p^(m δ) + g`
/// where `g` packs the free digits little-endian in base `p^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelLayout {
    pub p: u64,
    pub delta: usize,
    pub torsion: u64,
    pub level_map: LevelMap,
}

impl LabelLayout {
    pub fn new(p: u64, delta: usize, torsion: u64, level_map: LevelMap) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        if torsion == 0 || torsion.is_multiple_of(p) {
            return Err(Error::InvalidInput(format!("torsion order {torsion} must be positive and prime to p")));
        }
        Ok(LabelLayout { p, delta, torsion, level_map })
    }

    /// The local inert model: torsion `p + 1`, one free variable.
    pub fn inert(p: u64) -> Self {
        LabelLayout { p, delta: 1, torsion: p + 1, level_map: LevelMap::Shifted }
    }

    pub fn free_exponent(&self, j: usize) -> u32 {
        match self.level_map {
            LevelMap::Shifted => j.saturating_sub(1) as u32,
            LevelMap::Aligned => j as u32,
        }
    }

    /// Inverse of [`Self::free_exponent`] on the levels that reach layer `m`.
    pub fn level_for_free_layer(&self, m: u32) -> usize {
        match self.level_map {
            LevelMap::Shifted => m as usize + 1,
            LevelMap::Aligned => m as usize,
        }
    }

    pub fn torsion_at(&self, j: usize) -> u64 {
        match (self.level_map, j) {
            (LevelMap::Shifted, 0) => 1,
            _ => self.torsion,
        }
    }

    pub fn free_modulus(&self, j: usize) -> u64 {
        self.p.pow(self.free_exponent(j))
    }

    pub fn free_size(&self, j: usize) -> usize {
        (self.free_modulus(j) as usize).pow(self.delta as u32)
    }

    pub fn size(&self, j: usize) -> usize {
        self.torsion_at(j) as usize * self.free_size(j)
    }

    pub fn split(&self, j: usize, label: usize) -> (u64, Vec<u64>) {
        let fs = self.free_size(j);
        let m = self.free_modulus(j);
        let mut g = label % fs;
        let digits = (0..self.delta)
            .map(|_| {
                let d = (g as u64) % m;
                g /= m as usize;
                d
            })
            .collect();
        ((label / fs) as u64, digits)
    }

    pub fn join(&self, j: usize, torsion: u64, digits: &[u64]) -> usize {
        let m = self.free_modulus(j) as usize;
        let g = digits.iter().rev().fold(0usize, |acc, &d| acc * m + d as usize % m);
        torsion as usize * self.free_size(j) + g
    }

    /// Index of the free-quotient element of a label.
    pub fn free_part(&self, j: usize, label: usize) -> usize {
        label % self.free_size(j)
    }

    /// The projection `H_{j+1} → H_j` on labels.
    pub fn project(&self, j: usize, label: usize) -> usize {
        let (tau, digits) = self.split(j + 1, label);
        let tau = if self.torsion_at(j) == 1 { 0 } else { tau };
        self.join(j, tau, &digits)
    }

    /// Fibers of the projection `H_{j+1} → H_j`, each listed in label order.
    pub fn fibers(&self, j: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.size(j)];
        for x in 0..self.size(j + 1) {
            out[self.project(j, x)].push(x);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inert_fiber_profile() {
        let l = LabelLayout::inert(3);
        assert_eq!((0..5).map(|j| l.size(j)).collect::<Vec<_>>(), vec![1, 4, 12, 36, 108]);
        assert!(l.fibers(0).iter().all(|f| f.len() == 4));
        for j in 1..4 {
            assert!(l.fibers(j).iter().all(|f| f.len() == 3));
        }
    }

    #[test]
    fn aligned_two_variables() {
        let l = LabelLayout::new(3, 2, 2, LevelMap::Aligned).unwrap();
        assert_eq!(l.size(0), 2);
        assert_eq!(l.size(2), 2 * 81);
        assert!(l.fibers(1).iter().all(|f| f.len() == 9));
        let x = l.join(2, 1, &[7, 5]);
        assert_eq!(l.split(2, x), (1, vec![7, 5]));
        assert_eq!(l.split(1, l.project(1, x)), (1, vec![1, 2]));
    }
}
