//! Local tori acting on the tree: an inert torus fixing the origin and a
//! split torus translating along the standard apartment.

mod labels;
mod orbit;

pub use labels::{LabelLayout, LevelMap};
pub use orbit::{OrbitRow, OrbitTable};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{Mat2, Zpk};
use crate::tree::{BruhatTitsTree, DirectedEdge, TreePoint, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorusKind {
    /// `K_p = Q_p(√d)` with `d` a non-residue; `x + y√d ↦ [[x, d y], [y, x]]`.
    Inert { d: i64 },
    /// `K_p = Q_p × Q_p`, acting through `diag(t, 1)`.
    Split,
}

/// An element of `K_p^× / Q_p^×` at the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorusElement {
    Inert { x: u64, y: u64 },
    /// `t = p^valuation · unit`.
    Split { unit: u64, valuation: i32 },
}

/// The split torus fixes the apartment through `diag(p^m, 1)`, `m ∈ Z`;
/// `window` bounds the part that is materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geodesic {
    pub window: u32,
}

impl Geodesic {
    /// Class of `diag(p^m, 1)`.
    pub fn vertex(m: i32) -> Vertex {
        if m >= 0 {
            Vertex::new(m as u32, 0, 0)
        } else {
            Vertex::new(0, m.unsigned_abs(), 0)
        }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let w = self.window as i32;
        (-w..=w).map(Self::vertex).collect()
    }

    /// `min_m d(v, diag(p^m, 1))` over the window.
    pub fn distance_from(&self, tree: &BruhatTitsTree, v: &Vertex) -> Result<u32> {
        let mut best = u32::MAX;
        for w in self.vertices() {
            best = best.min(tree.distance(v, &w)?);
        }
        Ok(best)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedLocus {
    Vertex(Vertex),
    Geodesic(Geodesic),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticTorus {
    tree: BruhatTitsTree,
    kind: TorusKind,
}

impl QuadraticTorus {
    pub fn inert(tree: BruhatTitsTree, d: i64) -> Result<Self> {
        let r = tree.ring();
        let p = r.p();
        if p == 2 {
            return Err(Error::InvalidInput("inert tori need an odd prime".into()));
        }
        let dp = d.rem_euclid(p as i64) as u64;
        let euler = Zpk::new(p, 1)?.pow(dp, (p - 1) / 2);
        if dp == 0 || euler == 1 {
            return Err(Error::InvalidInput(format!("{d} is not a quadratic non-residue mod {p}")));
        }
        Ok(QuadraticTorus { tree, kind: TorusKind::Inert { d } })
    }

    /// Inert torus with the least positive non-residue.
    pub fn inert_default(tree: BruhatTitsTree) -> Result<Self> {
        let p = tree.p() as i64;
        let d = (2..p).find(|&d| Self::inert(tree, d).is_ok()).ok_or_else(|| {
            Error::InvalidInput("no non-residue found".into())
        })?;
        Self::inert(tree, d)
    }

    pub fn split(tree: BruhatTitsTree) -> Self {
        QuadraticTorus { tree, kind: TorusKind::Split }
    }

    pub fn tree(&self) -> &BruhatTitsTree {
        &self.tree
    }

    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.tree.p()
    }

    fn d_residue(&self) -> Result<u64> {
        match self.kind {
            TorusKind::Inert { d } => Ok(self.tree.ring().from_i64(d)),
            TorusKind::Split => Err(Error::InvalidInput("operation needs an inert torus".into())),
        }
    }

    pub fn identity(&self) -> TorusElement {
        match self.kind {
            TorusKind::Inert { .. } => TorusElement::Inert { x: 1, y: 0 },
            TorusKind::Split => TorusElement::Split { unit: 1, valuation: 0 },
        }
    }

    pub fn inert_element(&self, x: i128, y: i128) -> Result<TorusElement> {
        self.d_residue()?;
        let r = self.tree.ring();
        let (x, y) = (r.from_i128(x), r.from_i128(y));
        if !r.is_unit(x) && !r.is_unit(y) {
            return Err(Error::InvalidInput("x + y√d must be a unit up to scalars".into()));
        }
        Ok(TorusElement::Inert { x, y })
    }

    pub fn split_element(&self, unit: i128, valuation: i32) -> Result<TorusElement> {
        let r = self.tree.ring();
        let u = r.from_i128(unit);
        if self.kind != TorusKind::Split || !r.is_unit(u) {
            return Err(Error::InvalidInput("split elements need a split torus and a unit".into()));
        }
        Ok(TorusElement::Split { unit: u, valuation })
    }

    pub fn mul(&self, s: &TorusElement, t: &TorusElement) -> Result<TorusElement> {
        let r = self.tree.ring();
        match (*s, *t) {
            (TorusElement::Inert { x: a, y: b }, TorusElement::Inert { x: c, y: e }) => {
                let d = self.d_residue()?;
                Ok(TorusElement::Inert {
                    x: r.add(r.mul(a, c), r.mul(d, r.mul(b, e))),
                    y: r.add(r.mul(a, e), r.mul(b, c)),
                })
            }
            (TorusElement::Split { unit: u, valuation: v }, TorusElement::Split { unit: w, valuation: z }) => {
                Ok(TorusElement::Split { unit: r.mul(u, w), valuation: v + z })
            }
            _ => Err(Error::InvalidInput("mixed torus kinds".into())),
        }
    }

    pub fn pow(&self, t: &TorusElement, mut e: u64) -> Result<TorusElement> {
        let mut acc = self.identity();
        let mut base = *t;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `Ψ(t)` as a matrix.
    pub fn embed(&self, t: &TorusElement) -> Result<Mat2> {
        let r = self.tree.ring();
        match *t {
            TorusElement::Inert { x, y } => {
                let d = self.d_residue()?;
                Ok(Mat2::from_residues(r, [[x, r.mul(d, y)], [y, x]]))
            }
            TorusElement::Split { unit, valuation } => {
                let v = valuation.unsigned_abs();
                if v >= r.k() {
                    return Err(Error::PrecisionExhausted("split element valuation too large".into()));
                }
                // diag(p^v u, 1), or its scalar multiple diag(u, p^-v).
                Ok(if valuation >= 0 {
                    Mat2::from_residues(r, [[r.mul(r.p_pow(v), unit), 0], [0, 1]])
                } else {
                    Mat2::from_residues(r, [[unit, 0], [0, r.p_pow(v)]])
                })
            }
        }
    }

    pub fn act_vertex(&self, t: &TorusElement, v: &Vertex) -> Result<Vertex> {
        self.tree.normal_form(&self.embed(t)?.mul(&self.tree.basis(v)?))
    }

    pub fn act(&self, t: &TorusElement, w: &TreePoint) -> Result<TreePoint> {
        Ok(match w {
            TreePoint::Vertex(v) => TreePoint::Vertex(self.act_vertex(t, v)?),
            TreePoint::Edge(e) => {
                TreePoint::Edge(DirectedEdge::new(self.act_vertex(t, &e.source)?, self.act_vertex(t, &e.target)?))
            }
        })
    }

    pub fn fixed_point(&self, window: u32) -> FixedLocus {
        match self.kind {
            TorusKind::Inert { .. } => FixedLocus::Vertex(Vertex::ORIGIN),
            TorusKind::Split => FixedLocus::Geodesic(Geodesic { window }),
        }
    }

    /// `||t||`: the translation length along the apartment.
    pub fn norm(&self, t: &TorusElement) -> Result<i32> {
        match *t {
            TorusElement::Split { valuation, .. } => Ok(valuation),
            TorusElement::Inert { .. } => Ok(0),
        }
    }

    /// `[U_0 : U_j]`.
    pub fn filtration_order(&self, j: usize) -> u64 {
        filtration_order(self.p(), j)
    }

    /// Vertices `v_j = [Z_p ⊕ p^j Z_p]` and edges `e_j = (v_{j-1} → v_j)`.
    pub fn base_sequence(&self, n: usize) -> Result<(Vec<Vertex>, Vec<DirectedEdge>)> {
        self.d_residue()?;
        if n as u32 >= self.tree.k() {
            return Err(Error::PrecisionExhausted(format!("depth {n} needs more digits")));
        }
        let vs: Vec<Vertex> = (0..=n).map(|j| Vertex::new(0, j as u32, 0)).collect();
        let es = vs.windows(2).map(|w| DirectedEdge::new(w[0], w[1])).collect();
        Ok((vs, es))
    }

    /// Whether `t` lies in `U_j`, i.e. is a scalar modulo `p^j`.
    pub fn in_filtration(&self, t: &TorusElement, j: usize) -> Result<bool> {
        match *t {
            TorusElement::Inert { x, y } => {
                let r = self.tree.ring();
                Ok(j == 0 || (r.is_unit(x) && r.valuation(y) >= j as u32))
            }
            TorusElement::Split { .. } => Err(Error::InvalidInput("filtration is defined for inert tori".into())),
        }
    }

    /// A topological generator of `O_K^× / Z_p^×`, found by testing the
    /// order of `x + √d` in `H_2`; a generator there generates every `H_j`.
    pub fn generator(&self) -> Result<TorusElement> {
        let d = self.d_residue()?;
        let p = self.p();
        let ring2 = Zpk::new(p, 2)?;
        let order = (p + 1) * p;
        let prime_factors: Vec<u64> = (2..=order).filter(|&q| order.is_multiple_of(q) && crate::padic::is_prime(q)).collect();
        let d2 = ring2.reduce(d % ring2.modulus());
        let mul2 = |(a, b): (u64, u64), (c, e): (u64, u64)| {
            (ring2.add(ring2.mul(a, c), ring2.mul(d2, ring2.mul(b, e))), ring2.add(ring2.mul(a, e), ring2.mul(b, c)))
        };
        let pow2 = |g: (u64, u64), mut e: u64| {
            let (mut acc, mut base) = ((1u64, 0u64), g);
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul2(acc, base);
                }
                base = mul2(base, base);
                e >>= 1;
            }
            acc
        };
        // A class is trivial iff y ≡ 0.
        for x0 in 0..ring2.modulus() {
            let g = (x0, 1);
            if prime_factors.iter().all(|&q| pow2(g, order / q).1 != 0) {
                return self.inert_element(x0 as i128, 1);
            }
        }
        Err(Error::InvalidInput("no generator found".into()))
    }
}

/// `[U_0 : U_j] = (p + 1) p^(j-1)` for `j >= 1`, and 1 at `j = 0`.
pub fn filtration_order(p: u64, j: usize) -> u64 {
    if j == 0 {
        1
    } else {
        (p + 1) * p.pow(j as u32 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inert(p: u64, d: i64) -> QuadraticTorus {
        QuadraticTorus::inert(BruhatTitsTree::for_radius(p, 5).unwrap(), d).unwrap()
    }

    #[test]
    fn inert_fixes_origin() {
        let t = inert(5, 2);
        assert_eq!(t.fixed_point(0), FixedLocus::Vertex(Vertex::ORIGIN));
        for (x, y) in [(1, 1), (2, 3), (0, 1), (4, 0), (7, 11)] {
            let u = t.inert_element(x, y).unwrap();
            assert_eq!(t.act_vertex(&u, &Vertex::ORIGIN).unwrap(), Vertex::ORIGIN);
        }
        assert!(QuadraticTorus::inert(*t.tree(), 4).is_err());
        assert!(QuadraticTorus::inert(BruhatTitsTree::new(2, 8).unwrap(), 3).is_err());
    }

    #[test]
    fn split_fixes_apartment() {
        let tree = BruhatTitsTree::for_radius(3, 4).unwrap();
        let t = QuadraticTorus::split(tree);
        let FixedLocus::Geodesic(g) = t.fixed_point(2) else { panic!("expected a geodesic") };
        assert!(g.vertices().contains(&Vertex::ORIGIN));
        assert!(g.vertices().contains(&Vertex::new(0, 1, 0)));
        let unit = t.split_element(2, 0).unwrap();
        for v in g.vertices() {
            assert_eq!(t.act_vertex(&unit, &v).unwrap(), v);
        }
        let shift = t.split_element(1, 1).unwrap();
        assert_eq!(t.act_vertex(&shift, &Geodesic::vertex(-1)).unwrap(), Vertex::ORIGIN);
        assert_eq!(t.norm(&t.mul(&shift, &shift).unwrap()).unwrap(), 2);
        let off = Vertex::new(1, 0, 1);
        assert_eq!(g.distance_from(&tree, &off).unwrap(), 1);
    }

    #[test]
    fn stabilizers_follow_filtration() {
        // d = 2 is a non-residue mod 3.
        let t = inert(3, 2);
        let (vs, es) = t.base_sequence(3).unwrap();
        assert_eq!(vs[0], Vertex::ORIGIN);
        for j in 1..=3 {
            assert_eq!(t.tree().distance(&vs[0], &vs[j]).unwrap(), j as u32);
            assert_eq!(t.tree().distance(&es[j - 1].source, &es[j - 1].target).unwrap(), 1);
        }
        // 1 + 3√d lies in U_1 \ U_2.
        let u = t.inert_element(1, 3).unwrap();
        assert!(t.in_filtration(&u, 1).unwrap() && !t.in_filtration(&u, 2).unwrap());
        assert_eq!(t.act_vertex(&u, &vs[1]).unwrap(), vs[1]);
        assert_ne!(t.act_vertex(&u, &vs[2]).unwrap(), vs[2]);
        for x in 0..9i128 {
            for y in 0..9i128 {
                let Ok(s) = t.inert_element(x, y) else { continue };
                for j in 0..=2 {
                    let fixes = t.act_vertex(&s, &vs[j]).unwrap() == vs[j];
                    let edge_fixed = j == 0 || t.act(&s, &TreePoint::Edge(es[j - 1])).unwrap() == TreePoint::Edge(es[j - 1]);
                    assert_eq!(fixes, t.in_filtration(&s, j).unwrap(), "x={x} y={y} j={j}");
                    if j > 0 {
                        assert_eq!(edge_fixed, fixes);
                    }
                }
            }
        }
    }

    #[test]
    fn filtration_orders() {
        assert_eq!(filtration_order(3, 1), 4);
        assert_eq!(filtration_order(3, 3), 36);
        assert_eq!(filtration_order(3, 0), 1);
    }

    proptest! {
        #[test]
        fn action_is_a_group_action(a in (0i128..243, 0i128..243), b in (0i128..243, 0i128..243), path in prop::collection::vec(0usize..4, 0..4)) {
            let t = inert(3, -1);
            let (Ok(s), Ok(u)) = (t.inert_element(a.0, a.1), t.inert_element(b.0, b.1)) else { return Ok(()) };
            let mut v = Vertex::ORIGIN;
            for step in path {
                let nb = t.tree().neighbors(&v).unwrap();
                v = nb[step.min(nb.len() - 1)];
            }
            let su = t.mul(&s, &u).unwrap();
            prop_assert_eq!(t.act_vertex(&su, &v).unwrap(), t.act_vertex(&s, &t.act_vertex(&u, &v).unwrap()).unwrap());
            prop_assert_eq!(t.act_vertex(&t.identity(), &v).unwrap(), v);
            let d0 = t.tree().distance(&Vertex::ORIGIN, &v).unwrap();
            prop_assert_eq!(t.tree().distance(&Vertex::ORIGIN, &t.act_vertex(&s, &v).unwrap()).unwrap(), d0);
        }
    }
}
