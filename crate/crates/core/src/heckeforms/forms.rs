use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EigenData;
use crate::error::{Error, Result};
use crate::padic::{PrecisionInt, Zpk};
use crate::tree::{Ball, BruhatTitsTree, DirectedEdge, TreePoint, Vertex};

/// Shared surface of vertex and edge forms.
pub trait Form {
    fn ring(&self) -> Zpk;
    fn radius(&self) -> u32;
    /// One value table per component.
    fn components(&self) -> &[Vec<u64>];
}

/// `h` functions on the vertices of a ball of radius `radius`.
#[derive(Clone, Debug)]
pub struct VertexForm {
    ring: Zpk,
    tree: BruhatTitsTree,
    ball: Arc<Ball>,
    radius: u32,
    values: Vec<Vec<u64>>,
}

/// `h` functions on the oriented edges of a ball; an edge and its reversal
/// carry independent values.
#[derive(Clone, Debug)]
pub struct EdgeForm {
    ring: Zpk,
    tree: BruhatTitsTree,
    ball: Arc<Ball>,
    radius: u32,
    values: Vec<Vec<u64>>,
}

impl PartialEq for VertexForm {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring && self.radius == o.radius && self.ball.center() == o.ball.center() && self.values == o.values
    }
}

impl PartialEq for EdgeForm {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring && self.radius == o.radius && self.ball.center() == o.ball.center() && self.values == o.values
    }
}

fn check_components(values: &[Vec<u64>], len: usize) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidInput("a form needs at least one component".into()));
    }
    if values.iter().any(|c| c.len() != len) {
        return Err(Error::InvalidInput(format!("each component needs {len} values")));
    }
    Ok(())
}

impl VertexForm {
    pub fn from_fn(
        ring: Zpk,
        tree: BruhatTitsTree,
        ball: Arc<Ball>,
        radius: u32,
        h: usize,
        mut f: impl FnMut(usize, &Vertex) -> u64,
    ) -> Result<Self> {
        ball.require_radius(radius)?;
        let n = ball.vertex_count(radius);
        let values = (0..h).map(|c| ball.vertices()[..n].iter().map(|v| ring.reduce(f(c, v))).collect()).collect();
        Self::from_values(ring, tree, ball, radius, values)
    }

    pub fn from_values(ring: Zpk, tree: BruhatTitsTree, ball: Arc<Ball>, radius: u32, values: Vec<Vec<u64>>) -> Result<Self> {
        ball.require_radius(radius)?;
        check_components(&values, ball.vertex_count(radius))?;
        let values = values.into_iter().map(|c| c.into_iter().map(|x| ring.reduce(x)).collect()).collect();
        Ok(VertexForm { ring, tree, ball, radius, values })
    }

    pub fn constant(ring: Zpk, tree: BruhatTitsTree, ball: Arc<Ball>, radius: u32, h: usize, c: u64) -> Result<Self> {
        Self::from_fn(ring, tree, ball, radius, h, |_, _| c)
    }

    pub fn h(&self) -> usize {
        self.values.len()
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn tree(&self) -> &BruhatTitsTree {
        &self.tree
    }

    pub fn value(&self, component: usize, v: &Vertex) -> Option<PrecisionInt> {
        let i = self.ball.index_of(v)?;
        self.values.get(component)?.get(i).map(|&x| self.ring.elt(x))
    }

    pub fn value_at(&self, component: usize, i: usize) -> u64 {
        self.values[component][i]
    }

    /// `(T f)(v) = Σ_{w ~ v} f(w)`, on the ball of radius `radius - 1`.
    pub fn hecke_t(&self) -> Result<VertexForm> {
        if self.radius == 0 {
            return Err(Error::EmptyDomain);
        }
        let r = self.ring;
        let n = self.ball.vertex_count(self.radius - 1);
        let values = self
            .values
            .iter()
            .map(|comp| {
                (0..n)
                    .into_par_iter()
                    .map(|i| {
                        let nb = self.ball.neighbors_of(i).expect("interior vertex");
                        nb.iter().fold(0, |acc, &j| r.add(acc, comp[j]))
                    })
                    .collect()
            })
            .collect();
        Ok(VertexForm { values, radius: self.radius - 1, ball: self.ball.clone(), ..*self })
    }

    pub fn restrict(&self, radius: u32) -> Result<VertexForm> {
        if radius > self.radius {
            return Err(Error::InvalidInput("cannot enlarge a form's domain".into()));
        }
        let n = self.ball.vertex_count(radius);
        let values = self.values.iter().map(|c| c[..n].to_vec()).collect();
        Ok(VertexForm { values, radius, ball: self.ball.clone(), ..*self })
    }

    fn zip(&self, o: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        if self.ring != o.ring || self.radius != o.radius || self.h() != o.h() || !Arc::ptr_eq(&self.ball, &o.ball) {
            return Err(Error::InvalidInput("forms live on different domains".into()));
        }
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()).collect();
        Ok(VertexForm { values, ball: self.ball.clone(), ..*self })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let r = self.ring;
        self.zip(o, |x, y| r.add(x, y))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let r = self.ring;
        self.zip(o, |x, y| r.sub(x, y))
    }

    pub fn map(&self, f: impl Fn(u64) -> u64) -> Self {
        let values = self.values.iter().map(|c| c.iter().map(|&x| self.ring.reduce(f(x))).collect()).collect();
        VertexForm { values, ball: self.ball.clone(), ..*self }
    }

    pub fn scale(&self, c: u64) -> Self {
        let r = self.ring;
        self.map(|x| r.mul(x, c))
    }

    pub fn add_constant(&self, c: u64) -> Self {
        let r = self.ring;
        self.map(|x| r.add(x, c))
    }

    /// Whether `T f = a f` at every vertex where `T f` is defined.
    pub fn is_local_eigenform(&self, a: u64) -> Result<bool> {
        let t = self.hecke_t()?;
        let me = self.restrict(self.radius - 1)?;
        Ok(t == me.scale(a))
    }
}

impl Form for VertexForm {
    fn ring(&self) -> Zpk {
        self.ring
    }
    fn radius(&self) -> u32 {
        self.radius
    }
    fn components(&self) -> &[Vec<u64>] {
        &self.values
    }
}

impl EdgeForm {
    pub fn from_fn(
        ring: Zpk,
        tree: BruhatTitsTree,
        ball: Arc<Ball>,
        radius: u32,
        h: usize,
        mut f: impl FnMut(usize, &DirectedEdge) -> u64,
    ) -> Result<Self> {
        ball.require_radius(radius)?;
        let n = ball.edge_count(radius);
        let values = (0..h).map(|c| ball.edges()[..n].iter().map(|e| ring.reduce(f(c, e))).collect()).collect();
        Self::from_values(ring, tree, ball, radius, values)
    }

    pub fn from_values(ring: Zpk, tree: BruhatTitsTree, ball: Arc<Ball>, radius: u32, values: Vec<Vec<u64>>) -> Result<Self> {
        ball.require_radius(radius)?;
        check_components(&values, ball.edge_count(radius))?;
        let values = values.into_iter().map(|c| c.into_iter().map(|x| ring.reduce(x)).collect()).collect();
        Ok(EdgeForm { ring, tree, ball, radius, values })
    }

    pub fn constant(ring: Zpk, tree: BruhatTitsTree, ball: Arc<Ball>, radius: u32, h: usize, c: u64) -> Result<Self> {
        Self::from_fn(ring, tree, ball, radius, h, |_, _| c)
    }

    pub fn h(&self) -> usize {
        self.values.len()
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn tree(&self) -> &BruhatTitsTree {
        &self.tree
    }

    pub fn value(&self, component: usize, e: &DirectedEdge) -> Option<PrecisionInt> {
        let i = self.ball.edge_index_of(e)?;
        self.values.get(component)?.get(i).map(|&x| self.ring.elt(x))
    }

    pub fn value_at(&self, component: usize, e: usize) -> u64 {
        self.values[component][e]
    }

    /// `(U f)(e) = Σ f(e')` over the `p` edges leaving `t(e)` other than the
    /// reversal of `e`; defined on the ball of radius `radius - 1`.
    pub fn hecke_u(&self) -> Result<EdgeForm> {
        if self.radius == 0 {
            return Err(Error::EmptyDomain);
        }
        let r = self.ring;
        let n = self.ball.edge_count(self.radius - 1);
        let values = self
            .values
            .iter()
            .map(|comp| {
                (0..n)
                    .into_par_iter()
                    .map(|e| {
                        let (s, t) = self.ball.edge_ends(e);
                        let nb = self.ball.neighbors_of(t).expect("interior target");
                        nb.iter()
                            .filter(|&&x| x != s)
                            .fold(0, |acc, &x| r.add(acc, comp[self.ball.edge_index(t, x).expect("edge in ball")]))
                    })
                    .collect()
            })
            .collect();
        Ok(EdgeForm { values, radius: self.radius - 1, ball: self.ball.clone(), ..*self })
    }

    pub fn restrict(&self, radius: u32) -> Result<EdgeForm> {
        if radius > self.radius {
            return Err(Error::InvalidInput("cannot enlarge a form's domain".into()));
        }
        let n = self.ball.edge_count(radius);
        let values = self.values.iter().map(|c| c[..n].to_vec()).collect();
        Ok(EdgeForm { values, radius, ball: self.ball.clone(), ..*self })
    }

    fn zip(&self, o: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        if self.ring != o.ring || self.radius != o.radius || self.h() != o.h() || !Arc::ptr_eq(&self.ball, &o.ball) {
            return Err(Error::InvalidInput("forms live on different domains".into()));
        }
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()).collect();
        Ok(EdgeForm { values, ball: self.ball.clone(), ..*self })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let r = self.ring;
        self.zip(o, |x, y| r.add(x, y))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let r = self.ring;
        self.zip(o, |x, y| r.sub(x, y))
    }

    pub fn scale(&self, c: u64) -> Self {
        let r = self.ring;
        let values = self.values.iter().map(|v| v.iter().map(|&x| r.mul(x, c)).collect()).collect();
        EdgeForm { values, ball: self.ball.clone(), ..*self }
    }

    pub fn add_constant(&self, c: u64) -> Self {
        let r = self.ring;
        let values = self.values.iter().map(|v| v.iter().map(|&x| r.add(x, r.reduce(c))).collect()).collect();
        EdgeForm { values, ball: self.ball.clone(), ..*self }
    }
}

impl Form for EdgeForm {
    fn ring(&self) -> Zpk {
        self.ring
    }
    fn radius(&self) -> u32 {
        self.radius
    }
    fn components(&self) -> &[Vec<u64>] {
        &self.values
    }
}

/// `(φ_s, φ_t)` with `φ_s(e) = f0(s(e))` and `φ_t(e) = f0(t(e))`.
pub fn stabilize_parts(f0: &VertexForm) -> (EdgeForm, EdgeForm) {
    let n = f0.ball.edge_count(f0.radius);
    let pick = |source: bool| -> Vec<Vec<u64>> {
        f0.values
            .iter()
            .map(|comp| {
                (0..n)
                    .map(|e| {
                        let (s, t) = f0.ball.edge_ends(e);
                        comp[if source { s } else { t }]
                    })
                    .collect()
            })
            .collect()
    };
    let mk = |values| EdgeForm { ring: f0.ring, tree: f0.tree, ball: f0.ball.clone(), radius: f0.radius, values };
    (mk(pick(true)), mk(pick(false)))
}

/// `φ = φ_s - α_p φ_t`.
pub fn stabilize(f0: &VertexForm, eigen: &EigenData) -> Result<EdgeForm> {
    let alpha = eigen.require_alpha_p()?;
    if alpha.ring() != f0.ring {
        return Err(Error::InvalidInput("eigenvalue and form live in different rings".into()));
    }
    let (s, t) = stabilize_parts(f0);
    s.sub(&t.scale(alpha.residue()))
}

/// A form on the ball of radius `radius` around the origin with `T f = a f`
/// at every interior vertex. Values are drawn from `seed` outward, and the
/// last child of each vertex absorbs the constraint
/// `Σ children = a f(v) - f(parent)`.
pub fn local_eigen_extend(
    tree: &BruhatTitsTree,
    ring: Zpk,
    a_p: u64,
    radius: u32,
    h: usize,
    seed: u64,
) -> Result<VertexForm> {
    local_eigen_extend_congruent(tree, ring, a_p, radius, h, 0, 0, seed)
}

/// [`local_eigen_extend`] with every drawn value in `base + p^nu Z`, so the
/// result is congruent to `base` modulo `p^nu`. Needs
/// `(p + 1 - a_p) base ≡ 0 mod p^nu`.
#[allow(clippy::too_many_arguments)]
pub fn local_eigen_extend_congruent(
    tree: &BruhatTitsTree,
    ring: Zpk,
    a_p: u64,
    radius: u32,
    h: usize,
    base: u64,
    nu: u32,
    seed: u64,
) -> Result<VertexForm> {
    if nu > ring.k() {
        return Err(Error::InvalidInput(format!("nu = {nu} exceeds the precision {}", ring.k())));
    }
    let defect = ring.mul(ring.sub(ring.reduce(ring.p() + 1), ring.reduce(a_p)), ring.reduce(base));
    if ring.valuation(defect) < nu {
        return Err(Error::InvalidInput(format!("a_p = {a_p} admits no eigenform congruent to {base} mod p^{nu}")));
    }
    let ball = Arc::new(tree.ball(&Vertex::ORIGIN, radius)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = ring.p().pow(nu);
    let span = ring.modulus() / step;
    let draw = |rng: &mut ChaCha8Rng| ring.add(ring.reduce(base), ring.reduce(step * rng.gen_range(0..span)));
    let n = ball.vertices().len();
    let mut values = Vec::with_capacity(h);
    for _ in 0..h {
        let mut f = vec![0u64; n];
        f[0] = draw(&mut rng);
        let interior = if radius == 0 { 0 } else { ball.vertex_count(radius - 1) };
        for i in 0..interior {
            let parent = ball.parents()[i];
            let children: Vec<usize> =
                ball.neighbors_of(i).expect("interior").iter().copied().filter(|&j| Some(j) != parent).collect();
            let target = ring.sub(ring.mul(a_p, f[i]), parent.map_or(0, |q| f[q]));
            let (last, rest) = children.split_last().expect("at least one child");
            let mut sum = 0;
            for &c in rest {
                f[c] = draw(&mut rng);
                sum = ring.add(sum, f[c]);
            }
            f[*last] = ring.sub(target, sum);
        }
        values.push(f);
    }
    VertexForm::from_values(ring, *tree, ball, radius, values)
}

/// Largest `ν <= k` with the form congruent to one constant modulo `p^ν`,
/// over all components at once.
pub fn nu_invariant<F: Form + ?Sized>(f: &F) -> Result<u32> {
    let r = f.ring();
    let comps = f.components();
    let x0 = *comps.iter().flat_map(|c| c.first()).next().ok_or(Error::EmptyDomain)?;
    Ok(comps.iter().flatten().map(|&x| r.valuation(r.sub(x, x0))).min().unwrap_or(r.k()))
}

#[derive(Serialize, Deserialize)]
struct Entry {
    w: TreePoint,
    values: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FormWire {
    p: u64,
    k: u32,
    tree_k: u32,
    center: Vertex,
    h: usize,
    radius: u32,
    entries: Vec<Entry>,
}

fn to_wire(ring: Zpk, tree: &BruhatTitsTree, ball: &Ball, radius: u32, values: &[Vec<u64>], points: Vec<TreePoint>) -> FormWire {
    FormWire {
        p: ring.p(),
        k: ring.k(),
        tree_k: tree.k(),
        center: ball.center(),
        h: values.len(),
        radius,
        entries: points
            .into_iter()
            .enumerate()
            .map(|(i, w)| Entry { w, values: values.iter().map(|c| c[i].to_string()).collect() })
            .collect(),
    }
}

type WireParts = (Zpk, BruhatTitsTree, Arc<Ball>, Vec<Vec<u64>>);

fn from_wire<E: serde::de::Error>(w: FormWire, edges: bool) -> std::result::Result<WireParts, E> {
    let ring = Zpk::new(w.p, w.k).map_err(E::custom)?;
    let tree = BruhatTitsTree::new(w.p, w.tree_k).map_err(E::custom)?;
    let ball = Arc::new(tree.ball(&w.center, w.radius).map_err(E::custom)?);
    let mut values = vec![vec![0u64; w.entries.len()]; w.h];
    for e in &w.entries {
        let i = match (&e.w, edges) {
            (TreePoint::Vertex(v), false) => ball.index_of(v),
            (TreePoint::Edge(x), true) => ball.edge_index_of(x),
            _ => None,
        }
        .filter(|&i| i < w.entries.len())
        .ok_or_else(|| E::custom(format!("point {} outside the form's domain", e.w)))?;
        if e.values.len() != w.h {
            return Err(E::custom("wrong number of component values"));
        }
        for (c, s) in e.values.iter().enumerate() {
            values[c][i] = s.parse().map_err(E::custom)?;
        }
    }
    Ok((ring, tree, ball, values))
}

impl Serialize for VertexForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.ball.vertex_count(self.radius);
        let pts = self.ball.vertices()[..n].iter().map(|&v| TreePoint::Vertex(v)).collect();
        to_wire(self.ring, &self.tree, &self.ball, self.radius, &self.values, pts).serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = FormWire::deserialize(d)?;
        let radius = w.radius;
        let (ring, tree, ball, values) = from_wire::<D::Error>(w, false)?;
        VertexForm::from_values(ring, tree, ball, radius, values).map_err(D::Error::custom)
    }
}

impl Serialize for EdgeForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.ball.edge_count(self.radius);
        let pts = self.ball.edges()[..n].iter().map(|&e| TreePoint::Edge(e)).collect();
        to_wire(self.ring, &self.tree, &self.ball, self.radius, &self.values, pts).serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = FormWire::deserialize(d)?;
        let radius = w.radius;
        let (ring, tree, ball, values) = from_wire::<D::Error>(w, true)?;
        EdgeForm::from_values(ring, tree, ball, radius, values).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn setup(p: u64, k: u32, radius: u32) -> (Zpk, BruhatTitsTree, Arc<Ball>) {
        let tree = BruhatTitsTree::for_radius(p, radius).unwrap();
        let ball = Arc::new(tree.ball(&Vertex::ORIGIN, radius).unwrap());
        (Zpk::new(p, k).unwrap(), tree, ball)
    }

    #[test]
    fn hecke_t_examples() {
        let (r, tree, ball) = setup(3, 6, 3);
        let one = VertexForm::constant(r, tree, ball.clone(), 3, 1, 1).unwrap();
        let t = one.hecke_t().unwrap();
        assert!(t.components()[0].iter().all(|&x| x == 4));
        let delta = VertexForm::from_fn(r, tree, ball.clone(), 3, 1, |_, v| u64::from(*v == Vertex::ORIGIN)).unwrap();
        let td = delta.hecke_t().unwrap();
        for (i, &x) in td.components()[0].iter().enumerate() {
            assert_eq!(x, u64::from(ball.depth(i) == 1));
        }
        let empty = one.restrict(0).unwrap();
        assert_eq!(empty.hecke_t(), Err(Error::EmptyDomain));
    }

    #[test]
    fn hecke_u_examples() {
        let (r, tree, ball) = setup(3, 6, 3);
        let one = EdgeForm::constant(r, tree, ball.clone(), 3, 1, 1).unwrap();
        assert!(one.hecke_u().unwrap().components()[0].iter().all(|&x| x == 3));
        // Support on one edge e0: U f is supported on the p edges e with
        // t(e) = s(e0) other than the reversal of e0.
        let e0 = ball.edges()[ball.edge_count(1) + 2];
        let f = EdgeForm::from_fn(r, tree, ball.clone(), 3, 1, |_, e| u64::from(*e == e0)).unwrap();
        let uf = f.hecke_u().unwrap();
        let support: Vec<DirectedEdge> = ball.edges()[..ball.edge_count(2)]
            .iter()
            .zip(&uf.components()[0])
            .filter(|(_, &x)| x != 0)
            .map(|(e, _)| *e)
            .collect();
        assert_eq!(support.len(), 3);
        for e in support {
            assert_eq!(e.target, e0.source);
            assert_ne!(e.source, e0.target);
        }
    }

    #[test]
    fn eigen_extension_and_stabilization_chain() {
        let p = 3;
        let (r, tree, _) = setup(p, 8, 4);
        for a in [0u64, 1, 2] {
            for seed in 0..4 {
                let f0 = local_eigen_extend(&tree, r, a, 4, 2, seed).unwrap();
                assert!(f0.is_local_eigenform(a).unwrap());
                let (s, t) = stabilize_parts(&f0);
                let us = s.hecke_u().unwrap();
                let ut = t.hecke_u().unwrap();
                assert_eq!(us, t.restrict(3).unwrap().scale(p));
                assert_eq!(ut, t.restrict(3).unwrap().scale(a).sub(&s.restrict(3).unwrap()).unwrap());
                if a != 0 {
                    let eigen = EigenData::ordinary(r.elt(a)).unwrap();
                    let phi = stabilize(&f0, &eigen).unwrap();
                    let alpha = eigen.alpha_p.unwrap().residue();
                    assert_eq!(phi.hecke_u().unwrap(), phi.restrict(3).unwrap().scale(alpha));
                } else {
                    assert_eq!(stabilize(&f0, &EigenData::supersingular(r)), Err(Error::MissingEigenvalue));
                }
            }
        }
        let a = local_eigen_extend(&tree, r, 1, 3, 1, 1).unwrap();
        let b = local_eigen_extend(&tree, r, 1, 3, 1, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn nu_examples() {
        let (r, tree, ball) = setup(3, 6, 2);
        let c = VertexForm::constant(r, tree, ball.clone(), 2, 2, 7).unwrap();
        assert_eq!(nu_invariant(&c).unwrap(), 6);
        let f = VertexForm::from_fn(r, tree, ball.clone(), 2, 1, |_, v| if v.b == 1 { 9 } else { 0 }).unwrap();
        assert_eq!(nu_invariant(&f).unwrap(), 2);
        let vals = [1u64, 4, 5];
        let g = VertexForm::from_fn(r, tree, ball.clone(), 2, 1, |_, v| vals[(v.a + v.b) as usize % 3]).unwrap();
        assert_eq!(nu_invariant(&g).unwrap(), 0);
    }

    #[test]
    fn congruent_extension_has_prescribed_nu() {
        let (r, tree, _) = setup(3, 8, 3);
        for nu in 0..=3u32 {
            let a = r.add(4, r.mul(r.p_pow(nu), 5));
            let f = local_eigen_extend_congruent(&tree, r, a, 3, 1, 7, nu, 11).unwrap();
            assert!(f.is_local_eigenform(a).unwrap());
            assert_eq!(nu_invariant(&f).unwrap(), nu);
            let g = local_eigen_extend_congruent(&tree, r, 0, 3, 1, 0, nu, 11).unwrap();
            assert!(g.is_local_eigenform(0).unwrap());
            assert_eq!(nu_invariant(&g).unwrap(), nu);
        }
        assert!(local_eigen_extend_congruent(&tree, r, 1, 3, 1, 7, 2, 0).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let (r, tree, _) = setup(3, 6, 2);
        let f0 = local_eigen_extend(&tree, r, 1, 2, 2, 9).unwrap();
        let s = serde_json::to_string(&f0).unwrap();
        assert_eq!(serde_json::from_str::<VertexForm>(&s).unwrap(), f0);
        let phi = stabilize(&f0, &EigenData::ordinary(r.elt(1)).unwrap()).unwrap();
        let s = serde_json::to_string(&phi).unwrap();
        assert_eq!(serde_json::from_str::<EdgeForm>(&s).unwrap(), phi);
    }

    proptest! {
        #[test]
        fn hecke_linear_and_nu_laws(seed in any::<u64>(), c in 0u64..729, shift in 0u64..729) {
            let (r, tree, _) = setup(3, 6, 3);
            let f = local_eigen_extend(&tree, r, 2, 3, 1, seed).unwrap();
            let g = local_eigen_extend(&tree, r, 2, 3, 1, seed ^ 1).unwrap();
            let g = VertexForm::from_values(r, tree, f.ball().clone(), 3, g.components().to_vec()).unwrap();
            prop_assert_eq!(f.add(&g).unwrap().hecke_t().unwrap(), f.hecke_t().unwrap().add(&g.hecke_t().unwrap()).unwrap());
            prop_assert_eq!(f.scale(c).hecke_t().unwrap(), f.hecke_t().unwrap().scale(c));
            let (s, _) = stabilize_parts(&f);
            let (s2, _) = stabilize_parts(&g);
            let s2 = EdgeForm::from_values(r, tree, s.ball().clone(), 3, s2.components().to_vec()).unwrap();
            prop_assert_eq!(s.add(&s2).unwrap().hecke_u().unwrap(), s.hecke_u().unwrap().add(&s2.hecke_u().unwrap()).unwrap());
            let nu = nu_invariant(&f).unwrap();
            prop_assert_eq!(nu_invariant(&f.add_constant(shift)).unwrap(), nu);
            prop_assert_eq!(nu_invariant(&f.scale(3)).unwrap(), (nu + 1).min(6));
        }
    }
}
