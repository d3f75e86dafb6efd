//! The Bruhat-Tits tree of `PGL_2(Q_p)` as homothety classes of lattices.

mod ball;
mod vertex;

pub use ball::Ball;
pub use vertex::{DirectedEdge, TreePoint, Vertex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::padic::{smith_exponents_2x2, Mat2, Zpk};

/// Lattice arithmetic is done in `Z/p^k`; `k` must exceed the exponents
/// `a + b` of every vertex touched, and twice that for distances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BruhatTitsTree {
    ring: Zpk,
}

impl BruhatTitsTree {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Ok(BruhatTitsTree { ring: Zpk::new(p, k)? })
    }

    /// Context with enough digits for distances between vertices within
    /// `radius` of the origin, capped by the word size.
    pub fn for_radius(p: u64, radius: u32) -> Result<Self> {
        let mut k = 2 * radius + 4;
        while Zpk::new(p, k).is_err() && k > radius + 2 {
            k -= 1;
        }
        Self::new(p, k)
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn k(&self) -> u32 {
        self.ring.k()
    }

    pub fn ring(&self) -> Zpk {
        self.ring
    }

    /// Canonical vertex for the column span of `m`.
    pub fn normal_form(&self, m: &Mat2) -> Result<Vertex> {
        let r = self.ring;
        if m.ring() != r {
            return Err(Error::InvalidInput("matrix lives in a different ring than the tree".into()));
        }
        let mut c = m.entries();
        // Bring the bottom-row entry of least valuation into the second column.
        if r.valuation(c[1][0]) < r.valuation(c[1][1]) {
            for row in c.iter_mut() {
                row.swap(0, 1);
            }
        }
        let (beta, w) = r.split(c[1][1]);
        if beta >= r.k() {
            return Err(Error::PrecisionExhausted("bottom row vanishes".into()));
        }
        let w_inv = r.inv(w).expect("unit part");
        c[0][1] = r.mul(c[0][1], w_inv);
        c[1][1] = r.p_pow(beta);
        let f = c[1][0] / r.p_pow(beta);
        c[0][0] = r.sub(c[0][0], r.mul(f, c[0][1]));
        let (alpha, _) = r.split(c[0][0]);
        if alpha + beta >= r.k() {
            return Err(Error::PrecisionExhausted(format!(
                "determinant valuation {} reaches precision {}",
                alpha + beta,
                r.k()
            )));
        }
        let pa = r.p_pow(alpha);
        let y = c[0][1] % pa;
        let s = alpha.min(beta).min(if y == 0 { u32::MAX } else { r.valuation(y) });
        let ps = r.p_pow(s);
        Ok(Vertex { a: alpha - s, b: beta - s, u: y / ps })
    }

    pub fn basis(&self, v: &Vertex) -> Result<Mat2> {
        v.basis(self.ring)
    }

    /// The `p + 1` classes of index-`p` sublattices.
    pub fn neighbors(&self, v: &Vertex) -> Result<Vec<Vertex>> {
        let g = self.basis(v)?;
        let p = self.p() as i128;
        let mut out = Vec::with_capacity(self.p() as usize + 1);
        for c in 0..p {
            out.push(self.normal_form(&g.mul(&Mat2::new(self.ring, [[p, c], [0, 1]])))?);
        }
        out.push(self.normal_form(&g.mul(&Mat2::new(self.ring, [[1, 0], [0, p]])))?);
        Ok(out)
    }

    pub fn is_adjacent(&self, v: &Vertex, w: &Vertex) -> Result<bool> {
        Ok(self.distance(v, w)? == 1)
    }

    /// `b - a` for the elementary divisors `p^a, p^b` of `adj(g_v) g_w`.
    pub fn distance(&self, v: &Vertex, w: &Vertex) -> Result<u32> {
        if v == w {
            return Ok(0);
        }
        let rel = self.basis(v)?.adjugate().mul(&self.basis(w)?);
        let (a, b) = smith_exponents_2x2(&rel)?;
        Ok(b - a)
    }

    /// All vertices at distance exactly `r`, by non-backtracking expansion.
    pub fn sphere(&self, v: &Vertex, r: u32) -> Result<Vec<Vertex>> {
        if r == 0 {
            return Ok(vec![*v]);
        }
        let mut frontier: Vec<(Vertex, Vertex)> = self.neighbors(v)?.into_iter().map(|w| (w, *v)).collect();
        for _ in 1..r {
            let next: Result<Vec<Vec<(Vertex, Vertex)>>> = frontier
                .par_iter()
                .map(|(x, parent)| {
                    Ok(self.neighbors(x)?.into_iter().filter(|y| y != parent).map(|y| (y, *x)).collect())
                })
                .collect();
            frontier = next?.into_iter().flatten().collect();
        }
        Ok(frontier.into_iter().map(|(x, _)| x).collect())
    }

    /// The unique path `v = x_0, …, x_d = w`.
    pub fn geodesic_path(&self, v: &Vertex, w: &Vertex) -> Result<Vec<Vertex>> {
        let mut d = self.distance(v, w)?;
        let mut path = vec![*v];
        let mut x = *v;
        while d > 0 {
            let mut step = None;
            for y in self.neighbors(&x)? {
                if self.distance(&y, w)? + 1 == d {
                    step = Some(y);
                    break;
                }
            }
            x = step.ok_or_else(|| Error::PrecisionExhausted("no neighbor closer to the target".into()))?;
            path.push(x);
            d -= 1;
        }
        Ok(path)
    }

    pub fn ball(&self, center: &Vertex, radius: u32) -> Result<Ball> {
        Ball::build(self, center, radius)
    }

    /// Graphviz rendering of the ball of radius `r` around `v`.
    pub fn dot(&self, v: &Vertex, r: u32) -> Result<String> {
        let ball = self.ball(v, r)?;
        let mut s = format!("graph bruhat_tits_p{} {{\n", self.p());
        for (i, x) in ball.vertices().iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"{x}\"];\n"));
        }
        for (i, parent) in ball.parents().iter().enumerate() {
            if let Some(j) = parent {
                s.push_str(&format!("  v{j} -- v{i};\n"));
            }
        }
        s.push_str("}\n");
        Ok(s)
    }
}
