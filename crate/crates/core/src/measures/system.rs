use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heckeforms::{EdgeForm, EigenData, Form, VertexForm};
use crate::padic::Zpk;
use crate::torus::{LabelLayout, LevelMap, OrbitTable, QuadraticTorus};

/// Whether the tower comes from vertex values (relation with `a_p`) or from
/// edge values (relation with `α_p`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Vertex,
    Edge,
}

/// Coefficient tables `c_j : H_j → Z/p^k` for `first_level <= j <= n_max`,
/// indexed by the labels of a [`LabelLayout`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleSystem {
    ring: Zpk,
    mode: Mode,
    eigen: EigenData,
    layout: LabelLayout,
    first_level: usize,
    levels: Vec<Vec<u64>>,
}

/// First level carried by a tower. Edge towers over the shifted layout
/// start at 1: no edge is fixed by all of `U_0`.
pub fn first_level(mode: Mode, layout: &LabelLayout) -> usize {
    match (mode, layout.level_map) {
        (Mode::Edge, LevelMap::Shifted) => 1,
        _ => 0,
    }
}

impl CompatibleSystem {
    pub fn new(ring: Zpk, mode: Mode, eigen: EigenData, layout: LabelLayout, levels: Vec<Vec<u64>>) -> Result<Self> {
        if layout.p != ring.p() {
            return Err(Error::InvalidInput("layout and coefficient ring disagree on p".into()));
        }
        match mode {
            Mode::Vertex => {
                eigen.require_a_p()?;
            }
            Mode::Edge => {
                eigen.require_alpha_p()?;
            }
        }
        if eigen.ring().is_some_and(|r| r != ring) {
            return Err(Error::InvalidInput("eigenvalues and coefficients live in different rings".into()));
        }
        if levels.is_empty() {
            return Err(Error::InvalidInput("a system needs at least one level".into()));
        }
        let first = first_level(mode, &layout);
        for (i, table) in levels.iter().enumerate() {
            if table.len() != layout.size(first + i) {
                return Err(Error::InvalidInput(format!(
                    "level {} has {} coefficients, expected {}",
                    first + i,
                    table.len(),
                    layout.size(first + i)
                )));
            }
        }
        let levels = levels.into_iter().map(|t| t.into_iter().map(|c| ring.reduce(c)).collect()).collect();
        Ok(CompatibleSystem { ring, mode, eigen, layout, first_level: first, levels })
    }

    pub fn ring(&self) -> Zpk {
        self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn eigen(&self) -> &EigenData {
        &self.eigen
    }

    pub fn layout(&self) -> &LabelLayout {
        &self.layout
    }

    pub fn first_level(&self) -> usize {
        self.first_level
    }

    pub fn n_max(&self) -> usize {
        self.first_level + self.levels.len() - 1
    }

    /// The table `c_j`, if `j` is carried.
    pub fn level(&self, j: usize) -> Option<&[u64]> {
        j.checked_sub(self.first_level).and_then(|i| self.levels.get(i)).map(|v| v.as_slice())
    }

    pub(crate) fn require_level(&self, j: usize) -> Result<&[u64]> {
        self.level(j).ok_or_else(|| {
            Error::InvalidInput(format!("level {j} is outside the carried range {}..={}", self.first_level, self.n_max()))
        })
    }

    /// Overwrites one coefficient.
    pub fn set(&mut self, j: usize, label: usize, c: u64) -> Result<()> {
        let i = j.checked_sub(self.first_level).filter(|&i| i < self.levels.len()).ok_or_else(|| {
            Error::InvalidInput(format!("level {j} is not carried"))
        })?;
        let slot = self.levels[i]
            .get_mut(label)
            .ok_or_else(|| Error::InvalidInput(format!("label {label} out of range at level {j}")))?;
        *slot = self.ring.reduce(c);
        Ok(())
    }

    /// Every coefficient multiplied by `c`.
    pub fn scale(&self, c: u64) -> Self {
        let r = self.ring;
        let levels = self.levels.iter().map(|t| t.iter().map(|&x| r.mul(x, c)).collect()).collect();
        CompatibleSystem { levels, ..self.clone() }
    }

    /// Whether the distribution relation links levels `j` and `j + 1`.
    pub fn relation_applies(&self, j: usize) -> bool {
        let lower = match self.mode {
            Mode::Vertex => 1,
            Mode::Edge => self.first_level,
        };
        j >= lower && j < self.n_max()
    }

    /// Right-hand side of the relation at `j`, as a table over `H_j`:
    /// `a_p c_j - ξ c_{j-1}` or `α_p c_j`.
    fn relation_target(&self, j: usize) -> Vec<u64> {
        let r = self.ring;
        let cj = self.level(j).expect("carried level");
        match self.mode {
            Mode::Vertex => {
                let a = self.eigen.a_p.expect("vertex systems carry a_p").residue();
                let prev = self.level(j - 1).expect("carried level");
                (0..cj.len()).map(|y| r.sub(r.mul(a, cj[y]), prev[self.layout.project(j - 1, y)])).collect()
            }
            Mode::Edge => {
                let alpha = self.eigen.alpha_p.expect("edge systems carry alpha_p").residue();
                cj.iter().map(|&c| r.mul(alpha, c)).collect()
            }
        }
    }
}

/// A form read along the orbit tables of an inert torus.
#[derive(Clone, Copy, Debug)]
pub enum FormSource<'a> {
    Vertex(&'a VertexForm),
    Edge(&'a EdgeForm),
}

impl<'a> From<&'a VertexForm> for FormSource<'a> {
    fn from(f: &'a VertexForm) -> Self {
        FormSource::Vertex(f)
    }
}

impl<'a> From<&'a EdgeForm> for FormSource<'a> {
    fn from(f: &'a EdgeForm) -> Self {
        FormSource::Edge(f)
    }
}

impl CompatibleSystem {
    /// `c_j(h) = form(h · w_j)` for `j <= n_max`, reading the first component.
    pub fn from_tree<'a>(
        form: impl Into<FormSource<'a>>,
        torus: &QuadraticTorus,
        eigen: EigenData,
        n_max: usize,
    ) -> Result<Self> {
        Self::from_tree_rotated(form, torus, eigen, n_max, 0)
    }

    /// [`Self::from_tree`] along the base sequence moved by `g^rotation`.
    pub fn from_tree_rotated<'a>(
        form: impl Into<FormSource<'a>>,
        torus: &QuadraticTorus,
        eigen: EigenData,
        n_max: usize,
        rotation: u64,
    ) -> Result<Self> {
        let form = form.into();
        let (ring, mode) = match form {
            FormSource::Vertex(f) => (f.ring(), Mode::Vertex),
            FormSource::Edge(f) => (f.ring(), Mode::Edge),
        };
        if torus.p() != ring.p() {
            return Err(Error::InvalidInput("torus and form disagree on p".into()));
        }
        let layout = LabelLayout::inert(ring.p());
        let first = first_level(mode, &layout);
        if n_max < first {
            return Err(Error::InvalidInput(format!("edge towers need n_max >= {first}")));
        }
        let levels: Result<Vec<Vec<u64>>> = (first..=n_max)
            .into_par_iter()
            .map(|j| {
                let table = OrbitTable::build_rotated(torus, j, mode == Mode::Edge, rotation)?;
                table
                    .rows()
                    .iter()
                    .map(|row| {
                        let value = match (form, row.w.as_vertex(), row.w.as_edge()) {
                            (FormSource::Vertex(f), Some(v), _) => f.value(0, &v),
                            (FormSource::Edge(f), _, Some(e)) => f.value(0, &e),
                            _ => None,
                        };
                        value.map(|x| x.residue()).ok_or_else(|| {
                            Error::InvalidInput(format!("orbit point {} at level {j} lies outside the form's domain", row.w))
                        })
                    })
                    .collect()
            })
            .collect();
        Self::new(ring, mode, eigen, layout, levels?)
    }
}

/// Parameters of a seeded synthetic tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub p: u64,
    pub k: u32,
    pub mode: Mode,
    pub eigen: EigenData,
    pub n_max: usize,
    pub layout: LabelLayout,
    pub seed: u64,
}

/// A tower satisfying the distribution relations: each level is drawn from
/// the seed, then the last member of every fiber is corrected so the fiber
/// sums match the relation.
pub fn synth_system(spec: &SynthSpec) -> Result<CompatibleSystem> {
    let ring = Zpk::new(spec.p, spec.k)?;
    let first = first_level(spec.mode, &spec.layout);
    if spec.n_max < first {
        return Err(Error::InvalidInput(format!("n_max must be at least {first}")));
    }
    let draw = |j: usize| -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(j as u64);
        (0..spec.layout.size(j)).map(|_| rng.gen_range(0..ring.modulus())).collect()
    };
    let mut sys = CompatibleSystem::new(ring, spec.mode, spec.eigen, spec.layout, vec![draw(first)])?;
    for j in first..spec.n_max {
        let mut next = draw(j + 1);
        sys.levels.push(Vec::new());
        if sys.relation_applies(j) {
            let target = sys.relation_target(j);
            let fibers = spec.layout.fibers(j);
            let fixes: Vec<(usize, u64)> = fibers
                .par_iter()
                .enumerate()
                .map(|(y, fiber)| {
                    let (&last, rest) = fiber.split_last().expect("fibers are nonempty");
                    let sum = rest.iter().fold(0, |acc, &x| ring.add(acc, next[x]));
                    (last, ring.sub(target[y], sum))
                })
                .collect();
            for (x, c) in fixes {
                next[x] = c;
            }
        }
        *sys.levels.last_mut().expect("just pushed") = next;
    }
    Ok(sys)
}

/// First failure of a distribution relation: at layer `layer`, the fiber
/// over `label` sums to `found` instead of `expected`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub layer: usize,
    pub label: usize,
    pub expected: u64,
    pub found: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub mode: Mode,
    pub layers_checked: Vec<usize>,
    pub violation: Option<Violation>,
}

impl DistributionReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some(v) => Err(Error::DistributionViolation { layer: v.layer, label: v.label }),
        }
    }
}

/// Compares `project(ϑ_{j+1})` with the relation's right-hand side in the
/// layer-`j` group ring for every applicable `j`.
pub fn check_distribution(sys: &CompatibleSystem) -> DistributionReport {
    let layers: Vec<usize> = (sys.first_level..sys.n_max()).filter(|&j| sys.relation_applies(j)).collect();
    let violation = layers
        .par_iter()
        .filter_map(|&j| {
            let r = sys.ring;
            let target = sys.relation_target(j);
            let mut sums = vec![0u64; target.len()];
            for (x, &c) in sys.level(j + 1).expect("carried level").iter().enumerate() {
                let y = sys.layout.project(j, x);
                sums[y] = r.add(sums[y], c);
            }
            (0..target.len())
                .find(|&y| sums[y] != target[y])
                .map(|y| Violation { layer: j, label: y, expected: target[y], found: sums[y] })
        })
        .min_by_key(|v| (v.layer, v.label));
    DistributionReport { mode: sys.mode, layers_checked: layers, violation }
}

#[derive(Serialize, Deserialize)]
struct LevelWire {
    level: usize,
    coeffs: Vec<String>,
    fiber_map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SystemWire {
    p: u64,
    k: u32,
    mode: Mode,
    eigen: EigenData,
    layout: LabelLayout,
    n_max: usize,
    levels: Vec<LevelWire>,
}

impl Serialize for CompatibleSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let j = self.first_level + i;
                LevelWire {
                    level: j,
                    coeffs: t.iter().map(|c| c.to_string()).collect(),
                    fiber_map: if i == 0 { Vec::new() } else { (0..t.len()).map(|x| self.layout.project(j - 1, x)).collect() },
                }
            })
            .collect();
        SystemWire {
            p: self.ring.p(),
            k: self.ring.k(),
            mode: self.mode,
            eigen: self.eigen,
            layout: self.layout,
            n_max: self.n_max(),
            levels,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CompatibleSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = SystemWire::deserialize(d)?;
        let ring = Zpk::new(w.p, w.k).map_err(D::Error::custom)?;
        let layout = LabelLayout::new(w.layout.p, w.layout.delta, w.layout.torsion, w.layout.level_map)
            .map_err(D::Error::custom)?;
        let first = first_level(w.mode, &layout);
        let mut levels = Vec::with_capacity(w.levels.len());
        for (i, lw) in w.levels.into_iter().enumerate() {
            let j = first + i;
            if lw.level != j {
                return Err(D::Error::custom(format!("expected level {j}, found {}", lw.level)));
            }
            let expected: Vec<usize> =
                if i == 0 { Vec::new() } else { (0..layout.size(j)).map(|x| layout.project(j - 1, x)).collect() };
            if lw.fiber_map != expected {
                return Err(D::Error::custom(format!("fiber map of level {j} does not match the layout")));
            }
            let coeffs = lw.coeffs.iter().map(|c| c.parse::<u64>().map_err(D::Error::custom)).collect::<std::result::Result<Vec<_>, _>>()?;
            levels.push(coeffs);
        }
        let sys = CompatibleSystem::new(ring, w.mode, w.eigen, layout, levels).map_err(D::Error::custom)?;
        if sys.n_max() != w.n_max {
            return Err(D::Error::custom("n_max disagrees with the level list"));
        }
        Ok(sys)
    }
}
