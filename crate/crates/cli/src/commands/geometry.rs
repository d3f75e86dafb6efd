use std::path::PathBuf;
use std::str::FromStr;

use clap::Subcommand;
use serde::Serialize;
use theta_forge::heckeforms::{local_eigen_extend_congruent, nu_invariant, stabilize, EdgeForm, VertexForm};
use theta_forge::torus::OrbitTable;
use theta_forge::tree::{DirectedEdge, Vertex};

use super::{eigen_for, FormArtifact, Outcome};
use crate::artifact;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// A vertex written `a,b,u`.
#[derive(Clone, Copy, Debug)]
pub struct VertexArg(Vertex);

impl FromStr for VertexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, u] = parts[..] else {
            return Err(format!("expected a,b,u, got {s:?}"));
        };
        let num = |x: &str| x.parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
        let exp = |x: &str| x.parse::<u32>().map_err(|e| format!("{x:?}: {e}"));
        Ok(VertexArg(Vertex::new(exp(a)?, exp(b)?, num(u)?)))
    }
}

fn reach(v: &Vertex) -> u32 {
    v.a + v.b
}

fn vertex(config: &RunConfig, v: Option<VertexArg>) -> CliResult<Vertex> {
    let v = v.map_or(Vertex::ORIGIN, |x| x.0);
    v.validate(config.p)?;
    Ok(v)
}

#[derive(Subcommand)]
pub enum TreeCmd {
    /// The p + 1 neighbors of a vertex.
    Neighbors {
        #[arg(long)]
        v: Option<VertexArg>,
    },
    /// Distance and geodesic between two vertices.
    Distance {
        #[arg(long)]
        v: VertexArg,
        #[arg(long)]
        w: VertexArg,
    },
    /// Vertices at distance exactly `r`.
    Sphere {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        v: Option<VertexArg>,
    },
    /// Graphviz text for the ball of radius `r`.
    Dot {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        v: Option<VertexArg>,
    },
}

#[derive(Serialize)]
struct NeighborsData {
    vertex: Vertex,
    neighbors: Vec<Vertex>,
}

#[derive(Serialize)]
struct DistanceData {
    v: Vertex,
    w: Vertex,
    distance: u32,
    path: Vec<Vertex>,
}

#[derive(Serialize)]
struct SphereData {
    center: Vertex,
    radius: u32,
    count: usize,
    vertices: Vec<Vertex>,
}

#[derive(Serialize)]
struct DotData {
    center: Vertex,
    radius: u32,
    dot: String,
}

pub fn tree(config: &RunConfig, cmd: TreeCmd, out: &mut Outcome) -> CliResult<()> {
    match cmd {
        TreeCmd::Neighbors { v } => {
            let v = vertex(config, v)?;
            let neighbors = config.tree(reach(&v) + 1)?.neighbors(&v)?;
            out.line(format!("{} neighbors of {v}", neighbors.len()));
            for w in &neighbors {
                out.line(format!("  {w}"));
            }
            out.emit(config, "tree_neighbors", &NeighborsData { vertex: v, neighbors })?;
        }
        TreeCmd::Distance { v, w } => {
            let (v, w) = (vertex(config, Some(v))?, vertex(config, Some(w))?);
            let tree = config.tree(reach(&v) + reach(&w))?;
            let distance = tree.distance(&v, &w)?;
            let path = tree.geodesic_path(&v, &w)?;
            let hops: Vec<String> = path.iter().map(|x| x.to_string()).collect();
            out.line(format!("distance {v} to {w}: {distance}")).line(format!("path: {}", hops.join(" - ")));
            out.emit(config, "tree_distance", &DistanceData { v, w, distance, path })?;
        }
        TreeCmd::Sphere { r, v } => {
            let v = vertex(config, v)?;
            let vertices = config.tree(reach(&v) + r)?.sphere(&v, r)?;
            out.line(format!("{} vertices at distance {r} from {v}", vertices.len()));
            out.emit(config, "tree_sphere", &SphereData { center: v, radius: r, count: vertices.len(), vertices })?;
        }
        TreeCmd::Dot { r, v } => {
            let v = vertex(config, v)?;
            let dot = config.tree(reach(&v) + r)?.dot(&v, r)?;
            out.line(dot.trim_end());
            out.emit(config, "tree_dot", &DotData { center: v, radius: r, dot })?;
        }
    }
    Ok(())
}

#[derive(Subcommand)]
pub enum TorusCmd {
    /// Orbit of the level-`level` base point under the torus.
    Orbit {
        #[arg(long)]
        level: usize,
        /// Act on the base edge instead of the base vertex.
        #[arg(long)]
        edges: bool,
        /// Move the base point by this power of the generator.
        #[arg(long, default_value_t = 0)]
        rotation: u64,
    },
    /// The base vertices and edges up to depth `n`.
    BaseSeq {
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Serialize)]
struct BaseSeqData {
    vertices: Vec<Vertex>,
    edges: Vec<DirectedEdge>,
}

pub fn torus(config: &RunConfig, cmd: TorusCmd, out: &mut Outcome) -> CliResult<()> {
    match cmd {
        TorusCmd::Orbit { level, edges, rotation } => {
            let torus = config.torus(level as u32 + 1)?;
            let table = OrbitTable::build_rotated(&torus, level, edges, rotation)?;
            let what = if edges { "edges" } else { "vertices" };
            out.line(format!(
                "level {level}: {} {what}, filtration order {}",
                table.len(),
                torus.filtration_order(level)
            ));
            out.emit(config, "orbit_table", &table)?;
        }
        TorusCmd::BaseSeq { n } => {
            let n = n.unwrap_or(config.depth);
            let (vertices, edges) = config.torus(n as u32 + 1)?.base_sequence(n)?;
            for (j, v) in vertices.iter().enumerate() {
                out.line(format!("v_{j} = {v}"));
            }
            out.emit(config, "base_sequence", &BaseSeqData { vertices, edges })?;
        }
    }
    Ok(())
}

#[derive(Subcommand)]
pub enum FormsCmd {
    /// A seeded form with `T f = a_p f` on a ball around the origin.
    EigenExtend {
        #[arg(long)]
        a_p: u64,
        /// Defaults to the configured depth.
        #[arg(long)]
        radius: Option<u32>,
        /// Number of components.
        #[arg(long, default_value_t = 1)]
        h: usize,
        /// Make the form congruent to `base` modulo `p^nu`.
        #[arg(long, default_value_t = 0)]
        base: u64,
        #[arg(long, default_value_t = 0)]
        nu: u32,
    },
    /// The ordinary p-stabilization `φ_s - α φ_t` of a vertex form.
    Stabilize {
        #[arg(long)]
        form: PathBuf,
    },
    /// Largest ν with the form constant modulo `p^ν`.
    Nu {
        #[arg(long)]
        form: PathBuf,
    },
}

#[derive(Serialize)]
struct NuData {
    nu: u32,
}

pub fn forms(config: &RunConfig, cmd: FormsCmd, out: &mut Outcome) -> CliResult<()> {
    match cmd {
        FormsCmd::EigenExtend { a_p, radius, h, base, nu } => {
            let ring = config.ring()?;
            let radius = radius.unwrap_or(config.depth as u32);
            let tree = config.tree(radius)?;
            let form = local_eigen_extend_congruent(&tree, ring, a_p, radius, h, base, nu, config.seed)?;
            let eigen = eigen_for(ring, a_p)?;
            out.line(format!("vertex form: radius {radius}, {h} component(s), a_p = {}", ring.reduce(a_p)));
            out.line(format!("ν = {}", nu_invariant(&form)?));
            out.emit(config, "vertex_form", &FormArtifact { eigen, form })?;
        }
        FormsCmd::Stabilize { form } => {
            let (_, art): (_, FormArtifact<VertexForm>) = artifact::read(&form, &["vertex_form"])?;
            let alpha = art.eigen.require_alpha_p().map_err(|_| {
                CliError::from(theta_forge::Error::NotOrdinary("the form's a_p has no unit root".into()))
            })?;
            let edge = stabilize(&art.form, &art.eigen)?;
            out.line(format!("edge form with U_p eigenvalue α_p = {alpha}"));
            out.emit(config, "edge_form", &FormArtifact { eigen: art.eigen, form: edge })?;
        }
        FormsCmd::Nu { form } => {
            let nu = match artifact::read::<serde_json::Value>(&form, &["vertex_form", "edge_form"])? {
                (kind, v) if kind == "vertex_form" => {
                    nu_invariant(&serde_json::from_value::<FormArtifact<VertexForm>>(v)?.form)?
                }
                (_, v) => nu_invariant(&serde_json::from_value::<FormArtifact<EdgeForm>>(v)?.form)?,
            };
            out.line(format!("ν = {nu}"));
            out.emit(config, "nu", &NuData { nu })?;
        }
    }
    Ok(())
}
