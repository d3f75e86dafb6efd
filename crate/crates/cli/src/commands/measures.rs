use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use theta_forge::heckeforms::{EdgeForm, EigenData, VertexForm};
use theta_forge::iwasawa::Sign;
use theta_forge::measures::{
    check_distribution, pm_extract, synth_system, theta_level, theta_ordinary, CompatibleSystem, LKind, Mode,
    PadicLFunction, SynthSpec,
};

use super::{eigen_for, FormArtifact, KindArg, Outcome};
use crate::artifact;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Vertex,
    Edge,
}

#[derive(Args)]
pub struct SynthArgs {
    /// Read the system off a form artifact along the torus orbits.
    #[arg(long)]
    form: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Vertex)]
    mode: ModeArg,
    /// `T_p` eigenvalue of a synthetic tower.
    #[arg(long)]
    a_p: Option<u64>,
    /// `U_p` eigenvalue of a synthetic edge tower.
    #[arg(long)]
    alpha: Option<u64>,
}

#[derive(Args)]
pub struct SystemArg {
    #[arg(long)]
    system: PathBuf,
}

#[derive(Args)]
pub struct ThetaArgs {
    #[arg(long)]
    system: PathBuf,
    /// Level, or free layer with `--signed`; the top one by default.
    #[arg(long)]
    n: Option<usize>,
    /// The signed class ϑ^± of an a_p = 0 tower.
    #[arg(long)]
    signed: bool,
}

#[derive(Args)]
pub struct LpArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Level for the ordinary kind, free layer for the signed kinds; the
    /// deepest admissible one by default.
    #[arg(long)]
    pub n: Option<usize>,
}

pub fn load_system(path: &Path) -> CliResult<CompatibleSystem> {
    Ok(artifact::read(path, &["system"])?.1)
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Vertex => "vertex",
        Mode::Edge => "edge",
    }
}

fn synthetic_eigen(config: &RunConfig, args: &SynthArgs) -> CliResult<EigenData> {
    let ring = config.ring()?;
    match (args.mode, args.a_p, args.alpha) {
        (_, Some(_), Some(_)) => Err(CliError::input("give either --a-p or --alpha")),
        (ModeArg::Vertex, _, Some(_)) => Err(CliError::input("vertex towers take --a-p")),
        (ModeArg::Vertex, a, None) => eigen_for(ring, a.unwrap_or(0)),
        (ModeArg::Edge, None, Some(al)) => Ok(EigenData::edge_only(ring.elt(ring.reduce(al)))),
        (ModeArg::Edge, Some(a), None) => eigen_for(ring, a),
        (ModeArg::Edge, None, None) => Err(CliError::input("edge towers need --alpha or --a-p")),
    }
}

pub fn synth(config: &RunConfig, args: SynthArgs, out: &mut Outcome) -> CliResult<()> {
    let sys = match &args.form {
        Some(path) => {
            if args.a_p.is_some() || args.alpha.is_some() {
                return Err(CliError::input("a form carries its own eigenvalues"));
            }
            let (kind, v) = artifact::read::<serde_json::Value>(path, &["vertex_form", "edge_form"])?;
            if kind == "vertex_form" {
                let art: FormArtifact<VertexForm> = serde_json::from_value(v)?;
                let torus = config.torus_on(*art.form.tree())?;
                CompatibleSystem::from_tree(&art.form, &torus, art.eigen, config.depth)?
            } else {
                let art: FormArtifact<EdgeForm> = serde_json::from_value(v)?;
                let torus = config.torus_on(*art.form.tree())?;
                CompatibleSystem::from_tree(&art.form, &torus, art.eigen, config.depth)?
            }
        }
        None => {
            let mode = match args.mode {
                ModeArg::Vertex => Mode::Vertex,
                ModeArg::Edge => Mode::Edge,
            };
            let spec = SynthSpec {
                p: config.p,
                k: config.k,
                mode,
                eigen: synthetic_eigen(config, &args)?,
                n_max: config.depth,
                layout: config.layout()?,
                seed: config.seed,
            };
            synth_system(&spec)?
        }
    };
    let sizes: Vec<String> =
        (sys.first_level()..=sys.n_max()).map(|j| sys.level(j).map_or(0, <[u64]>::len).to_string()).collect();
    out.line(format!("{} tower, levels {}..={}, sizes {}", mode_name(sys.mode()), sys.first_level(), sys.n_max(), sizes.join("/")));
    let report = check_distribution(&sys);
    out.line(format!("distribution relations: {}", if report.passed() { "hold" } else { "FAIL" }));
    out.emit(config, "system", &sys)?;
    Ok(())
}

pub fn check_dist(config: &RunConfig, args: SystemArg, out: &mut Outcome) -> CliResult<()> {
    let sys = load_system(&args.system)?;
    let report = check_distribution(&sys);
    out.line(format!("checked {} layer(s) of a {} tower", report.layers_checked.len(), mode_name(report.mode)));
    if let Some(v) = report.violation {
        out.line(format!(
            "relation at layer {} fails over label {}: expected {}, found {}",
            v.layer, v.label, v.expected, v.found
        ));
        let err = CliError::from(report.clone().into_result().expect_err("a violation was found"));
        out.failure = Some(err.with("expected", v.expected.to_string()).with("found", v.found.to_string()));
    } else {
        out.line("all distribution relations hold");
    }
    out.emit(config, "distribution_report", &report)?;
    Ok(())
}

fn unit_alpha(sys: &CompatibleSystem) -> bool {
    sys.mode() == Mode::Edge && sys.eigen().alpha_p.is_some_and(|a| a.is_unit())
}

pub fn theta(config: &RunConfig, args: ThetaArgs, out: &mut Outcome) -> CliResult<()> {
    let sys = load_system(&args.system)?;
    if args.signed {
        let n = args.n.unwrap_or(sys.layout().free_exponent(sys.n_max()) as usize) as u32;
        let signed = pm_extract(&sys, n)?;
        out.line(format!("ϑ_{n}^{} modulo Ω_{n}^{}: μ = {}", signed.sign, signed.sign, signed.class.mu()));
        out.emit(config, "signed_theta", &signed)?;
    } else {
        let n = args.n.unwrap_or(sys.n_max());
        let theta = if unit_alpha(&sys) { theta_ordinary(&sys, n)? } else { theta_level(&sys, n)? };
        let lambda = theta.value.lambda()?.map_or("∞".to_string(), |l| l.to_string());
        out.line(format!(
            "θ at level {n} (free layer {}): μ = {}, λ = {lambda}, normalized by α^-{}",
            theta.value.layer(),
            theta.value.mu(),
            theta.normalization
        ));
        out.emit(config, "theta", &theta)?;
    }
    Ok(())
}

fn kind(k: KindArg) -> LKind {
    match k {
        KindArg::Ordinary => LKind::Ordinary,
        KindArg::Plus => LKind::Plus,
        KindArg::Minus => LKind::Minus,
    }
}

/// The requested index, or the deepest one the system supports for `kind`.
pub fn default_index(sys: &CompatibleSystem, k: LKind, n: Option<usize>) -> CliResult<usize> {
    if let Some(n) = n {
        return Ok(n);
    }
    let sign = match k {
        LKind::Ordinary => return Ok(sys.n_max()),
        LKind::Plus => Sign::Plus,
        LKind::Minus => Sign::Minus,
    };
    let top = sys.layout().free_exponent(sys.n_max());
    (0..=top)
        .rev()
        .find(|&m| Sign::for_layer(m) == sign)
        .map(|m| m as usize)
        .ok_or_else(|| CliError::input(format!("no free layer of sign {sign} up to {top}")))
}

pub fn compute_lp(sys: &CompatibleSystem, args: &LpArgs) -> CliResult<(usize, PadicLFunction)> {
    let k = kind(args.kind);
    let n = default_index(sys, k, args.n)?;
    Ok((n, theta_forge::measures::lp(sys, n, k)?))
}

pub fn lp(config: &RunConfig, args: LpArgs, out: &mut Outcome) -> CliResult<()> {
    let sys = load_system(&args.system)?;
    let (_, l) = compute_lp(&sys, &args)?;
    out.line(format!("L_p {:?} at free layer {}: μ = {}", l.kind, l.layer, l.mu_invariant()));
    out.emit(config, "lp", &l)?;
    Ok(())
}

#[derive(Serialize)]
struct MuReport {
    kind: LKind,
    layer: u32,
    mu_theta: u32,
    mu_lp: u32,
    doubled: bool,
}

pub fn mu(config: &RunConfig, args: LpArgs, out: &mut Outcome) -> CliResult<()> {
    let sys = load_system(&args.system)?;
    let (n, l) = compute_lp(&sys, &args)?;
    let mu_theta = match l.kind {
        LKind::Ordinary => l.factor.mu(),
        _ => pm_extract(&sys, n as u32)?.class.mu(),
    };
    let mu_lp = l.mu_invariant();
    let report = MuReport { kind: l.kind, layer: l.layer, mu_theta, mu_lp, doubled: mu_lp == 2 * mu_theta };
    out.line(format!("μ(θ) = {mu_theta}, μ(L_p) = {mu_lp} at free layer {}", l.layer));
    out.emit(config, "mu_report", &report)?;
    Ok(())
}
