mod geometry;
mod measures;
mod specialize;

use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use theta_forge::heckeforms::EigenData;
use theta_forge::padic::Zpk;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub use geometry::{FormsCmd, TorusCmd, TreeCmd};
pub use measures::{LpArgs, SynthArgs, SystemArg, ThetaArgs};
pub use specialize::{HowardArgs, SpecializeArgs};

#[derive(Subcommand)]
pub enum Command {
    /// Vertices, distances and spheres of the Bruhat-Tits tree.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Orbit tables and the base sequence of the torus.
    #[command(subcommand)]
    Torus(TorusCmd),
    /// Local eigenforms, p-stabilization and the congruence invariant ν.
    #[command(subcommand)]
    Forms(FormsCmd),
    /// Build a compatible system, from a form or from the seed.
    Synth(SynthArgs),
    /// Check the distribution relations of a system.
    CheckDist(SystemArg),
    /// Theta element of a system at one level.
    Theta(ThetaArgs),
    /// The p-adic L-function θθ* of a system.
    Lp(LpArgs),
    /// μ-invariants of the theta element and of the L-function.
    Mu(LpArgs),
    /// Evaluate the L-function at a finite-order character.
    Specialize(SpecializeArgs),
    /// Scan a family for a member with nontrivial image modulo a prime.
    HowardScan(HowardArgs),
}

/// What a subcommand produced. A failure is reported after the artifacts
/// are written.
#[derive(Debug, Default)]
pub struct Outcome {
    pub summary: Vec<String>,
    pub artifacts: Vec<PathBuf>,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.summary.push(s.into());
        self
    }

    fn emit<T: Serialize>(&mut self, config: &RunConfig, kind: &str, data: &T) -> CliResult<&mut Self> {
        self.artifacts.push(crate::artifact::write(kind, config, data)?);
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ordinary,
    Plus,
    Minus,
}

/// A form together with the eigenvalues it was built for.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormArtifact<F> {
    pub eigen: EigenData,
    pub form: F,
}

/// `a_p` with its unit root when one exists.
pub fn eigen_for(ring: Zpk, a_p: u64) -> CliResult<EigenData> {
    let a = ring.elt(ring.reduce(a_p));
    Ok(if a.is_zero() {
        EigenData::supersingular(ring)
    } else if a.is_unit() {
        EigenData::ordinary(a)?
    } else {
        EigenData::new(Some(a), None)?
    })
}

pub fn dispatch(config: &RunConfig, command: Command) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    match command {
        Command::Tree(c) => geometry::tree(config, c, &mut out)?,
        Command::Torus(c) => geometry::torus(config, c, &mut out)?,
        Command::Forms(c) => geometry::forms(config, c, &mut out)?,
        Command::Synth(a) => measures::synth(config, a, &mut out)?,
        Command::CheckDist(a) => measures::check_dist(config, a, &mut out)?,
        Command::Theta(a) => measures::theta(config, a, &mut out)?,
        Command::Lp(a) => measures::lp(config, a, &mut out)?,
        Command::Mu(a) => measures::mu(config, a, &mut out)?,
        Command::Specialize(a) => specialize::specialize(config, a, &mut out)?,
        Command::HowardScan(a) => specialize::howard_scan(config, a, &mut out)?,
    }
    Ok(out)
}
