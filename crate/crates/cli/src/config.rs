use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use theta_forge::padic::Zpk;
use theta_forge::torus::{LabelLayout, LevelMap, QuadraticTorus};
use theta_forge::tree::BruhatTitsTree;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TorusChoice {
    Inert,
    Split,
}

/// Settings shared by every subcommand. Recorded in each artifact except
/// for the output directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u64,
    pub k: u32,
    pub delta: usize,
    pub depth: usize,
    pub torus: TorusChoice,
    /// Non-residue defining an inert torus; the least one when absent.
    pub d: Option<i64>,
    /// Torsion order of synthetic label layouts; `p + 1` when absent.
    pub torsion: Option<u64>,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            k: 8,
            delta: 1,
            depth: 3,
            torus: TorusChoice::Inert,
            d: None,
            torsion: None,
            seed: 0,
            out: PathBuf::from("artifacts"),
        }
    }
}

/// Command-line overrides; the same keys as the config file.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Key-value config file (`p = 3`, one per line).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true)]
    pub k: Option<u32>,
    #[arg(long, global = true)]
    pub delta: Option<usize>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub torus: Option<TorusChoice>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub d: Option<i64>,
    #[arg(long, global = true)]
    pub torsion: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Overrides {
    fn apply(&self, c: &mut RunConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f.clone() { c.$f = v; })*};
        }
        set!(p, k, delta, depth, torus, seed, out);
        if self.d.is_some() {
            c.d = self.d;
        }
        if self.torsion.is_some() {
            c.torsion = self.torsion;
        }
    }
}

impl RunConfig {
    /// Defaults, then the config file, then flags.
    pub fn resolve(flags: &Overrides) -> CliResult<Self> {
        let mut c = RunConfig::default();
        if let Some(path) = &flags.config {
            Self::parse_file(path)?.apply(&mut c);
        }
        flags.apply(&mut c);
        c.validate()?;
        Ok(c)
    }

    fn parse_file(path: &Path) -> CliResult<Overrides> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| CliError::new("Config", format!("{}: {}", path.display(), e.message())))
    }

    pub fn validate(&self) -> CliResult<()> {
        Zpk::new(self.p, self.k)?;
        if self.delta == 0 {
            return Err(CliError::new("Config", "delta must be positive"));
        }
        if (self.k as usize) < self.depth + 2 {
            return Err(CliError::new("Config", format!("k = {} must be at least depth + 2 = {}", self.k, self.depth + 2)));
        }
        if self.torus == TorusChoice::Inert && self.p == 2 {
            return Err(CliError::new("Config", "inert tori need an odd prime"));
        }
        if self.torus == TorusChoice::Split && self.d.is_some() {
            return Err(CliError::new("Config", "d only applies to inert tori"));
        }
        Ok(())
    }

    pub fn ring(&self) -> CliResult<Zpk> {
        Ok(Zpk::new(self.p, self.k)?)
    }

    /// A tree with enough digits for everything within `radius` of the origin.
    pub fn tree(&self, radius: u32) -> CliResult<BruhatTitsTree> {
        Ok(BruhatTitsTree::for_radius(self.p, radius)?)
    }

    pub fn torus(&self, radius: u32) -> CliResult<QuadraticTorus> {
        self.torus_on(self.tree(radius)?)
    }

    pub fn torus_on(&self, tree: BruhatTitsTree) -> CliResult<QuadraticTorus> {
        if tree.p() != self.p {
            return Err(CliError::input(format!("the input lives over p = {}, the config says p = {}", tree.p(), self.p)));
        }
        Ok(match (self.torus, self.d) {
            (TorusChoice::Split, _) => QuadraticTorus::split(tree),
            (TorusChoice::Inert, Some(d)) => QuadraticTorus::inert(tree, d)?,
            (TorusChoice::Inert, None) => QuadraticTorus::inert_default(tree)?,
        })
    }

    /// The inert local layout for one variable, aligned levels otherwise.
    pub fn layout(&self) -> CliResult<LabelLayout> {
        let torsion = self.torsion.unwrap_or(self.p + 1);
        let map = if self.delta == 1 { LevelMap::Shifted } else { LevelMap::Aligned };
        Ok(LabelLayout::new(self.p, self.delta, torsion, map)?)
    }
}
