use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use theta_forge::charspec::{
    howard_check, interpolation_shape, signed_specialization_check, specialize as eval, star_identity_check,
    FiniteOrderCharacter, HowardFamily, HowardPrime, InterpolationReport, SignedShapeReport,
};
use theta_forge::iwasawa::GroupRingElement;
use theta_forge::measures::{LKind, PadicLFunction, ThetaElement};
use theta_forge::padic::CyclotomicValue;

use super::measures::{compute_lp, load_system, LpArgs};
use super::{KindArg, Outcome};
use crate::artifact;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Args)]
pub struct SpecializeArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: Option<usize>,
    /// `{"m": 1, "exponents": [1]}`, inline or as a file path.
    #[arg(long)]
    character: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CharacterSpec {
    m: u32,
    exponents: Vec<u64>,
}

fn parse_character(p: u64, spec: &str) -> CliResult<FiniteOrderCharacter> {
    let text = if spec.trim_start().starts_with('{') { spec.to_string() } else { std::fs::read_to_string(spec)? };
    let c: CharacterSpec = serde_json::from_str(&text)?;
    Ok(FiniteOrderCharacter::new(p, c.m, c.exponents)?)
}

#[derive(Serialize)]
struct Specialization {
    character: FiniteOrderCharacter,
    kind: LKind,
    layer: u32,
    value: CyclotomicValue,
    /// In units of `1/φ(p^m)`.
    valuation: u32,
    star_identity: bool,
    interpolation: Option<InterpolationReport>,
    signed_shape: Option<SignedShapeReport>,
}

pub fn specialize(config: &RunConfig, args: SpecializeArgs, out: &mut Outcome) -> CliResult<()> {
    let sys = load_system(&args.system)?;
    let rho = parse_character(sys.p(), &args.character)?;
    let lp_args = LpArgs { system: args.system.clone(), kind: args.kind, n: args.n };
    let (n, l) = compute_lp(&sys, &lp_args)?;
    let value = eval(&l.value, &rho)?;
    let star_identity = star_identity_check(&l.factor, &rho)?.holds;
    let (interpolation, signed_shape) = match l.kind {
        LKind::Ordinary => (Some(interpolation_shape(&sys, &rho, n)?), None),
        _ => (None, Some(signed_specialization_check(&l, &rho)?)),
    };
    out.line(format!("ρ(L_p) = {value}, valuation {}/{}", value.valuation(), value.ramification()));
    out.line(format!("ρ(θ*) = ρ^-1(θ): {star_identity}"));
    if let Some(rep) = &interpolation {
        out.line(format!("ρ(L_p) = P(ρ) P(ρ^-1): {}", rep.holds));
    }
    if let Some(rep) = &signed_shape {
        let verdict = if rep.applicable { rep.holds.to_string() } else { "ρ does not kill the Ω-ideal".into() };
        out.line(format!("ρ(L_p) = ρ(ϑ) ρ(ϑ*): {verdict}"));
    }
    let report = Specialization {
        character: rho,
        kind: l.kind,
        layer: l.layer,
        valuation: value.valuation(),
        value,
        star_identity,
        interpolation,
        signed_shape,
    };
    out.emit(config, "specialization", &report)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrimeArg {
    Augmentation,
    Mu,
    Witness,
}

#[derive(Args)]
pub struct HowardArgs {
    /// `label=path` of a theta or lp artifact; repeat for each member.
    #[arg(long = "member", required = true)]
    members: Vec<String>,
    #[arg(long, value_enum, default_value_t = PrimeArg::Augmentation)]
    prime: PrimeArg,
    /// Coefficients of the monic witness generator, constant term first.
    #[arg(long, value_delimiter = ',')]
    generator: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    k0: u32,
    /// Precision of the family; the configured k by default.
    #[arg(long)]
    j: Option<u32>,
}

fn load_member(spec: &str) -> CliResult<(String, GroupRingElement)> {
    let (label, path) =
        spec.split_once('=').ok_or_else(|| CliError::input(format!("expected label=path, got {spec:?}")))?;
    let path = PathBuf::from(path);
    let element = match artifact::read::<serde_json::Value>(&path, &["theta", "lp"])? {
        (kind, v) if kind == "theta" => serde_json::from_value::<ThetaElement>(v)?.value,
        (_, v) => serde_json::from_value::<PadicLFunction>(v)?.value,
    };
    Ok((label.to_string(), element))
}

pub fn howard_scan(config: &RunConfig, args: HowardArgs, out: &mut Outcome) -> CliResult<()> {
    let members = args.members.iter().map(|m| load_member(m)).collect::<CliResult<Vec<_>>>()?;
    let family = HowardFamily::new(members, args.j.unwrap_or(config.k))?;
    let prime = match (args.prime, args.generator.is_empty()) {
        (PrimeArg::Witness, false) => HowardPrime::Witness { generator: args.generator },
        (PrimeArg::Witness, true) => return Err(CliError::input("the witness prime needs --generator")),
        (_, false) => return Err(CliError::input("--generator only applies to the witness prime")),
        (PrimeArg::Augmentation, true) => HowardPrime::Augmentation,
        (PrimeArg::Mu, true) => HowardPrime::Mu,
    };
    let report = howard_check(&family, &prime, args.k0)?;
    for m in &report.members {
        out.line(format!("{}: valuation {}{}", m.label, m.valuation, if m.nontrivial { ", nontrivial" } else { "" }));
    }
    out.line(match &report.witness {
        Some(w) => format!("criterion holds with k0 = {}: witness {w}", report.k0),
        None => format!("criterion fails with k0 = {}: every image vanishes", report.k0),
    });
    out.emit(config, "howard_report", &report)?;
    Ok(())
}
