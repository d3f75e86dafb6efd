//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero if any criterion fails or overruns its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use theta_forge::charspec::{
    howard_check, interpolation_shape, period_sum, specialize, star_identity_check, FiniteOrderCharacter,
    HowardFamily, HowardPrime,
};
use theta_forge::heckeforms::{
    local_eigen_extend, local_eigen_extend_congruent, nu_invariant, stabilize, stabilize_parts, EigenData,
};
use theta_forge::iwasawa::{
    omega_polynomial, GroupRingElement, OmegaClass, OmegaElement, OmegaKind, Sign,
};
use theta_forge::measures::{
    check_distribution, lp, pm_extract, sign_factor, synth_system, theta_level, theta_ordinary, CompatibleSystem,
    LKind, Mode, SynthSpec,
};
use theta_forge::padic::{cyclotomic_sigma, omega_direct, IntPolynomial, Zpk};
use theta_forge::torus::{filtration_order, LabelLayout, OrbitTable, QuadraticTorus};
use theta_forge::tree::{BruhatTitsTree, Vertex};

type Outcome = Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn inert(p: u64, radius: u32) -> Result<(BruhatTitsTree, QuadraticTorus), String> {
    let tree = BruhatTitsTree::for_radius(p, radius).map_err(err)?;
    Ok((tree, QuadraticTorus::inert_default(tree).map_err(err)?))
}

fn synth(r: Zpk, mode: Mode, eigen: EigenData, n_max: usize, seed: u64) -> Result<CompatibleSystem, String> {
    let layout = LabelLayout::inert(r.p());
    synth_system(&SynthSpec { p: r.p(), k: r.k(), mode, eigen, n_max, layout, seed }).map_err(err)
}

fn sphere_law() -> Outcome {
    for p in [2u64, 3, 5] {
        let tree = BruhatTitsTree::for_radius(p, 6).map_err(err)?;
        for j in 1..=6u32 {
            let got = tree.sphere(&Vertex::ORIGIN, j).map_err(err)?.len() as u64;
            let law = (p + 1) * p.pow(j - 1);
            ensure(got == law && law == filtration_order(p, j as usize), || {
                format!("p={p} j={j}: sphere {got}, law {law}")
            })?;
        }
    }
    Ok(())
}

fn simple_transitivity() -> Outcome {
    for p in [3u64, 5] {
        let (_, torus) = inert(p, 4)?;
        for j in 0..=4usize {
            for edges in [false, true] {
                if edges && j == 0 {
                    continue;
                }
                let table = OrbitTable::build(&torus, j, edges).map_err(err)?;
                ensure(table.len() as u64 == filtration_order(p, j), || format!("p={p} j={j}: size {}", table.len()))?;
            }
        }
    }
    Ok(())
}

fn stabilization_chain() -> Outcome {
    let p = 3u64;
    let r = Zpk::new(p, 8).map_err(err)?;
    let tree = BruhatTitsTree::for_radius(p, 4).map_err(err)?;
    let mut count = 0;
    for a in [0u64, 1, 2] {
        for seed in 0..7 {
            let f0 = local_eigen_extend(&tree, r, a, 4, 1, 100 * a + seed).map_err(err)?;
            let (s, t) = stabilize_parts(&f0);
            let (s3, t3) = (s.restrict(3).map_err(err)?, t.restrict(3).map_err(err)?);
            ensure(s.hecke_u().map_err(err)? == t3.scale(p), || format!("U φ_s ≠ p φ_t (a={a}, seed={seed})"))?;
            let rhs = t3.scale(a).sub(&s3).map_err(err)?;
            ensure(t.hecke_u().map_err(err)? == rhs, || format!("U φ_t ≠ a φ_t - φ_s (a={a}, seed={seed})"))?;
            if a != 0 {
                let eigen = EigenData::ordinary(r.elt(a)).map_err(err)?;
                let phi = stabilize(&f0, &eigen).map_err(err)?;
                let alpha = eigen.require_alpha_p().map_err(err)?.residue();
                ensure(phi.hecke_u().map_err(err)? == phi.restrict(3).map_err(err)?.scale(alpha), || {
                    format!("U φ ≠ α φ (a={a}, seed={seed})")
                })?;
            }
            count += 1;
        }
    }
    ensure(count >= 20, || format!("only {count} forms"))
}

fn distribution_relations() -> Outcome {
    for p in [3u64, 5] {
        let (tree, torus) = inert(p, 3)?;
        let r = Zpk::new(p, 6).map_err(err)?;
        for a in [0u64, 1, 2] {
            for seed in 0..2 {
                let f0 = local_eigen_extend(&tree, r, a, 3, 1, seed).map_err(err)?;
                let eigen = EigenData::new(Some(r.elt(a)), None).map_err(err)?;
                let vs = CompatibleSystem::from_tree(&f0, &torus, eigen, 3).map_err(err)?;
                ensure(check_distribution(&vs).passed(), || format!("genuine vertex p={p} a={a}"))?;
                if a != 0 {
                    let eigen = EigenData::ordinary(r.elt(a)).map_err(err)?;
                    let phi = stabilize(&f0, &eigen).map_err(err)?;
                    let es = CompatibleSystem::from_tree(&phi, &torus, eigen, 3).map_err(err)?;
                    ensure(check_distribution(&es).passed(), || format!("genuine edge p={p} a={a}"))?;
                }
            }
        }
    }
    let r = Zpk::new(3, 8).map_err(err)?;
    let eigens = [
        (Mode::Vertex, EigenData::supersingular(r)),
        (Mode::Vertex, EigenData::new(Some(r.elt(2)), None).map_err(err)?),
        (Mode::Edge, EigenData::ordinary(r.elt(1)).map_err(err)?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..50u64 {
        for &(mode, eigen) in &eigens {
            let sys = synth(r, mode, eigen, 5, seed)?;
            ensure(check_distribution(&sys).passed(), || format!("synthetic {mode:?} seed={seed}"))?;
            let j = rng.gen_range(sys.first_level()..=5);
            let label = rng.gen_range(0..sys.layout().size(j));
            let mut bad = sys.clone();
            let c = bad.level(j).unwrap()[label];
            bad.set(j, label, r.add(c, 1 + rng.gen_range(0..r.modulus() - 1))).map_err(err)?;
            ensure(!check_distribution(&bad).passed(), || format!("missed corruption at level {j}, label {label}"))?;
        }
    }
    // Every coefficient of one tower, one at a time.
    for &(mode, eigen) in &eigens {
        let sys = synth(r, mode, eigen, 5, 999)?;
        for j in sys.first_level()..=5 {
            for label in 0..sys.layout().size(j) {
                let mut bad = sys.clone();
                let c = bad.level(j).unwrap()[label];
                bad.set(j, label, r.add(c, 1)).map_err(err)?;
                ensure(!check_distribution(&bad).passed(), || format!("missed corruption at level {j}, label {label}"))?;
            }
        }
    }
    Ok(())
}

fn cyclotomic_factorization() -> Outcome {
    for p in [2u64, 3, 5] {
        for n in 0..=4u32 {
            let direct = &IntPolynomial::t_plus_one_pow(p.pow(n) as usize) - &IntPolynomial::one();
            let mut product = IntPolynomial::t();
            for j in 1..=n {
                product = &product * &cyclotomic_sigma(p, j).map_err(err)?;
            }
            ensure(direct == product && direct == omega_direct(p, n), || format!("p={p} n={n}"))?;
        }
    }
    let r = Zpk::new(3, 6).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let n = 1 + (i % 3) as u32;
        let coeffs = (0..3usize.pow(n)).map(|_| rng.gen_range(0..r.modulus())).collect();
        let x = GroupRingElement::from_coeffs(r, n, 1, coeffs).map_err(err)?;
        let sigma = cyclotomic_sigma(3, n + 1).map_err(err)?;
        let lifted = x.lift().to_polynomial_view();
        let poly = IntPolynomial::new(lifted.iter().map(|&c| c.into()).collect());
        let via_poly = GroupRingElement::from_polynomial(r, n + 1, &(&sigma * &poly));
        ensure(via_poly == x.xi(), || format!("ξ mismatch on sample {i}"))?;
    }
    Ok(())
}

fn supersingular_suite() -> Outcome {
    let r = Zpk::new(3, 6).map_err(err)?;
    let mut systems = Vec::new();
    for seed in 0..6 {
        systems.push(synth(r, Mode::Vertex, EigenData::supersingular(r), 6, seed)?);
    }
    let (tree, torus) = inert(3, 3)?;
    for seed in 0..2 {
        let f0 = local_eigen_extend(&tree, r, 0, 3, 1, seed).map_err(err)?;
        systems.push(CompatibleSystem::from_tree(&f0, &torus, EigenData::supersingular(r), 3).map_err(err)?);
    }
    for (i, sys) in systems.iter().enumerate() {
        let top = sys.layout().free_exponent(sys.n_max());
        for n in 0..=top.min(5) {
            let sign = Sign::for_layer(n);
            let theta = theta_level(sys, sys.layout().level_for_free_layer(n)).map_err(err)?.value;
            let ann = OmegaElement::new(3, n, OmegaKind::Signed(sign), 1).map_err(err)?.to_group_ring(r, n).map_err(err)?;
            ensure(ann.mul(&theta).map_err(err)?.is_zero(), || format!("system {i}: Ω_{n}^{sign} ϑ ≠ 0"))?;
            let signed = pm_extract(sys, n).map_err(err)?;
            let unsigned = signed.class.scale(r.from_i64(sign_factor(n))).to_group_ring(n);
            let tilde = OmegaElement::new(3, n, OmegaKind::Tilde(sign.opposite()), 1).map_err(err)?;
            let back = tilde.to_group_ring(r, n).map_err(err)?.mul(&unsigned).map_err(err)?;
            ensure(back == theta, || format!("system {i}: roundtrip fails at n={n}"))?;
            if n >= 2 {
                let below = pm_extract(sys, n - 2).map_err(err)?;
                ensure(signed.class.reduce_to(n - 2).map_err(err)? == below.class, || {
                    format!("system {i}: ϑ_{n}^{sign} does not reduce to ϑ_{}^{sign}", n - 2)
                })?;
            }
        }
    }
    Ok(())
}

/// Checked at depth: free layers 3 and 4. Shallower layers
/// carry trivial zeros and zero divisors that can raise μ(L_p) above 2ν.
fn mu_doubles_nu() -> Outcome {
    let p = 3u64;
    let r = Zpk::new(p, 8).map_err(err)?;
    let (tree, torus) = inert(p, 5)?;
    for nu in 0..=2u32 {
        for seed in 0..3u64 {
            // Ordinary: a_p ≡ p + 1 mod p^ν and f0 ≡ 1 mod p^ν.
            let a = r.add(p + 1, r.mul(p.pow(nu) % r.modulus(), 3 * seed + 1));
            let f0 = local_eigen_extend_congruent(&tree, r, a, 5, 1, 1, nu, seed).map_err(err)?;
            let got_nu = nu_invariant(&f0).map_err(err)?;
            ensure(got_nu == nu, || format!("engineered ν = {got_nu}, wanted {nu}"))?;
            let eigen = EigenData::ordinary(r.elt(a)).map_err(err)?;
            let phi = stabilize(&f0, &eigen).map_err(err)?;
            let sys = CompatibleSystem::from_tree(&phi, &torus, eigen, 5).map_err(err)?;
            for n in 4..=5 {
                let l = lp(&sys, n, LKind::Ordinary).map_err(err)?;
                let (mu_theta, mu) = (l.factor.mu(), l.mu_invariant());
                ensure(mu_theta == nu && mu == 2 * nu, || {
                    format!("ordinary ν={nu} seed={seed} level {n}: μ(θ) = {mu_theta}, μ(L_p) = {mu}")
                })?;
            }
            // Supersingular: a_p = 0 forces f0 ≡ 0 mod p^ν.
            let f0 = local_eigen_extend_congruent(&tree, r, 0, 5, 1, 0, nu, seed).map_err(err)?;
            ensure(nu_invariant(&f0).map_err(err)? == nu, || format!("engineered supersingular ν ≠ {nu}"))?;
            let sys = CompatibleSystem::from_tree(&f0, &torus, EigenData::supersingular(r), 5).map_err(err)?;
            for (n, kind) in [(3usize, LKind::Minus), (4, LKind::Plus)] {
                let l = lp(&sys, n, kind).map_err(err)?;
                let mu_theta = pm_extract(&sys, n as u32).map_err(err)?.class.mu();
                let mu = l.mu_invariant();
                ensure(mu_theta == nu && mu == 2 * nu, || {
                    format!("{kind:?} ν={nu} seed={seed} layer {n}: μ(ϑ) = {mu_theta}, μ(L_p) = {mu}")
                })?;
            }
        }
    }
    Ok(())
}

fn specialization_identities() -> Outcome {
    let r = Zpk::new(3, 6).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let n = 1 + (i % 3) as u32;
        let coeffs = (0..3usize.pow(n)).map(|_| rng.gen_range(0..r.modulus())).collect();
        let lam = GroupRingElement::from_coeffs(r, n, 1, coeffs).map_err(err)?;
        let m = rng.gen_range(0..=n);
        let rho = FiniteOrderCharacter::new(3, m, vec![rng.gen_range(0..27)]).map_err(err)?;
        ensure(star_identity_check(&lam, &rho).map_err(err)?.holds, || format!("ρ(λ*) ≠ ρ^{{-1}}(λ) on sample {i}"))?;
    }
    let mut towers = Vec::new();
    for seed in 0..4 {
        let eigen = EigenData::edge_only(r.elt(r.add(1, 3 * seed)));
        towers.push(synth(r, Mode::Edge, eigen, 4, seed)?);
    }
    let (tree, torus) = inert(3, 4)?;
    let f0 = local_eigen_extend(&tree, r, 2, 4, 1, 1).map_err(err)?;
    let eigen = EigenData::ordinary(r.elt(2)).map_err(err)?;
    towers.push(CompatibleSystem::from_tree(&stabilize(&f0, &eigen).map_err(err)?, &torus, eigen, 4).map_err(err)?);
    for (t, sys) in towers.iter().enumerate() {
        for level in 3..=4usize {
            for m in 0..=2u32 {
                for e in [1u64, 2, 5] {
                    let rho = FiniteOrderCharacter::new(3, m, vec![e]).map_err(err)?;
                    let rep = interpolation_shape(sys, &rho, level).map_err(err)?;
                    ensure(rep.holds, || format!("tower {t}: ρ(L_p) ≠ product of period sums (m={m}, e={e})"))?;
                    let via = specialize(&theta_ordinary(sys, level).map_err(err)?.value, &rho).map_err(err)?;
                    ensure(via == period_sum(sys, &rho, level).map_err(err)?, || format!("tower {t}: two paths differ"))?;
                }
            }
        }
    }
    Ok(())
}

fn base_sequence_independence() -> Outcome {
    let r = Zpk::new(3, 6).map_err(err)?;
    let (tree, torus) = inert(3, 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f0 = local_eigen_extend(&tree, r, 1, 4, 1, 2).map_err(err)?;
    let eigen = EigenData::ordinary(r.elt(1)).map_err(err)?;
    let phi = stabilize(&f0, &eigen).map_err(err)?;
    let base = CompatibleSystem::from_tree(&phi, &torus, eigen, 4).map_err(err)?;
    let ss = local_eigen_extend(&tree, r, 0, 4, 1, 3).map_err(err)?;
    let ss_base = CompatibleSystem::from_tree(&ss, &torus, EigenData::supersingular(r), 4).map_err(err)?;
    for _ in 0..3 {
        // A rotation divisible by p is invisible in the free quotient at level 2.
        let s = 3 * rng.gen_range(0..36) + rng.gen_range(1..3);
        let moved = CompatibleSystem::from_tree_rotated(&phi, &torus, eigen, 4, s).map_err(err)?;
        for n in 2..=4 {
            let (a, b) = (theta_ordinary(&base, n).map_err(err)?, theta_ordinary(&moved, n).map_err(err)?);
            ensure(a != b, || format!("θ_{n} did not move under rotation {s}"))?;
            let (la, lb) = (lp(&base, n, LKind::Ordinary).map_err(err)?, lp(&moved, n, LKind::Ordinary).map_err(err)?);
            ensure(la.value == lb.value, || format!("L_p changed at level {n} under rotation {s}"))?;
        }
        let ss_moved = CompatibleSystem::from_tree_rotated(&ss, &torus, EigenData::supersingular(r), 4, s).map_err(err)?;
        for (n, kind) in [(2usize, LKind::Plus), (3, LKind::Minus)] {
            let (la, lb) = (lp(&ss_base, n, kind).map_err(err)?, lp(&ss_moved, n, kind).map_err(err)?);
            ensure(la.class == lb.class, || format!("{kind:?} L_p changed at layer {n} under rotation {s}"))?;
        }
    }
    Ok(())
}

fn howard_scanner() -> Outcome {
    let r = Zpk::new(3, 6).map_err(err)?;
    let build = || -> Result<HowardFamily, String> {
        let mut members = Vec::new();
        for seed in 0..6u64 {
            let sys = synth(r, Mode::Vertex, EigenData::supersingular(r), 3, seed)?;
            let theta = theta_level(&sys, 3).map_err(err)?.value;
            // Shift the augmentation to 3, or to 1 for the chosen member.
            let target = if seed == 4 { 1 } else { 3 };
            let one = GroupRingElement::one(r, theta.layer(), 1);
            let shift = r.sub(target, theta.aug().residue());
            members.push((format!("n{seed}"), theta.add(&one.scale(shift)).map_err(err)?));
        }
        HowardFamily::new(members, 6).map_err(err)
    };
    let fam = build()?;
    let rep = howard_check(&fam, &HowardPrime::Augmentation, 1).map_err(err)?;
    ensure(rep.passed && rep.witness.as_deref() == Some("n4"), || format!("witness {:?}", rep.witness))?;
    ensure(rep.members.iter().filter(|m| m.nontrivial).count() == 1, || "more than one nontrivial member".into())?;
    ensure(howard_check(&build()?, &HowardPrime::Augmentation, 1).map_err(err)? == rep, || "report not deterministic".into())?;
    let zero = GroupRingElement::zero(r, 2, 1);
    let zeros = HowardFamily::new(vec![("a".into(), zero.clone()), ("b".into(), zero)], 6).map_err(err)?;
    ensure(!howard_check(&zeros, &HowardPrime::Augmentation, 1).map_err(err)?.passed, || "all-zero family passed".into())?;
    // The class of the all-zero element is zero in every Ω-quotient as well.
    ensure(OmegaClass::from_mod_polynomial(r, 2, Sign::Plus, &[]).map_err(err)?.is_zero(), || "zero class".into())?;
    ensure(omega_polynomial(3, 1, OmegaKind::Omega).map_err(err)? == omega_direct(3, 1), || "Ω_1".into())
}

type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("sphere sizes match the filtration index", sphere_law, Some(5)),
        ("inert torus orbits are simply transitive", simple_transitivity, Some(10)),
        ("edge stabilization satisfies the U_p chain", stabilization_chain, Some(10)),
        ("distribution relations hold and catch corruption", distribution_relations, Some(30)),
        ("cyclotomic factorization and ξ polynomial form", cyclotomic_factorization, Some(5)),
        ("supersingular annihilation, division and tower compatibility", supersingular_suite, Some(60)),
        ("μ(L_p) = 2ν for engineered congruences", mu_doubles_nu, None),
        ("specialization identities", specialization_identities, Some(30)),
        ("L_p is independent of the base sequence", base_sequence_independence, None),
        ("Howard scanner finds the unit member", howard_scanner, None),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let overrun = budget.is_some_and(|s| elapsed > Duration::from_secs(s));
        let verdict = match (&outcome, overrun) {
            (Ok(()), false) => "PASS".to_string(),
            (Ok(()), true) => format!("FAIL (over the {}s budget)", budget.unwrap()),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if verdict != "PASS" {
            failures += 1;
        }
        println!("criterion {:>2}: {verdict} - {name} [{:.2}s]", i + 1, elapsed.as_secs_f64());
    }
    if failures == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 10 criteria fail");
        ExitCode::FAILURE
    }
}
