//! Deterministic battery of identities over sampled structures, tensors and
//! Lie models.

use std::collections::BTreeSet;
use std::fmt;

use norden_core::potential::{potential_from_torsion, total_skew_residual};
use norden_core::{GeomError, Tensor, Tolerance};
use norden_even::{
    b_connection_even, b_torsion_from_nijenhuis, canonical_connection_even, canonical_identity_residual, classify_even,
    kt_connection_even, naturality_check_even, EvenClass, FundamentalEven, NijenhuisEven, NordenStructure,
    TorsionClassEven,
};
use norden_lie::{bracket_nijenhuis, curvature, d_eta_bracket, koszul_lc, LieAlgebraModel, ModelStructure};
use norden_odd::{
    classify_odd, naturality_check_odd, phi_b_connection, phi_b_torsion_from_nijenhuis,
    phi_b_torsion_normal_horizontal, phi_canonical_connection, phi_canonical_identity_residual,
    phi_canonical_torsion_from_nijenhuis, phi_kt_connection, ContactBStructure, FundamentalOdd, NijenhuisOdd, OddClass,
    OddRoute,
};
use norden_sampler::{
    derived_rng, random_f_even, random_f_odd, random_lie_model, random_structure, OracleSplit, Parity,
    SampledStructure, PRNG,
};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::commands::{model_invariants, pair_rel, rel, KOSZUL_TOLERANCE, ROUTE_TOLERANCE};
use crate::error::CliError;
use crate::report::{Report, Tally};

/// Tensors drawn per sampled structure.
pub const SAMPLES_PER_STRUCTURE: usize = 25;
/// Round trips through the Nijenhuis pair are held to this level.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-9;
/// Trace identities are held to this level.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Conformal invariance is held to this level.
pub const CONFORMAL_TOLERANCE: f64 = 1e-9;
/// Tensors compared against the brute-force oracle per case.
pub const ORACLE_SAMPLES: usize = 20;

/// A deliberate defect used to show that the battery detects errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Flips the sign of the `N^(z,y,x)` term of the canonical torsion.
    CanonicalSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case {
    pub parity: Parity,
    pub n: usize,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.parity, self.n)
    }
}

impl Case {
    /// All combinations, each list defaulting to both parities and n = 2, 3.
    pub fn grid(parities: &[Parity], ns: &[usize]) -> Vec<Case> {
        let parities = if parities.is_empty() { &[Parity::Even, Parity::Odd][..] } else { parities };
        let ns = if ns.is_empty() { &[2, 3][..] } else { ns };
        parities.iter().flat_map(|&parity| ns.iter().map(move |&n| Case { parity, n })).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub cases: Vec<Case>,
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerance,
    pub fault: Option<Fault>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { cases: Case::grid(&[], &[]), samples: 100, seed: 0, tol: Tolerance::default(), fault: None }
    }
}

/// Named tallies in first-use order.
struct Ledger {
    prefix: String,
    tallies: Vec<Tally>,
    names: Vec<String>,
}

impl Ledger {
    fn new(case: &Case) -> Self {
        Ledger { prefix: case.to_string(), tallies: Vec::new(), names: Vec::new() }
    }

    fn tally(&mut self, name: &str, threshold: f64) -> &mut Tally {
        let i = match self.names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.tallies.push(Tally::new(format!("{}: {name}", self.prefix), threshold));
                self.tallies.len() - 1
            }
        };
        &mut self.tallies[i]
    }

    fn record(&mut self, name: &str, threshold: f64, residual: f64) {
        self.tally(name, threshold).record(residual);
    }

    fn outcome(&mut self, name: &str, ok: bool) {
        self.tally(name, 1.0).record_outcome(ok);
    }

    fn into_report(self, report: &mut Report) {
        for t in self.tallies {
            report.check(t.finish());
        }
    }
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

/// `1/4 N + 1/8 {s N^(z,y,x) - N^(z,x,y)}` with `s = 1` unless faulted.
fn canonical_torsion_even(nij: &NijenhuisEven, fault: Option<Fault>) -> Tensor {
    let sign = if fault == Some(Fault::CanonicalSign) { -1.0 } else { 1.0 };
    0.25 * nij.n() + 0.125 * (sign * nij.n_hat().permuted(&[2, 1, 0]) - nij.n_hat().permuted(&[2, 0, 1]))
}

fn generic_even(
    f: &FundamentalEven,
    s: &NordenStructure,
    cfg: &SelftestConfig,
    l: &mut Ledger,
) -> Result<(), GeomError> {
    let tol = &cfg.tol;
    l.record("F admissible", tol.rel, norden_even::admissibility_residual(f.f(), s));
    let nij = NijenhuisEven::from_fundamental(f, s);
    let back = nij.to_fundamental(s, tol).map(|g| rel(g.f(), f.f(), tol)).unwrap_or(f64::INFINITY);
    l.record("round trip F -> (N, N^) -> F", ROUND_TRIP_TOLERANCE, back);
    let quarter = 0.25 * (s.j().transpose() * nij.nu_hat());
    let trace = (f.theta() - &quarter).norm() / f.theta().norm().max(quarter.norm()).max(tol.abs);
    l.record("trace identities", TRACE_TOLERANCE, trace.max(f.lee_residual(s)));
    l.record("Nijenhuis symmetries", tol.rel, max_of(nij.property_residuals(s).into_iter().map(|(_, r)| r)));

    let tc = canonical_torsion_even(&nij, cfg.fault);
    l.record("canonical torsion identity", tol.rel, canonical_identity_residual(&tc, s));
    let nat = naturality_check_even(&potential_from_torsion(&tc), f.f(), s, tol);
    l.record(
        "canonical torsion round trip to F",
        ROUND_TRIP_TOLERANCE,
        nat.structure_residual.max(nat.metric_residual),
    );
    let can = canonical_connection_even(f, s, tol)?;
    l.record("canonical torsion: connection vs N formula", tol.rel, rel(can.t(), &tc, tol));
    let outside =
        can.torsion().component(TorsionClassEven::T1).norm() + can.torsion().component(TorsionClassEven::T4).norm();
    l.record("canonical torsion has no T1, T4 parts", tol.rel, tol.relative(outside, can.t().norm()));

    let b = b_connection_even(f, s, tol)?;
    let nat = naturality_check_even(b.q(), f.f(), s, tol);
    l.record("B connection natural", tol.rel, nat.structure_residual.max(nat.metric_residual));
    l.record("B torsion from N, N^", tol.rel, rel(b.t(), &b_torsion_from_nijenhuis(&nij), tol));
    Ok(())
}

fn generic_odd(
    f: &FundamentalOdd,
    s: &ContactBStructure,
    cfg: &SelftestConfig,
    l: &mut Ledger,
) -> Result<(), GeomError> {
    let tol = &cfg.tol;
    l.record("F admissible", tol.rel, norden_odd::admissibility_residual(f.f(), s));
    let nij = NijenhuisOdd::from_fundamental(f, s);
    let back = nij.to_fundamental(s, tol).map(|g| rel(g.f(), f.f(), tol)).unwrap_or(f64::INFINITY);
    l.record("round trip F -> (N, N^) -> F", ROUND_TRIP_TOLERANCE, back);
    let (a, b) = f.lee_residuals(s);
    l.record("trace identities", TRACE_TOLERANCE, a.max(b));
    l.record("Nijenhuis symmetries", tol.rel, max_of(nij.property_residuals(s).into_iter().map(|(_, r)| r)));

    let b = phi_b_connection(f, s, tol)?;
    let nat = naturality_check_odd(b.q(), f.f(), s, tol);
    l.record("phiB connection natural", tol.rel, nat.structure_residual.max(nat.metric_residual));
    l.record("phiB torsion from N, N^", tol.rel, rel(b.t(), &phi_b_torsion_from_nijenhuis(&nij, s), tol));

    let tc = phi_canonical_torsion_from_nijenhuis(&nij, s);
    l.record("canonical torsion identity", tol.rel, phi_canonical_identity_residual(&tc, s));
    let nat = naturality_check_odd(&potential_from_torsion(&tc), f.f(), s, tol);
    l.record(
        "canonical torsion round trip to F",
        ROUND_TRIP_TOLERANCE,
        nat.structure_residual.max(nat.metric_residual),
    );
    let can = phi_canonical_connection(f, s, tol)?;
    l.record("canonical torsion: connection vs N formula", tol.rel, rel(can.t(), &tc, tol));
    let forms = [
        (b.torsion().t_form(), can.torsion().t_form()),
        (b.torsion().t_star_form(), can.torsion().t_star_form()),
        (b.torsion().t_hat_form(), can.torsion().t_hat_form()),
    ];
    // The forms may vanish, so they are measured against the torsion itself.
    let scale = b.t().norm().max(can.t().norm());
    let r = max_of(forms.iter().map(|(x, y)| tol.relative((*x - *y).norm(), scale)));
    l.record("natural connections with equal torsion forms", tol.rel, r);
    Ok(())
}

fn even_targets() -> Vec<BTreeSet<EvenClass>> {
    use EvenClass::*;
    [&[][..], &[W1], &[W2], &[W3], &[W1, W2], &[W1, W3], &[W2, W3], &[W1, W2, W3]]
        .iter()
        .map(|t| t.iter().copied().collect())
        .collect()
}

fn odd_targets() -> Vec<BTreeSet<OddClass>> {
    let mut t: Vec<BTreeSet<OddClass>> = vec![BTreeSet::new()];
    t.extend(OddClass::ALL.iter().map(|c| BTreeSet::from([*c])));
    t.push(OddClass::QUASI_KAEHLER.iter().copied().collect());
    t.push(OddClass::ALL.iter().filter(|c| !OddClass::QUASI_KAEHLER.contains(c)).copied().collect());
    t
}

fn targeted_even(
    target: &BTreeSet<EvenClass>,
    r: &mut ChaCha8Rng,
    s: &NordenStructure,
    cfg: &SelftestConfig,
    l: &mut Ledger,
) -> Result<(), GeomError> {
    let tol = &cfg.tol;
    let f = match random_f_even(r, target, s, tol) {
        Ok(f) => f,
        Err(e @ GeomError::ClassPrecondition(_)) => return Err(e),
        Err(_) => {
            l.outcome("targeted samples classify to their target", false);
            return Ok(());
        }
    };
    l.outcome("targeted samples classify to their target", classify_even(&f, s, tol)?.members == *target);
    let b = b_connection_even(&f, s, tol)?;
    let can = canonical_connection_even(&f, s, tol)?;
    let quasi_kahler = target.iter().all(|c| *c == EvenClass::W3);
    match kt_connection_even(&f, s, tol) {
        Ok(kt) if quasi_kahler => {
            l.record("KT torsion totally skew (W3)", ROUTE_TOLERANCE, total_skew_residual(kt.t()));
            let nat = naturality_check_even(kt.q(), f.f(), s, tol);
            l.record("KT connection natural (W3)", tol.rel, nat.structure_residual.max(nat.metric_residual));
            l.record(
                "B is the average of canonical and KT (W3)",
                ROUTE_TOLERANCE,
                rel(b.t(), &(0.5 * (can.t() + kt.t())), tol),
            );
        }
        Ok(_) => l.outcome("KT refused outside W3", false),
        Err(GeomError::ClassPrecondition(_)) => l.outcome("KT refused outside W3", !quasi_kahler),
        Err(e) => return Err(e),
    }
    if target.iter().all(|c| *c != EvenClass::W3) {
        l.record("B equals canonical when N = 0", ROUTE_TOLERANCE, rel(b.t(), can.t(), tol));
    }
    Ok(())
}

fn targeted_odd(
    target: &BTreeSet<OddClass>,
    r: &mut ChaCha8Rng,
    s: &ContactBStructure,
    cfg: &SelftestConfig,
    l: &mut Ledger,
) -> Result<(), GeomError> {
    let tol = &cfg.tol;
    let f = match random_f_odd(r, target, s, tol) {
        Ok(f) => f,
        Err(e @ GeomError::ClassPrecondition(_)) => return Err(e),
        Err(_) => {
            l.outcome("targeted samples classify to their target", false);
            return Ok(());
        }
    };
    let label = classify_odd(&f, s, tol)?;
    l.outcome("targeted samples classify to their target", label.members == *target);
    if target.len() == 1 {
        let by_torsion = label.routes.get(&OddRoute::CanonicalTorsion);
        l.outcome("canonical torsion classes match the basic class", by_torsion == Some(target));
    }
    let nij = NijenhuisOdd::from_fundamental(&f, s);
    let b = phi_b_connection(&f, s, tol)?;
    let can = phi_canonical_connection(&f, s, tol)?;
    let quasi_kahler = target.iter().all(|c| OddClass::QUASI_KAEHLER.contains(c));
    match phi_kt_connection(&f, s, tol) {
        Ok(kt) if quasi_kahler => {
            l.record("phiKT torsion totally skew (F3+F7)", ROUTE_TOLERANCE, total_skew_residual(kt.t()));
            let nat = naturality_check_odd(kt.q(), f.f(), s, tol);
            l.record("phiKT connection natural (F3+F7)", tol.rel, nat.structure_residual.max(nat.metric_residual));
            l.record(
                "phiB is the average of phi-canonical and phiKT (F3+F7)",
                ROUTE_TOLERANCE,
                rel(b.t(), &(0.5 * (can.t() + kt.t())), tol),
            );
        }
        Ok(_) => l.outcome("phiKT refused outside F3+F7", false),
        Err(GeomError::ClassPrecondition(_)) => l.outcome("phiKT refused outside F3+F7", !quasi_kahler),
        Err(e) => return Err(e),
    }
    if !target.iter().any(|c| OddClass::QUASI_KAEHLER.contains(c)) {
        l.record("phiB equals phi-canonical (U0)", ROUTE_TOLERANCE, rel(b.t(), can.t(), tol));
        l.record(
            "phiB torsion without N(hx,hy) terms (U0)",
            ROUTE_TOLERANCE,
            rel(b.t(), &phi_b_torsion_normal_horizontal(&nij, s), tol),
        );
    }
    Ok(())
}

/// Deterministic nonzero conformal parameters for model `i`.
fn conformal_parameters(i: usize, parity: Parity) -> (f64, f64, f64) {
    let x = i as f64 + 1.0;
    let w = if parity == Parity::Odd { 0.4 * (0.9 * x + 0.5).sin() } else { 0.0 };
    (0.4 * (1.7 * x).sin(), 0.3 * (2.3 * x).cos(), w)
}

fn lie_checks(i: usize, m: &LieAlgebraModel, cfg: &SelftestConfig, l: &mut Ledger) -> Result<(), GeomError> {
    let tol = &cfg.tol;
    let lc = koszul_lc(m);
    l.record("Koszul connection torsion-free", KOSZUL_TOLERANCE, lc.torsion_residual(m));
    l.record("Koszul connection metric", KOSZUL_TOLERANCE, lc.metric_residual(m));
    let (n_b, nh_b) = bracket_nijenhuis(m);
    let f = norden_lie::fundamental_from_model(m, tol)?;
    let (n_f, nh_f) = match (&f, m.structure()) {
        (norden_lie::ModelFundamental::Even(f), ModelStructure::Even(s)) => {
            let nij = NijenhuisEven::from_fundamental(f, s);
            (nij.n().clone(), nij.n_hat().clone())
        }
        (norden_lie::ModelFundamental::Odd(f), ModelStructure::Odd(s)) => {
            l.record("d eta: bracket vs F", ROUTE_TOLERANCE, rel(&d_eta_bracket(m, s.eta()), &f.d_eta(s), tol));
            let nij = NijenhuisOdd::from_fundamental(f, s);
            (nij.n().clone(), nij.n_hat().clone())
        }
        _ => unreachable!("F is computed on the model's own structure"),
    };
    l.record("Nijenhuis pair: bracket vs F", ROUTE_TOLERANCE, pair_rel((&n_b, &nh_b), (&n_f, &nh_f), tol));
    let curv = curvature(m);
    l.record("curvature symmetries and first Bianchi identity", ROUTE_TOLERANCE, {
        curv.symmetry_residual().max(curv.bianchi_residual())
    });
    let parity = match m.structure() {
        ModelStructure::Even(_) => Parity::Even,
        ModelStructure::Odd(_) => Parity::Odd,
    };
    let (u, v, w) = conformal_parameters(i, parity);
    let (t0, l0) = model_invariants(m, tol)?;
    let (t1, l1) = model_invariants(&m.conformal(u, v, w)?, tol)?;
    l.record("conformal invariance of the (1,2) canonical torsion", CONFORMAL_TOLERANCE, rel(&t1, &t0, tol));
    l.outcome("conformal change preserves the class", l0 == l1);
    Ok(())
}

fn oracle_checks(
    s: &SampledStructure,
    fs: &[Tensor],
    cfg: &SelftestConfig,
    l: &mut Ledger,
) -> Result<Value, GeomError> {
    let (parts, ambient): (Vec<_>, _) = match s {
        SampledStructure::Even(s) => (
            EvenClass::ALL.iter().map(|c| norden_even::class_constraints(s, *c)).collect(),
            norden_even::admissibility_constraints(s),
        ),
        SampledStructure::Odd(s) => (
            OddClass::ALL.iter().map(|c| norden_odd::class_constraints(s, *c)).collect(),
            norden_odd::admissibility_constraints(s),
        ),
    };
    let comps = |f: &Tensor| match s {
        SampledStructure::Even(s) => s.class_components(f).to_vec(),
        SampledStructure::Odd(s) => s.class_components(f),
    };
    let d = s.dim();
    let split = OracleSplit::new(d * d * d, &parts, &ambient)?;
    let engine_dims: Vec<usize> = match s {
        SampledStructure::Even(s) => EvenClass::ALL.iter().map(|c| s.class_space(*c).dim()).collect(),
        SampledStructure::Odd(s) => OddClass::ALL.iter().map(|c| s.class_space(*c).dim()).collect(),
    };
    l.outcome("class dimensions agree with the oracle", split.dims() == engine_dims);
    for f in fs {
        let r = max_of(split.components(f)?.iter().zip(comps(f)).map(|(a, b)| rel(a, &b, &cfg.tol)));
        l.record("class components agree with the oracle", ROUND_TRIP_TOLERANCE, r);
    }
    Ok(json!(engine_dims))
}

fn run_case(ci: usize, case: &Case, cfg: &SelftestConfig) -> Result<(Ledger, Value), GeomError> {
    let tol = &cfg.tol;
    let mut l = Ledger::new(case);
    let mut r = derived_rng(cfg.seed, ci as u64);
    let structures = cfg.samples.div_ceil(SAMPLES_PER_STRUCTURE).max(1);
    let pool = (0..structures).map(|_| random_structure(&mut r, case.parity, case.n)).collect::<Result<Vec<_>, _>>()?;
    let mut oracle_fs = Vec::new();
    for i in 0..cfg.samples {
        match &pool[i / SAMPLES_PER_STRUCTURE] {
            SampledStructure::Even(s) => {
                let all = EvenClass::ALL.into_iter().filter(|c| s.class_space(*c).dim() > 0).collect();
                let f = random_f_even(&mut r, &all, s, tol)?;
                generic_even(&f, s, cfg, &mut l)?;
                if i < ORACLE_SAMPLES {
                    oracle_fs.push(f.f().clone());
                }
            }
            SampledStructure::Odd(s) => {
                let all = OddClass::ALL.into_iter().filter(|c| s.class_space(*c).dim() > 0).collect();
                let f = random_f_odd(&mut r, &all, s, tol)?;
                generic_odd(&f, s, cfg, &mut l)?;
                if i < ORACLE_SAMPLES {
                    oracle_fs.push(f.f().clone());
                }
            }
        }
    }
    let dims = oracle_checks(&pool[0], &oracle_fs, cfg, &mut l)?;

    let per_target = (cfg.samples / 10).max(1);
    let mut skipped = Vec::new();
    match case.parity {
        Parity::Even => {
            for target in even_targets() {
                for k in 0..per_target {
                    let SampledStructure::Even(s) = &pool[k % pool.len()] else { unreachable!() };
                    if target.iter().any(|c| s.class_space(*c).dim() == 0) {
                        skipped.push(norden_even::class_set_name(&target));
                        break;
                    }
                    targeted_even(&target, &mut r, s, cfg, &mut l)?;
                }
            }
        }
        Parity::Odd => {
            for target in odd_targets() {
                for k in 0..per_target {
                    let SampledStructure::Odd(s) = &pool[k % pool.len()] else { unreachable!() };
                    if target.iter().any(|c| s.class_space(*c).dim() == 0) {
                        skipped.push(norden_odd::odd_class_set_name(&target));
                        break;
                    }
                    targeted_odd(&target, &mut r, s, cfg, &mut l)?;
                }
            }
        }
    }

    for i in 0..per_target {
        let m = random_lie_model(&mut r, pool[i % pool.len()].clone())?;
        lie_checks(i, &m, cfg, &mut l)?;
    }
    let data = json!({
        "structures": structures,
        "samples": cfg.samples,
        "targeted_per_class": per_target,
        "lie_models": per_target,
        "class_dimensions": dims,
        "skipped_targets": skipped,
    });
    Ok((l, data))
}

pub fn selftest(cfg: &SelftestConfig) -> Result<Report, CliError> {
    let mut report = Report::new("selftest", cfg.tol.rel);
    report.provenance.seed = Some(cfg.seed);
    report.provenance.prng = Some(PRNG.to_string());
    if let Some(f) = cfg.fault {
        report.set("injected_fault", json!(format!("{f:?}")));
    }
    let mut cases = serde_json::Map::new();
    for (ci, case) in cfg.cases.iter().enumerate() {
        let (ledger, data) = run_case(ci, case, cfg)?;
        ledger.into_report(&mut report);
        cases.insert(case.to_string(), data);
    }
    report.set("cases", Value::Object(cases));
    Ok(report)
}
