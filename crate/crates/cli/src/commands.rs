use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use norden_core::potential::total_skew_residual;
use norden_core::{GeomError, Tensor, Tolerance};
use norden_even::{
    b_connection_even, b_torsion_from_nijenhuis, canonical_connection_even, canonical_identity_residual, classify_even,
    decompose_torsion_even, kt_connection_even, naturality_check_even, ClassLabelEven, ConnectionEven, EvenClass,
    FundamentalEven, NijenhuisEven, NordenStructure, TorsionClassEven, TorsionEven,
};
use norden_lie::{
    bracket_nijenhuis, curvature, d_eta_bracket, jacobi_residual, koszul_lc, LieAlgebraModel, ModelStructure,
    JACOBI_TOLERANCE,
};
use norden_odd::{
    classify_odd, decompose_torsion_odd, naturality_check_odd, phi_b_connection, phi_b_torsion_from_nijenhuis,
    phi_b_torsion_normal_horizontal, phi_canonical_connection, phi_canonical_identity_residual,
    phi_canonical_torsion_from_nijenhuis, phi_kt_connection, ClassLabelOdd, ConnectionOdd, ContactBStructure,
    FundamentalOdd, NijenhuisOdd, OddClass, TorsionOdd,
};
use norden_sampler::{sample_lie_model, sample_pair, SampleSpec, SampledStructure, PRNG};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{document_for, Fundamental, InputDocument, Loaded, Structure};
use crate::report::{Check, Report};

/// Residuals of the Koszul connection are compared at this level.
pub const KOSZUL_TOLERANCE: f64 = 1e-12;
/// Two independent routes to the same tensor must agree to this level.
pub const ROUTE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    B,
    Canonical,
    Kt,
    All,
}

pub(crate) fn rel(a: &Tensor, b: &Tensor, tol: &Tolerance) -> f64 {
    tol.relative((a - b).norm(), a.norm().max(b.norm()))
}

/// Joint relative difference of two Nijenhuis pairs. `N` alone may be pure
/// roundoff, so it is measured against the size of the whole pair.
pub(crate) fn pair_rel(a: (&Tensor, &Tensor), b: (&Tensor, &Tensor), tol: &Tolerance) -> f64 {
    let diff = ((a.0 - b.0).norm().powi(2) + (a.1 - b.1).norm().powi(2)).sqrt();
    let size = |p: (&Tensor, &Tensor)| (p.0.norm().powi(2) + p.1.norm().powi(2)).sqrt();
    tol.relative(diff, size(a).max(size(b)))
}

fn vec_json(v: &DVector<f64>) -> Value {
    json!(v.as_slice())
}

pub(crate) fn even_label_json(l: &ClassLabelEven) -> Value {
    let routes: BTreeMap<String, String> =
        l.routes.iter().map(|(r, s)| (r.to_string(), norden_even::class_set_name(s))).collect();
    json!({
        "class": l.name(),
        "members": l.members.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "norm": l.norm,
        "routes": routes,
        "residuals": l.residuals,
    })
}

pub(crate) fn odd_label_json(l: &ClassLabelOdd) -> Value {
    let routes: BTreeMap<String, String> =
        l.routes.iter().map(|(r, s)| (r.to_string(), norden_odd::odd_class_set_name(s))).collect();
    json!({
        "class": l.name(),
        "members": l.members.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "norm": l.norm,
        "routes": routes,
        "residuals": l.residuals,
    })
}

fn even_torsion_json(t: &TorsionEven) -> Value {
    let comps: BTreeMap<String, f64> = t.component_norms().iter().map(|(c, v)| (c.to_string(), *v)).collect();
    json!({ "norm": t.t().norm(), "components": comps, "t": vec_json(t.t_form()) })
}

fn odd_torsion_json(t: &TorsionOdd, tol: &Tolerance) -> Value {
    let comps: BTreeMap<String, f64> = t.component_norms().iter().map(|(c, v)| (c.to_string(), *v)).collect();
    json!({
        "norm": t.t().norm(),
        "components": comps,
        "support": t.support(tol).iter().map(ToString::to_string).collect::<Vec<_>>(),
        "forms": { "t": vec_json(t.t_form()), "t*": vec_json(t.t_star_form()), "t^": vec_json(t.t_hat_form()) },
    })
}

fn require_f(loaded: &Loaded) -> Result<&Fundamental, CliError> {
    loaded.f.as_ref().ok_or_else(|| CliError::Schema("this command needs `F` or a Lie model".into()))
}

fn norm_rel(m: &DMatrix<f64>, scale: f64) -> f64 {
    m.norm() / scale.max(f64::MIN_POSITIVE)
}

fn even_axioms(s: &NordenStructure) -> Vec<(&'static str, f64)> {
    let d = s.dim();
    let (j, g) = (s.j(), s.g());
    let id = DMatrix::<f64>::identity(d, d);
    vec![
        ("J^2 = -Id", norm_rel(&(j * j + &id), id.norm())),
        ("g(Jx,Jy) = -g(x,y)", norm_rel(&(j.transpose() * g * j + g), g.norm())),
        ("g symmetric", norm_rel(&(g - g.transpose()), g.norm())),
    ]
}

fn odd_axioms(s: &ContactBStructure) -> Vec<(&'static str, f64)> {
    let d = s.dim();
    let (phi, xi, eta, g) = (s.phi(), s.xi(), s.eta(), s.g());
    let id = DMatrix::<f64>::identity(d, d);
    let xi_eta = xi * eta.transpose();
    let eta_eta = eta * eta.transpose();
    vec![
        ("eta(xi) = 1", (eta.dot(xi) - 1.0).abs()),
        ("phi xi = 0", (phi * xi).norm() / xi.norm()),
        ("eta o phi = 0", (phi.transpose() * eta).norm() / eta.norm()),
        ("phi^2 = -Id + eta(x) xi", norm_rel(&(phi * phi + &id - &xi_eta), id.norm())),
        ("g(phi x, phi y) = -g(x,y) + eta(x)eta(y)", norm_rel(&(phi.transpose() * g * phi + g - eta_eta), g.norm())),
        ("g symmetric", norm_rel(&(g - g.transpose()), g.norm())),
    ]
}

fn lie_checks(m: &LieAlgebraModel, f: &Fundamental, tol: &Tolerance, report: &mut Report) {
    let c = m.c();
    let skew = tol.relative((c + c.permuted(&[1, 0, 2])).norm(), c.norm());
    report.check(Check::single("bracket antisymmetry", skew, tol.rel));
    report.check(Check::single("Jacobi identity", jacobi_residual(c), JACOBI_TOLERANCE));
    let lc = koszul_lc(m);
    report.check(Check::single("Levi-Civita torsion-free", lc.torsion_residual(m), KOSZUL_TOLERANCE));
    report.check(Check::single("Levi-Civita metric", lc.metric_residual(m), KOSZUL_TOLERANCE));
    let (n_b, n_hat_b) = bracket_nijenhuis(m);
    let (n_f, n_hat_f) = match (f, m.structure()) {
        (Fundamental::Even(f), ModelStructure::Even(s)) => {
            let nij = NijenhuisEven::from_fundamental(f, s);
            (nij.n().clone(), nij.n_hat().clone())
        }
        (Fundamental::Odd(f), ModelStructure::Odd(s)) => {
            report.check(Check::single(
                "d eta: bracket vs F",
                rel(&d_eta_bracket(m, s.eta()), &f.d_eta(s), tol),
                ROUTE_TOLERANCE,
            ));
            let nij = NijenhuisOdd::from_fundamental(f, s);
            (nij.n().clone(), nij.n_hat().clone())
        }
        _ => unreachable!("F is computed on the model's own structure"),
    };
    let r = pair_rel((&n_b, &n_hat_b), (&n_f, &n_hat_f), tol);
    report.check(Check::single("Nijenhuis pair: bracket vs F", r, ROUTE_TOLERANCE));
    let curv = curvature(m);
    report.check(Check::single("curvature symmetries", curv.symmetry_residual(), ROUTE_TOLERANCE));
    report.check(Check::single("first Bianchi identity", curv.bianchi_residual(), ROUTE_TOLERANCE));
    report.set("curvature", json!({ "R_norm": curv.r.norm(), "scalar": curv.scalar }));
}

pub fn validate(doc: &InputDocument, tol: &Tolerance) -> Result<Report, CliError> {
    let loaded = doc.load(tol)?;
    let mut report = Report::new("validate", tol.rel);
    let axioms = match &loaded.structure {
        Structure::Even(s) => even_axioms(s),
        Structure::Odd(s) => odd_axioms(s),
    };
    for (name, r) in axioms {
        report.check(Check::single(format!("axiom: {name}"), r, tol.rel));
    }
    report.set("kind", serde_json::to_value(doc.kind).expect("kind serializes"));
    report.set("dim", json!(loaded.dim()));
    if let Some(f) = &loaded.f {
        match (f, &loaded.structure) {
            (Fundamental::Even(f), Structure::Even(s)) => {
                report.check(Check::single("F admissible", norden_even::admissibility_residual(f.f(), s), tol.rel));
                report.check(Check::single("Lee form relation", f.lee_residual(s), tol.rel));
            }
            (Fundamental::Odd(f), Structure::Odd(s)) => {
                report.check(Check::single("F admissible", norden_odd::admissibility_residual(f.f(), s), tol.rel));
                let (a, b) = f.lee_residuals(s);
                report.check(Check::single("Lee forms: theta* o phi = -theta o phi^2", a, tol.rel));
                report.check(Check::single("Lee forms: omega(xi) = 0", b, tol.rel));
            }
            _ => unreachable!("F is loaded on its own structure"),
        }
        report.set("F_norm", json!(f.f().norm()));
    }
    if let (Some(m), Some(f)) = (&loaded.model, &loaded.f) {
        lie_checks(m, f, tol, &mut report);
    }
    Ok(report)
}

pub fn classify(doc: &InputDocument, tol: &Tolerance) -> Result<Report, CliError> {
    let loaded = doc.load(tol)?;
    let mut report = Report::new("classify", tol.rel);
    let label = match (require_f(&loaded)?, &loaded.structure) {
        (Fundamental::Even(f), Structure::Even(s)) => even_label_json(&classify_even(f, s, tol)?),
        (Fundamental::Odd(f), Structure::Odd(s)) => odd_label_json(&classify_odd(f, s, tol)?),
        _ => unreachable!("F is loaded on its own structure"),
    };
    // classify_* fails unless every route agrees.
    report.check(Check::single("routes agree", 0.0, tol.rel));
    report.set("label", label);
    Ok(report)
}

fn even_connection_json(c: &ConnectionEven, f: &FundamentalEven, s: &NordenStructure, tol: &Tolerance) -> (Value, f64) {
    let nat = naturality_check_even(c.q(), f.f(), s, tol);
    let v =
        json!({ "potential_norm": c.q().norm(), "torsion": even_torsion_json(c.torsion()), "natural": nat.natural });
    (v, nat.structure_residual.max(nat.metric_residual))
}

fn odd_connection_json(c: &ConnectionOdd, f: &FundamentalOdd, s: &ContactBStructure, tol: &Tolerance) -> (Value, f64) {
    let nat = naturality_check_odd(c.q(), f.f(), s, tol);
    let v = json!({ "potential_norm": c.q().norm(), "torsion": odd_torsion_json(c.torsion(), tol), "natural": nat.natural });
    (v, nat.structure_residual.max(nat.metric_residual))
}

fn connections_even(
    f: &FundamentalEven,
    s: &NordenStructure,
    which: Which,
    tol: &Tolerance,
    report: &mut Report,
) -> Result<(), CliError> {
    let label = classify_even(f, s, tol)?;
    let nij = NijenhuisEven::from_fundamental(f, s);
    let all = which == Which::All;
    report.set("label", even_label_json(&label));
    let b = b_connection_even(f, s, tol)?;
    let can = canonical_connection_even(f, s, tol)?;
    if all || which == Which::B {
        let (v, nat) = even_connection_json(&b, f, s, tol);
        report.set("B", v);
        report.check(Check::single("B: natural", nat, tol.rel));
        report.check(Check::single("B: torsion from N, N^", rel(b.t(), &b_torsion_from_nijenhuis(&nij), tol), tol.rel));
    }
    if all || which == Which::Canonical {
        let (v, nat) = even_connection_json(&can, f, s, tol);
        report.set("canonical", v);
        report.check(Check::single("canonical: natural", nat, tol.rel));
        report.check(Check::single("canonical: defining identity", canonical_identity_residual(can.t(), s), tol.rel));
        let outside =
            can.torsion().component(TorsionClassEven::T1).norm() + can.torsion().component(TorsionClassEven::T4).norm();
        report.check(Check::single("canonical: no T1, T4 parts", tol.relative(outside, can.t().norm()), tol.rel));
    }
    let kt = match kt_connection_even(f, s, tol) {
        Ok(k) => Some(k),
        Err(e @ GeomError::ClassPrecondition(_)) if all => {
            report.set("KT", json!({ "available": false, "reason": e.to_string() }));
            None
        }
        Err(e) if which == Which::Kt => return Err(e.into()),
        Err(_) => None,
    };
    if let Some(k) = &kt {
        if all || which == Which::Kt {
            let (v, nat) = even_connection_json(k, f, s, tol);
            report.set("KT", v);
            report.check(Check::single("KT: natural", nat, tol.rel));
            report.check(Check::single("KT: totally skew torsion", total_skew_residual(k.t()), ROUTE_TOLERANCE));
        }
        if all {
            let avg = 0.5 * (can.t() + k.t());
            report.check(Check::single("B is the average of canonical and KT", rel(b.t(), &avg, tol), ROUTE_TOLERANCE));
        }
    }
    let integrable = label.members.iter().all(|c| *c != EvenClass::W3);
    if all && integrable {
        report.check(Check::single("B and canonical coincide (N = 0)", rel(b.t(), can.t(), tol), ROUTE_TOLERANCE));
    }
    Ok(())
}

fn connections_odd(
    f: &FundamentalOdd,
    s: &ContactBStructure,
    which: Which,
    tol: &Tolerance,
    report: &mut Report,
) -> Result<(), CliError> {
    let label = classify_odd(f, s, tol)?;
    let nij = NijenhuisOdd::from_fundamental(f, s);
    let all = which == Which::All;
    report.set("label", odd_label_json(&label));
    let b = phi_b_connection(f, s, tol)?;
    let can = phi_canonical_connection(f, s, tol)?;
    if all || which == Which::B {
        let (v, nat) = odd_connection_json(&b, f, s, tol);
        report.set("phiB", v);
        report.check(Check::single("phiB: natural", nat, tol.rel));
        report.check(Check::single(
            "phiB: torsion from N, N^",
            rel(b.t(), &phi_b_torsion_from_nijenhuis(&nij, s), tol),
            tol.rel,
        ));
    }
    if all || which == Which::Canonical {
        let (v, nat) = odd_connection_json(&can, f, s, tol);
        report.set("phi-canonical", v);
        report.check(Check::single("phi-canonical: natural", nat, tol.rel));
        report.check(Check::single(
            "phi-canonical: defining identity",
            phi_canonical_identity_residual(can.t(), s),
            tol.rel,
        ));
        report.check(Check::single(
            "phi-canonical: torsion from N, N^",
            rel(can.t(), &phi_canonical_torsion_from_nijenhuis(&nij, s), tol),
            tol.rel,
        ));
        let forms = [
            (b.torsion().t_form(), can.torsion().t_form()),
            (b.torsion().t_star_form(), can.torsion().t_star_form()),
            (b.torsion().t_hat_form(), can.torsion().t_hat_form()),
        ];
        // The forms may vanish, so they are measured against the torsion itself.
        let scale = b.t().norm().max(can.t().norm());
        let r = forms.iter().map(|(x, y)| tol.relative((*x - *y).norm(), scale)).fold(0.0, f64::max);
        report.check(Check::single("phi-canonical: torsion forms equal those of phiB", r, tol.rel));
    }
    let kt = match phi_kt_connection(f, s, tol) {
        Ok(k) => Some(k),
        Err(e @ GeomError::ClassPrecondition(_)) if all => {
            report.set("phiKT", json!({ "available": false, "reason": e.to_string() }));
            None
        }
        Err(e) if which == Which::Kt => return Err(e.into()),
        Err(_) => None,
    };
    if let Some(k) = &kt {
        if all || which == Which::Kt {
            let (v, nat) = odd_connection_json(k, f, s, tol);
            report.set("phiKT", v);
            report.check(Check::single("phiKT: natural", nat, tol.rel));
            report.check(Check::single("phiKT: totally skew torsion", total_skew_residual(k.t()), ROUTE_TOLERANCE));
            let tn = k.t().norm();
            let forms =
                k.torsion().t_form().norm() + k.torsion().t_star_form().norm() + k.torsion().t_hat_form().norm();
            report.check(Check::single("phiKT: torsion forms vanish", tol.relative(forms, tn), ROUTE_TOLERANCE));
        }
        if all {
            let avg = 0.5 * (can.t() + k.t());
            report.check(Check::single(
                "phiB is the average of phi-canonical and phiKT",
                rel(b.t(), &avg, tol),
                ROUTE_TOLERANCE,
            ));
        }
    }
    let u0 = !label.members.iter().any(|c| OddClass::QUASI_KAEHLER.contains(c));
    if all && u0 {
        report.check(Check::single("phiB and phi-canonical coincide (U0)", rel(b.t(), can.t(), tol), ROUTE_TOLERANCE));
        report.check(Check::single(
            "phiB torsion without N(hx,hy) terms (U0)",
            rel(b.t(), &phi_b_torsion_normal_horizontal(&nij, s), tol),
            ROUTE_TOLERANCE,
        ));
    }
    Ok(())
}

pub fn connections(doc: &InputDocument, which: Which, tol: &Tolerance) -> Result<Report, CliError> {
    let loaded = doc.load(tol)?;
    let mut report = Report::new("connections", tol.rel);
    match (require_f(&loaded)?, &loaded.structure) {
        (Fundamental::Even(f), Structure::Even(s)) => connections_even(f, s, which, tol, &mut report)?,
        (Fundamental::Odd(f), Structure::Odd(s)) => connections_odd(f, s, which, tol, &mut report)?,
        _ => unreachable!("F is loaded on its own structure"),
    }
    Ok(report)
}

pub fn decompose(doc: &InputDocument, tol: &Tolerance) -> Result<Report, CliError> {
    let loaded = doc.load(tol)?;
    let mut report = Report::new("decompose", tol.rel);
    if loaded.f.is_none() && loaded.t.is_none() {
        return Err(CliError::Schema("decompose needs `F`, `T` or a Lie model".into()));
    }
    if let Some(f) = &loaded.f {
        let (names, comps, pair): (Vec<String>, Vec<Tensor>, (f64, f64)) = match (f, &loaded.structure) {
            (Fundamental::Even(f), Structure::Even(s)) => {
                let nij = NijenhuisEven::from_fundamental(f, s);
                (
                    EvenClass::ALL.iter().map(ToString::to_string).collect(),
                    s.class_components(f.f()).to_vec(),
                    (nij.n().norm(), nij.n_hat().norm()),
                )
            }
            (Fundamental::Odd(f), Structure::Odd(s)) => {
                let nij = NijenhuisOdd::from_fundamental(f, s);
                (
                    OddClass::ALL.iter().map(ToString::to_string).collect(),
                    s.class_components(f.f()),
                    (nij.n().norm(), nij.n_hat().norm()),
                )
            }
            _ => unreachable!("F is loaded on its own structure"),
        };
        let fnorm = f.f().norm();
        let rel_norms: BTreeMap<String, f64> =
            names.into_iter().zip(&comps).map(|(n, c)| (n, tol.relative(c.norm(), fnorm))).collect();
        let sum = comps.iter().fold(Tensor::zeros(loaded.dim(), 3), |acc, c| acc + c);
        report.check(Check::single("class components add up to F", rel(&sum, f.f(), tol), tol.rel));
        report.set("F", json!({ "norm": fnorm, "components": rel_norms, "N_norm": pair.0, "N^_norm": pair.1 }));
    }
    if let Some(t) = &loaded.t {
        let v = match &loaded.structure {
            Structure::Even(s) => {
                let dec = decompose_torsion_even(t, s, tol)?;
                let sum = dec.components().values().fold(Tensor::zeros(s.dim(), 3), |acc, c| acc + c);
                report.check(Check::single("torsion components add up to T", rel(&sum, t, tol), tol.rel));
                even_torsion_json(&dec)
            }
            Structure::Odd(s) => {
                let dec = decompose_torsion_odd(t, s, tol)?;
                let sum = dec.components().values().fold(Tensor::zeros(s.dim(), 3), |acc, c| acc + c);
                report.check(Check::single("torsion components add up to T", rel(&sum, t, tol), tol.rel));
                odd_torsion_json(&dec, tol)
            }
        };
        report.set("T", v);
    }
    Ok(report)
}

/// `(1,2)` canonical torsion and class label of a model.
pub(crate) fn model_invariants(m: &LieAlgebraModel, tol: &Tolerance) -> Result<(Tensor, String), GeomError> {
    Ok(match (norden_lie::fundamental_from_model(m, tol)?, m.structure()) {
        (norden_lie::ModelFundamental::Even(f), ModelStructure::Even(s)) => {
            let t = norden_even::canonical_torsion(&NijenhuisEven::from_fundamental(&f, s));
            (s.metric().raise_last(&t), classify_even(&f, s, tol)?.name())
        }
        (norden_lie::ModelFundamental::Odd(f), ModelStructure::Odd(s)) => {
            let c = phi_canonical_connection(&f, s, tol)?;
            (s.metric().raise_last(c.t()), classify_odd(&f, s, tol)?.name())
        }
        _ => unreachable!("F is computed on the model's own structure"),
    })
}

pub fn transform(doc: &InputDocument, u: f64, v: f64, w: f64, tol: &Tolerance) -> Result<Report, CliError> {
    let loaded = doc.load(tol)?;
    let model = loaded.model.as_ref().ok_or_else(|| {
        CliError::Schema("transform needs a Lie model: F of the new metric involves its Levi-Civita connection".into())
    })?;
    if matches!(loaded.structure, Structure::Even(_)) && w != 0.0 {
        return Err(CliError::Schema("the parameter w applies to the odd case only".into()));
    }
    let after = model.conformal(u, v, w)?;
    let mut report = Report::new("transform", tol.rel);
    let (t0, l0) = model_invariants(model, tol)?;
    let (t1, l1) = model_invariants(&after, tol)?;
    report.check(Check::single("(1,2) canonical torsion invariant", rel(&t1, &t0, tol), tol.rel));
    report.check(Check::single("class label preserved", if l0 == l1 { 0.0 } else { f64::INFINITY }, tol.rel));
    report.set("parameters", json!({ "u": u, "v": v, "w": w }));
    report.set("class", json!({ "before": l0, "after": l1 }));
    let out = document_for(&model_structure(&after), None, Some(after.c()), doc.metadata.clone());
    report.set("document", serde_json::to_value(out).expect("documents serialize"));
    Ok(report)
}

/// Documents drawn from `spec`: targeted `F` tensors, or Lie models when
/// `lie` is set.
pub fn sample(spec: &SampleSpec, lie: bool, tol: &Tolerance) -> Result<Vec<InputDocument>, CliError> {
    (0..spec.count as u64)
        .map(|i| {
            let mut meta = BTreeMap::from([
                ("seed".to_string(), spec.seed.to_string()),
                ("index".to_string(), i.to_string()),
                ("prng".to_string(), PRNG.to_string()),
            ]);
            if lie {
                let m = sample_lie_model(spec, i)?;
                return Ok(document_for(&model_structure(&m), None, Some(m.c()), meta));
            }
            meta.insert("target".to_string(), spec.class_target.to_string());
            let (s, f) = sample_pair(spec, i, tol)?;
            let st = match s {
                SampledStructure::Even(s) => Structure::Even(s),
                SampledStructure::Odd(s) => Structure::Odd(s),
            };
            Ok(document_for(&st, Some(f.f()), None, meta))
        })
        .collect()
}

pub(crate) fn model_structure(m: &LieAlgebraModel) -> Structure {
    match m.structure() {
        ModelStructure::Even(s) => Structure::Even(s.clone()),
        ModelStructure::Odd(s) => Structure::Odd(s.clone()),
    }
}
