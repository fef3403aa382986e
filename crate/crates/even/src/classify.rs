use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::DMatrix;
use norden_core::{cyclic_sum, GeomError, Result, Tensor, Tolerance};

use crate::connection::canonical_torsion;
use crate::fundamental::{cyclic_j, w1_form, FundamentalEven};
use crate::nijenhuis::NijenhuisEven;
use crate::spaces::{torsion_form, vectorial_torsion, EvenClass, TorsionClassEven};
use crate::structure::NordenStructure;
use crate::torsion::decompose_torsion_even;

use EvenClass::{W1, W2, W3};

/// Independent characterisations of the class of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvenRoute {
    /// Projection onto the basic-class subspaces.
    Components,
    /// Defining identities on `F` and its Lee form.
    Fundamental,
    /// Conditions on `N`, `N^` and the trace `ν^`.
    Nijenhuis,
    /// Conditions on the `(1,2)` canonical torsion.
    CanonicalTorsion,
    /// Canonical torsion expressed through `N`, `N^`.
    TorsionNijenhuis,
    /// Torsion-class membership of the canonical torsion.
    TorsionClasses,
}

impl fmt::Display for EvenRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EvenRoute::Components => "components",
            EvenRoute::Fundamental => "F",
            EvenRoute::Nijenhuis => "N",
            EvenRoute::CanonicalTorsion => "Tc",
            EvenRoute::TorsionNijenhuis => "Tc(N)",
            EvenRoute::TorsionClasses => "Tc-classes",
        };
        f.write_str(s)
    }
}

/// Class sets carrying a characterising condition, in table order.
const ROWS: [&[EvenClass]; 6] = [&[W1], &[W2], &[W3], &[W1, W2], &[W1, W3], &[W2, W3]];

#[derive(Debug, Clone, PartialEq)]
pub struct ClassLabelEven {
    /// Smallest direct sum of basic classes containing `F`; empty for `W0`.
    pub members: BTreeSet<EvenClass>,
    pub routes: BTreeMap<EvenRoute, BTreeSet<EvenClass>>,
    /// Keyed `route/condition`.
    pub residuals: BTreeMap<String, f64>,
    pub norm: f64,
}

impl ClassLabelEven {
    pub fn is_kahler(&self) -> bool {
        self.members.is_empty()
    }

    pub fn name(&self) -> String {
        class_set_name(&self.members)
    }
}

pub fn class_set_name(set: &BTreeSet<EvenClass>) -> String {
    if set.is_empty() {
        "W0".to_string()
    } else {
        set.iter().map(ToString::to_string).collect::<Vec<_>>().join("+")
    }
}

fn row_name(row: &[EvenClass]) -> String {
    class_set_name(&row.iter().copied().collect())
}

fn members_from_rows(res: &[f64; 6], tol: &Tolerance) -> BTreeSet<EvenClass> {
    let mut set: BTreeSet<EvenClass> = EvenClass::ALL.into_iter().collect();
    for (row, r) in ROWS.iter().zip(res) {
        if tol.passes(*r) {
            set.retain(|c| row.contains(c));
        }
    }
    set
}

/// Metric-scale factor for traces so they compare with the tensor norm.
fn trace_scale(s: &NordenStructure) -> f64 {
    s.metric().g_inv().norm()
}

/// Classifies an admissible `F` through every characterisation and
/// requires them to agree.
pub fn classify_even(f: &FundamentalEven, s: &NordenStructure, tol: &Tolerance) -> Result<ClassLabelEven> {
    let norm = f.norm();
    let mut label =
        ClassLabelEven { members: BTreeSet::new(), routes: BTreeMap::new(), residuals: BTreeMap::new(), norm };
    if tol.negligible(norm) {
        return Ok(label);
    }
    let nij = NijenhuisEven::from_fundamental(f, s);
    let tc = canonical_torsion(&nij);

    let rows: [(EvenRoute, [f64; 6]); 4] = [
        (EvenRoute::Fundamental, fundamental_rows(f, s)),
        (EvenRoute::Nijenhuis, nijenhuis_rows(&nij, s)),
        (EvenRoute::CanonicalTorsion, torsion_rows(&tc, s)),
        (EvenRoute::TorsionNijenhuis, torsion_nijenhuis_rows(&tc, &nij, s)),
    ];
    for (route, res) in &rows {
        for (row, r) in ROWS.iter().zip(res) {
            label.residuals.insert(format!("{route}/{}", row_name(row)), *r);
        }
        label.routes.insert(*route, members_from_rows(res, tol));
    }

    let comps = s.class_components(f.f());
    let mut by_components = BTreeSet::new();
    for (c, t) in EvenClass::ALL.iter().zip(&comps) {
        let r = t.norm() / norm;
        label.residuals.insert(format!("{}/{c}", EvenRoute::Components), r);
        if !tol.passes(r) {
            by_components.insert(*c);
        }
    }
    label.routes.insert(EvenRoute::Components, by_components);

    let dec = decompose_torsion_even(&tc, s, tol)?;
    let tn = tc.norm().max(tol.abs);
    let (trace_free, vectorial) = dec.t3_split(s);
    let mut by_torsion = BTreeSet::new();
    for (name, t, class) in [
        ("T2", dec.component(TorsionClassEven::T2), Some(W3)),
        ("T3-vectorial", &vectorial, Some(W1)),
        ("T3-tracefree", &trace_free, Some(W2)),
        ("T1", dec.component(TorsionClassEven::T1), None),
        ("T4", dec.component(TorsionClassEven::T4), None),
    ] {
        let r = t.norm() / tn;
        label.residuals.insert(format!("{}/{name}", EvenRoute::TorsionClasses), r);
        match class {
            Some(c) if !tol.passes(r) => {
                by_torsion.insert(c);
            }
            None if !tol.passes(r) => {
                return Err(GeomError::InconsistentClassification(format!(
                    "canonical torsion has a {name} component (relative {r:.3e})"
                )));
            }
            _ => {}
        }
    }
    label.routes.insert(EvenRoute::TorsionClasses, by_torsion);

    let reference = label.routes[&EvenRoute::Components].clone();
    let disagreeing: Vec<String> = label
        .routes
        .iter()
        .filter(|(_, set)| **set != reference)
        .map(|(route, set)| format!("{route} -> {}", class_set_name(set)))
        .collect();
    if !disagreeing.is_empty() {
        return Err(GeomError::InconsistentClassification(format!(
            "components give {}, but {}",
            class_set_name(&reference),
            disagreeing.join(", ")
        )));
    }
    label.members = reference;
    Ok(label)
}

fn fundamental_rows(f: &FundamentalEven, s: &NordenStructure) -> [f64; 6] {
    let fnorm = f.norm();
    let rel = |t: Tensor| t.norm() / fnorm;
    let w1 = w1_form(f.theta(), s);
    let r_w1 = rel(f.f() - &w1);
    let r_cj = rel(cyclic_j(f.f(), s));
    let r_theta = f.theta().norm() / (trace_scale(s) * fnorm);
    let sigma = cyclic_sum(f.f());
    let r_w3 = sigma.norm() / fnorm;
    let r_w13 = rel(sigma - cyclic_sum(&w1));
    [r_w1, r_cj.max(r_theta), r_w3, r_cj, r_w13, r_theta]
}

/// `(1/2n){ν^(z)g(x,y) + ν~^(z)g~(x,y)}`.
pub fn w1_nijenhuis_hat(nij: &NijenhuisEven, s: &NordenStructure) -> Tensor {
    let g = s.g();
    let gt = s.assoc_metric().g();
    let (nu, nut) = (nij.nu_hat(), nij.nu_hat_tilde());
    let c = 1.0 / (2.0 * s.n() as f64);
    Tensor::from_fn3(s.dim(), |x, y, z| c * (nu[z] * g[(x, y)] + nut[z] * gt[(x, y)]))
}

fn nijenhuis_rows(nij: &NijenhuisEven, s: &NordenStructure) -> [f64; 6] {
    let sc = nij.norm();
    let r_n = nij.n().norm() / sc;
    let r_nh = nij.n_hat().norm() / sc;
    let r_form = (nij.n_hat() - w1_nijenhuis_hat(nij, s)).norm() / sc;
    let r_nu = nij.nu_hat().norm() / (trace_scale(s) * sc);
    [r_n.max(r_form), r_n.max(r_nu), r_nh, r_n, r_form, r_nu]
}

fn torsion_rows(tc: &Tensor, s: &NordenStructure) -> [f64; 6] {
    let d = s.dim();
    let j = s.j();
    let t12 = s.metric().raise_last(tc);
    let sc = t12.norm();
    let rel = |x: Tensor| x.norm() / sc;
    let t = torsion_form(tc, s);
    let tj = j.transpose() * &t;
    let c = 1.0 / (2.0 * s.n() as f64);
    let id = DMatrix::<f64>::identity(d, d);
    let vectorial = Tensor::from_fn3(d, |x, y, k| {
        c * (t[x] * id[(y, k)] - t[y] * id[(x, k)] + tj[x] * j[(k, y)] - tj[y] * j[(k, x)])
    });
    let rhs13 = Tensor::from_fn3(d, |x, y, k| (tj[y] * id[(x, k)] - t[y] * j[(k, x)]) * 2.0 * c);
    let jj = t12.apply_slot(j, 0).apply_slot(j, 1);
    let jx_plus_jt = t12.apply_slot(j, 0) + t12.apply_slot(&j.transpose(), 2);
    let r_t = t.norm() / (trace_scale(s) * tc.norm());
    let r_jj = rel(&t12 - &jj);
    let r_cyc = cyclic_sum(tc).norm() / tc.norm();
    [rel(&t12 - vectorial), r_jj.max(r_t), rel(jx_plus_jt.clone()), r_jj.max(r_cyc), rel(jx_plus_jt - rhs13), r_t]
}

fn torsion_nijenhuis_rows(tc: &Tensor, nij: &NijenhuisEven, s: &NordenStructure) -> [f64; 6] {
    let sc = tc.norm();
    let rel = |x: Tensor| x.norm() / sc;
    let w1 = vectorial_torsion(&(nij.nu_hat() / 8.0), s);
    let quarter_n = 0.25 * nij.n();
    let hat = 0.125 * (nij.n_hat().permuted(&[2, 1, 0]) - nij.n_hat().permuted(&[2, 0, 1]));
    let traces =
        (torsion_form(tc, s).norm() / (trace_scale(s) * sc)).max(nij.nu_hat().norm() / (trace_scale(s) * nij.norm()));
    [
        rel(tc - &w1),
        rel(tc - &hat).max(traces),
        rel(tc - &quarter_n),
        rel(tc - &hat),
        rel(tc - &quarter_n - &w1),
        rel(tc - &quarter_n - &hat).max(traces),
    ]
}
