use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use norden_core::{GeomError, Result, Tensor, Tolerance};

use crate::connection::phi_canonical_connection;
use crate::fundamental::{xi_phi_form, FundamentalOdd};
use crate::nijenhuis::NijenhuisOdd;
use crate::spaces::{OddClass, TorsionClassOdd};
use crate::structure::ContactBStructure;

use OddClass::*;

/// Independent characterisations of the class of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OddRoute {
    /// Projection onto the subspaces cut out by the defining conditions.
    Components,
    /// Per-class closed forms of `(N, N^)`, which must add up to the pair of `F`.
    Nijenhuis,
    /// Torsion classes of the `φ`-canonical connection.
    CanonicalTorsion,
}

impl fmt::Display for OddRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OddRoute::Components => "components",
            OddRoute::Nijenhuis => "N",
            OddRoute::CanonicalTorsion => "Tcan-classes",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassLabelOdd {
    /// Smallest direct sum of basic classes containing `F`; empty for `F0`.
    pub members: BTreeSet<OddClass>,
    pub routes: BTreeMap<OddRoute, BTreeSet<OddClass>>,
    /// Keyed `route/condition`.
    pub residuals: BTreeMap<String, f64>,
    pub norm: f64,
}

impl ClassLabelOdd {
    pub fn is_cosymplectic(&self) -> bool {
        self.members.is_empty()
    }

    pub fn name(&self) -> String {
        odd_class_set_name(&self.members)
    }
}

pub fn odd_class_set_name(set: &BTreeSet<OddClass>) -> String {
    if set.is_empty() {
        "F0".to_string()
    } else {
        set.iter().map(ToString::to_string).collect::<Vec<_>>().join("+")
    }
}

/// The Nijenhuis pair of an element of a single basic class, in the closed
/// form specific to that class.
pub fn nijenhuis_of_class(class: OddClass, f: &FundamentalOdd, s: &ContactBStructure) -> NijenhuisOdd {
    let d = s.dim();
    let zero = Tensor::zeros(d, 3);
    let eta = Tensor::from_covector(s.eta());
    let phi = s.phi();
    let nc = s.n() as f64;
    let b = || xi_phi_form(f.f(), s);
    let twice_kernel = || 2.0 * (f.f().apply_slot(phi, 0) - f.f().apply_slot(phi, 2));
    let swap = |a: &Tensor| a.permuted(&[1, 0, 2]);
    let (n, n_hat) = match class {
        F1 => {
            let th = f.theta();
            let a = Tensor::from_matrix(&s.g_phi_phi()).outer(&Tensor::from_covector(&(phi.transpose() * th)))
                + Tensor::from_matrix(&s.g_phi()).outer(&Tensor::from_covector(th));
            (zero, (2.0 / nc) * a)
        }
        F2 => (zero, twice_kernel()),
        F3 => (twice_kernel(), zero),
        F4 => {
            let c = f.theta().dot(s.xi());
            (zero, (2.0 * c / nc) * Tensor::from_matrix(&s.g_phi()).outer(&eta))
        }
        F5 => {
            let c = f.theta_star().dot(s.xi());
            (zero, (-2.0 * c / nc) * Tensor::from_matrix(&s.g_phi_phi()).outer(&eta))
        }
        F6 => (zero, 4.0 * b().outer(&eta)),
        F7 => (4.0 * b().outer(&eta), zero),
        F8 | F9 => {
            let a = eta.outer(&b());
            (2.0 * (&a - swap(&a)), -2.0 * (&a + swap(&a)))
        }
        F10 => {
            let bx = f.f().apply_slot(phi, 2).insert_vector(0, s.xi());
            let a = eta.outer(&bx);
            (-(&a - swap(&a)), -(&a + swap(&a)))
        }
        F11 => {
            let wp = Tensor::from_covector(&(phi.transpose() * f.omega()));
            let a = eta.outer(&wp).outer(&eta);
            let last = eta.outer(&eta).outer(&wp);
            (&a - swap(&a), &a + swap(&a) - 2.0 * last)
        }
    };
    NijenhuisOdd::new(n, n_hat)
}

/// `1/2 {η(x)T(y,z,ξ) - η(y)T(x,z,ξ)}`: the `ξ`-block that accompanies a
/// `T8` part in the canonical torsion of an `F8` tensor.
pub fn t8_companion(t8: &Tensor, s: &ContactBStructure) -> Tensor {
    let a = Tensor::from_covector(s.eta()).outer(&t8.insert_vector(2, s.xi()));
    0.5 * (&a - a.permuted(&[1, 0, 2]))
}

/// Basic class signalled by each torsion class of the canonical torsion.
pub fn class_of_torsion(t: TorsionClassOdd) -> Option<OddClass> {
    use TorsionClassOdd as T;
    match t {
        T::T4 => Some(F1),
        T::T5 => Some(F2),
        T::T3 => Some(F3),
        T::T10 => Some(F4),
        T::T9 => Some(F5),
        T::T11 => Some(F6),
        T::T7 => Some(F7),
        T::T8 => Some(F8),
        T::T13 => Some(F9),
        T::T14 => Some(F10),
        T::T15 => Some(F11),
        T::T1 | T::T2 | T::T6 | T::T12 => None,
    }
}

/// Classifies an admissible `F` through every characterisation and
/// requires them to agree.
pub fn classify_odd(f: &FundamentalOdd, s: &ContactBStructure, tol: &Tolerance) -> Result<ClassLabelOdd> {
    let norm = f.norm();
    let mut label =
        ClassLabelOdd { members: BTreeSet::new(), routes: BTreeMap::new(), residuals: BTreeMap::new(), norm };
    if tol.negligible(norm) {
        return Ok(label);
    }

    let comps = s.class_components(f.f());
    let mut by_components = BTreeSet::new();
    for (c, t) in OddClass::ALL.iter().zip(&comps) {
        let r = t.norm() / norm;
        label.residuals.insert(format!("{}/{c}", OddRoute::Components), r);
        if !tol.passes(r) {
            by_components.insert(*c);
        }
    }
    label.routes.insert(OddRoute::Components, by_components.clone());

    let nij = NijenhuisOdd::from_fundamental(f, s);
    let pair_norm = nij.norm();
    let mut sum_n = Tensor::zeros(s.dim(), 3);
    let mut sum_hat = Tensor::zeros(s.dim(), 3);
    let mut by_nijenhuis = BTreeSet::new();
    for (c, t) in OddClass::ALL.iter().zip(comps) {
        let part = nijenhuis_of_class(*c, &FundamentalOdd::from_parts(t, s), s);
        let r = part.norm() / pair_norm;
        label.residuals.insert(format!("{}/{c}", OddRoute::Nijenhuis), r);
        if !tol.passes(r) {
            by_nijenhuis.insert(*c);
        }
        sum_n += part.n();
        sum_hat += part.n_hat();
    }
    let table = (((&sum_n - nij.n()).norm().powi(2) + (&sum_hat - nij.n_hat()).norm().powi(2)).sqrt()) / pair_norm;
    label.residuals.insert(format!("{}/table-sum", OddRoute::Nijenhuis), table);
    if !tol.passes(table) {
        return Err(GeomError::InconsistentClassification(format!(
            "per-class Nijenhuis forms do not add up to (N, N^) (relative {table:.3e})"
        )));
    }
    let r_n = nij.n().norm() / pair_norm;
    let r_hat = nij.n_hat().norm() / pair_norm;
    label.residuals.insert(format!("{}/N", OddRoute::Nijenhuis), r_n);
    label.residuals.insert(format!("{}/N^", OddRoute::Nijenhuis), r_hat);
    // Membership in the normal (resp. N^ = 0) sum forces N = 0 (resp. N^ = 0).
    // The converse fails only on a diagonal of F8+F10, where the F8 and F10
    // parts of N (resp. N^) cancel.
    let outside =
        |allowed: &[OddClass]| by_nijenhuis.iter().filter(|c| !allowed.contains(c)).copied().collect::<Vec<_>>();
    let implied = |outside: &[OddClass], vanishes: bool| {
        (outside.is_empty() && vanishes)
            || (!outside.is_empty() && (!vanishes || outside.iter().all(|c| [F8, F10].contains(c))))
    };
    if !implied(&outside(&OddClass::NORMAL), tol.passes(r_n))
        || !implied(&outside(&OddClass::QUASI_KAEHLER), tol.passes(r_hat))
    {
        return Err(GeomError::InconsistentClassification(format!(
            "N = 0 is {}, N^ = 0 is {}, but the Nijenhuis route gives {}",
            tol.passes(r_n),
            tol.passes(r_hat),
            odd_class_set_name(&by_nijenhuis)
        )));
    }
    label.routes.insert(OddRoute::Nijenhuis, by_nijenhuis);

    let canonical = phi_canonical_connection(f, s, tol)?;
    let torsion = canonical.torsion();
    let tn = torsion.t().norm().max(tol.abs);
    let mut by_torsion = BTreeSet::new();
    for (tc, part) in torsion.components() {
        let part = if *tc == TorsionClassOdd::T14 {
            part - t8_companion(torsion.component(TorsionClassOdd::T8), s)
        } else {
            part.clone()
        };
        let r = part.norm() / tn;
        label.residuals.insert(format!("{}/{tc}", OddRoute::CanonicalTorsion), r);
        if tol.passes(r) {
            continue;
        }
        match class_of_torsion(*tc) {
            Some(c) => {
                by_torsion.insert(c);
            }
            None => {
                return Err(GeomError::InconsistentClassification(format!(
                    "canonical torsion has a {tc} component (relative {r:.3e})"
                )));
            }
        }
    }
    label.routes.insert(OddRoute::CanonicalTorsion, by_torsion);

    let disagreeing: Vec<String> = label
        .routes
        .iter()
        .filter(|(_, set)| **set != by_components)
        .map(|(route, set)| format!("{route} -> {}", odd_class_set_name(set)))
        .collect();
    if !disagreeing.is_empty() {
        return Err(GeomError::InconsistentClassification(format!(
            "components give {}, but {}",
            odd_class_set_name(&by_components),
            disagreeing.join(", ")
        )));
    }
    label.members = by_components;
    Ok(label)
}
