//! Machine-readable reports. Every check may carry a witness that can be
//! re-verified from the report alone.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{cup_pairing, hilbert_local, Place, SquareClass};
use crate::cocycles::{graded_maps, theta3_images, theta3_perturbed, word_images};
use crate::cohomology::{galois_group, verify_transport, FiniteSemidirect, TwistedCochain};
use crate::error::{Error, Result};
use crate::galois::ActionMode;
use crate::magnus::Letter;
use crate::models::{h_cochain, instantiate, shift_map, CochainIdentity, ModelSpec};
use crate::nilpotent::{lcs_graded_rank, Class};
use crate::{obstruction, suites};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CONTRADICTION")]
    Contradiction,
    #[serde(rename = "NO_OBSTRUCTION")]
    NoObstruction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &str, ok: bool, witness: Option<Witness>) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            anchor: anchor.to_string(),
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    /// Filled in by the CLI; library-built reports carry 0 so that equal
    /// inputs give byte-identical output.
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            verdict: None,
            elapsed_ms: 0,
        }
    }

    pub fn parameter(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("parameters serialize"));
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("not a report: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedCochain {
    /// A kernel coordinate of the extension cocycle over the model's class.
    Extension { coordinate: usize },
    Phi2,
    Phi3 { axis: crate::models::Axis },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KummerRoot {
    MinusOne,
    Two,
}

/// Which Kummer-section pullback identity is claimed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PullbackClaim {
    /// `x`-section pulls `b + (chi-1)/2` back to `kappa + (chi-1)/2`.
    XSectionLinear,
    /// `y`-section pulls `f u a` back to `f u kappa`.
    YSectionCup,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    GroupLaw { seed: u64, samples: usize, exponent_bound: i64 },
    LcsRanks { ranks: Vec<usize> },
    Coboundary { model: ModelSpec, identity: CochainIdentity, beta: Vec<u32> },
    Cocycle { model: ModelSpec, cochain: NamedCochain },
    Homomorphism { model: ModelSpec, c: Vec<u32> },
    NonHomomorphism { model: ModelSpec, c: Vec<u32>, c1: u64, left: usize, right: usize },
    GradedMaps { model: ModelSpec, c: Vec<u32>, degree1: [[i64; 2]; 2], degree3: [[i64; 2]; 2] },
    /// Every normalized 1-cochain `kappa` on `H`: the section
    /// `g -> letter^kappa(g) x| g` is a homomorphism iff `kappa` is a cocycle.
    KummerSections { model: ModelSpec, letter: Letter, cochains: usize },
    KummerPullback { model: ModelSpec, kappa: Vec<u32>, claim: PullbackClaim },
    KummerMod2 { level: u64, root: KummerRoot },
    Hilbert { a: String, b: String, place: Place, value: i8 },
    ProductFormula { seed: u64, samples: usize, range: i64 },
    Pairing { u: SquareClass, partner: SquareClass, place: Place },
    ShiftRejection { alpha: SquareClass, beta: SquareClass, s: SquareClass, t: SquareClass, place: Place },
    TrivialClass { class: SquareClass, modulo: Option<SquareClass> },
    ShiftedPullback { model: ModelSpec, alpha: Vec<u32>, beta: Vec<u32> },
    InnerShift { model: ModelSpec, alpha: Vec<u32>, beta: Vec<u32>, conjugator: [u32; 2] },
    H1Basis { modulus: u64, matrix: [[u64; 2]; 2], identity: bool },
}

fn rational(s: &str) -> Result<Rational64> {
    s.parse().map_err(|_| Error::invalid(format!("bad rational {s:?}")))
}

fn class2_pair(model: &ModelSpec) -> Result<(FiniteSemidirect, FiniteSemidirect)> {
    Ok((
        model.with(Class::Two, ActionMode::Untwisted).semidirect()?,
        model.with(Class::Two, ActionMode::Twisted).semidirect()?,
    ))
}

impl Witness {
    /// Recomputes the witnessed fact from scratch.
    pub fn reverify(&self) -> Result<bool> {
        match self {
            Witness::GroupLaw { seed, samples, exponent_bound } => {
                Ok(suites::group_law_mismatch(*seed, *samples, *exponent_bound).is_none())
            }
            Witness::LcsRanks { ranks } => {
                let fresh = (1..=3).map(lcs_graded_rank).collect::<Result<Vec<_>>>()?;
                Ok(&fresh == ranks)
            }
            Witness::Coboundary { model, identity, beta } => {
                let inst = instantiate(model, identity)?;
                let beta = TwistedCochain::from_values(inst.left.module(), 1, inst.base.order(), beta.clone())?;
                verify_transport(&inst.left, &inst.right, &beta, inst.base.group())
            }
            Witness::Cocycle { model, cochain } => {
                let base = model.semidirect()?;
                let ch = suites::named_cochain(&base, *cochain)?;
                Ok(ch.is_normalized() && ch.is_cocycle(base.group())?)
            }
            Witness::Homomorphism { model, c } => {
                let (dom, cod) = class2_pair(model)?;
                let h = galois_group(dom.model())?;
                let c = h_cochain(&h, model.modulus, 2, c)?;
                Ok(theta3_perturbed(&dom, &cod, &c, 0).is_ok())
            }
            Witness::NonHomomorphism { model, c, c1, left, right } => {
                let (dom, cod) = class2_pair(model)?;
                let h = galois_group(dom.model())?;
                let c = h_cochain(&h, model.modulus, 2, c)?;
                let img = theta3_images(&dom, &cod, &c, *c1)?;
                if *left >= dom.order() || *right >= dom.order() {
                    return Ok(false);
                }
                Ok(img[dom.group().mul(*left, *right)] != cod.group().mul(img[*left], img[*right]))
            }
            Witness::GradedMaps { model, c, degree1, degree3 } => {
                let (dom, cod) = class2_pair(model)?;
                let h = galois_group(dom.model())?;
                let c = h_cochain(&h, model.modulus, 2, c)?;
                let hom = theta3_perturbed(&dom, &cod, &c, 0)?;
                let (xi, yi) = word_images(&hom, &dom, &cod)?;
                Ok(graded_maps(&xi, &yi)? == (*degree1, *degree3))
            }
            Witness::KummerSections { model, letter, cochains } => {
                Ok(suites::kummer_sections_exhaustive(model, *letter)? == Some(*cochains))
            }
            Witness::KummerPullback { model, kappa, claim } => {
                obstruction::kummer_pullback_holds(model, kappa, *claim)
            }
            Witness::KummerMod2 { level, root } => Ok(suites::kummer_mod2_mismatch(*level, *root)?.is_none()),
            Witness::Hilbert { a, b, place, value } => {
                Ok(hilbert_local(rational(a)?, rational(b)?, *place)? == *value)
            }
            Witness::ProductFormula { seed, samples, range } => {
                Ok(suites::product_formula_failure(*seed, *samples, *range)?.is_none())
            }
            Witness::Pairing { u, partner, place } => {
                Ok(cup_pairing(u, partner)?.symbols.get(place) == Some(&-1))
            }
            Witness::ShiftRejection { alpha, beta, s, t, place } => {
                let original = cup_pairing(t, s)?;
                let shifted = cup_pairing(&t.mul(beta), &s.mul(alpha))?;
                Ok(original.is_zero() && shifted.symbols.get(place) == Some(&-1))
            }
            Witness::TrivialClass { class, modulo } => {
                Ok(class.is_trivial() || modulo.is_some_and(|m| m == *class))
            }
            Witness::ShiftedPullback { model, alpha, beta } => {
                obstruction::shifted_pullback_holds(model, alpha, beta)
            }
            Witness::InnerShift { model, alpha, beta, conjugator } => {
                let base = model.semidirect()?;
                let h = galois_group(base.model())?;
                let a = h_cochain(&h, model.modulus, 1, alpha)?;
                let b = h_cochain(&h, model.modulus, 1, beta)?;
                let rho = shift_map(&base, &a, &b)?;
                Ok(obstruction::conjugation_images(&base, *conjugator)? == rho.images())
            }
            Witness::H1Basis { modulus, matrix, identity } => {
                let fresh = obstruction::h1_basis_check(*modulus, Some(*matrix))?;
                Ok(fresh.basis_ok && fresh.identity == *identity)
            }
        }
    }
}

/// Outcome of re-verifying one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reverified {
    pub name: String,
    pub ok: bool,
    pub message: String,
}

/// Re-verifies every witness, the recorded statuses, and the verdict.
pub fn reverify_report(report: &Report) -> Vec<Reverified> {
    let mut out = Vec::new();
    for check in &report.checks {
        let (ok, message) = match (&check.witness, check.status) {
            (_, Status::Fail) => (false, "check failed in the original run".to_string()),
            (None, Status::Pass) => (true, "no witness recorded".to_string()),
            (Some(w), Status::Pass) => match w.reverify() {
                Ok(true) => (true, "witness confirmed".to_string()),
                Ok(false) => (false, "witness does not hold".to_string()),
                Err(e) => (false, format!("witness could not be rebuilt: {e}")),
            },
        };
        out.push(Reverified { name: check.name.clone(), ok, message });
    }
    if let Some(verdict) = report.verdict {
        let two = SquareClass { sign: 1, radical: 2 };
        let supported = report.checks.iter().any(|c| match (&c.witness, verdict) {
            (Some(Witness::Pairing { u, partner, place }), Verdict::Contradiction) => {
                *u == two && hilbert_local(Rational64::from(2), Rational64::from(partner.value() as i64), *place).ok() == Some(-1)
            }
            (Some(Witness::TrivialClass { class, .. }), Verdict::NoObstruction) => *class == two,
            _ => false,
        });
        out.push(Reverified {
            name: "verdict".to_string(),
            ok: supported,
            message: if supported { "verdict supported by a witness" } else { "verdict lacks a witness" }.to_string(),
        });
    }
    out
}
