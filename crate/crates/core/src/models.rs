//! Serializable descriptions of finite models and of the cochain identities
//! compared on them, so that every transport witness can be rebuilt from a
//! report alone.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::cocycles::{
    coordinate_cochain, cup_forms, difference_class, f_cochain, phi2, phi3, theta3_build, Coordinate,
};
use crate::cohomology::{
    extension_cocycle, galois_group, FiniteGroup, FiniteSemidirect, Homomorphism, TwistedCochain, TwistedModule,
};
use crate::error::{Error, Result};
use crate::galois::{ActionMode, GaloisModel};
use crate::nilpotent::Class;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub level: u64,
    pub modulus: u64,
    pub generators: Vec<u64>,
    pub class: Class,
    pub mode: ActionMode,
}

impl ModelSpec {
    pub fn new(model: &GaloisModel, class: Class, mode: ActionMode) -> Self {
        ModelSpec {
            level: model.level(),
            modulus: model.modulus(),
            generators: model.generators().to_vec(),
            class,
            mode,
        }
    }

    pub fn with(&self, class: Class, mode: ActionMode) -> Self {
        ModelSpec { class, mode, ..self.clone() }
    }

    pub fn galois(&self) -> Result<GaloisModel> {
        GaloisModel::with_generators(self.level, self.modulus, &self.generators)
    }

    pub fn semidirect(&self) -> Result<FiniteSemidirect> {
        FiniteSemidirect::new(&self.galois()?, self.class, self.mode)
    }
}

/// `[[x,y],x]` or `[[x,y],y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }

    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];
}

/// Pairs of 2-cochains claimed to be cohomologous; `left - right = d(beta)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum CochainIdentity {
    /// Extension class of class 2 over class 1 against `b u a`.
    Phi2,
    /// A coordinate of the class-3 over class-2 extension against the closed
    /// formula (with or without the `f` term, following the model's mode).
    Phi3 { axis: Axis },
    /// `phi3' - theta3(c)^* phi3` against the closed difference formula.
    Difference { axis: Axis, c: Vec<u32> },
    /// The closed difference formula against its cup-product form.
    CupForm { axis: Axis, c: Vec<u32> },
    /// `rho^*(b u a)` against `b u a` for `rho(w, g) = (w + (alpha, beta)(g), g)`.
    ShiftedPhi2 { alpha: Vec<u32>, beta: Vec<u32> },
}

pub struct IdentityInstance {
    pub base: FiniteSemidirect,
    pub left: TwistedCochain,
    pub right: TwistedCochain,
}

pub fn h_cochain(h: &FiniteGroup, modulus: u64, twist: u32, values: &[u32]) -> Result<TwistedCochain> {
    TwistedCochain::from_values(TwistedModule::new(modulus, twist)?, 1, h.order(), values.to_vec())
}

pub fn instantiate(spec: &ModelSpec, identity: &CochainIdentity) -> Result<IdentityInstance> {
    match identity {
        CochainIdentity::Phi2 => {
            if spec.class != Class::One {
                return Err(Error::invalid("the degree-2 identity lives on the class-1 quotient"));
            }
            let base = spec.semidirect()?;
            let left = extension_cocycle(&base)?.remove(0);
            let right = phi2(&base)?;
            Ok(IdentityInstance { base, left, right })
        }
        CochainIdentity::Phi3 { axis } => {
            if spec.class != Class::Two {
                return Err(Error::invalid("the degree-3 identities live on the class-2 quotient"));
            }
            let base = spec.semidirect()?;
            let left = extension_cocycle(&base)?.swap_remove(axis.index());
            let [x, y] = phi3(&base)?;
            let right = if *axis == Axis::X { x } else { y };
            Ok(IdentityInstance { base, left, right })
        }
        CochainIdentity::Difference { axis, c } | CochainIdentity::CupForm { axis, c } => {
            let ctx = DifferenceContext::cached(spec)?;
            let c = h_cochain(&ctx.h, spec.modulus, 2, c)?;
            let (left, right) = if matches!(identity, CochainIdentity::Difference { .. }) {
                (ctx.extracted(&c)?, ctx.formula(&c)?)
            } else {
                (ctx.formula(&c)?, ctx.cup(&c)?)
            };
            let i = axis.index();
            let (left, right) = (left[i].clone(), right[i].clone());
            Ok(IdentityInstance { base: ctx.untwisted.clone(), left, right })
        }
        CochainIdentity::ShiftedPhi2 { alpha, beta } => {
            if spec.class != Class::One {
                return Err(Error::invalid("the shifted degree-2 identity lives on the class-1 quotient"));
            }
            let base = spec.semidirect()?;
            let h = galois_group(base.model())?;
            let alpha = h_cochain(&h, spec.modulus, 1, alpha)?;
            let beta = h_cochain(&h, spec.modulus, 1, beta)?;
            let rho = shift_map(&base, &alpha, &beta)?;
            let right = phi2(&base)?;
            let left = right.pullback(&rho, base.group(), base.group())?;
            Ok(IdentityInstance { base, left, right })
        }
    }
}

/// `(y^a x^b, g) -> (y^(a + alpha(g)) x^(b + beta(g)), g)` on a class-1
/// semidirect product, verified to be a homomorphism.
pub fn shift_map(base: &FiniteSemidirect, alpha: &TwistedCochain, beta: &TwistedCochain) -> Result<Homomorphism> {
    if base.class() != Class::One {
        return Err(Error::invalid("shift maps act on the class-1 quotient"));
    }
    let n = base.model().modulus();
    let images = (0..base.order())
        .map(|i| {
            let (mut w, g) = base.decode(i);
            let h = base.h_index(i);
            w[0] = ((w[0] as u64 + alpha.at1(h)) % n) as u32;
            w[1] = ((w[1] as u64 + beta.at1(h)) % n) as u32;
            base.encode(&w, g)
        })
        .collect::<Result<Vec<_>>>()?;
    Homomorphism::verified(base.group(), base.group(), images)
}

type ModelKey = (u64, u64, Vec<u64>);

/// Everything shared by the difference identities on one Galois model:
/// both class-2 towers, their degree-3 extension cocycles, `H` and `f`.
pub struct DifferenceContext {
    pub h: FiniteGroup,
    pub untwisted: FiniteSemidirect,
    pub twisted: FiniteSemidirect,
    pub phi3_untwisted: Vec<TwistedCochain>,
    pub phi3_twisted: Vec<TwistedCochain>,
    pub f: TwistedCochain,
}

impl DifferenceContext {
    pub fn new(model: &GaloisModel) -> Result<Self> {
        let untwisted = FiniteSemidirect::new(model, Class::Two, ActionMode::Untwisted)?;
        let twisted = FiniteSemidirect::new(model, Class::Two, ActionMode::Twisted)?;
        let h = galois_group(model)?;
        Ok(DifferenceContext {
            phi3_untwisted: extension_cocycle(&untwisted)?,
            phi3_twisted: extension_cocycle(&twisted)?,
            f: f_cochain(&h, model.modulus())?,
            h,
            untwisted,
            twisted,
        })
    }

    /// Shared per thread and per Galois model; building the two towers
    /// dominates the cost of checking a single identity.
    pub fn cached(spec: &ModelSpec) -> Result<Rc<Self>> {
        thread_local! {
            static CONTEXTS: RefCell<HashMap<ModelKey, Rc<DifferenceContext>>> = RefCell::default();
        }
        let key = (spec.level, spec.modulus, spec.generators.clone());
        if let Some(ctx) = CONTEXTS.with(|m| m.borrow().get(&key).cloned()) {
            return Ok(ctx);
        }
        let ctx = Rc::new(DifferenceContext::new(&spec.galois()?)?);
        CONTEXTS.with(|m| m.borrow_mut().insert(key, ctx.clone()));
        Ok(ctx)
    }

    pub fn theta(&self, c: &TwistedCochain) -> Result<Homomorphism> {
        theta3_build(&self.untwisted, &self.twisted, c)
    }

    /// `phi3' - theta3(c)^* phi3`, both coordinates.
    pub fn extracted(&self, c: &TwistedCochain) -> Result<[TwistedCochain; 2]> {
        let theta = self.theta(c)?;
        let pulled = |i: usize| -> Result<TwistedCochain> {
            let back = self.phi3_twisted[i].pullback(&theta, self.untwisted.group(), self.twisted.group())?;
            self.phi3_untwisted[i].sub(&back)
        };
        Ok([pulled(0)?, pulled(1)?])
    }

    pub fn formula(&self, c: &TwistedCochain) -> Result<[TwistedCochain; 2]> {
        difference_class(&self.untwisted, c, &self.f)
    }

    pub fn cup(&self, c: &TwistedCochain) -> Result<[TwistedCochain; 2]> {
        cup_forms(&self.untwisted, &self.h, c, &self.f)
    }
}

/// Coordinate cochains `a`, `b` of a semidirect product, for callers that
/// only hold a model description.
pub fn coordinates(base: &FiniteSemidirect) -> Result<(TwistedCochain, TwistedCochain)> {
    Ok((coordinate_cochain(base, Coordinate::A)?, coordinate_cochain(base, Coordinate::B)?))
}
