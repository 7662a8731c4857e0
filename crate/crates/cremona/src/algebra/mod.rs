//! Exact arithmetic: prime fields and towers over them, sparse polynomials,
//! rational functions and dense matrices.

pub mod base;
pub mod field;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod scalar;

pub use base::{Coef, Prime};
pub use field::{Elem, Field, GaloisGen};
pub use matrix::{pgl_equal, Mat};
pub use poly::{Mono, Poly, Ring};
pub use ratfun::RatFun;
pub use scalar::Scalar;

use crate::error::{Error, Result};

/// Coefficient-wise action of a field automorphism.
pub trait Conj: Sized {
    fn conj(&self, g: &GaloisGen) -> Self;
}

impl Conj for Elem {
    fn conj(&self, g: &GaloisGen) -> Self {
        Elem::conj(self, g)
    }
}

impl<S: Scalar + Conj> Conj for Poly<S> {
    fn conj(&self, g: &GaloisGen) -> Self {
        self.map_coeffs(self.ring(), |c| c.conj(g))
    }
}

impl<S: Scalar + Conj> Conj for RatFun<S> {
    fn conj(&self, g: &GaloisGen) -> Self {
        self.map_coeffs(|c| c.conj(g))
    }
}

impl<S: Scalar + Conj> Conj for Mat<S> {
    fn conj(&self, g: &GaloisGen) -> Self {
        self.map(|c| c.conj(g))
    }
}

impl Elem {
    /// Applies `g` after checking that it is an automorphism of this element's field.
    pub fn try_conj(&self, g: &GaloisGen) -> Result<Elem> {
        if self.field().galois_generators().contains(g) || self.field().verify_auto(g) {
            Ok(self.conj(g))
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

/// `K[names]` over a field.
pub fn poly_ring(field: &Field, names: &[&str]) -> Ring<Elem> {
    Ring::new(field.clone(), names)
}

/// The rational function field `K(t)` in one variable.
pub fn function_field(field: &Field, var: &str) -> Ring<Elem> {
    Ring::new(field.clone(), &[var])
}

/// Scalars whose field can be listed element by element when it is small and finite.
pub trait Enumerable: Scalar {
    /// All elements, when the field is finite with at most `limit` elements.
    fn enumerate(ctx: &Self::Ctx, limit: u128) -> Option<Vec<Self>>;
}

impl Enumerable for Elem {
    fn enumerate(ctx: &Field, limit: u128) -> Option<Vec<Self>> {
        ctx.elements(limit).ok()
    }
}

impl<S: Scalar> Enumerable for RatFun<S> {
    fn enumerate(_: &Ring<S>, _: u128) -> Option<Vec<Self>> {
        None
    }
}
