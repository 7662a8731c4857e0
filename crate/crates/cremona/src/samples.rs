//! Seeded sample spaces and random isometries used by tests, the acceptance
//! suite and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{poly_ring, Elem, Field, Mat, Poly, RatFun, Ring, Scalar};
use crate::error::{Error, Result};
use crate::fibration::Fibration;
use crate::quadform::{OrthogonalMap, QuadraticSpace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The first element of `field` (in enumeration order) that is not a square.
pub fn first_nonsquare(field: &Field) -> Option<Elem> {
    let elems = field.elements(1 << 16).ok()?;
    let squares: Vec<Elem> = elems.iter().map(|e| e.mul(e)).collect();
    elems.into_iter().find(|e| !e.is_zero() && !squares.contains(e))
}

/// The lexicographically first `(a, b, c, d)` with `t^4 + a t^3 + b t^2 + c t + d` irreducible.
pub fn first_quartic_fibration(field: &Field) -> Result<Fibration> {
    let elems = field.elements(64)?;
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    if let Ok(fib) = Fibration::quartic(a, b, c, d) {
                        return Ok(fib);
                    }
                }
            }
        }
    }
    Err(Error::Invalid(format!("no irreducible quartic over {}", field.describe())))
}

/// A diagonal-type space `sum c_i x_i^2` over `field`.
pub fn diagonal_space(field: &Field, coeffs: &[Elem]) -> Result<QuadraticSpace<Elem>> {
    let names: Vec<String> = (0..coeffs.len()).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let r = poly_ring(field, &refs);
    let form = coeffs.iter().enumerate().fold(r.zero(), |acc, (i, c)| acc.add(&r.var(i).pow(2).scale(c)));
    QuadraticSpace::new(form)
}

/// Named sample spaces over finite fields and `Q`.
pub fn named_space(name: &str) -> Result<QuadraticSpace<Elem>> {
    match name {
        "F3:x^2+y^2" => {
            let f = Field::prime_field(3)?;
            diagonal_space(&f, &[f.one(), f.one()])
        }
        "F5:x^2-2y^2" => {
            let f = Field::prime_field(5)?;
            diagonal_space(&f, &[f.one(), f.from_i64(-2)])
        }
        "F9:x^2-cy^2" => {
            let f3 = Field::prime_field(3)?;
            let f = f3.extend(&[f3.one(), f3.zero(), f3.one()])?;
            let c = first_nonsquare(&f).expect("F9 has non-squares");
            diagonal_space(&f, &[f.one(), c.neg()])
        }
        "Q:x^2+y^2+z^2" => {
            let q = Field::rationals();
            diagonal_space(&q, &[q.one(), q.one(), q.one()])
        }
        _ => Err(Error::Invalid(format!("unknown sample space '{name}'"))),
    }
}

pub const NAMED_SPACES: [&str; 4] = ["F3:x^2+y^2", "F5:x^2-2y^2", "F9:x^2-cy^2", "Q:x^2+y^2+z^2"];

/// Product of `count` random reflections.
pub fn random_isometry<R: Rng + ?Sized>(space: &QuadraticSpace<Elem>, count: usize, rng: &mut R) -> Mat<Elem> {
    (0..count).fold(Mat::identity(space.ctx(), space.dim()), |acc, _| acc.mul(&space.random_reflection(rng).matrix))
}

/// A random polynomial in `t` of degree at most `deg`.
pub fn random_t_poly<R: Rng + ?Sized>(kt: &Ring<Elem>, deg: u32, rng: &mut R) -> Poly<Elem> {
    let f = kt.base();
    (0..=deg).fold(kt.zero(), |acc, e| acc.add(&kt.var(0).pow(e).scale(&f.random(rng))))
}

/// A random reflection of a space over `k(t)` along a vector with polynomial entries.
pub fn random_t_reflection<R: Rng + ?Sized>(space: &QuadraticSpace<RatFun<Elem>>, deg: u32, rng: &mut R) -> OrthogonalMap<RatFun<Elem>> {
    let kt = space.ctx().clone();
    loop {
        let a: Vec<RatFun<Elem>> = (0..space.dim()).map(|_| RatFun::from_poly(random_t_poly(&kt, deg, rng))).collect();
        if let Ok(t) = space.reflection(&a) {
            return t;
        }
    }
}

/// Product of `count` random reflections over `k(t)`.
pub fn random_t_isometry<R: Rng + ?Sized>(space: &QuadraticSpace<RatFun<Elem>>, count: usize, deg: u32, rng: &mut R) -> Mat<RatFun<Elem>> {
    (0..count).fold(Mat::identity(space.ctx(), space.dim()), |acc, _| acc.mul(&random_t_reflection(space, deg, rng).matrix))
}

/// A random determinant-one isometry over `k(t)`: an even number of reflections in
/// odd characteristic (each reflection has determinant −1), any number in characteristic two.
/// The first reflection is along a constant vector, the others along vectors of `t`-degree `deg`.
pub fn random_t_special<R: Rng + ?Sized>(space: &QuadraticSpace<RatFun<Elem>>, deg: u32, rng: &mut R) -> Mat<RatFun<Elem>> {
    let count = if space.characteristic() == 2 { rng.gen_range(1..=2) } else { 2 };
    let first = random_t_reflection(space, if count == 1 { deg } else { 0 }, rng).matrix;
    (1..count).fold(first, |acc, _| acc.mul(&random_t_reflection(space, deg, rng).matrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::IsotropyStatus;

    #[test]
    fn f2_quartic_is_t4_t_1() {
        let fib = first_quartic_fibration(&Field::prime_field(2).unwrap()).unwrap();
        assert_eq!(fib.q1.to_string(), "x^2 + y*z + z^2");
    }

    #[test]
    fn named_spaces_are_anisotropic() {
        for n in NAMED_SPACES {
            let s = named_space(n).unwrap();
            let c = s.isotropy_search(10);
            assert!(c.is_anisotropic(), "{n}: {:?}", c.status);
            assert_ne!(c.status, IsotropyStatus::Unknown);
        }
    }

    #[test]
    fn fiberwise_factorization_over_f5_and_f2() {
        let mut g = rng(7);
        for p in [5, 2] {
            let fib = first_quartic_fibration(&Field::prime_field(p).unwrap()).unwrap();
            let ps = fib.pencil_space().unwrap();
            for _ in 0..3 {
                let a = random_t_special(&ps.space, 1, &mut g);
                assert!(ps.space.is_isometry(&a));
                let invs = fib.fiberwise_involution_factorization(&a).unwrap();
                assert!(!invs.is_empty());
            }
        }
    }
}
