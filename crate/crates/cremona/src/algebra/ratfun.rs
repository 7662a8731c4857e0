//! Rational functions `num/den` in reduced form with monic denominator.

use std::fmt;

use super::poly::{Mono, Poly, Ring};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A reduced fraction of polynomials. Equality is structural because the
/// representation is unique: `gcd(num, den) = 1` and `den` has leading coefficient one.
pub struct RatFun<S: Scalar> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> Clone for RatFun<S> {
    fn clone(&self) -> Self {
        RatFun { num: self.num.clone(), den: self.den.clone() }
    }
}

impl<S: Scalar> PartialEq for RatFun<S> {
    fn eq(&self, o: &Self) -> bool {
        self.num == o.num && self.den == o.den
    }
}
impl<S: Scalar> Eq for RatFun<S> {}

impl<S: Scalar> fmt::Debug for RatFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for RatFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some() {
            return write!(f, "{}", self.num);
        }
        let n = self.num.to_string();
        let d = self.den.to_string();
        let wrap = |s: String, multi: bool| if multi { format!("({s})") } else { s };
        write!(f, "{}/{}", wrap(n, self.num.nterms() > 1), wrap(d, self.den.nterms() > 1 || self.den.leading().is_some_and(|(m, _)| m.degree() > 1)))
    }
}

impl<S: Scalar> RatFun<S> {
    /// Reduces `num/den`.
    pub fn new(num: Poly<S>, den: Poly<S>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<S>, den: Poly<S>) -> Self {
        if num.is_zero() {
            let r = den.ring().clone();
            return RatFun { num: r.zero(), den: r.one() };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let inv = den.leading_coeff().inv().expect("nonzero denominator");
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        let one = p.ring().one();
        RatFun { num: p, den: one }
    }

    pub fn numer(&self) -> &Poly<S> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<S> {
        &self.den
    }

    pub fn ring(&self) -> &Ring<S> {
        self.num.ring()
    }

    /// The polynomial, when the denominator is one.
    pub fn as_poly(&self) -> Option<&Poly<S>> {
        self.den.as_constant().map(|_| &self.num)
    }

    pub fn as_constant(&self) -> Option<S> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    /// Evaluates at a point; `None` at a pole.
    pub fn eval(&self, pt: &[S]) -> Option<S> {
        self.num.eval(pt).div(&self.den.eval(pt))
    }

    /// Applies `f` to all coefficients (for example a field automorphism).
    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        let r = self.ring();
        Self::reduce(self.num.map_coeffs(r, &f), self.den.map_coeffs(r, &f))
    }

    /// Substitutes rational functions (all in one target ring) for the variables.
    pub fn subst(&self, vals: &[RatFun<S>]) -> Result<Self> {
        let (n, nd) = subst_poly(&self.num, vals);
        let (d, dd) = subst_poly(&self.den, vals);
        // num/den = (n/nd)/(d/dd)
        RatFun::new(n.mul(&dd), d.mul(&nd))
    }
}

/// `p(vals)` as an unreduced fraction over a common denominator.
pub fn subst_poly<S: Scalar>(p: &Poly<S>, vals: &[RatFun<S>]) -> (Poly<S>, Poly<S>) {
    let target = vals[0].ring().clone();
    let n = vals.len();
    let maxe: Vec<u32> = (0..n).map(|i| p.degree_in(i)).collect();
    let mut num_pows: Vec<Vec<Poly<S>>> = Vec::with_capacity(n);
    let mut den_pows: Vec<Vec<Poly<S>>> = Vec::with_capacity(n);
    for (i, v) in vals.iter().enumerate() {
        let mut a = vec![target.one()];
        let mut b = vec![target.one()];
        for _ in 0..maxe[i] {
            a.push(a.last().unwrap().mul(&v.num));
            b.push(b.last().unwrap().mul(&v.den));
        }
        num_pows.push(a);
        den_pows.push(b);
    }
    let mut acc = target.zero();
    for (m, c) in p.terms() {
        let mut t = target.constant(c.clone());
        for i in 0..n {
            let e = m.0[i] as usize;
            let top = maxe[i] as usize;
            if e > 0 {
                t = t.mul(&num_pows[i][e]);
            }
            if top > e && !vals[i].den.is_constant() {
                t = t.mul(&den_pows[i][top - e]);
            } else if top > e {
                t = t.scale(&vals[i].den.leading_coeff().pow((top - e) as u64));
            }
        }
        acc = acc.add(&t);
    }
    let mut den = target.one();
    for i in 0..n {
        den = den.mul(&den_pows[i][maxe[i] as usize]);
    }
    (acc, den)
}

impl<S: Scalar> Scalar for RatFun<S> {
    type Ctx = Ring<S>;

    fn ctx(&self) -> Ring<S> {
        self.num.ring().clone()
    }

    fn zero(ctx: &Ring<S>) -> Self {
        RatFun { num: ctx.zero(), den: ctx.one() }
    }

    fn one(ctx: &Ring<S>) -> Self {
        RatFun { num: ctx.one(), den: ctx.one() }
    }

    fn from_i64(ctx: &Ring<S>, n: i64) -> Self {
        RatFun::from_poly(ctx.from_i64(n))
    }

    fn characteristic(ctx: &Ring<S>) -> u64 {
        S::characteristic(ctx.base())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        Self::reduce(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx());
        }
        let g1 = if self.num.is_constant() || o.den.is_constant() { self.num.ring().one() } else { self.num.gcd(&o.den) };
        let g2 = if o.num.is_constant() || self.den.is_constant() { self.num.ring().one() } else { o.num.gcd(&self.den) };
        let a = self.num.div_exact(&g1).unwrap();
        let d = o.den.div_exact(&g1).unwrap();
        let c = o.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        let num = a.mul(&c);
        let den = b.mul(&d);
        let inv = den.leading_coeff().inv().unwrap();
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }

    fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let inv = self.num.leading_coeff().inv()?;
        Some(RatFun { num: self.den.scale(&inv), den: self.num.scale(&inv) })
    }
}

/// Convenience constructors for rational function fields.
impl<S: Scalar> Ring<S> {
    pub fn rf_var(&self, i: usize) -> RatFun<S> {
        RatFun::from_poly(self.var(i))
    }

    pub fn rf_const(&self, c: S) -> RatFun<S> {
        RatFun::from_poly(self.constant(c))
    }

    pub fn rf_term(&self, m: Mono, c: S) -> RatFun<S> {
        RatFun::from_poly(self.term(m, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Elem, Field};

    #[test]
    fn normalization_examples() {
        let q = Field::rationals();
        let r: Ring<Elem> = Ring::new(q.clone(), &["x"]);
        let x = r.var(0);
        let f = RatFun::new(x.pow(2).sub(&r.one()), x.sub(&r.one())).unwrap();
        assert_eq!(f, RatFun::from_poly(x.add(&r.one())));
        let z = RatFun::new(r.zero(), x.clone()).unwrap();
        assert_eq!(z, RatFun::zero(&r));
        assert_eq!(z.denom(), &r.one());
        let h = RatFun::new(x.scale(&q.from_i64(2)), r.from_i64(4)).unwrap();
        assert_eq!(h.numer(), &x.scale(&q.parse_coef("1/2").unwrap()));
        assert!(RatFun::new(x.clone(), r.zero()).is_err());
    }

    #[test]
    fn arithmetic_cross_check() {
        let q = Field::rationals();
        let r: Ring<Elem> = Ring::new(q.clone(), &["x", "y"]);
        let (x, y) = (r.var(0), r.var(1));
        let a = RatFun::new(x.add(&y), x.sub(&y)).unwrap();
        let b = RatFun::new(x.clone(), y.add(&r.one())).unwrap();
        let s = a.add(&b);
        let expected = RatFun::new(x.add(&y).mul(&y.add(&r.one())).add(&x.mul(&x.sub(&y))), x.sub(&y).mul(&y.add(&r.one()))).unwrap();
        assert_eq!(s, expected);
        assert_eq!(a.mul(&a.inv().unwrap()), RatFun::one(&r));
        assert_eq!(s.sub(&b), a);
    }
}
