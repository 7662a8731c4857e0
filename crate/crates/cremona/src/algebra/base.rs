//! Coefficients over the prime field: `F_p` residues or rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A coefficient of the prime field. The variant always matches the
/// characteristic of the owning field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Coef {
    M(u64),
    Q(BigRational),
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::M(v) => write!(f, "{v}"),
            Coef::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

/// Arithmetic of the prime field `F_p` (`p > 0`) or `Q` (`p == 0`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Prime(pub u64);

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p == 0 || (is_prime(p) && p < (1u64 << 31)) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidField(format!("characteristic {p} is not 0 or a prime below 2^31")))
        }
    }

    pub fn zero(self) -> Coef {
        self.from_i64(0)
    }

    pub fn one(self) -> Coef {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Coef {
        if self.0 == 0 {
            Coef::Q(BigRational::from_integer(n.into()))
        } else {
            Coef::M(n.rem_euclid(self.0 as i64) as u64)
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Coef {
        if self.0 == 0 {
            Coef::Q(BigRational::from_integer(n.clone()))
        } else {
            let r = n.mod_floor(&BigInt::from(self.0));
            Coef::M(r.to_u64().expect("residue fits"))
        }
    }

    pub fn from_rational(self, r: &BigRational) -> Result<Coef> {
        if self.0 == 0 {
            return Ok(Coef::Q(r.clone()));
        }
        let n = self.from_bigint(r.numer());
        let d = self.from_bigint(r.denom());
        self.inv(&d).map(|di| self.mul(&n, &di)).ok_or(Error::DivisionByZero)
    }

    pub fn is_zero(self, a: &Coef) -> bool {
        match a {
            Coef::M(v) => *v == 0,
            Coef::Q(r) => r.is_zero(),
        }
    }

    pub fn add(self, a: &Coef, b: &Coef) -> Coef {
        match (a, b) {
            (Coef::M(x), Coef::M(y)) => Coef::M((x + y) % self.0),
            (Coef::Q(x), Coef::Q(y)) => Coef::Q(x + y),
            _ => panic!("mixed coefficient kinds"),
        }
    }

    pub fn neg(self, a: &Coef) -> Coef {
        match a {
            Coef::M(x) => Coef::M((self.0 - x) % self.0),
            Coef::Q(x) => Coef::Q(-x),
        }
    }

    pub fn sub(self, a: &Coef, b: &Coef) -> Coef {
        self.add(a, &self.neg(b))
    }

    pub fn mul(self, a: &Coef, b: &Coef) -> Coef {
        match (a, b) {
            (Coef::M(x), Coef::M(y)) => Coef::M(((*x as u128 * *y as u128) % self.0 as u128) as u64),
            (Coef::Q(x), Coef::Q(y)) => Coef::Q(x * y),
            _ => panic!("mixed coefficient kinds"),
        }
    }

    pub fn inv(self, a: &Coef) -> Option<Coef> {
        if self.is_zero(a) {
            return None;
        }
        match a {
            Coef::M(x) => {
                let (mut r0, mut r1) = (self.0 as i128, *x as i128);
                let (mut s0, mut s1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                Some(Coef::M(s0.rem_euclid(self.0 as i128) as u64))
            }
            Coef::Q(x) => Some(Coef::Q(x.recip())),
        }
    }

    /// Parses `"n"`, `"-n"` or `"n/d"`.
    pub fn parse(self, s: &str) -> Result<Coef> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| Error::parse("coefficient", format!("'{s}' is not an integer or num/den")))?;
        let d: BigInt = d.parse().map_err(|_| Error::parse("coefficient", format!("'{s}' has a bad denominator")))?;
        if d.is_zero() {
            return Err(Error::parse("coefficient", format!("'{s}' has zero denominator")));
        }
        self.from_rational(&BigRational::new(n, d))
    }

    /// The rational value, when the characteristic is zero.
    pub fn as_rational(a: &Coef) -> Option<&BigRational> {
        match a {
            Coef::Q(r) => Some(r),
            Coef::M(_) => None,
        }
    }
}

/// Integer square root test: returns `Some(r)` with `r*r == n` for `n >= 0`.
pub(crate) fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square test for rationals: `Some(s)` with `s*s == x`.
pub(crate) fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    let n = exact_sqrt(x.numer())?;
    let d = exact_sqrt(x.denom())?;
    Some(BigRational::new(n, d))
}

/// Positive divisors of `n != 0`, or `None` when `|n|` is too large to trial divide.
pub(crate) fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let m = n.abs().to_u64()?;
    if m == 0 || m > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(BigInt::from(d));
            if d * d != m {
                out.push(BigInt::from(m / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}
