//! Sparse multivariate polynomials in graded lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::scalar::Scalar;

/// An exponent vector. Ordered graded-lexicographically: total degree first,
/// then the larger exponent in the earliest variable wins.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Mono {
        let mut m = Mono::one(n);
        m.0[i] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        self.0.iter().zip(&o.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Mono)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct RingInner<S: Scalar> {
    base: S::Ctx,
    names: Vec<String>,
}

/// A polynomial ring `S[x_0, ..., x_{n-1}]` with named variables.
pub struct Ring<S: Scalar>(Arc<RingInner<S>>);

impl<S: Scalar> Clone for Ring<S> {
    fn clone(&self) -> Self {
        Ring(self.0.clone())
    }
}

impl<S: Scalar> PartialEq for Ring<S> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.names == other.0.names && self.0.base == other.0.base)
    }
}

impl<S: Scalar> fmt::Debug for Ring<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring{:?}", self.0.names)
    }
}

impl<S: Scalar> Ring<S> {
    pub fn new(base: S::Ctx, names: &[&str]) -> Ring<S> {
        Ring(Arc::new(RingInner { base, names: names.iter().map(|s| s.to_string()).collect() }))
    }

    pub fn base(&self) -> &S::Ctx {
        &self.0.base
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn zero(&self) -> Poly<S> {
        Poly { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> Poly<S> {
        self.constant(S::one(self.base()))
    }

    pub fn constant(&self, c: S) -> Poly<S> {
        self.term(Mono::one(self.nvars()), c)
    }

    pub fn from_i64(&self, n: i64) -> Poly<S> {
        self.constant(S::from_i64(self.base(), n))
    }

    pub fn var(&self, i: usize) -> Poly<S> {
        self.term(Mono::var(self.nvars(), i), S::one(self.base()))
    }

    pub fn vars(&self) -> Vec<Poly<S>> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    pub fn term(&self, m: Mono, c: S) -> Poly<S> {
        assert_eq!(m.0.len(), self.nvars(), "exponent vector has wrong length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ring: self.clone(), terms }
    }

    pub fn from_terms(&self, it: impl IntoIterator<Item = (Mono, S)>) -> Poly<S> {
        let mut p = self.zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }
}

/// A polynomial with coefficients in `S`.
pub struct Poly<S: Scalar> {
    ring: Ring<S>,
    terms: BTreeMap<Mono, S>,
}

impl<S: Scalar> Clone for Poly<S> {
    fn clone(&self) -> Self {
        Poly { ring: self.ring.clone(), terms: self.terms.clone() }
    }
}

impl<S: Scalar> PartialEq for Poly<S> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl<S: Scalar> Eq for Poly<S> {}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn needs_parens(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    body.contains(['+', ' ', '-']) || (body.contains('/') && body.contains(char::is_alphabetic))
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.names();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut mono = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => mono.push(names[i].clone()),
                    _ => mono.push(format!("{}^{}", names[i], e)),
                }
            }
            let mut cs = c.to_string();
            let mut neg = false;
            if !needs_parens(&cs) && cs.starts_with('-') {
                neg = true;
                cs.remove(0);
            }
            if needs_parens(&cs) && !(cs.starts_with('(') && cs.ends_with(')')) {
                cs = format!("({cs})");
            }
            let body = if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono.join("*")
            } else {
                format!("{cs}*{}", mono.join("*"))
            };
            match (k, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Poly<S> {
    pub fn ring(&self) -> &Ring<S> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &S)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Mono) -> S {
        self.terms.get(m).cloned().unwrap_or_else(|| S::zero(self.ring.base()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<S> {
        self.is_constant().then(|| self.coeff(&Mono::one(self.nvars())))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.total_degree();
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Leading term in graded lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &S)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> S {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(|| S::zero(self.ring.base()))
    }

    fn add_term(&mut self, m: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly<S>) -> Poly<S> {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly<S>) -> Poly<S> {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Poly<S> {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, s: &S) -> Poly<S> {
        if s.is_zero() {
            return self.ring.zero();
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))).filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn mul_term(&self, m: &Mono, s: &S) -> Poly<S> {
        if s.is_zero() {
            return self.ring.zero();
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.mul(s))).filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn mul(&self, o: &Poly<S>) -> Poly<S> {
        let (a, b) = if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        let mut r = self.ring.zero();
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                r.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, mut e: u32) -> Poly<S> {
        let mut acc = self.ring.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Evaluates at a point.
    pub fn eval(&self, pt: &[S]) -> S {
        assert_eq!(pt.len(), self.nvars());
        let mut acc = S::zero(self.ring.base());
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in pt.iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul(&x.pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes polynomials (all in one target ring) for the variables.
    ///
    /// Evaluates by Horner's rule one variable at a time, so every product has one
    /// factor among the (small) substituted polynomials.
    pub fn subst(&self, vals: &[Poly<S>]) -> Poly<S> {
        assert_eq!(vals.len(), self.nvars());
        let target = vals.first().map(|v| v.ring.clone()).expect("substitution needs at least one variable");
        self.horner(0, vals, &target)
    }

    fn horner(&self, v: usize, vals: &[Poly<S>], target: &Ring<S>) -> Poly<S> {
        if self.is_zero() {
            return target.zero();
        }
        if v == vals.len() {
            let c = self.terms.values().next().expect("nonzero").clone();
            return target.constant(c);
        }
        let coeffs = self.coeffs_in(v);
        let top = *coeffs.keys().next_back().expect("nonzero");
        let mut acc = target.zero();
        for e in (0..=top).rev() {
            if !acc.is_zero() {
                acc = acc.mul(&vals[v]);
            }
            if let Some(c) = coeffs.get(&e) {
                acc = acc.add(&c.horner(v + 1, vals, target));
            }
        }
        acc
    }

    /// Moves the polynomial into another ring with the same base, mapping variable `i` to `map[i]`.
    pub fn relabel(&self, ring: &Ring<S>, map: &[usize]) -> Poly<S> {
        ring.from_terms(self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; ring.nvars()];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            (Mono(e), c.clone())
        }))
    }

    /// Applies `f` to every coefficient, landing in `ring`.
    pub fn map_coeffs<T: Scalar>(&self, ring: &Ring<T>, f: impl Fn(&S) -> T) -> Poly<T> {
        ring.from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Coefficients with respect to variable `v`, keyed by exponent.
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<u32, Poly<S>> {
        let mut out: BTreeMap<u32, Poly<S>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[v];
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out.entry(e).or_insert_with(|| self.ring.zero()).add_term(m2, c.clone());
        }
        out
    }

    /// Scales so that the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Poly<S> {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly<S>) -> Option<Poly<S>> {
        let (lm, lc) = d.leading()?;
        let inv = lc.inv()?;
        let mut r = self.clone();
        let mut q = self.ring.zero();
        while let Some((m, c)) = r.leading() {
            let t = m.div(lm)?;
            let s = c.mul(&inv);
            r = r.sub(&d.mul_term(&t, &s));
            q.add_term(t, s);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `g` with respect to variable `v`.
    fn prem(&self, g: &Poly<S>, v: usize) -> Poly<S> {
        let dg = g.degree_in(v);
        let lcg = g.coeffs_in(v).remove(&dg).expect("leading coefficient in v");
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dg {
            let dr = r.degree_in(v);
            let lr = r.coeffs_in(v).remove(&dr).unwrap();
            let mut shift = Mono::one(self.nvars());
            shift.0[v] = dr - dg;
            r = r.mul(&lcg).sub(&g.mul(&lr).mul_term(&shift, &S::one(self.ring.base())));
        }
        r
    }

    /// Content with respect to `v`: gcd of the coefficients, a polynomial in the later variables.
    fn content_in(&self, v: usize) -> Poly<S> {
        let mut g = self.ring.zero();
        for c in self.coeffs_in(v).into_values() {
            g = gcd_rec(&g, &c, v + 1);
            if g.is_constant() {
                return self.ring.one();
            }
        }
        g.monic()
    }

    /// Greatest common divisor, normalized to leading coefficient one (zero if both are zero).
    /// Homogeneous inputs in two or more variables are dehomogenized first.
    pub fn gcd(&self, o: &Poly<S>) -> Poly<S> {
        let n = self.nvars();
        if n >= 2 && !self.is_zero() && !o.is_zero() && self.is_homogeneous() && o.is_homogeneous() {
            let last = n - 1;
            let val = |p: &Poly<S>| p.terms.keys().map(|m| m.0[last]).min().unwrap();
            let zpow = val(self).min(val(o));
            let one = self.ring.one();
            let mut chart: Vec<Poly<S>> = self.ring.vars();
            chart[last] = one;
            let g = gcd_rec(&self.subst(&chart), &o.subst(&chart), 0);
            let d = g.total_degree();
            let mut terms = BTreeMap::new();
            for (m, c) in &g.terms {
                let mut m2 = m.clone();
                m2.0[last] = d - m.degree() + zpow;
                terms.insert(m2, c.clone());
            }
            return Poly { ring: self.ring.clone(), terms }.monic();
        }
        gcd_rec(self, o, 0).monic()
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly<S> {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }
}

/// Certifies that `gcd(a, b)` has degree zero in `v` by specializing the other
/// variables at a point where the leading coefficient of `a` in `v` survives:
/// the specialized gcd then has at least the degree of the true one.
fn coprime_in<S: Scalar>(a: &Poly<S>, b: &Poly<S>, v: usize) -> bool {
    let n = a.nvars();
    let others: Vec<usize> = (0..n).filter(|&i| i != v && (a.degree_in(i) > 0 || b.degree_in(i) > 0)).collect();
    if others.is_empty() {
        return false;
    }
    let ctx = a.ring.base();
    let da = a.degree_in(v);
    let lc = a.coeffs_in(v).remove(&da).expect("leading coefficient");
    let mut seed: u64 = 1;
    for trial in 0..6i64 {
        let mut point: Vec<Poly<S>> = a.ring.vars();
        let mut vals = vec![S::zero(ctx); n];
        for (j, &i) in others.iter().enumerate() {
            let c = if others.len() == 1 {
                trial
            } else {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407 + j as u64);
                ((seed >> 33) % 17) as i64
            };
            vals[i] = S::from_i64(ctx, c);
            point[i] = a.ring.constant(vals[i].clone());
        }
        if lc.eval(&vals).is_zero() {
            continue;
        }
        let (sa, sb) = (a.subst(&point), b.subst(&point));
        if gcd_rec(&sa, &sb, v).degree_in(v) == 0 {
            return true;
        }
    }
    false
}

fn gcd_rec<S: Scalar>(a: &Poly<S>, b: &Poly<S>, k: usize) -> Poly<S> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let n = a.nvars();
    let Some(v) = (k..n).find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0) else {
        return a.ring.one();
    };
    if a.degree_in(v) == 0 {
        return gcd_rec(a, &b.content_in(v), v + 1);
    }
    if b.degree_in(v) == 0 {
        return gcd_rec(&a.content_in(v), b, v + 1);
    }
    if coprime_in(a, b, v) {
        return gcd_rec(&a.content_in(v), &b.content_in(v), v + 1);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let gc = gcd_rec(&ca, &cb, v + 1).monic();
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) { (pa, pb) } else { (pb, pa) };
    loop {
        let r = f.prem(&g, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            g = a.ring.one();
            break;
        }
        f = g;
        let c = r.content_in(v);
        g = r.div_exact(&c).expect("content divides").monic();
    }
    if g.degree_in(v) > 0 {
        let c = g.content_in(v);
        g = g.div_exact(&c).expect("content divides");
    }
    gc.mul(&g.monic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Elem, Field};

    fn ring() -> Ring<Elem> {
        Ring::new(Field::rationals(), &["x", "y", "z"])
    }

    #[test]
    fn grlex_order() {
        assert!(Mono(vec![0, 0, 2]) > Mono(vec![1, 0, 0]));
        assert!(Mono(vec![1, 1, 0]) > Mono(vec![1, 0, 1]));
        assert!(Mono(vec![2, 0, 0]) > Mono(vec![0, 2, 0]));
    }

    #[test]
    fn gcd_of_products() {
        let r = ring();
        let [x, y, z] = [r.var(0), r.var(1), r.var(2)];
        let g = x.mul(&y).add(&z.pow(2)).add(&r.from_i64(3));
        let a = g.mul(&x.sub(&y)).mul(&z);
        let b = g.mul(&x.add(&z).pow(2));
        assert_eq!(a.gcd(&b), g.monic());
        assert_eq!(x.gcd(&y), r.one());
        let c = x.mul(&y).mul(&z);
        assert_eq!(c.gcd(&x.pow(2).mul(&y)), x.mul(&y));
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let [x, y, _] = [r.var(0), r.var(1), r.var(2)];
        let a = x.pow(2).sub(&y.pow(2));
        assert_eq!(a.div_exact(&x.sub(&y)), Some(x.add(&y)));
        assert_eq!(a.div_exact(&x), None);
    }

    #[test]
    fn display() {
        let r = ring();
        let [x, y, z] = [r.var(0), r.var(1), r.var(2)];
        let p = x.pow(2).scale(&Field::rationals().from_i64(3)).sub(&y.mul(&z)).add(&r.one());
        assert_eq!(p.to_string(), "3*x^2 - y*z + 1");
    }
}
