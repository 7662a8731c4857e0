//! Towers of simple extensions over `F_p` or `Q`.
//!
//! An element of level `l` is stored as `deg_l` blocks of level `l-1`
//! coefficients, so the flat coefficient vector of the top level has length
//! `prod deg_i` and every lower level is a prefix of it.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::base::{divisors, exact_sqrt, rational_sqrt, Coef, Prime};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Step {
    /// Monic; entry `j` is the coefficient of `t^j` as a level-(i-1) vector.
    poly: Vec<Vec<Coef>>,
    trusted: bool,
}

impl Step {
    fn deg(&self) -> usize {
        self.poly.len() - 1
    }
}

/// A field automorphism, given by the image of every step generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisGen {
    pub name: String,
    /// `images[i]` is the image of the generator of step `i`, as a level-(i+1) vector.
    images: Vec<Vec<Coef>>,
}

#[derive(Debug)]
struct Inner {
    prime: Prime,
    steps: Vec<Step>,
    dims: Vec<usize>,
    names: Vec<String>,
    galois: Vec<GaloisGen>,
    galois_complete: bool,
}

/// A field tower. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.prime == other.0.prime && self.0.steps == other.0.steps)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.describe())
    }
}

/// An element of a [`Field`].
#[derive(Clone)]
pub struct Elem {
    field: Field,
    c: Vec<Coef>,
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}
impl Eq for Elem {}

impl std::hash::Hash for Elem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = &self.field.0;
        let mut terms = Vec::new();
        for (idx, c) in self.c.iter().enumerate() {
            if inner.prime.is_zero(c) {
                continue;
            }
            let mut mono = Vec::new();
            for (l, step) in inner.steps.iter().enumerate() {
                let e = (idx / inner.dims[l]) % step.deg();
                match e {
                    0 => {}
                    1 => mono.push(inner.names[l].clone()),
                    _ => mono.push(format!("{}^{}", inner.names[l], e)),
                }
            }
            let cs = c.to_string();
            let term = if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono.join("*")
            } else if cs.contains('/') || cs.starts_with('-') {
                format!("({cs})*{}", mono.join("*"))
            } else {
                format!("{cs}*{}", mono.join("*"))
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else if terms.len() == 1 {
            write!(f, "{}", terms[0])
        } else {
            write!(f, "({})", terms.join(" + "))
        }
    }
}

fn all_zero(p: Prime, v: &[Coef]) -> bool {
    v.iter().all(|c| p.is_zero(c))
}

/// Solves `a x = b` over the prime field; `a` is given by rows.
pub(crate) fn solve_base(p: Prime, mut a: Vec<Vec<Coef>>, mut b: Vec<Coef>) -> Option<Vec<Coef>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !p.is_zero(&a[r][col]))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = p.inv(&a[col][col])?;
        for k in col..n {
            a[col][k] = p.mul(&a[col][k], &inv);
        }
        b[col] = p.mul(&b[col], &inv);
        for r in 0..n {
            if r != col && !p.is_zero(&a[r][col]) {
                let f = a[r][col].clone();
                for k in col..n {
                    let t = p.mul(&f, &a[col][k]);
                    a[r][k] = p.sub(&a[r][k], &t);
                }
                let t = p.mul(&f, &b[col]);
                b[r] = p.sub(&b[r], &t);
            }
        }
    }
    Some(b)
}

impl Inner {
    fn zero_l(&self, l: usize) -> Vec<Coef> {
        vec![self.prime.zero(); self.dims[l]]
    }

    fn one_l(&self, l: usize) -> Vec<Coef> {
        let mut v = self.zero_l(l);
        v[0] = self.prime.one();
        v
    }

    fn pad(&self, l: usize, x: &[Coef]) -> Vec<Coef> {
        let mut v = x.to_vec();
        v.resize(self.dims[l], self.prime.zero());
        v
    }

    fn add_v(&self, a: &[Coef], b: &[Coef]) -> Vec<Coef> {
        a.iter().zip(b).map(|(x, y)| self.prime.add(x, y)).collect()
    }

    fn sub_v(&self, a: &[Coef], b: &[Coef]) -> Vec<Coef> {
        a.iter().zip(b).map(|(x, y)| self.prime.sub(x, y)).collect()
    }

    fn mul_l(&self, l: usize, a: &[Coef], b: &[Coef]) -> Vec<Coef> {
        if l == 0 {
            return vec![self.prime.mul(&a[0], &b[0])];
        }
        let n = self.dims[l - 1];
        let step = &self.steps[l - 1];
        let d = step.deg();
        let mut prod: Vec<Vec<Coef>> = vec![self.zero_l(l - 1); 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * n..(i + 1) * n];
            if all_zero(self.prime, ai) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * n..(j + 1) * n];
                if all_zero(self.prime, bj) {
                    continue;
                }
                let t = self.mul_l(l - 1, ai, bj);
                prod[i + j] = self.add_v(&prod[i + j], &t);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let t = std::mem::replace(&mut prod[k], self.zero_l(l - 1));
            if all_zero(self.prime, &t) {
                continue;
            }
            for j in 0..d {
                let s = self.mul_l(l - 1, &t, &step.poly[j]);
                prod[k - d + j] = self.sub_v(&prod[k - d + j], &s);
            }
        }
        prod.truncate(d);
        prod.concat()
    }

    fn pow_l(&self, l: usize, x: &[Coef], mut e: u64) -> Vec<Coef> {
        let mut acc = self.one_l(l);
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_l(l, &acc, &b);
            }
            b = self.mul_l(l, &b, &b);
            e >>= 1;
        }
        acc
    }

    fn inv_l(&self, l: usize, a: &[Coef]) -> Option<Vec<Coef>> {
        if all_zero(self.prime, a) {
            return None;
        }
        if l == 0 {
            return self.prime.inv(&a[0]).map(|c| vec![c]);
        }
        let n = self.dims[l];
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = self.zero_l(l);
            e[j] = self.prime.one();
            cols.push(self.mul_l(l, a, &e));
        }
        let rows: Vec<Vec<Coef>> = (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect();
        solve_base(self.prime, rows, self.one_l(l))
    }

    /// Generator of step `i` (0-based) as a level-(i+1) vector.
    fn gen_l(&self, i: usize) -> Vec<Coef> {
        if self.steps[i].deg() == 1 {
            return self.steps[i].poly[0].iter().map(|c| self.prime.neg(c)).collect();
        }
        let mut v = self.zero_l(i + 1);
        v[self.dims[i]] = self.prime.one();
        v
    }

    fn apply_l(&self, g: &GaloisGen, l: usize, x: &[Coef]) -> Vec<Coef> {
        if l == 0 {
            return x.to_vec();
        }
        let n = self.dims[l - 1];
        let d = self.steps[l - 1].deg();
        let img = &g.images[l - 1];
        let mut res = self.zero_l(l);
        let mut pw = self.one_l(l);
        for j in 0..d {
            let blk = &x[j * n..(j + 1) * n];
            if !all_zero(self.prime, blk) {
                let b = self.pad(l, &self.apply_l(g, l - 1, blk));
                let t = self.mul_l(l, &b, &pw);
                res = self.add_v(&res, &t);
            }
            if j + 1 < d {
                pw = self.mul_l(l, &pw, img);
            }
        }
        res
    }

    /// Evaluates step polynomial `i` (coefficients conjugated by `g` if given) at a level-(i+1) point.
    fn eval_step(&self, i: usize, g: Option<&GaloisGen>, x: &[Coef]) -> Vec<Coef> {
        let l = i + 1;
        let mut acc = self.zero_l(l);
        for c in self.steps[i].poly.iter().rev() {
            acc = self.mul_l(l, &acc, x);
            let c = match g {
                Some(g) => self.apply_l(g, i, c),
                None => c.clone(),
            };
            acc = self.add_v(&acc, &self.pad(l, &c));
        }
        acc
    }
}

const DEFAULT_NAMES: [&str; 6] = ["r1", "r2", "r3", "r4", "r5", "r6"];

impl Field {
    /// `F_p` for prime `p`, or `Q` for `p = 0`.
    pub fn base(p: u64) -> Result<Field> {
        let prime = Prime::new(p)?;
        let mut inner = Inner { prime, steps: vec![], dims: vec![1], names: vec![], galois: vec![], galois_complete: true };
        if p != 0 {
            inner.galois.push(GaloisGen { name: "frob".into(), images: vec![] });
        }
        Ok(Field(Arc::new(inner)))
    }

    pub fn rationals() -> Field {
        Field::base(0).expect("Q is valid")
    }

    pub fn prime_field(p: u64) -> Result<Field> {
        if p == 0 {
            return Err(Error::InvalidField("characteristic 0 is not a prime field F_p".into()));
        }
        Field::base(p)
    }

    /// Builds a tower from base characteristic and step coefficient lists.
    /// Each coefficient is a flat coefficient vector over the field built so far
    /// (shorter vectors are padded with zeros).
    pub fn from_steps(p: u64, steps: &[Vec<Vec<Coef>>]) -> Result<Field> {
        let mut f = Field::base(p)?;
        for s in steps {
            let coeffs = s.iter().map(|c| f.elem(c.clone())).collect::<Result<Vec<_>>>()?;
            f = f.extend(&coeffs)?;
        }
        Ok(f)
    }

    fn inner(&self) -> &Inner {
        &self.0
    }

    pub fn prime(&self) -> Prime {
        self.0.prime
    }

    pub fn characteristic(&self) -> u64 {
        self.0.prime.0
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        *self.0.dims.last().unwrap()
    }

    pub fn num_steps(&self) -> usize {
        self.0.steps.len()
    }

    pub fn step_degree(&self, i: usize) -> usize {
        self.0.steps[i].deg()
    }

    pub fn step_trusted(&self, i: usize) -> bool {
        self.0.steps[i].trusted
    }

    /// Coefficients of step `i` as elements of this field, low degree first.
    pub fn step_poly(&self, i: usize) -> Vec<Elem> {
        self.0.steps[i].poly.iter().map(|c| self.mk(self.0.pad(self.0.dims.len() - 1, c))).collect()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// Number of elements, for finite fields small enough to count in `u128`.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        (self.characteristic() as u128).checked_pow(self.degree() as u32)
    }

    pub fn describe(&self) -> String {
        let base = if self.is_finite() { format!("F_{}", self.characteristic()) } else { "Q".to_string() };
        if self.0.steps.is_empty() {
            return base;
        }
        let steps: Vec<String> = (0..self.num_steps())
            .map(|i| {
                let coeffs: Vec<String> = self.step_poly(i).iter().map(|c| c.to_string()).collect();
                format!("{}: [{}]", self.0.names[i], coeffs.join(", "))
            })
            .collect();
        format!("{base}({})", steps.join("; "))
    }

    fn mk(&self, c: Vec<Coef>) -> Elem {
        Elem { field: self.clone(), c }
    }

    pub fn zero(&self) -> Elem {
        self.mk(self.0.zero_l(self.0.dims.len() - 1))
    }

    pub fn one(&self) -> Elem {
        self.mk(self.0.one_l(self.0.dims.len() - 1))
    }

    pub fn from_coef(&self, c: Coef) -> Elem {
        let mut e = self.zero();
        e.c[0] = c;
        e
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_coef(self.prime().from_i64(n))
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        Ok(self.from_coef(self.prime().from_rational(r)?))
    }

    /// Parses a base-field constant `"n"` or `"n/d"`.
    pub fn parse_coef(&self, s: &str) -> Result<Elem> {
        Ok(self.from_coef(self.prime().parse(s)?))
    }

    /// An element from its flat coefficient vector (padded with zeros).
    pub fn elem(&self, mut c: Vec<Coef>) -> Result<Elem> {
        if c.len() > self.degree() {
            return Err(Error::InvalidField(format!("coefficient vector of length {} exceeds field degree {}", c.len(), self.degree())));
        }
        let p = self.prime();
        for x in &c {
            let ok = matches!((x, p.0), (Coef::Q(_), 0)) || matches!(x, Coef::M(v) if p.0 != 0 && *v < p.0);
            if !ok {
                return Err(Error::InvalidField(format!("coefficient {x} does not belong to the prime field")));
            }
        }
        c.resize(self.degree(), p.zero());
        Ok(self.mk(c))
    }

    /// The generator of step `i` (0-based).
    pub fn gen(&self, i: usize) -> Elem {
        self.mk(self.0.pad(self.0.dims.len() - 1, &self.0.gen_l(i)))
    }

    pub fn galois_generators(&self) -> &[GaloisGen] {
        &self.0.galois
    }

    /// Whether the stored generators are known to generate the full automorphism group
    /// over the prime field.
    pub fn galois_complete(&self) -> bool {
        self.0.galois_complete
    }

    pub fn galois(&self, name: &str) -> Option<&GaloisGen> {
        self.0.galois.iter().find(|g| g.name == name)
    }

    /// Applies an automorphism.
    pub fn apply(&self, g: &GaloisGen, x: &Elem) -> Elem {
        let top = self.0.dims.len() - 1;
        if g.images.len() != top {
            // Frobenius of the bare prime field, or an automorphism of a different tower.
            assert!(top == 0, "automorphism does not belong to this field");
            return x.clone();
        }
        self.mk(self.0.apply_l(g, top, &x.c))
    }

    /// `a ∘ b`.
    pub fn compose_auto(&self, a: &GaloisGen, b: &GaloisGen, name: &str) -> GaloisGen {
        let images = (0..self.num_steps()).map(|i| self.0.apply_l(a, i + 1, &b.images[i])).collect();
        GaloisGen { name: name.to_string(), images }
    }

    pub fn identity_auto(&self) -> GaloisGen {
        GaloisGen { name: "id".into(), images: (0..self.num_steps()).map(|i| self.0.gen_l(i)).collect() }
    }

    pub fn is_identity_auto(&self, g: &GaloisGen) -> bool {
        (0..self.num_steps()).all(|i| g.images[i] == self.0.gen_l(i))
    }

    /// Image of the generator of step `i` under `g`, as an element of this field.
    pub fn auto_image(&self, g: &GaloisGen, i: usize) -> Elem {
        self.mk(self.0.pad(self.0.dims.len() - 1, &g.images[i]))
    }

    /// Checks that `g` maps every step root to a root of the conjugated step polynomial.
    pub fn verify_auto(&self, g: &GaloisGen) -> bool {
        if g.images.len() != self.num_steps() {
            return false;
        }
        (0..self.num_steps()).all(|i| all_zero(self.prime(), &self.0.eval_step(i, Some(g), &g.images[i])))
    }

    /// True if `sub` is a prefix of this tower.
    pub fn extends(&self, sub: &Field) -> bool {
        sub.prime() == self.prime()
            && sub.num_steps() <= self.num_steps()
            && sub.0.steps[..] == self.0.steps[..sub.num_steps()]
    }

    /// Embeds an element of a prefix subfield.
    pub fn embed(&self, x: &Elem) -> Result<Elem> {
        if !self.extends(&x.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.mk(self.0.pad(self.0.dims.len() - 1, &x.c)))
    }

    /// The element as a member of the prefix subfield `sub`, if it lies there.
    pub fn restrict(&self, x: &Elem, sub: &Field) -> Option<Elem> {
        if !self.extends(sub) {
            return None;
        }
        let n = sub.degree();
        if !all_zero(self.prime(), &x.c[n..]) {
            return None;
        }
        Some(sub.mk(x.c[..n].to_vec()))
    }

    /// Every element, for finite fields with at most `limit` elements.
    pub fn elements(&self, limit: u128) -> Result<Vec<Elem>> {
        let q = self.order().filter(|&q| q <= limit).ok_or_else(|| Error::Invalid(format!("{} is too large to enumerate", self.describe())))?;
        let p = self.characteristic();
        let n = self.degree();
        let mut out = Vec::with_capacity(q as usize);
        for mut idx in 0..q {
            let mut c = Vec::with_capacity(n);
            for _ in 0..n {
                c.push(Coef::M((idx % p as u128) as u64));
                idx /= p as u128;
            }
            out.push(self.mk(c));
        }
        Ok(out)
    }

    /// A random element: uniform over finite fields, small height over `Q`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        let p = self.characteristic();
        let c = (0..self.degree())
            .map(|_| {
                if p == 0 {
                    let n: i64 = rng.gen_range(-4..=4);
                    let d: i64 = rng.gen_range(1..=3);
                    Coef::Q(BigRational::new(n.into(), d.into()))
                } else {
                    Coef::M(rng.gen_range(0..p))
                }
            })
            .collect();
        self.mk(c)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let x = self.random(rng);
            if !Scalar::is_zero(&x) {
                return x;
            }
        }
    }

    /// Adjoins a root of `poly` (coefficients low degree first), checking irreducibility.
    pub fn extend(&self, poly: &[Elem]) -> Result<Field> {
        self.extend_named(poly, None, false)
    }

    /// Adjoins a root without an irreducibility proof. Use only when irreducibility is known.
    pub fn extend_trusted(&self, poly: &[Elem]) -> Result<Field> {
        self.extend_named(poly, None, true)
    }

    pub fn extend_named(&self, poly: &[Elem], name: Option<&str>, trusted: bool) -> Result<Field> {
        let mut poly: Vec<Elem> = poly.to_vec();
        while poly.last().is_some_and(|c| c.is_zero()) {
            poly.pop();
        }
        if poly.len() < 2 {
            return Err(Error::InvalidField("step polynomial must have degree at least 1".into()));
        }
        if poly.iter().any(|c| c.field != *self) {
            return Err(Error::FieldMismatch);
        }
        let lead = poly.last().unwrap().inv().unwrap();
        let monic: Vec<Elem> = poly.iter().map(|c| c.mul(&lead)).collect();
        if !trusted {
            self.check_irreducible(&monic)?;
        }
        let inner = self.inner();
        let mut dims = inner.dims.clone();
        dims.push(self.degree() * (monic.len() - 1));
        let mut steps = inner.steps.clone();
        steps.push(Step { poly: monic.iter().map(|c| c.c.clone()).collect(), trusted });
        let mut names = inner.names.clone();
        names.push(name.map(str::to_string).unwrap_or_else(|| DEFAULT_NAMES.get(steps.len() - 1).map(|s| s.to_string()).unwrap_or_else(|| format!("r{}", steps.len()))));
        let mut next = Inner { prime: inner.prime, steps, dims, names, galois: vec![], galois_complete: false };
        derive_galois(&mut next);
        let f = Field(Arc::new(next));
        for g in f.galois_generators() {
            if !f.verify_auto(g) {
                return Err(Error::Verification(format!("derived automorphism {} does not permute step roots", g.name)));
            }
        }
        Ok(f)
    }

    /// Renames step generators (used for display only).
    pub fn with_names(&self, names: &[&str]) -> Field {
        let inner = self.inner();
        let mut n = inner.names.clone();
        for (i, s) in names.iter().enumerate().take(n.len()) {
            n[i] = s.to_string();
        }
        Field(Arc::new(Inner {
            prime: inner.prime,
            steps: inner.steps.clone(),
            dims: inner.dims.clone(),
            names: n,
            galois: inner.galois.clone(),
            galois_complete: inner.galois_complete,
        }))
    }

    /// Renames an automorphism generator.
    pub fn with_galois_name(&self, old: &str, new: &str) -> Field {
        let inner = self.inner();
        let galois = inner.galois.iter().cloned().map(|mut g| {
            if g.name == old {
                g.name = new.to_string();
            }
            g
        });
        Field(Arc::new(Inner {
            prime: inner.prime,
            steps: inner.steps.clone(),
            dims: inner.dims.clone(),
            names: inner.names.clone(),
            galois: galois.collect(),
            galois_complete: inner.galois_complete,
        }))
    }

    fn check_irreducible(&self, monic: &[Elem]) -> Result<()> {
        let deg = monic.len() - 1;
        if deg == 1 {
            return Ok(());
        }
        if self.is_finite() {
            if deg > 4 {
                return Err(Error::Uncertifiable { degree: deg });
            }
            let elems = self.elements(1 << 20).map_err(|_| Error::Uncertifiable { degree: deg })?;
            for r in &elems {
                if uni_eval(monic, r).is_zero() {
                    return Err(Error::Reducible { factor: format!("t - {r}") });
                }
            }
            if deg == 4 {
                for u in &elems {
                    for v in &elems {
                        let q = [v.clone(), u.clone(), self.one()];
                        if uni_rem(monic, &q).iter().all(|c| c.is_zero()) {
                            return Err(Error::Reducible { factor: format!("t^2 + {u}*t + {v}") });
                        }
                    }
                }
            }
            return Ok(());
        }
        let rat: Option<Vec<BigRational>> = monic.iter().map(|c| c.as_rational()).collect();
        if self.num_steps() == 0 {
            let rat = rat.expect("elements of Q are rational");
            if deg > 4 {
                return Err(Error::Uncertifiable { degree: deg });
            }
            return rational_irreducible(&rat);
        }
        // Quadratic over a multiquadratic tower with rational data: Kummer theory.
        if let Some(rat) = rat {
            if deg == 2 {
                let mut discs = Vec::new();
                for i in 0..self.num_steps() {
                    let sp = self.step_poly(i);
                    let r: Option<Vec<BigRational>> = sp.iter().map(|c| c.as_rational()).collect();
                    match r {
                        Some(r) if r.len() == 3 => discs.push(&r[1] * &r[1] - BigRational::from_integer(4.into()) * &r[0]),
                        _ => return Err(Error::Uncertifiable { degree: deg }),
                    }
                }
                let delta = &rat[1] * &rat[1] - BigRational::from_integer(4.into()) * &rat[0];
                for mask in 0u32..(1 << discs.len()) {
                    let mut x = delta.clone();
                    for (j, d) in discs.iter().enumerate() {
                        if mask >> j & 1 == 1 {
                            x *= d;
                        }
                    }
                    if rational_sqrt(&x).is_some() {
                        return Err(Error::Reducible { factor: format!("discriminant {delta} is a square in the field below") });
                    }
                }
                return Ok(());
            }
        }
        Err(Error::Uncertifiable { degree: deg })
    }
}

fn derive_galois(inner: &mut Inner) {
    let n = inner.steps.len();
    if inner.prime.0 != 0 {
        let p = inner.prime.0;
        let images = (0..n).map(|i| inner.pow_l(i + 1, &inner.gen_l(i), p)).collect();
        inner.galois = vec![GaloisGen { name: "frob".into(), images }];
        inner.galois_complete = true;
        return;
    }
    let quadratic_rational = inner.steps.iter().all(|s| s.deg() <= 2 && s.poly.iter().all(|c| all_zero(inner.prime, &c[1..])));
    if !quadratic_rational {
        inner.galois = vec![];
        inner.galois_complete = false;
        return;
    }
    let mut gens = Vec::new();
    for (s, step) in inner.steps.iter().enumerate() {
        if step.deg() != 2 {
            continue;
        }
        let images = (0..n)
            .map(|i| {
                let g = inner.gen_l(i);
                if i != s {
                    return g;
                }
                // theta -> -b - theta
                let b = inner.pad(i + 1, &step.poly[1]);
                let nb: Vec<Coef> = b.iter().map(|c| inner.prime.neg(c)).collect();
                inner.sub_v(&nb, &g)
            })
            .collect();
        gens.push(GaloisGen { name: format!("s{}", s + 1), images });
    }
    inner.galois = gens;
    inner.galois_complete = true;
}

fn uni_eval(p: &[Elem], x: &Elem) -> Elem {
    let mut acc = x.zero_like();
    for c in p.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

/// Remainder of `a` modulo the monic `b`.
fn uni_rem(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lc = r.pop().unwrap();
        let shift = r.len() - db;
        for j in 0..db {
            r[shift + j] = r[shift + j].sub(&lc.mul(&b[j]));
        }
    }
    r
}

/// Irreducibility over `Q` of a monic polynomial of degree 2..=4.
fn rational_irreducible(monic: &[BigRational]) -> Result<()> {
    let deg = monic.len() - 1;
    // Clear denominators and substitute t = s / L to get a monic integer polynomial.
    let l = monic.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<BigInt> = monic.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    // ints is L*f with leading coefficient L; e_i = ints_i * L^(deg-1-i).
    let mut e = Vec::with_capacity(deg + 1);
    for (i, c) in ints.iter().enumerate() {
        if i == deg {
            e.push(BigInt::one());
        } else {
            e.push(c * num_traits::pow(l.clone(), deg - 1 - i));
        }
    }
    let scale = |s: &BigInt| BigRational::new(s.clone(), l.clone());
    let eval = |x: &BigInt| e.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    if e[0].is_zero() {
        return Err(Error::Reducible { factor: "t".into() });
    }
    let divs = divisors(&e[0]).ok_or(Error::Uncertifiable { degree: deg })?;
    for d in &divs {
        for s in [d.clone(), -d.clone()] {
            if eval(&s).is_zero() {
                return Err(Error::Reducible { factor: format!("t - {}", scale(&s)) });
            }
        }
    }
    if deg == 4 {
        for d in &divs {
            for v in [d.clone(), -d.clone()] {
                let w = &e[0] / &v;
                // u + u' = e3, u u' = e2 - v - w
                let sum = &e[3];
                let prod = &e[2] - &v - &w;
                let disc = sum * sum - BigInt::from(4) * &prod;
                if let Some(r) = exact_sqrt(&disc) {
                    let two = BigInt::from(2);
                    for (u, up) in [((sum + &r) / &two, (sum - &r) / &two), ((sum - &r) / &two, (sum + &r) / &two)] {
                        if (&u + &up) != *sum || &u * &up != prod {
                            continue;
                        }
                        if &u * &w + &up * &v == e[1] {
                            return Err(Error::Reducible { factor: format!("s^2 + {u}*s + {v} in s = {l}*t") });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

impl Elem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Coef] {
        &self.c
    }

    /// Applies an automorphism of the owning field.
    pub fn conj(&self, g: &GaloisGen) -> Elem {
        self.field.apply(g, self)
    }

    /// The prime-field value, if the element lies in the prime field.
    pub fn as_base(&self) -> Option<Coef> {
        all_zero(self.field.prime(), &self.c[1..]).then(|| self.c[0].clone())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.as_base()? {
            Coef::Q(r) => Some(r),
            Coef::M(_) => None,
        }
    }

    /// Square test for rationals (over `Q` only).
    pub fn is_rational_square(&self) -> Option<bool> {
        self.as_rational().map(|r| !r.is_negative() && rational_sqrt(&r).is_some())
    }
}

impl Scalar for Elem {
    type Ctx = Field;

    fn ctx(&self) -> Field {
        self.field.clone()
    }

    fn zero(ctx: &Field) -> Self {
        ctx.zero()
    }

    fn one(ctx: &Field) -> Self {
        ctx.one()
    }

    fn from_i64(ctx: &Field, n: i64) -> Self {
        ctx.from_i64(n)
    }

    fn characteristic(ctx: &Field) -> u64 {
        ctx.characteristic()
    }

    fn is_zero(&self) -> bool {
        all_zero(self.field.prime(), &self.c)
    }

    fn add(&self, o: &Self) -> Self {
        self.field.mk(self.field.0.add_v(&self.c, &o.c))
    }

    fn sub(&self, o: &Self) -> Self {
        self.field.mk(self.field.0.sub_v(&self.c, &o.c))
    }

    fn mul(&self, o: &Self) -> Self {
        let inner = &self.field.0;
        self.field.mk(inner.mul_l(inner.dims.len() - 1, &self.c, &o.c))
    }

    fn neg(&self) -> Self {
        let p = self.field.prime();
        self.field.mk(self.c.iter().map(|c| p.neg(c)).collect())
    }

    fn inv(&self) -> Option<Self> {
        let inner = &self.field.0;
        inner.inv_l(inner.dims.len() - 1, &self.c).map(|c| self.field.mk(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3i() -> Field {
        let f3 = Field::prime_field(3).unwrap();
        f3.extend(&[f3.from_i64(1), f3.from_i64(0), f3.from_i64(1)]).unwrap()
    }

    #[test]
    fn frobenius_on_f9_is_cube() {
        let f = f3i();
        let frob = f.galois("frob").unwrap().clone();
        for x in f.elements(100).unwrap() {
            assert_eq!(x.conj(&frob), x.pow(3));
        }
        let i = f.gen(0);
        assert_eq!(i.conj(&frob), i.neg());
    }

    #[test]
    fn reducible_steps_are_rejected() {
        let f3 = Field::prime_field(3).unwrap();
        let e = f3.extend(&[f3.from_i64(-1), f3.from_i64(0), f3.from_i64(1)]).unwrap_err();
        assert!(matches!(e, Error::Reducible { .. }));
        let q = Field::rationals();
        // t^4 + 4 = (t^2 + 2t + 2)(t^2 - 2t + 2)
        let e = q.extend(&[q.from_i64(4), q.zero(), q.zero(), q.zero(), q.one()]).unwrap_err();
        assert!(matches!(e, Error::Reducible { .. }));
        // t^4 - 2 is irreducible
        assert!(q.extend(&[q.from_i64(-2), q.zero(), q.zero(), q.zero(), q.one()]).is_ok());
        // t^2 - 6 over Q(sqrt2)(sqrt3) is reducible
        let k = q.extend(&[q.from_i64(-2), q.zero(), q.one()]).unwrap();
        let k = k.extend(&[k.from_i64(-3), k.zero(), k.one()]).unwrap();
        assert!(k.extend(&[k.from_i64(-6), k.zero(), k.one()]).is_err());
        assert!(k.extend(&[k.from_i64(-5), k.zero(), k.one()]).is_ok());
    }

    #[test]
    fn biquadratic_generators_commute_and_fix_the_other_root() {
        let q = Field::rationals();
        let k = q.extend(&[q.from_i64(-2), q.zero(), q.one()]).unwrap();
        let k = k.extend(&[k.from_i64(-3), k.zero(), k.one()]).unwrap();
        let h = k.galois("s1").unwrap().clone();
        let hp = k.galois("s2").unwrap().clone();
        let (r2, r3) = (k.gen(0), k.gen(1));
        assert_eq!(r2.conj(&h), r2.neg());
        assert_eq!(r3.conj(&h), r3);
        assert_eq!(r3.conj(&hp), r3.neg());
        let x = r2.add(&r3).mul(&r2).add(&k.from_i64(5));
        assert_eq!(x.conj(&h).conj(&hp), x.conj(&hp).conj(&h));
        let g = k.compose_auto(&h, &hp, "g");
        assert_eq!(x.conj(&g), x.conj(&hp).conj(&h));
    }

    #[test]
    fn inverse_in_tower() {
        let q = Field::rationals();
        let k = q.extend(&[q.from_i64(-2), q.zero(), q.one()]).unwrap();
        let k = k.extend(&[k.from_i64(1), k.zero(), k.one()]).unwrap();
        let x = k.gen(0).add(&k.gen(1)).add(&k.from_i64(3));
        assert!(x.mul(&x.inv().unwrap()).is_one());
    }
}
