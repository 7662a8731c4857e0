//! Quadratic spaces over arbitrary fields, including characteristic two.
//!
//! The polar form is always derived from its definition
//! `b(x, y) = (q(x+y) - q(x) - q(y)) / δ` with `δ = 2` outside characteristic two
//! and `δ = 1` in characteristic two.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{Elem, Enumerable, Field, Mat, Mono, Poly, Ring, Scalar};
use crate::error::{Error, Result};

/// A quadratic form on `K^n` with its polar Gram matrix.
#[derive(Clone, Debug)]
pub struct QuadraticSpace<S: Scalar> {
    form: Poly<S>,
    delta: S,
    gram: Mat<S>,
    /// Upper-triangular coefficient matrix: `q(x) = x^T C x`.
    coeffs: Mat<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    Reflection,
    Transvection,
    NegatedReflection,
}

/// A similitude `q(Mx) = λ q(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMap<S: Scalar> {
    pub matrix: Mat<S>,
    pub multiplier: S,
    pub kind: Option<FactorKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsotropyStatus {
    Isotropic,
    AnisotropicProved,
    AnisotropicByTheorem,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsotropyCertificate<S: Scalar> {
    pub status: IsotropyStatus,
    pub witness: Option<Vec<S>>,
    pub note: String,
}

impl<S: Scalar> IsotropyCertificate<S> {
    pub fn is_anisotropic(&self) -> bool {
        matches!(self.status, IsotropyStatus::AnisotropicProved | IsotropyStatus::AnisotropicByTheorem)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "class", content = "d")]
pub enum Degeneracy {
    NonDegenerate,
    Defect(usize),
    Other,
}

#[derive(Clone, Debug)]
pub struct DefectReport<S: Scalar> {
    pub radical: Vec<Vec<S>>,
    /// Whether `q` is anisotropic on the radical; `None` when undecided.
    pub radical_anisotropic: Option<bool>,
    pub class: Degeneracy,
}

impl<S: Scalar> QuadraticSpace<S> {
    /// Wraps a homogeneous quadratic form; its ring's variables are the coordinates.
    pub fn new(form: Poly<S>) -> Result<Self> {
        if !form.is_zero() && !(form.is_homogeneous() && form.total_degree() == 2) {
            return Err(Error::Invalid(format!("{form} is not a quadratic form")));
        }
        let ctx = form.ring().base().clone();
        let n = form.nvars();
        let delta = if S::characteristic(&ctx) == 2 { S::one(&ctx) } else { S::from_i64(&ctx, 2) };
        let coeffs = Mat::from_fn(&ctx, n, n, |i, j| {
            if i > j {
                return S::zero(&ctx);
            }
            let mut m = Mono::one(n);
            m.0[i] += 1;
            m.0[j] += 1;
            form.coeff(&m)
        });
        let mut sp = QuadraticSpace { form, delta, gram: Mat::zeros(&ctx, n, n), coeffs };
        let e = |i: usize| -> Vec<S> { (0..n).map(|k| if k == i { S::one(&ctx) } else { S::zero(&ctx) }).collect() };
        let dinv = sp.delta.inv().unwrap();
        for i in 0..n {
            for j in 0..n {
                let s: Vec<S> = e(i).iter().zip(e(j)).map(|(a, b)| a.add(&b)).collect();
                let v = sp.eval(&s).sub(&sp.eval(&e(i))).sub(&sp.eval(&e(j))).mul(&dinv);
                sp.gram.set(i, j, v);
            }
        }
        Ok(sp)
    }

    /// `q = Σ_{i≤j} c_ij x_i x_j` from the upper-triangular coefficient list.
    pub fn from_upper(ring: &Ring<S>, c: &[Vec<S>]) -> Result<Self> {
        let n = ring.nvars();
        let mut q = ring.zero();
        for i in 0..n {
            for j in i..n {
                let mut m = Mono::one(n);
                m.0[i] += 1;
                m.0[j] += 1;
                q = q.add(&ring.term(m, c[i][j - i].clone()));
            }
        }
        QuadraticSpace::new(q)
    }

    pub fn form(&self) -> &Poly<S> {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.nvars()
    }

    pub fn ctx(&self) -> &S::Ctx {
        self.form.ring().base()
    }

    pub fn delta(&self) -> &S {
        &self.delta
    }

    pub fn gram(&self) -> &Mat<S> {
        &self.gram
    }

    pub fn characteristic(&self) -> u64 {
        S::characteristic(self.ctx())
    }

    pub fn eval(&self, v: &[S]) -> S {
        self.form.eval(v)
    }

    pub fn polar(&self, x: &[S], y: &[S]) -> S {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).fold(S::zero(self.ctx()), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    /// Re-derives the polar form from its definition on all basis pairs, and
    /// checks `δ·b(x,x) = 2·q(x)` on basis vectors and symmetry.
    pub fn check_invariants(&self) -> bool {
        let n = self.dim();
        let ctx = self.ctx();
        let e = |i: usize| -> Vec<S> { (0..n).map(|k| if k == i { S::one(ctx) } else { S::zero(ctx) }).collect() };
        let two = S::from_i64(ctx, 2);
        (0..n).all(|i| {
            self.delta.mul(self.gram.get(i, i)) == two.mul(&self.eval(&e(i)))
                && (0..n).all(|j| {
                    let s: Vec<S> = e(i).iter().zip(e(j)).map(|(a, b)| a.add(&b)).collect();
                    let b = self.eval(&s).sub(&self.eval(&e(i))).sub(&self.eval(&e(j)));
                    self.gram.get(i, j) == self.gram.get(j, i) && self.delta.mul(self.gram.get(i, j)) == b
                })
        })
    }

    /// A basis of `E^⊥`, the kernel of the polar Gram matrix.
    pub fn radical(&self) -> Vec<Vec<S>> {
        self.gram.nullspace()
    }

    /// Multiplier `λ` with `q(Mx) = λ q(x)`, if `M` is a similitude.
    pub fn similitude_multiplier(&self, m: &Mat<S>) -> Option<S> {
        let n = self.dim();
        if m.rows() != n || m.cols() != n {
            return None;
        }
        let d = m.transpose().mul(&self.coeffs).mul(m);
        let mut lambda: Option<S> = None;
        for i in 0..n {
            for j in i..n {
                let got = if i == j { d.get(i, i).clone() } else { d.get(i, j).add(d.get(j, i)) };
                let want = self.coeffs.get(i, j);
                if lambda.is_none() && !want.is_zero() {
                    lambda = Some(got.div(want)?);
                }
                if let Some(l) = &lambda {
                    if got != l.mul(want) {
                        return None;
                    }
                } else if !got.is_zero() {
                    return None;
                }
            }
        }
        let l = lambda.unwrap_or_else(|| S::one(self.ctx()));
        (!l.is_zero() && m.det() != S::zero(self.ctx())).then_some(l)
    }

    pub fn is_isometry(&self, m: &Mat<S>) -> bool {
        self.similitude_multiplier(m).is_some_and(|l| l.is_one())
    }

    /// The reflection (orthogonal transvection in characteristic two) along `a`.
    pub fn reflection(&self, a: &[S]) -> Result<OrthogonalMap<S>> {
        let qa = self.eval(a);
        if qa.is_zero() {
            return Err(Error::Isotropic(fmt_vec(a)));
        }
        let ga = self.gram.mul_vec(a);
        if ga.iter().all(S::is_zero) {
            return Err(Error::InRadical);
        }
        let n = self.dim();
        let ctx = self.ctx();
        let s = self.delta.div(&qa).unwrap();
        let m = Mat::from_fn(ctx, n, n, |i, j| {
            let id = if i == j { S::one(ctx) } else { S::zero(ctx) };
            id.sub(&s.mul(&a[i]).mul(&ga[j]))
        });
        let kind = if self.characteristic() == 2 { FactorKind::Transvection } else { FactorKind::Reflection };
        Ok(OrthogonalMap { matrix: m, multiplier: S::one(ctx), kind: Some(kind) })
    }

    /// Codimension of the fixed space of `m`, by exact rank of `m - I`.
    pub fn fixed_codim(&self, m: &Mat<S>) -> usize {
        m.sub(&Mat::identity(self.ctx(), self.dim())).rank()
    }

    /// Factors an isometry of an anisotropic space into `codim(Fix φ)` reflections
    /// `τ_1 ∘ … ∘ τ_k`.
    pub fn cartan_dieudonne(&self, phi: &Mat<S>, cert: &IsotropyCertificate<S>) -> Result<Vec<OrthogonalMap<S>>> {
        if !cert.is_anisotropic() {
            return Err(Error::Hypothesis("the space is not certified anisotropic".into()));
        }
        if self.gram.is_zero() {
            return Err(Error::Hypothesis("the space is totally degenerate".into()));
        }
        if !self.is_isometry(phi) {
            return Err(Error::Hypothesis("the map is not an isometry".into()));
        }
        let n = self.dim();
        let ctx = self.ctx();
        let mut cur = phi.clone();
        let mut out = Vec::new();
        while let Some(i) = (0..n).find(|&i| (0..n).any(|r| *cur.get(r, i) != if r == i { S::one(ctx) } else { S::zero(ctx) })) {
            if out.len() >= n {
                return Err(Error::Verification("more than dim reflections needed".into()));
            }
            let col = cur.col(i);
            let a: Vec<S> = (0..n).map(|r| if r == i { S::one(ctx) } else { S::zero(ctx) }).zip(&col).map(|(v, w)| v.sub(w)).collect();
            let tau = self.reflection(&a)?;
            cur = tau.matrix.mul(&cur);
            out.push(tau);
        }
        Ok(out)
    }

    /// Writes `φ ∈ SO` (odd dimension) as a product of involutions in `SO`.
    pub fn so_involution_factorization(&self, phi: &Mat<S>, cert: &IsotropyCertificate<S>) -> Result<Vec<OrthogonalMap<S>>> {
        let n = self.dim();
        if n % 2 == 0 {
            return Err(Error::Hypothesis(format!("dimension {n} is even")));
        }
        if !phi.det().is_one() {
            return Err(Error::Hypothesis("determinant is not one".into()));
        }
        let cd = self.cartan_dieudonne(phi, cert)?;
        let out: Vec<OrthogonalMap<S>> = if self.characteristic() == 2 {
            cd
        } else {
            cd.into_iter().map(|t| OrthogonalMap { matrix: t.matrix.neg(), multiplier: t.multiplier, kind: Some(FactorKind::NegatedReflection) }).collect()
        };
        let id = Mat::identity(self.ctx(), n);
        let mut prod = id.clone();
        for f in &out {
            if !f.matrix.mul(&f.matrix).is_identity() || !f.matrix.det().is_one() || !self.is_isometry(&f.matrix) {
                return Err(Error::Verification("factor is not an involution in SO".into()));
            }
            prod = prod.mul(&f.matrix);
        }
        if prod != *phi {
            return Err(Error::Verification("factors do not multiply back to the input".into()));
        }
        Ok(out)
    }

    /// Splits a similitude `A` as `c·S` with `S ∈ SO`.
    pub fn go_to_so_split(&self, a: &Mat<S>) -> Result<(S, Mat<S>)> {
        let n = self.dim();
        if n % 2 == 0 {
            return Err(Error::Hypothesis(format!("dimension {n} is even")));
        }
        let lambda = self.similitude_multiplier(a).ok_or_else(|| Error::Verification("input is not a similitude".into()))?;
        let det = a.det();
        let c = lambda.pow((n as u64 + 1) / 2).div(&det).ok_or(Error::DivisionByZero)?;
        let s = a.scale(&c.inv().ok_or(Error::DivisionByZero)?);
        if !self.is_isometry(&s) || !s.det().is_one() {
            return Err(Error::Verification("A/c is not in SO; the space violates the hypotheses".into()));
        }
        Ok((c, s))
    }

    /// The intersection point `[c:b:a]` of all tangent lines of a ternary form in
    /// characteristic two, whose Gram matrix is `(0 a b; a 0 c; b c 0)`.
    pub fn tangent_concurrency_point(&self) -> Result<Vec<S>> {
        if self.characteristic() != 2 || self.dim() != 3 {
            return Err(Error::Hypothesis("needs a ternary form in characteristic two".into()));
        }
        if self.gram.is_zero() {
            return Err(Error::Hypothesis("zero polar form: the form is a sum of squares and reducible over the closure".into()));
        }
        let g = &self.gram;
        Ok(vec![g.get(1, 2).clone(), g.get(0, 2).clone(), g.get(0, 1).clone()])
    }
}

impl<S: Enumerable> QuadraticSpace<S> {
    /// Radical and defect classification.
    pub fn radical_and_defect(&self) -> DefectReport<S> {
        let radical = self.radical();
        let d = radical.len();
        let anis = match d {
            0 => Some(true),
            1 => Some(!self.eval(&radical[0]).is_zero()),
            _ => S::enumerate(self.ctx(), 1 << 16).and_then(|elems| {
                let count = (elems.len() as u128).checked_pow(d as u32)?;
                if count > 1 << 22 {
                    return None;
                }
                let ctx = self.ctx();
                for mut idx in 1..count {
                    let mut v = vec![S::zero(ctx); self.dim()];
                    for b in &radical {
                        let c = &elems[(idx % elems.len() as u128) as usize];
                        idx /= elems.len() as u128;
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi = vi.add(&c.mul(bi));
                        }
                    }
                    if self.eval(&v).is_zero() {
                        return Some(false);
                    }
                }
                Some(true)
            }),
        };
        let class = match (d, anis) {
            (0, _) => Degeneracy::NonDegenerate,
            (_, Some(true)) => Degeneracy::Defect(d),
            _ => Degeneracy::Other,
        };
        DefectReport { radical, radical_anisotropic: anis, class }
    }
}

impl QuadraticSpace<Elem> {
    /// Decides isotropy exhaustively over finite fields; over `Q` uses definiteness
    /// and a height-bounded search.
    pub fn isotropy_search(&self, height_bound: i64) -> IsotropyCertificate<Elem> {
        let field: &Field = self.ctx();
        let n = self.dim();
        if field.is_finite() {
            let Ok(elems) = field.elements(1 << 16) else {
                return unknown("field too large to enumerate");
            };
            let q = elems.len() as u128;
            for lead in 0..n {
                let rest = n - lead - 1;
                let Some(count) = q.checked_pow(rest as u32) else { return unknown("too many vectors") };
                for mut idx in 0..count {
                    let mut v = vec![field.zero(); n];
                    v[lead] = field.one();
                    for x in v.iter_mut().skip(lead + 1) {
                        *x = elems[(idx % q) as usize].clone();
                        idx /= q;
                    }
                    if self.eval(&v).is_zero() {
                        return IsotropyCertificate { status: IsotropyStatus::Isotropic, witness: Some(v), note: "exhaustive search".into() };
                    }
                }
            }
            return IsotropyCertificate { status: IsotropyStatus::AnisotropicProved, witness: None, note: "exhaustive search over all projective points".into() };
        }
        if field.num_steps() > 0 {
            return unknown("isotropy over number fields is not decided");
        }
        // Over Q: integer coefficients.
        let mut den = BigInt::one();
        for (_, c) in self.form.terms() {
            den = den.lcm(c.as_rational().unwrap().denom());
        }
        let ic: Vec<(Vec<u32>, i128)> = self
            .form
            .terms()
            .map(|(m, c)| (m.0.clone(), (c.as_rational().unwrap() * num_rational::BigRational::from_integer(den.clone())).to_integer().to_i128().unwrap_or(i128::MAX)))
            .collect();
        if let Some(def) = definite(&self.gram) {
            return IsotropyCertificate { status: IsotropyStatus::AnisotropicProved, witness: None, note: format!("{def} definite polar form") };
        }
        let b = height_bound;
        let mut v = vec![-b; n];
        loop {
            let first = v.iter().position(|&x| x != 0);
            if let Some(f) = first {
                let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
                if v[f] > 0 && g == 1 {
                    let val: i128 = ic.iter().map(|(m, c)| m.iter().zip(&v).fold(*c, |acc, (&e, &x)| acc * (x as i128).pow(e))).sum();
                    if val == 0 {
                        let w = v.iter().map(|&x| field.from_i64(x)).collect();
                        return IsotropyCertificate { status: IsotropyStatus::Isotropic, witness: Some(w), note: format!("height search, bound {b}") };
                    }
                }
            }
            let mut k = 0;
            while k < n {
                v[k] += 1;
                if v[k] <= b {
                    break;
                }
                v[k] = -b;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        unknown(&format!("no isotropic vector of height at most {b}"))
    }

    /// A random reflection along a random anisotropic, non-radical vector.
    pub fn random_reflection<R: Rng + ?Sized>(&self, rng: &mut R) -> OrthogonalMap<Elem> {
        loop {
            let a: Vec<Elem> = (0..self.dim()).map(|_| self.ctx().random(rng)).collect();
            if let Ok(t) = self.reflection(&a) {
                return t;
            }
        }
    }
}

fn unknown<S: Scalar>(note: &str) -> IsotropyCertificate<S> {
    IsotropyCertificate { status: IsotropyStatus::Unknown, witness: None, note: note.into() }
}

/// Sylvester's criterion on a rational symmetric matrix.
fn definite(g: &Mat<Elem>) -> Option<&'static str> {
    let n = g.rows();
    let mut signs = Vec::new();
    for k in 1..=n {
        let sub = Mat::from_fn(g.ctx(), k, k, |i, j| g.get(i, j).clone());
        let d = sub.det().as_rational()?;
        if d.is_zero() {
            return None;
        }
        signs.push(d.is_positive());
    }
    if signs.iter().all(|&s| s) {
        Some("positive")
    } else if signs.iter().enumerate().all(|(i, &s)| s == (i % 2 == 1)) {
        Some("negative")
    } else {
        None
    }
}

pub(crate) fn fmt_vec<S: Scalar>(v: &[S]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::poly_ring;

    fn space(p: u64, n: usize, q: &str) -> QuadraticSpace<Elem> {
        let f = Field::base(p).unwrap();
        let names = ["x0", "x1", "x2", "x3"];
        QuadraticSpace::new(parse_poly(&poly_ring(&f, &names[..n]), q).unwrap()).unwrap()
    }

    #[test]
    fn defect_examples() {
        let s = space(2, 3, "x1^2 + x0*x2");
        assert!(s.check_invariants());
        let r = s.radical_and_defect();
        assert_eq!(r.class, Degeneracy::Defect(1));
        assert_eq!(r.radical.len(), 1);
        assert_eq!(fmt_vec(&r.radical[0]), "(0, 1, 0)");
        let s = space(0, 3, "x1^2 + x0*x2");
        assert_eq!(s.radical_and_defect().class, Degeneracy::NonDegenerate);
        let s = space(2, 1, "x0^2");
        assert_eq!(s.radical_and_defect().class, Degeneracy::Defect(1));
    }

    #[test]
    fn tangent_points() {
        assert_eq!(fmt_vec(&space(2, 3, "x1^2 + x0*x2").tangent_concurrency_point().unwrap()), "(0, 1, 0)");
        assert_eq!(fmt_vec(&space(2, 3, "x0*x1 + x1*x2 + x0*x2").tangent_concurrency_point().unwrap()), "(1, 1, 1)");
        assert_eq!(fmt_vec(&space(2, 3, "x1^2 + x0*x1 + x2^2").tangent_concurrency_point().unwrap()), "(0, 0, 1)");
        assert!(space(2, 3, "x0^2 + x1^2").tangent_concurrency_point().is_err());
    }

    #[test]
    fn reflection_swaps_equal_length_vectors() {
        let s = space(3, 2, "x0^2 + x1^2");
        let f = s.ctx().clone();
        let (x, y) = (vec![f.one(), f.zero()], vec![f.zero(), f.one()]);
        let a: Vec<Elem> = x.iter().zip(&y).map(|(u, v)| u.sub(v)).collect();
        let t = s.reflection(&a).unwrap();
        assert_eq!(t.matrix.mul_vec(&x), y);
        assert_eq!(t.matrix.mul_vec(&a), a.iter().map(|v| v.neg()).collect::<Vec<_>>());
        assert!(t.matrix.mul(&t.matrix).is_identity());
    }

    #[test]
    fn isotropy_examples() {
        let s = space(3, 3, "x1^2 + x0*x2");
        let c = s.isotropy_search(50);
        assert_eq!(c.status, IsotropyStatus::Isotropic);
        assert_eq!(fmt_vec(c.witness.as_ref().unwrap()), "(1, 0, 0)");
        assert_eq!(space(3, 2, "x0^2 + x1^2").isotropy_search(50).status, IsotropyStatus::AnisotropicProved);
        assert_eq!(space(0, 3, "x0^2 + x1^2 + x2^2").isotropy_search(50).status, IsotropyStatus::AnisotropicProved);
        assert_eq!(space(0, 3, "x0^2 + x1^2 - x2^2").isotropy_search(5).status, IsotropyStatus::Isotropic);
        assert_eq!(space(0, 2, "x0^2 - 2*x1^2").isotropy_search(5).status, IsotropyStatus::Unknown);
    }

    #[test]
    fn minus_identity_needs_three_reflections() {
        let s = space(0, 3, "x0^2 + x1^2 + x2^2");
        let cert = s.isotropy_search(50);
        let m = Mat::identity(s.ctx(), 3).neg();
        let f = s.cartan_dieudonne(&m, &cert).unwrap();
        assert_eq!(f.len(), 3);
        let p = f.iter().fold(Mat::identity(s.ctx(), 3), |acc, t| acc.mul(&t.matrix));
        assert_eq!(p, m);
        assert!(s.cartan_dieudonne(&Mat::identity(s.ctx(), 3), &cert).unwrap().is_empty());
    }

    #[test]
    fn go_split_scalar() {
        let s = space(7, 3, "x0^2 + x1^2 + 3*x2^2");
        let l = s.ctx().from_i64(3);
        let (c, so) = s.go_to_so_split(&Mat::scalar(s.ctx(), 3, &l)).unwrap();
        assert_eq!(c, l);
        assert!(so.is_identity());
    }
}
