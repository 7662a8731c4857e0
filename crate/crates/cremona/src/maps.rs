//! Birational maps of the projective plane.
//!
//! A [`ProjectiveMap`] is a triple of homogeneous forms of equal degree with no
//! common factor, scaled so that the leading coefficient of the first nonzero
//! component is one. An [`AffinePairMap`] is the same map written on the chart
//! `(x, y) ↦ [x : y : 1]`.

use std::fmt;

use crate::algebra::{Conj, Elem, Field, GaloisGen, Mat, Mono, Poly, RatFun, Ring, Scalar};
use crate::error::{Error, Result};

/// `k[x, y, z]`.
pub fn projective_ring(field: &Field) -> Ring<Elem> {
    Ring::new(field.clone(), &["x", "y", "z"])
}

/// `k[x, y]`, whose fraction field carries affine maps.
pub fn affine_ring(field: &Field) -> Ring<Elem> {
    Ring::new(field.clone(), &["x", "y"])
}

#[derive(Clone, PartialEq, Eq)]
pub struct ProjectiveMap {
    comps: [Poly<Elem>; 3],
}

impl fmt::Debug for ProjectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProjectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.comps[0], self.comps[1], self.comps[2])
    }
}

impl ProjectiveMap {
    /// Normalizes a triple of homogeneous forms of one degree.
    pub fn new(comps: [Poly<Elem>; 3]) -> Result<Self> {
        if comps.iter().all(Poly::is_zero) {
            return Err(Error::Invalid("all three components vanish".into()));
        }
        if comps.iter().any(|c| c.nvars() != 3) {
            return Err(Error::Invalid("components must be ternary forms".into()));
        }
        let degs: Vec<u32> = comps.iter().filter(|c| !c.is_zero()).map(|c| c.total_degree()).collect();
        if comps.iter().any(|c| !c.is_homogeneous()) || degs.iter().any(|&d| d != degs[0]) {
            return Err(Error::Invalid("components must be homogeneous of one degree".into()));
        }
        let mut order: Vec<&Poly<Elem>> = comps.iter().filter(|c| !c.is_zero()).collect();
        order.sort_by_key(|c| c.nterms());
        let mut g = order[0].clone();
        for c in &order[1..] {
            if g.is_constant() {
                break;
            }
            g = g.gcd(c);
        }
        let mut comps = comps;
        if !g.is_constant() {
            for c in comps.iter_mut() {
                *c = c.div_exact(&g).expect("gcd divides");
            }
        }
        let lead = comps.iter().find(|c| !c.is_zero()).unwrap().leading_coeff().inv().unwrap();
        for c in comps.iter_mut() {
            *c = c.scale(&lead);
        }
        Ok(ProjectiveMap { comps })
    }

    pub fn identity(field: &Field) -> Self {
        let r = projective_ring(field);
        ProjectiveMap { comps: [r.var(0), r.var(1), r.var(2)] }
    }

    /// The standard quadratic involution `[yz : xz : xy]`.
    pub fn sigma(field: &Field) -> Self {
        let r = projective_ring(field);
        let [x, y, z] = [r.var(0), r.var(1), r.var(2)];
        ProjectiveMap::new([y.mul(&z), x.mul(&z), x.mul(&y)]).unwrap()
    }

    /// The linear map `v ↦ M v`.
    pub fn linear(m: &Mat<Elem>) -> Result<Self> {
        if m.rows() != 3 || m.cols() != 3 || m.det().is_zero() {
            return Err(Error::Invalid("linear maps need an invertible 3x3 matrix".into()));
        }
        let r = projective_ring(m.ctx());
        let vars = r.vars();
        let comps: Vec<Poly<Elem>> = (0..3).map(|i| (0..3).fold(r.zero(), |acc, j| acc.add(&vars[j].scale(m.get(i, j))))).collect();
        ProjectiveMap::new(comps.try_into().unwrap())
    }

    pub fn components(&self) -> &[Poly<Elem>; 3] {
        &self.comps
    }

    pub fn field(&self) -> &Field {
        self.comps[0].ring().base()
    }

    pub fn degree(&self) -> u32 {
        self.comps.iter().map(Poly::total_degree).max().unwrap()
    }

    /// The matrix of a degree-one map.
    pub fn as_linear(&self) -> Option<Mat<Elem>> {
        if self.degree() != 1 {
            return None;
        }
        let f = self.field();
        Some(Mat::from_fn(f, 3, 3, |i, j| self.comps[i].coeff(&Mono::var(3, j))))
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &ProjectiveMap) -> Result<Self> {
        let comps: Vec<Poly<Elem>> = self.comps.iter().map(|p| p.subst(&g.comps)).collect();
        ProjectiveMap::new(comps.try_into().unwrap()).map_err(|_| Error::Invalid("composition is undefined along the image of the inner map".into()))
    }

    /// The components of `self ∘ g` before common factors are removed.
    pub fn compose_raw(&self, g: &ProjectiveMap) -> [Poly<Elem>; 3] {
        self.pullback(&g.comps).try_into().unwrap()
    }

    /// Whether `comps` defines this map, tested by `c_i d_j = c_j d_i` without normalizing.
    pub fn agrees_with(&self, comps: &[Poly<Elem>; 3]) -> bool {
        if comps.iter().all(Poly::is_zero) {
            return false;
        }
        (0..3).all(|i| (i + 1..3).all(|j| self.comps[i].mul(&comps[j]) == self.comps[j].mul(&comps[i])))
    }

    pub fn is_identity(&self) -> bool {
        *self == ProjectiveMap::identity(self.field())
    }

    pub fn is_involution(&self) -> bool {
        ProjectiveMap::identity(self.field()).agrees_with(&self.compose_raw(self))
    }

    /// Values of the components at a point.
    pub fn eval(&self, p: &[Elem]) -> Vec<Elem> {
        self.comps.iter().map(|c| c.eval(p)).collect()
    }

    /// The components pulled back along a map `k[x,y,z] → R` given by three images.
    pub fn pullback(&self, vals: &[Poly<Elem>]) -> Vec<Poly<Elem>> {
        self.comps.iter().map(|c| c.subst(vals)).collect()
    }

    /// The restriction to the chart `z = 1`.
    pub fn to_affine(&self) -> Result<AffinePairMap> {
        let r = affine_ring(self.field());
        let chart = [r.var(0), r.var(1), r.one()];
        let p: Vec<Poly<Elem>> = self.comps.iter().map(|c| c.subst(&chart)).collect();
        AffinePairMap::new(RatFun::new(p[0].clone(), p[2].clone())?, RatFun::new(p[1].clone(), p[2].clone())?)
    }

    /// Coefficients all lie in the prime field (after normalization).
    pub fn coefficients(&self) -> impl Iterator<Item = &Elem> {
        self.comps.iter().flat_map(|c| c.terms().map(|(_, v)| v))
    }

    /// Moves the map to a subfield (a prefix of the tower) when every coefficient lies there.
    pub fn restrict(&self, sub: &Field) -> Option<ProjectiveMap> {
        let r = projective_ring(sub);
        let f = self.field();
        let mut comps = Vec::new();
        for c in &self.comps {
            let mut terms = Vec::new();
            for (m, v) in c.terms() {
                terms.push((m.clone(), f.restrict(v, sub)?));
            }
            comps.push(r.from_terms(terms));
        }
        ProjectiveMap::new(comps.try_into().unwrap()).ok()
    }

    /// Moves the map into an extension field.
    pub fn embed(&self, big: &Field) -> Result<ProjectiveMap> {
        let r = projective_ring(big);
        let comps: Result<Vec<Poly<Elem>>> = self
            .comps
            .iter()
            .map(|c| Ok(r.from_terms(c.terms().map(|(m, v)| Ok((m.clone(), big.embed(v)?))).collect::<Result<Vec<_>>>()?)))
            .collect();
        ProjectiveMap::new(comps?.try_into().unwrap())
    }
}

impl Conj for ProjectiveMap {
    fn conj(&self, g: &GaloisGen) -> Self {
        let comps: Vec<Poly<Elem>> = self.comps.iter().map(|c| c.conj(g)).collect();
        ProjectiveMap::new(comps.try_into().unwrap()).expect("automorphisms preserve maps")
    }
}

/// A birational map of the affine plane as a pair of rational functions in `x, y`.
#[derive(Clone, PartialEq, Eq)]
pub struct AffinePairMap {
    pub fx: RatFun<Elem>,
    pub fy: RatFun<Elem>,
}

impl fmt::Debug for AffinePairMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AffinePairMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.fx, self.fy)
    }
}

impl AffinePairMap {
    pub fn new(fx: RatFun<Elem>, fy: RatFun<Elem>) -> Result<Self> {
        if fx.ring().nvars() != 2 || fy.ring().nvars() != 2 {
            return Err(Error::Invalid("affine maps are pairs of functions of x and y".into()));
        }
        Ok(AffinePairMap { fx, fy })
    }

    pub fn identity(field: &Field) -> Self {
        let r = affine_ring(field);
        AffinePairMap { fx: r.rf_var(0), fy: r.rf_var(1) }
    }

    pub fn ring(&self) -> &Ring<Elem> {
        self.fx.ring()
    }

    pub fn field(&self) -> &Field {
        self.ring().base()
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &AffinePairMap) -> Result<Self> {
        let vals = [g.fx.clone(), g.fy.clone()];
        AffinePairMap::new(self.fx.subst(&vals)?, self.fy.subst(&vals)?)
    }

    pub fn is_identity(&self) -> bool {
        *self == AffinePairMap::identity(self.field())
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_ok_and(|m| m.is_identity())
    }

    /// Homogenizes through the chart `[x : y : 1]`: `(a/b, c/d) ↦ [a·d : c·b : b·d]`.
    pub fn to_projective(&self) -> Result<ProjectiveMap> {
        let (a, b) = (self.fx.numer(), self.fx.denom());
        let (c, d) = (self.fy.numer(), self.fy.denom());
        let parts = [a.mul(d), c.mul(b), b.mul(d)];
        let deg = parts.iter().map(Poly::total_degree).max().unwrap();
        let r = projective_ring(self.field());
        let comps: Vec<Poly<Elem>> = parts
            .iter()
            .map(|p| r.from_terms(p.terms().map(|(m, v)| (Mono(vec![m.0[0], m.0[1], deg - m.degree()]), v.clone()))))
            .collect();
        ProjectiveMap::new(comps.try_into().unwrap())
    }
}

impl Conj for AffinePairMap {
    fn conj(&self, g: &GaloisGen) -> Self {
        AffinePairMap { fx: self.fx.conj(g), fy: self.fy.conj(g) }
    }
}

/// Two involutions whose composition is a given map of de Jonquières type.
#[derive(Clone, Debug)]
pub struct InvolutionPair {
    pub first: AffinePairMap,
    pub second: AffinePairMap,
    pub product: AffinePairMap,
}

/// `(ax, y) = (1/x, y) ∘ (1/(ax), y)`.
pub fn jonq1_factor_scalar(a: &Elem) -> Result<InvolutionPair> {
    let ia = a.inv().ok_or_else(|| Error::Hypothesis("the scale factor is zero".into()))?;
    let r = affine_ring(a.field());
    let (x, y) = (r.rf_var(0), r.rf_var(1));
    let first = AffinePairMap::new(x.inv().unwrap(), y.clone())?;
    let second = AffinePairMap::new(x.inv().unwrap().mul(&r.rf_const(ia)), y.clone())?;
    let target = AffinePairMap::new(x.mul(&r.rf_const(a.clone())), y)?;
    finish_pair(first, second, target)
}

/// `(x, A(x) y) = (x, 1/y) ∘ (x, 1/(A(x) y))` for a nonzero rational function `A` of `x`.
pub fn jonq1_factor_function(a: &RatFun<Elem>) -> Result<InvolutionPair> {
    if a.is_zero() {
        return Err(Error::Hypothesis("the scale function is zero".into()));
    }
    let field = a.ring().base().clone();
    let r = affine_ring(&field);
    let (x, y) = (r.rf_var(0), r.rf_var(1));
    let a2 = a.subst(&[x.clone()])?;
    let first = AffinePairMap::new(x.clone(), y.inv().unwrap())?;
    let second = AffinePairMap::new(x.clone(), a2.mul(&y).inv().unwrap())?;
    let target = AffinePairMap::new(x, a2.mul(&y))?;
    finish_pair(first, second, target)
}

fn finish_pair(first: AffinePairMap, second: AffinePairMap, target: AffinePairMap) -> Result<InvolutionPair> {
    let product = first.compose(&second)?;
    if !first.is_involution() || !second.is_involution() || product != target {
        return Err(Error::Verification("dilatation factors do not recompose".into()));
    }
    Ok(InvolutionPair { first, second, product })
}

/// Result of [`quadratic_involution_from`].
#[derive(Clone, Debug)]
pub struct QuadraticInvolution {
    pub alpha: Mat<Elem>,
    pub iota: ProjectiveMap,
    /// Permutation `π` with `α(q_i) ∝ p_{π(i)}`.
    pub permutation: [usize; 3],
}

/// True if `f` contracts the line through `p` and `pp` onto the point `q`.
pub fn contracts_line_to(f: &ProjectiveMap, p: &[Elem], pp: &[Elem], q: &[Elem]) -> bool {
    let r = Ring::new(f.field().clone(), &["s", "t"]);
    let (s, t) = (r.var(0), r.var(1));
    let line: Vec<Poly<Elem>> = (0..3).map(|i| s.scale(&p[i]).add(&t.scale(&pp[i]))).collect();
    let img = f.pullback(&line);
    if img.iter().all(Poly::is_zero) {
        return false;
    }
    (0..3).all(|i| (0..3).all(|j| img[i].scale(&q[j]) == img[j].scale(&q[i])))
}

/// Given a quadratic map `f` with base points `p_1, p_2, p_3` and the points
/// `q_k` onto which `f` contracts the lines through `p_i, p_j`, finds a linear
/// `α` with `α ∘ f` an involution.
///
/// Candidates are `α = P·D·Π·Q⁻¹` where `P`, `Q` have the points as columns,
/// `Π` permutes the frame and `D` is a diagonal matrix of signs.
pub fn quadratic_involution_from(f: &ProjectiveMap, p: &[Vec<Elem>; 3], q: &[Vec<Elem>; 3], validate: bool) -> Result<QuadraticInvolution> {
    let field = f.field().clone();
    if f.degree() != 2 {
        return Err(Error::Hypothesis("f is not quadratic".into()));
    }
    let cols = |v: &[Vec<Elem>; 3]| Mat::from_fn(&field, 3, 3, |i, j| v[j][i].clone());
    let pm = cols(p);
    let qm = cols(q);
    if pm.det().is_zero() || qm.det().is_zero() {
        return Err(Error::Hypothesis("the points are collinear".into()));
    }
    if validate {
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            if !contracts_line_to(f, &p[i], &p[j], &q[k]) {
                return Err(Error::Hypothesis(format!("f does not contract the line through p{} and p{} to q{}", i + 1, j + 1, k + 1)));
            }
        }
    }
    let qinv = qm.inverse().unwrap();
    let perms = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let signs = [[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]];
    for perm in perms {
        for sg in signs {
            // Column i of D·Π is sg[perm[i]] e_{perm[i]}: sends q_i to ±p_{perm[i]}.
            let dp = Mat::from_fn(&field, 3, 3, |r, c| if r == perm[c] { field.from_i64(sg[r]) } else { field.zero() });
            let alpha = pm.mul(&dp).mul(&qinv);
            let iota = ProjectiveMap::linear(&alpha)?.compose(f)?;
            if iota.is_involution() {
                return Ok(QuadraticInvolution { alpha, iota, permutation: perm });
            }
        }
    }
    Err(Error::Hypothesis("no frame-permuting linear map makes the composition an involution".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn pmap(f: &Field, s: [&str; 3]) -> ProjectiveMap {
        let r = projective_ring(f);
        ProjectiveMap::new(s.map(|c| parse_poly(&r, c).unwrap())).unwrap()
    }

    #[test]
    fn sigma_squared_is_identity() {
        let q = Field::rationals();
        let s = ProjectiveMap::sigma(&q);
        let r = projective_ring(&q);
        let raw = s.pullback(s.components());
        assert_eq!(raw[0], parse_poly(&r, "x^2*y*z").unwrap());
        assert!(s.is_involution());
        assert_eq!(s.compose(&ProjectiveMap::identity(&q)).unwrap(), s);
    }

    #[test]
    fn scaled_sigma_is_involution() {
        let q = Field::rationals();
        assert!(pmap(&q, ["3*y*z", "-5*x*z", "x*y"]).is_involution());
        assert!(!pmap(&q, ["2*x", "y", "z"]).is_involution());
    }

    #[test]
    fn dilatations() {
        let q = Field::rationals();
        let p = jonq1_factor_scalar(&q.from_i64(5)).unwrap();
        assert_eq!(p.product.to_string(), "(5*x, y)");
        let p = jonq1_factor_scalar(&q.one()).unwrap();
        assert_eq!(p.first, p.second);
        assert!(p.product.is_identity());
        assert!(jonq1_factor_scalar(&q.zero()).is_err());
        let f3 = Field::prime_field(3).unwrap();
        let t = Ring::new(f3.clone(), &["x"]);
        let p = jonq1_factor_function(&t.rf_var(0)).unwrap();
        assert_eq!(p.product.to_string(), "(x, x*y)");
    }

    #[test]
    fn affine_round_trip() {
        let q = Field::rationals();
        let m = pmap(&q, ["y*z", "x*z", "x*y"]);
        let a = m.to_affine().unwrap();
        assert_eq!(a.to_string(), "(1/x, 1/y)");
        assert_eq!(a.to_projective().unwrap(), m);
    }

    #[test]
    fn quadratic_involution_for_sigma() {
        let q = Field::rationals();
        let e = |i: usize| (0..3).map(|k| if k == i { q.one() } else { q.zero() }).collect::<Vec<_>>();
        let pts = [e(0), e(1), e(2)];
        let s = ProjectiveMap::sigma(&q);
        let r = quadratic_involution_from(&s, &pts, &pts, true).unwrap();
        assert!(r.alpha.is_identity());
        assert_eq!(r.iota, s);
        // Swap the images of the first two lines.
        let swap = Mat::from_rows(vec![vec![q.zero(), q.one(), q.zero()], vec![q.one(), q.zero(), q.zero()], vec![q.zero(), q.zero(), q.one()]]);
        let f = ProjectiveMap::linear(&swap).unwrap().compose(&s).unwrap();
        let qs = [e(1), e(0), e(2)];
        let r = quadratic_involution_from(&f, &pts, &qs, true).unwrap();
        assert!(r.iota.is_involution());
        assert_eq!(r.alpha, swap);
    }
}
