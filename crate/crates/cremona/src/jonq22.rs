//! Jonquières maps of type 2+2: the chart maps `α, β, γ` and `ε = γ∘β∘α` that
//! straighten the pencil of conics through two 2-points onto `P¹×P¹`, the Galois
//! actions they induce, the invariance conditions on pairs `(M, M')`, and the
//! involutions `(1/(μx), 1/(λy))`.
//!
//! A semilinear map is stored as a plain map `P` together with an automorphism
//! `σ`; it acts by `pt ↦ P(pt^σ)`. Composition follows
//! `(P₁, σ₁)∘(P₂, σ₂) = (P₁∘P₂^{σ₁}, σ₁σ₂)`.

use serde::Serialize;

use crate::algebra::parse::parse_ratfun;
use crate::algebra::{function_field, pgl_equal, Conj, Elem, Field, GaloisGen, Mat, RatFun, Ring, Scalar};
use crate::error::{Error, Result};
use crate::fibration::Fibration;
use crate::maps::{affine_ring, AffinePairMap, ProjectiveMap};

/// The chart data attached to two quadratic extensions `L = k(θ)`, `L' = k(θ')`.
#[derive(Clone, Debug)]
pub struct ExorcistData {
    pub k: Field,
    /// Composite field `K = LL'`.
    pub big: Field,
    pub same_field: bool,
    pub min_l: Vec<Elem>,
    pub min_lp: Vec<Elem>,
    pub theta: Elem,
    pub theta_g: Elem,
    pub theta_p: Elem,
    pub theta_p_g: Elem,
    pub g: GaloisGen,
    /// Present when `L ≠ L'`: generates `Gal(K/L')` and acts on `L` as `g` does.
    pub h: Option<GaloisGen>,
    pub alpha: AffinePairMap,
    pub alpha_inv: AffinePairMap,
    pub beta: AffinePairMap,
    pub beta_inv: AffinePairMap,
    pub gamma: AffinePairMap,
    pub gamma_inv: AffinePairMap,
    pub eps: AffinePairMap,
    pub eps_inv: AffinePairMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    G,
    H,
}

/// The action `pt ↦ map(pt^σ)` on the chart of `P¹×P¹`.
#[derive(Clone, Debug)]
pub struct GaloisActionOnChart {
    pub which: Which,
    pub sigma: GaloisGen,
    pub map: AffinePairMap,
}

impl GaloisActionOnChart {
    /// `s ∘ j = j ∘ s` for a plain map `j`.
    pub fn commutes_with(&self, j: &AffinePairMap) -> Result<bool> {
        Ok(self.map.compose(&j.conj(&self.sigma))? == j.compose(&self.map)?)
    }

    /// `s ∘ s` is the identity.
    pub fn is_involutive(&self) -> Result<bool> {
        Ok(self.map.compose(&self.map.conj(&self.sigma))?.is_identity())
    }
}

/// Roots of a monic quadratic `[c0, c1, 1]` that lie in `field`, found by enumeration
/// over finite fields and through the discriminant over `Q`-towers.
fn roots_in(field: &Field, poly: &[Elem]) -> Vec<Elem> {
    let p: Vec<Elem> = poly.iter().map(|c| field.embed(c).unwrap()).collect();
    let val = |r: &Elem| r.mul(r).add(&p[1].mul(r)).add(&p[0]);
    if field.is_finite() {
        return field.elements(1 << 16).map(|es| es.into_iter().filter(|r| val(r).is_zero()).collect()).unwrap_or_default();
    }
    // r = (-c1 ± s)/2 with s^2 = disc; try s in the span of 1 and each generator.
    let two = field.from_i64(2);
    let disc = p[1].mul(&p[1]).sub(&p[0].mul(&field.from_i64(4)));
    let mut cands = vec![field.one()];
    cands.extend((0..field.num_steps()).map(|i| field.gen(i)));
    let mut out = Vec::new();
    for c in cands {
        let Some(ratio) = disc.div(&c.mul(&c)) else { continue };
        let Some(q) = ratio.as_rational() else { continue };
        if let Some(rt) = crate::algebra::base::rational_sqrt(&q) {
            let s = c.mul(&field.from_rational(&rt).unwrap());
            for sg in [s.clone(), s.neg()] {
                let r = p[1].neg().add(&sg).div(&two).unwrap();
                if val(&r).is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// The automorphism of order two of `K` over `k` when `K/k` is quadratic.
fn quadratic_generator(k: &Field, big: &Field) -> Result<GaloisGen> {
    if big.is_finite() {
        let frob = big.galois("frob").ok_or_else(|| Error::InvalidField("no Frobenius".into()))?;
        let r = k.degree();
        let mut g = big.identity_auto();
        for _ in 0..r {
            g = big.compose_auto(frob, &g, "g");
        }
        return Ok(g);
    }
    let top = big.num_steps() - 1;
    big.galois_generators()
        .iter()
        .find(|s| big.auto_image(s, top) != big.gen(top) && (0..top).all(|i| big.auto_image(s, i) == big.gen(i)))
        .cloned()
        .map(|mut s| {
            s.name = "g".into();
            s
        })
        .ok_or_else(|| Error::InvalidField("no automorphism of the quadratic step".into()))
}

fn quad_poly(field: &Field, roots_sum: &Elem, roots_prod: &Elem) -> Vec<Elem> {
    vec![roots_prod.clone(), roots_sum.neg(), field.one()]
}

/// Builds a map from two formulas in `x, y` and named constants of the field.
fn pair(r: &Ring<Elem>, a: &str, b: &str, vals: &[(&str, &Elem)]) -> Result<AffinePairMap> {
    let mut names = vec!["x", "y"];
    names.extend(vals.iter().map(|(n, _)| *n));
    let ring = Ring::new(r.base().clone(), &names);
    let mut point = vec![r.rf_var(0), r.rf_var(1)];
    point.extend(vals.iter().map(|(_, v)| r.rf_const((*v).clone())));
    let sub = |s: &str| parse_ratfun(&ring, s)?.subst(&point);
    AffinePairMap::new(sub(a)?, sub(b)?)
}

impl ExorcistData {
    /// Builds the chart maps from monic minimal polynomials `[c0, c1, 1]` of `θ` and `θ'`.
    pub fn new(min_l: &[Elem], min_lp: &[Elem]) -> Result<Self> {
        let k = min_l[0].field().clone();
        if min_l.len() != 3 || min_lp.len() != 3 || !min_l[2].is_one() || !min_lp[2].is_one() {
            return Err(Error::Hypothesis("expected monic quadratics [c0, c1, 1]".into()));
        }
        let l = k.extend(min_l)?;
        let mut names: Vec<String> = k.names().to_vec();
        names.push("th".into());
        let lifted: Vec<Elem> = min_lp.iter().map(|c| l.embed(c)).collect::<Result<_>>()?;
        let (big, same_field) = match l.extend(&lifted) {
            Ok(b) => {
                names.push("thp".into());
                (b, false)
            }
            Err(Error::Reducible { .. }) => {
                k.extend(min_lp)?;
                (l, true)
            }
            Err(e) => return Err(e),
        };
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let big = big.with_names(&refs);
        let theta = big.gen(k.num_steps());
        let (g, h, theta_p) = if same_field {
            let g = quadratic_generator(&k, &big)?;
            let tp = roots_in(&big, min_lp).into_iter().next().ok_or_else(|| Error::Verification("no root of the second quadratic".into()))?;
            (g, None, tp)
        } else {
            let s = big.galois_generators();
            let n = k.num_steps();
            let moves = |gen: &GaloisGen, i: usize| big.auto_image(gen, i) != big.gen(i);
            let h = s.iter().find(|x| moves(x, n) && !moves(x, n + 1)).cloned();
            let hp = s.iter().find(|x| !moves(x, n) && moves(x, n + 1)).cloned();
            let (Some(mut h), Some(hp)) = (h, hp) else {
                return Err(Error::InvalidField("the composite field lacks the expected automorphisms".into()));
            };
            h.name = "h".into();
            let g = big.compose_auto(&h, &hp, "g");
            (g, Some(h), big.gen(n + 1))
        };
        let theta_g = theta.conj(&g);
        let theta_p_g = theta_p.conj(&g);
        if theta_g == theta || theta_p_g == theta_p {
            return Err(Error::Hypothesis("θ^g = θ: the data are degenerate".into()));
        }
        let r = affine_ring(&big);
        let c = [("a", &theta), ("ag", &theta_g), ("b", &theta_p), ("bg", &theta_p_g)];
        let alpha = pair(&r, "x - b*y", "x - bg*y", &c)?;
        let alpha_inv = pair(&r, "(bg*x - b*y)/(bg - b)", "(x - y)/(bg - b)", &c)?;
        let beta = pair(&r, "(x - a)/(-x + ag)", "(y - ag)/(-y + a)", &c)?;
        let beta_inv = pair(&r, "(ag*x + a)/(x + 1)", "(a*y + ag)/(y + 1)", &c)?;
        let gamma = pair(&r, "x*y", "y", &c)?;
        let gamma_inv = pair(&r, "x/y", "y", &c)?;
        let eps = gamma.compose(&beta)?.compose(&alpha)?;
        let eps_inv = alpha_inv.compose(&beta_inv)?.compose(&gamma_inv)?;
        for (f, fi, name) in [(&alpha, &alpha_inv, "α"), (&beta, &beta_inv, "β"), (&gamma, &gamma_inv, "γ"), (&eps, &eps_inv, "ε")] {
            if !f.compose(fi)?.is_identity() || !fi.compose(f)?.is_identity() {
                return Err(Error::Verification(format!("{name} and its inverse do not compose to the identity")));
            }
        }
        Ok(ExorcistData {
            k,
            big,
            same_field,
            min_l: min_l.to_vec(),
            min_lp: min_lp.to_vec(),
            theta,
            theta_g,
            theta_p,
            theta_p_g,
            g,
            h,
            alpha,
            alpha_inv,
            beta,
            beta_inv,
            gamma,
            gamma_inv,
            eps,
            eps_inv,
        })
    }

    /// The pencil of conics through `[θ':1:0], [θ'^g:1:0], [θ:0:1], [θ^g:0:1]`.
    pub fn fibration(&self) -> Result<Fibration> {
        let down = |e: &Elem| self.big.restrict(e, &self.k).ok_or_else(|| Error::Verification("symmetric function outside k".into()));
        let my = quad_poly(&self.k, &down(&self.theta_p.add(&self.theta_p_g))?, &down(&self.theta_p.mul(&self.theta_p_g))?);
        let mz = quad_poly(&self.k, &down(&self.theta.add(&self.theta_g))?, &down(&self.theta.mul(&self.theta_g))?);
        Fibration::two_two(&my, &mz)
    }

    fn sigma(&self, which: Which) -> Result<&GaloisGen> {
        match which {
            Which::G => Ok(&self.g),
            Which::H => self.h.as_ref().ok_or_else(|| Error::Hypothesis("h exists only when L ≠ L'".into())),
        }
    }

    /// `ε∘σ∘ε⁻¹`, computed by composition with coefficient conjugation and checked
    /// against `(x, x/y)` for `g` and `(1/x, 1/y)` for `h`.
    pub fn conjugated_galois_action(&self, which: Which) -> Result<GaloisActionOnChart> {
        let sigma = self.sigma(which)?.clone();
        let map = self.eps.compose(&self.eps_inv.conj(&sigma))?;
        let r = affine_ring(&self.big);
        let closed = match which {
            Which::G => pair(&r, "x", "x/y", &[])?,
            Which::H => pair(&r, "1/x", "1/y", &[])?,
        };
        if map != closed {
            return Err(Error::Verification(format!("induced action {map} differs from the closed form {closed}")));
        }
        Ok(GaloisActionOnChart { which, sigma, map })
    }

    /// The actions for all generators of `Gal(K/k)`.
    pub fn actions(&self) -> Result<Vec<GaloisActionOnChart>> {
        let mut out = vec![self.conjugated_galois_action(Which::G)?];
        if self.h.is_some() {
            out.push(self.conjugated_galois_action(Which::H)?);
        }
        Ok(out)
    }

    /// The field `K(x)` in which the second matrix of a pair lives.
    pub fn kx(&self) -> Ring<Elem> {
        function_field(&self.big, "x")
    }

    /// Evaluates the invariance conditions of a pair `(M, M')`.
    pub fn invariance_check(&self, m: &Mat<Elem>, mp: &Mat<RatFun<Elem>>) -> Result<InvarianceReport> {
        if m.det().is_zero() || mp.det().is_zero() {
            return Err(Error::Hypothesis("both matrices must be invertible".into()));
        }
        let kx = mp.ctx().clone();
        let x = kx.rf_var(0);
        let g = &self.g;
        let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
        let (pa, pb, pc, pd) = (mp.get(0, 0), mp.get(0, 1), mp.get(1, 0), mp.get(1, 1));
        let mut conditions = Vec::new();
        conditions.push(("M = M^g".to_string(), pgl_equal(m, &m.conj(g))));
        let lin = |p: &Elem, q: &Elem| x.mul(&kx.rf_const(p.conj(g))).add(&kx.rf_const(q.conj(g)));
        let (ab, cd) = (lin(a, b), lin(c, d));
        let lhs = Mat::from_rows(vec![vec![pa.mul(&x), pb.clone()], vec![pc.mul(&x), pd.clone()]]);
        let rhs = Mat::from_rows(vec![vec![pd.conj(g).mul(&ab), pc.conj(g).mul(&ab)], vec![pb.conj(g).mul(&cd), pa.conj(g).mul(&cd)]]);
        conditions.push(("M' condition for g".to_string(), pgl_equal(&lhs, &rhs)));
        if let Some(h) = &self.h {
            let swapped = Mat::from_rows(vec![vec![d.conj(h), c.conj(h)], vec![b.conj(h), a.conj(h)]]);
            conditions.push(("M condition for h".to_string(), pgl_equal(m, &swapped)));
            let inv_x = x.inv().unwrap();
            let at_inv = |p: &RatFun<Elem>| p.subst(&[inv_x.clone()]);
            let lhs = Mat::from_rows(vec![vec![at_inv(pa)?, at_inv(pb)?], vec![at_inv(pc)?, at_inv(pd)?]]);
            let rhs = Mat::from_rows(vec![vec![pd.conj(h), pc.conj(h)], vec![pb.conj(h), pa.conj(h)]]);
            conditions.push(("M' condition for h".to_string(), pgl_equal(&lhs, &rhs)));
        }
        let invariant = conditions.iter().all(|(_, ok)| *ok);
        Ok(InvarianceReport { invariant, conditions })
    }

    /// The involution `(1/(μx), 1/(λy))`, `μ = λλ^g`, and its descent to a Cremona map over `k`.
    pub fn h_family_involution(&self, lambda: &Elem) -> Result<HFamilyInvolution> {
        let lambda = self.big.embed(lambda)?;
        if lambda.is_zero() {
            return Err(Error::Hypothesis("λ must be nonzero".into()));
        }
        if let Some(h) = &self.h {
            if !lambda.mul(&lambda.conj(h)).is_one() {
                return Err(Error::Hypothesis(format!("λλ^h = 1 fails for λ = {lambda}")));
            }
        }
        let mu = lambda.mul(&lambda.conj(&self.g));
        let r = affine_ring(&self.big);
        let iota = pair(&r, "1/(m*x)", "1/(l*y)", &[("m", &mu), ("l", &lambda)])?;
        if !iota.is_involution() {
            return Err(Error::Verification(format!("{iota} is not an involution")));
        }
        for act in self.actions()? {
            if !act.commutes_with(&iota)? {
                return Err(Error::Verification(format!("{iota} is not invariant under the action of {:?}", act.which)));
            }
        }
        let conj = self.eps_inv.compose(&iota)?.compose(&self.eps)?;
        let big_map = conj.to_projective()?;
        for s in [Some(&self.g), self.h.as_ref()].into_iter().flatten() {
            if big_map.conj(s) != big_map {
                return Err(Error::Verification("the conjugated map is not Galois invariant".into()));
            }
        }
        let map = big_map.restrict(&self.k).ok_or_else(|| Error::Verification("coefficients outside k".into()))?;
        if !map.is_involution() {
            return Err(Error::Verification(format!("{map} is not an involution")));
        }
        let alpha = self.fibration()?.preserves(&map).ok_or_else(|| Error::Verification("the map does not preserve the pencil".into()))?;
        Ok(HFamilyInvolution { lambda, mu, iota, map, alpha })
    }

    /// Moves an invariant pair to diagonal or antidiagonal shape, re-checking invariance after each move.
    pub fn diag_antidiag_normalize(&self, m: &Mat<Elem>, mp: &Mat<RatFun<Elem>>) -> Result<NormalizedPair> {
        let check = |m: &Mat<Elem>, mp: &Mat<RatFun<Elem>>, step: &str| -> Result<()> {
            if self.invariance_check(m, mp)?.invariant {
                Ok(())
            } else {
                Err(Error::Verification(format!("invariance lost after {step}")))
            }
        };
        check(m, mp, "input").map_err(|_| Error::Hypothesis("the pair is not invariant".into()))?;
        let kx = mp.ctx().clone();
        let z = RatFun::zero(&kx);
        let f = m.ctx().clone();
        let anti = |b: &Elem, c: &Elem| Mat::from_rows(vec![vec![f.zero(), b.clone()], vec![c.clone(), f.zero()]]);
        let rdiag = |a: &RatFun<Elem>, d: &RatFun<Elem>| Mat::from_rows(vec![vec![a.clone(), z.clone()], vec![z.clone(), d.clone()]]);
        let ranti = |b: &RatFun<Elem>, c: &RatFun<Elem>| Mat::from_rows(vec![vec![z.clone(), b.clone()], vec![c.clone(), z.clone()]]);
        let mut moves = Vec::new();
        let (pa, pb, pc, pd) = (mp.get(0, 0), mp.get(0, 1), mp.get(1, 0), mp.get(1, 1));
        let mp_diag;
        let mp2 = if pb.is_zero() && pc.is_zero() {
            mp_diag = true;
            mp.clone()
        } else if pa.is_zero() && pd.is_zero() {
            mp_diag = false;
            mp.clone()
        } else if !pa.is_zero() {
            moves.push("zero the antidiagonal of M'".to_string());
            mp_diag = true;
            rdiag(pa, pd)
        } else {
            moves.push("zero the diagonal of M'".to_string());
            mp_diag = false;
            ranti(pb, pc)
        };
        check(m, &mp2, "zeroing")?;
        let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
        let m_diag = if b.is_zero() && c.is_zero() {
            true
        } else if a.is_zero() && d.is_zero() {
            false
        } else {
            return Err(Error::Verification("M is neither diagonal nor antidiagonal".into()));
        };
        let x = kx.rf_var(0);
        let (tag, m3, mp3) = match (m_diag, mp_diag) {
            (true, true) => (PairShape::Diagonal, m.clone(), mp2),
            (false, false) => (PairShape::Antidiagonal, m.clone(), mp2),
            (true, false) => {
                moves.push("(diag(a,d), antidiag(B,C)) to (antidiag(d,a), antidiag(xC,B))".into());
                (PairShape::Antidiagonal, anti(d, a), ranti(&x.mul(mp2.get(1, 0)), mp2.get(0, 1)))
            }
            (false, true) => {
                moves.push("(antidiag(b,c), diag(A,D)) to (antidiag(b,c), antidiag(xA,D))".into());
                (PairShape::Antidiagonal, m.clone(), ranti(&x.mul(mp2.get(0, 0)), mp2.get(1, 1)))
            }
        };
        check(&m3, &mp3, "the shape move")?;
        Ok(NormalizedPair { shape: tag, m: m3, mp: mp3, moves })
    }
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// Each displayed condition with its outcome.
    pub conditions: Vec<(String, bool)>,
}

impl InvarianceReport {
    pub fn failed(&self) -> Vec<&str> {
        self.conditions.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct HFamilyInvolution {
    pub lambda: Elem,
    pub mu: Elem,
    pub iota: AffinePairMap,
    /// `ε⁻¹∘ι∘ε` with coefficients in `k`.
    pub map: ProjectiveMap,
    /// The induced automorphism of the base of the pencil.
    pub alpha: Mat<Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairShape {
    Diagonal,
    Antidiagonal,
}

#[derive(Clone, Debug)]
pub struct NormalizedPair {
    pub shape: PairShape,
    pub m: Mat<Elem>,
    pub mp: Mat<RatFun<Elem>>,
    pub moves: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(k: &Field, c0: i64, c1: i64) -> Vec<Elem> {
        vec![k.from_i64(c0), k.from_i64(c1), k.one()]
    }

    fn configs() -> Vec<ExorcistData> {
        let q = Field::rationals();
        let f5 = Field::prime_field(5).unwrap();
        vec![
            ExorcistData::new(&quad(&q, 1, 0), &quad(&q, 1, 0)).unwrap(),
            ExorcistData::new(&quad(&q, -2, 0), &quad(&q, -3, 0)).unwrap(),
            ExorcistData::new(&quad(&f5, -2, 0), &quad(&f5, -3, 0)).unwrap(),
        ]
    }

    #[test]
    fn chart_maps_over_gaussian_rationals() {
        let ex = &configs()[0];
        let r = affine_ring(&ex.big);
        let i = ex.big.gen(0);
        assert_eq!(i.conj(&ex.g), i.neg());
        assert_eq!(ex.alpha, pair(&r, "x - i*y", "x + i*y", &[("i", &i)]).unwrap());
        assert_eq!(ex.gamma_inv, pair(&r, "x/y", "y", &[]).unwrap());
        assert!(ex.beta.compose(&ex.beta_inv).unwrap().is_identity());
    }

    #[test]
    fn induced_actions_match_closed_forms() {
        for ex in configs() {
            let acts = ex.actions().unwrap();
            assert_eq!(acts.len(), if ex.same_field { 1 } else { 2 });
            for a in &acts {
                assert!(a.is_involutive().unwrap());
            }
            if let [g, h] = &acts[..] {
                let gh = g.map.compose(&h.map.conj(&g.sigma)).unwrap();
                let hg = h.map.compose(&g.map.conj(&h.sigma)).unwrap();
                assert_eq!(gh, hg);
            }
        }
        assert!(configs()[0].conjugated_galois_action(Which::H).is_err());
        assert!(configs()[2].same_field);
    }

    #[test]
    fn invariance_conditions() {
        let ex = &configs()[0];
        let k = &ex.big;
        let kx = ex.kx();
        let (z, o) = (k.zero(), k.one());
        let swap = Mat::from_rows(vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]);
        let rswap = swap.map_into(&kx, |e| kx.rf_const(e.clone()));
        assert!(ex.invariance_check(&swap, &rswap).unwrap().invariant);
        let i = k.gen(0);
        let p = parse_ratfun(&kx, "(x + th)/(x - th)").unwrap();
        let mp = Mat::from_rows(vec![vec![RatFun::zero(&kx), RatFun::one(&kx)], vec![p.clone(), RatFun::zero(&kx)]]);
        assert!(ex.invariance_check(&swap, &mp).unwrap().invariant);
        let d = Mat::from_rows(vec![vec![i.clone(), z.clone()], vec![z.clone(), o.clone()]]);
        let rep = ex.invariance_check(&d, &rswap).unwrap();
        assert!(rep.failed().contains(&"M = M^g"));
        // evaluation at a rational point keeps invariance
        let pm = p.eval(&[k.from_i64(3)]).unwrap();
        let mp3 = Mat::from_rows(vec![vec![RatFun::zero(&kx), RatFun::one(&kx)], vec![kx.rf_const(pm), RatFun::zero(&kx)]]);
        assert!(ex.invariance_check(&swap, &mp3).unwrap().invariant);
    }

    #[test]
    fn h_family() {
        let cs = configs();
        let ex = &cs[0];
        let one = ex.h_family_involution(&ex.big.one()).unwrap();
        assert_eq!(one.iota, pair(&affine_ring(&ex.big), "1/x", "1/y", &[]).unwrap());
        let res = ex.h_family_involution(&ex.big.gen(0)).unwrap();
        assert!(res.mu.is_one());
        assert!(res.map.is_involution());
        let ex = &cs[1];
        let (r2, r3) = (ex.big.gen(0), ex.big.gen(1));
        let h = ex.h.as_ref().unwrap();
        for u in [ex.big.one().add(&r2), r2.add(&r3)] {
            let lam = u.div(&u.conj(h)).unwrap();
            assert!(!lam.is_one());
            ex.h_family_involution(&lam).unwrap();
        }
        assert!(ex.h_family_involution(&ex.big.from_i64(2)).is_err());
    }

    #[test]
    fn normalization_moves() {
        let ex = &configs()[0];
        let k = &ex.big;
        let kx = ex.kx();
        let (z, o) = (k.zero(), k.one());
        let zr = RatFun::zero(&kx);
        let x = kx.rf_var(0);
        // (diag(1,1), antidiag(x, 1)) is invariant; it moves to an antidiagonal pair.
        let id = Mat::from_rows(vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]]);
        let mp = Mat::from_rows(vec![vec![zr.clone(), x.clone()], vec![RatFun::one(&kx), zr.clone()]]);
        assert!(ex.invariance_check(&id, &mp).unwrap().invariant);
        let n = ex.diag_antidiag_normalize(&id, &mp).unwrap();
        assert_eq!(n.shape, PairShape::Antidiagonal);
        assert_eq!(n.mp.get(0, 1), &x);
        assert_eq!(n.mp.get(1, 0), &x);
        let dd = Mat::from_rows(vec![vec![RatFun::one(&kx), zr.clone()], vec![zr.clone(), RatFun::one(&kx)]]);
        let n = ex.diag_antidiag_normalize(&id, &dd).unwrap();
        assert_eq!(n.shape, PairShape::Diagonal);
        assert!(n.moves.is_empty());
    }
}
