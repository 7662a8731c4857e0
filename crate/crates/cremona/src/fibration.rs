//! The three standard fibrations of the plane and the bridge between
//! similitudes of the pencil form over `k(t)` and fibre-preserving Cremona maps.
//!
//! Convention: `π = [q1 : q2]`, and the form `q1 + t·q2` vanishes on the fibre
//! over `[-t : 1]`, so the bridge substitutes `t ↦ -q1/q2`.

use std::fmt;

use serde::Serialize;

use crate::algebra::{function_field, pgl_equal, Elem, Field, Mat, Mono, Poly, RatFun, Ring, Scalar};
use crate::error::{Error, Result};
use crate::maps::{projective_ring, ProjectiveMap};
use crate::quadform::{IsotropyCertificate, IsotropyStatus, QuadraticSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FibrationKind {
    #[serde(rename = "type-1")]
    Lines,
    #[serde(rename = "type-2+2")]
    TwoTwo,
    #[serde(rename = "type-4")]
    Quartic,
}

impl fmt::Display for FibrationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FibrationKind::Lines => "type-1",
            FibrationKind::TwoTwo => "type-2+2",
            FibrationKind::Quartic => "type-4",
        })
    }
}

/// A geometric base point with coordinates in an extension of `k`.
#[derive(Clone, Debug)]
pub struct BasePoint {
    pub field: Field,
    pub coords: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub enum FibrationData {
    /// Centre of a pencil of lines.
    Center(Vec<Elem>),
    /// Monic quadratics `[c0, c1, 1]`: roots give points `[a:1:0]` and `[a':0:1]`.
    TwoTwo { my: Vec<Elem>, mz: Vec<Elem> },
    /// `t^4 + a t^3 + b t^2 + c t + d`.
    Quartic { a: Elem, b: Elem, c: Elem, d: Elem },
}

#[derive(Clone, Debug)]
pub struct Fibration {
    pub kind: FibrationKind,
    pub field: Field,
    pub q1: Poly<Elem>,
    pub q2: Poly<Elem>,
    pub data: FibrationData,
    pub base_points: Vec<BasePoint>,
    /// The base points form Galois orbits of size at least two (irreducibility was checked).
    pub certified: bool,
}

fn quadratic_roots(ext: &Field, poly: &[Elem]) -> Vec<Elem> {
    let th = ext.gen(ext.num_steps() - 1);
    let b = ext.embed(&poly[1]).expect("prefix");
    vec![th.clone(), b.neg().sub(&th)]
}

impl Fibration {
    /// The pencil of lines through `center`.
    pub fn lines(center: &[Elem]) -> Result<Self> {
        let field = center[0].field().clone();
        if center.len() != 3 || center.iter().all(Elem::is_zero) {
            return Err(Error::Hypothesis("the centre must be a point of the plane".into()));
        }
        let row = Mat::from_rows(vec![center.to_vec()]);
        let ns = row.nullspace();
        let r = projective_ring(&field);
        let form = |v: &Vec<Elem>| (0..3).fold(r.zero(), |acc, i| acc.add(&r.var(i).scale(&v[i])));
        Ok(Fibration {
            kind: FibrationKind::Lines,
            field,
            q1: form(&ns[0]),
            q2: form(&ns[1]),
            data: FibrationData::Center(center.to_vec()),
            base_points: vec![],
            certified: true,
        })
    }

    /// The pencil of conics through two conjugate pairs on the lines `z = 0` and `y = 0`.
    /// `my`, `mz` are monic quadratics `[c0, c1, 1]`, each checked irreducible.
    pub fn two_two(my: &[Elem], mz: &[Elem]) -> Result<Self> {
        Self::two_two_impl(my, mz, true)
    }

    fn two_two_impl(my: &[Elem], mz: &[Elem], check: bool) -> Result<Self> {
        let field = my[0].field().clone();
        if my.len() != 3 || mz.len() != 3 || !my[2].is_one() || !mz[2].is_one() {
            return Err(Error::Hypothesis("expected monic quadratics [c0, c1, 1]".into()));
        }
        let r = projective_ring(&field);
        let [x, y, z] = [r.var(0), r.var(1), r.var(2)];
        let q1 = x.pow(2).add(&x.mul(&y).scale(&my[1])).add(&y.pow(2).scale(&my[0])).add(&x.mul(&z).scale(&mz[1])).add(&z.pow(2).scale(&mz[0]));
        let q2 = y.mul(&z);
        let mut base_points = Vec::new();
        if check {
            let fy = field.extend(my)?;
            let fz = field.extend(mz)?;
            for a in quadratic_roots(&fy, my) {
                base_points.push(BasePoint { field: fy.clone(), coords: vec![a, fy.one(), fy.zero()] });
            }
            for a in quadratic_roots(&fz, mz) {
                base_points.push(BasePoint { field: fz.clone(), coords: vec![a, fz.zero(), fz.one()] });
            }
        }
        Ok(Fibration { kind: FibrationKind::TwoTwo, field, q1, q2, data: FibrationData::TwoTwo { my: my.to_vec(), mz: mz.to_vec() }, base_points, certified: check })
    }

    /// The pencil `[x²+axy+by²+cyz+dz² : y²−xz]` through the four points `[r²:r:1]`,
    /// `r` a root of the quartic, which is checked irreducible.
    pub fn quartic(a: &Elem, b: &Elem, c: &Elem, d: &Elem) -> Result<Self> {
        Self::quartic_impl(a, b, c, d, true)
    }

    /// The same pencil without the irreducibility check, so that rational base
    /// points may be planted on purpose.
    pub fn quartic_unchecked(a: &Elem, b: &Elem, c: &Elem, d: &Elem) -> Result<Self> {
        Self::quartic_impl(a, b, c, d, false)
    }

    fn quartic_impl(a: &Elem, b: &Elem, c: &Elem, d: &Elem, check: bool) -> Result<Self> {
        let field = a.field().clone();
        let r = projective_ring(&field);
        let [x, y, z] = [r.var(0), r.var(1), r.var(2)];
        let q1 = x.pow(2).add(&x.mul(&y).scale(a)).add(&y.pow(2).scale(b)).add(&y.mul(&z).scale(c)).add(&z.pow(2).scale(d));
        let q2 = y.pow(2).sub(&x.mul(&z));
        let mut base_points = Vec::new();
        if check {
            let ext = field.extend(&[d.clone(), c.clone(), b.clone(), a.clone(), field.one()])?;
            let th = ext.gen(ext.num_steps() - 1);
            let mut roots = vec![th.clone()];
            if let Some(q) = field.order() {
                // Conjugates over k = F_q are the q-power iterates.
                let mut cur = th.clone();
                for _ in 0..3 {
                    cur = cur.pow(q as u64);
                    roots.push(cur.clone());
                }
            }
            for rt in roots {
                base_points.push(BasePoint { field: ext.clone(), coords: vec![rt.mul(&rt), rt.clone(), ext.one()] });
            }
        }
        Ok(Fibration { kind: FibrationKind::Quartic, field, q1, q2, data: FibrationData::Quartic { a: a.clone(), b: b.clone(), c: c.clone(), d: d.clone() }, base_points, certified: check })
    }

    /// Every base point annihilates both generators.
    pub fn check_base_points(&self) -> bool {
        self.base_points.iter().all(|bp| {
            let r = projective_ring(&bp.field);
            let lift = |p: &Poly<Elem>| r.from_terms(p.terms().map(|(m, c)| (m.clone(), bp.field.embed(c).unwrap())));
            lift(&self.q1).eval(&bp.coords).is_zero() && lift(&self.q2).eval(&bp.coords).is_zero()
        })
    }

    /// `q1 + t q2` over `k(t)`.
    pub fn pencil_space(&self) -> Result<PencilSpace> {
        if self.kind == FibrationKind::Lines {
            return Err(Error::Hypothesis("a pencil of lines is not a conic pencil".into()));
        }
        let kt = function_field(&self.field, "t");
        let ring: Ring<RatFun<Elem>> = Ring::new(kt.clone(), &["x", "y", "z"]);
        let t = kt.rf_var(0);
        let lift = |p: &Poly<Elem>, s: &RatFun<Elem>| ring.from_terms(p.terms().map(|(m, c)| (m.clone(), kt.rf_const(c.clone()).mul(s))));
        let form = lift(&self.q1, &RatFun::one(&kt)).add(&lift(&self.q2, &t));
        Ok(PencilSpace { space: QuadraticSpace::new(form)?, kt })
    }

    /// Decides isotropy of the pencil form via common `k`-points of `q1 = q2 = 0`.
    pub fn pencil_isotropy(&self, height_bound: i64) -> IsotropyCertificate<RatFun<Elem>> {
        let kt = function_field(&self.field, "t");
        let wrap = |v: Vec<Elem>| -> Vec<RatFun<Elem>> { v.into_iter().map(|c| kt.rf_const(c)).collect() };
        if self.field.is_finite() {
            if let Ok(elems) = self.field.elements(1 << 12) {
                for p in projective_points(&self.field, &elems) {
                    if self.q1.eval(&p).is_zero() && self.q2.eval(&p).is_zero() {
                        return IsotropyCertificate { status: IsotropyStatus::Isotropic, witness: Some(wrap(p)), note: "rational base point of the pencil".into() };
                    }
                }
                return IsotropyCertificate { status: IsotropyStatus::AnisotropicByTheorem, witness: None, note: "no rational base point (exhaustive over the plane)".into() };
            }
        }
        if self.field.num_steps() == 0 && !self.field.is_finite() {
            let b = height_bound;
            let mut v = [-b, -b, -b];
            loop {
                if let Some(f) = v.iter().position(|&x| x != 0) {
                    if v[f] > 0 {
                        let p: Vec<Elem> = v.iter().map(|&x| self.field.from_i64(x)).collect();
                        if self.q1.eval(&p).is_zero() && self.q2.eval(&p).is_zero() {
                            return IsotropyCertificate { status: IsotropyStatus::Isotropic, witness: Some(wrap(p)), note: "rational base point of the pencil".into() };
                        }
                    }
                }
                let mut k = 0;
                while k < 3 {
                    v[k] += 1;
                    if v[k] <= b {
                        break;
                    }
                    v[k] = -b;
                    k += 1;
                }
                if k == 3 {
                    break;
                }
            }
        }
        if self.certified {
            return IsotropyCertificate {
                status: IsotropyStatus::AnisotropicByTheorem,
                witness: None,
                note: "base points are Galois orbits of size at least two by construction".into(),
            };
        }
        IsotropyCertificate { status: IsotropyStatus::Unknown, witness: None, note: "no certificate for the base points".into() }
    }

    /// `α ∈ PGL_2` with `π ∘ f = α ∘ π`, if any. The forms are moved into `f`'s field.
    pub fn preserves(&self, f: &ProjectiveMap) -> Option<Mat<Elem>> {
        let field = f.field().clone();
        let r = projective_ring(&field);
        let lift = |p: &Poly<Elem>| r.from_terms(p.terms().map(|(m, c)| (m.clone(), field.embed(c).unwrap())));
        let (q1, q2) = (lift(&self.q1), lift(&self.q2));
        let a = q1.subst(f.components());
        let b = q2.subst(f.components());
        // A (c q1 + d q2) = B (a q1 + b q2), unknowns (a, b, c, d).
        let cols = [b.mul(&q1).neg(), b.mul(&q2).neg(), a.mul(&q1), a.mul(&q2)];
        let mut monos: Vec<Mono> = cols.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
        monos.sort();
        monos.dedup();
        if monos.is_empty() {
            return None;
        }
        let m = Mat::from_fn(&field, monos.len(), 4, |i, j| cols[j].coeff(&monos[i]));
        let ns = m.nullspace();
        let to_mat = |v: &[Elem]| Mat::from_rows(vec![vec![v[0].clone(), v[1].clone()], vec![v[2].clone(), v[3].clone()]]);
        for v in &ns {
            let al = to_mat(v);
            if !al.det().is_zero() {
                return Some(al);
            }
        }
        if ns.len() >= 2 {
            let s: Vec<Elem> = ns[0].iter().zip(&ns[1]).map(|(x, y)| x.add(y)).collect();
            let al = to_mat(&s);
            if !al.det().is_zero() {
                return Some(al);
            }
        }
        None
    }

    pub fn fixes(&self, f: &ProjectiveMap) -> bool {
        self.preserves(f).is_some_and(|a| pgl_equal(&a, &Mat::identity(a.ctx(), 2)))
    }

    /// The Cremona map `[x:y:z] ↦ A(−q1/q2)·(x,y,z)` of a similitude `A` of the pencil form.
    pub fn pgo_to_cremona(&self, a: &Mat<RatFun<Elem>>) -> Result<ProjectiveMap> {
        if self.kind == FibrationKind::Lines {
            return Err(Error::Hypothesis("a pencil of lines is not a conic pencil".into()));
        }
        let kt = a.ctx().clone();
        // Common denominator of all nine entries.
        let mut den = kt.one();
        for e in a.entries() {
            let d = e.denom();
            let g = den.gcd(d);
            den = den.mul(&d.div_exact(&g).unwrap());
        }
        let mut nums: Vec<Poly<Elem>> = a.entries().iter().map(|e| e.numer().mul(&den.div_exact(e.denom()).unwrap())).collect();
        let content = nums.iter().fold(kt.zero(), |g, n| g.gcd(n));
        if content.is_zero() {
            return Err(Error::Invalid("the zero matrix is not a similitude".into()));
        }
        for n in nums.iter_mut() {
            *n = n.div_exact(&content).unwrap();
        }
        let deg = nums.iter().map(|p| p.total_degree()).max().unwrap_or(0);
        let r = projective_ring(&self.field);
        let mq1 = self.q1.neg();
        let p1: Vec<Poly<Elem>> = (0..=deg).map(|k| mq1.pow(k)).collect();
        let p2: Vec<Poly<Elem>> = (0..=deg).map(|k| self.q2.pow(k)).collect();
        let forms: Vec<Poly<Elem>> = nums
            .iter()
            .map(|n| {
                let mut acc = r.zero();
                for (m, c) in n.terms() {
                    let k = m.0[0];
                    acc = acc.add(&p1[k as usize].mul(&p2[(deg - k) as usize]).scale(c));
                }
                acc
            })
            .collect();
        let vars = r.vars();
        let comps: Vec<Poly<Elem>> = (0..3).map(|i| (0..3).fold(r.zero(), |acc, j| acc.add(&forms[3 * i + j].mul(&vars[j])))).collect();
        let f = ProjectiveMap::new(comps.try_into().unwrap())?;
        if !self.fixes(&f) {
            return Err(Error::Verification(format!("image map {f} does not fix the fibration")));
        }
        Ok(f)
    }

    /// Factors a determinant-one isometry of the pencil form into fibre-fixing Cremona involutions.
    pub fn fiberwise_involution_factorization(&self, a: &Mat<RatFun<Elem>>) -> Result<Vec<ProjectiveMap>> {
        let ps = self.pencil_space()?;
        let cert = self.pencil_isotropy(20);
        if !cert.is_anisotropic() {
            return Err(Error::Hypothesis("the pencil has a rational base point".into()));
        }
        let factors = ps.space.so_involution_factorization(a, &cert)?;
        let prod = factors.iter().fold(Mat::identity(a.ctx(), 3), |acc, f| acc.mul(&f.matrix));
        if !pgl_equal(&prod, a) {
            return Err(Error::Verification("factors do not recompose to A".into()));
        }
        let mut maps = Vec::with_capacity(factors.len());
        for f in &factors {
            // The image of F is x ↦ F(t(x))·x and it fixes t, so its square is the image
            // of F²; F² being scalar makes the map an involution.
            if !pgl_equal(&f.matrix.mul(&f.matrix), &Mat::identity(a.ctx(), 3)) {
                return Err(Error::Verification(format!("factor {} is not an involution", f.matrix)));
            }
            maps.push(self.pgo_to_cremona(&f.matrix)?);
        }
        Ok(maps)
    }
}

/// The quadratic space `(k(t)^3, q1 + t q2)`.
#[derive(Clone, Debug)]
pub struct PencilSpace {
    pub space: QuadraticSpace<RatFun<Elem>>,
    pub kt: Ring<Elem>,
}

/// All points of `P^2(k)` with the first nonzero coordinate equal to one.
pub fn projective_points(field: &Field, elems: &[Elem]) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    for lead in 0..3 {
        let rest = 2 - lead;
        let n = elems.len().pow(rest as u32);
        for mut idx in 0..n {
            let mut v = vec![field.zero(); 3];
            v[lead] = field.one();
            for x in v.iter_mut().skip(lead + 1) {
                *x = elems[idx % elems.len()].clone();
                idx /= elems.len();
            }
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::quadform::Degeneracy;

    fn pm(f: &Field, s: [&str; 3]) -> ProjectiveMap {
        let r = projective_ring(f);
        ProjectiveMap::new(s.map(|c| parse_poly(&r, c).unwrap())).unwrap()
    }

    fn first_quartic(f: &Field) -> Fibration {
        let elems = f.elements(100).unwrap();
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    for d in &elems {
                        if let Ok(fib) = Fibration::quartic(a, b, c, d) {
                            return fib;
                        }
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn lines_through_y_point() {
        let q = Field::rationals();
        let fib = Fibration::lines(&[q.zero(), q.one(), q.zero()]).unwrap();
        assert_eq!(fib.q1.to_string(), "x");
        assert_eq!(fib.q2.to_string(), "z");
        let a = fib.preserves(&pm(&q, ["x", "y", "3*z"])).unwrap();
        assert!(pgl_equal(&a, &Mat::from_rows(vec![vec![q.one(), q.zero()], vec![q.zero(), q.from_i64(3)]])));
        assert!(fib.fixes(&ProjectiveMap::identity(&q)));
    }

    #[test]
    fn quartic_base_points_and_defect() {
        for p in [2, 3, 5] {
            let f = Field::prime_field(p).unwrap();
            let fib = first_quartic(&f);
            assert_eq!(fib.base_points.len(), 4);
            assert!(fib.check_base_points());
            let ps = fib.pencil_space().unwrap();
            let want = if p == 2 { Degeneracy::Defect(1) } else { Degeneracy::NonDegenerate };
            assert_eq!(ps.space.radical_and_defect().class, want);
            assert_eq!(fib.pencil_isotropy(5).status, IsotropyStatus::AnisotropicByTheorem);
        }
    }

    #[test]
    fn planted_base_point_is_found() {
        let f = Field::prime_field(3).unwrap();
        // t^4 - 1 has the root 1, so [1:1:1] is a rational base point.
        let z = f.zero();
        let fib = Fibration::quartic_unchecked(&z, &z, &z, &f.from_i64(-1)).unwrap();
        let c = fib.pencil_isotropy(5);
        assert_eq!(c.status, IsotropyStatus::Isotropic);
        assert!(Fibration::quartic(&z, &z, &z, &f.from_i64(-1)).is_err());
    }

    #[test]
    fn two_two_formula() {
        let q = Field::rationals();
        let fib = Fibration::two_two(&[q.one(), q.zero(), q.one()], &[q.from_i64(-2), q.zero(), q.one()]).unwrap();
        assert_eq!(fib.q1.to_string(), "x^2 + y^2 - 2*z^2");
        assert!(fib.check_base_points());
        assert_eq!(fib.pencil_isotropy(3).status, IsotropyStatus::AnisotropicByTheorem);
    }

    #[test]
    fn constant_reflection_gives_fibre_fixing_involution() {
        let f = Field::prime_field(5).unwrap();
        let fib = first_quartic(&f);
        let ps = fib.pencil_space().unwrap();
        let a: Vec<RatFun<Elem>> = [1, 0, 0].iter().map(|&v| ps.kt.rf_const(f.from_i64(v))).collect();
        let tau = ps.space.reflection(&a).unwrap();
        let m = fib.pgo_to_cremona(&tau.matrix).unwrap();
        assert!(m.is_involution());
        assert!(fib.fixes(&m));
        let id = fib.pgo_to_cremona(&Mat::identity(&ps.kt, 3)).unwrap();
        assert!(id.is_identity());
    }
}
