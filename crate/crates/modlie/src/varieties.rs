//! Rational points of the conical varieties attached to `(g, [p])`:
//! the nullcone `V(g) = {x : x^[p] = 0}`, the strata
//! `N_i(g) = {x : (ad x)^i = 0}` (with `Sw(g) = N_2(g)` the sandwich set),
//! and the projective variety `E(2, g)` of two-dimensional elementary
//! abelian subalgebras, together with the exponential
//! `exp(x) = sum_{i<p} (ad x)^i / i!` and the admissibility test.
//!
//! Enumerations run over the rational points of `P(g)(F_{p^k})`; point
//! counts over a finite field certify equalities of point sets but not
//! topological statements, so connectedness is never decided here.

use std::collections::BTreeSet;

use crate::field::{Fq, Scalar};
use crate::liealg::{Automorphism, LieAlgebra, LieElement};
use crate::linalg::{Matrix, Subspace};
use crate::{Error, Result};

/// A point of `P(g)`: the coefficient vector scaled so its first nonzero
/// coordinate is one. Equality of values is equality of lines.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    /// Canonicalize a nonzero vector.
    pub fn new(v: &[Scalar], fq: &Fq) -> Result<ProjPoint> {
        let lead = v
            .iter()
            .position(|&c| c != 0)
            .ok_or_else(|| Error::Range("zero vector has no projective class".into()))?;
        let inv = fq.inv(v[lead]);
        Ok(ProjPoint {
            coords: v.iter().map(|&c| fq.mul(inv, c)).collect(),
        })
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn representative(&self) -> LieElement {
        self.coords.clone()
    }
}

/// A two-dimensional subspace of `g` in canonical (RREF) form. Members of
/// `E(2, g)` additionally satisfy `[v, v] = 0` and `v` inside `V(g)`,
/// which [`elementary_planes`] checks before returning them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Plane {
    basis: [Vec<Scalar>; 2],
    ambient: usize,
}

impl Plane {
    pub fn new(a: &[Scalar], b: &[Scalar], fq: &Fq) -> Result<Plane> {
        let sub = Subspace::from_vectors(&[a.to_vec(), b.to_vec()], a.len(), fq);
        if sub.dim() != 2 {
            return Err(Error::Dimension("vectors do not span a plane".into()));
        }
        Ok(Plane {
            basis: [sub.basis().row_vec(0), sub.basis().row_vec(1)],
            ambient: a.len(),
        })
    }

    pub fn from_subspace(sub: &Subspace) -> Result<Plane> {
        if sub.dim() != 2 {
            return Err(Error::Dimension(format!(
                "expected dimension 2, got {}",
                sub.dim()
            )));
        }
        Ok(Plane {
            basis: [sub.basis().row_vec(0), sub.basis().row_vec(1)],
            ambient: sub.ambient_dim(),
        })
    }

    pub fn basis(&self) -> (&[Scalar], &[Scalar]) {
        (&self.basis[0], &self.basis[1])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn subspace(&self, fq: &Fq) -> Subspace {
        Subspace::from_vectors(
            &[self.basis[0].clone(), self.basis[1].clone()],
            self.ambient,
            fq,
        )
    }

    pub fn contains(&self, v: &[Scalar], fq: &Fq) -> bool {
        self.subspace(fq).contains(v, fq)
    }

    /// All rational points of `P(plane)` — `q + 1` lines.
    pub fn proj_points(&self, fq: &Fq) -> Vec<ProjPoint> {
        let mut out = Vec::new();
        let (a, b) = self.basis();
        out.push(ProjPoint::new(b, fq).expect("basis vector nonzero"));
        for t in fq.elements() {
            let v: Vec<Scalar> = a
                .iter()
                .zip(b)
                .map(|(&x, &y)| fq.add(x, fq.mul(t, y)))
                .collect();
            out.push(ProjPoint::new(&v, fq).expect("nonzero"));
        }
        out
    }

    /// Image of the plane under an invertible map, re-canonicalized.
    pub fn map(&self, phi: &Automorphism, fq: &Fq) -> Plane {
        let a = phi.apply(&self.basis[0], fq);
        let b = phi.apply(&self.basis[1], fq);
        Plane::new(&a, &b, fq).expect("automorphism preserves dimension")
    }

    /// True when the plane is elementary abelian inside `V(g)`: the basis
    /// brackets to zero and both basis vectors are p-nilpotent (which by
    /// Jacobson's formula makes every element of the plane p-nilpotent).
    pub fn is_elementary(&self, alg: &LieAlgebra, fq: &Fq) -> bool {
        let (a, b) = self.basis();
        alg.bracket(a, b, fq).iter().all(|&c| c == 0)
            && alg.jacobson_p_power(a, fq).iter().all(|&c| c == 0)
            && alg.jacobson_p_power(b, fq).iter().all(|&c| c == 0)
    }
}

/// Enumeration guards; `plane_bound` limits the nullcone size fed into
/// plane enumeration and `point_bound` the ambient projective space.
#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    pub point_bound: u64,
    pub plane_bound: u64,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            point_bound: 2_000_000,
            plane_bound: 100_000,
        }
    }
}

/// Number of points of `P^{n-1}(F_q)`.
pub fn proj_count(q: u64, n: usize) -> u64 {
    let mut acc = 0u64;
    let mut pw = 1u64;
    for _ in 0..n {
        acc += pw;
        pw = pw.saturating_mul(q);
    }
    acc
}

/// Visit every point of `P^{n-1}(F_q)` via canonical representatives.
fn for_each_proj_point(n: usize, fq: &Fq, mut f: impl FnMut(&[Scalar])) {
    let q = fq.q();
    let mut v = vec![0u64; n];
    for lead in 0..n {
        // coords before `lead` are zero, coord `lead` is one, rest free.
        let free = n - lead - 1;
        let total = q.pow(free as u32);
        for idx in 0..total {
            for c in v.iter_mut() {
                *c = 0;
            }
            v[lead] = 1;
            let mut m = idx;
            for t in 0..free {
                v[lead + 1 + t] = m % q;
                m /= q;
            }
            f(&v);
        }
    }
}

fn guard(count: u64, bound: u64) -> Result<()> {
    if count > bound {
        Err(Error::EnumerationBound(count, bound))
    } else {
        Ok(())
    }
}

/// All rational points of the projectivized nullcone `P(V(g))(F_{p^k})`.
pub fn nullcone_points(alg: &LieAlgebra, fq: &Fq, limits: &EnumLimits) -> Result<Vec<ProjPoint>> {
    assert_eq!(fq.p(), alg.p());
    guard(proj_count(fq.q(), alg.dim()), limits.point_bound)?;
    let mut out = Vec::new();
    for_each_proj_point(alg.dim(), fq, |v| {
        if alg.jacobson_p_power(v, fq).iter().all(|&c| c == 0) {
            out.push(ProjPoint { coords: v.to_vec() });
        }
    });
    Ok(out)
}

/// Rational points of the stratum `N_i(g) = {x : (ad x)^i = 0}`; `i = 2`
/// is the sandwich set `Sw(g)`.
pub fn stratum_points(
    alg: &LieAlgebra,
    i: u64,
    fq: &Fq,
    limits: &EnumLimits,
) -> Result<Vec<ProjPoint>> {
    if i < 2 || i > alg.p() {
        return Err(Error::Range(format!("stratum index {i} must lie in 2..=p")));
    }
    guard(proj_count(fq.q(), alg.dim()), limits.point_bound)?;
    let mut out = Vec::new();
    for_each_proj_point(alg.dim(), fq, |v| {
        if alg.ad(v, fq).pow(i, fq).is_zero() {
            out.push(ProjPoint { coords: v.to_vec() });
        }
    });
    Ok(out)
}

pub fn sandwich_points(alg: &LieAlgebra, fq: &Fq, limits: &EnumLimits) -> Result<Vec<ProjPoint>> {
    stratum_points(alg, 2, fq, limits)
}

/// Verify on rational points that the sandwich set is a Lie subset:
/// `[s, t]` lies in `Sw(g)` for all enumerated sandwich pairs. Returns the
/// violating pairs (none are expected).
pub fn sandwich_lie_subset_check(
    alg: &LieAlgebra,
    fq: &Fq,
    limits: &EnumLimits,
) -> Result<Vec<(ProjPoint, ProjPoint)>> {
    let sw = sandwich_points(alg, fq, limits)?;
    let mut violations = Vec::new();
    for a in &sw {
        for b in &sw {
            let c = alg.bracket(a.coords(), b.coords(), fq);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            if !alg.ad(&c, fq).pow(2, fq).is_zero() {
                violations.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(violations)
}

/// The truncated exponential `exp(x) = sum_{i=0}^{p-1} (ad x)^i / i!`,
/// defined on `N_p(g)`. The inverse factorials are taken in `F_p`, which
/// is exact since `i <= p - 1`.
pub fn exp(alg: &LieAlgebra, x: &[Scalar], fq: &Fq) -> Result<Automorphism> {
    let ad = alg.ad(x, fq);
    if !ad.pow(alg.p(), fq).is_zero() {
        return Err(Error::NotNilpotent("exp requires (ad x)^p = 0".into()));
    }
    let n = alg.dim();
    let mut acc = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    let mut fact_inv = fq.one();
    for i in 1..alg.p() {
        term = term.mul(&ad, fq);
        fact_inv = fq.mul(fact_inv, fq.inv(fq.from_int(i as i64)));
        acc = acc.add(&term.scale(fact_inv, fq), fq);
    }
    Ok(Automorphism::new(acc))
}

/// Outcome of the admissibility test: both conditions are checked on all
/// enumerated points of `N_3(g)` and the first failing witness is kept.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// Witness for `N_3(g)` escaping the nullcone.
    pub nullcone_witness: Option<ProjPoint>,
    /// Witness whose exponential is not a restricted automorphism.
    pub aut_p_witness: Option<ProjPoint>,
    pub stratum_size: usize,
}

/// A restricted Lie algebra is admissible when `N_3(g)` lies inside the
/// nullcone and its exponentials are restricted automorphisms.
pub fn admissible(alg: &LieAlgebra, fq: &Fq, limits: &EnumLimits) -> Result<AdmissibilityReport> {
    let n3 = stratum_points(alg, 3.min(alg.p()), fq, limits)?;
    let mut report = AdmissibilityReport {
        admissible: true,
        nullcone_witness: None,
        aut_p_witness: None,
        stratum_size: n3.len(),
    };
    for pt in &n3 {
        if report.nullcone_witness.is_none()
            && alg
                .jacobson_p_power(pt.coords(), fq)
                .iter()
                .any(|&c| c != 0)
        {
            report.nullcone_witness = Some(pt.clone());
            report.admissible = false;
        }
        if report.aut_p_witness.is_none() {
            let e = exp(alg, pt.coords(), fq)?;
            if !e.is_p_automorphism(alg, fq) {
                report.aut_p_witness = Some(pt.clone());
                report.admissible = false;
            }
        }
        if report.nullcone_witness.is_some() && report.aut_p_witness.is_some() {
            break;
        }
    }
    Ok(report)
}

/// All rational points of `E(2, g)(F_{p^k})`: planes spanned by commuting
/// nullcone points. For commuting p-nilpotent `x, y` Jacobson's formula
/// collapses, so spanning-pair checks certify the whole plane.
pub fn elementary_planes(alg: &LieAlgebra, fq: &Fq, limits: &EnumLimits) -> Result<Vec<Plane>> {
    let points = nullcone_points(alg, fq, limits)?;
    guard(points.len() as u64, limits.plane_bound)?;
    let mut set: BTreeSet<Plane> = BTreeSet::new();
    for (i, x) in points.iter().enumerate() {
        let ad_x = alg.ad(x.coords(), fq);
        for y in points.iter().skip(i + 1) {
            if ad_x.apply(y.coords(), fq).iter().any(|&c| c != 0) {
                continue;
            }
            if let Ok(plane) = Plane::new(x.coords(), y.coords(), fq) {
                set.insert(plane);
            }
        }
    }
    let planes: Vec<Plane> = set.into_iter().collect();
    for pl in &planes {
        debug_assert!(pl.is_elementary(alg, fq));
    }
    Ok(planes)
}
