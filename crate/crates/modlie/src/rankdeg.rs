//! Rank and degree invariants of `U_0(g)`-modules: local Jordan types,
//! constant `j`-rank and equal `j`-images predicates, generic kernels, the
//! `mod^j` membership test, and the `j`-degree of a restriction to an
//! elementary abelian plane.
//!
//! The degree of the morphism `P(e) -> Gr` sending a point to the image of
//! `x_M^j` is defined through the Pluecker embedding: a reduced defining
//! system of minors of `Y(s,t) = (s a_M + t b_M)^j` has a well-defined
//! common degree. Dividing the exterior-power matrix of `Y` by the form
//! gcd of its entries computes that degree, but the compound matrix is far
//! too large at interesting sizes, so the production path computes the
//! same number from two minimal homogeneous kernel bases:
//!
//! * the polynomial left kernel of `Y` is a free graded module whose
//!   minimal basis `C` cuts out the saturated image subbundle, and
//! * the minimal indices `e_i` of the right kernel of `C` give the degree
//!   as `sum e_i`, the negative of the image subbundle degree.
//!
//! A small-scale reference implementation of the compound-gcd route is
//! kept alongside and the two are cross-checked in the tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::field::{Fq, Scalar};
use crate::forms::{form_gcd, BinaryForm};
use crate::liealg::{Automorphism, LieAlgebra};
use crate::linalg::{binomial, kernel_space, subsets_lex, Matrix, Subspace};
use crate::modules::Module;
use crate::varieties::{elementary_planes, nullcone_points, EnumLimits, Plane, ProjPoint};
use crate::{Error, Result};

// ----- Jordan types -----

/// Block multiplicities of a p-nilpotent operator: `multiplicities[i-1]`
/// counts Jordan blocks of size `i`, for `i = 1..=p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanType {
    pub multiplicities: Vec<usize>,
}

impl JordanType {
    pub fn dim(&self) -> usize {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, &a)| (i + 1) * a)
            .sum()
    }

    /// Rank sequence `rk(x), rk(x^2), ...` recovered from the type.
    pub fn rank_sequence(&self) -> Vec<usize> {
        let p = self.multiplicities.len();
        (1..=p)
            .map(|j| {
                self.multiplicities
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| a * (i + 1).saturating_sub(j))
                    .sum()
            })
            .collect()
    }
}

impl std::fmt::Display for JordanType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &a) in self.multiplicities.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}[{}]", a, i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Local Jordan type of `M` at a nonzero p-nilpotent point, via the rank
/// formula `a_i = rk(x^{i-1}) - 2 rk(x^i) + rk(x^{i+1})`.
pub fn jordan_type(m: &Module, x: &[Scalar], fq: &Fq) -> Result<JordanType> {
    if x.iter().all(|&c| c == 0) {
        return Err(Error::NotNilpotent(
            "jordan type of zero is undefined".into(),
        ));
    }
    if m
        .algebra()
        .jacobson_p_power(x, fq)
        .iter()
        .any(|&c| c != 0)
    {
        return Err(Error::NotNilpotent("point is outside the nullcone".into()));
    }
    let p = m.algebra().p() as usize;
    let op = m.action_of(x, fq);
    let mut ranks = vec![m.dim()];
    let mut pw = op.clone();
    for _ in 1..=p {
        ranks.push(pw.rank(fq));
        pw = pw.mul(&op, fq);
    }
    ranks.push(0);
    let mut mult = vec![0usize; p];
    for i in 1..=p {
        let a = (ranks[i - 1] + ranks[i + 1]).checked_sub(2 * ranks[i]);
        mult[i - 1] = a.expect("rank sequence of a nilpotent operator is convex");
    }
    let jt = JordanType {
        multiplicities: mult,
    };
    debug_assert_eq!(jt.dim(), m.dim());
    Ok(jt)
}

// ----- rank profiles -----

/// Per-point power ranks over the enumerated nullcone, with the constancy
/// verdict for the requested `j` and the generic (maximal) `j`-rank. The
/// verdict is a rational-point statement at the recorded level `k`.
#[derive(Debug, Clone)]
pub struct RankProfile {
    pub j: usize,
    /// Each entry: the point and its rank sequence `rk(x^1), ..., rk(x^{p-1})`.
    pub points: Vec<(ProjPoint, Vec<usize>)>,
    pub constant: bool,
    pub generic_rank: usize,
    pub level: u32,
}

pub fn rank_profile(m: &Module, j: usize, fq: &Fq, limits: &EnumLimits) -> Result<RankProfile> {
    let p = m.algebra().p() as usize;
    if j == 0 || j >= p {
        return Err(Error::Range(format!("j = {j} must lie in 1..p")));
    }
    let pts = nullcone_points(m.algebra(), fq, limits)?;
    if pts.is_empty() {
        return Err(Error::EmptyNullcone);
    }
    let mut rows = Vec::with_capacity(pts.len());
    for pt in pts {
        let op = m.action_of(pt.coords(), fq);
        let mut seq = Vec::with_capacity(p - 1);
        let mut pw = op.clone();
        for _ in 1..p {
            seq.push(pw.rank(fq));
            pw = pw.mul(&op, fq);
        }
        rows.push((pt, seq));
    }
    let jranks: Vec<usize> = rows.iter().map(|(_, seq)| seq[j - 1]).collect();
    let generic = *jranks.iter().max().unwrap();
    let constant = jranks.iter().all(|&r| r == generic);
    Ok(RankProfile {
        j,
        points: rows,
        constant,
        generic_rank: generic,
        level: fq.k(),
    })
}

// ----- equal images -----

/// Image classes of `x -> im x_M^j` over an enumerated point set.
#[derive(Debug, Clone)]
pub struct EipReport {
    pub j: usize,
    pub equal: bool,
    /// Canonical image subspaces with the points mapping to them.
    pub classes: Vec<(Subspace, Vec<ProjPoint>)>,
}

pub fn eip_check(m: &Module, j: usize, fq: &Fq, limits: &EnumLimits) -> Result<EipReport> {
    let pts = nullcone_points(m.algebra(), fq, limits)?;
    if pts.is_empty() {
        return Err(Error::EmptyNullcone);
    }
    Ok(eip_on_points(m, j, &pts, fq))
}

/// Same check on an explicit point set (plane restrictions and suites).
pub fn eip_on_points(m: &Module, j: usize, pts: &[ProjPoint], fq: &Fq) -> EipReport {
    let mut classes: BTreeMap<Subspace, Vec<ProjPoint>> = BTreeMap::new();
    for pt in pts {
        let img =
            crate::linalg::column_space(&m.action_of(pt.coords(), fq).pow(j as u64, fq), fq);
        classes.entry(img).or_default().push(pt.clone());
    }
    EipReport {
        j,
        equal: classes.len() == 1,
        classes: classes.into_iter().collect(),
    }
}

// ----- generic kernels -----

/// `K^j(M) = sum over the given points of ker x_M^j`.
pub fn generic_kernel_points(m: &Module, j: usize, pts: &[ProjPoint], fq: &Fq) -> Subspace {
    let mut acc = Subspace::zero(m.dim());
    for pt in pts {
        let ker = kernel_space(&m.action_of(pt.coords(), fq).pow(j as u64, fq), fq);
        acc = acc.sum(&ker, fq).expect("common ambient");
        if acc.dim() == m.dim() {
            break;
        }
    }
    acc
}

pub fn generic_kernel(m: &Module, j: usize, fq: &Fq, limits: &EnumLimits) -> Result<Subspace> {
    let pts = nullcone_points(m.algebra(), fq, limits)?;
    if pts.is_empty() {
        return Err(Error::EmptyNullcone);
    }
    Ok(generic_kernel_points(m, j, &pts, fq))
}

pub fn generic_kernel_plane(m: &Module, plane: &Plane, j: usize, fq: &Fq) -> Subspace {
    generic_kernel_points(m, j, &plane.proj_points(fq), fq)
}

/// Membership in `mod^j`: `x_M^j = 0` at every enumerated nullcone point.
pub fn mod_j_membership(m: &Module, j: usize, fq: &Fq, limits: &EnumLimits) -> Result<bool> {
    let pts = nullcone_points(m.algebra(), fq, limits)?;
    Ok(pts
        .iter()
        .all(|pt| m.action_of(pt.coords(), fq).pow(j as u64, fq).is_zero()))
}

// ----- homogeneous syzygy machinery -----

/// Homogeneous polynomial vector of degree `deg` in `(s, t)` with values
/// in `F_q^n`: `coeffs[m]` multiplies `s^{deg-m} t^m`.
#[derive(Debug, Clone)]
struct PolyVec {
    deg: usize,
    coeffs: Vec<Vec<Scalar>>,
}

/// Matrix of homogeneous forms; every entry of row `i` has degree
/// `row_deg[i]`, stored as `row_deg[i] + 1` coefficients indexed by the
/// power of `t`.
#[derive(Debug, Clone)]
struct FormMat {
    nrows: usize,
    ncols: usize,
    row_deg: Vec<usize>,
    data: Vec<Vec<Scalar>>,
}

impl FormMat {
    fn entry(&self, i: usize, j: usize) -> &[Scalar] {
        &self.data[i * self.ncols + j]
    }

    fn from_pencil_power(coeffs: &[Matrix], deg: usize) -> FormMat {
        let n = coeffs[0].rows();
        let mut data = vec![vec![0; deg + 1]; n * n];
        for (c, mat) in coeffs.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    data[i * n + j][c] = mat.at(i, j);
                }
            }
        }
        FormMat {
            nrows: n,
            ncols: n,
            row_deg: vec![deg; n],
            data,
        }
    }

    fn transpose_uniform(&self) -> FormMat {
        assert!(self.row_deg.iter().all(|&d| d == self.row_deg[0]));
        let mut data = vec![vec![]; self.nrows * self.ncols];
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                data[j * self.nrows + i] = self.entry(i, j).to_vec();
            }
        }
        FormMat {
            nrows: self.ncols,
            ncols: self.nrows,
            row_deg: vec![self.row_deg[0]; self.ncols],
            data,
        }
    }

    fn from_rows(rows: &[PolyVec], ncols: usize) -> FormMat {
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            for j in 0..ncols {
                data.push((0..=r.deg).map(|m| r.coeffs[m][j]).collect());
            }
        }
        FormMat {
            nrows: rows.len(),
            ncols,
            row_deg: rows.iter().map(|r| r.deg).collect(),
            data,
        }
    }
}

/// Incremental row-space tracker used to pick out genuinely new kernel
/// vectors modulo `k[s,t]`-multiples of earlier ones.
struct IncSpan {
    cols: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl IncSpan {
    fn new(cols: usize) -> IncSpan {
        IncSpan { cols, rows: vec![] }
    }

    /// Reduce and insert; returns true when the vector is new.
    fn insert(&mut self, mut v: Vec<Scalar>, fq: &Fq) -> bool {
        assert_eq!(v.len(), self.cols);
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for j in *piv..self.cols {
                    v[j] = fq.sub(v[j], fq.mul(c, row[j]));
                }
            }
        }
        match v.iter().position(|&c| c != 0) {
            None => false,
            Some(piv) => {
                let inv = fq.inv(v[piv]);
                for x in v.iter_mut() {
                    *x = fq.mul(*x, inv);
                }
                self.rows.push((piv, v));
                self.rows.sort_by_key(|(p, _)| *p);
                true
            }
        }
    }
}

/// All homogeneous solutions of degree `d` to `fm . w = 0`, as flat
/// vectors with layout `col * (d + 1) + t_power`.
fn kernel_solutions_at_degree(fm: &FormMat, d: usize, fq: &Fq) -> Vec<Vec<Scalar>> {
    let unknowns = fm.ncols * (d + 1);
    let mut rows = Vec::new();
    for i in 0..fm.nrows {
        let g = fm.row_deg[i];
        for a in 0..=(g + d) {
            let mut row = vec![0; unknowns];
            let mut nonzero = false;
            for l in 0..fm.ncols {
                let entry = fm.entry(i, l);
                let lo = a.saturating_sub(g);
                for mm in lo..=a.min(d) {
                    let c = entry[a - mm];
                    if c != 0 {
                        row[l * (d + 1) + mm] = c;
                        nonzero = true;
                    }
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return (0..unknowns)
            .map(|i| {
                let mut v = vec![0; unknowns];
                v[i] = 1;
                v
            })
            .collect();
    }
    let ker = Matrix::from_rows(rows).kernel_basis(fq);
    (0..ker.rows()).map(|r| ker.row_vec(r)).collect()
}

fn shift_embed(v: &PolyVec, d: usize, sh: usize, ncols: usize) -> Vec<Scalar> {
    // Multiply by s^{d - deg - sh} t^{sh} and flatten at degree d.
    let mut out = vec![0; ncols * (d + 1)];
    for m in 0..=v.deg {
        for l in 0..ncols {
            out[l * (d + 1) + (m + sh)] = v.coeffs[m][l];
        }
    }
    out
}

fn polyvec_from_flat(sol: &[Scalar], d: usize, ncols: usize) -> PolyVec {
    let coeffs: Vec<Vec<Scalar>> = (0..=d)
        .map(|m| (0..ncols).map(|l| sol[l * (d + 1) + m]).collect())
        .collect();
    PolyVec { deg: d, coeffs }
}

/// Collect a minimal homogeneous basis of the right kernel of `fm` up to
/// the target rank; the kernel of a graded map into a free module over
/// `k[s,t]` is itself free, so degreewise extraction modulo shifts of
/// earlier vectors yields a minimal basis.
fn min_right_kernel(fm: &FormMat, target: usize, max_deg: usize, fq: &Fq) -> Vec<PolyVec> {
    let mut basis: Vec<PolyVec> = Vec::new();
    if target == 0 {
        return basis;
    }
    for d in 0..=max_deg {
        let mut span = IncSpan::new(fm.ncols * (d + 1));
        for v in &basis {
            for sh in 0..=(d - v.deg) {
                span.insert(shift_embed(v, d, sh, fm.ncols), fq);
            }
        }
        for sol in kernel_solutions_at_degree(fm, d, fq) {
            if span.insert(sol.clone(), fq) {
                basis.push(polyvec_from_flat(&sol, d, fm.ncols));
                if basis.len() == target {
                    return basis;
                }
            }
        }
    }
    panic!("minimal kernel basis incomplete at the proven degree bound");
}

/// Coefficient matrices of `(s A + t B)^j` by power of `t`.
fn pencil_power(a: &Matrix, b: &Matrix, j: usize, fq: &Fq) -> Vec<Matrix> {
    let n = a.rows();
    let mut cur = vec![a.clone(), b.clone()];
    for _ in 1..j {
        let mut next = vec![Matrix::zero(n, n); cur.len() + 1];
        for (c, m) in cur.iter().enumerate() {
            next[c] = next[c].add(&a.mul(m, fq), fq);
            next[c + 1] = next[c + 1].add(&b.mul(m, fq), fq);
        }
        cur = next;
    }
    cur
}

/// Evaluate the pencil power at a point `(s, t)` over `ext`.
fn eval_pencil(coeffs: &[Matrix], s: Scalar, t: Scalar, ext: &Fq) -> Matrix {
    let n = coeffs[0].rows();
    let j = coeffs.len() - 1;
    let mut out = Matrix::zero(n, n);
    for (c, m) in coeffs.iter().enumerate() {
        let w = ext.mul(ext.pow(s, (j - c) as u64), ext.pow(t, c as u64));
        if w != 0 {
            out = out.add(&m.scale(w, ext), ext);
        }
    }
    out
}

/// Minimal basis of the polynomial left kernel of the form matrix `Y`
/// (uniform entry degree `j`) together with the certified generic rank.
///
/// Degreewise collection is interleaved with rank evaluations at points of
/// an extension field: the kernel count lower-bounds the corank while any
/// point rank lower-bounds the generic rank, so the two meeting certifies
/// completeness. A nonzero maximal minor has degree at most `j n`, hence
/// at most `j n` projective zeros, which makes a scan of `j n + 1`
/// distinct points a deterministic fallback.
fn left_kernel_certified(coeffs: &[Matrix], j: usize, fq: &Fq) -> Result<(Vec<PolyVec>, usize)> {
    let n = coeffs[0].rows();
    let yt = FormMat::from_pencil_power(coeffs, j).transpose_uniform();
    // Prime-field data embeds in any extension under the canonical index
    // representation; otherwise stay in the given field if large enough.
    let rational = coeffs
        .iter()
        .all(|m| (0..n).all(|i| (0..n).all(|c| m.at(i, c) < fq.p())));
    let needed = (j * n + 2) as u64;
    let ext = if rational {
        let mut k = 1;
        while fq.p().pow(k) < needed {
            k += 1;
        }
        Fq::new(fq.p(), k)?
    } else if fq.q() + 1 >= needed {
        fq.clone()
    } else {
        return Err(Error::Unsupported(
            "degree at a non-rational plane needs p^k + 1 > j * dim".into(),
        ));
    };
    let mut points = Vec::with_capacity(ext.q() as usize + 1);
    points.push((ext.zero(), ext.one()));
    for t in ext.elements() {
        points.push((ext.one(), t));
    }
    let mut next_point = 0usize;
    let mut basis: Vec<PolyVec> = Vec::new();
    let max_deg = j * n + 1;
    for d in 0..=max_deg {
        let mut span = IncSpan::new(n * (d + 1));
        for v in &basis {
            for sh in 0..=(d - v.deg) {
                span.insert(shift_embed(v, d, sh, n), fq);
            }
        }
        for sol in kernel_solutions_at_degree(&yt, d, fq) {
            if span.insert(sol.clone(), fq) {
                basis.push(polyvec_from_flat(&sol, d, n));
            }
        }
        // Certificate: a point whose rank equals n - count proves both the
        // generic rank and the completeness of the collected kernel.
        for _ in 0..3 {
            if next_point >= points.len() {
                break;
            }
            let (s, t) = points[next_point];
            next_point += 1;
            let r = eval_pencil(coeffs, s, t, &ext).rank(&ext);
            if r == n - basis.len() {
                return Ok((basis, r));
            }
        }
    }
    Err(Error::Unsupported(
        "internal: left kernel incomplete beyond the degree bound".into(),
    ))
}

// ----- degree -----

/// `deg^j(M|_e)` for an elementary abelian plane `e = <a, b>`.
///
/// Preconditions: `e` is elementary abelian and `M|_e` has constant
/// `j`-rank at all rational points of `P(e)`; the computation additionally
/// certifies the generic rank, so a rank drop at a non-rational point is
/// rejected instead of silently mis-measured. The convention for rank
/// zero is degree zero.
pub fn degree(m: &Module, plane: &Plane, j: usize, fq: &Fq) -> Result<usize> {
    let p = m.algebra().p() as usize;
    if j == 0 || j >= p {
        return Err(Error::Range(format!("j = {j} must lie in 1..p")));
    }
    if !plane.is_elementary(m.algebra(), fq) {
        return Err(Error::NotElementaryPlane(
            "degree needs [a, b] = 0 with a, b in the nullcone".into(),
        ));
    }
    let (a, b) = plane.basis();
    let am = m.action_of(a, fq);
    let bm = m.action_of(b, fq);
    let ranks: Vec<usize> = plane
        .proj_points(fq)
        .iter()
        .map(|pt| m.action_of(pt.coords(), fq).pow(j as u64, fq).rank(fq))
        .collect();
    let r = ranks[0];
    if ranks.iter().any(|&x| x != r) {
        return Err(Error::NonConstantRank(format!(
            "j-ranks over the plane: {ranks:?}"
        )));
    }
    if r == 0 {
        return Ok(0);
    }
    let coeffs = pencil_power(&am, &bm, j, fq);
    let (left, rgen) = left_kernel_certified(&coeffs, j, fq)?;
    if rgen != r {
        return Err(Error::NonConstantRank(format!(
            "rank {r} at rational points but {rgen} at a generic point"
        )));
    }
    let c = FormMat::from_rows(&left, m.dim());
    let right = min_right_kernel(&c, rgen, j * rgen + 1, fq);
    Ok(right.iter().map(|v| v.deg).sum())
}

/// The `j`-degree function on `E(2, g)`: per-plane degrees, a constancy
/// flag and a witness pair when values differ.
#[derive(Debug, Clone)]
pub struct DegreeReport {
    pub j: usize,
    pub per_plane: Vec<(Plane, usize)>,
    pub constant: bool,
    pub witness: Option<(Plane, Plane)>,
}

pub fn degree_function(m: &Module, j: usize, fq: &Fq, limits: &EnumLimits) -> Result<DegreeReport> {
    let profile = rank_profile(m, j, fq, limits)?;
    if !profile.constant {
        return Err(Error::NonConstantRank(
            "degree function needs constant j-rank on the nullcone".into(),
        ));
    }
    let planes = elementary_planes(m.algebra(), fq, limits)?;
    if planes.is_empty() {
        return Err(Error::Unsupported(
            "no elementary planes to evaluate".into(),
        ));
    }
    let mut per_plane = Vec::with_capacity(planes.len());
    for pl in planes {
        let d = degree(m, &pl, j, fq)?;
        per_plane.push((pl, d));
    }
    let first = per_plane[0].1;
    let witness = per_plane
        .iter()
        .find(|(_, d)| *d != first)
        .map(|(pl, _)| (per_plane[0].0.clone(), pl.clone()));
    Ok(DegreeReport {
        j,
        constant: witness.is_none(),
        per_plane,
        witness,
    })
}

/// Check `deg^j_{M^(phi)}(e) = deg^j_M(phi^{-1}(e))` plane by plane.
#[derive(Debug, Clone)]
pub struct TwistDegreeReport {
    pub comparisons: Vec<(Plane, usize, usize)>,
    pub holds: bool,
}

pub fn twist_degree_identity(
    m: &Module,
    phi: &Automorphism,
    j: usize,
    fq: &Fq,
    limits: &EnumLimits,
) -> Result<TwistDegreeReport> {
    let twisted = m.twist(phi)?;
    let inv = phi.inverse(fq)?;
    let planes = elementary_planes(m.algebra(), fq, limits)?;
    let mut comparisons = Vec::new();
    for pl in planes {
        let lhs = degree(&twisted, &pl, j, fq)?;
        let rhs = degree(m, &pl.map(&inv, fq), j, fq)?;
        comparisons.push((pl, lhs, rhs));
    }
    let holds = comparisons.iter().all(|(_, l, r)| l == r);
    Ok(TwistDegreeReport { comparisons, holds })
}

// ----- reference implementation (small scale) -----

/// Literal exterior-power computation of the plane degree: form the full
/// compound matrix of `Y(s, t)`, divide out the gcd of all entries, and
/// subtract the gcd degree of one column of the primitive rank-one
/// factor. Feasible only for small `dim` and `r`; used to validate
/// [`degree`].
pub fn degree_via_compound(m: &Module, plane: &Plane, j: usize, fq: &Fq) -> Result<usize> {
    let (a, b) = plane.basis();
    let am = m.action_of(a, fq);
    let bm = m.action_of(b, fq);
    let n = m.dim();
    let ranks: Vec<usize> = plane
        .proj_points(fq)
        .iter()
        .map(|pt| m.action_of(pt.coords(), fq).pow(j as u64, fq).rank(fq))
        .collect();
    let r = ranks[0];
    if ranks.iter().any(|&x| x != r) {
        return Err(Error::NonConstantRank(format!("{ranks:?}")));
    }
    if r == 0 {
        return Ok(0);
    }
    if binomial(n, r) > 4000 || r > 6 {
        return Err(Error::EnumerationBound(binomial(n, r), 4000));
    }
    let coeffs = pencil_power(&am, &bm, j, fq);
    let forms: Vec<BinaryForm> = {
        let mut v = Vec::with_capacity(n * n);
        for i in 0..n {
            for l in 0..n {
                v.push(BinaryForm::new(
                    j,
                    (0..=j).map(|c| coeffs[c].at(i, l)).collect(),
                ));
            }
        }
        v
    };
    fn det_forms(
        y: &[BinaryForm],
        n: usize,
        rows: &[usize],
        cols: &[usize],
        fq: &Fq,
    ) -> BinaryForm {
        if rows.len() == 1 {
            return y[rows[0] * n + cols[0]].clone();
        }
        let mut acc: Option<BinaryForm> = None;
        for (k, &c) in cols.iter().enumerate() {
            let top = &y[rows[0] * n + c];
            if top.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &cc)| cc)
                .collect();
            let minor = det_forms(y, n, &rows[1..], &sub_cols, fq);
            if minor.is_zero() {
                continue;
            }
            let term = top.mul(&minor, fq);
            let signed = if k % 2 == 0 {
                term
            } else {
                term.scale(fq.neg(1), fq)
            };
            acc = Some(match acc {
                None => signed,
                Some(prev) => prev.add(&signed, fq),
            });
        }
        acc.unwrap_or_else(BinaryForm::zero)
    }
    let row_sets = subsets_lex(n, r);
    let col_sets = subsets_lex(n, r);
    let mut entries: Vec<BinaryForm> = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            entries.push(det_forms(&forms, n, rs, cs, fq));
        }
    }
    let g = form_gcd(&entries, fq)?;
    let reduced: Vec<BinaryForm> = entries
        .iter()
        .map(|e| {
            if e.is_zero() {
                BinaryForm::zero()
            } else {
                e.div_exact(&g, fq)
            }
        })
        .collect();
    let ncols = col_sets.len();
    let col = (0..ncols)
        .find(|&c| (0..row_sets.len()).any(|rr| !reduced[rr * ncols + c].is_zero()))
        .expect("a nonzero column exists when r > 0");
    let column: Vec<BinaryForm> = (0..row_sets.len())
        .map(|rr| reduced[rr * ncols + col].clone())
        .collect();
    let col_gcd = form_gcd(&column, fq)?;
    Ok(j * r - g.degree() - col_gcd.degree())
}

// ----- sample generators for property suites -----

/// Deterministic module families used by the property and acceptance
/// suites. Sizes stay small and seeds are fixed so reports reproduce.
pub mod samples {
    use super::*;
    use crate::modules::{self, radical_generators};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(n: usize, fq: &Fq, rng: &mut ChaCha8Rng) -> Matrix {
        loop {
            let mut m = Matrix::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, rng.gen_range(0..fq.q()));
                }
            }
            if m.inverse(fq).is_some() {
                return m;
            }
        }
    }

    /// A module over `e_2` from a commuting nilpotent pair: a conjugated
    /// block nilpotent with blocks of size `<= p`, paired with a
    /// polynomial in it without constant term. Not necessarily of
    /// constant rank.
    pub fn commuting_pair_module(alg: &Arc<LieAlgebra>, size: usize, seed: u64) -> Result<Module> {
        assert_eq!(alg.dim(), 2);
        let fq = alg.prime_field();
        let p = alg.p() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut jordan = Matrix::zero(size, size);
        let mut filled = 0;
        while filled < size {
            let bs = rng.gen_range(1..=p.min(size - filled));
            for i in 1..bs {
                jordan.set(filled + i - 1, filled + i, 1);
            }
            filled += bs;
        }
        let pmat = random_invertible(size, &fq, &mut rng);
        let pinv = pmat.inverse(&fq).unwrap();
        let a = pmat.mul(&jordan, &fq).mul(&pinv, &fq);
        // B = f(A) with zero constant term commutes with A; both p-th
        // powers vanish since (sum c_i A^i)^p = sum c_i^p A^{ip} = 0.
        let mut b = Matrix::zero(size, size);
        let mut pw = a.clone();
        for _ in 1..p {
            let c = rng.gen_range(0..fq.q());
            if c != 0 {
                b = b.add(&pw.scale(c, &fq), &fq);
            }
            pw = pw.mul(&a, &fq);
        }
        Module::new(alg.clone(), vec![a, b], format!("pair{seed}"))
    }

    /// Constant-rank modules over an elementary abelian algebra: radical
    /// powers of the free module, duals of its Loewy quotients, their
    /// sums and twists. Every construction is stable under basis changes
    /// of the algebra, which forces point-independent ranks.
    pub fn constant_rank_family(
        alg: &Arc<LieAlgebra>,
        count: usize,
        max_dim: usize,
        seed: u64,
    ) -> Result<Vec<Module>> {
        let fq = alg.prime_field();
        let gens = radical_generators(alg)?;
        let free = modules::regular(alg)?;
        let rad_series = modules::radical_series(&free, &gens, &fq);
        let mut pool: Vec<Module> = Vec::new();
        for (s, sub) in rad_series.iter().enumerate().skip(1) {
            if sub.dim() == 0 {
                break;
            }
            if sub.dim() <= max_dim {
                pool.push(free.submodule_module(sub, &format!("rad^{s}U0"))?);
            }
            let (quot, _) = free.quotient_module(sub, &format!("U0/rad^{s}"))?;
            if quot.dim() <= max_dim {
                pool.push(quot.dual());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<Module> = Vec::new();
        let mut idx = 0;
        while out.len() < count {
            let base = pool[idx % pool.len()].clone();
            idx += 1;
            let m = match rng.gen_range(0..3u32) {
                0 => base,
                1 => {
                    let other = &pool[rng.gen_range(0..pool.len())];
                    if base.dim() + other.dim() <= max_dim {
                        base.direct_sum(other)
                    } else {
                        base
                    }
                }
                _ => {
                    let phi = Automorphism::new(random_invertible(alg.dim(), &fq, &mut rng));
                    base.twist(&phi)?
                }
            };
            out.push(m);
        }
        Ok(out)
    }

    /// Equal-images modules over `e_r`: duals of `U0 / rad^m` (equal
    /// kernels dualize to equal images) and radical powers of the free
    /// module beyond the single-variable truncation point, plus sums.
    pub fn equal_images_family(alg: &Arc<LieAlgebra>, max_dim: usize) -> Result<Vec<Module>> {
        let fq = alg.prime_field();
        let p = alg.p() as usize;
        let gens = radical_generators(alg)?;
        let free = modules::regular(alg)?;
        let rad_series = modules::radical_series(&free, &gens, &fq);
        let mut out = Vec::new();
        for (s, sub) in rad_series.iter().enumerate() {
            if s >= p - 1 && sub.dim() > 0 && sub.dim() <= max_dim {
                out.push(free.submodule_module(sub, &format!("rad^{s}U0"))?);
            }
        }
        for m in 1..=p {
            if m < rad_series.len() {
                let (quot, _) = free.quotient_module(&rad_series[m], &format!("U0/rad^{m}"))?;
                if quot.dim() <= max_dim {
                    out.push(quot.dual());
                }
            }
        }
        let sums: Vec<Module> = out
            .iter()
            .zip(out.iter().skip(1))
            .filter(|(a, b)| a.dim() + b.dim() <= max_dim)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        out.extend(sums);
        Ok(out)
    }

    /// Modules over the p-trivial Heisenberg algebra: trivial sums plus
    /// induced modules from abelian subalgebras and their duals.
    pub fn heisenberg_suite(alg: &Arc<LieAlgebra>) -> Result<Vec<Module>> {
        assert_eq!(alg.dim(), 3);
        let mut out = vec![modules::trivial(alg)];
        out.push(modules::trivial(alg).direct_sum(&modules::trivial(alg)));
        let yz = vec![alg.basis_element(1), alg.basis_element(2)];
        let ind1 = crate::u0::induced_module(alg, &yz, &[0, 0], "ind(yz)")?;
        out.push(ind1.dual());
        out.push(ind1);
        let z = vec![alg.basis_element(2)];
        let ind2 = crate::u0::induced_module(alg, &z, &[0], "ind(z)")?;
        out.push(ind2);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg;
    use crate::modules::{self, radical_generators};

    fn limits() -> EnumLimits {
        EnumLimits::default()
    }

    #[test]
    fn jordan_types_of_simples_and_free_modules() {
        let alg = liealg::sl2(5);
        let fq = alg.prime_field();
        // L(i) at e: a single block of size i + 1.
        for i in 0..5u64 {
            let l = modules::simple_l(&alg, i).unwrap();
            let jt = jordan_type(&l, &alg.basis_element(0), &fq).unwrap();
            let mut expect = vec![0; 5];
            expect[i as usize] = 1;
            assert_eq!(jt.multiplicities, expect, "L({i})");
        }
        // Free module over e_2: p blocks of size p at every point.
        let e2 = liealg::elementary(2, 5);
        let fqe = e2.prime_field();
        let free = modules::regular(&e2).unwrap();
        for x in [vec![1, 0], vec![0, 1], vec![1, 3], vec![2, 1]] {
            let jt = jordan_type(&free, &x, &fqe).unwrap();
            assert_eq!(jt.multiplicities, vec![0, 0, 0, 0, 5]);
        }
        // Trivial module: dim * [1].
        let k = modules::trivial(&e2);
        let jt = jordan_type(&k, &vec![1, 1], &fqe).unwrap();
        assert_eq!(jt.multiplicities, vec![1, 0, 0, 0, 0]);
        // Nullcone membership is checked.
        let sl2 = liealg::sl2(5);
        let l1 = modules::simple_l(&sl2, 1).unwrap();
        assert!(jordan_type(&l1, &sl2.basis_element(1), &fq).is_err());
    }

    #[test]
    fn jordan_type_reconstructs_rank_sequence() {
        let e2 = liealg::elementary(2, 5);
        let fq = e2.prime_field();
        let m = samples::commuting_pair_module(&e2, 13, 99).unwrap();
        for x in [vec![1u64, 0], vec![1, 2], vec![0, 1]] {
            let jt = jordan_type(&m, &x, &fq).unwrap();
            let op = m.action_of(&x, &fq);
            let mut pw = op.clone();
            let mut seq = vec![];
            for _ in 1..=5 {
                seq.push(pw.rank(&fq));
                pw = pw.mul(&op, &fq);
            }
            assert_eq!(jt.rank_sequence(), seq);
        }
    }

    #[test]
    fn degree_of_free_e2_module_matches_closed_form() {
        // deg^j of the free rank-one module is j p (p - j) / 2.
        let e2 = liealg::elementary(2, 5);
        let fq = e2.prime_field();
        let free = modules::regular(&e2).unwrap();
        let plane = Plane::new(&e2.basis_element(0), &e2.basis_element(1), &fq).unwrap();
        for j in 1..5usize {
            let d = degree(&free, &plane, j, &fq).unwrap();
            assert_eq!(d, j * 5 * (5 - j) / 2, "j = {j}");
        }
    }

    #[test]
    fn degree_agrees_with_compound_reference_at_p3() {
        let e2 = liealg::elementary(2, 3);
        let fq = e2.prime_field();
        let free = modules::regular(&e2).unwrap();
        let plane = Plane::new(&e2.basis_element(0), &e2.basis_element(1), &fq).unwrap();
        for j in 1..3usize {
            let fast = degree(&free, &plane, j, &fq).unwrap();
            let slow = degree_via_compound(&free, &plane, j, &fq).unwrap();
            assert_eq!(fast, slow, "free module, j = {j}");
        }
        let gens = radical_generators(&e2).unwrap();
        let rad = modules::radical(&free, &gens, &fq);
        let radm = free.submodule_module(&rad, "rad").unwrap();
        let fast = degree(&radm, &plane, 1, &fq).unwrap();
        let slow = degree_via_compound(&radm, &plane, 1, &fq).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn degree_agrees_with_compound_on_constant_rank_family() {
        let e2 = liealg::elementary(2, 3);
        let fq = e2.prime_field();
        let plane = Plane::new(&e2.basis_element(0), &e2.basis_element(1), &fq).unwrap();
        let fam = samples::constant_rank_family(&e2, 10, 8, 11).unwrap();
        let mut checked = 0;
        for m in fam {
            for j in 1..3usize {
                let fast = degree(&m, &plane, j, &fq).unwrap();
                let slow = degree_via_compound(&m, &plane, j, &fq).unwrap();
                assert_eq!(fast, slow, "{} j {j}", m.name());
                checked += 1;
            }
        }
        assert!(checked >= 10);
        // Non-constant random pairs: the production path must refuse, and
        // it is allowed to refuse even where rational ranks look constant
        // (its generic-rank certificate sees further than the proxy).
        let e2 = liealg::elementary(2, 5);
        let fq = e2.prime_field();
        let plane = Plane::new(&e2.basis_element(0), &e2.basis_element(1), &fq).unwrap();
        for seed in 0..8u64 {
            let m = samples::commuting_pair_module(&e2, 7, seed).unwrap();
            match (degree(&m, &plane, 1, &fq), degree_via_compound(&m, &plane, 1, &fq)) {
                (Ok(fast), Ok(slow)) => assert_eq!(fast, slow),
                (Err(Error::NonConstantRank(_)), _) => {}
                (a, b) => panic!("unexpected outcome: {a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn degree_is_independent_of_the_spanning_pair() {
        let e2 = liealg::elementary(2, 5);
        let fq = e2.prime_field();
        let free = modules::regular(&e2).unwrap();
        let pairs = [
            (vec![1, 0], vec![0, 1]),
            (vec![1, 2], vec![0, 1]),
            (vec![1, 4], vec![2, 1]),
            (vec![3, 1], vec![1, 1]),
        ];
        for (a, b) in pairs {
            let plane = Plane::new(&a, &b, &fq).unwrap();
            assert_eq!(degree(&free, &plane, 1, &fq).unwrap(), 10);
        }
    }

    #[test]
    fn kernel_identity_on_the_free_module() {
        // dim K(M|_e) = dim M - deg^1(M|_e).
        let e2 = liealg::elementary(2, 5);
        let fq = e2.prime_field();
        let free = modules::regular(&e2).unwrap();
        let plane = Plane::new(&e2.basis_element(0), &e2.basis_element(1), &fq).unwrap();
        let k = generic_kernel_plane(&free, &plane, 1, &fq);
        let d = degree(&free, &plane, 1, &fq).unwrap();
        assert_eq!(k.dim(), free.dim() - d);
    }

    #[test]
    fn rank_profile_constancy_verdicts() {
        let e2 = liealg::elementary(2, 5);
        let fq = e2.prime_field();
        let free = modules::regular(&e2).unwrap();
        let profile = rank_profile(&free, 1, &fq, &limits()).unwrap();
        assert!(profile.constant);
        assert_eq!(profile.generic_rank, 20);
        // A pair with a visible rank drop: A = J, B = J^2.
        let m = {
            let mut j1 = Matrix::zero(4, 4);
            j1.set(0, 1, 1);
            j1.set(1, 2, 1);
            j1.set(2, 3, 1);
            let j2 = j1.mul(&j1, &fq);
            Module::new(e2.clone(), vec![j1, j2], "drop".into()).unwrap()
        };
        let profile = rank_profile(&m, 1, &fq, &limits()).unwrap();
        assert!(!profile.constant);
    }

    #[test]
    fn eip_and_mod_j_over_e2() {
        let e2 = liealg::elementary(2, 5);
        let fq = e2.prime_field();
        let k = modules::trivial(&e2);
        for j in 1..5 {
            assert!(eip_check(&k, j, &fq, &limits()).unwrap().equal);
            assert!(mod_j_membership(&k, j, &fq, &limits()).unwrap());
        }
        for m in samples::equal_images_family(&e2, 24).unwrap() {
            let rep = eip_check(&m, 1, &fq, &limits()).unwrap();
            assert!(rep.equal, "{} should be equal-images", m.name());
        }
        // mod^j membership over e_r matches Loewy length <= j.
        let gens = radical_generators(&e2).unwrap();
        let free = modules::regular(&e2).unwrap();
        let series = modules::radical_series(&free, &gens, &fq);
        for mth in 1..=5usize {
            let (quot, _) = free.quotient_module(&series[mth], "q").unwrap();
            let ll = modules::loewy_length(&quot, &gens, &fq);
            assert_eq!(ll, mth);
            for j in 1..5 {
                assert_eq!(
                    mod_j_membership(&quot, j, &fq, &limits()).unwrap(),
                    ll <= j,
                    "Loewy {ll} vs j {j}"
                );
            }
        }
    }

    #[test]
    fn degree_function_constant_on_e3_family() {
        let e3 = liealg::elementary(3, 5);
        let fq = e3.prime_field();
        let fam = samples::constant_rank_family(&e3, 2, 20, 7).unwrap();
        for m in fam {
            let rep = degree_function(&m, 1, &fq, &limits()).unwrap();
            assert!(rep.constant, "{}: {:?}", m.name(), rep.per_plane);
            assert_eq!(rep.per_plane.len(), 31); // all planes of P^2-dual
        }
    }

    #[test]
    fn syzygy_degree_sum_identity() {
        // For torsion-free pencil powers, the minimal indices of the right
        // kernel of Y and of the right kernel of its left-kernel matrix
        // sum to j * r.
        let e2 = liealg::elementary(2, 5);
        let fq = e2.prime_field();
        let free = modules::regular(&e2).unwrap();
        let a = free.matrices()[0].clone();
        let b = free.matrices()[1].clone();
        for j in 1..4usize {
            let coeffs = pencil_power(&a, &b, j, &fq);
            let (left, rgen) = left_kernel_certified(&coeffs, j, &fq).unwrap();
            let y = FormMat::from_pencil_power(&coeffs, j);
            let dsum: usize = min_right_kernel(&y, free.dim() - rgen, j * free.dim() + 1, &fq)
                .iter()
                .map(|v| v.deg)
                .sum();
            let c = FormMat::from_rows(&left, free.dim());
            let esum: usize = min_right_kernel(&c, rgen, j * rgen + 1, &fq)
                .iter()
                .map(|v| v.deg)
                .sum();
            assert_eq!(dsum + esum, j * rgen, "j = {j}");
        }
    }
}
