//! Restricted Lie algebras `(g, [p])` given by structure constants and a
//! p-map on basis elements.
//!
//! Structure constants and basis p-map images live in the prime field, so an
//! algebra is independent of the extension degree; elements over `F_{p^k}`
//! are coefficient vectors evaluated against the same data. The p-power of
//! an arbitrary element is computed with Jacobson's formula,
//! `(a+b)^[p] = a^[p] + b^[p] + sum_i s_i(a,b)`, where `i * s_i(a,b)` is the
//! coefficient of `T^{i-1}` in `ad(Ta+b)^{p-1}(a)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field::{Fq, Scalar};
use crate::linalg::{Matrix, Subspace};
use crate::{Error, Result};

/// Coefficient vector of a Lie algebra element in the fixed basis.
pub type LieElement = Vec<Scalar>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgebraKind {
    Elementary,
    Heisenberg,
    Sl2,
    Sl2s,
    TwoPlanes,
    Witt1,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    kind: AlgebraKind,
    p: u64,
    dim: usize,
    basis_names: Vec<String>,
    /// brackets[i][j] = coefficient vector of [b_i, b_j] over F_p.
    brackets: Vec<Vec<Vec<Scalar>>>,
    /// pmap[i] = coefficient vector of b_i^[p] over F_p.
    pmap: Vec<Vec<Scalar>>,
}

/// Axiom violations found by [`LieAlgebra::verify`], with witnesses.
#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            write!(f, "all axioms hold")
        } else {
            write!(f, "{}", self.violations.join("\n"))
        }
    }
}

impl LieAlgebra {
    pub fn new(
        name: impl Into<String>,
        kind: AlgebraKind,
        p: u64,
        basis_names: Vec<String>,
        bracket_list: &[(usize, usize, Vec<(usize, i64)>)],
        pmap_list: &[(usize, Vec<(usize, i64)>)],
    ) -> LieAlgebra {
        let dim = basis_names.len();
        let mut brackets = vec![vec![vec![0u64; dim]; dim]; dim];
        let reduce = |c: i64| -> u64 {
            let p = p as i64;
            (((c % p) + p) % p) as u64
        };
        for &(i, j, ref terms) in bracket_list {
            for &(k, c) in terms {
                brackets[i][j][k] = reduce(c);
                brackets[j][i][k] = reduce(-c);
            }
        }
        let mut pmap = vec![vec![0u64; dim]; dim];
        for &(i, ref terms) in pmap_list {
            for &(k, c) in terms {
                pmap[i][k] = reduce(c);
            }
        }
        LieAlgebra {
            name: name.into(),
            kind,
            p,
            dim,
            basis_names,
            brackets,
            pmap,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    pub fn basis_element(&self, i: usize) -> LieElement {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn pmap_image(&self, i: usize) -> &[Scalar] {
        &self.pmap[i]
    }

    pub fn prime_field(&self) -> Fq {
        Fq::prime(self.p).expect("p validated at construction")
    }

    pub fn field(&self, k: u32) -> Result<Fq> {
        Fq::new(self.p, k)
    }

    /// Bracket of two coefficient vectors over any `F_{p^k}`.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar], fq: &Fq) -> LieElement {
        let mut out = vec![0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = fq.mul(xi, yj);
                for (k, &s) in self.brackets[i][j].iter().enumerate() {
                    if s != 0 {
                        out[k] = fq.add(out[k], fq.mul(c, s));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad x : y -> [x, y]` in the fixed basis.
    pub fn ad(&self, x: &[Scalar], fq: &Fq) -> Matrix {
        let mut m = Matrix::zero(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(x, &self.basis_element(j), fq);
            for (i, &c) in col.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    /// `x^[p]` for an arbitrary element, by folding Jacobson's formula over
    /// the nonzero coordinates of `x`. The scalar rule is
    /// `(c b_i)^[p] = c^p b_i^[p]`.
    pub fn jacobson_p_power(&self, x: &[Scalar], fq: &Fq) -> LieElement {
        assert_eq!(x.len(), self.dim);
        let n = self.dim;
        let mut acc: LieElement = vec![0; n]; // (tail)^[p]
        let mut tail: LieElement = vec![0; n]; // the partial sum itself
        let mut tail_zero = true;
        for i in (0..n).rev() {
            if x[i] == 0 {
                continue;
            }
            // a = x[i] * b_i, so a^[p] = x[i]^p * b_i^[p].
            let cp = fq.pow(x[i], self.p);
            let a_pow: LieElement = self.pmap[i].iter().map(|&c| fq.mul(cp, c)).collect();
            if tail_zero {
                acc = a_pow;
                tail[i] = x[i];
                tail_zero = false;
                continue;
            }
            // s_m terms from ad(Ta + tail)^{p-1}(a).
            let mut a = vec![0; n];
            a[i] = x[i];
            let mut poly: Vec<LieElement> = vec![a.clone()];
            for _ in 0..self.p - 1 {
                let mut next: Vec<LieElement> = vec![vec![0; n]; poly.len() + 1];
                for (d, coeff) in poly.iter().enumerate() {
                    let ta = self.bracket(&a, coeff, fq);
                    let tb = self.bracket(&tail, coeff, fq);
                    for k in 0..n {
                        next[d + 1][k] = fq.add(next[d + 1][k], ta[k]);
                        next[d][k] = fq.add(next[d][k], tb[k]);
                    }
                }
                poly = next;
            }
            let mut sum = a_pow;
            for k in 0..n {
                sum[k] = fq.add(sum[k], acc[k]);
            }
            for m in 1..self.p {
                let inv_m = fq.inv(fq.from_int(m as i64));
                if let Some(coeff) = poly.get((m - 1) as usize) {
                    for k in 0..n {
                        sum[k] = fq.add(sum[k], fq.mul(inv_m, coeff[k]));
                    }
                }
            }
            acc = sum;
            tail[i] = x[i];
        }
        acc
    }

    /// Check every axiom and list violations with witnessing indices.
    pub fn verify(&self) -> AxiomReport {
        let fq = self.prime_field();
        let mut report = AxiomReport::default();
        let names = |i: usize| self.basis_names[i].clone();
        for i in 0..self.dim {
            for k in 0..self.dim {
                if self.brackets[i][i][k] != 0 {
                    report
                        .violations
                        .push(format!("antisymmetry: [{0},{0}] != 0", names(i)));
                    break;
                }
            }
            for j in 0..self.dim {
                for k in 0..self.dim {
                    if fq.add(self.brackets[i][j][k], self.brackets[j][i][k]) != 0 {
                        report.violations.push(format!(
                            "antisymmetry: [{},{}] != -[{},{}]",
                            names(i),
                            names(j),
                            names(j),
                            names(i)
                        ));
                        break;
                    }
                }
            }
        }
        // Jacobi identity on basis triples.
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let bi = self.basis_element(i);
                    let bj = self.basis_element(j);
                    let bk = self.basis_element(k);
                    let t1 = self.bracket(&bi, &self.bracket(&bj, &bk, &fq), &fq);
                    let t2 = self.bracket(&bj, &self.bracket(&bk, &bi, &fq), &fq);
                    let t3 = self.bracket(&bk, &self.bracket(&bi, &bj, &fq), &fq);
                    let total: Vec<Scalar> = (0..self.dim)
                        .map(|l| fq.add(t1[l], fq.add(t2[l], t3[l])))
                        .collect();
                    if total.iter().any(|&c| c != 0) {
                        report.violations.push(format!(
                            "jacobi identity fails on ({}, {}, {})",
                            names(i),
                            names(j),
                            names(k)
                        ));
                    }
                }
            }
        }
        // Restrictedness: ad(b_i^[p]) = (ad b_i)^p.
        for i in 0..self.dim {
            let lhs = self.ad(&self.pmap[i], &fq);
            let rhs = self.ad(&self.basis_element(i), &fq).pow(self.p, &fq);
            if lhs != rhs {
                report.violations.push(format!(
                    "p-map compatibility fails at {}: ad({}^[p]) != (ad {})^p",
                    names(i),
                    names(i),
                    names(i)
                ));
            }
        }
        // Consistency of Jacobson expansion on basis pairs.
        if report.violations.is_empty() {
            for i in 0..self.dim {
                for j in i + 1..self.dim {
                    let mut x = vec![0; self.dim];
                    x[i] = 1;
                    x[j] = 1;
                    let z = self.jacobson_p_power(&x, &fq);
                    let lhs = self.ad(&z, &fq);
                    let rhs = self.ad(&x, &fq).pow(self.p, &fq);
                    if lhs != rhs {
                        report.violations.push(format!(
                            "jacobson expansion of {} + {} is not ad-compatible",
                            names(i),
                            names(j)
                        ));
                    }
                }
            }
        }
        report
    }

    pub fn verified(self) -> Result<Arc<LieAlgebra>> {
        let report = self.verify();
        if report.is_valid() {
            Ok(Arc::new(self))
        } else {
            Err(Error::InvalidAlgebra(report.to_string()))
        }
    }

    // ----- substructures -----

    /// The center `C(g)` as a subspace.
    pub fn center(&self, fq: &Fq) -> Subspace {
        let mut rows = Vec::new();
        for i in 0..self.dim {
            let ad = self.ad(&self.basis_element(i), fq);
            for r in 0..self.dim {
                rows.push(ad.row_vec(r));
            }
        }
        if rows.is_empty() {
            return Subspace::full(self.dim);
        }
        crate::linalg::kernel_space(&Matrix::from_rows(rows), fq)
    }

    /// Centralizer of a set of elements.
    pub fn centralizer(&self, set: &[LieElement], fq: &Fq) -> Subspace {
        let mut rows = Vec::new();
        for s in set {
            let ad = self.ad(s, fq);
            for r in 0..self.dim {
                rows.push(ad.row_vec(r));
            }
        }
        if rows.is_empty() {
            return Subspace::full(self.dim);
        }
        crate::linalg::kernel_space(&Matrix::from_rows(rows), fq)
    }

    /// Normalizer of a subspace: `{x : [x, h] in H for all h in H}`.
    pub fn normalizer(&self, h: &Subspace, fq: &Fq) -> Subspace {
        let ann = h.annihilator_matrix(fq);
        let mut rows = Vec::new();
        for hv in h.basis_vectors() {
            // [x, h] = -ad(h) x must satisfy ann * (ad(h) x) = 0.
            let cond = ann.mul(&self.ad(&hv, fq), fq);
            for r in 0..cond.rows() {
                rows.push(cond.row_vec(r));
            }
        }
        if rows.is_empty() {
            return Subspace::full(self.dim);
        }
        crate::linalg::kernel_space(&Matrix::from_rows(rows), fq)
    }

    /// Derived subalgebra `[g, g]`.
    pub fn derived(&self, fq: &Fq) -> Subspace {
        let mut rows = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                rows.push(self.brackets[i][j].clone());
            }
        }
        Subspace::from_vectors(&rows, self.dim, fq)
    }

    /// Smallest p-ideal containing the given elements: close under brackets
    /// with `g` and under the p-map. Closure under basis p-images suffices
    /// because Jacobson's formula expands sums inside an already
    /// bracket-closed span.
    pub fn p_ideal_closure(&self, set: &[LieElement], fq: &Fq) -> Subspace {
        let mut u = Subspace::from_vectors(set, self.dim, fq);
        loop {
            let mut vecs = u.basis_vectors();
            for v in u.basis_vectors() {
                for i in 0..self.dim {
                    vecs.push(self.bracket(&self.basis_element(i), &v, fq));
                }
                vecs.push(self.jacobson_p_power(&v, fq));
            }
            let next = Subspace::from_vectors(&vecs, self.dim, fq);
            if next.dim() == u.dim() {
                return next;
            }
            u = next;
        }
    }

    /// Whether a subspace is an ideal.
    pub fn is_ideal(&self, n: &Subspace, fq: &Fq) -> bool {
        n.basis_vectors().iter().all(|v| {
            (0..self.dim).all(|i| n.contains(&self.bracket(&self.basis_element(i), v, fq), fq))
        })
    }

    /// Whether a subspace is a p-subalgebra (bracket- and p-closed).
    pub fn is_p_subalgebra(&self, h: &Subspace, fq: &Fq) -> bool {
        let vecs = h.basis_vectors();
        vecs.iter().all(|v| h.contains(&self.jacobson_p_power(v, fq), fq))
            && vecs
                .iter()
                .all(|v| vecs.iter().all(|w| h.contains(&self.bracket(v, w, fq), fq)))
    }

    /// The subalgebra carried by a bracket- and p-closed subspace, as a
    /// standalone verified algebra together with the inclusion basis.
    pub fn subalgebra_on(&self, h: &Subspace) -> Result<(LieAlgebra, Vec<LieElement>)> {
        let fq = self.prime_field();
        if !self.is_p_subalgebra(h, &fq) {
            return Err(Error::NotSubalgebra(
                "subspace is not closed under bracket and p-map".into(),
            ));
        }
        let basis = h.basis_vectors();
        self.algebra_on_basis(&basis, format!("{}-sub", self.name))
    }

    /// Express the algebra structure in an arbitrary ordered basis of a
    /// closed subspace (used for subalgebras and adapted PBW orders).
    pub fn algebra_on_basis(
        &self,
        basis: &[LieElement],
        name: String,
    ) -> Result<(LieAlgebra, Vec<LieElement>)> {
        let fq = self.prime_field();
        let d = basis.len();
        let bmat = Matrix::from_rows(basis.to_vec());
        let space = Subspace::from_rows(&bmat, &fq);
        if space.dim() != d {
            return Err(Error::NotSubalgebra("basis is linearly dependent".into()));
        }
        // Solve coords * bmat = v for each structural vector.
        let express = |v: &[Scalar]| -> Result<Vec<Scalar>> {
            // Solve bmat^T c = v^T.
            let bt = bmat.transpose();
            let mut aug = Matrix::zero(self.dim, d + 1);
            for i in 0..self.dim {
                for j in 0..d {
                    aug.set(i, j, bt.at(i, j));
                }
                aug.set(i, d, v[i]);
            }
            let r = aug.rref(&fq);
            // Consistency: no pivot in the last column.
            if r.pivots.contains(&d) {
                return Err(Error::NotSubalgebra(
                    "structure does not close on the given basis".into(),
                ));
            }
            let mut c = vec![0; d];
            for (row, &col) in r.pivots.iter().enumerate() {
                c[col] = r.matrix.at(row, d);
            }
            Ok(c)
        };
        let mut brackets = vec![vec![vec![0u64; d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let v = self.bracket(&basis[i], &basis[j], &fq);
                brackets[i][j] = express(&v)?;
            }
        }
        let mut pmap = vec![vec![0u64; d]; d];
        for (i, b) in basis.iter().enumerate() {
            pmap[i] = express(&self.jacobson_p_power(b, &fq))?;
        }
        let alg = LieAlgebra {
            name,
            kind: AlgebraKind::Other,
            p: self.p,
            dim: d,
            basis_names: (0..d).map(|i| format!("b{i}")).collect(),
            brackets,
            pmap,
        };
        Ok((alg, basis.to_vec()))
    }

    /// Quotient by a verified p-ideal. The induced p-map is computed on
    /// coset representatives and its well-definedness is checked on the
    /// ideal's basis rather than assumed.
    pub fn quotient(&self, n: &Subspace) -> Result<(LieAlgebra, QuotientMap)> {
        let fq = self.prime_field();
        if !self.is_ideal(n, &fq) {
            return Err(Error::NotIdeal("subspace is not an ideal".into()));
        }
        for v in n.basis_vectors() {
            if !n.contains(&self.jacobson_p_power(&v, &fq), &fq) {
                return Err(Error::NotIdeal("ideal is not closed under the p-map".into()));
            }
        }
        let pivots: Vec<usize> = (0..n.dim())
            .map(|i| n.basis().row(i).iter().position(|&x| x != 0).unwrap())
            .collect();
        let complement: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let d = complement.len();
        let reduce = |v: &[Scalar]| -> Vec<Scalar> {
            let mut w = v.to_vec();
            for (row, &piv) in pivots.iter().enumerate() {
                let c = w[piv];
                if c != 0 {
                    for j in 0..self.dim {
                        w[j] = fq.sub(w[j], fq.mul(c, n.basis().at(row, j)));
                    }
                }
            }
            complement.iter().map(|&c| w[c]).collect()
        };
        // Well-definedness of the induced p-map: (b + n)^[p] - b^[p] in n.
        for &c in &complement {
            let b = self.basis_element(c);
            for nv in n.basis_vectors() {
                let shifted: Vec<Scalar> =
                    (0..self.dim).map(|l| fq.add(b[l], nv[l])).collect();
                let diff: Vec<Scalar> = {
                    let a = self.jacobson_p_power(&shifted, &fq);
                    let bpow = self.jacobson_p_power(&b, &fq);
                    (0..self.dim).map(|l| fq.sub(a[l], bpow[l])).collect()
                };
                if !n.contains(&diff, &fq) {
                    return Err(Error::QuotientPMap(format!(
                        "p-map not constant on the coset of {}",
                        self.basis_names[c]
                    )));
                }
            }
        }
        let mut brackets = vec![vec![vec![0u64; d]; d]; d];
        for (i, &ci) in complement.iter().enumerate() {
            for (j, &cj) in complement.iter().enumerate() {
                brackets[i][j] = reduce(&self.brackets[ci][cj]);
            }
        }
        let mut pmap = vec![vec![0u64; d]; d];
        for (i, &ci) in complement.iter().enumerate() {
            pmap[i] = reduce(&self.jacobson_p_power(&self.basis_element(ci), &fq));
        }
        let alg = LieAlgebra {
            name: format!("{}/n", self.name),
            kind: AlgebraKind::Other,
            p: self.p,
            dim: d,
            basis_names: complement
                .iter()
                .map(|&c| self.basis_names[c].clone())
                .collect(),
            brackets,
            pmap,
        };
        let proj = QuotientMap {
            complement,
            pivots,
            ideal: n.clone(),
        };
        Ok((alg, proj))
    }

    /// Direct sum of two algebras over the same prime.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        assert_eq!(self.p, other.p);
        let d = self.dim + other.dim;
        let mut brackets = vec![vec![vec![0u64; d]; d]; d];
        let mut pmap = vec![vec![0u64; d]; d];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    brackets[i][j][k] = self.brackets[i][j][k];
                }
            }
            for k in 0..self.dim {
                pmap[i][k] = self.pmap[i][k];
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    brackets[self.dim + i][self.dim + j][self.dim + k] = other.brackets[i][j][k];
                }
            }
            for k in 0..other.dim {
                pmap[self.dim + i][self.dim + k] = other.pmap[i][k];
            }
        }
        let mut basis_names: Vec<String> =
            self.basis_names.iter().map(|n| format!("l.{n}")).collect();
        basis_names.extend(other.basis_names.iter().map(|n| format!("r.{n}")));
        LieAlgebra {
            name: format!("{}+{}", self.name, other.name),
            kind: AlgebraKind::Other,
            p: self.p,
            dim: d,
            basis_names,
            brackets,
            pmap,
        }
    }
}

/// Projection data for a quotient algebra.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    complement: Vec<usize>,
    pivots: Vec<usize>,
    ideal: Subspace,
}

impl QuotientMap {
    pub fn project(&self, v: &[Scalar], fq: &Fq) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (row, &piv) in self.pivots.iter().enumerate() {
            let c = w[piv];
            if c != 0 {
                for j in 0..v.len() {
                    w[j] = fq.sub(w[j], fq.mul(c, self.ideal.basis().at(row, j)));
                }
            }
        }
        self.complement.iter().map(|&c| w[c]).collect()
    }
}

// ----- automorphisms -----

/// An invertible linear map on `g`, used for Lie and restricted
/// automorphism checks and for module twists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    mat: Matrix,
}

impl Automorphism {
    pub fn new(mat: Matrix) -> Automorphism {
        assert_eq!(mat.rows(), mat.cols());
        Automorphism { mat }
    }

    pub fn identity(n: usize) -> Automorphism {
        Automorphism {
            mat: Matrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn apply(&self, v: &[Scalar], fq: &Fq) -> Vec<Scalar> {
        self.mat.apply(v, fq)
    }

    pub fn inverse(&self, fq: &Fq) -> Result<Automorphism> {
        self.mat
            .inverse(fq)
            .map(Automorphism::new)
            .ok_or_else(|| Error::InvalidAutomorphism("matrix is singular".into()))
    }

    pub fn compose(&self, other: &Automorphism, fq: &Fq) -> Automorphism {
        Automorphism::new(self.mat.mul(&other.mat, fq))
    }

    /// Membership in `Aut(g)`: invertibility plus bracket preservation on
    /// all basis pairs.
    pub fn is_lie_automorphism(&self, alg: &LieAlgebra, fq: &Fq) -> bool {
        if self.mat.inverse(fq).is_none() {
            return false;
        }
        for i in 0..alg.dim() {
            for j in i + 1..alg.dim() {
                let lhs = self.apply(&alg.bracket(&alg.basis_element(i), &alg.basis_element(j), fq), fq);
                let rhs = alg.bracket(
                    &self.apply(&alg.basis_element(i), fq),
                    &self.apply(&alg.basis_element(j), fq),
                    fq,
                );
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Membership in `Aut_p(g)`. For a Lie automorphism, p-map
    /// compatibility on a basis extends to all elements via Jacobson's
    /// formula, so checking basis elements suffices.
    pub fn is_p_automorphism(&self, alg: &LieAlgebra, fq: &Fq) -> bool {
        if !self.is_lie_automorphism(alg, fq) {
            return false;
        }
        for i in 0..alg.dim() {
            let lhs = self.apply(alg.pmap_image(i), fq);
            let rhs = alg.jacobson_p_power(&self.apply(&alg.basis_element(i), fq), fq);
            if lhs != rhs {
                return false;
            }
        }
        true
    }
}

// ----- builtin algebras -----

/// The elementary abelian algebra of dimension `r` (abelian, trivial p-map).
pub fn elementary(r: usize, p: u64) -> Arc<LieAlgebra> {
    LieAlgebra::new(
        format!("e{r}"),
        AlgebraKind::Elementary,
        p,
        (0..r).map(|i| format!("x{i}")).collect(),
        &[],
        &[],
    )
    .verified()
    .expect("elementary algebra is restricted")
}

/// The three-dimensional Heisenberg algebra with trivial p-map:
/// `[x, y] = z`, everything else central.
pub fn heisenberg(p: u64) -> Arc<LieAlgebra> {
    LieAlgebra::new(
        "heisenberg",
        AlgebraKind::Heisenberg,
        p,
        vec!["x".into(), "y".into(), "z".into()],
        &[(0, 1, vec![(2, 1)])],
        &[],
    )
    .verified()
    .expect("heisenberg algebra is restricted")
}

/// `sl(2)` with standard basis `{e, h, f}`; the p-map comes from p-th
/// powers in the defining two-by-two representation: `e, f` are p-nilpotent
/// and `h^[p] = h`.
pub fn sl2(p: u64) -> Arc<LieAlgebra> {
    LieAlgebra::new(
        "sl2",
        AlgebraKind::Sl2,
        p,
        vec!["e".into(), "h".into(), "f".into()],
        &[
            (1, 0, vec![(0, 2)]),  // [h, e] = 2e
            (1, 2, vec![(2, -2)]), // [h, f] = -2f
            (0, 2, vec![(1, 1)]),  // [e, f] = h
        ],
        &[(1, vec![(1, 1)])],
    )
    .verified()
    .expect("sl2 is restricted")
}

/// The central extension `sl(2)_s = sl(2) + k c0`: the bracket extends
/// `sl(2)` with `c0` central, and the p-map is
/// `(x, a c0)^[p] = (x^[p], psi(x)^p c0)` with `psi(h) = 1`,
/// `psi(e) = psi(f) = 0`. Concretely `h^[p] = h + c0` and `c0^[p] = 0`.
pub fn sl2s(p: u64) -> Arc<LieAlgebra> {
    LieAlgebra::new(
        "sl2s",
        AlgebraKind::Sl2s,
        p,
        vec!["e".into(), "h".into(), "f".into(), "c0".into()],
        &[
            (1, 0, vec![(0, 2)]),
            (1, 2, vec![(2, -2)]),
            (0, 2, vec![(1, 1)]),
        ],
        &[(1, vec![(1, 1), (3, 1)])],
    )
    .verified()
    .expect("sl2s is restricted")
}

/// The eight-dimensional algebra `e + f + T` with `e = <x1, x2>`,
/// `f = <y1, y2>`, `T = <z11, z12, z21, z22>`: `[x_i, y_j] = z_ij`, `T`
/// central and toral (`z_ij^[p] = z_ij`), `x`- and `y`-planes p-nilpotent.
/// Its variety of elementary planes is exactly the pair `{e, f}`.
pub fn twoplanes(p: u64) -> Arc<LieAlgebra> {
    let names: Vec<String> = vec![
        "x1".into(),
        "x2".into(),
        "y1".into(),
        "y2".into(),
        "z11".into(),
        "z12".into(),
        "z21".into(),
        "z22".into(),
    ];
    let mut brackets = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            brackets.push((i, 2 + j, vec![(4 + 2 * i + j, 1i64)]));
        }
    }
    let pmap: Vec<(usize, Vec<(usize, i64)>)> =
        (4..8).map(|z| (z, vec![(z, 1i64)])).collect();
    LieAlgebra::new("twoplanes", AlgebraKind::TwoPlanes, p, names, &brackets, &pmap)
        .verified()
        .expect("twoplanes is restricted")
}

/// The Witt algebra `W(1)` with basis `e_{-1}, ..., e_{p-2}`,
/// `[e_i, e_j] = (j - i) e_{i+j}`. The p-map is computed once from p-th
/// matrix powers in the defining representation on `k[x]/(x^p)` (where
/// `e_i` acts as `x^{i+1} d/dx`) and then stored.
pub fn witt1(p: u64) -> Arc<LieAlgebra> {
    let n = p as usize;
    let fq = Fq::prime(p).expect("p prime");
    let names: Vec<String> = (0..n).map(|i| format!("e{}", i as i64 - 1)).collect();
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            // indices shift: slot a holds e_{a-1}.
            let da = a as i64 - 1;
            let db = b as i64 - 1;
            let target = da + db;
            if (-1..=(p as i64 - 2)).contains(&target) {
                brackets.push((a, b, vec![((target + 1) as usize, db - da)]));
            }
        }
    }
    // Defining representation: e_d maps x^l to l x^{d+l} on basis 1..x^{p-1}.
    let rep = |d: i64| -> Matrix {
        let mut m = Matrix::zero(n, n);
        for l in 0..n as i64 {
            let target = d + l;
            if (0..n as i64).contains(&target) && l > 0 {
                m.set(target as usize, l as usize, fq.from_int(l));
            }
        }
        m
    };
    // Express each p-th power back in the basis by matching matrix entries.
    let mut pmap = Vec::new();
    for a in 0..n {
        let da = a as i64 - 1;
        let power = rep(da).pow(p, &fq);
        let mut terms = Vec::new();
        if !power.is_zero() {
            // The span of the rep matrices is entry-disjoint per degree d:
            // solve by reading off one witness entry per candidate degree.
            let mut rem = power.clone();
            for b in 0..n {
                let db = b as i64 - 1;
                let basis_mat = rep(db);
                // Find a nonzero witness entry of basis_mat.
                let mut coeff = 0;
                'scan: for r in 0..n {
                    for c in 0..n {
                        if basis_mat.at(r, c) != 0 {
                            coeff = fq.mul(rem.at(r, c), fq.inv(basis_mat.at(r, c)));
                            break 'scan;
                        }
                    }
                }
                if coeff != 0 {
                    terms.push((b, coeff as i64));
                    rem = rem.sub(&basis_mat.scale(coeff, &fq), &fq);
                }
            }
            assert!(rem.is_zero(), "W(1) p-th power must lie in the algebra");
        }
        if !terms.is_empty() {
            pmap.push((a, terms));
        }
    }
    LieAlgebra::new("w1", AlgebraKind::Witt1, p, names, &brackets, &pmap)
        .verified()
        .expect("W(1) is restricted")
}

/// The order-two automorphism of `sl(2)` or `sl(2)_s` swapping `e` and `f`
/// and negating `h` (and `c0` when present).
pub fn cartan_involution(alg: &LieAlgebra) -> Automorphism {
    let fq = alg.prime_field();
    let n = alg.dim();
    assert!(matches!(alg.kind(), AlgebraKind::Sl2 | AlgebraKind::Sl2s));
    let mut m = Matrix::zero(n, n);
    m.set(2, 0, 1); // e -> f
    m.set(0, 2, 1); // f -> e
    m.set(1, 1, fq.neg(1)); // h -> -h
    if n == 4 {
        m.set(3, 3, fq.neg(1)); // c0 -> -c0
    }
    Automorphism::new(m)
}

/// All builtin algebras at a given prime, keyed by their CLI names.
pub fn builtins(p: u64) -> BTreeMap<String, Arc<LieAlgebra>> {
    let mut map = BTreeMap::new();
    for r in 1..=3usize {
        map.insert(format!("e{r}"), elementary(r, p));
    }
    map.insert("heisenberg".into(), heisenberg(p));
    map.insert("sl2".into(), sl2(p));
    map.insert("sl2s".into(), sl2s(p));
    map.insert("twoplanes".into(), twoplanes(p));
    map.insert("w1".into(), witt1(p));
    map
}

/// Resolve a builtin by CLI name, e.g. `"sl2s"` or `"e4"`.
pub fn builtin(name: &str, p: u64) -> Result<Arc<LieAlgebra>> {
    if let Some(r) = name.strip_prefix('e').and_then(|s| s.parse::<usize>().ok()) {
        if r >= 1 && r <= 12 {
            return Ok(elementary(r, p));
        }
    }
    match name {
        "heisenberg" | "h0" => Ok(heisenberg(p)),
        "sl2" => Ok(sl2(p)),
        "sl2s" => Ok(sl2s(p)),
        "twoplanes" => Ok(twoplanes(p)),
        "w1" => Ok(witt1(p)),
        _ => Err(Error::Parse(format!("unknown builtin algebra `{name}`"))),
    }
}

// ----- JSON interchange -----

#[derive(Debug, Serialize, Deserialize)]
struct AlgebraFile {
    p: u64,
    basis: Vec<String>,
    #[serde(default)]
    brackets: Vec<Vec<i64>>,
    #[serde(default)]
    pmap: Vec<Vec<i64>>,
}

/// Parse an algebra definition from its JSON document. Bracket entries are
/// flat rows `[i, j, c_1, ..., c_n]`; omitted brackets and p-map images
/// default to zero. The reverse bracket `[j, i]` is filled in by
/// antisymmetry.
pub fn algebra_from_json(text: &str) -> Result<LieAlgebra> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    let dim = file.basis.len();
    if dim == 0 {
        return Err(Error::Parse("algebra must have at least one basis element".into()));
    }
    let mut bracket_list = Vec::new();
    for row in &file.brackets {
        if row.len() != dim + 2 {
            return Err(Error::Parse(format!(
                "bracket row must be [i, j, {dim} coefficients], got length {}",
                row.len()
            )));
        }
        let i = row[0] as usize;
        let j = row[1] as usize;
        if i >= dim || j >= dim {
            return Err(Error::Parse(format!("bracket indices ({i}, {j}) out of range")));
        }
        let terms: Vec<(usize, i64)> = row[2..]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k, c))
            .collect();
        bracket_list.push((i, j, terms));
    }
    let mut pmap_list = Vec::new();
    for (i, row) in file.pmap.iter().enumerate() {
        if i >= dim || row.len() != dim {
            return Err(Error::Parse("pmap rows must match the basis length".into()));
        }
        let terms: Vec<(usize, i64)> = row
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k, c))
            .collect();
        pmap_list.push((i, terms));
    }
    Ok(LieAlgebra::new(
        "custom",
        AlgebraKind::Other,
        file.p,
        file.basis,
        &bracket_list,
        &pmap_list,
    ))
}

pub fn algebra_to_json(alg: &LieAlgebra) -> serde_json::Value {
    let mut brackets = Vec::new();
    for i in 0..alg.dim {
        for j in i + 1..alg.dim {
            if alg.brackets[i][j].iter().any(|&c| c != 0) {
                let mut row = vec![i as i64, j as i64];
                row.extend(alg.brackets[i][j].iter().map(|&c| c as i64));
                brackets.push(row);
            }
        }
    }
    let pmap: Vec<Vec<i64>> = alg
        .pmap
        .iter()
        .map(|row| row.iter().map(|&c| c as i64).collect())
        .collect();
    serde_json::json!({
        "p": alg.p,
        "basis": alg.basis_names,
        "brackets": brackets,
        "pmap": pmap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_pass_axioms() {
        for p in [3u64, 5, 7] {
            for (name, alg) in builtins(p) {
                assert!(alg.verify().is_valid(), "{name} at p={p}");
            }
        }
    }

    #[test]
    fn heisenberg_brackets_and_center() {
        let h = heisenberg(5);
        let fq = h.prime_field();
        let x = h.basis_element(0);
        let y = h.basis_element(1);
        let z = h.basis_element(2);
        assert_eq!(h.bracket(&x, &y, &fq), z);
        assert!(h.ad(&z, &fq).is_zero());
        assert!(h.ad(&vec![0, 0, 0], &fq).is_zero());
        // C(h) = k z and [h, h] = k z.
        let kz = Subspace::from_vectors(&[z.clone()], 3, &fq);
        assert_eq!(h.center(&fq), kz);
        assert_eq!(h.derived(&fq), kz);
    }

    #[test]
    fn sl2_pmap_matches_defining_representation() {
        // Oracle: p-th powers of the 2x2 matrices e, h, f.
        // e^2 = f^2 = 0 and h^p = h since h = diag(1, -1).
        let alg = sl2(5);
        let fq = alg.prime_field();
        assert_eq!(alg.pmap_image(0), &[0, 0, 0]);
        assert_eq!(alg.pmap_image(1), &[0, 1, 0]);
        assert_eq!(alg.pmap_image(2), &[0, 0, 0]);
        // (e + f)^[p] = e + f: the matrix e + f squares to the identity,
        // so its p-th power (p odd) is itself.
        let x = vec![1, 0, 1];
        assert_eq!(alg.jacobson_p_power(&x, &fq), x);
    }

    #[test]
    fn sl2s_pmap_and_involution() {
        let alg = sl2s(5);
        let fq = alg.prime_field();
        // (h + c0)^[p] = h + c0.
        let hc = vec![0, 1, 0, 1];
        assert_eq!(alg.jacobson_p_power(&hc, &fq), hc);
        // Elementary abelian entries: e, c0 are p-nilpotent.
        assert_eq!(alg.jacobson_p_power(&vec![1, 0, 0, 3], &fq), vec![0, 0, 0, 0]);
        // Center is exactly k c0 (solved from the linear system).
        let c0 = alg.basis_element(3);
        assert_eq!(alg.center(&fq), Subspace::from_vectors(&[c0], 4, &fq));
        let omega = cartan_involution(&alg);
        assert!(omega.is_p_automorphism(&alg, &fq));
        let id = omega.compose(&omega, &fq);
        assert_eq!(id.matrix(), Automorphism::identity(4).matrix());
    }

    #[test]
    fn corrupted_sl2_pmap_is_reported_at_h() {
        let bad = LieAlgebra::new(
            "sl2-bad",
            AlgebraKind::Other,
            5,
            vec!["e".into(), "h".into(), "f".into()],
            &[
                (1, 0, vec![(0, 2)]),
                (1, 2, vec![(2, -2)]),
                (0, 2, vec![(1, 1)]),
            ],
            &[(1, vec![(0, 1)])], // h^[p] corrupted to e
        );
        let report = bad.verify();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("at h")));
    }

    #[test]
    fn witt_pmap_is_toral_at_zero_and_nil_elsewhere() {
        for p in [5u64, 7] {
            let w = witt1(p);
            // e_0 is slot 1; e_0^[p] = e_0.
            let mut expected = vec![0u64; p as usize];
            expected[1] = 1;
            assert_eq!(w.pmap_image(1), &expected[..]);
            for slot in [0usize, 2, 3] {
                assert!(w.pmap_image(slot).iter().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn jacobson_is_p_semilinear_in_scalars() {
        let alg = sl2s(5);
        let fq = alg.field(2).unwrap();
        let x = vec![2, 3, 1, 4];
        for c in [2u64, 7, 13] {
            let scaled: Vec<Scalar> = x.iter().map(|&v| fq.mul(c, v)).collect();
            let lhs = alg.jacobson_p_power(&scaled, &fq);
            let cp = fq.pow(c, 5);
            let rhs: Vec<Scalar> = alg
                .jacobson_p_power(&x, &fq)
                .iter()
                .map(|&v| fq.mul(cp, v))
                .collect();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn jacobson_ad_compatibility_on_random_elements() {
        let alg = witt1(5);
        let fq = alg.prime_field();
        let samples = [
            vec![1, 2, 0, 4, 1],
            vec![0, 1, 1, 0, 3],
            vec![2, 0, 0, 1, 0],
            vec![4, 4, 4, 4, 4],
        ];
        for x in samples {
            let z = alg.jacobson_p_power(&x, &fq);
            assert_eq!(alg.ad(&z, &fq), alg.ad(&x, &fq).pow(5, &fq));
        }
    }

    #[test]
    fn abelian_ideal_power_formula() {
        // For b in an elementary abelian ideal:
        // (a + b)^[p] = a^[p] + (ad a)^{p-1}(b).
        let h = heisenberg(5);
        let fq = h.prime_field();
        // n = k z + k x is an elementary abelian ideal.
        for a in [vec![0u64, 1, 0], vec![1, 2, 3], vec![0, 3, 1]] {
            for b in [vec![1u64, 0, 2], vec![2, 0, 0], vec![0, 0, 1]] {
                let sum: Vec<Scalar> = (0..3).map(|i| fq.add(a[i], b[i])).collect();
                let lhs = h.jacobson_p_power(&sum, &fq);
                let correction = h.ad(&a, &fq).pow(4, &fq).apply(&b, &fq);
                let apow = h.jacobson_p_power(&a, &fq);
                let rhs: Vec<Scalar> = (0..3).map(|i| fq.add(apow[i], correction[i])).collect();
                assert_eq!(lhs, rhs, "a={a:?} b={b:?}");
            }
        }
    }

    #[test]
    fn quotient_of_sl2s_by_center_is_sl2() {
        let alg = sl2s(5);
        let fq = alg.prime_field();
        let c0 = alg.basis_element(3);
        let ideal = Subspace::from_vectors(&[c0], 4, &fq);
        let (q, proj) = alg.quotient(&ideal).unwrap();
        assert!(q.verify().is_valid());
        assert_eq!(q.dim(), 3);
        // Induced p-map: h + ideal has p-power h + ideal.
        assert_eq!(q.pmap_image(1), &[0, 1, 0]);
        // Projection commutes with p-powers.
        let x = vec![1, 1, 0, 2];
        let lhs = proj.project(&alg.jacobson_p_power(&x, &fq), &fq);
        let rhs = q.jacobson_p_power(&proj.project(&x, &fq), &fq);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_rejects_non_ideals() {
        let alg = sl2(5);
        let fq = alg.prime_field();
        let ke = Subspace::from_vectors(&[alg.basis_element(0)], 3, &fq);
        assert!(matches!(alg.quotient(&ke), Err(Error::NotIdeal(_))));
    }

    #[test]
    fn p_ideal_closure_of_e_in_sl2_is_everything() {
        let alg = sl2(5);
        let fq = alg.prime_field();
        let closure = alg.p_ideal_closure(&[alg.basis_element(0)], &fq);
        assert_eq!(closure.dim(), 3);
    }

    #[test]
    fn normalizer_and_centralizer_in_sl2() {
        let alg = sl2(5);
        let fq = alg.prime_field();
        let ke = Subspace::from_vectors(&[alg.basis_element(0)], 3, &fq);
        // Nor(ke) = ke + kh, C(e) = ke.
        let nor = alg.normalizer(&ke, &fq);
        assert_eq!(nor.dim(), 2);
        assert!(nor.contains(&alg.basis_element(1), &fq));
        let cent = alg.centralizer(&[alg.basis_element(0)], &fq);
        assert_eq!(cent, ke);
    }

    #[test]
    fn json_roundtrip() {
        let alg = sl2s(5);
        let text = algebra_to_json(&alg).to_string();
        let back = algebra_from_json(&text).unwrap();
        assert!(back.verify().is_valid());
        let fq = alg.prime_field();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    alg.bracket(&alg.basis_element(i), &alg.basis_element(j), &fq),
                    back.bracket(&back.basis_element(i), &back.basis_element(j), &fq)
                );
            }
            assert_eq!(alg.pmap_image(i), back.pmap_image(i));
        }
    }

    #[test]
    fn aut_p_membership_cross_checked_off_basis() {
        let alg = sl2s(7);
        let fq = alg.prime_field();
        let omega = cartan_involution(&alg);
        for x in [vec![1u64, 2, 3, 4], vec![0, 5, 1, 1], vec![6, 0, 0, 2]] {
            let lhs = omega.apply(&alg.jacobson_p_power(&x, &fq), &fq);
            let rhs = alg.jacobson_p_power(&omega.apply(&x, &fq), &fq);
            assert_eq!(lhs, rhs);
        }
    }
}
