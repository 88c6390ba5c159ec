//! Dense exact matrices and canonical subspaces over `F_{p^k}`.
//!
//! All values are immutable after construction and every operation is pure;
//! the field context is passed explicitly. Matrices with entries `< p` are
//! valid over any extension of the same characteristic, which lets modules
//! defined over the prime field be evaluated at extension-field points.

use crate::field::{Fq, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of row reduction: the reduced row echelon form, its rank and the
/// pivot columns. RREF is canonical, so two matrices have equal row space
/// iff their `rref` matrices agree.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Scalar> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix, fq: &Fq) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| fq.add(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix, fq: &Fq) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| fq.sub(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: Scalar, fq: &Fq) -> Matrix {
        let data = self.data.iter().map(|&a| fq.mul(a, c)).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &Matrix, fq: &Fq) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.at(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = fq.add(out.at(i, j), fq.mul(a, other.at(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `self^e` for a square matrix.
    pub fn pow(&self, e: u64, fq: &Fq) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, fq);
            }
            base = base.mul(&base, fq);
            e >>= 1;
        }
        acc
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Scalar], fq: &Fq) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| fq.dot(self.row(i), v)).collect()
    }

    /// Reduced row echelon form with rank and pivot columns.
    pub fn rref(&self, fq: &Fq) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Find a pivot in this column at or below row r.
            let mut piv = None;
            for i in r..m.rows {
                if m.at(i, col) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            if piv != r {
                for j in 0..m.cols {
                    let a = m.at(r, j);
                    let b = m.at(piv, j);
                    m.set(r, j, b);
                    m.set(piv, j, a);
                }
            }
            let inv = fq.inv(m.at(r, col));
            for j in col..m.cols {
                m.set(r, j, fq.mul(m.at(r, j), inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.at(i, col);
                if f == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let v = fq.sub(m.at(i, j), fq.mul(f, m.at(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self, fq: &Fq) -> usize {
        self.rref(fq).rank
    }

    /// Basis of the right null space `{v : Av = 0}`, one vector per row.
    pub fn kernel_basis(&self, fq: &Fq) -> Matrix {
        let r = self.rref(fq);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in r.pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&j| pivot_set[j].is_none()).collect();
        let mut out = Matrix::zero(free.len(), self.cols);
        for (idx, &fcol) in free.iter().enumerate() {
            out.set(idx, fcol, 1);
            for (row, &pcol) in r.pivots.iter().enumerate() {
                out.set(idx, pcol, fq.neg(r.matrix.at(row, fcol)));
            }
        }
        out
    }

    pub fn det(&self, fq: &Fq) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = fq.one();
        for col in 0..n {
            let mut piv = None;
            for i in col..n {
                if m.at(i, col) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { return 0 };
            if piv != col {
                for j in 0..n {
                    let a = m.at(col, j);
                    let b = m.at(piv, j);
                    m.set(col, j, b);
                    m.set(piv, j, a);
                }
                det = fq.neg(det);
            }
            det = fq.mul(det, m.at(col, col));
            let inv = fq.inv(m.at(col, col));
            for i in col + 1..n {
                let f = fq.mul(m.at(i, col), inv);
                if f == 0 {
                    continue;
                }
                for j in col..n {
                    let v = fq.sub(m.at(i, j), fq.mul(f, m.at(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self, fq: &Fq) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let r = aug.rref(fq);
        if r.rank < n || r.pivots.iter().take(n).copied().ne(0..n) {
            return None;
        }
        let mut inv = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.matrix.at(i, n + j));
            }
        }
        Some(inv)
    }

    /// Submatrix picked by row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zero(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.at(r, c));
            }
        }
        m
    }
}

/// All `r`-element subsets of `0..n` in lexicographic order.
pub fn subsets_lex(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next subset in lex order.
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - r {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// The `r`-th compound (exterior power) matrix: entry `(R, C)` is the
/// `r x r` minor of `A` on row set `R` and column set `C`, both ordered
/// lexicographically. By Cauchy-Binet, `rank A = r` implies the compound
/// has rank one, and any nonzero column is a Pluecker coordinate vector of
/// the column space of `A`.
pub fn compound(a: &Matrix, r: usize, fq: &Fq) -> Result<Matrix> {
    if r == 0 || r > a.rows().min(a.cols()) {
        return Err(Error::Range(format!(
            "compound order {r} out of range for a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let nr = binomial(a.rows(), r);
    let nc = binomial(a.cols(), r);
    if nr.saturating_mul(nc) > 4_000_000 {
        return Err(Error::EnumerationBound(nr * nc, 4_000_000));
    }
    let row_sets = subsets_lex(a.rows(), r);
    let col_sets = subsets_lex(a.cols(), r);
    let mut out = Matrix::zero(row_sets.len(), col_sets.len());
    for (i, rs) in row_sets.iter().enumerate() {
        for (j, cs) in col_sets.iter().enumerate() {
            out.set(i, j, a.submatrix(rs, cs).det(fq));
        }
    }
    Ok(out)
}

/// A linear subspace of `F_q^n` in canonical form: the basis matrix is the
/// RREF of any spanning set with zero rows dropped, so two `Subspace` values
/// are equal iff they are the same subspace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    pub fn from_rows(rows: &Matrix, fq: &Fq) -> Subspace {
        let r = rows.rref(fq);
        let mut basis = Matrix::zero(r.rank, rows.cols());
        for i in 0..r.rank {
            for j in 0..rows.cols() {
                basis.set(i, j, r.matrix.at(i, j));
            }
        }
        Subspace {
            ambient: rows.cols(),
            basis,
        }
    }

    pub fn from_vectors(vecs: &[Vec<Scalar>], ambient: usize, fq: &Fq) -> Subspace {
        if vecs.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::from_rows(&Matrix::from_rows(vecs.to_vec()), fq)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row_vec(i)).collect()
    }

    pub fn contains(&self, v: &[Scalar], fq: &Fq) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce v against the RREF basis.
        let mut w = v.to_vec();
        for i in 0..self.dim() {
            let pivot = self.basis.row(i).iter().position(|&x| x != 0).unwrap();
            let c = w[pivot];
            if c != 0 {
                for j in 0..self.ambient {
                    w[j] = fq.sub(w[j], fq.mul(c, self.basis.at(i, j)));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace, fq: &Fq) -> bool {
        (0..self.dim()).all(|i| other.contains(self.basis.row(i), fq))
    }

    pub fn sum(&self, other: &Subspace, fq: &Fq) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "subspace sum: ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Ok(Subspace::from_vectors(&rows, self.ambient, fq))
    }

    /// Intersection via the Zassenhaus block construction: row reduce
    /// `[U | U; W | 0]`; rows with vanishing left block carry a basis of
    /// the intersection in their right block.
    pub fn intersect(&self, other: &Subspace, fq: &Fq) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "subspace intersection: ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        let n = self.ambient;
        let du = self.dim();
        let dw = other.dim();
        let mut block = Matrix::zero(du + dw, 2 * n);
        for i in 0..du {
            for j in 0..n {
                block.set(i, j, self.basis.at(i, j));
                block.set(i, n + j, self.basis.at(i, j));
            }
        }
        for i in 0..dw {
            for j in 0..n {
                block.set(du + i, j, other.basis.at(i, j));
            }
        }
        let r = block.rref(fq);
        let mut inter_rows = Vec::new();
        for i in 0..r.rank {
            let left_zero = (0..n).all(|j| r.matrix.at(i, j) == 0);
            if left_zero {
                inter_rows.push((0..n).map(|j| r.matrix.at(i, n + j)).collect::<Vec<_>>());
            }
        }
        Ok(Subspace::from_vectors(&inter_rows, n, fq))
    }

    /// Basis of the annihilator `{a : a . u = 0 for all u in self}` under
    /// the standard bilinear form; `x` lies in `self` iff `ann * x = 0`.
    pub fn annihilator_matrix(&self, fq: &Fq) -> Matrix {
        self.basis.kernel_basis(fq)
    }

    /// Image of this subspace under a linear map (rows act as vectors).
    pub fn map(&self, a: &Matrix, fq: &Fq) -> Subspace {
        let rows: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|i| a.apply(self.basis.row(i), fq))
            .collect();
        Subspace::from_vectors(&rows, a.rows(), fq)
    }
}

/// Column space of a matrix as a canonical subspace.
pub fn column_space(a: &Matrix, fq: &Fq) -> Subspace {
    Subspace::from_rows(&a.transpose(), fq)
}

/// Kernel of a matrix as a canonical subspace.
pub fn kernel_space(a: &Matrix, fq: &Fq) -> Subspace {
    Subspace::from_rows(&a.kernel_basis(fq), fq)
}

/// Jordan chains of a nilpotent matrix: returns chains of vectors
/// `[u_0, ..., u_{l-1}]` with `A u_s = u_{s-1}` and `A u_0 = 0`; the
/// concatenation of all chains is a basis. Errors if `A` is not nilpotent.
pub fn nilpotent_jordan_chains(a: &Matrix, fq: &Fq) -> Result<Vec<Vec<Vec<Scalar>>>> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return Ok(vec![]);
    }
    // Kernel filtration ker A^0 <= ker A^1 <= ... <= ker A^m = full.
    let mut powers = vec![Matrix::identity(n)];
    let mut kernels = vec![Subspace::zero(n)];
    let mut m = 0;
    loop {
        let next = powers.last().unwrap().mul(a, fq);
        let ker = kernel_space(&next, fq);
        powers.push(next);
        kernels.push(ker);
        m += 1;
        if kernels[m].dim() == n {
            break;
        }
        if m > n {
            return Err(Error::NotNilpotent(format!(
                "matrix of size {n} is not nilpotent"
            )));
        }
    }
    let mut chains: Vec<Vec<Vec<Scalar>>> = Vec::new();
    for l in (1..=m).rev() {
        // Tops of length-l chains: a complement of ker A^{l-1} + A ker A^{l+1}
        // inside ker A^l.
        let upper = if l + 1 <= m {
            kernels[l + 1].map(a, fq)
        } else {
            Subspace::zero(n)
        };
        let excluded = kernels[l - 1].sum(&upper, fq)?;
        let mut seen = excluded.basis_vectors();
        for cand in kernels[l].basis_vectors() {
            let mut trial = seen.clone();
            trial.push(cand.clone());
            if Subspace::from_vectors(&trial, n, fq).dim() > Subspace::from_vectors(&seen, n, fq).dim()
            {
                // New top; build its chain bottom-up.
                let mut chain = Vec::with_capacity(l);
                for s in 0..l {
                    chain.push(powers[l - 1 - s].apply(&cand, fq));
                }
                chains.push(chain);
                seen.push(cand);
            }
        }
    }
    // The chain vectors must form a basis; verify.
    let all: Vec<Vec<Scalar>> = chains.iter().flatten().cloned().collect();
    assert_eq!(all.len(), n, "jordan chains must exhaust the space");
    let p = Matrix::from_rows(all);
    if p.rank(fq) != n {
        return Err(Error::NotNilpotent(
            "internal: jordan chain extraction failed".into(),
        ));
    }
    Ok(chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Fq {
        Fq::prime(5).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = f5();
        let id = Matrix::identity(4);
        let r = id.rref(&f);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 4);
        let z = Matrix::zero(3, 3);
        let r = z.rref(&f);
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_hand_example_over_f5() {
        // [[1,2],[2,4]] row-reduces by hand: R2 <- R2 - 2 R1 = [0,0].
        let f = f5();
        let m = Matrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        let r = m.rref(&f);
        assert_eq!(r.rank, 1);
        assert_eq!(r.matrix, Matrix::from_rows(vec![vec![1, 2], vec![0, 0]]));
    }

    #[test]
    fn rref_is_idempotent() {
        let f = f5();
        let m = Matrix::from_rows(vec![vec![2, 3, 1], vec![4, 1, 0], vec![1, 4, 1]]);
        let r1 = m.rref(&f).matrix;
        let r2 = r1.rref(&f).matrix;
        assert_eq!(r1, r2);
    }

    #[test]
    fn rank_nullity() {
        let f = f5();
        let m = Matrix::from_rows(vec![vec![1, 2, 3], vec![2, 4, 1], vec![3, 1, 4]]);
        assert_eq!(m.rank(&f) + m.kernel_basis(&f).rows(), m.cols());
    }

    #[test]
    fn subspace_sum_and_intersection_dimension_formula() {
        let f = f5();
        let u = Subspace::from_vectors(&[vec![1, 0, 0], vec![0, 1, 0]], 3, &f);
        let w = Subspace::from_vectors(&[vec![0, 1, 0], vec![0, 0, 1]], 3, &f);
        let s = u.sum(&w, &f).unwrap();
        let i = u.intersect(&w, &f).unwrap();
        assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        // Oracle: enumerate all 25 vectors of each span and intersect.
        let mut common = vec![];
        for a in 0..5u64 {
            for b in 0..5u64 {
                let v = vec![a, b, 0u64];
                let w2 = vec![0u64, a, b];
                if u.contains(&v, &f) && w.contains(&v, &f) {
                    common.push(v);
                }
                if u.contains(&w2, &f) && w.contains(&w2, &f) {
                    common.push(w2);
                }
            }
        }
        let oracle = Subspace::from_vectors(&common, 3, &f);
        assert_eq!(i, oracle);
        assert_eq!(i, Subspace::from_vectors(&[vec![0, 1, 0]], 3, &f));
    }

    #[test]
    fn trivial_subspace_identities() {
        let f = f5();
        let u = Subspace::from_vectors(&[vec![1, 2, 3], vec![0, 1, 4]], 3, &f);
        assert_eq!(u.sum(&Subspace::zero(3), &f).unwrap(), u);
        assert_eq!(u.intersect(&u, &f).unwrap(), u);
    }

    #[test]
    fn compound_identity_and_first_order() {
        let f = f5();
        for r in 1..=3 {
            let c = compound(&Matrix::identity(4), r, &f).unwrap();
            assert_eq!(c, Matrix::identity(binomial(4, r) as usize));
        }
        let m = Matrix::from_rows(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(compound(&m, 1, &f).unwrap(), m);
    }

    #[test]
    fn compound_of_rank_two_matrix_has_rank_one() {
        let f = f5();
        // A = B * C with B 4x2 and C 2x4 has rank 2.
        let b = Matrix::from_rows(vec![vec![1, 2], vec![0, 1], vec![3, 1], vec![2, 2]]);
        let c = Matrix::from_rows(vec![vec![1, 0, 2, 4], vec![0, 1, 1, 3]]);
        let a = b.mul(&c, &f);
        assert_eq!(a.rank(&f), 2);
        let w = compound(&a, 2, &f).unwrap();
        assert_eq!(w.rank(&f), 1);
    }

    #[test]
    fn jordan_chains_of_shift_plus_split() {
        let f = f5();
        // Block diag of a 3-chain and a 1-chain.
        let mut a = Matrix::zero(4, 4);
        a.set(0, 1, 1);
        a.set(1, 2, 1);
        let chains = nilpotent_jordan_chains(&a, &f).unwrap();
        let mut lens: Vec<usize> = chains.iter().map(|c| c.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![1, 3]);
        for chain in &chains {
            for s in 1..chain.len() {
                assert_eq!(a.apply(&chain[s], &f), chain[s - 1]);
            }
            assert!(a.apply(&chain[0], &f).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn jordan_rejects_non_nilpotent() {
        let f = f5();
        assert!(nilpotent_jordan_chains(&Matrix::identity(2), &f).is_err());
    }

    proptest! {
        #[test]
        fn rref_canonical_for_row_space(seed in 0u64..32) {
            // Shuffling rows and scaling by units keeps the RREF fixed.
            let f = f5();
            let base = Matrix::from_rows(vec![
                vec![seed % 5, (seed + 1) % 5, 3],
                vec![2, (seed + 3) % 5, 1],
            ]);
            let scaled = Matrix::from_rows(vec![
                base.row_vec(1).iter().map(|&x| f.mul(x, 2)).collect(),
                base.row_vec(0).iter().map(|&x| f.mul(x, 3)).collect(),
            ]);
            prop_assert_eq!(
                Subspace::from_rows(&base, &f),
                Subspace::from_rows(&scaled, &f)
            );
        }

        #[test]
        fn compound_columns_projectively_proportional(s in 1u64..5, t in 0u64..5, u in 0u64..5) {
            // Rank-2 matrix: all nonzero compound columns are proportional.
            let f = f5();
            let b = Matrix::from_rows(vec![vec![1, s], vec![t, 1], vec![u, 2]]);
            let c = Matrix::from_rows(vec![vec![1, 0, s], vec![t, 1, 1]]);
            let a = b.mul(&c, &f);
            prop_assume!(a.rank(&f) == 2);
            let w = compound(&a, 2, &f).unwrap();
            let cols: Vec<Vec<u64>> = (0..w.cols()).map(|j| w.col_vec(j)).collect();
            let nonzero: Vec<&Vec<u64>> = cols.iter().filter(|c| c.iter().any(|&x| x != 0)).collect();
            for a1 in &nonzero {
                for a2 in &nonzero {
                    // Proportional iff the 2x(len) matrix has rank <= 1.
                    let m = Matrix::from_rows(vec![(*a1).clone(), (*a2).clone()]);
                    prop_assert!(m.rank(&f) <= 1);
                }
            }
        }
    }
}
