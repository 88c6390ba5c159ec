//! PBW arithmetic in the restricted enveloping algebra `U_0(g)` and
//! construction of induced modules.
//!
//! Elements are kept in normal form: sums of monomials
//! `b_1^{a_1} ... b_n^{a_n}` with all exponents below `p`, coefficients in
//! `F_p`. Products are straightened with the rewriting rules
//! `b_j b_i = b_i b_j + [b_j, b_i]` for `j > i` and `b_i^p = b_i^[p]`;
//! p-th-exponent reduction is applied eagerly so intermediate supports stay
//! inside the `p^n` monomial basis. Straightening steps are memoized per
//! `(monomial, generator)` pair; results do not depend on cache state.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::field::{Fq, Scalar};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::modules::Module;
use crate::{Error, Result};

type Mono = Vec<u8>;

/// An element of `U_0(g)` in PBW normal form: exponent tuple to nonzero
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct U0Element {
    terms: BTreeMap<Mono, Scalar>,
}

impl U0Element {
    pub fn zero() -> U0Element {
        U0Element::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, mono: Mono, c: Scalar, fq: &Fq) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = fq.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
}

/// The enveloping algebra context: the underlying Lie algebra plus the
/// straightening cache.
pub struct U0 {
    alg: Arc<LieAlgebra>,
    fq: Fq,
    cache: RefCell<HashMap<(Mono, usize), U0Element>>,
}

impl U0 {
    pub fn new(alg: Arc<LieAlgebra>) -> U0 {
        let fq = alg.prime_field();
        U0 {
            alg,
            fq,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn one(&self) -> U0Element {
        let mut e = U0Element::zero();
        e.insert(vec![0; self.alg.dim()], 1, &self.fq);
        e
    }

    pub fn constant(&self, c: Scalar) -> U0Element {
        let mut e = U0Element::zero();
        e.insert(vec![0; self.alg.dim()], c % self.fq.p(), &self.fq);
        e
    }

    pub fn generator(&self, i: usize) -> U0Element {
        let mut m = vec![0u8; self.alg.dim()];
        m[i] = 1;
        let mut e = U0Element::zero();
        e.insert(m, 1, &self.fq);
        e
    }

    /// Degree-one element from a Lie algebra coefficient vector.
    pub fn from_lie(&self, x: &[Scalar]) -> U0Element {
        let mut e = U0Element::zero();
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                let mut m = vec![0u8; self.alg.dim()];
                m[i] = 1;
                e.insert(m, c, &self.fq);
            }
        }
        e
    }

    pub fn monomial(&self, exps: &[u8]) -> U0Element {
        assert_eq!(exps.len(), self.alg.dim());
        assert!(exps.iter().all(|&a| (a as u64) < self.fq.p()));
        let mut e = U0Element::zero();
        e.insert(exps.to_vec(), 1, &self.fq);
        e
    }

    pub fn add(&self, a: &U0Element, b: &U0Element) -> U0Element {
        let mut out = a.clone();
        for (m, &c) in b.terms() {
            out.insert(m.clone(), c, &self.fq);
        }
        out
    }

    pub fn scale(&self, a: &U0Element, c: Scalar) -> U0Element {
        let mut out = U0Element::zero();
        for (m, &x) in a.terms() {
            out.insert(m.clone(), self.fq.mul(x, c), &self.fq);
        }
        out
    }

    /// Normal-form product of a monomial with a single generator.
    fn mono_times_gen(&self, mono: &Mono, i: usize) -> U0Element {
        if let Some(hit) = self.cache.borrow().get(&(mono.clone(), i)) {
            return hit.clone();
        }
        let p = self.fq.p() as u8;
        // Last slot with positive exponent after position i.
        let tail = (i + 1..mono.len()).rev().find(|&l| mono[l] > 0);
        let result = match tail {
            None => {
                let mut m = mono.clone();
                m[i] += 1;
                if m[i] == p {
                    // b_i^p = b_i^[p]: prefix times a degree-one element.
                    m[i] = 0;
                    let image = self.alg.pmap_image(i).to_vec();
                    let mut acc = U0Element::zero();
                    for (k, &c) in image.iter().enumerate() {
                        if c != 0 {
                            let part = self.scale(&self.mono_times_gen(&m, k), c);
                            acc = self.add(&acc, &part);
                        }
                    }
                    acc
                } else {
                    let mut e = U0Element::zero();
                    e.insert(m, 1, &self.fq);
                    e
                }
            }
            Some(l) => {
                // mono = m' b_l, so mono * b_i = (m' * b_i) * b_l + m' * [b_l, b_i].
                let mut mp = mono.clone();
                mp[l] -= 1;
                let straightened = self.mono_times_gen(&mp, i);
                let mut acc = self.mul_by_gen(&straightened, l);
                let bl = self.alg.basis_element(l);
                let bi = self.alg.basis_element(i);
                let bracket = self.alg.bracket(&bl, &bi, &self.fq);
                for (k, &c) in bracket.iter().enumerate() {
                    if c != 0 {
                        let part = self.scale(&self.mono_times_gen(&mp, k), c);
                        acc = self.add(&acc, &part);
                    }
                }
                acc
            }
        };
        self.cache
            .borrow_mut()
            .insert((mono.clone(), i), result.clone());
        result
    }

    fn mul_by_gen(&self, a: &U0Element, i: usize) -> U0Element {
        let mut out = U0Element::zero();
        for (m, &c) in a.terms() {
            let part = self.scale(&self.mono_times_gen(m, i), c);
            out = self.add(&out, &part);
        }
        out
    }

    /// Normal-form product in `U_0(g)`; associative and unital.
    pub fn mul(&self, a: &U0Element, b: &U0Element) -> U0Element {
        let mut out = U0Element::zero();
        for (mb, &cb) in b.terms() {
            // Multiply a by the generators of mb in PBW order.
            let mut acc = a.clone();
            for (i, &e) in mb.iter().enumerate() {
                for _ in 0..e {
                    acc = self.mul_by_gen(&acc, i);
                }
            }
            out = self.add(&out, &self.scale(&acc, cb));
        }
        out
    }

    pub fn pow(&self, a: &U0Element, e: u64) -> U0Element {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

/// Data of an induced module: the subalgebra basis and restricted
/// character used, with the adapted complement order.
#[derive(Debug, Clone)]
pub struct InducedData {
    pub complement_basis: Vec<Vec<Scalar>>,
    pub dim: usize,
}

/// The module `U_0(g) (x)_{U_0(h)} k_lambda` induced from a restricted
/// character of a p-subalgebra `h`. The PBW basis is adapted so that
/// subalgebra generators come last; module basis vectors are the
/// complement monomials, and a character reduction finishes each action in
/// one pass after PBW normalization.
pub fn induced_module(
    alg: &Arc<LieAlgebra>,
    sub_basis: &[Vec<Scalar>],
    lambda: &[Scalar],
    name: &str,
) -> Result<Module> {
    let fq = alg.prime_field();
    let p = alg.p();
    assert_eq!(sub_basis.len(), lambda.len());
    let n = alg.dim();
    let sub = crate::linalg::Subspace::from_vectors(sub_basis, n, &fq);
    if sub.dim() != sub_basis.len() {
        return Err(Error::NotSubalgebra(
            "subalgebra basis is linearly dependent".into(),
        ));
    }
    if !alg.is_p_subalgebra(&sub, &fq) {
        return Err(Error::NotSubalgebra(
            "character domain is not a p-subalgebra".into(),
        ));
    }
    // Express a vector of the subalgebra in the given sub basis.
    let express_sub = |v: &[Scalar]| -> Result<Vec<Scalar>> {
        let bt = Matrix::from_rows(sub_basis.to_vec()).transpose();
        let mut aug = Matrix::zero(n, sub_basis.len() + 1);
        for i in 0..n {
            for j in 0..sub_basis.len() {
                aug.set(i, j, bt.at(i, j));
            }
            aug.set(i, sub_basis.len(), v[i]);
        }
        let r = aug.rref(&fq);
        if r.pivots.contains(&sub_basis.len()) {
            return Err(Error::NotSubalgebra("vector escapes the subalgebra".into()));
        }
        let mut c = vec![0; sub_basis.len()];
        for (row, &col) in r.pivots.iter().enumerate() {
            c[col] = r.matrix.at(row, sub_basis.len());
        }
        Ok(c)
    };
    let lam = |v: &[Scalar]| -> Result<Scalar> {
        let c = express_sub(v)?;
        Ok(fq.dot(&c, lambda))
    };
    // Restricted character: lambda([x, y]) = 0 and lambda(x^[p]) = lambda(x)^p.
    for (i, x) in sub_basis.iter().enumerate() {
        for y in sub_basis.iter() {
            let b = alg.bracket(x, y, &fq);
            if lam(&b)? != 0 {
                return Err(Error::CharacterNotRestricted(
                    "character does not kill the derived subalgebra".into(),
                ));
            }
        }
        let pw = alg.jacobson_p_power(x, &fq);
        if lam(&pw)? != fq.pow(lambda[i], p) {
            return Err(Error::CharacterNotRestricted(format!(
                "lambda(x^[p]) != lambda(x)^p on subalgebra generator {i}"
            )));
        }
    }
    // Complement: standard basis vectors at the non-pivot coordinates of h.
    let pivots: Vec<usize> = (0..sub.dim())
        .map(|i| sub.basis().row(i).iter().position(|&x| x != 0).unwrap())
        .collect();
    let complement: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let c = complement.len();
    // Adapted basis: complement first, subalgebra generators last.
    let mut adapted: Vec<Vec<Scalar>> = complement
        .iter()
        .map(|&idx| alg.basis_element(idx))
        .collect();
    adapted.extend(sub_basis.iter().cloned());
    let (aalg, _) = alg.algebra_on_basis(&adapted, format!("{}-adapted", alg.name()))?;
    let aalg = Arc::new(aalg);
    let u0 = U0::new(aalg.clone());
    // Module basis: complement monomials, first slot most significant.
    let dim = (p as usize).pow(c as u32);
    let index_of = |mono: &[u8]| -> usize {
        let mut idx = 0usize;
        for &e in &mono[..c] {
            idx = idx * p as usize + e as usize;
        }
        idx
    };
    let mono_of = |mut idx: usize| -> Vec<u8> {
        let mut m = vec![0u8; n];
        for slot in (0..c).rev() {
            m[slot] = (idx % p as usize) as u8;
            idx /= p as usize;
        }
        m
    };
    // Adapted coordinates of each original basis element.
    let adapted_mat = Matrix::from_rows(adapted.clone());
    let adapted_inv_t = adapted_mat
        .transpose()
        .inverse(&fq)
        .expect("adapted basis is invertible");
    let mut mats = Vec::with_capacity(n);
    for b in 0..n {
        let coords = adapted_inv_t.apply(&alg.basis_element(b), &fq);
        let gen_elt = u0.from_lie(&coords);
        let mut mat = Matrix::zero(dim, dim);
        for col in 0..dim {
            let mono = mono_of(col);
            let prod = u0.mul(&gen_elt, &u0.monomial(&mono));
            for (m, &coef) in prod.terms() {
                // Character reduction on the trailing subalgebra slots.
                let mut factor = coef;
                for (j, &e) in m[c..].iter().enumerate() {
                    for _ in 0..e {
                        factor = fq.mul(factor, lambda[j]);
                    }
                    if factor == 0 {
                        break;
                    }
                }
                if factor == 0 {
                    continue;
                }
                let row = index_of(m);
                mat.set(row, col, fq.add(mat.at(row, col), factor));
            }
        }
        mats.push(mat);
    }
    Module::new(alg.clone(), mats, name.to_string())
}

/// Induction data helper exposed for diagnostics.
pub fn induced_complement(alg: &LieAlgebra, sub_basis: &[Vec<Scalar>]) -> Result<InducedData> {
    let fq = alg.prime_field();
    let sub = crate::linalg::Subspace::from_vectors(sub_basis, alg.dim(), &fq);
    let pivots: Vec<usize> = (0..sub.dim())
        .map(|i| sub.basis().row(i).iter().position(|&x| x != 0).unwrap())
        .collect();
    let complement: Vec<usize> = (0..alg.dim()).filter(|c| !pivots.contains(c)).collect();
    Ok(InducedData {
        dim: (alg.p() as usize).pow(complement.len() as u32),
        complement_basis: complement
            .iter()
            .map(|&i| {
                let mut v = vec![0; alg.dim()];
                v[i] = 1;
                v
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg;

    #[test]
    fn unit_law_and_single_straightening_step() {
        // In sl(2) with order (e, h, f): f * e = e f - h.
        let alg = liealg::sl2(5);
        let u0 = U0::new(alg.clone());
        let e = u0.generator(0);
        let f = u0.generator(2);
        let fe = u0.mul(&f, &e);
        let expected = {
            let ef = u0.monomial(&[1, 0, 1]);
            let h = u0.generator(1);
            u0.add(&ef, &u0.scale(&h, u0.fq.neg(1)))
        };
        assert_eq!(fe, expected);
        // 1 * u = u = u * 1.
        assert_eq!(u0.mul(&u0.one(), &fe), fe);
        assert_eq!(u0.mul(&fe, &u0.one()), fe);
    }

    #[test]
    fn h_to_the_p_is_h_plus_c0_in_sl2s() {
        let alg = liealg::sl2s(5);
        let u0 = U0::new(alg.clone());
        let h = u0.generator(1);
        let hp = u0.pow(&h, 5);
        let expected = u0.add(&u0.generator(1), &u0.generator(3));
        assert_eq!(hp, expected);
    }

    #[test]
    fn associativity_on_random_triples() {
        let alg = liealg::sl2s(5);
        let u0 = U0::new(alg.clone());
        let samples = [
            u0.from_lie(&[1, 2, 0, 3]),
            u0.monomial(&[2, 1, 0, 0]),
            u0.from_lie(&[0, 1, 4, 0]),
            u0.monomial(&[0, 0, 3, 1]),
            u0.add(&u0.one(), &u0.generator(2)),
        ];
        for a in &samples {
            for b in &samples {
                for c in &samples {
                    let lhs = u0.mul(&u0.mul(a, b), c);
                    let rhs = u0.mul(a, &u0.mul(b, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn c0_is_central_in_u0_sl2s() {
        let alg = liealg::sl2s(5);
        let u0 = U0::new(alg.clone());
        let c0 = u0.generator(3);
        for u in [
            u0.monomial(&[1, 2, 3, 0]),
            u0.from_lie(&[1, 1, 1, 1]),
            u0.monomial(&[4, 0, 0, 2]),
        ] {
            assert_eq!(u0.mul(&c0, &u), u0.mul(&u, &c0));
        }
    }

    #[test]
    fn trivial_character_gives_one_dimensional_module() {
        let alg = liealg::elementary(2, 5);
        let basis = vec![alg.basis_element(0), alg.basis_element(1)];
        let m = induced_module(&alg, &basis, &[0, 0], "triv").unwrap();
        assert_eq!(m.dim(), 1);
    }

    #[test]
    fn non_restricted_character_is_rejected() {
        // On e_2 all p-powers vanish, so lambda(x)^p = lambda(x) forces
        // lambda(x)^p - ... any nonzero lambda with lambda^p != 0 = lambda(x^[p]).
        let alg = liealg::elementary(2, 5);
        let basis = vec![alg.basis_element(0), alg.basis_element(1)];
        let r = induced_module(&alg, &basis, &[1, 0], "bad");
        assert!(matches!(r, Err(Error::CharacterNotRestricted(_))));
    }
}
