//! Homogeneous binary forms over `F_{p^k}` and their gcd.
//!
//! A form of degree `d` is stored as `d + 1` coefficients, the coefficient
//! of `s^{d-i} t^i` at index `i`. The gcd is normalized to be monic in the
//! highest surviving `s`-power, which makes it canonical; only degrees are
//! consumed downstream, but canonical representatives keep tests exact.

use crate::field::{Fq, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    degree: usize,
    /// coeffs[i] multiplies s^(degree-i) t^i; length degree + 1.
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<Scalar>) -> BinaryForm {
        assert_eq!(coeffs.len(), degree + 1);
        BinaryForm { degree, coeffs }
    }

    /// The zero form, with degree 0 as its distinguished representation.
    pub fn zero() -> BinaryForm {
        BinaryForm {
            degree: 0,
            coeffs: vec![0],
        }
    }

    pub fn constant(c: Scalar) -> BinaryForm {
        BinaryForm {
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// Monomial c * s^a t^b.
    pub fn monomial(c: Scalar, a: usize, b: usize) -> BinaryForm {
        let mut coeffs = vec![0; a + b + 1];
        coeffs[b] = c;
        BinaryForm {
            degree: a + b,
            coeffs,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, s: Scalar, t: Scalar, fq: &Fq) -> Scalar {
        let mut acc = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = fq.mul(
                c,
                fq.mul(fq.pow(s, (self.degree - i) as u64), fq.pow(t, i as u64)),
            );
            acc = fq.add(acc, term);
        }
        acc
    }

    pub fn add(&self, other: &BinaryForm, fq: &Fq) -> BinaryForm {
        assert_eq!(self.degree, other.degree, "sum of forms of unequal degree");
        BinaryForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| fq.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Scalar, fq: &Fq) -> BinaryForm {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&a| fq.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm, fq: &Fq) -> BinaryForm {
        if self.is_zero() || other.is_zero() {
            return BinaryForm::zero();
        }
        let d = self.degree + other.degree;
        let mut coeffs = vec![0; d + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = fq.add(coeffs[i + j], fq.mul(a, b));
            }
        }
        BinaryForm { degree: d, coeffs }
    }

    /// Largest power of t dividing the form.
    fn t_valuation(&self) -> usize {
        self.coeffs.iter().position(|&c| c != 0).unwrap_or(0)
    }

    /// Dehomogenize at t = 1 after removing the t-power content: returns
    /// (t-valuation, univariate coefficients in descending s-degree... kept
    /// ascending by t-index so index 0 is the pure s term).
    fn strip(&self) -> (usize, Vec<Scalar>) {
        let v = self.t_valuation();
        (v, self.coeffs[v..].to_vec())
    }

    /// Normalize so that the first nonzero coefficient in s-descending
    /// order is 1.
    pub fn monic(&self, fq: &Fq) -> BinaryForm {
        match self.coeffs.iter().find(|&&c| c != 0) {
            None => BinaryForm::zero(),
            Some(&lead) => self.scale(fq.inv(lead), fq),
        }
    }

    /// Exact division; panics if the divisor does not divide exactly
    /// (intended for validated callers and tests).
    pub fn div_exact(&self, g: &BinaryForm, fq: &Fq) -> BinaryForm {
        assert!(!g.is_zero(), "division by zero form");
        if self.is_zero() {
            return BinaryForm::zero();
        }
        assert!(self.degree >= g.degree);
        let d = self.degree - g.degree;
        // Solve f = q * g coefficient by coefficient in the t-grading.
        let (vg, ug) = g.strip();
        let (vf, uf) = self.strip();
        assert!(vf >= vg, "t-power of divisor exceeds dividend");
        // Univariate division of uf by ug (coefficients ascending in t).
        let mut rem = uf.clone();
        let qlen = uf.len() - ug.len() + 1;
        let mut quo = vec![0; qlen];
        let lead_inv = fq.inv(ug[0]);
        for i in 0..qlen {
            let c = fq.mul(rem[i], lead_inv);
            quo[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &gj) in ug.iter().enumerate() {
                rem[i + j] = fq.sub(rem[i + j], fq.mul(c, gj));
            }
        }
        assert!(
            rem.iter().all(|&c| c == 0),
            "div_exact called with a non-divisor"
        );
        let mut coeffs = vec![0; d + 1];
        let voff = vf - vg;
        for (i, &c) in quo.iter().enumerate() {
            coeffs[voff + i] = c;
        }
        BinaryForm { degree: d, coeffs }
    }

    pub fn divides(&self, other: &BinaryForm, fq: &Fq) -> bool {
        if other.is_zero() {
            return true;
        }
        if self.is_zero() || self.degree > other.degree {
            return false;
        }
        let (vg, ug) = self.strip();
        let (vf, uf) = other.strip();
        if vf < vg || uf.len() < ug.len() {
            return false;
        }
        let mut rem = uf;
        let lead_inv = fq.inv(ug[0]);
        for i in 0..(rem.len() - ug.len() + 1) {
            let c = fq.mul(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            for (j, &gj) in ug.iter().enumerate() {
                rem[i + j] = fq.sub(rem[i + j], fq.mul(c, gj));
            }
        }
        rem.iter().all(|&c| c == 0)
    }
}

fn gcd_pair(f: &BinaryForm, g: &BinaryForm, fq: &Fq) -> BinaryForm {
    if f.is_zero() {
        return g.monic(fq);
    }
    if g.is_zero() {
        return f.monic(fq);
    }
    // Split off the t-power content; the remaining factors are coprime to t
    // and their gcd is the homogenization of a univariate gcd.
    let (vf, uf) = f.strip();
    let (vg, ug) = g.strip();
    let v = vf.min(vg);
    // Euclid on univariate polynomials with ascending-t coefficients, where
    // index 0 is the top s-coefficient, i.e. ordinary polynomials in t/s...
    // equivalently in s after reversal. Reverse to standard low-to-high.
    let mut a: Vec<Scalar> = uf.iter().rev().cloned().collect();
    let mut b: Vec<Scalar> = ug.iter().rev().cloned().collect();
    let trim = |v: &mut Vec<Scalar>| {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        // a mod b
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let shift = a.len() - b.len();
            let c = fq.mul(*a.last().unwrap(), fq.inv(*b.last().unwrap()));
            for (j, &bj) in b.iter().enumerate() {
                a[shift + j] = fq.sub(a[shift + j], fq.mul(c, bj));
            }
            trim(&mut a);
            if a.iter().all(|&x| x == 0) {
                a = vec![0];
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    trim(&mut a);
    // Homogenize the univariate gcd `a` (low-to-high in s) back to a form of
    // degree v + deg(a): coefficient of s^j is a[j].
    let deg_a = a.len() - 1;
    let total = v + deg_a;
    let mut coeffs = vec![0; total + 1];
    for (j, &c) in a.iter().enumerate() {
        // s-degree j, so t-index = total - j - ... careful: within the
        // t-stripped part the t-index of s^j is (deg_a - j); adding back v.
        coeffs[v + deg_a - j] = c;
    }
    BinaryForm {
        degree: total,
        coeffs,
    }
    .monic(fq)
}

/// Monic gcd of a list of binary forms. Errors if all inputs are zero.
pub fn form_gcd(forms: &[BinaryForm], fq: &Fq) -> Result<BinaryForm> {
    if forms.iter().all(|f| f.is_zero()) {
        return Err(Error::AllFormsZero);
    }
    let mut acc = BinaryForm::zero();
    for f in forms {
        acc = gcd_pair(&acc, f, fq);
        if acc.degree() == 0 && !acc.is_zero() {
            break; // gcd is already 1
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Fq {
        Fq::prime(5).unwrap()
    }

    #[test]
    fn gcd_with_zero_is_monic_self() {
        let f = f5();
        let g = BinaryForm::monomial(3, 2, 1); // 3 s^2 t
        let r = form_gcd(&[g.clone(), BinaryForm::zero()], &f).unwrap();
        assert_eq!(r, g.monic(&f));
        assert!(form_gcd(&[BinaryForm::zero()], &f).is_err());
    }

    #[test]
    fn gcd_of_monomials() {
        // gcd(s^2 t, s t^2) = s t, verified by divisibility both ways.
        let f = f5();
        let a = BinaryForm::monomial(1, 2, 1);
        let b = BinaryForm::monomial(1, 1, 2);
        let g = form_gcd(&[a.clone(), b.clone()], &f).unwrap();
        assert_eq!(g, BinaryForm::monomial(1, 1, 1));
        assert!(g.divides(&a, &f));
        assert!(g.divides(&b, &f));
        assert_eq!(a.div_exact(&g, &f).mul(&g, &f), a);
    }

    #[test]
    fn gcd_splits_sum_of_squares_over_f5() {
        // Over F_5, s^2 + t^2 = (s + 2t)(s - 2t) since 2^2 = -1;
        // oracle: evaluating s^2 + t^2 at s = -2t gives (4+1)t^2 = 0.
        let f = f5();
        let sum_sq = BinaryForm::new(2, vec![1, 0, 1]);
        assert_eq!(sum_sq.eval(f.neg(2), 1, &f), 0);
        let lin = BinaryForm::new(1, vec![1, 2]);
        let g = form_gcd(&[sum_sq.clone(), lin.clone()], &f).unwrap();
        assert_eq!(g, lin);
        assert!(g.divides(&sum_sq, &f));
    }

    #[test]
    fn div_exact_roundtrip_with_t_powers() {
        let f = f5();
        let a = BinaryForm::new(3, vec![0, 2, 1, 0]); // 2 s^2 t + s t^2
        let b = BinaryForm::monomial(1, 1, 1); // s t
        let q = a.div_exact(&b, &f);
        assert_eq!(q.mul(&b, &f), a);
    }

    proptest! {
        #[test]
        fn gcd_degree_and_symmetry(
            c0 in 0u64..5, c1 in 0u64..5, c2 in 1u64..5,
            d0 in 0u64..5, d1 in 1u64..5,
        ) {
            let f = f5();
            let a = BinaryForm::new(2, vec![c2, c1, c0]);
            let b = BinaryForm::new(1, vec![d1, d0]);
            let g1 = form_gcd(&[a.clone(), b.clone()], &f).unwrap();
            let g2 = form_gcd(&[b.clone(), a.clone()], &f).unwrap();
            prop_assert_eq!(&g1, &g2);
            prop_assert!(g1.degree() <= 1);
            prop_assert!(g1.divides(&a, &f) && g1.divides(&b, &f));
        }

        #[test]
        fn gcd_associative_via_products(
            a0 in 1u64..5, b0 in 1u64..5, c0 in 1u64..5,
        ) {
            let f = f5();
            // Build forms with known common factors.
            let l1 = BinaryForm::new(1, vec![1, a0]);
            let l2 = BinaryForm::new(1, vec![1, b0]);
            let l3 = BinaryForm::new(1, vec![1, c0]);
            let f1 = l1.mul(&l2, &f);
            let f2 = l2.mul(&l3, &f);
            let f3 = l1.mul(&l3, &f);
            let g12_3 = gcd_pair(&gcd_pair(&f1, &f2, &f), &f3, &f);
            let g1_23 = gcd_pair(&f1, &gcd_pair(&f2, &f3, &f), &f);
            prop_assert_eq!(g12_3, g1_23);
        }
    }
}
