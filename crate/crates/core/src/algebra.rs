//! Exact matrix algebra for derivations of J3(O).
//!
//! `AlgebraElement` is a square matrix over Q(sqrt2, sqrt3), either 27x27
//! acting on the coordinate packing of `jordan` (`Rep::Dim27`) or 26x26 in
//! the rotated basis with the invariant line removed (`Rep::Dim26`).

use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use crate::jordan::{self, DIM};
use crate::scalar::{rat, FieldScalar};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AlgebraError {
    #[error("representation mismatch: {0:?} vs {1:?}")]
    RepMismatch(Rep, Rep),
    #[error("expected {expected:?}, got {got:?}")]
    WrongRep { expected: Rep, got: Rep },
    #[error("matrix is not a derivation: residual at basis pair ({i},{j})")]
    NotDerivation { i: usize, j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rep {
    Dim27,
    Dim26,
}

impl Rep {
    pub fn dim(self) -> usize {
        match self {
            Rep::Dim27 => 27,
            Rep::Dim26 => 26,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    rep: Rep,
    /// row-major, rep.dim() x rep.dim()
    data: Vec<FieldScalar>,
}

impl AlgebraElement {
    pub fn zeros(rep: Rep) -> Self {
        let n = rep.dim();
        Self { rep, data: vec![FieldScalar::zero(); n * n] }
    }

    pub fn identity(rep: Rep) -> Self {
        let mut m = Self::zeros(rep);
        for i in 0..rep.dim() {
            *m.at_mut(i, i) = FieldScalar::one();
        }
        m
    }

    pub fn from_rows(rep: Rep, rows: Vec<Vec<FieldScalar>>) -> Self {
        let n = rep.dim();
        assert_eq!(rows.len(), n);
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n);
            data.extend(row);
        }
        Self { rep, data }
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn at(&self, row: usize, col: usize) -> &FieldScalar {
        &self.data[row * self.dim() + col]
    }

    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut FieldScalar {
        let n = self.dim();
        &mut self.data[row * n + col]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldScalar::is_zero)
    }

    pub fn scale(&self, s: &FieldScalar) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = &*v * s;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let mut out = Self::zeros(self.rep);
        for r in 0..n {
            for c in 0..n {
                *out.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rep, rhs.rep);
        let n = self.dim();
        let mut out = Self::zeros(self.rep);
        for r in 0..n {
            for k in 0..n {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    *out.at_mut(r, c) += &(a * b);
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn trace(&self) -> FieldScalar {
        let mut acc = FieldScalar::zero();
        for i in 0..self.dim() {
            acc += self.at(i, i);
        }
        acc
    }

    /// Apply to a coordinate vector.
    pub fn apply(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        let mut out = vec![FieldScalar::zero(); n];
        for r in 0..n {
            for c in 0..n {
                let a = self.at(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    out[r] += &(a * &v[c]);
                }
            }
        }
        out
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        nalgebra::DMatrix::from_fn(n, n, |r, c| self.at(r, c).to_f64())
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.rep, rhs.rep);
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&rhs.data) {
            *v += w;
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.rep, rhs.rep);
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&rhs.data) {
            *v -= w;
        }
        out
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        let mut out = self;
        for v in &mut out.data {
            *v = -v.clone();
        }
        out
    }
}

/// The invariant inner product <a,b> = -Trace(ab)/6. Orthogonal conjugation
/// relating the two representations preserves traces, so the value agrees in
/// Dim27 and Dim26; mixing them is still an error.
pub fn trace_inner(a: &AlgebraElement, b: &AlgebraElement) -> Result<FieldScalar, AlgebraError> {
    if a.rep() != b.rep() {
        return Err(AlgebraError::RepMismatch(a.rep(), b.rep()));
    }
    let n = a.dim();
    let mut acc = FieldScalar::zero();
    for r in 0..n {
        for c in 0..n {
            let x = a.at(r, c);
            if x.is_zero() {
                continue;
            }
            let y = b.at(c, r);
            if !y.is_zero() {
                acc += &(x * y);
            }
        }
    }
    Ok(acc.scaled(&rat(-1, 6)))
}

/// Exact Leibniz check: M(e_i o e_j) = (M e_i) o e_j + e_i o (M e_j) for
/// every pair of coordinate basis vectors, via the sparse product tensor.
pub fn is_derivation(m: &AlgebraElement) -> Result<bool, AlgebraError> {
    if m.rep() != Rep::Dim27 {
        return Err(AlgebraError::WrongRep { expected: Rep::Dim27, got: m.rep() });
    }
    Ok(derivation_defect(m).is_none())
}

/// First basis pair at which the Leibniz identity fails, if any.
pub fn derivation_defect(m: &AlgebraElement) -> Option<(usize, usize)> {
    let tensor = jordan::product_tensor();
    for i in 0..DIM {
        for j in i..DIM {
            // lhs_k = sum_a T[i][j][a] M[k][a]
            let mut residual = vec![FieldScalar::zero(); DIM];
            for (a, coeff) in tensor.get(i, j) {
                let c = FieldScalar::from_rational(coeff.clone());
                for k in 0..DIM {
                    let v = m.at(k, *a);
                    if !v.is_zero() {
                        residual[k] += &(v * &c);
                    }
                }
            }
            // rhs: (M e_i) o e_j + e_i o (M e_j); M e_i is column i
            for a in 0..DIM {
                let v = m.at(a, i);
                if !v.is_zero() {
                    for (k, coeff) in tensor.get(a, j) {
                        residual[*k] -= &(v * &FieldScalar::from_rational(coeff.clone()));
                    }
                }
                let w = m.at(a, j);
                if !w.is_zero() {
                    for (k, coeff) in tensor.get(i, a) {
                        residual[*k] -= &(w * &FieldScalar::from_rational(coeff.clone()));
                    }
                }
            }
            if residual.iter().any(|v| !v.is_zero()) {
                return Some((i + 1, j + 1));
            }
        }
    }
    None
}

/// G m + m^T G with G the diagonal Jordan form weights; zero iff m preserves
/// the invariant bilinear form infinitesimally.
pub fn g_antisymmetry_defect(m: &AlgebraElement) -> bool {
    let w = jordan::form_weights();
    let n = m.dim();
    for r in 0..n {
        for c in 0..n {
            // G_rr * m_rc + m_cr * G_cc
            let lhs = m.at(r, c).scaled(&rat(w[r] as i64, 1));
            let rhs = m.at(c, r).scaled(&rat(w[c] as i64, 1));
            if !(lhs + rhs).is_zero() {
                return true;
            }
        }
    }
    false
}

/// The orthogonal change of basis to the f-basis: f1 = (e1-e18)/sqrt2,
/// f18 = (e1+e18-2 e27)/sqrt6, f27 = (e1+e18+e27)/sqrt3, f_a = e_a otherwise.
/// Rows of the returned matrix are the f_a in e-coordinates.
pub fn f_rotation() -> &'static AlgebraElement {
    static ROT: OnceLock<AlgebraElement> = OnceLock::new();
    ROT.get_or_init(|| {
        let mut x = AlgebraElement::identity(Rep::Dim27);
        let inv_sqrt2 = FieldScalar::sqrt2().inv().unwrap();
        let inv_sqrt6 = FieldScalar::sqrt6().inv().unwrap();
        let inv_sqrt3 = FieldScalar::sqrt3().inv().unwrap();
        *x.at_mut(0, 0) = inv_sqrt2.clone();
        *x.at_mut(0, 17) = -inv_sqrt2;
        *x.at_mut(17, 0) = inv_sqrt6.clone();
        *x.at_mut(17, 17) = inv_sqrt6.clone();
        *x.at_mut(17, 26) = inv_sqrt6.scaled(&rat(-2, 1));
        *x.at_mut(26, 0) = inv_sqrt3.clone();
        *x.at_mut(26, 17) = inv_sqrt3.clone();
        *x.at_mut(26, 26) = inv_sqrt3;
        x
    })
}

/// Conjugate a Dim27 element into the f-basis: X m X^T.
pub fn rotate_to_f_basis(m: &AlgebraElement) -> AlgebraElement {
    let x = f_rotation();
    x.matmul(m).matmul(&x.transpose())
}

/// Inverse rotation: X^T m X.
pub fn rotate_from_f_basis(m: &AlgebraElement) -> AlgebraElement {
    let x = f_rotation();
    x.transpose().matmul(m).matmul(x)
}

/// Rotate a derivation to the f-basis, check that the last row and column
/// vanish (they do exactly for derivations, which annihilate the identity
/// element of J3), and drop them.
pub fn reduce_to_26(m: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    if m.rep() != Rep::Dim27 {
        return Err(AlgebraError::WrongRep { expected: Rep::Dim27, got: m.rep() });
    }
    let rotated = rotate_to_f_basis(m);
    for k in 0..27 {
        if !rotated.at(26, k).is_zero() || !rotated.at(k, 26).is_zero() {
            return Err(AlgebraError::NotDerivation { i: 27, j: k + 1 });
        }
    }
    let mut out = AlgebraElement::zeros(Rep::Dim26);
    for r in 0..26 {
        for c in 0..26 {
            *out.at_mut(r, c) = rotated.at(r, c).clone();
        }
    }
    Ok(out)
}

/// The vector f27 = (e1 + e18 + e27)/sqrt3 spanning the invariant line.
pub fn f27_vector() -> Vec<FieldScalar> {
    let s = FieldScalar::sqrt3().inv().unwrap();
    (0..DIM)
        .map(|k| if jordan::DIAGONAL_SLOTS.contains(&k) { s.clone() } else { FieldScalar::zero() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_not_a_derivation() {
        let id = AlgebraElement::identity(Rep::Dim27);
        assert_eq!(is_derivation(&id), Ok(false));
        // witnessed on E11 o E11 = E11: I(x o x) = x o x but the Leibniz
        // right-hand side doubles it
        assert_eq!(derivation_defect(&id), Some((1, 1)));
    }

    #[test]
    fn zero_is_a_derivation() {
        assert_eq!(is_derivation(&AlgebraElement::zeros(Rep::Dim27)), Ok(true));
    }

    #[test]
    fn f_rotation_is_orthogonal() {
        let x = f_rotation();
        let prod = x.matmul(&x.transpose());
        assert_eq!(prod, AlgebraElement::identity(Rep::Dim27));
    }

    #[test]
    fn trace_inner_rejects_rep_mismatch() {
        let a = AlgebraElement::zeros(Rep::Dim27);
        let b = AlgebraElement::zeros(Rep::Dim26);
        assert!(matches!(trace_inner(&a, &b), Err(AlgebraError::RepMismatch(_, _))));
    }

    #[test]
    fn trace_inner_of_zero_vanishes() {
        let z = AlgebraElement::zeros(Rep::Dim27);
        let id = AlgebraElement::identity(Rep::Dim27);
        assert_eq!(trace_inner(&z, &id).unwrap(), FieldScalar::zero());
    }

    #[test]
    fn reduce_rejects_non_derivations() {
        // the identity does not annihilate f27, so the last column survives
        let id = AlgebraElement::identity(Rep::Dim27);
        assert!(reduce_to_26(&id).is_err());
    }

    #[test]
    fn random_g_antisymmetric_matrix_is_not_a_derivation() {
        // a G-antisymmetric matrix built from one off-diagonal pair outside
        // the derivation algebra
        let mut m = AlgebraElement::zeros(Rep::Dim27);
        // slots 0 (weight 1) and 1 (weight 2): G m + m^T G = 0 requires
        // m[1][0] = -(1/2) m[0][1]
        *m.at_mut(0, 1) = FieldScalar::from_int(2);
        *m.at_mut(1, 0) = FieldScalar::from_int(-1);
        assert!(!g_antisymmetry_defect(&m));
        assert_eq!(is_derivation(&m), Ok(false));
    }
}
