//! The exceptional Jordan algebra J3(O): 3x3 octonionic hermitian matrices
//! with the symmetrized product A o B = (AB + BA)/2, packed into R^27.
//!
//! Coordinate packing (1-based slots of the 27-vector):
//!   1 = a1, 2..9 = rho(o1), 10..17 = rho(o2), 18 = a2, 19..26 = rho(o3),
//!   27 = a3,
//! where the hermitian matrix is
//!   [ a1    o1    o2  ]
//!   [ o1*   a2    o3  ]
//!   [ o2*   o3*   a3  ].
//! This ordering is load-bearing: the canonical generator fixtures are
//! expressed in it.

use std::ops::{Add, Sub};
use std::sync::OnceLock;

use crate::octonion::Octonion;
use crate::scalar::{FieldScalar, Rational};

pub const DIM: usize = 27;

/// Slots (0-based) of the three diagonal entries a1, a2, a3.
pub const DIAGONAL_SLOTS: [usize; 3] = [0, 17, 26];

/// An element of J3(O) in the 27-coordinate packing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JordanElement {
    pub coords: Vec<FieldScalar>,
}

impl JordanElement {
    pub fn zero() -> Self {
        Self { coords: vec![FieldScalar::zero(); DIM] }
    }

    /// Coordinate basis vector e_k, 0-based.
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.coords[k] = FieldScalar::one();
        v
    }

    pub fn from_coords(coords: Vec<FieldScalar>) -> Self {
        assert_eq!(coords.len(), DIM);
        Self { coords }
    }

    /// The identity matrix diag(1,1,1).
    pub fn identity() -> Self {
        let mut v = Self::zero();
        for slot in DIAGONAL_SLOTS {
            v.coords[slot] = FieldScalar::one();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldScalar::is_zero)
    }

    /// Diagonal idempotent E_ii (i in 0..3), e.g. E_11 = diag(1,0,0).
    pub fn diag_idempotent(i: usize) -> Self {
        Self::basis(DIAGONAL_SLOTS[i])
    }

    /// View as the hermitian matrix (lower triangle by conjugation).
    pub fn to_matrix(&self) -> [[Octonion; 3]; 3] {
        let real = |slot: usize| {
            let mut o = Octonion::zero();
            o.coords[0] = self.coords[slot].clone();
            o
        };
        let oct = |base: usize| {
            Octonion::from_coords(std::array::from_fn(|k| self.coords[base + k].clone()))
        };
        let (o1, o2, o3) = (oct(1), oct(9), oct(18));
        [
            [real(0), o1.clone(), o2.clone()],
            [o1.conj(), real(17), o3.clone()],
            [o2.conj(), o3.conj(), real(26)],
        ]
    }

    /// Inverse of `to_matrix` for hermitian input; only the upper triangle and
    /// the real parts of the diagonal are read, so hermiticity is structural.
    pub fn from_matrix(m: &[[Octonion; 3]; 3]) -> Self {
        let mut coords = vec![FieldScalar::zero(); DIM];
        coords[0] = m[0][0].coords[0].clone();
        coords[17] = m[1][1].coords[0].clone();
        coords[26] = m[2][2].coords[0].clone();
        for k in 0..8 {
            coords[1 + k] = m[0][1].coords[k].clone();
            coords[9 + k] = m[0][2].coords[k].clone();
            coords[18 + k] = m[1][2].coords[k].clone();
        }
        Self { coords }
    }

    /// The trace functional: a1 + a2 + a3.
    pub fn trace_ell(&self) -> FieldScalar {
        let mut acc = FieldScalar::zero();
        for slot in DIAGONAL_SLOTS {
            acc += &self.coords[slot];
        }
        acc
    }
}

impl Add for &JordanElement {
    type Output = JordanElement;
    fn add(self, rhs: &JordanElement) -> JordanElement {
        let mut out = self.clone();
        for k in 0..DIM {
            out.coords[k] += &rhs.coords[k];
        }
        out
    }
}

impl Sub for &JordanElement {
    type Output = JordanElement;
    fn sub(self, rhs: &JordanElement) -> JordanElement {
        let mut out = self.clone();
        for k in 0..DIM {
            out.coords[k] -= &rhs.coords[k];
        }
        out
    }
}

/// The Jordan product A o B = (A.B + B.A)/2 with octonionic matrix products.
pub fn jordan_mul(a: &JordanElement, b: &JordanElement) -> JordanElement {
    let (ma, mb) = (a.to_matrix(), b.to_matrix());
    let half = FieldScalar::ratio(1, 2);
    let mut sym = std::array::from_fn::<_, 3, _>(|_| std::array::from_fn::<_, 3, _>(|_| Octonion::zero()));
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Octonion::zero();
            for k in 0..3 {
                acc = &acc + &(&ma[i][k] * &mb[k][j]);
                acc = &acc + &(&mb[i][k] * &ma[k][j]);
            }
            sym[i][j] = acc.scale(&half);
        }
    }
    JordanElement::from_matrix(&sym)
}

/// The invariant bilinear form G(A,B) = trace_ell(A o B).
pub fn form_pairing(a: &JordanElement, b: &JordanElement) -> FieldScalar {
    jordan_mul(a, b).trace_ell()
}

/// Diagonal weights of G in the 27-coordinate basis: 1 on the three diagonal
/// slots, 2 on the 24 octonionic slots.
pub fn form_weights() -> [u8; DIM] {
    std::array::from_fn(|k| if DIAGONAL_SLOTS.contains(&k) { 1 } else { 2 })
}

/// Sparse symmetric product tensor: TENSOR[i][j] lists (k, coeff) with
/// e_i o e_j = sum_k coeff * e_k. Built once; the Leibniz constraint solver
/// and the derivation predicate iterate over it heavily.
pub struct ProductTensor {
    entries: Vec<Vec<Vec<(usize, Rational)>>>,
}

impl ProductTensor {
    pub fn get(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.entries[i][j]
    }
}

pub fn product_tensor() -> &'static ProductTensor {
    static TENSOR: OnceLock<ProductTensor> = OnceLock::new();
    TENSOR.get_or_init(|| {
        let mut entries = vec![vec![Vec::new(); DIM]; DIM];
        for i in 0..DIM {
            for j in i..DIM {
                let p = jordan_mul(&JordanElement::basis(i), &JordanElement::basis(j));
                let sparse: Vec<(usize, Rational)> = p
                    .coords
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| {
                        let r = v
                            .as_rational()
                            .expect("basis products of J3(O) are rational")
                            .clone();
                        (k, r)
                    })
                    .collect();
                entries[i][j] = sparse.clone();
                entries[j][i] = sparse;
            }
        }
        ProductTensor { entries }
    })
}

/// Numeric Jordan product on 27-coordinate vectors via the sparse tensor.
pub fn jordan_mul_f64(x: &[f64], y: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), DIM);
    assert_eq!(y.len(), DIM);
    let tensor = product_tensor();
    let mut out = vec![0.0; DIM];
    for i in 0..DIM {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..DIM {
            if y[j] == 0.0 {
                continue;
            }
            for (k, coeff) in tensor.get(i, j) {
                out[*k] += x[i] * y[j] * crate::scalar::rational_to_f64(coeff);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    #[test]
    fn diagonal_idempotents() {
        let e11 = JordanElement::diag_idempotent(0);
        let e22 = JordanElement::diag_idempotent(1);
        assert_eq!(jordan_mul(&e11, &e11), e11);
        assert!(jordan_mul(&e11, &e22).is_zero());
    }

    #[test]
    fn square_of_real_o1_unit() {
        // o1 = 1 (slot 2): the square is diag(1,1,0)
        let a = JordanElement::basis(1);
        let sq = jordan_mul(&a, &a);
        let expect = &JordanElement::diag_idempotent(0) + &JordanElement::diag_idempotent(1);
        assert_eq!(sq, expect);
    }

    #[test]
    fn trace_ell_examples() {
        assert_eq!(JordanElement::diag_idempotent(0).trace_ell(), FieldScalar::one());
        assert_eq!(JordanElement::zero().trace_ell(), FieldScalar::zero());
        assert_eq!(JordanElement::identity().trace_ell(), FieldScalar::from_int(3));
    }

    #[test]
    fn pairing_examples() {
        let e11 = JordanElement::diag_idempotent(0);
        let e22 = JordanElement::diag_idempotent(1);
        assert_eq!(form_pairing(&e11, &e11), FieldScalar::one());
        assert_eq!(form_pairing(&e11, &e22), FieldScalar::zero());
        // two elements with only the o1 real slot set
        let a = JordanElement::basis(1);
        assert_eq!(form_pairing(&a, &a), FieldScalar::from_int(2));
    }

    #[test]
    fn pairing_is_the_diagonal_weighted_form_on_the_basis() {
        let weights = form_weights();
        for i in 0..DIM {
            for j in i..DIM {
                let p = form_pairing(&JordanElement::basis(i), &JordanElement::basis(j));
                let expect = if i == j {
                    FieldScalar::from_int(weights[i] as i64)
                } else {
                    FieldScalar::zero()
                };
                assert_eq!(p, expect, "pairing mismatch at ({i},{j})");
            }
        }
    }

    #[test]
    fn f27_is_scaled_identity() {
        // (e1 + e18 + e27)/sqrt3 equals 1/sqrt3 * identity matrix
        let scale = FieldScalar::sqrt3().inv().unwrap();
        let f27 = JordanElement::from_coords(
            (0..DIM)
                .map(|k| {
                    if DIAGONAL_SLOTS.contains(&k) { scale.clone() } else { FieldScalar::zero() }
                })
                .collect(),
        );
        let id = JordanElement::identity();
        let scaled: Vec<FieldScalar> =
            id.coords.iter().map(|v| v * &scale).collect();
        assert_eq!(f27.coords, scaled);
    }

    #[test]
    fn product_tensor_matches_direct_products() {
        let t = product_tensor();
        for i in (0..DIM).step_by(5) {
            for j in (0..DIM).step_by(3) {
                let p = jordan_mul(&JordanElement::basis(i), &JordanElement::basis(j));
                let mut recon = JordanElement::zero();
                for (k, coeff) in t.get(i, j) {
                    recon.coords[*k] += &FieldScalar::from_rational(coeff.clone());
                }
                assert_eq!(p, recon);
            }
        }
    }

    fn arb_jordan() -> impl Strategy<Value = JordanElement> {
        proptest::collection::vec((-4i64..=4, 1i64..=2), DIM).prop_map(|v| {
            JordanElement::from_coords(
                v.into_iter().map(|(n, d)| FieldScalar::from_rational(rat(n, d))).collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn commutativity(a in arb_jordan(), b in arb_jordan()) {
            prop_assert_eq!(jordan_mul(&a, &b), jordan_mul(&b, &a));
        }

        #[test]
        fn jordan_identity(a in arb_jordan(), b in arb_jordan()) {
            // (A o A) o (A o B) = A o ((A o A) o B)
            let aa = jordan_mul(&a, &a);
            let lhs = jordan_mul(&aa, &jordan_mul(&a, &b));
            let rhs = jordan_mul(&a, &jordan_mul(&aa, &b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pairing_symmetric_bilinear(a in arb_jordan(), b in arb_jordan()) {
            prop_assert_eq!(form_pairing(&a, &b), form_pairing(&b, &a));
        }

        #[test]
        fn phi_round_trip(a in arb_jordan()) {
            prop_assert_eq!(JordanElement::from_matrix(&a.to_matrix()), a);
        }
    }

    #[test]
    fn weights_sum() {
        let w = form_weights();
        assert_eq!(w.iter().map(|&x| x as usize).sum::<usize>(), 3 + 24 * 2);
    }
}
