//! Exact nullspace solver for the Leibniz constraint system.
//!
//! A matrix M acting on the 27 Jordan coordinates is a derivation iff
//! M(x o y) = (Mx) o y + x o (My) for all x, y; on basis pairs this is a
//! homogeneous linear system in the 729 entries of M. The solver performs
//! fraction-free-in-spirit exact Gaussian elimination (arbitrary-precision
//! rationals, first-nonzero pivot) and returns a nullspace basis.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{AlgebraElement, Rep};
use crate::jordan::{self, DIM};
use crate::scalar::{FieldScalar, Rational};

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("Leibniz system rank {rank} != 677; octonion/Jordan tables are inconsistent")]
    UnexpectedRank { rank: usize },
}

/// Sparse row: sorted (column, coefficient) pairs, coefficients nonzero.
type Row = Vec<(usize, Rational)>;

const UNKNOWNS: usize = DIM * DIM;

fn constraint_rows() -> Vec<Row> {
    let tensor = jordan::product_tensor();
    let mut seen = std::collections::HashSet::new();
    let mut rows = Vec::new();
    let col_of = |row: usize, col: usize| row * DIM + col;
    for i in 0..DIM {
        for j in i..DIM {
            for k in 0..DIM {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                let mut add = |col: usize, v: Rational| {
                    let slot = acc.entry(col).or_insert_with(Rational::zero);
                    *slot += v;
                };
                // M(e_i o e_j) component k: sum_a T[i][j](a) M[k][a]
                for (a, coeff) in tensor.get(i, j) {
                    add(col_of(k, *a), coeff.clone());
                }
                // -(M e_i) o e_j component k: M e_i = column i
                for a in 0..DIM {
                    for (kk, coeff) in tensor.get(a, j) {
                        if *kk == k {
                            add(col_of(a, i), -coeff.clone());
                        }
                    }
                    for (kk, coeff) in tensor.get(i, a) {
                        if *kk == k {
                            add(col_of(a, j), -coeff.clone());
                        }
                    }
                }
                let mut row: Row =
                    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                if row.is_empty() {
                    continue;
                }
                // normalize to a canonical form for deduplication
                let lead = row[0].1.clone();
                for (_, v) in &mut row {
                    *v /= lead.clone();
                }
                let key: Vec<(usize, String)> =
                    row.iter().map(|(c, v)| (*c, v.to_string())).collect();
                if seen.insert(key) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Reduced row echelon form held as pivot column -> row (leading 1, fully
/// reduced against all other pivots).
struct Rref {
    pivots: BTreeMap<usize, Row>,
}

impl Rref {
    fn new() -> Self {
        Self { pivots: BTreeMap::new() }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce a row against the current pivots (in place, sparse).
    fn reduce(&self, row: &mut Row) {
        let mut idx = 0;
        while idx < row.len() {
            let (col, coeff) = row[idx].clone();
            if let Some(piv) = self.pivots.get(&col) {
                // row -= coeff * piv  (piv has leading 1 at `col`)
                let mut merged: BTreeMap<usize, Rational> = row.drain(..).collect();
                for (c, v) in piv {
                    let slot = merged.entry(*c).or_insert_with(Rational::zero);
                    *slot -= &coeff * v;
                }
                *row = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                // the eliminated column is gone; continue from the same index
            } else {
                idx += 1;
            }
        }
    }

    /// Insert a reduced nonzero row as a new pivot; first nonzero column is
    /// the pivot. Back-substitutes into existing rows to keep full RREF.
    fn insert(&mut self, mut row: Row) {
        let lead = row[0].1.clone();
        if !lead.is_one() {
            for (_, v) in &mut row {
                *v /= lead.clone();
            }
        }
        let pivot_col = row[0].0;
        let cols_to_fix: Vec<usize> = self
            .pivots
            .iter()
            .filter(|(_, r)| r.iter().any(|(c, _)| *c == pivot_col))
            .map(|(p, _)| *p)
            .collect();
        for p in cols_to_fix {
            let mut existing = self.pivots.remove(&p).unwrap();
            let coeff = existing
                .iter()
                .find(|(c, _)| *c == pivot_col)
                .map(|(_, v)| v.clone())
                .unwrap();
            let mut merged: BTreeMap<usize, Rational> = existing.drain(..).collect();
            for (c, v) in &row {
                let slot = merged.entry(*c).or_insert_with(Rational::zero);
                *slot -= &coeff * v;
            }
            existing = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            self.pivots.insert(p, existing);
        }
        self.pivots.insert(pivot_col, row);
    }
}

/// A basis of the space of derivations, as exact 27x27 matrices.
pub struct DerivationBasis {
    pub rank: usize,
    pub elements: Vec<AlgebraElement>,
    free_columns: Vec<usize>,
}

impl DerivationBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Exact coordinates of a 27x27 matrix in this basis, if it lies in the
    /// span. With the RREF construction, the candidate combination is read
    /// off the free columns and then verified entry-for-entry.
    pub fn coordinates_of(&self, m: &AlgebraElement) -> Option<Vec<Rational>> {
        let coeffs: Vec<Rational> = self
            .free_columns
            .iter()
            .map(|&col| {
                let (r, c) = (col / DIM, col % DIM);
                m.at(r, c).as_rational().cloned().unwrap_or_else(Rational::zero)
            })
            .collect();
        let mut recon = AlgebraElement::zeros(Rep::Dim27);
        for (coeff, elem) in coeffs.iter().zip(&self.elements) {
            if !coeff.is_zero() {
                recon = &recon + &elem.scale(&FieldScalar::from_rational(coeff.clone()));
            }
        }
        (&recon == m).then_some(coeffs)
    }
}

/// Solve the Leibniz constraint system exactly. The rank must be 677
/// (52 = 729 - 677 independent derivations); anything else means the
/// octonion or Jordan product data is broken.
pub fn solve_derivations() -> Result<DerivationBasis, SolverError> {
    let mut rows = constraint_rows();
    // shorter rows first keeps the elimination sparse
    rows.sort_by_key(Vec::len);
    let mut rref = Rref::new();
    for mut row in rows {
        rref.reduce(&mut row);
        if !row.is_empty() {
            rref.insert(row);
        }
    }
    let rank = rref.rank();
    if rank != 677 {
        return Err(SolverError::UnexpectedRank { rank });
    }

    let free_columns: Vec<usize> =
        (0..UNKNOWNS).filter(|c| !rref.pivots.contains_key(c)).collect();
    let mut elements = Vec::with_capacity(free_columns.len());
    for &free in &free_columns {
        let mut m = AlgebraElement::zeros(Rep::Dim27);
        *m.at_mut(free / DIM, free % DIM) = FieldScalar::one();
        for (pivot_col, row) in &rref.pivots {
            if let Some((_, v)) = row.iter().find(|(c, _)| *c == free) {
                let (r, c) = (pivot_col / DIM, pivot_col % DIM);
                *m.at_mut(r, c) = FieldScalar::from_rational(-v.clone());
            }
        }
        elements.push(m);
    }
    Ok(DerivationBasis { rank, elements, free_columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_derivation;

    #[test]
    fn nullspace_has_dimension_52() {
        let basis = solve_derivations().unwrap();
        assert_eq!(basis.rank, 677);
        assert_eq!(basis.dim(), 52);
    }

    #[test]
    fn every_basis_element_is_a_derivation_and_annihilates_f27() {
        let basis = solve_derivations().unwrap();
        let f27 = crate::algebra::f27_vector();
        for m in &basis.elements {
            assert_eq!(is_derivation(m), Ok(true));
            let image = m.apply(&f27);
            assert!(image.iter().all(FieldScalar::is_zero));
        }
    }
}
