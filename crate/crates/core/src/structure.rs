//! Structure constants s_IJK of f4 in the orthonormal canonical basis,
//! the induced adjoint representation and the Killing form.
//!
//! [c_I, c_J] = sum_K s_IJ^K c_K with s fully antisymmetric; every nonzero
//! value is +-1 or +-1/2. Stored for I < J < K; lookups resolve signs.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{trace_inner, AlgebraElement};
use crate::scalar::{rat, FieldScalar, Rational};

pub const GENERATORS: usize = 52;

#[derive(Debug, thiserror::Error)]
pub enum StructureError {
    #[error("structure table parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("structure table entry ({i},{j},{k}) invalid: {reason}")]
    BadEntry { i: usize, j: usize, k: usize, reason: String },
    #[error("bracket [c_{i}, c_{j}] does not close onto the basis")]
    ClosureFailure { i: usize, j: usize },
    #[error("structure constant s_({i},{j},{k}) outside {{+-1, +-1/2}}: {value}")]
    BadValue { i: usize, j: usize, k: usize, value: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TableRecord {
    i: usize,
    j: usize,
    k: usize,
    value: FieldScalar,
}

/// Fully antisymmetric structure-constant table on 52 generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTable {
    /// keyed by strictly increasing (i, j, k), 1-based
    map: BTreeMap<(usize, usize, usize), Rational>,
}

fn sort_with_sign(i: usize, j: usize, k: usize) -> Option<((usize, usize, usize), i8)> {
    if i == j || j == k || i == k {
        return None;
    }
    let mut idx = [i, j, k];
    let mut sign = 1i8;
    // three-element bubble sort, tracking parity
    for pass in 0..2 {
        for t in 0..2 - pass {
            if idx[t] > idx[t + 1] {
                idx.swap(t, t + 1);
                sign = -sign;
            }
        }
    }
    Some(((idx[0], idx[1], idx[2]), sign))
}

impl StructureTable {
    pub fn from_json(json: &str) -> Result<Self, StructureError> {
        let records: Vec<TableRecord> = serde_json::from_str(json)?;
        let mut map = BTreeMap::new();
        for r in records {
            if !(1..=GENERATORS).contains(&r.i)
                || !(r.i < r.j && r.j < r.k && r.k <= GENERATORS)
            {
                return Err(StructureError::BadEntry {
                    i: r.i,
                    j: r.j,
                    k: r.k,
                    reason: "indices must satisfy 1 <= i < j < k <= 52".into(),
                });
            }
            let value = r.value.as_rational().cloned().ok_or_else(|| StructureError::BadEntry {
                i: r.i,
                j: r.j,
                k: r.k,
                reason: "value must be rational".into(),
            })?;
            check_value(r.i, r.j, r.k, &value)?;
            if map.insert((r.i, r.j, r.k), value).is_some() {
                return Err(StructureError::BadEntry {
                    i: r.i,
                    j: r.j,
                    k: r.k,
                    reason: "duplicate entry".into(),
                });
            }
        }
        Ok(Self { map })
    }

    /// Compute the table from an orthonormal basis, verifying that every
    /// bracket closes exactly onto the span.
    pub fn compute(basis: &[AlgebraElement]) -> Result<Self, StructureError> {
        assert_eq!(basis.len(), GENERATORS);
        let mut map = BTreeMap::new();
        for i in 0..GENERATORS {
            for j in (i + 1)..GENERATORS {
                let bracket = basis[i].commutator(&basis[j]);
                let mut recon = AlgebraElement::zeros(basis[i].rep());
                for k in 0..GENERATORS {
                    let coeff = trace_inner(&bracket, &basis[k]).expect("same rep");
                    if coeff.is_zero() {
                        continue;
                    }
                    recon = &recon + &basis[k].scale(&coeff);
                    let value = coeff.as_rational().cloned().ok_or_else(|| {
                        StructureError::BadValue {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            value: coeff.to_string(),
                        }
                    })?;
                    if k > j {
                        check_value(i + 1, j + 1, k + 1, &value)?;
                        map.insert((i + 1, j + 1, k + 1), value);
                    }
                }
                if recon != bracket {
                    return Err(StructureError::ClosureFailure { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(Self { map })
    }

    /// s_{ijk} with full antisymmetry; zero for repeated indices or absent
    /// triples.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Rational {
        match sort_with_sign(i, j, k) {
            None => Rational::zero(),
            Some((key, sign)) => {
                let v = self.map.get(&key).cloned().unwrap_or_else(Rational::zero);
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rational)> {
        self.map.iter()
    }

    /// First differing triple between two tables, if any.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize, usize)> {
        let keys: std::collections::BTreeSet<_> =
            self.map.keys().chain(other.map.keys()).collect();
        for &&(i, j, k) in keys.iter() {
            if self.get(i, j, k) != other.get(i, j, k) {
                return Some((i, j, k));
            }
        }
        None
    }

    /// Bracket coefficients of [c_i, c_j]: sparse list of (k, s_ij^k).
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Rational)> {
        (1..=GENERATORS)
            .filter_map(|k| {
                let v = self.get(i, j, k);
                (!v.is_zero()).then_some((k, v))
            })
            .collect()
    }

    /// Jacobi residual sum_M (s_IJM s_MKL + s_JKM s_MIL + s_KIM s_MJL);
    /// exactly zero for a Lie algebra.
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize, l: usize) -> Rational {
        let mut acc = Rational::zero();
        for m in 1..=GENERATORS {
            acc += self.get(i, j, m) * self.get(m, k, l)
                + self.get(j, k, m) * self.get(m, i, l)
                + self.get(k, i, m) * self.get(m, j, l);
        }
        acc
    }

    /// The adjoint matrix of generator I: (C_I)_{KJ} = s_IJ^K, acting on
    /// coordinate vectors in the c-basis.
    pub fn adjoint(&self, i: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(GENERATORS, GENERATORS);
        for j in 1..=GENERATORS {
            for (k, v) in self.bracket(i, j) {
                m[(k - 1, j - 1)] = crate::scalar::rational_to_f64(&v);
            }
        }
        m
    }

    /// Exact Killing form K_IJ = Trace(ad c_I ad c_J).
    pub fn killing(&self, i: usize, j: usize) -> Rational {
        let mut acc = Rational::zero();
        for l in 1..=GENERATORS {
            for (k, v) in self.bracket(i, l) {
                let w = self.get(j, k, l);
                if !w.is_zero() {
                    acc += v * w;
                }
            }
        }
        acc
    }

    /// Verify Killing = constant * identity exactly; returns the constant.
    pub fn killing_proportionality(&self) -> Result<Rational, StructureError> {
        let diag = self.killing(1, 1);
        for i in 1..=GENERATORS {
            for j in i..=GENERATORS {
                let v = self.killing(i, j);
                let expect = if i == j { diag.clone() } else { Rational::zero() };
                if v != expect {
                    return Err(StructureError::BadEntry {
                        i,
                        j,
                        k: 0,
                        reason: format!("Killing form not proportional to identity: {v}"),
                    });
                }
            }
        }
        Ok(diag)
    }
}

fn check_value(i: usize, j: usize, k: usize, v: &Rational) -> Result<(), StructureError> {
    let ok = [rat(1, 1), rat(-1, 1), rat(1, 2), rat(-1, 2)].contains(v);
    if ok {
        Ok(())
    } else {
        Err(StructureError::BadValue { i, j, k, value: v.to_string() })
    }
}

/// Serialize in the fixture wire format.
pub fn to_fixture_json(table: &StructureTable) -> String {
    let records: Vec<TableRecord> = table
        .entries()
        .map(|(&(i, j, k), v)| TableRecord {
            i,
            j,
            k,
            value: FieldScalar::from_rational(v.clone()),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("table serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn table() -> StructureTable {
        StructureTable::from_json(fixtures::STRUCTURE_TABLE_JSON).unwrap()
    }

    #[test]
    fn listed_examples() {
        let t = table();
        assert_eq!(t.get(1, 2, 3), rat(-1, 1));
        assert_eq!(t.get(22, 23, 33), rat(-1, 2));
        // antisymmetry
        assert_eq!(t.get(2, 1, 3), rat(1, 1));
        assert_eq!(t.get(1, 1, 3), rat(0, 1));
    }

    #[test]
    fn su2_triple() {
        let t = table();
        // [c1,c2] = -c3 and cyclic: s_ijk = -epsilon_ijk on 1,2,3
        assert_eq!(t.bracket(1, 2), vec![(3, rat(-1, 1))]);
        assert_eq!(t.bracket(2, 3), vec![(1, rat(-1, 1))]);
        assert_eq!(t.bracket(3, 1), vec![(2, rat(-1, 1))]);
    }

    #[test]
    fn jacobi_exhaustive_low_indices() {
        let t = table();
        for i in 1..=15 {
            for j in 1..=15 {
                for k in 1..=15 {
                    for l in 1..=15 {
                        assert!(t.jacobi_residual(i, j, k, l).is_zero(), "({i},{j},{k},{l})");
                    }
                }
            }
        }
    }

    #[test]
    fn adjoint_action_on_su2() {
        let t = table();
        let c1 = t.adjoint(1);
        // C1 applied to c2 gives -c3; C1 applied to c1 gives 0
        let mut e2 = nalgebra::DVector::zeros(GENERATORS);
        e2[1] = 1.0;
        let image = &c1 * e2;
        assert_eq!(image[2], -1.0);
        assert_eq!(image.iter().filter(|v| **v != 0.0).count(), 1);
        let mut e1 = nalgebra::DVector::zeros(GENERATORS);
        e1[0] = 1.0;
        assert_eq!((&c1 * e1).norm(), 0.0);
    }

    #[test]
    fn killing_diag_negative() {
        let t = table();
        let k11 = t.killing(1, 1);
        assert!(k11 < Rational::zero());
        // numeric trace agrees
        let c1 = t.adjoint(1);
        let tr = (&c1 * &c1).trace();
        assert!((tr - crate::scalar::rational_to_f64(&k11)).abs() < 1e-9);
    }
}
