//! The octonion algebra O over Q(sqrt2, sqrt3) with its 8x8 product table.
//!
//! Basis ordering: e[1] = 1 (the real unit), e[i+1] = i_i for the seven
//! imaginary units. The table is fixture data; loading validates it by the
//! alternativity of the associator and norm multiplicativity so a transcribed
//! sign error cannot pass unnoticed.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::fixtures;
use crate::scalar::FieldScalar;

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("product table parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("product table must have 64 entries, got {0}")]
    WrongSize(usize),
    #[error("product table entry ({i},{j}) duplicated or out of range")]
    BadEntry { i: usize, j: usize },
    #[error("e[{i}]*e[{j}] breaks {check}")]
    Invalid { i: usize, j: usize, check: &'static str },
}

/// One table record: e[i] * e[j] = sign * e[k], all indices 1-based.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProductRecord {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
    pub k: usize,
}

/// The full 8x8 multiplication table.
#[derive(Debug, Clone)]
pub struct ProductTable {
    /// table[i][j] = (k, sign) with 0-based indices
    table: [[(usize, i8); 8]; 8],
}

impl ProductTable {
    pub fn from_records(records: &[ProductRecord]) -> Result<Self, TableError> {
        if records.len() != 64 {
            return Err(TableError::WrongSize(records.len()));
        }
        let mut table = [[(usize::MAX, 0i8); 8]; 8];
        for r in records {
            if !(1..=8).contains(&r.i)
                || !(1..=8).contains(&r.j)
                || !(1..=8).contains(&r.k)
                || (r.sign != 1 && r.sign != -1)
                || table[r.i - 1][r.j - 1].1 != 0
            {
                return Err(TableError::BadEntry { i: r.i, j: r.j });
            }
            table[r.i - 1][r.j - 1] = (r.k - 1, r.sign);
        }
        let t = Self { table };
        t.validate()?;
        Ok(t)
    }

    pub fn from_json(json: &str) -> Result<Self, TableError> {
        let records: Vec<ProductRecord> = serde_json::from_str(json)?;
        Self::from_records(&records)
    }

    /// e_i * e_j in 0-based indices: (result index, sign).
    pub fn product(&self, i: usize, j: usize) -> (usize, i8) {
        self.table[i][j]
    }

    /// Structural checks on the table itself: identity element, squares of the
    /// imaginary units, anticommutativity, alternativity of the associator
    /// (a multilinear statement, so basis triples suffice) and norm
    /// multiplicativity on basis pairs.
    fn validate(&self) -> Result<(), TableError> {
        for j in 0..8 {
            if self.table[0][j] != (j, 1) || self.table[j][0] != (j, 1) {
                return Err(TableError::Invalid { i: 1, j: j + 1, check: "identity" });
            }
        }
        for i in 1..8 {
            if self.table[i][i] != (0, -1) {
                return Err(TableError::Invalid { i: i + 1, j: i + 1, check: "i_i^2 = -1" });
            }
            for j in 1..8 {
                if i != j {
                    let (k, s) = self.table[i][j];
                    if k == 0 || self.table[j][i] != (k, -s) {
                        return Err(TableError::Invalid {
                            i: i + 1,
                            j: j + 1,
                            check: "anticommutativity",
                        });
                    }
                }
            }
        }
        // associator alternation: assoc(i,j,k) must vanish whenever two
        // arguments coincide; combined with bilinearity this is equivalent to
        // x(xy) = (xx)y and (yx)x = y(xx) for all octonions.
        let assoc = |i: usize, j: usize, k: usize| -> (usize, i64) {
            let (ij, s1) = self.table[i][j];
            let (l, s2) = self.table[ij][k];
            let (jk, t1) = self.table[j][k];
            let (r, t2) = self.table[i][jk];
            if l != r {
                // distinct basis components never cancel
                (usize::MAX, 0)
            } else {
                (l, (s1 * s2 - t1 * t2) as i64)
            }
        };
        for i in 0..8 {
            for j in 0..8 {
                for (p, q, r) in [(i, i, j), (i, j, j), (i, j, i)] {
                    let (l, v) = assoc(p, q, r);
                    if l == usize::MAX || v != 0 {
                        return Err(TableError::Invalid {
                            i: p + 1,
                            j: q + 1,
                            check: "alternativity",
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The crate-wide table, loaded from the embedded fixture on first use.
pub fn product_table() -> &'static ProductTable {
    static TABLE: OnceLock<ProductTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        ProductTable::from_json(fixtures::OCTONION_TABLE_JSON)
            .expect("embedded octonion table is valid")
    })
}

/// An octonion with coordinates (o^0, o^1, ..., o^7) in the basis
/// (1, i_1, ..., i_7).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Octonion {
    pub coords: [FieldScalar; 8],
}

impl Octonion {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::unit(0)
    }

    /// The basis element e_k (0-based: 0 is the real unit, k >= 1 is i_k).
    pub fn unit(k: usize) -> Self {
        let mut o = Self::default();
        o.coords[k] = FieldScalar::one();
        o
    }

    pub fn from_coords(coords: [FieldScalar; 8]) -> Self {
        Self { coords }
    }

    pub fn real_part(&self) -> &FieldScalar {
        &self.coords[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldScalar::is_zero)
    }

    /// Conjugation: real part kept, all imaginary coordinates negated.
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for k in 1..8 {
            out.coords[k] = -out.coords[k].clone();
        }
        out
    }

    /// Sum of squared coordinates; equals the real part of x * conj(x).
    pub fn norm2(&self) -> FieldScalar {
        let mut acc = FieldScalar::zero();
        for k in 0..8 {
            acc += &(&self.coords[k] * &self.coords[k]);
        }
        acc
    }

    pub fn scale(&self, s: &FieldScalar) -> Self {
        let mut out = self.clone();
        for k in 0..8 {
            out.coords[k] = &out.coords[k] * s;
        }
        out
    }
}

impl Add for &Octonion {
    type Output = Octonion;
    fn add(self, rhs: &Octonion) -> Octonion {
        let mut out = self.clone();
        for k in 0..8 {
            out.coords[k] += &rhs.coords[k];
        }
        out
    }
}

impl Sub for &Octonion {
    type Output = Octonion;
    fn sub(self, rhs: &Octonion) -> Octonion {
        let mut out = self.clone();
        for k in 0..8 {
            out.coords[k] -= &rhs.coords[k];
        }
        out
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        let mut out = self;
        for k in 0..8 {
            out.coords[k] = -out.coords[k].clone();
        }
        out
    }
}

impl Mul for &Octonion {
    type Output = Octonion;
    fn mul(self, rhs: &Octonion) -> Octonion {
        let table = product_table();
        let mut out = Octonion::zero();
        for i in 0..8 {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                if rhs.coords[j].is_zero() {
                    continue;
                }
                let (k, sign) = table.product(i, j);
                let mut term = &self.coords[i] * &rhs.coords[j];
                if sign < 0 {
                    term = -term;
                }
                out.coords[k] += &term;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn imag(k: usize) -> Octonion {
        Octonion::unit(k)
    }

    #[test]
    fn i1_times_i2_is_i4() {
        assert_eq!(&imag(1) * &imag(2), imag(4));
    }

    #[test]
    fn imaginary_units_square_to_minus_one() {
        for k in 1..8 {
            assert_eq!(&imag(k) * &imag(k), -Octonion::one());
        }
    }

    #[test]
    fn one_is_identity() {
        let x = Octonion::from_coords(std::array::from_fn(|k| FieldScalar::from_int(k as i64 - 3)));
        assert_eq!(&Octonion::one() * &x, x);
        assert_eq!(&x * &Octonion::one(), x);
    }

    #[test]
    fn conjugation() {
        assert_eq!(Octonion::one().conj(), Octonion::one());
        assert_eq!(imag(5).conj(), -imag(5));
        let mut x = Octonion::zero();
        x.coords[0] = FieldScalar::from_int(2);
        x.coords[1] = FieldScalar::from_int(3);
        let mut expect = Octonion::zero();
        expect.coords[0] = FieldScalar::from_int(2);
        expect.coords[1] = FieldScalar::from_int(-3);
        assert_eq!(x.conj(), expect);
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn norm2_examples() {
        assert_eq!(Octonion::zero().norm2(), FieldScalar::zero());
        assert_eq!(imag(7).norm2(), FieldScalar::one());
        let x = &(&Octonion::one() + &imag(1)) + &(&imag(2) + &imag(4));
        assert_eq!(x.norm2(), FieldScalar::from_int(4));
    }

    #[test]
    fn noncommutativity_witness() {
        let lhs = &imag(1) * &imag(2);
        let rhs = &imag(2) * &imag(1);
        assert_eq!(lhs, -rhs);
        assert!(!lhs.is_zero());
    }

    #[test]
    fn nonassociativity_witness_exists() {
        let mut found = false;
        'outer: for i in 1..8 {
            for j in 1..8 {
                for k in 1..8 {
                    let lhs = &(&imag(i) * &imag(j)) * &imag(k);
                    let rhs = &imag(i) * &(&imag(j) * &imag(k));
                    if lhs != rhs {
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(found, "octonions must not be associative");
    }

    /// The table's actual quaternionic triples: i_a i_b lands on +/- i_c with
    /// {1, i_a, i_b, i_c} closed under multiplication.
    #[test]
    fn quaternionic_subalgebra_closure() {
        let table = product_table();
        let mut triples = 0;
        for a in 1..8 {
            for b in (a + 1)..8 {
                let (c, _) = table.product(a, b);
                if c <= b {
                    continue;
                }
                let span = [0usize, a, b, c];
                let closed = span.iter().all(|&p| {
                    span.iter().all(|&q| {
                        let (r, _) = table.product(p, q);
                        span.contains(&r)
                    })
                });
                if closed {
                    triples += 1;
                }
            }
        }
        // the Fano-plane structure: seven quaternionic triples, one per line
        assert_eq!(triples, 7);
        // the canonical witness {1, i1, i2, i4}
        let span = [0usize, 1, 2, 4];
        for &p in &span {
            for &q in &span {
                let (r, _) = product_table().product(p, q);
                assert!(span.contains(&r));
            }
        }
    }

    fn arb_oct() -> impl Strategy<Value = Octonion> {
        proptest::collection::vec((-6i64..=6, 1i64..=3), 8).prop_map(|v| {
            Octonion::from_coords(std::array::from_fn(|k| {
                FieldScalar::from_rational(rat(v[k].0, v[k].1))
            }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn alternative_on_random_pairs(x in arb_oct(), y in arb_oct()) {
            let xx = &x * &x;
            prop_assert_eq!(&xx * &y, &x * &(&x * &y));
            prop_assert_eq!(&(&y * &x) * &x, &y * &xx);
        }

        #[test]
        fn norm_is_multiplicative(x in arb_oct(), y in arb_oct()) {
            prop_assert_eq!((&x * &y).norm2(), x.norm2() * y.norm2());
        }

        #[test]
        fn norm_equals_x_conj_x(x in arb_oct()) {
            let p = &x * &x.conj();
            prop_assert_eq!(p.real_part().clone(), x.norm2());
            for k in 1..8 {
                prop_assert!(p.coords[k].is_zero());
            }
        }
    }
}
