//! The canonical 52-generator basis of f4 and its distinguished subalgebras.
//!
//! The generators ship as fixture data in the rotated f-basis (where the last
//! row and column vanish); loading un-rotates them to the 27-coordinate
//! e-basis and then validates everything that can be validated exactly:
//! the derivation property, orthonormality under <a,b> = -Tr(ab)/6, the full
//! structure-constant table, the subalgebra kernels and the reductive split
//! [so(9), P] in P, [P, P] in so(9).

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    self, is_derivation, reduce_to_26, trace_inner, AlgebraElement, Rep,
};
use crate::fixtures::{FixtureFile, FixtureSet};
use crate::scalar::FieldScalar;
use crate::structure::{StructureTable, GENERATORS};

#[derive(Debug, thiserror::Error)]
pub enum BasisError {
    #[error("canonical basis parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("structure table: {0}")]
    Structure(#[from] crate::structure::StructureError),
    #[error("canonical basis must have indices 1..=52, got {0} records")]
    WrongCount(usize),
    #[error("generator c_{index} fails check: {check}")]
    Validation { index: usize, check: String },
    #[error("subalgebra {name} is not closed: [c_{i}, c_{j}] leaves the span")]
    NotClosed { name: &'static str, i: usize, j: usize },
    #[error("tilde basis check failed: {0}")]
    Tilde(String),
}

/// The named subalgebras of f4 picked out by index sets of the canonical
/// basis, plus the orthogonal complement P of so(9)_1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subalgebra {
    So3,
    So4,
    So5,
    So6,
    So7,
    So8,
    So9_1,
    So9_2,
    So9_3,
    F4,
}

impl Subalgebra {
    pub fn name(self) -> &'static str {
        match self {
            Subalgebra::So3 => "so(3)",
            Subalgebra::So4 => "so(4)",
            Subalgebra::So5 => "so(5)",
            Subalgebra::So6 => "so(6)",
            Subalgebra::So7 => "so(7)",
            Subalgebra::So8 => "so(8)",
            Subalgebra::So9_1 => "so(9)_1",
            Subalgebra::So9_2 => "so(9)_2",
            Subalgebra::So9_3 => "so(9)_3",
            Subalgebra::F4 => "f4",
        }
    }

    /// 1-based generator indices.
    pub fn indices(self) -> Vec<usize> {
        match self {
            Subalgebra::So3 => (1..=3).collect(),
            Subalgebra::So4 => (1..=6).collect(),
            Subalgebra::So5 => (1..=10).collect(),
            Subalgebra::So6 => (1..=15).collect(),
            Subalgebra::So7 => (1..=21).collect(),
            Subalgebra::So8 => (1..=21).chain(30..=36).collect(),
            Subalgebra::So9_1 => (1..=21).chain(30..=36).chain(45..=52).collect(),
            Subalgebra::So9_2 => (1..=21).chain(30..=36).chain(37..=44).collect(),
            Subalgebra::So9_3 => (1..=21).chain(30..=36).chain(22..=29).collect(),
            Subalgebra::F4 => (1..=52).collect(),
        }
    }

    /// The coordinate slot (0-based, e-basis) each so(9)_k annihilates.
    pub fn fixed_slot(self) -> Option<usize> {
        match self {
            Subalgebra::So9_1 => Some(0),
            Subalgebra::So9_2 => Some(17),
            Subalgebra::So9_3 => Some(26),
            _ => None,
        }
    }
}

/// 1-based indices of the 16-dimensional complement P of so(9)_1.
pub fn p_space_indices() -> Vec<usize> {
    (22..=29).chain(37..=44).collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct FixtureEntry {
    row: usize,
    col: usize,
    value: FieldScalar,
}

#[derive(Debug, Serialize, Deserialize)]
struct FixtureMatrix {
    index: usize,
    rep: String,
    entries: Vec<FixtureEntry>,
}

/// The validated canonical basis in both representations.
pub struct CanonicalBasis {
    /// e-basis 27x27 derivations c_1..c_52 (index 0 holds c_1)
    dim27: Vec<AlgebraElement>,
    /// reduced 26x26 matrices in the f-basis
    dim26: Vec<AlgebraElement>,
    table: StructureTable,
}

impl CanonicalBasis {
    /// 1-based access to the 27-dimensional (e-basis) generator.
    pub fn gen27(&self, i: usize) -> &AlgebraElement {
        &self.dim27[i - 1]
    }

    /// 1-based access to the reduced 26x26 generator.
    pub fn gen26(&self, i: usize) -> &AlgebraElement {
        &self.dim26[i - 1]
    }

    pub fn all27(&self) -> &[AlgebraElement] {
        &self.dim27
    }

    pub fn all26(&self) -> &[AlgebraElement] {
        &self.dim26
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn load(fixtures: &FixtureSet) -> Result<Self, BasisError> {
        let records: Vec<FixtureMatrix> =
            serde_json::from_str(fixtures.get(FixtureFile::CanonicalBasis))?;
        if records.len() != GENERATORS
            || records.iter().enumerate().any(|(n, r)| r.index != n + 1)
        {
            return Err(BasisError::WrongCount(records.len()));
        }

        let mut dim27 = Vec::with_capacity(GENERATORS);
        let mut dim26 = Vec::with_capacity(GENERATORS);
        for record in &records {
            if record.rep != "dim27" {
                return Err(BasisError::Validation {
                    index: record.index,
                    check: format!("unknown rep {:?}", record.rep),
                });
            }
            let mut printed = AlgebraElement::zeros(Rep::Dim27);
            for e in &record.entries {
                if !(1..=27).contains(&e.row) || !(1..=27).contains(&e.col) {
                    return Err(BasisError::Validation {
                        index: record.index,
                        check: format!("entry ({},{}) out of range", e.row, e.col),
                    });
                }
                *printed.at_mut(e.row - 1, e.col - 1) = e.value.clone();
            }
            // printed matrices live in the f-basis and annihilate the f27
            // line structurally
            for k in 0..27 {
                if !printed.at(26, k).is_zero() || !printed.at(k, 26).is_zero() {
                    return Err(BasisError::Validation {
                        index: record.index,
                        check: "printed matrix must have vanishing last row/column".into(),
                    });
                }
            }
            let e_basis = algebra::rotate_from_f_basis(&printed);
            if is_derivation(&e_basis) != Ok(true) {
                return Err(BasisError::Validation {
                    index: record.index,
                    check: "derivation (Leibniz identity)".into(),
                });
            }
            let reduced = reduce_to_26(&e_basis).map_err(|_| BasisError::Validation {
                index: record.index,
                check: "reduction to 26".into(),
            })?;
            dim27.push(e_basis);
            dim26.push(reduced);
        }

        // exact orthonormality, all 1378 unordered pairs
        for i in 0..GENERATORS {
            for j in i..GENERATORS {
                let ip = trace_inner(&dim27[i], &dim27[j]).expect("same rep");
                let expect =
                    if i == j { FieldScalar::one() } else { FieldScalar::zero() };
                if ip != expect {
                    return Err(BasisError::Validation {
                        index: i + 1,
                        check: format!("orthonormality against c_{}", j + 1),
                    });
                }
            }
        }

        // structure constants computed from the matrices must reproduce the
        // fixture table entry-for-entry (closure is verified inside compute)
        let computed = StructureTable::compute(&dim26)?;
        let fixture_table =
            StructureTable::from_json(fixtures.get(FixtureFile::StructureTable))?;
        if let Some((i, j, k)) = computed.first_difference(&fixture_table) {
            return Err(BasisError::Validation {
                index: i,
                check: format!("structure constant s_({i},{j},{k}) differs from the table"),
            });
        }

        let basis = Self { dim27, dim26, table: computed };
        basis.validate_subalgebras()?;
        Ok(basis)
    }

    fn validate_subalgebras(&self) -> Result<(), BasisError> {
        use Subalgebra::*;
        for sub in [So3, So4, So5, So6, So7, So8, So9_1, So9_2, So9_3] {
            let set: BTreeSet<usize> = sub.indices().into_iter().collect();
            for &i in &set {
                for &j in &set {
                    for (k, _) in self.table.bracket(i, j) {
                        if !set.contains(&k) {
                            return Err(BasisError::NotClosed { name: sub.name(), i, j });
                        }
                    }
                }
            }
            if let Some(slot) = sub.fixed_slot() {
                for &i in &set {
                    let col_zero = (0..27).all(|r| self.gen27(i).at(r, slot).is_zero());
                    if !col_zero {
                        return Err(BasisError::Validation {
                            index: i,
                            check: format!("{} must annihilate slot {}", sub.name(), slot + 1),
                        });
                    }
                }
            }
        }
        // every generator annihilates f27
        let f27 = algebra::f27_vector();
        for (n, m) in self.dim27.iter().enumerate() {
            if m.apply(&f27).iter().any(|v| !v.is_zero()) {
                return Err(BasisError::Validation {
                    index: n + 1,
                    check: "kernel must contain f27".into(),
                });
            }
        }
        // reductive split: [so(9), P] in P and [P, P] in so(9)
        let so9: BTreeSet<usize> = Subalgebra::So9_1.indices().into_iter().collect();
        let p: BTreeSet<usize> = p_space_indices().into_iter().collect();
        for &i in &so9 {
            for &j in &p {
                for (k, _) in self.table.bracket(i, j) {
                    if !p.contains(&k) {
                        return Err(BasisError::NotClosed { name: "[so(9),P]", i, j });
                    }
                }
            }
        }
        for &i in &p {
            for &j in &p {
                for (k, _) in self.table.bracket(i, j) {
                    if !so9.contains(&k) {
                        return Err(BasisError::NotClosed { name: "[P,P]", i, j });
                    }
                }
            }
        }
        Ok(())
    }

    /// The triality-twisted so(8) basis commuting with c22 where the plain
    /// one does not: stage one takes c~_{30+i} = -[c22, c_{23+i}] for
    /// i = 0..6, stage two rebuilds c~_1..c~_21 by the bracket recursion
    /// c~_{k(k-1)/2+i+1} = -[c~_{30+i}, c~_{30+k}] (the sign matches the
    /// plain-basis relation [c_{30+i}, c_{30+k}] = -c_{k(k-1)/2+i+1}).
    /// Indices 45..52 alias the plain generators.
    pub fn tilde_basis(&self) -> Result<TildeBasis, BasisError> {
        let rep = Rep::Dim26;
        let mut elements: Vec<Option<AlgebraElement>> = vec![None; GENERATORS + 1];
        for i in 0..7 {
            let bracket = self.gen26(22).commutator(self.gen26(23 + i));
            elements[30 + i] = Some(-bracket);
        }
        for k in 1..7usize {
            for i in 0..k {
                let idx = k * (k - 1) / 2 + i + 1;
                let a = elements[30 + i].clone().expect("stage one filled");
                let b = elements[30 + k].clone().expect("stage one filled");
                elements[idx] = Some(-a.commutator(&b));
            }
        }
        for i in 45..=52 {
            elements[i] = Some(self.gen26(i).clone());
        }

        let tilde = TildeBasis { elements };

        // the tilde so(8) satisfies exactly the plain structure constants
        let so8: Vec<usize> = Subalgebra::So8.indices();
        for &i in &so8 {
            for &j in &so8 {
                let bracket = tilde.get(i).commutator(tilde.get(j));
                let mut recon = AlgebraElement::zeros(rep);
                for (k, v) in self.table.bracket(i, j) {
                    recon = &recon + &tilde.get(k).scale(&FieldScalar::from_rational(v));
                }
                if recon != bracket {
                    return Err(BasisError::Tilde(format!(
                        "structure constants differ at [c~_{i}, c~_{j}]"
                    )));
                }
            }
        }
        // commutation with c22 for the so(7) part
        for i in 1..=21 {
            if !tilde.get(i).commutator(self.gen26(22)).is_zero() {
                return Err(BasisError::Tilde(format!("[c~_{i}, c22] != 0")));
            }
        }
        // span equality with the plain so(8): expanding in the orthonormal
        // plain basis and reconstructing must be lossless
        for &i in &so8 {
            let mut recon = AlgebraElement::zeros(rep);
            for &k in &so8 {
                let coeff = trace_inner(tilde.get(i), self.gen26(k)).expect("same rep");
                if !coeff.is_zero() {
                    recon = &recon + &self.gen26(k).scale(&coeff);
                }
            }
            if &recon != tilde.get(i) {
                return Err(BasisError::Tilde(format!(
                    "c~_{i} lies outside the plain so(8) span"
                )));
            }
        }
        Ok(tilde)
    }
}

/// The tilde generators, defined for indices {1..21, 30..36, 45..52}.
pub struct TildeBasis {
    elements: Vec<Option<AlgebraElement>>,
}

impl TildeBasis {
    /// 1-based access; panics for indices outside the tilde set.
    pub fn get(&self, i: usize) -> &AlgebraElement {
        self.elements[i].as_ref().unwrap_or_else(|| panic!("no tilde generator {i}"))
    }

    pub fn indices(&self) -> Vec<usize> {
        (1..=21).chain(30..=36).chain(45..=52).collect()
    }
}

/// The canonical basis loaded from the embedded fixtures, validated once per
/// process.
pub fn canonical() -> &'static CanonicalBasis {
    static BASIS: OnceLock<CanonicalBasis> = OnceLock::new();
    BASIS.get_or_init(|| {
        CanonicalBasis::load(&FixtureSet::embedded()).expect("embedded canonical basis is valid")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn fixture_prints_c1_and_c22_entries() {
        // spot entries as printed: c1 at (2,3) is -1/2, c22 at (1,9) is
        // -sqrt2 and at (9,1) is 1/sqrt2
        let records: Vec<FixtureMatrix> =
            serde_json::from_str(crate::fixtures::CANONICAL_BASIS_JSON).unwrap();
        let find = |idx: usize, row: usize, col: usize| -> FieldScalar {
            records[idx - 1]
                .entries
                .iter()
                .find(|e| e.row == row && e.col == col)
                .map(|e| e.value.clone())
                .unwrap_or_else(FieldScalar::zero)
        };
        assert_eq!(find(1, 2, 3), FieldScalar::ratio(-1, 2));
        assert_eq!(find(22, 1, 9), -FieldScalar::sqrt2());
        assert_eq!(find(22, 9, 1), FieldScalar::sqrt2().inv().unwrap());
    }

    #[test]
    fn canonical_basis_loads_and_validates() {
        let basis = canonical();
        assert_eq!(basis.all27().len(), 52);
        assert_eq!(basis.all26().len(), 52);
        // c1 reduced keeps its upper-left 17x17 block
        for r in 0..17 {
            for c in 0..17 {
                assert_eq!(basis.gen26(1).at(r, c), basis.gen27(1).at(r, c));
            }
        }
    }

    #[test]
    fn trace_inner_preserved_by_reduction() {
        let basis = canonical();
        for &(i, j) in &[(1usize, 1usize), (1, 2), (22, 22), (30, 45), (52, 52)] {
            let a = trace_inner(basis.gen27(i), basis.gen27(j)).unwrap();
            let b = trace_inner(basis.gen26(i), basis.gen26(j)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn tilde_c30_expansion() {
        // c~30 = (c1 - c9 - c21 + c33)/2
        let basis = canonical();
        let tilde = basis.tilde_basis().unwrap();
        let half = FieldScalar::ratio(1, 2);
        let expect = &(&(&basis.gen26(1).scale(&half) - &basis.gen26(9).scale(&half))
            - &basis.gen26(21).scale(&half))
            + &basis.gen26(33).scale(&half);
        assert_eq!(tilde.get(30), &expect);
        assert_eq!(
            trace_inner(tilde.get(30), tilde.get(30)).unwrap(),
            FieldScalar::one()
        );
    }

    #[test]
    fn tilde_5_commutes_with_c22() {
        let basis = canonical();
        let tilde = basis.tilde_basis().unwrap();
        assert!(tilde.get(5).commutator(basis.gen26(22)).is_zero());
    }

    #[test]
    fn killing_form_is_minus_18_times_identity() {
        let basis = canonical();
        let k = basis.table().killing_proportionality().unwrap();
        assert_eq!(k, rat(-18, 1));
    }

    #[test]
    fn p_space_has_dimension_16() {
        assert_eq!(p_space_indices().len(), 16);
    }
}
