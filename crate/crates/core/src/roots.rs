//! The F4 root system from the adjoint representation.
//!
//! The Cartan subalgebra is spanned by c1, c6, c15, c36 (an abelian quadruple
//! extending the chain Cartans c1; c1,c6; c1,c6,c15). Joint eigenvalue
//! quadruples of the four adjoint maps are read off invariant 2-planes of a
//! generic Cartan combination, snapped to the half-integer lattice, and
//! re-verified exactly against the structure table through the Killing form.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Zero;

use crate::scalar::{rat, Rational};
use crate::structure::{StructureTable, GENERATORS};

pub const CARTAN: [usize; 4] = [1, 6, 15, 36];

#[derive(Debug, thiserror::Error)]
pub enum RootsError {
    #[error("Cartan generators c_{0} and c_{1} do not commute")]
    NonCommutingCartan(usize, usize),
    #[error("generic Cartan combination failed to separate the root planes")]
    DegenerateCombination,
    #[error("kernel of the Cartan combination has dimension {0}, expected 4")]
    WrongKernel(usize),
    #[error("root snap error {0} exceeds 1e-9")]
    SnapError(f64),
    #[error("snapped roots do not form the standard F4 root system")]
    NotF4,
    #[error("root data inconsistent with the structure table Killing form")]
    KillingMismatch,
}

/// A root with doubled integer coordinates (so half-integers stay exact).
pub type Root = [i64; 4];

pub struct RootSystem {
    /// all 48 roots, doubled coordinates, lexicographically sorted
    pub roots: Vec<Root>,
    /// the rescale applied to raw eigenvalue data (1.0 for this basis)
    pub scale: f64,
    /// largest per-component deviation from the half-integer lattice
    pub snap_error: f64,
}

fn doubled_norm2(r: &Root) -> i64 {
    r.iter().map(|x| x * x).sum()
}

fn is_positive_lex(r: &Root) -> bool {
    for &x in r {
        if x != 0 {
            return x > 0;
        }
    }
    false
}

impl RootSystem {
    pub fn extract(table: &StructureTable) -> Result<Self, RootsError> {
        for (n, &i) in CARTAN.iter().enumerate() {
            for &j in &CARTAN[n + 1..] {
                if !table.bracket(i, j).is_empty() {
                    return Err(RootsError::NonCommutingCartan(i, j));
                }
            }
        }
        let adjoints: Vec<DMatrix<f64>> =
            CARTAN.iter().map(|&i| table.adjoint(i)).collect();

        // fixed generic weights; separation is verified below
        let weights = [1.0, 0.577_215_664_901_532_9, 0.318_309_886_183_790_7, 0.123_456_789_012_345_6];
        let mut combo = DMatrix::<f64>::zeros(GENERATORS, GENERATORS);
        for (w, adj) in weights.iter().zip(&adjoints) {
            combo += adj * *w;
        }
        let sym = -(&combo * &combo);
        let sym = (&sym + sym.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);

        let mut order: Vec<usize> = (0..GENERATORS).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let kernel = eigenvalues.iter().filter(|v| v.abs() < 1e-8).count();
        if kernel != 4 {
            return Err(RootsError::WrongKernel(kernel));
        }

        let mut raw: Vec<[f64; 4]> = Vec::new();
        let mut idx = 0;
        while idx < GENERATORS {
            if eigenvalues[idx].abs() < 1e-8 {
                idx += 1;
                continue;
            }
            if idx + 1 >= GENERATORS
                || (eigenvalues[idx + 1] - eigenvalues[idx]).abs()
                    > 1e-6 * eigenvalues[idx].max(1.0)
            {
                return Err(RootsError::DegenerateCombination);
            }
            if idx + 2 < GENERATORS
                && (eigenvalues[idx + 2] - eigenvalues[idx]).abs()
                    < 1e-6 * eigenvalues[idx].max(1.0)
            {
                return Err(RootsError::DegenerateCombination);
            }
            let u = eig.eigenvectors.column(order[idx]);
            let v = eig.eigenvectors.column(order[idx + 1]);
            // each adjoint acts on the invariant plane {u, v} as alpha_j J
            let alpha: [f64; 4] = std::array::from_fn(|j| (u.transpose() * &adjoints[j] * v)[0]);
            raw.push(alpha);
            idx += 2;
        }
        if raw.len() != 24 {
            return Err(RootsError::DegenerateCombination);
        }

        // uniform rescale so the shortest root has length 1
        let min_len = raw
            .iter()
            .map(|a| a.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min);
        let scale = 1.0 / min_len;

        let mut snap_error: f64 = 0.0;
        let mut roots = Vec::with_capacity(48);
        for alpha in &raw {
            let mut snapped = [0i64; 4];
            for j in 0..4 {
                let scaled = alpha[j] * scale;
                let doubled = (2.0 * scaled).round();
                snap_error = snap_error.max((scaled - doubled / 2.0).abs());
                snapped[j] = doubled as i64;
            }
            let negated = snapped.map(|x| -x);
            roots.push(snapped);
            roots.push(negated);
        }
        if snap_error > 1e-9 {
            return Err(RootsError::SnapError(snap_error));
        }
        roots.sort_unstable();
        roots.dedup();

        let system = RootSystem { roots, scale, snap_error };
        if !system.is_standard_f4() {
            return Err(RootsError::NotF4);
        }
        system.verify_against_killing(table)?;
        Ok(system)
    }

    /// The standard F4 root set: +-e_i, +-e_i +- e_j, (+-e1 +-e2 +-e3 +-e4)/2
    /// in doubled coordinates.
    pub fn standard_f4() -> Vec<Root> {
        let mut out: Vec<Root> = Vec::with_capacity(48);
        for i in 0..4 {
            for s in [2i64, -2] {
                let mut r = [0i64; 4];
                r[i] = s;
                out.push(r);
            }
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                for si in [2i64, -2] {
                    for sj in [2i64, -2] {
                        let mut r = [0i64; 4];
                        r[i] = si;
                        r[j] = sj;
                        out.push(r);
                    }
                }
            }
        }
        for mask in 0..16u32 {
            let r: Root = std::array::from_fn(|j| if mask >> j & 1 == 1 { -1 } else { 1 });
            out.push(r);
        }
        out.sort_unstable();
        out
    }

    pub fn is_standard_f4(&self) -> bool {
        self.roots == Self::standard_f4()
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        self.roots.iter().copied().filter(is_positive_lex_ref).collect()
    }

    /// (count of length 1, count of length sqrt2) among the positive roots.
    pub fn positive_length_multiset(&self) -> (usize, usize) {
        let positives = self.positive_roots();
        let short = positives.iter().filter(|r| doubled_norm2(r) == 4).count();
        let long = positives.iter().filter(|r| doubled_norm2(r) == 8).count();
        (short, long)
    }

    /// Simple roots: positive roots that are not the sum of two positives.
    pub fn simple_roots(&self) -> Vec<Root> {
        let positives = self.positive_roots();
        let set: std::collections::BTreeSet<Root> = positives.iter().copied().collect();
        positives
            .iter()
            .copied()
            .filter(|r| {
                !positives.iter().any(|p| {
                    let q: Root = std::array::from_fn(|k| r[k] - p[k]);
                    q != [0; 4] && set.contains(&q)
                })
            })
            .collect()
    }

    /// |det| of the matrix whose rows are the simple roots, exact.
    pub fn fundamental_volume(&self) -> Rational {
        let simple = self.simple_roots();
        assert_eq!(simple.len(), 4);
        let det = det4(&simple);
        // doubled coordinates scale the determinant by 2^4
        Rational::new(det.abs().into(), 16.into())
    }

    /// Exact consistency with the structure table: for the true roots,
    /// sum_alpha alpha_a alpha_b = -Killing(h_a, h_b), so the snapped set
    /// must satisfy the cross-ratio identity
    /// (sum alpha_a alpha_b) * K_11 = K_ab * (sum alpha_1 alpha_1).
    fn verify_against_killing(&self, table: &StructureTable) -> Result<(), RootsError> {
        let sums: [[i64; 4]; 4] = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                self.roots.iter().map(|r| r[a] * r[b]).sum::<i64>()
            })
        });
        let k11 = table.killing(CARTAN[0], CARTAN[0]);
        for a in 0..4 {
            for b in 0..4 {
                let kab = table.killing(CARTAN[a], CARTAN[b]);
                let lhs = rat(sums[a][b], 1) * k11.clone();
                let rhs = kab * rat(sums[0][0], 1);
                if lhs != rhs {
                    return Err(RootsError::KillingMismatch);
                }
            }
        }
        // and the Killing diagonal must be negative (compact form)
        if !(k11 < Rational::zero()) {
            return Err(RootsError::KillingMismatch);
        }
        Ok(())
    }
}

fn is_positive_lex_ref(r: &Root) -> bool {
    is_positive_lex(r)
}

fn det4(rows: &[Root]) -> i64 {
    let mut det = 0i64;
    // Laplace expansion over permutations of 4 elements
    const PERMS: [([usize; 4], i64); 24] = {
        // generated at compile time is overkill; list them
        [
            ([0, 1, 2, 3], 1),
            ([0, 1, 3, 2], -1),
            ([0, 2, 1, 3], -1),
            ([0, 2, 3, 1], 1),
            ([0, 3, 1, 2], 1),
            ([0, 3, 2, 1], -1),
            ([1, 0, 2, 3], -1),
            ([1, 0, 3, 2], 1),
            ([1, 2, 0, 3], 1),
            ([1, 2, 3, 0], -1),
            ([1, 3, 0, 2], -1),
            ([1, 3, 2, 0], 1),
            ([2, 0, 1, 3], 1),
            ([2, 0, 3, 1], -1),
            ([2, 1, 0, 3], -1),
            ([2, 1, 3, 0], 1),
            ([2, 3, 0, 1], 1),
            ([2, 3, 1, 0], -1),
            ([3, 0, 1, 2], -1),
            ([3, 0, 2, 1], 1),
            ([3, 1, 0, 2], 1),
            ([3, 1, 2, 0], -1),
            ([3, 2, 0, 1], -1),
            ([3, 2, 1, 0], 1),
        ]
    };
    for (perm, sign) in PERMS {
        let mut term = sign;
        for (row, &col) in perm.iter().enumerate() {
            term *= rows[row][col];
        }
        det += term;
    }
    det
}

/// The four simple roots in doubled coordinates: L2-L3, L3-L4, L4,
/// (L1-L2-L3-L4)/2.
pub fn reference_simple_roots() -> [Root; 4] {
    [
        [0, 2, -2, 0],
        [0, 0, 2, -2],
        [0, 0, 0, 2],
        [1, -1, -1, -1],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::canonical;

    fn system() -> RootSystem {
        RootSystem::extract(canonical().table()).unwrap()
    }

    #[test]
    fn forty_eight_roots_rank_four() {
        let s = system();
        assert_eq!(s.roots.len(), 48);
        assert_eq!(CARTAN.len(), 4);
        assert!(s.is_standard_f4());
    }

    #[test]
    fn twenty_four_positive_roots_split_by_length() {
        let s = system();
        assert_eq!(s.positive_roots().len(), 24);
        assert_eq!(s.positive_length_multiset(), (12, 12));
    }

    #[test]
    fn simple_roots_and_volume() {
        let s = system();
        let mut simple = s.simple_roots();
        simple.sort_unstable();
        let mut expect = reference_simple_roots().to_vec();
        expect.sort_unstable();
        assert_eq!(simple, expect);
        assert_eq!(s.fundamental_volume(), rat(1, 2));
        // r3 = L4 = (0,0,0,1)
        assert!(simple.contains(&[0, 0, 0, 2]));
        // every simple root is a root
        for r in &expect {
            assert!(s.roots.contains(r));
        }
    }

    #[test]
    fn snap_is_tight_and_scale_is_one() {
        let s = system();
        assert!(s.snap_error < 1e-9);
        assert!((s.scale - 1.0).abs() < 1e-9);
    }
}
