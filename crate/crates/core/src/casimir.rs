//! Decomposition of the 27-dimensional representation under subalgebras via
//! the quadratic Casimir and the joint support of the generators.
//!
//! Blocks are the connected components of the generators' joint support graph
//! in the rotated f-basis, refined by Casimir eigenvalue clustering; an
//! isotypic block carrying an invariant complex structure (a commuting
//! antisymmetric J with J^2 = -lambda) counts as two complex-conjugate halves,
//! which is how the chiral spinor pairs of so(6) appear.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::algebra;
use crate::basis::CanonicalBasis;
use crate::jordan::{self, DIM};

const SUPPORT_EPS: f64 = 1e-9;
const CLUSTER_REL: f64 = 1e-9;

/// Sorted (descending) block dimensions of the 27-dim representation
/// restricted to the generators with the given 1-based indices.
pub fn casimir_decomposition(basis: &CanonicalBasis, indices: &[usize]) -> Vec<usize> {
    let gens = rescaled_f_basis_generators(basis, indices);
    let mut casimir = DMatrix::<f64>::zeros(DIM, DIM);
    for k in &gens {
        casimir -= k * k;
    }
    casimir = (&casimir + casimir.transpose()) * 0.5;

    let mut dims = Vec::new();
    for component in support_components(&gens) {
        let m = component.len();
        let sub = casimir.select_rows(component.iter()).select_columns(component.iter());
        let eig = SymmetricEigen::new(sub);
        let scale = eig.eigenvalues.amax().max(1.0);
        // cluster eigenvalues
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap()
        });
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for idx in order {
            match clusters.last_mut() {
                Some(cluster)
                    if (eig.eigenvalues[idx]
                        - eig.eigenvalues[*cluster.last().unwrap()])
                    .abs()
                        < CLUSTER_REL * scale =>
                {
                    cluster.push(idx)
                }
                _ => clusters.push(vec![idx]),
            }
        }
        for cluster in clusters {
            let d = cluster.len();
            let value = eig.eigenvalues[cluster[0]];
            if d >= 2 && d % 2 == 0 && value.abs() > CLUSTER_REL * scale {
                // isotypic block: project the generators and look for an
                // invariant complex structure
                let q = eig.eigenvectors.select_columns(cluster.iter());
                let restricted: Vec<DMatrix<f64>> = gens
                    .iter()
                    .map(|k| {
                        let sel =
                            k.select_rows(component.iter()).select_columns(component.iter());
                        q.transpose() * sel * &q
                    })
                    .collect();
                if has_complex_structure(&restricted) {
                    dims.push(d / 2);
                    dims.push(d / 2);
                    continue;
                }
            }
            dims.push(d);
        }
    }
    dims.sort_unstable_by(|a, b| b.cmp(a));
    dims
}

/// Generators rotated to the f-basis and conjugated by sqrt(G) so they are
/// honestly antisymmetric.
fn rescaled_f_basis_generators(basis: &CanonicalBasis, indices: &[usize]) -> Vec<DMatrix<f64>> {
    let weights = jordan::form_weights();
    indices
        .iter()
        .map(|&i| {
            let f = algebra::rotate_to_f_basis(basis.gen27(i)).to_f64();
            DMatrix::from_fn(DIM, DIM, |r, c| {
                f[(r, c)] * (weights[r] as f64).sqrt() / (weights[c] as f64).sqrt()
            })
        })
        .collect()
}

/// Connected components of the joint support graph.
fn support_components(gens: &[DMatrix<f64>]) -> Vec<Vec<usize>> {
    let mut adj = vec![[false; DIM]; DIM];
    for k in gens {
        for r in 0..DIM {
            for c in 0..DIM {
                if k[(r, c)].abs() > SUPPORT_EPS {
                    adj[r][c] = true;
                    adj[c][r] = true;
                }
            }
        }
    }
    let mut seen = [false; DIM];
    let mut components = Vec::new();
    for start in 0..DIM {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            comp.push(u);
            for v in 0..DIM {
                if adj[u][v] && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// True when the antisymmetric commutant of the generator set contains a J
/// with J^2 = -lambda I (lambda > 0): the block is the realification of a
/// complex-type representation.
fn has_complex_structure(gens: &[DMatrix<f64>]) -> bool {
    let m = gens[0].nrows();
    let pairs: Vec<(usize, usize)> =
        (0..m).flat_map(|a| ((a + 1)..m).map(move |b| (a, b))).collect();
    if pairs.is_empty() {
        return false;
    }
    // rows of the constraint system [Y, K] = 0 over antisymmetric Y
    let mut rows = Vec::new();
    for k in gens {
        for r in 0..m {
            for c in 0..m {
                let mut row = vec![0.0; pairs.len()];
                for (idx, &(a, b)) in pairs.iter().enumerate() {
                    let mut v = 0.0;
                    // (Y K - K Y)[r][c] contribution of Y[a][b] = y, Y[b][a] = -y
                    if a == r {
                        v += k[(b, c)];
                    }
                    if b == r {
                        v -= k[(a, c)];
                    }
                    if b == c {
                        v -= k[(r, a)];
                    }
                    if a == c {
                        v += k[(r, b)];
                    }
                    row[idx] = v;
                }
                rows.push(row);
            }
        }
    }
    let a = DMatrix::from_fn(rows.len(), pairs.len(), |r, c| rows[r][c]);
    let svd = a.svd(false, true);
    let smax = svd.singular_values.amax().max(1.0);
    let v_t = svd.v_t.expect("svd with right vectors");
    let nullity = svd.singular_values.iter().filter(|s| **s < 1e-7 * smax).count();
    if nullity == 0 {
        return false;
    }
    // the last right-singular vector spans (part of) the nullspace
    let y = v_t.row(v_t.nrows() - 1);
    let mut jmat = DMatrix::<f64>::zeros(m, m);
    for (idx, &(a_, b_)) in pairs.iter().enumerate() {
        jmat[(a_, b_)] = y[idx];
        jmat[(b_, a_)] = -y[idx];
    }
    let j2 = &jmat * &jmat;
    let lambda = -j2.trace() / m as f64;
    if lambda <= 1e-9 {
        return false;
    }
    let residual = (&j2 + DMatrix::identity(m, m) * lambda).abs().max();
    residual < 1e-7 * lambda.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{canonical, Subalgebra};

    #[test]
    fn decompositions_match_the_known_blocks() {
        let basis = canonical();
        let cases = [
            (Subalgebra::So9_1, vec![16, 9, 1, 1]),
            (Subalgebra::So8, vec![8, 8, 8, 1, 1, 1]),
            (Subalgebra::So7, vec![8, 8, 7, 1, 1, 1, 1]),
            (Subalgebra::So6, vec![6, 4, 4, 4, 4, 1, 1, 1, 1, 1]),
            (Subalgebra::F4, vec![26, 1]),
        ];
        for (sub, expect) in cases {
            let dims = casimir_decomposition(basis, &sub.indices());
            assert_eq!(dims, expect, "{}", sub.name());
        }
    }

    #[test]
    fn blocks_partition_the_27_coordinates() {
        let basis = canonical();
        for sub in [Subalgebra::So3, Subalgebra::So5, Subalgebra::So9_2] {
            let dims = casimir_decomposition(basis, &sub.indices());
            assert_eq!(dims.iter().sum::<usize>(), 27, "{}", sub.name());
        }
    }
}
