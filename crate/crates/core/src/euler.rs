//! Generalized Euler-angle charts for SU(2) ⊂ Spin(4) ⊂ ... ⊂ Spin(9) ⊂ F4
//! and evaluation of group elements in the 26-dimensional representation.
//!
//! Each chart is a left-to-right product of one-parameter factors
//! exp(x_i c_{j_i}) followed recursively by the chart of the maximal
//! subgroup. The F4 chart is
//!   B9[x1..x7] e^{x8 c45} B8~[x9..x14] e^{x15 c~30} e^{x16 c22}
//!   Spin9[x17..x52],
//! where B9 uses plain generators and the inner B8 block uses the tilde
//! (triality-twisted) so(8) basis, so the trailing redundancy subgroup is
//! the Spin(7) copy commuting with c22.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::{self, Subalgebra};
use crate::expm::FactorExp;
use crate::jordan;
use crate::scalar::rat;
use crate::structure::GENERATORS;

#[derive(Debug, thiserror::Error)]
pub enum ChartError {
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("chart expects {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("chart JSON does not match the {0} chart definition")]
    SpecMismatch(GroupName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupName {
    Su2,
    Spin4,
    Spin5,
    Spin6,
    Spin7,
    Spin8,
    Spin9,
    F4,
}

impl GroupName {
    pub const ALL: [GroupName; 8] = [
        GroupName::Su2,
        GroupName::Spin4,
        GroupName::Spin5,
        GroupName::Spin6,
        GroupName::Spin7,
        GroupName::Spin8,
        GroupName::Spin9,
        GroupName::F4,
    ];

    pub fn dim(self) -> usize {
        match self {
            GroupName::Su2 => 3,
            GroupName::Spin4 => 6,
            GroupName::Spin5 => 10,
            GroupName::Spin6 => 15,
            GroupName::Spin7 => 21,
            GroupName::Spin8 => 28,
            GroupName::Spin9 => 36,
            GroupName::F4 => 52,
        }
    }

    /// 1-based canonical-basis indices spanning the Lie algebra.
    pub fn algebra_indices(self) -> Vec<usize> {
        match self {
            GroupName::Su2 => Subalgebra::So3.indices(),
            GroupName::Spin4 => Subalgebra::So4.indices(),
            GroupName::Spin5 => Subalgebra::So5.indices(),
            GroupName::Spin6 => Subalgebra::So6.indices(),
            GroupName::Spin7 => Subalgebra::So7.indices(),
            GroupName::Spin8 => Subalgebra::So8.indices(),
            GroupName::Spin9 => Subalgebra::So9_1.indices(),
            GroupName::F4 => Subalgebra::F4.indices(),
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupName::Su2 => "SU2",
            GroupName::Spin4 => "Spin4",
            GroupName::Spin5 => "Spin5",
            GroupName::Spin6 => "Spin6",
            GroupName::Spin7 => "Spin7",
            GroupName::Spin8 => "Spin8",
            GroupName::Spin9 => "Spin9",
            GroupName::F4 => "F4",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupName {
    type Err = ChartError;
    fn from_str(s: &str) -> Result<Self, ChartError> {
        let lower = s.to_ascii_lowercase();
        Ok(match lower.as_str() {
            "su2" | "su(2)" => GroupName::Su2,
            "spin4" | "spin(4)" => GroupName::Spin4,
            "spin5" | "spin(5)" => GroupName::Spin5,
            "spin6" | "spin(6)" => GroupName::Spin6,
            "spin7" | "spin(7)" => GroupName::Spin7,
            "spin8" | "spin(8)" => GroupName::Spin8,
            "spin9" | "spin(9)" => GroupName::Spin9,
            "f4" => GroupName::F4,
            _ => return Err(ChartError::UnknownGroup(s.to_string())),
        })
    }
}

/// One exponential factor exp(x c_gen) or exp(x c~_gen).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub gen: usize,
    pub tilde: bool,
}

fn plain(gen: usize) -> Factor {
    Factor { gen, tilde: false }
}

fn tilde(gen: usize) -> Factor {
    Factor { gen, tilde: true }
}

/// Closed coordinate range as a multiple of pi/2, kept exact for the volume
/// integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeSpec {
    pub lo_half_pis: i8,
    pub hi_half_pis: i8,
}

impl RangeSpec {
    const fn new(lo: i8, hi: i8) -> Self {
        Self { lo_half_pis: lo, hi_half_pis: hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo_half_pis as f64 * FRAC_PI_2
    }

    pub fn hi(&self) -> f64 {
        self.hi_half_pis as f64 * FRAC_PI_2
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lo()..=self.hi()).contains(&x)
    }

    /// Length as (rational multiple of pi, pi power 1).
    pub fn length_pi_multiple(&self) -> crate::scalar::Rational {
        rat((self.hi_half_pis - self.lo_half_pis) as i64, 2)
    }
}

/// Density contribution sin^a(x) cos^b(x), optionally of the half angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrigFactor {
    pub sin_pow: u32,
    pub cos_pow: u32,
    pub half_angle: bool,
}

impl TrigFactor {
    const fn new(sin_pow: u32, cos_pow: u32) -> Self {
        Self { sin_pow, cos_pow, half_angle: false }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = if self.half_angle { x / 2.0 } else { x };
        t.sin().powi(self.sin_pow as i32) * t.cos().powi(self.cos_pow as i32)
    }
}

/// One own coordinate of a chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OwnCoordinate {
    pub factor: Factor,
    pub range: RangeSpec,
    pub trig: Option<TrigFactor>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerChart {
    pub name: GroupName,
    pub own: Vec<OwnCoordinate>,
    /// power of two multiplying the own-density (2^7 for the F4 coset)
    pub log2_prefactor: u32,
    pub subgroup: Option<Box<EulerChart>>,
    pub coset_dim: usize,
    pub redundancy_dim: usize,
}

impl EulerChart {
    pub fn dim(&self) -> usize {
        self.own.len() + self.subgroup.as_ref().map_or(0, |s| s.dim())
    }

    /// All coordinates in order, recursing into the subgroup chart.
    pub fn flatten(&self) -> Vec<&OwnCoordinate> {
        let mut out: Vec<&OwnCoordinate> = self.own.iter().collect();
        if let Some(sub) = &self.subgroup {
            out.extend(sub.flatten());
        }
        out
    }

    pub fn ranges(&self) -> Vec<RangeSpec> {
        self.flatten().iter().map(|c| c.range).collect()
    }

    pub fn in_range(&self, point: &[f64]) -> bool {
        self.ranges().iter().zip(point).all(|(r, &x)| r.contains(x))
    }
}

fn own(factor: Factor, range: RangeSpec, trig: Option<TrigFactor>) -> OwnCoordinate {
    OwnCoordinate { factor, range, trig }
}

const R_2PI: RangeSpec = RangeSpec::new(0, 4);
const R_PI: RangeSpec = RangeSpec::new(0, 2);
const R_4PI: RangeSpec = RangeSpec::new(0, 8);
const R_SYM: RangeSpec = RangeSpec::new(-1, 1);
const R_HALF: RangeSpec = RangeSpec::new(0, 1);

fn build_chart(name: GroupName) -> EulerChart {
    let sin = |p: u32| Some(TrigFactor::new(p, 0));
    let cos = |p: u32| Some(TrigFactor::new(0, p));
    let sincos = |s: u32, c: u32| Some(TrigFactor::new(s, c));
    match name {
        GroupName::Su2 => EulerChart {
            name,
            own: vec![
                own(plain(3), R_2PI, None),
                own(plain(2), R_PI, sin(1)),
                own(plain(3), R_4PI, None),
            ],
            log2_prefactor: 0,
            subgroup: None,
            coset_dim: 2,
            redundancy_dim: 0,
        },
        GroupName::Spin4 => {
            // the SU(2) tail lives on the su(2) copy {c5, c6, c3}, chart
            // generators (c3, c6, c3)
            let tail = EulerChart {
                name: GroupName::Su2,
                own: vec![
                    own(plain(3), R_2PI, None),
                    own(plain(6), R_PI, sin(1)),
                    own(plain(3), R_4PI, None),
                ],
                log2_prefactor: 0,
                subgroup: None,
                coset_dim: 2,
                redundancy_dim: 0,
            };
            EulerChart {
                name,
                own: vec![
                    own(plain(3), R_2PI, None),
                    own(plain(5), R_PI, sin(1)),
                    own(plain(4), R_PI, sin(2)),
                ],
                log2_prefactor: 0,
                subgroup: Some(Box::new(tail)),
                coset_dim: 3,
                redundancy_dim: 1,
            }
        }
        GroupName::Spin5 => EulerChart {
            name,
            own: vec![
                own(plain(3), R_2PI, None),
                own(plain(5), R_PI, sin(1)),
                own(plain(4), R_SYM, cos(2)),
                own(plain(7), R_PI, sin(3)),
            ],
            log2_prefactor: 0,
            subgroup: Some(Box::new(build_chart(GroupName::Spin4))),
            coset_dim: 4,
            redundancy_dim: 3,
        },
        GroupName::Spin6 => EulerChart {
            name,
            own: vec![
                own(plain(3), R_2PI, None),
                own(plain(5), R_PI, sin(1)),
                own(plain(4), R_SYM, cos(2)),
                own(plain(7), R_SYM, cos(3)),
                own(plain(11), R_PI, sin(4)),
            ],
            log2_prefactor: 0,
            subgroup: Some(Box::new(build_chart(GroupName::Spin5))),
            coset_dim: 5,
            redundancy_dim: 6,
        },
        GroupName::Spin7 => EulerChart {
            name,
            own: vec![
                own(plain(3), R_2PI, None),
                own(plain(5), R_PI, sin(1)),
                own(plain(4), R_SYM, cos(2)),
                own(plain(7), R_SYM, cos(3)),
                own(plain(11), R_SYM, cos(4)),
                own(plain(16), R_PI, sin(5)),
            ],
            log2_prefactor: 0,
            subgroup: Some(Box::new(build_chart(GroupName::Spin6))),
            coset_dim: 6,
            redundancy_dim: 10,
        },
        GroupName::Spin8 => EulerChart {
            name,
            own: vec![
                own(plain(3), R_2PI, None),
                own(plain(16), R_2PI, None),
                own(plain(15), R_2PI, None),
                own(plain(35), R_PI, sin(1)),
                own(plain(5), R_SYM, cos(1)),
                own(plain(1), R_HALF, sincos(2, 1)),
                own(plain(30), R_HALF, sincos(4, 2)),
            ],
            log2_prefactor: 0,
            subgroup: Some(Box::new(build_chart(GroupName::Spin7))),
            coset_dim: 7,
            redundancy_dim: 15,
        },
        GroupName::Spin9 => EulerChart {
            name,
            own: vec![
                own(plain(3), R_2PI, None),
                own(plain(16), R_2PI, None),
                own(plain(15), R_2PI, None),
                own(plain(35), R_PI, sin(1)),
                own(plain(5), R_SYM, cos(1)),
                own(plain(1), R_HALF, sincos(2, 1)),
                own(plain(30), R_HALF, sincos(2, 4)),
                own(plain(45), R_PI, sin(7)),
            ],
            log2_prefactor: 0,
            subgroup: Some(Box::new(build_chart(GroupName::Spin8))),
            coset_dim: 8,
            redundancy_dim: 21,
        },
        GroupName::F4 => EulerChart {
            name,
            own: vec![
                // B9 on the plain basis
                own(plain(3), R_2PI, None),
                own(plain(16), R_2PI, None),
                own(plain(15), R_2PI, None),
                own(plain(35), R_PI, sin(1)),
                own(plain(5), R_SYM, cos(1)),
                own(plain(1), R_HALF, sincos(2, 1)),
                own(plain(30), R_HALF, sincos(2, 4)),
                own(plain(45), R_PI, sin(7)),
                // B8 on the tilde basis
                own(tilde(3), R_2PI, None),
                own(tilde(16), R_2PI, None),
                own(tilde(15), R_2PI, None),
                own(tilde(35), R_PI, sin(1)),
                own(tilde(5), R_SYM, cos(1)),
                own(tilde(1), R_HALF, sincos(2, 1)),
                own(tilde(30), R_HALF, sincos(4, 2)),
                // the coset angle
                own(
                    plain(22),
                    R_PI,
                    Some(TrigFactor { sin_pow: 15, cos_pow: 7, half_angle: true }),
                ),
            ],
            log2_prefactor: 7,
            subgroup: Some(Box::new(build_chart(GroupName::Spin9))),
            coset_dim: 16,
            redundancy_dim: 21,
        },
    }
}

/// The chart for a group in the chain, built once per process.
pub fn chart(name: GroupName) -> &'static EulerChart {
    static CHARTS: OnceLock<HashMap<GroupName, EulerChart>> = OnceLock::new();
    let charts = CHARTS.get_or_init(|| {
        GroupName::ALL.iter().map(|&n| (n, build_chart(n))).collect()
    });
    &charts[&name]
}

/// Serialized chart form: {name, factors, ranges, subgroup}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChartSpec {
    pub name: String,
    pub factors: Vec<Factor>,
    pub ranges: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Box<ChartSpec>>,
}

impl EulerChart {
    pub fn to_spec(&self) -> ChartSpec {
        ChartSpec {
            name: self.name.to_string(),
            factors: self.own.iter().map(|c| c.factor).collect(),
            ranges: self.own.iter().map(|c| [c.range.lo(), c.range.hi()]).collect(),
            subgroup: self.subgroup.as_ref().map(|s| Box::new(s.to_spec())),
        }
    }

    /// Resolve a serialized chart against the canonical definition.
    pub fn from_spec(spec: &ChartSpec) -> Result<&'static EulerChart, ChartError> {
        let name: GroupName = spec.name.parse()?;
        let canonical = chart(name);
        let canonical_spec = canonical.to_spec();
        let matches = canonical_spec.factors == spec.factors
            && canonical_spec.ranges.len() == spec.ranges.len()
            && canonical_spec
                .ranges
                .iter()
                .zip(&spec.ranges)
                .all(|(a, b)| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12)
            && match (&canonical_spec.subgroup, &spec.subgroup) {
                (None, None) => true,
                (Some(a), Some(b)) => {
                    serde_json::to_string(a).unwrap() == serde_json::to_string(b).unwrap()
                }
                _ => false,
            };
        if matches {
            Ok(canonical)
        } else {
            Err(ChartError::SpecMismatch(name))
        }
    }
}

/// Numeric 26-dimensional generator data shared by evaluation, measures and
/// sampling.
pub struct NumericBasis {
    plain: Vec<DMatrix<f64>>,
    tilde: HashMap<usize, DMatrix<f64>>,
    exps: HashMap<Factor, FactorExp>,
    f_rotation: DMatrix<f64>,
}

pub const DIM26: usize = 26;

impl NumericBasis {
    fn build() -> Self {
        let basis = basis::canonical();
        let tilde_basis = basis.tilde_basis().expect("tilde basis valid");
        let plain: Vec<DMatrix<f64>> =
            (1..=GENERATORS).map(|i| basis.gen26(i).to_f64()).collect();
        let tilde: HashMap<usize, DMatrix<f64>> = tilde_basis
            .indices()
            .into_iter()
            .map(|i| (i, tilde_basis.get(i).to_f64()))
            .collect();
        let mut exps = HashMap::new();
        for i in 1..=GENERATORS {
            exps.insert(Factor { gen: i, tilde: false }, FactorExp::new(plain_mat(&plain, i).clone()));
        }
        for (&i, m) in &tilde {
            exps.insert(Factor { gen: i, tilde: true }, FactorExp::new(m.clone()));
        }
        let f_rotation = crate::algebra::f_rotation().to_f64();
        Self { plain, tilde, exps, f_rotation }
    }

    pub fn generator(&self, f: Factor) -> &DMatrix<f64> {
        if f.tilde {
            &self.tilde[&f.gen]
        } else {
            plain_mat(&self.plain, f.gen)
        }
    }

    pub fn factor_exp(&self, f: Factor) -> &FactorExp {
        &self.exps[&f]
    }

    /// <a, b> = -Tr(ab)/6 on 26x26 numeric matrices.
    pub fn inner(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        -(a * b).trace() / 6.0
    }

    /// Diagonal of the invariant form G in the 26-dim f-basis.
    pub fn form_weights(&self) -> [f64; DIM26] {
        let w = jordan::form_weights();
        std::array::from_fn(|k| w[k] as f64)
    }

    /// g^{-1} for a G-orthogonal matrix: G^{-1} g^T G.
    pub fn g_inverse(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        let w = self.form_weights();
        let gt = g.transpose();
        DMatrix::from_fn(DIM26, DIM26, |r, c| gt[(r, c)] * w[c] / w[r])
    }

    /// Largest entry of g^T G g - G; zero for form-preserving elements.
    pub fn orthogonality_defect(&self, g: &DMatrix<f64>) -> f64 {
        let w = self.form_weights();
        let mut defect: f64 = 0.0;
        for r in 0..DIM26 {
            for c in 0..DIM26 {
                let mut acc = 0.0;
                for k in 0..DIM26 {
                    acc += g[(k, r)] * w[k] * g[(k, c)];
                }
                let expect = if r == c { w[r] } else { 0.0 };
                defect = defect.max((acc - expect).abs());
            }
        }
        defect
    }

    /// Embed a 26-dim group element into the 27-dim e-basis representation.
    pub fn to_dim27(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        let mut padded = DMatrix::<f64>::identity(27, 27);
        padded.view_mut((0, 0), (DIM26, DIM26)).copy_from(g);
        self.f_rotation.transpose() * padded * &self.f_rotation
    }
}

fn plain_mat(v: &[DMatrix<f64>], i: usize) -> &DMatrix<f64> {
    &v[i - 1]
}

pub fn numeric() -> &'static NumericBasis {
    static NUMERIC: OnceLock<NumericBasis> = OnceLock::new();
    NUMERIC.get_or_init(NumericBasis::build)
}

/// A group element in the 26-dimensional representation with its chart
/// provenance.
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub matrix: DMatrix<f64>,
    pub chart: String,
    pub coords: Vec<f64>,
    pub in_range: bool,
}

impl GroupElement {
    pub fn trace26(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn to_dim27(&self) -> DMatrix<f64> {
        numeric().to_dim27(&self.matrix)
    }
}

/// exp(t c_i) or exp(t c~_i) as a group element.
pub fn exp_generator(gen: usize, tilde_flag: bool, t: f64) -> GroupElement {
    let nb = numeric();
    let f = Factor { gen, tilde: tilde_flag };
    GroupElement {
        matrix: nb.factor_exp(f).at(t),
        chart: format!("exp({})", if tilde_flag { format!("c~{gen}") } else { format!("c{gen}") }),
        coords: vec![t],
        in_range: true,
    }
}

/// Evaluate a chart at a coordinate point (left-to-right factor product).
/// Out-of-range points evaluate fine but are flagged.
pub fn evaluate(chart: &EulerChart, point: &[f64]) -> Result<GroupElement, ChartError> {
    if point.len() != chart.dim() {
        return Err(ChartError::DimensionMismatch { expected: chart.dim(), got: point.len() });
    }
    let nb = numeric();
    let mut m = DMatrix::<f64>::identity(DIM26, DIM26);
    for (coord, &x) in chart.flatten().iter().zip(point) {
        m = m * nb.factor_exp(coord.factor).at(x);
    }
    Ok(GroupElement {
        matrix: m,
        chart: chart.name.to_string(),
        coords: point.to_vec(),
        in_range: chart.in_range(point),
    })
}

/// The full d x d Maurer-Cartan Jacobian of a chart: column i holds the
/// trace_inner coordinates of g^{-1} d_i g = Ad(T_i^{-1}) X_i, where T_i is
/// the product of the factors following factor i.
pub fn maurer_cartan_jacobian(
    chart: &EulerChart,
    point: &[f64],
) -> Result<DMatrix<f64>, ChartError> {
    if point.len() != chart.dim() {
        return Err(ChartError::DimensionMismatch { expected: chart.dim(), got: point.len() });
    }
    let nb = numeric();
    let indices = chart.name.algebra_indices();
    let coords = chart.flatten();
    let d = chart.dim();
    let mut jac = DMatrix::<f64>::zeros(d, d);
    let mut tail = DMatrix::<f64>::identity(DIM26, DIM26);
    for i in (0..d).rev() {
        let x = nb.generator(coords[i].factor);
        let ad = nb.g_inverse(&tail) * x * &tail;
        for (row, &k) in indices.iter().enumerate() {
            jac[(row, i)] = nb.inner(&ad, plain_mat(&nb.plain, k));
        }
        tail = nb.factor_exp(coords[i].factor).at(point[i]) * tail;
    }
    Ok(jac)
}

/// The 16 x 16 coset block of the F4 chart: the first sixteen factors
/// (B_F4 and the c22 angle), with columns projected onto the P basis
/// {c22..c29, c37..c44}.
pub fn f4_coset_jacobian(point: &[f64]) -> Result<DMatrix<f64>, ChartError> {
    if point.len() != 16 {
        return Err(ChartError::DimensionMismatch { expected: 16, got: point.len() });
    }
    let nb = numeric();
    let f4 = chart(GroupName::F4);
    let coords = &f4.own;
    debug_assert_eq!(coords.len(), 16);
    let p_indices = basis::p_space_indices();
    let mut jac = DMatrix::<f64>::zeros(16, 16);
    let mut tail = DMatrix::<f64>::identity(DIM26, DIM26);
    for i in (0..16).rev() {
        let x = nb.generator(coords[i].factor);
        let ad = nb.g_inverse(&tail) * x * &tail;
        for (row, &k) in p_indices.iter().enumerate() {
            jac[(row, i)] = nb.inner(&ad, plain_mat(&nb.plain, k));
        }
        tail = nb.factor_exp(coords[i].factor).at(point[i]) * tail;
    }
    Ok(jac)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_dimensions() {
        let dims: Vec<usize> = GroupName::ALL.iter().map(|&n| chart(n).dim()).collect();
        assert_eq!(dims, vec![3, 6, 10, 15, 21, 28, 36, 52]);
        assert_eq!(chart(GroupName::F4).coset_dim, 16);
    }

    #[test]
    fn redundancy_formula() {
        // r = 2m + k - n with m = dim(subgroup chain H), k = dim V = 1
        // (for SU2 the U(1) tail plays H with m = 1)
        let expected = [
            (GroupName::Su2, 3, 1, 1),
            (GroupName::Spin4, 6, 3, 1),
            (GroupName::Spin5, 10, 6, 1),
            (GroupName::Spin6, 15, 10, 1),
            (GroupName::Spin7, 21, 15, 1),
            (GroupName::Spin8, 28, 21, 1),
            (GroupName::Spin9, 36, 28, 1),
            (GroupName::F4, 52, 36, 1),
        ];
        for (name, n, m, k) in expected {
            let r = (2usize * m + k).checked_sub(n).unwrap();
            assert_eq!(chart(name).redundancy_dim, r, "{name}");
        }
    }

    #[test]
    fn su2_ranges() {
        let c = chart(GroupName::Su2);
        let ranges = c.ranges();
        assert_eq!(ranges[0], RangeSpec::new(0, 4));
        assert_eq!(ranges[1], RangeSpec::new(0, 2));
        assert_eq!(ranges[2], RangeSpec::new(0, 8));
    }

    #[test]
    fn f4_ranges_match_the_published_list() {
        let c = chart(GroupName::F4);
        let r: Vec<(i8, i8)> = c
            .own
            .iter()
            .map(|o| (o.range.lo_half_pis, o.range.hi_half_pis))
            .collect();
        assert_eq!(
            r,
            vec![
                (0, 4),
                (0, 4),
                (0, 4),
                (0, 2),
                (-1, 1),
                (0, 1),
                (0, 1),
                (0, 2),
                (0, 4),
                (0, 4),
                (0, 4),
                (0, 2),
                (-1, 1),
                (0, 1),
                (0, 1),
                (0, 2),
            ]
        );
    }

    #[test]
    fn evaluate_at_origin_is_identity() {
        let c = chart(GroupName::Su2);
        let g = evaluate(c, &[0.0, 0.0, 0.0]).unwrap();
        assert!((&g.matrix - DMatrix::<f64>::identity(DIM26, DIM26)).abs().max() < 1e-14);
        assert!(g.in_range);
    }

    #[test]
    fn su2_collapses_when_middle_angle_vanishes() {
        let c = chart(GroupName::Su2);
        let a = evaluate(c, &[0.7, 0.0, 1.9]).unwrap();
        let b = evaluate(c, &[2.6, 0.0, 0.0]).unwrap();
        assert!((&a.matrix - &b.matrix).abs().max() < 1e-10);
    }

    #[test]
    fn out_of_range_is_flagged() {
        let c = chart(GroupName::Su2);
        let g = evaluate(c, &[7.0, 0.5, 1.0]).unwrap();
        assert!(!g.in_range);
    }

    #[test]
    fn wrong_dimension_is_an_error() {
        let c = chart(GroupName::Spin4);
        assert!(matches!(
            evaluate(c, &[0.0; 3]),
            Err(ChartError::DimensionMismatch { expected: 6, got: 3 })
        ));
    }

    #[test]
    fn exp_generator_period_and_identity() {
        let id = DMatrix::<f64>::identity(DIM26, DIM26);
        assert!((&exp_generator(1, false, 0.0).matrix - &id).abs().max() < 1e-14);
        let four_pi = 4.0 * std::f64::consts::PI;
        assert!((&exp_generator(1, false, four_pi).matrix - &id).abs().max() < 1e-10);
    }

    #[test]
    fn full_turns_absorb_into_the_spin9_factor() {
        // the 2pi turns that let the chart ranges shrink from 4pi to 2pi:
        // a tilde so(7) turn commutes with c22 and with every tilde
        // generator; a plain so(7) turn is central in Spin(9) and commutes
        // with every tilde generator (it reflects c22 instead, which folds
        // into the x16 range)
        let nb = numeric();
        let two_pi = 2.0 * std::f64::consts::PI;
        let c22 = nb.generator(Factor { gen: 22, tilde: false });

        let zt = exp_generator(3, true, two_pi).matrix;
        assert!((&zt * c22 - c22 * &zt).abs().max() < 1e-10);
        for i in (1..=21).chain(30..=36) {
            let t = nb.generator(Factor { gen: i, tilde: true });
            assert!((&zt * t - t * &zt).abs().max() < 1e-10, "tilde turn vs c~_{i}");
        }

        let zp = exp_generator(3, false, two_pi).matrix;
        for i in GroupName::Spin9.algebra_indices() {
            let c = nb.generator(Factor { gen: i, tilde: false });
            assert!((&zp * c - c * &zp).abs().max() < 1e-10, "plain turn vs c_{i}");
        }
        for i in (1..=21).chain(30..=36) {
            let t = nb.generator(Factor { gen: i, tilde: true });
            assert!((&zp * t - t * &zp).abs().max() < 1e-10, "plain turn vs c~_{i}");
        }
        // the plain turn reflects c22
        let zp_inv = nb.g_inverse(&zp);
        assert!((&zp * c22 * zp_inv + c22).abs().max() < 1e-10);
    }

    #[test]
    fn spin9_fixes_the_rotated_e1() {
        // f-coordinates of e1: components 1/sqrt2 and 1/sqrt6 at slots 1, 18
        let mut v = nalgebra::DVector::<f64>::zeros(DIM26);
        v[0] = 1.0 / 2f64.sqrt();
        v[17] = 1.0 / 6f64.sqrt();
        let c = chart(GroupName::Spin9);
        let point: Vec<f64> = (0..c.dim()).map(|i| 0.1 + 0.17 * i as f64).collect();
        let g = evaluate(c, &point).unwrap();
        assert!((&g.matrix * &v - &v).abs().max() < 1e-10);
    }

    #[test]
    fn group_elements_preserve_the_form() {
        let nb = numeric();
        let c = chart(GroupName::F4);
        let point: Vec<f64> = (0..52).map(|i| (i as f64 * 0.37).sin().abs()).collect();
        let g = evaluate(c, &point).unwrap();
        assert!(nb.orthogonality_defect(&g.matrix) < 1e-10);
        let det = g.matrix.determinant();
        assert!((det.abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn chart_spec_round_trip() {
        for name in GroupName::ALL {
            let c = chart(name);
            let spec = c.to_spec();
            let json = serde_json::to_string(&spec).unwrap();
            let back: ChartSpec = serde_json::from_str(&json).unwrap();
            let resolved = EulerChart::from_spec(&back).unwrap();
            assert_eq!(resolved, c);
        }
    }

    #[test]
    fn adjoint_rotation_of_c22() {
        // exp(-2x c_i) c22 exp(2x c_i) = cos x c22 +- sin x c_j with the
        // partner and sign read from the structure table
        let nb = numeric();
        let table = basis::canonical().table();
        let x = 0.7321;
        for i in (30..=36).chain(45..=52) {
            let bracket = table.bracket(i, 22);
            assert_eq!(bracket.len(), 1, "c_{i}");
            let (j, coeff) = bracket[0].clone();
            // d/dx at 0 of e^{-2xc_i} c22 e^{2xc_i} is -2 [c_i, c22]
            let sign = -2.0 * crate::scalar::rational_to_f64(&coeff);
            let g = exp_generator(i, false, -2.0 * x).matrix;
            let ginv = nb.g_inverse(&g);
            let c22 = nb.generator(Factor { gen: 22, tilde: false });
            let cj = nb.generator(Factor { gen: j, tilde: false });
            let rotated = &g * c22 * ginv;
            let expect = c22 * x.cos() + cj * (sign * x.sin());
            assert!((&rotated - &expect).abs().max() < 1e-10, "i = {i}, j = {j}");
        }
    }
}
