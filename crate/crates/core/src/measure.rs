//! Closed-form invariant measure densities and exact group volumes.
//!
//! Every chart density is a product of one-dimensional sin^a cos^b factors
//! (one of them in the half angle), so volumes reduce to Beta-type integrals
//! with half-integer Gamma values. Those are carried symbolically as
//! rational * sqrt(pi)^e, and every final volume is an exact rational times
//! an integer power of pi.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::euler::{chart, EulerChart, GroupName, RangeSpec, TrigFactor};
use crate::fixtures::{FixtureFile, FixtureSet};
use crate::scalar::{rat, Rational};

#[derive(Debug, thiserror::Error)]
pub enum MeasureError {
    #[error("unsupported integration range [{0}, {1}] (in units of pi/2)")]
    UnsupportedRange(i8, i8),
    #[error("point is outside the chart ranges at coordinate {0}")]
    OutOfRange(usize),
    #[error("point has wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("volume fixture parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("odd power of sqrt(pi) survived integration")]
    StraySqrtPi,
    #[error("betti data for {group} inconsistent: {reason}")]
    BadBetti { group: String, reason: String },
}

/// An exact value q * pi^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiValue {
    pub coeff: Rational,
    pub pi_power: u32,
}

impl PiValue {
    pub fn rational(coeff: Rational) -> Self {
        Self { coeff, pi_power: 0 }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            coeff: &self.coeff * &other.coeff,
            pi_power: self.pi_power + other.pi_power,
        }
    }

    pub fn to_f64(&self) -> f64 {
        crate::scalar::rational_to_f64(&self.coeff)
            * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

impl fmt::Display for PiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_power == 0 {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{} * pi^{}", self.coeff, self.pi_power)
        }
    }
}

/// rational * sqrt(pi)^e with e in {0,1}; products carry e mod 2 into pi
/// powers.
#[derive(Debug, Clone)]
struct HalfGamma {
    coeff: Rational,
    sqrt_pi: bool,
}

/// Gamma(n/2) for n >= 1.
fn gamma_half(n: u32) -> HalfGamma {
    assert!(n >= 1);
    if n % 2 == 0 {
        // (n/2 - 1)!
        let mut acc = Rational::one();
        for k in 2..=(n / 2).saturating_sub(1) {
            acc *= rat(k as i64, 1);
        }
        HalfGamma { coeff: acc, sqrt_pi: false }
    } else {
        // Gamma(1/2) = sqrt(pi); Gamma(x+1) = x Gamma(x)
        let mut acc = Rational::one();
        let mut arg = rat(1, 2);
        while arg < rat(n as i64, 2) {
            acc *= arg.clone();
            arg += Rational::one();
        }
        HalfGamma { coeff: acc, sqrt_pi: true }
    }
}

/// Exact integral of sin^a x cos^b x over [0, pi/2]:
/// Gamma((a+1)/2) Gamma((b+1)/2) / (2 Gamma((a+b+2)/2)).
fn quarter_integral(a: u32, b: u32) -> Result<PiValue, MeasureError> {
    let g1 = gamma_half(a + 1);
    let g2 = gamma_half(b + 1);
    let g3 = gamma_half(a + b + 2);
    let mut sqrt_pi_power = 0i32;
    for flag in [g1.sqrt_pi, g2.sqrt_pi] {
        if flag {
            sqrt_pi_power += 1;
        }
    }
    if g3.sqrt_pi {
        sqrt_pi_power -= 1;
    }
    let coeff = g1.coeff * g2.coeff / (g3.coeff * rat(2, 1));
    match sqrt_pi_power {
        0 => Ok(PiValue { coeff, pi_power: 0 }),
        2 => Ok(PiValue { coeff, pi_power: 1 }),
        _ => Err(MeasureError::StraySqrtPi),
    }
}

/// Exact integral of sin^a x cos^b x (optionally of the half angle) over a
/// chart range.
pub fn trig_integral(
    a: u32,
    b: u32,
    range: RangeSpec,
    half_angle: bool,
) -> Result<PiValue, MeasureError> {
    let (lo, hi) = (range.lo_half_pis, range.hi_half_pis);
    if half_angle {
        // substitute u = x/2: the only occurring case is [0, pi] -> [0, pi/2]
        if (lo, hi) == (0, 2) {
            let base = quarter_integral(a, b)?;
            return Ok(PiValue { coeff: base.coeff * rat(2, 1), pi_power: base.pi_power });
        }
        return Err(MeasureError::UnsupportedRange(lo, hi));
    }
    let base = quarter_integral(a, b)?;
    let factor = |cond: bool| if cond { rat(2, 1) } else { rat(0, 1) };
    let value = match (lo, hi) {
        (0, 1) => base.coeff,
        // [0, pi] doubles even-cos contributions
        (0, 2) => base.coeff * factor(b % 2 == 0),
        // [-pi/2, pi/2] doubles even-sin contributions
        (-1, 1) => base.coeff * factor(a % 2 == 0),
        // [0, 2pi] and [0, 4pi]
        (0, 4) => base.coeff * factor(b % 2 == 0) * factor((a + b) % 2 == 0),
        (0, 8) => base.coeff * factor(b % 2 == 0) * factor((a + b) % 2 == 0) * rat(2, 1),
        _ => return Err(MeasureError::UnsupportedRange(lo, hi)),
    };
    Ok(PiValue { coeff: value, pi_power: base.pi_power })
}

/// The density specification of a chart's own block: coordinate index
/// (0-based within the chart), trig factor, plus the power-of-two prefactor.
#[derive(Debug, Clone)]
pub struct DensitySpec {
    pub factors: Vec<(usize, TrigFactor)>,
    pub prefactor: Rational,
}

pub fn density_spec(chart: &EulerChart) -> DensitySpec {
    DensitySpec {
        factors: chart
            .own
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.trig.map(|t| (i, t)))
            .collect(),
        prefactor: rat(2, 1).pow(chart.log2_prefactor as i32),
    }
}

/// Density of the invariant measure at an in-range point (recursive product
/// over the chart's own factors and its subgroup chart).
pub fn density(chart: &EulerChart, point: &[f64]) -> Result<f64, MeasureError> {
    if point.len() != chart.dim() {
        return Err(MeasureError::WrongDimension { expected: chart.dim(), got: point.len() });
    }
    for (i, (c, &x)) in chart.flatten().iter().zip(point).enumerate() {
        if !c.range.contains(x) {
            return Err(MeasureError::OutOfRange(i));
        }
    }
    Ok(density_unchecked(chart, point))
}

fn density_unchecked(chart: &EulerChart, point: &[f64]) -> f64 {
    let mut acc = 2f64.powi(chart.log2_prefactor as i32);
    for (c, &x) in chart.own.iter().zip(point) {
        if let Some(trig) = &c.trig {
            acc *= trig.eval(x);
        }
    }
    if let Some(sub) = &chart.subgroup {
        acc *= density_unchecked(sub, &point[chart.own.len()..]);
    }
    acc
}

/// Density of the chart's own block only (no subgroup recursion), e.g. the
/// F4 coset density d mu_M on the first sixteen coordinates.
pub fn own_density(chart: &EulerChart, point: &[f64]) -> f64 {
    let mut acc = 2f64.powi(chart.log2_prefactor as i32);
    for (c, &x) in chart.own.iter().zip(point) {
        if let Some(trig) = &c.trig {
            acc *= trig.eval(x);
        }
    }
    acc
}

/// Exact volume of the chart's own block: trig integrals for measure-bearing
/// coordinates, range lengths for the free ones.
pub fn own_volume(chart: &EulerChart) -> Result<PiValue, MeasureError> {
    let mut acc = PiValue::rational(rat(2, 1).pow(chart.log2_prefactor as i32));
    for c in &chart.own {
        let contribution = match &c.trig {
            Some(t) => trig_integral(t.sin_pow, t.cos_pow, c.range, t.half_angle)?,
            None => PiValue { coeff: c.range.length_pi_multiple(), pi_power: 1 },
        };
        acc = acc.mul(&contribution);
    }
    Ok(acc)
}

/// Exact total volume: own block times the subgroup volume, recursively.
pub fn chart_volume(chart: &EulerChart) -> Result<PiValue, MeasureError> {
    let mut acc = own_volume(chart)?;
    if let Some(sub) = &chart.subgroup {
        acc = acc.mul(&chart_volume(sub)?);
    }
    Ok(acc)
}

/// One row of the closed-form volume table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolumeFixture {
    pub group: String,
    pub betti: Vec<u32>,
    pub volume: VolumeValue,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolumeValue {
    pub rational: String,
    pub pi_power: u32,
}

impl VolumeFixture {
    pub fn pi_value(&self) -> Result<PiValue, MeasureError> {
        let coeff: Rational = self
            .rational_parsed()
            .map_err(|e| MeasureError::BadBetti { group: self.group.clone(), reason: e })?;
        Ok(PiValue { coeff, pi_power: self.volume.pi_power })
    }

    fn rational_parsed(&self) -> Result<Rational, String> {
        self.volume.rational.parse().map_err(|_| format!("bad rational {}", self.volume.rational))
    }
}

pub fn load_volume_fixtures(fixtures: &FixtureSet) -> Result<Vec<VolumeFixture>, MeasureError> {
    let rows: Vec<VolumeFixture> = serde_json::from_str(fixtures.get(FixtureFile::Volumes))?;
    // Betti sanity: the rational homology is that of a product of
    // odd-dimensional spheres S^{d_1} x ... x S^{d_r} with sum d_i = dim G
    // and r = rank
    for row in &rows {
        let name: GroupName = row
            .group
            .parse()
            .map_err(|_| MeasureError::BadBetti {
                group: row.group.clone(),
                reason: "unknown group".into(),
            })?;
        let dim: u32 = name.dim() as u32;
        let rank = match name {
            GroupName::Su2 => 1,
            GroupName::Spin4 | GroupName::Spin5 => 2,
            GroupName::Spin6 | GroupName::Spin7 => 3,
            GroupName::Spin8 | GroupName::Spin9 | GroupName::F4 => 4,
        };
        if row.betti.iter().sum::<u32>() != dim {
            return Err(MeasureError::BadBetti {
                group: row.group.clone(),
                reason: format!("betti dims sum to {} != {}", row.betti.iter().sum::<u32>(), dim),
            });
        }
        if row.betti.len() != rank {
            return Err(MeasureError::BadBetti {
                group: row.group.clone(),
                reason: format!("betti count {} != rank {}", row.betti.len(), rank),
            });
        }
        if row.betti.iter().any(|d| d % 2 == 0) {
            return Err(MeasureError::BadBetti {
                group: row.group.clone(),
                reason: "even sphere dimension".into(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct VolumeReport {
    pub group: GroupName,
    pub computed: PiValue,
    pub fixture: PiValue,
    pub pass: bool,
}

/// Compare every chart volume with the closed-form table, exactly.
pub fn verify_volumes(fixtures: &FixtureSet) -> Result<Vec<VolumeReport>, MeasureError> {
    let rows = load_volume_fixtures(fixtures)?;
    let mut reports = Vec::new();
    for row in rows {
        let group: GroupName = row.group.parse().expect("validated above");
        let computed = chart_volume(chart(group))?;
        let fixture = row.pi_value()?;
        let pass = computed == fixture;
        reports.push(VolumeReport { group, computed, fixture, pass });
    }
    Ok(reports)
}

/// Format a volume the way the table prints it: 2^a/(3^b 5^c ...) * pi^k.
pub fn format_factored(v: &PiValue) -> String {
    let numer = v.coeff.numer().clone();
    let denom = v.coeff.denom().clone();
    let fact = |n: num_bigint::BigInt| -> String {
        let mut n = n.abs();
        let mut parts = Vec::new();
        for p in [2u32, 3, 5, 7, 11, 13] {
            let big = num_bigint::BigInt::from(p);
            let mut pow = 0;
            while (&n % &big).is_zero() {
                n /= &big;
                pow += 1;
            }
            if pow == 1 {
                parts.push(format!("{p}"));
            } else if pow > 1 {
                parts.push(format!("{p}^{pow}"));
            }
        }
        if !n.is_one() {
            parts.push(n.to_string());
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    };
    let sign = if v.coeff.is_negative() { "-" } else { "" };
    let num_s = fact(numer);
    let den_s = fact(denom);
    let frac = if den_s == "1" { num_s } else { format!("{num_s}/({den_s})") };
    if v.pi_power == 0 {
        format!("{sign}{frac}")
    } else {
        format!("{sign}{frac} * pi^{}", v.pi_power)
    }
}
