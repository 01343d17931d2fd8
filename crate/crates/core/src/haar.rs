//! Haar-distributed sampling through the Euler charts.
//!
//! Every chart density factorizes per coordinate, so Haar sampling reduces to
//! independent one-dimensional draws: uniform for measure-free coordinates,
//! inverse-CDF for the sin^a cos^b factors. The CDF comes from the exact
//! elementary antiderivative; a precomputed forward table supplies the
//! initial bracket and monotone cubic guess, and a safeguarded Newton
//! iteration polishes to 1e-12 in CDF space.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::euler::{chart, evaluate, EulerChart, GroupElement, GroupName, TrigFactor};

#[derive(Debug, thiserror::Error)]
pub enum HaarError {
    #[error("chart error: {0}")]
    Chart(#[from] crate::euler::ChartError),
    #[error("csv write error: {0}")]
    Io(#[from] std::io::Error),
}

/// The sampling RNG: counter-based stream cipher, reproducible from
/// (seed, stream).
pub type HaarRng = ChaCha12Rng;

pub const RNG_ALGORITHM: &str = "chacha12";

pub fn rng_for(seed: u64, stream: u64) -> HaarRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Antiderivative P(x) of sin^a x cos^b x (so the CDF on [lo, x] is
/// P(x) - P(lo)), by the textbook reduction in the cosine power and then in
/// the sine power.
fn primitive(a: u32, b: u32, x: f64) -> f64 {
    if b >= 2 {
        let head = x.sin().powi(a as i32 + 1) * x.cos().powi(b as i32 - 1) / (a + b) as f64;
        head + (b - 1) as f64 / (a + b) as f64 * primitive(a, b - 2, x)
    } else if b == 1 {
        x.sin().powi(a as i32 + 1) / (a + 1) as f64
    } else if a >= 2 {
        let head = -x.sin().powi(a as i32 - 1) * x.cos() / a as f64;
        head + (a - 1) as f64 / a as f64 * primitive(a - 2, 0, x)
    } else if a == 1 {
        -x.cos()
    } else {
        x
    }
}

/// CDF of the (unnormalized) trig factor on [lo, x].
fn trig_cdf(t: &TrigFactor, lo: f64, x: f64) -> f64 {
    if t.half_angle {
        2.0 * (primitive(t.sin_pow, t.cos_pow, x / 2.0) - primitive(t.sin_pow, t.cos_pow, lo / 2.0))
    } else {
        primitive(t.sin_pow, t.cos_pow, x) - primitive(t.sin_pow, t.cos_pow, lo)
    }
}

fn trig_pdf(t: &TrigFactor, x: f64) -> f64 {
    t.eval(x)
}

const TABLE_NODES: usize = 4096;

/// Per-coordinate sampler.
enum CoordSampler {
    Uniform {
        lo: f64,
        hi: f64,
    },
    InverseCdf {
        trig: TrigFactor,
        lo: f64,
        hi: f64,
        /// forward CDF at TABLE_NODES+1 equally spaced x nodes
        table: Vec<f64>,
        total: f64,
    },
}

impl CoordSampler {
    fn for_coordinate(c: &crate::euler::OwnCoordinate) -> Self {
        let (lo, hi) = (c.range.lo(), c.range.hi());
        match &c.trig {
            None => CoordSampler::Uniform { lo, hi },
            Some(t) => {
                let table: Vec<f64> = (0..=TABLE_NODES)
                    .map(|k| {
                        let x = lo + (hi - lo) * k as f64 / TABLE_NODES as f64;
                        trig_cdf(t, lo, x)
                    })
                    .collect();
                let total = *table.last().unwrap();
                CoordSampler::InverseCdf { trig: *t, lo, hi, table, total }
            }
        }
    }

    fn sample(&self, rng: &mut HaarRng) -> f64 {
        match self {
            CoordSampler::Uniform { lo, hi } => rng.gen_range(*lo..*hi),
            CoordSampler::InverseCdf { trig, lo, hi, table, total } => {
                let target = rng.gen_range(0.0..1.0) * total;
                // bracket from the table
                let mut a = table.partition_point(|v| *v < target);
                a = a.clamp(1, TABLE_NODES);
                let step = (hi - lo) / TABLE_NODES as f64;
                let (mut xa, mut xb) = (lo + (a - 1) as f64 * step, lo + a as f64 * step);
                let (fa, fb) = (table[a - 1] - target, table[a] - target);
                // monotone cubic Hermite inversion on the bracket segment:
                // secant start, two Newton steps on the interpolant
                let mut x = if fb > fa {
                    let d0 = trig_pdf(trig, xa) * step;
                    let d1 = trig_pdf(trig, xb) * step;
                    let mut t = (-fa / (fb - fa)).clamp(0.0, 1.0);
                    for _ in 0..2 {
                        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
                        let h10 = t * (1.0 - t) * (1.0 - t);
                        let h01 = t * t * (3.0 - 2.0 * t);
                        let h11 = t * t * (t - 1.0);
                        let value = fa * h00 + d0 * h10 + fb * h01 + d1 * h11;
                        let slope = 6.0 * t * (t - 1.0) * (fa - fb)
                            + d0 * (1.0 - t) * (1.0 - 3.0 * t)
                            + d1 * t * (3.0 * t - 2.0);
                        if slope > 0.0 {
                            t = (t - value / slope).clamp(0.0, 1.0);
                        }
                    }
                    xa + t * step
                } else {
                    0.5 * (xa + xb)
                };
                // safeguarded Newton on F(x) - target
                for _ in 0..60 {
                    let f = trig_cdf(trig, *lo, x) - target;
                    if f.abs() <= 1e-12 * total {
                        break;
                    }
                    if f > 0.0 {
                        xb = x;
                    } else {
                        xa = x;
                    }
                    let d = trig_pdf(trig, x);
                    let newton = x - f / d;
                    x = if d > 0.0 && newton > xa && newton < xb {
                        newton
                    } else {
                        0.5 * (xa + xb)
                    };
                }
                x.clamp(*lo, *hi)
            }
        }
    }
}

/// Samples Haar-distributed coordinate vectors for one chart.
pub struct ChartSampler {
    chart: &'static EulerChart,
    samplers: Vec<CoordSampler>,
}

impl ChartSampler {
    pub fn new(name: GroupName) -> Self {
        let chart = chart(name);
        let samplers = chart.flatten().into_iter().map(CoordSampler::for_coordinate).collect();
        Self { chart, samplers }
    }

    pub fn chart(&self) -> &'static EulerChart {
        self.chart
    }

    pub fn sample_coordinates(&self, rng: &mut HaarRng) -> Vec<f64> {
        self.samplers.iter().map(|s| s.sample(rng)).collect()
    }

    pub fn sample_group(&self, rng: &mut HaarRng) -> GroupElement {
        let coords = self.sample_coordinates(rng);
        evaluate(self.chart, &coords).expect("sampled point has chart dimension")
    }
}

/// Convenience: one Haar sample of the named group.
pub fn sample_group(name: GroupName, rng: &mut HaarRng) -> GroupElement {
    ChartSampler::new(name).sample_group(rng)
}

/// Monte Carlo character moments of the 26-dim representation.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterStats {
    pub group: String,
    pub count: usize,
    pub mean_trace: f64,
    pub mean_trace_sq: f64,
    pub se_mean_trace: f64,
    pub se_mean_trace_sq: f64,
    /// mean of the 27-dim trace (= mean_trace + 1), for reference
    pub mean_trace27: f64,
}

pub fn character_stats(name: GroupName, n: usize, rng: &mut HaarRng) -> CharacterStats {
    let sampler = ChartSampler::new(name);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut sum_4 = 0.0;
    for _ in 0..n {
        let t = sampler.sample_group(rng).trace26();
        sum += t;
        sum_sq += t * t;
        sum_4 += t * t * t * t;
    }
    let mean = sum / n as f64;
    let mean_sq = sum_sq / n as f64;
    let var = (mean_sq - mean * mean).max(0.0);
    let mean_4 = sum_4 / n as f64;
    let var_sq = (mean_4 - mean_sq * mean_sq).max(0.0);
    CharacterStats {
        group: name.to_string(),
        count: n,
        mean_trace: mean,
        mean_trace_sq: mean_sq,
        se_mean_trace: (var / n as f64).sqrt(),
        se_mean_trace_sq: (var_sq / n as f64).sqrt(),
        mean_trace27: mean + 1.0,
    }
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(xs: &mut [f64], ys: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let mut d: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < n && j < m {
        let v = xs[i].min(ys[j]);
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub group: String,
    pub count: usize,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Left-invariance check: the trace distributions of {g_k} and {h g_k} are
/// compared with a two-sample KS test at significance 0.01.
pub fn invariance_test(
    name: GroupName,
    h: &GroupElement,
    n: usize,
    rng: &mut HaarRng,
) -> InvarianceReport {
    let sampler = ChartSampler::new(name);
    let mut plain = Vec::with_capacity(n);
    let mut shifted = Vec::with_capacity(n);
    for _ in 0..n {
        let g = sampler.sample_group(rng);
        plain.push(g.trace26());
        shifted.push((&h.matrix * &g.matrix).trace());
    }
    let statistic = ks_statistic(&mut plain, &mut shifted);
    // c(0.01) = 1.628 for the two-sample test
    let threshold = 1.628 * ((n + n) as f64 / (n * n) as f64).sqrt();
    InvarianceReport {
        group: name.to_string(),
        count: n,
        statistic,
        threshold,
        pass: statistic <= threshold,
    }
}

/// A batch of Haar samples with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct SampleBatch {
    pub group: String,
    pub count: usize,
    pub seed: u64,
    pub stream: u64,
    pub rng: &'static str,
    pub traces: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<Vec<f64>>>,
}

impl SampleBatch {
    pub fn collect(
        name: GroupName,
        n: usize,
        seed: u64,
        stream: u64,
        keep_coordinates: bool,
    ) -> Self {
        let sampler = ChartSampler::new(name);
        let mut rng = rng_for(seed, stream);
        let mut traces = Vec::with_capacity(n);
        let mut coordinates = keep_coordinates.then(|| Vec::with_capacity(n));
        for _ in 0..n {
            let coords = sampler.sample_coordinates(&mut rng);
            let g = evaluate(sampler.chart(), &coords).expect("dimension");
            traces.push(g.trace26());
            if let Some(cs) = &mut coordinates {
                cs.push(coords);
            }
        }
        Self {
            group: name.to_string(),
            count: n,
            seed,
            stream,
            rng: RNG_ALGORITHM,
            traces,
            coordinates,
        }
    }

    /// CSV rows: seed, stream, sample index, trace26 and optionally the
    /// chart coordinates.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let dim = self.coordinates.as_ref().map_or(0, |c| c.first().map_or(0, Vec::len));
        write!(w, "seed,stream,index,trace26")?;
        for i in 1..=dim {
            write!(w, ",x{i}")?;
        }
        writeln!(w)?;
        for (idx, t) in self.traces.iter().enumerate() {
            write!(w, "{},{},{},{:.17e}", self.seed, self.stream, idx, t)?;
            if let Some(cs) = &self.coordinates {
                for x in &cs[idx] {
                    write!(w, ",{x:.17e}")?;
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn su2_polar_marginal_matches_analytic_cdf() {
        // x2 has density sin(x)/2 on [0, pi]: CDF (1 - cos x)/2
        let sampler = ChartSampler::new(GroupName::Su2);
        let mut rng = rng_for(11, 0);
        let n = 100_000;
        let mut xs: Vec<f64> =
            (0..n).map(|_| sampler.sample_coordinates(&mut rng)[1]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d: f64 = 0.0;
        for (k, x) in xs.iter().enumerate() {
            let cdf = (1.0 - x.cos()) / 2.0;
            d = d.max((cdf - k as f64 / n as f64).abs());
            d = d.max((cdf - (k + 1) as f64 / n as f64).abs());
        }
        assert!(d < 1.95 / (n as f64).sqrt(), "KS statistic {d}");
        let mean = xs.iter().sum::<f64>() / n as f64;
        // Var(x2) = pi^2/4 - 2
        let se = (PI * PI / 4.0 - 2.0).sqrt() / (n as f64).sqrt();
        assert!((mean - PI / 2.0).abs() < 4.0 * se);
    }

    #[test]
    fn f4_coset_angle_mode() {
        // density ~ cos^7(x/2) sin^15(x/2): mode at 2 atan(sqrt(15/7))
        let sampler = ChartSampler::new(GroupName::F4);
        let mut rng = rng_for(23, 0);
        let n = 200_000;
        let mut hist = [0usize; 64];
        for _ in 0..n {
            let x = sampler.sample_coordinates(&mut rng)[15];
            let bin = ((x / PI) * 64.0) as usize;
            hist[bin.min(63)] += 1;
        }
        let best = hist.iter().enumerate().max_by_key(|(_, c)| **c).unwrap().0;
        let mode = (best as f64 + 0.5) * PI / 64.0;
        let expect = 2.0 * (15f64 / 7.0).sqrt().atan();
        assert!((mode - expect).abs() < 3.0 * PI / 64.0, "mode {mode} vs {expect}");
    }

    #[test]
    fn sampled_coordinates_stay_in_range() {
        for name in [GroupName::Su2, GroupName::Spin5, GroupName::F4] {
            let sampler = ChartSampler::new(name);
            let ranges = sampler.chart().ranges();
            let mut rng = rng_for(3, 7);
            for _ in 0..200 {
                let coords = sampler.sample_coordinates(&mut rng);
                for (r, &x) in ranges.iter().zip(&coords) {
                    assert!(r.contains(x));
                }
                let d = crate::measure::density(sampler.chart(), &coords).unwrap();
                assert!(d > 0.0);
            }
        }
    }

    #[test]
    fn equal_seeds_reproduce_equal_elements() {
        let a = sample_group(GroupName::Spin4, &mut rng_for(99, 1));
        let b = sample_group(GroupName::Spin4, &mut rng_for(99, 1));
        assert_eq!(a.matrix, b.matrix);
        let c = sample_group(GroupName::Spin4, &mut rng_for(99, 2));
        assert_ne!(a.matrix, c.matrix);
    }

    #[test]
    fn samples_preserve_the_form_and_compose() {
        let nb = crate::euler::numeric();
        let mut rng = rng_for(42, 0);
        let g = sample_group(GroupName::F4, &mut rng);
        let h = sample_group(GroupName::F4, &mut rng);
        assert!(nb.orthogonality_defect(&g.matrix) < 1e-9);
        assert!(nb.orthogonality_defect(&(&g.matrix * &h.matrix)) < 1e-9);
    }

    #[test]
    fn ks_statistic_of_identical_samples_is_zero() {
        let mut a = vec![0.3, 0.1, 0.7, 0.5];
        let mut b = a.clone();
        assert_eq!(ks_statistic(&mut a, &mut b), 0.0);
    }

    #[test]
    fn invariance_under_identity_shift() {
        let id = crate::euler::exp_generator(3, false, 0.0);
        let report = invariance_test(GroupName::Su2, &id, 2000, &mut rng_for(5, 0));
        assert_eq!(report.statistic, 0.0);
        assert!(report.pass);
    }

    #[test]
    fn csv_output_shape() {
        let batch = SampleBatch::collect(GroupName::Su2, 3, 1, 0, true);
        let mut buf = Vec::new();
        batch.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("seed,stream,index,trace26,x1,x2,x3"));
    }
}
