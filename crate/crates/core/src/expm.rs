//! Matrix exponentials for the chart factors.
//!
//! Every chart generator g (plain or tilde, 26-dim) turns out to satisfy the
//! minimal polynomial g(g^2 + 1/4)(g^2 + 1) = 0 — its spectrum is
//! {0, +-i/2, +-i} — which makes exp(x g) a quartic polynomial in g with
//! cos/sin(x/2) and cos/sin(x) coefficients. `FactorExp` precomputes the
//! powers of g once and evaluates exponentials with four scaled adds.
//! Generators that fail the residual check (none do in practice) and generic
//! matrices go through Pade-13 scaling and squaring.

use nalgebra::DMatrix;

/// exp(A) by the Higham 13th-order Pade approximant with scaling and
/// squaring. Accurate to ~1e-14 for the norm range used here.
pub fn pade_expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let norm = a.abs().column_sum().max();
    // theta_13 for double precision
    let theta = 5.371_920_351_148_152;
    let squarings = if norm > theta {
        (norm / theta).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings as i32);

    const B: [f64; 14] = [
        64_764_752_532_480_000.0,
        32_382_376_266_240_000.0,
        7_771_770_303_897_600.0,
        1_187_353_796_428_800.0,
        129_060_195_264_000.0,
        10_559_470_521_600.0,
        670_442_572_800.0,
        33_522_128_640.0,
        1_323_241_920.0,
        40_840_800.0,
        960_960.0,
        16_380.0,
        182.0,
        1.0,
    ];
    let id = DMatrix::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = &a6 * (&a6 * B[13] + &a4 * B[11] + &a2 * B[9])
        + &a6 * B[7]
        + &a4 * B[5]
        + &a2 * B[3]
        + &id * B[1];
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * B[12] + &a4 * B[10] + &a2 * B[8])
        + &a6 * B[6]
        + &a4 * B[4]
        + &a2 * B[2]
        + &id * B[0];
    let numer = &v + &u;
    let denom = &v - &u;
    let mut result = denom
        .lu()
        .solve(&numer)
        .expect("Pade denominator is invertible");
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Cached exponential of a single generator direction.
pub struct FactorExp {
    powers: Option<[DMatrix<f64>; 4]>,
    generator: DMatrix<f64>,
}

impl FactorExp {
    /// Residual of the minimal-polynomial identity g^5 + (5/4)g^3 + (1/4)g.
    pub fn minimal_poly_residual(g: &DMatrix<f64>) -> f64 {
        let g2 = g * g;
        let g3 = &g2 * g;
        let g5 = &g3 * &g2;
        (g5 + &g3 * 1.25 + g * 0.25).abs().max()
    }

    pub fn new(generator: DMatrix<f64>) -> Self {
        let powers = if Self::minimal_poly_residual(&generator) < 1e-11 {
            let g2 = &generator * &generator;
            let g3 = &g2 * &generator;
            let g4 = &g3 * &generator;
            Some([generator.clone(), g2, g3, g4])
        } else {
            None
        };
        Self { powers, generator }
    }

    pub fn uses_spectral_form(&self) -> bool {
        self.powers.is_some()
    }

    /// exp(x * g).
    pub fn at(&self, x: f64) -> DMatrix<f64> {
        match &self.powers {
            Some([g, g2, g3, g4]) => {
                // interpolate exp on the spectrum {0, +-i/2, +-i}:
                //   p = 4(1 - cos(x/2)), q = 1 - cos x,
                //   coefficients solve the real Vandermonde system
                let (s_half, c_half) = (x / 2.0).sin_cos();
                let (s, c) = x.sin_cos();
                let p = 4.0 * (1.0 - c_half);
                let q = 1.0 - c;
                let d = 4.0 / 3.0 * (p - q);
                let b = q + d;
                let cc = 4.0 / 3.0 * (2.0 * s_half - s);
                let a = s + cc;
                let n = g.nrows();
                let mut out = DMatrix::identity(n, n);
                out += g * a;
                out += g2 * b;
                out += g3 * cc;
                out += g4 * d;
                out
            }
            None => pade_expm(&(&self.generator * x)),
        }
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.generator
    }
}
