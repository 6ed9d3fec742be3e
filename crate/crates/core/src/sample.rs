//! Reproducible random inputs.
//!
//! [`CounterRng`] is SplitMix64 used in counter mode: the `k`-th draw
//! (`k = 1, 2, ...`) of a stream keyed by `key` is
//! `mix64(key + k * 0x9E3779B97F4A7C15)` with wrapping arithmetic, where
//! `mix64` is the SplitMix64 finaliser. Uniforms take the top 53 bits;
//! normals use the cosine branch of Box–Muller on two consecutive uniforms.
//! Any implementation of these three lines reproduces every trial input.

use crate::scalar::Real;
use crate::symlin::{mat_exp, SymMat, Subspace};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng {
            key: seed,
            counter: 0,
        }
    }

    /// Independent stream `stream` of `seed`: key `mix64(seed ^ mix64(stream + GOLDEN))`.
    pub fn stream(seed: u64, stream: u64) -> Self {
        CounterRng::new(mix64(seed ^ mix64(stream.wrapping_add(GOLDEN))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Symmetric matrix with independent `N(0, scale²)` entries on and above the diagonal.
pub fn random_sym<T: Real>(rng: &mut CounterRng, n: usize, scale: f64) -> SymMat<T> {
    SymMat::from_fn(n, |_, _| T::lit(scale * rng.normal()))
}

pub fn random_hollow<T: Real>(rng: &mut CounterRng, n: usize, scale: f64) -> SymMat<T> {
    random_sym::<T>(rng, n, scale).off()
}

pub fn random_diag<T: Real>(rng: &mut CounterRng, n: usize, scale: f64) -> SymMat<T> {
    let d: Vec<T> = (0..n).map(|_| T::lit(scale * rng.normal())).collect();
    SymMat::from_diag(&d)
}

/// `J S J` with `J = I − 11ᵀ/n`: a random element of `Row₀(n)`.
pub fn random_row_zero<T: Real>(rng: &mut CounterRng, n: usize, scale: f64) -> SymMat<T> {
    let s = random_sym::<T>(rng, n, scale);
    let inv_n = T::one() / T::lit(n as f64);
    let row_means: Vec<T> = s.row_sums().into_iter().map(|r| r * inv_n).collect();
    let grand = row_means.iter().copied().sum::<T>() * inv_n;
    SymMat::from_fn(n, |i, j| s.get(i, j) - row_means[i] - row_means[j] + grand)
}

/// Random element of a chart model space.
pub fn random_in<T: Real>(
    rng: &mut CounterRng,
    space: Subspace,
    n: usize,
    scale: f64,
) -> SymMat<T> {
    match space {
        Subspace::Full => random_sym(rng, n, scale),
        Subspace::Hollow => random_hollow(rng, n, scale),
        Subspace::RowZero => random_row_zero(rng, n, scale),
        Subspace::Diagonal => random_diag(rng, n, scale),
    }
}

/// `exp(S)` for a random symmetric `S`; condition number grows like `e^{4·scale·√n}`.
pub fn random_spd<T: Real>(rng: &mut CounterRng, n: usize, scale: f64) -> SymMat<T> {
    mat_exp(&random_sym::<T>(rng, n, scale)).expect("moderate scales cannot overflow")
}

/// Correlation rescaling of [`random_spd`].
pub fn random_corr<T: Real>(rng: &mut CounterRng, n: usize, scale: f64) -> SymMat<T> {
    let s = random_spd::<T>(rng, n, scale);
    let d: Vec<T> = s.diag().into_iter().map(|x| x.sqrt().recip()).collect();
    let c = s.scale_diag(&d);
    SymMat::from_fn(n, |i, j| if i == j { T::one() } else { c.get(i, j) })
}

/// Positive diagonal vector with entries `exp(N(0, scale²))`.
pub fn random_positive<T: Real>(rng: &mut CounterRng, n: usize, scale: f64) -> Vec<T> {
    (0..n).map(|_| T::lit((scale * rng.normal()).exp())).collect()
}
