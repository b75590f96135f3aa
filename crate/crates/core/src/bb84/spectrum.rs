//! Uniform angular-frequency grids, normalized spectral amplitudes, and
//! orthonormal spectral bases, all under trapezoid quadrature.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// `n` equally spaced angular frequencies starting at `start` (rad/s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    start: f64,
    step: f64,
    n: usize,
}

impl FrequencyGrid {
    pub fn new(start: f64, stop: f64, n: usize) -> Result<Self> {
        if n < 2 || !(stop > start) || !start.is_finite() || !stop.is_finite() {
            return Err(Error::domain(format!("frequency grid needs n >= 2 and start < stop, got {n} on [{start}, {stop}]")));
        }
        Ok(FrequencyGrid {
            start,
            step: (stop - start) / (n - 1) as f64,
            n,
        })
    }

    /// Accepts explicit points if they are strictly increasing and uniform
    /// within `1e-9` relative to the spacing.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("frequency grid needs at least two points"));
        }
        let n = points.len();
        let step = (points[n - 1] - points[0]) / (n - 1) as f64;
        if !(step > 0.0) {
            return Err(Error::domain("frequency grid must be strictly increasing"));
        }
        for (i, w) in points.iter().enumerate() {
            let dev = (w - (points[0] + i as f64 * step)).abs() / step;
            if dev > 1e-9 {
                return Err(Error::invariant("frequency grid uniformity", dev, 1e-9));
            }
        }
        Ok(FrequencyGrid {
            start: points[0],
            step,
            n,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.omega(self.n - 1)
    }

    pub fn omega(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.omega(i))
    }

    /// Trapezoid weight of point `i`: `step`, halved at both ends.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            0.5 * self.step
        } else {
            self.step
        }
    }

    fn same_as(&self, other: &FrequencyGrid) -> Result<()> {
        if self != other {
            return Err(Error::domain("spectral profiles live on different frequency grids"));
        }
        Ok(())
    }
}

/// Complex amplitude per grid point, with unit quadrature norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralProfile {
    grid: FrequencyGrid,
    amplitudes: Vec<Complex64>,
}

fn quadrature(grid: &FrequencyGrid, f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter()
        .zip(g)
        .enumerate()
        .map(|(i, (a, b))| a.conj() * b * grid.weight(i))
        .sum()
}

impl SpectralProfile {
    pub fn new(grid: FrequencyGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::domain(format!("{} amplitudes on a {}-point grid", amplitudes.len(), grid.len())));
        }
        let norm = quadrature(&grid, &amplitudes, &amplitudes).re;
        if (norm - 1.0).abs() > tol::SPECTRAL_NORM {
            return Err(Error::invariant("spectral profile norm", (norm - 1.0).abs(), tol::SPECTRAL_NORM));
        }
        Ok(SpectralProfile { grid, amplitudes })
    }

    /// Rescale to unit quadrature norm.
    pub fn normalized(grid: FrequencyGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::domain(format!("{} amplitudes on a {}-point grid", amplitudes.len(), grid.len())));
        }
        let norm = quadrature(&grid, &amplitudes, &amplitudes).re.sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain("spectral profile has zero norm on its grid"));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(SpectralProfile { grid, amplitudes })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// Quadrature `sum_i w_i f*(w_i) g(w_i)`.
pub fn spectral_overlap(f: &SpectralProfile, g: &SpectralProfile) -> Result<Complex64> {
    f.grid.same_as(&g.grid)?;
    Ok(quadrature(&f.grid, &f.amplitudes, &g.amplitudes))
}

/// Spectral width convention for transform-limited pulses:
/// `sigma_omega = factor / duration`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseConvention {
    pub factor: f64,
}

impl Default for PulseConvention {
    fn default() -> Self {
        PulseConvention { factor: 0.5 }
    }
}

impl PulseConvention {
    pub fn sigma_omega(&self, duration: f64) -> f64 {
        self.factor / duration
    }
}

/// Metadata recorded with every generated Gaussian spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseShape {
    pub kind: String,
    pub duration: f64,
    pub sigma_omega: f64,
    pub convention: String,
}

/// The spectrum must cover at least `center +- SPAN_SIGMAS/2 * sigma`.
pub const SPAN_SIGMAS: f64 = 6.0;

/// Gaussian amplitude `exp(-(w - w0)^2 / (4 sigma^2))`, so that `|f|^2` has
/// standard deviation `sigma`, normalized on `grid`.
pub fn gaussian_spectrum(center_omega: f64, duration: f64, grid: &FrequencyGrid) -> Result<(SpectralProfile, PulseShape)> {
    gaussian_spectrum_with(center_omega, duration, grid, PulseConvention::default())
}

pub fn gaussian_spectrum_with(
    center_omega: f64,
    duration: f64,
    grid: &FrequencyGrid,
    convention: PulseConvention,
) -> Result<(SpectralProfile, PulseShape)> {
    if !(duration > 0.0) {
        return Err(Error::domain("pulse duration must be positive"));
    }
    let sigma = convention.sigma_omega(duration);
    let half = 0.5 * SPAN_SIGMAS * sigma;
    if grid.start() > center_omega - half || grid.stop() < center_omega + half {
        return Err(Error::domain(format!(
            "frequency grid [{:e}, {:e}] does not span {SPAN_SIGMAS} spectral standard deviations around {center_omega:e}",
            grid.start(),
            grid.stop()
        )));
    }
    let amps = grid
        .omegas()
        .map(|w| {
            let x = w - center_omega;
            Complex64::new((-x * x / (4.0 * sigma * sigma)).exp(), 0.0)
        })
        .collect();
    let profile = SpectralProfile::normalized(grid.clone(), amps)?;
    Ok((
        profile,
        PulseShape {
            kind: "transform-limited gaussian".into(),
            duration,
            sigma_omega: sigma,
            convention: format!("sigma_omega = {} / duration", convention.factor),
        },
    ))
}

/// Orthonormal profiles on one grid. Mode indices are 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralBasis {
    grid: FrequencyGrid,
    profiles: Vec<SpectralProfile>,
}

/// Residual norms below this are treated as linearly dependent seeds.
pub const DEPENDENT_SEED: f64 = 1e-6;

impl SpectralBasis {
    pub fn new(profiles: Vec<SpectralProfile>) -> Result<Self> {
        let grid = profiles
            .first()
            .ok_or_else(|| Error::domain("spectral basis needs at least one profile"))?
            .grid
            .clone();
        let mut worst = 0.0_f64;
        for (j, f) in profiles.iter().enumerate() {
            grid.same_as(&f.grid)?;
            for g in &profiles[j..] {
                let target = if std::ptr::eq(f, g) { 1.0 } else { 0.0 };
                worst = worst.max((spectral_overlap(f, g)? - target).norm());
            }
        }
        if worst > tol::SPECTRAL_ORTHONORMAL {
            return Err(Error::invariant("spectral basis orthonormality", worst, tol::SPECTRAL_ORTHONORMAL));
        }
        Ok(SpectralBasis { grid, profiles })
    }

    /// Modified Gram-Schmidt with one re-orthogonalization pass; seeds whose
    /// residual norm falls below [`DEPENDENT_SEED`] are dropped.
    pub fn gram_schmidt(seeds: &[SpectralProfile]) -> Result<Self> {
        let grid = seeds
            .first()
            .ok_or_else(|| Error::domain("Gram-Schmidt needs at least one seed"))?
            .grid
            .clone();
        let mut out: Vec<Vec<Complex64>> = Vec::new();
        for s in seeds {
            grid.same_as(&s.grid)?;
            let seed_norm = quadrature(&grid, &s.amplitudes, &s.amplitudes).re.sqrt();
            let mut v = s.amplitudes.clone();
            for _ in 0..2 {
                for e in &out {
                    let c = quadrature(&grid, e, &v);
                    v.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
                }
            }
            let norm = quadrature(&grid, &v, &v).re.sqrt();
            if norm > DEPENDENT_SEED * seed_norm {
                out.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        let profiles = out
            .into_iter()
            .map(|a| SpectralProfile::normalized(grid.clone(), a))
            .collect::<Result<Vec<_>>>()?;
        SpectralBasis::new(profiles)
    }

    /// Hermite-Gauss modes `psi_n((w - w0) / (sqrt(2) sigma))`, `n < count`,
    /// orthonormalized on the grid. Mode 0 is the Gaussian of width `sigma`.
    pub fn hermite_gauss(grid: &FrequencyGrid, center: f64, sigma: f64, count: usize) -> Result<Self> {
        Self::gram_schmidt(&hermite_gauss_seeds(grid, center, sigma, count)?)
    }

    /// `first` followed by Hermite-Gauss modes around `center`, orthonormalized.
    pub fn completing(first: &SpectralProfile, center: f64, sigma: f64, count: usize) -> Result<Self> {
        let mut seeds = vec![first.clone()];
        seeds.extend(hermite_gauss_seeds(&first.grid, center, sigma, count)?);
        let mut basis = Self::gram_schmidt(&seeds)?;
        basis.profiles.truncate(count);
        Ok(basis)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn profiles(&self) -> &[SpectralProfile] {
        &self.profiles
    }

    pub fn mode(&self, j: usize) -> Result<&SpectralProfile> {
        self.profiles
            .get(j)
            .ok_or_else(|| Error::domain(format!("spectral mode {j} outside a basis of {}", self.profiles.len())))
    }
}

fn hermite_gauss_seeds(grid: &FrequencyGrid, center: f64, sigma: f64, count: usize) -> Result<Vec<SpectralProfile>> {
    if !(sigma > 0.0) || count == 0 {
        return Err(Error::domain("Hermite-Gauss modes need sigma > 0 and count >= 1"));
    }
    let xs: Vec<f64> = grid.omegas().map(|w| (w - center) / (std::f64::consts::SQRT_2 * sigma)).collect();
    // Normalized recurrence psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}.
    let mut prev: Vec<f64> = vec![0.0; xs.len()];
    let mut cur: Vec<f64> = xs.iter().map(|x| (-x * x / 2.0).exp()).collect();
    let mut seeds = Vec::with_capacity(count);
    for n in 0..count {
        let amps = cur.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        seeds.push(SpectralProfile::normalized(grid.clone(), amps)?);
        let nf = n as f64;
        let next: Vec<f64> = xs
            .iter()
            .zip(cur.iter().zip(&prev))
            .map(|(x, (c, p))| (2.0 / (nf + 1.0)).sqrt() * x * c - (nf / (nf + 1.0)).sqrt() * p)
            .collect();
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(seeds)
}
