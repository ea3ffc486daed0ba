//! Disk quadrature and pullback-measure criteria: Carleson ratios,
//! model-region closed forms, the involution integral, and the
//! Hilbert-Schmidt integral.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::SymbolMap;

/// Fixed seed for the Monte-Carlo fallback, for reproducible reports.
pub const MC_SEED: u64 = 0x5EED;

/// Tensor polar grid on the unit disk: Gauss-Legendre in the squared
/// radius (so radial polynomial integrands are integrated exactly) and
/// uniform midpoints in the angle (exact on trigonometric polynomials up
/// to the angular resolution).  Weights sum to 1 up to roundoff.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadratureGrid {
    pub radial: usize,
    pub angular: usize,
}

impl QuadratureGrid {
    /// Default resolution for smooth integrands.
    pub fn smooth() -> Self {
        Self {
            radial: 512,
            angular: 1024,
        }
    }

    /// Default resolution for indicator integrands, where the jump
    /// dominates the error.
    pub fn indicator() -> Self {
        Self {
            radial: 2048,
            angular: 4096,
        }
    }

    /// One refinement step: both directions doubled.
    pub fn refined(&self) -> Self {
        Self {
            radial: self.radial * 2,
            angular: self.angular * 2,
        }
    }
}

/// Quadrature value with an error estimate from one grid refinement.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// Complex-valued variant of [`IntegralEstimate`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComplexEstimate {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Gauss-Legendre nodes and weights on `[0, 1]`; weights sum to 1 up to
/// roundoff.  Newton iteration on the Legendre recurrence.
fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi-style initial guess on [-1, 1]
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((x + 1.0) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Radial sample points `(r, weight)` of the grid, in the squared-radius
/// Gauss-Legendre rule; the weight already includes the angular factor
/// `1/angular`.
fn radial_nodes(grid: QuadratureGrid) -> Vec<(f64, f64)> {
    gauss_legendre_unit(grid.radial)
        .into_iter()
        .map(|(u, w)| (u.sqrt(), w / grid.angular as f64))
        .collect()
}

/// Integral of `f` against normalized area measure on the disk.  Cells
/// are accumulated in a fixed order so the result is bit-stable.
fn integrate_disk<F>(grid: QuadratureGrid, mut f: F) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let na = grid.angular;
    let mut total = Complex64::default();
    for (r, w) in radial_nodes(grid) {
        let mut ring = Complex64::default();
        for j in 0..na {
            let t = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / na as f64;
            let z = Complex64::from_polar(r, t);
            let v = f(z)?;
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteSample(z));
            }
            ring += v;
        }
        total += ring * w;
    }
    Ok(total)
}

fn with_refinement<F>(grid: QuadratureGrid, f: F) -> Result<ComplexEstimate>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let coarse = integrate_disk(grid, &f)?;
    let fine = integrate_disk(grid.refined(), &f)?;
    Ok(ComplexEstimate {
        value: fine,
        error_estimate: (fine - coarse).norm(),
    })
}

/// Integral of `g` against the pullback measure of `phi`, computed by the
/// change of variables `∫ g(phi(z)) |phi'(z)|^2 dA(z)`.  The counting
/// function is never formed explicitly.
pub fn pullback_integral<F>(phi: &SymbolMap, g: F, grid: QuadratureGrid) -> Result<ComplexEstimate>
where
    F: Fn(Complex64) -> Complex64,
{
    with_refinement(grid, |z| {
        let d = phi.eval_derivative(z);
        Ok(g(phi.eval(z)) * d.norm_sqr())
    })
}

/// Monte-Carlo version of [`pullback_integral`], stratified in radius so
/// each of `strata` annuli of equal measure receives `per_stratum`
/// samples.  Deterministic for a fixed seed.
pub fn mc_pullback<F>(
    phi: &SymbolMap,
    g: F,
    strata: usize,
    per_stratum: usize,
    seed: u64,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if strata == 0 || per_stratum == 0 {
        return Err(Error::InvalidArgument("empty Monte-Carlo sample".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut total = Complex64::default();
    for s in 0..strata {
        let mut acc = Complex64::default();
        for _ in 0..per_stratum {
            // annulus s holds measure u in [s/strata, (s+1)/strata);
            // r = sqrt(u) gives the area-uniform radius
            let u = (s as f64 + rng.gen::<f64>()) / strata as f64;
            let t = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            let z = Complex64::from_polar(u.sqrt(), t);
            let v = g(phi.eval(z)) * phi.eval_derivative(z).norm_sqr();
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteSample(z));
            }
            acc += v;
        }
        total += acc / (strata * per_stratum) as f64;
    }
    Ok(total)
}

/// Carleson set `S(theta, h) = {z : |z - e^(i theta)| < h}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CarlesonWindow {
    pub theta: f64,
    pub h: f64,
}

impl CarlesonWindow {
    pub fn new(theta: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "window height must lie in (0,1), got {h}"
            )));
        }
        Ok(Self { theta, h })
    }

    pub fn contains(&self, w: Complex64) -> bool {
        (w - Complex64::from_polar(1.0, self.theta)).norm() < self.h
    }
}

/// `mu(S(theta,h)) / h^4` for the pullback measure of `phi`.
pub fn carleson_ratio(
    phi: &SymbolMap,
    window: CarlesonWindow,
    grid: QuadratureGrid,
) -> Result<IntegralEstimate> {
    let est = pullback_integral(
        phi,
        |w| {
            if window.contains(w) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        },
        grid,
    )?;
    let h4 = window.h.powi(4);
    Ok(IntegralEstimate {
        value: est.value.re / h4,
        error_estimate: est.error_estimate / h4,
    })
}

/// Largest Carleson ratio over a default window family: 64 angles and
/// dyadic heights `2^-k`, `k = 1..=10`.  A single pass over the grid
/// cells feeds per-window accumulators, so cost does not scale with the
/// number of windows.
pub fn carleson_sup(phi: &SymbolMap, grid: QuadratureGrid) -> Result<(f64, CarlesonWindow)> {
    let windows: Vec<CarlesonWindow> = (0..64)
        .flat_map(|i| {
            (1..=10).map(move |k| CarlesonWindow {
                theta: 2.0 * std::f64::consts::PI * i as f64 / 64.0,
                h: 0.5f64.powi(k),
            })
        })
        .collect();
    let mut masses = vec![0.0f64; windows.len()];
    let na = grid.angular;
    for (r, w) in radial_nodes(grid) {
        for j in 0..na {
            let t = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / na as f64;
            let z = Complex64::from_polar(r, t);
            let img = phi.eval(z);
            let density = phi.eval_derivative(z).norm_sqr() * w;
            if !density.is_finite() {
                return Err(Error::NonFiniteSample(z));
            }
            for (m, win) in masses.iter_mut().zip(&windows) {
                if win.contains(img) {
                    *m += density;
                }
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_window = windows[0];
    for (m, w) in masses.iter().zip(&windows) {
        let v = m / w.h.powi(4);
        if v > best {
            best = v;
            best_window = *w;
        }
    }
    Ok((best, best_window))
}

/// Model domain bounded near 1 by the curve `x^(1/p) + y^(1/p) = 1`.
/// `p = 2, 3, 4` give divergent, bounded, and vanishing Carleson-type
/// ratios respectively.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ModelRegion {
    p: u8,
}

impl ModelRegion {
    pub fn new(p: u8) -> Result<Self> {
        if !(2..=4).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "model region exponent must be 2, 3 or 4, got {p}"
            )));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u8 {
        self.p
    }
}

/// `∫_(1-h)^1 (1 - x^(1/p))^p dx / h^4`: the area of the model region
/// above height `1 - h`, against the Carleson normalization.  Exact
/// antiderivatives for `p = 2, 3`; Simpson quadrature for `p = 4`.
pub fn model_ratio(region: ModelRegion, h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "height must lie in (0,1], got {h}"
        )));
    }
    let s = 1.0 - h;
    // For p = 2, 3 the antiderivative evaluations cancel catastrophically
    // as h -> 0 (the area is O(h^(p+1)) against O(1) terms), so small
    // heights go through the binomial expansion of the same expression;
    // the low-order terms cancel identically and are dropped up front.
    let numerator = match region.p {
        2 => {
            if h > 0.5 {
                2.0 * h - h * h / 2.0 + (4.0 / 3.0) * s.powf(1.5) - 4.0 / 3.0
            } else {
                binomial_tail(&[(4.0 / 3.0, 1.5)], 3, h)
            }
        }
        3 => {
            if h > 0.5 {
                h * h / 2.0 + 2.25 * s.powf(4.0 / 3.0) - 1.8 * s.powf(5.0 / 3.0) - 0.45
            } else {
                binomial_tail(&[(2.25, 4.0 / 3.0), (-1.8, 5.0 / 3.0)], 4, h)
            }
        }
        4 => simpson(|x| (1.0 - x.powf(0.25)).powi(4), s, 1.0, 4096),
        _ => unreachable!(),
    };
    Ok(numerator / h.powi(4))
}

/// `sum_(k >= start) sum_i c_i binom(alpha_i, k) (-h)^k`: the tail of
/// `sum_i c_i (1-h)^(alpha_i)` after its polynomial head has cancelled
/// against the other closed-form terms.
fn binomial_tail(terms: &[(f64, f64)], start: usize, h: f64) -> f64 {
    // binom(alpha, k) built up with the ratio recurrence
    let mut binoms: Vec<f64> = terms
        .iter()
        .map(|&(_, alpha)| {
            let mut b = 1.0;
            for k in 1..=start {
                b *= (alpha - (k - 1) as f64) / k as f64;
            }
            b
        })
        .collect();
    let mut total = 0.0;
    let mut hk = (-h).powi(start as i32);
    for k in start.. {
        let coeff: f64 = terms.iter().zip(&binoms).map(|(&(c, _), b)| c * b).sum();
        let term = coeff * hk;
        total += term;
        if term.abs() <= 1e-18 * total.abs().max(1e-300) && k > start + 4 {
            break;
        }
        for (b, &(_, alpha)) in binoms.iter_mut().zip(terms) {
            *b *= (alpha - k as f64) / (k + 1) as f64;
        }
        hk *= -h;
    }
    total
}

/// Composite Simpson rule with `n` (even) subintervals.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let dx = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * dx);
    }
    sum * dx / 3.0
}

/// `∫ |phi_a'(phi(z))|^4 |phi'(z)|^2 dA(z)` where `phi_a` is the disk
/// involution `(a - z)/(1 - conj(a) z)`.  Small values as `|a| -> 1`
/// witness the compactness criteria.
pub fn involution_integral(
    phi: &SymbolMap,
    a: Complex64,
    grid: QuadratureGrid,
) -> Result<IntegralEstimate> {
    if a.norm() >= 1.0 {
        return Err(Error::OutsideDisk(a));
    }
    let c4 = (1.0 - a.norm_sqr()).powi(4);
    let est = with_refinement(grid, |z| {
        let w = phi.eval(z);
        let denom = (Complex64::new(1.0, 0.0) - a.conj() * w).norm_sqr();
        Ok(Complex64::new(
            phi.eval_derivative(z).norm_sqr() * c4 / denom.powi(4),
            0.0,
        ))
    })?;
    Ok(IntegralEstimate {
        value: est.value.re,
        error_estimate: est.error_estimate,
    })
}

/// `∫ |phi'|^2 / (1 - |phi|^2)^4 dA`, the integral test for the
/// Hilbert-Schmidt property.
pub fn hs_integral(phi: &SymbolMap, grid: QuadratureGrid) -> Result<IntegralEstimate> {
    let est = with_refinement(grid, |z| {
        let w = phi.eval(z);
        let denom = (1.0 - w.norm_sqr()).powi(4);
        Ok(Complex64::new(
            phi.eval_derivative(z).norm_sqr() / denom,
            0.0,
        ))
    })?;
    Ok(IntegralEstimate {
        value: est.value.re,
        error_estimate: est.error_estimate,
    })
}
