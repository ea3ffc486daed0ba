//! Weighted Hardy spaces and the Dirichlet reproducing kernels.
//!
//! Each space is determined by a weight sequence `beta(n)`; the norm of
//! `f = sum a_n z^n` is `sqrt(sum |a_n|^2 beta(n)^2)` and `e_n = z^n / beta(n)`
//! is an orthonormal basis.  All area integrals use normalized Lebesgue
//! measure (total mass 1), so the Bergman weights carry no stray pi factors.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// A weighted Hardy space identified by its weight sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightedSpace {
    /// `beta(0) = 1`, `beta(n) = sqrt(n)`.
    Dirichlet,
    /// `beta(n) = 1`.
    Hardy,
    /// `beta(n) = 1 / sqrt(n + 1)` (normalized area measure moments).
    Bergman,
}

impl WeightedSpace {
    pub fn weight(self, n: usize) -> f64 {
        match self {
            WeightedSpace::Dirichlet => {
                if n == 0 {
                    1.0
                } else {
                    (n as f64).sqrt()
                }
            }
            WeightedSpace::Hardy => 1.0,
            WeightedSpace::Bergman => 1.0 / ((n as f64) + 1.0).sqrt(),
        }
    }
}

/// `sqrt(sum |a_n|^2 beta(n)^2)`; for the Dirichlet weights this is
/// `sqrt(|a_0|^2 + sum n |a_n|^2)`.
pub fn norm(f: &PowerSeries, sp: WeightedSpace) -> f64 {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let b = sp.weight(n);
            c.norm_sqr() * b * b
        })
        .sum::<f64>()
        .sqrt()
}

/// `sum a_n conj(b_n) beta(n)^2` over the shared coefficient range.
pub fn inner_product(f: &PowerSeries, g: &PowerSeries, sp: WeightedSpace) -> Complex64 {
    let top = f.truncation_order().min(g.truncation_order());
    (0..=top)
        .map(|n| {
            let b = sp.weight(n);
            f.coeff(n) * g.coeff(n).conj() * (b * b)
        })
        .sum()
}

/// A truncated Dirichlet reproducing kernel.
///
/// Order 0 is the point-evaluation kernel `K_w(z) = 1 + log(1/(1 - conj(w) z))`
/// with coefficients `conj(w)^n / n`; order 1 is the derivative-evaluation
/// kernel `K_w^(1)(z) = z / (1 - conj(w) z)` with coefficients `conj(w)^(n-1)`.
#[derive(Clone, Debug)]
pub struct KernelFunction {
    base_point: Complex64,
    order: u8,
    series: PowerSeries,
}

impl KernelFunction {
    pub fn base_point(&self) -> Complex64 {
        self.base_point
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }
}

/// Truncated Dirichlet kernel at `w`, order 0 (evaluation) or 1 (derivative
/// evaluation).
pub fn kernel(w: Complex64, order: u8, n: usize) -> Result<KernelFunction> {
    if w.norm() >= 1.0 {
        return Err(Error::OutsideDisk(w));
    }
    if order > 1 {
        return Err(Error::InvalidArgument(format!(
            "kernel order must be 0 or 1, got {order}"
        )));
    }
    let wb = w.conj();
    let mut coeffs = Vec::with_capacity(n + 1);
    if order == 0 {
        coeffs.push(Complex64::new(1.0, 0.0));
        let mut p = wb;
        for k in 1..=n {
            coeffs.push(p / k as f64);
            p *= wb;
        }
    } else {
        coeffs.push(Complex64::default());
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 1..=n {
            coeffs.push(p);
            p *= wb;
        }
    }
    Ok(KernelFunction {
        base_point: w,
        order,
        series: PowerSeries::new(coeffs),
    })
}

/// Residual `|<f, K_w^(order)> - f^(order)(w)|` of the reproducing identity
/// in the Dirichlet space.  Exact (up to roundoff) when `f` is a polynomial
/// of degree at most the kernel truncation.
pub fn reproduce_check(f: &PowerSeries, w: Complex64, order: u8) -> Result<f64> {
    let k = kernel(w, order, f.truncation_order())?;
    let ip = inner_product(f, k.series(), WeightedSpace::Dirichlet);
    let target = if order == 0 {
        f.eval(w)
    } else {
        f.derivative().eval(w)
    };
    Ok((ip - target).norm())
}
