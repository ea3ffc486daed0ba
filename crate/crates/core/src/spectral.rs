//! Operator norms and spectra: closed forms for monomial symbols and
//! numerical values from truncated matrices.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::OperatorMatrix;
use crate::series::{SymbolKind, SymbolMap};
use crate::space::{self, WeightedSpace};

/// Closed-form norm data for `D_phi` with `phi = a z^M`.
///
/// `nu = floor(2 / (1 - |a|^2))` and the norm is
/// `max(1, sqrt(M) sqrt(nu(nu-1)) |a|^(nu-1))`.
#[derive(Clone, Debug, Serialize)]
pub struct NormResult {
    pub nu: u64,
    pub closed_form: f64,
    pub matrix_estimate: Option<f64>,
    pub degree: u32,
    pub a: Complex64,
    /// Set when `2/(1 - |a|^2)` is an integer; then `n = nu` and
    /// `n = nu - 1` attain the same supremum value and the reported argmax
    /// is the floor.
    pub tie_at_breakpoint: bool,
}

/// Norm of `D_(a z^M)` on the Dirichlet space.
pub fn closed_form_norm(a: Complex64, degree: u32) -> Result<NormResult> {
    let r = a.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "monomial coefficient must satisfy 0 < |a| < 1, got |a| = {r}"
        )));
    }
    let x = 2.0 / (1.0 - r * r);
    let nu = x.floor() as u64;
    let tie = (x - x.round()).abs() < 1e-12;
    let sup = (degree as f64).sqrt() * ((nu * (nu - 1)) as f64).sqrt() * r.powi(nu as i32 - 1);
    Ok(NormResult {
        nu,
        closed_form: sup.max(1.0),
        matrix_estimate: None,
        degree,
        a,
        tie_at_breakpoint: tie,
    })
}

/// One row of the norm-as-a-function-of-`|a|` table.
#[derive(Clone, Debug, Serialize)]
pub struct NormCurveRow {
    pub a_abs: f64,
    pub nu: u64,
    pub norm: f64,
}

/// Closed-form norm of `D_(a z^M)` at each grid point, in grid order.
pub fn norm_curve(degree: u32, grid: &[f64]) -> Result<Vec<NormCurveRow>> {
    grid.iter()
        .map(|&a| {
            let r = closed_form_norm(Complex64::new(a, 0.0), degree)?;
            Ok(NormCurveRow {
                a_abs: a,
                nu: r.nu,
                norm: r.closed_form,
            })
        })
        .collect()
}

const POWER_ITERATION_MAX: usize = 500_000;
const POWER_ITERATION_TOL: f64 = 1e-13;

/// Largest singular value of the truncation, by power iteration on
/// `A* A` with a residual certificate: the iteration stops when
/// `||A* A v - lambda v|| <= tol * lambda`.
pub fn matrix_norm(m: &OperatorMatrix) -> Result<f64> {
    let a = m.entries();
    let ah = a.adjoint();
    let n = a.ncols();
    let mut v = DVector::from_fn(n, |i, _| {
        let t = i as f64 + 1.0;
        Complex64::new((0.7 * t).cos(), (0.3 * t).sin())
    });
    let nv = v.norm();
    v /= Complex64::new(nv, 0.0);
    for _ in 0..POWER_ITERATION_MAX {
        let u = &ah * (a * &v);
        let lambda = v.dotc(&u).re;
        if lambda <= f64::MIN_POSITIVE {
            return Ok(0.0);
        }
        let residual = (&u - &v * Complex64::new(lambda, 0.0)).norm();
        if residual <= POWER_ITERATION_TOL * lambda {
            return Ok(lambda.max(0.0).sqrt());
        }
        let nu = u.norm();
        v = u / Complex64::new(nu, 0.0);
    }
    Err(Error::NonConvergence(POWER_ITERATION_MAX))
}

/// Spectrum data: computed eigenvalues of a truncation next to the
/// closed-form prediction when one exists.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    /// Eigenvalues sorted by decreasing modulus; values below `zero_tol`
    /// are reported as exact zeros.
    pub eigenvalues: Vec<Complex64>,
    pub predicted: Option<Vec<Complex64>>,
    pub zero_tol: f64,
}

/// Spectrum of `D_phi` from the paper's theorems: `{0, 2a}` for `a z^2`,
/// `{0}` for other monomials and for affine `a z + b` with
/// `0 < |a| < 1 - |b|`.
pub fn closed_form_spectrum(phi: &SymbolMap) -> Result<Vec<Complex64>> {
    match phi.kind() {
        SymbolKind::Monomial { a, degree } => {
            if *degree == 2 {
                Ok(vec![Complex64::default(), 2.0 * a])
            } else {
                Ok(vec![Complex64::default()])
            }
        }
        SymbolKind::LinearFractional { a, b, c, d } => {
            if c.norm() > 1e-14 {
                return Err(Error::NoClosedForm(
                    "non-affine linear-fractional symbol".into(),
                ));
            }
            let a = a / d;
            let b = b / d;
            if a.norm() > 0.0 && a.norm() < 1.0 - b.norm() {
                Ok(vec![Complex64::default()])
            } else {
                Err(Error::NoClosedForm(
                    "affine symbol requires 0 < |a| < 1 - |b|".into(),
                ))
            }
        }
        SymbolKind::Polynomial { .. } => {
            Err(Error::NoClosedForm("general polynomial symbol".into()))
        }
    }
}

/// Eigenvalues of the truncated matrix via a dense solver.  Values with
/// modulus below `tol` (default `1e-8 * matrix_norm`) are reported as 0.
pub fn matrix_spectrum(m: &OperatorMatrix, tol: Option<f64>) -> Result<SpectrumResult> {
    let zero_tol = match tol {
        Some(t) => t,
        None => 1e-8 * matrix_norm(m)?,
    };
    let n = m.trunc() + 1;
    let fm = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| {
        let e = m.entries()[(i, j)];
        faer::c64::new(e.re, e.im)
    });
    let raw: Vec<faer::c64> = fm
        .eigenvalues()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let mut eigenvalues: Vec<Complex64> = raw
        .into_iter()
        .map(|e| {
            let z = Complex64::new(e.re, e.im);
            if z.norm() < zero_tol {
                Complex64::default()
            } else {
                z
            }
        })
        .collect();
    eigenvalues.sort_by(|x, y| {
        y.norm()
            .partial_cmp(&x.norm())
            .unwrap()
            .then(x.arg().partial_cmp(&y.arg()).unwrap())
    });
    Ok(SpectrumResult {
        eigenvalues,
        predicted: None,
        zero_tol,
    })
}

/// Hilbert-Schmidt data from basis-image norms.
#[derive(Clone, Debug, Serialize)]
pub struct HilbertSchmidtResult {
    /// `sqrt(sum_(n<=N) ||D_phi e_n||^2)`.
    pub value: f64,
    /// Geometric estimate of the dropped tail (infinite when the sup bound
    /// is not below one).
    pub tail_estimate: f64,
    /// Whether the partial sums have stabilized at the truncation.
    pub stabilized: bool,
}

/// Truncated Hilbert-Schmidt norm of `D_phi` on `sp`, summing the exact
/// basis-image norms `||D_phi e_n||`.
pub fn hilbert_schmidt_norm(
    phi: &SymbolMap,
    sp: WeightedSpace,
    n: usize,
) -> Result<HilbertSchmidtResult> {
    let t = phi.taylor(n)?;
    let mut power = crate::series::PowerSeries::constant(Complex64::new(1.0, 0.0), n);
    let mut sum = 0.0f64;
    let mut last_term = 0.0f64;
    for k in 1..=n {
        let scale = k as f64 / sp.weight(k);
        let img = space::norm(&power, sp) * scale;
        last_term = img * img;
        sum += last_term;
        if k < n {
            power = power.mul_trunc(&t, n);
        }
    }
    let rho2 = phi.sup_bound().powi(2);
    let ratio = rho2 * (1.0 + 2.0 / n as f64);
    let tail_estimate = if ratio < 1.0 {
        last_term * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    let stabilized = last_term <= 1e-12 * sum.max(1.0);
    Ok(HilbertSchmidtResult {
        value: sum.sqrt(),
        tail_estimate,
        stabilized,
    })
}
