//! Truncated power-series arithmetic and analytic self-maps of the disk.
//!
//! A [`PowerSeries`] is a finite Taylor polynomial: coefficient `n` is the
//! coefficient of `z^n`, and all arithmetic is truncated so that no result
//! coefficient depends on terms beyond the stated truncation order.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of boundary sample points used for sup-norm and denominator checks.
pub(crate) const BOUNDARY_GRID: usize = 4096;

/// Default truncation order; makes `rho^(N+1) < 1e-11` for `rho <= 0.9`.
pub const DEFAULT_TRUNCATION: usize = 256;

/// Truncated Taylor coefficients of an analytic function.
///
/// Invariant: `coeffs.len() == truncation_order + 1` and is never empty.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![Complex64::default()]
        } else {
            coeffs
        };
        PowerSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        PowerSeries::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The constant series `c` carried at truncation order `order`.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::default(); order + 1];
        coeffs[0] = c;
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Complex64::default(); order + 1],
        }
    }

    /// `c * z^power`, truncated at `order` (the term is dropped if `power > order`).
    pub fn monomial(c: Complex64, power: usize, order: usize) -> Self {
        let mut s = PowerSeries::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^n`; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Termwise derivative; the truncation order drops by one.  The
    /// derivative of a constant series is the zero series of order zero.
    pub fn derivative(&self) -> PowerSeries {
        if self.coeffs.len() == 1 {
            return PowerSeries::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * n as f64)
            .collect();
        PowerSeries { coeffs }
    }

    /// Cauchy product truncated at the minimum truncation of the inputs.
    pub fn multiply(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.truncation_order().min(other.truncation_order());
        self.mul_trunc(other, order)
    }

    /// Cauchy product with an explicit result truncation order.
    pub fn mul_trunc(&self, other: &PowerSeries, order: usize) -> PowerSeries {
        let mut coeffs = vec![Complex64::default(); order + 1];
        let na = self.coeffs.len().min(order + 1);
        for (i, &a) in self.coeffs[..na].iter().enumerate() {
            if a == Complex64::default() {
                continue;
            }
            let nb = other.coeffs.len().min(order + 1 - i);
            for (j, &b) in other.coeffs[..nb].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { coeffs }
    }

    /// Coefficientwise sum, truncated at the minimum truncation of the inputs.
    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.truncation_order().min(other.truncation_order());
        let coeffs = (0..=order).map(|n| self.coeff(n) + other.coeff(n)).collect();
        PowerSeries { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    /// Re-truncate: drop coefficients beyond `order` or pad with zeros.
    pub fn truncate(&self, order: usize) -> PowerSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::default());
        PowerSeries { coeffs }
    }

    fn plus_constant(mut self, c: Complex64) -> PowerSeries {
        self.coeffs[0] += c;
        self
    }
}

/// An analytic self-map of the unit disk in one of the symbol families the
/// computations support.
#[derive(Clone, Debug)]
pub enum SymbolKind {
    /// `a z^M` with `0 < |a| < 1`, `M >= 1`.
    Monomial { a: Complex64, degree: u32 },
    /// `(a z + b) / (c z + d)` mapping the disk into itself.
    LinearFractional {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    },
    /// A polynomial self-map given by its coefficients.
    Polynomial { coeffs: Vec<Complex64> },
}

/// A symbol map together with its sup-norm bookkeeping.
///
/// The effective sup bound is the stricter (larger) of the boundary-grid
/// estimate and any user-declared bound; it governs the `rho < 1` error
/// paths of composition and the norm/compactness computations.
#[derive(Clone, Debug)]
pub struct SymbolMap {
    kind: SymbolKind,
    declared_sup_bound: Option<f64>,
    boundary_sup: f64,
}

fn boundary_points() -> impl Iterator<Item = Complex64> {
    (0..BOUNDARY_GRID).map(|k| {
        let t = 2.0 * std::f64::consts::PI * k as f64 / BOUNDARY_GRID as f64;
        Complex64::new(t.cos(), t.sin())
    })
}

impl SymbolMap {
    pub fn monomial(a: Complex64, degree: u32) -> Result<Self> {
        let r = a.norm();
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidSymbol(format!(
                "monomial coefficient must satisfy 0 < |a| < 1, got |a| = {r}"
            )));
        }
        if degree == 0 {
            return Err(Error::InvalidSymbol("monomial degree must be >= 1".into()));
        }
        Ok(SymbolMap {
            kind: SymbolKind::Monomial { a, degree },
            declared_sup_bound: None,
            boundary_sup: r,
        })
    }

    pub fn linear_fractional(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self> {
        if (a * d - b * c).norm() < 1e-14 {
            return Err(Error::DegenerateMap("constant map (ad - bc = 0)".into()));
        }
        // cz + d vanishes inside the closed disk iff |d| <= |c|.
        if d.norm() <= c.norm() + 1e-12 {
            return Err(Error::DegenerateMap(format!(
                "denominator root |d/c| = {} inside the closed disk",
                if c.norm() > 0.0 { d.norm() / c.norm() } else { 0.0 }
            )));
        }
        let mut sup: f64 = 0.0;
        let mut denom_min = f64::INFINITY;
        for z in boundary_points() {
            let den = c * z + d;
            denom_min = denom_min.min(den.norm());
            sup = sup.max(((a * z + b) / den).norm());
        }
        if denom_min < 1e-9 {
            return Err(Error::DegenerateMap(format!(
                "|cz + d| not bounded away from zero on the boundary (min {denom_min:.3e})"
            )));
        }
        if sup > 1.0 + 1e-9 {
            return Err(Error::InvalidSymbol(format!(
                "map does not send the disk into itself: boundary sup |phi| = {sup}"
            )));
        }
        Ok(SymbolMap {
            kind: SymbolKind::LinearFractional { a, b, c, d },
            declared_sup_bound: None,
            boundary_sup: sup.min(1.0),
        })
    }

    /// The affine map `a z + b` as a linear-fractional symbol.
    pub fn affine(a: Complex64, b: Complex64) -> Result<Self> {
        SymbolMap::linear_fractional(a, b, Complex64::default(), Complex64::new(1.0, 0.0))
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::InvalidSymbol("zero polynomial symbol".into()));
        }
        let p = PowerSeries::new(coeffs.clone());
        let sup = boundary_points()
            .map(|z| p.eval(z).norm())
            .fold(0.0f64, f64::max);
        if sup > 1.0 + 1e-9 {
            return Err(Error::InvalidSymbol(format!(
                "map does not send the disk into itself: boundary sup |phi| = {sup}"
            )));
        }
        Ok(SymbolMap {
            kind: SymbolKind::Polynomial { coeffs },
            declared_sup_bound: None,
            boundary_sup: sup.min(1.0),
        })
    }

    /// Attach a user-asserted sup bound in `(0, 1]`.
    pub fn with_declared_sup(mut self, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "declared sup bound must lie in (0, 1], got {rho}"
            )));
        }
        self.declared_sup_bound = Some(rho);
        Ok(self)
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    /// Effective sup bound: the stricter of the boundary-grid estimate and
    /// the declared bound.
    pub fn sup_bound(&self) -> f64 {
        match self.declared_sup_bound {
            Some(d) => d.max(self.boundary_sup),
            None => self.boundary_sup,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            SymbolKind::Monomial { a, degree } => a * z.powu(*degree),
            SymbolKind::LinearFractional { a, b, c, d } => (a * z + b) / (c * z + d),
            SymbolKind::Polynomial { coeffs } => {
                let mut acc = Complex64::default();
                for &c in coeffs.iter().rev() {
                    acc = acc * z + c;
                }
                acc
            }
        }
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            SymbolKind::Monomial { a, degree } => {
                a * *degree as f64 * z.powu(*degree - 1)
            }
            SymbolKind::LinearFractional { a, b, c, d } => {
                let den = c * z + d;
                (a * d - b * c) / (den * den)
            }
            SymbolKind::Polynomial { coeffs } => {
                let mut acc = Complex64::default();
                for n in (1..coeffs.len()).rev() {
                    acc = acc * z + coeffs[n] * n as f64;
                }
                acc
            }
        }
    }

    /// Taylor coefficients about 0, truncated at order `n`.
    ///
    /// Linear-fractional maps expand by the geometric series
    /// `1/(cz + d) = (1/d) sum (-c z / d)^k`, which converges on the closed
    /// disk because the denominator has no root there.
    pub fn taylor(&self, n: usize) -> Result<PowerSeries> {
        match &self.kind {
            SymbolKind::Monomial { a, degree } => {
                Ok(PowerSeries::monomial(*a, *degree as usize, n))
            }
            SymbolKind::LinearFractional { a, b, c, d } => {
                if d.norm() == 0.0 {
                    return Err(Error::DegenerateMap("d = 0".into()));
                }
                let q = -c / d;
                if q.norm() >= 1.0 {
                    return Err(Error::DegenerateMap(format!(
                        "|c/d| = {} >= 1",
                        q.norm()
                    )));
                }
                let mut inv = vec![Complex64::default(); n + 1];
                let mut p = Complex64::new(1.0, 0.0) / d;
                for coeff in inv.iter_mut() {
                    *coeff = p;
                    p *= q;
                }
                let inv = PowerSeries::new(inv);
                let lin = PowerSeries::new(vec![*b, *a]).truncate(n);
                Ok(lin.mul_trunc(&inv, n))
            }
            SymbolKind::Polynomial { coeffs } => Ok(PowerSeries::new(coeffs.clone()).truncate(n)),
        }
    }

    pub fn describe(&self) -> String {
        fn c(v: Complex64) -> String {
            if v.im == 0.0 {
                format!("{}", v.re)
            } else {
                format!("({}+{}i)", v.re, v.im)
            }
        }
        match &self.kind {
            SymbolKind::Monomial { a, degree } => {
                if *degree == 1 {
                    format!("{}z", c(*a))
                } else {
                    format!("{}z^{}", c(*a), degree)
                }
            }
            SymbolKind::LinearFractional { a, b, c: cc, d } => {
                format!("({}z+{})/({}z+{})", c(*a), c(*b), c(*cc), c(*d))
            }
            SymbolKind::Polynomial { coeffs } => {
                format!(
                    "poly[{}]",
                    coeffs.iter().map(|&x| c(x)).collect::<Vec<_>>().join(",")
                )
            }
        }
    }
}

/// Truncated coefficients of `f ∘ phi` via Horner recursion on the symbol's
/// Taylor series.
///
/// The truncation tail is `O(rho^(N+1))` per unit of coefficient mass of
/// `f`, with `rho` the effective sup bound of the symbol; `rho >= 1` is
/// rejected because no tail bound is then available.
pub fn compose(f: &PowerSeries, phi: &SymbolMap, n: usize) -> Result<PowerSeries> {
    let rho = phi.sup_bound();
    if rho >= 1.0 {
        return Err(Error::SupBoundAtLeastOne(rho));
    }
    let t = phi.taylor(n)?;
    let top = f.truncation_order();
    let mut acc = PowerSeries::constant(f.coeff(top), n);
    for k in (0..top).rev() {
        acc = acc.mul_trunc(&t, n).plus_constant(f.coeff(k));
    }
    Ok(acc)
}
