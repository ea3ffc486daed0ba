//! Finite (Galerkin) matrix representations of composition,
//! composition-differentiation, and multiplication operators between
//! weighted Hardy spaces.
//!
//! Entry `(m, n)` is `<T e_n, e_m>` for the represented operator `T`, with
//! `e_n` the orthonormal bases of the domain and codomain.  Matrix columns
//! therefore hold basis coefficients, and adjoints are literal conjugate
//! transposes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{PowerSeries, SymbolMap};
use crate::space::WeightedSpace;

/// Dense matrix of an operator in orthonormal bases, with truncation
/// metadata.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    domain: WeightedSpace,
    codomain: WeightedSpace,
    trunc: usize,
    symbol: String,
    sup_warning: bool,
}

impl OperatorMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn domain(&self) -> WeightedSpace {
        self.domain
    }

    pub fn codomain(&self) -> WeightedSpace {
        self.codomain
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    /// Set when the symbol's sup bound is not strictly below one, i.e. the
    /// matrix is a truncation of a (possibly) unbounded operator.
    pub fn sup_warning(&self) -> bool {
        self.sup_warning
    }

    /// Conjugate transpose with domain and codomain swapped.
    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.adjoint(),
            domain: self.codomain,
            codomain: self.domain,
            trunc: self.trunc,
            symbol: format!("adjoint({})", self.symbol),
            sup_warning: self.sup_warning,
        }
    }

    /// Apply to the Taylor coefficients of `f`: convert to basis
    /// coefficients (`a_n beta(n)`), multiply, convert back.
    pub fn apply(&self, f: &PowerSeries) -> Result<PowerSeries> {
        if f.truncation_order() < self.trunc {
            return Err(Error::TruncationMismatch {
                expected: self.trunc,
                got: f.truncation_order(),
            });
        }
        let v = DVector::from_fn(self.trunc + 1, |n, _| f.coeff(n) * self.domain.weight(n));
        let w = &self.entries * v;
        let coeffs = (0..=self.trunc)
            .map(|m| w[m] / self.codomain.weight(m))
            .collect();
        Ok(PowerSeries::new(coeffs))
    }

    /// Largest entrywise absolute difference over the leading
    /// `rows x cols` block.
    pub fn max_block_diff(&self, other: &OperatorMatrix, rows: usize, cols: usize) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..rows.min(self.trunc + 1) {
            for n in 0..cols.min(self.trunc + 1) {
                worst = worst.max((self.entries[(m, n)] - other.entries[(m, n)]).norm());
            }
        }
        worst
    }
}

/// Matrix product `l * r` (apply `r` first); spaces and truncations must
/// be compatible.
pub fn product(l: &OperatorMatrix, r: &OperatorMatrix) -> Result<OperatorMatrix> {
    if l.trunc != r.trunc {
        return Err(Error::TruncationMismatch {
            expected: l.trunc,
            got: r.trunc,
        });
    }
    if l.domain != r.codomain {
        return Err(Error::InvalidArgument(format!(
            "space mismatch in product: {:?} vs {:?}",
            l.domain, r.codomain
        )));
    }
    Ok(OperatorMatrix {
        entries: &l.entries * &r.entries,
        domain: r.domain,
        codomain: l.codomain,
        trunc: l.trunc,
        symbol: format!("{} * {}", l.symbol, r.symbol),
        sup_warning: l.sup_warning || r.sup_warning,
    })
}

/// Truncated matrix of the composition-differentiation operator
/// `D_phi f = f' ∘ phi` on `sp`.
///
/// Column `n` holds the codomain basis coefficients of `e_n' ∘ phi`; the
/// powers of the symbol's Taylor series are accumulated incrementally so
/// the build costs one truncated product per column.
pub fn build_dphi(phi: &SymbolMap, sp: WeightedSpace, n: usize) -> Result<OperatorMatrix> {
    build_columns(phi, sp, sp, n, ColumnFamily::DerivativeComposition)
}

/// Truncated matrix of the composition operator `C_phi f = f ∘ phi` from
/// `domain` to `codomain`.
pub fn build_cphi(
    phi: &SymbolMap,
    domain: WeightedSpace,
    codomain: WeightedSpace,
    n: usize,
) -> Result<OperatorMatrix> {
    build_columns(phi, domain, codomain, n, ColumnFamily::Composition)
}

enum ColumnFamily {
    Composition,
    DerivativeComposition,
}

fn build_columns(
    phi: &SymbolMap,
    domain: WeightedSpace,
    codomain: WeightedSpace,
    n: usize,
    family: ColumnFamily,
) -> Result<OperatorMatrix> {
    let t = phi.taylor(n)?;
    let mut entries = DMatrix::zeros(n + 1, n + 1);
    // power = t^(col) for composition, t^(col - 1) for derivatives.
    let mut power = PowerSeries::constant(Complex64::new(1.0, 0.0), n);
    match family {
        ColumnFamily::Composition => {
            for col in 0..=n {
                // C e_col = t^col / beta_dom(col)
                let scale = 1.0 / domain.weight(col);
                for row in 0..=n {
                    entries[(row, col)] = power.coeff(row) * scale * codomain.weight(row);
                }
                if col < n {
                    power = power.mul_trunc(&t, n);
                }
            }
        }
        ColumnFamily::DerivativeComposition => {
            // D e_0 = 0; D e_col = (col / beta_dom(col)) t^(col - 1).
            for col in 1..=n {
                let scale = col as f64 / domain.weight(col);
                for row in 0..=n {
                    entries[(row, col)] = power.coeff(row) * scale * codomain.weight(row);
                }
                if col < n {
                    power = power.mul_trunc(&t, n);
                }
            }
        }
    }
    let op = match family {
        ColumnFamily::Composition => "C",
        ColumnFamily::DerivativeComposition => "D",
    };
    Ok(OperatorMatrix {
        entries,
        domain,
        codomain,
        trunc: n,
        symbol: format!("{op}[{}]", phi.describe()),
        sup_warning: phi.sup_bound() >= 1.0,
    })
}

/// Truncated matrix of the multiplication operator `T_psi f = psi * f` on
/// `sp`.  The multiplier must be truncated at order at least `n`.
pub fn build_tpsi(psi: &PowerSeries, sp: WeightedSpace, n: usize) -> Result<OperatorMatrix> {
    if psi.truncation_order() < n {
        return Err(Error::TruncationMismatch {
            expected: n,
            got: psi.truncation_order(),
        });
    }
    let mut entries = DMatrix::zeros(n + 1, n + 1);
    for col in 0..=n {
        // psi * e_col: coefficient of z^row is psi_(row - col) / beta(col).
        for row in col..=n {
            entries[(row, col)] = psi.coeff(row - col) * (sp.weight(row) / sp.weight(col));
        }
    }
    Ok(OperatorMatrix {
        entries,
        domain: sp,
        codomain: sp,
        trunc: n,
        symbol: "T[psi]".into(),
        sup_warning: false,
    })
}
