//! Companion map for linear-fractional symbols and numerical checks of
//! the adjoint intertwining identity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators;
use crate::series::{PowerSeries, SymbolKind, SymbolMap};
use crate::space::{self, WeightedSpace};

/// A linear-fractional symbol `phi = (az+b)/(cz+d)` together with its
/// companion `sigma(z) = (conj(a) z - conj(c)) / (-conj(b) z + conj(d))`.
#[derive(Clone, Debug)]
pub struct CompanionPair {
    pub phi: SymbolMap,
    pub sigma: SymbolMap,
    /// `phi(0) = b/d`.
    pub phi0: Complex64,
    /// `sigma(0) = -conj(c)/conj(d)`.
    pub sigma0: Complex64,
}

/// The companion of a linear-fractional self-map of the disk.  Errors
/// unless `phi` is linear-fractional with sup norm below 1.
pub fn companion(phi: &SymbolMap) -> Result<CompanionPair> {
    let (a, b, c, d) = match phi.kind() {
        SymbolKind::LinearFractional { a, b, c, d } => (*a, *b, *c, *d),
        _ => {
            return Err(Error::InvalidSymbol(
                "companion map requires a linear-fractional symbol".into(),
            ))
        }
    };
    if phi.sup_bound() > 1.0 + 1e-9 {
        return Err(Error::SupBoundAtLeastOne(phi.sup_bound()));
    }
    let sigma = SymbolMap::linear_fractional(a.conj(), -c.conj(), -b.conj(), d.conj())?;
    if sigma.sup_bound() >= 1.0 + 1e-12 {
        return Err(Error::InvalidSymbol(
            "companion map is not a self-map of the disk".into(),
        ));
    }
    let phi0 = phi.eval(Complex64::default());
    let sigma0 = sigma.eval(Complex64::default());
    debug_assert!((phi0 - b / d).norm() < 1e-14);
    debug_assert!((sigma0 + c.conj() / d.conj()).norm() < 1e-14);
    Ok(CompanionPair {
        phi: phi.clone(),
        sigma,
        phi0,
        sigma0,
    })
}

/// The two multiplier symbols of the intertwining identity, as truncated
/// series: the derivative-order kernels at `phi(0)` and `sigma(0)`,
/// which work out to `conj(d) z / (-conj(b) z + conj(d))` and
/// `d z / (cz + d)`.
pub fn multiplier_kernels(pair: &CompanionPair, n: usize) -> Result<(PowerSeries, PowerSeries)> {
    let at_phi0 = space::kernel(pair.phi0, 1, n)?;
    let at_sigma0 = space::kernel(pair.sigma0, 1, n)?;
    Ok((at_phi0.series().clone(), at_sigma0.series().clone()))
}

/// Largest-entry residual of the identity
/// `D_phi^* T^*_(K_(sigma(0))^(1)) = T_(K_(phi(0))^(1)) D_sigma`
/// at truncation `n`, measured on the leading `(n/2) x (n/2)` block to
/// avoid the cut-off contamination in the trailing rows.
pub fn verify_identity(phi: &SymbolMap, n: usize) -> Result<f64> {
    if phi.sup_bound() >= 1.0 {
        return Err(Error::SupBoundAtLeastOne(phi.sup_bound()));
    }
    let pair = companion(phi)?;
    let (k_phi0, k_sigma0) = multiplier_kernels(&pair, n)?;
    let sp = WeightedSpace::Dirichlet;
    let left = operators::product(
        &operators::build_dphi(&pair.phi, sp, n)?.adjoint(),
        &operators::build_tpsi(&k_sigma0, sp, n)?.adjoint(),
    )?;
    let right = operators::product(
        &operators::build_tpsi(&k_phi0, sp, n)?,
        &operators::build_dphi(&pair.sigma, sp, n)?,
    )?;
    Ok(left.max_block_diff(&right, n / 2, n / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_dphi, build_tpsi};
    use nalgebra::DVector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn companion_of_dilation_is_dilation() {
        let phi = SymbolMap::affine(c(0.3, 0.0), Complex64::default()).unwrap();
        let pair = companion(&phi).unwrap();
        for i in 0..10 {
            let z = Complex64::from_polar(0.08 * i as f64, 0.7 * i as f64);
            assert!((pair.sigma.eval(z) - c(0.3, 0.0) * z).norm() < 1e-14);
        }
        assert_eq!(pair.phi0, Complex64::default());
        assert_eq!(pair.sigma0, Complex64::default());
    }

    #[test]
    fn involution_is_self_companion() {
        // phi_a(z) = (a - z)/(1 - conj(a) z) as coefficients (-1, a, -conj(a), 1)
        let a = c(0.4, 0.2);
        let phi = SymbolMap::linear_fractional(c(-1.0, 0.0), a, -a.conj(), c(1.0, 0.0)).unwrap();
        let pair = companion(&phi).unwrap();
        for i in 0..10 {
            let z = Complex64::from_polar(0.09 * i as f64, 1.1 * i as f64);
            assert!((pair.sigma.eval(z) - phi.eval(z)).norm() < 1e-13);
        }
    }

    #[test]
    fn companion_of_affine_map() {
        let phi = SymbolMap::affine(c(0.3, 0.0), c(0.2, 0.0)).unwrap();
        let pair = companion(&phi).unwrap();
        // sigma(z) = 0.3 z / (-0.2 z + 1)
        let expect = SymbolMap::linear_fractional(
            c(0.3, 0.0),
            Complex64::default(),
            c(-0.2, 0.0),
            c(1.0, 0.0),
        )
        .unwrap();
        for i in 0..10 {
            let z = Complex64::from_polar(0.09 * i as f64, 0.5 * i as f64);
            assert!((pair.sigma.eval(z) - expect.eval(z)).norm() < 1e-14);
        }
        assert!((pair.phi0 - c(0.2, 0.0)).norm() < 1e-15);
        assert_eq!(pair.sigma0, Complex64::default());
    }

    #[test]
    fn companion_is_an_involution_on_pairs() {
        let phi = SymbolMap::affine(c(0.25, 0.1), c(0.3, -0.1)).unwrap();
        let pair = companion(&phi).unwrap();
        let back = companion(&pair.sigma).unwrap();
        for i in 0..10 {
            let z = Complex64::from_polar(0.09 * i as f64, 0.9 * i as f64);
            assert!((back.sigma.eval(z) - phi.eval(z)).norm() < 1e-13);
        }
    }

    #[test]
    fn companion_rejects_non_linear_fractional() {
        let phi = SymbolMap::monomial(c(0.3, 0.0), 2).unwrap();
        assert!(companion(&phi).is_err());
    }

    #[test]
    fn multiplier_kernels_match_geometric_expansions() {
        let phi = SymbolMap::affine(c(0.3, 0.0), c(0.2, 0.0)).unwrap();
        let pair = companion(&phi).unwrap();
        let (k_phi0, k_sigma0) = multiplier_kernels(&pair, 12).unwrap();
        // K_(phi(0))^(1)(z) = z/(1 - 0.2 z): coefficients 0.2^(n-1)
        assert_eq!(k_phi0.coeff(0), Complex64::default());
        for n in 1..=12 {
            assert!((k_phi0.coeff(n) - c(0.2f64.powi(n as i32 - 1), 0.0)).norm() < 1e-15);
        }
        // sigma(0) = 0 so the other multiplier is z
        assert_eq!(k_sigma0.coeff(1), c(1.0, 0.0));
        for n in (0..=12).filter(|&n| n != 1) {
            assert_eq!(k_sigma0.coeff(n), Complex64::default());
        }
    }

    /// Coefficient vector of a kernel of either order at `w`.
    fn kernel_vec(w: Complex64, order: u8, n: usize) -> DVector<Complex64> {
        let k = space::kernel(w, order, n).unwrap();
        DVector::from_iterator(n + 1, (0..=n).map(|i| k.series().coeff(i)))
    }

    fn to_series(v: &DVector<Complex64>) -> PowerSeries {
        PowerSeries::new(v.iter().copied().collect())
    }

    #[test]
    fn adjoint_of_multiplication_scales_kernels() {
        // T_psi^* K_w = conj(psi(w)) K_w
        let psi = PowerSeries::from_real(&{
            let mut v = vec![0.0; 65];
            v[1] = 1.0;
            v[2] = 0.5;
            v
        });
        let n = 64;
        let t = build_tpsi(&psi, WeightedSpace::Dirichlet, n).unwrap();
        let ts = t.adjoint();
        for &w in &[c(0.2, 0.1), c(-0.4, 0.3), c(0.0, 0.55)] {
            let k = to_series(&kernel_vec(w, 0, n));
            let got = ts.apply(&k).unwrap();
            let expect = k.scale(psi.eval(w).conj());
            let mut worst = 0.0f64;
            for i in 0..=n / 2 {
                worst = worst.max((got.coeff(i) - expect.coeff(i)).norm());
            }
            assert!(worst < 1e-8, "w {w}: {worst}");
        }
    }

    #[test]
    fn adjoint_sends_kernels_to_derivative_kernels() {
        // D_phi^* K_w = K_(phi(w))^(1)
        let phi = SymbolMap::affine(c(0.3, 0.0), c(0.2, 0.0)).unwrap();
        let n = 128;
        let ds = build_dphi(&phi, WeightedSpace::Dirichlet, n).unwrap().adjoint();
        for i in 0..10 {
            let w = Complex64::from_polar(0.08 * (i as f64 + 0.1), 0.63 * i as f64);
            let kv = to_series(&kernel_vec(w, 0, n));
            let got = ds.apply(&kv).unwrap();
            let expect = space::kernel(phi.eval(w), 1, n).unwrap();
            let mut worst = 0.0f64;
            for j in 0..=n / 2 {
                worst = worst.max((got.coeff(j) - expect.series().coeff(j)).norm());
            }
            assert!(worst < 1e-8, "w {w}: {worst}");
        }
    }

    #[test]
    fn identity_holds_for_dilation() {
        let phi = SymbolMap::affine(c(0.3, 0.0), Complex64::default()).unwrap();
        assert!(verify_identity(&phi, 64).unwrap() <= 1e-10);
    }

    #[test]
    fn identity_residual_decays_with_truncation() {
        // residuals either decrease with truncation or sit at the machine
        // floor from the start (the affine case is exact up to roundoff)
        let phi = SymbolMap::affine(c(0.3, 0.0), c(0.2, 0.0)).unwrap();
        let r64 = verify_identity(&phi, 64).unwrap();
        let r128 = verify_identity(&phi, 128).unwrap();
        assert!(r64 <= 1e-8, "r64 {r64}");
        assert!(r128 < r64 || r128 <= 1e-14, "r64 {r64} r128 {r128}");
    }

    #[test]
    fn identity_on_kernel_vectors_pointwise() {
        let phi = SymbolMap::affine(c(0.3, 0.0), c(0.2, 0.0)).unwrap();
        let n = 128;
        let pair = companion(&phi).unwrap();
        let (k_phi0, k_sigma0) = multiplier_kernels(&pair, n).unwrap();
        let sp = WeightedSpace::Dirichlet;
        let left = operators::product(
            &build_dphi(&pair.phi, sp, n).unwrap().adjoint(),
            &build_tpsi(&k_sigma0, sp, n).unwrap().adjoint(),
        )
        .unwrap();
        let right = operators::product(
            &build_tpsi(&k_phi0, sp, n).unwrap(),
            &build_dphi(&pair.sigma, sp, n).unwrap(),
        )
        .unwrap();
        let pts: Vec<Complex64> = (0..5)
            .map(|i| Complex64::from_polar(0.1 * (i as f64 + 0.3), 1.3 * i as f64))
            .collect();
        for &w in &[c(0.0, 0.0), c(0.3, 0.0), c(0.0, 0.5)] {
            let kv = to_series(&kernel_vec(w, 0, n));
            let lf = left.apply(&kv).unwrap();
            let rf = right.apply(&kv).unwrap();
            for &z in &pts {
                assert!((lf.eval(z) - rf.eval(z)).norm() <= 1e-8, "w {w} z {z}");
            }
        }
    }
}
