mod common;

use common::{dipole_array, zc};
use holoris::analysis::{effective_correlation, eigen_decomposition, eigen_spectrum, icsi};
use holoris::correlation::correlation_matrix_isotropic;
use holoris::coupling::{
    coupling_rx, coupling_tx, impedance_matrix_dipoles, CouplingMatrix, Side, DIPOLE_SELF_IMPEDANCE,
};
use holoris::geometry::make_uniform_grid;
use holoris::{CMatrix, CVector};

#[test]
fn identity_and_scaled_coupling() {
    let g = make_uniform_grid(1.5, 1.0, 0.25, 0.25, 1.0).unwrap();
    let r0 = correlation_matrix_isotropic(&g).unwrap();
    let n = g.len();
    let r = effective_correlation(&CouplingMatrix::identity(n, Side::Rx), &r0).unwrap();
    assert!((r.entries() - r0.entries()).camax() < 1e-15);

    let two = CouplingMatrix::from_entries(
        CMatrix::identity(n, n) * zc(2.0, 0.0),
        Side::Tx,
        zc(0.0, 0.0),
    )
    .unwrap();
    let r = effective_correlation(&two, &r0).unwrap();
    assert!((r.entries() - r0.entries().scale(4.0)).camax() < 1e-14);
    let a = eigen_spectrum(&r0, false).unwrap();
    let b = eigen_spectrum(&r, false).unwrap();
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((4.0 * x - y).abs() < 1e-12);
    }
}

#[test]
fn eigenpairs_satisfy_residual_bound() {
    let g = dipole_array(0.25);
    let r0 = correlation_matrix_isotropic(&g).unwrap();
    let z = impedance_matrix_dipoles(&g).unwrap();
    for r in [
        r0.clone(),
        effective_correlation(&coupling_rx(&z, DIPOLE_SELF_IMPEDANCE.conj()).unwrap(), &r0)
            .unwrap(),
    ] {
        let (vals, vecs) = eigen_decomposition(&r);
        let norm = r.entries().norm();
        for (j, &lam) in vals.iter().enumerate() {
            let v: CVector = vecs.column(j).into_owned();
            let res = r.entries() * &v - &v * zc(lam, 0.0);
            assert!(res.norm() <= 1e-8 * norm);
        }
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn quarter_wavelength_coupling_free_icsi() {
    let r0 = correlation_matrix_isotropic(&dipole_array(0.25)).unwrap();
    assert!((icsi(r0.entries()).unwrap() - 0.0646).abs() < 0.005);
}

#[test]
fn tx_coupling_raises_the_largest_eigenvalue() {
    for dx in [0.5, 0.25, 0.125] {
        let g = dipole_array(dx);
        let r0 = correlation_matrix_isotropic(&g).unwrap();
        let z = impedance_matrix_dipoles(&g).unwrap();
        let c = coupling_tx(&z, DIPOLE_SELF_IMPEDANCE.conj()).unwrap();
        let r = effective_correlation(&c, &r0).unwrap();
        let top0 = eigen_spectrum(&r0, false).unwrap().values()[0];
        let top = eigen_spectrum(&r, false).unwrap().values()[0];
        assert!(top > top0, "dx={dx}: {top} vs {top0}");
    }
}

// Deciles of the 12λ × 12λ, λ/3 spectrum of R₀/N, from an independent
// LAPACK evaluation.
#[test]
fn large_aperture_eigenvalue_deciles() {
    const GOLDEN: [f64; 7] = [
        0.004745913771549922,
        0.0020789766454814775,
        0.0014379142678232195,
        0.0011699236781298338,
        0.0002727477140977669,
        3.015463839337424e-07,
        8.97151085019186e-11,
    ];
    let g = make_uniform_grid(12.0, 12.0, 1.0 / 3.0, 1.0 / 3.0, 1.0).unwrap();
    let s = eigen_spectrum(&correlation_matrix_isotropic(&g).unwrap(), true).unwrap();
    let n = s.len();
    for (k, want) in GOLDEN.iter().enumerate() {
        let got = s.values()[k * n / 10];
        assert!(
            (got - want).abs() <= 0.02 * want,
            "decile {k}: {got} vs {want}"
        );
    }
    assert!((s.sum() - 1.0).abs() < 1e-9);
}
