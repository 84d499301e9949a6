mod common;

use common::{dipole_array, dipole_oracle, zc};
use holoris::analysis::{effective_correlation, eigen_spectrum, icsi};
use holoris::correlation::correlation_matrix_isotropic;
use holoris::correlation::CorrelationKind;
use holoris::correlation::CorrelationMatrix;
use holoris::coupling::{
    coupling_rx, coupling_tx, dipole_mutual_impedance, impedance_matrix_dipoles,
    impedance_matrix_isotropic, DIPOLE_SELF_IMPEDANCE,
};
use holoris::geometry::make_uniform_grid;
use proptest::prelude::*;

#[test]
fn closed_form_matches_induced_emf_integral() {
    let cases = [
        (0.5, 0.0),
        (0.25, 0.0),
        (0.125, 0.0),
        (1.0, 0.0),
        (3.7, 0.0),
        (0.5, 0.52),
        (0.125, 0.52),
        (0.25, 1.04),
        (0.0, 0.52),
        (0.0, 1.04),
        (0.0, 3.64),
        (1e-6, 0.52),
        (2.0, 2.6),
        (4.0, 3.64),
        (0.375, 0.52),
        (0.75, 1.56),
        (0.1, 0.7),
        (1.3, 0.2),
        (10.0, 0.0),
        (50.0, 5.0),
    ];
    for (dh, dv) in cases {
        let z = dipole_mutual_impedance(dh, dv, 1.0).unwrap();
        let o = dipole_oracle(dh, dv, 1.0);
        assert!((z - o).norm() < 0.05, "({dh}, {dv}): {z} vs {o}");
    }
}

#[test]
fn far_separation_decays() {
    assert!(dipole_mutual_impedance(1e3, 0.0, 1.0).unwrap().norm() < 0.1);
    assert!(dipole_oracle(1e3, 0.0, 1.0).norm() < 0.1);
}

#[test]
fn limits_are_continuous() {
    let side = dipole_mutual_impedance(0.5, 0.0, 1.0).unwrap();
    let near_side = dipole_mutual_impedance(0.5, 1e-10, 1.0).unwrap();
    assert!((side - near_side).norm() < 1e-8);
    let collinear = dipole_mutual_impedance(0.0, 0.52, 1.0).unwrap();
    let near_collinear = dipole_mutual_impedance(1e-10, 0.52, 1.0).unwrap();
    assert!((collinear - near_collinear).norm() < 1e-8);
}

#[test]
fn isotropic_impedance_is_scaled_correlation() {
    let g = dipole_array(0.5);
    let z = impedance_matrix_isotropic(&g, 73.1).unwrap();
    let r0 = correlation_matrix_isotropic(&g).unwrap();
    assert!((z.entries() - r0.entries().scale(73.1)).camax() < 1e-12);
    let zr = CorrelationMatrix::new(z.entries().scale(1.0 / 73.1), CorrelationKind::EffectiveRx)
        .unwrap();
    assert!(eigen_spectrum(&zr, false).is_ok());
}

#[test]
fn dipole_mutual_terms_never_vanish_but_isotropic_ones_do() {
    let g = make_uniform_grid(3.0, 1.0, 0.5, 0.5, 1.0).unwrap();
    let iso = impedance_matrix_isotropic(&g, 73.1).unwrap();
    assert!(iso.entries()[(0, 1)].norm() < 1e-12);
    let z = impedance_matrix_dipoles(&dipole_array(0.5)).unwrap();
    assert!(z.entries().iter().all(|v| v.norm() > 1e-3));
    assert!(z
        .entries()
        .diagonal()
        .iter()
        .all(|&v| v == DIPOLE_SELF_IMPEDANCE));
}

#[test]
fn tx_coupling_sparsity_decreases_with_density() {
    let mut last = f64::INFINITY;
    for dx in [0.5, 0.25, 0.125] {
        let z = impedance_matrix_dipoles(&dipole_array(dx)).unwrap();
        let c = coupling_tx(&z, DIPOLE_SELF_IMPEDANCE.conj()).unwrap();
        let e = c.entries();
        let n = e.nrows();
        let mut big = 0usize;
        for i in 0..n {
            for j in 0..n {
                if e[(i, j)].norm() >= 0.01 * e[(i, i)].norm() {
                    big += 1;
                }
            }
        }
        let frac = big as f64 / (n * n) as f64;
        assert!(frac < last, "dx={dx}: {frac} not below {last}");
        last = frac;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // With zL = r_iso both factors of the receive coupling scale with r_iso,
    // leaving C_R = 2(R₀ + I)⁻¹.
    #[test]
    fn isotropic_rx_is_invariant_to_r_iso(r_iso in 1.0f64..1000.0) {
        let g = make_uniform_grid(1.5, 1.0, 0.25, 0.25, 1.0).unwrap();
        let r0 = correlation_matrix_isotropic(&g).unwrap();
        let reference = {
            let z = impedance_matrix_isotropic(&g, 73.1).unwrap();
            coupling_rx(&z, zc(73.1, 0.0)).unwrap()
        };
        let z = impedance_matrix_isotropic(&g, r_iso).unwrap();
        let c = coupling_rx(&z, zc(r_iso, 0.0)).unwrap();
        prop_assert!((c.entries() - reference.entries()).camax() < 1e-10);
        let a = effective_correlation(&c, &r0).unwrap();
        let b = effective_correlation(&reference, &r0).unwrap();
        prop_assert!((icsi(a.entries()).unwrap() - icsi(b.entries()).unwrap()).abs() < 1e-10);
    }
}
