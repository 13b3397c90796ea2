use breakup_core::entanglement::{
    coincidence_widths, entanglement_r, eta_star, r_squared_minus_one, report, single_widths,
};
use breakup_core::faddeeva::faddeeva;
use breakup_core::params::{Mode, SystemParams};
use breakup_core::wavepackets::{cm_width, rel_shape, rel_width, CmPacket};
use breakup_core::amplitudes::ce;
use breakup_core::params::coupling_for_rate;
use num_complex::Complex64;
use proptest::prelude::*;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn masses() -> impl Strategy<Value = (f64, f64)> {
    (log_uniform(1e-3, 1e4), log_uniform(1e-4, 1.0)).prop_map(|(m2, ratio)| (ratio * m2, m2))
}

fn system() -> impl Strategy<Value = SystemParams> {
    (
        masses(),
        0.05f64..5.0,
        log_uniform(1e-6, 1e-2),
        log_uniform(1e-2, 1e2),
    )
        .prop_map(|((m1, m2), e_star, g_ratio, dr_cm0)| SystemParams {
            m1,
            m2,
            omega: e_star + 0.5,
            e0: -0.5,
            gamma: g_ratio * e_star,
            dr_cm0,
            mode: Mode::Ionization,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derive_is_pure(p in system()) {
        let a = p.derive().unwrap();
        let b = p.derive().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn eta_star_exchange_symmetric((m1, m2) in masses()) {
        let x = eta_star(m1, m2).unwrap();
        let y = eta_star(m2, m1).unwrap();
        prop_assert!((x - y).abs() <= 1e-15 * x);
    }

    #[test]
    fn r_at_least_one(eta in log_uniform(1e-8, 1e8), (m1, m2) in masses()) {
        let r = entanglement_r(eta, m1, m2).unwrap();
        prop_assert!(r >= 1.0);
        let d = r_squared_minus_one(eta, m1, m2).unwrap();
        prop_assert!(((r * r - 1.0) - d).abs() <= 1e-12 * r * r);
    }

    #[test]
    fn duality_relative(eta in log_uniform(1e-8, 1e8), (m1, m2) in masses()) {
        let mu_over_m = m1 * m2 / ((m1 + m2) * (m1 + m2));
        let r = entanglement_r(eta, m1, m2).unwrap();
        let rd = entanglement_r(mu_over_m / eta, m1, m2).unwrap();
        prop_assert!((r - rd).abs() <= 1e-13 * r);
    }

    #[test]
    fn width_ratios_match_product_form(eta in log_uniform(1e-6, 1e6), (m1, m2) in masses()) {
        let rep = report(eta, m1, m2).unwrap();
        let r = entanglement_r(eta, m1, m2).unwrap();
        prop_assert!((rep.r_e - r).abs() <= 1e-12 * r);
        prop_assert!((rep.r_i - r).abs() <= 1e-12 * r);
    }

    #[test]
    fn widths_monotone_in_eta(eta in log_uniform(1e-6, 1e3), step in 1.0001f64..10.0, (m1, m2) in masses()) {
        let (s_e, s_i) = single_widths(eta, m1, m2).unwrap();
        let (c_e, c_i) = coincidence_widths(eta, m1, m2).unwrap();
        let (s_e2, s_i2) = single_widths(eta * step, m1, m2).unwrap();
        let (c_e2, c_i2) = coincidence_widths(eta * step, m1, m2).unwrap();
        prop_assert!(s_e2 > s_e && s_i2 > s_i);
        prop_assert!(c_e2 > c_e && c_i2 > c_i);
        prop_assert!(c_e < 1.0 && c_i < 1.0 && c_e > 0.0 && c_i > 0.0);
    }

    #[test]
    fn faddeeva_reflection(x in -50.0f64..50.0, y in -6.0f64..6.0) {
        let z = Complex64::new(x, y);
        let lhs = faddeeva(z).unwrap() + faddeeva(-z).unwrap();
        let rhs = 2.0 * (-z * z).exp();
        let scale = 1.0f64.max(rhs.norm());
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
    }

    #[test]
    fn packet_widths_monotone(p in system(), t1 in 0.0f64..1e6, t2 in 0.0f64..1e6) {
        let d = p.derive().unwrap();
        let cm = CmPacket::from_derived(&d);
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(cm_width(hi, &cm) >= cm_width(lo, &cm));
        prop_assert!(rel_width(hi, &d) >= rel_width(lo, &d));
        prop_assert_eq!(cm_width(0.0, &cm), d.dr_cm0);
        prop_assert_eq!(rel_width(0.0, &d), d.dr_rel0);
    }

    #[test]
    fn shape_is_finite_and_nonnegative(rho in -200.0f64..200.0, zeta in log_uniform(1e-3, 1e3)) {
        let s = rel_shape(rho, zeta).unwrap();
        prop_assert!(s.is_finite() && s >= 0.0);
    }

    #[test]
    fn amplitude_bound(p in system(), x in -50.0f64..50.0, tau in 0.0f64..20.0) {
        let d = p.derive().unwrap();
        let c = coupling_for_rate(d.gamma);
        let e = d.e_star + x * d.gamma;
        let t = tau / d.gamma;
        let amp = ce(e, t, c, &p).norm();
        let bound = 2.0 * c / ((e - d.e_star).powi(2) + d.gamma * d.gamma).sqrt();
        prop_assert!(amp <= bound * (1.0 + 1e-12));
    }
}

#[test]
fn eta_star_limits() {
    assert_eq!(eta_star(3.0, 3.0).unwrap(), 0.5);
    for ratio in [1e-4, 1e-6, 1e-8] {
        let e = eta_star(ratio, 1.0).unwrap();
        assert!((e / ratio.sqrt() - 1.0).abs() < ratio);
    }
}
