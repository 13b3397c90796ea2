use breakup_core::dynamics::{default_time_grid, evolve, trend, with_eta0, Trend};
use breakup_core::entanglement::r_squared_minus_one;
use breakup_core::params::{Mode, SystemParams};
use proptest::prelude::*;

fn base(m1: f64, m2: f64) -> SystemParams {
    SystemParams {
        m1,
        m2,
        omega: 1.5,
        e0: -0.5,
        gamma: 1e-3,
        dr_cm0: 1.0,
        mode: Mode::Ionization,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn r_returns_to_initial_value(
        ratio in (1e-4f64.ln()..0.0).prop_map(f64::exp),
        rel in (1e-3f64.ln()..1e3f64.ln()).prop_map(f64::exp),
    ) {
        let p0 = base(ratio, 1.0);
        let d0 = p0.derive().unwrap();
        prop_assume!((rel - 1.0).abs() > 1e-3);
        let p = with_eta0(&p0, rel * d0.eta_star).unwrap();
        let d = p.derive().unwrap();
        let tr = evolve(&p, &default_time_grid(&d, 200).unwrap()).unwrap();
        let n = tr.len() - 1;
        prop_assert!((tr.r_e[n] - tr.r_e[0]).abs() <= 1e-3 * tr.r_e[0]);
        prop_assert!((tr.r_i[n] - tr.r_i[0]).abs() <= 1e-3 * tr.r_i[0]);
    }

    #[test]
    fn sign_rule(
        ratio in (1e-4f64.ln()..0.0).prop_map(f64::exp),
        rel in (1e-3f64.ln()..1e3f64.ln()).prop_map(f64::exp),
    ) {
        prop_assume!((rel - 1.0).abs() > 1e-3);
        let p0 = base(ratio, 1.0);
        let d0 = p0.derive().unwrap();
        let p = with_eta0(&p0, rel * d0.eta_star).unwrap();
        let d = p.derive().unwrap();
        let tr = evolve(&p, &default_time_grid(&d, 200).unwrap()).unwrap();
        let rising = rel < 1.0;
        prop_assert_eq!(trend(&d), if rising { Trend::Rising } else { Trend::Falling });
        for w in tr.eta.windows(2) {
            let step = w[1] - w[0];
            if rising {
                prop_assert!(step >= 0.0);
            } else {
                prop_assert!(step <= 0.0);
            }
        }
        let net = tr.eta[tr.len() - 1] - tr.eta[0];
        prop_assert_eq!(net > 0.0, rising);
    }
}

// R dips to 1 only where eta passes eta*
#[test]
fn minimum_of_r_where_eta_crosses_eta_star() {
    let p0 = base(1.0, 9.0);
    let d0 = p0.derive().unwrap();
    for rel in [0.1, 10.0] {
        let p = with_eta0(&p0, rel * d0.eta_star).unwrap();
        let d = p.derive().unwrap();
        let tr = evolve(&p, &default_time_grid(&d, 2000).unwrap()).unwrap();
        let imin = (0..tr.len())
            .min_by(|&i, &j| tr.r_e[i].total_cmp(&tr.r_e[j]))
            .unwrap();
        assert!(imin > 0 && imin < tr.len() - 1);
        let lo = tr.eta[imin - 1].min(tr.eta[imin + 1]);
        let hi = tr.eta[imin - 1].max(tr.eta[imin + 1]);
        assert!(lo <= d.eta_star && d.eta_star <= hi);
        let excess = r_squared_minus_one(tr.eta[imin], p.m1, p.m2).unwrap();
        assert!(excess < 1e-3);
        // away from the crossing, R stays clearly above 1
        for (i, &e) in tr.eta.iter().enumerate() {
            if (e / d.eta_star).ln().abs() > 0.1 {
                assert!(tr.r_e[i] > 1.0 + 1e-3, "t index {i}");
            }
        }
    }
}
