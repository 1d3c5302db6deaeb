use proptest::prelude::*;

use wedge_tracking::gasdyn::State;
use wedge_tracking::tracking::{
    run, InflowProfile, InflowRow, RunConfig, Termination, WedgeBoundary,
};

fn config(mach: f64, jump: f64, corner: f64, seed: u64) -> RunConfig {
    let mut cfg = RunConfig::perturbed_wedge(seed, 3e-2);
    let g = cfg.gas;
    let a = 10f64.to_radians();
    cfg.inflow = InflowProfile::step(vec![
        InflowRow {
            y: f64::NEG_INFINITY,
            state: State::from_mach(mach, a, 1.0, &g),
        },
        InflowRow {
            y: -0.4,
            state: State::from_mach(mach + jump, a, 1.0 + jump, &g),
        },
    ]);
    cfg.boundary = WedgeBoundary::from_face_angles(&[0.25], &[corner]).unwrap();
    cfg.x_max = 0.8;
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_complete_with_a_consistent_front_set(
        mach in 2.5f64..3.5,
        jump in -0.02f64..0.02,
        corner in -0.01f64..0.01,
        seed in 0u64..1000,
    ) {
        let cfg = config(mach, jump, corner, seed);
        let r = run(&cfg).unwrap();
        prop_assert_eq!(&r.termination, &Termination::Completed);
        for ev in r.history.events.iter().step_by(7) {
            let fs = r.history.front_set_at(ev.x);
            prop_assert_eq!(fs.chain_gap(), 0.0);
            prop_assert_eq!(fs.fronts.iter().filter(|f| f.is_strong()).count(), 1);
            for w in fs.fronts.windows(2) {
                prop_assert!(w[0].y_at(ev.x) <= w[1].y_at(ev.x) + 1e-12);
            }
        }
        prop_assert!(r.reports.iter().all(|q| q.f.is_finite() && q.nonphysical >= 0.0));
    }

    #[test]
    fn runs_are_deterministic(seed in 0u64..1000) {
        let cfg = config(3.0, 0.01, 0.005, seed);
        let (a, b) = (run(&cfg).unwrap(), run(&cfg).unwrap());
        prop_assert_eq!(a.history.events, b.history.events);
    }
}
