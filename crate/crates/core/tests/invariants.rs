use mqnmr::oracle::DenseSimulation;
use mqnmr::{BlockSimulation, EntanglementReport, InitialStateMode, SpinCount, TemperatureParams};
use proptest::prelude::*;

fn mode() -> impl Strategy<Value = InitialStateMode> {
    prop_oneof![Just(InitialStateMode::Exact), Just(InitialStateMode::Linearized)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_invariants(n in 1usize..60, b in 0.0f64..3.0, t in 0.0f64..6.0, m in mode()) {
        // keep the linearized state positive
        let b = if m == InitialStateMode::Linearized { b / (n * n) as f64 } else { b };
        let sim = BlockSimulation::new(SpinCount::new(n).unwrap(), TemperatureParams::from_b(b, m).unwrap()).unwrap();
        let s = sim.spectrum_at(t).unwrap();
        prop_assert!((s.sum() - 1.0).abs() <= 1e-12);
        prop_assert!(s.max_odd() < 1e-14);
        for k in 1..=n as i32 {
            prop_assert_eq!(s.j(k).to_bits(), s.j(-k).to_bits());
        }
        prop_assert!((sim.purity_at(t) - sim.purity()).abs() <= 1e-12 * sim.purity().max(1.0));
        prop_assert!(EntanglementReport::from_spectrum(&s, n).within_heisenberg_cap());
    }

    #[test]
    fn block_matches_dense(n in 2usize..=6, b in 0.0f64..2.0, t in 0.0f64..4.0) {
        let params = TemperatureParams::from_b(b, InitialStateMode::Exact).unwrap();
        let block = BlockSimulation::new(SpinCount::new(n).unwrap(), params).unwrap().spectrum_at(t).unwrap();
        let dense = DenseSimulation::new(n, &params).unwrap().spectrum_at(t);
        for k in -(n as i32)..=n as i32 {
            prop_assert!((block.j(k) - dense.j(k)).abs() <= 1e-10, "n={} J_{}: {} vs {}", n, k, block.j(k), dense.j(k));
        }
    }
}
