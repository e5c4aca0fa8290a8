use regalpha_web::{cancellation_check, symbol_curves, Simulation};

#[test]
fn simulation_dissipates_energy_and_exposes_fields() {
    let mut sim = Simulation::new("SBM-AC", 32, 0.2, 0.05, 0.2, 3).unwrap();
    assert_eq!(sim.n(), 32);
    assert!(sim.dt() > 0.0 && sim.dt() <= 0.01);
    let e0 = sim.energy();
    let mut last = e0;
    for _ in 0..10 {
        sim.step(5).unwrap();
        let e = sim.energy();
        assert!(e <= last + 1e-12, "{e} > {last}");
        last = e;
    }
    assert!((sim.time() - 50.0 * sim.dt()).abs() < 1e-9);
    assert!(last < e0);
    assert!(sim.max_abs_phi() < 1.1);
    let phase = sim.phase();
    let vort = sim.vorticity();
    assert_eq!(phase.len(), 32 * 32);
    assert_eq!(vort.len(), 32 * 32);
    assert!(phase.iter().chain(&vort).all(|v| v.is_finite()));
    // vorticity of a periodic field has zero mean
    assert!(vort.iter().sum::<f64>().abs() / 1024.0 < 1e-12);
}

#[test]
fn invalid_inputs_are_reported() {
    assert!(Simulation::new("nope", 32, 0.2, 0.05, 0.2, 0).is_err());
    assert!(Simulation::new("NSE-AC", 7, 0.2, 0.05, 0.2, 0).is_err());
    assert!(Simulation::new("NSE-AC", 32, 0.2, 0.05, -1.0, 0).is_err());
    assert!(symbol_curves("nope", 0.2, 0.05, 4).is_err());
    assert!(cancellation_check("nope", 0).is_err());
}

#[test]
fn symbol_curves_match_closed_forms() {
    let (alpha, nu) = (0.5, 0.1);
    let rows = symbol_curves("NSV-AC", alpha, nu, 8).unwrap();
    assert_eq!(rows.len(), 9 * 5);
    for row in rows.chunks(5) {
        let s = row[0] * row[0];
        let h = 1.0 + alpha * alpha * s;
        assert!((row[1] - nu * s / h).abs() < 1e-15);
        assert!((row[2] - 1.0 / h).abs() < 1e-15);
        assert!((row[3] - 1.0 / h).abs() < 1e-15);
        assert_eq!(row[4], row[3]);
    }
    let rows = symbol_curves("NS-AC-alpha", alpha, nu, 3).unwrap();
    for row in rows.chunks(5) {
        let s = row[0] * row[0];
        assert!((row[1] - nu * s).abs() < 1e-15);
        assert_eq!(row[3], 1.0);
        assert_eq!(row[4], row[2]);
    }
}

#[test]
fn cancellations_hold_for_every_preset() {
    for preset in [
        "NSE-AC", "Leray-AC-alpha", "ML-AC-alpha", "SBM-AC", "NSV-AC", "NS-AC-alpha", "NS-AC-alpha-like",
    ] {
        for seed in 0..3 {
            let r = cancellation_check(preset, seed).unwrap();
            assert_eq!(r.len(), 3);
            assert!(r.iter().all(|v| *v <= 1e-10), "{preset} {seed}: {r:?}");
        }
    }
}
