use chaoscipher::maps::{
    bifurcation_sweep, lyapunov_spectrum, orbit2, orbit3, MapId, MapParams, MapState, SweepSpec,
};
use chaoscipher::{Hyper3DParams, Mem2DParams, State2, State3};

#[test]
fn orbit_csv_has_one_row_per_state() {
    let o = orbit3(State3::DEFAULT_SEED, &Hyper3DParams::REFERENCE, 10, 5).unwrap();
    let csv = o.to_csv().unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,x,y,z");
    assert_eq!(lines.len(), 6);
    let o = orbit2(State2::DEFAULT_SEED, &Mem2DParams::REFERENCE, 0, 3).unwrap();
    assert!(o.to_csv().unwrap().starts_with("n,x,q\n"));
}

#[test]
fn lyapunov_spectrum_matches_dimension_and_csv() {
    let s = lyapunov_spectrum(
        &MapParams::reference(MapId::Hyper3D),
        &MapState::default_seed(MapId::Hyper3D),
        1000,
        20_000,
        1,
    )
    .unwrap();
    assert_eq!(s.exponents.len(), 3);
    assert!(s.to_csv().unwrap().starts_with("index,exponent\n1,"));
    assert!(lyapunov_spectrum(
        &MapParams::reference(MapId::Hyper3D),
        &MapState::default_seed(MapId::Mem2D),
        10,
        10,
        1
    )
    .is_err());
}

#[test]
fn sweep_across_the_chaotic_transition() {
    let mut spec = SweepSpec::new("k", 0.5, 1.76, 8);
    spec.samples_per_value = 50;
    let t = bifurcation_sweep(
        &MapParams::reference(MapId::Mem2D),
        &MapState::default_seed(MapId::Mem2D),
        &spec,
    )
    .unwrap();
    assert_eq!(t.param_values().len(), 8);
    let spread = |k: f64| {
        let s = t.samples_at(k);
        s.iter().cloned().fold(f64::MIN, f64::max) - s.iter().cloned().fold(f64::MAX, f64::min)
    };
    assert!(spread(0.5) < 1e-6);
    assert!(spread(1.76) > 0.1);
}
