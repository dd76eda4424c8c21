use entropy_lab_wasm::{demon, evolution, localization};
use std::f64::consts::{E, LN_10, LN_2, PI};

#[test]
fn evolution_frames_track_the_spreading_law() {
    let ev = evolution(1.0, 1.0, 0.5, 4.0, 8).unwrap();
    assert_eq!(ev.frames.len(), 9);
    assert!((ev.leipnik_bound - (PI * E).ln()).abs() < 1e-12);
    let s0 = ev.frames[0].s;
    for f in &ev.frames {
        assert_eq!(f.density.len(), ev.x.len());
        assert!((f.sigma_x - f.sigma_x_exact).abs() / f.sigma_x_exact < 1e-6);
        assert!((f.s - s0).abs() < 1e-8);
        assert!(f.i_x + f.i_p >= ev.leipnik_bound - 1e-9);
    }
    assert!(ev.frames[8].i_x > ev.frames[0].i_x);
}

#[test]
fn evolution_rejects_bad_frame_counts() {
    assert!(evolution(1.0, 1.0, 0.0, 1.0, 0).is_err());
    assert!(evolution(-1.0, 1.0, 0.0, 1.0, 4).is_err());
}

#[test]
fn tenfold_localization_produces_ln10() {
    let loc = localization(2.0, 0.2, 20.0, 1.0, 3).unwrap();
    assert!((loc.delta_s - LN_10).abs() < 1e-4, "{}", loc.delta_s);
    assert_eq!(loc.brillouin_ok, Some(true));
    assert_eq!(loc.before.len(), loc.after.len());
    let peak = |d: &[f64]| d.iter().cloned().fold(0.0, f64::max);
    assert!(peak(&loc.after) > 5.0 * peak(&loc.before));
}

#[test]
fn widening_is_not_a_localization() {
    assert!(localization(0.5, 2.0, 20.0, 1.0, 3).is_err());
}

#[test]
fn same_seed_same_json() {
    let a = serde_json::to_string(&localization(2.0, 0.2, 20.0, 1.0, 11).unwrap()).unwrap();
    let b = serde_json::to_string(&localization(2.0, 0.2, 20.0, 1.0, 11).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn demons_are_exorcised() {
    let p = demon("pressure", 500, 4.0, 1).unwrap();
    assert!(p.pass);
    assert!((p.min_net - LN_2).abs() < 1e-12);
    assert_eq!(p.positions.len(), 500);
    let t = demon("temperature", 20_000, 0.001, 1).unwrap();
    assert!(t.pass);
    assert!(t.estimate.is_some() && t.analytic.is_some());
    assert!(demon("maxwell", 10, 1.0, 1).is_err());
}
