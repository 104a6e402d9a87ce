use tmems_core::field::{power_pattern, DirectionGrid, FieldEngine, PlaneWaveIncidence};
use tmems_core::model::{ControlMode, EmsGeometry, Pulse, ReflectionStates};

#[test]
fn f32_pattern_tracks_f64() {
    let free64: Vec<Pulse<f64>> = (0..10).map(|i| Pulse::new(0.09 * i as f64, 0.3 + 0.05 * i as f64).unwrap()).collect();
    let free32: Vec<Pulse<f32>> = free64
        .iter()
        .map(|p| Pulse::new(p.rise() as f32, p.duty() as f32).unwrap())
        .collect();
    let s64 = ControlMode::Delta.expand(&free64, 4, 5, 1e-6).unwrap();
    let s32 = ControlMode::Delta.expand(&free32, 4, 5, 1e-6f32).unwrap();
    let e64 = FieldEngine::new(
        &EmsGeometry::new(4, 5, 0.45, 5.5e9).unwrap(),
        &PlaneWaveIncidence::te(30.0, 0.0).unwrap(),
        &DirectionGrid::square(11).unwrap(),
    );
    let e32 = FieldEngine::new(
        &EmsGeometry::new(4, 5, 0.45f32, 5.5e9).unwrap(),
        &PlaneWaveIncidence::te(30.0f32, 0.0).unwrap(),
        &DirectionGrid::square(11).unwrap(),
    );
    for h in [0, 1] {
        let p64 = power_pattern(&e64.harmonic_far_field(&s64, &ReflectionStates::ideal(), h).unwrap());
        let p32 = power_pattern(&e32.harmonic_far_field(&s32, &ReflectionStates::ideal(), h).unwrap());
        let peak = p64.iter().cloned().fold(0.0, f64::max);
        for (a, b) in p64.iter().zip(&p32) {
            assert!((a - *b as f64).abs() <= 1e-4 * peak, "h={h}: {a} vs {b}");
        }
    }
}
