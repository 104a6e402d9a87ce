//! Closed forms checked against independent numerical evaluations.

use std::f64::consts::PI;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tmems_core::field::{cell_factor, power_pattern, DirectionGrid, FieldEngine, PlaneWaveIncidence};
use tmems_core::model::{ControlMode, EmsGeometry, Pulse, PulseSchedule, ReflectionStates, Tensor2};

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn random_pulse(rng: &mut ChaCha8Rng) -> Pulse<f64> {
    Pulse::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..=1.0)).unwrap()
}

fn random_schedule(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> PulseSchedule<f64> {
    let pulses = (0..rows * cols).map(|_| random_pulse(rng)).collect();
    PulseSchedule::new(1e-6, rows, cols, pulses).unwrap()
}

fn lossy_states() -> ReflectionStates<f64> {
    ReflectionStates::new(
        Tensor2([[c(0.8, 0.1), c(0.05, 0.0)], [c(0.0, 0.05), c(0.7, -0.2)]]),
        Tensor2([[c(-0.6, 0.3), c(0.0, 0.0)], [c(0.1, 0.0), c(-0.75, 0.0)]]),
    )
    .unwrap()
}

/// Composite Simpson over each smooth piece of the on-interval.
fn quadrature_coefficient(pulse: &Pulse<f64>, h: i32, samples: usize) -> C {
    let f = |t: f64| C::from_polar(1.0, -2.0 * PI * h as f64 * t);
    let simpson = |a: f64, b: f64| {
        let dx = (b - a) / samples as f64;
        let mut acc = f(a) + f(b);
        for i in 1..samples {
            acc += f(a + dx * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * (dx / 3.0)
    };
    let (r, d) = (pulse.rise(), pulse.duty());
    if r + d <= 1.0 {
        simpson(r, r + d)
    } else {
        simpson(r, 1.0) + simpson(0.0, r + d - 1.0)
    }
}

#[test]
fn fourier_coefficients_match_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let p = random_pulse(&mut rng);
        for h in -5..=5 {
            let err = (p.fourier_coefficient(h) - quadrature_coefficient(&p, h, 10_000)).norm();
            assert!(err < 1e-6, "h={h} {p:?} err={err}");
        }
    }
}

#[test]
fn complement_coefficients_match_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let p = random_pulse(&mut rng);
        let off = Pulse::wrapped(p.rise() + p.duty(), 1.0 - p.duty());
        for h in -4..=4 {
            let err = (p.complement_coefficient(h) - quadrature_coefficient(&off, h, 10_000)).norm();
            assert!(err < 1e-6, "h={h} err={err}");
        }
    }
}

#[test]
fn cell_factor_matches_midpoint_quadrature() {
    let g = EmsGeometry::new(4, 4, 0.45, 5.5e9).unwrap();
    let a = g.cell_edge();
    let k0 = g.wavenumber();
    let n = 200;
    for &(u, v) in &[(0.0, 0.0), (0.3, -0.2), (-0.7, 0.5), (0.95, 0.1)] {
        let mut acc = C::new(0.0, 0.0);
        let d = a / n as f64;
        for i in 0..n {
            let x = -a / 2.0 + d * (i as f64 + 0.5);
            for j in 0..n {
                let y = -a / 2.0 + d * (j as f64 + 0.5);
                acc += C::from_polar(1.0, k0 * (u * x + v * y));
            }
        }
        acc *= d * d;
        let cf = cell_factor(&g, u, v);
        assert!(acc.im.abs() < 1e-9 * g.cell_area());
        assert!((acc.re - cf).abs() < 2e-5 * g.cell_area(), "({u},{v}) {} vs {cf}", acc.re);
    }
}

/// Direct evaluation of the far-field sum from its ingredients.
fn brute_force_field(
    g: &EmsGeometry<f64>,
    inc: &PlaneWaveIncidence<f64>,
    states: &ReflectionStates<f64>,
    s: &PulseSchedule<f64>,
    h: i32,
    u: f64,
    v: f64,
) -> [C; 2] {
    let k0 = g.wavenumber();
    let (ui, vi) = inc.direction_cosines();
    let m = inc.radiation_operator();
    let jones = inc.polarization();
    let mut acc = [C::new(0.0, 0.0); 2];
    for p in 0..g.rows() {
        for q in 0..g.cols() {
            let pulse = s.pulse(p, q);
            let uh = if h == 0 {
                C::new(pulse.duty(), 0.0)
            } else {
                let hf = h as f64;
                C::from_polar(1.0, -PI * hf * (2.0 * pulse.rise() + pulse.duty())) * ((PI * hf * pulse.duty()).sin() / (PI * hf))
            };
            let ut = if h == 0 { C::new(1.0, 0.0) - uh } else { -uh };
            let gamma = states.gamma_on().scaled(uh) + states.gamma_off().scaled(ut);
            let r = g.barycenter(p, q);
            let excite = C::from_polar(inc.amplitude(), k0 * (ui * r[0] + vi * r[1]));
            let reflected = gamma.apply([jones[0] * excite, jones[1] * excite]);
            let radiated = m.apply(reflected);
            let phase = C::from_polar(1.0, k0 * (u * r[0] + v * r[1]));
            acc[0] += radiated[0] * phase;
            acc[1] += radiated[1] * phase;
        }
    }
    let f = C::new(0.0, k0 / (4.0 * PI)) * cell_factor(g, u, v);
    [acc[0] * f, acc[1] * f]
}

#[test]
fn engine_matches_brute_force_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = EmsGeometry::new(4, 4, 0.45, 5.5e9).unwrap();
    let inc = PlaneWaveIncidence::new(30.0, 25.0, 2.0, [c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
    let states = lossy_states();
    let grid = DirectionGrid::square(9).unwrap();
    let engine = FieldEngine::new(&g, &inc, &grid);
    for _ in 0..5 {
        let s = random_schedule(&mut rng, 4, 4);
        for h in [-2, 0, 1, 3] {
            let pattern = engine.harmonic_far_field(&s, &states, h).unwrap();
            let expected: Vec<[C; 2]> = (0..grid.len())
                .map(|i| {
                    let (u, v) = grid.coords(i);
                    brute_force_field(&g, &inc, &states, &s, h, u, v)
                })
                .collect();
            let scale = expected.iter().map(|e| e[0].norm().max(e[1].norm())).fold(0.0, f64::max);
            for (a, b) in pattern.samples().iter().zip(&expected) {
                for k in 0..2 {
                    assert!((a[k] - b[k]).norm() <= 1e-12 * scale, "h={h}: {:?} vs {:?}", a[k], b[k]);
                }
            }
        }
    }
}

#[test]
fn field_is_linear_in_the_two_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = EmsGeometry::new(6, 4, 0.45, 5.5e9).unwrap();
    let inc = PlaneWaveIncidence::te(20.0, 10.0).unwrap();
    let grid = DirectionGrid::square(15).unwrap();
    let engine = FieldEngine::new(&g, &inc, &grid);
    let full = lossy_states();
    let on_only = ReflectionStates::new(*full.gamma_on(), Tensor2::zero()).unwrap();
    let off_only = ReflectionStates::new(Tensor2::zero(), *full.gamma_off()).unwrap();
    let s = random_schedule(&mut rng, 6, 4);
    for h in [0, 1, 2] {
        let a = engine.harmonic_far_field(&s, &full, h).unwrap();
        let b = engine.harmonic_far_field(&s, &on_only, h).unwrap();
        let d = engine.harmonic_far_field(&s, &off_only, h).unwrap();
        for ((x, y), z) in a.samples().iter().zip(b.samples()).zip(d.samples()) {
            for k in 0..2 {
                assert!((x[k] - y[k] - z[k]).norm() < 1e-15, "h={h}");
            }
        }
    }
}

#[test]
fn delta_designs_null_the_first_harmonic_at_broadside() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = EmsGeometry::new(8, 5, 0.45, 5.5e9).unwrap();
    let inc = PlaneWaveIncidence::te(0.0, 0.0).unwrap();
    let grid = DirectionGrid::square(31).unwrap();
    let engine = FieldEngine::new(&g, &inc, &grid);
    for mode in [ControlMode::Delta, ControlMode::ColumnwiseDelta] {
        let n = mode.free_pulses(8, 5).unwrap();
        let free: Vec<_> = (0..n).map(|_| random_pulse(&mut rng)).collect();
        let s = mode.expand(&free, 8, 5, 1e-6).unwrap();
        let e1 = power_pattern(&engine.harmonic_far_field(&s, &lossy_states(), 1).unwrap());
        let peak = e1.iter().cloned().fold(0.0, f64::max);
        for k in 0..=40 {
            let v = -1.0 + 0.05 * k as f64;
            let p = engine.power_at(&s, &lossy_states(), 1, 0.0, v).unwrap();
            assert!(p.sqrt() <= 1e-12 * peak.sqrt(), "{mode} v={v}");
        }
    }
}

#[test]
fn static_schedules_radiate_only_the_carrier() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let g = EmsGeometry::new(5, 5, 0.45, 5.5e9).unwrap();
    let inc = PlaneWaveIncidence::te(40.0, 0.0).unwrap();
    let grid = DirectionGrid::square(21).unwrap();
    let engine = FieldEngine::new(&g, &inc, &grid);
    let pulses = (0..25)
        .map(|_| if rng.gen_bool(0.5) { Pulse::always_on() } else { Pulse::always_off() })
        .collect();
    let s = PulseSchedule::new(1e-6, 5, 5, pulses).unwrap();
    assert!(s.is_static());
    let e0 = power_pattern(&engine.harmonic_far_field(&s, &lossy_states(), 0).unwrap());
    let peak = e0.iter().cloned().fold(0.0, f64::max);
    for h in [-2, -1, 1, 4] {
        let eh = power_pattern(&engine.harmonic_far_field(&s, &lossy_states(), h).unwrap());
        assert!(eh.iter().all(|p| p.sqrt() <= 1e-12 * peak.sqrt()), "h={h}");
    }
}
