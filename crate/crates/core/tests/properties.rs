//! Property tests of the model, field and ISAC invariants.

use std::f64::consts::PI;

use num_complex::Complex;
use proptest::prelude::*;

use tmems_core::field::{DirectionGrid, FieldEngine, PlaneWaveIncidence};
use tmems_core::isac::{measure_bs_powers, Codebook, CodebookEntry, Scenario};
use tmems_core::model::{ControlMode, EmsGeometry, HarmonicTensor, Pulse, PulseSchedule, ReflectionStates, Tensor2};
use tmems_core::synthesis::{pso_minimize, pulse_boundaries, MaskTemplate, PsoConfig};

fn pulse() -> impl Strategy<Value = Pulse<f64>> {
    (0.0..1.0f64, 0.0..=1.0f64).prop_map(|(r, d)| Pulse::new(r, d).unwrap())
}

fn real_states() -> ReflectionStates<f64> {
    let c = |x: f64| Complex::new(x, 0.0);
    ReflectionStates::new(
        Tensor2([[c(0.9), c(0.05)], [c(0.05), c(0.8)]]),
        Tensor2([[c(-0.7), c(0.0)], [c(0.1), c(-0.85)]]),
    )
    .unwrap()
}

fn scenario(theta: f64, amplitude: f64, mode: ControlMode) -> Scenario<f64> {
    Scenario {
        geometry: EmsGeometry::new(6, 4, 0.45, 5.5e9).unwrap(),
        incidence: PlaneWaveIncidence::te(theta, 0.0).unwrap().with_amplitude(amplitude).unwrap(),
        bs_theta_deg: -15.0,
        bs_phi_deg: 0.0,
        states: ReflectionStates::ideal(),
        mode,
        period: 1e-6,
        masks: MaskTemplate::default(),
        synthesis_grid: 16,
        noise_power: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_partial_sums_approach_duty(p in pulse()) {
        let s: f64 = (-200..=200).map(|h| p.fourier_coefficient(h).norm_sqr()).sum();
        prop_assert!(s <= p.duty() + 1e-12);
        prop_assert!(s >= p.duty() - 0.005);
    }

    #[test]
    fn coefficients_decay_like_one_over_h(p in pulse(), h in 1i32..500) {
        prop_assert!(p.fourier_coefficient(h).norm() <= 1.0 / (PI * h as f64) + 1e-15);
        prop_assert!(p.fourier_coefficient(-h).norm() <= 1.0 / (PI * h as f64) + 1e-15);
    }

    #[test]
    fn coefficients_are_conjugate_symmetric(p in pulse(), h in 0i32..50) {
        let d = p.fourier_coefficient(-h) - p.fourier_coefficient(h).conj();
        prop_assert!(d.norm() < 1e-14);
    }

    #[test]
    fn real_states_give_conjugate_symmetric_tensors(pulses in prop::collection::vec(pulse(), 6), h in 1i32..6) {
        let s = PulseSchedule::new(1e-6, 3, 2, pulses).unwrap();
        let states = real_states();
        let pos = HarmonicTensor::from_schedule(&states, &s, h);
        let neg = HarmonicTensor::from_schedule(&states, &s, -h);
        for (a, b) in pos.tensors().iter().zip(neg.tensors()) {
            prop_assert!(a.conj().max_abs_diff(b) < 1e-14);
        }
    }

    #[test]
    fn delta_constraint_gives_antisymmetric_odd_harmonics(
        free in prop::collection::vec(pulse(), 12),
        h in prop::sample::select(vec![-3, -1, 1, 3, 5]),
    ) {
        let s = ControlMode::Delta.expand(&free, 6, 4, 1e-6).unwrap();
        let g = HarmonicTensor::from_schedule(&real_states(), &s, h);
        for p in 0..6 {
            for q in 0..4 {
                let sum = *g.tensor(p, q) + *g.tensor(5 - p, q);
                prop_assert!(sum.max_abs_diff(&Tensor2::zero()) < 1e-14);
            }
        }
    }

    #[test]
    fn field_scales_linearly_with_amplitude(free in prop::collection::vec(pulse(), 24), a in 0.1..10.0f64) {
        let g = EmsGeometry::new(6, 4, 0.45, 5.5e9).unwrap();
        let s = PulseSchedule::new(1e-6, 6, 4, free).unwrap();
        let grid = DirectionGrid::square(7).unwrap();
        let one = FieldEngine::new(&g, &PlaneWaveIncidence::te(25.0, 0.0).unwrap(), &grid);
        let inc = PlaneWaveIncidence::te(25.0, 0.0).unwrap().with_amplitude(a).unwrap();
        let scaled = FieldEngine::new(&g, &inc, &grid);
        for h in [0, 1] {
            let x = one.harmonic_far_field(&s, &real_states(), h).unwrap();
            let y = scaled.harmonic_far_field(&s, &real_states(), h).unwrap();
            for (e1, ea) in x.samples().iter().zip(y.samples()) {
                for k in 0..2 {
                    prop_assert!((e1[k] * a - ea[k]).norm() <= 1e-12 * (1.0 + ea[k].norm()));
                }
            }
        }
    }

    #[test]
    fn monopulse_ratio_ignores_amplitude(free in prop::collection::vec(pulse(), 12), a in 0.1..10.0f64) {
        let mode = ControlMode::Delta;
        let base = scenario(30.0, 1.0, mode);
        let s = mode.expand(&free, 6, 4, 1e-6).unwrap();
        let m1 = measure_bs_powers(&s, &base).unwrap();
        let ma = measure_bs_powers(&s, &scenario(30.0, a, mode)).unwrap();
        if !m1.floored && !ma.floored {
            prop_assert!((m1.xi - ma.xi).abs() <= 1e-9 * m1.xi);
        }
    }

    #[test]
    fn codebook_round_trips(
        angles in prop::collection::btree_set(-80_000i64..80_000, 1..6),
        seed in any::<u64>(),
        pulses in prop::collection::vec((0.0..1.0f64, 0.0..=1.0f64), 12),
        cost in 0.0..1.0f64,
    ) {
        let sc = scenario(30.0, 1.0, ControlMode::Delta);
        let cfg = PsoConfig::default();
        let mut book = Codebook::new(&sc, &cfg, 1, seed).unwrap();
        for &a in &angles {
            book.insert(a as f64 / 1000.0, CodebookEntry { pulses: pulses.clone(), cost }).unwrap();
        }
        let back = Codebook::<f64>::from_bytes(&book.to_bytes()).unwrap();
        prop_assert_eq!(&back, &book);
        prop_assert_eq!(back.to_bytes(), book.to_bytes());
    }
}

#[test]
fn stale_codebooks_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("book.bin");
    let sc = scenario(30.0, 1.0, ControlMode::Delta);
    let cfg = PsoConfig::default();
    let mut book = Codebook::new(&sc, &cfg, 1, 7).unwrap();
    book.insert(30.0, CodebookEntry { pulses: vec![(0.1, 0.5); 12], cost: 0.0 }).unwrap();
    book.save(&path).unwrap();

    assert!(Codebook::load(&path, &sc, &cfg, 1, 7).is_ok());
    assert!(Codebook::load(&path, &sc, &cfg, 1, 8).is_err(), "seed mismatch");
    assert!(Codebook::load(&path, &sc, &cfg, 2, 7).is_err(), "restart mismatch");
    let other = PsoConfig { inertia: 0.5, ..cfg.clone() };
    assert!(Codebook::load(&path, &sc, &other, 1, 7).is_err(), "swarm settings");
    let moved = Scenario { bs_theta_deg: -10.0, ..sc.clone() };
    assert!(Codebook::load(&path, &moved, &cfg, 1, 7).is_err(), "scenario change");
    let user = sc.with_user_theta(40.0).unwrap();
    assert!(Codebook::load(&path, &user, &cfg, 1, 7).is_ok(), "the user angle is the key, not part of the hash");
}

#[test]
fn swarm_is_deterministic_across_thread_counts() {
    let bounds = pulse_boundaries(8);
    let cfg = PsoConfig { max_iterations: 60, seed: 99, ..PsoConfig::default() };
    let objective = |x: &[f64]| -> tmems_core::Result<f64> {
        Ok(x.iter().enumerate().map(|(i, v)| (v - 0.1 * i as f64).powi(2)).sum())
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| pso_minimize(&bounds, &cfg, objective).unwrap())
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a.best_position, b.best_position);
    assert_eq!(a.history, b.history);
    assert!(a.history.windows(2).all(|w| w[1] <= w[0]));
}
