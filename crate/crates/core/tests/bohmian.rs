mod common;

use common::oracles;
use pilotwave_core::bohmian::{
    continuity_residual, covariance_check, equivariance_check, flow_map, integrate_trajectory,
    nonlocality_probe, phase_gradient, velocity_field, EquivarianceOptions, IntegrationOptions,
    TrajectoryStatus,
};
use pilotwave_core::fixtures::{
    entangled_pair, random_packet, two_mode_1p1d, two_mode_box, RandomPacketSpec,
};
use pilotwave_core::probability::{normalize, ParticleBox, SpacetimeBox};
use pilotwave_core::rng::StreamRng;
use pilotwave_core::spacetime::{lower_index, Axis, FourVector};
use pilotwave_core::{Complex64, Configuration, Error, PlaneWaveMode, WavePacket};

fn point(t: f64, x: f64) -> Configuration {
    Configuration::new(vec![FourVector::new(t, x, 0.0, 0.0)])
}

fn plane_wave() -> WavePacket {
    WavePacket::plane_wave(1.0, [0.6, -0.2, 0.3], Complex64::new(0.8, 0.6)).unwrap()
}

#[test]
fn plane_wave_velocity_is_momentum() {
    let w = plane_wave();
    let p = w.momentum(0, 0);
    let q = Configuration::new(vec![FourVector::new(1.0, 2.0, -3.0, 0.5)]);
    let grad = phase_gradient(&w, &q, 0).unwrap();
    assert!(grad.max_abs_diff(&-lower_index(&p)) < 1e-15);
    let v = velocity_field(&w, &q).unwrap();
    assert!(v.velocities[0].max_abs_diff(&p) < 1e-15);
    assert!((v.psi_modulus - 1.0).abs() < 1e-15);

    let rest = WavePacket::plane_wave(1.0, [0.0; 3], Complex64::new(1.0, 0.0)).unwrap();
    let v = velocity_field(&rest, &q).unwrap();
    assert_eq!(v.velocities[0], FourVector::new(1.0, 0.0, 0.0, 0.0));
}

#[test]
fn product_state_velocities_are_single_particle_momenta() {
    let w = WavePacket::new(
        vec![1.0, 2.0, 0.5],
        vec![PlaneWaveMode::new(
            Complex64::new(0.3, 0.1),
            vec![[0.1, 0.2, 0.3], [-1.0, 0.0, 0.5], [0.0, 0.7, 0.0]],
        )],
    )
    .unwrap();
    let mut rng = StreamRng::new(1, 1);
    for _ in 0..20 {
        let q = common::random_configuration(3, 5.0, 3, &mut rng);
        for a in 0..3 {
            let g = phase_gradient(&w, &q, a).unwrap();
            assert!(g.max_abs_diff(&-lower_index(&w.momentum(0, a))) < 1e-14);
        }
    }
}

#[test]
fn node_is_reported_with_configuration() {
    let w = WavePacket::new(
        vec![1.0],
        vec![
            PlaneWaveMode::new(Complex64::new(1.0, 0.0), vec![[0.0; 3]]),
            PlaneWaveMode::new(Complex64::new(-1.0, 0.0), vec![[1.0, 0.0, 0.0]]),
        ],
    )
    .unwrap();
    let q = Configuration::origin(1);
    match velocity_field(&w, &q) {
        Err(Error::Node { configuration, .. }) => assert_eq!(configuration, q),
        other => panic!("expected node error, got {other:?}"),
    }
    assert!(matches!(
        integrate_trajectory(&w, &q, (0.0, 1.0), &IntegrationOptions::default()),
        Err(Error::Node { .. })
    ));
}

#[test]
fn phase_gradient_matches_unwrapped_phase_oracle() {
    let w = two_mode_1p1d();
    let q = point(0.3, 0.7);
    let g = phase_gradient(&w, &q, 0).unwrap();
    let fd = oracles::fd_phase_gradient(&w, &q, 0, 1e-5);
    assert!(g.max_abs_diff(&fd) < 1e-7, "{g:?} vs {fd:?}");

    let spec = RandomPacketSpec::default();
    let mut rng = StreamRng::new(21, 0);
    for i in 0..200 {
        let w = random_packet(&spec, 20, i);
        let q = common::non_node_configuration(&w, 5.0, 3, 1e-3, &mut rng);
        for a in 0..w.n_particles() {
            let g = phase_gradient(&w, &q, a).unwrap();
            let fd = oracles::fd_phase_gradient(&w, &q, a, 1e-5);
            assert!(g.max_abs_diff(&fd) < 1e-7, "packet {i}: {g:?} vs {fd:?}");
        }
    }
}

#[test]
fn entangled_velocity_matches_oracle() {
    let w = entangled_pair();
    let q = Configuration::new(vec![
        FourVector::new(0.2, 0.4, 0.0, 0.0),
        FourVector::new(-0.1, 1.3, 0.0, 0.0),
    ]);
    let v = velocity_field(&w, &q).unwrap();
    for a in 0..2 {
        let fd = oracles::fd_velocity(&w, &q, a, 1e-5);
        assert!(v.velocities[a].max_abs_diff(&fd) < 1e-7);
    }
}

#[test]
fn plane_wave_trajectory_is_straight() {
    let w = plane_wave();
    let p = w.momentum(0, 0);
    let x0 = Configuration::new(vec![FourVector::new(0.5, -1.0, 2.0, 0.0)]);
    let tr = integrate_trajectory(&w, &x0, (0.0, 10.0), &IntegrationOptions::with_step(1e-3)).unwrap();
    assert_eq!(tr.status, TrajectoryStatus::Completed);
    assert_eq!(tr.s_values.len(), 10_001);
    assert_eq!(*tr.s_values.last().unwrap(), 10.0);
    for (s, x) in tr.s_values.iter().zip(&tr.states) {
        let expect = x0.0[0] + p * *s;
        let e = x.0[0].max_abs_diff(&expect);
        assert!(e < 1e-12);
    }
    assert!(tr.s_values.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn empty_span_returns_initial() {
    let w = two_mode_1p1d();
    let x0 = point(1.0, 0.2);
    let tr = integrate_trajectory(&w, &x0, (2.0, 2.0), &IntegrationOptions::default()).unwrap();
    assert_eq!(tr.states, vec![x0]);
    assert_eq!(tr.s_values, vec![2.0]);
    assert!(integrate_trajectory(&w, &point(0.0, 0.0), (1.0, 0.0), &IntegrationOptions::default()).is_err());
    assert!(integrate_trajectory(&w, &point(0.0, 0.0), (0.0, 1.0), &IntegrationOptions::with_step(0.0)).is_err());
}

#[test]
fn leaving_the_domain_halts() {
    let w = WavePacket::plane_wave(1.0, [0.5, 0.0, 0.0], Complex64::new(1.0, 0.0)).unwrap();
    let domain = SpacetimeBox::replicated(1, ParticleBox::one_plus_one((0.0, 2.0), (-1.0, 1.0)).unwrap()).unwrap();
    let opts = IntegrationOptions {
        domain: Some(domain.clone()),
        ..IntegrationOptions::with_step(1e-2)
    };
    let tr = integrate_trajectory(&w, &point(0.0, 0.0), (0.0, 10.0), &opts).unwrap();
    assert_eq!(tr.status, TrajectoryStatus::HaltedOutOfDomain);
    assert!(!domain.contains(tr.last()));
    assert!(tr.states[..tr.states.len() - 1].iter().all(|q| domain.contains(q)));
}

#[test]
fn fourth_order_self_convergence() {
    let w = two_mode_1p1d();
    let x0 = point(0.5, -0.4);
    let run = |h: f64| {
        let opts = IntegrationOptions { monitor_interval: 0, ..IntegrationOptions::with_step(h) };
        integrate_trajectory(&w, &x0, (0.0, 1.0), &opts).unwrap().last().clone()
    };
    let fine = run(1e-5);
    let finer = run(0.5e-5);
    let reference = Configuration::from_flat(
        &finer
            .to_flat()
            .iter()
            .zip(fine.to_flat())
            .map(|(b, a)| b + (b - a) / 15.0)
            .collect::<Vec<_>>(),
    );
    assert!(run(1e-3).max_abs_diff(&reference) < 1e-9);
    let e1 = run(0.2).max_abs_diff(&reference);
    let e2 = run(0.1).max_abs_diff(&reference);
    let order = (e1 / e2).log2();
    assert!((order - 4.0).abs() < 0.3, "order {order}");
}

#[test]
fn flow_is_invertible() {
    let w = two_mode_1p1d();
    let opts = IntegrationOptions::with_step(1e-3);
    let mut rng = StreamRng::new(3, 3);
    for _ in 0..20 {
        let q = common::random_configuration(1, 3.0, 1, &mut rng);
        let there = flow_map(&w, &q, 1.0, &opts).unwrap().unwrap();
        let back = flow_map(&w, &there, -1.0, &opts).unwrap().unwrap();
        assert!(back.max_abs_diff(&q) < 1e-8);
    }
}

#[test]
fn continuity_holds() {
    let w = plane_wave();
    let q = Configuration::new(vec![FourVector::new(0.1, 0.2, 0.3, 0.4)]);
    assert!(continuity_residual(&w, &q, 1e-4).unwrap() < 1e-10);

    let w = two_mode_1p1d();
    let mut rng = StreamRng::new(4, 4);
    for _ in 0..20 {
        let q = common::random_configuration(1, 3.0, 1, &mut rng);
        let fine = continuity_residual(&w, &q, 1e-4).unwrap();
        assert!(fine < 1e-6);
    }

    let product = WavePacket::new(
        vec![1.0, 1.3],
        vec![PlaneWaveMode::new(Complex64::new(1.0, 0.0), vec![[0.3, 0.0, 0.0], [-0.2, 0.1, 0.0]])],
    )
    .unwrap();
    let q = common::random_configuration(2, 3.0, 3, &mut rng);
    assert!(continuity_residual(&product, &q, 1e-4).unwrap() < 1e-6);
}

#[test]
fn continuity_residual_converges_at_second_order() {
    let spec = RandomPacketSpec::default();
    let mut rng = StreamRng::new(30, 0);
    let (mut coarse, mut fine) = (0.0, 0.0);
    for i in 0..20 {
        let w = random_packet(&spec, 31, i);
        let q = common::non_node_configuration(&w, 3.0, 3, 0.05, &mut rng);
        coarse += continuity_residual(&w, &q, 1e-2).unwrap();
        fine += continuity_residual(&w, &q, 1e-3).unwrap();
    }
    let order = (coarse / fine).log10();
    assert!((order - 2.0).abs() < 0.2, "order {order}");
}

#[test]
fn nonlocality() {
    let product = WavePacket::new(
        vec![1.0, 1.3],
        vec![PlaneWaveMode::new(Complex64::new(1.0, 0.0), vec![[0.3, 0.0, 0.0], [-0.2, 0.1, 0.0]])],
    )
    .unwrap();
    let q = Configuration::new(vec![FourVector::new(0.0, 1.0, 0.0, 0.0), FourVector::new(0.5, -1.0, 0.2, 0.0)]);
    let d = FourVector::new(0.3, 1.0, -2.0, 0.5);
    assert!(nonlocality_probe(&product, &q, 1, d, 0).unwrap() < 1e-12);

    let w = entangled_pair();
    assert_eq!(nonlocality_probe(&w, &q, 1, FourVector::ZERO, 0).unwrap(), 0.0);
    let probe = nonlocality_probe(&w, &q, 1, d, 0).unwrap();
    let mut moved = q.clone();
    moved.0[1] += d;
    let oracle = (oracles::fd_velocity(&w, &moved, 0, 1e-5) - oracles::fd_velocity(&w, &q, 0, 1e-5))
        .euclidean_norm();
    assert!((probe - oracle).abs() < 1e-6);
    assert!(probe > 1e-3);
    assert!(nonlocality_probe(&w, &q, 2, d, 0).is_err());
}

#[test]
fn covariance() {
    let opts = IntegrationOptions::with_step(1e-3);
    let w = two_mode_1p1d();
    let x0 = point(0.5, 0.25);
    assert_eq!(covariance_check(&w, &x0, 0.0, Axis::X, (0.0, 1.0), &opts).unwrap(), 0.0);
    let dev = covariance_check(&w, &x0, 0.5, Axis::X, (0.0, 5.0), &opts).unwrap();
    assert!(dev < 1e-6, "{dev}");
    let pw = plane_wave();
    let x0 = Configuration::new(vec![FourVector::new(0.1, 0.2, 0.3, 0.4)]);
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        let d = covariance_check(&pw, &x0, 1.3, axis, (0.0, 5.0), &opts).unwrap();
        assert!(d < 1e-12);
    }
}

#[test]
fn equivariance_plane_wave() {
    let w = WavePacket::plane_wave(1.0, [0.2, 0.0, 0.0], Complex64::new(1.0, 0.0)).unwrap();
    let bx = two_mode_box();
    let w = normalize(&w, &bx, 8).unwrap();
    let opts = EquivarianceOptions { count: 5_000, liouville_samples: 20, ..Default::default() };
    let r = equivariance_check(&w, &bx, &opts).unwrap();
    assert!(r.pointwise_max_violation < 1e-8, "{r:?}");
    assert!(r.chi_square_p > 0.01, "{r:?}");
}

#[test]
fn equivariance_two_mode_small() {
    let bx = two_mode_box();
    let w = normalize(&two_mode_1p1d(), &bx, 64).unwrap();
    let opts = EquivarianceOptions { count: 20_000, liouville_samples: 50, seed: 9, ..Default::default() };
    let r = equivariance_check(&w, &bx, &opts).unwrap();
    assert!(r.pointwise_max_violation < 1e-3, "{r:?}");
    assert!(r.chi_square_p > 0.01, "{r:?}");
    assert!(r.exited_fraction < 0.3, "{r:?}");
}

#[test]
fn equivariance_inconclusive_on_tiny_box() {
    let bx = SpacetimeBox::replicated(1, ParticleBox::one_plus_one((0.0, 0.5), (0.0, 0.5)).unwrap()).unwrap();
    let opts = EquivarianceOptions { count: 1_000, ..Default::default() };
    assert!(matches!(
        equivariance_check(&two_mode_1p1d(), &bx, &opts),
        Err(Error::Inconclusive { .. })
    ));
}
