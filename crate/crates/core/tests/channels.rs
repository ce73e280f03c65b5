mod common;

use nmkernel::channels::{
    ad_decay, decay_from_theta, kraus_set, pd_decay, theta_ad, theta_for, theta_pd, ADParams,
    ChannelKind, PDParams,
};
use rand::Rng;

#[test]
fn circuit_matches_kraus_map_for_random_ad_parameters() {
    let mut rng = common::rng(11);
    for _ in 0..100 {
        let p = ad_decay(&common::random_ad(&mut rng)).unwrap();
        let theta = theta_ad(p).unwrap();
        let kind = ChannelKind::AmplitudeDamping;
        let diff = common::circuit_state(kind, theta).max_abs_diff(&common::kraus_state(kind, p));
        assert!(diff <= 1e-10, "p = {p}: {diff:e}");
    }
}

#[test]
fn circuit_matches_kraus_map_for_random_pd_parameters() {
    let mut rng = common::rng(12);
    for _ in 0..100 {
        let lambda = pd_decay(&common::random_pd(&mut rng)).unwrap();
        let theta = theta_pd(lambda).unwrap();
        let kind = ChannelKind::PhaseDamping;
        let diff = common::circuit_state(kind, theta).max_abs_diff(&common::kraus_state(kind, lambda));
        assert!(diff <= 1e-10, "Λ = {lambda}: {diff:e}");
    }
}

#[test]
fn decays_start_at_one() {
    for (lambda, gamma0) in [(0.1, 1.0), (2.0, 1.0), (5.0, 1.0)] {
        assert_eq!(ad_decay(&ADParams::new(lambda, gamma0, 0.0).unwrap()).unwrap(), 1.0);
    }
    for (alpha, tau) in [(0.1, 1.0), (0.25, 1.0), (2.0, 1.0)] {
        assert_eq!(pd_decay(&PDParams::new(alpha, tau, 0.0).unwrap()).unwrap(), 1.0);
    }
}

#[test]
fn decays_are_continuous_across_the_critical_point() {
    for t in [0.3, 1.0, 2.5, 7.0] {
        let at = |lambda| ad_decay(&ADParams::new(lambda, 1.0, t).unwrap()).unwrap();
        let mid = at(2.0);
        assert!((at(2.0 + 1e-6) - mid).abs() <= 1e-4);
        assert!((at(2.0 - 1e-6) - mid).abs() <= 1e-4);

        let at = |alpha| pd_decay(&PDParams::new(alpha, 1.0, t).unwrap()).unwrap();
        let mid = at(0.25);
        assert!((at(0.25 + 1e-6) - mid).abs() <= 1e-4);
        assert!((at(0.25 - 1e-6) - mid).abs() <= 1e-4);
    }
}

#[test]
fn critical_point_uses_the_closed_form_limit() {
    for t in [0.0f64, 0.5, 1.0, 3.0, 10.0] {
        let lambda: f64 = 2.0;
        let expected = (-lambda * t).exp() * (1.0 + lambda * t / 2.0).powi(2);
        let p = ad_decay(&ADParams::new(lambda, 1.0, t).unwrap()).unwrap();
        assert!((p - expected).abs() <= 1e-8);

        let tau: f64 = 2.0;
        let s = t / (2.0 * tau);
        let expected = (-s).exp() * (1.0 + s);
        let l = pd_decay(&PDParams::new(0.25 / tau, tau, t).unwrap()).unwrap();
        assert!((l - expected).abs() <= 1e-8);
    }
}

#[test]
fn angles_round_trip_to_decay_values() {
    let mut rng = common::rng(13);
    for _ in 0..200 {
        let p: f64 = rng.random_range(0.0..=1.0);
        let l: f64 = rng.random_range(-1.0..=1.0);
        let back = decay_from_theta(ChannelKind::AmplitudeDamping, theta_for(ChannelKind::AmplitudeDamping, p).unwrap());
        assert!((back - p).abs() <= 1e-12);
        let back = decay_from_theta(ChannelKind::PhaseDamping, theta_for(ChannelKind::PhaseDamping, l).unwrap());
        assert!((back - l).abs() <= 1e-12);
    }
}

#[test]
fn markovian_decays_are_monotone() {
    let times: Vec<f64> = (0..4000).map(|k| k as f64 * 0.005).collect();
    for lambda in [2.0, 2.5, 4.0, 10.0] {
        let p: Vec<f64> = times
            .iter()
            .map(|&t| ad_decay(&ADParams::new(lambda, 1.0, t).unwrap()).unwrap())
            .collect();
        assert!(p.windows(2).all(|w| w[1] <= w[0] + 1e-15), "λ = {lambda}");
    }
    for alpha in [0.05, 0.1, 0.2, 0.25] {
        let l: Vec<f64> = times
            .iter()
            .map(|&t| pd_decay(&PDParams::new(alpha, 1.0, t).unwrap()).unwrap())
            .collect();
        assert!(l.windows(2).all(|w| w[1] <= w[0] + 1e-15), "α = {alpha}");
        assert!(l.iter().all(|&v| v >= 0.0));
    }
}

#[test]
fn kraus_sets_are_complete() {
    let mut rng = common::rng(14);
    for _ in 0..50 {
        let p: f64 = rng.random_range(0.0..=1.0);
        let l: f64 = rng.random_range(-1.0..=1.0);
        assert!(kraus_set(ChannelKind::AmplitudeDamping, p).unwrap().completeness_error() <= 1e-12);
        assert!(kraus_set(ChannelKind::PhaseDamping, l).unwrap().completeness_error() <= 1e-12);
    }
}

#[test]
fn out_of_range_decay_is_rejected() {
    assert!(theta_ad(1.0 + 1e-6).is_err());
    assert!(theta_pd(-1.0 - 1e-6).is_err());
    assert!(theta_ad(1.0 + 1e-13).is_ok());
}
