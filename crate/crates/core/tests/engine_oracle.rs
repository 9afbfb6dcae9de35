//! Both engines against the exact dynamic-programming distributions.

use std::collections::BTreeMap;

use anisowalk_core::engine::{replica_rng, Mechanism, ObserverConfig, Simulator, Site};
use anisowalk_core::oracle::{exact_origin_local_time_distribution, exact_site_distribution};
use anisowalk_core::stats::chi_square;
use anisowalk_core::{ProfileSpec, Rational};

const REPLICAS: u64 = 200_000;
const LEVEL: f64 = 0.999;

fn profiles() -> Vec<ProfileSpec> {
    vec![
        ProfileSpec::constant(Rational::new(1, 4)).unwrap(),
        ProfileSpec::comb(),
        ProfileSpec::periodic(vec![Rational::new(1, 4), Rational::new(1, 2)]).unwrap(),
        ProfileSpec::half_plane_half_comb(),
        ProfileSpec::power_tail(2.0, 2.0, 0.25).unwrap(),
    ]
}

fn histograms(sim: &Simulator, mech: Mechanism, n: u64, seed: u64) -> (BTreeMap<Site, i64>, BTreeMap<u64, i64>) {
    let cfg = ObserverConfig::counters().with_tracked(vec![Site::ORIGIN]);
    let mut sites = BTreeMap::new();
    let mut times = BTreeMap::new();
    for r in 0..REPLICAS {
        let s = sim.run(mech, n, replica_rng(seed, r), &cfg).unwrap();
        *sites.entry(s.pos).or_insert(0) += 1;
        *times.entry(s.local_time(Site::ORIGIN).unwrap()).or_insert(0) += 1;
    }
    (sites, times)
}

#[test]
fn site_and_local_time_histograms_match_the_oracle() {
    let mut failures = Vec::new();
    for (pi, profile) in profiles().iter().enumerate() {
        for n in 1..=6u32 {
            let sim = Simulator::new(profile, n as u64);
            let sites = exact_site_distribution(profile, n).unwrap().to_f64_map();
            let times: BTreeMap<u64, f64> = exact_origin_local_time_distribution(profile, n)
                .unwrap()
                .into_iter()
                .map(|(k, p)| (k, p.to_f64()))
                .collect();
            for mech in [Mechanism::Direct, Mechanism::Construction] {
                let seed = 1000 * pi as u64 + 10 * n as u64 + mech as u64;
                let (obs_sites, obs_times) = histograms(&sim, mech, n as u64, seed);
                let cs = chi_square(&obs_sites, &sites, REPLICAS).unwrap();
                if !cs.passes(LEVEL) {
                    failures.push(format!("{} N={n} {} sites {cs:?}", profile.label(), mech.as_str()));
                }
                // A single reachable count (N=1) leaves nothing to test.
                if let Ok(cs) = chi_square(&obs_times, &times, REPLICAS) {
                    if !cs.passes(LEVEL) {
                        failures.push(format!("{} N={n} {} local time {cs:?}", profile.label(), mech.as_str()));
                    }
                }
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn comb_two_steps_return_three_eighths() {
    let comb = ProfileSpec::comb();
    let exact = exact_site_distribution(&comb, 2).unwrap();
    assert!((exact.mass(Site::ORIGIN).to_f64() - 0.375).abs() < 1e-15);
    let sim = Simulator::new(&comb, 2);
    for mech in [Mechanism::Direct, Mechanism::Construction] {
        let (sites, _) = histograms(&sim, mech, 2, 77);
        let p = sites[&Site::ORIGIN] as f64 / REPLICAS as f64;
        let se = (0.375 * 0.625 / REPLICAS as f64).sqrt();
        assert!((p - 0.375).abs() < 5.0 * se, "{} {p}", mech.as_str());
    }
}
