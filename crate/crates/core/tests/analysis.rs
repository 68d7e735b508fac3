use num_complex::Complex64;
use padefaber::analysis::{fit_records, FitOutcome, GridKind, RowEnd, RowSequenceReport, RowSettings};
use padefaber::{
    pole_profile, polewise_independence_delta, run_row_sequence, CompactGrid, ComponentFunction, Geometry,
    MultiIndex, VectorFunctionSpec,
};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn components(poles: &[&[f64]]) -> Vec<ComponentFunction> {
    poles
        .iter()
        .map(|p| ComponentFunction::simple_poles(&p.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>()))
        .collect()
}

fn disk_ensemble() -> VectorFunctionSpec {
    VectorFunctionSpec::new(Geometry::unit_disk(), components(&[&[2.0, 6.0], &[3.0, 6.0]])).unwrap()
}

fn segment_ensemble() -> VectorFunctionSpec {
    VectorFunctionSpec::new(Geometry::unit_segment(), components(&[&[1.25, 2.125], &[-1.25]])).unwrap()
}

fn m11() -> MultiIndex {
    MultiIndex::new(vec![1, 1]).unwrap()
}

fn run(spec: &VectorFunctionSpec, n_start: usize, n_end: usize) -> RowSequenceReport {
    let grid = CompactGrid::boundary(spec.geometry());
    run_row_sequence(spec, &m11(), n_start, RowEnd::At(n_end), &[grid], &RowSettings::default()).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

#[test]
fn disk_ensemble_profile_and_bounds() {
    let spec = disk_ensemble();
    let p = pole_profile(&spec, &m11()).unwrap();
    assert_eq!(p.poles.len(), 2);
    assert_eq!(p.rho_m, 6.0);
    assert!((p.threshold - 1.5).abs() < 1e-15);
    let report = run(&spec, 4, 8);
    let b = report.bounds[0];
    assert!((b.bound_24 - 1.0 / 6.0).abs() < 1e-12 && (b.bound_25 - 0.5).abs() < 1e-12);
}

#[test]
fn segment_ensemble_profile_and_bounds() {
    let spec = segment_ensemble();
    let p = pole_profile(&spec, &m11()).unwrap();
    let locations: Vec<f64> = p.poles.iter().map(|q| q.location.re).collect();
    assert_eq!(locations.len(), 2);
    assert!(locations.contains(&1.25) && locations.contains(&-1.25));
    assert!((p.rho_m - 4.0).abs() < 1e-12);
    assert!((p.threshold - 1.5).abs() < 1e-12);
    let report = run(&spec, 4, 8);
    let b = report.bounds[0];
    assert!((b.bound_24 - 0.25).abs() < 1e-7 && (b.bound_25 - 0.5).abs() < 1e-12);
}

#[test]
fn disk_ensemble_conforms_to_the_rates() {
    let report = run(&disk_ensemble(), 4, 36);
    let b = report.bounds[0];
    let r_q = report.fits.r_q.rate().expect("r_Q fitted");
    assert!(r_q <= 1.1 * b.bound_25, "r_Q = {r_q}");
    for alpha in 0..2 {
        let r = report.fits.r_sup[0][alpha].rate().expect("r_sup fitted");
        assert!(r <= 1.2 * b.bound_24, "α = {alpha}: r_sup = {r}");
    }
    let first = report.records.first().unwrap().q_coeff_err.unwrap();
    let best = report.records.iter().filter_map(|r| r.q_coeff_err).fold(f64::INFINITY, f64::min);
    assert!(first / best >= 1e6, "{first:e} → {best:e}");
}

#[test]
fn segment_ensemble_conforms_to_the_rates() {
    let report = run(&segment_ensemble(), 4, 40);
    let b = report.bounds[0];
    let r_q = report.fits.r_q.rate().expect("r_Q fitted");
    assert!(r_q <= 1.1 * b.bound_25, "r_Q = {r_q}");
    for (alpha, fit) in report.fits.r_sup[0].iter().enumerate() {
        assert!(fit.conforms(1.2 * b.bound_24), "α = {alpha}: {fit:?}");
    }
    // the second component is the single pole −1.25, recovered exactly
    assert_eq!(report.fits.r_sup[0][1], FitOutcome::BelowFloor);
}

#[test]
fn poles_are_attracted() {
    let report = run(&disk_ensemble(), 4, 36);
    let half = report.records.len() / 2;
    for j in 0..2 {
        let d: Vec<f64> = report.records.iter().map(|r| r.pole_err[j]).collect();
        assert!(median(d[half..].to_vec()) < median(d[..half].to_vec()), "pole {j}");
    }
}

#[test]
fn uniqueness_sets_in_and_stays() {
    let report = run(&disk_ensemble(), 4, 36);
    let onset = report.uniqueness_onset.expect("onset observed");
    assert!(onset <= 8, "{onset}");
    assert!(report.records.iter().filter(|r| r.n >= onset).all(|r| r.unique));
    assert!(report.delta.as_ref().unwrap().relative > 1e-3);
}

#[test]
fn dependent_components_have_a_vanishing_delta() {
    let spec = VectorFunctionSpec::new(Geometry::unit_disk(), components(&[&[2.0], &[2.0]])).unwrap();
    let report = run(&spec, 1, 12);
    assert!(report.records.iter().all(|r| !r.unique));
    assert_eq!(report.uniqueness_onset, None);
    let delta = report.delta.unwrap();
    assert!(delta.relative < 1e-8, "{delta:?}");
}

#[test]
fn exact_recovery_matches_the_poles() {
    let spec = VectorFunctionSpec::new(Geometry::unit_disk(), components(&[&[2.0], &[3.0]])).unwrap();
    let report = run(&spec, 2, 12);
    for r in &report.records {
        assert!(r.pole_err.iter().all(|d| *d < 1e-8), "n = {}: {:?}", r.n, r.pole_err);
    }
    assert!(report.bounds[0].superlinear);
}

#[test]
fn rows_are_deterministic() {
    let spec = segment_ensemble();
    let a = run(&spec, 4, 20);
    let b = run(&spec, 4, 20);
    assert_eq!(a.records, b.records);
    assert_eq!(a.fits, b.fits);
}

#[test]
fn floor_hits_end_the_row() {
    let spec = VectorFunctionSpec::new(Geometry::unit_disk(), components(&[&[2.0], &[3.0]])).unwrap();
    let grid = CompactGrid::boundary(spec.geometry());
    let report = run_row_sequence(&spec, &m11(), 2, RowEnd::FloorHits, &[grid], &RowSettings::default()).unwrap();
    // a rational F is exact from the first row on
    assert_eq!(report.records.len(), 2);
    assert_eq!(report.records.last().unwrap().n, 3);
}

#[test]
fn refits_agree_with_the_report() {
    let report = run(&disk_ensemble(), 4, 36);
    let refit = fit_records(&report.records, 1, 2, 2, &RowSettings::default().fit);
    assert_eq!(refit, report.fits);
}

#[test]
fn grids_outside_the_canonical_domain_are_rejected() {
    let spec = disk_ensemble();
    let far = CompactGrid::new("far", GridKind::Disk { center: c(0.0, 0.0), radius: 7.0 }, 64, spec.geometry()).unwrap();
    let err = run_row_sequence(&spec, &m11(), 4, RowEnd::At(6), &[far], &RowSettings::default());
    assert!(err.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_scales_with_each_component(sr in -3.0f64..3.0, si in -3.0f64..3.0, alpha in 0usize..2) {
        let s = c(sr, si);
        prop_assume!(s.norm() > 1e-2);
        let spec = VectorFunctionSpec::new(
            Geometry::unit_segment(),
            components(&[&[1.25, 2.5], &[-1.5, 3.0]]),
        ).unwrap();
        let m = MultiIndex::new(vec![2, 1]).unwrap();
        let p = pole_profile(&spec, &m).unwrap();
        let base = polewise_independence_delta(&spec, &m, &p, None).unwrap();
        let scaled_spec = spec.with_scaled_component(alpha, s);
        let scaled = polewise_independence_delta(&scaled_spec, &m, &p, Some(base.eps)).unwrap();
        let expected = base.det * s.powu(m.get(alpha) as u32);
        prop_assert!((scaled.det - expected).norm() <= 1e-8 * expected.norm(), "{:?} vs {:?}", scaled.det, expected);
    }
}
