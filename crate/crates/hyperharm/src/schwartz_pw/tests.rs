use super::*;
use crate::geometry::ModelParams;
use crate::transforms::{Bump, RadialGrid};

fn mp(p: usize) -> ModelParams {
    ModelParams::new(p).unwrap()
}

#[test]
fn wrong_side_and_missing_tube_are_rejected() {
    let m = mp(3);
    let f = Bump::Smooth { radius: 1.0 }.spatial(m, RadialGrid::new(3.0, 384), Harmonic::constant()).unwrap();
    let tau = SeminormSpec::derivative(0.5, 2, 0);
    assert!(matches!(spatial_seminorm(&f, &tau, None), Err(HyperError::SpecMismatch(_))));
    let psi = helgason_fourier(&f, &SpectralGrid::half_line(8.0, 16)).unwrap();
    assert!(matches!(spectral_seminorm(&psi, &tau), Err(HyperError::InsufficientTube(_))));
    let sigma = SeminormSpec::spatial(1.0, 2, 0, 0);
    assert!(matches!(spectral_seminorm(&psi, &sigma), Err(HyperError::SpecMismatch(_))));
    assert!(spectral_seminorm(&psi, &SeminormSpec::derivative(0.0, 2, 1)).is_ok());
}

#[test]
fn spatial_seminorm_of_compact_bump_is_finite_with_zero_tail() {
    let m = mp(2);
    let f = Bump::Smooth { radius: 1.5 }.spatial(m, RadialGrid::new(3.0, 384), Harmonic::mode(1)).unwrap();
    let v = spatial_seminorm(&f, &SeminormSpec::spatial(1.0, 4, 0, 1), None).unwrap();
    assert!(v.value.is_finite() && v.value > 0.0);
    assert_eq!(v.tail_bound, 0.0);
    // The Casimir of K acts on a first-order mode by -1.
    let plain = spatial_seminorm(&f, &SeminormSpec::spatial(1.0, 4, 0, 0), None).unwrap();
    assert!((plain.value - v.value).abs() < 1e-12 * v.value);
}

#[test]
fn derivative_of_linear_function_is_exact() {
    let m = mp(3);
    let grid = SpectralGrid::symmetric(4.0, 32, vec![0.0]);
    let mut psi = SpectralFunction::zero(m, grid);
    let nus = psi.nus.clone();
    psi.coeffs.insert(Harmonic::constant(), nus.iter().map(|nu| nu * 2.0).collect());
    // d/dnu (2 nu) = 2 everywhere.
    let v = spectral_seminorm(&psi, &SeminormSpec::derivative(0.0, 0, 1)).unwrap();
    assert!((v.value - 2.0).abs() < 1e-10, "{v:?}");
}

#[test]
fn continuity_ratios_stay_bounded() {
    let m = mp(2);
    let grid = RadialGrid::new(4.0, 512);
    let family: Vec<(String, SpatialFunction)> = [1.0, 1.5, 2.0, 2.5, 3.0]
        .iter()
        .map(|r| (format!("R{r}"), Bump::Smooth { radius: *r }.spatial(m, grid, Harmonic::constant()).unwrap()))
        .collect();
    let spec = ContinuitySpec { spatial: SeminormSpec::spatial(1.0, 2, 0, 0), spectral_n: 2, derivatives: 2 };
    let rows = continuity_report(&family, &spec, &SpectralGrid::symmetric(24.0, 192, vec![0.0])).unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(hi / lo <= 50.0, "{rows:?}");
    // Both sides are homogeneous of degree one.
    let scaled = vec![("x3".to_string(), family[0].1.scale(crate::numerics::real(3.0)))];
    let r3 = continuity_report(&scaled, &spec, &SpectralGrid::symmetric(24.0, 192, vec![0.0])).unwrap();
    assert!((r3[0].ratio / rows[0].ratio - 1.0).abs() < 1e-10);
}

#[test]
fn gaussian_transform_is_holomorphic_in_the_tube() {
    let m = mp(3);
    let grid = RadialGrid::new(8.0, 1024);
    let f = SpatialFunction::from_profile(m, grid, Harmonic::constant(), |t| (-2.0 * t * t).exp(), None).unwrap();
    // L^1 data: the tube reaches Re nu = rho.
    let r = tube_residual(&f, m.rho, &SpectralGrid::symmetric(16.0, 320, vec![0.0])).unwrap();
    assert!(r <= 1e-7, "{r}");
}
