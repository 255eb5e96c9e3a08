use super::*;
use crate::geometry::{ModelParams, Rotation};
use crate::ktypes::{delta_matrix, KTypeIndex};
use crate::numerics::c;

fn mp(p: usize) -> ModelParams {
    ModelParams::new(p).unwrap()
}

fn short_radial() -> RadialGrid {
    RadialGrid::new(4.0, 1024)
}

fn coarse_spectral() -> SpectralGrid {
    SpectralGrid::symmetric(16.0, 64, vec![0.0])
}

fn bump_spatial(p: usize, h: Harmonic, radius: f64) -> SpatialFunction {
    Bump::Smooth { radius }.spatial(mp(p), short_radial(), h).unwrap()
}

#[test]
fn interpolation_reproduces_smooth_profiles() {
    let grid = RadialGrid::new(2.0, 256);
    for degree in [0usize, 1, 2] {
        let f = |t: f64| t.sinh().powi(degree as i32) * (-t * t).exp();
        let vals: Vec<Complex> = grid.nodes().iter().map(|t| real(f(*t))).collect();
        for t in [0.0013, 0.3, 1.234567, 1.999] {
            let v = interpolate_profile(&vals, grid.step(), t, degree);
            assert!((v.re - f(t)).abs() < 1e-12, "degree {degree} t {t}");
        }
    }
}

#[test]
fn zero_maps_to_zero() {
    let f = SpatialFunction::zero(mp(3), short_radial());
    let psi = helgason_fourier(&f, &coarse_spectral()).unwrap();
    assert!(psi.coeffs.is_empty());
    let mut g = f.clone();
    g.support = Some(1.0);
    assert!(radon(&g).unwrap().coeffs.is_empty());
}

#[test]
fn radial_transform_matches_closed_form_in_three_dimensions() {
    let f = bump_spatial(3, Harmonic::constant(), 2.0);
    let grid = SpectralGrid::half_line(8.0, 8);
    let psi = helgason_fourier(&f, &grid).unwrap();
    let vals = psi.values(Harmonic::constant()).unwrap();
    let bump = Bump::Smooth { radius: 2.0 };
    for (nu, v) in psi.nus.iter().zip(vals) {
        // 4 pi int f(t) sin(lambda t)/(lambda sinh t) sinh^2 t dt, by a fine independent rule.
        let lam = nu.im;
        let rule = crate::numerics::QuadratureRule::composite_gauss_legendre(64, 16, 0.0, 2.0);
        let samples: Vec<f64> = rule
            .nodes
            .iter()
            .map(|t| {
                let kernel = if lam == 0.0 { *t } else { (lam * t).sin() / lam };
                bump.value(*t) * kernel * t.sinh()
            })
            .collect();
        let want = 4.0 * std::f64::consts::PI * crate::numerics::integrate_real(&rule, &samples).unwrap();
        assert!((v - real(want)).norm() < 1e-10 * want.abs().max(1.0), "{nu}: {v} {want}");
    }
}

#[test]
fn radon_support_and_oracles() {
    let m = mp(3);
    let f = bump_spatial(3, Harmonic::constant(), 2.0);
    let rf = radon(&f).unwrap();
    assert!(rf.relative_max_beyond(2.0) < 1e-10);
    let bump = Bump::Smooth { radius: 2.0 };
    let nodes = rf.nodes();
    let vals = rf.coeffs.get(&Harmonic::constant()).unwrap();
    for k in (0..nodes.len()).step_by(97) {
        let t = nodes[k];
        if t.abs() >= 2.0 {
            continue;
        }
        // On H^3 the horocycle integral is 2 pi int_{|t|}^R f(s) sinh s ds.
        let rule = crate::numerics::QuadratureRule::composite_gauss_legendre(32, 16, t.abs(), 2.0);
        let samples: Vec<f64> = rule.nodes.iter().map(|s| bump.value(*s) * s.sinh()).collect();
        let want = 2.0 * std::f64::consts::PI * crate::numerics::integrate_real(&rule, &samples).unwrap();
        assert!((vals[k].re - want).abs() < 1e-9, "t = {t}: {} {want}", vals[k]);
    }
    assert!(radon(&SpatialFunction::zero(m, short_radial())).is_err());
}

#[test]
fn radon_matches_geometric_quadrature() {
    for (p, h) in [(2usize, Harmonic::mode(1)), (3, Harmonic::new(2, 0)), (3, Harmonic::new(1, 1))] {
        let f = bump_spatial(p, h, 1.5);
        let rf = radon(&f).unwrap();
        let nodes = rf.nodes();
        let north = crate::geometry::north(p);
        for k in [700usize, 1024, 1300] {
            let t = nodes[k];
            let want = radon_geometric(&f, t).unwrap();
            let got = vals_at(&rf, k, &north);
            assert!((got - want).norm() < 1e-6 * (1.0 + want.norm()), "p={p} {h:?} t={t}: {got} {want}");
        }
    }
}

fn vals_at(rf: &RadonFunction, k: usize, b: &[f64]) -> Complex {
    rf.coeffs.iter().map(|(h, v)| v[k] * crate::ktypes::eval_harmonic(*h, b)).sum()
}

#[test]
fn fourier_of_radon_is_helgason() {
    for (p, h) in [(2usize, Harmonic::mode(-2)), (3, Harmonic::constant()), (3, Harmonic::new(1, -1)), (3, Harmonic::new(2, 2))] {
        let f = bump_spatial(p, h, 2.0);
        let grid = SpectralGrid::symmetric(12.0, 24, vec![0.0, 0.3]);
        let direct = helgason_fourier(&f, &grid).unwrap();
        let via = euclid_fourier(&radon(&f).unwrap(), &grid).unwrap();
        let a = direct.values(h).unwrap();
        let b = via.values(h).unwrap();
        let scale = direct.max_abs();
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() < 1e-7 * scale, "p={p} {h:?}: {x} {y}");
        }
    }
}

#[test]
fn trace_of_delta_transform_is_helgason() {
    let m = mp(3);
    let delta = KTypeIndex::new(3, 1).unwrap();
    let f = bump_spatial(3, Harmonic::new(1, 0), 2.0)
        .add_scaled(&bump_spatial(3, Harmonic::new(1, 1), 1.5), c(0.5, 0.25))
        .unwrap();
    let grid = SpectralGrid::symmetric(6.0, 6, vec![0.0]);
    let hd = delta_spherical(&f, &delta, &grid).unwrap();
    let hf = helgason_fourier(&f, &grid).unwrap();
    let k = Rotation::from_angles(3, &[0.7, -0.4, 1.9]);
    let dm = delta_matrix(&delta, &k).unwrap();
    let b = k.apply(&crate::geometry::north(3));
    for i in 0..hd.nus.len() {
        let trace: Complex = (0..3).map(|a| dm[a * 3] * hd.rows[a][i]).sum();
        assert!((trace - hf.eval(i, &b)).norm() < 1e-9 * (1.0 + hf.max_abs()));
    }
    let _ = m;
}

#[test]
fn genuine_transforms_are_symmetric() {
    let f = bump_spatial(3, Harmonic::new(2, -1), 2.0);
    let grid = coarse_spectral();
    let psi = helgason_fourier(&f, &grid).unwrap();
    assert!(check_symmetry(&psi, SymmetryMode::ScFull, &[]).unwrap().relative < 1e-8);
    assert!(check_symmetry(&psi, SymmetryMode::PdeltaParity, &[]).unwrap().relative < 1e-8);
    let odd = {
        let mut s = SpectralFunction::zero(mp(3), SpectralGrid::symmetric(1.0, 1, vec![-1.0, 0.0, 1.0]));
        let nus = s.nus.clone();
        s.coeffs.insert(Harmonic::constant(), nus);
        s
    };
    let r = check_symmetry(&odd, SymmetryMode::ScFull, &[1.0]).unwrap();
    assert!(r.absolute >= 0.1);
    let half = SpectralFunction::zero(mp(3), SpectralGrid::half_line(2.0, 4));
    let mut half = half;
    half.coeffs.insert(Harmonic::constant(), vec![real(1.0); 5]);
    assert!(matches!(check_symmetry(&half, SymmetryMode::PdeltaParity, &[]), Err(HyperError::AsymmetricGrid(_))));
}

#[test]
fn abel_support_and_trivial_reduction() {
    let f = bump_spatial(3, Harmonic::new(1, 0), 2.0);
    let delta = KTypeIndex::new(3, 1).unwrap();
    let tf = generalized_abel(&f, &delta).unwrap();
    assert!(tf.relative_max_beyond(2.0) < 1e-10);
    let g = bump_spatial(3, Harmonic::constant(), 2.0);
    let tg = generalized_abel(&g, &KTypeIndex::trivial(3)).unwrap();
    assert_eq!(tg.coeffs.get(&Harmonic::constant()), radon(&g).unwrap().coeffs.get(&Harmonic::constant()));
}

#[test]
fn linearity() {
    let f = bump_spatial(2, Harmonic::mode(1), 2.0);
    let g = bump_spatial(2, Harmonic::mode(1), 1.0);
    let grid = SpectralGrid::half_line(4.0, 4);
    let s = c(0.3, -2.0);
    let lhs = helgason_fourier(&f.add_scaled(&g, s).unwrap(), &grid).unwrap();
    let a = helgason_fourier(&f, &grid).unwrap();
    let b = helgason_fourier(&g, &grid).unwrap();
    let h = Harmonic::mode(1);
    for k in 0..lhs.nus.len() {
        let want = a.values(h).unwrap()[k] + s * b.values(h).unwrap()[k];
        assert!((lhs.values(h).unwrap()[k] - want).norm() < 1e-12 * (1.0 + want.norm()));
    }
}

#[test]
fn calibration_and_round_trip() {
    let m = mp(3);
    let spec = GridSpec { radial: RadialGrid::new(6.0, 1536), spectral: SpectralGrid::default() };
    let outcome = calibrate_plancherel(&m, &spec).unwrap();
    let cal = &outcome.record;
    let expected = 1.0 / (2.0 * std::f64::consts::PI.powi(2));
    assert!((cal.constant_plancherel / expected - 1.0).abs() < 1e-6, "{cal:?}");
    assert!((cal.constant_inversion / expected - 1.0).abs() < 1e-6, "{cal:?}");
    for (_, r) in &outcome.held_out {
        assert!((r - 1.0).abs() < 1e-3, "{outcome:?}");
    }
    let f = Bump::Poly { radius: 2.0, power: 3 }.spatial(m, spec.radial, Harmonic::constant()).unwrap();
    let back = inverse_helgason(&helgason_fourier(&f, &spec.spectral).unwrap(), &spec.radial, cal).unwrap();
    let err = back.relative_l2_error(&f).unwrap();
    assert!(err < 1e-4, "{err}");
    let other = GridSpec { radial: RadialGrid::new(6.0, 768), spectral: SpectralGrid::default() };
    let psi = helgason_fourier(&f, &other.spectral).unwrap();
    assert!(matches!(inverse_helgason(&psi, &other.radial, cal), Err(HyperError::Uncalibrated(3))));
}
