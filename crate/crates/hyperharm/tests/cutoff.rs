use hyperharm::geometry::ModelParams;
use hyperharm::ktypes::KTypeIndex;
use hyperharm::numerics::real;
use hyperharm::schwartz_pw::{cutoff_decompose, guard_report, CutoffSpec};
use hyperharm::transforms::{
    calibrate_plancherel, delta_spherical, Bump, GridSpec, RadialGrid, SpatialFunction, SpectralGrid,
};

fn outside(f: &SpatialFunction, radius: f64) -> f64 {
    let nodes = f.grid.nodes();
    f.coeffs
        .values()
        .flat_map(|v| nodes.iter().zip(v).filter(|(t, _)| **t > radius).map(|(_, x)| x.norm()))
        .fold(0.0, f64::max)
}

fn peak(f: &SpatialFunction) -> f64 {
    f.coeffs.values().flatten().map(|v| v.norm()).fold(0.0, f64::max)
}

#[test]
fn cutoff_localizes_the_removed_part() {
    let mp = ModelParams::new(3).unwrap();
    let spec = GridSpec { radial: RadialGrid::new(8.0, 2048), spectral: SpectralGrid::symmetric(256.0, 4096, vec![0.0]) };
    let cal = calibrate_plancherel(&mp, &spec).unwrap().record;
    let delta = KTypeIndex::new(3, 1).unwrap();
    let f = Bump::Smooth { radius: 6.0 }.spatial(mp, spec.radial, delta.source_harmonics()[0]).unwrap();
    let h = delta_spherical(&f, &delta, &spec.spectral).unwrap();
    for j in [2u32, 4, 6] {
        let out = cutoff_decompose(&h, &CutoffSpec::new(j), &spec.radial, &cal).unwrap();
        let diff = f.add_scaled(&out.f_j, real(-1.0)).unwrap();
        let leak = outside(&diff, j as f64) / peak(&f);
        assert!(leak <= 1e-6, "j = {j}: {leak:e}");
        assert!(out.parity_residual <= 1e-8, "j = {j}: {:e}", out.parity_residual);
        assert!(out.max_h_j.is_finite());
    }
}

#[test]
fn guard_handles_the_boundary_root() {
    let mp = ModelParams::new(3).unwrap();
    let delta = KTypeIndex::new(3, 1).unwrap();
    let f = Bump::Smooth { radius: 2.0 }.spatial(mp, RadialGrid::new(4.0, 1024), delta.source_harmonics()[0]).unwrap();
    let root = mp.rho;
    let line = delta_spherical(&f, &delta, &SpectralGrid::symmetric(4.0, 32, vec![root])).unwrap();
    let refined = delta_spherical(&f, &delta, &SpectralGrid::symmetric(4.0, 64, vec![root])).unwrap();
    let mirror_line = delta_spherical(&f, &delta, &SpectralGrid::symmetric(4.0, 32, vec![-root])).unwrap();
    let report = guard_report(&line, &refined, &mirror_line, root).unwrap();
    assert!(report.all_finite);
    assert!(report.off_root_mismatch <= 1e-10, "{report:?}");
    let scale = report.evenness_value.norm();
    assert!(scale > 1e-6, "{report:?}");
    assert!((report.guarded_value - report.evenness_value).norm() <= 1e-6 * scale, "{report:?}");
}
