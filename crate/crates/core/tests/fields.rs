use std::f64::consts::PI;

use reshetnyak::opcalc::{a_operator, specialize};
use reshetnyak::raykit::{
    fourier_volume, norm_hst_ts, ray_transform, reshetnyak_check_with, slice_check, solenoidal_project, sphere_slice_integral_check,
    tangential_defect, AnalyticField, GaussPoly, IsometryConfig, LineGrid, VolumeField,
};
use reshetnyak::spherecalc::{
    apply_ncpoly, divergence, inner_d, metric_i, sphere_inner, sphere_integrate, trace_j, SphereGrid, TangentField,
};
use reshetnyak::symtensor::{SymTensor, C64};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// e^{-|x|²/2}, self-dual under the unitary Fourier transform.
fn gaussian(shape: usize) -> VolumeField {
    VolumeField::from_analytic(&AnalyticField::scalar(GaussPoly::gaussian(2)), 8.0, shape).unwrap()
}

#[test]
fn sphere_areas() {
    let g = SphereGrid::circle(256, 8).unwrap();
    assert!((sphere_integrate(&g, &vec![c(1.0); g.len()]).unwrap().re - 2.0 * PI).abs() < 1e-12);
    let s = SphereGrid::latlon(24, 48, 8).unwrap();
    assert!((sphere_integrate(&s, &vec![c(1.0); s.len()]).unwrap().re - 4.0 * PI).abs() < 1e-10);
}

#[test]
fn coordinate_functions_are_laplacian_eigenfunctions() {
    let g = SphereGrid::latlon(32, 64, 8).unwrap();
    let y = TangentField::scalar(&g, |p| c(p[2]));
    let lap = divergence(&inner_d(&y)).unwrap();
    assert!(lap.add(&y.scale(c(2.0))).unwrap().max_abs() < 1e-6);
}

#[test]
fn metric_and_trace_are_adjoint_on_the_circle() {
    let g = SphereGrid::circle(128, 8).unwrap();
    let u = TangentField::random(&g, 1, 4, 1);
    let v = TangentField::random(&g, 3, 4, 2);
    let lhs = sphere_inner(&metric_i(&u), &v).unwrap();
    let rhs = sphere_inner(&u, &trace_j(&v).unwrap()).unwrap();
    assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
}

#[test]
fn derived_operator_acts_on_sphere_fields() {
    let g = SphereGrid::circle(256, 8).unwrap();
    let a = specialize(&a_operator(0, 0, 0).unwrap(), 2).unwrap();
    let f = TangentField::random(&g, 0, 3, 5);
    assert!(apply_ncpoly(&a, &f).unwrap().sub(&f).unwrap().max_abs() < 1e-14);
    let a11 = specialize(&a_operator(1, 1, 1).unwrap(), 2).unwrap();
    let v = TangentField::random(&g, 1, 3, 6);
    let q = sphere_inner(&apply_ncpoly(&a11, &v).unwrap(), &v).unwrap();
    assert!(q.re > -1e-10 && q.im.abs() < 1e-10);
}

#[test]
fn slice_integral_over_circle() {
    for mk in 0..=3 {
        assert!(sphere_slice_integral_check(&[0.6, 0.0, 0.8], mk).unwrap() < 1e-10, "mk={mk}");
    }
}

#[test]
fn gaussian_transforms() {
    let f = gaussian(64);
    let hat = fourier_volume(&f);
    let err = (0..hat.voxels())
        .map(|v| {
            let y = hat.point(v);
            (hat.plane(0)[v] - c((-0.5 * (y[0] * y[0] + y[1] * y[1])).exp())).norm()
        })
        .fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");

    let grid = LineGrid::new(64, 8.0, 128).unwrap();
    let phi = ray_transform(&f, &grid).unwrap();
    let err = (0..grid.n_dirs())
        .flat_map(|a| (0..grid.n_offsets()).map(move |b| (a, b)))
        .map(|(a, b)| (phi.at(a, b) - c((2.0 * PI).sqrt() * (-0.5 * grid.offset(b).powi(2)).exp())).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
    assert!(slice_check(&f, &phi).unwrap().residual < 1e-6);
    assert!(norm_hst_ts(&phi, 0.0, 0.0).unwrap() > 0.0);
}

#[test]
fn solenoidal_projection_is_tangential() {
    let w = GaussPoly::gaussian(2).add(&GaussPoly::monomial(&[0, 1], c(0.25)));
    let grad = VolumeField::from_analytic(&AnalyticField::potential(&w, 1), 8.0, 64).unwrap();
    let mixed = grad.add(&VolumeField::from_analytic(&AnalyticField::curl(&w, 1).unwrap(), 8.0, 64).unwrap()).unwrap();
    let p = solenoidal_project(&mixed);
    assert!(tangential_defect(&fourier_volume(&p)) < 1e-12);
    assert!(solenoidal_project(&p).sub(&p).unwrap().max_abs() < 1e-12 * p.max_abs());
}

#[test]
fn isometry_anchor_on_small_grids() {
    let cfg = IsometryConfig { directions: 64, offsets: 256, sphere_points: 64, ..IsometryConfig::default() };
    let rep = reshetnyak_check_with(&gaussian(64), 0, 0.0, 0.0, &cfg).unwrap();
    assert!((rep.lhs - PI).abs() < 1e-6 * PI, "{rep:?}");
    assert!(rep.rel_err < 1e-2, "{rep:?}");
}

#[test]
fn vector_fields_stay_tangential() {
    let g = SphereGrid::latlon(16, 32, 8).unwrap();
    let v = TangentField::from_fn(&g, 1, |y| SymTensor::from_comps(3, 1, vec![c(y[1]), c(-y[0]), c(0.3)]).unwrap()).unwrap();
    assert!(v.normal_residual() < 1e-14);
    assert!(inner_d(&v).normal_residual() < 1e-10);
}
