//! Oriented lines in the plane, sampled ray transforms, and the per-direction Fourier transform.
//!
//! A line is (x, ξ) with ξ = (cos θ_a, sin θ_a), θ_a = 2πa/N_dir, and x = s_b·ξ^⊥ where
//! ξ^⊥ = (−sin θ_a, cos θ_a) and s_b = −R + b·2R/N_off.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::interp::{interp, DEFAULT_INTERP_ORDER};
use super::volume::{FourierSampler, VolumeField};
use crate::error::{arg, Error, Result};
use crate::spherecalc::{SphereGrid, DEFAULT_FD_ORDER};
use crate::symtensor::{layout, power_eval, C64};

pub const DEFAULT_DIRECTIONS: usize = 512;
pub const DEFAULT_OFFSETS: usize = 512;
/// Offset radius as a multiple of the volume extent; wide windows give fine dual spacing π/R.
pub const DEFAULT_OFFSET_FACTOR: f64 = 4.0;

/// Directions on the unit circle times a uniform offset grid on each ξ^⊥.
#[derive(Clone, Debug)]
pub struct LineGrid {
    directions: Arc<SphereGrid>,
    radius: f64,
    count: usize,
}

impl LineGrid {
    pub fn new(n_dirs: usize, radius: f64, count: usize) -> Result<Arc<LineGrid>> {
        if !n_dirs.is_multiple_of(4) || n_dirs < 16 {
            return Err(Error::Configuration(format!("direction count {n_dirs} must be a multiple of 4, at least 16")));
        }
        if !count.is_multiple_of(2) || count < 16 {
            return Err(Error::Configuration(format!("offset count {count} must be even, at least 16")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Configuration(format!("offset radius {radius} must be positive")));
        }
        Ok(Arc::new(LineGrid { directions: SphereGrid::circle(n_dirs, DEFAULT_FD_ORDER)?, radius, count }))
    }

    /// Line grid in n dimensions; only the plane is supported.
    pub fn for_dimension(n: usize, n_dirs: usize, radius: f64, count: usize) -> Result<Arc<LineGrid>> {
        if n != 2 {
            return arg(format!("line grids are implemented for n = 2, got {n}"));
        }
        LineGrid::new(n_dirs, radius, count)
    }

    /// Default grid matched to a volume of half-width `extent`.
    pub fn default_for(extent: f64) -> Result<Arc<LineGrid>> {
        LineGrid::new(DEFAULT_DIRECTIONS, DEFAULT_OFFSET_FACTOR * extent, DEFAULT_OFFSETS)
    }

    pub fn directions(&self) -> &Arc<SphereGrid> {
        &self.directions
    }

    pub fn n_dirs(&self) -> usize {
        self.directions.len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_offsets(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.n_dirs() * self.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn offset_spacing(&self) -> f64 {
        2.0 * self.radius / self.count as f64
    }

    pub fn dir_spacing(&self) -> f64 {
        2.0 * PI / self.n_dirs() as f64
    }

    pub fn offset(&self, b: usize) -> f64 {
        -self.radius + b as f64 * self.offset_spacing()
    }

    pub fn xi(&self, a: usize) -> [f64; 2] {
        let y = self.directions.node(a);
        [y[0], y[1]]
    }

    pub fn xi_perp(&self, a: usize) -> [f64; 2] {
        let [c, s] = self.xi(a);
        [-s, c]
    }

    /// (x, ξ) of node (a, b).
    pub fn line(&self, a: usize, b: usize) -> ([f64; 2], [f64; 2]) {
        let s = self.offset(b);
        let p = self.xi_perp(a);
        ([s * p[0], s * p[1]], self.xi(a))
    }

    /// Grid of the dual variable: same directions, half-width π/h_s.
    pub fn dual(&self) -> Arc<LineGrid> {
        Arc::new(LineGrid { directions: self.directions.clone(), radius: PI / self.offset_spacing(), count: self.count })
    }

    /// Node holding (x, −ξ): direction a + N/2, offset −s (None when −s is off the grid).
    pub fn mirror(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        if b == 0 {
            return None;
        }
        Some(((a + self.n_dirs() / 2) % self.n_dirs(), self.count - b))
    }

    /// Largest |⟨x, ξ⟩| and ||ξ| − 1| over all nodes.
    pub fn max_constraint_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.n_dirs() {
            for b in [0, self.count / 2, self.count - 1] {
                let (x, xi) = self.line(a, b);
                worst = worst.max((x[0] * xi[0] + x[1] * xi[1]).abs()).max(((xi[0] * xi[0] + xi[1] * xi[1]).sqrt() - 1.0).abs());
            }
        }
        worst
    }

    pub fn same_as(&self, o: &LineGrid) -> bool {
        self.n_dirs() == o.n_dirs() && self.count == o.count && (self.radius - o.radius).abs() <= 1e-12 * self.radius
    }
}

/// Whether offsets are spatial (x ∈ ξ^⊥) or Fourier-dual (y ∈ ξ^⊥).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Domain {
    Spatial,
    Fourier,
}

/// Complex samples of a function on TS¹, direction-major.
#[derive(Clone, Debug)]
pub struct RaySample {
    grid: Arc<LineGrid>,
    degree: usize,
    domain: Domain,
    values: Vec<C64>,
}

impl RaySample {
    pub fn new(grid: &Arc<LineGrid>, degree: usize, domain: Domain, values: Vec<C64>) -> Result<RaySample> {
        if values.len() != grid.len() {
            return arg(format!("{} values for {} lines", values.len(), grid.len()));
        }
        Ok(RaySample { grid: grid.clone(), degree, domain, values })
    }

    pub fn zeros(grid: &Arc<LineGrid>, degree: usize) -> RaySample {
        RaySample { grid: grid.clone(), degree, domain: Domain::Spatial, values: vec![C64::new(0.0, 0.0); grid.len()] }
    }

    /// Samples φ(x, ξ).
    pub fn from_fn(grid: &Arc<LineGrid>, degree: usize, f: impl Fn(&[f64; 2], &[f64; 2]) -> C64 + Sync) -> RaySample {
        let count = grid.n_offsets();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (x, xi) = grid.line(k / count, k % count);
                f(&x, &xi)
            })
            .collect();
        RaySample { grid: grid.clone(), degree, domain: Domain::Spatial, values }
    }

    pub fn grid(&self) -> &Arc<LineGrid> {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn at(&self, a: usize, b: usize) -> C64 {
        self.values[a * self.grid.n_offsets() + b]
    }

    /// Row of samples for direction a.
    pub fn row(&self, a: usize) -> &[C64] {
        let c = self.grid.n_offsets();
        &self.values[a * c..(a + 1) * c]
    }

    pub fn with_values(&self, values: Vec<C64>) -> RaySample {
        debug_assert_eq!(values.len(), self.values.len());
        RaySample { grid: self.grid.clone(), degree: self.degree, domain: self.domain, values }
    }

    pub(crate) fn check_same(&self, o: &RaySample) -> Result<()> {
        if !self.grid.same_as(&o.grid) || self.domain != o.domain {
            return arg("ray samples live on different grids");
        }
        Ok(())
    }

    pub fn add(&self, o: &RaySample) -> Result<RaySample> {
        self.check_same(o)?;
        Ok(self.with_values(self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, o: &RaySample) -> Result<RaySample> {
        self.check_same(o)?;
        Ok(self.with_values(self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: C64) -> RaySample {
        self.with_values(self.values.iter().map(|v| v * c).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |φ(x, −ξ) − (−1)^m φ(x, ξ)| relative to max |φ|.
    pub fn parity_defect(&self) -> f64 {
        let sign = if self.degree.is_multiple_of(2) { 1.0 } else { -1.0 };
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let (nd, nc) = (self.grid.n_dirs(), self.grid.n_offsets());
        let mut worst: f64 = 0.0;
        for a in 0..nd {
            for b in 0..nc {
                if let Some((a2, b2)) = self.grid.mirror(a, b) {
                    worst = worst.max((self.at(a2, b2) - self.at(a, b) * sign).norm());
                }
            }
        }
        worst / scale
    }

    /// L² pairing Σ Δθ·h_s·φ1·conj(φ2).
    pub fn inner(&self, o: &RaySample) -> Result<C64> {
        self.check_same(o)?;
        let w = self.grid.dir_spacing() * self.grid.offset_spacing();
        Ok(self.values.iter().zip(&o.values).map(|(a, b)| a * b.conj()).sum::<C64>() * w)
    }
}

/// Quadrature settings for the ray transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayConfig {
    /// Half-length T of the integration segment; None means the volume extent.
    pub truncation: Option<f64>,
    /// Points per axis of the Lagrange interpolant.
    pub interp_order: usize,
}

impl Default for RayConfig {
    fn default() -> Self {
        RayConfig { truncation: None, interp_order: DEFAULT_INTERP_ORDER }
    }
}

/// If(x, ξ) = ∫ f_I(x + tξ) ξ^I dt with default quadrature settings.
pub fn ray_transform(f: &VolumeField, g: &Arc<LineGrid>) -> Result<RaySample> {
    ray_transform_with(f, g, &RayConfig::default())
}

/// Trapezoid rule in t with step h over [−T, T]; f is interpolated off the voxel grid.
pub fn ray_transform_with(f: &VolumeField, g: &Arc<LineGrid>, cfg: &RayConfig) -> Result<RaySample> {
    if f.n() != 2 {
        return arg(format!("the ray transform is implemented for n = 2, got {}", f.n()));
    }
    let t_max = cfg.truncation.unwrap_or(f.extent());
    if t_max > f.extent() * (1.0 + 1e-12) {
        return Err(Error::Configuration(format!("truncation {t_max} exceeds the volume extent {}", f.extent())));
    }
    if !(2..=16).contains(&cfg.interp_order) {
        return Err(Error::Configuration(format!("interpolation order {} out of range 2..=16", cfg.interp_order)));
    }
    let h = f.spacing();
    let steps = (2.0 * t_max / h).round().max(1.0) as usize;
    let dt = 2.0 * t_max / steps as f64;
    let lay = layout(f.n(), f.m());
    let (nd, nc) = (g.n_dirs(), g.n_offsets());
    let reach = f.extent() * 2f64.sqrt() + cfg.interp_order as f64 * h;
    let half = nd / 2;
    let rows: Vec<Vec<C64>> = (0..half)
        .into_par_iter()
        .map(|a| {
            let xi = g.xi(a);
            let perp = g.xi_perp(a);
            // scalar plane Σ_p mult_p f_p ξ^{I_p}
            let weights: Vec<f64> = (0..lay.len())
                .map(|p| lay.multiplicity(p) * lay.index(p).iter().map(|&i| xi[i as usize]).product::<f64>())
                .collect();
            let mut plane = vec![C64::new(0.0, 0.0); f.voxels()];
            for (p, w) in weights.iter().enumerate() {
                if *w != 0.0 {
                    plane.iter_mut().zip(f.plane(p)).for_each(|(z, v)| *z += v * w);
                }
            }
            let mut row = vec![C64::new(0.0, 0.0); nc];
            for (b, out) in row.iter_mut().enumerate() {
                let s = g.offset(b);
                if s.abs() > reach {
                    continue;
                }
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..=steps {
                    let t = -t_max + k as f64 * dt;
                    let x = [s * perp[0] + t * xi[0], s * perp[1] + t * xi[1]];
                    let u = [(x[0] + f.extent()) / h, (x[1] + f.extent()) / h];
                    let v = interp(plane.as_slice(), 2, f.shape(), &u, cfg.interp_order);
                    acc += if k == 0 || k == steps { v * 0.5 } else { v };
                }
                *out = acc * dt;
            }
            row
        })
        .collect();
    let sign = if f.m().is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut values = vec![C64::new(0.0, 0.0); nd * nc];
    for (a, row) in rows.iter().enumerate() {
        values[a * nc..(a + 1) * nc].copy_from_slice(row);
        // φ(x, −ξ) = (−1)^m φ(x, ξ): direction a + N/2 at offset −s
        let a2 = a + half;
        for b in 1..nc {
            values[a2 * nc + (nc - b)] = row[b] * sign;
        }
    }
    // offset index 0 of the mirrored half has no partner; integrate it directly
    for a2 in half..nd {
        if g.offset(0).abs() > reach {
            continue;
        }
        let only = ray_single(f, g, a2, 0, t_max, steps, cfg.interp_order);
        values[a2 * nc] = only;
    }
    RaySample::new(g, f.m(), Domain::Spatial, values)
}

fn ray_single(f: &VolumeField, g: &LineGrid, a: usize, b: usize, t_max: f64, steps: usize, q: usize) -> C64 {
    let (x0, xi) = g.line(a, b);
    let h = f.spacing();
    let dt = 2.0 * t_max / steps as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=steps {
        let t = -t_max + k as f64 * dt;
        let x = [x0[0] + t * xi[0], x0[1] + t * xi[1]];
        let u = [(x[0] + f.extent()) / h, (x[1] + f.extent()) / h];
        let val: C64 = (0..layout(2, f.m()).len())
            .map(|p| {
                let lay = layout(2, f.m());
                let w = lay.multiplicity(p) * lay.index(p).iter().map(|&i| xi[i as usize]).product::<f64>();
                interp(f.plane(p), 2, f.shape(), &u, q) * w
            })
            .sum();
        acc += if k == 0 || k == steps { val * 0.5 } else { val };
    }
    acc * dt
}

/// Centred DFT of one offset row; the offset grid of half-width R maps to half-width π/h_s.
fn dft_row(row: &mut [C64], spacing: f64, inverse: bool) {
    let n = row.len();
    let mut planner = FftPlanner::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let half_sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let c = half_sign * spacing / (2.0 * PI).sqrt();
    for (j, z) in row.iter_mut().enumerate() {
        if j % 2 == 1 {
            *z = -*z;
        }
    }
    fft.process(row);
    for (k, z) in row.iter_mut().enumerate() {
        *z *= if k % 2 == 1 { -c } else { c };
    }
}

fn transform_rows(phi: &RaySample, inverse: bool, domain: Domain) -> RaySample {
    let g = &phi.grid;
    let nc = g.n_offsets();
    let h = g.offset_spacing();
    let mut values = phi.values.clone();
    values.par_chunks_mut(nc).for_each(|row| dft_row(row, h, inverse));
    RaySample { grid: g.dual(), degree: phi.degree, domain, values }
}

/// φ̂(y, ξ) = (2π)^(−1/2) ∫_{ξ^⊥} e^{−i⟨y,x⟩} φ(x, ξ) dx, direction by direction.
pub fn fourier_ray(phi: &RaySample) -> RaySample {
    transform_rows(phi, false, Domain::Fourier)
}

/// Inverse of [`fourier_ray`].
pub fn inverse_fourier_ray(phi: &RaySample) -> RaySample {
    transform_rows(phi, true, Domain::Spatial)
}

/// Slice-theorem comparison report.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SliceReport {
    /// max |φ̂ − √(2π) f̂_I(y) ξ^I| / max |√(2π) f̂_I(y) ξ^I| over |y| ≤ band
    pub residual: f64,
    pub band: f64,
    pub nodes: usize,
}

/// Default trusted band for |y| in the slice comparison.
pub const DEFAULT_SLICE_BAND: f64 = 8.0;

/// Compares the transform of φ = If with √(2π)·f̂(y)ξ^I at every dual node with |y| ≤ band.
pub fn slice_check(f: &VolumeField, phi: &RaySample) -> Result<SliceReport> {
    slice_check_band(f, phi, DEFAULT_SLICE_BAND)
}

pub fn slice_check_band(f: &VolumeField, phi: &RaySample, band: f64) -> Result<SliceReport> {
    if phi.domain != Domain::Spatial {
        return arg("slice_check expects spatial ray samples");
    }
    let ph = fourier_ray(phi);
    let dual = ph.grid.clone();
    let sampler = FourierSampler::new(f, band + 0.5, 0.05)?;
    let nc = dual.n_offsets();
    let root = (2.0 * PI).sqrt();
    let pairs: Vec<(f64, f64)> = (0..dual.len())
        .into_par_iter()
        .filter_map(|k| {
            let (a, b) = (k / nc, k % nc);
            let s = dual.offset(b);
            if s.abs() > band {
                return None;
            }
            let (y, xi) = dual.line(a, b);
            let rhs = power_eval(&sampler.sample(&y), &xi).ok()? * root;
            Some(((ph.values[k] - rhs).norm(), rhs.norm()))
        })
        .collect();
    let num = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
    let den = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(SliceReport { residual: if den > 0.0 { num / den } else { num }, band, nodes: pairs.len() })
}
