//! Sampled tensor fields on a uniform cube, their discrete Fourier transforms,
//! and the tangential (solenoidal) projection.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use rustfft::FftPlanner;

use super::gauss::AnalyticField;
use super::interp::interp;
use crate::error::{arg, Error, Result};
use crate::symtensor::{layout, projector, SymTensor, C64};

const MAGIC: &str = "VOLUMEFIELD 1";

/// Tensor field sampled at x = −L + j·h (j = 0..N−1, h = 2L/N) along every axis.
/// Components are stored as separate planes in layout order; voxels are row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeField {
    n: usize,
    m: usize,
    extent: f64,
    shape: usize,
    comps: Vec<Vec<C64>>,
}

fn check_geometry(n: usize, extent: f64, shape: usize) -> Result<()> {
    if !(2..=3).contains(&n) {
        return arg(format!("volume fields need n ∈ {{2, 3}}, got {n}"));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return arg(format!("extent must be positive, got {extent}"));
    }
    if shape < 4 || !shape.is_multiple_of(2) {
        return arg(format!("shape must be even and at least 4, got {shape}"));
    }
    Ok(())
}

impl VolumeField {
    pub fn new(n: usize, m: usize, extent: f64, shape: usize, comps: Vec<Vec<C64>>) -> Result<VolumeField> {
        check_geometry(n, extent, shape)?;
        let voxels = shape.pow(n as u32);
        if comps.len() != layout(n, m).len() || comps.iter().any(|c| c.len() != voxels) {
            return arg("component planes do not match the layout and shape");
        }
        Ok(VolumeField { n, m, extent, shape, comps })
    }

    pub fn zeros(n: usize, m: usize, extent: f64, shape: usize) -> Result<VolumeField> {
        check_geometry(n, extent, shape)?;
        let voxels = shape.pow(n as u32);
        Ok(VolumeField { n, m, extent, shape, comps: vec![vec![C64::new(0.0, 0.0); voxels]; layout(n, m).len()] })
    }

    /// Samples f at every voxel centre.
    pub fn from_fn(n: usize, m: usize, extent: f64, shape: usize, f: impl Fn(&[f64]) -> SymTensor + Sync) -> Result<VolumeField> {
        let mut out = VolumeField::zeros(n, m, extent, shape)?;
        let vals: Vec<SymTensor> = (0..out.voxels()).into_par_iter().map(|v| f(&out.point(v))).collect();
        for (v, t) in vals.iter().enumerate() {
            if t.n() != n || t.m() != m {
                return arg("sampled tensor has the wrong shape");
            }
            for (p, z) in t.comps().iter().enumerate() {
                out.comps[p][v] = *z;
            }
        }
        Ok(out)
    }

    pub fn from_analytic(f: &AnalyticField, extent: f64, shape: usize) -> Result<VolumeField> {
        VolumeField::from_fn(f.n(), f.m(), extent, shape, |x| f.eval(x))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn shape(&self) -> usize {
        self.shape
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.shape as f64
    }

    pub fn voxels(&self) -> usize {
        self.shape.pow(self.n as u32)
    }

    pub fn coord(&self, j: usize) -> f64 {
        -self.extent + j as f64 * self.spacing()
    }

    pub fn point(&self, voxel: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        let mut v = voxel;
        for k in (0..self.n).rev() {
            x[k] = self.coord(v % self.shape);
            v /= self.shape;
        }
        x
    }

    /// Component plane p in layout order.
    pub fn plane(&self, p: usize) -> &[C64] {
        &self.comps[p]
    }

    pub fn planes(&self) -> &[Vec<C64>] {
        &self.comps
    }

    pub fn value(&self, voxel: usize) -> SymTensor {
        SymTensor::from_comps(self.n, self.m, self.comps.iter().map(|c| c[voxel]).collect()).expect("layout length")
    }

    fn check_same(&self, o: &VolumeField) -> Result<()> {
        if self.n != o.n || self.m != o.m || self.shape != o.shape || self.extent != o.extent {
            return arg("volume fields live on different grids");
        }
        Ok(())
    }

    pub fn add(&self, o: &VolumeField) -> Result<VolumeField> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&o.comps) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &VolumeField) -> Result<VolumeField> {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> VolumeField {
        let mut out = self.clone();
        out.comps.iter_mut().flatten().for_each(|z| *z *= c);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest component magnitude on the outer layer of voxels.
    pub fn boundary_max(&self) -> f64 {
        let last = self.shape - 1;
        let mut best: f64 = 0.0;
        for v in 0..self.voxels() {
            let mut w = v;
            let mut edge = false;
            for _ in 0..self.n {
                let j = w % self.shape;
                edge |= j == 0 || j == last;
                w /= self.shape;
            }
            if edge {
                for c in &self.comps {
                    best = best.max(c[v].norm());
                }
            }
        }
        best
    }

    /// Fails when the boundary layer exceeds `threshold` times the peak magnitude.
    pub fn check_envelope(&self, threshold: f64) -> Result<()> {
        let (b, peak) = (self.boundary_max(), self.max_abs());
        if b > threshold * peak {
            return Err(Error::Validation(format!("field does not decay: boundary {b:e} vs peak {peak:e}")));
        }
        Ok(())
    }

    /// Σ_I |f_I|² h^n over all (unsorted) multi-indices.
    pub fn l2_norm_sq(&self) -> f64 {
        let lay = layout(self.n, self.m);
        let hn = self.spacing().powi(self.n as i32);
        self.comps
            .iter()
            .enumerate()
            .map(|(p, c)| lay.multiplicity(p) * c.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            * hn
    }

    /// Header (text) followed by little-endian (re, im) doubles, voxel-major, components in layout order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let lay = layout(self.n, self.m);
        let names: Vec<String> = (0..lay.len()).map(|p| lay.index(p).iter().map(|i| (i + 1).to_string()).collect()).collect();
        let mut out = format!(
            "{MAGIC}\nn={} m={} extent={:e} shape={}\ncomponents={}\n",
            self.n,
            self.m,
            self.extent,
            self.shape,
            if names.is_empty() || self.m == 0 { "-".to_string() } else { names.join(",") }
        )
        .into_bytes();
        for v in 0..self.voxels() {
            for c in &self.comps {
                out.extend_from_slice(&c[v].re.to_le_bytes());
                out.extend_from_slice(&c[v].im.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<VolumeField> {
        let bad = |msg: &str| Error::Validation(format!("volume file: {msg}"));
        let mut lines = Vec::new();
        let mut pos = 0;
        for _ in 0..3 {
            let end = bytes[pos..].iter().position(|&b| b == b'\n').ok_or_else(|| bad("truncated header"))?;
            lines.push(std::str::from_utf8(&bytes[pos..pos + end]).map_err(|_| bad("header is not UTF-8"))?.to_string());
            pos += end + 1;
        }
        if lines[0] != MAGIC {
            return Err(bad("missing magic line"));
        }
        let key = |k: &str| -> Result<&str> {
            lines[1].split_whitespace().find_map(|t| t.strip_prefix(k)).ok_or_else(|| bad(&format!("missing {k}")))
        };
        let n: usize = key("n=")?.parse().map_err(|_| bad("bad n"))?;
        let m: usize = key("m=")?.parse().map_err(|_| bad("bad m"))?;
        let extent: f64 = key("extent=")?.parse().map_err(|_| bad("bad extent"))?;
        let shape: usize = key("shape=")?.parse().map_err(|_| bad("bad shape"))?;
        check_geometry(n, extent, shape).map_err(|e| bad(&e.to_string()))?;
        let ncomp = layout(n, m).len();
        let expected_names = lines[2].strip_prefix("components=").ok_or_else(|| bad("missing components"))?;
        if m > 0 && expected_names.split(',').count() != ncomp {
            return Err(bad("component list does not match the layout"));
        }
        let voxels = shape.pow(n as u32);
        let body = &bytes[pos..];
        if body.len() != voxels * ncomp * 16 {
            return Err(bad(&format!("expected {} data bytes, found {}", voxels * ncomp * 16, body.len())));
        }
        let mut comps = vec![Vec::with_capacity(voxels); ncomp];
        let num = |k: usize| f64::from_le_bytes(body[8 * k..8 * k + 8].try_into().expect("8 bytes"));
        for v in 0..voxels {
            for (p, c) in comps.iter_mut().enumerate() {
                let k = 2 * (v * ncomp + p);
                c.push(C64::new(num(k), num(k + 1)));
            }
        }
        VolumeField::new(n, m, extent, shape, comps)
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::File::create(path)?.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<VolumeField> {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        VolumeField::from_bytes(&buf)
    }
}

/// Centred unitary-scaled DFT along every axis of a row-major cube.
/// Grid x_j = −L + jh maps to y_k = −π/h + k·π/L; the same formula serves both directions.
pub(crate) fn centered_dft(data: &mut [C64], n: usize, shape: usize, spacing: f64, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse { planner.plan_fft_inverse(shape) } else { planner.plan_fft_forward(shape) };
    let half_sign = if (shape / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let c = half_sign * spacing / (2.0 * PI).sqrt();
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut line = vec![C64::new(0.0, 0.0); shape];
    for axis in 0..n {
        let stride = shape.pow((n - 1 - axis) as u32);
        let total = data.len();
        for base in 0..total {
            if !(base / stride).is_multiple_of(shape) {
                continue;
            }
            for (j, z) in line.iter_mut().enumerate() {
                *z = data[base + j * stride] * sign(j);
            }
            fft.process(&mut line);
            for (k, z) in line.iter().enumerate() {
                data[base + k * stride] = z * (c * sign(k));
            }
        }
    }
}

/// f̂(y) = (2π)^(−n/2) ∫ e^{−i⟨y,x⟩} f(x) dx, componentwise, on the dual grid of half-width π/h.
pub fn fourier_volume(f: &VolumeField) -> VolumeField {
    transform(f, false)
}

/// Inverse of [`fourier_volume`].
pub fn inverse_fourier_volume(g: &VolumeField) -> VolumeField {
    transform(g, true)
}

fn transform(f: &VolumeField, inverse: bool) -> VolumeField {
    let h = f.spacing();
    let comps = f
        .comps
        .par_iter()
        .map(|c| {
            let mut d = c.clone();
            centered_dft(&mut d, f.n, f.shape, h, inverse);
            d
        })
        .collect();
    VolumeField { n: f.n, m: f.m, extent: PI / h, shape: f.shape, comps }
}

/// Applies δ − yyᵀ/|y|² to every index of f̂ and transforms back; the y = 0 voxel is zero-filled.
pub fn solenoidal_project(f: &VolumeField) -> VolumeField {
    if f.m == 0 {
        return f.clone();
    }
    let mut g = fourier_volume(f);
    let vals: Vec<SymTensor> = (0..g.voxels())
        .into_par_iter()
        .map(|v| {
            let y = g.point(v);
            match projector(&y) {
                Ok(p) => g.value(v).transform_each_index(&p),
                Err(_) => SymTensor::zeros(g.n, g.m),
            }
        })
        .collect();
    for (v, t) in vals.iter().enumerate() {
        for (p, z) in t.comps().iter().enumerate() {
            g.comps[p][v] = *z;
        }
    }
    inverse_fourier_volume(&g)
}

/// Max over nonzero dual nodes of |y^p f̂_{pI}| relative to max |f̂|.
pub fn tangential_defect(fhat: &VolumeField) -> f64 {
    let scale = fhat.max_abs().max(f64::MIN_POSITIVE);
    (0..fhat.voxels())
        .into_par_iter()
        .map(|v| {
            let y = fhat.point(v);
            let r = y.iter().map(|a| a * a).sum::<f64>().sqrt();
            if r == 0.0 || fhat.m == 0 {
                return 0.0;
            }
            contract_first(&fhat.value(v), &y).map(|t| t.max_abs() / r).unwrap_or(0.0)
        })
        .reduce(|| 0.0, f64::max)
        / scale
}

/// y^p f_{p i_2 … i_m}.
pub(crate) fn contract_first(f: &SymTensor, y: &[f64]) -> Result<SymTensor> {
    if f.m() == 0 {
        return arg("cannot contract a scalar");
    }
    let n = f.n();
    Ok(SymTensor::from_fn(n, f.m() - 1, |idx| {
        let mut full = Vec::with_capacity(idx.len() + 1);
        full.push(0u8);
        full.extend_from_slice(idx);
        (0..n)
            .map(|p| {
                full[0] = p as u8;
                f.get(&full) * y[p]
            })
            .sum()
    }))
}

/// Interpolation order of [`FourierSampler`] in the plane. Sphere operators take up to four
/// angular derivatives of the sampled values, which amplifies any interpolation ripple.
pub const SAMPLER_ORDER_PLANE: usize = 16;

/// Interpolation order of [`FourierSampler`] in three dimensions, where taps grow as q³.
pub const SAMPLER_ORDER_SPACE: usize = 8;

/// Exact DFT of a sampled field evaluated on a fine Cartesian grid, then interpolated.
/// This avoids the coarse spacing π/L of the FFT dual grid.
#[derive(Clone, Debug)]
pub struct FourierSampler {
    n: usize,
    m: usize,
    half_width: f64,
    count: usize,
    order: usize,
    comps: Vec<Vec<C64>>,
}

impl FourierSampler {
    /// Samples f̂ on [−half_width, half_width]^n with the given spacing.
    pub fn new(f: &VolumeField, half_width: f64, spacing: f64) -> Result<FourierSampler> {
        if !(half_width > 0.0 && spacing > 0.0) {
            return arg("sampler half-width and spacing must be positive");
        }
        let count = (2.0 * half_width / spacing).round() as usize + 1;
        let step = 2.0 * half_width / (count - 1) as f64;
        let h = f.spacing();
        let c = h / (2.0 * PI).sqrt();
        let mat: Vec<C64> = (0..count)
            .flat_map(|a| {
                let u = -half_width + a as f64 * step;
                (0..f.shape).map(move |j| {
                    let ph = -u * (-f.extent + j as f64 * h);
                    C64::new(ph.cos(), ph.sin()) * c
                })
            })
            .collect();
        let comps = f
            .comps
            .par_iter()
            .map(|plane| {
                let mut data = plane.clone();
                let mut dims = vec![f.shape; f.n];
                for axis in 0..f.n {
                    data = apply_axis(&data, &dims, axis, &mat, count);
                    dims[axis] = count;
                }
                data
            })
            .collect();
        let order = if f.n == 2 { SAMPLER_ORDER_PLANE } else { SAMPLER_ORDER_SPACE };
        Ok(FourierSampler { n: f.n, m: f.m, half_width, count, order, comps })
    }

    /// Overrides the interpolation order (2..=16).
    pub fn with_order(mut self, order: usize) -> Result<FourierSampler> {
        if !(2..=16).contains(&order) {
            return arg(format!("interpolation order {order} out of range 2..=16"));
        }
        self.order = order;
        Ok(self)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// f̂(y); zero outside the sampled cube.
    pub fn sample(&self, y: &[f64]) -> SymTensor {
        let step = 2.0 * self.half_width / (self.count - 1) as f64;
        let u: Vec<f64> = y.iter().map(|v| (v + self.half_width) / step).collect();
        let vals = self.comps.iter().map(|c| interp(c, self.n, self.count, &u, self.order)).collect();
        SymTensor::from_comps(self.n, self.m, vals).expect("layout length")
    }
}

/// Contracts axis `axis` of a row-major array with a (rows × dims[axis]) matrix.
fn apply_axis(data: &[C64], dims: &[usize], axis: usize, mat: &[C64], rows: usize) -> Vec<C64> {
    let cols = dims[axis];
    let outer: usize = dims[..axis].iter().product();
    let inner: usize = dims[axis + 1..].iter().product();
    let mut out = vec![C64::new(0.0, 0.0); outer * rows * inner];
    out.par_chunks_mut(rows * inner).enumerate().for_each(|(o, block)| {
        let src = &data[o * cols * inner..(o + 1) * cols * inner];
        for r in 0..rows {
            let mrow = &mat[r * cols..(r + 1) * cols];
            let dst = &mut block[r * inner..(r + 1) * inner];
            for (j, &w) in mrow.iter().enumerate() {
                let s = &src[j * inner..(j + 1) * inner];
                for (d, v) in dst.iter_mut().zip(s) {
                    *d += w * v;
                }
            }
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raykit::gauss::GaussPoly;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn gaussian(n: usize, shape: usize) -> VolumeField {
        VolumeField::from_analytic(&AnalyticField::scalar(GaussPoly::gaussian(n)), 8.0, shape).unwrap()
    }

    #[test]
    fn gaussian_is_self_dual_and_parseval_holds() {
        let f = gaussian(2, 64);
        let g = fourier_volume(&f);
        let err = (0..g.voxels())
            .map(|v| {
                let y = g.point(v);
                (g.plane(0)[v] - c((-0.5 * (y[0] * y[0] + y[1] * y[1])).exp())).norm()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
        assert!((f.l2_norm_sq() - g.l2_norm_sq()).abs() < 1e-8);
        assert!((f.l2_norm_sq() - PI).abs() < 1e-8);
        let back = inverse_fourier_volume(&g);
        assert!(back.sub(&f).unwrap().max_abs() < 1e-12);
        assert_eq!(back.extent(), f.extent());
    }

    #[test]
    fn transform_is_linear() {
        let a = gaussian(2, 32);
        let b = VolumeField::from_analytic(&AnalyticField::scalar(GaussPoly::monomial(&[1, 2], C64::new(0.3, -1.0))), 8.0, 32).unwrap();
        let lhs = fourier_volume(&a.scale(c(2.0)).add(&b).unwrap());
        let rhs = fourier_volume(&a).scale(c(2.0)).add(&fourier_volume(&b)).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn sampler_matches_analytic_transform() {
        let g = GaussPoly::monomial(&[1, 1], c(1.0)).add(&GaussPoly::gaussian(2));
        let f = VolumeField::from_analytic(&AnalyticField::scalar(g.clone()), 8.0, 64).unwrap();
        let s = FourierSampler::new(&f, 6.0, 0.05).unwrap();
        let gh = g.fourier();
        for y in [[0.31, -1.77], [2.5, 0.02], [-4.4, 3.3]] {
            assert!((s.sample(&y).comps()[0] - gh.eval(&y)).norm() < 1e-9);
        }
        let f3 = gaussian(3, 32);
        let s3 = FourierSampler::new(&f3, 3.0, 0.1).unwrap();
        let y = [0.4, -0.35, 1.2];
        assert!((s3.sample(&y).comps()[0] - c((-0.5 * (0.16 + 0.1225 + 1.44f64)).exp())).norm() < 1e-8);
    }

    #[test]
    fn projection_cases() {
        let f = gaussian(2, 64);
        assert_eq!(solenoidal_project(&f), f);
        let grad = VolumeField::from_analytic(&AnalyticField::potential(&GaussPoly::gaussian(2), 1), 8.0, 64).unwrap();
        assert!(solenoidal_project(&grad).max_abs() < 1e-10 * grad.max_abs());
        let w = GaussPoly::gaussian(2).add(&GaussPoly::monomial(&[1, 0], c(0.5)));
        for m in 1..=2 {
            let curl = VolumeField::from_analytic(&AnalyticField::curl(&w, m).unwrap(), 8.0, 64).unwrap();
            let p = solenoidal_project(&curl);
            assert!(p.sub(&curl).unwrap().max_abs() < 1e-6 * curl.max_abs());
            assert!(tangential_defect(&fourier_volume(&p)) < 1e-12);
        }
    }

    #[test]
    fn binary_roundtrip_and_corruption() {
        let f = VolumeField::from_analytic(&AnalyticField::potential(&GaussPoly::gaussian(2), 2), 4.0, 8).unwrap();
        let bytes = f.to_bytes();
        assert_eq!(VolumeField::from_bytes(&bytes).unwrap(), f);
        assert!(VolumeField::from_bytes(&bytes[..bytes.len() - 3]).is_err());
        assert!(VolumeField::from_bytes(b"nonsense\n\n\n").is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.vol");
        f.write_to(&path).unwrap();
        assert_eq!(VolumeField::read_from(&path).unwrap(), f);
    }

    #[test]
    fn envelope_and_argument_errors() {
        assert!(gaussian(2, 32).check_envelope(1e-12).is_ok());
        let flat = VolumeField::from_fn(2, 0, 1.0, 8, |_| SymTensor::scalar(2, c(1.0))).unwrap();
        assert!(flat.check_envelope(1e-3).is_err());
        assert!(VolumeField::zeros(4, 0, 1.0, 8).is_err());
        assert!(VolumeField::zeros(2, 0, 1.0, 7).is_err());
    }
}
