use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::grid::SphereGrid;
use crate::error::{arg, Result};
use crate::symtensor::{contract_j, dot, increment, layout, FullTensor, SymTensor, C64};

/// Symmetric tensor field sampled at every node of a sphere grid, stored in ambient components.
#[derive(Clone, Debug)]
pub struct TangentField {
    grid: Arc<SphereGrid>,
    m: usize,
    values: Vec<SymTensor>,
}

/// Non-symmetric field such as ∇f; the leading indices are derivative indices.
#[derive(Clone, Debug)]
pub struct FullField {
    grid: Arc<SphereGrid>,
    m: usize,
    values: Vec<FullTensor>,
}

fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

/// ∂_k of the degree-0 extension of every component: result[i][k * len + c].
fn partials<'a>(grid: &SphereGrid, comps: impl Fn(usize) -> &'a [C64] + Sync, len: usize) -> Vec<Vec<C64>> {
    let n = grid.n();
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let mut out = vec![czero(); n * len];
            let mut grad = vec![czero(); n];
            for c in 0..len {
                grid.gradient_at(i, |j| comps(j)[c], &mut grad);
                for k in 0..n {
                    out[k * len + c] = grad[k];
                }
            }
            out
        })
        .collect()
}

fn project_sym(t: &SymTensor, y: &[f64]) -> SymTensor {
    let n = y.len();
    let p: Vec<Vec<f64>> = (0..n).map(|a| (0..n).map(|b| f64::from(u8::from(a == b)) - y[a] * y[b]).collect()).collect();
    t.transform_each_index(&p)
}

impl TangentField {
    /// Samples `f` at every node and projects tangentially.
    pub fn from_fn(grid: &Arc<SphereGrid>, m: usize, f: impl Fn(&[f64]) -> SymTensor + Sync) -> Result<TangentField> {
        let values: Vec<SymTensor> = (0..grid.len()).into_par_iter().map(|i| f(grid.node(i))).collect();
        for v in &values {
            if v.n() != grid.n() || v.m() != m {
                return arg(format!("sampled tensor has shape ({}, {}), expected ({}, {m})", v.n(), v.m(), grid.n()));
            }
        }
        Ok(tangential_project(grid, values))
    }

    /// Samples `f` without projecting; the caller asserts tangentiality.
    pub fn from_tangential_fn(grid: &Arc<SphereGrid>, m: usize, f: impl Fn(&[f64]) -> SymTensor + Sync) -> TangentField {
        let values = (0..grid.len()).into_par_iter().map(|i| f(grid.node(i))).collect();
        TangentField { grid: grid.clone(), m, values }
    }

    pub fn zeros(grid: &Arc<SphereGrid>, m: usize) -> TangentField {
        TangentField { grid: grid.clone(), m, values: vec![SymTensor::zeros(grid.n(), m); grid.len()] }
    }

    /// Scalar field from per-node values.
    pub fn scalar(grid: &Arc<SphereGrid>, f: impl Fn(&[f64]) -> C64 + Sync) -> TangentField {
        TangentField::from_tangential_fn(grid, 0, |y| SymTensor::scalar(y.len(), f(y)))
    }

    /// Smooth random field: tangential projection of a random polynomial of the given degree.
    pub fn random(grid: &Arc<SphereGrid>, m: usize, degree: usize, seed: u64) -> TangentField {
        let n = grid.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<SymTensor> = (0..=degree)
            .map(|d| {
                let mut c = SymTensor::zeros(n, m + d);
                for z in c.comps_mut() {
                    *z = C64::new(rng.gen_range(-1.0..1.0), 0.0);
                }
                c
            })
            .collect();
        // value_I(y) = Σ_d Σ_K c^(d)_{I K} y^K; the (I, K) → coefficient table is node independent
        let lay = layout(n, m);
        let tables: Vec<(Arc<crate::symtensor::Layout>, Vec<(usize, usize, C64)>)> = coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| {
                let lk = layout(n, d);
                let mut rows = Vec::with_capacity(lay.len() * lk.len());
                let mut buf = Vec::with_capacity(m + d);
                for p in 0..lay.len() {
                    for q in 0..lk.len() {
                        buf.clear();
                        buf.extend_from_slice(lay.index(p));
                        buf.extend_from_slice(lk.index(q));
                        rows.push((p, q, c.get(&buf) * lk.multiplicity(q)));
                    }
                }
                (lk, rows)
            })
            .collect();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let y = grid.node(i);
                let mut t = SymTensor::zeros(n, m);
                for (lk, rows) in &tables {
                    let mono: Vec<f64> =
                        (0..lk.len()).map(|q| lk.index(q).iter().map(|&a| y[a as usize]).product()).collect();
                    let comps = t.comps_mut();
                    for &(p, q, c) in rows {
                        comps[p] += c * mono[q];
                    }
                }
                t
            })
            .collect();
        tangential_project(grid, values)
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[SymTensor] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &SymTensor {
        &self.values[i]
    }

    fn check_same(&self, other: &TangentField) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return arg("fields live on different grids");
        }
        if self.m != other.m {
            return arg(format!("rank mismatch: {} vs {}", self.m, other.m));
        }
        Ok(())
    }

    pub fn add(&self, other: &TangentField) -> Result<TangentField> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(TangentField { grid: self.grid.clone(), m: self.m, values })
    }

    pub fn sub(&self, other: &TangentField) -> Result<TangentField> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> TangentField {
        TangentField { grid: self.grid.clone(), m: self.m, values: self.values.iter().map(|v| v.scale(c)).collect() }
    }

    /// Add `c · other` in place.
    pub fn axpy(&mut self, c: C64, other: &TangentField) -> Result<()> {
        self.check_same(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            for (x, y) in a.comps_mut().iter_mut().zip(b.comps()) {
                *x += c * y;
            }
        }
        Ok(())
    }

    /// Largest component magnitude over all nodes.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(SymTensor::max_abs).fold(0.0, f64::max)
    }

    /// Largest |contraction with the node vector| over all nodes; zero for scalars.
    pub fn normal_residual(&self) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        let n = self.grid.n();
        let lay = layout(n, self.m - 1);
        let mut worst: f64 = 0.0;
        let mut buf = vec![0u8; self.m];
        for (i, v) in self.values.iter().enumerate() {
            let y = self.grid.node(i);
            for p in 0..lay.len() {
                buf[1..].copy_from_slice(lay.index(p));
                let mut acc = czero();
                for (a, ya) in y.iter().enumerate() {
                    buf[0] = a as u8;
                    acc += v.get(&buf) * ya;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Non-symmetric copy.
    pub fn to_full(&self) -> FullField {
        FullField { grid: self.grid.clone(), m: self.m, values: self.values.iter().map(SymTensor::to_full).collect() }
    }
}

impl FullField {
    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[FullTensor] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flat_map(|v| v.data.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Applies δ − yyᵀ to every index at every node.
pub fn tangential_project(grid: &Arc<SphereGrid>, values: Vec<SymTensor>) -> TangentField {
    let m = values.first().map(SymTensor::m).unwrap_or(0);
    let values = values.par_iter().enumerate().map(|(i, t)| project_sym(t, grid.node(i))).collect();
    TangentField { grid: grid.clone(), m, values }
}

/// Covariant derivative ∇ of a (possibly non-symmetric) tangential field; the new index comes first.
pub fn nabla_full(f: &FullField) -> FullField {
    let (grid, m) = (&f.grid, f.m);
    let n = grid.n();
    let len = n.pow(m as u32);
    let d = partials(grid, |j| &f.values[j].data, len);
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let y = grid.node(i);
            let src = &f.values[i];
            let mut out = FullTensor::zeros(n, m + 1);
            let mut idx = vec![0u8; m + 1];
            let mut rep = vec![0u8; m];
            for lin in 0..n * len {
                let k = idx[0];
                // ∂_k f_I + Σ_a y_{i_a} f_{I with i_a → k}
                let mut acc = d[i][lin];
                for a in 0..m {
                    rep.copy_from_slice(&idx[1..]);
                    rep[a] = k;
                    acc += src.get(&rep) * y[idx[1 + a] as usize];
                }
                out.data[lin] = acc;
                increment(&mut idx, n);
            }
            out
        })
        .collect();
    FullField { grid: grid.clone(), m: m + 1, values }
}

/// ∇f with the derivative index first.
pub fn nabla(f: &TangentField) -> FullField {
    nabla_full(&f.to_full())
}

/// ∇∇f, indices (k1, k2, I).
pub fn nabla2(f: &TangentField) -> FullField {
    nabla_full(&nabla(f))
}

/// Symmetrized covariant derivative d, rank m → m+1.
pub fn inner_d(f: &TangentField) -> TangentField {
    let (grid, m) = (&f.grid, f.m);
    let n = grid.n();
    let lin = layout(n, m);
    let lout = layout(n, m + 1);
    let d = partials(grid, |j| f.values[j].comps(), lin.len());
    // per output slot a: (letter I_a, position of I\a)
    let table: Vec<Vec<(usize, usize)>> = (0..lout.len())
        .map(|p| {
            let idx = lout.index(p);
            (0..=m)
                .map(|a| {
                    let rest: Vec<u8> = idx.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, &v)| v).collect();
                    (idx[a] as usize, lin.rank_sorted(&rest))
                })
                .collect()
        })
        .collect();
    let scale = 1.0 / (m + 1) as f64;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let y = grid.node(i);
            let src = f.values[i].comps();
            let comps = table
                .iter()
                .map(|slots| {
                    let mut acc = czero();
                    for &(k, q) in slots {
                        acc += d[i][k * lin.len() + q] + src[q] * (m as f64 * y[k]);
                    }
                    acc * scale
                })
                .collect();
            project_sym(&SymTensor::from_comps(n, m + 1, comps).expect("layout length"), y)
        })
        .collect();
    TangentField { grid: grid.clone(), m: m + 1, values }
}

/// Divergence δ, rank m+1 → m.
pub fn divergence(f: &TangentField) -> Result<TangentField> {
    let (grid, mm) = (&f.grid, f.m);
    if mm == 0 {
        return arg("divergence needs rank >= 1");
    }
    let m = mm - 1;
    let n = grid.n();
    let lin = layout(n, mm);
    let lout = layout(n, m);
    let ltr = if m >= 1 { Some(layout(n, m - 1)) } else { None };
    let d = partials(grid, |j| f.values[j].comps(), lin.len());
    let traces: Vec<SymTensor> = if m >= 1 {
        f.values.iter().map(contract_j).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    // per output position: (p, position of sorted p∪J) for each p, and (J_a, position of J\a in the trace layout)
    let table: Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>)> = (0..lout.len())
        .map(|q| {
            let idx = lout.index(q);
            let divs = (0..n)
                .map(|p| {
                    let mut full = vec![p as u8];
                    full.extend_from_slice(idx);
                    (p, lin.rank_any(&full))
                })
                .collect();
            let tr = match &ltr {
                Some(lt) => (0..m)
                    .map(|a| {
                        let rest: Vec<u8> = idx.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, &v)| v).collect();
                        (idx[a] as usize, lt.rank_sorted(&rest))
                    })
                    .collect(),
                None => Vec::new(),
            };
            (divs, tr)
        })
        .collect();
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let y = grid.node(i);
            let comps = table
                .iter()
                .map(|(divs, tr)| {
                    let mut acc = czero();
                    for &(p, pos) in divs {
                        acc += d[i][p * lin.len() + pos];
                    }
                    for &(k, pos) in tr {
                        acc += traces[i].comps()[pos] * y[k];
                    }
                    acc
                })
                .collect();
            project_sym(&SymTensor::from_comps(n, m, comps).expect("layout length"), y)
        })
        .collect();
    Ok(TangentField { grid: grid.clone(), m, values })
}

/// Symmetric product with the induced metric δ − yyᵀ, rank m → m+2.
pub fn metric_i(f: &TangentField) -> TangentField {
    let (grid, m) = (&f.grid, f.m);
    let n = grid.n();
    let lin = layout(n, m);
    let lout = layout(n, m + 2);
    let table: Vec<Vec<(usize, usize, usize)>> = (0..lout.len())
        .map(|p| {
            let idx = lout.index(p);
            let mut pairs = Vec::new();
            for a in 0..m + 2 {
                for b in a + 1..m + 2 {
                    let rest: Vec<u8> =
                        idx.iter().enumerate().filter(|&(c, _)| c != a && c != b).map(|(_, &v)| v).collect();
                    pairs.push((idx[a] as usize, idx[b] as usize, lin.rank_sorted(&rest)));
                }
            }
            pairs
        })
        .collect();
    let scale = 2.0 / ((m + 2) * (m + 1)) as f64;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let y = grid.node(i);
            let src = f.values[i].comps();
            let comps = table
                .iter()
                .map(|pairs| {
                    let mut acc = czero();
                    for &(a, b, q) in pairs {
                        let g = f64::from(u8::from(a == b)) - y[a] * y[b];
                        acc += src[q] * g;
                    }
                    acc * scale
                })
                .collect();
            SymTensor::from_comps(n, m + 2, comps).expect("layout length")
        })
        .collect();
    TangentField { grid: grid.clone(), m: m + 2, values }
}

/// Contraction with the metric, rank m+2 → m.
pub fn trace_j(f: &TangentField) -> Result<TangentField> {
    if f.m < 2 {
        return arg(format!("trace_j needs rank >= 2, got {}", f.m));
    }
    let values = f.values.par_iter().map(contract_j).collect::<Result<_>>()?;
    Ok(TangentField { grid: f.grid.clone(), m: f.m - 2, values })
}

/// Σ weights · value.
pub fn sphere_integrate(grid: &SphereGrid, values: &[C64]) -> Result<C64> {
    if values.len() != grid.len() {
        return arg(format!("{} values for {} nodes", values.len(), grid.len()));
    }
    Ok(values.iter().zip(grid.weights()).map(|(v, w)| v * w).sum())
}

/// Σ weights · ⟨u, v⟩ with v conjugated.
pub fn sphere_inner(u: &TangentField, v: &TangentField) -> Result<C64> {
    u.check_same(v)?;
    let mut acc = czero();
    for ((a, b), w) in u.values.iter().zip(&v.values).zip(u.grid.weights()) {
        acc += dot(a, b)? * w;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn circle() -> Arc<SphereGrid> {
        SphereGrid::circle(256, 8).unwrap()
    }

    fn s2() -> Arc<SphereGrid> {
        SphereGrid::latlon(32, 64, 8).unwrap()
    }

    fn coord(k: usize) -> impl Fn(&[f64]) -> C64 + Sync {
        move |y: &[f64]| c(y[k])
    }

    fn parallel_circle(g: &Arc<SphereGrid>) -> TangentField {
        TangentField::from_tangential_fn(g, 1, |y| {
            SymTensor::from_comps(2, 1, vec![c(-y[1]), c(y[0])]).unwrap()
        })
    }

    #[test]
    fn projection_examples() {
        let g = circle();
        let e1 = TangentField::from_fn(&g, 1, |_| SymTensor::basis_vector(2, 0)).unwrap();
        assert!(e1.value(0).max_abs() < 1e-15);
        let again = tangential_project(&g, e1.values().to_vec());
        assert!(again.sub(&e1).unwrap().max_abs() < 1e-14);
        let g3 = s2();
        let dl = TangentField::from_fn(&g3, 2, |_| SymTensor::kronecker(3)).unwrap();
        for i in [0, 100, 777] {
            let y = g3.node(i);
            for a in 0..3u8 {
                for b in 0..3u8 {
                    let p = f64::from(u8::from(a == b)) - y[a as usize] * y[b as usize];
                    assert!((dl.value(i).get(&[a, b]).re - p).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn nabla_examples() {
        let g = circle();
        assert!(nabla(&parallel_circle(&g)).max_abs() < 1e-10);
        let one = TangentField::scalar(&g, |_| c(1.0));
        assert!(nabla(&one).max_abs() < 1e-12);
        let g3 = s2();
        let y1 = TangentField::scalar(&g3, coord(0));
        let dn = nabla(&y1);
        for i in 0..g3.len() {
            let y = g3.node(i);
            for k in 0..3u8 {
                let expect = f64::from(u8::from(k == 0)) - y[k as usize] * y[0];
                assert!((dn.values()[i].get(&[k]).re - expect).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn nabla2_examples() {
        let g3 = s2();
        let y1 = TangentField::scalar(&g3, coord(0));
        let h = nabla2(&y1);
        let mut worst: f64 = 0.0;
        for i in 0..g3.len() {
            let t = &h.values()[i];
            let tr: C64 = (0..3u8).map(|k| t.get(&[k, k])).sum();
            worst = worst.max((tr.re + 2.0 * g3.node(i)[0]).abs());
            for k in 0..3u8 {
                for l in 0..3u8 {
                    worst = worst.max((t.get(&[k, l]) - t.get(&[l, k])).norm());
                }
            }
        }
        assert!(worst < 1e-6, "{worst}");
        let one = TangentField::scalar(&g3, |_| c(1.0));
        assert!(nabla2(&one).max_abs() < 1e-10);
    }

    #[test]
    fn inner_d_examples() {
        let g = circle();
        let f = TangentField::scalar(&g, |y| c(y[0] * y[1]));
        let a = inner_d(&f);
        let b = nabla(&f);
        for i in 0..g.len() {
            for k in 0..2u8 {
                assert!((a.value(i).get(&[k]) - b.values()[i].get(&[k])).norm() < 1e-12);
            }
        }
        assert!(inner_d(&parallel_circle(&g)).max_abs() < 1e-10);
        // (df)_ij = (∇_i f_j + ∇_j f_i)/2 for a non-parallel vector field
        let v = TangentField::from_fn(&g, 1, |y| SymTensor::from_comps(2, 1, vec![c(y[1] * y[1]), c(0.3)]).unwrap()).unwrap();
        let dv = inner_d(&v);
        let nv = nabla(&v);
        for i in (0..g.len()).step_by(17) {
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let expect = (nv.values()[i].get(&[a, b]) + nv.values()[i].get(&[b, a])) * 0.5;
                    let e = (dv.value(i).get(&[a, b]) - expect).norm();
                    assert!(e < 1e-10, "{e}");
                }
            }
        }
    }

    #[test]
    fn divergence_examples() {
        for g in [circle(), s2()] {
            let n = g.n() as f64;
            let y1 = TangentField::scalar(&g, coord(0));
            let lap = divergence(&inner_d(&y1)).unwrap();
            let expect = y1.scale(c(-(n - 1.0)));
            assert!(lap.sub(&expect).unwrap().max_abs() < 1e-7);
        }
        let g = circle();
        assert!(divergence(&parallel_circle(&g)).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn metric_examples() {
        for g in [circle(), s2()] {
            let one = TangentField::scalar(&g, |_| c(1.0));
            let t = trace_j(&metric_i(&one)).unwrap();
            let expect = one.scale(c(g.n() as f64 - 1.0));
            assert!(t.sub(&expect).unwrap().max_abs() < 1e-13);
        }
        let one = TangentField::scalar(&circle(), |_| c(1.0));
        assert!(trace_j(&one).is_err());
    }

    #[test]
    fn integrals() {
        let g = circle();
        let ones = vec![c(1.0); g.len()];
        assert!((sphere_integrate(&g, &ones).unwrap().re - 2.0 * PI).abs() < 1e-12);
        let g3 = s2();
        let ones = vec![c(1.0); g3.len()];
        assert!((sphere_integrate(&g3, &ones).unwrap().re - 4.0 * PI).abs() < 1e-10);
        let sq: Vec<C64> = (0..g3.len()).map(|i| c(g3.node(i)[0].powi(2))).collect();
        assert!((sphere_integrate(&g3, &sq).unwrap().re - 4.0 * PI / 3.0).abs() < 1e-10);
        assert!(sphere_integrate(&g3, &sq[1..]).is_err());
    }

    #[test]
    fn tangentiality_preserved() {
        let g3 = s2();
        let f = TangentField::random(&g3, 2, 3, 7);
        assert!(f.normal_residual() < 1e-12);
        for out in [inner_d(&f), divergence(&f).unwrap(), metric_i(&f), trace_j(&f).unwrap()] {
            assert!(out.normal_residual() <= 1e-8 * f.max_abs().max(1.0));
        }
    }
}
