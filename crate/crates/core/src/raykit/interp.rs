//! Tensor-product Lagrange interpolation on uniform grids, zero outside the sampled box.

use crate::symtensor::C64;

/// Default interpolation order (points per axis).
pub const DEFAULT_INTERP_ORDER: usize = 12;

pub(crate) const MAX_ORDER: usize = 16;

/// Weights for the `q` nodes `start..start+q` at index-space position `u`.
/// The stencil is centred so that `u` lies in its middle cell.
pub(crate) fn uniform_weights(u: f64, q: usize) -> (isize, [f64; MAX_ORDER]) {
    debug_assert!((2..=MAX_ORDER).contains(&q));
    let start = u.floor() as isize - (q as isize / 2 - 1);
    (start, node_weights(u - start as f64, q))
}

/// Lagrange weights for nodes 0, 1, …, q−1 at position t.
pub(crate) fn node_weights(t: f64, q: usize) -> [f64; MAX_ORDER] {
    let mut w = [0.0; MAX_ORDER];
    for (k, wk) in w.iter_mut().enumerate().take(q) {
        let mut num = 1.0;
        let mut den = 1.0;
        for l in 0..q {
            if l != k {
                num *= t - l as f64;
                den *= k as f64 - l as f64;
            }
        }
        *wk = num / den;
    }
    w
}

/// Interpolates a row-major 2-D array at index-space point (u0, u1).
pub(crate) fn interp2(data: &[C64], shape: usize, u0: f64, u1: f64, q: usize) -> C64 {
    let lim = shape as f64;
    if u0 < -1.0 || u1 < -1.0 || u0 > lim || u1 > lim {
        return C64::new(0.0, 0.0);
    }
    let (s0, w0) = uniform_weights(u0, q);
    let (s1, w1) = uniform_weights(u1, q);
    let mut acc = C64::new(0.0, 0.0);
    for (a, wa) in w0.iter().enumerate().take(q) {
        let i = s0 + a as isize;
        if i < 0 || i >= shape as isize {
            continue;
        }
        let row = &data[i as usize * shape..(i as usize + 1) * shape];
        let mut inner = C64::new(0.0, 0.0);
        for (b, wb) in w1.iter().enumerate().take(q) {
            let j = s1 + b as isize;
            if j >= 0 && j < shape as isize {
                inner += row[j as usize] * wb;
            }
        }
        acc += inner * wa;
    }
    acc
}

/// Interpolates a row-major 3-D array at index-space point u.
pub(crate) fn interp3(data: &[C64], shape: usize, u: [f64; 3], q: usize) -> C64 {
    let lim = shape as f64;
    if u.iter().any(|&v| v < -1.0 || v > lim) {
        return C64::new(0.0, 0.0);
    }
    let ws: Vec<(isize, [f64; MAX_ORDER])> = u.iter().map(|&v| uniform_weights(v, q)).collect();
    let inside = |i: isize| i >= 0 && i < shape as isize;
    let mut acc = C64::new(0.0, 0.0);
    for a in 0..q {
        let i = ws[0].0 + a as isize;
        if !inside(i) {
            continue;
        }
        for b in 0..q {
            let j = ws[1].0 + b as isize;
            if !inside(j) {
                continue;
            }
            let off = (i as usize * shape + j as usize) * shape;
            let wab = ws[0].1[a] * ws[1].1[b];
            for c in 0..q {
                let k = ws[2].0 + c as isize;
                if inside(k) {
                    acc += data[off + k as usize] * (wab * ws[2].1[c]);
                }
            }
        }
    }
    acc
}

/// Dispatches on dimension; `u` is in index space.
pub(crate) fn interp(data: &[C64], n: usize, shape: usize, u: &[f64], q: usize) -> C64 {
    match n {
        2 => interp2(data, shape, u[0], u[1], q),
        _ => interp3(data, shape, [u[0], u[1], u[2]], q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_reproduce_polynomials() {
        for q in [2, 4, 8, 9] {
            let (s, w) = uniform_weights(3.37, q);
            let deg = q as i32 - 1;
            let exact = 3.37f64.powi(deg);
            let approx: f64 = (0..q).map(|k| w[k] * ((s + k as isize) as f64).powi(deg)).sum();
            assert!((exact - approx).abs() < 1e-9 * exact.abs().max(1.0), "q={q}");
        }
    }

    #[test]
    fn interpolates_at_nodes_and_vanishes_outside() {
        let shape = 12;
        let data: Vec<C64> = (0..shape * shape).map(|k| C64::new(k as f64, 0.0)).collect();
        assert!((interp2(&data, shape, 5.0, 7.0, 8) - data[5 * shape + 7]).norm() < 1e-12);
        assert_eq!(interp2(&data, shape, -3.0, 4.0, 8), C64::new(0.0, 0.0));
    }
}
