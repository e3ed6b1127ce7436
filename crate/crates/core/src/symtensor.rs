//! Dense symmetric tensors over R^n.
//!
//! A rank-m tensor stores one complex component per non-decreasing multi-index,
//! ordered lexicographically. Indices are 0-based internally and 1-based in
//! serialized form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

pub type C64 = Complex64;

/// Largest rank accepted by [`symmetrize`], whose cost grows like m!.
pub const MAX_SYMMETRIZE_RANK: usize = 8;

fn binom_u(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Number of distinct components of a rank-m symmetric tensor over R^n.
///
/// ```
/// assert_eq!(reshetnyak::symtensor::dim(3, 2).unwrap(), 6);
/// assert_eq!(reshetnyak::symtensor::dim(4, 3).unwrap(), 20);
/// ```
pub fn dim(n: usize, m: usize) -> Result<usize> {
    if n < 1 {
        return arg(format!("dimension n = {n} must be at least 1"));
    }
    Ok(binom_u(n + m - 1, m))
}

fn factorial_f(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn double_factorial_odd(k: usize) -> f64 {
    // (2k-1)!!
    (1..=k).map(|i| (2 * i - 1) as f64).product()
}

/// Index tables shared by every tensor of a given (n, m).
#[derive(Debug)]
pub struct Layout {
    pub n: usize,
    pub m: usize,
    /// Sorted multi-indices, `m` entries each, flattened.
    flat: Vec<u8>,
    /// Number of distinct permutations of each multi-index.
    mult: Vec<f64>,
    /// counts[len][v] = number of non-decreasing sequences of length `len` with entries in [v, n).
    counts: Vec<Vec<usize>>,
    /// Row-major full index → packed position, built on first use.
    full: OnceLock<Vec<u32>>,
}

impl Layout {
    fn build(n: usize, m: usize) -> Layout {
        let mut counts = vec![vec![0usize; n + 1]; m + 1];
        for (len, row) in counts.iter_mut().enumerate() {
            for (v, c) in row.iter_mut().enumerate() {
                *c = if v >= n { usize::from(len == 0) } else { binom_u(n - v + len - 1, len) };
            }
        }
        let mut flat = Vec::new();
        let mut mult = Vec::new();
        let mut cur = vec![0u8; m];
        loop {
            flat.extend_from_slice(&cur);
            mult.push(multiplicity(&cur));
            // advance to the next non-decreasing sequence
            let mut pos = m;
            loop {
                if pos == 0 {
                    return Layout { n, m, flat, mult, counts, full: OnceLock::new() };
                }
                pos -= 1;
                if (cur[pos] as usize) + 1 < n {
                    let v = cur[pos] + 1;
                    for c in cur[pos..].iter_mut() {
                        *c = v;
                    }
                    break;
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.mult.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    /// Sorted multi-index at position `pos`.
    #[allow(clippy::should_implement_trait)]
    pub fn index(&self, pos: usize) -> &[u8] {
        &self.flat[pos * self.m..(pos + 1) * self.m]
    }

    pub fn multiplicity(&self, pos: usize) -> f64 {
        self.mult[pos]
    }

    /// Position of a sorted multi-index.
    pub fn rank_sorted(&self, idx: &[u8]) -> usize {
        debug_assert_eq!(idx.len(), self.m);
        let mut r = 0;
        let mut prev = 0usize;
        for (p, &v) in idx.iter().enumerate() {
            let rem = self.m - p - 1;
            for w in prev..v as usize {
                r += self.counts[rem][w];
            }
            prev = v as usize;
        }
        r
    }

    /// Packed position of every row-major full index.
    pub fn full_positions(&self) -> &[u32] {
        self.full.get_or_init(|| {
            let mut idx = vec![0u8; self.m];
            (0..self.n.pow(self.m as u32))
                .map(|_| {
                    let p = self.rank_any(&idx) as u32;
                    increment(&mut idx, self.n);
                    p
                })
                .collect()
        })
    }

    /// Position of an arbitrary (unsorted) multi-index.
    pub fn rank_any(&self, idx: &[u8]) -> usize {
        let mut buf = [0u8; 32];
        let b = &mut buf[..idx.len()];
        b.copy_from_slice(idx);
        b.sort_unstable();
        self.rank_sorted(b)
    }
}

fn multiplicity(idx: &[u8]) -> f64 {
    let mut f = factorial_f(idx.len());
    let mut run = 1;
    for w in 1..=idx.len() {
        if w < idx.len() && idx[w] == idx[w - 1] {
            run += 1;
        } else {
            f /= factorial_f(run);
            run = 1;
        }
    }
    f
}

/// Cached layout for (n, m).
pub fn layout(n: usize, m: usize) -> Arc<Layout> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Layout>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("layout cache poisoned");
    guard.entry((n, m)).or_insert_with(|| Arc::new(Layout::build(n, m))).clone()
}

/// Rank-m symmetric tensor over R^n with complex components.
#[derive(Clone)]
pub struct SymTensor {
    layout: Arc<Layout>,
    comps: Vec<C64>,
}

impl fmt::Debug for SymTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymTensor")
            .field("n", &self.n())
            .field("m", &self.m())
            .field("comps", &self.comps)
            .finish()
    }
}

impl PartialEq for SymTensor {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.m() == other.m() && self.comps == other.comps
    }
}

impl SymTensor {
    pub fn zeros(n: usize, m: usize) -> SymTensor {
        let layout = layout(n, m);
        let comps = vec![C64::new(0.0, 0.0); layout.len()];
        SymTensor { layout, comps }
    }

    pub fn scalar(n: usize, c: C64) -> SymTensor {
        let mut t = SymTensor::zeros(n, 0);
        t.comps[0] = c;
        t
    }

    /// Unit vector e_k (0-based axis).
    pub fn basis_vector(n: usize, k: usize) -> SymTensor {
        let mut t = SymTensor::zeros(n, 1);
        t.comps[k] = C64::new(1.0, 0.0);
        t
    }

    /// Kronecker tensor δ as a rank-2 tensor.
    pub fn kronecker(n: usize) -> SymTensor {
        SymTensor::from_fn(n, 2, |idx| if idx[0] == idx[1] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Builds a tensor from a function of the sorted multi-index.
    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(&[u8]) -> C64) -> SymTensor {
        let layout = layout(n, m);
        let comps = (0..layout.len()).map(|p| f(layout.index(p))).collect();
        SymTensor { layout, comps }
    }

    pub fn from_comps(n: usize, m: usize, comps: Vec<C64>) -> Result<SymTensor> {
        let layout = layout(n, m);
        if comps.len() != layout.len() {
            return arg(format!("expected {} components for (n={n}, m={m}), got {}", layout.len(), comps.len()));
        }
        Ok(SymTensor { layout, comps })
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn m(&self) -> usize {
        self.layout.m
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn comps(&self) -> &[C64] {
        &self.comps
    }

    pub fn comps_mut(&mut self) -> &mut [C64] {
        &mut self.comps
    }

    /// Component at an arbitrary-order, 0-based multi-index.
    pub fn get(&self, idx: &[u8]) -> C64 {
        self.comps[self.layout.rank_any(idx)]
    }

    pub fn set(&mut self, idx: &[u8], v: C64) {
        let p = self.layout.rank_any(idx);
        self.comps[p] = v;
    }

    pub fn scale(&self, c: C64) -> SymTensor {
        SymTensor { layout: self.layout.clone(), comps: self.comps.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &SymTensor) -> Result<SymTensor> {
        self.same_shape(other)?;
        Ok(SymTensor {
            layout: self.layout.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &SymTensor) -> Result<SymTensor> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    fn same_shape(&self, other: &SymTensor) -> Result<()> {
        if self.n() != other.n() || self.m() != other.m() {
            return arg(format!(
                "shape mismatch: (n={}, m={}) vs (n={}, m={})",
                self.n(),
                self.m(),
                other.n(),
                other.m()
            ));
        }
        Ok(())
    }

    /// Largest component modulus.
    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Full n^m array in row-major order.
    pub fn to_full(&self) -> FullTensor {
        let (n, m) = (self.n(), self.m());
        let data = self.layout.full_positions().iter().map(|&p| self.comps[p as usize]).collect();
        FullTensor { n, m, data }
    }

    /// Applies the same n×n matrix to every index.
    pub fn transform_each_index(&self, q: &[Vec<f64>]) -> SymTensor {
        let (n, m) = (self.n(), self.m());
        let mut full = self.to_full().data;
        let mut tmp = vec![C64::new(0.0, 0.0); full.len()];
        for axis in 0..m {
            let stride = n.pow((m - axis - 1) as u32);
            for (lin, out) in tmp.iter_mut().enumerate() {
                let digit = (lin / stride) % n;
                let base = lin - digit * stride;
                let mut acc = C64::new(0.0, 0.0);
                for (j, qj) in q[digit].iter().enumerate() {
                    if *qj != 0.0 {
                        acc += full[base + j * stride] * qj;
                    }
                }
                *out = acc;
            }
            std::mem::swap(&mut full, &mut tmp);
        }
        let ft = FullTensor { n, m, data: full };
        SymTensor::from_fn(n, m, |idx| ft.get(idx))
    }
}

pub(crate) fn increment(idx: &mut [u8], n: usize) {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if (*d as usize) < n {
            return;
        }
        *d = 0;
    }
}

/// General (not necessarily symmetric) rank-m array over R^n, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FullTensor {
    pub n: usize,
    pub m: usize,
    pub data: Vec<C64>,
}

impl FullTensor {
    pub fn new(n: usize, m: usize, data: Vec<C64>) -> Result<FullTensor> {
        if data.len() != n.pow(m as u32) {
            return arg(format!("ragged array: {} entries for {n}^{m}", data.len()));
        }
        Ok(FullTensor { n, m, data })
    }

    pub fn zeros(n: usize, m: usize) -> FullTensor {
        FullTensor { n, m, data: vec![C64::new(0.0, 0.0); n.pow(m as u32)] }
    }

    pub fn linear(&self, idx: &[u8]) -> usize {
        idx.iter().fold(0, |acc, &d| acc * self.n + d as usize)
    }

    pub fn get(&self, idx: &[u8]) -> C64 {
        self.data[self.linear(idx)]
    }

    pub fn set(&mut self, idx: &[u8], v: C64) {
        let l = self.linear(idx);
        self.data[l] = v;
    }
}

fn permutations(m: usize) -> Arc<Vec<Vec<usize>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Vec<usize>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("permutation cache poisoned");
    guard
        .entry(m)
        .or_insert_with(|| {
            let mut out = Vec::new();
            let mut p: Vec<usize> = (0..m).collect();
            heap_permute(m, &mut p, &mut out);
            Arc::new(out)
        })
        .clone()
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

/// Averages a full array over all m! permutations of its indices.
///
/// ```
/// use reshetnyak::symtensor::{symmetrize, FullTensor, C64};
/// let mut t = FullTensor::zeros(2, 2);
/// t.set(&[0, 1], C64::new(1.0, 0.0));
/// let s = symmetrize(&t).unwrap();
/// assert_eq!(s.get(&[0, 1]).re, 0.5);
/// ```
pub fn symmetrize(t: &FullTensor) -> Result<SymTensor> {
    if t.data.len() != t.n.pow(t.m as u32) {
        return arg("ragged array");
    }
    if t.m > MAX_SYMMETRIZE_RANK {
        return arg(format!("symmetrize supports rank <= {MAX_SYMMETRIZE_RANK}, got {}", t.m));
    }
    let perms = permutations(t.m);
    let inv = 1.0 / perms.len() as f64;
    let mut buf = vec![0u8; t.m];
    Ok(SymTensor::from_fn(t.n, t.m, |idx| {
        let mut acc = C64::new(0.0, 0.0);
        for p in perms.iter() {
            for (slot, &src) in p.iter().enumerate() {
                buf[slot] = idx[src];
            }
            acc += t.get(&buf);
        }
        acc * inv
    }))
}

/// Symmetric product with the Kronecker tensor: rank m → m+2.
pub fn kron_mult_i(f: &SymTensor) -> SymTensor {
    let (n, m) = (f.n(), f.m());
    let pairs = ((m + 2) * (m + 1) / 2) as f64;
    let mut rest = vec![0u8; m];
    SymTensor::from_fn(n, m + 2, |idx| {
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..m + 2 {
            for b in a + 1..m + 2 {
                if idx[a] != idx[b] {
                    continue;
                }
                let mut w = 0;
                for (c, &v) in idx.iter().enumerate() {
                    if c != a && c != b {
                        rest[w] = v;
                        w += 1;
                    }
                }
                acc += f.comps[f.layout.rank_sorted(&rest)];
            }
        }
        acc / pairs
    })
}

/// Trace over two slots: rank m+2 → m.
pub fn contract_j(f: &SymTensor) -> Result<SymTensor> {
    let (n, mm) = (f.n(), f.m());
    if mm < 2 {
        return arg(format!("contract_j needs rank >= 2, got {mm}"));
    }
    let mut buf = vec![0u8; mm];
    Ok(SymTensor::from_fn(n, mm - 2, |idx| {
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..n as u8 {
            buf[0] = p;
            buf[1] = p;
            buf[2..].copy_from_slice(idx);
            acc += f.get(&buf);
        }
        acc
    }))
}

/// Full contraction Σ f conj(g) over all n^m tuples.
pub fn dot(f: &SymTensor, g: &SymTensor) -> Result<C64> {
    f.same_shape(g)?;
    let l = &f.layout;
    Ok((0..l.len()).map(|p| f.comps[p] * g.comps[p].conj() * l.multiplicity(p)).sum())
}

/// Evaluates f_{i_1…i_m} v^{i_1}…v^{i_m}.
pub fn power_eval(f: &SymTensor, v: &[f64]) -> Result<C64> {
    if v.len() != f.n() {
        return arg(format!("vector of length {} for n = {}", v.len(), f.n()));
    }
    let l = &f.layout;
    Ok((0..l.len())
        .map(|p| {
            let mono: f64 = l.index(p).iter().map(|&i| v[i as usize]).product();
            f.comps[p] * (mono * l.multiplicity(p))
        })
        .sum())
}

/// Symmetrized mk-fold power of an n×n symmetric matrix, rank 2·mk.
///
/// Component at a multi-index is the average, over the (2mk−1)!! perfect
/// matchings of its slots, of the product of matrix entries along the pairs.
pub fn matrix_power(q: &[Vec<f64>], mk: usize) -> SymTensor {
    let n = q.len();
    let norm = 1.0 / double_factorial_odd(mk);
    SymTensor::from_fn(n, 2 * mk, |idx| {
        let mut slots: Vec<u8> = idx.to_vec();
        C64::new(matching_sum(q, &mut slots) * norm, 0.0)
    })
}

fn matching_sum(q: &[Vec<f64>], slots: &mut Vec<u8>) -> f64 {
    if slots.is_empty() {
        return 1.0;
    }
    let first = slots.remove(0);
    let mut acc = 0.0;
    for k in 0..slots.len() {
        let w = q[first as usize][slots[k] as usize];
        if w != 0.0 {
            let partner = slots.remove(k);
            acc += w * matching_sum(q, slots);
            slots.insert(k, partner);
        }
    }
    slots.insert(0, first);
    acc
}

/// Symmetrized Kronecker power δ^mk, rank 2·mk.
pub fn delta_power(n: usize, mk: usize) -> SymTensor {
    let id: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    matrix_power(&id, mk)
}

/// Orthogonal projector onto y^⊥ as a matrix.
pub fn projector(y: &[f64]) -> Result<Vec<Vec<f64>>> {
    let r2: f64 = y.iter().map(|v| v * v).sum();
    if r2 == 0.0 {
        return arg("projector onto the complement of the zero vector");
    }
    let n = y.len();
    Ok((0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j)) - y[i] * y[j] / r2).collect())
        .collect())
}

/// Symmetrized mk-fold power of δ − yyᵀ/|y|², rank 2·mk.
pub fn eps_power(y: &[f64], mk: usize) -> Result<SymTensor> {
    Ok(matrix_power(&projector(y)?, mk))
}

/// Brute-force contraction of δ^(m+k) against g (rank m+2k) and conj(h) (rank m).
///
/// Iterates every raw index tuple, so the cost is n^(2m+2k); the sum is compensated because
/// plain accumulation over up to 3^12 terms loses about 1e-11.
pub fn c_contract_oracle(g: &SymTensor, h: &SymTensor) -> Result<C64> {
    if g.n() != h.n() {
        return arg("dimension mismatch");
    }
    let total_rank = g.m() + h.m();
    if total_rank % 2 == 1 {
        return arg(format!("ranks {} and {} have odd sum", g.m(), h.m()));
    }
    let n = g.n();
    let delta = delta_power(n, total_rank / 2);
    let gf = g.to_full();
    let hf = h.to_full();
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    let mut idx = vec![0u8; total_rank];
    for _ in 0..n.pow(total_rank as u32) {
        let d = delta.get(&idx);
        if d.re != 0.0 {
            let (a, b) = idx.split_at(g.m());
            let x = d * gf.get(a) * hf.get(b).conj();
            re.add(x.re);
            im.add(x.im);
        }
        increment(&mut idx, n);
    }
    Ok(C64::new(re.total(), im.total()))
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        self.carry += if self.sum.abs() >= x.abs() { (self.sum - t) + x } else { (x - t) + self.sum };
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Applies i^p to f.
pub fn i_pow(f: &SymTensor, p: usize) -> SymTensor {
    (0..p).fold(f.clone(), |acc, _| kron_mult_i(&acc))
}

/// Applies j^p to f.
pub fn j_pow(f: &SymTensor, p: usize) -> Result<SymTensor> {
    (0..p).try_fold(f.clone(), |acc, _| contract_j(&acc))
}

fn index_key(idx: &[u8]) -> String {
    idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

impl Serialize for SymTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let comps: BTreeMap<String, [f64; 2]> = (0..self.layout.len())
            .map(|p| (index_key(self.layout.index(p)), [self.comps[p].re, self.comps[p].im]))
            .collect();
        let mut st = s.serialize_struct("SymTensor", 3)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("m", &self.m())?;
        st.serialize_field("components", &comps)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for SymTensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            m: usize,
            components: BTreeMap<String, [f64; 2]>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.n < 1 {
            return Err(de::Error::custom("n must be at least 1"));
        }
        let mut t = SymTensor::zeros(raw.n, raw.m);
        for (key, [re, im]) in raw.components {
            let idx: std::result::Result<Vec<u8>, _> = if key.is_empty() {
                Ok(Vec::new())
            } else {
                key.split(',').map(|s| s.trim().parse::<u8>()).collect()
            };
            let idx = idx.map_err(|e| de::Error::custom(format!("bad index {key:?}: {e}")))?;
            if idx.len() != raw.m || idx.iter().any(|&i| i == 0 || i as usize > raw.n) {
                return Err(de::Error::custom(format!("index {key:?} out of range")));
            }
            let zero_based: Vec<u8> = idx.iter().map(|i| i - 1).collect();
            t.set(&zero_based, C64::new(re, im));
        }
        Ok(t)
    }
}
