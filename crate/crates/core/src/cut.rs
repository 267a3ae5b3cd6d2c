//! Cut norm, cut distance and the block-permutation approximation of the
//! quotient distance.
//!
//! For a block kernel `h` with weights `w`, the cut norm
//! `sup_{S,T} |∫_{S×T} h|` is attained at unions of whole blocks, because the
//! objective is bilinear in the fractional block memberships. So the exact
//! norm is a maximum over `s, t ∈ {0,1}^K`, and for a fixed `s` the best `t`
//! keeps exactly the columns of one sign. [`cut_norm_exact`] enumerates `s`
//! in Gray-code order, updating column sums in `O(K)` per step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::graphon::{common_refinement, StepGraphon};

/// Largest block count handled by exhaustive enumeration.
pub const MAX_EXACT_BLOCKS: usize = 14;
/// Largest block count for which all permutations are tried.
pub const MAX_EXACT_PERMUTATION_BLOCKS: usize = 8;
/// Restarts used by [`cut_distance`] when it falls back to the heuristic.
pub const DEFAULT_RESTARTS: usize = 64;
/// Annealing budget, in cut-norm evaluations.
pub const DEFAULT_ANNEAL_BUDGET: usize = 100_000;
pub const ANNEAL_COOLING: f64 = 0.995;

/// A signed block kernel: weights and a symmetric or general `K×K` matrix of
/// entries in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockKernel {
    weights: Vec<f64>,
    entries: Vec<f64>,
}

impl BlockKernel {
    pub fn new(weights: Vec<f64>, entries: Vec<f64>) -> Result<Self> {
        let k = weights.len();
        if k == 0 || entries.len() != k * k {
            return Err(Error::Invalid(format!(
                "kernel needs {k}x{k} entries, got {}",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| !(e.is_finite() && e.abs() <= 1.0)) {
            return Err(Error::Invalid(format!("kernel entry {e} outside [-1, 1]")));
        }
        Ok(Self { weights, entries })
    }

    /// `f - g` on the common refinement of the two partitions.
    pub fn difference(f: &StepGraphon, g: &StepGraphon) -> Result<Self> {
        let (f, g) = common_refinement(f, g)?;
        let entries = f
            .values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            weights: f.weights().to_vec(),
            entries,
        })
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Cell masses times entries: `c_ij = h_ij w_i w_j`.
    fn cells(&self) -> Vec<f64> {
        let k = self.k();
        let mut c = self.entries.clone();
        for i in 0..k {
            for j in 0..k {
                c[i * k + j] *= self.weights[i] * self.weights[j];
            }
        }
        c
    }

    /// `Σ_ij h_ij w_i w_j s_i t_j`.
    pub fn bilinear(&self, s: &[bool], t: &[bool]) -> f64 {
        let k = self.k();
        let mut total = 0.0;
        for i in (0..k).filter(|&i| s[i]) {
            for j in (0..k).filter(|&j| t[j]) {
                total += self.entries[i * k + j] * self.weights[i] * self.weights[j];
            }
        }
        total
    }

    /// Same form with fractional memberships in `[0, 1]`.
    pub fn bilinear_fractional(&self, s: &[f64], t: &[f64]) -> f64 {
        let k = self.k();
        let mut total = 0.0;
        for i in 0..k {
            for j in 0..k {
                total += self.entries[i * k + j] * self.weights[i] * self.weights[j] * s[i] * t[j];
            }
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutResult {
    pub value: f64,
    pub s_set: Vec<bool>,
    pub t_set: Vec<bool>,
    pub exact: bool,
}

/// Best `t` for a fixed `s` given the column sums, for one sign.
/// Ties go toward inclusion.
fn best_response(col: &[f64], sign: f64) -> (f64, Vec<bool>) {
    let mut value = 0.0;
    let t = col
        .iter()
        .map(|&c| {
            let v = sign * c;
            if v >= 0.0 {
                value += v;
                true
            } else {
                false
            }
        })
        .collect();
    (value, t)
}

fn column_sums(cells: &[f64], k: usize, s: &[bool]) -> Vec<f64> {
    let mut col = vec![0.0; k];
    for i in (0..k).filter(|&i| s[i]) {
        for (c, &x) in col.iter_mut().zip(&cells[i * k..(i + 1) * k]) {
            *c += x;
        }
    }
    col
}

/// Exact cut norm by enumerating row subsets. `K <= 14`.
pub fn cut_norm_exact(h: &BlockKernel) -> Result<CutResult> {
    let k = h.k();
    if k > MAX_EXACT_BLOCKS {
        return Err(Error::Size(format!(
            "exact cut norm supports at most {MAX_EXACT_BLOCKS} blocks, got {k}"
        )));
    }
    let cells = h.cells();
    let mut col = vec![0.0; k];
    let mut s = vec![false; k];
    let mut best = (0.0, 0u32, 1.0);
    let score = |col: &[f64]| {
        let (mut pos, mut neg) = (0.0, 0.0);
        for &c in col {
            if c > 0.0 {
                pos += c;
            } else {
                neg -= c;
            }
        }
        if pos >= neg {
            (pos, 1.0)
        } else {
            (neg, -1.0)
        }
    };
    let mut code = 0u32;
    for step in 1u32..(1u32 << k) {
        let bit = step.trailing_zeros() as usize;
        code ^= 1 << bit;
        s[bit] = !s[bit];
        let row = &cells[bit * k..(bit + 1) * k];
        if s[bit] {
            col.iter_mut().zip(row).for_each(|(c, &x)| *c += x);
        } else {
            col.iter_mut().zip(row).for_each(|(c, &x)| *c -= x);
        }
        let (v, sign) = score(&col);
        if v > best.0 {
            best = (v, code, sign);
        }
    }
    let s_set: Vec<bool> = (0..k).map(|i| best.1 >> i & 1 == 1).collect();
    // recompute column sums from scratch to shed Gray-code rounding
    let col = column_sums(&cells, k, &s_set);
    let (value, t_set) = best_response(&col, best.2);
    Ok(CutResult {
        value,
        s_set,
        t_set,
        exact: true,
    })
}

/// Alternating maximisation from random starts. Returns a feasible pair, so
/// the value is a lower bound on the cut norm.
pub fn cut_norm_heuristic(h: &BlockKernel, restarts: usize, seed: u64) -> CutResult {
    let k = h.k();
    let cells = h.cells();
    let mut transposed = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            transposed[j * k + i] = cells[i * k + j];
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = CutResult {
        value: 0.0,
        s_set: vec![false; k],
        t_set: vec![false; k],
        exact: false,
    };
    for r in 0..restarts.max(1) {
        let start: Vec<bool> = if r == 0 {
            vec![true; k]
        } else {
            (0..k).map(|_| rng.random_bool(0.5)).collect()
        };
        for sign in [1.0, -1.0] {
            let mut s = start.clone();
            let mut t = best_response(&column_sums(&cells, k, &s), sign).1;
            for _ in 0..4 * k + 8 {
                let s_new = best_response(&column_sums(&transposed, k, &t), sign).1;
                if s_new == s {
                    break;
                }
                s = s_new;
                t = best_response(&column_sums(&cells, k, &s), sign).1;
            }
            let v = (sign * h.bilinear(&s, &t)).max(0.0);
            if v > best.value {
                best = CutResult {
                    value: v,
                    s_set: s,
                    t_set: t,
                    exact: false,
                };
            }
        }
    }
    best
}

/// Exact search up to 14 blocks, alternating best responses beyond.
pub fn cut_norm_auto(h: &BlockKernel) -> CutResult {
    if h.k() <= MAX_EXACT_BLOCKS {
        cut_norm_exact(h).expect("size checked")
    } else {
        cut_norm_heuristic(h, DEFAULT_RESTARTS, 0)
    }
}

/// `d_□(f, g)`: exact when the common refinement has at most 14 blocks,
/// otherwise the heuristic lower bound.
pub fn cut_distance(f: &StepGraphon, g: &StepGraphon) -> Result<CutResult> {
    Ok(cut_norm_auto(&BlockKernel::difference(f, g)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaCutResult {
    /// Minimum found of `d_□(f, g∘π)` over block permutations, after both
    /// graphons are averaged onto `blocks` equal-mass blocks.
    pub value: f64,
    pub cut: CutResult,
    /// `permutation[i]` is the block of `g` placed at position `i`.
    pub permutation: Vec<usize>,
    pub blocks: usize,
    /// All permutations were examined.
    pub exact_search: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct DeltaCutOptions {
    /// Equal-mass resolution. `None` keeps a shared uniform partition when
    /// both inputs already have one, and otherwise uses 8 blocks.
    pub blocks: Option<usize>,
    pub budget: usize,
    pub seed: u64,
}

impl Default for DeltaCutOptions {
    fn default() -> Self {
        Self {
            blocks: None,
            budget: DEFAULT_ANNEAL_BUDGET,
            seed: 0,
        }
    }
}

/// Norm of `f - g∘π` on a shared uniform partition.
fn permuted_norm(f: &StepGraphon, g: &StepGraphon, perm: &[usize], exact: bool) -> CutResult {
    let k = f.k();
    let mut entries = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            entries[i * k + j] = f.value(i, j) - g.value(perm[i], perm[j]);
        }
    }
    let h = BlockKernel {
        weights: f.weights().to_vec(),
        entries,
    };
    if exact {
        cut_norm_exact(&h).expect("size checked")
    } else {
        cut_norm_heuristic(&h, 4, perm.iter().fold(17, |a, &b| a * 31 + b as u64))
    }
}

/// Approximates the quotient distance `δ_□(f, g)` by searching block
/// relabelings at a fixed equal-mass resolution. The value is an upper bound
/// at that resolution.
pub fn delta_cut(
    f: &StepGraphon,
    g: &StepGraphon,
    opts: DeltaCutOptions,
) -> Result<DeltaCutResult> {
    let k = match opts.blocks {
        Some(k) => k,
        None if f.k() == g.k() && f.has_uniform_weights() && g.has_uniform_weights() => f.k(),
        None => 8,
    };
    if k == 0 {
        return Err(Error::Invalid(
            "resolution must be at least one block".into(),
        ));
    }
    let resample = |x: &StepGraphon| -> Result<StepGraphon> {
        if x.k() == k && x.has_uniform_weights() {
            Ok(x.clone())
        } else {
            x.resample_uniform(k)
        }
    };
    let (f, g) = (resample(f)?, resample(g)?);
    // constant kernels are fixed by every relabeling
    let constant = |x: &StepGraphon| x.values().iter().all(|&v| v == x.values()[0]);
    if constant(&f) || constant(&g) || k <= MAX_EXACT_PERMUTATION_BLOCKS {
        let identity: Vec<usize> = (0..k).collect();
        if constant(&f) || constant(&g) {
            let cut = permuted_norm(&f, &g, &identity, k <= MAX_EXACT_BLOCKS);
            return Ok(DeltaCutResult {
                value: cut.value,
                cut,
                permutation: identity,
                blocks: k,
                exact_search: true,
            });
        }
        return Ok(exhaustive_permutations(&f, &g));
    }
    Ok(anneal_permutations(&f, &g, opts.budget, opts.seed))
}

fn exhaustive_permutations(f: &StepGraphon, g: &StepGraphon) -> DeltaCutResult {
    let k = f.k();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best_cut = permuted_norm(f, g, &perm, true);
    let mut best_perm = perm.clone();
    // Heap's algorithm, iterative
    let mut c = vec![0usize; k];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let cut = permuted_norm(f, g, &perm, true);
            if cut.value < best_cut.value {
                best_cut = cut;
                best_perm = perm.clone();
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    DeltaCutResult {
        value: best_cut.value,
        cut: best_cut,
        permutation: best_perm,
        blocks: k,
        exact_search: true,
    }
}

fn anneal_permutations(
    f: &StepGraphon,
    g: &StepGraphon,
    budget: usize,
    seed: u64,
) -> DeltaCutResult {
    let k = f.k();
    let exact_ok = k <= MAX_EXACT_BLOCKS;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..k).collect();
    // start from the degree-sorted alignment
    let degree =
        |x: &StepGraphon, i: usize| -> f64 { (0..k).map(|j| x.weights()[j] * x.value(i, j)).sum() };
    let mut f_order: Vec<usize> = (0..k).collect();
    f_order.sort_by(|&a, &b| degree(f, a).total_cmp(&degree(f, b)));
    let mut g_order: Vec<usize> = (0..k).collect();
    g_order.sort_by(|&a, &b| degree(g, a).total_cmp(&degree(g, b)));
    for (fi, gi) in f_order.iter().zip(&g_order) {
        perm[*fi] = *gi;
    }
    let mut current = permuted_norm(f, g, &perm, false).value;
    let mut best = (current, perm.clone());
    let mut temperature = (0.05 * current).max(1e-6);
    for _ in 0..budget {
        let a = rng.random_range(0..k);
        let mut b = rng.random_range(0..k - 1);
        if b >= a {
            b += 1;
        }
        perm.swap(a, b);
        let v = permuted_norm(f, g, &perm, false).value;
        if v <= current || rng.random::<f64>() < ((current - v) / temperature).exp() {
            current = v;
            if v < best.0 {
                best = (v, perm.clone());
            }
        } else {
            perm.swap(a, b);
        }
        temperature *= ANNEAL_COOLING;
        if temperature < 1e-12 {
            temperature = 1e-12;
        }
    }
    let cut = permuted_norm(f, g, &best.1, exact_ok);
    DeltaCutResult {
        value: cut.value,
        cut,
        permutation: best.1,
        blocks: k,
        exact_search: false,
    }
}

/// Quotient of `g` onto `k` blocks: vertex `i` goes to block `⌊ik/n⌋` and
/// each block pair gets the edge density over its distinct vertex pairs.
/// When `k` does not divide `n` the result is then averaged onto `k`
/// equal-mass blocks.
pub fn quotient_graph(g: &SimpleGraph, k: usize) -> Result<StepGraphon> {
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Err(Error::Invalid(format!(
            "cannot split {n} vertices into {k} blocks"
        )));
    }
    let block = |v: usize| v * k / n;
    let mut sizes = vec![0usize; k];
    for v in 0..n {
        sizes[block(v)] += 1;
    }
    let mut counts = vec![0usize; k * k];
    for (u, v) in g.edges() {
        let (a, b) = (block(u), block(v));
        counts[a * k + b] += 1;
        if a != b {
            counts[b * k + a] += 1;
        }
    }
    let mut values = vec![0.0; k * k];
    for a in 0..k {
        for b in 0..k {
            let pairs = if a == b {
                sizes[a] * sizes[a].saturating_sub(1) / 2
            } else {
                sizes[a] * sizes[b]
            };
            if pairs > 0 {
                values[a * k + b] = counts[a * k + b] as f64 / pairs as f64;
            }
        }
    }
    let weights = sizes.iter().map(|&s| s as f64 / n as f64).collect();
    let q = StepGraphon::from_parts_clamped(weights, values);
    if n.is_multiple_of(k) {
        Ok(q)
    } else {
        q.resample_uniform(k)
    }
}

/// `δ_□` between the `k`-block quotient of `g` and `reference`.
pub fn graph_to_reference_distance(
    g: &SimpleGraph,
    reference: &StepGraphon,
    k: usize,
) -> Result<f64> {
    let q = quotient_graph(g, k)?;
    Ok(delta_cut(
        &q,
        reference,
        DeltaCutOptions {
            blocks: Some(k),
            ..DeltaCutOptions::default()
        },
    )?
    .value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(b: f64) -> StepGraphon {
        StepGraphon::new(vec![b, 1.0 - b], vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap()
    }

    /// Brute force over every (s, t) pair.
    fn brute_force(h: &BlockKernel) -> f64 {
        let k = h.k();
        let mut best: f64 = 0.0;
        for sm in 0u32..(1 << k) {
            for tm in 0u32..(1 << k) {
                let s: Vec<bool> = (0..k).map(|i| sm >> i & 1 == 1).collect();
                let t: Vec<bool> = (0..k).map(|i| tm >> i & 1 == 1).collect();
                best = best.max(h.bilinear(&s, &t).abs());
            }
        }
        best
    }

    #[test]
    fn zero_kernel() {
        let h = BlockKernel::new(vec![0.5, 0.5], vec![0.0; 4]).unwrap();
        assert_eq!(cut_norm_exact(&h).unwrap().value, 0.0);
        assert_eq!(cut_norm_heuristic(&h, 5, 1).value, 0.0);
    }

    #[test]
    fn diagonal_vs_half() {
        let f = StepGraphon::uniform(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let g = StepGraphon::constant(0.5).unwrap();
        let h = BlockKernel::difference(&f, &g).unwrap();
        let r = cut_norm_exact(&h).unwrap();
        assert!((r.value - 0.125).abs() < 1e-15);
        assert!((brute_force(&h) - 0.125).abs() < 1e-15);
        assert_eq!(r.s_set.iter().filter(|&&x| x).count(), 1);
        assert_eq!(r.s_set, r.t_set);
        assert!((h.bilinear(&r.s_set, &r.t_set).abs() - r.value).abs() < 1e-15);
    }

    #[test]
    fn ones_vs_zeros() {
        let one = StepGraphon::constant(1.0).unwrap();
        let zero = StepGraphon::constant(0.0).unwrap();
        let r = cut_distance(&one, &zero).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.s_set.iter().all(|&x| x) && r.t_set.iter().all(|&x| x));
    }

    #[test]
    fn size_cap() {
        let h = BlockKernel::new(vec![1.0 / 15.0; 15], vec![0.0; 225]).unwrap();
        assert!(matches!(cut_norm_exact(&h), Err(Error::Size(_))));
    }

    #[test]
    fn rank_one_selects_positive_parts() {
        let u = [0.9, -0.5, 0.7, -0.8, 0.3];
        let k = u.len();
        let entries: Vec<f64> = (0..k * k).map(|x| u[x / k] * u[x % k]).collect();
        let h = BlockKernel::new(vec![0.2; 5], entries).unwrap();
        let exact = cut_norm_exact(&h).unwrap();
        let heur = cut_norm_heuristic(&h, 10, 3);
        assert!((exact.value - brute_force(&h)).abs() < 1e-15);
        assert!((heur.value - exact.value).abs() < 1e-12);
        // positive-part / positive-part beats negative / negative here
        let pos: Vec<bool> = u.iter().map(|&x| x > 0.0).collect();
        assert_eq!(exact.s_set, pos);
        assert_eq!(exact.t_set, pos);
    }

    #[test]
    fn chi_vs_half_fixture() {
        // f - g is +1/2 on the clique cell and -1/2 elsewhere (b = 1/2)
        let r = cut_distance(&chi(0.5), &StepGraphon::constant(0.5).unwrap()).unwrap();
        let h = BlockKernel::difference(&chi(0.5), &StepGraphon::constant(0.5).unwrap()).unwrap();
        assert!((r.value - brute_force(&h)).abs() < 1e-15);
        assert!((r.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn delta_cut_recovers_permutation() {
        let f = StepGraphon::uniform(vec![
            vec![0.9, 0.1, 0.4, 0.2],
            vec![0.1, 0.5, 0.3, 0.7],
            vec![0.4, 0.3, 0.0, 0.6],
            vec![0.2, 0.7, 0.6, 1.0],
        ])
        .unwrap();
        let g = f.permute(&[2, 0, 3, 1]).unwrap();
        assert!(cut_distance(&f, &g).unwrap().value > 0.01);
        let d = delta_cut(&f, &g, DeltaCutOptions::default()).unwrap();
        assert_eq!(d.value, 0.0);
        assert!(d.exact_search);
    }

    #[test]
    fn delta_cut_constants() {
        let c = StepGraphon::constant_blocks(0.3, 4).unwrap();
        let d = delta_cut(&c, &c, DeltaCutOptions::default()).unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn delta_cut_k4_vs_c4() {
        let k4 = StepGraphon::from_graph(&SimpleGraph::complete(4)).unwrap();
        let c4 = StepGraphon::from_graph(&SimpleGraph::cycle(4).unwrap()).unwrap();
        let d = delta_cut(&k4, &c4, DeltaCutOptions::default()).unwrap();
        // oracle: exhaustive minimum over the 24 relabelings
        let mut oracle = f64::INFINITY;
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        for p in perms {
            let g = c4.permute(&p).unwrap();
            oracle = oracle.min(brute_force(&BlockKernel::difference(&k4, &g).unwrap()));
        }
        assert!((d.value - oracle).abs() < 1e-15);
        assert!(d.value > 0.0);
        // every relabeling leaves a nonnegative perfect matching of mass 4/16
        assert!((d.value - 0.25).abs() < 1e-15);
    }

    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn annealing_path_for_larger_k() {
        let vals: Vec<Vec<f64>> = (0..10)
            .map(|i| (0..10).map(|j| ((i * j) % 7) as f64 / 7.0).collect())
            .collect();
        let f = StepGraphon::uniform(vals).unwrap();
        let g = f.permute(&[3, 1, 4, 0, 5, 9, 2, 6, 8, 7]).unwrap();
        let d = delta_cut(
            &f,
            &g,
            DeltaCutOptions {
                blocks: None,
                budget: 20_000,
                seed: 5,
            },
        )
        .unwrap();
        assert!(!d.exact_search);
        assert!(d.value <= cut_distance(&f, &g).unwrap().value + 1e-15);
        assert!(
            d.value < 1e-12,
            "annealing should find the relabeling, got {}",
            d.value
        );
    }

    #[test]
    fn graph_reference_examples() {
        let kn = SimpleGraph::complete(40);
        let one = StepGraphon::constant(1.0).unwrap();
        let q = quotient_graph(&kn, 8).unwrap();
        assert!(q.values().iter().all(|&v| v == 1.0));
        assert_eq!(graph_to_reference_distance(&kn, &one, 8).unwrap(), 0.0);
        // uneven split still lands on equal-mass blocks
        let q = quotient_graph(&SimpleGraph::complete(10), 4).unwrap();
        assert!(q.has_uniform_weights());

        // empty graph vs chi_t: the cut norm of a nonnegative kernel is its integral
        let b = (6.0f64 * 0.1).cbrt();
        let d = graph_to_reference_distance(&SimpleGraph::empty(48), &chi(b), 8).unwrap();
        assert!((d - b * b).abs() < 1e-12);
    }
}
