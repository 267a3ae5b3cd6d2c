//! Random graph sampling, exact small-n tails and tilted importance sampling.
//!
//! Vertex `i` (0-based) sits at the point `(i + 1/2)/n` and takes the block
//! containing it. Edge `(i, j)`, `i < j`, is decided by a uniform draw from a
//! ChaCha8 stream keyed by the sample seed, with stream id `i` and word
//! position `2j`, so every pair owns a fixed slot of the keystream and the
//! graph does not depend on the order in which rows are generated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cut::graph_to_reference_distance;
use crate::error::{check_p, domain, Error, Result};
use crate::graph::SimpleGraph;
use crate::graphon::StepGraphon;
use crate::rate::trivial_threshold;
use crate::solver::{solve_phi, SolveOptions};

/// Largest `n` accepted by [`exact_tail`].
pub const MAX_EXACT_TAIL_VERTICES: usize = 7;
/// Lower bound on the sample count of the estimators.
pub const MIN_SAMPLES: usize = 100;

/// Seed of the `index`-th sample in a batch (splitmix64 of the pair).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce5_e4b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn vertex_blocks(n: usize, h: &StepGraphon) -> Vec<usize> {
    (0..n)
        .map(|i| h.block_of((i as f64 + 0.5) / n as f64))
        .collect()
}

/// Upper-triangle neighbour rows of a graph drawn with edge probabilities
/// `h(block_i, block_j)`.
fn sample_rows(blocks: &[usize], h: &StepGraphon, seed: u64) -> Vec<Vec<usize>> {
    let n = blocks.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        rng.set_stream(i as u64);
        rng.set_word_pos(2 * (i as u128 + 1));
        let row = h.row(blocks[i]);
        let mut out = Vec::new();
        for j in i + 1..n {
            let u: f64 = rng.random();
            if u < row[blocks[j]] {
                out.push(j);
            }
        }
        rows.push(out);
    }
    rows
}

/// `G(n, p)`.
pub fn sample_er(n: usize, p: f64, seed: u64) -> Result<SimpleGraph> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("p = {p} must lie in [0, 1]"));
    }
    sample_inhomogeneous(n, &StepGraphon::constant(p)?, seed)
}

/// Inhomogeneous random graph with edge probabilities read off `h` at the
/// vertex midpoints.
pub fn sample_inhomogeneous(n: usize, h: &StepGraphon, seed: u64) -> Result<SimpleGraph> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    let blocks = vertex_blocks(n, h);
    Ok(SimpleGraph::from_upper_rows(sample_rows(&blocks, h, seed)))
}

/// Number of triangles, by intersecting sorted forward neighbour lists.
pub fn triangle_count(g: &SimpleGraph) -> u64 {
    let mut count = 0u64;
    for u in 0..g.vertex_count() {
        let nu = g.neighbors(u);
        let start = nu.partition_point(|&x| x <= u);
        for (idx, &v) in nu[start..].iter().enumerate() {
            let a = &nu[start + idx + 1..];
            let nv = g.neighbors(v);
            let b = &nv[nv.partition_point(|&x| x <= v)..];
            count += sorted_intersection_len(a, b);
        }
    }
    count
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> u64 {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Smallest triangle count meeting `T >= t n^3`.
pub fn triangle_threshold(n: usize, t: f64) -> u64 {
    let x = t * (n as f64).powi(3);
    if x <= 0.0 {
        0
    } else {
        (x - 1e-9).ceil().max(0.0) as u64
    }
}

/// Exact `P(T_{n,p} >= t n^3)` by enumerating all labelled graphs.
pub fn exact_tail(n: usize, p: f64, t: f64) -> Result<f64> {
    if n > MAX_EXACT_TAIL_VERTICES {
        return Err(Error::Size(format!(
            "exact enumeration supports n <= {MAX_EXACT_TAIL_VERTICES}, got {n}"
        )));
    }
    if n == 0 {
        return domain("n must be at least 1");
    }
    if !(0.0..=1.0).contains(&p) || !t.is_finite() {
        return domain(format!(
            "need p in [0, 1] and finite t, got p = {p}, t = {t}"
        ));
    }
    let threshold = triangle_threshold(n, t);
    if threshold == 0 {
        return Ok(1.0);
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let m = pairs.len();
    let total: u64 = 1 << m;
    // qualifying graphs by edge count
    let chunk = 1u64 << 12;
    let counts = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut hist = vec![0u64; m + 1];
            for code in c * chunk..((c + 1) * chunk).min(total) {
                let mut adj = [0u8; MAX_EXACT_TAIL_VERTICES];
                for (bit, &(i, j)) in pairs.iter().enumerate() {
                    if code >> bit & 1 == 1 {
                        adj[i] |= 1 << j;
                        adj[j] |= 1 << i;
                    }
                }
                let mut tri = 0u64;
                for &(i, j) in &pairs {
                    if adj[i] >> j & 1 == 1 {
                        let above = !((1u16 << (j + 1)) - 1) as u8;
                        tri += (adj[i] & adj[j] & above).count_ones() as u64;
                    }
                }
                if tri >= threshold {
                    hist[code.count_ones() as usize] += 1;
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; m + 1],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts
        .iter()
        .enumerate()
        .map(|(e, &c)| c as f64 * p.powi(e as i32) * (1.0 - p).powi((m - e) as i32))
        .sum())
}

#[derive(Debug, Clone, Serialize)]
pub struct TailEstimate {
    pub n: usize,
    pub p: f64,
    pub t: f64,
    /// Estimate of `n^-2 log P(T_{n,p} >= t n^3)`; `-inf` when nothing was
    /// accepted.
    pub log_prob_per_n2: f64,
    /// Delta-method standard error of `log_prob_per_n2`.
    pub std_error: f64,
    /// Estimate of the probability itself.
    pub prob: f64,
    pub prob_std_error: f64,
    pub samples: usize,
    pub accepted: usize,
    /// Sample mean of the log importance weight over all draws.
    pub mean_log_weight: f64,
    pub tilt: StepGraphon,
    pub warning: Option<String>,
}

/// Per-sample log-likelihood ratio `log dP_p / dP_q` of a graph drawn from
/// the tilt, from edge counts per block pair.
struct LogWeights {
    /// `log(p/q)` and `log((1-p)/(1-q))` per block pair.
    present: Vec<f64>,
    absent: Vec<f64>,
    k: usize,
}

impl LogWeights {
    fn new(tilt: &StepGraphon, p: f64) -> Self {
        let k = tilt.k();
        let mut present = vec![0.0; k * k];
        let mut absent = vec![0.0; k * k];
        for (x, &q) in tilt.values().iter().enumerate() {
            // ln(1) is exactly 0, so the identity tilt gives weight 1 bitwise
            present[x] = (p / q).ln();
            absent[x] = ((1.0 - p) / (1.0 - q)).ln();
        }
        Self { present, absent, k }
    }

    fn of(&self, g: &SimpleGraph, blocks: &[usize]) -> f64 {
        let k = self.k;
        let mut pairs = vec![0u64; k * k];
        for (b, count) in block_pair_counts(blocks, k) {
            pairs[b] = count;
        }
        let mut edges = vec![0u64; k * k];
        for (u, v) in g.edges() {
            let (a, b) = (blocks[u], blocks[v]);
            edges[a.min(b) * k + a.max(b)] += 1;
        }
        let mut lw = 0.0;
        for x in 0..k * k {
            if pairs[x] > 0 {
                let e = edges[x] as f64;
                lw += e * self.present[x] + (pairs[x] as f64 - e) * self.absent[x];
            }
        }
        lw
    }
}

/// Number of vertex pairs per unordered block pair, keyed `min * k + max`.
fn block_pair_counts(blocks: &[usize], k: usize) -> Vec<(usize, u64)> {
    let mut size = vec![0u64; k];
    for &b in blocks {
        size[b] += 1;
    }
    let mut out = Vec::new();
    for a in 0..k {
        for b in a..k {
            let c = if a == b {
                size[a] * size[a].saturating_sub(1) / 2
            } else {
                size[a] * size[b]
            };
            out.push((a * k + b, c));
        }
    }
    out
}

fn check_tilt(tilt: &StepGraphon) -> Result<()> {
    if tilt.values().iter().any(|&q| !(q > 0.0 && q < 1.0)) {
        return domain("tilt values must lie strictly inside (0, 1)");
    }
    Ok(())
}

fn check_estimator_inputs(n: usize, p: f64, t: f64, samples: usize) -> Result<()> {
    check_p(p)?;
    if n == 0 {
        return domain("n must be at least 1");
    }
    if !t.is_finite() {
        return domain(format!("t = {t} must be finite"));
    }
    if samples < MIN_SAMPLES {
        return domain(format!(
            "samples = {samples} must be at least {MIN_SAMPLES}"
        ));
    }
    Ok(())
}

/// Importance-sampling estimate of `P(T_{n,p} >= t n^3)` with proposal
/// `sample_inhomogeneous(n, tilt)`.
pub fn tilted_tail_estimate(
    n: usize,
    p: f64,
    t: f64,
    tilt: &StepGraphon,
    samples: usize,
    seed: u64,
) -> Result<TailEstimate> {
    check_estimator_inputs(n, p, t, samples)?;
    check_tilt(tilt)?;
    let threshold = triangle_threshold(n, t);
    let blocks = vertex_blocks(n, tilt);
    let weights = LogWeights::new(tilt, p);
    let draws: Vec<(f64, bool)> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let g = SimpleGraph::from_upper_rows(sample_rows(&blocks, tilt, derive_seed(seed, s)));
            (weights.of(&g, &blocks), triangle_count(&g) >= threshold)
        })
        .collect();

    let mean_log_weight = draws.iter().map(|d| d.0).sum::<f64>() / samples as f64;
    let accepted_lw: Vec<f64> = draws.iter().filter(|d| d.1).map(|d| d.0).collect();
    let accepted = accepted_lw.len();
    let s = samples as f64;
    let n2 = (n * n) as f64;
    if accepted == 0 {
        return Ok(TailEstimate {
            n,
            p,
            t,
            log_prob_per_n2: f64::NEG_INFINITY,
            std_error: f64::INFINITY,
            prob: 0.0,
            prob_std_error: 0.0,
            samples,
            accepted,
            mean_log_weight,
            tilt: tilt.clone(),
            warning: Some(format!(
                "no sample reached {threshold} triangles; strengthen the tilt or raise the sample count"
            )),
        });
    }
    // Y_s = w_s 1{accepted}, handled as exp(m) * Y'_s with m the largest log weight
    let m = accepted_lw
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = accepted_lw.iter().map(|&lw| (lw - m).exp()).collect();
    let mean = scaled.iter().sum::<f64>() / s;
    let second = scaled.iter().map(|y| y * y).sum::<f64>() / s;
    let var = (second - mean * mean).max(0.0) * s / (s - 1.0);
    let rel_se = (var / s).sqrt() / mean;
    let log_prob = m + mean.ln();
    let prob = m.exp() * mean;
    Ok(TailEstimate {
        n,
        p,
        t,
        log_prob_per_n2: (log_prob / n2).min(0.0),
        std_error: rel_se / n2,
        prob,
        prob_std_error: prob * rel_se,
        samples,
        accepted,
        mean_log_weight,
        tilt: tilt.clone(),
        warning: None,
    })
}

/// `n^-2 Σ_{i<j} KL(q_ij || p)` for the tilt at size `n`; tends to
/// `I_p(tilt)` as `n` grows.
pub fn tilt_entropy_cost(n: usize, p: f64, tilt: &StepGraphon) -> Result<f64> {
    check_p(p)?;
    if n == 0 {
        return domain("n must be at least 1");
    }
    let k = tilt.k();
    let blocks = vertex_blocks(n, tilt);
    let kl = |q: f64| {
        let a = if q > 0.0 { q * (q / p).ln() } else { 0.0 };
        let b = if q < 1.0 {
            (1.0 - q) * ((1.0 - q) / (1.0 - p)).ln()
        } else {
            0.0
        };
        a + b
    };
    let total: f64 = block_pair_counts(&blocks, k)
        .into_iter()
        .map(|(x, c)| c as f64 * kl(tilt.values()[x]))
        .sum();
    Ok(total / (n * n) as f64)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionalRow {
    pub ref_label: String,
    pub mean_distance: f64,
    pub std_error: f64,
    pub accepted_samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionalTable {
    pub n: usize,
    pub p: f64,
    pub t: f64,
    pub samples: usize,
    pub accepted: usize,
    pub proposal: StepGraphon,
    pub rows: Vec<ConditionalRow>,
    pub warning: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ConditionalOptions {
    /// Block count of the quotient used for distances.
    pub blocks: usize,
    pub samples: usize,
    pub seed: u64,
    /// Proposal graphon; by default the solver optimiser at the finite-size
    /// target `t n^2 / ((n-1)(n-2))`.
    pub proposal: Option<StepGraphon>,
    /// Block count for the default proposal solve.
    pub solver_blocks: usize,
}

impl Default for ConditionalOptions {
    fn default() -> Self {
        Self {
            blocks: 4,
            samples: 1000,
            seed: 0,
            proposal: None,
            solver_blocks: 8,
        }
    }
}

/// Triangle density a graphon needs so that `n` vertices sampled from it
/// carry about `t n^3` triangles in expectation.
pub fn finite_size_target(n: usize, t: f64) -> f64 {
    if n < 3 {
        return t;
    }
    let n = n as f64;
    t * n * n / ((n - 1.0) * (n - 2.0))
}

/// Default proposal: the solver optimiser at the finite-size target, with
/// values pulled into `[1e-9, 1 - 1e-9]`.
pub fn default_proposal(n: usize, p: f64, t: f64, blocks: usize, seed: u64) -> Result<StepGraphon> {
    let target = finite_size_target(n, t).min(1.0 / 6.0 - 1e-6);
    let opts = SolveOptions {
        blocks,
        seed,
        ..SolveOptions::default()
    };
    let res = solve_phi(p, target.max(0.0), &opts)?;
    Ok(res.optimizer.map_values(|v| v.clamp(1e-9, 1.0 - 1e-9)))
}

/// Weighted mean cut distance from graphs conditioned on `T >= t n^3` to
/// each reference, under the conditional law of `G(n, p)`.
pub fn conditional_structure_experiment(
    n: usize,
    p: f64,
    t: f64,
    refs: &[(String, StepGraphon)],
    opts: &ConditionalOptions,
) -> Result<ConditionalTable> {
    check_estimator_inputs(n, p, t, opts.samples)?;
    if opts.blocks == 0 || opts.blocks > n {
        return domain(format!("blocks = {} must lie in 1..={n}", opts.blocks));
    }
    let proposal = match &opts.proposal {
        Some(g) => g.clone(),
        None if t <= trivial_threshold(p) => StepGraphon::constant(p)?,
        None => default_proposal(n, p, t, opts.solver_blocks, opts.seed)?,
    };
    check_tilt(&proposal)?;
    let threshold = triangle_threshold(n, t);
    let blocks = vertex_blocks(n, &proposal);
    let weights = LogWeights::new(&proposal, p);
    let draws: Vec<Option<(f64, Vec<f64>)>> = (0..opts.samples as u64)
        .into_par_iter()
        .map(|s| -> Result<Option<(f64, Vec<f64>)>> {
            let g = SimpleGraph::from_upper_rows(sample_rows(
                &blocks,
                &proposal,
                derive_seed(opts.seed, s),
            ));
            if triangle_count(&g) < threshold {
                return Ok(None);
            }
            let d = refs
                .iter()
                .map(|(_, r)| graph_to_reference_distance(&g, r, opts.blocks))
                .collect::<Result<Vec<f64>>>()?;
            Ok(Some((weights.of(&g, &blocks), d)))
        })
        .collect::<Result<_>>()?;
    let kept: Vec<&(f64, Vec<f64>)> = draws.iter().flatten().collect();
    let accepted = kept.len();
    let warning = if accepted == 0 {
        Some(format!("no sample reached {threshold} triangles"))
    } else if accepted < 30 {
        Some(format!(
            "only {accepted} of {} samples accepted",
            opts.samples
        ))
    } else {
        None
    };
    // self-normalised weights
    let m = kept.iter().map(|k| k.0).fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = kept.iter().map(|k| (k.0 - m).exp()).collect();
    let wsum: f64 = w.iter().sum();
    let rows = refs
        .iter()
        .enumerate()
        .map(|(r, (label, _))| {
            let (mean_distance, std_error) = if accepted == 0 {
                (f64::NAN, f64::NAN)
            } else {
                let mean = kept.iter().zip(&w).map(|(k, wi)| wi * k.1[r]).sum::<f64>() / wsum;
                let var = kept
                    .iter()
                    .zip(&w)
                    .map(|(k, wi)| (wi * (k.1[r] - mean)).powi(2))
                    .sum::<f64>();
                (mean, var.sqrt() / wsum)
            };
            ConditionalRow {
                ref_label: label.clone(),
                mean_distance,
                std_error,
                accepted_samples: accepted,
            }
        })
        .collect();
    Ok(ConditionalTable {
        n,
        p,
        t,
        samples: opts.samples,
        accepted,
        proposal,
        rows,
        warning,
    })
}
