//! Block-constant graphons.
//!
//! A [`StepGraphon`] is a symmetric kernel on `[0,1]^2` that is constant on
//! products of consecutive intervals. Interval lengths (block weights) may be
//! non-uniform, so the two-block clique graphon with block masses `b` and
//! `1 - b` is represented exactly. All integrals of such kernels reduce to
//! finite sums over blocks, which is how every density here is computed.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::SimpleGraph;

/// Tolerance on `sum(weights) == 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Largest block count a common refinement may produce.
pub const MAX_REFINEMENT_BLOCKS: usize = 4096;
/// Largest pattern accepted by [`StepGraphon::hom_density`].
pub const MAX_PATTERN_VERTICES: usize = 8;

/// Cut points closer than this are merged when overlaying partitions.
const CUT_MERGE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStepGraphon", into = "RawStepGraphon")]
pub struct StepGraphon {
    weights: Vec<f64>,
    /// Row-major `k x k`.
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawStepGraphon {
    weights: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl TryFrom<RawStepGraphon> for StepGraphon {
    type Error = Error;

    fn try_from(raw: RawStepGraphon) -> Result<Self> {
        StepGraphon::new(raw.weights, raw.values)
    }
}

impl From<StepGraphon> for RawStepGraphon {
    fn from(g: StepGraphon) -> Self {
        let values = (0..g.k()).map(|i| g.row(i).to_vec()).collect();
        RawStepGraphon {
            weights: g.weights,
            values,
        }
    }
}

impl StepGraphon {
    /// Validating constructor from block weights and a square value matrix.
    pub fn new(weights: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let k = weights.len();
        if values.len() != k || values.iter().any(|r| r.len() != k) {
            return Err(Error::Invalid(format!(
                "value matrix must be {k}x{k} to match the weights"
            )));
        }
        Self::from_flat(weights, values.into_iter().flatten().collect())
    }

    /// Validating constructor from a row-major value matrix.
    pub fn from_flat(weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let k = weights.len();
        if k == 0 {
            return Err(Error::Invalid(
                "a step graphon needs at least one block".into(),
            ));
        }
        if values.len() != k * k {
            return Err(Error::Invalid(format!(
                "expected {} values for {k} blocks, got {}",
                k * k,
                values.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::Invalid(format!("block weight {w} is not positive")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Invalid(format!("block weights sum to {sum}, not 1")));
        }
        for i in 0..k {
            for j in 0..k {
                let a = values[i * k + j];
                if !(0.0..=1.0).contains(&a) {
                    return Err(Error::Invalid(format!(
                        "value {a} at ({i}, {j}) outside [0, 1]"
                    )));
                }
                if a != values[j * k + i] {
                    return Err(Error::Invalid(format!(
                        "values not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { weights, values })
    }

    /// `k` equal-mass blocks with the given values.
    pub fn uniform(values: Vec<Vec<f64>>) -> Result<Self> {
        let k = values.len();
        Self::new(vec![1.0 / k as f64; k], values)
    }

    /// Constant kernel `c` as a single block.
    pub fn constant(c: f64) -> Result<Self> {
        Self::from_flat(vec![1.0], vec![c])
    }

    /// Constant kernel `c` on `k` equal blocks.
    pub fn constant_blocks(c: f64, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("need at least one block".into()));
        }
        Self::from_flat(vec![1.0 / k as f64; k], vec![c; k * k])
    }

    /// Internal constructor for values produced by trusted arithmetic; clamps to
    /// `[0, 1]` and symmetrises by averaging.
    pub(crate) fn from_parts_clamped(weights: Vec<f64>, mut values: Vec<f64>) -> Self {
        let k = weights.len();
        debug_assert_eq!(values.len(), k * k);
        for i in 0..k {
            for j in i..k {
                let a = 0.5 * (values[i * k + j] + values[j * k + i]);
                let a = a.clamp(0.0, 1.0);
                values[i * k + j] = a;
                values[j * k + i] = a;
            }
        }
        Self { weights, values }
    }

    /// The n-block embedding of a finite graph: `1` on cell `(i, j)` iff `ij`
    /// is an edge, uniform weights `1/n`.
    pub fn from_graph(g: &SimpleGraph) -> Result<Self> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(Error::Invalid("graph has no vertices".into()));
        }
        let mut values = vec![0.0; n * n];
        for (u, v) in g.edges() {
            values[u * n + v] = 1.0;
            values[v * n + u] = 1.0;
        }
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
            values,
        })
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row-major value matrix.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.k() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.k();
        &self.values[i * k..(i + 1) * k]
    }

    /// True when all blocks carry the same mass (up to rounding).
    pub fn has_uniform_weights(&self) -> bool {
        let w0 = 1.0 / self.k() as f64;
        self.weights.iter().all(|w| (w - w0).abs() <= 1e-14)
    }

    /// Right end points of the blocks; the last one is exactly 1.
    pub fn cut_points(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut cuts: Vec<f64> = self
            .weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        *cuts.last_mut().expect("k >= 1") = 1.0;
        cuts
    }

    /// Index of the block containing `x` in `[0, 1]`; block intervals are
    /// half-open on the right except the last.
    pub fn block_of(&self, x: f64) -> usize {
        let cuts = self.cut_points();
        cuts.iter().position(|&c| x < c).unwrap_or(self.k() - 1)
    }

    /// Evaluates the kernel at a point of the unit square.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.value(self.block_of(x), self.block_of(y))
    }

    /// `∫∫ f`.
    pub fn edge_density(&self) -> f64 {
        let k = self.k();
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                s += self.weights[i] * self.weights[j] * self.values[i * k + j];
            }
        }
        s
    }

    /// `∫∫ f^2`.
    pub fn square_density(&self) -> f64 {
        let k = self.k();
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                let a = self.values[i * k + j];
                s += self.weights[i] * self.weights[j] * a * a;
            }
        }
        s
    }

    /// Weighted co-degree matrix `m_ij = sum_l w_l a_il a_lj`.
    pub fn codegree_matrix(&self) -> Vec<f64> {
        codegree(&self.weights, &self.values)
    }

    /// Triangle density `T(f) = (1/6) ∫∫∫ f(x,y) f(y,z) f(z,x)`.
    pub fn triangle_density(&self) -> f64 {
        triangle_density_raw(&self.weights, &self.values)
    }

    /// Homomorphism density `t(H, f)`, summing over all block assignments of
    /// the pattern's vertices. Costs `O(k^|V(H)|)`.
    pub fn hom_density(&self, pattern: &SimpleGraph) -> Result<f64> {
        let h = pattern.vertex_count();
        if h > MAX_PATTERN_VERTICES {
            return Err(Error::Size(format!(
                "pattern has {h} vertices; at most {MAX_PATTERN_VERTICES} supported"
            )));
        }
        // Earlier neighbours of each pattern vertex, so each edge is charged once.
        let back: Vec<Vec<usize>> = (0..h)
            .map(|v| {
                pattern
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| u < v)
                    .collect()
            })
            .collect();
        let mut assignment = vec![0usize; h];
        Ok(self.hom_recurse(&back, &mut assignment, 0, 1.0))
    }

    fn hom_recurse(
        &self,
        back: &[Vec<usize>],
        assignment: &mut [usize],
        v: usize,
        acc: f64,
    ) -> f64 {
        if v == back.len() {
            return acc;
        }
        let mut total = 0.0;
        for b in 0..self.k() {
            let mut term = acc * self.weights[b];
            for &u in &back[v] {
                term *= self.value(assignment[u], b);
            }
            if term == 0.0 {
                continue;
            }
            assignment[v] = b;
            total += self.hom_recurse(back, assignment, v + 1, term);
        }
        total
    }

    /// Applies `op` to every value; the result is clamped to `[0, 1]`.
    pub fn map_values(&self, op: impl Fn(f64) -> f64) -> Self {
        Self::from_parts_clamped(
            self.weights.clone(),
            self.values.iter().map(|&a| op(a)).collect(),
        )
    }

    /// `f + δ(1 - f)`: pushes every value toward 1.
    pub fn mix_toward_one(&self, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(self.map_values(|a| a + delta * (1.0 - a)))
    }

    /// `(1 - δ) f + δ p`: pulls every value toward the base probability.
    pub fn mix_toward_p(&self, delta: f64, p: f64) -> Result<Self> {
        check_delta(delta)?;
        crate::error::check_p(p)?;
        Ok(self.map_values(|a| (1.0 - delta) * a + delta * p))
    }

    /// Relabels blocks: block `i` of the result is block `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let k = self.k();
        let mut seen = vec![false; k];
        if perm.len() != k
            || perm
                .iter()
                .any(|&p| p >= k || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Invalid("not a permutation of the blocks".into()));
        }
        let weights = perm.iter().map(|&p| self.weights[p]).collect();
        let mut values = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                values[i * k + j] = self.value(perm[i], perm[j]);
            }
        }
        Ok(Self { weights, values })
    }

    /// Re-expresses the kernel on a finer partition given by `cuts` (sorted
    /// right end points, last equal to 1, containing all of `self`'s cuts).
    fn refine_to(&self, cuts: &[f64]) -> Self {
        let own = self.cut_points();
        let mut map = Vec::with_capacity(cuts.len());
        let mut b = 0;
        let mut left = 0.0;
        for &c in cuts {
            let mid = 0.5 * (left + c);
            while b + 1 < own.len() && mid >= own[b] {
                b += 1;
            }
            map.push(b);
            left = c;
        }
        let weights = weights_from_cuts(cuts);
        let m = cuts.len();
        let mut values = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                values[i * m + j] = self.value(map[i], map[j]);
            }
        }
        Self { weights, values }
    }

    /// Averages the kernel onto `k` equal-mass blocks. Exact cell averages: the
    /// integral of the kernel over every new cell is preserved.
    pub fn resample_uniform(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("need at least one block".into()));
        }
        let own = self.cut_points();
        // overlap[a][i] = |new block a ∩ old block i|
        let mut overlap = vec![vec![0.0; self.k()]; k];
        let mut lo_old = 0.0;
        for (i, &hi_old) in own.iter().enumerate() {
            for (a, row) in overlap.iter_mut().enumerate() {
                let lo_new = a as f64 / k as f64;
                let hi_new = (a + 1) as f64 / k as f64;
                let len = hi_new.min(hi_old) - lo_new.max(lo_old);
                if len > 0.0 {
                    row[i] = len;
                }
            }
            lo_old = hi_old;
        }
        let scale = (k * k) as f64;
        let mut values = vec![0.0; k * k];
        for a in 0..k {
            for b in a..k {
                let mut s = 0.0;
                for (i, &oa) in overlap[a].iter().enumerate() {
                    if oa == 0.0 {
                        continue;
                    }
                    for (j, &ob) in overlap[b].iter().enumerate() {
                        if ob != 0.0 {
                            s += oa * ob * self.value(i, j);
                        }
                    }
                }
                values[a * k + b] = s * scale;
                values[b * k + a] = s * scale;
            }
        }
        Ok(Self::from_parts_clamped(vec![1.0 / k as f64; k], values))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&delta) {
        Ok(())
    } else {
        domain(format!("mixing weight δ = {delta} must lie in [0, 1]"))
    }
}

fn weights_from_cuts(cuts: &[f64]) -> Vec<f64> {
    let mut left = 0.0;
    cuts.iter()
        .map(|&c| {
            let w = c - left;
            left = c;
            w
        })
        .collect()
}

pub(crate) fn codegree(weights: &[f64], values: &[f64]) -> Vec<f64> {
    let k = weights.len();
    let mut m = vec![0.0; k * k];
    for i in 0..k {
        for l in 0..k {
            let ail = values[i * k + l] * weights[l];
            if ail == 0.0 {
                continue;
            }
            let row_l = &values[l * k..(l + 1) * k];
            let out = &mut m[i * k..(i + 1) * k];
            for (o, &alj) in out.iter_mut().zip(row_l) {
                *o += ail * alj;
            }
        }
    }
    m
}

pub(crate) fn triangle_density_raw(weights: &[f64], values: &[f64]) -> f64 {
    let k = weights.len();
    let m = codegree(weights, values);
    let mut s = 0.0;
    for i in 0..k {
        for j in 0..k {
            s += weights[i] * weights[j] * values[i * k + j] * m[i * k + j];
        }
    }
    s / 6.0
}

/// Re-expresses both graphons on the overlay of their block partitions.
pub fn common_refinement(f: &StepGraphon, g: &StepGraphon) -> Result<(StepGraphon, StepGraphon)> {
    if f.weights == g.weights {
        return Ok((f.clone(), g.clone()));
    }
    let mut cuts: Vec<f64> = f.cut_points();
    cuts.extend(g.cut_points());
    cuts.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::with_capacity(cuts.len());
    for c in cuts {
        match merged.last() {
            Some(&last) if c - last <= CUT_MERGE_TOL => {}
            _ => merged.push(c),
        }
    }
    *merged.last_mut().expect("non-empty") = 1.0;
    if merged.len() > MAX_REFINEMENT_BLOCKS {
        return Err(Error::Size(format!(
            "common refinement has {} blocks; cap is {MAX_REFINEMENT_BLOCKS}",
            merged.len()
        )));
    }
    Ok((f.refine_to(&merged), g.refine_to(&merged)))
}

/// `∫∫ |f - g|`.
pub fn l1_distance(f: &StepGraphon, g: &StepGraphon) -> Result<f64> {
    let (f, g) = common_refinement(f, g)?;
    let k = f.k();
    let w = f.weights();
    let mut s = 0.0;
    for i in 0..k {
        for j in 0..k {
            s += w[i] * w[j] * (f.value(i, j) - g.value(i, j)).abs();
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> StepGraphon {
        StepGraphon::from_graph(&SimpleGraph::complete(4)).unwrap()
    }

    fn chi_48() -> StepGraphon {
        StepGraphon::new(vec![0.5, 0.5], vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap()
    }

    #[test]
    fn construction_invariants() {
        assert!(StepGraphon::new(vec![0.5, 0.4], vec![vec![0.0; 2]; 2]).is_err());
        assert!(StepGraphon::new(vec![1.0, 0.0], vec![vec![0.0; 2]; 2]).is_err());
        assert!(StepGraphon::new(vec![0.5, 0.5], vec![vec![0.0, 0.1], vec![0.2, 0.0]]).is_err());
        assert!(StepGraphon::new(vec![0.5, 0.5], vec![vec![1.5, 0.0], vec![0.0, 0.0]]).is_err());
        assert!(StepGraphon::new(vec![1.0], vec![vec![0.3, 0.1]]).is_err());
    }

    #[test]
    fn from_graph_small_cases() {
        let single = StepGraphon::from_graph(&SimpleGraph::empty(1)).unwrap();
        assert_eq!(single.weights(), &[1.0]);
        assert_eq!(single.values(), &[0.0]);

        let k2 = StepGraphon::from_graph(&SimpleGraph::complete(2)).unwrap();
        assert_eq!(k2.weights(), &[0.5, 0.5]);
        assert_eq!(k2.values(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn from_graph_k4_matches_pointwise_grid() {
        // f^G(x, y) = 1 iff (ceil(nx), ceil(ny)) is an edge
        let f = k4();
        let g = SimpleGraph::complete(4);
        for a in 0..100 {
            for b in 0..100 {
                let x = (a as f64 + 0.5) / 100.0;
                let y = (b as f64 + 0.5) / 100.0;
                let (u, v) = ((x * 4.0) as usize, (y * 4.0) as usize);
                let expect = if g.has_edge(u, v) { 1.0 } else { 0.0 };
                assert_eq!(f.eval(x, y), expect);
            }
        }
    }

    #[test]
    fn triangle_density_examples() {
        let half = StepGraphon::constant(0.5).unwrap();
        assert!((half.triangle_density() - 1.0 / 48.0).abs() < 1e-15);
        assert!((chi_48().triangle_density() - 1.0 / 48.0).abs() < 1e-15);
        // K4 has 4 triangles: T = 4 / 4^3
        assert!((k4().triangle_density() - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn hom_density_examples() {
        let edge = SimpleGraph::complete(2);
        let tri = SimpleGraph::complete(3);
        let p = StepGraphon::constant(0.3).unwrap();
        assert!((p.hom_density(&edge).unwrap() - 0.3).abs() < 1e-15);
        // hom(K3, K4) = 4 * 3 * 2 = 24
        assert!((k4().hom_density(&tri).unwrap() - 24.0 / 64.0).abs() < 1e-15);
        let star = SimpleGraph::path(3);
        let half = StepGraphon::constant(0.5).unwrap();
        assert!((half.hom_density(&star).unwrap() - 0.25).abs() < 1e-15);
        let f = chi_48();
        assert!((f.hom_density(&tri).unwrap() - 6.0 * f.triangle_density()).abs() < 1e-15);
        assert!(matches!(
            f.hom_density(&SimpleGraph::empty(9)),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn mixing_examples() {
        let f = chi_48();
        assert_eq!(f.mix_toward_one(0.0).unwrap(), f);
        let ones = f.mix_toward_one(1.0).unwrap();
        assert!((ones.triangle_density() - 1.0 / 6.0).abs() < 1e-15);
        assert!(f.mix_toward_one(1.2).is_err());
        assert!(f.mix_toward_one(-0.1).is_err());

        let c = StepGraphon::constant(0.2).unwrap();
        let mixed = c.mix_toward_one(0.5).unwrap();
        assert!((mixed.value(0, 0) - 0.6).abs() < 1e-15);
        let lhs = mixed.triangle_density();
        let rhs = c.triangle_density() * (1.0 - 0.125) + 0.125 / 6.0;
        assert!((lhs - 0.036).abs() < 1e-15);
        assert!(lhs >= rhs);

        assert_eq!(f.mix_toward_p(0.0, 0.5).unwrap(), f);
        let flat = f.mix_toward_p(1.0, 0.5).unwrap();
        assert!(flat.values().iter().all(|&a| a == 0.5));
        assert!(f.mix_toward_p(0.3, 1.0).is_err());
    }

    #[test]
    fn refinement_examples() {
        let a = StepGraphon::constant(0.3).unwrap();
        let b = chi_48();
        let (ra, rb) = common_refinement(&a, &b).unwrap();
        assert_eq!(ra.weights(), &[0.5, 0.5]);
        assert_eq!(rb, b);
        assert!(ra.values().iter().all(|&v| v == 0.3));

        let c = StepGraphon::new(vec![0.3, 0.7], vec![vec![0.1, 0.2], vec![0.2, 0.3]]).unwrap();
        let (rc, rb) = common_refinement(&c, &b).unwrap();
        let w = rc.weights();
        assert_eq!(w.len(), 3);
        for (got, want) in w.iter().zip([0.3, 0.2, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(rc.weights(), rb.weights());
        assert_eq!(rc.value(1, 2), 0.3);
        assert_eq!(rb.value(0, 1), 1.0);
        assert_eq!(rb.value(1, 2), 0.0);

        let (x, y) = common_refinement(&b, &b).unwrap();
        assert_eq!((x, y), (b.clone(), b));
    }

    #[test]
    fn refinement_cap() {
        let n = 3000;
        let f = StepGraphon::from_graph(&SimpleGraph::empty(n)).unwrap();
        let g = StepGraphon::from_graph(&SimpleGraph::empty(n + 1)).unwrap();
        assert!(matches!(common_refinement(&f, &g), Err(Error::Size(_))));
    }

    #[test]
    fn l1_examples() {
        let f = chi_48();
        assert_eq!(l1_distance(&f, &f).unwrap(), 0.0);
        let one = StepGraphon::constant(1.0).unwrap();
        let zero = StepGraphon::constant(0.0).unwrap();
        assert_eq!(l1_distance(&one, &zero).unwrap(), 1.0);
        let diag = StepGraphon::uniform(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let half = StepGraphon::constant(0.5).unwrap();
        // four cells of mass 1/4, each off by 1/2
        assert!((l1_distance(&diag, &half).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn resample_preserves_integral() {
        let b = (6.0f64 * 0.1).cbrt();
        let chi = StepGraphon::new(vec![b, 1.0 - b], vec![vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        for k in [1, 3, 4, 7, 8] {
            let r = chi.resample_uniform(k).unwrap();
            assert!((r.edge_density() - b * b).abs() < 1e-14);
        }
        let r = chi_48().resample_uniform(4).unwrap();
        assert_eq!(r.value(0, 1), 1.0);
        assert_eq!(r.value(1, 2), 0.0);
    }

    #[test]
    fn permute_roundtrip() {
        let f = StepGraphon::new(
            vec![0.2, 0.3, 0.5],
            vec![
                vec![0.1, 0.2, 0.3],
                vec![0.2, 0.4, 0.5],
                vec![0.3, 0.5, 0.6],
            ],
        )
        .unwrap();
        let g = f.permute(&[2, 0, 1]).unwrap();
        assert_eq!(g.weights(), &[0.5, 0.2, 0.3]);
        assert_eq!(g.value(0, 1), 0.3);
        assert!((g.triangle_density() - f.triangle_density()).abs() < 1e-15);
        assert!(f.permute(&[0, 0, 1]).is_err());
    }

    #[test]
    fn json_shape() {
        let f = chi_48();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            text,
            r#"{"weights":[0.5,0.5],"values":[[1.0,0.0],[0.0,0.0]]}"#
        );
        let back: StepGraphon = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert!(
            serde_json::from_str::<StepGraphon>(r#"{"weights":[0.5],"values":[[1.0]]}"#).is_err()
        );
    }
}
