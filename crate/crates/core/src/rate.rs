//! Entropy rate function and the replica-symmetry test for triangle tails.
//!
//! `I_p(u) = ½ u log(u/p) + ½ (1-u) log((1-u)/(1-p))` is the per-edge relative
//! entropy (with the ½ convention for unordered pairs). Integrated over a
//! graphon it gives the large-deviation rate `I_p(f)`.
//!
//! The curve `h_p(t) = I_p((6t)^{1/3})` (zero for `t <= p^3/6`) is the cost of
//! the constant graphon with triangle density `t`. Wherever `h_p` touches its
//! convex minorant, the constant graphon is the unique minimiser of the
//! triangle upper-tail problem; [`classify_phase`] evaluates that test on a
//! grid.

use serde::Serialize;

use crate::error::{check_p, domain, Error, Result};
use crate::graphon::StepGraphon;

/// Right end of the sampled `t` domain is `1/6 - T_DOMAIN_EPS`.
pub const T_DOMAIN_EPS: f64 = 1e-6;
/// Default relative tolerance of the `h == ĥ` test.
pub const DEFAULT_PHASE_TOL: f64 = 1e-9;
/// Default number of hull samples.
pub const DEFAULT_GRID_SIZE: usize = 20_000;

/// `x log(x / y)` with `0 log 0 = 0`, accurate for `x` close to `y`.
fn xlogxy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * ((x - y) / y).ln_1p()
    }
}

/// Unchecked `I_p(u)`.
#[inline]
pub(crate) fn ip(u: f64, p: f64) -> f64 {
    0.5 * (xlogxy(u, p) + xlogxy(1.0 - u, 1.0 - p))
}

#[inline]
pub(crate) fn logit(u: f64) -> f64 {
    (u / (1.0 - u)).ln()
}

#[inline]
pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// The scalar rate function `I_p(u)` for `u ∈ [0, 1]`, `p ∈ (0, 1)`.
pub fn ip_scalar(u: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..=1.0).contains(&u) {
        return domain(format!("u = {u} must lie in [0, 1]"));
    }
    Ok(ip(u, p))
}

/// `I_p(f) = Σ_ij w_i w_j I_p(a_ij)`, exact for step graphons.
pub fn ip_graphon(f: &StepGraphon, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(ip_graphon_unchecked(f.weights(), f.values(), p))
}

pub(crate) fn ip_graphon_unchecked(weights: &[f64], values: &[f64], p: f64) -> f64 {
    let k = weights.len();
    let mut s = 0.0;
    for i in 0..k {
        let mut row = 0.0;
        for j in 0..k {
            row += weights[j] * ip(values[i * k + j], p);
        }
        s += weights[i] * row;
    }
    s
}

/// Triangle density at which the constant graphon equals `p`.
pub fn trivial_threshold(p: f64) -> f64 {
    p * p * p / 6.0
}

/// `h_p(t)`: rate of the constant graphon with triangle density `t`.
pub fn h_p(t: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..1.0 / 6.0).contains(&t) {
        return domain(format!("t = {t} must lie in [0, 1/6)"));
    }
    Ok(h_unchecked(t, p))
}

fn h_unchecked(t: f64, p: f64) -> f64 {
    if t <= trivial_threshold(p) {
        0.0
    } else {
        ip((6.0 * t).cbrt().min(1.0), p)
    }
}

/// Lower convex hull of `(xs, ys)` as indices into the input, via the
/// monotone-chain sweep. Collinear interior points are dropped.
fn lower_hull(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // keep b only if it lies strictly below the chord a -> i
            let cross = (ys[b] - ys[a]) * (xs[i] - xs[a]) - (ys[i] - ys[a]) * (xs[b] - xs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

fn check_grid(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::Invalid("x and y grids differ in length".into()));
    }
    if xs.len() < 3 {
        return domain("convex minorant needs at least 3 points");
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return domain("x grid must be strictly increasing");
    }
    if ys.iter().any(|y| !y.is_finite()) {
        return domain("y values must be finite");
    }
    Ok(())
}

/// Convex minorant of sampled values: the lower convex hull evaluated on the
/// same grid, linear between hull vertices.
pub fn convex_minorant(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    check_grid(xs, ys)?;
    Ok(Minorant::build(xs, ys).values)
}

/// Hull vertices plus the minorant evaluated on the grid.
struct Minorant {
    vertices: Vec<usize>,
    values: Vec<f64>,
}

impl Minorant {
    fn build(xs: &[f64], ys: &[f64]) -> Self {
        let vertices = lower_hull(xs, ys);
        let mut values = vec![0.0; xs.len()];
        for seg in vertices.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let slope = (ys[b] - ys[a]) / (xs[b] - xs[a]);
            values[a] = ys[a];
            for i in a + 1..b {
                values[i] = (ys[a] + slope * (xs[i] - xs[a])).min(ys[i]);
            }
        }
        let last = *vertices.last().expect("non-empty");
        values[last] = ys[last];
        Self { vertices, values }
    }

    /// Left and right supporting slopes at grid index `i`.
    fn slopes_at(&self, xs: &[f64], ys: &[f64], i: usize) -> (Option<f64>, Option<f64>) {
        let slope = |a: usize, b: usize| (ys[b] - ys[a]) / (xs[b] - xs[a]);
        match self.vertices.binary_search(&i) {
            Ok(pos) => {
                let left = (pos > 0).then(|| slope(self.vertices[pos - 1], i));
                let right =
                    (pos + 1 < self.vertices.len()).then(|| slope(i, self.vertices[pos + 1]));
                (left, right)
            }
            Err(pos) => {
                // strictly inside a hull segment
                let s = slope(self.vertices[pos - 1], self.vertices[pos]);
                (Some(s), Some(s))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    /// `t <= p^3/6`: the tail event is typical, rate zero.
    TrivialZero,
    /// `h_p(t) = ĥ_p(t)`: the constant graphon is the unique optimiser.
    ReplicaSymmetric,
    /// `h_p(t) > ĥ_p(t)`: the hull criterion does not certify the constant.
    Broken,
    /// Within the tolerance band, or at a grid point adjacent to a broken one.
    Boundary,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::TrivialZero => "trivial",
            Phase::ReplicaSymmetric => "rs",
            Phase::Broken => "broken",
            Phase::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub p: f64,
    pub t: f64,
    pub h: f64,
    pub h_hat: f64,
    /// Supporting-line slope at `t`: mean of the left and right hull slopes.
    pub beta: Option<f64>,
    /// `(left, right)` hull slopes at `t`.
    pub beta_range: Option<(f64, f64)>,
    pub phase: Phase,
}

/// Sample abscissae for the hull of `h_p`.
///
/// Near `p^3/6`, `h_p` grows like `(t - p^3/6)^2 / p^5`, so at small `p` the
/// replica-symmetric flank above the trivial threshold is extremely narrow in
/// `t` (about `7e-10` wide for `p = 0.01`), and the flank below `1/6` is about
/// `5e-5` wide. The grid is the union of uniform-in-`t`, uniform-in-`u`
/// (`u = (6t)^{1/3}`) and the two geometric families of [`phase_t_grid`],
/// plus `0`, `p^3/6`, `1/6 - ε` and any requested points.
pub fn hull_grid(p: f64, grid_size: usize, extra: &[f64]) -> Vec<f64> {
    let t_max = 1.0 / 6.0 - T_DOMAIN_EPS;
    let u_max = (6.0 * t_max).cbrt();
    let t0 = trivial_threshold(p);
    let per = (grid_size / 4).max(2);
    let mut ts = Vec::with_capacity(4 * per + extra.len() + 3);
    ts.push(0.0);
    ts.push(t0);
    ts.push(t_max);
    let to_t = |u: f64| u * u * u / 6.0;
    for i in 0..per {
        let s = i as f64 / (per - 1) as f64;
        ts.push(s * t_max);
        ts.push(to_t(p + s * (u_max - p)));
    }
    ts.extend(two_sided_geometric(p, 2 * per));
    ts.extend(extra.iter().copied().filter(|t| (0.0..=t_max).contains(t)));
    ts.retain(|t| (0.0..=t_max).contains(t));
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// Half the points geometric in `t - p^3/6` (from `1e-8 · p^3/6` up to the
/// midpoint of the domain), half geometric in `1/6 - t` (from `ε` down to the
/// midpoint).
fn two_sided_geometric(p: f64, count: usize) -> Vec<f64> {
    let t0 = trivial_threshold(p);
    let top = 1.0 / 6.0;
    let mid = 0.5 * (t0 + top);
    let left = count / 2;
    let right = count - left;
    let geometric = |lo: f64, hi: f64, k: usize, i: usize| {
        if k < 2 {
            return hi;
        }
        let s = i as f64 / (k - 1) as f64;
        (lo.ln() + s * (hi.ln() - lo.ln())).exp()
    };
    let mut ts = Vec::with_capacity(count);
    for i in 0..left {
        ts.push(t0 + geometric(t0 * 1e-8, mid - t0, left, i));
    }
    for i in 0..right {
        ts.push(top - geometric(T_DOMAIN_EPS, top - mid, right, right - 1 - i));
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// `t`-grid of `count` points for phase scans: geometric in the distance to
/// `p^3/6` on the lower half and to `1/6` on the upper half, so both
/// replica-symmetric flanks are sampled at every `p`.
pub fn phase_t_grid(p: f64, count: usize) -> Result<Vec<f64>> {
    check_p(p)?;
    if count < 2 {
        return domain("t grid needs at least 2 points");
    }
    Ok(two_sided_geometric(p, count))
}

/// Classifies one `t` against a shared hull.
struct HullContext {
    p: f64,
    tol: f64,
    ts: Vec<f64>,
    hs: Vec<f64>,
    minorant: Minorant,
}

impl HullContext {
    fn new(p: f64, grid_size: usize, extra: &[f64], tol: f64) -> Self {
        let ts = hull_grid(p, grid_size, extra);
        let hs: Vec<f64> = ts.iter().map(|&t| h_unchecked(t, p)).collect();
        let minorant = Minorant::build(&ts, &hs);
        Self {
            p,
            tol,
            ts,
            hs,
            minorant,
        }
    }

    fn band(&self, i: usize) -> f64 {
        self.tol * (1.0 + self.hs[i].abs())
    }

    fn gap(&self, i: usize) -> f64 {
        self.hs[i] - self.minorant.values[i]
    }

    fn classify(&self, t: f64) -> PhasePoint {
        let p = self.p;
        if t <= trivial_threshold(p) {
            return PhasePoint {
                p,
                t,
                h: 0.0,
                h_hat: 0.0,
                beta: None,
                beta_range: None,
                phase: Phase::TrivialZero,
            };
        }
        let i = self
            .ts
            .binary_search_by(|x| x.total_cmp(&t))
            .expect("query points are inserted into the grid");
        let gap = self.gap(i);
        let band = self.band(i);
        let neighbour_broken = [i.checked_sub(1), Some(i + 1)]
            .into_iter()
            .flatten()
            .filter(|&j| j < self.ts.len() && self.ts[j] > trivial_threshold(p))
            .any(|j| self.gap(j) > self.band(j));
        let phase = if gap <= band {
            if neighbour_broken {
                Phase::Boundary
            } else {
                Phase::ReplicaSymmetric
            }
        } else if gap <= 10.0 * band {
            Phase::Boundary
        } else {
            Phase::Broken
        };
        let (left, right) = self.minorant.slopes_at(&self.ts, &self.hs, i);
        let (beta, beta_range) = if gap <= band {
            match (left, right) {
                (Some(l), Some(r)) => (Some(0.5 * (l + r)), Some((l, r))),
                (Some(l), None) => (Some(l), Some((l, l))),
                (None, Some(r)) => (Some(r), Some((r, r))),
                (None, None) => (None, None),
            }
        } else {
            (None, None)
        };
        PhasePoint {
            p,
            t,
            h: self.hs[i],
            h_hat: self.minorant.values[i].min(self.hs[i]),
            beta,
            beta_range,
            phase,
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if (0.0..1.0 / 6.0).contains(&t) {
        Ok(())
    } else {
        domain(format!("t = {t} must lie in [0, 1/6)"))
    }
}

/// Replica-symmetry test at `(p, t)` using `grid_size` samples of `h_p`.
/// `tol` is the relative width of the `h == ĥ` band.
pub fn classify_phase(p: f64, t: f64, grid_size: usize, tol: f64) -> Result<PhasePoint> {
    check_p(p)?;
    check_t(t)?;
    if grid_size < 1000 {
        return domain(format!("grid_size = {grid_size} must be at least 1000"));
    }
    if t > 1.0 / 6.0 - T_DOMAIN_EPS {
        return domain(format!(
            "t = {t} lies beyond the sampled domain 1/6 - {T_DOMAIN_EPS}"
        ));
    }
    Ok(HullContext::new(p, grid_size, &[t], tol).classify(t))
}

/// Samples `h_p` and its convex minorant on the hull grid.
pub fn minorant_curve(p: f64, grid_size: usize) -> Result<Vec<(f64, f64, f64)>> {
    check_p(p)?;
    let ctx = HullContext::new(p, grid_size, &[], DEFAULT_PHASE_TOL);
    Ok(ctx
        .ts
        .iter()
        .zip(&ctx.hs)
        .zip(&ctx.minorant.values)
        .map(|((&t, &h), &hh)| (t, h, hh.min(h)))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseRow {
    pub p: f64,
    pub points: Vec<PhasePoint>,
    /// Replica-symmetric points on both sides of a broken run.
    pub double_transition: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagram {
    pub rows: Vec<PhaseRow>,
}

/// Detects an RS, Broken, RS sequence in `t` order; boundary and trivial
/// labels are skipped.
pub fn has_double_transition(points: &[PhasePoint]) -> bool {
    let mut state = 0;
    for pt in points {
        state = match (state, pt.phase) {
            (0, Phase::ReplicaSymmetric) => 1,
            (1, Phase::Broken) => 2,
            (2, Phase::ReplicaSymmetric) => return true,
            (s, _) => s,
        };
    }
    false
}

/// Classifies every `(p, t)` pair. Rows are processed in parallel; each row
/// shares one hull.
pub fn phase_diagram(
    p_grid: &[f64],
    t_grid: &[f64],
    tol: f64,
    grid_size: usize,
) -> Result<PhaseDiagram> {
    use rayon::prelude::*;
    for &p in p_grid {
        check_p(p)?;
    }
    for &t in t_grid {
        check_t(t)?;
        if t > 1.0 / 6.0 - T_DOMAIN_EPS {
            return domain(format!("t = {t} lies beyond the sampled domain"));
        }
    }
    let mut ts = t_grid.to_vec();
    ts.sort_by(f64::total_cmp);
    let rows = p_grid
        .par_iter()
        .map(|&p| {
            let ctx = HullContext::new(p, grid_size, &ts, tol);
            let points: Vec<PhasePoint> = ts.iter().map(|&t| ctx.classify(t)).collect();
            PhaseRow {
                p,
                double_transition: has_double_transition(&points),
                points,
            }
        })
        .collect();
    Ok(PhaseDiagram { rows })
}
