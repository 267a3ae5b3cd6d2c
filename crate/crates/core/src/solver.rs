//! Numerical solution of the triangle upper-tail variational problem
//!
//! ```text
//! φ(p, t) = inf { I_p(f) : T(f) >= t }
//! ```
//!
//! over block-constant graphons. The problem is nonconvex, so the solver runs
//! a deterministic multi-start and keeps the best feasible point. Every
//! reported value is the rate of an explicit feasible graphon and therefore an
//! upper bound on `φ` restricted to the search class.
//!
//! Two local methods are used:
//!
//! * **Fixed point.** First-order stationarity of `I_p(f) - β·T(f)` per cell
//!   reads `logit a_ij = logit p + β m_ij` with `m = A W A` the weighted
//!   co-degree matrix. The damped map is iterated for fixed `β`, and `β` is
//!   bisected until the limit's triangle density crosses `t`.
//! * **Projected gradient.** An augmented-Lagrangian penalty on `t - T(f)`
//!   with an increasing penalty schedule. Steps are taken in logit
//!   coordinates (the entropic mirror step), clamped to `[1e-12, 1 - 1e-12]`
//!   and accepted by Armijo backtracking. With unit step and no penalty the
//!   update coincides with the fixed-point map.
//!
//! Every local result is finally moved onto `T = t`: mixing toward `p` when the
//! constraint is slack (this never increases `I_p`), or toward 1 when it is
//! violated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cut::{delta_cut, DeltaCutOptions};
use crate::error::{check_p, domain, Error, Result};
use crate::graphon::{codegree, triangle_density_raw, StepGraphon};
use crate::rate::{ip, ip_graphon_unchecked, logit, sigmoid, trivial_threshold};

pub const MAX_BLOCKS: usize = 64;
/// Values are kept in `[CLAMP, 1 - CLAMP]` during optimisation.
pub const CLAMP: f64 = 1e-12;
pub const FIXED_POINT_DAMPING: f64 = 0.5;
pub const BETA_BRACKET: (f64, f64) = (0.0, 200.0);
pub const DEFAULT_PENALTY_SCHEDULE: [f64; 4] = [10.0, 1e2, 1e3, 1e4];
pub const DEFAULT_STAGE_ITERATIONS: usize = 2000;
pub const DEFAULT_RANDOM_STARTS: usize = 8;
/// Feasibility slack accepted on `T(f) >= t`.
pub const FEASIBILITY_TOL: f64 = 1e-8;
/// Two optimisers closer than this in `δ_□` count as the same local optimum.
pub const DISTINCT_OPTIMUM_GAP: f64 = 1e-3;

/// Relative sizes of the clique block tried around `(6t)^{1/3}`.
const CLIQUE_SCALES: [f64; 5] = [0.85, 0.93, 1.0, 1.04, 1.1];
/// Extra multiplier rounds run at the largest penalty.
const EXTRA_MULTIPLIER_ROUNDS: usize = 40;
const THETA_MAX: f64 = 27.631_021_115_928_547; // logit(1 - 1e-12)

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    FixedPoint,
    ProjectedGradient,
    CandidateConstant,
    CandidateClique,
}

/// Which local methods the multi-start runs. The two closed-form candidates
/// are always evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    All,
    FixedPoint,
    ProjectedGradient,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub blocks: usize,
    pub seed: u64,
    pub method: MethodChoice,
    pub random_starts: usize,
    pub penalty_schedule: Vec<f64>,
    pub stage_iterations: usize,
    /// Additional labelled starting graphons (any block structure).
    pub extra_starts: Vec<(String, StepGraphon)>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            blocks: 16,
            seed: 0,
            method: MethodChoice::All,
            random_starts: DEFAULT_RANDOM_STARTS,
            penalty_schedule: DEFAULT_PENALTY_SCHEDULE.to_vec(),
            stage_iterations: DEFAULT_STAGE_ITERATIONS,
            extra_starts: Vec::new(),
        }
    }
}

impl SolveOptions {
    pub fn with_blocks(blocks: usize) -> Self {
        Self {
            blocks,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StartOutcome {
    pub label: String,
    pub method: Method,
    pub objective: f64,
    pub achieved_t: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalOptimum {
    pub label: String,
    pub objective: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub p: f64,
    pub t: f64,
    pub optimizer: StepGraphon,
    pub objective: f64,
    pub achieved_t: f64,
    pub method: Method,
    pub converged: bool,
    pub iterations: usize,
    /// Start that produced the optimiser.
    pub start_label: String,
    pub multistart_log: Vec<StartOutcome>,
    /// Final points of all starts, pairwise more than `1e-3` apart in `δ_□`,
    /// ordered by objective.
    pub local_optima: Vec<LocalOptimum>,
}

/// `c_t ≡ (6t)^{1/3}`.
pub fn candidate_constant(t: f64) -> Result<StepGraphon> {
    if !(0.0..1.0 / 6.0).contains(&t) {
        return domain(format!("t = {t} must lie in [0, 1/6)"));
    }
    StepGraphon::constant((6.0 * t).cbrt().min(1.0))
}

/// `χ_t`: a clique on `[0, b]`, `b = (6t)^{1/3}`, and nothing else.
pub fn candidate_clique(t: f64) -> Result<StepGraphon> {
    if !(t > 0.0 && t < 1.0 / 6.0) {
        return domain(format!("t = {t} must lie in (0, 1/6)"));
    }
    clique_on(clique_mass(t))
}

fn clique_mass(t: f64) -> f64 {
    (6.0 * t).cbrt()
}

fn clique_on(b: f64) -> Result<StepGraphon> {
    if 1.0 - b <= 1e-15 {
        return StepGraphon::constant(1.0);
    }
    StepGraphon::new(vec![b, 1.0 - b], vec![vec![1.0, 0.0], vec![0.0, 0.0]])
}

/// Working representation: weights and a row-major symmetric value matrix.
#[derive(Debug, Clone)]
struct Point {
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl Point {
    fn from_graphon(g: &StepGraphon) -> Self {
        Self {
            weights: g.weights().to_vec(),
            values: g.values().to_vec(),
        }
    }

    fn k(&self) -> usize {
        self.weights.len()
    }

    fn objective(&self, p: f64) -> f64 {
        ip_graphon_unchecked(&self.weights, &self.values, p)
    }

    fn triangle(&self) -> f64 {
        triangle_density_raw(&self.weights, &self.values)
    }

    fn to_graphon(&self) -> StepGraphon {
        StepGraphon::from_parts_clamped(self.weights.clone(), self.values.clone())
    }

    fn mapped(&self, op: impl Fn(f64) -> f64) -> Self {
        Self {
            weights: self.weights.clone(),
            values: self.values.iter().map(|&a| op(a).clamp(0.0, 1.0)).collect(),
        }
    }
}

/// Moves `x` onto the constraint surface `T = t` while staying feasible.
fn repair(x: &Point, p: f64, t: f64) -> Point {
    let tri = x.triangle();
    if tri >= t && tri - t <= 1e-14 {
        return x.clone();
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    if tri < t {
        // smallest δ with T(f + δ(1 - f)) >= t
        let at = |d: f64| x.mapped(|a| a + d * (1.0 - a));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if at(mid).triangle() >= t {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-17 {
                break;
            }
        }
        at(hi)
    } else {
        // largest δ with T((1 - δ) f + δ p) >= t; δ = 1 gives p^3/6 < t
        let at = |d: f64| x.mapped(|a| (1.0 - d) * a + d * p);
        if at(1.0).triangle() >= t {
            return at(1.0);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if at(mid).triangle() >= t {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-17 {
                break;
            }
        }
        at(lo)
    }
}

struct LocalResult {
    point: Point,
    iterations: usize,
    converged: bool,
}

/// Augmented Lagrangian `I(a) + (max(0, λ - μ c)^2 - λ^2) / (2μ)` with
/// `c = T(a) - t`, minimised by mirror steps in logit coordinates.
fn projected_gradient(
    start: &Point,
    p: f64,
    t: f64,
    schedule: &[f64],
    stage_iters: usize,
) -> LocalResult {
    projected_gradient_traced(start, p, t, schedule, stage_iters, None)
}

/// As [`projected_gradient`], optionally recording the merit value before and
/// after every accepted step.
fn projected_gradient_traced(
    start: &Point,
    p: f64,
    t: f64,
    schedule: &[f64],
    stage_iters: usize,
    mut trace: Option<&mut Vec<(f64, f64)>>,
) -> LocalResult {
    let k = start.k();
    let w = &start.weights;
    let logit_p = logit(p);
    let mut a: Vec<f64> = start
        .values
        .iter()
        .map(|&v| v.clamp(CLAMP, 1.0 - CLAMP))
        .collect();
    let mut lambda = 0.0;
    let mut iterations = 0;
    let mut inner_converged = false;
    let mu_last = *schedule.last().unwrap_or(&1e4);
    let rounds = schedule
        .iter()
        .copied()
        .chain(std::iter::repeat_n(mu_last, EXTRA_MULTIPLIER_ROUNDS));

    let lagrangian = |a: &[f64], lambda: f64, mu: f64| -> (f64, f64, Vec<f64>) {
        let m = codegree(w, a);
        let mut tri = 0.0;
        for i in 0..k {
            for j in 0..k {
                tri += w[i] * w[j] * a[i * k + j] * m[i * k + j];
            }
        }
        let c = tri / 6.0 - t;
        let nu = (lambda - mu * c).max(0.0);
        let value = ip_graphon_unchecked(w, a, p) + (nu * nu - lambda * lambda) / (2.0 * mu);
        (value, c, m)
    };

    let mut last_c = f64::INFINITY;
    for (round, mu) in rounds.enumerate() {
        let mut eta: f64 = 1.0;
        let (mut value, mut c, mut m) = lagrangian(&a, lambda, mu);
        inner_converged = false;
        for _ in 0..stage_iters {
            iterations += 1;
            let nu = (lambda - mu * c).max(0.0);
            // natural gradient per cell: logit a - logit p - ν m
            let d: Vec<f64> = (0..k * k)
                .map(|x| logit(a[x]) - logit_p - nu * m[x])
                .collect();
            let stationarity: f64 = (0..k * k)
                .map(|x| w[x / k] * w[x % k] * a[x] * (1.0 - a[x]) * d[x] * d[x])
                .sum();
            if stationarity < 1e-26 {
                inner_converged = true;
                break;
            }
            eta = (eta * 2.0).min(1.0);
            let mut accepted = false;
            for _ in 0..50 {
                let trial: Vec<f64> = (0..k * k)
                    .map(|x| sigmoid((logit(a[x]) - eta * d[x]).clamp(-THETA_MAX, THETA_MAX)))
                    .collect();
                let (tv, tc, tm) = lagrangian(&trial, lambda, mu);
                // directional decrease predicted by the gradient w_i w_j d_ij / 2
                let predicted: f64 = (0..k * k)
                    .map(|x| w[x / k] * w[x % k] * 0.5 * d[x] * (a[x] - trial[x]))
                    .sum();
                if tv <= value - 1e-4 * predicted {
                    let small = value - tv <= 1e-16 * (1.0 + value.abs());
                    if let Some(tr) = trace.as_deref_mut() {
                        tr.push((value, tv));
                    }
                    a = trial;
                    value = tv;
                    c = tc;
                    m = tm;
                    accepted = true;
                    if small && stationarity < 1e-18 {
                        inner_converged = true;
                    }
                    break;
                }
                eta *= 0.5;
            }
            if !accepted || inner_converged {
                inner_converged = true;
                break;
            }
        }
        lambda = (lambda - mu * c).max(0.0);
        let done_schedule = round + 1 >= schedule.len();
        if done_schedule && inner_converged && (c.abs() < 1e-12 || (c > 0.0 && lambda == 0.0)) {
            last_c = c;
            break;
        }
        last_c = c;
    }
    let point = Point {
        weights: start.weights.clone(),
        values: a,
    };
    LocalResult {
        point,
        iterations,
        converged: inner_converged && (last_c.abs() < 1e-9 || last_c > 0.0),
    }
}

/// Limit of the damped map `a <- (1-d) a + d σ(logit p + β m(a))` from `start`.
fn fixed_point_at(start: &Point, p: f64, beta: f64, max_iter: usize) -> (Point, usize, bool) {
    let k = start.k();
    let logit_p = logit(p);
    let mut a = start.values.clone();
    for it in 1..=max_iter {
        let m = codegree(&start.weights, &a);
        let mut change: f64 = 0.0;
        for x in 0..k * k {
            let target = sigmoid(logit_p + beta * m[x]).clamp(CLAMP, 1.0 - CLAMP);
            let next = (1.0 - FIXED_POINT_DAMPING) * a[x] + FIXED_POINT_DAMPING * target;
            change = change.max((next - a[x]).abs());
            a[x] = next;
        }
        if change < 1e-14 {
            return (
                Point {
                    weights: start.weights.clone(),
                    values: a,
                },
                it,
                true,
            );
        }
    }
    (
        Point {
            weights: start.weights.clone(),
            values: a,
        },
        max_iter,
        false,
    )
}

/// Bisects `β` so that the fixed point reached from `start` has `T = t`.
fn fixed_point_method(start: &Point, p: f64, t: f64) -> LocalResult {
    const MAX_ITER: usize = 2000;
    let (mut lo, mut hi) = BETA_BRACKET;
    let mut iterations = 0;
    let (top, it, _) = fixed_point_at(start, p, hi, MAX_ITER);
    iterations += it;
    if top.triangle() < t {
        return LocalResult {
            point: top,
            iterations,
            converged: false,
        };
    }
    let mut best = top;
    let mut converged = false;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let (x, it, ok) = fixed_point_at(start, p, mid, MAX_ITER);
        iterations += it;
        let tri = x.triangle();
        if tri >= t {
            hi = mid;
            best = x;
            converged = ok;
            if tri - t < 1e-12 {
                break;
            }
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    // a jump in T(β) leaves the bracket collapsed with T far above t
    let gap = best.triangle() - t;
    LocalResult {
        point: best,
        iterations,
        converged: converged && gap < 1e-6,
    }
}

struct Start {
    label: String,
    point: Point,
    extra: bool,
}

fn equal_blocks(k: usize, value: impl Fn(usize, usize) -> f64) -> Point {
    let mut values = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let v = value(i, j).clamp(CLAMP, 1.0 - CLAMP);
            values[i * k + j] = v;
            values[j * k + i] = v;
        }
    }
    Point {
        weights: vec![1.0 / k as f64; k],
        values,
    }
}

/// `k` blocks refining `[0, b] ∪ [b, 1]`, clique on the first part.
fn padded_clique(k: usize, b: f64) -> Point {
    let inside = k.div_ceil(2);
    let outside = k - inside;
    let mut weights = vec![b / inside as f64; inside];
    weights.extend(std::iter::repeat_n((1.0 - b) / outside as f64, outside));
    let mut values = vec![CLAMP; k * k];
    for i in 0..inside {
        for j in 0..inside {
            values[i * k + j] = 1.0 - CLAMP;
        }
    }
    Point { weights, values }
}

fn build_starts(p: f64, t: f64, opts: &SolveOptions) -> Vec<Start> {
    let k = opts.blocks;
    let u = (6.0 * t).cbrt();
    let mut starts = vec![Start {
        label: "constant".into(),
        point: Point {
            weights: vec![1.0],
            values: vec![u.clamp(CLAMP, 1.0 - CLAMP)],
        },
        extra: false,
    }];
    if k >= 2 {
        for scale in CLIQUE_SCALES {
            let b = u * scale;
            if b > 0.02 && b < 0.999 {
                starts.push(Start {
                    label: if scale == 1.0 {
                        "clique".into()
                    } else {
                        format!("clique@{scale}")
                    },
                    point: padded_clique(k, b),
                    extra: false,
                });
            }
        }
        let half = k / 2;
        let across = (1.3 * u).min(0.999);
        starts.push(Start {
            label: "bipartite".into(),
            point: equal_blocks(k, |i, j| if (i < half) != (j < half) { across } else { p }),
            extra: false,
        });
        for r in 0..opts.random_starts {
            let mut rng = ChaCha8Rng::seed_from_u64(
                opts.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(r as u64 + 1)),
            );
            let mut cells = vec![0.0; k * k];
            for c in cells.iter_mut() {
                *c = rng.random_range(p.min(u)..=1.0);
            }
            starts.push(Start {
                label: format!("random{r}"),
                point: equal_blocks(k, |i, j| cells[i * k + j]),
                extra: false,
            });
        }
    }
    for (label, g) in &opts.extra_starts {
        starts.push(Start {
            label: label.clone(),
            point: Point::from_graphon(g),
            extra: true,
        });
    }
    starts
}

struct Candidate {
    label: String,
    method: Method,
    point: Point,
    objective: f64,
    achieved_t: f64,
    converged: bool,
    iterations: usize,
}

impl Candidate {
    fn new(
        label: String,
        method: Method,
        point: Point,
        p: f64,
        converged: bool,
        iterations: usize,
    ) -> Self {
        Self {
            objective: point.objective(p),
            achieved_t: point.triangle(),
            label,
            method,
            point,
            converged,
            iterations,
        }
    }
}

fn check_inputs(p: f64, t: f64, k: usize) -> Result<()> {
    check_p(p)?;
    if !(0.0..1.0 / 6.0).contains(&t) {
        return domain(format!("t = {t} must lie in [0, 1/6)"));
    }
    if k == 0 || k > MAX_BLOCKS {
        return Err(Error::Domain(format!(
            "blocks = {k} must lie in 1..={MAX_BLOCKS}"
        )));
    }
    Ok(())
}

/// Solves `φ(p, t)` over `K`-block graphons by multi-start local search.
pub fn solve_phi(p: f64, t: f64, opts: &SolveOptions) -> Result<SolveResult> {
    check_inputs(p, t, opts.blocks)?;
    if t <= trivial_threshold(p) {
        let optimizer = StepGraphon::constant(p)?;
        let achieved_t = optimizer.triangle_density();
        return Ok(SolveResult {
            p,
            t,
            optimizer,
            objective: 0.0,
            achieved_t,
            method: Method::CandidateConstant,
            converged: true,
            iterations: 0,
            start_label: "trivial".into(),
            multistart_log: vec![StartOutcome {
                label: "trivial".into(),
                method: Method::CandidateConstant,
                objective: 0.0,
                achieved_t,
                converged: true,
                iterations: 0,
            }],
            local_optima: vec![LocalOptimum {
                label: "trivial".into(),
                objective: 0.0,
            }],
        });
    }

    let mut candidates = vec![
        Candidate::new(
            "constant".into(),
            Method::CandidateConstant,
            Point::from_graphon(&candidate_constant(t)?),
            p,
            true,
            0,
        ),
        Candidate::new(
            "clique".into(),
            Method::CandidateClique,
            Point::from_graphon(&candidate_clique(t)?),
            p,
            true,
            0,
        ),
    ];

    let starts = build_starts(p, t, opts);
    let run_pg = matches!(
        opts.method,
        MethodChoice::All | MethodChoice::ProjectedGradient
    );
    let run_fp = matches!(opts.method, MethodChoice::All | MethodChoice::FixedPoint);
    let local: Vec<Vec<Candidate>> = starts
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            // caller-supplied starts are also scored as given, after repair
            if s.extra {
                out.push(Candidate::new(
                    s.label.clone(),
                    Method::ProjectedGradient,
                    repair(&s.point, p, t),
                    p,
                    true,
                    0,
                ));
            }
            if run_pg {
                let r = projected_gradient(
                    &s.point,
                    p,
                    t,
                    &opts.penalty_schedule,
                    opts.stage_iterations,
                );
                out.push(Candidate::new(
                    s.label.clone(),
                    Method::ProjectedGradient,
                    repair(&r.point, p, t),
                    p,
                    r.converged,
                    r.iterations,
                ));
            }
            if run_fp && (s.label == "constant" || s.label.starts_with("clique")) {
                let r = fixed_point_method(&s.point, p, t);
                out.push(Candidate::new(
                    s.label.clone(),
                    Method::FixedPoint,
                    repair(&r.point, p, t),
                    p,
                    r.converged,
                    r.iterations,
                ));
            }
            out
        })
        .collect();
    candidates.extend(local.into_iter().flatten());

    let best_idx = select_best(&candidates, t);
    let best = &candidates[best_idx];
    let optimizer = best.point.to_graphon();
    let local_optima = distinct_optima(&candidates, t);
    Ok(SolveResult {
        p,
        t,
        objective: ip_graphon_unchecked(optimizer.weights(), optimizer.values(), p),
        achieved_t: optimizer.triangle_density(),
        optimizer,
        method: best.method,
        converged: best.converged,
        iterations: best.iterations,
        start_label: best.label.clone(),
        multistart_log: candidates
            .iter()
            .map(|c| StartOutcome {
                label: c.label.clone(),
                method: c.method,
                objective: c.objective,
                achieved_t: c.achieved_t,
                converged: c.converged,
                iterations: c.iterations,
            })
            .collect(),
        local_optima,
    })
}

/// Lowest objective among feasible candidates; near-ties go to the earlier one.
fn select_best(candidates: &[Candidate], t: f64) -> usize {
    let mut best: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        if c.achieved_t < t - FEASIBILITY_TOL || !c.objective.is_finite() {
            continue;
        }
        match best {
            None => best = Some(i),
            Some(b) => {
                let ob = candidates[b].objective;
                if c.objective < ob - 1e-12 * (1.0 + ob.abs()) {
                    best = Some(i);
                }
            }
        }
    }
    // the closed-form candidates are always feasible
    best.unwrap_or(0)
}

fn distinct_optima(candidates: &[Candidate], t: f64) -> Vec<LocalOptimum> {
    let mut order: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].achieved_t >= t - FEASIBILITY_TOL)
        .collect();
    order.sort_by(|&a, &b| candidates[a].objective.total_cmp(&candidates[b].objective));
    let opts = DeltaCutOptions {
        blocks: Some(4),
        ..DeltaCutOptions::default()
    };
    let mut kept: Vec<(usize, StepGraphon)> = Vec::new();
    for i in order {
        let g = candidates[i].point.to_graphon();
        let new = kept.iter().all(|(_, h)| {
            delta_cut(&g, h, opts)
                .map(|d| d.value > DISTINCT_OPTIMUM_GAP)
                .unwrap_or(true)
        });
        if new {
            kept.push((i, g));
        }
    }
    kept.into_iter()
        .map(|(i, _)| LocalOptimum {
            label: format!("{}/{:?}", candidates[i].label, candidates[i].method),
            objective: candidates[i].objective,
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingCheck {
    pub phi_t: f64,
    /// `(t/s)^{1/3} φ̂(p, s)`.
    pub scaled_phi_s: f64,
    /// `phi_t < scaled_phi_s - 1e-6`.
    pub holds: bool,
}

/// Compares `φ̂(p, t)` with `(t/s)^{1/3} φ̂(p, s)` for `p^3/6 < t < s < 1/6`.
///
/// The solve at `t` is additionally started from `(1-δ) f_s + δ p` with
/// `(1-δ)^3 = t/s`, the feasible point the inequality is built from.
pub fn scaling_check(p: f64, t: f64, s: f64, opts: &SolveOptions) -> Result<ScalingCheck> {
    check_p(p)?;
    if !(trivial_threshold(p) < t && t < s && s < 1.0 / 6.0) {
        return domain(format!("need p^3/6 < t < s < 1/6, got t = {t}, s = {s}"));
    }
    let at_s = solve_phi(p, s, opts)?;
    let delta = 1.0 - (t / s).cbrt();
    let mixed = at_s.optimizer.mix_toward_p(delta, p)?;
    let mut opts_t = opts.clone();
    opts_t.extra_starts.push(("scaled-from-s".into(), mixed));
    let at_t = solve_phi(p, t, &opts_t)?;
    let scaled = (t / s).cbrt() * at_s.objective;
    Ok(ScalingCheck {
        phi_t: at_t.objective,
        scaled_phi_s: scaled,
        holds: at_t.objective < scaled - 1e-6,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallPRow {
    pub p: f64,
    pub phi: f64,
    /// `φ̂(p, t) / log(1/p)`.
    pub ratio: f64,
    /// `I_p(χ_t) / log(1/p)`.
    pub clique_ratio: f64,
    pub distance_to_clique: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallPTable {
    pub t: f64,
    /// `(6t)^{2/3} / 2`.
    pub target: f64,
    pub rows: Vec<SmallPRow>,
}

/// Tracks `φ̂(p, t) / log(1/p)` and the distance of the optimiser to `χ_t`
/// along a decreasing sequence of `p`.
pub fn small_p_limit_check(
    t: f64,
    p_list: &[f64],
    opts: &SolveOptions,
    resolution: usize,
) -> Result<SmallPTable> {
    if !(t > 0.0 && t < 1.0 / 6.0) {
        return domain(format!("t = {t} must lie in (0, 1/6)"));
    }
    let chi = candidate_clique(t)?;
    let b = clique_mass(t);
    let mut rows = Vec::with_capacity(p_list.len());
    for &p in p_list {
        check_p(p)?;
        if p >= b {
            return domain(format!("p = {p} must be below (6t)^(1/3) = {b}"));
        }
        let res = solve_phi(p, t, opts)?;
        let log_inv = (1.0 / p).ln();
        let clique_rate = b * b * ip(1.0, p) + (1.0 - b * b) * ip(0.0, p);
        let d = delta_cut(
            &res.optimizer,
            &chi,
            DeltaCutOptions {
                blocks: Some(resolution),
                ..DeltaCutOptions::default()
            },
        )?;
        rows.push(SmallPRow {
            p,
            phi: res.objective,
            ratio: res.objective / log_inv,
            clique_ratio: clique_rate / log_inv,
            distance_to_clique: d.value,
        });
    }
    Ok(SmallPTable {
        t,
        target: (6.0 * t).powf(2.0 / 3.0) / 2.0,
        rows,
    })
}
