use graphon_ldp::sampler::triangle_threshold;
use graphon_ldp::*;
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut x = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[x] {
                        edges.push((i, j));
                    }
                    x += 1;
                }
            }
            SimpleGraph::from_edges(n, edges).unwrap()
        })
    })
}

fn symmetric(k: usize, upper: &[f64]) -> Vec<f64> {
    let mut values = vec![0.0; k * k];
    let mut x = 0;
    for i in 0..k {
        for j in i..k {
            values[i * k + j] = upper[x];
            values[j * k + i] = upper[x];
            x += 1;
        }
    }
    values
}

fn graphon_strategy(max_k: usize) -> impl Strategy<Value = StepGraphon> {
    (1..=max_k).prop_flat_map(|k| {
        (
            proptest::collection::vec(0.05f64..1.0, k),
            proptest::collection::vec(0.0f64..=1.0, k * (k + 1) / 2),
        )
            .prop_map(move |(w, upper)| {
                let total: f64 = w.iter().sum();
                let weights = w.iter().map(|x| x / total).collect();
                StepGraphon::from_flat(weights, symmetric(k, &upper)).unwrap()
            })
    })
}

fn uniform_graphon_strategy(min_k: usize, max_k: usize) -> impl Strategy<Value = StepGraphon> {
    (min_k..=max_k).prop_flat_map(|k| {
        proptest::collection::vec(0.0f64..=1.0, k * (k + 1) / 2).prop_map(move |upper| {
            StepGraphon::from_flat(vec![1.0 / k as f64; k], symmetric(k, &upper)).unwrap()
        })
    })
}

fn permutation_strategy(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..k).collect::<Vec<_>>()).prop_shuffle()
}

fn brute_force_hom(pattern: &SimpleGraph, g: &SimpleGraph) -> u64 {
    let (m, n) = (pattern.vertex_count(), g.vertex_count());
    let edges: Vec<(usize, usize)> = pattern.edges().collect();
    let mut count = 0;
    let mut map = vec![0; m];
    loop {
        if edges.iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
            count += 1;
        }
        let mut i = 0;
        while i < m {
            map[i] += 1;
            if map[i] < n {
                break;
            }
            map[i] = 0;
            i += 1;
        }
        if i == m {
            return count;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangle_count_matches_the_empirical_graphon(g in graph_strategy(50)) {
        let n = g.vertex_count() as f64;
        let t = StepGraphon::from_graph(&g).unwrap().triangle_density();
        let c = triangle_count(&g) as f64;
        prop_assert!((c - n * n * n * t).abs() < 1e-6 * (1.0 + c), "{c} vs {}", n * n * n * t);
    }

    #[test]
    fn hom_density_matches_brute_force(g in graph_strategy(12), h in graph_strategy(4)) {
        let n = g.vertex_count() as f64;
        let m = h.vertex_count() as i32;
        let density = StepGraphon::from_graph(&g).unwrap().hom_density(&h).unwrap();
        let count = brute_force_hom(&h, &g) as f64;
        prop_assert!((density * n.powi(m) - count).abs() < 1e-6 * (1.0 + count));
    }

    #[test]
    fn triangle_density_is_bounded_and_monotone(
        f in graphon_strategy(6),
        bump in proptest::collection::vec(0.0f64..0.5, 21),
    ) {
        let k = f.k();
        let t = f.triangle_density();
        prop_assert!((0.0..=1.0 / 6.0 + 1e-15).contains(&t));
        let mut upper = Vec::new();
        for i in 0..k {
            for j in i..k {
                upper.push((f.value(i, j) + bump[upper.len()]).min(1.0));
            }
        }
        let g = StepGraphon::from_flat(f.weights().to_vec(), symmetric(k, &upper)).unwrap();
        prop_assert!(g.triangle_density() >= t - 1e-15);
    }

    #[test]
    fn rate_is_convex_nonnegative_and_vanishes_only_at_p(
        p in 0.001f64..0.999,
        u in 0.0f64..=1.0,
        v in 0.0f64..=1.0,
        lambda in 0.0f64..=1.0,
    ) {
        let (iu, iv) = (ip_scalar(u, p).unwrap(), ip_scalar(v, p).unwrap());
        let mid = ip_scalar(lambda * u + (1.0 - lambda) * v, p).unwrap();
        prop_assert!(mid <= lambda * iu + (1.0 - lambda) * iv + 1e-12);
        prop_assert!(iu >= 0.0);
        prop_assert_eq!(ip_scalar(p, p).unwrap(), 0.0);
        if (u - p).abs() > 1e-6 {
            prop_assert!(iu > 0.0);
        }
    }

    #[test]
    fn rate_is_relabeling_invariant(
        (f, perm) in graphon_strategy(6).prop_flat_map(|f| {
            let k = f.k();
            (Just(f), permutation_strategy(k))
        }),
        p in 0.01f64..0.99,
    ) {
        let a = ip_graphon(&f, p).unwrap();
        let b = ip_graphon(&f.permute(&perm).unwrap(), p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn convex_minorant_is_a_convex_lower_bound(
        steps in proptest::collection::vec(0.01f64..1.0, 3..60),
        ys in proptest::collection::vec(-5.0f64..5.0, 60),
    ) {
        let mut xs = vec![0.0];
        for s in &steps {
            xs.push(xs.last().unwrap() + s);
        }
        let ys = &ys[..xs.len()];
        let hull = convex_minorant(&xs, ys).unwrap();
        for (h, y) in hull.iter().zip(ys) {
            prop_assert!(*h <= y + 1e-12);
        }
        for i in 1..xs.len() - 1 {
            let left = (hull[i] - hull[i - 1]) / (xs[i] - xs[i - 1]);
            let right = (hull[i + 1] - hull[i]) / (xs[i + 1] - xs[i]);
            prop_assert!(right >= left - 1e-9);
        }
        let again = convex_minorant(&xs, &hull).unwrap();
        for (a, b) in again.iter().zip(&hull) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn heuristic_cut_norm_never_exceeds_the_exact_value(
        f in uniform_graphon_strategy(1, 10),
        g in uniform_graphon_strategy(1, 10),
        seed in any::<u64>(),
    ) {
        prop_assume!(f.k() == g.k());
        let h = BlockKernel::difference(&f, &g).unwrap();
        let exact = cut_norm_exact(&h).unwrap();
        let heuristic = cut_norm_heuristic(&h, 4, seed);
        prop_assert!(!heuristic.exact);
        prop_assert!(heuristic.value <= exact.value + 1e-9);
        let witness = h.bilinear(&heuristic.s_set, &heuristic.t_set).abs();
        prop_assert!((witness - heuristic.value).abs() < 1e-12);
    }

    #[test]
    fn delta_cut_ignores_relabeling(
        (f, perm) in uniform_graphon_strategy(1, 8).prop_flat_map(|f| {
            let k = f.k();
            (Just(f), permutation_strategy(k))
        }),
    ) {
        let g = f.permute(&perm).unwrap();
        let d = delta_cut(&f, &g, DeltaCutOptions::default()).unwrap();
        prop_assert!(d.exact_search);
        prop_assert_eq!(d.value, 0.0);
    }

    #[test]
    fn cut_distance_is_invariant_under_simultaneous_relabeling(
        (f, g, perm) in (1usize..=8).prop_flat_map(|k| {
            (uniform_graphon_strategy(k, k), uniform_graphon_strategy(k, k), permutation_strategy(k))
        }),
    ) {
        let a = cut_distance(&f, &g).unwrap().value;
        let b = cut_distance(&f.permute(&perm).unwrap(), &g.permute(&perm).unwrap()).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn minorant_is_nondecreasing(p in 0.01f64..0.9) {
        let curve = minorant_curve(p, 2000).unwrap();
        let floor = trivial_threshold(p);
        for w in curve.windows(2) {
            let ((t0, _, a), (_, _, b)) = (w[0], w[1]);
            prop_assert!(b >= a - 1e-15, "p {p}: {a} -> {b} at t {t0}");
            if t0 >= 2.0 * floor {
                prop_assert!(b > a, "p {p}: flat at t {t0}");
            }
        }
    }

    #[test]
    fn solver_optima_are_feasible_and_beat_the_candidates(
        p in 0.05f64..0.6,
        frac in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let floor = trivial_threshold(p);
        let t = floor + frac * (1.0 / 6.0 - 1e-3 - floor);
        let opts = SolveOptions { blocks: 3, seed, random_starts: 2, ..SolveOptions::default() };
        let r = solve_phi(p, t, &opts).unwrap();
        prop_assert!((r.achieved_t - t).abs() <= 1e-6, "T = {} at t = {t}", r.achieved_t);
        prop_assert!((r.optimizer.triangle_density() - r.achieved_t).abs() < 1e-15);
        let c = ip_graphon(&candidate_constant(t).unwrap(), p).unwrap();
        let chi = ip_graphon(&candidate_clique(t).unwrap(), p).unwrap();
        prop_assert!(r.objective <= c.min(chi) + 1e-12);
    }
}

#[test]
fn solver_value_is_monotone_in_t() {
    let p: f64 = 0.2;
    let floor = trivial_threshold(p);
    let top = 1.0 / 6.0 - 1e-3;
    let opts = SolveOptions {
        blocks: 3,
        random_starts: 2,
        ..SolveOptions::default()
    };
    let values: Vec<f64> = (0..50)
        .map(|i| floor + (top - floor) * (i as f64 + 0.5) / 50.0)
        .map(|t| solve_phi(p, t, &opts).unwrap().objective)
        .collect();
    for (i, w) in values.windows(2).enumerate() {
        assert!(
            w[1] >= w[0] - 1e-8,
            "drop after grid point {i}: {} -> {}",
            w[0],
            w[1]
        );
    }
}

#[test]
fn doubling_the_blocks_never_hurts() {
    for (p, t) in [(0.05, 0.1), (0.2, 0.05), (0.02, 0.03)] {
        let coarse = solve_phi(p, t, &SolveOptions::with_blocks(2)).unwrap();
        let fine = solve_phi(p, t, &SolveOptions::with_blocks(4)).unwrap();
        assert!(
            fine.objective <= coarse.objective + 1e-8,
            "p {p} t {t}: K=4 {} vs K=2 {}",
            fine.objective,
            coarse.objective
        );
    }
}

#[test]
fn tilted_estimates_are_unbiased_at_tiny_sizes() {
    let cases = [
        (5, 0.3, 2.0 / 125.0, vec![vec![0.6, 0.3], vec![0.3, 0.5]]),
        (6, 0.5, 4.0 / 216.0, vec![vec![0.7, 0.5], vec![0.5, 0.6]]),
        (6, 0.2, 1.0 / 216.0, vec![vec![0.2]]),
    ];
    for (n, p, t, tilt) in cases {
        let exact = exact_tail(n, p, t).unwrap();
        let tilt = StepGraphon::uniform(tilt).unwrap();
        let runs: Vec<TailEstimate> = (0..10)
            .map(|seed| tilted_tail_estimate(n, p, t, &tilt, 4000, 1000 + seed).unwrap())
            .collect();
        let mean = runs.iter().map(|r| r.prob).sum::<f64>() / 10.0;
        let se = runs
            .iter()
            .map(|r| r.prob_std_error.powi(2))
            .sum::<f64>()
            .sqrt()
            / 10.0;
        assert!(
            (mean - exact).abs() <= 3.0 * se,
            "n {n}: {mean} ± {se} vs {exact}"
        );
        for r in &runs {
            assert!(
                (r.prob - exact).abs() <= 4.5 * r.prob_std_error,
                "n {n}: {} vs {exact}",
                r.prob
            );
        }
    }
}

#[test]
fn identity_tilt_weighs_every_draw_by_one() {
    let (n, p, t) = (10, 0.4, 0.01);
    let r = tilted_tail_estimate(n, p, t, &StepGraphon::constant(p).unwrap(), 3000, 5).unwrap();
    assert_eq!(r.mean_log_weight, 0.0);
    assert_eq!(r.prob, r.accepted as f64 / r.samples as f64);
    let threshold = triangle_threshold(n, t);
    let naive = (0..3000u64)
        .filter(|&s| {
            triangle_count(&sample_er(n, p, sampler::derive_seed(5, s)).unwrap()) >= threshold
        })
        .count();
    assert_eq!(r.accepted, naive);
}

#[test]
fn mean_log_weight_matches_the_entropy_cost() {
    let (n, p, t) = (20, 0.3, 0.001);
    let tilt = StepGraphon::uniform(vec![vec![0.7, 0.35], vec![0.35, 0.2]]).unwrap();
    let samples = 4000;
    let r = tilted_tail_estimate(n, p, t, &tilt, samples, 8).unwrap();
    let expected = -((n * n) as f64) * tilt_entropy_cost(n, p, &tilt).unwrap();
    // variance of one log weight is at most the pair count times the largest
    // per-edge variance
    let per_edge = tilt
        .values()
        .iter()
        .map(|&q| {
            let gap = (q / p).ln() - ((1.0 - q) / (1.0 - p)).ln();
            q * (1.0 - q) * gap * gap
        })
        .fold(0.0, f64::max);
    let sd = (per_edge * (n * (n - 1) / 2) as f64 / samples as f64).sqrt();
    assert!(
        (r.mean_log_weight - expected).abs() <= 5.0 * sd,
        "{} vs {expected} (sd {sd})",
        r.mean_log_weight
    );
}
