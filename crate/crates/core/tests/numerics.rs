use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cliqueid::graph::{generate, GraphKind, UndirectedMultigraph};
use cliqueid::scheduler::expected_round_length_check;
use cliqueid::stats::{coupon_collector_expect, hitting_times, loglog_slope};

/// Monte-Carlo hitting time with its standard error. Each move picks one
/// incident edge uniformly, so parallel edges weigh proportionally.
fn walk_estimate(m: &UndirectedMultigraph, s: usize, t: usize, walks: usize, seed: u64) -> (f64, f64) {
    let mut incident = vec![Vec::new(); m.n];
    for &(u, v) in &m.edges {
        incident[u].push(v);
        incident[v].push(u);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<f64> = (0..walks)
        .map(|_| {
            let (mut at, mut moves) = (s, 0u64);
            while at != t {
                at = incident[at][rng.random_range(0..incident[at].len())];
                moves += 1;
            }
            moves as f64
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / walks as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (walks - 1) as f64;
    (mean, (var / walks as f64).sqrt())
}

#[test]
fn complete_three_hitting_time_is_two() {
    let m = generate(GraphKind::Complete, 3, 0).unwrap().to_undirected_multigraph();
    let table = hitting_times(&m).unwrap();
    for s in 0..3 {
        for t in 0..3 {
            let want = if s == t { 0.0 } else { 2.0 };
            assert!((table.h[s][t] - want).abs() < 1e-9);
        }
    }
    let (est, _) = walk_estimate(&m, 0, 1, 100_000, 1);
    assert!((est - 2.0).abs() / 2.0 < 0.02, "estimate {est}");
}

#[test]
fn four_cycle_antipodal_hitting_time_is_four() {
    let m = UndirectedMultigraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
    let table = hitting_times(&m).unwrap();
    assert!((table.max_hitting - 4.0).abs() < 1e-9);
    assert!((table.h[0][2] - 4.0).abs() < 1e-9);
    let (est, _) = walk_estimate(&m, 0, 2, 100_000, 2);
    assert!((est - 4.0).abs() / 4.0 < 0.02, "estimate {est}");
}

#[test]
fn solver_agrees_with_walks_on_fixtures() {
    let fixtures = [
        generate(GraphKind::StarBidir, 5, 0).unwrap(),
        generate(GraphKind::DirectedLine, 5, 0).unwrap(),
        generate(GraphKind::DirectedRing, 6, 0).unwrap(),
        generate(GraphKind::RandomWeaklyConnected, 6, 3).unwrap(),
        generate(GraphKind::NearCompleteMinusOneArc, 4, 5).unwrap(),
    ];
    for (i, g) in fixtures.iter().enumerate() {
        let m = g.to_undirected_multigraph();
        let table = hitting_times(&m).unwrap();
        for (s, t) in [(0, g.n() - 1), (g.n() - 1, 0), (1, 2)] {
            let (est, se) = walk_estimate(&m, s, t, 40_000, i as u64);
            assert!(
                (est - table.h[s][t]).abs() <= 3.0 * se,
                "fixture {i} h({s},{t}) = {} vs {est} ± {se}",
                table.h[s][t]
            );
        }
    }
}

#[test]
fn coupon_reference_matches_round_lengths() {
    for (n, arcs) in [(2, 2), (3, 6), (4, 12)] {
        let g = generate(GraphKind::Complete, n, 0).unwrap();
        assert_eq!(g.arc_count(), arcs);
        let expect = coupon_collector_expect(arcs);
        let got = expected_round_length_check(&g, 50_000, 9);
        assert!((got - expect).abs() / expect <= 0.05, "|E| = {arcs}: {got} vs {expect}");
    }
}

#[test]
fn slope_of_cube_times_log() {
    let pts: Vec<(f64, f64)> = [8.0f64, 16.0, 32.0, 64.0].iter().map(|&n| (n, n.powi(3) * n.ln())).collect();
    // closed form: 3 + the slope of ln(ln n) over the same points
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let mx = xs.iter().sum::<f64>() / 4.0;
    let my = ys.iter().sum::<f64>() / 4.0;
    let extra = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let slope = loglog_slope(&pts).unwrap();
    assert!((slope - (3.0 + extra)).abs() < 1e-9);
    assert!((slope - 3.3).abs() < 0.05, "slope {slope}");
}
