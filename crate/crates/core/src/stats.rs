//! Random-walk hitting times, coupon-collector references and small
//! regression helpers.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::StatsError;
use crate::graph::UndirectedMultigraph;

/// Expected hitting times of the simple random walk on a multigraph.
#[derive(Clone, Debug, Serialize)]
pub struct HittingTimeTable {
    /// `h[s][t]`: expected moves from `s` until the walk first visits `t`.
    pub h: Vec<Vec<f64>>,
    pub max_hitting: f64,
}

fn connected(m: &UndirectedMultigraph) -> bool {
    let mut adj = vec![Vec::new(); m.n];
    for &(u, v) in &m.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; m.n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Solves `h(t) = 0`, `h(s) = 1 + sum_u w(s,u) h(u) / deg(s)` for every
/// target `t`, where `w` counts parallel edges.
pub fn hitting_times(m: &UndirectedMultigraph) -> Result<HittingTimeTable, StatsError> {
    let n = m.n;
    if n == 0 || !connected(m) {
        return Err(StatsError::Disconnected);
    }
    let w = m.multiplicity_matrix();
    let deg: Vec<f64> = w.iter().map(|row| row.iter().map(|&x| f64::from(x)).sum()).collect();
    let mut h = vec![vec![0.0; n]; n];
    #[allow(clippy::needless_range_loop)]
    for t in 0..n {
        let others: Vec<usize> = (0..n).filter(|&v| v != t).collect();
        if others.is_empty() {
            continue;
        }
        let k = others.len();
        let a = DMatrix::from_fn(k, k, |i, j| {
            let (s, u) = (others[i], others[j]);
            let p = f64::from(w[s][u]) / deg[s];
            if i == j {
                1.0 - p
            } else {
                -p
            }
        });
        let x = a.lu().solve(&DVector::from_element(k, 1.0)).ok_or(StatsError::Singular)?;
        for (i, &s) in others.iter().enumerate() {
            h[s][t] = x[i];
        }
    }
    let max_hitting = h.iter().flatten().copied().fold(0.0, f64::max);
    Ok(HittingTimeTable { h, max_hitting })
}

/// Expected draws to see all `types` equally likely coupons: `types * H_types`.
pub fn coupon_collector_expect(types: usize) -> f64 {
    let harmonic: f64 = (1..=types).map(|i| 1.0 / i as f64).sum();
    types as f64 * harmonic
}

/// Least-squares slope of `ln(mean)` against `ln(n)`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64, StatsError> {
    if points.len() < 3 {
        return Err(StatsError::TooFewPoints { needed: 3, got: points.len() });
    }
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(StatsError::NonPositive(x, y));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (mean(&xs), mean(&ys));
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(StatsError::Singular);
    }
    Ok(sxy / sxx)
}

/// Arithmetic mean; `NaN` for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero below two samples.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}
