//! Cached Gauss-Legendre rules mapped to `[0, 1]`.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::legendre::GaussLegendre;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();

pub fn gauss_legendre_unit(order: usize) -> Arc<GaussRule> {
    let order = order.max(1);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry(order)
        .or_insert_with(|| {
            let n = NonZeroUsize::new(order).unwrap_or(NonZeroUsize::MIN);
            let rule = GaussLegendre::new(n);
            let (nodes, weights) = rule.as_node_weight_pairs().iter().map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w)).unzip();
            Arc::new(GaussRule { nodes, weights })
        })
        .clone()
}

/// Composite rule with `panels` equal panels on `[a, b]`.
pub fn integrate_fixed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, order: usize, panels: usize) -> f64 {
    let rule = gauss_legendre_unit(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        let part: f64 = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * f(lo + x * h)).sum();
        total += h * part;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for n in [2, 5, 16, 33] {
            let r = gauss_legendre_unit(n);
            assert_eq!(r.nodes.len(), n);
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(r.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
        }
    }

    #[test]
    fn exact_through_degree_2n_minus_1() {
        for n in [3usize, 8, 16] {
            let d = 2 * n as i32 - 1;
            let v = integrate_fixed(|x| x.powi(d), 0.0, 1.0, n, 1);
            assert!((v - 1.0 / (d as f64 + 1.0)).abs() < 1e-14);
        }
    }
}
