//! Simulated binary crossover and polynomial mutation, both bounded.

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationParams {
    pub crossover_prob: f64,
    pub crossover_eta: f64,
    /// Per-gene mutation probability.
    pub mutation_prob: f64,
    pub mutation_eta: f64,
}

impl VariationParams {
    /// Crossover 0.9 with index 20, mutation `1 / n` with index 20.
    pub fn standard(variables: usize) -> Self {
        VariationParams {
            crossover_prob: 0.9,
            crossover_eta: 20.0,
            mutation_prob: 1.0 / variables.max(1) as f64,
            mutation_eta: 20.0,
        }
    }
}

/// Offspring for consecutive parent pairs `(0, 1), (2, 3), ...`. An odd
/// trailing parent is only mutated.
pub fn variation<R: Rng>(
    parents: &[Vec<f64>],
    bounds: &[(f64, f64)],
    params: &VariationParams,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(parents.len());
    for pair in parents.chunks(2) {
        if let [a, b] = pair {
            let (mut c1, mut c2) = sbx(a, b, bounds, params, rng);
            mutate(&mut c1, bounds, params, rng);
            mutate(&mut c2, bounds, params, rng);
            out.push(c1);
            out.push(c2);
        } else {
            let mut c = pair[0].clone();
            mutate(&mut c, bounds, params, rng);
            out.push(c);
        }
    }
    out
}

fn spread(u: f64, alpha: f64, eta: f64) -> f64 {
    if u <= 1.0 / alpha {
        (u * alpha).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
    }
}

pub fn sbx<R: Rng>(
    a: &[f64],
    b: &[f64],
    bounds: &[(f64, f64)],
    params: &VariationParams,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    if params.crossover_prob <= 0.0 || rng.gen::<f64>() > params.crossover_prob {
        return (c1, c2);
    }
    let eta = params.crossover_eta;
    for i in 0..a.len() {
        if rng.gen::<f64>() > 0.5 || (a[i] - b[i]).abs() <= 1e-14 {
            continue;
        }
        let (lo, hi) = bounds[i];
        let y1 = a[i].min(b[i]);
        let y2 = a[i].max(b[i]);
        let u: f64 = rng.gen();
        let beta = 1.0 + 2.0 * (y1 - lo) / (y2 - y1);
        let alpha = 2.0 - beta.powf(-(eta + 1.0));
        let low = 0.5 * ((y1 + y2) - spread(u, alpha, eta) * (y2 - y1));
        let beta = 1.0 + 2.0 * (hi - y2) / (y2 - y1);
        let alpha = 2.0 - beta.powf(-(eta + 1.0));
        let high = 0.5 * ((y1 + y2) + spread(u, alpha, eta) * (y2 - y1));
        let (low, high) = (low.clamp(lo, hi), high.clamp(lo, hi));
        if rng.gen::<f64>() <= 0.5 {
            c1[i] = high;
            c2[i] = low;
        } else {
            c1[i] = low;
            c2[i] = high;
        }
    }
    (c1, c2)
}

pub fn mutate<R: Rng>(x: &mut [f64], bounds: &[(f64, f64)], params: &VariationParams, rng: &mut R) {
    if params.mutation_prob <= 0.0 {
        return;
    }
    let eta = params.mutation_eta;
    let power = 1.0 / (eta + 1.0);
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        if rng.gen::<f64>() > params.mutation_prob || hi <= lo {
            continue;
        }
        let d1 = (*v - lo) / (hi - lo);
        let d2 = (hi - *v) / (hi - lo);
        let u: f64 = rng.gen();
        let dq = if u <= 0.5 {
            let val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            val.powf(power) - 1.0
        } else {
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - val.powf(power)
        };
        *v = (*v + dq * (hi - lo)).clamp(lo, hi);
    }
}
