//! Derivative-free search primitives.
//!
//! Golden-section line search for 1-D maximization, a Nelder-Mead simplex
//! with shrinking restarts plus a coordinate-wise polish for the low-
//! dimensional angle problems, and a Halton sequence for deterministic,
//! seed-shiftable multi-start.

/// (1 + sqrt 5)/2.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_894_8;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal function on [lo, hi] to within `xtol` in the
/// argument. Returns (argmax, max).
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // Each iteration shrinks the bracket by 1/phi; cap generously.
    for _ in 0..400 {
        if b - a <= xtol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Element `index` of the van der Corput sequence in the given base;
/// `index` starts at 0. Dimensions pair this with distinct prime bases.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut fraction = 1.0;
    let mut result = 0.0;
    index += 1;
    while index > 0 {
        fraction /= base as f64;
        result += fraction * (index % base) as f64;
        index /= base;
    }
    result
}

const HALTON_BASES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// SplitMix64 step, used to derive per-dimension offsets from a seed.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Result of one local search.
#[derive(Clone, Debug)]
pub struct LocalOptimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder-Mead maximizer with shrinking restarts and a final coordinate
/// polish. `stall_tol` is the improvement-per-sweep threshold that defines
/// convergence.
#[derive(Clone, Copy, Debug)]
pub struct LocalSearch {
    pub stall_tol: f64,
    pub max_iter: usize,
}

impl Default for LocalSearch {
    fn default() -> Self {
        LocalSearch {
            stall_tol: 1e-10,
            max_iter: 4000,
        }
    }
}

impl LocalSearch {
    pub fn maximize<F: Fn(&[f64]) -> f64>(
        &self,
        f: &F,
        x0: &[f64],
        initial_scale: f64,
    ) -> LocalOptimum {
        let mut best_x = x0.to_vec();
        let mut best_v = f(x0);
        let mut iterations = 0;
        let mut converged = false;

        // Simplex passes at shrinking scales; each restart re-centers on
        // the incumbent, so later passes only refine.
        let mut scale = initial_scale;
        for _ in 0..5 {
            let run = self.simplex_pass(f, &best_x, scale);
            iterations += run.iterations;
            let gain = run.value - best_v;
            if run.value > best_v {
                best_v = run.value;
                best_x = run.x;
            }
            converged = run.converged;
            if gain < self.stall_tol && converged {
                break;
            }
            scale *= 0.04;
        }

        // Coordinate polish: golden-section along each axis with a
        // shrinking bracket. Cheap and robust near a smooth optimum.
        let mut span = 2e-3;
        for _ in 0..24 {
            let mut sweep_gain = 0.0;
            for i in 0..best_x.len() {
                let xi = best_x[i];
                let g = |v: f64| {
                    let mut y = best_x.clone();
                    y[i] = v;
                    f(&y)
                };
                let (x_new, v_new) = golden_section_max(g, xi - span, xi + span, span * 1e-9);
                iterations += 1;
                if v_new > best_v {
                    sweep_gain += v_new - best_v;
                    best_v = v_new;
                    best_x[i] = x_new;
                }
            }
            span *= 0.5;
            if sweep_gain < self.stall_tol * 1e-2 {
                converged = true;
                break;
            }
        }

        LocalOptimum {
            x: best_x,
            value: best_v,
            iterations,
            converged,
        }
    }

    fn simplex_pass<F: Fn(&[f64]) -> f64>(&self, f: &F, x0: &[f64], scale: f64) -> LocalOptimum {
        let n = x0.len();
        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] += scale;
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();

        let mut iterations = 0;
        let mut converged = false;
        let sweep = 2 * (n + 1);
        let mut best_at_sweep_start = f64::NEG_INFINITY;

        while iterations < self.max_iter {
            // Order descending by value; index 0 best, n worst.
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
            let best = order[0];
            let worst = order[n];
            let second_worst = order[n - 1];

            if iterations % sweep == 0 {
                if values[best] - best_at_sweep_start < self.stall_tol
                    && values[best] - values[worst] < self.stall_tol
                {
                    converged = true;
                    break;
                }
                best_at_sweep_start = values[best];
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for &idx in order.iter().take(n) {
                for (c, xi) in centroid.iter_mut().zip(simplex[idx].iter()) {
                    *c += xi / n as f64;
                }
            }

            let reflect: Vec<f64> = centroid
                .iter()
                .zip(simplex[worst].iter())
                .map(|(c, w)| c + alpha * (c - w))
                .collect();
            let f_reflect = f(&reflect);

            if f_reflect > values[best] {
                let expand: Vec<f64> = centroid
                    .iter()
                    .zip(simplex[worst].iter())
                    .map(|(c, w)| c + gamma * (c - w))
                    .collect();
                let f_expand = f(&expand);
                if f_expand > f_reflect {
                    simplex[worst] = expand;
                    values[worst] = f_expand;
                } else {
                    simplex[worst] = reflect;
                    values[worst] = f_reflect;
                }
            } else if f_reflect > values[second_worst] {
                simplex[worst] = reflect;
                values[worst] = f_reflect;
            } else {
                let (contract, f_contract) = if f_reflect > values[worst] {
                    let c: Vec<f64> = centroid
                        .iter()
                        .zip(reflect.iter())
                        .map(|(c, r)| c + rho * (r - c))
                        .collect();
                    let fc = f(&c);
                    (c, fc)
                } else {
                    let c: Vec<f64> = centroid
                        .iter()
                        .zip(simplex[worst].iter())
                        .map(|(c, w)| c + rho * (w - c))
                        .collect();
                    let fc = f(&c);
                    (c, fc)
                };
                if f_contract > values[worst].max(f_reflect) {
                    simplex[worst] = contract;
                    values[worst] = f_contract;
                } else {
                    let anchor = simplex[best].clone();
                    for idx in 0..=n {
                        if idx == best {
                            continue;
                        }
                        for (xi, ai) in simplex[idx].iter_mut().zip(anchor.iter()) {
                            *xi = ai + sigma * (*xi - ai);
                        }
                        values[idx] = f(&simplex[idx]);
                    }
                }
            }
        }

        let best = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        LocalOptimum {
            x: simplex[best].clone(),
            value: values[best],
            iterations,
            converged,
        }
    }
}

/// Outcome of a deterministic multi-start run.
#[derive(Clone, Debug)]
pub struct MultiStartOutcome {
    pub best: LocalOptimum,
    /// max - min over the values the individual starts settled at.
    pub spread: f64,
    pub total_iterations: usize,
}

/// Runs `starts` local searches from Halton points in the box
/// [lo_i, hi_i], offset per dimension by a hash of `seed`. Fully
/// deterministic for a fixed (starts, seed).
pub fn multistart_maximize<F: Fn(&[f64]) -> f64>(
    f: &F,
    lo: &[f64],
    hi: &[f64],
    starts: usize,
    seed: u64,
    search: LocalSearch,
) -> MultiStartOutcome {
    assert_eq!(lo.len(), hi.len());
    let dim = lo.len();
    assert!(dim <= HALTON_BASES.len(), "dimension above supported limit");

    let mut state = seed ^ 0xa076_1d64_78bd_642f;
    let offsets: Vec<f64> = (0..dim)
        .map(|_| splitmix64(&mut state) as f64 / u64::MAX as f64)
        .collect();

    let scale = lo
        .iter()
        .zip(hi.iter())
        .map(|(a, b)| b - a)
        .fold(f64::MIN, f64::max)
        * 0.35;

    let mut best: Option<LocalOptimum> = None;
    let mut low = f64::INFINITY;
    let mut high = f64::NEG_INFINITY;
    let mut total_iterations = 0;

    for k in 0..starts {
        let x0: Vec<f64> = (0..dim)
            .map(|i| {
                let u = (halton(k as u64, HALTON_BASES[i]) + offsets[i]).fract();
                lo[i] + u * (hi[i] - lo[i])
            })
            .collect();
        let local = search.maximize(f, &x0, scale);
        total_iterations += local.iterations;
        low = low.min(local.value);
        high = high.max(local.value);
        let replace = best.as_ref().map_or(true, |b| local.value > b.value);
        if replace {
            best = Some(local);
        }
    }

    MultiStartOutcome {
        best: best.expect("at least one start"),
        spread: high - low,
        total_iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, v) = golden_section_max(|x| 2.0 - (x - 1.3) * (x - 1.3), -4.0, 5.0, 1e-10);
        // The attainable accuracy in x is the width of the f64 flat top.
        assert!((x - 1.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn golden_section_handles_boundary_maximum() {
        let (x, v) = golden_section_max(|x| x, 0.0, 1.0, 1e-10);
        assert!((x - 1.0).abs() < 1e-8);
        assert!((v - 1.0).abs() < 1e-8);
    }

    #[test]
    fn halton_is_deterministic_and_in_range() {
        let first: Vec<f64> = (0..64).map(|i| halton(i, 2)).collect();
        let second: Vec<f64> = (0..64).map(|i| halton(i, 2)).collect();
        assert_eq!(first, second);
        assert!(first.iter().all(|&x| (0.0..1.0).contains(&x)));
        // Base 2 starts 1/2, 1/4, 3/4.
        assert_eq!(first[0], 0.5);
        assert_eq!(first[1], 0.25);
        assert_eq!(first[2], 0.75);
    }

    #[test]
    fn local_search_peaks_smooth_function() {
        // Separable trig bump with maximum 3 at (0.7, -0.4, 1.1).
        let f = |x: &[f64]| {
            (x[0] - 0.7).cos() + (x[1] + 0.4).cos() + (x[2] - 1.1).cos()
        };
        let out = LocalSearch::default().maximize(&f, &[0.0, 0.0, 0.0], 0.8);
        assert!(out.converged);
        assert!((out.value - 3.0).abs() < 1e-11, "value {}", out.value);
    }

    #[test]
    fn multistart_escapes_local_optima() {
        // Two bumps narrow enough that their tails do not shift each
        // other's peak; the global one is off to the side.
        let f = |x: &[f64]| {
            let a = -(x[0] - 2.4) * (x[0] - 2.4) * 50.0;
            let b = -(x[0] + 1.0) * (x[0] + 1.0) * 50.0;
            (a.exp() * 2.0) + b.exp()
        };
        let out = multistart_maximize(&f, &[-4.0], &[4.0], 24, 7, LocalSearch::default());
        assert!((out.best.x[0] - 2.4).abs() < 1e-6, "x {}", out.best.x[0]);
        assert!((out.best.value - 2.0).abs() < 1e-10);
        assert!(out.spread > 0.5); // both basins were visited
    }

    #[test]
    fn multistart_is_deterministic() {
        let f = |x: &[f64]| -(x[0] * x[0]) - (x[1] - 0.3) * (x[1] - 0.3);
        let a = multistart_maximize(&f, &[-1.0, -1.0], &[1.0, 1.0], 8, 42, LocalSearch::default());
        let b = multistart_maximize(&f, &[-1.0, -1.0], &[1.0, 1.0], 8, 42, LocalSearch::default());
        assert_eq!(a.best.x, b.best.x);
        assert_eq!(a.best.value, b.best.value);
        assert_eq!(a.total_iterations, b.total_iterations);
    }
}
