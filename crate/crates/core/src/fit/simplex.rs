//! Nelder–Mead simplex descent.

use crate::numerics::{lit, Scalar};

pub(crate) struct Outcome<T> {
    pub x: Vec<T>,
    pub f: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Relative simplex diameter: largest vertex distance from the best vertex,
/// per coordinate relative to `1 + |x_best|`.
fn diameter<T: Scalar>(simplex: &[Vec<T>]) -> T {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .flat_map(|v| v.iter().zip(best).map(|(a, b)| (*a - *b).abs() / (T::one() + b.abs())))
        .fold(T::zero(), T::max)
}

/// Minimizes `f` from `start` with initial edge lengths `step`. NaN values
/// count as `+∞`.
pub(crate) fn minimize<T, F>(mut f: F, start: &[T], step: &[T], tol: T, max_iter: usize) -> Outcome<T>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    let n = start.len();
    let mut eval = |x: &[T]| {
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };
    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);

    let mut simplex: Vec<Vec<T>> = vec![start.to_vec()];
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] = v[i] + step[i];
        simplex.push(v);
    }
    let mut values: Vec<T> = simplex.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("NaN mapped to +inf"));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if diameter(&simplex) < tol {
            return Outcome {
                x: simplex.swap_remove(0),
                f: values[0],
                iterations,
                converged: true,
            };
        }
        if iterations >= max_iter {
            return Outcome {
                x: simplex.swap_remove(0),
                f: values[0],
                iterations,
                converged: false,
            };
        }
        iterations += 1;

        let centroid: Vec<T> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).fold(T::zero(), |a, b| a + b) / lit(n as f64))
            .collect();
        let along = |t: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| *c + t * (*w - *c))
                .collect()
        };

        let xr = along(-T::one());
        let fr = eval(&xr);
        if fr < values[0] {
            let xe = along(-two);
            let fe = eval(&xe);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(-half);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(half);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=n {
            let v: Vec<T> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, x)| *b + half * (*x - *b))
                .collect();
            values[i] = eval(&v);
            simplex[i] = v;
        }
    }
}
