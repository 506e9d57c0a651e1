//! Nonnegative least squares, optionally with `Σx ≤ 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{symmetric_eigenvalues, RealMatrix};

const SUM_SLACK: f64 = 1e-9;
const FISTA_ITERATIONS: usize = 50_000;

fn residual(a: &RealMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    a.mul_vec(x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

fn objective(a: &RealMatrix, x: &[f64], b: &[f64]) -> f64 {
    residual(a, x, b).iter().map(|r| r * r).sum::<f64>() / 2.0
}

/// Lawson–Hanson active-set NNLS.
pub(crate) fn nnls(a: &RealMatrix, b: &[f64]) -> Vec<f64> {
    let n = a.cols();
    let scale = (0..a.rows())
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .fold(0.0f64, |m, (r, c)| m.max(a.get(r, c).abs()));
    let tol = 10.0 * f64::EPSILON * scale * a.rows().max(n) as f64;
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    for _ in 0..3 * n + 3 {
        let w = a.tr_mul_vec(&residual(a, &x, b));
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        match candidate {
            Some(j) if w[j] > tol => passive[j] = true,
            _ => break,
        }
        loop {
            let cols: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let zp = a.select_columns(&cols).lstsq(b);
            let mut z = vec![0.0; n];
            for (k, &j) in cols.iter().enumerate() {
                z[j] = zp[k];
            }
            if cols.iter().all(|&j| z[j] > tol) {
                x = z;
                break;
            }
            let alpha = cols
                .iter()
                .filter(|&&j| z[j] <= tol)
                .map(|&j| x[j] / (x[j] - z[j]))
                .fold(f64::INFINITY, f64::min);
            for j in 0..n {
                x[j] += alpha * (z[j] - x[j]);
            }
            for &j in &cols {
                if x[j] <= tol {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    x
}

/// Euclidean projection onto `{x ≥ 0, Σx ≤ 1}`.
fn project_capped_simplex(v: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= 1.0 {
        return clipped;
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Least squares on `support` with `Σx = 1`, by eliminating the last support variable.
fn equality_polish(a: &RealMatrix, b: &[f64], support: &[usize]) -> Option<Vec<f64>> {
    let (&last, rest) = support.split_last()?;
    let reduced = RealMatrix::from_fn(a.rows(), rest.len(), |r, c| a.get(r, rest[c]) - a.get(r, last));
    let rhs: Vec<f64> = (0..a.rows()).map(|r| b[r] - a.get(r, last)).collect();
    let y = if rest.is_empty() { Vec::new() } else { reduced.lstsq(&rhs) };
    let mut x = vec![0.0; a.cols()];
    for (k, &j) in rest.iter().enumerate() {
        x[j] = y[k];
    }
    x[last] = 1.0 - y.iter().sum::<f64>();
    x.iter().all(|&v| v >= 0.0).then_some(x)
}

/// `min ‖Ax − b‖` subject to `x ≥ 0` and `Σx ≤ 1`.
pub(crate) fn capped_nnls(a: &RealMatrix, b: &[f64]) -> Vec<f64> {
    let x = nnls(a, b);
    if x.iter().sum::<f64>() <= 1.0 + SUM_SLACK {
        return x;
    }
    let n = a.cols();
    let gram = a.gram();
    let flat: Vec<f64> = (0..n * n).map(|k| gram.get(k / n, k % n)).collect();
    let lipschitz = symmetric_eigenvalues(n, flat).last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let atb = a.tr_mul_vec(b);
    let mut x = project_capped_simplex(&x);
    let mut y = x.clone();
    let mut t = 1.0f64;
    for _ in 0..FISTA_ITERATIONS {
        let gy = gram.mul_vec(&y);
        let step: Vec<f64> = (0..n).map(|i| y[i] - (gy[i] - atb[i]) / lipschitz).collect();
        let next = project_capped_simplex(&step);
        let t_next = (1.0 + crate::math::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        let change = next.iter().zip(&x).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        y = (0..n).map(|i| next[i] + (t - 1.0) / t_next * (next[i] - x[i])).collect();
        x = next;
        t = t_next;
        if change < 1e-15 {
            break;
        }
    }
    let support: Vec<usize> = (0..n).filter(|&j| x[j] > 1e-12).collect();
    if let Some(polished) = equality_polish(a, b, &support) {
        if objective(a, &polished, b) <= objective(a, &x, b) {
            return polished;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_nonnegative_solution() {
        let a = RealMatrix::from_fn(5, 3, |r, c| 1.0 / (1.0 + r as f64 + 2.0 * c as f64));
        let truth = [0.4, 0.0, 0.7];
        let b = a.mul_vec(&truth);
        let x = nnls(&a, &b);
        for (g, t) in x.iter().zip(&truth) {
            assert!((g - t).abs() < 1e-10, "{x:?}");
        }
    }

    #[test]
    fn clips_negative_directions() {
        let a = RealMatrix::from_fn(2, 2, |r, c| if r == c { 1.0 } else { 0.0 });
        assert_eq!(nnls(&a, &[1.0, -2.0]), [1.0, 0.0]);
    }

    #[test]
    fn cap_binds_on_simplex() {
        let a = RealMatrix::from_fn(2, 2, |r, c| if r == c { 1.0 } else { 0.0 });
        let x = capped_nnls(&a, &[1.0, 1.0]);
        assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12, "{x:?}");
        let x = capped_nnls(&a, &[2.0, 0.0]);
        assert!((x[0] - 1.0).abs() < 1e-12 && x[1].abs() < 1e-12);
    }

    #[test]
    fn projection_lands_on_set() {
        let p = project_capped_simplex(&[0.9, 0.8, -0.3]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p.iter().all(|&v| v >= 0.0));
        assert_eq!(project_capped_simplex(&[0.2, -1.0]), [0.2, 0.0]);
    }
}
