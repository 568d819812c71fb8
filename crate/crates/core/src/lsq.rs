use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Fit<T> {
    pub coeffs: Vec<T>,
    /// Root-mean-square residual.
    pub residual: T,
    /// Ratio of largest to smallest |R_ii| after column equilibration.
    pub condition: T,
}

/// Least squares `min ‖A c − b‖` by Householder QR on column-equilibrated `A`.
/// `rows[i]` is the i-th row of `A`.
pub fn least_squares<T: Real>(rows: &[Vec<T>], b: &[T]) -> Fit<T> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    assert!(
        m >= n && b.len() == m,
        "least squares needs at least as many rows as columns"
    );
    let mut scale = vec![T::zero(); n];
    for (j, s) in scale.iter_mut().enumerate() {
        let norm = rows.iter().map(|r| r[j] * r[j]).sum::<T>().sqrt();
        *s = if norm > T::zero() { norm } else { T::one() };
    }
    let mut a: Vec<Vec<T>> = rows
        .iter()
        .map(|r| r.iter().zip(&scale).map(|(&v, &s)| v / s).collect())
        .collect();
    let mut y = b.to_vec();
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<T>().sqrt();
        if norm == T::zero() {
            continue;
        }
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k..m).map(|i| a[i][k]).collect();
        v[0] = v[0] - alpha;
        let vnorm2: T = v.iter().map(|&x| x * x).sum();
        if vnorm2 == T::zero() {
            continue;
        }
        for j in k..n {
            let dot: T = (k..m).map(|i| v[i - k] * a[i][j]).sum();
            let f = T::lit(2.0) * dot / vnorm2;
            for i in k..m {
                a[i][j] = a[i][j] - f * v[i - k];
            }
        }
        let dot: T = (k..m).map(|i| v[i - k] * y[i]).sum();
        let f = T::lit(2.0) * dot / vnorm2;
        for i in k..m {
            y[i] = y[i] - f * v[i - k];
        }
    }
    let mut c = vec![T::zero(); n];
    for k in (0..n).rev() {
        let s: T = ((k + 1)..n).map(|j| a[k][j] * c[j]).sum();
        c[k] = if a[k][k] != T::zero() {
            (y[k] - s) / a[k][k]
        } else {
            T::zero()
        };
    }
    let diag: Vec<T> = (0..n).map(|k| a[k][k].abs()).collect();
    let dmax = diag.iter().cloned().fold(T::zero(), T::max);
    let dmin = diag.iter().cloned().fold(T::infinity(), T::min);
    let coeffs: Vec<T> = c.iter().zip(&scale).map(|(&ci, &s)| ci / s).collect();
    let sse: T = rows
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let fit: T = r.iter().zip(&coeffs).map(|(&x, &ci)| x * ci).sum();
            (fit - bi) * (fit - bi)
        })
        .sum();
    Fit {
        coeffs,
        residual: (sse / T::from_usize(m).unwrap()).sqrt(),
        condition: if dmin > T::zero() {
            dmax / dmin
        } else {
            T::infinity()
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_polynomial() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 / 7.0).collect();
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![1.0, x, x * x]).collect();
        let b: Vec<f64> = xs.iter().map(|&x| 2.0 - 3.0 * x + 0.5 * x * x).collect();
        let fit = least_squares(&rows, &b);
        for (c, e) in fit.coeffs.iter().zip([2.0, -3.0, 0.5]) {
            assert!((c - e).abs() < 1e-12);
        }
        assert!(fit.residual < 1e-13);
        assert!(fit.condition.is_finite());
    }
}
