//! Dense vector kernels over [`Real`] slices.

use super::Real;

/// `a . b`. Both slices must be nonempty and of equal length.
pub fn dot(a: &[Real], b: &[Real]) -> Real {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = &a[0] * &b[0];
    for (x, y) in a.iter().zip(b).skip(1) {
        acc += x * y;
    }
    acc
}

pub fn norm2_squared(a: &[Real]) -> Real {
    dot(a, a)
}

pub fn norm2(a: &[Real]) -> Real {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: &Real, x: &[Real], y: &mut [Real]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `alpha * x`
pub fn scale(alpha: &Real, x: &[Real]) -> Vec<Real> {
    x.iter().map(|xi| alpha * xi).collect()
}

pub fn sub(a: &[Real], b: &[Real]) -> Vec<Real> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn norm_inf(a: &[Real]) -> Real {
    a.iter()
        .map(Real::abs)
        .reduce(Real::max)
        .expect("norm of an empty vector")
}
