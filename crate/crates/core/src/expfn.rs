//! Cancellation-free building blocks for integrals of exponentials.
//!
//! `phi(k, z) = sum_{n>=0} z^n / (n + k)!`, i.e. `phi(1, z) = (e^z - 1) / z`,
//! `phi(2, z) = (e^z - 1 - z) / z^2`, and so on, finite at `z = 0`.
//!
//! [`exp_divdiff`] gives divided differences of `exp`, which is what iterated
//! integrals of exponentials over an ordered simplex reduce to:
//!
//! `int_{0<t1<...<tn<T} exp(a1 t1 + ... + an tn) = T^n exp[0, an T, (a(n-1) + an) T, ..., (a1 + ... + an) T]`.

const SERIES_RADIUS: f64 = 1.0;
const SERIES_TERMS: usize = 30;

/// `phi_k(z)` for `k <= 4`.
pub fn phi(k: usize, z: f64) -> f64 {
    debug_assert!(k <= 4);
    if k == 0 {
        return z.exp();
    }
    if z.abs() < SERIES_RADIUS {
        // Horner on sum z^n / (n+k)!
        let mut acc = 0.0;
        for n in (0..SERIES_TERMS).rev() {
            acc = acc * z / (n + k + 1) as f64 + 1.0;
        }
        let mut fact = 1.0;
        for j in 2..=k {
            fact *= j as f64;
        }
        return acc / fact;
    }
    let mut value = z.exp_m1() / z;
    let mut fact = 1.0;
    for j in 2..=k {
        fact *= (j - 1) as f64;
        value = (value - 1.0 / fact) / z;
    }
    value
}

#[inline]
pub fn phi1(z: f64) -> f64 {
    phi(1, z)
}

#[inline]
pub fn phi2(z: f64) -> f64 {
    phi(2, z)
}

#[inline]
pub fn phi3(z: f64) -> f64 {
    phi(3, z)
}

/// Divided difference of `exp` over the given nodes (any order, repeats
/// allowed, at most 8 nodes).
pub fn exp_divdiff(nodes: &[f64]) -> f64 {
    assert!(!nodes.is_empty() && nodes.len() <= 8, "1..=8 nodes supported");
    let mut x = [0.0; 8];
    x[..nodes.len()].copy_from_slice(nodes);
    let x = &mut x[..nodes.len()];
    x.sort_by(f64::total_cmp);
    divdiff_sorted(x)
}

fn divdiff_sorted(x: &[f64]) -> f64 {
    let n = x.len();
    let span = x[n - 1] - x[0];
    if span <= SERIES_RADIUS {
        return taylor_cluster(x);
    }
    // exp divided differences are all positive, so the recurrence over a
    // span wider than the series radius loses at most a small factor
    (divdiff_sorted(&x[1..]) - divdiff_sorted(&x[..n - 1])) / span
}

/// `e^m sum_k h_k(x - m) / (k + n)!` with `h_k` the complete homogeneous
/// symmetric polynomials and `m` the cluster midpoint.
fn taylor_cluster(x: &[f64]) -> f64 {
    let n = x.len() - 1;
    let m = 0.5 * (x[0] + x[n]);
    let mut h = [0.0; SERIES_TERMS];
    h[0] = 1.0;
    for &xi in x {
        let y = xi - m;
        for k in 1..SERIES_TERMS {
            h[k] += y * h[k - 1];
        }
    }
    let mut inv_fact = 1.0;
    for j in 2..=n {
        inv_fact /= j as f64;
    }
    let mut sum = 0.0;
    for (k, hk) in h.iter().enumerate() {
        sum += hk * inv_fact;
        inv_fact /= (k + n + 1) as f64;
    }
    m.exp() * sum
}
