/// Chebyshev polynomial of the second kind in the normalization
/// `U_nu(2 cos x) = sin((nu+1)x) / sin x`, via the three-term recurrence.
pub fn chebyshev_u(nu: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..nu {
        let next = t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `U_0(t), ..., U_max(t)`.
pub fn chebyshev_u_all(max: u32, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(1.0);
    if max >= 1 {
        out.push(t);
    }
    for k in 2..=max as usize {
        let v = t * out[k - 1] - out[k - 2];
        out.push(v);
    }
    out
}
