//! Helpers shared by the integration tests.

use zetalab::Complex64;

// Σ_{n≥0} b(n) (n+α)^{-s} for q-periodic b: the first N terms directly, the
// rest as Σ_r b(r) q^{-s} Σ_j (x_r + j)^{-s} with x_r = (N+r+α)/q, each
// inner sum by its asymptotic expansion at large x_r.
pub fn series_oracle(b: &dyn Fn(u64) -> Complex64, q: u64, alpha: f64, s: Complex64) -> Complex64 {
    let n = q * 4000u64.div_ceil(q);
    let mut head = Complex64::new(0.0, 0.0);
    for m in (0..n).rev() {
        head += b(m) * (-s * (m as f64 + alpha).ln()).exp();
    }
    let one = Complex64::new(1.0, 0.0);
    let mut tail = Complex64::new(0.0, 0.0);
    for r in 0..q {
        let x = (n + r) as f64 / q as f64 + alpha / q as f64;
        let xs = (-s * x.ln()).exp();
        let sum = xs * x / (s - one) + 0.5 * xs + s * xs / (12.0 * x)
            - s * (s + 1.0) * (s + 2.0) * xs / (720.0 * x.powi(3))
            + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * xs / (30240.0 * x.powi(5));
        tail += b(r) * (-s * (q as f64).ln()).exp() * sum;
    }
    head + tail
}
