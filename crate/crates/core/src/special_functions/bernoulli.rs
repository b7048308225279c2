use std::f64::consts::PI;
use std::sync::OnceLock;

/// Largest `k` for which `B_{2k} / (2k)!` is tabulated.
pub const MAX_BERNOULLI_INDEX: usize = 64;

// B_2 .. B_26 as exact fractions.
const SMALL: [(f64, f64); 13] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
];

/// `B_{2k} / (2k)!` for `k = 1..=MAX_BERNOULLI_INDEX`; index 0 is unused.
pub fn scaled_bernoulli() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = vec![0.0; MAX_BERNOULLI_INDEX + 1];
        let mut factorial = 1.0_f64;
        for k in 1..=MAX_BERNOULLI_INDEX {
            factorial *= (2 * k - 1) as f64 * (2 * k) as f64;
            table[k] = if k <= SMALL.len() {
                let (num, den) = SMALL[k - 1];
                num / den / factorial
            } else {
                // B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}; ζ(2k) - 1 < 2^{-2k}.
                let zeta: f64 = (1..=8).map(|n| (n as f64).powi(-2 * k as i32)).sum();
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta * (2.0 * PI).powi(-2 * k as i32)
            };
        }
        table
    })
}
