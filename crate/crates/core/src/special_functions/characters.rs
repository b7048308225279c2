//! Dirichlet characters of small modulus, enumerated through the cyclic
//! decomposition of `(ℤ/qℤ)^*`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::arith::{factorize, gcd, pow_mod};
use crate::error::{Error, Result};

/// Largest modulus accepted; characters are tabulated over one full period.
pub const MAX_MODULUS: u64 = 100_000;

/// One cyclic factor of `(ℤ/qℤ)^*`: `dlog[n mod q]` is the exponent of `n`
/// w.r.t. the generator of this factor.
#[derive(Clone, Debug)]
struct CyclicFactor {
    order: u64,
    dlog: Vec<u64>,
}

/// A Dirichlet character `χ mod q`. Characters are indexed in mixed radix
/// over the cyclic factors of `(ℤ/qℤ)^*` taken prime by prime in ascending
/// order, with `2^e` (`e ≥ 3`) contributing the factor `⟨-1⟩` before `⟨5⟩`.
/// Index 0 is the principal character.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    values: Vec<Complex64>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.index == other.index
    }
}

fn unit_root(numerator: u64, denominator: u64) -> Complex64 {
    let num = numerator % denominator;
    // Exact values at multiples of a quarter turn.
    if (4 * num).is_multiple_of(denominator) {
        return match 4 * num / denominator {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = 2.0 * PI * num as f64 / denominator as f64;
    Complex64::new(angle.cos(), angle.sin())
}

fn cyclic_factors(q: u64) -> Vec<CyclicFactor> {
    let mut factors = Vec::new();
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        // Generators modulo p^e, lifted to modulo q by CRT below.
        let mut local: Vec<(u64, u64)> = Vec::new(); // (generator mod p^e, order)
        if p == 2 {
            match e {
                1 => {}
                2 => local.push((3, 2)),
                _ => {
                    local.push((pe - 1, 2));
                    local.push((5, pe / 4));
                }
            }
        } else {
            let phi = pe / p * (p - 1);
            let g = primitive_root_prime_power(p, e);
            local.push((g, phi));
        }
        if p == 2 && e >= 3 {
            // (ℤ/2^eℤ)^* = ⟨-1⟩ × ⟨5⟩: n ≡ (-1)^a 5^b.
            let mut five_log = vec![u64::MAX; pe as usize];
            let mut x = 1;
            for b in 0..pe / 4 {
                five_log[x as usize] = b;
                x = x * 5 % pe;
            }
            let mut sign = vec![0; q as usize];
            let mut five = vec![0; q as usize];
            for n in 0..q {
                if gcd(n, q) != 1 {
                    continue;
                }
                let r = n % pe;
                let a = if r % 4 == 1 { 0 } else { 1 };
                let unit = if a == 0 { r } else { pe - r };
                sign[n as usize] = a;
                five[n as usize] = five_log[unit as usize];
            }
            factors.push(CyclicFactor { order: 2, dlog: sign });
            factors.push(CyclicFactor {
                order: pe / 4,
                dlog: five,
            });
        } else {
            for (g, order) in local {
                let mut table = vec![u64::MAX; pe as usize];
                let mut x = 1;
                for k in 0..order {
                    table[x as usize] = k;
                    x = x * g % pe;
                }
                let dlog = (0..q)
                    .map(|n| if gcd(n, q) == 1 { table[(n % pe) as usize] } else { 0 })
                    .collect();
                factors.push(CyclicFactor { order, dlog });
            }
        }
    }
    factors
}

fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    let phi_p = p - 1;
    let prime_divisors: Vec<u64> = factorize(phi_p).into_iter().map(|(d, _)| d).collect();
    let g = (2..p)
        .find(|&g| prime_divisors.iter().all(|&d| pow_mod(g, phi_p / d, p) != 1))
        .unwrap_or(1);
    if e == 1 || pow_mod(g, p - 1, p * p) != 1 {
        g
    } else {
        g + p
    }
}

impl DirichletCharacter {
    pub fn new(modulus: u64, index: u64) -> Result<Self> {
        if modulus == 0 || modulus > MAX_MODULUS {
            return Err(Error::domain(format!("modulus {modulus} outside 1..={MAX_MODULUS}")));
        }
        let factors = cyclic_factors(modulus);
        let count: u64 = factors.iter().map(|f| f.order).product();
        if index >= count {
            return Err(Error::domain(format!(
                "character index {index} out of range: there are {count} characters mod {modulus}"
            )));
        }
        let mut digits = Vec::with_capacity(factors.len());
        let mut rest = index;
        for f in &factors {
            digits.push(rest % f.order);
            rest /= f.order;
        }
        // χ(n) = exp(2πi Σ digit_i dlog_i(n) / order_i), common denominator = lcm of orders.
        let lcm = factors.iter().fold(1_u64, |acc, f| acc / gcd(acc, f.order) * f.order);
        let values = (0..modulus)
            .map(|n| {
                if gcd(n, modulus) != 1 {
                    return Complex64::new(0.0, 0.0);
                }
                let num = factors
                    .iter()
                    .zip(&digits)
                    .map(|(f, &d)| d * f.dlog[n as usize] % f.order * (lcm / f.order))
                    .sum::<u64>();
                unit_root(num, lcm)
            })
            .collect();
        Ok(DirichletCharacter { modulus, index, values })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    /// `χ(0), …, χ(q-1)`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// Primitive iff not induced from `mod q/p` for any prime `p | q`.
    pub fn is_primitive(&self) -> bool {
        let q = self.modulus;
        if q == 1 {
            return true;
        }
        factorize(q).iter().all(|&(p, _)| {
            let d = q / p;
            (0..q)
                .filter(|&n| gcd(n, q) == 1 && n % d == 1 % d)
                .any(|n| (self.value(n) - Complex64::new(1.0, 0.0)).norm() > 1e-12)
        })
    }

    /// Primitive characters modulo `q`.
    pub fn primitive_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
        let count: u64 = cyclic_factors(q).iter().map(|f| f.order).product();
        let mut out = Vec::new();
        for j in 0..count {
            let chi = DirichletCharacter::new(q, j)?;
            if chi.is_primitive() {
                out.push(chi);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler_phi(q: u64) -> u64 {
        (1..=q).filter(|&n| gcd(n, q) == 1).count() as u64
    }

    #[test]
    fn character_counts_and_orthogonality() {
        for q in [3, 4, 5, 8, 12, 15, 16, 24, 27] {
            let count: u64 = cyclic_factors(q).iter().map(|f| f.order).product();
            assert_eq!(count, euler_phi(q), "q = {q}");
            let chars: Vec<_> = (0..count).map(|j| DirichletCharacter::new(q, j).unwrap()).collect();
            for a in &chars {
                for b in &chars {
                    let inner: Complex64 = (0..q).map(|n| a.value(n) * b.value(n).conj()).sum();
                    let expected = if a == b { euler_phi(q) as f64 } else { 0.0 };
                    assert!((inner - expected).norm() < 1e-9, "q = {q}");
                }
            }
        }
    }

    #[test]
    fn multiplicative() {
        for j in 0..8 {
            let chi = DirichletCharacter::new(20, j).unwrap();
            for m in 0..40 {
                for n in 0..40 {
                    assert!((chi.value(m * n) - chi.value(m) * chi.value(n)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mod_four() {
        let chi = DirichletCharacter::new(4, 1).unwrap();
        let expected = [0.0, 1.0, 0.0, -1.0];
        for n in 0..4 {
            assert_eq!(chi.value(n), Complex64::new(expected[n as usize], 0.0));
        }
        assert!(chi.is_primitive());
        assert!(!DirichletCharacter::new(4, 0).unwrap().is_primitive());
    }

    #[test]
    fn primitive_counts() {
        // Number of primitive characters mod q (OEIS A007431).
        for (q, n) in [(3, 1), (4, 1), (5, 3), (8, 2), (9, 4), (12, 1), (15, 3), (16, 4)] {
            assert_eq!(DirichletCharacter::primitive_characters(q).unwrap().len(), n, "q = {q}");
        }
        assert!(DirichletCharacter::primitive_characters(6).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_index() {
        assert!(DirichletCharacter::new(5, 4).is_err());
        assert!(DirichletCharacter::new(0, 0).is_err());
    }
}
