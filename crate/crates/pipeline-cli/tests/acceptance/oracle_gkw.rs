//! Matrix entries as exact rationals: branches `n ≤ N` summed exactly, the
//! remaining branches through Euler–Maclaurin for `ζ(s, N+2)` with integer
//! `s`, whose terms are rational too. The only error is the Euler–Maclaurin
//! remainder, bounded by twice the first omitted term.

use ball_core::rug::{Integer, Rational};

pub const BRANCHES: u32 = 62;
const EM_TERMS: usize = 30;

/// `B_0, …, B_m` from `Σ_{j≤m} C(m+1, j) B_j = 0`.
fn bernoulli(m: usize) -> Vec<Rational> {
    let mut b = vec![Rational::from(1)];
    for k in 1..=m {
        let mut s = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from(Integer::from(Integer::binomial_u(k as u32 + 1, j as u32))) * bj;
        }
        b.push(-s / Rational::from(k as u32 + 1));
    }
    b
}

fn inv_pow(c: u32, s: u32) -> Rational {
    Rational::from((Integer::from(1), Integer::from(Integer::u_pow_u(c, s))))
}

fn rising_product(s: u32, len: u32) -> Integer {
    (0..len).fold(Integer::from(1), |acc, i| acc * (s + i))
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `(Σ_{c=2}^{N+1} c^{-s} + EM(ζ(s, N+2)), |remainder| bound)`.
pub struct ZetaOracle {
    values: Vec<(Rational, Rational)>,
}

impl ZetaOracle {
    pub fn new(smax: u32) -> Self {
        let b = bernoulli(2 * EM_TERMS + 2);
        let a = BRANCHES + 2;
        let values = (0..=smax)
            .map(|s| {
                if s < 2 {
                    return (Rational::new(), Rational::new());
                }
                let mut v: Rational = (2..a).map(|c| inv_pow(c, s)).sum();
                v += inv_pow(a, s - 1) / Rational::from(s - 1);
                v += inv_pow(a, s) / Rational::from(2);
                let term = |j: usize| {
                    let j2 = 2 * j as u32;
                    Rational::from(&b[2 * j]) / Rational::from(factorial(j2))
                        * Rational::from(rising_product(s, j2 - 1))
                        * inv_pow(a, s + j2 - 1)
                };
                for j in 1..=EM_TERMS {
                    v += term(j);
                }
                let rem = term(EM_TERMS + 1).abs() * Rational::from(2);
                (v, rem)
            })
            .collect();
        ZetaOracle { values }
    }

    /// Entry `(ℓ, k)`: `(−1)^ℓ Σ_i C(k,i) (−1)^{k−i} C(i+ℓ+1, ℓ) ζ(i+ℓ+2, 2)`.
    pub fn entry(&self, l: u32, k: u32) -> (Rational, Rational) {
        let mut v = Rational::new();
        let mut err = Rational::new();
        for i in 0..=k {
            let w = Integer::from(Integer::binomial_u(k, i))
                * Integer::from(Integer::binomial_u(i + l + 1, l));
            let (z, r) = &self.values[(i + l + 2) as usize];
            let t = Rational::from(&w) * z;
            if (k - i + l).is_multiple_of(2) {
                v += t;
            } else {
                v -= t;
            }
            err += Rational::from(w) * r;
        }
        (v, err)
    }
}
