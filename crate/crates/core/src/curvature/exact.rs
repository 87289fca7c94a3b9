//! Scalar-generic versions of the Kulkarni–Nomizu product and the full
//! contraction, used to evaluate metric identities in exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Sub};

/// Kulkarni–Nomizu product of two `n × n` row-major arrays over any ring.
pub fn kulkarni_nomizu_generic<T>(n: usize, a: &[T], b: &[T]) -> Vec<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let at = |i: usize, j: usize| a[i * n + j].clone();
    let bt = |i: usize, j: usize| b[i * n + j].clone();
    let mut out = Vec::with_capacity(n * n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out.push(
                        at(i, k) * bt(j, l) + at(j, l) * bt(i, k)
                            - at(j, k) * bt(i, l)
                            - at(i, l) * bt(j, k),
                    );
                }
            }
        }
    }
    out
}

pub fn full_contraction<T>(a: &[T], b: &[T]) -> T
where
    T: Clone + Zero + Mul<Output = T>,
{
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `|g∧g|²` computed entry by entry in rationals.
pub fn metric_product_norm_sq(n: usize) -> BigRational {
    let g: Vec<BigRational> = (0..n * n)
        .map(|p| {
            if p / n == p % n {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let gg = kulkarni_nomizu_generic(n, &g, &g);
    full_contraction(&gg, &gg)
}

pub fn integer(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_product_norm_is_8n_n_minus_1() {
        for n in 3..=10usize {
            let want = integer(8 * (n * (n - 1)) as i64);
            assert_eq!(metric_product_norm_sq(n), want, "n = {n}");
        }
    }
}
