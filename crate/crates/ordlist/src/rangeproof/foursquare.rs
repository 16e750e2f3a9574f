//! Lagrange four-square decomposition of non-negative integers.
//!
//! The randomized algorithm strips factors of four, then draws `w1, w2` with
//! parities forcing `x - w1^2 - w2^2 = 1 (mod 4)` and keeps drawing until the
//! remainder is 0, 1 or a prime `p = 1 (mod 4)`, which splits into two
//! squares by the Hermite–Serret descent. Small inputs fall back to
//! exhaustive search.

use num_bigint::{BigUint, RandBigInt};
use num_prime::nt_funcs::{is_prime, is_prime64};
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

/// Integers `w` with `x = w[0]^2 + w[1]^2 + w[2]^2 + w[3]^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourSquares {
    pub w: [BigUint; 4],
}

impl FourSquares {
    pub fn sum_of_squares(&self) -> BigUint {
        self.w.iter().map(|v| v * v).sum()
    }

    pub fn satisfies(&self, x: &BigUint) -> bool {
        &self.sum_of_squares() == x
    }
}

const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Decomposes a non-negative integer into four squares.
pub fn four_square_decompose(x: &BigUint, rng: &mut impl RngCore) -> FourSquares {
    if let Some(small) = x.to_u64() {
        if small < 4096 {
            return exhaustive(small);
        }
    }

    // x = 4^t * m with m not divisible by 4; decompose m, scale by 2^t.
    let mut shift = 0u64;
    let mut m = x.clone();
    let four = BigUint::from(4u32);
    while (&m % &four).is_zero() {
        m >>= 2;
        shift += 1;
    }

    let mut res = decompose_core(&m, rng);
    if shift > 0 {
        for v in res.w.iter_mut() {
            *v <<= shift;
        }
    }
    debug_assert!(res.satisfies(x));
    res
}

fn decompose_core(m: &BigUint, rng: &mut impl RngCore) -> FourSquares {
    if let Some(small) = m.to_u64() {
        if small < 4096 {
            return exhaustive(small);
        }
    }

    // parities of (w1, w2) forcing m - w1^2 - w2^2 = 1 (mod 4)
    let m_mod4 = (m % BigUint::from(4u32)).to_u64().unwrap();
    let (p1, p2) = match m_mod4 {
        1 => (0u8, 0u8),
        2 => (1, 0),
        3 => (1, 1),
        _ => unreachable!("factors of four were stripped"),
    };

    let mut attempts = 0u64;
    loop {
        attempts += 1;
        if attempts > 4096 {
            // randomized search is overwhelmingly likely to have succeeded by
            // now; fall back for small inputs rather than looping forever
            if let Some(small) = m.to_u64() {
                if small < EXHAUSTIVE_LIMIT {
                    return exhaustive(small);
                }
            }
        }

        let w1 = sample_with_parity(rng, &m.sqrt(), p1);
        let rest = m - &w1 * &w1;
        let w2 = sample_with_parity(rng, &rest.sqrt(), p2);
        let p = rest - &w2 * &w2;

        if p.is_zero() {
            return FourSquares {
                w: [w1, w2, BigUint::zero(), BigUint::zero()],
            };
        }
        if p.is_one() {
            return FourSquares {
                w: [w1, w2, BigUint::one(), BigUint::zero()],
            };
        }
        debug_assert_eq!((&p % BigUint::from(4u32)).to_u64(), Some(1));
        if !probably_prime(&p) {
            continue;
        }
        if let Some((a, b)) = two_squares_of_prime(&p, rng) {
            return FourSquares { w: [w1, w2, a, b] };
        }
    }
}

/// Uniform draw from `[0, bound]` conditioned on parity, by masking the low
/// bit. `bound >= 2` is guaranteed by the callers.
fn sample_with_parity(rng: &mut impl RngCore, bound: &BigUint, parity: u8) -> BigUint {
    loop {
        let mut v = rng.gen_biguint_below(&(bound + BigUint::one()));
        v.set_bit(0, parity == 1);
        if &v <= bound {
            return v;
        }
    }
}

/// Writes a prime `p = 1 (mod 4)` as `a^2 + b^2` via a square root of -1 and
/// Euclidean descent.
fn two_squares_of_prime(p: &BigUint, rng: &mut impl RngCore) -> Option<(BigUint, BigUint)> {
    let one = BigUint::one();
    let exp = (p - &one) >> 2;
    for _ in 0..64 {
        let a = rng.gen_biguint_range(&BigUint::from(2u32), p);
        let z = a.modpow(&exp, p);
        if &z * &z % p != p - &one {
            continue; // a was a quadratic residue; try again
        }
        let mut u = p.clone();
        let mut v = z;
        let sq = p.sqrt();
        while v > sq {
            let t = &u % &v;
            u = v;
            v = t;
        }
        let rem = p - &v * &v;
        let w = rem.sqrt();
        if &w * &w == rem {
            return Some((v, w));
        }
    }
    None
}

fn probably_prime(v: &BigUint) -> bool {
    match v.to_u64() {
        Some(small) => is_prime64(small),
        None => is_prime(v, None).probably(),
    }
}

/// Exhaustive search over `a >= b >= c >= d`; completeness for every
/// non-negative integer is Lagrange's theorem.
fn exhaustive(x: u64) -> FourSquares {
    let isqrt = |v: u64| (v as f64).sqrt() as u64 + 1;
    let mut a = isqrt(x);
    while a * a > x {
        a -= 1;
    }
    loop {
        let ra = x - a * a;
        let mut b = isqrt(ra).min(a);
        while b * b > ra {
            b -= 1;
        }
        loop {
            let rb = ra - b * b;
            let mut c = isqrt(rb).min(b);
            while c * c > rb {
                c -= 1;
            }
            loop {
                let rc = rb - c * c;
                let mut d = isqrt(rc);
                while d * d > rc {
                    d -= 1;
                }
                if d <= c && d * d == rc {
                    return FourSquares {
                        w: [a, b, c, d].map(BigUint::from),
                    };
                }
                if c == 0 {
                    break;
                }
                c -= 1;
            }
            if b == 0 {
                break;
            }
            b -= 1;
        }
        debug_assert!(a > 0, "four-square decomposition must exist");
        a -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn zero_decomposes_to_zeros() {
        let mut rng = ChaCha20Rng::from_seed([1; 32]);
        let fs = four_square_decompose(&BigUint::zero(), &mut rng);
        assert!(fs.w.iter().all(|w| w.is_zero()));
    }

    #[test]
    fn seven_has_a_decomposition() {
        let mut rng = ChaCha20Rng::from_seed([2; 32]);
        let seven = BigUint::from(7u32);
        let fs = four_square_decompose(&seven, &mut rng);
        assert!(fs.satisfies(&seven));
        // exhaustive oracle: some tuple with entries <= ceil(sqrt(7)) works
        let mut found = false;
        'outer: for a in 0u64..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    for d in 0..=3 {
                        if a * a + b * b + c * c + d * d == 7 {
                            found = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn identity_holds_for_small_range() {
        let mut rng = ChaCha20Rng::from_seed([3; 32]);
        for x in 0u64..2000 {
            let v = BigUint::from(x);
            let fs = four_square_decompose(&v, &mut rng);
            assert!(fs.satisfies(&v), "failed at {x}");
        }
    }

    #[test]
    fn identity_holds_for_large_random_inputs() {
        let mut rng = ChaCha20Rng::from_seed([4; 32]);
        for bits in [33u64, 40, 64, 80, 128] {
            for _ in 0..10 {
                let v = rng.gen_biguint(bits);
                let fs = four_square_decompose(&v, &mut rng);
                assert!(fs.satisfies(&v), "failed at {v} ({bits} bits)");
            }
        }
    }

    #[test]
    fn awkward_residues() {
        // 4^a (8b + 7) needs all four squares; 2^62 * 7 stresses the stripping
        let mut rng = ChaCha20Rng::from_seed([5; 32]);
        for x in [
            BigUint::from(7u64 << 62),
            BigUint::from(u64::MAX),
            (BigUint::one() << 64u32) - BigUint::one(),
            BigUint::from(8u64 * 123_456_789 + 7),
        ] {
            let fs = four_square_decompose(&x, &mut rng);
            assert!(fs.satisfies(&x));
        }
    }
}
