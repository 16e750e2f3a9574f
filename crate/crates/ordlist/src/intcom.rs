//! Homomorphic integer commitments over a group of unknown order.
//!
//! Damgård–Fujisaki commitments instantiated in the quadratic residues of an
//! RSA modulus with safe prime factors: `c = g^x h^r` with `g = h^s`. The
//! scheme is statistically hiding and computationally binding, additively
//! homomorphic (`commit(x) * commit(y)` opens to `x + y`), and equivocable
//! given the trapdoor `(ord(G), s)` kept by [`ic_setup`]. Parameters are
//! generated in one process (trusted-parameters model); a single setup serves
//! both the honest committer and the simulator.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_prime::nt_funcs::is_prime;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use rand::RngCore;
use thiserror::Error;

use crate::wire::{Reader, WireError, Writer};

/// Challenge-space bound `F(k) = 2^128`, shared with the range proof layer.
pub const CHALLENGE_BITS: u64 = 128;

/// Default committed-message bound `M = 2^64`.
pub const DEFAULT_MESSAGE_BITS: u64 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntComError {
    #[error("modulus must be at least 512 bits (test profile) or 1024 (real use)")]
    ModulusTooSmall,
    #[error("message magnitude exceeds the configured bound")]
    MessageTooLarge,
    #[error("group element is not invertible; modulus factored")]
    DegenerateElement,
}

/// Public commitment key: modulus, bases and bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntCommitParams {
    modulus: BigUint,
    g: BigUint,
    h: BigUint,
    challenge_bound: BigUint,
    order_bound_bits: u64,
    stat_bits: u64,
    message_bound: BigUint,
}

/// Equivocation trapdoor: the group order and the discrete log of `g` base `h`.
#[derive(Debug, Clone)]
pub struct IntCommitTrapdoor {
    group_order: BigUint,
    dlog: BigUint,
}

/// A commitment value `c` in the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntCommitment {
    value: BigUint,
}

/// Opening information `(x, r, b)` with `c = g^x h^r b` and `b^2 = 1`.
///
/// An honest committer always has `b = 1`; any unit of square one is accepted
/// at verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opening {
    pub integer: BigInt,
    pub randomness: BigInt,
    pub unit: BigUint,
}

impl IntCommitParams {
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn g(&self) -> &BigUint {
        &self.g
    }

    pub fn h(&self) -> &BigUint {
        &self.h
    }

    pub fn challenge_bound(&self) -> &BigUint {
        &self.challenge_bound
    }

    pub fn order_bound_bits(&self) -> u64 {
        self.order_bound_bits
    }

    pub fn stat_bits(&self) -> u64 {
        self.stat_bits
    }

    pub fn message_bound(&self) -> &BigUint {
        &self.message_bound
    }

    /// Commitment randomness range `[0, 2^(B + k))`.
    pub fn randomness_bits(&self) -> u64 {
        self.order_bound_bits + self.stat_bits
    }

    /// `g^a h^b` mod N with signed exponents.
    pub fn commit_raw(&self, a: &BigInt, b: &BigInt) -> Result<BigUint, IntComError> {
        let ga = pow_signed(&self.g, a, &self.modulus)?;
        let hb = pow_signed(&self.h, b, &self.modulus)?;
        Ok(ga * hb % &self.modulus)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }

    pub fn write(&self, w: &mut Writer) {
        w.put_uint(&self.modulus);
        w.put_uint(&self.g);
        w.put_uint(&self.h);
        w.put_uint(&self.challenge_bound);
        w.put_uint(&BigUint::from(self.order_bound_bits));
        w.put_uint(&BigUint::from(self.stat_bits));
        w.put_uint(&self.message_bound);
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        use num_traits::ToPrimitive;
        let modulus = r.get_uint()?;
        let g = r.get_uint()?;
        let h = r.get_uint()?;
        let challenge_bound = r.get_uint()?;
        let order_bound_bits = r
            .get_uint()?
            .to_u64()
            .ok_or(WireError::Malformed("order bound out of range"))?;
        let stat_bits = r
            .get_uint()?
            .to_u64()
            .ok_or(WireError::Malformed("stat bits out of range"))?;
        let message_bound = r.get_uint()?;
        if modulus.bits() < 16 || g >= modulus || h >= modulus {
            return Err(WireError::Malformed("commitment parameters out of range"));
        }
        if order_bound_bits != modulus.bits()
            || stat_bits == 0
            || stat_bits > 1 << 20
            || challenge_bound.is_zero()
            || message_bound.is_zero()
        {
            return Err(WireError::Malformed("inconsistent commitment bounds"));
        }
        Ok(IntCommitParams {
            modulus,
            g,
            h,
            challenge_bound,
            order_bound_bits,
            stat_bits,
            message_bound,
        })
    }
}

impl IntCommitment {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn from_value(value: BigUint) -> Self {
        IntCommitment { value }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_uint(&self.value);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let value = r.get_uint()?;
        r.finish()?;
        Ok(IntCommitment { value })
    }
}

impl Opening {
    pub fn trivial(integer: BigInt, randomness: BigInt) -> Self {
        Opening {
            integer,
            randomness,
            unit: BigUint::one(),
        }
    }

    /// Opening for the product of two commitments.
    pub fn combine(&self, other: &Opening, params: &IntCommitParams) -> Opening {
        Opening {
            integer: &self.integer + &other.integer,
            randomness: &self.randomness + &other.randomness,
            unit: &self.unit * &other.unit % params.modulus(),
        }
    }

    /// Opening for the quotient of two commitments.
    pub fn divide(
        &self,
        other: &Opening,
        params: &IntCommitParams,
    ) -> Result<Opening, IntComError> {
        let inv_unit = mod_inverse(&other.unit, params.modulus())?;
        Ok(Opening {
            integer: &self.integer - &other.integer,
            randomness: &self.randomness - &other.randomness,
            unit: &self.unit * inv_unit % params.modulus(),
        })
    }

    pub fn write(&self, w: &mut Writer) {
        w.put_int(&self.integer);
        w.put_int(&self.randomness);
        w.put_uint(&self.unit);
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        Ok(Opening {
            integer: r.get_int()?,
            randomness: r.get_int()?,
            unit: r.get_uint()?,
        })
    }
}

/// Generates commitment parameters and the matching trapdoor.
///
/// `modulus_bits` doubles as the statistical security parameter: randomness
/// is drawn from `[0, 2^(B + k))` with `B = k = modulus_bits`. The modulus is
/// a product of two safe primes and the base `h` a random square, so the
/// working group is the quadratic residues of `Z_N^*`.
pub fn ic_setup(
    modulus_bits: u64,
    rng: &mut impl RngCore,
) -> Result<(IntCommitParams, IntCommitTrapdoor), IntComError> {
    if modulus_bits < 512 {
        return Err(IntComError::ModulusTooSmall);
    }
    let half = modulus_bits / 2;
    let (p_prime, p) = gen_safe_prime(rng, half);
    let (q_prime, q) = loop {
        let candidate = gen_safe_prime(rng, modulus_bits - half);
        if candidate.1 != p {
            break candidate;
        }
    };
    let modulus = &p * &q;
    let group_order = p_prime * q_prime;

    let h = loop {
        let a = rng.gen_biguint_range(&BigUint::from(2u32), &modulus);
        if a.gcd(&modulus) != BigUint::one() {
            continue; // factored N by accident; unreachable in practice
        }
        let h = &a * &a % &modulus;
        if h != BigUint::one() {
            break h;
        }
    };

    let order_bound_bits = modulus.bits();
    let stat_bits = modulus_bits;
    let s = rng.gen_biguint(order_bound_bits + stat_bits);
    let g = h.modpow(&s, &modulus);

    Ok((
        IntCommitParams {
            modulus,
            g,
            h,
            challenge_bound: BigUint::one() << CHALLENGE_BITS,
            order_bound_bits,
            stat_bits,
            message_bound: BigUint::one() << DEFAULT_MESSAGE_BITS,
        },
        IntCommitTrapdoor {
            group_order,
            dlog: s,
        },
    ))
}

/// Commits to `x` with fresh randomness; returns the commitment and opening.
pub fn ic_commit(
    params: &IntCommitParams,
    x: &BigInt,
    rng: &mut impl RngCore,
) -> Result<(IntCommitment, Opening), IntComError> {
    if x.magnitude() > params.message_bound() {
        return Err(IntComError::MessageTooLarge);
    }
    let r = rng.gen_biguint(params.randomness_bits());
    let opening = Opening::trivial(x.clone(), BigInt::from(r));
    let value = params.commit_raw(&opening.integer, &opening.randomness)?;
    Ok((IntCommitment { value }, opening))
}

/// Checks `c = g^x h^r b` with `b^2 = 1`.
pub fn ic_verify_open(params: &IntCommitParams, c: &IntCommitment, opening: &Opening) -> bool {
    let n = params.modulus();
    if opening.unit.is_zero() || &opening.unit >= n {
        return false;
    }
    if &opening.unit * &opening.unit % n != BigUint::one() {
        return false;
    }
    match params.commit_raw(&opening.integer, &opening.randomness) {
        Ok(gh) => gh * &opening.unit % n == c.value,
        Err(_) => false,
    }
}

/// Product of two commitments; opens to the sum of the committed integers.
pub fn ic_combine(
    params: &IntCommitParams,
    c1: &IntCommitment,
    c2: &IntCommitment,
) -> IntCommitment {
    IntCommitment {
        value: &c1.value * &c2.value % params.modulus(),
    }
}

/// Quotient of two commitments; opens to the difference of the committed
/// integers. Fails only if the divisor is not invertible, which would mean
/// the modulus has been factored.
pub fn ic_divide(
    params: &IntCommitParams,
    c1: &IntCommitment,
    c2: &IntCommitment,
) -> Result<IntCommitment, IntComError> {
    let inv = mod_inverse(&c2.value, params.modulus())?;
    Ok(IntCommitment {
        value: &c1.value * inv % params.modulus(),
    })
}

/// Opens `c` to an arbitrary `target` using the trapdoor: the returned
/// opening is `(target, r + s*x - s*target mod ord(G), 1)`.
pub fn ic_equivocate(
    params: &IntCommitParams,
    trapdoor: &IntCommitTrapdoor,
    c: &IntCommitment,
    opening: &Opening,
    target: &BigInt,
) -> Opening {
    debug_assert!(ic_verify_open(params, c, opening));
    let ord = BigInt::from(trapdoor.group_order.clone());
    let s = BigInt::from(trapdoor.dlog.clone());
    let shifted = &opening.randomness + &s * (&opening.integer - target);
    let reduced = shifted.mod_floor(&ord);
    Opening {
        integer: target.clone(),
        randomness: reduced,
        unit: opening.unit.clone(),
    }
}

/// `base^exp mod n` where `exp` may be negative.
pub fn pow_signed(base: &BigUint, exp: &BigInt, n: &BigUint) -> Result<BigUint, IntComError> {
    if exp.is_negative() {
        let inv = mod_inverse(base, n)?;
        Ok(inv.modpow(exp.magnitude(), n))
    } else {
        Ok(base.modpow(exp.magnitude(), n))
    }
}

pub fn mod_inverse(a: &BigUint, n: &BigUint) -> Result<BigUint, IntComError> {
    let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(n.clone()));
    if !e.gcd.is_one() {
        return Err(IntComError::DegenerateElement);
    }
    Ok(e.x
        .mod_floor(&BigInt::from(n.clone()))
        .to_biguint()
        .expect("mod_floor of positive modulus is non-negative"))
}

static SMALL_PRIMES: Lazy<Vec<u64>> = Lazy::new(|| {
    let limit = 10_000usize;
    let mut sieve = vec![true; limit];
    let mut out = Vec::new();
    for n in 3..limit {
        if sieve[n] {
            out.push(n as u64);
            let mut m = n * n;
            while m < limit {
                sieve[m] = false;
                m += n;
            }
        }
    }
    out
});

/// Safe-prime generation: returns `(q, p)` with `p = 2q + 1`, both prime and
/// `p` exactly `bits + 1` bits wide.
///
/// Searches an arithmetic progression from a random odd start, sieving `q`
/// and `p` jointly against small primes before any primality test. The
/// incremental scan is deterministic for a seeded RNG.
fn gen_safe_prime(rng: &mut impl RngCore, bits: u64) -> (BigUint, BigUint) {
    let q_bits = bits - 1;
    const SPAN: usize = 1 << 16;
    loop {
        let mut q0 = rng.gen_biguint(q_bits.saturating_sub(2));
        q0.set_bit(q_bits - 1, true);
        q0.set_bit(q_bits - 2, true);
        q0.set_bit(0, true);

        let mut alive = vec![true; SPAN];
        for &r in SMALL_PRIMES.iter() {
            let q0_mod = mod_u64(&q0, r);
            let inv2 = r.div_ceil(2);
            // q0 + 2i = 0 (mod r)
            let mut i = ((r - q0_mod) % r).wrapping_mul(inv2) % r;
            while (i as usize) < SPAN {
                alive[i as usize] = false;
                i += r;
            }
            // 2*q0 + 1 + 4i = 0 (mod r)
            let p0_mod = (2 * q0_mod + 1) % r;
            let inv4 = inv2 * inv2 % r;
            let mut i = ((r - p0_mod) % r).wrapping_mul(inv4) % r;
            while (i as usize) < SPAN {
                alive[i as usize] = false;
                i += r;
            }
        }

        for (i, &ok) in alive.iter().enumerate() {
            if !ok {
                continue;
            }
            let q = &q0 + BigUint::from(2 * i as u64);
            if q.bits() != q_bits {
                break;
            }
            if !is_prime(&q, None).probably() {
                continue;
            }
            let p = (&q << 1) | BigUint::one();
            if is_prime(&p, None).probably() {
                return (q, p);
            }
        }
    }
}

fn mod_u64(v: &BigUint, m: u64) -> u64 {
    (v % BigUint::from(m))
        .to_u64_digits()
        .first()
        .copied()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rng(seed: u64) -> ChaCha20Rng {
        let mut s = [0u8; 32];
        s[..8].copy_from_slice(&seed.to_le_bytes());
        ChaCha20Rng::from_seed(s)
    }

    fn test_params(seed: u64) -> (IntCommitParams, IntCommitTrapdoor) {
        ic_setup(512, &mut rng(seed)).unwrap()
    }

    #[test]
    fn setup_satisfies_defining_relations() {
        let mut r = rng(1);
        let (params, td) = ic_setup(512, &mut r).unwrap();
        // g = h^s
        assert_eq!(params.h.modpow(&td.dlog, &params.modulus), params.g);
        // h^ord = 1
        assert_eq!(
            params.h.modpow(&td.group_order, &params.modulus),
            BigUint::one()
        );
        assert_eq!(params.order_bound_bits, params.modulus.bits());
    }

    #[test]
    fn setups_are_independent() {
        let (a, _) = test_params(2);
        let (b, _) = test_params(3);
        assert_ne!(a.modulus, b.modulus);
        assert_ne!(a.g, b.g);
    }

    #[test]
    fn commit_open_round_trip() {
        let (params, _) = test_params(4);
        let mut r = rng(40);
        for x in [0i64, 1, -1, 42, -9_000_000, i64::MAX] {
            let (c, o) = ic_commit(&params, &BigInt::from(x), &mut r).unwrap();
            assert!(ic_verify_open(&params, &c, &o));
        }
    }

    #[test]
    fn commit_matches_direct_formula() {
        let (params, _) = test_params(5);
        let mut r = rng(50);
        let x = BigInt::from(771_234i64);
        let (c, o) = ic_commit(&params, &x, &mut r).unwrap();
        let gx = params
            .g
            .modpow(&o.integer.to_biguint().unwrap(), &params.modulus);
        let hr = params
            .h
            .modpow(&o.randomness.to_biguint().unwrap(), &params.modulus);
        assert_eq!(c.value, gx * hr % &params.modulus);
    }

    #[test]
    fn rejects_oversized_message() {
        let (params, _) = test_params(6);
        let big = BigInt::from(BigUint::one() << 65);
        assert_eq!(
            ic_commit(&params, &big, &mut rng(60)).unwrap_err(),
            IntComError::MessageTooLarge
        );
    }

    #[test]
    fn tampered_opening_fails() {
        let (params, _) = test_params(7);
        let mut r = rng(70);
        let (c, o) = ic_commit(&params, &BigInt::from(9), &mut r).unwrap();
        let mut bad = o.clone();
        bad.integer += 1;
        assert!(!ic_verify_open(&params, &c, &bad));
        let mut bad = o;
        bad.randomness -= 1;
        assert!(!ic_verify_open(&params, &c, &bad));
    }

    #[test]
    fn nontrivial_unit_is_accepted() {
        let (params, _) = test_params(8);
        let mut r = rng(80);
        let (c, o) = ic_commit(&params, &BigInt::from(13), &mut r).unwrap();
        // (N-1)^2 = 1 mod N; adjust c by the unit
        let unit = params.modulus() - BigUint::one();
        let c_adj = IntCommitment {
            value: &c.value * &unit % params.modulus(),
        };
        let o_adj = Opening { unit, ..o };
        assert!(ic_verify_open(&params, &c_adj, &o_adj));
    }

    #[test]
    fn homomorphism_combine_and_divide() {
        let (params, _) = test_params(9);
        let mut r = rng(90);
        let (c5, o5) = ic_commit(&params, &BigInt::from(5), &mut r).unwrap();
        let (c7, o7) = ic_commit(&params, &BigInt::from(7), &mut r).unwrap();
        let c12 = ic_combine(&params, &c5, &c7);
        let o12 = o5.combine(&o7, &params);
        assert_eq!(o12.integer, BigInt::from(12));
        assert_eq!(o12.randomness, &o5.randomness + &o7.randomness);
        assert!(ic_verify_open(&params, &c12, &o12));

        // self-quotient opens to zero with zero randomness
        let c0 = ic_divide(&params, &c5, &c5).unwrap();
        let o0 = o5.divide(&o5, &params).unwrap();
        assert!(o0.integer.is_zero() && o0.randomness.is_zero());
        assert!(ic_verify_open(&params, &c0, &o0));
    }

    #[test]
    fn rank_gap_identity() {
        // divide(C(j), combine(C(i), C(1))) opens to j - i - 1
        let (params, _) = test_params(10);
        let mut r = rng(100);
        let (ci, oi) = ic_commit(&params, &BigInt::from(3), &mut r).unwrap();
        let (cj, oj) = ic_commit(&params, &BigInt::from(9), &mut r).unwrap();
        let (c1, o1) = ic_commit(&params, &BigInt::from(1), &mut r).unwrap();
        let denom = ic_combine(&params, &ci, &c1);
        let gap = ic_divide(&params, &cj, &denom).unwrap();
        let o_gap = oj.divide(&oi.combine(&o1, &params), &params).unwrap();
        assert_eq!(o_gap.integer.to_i64(), Some(5));
        assert!(ic_verify_open(&params, &gap, &o_gap));
    }

    #[test]
    fn equivocation() {
        let (params, td) = test_params(11);
        let mut r = rng(110);
        let (c, o) = ic_commit(&params, &BigInt::from(0), &mut r).unwrap();
        let o42 = ic_equivocate(&params, &td, &c, &o, &BigInt::from(42));
        assert_eq!(o42.integer, BigInt::from(42));
        assert!(ic_verify_open(&params, &c, &o42));

        // fixed point: equivocating to the original integer still verifies
        let o_same = ic_equivocate(&params, &td, &c, &o, &BigInt::from(0));
        assert!(ic_verify_open(&params, &c, &o_same));
        assert_eq!(o_same.integer, o.integer);

        // chain 0 -> 5 -> -3
        let o5 = ic_equivocate(&params, &td, &c, &o, &BigInt::from(5));
        let o_neg = ic_equivocate(&params, &td, &c, &o5, &BigInt::from(-3));
        assert_eq!(o_neg.integer, BigInt::from(-3));
        assert!(ic_verify_open(&params, &c, &o_neg));
    }

    #[test]
    fn hiding_smoke_byte_means() {
        // sampled statistical-hiding check: the low byte of commitments to 0
        // and to 1 has indistinguishable sample means over 10^4 draws each
        use num_traits::ToPrimitive;
        use rayon::prelude::*;
        let (params, _) = test_params(13);
        let mean_low_byte = |value: i64, salt: u64| -> f64 {
            let total: u64 = (0..10_000u64)
                .into_par_iter()
                .map(|i| {
                    let mut r = rng(salt.wrapping_add(i));
                    let (c, _) = ic_commit(&params, &BigInt::from(value), &mut r).unwrap();
                    (c.value() % BigUint::from(256u32)).to_u64().unwrap()
                })
                .sum();
            total as f64 / 10_000.0
        };
        let m0 = mean_low_byte(0, 9_000_000);
        let m1 = mean_low_byte(1, 8_000_000);
        // std of the difference of means is about 1.05; allow six sigma
        assert!((m0 - m1).abs() < 6.3, "means {m0:.2} vs {m1:.2}");
    }

    #[test]
    fn params_round_trip() {
        let (params, _) = test_params(12);
        let bytes = params.to_bytes();
        let mut r = Reader::new(&bytes);
        let back = IntCommitParams::read(&mut r).unwrap();
        r.finish().unwrap();
        assert_eq!(params, back);
    }
}
