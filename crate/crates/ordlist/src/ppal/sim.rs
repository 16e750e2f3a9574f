//! Zero-knowledge simulator for the list protocol.
//!
//! The simulator never sees a list. It publishes a digest whose signature
//! component is `u^v` for a random group element `u`, then answers each
//! query (given only the ordered answer from the order oracle) with member
//! witnesses `g1^r` for table-cached per-element randomness, order witnesses
//! `g2^(r_next / r_prev)`, and `lambda = u / prod H(t_i || y_i)`. All three
//! verification equations hold, and every component is distributed exactly
//! like a real proof.

use std::collections::HashMap;

use blstrs::{G1Projective, G2Projective, Scalar};
use group::ff::Field;
use group::{Curve, Group};
use rand::RngCore;

use super::{element_hash, BilinearContext, ClientDigest, QueryProof};

pub struct PpalSimulator {
    v: Scalar,
    /// The random element whose signature stands in for the list signature.
    anchor: G1Projective,
    /// element -> blinding exponent, reused across queries.
    table: HashMap<Vec<u8>, Scalar>,
}

impl PpalSimulator {
    /// Emits the simulated client digest `(g1^v, g2^v, u^v)`.
    pub fn new(_ctx: &BilinearContext, rng: &mut impl RngCore) -> (Self, ClientDigest) {
        let v = super::nonzero_scalar(rng);
        let anchor = G1Projective::generator() * super::nonzero_scalar(rng);
        let digest = ClientDigest {
            public_key_g1: (G1Projective::generator() * v).to_affine(),
            public_key_g2: (G2Projective::generator() * v).to_affine(),
            list_signature: (anchor * v).to_affine(),
        };
        (
            PpalSimulator {
                v,
                anchor,
                table: HashMap::new(),
            },
            digest,
        )
    }

    /// Produces a proof for a query whose ordered answer is `order` (obtained
    /// from the order oracle over the hidden list). Repeated elements reuse
    /// their table entry, so overlapping queries share member witnesses.
    pub fn respond(&mut self, order: &[Vec<u8>], rng: &mut impl RngCore) -> QueryProof {
        let exponents: Vec<Scalar> = order
            .iter()
            .map(|element| {
                *self
                    .table
                    .entry(element.clone())
                    .or_insert_with(|| super::nonzero_scalar(rng))
            })
            .collect();

        let witnesses: Vec<G1Projective> = exponents
            .iter()
            .map(|r| G1Projective::generator() * r)
            .collect();
        let witness_affines: Vec<_> = witnesses.iter().map(|w| w.to_affine()).collect();

        let hashes: Vec<G1Projective> = order
            .iter()
            .zip(&witness_affines)
            .map(|(element, witness)| element_hash(witness, element))
            .collect();

        let sigma_order: G1Projective = hashes.iter().map(|h| h * self.v).sum();
        let hash_sum: G1Projective = hashes.iter().sum();
        let lambda = self.anchor - hash_sum;

        let order_witnesses = exponents
            .windows(2)
            .map(|pair| {
                let ratio = pair[1] * pair[0].invert().expect("exponents are nonzero");
                (G2Projective::generator() * ratio).to_affine()
            })
            .collect();

        QueryProof {
            order: order.to_vec(),
            sigma_order: sigma_order.to_affine(),
            member_witnesses: witness_affines,
            lambda: lambda.to_affine(),
            order_witnesses,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{ppal_verify, BilinearContext};
    use super::*;
    use crate::Decision;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn simulated_proofs_are_accepted() {
        let ctx = BilinearContext::new();
        let mut rng = ChaCha20Rng::from_seed([21; 32]);
        let (mut sim, digest) = PpalSimulator::new(&ctx, &mut rng);
        let order: Vec<Vec<u8>> = ["a", "b", "c"]
            .iter()
            .map(|s| s.as_bytes().to_vec())
            .collect();
        let proof = sim.respond(&order, &mut rng);
        assert_eq!(ppal_verify(&ctx, &digest, &order, &proof), Decision::Accept);
    }

    #[test]
    fn table_reuse_across_overlapping_queries() {
        let ctx = BilinearContext::new();
        let mut rng = ChaCha20Rng::from_seed([22; 32]);
        let (mut sim, digest) = PpalSimulator::new(&ctx, &mut rng);

        let ab: Vec<Vec<u8>> = vec![b"A".to_vec(), b"B".to_vec()];
        let bc: Vec<Vec<u8>> = vec![b"B".to_vec(), b"C".to_vec()];
        let p1 = sim.respond(&ab, &mut rng);
        let p2 = sim.respond(&bc, &mut rng);
        // B's member witness is identical across both proofs
        assert_eq!(p1.member_witnesses[1], p2.member_witnesses[0]);
        assert_eq!(ppal_verify(&ctx, &digest, &ab, &p1), Decision::Accept);
        assert_eq!(ppal_verify(&ctx, &digest, &bc, &p2), Decision::Accept);

        // repeating a query reproduces the same member witnesses
        let p3 = sim.respond(&ab, &mut rng);
        assert_eq!(p1.member_witnesses, p3.member_witnesses);
    }
}
