//! Fixed-base scalar multiplication tables for the two generators.
//!
//! Setup performs thousands of multiplications with base `g1` or `g2`; a
//! byte-windowed table turns each into at most 32 group additions. Tables
//! are built lazily once per process.

use blstrs::{G1Projective, G2Projective, Scalar};
use group::Group;
use once_cell::sync::Lazy;

pub(crate) struct FixedBaseTable<G> {
    // rows[i][j] = base^(j * 256^i), j in 0..256
    rows: Vec<Vec<G>>,
}

impl<G: Group<Scalar = Scalar> + Copy> FixedBaseTable<G> {
    fn new(base: G) -> Self {
        let mut rows = Vec::with_capacity(32);
        let mut shifted = base;
        for _ in 0..32 {
            let mut row = Vec::with_capacity(256);
            row.push(G::identity());
            for j in 1..256 {
                let next = row[j - 1] + shifted;
                row.push(next);
            }
            shifted = row[255] + shifted;
            rows.push(row);
        }
        FixedBaseTable { rows }
    }

    pub(crate) fn mul(&self, scalar: &Scalar) -> G {
        let bytes = scalar.to_bytes_le();
        let mut acc = G::identity();
        for (i, &b) in bytes.iter().enumerate() {
            if b != 0 {
                acc += self.rows[i][b as usize];
            }
        }
        acc
    }
}

static G1_TABLE: Lazy<FixedBaseTable<G1Projective>> =
    Lazy::new(|| FixedBaseTable::new(G1Projective::generator()));

static G2_TABLE: Lazy<FixedBaseTable<G2Projective>> =
    Lazy::new(|| FixedBaseTable::new(G2Projective::generator()));

/// `g1^scalar` via the precomputed table.
pub(crate) fn g1_generator_mul(scalar: &Scalar) -> G1Projective {
    G1_TABLE.mul(scalar)
}

/// `g2^scalar` via the precomputed table.
pub(crate) fn g2_generator_mul(scalar: &Scalar) -> G2Projective {
    G2_TABLE.mul(scalar)
}
