//! Privacy-preserving authenticated lists over BLS12-381.
//!
//! Three parties: a trusted owner holding the list, an untrusted server
//! answering queries, and a client verifying answers against a constant-size
//! digest. Every element's (hidden) rank `i` is accumulated into a member
//! witness `t_i = g1^(s^i * r_i)` blinded by a per-element random `r_i`; the
//! owner signs each `(t_i, element)` pair and aggregates the signatures into
//! the list digest signature. The server derives sublist signatures and
//! order witnesses without the owner, and the client checks a batch order
//! answer of size `m` with exactly `2m + 2` pairings.
//!
//! The pairing is asymmetric: member witnesses, signatures and hash outputs
//! live in `G1`, accumulator powers and order witnesses in `G2`, and the
//! public key is published in both groups.
//!
//! Member witnesses are uniformly random group elements (the `r_i` blinding),
//! which is what makes the zero-knowledge simulation of [`PpalSimulator`]
//! work: simulated witnesses `g1^r` are distributed identically to real ones.

mod fixed_base;
mod sim;
mod tree;

pub use sim::PpalSimulator;
pub use tree::{build_product_tree, ProductTree};

use std::collections::{HashMap, HashSet};

use blstrs::{pairing, G1Affine, G1Projective, G2Affine, G2Projective, Scalar};
use group::ff::Field;
use group::prime::PrimeCurveAffine;
use group::{Curve, Group};
use rand::RngCore;
use thiserror::Error;

use crate::list::SourceList;
use crate::wire::{Reader, WireError, Writer};
use crate::Decision;

use fixed_base::{g1_generator_mul, g2_generator_mul};

const SIG_DST: &[u8] = b"PPAL-SIG";
const SALT_DST: &[u8] = b"PPAL-SALT";

/// Default ceiling on accepted query sizes; a client-side denial-of-service
/// guard, not part of the cryptographic scheme.
pub const DEFAULT_MAX_QUERY_LEN: usize = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PpalError {
    #[error("queried element is not a member of the list")]
    NotMember(Vec<u8>),
    #[error("invalid query: {0}")]
    InvalidQuery(&'static str),
    #[error("digest does not match the list")]
    InconsistentDigest,
    #[error("interval ({i},{j}) out of range for {n} leaves")]
    IndexError { i: usize, j: usize, n: usize },
    #[error("cannot aggregate an empty set of signatures")]
    EmptyAggregate,
}

/// Pairing-group context: hash domain tags are fixed; the query-size ceiling
/// is configurable.
#[derive(Debug, Clone)]
pub struct BilinearContext {
    max_query_len: usize,
}

impl BilinearContext {
    pub fn new() -> Self {
        BilinearContext {
            max_query_len: DEFAULT_MAX_QUERY_LEN,
        }
    }

    pub fn with_max_query_len(max_query_len: usize) -> Self {
        BilinearContext { max_query_len }
    }

    /// Full-domain hash into `G1` for signatures.
    pub fn hash_to_group(&self, message: &[u8]) -> G1Projective {
        G1Projective::hash_to_curve(message, SIG_DST, &[])
    }

    /// Hash of the per-list nonce, in its own domain.
    pub fn hash_salt(&self, nonce: &[u8]) -> G1Projective {
        G1Projective::hash_to_curve(nonce, SALT_DST, &[])
    }
}

impl Default for BilinearContext {
    fn default() -> Self {
        Self::new()
    }
}

/// Unambiguous framing for the signed `(witness, element)` pair: compressed
/// witness, then a 4-byte big-endian element length, then the element.
pub(crate) fn witness_message(witness: &G1Affine, element: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(48 + 4 + element.len());
    out.extend_from_slice(&witness.to_compressed());
    out.extend_from_slice(&(element.len() as u32).to_be_bytes());
    out.extend_from_slice(element);
    out
}

/// `psi_i = H(t_i || x_i)`.
pub(crate) fn element_hash(witness: &G1Affine, element: &[u8]) -> G1Projective {
    G1Projective::hash_to_curve(&witness_message(witness, element), SIG_DST, &[])
}

/// The owner's secret: accumulator trapdoor `s` and signing key `v`.
/// Returned by setup for owner persistence and test oracles only; no part of
/// it is embedded in either digest.
#[derive(Debug, Clone)]
pub struct OwnerSecret {
    pub s: Scalar,
    pub v: Scalar,
}

/// Per-list nonce and its owner-side salted signature `H(omega)^v`.
#[derive(Debug, Clone)]
pub struct ListNonce {
    pub omega: [u8; 32],
    pub salt: G1Affine,
}

/// What the client stores: the public key (in both groups) and the list
/// digest signature. Constant size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientDigest {
    pub public_key_g1: G1Affine,
    pub public_key_g2: G2Affine,
    pub list_signature: G1Affine,
}

/// What the server stores: the client digest material plus the accumulator
/// powers, per-element member witnesses and signatures, the hashed nonce and
/// the order-authentication randomness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerDigest {
    pub public_key_g1: G1Affine,
    pub public_key_g2: G2Affine,
    pub list_signature: G1Affine,
    /// `g2^(s^i)` for `i in 0..=n`.
    pub powers: Vec<G2Affine>,
    /// `(t_i, sigma_i)` for `i in 1..=n`, in list order.
    pub member_auth: Vec<(G1Affine, G1Affine)>,
    /// `H(omega)`.
    pub salt_hash: G1Affine,
    /// `r_i` for `i in 1..=n`, pairwise distinct.
    pub order_auth: Vec<Scalar>,
}

impl ServerDigest {
    pub fn client_digest(&self) -> ClientDigest {
        ClientDigest {
            public_key_g1: self.public_key_g1,
            public_key_g2: self.public_key_g2,
            list_signature: self.list_signature,
        }
    }

    pub fn len(&self) -> usize {
        self.member_auth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_auth.is_empty()
    }
}

/// Proof for a batch order query of `m` elements: `m` member witnesses,
/// `m - 1` order witnesses and two aggregate group elements. Linear in `m`,
/// independent of the list size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryProof {
    /// The queried elements permuted into list order.
    pub order: Vec<Vec<u8>>,
    pub sigma_order: G1Affine,
    pub member_witnesses: Vec<G1Affine>,
    pub lambda: G1Affine,
    pub order_witnesses: Vec<G2Affine>,
}

fn nonzero_scalar(rng: &mut impl RngCore) -> Scalar {
    loop {
        let s = Scalar::random(&mut *rng);
        if !bool::from(s.is_zero()) {
            return s;
        }
    }
}

/// Owner setup: produces both digests for `list`.
///
/// The returned [`OwnerSecret`] and [`ListNonce`] stay with the owner; tests
/// use them as a trapdoor oracle.
pub fn ppal_setup(
    ctx: &BilinearContext,
    list: &SourceList,
    rng: &mut impl RngCore,
) -> Result<(ClientDigest, ServerDigest, OwnerSecret, ListNonce), PpalError> {
    let n = list.len();
    let s = nonzero_scalar(rng);
    let v = nonzero_scalar(rng);

    // powers of the trapdoor in the scalar field, then g2^(s^i)
    let mut s_pow = Vec::with_capacity(n + 1);
    s_pow.push(Scalar::ONE);
    for i in 1..=n {
        let next = s_pow[i - 1] * s;
        s_pow.push(next);
    }
    let powers: Vec<G2Affine> = s_pow
        .iter()
        .map(|p| g2_generator_mul(p).to_affine())
        .collect();

    // pairwise distinct blinding exponents
    let mut order_auth = Vec::with_capacity(n);
    let mut seen = HashSet::with_capacity(n);
    while order_auth.len() < n {
        let r = nonzero_scalar(rng);
        if seen.insert(r.to_bytes_le()) {
            order_auth.push(r);
        }
    }

    let mut member_auth = Vec::with_capacity(n);
    let mut sig_sum = G1Projective::identity();
    for (idx, element) in list.elements().iter().enumerate() {
        let witness = g1_generator_mul(&(s_pow[idx + 1] * order_auth[idx])).to_affine();
        let sigma = (element_hash(&witness, element) * v).to_affine();
        sig_sum += G1Projective::from(sigma);
        member_auth.push((witness, sigma));
    }

    let mut omega = [0u8; 32];
    rng.fill_bytes(&mut omega);
    let salt_hash = ctx.hash_salt(&omega).to_affine();
    let salt = (G1Projective::from(salt_hash) * v).to_affine();
    let list_signature = (G1Projective::from(salt) + sig_sum).to_affine();

    let public_key_g1 = g1_generator_mul(&v).to_affine();
    let public_key_g2 = g2_generator_mul(&v).to_affine();

    let server = ServerDigest {
        public_key_g1,
        public_key_g2,
        list_signature,
        powers,
        member_auth,
        salt_hash,
        order_auth,
    };
    Ok((
        server.client_digest(),
        server,
        OwnerSecret { s, v },
        ListNonce { omega, salt },
    ))
}

/// BLS signature on a message: `H(message)^v`. Deterministic.
pub fn sign_element(ctx: &BilinearContext, v: &Scalar, message: &[u8]) -> G1Projective {
    ctx.hash_to_group(message) * v
}

/// Product of signatures. Public: no key material required.
pub fn aggregate(signatures: &[G1Projective]) -> Result<G1Projective, PpalError> {
    if signatures.is_empty() {
        return Err(PpalError::EmptyAggregate);
    }
    Ok(signatures.iter().sum())
}

/// Verifies an aggregate signature over pairwise-distinct messages under one
/// public key: `e(sigma, g2) = e(prod H(M_i), g2^v)`.
pub fn aggregate_verify<M: AsRef<[u8]>>(
    ctx: &BilinearContext,
    public_key_g2: &G2Affine,
    messages: &[M],
    sigma: &G1Projective,
) -> bool {
    let mut seen = HashSet::with_capacity(messages.len());
    for m in messages {
        if !seen.insert(m.as_ref()) {
            return false;
        }
    }
    let hash_prod: G1Projective = messages.iter().map(|m| ctx.hash_to_group(m.as_ref())).sum();
    pairing(&sigma.to_affine(), &G2Affine::generator())
        == pairing(&hash_prod.to_affine(), public_key_g2)
}

/// Server-side query answering.
///
/// `delta` must be distinct members of `list`; with a [`ProductTree`] the
/// complement product costs `O(m log n)`, otherwise the full `O(n)` rebuild
/// runs. Refuses non-members outright.
pub fn ppal_query(
    server: &ServerDigest,
    list: &SourceList,
    delta: &[Vec<u8>],
    tree: Option<&ProductTree>,
) -> Result<QueryProof, PpalError> {
    let n = list.len();
    let m = delta.len();
    if server.member_auth.len() != n {
        return Err(PpalError::InconsistentDigest);
    }
    if m == 0 {
        return Err(PpalError::InvalidQuery("empty query"));
    }
    let mut distinct = HashSet::with_capacity(m);
    for element in delta {
        if !distinct.insert(element.as_slice()) {
            return Err(PpalError::InvalidQuery("duplicate element"));
        }
    }

    // ranks of the queried elements, in list order
    let mut ranked: Vec<(usize, &Vec<u8>)> = Vec::with_capacity(m);
    match tree {
        Some(t) => {
            for element in delta {
                match t.rank_of(element) {
                    Some(rank) => ranked.push((rank, element)),
                    None => return Err(PpalError::NotMember(element.clone())),
                }
            }
        }
        None => {
            let mut wanted: HashMap<&[u8], usize> = HashMap::with_capacity(m);
            for (i, element) in list.elements().iter().enumerate() {
                if distinct.contains(element.as_slice()) {
                    wanted.insert(element.as_slice(), i + 1);
                }
            }
            for element in delta {
                match wanted.get(element.as_slice()) {
                    Some(&rank) => ranked.push((rank, element)),
                    None => return Err(PpalError::NotMember(element.clone())),
                }
            }
        }
    }
    ranked.sort();

    let order: Vec<Vec<u8>> = ranked.iter().map(|(_, e)| (*e).clone()).collect();
    let member_witnesses: Vec<G1Affine> = ranked
        .iter()
        .map(|(rank, _)| server.member_auth[rank - 1].0)
        .collect();

    let sigma_order: G1Projective = ranked
        .iter()
        .map(|(rank, _)| G1Projective::from(server.member_auth[rank - 1].1))
        .sum();

    // lambda = H(omega) * prod over the complement of the queried ranks
    let mut lambda = G1Projective::from(server.salt_hash);
    match tree {
        Some(t) => {
            let mut start = 1usize;
            for (rank, _) in &ranked {
                if *rank > start {
                    lambda += t.range_product(start, rank - 1)?;
                }
                start = rank + 1;
            }
            if start <= n {
                lambda += t.range_product(start, n)?;
            }
        }
        None => {
            for (i, element) in list.elements().iter().enumerate() {
                if !distinct.contains(element.as_slice()) {
                    lambda += element_hash(&server.member_auth[i].0, element);
                }
            }
        }
    }

    // order witnesses for adjacent pairs: (g2^(s^(i'' - i')))^(r_i'^-1 * r_i'')
    let mut order_witnesses = Vec::with_capacity(m - 1);
    for pair in ranked.windows(2) {
        let (lo, hi) = (pair[0].0, pair[1].0);
        let r_lo_inv = server.order_auth[lo - 1]
            .invert()
            .expect("order authentication randomness is nonzero");
        let exponent = r_lo_inv * server.order_auth[hi - 1];
        let witness = (G2Projective::from(server.powers[hi - lo]) * exponent).to_affine();
        order_witnesses.push(witness);
    }

    Ok(QueryProof {
        order,
        sigma_order: sigma_order.to_affine(),
        member_witnesses,
        lambda: lambda.to_affine(),
        order_witnesses,
    })
}

/// Client-side verification; see [`ppal_verify_counted`] for the pairing
/// count.
pub fn ppal_verify(
    ctx: &BilinearContext,
    client: &ClientDigest,
    delta: &[Vec<u8>],
    proof: &QueryProof,
) -> Decision {
    ppal_verify_counted(ctx, client, delta, proof).0
}

/// Verifies a query proof and reports how many pairings were evaluated.
///
/// An accepting run evaluates exactly `2m + 2` pairings: the sublist
/// aggregate check shares its `e(sigma_order, g2)` value with the digest
/// equation, and each of the `m - 1` adjacent order checks costs two.
/// Rejections may short-circuit earlier.
pub fn ppal_verify_counted(
    ctx: &BilinearContext,
    client: &ClientDigest,
    delta: &[Vec<u8>],
    proof: &QueryProof,
) -> (Decision, usize) {
    let mut pairings = 0usize;
    let mut pair = |a: &G1Affine, b: &G2Affine| {
        pairings += 1;
        pairing(a, b)
    };
    let g2 = G2Affine::generator();

    let m = delta.len();
    let structural_ok = m >= 1
        && m <= ctx.max_query_len
        && proof.order.len() == m
        && proof.member_witnesses.len() == m
        && proof.order_witnesses.len() == m - 1
        && {
            let mut distinct = HashSet::with_capacity(m);
            delta.iter().all(|e| distinct.insert(e.as_slice()))
        }
        && {
            // the answer must be a permutation of the query
            let mut a: Vec<&[u8]> = delta.iter().map(|e| e.as_slice()).collect();
            let mut b: Vec<&[u8]> = proof.order.iter().map(|e| e.as_slice()).collect();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        };
    if !structural_ok {
        return (Decision::Reject, pairings);
    }

    // aggregate check: e(sigma_order, g2) = e(prod H(t_j || y_j), g2^v)
    let xi: G1Projective = proof
        .order
        .iter()
        .zip(&proof.member_witnesses)
        .map(|(element, witness)| element_hash(witness, element))
        .sum();
    let sigma_order_g = pair(&proof.sigma_order, &g2);
    if sigma_order_g != pair(&xi.to_affine(), &client.public_key_g2) {
        return (Decision::Reject, pairings);
    }

    // digest check: e(sigma_L, g2) = e(sigma_order, g2) * e(lambda, g2^v)
    let lhs = pair(&client.list_signature, &g2);
    if lhs != sigma_order_g + pair(&proof.lambda, &client.public_key_g2) {
        return (Decision::Reject, pairings);
    }

    // order checks: e(t_j, w_j) = e(t_{j+1}, g2) for each adjacent pair
    for j in 0..m - 1 {
        let left = pair(&proof.member_witnesses[j], &proof.order_witnesses[j]);
        let right = pair(&proof.member_witnesses[j + 1], &g2);
        if left != right {
            return (Decision::Reject, pairings);
        }
    }

    (Decision::Accept, pairings)
}

// --- wire encodings ------------------------------------------------------

fn put_g1(w: &mut Writer, p: &G1Affine) {
    w.put_raw(&p.to_compressed());
}

fn get_g1(r: &mut Reader) -> Result<G1Affine, WireError> {
    let bytes: [u8; 48] = r.get_array()?;
    Option::from(G1Affine::from_compressed(&bytes))
        .ok_or(WireError::Malformed("invalid G1 element"))
}

fn put_g2(w: &mut Writer, p: &G2Affine) {
    w.put_raw(&p.to_compressed());
}

fn get_g2(r: &mut Reader) -> Result<G2Affine, WireError> {
    let bytes: [u8; 96] = r.get_array()?;
    Option::from(G2Affine::from_compressed(&bytes))
        .ok_or(WireError::Malformed("invalid G2 element"))
}

fn put_scalar(w: &mut Writer, s: &Scalar) {
    w.put_raw(&s.to_bytes_be());
}

fn get_scalar(r: &mut Reader) -> Result<Scalar, WireError> {
    let bytes: [u8; 32] = r.get_array()?;
    Option::from(Scalar::from_bytes_be(&bytes)).ok_or(WireError::Malformed("non-canonical scalar"))
}

impl ClientDigest {
    pub fn write(&self, w: &mut Writer) {
        put_g1(w, &self.public_key_g1);
        put_g2(w, &self.public_key_g2);
        put_g1(w, &self.list_signature);
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        Ok(ClientDigest {
            public_key_g1: get_g1(r)?,
            public_key_g2: get_g2(r)?,
            list_signature: get_g1(r)?,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let digest = Self::read(&mut r)?;
        r.finish()?;
        Ok(digest)
    }
}

impl ServerDigest {
    pub fn write(&self, w: &mut Writer) {
        put_g1(w, &self.public_key_g1);
        put_g2(w, &self.public_key_g2);
        put_g1(w, &self.list_signature);
        put_g1(w, &self.salt_hash);
        let n = self.member_auth.len();
        w.put_u32(n as u32);
        for power in &self.powers {
            put_g2(w, power);
        }
        for (witness, sigma) in &self.member_auth {
            put_g1(w, witness);
            put_g1(w, sigma);
        }
        for r in &self.order_auth {
            put_scalar(w, r);
        }
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        let public_key_g1 = get_g1(r)?;
        let public_key_g2 = get_g2(r)?;
        let list_signature = get_g1(r)?;
        let salt_hash = get_g1(r)?;
        let n = r.get_u32()? as usize;
        if n == 0 || n.saturating_mul(96 + 96 + 32) > r.remaining() + 96 {
            return Err(WireError::LengthOverrun);
        }
        let mut powers = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            powers.push(get_g2(r)?);
        }
        let mut member_auth = Vec::with_capacity(n);
        for _ in 0..n {
            member_auth.push((get_g1(r)?, get_g1(r)?));
        }
        let mut order_auth = Vec::with_capacity(n);
        for _ in 0..n {
            order_auth.push(get_scalar(r)?);
        }
        Ok(ServerDigest {
            public_key_g1,
            public_key_g2,
            list_signature,
            powers,
            member_auth,
            salt_hash,
            order_auth,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let digest = Self::read(&mut r)?;
        r.finish()?;
        Ok(digest)
    }
}

impl QueryProof {
    pub fn write(&self, w: &mut Writer) {
        let m = self.order.len();
        w.put_u32(m as u32);
        for element in &self.order {
            w.put_bytes(element);
        }
        put_g1(w, &self.sigma_order);
        put_g1(w, &self.lambda);
        for witness in &self.member_witnesses {
            put_g1(w, witness);
        }
        for witness in &self.order_witnesses {
            put_g2(w, witness);
        }
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        let m = r.get_count(4)?;
        if m == 0 {
            return Err(WireError::Malformed("empty proof"));
        }
        let mut order = Vec::with_capacity(m);
        for _ in 0..m {
            order.push(r.get_bytes()?.to_vec());
        }
        let sigma_order = get_g1(r)?;
        let lambda = get_g1(r)?;
        let mut member_witnesses = Vec::with_capacity(m);
        for _ in 0..m {
            member_witnesses.push(get_g1(r)?);
        }
        let mut order_witnesses = Vec::with_capacity(m - 1);
        for _ in 0..m - 1 {
            order_witnesses.push(get_g2(r)?);
        }
        Ok(QueryProof {
            order,
            sigma_order,
            member_witnesses,
            lambda,
            order_witnesses,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let proof = Self::read(&mut r)?;
        r.finish()?;
        Ok(proof)
    }
}
