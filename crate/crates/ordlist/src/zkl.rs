//! Zero-knowledge lists: membership and order queries on a committed list.
//!
//! The prover hashes each element to an `l`-bit key and commits, via a
//! zero-knowledge set, to the map from element hashes to homomorphic
//! commitments of the element ranks. Membership answers are ZKS proofs; an
//! order answer additionally sends a fresh commitment to 1 with its opening
//! and, for each adjacent pair of the returned order, a non-negativity proof
//! for the derived commitment
//! `C(rank_next) / (C(rank_prev) * C(1)) = C(rank_next - rank_prev - 1)`.
//!
//! Proving the gap minus one non-negative (rather than the gap itself) is
//! what stops a prover that committed equal ranks everywhere from proving
//! both orders of a pair: the gap would be zero, and zero minus one has no
//! four-square representation.
//!
//! Non-negativity challenges are additionally bound to the list commitment
//! and the hashed element pair, so a gap proof cannot be replayed between
//! positions or between commitments.
//!
//! The two-party scheme maps onto the three-party outsourced setting by
//! letting the data owner run [`zkl_commit`], the server hold the
//! [`ZklState`] and run [`zkl_query`], and the client run [`zkl_verify`];
//! the owner then only has to distribute the commitment. The pairing-based
//! list in [`crate::ppal`] serves that setting with far cheaper proofs.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use rand::RngCore;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::intcom::{
    ic_commit, ic_divide, ic_equivocate, ic_setup, ic_verify_open, IntComError, IntCommitParams,
    IntCommitTrapdoor, IntCommitment, Opening,
};
use crate::list::SourceList;
use crate::rangeproof::{nn_prove_ctx, nn_verify_ctx, NNProof};
use crate::wire::{Reader, WireError, Writer};
use crate::zks::merc::{
    merc_equivocate_open, merc_setup, merc_setup_with_trapdoor, merc_tease, soft_commit,
    MercCommitment, MercParams, MercRand, MercTrapdoor,
};
use crate::zks::{zks_commit, zks_prove, zks_verify, StepProof, ZksCommitment, ZksProof, ZksState};
use crate::Decision;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZklError {
    #[error("element hash collision at tree height {0} bits; use a taller tree")]
    HashCollision(usize),
    #[error("invalid query flag {0}")]
    InvalidFlag(u8),
    #[error(transparent)]
    IntCom(#[from] IntComError),
    #[error("tree height must be a positive multiple of 8, at most 256 bits")]
    InvalidProfile,
}

/// Security profile: integer-commitment modulus size and ZKS tree height.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZklProfile {
    pub modulus_bits: u64,
    pub tree_height: usize,
}

impl ZklProfile {
    pub fn production() -> Self {
        ZklProfile {
            modulus_bits: 2048,
            tree_height: 256,
        }
    }

    /// Small parameters for tests and demos; insecure.
    pub fn insecure_test() -> Self {
        ZklProfile {
            modulus_bits: 512,
            tree_height: 16,
        }
    }

    fn validate(&self) -> Result<(), ZklError> {
        if self.tree_height == 0 || !self.tree_height.is_multiple_of(8) || self.tree_height > 256 {
            return Err(ZklError::InvalidProfile);
        }
        Ok(())
    }
}

/// Public key: integer-commitment parameters plus the ZKS commitment key.
#[derive(Debug, Clone, PartialEq)]
pub struct ZklPublicKey {
    pub int_params: IntCommitParams,
    pub merc_params: MercParams,
    pub tree_height: usize,
}

/// The public list commitment. Its size is independent of the list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZklCommitment {
    pub root: ZksCommitment,
}

/// Prover state: the ZKS state plus the rank-commitment openings.
#[derive(Debug, Clone)]
pub struct ZklState {
    zks: ZksState,
    /// element -> (1-based rank, rank commitment, opening)
    ranks: HashMap<Vec<u8>, (usize, IntCommitment, Opening)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryFlag {
    Member,
    Order,
}

impl QueryFlag {
    pub fn from_byte(b: u8) -> Result<Self, ZklError> {
        match b {
            0 => Ok(QueryFlag::Member),
            1 => Ok(QueryFlag::Order),
            other => Err(ZklError::InvalidFlag(other)),
        }
    }

    pub fn to_byte(self) -> u8 {
        match self {
            QueryFlag::Member => 0,
            QueryFlag::Order => 1,
        }
    }
}

/// A query: a collection of elements and the query kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZklQuery {
    pub delta: Vec<Vec<u8>>,
    pub flag: QueryFlag,
}

/// Per-element membership record: the ZKS value (a serialized rank
/// commitment) for members, nothing for absent elements, plus the path proof.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberProof {
    pub value: Option<Vec<u8>>,
    pub path: ZksProof,
}

/// Order section of a response.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderProof {
    /// Fresh commitment to 1 and its opening.
    pub one_commitment: IntCommitment,
    pub one_opening: Opening,
    /// Gap proofs for adjacent pairs of `order`.
    pub gaps: Vec<NNProof>,
}

/// Response to a query.
#[derive(Debug, Clone, PartialEq)]
pub struct ZklResponse {
    pub member: Vec<bool>,
    pub proofs: Vec<MemberProof>,
    /// Present elements in list order; `None` for membership queries.
    pub order: Option<Vec<Vec<u8>>>,
    pub order_proof: Option<OrderProof>,
}

/// Hashes an element to an `l`-bit ZKS key (truncated SHA-256).
pub fn element_key(element: &[u8], tree_height: usize) -> Vec<u8> {
    let digest = Sha256::digest(element);
    digest[..tree_height / 8].to_vec()
}

/// Generates the public key. Trusted-parameters model: the trapdoors behind
/// both sub-schemes are discarded.
pub fn zkl_setup(profile: &ZklProfile, rng: &mut impl RngCore) -> Result<ZklPublicKey, ZklError> {
    profile.validate()?;
    let (int_params, _trapdoor) = ic_setup(profile.modulus_bits, rng)?;
    let merc_params = merc_setup(rng);
    Ok(ZklPublicKey {
        int_params,
        merc_params,
        tree_height: profile.tree_height,
    })
}

/// Commits to a list: one `(element hash, C(rank))` pair per element.
pub fn zkl_commit(
    pk: &ZklPublicKey,
    list: &SourceList,
    rng: &mut impl RngCore,
) -> Result<(ZklCommitment, ZklState), ZklError> {
    let mut data = BTreeMap::new();
    let mut ranks = HashMap::with_capacity(list.len());
    for (idx, element) in list.elements().iter().enumerate() {
        let rank = idx + 1;
        let key = element_key(element, pk.tree_height);
        let (commitment, opening) = ic_commit(&pk.int_params, &BigInt::from(rank), rng)?;
        if data.insert(key, commitment.to_bytes()).is_some() {
            return Err(ZklError::HashCollision(pk.tree_height));
        }
        ranks.insert(element.clone(), (rank, commitment, opening));
    }
    let (root, zks) = zks_commit(&pk.merc_params, pk.tree_height, &data, rng)
        .expect("profile validated the height");
    Ok((ZklCommitment { root }, ZklState { zks, ranks }))
}

/// Context bytes binding a gap proof to the commitment and the hashed pair.
fn gap_context(com: &ZklCommitment, prev_key: &[u8], next_key: &[u8]) -> Vec<u8> {
    let mut w = Writer::new();
    w.put_bytes(&com.root.to_bytes());
    w.put_bytes(prev_key);
    w.put_bytes(next_key);
    w.into_bytes()
}

/// Answers a query against the committed list.
pub fn zkl_query(
    pk: &ZklPublicKey,
    com: &ZklCommitment,
    state: &mut ZklState,
    query: &ZklQuery,
    rng: &mut impl RngCore,
) -> Result<ZklResponse, ZklError> {
    let mut member = Vec::with_capacity(query.delta.len());
    let mut proofs = Vec::with_capacity(query.delta.len());
    for element in &query.delta {
        let key = element_key(element, pk.tree_height);
        let (value, path) = zks_prove(&pk.merc_params, &mut state.zks, &key, rng)
            .expect("keys are derived at the right length");
        member.push(value.is_some());
        proofs.push(MemberProof { value, path });
    }

    if query.flag == QueryFlag::Member {
        return Ok(ZklResponse {
            member,
            proofs,
            order: None,
            order_proof: None,
        });
    }

    // present elements of delta, arranged in list order
    let mut present: Vec<(usize, Vec<u8>)> = query
        .delta
        .iter()
        .filter_map(|e| state.ranks.get(e).map(|(rank, _, _)| (*rank, e.clone())))
        .collect();
    present.sort();
    present.dedup();
    let order: Vec<Vec<u8>> = present.iter().map(|(_, e)| e.clone()).collect();

    let (one_commitment, one_opening) = ic_commit(&pk.int_params, &BigInt::one(), rng)?;

    let mut gaps = Vec::new();
    for pair in present.windows(2) {
        let (_, prev) = &pair[0];
        let (_, next) = &pair[1];
        let (_, c_prev, o_prev) = &state.ranks[prev];
        let (_, c_next, o_next) = &state.ranks[next];
        // C(rank_next - rank_prev - 1)
        let denom = crate::intcom::ic_combine(&pk.int_params, c_prev, &one_commitment);
        let derived = ic_divide(&pk.int_params, c_next, &denom)?;
        let opening = o_next.divide(
            &o_prev.combine(&one_opening, &pk.int_params),
            &pk.int_params,
        )?;
        let ctx = gap_context(
            com,
            &element_key(prev, pk.tree_height),
            &element_key(next, pk.tree_height),
        );
        let proof = nn_prove_ctx(&pk.int_params, &derived, &opening, &ctx, rng)
            .expect("adjacent ranks give a non-negative gap");
        gaps.push(proof);
    }

    Ok(ZklResponse {
        member,
        proofs,
        order: Some(order),
        order_proof: Some(OrderProof {
            one_commitment,
            one_opening,
            gaps,
        }),
    })
}

/// Verifies a response. Everything except `pk` and `com` is untrusted.
pub fn zkl_verify(
    pk: &ZklPublicKey,
    com: &ZklCommitment,
    query: &ZklQuery,
    response: &ZklResponse,
) -> Decision {
    let m = query.delta.len();
    if response.member.len() != m || response.proofs.len() != m {
        return Decision::Reject;
    }

    // membership layer: every claimed answer must verify against the root
    let mut values: HashMap<&[u8], &[u8]> = HashMap::new();
    for (i, element) in query.delta.iter().enumerate() {
        let proof = &response.proofs[i];
        if response.member[i] != proof.value.is_some() {
            return Decision::Reject;
        }
        let key = element_key(element, pk.tree_height);
        if !zks_verify(
            &pk.merc_params,
            &com.root,
            &key,
            proof.value.as_deref(),
            &proof.path,
        ) {
            return Decision::Reject;
        }
        if let Some(v) = &proof.value {
            values.insert(element.as_slice(), v.as_slice());
        }
    }

    match query.flag {
        QueryFlag::Member => {
            if response.order.is_some() || response.order_proof.is_some() {
                return Decision::Reject;
            }
            Decision::Accept
        }
        QueryFlag::Order => {
            let (order, order_proof) = match (&response.order, &response.order_proof) {
                (Some(o), Some(p)) => (o, p),
                _ => return Decision::Reject,
            };
            // the order must be exactly the claimed-present elements
            let mut expected: Vec<&[u8]> = query
                .delta
                .iter()
                .zip(&response.member)
                .filter(|(_, &present)| present)
                .map(|(e, _)| e.as_slice())
                .collect();
            expected.sort();
            expected.dedup();
            let mut got: Vec<&[u8]> = order.iter().map(|e| e.as_slice()).collect();
            got.sort();
            got.dedup();
            if expected != got || order.len() != got.len() {
                return Decision::Reject;
            }
            if order_proof.gaps.len() + 1 != order.len().max(1) {
                return Decision::Reject;
            }

            // the auxiliary commitment must open to exactly 1
            if order_proof.one_opening.integer != BigInt::one()
                || !ic_verify_open(
                    &pk.int_params,
                    &order_proof.one_commitment,
                    &order_proof.one_opening,
                )
            {
                return Decision::Reject;
            }

            for (j, pair) in order.windows(2).enumerate() {
                let prev = pair[0].as_slice();
                let next = pair[1].as_slice();
                let (c_prev, c_next) = match (
                    values
                        .get(prev)
                        .and_then(|v| IntCommitment::from_bytes(v).ok()),
                    values
                        .get(next)
                        .and_then(|v| IntCommitment::from_bytes(v).ok()),
                ) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Decision::Reject,
                };
                let denom =
                    crate::intcom::ic_combine(&pk.int_params, &c_prev, &order_proof.one_commitment);
                let derived = match ic_divide(&pk.int_params, &c_next, &denom) {
                    Ok(d) => d,
                    Err(_) => return Decision::Reject,
                };
                let ctx = gap_context(
                    com,
                    &element_key(prev, pk.tree_height),
                    &element_key(next, pk.tree_height),
                );
                if !nn_verify_ctx(&pk.int_params, &derived, &order_proof.gaps[j], &ctx) {
                    return Decision::Reject;
                }
            }
            Decision::Accept
        }
    }
}

// --- simulator -----------------------------------------------------------

/// Oracle access to a hidden list: the only interface the simulator gets.
pub trait ZklOracle {
    fn contains(&mut self, element: &[u8]) -> bool;
    /// List order of the present elements among `elements`.
    fn order(&mut self, elements: &[Vec<u8>]) -> Vec<Vec<u8>>;
}

impl ZklOracle for SourceList {
    fn contains(&mut self, element: &[u8]) -> bool {
        self.rank_of(element).is_some()
    }

    fn order(&mut self, elements: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let mut present: Vec<(usize, Vec<u8>)> = elements
            .iter()
            .filter_map(|e| self.rank_of(e).map(|r| (r, e.clone())))
            .collect();
        present.sort();
        present.dedup();
        present.into_iter().map(|(_, e)| e).collect()
    }
}

struct SimNode {
    com: MercCommitment,
    rand: MercRand,
    /// Message this node has been shown to contain, fixed at first use.
    assigned: Option<Vec<u8>>,
}

/// Zero-knowledge simulator: produces key, commitment and responses that
/// verify, from oracle access to the hidden list alone.
///
/// Both trapdoors are kept: soft tree nodes are equivocation-opened on
/// membership paths and teased on non-membership paths, every member element
/// gets a fresh rank commitment to 0, and gap commitments (which all open to
/// -1 in the simulated world) are equivocated to 1 before proving.
pub struct ZklSimulator {
    pk: ZklPublicKey,
    int_trapdoor: IntCommitTrapdoor,
    merc_trapdoor: MercTrapdoor,
    com: ZklCommitment,
    nodes: HashMap<Vec<u8>, SimNode>,
    values: HashMap<Vec<u8>, (IntCommitment, Opening)>,
}

impl ZklSimulator {
    pub fn new(
        profile: &ZklProfile,
        rng: &mut impl RngCore,
    ) -> Result<(Self, ZklPublicKey, ZklCommitment), ZklError> {
        profile.validate()?;
        let (int_params, int_trapdoor) = ic_setup(profile.modulus_bits, rng)?;
        let (merc_params, merc_trapdoor) = merc_setup_with_trapdoor(rng);
        let (root_com, root_rand) = soft_commit(&merc_params, rng);
        let pk = ZklPublicKey {
            int_params,
            merc_params,
            tree_height: profile.tree_height,
        };
        let com = ZklCommitment {
            root: ZksCommitment(root_com),
        };
        let mut nodes = HashMap::new();
        nodes.insert(
            sim_prefix(&[], 0, false),
            SimNode {
                com: root_com,
                rand: root_rand,
                assigned: None,
            },
        );
        Ok((
            ZklSimulator {
                pk: pk.clone(),
                int_trapdoor,
                merc_trapdoor,
                com,
                nodes,
                values: HashMap::new(),
            },
            pk,
            com,
        ))
    }

    pub fn commitment(&self) -> ZklCommitment {
        self.com
    }

    /// Answers a query, consulting the oracle only for membership bits and
    /// (for order queries) the order of the present elements.
    pub fn respond(
        &mut self,
        query: &ZklQuery,
        oracle: &mut dyn ZklOracle,
        rng: &mut impl RngCore,
    ) -> Result<ZklResponse, ZklError> {
        let mut member = Vec::with_capacity(query.delta.len());
        let mut proofs = Vec::with_capacity(query.delta.len());
        for element in &query.delta {
            let present = oracle.contains(element);
            member.push(present);
            proofs.push(self.prove_membership(element, present, rng));
        }

        if query.flag == QueryFlag::Member {
            return Ok(ZklResponse {
                member,
                proofs,
                order: None,
                order_proof: None,
            });
        }

        let order = oracle.order(&query.delta);
        let (one_commitment, one_opening) = ic_commit(&self.pk.int_params, &BigInt::one(), rng)?;
        let mut gaps = Vec::new();
        for pair in order.windows(2) {
            let (c_prev, o_prev) = self.values[&pair[0]].clone();
            let (c_next, o_next) = self.values[&pair[1]].clone();
            let denom = crate::intcom::ic_combine(&self.pk.int_params, &c_prev, &one_commitment);
            let derived = ic_divide(&self.pk.int_params, &c_next, &denom)?;
            // the honest opening is to -1; retarget it to 1 with the trapdoor
            let opening = o_next.divide(
                &o_prev.combine(&one_opening, &self.pk.int_params),
                &self.pk.int_params,
            )?;
            let retargeted = ic_equivocate(
                &self.pk.int_params,
                &self.int_trapdoor,
                &derived,
                &opening,
                &BigInt::one(),
            );
            let ctx = gap_context(
                &self.com,
                &element_key(&pair[0], self.pk.tree_height),
                &element_key(&pair[1], self.pk.tree_height),
            );
            let proof = nn_prove_ctx(&self.pk.int_params, &derived, &retargeted, &ctx, rng)
                .expect("equivocated opening is non-negative and valid");
            gaps.push(proof);
        }

        Ok(ZklResponse {
            member,
            proofs,
            order: Some(order),
            order_proof: Some(OrderProof {
                one_commitment,
                one_opening,
                gaps,
            }),
        })
    }

    /// Builds a simulated ZKS path for `element`, reusing cached nodes.
    fn prove_membership(
        &mut self,
        element: &[u8],
        present: bool,
        rng: &mut impl RngCore,
    ) -> MemberProof {
        let height = self.pk.tree_height;
        let key = element_key(element, height);

        let value = if present {
            let (commitment, _) = self
                .values
                .entry(element.to_vec())
                .or_insert_with(|| {
                    ic_commit(&self.pk.int_params, &BigInt::from(0), rng)
                        .expect("0 is within the message bound")
                })
                .clone();
            Some(commitment.to_bytes())
        } else {
            None
        };

        // materialize soft nodes along the path (and siblings)
        for depth in 1..=height {
            for prefix in [
                sim_prefix(&key, depth, false),
                sim_prefix(&key, depth, true),
            ] {
                if !self.nodes.contains_key(&prefix) {
                    let (com, rand) = soft_commit(&self.pk.merc_params, rng);
                    self.nodes.insert(
                        prefix,
                        SimNode {
                            com,
                            rand,
                            assigned: None,
                        },
                    );
                }
            }
        }

        let mut levels = Vec::with_capacity(height);
        for depth in 1..=height {
            let node = self.nodes[&sim_prefix(&key, depth, false)].com;
            let sibling = self.nodes[&sim_prefix(&key, depth, true)].com;
            levels.push((node, sibling));
        }

        let mut steps = Vec::with_capacity(height + 1);
        for depth in 0..=height {
            let msg = if depth == height {
                sim_leaf_message(value.as_deref())
            } else {
                let node = self.nodes[&sim_prefix(&key, depth + 1, false)].com;
                let sibling = self.nodes[&sim_prefix(&key, depth + 1, true)].com;
                let (left, right) = if sim_key_bit(&key, depth) {
                    (sibling, node)
                } else {
                    (node, sibling)
                };
                sim_pair_message(&left, &right)
            };
            let prefix = sim_prefix(&key, depth, false);
            let entry = self.nodes.get_mut(&prefix).unwrap();
            match &entry.assigned {
                Some(prev) => debug_assert_eq!(prev, &msg, "cached node shown with a new message"),
                None => entry.assigned = Some(msg.clone()),
            }
            let step = if present {
                StepProof::Open(
                    merc_equivocate_open(
                        &self.pk.merc_params,
                        &self.merc_trapdoor,
                        &msg,
                        &entry.rand,
                    )
                    .expect("simulated nodes are soft"),
                )
            } else {
                StepProof::Tease(
                    merc_tease(&self.pk.merc_params, &msg, &entry.rand, &entry.com)
                        .expect("soft nodes tease to anything"),
                )
            };
            steps.push(step);
        }

        MemberProof {
            value,
            path: ZksProof { levels, steps },
        }
    }
}

/// Prefix key for the simulator cache: depth byte count plus packed bits,
/// with `sibling` flipping the last bit.
fn sim_prefix(key: &[u8], depth: usize, sibling: bool) -> Vec<u8> {
    let mut out = vec![depth as u8, (depth >> 8) as u8];
    let mut bits = vec![0u8; depth.div_ceil(8)];
    for i in 0..depth {
        if key[i / 8] & (0x80 >> (i % 8)) != 0 {
            bits[i / 8] |= 0x80 >> (i % 8);
        }
    }
    if sibling && depth > 0 {
        let i = depth - 1;
        bits[i / 8] ^= 0x80 >> (i % 8);
    }
    out.extend_from_slice(&bits);
    out
}

fn sim_key_bit(key: &[u8], i: usize) -> bool {
    key[i / 8] & (0x80 >> (i % 8)) != 0
}

// the simulator must emit exactly the messages the verifier reconstructs
fn sim_pair_message(left: &MercCommitment, right: &MercCommitment) -> Vec<u8> {
    let mut out = Vec::with_capacity(129);
    out.push(0x02);
    out.extend_from_slice(&left.to_bytes());
    out.extend_from_slice(&right.to_bytes());
    out
}

fn sim_leaf_message(value: Option<&[u8]>) -> Vec<u8> {
    match value {
        Some(v) => {
            let mut out = Vec::with_capacity(1 + v.len());
            out.push(0x01);
            out.extend_from_slice(v);
            out
        }
        None => vec![0x00],
    }
}

// --- wire encodings ------------------------------------------------------

impl ZklPublicKey {
    pub fn write(&self, w: &mut Writer) {
        self.int_params.write(w);
        self.merc_params.write(w);
        w.put_u32(self.tree_height as u32);
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        let int_params = IntCommitParams::read(r)?;
        let merc_params = MercParams::read(r)?;
        let tree_height = r.get_u32()? as usize;
        if tree_height == 0 || !tree_height.is_multiple_of(8) || tree_height > 256 {
            return Err(WireError::Malformed("bad tree height"));
        }
        Ok(ZklPublicKey {
            int_params,
            merc_params,
            tree_height,
        })
    }
}

impl ZklCommitment {
    pub fn write(&self, w: &mut Writer) {
        self.root.write(w);
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        Ok(ZklCommitment {
            root: ZksCommitment::read(r)?,
        })
    }
}

impl ZklState {
    pub fn write(&self, w: &mut Writer) {
        self.zks.write(w);
        let mut elements: Vec<&Vec<u8>> = self.ranks.keys().collect();
        elements.sort();
        w.put_u32(elements.len() as u32);
        for element in elements {
            let (rank, commitment, opening) = &self.ranks[element];
            w.put_bytes(element);
            w.put_u64(*rank as u64);
            w.put_bytes(&commitment.to_bytes());
            opening.write(w);
        }
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        let zks = ZksState::read(r)?;
        let n = r.get_count(16)?;
        let mut ranks = HashMap::with_capacity(n);
        for _ in 0..n {
            let element = r.get_bytes()?.to_vec();
            let rank = r.get_u64()? as usize;
            let commitment = IntCommitment::from_bytes(r.get_bytes()?)
                .map_err(|_| WireError::Malformed("bad rank commitment"))?;
            let opening = Opening::read(r)?;
            ranks.insert(element, (rank, commitment, opening));
        }
        Ok(ZklState { zks, ranks })
    }
}

impl ZklResponse {
    pub fn write(&self, w: &mut Writer) {
        // membership bitmap
        let m = self.member.len();
        w.put_u32(m as u32);
        let mut bitmap = vec![0u8; m.div_ceil(8)];
        for (i, &b) in self.member.iter().enumerate() {
            if b {
                bitmap[i / 8] |= 0x80 >> (i % 8);
            }
        }
        w.put_raw(&bitmap);
        // per-element records
        for proof in &self.proofs {
            match &proof.value {
                Some(v) => {
                    w.put_u8(1);
                    w.put_bytes(v);
                }
                None => w.put_u8(0),
            }
            proof.path.write(w);
        }
        // optional order section
        match (&self.order, &self.order_proof) {
            (Some(order), Some(op)) => {
                w.put_u8(1);
                w.put_u32(order.len() as u32);
                for element in order {
                    w.put_bytes(element);
                }
                w.put_bytes(&op.one_commitment.to_bytes());
                op.one_opening.write(w);
                w.put_u32(op.gaps.len() as u32);
                for gap in &op.gaps {
                    gap.write(w);
                }
            }
            _ => w.put_u8(0),
        }
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        let m = r.get_count(1)?;
        let bitmap = r.take(m.div_ceil(8))?.to_vec();
        let mut member = Vec::with_capacity(m);
        for i in 0..m {
            member.push(bitmap[i / 8] & (0x80 >> (i % 8)) != 0);
        }
        for i in m..bitmap.len() * 8 {
            if bitmap[i / 8] & (0x80 >> (i % 8)) != 0 {
                return Err(WireError::Malformed("nonzero padding bits in bitmap"));
            }
        }
        let mut proofs = Vec::with_capacity(m);
        for _ in 0..m {
            let value = match r.get_u8()? {
                0 => None,
                1 => Some(r.get_bytes()?.to_vec()),
                _ => return Err(WireError::Malformed("bad value tag")),
            };
            let path = ZksProof::read(r)?;
            proofs.push(MemberProof { value, path });
        }
        let (order, order_proof) = match r.get_u8()? {
            0 => (None, None),
            1 => {
                let count = r.get_count(4)?;
                let mut order = Vec::with_capacity(count);
                for _ in 0..count {
                    order.push(r.get_bytes()?.to_vec());
                }
                let one_commitment = IntCommitment::from_bytes(r.get_bytes()?)
                    .map_err(|_| WireError::Malformed("bad commitment"))?;
                let one_opening = Opening::read(r)?;
                let gap_count = r.get_count(32)?;
                let mut gaps = Vec::with_capacity(gap_count);
                for _ in 0..gap_count {
                    gaps.push(NNProof::read(r)?);
                }
                (
                    Some(order),
                    Some(OrderProof {
                        one_commitment,
                        one_opening,
                        gaps,
                    }),
                )
            }
            _ => return Err(WireError::Malformed("bad order tag")),
        };
        Ok(ZklResponse {
            member,
            proofs,
            order,
            order_proof,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut r = Reader::new(bytes);
        let response = Self::read(&mut r)?;
        r.finish()?;
        Ok(response)
    }
}
