//! Zero-knowledge sets: commit to a finite key/value map, then prove
//! membership or non-membership of any key without leaking anything else,
//! including the map size.
//!
//! The commitment is the root of a sparse height-`l` binary tree of
//! mercurial commitments over the keys read as `l`-bit leaf indices.
//! Member leaves hard-commit their value; every defined node's missing
//! sibling gets a soft commitment, and internal nodes hard-commit the pair
//! of their children. Membership proofs open the path to the root;
//! non-membership proofs tease it, extending the tree on the fly from the
//! deepest defined ancestor of the absent key. Extensions are memoized in
//! the prover state so repeated queries yield byte-identical proofs.
//!
//! Levels are indexed with the root at 0 and leaves at `l`; the proof for a
//! key carries the `l` (node, sibling) pairs at levels `1..=l` and one
//! decommitment step per level `0..=l` (the root step opens the commitment
//! itself, the leaf step opens the value or teases bottom).

pub mod merc;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::RngCore;
use thiserror::Error;

use crate::wire::{Reader, WireError, Writer};
use merc::{
    get_scalar, hard_commit, merc_open, merc_tease, put_scalar, soft_commit, ver_open, ver_tease,
    MercCommitment, MercKind, MercParams, MercRand, OpenProof, TeaseProof,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZksError {
    #[error("key is {got} bytes, tree expects {expected}")]
    KeyLengthError { expected: usize, got: usize },
    #[error("tree height must be a positive multiple of 8, at most 512 bits")]
    InvalidHeight,
}

/// The public digest: the root commitment. Constant size regardless of the
/// committed map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZksCommitment(pub MercCommitment);

/// A tree prefix: the first `depth` bits of a key, packed MSB-first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Prefix {
    depth: usize,
    bytes: Vec<u8>,
}

impl Prefix {
    fn root() -> Self {
        Prefix {
            depth: 0,
            bytes: Vec::new(),
        }
    }

    fn of_key(key: &[u8], depth: usize) -> Self {
        let mut bytes = vec![0u8; depth.div_ceil(8)];
        for i in 0..depth {
            if key_bit(key, i) {
                bytes[i / 8] |= 0x80 >> (i % 8);
            }
        }
        Prefix { depth, bytes }
    }

    fn child(&self, bit: bool) -> Self {
        let mut bytes = self.bytes.clone();
        if self.depth.is_multiple_of(8) {
            bytes.push(0);
        }
        if bit {
            bytes[self.depth / 8] |= 0x80 >> (self.depth % 8);
        }
        Prefix {
            depth: self.depth + 1,
            bytes,
        }
    }

    fn sibling(&self) -> Self {
        debug_assert!(self.depth > 0);
        let mut bytes = self.bytes.clone();
        let i = self.depth - 1;
        bytes[i / 8] ^= 0x80 >> (i % 8);
        Prefix {
            depth: self.depth,
            bytes,
        }
    }

    fn parent(&self) -> Self {
        debug_assert!(self.depth > 0);
        let depth = self.depth - 1;
        let mut bytes = self.bytes.clone();
        bytes.truncate(depth.div_ceil(8));
        if !depth.is_multiple_of(8) {
            let keep = 0xffu8 << (8 - depth % 8);
            let last = bytes.len() - 1;
            bytes[last] &= keep;
        }
        Prefix { depth, bytes }
    }
}

fn key_bit(key: &[u8], i: usize) -> bool {
    key[i / 8] & (0x80 >> (i % 8)) != 0
}

/// One committed tree node together with everything the prover needs to
/// decommit it later.
#[derive(Debug, Clone)]
pub(crate) struct Node {
    com: MercCommitment,
    rand: MercRand,
    /// Message bytes the node is bound to: set at build time for hard nodes,
    /// and at first tease for soft nodes on non-membership paths.
    assigned: Option<Vec<u8>>,
}

/// Prover state: the full commitment tree plus the committed map.
#[derive(Debug, Clone)]
pub struct ZksState {
    height: usize,
    nodes: HashMap<Prefix, Node>,
    data: BTreeMap<Vec<u8>, Vec<u8>>,
}

/// Per-level decommitment.
#[derive(Debug, Clone, PartialEq)]
pub enum StepProof {
    Open(OpenProof),
    Tease(TeaseProof),
}

/// Proof of membership (opens) or non-membership (teases) of one key.
#[derive(Debug, Clone, PartialEq)]
pub struct ZksProof {
    /// `(path node, sibling)` commitments at levels `1..=l`.
    pub levels: Vec<(MercCommitment, MercCommitment)>,
    /// Decommitment steps at levels `0..=l`.
    pub steps: Vec<StepProof>,
}

fn pair_message(left: &MercCommitment, right: &MercCommitment) -> Vec<u8> {
    let mut out = Vec::with_capacity(129);
    out.push(0x02);
    out.extend_from_slice(&left.to_bytes());
    out.extend_from_slice(&right.to_bytes());
    out
}

fn leaf_message(value: Option<&[u8]>) -> Vec<u8> {
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

/// Commits to `data`, whose keys must all be exactly `height / 8` bytes.
pub fn zks_commit(
    params: &MercParams,
    height: usize,
    data: &BTreeMap<Vec<u8>, Vec<u8>>,
    rng: &mut impl RngCore,
) -> Result<(ZksCommitment, ZksState), ZksError> {
    if height == 0 || !height.is_multiple_of(8) || height > 512 {
        return Err(ZksError::InvalidHeight);
    }
    let key_len = height / 8;
    for key in data.keys() {
        if key.len() != key_len {
            return Err(ZksError::KeyLengthError {
                expected: key_len,
                got: key.len(),
            });
        }
    }

    let mut nodes: HashMap<Prefix, Node> = HashMap::new();

    if data.is_empty() {
        let (com, rand) = soft_commit(params, rng);
        nodes.insert(
            Prefix::root(),
            Node {
                com,
                rand,
                assigned: None,
            },
        );
        let root = nodes[&Prefix::root()].com;
        return Ok((
            ZksCommitment(root),
            ZksState {
                height,
                nodes,
                data: data.clone(),
            },
        ));
    }

    // leaves: hard-commit member values, then soft-fill their siblings
    let mut level: BTreeSet<Prefix> = BTreeSet::new();
    for (key, value) in data {
        let prefix = Prefix::of_key(key, height);
        let msg = leaf_message(Some(value));
        let (com, rand) = hard_commit(params, &msg, rng);
        nodes.insert(
            prefix.clone(),
            Node {
                com,
                rand,
                assigned: Some(msg),
            },
        );
        level.insert(prefix);
    }
    soft_fill_siblings(params, &mut nodes, &level, rng);

    // internal levels, bottom-up
    for _depth in (0..height).rev() {
        let parents: BTreeSet<Prefix> = level.iter().map(Prefix::parent).collect();
        for parent in &parents {
            let left = nodes[&parent.child(false)].com;
            let right = nodes[&parent.child(true)].com;
            let msg = pair_message(&left, &right);
            let (com, rand) = hard_commit(params, &msg, rng);
            nodes.insert(
                parent.clone(),
                Node {
                    com,
                    rand,
                    assigned: Some(msg),
                },
            );
        }
        if parents.iter().next().map(|p| p.depth) != Some(0) {
            soft_fill_siblings(params, &mut nodes, &parents, rng);
        }
        level = parents;
    }

    let root = nodes[&Prefix::root()].com;
    Ok((
        ZksCommitment(root),
        ZksState {
            height,
            nodes,
            data: data.clone(),
        },
    ))
}

fn soft_fill_siblings(
    params: &MercParams,
    nodes: &mut HashMap<Prefix, Node>,
    level: &BTreeSet<Prefix>,
    rng: &mut impl RngCore,
) {
    for prefix in level {
        let sib = prefix.sibling();
        nodes.entry(sib).or_insert_with(|| {
            let (com, rand) = soft_commit(params, rng);
            Node {
                com,
                rand,
                assigned: None,
            }
        });
    }
}

/// Answers a query: the value (or `None` for absent keys) plus the proof.
/// Non-membership extends the tree from the deepest defined ancestor; the
/// extension is cached in `state` so a repeated query returns an identical
/// proof.
pub fn zks_prove(
    params: &MercParams,
    state: &mut ZksState,
    key: &[u8],
    rng: &mut impl RngCore,
) -> Result<(Option<Vec<u8>>, ZksProof), ZksError> {
    let height = state.height;
    if key.len() != height / 8 {
        return Err(ZksError::KeyLengthError {
            expected: height / 8,
            got: key.len(),
        });
    }

    let value = state.data.get(key).cloned();
    if value.is_none() {
        extend_for_absent(params, state, key, rng);
    }

    // path commitments at levels 1..=l
    let mut levels = Vec::with_capacity(height);
    for depth in 1..=height {
        let node = Prefix::of_key(key, depth);
        levels.push((state.nodes[&node].com, state.nodes[&node.sibling()].com));
    }

    // one decommitment per level 0..=l
    let mut steps = Vec::with_capacity(height + 1);
    for depth in 0..=height {
        let prefix = Prefix::of_key(key, depth);
        let msg = if depth == height {
            leaf_message(value.as_deref())
        } else {
            state.nodes[&prefix]
                .assigned
                .clone()
                .expect("interior path nodes are bound")
        };
        let node = &state.nodes[&prefix];
        let step = if value.is_some() {
            StepProof::Open(
                merc_open(params, &msg, &node.rand, &node.com).expect("member paths are hard"),
            )
        } else {
            StepProof::Tease(
                merc_tease(params, &msg, &node.rand, &node.com).expect("teases cannot fail here"),
            )
        };
        steps.push(step);
    }

    Ok((value, ZksProof { levels, steps }))
}

/// Materializes (and binds) the path for an absent key.
fn extend_for_absent(
    params: &MercParams,
    state: &mut ZksState,
    key: &[u8],
    rng: &mut impl RngCore,
) {
    let height = state.height;

    // deepest defined ancestor
    let mut junction = 0;
    for depth in (0..=height).rev() {
        if state.nodes.contains_key(&Prefix::of_key(key, depth)) {
            junction = depth;
            break;
        }
    }

    // create the missing chain deepest-first: the absent leaf hard-commits
    // bottom, interior extension nodes hard-commit their (just created)
    // children, and every new node gets a soft sibling
    for depth in (junction + 1..=height).rev() {
        let prefix = Prefix::of_key(key, depth);
        let msg = if depth == height {
            leaf_message(None)
        } else {
            let left = state.nodes[&prefix.child(false)].com;
            let right = state.nodes[&prefix.child(true)].com;
            pair_message(&left, &right)
        };
        let (com, rand) = hard_commit(params, &msg, rng);
        state.nodes.insert(
            prefix.clone(),
            Node {
                com,
                rand,
                assigned: Some(msg),
            },
        );
        let sib = prefix.sibling();
        state.nodes.entry(sib).or_insert_with(|| {
            let (com, rand) = soft_commit(params, rng);
            Node {
                com,
                rand,
                assigned: None,
            }
        });
    }

    // bind the junction (always a soft node when below the leaf level) to its
    // now-defined children so every future query teases it identically
    if junction < height {
        let prefix = Prefix::of_key(key, junction);
        if state.nodes[&prefix].assigned.is_none() {
            let left = state.nodes[&prefix.child(false)].com;
            let right = state.nodes[&prefix.child(true)].com;
            let msg = pair_message(&left, &right);
            state.nodes.get_mut(&prefix).unwrap().assigned = Some(msg);
        }
    }
}

/// Verifies a (non-)membership proof for `key` against the root commitment.
pub fn zks_verify(
    params: &MercParams,
    com: &ZksCommitment,
    key: &[u8],
    answer: Option<&[u8]>,
    proof: &ZksProof,
) -> bool {
    let height = key.len() * 8;
    if height == 0 || proof.levels.len() != height || proof.steps.len() != height + 1 {
        return false;
    }

    for depth in 0..=height {
        let commitment = if depth == 0 {
            com.0
        } else {
            proof.levels[depth - 1].0
        };
        let msg = if depth == height {
            leaf_message(answer)
        } else {
            let (node, sibling) = proof.levels[depth];
            if key_bit(key, depth) {
                pair_message(&sibling, &node)
            } else {
                pair_message(&node, &sibling)
            }
        };
        let ok = match (&proof.steps[depth], answer.is_some()) {
            (StepProof::Open(p), true) => ver_open(params, &commitment, &msg, p),
            (StepProof::Tease(p), false) => ver_tease(params, &commitment, &msg, p),
            _ => false, // step kind must match the claimed answer
        };
        if !ok {
            return false;
        }
    }
    true
}

// --- wire encodings ------------------------------------------------------

impl ZksCommitment {
    pub fn write(&self, w: &mut Writer) {
        self.0.write(w);
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        Ok(ZksCommitment(MercCommitment::read(r)?))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.to_bytes()
    }
}

impl ZksProof {
    pub fn write(&self, w: &mut Writer) {
        w.put_u32(self.levels.len() as u32);
        for (node, sibling) in &self.levels {
            node.write(w);
            sibling.write(w);
        }
        for step in &self.steps {
            match step {
                StepProof::Open(p) => {
                    w.put_u8(0);
                    put_scalar(w, &p.r0);
                    put_scalar(w, &p.r1);
                }
                StepProof::Tease(p) => {
                    w.put_u8(1);
                    put_scalar(w, &p.tau);
                }
            }
        }
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        let height = r.get_count(128)?;
        if height == 0 || height > 512 {
            return Err(WireError::Malformed("bad proof height"));
        }
        let mut levels = Vec::with_capacity(height);
        for _ in 0..height {
            levels.push((MercCommitment::read(r)?, MercCommitment::read(r)?));
        }
        let mut steps = Vec::with_capacity(height + 1);
        for _ in 0..=height {
            match r.get_u8()? {
                0 => steps.push(StepProof::Open(OpenProof {
                    r0: get_scalar(r)?,
                    r1: get_scalar(r)?,
                })),
                1 => steps.push(StepProof::Tease(TeaseProof {
                    tau: get_scalar(r)?,
                })),
                _ => return Err(WireError::Malformed("bad step tag")),
            }
        }
        Ok(ZksProof { levels, steps })
    }
}

impl ZksState {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &BTreeMap<Vec<u8>, Vec<u8>> {
        &self.data
    }

    pub fn write(&self, w: &mut Writer) {
        w.put_u32(self.height as u32);
        w.put_u32(self.data.len() as u32);
        for (k, v) in &self.data {
            w.put_bytes(k);
            w.put_bytes(v);
        }
        let mut prefixes: Vec<&Prefix> = self.nodes.keys().collect();
        prefixes.sort();
        w.put_u32(prefixes.len() as u32);
        for prefix in prefixes {
            let node = &self.nodes[prefix];
            w.put_u32(prefix.depth as u32);
            w.put_bytes(&prefix.bytes);
            w.put_u8(match node.rand.kind {
                MercKind::Hard => 0,
                MercKind::Soft => 1,
            });
            put_scalar(w, &node.rand.r0);
            put_scalar(w, &node.rand.r1);
            match &node.assigned {
                Some(msg) => {
                    w.put_u8(1);
                    w.put_bytes(msg);
                }
                None => w.put_u8(0),
            }
            node.com.write(w);
        }
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        let height = r.get_u32()? as usize;
        if height == 0 || !height.is_multiple_of(8) || height > 512 {
            return Err(WireError::Malformed("bad state height"));
        }
        let n = r.get_count(8)?;
        let mut data = BTreeMap::new();
        for _ in 0..n {
            let k = r.get_bytes()?.to_vec();
            let v = r.get_bytes()?.to_vec();
            data.insert(k, v);
        }
        let count = r.get_count(64)?;
        let mut nodes = HashMap::with_capacity(count);
        for _ in 0..count {
            let depth = r.get_u32()? as usize;
            let bytes = r.get_bytes()?.to_vec();
            if depth > height || bytes.len() != depth.div_ceil(8) {
                return Err(WireError::Malformed("bad prefix"));
            }
            let kind = match r.get_u8()? {
                0 => MercKind::Hard,
                1 => MercKind::Soft,
                _ => return Err(WireError::Malformed("bad node kind")),
            };
            let r0 = get_scalar(r)?;
            let r1 = get_scalar(r)?;
            let assigned = match r.get_u8()? {
                0 => None,
                1 => Some(r.get_bytes()?.to_vec()),
                _ => return Err(WireError::Malformed("bad assignment tag")),
            };
            let com = MercCommitment::read(r)?;
            let committed = match (kind, &assigned) {
                (MercKind::Hard, Some(msg)) => Some(merc::message_scalar(msg)),
                (MercKind::Hard, None) => {
                    return Err(WireError::Malformed("hard node without message"))
                }
                (MercKind::Soft, _) => None,
            };
            nodes.insert(
                Prefix { depth, bytes },
                Node {
                    com,
                    rand: MercRand {
                        kind,
                        r0,
                        r1,
                        committed,
                    },
                    assigned,
                },
            );
        }
        Ok(ZksState {
            height,
            nodes,
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn rng(seed: u8) -> ChaCha20Rng {
        ChaCha20Rng::from_seed([seed; 32])
    }

    fn sample_map(n: usize, key_len: usize, rng: &mut impl RngCore) -> BTreeMap<Vec<u8>, Vec<u8>> {
        let mut map = BTreeMap::new();
        while map.len() < n {
            let key: Vec<u8> = (0..key_len).map(|_| rng.gen()).collect();
            let value = format!("value-{}", map.len()).into_bytes();
            map.insert(key, value);
        }
        map
    }

    #[test]
    fn member_and_absent_round_trip_l16() {
        let mut r = rng(1);
        let params = merc::merc_setup(&mut r);
        let data = sample_map(20, 2, &mut r);
        let (com, mut state) = zks_commit(&params, 16, &data, &mut r).unwrap();

        for (key, value) in &data {
            let (got, proof) = zks_prove(&params, &mut state, key, &mut r).unwrap();
            assert_eq!(got.as_ref(), Some(value));
            assert!(zks_verify(&params, &com, key, Some(value), &proof));
        }

        let mut absent = 0;
        while absent < 30 {
            let key: Vec<u8> = (0..2).map(|_| r.gen()).collect();
            if data.contains_key(&key) {
                continue;
            }
            absent += 1;
            let (got, proof) = zks_prove(&params, &mut state, &key, &mut r).unwrap();
            assert_eq!(got, None);
            assert!(zks_verify(&params, &com, &key, None, &proof));
        }
    }

    #[test]
    fn empty_map_commits_and_answers_absent() {
        let mut r = rng(2);
        let params = merc::merc_setup(&mut r);
        let data = BTreeMap::new();
        let (com, mut state) = zks_commit(&params, 16, &data, &mut r).unwrap();
        let key = vec![0xab, 0xcd];
        let (got, proof) = zks_prove(&params, &mut state, &key, &mut r).unwrap();
        assert_eq!(got, None);
        assert!(zks_verify(&params, &com, &key, None, &proof));
    }

    #[test]
    fn singleton_map_l8() {
        let mut r = rng(3);
        let params = merc::merc_setup(&mut r);
        let mut data = BTreeMap::new();
        data.insert(vec![0x5a], b"only".to_vec());
        let (com, mut state) = zks_commit(&params, 8, &data, &mut r).unwrap();
        let (got, proof) = zks_prove(&params, &mut state, &[0x5a], &mut r).unwrap();
        assert_eq!(got.as_deref(), Some(b"only".as_slice()));
        assert!(zks_verify(&params, &com, &[0x5a], Some(b"only"), &proof));
    }

    #[test]
    fn repeated_absent_query_is_byte_identical() {
        let mut r = rng(4);
        let params = merc::merc_setup(&mut r);
        let data = sample_map(5, 2, &mut r);
        let (_com, mut state) = zks_commit(&params, 16, &data, &mut r).unwrap();
        let key = vec![0x01, 0x02];
        assert!(!data.contains_key(&key));
        let (_, p1) = zks_prove(&params, &mut state, &key, &mut r).unwrap();
        let (_, p2) = zks_prove(&params, &mut state, &key, &mut r).unwrap();
        let enc = |p: &ZksProof| {
            let mut w = Writer::new();
            p.write(&mut w);
            w.into_bytes()
        };
        assert_eq!(enc(&p1), enc(&p2));
    }

    #[test]
    fn commitment_size_hides_map_size() {
        let mut r = rng(5);
        let params = merc::merc_setup(&mut r);
        let small = sample_map(1, 2, &mut r);
        let large = sample_map(100, 2, &mut r);
        let (c1, _) = zks_commit(&params, 16, &small, &mut r).unwrap();
        let (c2, _) = zks_commit(&params, 16, &large, &mut r).unwrap();
        assert_eq!(c1.to_bytes().len(), c2.to_bytes().len());
    }

    #[test]
    fn randomized_commitments_differ() {
        let mut r = rng(6);
        let params = merc::merc_setup(&mut r);
        let data = sample_map(3, 2, &mut r);
        let (c1, _) = zks_commit(&params, 16, &data, &mut r).unwrap();
        let (c2, _) = zks_commit(&params, 16, &data, &mut r).unwrap();
        assert_ne!(c1, c2);
    }

    #[test]
    fn key_length_is_enforced() {
        let mut r = rng(7);
        let params = merc::merc_setup(&mut r);
        let data = sample_map(2, 2, &mut r);
        let (_, mut state) = zks_commit(&params, 16, &data, &mut r).unwrap();
        assert!(matches!(
            zks_prove(&params, &mut state, &[1, 2, 3], &mut r),
            Err(ZksError::KeyLengthError {
                expected: 2,
                got: 3
            })
        ));
        let mut bad = BTreeMap::new();
        bad.insert(vec![1u8; 3], vec![]);
        assert!(zks_commit(&params, 16, &bad, &mut r).is_err());
    }

    #[test]
    fn tampered_path_node_rejected() {
        let mut r = rng(8);
        let params = merc::merc_setup(&mut r);
        let data = sample_map(8, 2, &mut r);
        let (com, mut state) = zks_commit(&params, 16, &data, &mut r).unwrap();
        let (key, value) = data.iter().next().unwrap();
        let (_, proof) = zks_prove(&params, &mut state, key, &mut r).unwrap();

        for level in 0..proof.levels.len() {
            let mut bad = proof.clone();
            bad.levels[level].0 = bad.levels[level].1;
            assert!(
                !zks_verify(&params, &com, key, Some(value), &bad),
                "substituted node at level {level} accepted"
            );
        }
    }

    #[test]
    fn member_cannot_be_presented_as_absent() {
        let mut r = rng(9);
        let params = merc::merc_setup(&mut r);
        let data = sample_map(4, 2, &mut r);
        let (com, mut state) = zks_commit(&params, 16, &data, &mut r).unwrap();
        let (key, value) = data.iter().next().unwrap();
        let (_, proof) = zks_prove(&params, &mut state, key, &mut r).unwrap();
        // the open-proof shaped path cannot validate the bottom answer
        assert!(!zks_verify(&params, &com, key, None, &proof));
        assert!(zks_verify(&params, &com, key, Some(value), &proof));
    }

    #[test]
    fn state_round_trip_preserves_proof_bytes() {
        let mut r = rng(10);
        let params = merc::merc_setup(&mut r);
        let data = sample_map(6, 2, &mut r);
        let (com, mut state) = zks_commit(&params, 16, &data, &mut r).unwrap();
        // absent query first so the extension cache is non-trivial
        let absent = vec![0xff, 0xee];
        assert!(!data.contains_key(&absent));
        let (_, p_before) = zks_prove(&params, &mut state, &absent, &mut r).unwrap();

        let mut w = Writer::new();
        state.write(&mut w);
        let bytes = w.into_bytes();
        let mut reader = Reader::new(&bytes);
        let mut restored = ZksState::read(&mut reader).unwrap();
        reader.finish().unwrap();

        let (_, p_after) = zks_prove(&params, &mut restored, &absent, &mut r).unwrap();
        let enc = |p: &ZksProof| {
            let mut w = Writer::new();
            p.write(&mut w);
            w.into_bytes()
        };
        assert_eq!(enc(&p_before), enc(&p_after));
        assert!(zks_verify(&params, &com, &absent, None, &p_after));
    }
}
