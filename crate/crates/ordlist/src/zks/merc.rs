//! Mercurial commitments over ristretto255.
//!
//! A commitment is a pair `(C, D)`. Hard commitments bind: `D = h^r0`,
//! `C = g^m D^r1`, and both teasing and opening are only possible for the
//! committed message. Soft commitments (`D = g^r0`, `C = g^r1`) can be teased
//! to any message by solving for the tease exponent, but can never be opened
//! because the discrete log of `D` base `h` is unknown. Hard and soft
//! commitments are identically distributed pairs of group elements.
//!
//! A trapdoor setup variant records `tau = dlog_g(h)`, which lets a simulator
//! open soft commitments to arbitrary messages; honest setups discard it.

use curve25519_dalek::constants::RISTRETTO_BASEPOINT_POINT;
use curve25519_dalek::ristretto::{CompressedRistretto, RistrettoPoint};
use curve25519_dalek::scalar::Scalar;
use rand::RngCore;
use sha2::{Digest, Sha512};
use thiserror::Error;

use crate::wire::{Reader, WireError, Writer};

const MSG_DOMAIN_TAG: &[u8] = b"MERC-MSG";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MercError {
    #[error("soft commitments cannot be opened")]
    CannotOpenSoft,
    #[error("hard commitments only tease or open to their committed message")]
    MessageMismatch,
}

/// Public commitment key: two generators with unknown relative discrete log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MercParams {
    pub g: RistrettoPoint,
    pub h: RistrettoPoint,
}

/// Simulator trapdoor: `h = g^tau`.
#[derive(Debug, Clone)]
pub struct MercTrapdoor {
    pub tau: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MercKind {
    Hard,
    Soft,
}

/// The public commitment value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MercCommitment {
    pub c: RistrettoPoint,
    pub d: RistrettoPoint,
}

/// Prover-side randomness handle for a commitment.
#[derive(Debug, Clone)]
pub struct MercRand {
    pub kind: MercKind,
    pub r0: Scalar,
    pub r1: Scalar,
    /// Message scalar for hard commitments.
    pub(crate) committed: Option<Scalar>,
}

/// Opening proof: full decommitment `(r0, r1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenProof {
    pub r0: Scalar,
    pub r1: Scalar,
}

/// Tease proof: the single exponent `tau` with `C = g^m D^tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeaseProof {
    pub tau: Scalar,
}

/// Maps message bytes into the scalar field.
pub fn message_scalar(msg: &[u8]) -> Scalar {
    let mut hasher = Sha512::new();
    hasher.update(MSG_DOMAIN_TAG);
    hasher.update((msg.len() as u64).to_be_bytes());
    hasher.update(msg);
    let digest = hasher.finalize();
    let mut wide = [0u8; 64];
    wide.copy_from_slice(&digest);
    Scalar::from_bytes_mod_order_wide(&wide)
}

/// Generates a commitment key. `h` is derived from fresh randomness through a
/// hash-to-point, so nobody learns its discrete log.
pub fn merc_setup(rng: &mut impl RngCore) -> MercParams {
    let mut seed = [0u8; 64];
    rng.fill_bytes(&mut seed);
    MercParams {
        g: RISTRETTO_BASEPOINT_POINT,
        h: RistrettoPoint::from_uniform_bytes(&seed),
    }
}

/// Trapdoor setup: identical distribution to [`merc_setup`], but `dlog_g(h)`
/// is retained for equivocation.
pub fn merc_setup_with_trapdoor(rng: &mut impl RngCore) -> (MercParams, MercTrapdoor) {
    let tau = nonzero_scalar(rng);
    (
        MercParams {
            g: RISTRETTO_BASEPOINT_POINT,
            h: RISTRETTO_BASEPOINT_POINT * tau,
        },
        MercTrapdoor { tau },
    )
}

fn nonzero_scalar(rng: &mut impl RngCore) -> Scalar {
    loop {
        let mut bytes = [0u8; 64];
        rng.fill_bytes(&mut bytes);
        let s = Scalar::from_bytes_mod_order_wide(&bytes);
        if s != Scalar::ZERO {
            return s;
        }
    }
}

/// Commits to `msg` bindingly.
pub fn hard_commit(
    params: &MercParams,
    msg: &[u8],
    rng: &mut impl RngCore,
) -> (MercCommitment, MercRand) {
    let m = message_scalar(msg);
    let r0 = nonzero_scalar(rng);
    let r1 = nonzero_scalar(rng);
    let d = params.h * r0;
    let c = params.g * m + d * r1;
    (
        MercCommitment { c, d },
        MercRand {
            kind: MercKind::Hard,
            r0,
            r1,
            committed: Some(m),
        },
    )
}

/// Commits to nothing; teasable to any message later.
pub fn soft_commit(params: &MercParams, rng: &mut impl RngCore) -> (MercCommitment, MercRand) {
    let r0 = nonzero_scalar(rng);
    let r1 = nonzero_scalar(rng);
    (
        MercCommitment {
            c: params.g * r1,
            d: params.g * r0,
        },
        MercRand {
            kind: MercKind::Soft,
            r0,
            r1,
            committed: None,
        },
    )
}

/// Full decommitment of a hard commitment to its message.
pub fn merc_open(
    _params: &MercParams,
    msg: &[u8],
    rand: &MercRand,
    _commitment: &MercCommitment,
) -> Result<OpenProof, MercError> {
    match rand.kind {
        MercKind::Soft => Err(MercError::CannotOpenSoft),
        MercKind::Hard => {
            if rand.committed != Some(message_scalar(msg)) {
                return Err(MercError::MessageMismatch);
            }
            Ok(OpenProof {
                r0: rand.r0,
                r1: rand.r1,
            })
        }
    }
}

/// Partial decommitment: hard commitments tease only to their message, soft
/// commitments to anything.
pub fn merc_tease(
    _params: &MercParams,
    msg: &[u8],
    rand: &MercRand,
    _commitment: &MercCommitment,
) -> Result<TeaseProof, MercError> {
    let m = message_scalar(msg);
    match rand.kind {
        MercKind::Hard => {
            if rand.committed != Some(m) {
                return Err(MercError::MessageMismatch);
            }
            Ok(TeaseProof { tau: rand.r1 })
        }
        MercKind::Soft => Ok(TeaseProof {
            tau: (rand.r1 - m) * rand.r0.invert(),
        }),
    }
}

/// Trapdoor opening of a soft commitment to an arbitrary message.
pub fn merc_equivocate_open(
    _params: &MercParams,
    trapdoor: &MercTrapdoor,
    msg: &[u8],
    rand: &MercRand,
) -> Result<OpenProof, MercError> {
    match rand.kind {
        MercKind::Hard => Err(MercError::MessageMismatch),
        MercKind::Soft => {
            let m = message_scalar(msg);
            Ok(OpenProof {
                r0: rand.r0 * trapdoor.tau.invert(),
                r1: (rand.r1 - m) * rand.r0.invert(),
            })
        }
    }
}

pub fn ver_open(
    params: &MercParams,
    commitment: &MercCommitment,
    msg: &[u8],
    proof: &OpenProof,
) -> bool {
    let m = message_scalar(msg);
    commitment.d == params.h * proof.r0 && commitment.c == params.g * m + commitment.d * proof.r1
}

pub fn ver_tease(
    params: &MercParams,
    commitment: &MercCommitment,
    msg: &[u8],
    proof: &TeaseProof,
) -> bool {
    let m = message_scalar(msg);
    commitment.c == params.g * m + commitment.d * proof.tau
}

// --- wire encoding -------------------------------------------------------

pub(crate) fn put_point(w: &mut Writer, p: &RistrettoPoint) {
    w.put_raw(p.compress().as_bytes());
}

pub(crate) fn get_point(r: &mut Reader) -> Result<RistrettoPoint, WireError> {
    let bytes: [u8; 32] = r.get_array()?;
    CompressedRistretto(bytes)
        .decompress()
        .ok_or(WireError::Malformed("invalid ristretto point"))
}

/// Scalars travel big-endian, matching the integer convention.
pub(crate) fn put_scalar(w: &mut Writer, s: &Scalar) {
    let mut bytes = s.to_bytes();
    bytes.reverse();
    w.put_raw(&bytes);
}

pub(crate) fn get_scalar(r: &mut Reader) -> Result<Scalar, WireError> {
    let mut bytes: [u8; 32] = r.get_array()?;
    bytes.reverse();
    Option::<Scalar>::from(Scalar::from_canonical_bytes(bytes))
        .ok_or(WireError::Malformed("non-canonical scalar"))
}

impl MercCommitment {
    pub fn write(&self, w: &mut Writer) {
        put_point(w, &self.c);
        put_point(w, &self.d);
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        Ok(MercCommitment {
            c: get_point(r)?,
            d: get_point(r)?,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }
}

impl MercParams {
    pub fn write(&self, w: &mut Writer) {
        put_point(w, &self.g);
        put_point(w, &self.h);
    }

    pub fn read(r: &mut Reader) -> Result<Self, WireError> {
        Ok(MercParams {
            g: get_point(r)?,
            h: get_point(r)?,
        })
    }
}
