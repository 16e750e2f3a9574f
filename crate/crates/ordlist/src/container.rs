//! Framed on-disk format for digests, proofs, commitments and responses.
//!
//! Layout: 4-byte magic (`PPAL` or `ZKL1`), version byte, payload-kind byte,
//! length-prefixed payload, then a 32-byte SHA-256 checksum of everything
//! before it. The checksum is transport integrity plumbing only; it is not
//! part of any cryptographic scheme.

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::wire::{Reader, WireError, Writer};

pub const VERSION: u8 = 1;
pub const MAGIC_PPAL: [u8; 4] = *b"PPAL";
pub const MAGIC_ZKL: [u8; 4] = *b"ZKL1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadKind {
    ClientDigest = 1,
    ServerDigest = 2,
    QueryProof = 3,
    ZklCommitment = 4,
    ZklState = 5,
    ZklResponse = 6,
}

impl PayloadKind {
    pub fn magic(self) -> [u8; 4] {
        match self {
            PayloadKind::ClientDigest | PayloadKind::ServerDigest | PayloadKind::QueryProof => {
                MAGIC_PPAL
            }
            _ => MAGIC_ZKL,
        }
    }

    fn from_byte(b: u8) -> Option<Self> {
        Some(match b {
            1 => PayloadKind::ClientDigest,
            2 => PayloadKind::ServerDigest,
            3 => PayloadKind::QueryProof,
            4 => PayloadKind::ZklCommitment,
            5 => PayloadKind::ZklState,
            6 => PayloadKind::ZklResponse,
            _ => return None,
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContainerError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown payload kind {0}")]
    UnknownKind(u8),
    #[error("payload kind does not match the container magic")]
    KindMagicMismatch,
    #[error("checksum mismatch")]
    ChecksumMismatch,
    #[error("expected {expected:?} payload, found {found:?}")]
    WrongKind {
        expected: PayloadKind,
        found: PayloadKind,
    },
    #[error(transparent)]
    Wire(#[from] WireError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub kind: PayloadKind,
    pub payload: Vec<u8>,
}

impl Container {
    pub fn new(kind: PayloadKind, payload: Vec<u8>) -> Self {
        Container { kind, payload }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_raw(&self.kind.magic());
        w.put_u8(VERSION);
        w.put_u8(self.kind as u8);
        w.put_bytes(&self.payload);
        let mut bytes = w.into_bytes();
        let checksum = Sha256::digest(&bytes);
        bytes.extend_from_slice(&checksum);
        bytes
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, ContainerError> {
        if bytes.len() < 4 + 1 + 1 + 4 + 32 {
            return Err(WireError::Truncated.into());
        }
        let (body, checksum) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != checksum {
            return Err(ContainerError::ChecksumMismatch);
        }
        let mut r = Reader::new(body);
        let magic: [u8; 4] = r.get_array()?;
        if magic != MAGIC_PPAL && magic != MAGIC_ZKL {
            return Err(ContainerError::BadMagic);
        }
        let version = r.get_u8()?;
        if version != VERSION {
            return Err(ContainerError::UnsupportedVersion(version));
        }
        let kind_byte = r.get_u8()?;
        let kind =
            PayloadKind::from_byte(kind_byte).ok_or(ContainerError::UnknownKind(kind_byte))?;
        if kind.magic() != magic {
            return Err(ContainerError::KindMagicMismatch);
        }
        let payload = r.get_bytes()?.to_vec();
        r.finish()?;
        Ok(Container { kind, payload })
    }

    /// Parses and checks the payload kind in one step.
    pub fn parse_expecting(bytes: &[u8], expected: PayloadKind) -> Result<Vec<u8>, ContainerError> {
        let container = Self::parse(bytes)?;
        if container.kind != expected {
            return Err(ContainerError::WrongKind {
                expected,
                found: container.kind,
            });
        }
        Ok(container.payload)
    }
}
