//! Order queries on outsourced lists with integrity and privacy.
//!
//! Two schemes are implemented:
//!
//! * [`ppal`]: a three-party privacy-preserving authenticated list. A
//!   trusted owner publishes a constant-size client digest and a linear-size
//!   server digest; the untrusted server answers batch order queries with
//!   proofs of size `O(m)` that reveal nothing about the list beyond the
//!   answer, and the client verifies them with `2m + 2` pairings.
//! * [`zkl`]: a two-party zero-knowledge list. A prover commits to a list
//!   and answers membership and order queries consistently with the
//!   commitment, in zero knowledge, hiding even the list size. It is built
//!   from a zero-knowledge set ([`zks`]), homomorphic integer commitments
//!   ([`intcom`]) and non-negativity proofs ([`rangeproof`]).
//!
//! [`container`] defines the framed on-disk format used by the CLI, and
//! [`list`] the source-list type shared by both schemes.

pub mod container;
pub mod intcom;
pub mod list;
pub mod ppal;
pub mod rangeproof;
pub mod wire;
pub mod zkl;
pub mod zks;

/// Outcome of a proof verification.
///
/// Verifiers never panic on malformed input; every structural defect maps to
/// `Reject` (or a parse error at the wire layer).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn is_accept(self) -> bool {
        matches!(self, Decision::Accept)
    }
}
