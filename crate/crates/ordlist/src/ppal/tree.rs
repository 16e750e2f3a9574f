//! Server-side preprocessing: a balanced binary tree of partial products of
//! the per-element hash values, supporting interval products in `O(log n)`
//! node reads. With the tree, answering a query of size `m` touches
//! `O(m log n)` nodes instead of rebuilding the `O(n)` complement product.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use blstrs::G1Projective;
use group::Group;

use crate::list::SourceList;

use super::{element_hash, PpalError, ServerDigest};

/// Precomputed products of `psi_i = H(t_i || x_i)` over a balanced tree,
/// together with the element -> rank index used to answer queries without
/// scanning the list.
///
/// Immutable after construction; the node-read counter is atomic, so shared
/// concurrent queries are race-free.
pub struct ProductTree {
    n: usize,
    nodes: Vec<G1Projective>,
    rank_index: HashMap<Vec<u8>, usize>,
    reads: AtomicU64,
}

/// Builds the tree from the digest's member witnesses. `O(n)` time and space.
pub fn build_product_tree(
    server: &ServerDigest,
    list: &SourceList,
) -> Result<ProductTree, PpalError> {
    let n = list.len();
    if server.member_auth.len() != n || server.order_auth.len() != n {
        return Err(PpalError::InconsistentDigest);
    }
    let mut nodes = vec![G1Projective::identity(); 2 * n];
    for (i, element) in list.elements().iter().enumerate() {
        let (witness, _) = &server.member_auth[i];
        nodes[n + i] = element_hash(witness, element);
    }
    for i in (1..n).rev() {
        nodes[i] = nodes[2 * i] + nodes[2 * i + 1];
    }
    let rank_index = list
        .elements()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i + 1))
        .collect();
    Ok(ProductTree {
        n,
        nodes,
        rank_index,
        reads: AtomicU64::new(0),
    })
}

impl ProductTree {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// 1-based rank of `element`, if present.
    pub fn rank_of(&self, element: &[u8]) -> Option<usize> {
        self.rank_index.get(element).copied()
    }

    /// Product of `psi_i..=psi_j` (1-based, inclusive) reading `O(log n)`
    /// nodes.
    pub fn range_product(&self, i: usize, j: usize) -> Result<G1Projective, PpalError> {
        if i < 1 || j < i || j > self.n {
            return Err(PpalError::IndexError { i, j, n: self.n });
        }
        let mut acc = G1Projective::identity();
        let mut reads = 0u64;
        let mut l = i - 1 + self.n;
        let mut r = j + self.n;
        while l < r {
            if l & 1 == 1 {
                acc += self.nodes[l];
                reads += 1;
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                acc += self.nodes[r];
                reads += 1;
            }
            l >>= 1;
            r >>= 1;
        }
        self.reads.fetch_add(reads, Ordering::Relaxed);
        Ok(acc)
    }

    /// Total tree nodes read so far.
    pub fn reads(&self) -> u64 {
        self.reads.load(Ordering::Relaxed)
    }

    pub fn reset_reads(&self) {
        self.reads.store(0, Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::super::{ppal_setup, BilinearContext};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn small_list(n: usize) -> SourceList {
        SourceList::new(
            (0..n)
                .map(|i| format!("item-{i:03}").into_bytes())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn root_is_full_product_and_singletons_are_leaves() {
        let mut rng = ChaCha20Rng::from_seed([7; 32]);
        let ctx = BilinearContext::new();
        for n in [1usize, 4, 5] {
            let list = small_list(n);
            let (_, server, _, _) = ppal_setup(&ctx, &list, &mut rng).unwrap();
            let tree = build_product_tree(&server, &list).unwrap();

            let psis: Vec<G1Projective> = list
                .elements()
                .iter()
                .enumerate()
                .map(|(i, e)| element_hash(&server.member_auth[i].0, e))
                .collect();

            let full: G1Projective = psis.iter().sum();
            assert_eq!(tree.range_product(1, n).unwrap(), full);
            for i in 1..=n {
                assert_eq!(tree.range_product(i, i).unwrap(), psis[i - 1]);
            }
        }
    }

    #[test]
    fn every_interval_matches_naive_product() {
        let mut rng = ChaCha20Rng::from_seed([8; 32]);
        let ctx = BilinearContext::new();
        let n = rng.gen_range(2..=64);
        let list = small_list(n);
        let (_, server, _, _) = ppal_setup(&ctx, &list, &mut rng).unwrap();
        let tree = build_product_tree(&server, &list).unwrap();
        let psis: Vec<G1Projective> = list
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| element_hash(&server.member_auth[i].0, e))
            .collect();
        for i in 1..=n {
            for j in i..=n {
                let naive: G1Projective = psis[i - 1..j].iter().sum();
                assert_eq!(
                    tree.range_product(i, j).unwrap(),
                    naive,
                    "interval ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn out_of_range_is_an_error() {
        let mut rng = ChaCha20Rng::from_seed([9; 32]);
        let ctx = BilinearContext::new();
        let list = small_list(4);
        let (_, server, _, _) = ppal_setup(&ctx, &list, &mut rng).unwrap();
        let tree = build_product_tree(&server, &list).unwrap();
        assert!(tree.range_product(0, 2).is_err());
        assert!(tree.range_product(3, 2).is_err());
        assert!(tree.range_product(1, 5).is_err());
    }

    #[test]
    fn mismatched_digest_is_rejected() {
        let mut rng = ChaCha20Rng::from_seed([10; 32]);
        let ctx = BilinearContext::new();
        let list = small_list(4);
        let other = small_list(6);
        let (_, server, _, _) = ppal_setup(&ctx, &list, &mut rng).unwrap();
        assert!(matches!(
            build_product_tree(&server, &other),
            Err(PpalError::InconsistentDigest)
        ));
    }
}
