//! Protocol-level properties of the authenticated list beyond the
//! acceptance criteria: tree access bounds, interval-product oracles and
//! proof-shape invariants.

use rand::prelude::*;
use rand_chacha::ChaCha20Rng;

use ordlist::list::SourceList;
use ordlist::ppal::{build_product_tree, ppal_query, ppal_setup, ppal_verify, BilinearContext};
use ordlist::Decision;

fn rng(seed: u8) -> ChaCha20Rng {
    ChaCha20Rng::from_seed([seed; 32])
}

fn numbered_list(n: usize) -> SourceList {
    SourceList::new((0..n).map(|i| format!("n{i:05}").into_bytes()).collect()).unwrap()
}

/// Interval products agree with the naive loop for every interval at every
/// list size up to 64.
#[test]
fn range_products_match_naive_for_all_small_sizes() {
    use blstrs::G1Projective;
    use group::Group;

    let ctx = BilinearContext::new();
    let mut r = rng(31);
    for n in 1..=64usize {
        let list = numbered_list(n);
        let (_, server, _, _) = ppal_setup(&ctx, &list, &mut r).unwrap();
        let tree = build_product_tree(&server, &list).unwrap();

        // recompute leaf hashes through an independent query: the proof for
        // the full list exposes the witnesses the hashes derive from
        let full = ppal_query(&server, &list, list.elements(), None).unwrap();
        let mut prefix = vec![G1Projective::identity()];
        for (i, element) in list.elements().iter().enumerate() {
            // hash recomputed exactly as the verifier does it
            let mut msg = Vec::new();
            msg.extend_from_slice(&full.member_witnesses[i].to_compressed());
            msg.extend_from_slice(&(element.len() as u32).to_be_bytes());
            msg.extend_from_slice(element);
            let psi = G1Projective::hash_to_curve(&msg, b"PPAL-SIG", &[]);
            let last = *prefix.last().unwrap();
            prefix.push(last + psi);
        }
        for i in 1..=n {
            for j in i..=n {
                let naive = prefix[j] - prefix[i - 1];
                assert_eq!(tree.range_product(i, j).unwrap(), naive, "n={n} ({i},{j})");
            }
        }
    }
}

/// A query through the tree touches at most `4 m log2(n)` nodes.
#[test]
fn tree_reads_stay_within_budget() {
    let ctx = BilinearContext::new();
    let mut r = rng(32);
    for n in [16usize, 64, 256] {
        let list = numbered_list(n);
        let (_, server, _, _) = ppal_setup(&ctx, &list, &mut r).unwrap();
        let tree = build_product_tree(&server, &list).unwrap();
        for _ in 0..20 {
            let m = r.gen_range(1..=n.min(24));
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut r);
            idx.truncate(m);
            let delta: Vec<Vec<u8>> = idx.iter().map(|&i| list.elements()[i].clone()).collect();

            tree.reset_reads();
            ppal_query(&server, &list, &delta, Some(&tree)).unwrap();
            let budget = (4 * m) as f64 * (n as f64).log2();
            assert!(
                tree.reads() as f64 <= budget,
                "n={n} m={m}: {} reads > budget {budget}",
                tree.reads()
            );
        }
    }
}

/// Proof shape: exactly `m` member witnesses, `m - 1` order witnesses and
/// two aggregate elements, whether or not the tree is used; both paths give
/// byte-identical proofs.
#[test]
fn proof_shape_and_path_equivalence() {
    let ctx = BilinearContext::new();
    let mut r = rng(33);
    let list = numbered_list(40);
    let (client, server, _, _) = ppal_setup(&ctx, &list, &mut r).unwrap();
    let tree = build_product_tree(&server, &list).unwrap();
    for m in [1usize, 2, 7, 40] {
        let mut idx: Vec<usize> = (0..40).collect();
        idx.shuffle(&mut r);
        idx.truncate(m);
        let delta: Vec<Vec<u8>> = idx.iter().map(|&i| list.elements()[i].clone()).collect();

        let with_tree = ppal_query(&server, &list, &delta, Some(&tree)).unwrap();
        let without = ppal_query(&server, &list, &delta, None).unwrap();
        assert_eq!(with_tree.to_bytes(), without.to_bytes());
        assert_eq!(with_tree.member_witnesses.len(), m);
        assert_eq!(with_tree.order_witnesses.len(), m - 1);
        assert_eq!(
            ppal_verify(&ctx, &client, &delta, &with_tree),
            Decision::Accept
        );
    }
}

/// Flipping any single proof component of a small proof rejects, across
/// randomized trials (the acceptance suite runs the large version).
#[test]
fn every_component_flip_rejects() {
    use blstrs::{G1Projective, G2Projective};
    use group::{Curve, Group};

    let ctx = BilinearContext::new();
    let mut r = rng(34);
    let list = numbered_list(10);
    let (client, server, _, _) = ppal_setup(&ctx, &list, &mut r).unwrap();
    let delta: Vec<Vec<u8>> = vec![
        list.elements()[2].clone(),
        list.elements()[5].clone(),
        list.elements()[8].clone(),
    ];
    let honest = ppal_query(&server, &list, &delta, None).unwrap();
    assert_eq!(
        ppal_verify(&ctx, &client, &delta, &honest),
        Decision::Accept
    );

    for j in 0..3 {
        let mut p = honest.clone();
        p.member_witnesses[j] =
            (G1Projective::from(p.member_witnesses[j]) + G1Projective::generator()).to_affine();
        assert_eq!(
            ppal_verify(&ctx, &client, &delta, &p),
            Decision::Reject,
            "witness {j}"
        );
    }
    for j in 0..2 {
        let mut p = honest.clone();
        p.order_witnesses[j] =
            (G2Projective::from(p.order_witnesses[j]) + G2Projective::generator()).to_affine();
        assert_eq!(
            ppal_verify(&ctx, &client, &delta, &p),
            Decision::Reject,
            "order witness {j}"
        );
    }
    for j in 0..3 {
        let mut p = honest.clone();
        p.order[j] = b"someone-else".to_vec();
        assert_eq!(
            ppal_verify(&ctx, &client, &delta, &p),
            Decision::Reject,
            "order element {j}"
        );
    }
    let mut p = honest.clone();
    p.sigma_order = (G1Projective::from(p.sigma_order) + G1Projective::generator()).to_affine();
    assert_eq!(ppal_verify(&ctx, &client, &delta, &p), Decision::Reject);
    let mut p = honest;
    p.lambda = (G1Projective::from(p.lambda) + G1Projective::generator()).to_affine();
    assert_eq!(ppal_verify(&ctx, &client, &delta, &p), Decision::Reject);
}

/// Concurrent queries on one shared tree are race-free: the tree is
/// read-only apart from the atomic read counter.
#[test]
fn concurrent_queries_share_a_tree() {
    use rayon::prelude::*;

    let ctx = BilinearContext::new();
    let mut r = rng(36);
    let list = numbered_list(64);
    let (client, server, _, _) = ppal_setup(&ctx, &list, &mut r).unwrap();
    let tree = build_product_tree(&server, &list).unwrap();

    let deltas: Vec<Vec<Vec<u8>>> = (0..16)
        .map(|t| {
            let mut tr = rng(100 + t as u8);
            let m = tr.gen_range(1..=8);
            let mut idx: Vec<usize> = (0..64).collect();
            idx.shuffle(&mut tr);
            idx.truncate(m);
            idx.into_iter()
                .map(|i| list.elements()[i].clone())
                .collect()
        })
        .collect();

    let all_accept = deltas
        .par_iter()
        .map(|delta| {
            let proof = ppal_query(&server, &list, delta, Some(&tree)).unwrap();
            ppal_verify(&ctx, &client, delta, &proof) == Decision::Accept
        })
        .reduce(|| true, |a, b| a && b);
    assert!(all_accept);
}

/// Witnesses for one element differ between two setups of the same list
/// (fresh blinding), yet both verify under their own digests.
#[test]
fn reblinding_across_setups() {
    let ctx = BilinearContext::new();
    let mut r = rng(35);
    let list = numbered_list(6);
    let (c1, s1, _, _) = ppal_setup(&ctx, &list, &mut r).unwrap();
    let (c2, s2, _, _) = ppal_setup(&ctx, &list, &mut r).unwrap();
    assert_ne!(s1.member_auth[0].0, s2.member_auth[0].0);

    let delta: Vec<Vec<u8>> = list.elements()[..2].to_vec();
    let p1 = ppal_query(&s1, &list, &delta, None).unwrap();
    let p2 = ppal_query(&s2, &list, &delta, None).unwrap();
    assert_eq!(ppal_verify(&ctx, &c1, &delta, &p1), Decision::Accept);
    assert_eq!(ppal_verify(&ctx, &c2, &delta, &p2), Decision::Accept);
    assert_eq!(ppal_verify(&ctx, &c2, &delta, &p1), Decision::Reject);
    assert_eq!(ppal_verify(&ctx, &c1, &delta, &p2), Decision::Reject);
}
