//! Desk-scale benchmark runner.
//!
//! For each `(n, m)` pair it measures owner setup, server query time with
//! and without the product tree, and client verification, printing one CSV
//! row per phase: `scheme,n,m,phase,mean_ms,proof_bytes`. With the tree the
//! query time grows like `m log n`; without it, linearly in `n`.

use std::time::Instant;

use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use ordlist::container::{Container, PayloadKind};
use ordlist::list::SourceList;
use ordlist::ppal::{build_product_tree, ppal_query, ppal_setup, ppal_verify, BilinearContext};

use crate::CliError;

#[derive(Args)]
pub(crate) struct BenchArgs {
    /// Scheme to benchmark (ppal).
    #[arg(long, default_value = "ppal")]
    scheme: String,
    /// Comma-separated list sizes.
    #[arg(long, value_delimiter = ',', default_value = "1024,4096")]
    n: Vec<usize>,
    /// Comma-separated query sizes.
    #[arg(long, value_delimiter = ',', default_value = "16")]
    m: Vec<usize>,
    /// Trials per phase; means are reported.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long)]
    seed: Option<String>,
}

pub(crate) fn run(args: BenchArgs) -> Result<(), CliError> {
    if args.scheme != "ppal" {
        return Err(CliError::InvalidList(format!(
            "unsupported bench scheme '{}'; available: ppal",
            args.scheme
        )));
    }
    if args.n.contains(&0) || args.m.contains(&0) || args.trials == 0 {
        return Err(CliError::InvalidList(
            "sizes and trials must be positive".into(),
        ));
    }

    let mut rng = match args.seed.as_deref() {
        Some(_) => crate::make_rng(args.seed.as_deref())?,
        None => ChaCha20Rng::from_seed([0x5e; 32]),
    };
    let ctx = BilinearContext::new();

    println!("scheme,n,m,phase,mean_ms,proof_bytes");
    for &n in &args.n {
        let list = SourceList::new(
            (0..n)
                .map(|i| format!("element-{i:010}").into_bytes())
                .collect(),
        )
        .expect("generated elements are distinct");

        let t0 = Instant::now();
        let (client, server, _, _) =
            ppal_setup(&ctx, &list, &mut rng).map_err(|e| CliError::InvalidList(e.to_string()))?;
        let setup_ms = t0.elapsed().as_secs_f64() * 1e3;

        let tree = build_product_tree(&server, &list).map_err(|e| CliError::Io(e.to_string()))?;

        for &m in &args.m {
            let m = m.min(n);
            // evenly spread queried ranks
            let delta: Vec<Vec<u8>> = (0..m).map(|j| list.elements()[j * n / m].clone()).collect();

            let mut pretree_ms = 0.0;
            let mut linear_ms = 0.0;
            let mut verify_ms = 0.0;
            let mut proof_bytes = 0usize;
            for _ in 0..args.trials {
                let t0 = Instant::now();
                let proof = ppal_query(&server, &list, &delta, Some(&tree))
                    .map_err(|e| CliError::Io(e.to_string()))?;
                pretree_ms += t0.elapsed().as_secs_f64() * 1e3;

                let t0 = Instant::now();
                let proof_linear = ppal_query(&server, &list, &delta, None)
                    .map_err(|e| CliError::Io(e.to_string()))?;
                linear_ms += t0.elapsed().as_secs_f64() * 1e3;

                let t0 = Instant::now();
                let decision = ppal_verify(&ctx, &client, &delta, &proof);
                verify_ms += t0.elapsed().as_secs_f64() * 1e3;
                if !decision.is_accept() {
                    return Err(CliError::Reject);
                }

                proof_bytes = Container::new(PayloadKind::QueryProof, proof_linear.to_bytes())
                    .to_bytes()
                    .len();
            }
            let t = args.trials as f64;
            println!("ppal,{n},{m},setup,{:.3},", setup_ms);
            println!(
                "ppal,{n},{m},query_pretree,{:.3},{proof_bytes}",
                pretree_ms / t
            );
            println!(
                "ppal,{n},{m},query_linear,{:.3},{proof_bytes}",
                linear_ms / t
            );
            println!("ppal,{n},{m},verify,{:.3},{proof_bytes}", verify_ms / t);
        }
    }
    Ok(())
}
