//! Command-line harness for the list protocols.
//!
//! The three PPAL parties exchange files: `ppal-setup` (owner) writes the
//! client and server digest containers, `ppal-query` (server) writes a proof
//! container, and `ppal-verify` (client) checks it and prints the verified
//! order. The ZKL prover/verifier pair works the same way under the `zkl`
//! subcommands. `bench` reproduces the asymptotic behaviour at desk scale
//! and prints CSV.
//!
//! Exit codes: 0 accept, 1 reject, 2 invalid list input, 3 I/O failure,
//! 4 non-member query element, 5 malformed container.

mod bench;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use ordlist::container::{Container, PayloadKind};
use ordlist::list::{ListError, SourceList};
use ordlist::ppal::{
    build_product_tree, ppal_query, ppal_setup, ppal_verify, BilinearContext, ClientDigest,
    PpalError, QueryProof, ServerDigest,
};
use ordlist::wire::{Reader, Writer};
use ordlist::zkl::{
    zkl_commit, zkl_query, zkl_setup, zkl_verify, QueryFlag, ZklCommitment, ZklProfile,
    ZklPublicKey, ZklQuery, ZklResponse, ZklState,
};
use ordlist::Decision;

#[derive(Parser)]
#[command(
    name = "ordlist",
    version,
    about = "Order queries on outsourced lists with integrity and privacy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Owner: authenticate a list, producing client and server digests.
    PpalSetup(PpalSetupArgs),
    /// Server: answer a batch order query with a proof.
    PpalQuery(PpalQueryArgs),
    /// Client: verify a proof and print the verified order.
    PpalVerify(PpalVerifyArgs),
    /// Zero-knowledge list prover/verifier commands.
    #[command(subcommand)]
    Zkl(ZklCommand),
    /// Timing and proof-size measurements, CSV on stdout.
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct PpalSetupArgs {
    /// List file: one element per line, file order is list order.
    #[arg(long)]
    list: PathBuf,
    #[arg(long)]
    client_out: PathBuf,
    #[arg(long)]
    server_out: PathBuf,
    /// Hex seed (up to 64 hex digits) for reproducible output.
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Args)]
struct PpalQueryArgs {
    #[arg(long)]
    server: PathBuf,
    #[arg(long)]
    list: PathBuf,
    /// Query file: one element per line.
    #[arg(long)]
    query: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Skip the product-tree preprocessing and use the linear path.
    #[arg(long)]
    no_pretree: bool,
}

#[derive(Args)]
struct PpalVerifyArgs {
    #[arg(long)]
    client: PathBuf,
    #[arg(long)]
    query: PathBuf,
    #[arg(long)]
    proof: PathBuf,
}

#[derive(Subcommand)]
enum ZklCommand {
    /// Prover: commit to a list.
    Commit(ZklCommitArgs),
    /// Prover: answer a membership or order query.
    Query(ZklQueryArgs),
    /// Verifier: check a response against the commitment.
    Verify(ZklVerifyArgs),
}

#[derive(Args)]
struct ZklCommitArgs {
    #[arg(long)]
    list: PathBuf,
    /// Public commitment container (public key + root).
    #[arg(long)]
    com_out: PathBuf,
    /// Prover state container; required to answer queries.
    #[arg(long)]
    state_out: PathBuf,
    #[arg(long)]
    seed: Option<String>,
    /// Reduced parameters (512-bit modulus, 16-bit tree); insecure.
    #[arg(long)]
    insecure_test_profile: bool,
}

#[derive(Args)]
struct ZklQueryArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    query: PathBuf,
    #[arg(long, value_enum)]
    flag: FlagArg,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Args)]
struct ZklVerifyArgs {
    #[arg(long)]
    com: PathBuf,
    #[arg(long)]
    query: PathBuf,
    #[arg(long, value_enum)]
    flag: FlagArg,
    #[arg(long)]
    response: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlagArg {
    Member,
    Order,
}

impl From<FlagArg> for QueryFlag {
    fn from(f: FlagArg) -> QueryFlag {
        match f {
            FlagArg::Member => QueryFlag::Member,
            FlagArg::Order => QueryFlag::Order,
        }
    }
}

/// Outcome classes, each owning one exit code.
pub(crate) enum CliError {
    Reject,
    InvalidList(String),
    Io(String),
    NonMember(Vec<String>),
    Malformed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Reject => 1,
            CliError::InvalidList(_) => 2,
            CliError::Io(_) => 3,
            CliError::NonMember(_) => 4,
            CliError::Malformed(_) => 5,
        }
    }

    fn report(&self) {
        match self {
            CliError::Reject => eprintln!("REJECT"),
            CliError::InvalidList(msg) => eprintln!("invalid list: {msg}"),
            CliError::Io(msg) => eprintln!("i/o error: {msg}"),
            CliError::NonMember(elements) => {
                eprintln!("query contains non-members:");
                for e in elements {
                    eprintln!("  {e}");
                }
            }
            CliError::Malformed(msg) => eprintln!("malformed container: {msg}"),
        }
    }
}

impl From<ListError> for CliError {
    fn from(e: ListError) -> Self {
        CliError::InvalidList(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::PpalSetup(args) => ppal_setup_cmd(args),
        Command::PpalQuery(args) => ppal_query_cmd(args),
        Command::PpalVerify(args) => ppal_verify_cmd(args),
        Command::Zkl(ZklCommand::Commit(args)) => zkl_commit_cmd(args),
        Command::Zkl(ZklCommand::Query(args)) => zkl_query_cmd(args),
        Command::Zkl(ZklCommand::Verify(args)) => zkl_verify_cmd(args),
        Command::Bench(args) => bench::run(args),
    }
}

/// `ORDLIST_SEED` overrides `--seed`; without either, seed from the OS.
pub(crate) fn make_rng(seed_arg: Option<&str>) -> Result<ChaCha20Rng, CliError> {
    let seed_hex = std::env::var("ORDLIST_SEED")
        .ok()
        .or_else(|| seed_arg.map(String::from));
    match seed_hex {
        Some(hex_str) => {
            let bytes = hex::decode(hex_str.trim())
                .map_err(|e| CliError::InvalidList(format!("bad seed hex: {e}")))?;
            if bytes.len() > 32 {
                return Err(CliError::InvalidList("seed longer than 32 bytes".into()));
            }
            let mut seed = [0u8; 32];
            seed[..bytes.len()].copy_from_slice(&bytes);
            Ok(ChaCha20Rng::from_seed(seed))
        }
        None => {
            let mut seed = [0u8; 32];
            rand::rngs::OsRng.fill_bytes(&mut seed);
            Ok(ChaCha20Rng::from_seed(seed))
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_list(path: &Path) -> Result<SourceList, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(SourceList::from_text(&text)?)
}

fn read_container(path: &Path, kind: PayloadKind) -> Result<Vec<u8>, CliError> {
    let bytes = read_file(path)?;
    Container::parse_expecting(&bytes, kind).map_err(|e| CliError::Malformed(e.to_string()))
}

fn ppal_setup_cmd(args: PpalSetupArgs) -> Result<(), CliError> {
    let list = read_list(&args.list)?;
    let mut rng = make_rng(args.seed.as_deref())?;
    let ctx = BilinearContext::new();
    let (client, server, _secret, _nonce) =
        ppal_setup(&ctx, &list, &mut rng).map_err(|e| CliError::InvalidList(e.to_string()))?;
    write_file(
        &args.client_out,
        &Container::new(PayloadKind::ClientDigest, client.to_bytes()).to_bytes(),
    )?;
    write_file(
        &args.server_out,
        &Container::new(PayloadKind::ServerDigest, server.to_bytes()).to_bytes(),
    )?;
    Ok(())
}

fn ppal_query_cmd(args: PpalQueryArgs) -> Result<(), CliError> {
    let payload = read_container(&args.server, PayloadKind::ServerDigest)?;
    let server =
        ServerDigest::from_bytes(&payload).map_err(|e| CliError::Malformed(e.to_string()))?;
    let list = read_list(&args.list)?;
    let query = read_list(&args.query)?;
    let delta = query.elements().to_vec();

    let tree = if args.no_pretree {
        None
    } else {
        Some(build_product_tree(&server, &list).map_err(|e| CliError::Malformed(e.to_string()))?)
    };

    let proof = match ppal_query(&server, &list, &delta, tree.as_ref()) {
        Ok(p) => p,
        Err(PpalError::NotMember(_)) => {
            // report every offender, not just the first
            let offenders = delta
                .iter()
                .filter(|e| list.rank_of(e).is_none())
                .map(|e| String::from_utf8_lossy(e).into_owned())
                .collect();
            return Err(CliError::NonMember(offenders));
        }
        Err(e) => return Err(CliError::Malformed(e.to_string())),
    };
    write_file(
        &args.out,
        &Container::new(PayloadKind::QueryProof, proof.to_bytes()).to_bytes(),
    )
}

fn ppal_verify_cmd(args: PpalVerifyArgs) -> Result<(), CliError> {
    let payload = read_container(&args.client, PayloadKind::ClientDigest)?;
    let client =
        ClientDigest::from_bytes(&payload).map_err(|e| CliError::Malformed(e.to_string()))?;
    let query = read_list(&args.query)?;
    let payload = read_container(&args.proof, PayloadKind::QueryProof)?;
    let proof = QueryProof::from_bytes(&payload).map_err(|e| CliError::Malformed(e.to_string()))?;

    let ctx = BilinearContext::new();
    match ppal_verify(&ctx, &client, query.elements(), &proof) {
        Decision::Accept => {
            for element in &proof.order {
                println!("{}", String::from_utf8_lossy(element));
            }
            Ok(())
        }
        Decision::Reject => Err(CliError::Reject),
    }
}

fn zkl_profile(insecure: bool) -> ZklProfile {
    if insecure {
        ZklProfile::insecure_test()
    } else {
        ZklProfile::production()
    }
}

fn zkl_commit_cmd(args: ZklCommitArgs) -> Result<(), CliError> {
    let list = read_list(&args.list)?;
    let mut rng = make_rng(args.seed.as_deref())?;
    let profile = zkl_profile(args.insecure_test_profile);
    let pk = zkl_setup(&profile, &mut rng).map_err(|e| CliError::InvalidList(e.to_string()))?;
    let (com, state) =
        zkl_commit(&pk, &list, &mut rng).map_err(|e| CliError::InvalidList(e.to_string()))?;

    let mut w = Writer::new();
    pk.write(&mut w);
    com.write(&mut w);
    write_file(
        &args.com_out,
        &Container::new(PayloadKind::ZklCommitment, w.into_bytes()).to_bytes(),
    )?;

    let mut w = Writer::new();
    pk.write(&mut w);
    com.write(&mut w);
    state.write(&mut w);
    write_file(
        &args.state_out,
        &Container::new(PayloadKind::ZklState, w.into_bytes()).to_bytes(),
    )
}

fn zkl_query_cmd(args: ZklQueryArgs) -> Result<(), CliError> {
    let payload = read_container(&args.state, PayloadKind::ZklState)?;
    let mut r = Reader::new(&payload);
    let (pk, com, mut state) = (|| -> Result<_, ordlist::wire::WireError> {
        let pk = ZklPublicKey::read(&mut r)?;
        let com = ZklCommitment::read(&mut r)?;
        let state = ZklState::read(&mut r)?;
        r.finish()?;
        Ok((pk, com, state))
    })()
    .map_err(|e| CliError::Malformed(e.to_string()))?;

    let query_list = read_list(&args.query)?;
    let query = ZklQuery {
        delta: query_list.elements().to_vec(),
        flag: QueryFlag::from(args.flag),
    };
    let mut rng = make_rng(args.seed.as_deref())?;
    let response = zkl_query(&pk, &com, &mut state, &query, &mut rng)
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    write_file(
        &args.out,
        &Container::new(PayloadKind::ZklResponse, response.to_bytes()).to_bytes(),
    )
}

fn zkl_verify_cmd(args: ZklVerifyArgs) -> Result<(), CliError> {
    let payload = read_container(&args.com, PayloadKind::ZklCommitment)?;
    let mut r = Reader::new(&payload);
    let (pk, com) = (|| -> Result<_, ordlist::wire::WireError> {
        let pk = ZklPublicKey::read(&mut r)?;
        let com = ZklCommitment::read(&mut r)?;
        r.finish()?;
        Ok((pk, com))
    })()
    .map_err(|e| CliError::Malformed(e.to_string()))?;

    let query_list = read_list(&args.query)?;
    let query = ZklQuery {
        delta: query_list.elements().to_vec(),
        flag: QueryFlag::from(args.flag),
    };
    let payload = read_container(&args.response, PayloadKind::ZklResponse)?;
    let response =
        ZklResponse::from_bytes(&payload).map_err(|e| CliError::Malformed(e.to_string()))?;

    match zkl_verify(&pk, &com, &query, &response) {
        Decision::Accept => {
            match &response.order {
                Some(order) => {
                    for element in order {
                        println!("{}", String::from_utf8_lossy(element));
                    }
                }
                None => {
                    for present in &response.member {
                        println!("{present}");
                    }
                }
            }
            Ok(())
        }
        Decision::Reject => Err(CliError::Reject),
    }
}
