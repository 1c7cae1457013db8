mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::io::{render, resolve_caps, Envelope, CAPS_ENV};

#[derive(Parser)]
#[command(name = "geofix", version, about = "Exact twisted fixed points, equivariant bundle data and splitting catalogs")]
pub struct Cli {
    /// Read the JSON payload from this file instead of stdin.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Write the response here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    #[command(flatten)]
    pub caps: CapArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Pretty,
    Compact,
}

#[derive(Args)]
pub struct CapArgs {
    #[arg(long, global = true)]
    pub cap_group_order: Option<usize>,
    #[arg(long, global = true)]
    pub cap_hom_candidates: Option<usize>,
    #[arg(long, global = true)]
    pub cap_materialize: Option<usize>,
    #[arg(long, global = true)]
    pub cap_brute_force_dim: Option<usize>,
    #[arg(long, global = true)]
    pub cap_q_max: Option<usize>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Subgroups, conjugacy classes, Weyl groups and homomorphisms.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Twisted fixed points of wreath-indexed powers (payload: lambda, q, x, sigma).
    #[command(subcommand)]
    Twisted(TwistedCmd),
    /// Equivariant bundle data (payload: gamma, q, bundle, ...).
    #[command(subcommand)]
    Bundle(BundleCmd),
    /// Cyclic data tuples and their closure operations (payload: a tuple).
    #[command(subcommand)]
    Acyc(AcycCmd),
    /// Irreducible homomorphisms into wreath products (payload: lambda, q, sigma).
    #[command(subcommand)]
    Geosym(GeosymCmd),
    /// G-set classification and splitting catalogs.
    #[command(subcommand)]
    Tomdieck(TomdieckCmd),
}

#[derive(Subcommand)]
pub enum GroupCmd {
    Subgroups {
        #[arg(long)]
        group: String,
    },
    Classes {
        #[arg(long)]
        group: String,
    },
    Weyl {
        #[arg(long)]
        group: String,
        /// Generators of H as a JSON list of permutations.
        #[arg(long)]
        subgroup: String,
    },
    Homs {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
}

#[derive(Subcommand)]
pub enum TwistedCmd {
    Decompose,
    FixDim {
        /// Also compute the dimension by linear algebra on the whole space.
        #[arg(long)]
        verify: bool,
    },
    Basis,
}

#[derive(Subcommand)]
pub enum BundleCmd {
    CheckFaithful,
    /// Product with the payload's `other` bundle (quotient group `other_q`).
    Product,
    Sym {
        #[arg(long)]
        power: usize,
    },
    EtaLambda,
    EtaLambdaRel,
    Iterphi,
    Ifcrit,
}

#[derive(Subcommand)]
pub enum AcycCmd {
    Validate,
    Member {
        /// Test the p-local variant instead.
        #[arg(long)]
        p: Option<usize>,
    },
    Stretch {
        #[arg(long)]
        k: usize,
    },
    /// Payload: {"a": tuple, "b": tuple}.
    Smash,
    Phi {
        #[arg(long)]
        k: usize,
    },
    Sym {
        #[arg(long)]
        k: usize,
    },
    Free,
    Catalog,
    Shadow {
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
}

#[derive(Subcommand)]
pub enum GeosymCmd {
    Catalog,
    Classify,
    Centralizer,
    Identity {
        #[arg(long)]
        q: usize,
    },
}

#[derive(Subcommand)]
pub enum TomdieckCmd {
    Classes {
        #[arg(long)]
        group: String,
        #[arg(long)]
        q: usize,
    },
    Aut {
        #[arg(long)]
        group: String,
        /// The G-set as JSON: {"points": n, "action": [generator images]}.
        #[arg(long)]
        z: String,
    },
    Catalog {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long)]
        qmax: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = commands::name(&cli.command);
    let env = std::env::var(CAPS_ENV).ok();
    let c = &cli.caps;
    let outcome = resolve_caps(
        env.as_deref(),
        &[
            ("group-order", c.cap_group_order),
            ("hom-candidates", c.cap_hom_candidates),
            ("materialize", c.cap_materialize),
            ("brute-force-dim", c.cap_brute_force_dim),
            ("q-max", c.cap_q_max),
        ],
    )
    .and_then(|caps| commands::run(&cli.command, cli.input.as_deref(), &caps));
    let (envelope, code) = match outcome {
        Ok(v) => (Envelope::new(&name, v, Vec::new()), 0),
        Err(f) => (Envelope::new(&name, serde_json::Value::Null, f.diagnostics()), f.exit_code()),
    };
    let text = render(&envelope, matches!(cli.format, Format::Pretty));
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}
