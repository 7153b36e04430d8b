//! `witt`: command line access to exact big Witt vector arithmetic.
//!
//! Every subcommand prints one compact JSON document on stdout. A domain
//! error (bad input, a value outside the ring, a non-integral ghost) exits
//! with code 2 and an `{"error": ...}` document; a broken internal
//! invariant exits with code 1. `WITT_MAX_N` caps the largest index the
//! universal polynomial table will expand.

mod commands;
mod io;
mod verify;

use clap::{Parser, Subcommand};
use serde_json::Value;
use witt_core::{Error, Result, WittContext};

#[derive(Parser)]
#[command(name = "witt", version, about = "Exact arithmetic in rings of big Witt vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ghost components of a vector.
    Ghost {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        coords: String,
    },
    /// Solve for the vector with the given ghost components.
    Unghost {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        components: String,
    },
    /// Add two vectors.
    Add {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Multiply two vectors.
    Mul {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Apply the Frobenius F_n; the result lives on S/n.
    Frob {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(short, long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Apply the Verschiebung V_n to a vector on S/n; the result lives on S.
    Ver {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(short, long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Restrict a vector to a smaller truncation set.
    Restrict {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(short = 'T', long = "T")]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Check the restriction / Verschiebung exact sequence over a finite ring.
    Exactseq {
        #[arg(long)]
        ring: String,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(short, long)]
        n: u64,
        #[arg(long, default_value_t = 4096)]
        cap: u128,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Print an integer vector in both coordinate and V-basis form.
    Zbasis {
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        coords: String,
    },
    /// Print the orthogonal idempotent family over the p-local integers.
    Eps {
        #[arg(short, long)]
        p: u64,
        #[arg(short = 'S', long = "S")]
        s: String,
    },
    /// Split a vector along the idempotent decomposition at p.
    Decompose {
        #[arg(short, long)]
        p: u64,
        #[arg(long)]
        ring: Option<String>,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Rebuild a vector from its idempotent components at p.
    Reassemble {
        #[arg(short, long)]
        p: u64,
        #[arg(long)]
        ring: Option<String>,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        components: String,
    },
    /// Materialize a finite Witt ring and check its axioms.
    Finite {
        #[arg(long)]
        ring: String,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(long = "maximal-ideals")]
        maximal_ideals: bool,
        #[arg(long, default_value_t = 4096)]
        cap: u128,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Build and analyze phi-modules.
    Phimod {
        #[command(subcommand)]
        action: PhimodCommand,
    },
    /// Run a named verification suite, or all of them.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        max: Option<u64>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum PhimodCommand {
    /// Construct a unit or Tate object.
    Make {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        twist: i64,
        #[arg(short = 'S', long = "S")]
        s: String,
        #[arg(long, default_value = "z")]
        ring: String,
    },
    /// Direct sum of two objects.
    Sum {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Tensor product of two objects.
    Tensor {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Internal hom from the first object to the second.
    Hom {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Dual of an object.
    Dual {
        #[arg(long, allow_hyphen_values = true)]
        object: String,
    },
    /// Check every axiom at every level and report violations.
    Validate {
        #[arg(long, allow_hyphen_values = true)]
        object: String,
    },
    /// Tangent module of an object, or tangent matrix of an endomorphism.
    Tangent {
        #[arg(long, allow_hyphen_values = true)]
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
    },
    /// Run the zero / invertibility tangent harness on an endomorphism.
    Harness {
        #[arg(long, allow_hyphen_values = true)]
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Compare an object with its p-typical reduction.
    Reduction {
        #[arg(long, allow_hyphen_values = true)]
        object: String,
        #[arg(short, long)]
        p: u64,
    },
}

fn context() -> Result<WittContext> {
    match std::env::var("WITT_MAX_N") {
        Ok(raw) => {
            let cap = raw.trim().parse::<u64>().map_err(|_| Error::ShapeMismatch {
                reason: format!("WITT_MAX_N must be a positive integer, got '{raw}'"),
            })?;
            Ok(WittContext::with_cap(cap))
        }
        Err(_) => Ok(WittContext::new()),
    }
}

fn dispatch(ctx: &WittContext, command: Command) -> Result<(Value, i32)> {
    let value = match command {
        Command::Ghost { ring, s, coords } => commands::ghost_cmd(&ring, &s, &coords)?,
        Command::Unghost { ring, s, components } => commands::unghost_cmd(&ring, &s, &components)?,
        Command::Add { ring, s, a, b } => commands::binop_cmd(ctx, "add", &ring, &s, &a, &b)?,
        Command::Mul { ring, s, a, b } => commands::binop_cmd(ctx, "mul", &ring, &s, &a, &b)?,
        Command::Frob { ring, s, n, x } => commands::frob_cmd(ctx, &ring, &s, n, &x)?,
        Command::Ver { ring, s, n, x } => commands::ver_cmd(&ring, &s, n, &x)?,
        Command::Restrict { ring, s, t, x } => commands::restrict_cmd(&ring, &s, &t, &x)?,
        Command::Exactseq { ring, s, n, cap, samples, seed } => {
            commands::exactseq_cmd(ctx, &ring, &s, n, cap, samples, seed)?
        }
        Command::Zbasis { s, coords } => commands::zbasis_cmd(&s, &coords)?,
        Command::Eps { p, s } => commands::eps_cmd(ctx, p, &s)?,
        Command::Decompose { p, ring, s, x } => {
            commands::decompose_cmd(ctx, p, ring.as_deref(), &s, &x)?
        }
        Command::Reassemble { p, ring, s, components } => {
            commands::reassemble_cmd(p, ring.as_deref(), &s, &components)?
        }
        Command::Finite { ring, s, maximal_ideals, cap, seed } => {
            commands::finite_cmd(ctx, &ring, &s, maximal_ideals, cap, seed)?
        }
        Command::Phimod { action } => match action {
            PhimodCommand::Make { kind, twist, s, ring } => {
                commands::phimod_make(ctx, &kind, twist, &s, &ring)?
            }
            PhimodCommand::Sum { a, b } => commands::phimod_binary(ctx, "sum", &a, &b)?,
            PhimodCommand::Tensor { a, b } => commands::phimod_binary(ctx, "tensor", &a, &b)?,
            PhimodCommand::Hom { a, b } => commands::phimod_binary(ctx, "hom", &a, &b)?,
            PhimodCommand::Dual { object } => commands::phimod_dual(ctx, &object)?,
            PhimodCommand::Validate { object } => commands::phimod_validate(ctx, &object)?,
            PhimodCommand::Tangent { object, matrix } => {
                commands::phimod_tangent(ctx, &object, matrix.as_deref())?
            }
            PhimodCommand::Harness { object, matrix } => {
                commands::phimod_harness(ctx, &object, &matrix)?
            }
            PhimodCommand::Reduction { object, p } => commands::phimod_reduction(ctx, &object, p)?,
        },
        Command::Verify { suite, max, seed } => {
            let (value, pass) = verify::verify_cmd(ctx, suite.as_deref(), max, seed)?;
            return Ok((value, if pass { 0 } else { 1 }));
        }
    };
    Ok((value, 0))
}

fn main() {
    let cli = Cli::parse();
    match context().and_then(|ctx| dispatch(&ctx, cli.command)) {
        Ok((value, code)) => {
            println!("{}", serde_json::to_string(&value).expect("handlers emit serializable JSON"));
            if code != 0 {
                std::process::exit(code);
            }
        }
        Err(e) => {
            let doc = io::error_to_json(&e);
            println!("{}", serde_json::to_string(&doc).expect("error documents are serializable"));
            std::process::exit(if e.is_internal() { 1 } else { 2 });
        }
    }
}
