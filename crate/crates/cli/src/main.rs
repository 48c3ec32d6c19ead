mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "htp-lab", version, about = "Exact-arithmetic workbench for elliptic divisibility and integrality certificates")]
pub struct Cli {
    /// Workbench configuration (JSON); the bundled one is used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Largest multiple index any search may reach.
    #[arg(long, global = true)]
    pub max_index: Option<u64>,
    /// Precision cap in bits for certified embedding comparisons.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Worker threads for `suite`.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field diagnostics.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Ideal factorisation and weak numerators.
    #[command(subcommand)]
    Ideal(IdealCmd),
    /// Elliptic divisibility sequence records.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Individual lemma checks.
    #[command(subcommand)]
    Lemma(LemmaCmd),
    /// Division-ample set audit.
    #[command(subcommand)]
    Divample(DivampleCmd),
    /// Norm-one torus ranks.
    #[command(subcommand)]
    Torus(TorusCmd),
    /// Integrality witnesses.
    #[command(subcommand)]
    Htp(HtpCmd),
    /// Run the acceptance matrix.
    Suite {
        /// Criterion numbers to run (all when omitted).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    /// Degree, signature, discriminant, maximality and class number check.
    Check {
        #[arg(long)]
        field: String,
        /// Search cap for principal generators.
        #[arg(long, default_value_t = 8)]
        cap: u64,
    },
}

#[derive(Args, Debug)]
pub struct ElementArgs {
    #[arg(long)]
    pub field: String,
    /// Coordinates in the power basis, comma separated; rationals as a/b.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
}

#[derive(Subcommand, Debug)]
pub enum IdealCmd {
    /// Prime factorisation of the principal ideal (x).
    Factor(ElementArgs),
    /// Weak numerator and denominator of x.
    Wn(ElementArgs),
}

#[derive(Subcommand, Debug)]
pub enum CurveCmd {
    /// x_n, y_n, wn, wd and pole valuations for n = 1..max.
    Eds {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 10)]
        max: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum LemmaCmd {
    /// m | n iff wd(x_rm) | wd(x_rn) for m, n up to max.
    Ec2 {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 8)]
        max: i64,
    },
    /// An index n with xi | wd(x_n).
    Ec3 {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// The quotient congruence for a divisor pair.
    Ec4 {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Divisibility and archimedean conditions for (xi, u).
    Dl {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value_t = 1)]
        ell: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum DivampleCmd {
    /// Density witnesses for x = 1..count in the set built from a curve over Q.
    Check {
        #[arg(long, default_value = "37a")]
        curve: String,
        /// Field the set lives in.
        #[arg(long, default_value = "rationals")]
        field: String,
        #[arg(long, default_value_t = 50)]
        count: i64,
        /// Asserted index [E(K):E(Q)].
        #[arg(long, default_value_t = 1)]
        index: u64,
        #[arg(long)]
        rank_assertion: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TorusCmd {
    Analyze {
        #[arg(long = "K")]
        k: String,
        #[arg(long = "L")]
        l: String,
        #[arg(long = "KL")]
        kl: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum HtpCmd {
    /// Search for a certificate that xi is a rational integer.
    Witness {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        /// Also write the witness JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a witness file.
    Verify {
        #[arg(long)]
        witness: PathBuf,
        /// Overrides the field named in the file.
        #[arg(long)]
        field: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok((report, outcome)) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(outcome as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
