use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use itsec::cryptosystem::induced_channel;
use itsec::gap::{gap_report, GapParams};
use itsec::io::{parse_input, Input};
use itsec::notions::{analyze, lemma1_check, BinaryJoint, SsCaps, DEFAULT_SS_CAP};
use itsec::rational::parse_rational;
use itsec::render::{self, Format};
use itsec::synthesis::synthesize;
use itsec::verify::{self, VerifyConfig};
use itsec::{Error, Result};

#[derive(Parser)]
#[command(
    name = "itsec",
    version,
    about = "Exact secrecy analysis of finite symmetric-key ciphers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Text => Format::Text,
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// JSON file with a channel or cryptosystem; `-` reads stdin
    #[arg(long)]
    input: Option<PathBuf>,
    /// The same JSON document given on the command line
    #[arg(long)]
    inline: Option<String>,
}

impl Source {
    fn load(&self) -> Result<Input> {
        let text = match (&self.input, &self.inline) {
            (_, Some(t)) => t.clone(),
            (Some(p), None) if p.as_os_str() == "-" => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
                s
            }
            (Some(p), None) => std::fs::read_to_string(p)
                .map_err(|e| Error::Parse(format!("reading {}: {e}", p.display())))?,
            (None, None) => unreachable!("clap requires one source"),
        };
        parse_input(&text)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Every secrecy notion for a channel or cipher, with certificates
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Message-distribution grid resolution
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        /// Largest alphabet for the SS predicate enumeration
        #[arg(long, default_value_t = DEFAULT_SS_CAP, value_parser = cap_parser)]
        ss_cap: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// A cipher realizing a doubly stochastic channel
    Synthesize {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// The separating example: small IND, constant PS^sm
    GapDemo {
        /// Even alphabet size
        #[arg(long)]
        n: usize,
        /// Deviation in (0, 1/n]; defaults to 1/n
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        #[arg(long, default_value_t = DEFAULT_SS_CAP, value_parser = cap_parser)]
        ss_cap: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Check every theorem on seeded random instances
    VerifyTheorems {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        #[arg(long, default_value_t = DEFAULT_SS_CAP, value_parser = cap_parser)]
        ss_cap: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Both sides of the binary dependence identity for a 2x2 joint
    LemmaCheck {
        a: String,
        b: String,
        c: String,
        d: String,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
}

fn cap_parser(s: &str) -> std::result::Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v < 2 {
        return Err("cap must be at least 2".into());
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<(String, bool)> {
    Ok(match cli.command {
        Command::Analyze {
            source,
            grid,
            ss_cap,
            format,
        } => {
            let ch = match source.load()? {
                Input::Channel(ch) => ch,
                Input::Cryptosystem(sys) => induced_channel(&sys)?,
            };
            let report = analyze(&ch, grid, SsCaps::uniform(ss_cap))?;
            (render::notion_report(&report, format.into()), true)
        }
        Command::Synthesize { source, format } => {
            let ch = match source.load()? {
                Input::Channel(ch) => ch,
                Input::Cryptosystem(sys) => induced_channel(&sys)?,
            };
            (render::cryptosystem(&synthesize(&ch)?, format.into()), true)
        }
        Command::GapDemo {
            n,
            delta,
            grid,
            ss_cap,
            format,
        } => {
            let delta = match delta {
                Some(d) => parse_rational(&d)?,
                None if n > 0 => itsec::rational::ratio(1, n as i64),
                None => return Err(Error::InvalidGapParams("n must be positive".into())),
            };
            let params = GapParams::new(n, delta)?;
            let report = gap_report(&params, grid, SsCaps::uniform(ss_cap))?;
            (render::gap_report(&report, format.into()), true)
        }
        Command::VerifyTheorems {
            count,
            min_size,
            max_size,
            seed,
            grid,
            ss_cap,
            format,
        } => {
            let config = VerifyConfig {
                count,
                min_size,
                max_size,
                seed,
                grid,
                ss_cap,
                ..VerifyConfig::default()
            };
            let summary = verify::run(&config)?;
            (
                render::verify_summary(&summary, format.into()),
                summary.all_passed(),
            )
        }
        Command::LemmaCheck { a, b, c, d, format } => {
            let j = BinaryJoint::new(
                parse_rational(&a)?,
                parse_rational(&b)?,
                parse_rational(&c)?,
                parse_rational(&d)?,
            )?;
            (render::lemma_record(&lemma1_check(&j), format.into()), true)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
