use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quadorders::atlas::{self, OutputFormat, ScanConfig};
use quadorders::classify::{FieldData, OrderSpec};
use quadorders::{lfun, oracle, Error};

#[derive(Parser)]
#[command(
    name = "quadorders",
    version,
    about = "Classify orders Z + nO_K in quadratic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArg {
    /// Squarefree d defining Q(√d); negative values allowed
    #[arg(short = 'd', allow_negative_numbers = true)]
    d: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the index-n order of Q(√d)
    Classify {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short = 'n')]
        n: u64,
        /// Print the record as one JSON object
        #[arg(long)]
        json: bool,
    },
    /// Fundamental unit of Q(√d)
    Unit {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Evaluate L(n, d)
    Lfun {
        #[arg(short = 'n')]
        n: u64,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Class number of the maximal order of Q(√d)
    Classnum {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Compare the closed-form flags with the brute-force oracles
    Verify {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short = 'n')]
        n: u64,
    },
    /// Classify every order over a (d, n) grid
    Scan(ScanArgs),
    /// Count half-factorial orders in a scan output
    Report {
        path: PathBuf,
        /// Also print the per-d breakdown
        #[arg(long)]
        per_d: bool,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 2)]
    d_min: i64,
    #[arg(long, allow_negative_numbers = true)]
    d_max: i64,
    #[arg(long, default_value_t = 2)]
    n_min: u64,
    #[arg(long)]
    n_max: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Continue from the checkpoint next to the output file
    #[arg(long)]
    resume: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Run the brute-force oracles on every cell within their bound
    #[arg(long)]
    verify: bool,
}

fn exit_code(err: &Error) -> ExitCode {
    match err {
        Error::Zero(_)
        | Error::NotSquarefree(_)
        | Error::DegenerateField(_)
        | Error::NotPrime(_)
        | Error::EvenPrime(_)
        | Error::InvalidArgument(_)
        | Error::ModulusTooSmall(_)
        | Error::BoundExceeded { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn yes_no(b: bool) -> u8 {
    u8::from(b)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Classify { field, n, json } => {
            let spec = OrderSpec::new(field.d, n)?;
            let rec = FieldData::new(spec.d)?.classify(spec.n)?;
            if json {
                println!("{}", serde_json::to_string(&rec)?);
            } else {
                println!(
                    "order of index {} in Q(√{}), D = {}",
                    rec.n, rec.d, rec.disc
                );
                println!(
                    "m={} L={} ip={} la={} assoc={} hfd={}",
                    rec.m,
                    rec.l,
                    yes_no(rec.ideal_preserving),
                    yes_no(rec.locally_associated),
                    yes_no(rec.associated),
                    yes_no(rec.hfd)
                );
                println!("h_maximal={} h_order={}", rec.h_maximal, rec.h_order);
            }
        }
        Command::Unit { field } => {
            let data = FieldData::new(field.d)?;
            let unit = &data.unit;
            println!("{}, norm {}", unit.display(&data.field), unit.norm_sign);
        }
        Command::Lfun { n, field } => {
            println!("{}", lfun::l_value(n, field.d)?);
        }
        Command::Classnum { field } => {
            let data = FieldData::new(field.d)?;
            match data.class.h_plus {
                Some(hp) => println!("h={} h_plus={} D={}", data.class.h, hp, data.class.disc),
                None => println!("h={} D={}", data.class.h, data.class.disc),
            }
        }
        Command::Verify { field, n } => {
            let spec = OrderSpec::new(field.d, n)?;
            let report = oracle::verify_order(&FieldData::new(spec.d)?, spec.n)?;
            println!("{report}");
            if !report.agrees() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Scan(args) => {
            let cfg = ScanConfig {
                d_min: args.d_min,
                d_max: args.d_max,
                n_min: args.n_min,
                n_max: args.n_max,
                out: args.out,
                format: match args.format {
                    Format::Csv => OutputFormat::Csv,
                    Format::Jsonl => OutputFormat::Jsonl,
                },
                resume: args.resume,
                jobs: args.jobs,
                verify: args.verify,
            };
            let summary = atlas::scan(&cfg)?;
            println!(
                "records={} hfd={} elapsed={:.2}s",
                summary.records,
                summary.hfd,
                summary.elapsed.as_secs_f64()
            );
        }
        Command::Report { path, per_d } => {
            let report = atlas::report_hfd(&path)?;
            println!("rows={} hfd={}", report.rows, report.total);
            if per_d {
                for (d, count) in &report.per_d {
                    println!("{d}\t{count}");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
