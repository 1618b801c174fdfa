use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vanlat_cli::commands::{self, Outcome, What, EXIT_OK, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "vanlat",
    version,
    about = "Exact computations on thimble lattices and gradient indices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check lattices, conjugation data and consistency of every level
    Validate { path: PathBuf },
    /// Print exact values for an instance
    Compute {
        path: PathBuf,
        /// var-inverse, monodromy, signature, index, theorem2 or theorem3
        #[arg(long)]
        what: What,
        /// Restrict to one level i
        #[arg(long)]
        level: Option<usize>,
    },
    /// Apply a braid word (tokens a<j>, A<j>, f<j>) to the thimbles of one level
    Braid {
        path: PathBuf,
        word: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Write the new instance here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the invariant suite on generated instances
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        rank_bound: usize,
    },
    /// Print a generated consistent instance
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value_t = 4)]
        rank_bound: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check that instances for different sign choices give the same index
    Corollary {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome {
        stdout: String::new(),
        stderr: format!("error: cannot read {}: {e}\n", path.display()),
        code: EXIT_USAGE,
    })
}

fn write(path: &PathBuf, text: &str) -> Result<(), Outcome> {
    std::fs::write(path, text).map_err(|e| Outcome {
        stdout: String::new(),
        stderr: format!("error: cannot write {}: {e}\n", path.display()),
        code: EXIT_USAGE,
    })
}

fn run(cli: Cli) -> Result<Outcome, Outcome> {
    Ok(match cli.command {
        Command::Validate { path } => commands::validate(&read(&path)?),
        Command::Compute { path, what, level } => commands::compute(&read(&path)?, what, level),
        Command::Braid {
            path,
            word,
            level,
            output,
        } => {
            let r = commands::braid(&read(&path)?, &word, level, &path.display().to_string())?;
            let report = format!(
                "basis change (columns are the new thimbles in the old basis):\n{}\n",
                r.change
            );
            match output {
                Some(out) => {
                    write(&out, &r.text)?;
                    Outcome {
                        stdout: report,
                        stderr: String::new(),
                        code: EXIT_OK,
                    }
                }
                None => Outcome {
                    stdout: r.text,
                    stderr: report,
                    code: EXIT_OK,
                },
            }
        }
        Command::Verify {
            seed,
            count,
            rank_bound,
        } => commands::verify(seed, count, rank_bound),
        Command::Gen {
            seed,
            n,
            p,
            rank_bound,
            output,
        } => {
            let o = commands::gen(seed, n, p, rank_bound);
            match output {
                Some(path) if o.code == EXIT_OK => {
                    write(&path, &o.stdout)?;
                    Outcome::default()
                }
                _ => o,
            }
        }
        Command::Corollary { paths } => {
            let texts = paths.iter().map(read).collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
            commands::corollary(&refs)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let o = run(cli).unwrap_or_else(|o| o);
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    ExitCode::from(o.code as u8)
}
