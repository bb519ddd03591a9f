use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nucleolus::harness::compare::replay_directory;
use nucleolus::harness::format::{emit_payoff, read_game, read_payoff, read_to_string, write_string};
use nucleolus::harness::{bench_span_vs_lp, compare_methods, CompareConfig, Dist, PointRule};
use nucleolus::{kohlberg, modified, nguyen, oracle, Error, Result, SingletonRule, Verdict};

#[derive(Parser)]
#[command(name = "nucleolus", version, about = "Exact nucleolus computation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Solution {
    Prenucleolus,
    Nucleolus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Kohlberg,
    Modified,
    Nguyen,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the (pre-)nucleolus and print it as a payoff document.
    Compute {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum, default_value = "prenucleolus")]
        solution: Solution,
        /// Also print the solver rounds as JSON.
        #[arg(long)]
        trace: bool,
    },
    /// Check a candidate point. Exit 0 if it is the solution, 1 if not, 2 on error.
    Verify {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        point: PathBuf,
        #[arg(long, value_enum, default_value = "kohlberg")]
        method: Method,
        #[arg(long, value_enum, default_value = "prenucleolus")]
        solution: Solution,
        #[arg(long, default_value = "tight")]
        singleton_rule: SingletonRule,
    },
    /// Run the method comparison sweep on random games.
    Compare {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "uniform_int(-10,10)")]
        dist: Dist,
        #[arg(long, default_value = "oracle")]
        point_rule: PointRule,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay every counterexample file written by `compare`.
    Replay {
        #[arg(long)]
        dir: PathBuf,
    },
    /// Time span checks against balancedness LPs on a directory of games.
    Bench {
        #[arg(long)]
        games: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Compute { game, solution, trace } => {
            let g = read_game(&game)?;
            let (x, rounds) = match solution {
                Solution::Prenucleolus => oracle::prenucleolus(&g)?,
                Solution::Nucleolus => oracle::nucleolus(&g)?,
            };
            print!("{}", emit_payoff(&x));
            if trace {
                println!("{}", serde_json::to_string_pretty(&rounds)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            game,
            point,
            method,
            solution,
            singleton_rule,
        } => {
            let g = read_game(&game)?;
            let x = read_payoff(&point)?;
            let (verdict, json) = match (method, solution) {
                (Method::Kohlberg, Solution::Prenucleolus) => {
                    let t = kohlberg::verify_prenucleolus(&g, &x)?;
                    (t.verdict, serde_json::to_string_pretty(&t)?)
                }
                (Method::Kohlberg, Solution::Nucleolus) => {
                    let t = kohlberg::verify_nucleolus(&g, &x, singleton_rule)?;
                    (t.verdict, serde_json::to_string_pretty(&t)?)
                }
                (Method::Modified, Solution::Prenucleolus) => {
                    let t = modified::verify_prenucleolus_modified(&g, &x)?;
                    (t.verdict, serde_json::to_string_pretty(&t)?)
                }
                (Method::Nguyen, Solution::Nucleolus) => {
                    let t = nguyen::verify_nucleolus_nguyen(&g, &x)?;
                    (t.verdict, serde_json::to_string_pretty(&t)?)
                }
                (Method::Modified, Solution::Nucleolus) => {
                    return Err(Error::Config("the modified verifier only checks the pre-nucleolus".into()))
                }
                (Method::Nguyen, Solution::Prenucleolus) => {
                    return Err(Error::Config("the nguyen verifier only checks the nucleolus".into()))
                }
            };
            println!("{json}");
            Ok(match verdict {
                Verdict::IsSolution => ExitCode::SUCCESS,
                Verdict::NotSolution => ExitCode::from(1),
            })
        }
        Command::Compare {
            n,
            count,
            seed,
            dist,
            point_rule,
            out,
        } => {
            let config = CompareConfig {
                n,
                count,
                seed,
                dist,
                point_rule,
            };
            let report = compare_methods(&config, Some(&out))?;
            println!("{}", serde_json::to_string_pretty(&report.summary)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { dir } => {
            let outcomes = replay_directory(&dir)?;
            let mut all_identical = true;
            for o in &outcomes {
                all_identical &= o.identical;
                println!("{} {} {}", if o.identical { "identical" } else { "CHANGED" }, o.kind, o.path.display());
            }
            Ok(if all_identical { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Bench { games, out } => {
            let (gs, xs) = load_bench_inputs(&games)?;
            let table = bench_span_vs_lp(&gs, &xs)?;
            write_string(&out, &serde_json::to_string_pretty(&table)?)?;
            println!("{}", serde_json::to_string_pretty(&table.totals)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Every `*.game` file in `dir`, paired with the `.payoff` file of the same
/// stem or, failing that, the oracle pre-nucleolus.
fn load_bench_inputs(dir: &Path) -> Result<(Vec<nucleolus::TuGame>, Vec<nucleolus::Payoff>)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "game"))
        .collect();
    paths.sort();
    let mut games = Vec::new();
    let mut points = Vec::new();
    for p in paths {
        let g = read_game(&p)?;
        let payoff = p.with_extension("payoff");
        let x = if payoff.exists() {
            nucleolus::harness::parse_payoff(&read_to_string(&payoff)?)?
        } else {
            oracle::prenucleolus(&g)?.0
        };
        games.push(g);
        points.push(x);
    }
    Ok((games, points))
}
