use std::process::ExitCode;

use clap::{Parser, Subcommand};
use marked_groups::commands;
use marked_groups::Limits;

/// Marked groups: relation balls, distances, limits, classification.
#[derive(Parser)]
#[command(name = "mgs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relations of length at most R of a marked group.
    Ball {
        marked: String,
        #[arg(long)]
        radius: usize,
    },
    /// Agreement radius and distance between two marked groups.
    Dist {
        left: String,
        right: String,
        #[arg(long, default_value_t = 12)]
        rmax: usize,
    },
    /// Checks a family template such as `D{2k}:a,b` against a limit.
    Converge {
        #[arg(long)]
        family: String,
        #[arg(long)]
        limit: String,
        #[arg(long)]
        range: String,
        #[arg(long, default_value_t = 12)]
        rmax: usize,
    },
    /// Decides whether a group is a limit of cyclic or dihedral groups.
    LimitCheck { group: String },
    /// Finite quotient that kills none of the given elements.
    Residual {
        group: String,
        #[arg(long)]
        kill: String,
    },
    /// Evaluates a universal sentence in a finite group.
    Check {
        sentence: String,
        #[arg(long = "in")]
        group: String,
    },
    /// Markings of a group up to automorphism.
    Classify {
        target: String,
        #[arg(long)]
        arity: usize,
    },
    /// Cantor-Bendixson rank in a closure family.
    CbRank {
        group: String,
        #[arg(long)]
        family: String,
    },
    /// Closure of two-generated dihedral marked groups.
    ClosureMap {
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long)]
        range: String,
        #[arg(long)]
        dot: bool,
    },
    /// Recognizes a generalized dihedral group from its table.
    Recognize { table: String },
}

fn run(cmd: Command, limits: &Limits) -> marked_groups::Result<String> {
    match cmd {
        Command::Ball { marked, radius } => commands::ball(&marked, radius, limits),
        Command::Dist { left, right, rmax } => commands::dist(&left, &right, rmax, limits),
        Command::Converge { family, limit, range, rmax } => {
            commands::converge(&family, &limit, commands::parse_range(&range)?, rmax, limits)
        }
        Command::LimitCheck { group } => commands::limit_check(&group, limits),
        Command::Residual { group, kill } => commands::residual(&group, &kill, limits),
        Command::Check { sentence, group } => commands::check(&sentence, &group, limits),
        Command::Classify { target, arity } => commands::classify(&target, arity, limits),
        Command::CbRank { group, family } => commands::cb_rank_cmd(&group, &family, limits),
        Command::ClosureMap { arity, range, dot } => {
            commands::closure_map_cmd(arity, commands::parse_range(&range)?, dot, limits)
        }
        Command::Recognize { table } => commands::recognize(&table, limits),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, &Limits::from_env()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("mgs: {e}");
            ExitCode::FAILURE
        }
    }
}
