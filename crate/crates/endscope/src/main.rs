use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use endscope::{run, Command, Failure, Format, RunConfig, EXIT_USAGE};

/// Ends of graphs and groups, computed on finite windows.
#[derive(Parser)]
#[command(name = "endscope", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count unbounded components of the complements of growing balls.
    Ends(Flags),
    /// List the end threads of a given depth.
    Threads(Flags),
    /// Edge boundary of a set and whether it is bounded.
    Algebra(Flags),
    /// Translate a set or an end by a group element.
    Act(Flags),
    /// Check collapsing dynamics of a sequence of group elements.
    Probe(Flags),
    /// Collapse the components of a finite graph (reads --input).
    Collapse(Flags),
    /// Pull back two quotients of the end set (reads --input).
    Pullback(Flags),
    /// Write a window as DOT or JSON.
    Export(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
    Table,
}

#[derive(Args)]
struct Flags {
    /// Catalog name (line, grid2d, free-group:K, free-product:P,Q,
    /// regular-tree:D, dihedral), a JSON spec file, or an edge list.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    basepoint: Option<String>,
    #[arg(long)]
    rmax: Option<u32>,
    /// Window radius.
    #[arg(long)]
    horizon: Option<u32>,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Comma-separated group words.
    #[arg(long, allow_hyphen_values = true)]
    seq: Option<String>,
    /// Comma-separated vertex keys; commas inside `(x,y)` keys do not split.
    #[arg(long, allow_hyphen_values = true)]
    members: Option<String>,
    /// Select every vertex whose key starts with this string.
    #[arg(long, allow_hyphen_values = true)]
    prefix: Option<String>,
    /// Use the complement of the selected set.
    #[arg(long)]
    complement: bool,
    /// With `threads`: check the ultrafilter axioms for every thread.
    #[arg(long)]
    axioms: bool,
    /// Radii for the multi-horizon boundary test.
    #[arg(long, value_delimiter = ',')]
    radii: Vec<u32>,
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
    /// Thread id, or a vertex key the thread passes through.
    #[arg(long)]
    thread: Option<String>,
    /// Color `export` output by the components of Γ ∖ M_r.
    #[arg(long)]
    partition: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let (cmd, flags) = match cli.cmd {
        Cmd::Ends(f) => (Command::Ends, f),
        Cmd::Threads(f) => (Command::Threads, f),
        Cmd::Algebra(f) => (Command::Algebra, f),
        Cmd::Act(f) => (Command::Act, f),
        Cmd::Probe(f) => (Command::Probe, f),
        Cmd::Collapse(f) => (Command::Collapse, f),
        Cmd::Pullback(f) => (Command::Pullback, f),
        Cmd::Export(f) => (Command::Export, f),
    };
    match config(flags).and_then(|cfg| run(cmd, &cfg)) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(endscope::EXIT_BUDGET as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("endscope: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn config(f: Flags) -> Result<RunConfig, Failure> {
    let vertex_cap = match std::env::var("ENDSCOPE_BUDGET") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Failure::Config(format!("ENDSCOPE_BUDGET must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => None,
    };
    Ok(RunConfig {
        graph: f.graph,
        basepoint: f.basepoint,
        rmax: f.rmax,
        horizon: f.horizon,
        depth: f.depth,
        format: f.format.map(|f| match f {
            FormatArg::Json => Format::Json,
            FormatArg::Dot => Format::Dot,
            FormatArg::Table => Format::Table,
        }),
        seq: f.seq.as_deref().map(split_list).unwrap_or_default(),
        members: f.members.as_deref().map(split_list).unwrap_or_default(),
        prefix: f.prefix,
        complement: f.complement,
        axioms: f.axioms,
        radii: f.radii,
        word: f.word,
        thread: f.thread,
        partition: f.partition,
        out: f.out,
        input: f.input,
        vertex_cap,
    })
}

/// Splits on commas outside parentheses.
fn split_list(text: &str) -> Vec<String> {
    let mut items = vec![String::new()];
    let mut depth = 0usize;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                items.push(String::new());
                continue;
            }
            _ => {}
        }
        items.last_mut().unwrap().push(c);
    }
    items.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}
