use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use morita::arith::MatrixRecord;
use morita::block::{delta_m0, eigen_m0, m_matrix, p_scalar_oracle, Block};
use morita::decomp::decomposition_matrix;
use morita::pipeline::{
    conjecture_suite, count_morita, golden_check, render_conjecture_table, render_report_table, representatives, to_json,
    Format, Method, RunConfig,
};
use morita::scopes::conjugation_pairing;
use morita::symchar::CharValueCache;
use morita::wreath::x_matrix;
use morita::{Error, Partition};

/// Morita equivalence classes of blocks of symmetric groups.
#[derive(Parser)]
#[command(name = "morita", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Directory for cached character columns.
    #[arg(long, env = "MORITA_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Memory cap in MiB for character-value caches.
    #[arg(long, global = true, default_value_t = 256)]
    mem_cap: usize,
    /// Largest core size searched for Scopes representatives (default p²w²).
    #[arg(long, global = true)]
    size_cap: Option<usize>,
    /// Build Scopes representatives from abacus runner gaps (no size cap).
    #[arg(long, global = true)]
    direct_enumeration: bool,
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Json)]
    format: Fmt,
    /// Compare the output byte for byte with a file in this directory.
    #[arg(long, global = true)]
    golden: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    #[value(name = "M")]
    M,
    #[value(name = "M0")]
    M0,
    #[value(name = "decomp")]
    Decomp,
}

#[derive(Subcommand)]
enum Cmd {
    /// Scopes class representatives with their conjugate partners.
    ScopesList { p: usize, w: usize },
    /// The matrix M of p-scalar products for one block.
    MMatrix {
        p: usize,
        w: usize,
        /// Core, e.g. "(8,4^2,1^4)" or "()".
        core: String,
        /// Also compare with p-scalar products summed over p-regular classes.
        #[arg(long)]
        oracle: bool,
    },
    /// Decomposition matrix of one block (weight ≤ 3, entries 0/1).
    Decomp { p: usize, w: usize, core: String },
    /// Bounds for the number of Morita classes of blocks of weight w.
    Count {
        p: usize,
        w: usize,
        #[arg(long, value_enum)]
        method: MethodArg,
    },
    /// Computed counts against the expected values for small p and w.
    Conjectures {
        #[arg(long, default_value_t = 3)]
        p_max: usize,
        #[arg(long, default_value_t = 4)]
        w_max: usize,
    },
    /// Integer eigenvalues of a scaled M⁰ for the principal 2-block of weight w.
    Eigencheck { w: usize },
}

struct Output {
    name: String,
    text: String,
    failed: Option<String>,
}

fn render<T: Serialize>(fmt: Fmt, value: &T, table: impl FnOnce() -> String) -> Result<String, Error> {
    match fmt {
        Fmt::Json => to_json(value),
        Fmt::Table => Ok(table()),
    }
}

fn matrix_table(rec: &MatrixRecord) -> String {
    let labels = rec.row_labels.clone().unwrap_or_else(|| (0..rec.rows).map(|i| i.to_string()).collect());
    let lw = labels.iter().map(|l| l.len()).max().unwrap_or(0);
    let cw = rec.entries.iter().flatten().map(|e| e.len()).max().unwrap_or(1);
    let mut out = String::new();
    for (l, row) in labels.iter().zip(&rec.entries) {
        out += &format!("{l:>lw$} ");
        out += &row.iter().map(|e| format!("{e:>cw$}")).collect::<Vec<_>>().join(" ");
        out += "\n";
    }
    out
}

#[derive(Serialize)]
struct ScopesRow {
    representative: String,
    partner: String,
    members_seen: usize,
}

#[derive(Serialize)]
struct ScopesListing {
    p: usize,
    w: usize,
    scopes_count: usize,
    upper_bound: usize,
    classes: Vec<ScopesRow>,
}

#[derive(Serialize)]
struct CharRow {
    lambda: String,
    quotient: String,
    sign: i8,
    height: u64,
}

#[derive(Serialize)]
struct MListing {
    block: String,
    gamma_size: usize,
    characters: Vec<CharRow>,
    m: MatrixRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
}

#[derive(Serialize)]
struct DecompListing {
    block: String,
    rows: Vec<String>,
    cols: Vec<String>,
    entries: Vec<String>,
    row_col_sum_key: String,
}

#[derive(Serialize)]
struct EigenListing {
    w: usize,
    scale_exp: u32,
    roots: Vec<String>,
    residual: Vec<String>,
}

const EIGEN_W8: [i64; 8] = [2048, 1024, 512, 384, 288, 240, 200, 175];

fn parse_block(p: usize, w: usize, core: &str) -> Result<Block, Error> {
    Block::new(p, w, core.parse::<Partition>()?)
}

fn run(cli: &Cli, config: &RunConfig) -> Result<Output, Error> {
    let fmt = cli.opts.format;
    let ext = match fmt {
        Fmt::Json => "json",
        Fmt::Table => "txt",
    };
    let mut failed = None;
    let (name, text) = match &cli.cmd {
        Cmd::ScopesList { p, w } => {
            let (p, w) = (*p, *w);
            let listing = config.install(|| {
                let mut reps = representatives(p, w, config)?;
                let pairing = conjugation_pairing(&mut reps, p, w)?;
                Ok(ScopesListing {
                    p,
                    w,
                    scopes_count: reps.len(),
                    upper_bound: pairing.upper_bound,
                    classes: reps
                        .iter()
                        .map(|c| ScopesRow {
                            representative: c.representative.to_string(),
                            partner: c.partner.as_ref().map(|x| x.to_string()).unwrap_or_default(),
                            members_seen: c.members_seen,
                        })
                        .collect(),
                })
            })?;
            let text = render(fmt, &listing, || {
                let mut s = format!("p={p} w={w} scopes={} upper={}\n", listing.scopes_count, listing.upper_bound);
                for c in &listing.classes {
                    s += &format!("{}  partner {}\n", c.representative, c.partner);
                }
                s
            })?;
            (format!("scopes-list_p{p}_w{w}"), text)
        }
        Cmd::MMatrix { p, w, core, oracle } => {
            let block = parse_block(*p, *w, core)?;
            let cache = config.cache();
            let inv = config.install(|| m_matrix(&block, cache.as_ref()))?;
            let oracle_agrees = if *oracle {
                let chars = CharValueCache::with_memory_cap(config.mem_cap);
                let o = p_scalar_oracle(&block, 24, &chars)?;
                let ok = o == inv.m.without_labels();
                if !ok {
                    failed = Some(format!("M differs from the p-scalar products for {block}"));
                }
                Some(ok)
            } else {
                None
            };
            let listing = MListing {
                block: block.to_string(),
                gamma_size: inv.gamma_size,
                characters: inv
                    .records
                    .iter()
                    .map(|r| CharRow {
                        lambda: r.lambda.to_string(),
                        quotient: r.quotient.to_string(),
                        sign: r.sign,
                        height: r.height,
                    })
                    .collect(),
                m: inv.m.to_record(),
                oracle_agrees,
            };
            let text = render(fmt, &listing, || format!("{block}  |Γ|={}\n{}", inv.gamma_size, matrix_table(&listing.m)))?;
            (format!("m-matrix_p{p}_w{w}_{}", block.core), text)
        }
        Cmd::Decomp { p, w, core } => {
            let block = parse_block(*p, *w, core)?;
            let cache = config.cache();
            let q = config.install(|| decomposition_matrix(&block, cache.as_ref()))?;
            let dots = q.render_dots();
            let listing = DecompListing {
                block: block.to_string(),
                rows: q.rows.iter().map(|l| l.to_string()).collect(),
                cols: q.cols.iter().map(|l| l.to_string()).collect(),
                entries: dots.lines().map(String::from).collect(),
                row_col_sum_key: q.row_col_sum_key(),
            };
            let text = render(fmt, &listing, || {
                let lw = listing.rows.iter().map(|l| l.len()).max().unwrap_or(0);
                let mut s = format!("{block}\n");
                for (l, r) in listing.rows.iter().zip(&listing.entries) {
                    s += &format!("{l:>lw$} {r}\n");
                }
                s + &listing.row_col_sum_key + "\n"
            })?;
            (format!("decomp_p{p}_w{w}_{}", block.core), text)
        }
        Cmd::Count { p, w, method } => {
            let method = match method {
                MethodArg::M => Method::M,
                MethodArg::M0 => Method::M0,
                MethodArg::Decomp => Method::Decomp,
            };
            let counted = count_morita(*p, *w, method, config)?;
            eprintln!("diagnostics: {}", serde_json::to_string(&counted.diagnostics)?);
            let r = &counted.report;
            let text = render(fmt, r, || render_report_table(r))?;
            (format!("count_p{p}_w{w}_{method}"), text)
        }
        Cmd::Conjectures { p_max, w_max } => {
            let table = conjecture_suite(*p_max, *w_max, config)?;
            if !table.all_pass() {
                failed = Some("some computed counts disagree with the expected values".into());
            }
            let text = render(fmt, &table, || render_conjecture_table(&table))?;
            (format!("conjectures_p{p_max}_w{w_max}"), text)
        }
        Cmd::Eigencheck { w } => {
            let block = Block::new(2, *w, Partition::empty())?;
            let cache = config.cache();
            let report = config.install(|| {
                let x = x_matrix(2, *w, cache.as_ref())?;
                eigen_m0(&delta_m0(&block, &x)?.m0)
            })?;
            if *w == 8 {
                let want: Vec<String> = EIGEN_W8.iter().map(|r| r.to_string()).collect();
                if report.scale_exp != 12 || report.roots != want || report.residual != ["1"] {
                    failed = Some("weight 8 eigenvalues differ from 2^11,2^10,2^9,2^7·3,2^5·3^2,2^4·3·5,2^3·5^2,5^2·7".into());
                }
            }
            let listing =
                EigenListing { w: *w, scale_exp: report.scale_exp, roots: report.roots, residual: report.residual };
            let text = render(fmt, &listing, || {
                format!(
                    "w={w} scale 2^{}\nroots    {}\nresidual {}\n",
                    listing.scale_exp,
                    listing.roots.join(" "),
                    listing.residual.join(" ")
                )
            })?;
            (format!("eigencheck_w{w}"), text)
        }
    };
    Ok(Output { name: format!("{name}.{ext}"), text, failed })
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
    let mut config = RunConfig {
        cache_dir: cli.opts.cache_dir.clone(),
        mem_cap: cli.opts.mem_cap,
        size_cap: cli.opts.size_cap,
        direct_enumeration: cli.opts.direct_enumeration,
        format: match cli.opts.format {
            Fmt::Json => Format::Json,
            Fmt::Table => Format::Table,
        },
        ..RunConfig::default()
    };
    if let Some(j) = cli.opts.jobs {
        config.jobs = j;
    }
    if let Err(e) = config.validate() {
        eprintln!("morita: {e}");
        return ExitCode::from(1);
    }
    let out = match run(&cli, &config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("morita: {e}");
            return ExitCode::from(if e.is_internal() { 2 } else { 1 });
        }
    };
    let mut code = 0;
    if let Err(e) = std::io::stdout().lock().write_all(out.text.as_bytes()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("morita: {e}");
            code = 1;
        }
    }
    if let Some(msg) = out.failed {
        eprintln!("morita: {msg}");
        code = 2;
    }
    if let Some(dir) = &cli.opts.golden {
        match golden_check(dir, &out.name, &out.text) {
            Ok(()) => eprintln!("golden {}: match", out.name),
            Err(Error::Io(e)) => {
                eprintln!("morita: cannot read golden {}: {e}", dir.join(&out.name).display());
                code = code.max(1);
            }
            Err(e) => {
                eprintln!("morita: {e}");
                code = 2;
            }
        }
    }
    ExitCode::from(code)
}
