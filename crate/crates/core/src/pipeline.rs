//! Counting Morita classes of blocks of a given weight, the conjecture
//! tables, and report files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::rational::binomial;
use crate::arith::RationalMatrix;
use crate::block::{delta_m0, is_prime, m_matrix_with, Block, OsimaProjection};
use crate::decomp::{check_regime, decomposition_matrix_with};
use crate::equiv::{classify, invariant_key, Mode};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scopes::{
    conjugation_pairing, enumerate_representatives, enumerate_representatives_direct, scopes_count, ScopesClass,
};
use crate::wreath::{x_matrix, XCache, XSource};

pub const REPORT_FORMAT_VERSION: u32 = 1;

pub const EXCEPTION_2_3: &str =
    "(p,w)=(2,3): the blocks with cores (1) and (2,1) are Morita equivalent at least over F_2; value taken as 2";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    M,
    M0,
    #[serde(rename = "decomp")]
    Decomp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::M => "M",
            Method::M0 => "M0",
            Method::Decomp => "decomp",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(Method::M),
            "M0" | "m0" => Ok(Method::M0),
            "decomp" => Ok(Method::Decomp),
            _ => Err(Error::Usage(format!("unknown method {s:?}, expected M, M0 or decomp"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Table,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            _ => Err(Error::Usage(format!("unknown format {s:?}, expected json or table"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub cache_dir: Option<PathBuf>,
    pub jobs: usize,
    /// Megabytes for character-value caches.
    pub mem_cap: usize,
    pub size_cap: Option<usize>,
    /// Build representatives from runner gaps instead of searching by size.
    pub direct_enumeration: bool,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cache_dir: None,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            mem_cap: 256,
            size_cap: None,
            direct_enumeration: false,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.jobs == 0 {
            return Err(Error::Usage("--jobs must be at least 1".into()));
        }
        if self.mem_cap == 0 || self.size_cap == Some(0) {
            return Err(Error::Usage("caps must be positive".into()));
        }
        Ok(())
    }

    pub fn cache(&self) -> Option<XCache> {
        self.cache_dir.as_ref().map(XCache::new)
    }

    /// Runs `f` on a pool with `jobs` workers.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        self.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {} workers: {e}", self.jobs)))?;
        pool.install(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportClass {
    /// Representative cores of every Scopes class in this Morita class,
    /// conjugate partners included.
    pub cores: Vec<String>,
    pub invariant_key: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub format_version: u32,
    pub p: usize,
    pub w: usize,
    pub method: Method,
    pub scopes_count: usize,
    pub upper_bound: usize,
    pub lower_bound: usize,
    /// Classes separated by the invariant, before any exception is applied.
    pub distinct_invariants: usize,
    pub determined: bool,
    /// Only present when the count is pinned down.
    pub value: Option<usize>,
    pub classes: Vec<ReportClass>,
    pub notes: Vec<String>,
}

/// Run-dependent data kept out of the report so that reports are byte-stable.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub timings_ms: BTreeMap<String, u128>,
    pub x_source: Option<XSource>,
    pub representatives: usize,
    pub jobs: usize,
}

#[derive(Clone, Debug)]
pub struct Counted {
    pub report: EquivalenceReport,
    pub diagnostics: Diagnostics,
}

fn check_method(p: usize, w: usize, method: Method) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    if w == 0 {
        return Err(Error::Usage("weight must be positive".into()));
    }
    match method {
        Method::M0 if p != 2 => Err(Error::Usage("method M0 needs p = 2".into())),
        Method::Decomp => check_regime(p, w).map_err(|e| Error::Usage(e.to_string())),
        _ => Ok(()),
    }
}

pub fn representatives(p: usize, w: usize, config: &RunConfig) -> Result<Vec<ScopesClass>> {
    if config.direct_enumeration {
        enumerate_representatives_direct(p, w)
    } else {
        enumerate_representatives(p, w, config.size_cap)
    }
}

fn elapsed(t: Instant) -> u128 {
    t.elapsed().as_millis()
}

/// Scopes representatives, conjugation pairing, one invariant per pair, and
/// a classification of the invariants.
pub fn count_morita(p: usize, w: usize, method: Method, config: &RunConfig) -> Result<Counted> {
    check_method(p, w, method)?;
    config.install(|| count_inner(p, w, method, config))
}

fn count_inner(p: usize, w: usize, method: Method, config: &RunConfig) -> Result<Counted> {
    let mut diag = Diagnostics { jobs: config.jobs, ..Default::default() };
    let t = Instant::now();
    let mut reps = representatives(p, w, config)?;
    let pairing = conjugation_pairing(&mut reps, p, w)?;
    diag.timings_ms.insert("scopes".into(), elapsed(t));
    diag.representatives = reps.len();
    let expected = scopes_count(p, w);
    if reps.len() != expected {
        return Err(Error::Consistency(format!("{} representatives, expected {expected}", reps.len())));
    }

    let t = Instant::now();
    let cache = config.cache();
    let blocks: Vec<Block> = pairing
        .groups
        .iter()
        .map(|&(i, _)| Block::new(p, w, reps[i].representative.clone()))
        .collect::<Result<_>>()?;
    let with_block = |b: &Block, e: Error| match e {
        Error::Consistency(s) => Error::Consistency(format!("{b}: {s}")),
        e => e,
    };
    let (mode, matrices): (Mode, Vec<RationalMatrix>) = match method {
        Method::M | Method::Decomp => {
            let proj = OsimaProjection::new(p, w, cache.as_ref())?;
            diag.x_source = Some(proj.x.source);
            diag.timings_ms.insert("characters".into(), elapsed(t));
            let mats = blocks
                .par_iter()
                .map(|b| {
                    let m = if method == Method::M {
                        m_matrix_with(b, &proj).map(|inv| inv.m.without_labels())
                    } else {
                        decomposition_matrix_with(b, &proj).map(|q| q.to_rational().without_labels())
                    };
                    m.map_err(|e| with_block(b, e))
                })
                .collect::<Result<_>>()?;
            (if method == Method::M { Mode::Similarity } else { Mode::Rectangular }, mats)
        }
        Method::M0 => {
            let x = x_matrix(p, w, cache.as_ref())?;
            diag.x_source = Some(x.source);
            diag.timings_ms.insert("characters".into(), elapsed(t));
            let mats = blocks
                .par_iter()
                .map(|b| delta_m0(b, &x).map(|d| d.m0.without_labels()).map_err(|e| with_block(b, e)))
                .collect::<Result<_>>()?;
            (Mode::Similarity, mats)
        }
    };
    diag.timings_ms.insert("invariants".into(), elapsed(t));

    let t = Instant::now();
    let items: Vec<(String, RationalMatrix)> =
        matrices.into_iter().enumerate().map(|(i, m)| (format!("{i:08}"), m)).collect();
    let mut parts = classify(&items, mode)?;
    diag.timings_ms.insert("classify".into(), elapsed(t));

    let distinct = parts.len();
    let mut notes = Vec::new();
    if (p, w) == (2, 3) {
        // merge the classes of (1) and (2,1) if the invariant separated them
        let find = |parts: &[Vec<usize>], core: &str| {
            parts.iter().position(|c| c.iter().any(|&g| blocks[g].core.to_string() == core))
        };
        if let (Some(a), Some(b)) = (find(&parts, "(1)"), find(&parts, "(2,1)")) {
            if a != b {
                let moved = parts.remove(a.max(b));
                parts[a.min(b)].extend(moved);
            }
        }
        notes.push(EXCEPTION_2_3.to_string());
    }

    let classes: Vec<ReportClass> = parts
        .iter()
        .map(|members| {
            let mut cores: Vec<Partition> = members
                .iter()
                .flat_map(|&g| {
                    let (i, j) = pairing.groups[g];
                    if i == j {
                        vec![reps[i].representative.clone()]
                    } else {
                        vec![reps[i].representative.clone(), reps[j].representative.clone()]
                    }
                })
                .collect();
            cores.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
            Ok(ReportClass {
                cores: cores.iter().map(|c| c.to_string()).collect(),
                invariant_key: invariant_key(&items[members[0]].1, mode)?.0,
            })
        })
        .collect::<Result<_>>()?;
    let covered: usize = classes.iter().map(|c| c.cores.len()).sum();
    if covered != reps.len() {
        return Err(Error::Consistency(format!("classes cover {covered} of {} representatives", reps.len())));
    }

    let lower = classes.len();
    let upper = pairing.upper_bound;
    if lower > upper {
        return Err(Error::Consistency(format!("lower bound {lower} exceeds upper bound {upper}")));
    }
    let exception = (p, w) == (2, 3);
    let determined = lower == upper || exception;
    if !determined {
        notes.push(format!("interval {lower} <= M({p},{w}) <= {upper}; the invariant does not decide the count"));
    }
    let report = EquivalenceReport {
        format_version: REPORT_FORMAT_VERSION,
        p,
        w,
        method,
        scopes_count: expected,
        upper_bound: upper,
        lower_bound: lower,
        distinct_invariants: distinct,
        determined,
        value: determined.then_some(lower),
        classes,
        notes,
    };
    Ok(Counted { report, diagnostics: diag })
}

/// `(1/2p)·C(wp, p−1) + (1/2)·C(⌊wp/2⌋, ⌊p/2⌋)`.
pub fn upper_bound_formula(p: usize, w: usize) -> usize {
    crate::scopes::pairing_count(p, w)
}

/// Conjectured or known `M(p, w)`; `None` where only the upper bound is available.
pub fn expected_value(p: usize, w: usize) -> Option<usize> {
    match (p, w) {
        (_, 0) | (_, 1) => Some(1),
        (2, 3) => Some(2),
        (2, w) => Some(w),
        (3, w) => Some((3 * w * w + 2 * w) / 4),
        (p, 2) => {
            let twice_p = binomial(2 * p, p - 1) + BigInt::from(p) * binomial(p, p / 2);
            Some(usize::try_from(twice_p / BigInt::from(2 * p)).expect("fits"))
        }
        (5, 3) => Some(147),
        (7, 3) => Some(3936),
        _ => None,
    }
}

pub fn default_method(p: usize, w: usize) -> Method {
    match p {
        2 => Method::M0,
        3 => Method::M,
        _ if check_regime(p, w).is_ok() => Method::Decomp,
        _ => Method::M,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureCell {
    pub p: usize,
    pub w: usize,
    pub method: Method,
    pub expected: Option<usize>,
    pub upper_formula: usize,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureTable {
    pub format_version: u32,
    pub cells: Vec<ConjectureCell>,
}

impl ConjectureTable {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }
}

/// Every prime `p ≤ p_max` and `1 ≤ w ≤ w_max`, computed bounds against the
/// expected values. Without an expected value a cell passes when the
/// computed upper bound equals the formula.
pub fn conjecture_suite(p_max: usize, w_max: usize, config: &RunConfig) -> Result<ConjectureTable> {
    let mut cells = Vec::new();
    for p in (2..=p_max).filter(|&p| is_prime(p)) {
        for w in 1..=w_max {
            let method = default_method(p, w);
            let r = count_morita(p, w, method, config)?.report;
            let expected = expected_value(p, w);
            let upper_formula = upper_bound_formula(p, w);
            let pass = r.upper_bound == upper_formula
                && match expected {
                    Some(e) => r.value == Some(e),
                    None => r.lower_bound <= r.upper_bound,
                };
            cells.push(ConjectureCell {
                p,
                w,
                method,
                expected,
                upper_formula,
                lower_bound: r.lower_bound,
                upper_bound: r.upper_bound,
                pass,
            });
        }
    }
    Ok(ConjectureTable { format_version: REPORT_FORMAT_VERSION, cells })
}

pub fn render_conjecture_table(t: &ConjectureTable) -> String {
    let mut out = format!("{:>3} {:>3} {:>7} {:>9} {:>7} {:>7} {:>7}  status\n", "p", "w", "method", "expected", "lower", "upper", "bound");
    for c in &t.cells {
        let e = c.expected.map_or("-".to_string(), |e| e.to_string());
        out += &format!(
            "{:>3} {:>3} {:>7} {:>9} {:>7} {:>7} {:>7}  {}\n",
            c.p,
            c.w,
            c.method.to_string(),
            e,
            c.lower_bound,
            c.upper_bound,
            c.upper_formula,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    out
}

pub fn render_report_table(r: &EquivalenceReport) -> String {
    let mut out = format!(
        "p={} w={} method={}\nscopes classes   {}\nupper bound      {}\nlower bound      {}\n",
        r.p, r.w, r.method, r.scopes_count, r.upper_bound, r.lower_bound
    );
    match r.value {
        Some(v) => out += &format!("M({},{})          {v}\n", r.p, r.w),
        None => out += &format!("M({},{})          {}..{}\n", r.p, r.w, r.lower_bound, r.upper_bound),
    }
    for (i, c) in r.classes.iter().enumerate() {
        out += &format!("class {i:>4}: {}\n", c.cores.join(" "));
    }
    for n in &r.notes {
        out += &format!("note: {n}\n");
    }
    out
}

/// Pretty JSON with a trailing newline; field order is fixed by the types.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn report_file_name(r: &EquivalenceReport) -> String {
    format!("count_p{}_w{}_{}.json", r.p, r.w, r.method)
}

/// Writes `<dir>/count_p…json` and a `.txt` summary next to it.
pub fn write_report(r: &EquivalenceReport, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(report_file_name(r));
    std::fs::write(&path, to_json(r)?)?;
    std::fs::write(path.with_extension("txt"), render_report_table(r))?;
    Ok(path)
}

pub fn read_report(path: &Path) -> Result<EquivalenceReport> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let version = value.get("format_version").and_then(|v| v.as_u64());
    if version != Some(REPORT_FORMAT_VERSION as u64) {
        return Err(Error::CacheInvalid {
            path: path.display().to_string(),
            reason: format!("report format {version:?}, expected {REPORT_FORMAT_VERSION}"),
        });
    }
    Ok(serde_json::from_value(value)?)
}

/// Byte-exact comparison of `rendered` with `<dir>/<name>`.
pub fn golden_check(dir: &Path, name: &str, rendered: &str) -> Result<()> {
    let path = dir.join(name);
    let golden = std::fs::read(&path)?;
    if golden != rendered.as_bytes() {
        return Err(Error::Consistency(format!("output differs from golden file {}", path.display())));
    }
    Ok(())
}
