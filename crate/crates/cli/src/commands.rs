use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use strongdim::arquiver::{
    build_ar_quiver, check_theorem_3_21, derived_window, gamma_bar, point_window, ARQuiver,
};
use strongdim::complexcat::complex_from_picks;
use strongdim::enumerate::{brute_force_indecomposables, enumerate_indecomposables, EnumConfig, BRUTE_FORCE_LIMIT};
use strongdim::sgldim::{boundary_violators, compute_sgldim, sgldim_fast, SgldimReport, DEFAULT_MAX_N};
use strongdim::{Complex, Error, Field, FieldTag, FiniteField, Gf2, Gf3, MonomialAlgebra, Rational};
use thiserror::Error as ThisError;

use crate::algfile::{AlgebraFile, ParseError};
use crate::export::{
    class_label, complex_lines, derived_dot, derived_record, quiver_dot, quiver_record, AlgebraEcho, RunReport,
    SCHEMA_VERSION,
};

#[derive(Parser, Debug)]
#[command(name = "strongdim", version, about = "Strong global dimension and AR quivers of monomial algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleField {
    Gf2,
    Gf3,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute s.gl.dim by growing the window until no class spans it.
    Sgldim {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        /// Stop when the maximal length is stable for two windows.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Accepted for golden runs; every computation is deterministic.
        #[arg(long)]
        seedless: bool,
    },
    /// Build the AR quiver of C_n(projΛ).
    ArQuiver {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        seedless: bool,
    },
    /// Emit translates of the reduced component for t in [t-min, t-max].
    DerivedQuiver {
        file: PathBuf,
        #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
        t_min: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        t_max: i64,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        seedless: bool,
    },
    /// Run the invariant battery and print a pass/fail table.
    Check {
        file: PathBuf,
        /// Window of the large quiver; defaults to eta + 2.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long, value_enum)]
        oracle: Option<OracleField>,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long)]
        seedless: bool,
    },
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    /// 0 success, 1 usage or parse, 2 resource or cap, 3 invariant failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io(_) => 1,
            CliError::Invariant(_) => 3,
            CliError::Core(e) => match e {
                Error::MalformedQuiver(_)
                | Error::MalformedRelation(_)
                | Error::Precondition(_)
                | Error::PositionOutOfRange { .. } => 1,
                Error::InfiniteDimensional { .. }
                | Error::ResolutionCapExceeded { .. }
                | Error::CapExceeded(_)
                | Error::SearchSpaceTooLarge(_)
                | Error::NotClosed(_)
                | Error::NoAnchorFound(_)
                | Error::EtaZero => 2,
                _ => 3,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn load(path: &Path) -> CliResult<(AlgebraFile, MonomialAlgebra)> {
    let text = std::fs::read_to_string(path)?;
    let file = AlgebraFile::parse(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    let alg = file.build()?;
    Ok((file, alg))
}

fn write_json(path: &Option<PathBuf>, report: &RunReport) -> CliResult<()> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(report).expect("reports serialize");
        std::fs::write(p, text + "\n")?;
    }
    Ok(())
}

fn write_text(path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    if let Some(p) = path {
        std::fs::write(p, text)?;
    }
    Ok(())
}

macro_rules! dispatch {
    ($tag:expr, $func:ident ( $($arg:expr),* )) => {
        match $tag {
            FieldTag::Rational => $func::<Rational>($($arg),*),
            FieldTag::Prime(2) => $func::<Gf2>($($arg),*),
            FieldTag::Prime(3) => $func::<Gf3>($($arg),*),
            FieldTag::Prime(p) => Err(CliError::Usage(format!("unsupported field gf{p}"))),
        }
    };
}

/// Runs a parsed command, appending human-readable output to `out`.
pub fn execute(cli: &Cli, out: &mut String) -> CliResult<()> {
    match &cli.command {
        Command::Sgldim {
            file,
            max_n,
            fast,
            json,
            ..
        } => {
            let (f, alg) = load(file)?;
            dispatch!(f.field, cmd_sgldim(&f, &alg, *max_n, *fast, json, out))
        }
        Command::ArQuiver { file, n, dot, json, .. } => {
            if *n < 1 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let (f, alg) = load(file)?;
            dispatch!(f.field, cmd_ar_quiver(&f, &alg, *n, dot, json, out))
        }
        Command::DerivedQuiver {
            file,
            t_min,
            t_max,
            max_n,
            dot,
            json,
            ..
        } => {
            if t_min > t_max {
                return Err(CliError::Usage(format!("--t-min {t_min} exceeds --t-max {t_max}")));
            }
            let (f, alg) = load(file)?;
            dispatch!(f.field, cmd_derived_quiver(&f, &alg, *t_min, *t_max, *max_n, dot, json, out))
        }
        Command::Check {
            file,
            n,
            max_n,
            oracle,
            bound,
            ..
        } => {
            let (f, alg) = load(file)?;
            dispatch!(f.field, cmd_check(&f, &alg, *n, *max_n, *oracle, *bound, out))
        }
    }
}

fn sgldim_payload<F: Field>(alg: &MonomialAlgebra, r: &SgldimReport<F>) -> serde_json::Value {
    json!({
        "m0": r.m0,
        "sgldim": r.sgldim,
        "witness": r.witness.describe_support(alg),
        "witnessDifferentials": complex_lines(alg, &r.witness),
        "perWindow": r.per_window.iter().map(|w| json!({
            "n": w.n,
            "classes": w.classes,
            "violators": w.violators,
            "maxLength": w.max_length,
            "closed": w.closed,
        })).collect::<Vec<_>>(),
        "terminated": r.terminated,
        "capNote": r.cap_note,
    })
}

pub fn cmd_sgldim<F: Field>(
    file: &AlgebraFile,
    alg: &MonomialAlgebra,
    max_n: usize,
    fast: bool,
    json_path: &Option<PathBuf>,
    out: &mut String,
) -> CliResult<()> {
    let start = Instant::now();
    let report = if fast {
        sgldim_fast::<F>(alg, max_n)?
    } else {
        compute_sgldim::<F>(alg, max_n)?
    };
    let _ = writeln!(out, "field: {}  mode: {}", file.field, if fast { "fast" } else { "m0 loop" });
    let _ = writeln!(out, "{:>4} {:>8} {:>10} {:>11}", "n", "classes", "violators", "max length");
    for w in &report.per_window {
        let _ = writeln!(out, "{:>4} {:>8} {:>10} {:>11}", w.n, w.classes, w.violators, w.max_length);
    }
    match alg.global_dimension::<F>() {
        Ok(g) => {
            let _ = writeln!(out, "gl.dim = {g}");
        }
        Err(e) => {
            let _ = writeln!(out, "gl.dim = unknown ({e})");
        }
    }
    let _ = writeln!(out, "s.gl.dim = {}; m0 = {}", report.sgldim, report.m0);
    let _ = writeln!(out, "witness: {}", report.witness.describe_support(alg));
    for line in complex_lines(alg, &report.witness) {
        let _ = writeln!(out, "  {line}");
    }
    let _ = writeln!(out, "certified: every window closed");
    write_json(
        json_path,
        &RunReport {
            schema_version: SCHEMA_VERSION,
            command: "sgldim".into(),
            config: json!({ "maxN": max_n, "fast": fast }),
            algebra: AlgebraEcho::from(file),
            payload: sgldim_payload(alg, &report),
            certified: report.per_window.iter().all(|w| w.closed),
            timing_ms: start.elapsed().as_millis(),
        },
    )
}

fn quiver_summary<F: Field>(alg: &MonomialAlgebra, q: &ARQuiver<F>, out: &mut String) {
    let arrows: usize = q.arrows.values().sum();
    let _ = writeln!(
        out,
        "window {}: {} classes, {} arrows, {} conflations",
        q.window(),
        q.len(),
        arrows,
        q.conflations.len()
    );
    for k in 0..q.len() {
        let fl = q.flags[k];
        let tag = match (fl.projective, fl.injective) {
            (true, true) => " [proj-inj]",
            (true, false) => " [proj]",
            (false, true) => " [inj]",
            (false, false) => "",
        };
        let _ = writeln!(out, "  {k}: {}{tag}", class_label(alg, q.class(k)));
    }
    for (&(s, t), &m) in &q.arrows {
        let _ = writeln!(out, "  arrow {s} -> {t} x{m}");
    }
    for c in &q.conflations {
        let middle: Vec<String> = c
            .middle
            .iter()
            .map(|(k, m)| if *m == 1 { k.to_string() } else { format!("{k}^{m}") })
            .collect();
        let _ = writeln!(
            out,
            "  conflation {} -> [{}] -> {}{}",
            c.x_class,
            middle.join(" + "),
            c.z_class,
            if c.certified { " certified" } else { "" }
        );
    }
}

pub fn cmd_ar_quiver<F: Field>(
    file: &AlgebraFile,
    alg: &MonomialAlgebra,
    n: usize,
    dot: &Option<PathBuf>,
    json_path: &Option<PathBuf>,
    out: &mut String,
) -> CliResult<()> {
    let start = Instant::now();
    let q = build_ar_quiver::<F>(alg, n)?;
    quiver_summary(alg, &q, out);
    let record = quiver_record(alg, &q);
    write_text(dot, &quiver_dot(&format!("ar_quiver_n{n}"), &record))?;
    write_json(
        json_path,
        &RunReport {
            schema_version: SCHEMA_VERSION,
            command: "ar-quiver".into(),
            config: json!({ "n": n }),
            algebra: AlgebraEcho::from(file),
            payload: serde_json::to_value(&record).expect("records serialize"),
            certified: record.closed && q.conflations.iter().all(|c| c.certified),
            timing_ms: start.elapsed().as_millis(),
        },
    )
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_derived_quiver<F: Field>(
    file: &AlgebraFile,
    alg: &MonomialAlgebra,
    t_min: i64,
    t_max: i64,
    max_n: usize,
    dot: &Option<PathBuf>,
    json_path: &Option<PathBuf>,
    out: &mut String,
) -> CliResult<()> {
    let start = Instant::now();
    let eta = compute_sgldim::<F>(alg, max_n)?.sgldim;
    let _ = writeln!(out, "eta = {eta}");
    if eta == 0 {
        let points = point_window(alg, t_min, t_max)?;
        let _ = writeln!(
            out,
            "eta = 0: every indecomposable is a shifted projective; the window is {} isolated points",
            points.len()
        );
        return Err(Error::EtaZero.into());
    }
    let q = build_ar_quiver::<F>(alg, eta + 1)?;
    let gb = gamma_bar(alg, &q)?;
    let w = derived_window(&gb, t_min, t_max)?;
    let record = derived_record(alg, &q, &gb, &w);
    let _ = writeln!(
        out,
        "gamma bar: {} classes, anchor {}",
        gb.classes.len(),
        gb.quiver.labels[gb.anchor]
    );
    let arrows: usize = w.quiver.arrows.values().sum();
    let _ = writeln!(
        out,
        "window t in [{t_min}, {t_max}]: {} vertices, {} arrows, {} tau edges",
        w.quiver.len(),
        arrows,
        w.quiver.tau.len()
    );
    for t in &w.unglued {
        let _ = writeln!(out, "no connecting arrow derivable between translates {t} and {}", t + 1);
    }
    write_text(dot, &derived_dot("derived_window", &record))?;
    write_json(
        json_path,
        &RunReport {
            schema_version: SCHEMA_VERSION,
            command: "derived-quiver".into(),
            config: json!({ "tMin": t_min, "tMax": t_max, "maxN": max_n }),
            algebra: AlgebraEcho::from(file),
            payload: serde_json::to_value(&record).expect("records serialize"),
            certified: q.universe.closed,
            timing_ms: start.elapsed().as_millis(),
        },
    )
}

struct Table {
    rows: Vec<(String, bool, String)>,
}

impl Table {
    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.rows.push((name.to_string(), pass, detail.into()));
    }
}

/// Deterministic stream of choices for random complexes.
pub struct PickStream(u64);

impl PickStream {
    pub fn new(seed: u64) -> Self {
        PickStream(seed)
    }

    pub fn pick(&mut self, m: usize) -> usize {
        self.0 = self.0.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        ((self.0 >> 33) % m as u64) as usize
    }
}

/// `drop_first ∘ embed_left = id` and `drop_last ∘ embed_right = id` on generated complexes.
pub fn functor_identity_failures<F: Field>(alg: &MonomialAlgebra, count: usize, seed: u64) -> usize {
    let mut stream = PickStream::new(seed);
    (0..count)
        .filter(|_| {
            let window = 1 + stream.pick(4);
            let sizes: Vec<usize> = (0..window).map(|_| stream.pick(3)).collect();
            let x: Complex<F> = complex_from_picks(alg, &sizes, &mut |m| stream.pick(m));
            !(x.is_complex(alg) && x.embed_left().drop_first() == x && x.embed_right().drop_last() == x)
        })
        .count()
}

/// Compares closure and brute force class lists within the cell bound.
pub fn oracle_agreement<F: FiniteField>(
    alg: &MonomialAlgebra,
    n: usize,
    bound: usize,
) -> strongdim::Result<(usize, usize, bool)> {
    let closure = enumerate_indecomposables::<F>(alg, n, &EnumConfig::default())?;
    let oracle = brute_force_indecomposables::<F>(alg, n, bound, BRUTE_FORCE_LIMIT)?;
    let within: Vec<Vec<Vec<u32>>> = closure
        .signatures(alg)
        .into_iter()
        .filter(|s| s.iter().all(|c| c.len() <= bound))
        .collect();
    let sigs = oracle.signatures(alg);
    Ok((within.len(), sigs.len(), within == sigs))
}

fn quiver_checks<F: Field>(alg: &MonomialAlgebra, q: &ARQuiver<F>, table: &mut Table) -> CliResult<()> {
    let n = q.window();
    let conf = q.conflation_violations(alg)?;
    table.push(
        &format!("conflation soundness (n = {n})"),
        conf.is_empty(),
        if conf.is_empty() {
            format!("{} conflations", q.conflations.len())
        } else {
            conf.join("; ")
        },
    );
    let shapes = q.shape_violations(alg);
    table.push(
        &format!("irreducible map shapes (n = {n})"),
        shapes.is_empty(),
        if shapes.is_empty() {
            format!("{} arrows", q.arrows.len())
        } else {
            shapes.join("; ")
        },
    );
    Ok(())
}

pub fn cmd_check<F: Field>(
    file: &AlgebraFile,
    alg: &MonomialAlgebra,
    n: Option<usize>,
    max_n: usize,
    oracle: Option<OracleField>,
    bound: usize,
    out: &mut String,
) -> CliResult<()> {
    let mut table = Table { rows: Vec::new() };
    if file.complex.is_some() {
        match file.build_complex::<F>(alg) {
            Ok(_) => table.push("declared complex: d^2 = 0", true, "ok"),
            Err(e) => table.push("declared complex: d^2 = 0", false, e.to_string()),
        }
    }
    let slow = compute_sgldim::<F>(alg, max_n)?;
    let fast = sgldim_fast::<F>(alg, max_n)?;
    let eta = slow.sgldim;
    table.push(
        "s.gl.dim identity",
        slow.sgldim == fast.sgldim && slow.m0 == slow.sgldim + 2,
        format!("loop {}, fast {}, m0 {}", slow.sgldim, fast.sgldim, slow.m0),
    );
    let u = enumerate_indecomposables::<F>(alg, eta + 2, &EnumConfig::default())?;
    let viol = boundary_violators(&u);
    table.push(
        &format!("boundary cells at window {}", eta + 2),
        u.closed && viol.is_empty(),
        format!("{} classes, {} violators", u.len(), viol.len()),
    );
    let big_n = n.unwrap_or(eta + 2);
    let big = build_ar_quiver::<F>(alg, big_n)?;
    quiver_checks(alg, &big, &mut table)?;
    if eta == 0 {
        table.push("window comparison", true, "skipped: eta = 0");
    } else if big_n < eta + 2 {
        table.push("window comparison", true, format!("skipped: n < eta + 2 = {}", eta + 2));
    } else {
        let small = build_ar_quiver::<F>(alg, eta + 1)?;
        quiver_checks(alg, &small, &mut table)?;
        let r = check_theorem_3_21(alg, &small, &big)?;
        table.push(
            &format!("window comparison ({} vs {})", big_n, eta + 1),
            r.passed(),
            if r.passed() {
                format!("{} and {} conflations", r.big_conflations, r.small_conflations)
            } else {
                r.violations.join("; ")
            },
        );
    }
    let failures = functor_identity_failures::<F>(alg, 200, 0x5eed);
    table.push("embed/drop identities", failures == 0, format!("{failures} of 200 failed"));
    if let Some(o) = oracle {
        let mut gf = file.clone();
        gf.field = match o {
            OracleField::Gf2 => FieldTag::Prime(2),
            OracleField::Gf3 => FieldTag::Prime(3),
        };
        let oracle_alg = gf.build()?;
        for window in 2..=big_n.min(3) {
            let (a, b, same) = match o {
                OracleField::Gf2 => oracle_agreement::<Gf2>(&oracle_alg, window, bound)?,
                OracleField::Gf3 => oracle_agreement::<Gf3>(&oracle_alg, window, bound)?,
            };
            table.push(
                &format!("oracle (n = {window}, bound {bound})"),
                same,
                format!("closure {a}, brute force {b}"),
            );
        }
    }
    let width = table.rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for (name, pass, detail) in &table.rows {
        let _ = writeln!(out, "{} {name:<width$}  {detail}", if *pass { "PASS" } else { "FAIL" });
    }
    let failed = table.rows.iter().filter(|r| !r.1).count();
    if failed > 0 {
        return Err(CliError::Invariant(format!("{failed} checks failed")));
    }
    let _ = writeln!(out, "all checks passed");
    Ok(())
}
