//! Command-line front end. `run` returns the process exit code: 0 on
//! success, 1 when a verification fails, 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::amenability::{folner_profile, profile_csv, verdict, Thresholds};
use crate::chains::{
    boundary, ez_assemble, ez_split, fundamental_class, is_boundary_at_capacity, leibniz_boundary, minimal_capacity,
    verify_witness, Chain, Cochain, MinimalCapacity, UffChain,
};
use crate::complex::{product, CellComplex, ProductCell, SimplicialWindow};
use crate::derham::{check_normalization, stokes_check};
use crate::duality::{dualize_chain, verify_sign_identity, DualityMap};
use crate::error::Error;
use crate::generators::{exhaustion, window, Family, FamilySpec};
use crate::line_h0::{is_null_class, primitive, EpChain};
use crate::rational::{self, Rational};

#[derive(Parser, Debug)]
#[command(name = "coarsehom", version, about = "Uniformly finite homology on finite windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a window and write it as JSON.
    Gen(GenArgs),
    /// Decide whether a 0-chain bounds at bounded capacity.
    H0(H0Args),
    /// Decide a class in H₀ of the line for an eventually periodic chain.
    Line(LineArgs),
    /// Følner and capacity profiles over an exhaustion, with a verdict.
    Amen(AmenArgs),
    /// Transport a chain to the dual cell cochain.
    Dualize(DualizeArgs),
    /// Check the dual-cell sign identity on every interior simplex.
    VerifyDuality(VerifyDualityArgs),
    /// Whitney normalization and Stokes checks.
    Derham(DerhamArgs),
    /// Product splitting checks on random chains.
    EzCheck(EzArgs),
    /// Full evidence for one family as a single JSON document.
    Report(ReportArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Grid,
    Tree,
    #[value(alias = "hyperbolic_tiling", alias = "tiling")]
    HyperbolicTiling,
    #[value(alias = "free_cayley")]
    FreeCayley,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long = "family", visible_alias = "kind", value_enum)]
    family: Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    r: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct H0Args {
    /// Window file; alternatively give a family and radii.
    #[arg(long, conflicts_with_all = ["family", "radii"])]
    window: Option<PathBuf>,
    #[arg(long, value_parser = parse_kind, requires = "radii")]
    family: Option<Kind>,
    #[arg(long, value_parser = parse_radii_arg)]
    radii: Option<Radii>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// `fundamental`, or a path to a chain file.
    #[arg(long, default_value = "fundamental")]
    class: String,
    #[arg(long, default_value_t = 64)]
    kmax: i64,
    /// Decide at this capacity only, instead of searching for the least one.
    #[arg(long)]
    capacity: Option<i64>,
    /// Write `radius,min_capacity` rows here.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LineArgs {
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    prefix: String,
    #[arg(long, allow_hyphen_values = true)]
    left: String,
    #[arg(long, allow_hyphen_values = true)]
    right: String,
    /// Site of the first prefix entry; centred on 0 when omitted.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<i64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AmenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_parser = parse_radii_arg)]
    radii: Radii,
    #[arg(long, default_value_t = 64)]
    kmax: i64,
    #[arg(long, value_parser = parse_rational, default_value = "1/10")]
    epsilon: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "1/5")]
    delta: Rational,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DualizeArgs {
    #[arg(long)]
    window: PathBuf,
    #[arg(long)]
    chain: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyDualityArgs {
    #[arg(long)]
    window: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DerhamArgs {
    #[arg(long)]
    window: PathBuf,
    #[arg(long)]
    check_normalization: bool,
    /// Also check Stokes on every basis cochain.
    #[arg(long)]
    stokes: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EzArgs {
    /// Factor as `kind:key=value,...` (e.g. `grid:n=1,r=4`) or `@window.json`.
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_parser = parse_radii_arg)]
    radii: Radii,
    #[arg(long, default_value_t = 64)]
    kmax: i64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Outcome of a subcommand before it becomes an exit code.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn parse_kind(s: &str) -> std::result::Result<Kind, String> {
    Kind::from_str(s, true)
}

#[derive(Clone, Debug)]
struct Radii(Vec<usize>);

fn parse_radii_arg(s: &str) -> std::result::Result<Radii, String> {
    parse_radii(s).map(Radii)
}

/// `a..b` (inclusive) or a comma-separated list.
pub fn parse_radii(s: &str) -> std::result::Result<Vec<usize>, String> {
    let radii: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| format!("bad radius range start in {s:?}"))?;
        let b: usize = b.trim().parse().map_err(|_| format!("bad radius range end in {s:?}"))?;
        (a..=b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| format!("bad radius {t:?}"))).collect::<Result<_, _>>()?
    };
    if radii.is_empty() {
        return Err(format!("empty radius range {s:?}"));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("radii must increase: {s:?}"));
    }
    Ok(radii)
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> std::result::Result<Vec<i64>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad integer {t:?} in {s:?}"))))
        .collect()
}

fn family_of(kind: Kind, n: Option<usize>, d: Option<usize>, p: Option<usize>, q: Option<usize>, k: Option<usize>) -> std::result::Result<Family, Failure> {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this family")));
    Ok(match kind {
        Kind::Grid => Family::Grid { n: need(n, "n")? },
        Kind::Tree => Family::Tree { d: need(d, "d")? },
        Kind::HyperbolicTiling => Family::HyperbolicTiling { p: need(p, "p")?, q: need(q, "q")? },
        Kind::FreeCayley => Family::FreeCayley { k: need(k, "k")? },
    })
}

impl FamilyArgs {
    fn family(&self) -> std::result::Result<Family, Failure> {
        family_of(self.family, self.n, self.d, self.p, self.q, self.k)
    }
}

/// `kind:key=value,...`
fn parse_spec(s: &str) -> std::result::Result<FamilySpec, Failure> {
    let (kind, params) = s.split_once(':').unwrap_or((s, ""));
    let kind = parse_kind(kind).map_err(Failure::Usage)?;
    let mut vals = std::collections::BTreeMap::new();
    for kv in params.split(',').filter(|t| !t.is_empty()) {
        let (key, v) = kv.split_once('=').ok_or_else(|| Failure::Usage(format!("expected key=value, got {kv:?}")))?;
        let v: usize = v.parse().map_err(|_| Failure::Usage(format!("bad value in {kv:?}")))?;
        vals.insert(key.to_string(), v);
    }
    let get = |key: &str| vals.get(key).copied();
    let r = get("r").ok_or_else(|| Failure::Usage(format!("{s:?} needs r=")))?;
    Ok(family_of(kind, get("n"), get("d"), get("p"), get("q"), get("k"))?.at(r))
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_window(path: &Path) -> std::result::Result<SimplicialWindow, Failure> {
    Ok(SimplicialWindow::from_json(&read(path)?)?)
}

/// Writes via a sibling temporary file and a rename, so a failed run never
/// leaves a partial file behind. Without a path the text goes to stdout.
fn emit(path: Option<&Path>, text: &str) -> Outcome {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()));
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Failure::Usage(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let io = |e: std::io::Error| Failure::Usage(format!("cannot write {}: {e}", path.display()));
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn capacity_value(k: MinimalCapacity) -> Value {
    match k {
        MinimalCapacity::Exact(k) => json!(k),
        MinimalCapacity::NoneBelow(k) => json!(format!(">{k}")),
    }
}

fn chain_value(c: &UffChain) -> Value {
    serde_json::from_str(&c.to_json()).expect("chain JSON")
}

fn radius_of(w: &SimplicialWindow) -> Option<i64> {
    w.metadata().and_then(|m| m.params.get("r").copied())
}

fn cmd_gen(a: &GenArgs) -> Outcome {
    let w = window(&a.family.family()?.at(a.r))?;
    emit(a.output.as_deref(), &(w.to_json() + "\n"))
}

fn cmd_h0(a: &H0Args) -> Outcome {
    let windows: Vec<SimplicialWindow> = match (&a.window, a.family, &a.radii) {
        (Some(path), _, _) => vec![read_window(path)?],
        (None, Some(kind), Some(radii)) => exhaustion(family_of(kind, a.n, a.d, a.p, a.q, a.k)?, &radii.0)?,
        _ => return Err(Failure::Usage("give --window, or --family with --radii".into())),
    };
    if a.kmax < 1 {
        return Err(Failure::Usage("--kmax must be at least 1".into()));
    }
    let mut results = Vec::new();
    let mut profile = String::from("radius,min_capacity\n");
    let mut all_verified = true;
    for w in &windows {
        let c = if a.class == "fundamental" { fundamental_class(w) } else { UffChain::from_json(w, &read(Path::new(&a.class))?)? };
        let radius = radius_of(w);
        let entry = if let Some(k) = a.capacity {
            let d = is_boundary_at_capacity(w, &c, k)?;
            let witness = d.verdict.witness();
            let verified = witness.is_none_or(|b| verify_witness(w, &c, b, k));
            all_verified &= verified;
            json!({
                "radius": radius,
                "capacity": k,
                "feasible": d.verdict.is_feasible(),
                "witness_verified": verified,
                "components": d.components,
                "witness": witness.map(chain_value),
            })
        } else {
            let (k, witness) = minimal_capacity(w, &c, a.kmax)?;
            let verified = match (k, &witness) {
                (MinimalCapacity::Exact(k), Some(b)) => verify_witness(w, &c, b, k),
                _ => true,
            };
            all_verified &= verified;
            profile.push_str(&format!("{},{}\n", radius.map(|r| r.to_string()).unwrap_or_default(), capacity_value(k).to_string().trim_matches('"')));
            json!({
                "radius": radius,
                "kmax": a.kmax,
                "min_capacity": capacity_value(k),
                "witness_verified": verified,
                "witness": witness.as_ref().map(chain_value),
            })
        };
        results.push(entry);
    }
    if let Some(path) = &a.profile {
        emit(Some(path), &profile)?;
    }
    let doc = if results.len() == 1 { results.pop().expect("one result") } else { Value::Array(results) };
    emit(a.output.as_deref(), &pretty(&doc))?;
    if all_verified { Ok(()) } else { Err(Failure::Verification("a returned witness failed verification".into())) }
}

fn cmd_line(a: &LineArgs) -> Outcome {
    let (prefix, left, right) = (parse_list(&a.prefix)?, parse_list(&a.left)?, parse_list(&a.right)?);
    let c = match a.start {
        Some(s) => EpChain::new(s, prefix, left, right)?,
        None => EpChain::centered(prefix, left, right)?,
    };
    let witness = primitive(&c);
    let doc = json!({
        "chain": &c,
        "null": is_null_class(&c),
        "witness": witness.as_ref().map(|phi| json!({"primitive": phi, "norm": phi.norm()})),
    });
    emit(a.output.as_deref(), &pretty(&doc))
}

fn cmd_amen(a: &AmenArgs) -> Outcome {
    let family = a.family.family()?;
    let windows = exhaustion(family, &a.radii.0)?;
    let profile = folner_profile(&a.radii.0, &windows)?;
    let capacities = crate::chains::capacity_profile(&windows, a.kmax)?;
    let thresholds = Thresholds { epsilon: a.epsilon.clone(), delta: a.delta.clone(), ..Thresholds::default() };
    let v = verdict(&profile, &capacities, &thresholds)?;
    let mut csv = profile_csv(&profile, &capacities);
    csv.push_str(&format!("verdict,{}\n", v.classification.as_str()));
    emit(a.output.as_deref(), &csv)
}

fn cmd_dualize(a: &DualizeArgs) -> Outcome {
    let w = read_window(&a.window)?;
    let c = UffChain::from_json(&w, &read(&a.chain)?)?;
    let map = DualityMap::new(&w)?;
    let d = dualize_chain(&map, &c)?;
    emit(a.output.as_deref(), &(d.to_json() + "\n"))
}

fn cmd_verify_duality(a: &VerifyDualityArgs) -> Outcome {
    let w = read_window(&a.window)?;
    let report = match verify_sign_identity(&w) {
        Ok(r) => r,
        Err(e @ (Error::NotManifoldLike { .. } | Error::NotOrientable(_))) => return Err(Failure::Verification(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    emit(a.output.as_deref(), &pretty(&report))?;
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} sign violations", report.violations.len())))
    }
}

fn cmd_derham(a: &DerhamArgs) -> Outcome {
    let w = read_window(&a.window)?;
    if !a.check_normalization && !a.stokes {
        return Err(Failure::Usage("nothing to check: pass --check-normalization and/or --stokes".into()));
    }
    let mut doc = serde_json::Map::new();
    let mut bad = 0;
    if a.check_normalization {
        let r = check_normalization(&w)?;
        bad += r.violations.len();
        doc.insert("normalization".into(), serde_json::to_value(&r).expect("report"));
    }
    if a.stokes {
        let mut checked = 0;
        let mut violations = Vec::new();
        for q in 0..w.dim() {
            for s in w.simplices(q) {
                let r = stokes_check(&w, &Cochain::basis(q, s.clone()))?;
                checked += r.checked;
                violations.extend(r.violations);
            }
        }
        bad += violations.len();
        doc.insert("stokes".into(), json!({"checked": checked, "violations": violations}));
    }
    emit(a.output.as_deref(), &pretty(&doc))?;
    if bad == 0 { Ok(()) } else { Err(Failure::Verification(format!("{bad} de Rham violations"))) }
}

fn factor(s: &str) -> std::result::Result<SimplicialWindow, Failure> {
    match s.strip_prefix('@') {
        Some(path) => read_window(Path::new(path)),
        None => Ok(window(&parse_spec(s)?)?),
    }
}

/// Result of the product splitting checks on one pair of factors.
#[derive(Debug, Serialize)]
pub struct EzReport {
    pub samples: usize,
    pub roundtrip_failures: usize,
    pub leibniz_failures: usize,
    /// `(n, product cells, Σ_{i+j=n} |X_i| |Y_j|)`.
    pub cell_counts: Vec<(usize, usize, usize)>,
}

impl EzReport {
    pub fn ok(&self) -> bool {
        self.roundtrip_failures == 0 && self.leibniz_failures == 0 && self.cell_counts.iter().all(|(_, a, b)| a == b)
    }
}

/// Round trip and Leibniz commutation on seeded random chains, and the
/// bigraded cell count.
pub fn ez_check(left: &SimplicialWindow, right: &SimplicialWindow, samples: usize, seed: u64) -> crate::Result<EzReport> {
    let p = product(left, right);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut roundtrip_failures, mut leibniz_failures) = (0, 0);
    for _ in 0..samples {
        let degree = rng.gen_range(0..=p.top_dim());
        let cells = p.cells(degree);
        let size = rng.gen_range(1..=cells.len().min(12));
        let entries: Vec<(ProductCell, i64)> =
            (0..size).map(|_| (cells[rng.gen_range(0..cells.len())].clone(), rng.gen_range(-3..=3))).collect();
        let c = Chain::new(&p, degree, entries)?;
        let split = ez_split(&p, &c)?;
        if ez_assemble(&split) != c {
            roundtrip_failures += 1;
        }
        if degree > 0 {
            let lhs = ez_split(&p, &boundary(&p, &c)?)?;
            if lhs != leibniz_boundary(&split) {
                leibniz_failures += 1;
            }
        }
    }
    let cell_counts = (0..=p.top_dim())
        .map(|n| {
            let expected = (0..=n.min(left.dim()))
                .filter(|i| n - i <= right.dim())
                .map(|i| left.simplices(i).len() * right.simplices(n - i).len())
                .sum();
            (n, p.count(n), expected)
        })
        .collect();
    Ok(EzReport { samples, roundtrip_failures, leibniz_failures, cell_counts })
}

fn cmd_ez(a: &EzArgs) -> Outcome {
    let (l, r) = (factor(&a.left)?, factor(&a.right)?);
    let report = ez_check(&l, &r, a.samples, a.seed)?;
    emit(a.output.as_deref(), &pretty(&report))?;
    if report.ok() { Ok(()) } else { Err(Failure::Verification("product splitting check failed".into())) }
}

/// The evidence document written by `report`.
pub fn report(family: Family, radii: &[usize], kmax: i64) -> crate::Result<Value> {
    let windows = exhaustion(family, radii)?;
    let profile = folner_profile(radii, &windows)?;
    let capacities = crate::chains::capacity_profile(&windows, kmax)?;
    let thresholds = Thresholds::default();
    let verdict = verdict(&profile, &capacities, &thresholds)?;
    let first = &windows[0];
    let duality = match verify_sign_identity(first) {
        Ok(r) => json!({"radius": radii[0], "checked": r.checked, "violations": r.violations.len()}),
        Err(e) => json!({"radius": radii[0], "unavailable": e.to_string()}),
    };
    let derham = if first.has_geometry() {
        let r = check_normalization(first)?;
        json!({"radius": radii[0], "pairs_checked": r.pairs_checked, "violations": r.violations.len()})
    } else {
        json!({"radius": radii[0], "unavailable": Error::MissingGeometry.to_string()})
    };
    let summaries: Vec<Value> = radii
        .iter()
        .zip(&windows)
        .map(|(r, w)| {
            json!({
                "radius": r,
                "f_vector": (0..=w.dim()).map(|q| w.simplices(q).len()).collect::<Vec<_>>(),
                "interior_vertices": w.interior_vertices().count(),
                "link_bound": w.link_bound(),
            })
        })
        .collect();
    Ok(json!({
        "family": family,
        "radii": radii,
        "kmax": kmax,
        "windows": summaries,
        "folner": profile,
        "min_capacity": capacities.iter().map(|&k| capacity_value(k)).collect::<Vec<_>>(),
        "verdict": {
            "classification": verdict.classification,
            "thresholds": thresholds,
            "note": verdict.note,
        },
        "duality": duality,
        "derham": derham,
    }))
}

fn cmd_report(a: &ReportArgs) -> Outcome {
    let doc = report(a.family.family()?, &a.radii.0, a.kmax)?;
    emit(a.output.as_deref(), &pretty(&doc))
}

fn configure_threads() {
    if let Some(n) = std::env::var("COARSEHOM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let outcome = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::H0(a) => cmd_h0(a),
        Command::Line(a) => cmd_line(a),
        Command::Amen(a) => cmd_amen(a),
        Command::Dualize(a) => cmd_dualize(a),
        Command::VerifyDuality(a) => cmd_verify_duality(a),
        Command::Derham(a) => cmd_derham(a),
        Command::EzCheck(a) => cmd_ez(a),
        Command::Report(a) => cmd_report(a),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
    }
}
