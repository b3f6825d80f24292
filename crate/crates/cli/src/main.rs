//! `cohft`: batch front end for the reconstruction engine.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cohft_core::arith::{Rational, Ring};
use cohft_core::cohft::{hodge_rmatrix, FrobeniusData, RMatrix};
use cohft_core::correlators::psi_correlator;
use cohft_core::graphs::{stable_graphs, GraphClass};
use cohft_core::hilbert::{three_point_series, three_point_truncated, Partition};
use cohft_core::reconstruction::{cohft_axiom_suite, AxiomCheck, Engine, Insertion, Theory};
use cohft_core::rspin::{
    euler_commutation_check, fusion_coefficient, polynomiality_scan, rspin_frobenius, rspin_theory,
    rspin_topological_exact, rspin_topological_float, witten_degree, witten_integral,
};
use cohft_core::verlinde::{
    level1_even_rank_check, rank_gluing_checks, sl2_fusion, verlinde_correlator, verlinde_rank, verlinde_theory, TPoly,
};
use cohft_core::Error as CoreError;

#[derive(Parser, Debug)]
#[command(name = "cohft", version, about = "Exact CohFT correlators from stable-graph sums")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Compare the result with this file; exit 1 on any difference.
    #[arg(long, global = true)]
    golden: Option<PathBuf>,
    /// Overwrite the golden file with the result.
    #[arg(long, global = true, requires = "golden")]
    update_golden: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TheoryKind {
    Trivial,
    Hodge,
    Rspin,
    Verlinde,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the stable graphs of M̄_{g,n}.
    Graphs {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        legs: usize,
    },
    /// ∫ ψ_1^{a_1} ⋯ ψ_n^{a_n} over M̄_{g,n}.
    Psi {
        #[arg(long)]
        genus: u32,
        /// Comma-separated exponents (may be empty for n = 0).
        #[arg(long, allow_hyphen_values = true)]
        exponents: String,
    },
    /// Reconstructed correlator of a theory given as JSON descriptors.
    Reconstruct {
        /// {"dim", "eta", "threePoint", "unit"}
        #[arg(long)]
        frobenius: PathBuf,
        /// {"order", "R"}; the identity when omitted.
        #[arg(long)]
        rmatrix: Option<PathBuf>,
        /// {"genus", "insertions": [{"vector": [...], "psi": k}, ...]}
        #[arg(long)]
        request: PathBuf,
        /// Sum over these graphs (output of `graphs`) instead of enumerating.
        #[arg(long)]
        graph_file: Option<PathBuf>,
    },
    /// Witten r-spin integrals.
    Rspin {
        #[arg(long, required_unless_present = "scan_r")]
        r: Option<u32>,
        #[arg(long)]
        genus: u32,
        /// Comma-separated weights a_i.
        #[arg(long)]
        a: String,
        /// Comma-separated ψ exponents (default all zero).
        #[arg(long)]
        psi: Option<String>,
        /// Exploratory: tabulate r^{g-1} ∫ W^r over a range `LO..HI` of r.
        #[arg(long)]
        scan_r: Option<String>,
        /// With --scan-r, read the weights as offsets from r-2.
        #[arg(long, requires = "scan_r")]
        from_top: bool,
    },
    /// Verlinde correlators as polynomials in t.
    Verlinde {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        weights: String,
        #[arg(long)]
        psi: Option<String>,
        #[arg(long)]
        t_order: Option<usize>,
    },
    /// Three-point series ⟨μ¹|M_D|μ²⟩ on Hilb^m(C²).
    Hilb {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        mu1: String,
        #[arg(long)]
        mu2: String,
        /// Expand in q through this order instead of the closed form.
        #[arg(long)]
        series_order: Option<usize>,
    },
    /// Property suite over the shipped theories.
    Suite {
        /// Restrict to one theory (default: all).
        #[arg(long, value_enum)]
        theory: Option<TheoryKind>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, default_value_t = 2)]
        max_genus: u32,
        #[arg(long, default_value_t = 4)]
        max_legs: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Internal(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::UnstablePair { .. }
            | CoreError::Range(_)
            | CoreError::SizeMismatch { .. }
            | CoreError::InvalidTheory(_)
            | CoreError::Parse(_)
            | CoreError::NonSymplectic { .. }
            | CoreError::SingularPairing => Failure::Validation(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// A result with its JSON form and a flat table for CSV.
struct Report {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    ok: bool,
}

impl Report {
    fn single(json: Value, key: &'static str, value: String) -> Self {
        Report { json, header: vec![key], rows: vec![vec![value]], ok: true }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                let _ = writeln!(s, "{}", self.header.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                    let _ = writeln!(s, "{}", cells.join(","));
                }
                s
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<u32>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u32>().map_err(|_| Failure::Validation(format!("{what}: {x:?} is not a non-negative integer"))))
        .collect()
}

fn psi_or_zero(psi: &Option<String>, n: usize) -> CliResult<Vec<u32>> {
    match psi {
        None => Ok(vec![0; n]),
        Some(s) => {
            let v = parse_list(s, "psi")?;
            if v.len() != n {
                return Err(Failure::Validation(format!("{} ψ exponents for {n} markings", v.len())));
            }
            Ok(v)
        }
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn parse_rational(v: &Value) -> CliResult<Rational> {
    match v {
        Value::String(s) => s.parse().map_err(Failure::from),
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from)
            .ok_or_else(|| Failure::Validation(format!("coefficient {n} is not an integer; quote fractions"))),
        _ => Err(Failure::Validation(format!("bad coefficient {v}"))),
    }
}

fn graphs_cmd(genus: u32, legs: usize) -> CliResult<Report> {
    let graphs = stable_graphs(genus, legs)?;
    let rows = graphs
        .iter()
        .enumerate()
        .map(|(i, gc)| {
            let j = gc.graph.to_json();
            vec![i.to_string(), j["vertices"].to_string(), j["edges"].to_string(), j["legs"].to_string(), gc.aut.to_string()]
        })
        .collect();
    Ok(Report {
        json: json!({
            "count": graphs.len(),
            "graphs": graphs.iter().map(GraphClass::to_json).collect::<Vec<_>>(),
        }),
        header: vec!["index", "vertices", "edges", "legs", "aut"],
        rows,
        ok: true,
    })
}

fn psi_cmd(genus: u32, exponents: &str) -> CliResult<Report> {
    let e = parse_list(exponents, "exponents")?;
    let v = psi_correlator(genus, &e)?;
    Ok(Report::single(json!({ "value": v.to_string() }), "value", v.to_string()))
}

fn reconstruct_cmd(frobenius: &Path, rmatrix: Option<&Path>, request: &Path, graph_file: Option<&Path>) -> CliResult<Report> {
    let f = FrobeniusData::from_json(&read_json(frobenius)?)?;
    let req = read_json(request)?;
    let genus = req
        .get("genus")
        .and_then(Value::as_u64)
        .ok_or_else(|| Failure::Validation("request needs an integer \"genus\"".into()))? as u32;
    let raw = req
        .get("insertions")
        .and_then(Value::as_array)
        .ok_or_else(|| Failure::Validation("request needs an \"insertions\" array".into()))?;
    let mut insertions = Vec::with_capacity(raw.len());
    for ins in raw {
        let vector = ins
            .get("vector")
            .and_then(Value::as_array)
            .ok_or_else(|| Failure::Validation("insertion needs a \"vector\" array".into()))?
            .iter()
            .map(parse_rational)
            .collect::<CliResult<Vec<_>>>()?;
        let psi = ins.get("psi").map_or(Some(0), Value::as_u64).ok_or_else(|| Failure::Validation("bad \"psi\"".into()))?;
        insertions.push(Insertion::new(vector, psi as u32));
    }
    let n = insertions.len();
    if 2 * genus as i64 - 2 + n as i64 <= 0 {
        return Err(CoreError::UnstablePair { g: genus, n }.into());
    }
    let dim = (3 * genus as i64 - 3 + n as i64) as usize;
    let rm = match rmatrix {
        Some(p) => RMatrix::from_json(&read_json(p)?, f.dim())?,
        None => RMatrix::identity(f.dim(), dim),
    };
    let engine = Engine::new(Theory { frobenius: f, rmatrix: rm })?;
    let (value, count) = match graph_file {
        None => (engine.correlator(genus, &insertions)?, stable_graphs(genus, n)?.len()),
        Some(p) => {
            let doc = read_json(p)?;
            let list = doc.get("graphs").unwrap_or(&doc).as_array().ok_or_else(|| {
                Failure::Validation("graph file must be a JSON array or an object with \"graphs\"".into())
            })?;
            let graphs = list.iter().map(GraphClass::from_json).collect::<Result<Vec<_>, _>>()?;
            for gc in &graphs {
                gc.graph.validate(genus, n)?;
            }
            (engine.correlator_over(genus, &insertions, &graphs)?, graphs.len())
        }
    };
    Ok(Report::single(
        json!({ "value": value.to_string(), "genus": genus, "n": n, "graphs": count }),
        "value",
        value.to_string(),
    ))
}

fn parse_range(s: &str) -> CliResult<(u32, u32)> {
    let bad = || Failure::Validation(format!("range {s:?} must look like LO..HI"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if lo < 2 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn rspin_cmd(r: Option<u32>, genus: u32, a: &str, psi: &Option<String>, scan: &Option<String>, from_top: bool) -> CliResult<Report> {
    let a = parse_list(a, "a")?;
    let psi = psi_or_zero(psi, a.len())?;
    if let Some(range) = scan {
        let (lo, hi) = parse_range(range)?;
        let values = polynomiality_scan(genus, &a, &psi, from_top, lo..=hi)?;
        let rows = values.iter().map(|(r, v)| vec![r.to_string(), v.to_string()]).collect();
        return Ok(Report {
            json: json!({
                "scan": values.iter().map(|(r, v)| json!({ "r": r, "value": v.to_string() })).collect::<Vec<_>>(),
            }),
            header: vec!["r", "value"],
            rows,
            ok: true,
        });
    }
    let r = r.expect("clap requires --r without --scan-r");
    let value = witten_integral(r, genus, &a, &psi)?;
    let degree = witten_degree(r, genus, &a);
    Ok(Report {
        json: json!({ "value": value.to_string(), "degree": degree }),
        header: vec!["value", "degree"],
        rows: vec![vec![value.to_string(), degree.map_or(String::new(), |d| d.to_string())]],
        ok: true,
    })
}

fn verlinde_cmd(level: u32, genus: u32, weights: &str, psi: &Option<String>, t_order: Option<usize>) -> CliResult<Report> {
    let w = parse_list(weights, "weights")?;
    let psi = psi_or_zero(psi, w.len())?;
    let v = verlinde_correlator(level, genus, &w, &psi, t_order)?;
    let order = v.order().unwrap_or(0);
    let rows = (0..=order).map(|k| vec![k.to_string(), v.coeff(k).to_string()]).collect();
    Ok(Report { json: json!({ "value": v.to_json(), "t_order": order }), header: vec!["power", "coefficient"], rows, ok: true })
}

fn hilb_cmd(m: Option<u32>, mu1: &str, mu2: &str, order: Option<usize>) -> CliResult<Report> {
    let mu1: Partition = mu1.parse()?;
    let mu2: Partition = mu2.parse()?;
    if let Some(m) = m {
        if mu1.size() != m || mu2.size() != m {
            return Err(Failure::Validation(format!("partitions must have size {m}")));
        }
    }
    match order {
        None => {
            let v = three_point_series(&mu1, &mu2)?;
            Ok(Report::single(json!({ "value": v.to_json(), "text": v.to_string() }), "value", v.to_string()))
        }
        Some(k) => {
            let s = three_point_truncated(&mu1, &mu2, k)?;
            let coeffs: serde_json::Map<String, Value> =
                (0..=k).map(|d| (d.to_string(), json!(s.coeff(d).to_string()))).collect();
            let rows = (0..=k).map(|d| vec![d.to_string(), s.coeff(d).to_string()]).collect();
            Ok(Report { json: json!({ "series": coeffs, "order": k }), header: vec!["q_power", "coefficient"], rows, ok: true })
        }
    }
}

fn check(name: &str, passed: bool, detail: String) -> AxiomCheck {
    AxiomCheck { name: name.into(), passed, detail }
}

fn symplectic<C: Ring>(engine: &Engine<C>) -> CliResult<AxiomCheck> {
    let defect = engine.rmatrix().symplectic_defect(engine.frobenius().eta_inv())?;
    Ok(check("symplectic", defect.is_none(), format!("first failing order {defect:?}")))
}

fn suite_theories(theory: Option<TheoryKind>, r: Option<u32>, level: Option<u32>) -> Vec<(TheoryKind, u32)> {
    let all = [TheoryKind::Trivial, TheoryKind::Hodge, TheoryKind::Rspin, TheoryKind::Verlinde];
    let kinds: Vec<TheoryKind> = theory.map_or(all.to_vec(), |t| vec![t]);
    let mut out = Vec::new();
    for k in kinds {
        match k {
            TheoryKind::Rspin => out.extend(r.map_or((2..=5).collect(), |r| vec![r]).into_iter().map(|r| (k, r))),
            TheoryKind::Verlinde => out.extend(level.map_or((1..=2).collect(), |l| vec![l]).into_iter().map(|l| (k, l))),
            _ => out.push((k, 0)),
        }
    }
    out
}

fn theory_checks(kind: TheoryKind, param: u32, max_g: u32, max_n: usize) -> CliResult<(String, Vec<AxiomCheck>)> {
    let order = (3 * max_g as usize + max_n).saturating_sub(3).max(1);
    match kind {
        TheoryKind::Trivial | TheoryKind::Hodge => {
            let rm = if kind == TheoryKind::Trivial { RMatrix::identity(1, order) } else { hodge_rmatrix(order) };
            let engine = Engine::new(Theory { frobenius: FrobeniusData::trivial(), rmatrix: rm })?;
            let mut checks = vec![symplectic(&engine)?];
            checks.extend(cohft_axiom_suite(&engine, max_g, max_n)?);
            let name = if kind == TheoryKind::Trivial { "trivial" } else { "hodge" };
            Ok((name.to_string(), checks))
        }
        TheoryKind::Rspin => {
            let r = param;
            let engine = Engine::new(rspin_theory(r, order)?)?;
            let mut checks = vec![symplectic(&engine)?];
            let euler = euler_commutation_check(r, order)?;
            checks.push(check("euler-commutation", euler.is_none(), format!("first failing order {euler:?}")));
            let f = rspin_frobenius(r)?;
            for a in 0..r - 1 {
                for b in 0..r - 1 {
                    for c in 0..r - 1 {
                        if r >= 3 {
                            let (x, y) = (fusion_coefficient(r, a, b, c)?, sl2_fusion(r - 2, a, b, c)?);
                            checks.push(check("fusion-bridge", x == y, format!("r={r} ({a},{b},{c}): {x} vs {y}")));
                        }
                    }
                }
            }
            for g in 0..=max_g {
                for n in 0..=max_n.min(5) {
                    if 2 * g as i64 - 2 + n as i64 <= 0 {
                        continue;
                    }
                    for a in index_tuples(f.dim() as u32, n) {
                        let exact = rspin_topological_exact(r, g, &a)?.to_f64();
                        let float = rspin_topological_float(r, g, &a);
                        let ok = (exact - float).abs() <= 1e-9 * exact.abs().max(1.0);
                        checks.push(check("topological-closed-form", ok, format!("r={r} g={g} a={a:?}: {exact} vs {float}")));
                    }
                }
            }
            checks.extend(cohft_axiom_suite(&engine, max_g, max_n)?);
            Ok((format!("rspin r={r}"), checks))
        }
        TheoryKind::Verlinde => {
            let level = param;
            let engine: Engine<TPoly> = Engine::new(verlinde_theory(level, order, order)?)?;
            let mut checks = vec![symplectic(&engine)?];
            checks.extend(rank_gluing_checks(level, max_g, max_n)?);
            if level == 1 {
                for g in 0..=max_g {
                    for n in (0..=max_n).step_by(2) {
                        if 2 * g as i64 - 2 + n as i64 <= 0 {
                            continue;
                        }
                        let rep = level1_even_rank_check(g, n)?;
                        checks.push(check("even-graph-rank", rep.passed && rep.rank == 1 << g, format!("{rep:?}")));
                    }
                }
            }
            for (g, n, psi, scale) in [(0u32, 3usize, 0u32, Rational::one()), (1, 1, 1, Rational::frac(1, 24))] {
                if g > max_g {
                    continue;
                }
                for w in index_tuples(level + 1, n) {
                    let ins: Vec<Insertion<TPoly>> =
                        w.iter().map(|&a| Insertion::new(engine.frobenius().basis(a as usize), psi)).collect();
                    let t0 = engine.correlator(g, &ins)?.coeff(0);
                    let rank = Rational::from(verlinde_rank(level, g, &w)? as i64) * scale.clone();
                    checks.push(check("t0-rank", t0 == rank, format!("ℓ={level} g={g} w={w:?}: {t0} vs {rank}")));
                }
            }
            checks.extend(cohft_axiom_suite(&engine, max_g, max_n)?);
            Ok((format!("verlinde level={level}"), checks))
        }
    }
}

fn index_tuples(d: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<u32>| {
                let start = t.last().copied().unwrap_or(0);
                (start..d).map(move |a| {
                    let mut v = t.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

fn suite_cmd(theory: Option<TheoryKind>, r: Option<u32>, level: Option<u32>, max_g: u32, max_n: usize) -> CliResult<Report> {
    if max_g > 3 || max_n > 6 {
        return Err(Failure::Validation("suite bounds are limited to --max-genus 3 and --max-legs 6".into()));
    }
    if let Some(r) = r {
        if !(2..=8).contains(&r) {
            return Err(Failure::Validation(format!("--r {r} outside 2..=8")));
        }
    }
    if let Some(l) = level {
        if !(1..=3).contains(&l) {
            return Err(Failure::Validation(format!("--level {l} outside 1..=3")));
        }
    }
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for (kind, param) in suite_theories(theory, r, level) {
        let start = std::time::Instant::now();
        let (name, checks) = theory_checks(kind, param, max_g, max_n)?;
        let failures: Vec<&AxiomCheck> = checks.iter().filter(|c| !c.passed).collect();
        eprintln!("suite: {name}: {} checks, {} failed ({:.1} s)", checks.len(), failures.len(), start.elapsed().as_secs_f64());
        ok &= failures.is_empty();
        rows.push(vec![name.clone(), checks.len().to_string(), failures.len().to_string()]);
        entries.push(json!({
            "theory": name,
            "checks": checks.len(),
            "failed": failures.len(),
            "failures": failures.iter().take(20).map(|c| json!({ "name": c.name, "detail": c.detail })).collect::<Vec<_>>(),
        }));
    }
    Ok(Report {
        json: json!({ "max_genus": max_g, "max_legs": max_n, "passed": ok, "theories": entries }),
        header: vec!["theory", "checks", "failed"],
        rows,
        ok,
    })
}

fn run_command(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::Graphs { genus, legs } => graphs_cmd(*genus, *legs),
        Command::Psi { genus, exponents } => psi_cmd(*genus, exponents),
        Command::Reconstruct { frobenius, rmatrix, request, graph_file } => {
            reconstruct_cmd(frobenius, rmatrix.as_deref(), request, graph_file.as_deref())
        }
        Command::Rspin { r, genus, a, psi, scan_r, from_top } => rspin_cmd(*r, *genus, a, psi, scan_r, *from_top),
        Command::Verlinde { level, genus, weights, psi, t_order } => verlinde_cmd(*level, *genus, weights, psi, *t_order),
        Command::Hilb { m, mu1, mu2, series_order } => hilb_cmd(*m, mu1, mu2, *series_order),
        Command::Suite { theory, r, level, max_genus, max_legs } => suite_cmd(*theory, *r, *level, *max_genus, *max_legs),
    }
}

/// Hash of the request, including the contents of any input files.
fn cache_key(cli: &Cli) -> CliResult<String> {
    let mut h = Sha256::new();
    h.update(format!("{:?}|{:?}", cli.command, cli.format).as_bytes());
    if let Command::Reconstruct { frobenius, rmatrix, request, graph_file } = &cli.command {
        for p in [Some(frobenius), rmatrix.as_ref(), Some(request), graph_file.as_ref()].into_iter().flatten() {
            let bytes = std::fs::read(p).map_err(|e| Failure::Validation(format!("{}: {e}", p.display())))?;
            h.update(&bytes);
        }
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

fn produce(cli: &Cli) -> CliResult<(String, bool)> {
    let cache = std::env::var_os("COHFT_CACHE_DIR").map(PathBuf::from);
    let entry = match &cache {
        Some(dir) => Some(dir.join(cache_key(cli)?)),
        None => None,
    };
    if let Some(path) = &entry {
        if let Ok(text) = std::fs::read_to_string(path) {
            return Ok((text, true));
        }
    }
    let report = run_command(&cli.command)?;
    let text = report.render(cli.format);
    if let (Some(path), true) = (&entry, report.ok) {
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("cache: could not write {}: {e}", path.display());
        }
    }
    Ok((text, report.ok))
}

fn emit_error(kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": kind, "message": message }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            emit_error("usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    if let Some(k) = cli.jobs {
        if k == 0 {
            emit_error("validation", "--jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            emit_error("internal", &e.to_string());
            return ExitCode::from(3);
        }
    }
    let (text, ok) = match produce(&cli) {
        Ok(x) => x,
        Err(Failure::Validation(m)) => {
            emit_error("validation", &m);
            return ExitCode::from(2);
        }
        Err(Failure::Internal(m)) => {
            emit_error("internal", &m);
            return ExitCode::from(3);
        }
    };
    if let Some(golden) = &cli.golden {
        if cli.update_golden {
            if let Err(e) = std::fs::write(golden, &text) {
                emit_error("io", &format!("{}: {e}", golden.display()));
                return ExitCode::from(2);
            }
        } else {
            match std::fs::read_to_string(golden) {
                Ok(expected) if expected == text => {}
                Ok(_) => {
                    emit_error("golden-mismatch", &format!("output differs from {}", golden.display()));
                    return ExitCode::from(1);
                }
                Err(e) => {
                    emit_error("io", &format!("{}: {e}", golden.display()));
                    return ExitCode::from(2);
                }
            }
        }
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                emit_error("io", &format!("{}: {e}", path.display()));
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
