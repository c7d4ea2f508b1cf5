//! `sltrace`: build the matrices of a triangulated surface, verify their
//! identities, and compute quantum traces of stated arcs.
//!
//! Exit codes: 0 on success, 1 when a verification fails (the JSON report is
//! still printed), 2 on bad input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sltrace::par::{self, Exec};
use sltrace::qmatrix::QMatrix;
use sltrace::qtrace::{
    compatible_paths, exchange_relation_check, factorization_check, frame_checks, path_exponent, projection_pr,
    quantum_matrix_checks, trace_a, trace_arc, trace_corner, trace_g, transport_matrix, Braiding, Orientation,
    RelationCheck, SimpleArcSpec, StatedCornerArc, SurfaceContext,
};
use sltrace::structmat::{matrix_json, BalancedLattice, Report, SurfaceMatrices};
use sltrace::surface::{triangle_points, TriangulatedSurface};
use sltrace::{Error, TorusElement};

#[derive(Parser, Debug)]
#[command(
    name = "sltrace",
    version,
    about = "Exact SL_n quantum traces on triangulated surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Surface JSON (`{"faces":[..],"gluings":[..],"n":..}`); defaults to the triangle.
    #[arg(long, global = true)]
    surface: Option<PathBuf>,
    /// Rank n; overrides the surface file's `n`.
    #[arg(long, global = true)]
    n: Option<i64>,
    #[arg(long, value_enum, default_value_t = Out::Json, global = true)]
    out: Out,
    /// Worker threads (0 = rayon's default).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
    /// Run every fan-out sequentially.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Out {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Oriented {
    Ccw,
    Cw,
}

impl From<Oriented> for Orientation {
    fn from(o: Oriented) -> Self {
        match o {
            Oriented::Ccw => Orientation::Ccw,
            Oriented::Cw => Orientation::Cw,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Matrices,
    ChekhovShapiro,
    Frame,
    All,
}

#[derive(Args, Debug, Clone)]
struct CornerArgs {
    #[arg(long, default_value_t = 1)]
    corner: u8,
    #[arg(long, value_enum, default_value_t = Oriented::Ccw)]
    oriented: Oriented,
    #[arg(long)]
    i: usize,
    #[arg(long)]
    j: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print Q, P, K, H (reduced and extended).
    Matrices {
        #[command(flatten)]
        common: Common,
    },
    /// Check the matrix identities (and optionally the trace suites).
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Suite::Matrices)]
        suite: Suite,
    },
    /// Test whether an exponent vector is balanced.
    Balanced {
        #[command(flatten)]
        common: Common,
        /// JSON object `{vertex id: exponent}`; missing ids are 0.
        #[arg(long)]
        vector: String,
        /// Use the extended vertex set V_λ.
        #[arg(long)]
        extended: bool,
    },
    /// List the compatible paths of a corner arc.
    Paths {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        arc: CornerArgs,
    },
    /// X-trace of a stated corner arc of the triangle.
    Corner {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        arc: CornerArgs,
    },
    /// A transport matrix M_m (ccw) or M̄_m (cw).
    Transport {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        corner: u8,
        #[arg(long, value_enum, default_value_t = Oriented::Ccw)]
        oriented: Oriented,
    },
    /// Trace of a simple stated arc on the surface.
    Arc {
        #[command(flatten)]
        common: Common,
        /// Arc JSON file.
        #[arg(long)]
        arc: PathBuf,
        /// Trace on the extended surface.
        #[arg(long)]
        extended: bool,
        /// Apply pr to the extended trace.
        #[arg(long)]
        project: bool,
        /// Return the A-trace instead of the X-trace.
        #[arg(long)]
        a_trace: bool,
    },
    /// Traces of the frame elements g_v.
    Frame {
        #[command(flatten)]
        common: Common,
        /// A single vertex id; all vertices when omitted.
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long)]
        extended: bool,
        #[arg(long)]
        a_trace: bool,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Matrices { common }
            | Command::Verify { common, .. }
            | Command::Balanced { common, .. }
            | Command::Paths { common, .. }
            | Command::Corner { common, .. }
            | Command::Transport { common, .. }
            | Command::Arc { common, .. }
            | Command::Frame { common, .. } => common,
        }
    }
}

/// What a command produced: a JSON value, its text rendering, and whether a
/// verification failed.
struct Output {
    json: Value,
    text: String,
    failed: bool,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            failed: false,
        }
    }
}

fn load_surface(c: &Common) -> Result<(TriangulatedSurface, i64), Error> {
    let (s, file_n) = match &c.surface {
        None => (TriangulatedSurface::triangle(), None),
        Some(path) => {
            let raw = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&raw).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            TriangulatedSurface::from_json(&v)?
        }
    };
    let n =
        c.n.or(file_n)
            .ok_or_else(|| Error::Parse("n is required (--n or an `n` field in the surface file)".into()))?;
    if n < 2 {
        return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
    }
    Ok((s, n))
}

fn require_n(c: &Common) -> Result<i64, Error> {
    load_surface(c).map(|(_, n)| n)
}

fn exec(c: &Common) -> Exec {
    if c.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn element_text(e: &TorusElement) -> String {
    e.to_string()
}

fn qmatrix_json(m: &QMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| Value::Array((0..m.cols()).map(|c| m.get(r, c).to_json()).collect()))
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": rows })
}

fn qmatrix_text(m: &QMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push_str(&format!("[{},{}] {}\n", r + 1, c + 1, m.get(r, c)));
        }
    }
    out
}

fn relation_json(c: &RelationCheck) -> Value {
    json!({ "name": c.name, "passed": c.passed(), "checked": c.checked, "failures": c.failures })
}

fn report_text(lines: &mut String, r: &Report) {
    for c in &r.checks {
        match &c.counterexample {
            None => lines.push_str(&format!("PASS {}\n", c.name)),
            Some(x) => lines.push_str(&format!(
                "FAIL {} at ({}, {}): expected {}, got {}\n",
                c.name, x.row, x.col, x.expected, x.got
            )),
        }
    }
}

fn relations_text(lines: &mut String, rs: &[RelationCheck]) {
    for c in rs {
        if c.passed() {
            lines.push_str(&format!("PASS {} ({} checked)\n", c.name, c.checked));
        } else {
            lines.push_str(&format!("FAIL {} at {:?}\n", c.name, c.failures[0]));
        }
    }
}

fn run(cmd: &Command) -> Result<Output, Error> {
    match cmd {
        Command::Matrices { common } => {
            let (s, n) = load_surface(common)?;
            let m = SurfaceMatrices::new_with(&s, n, exec(common))?;
            let r = &m.reduced;
            let ids = r.ids();
            let (x, a) = (m.x_ids(), m.a_ids());
            let json = json!({
                "n": n,
                "reduced": {
                    "ids": ids,
                    "Q": matrix_json(&r.q, ids, ids),
                    "P": matrix_json(&r.p, ids, ids),
                    "K": matrix_json(&r.k, ids, ids),
                    "H": matrix_json(&r.h, ids, ids),
                },
                "extended": {
                    "x_ids": x,
                    "a_ids": a,
                    "Q": matrix_json(&m.q, &x, &x),
                    "P": matrix_json(&m.p, &a, &a),
                    "K": matrix_json(&m.k, &a, &x),
                    "H": matrix_json(&m.h, &x, &a),
                },
            });
            let text = format!(
                "n = {n}\nreduced vertices: {}\nextended X vertices: {}\nextended A vertices: {}\n",
                ids.len(),
                x.len(),
                a.len()
            );
            Ok(Output::ok(json, text))
        }
        Command::Verify { common, suite } => {
            let (s, n) = load_surface(common)?;
            let ex = exec(common);
            let mut json = serde_json::Map::new();
            let mut text = String::new();
            let mut failed = false;
            if matches!(suite, Suite::Matrices | Suite::All) {
                let report = SurfaceMatrices::new_with(&s, n, ex)?.verify_with(ex);
                failed |= !report.all_passed();
                report_text(&mut text, &report);
                json.insert("matrices".into(), serde_json::to_value(&report).expect("plain data"));
            }
            if matches!(suite, Suite::ChekhovShapiro | Suite::All) {
                let mut rs = quantum_matrix_checks(n, ex)?;
                rs.push(exchange_relation_check(n, Braiding::Fundamental, ex)?);
                rs.push(factorization_check(n, ex)?);
                failed |= rs.iter().any(|c| !c.passed());
                relations_text(&mut text, &rs);
                json.insert(
                    "chekhov_shapiro".into(),
                    Value::Array(rs.iter().map(relation_json).collect()),
                );
            }
            if matches!(suite, Suite::Frame | Suite::All) {
                let rs = frame_checks(n, ex)?;
                failed |= rs.iter().any(|c| !c.passed());
                relations_text(&mut text, &rs);
                json.insert("frame".into(), Value::Array(rs.iter().map(relation_json).collect()));
            }
            json.insert("passed".into(), Value::Bool(!failed));
            Ok(Output {
                json: Value::Object(json),
                text,
                failed,
            })
        }
        Command::Balanced {
            common,
            vector,
            extended,
        } => {
            let (s, n) = load_surface(common)?;
            let lattice = if *extended {
                BalancedLattice::extended(&SurfaceMatrices::new_with(&s, n, exec(common))?)
            } else {
                BalancedLattice::reduced(&s, n)?
            };
            let map: std::collections::BTreeMap<String, i64> =
                serde_json::from_str(vector).map_err(|e| Error::Parse(format!("--vector: {e}")))?;
            let mut k = vec![0; lattice.dim()];
            for (id, x) in &map {
                let pos = lattice
                    .ids
                    .iter()
                    .position(|v| v == id)
                    .ok_or_else(|| Error::UnknownVertex(id.clone()))?;
                k[pos] = *x;
            }
            let by_faces = lattice.balanced_by_faces(&k);
            let by_h = lattice.balanced_by_h(&k);
            let span = lattice.in_row_span(&k);
            let c = lattice.solve(&k).ok();
            let json = json!({
                "balanced": by_h,
                "by_faces": by_faces,
                "by_h": by_h,
                "in_row_span": span,
                "a_exponent": c,
            });
            let text = format!("balanced: {by_h}\nby faces: {by_faces}\nby H: {by_h}\nin row span of K: {span}\n");
            Ok(Output::ok(json, text))
        }
        Command::Paths { common, arc } => {
            let n = require_n(common)?;
            let a = StatedCornerArc::new(n, arc.corner, arc.oriented.into(), arc.i, arc.j)?;
            let ids: Vec<String> = triangle_points(n)
                .iter()
                .map(|p| format!("f0({},{},{})", p[0], p[1], p[2]))
                .collect();
            let paths = compatible_paths(&a);
            let mut text = String::new();
            let list: Vec<Value> = paths
                .iter()
                .map(|p| {
                    let k = path_exponent(p);
                    let exp: std::collections::BTreeMap<&String, i64> = ids
                        .iter()
                        .zip(&k)
                        .filter(|(_, x)| **x != 0)
                        .map(|(id, x)| (id, *x))
                        .collect();
                    let steps: Vec<String> = p.steps.iter().map(|s| format!("{s:?}").to_lowercase()).collect();
                    text.push_str(&format!("{} | {:?}\n", steps.join(" "), exp));
                    json!({ "nodes": p.nodes, "steps": p.steps, "exp": exp })
                })
                .collect();
            if paths.is_empty() {
                text.push_str("no compatible paths\n");
            }
            Ok(Output::ok(
                json!({ "arc": a, "count": paths.len(), "paths": list }),
                text,
            ))
        }
        Command::Corner { common, arc } => {
            let n = require_n(common)?;
            let a = StatedCornerArc::new(n, arc.corner, arc.oriented.into(), arc.i, arc.j)?;
            let e = trace_corner(&a);
            Ok(Output::ok(e.to_json(), element_text(&e) + "\n"))
        }
        Command::Transport {
            common,
            corner,
            oriented,
        } => {
            let n = require_n(common)?;
            if !(1..=3).contains(corner) {
                return Err(Error::Parse(format!("corner must be 1, 2 or 3, got {corner}")));
            }
            let m = transport_matrix(n, *corner, (*oriented).into())?;
            Ok(Output::ok(qmatrix_json(&m), qmatrix_text(&m)))
        }
        Command::Arc {
            common,
            arc,
            extended,
            project,
            a_trace,
        } => {
            let (s, n) = load_surface(common)?;
            let raw = std::fs::read_to_string(arc)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", arc.display())))?;
            let v: Value = serde_json::from_str(&raw).map_err(|e| Error::Parse(format!("{}: {e}", arc.display())))?;
            let spec = SimpleArcSpec::from_json(&v)?;
            let ctx = SurfaceContext::new_with(&s, n, exec(common))?;
            let e = match (*a_trace, *project) {
                (true, true) => return Err(Error::Parse("--a-trace and --project are exclusive".into())),
                (true, false) => trace_a(&ctx, &spec, *extended)?,
                (false, true) => projection_pr(&ctx, &trace_arc(&ctx, &spec, true)?)?,
                (false, false) => trace_arc(&ctx, &spec, *extended)?,
            };
            Ok(Output::ok(e.to_json(), element_text(&e) + "\n"))
        }
        Command::Frame {
            common,
            vertex,
            extended,
            a_trace,
        } => {
            let (s, n) = load_surface(common)?;
            let ctx = SurfaceContext::new_with(&s, n, exec(common))?;
            let ids: Vec<String> = match vertex {
                Some(v) => vec![v.clone()],
                None if *extended => ctx.matrices.a_ids(),
                None => ctx.matrices.reduced.ids().to_vec(),
            };
            let mut json = serde_json::Map::new();
            let mut text = String::new();
            for id in &ids {
                let mut e = trace_g(&ctx, id, !*extended)?;
                if *a_trace {
                    e = if *extended {
                        ctx.extended.inverse(&e)?
                    } else {
                        ctx.reduced.inverse(&e)?
                    };
                }
                text.push_str(&format!("{id}: {e}\n"));
                json.insert(id.clone(), e.to_json());
            }
            Ok(Output::ok(Value::Object(json), text))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.command.common().clone();
    if let Err(e) = par::configure_threads(common.threads) {
        eprintln!("error: cannot configure threads: {e}");
        return ExitCode::from(2);
    }
    match run(&cli.command) {
        Ok(out) => {
            match common.out {
                Out::Json => println!("{}", serde_json::to_string(&out.json).expect("serializable")),
                Out::Text => print!("{}", out.text),
            }
            ExitCode::from(u8::from(out.failed))
        }
        Err(e @ Error::Internal(_)) => {
            println!("{}", json!({ "passed": false, "error": e.to_string() }));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
