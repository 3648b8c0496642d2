//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 the property holds, 1 a counterexample or hole was found,
//! 2 inconclusive or stopped by the budget, 3 usage, configuration or input
//! error, 4 an internal guarantee failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cyclic_lattice::basis::{c_basis, z_basis};
use cyclic_lattice::facets::{brute_force_facets, enumerate_facets, oriented_facets, BRUTE_FORCE_MAX_N};
use cyclic_lattice::lattice::{enumerate_points, sample_lattice_point, DEFAULT_SAMPLE_RETRIES};
use cyclic_lattice::normality::general::{LatticeSimplex, SimplexVerdict};
use cyclic_lattice::normality::{
    default_m_max, full_decompose, idp_check, normality_via_covering, validate_certificate, CoveringVerdict,
};
use cyclic_lattice::spec_file::read_spec;
use cyclic_lattice::veryample::{
    very_ample_obstruction, verify_witness, vertex_local_certify, LevelStatus, DEFAULT_K_MAX,
};
use cyclic_lattice::{
    CyclicPolytope, Error, IdpVerdict, IntegerVector, LatticeIndex, LocalCertificate, PolytopeSpec, DEFAULT_BUDGET,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::output::{self, join, to_value, Format, Rendered, Table};
use crate::sweep::{run_sweep, CheckKind, NormalityOutcome, SweepSpec};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV: &str = "CLL_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "cll", version, about = "Lattice-point experiments on cyclic polytopes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Polytope spec file `{"d": .., "tau": [..]}`.
    #[arg(long, global = true, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    /// Dimension, for an inline spec or a sweep.
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// Comma-separated parameters, for an inline spec.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Option<Vec<String>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Enumeration budget; defaults to $CLL_BUDGET, then 10^7.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Highest degree checked for decompositions.
    #[arg(long, global = true)]
    pub m_max: Option<u32>,
    /// Highest dilation level checked for witnesses.
    #[arg(long, global = true)]
    pub k_max: Option<u32>,
    /// Run the decomposition algorithm without its gap hypothesis.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Facets by Gale's evenness condition, with oriented forms.
    Facets {
        /// Also compare against the brute-force facet search.
        #[arg(long)]
        check: bool,
    },
    /// Lattice points of the dilate m P*.
    Points {
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        count_only: bool,
    },
    /// The b-vector lattice basis for an index order.
    Basis {
        /// Comma-separated vertex order; defaults to 1..d+1.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// `z` for the unimodular basis, `c` for the chain inside P*.
        #[arg(long, default_value = "z")]
        kind: String,
    },
    /// Normality of a cyclic polytope.
    NormalCheck {
        /// Check every (d+1)-vertex sub-simplex instead.
        #[arg(long)]
        covering: bool,
    },
    /// Integer decomposition property, for a cyclic polytope or for the
    /// simplex given by `--vertices`.
    IdpCheck {
        /// JSON list of vertex coordinates, e.g. `[[0,0],[1,0],[0,1]]`.
        #[arg(long)]
        vertices: Option<String>,
    },
    /// Write a lattice point of m P* as a sum of m points of P*.
    Decompose {
        /// Comma-separated homogenized point (degree first).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "sample_m")]
        point: Option<Vec<String>>,
        /// Decompose a seeded sample of degree M instead.
        #[arg(long)]
        sample_m: Option<u32>,
    },
    /// Search for a witness against very ampleness.
    VeryAmpleCheck {
        /// Certify each vertex monoid up to this degree when no witness exists.
        #[arg(long)]
        local_bound: Option<u32>,
    },
    /// Build the witness, or verify a supplied one.
    Witness {
        /// Comma-separated degree-0 vector.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "vertex")]
        p: Option<Vec<String>>,
        /// Base vertex for a supplied witness.
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Exhaustive sweep over tau_1 = 0 < ... < tau_n <= tau_max.
    Sweep {
        #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
        n: Option<usize>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        tau_max: i64,
        #[arg(long, default_value = "normality")]
        check: CheckKind,
        /// Degree bound for vertex monoid certification.
        #[arg(long, default_value_t = 2)]
        local_bound: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Facets { .. } => "facets",
            Command::Points { .. } => "points",
            Command::Basis { .. } => "basis",
            Command::NormalCheck { .. } => "normal-check",
            Command::IdpCheck { .. } => "idp-check",
            Command::Decompose { .. } => "decompose",
            Command::VeryAmpleCheck { .. } => "very-ample-check",
            Command::Witness { .. } => "witness",
            Command::Sweep { .. } => "sweep",
        }
    }
}

/// Failure of a command before or while computing its result.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::InstanceTooLarge { .. } | Error::SamplingExhausted { .. } => EXIT_INCONCLUSIVE,
                Error::GuaranteeViolated(_) | Error::PostconditionFailed(_) => EXIT_INTERNAL,
                _ => EXIT_USAGE,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_INCONCLUSIVE => "guarded",
            EXIT_INTERNAL => "internal",
            _ => "input",
        }
    }
}

struct Settings {
    budget: u64,
    seed: u64,
    m_max: Option<u32>,
    k_max: u32,
    force: bool,
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, CliError> {
    let b = match flag {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={s:?} is not a budget")))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    if b == 0 {
        return Err(CliError::Usage("the budget must be positive".into()));
    }
    Ok(b)
}

fn parse_ints(xs: &[String]) -> Result<Vec<BigInt>, CliError> {
    xs.iter()
        .map(|s| BigInt::from_str(s.trim()).map_err(|_| CliError::Usage(format!("not an integer: {s:?}"))))
        .collect()
}

fn load_spec(g: &GlobalArgs) -> Result<PolytopeSpec, CliError> {
    match (&g.spec, &g.tau) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --spec or --tau, not both".into())),
        (Some(path), None) => Ok(read_spec(path)?),
        (None, Some(tau)) => {
            let d = g.d.ok_or_else(|| CliError::Usage("--tau needs --d".into()))?;
            Ok(PolytopeSpec { d, tau: parse_ints(tau)? })
        }
        (None, None) => Err(CliError::Usage("a polytope is required: --spec FILE or --d D --tau LIST".into())),
    }
}

fn spec_input(spec: &PolytopeSpec) -> Value {
    to_value(spec)
}

fn with_fields(mut v: Value, extra: Value) -> Value {
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

/// Result plus exit code for one command.
struct Outcome {
    input: Value,
    rendered: Rendered,
    exit: i32,
}

/// Parses `args` (program name first), runs the command and writes the
/// report. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let name = cli.command.name();
    let start = Instant::now();
    let result = match cli.global.threads {
        Some(0) => Err((Value::Null, CliError::Usage("--threads must be positive".into()))),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err((Value::Null, CliError::Usage(format!("thread pool: {e}")))),
        },
        None => execute(&cli),
    };
    let elapsed = start.elapsed().as_millis();
    let format = cli.global.format;
    let written = match result {
        Ok(o) => emit(out, format, name, &o, elapsed).map(|_| o.exit),
        Err((input, e)) => {
            let _ = writeln!(err, "cll {name}: {e}");
            let code = e.exit_code();
            let body = json!({"kind": e.kind(), "exit_code": code, "message": e.to_string()});
            let r = match format {
                Format::Json => output::write_json(out, &output::envelope(name, &input, None, Some(&body), elapsed)),
                _ => Ok(()),
            };
            r.map(|_| code)
        }
    };
    match written {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "cll {name}: cannot write output: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(out: &mut dyn Write, format: Format, name: &str, o: &Outcome, elapsed: u128) -> std::io::Result<()> {
    match format {
        Format::Json => output::write_json(
            out,
            &output::envelope(name, &o.input, Some(&o.rendered.result), None, elapsed),
        ),
        Format::Csv => output::write_csv(out, &o.rendered.table),
        Format::Text => write!(out, "{}", o.rendered.text),
    }
}

type Exec = Result<Outcome, (Value, CliError)>;

fn execute(cli: &Cli) -> Exec {
    let g = &cli.global;
    let settings = resolve_budget(g.budget)
        .map(|budget| Settings {
            budget,
            seed: g.seed,
            m_max: g.m_max,
            k_max: g.k_max.unwrap_or(DEFAULT_K_MAX),
            force: g.force,
        })
        .map_err(|e| (Value::Null, e))?;
    if settings.k_max == 0 || settings.m_max == Some(0) {
        return Err((Value::Null, CliError::Usage("--k-max and --m-max must be positive".into())));
    }
    match &cli.command {
        Command::Sweep {
            n,
            n_min,
            n_max,
            tau_max,
            check,
            local_bound,
        } => sweep(g, &settings, *n, *n_min, *n_max, *tau_max, *check, *local_bound),
        Command::IdpCheck { vertices: Some(v) } => {
            let input = json!({"vertices": v});
            general_simplex(v, &settings).map_err(|e| (input, e))
        }
        cmd => {
            let spec = load_spec(g).map_err(|e| (Value::Null, e))?;
            let input = spec_input(&spec);
            let p = spec.polytope().map_err(|e| (input.clone(), e.into()))?;
            cyclic_command(cmd, &p, &settings, input.clone()).map_err(|e| (input, e))
        }
    }
}

fn cyclic_command(cmd: &Command, p: &CyclicPolytope, s: &Settings, input: Value) -> Result<Outcome, CliError> {
    let (extra, rendered, exit) = match cmd {
        Command::Facets { check } => facets(p, *check)?,
        Command::Points { m, count_only } => points(p, *m, *count_only, s)?,
        Command::Basis { order, kind } => basis(p, order.as_deref(), kind)?,
        Command::NormalCheck { covering } => normal_check(p, *covering, s)?,
        Command::IdpCheck { vertices: None } => normal_check(p, false, s)?,
        Command::Decompose { point, sample_m } => decompose(p, point.as_deref(), *sample_m, s)?,
        Command::VeryAmpleCheck { local_bound } => very_ample_check(p, *local_bound, s)?,
        Command::Witness { p: w, vertex } => witness(p, w.as_deref(), *vertex, s)?,
        Command::IdpCheck { vertices: Some(_) } | Command::Sweep { .. } => unreachable!("dispatched earlier"),
    };
    Ok(Outcome {
        input: with_fields(input, extra),
        rendered,
        exit,
    })
}

type Step = (Value, Rendered, i32);

fn facets(p: &CyclicPolytope, check: bool) -> Result<Step, CliError> {
    let facets = oriented_facets(p);
    let mut table = Table::new(&["facet", "orientation"]);
    let mut text = format!("{} facets\n", facets.len());
    for f in &facets {
        table.push(vec![join(f.set.indices()), f.orientation.to_string()]);
        text.push_str(&format!("{{{}}} orientation {:+}\n", join(f.set.indices()), f.orientation));
    }
    let mut result = json!({"count": facets.len(), "facets": to_value(&facets)});
    let mut exit = EXIT_HOLDS;
    if check {
        if p.n() > BRUTE_FORCE_MAX_N {
            return Err(Error::InstanceTooLarge {
                what: "brute-force facet search".into(),
                predicted: p.n() as u128,
                budget: BRUTE_FORCE_MAX_N as u64,
            }
            .into());
        }
        let agrees = brute_force_facets(p)? == enumerate_facets(p);
        result["brute_force_agrees"] = json!(agrees);
        text.push_str(&format!("brute force agrees: {agrees}\n"));
        if !agrees {
            exit = EXIT_COUNTEREXAMPLE;
        }
    }
    Ok((json!({"check": check}), Rendered { result, table, text }, exit))
}

fn points(p: &CyclicPolytope, m: u32, count_only: bool, s: &Settings) -> Result<Step, CliError> {
    let set = enumerate_points(p, m, s.budget)?;
    let mut table = Table::new(&["m", "point"]);
    let mut text = format!("{} lattice points in {m} P*\n", set.count());
    let result = if count_only {
        table = Table::new(&["m", "count"]);
        table.push(vec![m.to_string(), set.count().to_string()]);
        json!({"m": m, "count": set.count()})
    } else {
        for x in &set.points {
            table.push(vec![m.to_string(), join(x.coords())]);
            text.push_str(&format!("{x}\n"));
        }
        json!({"m": m, "count": set.count(), "points": to_value(&set.points)})
    };
    Ok((json!({"m": m}), Rendered { result, table, text }, EXIT_HOLDS))
}

fn basis(p: &CyclicPolytope, order: Option<&[usize]>, kind: &str) -> Result<Step, CliError> {
    let order: Vec<usize> = order.map(<[usize]>::to_vec).unwrap_or_else(|| (1..=p.width()).collect());
    let b = match kind {
        "z" => z_basis(p, &order)?,
        "c" => c_basis(p, &order)?,
        other => return Err(CliError::Usage(format!("--kind must be z or c, not {other:?}"))),
    };
    let det = b.determinant();
    let mut table = Table::new(&["row", "vector"]);
    let mut text = format!("{kind}-basis for order {}, determinant {det}\n", join(&order));
    for (i, v) in b.vectors.iter().enumerate() {
        table.push(vec![(i + 1).to_string(), join(v.coords())]);
        text.push_str(&format!("{v}\n"));
    }
    let result = json!({"basis": to_value(&b), "determinant": cyclic_lattice::arith::bigint_to_json(&det)});
    Ok((json!({"order": order, "kind": kind}), Rendered { result, table, text }, EXIT_HOLDS))
}

fn hole_cells(h: Option<&cyclic_lattice::HoleReport>) -> (String, String) {
    match h {
        Some(h) => (h.m.to_string(), join(h.alpha.coords())),
        None => (String::new(), String::new()),
    }
}

fn normal_check(p: &CyclicPolytope, covering: bool, s: &Settings) -> Result<Step, CliError> {
    let m_max = s.m_max.unwrap_or_else(|| default_m_max(p.d()));
    let input = json!({"m_max": m_max, "covering": covering});
    if covering {
        let v = normality_via_covering(p, Some(m_max), s.budget)?;
        let (verdict, exit, detail) = match &v {
            CoveringVerdict::Verified { simplices } => ("verified", EXIT_HOLDS, format!("{simplices} sub-simplices normal")),
            CoveringVerdict::Inconclusive { failing } => (
                "inconclusive",
                EXIT_INCONCLUSIVE,
                format!("{} sub-simplices have holes", failing.len()),
            ),
        };
        let mut table = Table::new(&["verdict", "detail"]);
        table.push(vec![verdict.into(), detail.clone()]);
        let text = format!("{verdict}: {detail}\n");
        return Ok((input, Rendered { result: to_value(&v), table, text }, exit));
    }
    let v = idp_check(p, Some(m_max), s.budget)?;
    let (verdict, exit) = match &v {
        IdpVerdict::Normal { .. } => ("normal", EXIT_HOLDS),
        IdpVerdict::Hole { .. } => ("hole", EXIT_COUNTEREXAMPLE),
    };
    let (hm, ha) = hole_cells(v.hole());
    let mut table = Table::new(&["verdict", "m_max", "hole_degree", "hole"]);
    table.push(vec![verdict.into(), m_max.to_string(), hm, ha]);
    let text = match v.hole() {
        Some(h) => format!("hole at degree {}: {}\n", h.m, h.alpha),
        None => format!("normal: every lattice point up to degree {m_max} decomposes\n"),
    };
    Ok((input, Rendered { result: to_value(&v), table, text }, exit))
}

fn general_simplex(vertices: &str, s: &Settings) -> Result<Outcome, CliError> {
    let pts: Vec<Vec<i64>> = serde_json::from_str(vertices)
        .map_err(|e| CliError::Usage(format!("--vertices must be a JSON list of integer points: {e}")))?;
    let simplex = LatticeSimplex::new(&pts)?;
    let m_max = s.m_max.unwrap_or_else(|| default_m_max(simplex.dim()));
    let report = simplex.report(m_max, s.budget)?;
    let exit = if report.full.is_normal() {
        EXIT_HOLDS
    } else {
        EXIT_COUNTEREXAMPLE
    };
    let index = match &report.lattice_index {
        LatticeIndex::Finite(k) => k.to_string(),
        LatticeIndex::Infinite => "infinite".into(),
    };
    let mut table = Table::new(&["ambient", "lattice_index", "verdict", "hole_degree", "hole"]);
    let mut text = format!("lattice index {index}\n");
    let mut row = |ambient: &str, v: &SimplexVerdict| {
        let (verdict, h) = match v {
            SimplexVerdict::Normal { .. } => ("normal", None),
            SimplexVerdict::Hole { hole } => ("hole", Some(hole)),
        };
        let (hm, ha) = hole_cells(h);
        text.push_str(&match h {
            Some(h) => format!("{ambient}: hole at degree {}: {}\n", h.m, h.alpha),
            None => format!("{ambient}: normal up to degree {m_max}\n"),
        });
        table.push(vec![ambient.into(), index.clone(), verdict.into(), hm, ha]);
    };
    row("full", &report.full);
    if let Some(g) = &report.generated {
        row("generated", g);
    }
    Ok(Outcome {
        input: json!({"vertices": pts, "m_max": m_max}),
        rendered: Rendered {
            result: to_value(&report),
            table,
            text,
        },
        exit,
    })
}

fn decompose(p: &CyclicPolytope, point: Option<&[String]>, sample_m: Option<u32>, s: &Settings) -> Result<Step, CliError> {
    let (alpha, input) = match (point, sample_m) {
        (Some(xs), None) => {
            let a = IntegerVector(parse_ints(xs)?);
            let input = json!({"point": to_value(&a)});
            (a, input)
        }
        (None, Some(m)) => {
            let a = sample_lattice_point(p, m, s.seed, DEFAULT_SAMPLE_RETRIES)?;
            (a, json!({"sample_m": m, "seed": s.seed}))
        }
        _ => return Err(CliError::Usage("decompose needs --point LIST or --sample-m M".into())),
    };
    let input = with_fields(input, json!({"force": s.force}));
    let cert = full_decompose(p, &alpha, s.force)?;
    validate_certificate(p, &cert)?;
    let mut table = Table::new(&["part", "point"]);
    let mut text = format!("{} =\n", cert.alpha);
    for (i, x) in cert.parts.iter().enumerate() {
        table.push(vec![(i + 1).to_string(), join(x.coords())]);
        text.push_str(&format!("  + {x}\n"));
    }
    Ok((input, Rendered { result: to_value(&cert), table, text }, EXIT_HOLDS))
}

fn witness_rendered(fam: &cyclic_lattice::WitnessFamily) -> (Table, String) {
    let mut table = Table::new(&["k", "q", "status"]);
    let mut text = format!(
        "witness p = {} at vertex {}, holes at k = {}\n",
        fam.p,
        fam.base_vertex,
        join(&fam.verified_k)
    );
    for l in &fam.levels {
        let status = match &l.status {
            LevelStatus::Hole => "hole",
            LevelStatus::OutsideDilate => "outside_dilate",
            LevelStatus::Decomposes { .. } => "decomposes",
        };
        table.push(vec![l.k.to_string(), join(l.q.coords()), status.into()]);
        text.push_str(&format!("  k = {}: {} {status}\n", l.k, l.q));
    }
    (table, text)
}

fn very_ample_check(p: &CyclicPolytope, local_bound: Option<u32>, s: &Settings) -> Result<Step, CliError> {
    let input = json!({"k_max": s.k_max, "local_bound": local_bound});
    if p.d() >= 4 {
        if let Some(fam) = very_ample_obstruction(p, s.k_max, s.budget)? {
            let (table, text) = witness_rendered(&fam);
            let result = json!({"verdict": "witness", "witness": to_value(&fam)});
            return Ok((input, Rendered { result, table, text }, EXIT_COUNTEREXAMPLE));
        }
    }
    let Some(bound) = local_bound else {
        let mut table = Table::new(&["verdict"]);
        table.push(vec!["no_witness".into()]);
        let text = "no witness; pass --local-bound to certify vertex monoids\n".to_string();
        return Ok((input, Rendered { result: json!({"verdict": "no_witness"}), table, text }, EXIT_INCONCLUSIVE));
    };
    let certs = (1..=p.n())
        .map(|i| vertex_local_certify(p, i, bound, s.budget))
        .collect::<cyclic_lattice::Result<Vec<_>>>()?;
    let mut table = Table::new(&["vertex", "verdict", "k", "w"]);
    let mut text = String::new();
    let mut all = true;
    for (i, c) in certs.iter().enumerate() {
        let v = i + 1;
        match c {
            LocalCertificate::CertifiedUpTo { bound } => {
                table.push(vec![v.to_string(), "certified".into(), bound.to_string(), String::new()]);
                text.push_str(&format!("vertex {v}: certified up to degree {bound}\n"));
            }
            LocalCertificate::HoleFound { k, w } => {
                all = false;
                table.push(vec![v.to_string(), "hole".into(), k.to_string(), join(w.coords())]);
                text.push_str(&format!("vertex {v}: hole {w} at degree {k}\n"));
            }
        }
    }
    let verdict = if all { "locally_certified" } else { "local_hole" };
    let result = json!({"verdict": verdict, "vertices": to_value(&certs)});
    let exit = if all { EXIT_HOLDS } else { EXIT_COUNTEREXAMPLE };
    Ok((input, Rendered { result, table, text }, exit))
}

fn witness(p: &CyclicPolytope, w: Option<&[String]>, vertex: Option<usize>, s: &Settings) -> Result<Step, CliError> {
    let input = json!({"k_max": s.k_max});
    let fam = match (w, vertex) {
        (Some(xs), Some(i)) => {
            let w = IntegerVector(parse_ints(xs)?);
            let input = with_fields(input, json!({"p": to_value(&w), "vertex": i}));
            match verify_witness(p, &w, i, s.k_max, s.budget) {
                Ok(f) => return Ok(witness_step(input, &f)),
                Err(Error::WitnessRefuted(why)) => {
                    let mut table = Table::new(&["verdict", "reason"]);
                    table.push(vec!["refuted".into(), why.clone()]);
                    let text = format!("refuted: {why}\n");
                    let result = json!({"verdict": "refuted", "reason": why});
                    return Ok((input, Rendered { result, table, text }, EXIT_INCONCLUSIVE));
                }
                Err(e) => return Err(e.into()),
            }
        }
        (None, None) => very_ample_obstruction(p, s.k_max, s.budget)?,
        _ => return Err(CliError::Usage("--p and --vertex go together".into())),
    };
    match fam {
        Some(f) => Ok(witness_step(input, &f)),
        None => {
            let mut table = Table::new(&["verdict", "reason"]);
            table.push(vec!["none".into(), "no interior unit gap".into()]);
            let result = json!({"verdict": "none"});
            Ok((input, Rendered { result, table, text: "no witness construction applies\n".into() }, EXIT_INCONCLUSIVE))
        }
    }
}

fn witness_step(input: Value, fam: &cyclic_lattice::WitnessFamily) -> Step {
    let (table, text) = witness_rendered(fam);
    let result = json!({"verdict": "witness", "witness": to_value(fam)});
    (input, Rendered { result, table, text }, EXIT_COUNTEREXAMPLE)
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    g: &GlobalArgs,
    s: &Settings,
    n: Option<usize>,
    n_min: Option<usize>,
    n_max: Option<usize>,
    tau_max: i64,
    check: CheckKind,
    local_bound: u32,
) -> Exec {
    let d = g.d.ok_or_else(|| (Value::Null, CliError::Usage("sweep needs --d".into())))?;
    let (lo, hi) = match (n, n_min, n_max) {
        (Some(n), _, _) => (n, n),
        (None, lo, hi) => {
            let lo = lo.unwrap_or(d + 1);
            (lo, hi.unwrap_or(lo))
        }
    };
    let spec = SweepSpec {
        d,
        n_min: lo,
        n_max: hi,
        tau_max,
        check,
        budget: s.budget,
        seed: s.seed,
        m_max: s.m_max,
        k_max: s.k_max,
        local_bound,
    };
    let input = to_value(&spec);
    let report = run_sweep(&spec).map_err(|e| (input.clone(), e.into()))?;
    let mut table = Table::new(&["tau", "mirror_tau", "interior_unit_gap", "verdict", "witness", "error"]);
    for r in &report.instances {
        let verdict = match &r.normality {
            Some(NormalityOutcome::Normal) => "normal",
            Some(NormalityOutcome::Hole { .. }) => "hole",
            Some(NormalityOutcome::Guarded { .. }) => "guarded",
            None => "",
        };
        table.push(vec![
            join(&r.tau),
            join(&r.mirror_tau),
            r.interior_unit_gap.to_string(),
            verdict.into(),
            r.witness.is_some().to_string(),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    let t = &report.totals;
    let mut text = format!(
        "{} instances: {} normal, {} holes, {} witnesses, {} guarded, {} errors\n{} counterexamples\n",
        t.instances, t.normal, t.holes, t.witnesses, t.guarded, t.errors, t.counterexamples
    );
    for c in &report.counterexamples {
        text.push_str(&format!("  tau = ({}): {}\n", join(&c.tau), c.reason));
    }
    let exit = if t.counterexamples > 0 {
        EXIT_COUNTEREXAMPLE
    } else if t.guarded > 0 || t.errors > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_HOLDS
    };
    Ok(Outcome {
        input,
        rendered: Rendered {
            result: to_value(&report),
            table,
            text,
        },
        exit,
    })
}
