//! Batch front end: one subcommand per library operation, JSON in, JSON out.

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::groupoid::{
    action_groupoid, cech_cohomology, coarse_moduli_compare, group_homology, FiniteGroupoid, GroupTable, GroupoidSpec,
};
use crate::hodge::{
    self, build_ku_stacky_triple, centralizer_algebra, check_strong_compatibility, endomorphism_decomposition,
    gamma_monoid, ipr_fiber, nilpotent_orbit_check, validate_hodge_with, validate_nilpotent_cone,
    verify_weight_filtration, weight_filtration, NilpotentCone, PolarizedHodgeData, PositivityConvention,
};
use crate::json::{
    bigint_to_value, complex_matrix_to_value, int_matrix_to_value, int_vectors_to_value, parse_rational,
    rat_matrix_to_value, rational_to_string, value_to_bigint, value_to_int_matrix, value_to_rat_matrix,
};
use crate::lattice::FgAbelianGroup;
use crate::linalg::{IntegerMatrix, RationalMatrix};
use crate::polyhedral::{
    distinguished_point, dual_cone, dual_hilbert_basis, fan_validate, hilbert_basis, is_smooth, orbit, star_fan, Cone,
    Fan, FanSpec,
};
use crate::report::Report;
use crate::stacky::{
    build_fantastack, dm_torus_validate, g_beta, validate_morphism, validate_stacky_fan, StackyFan, StackyMorphism,
};

#[derive(Parser, Debug)]
#[command(
    name = "stackyfan",
    version,
    about = "Exact computations with toric stacks, finite groupoids and nilpotent orbits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input file, or `-` for standard input.
    #[arg(long = "in", global = true, default_value = "-")]
    pub input: String,
    /// Also write a human-readable summary to standard error.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Highest degree for cohomology and homology.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    /// Comma-separated positive rationals; `:` separates the coordinates of one sample.
    #[arg(long, global = true, value_delimiter = ',')]
    pub y_samples: Option<Vec<String>>,
    /// Which argument of Q is conjugated in the positivity form.
    #[arg(long, global = true, value_enum)]
    pub convention: Option<ConventionArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    ConjugateFirst,
    ConjugateSecond,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Dual cone in the dual lattice.
    DualCone,
    /// Minimal generators of the cone's lattice points.
    HilbertBasis,
    /// All faces of a cone.
    Faces,
    /// Whether the cone is generated by part of a lattice basis.
    Smooth,
    /// Check that a collection of cones is a fan.
    FanValidate,
    /// Torus orbit of a cone in a fan.
    Orbit,
    /// Star fan of a cone in the quotient lattice.
    Star,
    /// Distinguished point of a cone.
    DistinguishedPoint,
    /// Check a stacky fan and report its cokernel.
    StackyValidate,
    /// Character group of the kernel torus of a stacky fan.
    GBeta,
    /// Check a morphism of stacky fans.
    MorphismValidate,
    /// Fantastack data: hat fan, irrelevant ideal and kernel group.
    Fantastack,
    /// Decompose a Deligne-Mumford torus as T x BG.
    DmTorus,
    /// Rational cohomology of a finite groupoid.
    GroupoidCohomology,
    /// Connected components with their automorphism groups.
    Decompose,
    /// Sum of 1/|Aut| over components.
    Mass,
    /// Integral homology of a finite group.
    GroupHomology,
    /// Compare groupoid cohomology with its coarse space.
    CoarseCompare,
    /// Check a polarized Hodge structure.
    HodgeValidate,
    /// Hodge decomposition of the endomorphism algebra.
    EndoDecompose,
    /// Horizontal tangent space at a Hodge filtration.
    Ipr,
    /// Check a cone of commuting nilpotent endomorphisms.
    ConeValidate,
    /// Weight filtration of a nilpotent endomorphism.
    WeightFiltration,
    /// Sample a nilpotent orbit along growing imaginary parts.
    OrbitCheck,
    /// Monoid of integral elements of exp(cone) and its toric chart.
    GammaMonoid,
    /// Strong compatibility of a fan with an arithmetic group sample.
    CompatCheck,
    /// Centralizer of a nilpotent cone in the form-preserving algebra.
    Centralizer,
    /// Toric data attached to a nilpotent cone.
    KuTriple,
}

impl Command {
    /// Looks up a subcommand by its command-line name.
    pub fn from_name(name: &str) -> Option<Command> {
        Cli::try_parse_from(["stackyfan", name]).ok().map(|c| c.command)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    InvalidInput,
    MathFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InvalidInput => 2,
            Status::MathFailure => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    /// Text for standard output in place of a payload (help, version).
    pub text: Option<String>,
    /// Human summary, present when `--pretty` was given.
    pub summary: Option<String>,
}

impl CommandResult {
    fn ok(payload: Value) -> Self {
        Self { status: Status::Ok, payload, diagnostics: Vec::new(), text: None, summary: None }
    }

    fn from_report(report: &Report, extra: Map<String, Value>) -> Self {
        let mut payload = serde_json::to_value(report).expect("report serializes");
        if let Value::Object(m) = &mut payload {
            m.extend(extra);
        }
        let status = if report.passed { Status::Ok } else { Status::MathFailure };
        let diagnostics = report.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        Self { status, payload, diagnostics, text: None, summary: None }
    }

    fn error(e: &Error) -> Self {
        let status = status_of(e);
        Self {
            status,
            payload: json!({ "error": e.to_string() }),
            diagnostics: vec![e.to_string()],
            text: None,
            summary: None,
        }
    }

    fn input(message: String) -> Self {
        Self::error(&Error::Input(message))
    }

    /// Serialized payload; keys are sorted, so equal results give equal bytes.
    pub fn payload_text(&self) -> String {
        serde_json::to_string(&self.payload).expect("JSON values serialize")
    }
}

/// Exit-code class of a library error: malformed or out-of-scope input is 2,
/// a mathematical condition that was checked and fails is 3.
pub fn status_of(e: &Error) -> Status {
    match e {
        Error::InfiniteCokernel { .. }
        | Error::FantastackPrecondition(_)
        | Error::InvalidHodge(_)
        | Error::NotNilpotent(_)
        | Error::NonIntegralExponential(_)
        | Error::NotInSpan(_) => Status::MathFailure,
        _ => Status::InvalidInput,
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub max_degree: Option<usize>,
    pub y_samples: Option<Vec<Vec<BigRational>>>,
    pub convention: PositivityConvention,
}

fn parse_y_samples(items: &[String]) -> Result<Vec<Vec<BigRational>>, String> {
    items.iter().map(|s| s.split(':').map(parse_rational).collect()).collect()
}

/// Parses the `--y-samples` syntax, e.g. `1/3,5` or `1:2,2:4`.
pub fn parse_y_sample_list(text: &str) -> Result<Vec<Vec<BigRational>>, String> {
    let items: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    parse_y_samples(&items)
}

/// Parses `argv` (including the program name), reads the input and dispatches.
pub fn run<I, S>(argv: I, stdin: &mut dyn Read) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    CommandResult { text: Some(rendered), ..CommandResult::ok(Value::Null) }
                }
                _ => CommandResult {
                    status: Status::InvalidInput,
                    payload: Value::Null,
                    diagnostics: vec![rendered],
                    text: None,
                    summary: None,
                },
            };
        }
    };
    let y_samples = match cli.y_samples.as_deref().map(parse_y_samples).transpose() {
        Ok(y) => y,
        Err(e) => return CommandResult::input(format!("--y-samples: {e}")),
    };
    let options = Options {
        max_degree: cli.max_degree,
        y_samples,
        convention: match cli.convention {
            Some(ConventionArg::ConjugateSecond) => PositivityConvention::ConjugateSecond,
            _ => PositivityConvention::ConjugateFirst,
        },
    };
    let mut raw = String::new();
    let read = if cli.input == "-" {
        stdin.read_to_string(&mut raw).map(|_| ())
    } else {
        std::fs::read_to_string(&cli.input).map(|s| raw = s)
    };
    if let Err(e) = read {
        return CommandResult::input(format!("cannot read {}: {e}", cli.input));
    }
    let mut result = execute_text(cli.command, &raw, &options);
    if cli.pretty {
        result.summary = Some(summarize(cli.command, &result));
    }
    result
}

/// Parses JSON text and dispatches; parse errors carry line and column.
pub fn execute_text(command: Command, input: &str, options: &Options) -> CommandResult {
    match serde_json::from_str::<Value>(input) {
        Ok(v) => execute(command, &v, options),
        Err(e) => CommandResult::input(format!("malformed JSON: {e}")),
    }
}

pub fn execute(command: Command, input: &Value, options: &Options) -> CommandResult {
    match dispatch(command, input, options) {
        Ok(r) => r,
        Err(e) => CommandResult::error(&e),
    }
}

fn summarize(command: Command, r: &CommandResult) -> String {
    let name = format!("{command:?}");
    let head = match r.status {
        Status::Ok => "ok",
        Status::InvalidInput => "invalid input",
        Status::MathFailure => "condition fails",
    };
    let mut out = format!("{name}: {head}\n");
    if let Some(checks) = r.payload.get("checks").and_then(Value::as_array) {
        for c in checks {
            let mark = if c["passed"].as_bool() == Some(true) { "ok" } else { "FAIL" };
            out.push_str(&format!(
                "  [{mark}] {}: {}\n",
                c["name"].as_str().unwrap_or(""),
                c["detail"].as_str().unwrap_or("")
            ));
        }
    } else {
        for d in &r.diagnostics {
            out.push_str(&format!("  {d}\n"));
        }
        if r.status == Status::Ok {
            out.push_str(&serde_json::to_string_pretty(&r.payload).unwrap_or_default());
            out.push('\n');
        }
    }
    out
}

type Res = crate::error::Result<CommandResult>;

fn field<'a>(v: &'a Value, key: &str) -> crate::error::Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Input(format!("missing {key:?}")))
}

fn input_err(e: String) -> Error {
    Error::Input(e)
}

fn usize_field(v: &Value, key: &str) -> crate::error::Result<Option<usize>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => x.as_u64().map(|n| Some(n as usize)).ok_or_else(|| Error::Input(format!("{key:?} must be a count"))),
    }
}

fn int_vectors(v: &Value) -> crate::error::Result<Vec<Vec<BigInt>>> {
    let rows = v.as_array().ok_or_else(|| Error::Input("expected a list of integer vectors".into()))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Input("vector must be an array".into()))?
                .iter()
                .map(|x| value_to_bigint(x).map_err(input_err))
                .collect()
        })
        .collect()
}

/// A cone is `{"ambient_rank": n, "generators": [...]}` or a bare nonempty list of generators.
pub fn parse_cone(v: &Value) -> crate::error::Result<Cone> {
    match v {
        Value::Array(_) => {
            let gens = int_vectors(v)?;
            let n = gens.first().map(Vec::len).ok_or_else(|| {
                Error::Input("a bare generator list must be nonempty; use {\"ambient_rank\", \"generators\"}".into())
            })?;
            Cone::new(n, gens)
        }
        Value::Object(_) => {
            let n = ["ambient_rank", "rank", "lattice_rank"]
                .iter()
                .find_map(|k| v.get(*k).and_then(Value::as_u64))
                .ok_or_else(|| Error::Input("cone needs \"ambient_rank\"".into()))? as usize;
            let gens = match v.get("generators") {
                Some(g) => int_vectors(g)?,
                None => Vec::new(),
            };
            Cone::new(n, gens)
        }
        _ => Err(Error::Input("expected a cone".into())),
    }
}

pub fn cone_to_json(c: &Cone) -> Value {
    json!({
        "ambient_rank": c.ambient_rank(),
        "generators": int_vectors_to_value(c.generators()),
        "rays": int_vectors_to_value(c.rays()),
        "lineality": int_vectors_to_value(c.lineality()),
        "facet_normals": int_vectors_to_value(c.facet_normals()),
        "equations": int_vectors_to_value(c.equations()),
        "dim": c.dim(),
        "strongly_convex": c.is_strongly_convex(),
    })
}

fn cone_brief(c: &Cone) -> Value {
    int_vectors_to_value(c.generators())
}

pub fn parse_fan(v: &Value) -> crate::error::Result<Fan> {
    let spec: FanSpec = serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("fan: {e}")))?;
    Fan::from_spec(&spec)
}

fn fan_to_json(f: &Fan) -> Value {
    serde_json::to_value(f.to_spec()).expect("fan spec serializes")
}

fn group_json(g: &FgAbelianGroup) -> Value {
    json!({ "free_rank": g.free_rank, "torsion": g.torsion.iter().map(bigint_to_value).collect::<Vec<_>>() })
}

fn int_matrix_field(v: &Value, key: &str, cols: Option<usize>) -> crate::error::Result<IntegerMatrix> {
    value_to_int_matrix(field(v, key)?, cols).map_err(|e| Error::Input(format!("{key}: {e}")))
}

/// Fan schema plus `"beta"` (rows = `n_rank`, columns = fan lattice rank).
fn parse_stacky(v: &Value) -> crate::error::Result<(Fan, IntegerMatrix)> {
    let fan = parse_fan(v)?;
    let beta = int_matrix_field(v, "beta", Some(fan.lattice_rank()))?;
    if let Some(n) = usize_field(v, "n_rank")? {
        if beta.rows() != n {
            return Err(Error::Dimension(format!("beta has {} rows, n_rank is {n}", beta.rows())));
        }
    }
    Ok((fan, beta))
}

fn parse_stacky_fan(v: &Value) -> crate::error::Result<StackyFan> {
    let (fan, beta) = parse_stacky(v)?;
    validate_stacky_fan(fan, beta)
}

fn parse_group(v: &Value) -> crate::error::Result<GroupTable> {
    serde_json::from_value(v.clone()).map_err(|e| Error::InvalidGroup(e.to_string()))
}

/// Groupoid JSON, an action `{"group", "set_size", "action"}`, or `{"groups": [...]}`
/// for a disjoint union of one-object groupoids.
pub fn parse_groupoid(v: &Value) -> crate::error::Result<FiniteGroupoid> {
    if let Some(g) = v.get("group") {
        let group = parse_group(g)?;
        let set_size = usize_field(v, "set_size")?.ok_or_else(|| Error::Input("missing \"set_size\"".into()))?;
        let action: Vec<Vec<usize>> =
            serde_json::from_value(field(v, "action")?.clone()).map_err(|e| Error::InvalidAction(e.to_string()))?;
        return action_groupoid(&group, set_size, &action);
    }
    if let Some(gs) = v.get("groups") {
        let groups = gs
            .as_array()
            .ok_or_else(|| Error::Input("\"groups\" must be a list".into()))?
            .iter()
            .map(parse_group)
            .collect::<crate::error::Result<Vec<_>>>()?;
        return Ok(FiniteGroupoid::from_groups(&groups));
    }
    let spec: GroupoidSpec = serde_json::from_value(v.clone()).map_err(|e| Error::InvalidGroupoid(e.to_string()))?;
    FiniteGroupoid::from_spec(&spec)
}

fn rational_vectors(vs: &[Vec<BigRational>]) -> Value {
    Value::Array(
        vs.iter().map(|v| Value::Array(v.iter().map(|x| Value::String(rational_to_string(x))).collect())).collect(),
    )
}

fn rat_matrices(v: &Value, key: &str) -> crate::error::Result<Vec<RationalMatrix>> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| Error::Input(format!("{key:?} must be a list of matrices")))?
        .iter()
        .map(|m| value_to_rat_matrix(m).map_err(|e| Error::Input(format!("{key}: {e}"))))
        .collect()
}

fn y_samples_from(v: &Value) -> crate::error::Result<Option<Vec<Vec<BigRational>>>> {
    let Some(list) = v.get("y_samples") else { return Ok(None) };
    let list = list.as_array().ok_or_else(|| Error::Input("\"y_samples\" must be a list".into()))?;
    list.iter()
        .map(|s| match s {
            Value::Array(xs) => xs.iter().map(|x| crate::json::value_to_rational(x).map_err(input_err)).collect(),
            x => crate::json::value_to_rational(x).map(|r| vec![r]).map_err(input_err),
        })
        .collect::<crate::error::Result<Vec<_>>>()
        .map(Some)
}

fn no_extra() -> Map<String, Value> {
    Map::new()
}

fn dispatch(command: Command, v: &Value, opt: &Options) -> Res {
    use Command::*;
    Ok(match command {
        DualCone => {
            let c = parse_cone(v)?;
            CommandResult::ok(json!({ "cone": cone_to_json(&c), "dual": cone_to_json(&dual_cone(&c)) }))
        }
        HilbertBasis => {
            let c = parse_cone(v)?;
            let dual = v.get("dual").and_then(Value::as_bool).unwrap_or(false);
            let hb = if dual { dual_hilbert_basis(&c)? } else { hilbert_basis(&c)? };
            CommandResult::ok(json!({
                "of": if dual { "dual" } else { "cone" },
                "ambient_rank": hb.ambient_rank,
                "elements": int_vectors_to_value(&hb.elements),
            }))
        }
        Faces => {
            let c = parse_cone(v)?;
            let faces: Vec<Value> = c.faces().iter().map(cone_brief).collect();
            CommandResult::ok(json!({ "count": faces.len(), "faces": faces }))
        }
        Smooth => {
            let c = parse_cone(v)?;
            CommandResult::ok(json!({ "smooth": is_smooth(&c), "strongly_convex": c.is_strongly_convex() }))
        }
        FanValidate => {
            let f = parse_fan(v)?;
            CommandResult::from_report(&fan_validate(&f), no_extra())
        }
        Orbit => {
            let f = parse_fan(field(v, "fan")?)?;
            let tau = cone_in(field(v, "cone")?, f.lattice_rank())?;
            let o = orbit(&tau, &f)?;
            CommandResult::ok(json!({
                "cone": cone_brief(&o.cone),
                "orbit_dim": o.orbit_dim,
                "quotient_rank": o.quotient_rank,
                "projection": int_matrix_to_value(&o.projection),
            }))
        }
        Star => {
            let f = parse_fan(field(v, "fan")?)?;
            let tau = cone_in(field(v, "cone")?, f.lattice_rank())?;
            let s = star_fan(&tau, &f)?;
            let closure = crate::polyhedral::orbit_closure_cones(&tau, &f)?;
            CommandResult::ok(json!({
                "fan": fan_to_json(&s),
                "orbit_closure_cones": closure.iter().map(cone_brief).collect::<Vec<_>>(),
            }))
        }
        DistinguishedPoint => {
            let c = parse_cone(v)?;
            let p = distinguished_point(&c)?;
            CommandResult::ok(json!({ "cone": cone_brief(&p.cone), "values": p.values_json() }))
        }
        StackyValidate => {
            let (fan, beta) = parse_stacky(v)?;
            match validate_stacky_fan(fan, beta) {
                Ok(sf) => CommandResult::ok(json!({
                    "valid": true,
                    "n_rank": sf.n_rank,
                    "cokernel": group_json(&sf.cokernel),
                    "cokernel_order": sf.cokernel.order().map(|o| bigint_to_value(&o)),
                })),
                Err(e @ Error::InfiniteCokernel { free_rank }) => CommandResult {
                    payload: json!({ "valid": false, "error": e.to_string(), "cokernel_free_rank": free_rank }),
                    ..CommandResult::error(&e)
                },
                Err(e) => return Err(e),
            }
        }
        GBeta => {
            let sf = parse_stacky_fan(v)?;
            CommandResult::ok(group_json(&g_beta(&sf).character_group))
        }
        MorphismValidate => {
            let src = parse_stacky_fan(field(v, "src")?)?;
            let dst = parse_stacky_fan(field(v, "dst")?)?;
            let big_phi = int_matrix_field(v, "Phi", Some(src.fan.lattice_rank()))?;
            let phi = int_matrix_field(v, "phi", Some(src.n_rank))?;
            let r = validate_morphism(&src, &dst, &StackyMorphism { big_phi, phi });
            CommandResult::from_report(&r, no_extra())
        }
        Fantastack => {
            let fan = parse_fan(v)?;
            let n = usize_field(v, "n")?;
            let beta = int_matrix_field(v, "beta", n)?;
            if let Some(n) = n {
                if beta.cols() != n {
                    return Err(Error::Dimension(format!("beta has {} columns, n is {n}", beta.cols())));
                }
            }
            if beta.rows() != fan.lattice_rank() {
                return Err(Error::Dimension(format!(
                    "beta has {} rows, fan lattice rank is {}",
                    beta.rows(),
                    fan.lattice_rank()
                )));
            }
            let fs = build_fantastack(fan, beta)?;
            CommandResult::ok(json!({
                "hat_fan": fan_to_json(&fs.hat_fan),
                "ideal": fs.minimal_ideal,
                "ideal_generators": fs.ideal_generators,
                "g_beta": group_json(&fs.g_beta.character_group),
                "open_set_verified": fs.open_set_verified,
            }))
        }
        DmTorus => {
            let src: FgAbelianGroup =
                serde_json::from_value(field(v, "src")?.clone()).map_err(|e| Error::Input(format!("src: {e}")))?;
            let dst: FgAbelianGroup =
                serde_json::from_value(field(v, "dst")?.clone()).map_err(|e| Error::Input(format!("dst: {e}")))?;
            let phi = int_matrix_field(v, "phi", Some(src.generator_count()))?;
            CommandResult::from_report(&dm_torus_validate(&phi, &src, &dst), no_extra())
        }
        GroupoidCohomology => {
            let g = parse_groupoid(v)?;
            let k = opt.max_degree.unwrap_or(3);
            CommandResult::ok(json!({ "max_degree": k, "dims": cech_cohomology(&g, k)? }))
        }
        Decompose => {
            let g = parse_groupoid(v)?;
            let comps: Vec<Value> = g
                .decompose()
                .iter()
                .map(|c| {
                    json!({
                        "objects": c.objects,
                        "object_count": c.objects.len(),
                        "base": c.base,
                        "group": serde_json::to_value(&c.group).expect("group serializes"),
                        "group_order": c.group.order(),
                    })
                })
                .collect();
            CommandResult::ok(json!({ "components": comps }))
        }
        Mass => {
            let g = parse_groupoid(v)?;
            CommandResult::ok(json!({ "mass": rational_to_string(&g.mass()) }))
        }
        GroupHomology => {
            let g = parse_group(v)?;
            let k = opt.max_degree.unwrap_or(3);
            let h = group_homology(&g, k)?;
            let out: Vec<Value> = h
                .iter()
                .enumerate()
                .map(|(d, a)| {
                    let mut x = group_json(a);
                    x["degree"] = json!(d);
                    x["group"] = json!(a.to_string());
                    x
                })
                .collect();
            CommandResult::ok(json!({ "homology": out }))
        }
        CoarseCompare => {
            let g = parse_groupoid(v)?;
            CommandResult::from_report(&coarse_moduli_compare(&g, opt.max_degree.unwrap_or(3))?, no_extra())
        }
        HodgeValidate => {
            let h = PolarizedHodgeData::from_json(v)?;
            CommandResult::from_report(&validate_hodge_with(&h, opt.convention), no_extra())
        }
        EndoDecompose => {
            let h = PolarizedHodgeData::from_json(v)?;
            let e = endomorphism_decomposition(&h)?;
            let pieces: Vec<Value> = e
                .pieces
                .iter()
                .map(|(i, b)| json!({ "i": i, "dim": b.len(), "basis": b.iter().map(complex_matrix_to_value).collect::<Vec<_>>() }))
                .collect();
            CommandResult::ok(json!({
                "pieces": pieces,
                "total_dim": e.total_dim(),
                "tangent_dim": e.tangent_dim(),
                "h_dim": e.stabilizer_dim(),
            }))
        }
        Ipr => {
            let h = PolarizedHodgeData::from_json(v)?;
            let f = ipr_fiber(&h)?;
            CommandResult::ok(json!({
                "dim": f.dim,
                "tangent_dim": f.tangent_dim,
                "basis": f.basis.iter().map(complex_matrix_to_value).collect::<Vec<_>>(),
            }))
        }
        ConeValidate => {
            let c = NilpotentCone::from_json(v)?;
            CommandResult::from_report(&validate_nilpotent_cone(&c, None), no_extra())
        }
        WeightFiltration => {
            let n = value_to_rat_matrix(field(v, "N")?).map_err(input_err)?;
            let center = v.get("center").and_then(Value::as_i64).unwrap_or(0);
            let w = weight_filtration(&n, center)?;
            let r = verify_weight_filtration(&n, &w);
            let mut extra = Map::new();
            extra.insert("filtration".into(), w.to_json());
            CommandResult::from_report(&r, extra)
        }
        OrbitCheck => {
            let c = NilpotentCone::from_json(field(v, "cone")?)?;
            let h = PolarizedHodgeData::from_json(field(v, "hodge")?)?;
            let y = match &opt.y_samples {
                Some(y) => y.clone(),
                None => y_samples_from(v)?.unwrap_or_else(hodge::default_y_samples),
            };
            CommandResult::from_report(&nilpotent_orbit_check(&c, &h, &y)?, no_extra())
        }
        GammaMonoid => {
            let c = NilpotentCone::from_json(v)?;
            let g = gamma_monoid(&c)?;
            CommandResult::ok(json!({
                "rank": g.rank,
                "group_rank": g.group_rank,
                "lattice_basis": rational_vectors(&g.lattice.basis.to_columns()),
                "lattice_index": bigint_to_value(&g.lattice.index),
                "hilbert_basis": rational_vectors(&g.hilbert_basis),
                "unipotent_generators": g.unipotent_generators.iter().map(int_matrix_to_value).collect::<Vec<_>>(),
                "dual_hilbert_basis": int_vectors_to_value(&g.dual_basis.elements),
            }))
        }
        CompatCheck => {
            let c = NilpotentCone::from_json(field(v, "cone")?)?;
            let f = parse_fan(field(v, "fan")?)?;
            let sample = field(v, "gamma_sample")?
                .as_array()
                .ok_or_else(|| Error::Input("\"gamma_sample\" must be a list of matrices".into()))?
                .iter()
                .map(|m| value_to_int_matrix(m, None).map_err(input_err))
                .collect::<crate::error::Result<Vec<_>>>()?;
            CommandResult::from_report(&check_strong_compatibility(&c, &f, &sample)?, no_extra())
        }
        Centralizer => {
            let c = NilpotentCone::from_json(v)?;
            let basis = centralizer_algebra(&c, None);
            CommandResult::ok(json!({
                "dim": basis.len(),
                "basis": basis.iter().map(rat_matrix_to_value).collect::<Vec<_>>(),
            }))
        }
        KuTriple => {
            let c = NilpotentCone::from_json(field(v, "cone")?)?;
            let m = rat_matrices(v, "m_lattice")?;
            let t = build_ku_stacky_triple(&c, &m)?;
            let mut extra = Map::new();
            extra.insert("embedding".into(), int_matrix_to_value(&t.embedding));
            extra.insert("cone_fan".into(), fan_to_json(&t.cone_fan));
            extra.insert("image_fan".into(), fan_to_json(&t.image_fan));
            extra.insert("cokernel".into(), group_json(&crate::lattice::cokernel(&t.embedding)));
            extra.insert("gamma_hilbert_basis".into(), rational_vectors(&t.gamma.hilbert_basis));
            CommandResult::from_report(&t.report, extra)
        }
    })
}

/// A cone given inside another document, defaulting its rank to the fan's.
fn cone_in(v: &Value, rank: usize) -> crate::error::Result<Cone> {
    match v {
        Value::Array(a) if a.is_empty() => Ok(Cone::zero(rank)),
        Value::Array(_) => Cone::new(rank, int_vectors(v)?),
        _ => parse_cone(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_json(cmd: &str, input: Value) -> CommandResult {
        execute(Command::from_name(cmd).unwrap(), &input, &Options::default())
    }

    #[test]
    fn every_name_resolves() {
        let names = [
            "dual-cone",
            "hilbert-basis",
            "faces",
            "smooth",
            "fan-validate",
            "orbit",
            "star",
            "distinguished-point",
            "stacky-validate",
            "g-beta",
            "morphism-validate",
            "fantastack",
            "dm-torus",
            "groupoid-cohomology",
            "decompose",
            "mass",
            "group-homology",
            "coarse-compare",
            "hodge-validate",
            "endo-decompose",
            "ipr",
            "cone-validate",
            "weight-filtration",
            "orbit-check",
            "gamma-monoid",
            "compat-check",
            "centralizer",
            "ku-triple",
        ];
        for n in names {
            assert!(Command::from_name(n).is_some(), "{n}");
        }
        assert!(Command::from_name("nope").is_none());
    }

    #[test]
    fn g_beta_payload_is_exact() {
        let r = run_json("g-beta", json!({"lattice_rank": 2, "maximal_cones": [[[1, 0]], [[0, 1]]], "beta": [[1, 1]]}));
        assert_eq!(r.payload, json!({"free_rank": 1, "torsion": []}));
        assert_eq!(r.status, Status::Ok);
    }

    #[test]
    fn infinite_cokernel_is_a_math_failure() {
        let r = run_json(
            "stacky-validate",
            json!({"lattice_rank": 2, "maximal_cones": [[[1, 0]]], "beta": [[2, 0], [0, 0]]}),
        );
        assert_eq!(r.status, Status::MathFailure);
        assert_eq!(r.payload["cokernel_free_rank"], json!(1));
    }

    #[test]
    fn malformed_json_reports_position() {
        let r = execute_text(Command::Mass, "{\"groups\": [", &Options::default());
        assert_eq!(r.status, Status::InvalidInput);
        assert!(r.diagnostics[0].contains("line 1"));
    }

    #[test]
    fn unknown_subcommand_exits_two() {
        let r = run(["stackyfan", "frobnicate"], &mut std::io::empty());
        assert_eq!(r.status.exit_code(), 2);
    }
}
