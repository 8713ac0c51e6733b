//! Command dispatch. Every command prints a report (`key: value` lines, or
//! one JSON object with `--json`) and maps outcomes to exit codes.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use strongconvex::caratheodory::minimal_subset;
use strongconvex::strong::{erode_with, strong_hull_with, Subtrahend};
use strongconvex::summand::{criterion_check_2d, generating_pair_test, is_summand, PairTestOutcome};
use strongconvex::witnesses::{
    witness_at_least_n, witness_cone, witness_product, FactorWitness, WitnessInstance,
};
use strongconvex::{helly_check, hull_member, Ball, Body, GeomError, HPolytope, Membership, StrongSet, ToleranceConfig, Vector};

use crate::render::{body_overlay, cone_figure, render_svg, set_overlay, Overlay, RenderSpec};
use crate::scene::{emit_scene, parse_scene, Scene};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_MEMBER: i32 = 3;
pub const EXIT_HULL_UNDEFINED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "strongconvex", version, about = "Strong convexity with respect to a convex gauge body")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Scene file (JSON).
    #[arg(long)]
    pub scene: Option<PathBuf>,
    /// Name of the gauge body in the scene.
    #[arg(long, default_value = "K")]
    pub gauge: String,
    /// Name of the point list in the scene.
    #[arg(long, default_value = "X")]
    pub set: String,
    /// Direction grid size (overrides the scene).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Separation margin tolerance (overrides the scene).
    #[arg(long = "tol-margin")]
    pub tol_margin: Option<f64>,
    /// Print the report as one JSON object.
    #[arg(long)]
    pub json: bool,
    /// Write an SVG drawing of planar content.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strong hull of the point list.
    Hull(Common),
    /// Is a point in the strong hull? Exit 0 if so, 3 if not.
    Member {
        #[command(flatten)]
        common: Common,
        /// Coordinates `x,y,…` or the name of a point list (its first point).
        #[arg(long, default_value = "p")]
        point: String,
    },
    /// Smallest subset whose strong hull still contains the point.
    Cara {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "p")]
        point: String,
    },
    /// Covering translates avoiding the origin: small subsets against all.
    Helly {
        #[command(flatten)]
        common: Common,
        /// Subset size for the hypothesis (default: the dimension).
        #[arg(long)]
        size: Option<usize>,
    },
    /// Is body A a Minkowski summand of body B?
    Summand {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "A")]
        a: String,
        #[arg(long, default_value = "B")]
        b: String,
    },
    /// Sampled test that erosions by two vectors are summands of the gauge.
    GenTest {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Planar contact-set check on a grid of feasible translates.
    Criterion2d {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "A")]
        a: String,
        #[arg(long, default_value = "B")]
        b: String,
    },
    /// Construct an explicit witness instance and emit it as a scene.
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
    },
}

#[derive(Debug, Args, Clone)]
pub struct WitnessOut {
    /// Write the instance as a scene file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeKind {
    Cube,
    Ball,
    Cross,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorKind {
    Segment,
    Square,
    Cube,
}

#[derive(Debug, Subcommand)]
pub enum WitnessKind {
    /// Cone over a disk with a regular m-gon needing all m points.
    Cone {
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[arg(long = "apex-height", default_value_t = 1.0)]
        apex_height: f64,
        /// Write the base-plane diagram as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        output: WitnessOut,
    },
    /// n points needing all n for a cube, ball or cross-polytope gauge.
    LowerBound {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = GaugeKind::Cube)]
        gauge: GaugeKind,
        #[command(flatten)]
        output: WitnessOut,
    },
    /// Product of two factor witnesses.
    Product {
        #[arg(long, value_enum, default_value_t = FactorKind::Segment)]
        left: FactorKind,
        #[arg(long, value_enum, default_value_t = FactorKind::Segment)]
        right: FactorKind,
        #[command(flatten)]
        output: WitnessOut,
    },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("hull undefined: no translate of the gauge covers the points")]
    HullUndefined,
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::HullUndefined => EXIT_HULL_UNDEFINED,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::HullUndefined => CliError::HullUndefined,
            GeomError::DimensionMismatch { .. }
            | GeomError::DegenerateNormal(_)
            | GeomError::Unbounded
            | GeomError::EmptyPointSet
            | GeomError::ZeroDirection
            | GeomError::Precondition(_)
            | GeomError::Unsupported(_) => CliError::Input(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

/// Ordered key/value report.
#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn put(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.fields.push((key.to_string(), serde_json::to_value(value).expect("report values serialize")));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let map: serde_json::Map<String, Value> = self.fields.iter().cloned().collect();
            return serde_json::to_string_pretty(&Value::Object(map)).expect("json") + "\n";
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            match v {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
        out
    }
}

/// Report text and exit code of a finished command.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

fn vec_of(v: &Vector) -> Vec<f64> {
    // Adding zero turns -0.0 into 0.0.
    v.iter().map(|x| x + 0.0).collect()
}

fn load(common: &Common) -> Result<Scene, CliError> {
    let path = common.scene.as_ref().ok_or_else(|| CliError::Input("--scene is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut scene = parse_scene(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if let Some(g) = common.grid {
        scene.tolerances.direction_grid_size = g;
    }
    if let Some(m) = common.tol_margin {
        scene.tolerances.eps_margin = m;
    }
    scene.tolerances.validate()?;
    Ok(scene)
}

fn body<'a>(scene: &'a Scene, name: &str) -> Result<&'a Body, CliError> {
    scene.body(name).ok_or_else(|| CliError::Input(format!("no body named {name:?} in the scene")))
}

fn points<'a>(scene: &'a Scene, name: &str) -> Result<&'a [Vector], CliError> {
    scene.point_set(name).ok_or_else(|| CliError::Input(format!("no point list named {name:?} in the scene")))
}

fn point(scene: &Scene, spec: &str) -> Result<Vector, CliError> {
    if let Some(list) = scene.point_set(spec) {
        return list.first().cloned().ok_or_else(|| CliError::Input(format!("point list {spec:?} is empty")));
    }
    let coords = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Input(format!("--point {spec:?} is neither coordinates nor a point list")))?;
    if coords.len() != scene.dimension {
        return Err(CliError::Input(format!(
            "dimension mismatch: --point has {} coordinates, scene is {}-dimensional",
            coords.len(),
            scene.dimension
        )));
    }
    Ok(Vector::from_vec(coords))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

fn draw(path: &Option<PathBuf>, overlays: impl FnOnce() -> Result<Vec<Overlay>, CliError>) -> Result<(), CliError> {
    if let Some(path) = path {
        let svg = render_svg(&overlays()?, &RenderSpec::default()).map_err(|e| CliError::Input(e.to_string()))?;
        write_file(path, &svg)?;
    }
    Ok(())
}

fn overlay_err(e: crate::render::RenderError) -> CliError {
    CliError::Input(e.to_string())
}

fn point_overlays(pts: &[Vector], class: &str) -> Vec<Overlay> {
    pts.iter()
        .filter(|p| p.len() == 2)
        .map(|p| Overlay::Point { class: class.into(), at: [p[0], p[1]] })
        .collect()
}

fn describe_set(r: &mut Report, set: &StrongSet) {
    r.put("exact", !set.is_approximate());
    if let Some(poly) = set.hform() {
        r.put("normals", poly.normals().iter().map(vec_of).collect::<Vec<_>>());
        r.put("offsets", poly.offsets().iter().map(|b| b + 0.0).collect::<Vec<_>>());
    }
    if let Some(rad) = set.inradius() {
        r.put("inradius", rad);
    }
    let n = set.dim();
    let mut support = Vec::new();
    for i in 0..n {
        for s in [1.0, -1.0] {
            let u = Vector::from_fn(n, |j, _| if j == i { s } else { 0.0 });
            support.push(set.support(&u).unwrap_or(f64::NAN));
        }
    }
    r.put("axis_support", support);
}

fn hull(c: &Common) -> Result<(Report, i32), CliError> {
    let scene = load(c)?;
    let k = body(&scene, &c.gauge)?;
    let x = points(&scene, &c.set)?;
    let h = strong_hull_with(k, x, &scene.tolerances)?;
    let mut r = Report::default();
    r.put("command", "hull").put("points", x.len());
    describe_set(&mut r, &h);
    let bad = x.iter().filter(|p| !h.contains(p, 1e-7)).count();
    if bad > 0 {
        return Err(CliError::Failure(format!("{bad} points of X fall outside the computed hull")));
    }
    r.put("revalidated", true);
    draw(&c.svg, || {
        let mut o = vec![set_overlay(&h, "hull").map_err(overlay_err)?];
        o.extend(point_overlays(x, "point"));
        Ok(o)
    })?;
    Ok((r, EXIT_OK))
}

fn member(c: &Common, spec: &str) -> Result<(Report, i32), CliError> {
    let scene = load(c)?;
    let k = body(&scene, &c.gauge)?;
    let x = points(&scene, &c.set)?;
    let p = point(&scene, spec)?;
    let tol = &scene.tolerances;
    let m = hull_member(k, x, &p, tol)?;
    let mut r = Report::default();
    r.put("command", "member").put("point", vec_of(&p)).put("member", m.is_member()).put("margin", m.margin());
    let code = match &m {
        Membership::Member { low_margin, .. } => {
            r.put("low_margin", low_margin);
            EXIT_OK
        }
        Membership::NotMember(w) => {
            if !w.verify(k, x, &p, tol)? {
                return Err(CliError::Failure("separating translate failed revalidation".into()));
            }
            r.put("witness_t", vec_of(&w.t)).put("witness_u", vec_of(&w.u)).put("revalidated", true);
            EXIT_NOT_MEMBER
        }
    };
    draw(&c.svg, || {
        let mut o = Vec::new();
        if let Ok(h) = strong_hull_with(k, x, tol) {
            o.push(set_overlay(&h, "hull").map_err(overlay_err)?);
        }
        if let Some(w) = m.witness() {
            o.push(body_overlay(&k.translate(&w.t)?, "translate").map_err(overlay_err)?);
        }
        o.extend(point_overlays(x, "point"));
        o.extend(point_overlays(std::slice::from_ref(&p), "test-point"));
        Ok(o)
    })?;
    Ok((r, code))
}

fn cara(c: &Common, spec: &str) -> Result<(Report, i32), CliError> {
    let scene = load(c)?;
    let k = body(&scene, &c.gauge)?;
    let x = points(&scene, &c.set)?;
    let p = point(&scene, spec)?;
    let tol = &scene.tolerances;
    let cert = minimal_subset(k, x, &p, tol)?;
    if !cert.revalidate(k, x, &p, tol)? {
        return Err(CliError::Failure("subset certificate failed revalidation".into()));
    }
    let mut r = Report::default();
    r.put("command", "cara")
        .put("size", cert.len())
        .put("indices", &cert.indices)
        .put("subset", cert.points(x).iter().map(vec_of).collect::<Vec<_>>())
        .put("margin", cert.margin)
        .put("rejected_subsets", cert.rejected.len())
        .put("revalidated", true);
    Ok((r, EXIT_OK))
}

fn helly(c: &Common, size: Option<usize>) -> Result<(Report, i32), CliError> {
    let scene = load(c)?;
    let k = body(&scene, &c.gauge)?;
    let x = points(&scene, &c.set)?;
    let tol = &scene.tolerances;
    let n = size.unwrap_or(scene.dimension);
    let h = helly_check(k, x, n, tol)?;
    let mut r = Report::default();
    r.put("command", "helly")
        .put("subset_size", n)
        .put("fits", h.fits)
        .put("origin_outside_hull", h.origin_outside_hull)
        .put("hypothesis_ok", h.hypothesis_ok)
        .put("failing_subset", &h.failing_subset)
        .put("escalated", h.escalated);
    match &h.conclusion_witness {
        Some(w) => {
            if !w.verify(k, x, &Vector::zeros(scene.dimension), tol)? {
                return Err(CliError::Failure("covering translate failed revalidation".into()));
            }
            r.put("conclusion_t", vec_of(&w.t)).put("conclusion_margin", w.margin);
        }
        None => {
            r.put("conclusion_t", Value::Null);
        }
    }
    Ok((r, EXIT_OK))
}

fn summand(c: &Common, a: &str, b: &str) -> Result<(Report, i32), CliError> {
    let scene = load(c)?;
    let (ba, bb) = (body(&scene, a)?, body(&scene, b)?);
    let s = is_summand(ba, bb, &scene.tolerances)?;
    let mut r = Report::default();
    r.put("command", "summand")
        .put("verdict", s.verdict)
        .put("residual", s.residual)
        .put("threshold", s.threshold)
        .put("witness_direction", s.witness_direction.as_ref().map(vec_of));
    if let Some(why) = &s.explanation {
        r.put("explanation", why);
    }
    if let Some(set) = &s.summand {
        describe_set(&mut r, set);
    }
    if let Some(u) = &s.witness_direction {
        let set = s.summand.as_ref().expect("a failing direction needs a summand");
        let gap = bb.support(u)? - ba.support(u)? - set.support(u)?;
        r.put("witness_gap", gap);
    }
    draw(&c.svg, || {
        let mut o = vec![body_overlay(bb, "body").map_err(overlay_err)?, body_overlay(ba, "translate").map_err(overlay_err)?];
        if let Some(set) = &s.summand {
            o.push(set_overlay(set, "hull").map_err(overlay_err)?);
        }
        Ok(o)
    })?;
    Ok((r, EXIT_OK))
}

fn gen_test(c: &Common, samples: usize, seed: u64) -> Result<(Report, i32), CliError> {
    let scene = load(c)?;
    let k = body(&scene, &c.gauge)?;
    let mut r = Report::default();
    r.put("command", "gen-test").put("seed", seed);
    match generating_pair_test(k, samples, seed, &scene.tolerances)? {
        PairTestOutcome::Pass { samples } => {
            r.put("result", "pass").put("samples", samples);
        }
        PairTestOutcome::Counterexample { t1, t2, report } => {
            let a = erode_with(k, Subtrahend::Points(&[t1.clone(), t2.clone()]), &scene.tolerances)?;
            if a.is_empty() {
                return Err(CliError::Failure("counterexample pair has an empty erosion".into()));
            }
            r.put("result", "counterexample")
                .put("t1", vec_of(&t1))
                .put("t2", vec_of(&t2))
                .put("residual", report.residual)
                .put("witness_direction", report.witness_direction.as_ref().map(vec_of));
        }
    }
    Ok((r, EXIT_OK))
}

fn criterion2d(c: &Common, a: &str, b: &str) -> Result<(Report, i32), CliError> {
    let scene = load(c)?;
    let (ba, bb) = (body(&scene, a)?, body(&scene, b)?);
    let t_grid = c.grid.unwrap_or(60);
    let mut tol = scene.tolerances;
    if c.grid.is_some() {
        tol.direction_grid_size = ToleranceConfig::default().direction_grid_size;
    }
    let rep = criterion_check_2d(ba, bb, t_grid, &tol)?;
    let mut r = Report::default();
    r.put("command", "criterion2d")
        .put("t_grid", rep.t_grid)
        .put("samples", rep.samples)
        .put("interior_translate", rep.interior_translate)
        .put("hypothesis_ok", rep.hypothesis_ok)
        .put("acyclicity_failures", rep.acyclicity_failures.len())
        .put(
            "first_failure",
            rep.acyclicity_failures.first().map(|f| json!({"t": vec_of(&f.t), "components": f.components, "full_boundary": f.full_boundary})),
        )
        .put("summand_verdict", rep.summand_verdict)
        .put("summand_residual", rep.summand.residual);
    Ok((r, EXIT_OK))
}

fn instance_scene(inst: &WitnessInstance) -> Scene {
    let mut scene = Scene {
        dimension: inst.gauge.dim(),
        bodies: Default::default(),
        points: Default::default(),
        tolerances: ToleranceConfig::default(),
    };
    scene.bodies.insert("K".into(), inst.gauge.clone());
    scene.points.insert("X".into(), inst.points.clone());
    scene.points.insert("p".into(), vec![inst.test_point.clone()]);
    scene
}

fn emit_instance(r: &mut Report, inst: &WitnessInstance, out: &WitnessOut) -> Result<(), CliError> {
    let tol = ToleranceConfig::default();
    if !inst.verify(&tol)? {
        return Err(CliError::Failure("witness certificates failed revalidation".into()));
    }
    let scene = instance_scene(inst);
    let text = emit_scene(&scene).map_err(|e| CliError::Failure(e.to_string()))?;
    r.put("test_point", vec_of(&inst.test_point))
        .put("points", inst.points.iter().map(vec_of).collect::<Vec<_>>())
        .put("expected_min_subset", inst.expected_min_subset)
        .put("certificates", inst.certificate_translates.len())
        .put(
            "min_certificate_margin",
            inst.certificate_translates.iter().map(|(_, w)| w.margin).fold(f64::INFINITY, f64::min),
        )
        .put("revalidated", true);
    match &out.out {
        Some(path) => {
            write_file(path, &text)?;
            r.put("scene_file", path.display().to_string());
        }
        None => {
            r.put("scene", serde_json::from_str::<Value>(&text).expect("emitted scene is JSON"));
        }
    }
    Ok(())
}

fn factor(kind: FactorKind) -> Result<FactorWitness, CliError> {
    Ok(match kind {
        FactorKind::Segment => FactorWitness {
            gauge: Body::Polytope(HPolytope::boxed(&[-1.0], &[1.0])?),
            points: vec![Vector::from_element(1, -1.0), Vector::from_element(1, 1.0)],
            test_point: Vector::zeros(1),
        },
        FactorKind::Square => witness_at_least_n(&Body::Polytope(HPolytope::cube(2, 1.0)), &ToleranceConfig::default())?.instance.into(),
        FactorKind::Cube => witness_at_least_n(&Body::Polytope(HPolytope::cube(3, 1.0)), &ToleranceConfig::default())?.instance.into(),
    })
}

fn witness(kind: &WitnessKind) -> Result<(Report, bool), CliError> {
    let tol = ToleranceConfig::default();
    let mut r = Report::default();
    let json = match kind {
        WitnessKind::Cone { m, apex_height, svg, output } => {
            let w = witness_cone(*m, *apex_height, &tol)?;
            r.put("command", "witness cone").put("m", m).put("apex_height", apex_height).put("d_min", w.d_min);
            r.put("analytic_separators", w.separators.iter().filter(|s| s.analytic).count());
            emit_instance(&mut r, &w.instance, output)?;
            if let Some(path) = svg {
                let text = render_svg(&cone_figure(&w, 0), &RenderSpec::default()).map_err(overlay_err)?;
                write_file(path, &text)?;
                r.put("svg", path.display().to_string());
            }
            output.json
        }
        WitnessKind::LowerBound { dim, gauge, output } => {
            let k = match gauge {
                GaugeKind::Cube => Body::Polytope(HPolytope::cube(*dim, 1.0)),
                GaugeKind::Cross => Body::Polytope(HPolytope::cross_polytope(*dim, 1.0)),
                GaugeKind::Ball => Body::Ball(Ball::new(Vector::zeros(*dim), 1.0)?),
            };
            let w = witness_at_least_n(&k, &tol)?;
            r.put("command", "witness lower-bound").put("dim", dim).put("scale_radius", w.scale_radius);
            emit_instance(&mut r, &w.instance, output)?;
            output.json
        }
        WitnessKind::Product { left, right, output } => {
            let w = witness_product(&factor(*left)?, &factor(*right)?, &tol)?;
            r.put("command", "witness product");
            emit_instance(&mut r, &w, output)?;
            output.json
        }
    };
    Ok((r, json))
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Hull(c) => hull(c).map(|o| (o, c.json)),
        Command::Member { common, point } => member(common, point).map(|o| (o, common.json)),
        Command::Cara { common, point } => cara(common, point).map(|o| (o, common.json)),
        Command::Helly { common, size } => helly(common, *size).map(|o| (o, common.json)),
        Command::Summand { common, a, b } => summand(common, a, b).map(|o| (o, common.json)),
        Command::GenTest { common, samples, seed } => gen_test(common, *samples, *seed).map(|o| (o, common.json)),
        Command::Criterion2d { common, a, b } => criterion2d(common, a, b).map(|o| (o, common.json)),
        Command::Witness { kind } => witness(kind).map(|(r, json)| ((r, EXIT_OK), json)),
    };
    match result {
        Ok(((report, code), json)) => Outcome { text: report.render(json), code },
        Err(e) => Outcome { text: format!("error: {e}\n"), code: e.exit_code() },
    }
}
