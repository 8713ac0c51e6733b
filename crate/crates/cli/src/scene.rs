//! Scene files: JSON with named bodies, named point lists and optional
//! tolerance overrides.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "bodies": {
//!     "K": { "type": "box", "lo": [0, 0], "hi": [2, 2] },
//!     "D": { "type": "ball", "center": [0, 0], "radius": 1 }
//!   },
//!   "points": { "X": [[0, 0], [1, 1]], "p": [[1.5, 0.5]] },
//!   "tolerances": { "eps_margin": 1e-6 }
//! }
//! ```
//!
//! Body types: `polytope` (`normals`, `offsets`), `polygon` (`vertices`),
//! `box` (`lo`, `hi`), `ball` (`center`, `radius`), `cone` (`base_center`,
//! `base_radius`, `apex_height`) and `product` (`factors`, each a body or
//! the name of one).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use strongconvex::{Ball, Body, ConeBody, GeomError, HPolytope, ProductBody, ToleranceConfig, Vector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SceneErrorKind {
    Syntax,
    DimensionMismatch,
    DegenerateNormal,
    Unbounded,
    UnknownReference,
    Invalid,
}

impl fmt::Display for SceneErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SceneErrorKind::Syntax => "syntax error",
            SceneErrorKind::DimensionMismatch => "dimension mismatch",
            SceneErrorKind::DegenerateNormal => "degenerate normal",
            SceneErrorKind::Unbounded => "unbounded body",
            SceneErrorKind::UnknownReference => "unknown reference",
            SceneErrorKind::Invalid => "invalid value",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {kind}: {detail}")]
pub struct SceneError {
    pub line: usize,
    pub kind: SceneErrorKind,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodyDef {
    Polytope { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
    Polygon { vertices: Vec<[f64; 2]> },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Cone { base_center: Vec<f64>, base_radius: f64, apex_height: f64 },
    Product { factors: Vec<FactorDef> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorDef {
    Name(String),
    Inline(BodyDef),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceDef {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_feas: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction_grid_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine_iters: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub dimension: usize,
    #[serde(default)]
    pub bodies: BTreeMap<String, BodyDef>,
    #[serde(default)]
    pub points: BTreeMap<String, Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "is_default_tol")]
    pub tolerances: ToleranceDef,
}

fn is_default_tol(t: &ToleranceDef) -> bool {
    t.eps_feas.is_none() && t.eps_margin.is_none() && t.direction_grid_size.is_none() && t.refine_iters.is_none()
}

/// A validated scene.
#[derive(Debug, Clone)]
pub struct Scene {
    pub dimension: usize,
    pub bodies: BTreeMap<String, Body>,
    pub points: BTreeMap<String, Vec<Vector>>,
    pub tolerances: ToleranceConfig,
}

impl Scene {
    pub fn body(&self, name: &str) -> Option<&Body> {
        self.bodies.get(name)
    }

    pub fn point_set(&self, name: &str) -> Option<&[Vector]> {
        self.points.get(name).map(Vec::as_slice)
    }
}

/// Line of the first occurrence of `"key"` after the line of `"section"`.
fn line_of(text: &str, section: &str, key: &str) -> usize {
    let start = text.find(&format!("\"{section}\"")).unwrap_or(0);
    let pos = text[start..]
        .find(&format!("\"{key}\""))
        .map(|i| start + i)
        .unwrap_or(start);
    text[..pos].matches('\n').count() + 1
}

fn body_from_def(
    def: &BodyDef,
    defs: &BTreeMap<String, BodyDef>,
    depth: usize,
) -> Result<Body, (SceneErrorKind, String)> {
    use SceneErrorKind::*;
    let geom = |err: GeomError| match err {
        GeomError::DegenerateNormal(i) => (DegenerateNormal, format!("normal {i} is zero")),
        GeomError::Unbounded => (Unbounded, "halfspaces do not bound a region".into()),
        GeomError::DimensionMismatch { expected, got } => (DimensionMismatch, format!("expected {expected}, got {got}")),
        other => (Invalid, other.to_string()),
    };
    Ok(match def {
        BodyDef::Polytope { normals, offsets } => {
            if normals.len() != offsets.len() {
                return Err((DimensionMismatch, format!("{} normals but {} offsets", normals.len(), offsets.len())));
            }
            let normals = normals.iter().map(|a| Vector::from_column_slice(a)).collect();
            Body::Polytope(HPolytope::new(normals, offsets.clone()).map_err(geom)?)
        }
        BodyDef::Polygon { vertices } => Body::Polytope(HPolytope::from_vertices_2d(vertices).map_err(geom)?),
        BodyDef::Box { lo, hi } => Body::Polytope(HPolytope::boxed(lo, hi).map_err(geom)?),
        BodyDef::Ball { center, radius } => Body::Ball(Ball::new(Vector::from_column_slice(center), *radius).map_err(geom)?),
        BodyDef::Cone { base_center, base_radius, apex_height } => Body::Cone(
            ConeBody::new(Vector::from_column_slice(base_center), *base_radius, *apex_height).map_err(geom)?,
        ),
        BodyDef::Product { factors } => {
            if depth > 16 {
                return Err((Invalid, "product nesting too deep".into()));
            }
            let bodies = factors
                .iter()
                .map(|f| match f {
                    FactorDef::Inline(d) => body_from_def(d, defs, depth + 1),
                    FactorDef::Name(n) => match defs.get(n) {
                        Some(d) => body_from_def(d, defs, depth + 1),
                        None => Err((UnknownReference, format!("no body named {n:?}"))),
                    },
                })
                .collect::<Result<Vec<_>, _>>()?;
            Body::Product(ProductBody::new(bodies).map_err(geom)?)
        }
    })
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| SceneError {
        line: e.line().max(1),
        kind: SceneErrorKind::Syntax,
        detail: e.to_string(),
    })?;
    let n = file.dimension;
    let mut bodies = BTreeMap::new();
    for (name, def) in &file.bodies {
        let err = |(kind, detail): (SceneErrorKind, String)| SceneError {
            line: line_of(text, "bodies", name),
            kind,
            detail: format!("body {name:?}: {detail}"),
        };
        let body = body_from_def(def, &file.bodies, 0).map_err(err)?;
        if body.dim() != n {
            return Err(err((
                SceneErrorKind::DimensionMismatch,
                format!("dimension {} in a {n}-dimensional scene", body.dim()),
            )));
        }
        bodies.insert(name.clone(), body);
    }
    let mut points = BTreeMap::new();
    for (name, list) in &file.points {
        if let Some(bad) = list.iter().find(|p| p.len() != n) {
            return Err(SceneError {
                line: line_of(text, "points", name),
                kind: SceneErrorKind::DimensionMismatch,
                detail: format!("point list {name:?}: point {bad:?} is not {n}-dimensional"),
            });
        }
        points.insert(name.clone(), list.iter().map(|p| Vector::from_column_slice(p)).collect());
    }
    let d = ToleranceConfig::default();
    let t = &file.tolerances;
    let tolerances = ToleranceConfig {
        eps_feas: t.eps_feas.unwrap_or(d.eps_feas),
        eps_margin: t.eps_margin.unwrap_or(d.eps_margin),
        direction_grid_size: t.direction_grid_size.unwrap_or(d.direction_grid_size),
        refine_iters: t.refine_iters.unwrap_or(d.refine_iters),
    };
    tolerances.validate().map_err(|e| SceneError {
        line: line_of(text, "tolerances", "tolerances"),
        kind: SceneErrorKind::Invalid,
        detail: e.to_string(),
    })?;
    Ok(Scene { dimension: n, bodies, points, tolerances })
}

/// Scene-file form of a body; support-oracle bodies have none.
pub fn body_def(body: &Body) -> Option<BodyDef> {
    let v = |x: &Vector| x.iter().copied().collect::<Vec<f64>>();
    Some(match body {
        Body::Polytope(p) => BodyDef::Polytope {
            normals: p.normals().iter().map(v).collect(),
            offsets: p.offsets().to_vec(),
        },
        Body::Ball(b) => BodyDef::Ball { center: v(&b.center), radius: b.radius },
        Body::Cone(c) => BodyDef::Cone {
            base_center: v(&c.base_center),
            base_radius: c.base_radius,
            apex_height: c.apex_height,
        },
        Body::Product(p) => BodyDef::Product {
            factors: p.factors.iter().map(|f| body_def(f).map(FactorDef::Inline)).collect::<Option<_>>()?,
        },
        Body::Oracle(_) => return None,
    })
}

pub fn emit_scene(scene: &Scene) -> Result<String, SceneError> {
    let mut bodies = BTreeMap::new();
    for (name, body) in &scene.bodies {
        let def = body_def(body).ok_or_else(|| SceneError {
            line: 0,
            kind: SceneErrorKind::Invalid,
            detail: format!("body {name:?} has no closed form"),
        })?;
        bodies.insert(name.clone(), def);
    }
    let d = ToleranceConfig::default();
    let t = &scene.tolerances;
    let pick = |a: f64, b: f64| (a != b).then_some(a);
    let file = SceneFile {
        dimension: scene.dimension,
        bodies,
        points: scene
            .points
            .iter()
            .map(|(k, pts)| (k.clone(), pts.iter().map(|p| p.iter().copied().collect()).collect()))
            .collect(),
        tolerances: ToleranceDef {
            eps_feas: pick(t.eps_feas, d.eps_feas),
            eps_margin: pick(t.eps_margin, d.eps_margin),
            direction_grid_size: (t.direction_grid_size != d.direction_grid_size).then_some(t.direction_grid_size),
            refine_iters: (t.refine_iters != d.refine_iters).then_some(t.refine_iters),
        },
    };
    Ok(serde_json::to_string_pretty(&file).expect("scene serializes") + "\n")
}
