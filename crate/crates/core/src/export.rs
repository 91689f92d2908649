//! JSON and OFF output. JSON carries exact scalars (power-basis coefficients)
//! with decimal approximations; OFF carries only the approximations.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::affine::ParamSet;
use crate::arquiver::ObjectId;
use crate::error::{invalid, Error, Result};
use crate::exactfield::{make_field, ExactScalar, Field, ScalarJson};
use crate::folding::{FoldJson, FoldSpec};
use crate::polytope::{Facet, Fan, SimplePolytope, Vertex};
use crate::report::Report;
use crate::section::{FoldRun, SectionPolytope};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    /// `theta = 2cos(pi/m)`.
    pub m: u32,
    pub min_poly: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamJson {
    pub object: [usize; 2],
    pub c: ScalarJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub cluster: Vec<[usize; 2]>,
    pub coords: Vec<ScalarJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetJson {
    pub object: [usize; 2],
    pub normal: Vec<ScalarJson>,
    #[serde(rename = "const")]
    pub constant: ScalarJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    #[serde(rename = "type")]
    pub type_label: String,
    pub field: FieldJson,
    pub dim: usize,
    pub f_vector: Vec<usize>,
    pub params: Vec<ParamJson>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    pub facets: Vec<FacetJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub rays: Vec<FanRayJson>,
    /// Indices into `rays`.
    pub cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanRayJson {
    pub object: [usize; 2],
    pub ray: Vec<ScalarJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassJson {
    pub object: [usize; 2],
    pub class: [usize; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionJson {
    pub fold: FoldJson,
    pub ambient_f_vector: Vec<usize>,
    pub section: PolytopeJson,
    pub fan: FanJson,
    pub classes: Vec<ClassJson>,
}

pub fn field_json(f: &Field) -> FieldJson {
    FieldJson {
        m: f.order(),
        min_poly: f.minimal_polynomial().iter().map(|c| c.to_string()).collect(),
    }
}

fn scalars(v: &[ExactScalar]) -> Vec<ScalarJson> {
    v.iter().map(|x| x.to_json()).collect()
}

pub fn polytope_json(p: &SimplePolytope, type_label: &str, params: Option<&ParamSet>) -> PolytopeJson {
    PolytopeJson {
        type_label: type_label.to_string(),
        field: field_json(&p.field),
        dim: p.dim,
        f_vector: p.f_vector(),
        params: params
            .map(|ps| {
                ps.iter()
                    .map(|(id, c)| ParamJson {
                        object: id.to_pair(),
                        c: c.to_json(),
                    })
                    .collect()
            })
            .unwrap_or_default(),
        vertices: p
            .vertices
            .iter()
            .map(|v| VertexJson {
                cluster: v.cluster.iter().map(|id| id.to_pair()).collect(),
                coords: scalars(&v.coords),
            })
            .collect(),
        edges: p.edges.iter().map(|&(a, b)| [a, b]).collect(),
        facets: p
            .facets
            .iter()
            .map(|f| FacetJson {
                object: f.id.to_pair(),
                normal: scalars(&f.linear),
                constant: f.constant.to_json(),
            })
            .collect(),
    }
}

pub fn fan_json(fan: &Fan) -> FanJson {
    FanJson {
        rays: fan
            .ray_ids
            .iter()
            .zip(&fan.rays)
            .map(|(id, r)| FanRayJson {
                object: id.to_pair(),
                ray: scalars(r),
            })
            .collect(),
        cones: fan.cones.clone(),
    }
}

pub fn section_json(run: &FoldRun) -> SectionJson {
    let fold: &FoldSpec = &run.plane.fold;
    let label = format!("{} section of {}", fold.target_type(), fold.source_type());
    let s: &SectionPolytope = &run.section;
    SectionJson {
        fold: fold.to_json(),
        ambient_f_vector: run.ambient.f_vector(),
        section: polytope_json(&s.polytope, &label, Some(&run.plane.params)),
        fan: fan_json(&crate::polytope::normal_fan(&s.polytope)),
        classes: s
            .class_of
            .iter()
            .map(|(id, c)| ClassJson {
                object: id.to_pair(),
                class: c.to_pair(),
            })
            .collect(),
    }
}

/// Rebuilds a polytope from its JSON form, checking every field against the
/// declared field.
pub fn polytope_from_json(j: &PolytopeJson) -> Result<SimplePolytope> {
    let field = make_field(j.field.m)?;
    let declared: Vec<String> = field.minimal_polynomial().iter().map(|c| c.to_string()).collect();
    if declared != j.field.min_poly {
        return Err(invalid(format!("minimal polynomial does not match m = {}", j.field.m)));
    }
    let read = |v: &[ScalarJson]| -> Result<Vec<ExactScalar>> { v.iter().map(|s| ExactScalar::from_json(&field, s)).collect() };
    let vertices = j
        .vertices
        .iter()
        .map(|v| {
            Ok(Vertex {
                cluster: v.cluster.iter().map(|p| ObjectId::from_pair(*p)).collect(),
                coords: read(&v.coords)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let facets = j
        .facets
        .iter()
        .map(|f| {
            Ok(Facet {
                id: ObjectId::from_pair(f.object),
                linear: read(&f.normal)?,
                constant: ExactScalar::from_json(&field, &f.constant)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
    if edges.iter().any(|&(a, b)| a >= vertices.len() || b >= vertices.len()) {
        return Err(invalid("edge refers to a missing vertex"));
    }
    Ok(SimplePolytope {
        dim: j.dim,
        field,
        facets,
        vertices,
        edges,
    })
}

/// Writes `contents` to `path` atomically: a temporary sibling is renamed
/// into place so that failures leave no partial file.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn export_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    write_file(path, &to_json_string(value)?)
}

pub fn report_json(report: &Report) -> Result<String> {
    to_json_string(report)
}

/// Vertices of facet `id`, ordered along the boundary cycle of that 2-face.
fn facet_cycle(p: &SimplePolytope, id: ObjectId) -> Vec<usize> {
    let on: Vec<usize> = (0..p.vertices.len())
        .filter(|&v| p.vertices[v].cluster.binary_search(&id).is_ok())
        .collect();
    let adjacent = |a: usize| -> Vec<usize> {
        p.edges
            .iter()
            .filter_map(|&(x, y)| match (x == a, y == a) {
                (true, _) if on.contains(&y) => Some(y),
                (_, true) if on.contains(&x) => Some(x),
                _ => None,
            })
            .collect()
    };
    let Some(&first) = on.first() else {
        return Vec::new();
    };
    let mut cycle = vec![first];
    let mut prev = usize::MAX;
    let mut cur = first;
    loop {
        let next = adjacent(cur).into_iter().filter(|&x| x != prev).min();
        match next {
            Some(x) if x != first && !cycle.contains(&x) => {
                cycle.push(x);
                prev = cur;
                cur = x;
            }
            _ => break,
        }
    }
    cycle
}

fn approx(v: &[ExactScalar]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64()).collect()
}

/// OFF text. In dimension 3 every facet is a face, wound so that its normal
/// points outwards; a polygon is one face in the plane `z = 0`; in higher
/// dimension only the vertices are written, projected to the last three
/// coordinates.
pub fn off_string(p: &SimplePolytope) -> String {
    let pts: Vec<Vec<f64>> = p
        .vertices
        .iter()
        .map(|v| {
            let c = approx(&v.coords);
            let mut xyz: Vec<f64> = c.iter().skip(c.len().saturating_sub(3)).copied().collect();
            xyz.resize(3, 0.0);
            xyz
        })
        .collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    match p.dim {
        2 => {
            let mut cycle: Vec<usize> = Vec::new();
            if let Some(f) = p.supporting_facets().first() {
                // walk the whole boundary: start from the edge on the first facet
                let start = facet_cycle(p, *f);
                if let Some(&s) = start.first() {
                    cycle.push(s);
                    let mut prev = usize::MAX;
                    let mut cur = s;
                    loop {
                        let next = p
                            .edges
                            .iter()
                            .filter_map(|&(a, b)| if a == cur { Some(b) } else if b == cur { Some(a) } else { None })
                            .filter(|&x| x != prev)
                            .min();
                        match next {
                            Some(x) if x != s => {
                                cycle.push(x);
                                prev = cur;
                                cur = x;
                            }
                            _ => break,
                        }
                    }
                }
            }
            let area: f64 = (0..cycle.len())
                .map(|i| {
                    let (a, b) = (&pts[cycle[i]], &pts[cycle[(i + 1) % cycle.len()]]);
                    a[0] * b[1] - a[1] * b[0]
                })
                .sum();
            if area < 0.0 {
                cycle.reverse();
            }
            faces.push(cycle);
        }
        3 => {
            for f in p.supporting_facets() {
                let mut cycle = facet_cycle(p, f);
                if cycle.len() >= 3 {
                    let (a, b, c) = (&pts[cycle[0]], &pts[cycle[1]], &pts[cycle[2]]);
                    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
                    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
                    let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
                    let inner = approx(&p.facet(f).expect("facet").linear);
                    let d: f64 = n.iter().zip(&inner).map(|(x, y)| x * y).sum();
                    if d > 0.0 {
                        cycle.reverse();
                    }
                }
                faces.push(cycle);
            }
        }
        _ => {}
    }
    let mut out = String::from("OFF\n");
    let _ = writeln!(out, "{} {} 0", pts.len(), faces.len());
    for q in &pts {
        let _ = writeln!(out, "{} {} {}", fmt_f64(q[0]), fmt_f64(q[1]), fmt_f64(q[2]));
    }
    for f in &faces {
        let idx: Vec<String> = f.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{} {}", f.len(), idx.join(" "));
    }
    out
}

fn fmt_f64(x: f64) -> String {
    crate::exactfield::format_sig12(x)
}

pub fn export_off(p: &SimplePolytope, path: &Path) -> Result<()> {
    write_file(path, &off_string(p))
}
