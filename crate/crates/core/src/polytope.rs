//! H-polytopes `{x : t_j(x) >= 0}` that are simple, with vertex enumeration by
//! pivoting along edges from a known starting vertex.
//!
//! Every vertex is labelled by its cluster: the set of facets tight at it,
//! which for a simple polytope has exactly `dim` elements. Traversal is
//! breadth-first over the edge graph; at each vertex one tight facet is dropped,
//! the edge direction is the matching column of the inverse of the tight
//! normal matrix, and the entering facet is found by an exact minimum-ratio test.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::affine::FormMap;
use crate::arquiver::ObjectId;
use crate::error::{Error, Result};
use crate::exactfield::{ExactScalar, Field};
use crate::linalg;

/// The half-space `linear . x + constant >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub id: ObjectId,
    pub linear: Vec<ExactScalar>,
    pub constant: ExactScalar,
}

impl Facet {
    pub fn eval(&self, x: &[ExactScalar]) -> ExactScalar {
        let mut acc = self.constant.clone();
        for (a, b) in self.linear.iter().zip(x) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    /// Ids of the tight facets, sorted.
    pub cluster: Vec<ObjectId>,
    pub coords: Vec<ExactScalar>,
}

#[derive(Clone, Debug)]
pub struct SimplePolytope {
    pub dim: usize,
    pub field: Field,
    /// Sorted by id.
    pub facets: Vec<Facet>,
    /// Sorted by cluster.
    pub vertices: Vec<Vertex>,
    /// Vertex index pairs `(a, b)`, `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
}

pub fn facets_from_forms(forms: &FormMap, field: &Field) -> Vec<Facet> {
    forms
        .iter()
        .map(|(id, f)| Facet {
            id: *id,
            linear: f.linear_scalars(field),
            constant: f.constant.clone(),
        })
        .collect()
}

type Key = Vec<usize>;

struct Step {
    from: Key,
    to: Key,
    coords: Vec<ExactScalar>,
}

fn describe(facets: &[Facet], key: &[usize]) -> String {
    key.iter().map(|&i| facets[i].id.to_string()).collect::<Vec<_>>().join(" ")
}

/// Facets tight at `x`; errors if `x` violates a facet or is not simple.
fn tight_set(facets: &[Facet], x: &[ExactScalar], dim: usize) -> Result<(Key, Vec<ExactScalar>)> {
    let values: Vec<ExactScalar> = facets.iter().map(|f| f.eval(x)).collect();
    let mut tight = Vec::with_capacity(dim);
    for (j, v) in values.iter().enumerate() {
        match v.sign() {
            0 => tight.push(j),
            -1 => {
                return Err(Error::Structural(format!(
                    "point violates facet {} (value {v})",
                    facets[j].id
                )))
            }
            _ => {}
        }
    }
    if tight.len() != dim {
        return Err(Error::NonSimple(format!(
            "{} tight facets [{}] in dimension {dim}",
            tight.len(),
            describe(facets, &tight)
        )));
    }
    Ok((tight, values))
}

fn pivots(facets: &[Facet], dim: usize, field: &Field, key: &Key, x: &[ExactScalar]) -> Result<Vec<Step>> {
    let (tight, values) = tight_set(facets, x, dim)?;
    if &tight != key {
        return Err(Error::NonSimple(format!(
            "expected tight set [{}], found [{}]",
            describe(facets, key),
            describe(facets, &tight)
        )));
    }
    let normals: Vec<Vec<ExactScalar>> = key.iter().map(|&j| facets[j].linear.clone()).collect();
    let inv = linalg::inverse(&normals, field)
        .map_err(|_| Error::NonSimple(format!("tight normals at [{}] are dependent", describe(facets, key))))?;
    let mut steps = Vec::with_capacity(dim);
    for (p, &leaving) in key.iter().enumerate() {
        let dir: Vec<ExactScalar> = (0..dim).map(|r| inv[r][p].clone()).collect();
        let mut best: Option<(usize, ExactScalar)> = None;
        let mut tie = false;
        for (j, f) in facets.iter().enumerate() {
            if key.contains(&j) {
                continue;
            }
            let rate = linalg::dot(&f.linear, &dir, field);
            if rate.sign() >= 0 {
                continue;
            }
            let ratio = values[j].checked_div(&-rate)?;
            match &best {
                None => best = Some((j, ratio)),
                Some((_, r)) => match ratio.cmp_exact(r)? {
                    std::cmp::Ordering::Less => {
                        best = Some((j, ratio));
                        tie = false;
                    }
                    std::cmp::Ordering::Equal => tie = true,
                    std::cmp::Ordering::Greater => {}
                },
            }
        }
        let (entering, step) = best.ok_or_else(|| {
            Error::Unbounded(format!("[{}] leaving {}", describe(facets, key), facets[leaving].id))
        })?;
        if tie {
            return Err(Error::NonSimple(format!(
                "minimum-ratio tie leaving {} from [{}]",
                facets[leaving].id,
                describe(facets, key)
            )));
        }
        let coords: Vec<ExactScalar> = x.iter().zip(&dir).map(|(a, d)| a + &(&step * d)).collect();
        let mut to: Key = key.iter().copied().filter(|&j| j != leaving).collect();
        to.push(entering);
        to.sort_unstable();
        steps.push(Step {
            from: key.clone(),
            to,
            coords,
        });
    }
    Ok(steps)
}

/// Enumerates all vertices and edges of the simple polytope cut out by
/// `facets`, starting from the vertex `start`.
pub fn enumerate_vertices(dim: usize, field: &Field, facets: Vec<Facet>, start: Vec<ExactScalar>) -> Result<SimplePolytope> {
    let mut facets = facets;
    facets.sort_by_key(|f| f.id);
    if start.len() != dim || facets.iter().any(|f| f.linear.len() != dim) {
        return Err(crate::error::invalid("facet or start point dimension mismatch"));
    }
    let (start_key, _) = tight_set(&facets, &start, dim)?;

    let mut found: HashMap<Key, Vec<ExactScalar>> = HashMap::new();
    found.insert(start_key.clone(), start.clone());
    let mut edge_keys: Vec<(Key, Key)> = Vec::new();
    let mut frontier: Vec<(Key, Vec<ExactScalar>)> = vec![(start_key, start)];
    while !frontier.is_empty() {
        let results: Vec<Result<Vec<Step>>> = frontier
            .par_iter()
            .map(|(key, x)| pivots(&facets, dim, field, key, x))
            .collect();
        let mut next = Vec::new();
        for r in results {
            for step in r? {
                if step.from < step.to {
                    edge_keys.push((step.from.clone(), step.to.clone()));
                } else {
                    edge_keys.push((step.to.clone(), step.from.clone()));
                }
                if !found.contains_key(&step.to) {
                    found.insert(step.to.clone(), step.coords.clone());
                    next.push((step.to, step.coords));
                }
            }
        }
        frontier = next;
    }

    let mut vertices: Vec<(Vec<ObjectId>, Key, Vec<ExactScalar>)> = found
        .into_iter()
        .map(|(key, coords)| (key.iter().map(|&j| facets[j].id).collect(), key, coords))
        .collect();
    vertices.sort_by(|a, b| a.0.cmp(&b.0));
    let position: HashMap<&Key, usize> = vertices.iter().enumerate().map(|(p, v)| (&v.1, p)).collect();
    let mut edges: Vec<(usize, usize)> = edge_keys
        .iter()
        .map(|(a, b)| {
            let (x, y) = (position[a], position[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let vertices = vertices
        .into_iter()
        .map(|(cluster, _, coords)| Vertex { cluster, coords })
        .collect();
    Ok(SimplePolytope {
        dim,
        field: field.clone(),
        facets,
        vertices,
        edges,
    })
}

/// Polytope of the forms `t_alpha(s) >= 0`, starting from the initial vertex `s = 0`.
pub fn polytope_from_forms(forms: &FormMap, field: &Field) -> Result<SimplePolytope> {
    let dim = forms.values().next().map_or(0, |f| f.linear.len());
    let start = vec![ExactScalar::zero(field); dim];
    enumerate_vertices(dim, field, facets_from_forms(forms, field), start)
}

impl SimplePolytope {
    pub fn facet(&self, id: ObjectId) -> Option<&Facet> {
        self.facets.binary_search_by_key(&id, |f| f.id).ok().map(|p| &self.facets[p])
    }

    /// Facets that are tight at some vertex.
    pub fn supporting_facets(&self) -> Vec<ObjectId> {
        let mut ids: Vec<ObjectId> = self.vertices.iter().flat_map(|v| v.cluster.iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// `(vertices, edges, ..., facets)`: full for `dim <= 3`, otherwise vertices, edges and facets.
    pub fn f_vector(&self) -> Vec<usize> {
        let v = self.vertices.len();
        let e = self.edges.len();
        let f = self.supporting_facets().len();
        match self.dim {
            0 => vec![v],
            1 => vec![v],
            2 => vec![v, e],
            _ => vec![v, e, f],
        }
    }

    /// Adjacent clusters differ in exactly one element.
    pub fn check_flips(&self) -> Result<()> {
        for &(a, b) in &self.edges {
            let ca = &self.vertices[a].cluster;
            let cb = &self.vertices[b].cluster;
            let common = ca.iter().filter(|x| cb.contains(x)).count();
            if common + 1 != self.dim {
                return Err(Error::Verification(format!("edge {a}-{b} is not a flip")));
            }
        }
        Ok(())
    }

    /// Re-checks simplicity and feasibility at every vertex.
    pub fn check_vertices(&self) -> Result<()> {
        for v in &self.vertices {
            let mut tight = Vec::new();
            for f in &self.facets {
                match f.eval(&v.coords).sign() {
                    0 => tight.push(f.id),
                    -1 => return Err(Error::Verification(format!("vertex violates facet {}", f.id))),
                    _ => {}
                }
            }
            if tight != v.cluster {
                return Err(Error::Verification("vertex cluster differs from its tight facets".into()));
            }
        }
        Ok(())
    }

    pub fn vertex_index(&self, cluster: &[ObjectId]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.cluster.as_slice().cmp(cluster)).ok()
    }
}

/// A simplicial fan given by rays and maximal cones (sets of ray indices).
#[derive(Clone, Debug)]
pub struct Fan {
    pub field: Field,
    pub rays: Vec<Vec<ExactScalar>>,
    pub ray_ids: Vec<ObjectId>,
    pub cones: Vec<Vec<usize>>,
}

/// Inner normal fan: one ray per facet (its linear part), one cone per vertex.
pub fn normal_fan(p: &SimplePolytope) -> Fan {
    let ids = p.supporting_facets();
    let rays = ids.iter().map(|id| p.facet(*id).expect("facet").linear.clone()).collect();
    let index: HashMap<ObjectId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let cones = p
        .vertices
        .iter()
        .map(|v| v.cluster.iter().map(|id| index[id]).collect())
        .collect();
    Fan {
        field: p.field.clone(),
        rays,
        ray_ids: ids,
        cones,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    pub samples: usize,
    pub resampled: usize,
    /// Directions lying in a number of open cones other than one.
    pub failures: Vec<(Vec<i64>, usize)>,
}

impl CompletenessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Fan {
    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, |r| r.len())
    }

    /// Coordinates of `y` in each cone's ray basis: `a` with `y = sum a_r ray_r`.
    fn cone_inverses(&self) -> Result<Vec<linalg::Matrix>> {
        self.cones
            .par_iter()
            .map(|c| {
                let m: Vec<Vec<ExactScalar>> = c.iter().map(|&r| self.rays[r].clone()).collect();
                linalg::inverse(&m, &self.field)
            })
            .collect()
    }

    /// Samples integer directions and checks each lies in the interior of
    /// exactly one maximal cone; directions on a cone boundary are redrawn.
    pub fn check_completeness(&self, samples: usize, seed: u64) -> Result<CompletenessReport> {
        let inverses = self.cone_inverses()?;
        let n = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = CompletenessReport {
            samples,
            resampled: 0,
            failures: Vec::new(),
        };
        let mut done = 0;
        while done < samples {
            let y: Vec<i64> = (0..n).map(|_| rng.random_range(-1000..=1000)).collect();
            let ys: Vec<ExactScalar> = y.iter().map(|&v| ExactScalar::from_integer(&self.field, v)).collect();
            let mut inside = 0;
            let mut boundary = false;
            for inv in &inverses {
                let mut all_pos = true;
                for c in 0..n {
                    let mut a = ExactScalar::zero(&self.field);
                    for (r, yr) in ys.iter().enumerate() {
                        if !yr.is_zero() && !inv[r][c].is_zero() {
                            a += &(yr * &inv[r][c]);
                        }
                    }
                    match a.sign() {
                        -1 => {
                            all_pos = false;
                            break;
                        }
                        0 => {
                            boundary = true;
                            all_pos = false;
                            break;
                        }
                        _ => {}
                    }
                }
                if all_pos {
                    inside += 1;
                }
            }
            if boundary && inside == 0 {
                report.resampled += 1;
                continue;
            }
            if boundary {
                report.resampled += 1;
                continue;
            }
            if inside != 1 {
                report.failures.push((y, inside));
            }
            done += 1;
        }
        Ok(report)
    }
}
