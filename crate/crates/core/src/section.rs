//! The plane `Pi` of points with `w_j t_{ki} = w_i t_{kj}` for all in-block
//! pairs, the section of the ambient polytope by it, and exact checks that
//! the section is the generalized associahedron of the folded type with the
//! projected g-vector fan as normal fan.
//!
//! On `Pi` the free coordinates are `sigma_[i]`, with `s_j = w_j sigma_{P(j)}`.
//! A form with linear part `g` restricts to `project(g) . sigma + const`, so
//! the restricted forms of one orbit `{(k, j) : j in [i]}` are positive
//! multiples of each other and collapse to a single facet.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::affine::{g_vectors, propagate_forms, FormMap, GVector, ParamSet};
use crate::arquiver::{knit, MeshQuiver, ObjectId};
use crate::error::{Error, Result};
use crate::exactfield::{ExactScalar, Field};
use crate::folding::{symmetric_params, FoldSpec};
use crate::linalg;
use crate::polytope::{enumerate_vertices, normal_fan, polytope_from_forms, Facet, SimplePolytope};
use crate::report::{Check, Report};

/// `linear . sigma + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedForm {
    pub linear: Vec<ExactScalar>,
    pub constant: ExactScalar,
}

impl RestrictedForm {
    fn scaled(&self, f: &ExactScalar) -> RestrictedForm {
        RestrictedForm {
            linear: self.linear.iter().map(|x| x * f).collect(),
            constant: &self.constant * f,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SectionPlane {
    pub fold: FoldSpec,
    pub mq: MeshQuiver,
    pub params: ParamSet,
    pub forms: FormMap,
    pub restricted: BTreeMap<ObjectId, RestrictedForm>,
}

impl SectionPlane {
    pub fn field(&self) -> &Field {
        &self.fold.field
    }

    pub fn dim(&self) -> usize {
        self.fold.target_rank()
    }

    /// `s_j = w_j sigma_{P(j)}`.
    pub fn parametrize(&self, sigma: &[ExactScalar]) -> Vec<ExactScalar> {
        (0..self.fold.source_rank())
            .map(|j| &self.fold.weights[j] * &sigma[self.fold.block_of[j]])
            .collect()
    }

    /// Inverse of `parametrize` on points of `Pi`; `None` off the plane.
    pub fn coordinates(&self, s: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
        let sigma: Vec<ExactScalar> = self
            .fold
            .blocks
            .iter()
            .map(|b| s[b[0]].checked_div(&self.fold.weights[b[0]]).expect("positive weight"))
            .collect();
        (self.parametrize(&sigma) == s).then_some(sigma)
    }

    /// Objects `(k, j)` with `j` in the block of `id.row`.
    pub fn orbit(&self, id: ObjectId) -> Vec<ObjectId> {
        self.fold.blocks[self.fold.block_of[id.row]]
            .iter()
            .map(|&j| ObjectId::new(id.k, j))
            .filter(|o| self.mq.contains(*o))
            .collect()
    }
}

/// Restricts the forms of `mq` under `params` to `Pi` and checks the defining
/// identities `w_j t_{ki} = w_i t_{kj}` hold identically in `sigma`.
pub fn build_pi(fold: &FoldSpec, mq: &MeshQuiver, params: &ParamSet) -> Result<SectionPlane> {
    if mq.quiver.cartan != fold.source_type() || mq.quiver.arrows != fold.source.arrows {
        return Err(crate::error::invalid("mesh quiver and folding have different quivers"));
    }
    let forms = propagate_forms(mq, params)?;
    let field = fold.field.clone();
    let restricted: BTreeMap<ObjectId, RestrictedForm> = forms
        .iter()
        .map(|(id, f)| {
            let constant = &f.constant + &ExactScalar::zero(&field);
            (*id, RestrictedForm { linear: fold.project_ints(&f.linear), constant })
        })
        .collect();
    let plane = SectionPlane {
        fold: fold.clone(),
        mq: mq.clone(),
        params: params.clone(),
        forms,
        restricted,
    };
    for id in mq.ids() {
        for other in plane.orbit(id) {
            if other <= id {
                continue;
            }
            let a = plane.restricted[&id].scaled(&fold.weights[other.row]);
            let b = plane.restricted[&other].scaled(&fold.weights[id.row]);
            if a != b {
                return Err(Error::DimensionDeficiency(format!(
                    "w_{} t{} != w_{} t{} on Pi; the parameters are not symmetric, so Pi has dimension below {}",
                    other.row + 1,
                    id,
                    id.row + 1,
                    other,
                    fold.target_rank()
                )));
            }
        }
        if plane.orbit(id).len() != fold.blocks[fold.block_of[id.row]].len() {
            return Err(Error::Structural(format!("orbit of {id} is incomplete")));
        }
    }
    Ok(plane)
}

#[derive(Clone, Debug)]
pub struct SectionPolytope {
    pub polytope: SimplePolytope,
    /// Object -> representative of its facet class (the smallest object in the orbit).
    pub class_of: BTreeMap<ObjectId, ObjectId>,
}

impl SectionPolytope {
    pub fn classes(&self) -> Vec<ObjectId> {
        let set: BTreeSet<ObjectId> = self.class_of.values().copied().collect();
        set.into_iter().collect()
    }
}

/// Enumerates `Pi cap A_Q` in the coordinates `sigma`, one facet per orbit,
/// with form `t_rep / w_rep`.
pub fn section_polytope(plane: &SectionPlane) -> Result<SectionPolytope> {
    let fold = &plane.fold;
    let mut class_of = BTreeMap::new();
    let mut facets = Vec::new();
    for id in plane.mq.ids() {
        let rep = *plane.orbit(id).iter().min().expect("orbit contains id");
        class_of.insert(id, rep);
        if rep == id {
            let f = plane.restricted[&id].scaled(&fold.weights[id.row].inverse()?);
            facets.push(Facet {
                id,
                linear: f.linear,
                constant: f.constant,
            });
        }
    }
    let start = vec![ExactScalar::zero(&fold.field); plane.dim()];
    let polytope = enumerate_vertices(plane.dim(), &fold.field, facets, start)?;
    Ok(SectionPolytope { polytope, class_of })
}

/// Indices of ambient vertices whose cluster is closed under blocks.
pub fn symmetric_vertices(ambient: &SimplePolytope, fold: &FoldSpec) -> Vec<usize> {
    ambient
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| {
            v.cluster.iter().all(|id| {
                fold.blocks[fold.block_of[id.row]].iter().all(|&j| {
                    let o = ObjectId::new(id.k, j);
                    v.cluster.binary_search(&o).is_ok() || ambient.facet(o).is_none()
                })
            })
        })
        .map(|(i, _)| i)
        .collect()
}

/// Symmetric ambient vertices, mapped into `sigma` coordinates, are exactly
/// the section vertices, with matching clusters.
pub fn check_symmetric_vertices(ambient: &SimplePolytope, plane: &SectionPlane, section: &SectionPolytope) -> Check {
    let sym = symmetric_vertices(ambient, &plane.fold);
    let mut witnesses = Vec::new();
    let mut seen = HashSet::new();
    for &a in &sym {
        let v = &ambient.vertices[a];
        let Some(sigma) = plane.coordinates(&v.coords) else {
            witnesses.push(format!("symmetric vertex {} is off Pi", show_cluster(&v.cluster)));
            continue;
        };
        let classes: BTreeSet<ObjectId> = v.cluster.iter().map(|id| section.class_of[id]).collect();
        let classes: Vec<ObjectId> = classes.into_iter().collect();
        match section.polytope.vertex_index(&classes) {
            Some(p) if section.polytope.vertices[p].coords == sigma => {
                seen.insert(p);
            }
            _ => witnesses.push(format!("symmetric vertex {} has no section counterpart", show_cluster(&v.cluster))),
        }
    }
    if seen.len() != section.polytope.vertices.len() {
        witnesses.push(format!(
            "{} section vertices, {} reached from symmetric ambient vertices",
            section.polytope.vertices.len(),
            seen.len()
        ));
    }
    Check::from_witnesses(
        "symmetric_vertices",
        format!("{} of {} ambient vertices are symmetric", sym.len(), ambient.vertices.len()),
        witnesses,
    )
}

fn show_cluster(c: &[ObjectId]) -> String {
    c.iter().map(|id| id.to_string()).collect::<Vec<_>>().join("")
}

/// Scales a nonzero vector so that its first nonzero entry is `+1` or `-1`.
pub fn normalize_ray(v: &[ExactScalar]) -> Vec<ExactScalar> {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(lead) => {
            let inv = lead.abs().inverse().expect("nonzero");
            v.iter().map(|x| x * &inv).collect()
        }
    }
}

/// Interns normalized rays so that cones compare as index sets.
#[derive(Default)]
struct RayIndex {
    index: HashMap<Vec<ExactScalar>, usize>,
}

impl RayIndex {
    fn id(&mut self, v: &[ExactScalar]) -> usize {
        let key = normalize_ray(v);
        let next = self.index.len();
        *self.index.entry(key).or_insert(next)
    }
}

/// Projected g-vectors `pi_w(g_{ki})` of all objects.
pub fn projected_g_vectors(plane: &SectionPlane) -> BTreeMap<ObjectId, Vec<ExactScalar>> {
    g_vectors(&plane.mq)
        .into_iter()
        .map(|(id, GVector(g))| (id, plane.fold.project_w(&g, id.row)))
        .collect()
}

/// The exact fan checks:
///  * (i) section facet normals = `pi_w(G)` as ray sets;
///  * (ii) section cones = cones of `pi_w(g)` over symmetric ambient clusters;
///  * (iii) each section facet normal is a positive multiple of `pi` of each
///    ambient normal in its class;
///  * (iv) the section fan is complete (sampled);
///
/// plus the vertex and facet counts of the target type, simplicity and flips.
pub fn verify_theorem(plane: &SectionPlane, section: &SectionPolytope, ambient: &SimplePolytope, samples: usize, seed: u64) -> Result<Report> {
    let fold = &plane.fold;
    let target = fold.target_type();
    let p = &section.polytope;
    let mut report = Report::default();

    let want_v = target.catalan_count() as usize;
    report.push(Check::expect(
        "vertex_count",
        p.vertices.len() == want_v,
        format!("{} vertices, Cat({target}) = {want_v}", p.vertices.len()),
    ));
    let facets = p.supporting_facets();
    let want_f = target.almost_positive_count() as usize;
    report.push(Check::expect(
        "facet_count",
        facets.len() == want_f && p.facets.len() == want_f,
        format!("{} facet classes, {} supporting; n'(h+2)/2 = {want_f}", p.facets.len(), facets.len()),
    ));
    report.push(match p.check_vertices().and_then(|_| p.check_flips()) {
        Ok(()) => Check::pass("simple_flips", "every vertex on exactly n' facets; edges are flips"),
        Err(e) => Check::from_witnesses("simple_flips", "simplicity and flips", vec![e.to_string()]),
    });

    let pw = projected_g_vectors(plane);
    let mut rays = RayIndex::default();
    let normal_rays: BTreeSet<usize> = facets.iter().map(|id| rays.id(&p.facet(*id).expect("facet").linear)).collect();
    let pw_rays: BTreeSet<usize> = pw.values().map(|v| rays.id(v)).collect();
    let diff: Vec<String> = normal_rays
        .symmetric_difference(&pw_rays)
        .map(|r| format!("ray #{r}"))
        .collect();
    report.push(Check::from_witnesses(
        "i_normals_eq_projected_g",
        format!("{} section normals, {} distinct pi_w(g) rays", normal_rays.len(), pw_rays.len()),
        diff,
    ));

    let section_cones: HashSet<BTreeSet<usize>> = p
        .vertices
        .iter()
        .map(|v| v.cluster.iter().map(|id| rays.id(&p.facet(*id).expect("facet").linear)).collect())
        .collect();
    let sym = symmetric_vertices(ambient, fold);
    let mut sym_cones: HashSet<BTreeSet<usize>> = HashSet::new();
    let mut witnesses = Vec::new();
    for &a in &sym {
        let cluster = &ambient.vertices[a].cluster;
        let cone: BTreeSet<usize> = cluster.iter().map(|id| rays.id(&pw[id])).collect();
        if cone.len() != plane.dim() {
            witnesses.push(format!("symmetric cluster {} spans {} rays", show_cluster(cluster), cone.len()));
        }
        sym_cones.insert(cone);
    }
    if section_cones != sym_cones {
        witnesses.push(format!(
            "{} section cones vs {} symmetric cones, {} in common",
            section_cones.len(),
            sym_cones.len(),
            section_cones.intersection(&sym_cones).count()
        ));
    }
    report.push(Check::from_witnesses(
        "ii_cones_eq_symmetric_clusters",
        format!("{} maximal cones", section_cones.len()),
        witnesses,
    ));

    let mut witnesses = Vec::new();
    for (id, rep) in &section.class_of {
        let normal = normalize_ray(&p.facet(*rep).expect("class facet").linear);
        let projected = normalize_ray(&fold.project_ints(&plane.forms[id].linear));
        if normal != projected {
            witnesses.push(format!("{id}"));
        }
    }
    report.push(Check::from_witnesses(
        "iii_normal_is_projected_normal",
        format!("{} ambient facets", section.class_of.len()),
        witnesses,
    ));

    let fan = normal_fan(p);
    let c = fan.check_completeness(samples, seed)?;
    report.push(Check::from_witnesses(
        "iv_fan_complete",
        format!("{} sampled directions, {} resampled on boundaries", c.samples, c.resampled),
        c.failures.iter().map(|(y, k)| format!("{y:?} in {k} cones")).collect(),
    ));
    report.push(check_symmetric_vertices(ambient, plane, section));
    Ok(report)
}

/// Every ambient facet meets the section in a face of dimension `n' - 1`:
/// the vertices of the section on which its class vanishes span an affine
/// space of that dimension.
pub fn verify_prop_intersections(plane: &SectionPlane, section: &SectionPolytope) -> Report {
    let p = &section.polytope;
    let n = plane.dim();
    let ids: Vec<ObjectId> = section.class_of.keys().copied().collect();
    let missed: Vec<String> = ids
        .par_iter()
        .filter_map(|id| {
            let rep = section.class_of[id];
            let on: Vec<&Vec<ExactScalar>> = p
                .vertices
                .iter()
                .filter(|v| v.cluster.binary_search(&rep).is_ok())
                .map(|v| &v.coords)
                .collect();
            let dim = match on.split_first() {
                None => return Some(format!("{id}: no section vertex")),
                Some((first, rest)) => {
                    let diffs: Vec<Vec<ExactScalar>> = rest
                        .iter()
                        .map(|v| v.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
                        .collect();
                    linalg::rank(&diffs)
                }
            };
            (on.len() < n || dim + 1 != n).then(|| format!("{id}: {} vertices spanning dimension {dim}", on.len()))
        })
        .collect();
    let mut report = Report::default();
    report.push(Check::from_witnesses(
        "prop_facets_meet_pi",
        format!("{} ambient facets, each meeting Pi in dimension {}", ids.len(), n.saturating_sub(1)),
        missed,
    ));
    report
}

/// For odd `h` the top slice is incomplete; the seed made of it together with
/// the previous slice on the missing rows is a symmetric cluster.
pub fn check_mixed_slice(ambient: &SimplePolytope, plane: &SectionPlane) -> Check {
    let h = plane.fold.source_type().coxeter_data().h;
    let mq = &plane.mq;
    let k = mq.max_k();
    let n = mq.rank();
    let mut seed: Vec<ObjectId> = (0..n)
        .map(|j| {
            let top = ObjectId::new(k, j);
            if mq.contains(top) {
                top
            } else {
                ObjectId::new(k - 1, j)
            }
        })
        .collect();
    seed.sort_unstable();
    let kind = if h % 2 == 1 { "mixed" } else { "full" };
    match ambient.vertex_index(&seed) {
        Some(v) if symmetric_vertices(ambient, &plane.fold).contains(&v) => {
            Check::pass("top_slice_seed", format!("{kind} top slice {} is a symmetric cluster (h = {h})", show_cluster(&seed)))
        }
        Some(_) => Check::from_witnesses("top_slice_seed", "not symmetric", vec![show_cluster(&seed)]),
        None => Check::from_witnesses("top_slice_seed", "not a cluster", vec![show_cluster(&seed)]),
    }
}

/// A complete folded run: ambient polytope under symmetric parameters, the
/// plane and the section.
#[derive(Clone, Debug)]
pub struct FoldRun {
    pub plane: SectionPlane,
    pub ambient: SimplePolytope,
    pub section: SectionPolytope,
}

pub fn run_fold(fold: &FoldSpec, base: &ExactScalar) -> Result<FoldRun> {
    let mq = knit(&fold.source)?;
    let params = symmetric_params(fold, &mq, base)?;
    let plane = build_pi(fold, &mq, &params)?;
    let ambient = polytope_from_forms(&plane.forms, &fold.field)?;
    let section = section_polytope(&plane)?;
    Ok(FoldRun { plane, ambient, section })
}

impl FoldRun {
    /// The theorem checks, the facet intersections and the top slice seed.
    pub fn verify(&self, samples: usize, seed: u64) -> Result<Report> {
        let mut r = verify_theorem(&self.plane, &self.section, &self.ambient, samples, seed)?;
        r.extend(verify_prop_intersections(&self.plane, &self.section));
        r.push(check_mixed_slice(&self.ambient, &self.plane));
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::load_folding;
    use crate::rootsystem::{build_quiver, CartanType, Orientation};

    fn t(s: &str) -> CartanType {
        s.parse().unwrap()
    }

    fn run(target: &str) -> FoldRun {
        let f = load_folding(t(target), None).unwrap();
        let one = ExactScalar::one(&f.field);
        run_fold(&f, &one).unwrap()
    }

    #[test]
    fn c2_hexagon() {
        let r = run("C2");
        assert_eq!(r.plane.dim(), 2);
        assert_eq!(r.section.polytope.vertices.len(), 6);
        assert_eq!(r.section.polytope.facets.len(), 6);
        assert_eq!(r.section.polytope.f_vector(), vec![6, 6]);
        assert_eq!(symmetric_vertices(&r.ambient, &r.plane.fold).len(), 6);
        let report = r.verify(200, 1).unwrap();
        assert!(report.passed(), "{report:#?}");
    }

    #[test]
    fn c2_projected_g_vectors_give_six_rays() {
        let r = run("C2");
        let rays: HashSet<Vec<ExactScalar>> = projected_g_vectors(&r.plane).values().map(|v| normalize_ray(v)).collect();
        assert_eq!(projected_g_vectors(&r.plane).len(), 9);
        assert_eq!(rays.len(), 6);
    }

    #[test]
    fn c2_initial_vertex_symmetric_and_broken_pair_not() {
        let r = run("C2");
        let sym = symmetric_vertices(&r.ambient, &r.plane.fold);
        let init: Vec<ObjectId> = (0..3).map(|i| ObjectId::new(1, i)).collect();
        assert!(sym.contains(&r.ambient.vertex_index(&init).unwrap()));
        for (i, v) in r.ambient.vertices.iter().enumerate() {
            let a = v.cluster.contains(&ObjectId::new(2, 0));
            let b = v.cluster.contains(&ObjectId::new(2, 2));
            if a != b {
                assert!(!sym.contains(&i));
            }
        }
    }

    #[test]
    fn asymmetric_parameters_rejected() {
        let f = load_folding(t("C2"), None).unwrap();
        let mq = knit(&f.source).unwrap();
        let one = ExactScalar::one(&f.field);
        let base = symmetric_params(&f, &mq, &one).unwrap();
        let mut values: BTreeMap<ObjectId, ExactScalar> = base.iter().map(|(k, v)| (*k, v.clone())).collect();
        values.insert(ObjectId::new(1, 0), ExactScalar::from_integer(&f.field, 2));
        let p = ParamSet::new(&f.field, values).unwrap();
        let err = build_pi(&f, &mq, &p).unwrap_err();
        assert!(matches!(err, Error::DimensionDeficiency(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn identity_section_is_the_polytope() {
        for ty in ["A1", "A3"] {
            let q = build_quiver(t(ty), Orientation::Bipartite).unwrap();
            let f = FoldSpec::identity(q).unwrap();
            let one = ExactScalar::one(&f.field);
            let r = run_fold(&f, &one).unwrap();
            assert_eq!(r.section.polytope.vertices.len(), r.ambient.vertices.len());
            for (a, b) in r.section.polytope.vertices.iter().zip(&r.ambient.vertices) {
                assert_eq!(a.cluster, b.cluster);
                assert_eq!(a.coords, b.coords);
            }
            let report = r.verify(100, 3).unwrap();
            assert!(report.passed(), "{report:#?}");
        }
    }

    #[test]
    fn a1_segment_facets_are_points() {
        let q = build_quiver(t("A1"), Orientation::Bipartite).unwrap();
        let f = FoldSpec::identity(q).unwrap();
        let r = run_fold(&f, &ExactScalar::one(&f.field)).unwrap();
        let rep = verify_prop_intersections(&r.plane, &r.section);
        assert!(rep.passed());
        assert!(rep.checks[0].detail.contains("dimension 0"));
    }

    #[test]
    fn dihedral_sections() {
        for (target, v) in [("I2(5)", 7), ("I2(4)", 6), ("G2", 8)] {
            let r = run(target);
            assert_eq!(r.section.polytope.vertices.len(), v, "{target}");
            let report = r.verify(200, 5).unwrap();
            assert!(report.passed(), "{target}: {report:#?}");
        }
    }

    #[test]
    fn parametrization_inverts() {
        let r = run("I2(5)");
        let f = r.plane.field().clone();
        let sigma = vec![ExactScalar::from_integer(&f, 3), ExactScalar::theta(&f)];
        let s = r.plane.parametrize(&sigma);
        assert_eq!(r.plane.coordinates(&s), Some(sigma));
        let mut off = s.clone();
        off[0] += &ExactScalar::one(&f);
        assert_eq!(r.plane.coordinates(&off), None);
    }
}
