//! Affine forms `t_alpha(s)` obtained by propagating the mesh equations from
//! the free initial-slice coordinates `s_i = t_{1i}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arquiver::{MeshQuiver, ObjectId};
use crate::error::{invalid, Error, Result};
use crate::exactfield::{ExactScalar, Field, ScalarJson};
use crate::linalg;

/// Positive mesh parameters `c`, keyed by the start object of each mesh.
#[derive(Clone, Debug)]
pub struct ParamSet {
    field: Field,
    values: BTreeMap<ObjectId, ExactScalar>,
}

impl ParamSet {
    pub fn new(field: &Field, values: BTreeMap<ObjectId, ExactScalar>) -> Result<Self> {
        for (id, c) in &values {
            if !c.is_positive() {
                return Err(invalid(format!("parameter c at {id} must be positive, got {c}")));
            }
        }
        Ok(ParamSet { field: field.clone(), values })
    }

    /// The same value on every mesh.
    pub fn uniform(mq: &MeshQuiver, value: &ExactScalar) -> Result<Self> {
        let values = mq.meshes().iter().map(|m| (m.start, value.clone())).collect();
        Self::new(value.field(), values)
    }

    /// Unchecked all-zero parameters; their forms are the g-vectors.
    pub fn zero(mq: &MeshQuiver, field: &Field) -> Self {
        let values = mq.meshes().iter().map(|m| (m.start, ExactScalar::zero(field))).collect();
        ParamSet { field: field.clone(), values }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, start: ObjectId) -> Option<&ExactScalar> {
        self.values.get(&start)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ObjectId, &ExactScalar)> {
        self.values.iter()
    }

    pub fn scaled(&self, factor: &ExactScalar) -> Result<Self> {
        let values = self.values.iter().map(|(k, v)| (*k, v * factor)).collect();
        Self::new(&self.field, values)
    }
}

/// Integer g-vector in the basis of the initial seed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GVector(pub Vec<i64>);

/// `t(s) = linear . s + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub linear: Vec<i64>,
    pub constant: ExactScalar,
}

impl AffineForm {
    pub fn eval(&self, s: &[ExactScalar]) -> ExactScalar {
        let mut acc = self.constant.clone();
        for (c, x) in self.linear.iter().zip(s) {
            if *c != 0 && !x.is_zero() {
                acc += &(x * &ExactScalar::from_integer(x.field(), *c));
            }
        }
        acc
    }

    pub fn linear_scalars(&self, field: &Field) -> Vec<ExactScalar> {
        self.linear.iter().map(|&c| ExactScalar::from_integer(field, c)).collect()
    }

    pub fn g_vector(&self) -> GVector {
        GVector(self.linear.clone())
    }
}

pub type FormMap = BTreeMap<ObjectId, AffineForm>;

/// Forward substitution through the meshes in knitting order.
pub fn propagate_forms(mq: &MeshQuiver, params: &ParamSet) -> Result<FormMap> {
    let n = mq.rank();
    let field = params.field();
    let mut forms: FormMap = BTreeMap::new();
    for i in 0..n {
        let mut linear = vec![0; n];
        linear[i] = 1;
        forms.insert(
            ObjectId::new(1, i),
            AffineForm {
                linear,
                constant: ExactScalar::zero(field),
            },
        );
    }
    for mesh in mq.meshes() {
        let c = params
            .get(mesh.start)
            .ok_or_else(|| invalid(format!("missing parameter for the mesh at {}", mesh.start)))?;
        let start = &forms[&mesh.start];
        let mut linear: Vec<i64> = start.linear.iter().map(|x| -x).collect();
        let mut constant = c - &start.constant;
        for m in &mesh.middles {
            let f = &forms[m];
            for (a, b) in linear.iter_mut().zip(&f.linear) {
                *a += b;
            }
            constant += &f.constant;
        }
        forms.insert(mesh.end, AffineForm { linear, constant });
    }
    Ok(forms)
}

/// Linear parts of the forms; these solve the meshes with all `c = 0`.
pub fn g_vectors(mq: &MeshQuiver) -> BTreeMap<ObjectId, GVector> {
    let n = mq.rank();
    let mut g: BTreeMap<ObjectId, Vec<i64>> = BTreeMap::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        g.insert(ObjectId::new(1, i), e);
    }
    for mesh in mq.meshes() {
        let mut v: Vec<i64> = g[&mesh.start].iter().map(|x| -x).collect();
        for m in &mesh.middles {
            for (a, b) in v.iter_mut().zip(&g[m]) {
                *a += b;
            }
        }
        g.insert(mesh.end, v);
    }
    g.into_iter().map(|(k, v)| (k, GVector(v))).collect()
}

/// Common zero of the `n` forms of `cluster`.
pub fn solve_vertex(cluster: &[ObjectId], forms: &FormMap, field: &Field) -> Result<Vec<ExactScalar>> {
    let rows = cluster
        .iter()
        .map(|id| {
            forms
                .get(id)
                .map(|f| f.linear_scalars(field))
                .ok_or_else(|| invalid(format!("no object {id}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let rhs: Vec<ExactScalar> = cluster.iter().map(|id| -&forms[id].constant).collect();
    linalg::bareiss_solve(&rows, &rhs).map_err(|e| match e {
        Error::Singular(_) => Error::Singular(format!(
            "{} is not a cluster",
            cluster.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        )),
        other => other,
    })
}

/// Residual `t_start + t_end - sum t_middle - c` of every mesh, as affine forms;
/// all are identically zero for propagated forms.
pub fn mesh_residuals(mq: &MeshQuiver, forms: &FormMap, params: &ParamSet) -> Vec<AffineForm> {
    mq.meshes()
        .iter()
        .map(|mesh| {
            let (a, b) = (&forms[&mesh.start], &forms[&mesh.end]);
            let mut linear: Vec<i64> = a.linear.iter().zip(&b.linear).map(|(x, y)| x + y).collect();
            let mut constant = &a.constant + &b.constant;
            for m in &mesh.middles {
                for (x, y) in linear.iter_mut().zip(&forms[m].linear) {
                    *x -= y;
                }
                constant -= &forms[m].constant;
            }
            constant -= params.get(mesh.start).expect("parameter present");
            AffineForm { linear, constant }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub object: [usize; 2],
    pub g: Vec<i64>,
    #[serde(rename = "const")]
    pub constant: ScalarJson,
}

pub fn forms_to_json(forms: &FormMap) -> Vec<FormJson> {
    forms
        .iter()
        .map(|(id, f)| FormJson {
            object: id.to_pair(),
            g: f.linear.clone(),
            constant: f.constant.to_json(),
        })
        .collect()
}
