//! Knitting the translation quiver of `C_Q`: the shifted projectives followed
//! by the indecomposable representations, each labelled by its almost positive
//! root, together with the mesh of every positive root.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::rationals;
use crate::rootsystem::{int_vec, QuiverSpec, RootSystem};

/// Object `(k, i)`: `k` counts applications of the inverse translation
/// (`k = 1` is the shifted projective slice), `row` is the vertex of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectId {
    pub k: u32,
    pub row: usize,
}

impl ObjectId {
    pub fn new(k: u32, row: usize) -> Self {
        ObjectId { k, row }
    }

    /// `[k, i]` with `i` 1-based.
    pub fn to_pair(self) -> [usize; 2] {
        [self.k as usize, self.row + 1]
    }

    pub fn from_pair(p: [usize; 2]) -> Self {
        ObjectId { k: p[0] as u32, row: p[1] - 1 }
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.row + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshObject {
    pub id: ObjectId,
    /// Coefficients over the simple roots; `-alpha_i` on the initial slice.
    pub root: Vec<i64>,
}

/// The mesh `t_start + t_end = sum t_middle + c_start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mesh {
    pub start: ObjectId,
    pub middles: Vec<ObjectId>,
    pub end: ObjectId,
}

#[derive(Clone, Debug)]
pub struct MeshQuiver {
    pub quiver: QuiverSpec,
    /// Sorted by `(k, row)`.
    pub objects: Vec<MeshObject>,
    /// Meshes in knitting order; each one determines its `end` from earlier objects.
    pub meshes: Vec<Mesh>,
    pub arrows: Vec<(ObjectId, ObjectId)>,
    pub row_lengths: Vec<usize>,
    index: HashMap<ObjectId, usize>,
}

fn is_negative_simple(v: &[i64]) -> bool {
    v.iter().filter(|&&x| x != 0).count() == 1 && v.iter().any(|&x| x == -1)
}

/// Knits the translation quiver of `Q` slice by slice.
///
/// Dimension vectors propagate by `root(k+1, i) = sum root(E)_+ - root(k, i)`
/// over the middle terms `E`, where shifted projectives contribute zero. A row
/// ends when the propagated vector is a negative simple root.
pub fn knit(quiver: &QuiverSpec) -> Result<MeshQuiver> {
    if !quiver.cartan.is_simply_laced() {
        return Err(crate::error::invalid(format!(
            "knitting needs a simply-laced quiver, got {}",
            quiver.cartan
        )));
    }
    let n = quiver.rank();
    let h = quiver.cartan.coxeter_data().h as u32;
    let order = quiver
        .topological_order()
        .ok_or_else(|| Error::Structural("cyclic quiver".into()))?;
    let roots = RootSystem::new(quiver.cartan, &rationals())?;
    let positive: std::collections::HashSet<Vec<i64>> = roots
        .positive_integer_roots()
        .ok_or_else(|| Error::Structural("simply-laced roots must be integral".into()))?
        .into_iter()
        .collect();

    let mut dims: HashMap<ObjectId, Vec<i64>> = HashMap::new();
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = -1;
        dims.insert(ObjectId::new(1, i), v);
    }
    let mut alive = vec![true; n];
    let mut meshes = Vec::new();
    let mut k = 1u32;
    while alive.iter().any(|&a| a) {
        if k > h + 3 {
            return Err(Error::Structural(format!("knitting of {} did not terminate", quiver.cartan)));
        }
        for &i in &order {
            if !alive[i] {
                continue;
            }
            let start = ObjectId::new(k, i);
            let mut middles: Vec<ObjectId> = quiver
                .successors(i)
                .map(|j| ObjectId::new(k, j))
                .chain(quiver.predecessors(i).map(|j| ObjectId::new(k + 1, j)))
                .filter(|o| dims.contains_key(o))
                .collect();
            middles.sort_unstable();
            let mut cand: Vec<i64> = dims[&start].iter().map(|x| -x).collect();
            for m in &middles {
                for (c, x) in cand.iter_mut().zip(&dims[m]) {
                    *c += (*x).max(0);
                }
            }
            if positive.contains(&cand) {
                let end = ObjectId::new(k + 1, i);
                dims.insert(end, cand);
                meshes.push(Mesh { start, middles, end });
            } else if is_negative_simple(&cand) {
                alive[i] = false;
            } else {
                return Err(Error::Structural(format!(
                    "mesh at {start} propagates to {cand:?}, neither a positive root nor a negative simple root"
                )));
            }
        }
        k += 1;
    }

    let mut objects: Vec<MeshObject> = dims.into_iter().map(|(id, root)| MeshObject { id, root }).collect();
    objects.sort_unstable_by_key(|o| o.id);
    let index: HashMap<ObjectId, usize> = objects.iter().enumerate().map(|(p, o)| (o.id, p)).collect();

    let produced: Vec<&Vec<i64>> = objects.iter().filter(|o| o.id.k >= 2).map(|o| &o.root).collect();
    let distinct: std::collections::HashSet<&Vec<i64>> = produced.iter().copied().collect();
    if produced.len() != positive.len() || distinct.len() != positive.len() {
        return Err(Error::Structural(format!(
            "knitting of {} produced {} positive roots ({} distinct), expected {}",
            quiver.cartan,
            produced.len(),
            distinct.len(),
            positive.len()
        )));
    }

    let mut row_lengths = vec![0usize; n];
    for o in &objects {
        row_lengths[o.id.row] += 1;
    }
    let mut arrows = Vec::new();
    for o in &objects {
        let ObjectId { k, row } = o.id;
        for j in quiver.successors(row) {
            let t = ObjectId::new(k, j);
            if index.contains_key(&t) {
                arrows.push((o.id, t));
            }
        }
        for j in quiver.predecessors(row) {
            let t = ObjectId::new(k + 1, j);
            if index.contains_key(&t) {
                arrows.push((o.id, t));
            }
        }
    }
    arrows.sort_unstable();

    Ok(MeshQuiver {
        quiver: quiver.clone(),
        objects,
        meshes,
        arrows,
        row_lengths,
        index,
    })
}

impl MeshQuiver {
    pub fn rank(&self) -> usize {
        self.quiver.rank()
    }

    /// `N = n(h+2)/2`.
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn meshes(&self) -> &[Mesh] {
        &self.meshes
    }

    pub fn contains(&self, id: ObjectId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn position(&self, id: ObjectId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn root(&self, id: ObjectId) -> Option<&[i64]> {
        self.index.get(&id).map(|&p| self.objects[p].root.as_slice())
    }

    pub fn ids(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.objects.iter().map(|o| o.id)
    }

    /// Largest `k` present in the quiver.
    pub fn max_k(&self) -> u32 {
        self.objects.iter().map(|o| o.id.k).max().unwrap_or(0)
    }

    /// The slice `{(k, j)}` as far as it exists.
    pub fn slice(&self, k: u32) -> Vec<ObjectId> {
        (0..self.rank()).map(|j| ObjectId::new(k, j)).filter(|o| self.contains(*o)).collect()
    }

    /// Text rendering of the grid with object roots, one line per row; columns
    /// are staggered by the position of each vertex along the orientation.
    pub fn dump(&self) -> String {
        let n = self.rank();
        let order = self.quiver.topological_order().expect("acyclic");
        let mut level = vec![0usize; n];
        for &v in &order {
            for u in self.quiver.successors(v) {
                level[u] = level[u].max(level[v] + 1);
            }
        }
        let period = level.iter().max().copied().unwrap_or(0) + 1;
        let cells: Vec<String> = self
            .objects
            .iter()
            .map(|o| format!("t{}{}={}", o.id.k, o.id.row + 1, format_root(&o.root)))
            .collect();
        let width = cells.iter().map(|c| c.len()).max().unwrap_or(0) + 2;
        let columns = (self.max_k() as usize) * period;
        let mut out = String::new();
        for i in 0..n {
            let mut line = vec![" ".repeat(width); columns];
            for (o, cell) in self.objects.iter().zip(&cells) {
                if o.id.row == i {
                    let col = (o.id.k as usize - 1) * period + level[i];
                    line[col] = format!("{cell:<width$}");
                }
            }
            out.push_str(line.concat().trim_end());
            out.push('\n');
        }
        out
    }

    /// The mesh equations in the form `t_start + t_end = sum t_E + c_start`.
    pub fn equations(&self) -> Vec<String> {
        self.meshes
            .iter()
            .map(|m| {
                let name = |o: &ObjectId| format!("t{}{}", o.k, o.row + 1);
                let mut rhs: Vec<String> = m.middles.iter().map(name).collect();
                rhs.push(format!("c{}{}", m.start.k, m.start.row + 1));
                format!("{} + {} = {}", name(&m.start), name(&m.end), rhs.join(" + "))
            })
            .collect()
    }

    /// Almost positive roots of the objects, as field vectors.
    pub fn root_scalars(&self, id: ObjectId, field: &crate::exactfield::Field) -> Option<Vec<crate::ExactScalar>> {
        self.root(id).map(|r| int_vec(field, r))
    }
}

pub fn meshes(q: &MeshQuiver) -> &[Mesh] {
    q.meshes()
}

pub fn format_root(v: &[i64]) -> String {
    let mut out = String::new();
    for (j, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(&format!("a{}", j + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
