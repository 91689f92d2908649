//! Unfoldings of non-simply-laced root systems: a simply-laced quiver `Q`,
//! a partition of its vertices into blocks, one block per vertex of the
//! target, and positive weights `w_j`.
//!
//! The folding map sends `alpha_j` to `w_j alpha'_{P(j)}`; the same
//! coordinate formula, read on g-vectors, is the projection
//! `lambda'_{[i]} = sum_{P(j) = [i]} w_j lambda_j` onto the plane of
//! symmetric points.
//!
//! The crystallographic foldings `D_{n+1} -> B_n` and `A_{2n-1} -> C_n` and
//! the dihedral ones are generated; `E6 -> F4`, `D6 -> H3` and `E8 -> H4` are
//! read from `data/foldings.json`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::ParamSet;
use crate::arquiver::{knit, MeshQuiver};
use crate::error::{invalid, Error, Result};
use crate::exactfield::{chebyshev_weights, make_field, parse_rational, rationals, ExactScalar, Field, ScalarJson};
use crate::linalg;
use crate::report::{Check, Report};
use crate::rootsystem::{build_quiver, CartanType, Orientation, QuiverSpec, RootSystem};

const TABLE: &str = include_str!("../data/foldings.json");

#[derive(Deserialize)]
struct TableFile {
    version: u32,
    foldings: Vec<TableEntry>,
}

#[derive(Deserialize)]
struct TableEntry {
    source: String,
    target: String,
    blocks: Vec<Vec<usize>>,
    weights: Vec<Vec<String>>,
}

/// Version of the shipped folding table.
pub fn table_version() -> u32 {
    parse_table().map(|t| t.version).unwrap_or(0)
}

fn parse_table() -> Result<TableFile> {
    Ok(serde_json::from_str(TABLE)?)
}

#[derive(Clone, Debug)]
pub struct FoldSpec {
    pub source: QuiverSpec,
    pub target: QuiverSpec,
    pub field: Field,
    /// 0-based source vertices of each block, in target vertex order.
    pub blocks: Vec<Vec<usize>>,
    pub block_of: Vec<usize>,
    pub weights: Vec<ExactScalar>,
    /// Distinct weights, increasing.
    pub weight_set: Vec<ExactScalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldJson {
    pub source: String,
    pub target: String,
    pub blocks: Vec<Vec<usize>>,
    pub weights: Vec<ScalarJson>,
}

impl FoldSpec {
    pub fn new(source: QuiverSpec, target: CartanType, field: &Field, blocks: Vec<Vec<usize>>, weights: Vec<ExactScalar>) -> Result<Self> {
        let n = source.rank();
        if !source.cartan.is_simply_laced() {
            return Err(invalid(format!("folding source {} is not simply-laced", source.cartan)));
        }
        if blocks.len() != target.rank() {
            return Err(invalid(format!("{} blocks for the {} vertices of {target}", blocks.len(), target.rank())));
        }
        if weights.len() != n {
            return Err(invalid(format!("{} weights for the {n} vertices of {}", weights.len(), source.cartan)));
        }
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(invalid(format!("block {} is empty", b + 1)));
            }
            for &j in block {
                if j >= n || block_of[j] != usize::MAX {
                    return Err(invalid(format!("blocks do not partition the vertices of {}", source.cartan)));
                }
                block_of[j] = b;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(invalid(format!("blocks do not cover the vertices of {}", source.cartan)));
        }
        for (j, w) in weights.iter().enumerate() {
            if w.field().order() != field.order() && !w.field().is_rational() {
                return Err(Error::FieldMismatch {
                    left: w.field().order(),
                    right: field.order(),
                });
            }
            if !w.is_positive() {
                return Err(invalid(format!("weight of vertex {} is not positive", j + 1)));
            }
        }
        let weights: Vec<ExactScalar> = weights.iter().map(|w| w + &ExactScalar::zero(field)).collect();
        let mut weight_set: Vec<ExactScalar> = Vec::new();
        for w in &weights {
            if !weight_set.contains(w) {
                weight_set.push(w.clone());
            }
        }
        weight_set.sort_by(|a, b| a.cmp_exact(b).expect("same field"));
        let target = build_quiver(target, Orientation::Bipartite)?;
        Ok(FoldSpec {
            source,
            target,
            field: field.clone(),
            blocks,
            block_of,
            weights,
            weight_set,
        })
    }

    /// `Q' = Q`, singleton blocks, all weights 1.
    pub fn identity(source: QuiverSpec) -> Result<Self> {
        let n = source.rank();
        let f = rationals();
        let target = source.cartan;
        FoldSpec::new(source, target, &f, (0..n).map(|j| vec![j]).collect(), vec![ExactScalar::one(&f); n])
    }

    pub fn source_type(&self) -> CartanType {
        self.source.cartan
    }

    pub fn target_type(&self) -> CartanType {
        self.target.cartan
    }

    pub fn source_rank(&self) -> usize {
        self.source.rank()
    }

    pub fn target_rank(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1) && self.source_type() == self.target_type()
    }

    /// Re-orients the source. Non-bipartite orientations need `allow_mutations`.
    pub fn with_orientation(mut self, orientation: Orientation, allow_mutations: bool) -> Result<Self> {
        let q = build_quiver(self.source.cartan, orientation)?;
        if !q.is_bipartite() && !allow_mutations {
            return Err(invalid("folded runs use bipartite orientations unless mutations are explicitly allowed"));
        }
        self.source = q;
        if let Some(w) = self.orientation_witness() {
            return Err(invalid(format!("orientation is not block-compatible: {w}")));
        }
        Ok(self)
    }

    /// An arrow inside a block, or two arrows joining the same pair of blocks in
    /// opposite directions.
    fn orientation_witness(&self) -> Option<String> {
        let p = &self.block_of;
        for &(a, b) in &self.source.arrows {
            if p[a] == p[b] {
                return Some(format!("arrow {}->{} inside block {}", a + 1, b + 1, p[a] + 1));
            }
            for &(c, d) in &self.source.arrows {
                if p[c] == p[b] && p[d] == p[a] {
                    return Some(format!("arrows {}->{} and {}->{} between the same blocks", a + 1, b + 1, c + 1, d + 1));
                }
            }
        }
        None
    }

    /// `lambda'_{[i]} = sum_{P(j) = [i]} w_j lambda_j`.
    pub fn project(&self, lambda: &[ExactScalar]) -> Vec<ExactScalar> {
        let mut out = vec![ExactScalar::zero(&self.field); self.target_rank()];
        for (j, x) in lambda.iter().enumerate() {
            if !x.is_zero() {
                out[self.block_of[j]] += &(x * &self.weights[j]);
            }
        }
        out
    }

    pub fn project_ints(&self, lambda: &[i64]) -> Vec<ExactScalar> {
        let mut out = vec![ExactScalar::zero(&self.field); self.target_rank()];
        for (j, &x) in lambda.iter().enumerate() {
            if x != 0 {
                out[self.block_of[j]] += &(&self.weights[j] * &ExactScalar::from_integer(&self.field, x));
            }
        }
        out
    }

    /// `pi(g) / w_row` for a g-vector of row `row`.
    pub fn project_w(&self, g: &[i64], row: usize) -> Vec<ExactScalar> {
        let inv = self.weights[row].inverse().expect("weights are positive");
        self.project_ints(g).iter().map(|x| x * &inv).collect()
    }

    /// The folding map on root coordinates: `alpha_j -> w_j alpha'_{P(j)}`.
    pub fn fold_root(&self, alpha: &[i64]) -> Vec<ExactScalar> {
        self.project_ints(alpha)
    }

    /// `u_[i] = sum_{j in [i]} w_j e_j`, spanning the plane of symmetric points.
    pub fn block_vectors(&self) -> Vec<Vec<ExactScalar>> {
        let n = self.source_rank();
        self.blocks
            .iter()
            .map(|b| {
                let mut u = vec![ExactScalar::zero(&self.field); n];
                for &j in b {
                    u[j] = self.weights[j].clone();
                }
                u
            })
            .collect()
    }

    /// Orthogonal projection onto `span(u_[i])`, by the normal equations.
    pub fn orthogonal_project(&self, lambda: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        let u = self.block_vectors();
        let gram: Vec<Vec<ExactScalar>> = u
            .iter()
            .map(|a| u.iter().map(|b| linalg::dot(a, b, &self.field)).collect())
            .collect();
        let rhs: Vec<ExactScalar> = u.iter().map(|a| linalg::dot(a, lambda, &self.field)).collect();
        let c = linalg::bareiss_solve(&gram, &rhs)?;
        let mut out = vec![ExactScalar::zero(&self.field); self.source_rank()];
        for (ci, ui) in c.iter().zip(&u) {
            for (o, x) in out.iter_mut().zip(ui) {
                if !x.is_zero() {
                    *o += &(ci * x);
                }
            }
        }
        Ok(out)
    }

    /// `e_[i] = pi(e_j) / w_j` for the first vertex `j` of each block.
    pub fn plane_basis(&self) -> Result<Vec<Vec<ExactScalar>>> {
        let n = self.source_rank();
        self.blocks
            .iter()
            .map(|b| {
                let j = b[0];
                let mut e = vec![ExactScalar::zero(&self.field); n];
                e[j] = ExactScalar::one(&self.field);
                let inv = self.weights[j].inverse()?;
                Ok(self.orthogonal_project(&e)?.iter().map(|x| x * &inv).collect())
            })
            .collect()
    }

    /// Coordinates of `pi(lambda)` in the basis `e_[i]`, computed without the
    /// closed-form block sum.
    pub fn orthogonal_coords(&self, lambda: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        let basis = self.plane_basis()?;
        let p = self.orthogonal_project(lambda)?;
        let gram: Vec<Vec<ExactScalar>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| linalg::dot(a, b, &self.field)).collect())
            .collect();
        let rhs: Vec<ExactScalar> = basis.iter().map(|a| linalg::dot(a, &p, &self.field)).collect();
        linalg::bareiss_solve(&gram, &rhs)
    }

    pub fn to_json(&self) -> FoldJson {
        FoldJson {
            source: self.source_type().to_string(),
            target: self.target_type().to_string(),
            blocks: self.blocks.iter().map(|b| b.iter().map(|j| j + 1).collect()).collect(),
            weights: self.weights.iter().map(|w| w.to_json()).collect(),
        }
    }
}

/// The natural source of each target, used when none is given.
pub fn default_source(target: CartanType) -> Result<CartanType> {
    Ok(match target {
        CartanType::B(n) => CartanType::D(n + 1),
        CartanType::C(n) => CartanType::A(2 * n - 1),
        CartanType::F4 => CartanType::E(6),
        CartanType::G2 => CartanType::A(5),
        CartanType::H3 => CartanType::D(6),
        CartanType::H4 => CartanType::E(8),
        CartanType::I2(m) => CartanType::A(m as usize - 1),
        t if t.is_simply_laced() => t,
        t => return Err(invalid(format!("no folding onto {t}"))),
    })
}

/// Sources accepted for a dihedral target `I2(m)`.
fn dihedral_sources(m: u32) -> Vec<CartanType> {
    let mut out = vec![CartanType::A(m as usize - 1)];
    if m % 2 == 0 && m >= 6 {
        out.push(CartanType::D(m as usize / 2 + 1));
    }
    match m {
        12 => out.push(CartanType::E(6)),
        18 => out.push(CartanType::E(7)),
        30 => out.push(CartanType::E(8)),
        _ => {}
    }
    out
}

/// The folding onto `target`, from `source` or the default source, with the
/// bipartite orientation.
pub fn load_folding(target: CartanType, source: Option<CartanType>) -> Result<FoldSpec> {
    let target = target.new_checked()?;
    let source = match source {
        Some(s) => s.new_checked()?,
        None => default_source(target)?,
    };
    let mismatch = || invalid(format!("no folding {source} -> {target}"));
    if source == target && target.is_simply_laced() {
        return FoldSpec::identity(build_quiver(source, Orientation::Bipartite)?);
    }
    let q = build_quiver(source, Orientation::Bipartite)?;
    let f = rationals();
    let one = ExactScalar::one(&f);
    match target {
        CartanType::B(n) => {
            if n < 3 {
                return Err(invalid(format!("B{n} has no D-type unfolding; use C{n}")));
            }
            if source != CartanType::D(n + 1) {
                return Err(mismatch());
            }
            let mut blocks: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i]).collect();
            blocks.push(vec![n - 1, n]);
            FoldSpec::new(q, target, &f, blocks, vec![one; n + 1])
        }
        CartanType::C(n) => {
            if source != CartanType::A(2 * n - 1) {
                return Err(mismatch());
            }
            let mut blocks: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, 2 * n - 2 - i]).collect();
            blocks.push(vec![n - 1]);
            FoldSpec::new(q, target, &f, blocks, vec![one; 2 * n - 1])
        }
        CartanType::F4 | CartanType::H3 | CartanType::H4 => from_table(q, target),
        CartanType::G2 => {
            if source != CartanType::A(5) {
                return Err(mismatch());
            }
            dihedral(q, target, 6)
        }
        CartanType::I2(m) => {
            if !dihedral_sources(m).contains(&source) {
                return Err(mismatch());
            }
            dihedral(q, target, m)
        }
        _ => Err(mismatch()),
    }
}

fn from_table(q: QuiverSpec, target: CartanType) -> Result<FoldSpec> {
    let table = parse_table()?;
    let entry = table
        .foldings
        .iter()
        .find(|e| e.source.parse::<CartanType>().ok() == Some(q.cartan) && e.target.parse::<CartanType>().ok() == Some(target))
        .ok_or_else(|| invalid(format!("no folding {} -> {target} in the table", q.cartan)))?;
    let field = target.natural_field();
    let blocks = entry.blocks.iter().map(|b| b.iter().map(|j| j.wrapping_sub(1)).collect()).collect();
    let weights = entry
        .weights
        .iter()
        .map(|c| {
            let coeffs = c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            Ok(ExactScalar::from_coeffs(&field, coeffs))
        })
        .collect::<Result<Vec<_>>>()?;
    FoldSpec::new(q, target, &field, blocks, weights)
}

/// Blocks are the two colour classes, the class of vertex 1 first. Weights are
/// the Perron-Frobenius eigenvector of the adjacency matrix for the eigenvalue
/// `2cos(pi/m)`, normalized at vertex 1; along a path this is the Chebyshev
/// sequence `U_{k-1}`.
fn dihedral(q: QuiverSpec, target: CartanType, m: u32) -> Result<FoldSpec> {
    let field = make_field(m)?;
    let n = q.rank();
    let colour = q.colouring();
    let blocks: Vec<Vec<usize>> = [colour[0], 1 - colour[0]]
        .iter()
        .map(|&c| (0..n).filter(|&j| colour[j] == c).collect())
        .collect();
    let weights = match q.cartan {
        CartanType::A(_) => chebyshev_weights(&field, n),
        _ => perron_vector(&q, &field)?,
    };
    FoldSpec::new(q, target, &field, blocks, weights)
}

/// Kernel of `A - theta I`, normalized so that the first entry is 1.
pub fn perron_vector(q: &QuiverSpec, field: &Field) -> Result<Vec<ExactScalar>> {
    let n = q.rank();
    let theta = ExactScalar::theta(field);
    let mut a = vec![vec![ExactScalar::zero(field); n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = -&theta;
    }
    for (i, j, _) in q.cartan.edges() {
        a[i][j] = ExactScalar::one(field);
        a[j][i] = ExactScalar::one(field);
    }
    let kernel = linalg::nullspace(&a, field);
    if kernel.len() != 1 {
        return Err(Error::Structural(format!(
            "2cos(pi/{}) is not a simple eigenvalue of the diagram of {}",
            field.order(),
            q.cartan
        )));
    }
    let v = &kernel[0];
    let scale = v[0].inverse()?;
    Ok(v.iter().map(|x| x * &scale).collect())
}

/// Parameters `c_{kj} = base * w_j`, which satisfy `w_i c_{kj} = w_j c_{ki}`.
pub fn symmetric_params(fold: &FoldSpec, mq: &MeshQuiver, base: &ExactScalar) -> Result<ParamSet> {
    if !base.is_positive() {
        return Err(invalid(format!("parameter base must be positive, got {base}")));
    }
    let base = base + &ExactScalar::zero(&fold.field);
    let values: BTreeMap<_, _> = mq
        .meshes()
        .iter()
        .map(|m| (m.start, &base * &fold.weights[m.start.row]))
        .collect();
    ParamSet::new(&fold.field, values)
}

fn show(v: &[ExactScalar]) -> String {
    format!("({})", v.iter().map(|x| x.approx_string()).collect::<Vec<_>>().join(", "))
}

/// Checks (a) no arrows inside blocks and a block-compatible orientation,
/// (b) every root folds into some `w Delta'`, (c) the roots of row `j` fold
/// into `w_j Delta'`, (d) equal Coxeter numbers; plus unit weights for
/// crystallographic targets.
pub fn validate_folding(fold: &FoldSpec) -> Result<Report> {
    let mut report = Report::default();
    let field = &fold.field;
    let source = RootSystem::new(fold.source_type(), &rationals())?;
    let target = RootSystem::new(fold.target_type(), field)?;
    let roots = source
        .positive_integer_roots()
        .ok_or_else(|| Error::Structural("simply-laced roots are not integral".into()))?;

    report.push(match fold.orientation_witness() {
        None => Check::pass("a_blocks", "no arrows inside blocks; orientation block-compatible"),
        Some(w) => Check::from_witnesses("a_blocks", "orientation", vec![w]),
    });

    let inverses: Vec<ExactScalar> = fold.weight_set.iter().map(|w| w.inverse()).collect::<Result<_>>()?;
    let found: Vec<Option<usize>> = roots
        .par_iter()
        .map(|alpha| {
            let y = fold.fold_root(alpha);
            inverses.iter().position(|inv| {
                let z: Vec<ExactScalar> = y.iter().map(|x| x * inv).collect();
                target.contains(&z)
            })
        })
        .collect();
    let mut counts = vec![0usize; fold.weight_set.len()];
    let mut missing = Vec::new();
    for (alpha, f) in roots.iter().zip(&found) {
        match f {
            Some(k) => counts[*k] += 1,
            None => missing.push(format!("{:?} -> {}", alpha, show(&fold.fold_root(alpha)))),
        }
    }
    let split = fold
        .weight_set
        .iter()
        .zip(&counts)
        .map(|(w, c)| format!("{c} in {}*D'", w.approx_string()))
        .collect::<Vec<_>>()
        .join(", ");
    report.push(Check::from_witnesses(
        "b_roots",
        format!("{} positive roots of {}: {split}", roots.len(), fold.source_type()),
        missing,
    ));

    let mq = knit(&fold.source)?;
    let bad: Vec<String> = mq
        .ids()
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|&id| {
            let alpha = mq.root(id).expect("object");
            let inv = fold.weights[id.row].inverse().expect("positive weight");
            let z: Vec<ExactScalar> = fold.fold_root(alpha).iter().map(|x| x * &inv).collect();
            (!target.contains(&z)).then(|| format!("{id}: {} / w_{}", show(&fold.fold_root(alpha)), id.row + 1))
        })
        .collect();
    report.push(Check::from_witnesses(
        "c_rows",
        format!("{} knitted objects", mq.object_count()),
        bad,
    ));

    let (h, h2) = (fold.source_type().coxeter_data().h, fold.target_type().coxeter_data().h);
    report.push(Check::expect("d_coxeter", h == h2, format!("h({}) = {h}, h({}) = {h2}", fold.source_type(), fold.target_type())));

    if matches!(fold.target_type(), CartanType::B(_) | CartanType::C(_) | CartanType::F4) {
        let ok = fold.weights.iter().all(|w| w.is_one());
        report.push(Check::expect("unit_weights", ok, "crystallographic target"));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldingEntry {
    pub source: String,
    pub target: String,
    pub origin: &'static str,
}

/// Supported foldings: generated families (with their range) and table entries.
pub fn supported_foldings() -> Result<Vec<FoldingEntry>> {
    let e = |s: &str, t: &str, origin| FoldingEntry {
        source: s.to_string(),
        target: t.to_string(),
        origin,
    };
    let mut out = vec![
        e("D{n+1}", "B{n} (n >= 3)", "generated"),
        e("A{2n-1}", "C{n} (n >= 2)", "generated"),
        e("A5", "G2", "generated"),
        e("A{m-1}", "I2(m) (m >= 3)", "generated"),
        e("D{n+1}", "I2(2n) (n >= 3)", "generated"),
        e("E6", "I2(12)", "generated"),
        e("E7", "I2(18)", "generated"),
        e("E8", "I2(30)", "generated"),
    ];
    for t in parse_table()?.foldings {
        out.push(e(&t.source, &t.target, "table"));
    }
    Ok(out)
}
