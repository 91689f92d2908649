//! Exact generalized associahedra.
//!
//! Simply-laced associahedra are built from the mesh relations of the
//! Auslander-Reiten quiver (one hyperplane per positive root) intersected with
//! the positive orthant. Non-simply-laced ones, including the
//! non-crystallographic types `H3`, `H4` and `I2(m)`, are obtained as sections
//! of a simply-laced one by the plane cut out by a weighted unfolding.
//!
//! All arithmetic is exact over real number fields `Q(2cos(pi/m))`.

pub mod affine;
pub mod arquiver;
pub mod error;
pub mod exactfield;
pub mod export;
pub mod folding;
pub mod linalg;
pub mod polytope;
pub mod report;
pub mod rootsystem;
pub mod section;

pub use affine::{AffineForm, GVector, ParamSet};
pub use arquiver::{Mesh, MeshQuiver, ObjectId};
pub use error::{Error, Result};
pub use exactfield::{make_field, ExactScalar, Field, FieldSpec};
pub use folding::FoldSpec;
pub use polytope::{Fan, SimplePolytope};
pub use rootsystem::{CartanType, CoxeterData, QuiverSpec, RootSystem};
pub use section::{SectionPlane, SectionPolytope};
