//! Dynkin and Coxeter data, quivers, and root systems.
//!
//! Vertex numbering (1-based in labels and output, 0-based internally):
//!
//! * `A_n`: the path `1 - 2 - ... - n`.
//! * `D_n`: the path `1 - ... - (n-2)` with the fork `n-1`, `n` attached to `n-2`.
//! * `E_n`: Bourbaki, `1 - 3 - 4 - 5 - ... - n` with `2` attached to `4`.
//! * `B_n`, `C_n`: the path `1 - ... - n`, the double bond between `n-1` and `n`;
//!   `alpha_n` is short in `B_n` and long in `C_n`.
//! * `F_4`: `1 - 2 => 3 - 4`, `alpha_1`, `alpha_2` long.
//! * `H_3`: `1 - 2 -5- 3`; `H_4`: `1 - 2 - 3 -5- 4`.
//! * `I_2(m)`: `1 -m- 2`; `G_2` is `I_2(6)`.
//!
//! Non-crystallographic simple roots are normalized to squared length 2, with
//! `(alpha_i, alpha_j) = -2cos(pi/m_ij)` for adjacent vertices.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{invalid, Error, Result};
use crate::exactfield::{make_field, rationals, ExactScalar, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    H3,
    H4,
    I2(u32),
}

impl CartanType {
    pub fn new_checked(self) -> Result<Self> {
        let ok = match self {
            CartanType::A(n) => n >= 1,
            CartanType::B(n) | CartanType::C(n) => n >= 2,
            CartanType::D(n) => n >= 4,
            CartanType::E(n) => (6..=8).contains(&n),
            CartanType::I2(m) => m >= 3,
            _ => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(invalid(format!("unsupported type {self}")))
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) | CartanType::D(n) | CartanType::E(n) => n,
            CartanType::F4 | CartanType::H4 => 4,
            CartanType::H3 => 3,
            CartanType::G2 | CartanType::I2(_) => 2,
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self, CartanType::A(_) | CartanType::D(_) | CartanType::E(_))
    }

    pub fn is_crystallographic(&self) -> bool {
        match *self {
            CartanType::H3 | CartanType::H4 => false,
            CartanType::I2(m) => matches!(m, 3 | 4 | 6),
            _ => true,
        }
    }

    /// Diagram edges `(i, j, m_ij)` with `m_ij >= 3`, 0-based, `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let path = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1, 3)).collect::<Vec<_>>();
        match *self {
            CartanType::A(n) => path(n),
            CartanType::B(n) | CartanType::C(n) => {
                let mut e = path(n);
                e.last_mut().unwrap().2 = 4;
                e
            }
            CartanType::D(n) => {
                let mut e = path(n - 1);
                e.push((n - 3, n - 1, 3));
                e
            }
            CartanType::E(n) => {
                let mut e = vec![(0, 2, 3), (1, 3, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1, 3)));
                e
            }
            CartanType::F4 => vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)],
            CartanType::G2 => vec![(0, 1, 6)],
            CartanType::H3 => vec![(0, 1, 3), (1, 2, 5)],
            CartanType::H4 => vec![(0, 1, 3), (1, 2, 3), (2, 3, 5)],
            CartanType::I2(m) => vec![(0, 1, m)],
        }
    }

    pub fn coxeter_data(&self) -> CoxeterData {
        let (h, exponents): (u64, Vec<u64>) = match *self {
            CartanType::A(n) => (n as u64 + 1, (1..=n as u64).collect()),
            CartanType::B(n) | CartanType::C(n) => (2 * n as u64, (0..n as u64).map(|i| 2 * i + 1).collect()),
            CartanType::D(n) => {
                let n = n as u64;
                let mut e: Vec<u64> = (0..n - 1).map(|i| 2 * i + 1).collect();
                e.push(n - 1);
                e.sort_unstable();
                (2 * n - 2, e)
            }
            CartanType::E(6) => (12, vec![1, 4, 5, 7, 8, 11]),
            CartanType::E(7) => (18, vec![1, 5, 7, 9, 11, 13, 17]),
            CartanType::E(_) => (30, vec![1, 7, 11, 13, 17, 19, 23, 29]),
            CartanType::F4 => (12, vec![1, 5, 7, 11]),
            CartanType::G2 => (6, vec![1, 5]),
            CartanType::H3 => (10, vec![1, 5, 9]),
            CartanType::H4 => (30, vec![1, 11, 19, 29]),
            CartanType::I2(m) => (m as u64, vec![1, m as u64 - 1]),
        };
        let n = self.rank() as u64;
        CoxeterData {
            h,
            exponents,
            positive_root_count: n * h / 2,
        }
    }

    /// `prod (e_i + h + 1) / (e_i + 1)`.
    pub fn catalan_count(&self) -> u64 {
        let d = self.coxeter_data();
        let num: u128 = d.exponents.iter().map(|&e| (e + d.h + 1) as u128).product();
        let den: u128 = d.exponents.iter().map(|&e| (e + 1) as u128).product();
        assert_eq!(num % den, 0, "Catalan number of {self} is not an integer");
        (num / den) as u64
    }

    /// `|Delta_{>= -1}| = nh/2 + n`.
    pub fn almost_positive_count(&self) -> u64 {
        let d = self.coxeter_data();
        d.positive_root_count + self.rank() as u64
    }

    /// The smallest field containing the Gram matrix entries.
    pub fn natural_field(&self) -> Field {
        let m = match *self {
            CartanType::H3 | CartanType::H4 => 5,
            CartanType::G2 => 6,
            CartanType::I2(m) if !matches!(m, 3) => m,
            _ => return rationals(),
        };
        make_field(m).expect("valid order")
    }

    /// Symmetric Gram matrix of the simple roots over `field`.
    pub fn gram(&self, field: &Field) -> Result<Vec<Vec<ExactScalar>>> {
        let natural = self.natural_field();
        if !natural.is_rational() && natural.order() != field.order() {
            return Err(invalid(format!(
                "field Q(2cos(pi/{})) does not contain the Gram matrix of {self}",
                field.order()
            )));
        }
        let n = self.rank();
        let q = |a: i64, b: i64| ExactScalar::from_rational(field, BigRational::new(a.into(), b.into()));
        let mut g = vec![vec![ExactScalar::zero(field); n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = q(2, 1);
        }
        let mut set = |i: usize, j: usize, v: ExactScalar| {
            g[i][j] = v.clone();
            g[j][i] = v;
        };
        match *self {
            CartanType::B(n) => {
                for (i, j, _) in self.edges() {
                    set(i, j, q(-1, 1));
                }
                g[n - 1][n - 1] = q(1, 1);
            }
            CartanType::C(n) => {
                for (i, j, _) in self.edges() {
                    set(i, j, q(-1, 1));
                }
                set(n - 2, n - 1, q(-2, 1));
                g[n - 1][n - 1] = q(4, 1);
            }
            CartanType::F4 => {
                set(0, 1, q(-1, 1));
                set(1, 2, q(-1, 1));
                set(2, 3, q(-1, 2));
                g[2][2] = q(1, 1);
                g[3][3] = q(1, 1);
            }
            _ => {
                for (i, j, m) in self.edges() {
                    let v = if m == 3 {
                        q(-1, 1)
                    } else {
                        let f = make_field(m)?;
                        if f.order() != field.order() && !f.is_rational() {
                            return Err(invalid(format!("edge label {m} needs Q(2cos(pi/{m}))")));
                        }
                        -ExactScalar::theta(field)
                    };
                    set(i, j, v);
                }
            }
        }
        Ok(g)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::E(n) => write!(f, "E{n}"),
            CartanType::F4 => write!(f, "F4"),
            CartanType::G2 => write!(f, "G2"),
            CartanType::H3 => write!(f, "H3"),
            CartanType::H4 => write!(f, "H4"),
            CartanType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;

    /// Accepts `A3`, `A_3`, `D6`, `E8`, `F4`, `G2`, `H3`, `I2(5)`, `I2_5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase().replace(['_', ' '], "");
        let bad = || invalid(format!("unknown type label {s:?}"));
        if let Some(rest) = t.strip_prefix("I2") {
            let m = rest.trim_start_matches('(').trim_end_matches(')');
            let m: u32 = m.parse().map_err(|_| bad())?;
            return CartanType::I2(m).new_checked();
        }
        let (head, tail) = t.split_at(1.min(t.len()));
        let n: usize = tail.parse().map_err(|_| bad())?;
        let ty = match (head, n) {
            ("A", n) => CartanType::A(n),
            ("B", n) => CartanType::B(n),
            ("C", n) => CartanType::C(n),
            ("D", n) => CartanType::D(n),
            ("E", n) => CartanType::E(n),
            ("F", 4) => CartanType::F4,
            ("G", 2) => CartanType::G2,
            ("H", 3) => CartanType::H3,
            ("H", 4) => CartanType::H4,
            _ => return Err(bad()),
        };
        ty.new_checked()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterData {
    pub h: u64,
    pub exponents: Vec<u64>,
    pub positive_root_count: u64,
}

pub fn coxeter_data(ty: CartanType) -> CoxeterData {
    ty.coxeter_data()
}

pub fn catalan_count(ty: CartanType) -> u64 {
    ty.catalan_count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Vertex 1 and its colour class are sources.
    Bipartite,
    /// Explicit arrows `(tail, head)`, 0-based.
    Explicit(Vec<(usize, usize)>),
}

/// An acyclic orientation of a Dynkin or Coxeter diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverSpec {
    pub cartan: CartanType,
    /// `(tail, head)`, 0-based.
    pub arrows: Vec<(usize, usize)>,
}

pub fn build_quiver(cartan: CartanType, orientation: Orientation) -> Result<QuiverSpec> {
    let cartan = cartan.new_checked()?;
    let n = cartan.rank();
    let edges = cartan.edges();
    let arrows = match orientation {
        Orientation::Bipartite => {
            let colour = bipartition(n, &edges);
            edges
                .iter()
                .map(|&(i, j, _)| if colour[i] == 0 { (i, j) } else { (j, i) })
                .collect()
        }
        Orientation::Explicit(arrows) => {
            let mut seen = HashSet::new();
            for &(a, b) in &arrows {
                if a >= n || b >= n {
                    return Err(invalid(format!("arrow {}->{} outside the {n} vertices of {cartan}", a + 1, b + 1)));
                }
                if !seen.insert((a.min(b), a.max(b))) {
                    return Err(invalid(format!("cyclic orientation: edge {}-{} used twice", a + 1, b + 1)));
                }
            }
            let want: HashSet<_> = edges.iter().map(|&(i, j, _)| (i, j)).collect();
            if seen != want {
                return Err(invalid(format!("arrows do not orient the diagram of {cartan}")));
            }
            arrows
        }
    };
    let q = QuiverSpec { cartan, arrows };
    if q.topological_order().is_none() {
        return Err(invalid("cyclic orientation".to_string()));
    }
    Ok(q)
}

fn bipartition(n: usize, edges: &[(usize, usize, u32)]) -> Vec<u8> {
    let mut colour = vec![u8::MAX; n];
    if n == 0 {
        return colour;
    }
    colour[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &(i, j, _) in edges {
            let u = if i == v {
                j
            } else if j == v {
                i
            } else {
                continue;
            };
            if colour[u] == u8::MAX {
                colour[u] = 1 - colour[v];
                queue.push_back(u);
            }
        }
    }
    colour
}

impl QuiverSpec {
    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// Colour classes of the underlying diagram; vertex 1 has colour 0.
    pub fn colouring(&self) -> Vec<u8> {
        bipartition(self.rank(), &self.cartan.edges())
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.rank();
        let mut is_tail = vec![false; n];
        let mut is_head = vec![false; n];
        for &(a, b) in &self.arrows {
            is_tail[a] = true;
            is_head[b] = true;
        }
        (0..n).all(|v| !(is_tail[v] && is_head[v]))
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().filter(move |a| a.0 == v).map(|a| a.1)
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().filter(move |a| a.1 == v).map(|a| a.0)
    }

    /// Vertices ordered so that every arrow points forward; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.rank();
        let mut indeg = vec![0usize; n];
        for &(_, b) in &self.arrows {
            indeg[b] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            let mut next: Vec<usize> = self.successors(v).collect();
            next.sort_unstable_by(|a, b| b.cmp(a));
            for u in next {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    ready.push(u);
                }
            }
            ready.sort_unstable_by(|a, b| b.cmp(a));
        }
        (order.len() == n).then_some(order)
    }

    /// The Coxeter element as a word in simple reflections (0-based), sinks
    /// first: `c = s_{i_1} s_{i_2} ... s_{i_n}` with each `i_k` a sink of the
    /// quiver after reflecting at `i_1, ..., i_{k-1}`.
    pub fn coxeter_word(&self) -> Vec<usize> {
        let mut order = self.topological_order().expect("acyclic");
        order.reverse();
        order
    }

    /// Arrow labels in the weighted-quiver notation: `"a,b"` for crystallographic
    /// multiple bonds, `2cos(pi/m)` as a decimal for non-crystallographic ones.
    pub fn arrow_labels(&self) -> Vec<((usize, usize), String)> {
        let edges = self.cartan.edges();
        let field = self.cartan.natural_field();
        let gram = self.cartan.gram(&field).expect("natural field");
        self.arrows
            .iter()
            .map(|&(a, b)| {
                let m = edges
                    .iter()
                    .find(|e| (e.0, e.1) == (a.min(b), a.max(b)))
                    .map(|e| e.2)
                    .unwrap_or(3);
                let label = if m == 3 {
                    String::new()
                } else if self.cartan.is_crystallographic() && field.is_rational() {
                    let two = ExactScalar::from_integer(&field, 2);
                    let ab = (&two * &gram[a][b] / &gram[a][a]).abs();
                    let ba = (&two * &gram[a][b] / &gram[b][b]).abs();
                    format!("{ab},{ba}")
                } else {
                    ExactScalar::theta(&make_field(m).expect("m >= 3")).approx_string()
                };
                ((a, b), label)
            })
            .collect()
    }
}

/// A finite root system, with roots as coefficient vectors over the simple roots.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan: CartanType,
    pub field: Field,
    pub gram: Vec<Vec<ExactScalar>>,
    /// Positive roots, in the order found by reflection closure.
    pub positive: Vec<Vec<ExactScalar>>,
    index: HashMap<Vec<ExactScalar>, usize>,
}

/// Upper bound on the number of roots explored before giving up.
const MAX_ROOTS: usize = 100_000;

pub fn build_root_system(quiver: &QuiverSpec, field: &Field) -> Result<RootSystem> {
    RootSystem::new(quiver.cartan, field)
}

impl RootSystem {
    /// Closes the simple roots under the simple reflections.
    pub fn new(cartan: CartanType, field: &Field) -> Result<Self> {
        let gram = cartan.gram(field)?;
        let n = cartan.rank();
        let two = ExactScalar::from_integer(field, 2);
        // coef[i][j] = 2 (alpha_j, alpha_i) / (alpha_i, alpha_i)
        let coef: Vec<Vec<ExactScalar>> = (0..n)
            .map(|i| (0..n).map(|j| &two * &gram[j][i] / &gram[i][i]).collect())
            .collect();
        let simple = |i: usize| -> Vec<ExactScalar> {
            (0..n)
                .map(|j| if i == j { ExactScalar::one(field) } else { ExactScalar::zero(field) })
                .collect()
        };
        let mut all: HashSet<Vec<ExactScalar>> = HashSet::new();
        let mut order: Vec<Vec<ExactScalar>> = Vec::new();
        let mut queue: VecDeque<Vec<ExactScalar>> = (0..n).map(simple).collect();
        for r in &queue {
            all.insert(r.clone());
            order.push(r.clone());
        }
        while let Some(root) = queue.pop_front() {
            for (i, ci) in coef.iter().enumerate() {
                let mut pairing = ExactScalar::zero(field);
                for (x, c) in root.iter().zip(ci) {
                    if !x.is_zero() && !c.is_zero() {
                        pairing += &(x * c);
                    }
                }
                if pairing.is_zero() {
                    continue;
                }
                let mut image = root.clone();
                image[i] -= &pairing;
                if all.insert(image.clone()) {
                    if all.len() > MAX_ROOTS {
                        return Err(Error::Structural(format!("{cartan} does not close to a finite root system")));
                    }
                    order.push(image.clone());
                    queue.push_back(image);
                }
            }
        }
        let mut positive = Vec::new();
        for r in order {
            let lead = r.iter().find(|x| !x.is_zero()).expect("roots are nonzero");
            if lead.is_positive() {
                if r.iter().any(|x| x.is_negative()) {
                    return Err(Error::Structural(format!("root of {cartan} with mixed signs")));
                }
                positive.push(r);
            }
        }
        if positive.len() * 2 != all.len() {
            return Err(Error::Structural(format!("{cartan}: root set is not symmetric")));
        }
        let index = positive.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        Ok(RootSystem {
            cartan,
            field: field.clone(),
            gram,
            positive,
            index,
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn contains(&self, v: &[ExactScalar]) -> bool {
        if self.index.contains_key(v) {
            return true;
        }
        let neg: Vec<ExactScalar> = v.iter().map(|x| -x).collect();
        self.index.contains_key(&neg)
    }

    pub fn is_positive_root(&self, v: &[ExactScalar]) -> bool {
        self.index.contains_key(v)
    }

    /// `Delta^+` together with the negative simple roots.
    pub fn almost_positive(&self) -> Vec<Vec<ExactScalar>> {
        let n = self.rank();
        let mut out: Vec<Vec<ExactScalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            -ExactScalar::one(&self.field)
                        } else {
                            ExactScalar::zero(&self.field)
                        }
                    })
                    .collect()
            })
            .collect();
        out.extend(self.positive.iter().cloned());
        out
    }

    /// Positive roots as integer vectors, for crystallographic systems over `Q`
    /// whose roots have integral coordinates.
    pub fn positive_integer_roots(&self) -> Option<Vec<Vec<i64>>> {
        self.positive
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        let q = x.as_rational()?;
                        if q.is_integer() {
                            q.to_integer().to_i64()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn pairing(&self, a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero(&self.field);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() && !self.gram[i][j].is_zero() {
                    acc += &(&(x * y) * &self.gram[i][j]);
                }
            }
        }
        acc
    }
}

pub(crate) fn int_vec(field: &Field, v: &[i64]) -> Vec<ExactScalar> {
    v.iter().map(|&x| ExactScalar::from_integer(field, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> CartanType {
        s.parse().unwrap()
    }

    #[test]
    fn parses_labels() {
        assert_eq!(ty("A3"), CartanType::A(3));
        assert_eq!(ty("a_3"), CartanType::A(3));
        assert_eq!(ty("I2(5)"), CartanType::I2(5));
        assert_eq!(ty("I2_12"), CartanType::I2(12));
        assert_eq!(ty("E8").to_string(), "E8");
        assert!("E9".parse::<CartanType>().is_err());
        assert!("D3".parse::<CartanType>().is_err());
        assert!("X4".parse::<CartanType>().is_err());
        assert!("F5".parse::<CartanType>().is_err());
    }

    #[test]
    fn coxeter_numbers_and_exponents() {
        let a3 = ty("A3").coxeter_data();
        assert_eq!((a3.h, a3.exponents.clone(), a3.positive_root_count), (4, vec![1, 2, 3], 6));
        let d6 = ty("D6").coxeter_data();
        assert_eq!(d6.h, 10);
        let mut want = vec![1, 3, 5, 7, 9, 5];
        want.sort_unstable();
        assert_eq!(d6.exponents, want);
        assert_eq!(d6.positive_root_count, 30);
        let a1 = ty("A1").coxeter_data();
        assert_eq!((a1.h, a1.exponents, a1.positive_root_count), (2, vec![1], 1));
    }

    #[test]
    fn catalan_numbers() {
        assert_eq!(ty("A3").catalan_count(), 14);
        assert_eq!(ty("C2").catalan_count(), 6);
        assert_eq!(ty("H3").catalan_count(), 32);
        assert_eq!(ty("H4").catalan_count(), 280);
        assert_eq!(ty("E6").catalan_count(), 833);
        assert_eq!(ty("E8").catalan_count(), 25080);
        assert_eq!(ty("F4").catalan_count(), 105);
        assert_eq!(ty("I2(7)").catalan_count(), 9);
    }

    #[test]
    fn exponent_sum_is_positive_root_count() {
        for s in ["A1", "A5", "B4", "C3", "D4", "D7", "E6", "E7", "E8", "F4", "G2", "H3", "H4", "I2(9)"] {
            let d = ty(s).coxeter_data();
            assert_eq!(d.exponents.iter().sum::<u64>(), d.positive_root_count, "{s}");
            assert_eq!(d.exponents.len(), ty(s).rank());
        }
    }

    #[test]
    fn bipartite_quivers() {
        let a3 = build_quiver(ty("A3"), Orientation::Bipartite).unwrap();
        assert_eq!(a3.arrows, vec![(0, 1), (2, 1)]);
        let a1 = build_quiver(ty("A1"), Orientation::Bipartite).unwrap();
        assert!(a1.arrows.is_empty());
        let d4 = build_quiver(ty("D4"), Orientation::Bipartite).unwrap();
        let mut arrows = d4.arrows.clone();
        arrows.sort_unstable();
        assert_eq!(arrows, vec![(0, 1), (2, 1), (3, 1)]);
        assert!(d4.is_bipartite());
    }

    #[test]
    fn explicit_orientations() {
        let q = build_quiver(ty("A3"), Orientation::Explicit(vec![(0, 1), (1, 2)])).unwrap();
        assert!(!q.is_bipartite());
        assert_eq!(q.topological_order().unwrap(), vec![0, 1, 2]);
        assert!(build_quiver(ty("A3"), Orientation::Explicit(vec![(0, 1), (1, 0)])).is_err());
        assert!(build_quiver(ty("A3"), Orientation::Explicit(vec![(0, 2), (1, 2)])).is_err());
        assert!(build_quiver(ty("A3"), Orientation::Explicit(vec![(0, 1)])).is_err());
    }

    #[test]
    fn root_counts_match_nh_over_two() {
        for s in ["A1", "A2", "A4", "B3", "C4", "D4", "D6", "E6", "E7", "E8", "F4", "G2", "H3", "H4", "I2(5)", "I2(8)"] {
            let t = ty(s);
            let rs = RootSystem::new(t, &t.natural_field()).unwrap();
            assert_eq!(rs.positive.len() as u64, t.coxeter_data().positive_root_count, "{s}");
        }
    }

    #[test]
    fn a2_roots() {
        let rs = RootSystem::new(ty("A2"), &rationals()).unwrap();
        let mut roots = rs.positive_integer_roots().unwrap();
        roots.sort();
        assert_eq!(roots, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn i2_5_and_h3_over_golden_field() {
        let f = make_field(5).unwrap();
        assert_eq!(RootSystem::new(ty("I2(5)"), &f).unwrap().positive.len(), 5);
        assert_eq!(RootSystem::new(ty("H3"), &f).unwrap().positive.len(), 15);
        assert!(RootSystem::new(ty("H3"), &make_field(4).unwrap()).is_err());
    }

    #[test]
    fn b_and_c_long_short() {
        let b2 = RootSystem::new(ty("B3"), &rationals()).unwrap();
        let v = int_vec(&rationals(), &[0, 1, 2]);
        assert!(b2.is_positive_root(&v));
        let c3 = RootSystem::new(ty("C3"), &rationals()).unwrap();
        assert!(c3.is_positive_root(&int_vec(&rationals(), &[0, 2, 1])));
        assert!(!c3.is_positive_root(&v));
    }

    #[test]
    fn roots_are_reflection_closed_and_symmetric() {
        let t = ty("H3");
        let f = t.natural_field();
        let rs = RootSystem::new(t, &f).unwrap();
        for r in &rs.positive {
            let neg: Vec<_> = r.iter().map(|x| -x).collect();
            assert!(rs.contains(&neg));
            // all roots of a non-crystallographic system share the simple root length
            assert_eq!(rs.pairing(r, r), ExactScalar::from_integer(&f, 2));
        }
    }

    #[test]
    fn arrow_labels_show_bond_data() {
        let c2 = build_quiver(ty("C2"), Orientation::Bipartite).unwrap();
        assert_eq!(c2.arrow_labels()[0].1, "2,1");
        let h3 = build_quiver(ty("H3"), Orientation::Bipartite).unwrap();
        assert_eq!(h3.arrow_labels()[1].1, "1.61803398875");
    }
}
