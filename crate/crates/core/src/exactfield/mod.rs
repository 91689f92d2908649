//! Exact arithmetic in the real number fields `Q(theta)`, `theta = 2cos(pi/m)`.
//!
//! Elements are dense rational coefficient vectors in the power basis
//! `1, theta, ..., theta^(d-1)`. Signs are decided under the real embedding
//! sending `theta` to `2cos(pi/m)`, by interval evaluation over an isolating
//! interval of that root, bisected until the enclosure excludes zero.

pub mod poly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use poly::{IntPoly, RatPoly};

/// Bisection steps applied to the initial isolating interval at construction.
const INITIAL_REFINEMENT: usize = 64;

pub struct FieldSpec {
    order: u32,
    min_poly: IntPoly,
    min_poly_rat: RatPoly,
    lo: BigRational,
    hi: BigRational,
    /// Enclosures of `theta^j` over `[lo, hi]`, `j < degree`.
    powers: Vec<(BigRational, BigRational)>,
}

pub type Field = Arc<FieldSpec>;

static FIELDS: OnceLock<Mutex<HashMap<u32, Field>>> = OnceLock::new();

/// The field `Q(2cos(pi/m))`. Fields are interned, so repeated calls with the
/// same `m` return the same handle.
pub fn make_field(m: u32) -> Result<Field> {
    if m < 2 {
        return Err(invalid(format!("field order m = {m} must be at least 2")));
    }
    let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&m) {
        return Ok(f.clone());
    }
    let field = Arc::new(FieldSpec::build(m)?);
    Ok(cache.lock().unwrap().entry(m).or_insert(field).clone())
}

/// `Q`, realized as `Q(2cos(pi/3))`.
pub fn rationals() -> Field {
    make_field(3).expect("m = 3 is a valid order")
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl FieldSpec {
    fn build(m: u32) -> Result<Self> {
        let min_poly = poly::min_poly_2cos(m);
        let min_poly_rat = poly::to_rat(&min_poly);
        let degree = min_poly.len() - 1;
        let (lo, hi) = if degree == 1 {
            let root = BigRational::from_integer(-min_poly[0].clone());
            (root.clone(), root)
        } else {
            isolate(&min_poly_rat, m)?
        };
        let mut spec = FieldSpec {
            order: m,
            min_poly,
            min_poly_rat,
            lo,
            hi,
            powers: Vec::new(),
        };
        spec.powers = power_enclosures(&spec.lo, &spec.hi, degree);
        Ok(spec)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    /// Minimal polynomial of `theta`, integer coefficients from low to high degree.
    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn isolating_interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn theta_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / rat(2);
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn label(&self) -> String {
        if self.is_rational() {
            "Q".to_string()
        } else {
            format!("Q(2cos(pi/{}))", self.order)
        }
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("order", &self.order)
            .field("min_poly", &self.min_poly)
            .finish()
    }
}

fn isolate(p: &[BigRational], m: u32) -> Result<(BigRational, BigRational)> {
    let approx = 2.0 * (std::f64::consts::PI / m as f64).cos();
    let mut eps = 1e-6;
    loop {
        let lo = BigRational::from_float(approx - eps).expect("finite");
        let hi = BigRational::from_float(approx + eps).expect("finite");
        let slo = sign_of(&poly::eval_rat(p, &lo));
        let shi = sign_of(&poly::eval_rat(p, &hi));
        if slo * shi < 0 && poly::sturm_count(p, &lo, &hi) == 1 {
            let (mut lo, mut hi) = (lo, hi);
            for _ in 0..INITIAL_REFINEMENT {
                bisect(p, &mut lo, &mut hi, slo);
            }
            return Ok((lo, hi));
        }
        eps /= 16.0;
        if eps < 1e-14 {
            return Err(Error::Structural(format!(
                "could not isolate 2cos(pi/{m}) from its conjugates"
            )));
        }
    }
}

/// Halves `[lo, hi]` keeping the root; `slo` is the sign of `p(lo)`.
fn bisect(p: &[BigRational], lo: &mut BigRational, hi: &mut BigRational, slo: i8) {
    let mid = (&*lo + &*hi) / rat(2);
    let s = sign_of(&poly::eval_rat(p, &mid));
    if s == 0 {
        *lo = mid.clone();
        *hi = mid;
    } else if s == slo {
        *lo = mid;
    } else {
        *hi = mid;
    }
}

fn power_enclosures(lo: &BigRational, hi: &BigRational, degree: usize) -> Vec<(BigRational, BigRational)> {
    // theta > 0 whenever degree > 1
    let mut out = Vec::with_capacity(degree);
    let (mut a, mut b) = (BigRational::one(), BigRational::one());
    for _ in 0..degree {
        out.push((a.clone(), b.clone()));
        a = &a * lo;
        b = &b * hi;
    }
    out
}

fn enclosure(coeffs: &[BigRational], powers: &[(BigRational, BigRational)]) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (c, (pl, ph)) in coeffs.iter().zip(powers) {
        if c.is_zero() {
            continue;
        }
        let (x, y) = (c * pl, c * ph);
        if c.is_positive() {
            lo += x;
            hi += y;
        } else {
            lo += y;
            hi += x;
        }
    }
    (lo, hi)
}

/// An element of `Q(theta)`.
#[derive(Clone)]
pub struct ExactScalar {
    field: Field,
    coeffs: Vec<BigRational>,
}

impl ExactScalar {
    pub fn zero(field: &Field) -> Self {
        ExactScalar {
            field: field.clone(),
            coeffs: vec![BigRational::zero(); field.degree()],
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_integer(field: &Field, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    pub fn from_rational(field: &Field, q: BigRational) -> Self {
        let mut s = Self::zero(field);
        s.coeffs[0] = q;
        s
    }

    /// The generator `theta = 2cos(pi/m)`.
    pub fn theta(field: &Field) -> Self {
        if field.is_rational() {
            Self::from_rational(field, field.lo.clone())
        } else {
            let mut s = Self::zero(field);
            s.coeffs[1] = BigRational::one();
            s
        }
    }

    /// Builds `sum c_j theta^j`; vectors longer than the degree are reduced.
    pub fn from_coeffs(field: &Field, coeffs: Vec<BigRational>) -> Self {
        let d = field.degree();
        if coeffs.len() <= d {
            let mut c = coeffs;
            c.resize(d, BigRational::zero());
            ExactScalar { field: field.clone(), coeffs: c }
        } else if field.is_rational() {
            let x = &field.lo;
            let v = poly::eval_rat(&coeffs, x);
            Self::from_rational(field, v)
        } else {
            ExactScalar {
                field: field.clone(),
                coeffs: reduce(field, coeffs),
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Sign under the distinguished real embedding: -1, 0 or +1.
    pub fn sign(&self) -> i8 {
        if let Some(q) = self.as_rational() {
            return sign_of(q);
        }
        let f = &*self.field;
        let (l, h) = enclosure(&self.coeffs, &f.powers);
        if l.is_positive() {
            return 1;
        }
        if h.is_negative() {
            return -1;
        }
        let slo = sign_of(&poly::eval_rat(&f.min_poly_rat, &f.lo));
        let (mut lo, mut hi) = (f.lo.clone(), f.hi.clone());
        loop {
            bisect(&f.min_poly_rat, &mut lo, &mut hi, slo);
            let powers = power_enclosures(&lo, &hi, f.degree());
            let (l, h) = enclosure(&self.coeffs, &powers);
            if l.is_positive() {
                return 1;
            }
            if h.is_negative() {
                return -1;
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact comparison under the real embedding.
    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        Ok(match self.checked_sub(other)?.sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let (field, a, b) = align(self, other)?;
        Ok(ExactScalar {
            field,
            coeffs: a.iter().zip(b.iter()).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let (field, a, b) = align(self, other)?;
        Ok(ExactScalar {
            field,
            coeffs: a.iter().zip(b.iter()).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let (field, a, b) = align(self, other)?;
        if let Some(q) = rational_part(&b) {
            return Ok(ExactScalar { field, coeffs: a.iter().map(|x| x * q).collect() });
        }
        if let Some(q) = rational_part(&a) {
            return Ok(ExactScalar { field, coeffs: b.iter().map(|x| x * q).collect() });
        }
        let d = field.degree();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let coeffs = reduce(&field, prod);
        Ok(ExactScalar { field, coeffs })
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, q.recip()));
        }
        let inv = poly::inverse_mod(&self.coeffs, &self.field.min_poly_rat).ok_or(Error::DivisionByZero)?;
        Ok(Self::from_coeffs(&self.field, inv))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = other.as_rational() {
            let (field, a, _) = align(self, other)?;
            return Ok(ExactScalar { field, coeffs: a.iter().map(|x| x / q).collect() });
        }
        self.checked_mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Value rounded to `f64`, computed from a rational evaluation at the
    /// midpoint of the isolating interval.
    pub fn to_f64(&self) -> f64 {
        if let Some(q) = self.as_rational() {
            return q.to_f64().unwrap_or(f64::NAN);
        }
        let f = &*self.field;
        let mid = (&f.lo + &f.hi) / rat(2);
        poly::eval_rat(&self.coeffs, &mid).to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal approximation with 12 significant digits.
    pub fn approx_string(&self) -> String {
        format_sig12(self.to_f64())
    }

    pub fn to_json(&self) -> ScalarJson {
        ScalarJson {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            approx: self.approx_string(),
        }
    }

    pub fn from_json(field: &Field, json: &ScalarJson) -> Result<Self> {
        if json.coeffs.len() > field.degree() {
            return Err(invalid(format!(
                "scalar has {} coefficients, field {} has degree {}",
                json.coeffs.len(),
                field.label(),
                field.degree()
            )));
        }
        let coeffs = json.coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(field, coeffs))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| invalid(format!("not a rational number: {s:?}")))
}

pub(crate) fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = 11 - mag;
    if (0..=30).contains(&decimals) {
        format!("{:.*}", decimals as usize, v)
    } else {
        format!("{:.11e}", v)
    }
}

fn rational_part(c: &[BigRational]) -> Option<&BigRational> {
    if c[1..].iter().all(Zero::is_zero) {
        Some(&c[0])
    } else {
        None
    }
}

fn reduce(field: &FieldSpec, mut t: Vec<BigRational>) -> Vec<BigRational> {
    let d = field.degree();
    let mp = &field.min_poly;
    for k in (d..t.len()).rev() {
        if t[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut t[k], BigRational::zero());
        for (j, mj) in mp[..d].iter().enumerate() {
            if !mj.is_zero() {
                t[k - d + j] -= &c * BigRational::from_integer(mj.clone());
            }
        }
    }
    t.truncate(d);
    t.resize(d, BigRational::zero());
    t
}

fn compatible(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || a.order == b.order || (a.is_rational() && b.is_rational())
}

type Aligned<'a> = (Field, std::borrow::Cow<'a, [BigRational]>, std::borrow::Cow<'a, [BigRational]>);

/// Puts two operands over a common field, embedding `Q` when needed.
fn align<'a>(a: &'a ExactScalar, b: &'a ExactScalar) -> Result<Aligned<'a>> {
    use std::borrow::Cow;
    if compatible(&a.field, &b.field) {
        return Ok((a.field.clone(), Cow::Borrowed(&a.coeffs), Cow::Borrowed(&b.coeffs)));
    }
    let lift = |s: &ExactScalar, d: usize| {
        let mut c = s.coeffs.clone();
        c.resize(d, BigRational::zero());
        c
    };
    if a.field.is_rational() {
        let d = b.field.degree();
        return Ok((b.field.clone(), Cow::Owned(lift(a, d)), Cow::Borrowed(&b.coeffs)));
    }
    if b.field.is_rational() {
        let d = a.field.degree();
        return Ok((a.field.clone(), Cow::Borrowed(&a.coeffs), Cow::Owned(lift(b, d))));
    }
    Err(Error::FieldMismatch {
        left: a.field.order,
        right: b.field.order,
    })
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        match align(self, other) {
            Ok((_, a, b)) => a == b,
            Err(_) => false,
        }
    }
}

impl Eq for ExactScalar {}

impl Hash for ExactScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let end = self.coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |p| p + 1);
        self.coeffs[..end].hash(state);
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.field.label())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if j > 0 && mag.is_one() { String::new() } else { mag.to_string() };
            match j {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{coef}t")?,
                _ => write!(f, "{coef}t^{j}")?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

// Operators panic on mixed fields or division by zero; the `checked_*`
// methods report those as errors instead.
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        if compatible(&self.field, &rhs.field) {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        if compatible(&self.field, &rhs.field) {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x -= y;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(mut self) -> ExactScalar {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

/// JSON form of a scalar: exact power-basis coefficients plus a decimal approximation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub coeffs: Vec<String>,
    pub approx: String,
}

/// `w_1 = 1, w_2 = theta, w_{k+1} = theta w_k - w_{k-1}`; that is
/// `w_k = U_{k-1}(theta/2) = sin(k pi/m) / sin(pi/m)`.
pub fn chebyshev_weights(field: &Field, count: usize) -> Vec<ExactScalar> {
    let theta = ExactScalar::theta(field);
    let mut out: Vec<ExactScalar> = Vec::with_capacity(count);
    for k in 0..count {
        let w = match k {
            0 => ExactScalar::one(field),
            1 => theta.clone(),
            _ => &theta * &out[k - 1] - &out[k - 2],
        };
        out.push(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn minimal_polynomials() {
        let ints = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        assert_eq!(make_field(3).unwrap().minimal_polynomial(), ints(&[-1, 1]));
        assert_eq!(make_field(4).unwrap().minimal_polynomial(), ints(&[-2, 0, 1]));
        assert_eq!(make_field(5).unwrap().minimal_polynomial(), ints(&[-1, -1, 1]));
        assert_eq!(make_field(2).unwrap().minimal_polynomial(), ints(&[0, 1]));
        assert!(make_field(1).is_err());
        assert!(make_field(0).is_err());
    }

    #[test]
    fn degrees_are_half_totient() {
        for m in 2..=30u32 {
            let phi = (1..=2 * m).filter(|k| num_integer::gcd(*k, 2 * m) == 1).count();
            assert_eq!(make_field(m).unwrap().degree(), phi / 2, "m = {m}");
        }
    }

    #[test]
    fn golden_ratio_arithmetic() {
        let f = make_field(5).unwrap();
        let phi = ExactScalar::theta(&f);
        assert_eq!(&phi * &phi, &phi + &ExactScalar::one(&f));
        let d = &phi - &ExactScalar::from_rational(&f, q(8, 5));
        assert_eq!(d.sign(), 1);
        let d = &phi - &ExactScalar::from_rational(&f, q(13, 8));
        assert_eq!(d.sign(), -1);
        assert_eq!(phi.inverse().unwrap(), &phi - &ExactScalar::one(&f));
    }

    #[test]
    fn sqrt2_difference_of_squares() {
        let f = make_field(4).unwrap();
        let r = ExactScalar::theta(&f);
        let one = ExactScalar::one(&f);
        assert!((&(&one + &r) * &(&r - &one)).is_one());
    }

    #[test]
    fn errors_on_zero_division_and_mixed_fields() {
        let f5 = make_field(5).unwrap();
        let f4 = make_field(4).unwrap();
        let z = ExactScalar::zero(&f5);
        assert!(matches!(ExactScalar::one(&f5).checked_div(&z), Err(Error::DivisionByZero)));
        assert!(matches!(z.inverse(), Err(Error::DivisionByZero)));
        let a = ExactScalar::theta(&f5);
        let b = ExactScalar::theta(&f4);
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch { left: 5, right: 4 })));
        // Q embeds everywhere
        let half = ExactScalar::from_rational(&rationals(), q(1, 2));
        let s = a.checked_add(&half).unwrap();
        assert_eq!(s.field().order(), 5);
        assert_eq!(s.coeffs(), &[q(1, 2), q(1, 1)]);
    }

    #[test]
    fn sign_near_zero_needs_refinement() {
        // F(n+1)/F(n) alternates around phi; |phi - F(80)/F(79)| ~ 2e-33 is far
        // below the width of the stored isolating interval.
        let f = make_field(5).unwrap();
        let big = |s: &str| BigInt::from_str(s).unwrap();
        let below = BigRational::new(big("23416728348467685"), big("14472334024676221"));
        let above = BigRational::new(big("37889062373143906"), big("23416728348467685"));
        let phi = ExactScalar::theta(&f);
        assert_eq!((&phi - &ExactScalar::from_rational(&f, below)).sign(), 1);
        assert_eq!((&phi - &ExactScalar::from_rational(&f, above)).sign(), -1);
    }

    #[test]
    fn theta_float_agrees_with_cosine() {
        for m in 2..=30u32 {
            let f = make_field(m).unwrap();
            let t = ExactScalar::theta(&f).to_f64();
            let want = 2.0 * (std::f64::consts::PI / m as f64).cos();
            assert!((t - want).abs() < 1e-9, "m = {m}: {t} vs {want}");
        }
    }

    #[test]
    fn chebyshev_weights_positive_and_symmetric() {
        for m in 3..=30u32 {
            let f = make_field(m).unwrap();
            let w = chebyshev_weights(&f, m as usize + 1);
            for k in 0..(m as usize - 1) {
                assert_eq!(w[k].sign(), 1, "m = {m}, k = {}", k + 1);
                // U_{k-1} at cos(pi/m) equals sin(k pi/m)/sin(pi/m)
                let want = ((k + 1) as f64 * std::f64::consts::PI / m as f64).sin()
                    / (std::f64::consts::PI / m as f64).sin();
                assert!((w[k].to_f64() - want).abs() < 1e-9);
                assert_eq!(w[k], w[m as usize - 2 - k]);
            }
            assert!(w[m as usize - 1].is_zero());
        }
    }

    #[test]
    fn json_shape() {
        let f = make_field(5).unwrap();
        let j = ExactScalar::theta(&f).to_json();
        assert_eq!(j.coeffs, vec!["0", "1"]);
        assert_eq!(j.approx, "1.61803398875");
        let back = ExactScalar::from_json(&f, &j).unwrap();
        assert_eq!(back, ExactScalar::theta(&f));
        let s = ExactScalar::from_rational(&f, q(-3, 7)).to_json();
        assert_eq!(s.coeffs, vec!["-3/7", "0"]);
    }
}
