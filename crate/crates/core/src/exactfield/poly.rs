//! Univariate polynomial helpers over `Z` and `Q`, coefficients low to high.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntPoly = Vec<BigInt>;
pub type RatPoly = Vec<BigRational>;

fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Exact quotient of `num` by the monic `den`; panics if the division leaves a remainder.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> IntPoly {
    let mut rem: IntPoly = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    if rem.len() <= dd {
        assert!(rem.is_empty(), "non-exact cyclotomic division");
        return Vec::new();
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        quot[k - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[k - dd + j] -= &c * dj;
        }
    }
    trim(&mut rem);
    assert!(rem.is_empty(), "non-exact cyclotomic division");
    quot
}

/// The n-th cyclotomic polynomial, by dividing `x^n - 1` by every `Phi_d`, `d | n`, `d < n`.
pub fn cyclotomic(n: u32) -> IntPoly {
    assert!(n >= 1);
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = div_exact_monic(&p, &cyclotomic(d));
        }
    }
    p
}

/// Rewrites a palindromic polynomial `P` of degree `2d` as `Q(y)` with
/// `x^{-d} P(x) = Q(x + 1/x)`, using `x^j + x^{-j} = L_j(y)`,
/// `L_0 = 2`, `L_1 = y`, `L_{j+1} = y L_j - L_{j-1}`.
pub fn fold_palindromic(p: &[BigInt]) -> IntPoly {
    let deg = p.len() - 1;
    assert!(deg % 2 == 0, "palindromic polynomial must have even degree");
    let d = deg / 2;
    for j in 0..=deg {
        assert_eq!(p[j], p[deg - j], "polynomial is not palindromic");
    }
    let mut out = vec![BigInt::zero(); d + 1];
    out[0] += &p[d];
    // lucas[j] = L_j as a polynomial in y
    let mut prev: IntPoly = vec![BigInt::from(2)];
    let mut cur: IntPoly = vec![BigInt::zero(), BigInt::one()];
    for j in 1..=d {
        for (e, c) in cur.iter().enumerate() {
            out[e] += &p[d + j] * c;
        }
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (e, c) in cur.iter().enumerate() {
            next[e + 1] += c;
        }
        for (e, c) in prev.iter().enumerate() {
            next[e] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    trim(&mut out);
    out
}

/// Minimal polynomial of `2cos(pi/m)` over `Q`.
pub fn min_poly_2cos(m: u32) -> IntPoly {
    fold_palindromic(&cyclotomic(2 * m))
}

pub fn to_rat(p: &[BigInt]) -> RatPoly {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

pub fn eval_rat(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn derivative(p: &[BigRational]) -> RatPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(e, c)| c * BigRational::from_integer(BigInt::from(e)))
        .collect()
}

/// Quotient and remainder of `a / b`, `b` nonzero.
pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let c = &r[k] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[k - db + j] -= &c * bj;
        }
        q[k - db] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn mul(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn sub(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out: RatPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Inverse of `a` modulo the irreducible `f`, or `None` if `a` is zero mod `f`.
pub fn inverse_mod(a: &[BigRational], f: &[BigRational]) -> Option<RatPoly> {
    let (_, a) = divrem(a, f);
    if a.is_empty() {
        return None;
    }
    // invariant: r0 = s0 * a (mod f), r1 = s1 * a (mod f)
    let mut r0 = f.to_vec();
    let mut r1 = a;
    let mut s0: RatPoly = Vec::new();
    let mut s1: RatPoly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant since f is irreducible
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    let (_, s) = divrem(&s0, f);
    Some(s.into_iter().map(|x| x / &c).collect())
}

fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = eval_rat(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of the squarefree `p` in the half-open interval `(lo, hi]`.
pub fn sturm_count(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> usize {
    let mut seq: Vec<RatPoly> = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    sign_changes(&seq, lo) - sign_changes(&seq, hi)
}
