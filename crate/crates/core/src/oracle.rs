//! Independent desk-scale checks: gradient indices in one and two variables
//! counted from signs and quadrant changes, and a floating-point signature.
//!
//! Nothing here uses the lattice machinery. Sample points are rational and
//! polynomials are evaluated exactly; only [`float_signature`] uses floats.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Signature;
use crate::matrix::IntMatrix;

fn sign(x: &BigRational) -> i64 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// `sum c_k x^k` at a rational point.
fn eval_1d(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * x + BigRational::from_integer(c.clone())
    })
}

fn derivative_1d(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

/// Index at 0 of the derivative of `sum coeffs[k] x^k`.
///
/// The derivative is written `x^k q(x)` with `q(0) != 0`; every nonzero root
/// of `q` is at least `|q0| / (|q0| + max |qi|)` away from 0, so half of that
/// bound is a safe sampling radius.
pub fn index_1d(coeffs: &[i64]) -> Result<i64> {
    let coeffs: Vec<BigInt> = coeffs.iter().map(|&c| c.into()).collect();
    let d = derivative_1d(&coeffs);
    let Some(k) = d.iter().position(|c| !c.is_zero()) else {
        return Err(Error::Oracle("derivative vanishes identically".into()));
    };
    let q = &d[k..];
    let q0 = q[0].abs();
    let qmax = q[1..].iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero);
    let rho = BigRational::new(q0.clone(), BigInt::from(2) * (&q0 + qmax));
    index_1d_window(&coeffs, &-rho.clone(), &rho)
}

/// Boundary degree `(sign g'(b) - sign g'(a)) / 2` of the derivative on `[a, b]`.
pub fn index_1d_window(coeffs: &[BigInt], a: &BigRational, b: &BigRational) -> Result<i64> {
    let d = derivative_1d(coeffs);
    let (sa, sb) = (sign(&eval_1d(&d, a)), sign(&eval_1d(&d, b)));
    if sa == 0 || sb == 0 {
        return Err(Error::Oracle(format!(
            "derivative vanishes at an endpoint of [{a}, {b}]"
        )));
    }
    Ok((sb - sa) / 2)
}

/// A polynomial in `x, y` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    /// `((i, j), c)` for `c x^i y^j`, exponents unique, coefficients nonzero.
    terms: Vec<((u32, u32), BigInt)>,
}

impl Poly2 {
    pub fn new(terms: impl IntoIterator<Item = ((u32, u32), BigInt)>) -> Self {
        let mut p = Self::default();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn x() -> Self {
        Self::new([((1, 0), BigInt::one())])
    }

    pub fn y() -> Self {
        Self::new([((0, 1), BigInt::one())])
    }

    fn add_term(&mut self, e: (u32, u32), c: BigInt) {
        match self.terms.iter().position(|(f, _)| *f == e) {
            Some(k) => {
                self.terms[k].1 += c;
                if self.terms[k].1.is_zero() {
                    self.terms.remove(k);
                }
            }
            None if !c.is_zero() => self.terms.push((e, c)),
            None => {}
        }
    }

    pub fn terms(&self) -> &[((u32, u32), BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|((i, j), _)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, ((i, j), c)| {
            acc + BigRational::from_integer(c.clone())
                * num_traits::pow(x.clone(), *i as usize)
                * num_traits::pow(y.clone(), *j as usize)
        })
    }

    pub fn dx(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), c * BigInt::from(*i))),
        )
    }

    pub fn dy(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), c * BigInt::from(*j))),
        )
    }

    pub fn gradient(&self) -> (Self, Self) {
        (self.dx(), self.dy())
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms = self.terms.clone();
        terms.sort_by_key(|t| std::cmp::Reverse((t.0 .0 + t.0 .1, t.0)));
        for (k, ((i, j), c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let monomial = *i + *j > 0;
            if !a.is_one() || !monomial {
                write!(f, "{a}")?;
            }
            let mut first = a.is_one();
            for (var, e) in [("x", *i), ("y", *j)] {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{var}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Poly2 {
    type Err = Error;

    /// Parses sums of monomials such as `x^2 - 3*x*y + y^3 - 2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Oracle(format!("cannot parse polynomial {s:?}: {msg}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        if !compact.is_ascii() {
            return Err(bad("unexpected character"));
        }
        let mut poly = Self::default();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(bad("missing term"));
            }
            let mut coeff = BigInt::one();
            let (mut i, mut j) = (0u32, 0u32);
            for factor in term.split('*') {
                let mut chars = factor;
                let digits = chars.find(|c: char| !c.is_ascii_digit()).unwrap_or(chars.len());
                if digits > 0 {
                    coeff *= chars[..digits].parse::<BigInt>().map_err(|_| bad("bad number"))?;
                    chars = &chars[digits..];
                }
                while !chars.is_empty() {
                    let var = chars.as_bytes()[0];
                    chars = &chars[1..];
                    let mut e = 1;
                    if let Some(after) = chars.strip_prefix('^') {
                        let n = after.find(|c: char| !c.is_ascii_digit()).unwrap_or(after.len());
                        e = after[..n].parse().map_err(|_| bad("bad exponent"))?;
                        chars = &after[n..];
                    }
                    match var {
                        b'x' => i += e,
                        b'y' => j += e,
                        _ => return Err(bad("unknown variable")),
                    }
                }
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
            }
            poly.add_term((i, j), if negative { -coeff } else { coeff });
        }
        Ok(poly)
    }
}

/// Half-open quadrants: `0` is `x > 0, y >= 0`, then counter-clockwise.
fn quadrant(x: &BigRational, y: &BigRational) -> Option<u8> {
    let (sx, sy) = (sign(x), sign(y));
    match (sx, sy) {
        (0, 0) => None,
        (1, s) if s >= 0 => Some(0),
        (s, 1) if s <= 0 => Some(1),
        (-1, s) if s <= 0 => Some(2),
        _ => Some(3),
    }
}

/// Rational points on the circle of radius `r` about `c`, counter-clockwise,
/// starting at angle `-pi`.
fn circle_points(c: &(BigRational, BigRational), r: &BigRational, n: usize) -> Vec<(BigRational, BigRational)> {
    let mut out = Vec::with_capacity(n);
    out.push((&c.0 - r, c.1.clone()));
    let scale = BigInt::from(1u64 << 24);
    for k in 1..n {
        // tan(theta / 2) is increasing on (-pi, pi); only the ordering matters
        let half = std::f64::consts::PI * (k as f64 / n as f64 - 0.5);
        let t = BigRational::new(
            BigInt::from((half.tan() * (1u64 << 24) as f64).round() as i64),
            scale.clone(),
        );
        let one = BigRational::one();
        let denom = &one + &t * &t;
        let x = r * (&one - &t * &t) / &denom;
        let y = r * BigRational::from_integer(2.into()) * &t / denom;
        out.push((&c.0 + x, &c.1 + y));
    }
    out
}

/// Winding number of `(p, q)` along the circle of radius `radius` about the origin.
pub fn index_2d(grad: &(Poly2, Poly2), radius: &BigRational, samples: usize) -> Result<i64> {
    let origin = (BigRational::zero(), BigRational::zero());
    index_2d_around(grad, &origin, radius, samples)
}

/// Winding number about an arbitrary centre. At least `8 (deg + 1)` samples
/// are used; a step across opposite quadrants doubles the sampling.
pub fn index_2d_around(
    grad: &(Poly2, Poly2),
    center: &(BigRational, BigRational),
    radius: &BigRational,
    samples: usize,
) -> Result<i64> {
    if !radius.is_positive() {
        return Err(Error::Oracle(format!("radius must be positive, got {radius}")));
    }
    let deg = grad.0.degree().max(grad.1.degree()) as usize;
    let mut n = samples.max(8 * (deg + 1));
    for _ in 0..12 {
        let mut quads = Vec::with_capacity(n);
        for (x, y) in circle_points(center, radius, n) {
            let q = quadrant(&grad.0.eval(&x, &y), &grad.1.eval(&x, &y))
                .ok_or_else(|| Error::Oracle(format!("field vanishes at sample point ({x}, {y})")))?;
            quads.push(q);
        }
        let mut quarter_turns = 0i64;
        let mut ambiguous = false;
        for k in 0..n {
            match (quads[(k + 1) % n] + 4 - quads[k]) % 4 {
                0 => {}
                1 => quarter_turns += 1,
                3 => quarter_turns -= 1,
                _ => {
                    ambiguous = true;
                    break;
                }
            }
        }
        if !ambiguous {
            debug_assert_eq!(quarter_turns % 4, 0);
            return Ok(quarter_turns / 4);
        }
        n *= 2;
    }
    Err(Error::Oracle(format!("ambiguous quadrant steps up to {n} samples")))
}

/// Eigenvalue sign counts of a symmetric matrix; eigenvalues within
/// `1e-9 * max |lambda|` of zero count as zero.
pub fn float_signature(m: &IntMatrix) -> Signature {
    let nu = m.rows();
    if nu == 0 {
        return Signature::default();
    }
    let a = DMatrix::from_fn(nu, nu, |r, c| m[(r, c)].to_f64().unwrap_or(f64::NAN));
    let eig = SymmetricEigen::new(a).eigenvalues;
    let scale = eig.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tol = 1e-9 * scale;
    let (mut plus, mut minus, mut zero) = (0, 0, 0);
    for v in eig.iter() {
        if v.abs() <= tol {
            zero += 1;
        } else if *v > 0.0 {
            plus += 1;
        } else {
            minus += 1;
        }
    }
    Signature::new(plus, minus, zero)
}
