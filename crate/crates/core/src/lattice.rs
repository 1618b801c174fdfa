//! Thimble lattices, sign vectors and exact inertia of integer forms.
//!
//! A [`ThimbleLattice`] stores the Gram matrix of a distinguished basis
//! `delta_1, ..., delta_nu` with `gram[r][c] = <delta_c, delta_r>`: the
//! intersection number of `delta_i` with `delta_j` sits in column `i`, row `j`.
//! Under that convention the Gram matrix is also the matrix of the operator
//! `S` with `(S x, y) = <x, y>`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// `(-1)^e` for any integer exponent.
pub fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The Picard-Lefschetz sign `(-1)^{m(m+1)/2}` for parity `m = n + i`.
pub fn pl_sign(parity: i64) -> i64 {
    match parity.rem_euclid(4) {
        0 | 3 => 1,
        _ => -1,
    }
}

/// Self-intersection `(-1)^{m(m-1)/2} (1 + (-1)^{m-1})` of a thimble.
pub fn self_intersection(parity: i64) -> i64 {
    if parity.rem_euclid(2) == 0 {
        return 0;
    }
    // m(m-1)/2 is even for m = 1 (mod 4) and odd for m = 3 (mod 4)
    if parity.rem_euclid(4) == 1 {
        2
    } else {
        -2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeViolation {
    NotSquare {
        rows: usize,
        cols: usize,
    },
    /// `gram[row][col]` and `gram[col][row]` break the (skew-)symmetry rule.
    Symmetry {
        row: usize,
        col: usize,
    },
    Diagonal {
        index: usize,
        expected: i64,
        found: BigInt,
    },
}

impl fmt::Display for LatticeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotSquare { rows, cols } => write!(f, "gram is {rows}x{cols}, not square"),
            Self::Symmetry { row, col } => {
                write!(
                    f,
                    "entries ({row}, {col}) and ({col}, {row}) violate the parity symmetry rule"
                )
            }
            Self::Diagonal { index, expected, found } => {
                write!(
                    f,
                    "diagonal entry {index} is {found}, self-intersection requires {expected}"
                )
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ThimbleLattice {
    parity: i64,
    gram: IntMatrix,
}

impl ThimbleLattice {
    /// Validating constructor.
    pub fn new(parity: i64, gram: IntMatrix) -> Result<Self> {
        let lattice = Self { parity, gram };
        validate_lattice(&lattice).map_err(Error::InvalidLattice)?;
        Ok(lattice)
    }

    /// Construction without validation, for reporting on arbitrary input.
    pub fn new_unchecked(parity: i64, gram: IntMatrix) -> Self {
        Self { parity, gram }
    }

    pub fn empty(parity: i64) -> Self {
        Self::new_unchecked(parity, IntMatrix::zeros(0, 0))
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn parity(&self) -> i64 {
        self.parity
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn into_gram(self) -> IntMatrix {
        self.gram
    }

    /// `<delta_a, delta_b>` for 0-based indices.
    pub fn pairing(&self, a: usize, b: usize) -> &BigInt {
        &self.gram[(b, a)]
    }

    pub fn is_symmetric_type(&self) -> bool {
        self.parity.rem_euclid(2) == 1
    }

    /// The factor `t` with `<x, y> = t <y, x>`: `+1` for odd parity, `-1` for even.
    pub fn transpose_sign(&self) -> i64 {
        if self.is_symmetric_type() {
            1
        } else {
            -1
        }
    }
}

/// A uniformly sampled valid lattice of rank `nu`, off-diagonal entries in `[-bound, bound]`.
pub fn random_lattice<R: Rng>(rng: &mut R, nu: usize, bound: i64, parity: i64) -> ThimbleLattice {
    let mut gram = IntMatrix::zeros(nu, nu);
    let t = if parity.rem_euclid(2) == 1 { 1 } else { -1 };
    for r in 0..nu {
        gram.set(r, r, self_intersection(parity));
        for c in r + 1..nu {
            let v = rng.gen_range(-bound..=bound);
            gram.set(r, c, v);
            gram.set(c, r, t * v);
        }
    }
    ThimbleLattice::new_unchecked(parity, gram)
}

/// Checks the parity symmetry rule and the self-intersection diagonal.
pub fn validate_lattice(lattice: &ThimbleLattice) -> std::result::Result<(), LatticeViolation> {
    let g = lattice.gram();
    if !g.is_square() {
        return Err(LatticeViolation::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    let t = BigInt::from(lattice.transpose_sign());
    let diag = self_intersection(lattice.parity());
    for r in 0..g.rows() {
        if g[(r, r)] != BigInt::from(diag) {
            return Err(LatticeViolation::Diagonal {
                index: r,
                expected: diag,
                found: g[(r, r)].clone(),
            });
        }
        for c in r + 1..g.cols() {
            if g[(r, c)] != &t * &g[(c, r)] {
                return Err(LatticeViolation::Symmetry { row: r, col: c });
            }
        }
    }
    Ok(())
}

/// Inertia `(n_plus, n_minus, n_zero)` of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_minus: usize, n_zero: usize) -> Self {
        Self {
            n_plus,
            n_minus,
            n_zero,
        }
    }

    pub fn sgn(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}) sgn {}",
            self.n_plus,
            self.n_minus,
            self.n_zero,
            self.sgn()
        )
    }
}

/// Exact inertia by symmetric elimination over the rationals.
///
/// A nonzero diagonal pivot contributes its sign. When every remaining diagonal
/// entry vanishes but an off-diagonal entry `b` does not, the hyperbolic block
/// `[[0, b], [b, 0]]` is eliminated at once and contributes `(1, 1, 0)`.
pub fn exact_signature(m: &IntMatrix) -> Result<Signature> {
    if let Some((row, col)) = m.symmetry_defect() {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} form", m.rows(), m.cols())));
        }
        return Err(Error::NotSymmetric { row, col });
    }
    let mut a: Vec<Vec<BigRational>> = m
        .to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut sig = Signature::default();
    while !a.is_empty() {
        let k = a.len();
        if let Some(p) = (0..k).find(|&i| !a[i][i].is_zero()) {
            let pivot = a[p][p].clone();
            if pivot.is_positive() {
                sig.n_plus += 1;
            } else {
                sig.n_minus += 1;
            }
            let col: Vec<BigRational> = (0..k).map(|i| a[i][p].clone()).collect();
            a = (0..k)
                .filter(|&i| i != p)
                .map(|i| {
                    (0..k)
                        .filter(|&j| j != p)
                        .map(|j| &a[i][j] - &col[i] * &col[j] / &pivot)
                        .collect()
                })
                .collect();
            continue;
        }
        let Some((p, q)) = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        else {
            sig.n_zero += k;
            break;
        };
        // Schur complement of B = [[0, b], [b, 0]]: A - C B^{-1} C^T with
        // B^{-1} = [[0, 1/b], [1/b, 0]], so the update is -(c_p c_q^T + c_q c_p^T)/b.
        sig.n_plus += 1;
        sig.n_minus += 1;
        let b = a[p][q].clone();
        let cp: Vec<BigRational> = (0..k).map(|i| a[i][p].clone()).collect();
        let cq: Vec<BigRational> = (0..k).map(|i| a[i][q].clone()).collect();
        a = (0..k)
            .filter(|&i| i != p && i != q)
            .map(|i| {
                (0..k)
                    .filter(|&j| j != p && j != q)
                    .map(|j| &a[i][j] - (&cp[i] * &cq[j] + &cq[i] * &cp[j]) / &b)
                    .collect()
            })
            .collect();
    }
    Ok(sig)
}

/// Signs `s_1, ..., s_{p+1}`, each `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<i64>);

impl SignVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if let Some(pos) = entries.iter().position(|s| s.abs() != 1) {
            return Err(Error::Dimension(format!(
                "sign entry {} is {}, expected +1 or -1",
                pos + 1,
                entries[pos]
            )));
        }
        Ok(Self(entries))
    }

    pub fn all_positive(len: usize) -> Self {
        Self(vec![1; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `s_k` with the 1-based numbering `k = 1, ..., p+1`.
    pub fn s(&self, k: usize) -> i64 {
        assert!(
            k >= 1 && k <= self.0.len(),
            "sign index {k} outside 1..={}",
            self.0.len()
        );
        self.0[k - 1]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Copy with `s_k` negated (1-based).
    pub fn flipped(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v[k - 1] = -v[k - 1];
        Self(v)
    }
}

/// Alternating sum `sum_i (-1)^i nu_i` of the thimble ranks.
pub fn milnor_number(nus: &[usize]) -> i64 {
    nus.iter()
        .enumerate()
        .map(|(i, &nu)| sign_pow(i as i64) * nu as i64)
        .sum()
}
