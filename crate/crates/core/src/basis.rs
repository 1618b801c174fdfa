//! Moves between distinguished bases: Picard-Lefschetz transformations, the
//! classical monodromy, braid generators `alpha_j` with their inverses, and
//! orientation flips.
//!
//! Positions `j` are 1-based throughout this module, matching braid tokens
//! such as `a1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{pl_sign, validate_lattice, ThimbleLattice};
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BraidMove {
    /// `alpha_j`
    Alpha(usize),
    /// `alpha_j^{-1}`
    AlphaInverse(usize),
    /// `delta_j -> -delta_j`
    Flip(usize),
}

impl BraidMove {
    pub fn position(&self) -> usize {
        match *self {
            Self::Alpha(j) | Self::AlphaInverse(j) | Self::Flip(j) => j,
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Self::Alpha(j) => Self::AlphaInverse(j),
            Self::AlphaInverse(j) => Self::Alpha(j),
            Self::Flip(j) => Self::Flip(j),
        }
    }
}

impl fmt::Display for BraidMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Alpha(j) => write!(f, "a{j}"),
            Self::AlphaInverse(j) => write!(f, "A{j}"),
            Self::Flip(j) => write!(f, "f{j}"),
        }
    }
}

impl FromStr for BraidMove {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let mut chars = token.chars();
        let kind = chars.next().ok_or_else(|| Error::MalformedWord("empty token".into()))?;
        let digits = chars.as_str();
        let j: usize = digits
            .parse()
            .ok()
            .filter(|&j| j >= 1 && digits.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| Error::MalformedWord(format!("bad position in token {token:?}")))?;
        match kind {
            'a' => Ok(Self::Alpha(j)),
            'A' => Ok(Self::AlphaInverse(j)),
            'f' => Ok(Self::Flip(j)),
            _ => Err(Error::MalformedWord(format!("unknown move {token:?}"))),
        }
    }
}

/// A sequence of moves, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BraidWord(pub Vec<BraidMove>);

impl BraidWord {
    pub fn moves(&self) -> &[BraidMove] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(BraidMove::inverse).collect())
    }

    /// Checks every position against the rank `nu`.
    pub fn check_rank(&self, nu: usize) -> Result<()> {
        for m in &self.0 {
            let limit = match m {
                BraidMove::Flip(_) => nu,
                _ => nu.saturating_sub(1),
            };
            if m.position() > limit {
                return Err(Error::MalformedWord(format!("move {m} out of range for rank {nu}")));
            }
        }
        Ok(())
    }
}

/// A random word of `len` moves valid for rank `nu`; flips appear with probability `flip_probability`.
pub fn random_braid_word<R: Rng>(rng: &mut R, nu: usize, len: usize, flip_probability: f64) -> BraidWord {
    let mut moves = Vec::with_capacity(len);
    for _ in 0..len {
        if nu == 0 {
            break;
        }
        if nu == 1 || rng.gen_bool(flip_probability) {
            moves.push(BraidMove::Flip(rng.gen_range(1..=nu)));
        } else {
            let j = rng.gen_range(1..nu);
            moves.push(if rng.gen_bool(0.5) {
                BraidMove::Alpha(j)
            } else {
                BraidMove::AlphaInverse(j)
            });
        }
    }
    BraidWord(moves)
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// Unimodular matrix whose columns express the new basis in the old one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisChange(IntMatrix);

impl BasisChange {
    pub fn identity(nu: usize) -> Self {
        Self(IntMatrix::identity(nu))
    }

    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension("basis change must be square".into()));
        }
        let det = matrix.det();
        if !(det.is_one() || (-&det).is_one()) {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    /// The change obtained by applying `self` and then `next`.
    pub fn then(&self, next: &BasisChange) -> Self {
        Self(&self.0 * &next.0)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.unimodular_inverse().expect("basis changes are unimodular"))
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }
}

fn check_position(j: usize, limit: usize, nu: usize) -> Result<usize> {
    if j == 0 || j > limit {
        return Err(Error::IndexOutOfRange { index: j, rank: nu });
    }
    Ok(j - 1)
}

/// `P^T G P`: the Gram matrix of the basis given by the columns of `P`.
pub fn congruence(gram: &IntMatrix, change: &IntMatrix) -> IntMatrix {
    &(&change.transpose() * gram) * change
}

/// Matrix of `h_{delta_j}(y) = y + (-1)^{m(m+1)/2} <y, delta_j> delta_j`.
///
/// Only row `j` differs from the identity: `H[j][i] = [i == j] + eps * <delta_i, delta_j>`.
pub fn picard_lefschetz(lattice: &ThimbleLattice, j: usize) -> Result<IntMatrix> {
    let nu = lattice.rank();
    let k = check_position(j, nu, nu)?;
    let eps = BigInt::from(pl_sign(lattice.parity()));
    let mut h = IntMatrix::identity(nu);
    for i in 0..nu {
        let v = &h[(k, i)] + &eps * lattice.pairing(i, k);
        h.set(k, i, v);
    }
    Ok(h)
}

/// `h_* = h_{delta_1} o h_{delta_2} o ... o h_{delta_nu}`.
pub fn monodromy(lattice: &ThimbleLattice) -> Result<IntMatrix> {
    validate_lattice(lattice).map_err(Error::InvalidLattice)?;
    let nu = lattice.rank();
    let mut acc = IntMatrix::identity(nu);
    for j in 1..=nu {
        acc = &acc * &picard_lefschetz(lattice, j)?;
    }
    Ok(acc)
}

/// Gram matrix after `alpha_j`, using only the elementary update rules for
/// the pairings of the new basis.
pub fn braid_alpha_closed_form(lattice: &ThimbleLattice, j: usize) -> Result<IntMatrix> {
    let nu = lattice.rank();
    let k = check_position(j, nu.saturating_sub(1), nu)?;
    let eps = BigInt::from(pl_sign(lattice.parity()));
    let t = BigInt::from(lattice.transpose_sign());
    let g = lattice.pairing(k + 1, k).clone();
    let p = |a: usize, b: usize| lattice.pairing(a, b).clone();

    // new pairing <delta'_a, delta'_b>
    let paired = |a: usize, b: usize| -> BigInt {
        let moved = |x: usize| x == k || x == k + 1;
        match (moved(a), moved(b)) {
            (false, false) => p(a, b),
            (false, true) if b == k => p(a, k + 1) + &eps * &g * p(a, k),
            (false, true) => p(a, k),
            (true, false) => {
                let r = if a == k {
                    p(b, k + 1) + &eps * &g * p(b, k)
                } else {
                    p(b, k)
                };
                &t * r
            }
            (true, true) if a == b => p(a, a),
            (true, true) if a == k => -p(k, k + 1),
            (true, true) => &t * -p(k, k + 1),
        }
    };
    let mut out = IntMatrix::zeros(nu, nu);
    for a in 0..nu {
        for b in 0..nu {
            out.set(b, a, paired(a, b));
        }
    }
    Ok(out)
}

/// Gram matrix after `alpha_j^{-1}` from its elementary update rules.
pub fn braid_alpha_inverse_closed_form(lattice: &ThimbleLattice, j: usize) -> Result<IntMatrix> {
    let nu = lattice.rank();
    let k = check_position(j, nu.saturating_sub(1), nu)?;
    let eps = BigInt::from(pl_sign(lattice.parity()));
    let t = BigInt::from(lattice.transpose_sign());
    let g = lattice.pairing(k + 1, k).clone();
    let p = |a: usize, b: usize| lattice.pairing(a, b).clone();

    let paired = |a: usize, b: usize| -> BigInt {
        let moved = |x: usize| x == k || x == k + 1;
        match (moved(a), moved(b)) {
            (false, false) => p(a, b),
            (false, true) if b == k => p(a, k + 1),
            (false, true) => p(a, k) + &eps * &g * p(a, k + 1),
            (true, false) => {
                let r = if a == k {
                    p(b, k + 1)
                } else {
                    p(b, k) + &eps * &g * p(b, k + 1)
                };
                &t * r
            }
            (true, true) if a == b => p(a, a),
            (true, true) if a == k => -p(k, k + 1),
            (true, true) => &t * -p(k, k + 1),
        }
    };
    let mut out = IntMatrix::zeros(nu, nu);
    for a in 0..nu {
        for b in 0..nu {
            out.set(b, a, paired(a, b));
        }
    }
    Ok(out)
}

fn alpha_change(lattice: &ThimbleLattice, k: usize, inverse: bool) -> BasisChange {
    let nu = lattice.rank();
    let eps = BigInt::from(pl_sign(lattice.parity()));
    let g = lattice.pairing(k + 1, k);
    let mut p = IntMatrix::identity(nu);
    p.set(k, k, 0);
    p.set(k + 1, k + 1, 0);
    if inverse {
        // delta''_k = delta_{k+1}, delta''_{k+1} = delta_k + eps g delta_{k+1}
        p.set(k + 1, k, 1);
        p.set(k, k + 1, 1);
        p.set(k + 1, k + 1, &eps * g);
    } else {
        // delta'_k = delta_{k+1} + eps g delta_k, delta'_{k+1} = delta_k
        p.set(k + 1, k, 1);
        p.set(k, k, &eps * g);
        p.set(k, k + 1, 1);
    }
    BasisChange(p)
}

fn apply_alpha(lattice: &ThimbleLattice, j: usize, inverse: bool) -> Result<(ThimbleLattice, BasisChange)> {
    validate_lattice(lattice).map_err(Error::InvalidLattice)?;
    let closed = if inverse {
        braid_alpha_inverse_closed_form(lattice, j)?
    } else {
        braid_alpha_closed_form(lattice, j)?
    };
    let change = alpha_change(lattice, j - 1, inverse);
    let by_congruence = congruence(lattice.gram(), change.matrix());
    assert_eq!(
        closed, by_congruence,
        "closed-form braid update disagrees with the congruence transform"
    );
    Ok((ThimbleLattice::new_unchecked(lattice.parity(), closed), change))
}

/// `alpha_j`: `delta'_j = h_{delta_j}(delta_{j+1})`, `delta'_{j+1} = delta_j`.
pub fn braid_alpha(lattice: &ThimbleLattice, j: usize) -> Result<(ThimbleLattice, BasisChange)> {
    apply_alpha(lattice, j, false)
}

/// Inverse of [`braid_alpha`]:
/// `delta''_j = delta_{j+1}`, `delta''_{j+1} = delta_j + eps <delta_{j+1}, delta_j> delta_{j+1}`.
pub fn braid_alpha_inverse(lattice: &ThimbleLattice, j: usize) -> Result<(ThimbleLattice, BasisChange)> {
    apply_alpha(lattice, j, true)
}

/// Reverses the orientation of `delta_j`.
pub fn orientation_flip(lattice: &ThimbleLattice, j: usize) -> Result<(ThimbleLattice, BasisChange)> {
    let nu = lattice.rank();
    let k = check_position(j, nu, nu)?;
    let mut gram = lattice.gram().clone();
    for i in 0..nu {
        if i != k {
            let r = -&gram[(k, i)];
            gram.set(k, i, r);
            let c = -&gram[(i, k)];
            gram.set(i, k, c);
        }
    }
    let mut p = IntMatrix::identity(nu);
    p.set(k, k, -1);
    Ok((ThimbleLattice::new_unchecked(lattice.parity(), gram), BasisChange(p)))
}

pub fn apply_move(lattice: &ThimbleLattice, m: BraidMove) -> Result<(ThimbleLattice, BasisChange)> {
    match m {
        BraidMove::Alpha(j) => braid_alpha(lattice, j),
        BraidMove::AlphaInverse(j) => braid_alpha_inverse(lattice, j),
        BraidMove::Flip(j) => orientation_flip(lattice, j),
    }
}

/// Applies the moves left to right, accumulating the basis change.
pub fn apply_braid_word(lattice: &ThimbleLattice, word: &BraidWord) -> Result<(ThimbleLattice, BasisChange)> {
    word.check_rank(lattice.rank())?;
    let mut current = lattice.clone();
    let mut change = BasisChange::identity(lattice.rank());
    for &m in word.moves() {
        let (next, step) = apply_move(&current, m)?;
        change = change.then(&step);
        current = next;
    }
    Ok((current, change))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int_matrix;

    fn a2() -> ThimbleLattice {
        ThimbleLattice::new(1, int_matrix![[2, -1], [-1, 2]]).unwrap()
    }

    #[test]
    fn pl_on_a2() {
        // h(delta_1) = -delta_1, h(delta_2) = delta_2 + delta_1
        assert_eq!(picard_lefschetz(&a2(), 1).unwrap(), int_matrix![[-1, 1], [0, 1]]);
        assert_eq!(picard_lefschetz(&a2(), 2).unwrap(), int_matrix![[1, 0], [1, -1]]);
        assert!(picard_lefschetz(&a2(), 3).is_err());
        assert!(picard_lefschetz(&a2(), 0).is_err());
    }

    #[test]
    fn pl_rank_one() {
        let l = ThimbleLattice::new(1, int_matrix![[2]]).unwrap();
        assert_eq!(picard_lefschetz(&l, 1).unwrap(), int_matrix![[-1]]);
        assert_eq!(monodromy(&l).unwrap(), int_matrix![[-1]]);
    }

    #[test]
    fn pl_fixes_thimble_for_even_parity() {
        let l = ThimbleLattice::new(2, int_matrix![[0, 3, -1], [-3, 0, 2], [1, -2, 0]]).unwrap();
        for j in 1..=3 {
            let h = picard_lefschetz(&l, j).unwrap();
            for r in 0..3 {
                let expected = if r == j - 1 { 1 } else { 0 };
                assert_eq!(h[(r, j - 1)], BigInt::from(expected));
            }
        }
    }

    #[test]
    fn monodromy_of_a2_has_order_three() {
        let h = monodromy(&a2()).unwrap();
        assert_eq!(h, int_matrix![[0, -1], [1, -1]]);
        assert!(h.pow(3).is_identity());
        assert_eq!(monodromy(&ThimbleLattice::empty(1)).unwrap(), IntMatrix::zeros(0, 0));
    }

    #[test]
    fn alpha_on_a2() {
        let (l, p) = braid_alpha(&a2(), 1).unwrap();
        assert_eq!(l.gram(), &int_matrix![[2, 1], [1, 2]]);
        // new basis (delta_1 + delta_2, delta_1)
        assert_eq!(p.matrix(), &int_matrix![[1, 1], [1, 0]]);
        let (back, q) = braid_alpha_inverse(&l, 1).unwrap();
        assert_eq!(back.gram(), a2().gram());
        assert!(p.then(&q).is_identity());
    }

    #[test]
    fn alpha_on_skew_pair() {
        let l = ThimbleLattice::new(2, int_matrix![[0, 1], [-1, 0]]).unwrap();
        let (l2, _) = braid_alpha(&l, 1).unwrap();
        assert_eq!(l2.gram(), &int_matrix![[0, -1], [1, 0]]);
        let (back, _) = braid_alpha_inverse(&l2, 1).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn flip_examples() {
        let (l, p) = orientation_flip(&a2(), 2).unwrap();
        assert_eq!(l.gram(), &int_matrix![[2, 1], [1, 2]]);
        assert_eq!(p.matrix(), &int_matrix![[1, 0], [0, -1]]);
        let (back, q) = orientation_flip(&l, 2).unwrap();
        assert_eq!(back, a2());
        assert!(p.then(&q).is_identity());
    }

    #[test]
    fn words() {
        let w: BraidWord = "a1 A1, f2  a3".parse().unwrap();
        assert_eq!(
            w.0,
            vec![
                BraidMove::Alpha(1),
                BraidMove::AlphaInverse(1),
                BraidMove::Flip(2),
                BraidMove::Alpha(3)
            ]
        );
        assert_eq!(w.to_string(), "a1 A1 f2 a3");
        assert!("a0".parse::<BraidWord>().is_err());
        assert!("b1".parse::<BraidWord>().is_err());
        assert!("a".parse::<BraidWord>().is_err());
        assert!("a+1".parse::<BraidWord>().is_err());
        assert!("".parse::<BraidWord>().unwrap().is_empty());
    }

    #[test]
    fn word_identities() {
        let l = a2();
        for text in ["", "a1 A1", "a1 f1 f1 A1"] {
            let w: BraidWord = text.parse().unwrap();
            let (l2, p) = apply_braid_word(&l, &w).unwrap();
            assert_eq!(l2, l, "word {text:?}");
            assert!(p.is_identity(), "word {text:?}");
        }
        let err = apply_braid_word(&l, &"a2".parse().unwrap()).unwrap_err();
        assert!(matches!(err, Error::MalformedWord(_)));
    }

    #[test]
    fn alpha_requires_valid_lattice() {
        let bad = ThimbleLattice::new_unchecked(1, int_matrix![[2, 1], [0, 2]]);
        assert!(matches!(braid_alpha(&bad, 1), Err(Error::InvalidLattice(_))));
    }
}
