//! The inverse variation operator of a distinguished basis.
//!
//! `Var^{-1}` maps thimbles to the dual lattice. Its matrix `M` is taken from
//! the basis `delta` to the dual basis `nabla`, so `M[j][i]` is the coefficient
//! of `nabla_j` in `Var^{-1}(delta_i)`:
//!
//! * `M[i][i] = (-1)^{m(m+1)/2}`
//! * `M[j][i] = -<delta_i, delta_j>` for `j < i`
//! * `M[j][i] = 0` for `j > i`
//!
//! An operator to the dual lattice transforms by congruence: if the columns of
//! `P` give a new distinguished basis, the new matrix is `P^T M P`.

use num_bigint::BigInt;

use crate::basis::{apply_braid_word, congruence, monodromy, BraidWord};
use crate::error::{Error, Result};
use crate::lattice::{pl_sign, sign_pow, validate_lattice, ThimbleLattice};
use crate::matrix::IntMatrix;

/// A failed identity, located at the first differing entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub row: usize,
    pub col: usize,
    pub expected: BigInt,
    pub found: BigInt,
}

/// First entry where `found` differs from `expected`.
pub fn compare(expected: &IntMatrix, found: &IntMatrix) -> std::result::Result<(), Counterexample> {
    assert_eq!((expected.rows(), expected.cols()), (found.rows(), found.cols()));
    for r in 0..expected.rows() {
        for c in 0..expected.cols() {
            if expected[(r, c)] != found[(r, c)] {
                return Err(Counterexample {
                    row: r,
                    col: c,
                    expected: expected[(r, c)].clone(),
                    found: found[(r, c)].clone(),
                });
            }
        }
    }
    Ok(())
}

pub fn var_inverse(lattice: &ThimbleLattice) -> Result<IntMatrix> {
    validate_lattice(lattice).map_err(Error::InvalidLattice)?;
    let nu = lattice.rank();
    let mut m = IntMatrix::zeros(nu, nu);
    let eps = pl_sign(lattice.parity());
    for i in 0..nu {
        m.set(i, i, eps);
        for j in 0..i {
            m.set(j, i, -lattice.pairing(i, j));
        }
    }
    Ok(m)
}

/// `Var`, the exact inverse of [`var_inverse`].
pub fn var(lattice: &ThimbleLattice) -> Result<IntMatrix> {
    var_inverse(lattice)?.unimodular_inverse()
}

/// Matrix of `S` with `(S x, y) = <x, y>`; under the storage convention it is the Gram matrix.
pub fn intersection_operator(lattice: &ThimbleLattice) -> Result<IntMatrix> {
    validate_lattice(lattice).map_err(Error::InvalidLattice)?;
    Ok(lattice.gram().clone())
}

/// Checks `S = -Var^{-1} + (-1)^m (Var^{-1})^T` entrywise.
pub fn check_s_relation(lattice: &ThimbleLattice) -> Result<std::result::Result<(), Counterexample>> {
    let m = var_inverse(lattice)?;
    let s = intersection_operator(lattice)?;
    let sign = BigInt::from(sign_pow(lattice.parity()));
    let rhs = &(-&m) + &m.transpose().scale(&sign);
    Ok(compare(&s, &rhs))
}

/// Checks `h_* = (-1)^m Var (Var^{-1})^T` against the product of Picard-Lefschetz factors.
pub fn check_monodromy_relation(lattice: &ThimbleLattice) -> Result<std::result::Result<(), Counterexample>> {
    let h = monodromy(lattice)?;
    let m = var_inverse(lattice)?;
    let v = m.unimodular_inverse()?;
    let sign = BigInt::from(sign_pow(lattice.parity()));
    let rhs = (&v * &m.transpose()).scale(&sign);
    Ok(compare(&h, &rhs))
}

/// Recomputes `Var^{-1}` after a braid word and compares it with the congruence
/// transform `P^T M P` of the original matrix.
pub fn var_inverse_as_operator_after_braid(
    lattice: &ThimbleLattice,
    word: &BraidWord,
) -> Result<std::result::Result<(), Counterexample>> {
    let m = var_inverse(lattice)?;
    let (moved, change) = apply_braid_word(lattice, word)?;
    let direct = var_inverse(&moved)?;
    let transported = congruence(&m, change.matrix());
    Ok(compare(&transported, &direct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int_matrix;

    fn a2() -> ThimbleLattice {
        ThimbleLattice::new(1, int_matrix![[2, -1], [-1, 2]]).unwrap()
    }

    #[test]
    fn var_inverse_examples() {
        assert_eq!(var_inverse(&a2()).unwrap(), int_matrix![[-1, 1], [0, -1]]);
        let odd = ThimbleLattice::new(1, int_matrix![[2]]).unwrap();
        assert_eq!(var_inverse(&odd).unwrap(), int_matrix![[-1]]);
        let even = ThimbleLattice::new(2, int_matrix![[0]]).unwrap();
        assert_eq!(var_inverse(&even).unwrap(), int_matrix![[-1]]);
    }

    #[test]
    fn var_examples() {
        assert_eq!(var(&a2()).unwrap(), int_matrix![[-1, -1], [0, -1]]);
        assert_eq!(
            var(&ThimbleLattice::new(1, int_matrix![[2]]).unwrap()).unwrap(),
            int_matrix![[-1]]
        );
        assert_eq!(var(&ThimbleLattice::empty(3)).unwrap(), IntMatrix::zeros(0, 0));
    }

    #[test]
    fn intersection_operator_is_gram() {
        assert_eq!(intersection_operator(&a2()).unwrap(), int_matrix![[2, -1], [-1, 2]]);
        let skew = ThimbleLattice::new(2, int_matrix![[0, 1], [-1, 0]]).unwrap();
        assert_eq!(intersection_operator(&skew).unwrap(), int_matrix![[0, 1], [-1, 0]]);
    }

    #[test]
    fn relations_on_small_cases() {
        for l in [
            a2(),
            ThimbleLattice::new(1, int_matrix![[2]]).unwrap(),
            ThimbleLattice::empty(1),
            ThimbleLattice::new(2, int_matrix![[0, 1], [-1, 0]]).unwrap(),
        ] {
            assert_eq!(check_s_relation(&l).unwrap(), Ok(()));
            assert_eq!(check_monodromy_relation(&l).unwrap(), Ok(()));
        }
    }

    #[test]
    fn monodromy_relation_on_a2_by_hand() {
        // (-1) * [[-1,-1],[0,-1]] * [[-1,0],[1,-1]]
        let rhs = (&int_matrix![[-1, -1], [0, -1]] * &int_matrix![[-1, 0], [1, -1]]).scale(&BigInt::from(-1));
        assert_eq!(rhs, monodromy(&a2()).unwrap());
        assert!(rhs.pow(3).is_identity());
    }

    #[test]
    fn braid_invariance_on_a2() {
        for w in ["", "a1", "A1", "a1 f2 a1", "f1 f2 A1 a1 a1"] {
            let word: BraidWord = w.parse().unwrap();
            assert_eq!(
                var_inverse_as_operator_after_braid(&a2(), &word).unwrap(),
                Ok(()),
                "word {w:?}"
            );
        }
    }

    #[test]
    fn broken_relation_is_located() {
        let found = int_matrix![[1, 2], [3, 4]];
        let expected = int_matrix![[1, 2], [3, 5]];
        let ce = compare(&expected, &found).unwrap_err();
        assert_eq!((ce.row, ce.col), (1, 1));
    }
}
