//! Complex-conjugation data on a thimble lattice.
//!
//! A [`MorseSpec`] lists the critical points of a real morsification in the
//! order of the distinguished basis: a real point occupies one slot, a pair of
//! complex conjugate points two consecutive slots. With respect to these
//! blocks `sigma_s` is upper block-triangular, with diagonal entry `(-1)^m`
//! for a real point of Morse index `m` and diagonal block `[[0, 1], [1, 0]]`
//! for a conjugate pair. The companion `sigma_s~` is never given; it is
//! recovered from `h_* = sigma_s sigma_s~`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::monodromy;
use crate::error::{Error, Result};
use crate::lattice::{pl_sign, self_intersection, sign_pow, validate_lattice, ThimbleLattice};
use crate::matrix::IntMatrix;
use crate::variation::{var_inverse, Counterexample};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CriticalPoint {
    Real {
        morse_index: u32,
    },
    /// Two conjugate points; `pairing`, when known, is the intersection
    /// number of their cycles, up to sign.
    ConjugatePair {
        pairing: Option<BigInt>,
    },
}

impl CriticalPoint {
    pub fn slots(&self) -> usize {
        match self {
            Self::Real { .. } => 1,
            Self::ConjugatePair { .. } => 2,
        }
    }
}

impl fmt::Display for CriticalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Real { morse_index } => write!(f, "real({morse_index})"),
            Self::ConjugatePair { pairing: Some(a) } => write!(f, "pair({a})"),
            Self::ConjugatePair { pairing: None } => write!(f, "pair"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub start: usize,
    pub size: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MorseSpec(pub Vec<CriticalPoint>);

impl MorseSpec {
    pub fn points(&self) -> &[CriticalPoint] {
        &self.0
    }

    pub fn slots(&self) -> usize {
        self.0.iter().map(CriticalPoint::slots).sum()
    }

    pub fn blocks(&self) -> Vec<Block> {
        let mut start = 0;
        self.0
            .iter()
            .map(|p| {
                let b = Block { start, size: p.slots() };
                start += b.size;
                b
            })
            .collect()
    }

    /// Block number of each slot.
    pub fn block_of_slot(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(b, p)| std::iter::repeat_n(b, p.slots()))
            .collect()
    }

    /// Morse indices must lie in `0..=parity`.
    pub fn check(&self, parity: i64) -> Result<()> {
        for (k, p) in self.0.iter().enumerate() {
            if let CriticalPoint::Real { morse_index } = p {
                if i64::from(*morse_index) > parity || parity < 0 {
                    return Err(Error::BlockStructure {
                        row: k,
                        col: k,
                        reason: format!("Morse index {morse_index} outside 0..={parity}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// The same critical points seen by the negated function: real indices
    /// become `dim - m`, pairs stay pairs.
    pub fn negated(&self, dim: u32) -> Self {
        Self(
            self.0
                .iter()
                .map(|p| match p {
                    CriticalPoint::Real { morse_index } => CriticalPoint::Real {
                        morse_index: dim - morse_index,
                    },
                    pair => pair.clone(),
                })
                .collect(),
        )
    }

    /// The block-diagonal involution the Morse data prescribes.
    pub fn diagonal_blocks(&self) -> IntMatrix {
        let n = self.slots();
        let mut b = IntMatrix::zeros(n, n);
        for (blk, p) in self.blocks().into_iter().zip(&self.0) {
            match p {
                CriticalPoint::Real { morse_index } => b.set(blk.start, blk.start, sign_pow(i64::from(*morse_index))),
                CriticalPoint::ConjugatePair { .. } => {
                    b.set(blk.start, blk.start + 1, 1);
                    b.set(blk.start + 1, blk.start, 1);
                }
            }
        }
        b
    }
}

/// `sigma_s` together with the Morse data it is structured by. Data without
/// a Morse specification (for example after a braid move) carries only the
/// involution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjugationData {
    sigma: IntMatrix,
    morse: Option<MorseSpec>,
}

fn involution_defect(m: &IntMatrix) -> Option<(usize, usize)> {
    let sq = m * m;
    (0..sq.rows())
        .flat_map(|r| (0..sq.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| sq[(r, c)] != BigInt::from(i64::from(r == c)))
}

impl ConjugationData {
    /// Unstructured data: only the involution property is checked.
    pub fn unstructured(sigma: IntMatrix) -> Result<Self> {
        if !sigma.is_square() {
            return Err(Error::Dimension("sigma must be square".into()));
        }
        if let Some((row, col)) = involution_defect(&sigma) {
            return Err(Error::NotInvolution { row, col });
        }
        Ok(Self { sigma, morse: None })
    }

    /// Full matrix with Morse structure: diagonal blocks, block upper
    /// triangularity and the involution property are all checked.
    pub fn structured(morse: MorseSpec, parity: i64, sigma: IntMatrix) -> Result<Self> {
        morse.check(parity)?;
        let n = morse.slots();
        if sigma.rows() != n || sigma.cols() != n {
            return Err(Error::Dimension(format!(
                "sigma is {}x{}, Morse data has {n} slots",
                sigma.rows(),
                sigma.cols()
            )));
        }
        let diag = morse.diagonal_blocks();
        let block = morse.block_of_slot();
        for r in 0..n {
            for c in 0..n {
                let reason = if block[r] == block[c] && sigma[(r, c)] != diag[(r, c)] {
                    "diagonal block differs from the prescribed one"
                } else if block[r] > block[c] && !sigma[(r, c)].is_zero() {
                    "nonzero entry below the diagonal blocks"
                } else {
                    continue;
                };
                return Err(Error::BlockStructure {
                    row: r,
                    col: c,
                    reason: reason.into(),
                });
            }
        }
        if let Some((row, col)) = involution_defect(&sigma) {
            return Err(Error::NotInvolution { row, col });
        }
        Ok(Self {
            sigma,
            morse: Some(morse),
        })
    }

    pub fn sigma(&self) -> &IntMatrix {
        &self.sigma
    }

    pub fn morse(&self) -> Option<&MorseSpec> {
        self.morse.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.sigma.rows()
    }

    /// Entries strictly above the diagonal blocks, 0-based, skipping zeros.
    pub fn upper_entries(&self) -> Vec<(usize, usize, BigInt)> {
        let n = self.rank();
        let block = match &self.morse {
            Some(m) => m.block_of_slot(),
            None => (0..n).collect(),
        };
        let mut out = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if block[r] < block[c] && !self.sigma[(r, c)].is_zero() {
                    out.push((r, c, self.sigma[(r, c)].clone()));
                }
            }
        }
        out
    }
}

/// Assembles `sigma_s` from the Morse data and its strictly block-upper
/// entries (0-based `(row, col, value)`).
pub fn build_sigma(morse: MorseSpec, parity: i64, upper: &[(usize, usize, BigInt)]) -> Result<ConjugationData> {
    morse.check(parity)?;
    let mut sigma = morse.diagonal_blocks();
    let block = morse.block_of_slot();
    let n = sigma.rows();
    for (r, c, v) in upper {
        if *r >= n || *c >= n {
            return Err(Error::IndexOutOfRange {
                index: (*r).max(*c),
                rank: n,
            });
        }
        if block[*r] >= block[*c] {
            return Err(Error::BlockStructure {
                row: *r,
                col: *c,
                reason: "entry is not strictly above the diagonal blocks".into(),
            });
        }
        sigma.set(*r, *c, v.clone());
    }
    ConjugationData::structured(morse, parity, sigma)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaTilde {
    pub matrix: IntMatrix,
    pub involution: bool,
    /// `None` when the data carries no Morse blocks to test against.
    pub lower_block_triangular: Option<bool>,
}

impl SigmaTilde {
    pub fn consistent(&self) -> bool {
        self.involution && self.lower_block_triangular != Some(false)
    }
}

/// `sigma_s~ = sigma_s h_*`, from `h_* = sigma_s sigma_s~` and `sigma_s^2 = 1`.
pub fn derive_sigma_tilde(conj: &ConjugationData, lattice: &ThimbleLattice) -> Result<SigmaTilde> {
    if conj.rank() != lattice.rank() {
        return Err(Error::Dimension(format!(
            "sigma has rank {}, lattice has rank {}",
            conj.rank(),
            lattice.rank()
        )));
    }
    let h = monodromy(lattice)?;
    let matrix = conj.sigma() * &h;
    let involution = involution_defect(&matrix).is_none();
    let lower_block_triangular = conj.morse().map(|m| {
        let block = m.block_of_slot();
        let n = matrix.rows();
        (0..n).all(|r| (0..n).all(|c| block[r] >= block[c] || matrix[(r, c)].is_zero()))
    });
    Ok(SigmaTilde {
        matrix,
        involution,
        lower_block_triangular,
    })
}

/// The bilinear form `Var^{-1} sigma_s`, checked to be symmetric and non-degenerate.
pub fn var_sigma_form(lattice: &ThimbleLattice, conj: &ConjugationData) -> Result<IntMatrix> {
    let tilde = derive_sigma_tilde(conj, lattice)?;
    if !tilde.consistent() {
        return Err(Error::Inconsistent(format!(
            "sigma~ = sigma h_* is {}{}",
            if tilde.involution {
                "an involution"
            } else {
                "not an involution"
            },
            match tilde.lower_block_triangular {
                Some(false) => " and not lower block-triangular",
                _ => "",
            }
        )));
    }
    let form = &var_inverse(lattice)? * conj.sigma();
    if let Some((r, c)) = form.symmetry_defect() {
        return Err(Error::Inconsistent(format!(
            "Var^-1 sigma is not symmetric at ({r}, {c}) on data that passed the consistency test"
        )));
    }
    if form.det().is_zero() {
        return Err(Error::Inconsistent(
            "Var^-1 sigma is degenerate on data that passed the consistency test".into(),
        ));
    }
    Ok(form)
}

/// Value the pair block's corner entry must take: `a = -eps <delta_{k+1}, delta_k>`.
fn pair_corner(lattice: &ThimbleLattice, start: usize) -> BigInt {
    -BigInt::from(pl_sign(lattice.parity())) * lattice.pairing(start + 1, start)
}

/// Checks that `Var^{-1} sigma_s` is block diagonal with diagonal entry
/// `eps (-1)^m` per real point and block `eps [[a, 1], [1, 0]]` per pair.
pub fn block_diagonal_structure_check(
    lattice: &ThimbleLattice,
    conj: &ConjugationData,
) -> Result<std::result::Result<(), Counterexample>> {
    let morse = conj
        .morse()
        .ok_or_else(|| Error::Inconsistent("no Morse data to define blocks".into()))?;
    let form = &var_inverse(lattice)? * conj.sigma();
    let eps = pl_sign(lattice.parity());
    let n = form.rows();
    let mut expected = IntMatrix::zeros(n, n);
    for (blk, p) in morse.blocks().into_iter().zip(morse.points()) {
        let s = blk.start;
        match p {
            CriticalPoint::Real { morse_index } => {
                expected.set(s, s, eps * sign_pow(i64::from(*morse_index)));
            }
            CriticalPoint::ConjugatePair { pairing } => {
                let a = pair_corner(lattice, s);
                if let Some(given) = pairing {
                    if given.abs() != a.abs() {
                        return Ok(Err(Counterexample {
                            row: s,
                            col: s,
                            expected: BigInt::from(eps) * given,
                            found: form[(s, s)].clone(),
                        }));
                    }
                }
                expected.set(s, s, BigInt::from(eps) * a);
                expected.set(s, s + 1, eps);
                expected.set(s + 1, s, eps);
            }
        }
    }
    Ok(crate::variation::compare(&expected, &form))
}

/// Generator bounds.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorConfig {
    pub max_attempts: usize,
    /// Largest absolute entry allowed in `sigma_s`.
    pub sigma_bound: i64,
    /// Largest absolute entry allowed in the Gram matrix.
    pub gram_bound: i64,
    /// Probability that a new critical point is a conjugate pair.
    pub pair_probability: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            max_attempts: 10_000,
            sigma_bound: 6,
            gram_bound: 40,
            pair_probability: 0.3,
        }
    }
}

pub fn sample_morse_spec<R: Rng>(rng: &mut R, rank: usize, parity: i64, pair_probability: f64) -> MorseSpec {
    let top = parity.max(0) as u32;
    let mut points = Vec::new();
    let mut left = rank;
    while left > 0 {
        if left >= 2 && rng.gen_bool(pair_probability) {
            points.push(CriticalPoint::ConjugatePair { pairing: None });
            left -= 2;
        } else {
            points.push(CriticalPoint::Real {
                morse_index: rng.gen_range(0..=top),
            });
            left -= 1;
        }
    }
    MorseSpec(points)
}

fn rational_matrix(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect()
}

fn rational_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|r| {
            (0..m)
                .map(|c| (0..b.len()).fold(BigRational::zero(), |acc, k| acc + &a[r][k] * &b[k][c]))
                .collect()
        })
        .collect()
}

/// Inverse of an upper unitriangular rational matrix by back substitution.
fn unitriangular_inverse(q: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = q.len();
    let mut inv = vec![vec![BigRational::zero(); n]; n];
    for c in 0..n {
        inv[c][c] = BigRational::one();
        for r in (0..c).rev() {
            let s = (r + 1..=c).fold(BigRational::zero(), |acc, k| acc + &q[r][k] * &inv[k][c]);
            inv[r][c] = -s;
        }
    }
    inv
}

/// One generation attempt for fixed Morse data.
///
/// `sigma_s` is drawn as `Q B Q^{-1}` with `B` the prescribed diagonal blocks
/// and `Q` block-unipotent with half-integer entries; only integral results
/// are kept. The conjugate-pair corners `a` are drawn freely, the form
/// `D = Var^{-1} sigma_s` is assembled block-diagonally, and the Gram matrix is
/// read off from `Var^{-1} = D sigma_s`.
fn attempt<R: Rng>(
    rng: &mut R,
    morse: &MorseSpec,
    parity: i64,
    cfg: &GeneratorConfig,
) -> Option<(ThimbleLattice, ConjugationData)> {
    let n = morse.slots();
    let block = morse.block_of_slot();
    let b = morse.diagonal_blocks();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut q = rational_matrix(&IntMatrix::identity(n));
    for r in 0..n {
        for c in 0..n {
            if block[r] < block[c] && rng.gen_bool(0.5) {
                let k: i64 = rng.gen_range(-4..=4);
                q[r][c] = &half * BigRational::from_integer(BigInt::from(k));
            }
        }
    }
    let qinv = unitriangular_inverse(&q);
    let sigma_q = rational_mul(&rational_mul(&q, &rational_matrix(&b)), &qinv);
    let mut sigma = IntMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let x = &sigma_q[r][c];
            if !x.is_integer() || x.abs() > BigRational::from_integer(BigInt::from(cfg.sigma_bound)) {
                return None;
            }
            sigma.set(r, c, x.to_integer());
        }
    }

    let eps = pl_sign(parity);
    let mut d = IntMatrix::zeros(n, n);
    for (blk, p) in morse.blocks().into_iter().zip(morse.points()) {
        let s = blk.start;
        match p {
            CriticalPoint::Real { morse_index } => d.set(s, s, eps * sign_pow(i64::from(*morse_index))),
            CriticalPoint::ConjugatePair { .. } => {
                let a: i64 = rng.gen_range(-3..=3);
                d.set(s, s, eps * a);
                d.set(s, s + 1, eps);
                d.set(s + 1, s, eps);
            }
        }
    }
    let m = &d * &sigma;
    let t = if parity.rem_euclid(2) == 1 { 1 } else { -1 };
    let mut gram = IntMatrix::zeros(n, n);
    for i in 0..n {
        debug_assert_eq!(m[(i, i)], BigInt::from(eps));
        gram.set(i, i, self_intersection(parity));
        for j in 0..i {
            debug_assert!(m[(i, j)].is_zero());
            let v = -&m[(j, i)];
            gram.set(i, j, &v * t);
            gram.set(j, i, v);
        }
    }
    if gram.max_abs() > BigInt::from(cfg.gram_bound) {
        return None;
    }
    let lattice = ThimbleLattice::new_unchecked(parity, gram);
    validate_lattice(&lattice).ok()?;
    let upper: Vec<_> = ConjugationData::structured(morse.clone(), parity, sigma.clone())
        .ok()?
        .upper_entries();
    let conj = build_sigma(morse.clone(), parity, &upper).ok()?;
    derive_sigma_tilde(&conj, &lattice)
        .ok()
        .filter(SigmaTilde::consistent)
        .map(|_| (lattice, conj))
}

/// Searches for a consistent instance with the given Morse data.
pub fn generate_with_morse<R: Rng>(
    rng: &mut R,
    morse: &MorseSpec,
    parity: i64,
    cfg: &GeneratorConfig,
) -> Result<(ThimbleLattice, ConjugationData)> {
    morse.check(parity)?;
    (0..cfg.max_attempts)
        .find_map(|_| attempt(rng, morse, parity, cfg))
        .ok_or(Error::SearchExhausted {
            attempts: cfg.max_attempts,
        })
}

/// A consistent `(lattice, sigma_s)` pair of rank at most `rank_bound`,
/// deterministic in `seed`.
pub fn generate_consistent_instance(
    seed: u64,
    rank_bound: usize,
    parity: i64,
) -> Result<(ThimbleLattice, ConjugationData)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_from_rng(&mut rng, rank_bound, parity, &GeneratorConfig::default())
}

pub fn generate_from_rng<R: Rng>(
    rng: &mut R,
    rank_bound: usize,
    parity: i64,
    cfg: &GeneratorConfig,
) -> Result<(ThimbleLattice, ConjugationData)> {
    if parity < 1 {
        return Err(Error::Dimension(format!("parity must be positive, got {parity}")));
    }
    let rank = rng.gen_range(0..=rank_bound);
    let morse = sample_morse_spec(rng, rank, parity, cfg.pair_probability);
    generate_with_morse(rng, &morse, parity, cfg)
}

/// Signature of `Var^{-1} sigma_s` predicted block by block: `eps (-1)^m`
/// per real point, zero per conjugate pair.
pub fn blockwise_signature(morse: &MorseSpec, parity: i64) -> i64 {
    let eps = pl_sign(parity);
    morse
        .points()
        .iter()
        .map(|p| match p {
            CriticalPoint::Real { morse_index } => eps * sign_pow(i64::from(*morse_index)),
            CriticalPoint::ConjugatePair { .. } => 0,
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int_matrix;
    use crate::lattice::exact_signature;

    fn real(m: u32) -> CriticalPoint {
        CriticalPoint::Real { morse_index: m }
    }

    fn pair() -> CriticalPoint {
        CriticalPoint::ConjugatePair { pairing: None }
    }

    #[test]
    fn build_examples() {
        let c = build_sigma(MorseSpec(vec![real(0)]), 1, &[]).unwrap();
        assert_eq!(c.sigma(), &int_matrix![[1]]);
        let c = build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[(0, 1, 0.into())]).unwrap();
        assert_eq!(c.sigma(), &int_matrix![[1, 0], [0, -1]]);
        let c = build_sigma(MorseSpec(vec![pair()]), 1, &[]).unwrap();
        assert_eq!(c.sigma(), &int_matrix![[0, 1], [1, 0]]);
    }

    #[test]
    fn build_rejects_bad_data() {
        // [[1, 1], [0, 1]] squares to [[1, 2], [0, 1]]
        let err = build_sigma(MorseSpec(vec![real(0), real(0)]), 1, &[(0, 1, 1.into())]).unwrap_err();
        assert!(matches!(err, Error::NotInvolution { .. }));
        let err = build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[(1, 0, 1.into())]).unwrap_err();
        assert!(matches!(err, Error::BlockStructure { .. }));
        let err = build_sigma(MorseSpec(vec![pair()]), 1, &[(0, 1, 3.into())]).unwrap_err();
        assert!(matches!(err, Error::BlockStructure { .. }));
        let err = build_sigma(MorseSpec(vec![real(3)]), 2, &[]).unwrap_err();
        assert!(matches!(err, Error::BlockStructure { .. }));
    }

    #[test]
    fn sigma_tilde_of_a1_minimum() {
        let l = ThimbleLattice::new(1, int_matrix![[2]]).unwrap();
        let c = build_sigma(MorseSpec(vec![real(0)]), 1, &[]).unwrap();
        let t = derive_sigma_tilde(&c, &l).unwrap();
        assert_eq!(t.matrix, int_matrix![[-1]]);
        assert!(t.consistent());
        let empty = derive_sigma_tilde(
            &build_sigma(MorseSpec::default(), 1, &[]).unwrap(),
            &ThimbleLattice::empty(1),
        )
        .unwrap();
        assert!(empty.consistent());
        assert_eq!(empty.matrix, IntMatrix::zeros(0, 0));
    }

    #[test]
    fn a2_with_diagonal_sigma_is_inconsistent() {
        // diag(1, -1) * [[0, -1], [1, -1]] = [[0, -1], [-1, 1]]: upper block entry survives
        let l = ThimbleLattice::new(1, int_matrix![[2, -1], [-1, 2]]).unwrap();
        let c = build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[]).unwrap();
        let t = derive_sigma_tilde(&c, &l).unwrap();
        assert_eq!(t.matrix, int_matrix![[0, -1], [-1, 1]]);
        assert_eq!(t.lower_block_triangular, Some(false));
        assert!(!t.consistent());
        assert!(matches!(var_sigma_form(&l, &c), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn a2_with_matching_sigma() {
        let l = ThimbleLattice::new(1, int_matrix![[2, -1], [-1, 2]]).unwrap();
        let c = build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[(0, 1, (-1).into())]).unwrap();
        let t = derive_sigma_tilde(&c, &l).unwrap();
        assert_eq!(t.matrix, int_matrix![[-1, 0], [-1, 1]]);
        assert!(t.consistent());
        let form = var_sigma_form(&l, &c).unwrap();
        assert_eq!(form, int_matrix![[-1, 0], [0, 1]]);
        assert_eq!(exact_signature(&form).unwrap().sgn(), 0);
        assert_eq!(block_diagonal_structure_check(&l, &c).unwrap(), Ok(()));
    }

    #[test]
    fn rank_one_form() {
        let l = ThimbleLattice::new(1, int_matrix![[2]]).unwrap();
        let c = build_sigma(MorseSpec(vec![real(0)]), 1, &[]).unwrap();
        assert_eq!(var_sigma_form(&l, &c).unwrap(), int_matrix![[-1]]);
        assert_eq!(block_diagonal_structure_check(&l, &c).unwrap(), Ok(()));
    }

    #[test]
    fn pair_block_form() {
        for g in -3..=3 {
            let l = ThimbleLattice::new(1, int_matrix![[2, g], [g, 2]]).unwrap();
            let c = build_sigma(MorseSpec(vec![pair()]), 1, &[]).unwrap();
            let t = derive_sigma_tilde(&c, &l).unwrap();
            if !t.consistent() {
                continue;
            }
            let form = var_sigma_form(&l, &c).unwrap();
            // eps = -1 at parity 1, a = <delta_2, delta_1> = g
            assert_eq!(form, int_matrix![[-g, -1], [-1, 0]], "g = {g}");
            assert_eq!(exact_signature(&form).unwrap().sgn(), 0);
            assert_eq!(block_diagonal_structure_check(&l, &c).unwrap(), Ok(()));
        }
    }

    #[test]
    fn corrupted_sigma_is_located() {
        let l = ThimbleLattice::new(1, int_matrix![[2, -1], [-1, 2]]).unwrap();
        let c = build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[(0, 1, 1.into())]).unwrap();
        let ce = block_diagonal_structure_check(&l, &c).unwrap().unwrap_err();
        assert_eq!((ce.row, ce.col), (0, 1));
    }

    #[test]
    fn generator_is_deterministic() {
        for seed in 0..20 {
            let a = generate_consistent_instance(seed, 6, 1 + (seed as i64 % 4)).unwrap();
            let b = generate_consistent_instance(seed, 6, 1 + (seed as i64 % 4)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn generated_instances_pass_structure_check() {
        for seed in 0..200 {
            let parity = 1 + (seed as i64 % 5);
            let (l, c) = generate_consistent_instance(seed, 8, parity).unwrap();
            assert_eq!(block_diagonal_structure_check(&l, &c).unwrap(), Ok(()), "seed {seed}");
            let form = var_sigma_form(&l, &c).unwrap();
            let sig = exact_signature(&form).unwrap();
            assert_eq!(sig.n_zero, 0);
            assert_eq!(sig.sgn(), blockwise_signature(c.morse().unwrap(), parity));
        }
    }

    #[test]
    fn a1_minimum_is_reachable() {
        let target = (
            ThimbleLattice::new(1, int_matrix![[2]]).unwrap(),
            build_sigma(MorseSpec(vec![real(0)]), 1, &[]).unwrap(),
        );
        assert!((0..200).any(|seed| generate_consistent_instance(seed, 1, 1).unwrap() == target));
    }

    #[test]
    fn negated_spec() {
        let m = MorseSpec(vec![real(0), pair(), real(2)]);
        assert_eq!(m.negated(3), MorseSpec(vec![real(3), pair(), real(1)]));
        assert_eq!(m.slots(), 4);
        assert_eq!(m.block_of_slot(), vec![0, 1, 1, 2]);
    }
}
