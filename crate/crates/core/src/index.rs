//! Gradient indices from thimble data, and Euler-characteristic bookkeeping.
//!
//! An [`IcisInstance`] carries, for every level `i = 0, ..., p`, a thimble
//! lattice of parity `n + i` with conjugation data for the sign vector `s`.
//! Level `i` describes the real morsification of `f_{p-i+1}` and uses the sign
//! `s_{p-i+1}`; its Morse data are those of `s_{p-i+1} f_{p-i+1}`.
//!
//! # Sign of the higher levels
//!
//! The index is assembled as
//!
//! ```text
//! ind_0 grad g = s_{p+1}^n (-1)^{n(n+1)/2} sgn(Var_0^{-1} sigma_0)
//!              + sum_{i=1}^{p} (-1)^{n+i} (-1)^{(n+i)(n+i+1)/2} sgn(Var_i^{-1} sigma_i)
//! ```
//!
//! The factor `(-1)^{n+i}` on the higher levels is what the Euler
//! characteristic chain produces once each level sum is written through the
//! per-level signature formula: `(-s)^{n+i} * s^{n+i} = (-1)^{n+i}`. Without it
//! the value changes with `s` on the quadric cone
//! `x1^2 + x2^2 - x3^2 = 0`, `g = x3` (index 1); see the shipped instances
//! and [`index_eq2_unsigned_levels`], which keeps the variant with bare
//! higher summands.

use std::fmt;

use rand::Rng;

use crate::conjugation::{
    derive_sigma_tilde, generate_from_rng, generate_with_morse, var_sigma_form, ConjugationData, CriticalPoint,
    GeneratorConfig,
};
use crate::error::{Error, Result};
use crate::lattice::{exact_signature, pl_sign, sign_pow, SignVector, Signature, ThimbleLattice};
use crate::matrix::IntMatrix;

/// Conjugation data on a space of vanishing cycles: the form `F` with
/// `F[r][c] = <e_c, e_r>` and the actions for `s` and `s~`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VanishingForm {
    pub form: IntMatrix,
    pub sigma_s: IntMatrix,
    pub sigma_s_tilde: IntMatrix,
}

impl VanishingForm {
    /// Matrix of `Sigma(x, y) = <sigma x, y>`, i.e. `F sigma`.
    pub fn quadratic_form(&self, sigma: &IntMatrix) -> IntMatrix {
        &self.form * sigma
    }

    /// The same data in the basis given by the columns of a unimodular `u`.
    pub fn change_basis(&self, u: &IntMatrix) -> Result<Self> {
        let uinv = u.unimodular_inverse()?;
        let conj = |m: &IntMatrix| &(&uinv * m) * u;
        Ok(Self {
            form: &(&u.transpose() * &self.form) * u,
            sigma_s: conj(&self.sigma_s),
            sigma_s_tilde: conj(&self.sigma_s_tilde),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelData {
    pub i: usize,
    pub lattice: ThimbleLattice,
    pub conj: ConjugationData,
    pub vanishing: Option<VanishingForm>,
}

impl LevelData {
    pub fn parity(&self) -> i64 {
        self.lattice.parity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IcisInstance {
    n: i64,
    p: usize,
    signs: SignVector,
    levels: Vec<LevelData>,
}

impl IcisInstance {
    pub fn new(n: i64, p: usize, signs: SignVector, levels: Vec<LevelData>) -> Result<Self> {
        if signs.len() != p + 1 {
            return Err(Error::Dimension(format!("{} signs for p = {p}", signs.len())));
        }
        if levels.len() != p + 1 {
            return Err(Error::Dimension(format!("{} levels for p = {p}", levels.len())));
        }
        for (k, level) in levels.iter().enumerate() {
            if level.i != k {
                return Err(Error::Dimension(format!("level {k} is labelled i = {}", level.i)));
            }
            if level.parity() != n + k as i64 {
                return Err(Error::Dimension(format!(
                    "level {k} has parity {}, expected n + i = {}",
                    level.parity(),
                    n + k as i64
                )));
            }
            if level.conj.rank() != level.lattice.rank() {
                return Err(Error::Dimension(format!(
                    "level {k}: sigma has rank {}, lattice has rank {}",
                    level.conj.rank(),
                    level.lattice.rank()
                )));
            }
        }
        Ok(Self { n, p, signs, levels })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn signs(&self) -> &SignVector {
        &self.signs
    }

    pub fn levels(&self) -> &[LevelData] {
        &self.levels
    }

    pub fn into_levels(self) -> Vec<LevelData> {
        self.levels
    }

    /// `s_{p-i+1}`, the sign attached to level `i`.
    pub fn level_sign(&self, i: usize) -> i64 {
        self.signs.s(self.p - i + 1)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.lattice.rank()).collect()
    }
}

/// Inertia of `Var^{-1} sigma_s` on one level.
pub fn level_signature(level: &LevelData) -> Result<Signature> {
    exact_signature(&var_sigma_form(&level.lattice, &level.conj)?)
}

/// Sum of the indices of the gradient of the level's morsification:
/// `s^{n+i} (-1)^{(n+i)(n+i+1)/2} sgn(Var^{-1} sigma_s)`.
pub fn theorem2_value(level: &LevelData, n: i64, s_entry: i64) -> Result<i64> {
    let m = n + level.i as i64;
    if m != level.parity() {
        return Err(Error::Dimension(format!(
            "level {} has parity {}, expected {m}",
            level.i,
            level.parity()
        )));
    }
    let sig = level_signature(level)?;
    Ok(s_entry.pow((m.rem_euclid(2)) as u32) * pl_sign(m) * sig.sgn())
}

/// The same sum read off the Morse data: `s^{n+i} sum (-1)^m` over real points.
pub fn theorem2_blockwise(level: &LevelData, s_entry: i64) -> Option<i64> {
    let morse = level.conj.morse()?;
    let total: i64 = morse
        .points()
        .iter()
        .map(|p| match p {
            CriticalPoint::Real { morse_index } => sign_pow(i64::from(*morse_index)),
            CriticalPoint::ConjugatePair { .. } => 0,
        })
        .sum();
    Some(s_entry.pow((level.parity().rem_euclid(2)) as u32) * total)
}

fn level_terms(inst: &IcisInstance, signed_levels: bool) -> Result<i64> {
    let n = inst.n();
    let first = theorem2_value(&inst.levels()[0], n, inst.level_sign(0))?;
    let mut total = first;
    for level in &inst.levels()[1..] {
        let m = level.parity();
        let sig = level_signature(level)?;
        let factor = if signed_levels {
            sign_pow(m) * pl_sign(m)
        } else {
            pl_sign(m)
        };
        total += factor * sig.sgn();
    }
    Ok(total)
}

/// Index of the gradient vector field at the origin from the level signatures.
pub fn index_eq2(inst: &IcisInstance) -> Result<i64> {
    level_terms(inst, true)
}

/// Variant with bare higher summands `(-1)^{(n+i)(n+i+1)/2} sgn`, without the
/// `(-1)^{n+i}` factor. Agrees with [`index_eq2`] whenever every higher level
/// has even parity or zero signature.
pub fn index_eq2_unsigned_levels(inst: &IcisInstance) -> Result<i64> {
    level_terms(inst, false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub variant: usize,
    pub expected: i64,
    pub found: i64,
}

/// All variants must give the same index.
pub fn corollary_check(variants: &[IcisInstance]) -> Result<std::result::Result<(), Discrepancy>> {
    let values = variants.iter().map(index_eq2).collect::<Result<Vec<_>>>()?;
    let Some(&first) = values.first() else {
        return Ok(Ok(()));
    };
    Ok(match values.iter().position(|&v| v != first) {
        Some(variant) => Err(Discrepancy {
            variant,
            expected: first,
            found: values[variant],
        }),
        None => Ok(()),
    })
}

/// Vanishing-cycle data induced by the thimble lattice itself: the pullback
/// form, `sigma_s`, and `sigma_s~ = sigma_s h_*`.
pub fn thimble_vanishing_form(level: &LevelData) -> Result<VanishingForm> {
    let tilde = derive_sigma_tilde(&level.conj, &level.lattice)?;
    Ok(VanishingForm {
        form: level.lattice.gram().clone(),
        sigma_s: level.conj.sigma().clone(),
        sigma_s_tilde: tilde.matrix,
    })
}

/// Index sum of the level's morsification from vanishing-cycle forms, odd `n + i` only:
/// `s (-1)^{(n+i+1)/2} (sgn Sigma_{s~} - sgn Sigma_s) / 2`.
///
/// For even `n + i` the sum is not an invariant of the vanishing cycles. The
/// quadric `x1^2 + x2^2 - x3^2` cut by `x3` (n = 2, p = 1) shows this at the
/// bottom level: the real critical points of `x3` on the nearby fibres are
/// none for one sign of the perturbation and two for the other, while the
/// vanishing-cycle data do not see the change. The call is refused:
///
/// ```
/// use vanlat::{int_matrix, build_sigma, theorem3_value, CriticalPoint, Error, LevelData, MorseSpec, ThimbleLattice, VanishingForm};
///
/// let lattice = ThimbleLattice::new(2, int_matrix![[0, 0], [0, 0]]).unwrap();
/// let conj = build_sigma(MorseSpec(vec![CriticalPoint::ConjugatePair { pairing: None }]), 2, &[]).unwrap();
/// let vanishing = VanishingForm { form: int_matrix![[0]], sigma_s: int_matrix![[1]], sigma_s_tilde: int_matrix![[1]] };
/// let level = LevelData { i: 0, lattice, conj, vanishing: Some(vanishing) };
/// assert!(matches!(theorem3_value(&level, 1), Err(Error::EvenParity { parity: 2 })));
/// ```
pub fn theorem3_value(level: &LevelData, s_entry: i64) -> Result<i64> {
    let m = level.parity();
    if m.rem_euclid(2) == 0 {
        return Err(Error::EvenParity { parity: m });
    }
    let data = level
        .vanishing
        .as_ref()
        .ok_or_else(|| Error::Inconsistent(format!("level {} has no vanishing-cycle data", level.i)))?;
    vanishing_index(data, m, s_entry)
}

/// The Theorem-3-style expression for explicit vanishing-cycle data.
pub fn vanishing_index(data: &VanishingForm, parity: i64, s_entry: i64) -> Result<i64> {
    let sig_s = exact_signature(&data.quadratic_form(&data.sigma_s))?;
    let sig_t = exact_signature(&data.quadratic_form(&data.sigma_s_tilde))?;
    let diff = sig_t.sgn() - sig_s.sgn();
    if diff % 2 != 0 {
        return Err(Error::NonIntegral(format!(
            "sgn Sigma_s~ - sgn Sigma_s = {} - {} is odd",
            sig_t.sgn(),
            sig_s.sgn()
        )));
    }
    Ok(s_entry * sign_pow((parity + 1) / 2) * diff / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub sum: i64,
    pub chi: i64,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "index sum {} differs from Euler characteristic {}",
            self.sum, self.chi
        )
    }
}

/// Poincare-Hopf: the indices of a vector field sum to the Euler characteristic.
pub fn poincare_hopf_check(indices: &[i64], chi: i64) -> std::result::Result<(), Mismatch> {
    let sum = indices.iter().sum();
    if sum == chi {
        Ok(())
    } else {
        Err(Mismatch { sum, chi })
    }
}

/// Index at a smoothable point from a smoothing `V~`: `sum - chi(V~) + 1`.
pub fn smoothable_index(sum_smoothing_indices: i64, chi_smoothing: i64) -> i64 {
    sum_smoothing_indices - chi_smoothing + 1
}

/// Indices of the radial and anti-radial fields at a cone point with link
/// Euler characteristic `chi_link`.
pub fn radial_indices(chi_link: i64) -> (i64, i64) {
    (1, 1 - chi_link)
}

/// One Morse-theory step: `chi_prev + (-s)^exponent * sum_ind`.
pub fn morse_recursion_step(chi_prev: i64, sum_ind: i64, s: i64, exponent: i64) -> i64 {
    let factor = if exponent.rem_euclid(2) == 0 { 1 } else { -s };
    chi_prev + factor * sum_ind
}

/// The Euler-characteristic chain from the ball down to `V'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Telescope {
    /// Index sums of the morsifications, by level `i = 0..=p`.
    pub level_sums: Vec<i64>,
    /// `chi(V^{(k)} real)` for `k = 1..=p+1`; the last entry is the ball.
    pub chis: Vec<i64>,
    pub index: i64,
}

/// Evaluates the index through level sums, Morse steps and the smoothing
/// formula instead of the closed signature sum.
pub fn telescoped_index(inst: &IcisInstance) -> Result<Telescope> {
    let n = inst.n();
    let p = inst.p();
    let level_sums = inst
        .levels()
        .iter()
        .map(|l| theorem2_value(l, n, inst.level_sign(l.i)))
        .collect::<Result<Vec<_>>>()?;
    // chis[k - 1] = chi(V^{(k)}); the ball V^{(p+1)} is contractible
    let mut chis = vec![0; p + 1];
    chis[p] = 1;
    for i in (1..=p).rev() {
        let s = inst.level_sign(i);
        chis[i - 1] = morse_recursion_step(chis[i], -level_sums[i], s, n + i as i64);
    }
    for i in 1..=p {
        let up = morse_recursion_step(chis[i - 1], level_sums[i], inst.level_sign(i), n + i as i64);
        if up != chis[i] {
            return Err(Error::Inconsistent(format!("Euler chain does not close at level {i}")));
        }
    }
    let index = smoothable_index(level_sums[0], chis[0]);
    Ok(Telescope {
        level_sums,
        chis,
        index,
    })
}

/// Random consistent multi-level instance. Odd-parity levels carry
/// vanishing-cycle data derived from the thimbles in a randomly changed basis.
pub fn generate_icis_instance<R: Rng>(rng: &mut R, n: i64, p: usize, rank_bound: usize) -> Result<IcisInstance> {
    let cfg = GeneratorConfig::default();
    let signs = SignVector::new((0..=p).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect())?;
    let mut levels = Vec::with_capacity(p + 1);
    for i in 0..=p {
        let (lattice, conj) = generate_from_rng(rng, rank_bound, n + i as i64, &cfg)?;
        levels.push(with_vanishing(
            rng,
            LevelData {
                i,
                lattice,
                conj,
                vanishing: None,
            },
        )?);
    }
    IcisInstance::new(n, p, signs, levels)
}

fn with_vanishing<R: Rng>(rng: &mut R, mut level: LevelData) -> Result<LevelData> {
    if level.parity().rem_euclid(2) == 1 {
        let u = random_unimodular(rng, level.lattice.rank());
        level.vanishing = Some(thimble_vanishing_form(&level)?.change_basis(&u)?);
    }
    Ok(level)
}

/// Product of a random unit lower and a random unit upper triangular matrix.
fn random_unimodular<R: Rng>(rng: &mut R, nu: usize) -> IntMatrix {
    let mut lower = IntMatrix::identity(nu);
    let mut upper = IntMatrix::identity(nu);
    for r in 0..nu {
        for c in 0..r {
            lower.set(r, c, rng.gen_range(-1..=1));
            upper.set(c, r, rng.gen_range(-1..=1));
        }
    }
    &lower * &upper
}

/// Variant with `s_{p+1}` flipped: level 0 is regenerated from the negated
/// Morse data, every other level is kept.
pub fn flip_top_sign<R: Rng>(rng: &mut R, inst: &IcisInstance) -> Result<IcisInstance> {
    let n = inst.n();
    let level0 = &inst.levels()[0];
    let morse = level0
        .conj
        .morse()
        .ok_or_else(|| Error::Inconsistent("level 0 has no Morse data".into()))?
        .negated(n as u32);
    let (lattice, conj) = generate_with_morse(rng, &morse, n, &GeneratorConfig::default())?;
    let mut levels = inst.levels().to_vec();
    levels[0] = with_vanishing(
        rng,
        LevelData {
            i: 0,
            lattice,
            conj,
            vanishing: None,
        },
    )?;
    IcisInstance::new(n, inst.p(), inst.signs().flipped(inst.p() + 1), levels)
}

/// Whether every level is consistent: `sigma~` test passes and the form is
/// symmetric and non-degenerate.
pub fn instance_consistent(inst: &IcisInstance) -> Result<()> {
    for level in inst.levels() {
        var_sigma_form(&level.lattice, &level.conj)
            .map_err(|e| Error::Inconsistent(format!("level {}: {e}", level.i)))?;
    }
    Ok(())
}
