//! Exact arithmetic for vanishing lattices of real isolated complete
//! intersection singularities.
//!
//! The crate works with distinguished bases of thimbles over the integers:
//! Picard-Lefschetz operators and braid moves ([`basis`]), the inverse
//! variation operator ([`variation`]), complex conjugation data
//! ([`conjugation`]) and the signature formulas for the index of a gradient
//! vector field ([`index`]). [`oracle`] holds independent numeric checks.
//!
//! ```
//! use vanlat::{int_matrix, monodromy, ThimbleLattice};
//!
//! let a2 = ThimbleLattice::new(1, int_matrix![[2, -1], [-1, 2]]).unwrap();
//! let h = monodromy(&a2).unwrap();
//! assert_eq!(h.finite_order(10), Some(3));
//! ```

// Index loops mirror the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod basis;
pub mod conjugation;
pub mod error;
pub mod index;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod variation;

pub use basis::{
    apply_braid_word, apply_move, braid_alpha, braid_alpha_inverse, congruence, monodromy, orientation_flip,
    picard_lefschetz, random_braid_word, BasisChange, BraidMove, BraidWord,
};
pub use conjugation::{
    block_diagonal_structure_check, blockwise_signature, build_sigma, derive_sigma_tilde, generate_consistent_instance,
    generate_from_rng, generate_with_morse, var_sigma_form, Block, ConjugationData, CriticalPoint, GeneratorConfig,
    MorseSpec, SigmaTilde,
};
pub use error::{Error, Result};
pub use index::{
    corollary_check, flip_top_sign, generate_icis_instance, index_eq2, index_eq2_unsigned_levels, instance_consistent,
    level_signature, morse_recursion_step, poincare_hopf_check, radial_indices, smoothable_index, telescoped_index,
    theorem2_blockwise, theorem2_value, theorem3_value, thimble_vanishing_form, vanishing_index, IcisInstance,
    LevelData, Telescope, VanishingForm,
};
pub use lattice::{
    exact_signature, milnor_number, pl_sign, random_lattice, self_intersection, sign_pow, validate_lattice,
    LatticeViolation, SignVector, Signature, ThimbleLattice,
};
pub use matrix::IntMatrix;
pub use variation::{
    check_monodromy_relation, check_s_relation, intersection_operator, var, var_inverse,
    var_inverse_as_operator_after_braid, Counterexample,
};
