//! Worked examples for every public operation, checked through the public API.
//!
//! Values that need an independent check are recomputed here by plain matrix
//! products or by the sign/winding oracles.

use num_bigint::BigInt;
use num_rational::BigRational;
use vanlat::conjugation::sample_morse_spec;
use vanlat::oracle::{float_signature, index_1d, index_2d, Poly2};
use vanlat::*;

fn real(m: u32) -> CriticalPoint {
    CriticalPoint::Real { morse_index: m }
}

fn pair(a: i64) -> CriticalPoint {
    CriticalPoint::ConjugatePair {
        pairing: Some(a.into()),
    }
}

fn a2() -> ThimbleLattice {
    ThimbleLattice::new(1, int_matrix![[2, -1], [-1, 2]]).unwrap()
}

fn a1() -> ThimbleLattice {
    ThimbleLattice::new(1, int_matrix![[2]]).unwrap()
}

fn level(i: usize, lattice: ThimbleLattice, morse: Vec<CriticalPoint>, upper: &[(usize, usize, i64)]) -> LevelData {
    let upper: Vec<_> = upper.iter().map(|&(r, c, v)| (r, c, BigInt::from(v))).collect();
    let conj = build_sigma(MorseSpec(morse), lattice.parity(), &upper).unwrap();
    LevelData {
        i,
        lattice,
        conj,
        vanishing: None,
    }
}

fn single(n: i64, s: i64, l: LevelData) -> IcisInstance {
    IcisInstance::new(n, 0, SignVector::new(vec![s]).unwrap(), vec![l]).unwrap()
}

/// Hand product, independent of the library's `Mul`.
fn mul2(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for r in 0..2 {
        for k in 0..2 {
            for col in 0..2 {
                c[r][col] += a[r][k] * b[k][col];
            }
        }
    }
    c
}

fn as_matrix(a: [[i64; 2]; 2]) -> IntMatrix {
    IntMatrix::from_rows(a.iter().map(|r| r.to_vec()).collect()).unwrap()
}

// lattice_core

#[test]
fn self_intersection_values() {
    assert_eq!(self_intersection(2), 0);
    assert_eq!(self_intersection(1), 2);
    assert_eq!(self_intersection(3), -2);
}

#[test]
fn validate_lattice_examples() {
    assert!(validate_lattice(&a2()).is_ok());
    let skew = ThimbleLattice::new_unchecked(2, int_matrix![[0, 1], [-1, 0]]);
    assert!(validate_lattice(&skew).is_ok());
    let bad = ThimbleLattice::new_unchecked(1, int_matrix![[2, 1], [-1, 2]]);
    match validate_lattice(&bad) {
        Err(LatticeViolation::Symmetry { row, col }) => assert_eq!((row.min(col), row.max(col)), (0, 1)),
        other => panic!("unexpected verdict {other:?}"),
    }
    let ragged = ThimbleLattice::new_unchecked(1, IntMatrix::zeros(2, 3));
    assert!(matches!(
        validate_lattice(&ragged),
        Err(LatticeViolation::NotSquare { .. })
    ));
}

#[test]
fn exact_signature_examples() {
    assert_eq!(
        exact_signature(&int_matrix![[1, 0], [0, 1]]).unwrap(),
        Signature::new(2, 0, 0)
    );
    assert_eq!(
        exact_signature(&int_matrix![[0, 1], [1, 0]]).unwrap(),
        Signature::new(1, 1, 0)
    );
    for a in [-7, -1, 0, 3, 1000] {
        assert_eq!(
            exact_signature(&int_matrix![[a, 1], [1, 0]]).unwrap(),
            Signature::new(1, 1, 0)
        );
    }
    assert!(exact_signature(&int_matrix![[0, 1], [0, 0]]).is_err());
}

#[test]
fn det_and_inverse_examples() {
    assert_eq!(int_matrix![[-1, 1], [0, -1]].det(), BigInt::from(1));
    assert_eq!(
        int_matrix![[-1, 1], [0, -1]].unimodular_inverse().unwrap(),
        int_matrix![[-1, -1], [0, -1]]
    );
    assert_eq!(int_matrix![[2, -1], [-1, 2]].det(), BigInt::from(3));
    assert!(int_matrix![[2, -1], [-1, 2]].unimodular_inverse().is_err());
}

#[test]
fn large_entries_do_not_truncate() {
    let big: BigInt = "123456789012345678901234567890".parse().unwrap();
    let m = IntMatrix::from_rows(vec![
        vec![big.clone(), BigInt::from(1)],
        vec![BigInt::from(0), BigInt::from(1)],
    ])
    .unwrap();
    assert_eq!((&m * &m)[(0, 0)], &big * &big);
}

#[test]
fn milnor_number_examples() {
    assert_eq!(milnor_number(&[5]), 5);
    assert_eq!(milnor_number(&[3, 1]), 2);
    assert_eq!(milnor_number(&[4, 2, 1]), 3);
}

// basis_ops

#[test]
fn picard_lefschetz_examples() {
    // delta1 -> -delta1, delta2 -> delta2 + delta1, images in columns
    assert_eq!(picard_lefschetz(&a2(), 1).unwrap(), int_matrix![[-1, 1], [0, 1]]);
    let skew = ThimbleLattice::new(2, int_matrix![[0, 3], [-3, 0]]).unwrap();
    for j in 1..=2 {
        let h = picard_lefschetz(&skew, j).unwrap();
        for r in 0..2 {
            assert_eq!(h[(r, j - 1)], BigInt::from(i64::from(r == j - 1)));
        }
    }
    assert_eq!(picard_lefschetz(&a1(), 1).unwrap(), int_matrix![[-1]]);
    assert!(matches!(picard_lefschetz(&a2(), 3), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn monodromy_examples() {
    assert_eq!(monodromy(&ThimbleLattice::empty(1)).unwrap(), IntMatrix::zeros(0, 0));
    let h = monodromy(&a2()).unwrap();
    let hh: [[i64; 2]; 2] = [[0, -1], [1, -1]];
    assert_eq!(h, as_matrix(hh));
    assert_eq!(mul2(mul2(hh, hh), hh), [[1, 0], [0, 1]]);
    assert_eq!(monodromy(&a1()).unwrap(), int_matrix![[-1]]);
}

#[test]
fn braid_alpha_examples() {
    let (moved, change) = braid_alpha(&a2(), 1).unwrap();
    assert_eq!(moved.gram(), &int_matrix![[2, 1], [1, 2]]);
    // first new thimble is delta1 + delta2, second is delta1
    assert_eq!(change.matrix(), &int_matrix![[1, 1], [1, 0]]);
    let (back, undo) = braid_alpha_inverse(&moved, 1).unwrap();
    assert_eq!(back, a2());
    assert!(change.then(&undo).is_identity());

    let skew = ThimbleLattice::new(2, int_matrix![[0, 1], [-1, 0]]).unwrap();
    let (moved, _) = braid_alpha(&skew, 1).unwrap();
    assert_eq!(moved.gram(), &int_matrix![[0, -1], [1, 0]]);
    let (back, _) = braid_alpha_inverse(&moved, 1).unwrap();
    assert_eq!(back, skew);
    assert!(braid_alpha(&a2(), 2).is_err());
}

#[test]
fn orientation_flip_examples() {
    let (flipped, change) = orientation_flip(&a2(), 2).unwrap();
    assert_eq!(flipped.gram(), &int_matrix![[2, 1], [1, 2]]);
    assert_eq!(change.matrix(), &int_matrix![[1, 0], [0, -1]]);
    let (twice, _) = orientation_flip(&flipped, 2).unwrap();
    assert_eq!(twice, a2());
    let l = ThimbleLattice::new(3, int_matrix![[-2, 4, 1], [4, -2, 0], [1, 0, -2]]).unwrap();
    for j in 1..=3 {
        let (f, _) = orientation_flip(&l, j).unwrap();
        for d in 0..3 {
            assert_eq!(f.gram()[(d, d)], l.gram()[(d, d)]);
        }
    }
}

#[test]
fn braid_word_examples() {
    for w in ["", "a1 A1", "a1 f1 f1 A1"] {
        let word: BraidWord = w.parse().unwrap();
        let (l, change) = apply_braid_word(&a2(), &word).unwrap();
        assert_eq!(l, a2(), "word {w:?}");
        assert!(change.is_identity(), "word {w:?}");
    }
    assert!(matches!("a1 b2".parse::<BraidWord>(), Err(Error::MalformedWord(_))));
    assert!(apply_braid_word(&a2(), &"a2".parse().unwrap()).is_err());
}

// variation

#[test]
fn var_inverse_and_var_examples() {
    assert_eq!(var_inverse(&a2()).unwrap(), int_matrix![[-1, 1], [0, -1]]);
    assert_eq!(var_inverse(&a1()).unwrap(), int_matrix![[-1]]);
    assert_eq!(
        var_inverse(&ThimbleLattice::new(2, int_matrix![[0]]).unwrap()).unwrap(),
        int_matrix![[-1]]
    );
    assert_eq!(var(&a2()).unwrap(), int_matrix![[-1, -1], [0, -1]]);
    assert_eq!(var(&a1()).unwrap(), int_matrix![[-1]]);
    assert_eq!(var(&ThimbleLattice::empty(1)).unwrap(), IntMatrix::zeros(0, 0));
}

#[test]
fn intersection_operator_examples() {
    assert_eq!(intersection_operator(&a2()).unwrap(), int_matrix![[2, -1], [-1, 2]]);
    let skew = ThimbleLattice::new(2, int_matrix![[0, 1], [-1, 0]]).unwrap();
    assert_eq!(intersection_operator(&skew).unwrap(), int_matrix![[0, 1], [-1, 0]]);
    assert_eq!(intersection_operator(&a1()).unwrap(), int_matrix![[2]]);
}

#[test]
fn relation_examples() {
    // -M + (-1) M^T for A2, by hand
    let m = [[-1, 1], [0, -1]];
    let s = [
        [-m[0][0] - m[0][0], -m[0][1] - m[1][0]],
        [-m[1][0] - m[0][1], -m[1][1] - m[1][1]],
    ];
    assert_eq!(as_matrix(s), *a2().gram());
    for l in [a2(), a1(), ThimbleLattice::empty(1)] {
        assert_eq!(check_s_relation(&l).unwrap(), Ok(()));
        assert_eq!(check_monodromy_relation(&l).unwrap(), Ok(()));
    }
    // (-1) Var (Var^{-1})^T for A2, by hand
    let rhs = mul2([[-1, -1], [0, -1]], [[-1, 0], [1, -1]]).map(|r| r.map(|x| -x));
    assert_eq!(as_matrix(rhs), monodromy(&a2()).unwrap());
}

#[test]
fn var_inverse_after_braid_examples() {
    assert_eq!(
        var_inverse_as_operator_after_braid(&a2(), &BraidWord::default()).unwrap(),
        Ok(())
    );
    assert_eq!(
        var_inverse_as_operator_after_braid(&a2(), &"a1".parse().unwrap()).unwrap(),
        Ok(())
    );
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for parity in [1, 2, 3, 4] {
        let l = random_lattice(&mut rng, 5, 5, parity);
        let w = random_braid_word(&mut rng, 5, 12, 0.2);
        assert_eq!(var_inverse_as_operator_after_braid(&l, &w).unwrap(), Ok(()));
    }
}

// conjugation

#[test]
fn build_sigma_examples() {
    let c = build_sigma(MorseSpec(vec![real(0)]), 1, &[]).unwrap();
    assert_eq!(c.sigma(), &int_matrix![[1]]);
    let c = build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[(0, 1, 0.into())]).unwrap();
    assert_eq!(c.sigma(), &int_matrix![[1, 0], [0, -1]]);
    let c = build_sigma(MorseSpec(vec![pair(5)]), 1, &[]).unwrap();
    assert_eq!(c.sigma(), &int_matrix![[0, 1], [1, 0]]);
    // a nonzero corner between two points of equal sign breaks sigma^2 = 1
    assert!(build_sigma(MorseSpec(vec![real(0), real(0)]), 1, &[(0, 1, 1.into())]).is_err());
    // entries below the diagonal blocks are not free data
    assert!(build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[(1, 0, 1.into())]).is_err());
}

#[test]
fn sigma_tilde_examples() {
    let c = build_sigma(MorseSpec(vec![real(0)]), 1, &[]).unwrap();
    let t = derive_sigma_tilde(&c, &a1()).unwrap();
    assert_eq!(t.matrix, int_matrix![[-1]]);
    assert!(t.consistent());
    let empty = build_sigma(MorseSpec::default(), 1, &[]).unwrap();
    let t = derive_sigma_tilde(&empty, &ThimbleLattice::empty(1)).unwrap();
    assert!(t.matrix.rows() == 0 && t.consistent());
    // golden verdict: diag(1, -1) on A2 gives sigma~ = [[0, -1], [-1, 1]], not an involution
    let c = build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[]).unwrap();
    let t = derive_sigma_tilde(&c, &a2()).unwrap();
    assert_eq!(t.matrix, int_matrix![[0, -1], [-1, 1]]);
    assert!(!t.involution && !t.consistent());
    assert!(derive_sigma_tilde(&c, &a1()).is_err());
}

#[test]
fn var_sigma_form_examples() {
    let c = build_sigma(MorseSpec(vec![real(0)]), 1, &[]).unwrap();
    let f = var_sigma_form(&a1(), &c).unwrap();
    assert_eq!(f, int_matrix![[-1]]);
    assert_eq!(exact_signature(&f).unwrap().sgn(), -1);

    let c = build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[(0, 1, (-1).into())]).unwrap();
    let f = var_sigma_form(&a2(), &c).unwrap();
    assert_eq!(f, int_matrix![[-1, 0], [0, 1]]);
    assert_eq!(exact_signature(&f).unwrap().sgn(), 0);
    assert_eq!(block_diagonal_structure_check(&a2(), &c).unwrap(), Ok(()));

    // pair block at parity 1: <delta_2, delta_1> = a gives -[[a, 1], [1, 0]]
    for a in [-3, 0, 4] {
        let l = ThimbleLattice::new(1, int_matrix![[2, a], [a, 2]]).unwrap();
        let c = build_sigma(MorseSpec(vec![pair(a)]), 1, &[]).unwrap();
        let f = var_sigma_form(&l, &c).unwrap();
        assert_eq!(f, int_matrix![[-a, -1], [-1, 0]]);
        assert_eq!(exact_signature(&f).unwrap().sgn(), 0);
        assert_eq!(block_diagonal_structure_check(&l, &c).unwrap(), Ok(()));
    }

    let empty = build_sigma(MorseSpec::default(), 1, &[]).unwrap();
    assert_eq!(
        block_diagonal_structure_check(&ThimbleLattice::empty(1), &empty).unwrap(),
        Ok(())
    );
}

#[test]
fn corrupted_sigma_is_rejected() {
    // sigma = [[1, 1], [0, -1]] is an involution but not consistent with A2
    let c = build_sigma(MorseSpec(vec![real(0), real(1)]), 1, &[(0, 1, 1.into())]).unwrap();
    assert!(!derive_sigma_tilde(&c, &a2()).unwrap().consistent());
    assert!(var_sigma_form(&a2(), &c).is_err());
    let ce = block_diagonal_structure_check(&a2(), &c).unwrap().unwrap_err();
    assert_eq!((ce.row, ce.col), (0, 1));
    assert_eq!((ce.expected, ce.found), (BigInt::from(0), BigInt::from(-2)));
}

#[test]
fn generator_examples() {
    let a = generate_consistent_instance(99, 6, 3).unwrap();
    let b = generate_consistent_instance(99, 6, 3).unwrap();
    assert_eq!(a, b);
    for seed in 0..50 {
        let (l, c) = generate_consistent_instance(seed, 5, 1 + (seed % 4) as i64).unwrap();
        assert_eq!(block_diagonal_structure_check(&l, &c).unwrap(), Ok(()));
    }
    let reachable = (0..200).any(|seed| {
        let (l, c) = generate_consistent_instance(seed, 1, 1).unwrap();
        l == a1() && c.sigma() == &int_matrix![[1]]
    });
    assert!(reachable);
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let spec = sample_morse_spec(&mut rng, 4, 2, 0.5);
    assert_eq!(spec.slots(), 4);
}

// index

#[test]
fn theorem2_examples() {
    let min = level(0, a1(), vec![real(0)], &[]);
    assert_eq!(theorem2_value(&min, 1, 1).unwrap(), 1);
    assert_eq!(theorem2_value(&min, 1, 1).unwrap(), index_1d(&[0, 0, 1]).unwrap());
    let cubic = level(0, a2(), vec![real(0), real(1)], &[(0, 1, -1)]);
    assert_eq!(theorem2_value(&cubic, 1, 1).unwrap(), 0);
    // x^3 - 3x on [-2, 2]: indices +1 and -1
    let g: Vec<BigInt> = [0, -3, 0, 1].iter().map(|&c| c.into()).collect();
    let w = vanlat::oracle::index_1d_window(
        &g,
        &BigRational::from_integer((-2).into()),
        &BigRational::from_integer(2.into()),
    );
    assert_eq!(w.unwrap(), 0);
    let empty = level(0, ThimbleLattice::empty(1), vec![], &[]);
    assert_eq!(theorem2_value(&empty, 1, 1).unwrap(), 0);
}

#[test]
fn index_eq2_examples_against_oracles() {
    let one = BigRational::from_integer(1.into());
    let x2 = single(1, 1, level(0, a1(), vec![real(0)], &[]));
    assert_eq!(index_eq2(&x2).unwrap(), index_1d(&[0, 0, 1]).unwrap());
    assert_eq!(index_eq2(&x2).unwrap(), 1);
    let x3 = single(1, 1, level(0, a2(), vec![real(0), real(1)], &[(0, 1, -1)]));
    assert_eq!(index_eq2(&x3).unwrap(), index_1d(&[0, 0, 0, 1]).unwrap());
    assert_eq!(index_eq2(&x3).unwrap(), 0);
    let sq = single(
        2,
        1,
        level(0, ThimbleLattice::new(2, int_matrix![[0]]).unwrap(), vec![real(0)], &[]),
    );
    let g = "x^2 + y^2".parse::<Poly2>().unwrap().gradient();
    assert_eq!(index_eq2(&sq).unwrap(), index_2d(&g, &one, 0).unwrap());
    assert_eq!(index_eq2(&sq).unwrap(), 1);
}

#[test]
fn corollary_examples() {
    let plus = single(1, 1, level(0, a1(), vec![real(0)], &[]));
    let minus = single(1, -1, level(0, a1(), vec![real(1)], &[]));
    assert_eq!(corollary_check(std::slice::from_ref(&plus)).unwrap(), Ok(()));
    assert_eq!(corollary_check(&[plus.clone(), minus.clone()]).unwrap(), Ok(()));
    assert_eq!(-index_1d(&[0, 0, -1]).unwrap(), index_eq2(&minus).unwrap());
    let wrong = single(1, -1, level(0, a1(), vec![real(0)], &[]));
    assert!(corollary_check(&[plus, wrong]).unwrap().is_err());
}

#[test]
fn theorem3_examples() {
    let same = VanishingForm {
        form: int_matrix![[2, 1], [1, 2]],
        sigma_s: int_matrix![[1, 0], [0, 1]],
        sigma_s_tilde: int_matrix![[1, 0], [0, 1]],
    };
    assert_eq!(vanishing_index(&same, 3, 1).unwrap(), 0);
    let empty = VanishingForm {
        form: IntMatrix::zeros(0, 0),
        sigma_s: IntMatrix::zeros(0, 0),
        sigma_s_tilde: IntMatrix::zeros(0, 0),
    };
    assert_eq!(vanishing_index(&empty, 1, 1).unwrap(), 0);
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let inst = generate_icis_instance(&mut rng, 1, 1, 5).unwrap();
        let l0 = &inst.levels()[0];
        let s = inst.level_sign(0);
        assert_eq!(theorem3_value(l0, s).unwrap(), theorem2_value(l0, 1, s).unwrap());
        assert!(matches!(
            theorem3_value(&inst.levels()[1], 1),
            Err(Error::EvenParity { parity: 2 })
        ));
    }
}

#[test]
fn euler_identities() {
    assert_eq!(poincare_hopf_check(&[1, 1], 2), Ok(()));
    assert_eq!(poincare_hopf_check(&[], 0), Ok(()));
    assert!(poincare_hopf_check(&[1], 2).is_err());
    assert_eq!(smoothable_index(1, 1), 1);
    assert_eq!(smoothable_index(0, 1), 0);
    assert_eq!(smoothable_index(0, 0), 1);
    assert_eq!(radial_indices(0), (1, 1));
    assert_eq!(radial_indices(2), (1, -1));
    assert_eq!(radial_indices(1), (1, 0));
    assert_eq!(morse_recursion_step(1, 1, 1, 2), 2);
    assert_eq!(morse_recursion_step(1, 1, 1, 3), 0);
}

#[test]
fn smoothable_index_matches_signature_formula() {
    let x2 = single(1, 1, level(0, a1(), vec![real(0)], &[]));
    let x3 = single(1, 1, level(0, a2(), vec![real(0), real(1)], &[(0, 1, -1)]));
    for inst in [x2, x3] {
        let t = telescoped_index(&inst).unwrap();
        assert_eq!(t.chis, vec![1]);
        assert_eq!(smoothable_index(t.level_sums[0], 1), index_eq2(&inst).unwrap());
    }
}

// oracle

#[test]
fn oracle_examples() {
    assert_eq!(index_1d(&[0, 0, 1]).unwrap(), 1);
    assert_eq!(index_1d(&[0, 0, 0, 1]).unwrap(), 0);
    assert_eq!(index_1d(&[0, 0, -1]).unwrap(), -1);
    let one = BigRational::from_integer(1.into());
    let grad = |s: &str| s.parse::<Poly2>().unwrap().gradient();
    assert_eq!(index_2d(&grad("x^2 + y^2"), &one, 0).unwrap(), 1);
    assert_eq!(index_2d(&grad("x^2 - y^2"), &one, 0).unwrap(), -1);
    let z2 = ("x^2 - y^2".parse().unwrap(), "2xy".parse().unwrap());
    assert_eq!(index_2d(&z2, &one, 0).unwrap(), 2);
    assert_eq!(float_signature(&IntMatrix::identity(3)), Signature::new(3, 0, 0));
    assert_eq!(
        float_signature(&IntMatrix::diagonal(vec![5, -2, 0])),
        Signature::new(1, 1, 1)
    );
    assert_eq!(float_signature(&int_matrix![[7, 1], [1, 0]]), Signature::new(1, 1, 0));
}

#[test]
fn index_2d_is_radius_independent() {
    let grad = |s: &str| s.parse::<Poly2>().unwrap().gradient();
    for f in ["x^2 + y^2", "x^2 - y^2", "x^3 - 3*x*y^2", "x^4 + y^2"] {
        let g = grad(f);
        let big = index_2d(&g, &BigRational::new(1.into(), 2.into()), 0).unwrap();
        let small = index_2d(&g, &BigRational::new(1.into(), 50.into()), 0).unwrap();
        assert_eq!(big, small, "{f}");
    }
}
