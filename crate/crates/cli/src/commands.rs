//! Subcommand bodies. Each returns its output and exit status instead of
//! printing, so the same code drives the binary and the tests.

use std::fmt::Write as _;

use num_bigint::BigInt;
use vanlat::{
    apply_braid_word, corollary_check, derive_sigma_tilde, index_eq2, level_signature, monodromy, theorem2_value,
    theorem3_value, var_inverse, var_sigma_form, BraidWord, ConjugationData, Error, IcisInstance, IntMatrix, LevelData,
};

use crate::format::{describe, parse, serialize, serialize_with_header, ErrorKind, Expected, InstanceFile, ParseError};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest exponent tried when looking for the order of the monodromy.
pub const ORDER_BOUND: u32 = 120;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self {
            stdout: String::new(),
            stderr,
            code,
        }
    }
}

impl From<ParseError> for Outcome {
    fn from(e: ParseError) -> Self {
        let code = match e.kind {
            ErrorKind::Format => EXIT_USAGE,
            ErrorKind::Violation => EXIT_VIOLATION,
        };
        Outcome::fail(code, format!("error: {e}\n"))
    }
}

fn load(text: &str) -> Result<InstanceFile, Outcome> {
    parse(text).map_err(Outcome::from)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum What {
    VarInverse,
    Monodromy,
    Signature,
    Index,
    Theorem2,
    Theorem3,
}

impl std::str::FromStr for What {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "var-inverse" => Self::VarInverse,
            "monodromy" => Self::Monodromy,
            "signature" => Self::Signature,
            "index" => Self::Index,
            "theorem2" => Self::Theorem2,
            "theorem3" => Self::Theorem3,
            other => return Err(format!("unknown quantity {other:?}")),
        })
    }
}

/// First place where `sigma~` fails to be a lower block-triangular involution.
fn sigma_tilde_defect(level: &LevelData) -> Result<Option<String>, Error> {
    let tilde = derive_sigma_tilde(&level.conj, &level.lattice)?;
    if !tilde.involution {
        let sq = &tilde.matrix * &tilde.matrix;
        let n = sq.rows();
        if let Some((r, c)) = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .find(|&(r, c)| sq[(r, c)] != BigInt::from(i64::from(r == c)))
        {
            return Ok(Some(format!(
                "sigma~ = sigma h is not an involution: (sigma~)^2 has {} at ({}, {})",
                sq[(r, c)],
                r + 1,
                c + 1
            )));
        }
    }
    if tilde.lower_block_triangular == Some(false) {
        let block = level.conj.morse().map(|m| m.block_of_slot()).unwrap_or_default();
        let n = tilde.matrix.rows();
        if let Some((r, c)) = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .find(|&(r, c)| block[r] < block[c] && tilde.matrix[(r, c)] != BigInt::from(0))
        {
            return Ok(Some(format!(
                "sigma~ = sigma h has {} at ({}, {}), above the diagonal blocks",
                tilde.matrix[(r, c)],
                r + 1,
                c + 1
            )));
        }
    }
    Ok(None)
}

pub fn validate(text: &str) -> Outcome {
    let file = match load(text) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let mut out = String::new();
    let mut failures = 0;
    for l in file.instance.levels() {
        let _ = writeln!(
            out,
            "level {}: lattice ok (rank {}, parity {})",
            l.i,
            l.lattice.rank(),
            l.parity()
        );
        let _ = writeln!(out, "level {}: sigma involution ok", l.i);
        match sigma_tilde_defect(l) {
            Ok(None) => {
                let _ = writeln!(out, "level {}: sigma~ = sigma h consistent", l.i);
                match var_sigma_form(&l.lattice, &l.conj) {
                    Ok(_) => {
                        let _ = writeln!(out, "level {}: Var^-1 sigma symmetric and non-degenerate", l.i);
                    }
                    Err(e) => {
                        failures += 1;
                        let _ = writeln!(out, "level {}: FAIL {}", l.i, describe(&e));
                    }
                }
            }
            Ok(Some(msg)) => {
                failures += 1;
                let _ = writeln!(out, "level {}: FAIL {msg}", l.i);
            }
            Err(e) => {
                failures += 1;
                let _ = writeln!(out, "level {}: FAIL {}", l.i, describe(&e));
            }
        }
    }
    if failures == 0 {
        if let Some(Expected { index: Some(expected) }) = file.expected {
            match index_eq2(&file.instance) {
                Ok(v) if v == expected => {
                    let _ = writeln!(out, "expected index {expected} matches");
                }
                Ok(v) => {
                    failures += 1;
                    let _ = writeln!(out, "FAIL expected index {expected}, computed {v}");
                }
                Err(e) => {
                    failures += 1;
                    let _ = writeln!(out, "FAIL {}", describe(&e));
                }
            }
        }
    }
    if failures == 0 {
        out.push_str("validate: PASS\n");
        Outcome::ok(out)
    } else {
        let _ = writeln!(
            out,
            "validate: FAIL ({failures} violation{})",
            if failures == 1 { "" } else { "s" }
        );
        Outcome {
            stdout: out,
            stderr: String::new(),
            code: EXIT_VIOLATION,
        }
    }
}

fn selected(inst: &IcisInstance, level: Option<usize>) -> Result<Vec<&LevelData>, Outcome> {
    match level {
        None => Ok(inst.levels().iter().collect()),
        Some(i) if i <= inst.p() => Ok(vec![&inst.levels()[i]]),
        Some(i) => Err(Outcome::fail(
            EXIT_USAGE,
            format!("error: level {i} does not exist (p = {})\n", inst.p()),
        )),
    }
}

pub fn compute(text: &str, what: What, level: Option<usize>) -> Outcome {
    let file = match load(text) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let inst = &file.instance;
    let levels = match selected(inst, level) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let violation = |e: Error| Outcome::fail(EXIT_VIOLATION, format!("error: {}\n", describe(&e)));
    let mut out = String::new();
    match what {
        What::Index => match index_eq2(inst) {
            Ok(v) => {
                let _ = writeln!(out, "{v}");
            }
            Err(e) => return violation(e),
        },
        What::VarInverse | What::Monodromy => {
            for l in levels {
                let m = match what {
                    What::VarInverse => var_inverse(&l.lattice),
                    _ => monodromy(&l.lattice),
                };
                let m = match m {
                    Ok(m) => m,
                    Err(e) => return violation(e),
                };
                let _ = writeln!(out, "level {} (parity {}):", l.i, l.parity());
                let _ = writeln!(out, "{m}");
                if what == What::Monodromy {
                    match m.finite_order(ORDER_BOUND) {
                        Some(k) => {
                            let _ = writeln!(out, "order: {k} (h^{k} = identity, checked by matrix products)");
                        }
                        None => {
                            let _ = writeln!(out, "order: none up to {ORDER_BOUND}");
                        }
                    }
                }
            }
        }
        What::Signature => {
            for l in levels {
                match level_signature(l) {
                    Ok(s) => {
                        let _ = writeln!(
                            out,
                            "level {}: n+ = {}, n- = {}, n0 = {}, sgn = {}",
                            l.i,
                            s.n_plus,
                            s.n_minus,
                            s.n_zero,
                            s.sgn()
                        );
                    }
                    Err(e) => return violation(e),
                }
            }
        }
        What::Theorem2 => {
            for l in levels {
                match theorem2_value(l, inst.n(), inst.level_sign(l.i)) {
                    Ok(v) => {
                        let _ = writeln!(out, "level {}: {v}", l.i);
                    }
                    Err(e) => return violation(e),
                }
            }
        }
        What::Theorem3 => {
            let odd: Vec<_> = levels.iter().filter(|l| l.parity() % 2 == 1).collect();
            if odd.is_empty() {
                let parity = levels.first().map_or(inst.n(), |l| l.parity());
                return Outcome::fail(
                    EXIT_USAGE,
                    format!(
                        "error: {}\n(for even n + i the index sum of a morsification can change with the sign \
                         while the vanishing-cycle data stay the same, e.g. x1^2 + x2^2 - x3^2 cut by x3)\n",
                        Error::EvenParity { parity }
                    ),
                );
            }
            for l in levels {
                if l.parity() % 2 == 0 {
                    let _ = writeln!(out, "level {}: refused (n + i = {} is even)", l.i, l.parity());
                    continue;
                }
                if l.vanishing.is_none() {
                    return Outcome::fail(
                        EXIT_USAGE,
                        format!("error: level {} has no [level.vanishing] table to evaluate\n", l.i),
                    );
                }
                match theorem3_value(l, inst.level_sign(l.i)) {
                    Ok(v) => {
                        let _ = writeln!(out, "level {}: {v}", l.i);
                    }
                    Err(e) => return violation(e),
                }
            }
        }
    }
    Outcome::ok(out)
}

/// Result of a braid command: the report and the new instance text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidResult {
    pub change: IntMatrix,
    pub text: String,
}

pub fn braid(text: &str, word: &str, level: usize, source: &str) -> Result<BraidResult, Outcome> {
    let file = load(text)?;
    let word: BraidWord = word
        .parse()
        .map_err(|e: Error| Outcome::fail(EXIT_USAGE, format!("error: {e}\n")))?;
    let inst = &file.instance;
    if level > inst.p() {
        return Err(Outcome::fail(
            EXIT_USAGE,
            format!("error: level {level} does not exist (p = {})\n", inst.p()),
        ));
    }
    let target = &inst.levels()[level];
    let (lattice, change) = apply_braid_word(&target.lattice, &word)
        .map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: {}\n", describe(&e))))?;
    let conj = if change.is_identity() {
        target.conj.clone()
    } else {
        // sigma as an operator in the new basis; the Morse blocks no longer apply
        let p = change.matrix();
        let moved = &(&change.inverse().into_matrix() * target.conj.sigma()) * p;
        ConjugationData::unstructured(moved).map_err(|e| Outcome::fail(EXIT_VIOLATION, format!("error: {e}\n")))?
    };
    let mut levels = inst.levels().to_vec();
    levels[level] = LevelData {
        i: level,
        lattice,
        conj,
        vanishing: target.vanishing.clone(),
    };
    let moved = IcisInstance::new(inst.n(), inst.p(), inst.signs().clone(), levels)
        .map_err(|e| Outcome::fail(EXIT_VIOLATION, format!("error: {e}\n")))?;
    let new_file = InstanceFile {
        instance: moved,
        ..file
    };
    let header = vec![format!(
        "braided from {source}: word \"{word}\" applied to level {level}"
    )];
    Ok(BraidResult {
        change: change.into_matrix(),
        text: serialize_with_header(&new_file, &header),
    })
}

pub fn verify(seed: u64, count: usize, rank_bound: usize) -> Outcome {
    let report = verify::run(seed, count, rank_bound);
    let mut out = report.summary();
    match report.first_failure() {
        None => {
            let _ = writeln!(
                out,
                "verify: PASS ({count} instances, seed {seed}, rank bound {rank_bound})"
            );
            Outcome::ok(out)
        }
        Some(f) => {
            let _ = writeln!(
                out,
                "verify: FAIL on instance {} ({}): {}",
                f.instance, f.check, f.detail
            );
            let _ = writeln!(out, "counterexample:");
            out.push_str(&f.counterexample);
            Outcome {
                stdout: out,
                stderr: String::new(),
                code: EXIT_VIOLATION,
            }
        }
    }
}

pub fn gen(seed: u64, n: i64, p: usize, rank_bound: usize) -> Outcome {
    use rand::SeedableRng;
    if n < 1 {
        return Outcome::fail(EXIT_USAGE, "error: n must be at least 1\n".into());
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let inst = match vanlat::generate_icis_instance(&mut rng, n, p, rank_bound) {
        Ok(i) => i,
        Err(e) => return Outcome::fail(EXIT_VIOLATION, format!("error: {e}\n")),
    };
    let index = index_eq2(&inst).ok();
    let mut file = InstanceFile::new(inst);
    file.expected = Some(Expected { index });
    Outcome::ok(serialize(&file))
}

/// Checks that instance files for different sign choices give one index.
pub fn corollary(texts: &[&str]) -> Outcome {
    let mut instances = Vec::new();
    for t in texts {
        match load(t) {
            Ok(f) => instances.push(f.instance),
            Err(o) => return o,
        }
    }
    match corollary_check(&instances) {
        Ok(Ok(())) => Outcome::ok(format!(
            "index {} for all {} variants\n",
            instances.first().and_then(|i| index_eq2(i).ok()).unwrap_or(0),
            instances.len()
        )),
        Ok(Err(d)) => Outcome {
            stdout: format!(
                "variant {} gives index {}, variant 1 gives {}\n",
                d.variant + 1,
                d.found,
                d.expected
            ),
            stderr: String::new(),
            code: EXIT_VIOLATION,
        },
        Err(e) => Outcome::fail(EXIT_VIOLATION, format!("error: {}\n", describe(&e))),
    }
}
