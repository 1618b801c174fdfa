//! The seeded invariant suite behind `vanlat verify`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vanlat::{
    apply_braid_word, block_diagonal_structure_check, check_monodromy_relation, check_s_relation, corollary_check,
    flip_top_sign, generate_icis_instance, index_eq2, random_braid_word, telescoped_index, theorem2_blockwise,
    theorem2_value, theorem3_value, var_inverse_as_operator_after_braid, var_sigma_form, BraidWord, Counterexample,
    IcisInstance, LevelData, SignVector,
};

use crate::format::{serialize, InstanceFile};

pub const CHECKS: [&str; 9] = [
    "s-relation",
    "monodromy-relation",
    "braid-invariance",
    "symmetric-form",
    "block-form",
    "level-sum",
    "vanishing-cycles",
    "telescoping",
    "sign-independence",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub instance: usize,
    pub check: &'static str,
    pub detail: String,
    /// Instance file reproducing the failure.
    pub counterexample: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub passed: BTreeMap<&'static str, usize>,
    pub total: BTreeMap<&'static str, usize>,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in CHECKS {
            let total = self.total.get(c).copied().unwrap_or(0);
            let passed = self.passed.get(c).copied().unwrap_or(0);
            let _ = writeln!(out, "{c:<20} {passed}/{total}");
        }
        out
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }

    fn record(&mut self, check: &'static str, ok: bool) {
        *self.total.entry(check).or_default() += 1;
        if ok {
            *self.passed.entry(check).or_default() += 1;
        }
    }
}

/// Seed of instance `k`; independent of how many instances are requested.
fn instance_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64)
}

/// Level `i` as a stand-alone instance with `n' = n + i` and `p = 0`.
pub fn isolate_level(inst: &IcisInstance, i: usize) -> IcisInstance {
    let l = &inst.levels()[i];
    let level = LevelData { i: 0, ..l.clone() };
    let signs = SignVector::new(vec![inst.level_sign(i)]).expect("a single sign is valid");
    IcisInstance::new(l.parity(), 0, signs, vec![level]).expect("a valid level is a valid instance")
}

fn witness(inst: IcisInstance, word: Option<&BraidWord>) -> String {
    let mut file = InstanceFile::new(inst);
    if let Some(w) = word {
        file.braid_words.push(w.clone());
    }
    serialize(&file)
}

fn located(c: &Counterexample) -> String {
    format!(
        "entry ({}, {}) is {}, expected {}",
        c.row + 1,
        c.col + 1,
        c.found,
        c.expected
    )
}

type Verdict = Result<(), String>;

fn level_checks(l: &LevelData, n: i64, s: i64, word: &BraidWord) -> Vec<(&'static str, Verdict)> {
    let err = |e: vanlat::Error| e.to_string();
    let relation = |r: vanlat::Result<Result<(), Counterexample>>| r.map_err(err)?.map_err(|c| located(&c));
    let mut out = vec![
        ("s-relation", relation(check_s_relation(&l.lattice))),
        ("monodromy-relation", relation(check_monodromy_relation(&l.lattice))),
        (
            "braid-invariance",
            apply_braid_word(&l.lattice, word)
                .map_err(err)
                .and_then(|_| relation(var_inverse_as_operator_after_braid(&l.lattice, word))),
        ),
    ];
    let form = var_sigma_form(&l.lattice, &l.conj).map_err(err);
    out.push(("symmetric-form", form.map(|_| ())));
    if l.conj.morse().is_some() {
        out.push((
            "block-form",
            relation(block_diagonal_structure_check(&l.lattice, &l.conj)),
        ));
    }
    let t2 = theorem2_value(l, n, s).map_err(err);
    out.push((
        "level-sum",
        t2.clone().and_then(|v| match theorem2_blockwise(l, s) {
            Some(b) if b != v => Err(format!("signature gives {v}, Morse data give {b}")),
            _ => Ok(()),
        }),
    ));
    if l.parity() % 2 == 1 && l.vanishing.is_some() {
        out.push((
            "vanishing-cycles",
            t2.and_then(|v| match theorem3_value(l, s) {
                Ok(w) if w == v => Ok(()),
                Ok(w) => Err(format!("vanishing cycles give {w}, thimbles give {v}")),
                Err(e) => Err(e.to_string()),
            }),
        ));
    }
    out
}

/// Runs every check on one instance; level failures are reduced to that level.
pub fn check_instance<R: Rng>(rng: &mut R, k: usize, inst: &IcisInstance, report: &mut Report) {
    for l in inst.levels() {
        let len = rng.gen_range(0..=12);
        let word = random_braid_word(rng, l.lattice.rank(), len, 0.2);
        for (check, verdict) in level_checks(l, inst.n(), inst.level_sign(l.i), &word) {
            report.record(check, verdict.is_ok());
            if let Err(detail) = verdict {
                let w = (check == "braid-invariance").then_some(&word);
                report.failures.push(Failure {
                    instance: k,
                    check,
                    detail: format!("level {}: {detail}", l.i),
                    counterexample: witness(isolate_level(inst, l.i), w),
                });
            }
        }
    }
    let telescoping = match (index_eq2(inst), telescoped_index(inst)) {
        (Ok(a), Ok(t)) if a == t.index => Ok(()),
        (Ok(a), Ok(t)) => Err(format!("level signatures give {a}, Euler chain gives {}", t.index)),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    };
    let sign = match flip_top_sign(rng, inst) {
        Ok(flipped) => match corollary_check(&[inst.clone(), flipped]) {
            Ok(Ok(())) => Ok(()),
            Ok(Err(d)) => Err(format!(
                "flipping the top sign changes the index from {} to {}",
                d.expected, d.found
            )),
            Err(e) => Err(e.to_string()),
        },
        Err(e) => Err(e.to_string()),
    };
    for (check, verdict) in [("telescoping", telescoping), ("sign-independence", sign)] {
        report.record(check, verdict.is_ok());
        if let Err(detail) = verdict {
            report.failures.push(Failure {
                instance: k,
                check,
                detail,
                counterexample: witness(inst.clone(), None),
            });
        }
    }
}

/// `count` generated instances with `n` in 1..=3 and `p` in 0..=2.
pub fn run(seed: u64, count: usize, rank_bound: usize) -> Report {
    let mut report = Report::default();
    for k in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, k));
        let n = rng.gen_range(1..=3);
        let p = rng.gen_range(0..=2);
        match generate_icis_instance(&mut rng, n, p, rank_bound) {
            Ok(inst) => check_instance(&mut rng, k, &inst, &mut report),
            Err(e) => {
                report.record("generator", false);
                report.failures.push(Failure {
                    instance: k,
                    check: "generator",
                    detail: e.to_string(),
                    counterexample: String::new(),
                });
            }
        }
    }
    report
}
