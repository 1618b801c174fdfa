//! WebAssembly entry points for the browser demo in `www/`.
//!
//! Every function takes plain strings and numbers and returns a JSON string,
//! either the result or `{"error": "..."}`. They are ordinary Rust functions
//! too, so the tests run natively.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use vanlat::oracle::{index_2d, Poly2};
use vanlat::{
    apply_braid_word, check_monodromy_relation, check_s_relation, generate_icis_instance, index_eq2, monodromy,
    telescoped_index, theorem2_value, var_inverse, BraidWord, IntMatrix, ThimbleLattice,
};
use wasm_bindgen::prelude::*;

/// Largest exponent tried when looking for the order of the monodromy.
const ORDER_BOUND: u32 = 60;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn number(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn matrix(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(number).collect()))
            .collect(),
    )
}

fn parse_gram(text: &str) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(text).map_err(|e| format!("gram: {e}"))?;
    IntMatrix::from_rows(rows).map_err(|e| e.to_string())
}

fn braid_json(gram: &str, parity: i64, word: &str) -> Result<Value, String> {
    let lattice = ThimbleLattice::new(parity, parse_gram(gram)?).map_err(|e| e.to_string())?;
    let word: BraidWord = word.parse().map_err(|e: vanlat::Error| e.to_string())?;
    let (moved, change) = apply_braid_word(&lattice, &word).map_err(|e| e.to_string())?;
    let h = monodromy(&moved).map_err(|e| e.to_string())?;
    let checks = |l: &ThimbleLattice| -> Result<bool, String> {
        let s = check_s_relation(l).map_err(|e| e.to_string())?.is_ok();
        let m = check_monodromy_relation(l).map_err(|e| e.to_string())?.is_ok();
        Ok(s && m)
    };
    Ok(json!({
        "word": word.to_string(),
        "gram": matrix(moved.gram()),
        "change": matrix(change.matrix()),
        "var_inverse": matrix(&var_inverse(&moved).map_err(|e| e.to_string())?),
        "monodromy": matrix(&h),
        "order": h.finite_order(ORDER_BOUND),
        "relations_hold": checks(&moved)?,
    }))
}

/// Applies a braid word (`a1 A2 f3`) to the thimble basis of a lattice given
/// as a JSON Gram matrix and reports the new Gram matrix, basis change,
/// `Var^{-1}` and monodromy with its order.
#[wasm_bindgen]
pub fn braid(gram: &str, parity: i64, word: &str) -> String {
    braid_json(gram, parity, word).map_or_else(error, |v| v.to_string())
}

fn rational(x: f64) -> Result<BigRational, String> {
    BigRational::from_float(x).ok_or_else(|| format!("{x} is not a finite number"))
}

fn winding_json(f: &str, radius: f64, grid: u32) -> Result<Value, String> {
    let poly: Poly2 = f.parse().map_err(|e: vanlat::Error| e.to_string())?;
    let grad = poly.gradient();
    let r = rational(radius)?;
    let index = index_2d(&grad, &r, 0).map_err(|e| e.to_string())?;
    let grid = grid.clamp(2, 40);
    let mut field = Vec::new();
    for a in 0..=grid {
        for b in 0..=grid {
            let x = rational(radius * (2.0 * f64::from(a) / f64::from(grid) - 1.0))?;
            let y = rational(radius * (2.0 * f64::from(b) / f64::from(grid) - 1.0))?;
            let (u, v) = (grad.0.eval(&x, &y), grad.1.eval(&x, &y));
            if u.is_zero() && v.is_zero() {
                continue;
            }
            let f = |q: &BigRational| q.to_f64().unwrap_or(0.0);
            field.push(json!([f(&x), f(&y), f(&u), f(&v)]));
        }
    }
    Ok(json!({
        "gradient": [grad.0.to_string(), grad.1.to_string()],
        "index": index,
        "field": field,
    }))
}

/// Index at the origin of the gradient of a polynomial in `x, y`, counted on
/// the circle of the given radius, with gradient samples on a square grid for
/// drawing.
#[wasm_bindgen]
pub fn winding(f: &str, radius: f64, grid: u32) -> String {
    winding_json(f, radius, grid).map_or_else(error, |v| v.to_string())
}

fn generate_json(seed: u32, n: i64, p: u32, rank_bound: u32) -> Result<Value, String> {
    if !(1..=4).contains(&n) || p > 3 || rank_bound > 8 {
        return Err("keep n in 1..=4, p <= 3 and the rank bound <= 8".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(seed));
    let inst = generate_icis_instance(&mut rng, n, p as usize, rank_bound as usize).map_err(|e| e.to_string())?;
    let mut levels = Vec::new();
    for l in inst.levels() {
        let s = inst.level_sign(l.i);
        levels.push(json!({
            "i": l.i,
            "parity": l.parity(),
            "sign": s,
            "gram": matrix(l.lattice.gram()),
            "sigma": matrix(l.conj.sigma()),
            "index_sum": theorem2_value(l, n, s).map_err(|e| e.to_string())?,
        }));
    }
    let t = telescoped_index(&inst).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": n,
        "p": p,
        "signs": inst.signs().as_slice(),
        "levels": levels,
        "index": index_eq2(&inst).map_err(|e| e.to_string())?,
        "telescope": { "level_sums": t.level_sums, "chis": t.chis, "index": t.index },
    }))
}

/// A generated consistent instance with the index of its singular point,
/// evaluated from level signatures and again through the Euler chain.
#[wasm_bindgen]
pub fn generate(seed: u32, n: i64, p: u32, rank_bound: u32) -> String {
    generate_json(seed, n, p, rank_bound).map_or_else(error, |v| v.to_string())
}
