//! The instance file: TOML with a fixed canonical layout.
//!
//! ```toml
//! version = 1
//! n = 1
//! p = 0
//! signs = [1]
//!
//! [[level]]
//! i = 0
//! gram = [[2, -1], [-1, 2]]
//! morse = [{ real = 0 }, { real = 1 }]
//! sigma_upper = [[1, 2, -1]]
//! ```
//!
//! `gram[r][c] = <delta_c, delta_r>`. All positions (`sigma_upper` triples,
//! braid tokens, diagnostics) are 1-based. A level has either `morse` with
//! optional `sigma_upper`, or a full `sigma` matrix without Morse data.
//! Integers outside the 64-bit range are written as decimal strings.

use std::fmt::Write as _;
use std::ops::Range;

use num_bigint::BigInt;
use serde::Deserialize;
use toml::Spanned;
use vanlat::{
    build_sigma, BraidWord, ConjugationData, CriticalPoint, IcisInstance, IntMatrix, LevelData, MorseSpec, SignVector,
    ThimbleLattice, VanishingForm,
};

pub const FORMAT_VERSION: i64 = 1;

const HEADER: &str = "\
# vanlat instance
# gram[r][c] = <delta_c, delta_r> (row r, column c); parity of level i is n + i
# sigma_upper triples [row, col, value] and braid tokens are 1-based
";

/// A parsed instance with its optional extras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: IcisInstance,
    pub braid_words: Vec<BraidWord>,
    pub expected: Option<Expected>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expected {
    pub index: Option<i64>,
}

impl InstanceFile {
    pub fn new(instance: IcisInstance) -> Self {
        Self {
            instance,
            braid_words: Vec::new(),
            expected: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Not a well-formed instance document.
    Format,
    /// Well-formed, but the data break a lattice or conjugation rule.
    Violation,
}

/// Parse failure with a 1-based source position when one is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    fn err(&self, span: Range<usize>, message: impl Into<String>) -> ParseError {
        self.at(ErrorKind::Format, span, message)
    }

    fn violation(&self, span: Range<usize>, message: impl Into<String>) -> ParseError {
        self.at(ErrorKind::Violation, span, message)
    }

    fn at(&self, kind: ErrorKind, span: Range<usize>, message: impl Into<String>) -> ParseError {
        let (line, column) = position(self.src, span.start);
        ParseError {
            kind,
            line: Some(line),
            column: Some(column),
            message: message.into(),
        }
    }
}

#[derive(Deserialize, Clone, Debug)]
#[serde(untagged)]
enum Int {
    Small(i64),
    Big(String),
}

impl Int {
    fn value(&self) -> Result<BigInt, String> {
        match self {
            Int::Small(v) => Ok((*v).into()),
            Int::Big(s) => s.parse().map_err(|_| format!("{s:?} is not an integer")),
        }
    }
}

type RawMatrix = Spanned<Vec<Vec<Int>>>;

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum RawPoint {
    Real { real: i64 },
    Pair { pair: Int },
    Bare(String),
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawVanishing {
    form: RawMatrix,
    sigma_s: RawMatrix,
    sigma_s_tilde: RawMatrix,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawLevel {
    i: Spanned<i64>,
    gram: RawMatrix,
    morse: Option<Spanned<Vec<RawPoint>>>,
    sigma_upper: Option<Spanned<Vec<Vec<Int>>>>,
    sigma: Option<RawMatrix>,
    vanishing: Option<RawVanishing>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    index: Option<i64>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: Spanned<i64>,
    n: Spanned<i64>,
    p: Spanned<i64>,
    signs: Spanned<Vec<i64>>,
    #[serde(default)]
    level: Vec<Spanned<RawLevel>>,
    #[serde(default)]
    braid_words: Vec<Spanned<String>>,
    expected: Option<RawExpected>,
}

fn matrix(ctx: &Ctx, raw: &RawMatrix, what: &str) -> Result<IntMatrix, ParseError> {
    let rows = raw
        .get_ref()
        .iter()
        .map(|r| r.iter().map(Int::value).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|m| ctx.err(raw.span(), format!("{what}: {m}")))?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(ctx.err(raw.span(), format!("{what}: rows have different lengths")));
    }
    if width != rows.len() {
        return Err(ctx.err(
            raw.span(),
            format!("{what}: {}x{width} matrix is not square", rows.len()),
        ));
    }
    IntMatrix::from_rows(rows).map_err(|e| ctx.err(raw.span(), format!("{what}: {e}")))
}

fn morse_spec(ctx: &Ctx, raw: &Spanned<Vec<RawPoint>>) -> Result<MorseSpec, ParseError> {
    let mut points = Vec::new();
    for p in raw.get_ref() {
        points.push(match p {
            RawPoint::Real { real } => {
                let m = u32::try_from(*real).map_err(|_| ctx.err(raw.span(), "Morse index must be non-negative"))?;
                CriticalPoint::Real { morse_index: m }
            }
            RawPoint::Pair { pair } => CriticalPoint::ConjugatePair {
                pairing: Some(pair.value().map_err(|m| ctx.err(raw.span(), m))?),
            },
            RawPoint::Bare(s) if s == "pair" => CriticalPoint::ConjugatePair { pairing: None },
            RawPoint::Bare(s) => {
                return Err(ctx.err(
                    raw.span(),
                    format!("unknown critical point {s:?}; expected {{ real = m }}, {{ pair = a }} or \"pair\""),
                ))
            }
        });
    }
    Ok(MorseSpec(points))
}

/// Describes a library error with 1-based positions where it carries any.
pub fn describe(err: &vanlat::Error) -> String {
    use vanlat::{Error, LatticeViolation};
    match err {
        Error::NotInvolution { row, col } => {
            format!(
                "sigma is not an involution: sigma^2 differs from the identity at ({}, {})",
                row + 1,
                col + 1
            )
        }
        Error::BlockStructure { row, col, reason } => {
            format!("sigma entry ({}, {}): {reason}", row + 1, col + 1)
        }
        Error::IndexOutOfRange { index, rank } => format!("position {} out of range for rank {rank}", index + 1),
        Error::InvalidLattice(LatticeViolation::Symmetry { row, col }) => format!(
            "gram entries ({}, {}) and ({}, {}) break the symmetry rule for this parity",
            row + 1,
            col + 1,
            col + 1,
            row + 1
        ),
        Error::InvalidLattice(LatticeViolation::Diagonal { index, expected, found }) => format!(
            "gram diagonal entry {} is {found}, the self-intersection for this parity is {expected}",
            index + 1
        ),
        other => other.to_string(),
    }
}

fn level(ctx: &Ctx, n: i64, raw: &Spanned<RawLevel>) -> Result<LevelData, ParseError> {
    let span = raw.span();
    let raw = raw.get_ref();
    let i = usize::try_from(*raw.i.get_ref()).map_err(|_| ctx.err(raw.i.span(), "level index must be non-negative"))?;
    let parity = n + i as i64;
    let gram = matrix(ctx, &raw.gram, "gram")?;
    let lattice = ThimbleLattice::new(parity, gram).map_err(|e| ctx.violation(raw.gram.span(), describe(&e)))?;
    let conj = match (&raw.morse, &raw.sigma) {
        (Some(morse), None) => {
            let spec = morse_spec(ctx, morse)?;
            let mut upper = Vec::new();
            if let Some(entries) = &raw.sigma_upper {
                for e in entries.get_ref() {
                    let vals = e
                        .iter()
                        .map(Int::value)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|m| ctx.err(entries.span(), m))?;
                    let [r, c, v] = <[BigInt; 3]>::try_from(vals)
                        .map_err(|_| ctx.err(entries.span(), "sigma_upper entries are [row, col, value]"))?;
                    let pos = |x: &BigInt| {
                        usize::try_from(x)
                            .ok()
                            .filter(|&k| k >= 1)
                            .map(|k| k - 1)
                            .ok_or_else(|| {
                                ctx.err(entries.span(), format!("sigma_upper position {x} must be at least 1"))
                            })
                    };
                    upper.push((pos(&r)?, pos(&c)?, v));
                }
            }
            build_sigma(spec, parity, &upper).map_err(|e| ctx.violation(morse.span(), describe(&e)))?
        }
        (None, Some(sigma)) => {
            if raw.sigma_upper.is_some() {
                return Err(ctx.err(sigma.span(), "sigma_upper requires morse data"));
            }
            let m = matrix(ctx, sigma, "sigma")?;
            ConjugationData::unstructured(m).map_err(|e| ctx.violation(sigma.span(), describe(&e)))?
        }
        (Some(morse), Some(_)) => return Err(ctx.err(morse.span(), "give either morse or sigma, not both")),
        (None, None) => return Err(ctx.err(span, "level needs morse data or a sigma matrix")),
    };
    if conj.rank() != lattice.rank() {
        return Err(ctx.err(
            span,
            format!("sigma has rank {} but gram has rank {}", conj.rank(), lattice.rank()),
        ));
    }
    let vanishing = match &raw.vanishing {
        None => None,
        Some(v) => {
            let form = matrix(ctx, &v.form, "vanishing.form")?;
            let sigma_s = matrix(ctx, &v.sigma_s, "vanishing.sigma_s")?;
            let sigma_s_tilde = matrix(ctx, &v.sigma_s_tilde, "vanishing.sigma_s_tilde")?;
            if sigma_s.rows() != form.rows() || sigma_s_tilde.rows() != form.rows() {
                return Err(ctx.err(v.form.span(), "vanishing matrices have different sizes"));
            }
            Some(VanishingForm {
                form,
                sigma_s,
                sigma_s_tilde,
            })
        }
    };
    Ok(LevelData {
        i,
        lattice,
        conj,
        vanishing,
    })
}

pub fn parse(src: &str) -> Result<InstanceFile, ParseError> {
    let ctx = Ctx { src };
    let raw: RawFile = toml::from_str(src).map_err(|e| {
        let (line, column) = e.span().map(|s| position(src, s.start)).unzip();
        ParseError {
            kind: ErrorKind::Format,
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    if *raw.version.get_ref() != FORMAT_VERSION {
        return Err(ctx.err(
            raw.version.span(),
            format!("unsupported format version {}", raw.version.get_ref()),
        ));
    }
    let n = *raw.n.get_ref();
    if n < 1 {
        return Err(ctx.err(raw.n.span(), "n must be at least 1"));
    }
    let p = usize::try_from(*raw.p.get_ref()).map_err(|_| ctx.err(raw.p.span(), "p must be non-negative"))?;
    let signs = SignVector::new(raw.signs.get_ref().clone()).map_err(|e| ctx.err(raw.signs.span(), e.to_string()))?;
    if signs.len() != p + 1 {
        return Err(ctx.err(
            raw.signs.span(),
            format!("expected p + 1 = {} signs, found {}", p + 1, signs.len()),
        ));
    }
    if raw.level.is_empty() {
        return Err(ParseError {
            kind: ErrorKind::Format,
            line: None,
            column: None,
            message: "instance has no [[level]] entries".into(),
        });
    }
    if raw.level.len() != p + 1 {
        return Err(ctx.err(
            raw.level[0].span(),
            format!("expected p + 1 = {} levels, found {}", p + 1, raw.level.len()),
        ));
    }
    let mut levels = Vec::with_capacity(p + 1);
    for (k, l) in raw.level.iter().enumerate() {
        if *l.get_ref().i.get_ref() != k as i64 {
            return Err(ctx.err(
                l.get_ref().i.span(),
                format!("levels must be listed in order; expected i = {k}"),
            ));
        }
        levels.push(level(&ctx, n, l)?);
    }
    let instance = IcisInstance::new(n, p, signs, levels).map_err(|e| ctx.violation(raw.n.span(), describe(&e)))?;
    let braid_words = raw
        .braid_words
        .iter()
        .map(|w| {
            w.get_ref()
                .parse()
                .map_err(|e: vanlat::Error| ctx.err(w.span(), e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InstanceFile {
        instance,
        braid_words,
        expected: raw.expected.map(|e| Expected { index: e.index }),
    })
}

fn int(v: &BigInt) -> String {
    match i64::try_from(v) {
        Ok(x) => x.to_string(),
        Err(_) => format!("\"{v}\""),
    }
}

fn matrix_literal(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| format!("[{}]", m.row(r).iter().map(int).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn morse_literal(spec: &MorseSpec) -> String {
    let items: Vec<String> = spec
        .points()
        .iter()
        .map(|p| match p {
            CriticalPoint::Real { morse_index } => format!("{{ real = {morse_index} }}"),
            CriticalPoint::ConjugatePair { pairing: Some(a) } => format!("{{ pair = {} }}", int(a)),
            CriticalPoint::ConjugatePair { pairing: None } => "\"pair\"".into(),
        })
        .collect();
    format!("[{}]", items.join(", "))
}

/// Canonical text; `parse(&serialize(f)) == f` for every instance file.
pub fn serialize(file: &InstanceFile) -> String {
    serialize_with_header(file, &[])
}

/// Canonical text preceded by extra comment lines.
pub fn serialize_with_header(file: &InstanceFile, extra: &[String]) -> String {
    let inst = &file.instance;
    let mut out = String::new();
    for line in extra {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str(HEADER);
    let _ = writeln!(out, "version = {FORMAT_VERSION}");
    let _ = writeln!(out, "n = {}", inst.n());
    let _ = writeln!(out, "p = {}", inst.p());
    let signs: Vec<String> = inst.signs().as_slice().iter().map(i64::to_string).collect();
    let _ = writeln!(out, "signs = [{}]", signs.join(", "));
    if !file.braid_words.is_empty() {
        let words: Vec<String> = file.braid_words.iter().map(|w| format!("\"{w}\"")).collect();
        let _ = writeln!(out, "braid_words = [{}]", words.join(", "));
    }
    for l in inst.levels() {
        let _ = writeln!(out, "\n[[level]]");
        let _ = writeln!(out, "i = {}", l.i);
        let _ = writeln!(out, "gram = {}", matrix_literal(l.lattice.gram()));
        match l.conj.morse() {
            Some(spec) => {
                let _ = writeln!(out, "morse = {}", morse_literal(spec));
                let upper = l.conj.upper_entries();
                if !upper.is_empty() {
                    let items: Vec<String> = upper
                        .iter()
                        .map(|(r, c, v)| format!("[{}, {}, {}]", r + 1, c + 1, int(v)))
                        .collect();
                    let _ = writeln!(out, "sigma_upper = [{}]", items.join(", "));
                }
            }
            None => {
                let _ = writeln!(out, "sigma = {}", matrix_literal(l.conj.sigma()));
            }
        }
        if let Some(v) = &l.vanishing {
            let _ = writeln!(out, "\n[level.vanishing]");
            let _ = writeln!(out, "form = {}", matrix_literal(&v.form));
            let _ = writeln!(out, "sigma_s = {}", matrix_literal(&v.sigma_s));
            let _ = writeln!(out, "sigma_s_tilde = {}", matrix_literal(&v.sigma_s_tilde));
        }
    }
    if let Some(Expected { index }) = &file.expected {
        let _ = writeln!(out, "\n[expected]");
        if let Some(i) = index {
            let _ = writeln!(out, "index = {i}");
        }
    }
    out
}
