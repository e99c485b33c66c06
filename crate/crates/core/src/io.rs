//! Text formats for groups, actions, cochains, extensions, decompositions,
//! verdicts and residuosity instances.
//!
//! Groups are written `group <n>` followed by `n` rows of the table, or
//! `units <N>`. Anywhere a group is expected, a *table reference* may be
//! given instead: a file path, or one of `trivial`, `cyclic:<n>`,
//! `abelian:<n1>,<n2>,…`, `dihedral:<n>`, `quaternion`, `units:<N>`.
//! Lines starting with `#` are comments everywhere.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::abelian::AbelianDecomposition;
use crate::cohomology::{Cochain1, Cochain2, TableModule};
use crate::equivalence::{Certificate, EquivalenceVerdict};
use crate::group::{validate_table, ActionSpec, GroupError, GroupTable, Handle, TableExtension};
use crate::hardness::{realize_extension_table, HardnessError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {msg}")]
    File { path: PathBuf, msg: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Hardness(#[from] HardnessError),
}

fn perr(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { line, msg: msg.into() }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, IoError> {
    s.parse().map_err(|_| perr(line, format!("expected a number, got `{s}`")))
}

fn parse_u64_any(s: &str, line: usize) -> Result<u64, IoError> {
    match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16).map_err(|_| perr(line, format!("bad hex number `{s}`"))),
        None => parse_num(s, line),
    }
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::File { path: path.to_path_buf(), msg: e.to_string() })
}

/// Parses a group file.
pub fn parse_group(text: &str) -> Result<GroupTable, IoError> {
    let mut it = lines(text);
    let (ln, head) = it.next().ok_or_else(|| perr(0, "empty group file"))?;
    let words: Vec<&str> = head.split_whitespace().collect();
    match words.as_slice() {
        ["units", n] => Ok(GroupTable::units_mod_n(parse_u64_any(n, ln)?)?),
        ["group", n] => {
            let n: usize = parse_num(n, ln)?;
            let mut rows = Vec::with_capacity(n);
            for (ln, l) in it {
                let row = l.split_whitespace().map(|t| parse_num::<u32>(t, ln)).collect::<Result<Vec<_>, _>>()?;
                if row.len() != n {
                    return Err(perr(ln, format!("row has {} entries, expected {n}", row.len())));
                }
                rows.push(row);
            }
            if rows.len() != n {
                return Err(perr(ln, format!("{} rows, expected {n}", rows.len())));
            }
            Ok(validate_table(rows)?)
        }
        _ => Err(perr(ln, "expected `group <n>` or `units <N>`")),
    }
}

pub fn format_group(g: &GroupTable) -> String {
    if let Some(n) = g.units_modulus() {
        return format!("units {n}\n");
    }
    let mut out = format!("group {}\n", g.order());
    for x in 0..g.order() {
        let row: Vec<String> = g.row(x).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Resolves a table reference; relative paths are taken from `base`.
pub fn resolve_group(spec: &str, base: Option<&Path>) -> Result<GroupTable, IoError> {
    let bad = |m: &str| perr(0, format!("{m} in `{spec}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("bad number"));
    let (kind, arg) = spec
        .split_once(':')
        .or_else(|| spec.strip_prefix("units ").map(|n| ("units", n)))
        .unwrap_or((spec, ""));
    match kind {
        "trivial" => Ok(GroupTable::trivial()),
        "quaternion" => Ok(GroupTable::quaternion()),
        "cyclic" => Ok(GroupTable::cyclic(num(arg)?.max(1))),
        "dihedral" => Ok(GroupTable::dihedral(num(arg)?)),
        "abelian" => {
            let fs = arg.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            Ok(GroupTable::abelian(&fs))
        }
        "units" => Ok(GroupTable::units_mod_n(arg.trim().parse().map_err(|_| bad("bad modulus"))?)?),
        _ => {
            let path = match base {
                Some(b) if Path::new(spec).is_relative() => b.join(spec),
                _ => PathBuf::from(spec),
            };
            parse_group(&read_file(&path)?)
        }
    }
}

/// `action trivial`, `action inversion`, or `action <|G|> <|A|>` followed by
/// one line per element of `G` listing the images of `0..|A|`.
pub fn parse_action(text: &str, g: &GroupTable, a: &GroupTable) -> Result<ActionSpec, IoError> {
    let mut it = lines(text);
    let (ln, head) = it.next().ok_or_else(|| perr(0, "empty action"))?;
    let words: Vec<&str> = head.split_whitespace().collect();
    match words.as_slice() {
        ["action", "trivial"] => Ok(ActionSpec::Trivial),
        ["action", "inversion"] => Ok(ActionSpec::inversion(g, a)?),
        ["action", ng, na] => {
            let (ng, na): (usize, usize) = (parse_num(ng, ln)?, parse_num(na, ln)?);
            if ng != g.order() || na != a.order() {
                return Err(perr(ln, "action dimensions do not match G and A"));
            }
            let rows = it
                .map(|(ln, l)| l.split_whitespace().map(|t| parse_num::<u32>(t, ln)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ActionSpec::from_images(g, a, rows)?)
        }
        _ => Err(perr(ln, "expected `action trivial`, `action inversion` or `action <|G|> <|A|>`")),
    }
}

pub fn format_action(action: &ActionSpec, g: &GroupTable, a: &GroupTable) -> String {
    match action.images() {
        None => "action trivial\n".to_string(),
        Some(images) => {
            let mut out = format!("action {} {}\n", g.order(), a.order());
            for row in images {
                let r: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.push_str(&r.join(" "));
                out.push('\n');
            }
            out
        }
    }
}

fn parse_cochain2_lines<'a>(
    head: (usize, &str),
    body: impl Iterator<Item = (usize, &'a str)>,
    g: &GroupTable,
    a: &GroupTable,
    action: &ActionSpec,
) -> Result<Cochain2<u32>, IoError> {
    let (ln, h) = head;
    let n: usize = match h.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["cochain2", n] => parse_num(n, ln)?,
        _ => return Err(perr(ln, "expected `cochain2 <|G|>`")),
    };
    if n != g.order() {
        return Err(perr(ln, format!("cochain over a group of order {n}, G has order {}", g.order())));
    }
    let mut values = vec![0u32; n * n];
    for (ln, l) in body {
        let t: Vec<&str> = l.split_whitespace().collect();
        let [x, y, v] = t.as_slice() else { return Err(perr(ln, "expected `x y a`")) };
        let (x, y, v): (usize, usize, u32) = (parse_num(x, ln)?, parse_num(y, ln)?, parse_num(v, ln)?);
        if x >= n || y >= n || v as usize >= a.order() {
            return Err(perr(ln, "entry out of range"));
        }
        values[x * n + y] = v;
    }
    Cochain2::new(n, values, &TableModule::new(a, action)).map_err(|e| perr(ln, e.to_string()))
}

/// A factor-set file in table mode: `cochain2 <|G|>` then `x y a` lines.
pub fn parse_cochain2(text: &str, g: &GroupTable, a: &GroupTable, action: &ActionSpec) -> Result<Cochain2<u32>, IoError> {
    let mut it = lines(text);
    let head = it.next().ok_or_else(|| perr(0, "empty cochain"))?;
    parse_cochain2_lines(head, it, g, a, action)
}

/// Writes the non-identity entries of a table-mode 2-cochain.
pub fn format_cochain2(f: &Cochain2<u32>) -> String {
    let n = f.order();
    let mut out = format!("cochain2 {n}\n");
    for x in 0..n {
        for y in 0..n {
            if *f.get(x, y) != 0 {
                let _ = writeln!(out, "{x} {y} {}", f.get(x, y));
            }
        }
    }
    out
}

/// Writes every entry of a black-box 2-cochain as hex handles.
pub fn format_cochain2_handles(f: &Cochain2<Handle>) -> String {
    let n = f.order();
    let mut out = format!("cochain2 {n}\n");
    for x in 0..n {
        for y in 0..n {
            let _ = writeln!(out, "{x} {y} {}", f.get(x, y));
        }
    }
    out
}

pub fn format_cochain1(v: &Cochain1<u32>) -> String {
    let mut out = format!("cochain1 {}\n", v.order());
    for (x, a) in v.values().iter().enumerate().skip(1) {
        if *a != 0 {
            let _ = writeln!(out, "{x} {a}");
        }
    }
    out
}

pub fn format_cochain1_handles(v: &Cochain1<Handle>) -> String {
    let mut out = format!("cochain1 {}\n", v.order());
    for (x, a) in v.values().iter().enumerate() {
        let _ = writeln!(out, "{x} {a}");
    }
    out
}

/// An extension as read from a file.
#[derive(Clone, Debug)]
pub struct ExtensionSpec {
    pub g: GroupTable,
    pub a: GroupTable,
    pub action: ActionSpec,
    pub body: ExtensionBody,
}

#[derive(Clone, Debug)]
pub enum ExtensionBody {
    FactorSet(Cochain2<u32>),
    Table(TableExtension),
}

impl ExtensionSpec {
    /// The extension as tables, realizing a factor set if needed.
    pub fn to_table_extension(&self) -> Result<TableExtension, IoError> {
        match &self.body {
            ExtensionBody::Table(t) => Ok(t.clone()),
            ExtensionBody::FactorSet(f) => Ok(realize_extension_table(&self.a, &self.g, f, &self.action)?),
        }
    }
}

/// Parses an extension file:
///
/// ```text
/// extension
/// G <table-ref>
/// A <table-ref>
/// action <trivial|inversion|path>     (optional)
/// cochain2 <|G|>
/// x y a
/// ```
///
/// or, for a literal table, `E <table-ref>` followed by `proj: e g` lines
/// for every element of `E` and `embed: a e` lines for every element of `A`
/// in place of the cochain block.
pub fn parse_extension(text: &str, base: Option<&Path>) -> Result<ExtensionSpec, IoError> {
    let all: Vec<(usize, &str)> = lines(text).collect();
    let mut it = all.iter().copied();
    match it.next() {
        Some((_, "extension")) => {}
        Some((ln, _)) => return Err(perr(ln, "expected `extension`")),
        None => return Err(perr(0, "empty extension file")),
    }
    let (mut g, mut a, mut e) = (None, None, None);
    let mut action_ref: Option<(usize, String)> = None;
    let mut proj = Vec::new();
    let mut embed = Vec::new();
    let mut cochain_at = None;
    for (i, (ln, l)) in all.iter().copied().enumerate().skip(1) {
        let (key, rest) = l.split_once(char::is_whitespace).map_or((l, ""), |(k, r)| (k, r.trim()));
        match key {
            "G" => g = Some(resolve_group(rest, base).map_err(|e| perr(ln, e.to_string()))?),
            "A" => a = Some(resolve_group(rest, base).map_err(|e| perr(ln, e.to_string()))?),
            "E" => e = Some(resolve_group(rest, base).map_err(|e| perr(ln, e.to_string()))?),
            "action" => action_ref = Some((ln, rest.to_string())),
            "proj:" | "embed:" => {
                let t: Vec<&str> = rest.split_whitespace().collect();
                let [u, v] = t.as_slice() else { return Err(perr(ln, "expected two indices")) };
                let pair: (usize, u32) = (parse_num(u, ln)?, parse_num(v, ln)?);
                if key == "proj:" { proj.push(pair) } else { embed.push(pair) }
            }
            "cochain2" => {
                cochain_at = Some(i);
                break;
            }
            _ => return Err(perr(ln, format!("unknown key `{key}`"))),
        }
    }
    let g = g.ok_or_else(|| perr(0, "missing `G`"))?;
    let a = a.ok_or_else(|| perr(0, "missing `A`"))?;
    let action = match action_ref {
        None => ActionSpec::Trivial,
        Some((_, r)) if r == "trivial" || r == "inversion" => parse_action(&format!("action {r}"), &g, &a)?,
        Some((ln, path)) => {
            let p = match base {
                Some(b) if Path::new(&path).is_relative() => b.join(&path),
                _ => PathBuf::from(&path),
            };
            parse_action(&read_file(&p)?, &g, &a).map_err(|e| perr(ln, e.to_string()))?
        }
    };
    if let Some(i) = cochain_at {
        let f = parse_cochain2_lines(all[i], all[i + 1..].iter().copied(), &g, &a, &action)?;
        return Ok(ExtensionSpec { g, a, action, body: ExtensionBody::FactorSet(f) });
    }
    let e = e.ok_or_else(|| perr(0, "need either a `cochain2` block or `E` with `proj:` and `embed:` lines"))?;
    let mut proj_map = vec![u32::MAX; e.order()];
    for (x, gx) in proj {
        *proj_map.get_mut(x).ok_or_else(|| perr(0, "projection index out of range"))? = gx;
    }
    let mut embed_map = vec![u32::MAX; a.order()];
    for (x, ex) in embed {
        *embed_map.get_mut(x).ok_or_else(|| perr(0, "embedding index out of range"))? = ex;
    }
    if proj_map.contains(&u32::MAX) || embed_map.contains(&u32::MAX) {
        return Err(perr(0, "every element of E needs `proj:` and every element of A needs `embed:`"));
    }
    let t = TableExtension::new(e, a.clone(), g.clone(), proj_map, embed_map)?;
    let induced = t.conjugation_action();
    if induced != action {
        return Err(perr(0, "the declared action differs from the one induced by E"));
    }
    Ok(ExtensionSpec { g, a, action, body: ExtensionBody::Table(t) })
}

pub fn format_extension_factor_set(g_ref: &str, a_ref: &str, action: Option<&str>, f: &Cochain2<u32>) -> String {
    let mut out = format!("extension\nG {g_ref}\nA {a_ref}\n");
    if let Some(act) = action {
        let _ = writeln!(out, "action {act}");
    }
    out.push_str(&format_cochain2(f));
    out
}

/// `N`, `y` and the seed of a residuosity instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QrSpec {
    pub modulus: u64,
    pub y: u64,
    pub seed: u64,
}

impl QrSpec {
    /// Accepts `qr N=<int> y=<int> seed=<hex>` as well as the short forms
    /// `N=15,y=4` and `N=15 y=4` (seed defaulting to 0).
    pub fn parse(s: &str) -> Result<Self, IoError> {
        let s = s.trim();
        let s = s.strip_prefix("qr").unwrap_or(s);
        let (mut n, mut y, mut seed) = (None, None, 0u64);
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let (k, v) = tok.split_once('=').ok_or_else(|| perr(1, format!("expected key=value, got `{tok}`")))?;
            match k {
                "N" | "n" => n = Some(parse_u64_any(v, 1)?),
                "y" => y = Some(parse_u64_any(v, 1)?),
                "seed" => {
                    let v = v.strip_prefix("0x").unwrap_or(v);
                    seed = u64::from_str_radix(v, 16).map_err(|_| perr(1, format!("bad hex seed `{v}`")))?;
                }
                _ => return Err(perr(1, format!("unknown key `{k}`"))),
            }
        }
        Ok(QrSpec { modulus: n.ok_or_else(|| perr(1, "missing N"))?, y: y.ok_or_else(|| perr(1, "missing y"))?, seed })
    }
}

impl std::fmt::Display for QrSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "qr N={} y={} seed={:x}", self.modulus, self.y, self.seed)
    }
}

/// `decomp: d1 d2 …` followed by one `basis:` line of hex handles.
pub fn format_decomposition(dec: &AbelianDecomposition) -> String {
    let ds: Vec<String> = dec.invariants().iter().map(|d| d.to_string()).collect();
    let hs: Vec<String> = dec.basis().iter().map(|h| h.to_hex()).collect();
    format!("decomp: {}\nbasis: {}\n", ds.join(" "), hs.join(" ")).replace(": \n", ":\n")
}

/// Verdict line plus certificate block.
pub fn format_verdict_table(v: &EquivalenceVerdict<u32>) -> String {
    format_verdict(v, format_cochain1, |a| a.to_string())
}

pub fn format_verdict_handles(v: &EquivalenceVerdict<Handle>) -> String {
    format_verdict(v, format_cochain1_handles, |a| a.to_hex())
}

fn format_verdict<T>(
    v: &EquivalenceVerdict<T>,
    cochain: impl Fn(&Cochain1<T>) -> String,
    elem: impl Fn(&T) -> String,
) -> String {
    let mut out = format!("verdict: {}\n", if v.equivalent { "equivalent" } else { "inequivalent" });
    match &v.certificate {
        Certificate::Coboundary { witness } => {
            out.push_str("witness: coboundary\n");
            out.push_str(&cochain(witness));
        }
        Certificate::Roots { d, quotients, roots } => {
            out.push_str("witness: roots\n");
            for i in 0..d.len() {
                let _ = writeln!(out, "root {i} d={} quotient={} root={}", d[i], elem(&quotients[i]), elem(&roots[i]));
            }
        }
        Certificate::NonMember { level, residue } => {
            let _ = writeln!(out, "certificate: non-member level={level}");
            let _ = writeln!(out, "{residue}");
        }
        Certificate::SizeGap { b2, extended } => {
            let _ = writeln!(out, "certificate: size-gap |B2|={b2} |B2+f|={extended}");
        }
        Certificate::CommutatorMismatch { i, j } => {
            let _ = writeln!(out, "certificate: commutator-mismatch i={i} j={j}");
        }
        Certificate::NoRoot { i, d } => {
            let _ = writeln!(out, "certificate: no-root i={i} d={d}");
        }
    }
    out
}
