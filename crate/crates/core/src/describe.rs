//! Self-describing JSON group files, tagged by `"kind"`.
//!
//! ```json
//! {"name": "heisenberg", "kind": "nilpotent", "dim": 3, "brackets": {"1,2": [0, 0, 1]}}
//! {"name": "q-inversion", "kind": "lbf", "d": 1,
//!  "finite": {"permutations": [[2, 1]]}, "rep": {"g1": [[-1]]}}
//! ```
//!
//! A file holds one entry or an array of entries. Rationals are JSON
//! integers or strings `"p/q"`; bracket and generator indices are 1-based.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::abelian::AbelianGroup;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, Matrix, Rational};
use crate::finite::{catalog, FiniteGroup};
use crate::models::{FiniteModel, LbfModel, MalcevModel, TbuModel};
use crate::nilpotent::LieAlgebra;

/// Environment variable overriding the bundled corpus directory.
pub const CORPUS_ENV: &str = "COMMWIDTH_CORPUS";

#[derive(Clone, Debug)]
pub enum Group {
    Finite(FiniteModel),
    Abelian(AbelianGroup),
    Malcev(MalcevModel),
    Lbf(LbfModel),
    Tbu(TbuModel),
}

impl Group {
    pub fn kind(&self) -> &'static str {
        match self {
            Group::Finite(_) => "finite",
            Group::Abelian(_) => "abelian",
            Group::Malcev(_) => "nilpotent",
            Group::Lbf(_) => "lbf",
            Group::Tbu(_) => "tbu",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub group: Group,
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("`{what}` must be a nonnegative integer")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::Parse(format!("`{what}` must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("`{what}` must be an array")))
}

pub fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(crate::exact::rat(i)),
            None => Err(Error::Parse(format!("non-integer number {n}; write fractions as \"p/q\""))),
        },
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

pub fn vector(v: &Value, len: usize) -> Result<Vec<Rational>> {
    let items = as_array(v, "vector")?;
    if items.len() != len {
        return Err(Error::DimensionMismatch { expected: len, found: items.len() });
    }
    items.iter().map(rational).collect()
}

pub fn matrix(v: &Value, n: usize) -> Result<Matrix> {
    let rows = as_array(v, "matrix")?;
    if rows.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rows.len() });
    }
    Matrix::from_rows(n, rows.iter().map(|r| vector(r, n)).collect::<Result<_>>()?)
}

fn brackets(v: Option<&Value>, dim: usize) -> Result<LieAlgebra> {
    let mut map = BTreeMap::new();
    if let Some(obj) = v {
        let obj = obj.as_object().ok_or_else(|| Error::Parse("`brackets` must be an object".into()))?;
        for (key, val) in obj {
            let (i, j) = key
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse::<usize>().ok()?, j.trim().parse::<usize>().ok()?)))
                .filter(|&(i, j)| i >= 1 && j >= 1)
                .ok_or_else(|| Error::Parse(format!("bracket key `{key}` must be `i,j` with 1-based indices")))?;
            map.insert((i - 1, j - 1), vector(val, dim)?);
        }
    }
    LieAlgebra::from_brackets(dim, &map)
}

fn permutations(v: &Value) -> Result<Vec<Vec<usize>>> {
    as_array(v, "permutations")?
        .iter()
        .map(|p| {
            as_array(p, "permutation")?.iter().map(|x| as_usize(x, "permutation entry")).collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// A finite group from `named`, `permutations` or `table` (0-based).
fn finite_group(obj: &Value) -> Result<(FiniteGroup, Option<Vec<Vec<usize>>>)> {
    if let Some(name) = obj.get("named") {
        let name = as_str(name, "named")?;
        let g = catalog::named(name).ok_or_else(|| Error::Parse(format!("unknown named group `{name}`")))?;
        return Ok((g, None));
    }
    if let Some(p) = obj.get("permutations") {
        let perms = permutations(p)?;
        return Ok((FiniteGroup::from_permutations(&perms)?, Some(perms)));
    }
    if let Some(t) = obj.get("table") {
        let rows = as_array(t, "table")?
            .iter()
            .map(|r| as_array(r, "table row")?.iter().map(|x| as_usize(x, "table entry")).collect())
            .collect::<Result<Vec<Vec<usize>>>>()?;
        return Ok((FiniteGroup::from_table(rows)?, None));
    }
    Err(Error::Parse("finite group needs `named`, `permutations` or `table`".into()))
}

/// Parses and validates one entry.
pub fn parse_entry(obj: &Value) -> Result<Entry> {
    let kind = as_str(field(obj, "kind")?, "kind")?;
    let name = match obj.get("name") {
        Some(n) => as_str(n, "name")?.to_string(),
        None => kind.to_string(),
    };
    let group = match kind {
        "finite" => Group::Finite(FiniteModel::new(finite_group(obj)?.0)),
        "abelian" => {
            let blocks = as_array(field(obj, "blocks")?, "blocks")?
                .iter()
                .map(|b| as_str(b, "block"))
                .collect::<Result<Vec<_>>>()?;
            Group::Abelian(AbelianGroup::parse(&blocks)?)
        }
        "nilpotent" => {
            let dim = as_usize(field(obj, "dim")?, "dim")?;
            Group::Malcev(MalcevModel::new(brackets(obj.get("brackets"), dim)?))
        }
        "lbf" => {
            let d = as_usize(field(obj, "d")?, "d")?;
            let fin = field(obj, "finite")?;
            let perms = permutations(field(fin, "permutations")?)?;
            let rep = field(obj, "rep")?;
            let images = (1..=perms.len())
                .map(|i| matrix(field(rep, &format!("g{i}"))?, d))
                .collect::<Result<Vec<_>>>()?;
            Group::Lbf(LbfModel::from_permutations(d, &perms, images)?)
        }
        "tbu" => {
            let weights = as_array(field(obj, "weights")?, "weights")?
                .iter()
                .map(|w| w.as_i64().ok_or_else(|| Error::Parse("weights must be integers".into())))
                .collect::<Result<Vec<_>>>()?;
            let alg = brackets(obj.get("brackets"), weights.len())?;
            Group::Tbu(TbuModel::new(alg, weights)?)
        }
        other => return Err(Error::Parse(format!("unknown kind `{other}`"))),
    };
    Ok(Entry { name, group })
}

/// Parses a file body holding one entry or an array of entries. The error
/// names the entry position and, for JSON syntax errors, the line and column.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    match &value {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, v)| parse_entry(v).map_err(|e| annotate(e, &format!("entry {}", i + 1))))
            .collect(),
        _ => Ok(vec![parse_entry(&value)?]),
    }
}

fn annotate(e: Error, at: &str) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{at}: {m}")),
        Error::Invalid(m) => Error::Invalid(format!("{at}: {m}")),
        other => other,
    }
}

pub fn load_file(path: &Path) -> Result<Vec<Entry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_entries(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// The corpus directory: `$COMMWIDTH_CORPUS` if set, else the bundled one.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os(CORPUS_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"),
    }
}

/// All `*.json` files of a directory in file-name order.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let read = std::fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = read
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn load_corpus(dir: &Path) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for f in corpus_files(dir)? {
        out.extend(load_file(&f)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::GroupModel;

    #[test]
    fn parses_each_kind() {
        let text = r#"[
            {"name": "h3", "kind": "nilpotent", "dim": 3, "brackets": {"1,2": [0, 0, 1]}},
            {"name": "s3", "kind": "finite", "permutations": [[2, 3, 1], [2, 1, 3]]},
            {"name": "a", "kind": "abelian", "blocks": ["Q", "Z/8", "Pruefer(3)"]},
            {"name": "inv", "kind": "lbf", "d": 1, "finite": {"permutations": [[2, 1]]}, "rep": {"g1": [[-1]]}},
            {"name": "axb", "kind": "tbu", "weights": [1]}
        ]"#;
        let entries = parse_entries(text).unwrap();
        let kinds: Vec<&str> = entries.iter().map(|e| e.group.kind()).collect();
        assert_eq!(kinds, ["nilpotent", "finite", "abelian", "lbf", "tbu"]);
        match &entries[0].group {
            Group::Malcev(m) => assert_eq!(m.algebra(), &LieAlgebra::heisenberg()),
            other => panic!("{other:?}"),
        }
        match &entries[3].group {
            Group::Lbf(m) => assert_eq!(m.dim(&m.whole()), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_are_located() {
        let err = parse_entries("{\"kind\": \"nilpotent\",\n \"dim\": }").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let jacobi = r#"{"kind": "nilpotent", "dim": 3, "brackets": {"1,2": [0, 0, 1], "1,3": [1, 0, 0]}}"#;
        assert!(matches!(parse_entries(jacobi), Err(Error::Jacobi(..)) | Err(Error::NotNilpotent)));
        let bad = r#"[{"kind": "finite", "named": "S3"}, {"kind": "mystery"}]"#;
        assert!(parse_entries(bad).unwrap_err().to_string().contains("entry 2"));
    }

    #[test]
    fn bundled_corpus_loads() {
        let entries = load_corpus(&corpus_dir()).unwrap();
        let count = |k: &str| entries.iter().filter(|e| e.group.kind() == k).count();
        assert!(count("finite") >= 15);
        assert!(count("nilpotent") >= 5);
        assert!(count("lbf") >= 5);
        assert!(count("tbu") >= 3);
        for e in &entries {
            if let Group::Finite(m) = &e.group {
                assert!(m.group().order() <= 48, "{}", e.name);
            }
        }
    }
}
