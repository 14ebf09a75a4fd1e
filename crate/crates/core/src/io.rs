//! JSON file formats.
//!
//! All writers emit canonical JSON: object keys sorted, two-space
//! indentation, phases as reduced `"p/q"` strings, bits as `0`/`1`, doubled
//! values as `[plus, minus]`. Readers are strict and report the JSON pointer
//! of the first offending value.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::{Bit, Coefficient, Doubled, Phase};
use crate::cochain::Cochain;
use crate::crt::CrtPentuple;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupFile, Z2Hom};
use crate::invariant::Pd0Triple;

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    let location = location.into();
    Error::Parse { location: if location.is_empty() { "/".into() } else { location }, message: message.into() }
}

/// Deserializes `text`, reporting failures with a JSON pointer.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let loc = pointer(e.path());
        let inner = e.into_inner();
        let message = if inner.is_syntax() || inner.is_eof() {
            format!("{inner}")
        } else {
            inner.to_string()
        };
        parse_error(loc, message)
    })
}

fn from_value<T: DeserializeOwned>(value: &Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value.clone())
        .map_err(|e| parse_error(format!("{prefix}{}", pointer(e.path())), e.into_inner().to_string()))
}

/// Canonical pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("values serialize to JSON");
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values print");
    s.push('\n');
    s
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

pub fn read_group_file(path: &Path) -> Result<FiniteGroup> {
    crate::group::load_group(&read_text(path)?)
}

/// Coefficients with a file representation.
pub trait FileCoefficient: Coefficient + Serialize + DeserializeOwned {
    /// The `denominator` field written for a cochain of this kind.
    fn file_denominator(x: &Cochain<Self>) -> u64;
    /// Checks an entry against the declared denominator.
    fn fits(self, denominator: u64) -> bool;
}

impl FileCoefficient for Bit {
    fn file_denominator(_: &Cochain<Self>) -> u64 {
        2
    }
    fn fits(self, _: u64) -> bool {
        true
    }
}

impl FileCoefficient for Phase {
    fn file_denominator(x: &Cochain<Self>) -> u64 {
        x.denominator_bound()
    }
    fn fits(self, denominator: u64) -> bool {
        denominator.is_multiple_of(self.denominator())
    }
}

/// Resolves group references inside cochain files.
#[derive(Clone, Debug, Default)]
pub struct GroupResolver {
    base: Option<PathBuf>,
}

impl GroupResolver {
    /// References are resolved relative to `base` (the directory of the
    /// file being read).
    pub fn relative_to(base: Option<&Path>) -> Self {
        GroupResolver { base: base.map(Path::to_path_buf) }
    }

    fn resolve(&self, value: &Value, location: &str) -> Result<FiniteGroup> {
        match value {
            Value::String(p) => {
                let path = match &self.base {
                    Some(b) if Path::new(p).is_relative() => b.join(p),
                    _ => PathBuf::from(p),
                };
                read_group_file(&path).map_err(|e| match e {
                    Error::Parse { location: l, message } => {
                        parse_error(location, format!("in {}: {message} at {l}", path.display()))
                    }
                    other => other,
                })
            }
            other => from_value::<GroupFile>(other, location)?.into_group(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCochain {
    group: Value,
    degree: usize,
    kind: String,
    denominator: u64,
    entries: Vec<Value>,
}

/// JSON value of a cochain file with the group inlined.
pub fn cochain_to_value<A: FileCoefficient>(x: &Cochain<A>) -> Value {
    json!({
        "group": serde_json::to_value(GroupFile::from_group(x.group())).expect("group serializes"),
        "degree": x.degree(),
        "kind": A::KIND.as_str(),
        "denominator": A::file_denominator(x),
        "entries": serde_json::to_value(x.entries()).expect("entries serialize"),
    })
}

/// Reads a cochain from a JSON value found at `location`.
pub fn cochain_from_value<A: FileCoefficient>(value: &Value, location: &str, groups: &GroupResolver) -> Result<Cochain<A>> {
    let raw: RawCochain = from_value(value, location)?;
    let group = Arc::new(groups.resolve(&raw.group, &format!("{location}/group"))?);
    if raw.kind != A::KIND.as_str() {
        return Err(parse_error(
            format!("{location}/kind"),
            format!("expected kind \"{}\", found \"{}\"", A::KIND.as_str(), raw.kind),
        ));
    }
    if !(1..=crate::cochain::MAX_DEGREE).contains(&raw.degree) {
        return Err(parse_error(format!("{location}/degree"), "degree must be in 1..=4"));
    }
    if raw.denominator == 0 {
        return Err(parse_error(format!("{location}/denominator"), "denominator must be positive"));
    }
    let expected = group.order().pow(raw.degree as u32);
    if raw.entries.len() != expected {
        return Err(parse_error(
            format!("{location}/entries"),
            format!("expected {expected} entries, found {}", raw.entries.len()),
        ));
    }
    let mut entries = Vec::with_capacity(expected);
    for (i, v) in raw.entries.iter().enumerate() {
        let loc = format!("{location}/entries/{i}");
        let e: Doubled<A> = from_value(v, &loc)?;
        if !e.plus.fits(raw.denominator) || !e.minus.fits(raw.denominator) {
            return Err(parse_error(loc, format!("entry denominator does not divide {}", raw.denominator)));
        }
        entries.push(e);
    }
    Cochain::from_entries(&group, raw.degree, entries)
}

pub fn load_cochain<A: FileCoefficient>(text: &str, base: Option<&Path>) -> Result<Cochain<A>> {
    let v: Value = parse_json(text)?;
    cochain_from_value(&v, "", &GroupResolver::relative_to(base))
}

pub fn serialize_cochain<A: FileCoefficient>(x: &Cochain<A>) -> String {
    to_canonical_json(&cochain_to_value(x))
}

fn hom_from_value(value: &Value, location: &str, group: &FiniteGroup) -> Result<Z2Hom> {
    let bits: Vec<Bit> = from_value(value, location)?;
    Z2Hom::new(group, bits).map_err(|e| parse_error(location, e.to_string()))
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>, location: &str) -> Result<()> {
    if a != b {
        return Err(parse_error(location, "cochains are defined on different groups"));
    }
    Ok(())
}

fn object<'a>(v: &'a Value, keys: &[&str]) -> Result<&'a serde_json::Map<String, Value>> {
    let map = v.as_object().ok_or_else(|| parse_error("/", "expected an object"))?;
    for k in map.keys() {
        if !keys.contains(&k.as_str()) {
            return Err(parse_error(format!("/{k}"), format!("unknown field `{k}`")));
        }
    }
    for k in keys {
        if !map.contains_key(*k) {
            return Err(parse_error("/", format!("missing field `{k}`")));
        }
    }
    Ok(map)
}

pub fn triple_to_value(t: &Pd0Triple) -> Value {
    json!({
        "a": serde_json::to_value(t.a.values()).expect("bits serialize"),
        "kappa": cochain_to_value(&t.kappa),
        "c": cochain_to_value(&t.c),
    })
}

pub fn triple_from_value(v: &Value, groups: &GroupResolver) -> Result<Pd0Triple> {
    let map = object(v, &["a", "kappa", "c"])?;
    let kappa: Cochain<Bit> = cochain_from_value(&map["kappa"], "/kappa", groups)?;
    let c: Cochain<Phase> = cochain_from_value(&map["c"], "/c", groups)?;
    same_group(kappa.group(), c.group(), "/c/group")?;
    let a = hom_from_value(&map["a"], "/a", kappa.group())?;
    Pd0Triple::new(a, kappa, c).map_err(|e| parse_error("/", e.to_string()))
}

pub fn load_triple(text: &str, base: Option<&Path>) -> Result<Pd0Triple> {
    triple_from_value(&parse_json(text)?, &GroupResolver::relative_to(base))
}

pub fn serialize_triple(t: &Pd0Triple) -> String {
    to_canonical_json(&triple_to_value(t))
}

pub fn pentuple_to_value(p: &CrtPentuple) -> Value {
    json!({
        "a": serde_json::to_value(p.a.values()).expect("bits serialize"),
        "b": serde_json::to_value(&p.b).expect("bits serialize"),
        "kappaR": cochain_to_value(&p.kappa_r),
        "kappaL": cochain_to_value(&p.kappa_l),
        "cR": cochain_to_value(&p.c_r),
    })
}

pub fn pentuple_from_value(v: &Value, groups: &GroupResolver) -> Result<CrtPentuple> {
    let map = object(v, &["a", "b", "kappaR", "kappaL", "cR"])?;
    let kappa_r: Cochain<Bit> = cochain_from_value(&map["kappaR"], "/kappaR", groups)?;
    let kappa_l: Cochain<Bit> = cochain_from_value(&map["kappaL"], "/kappaL", groups)?;
    let c_r: Cochain<Phase> = cochain_from_value(&map["cR"], "/cR", groups)?;
    same_group(kappa_r.group(), kappa_l.group(), "/kappaL/group")?;
    same_group(kappa_r.group(), c_r.group(), "/cR/group")?;
    let a = hom_from_value(&map["a"], "/a", kappa_r.group())?;
    let b: Vec<Bit> = from_value(&map["b"], "/b")?;
    CrtPentuple::new(a, b, kappa_r, kappa_l, c_r).map_err(|e| parse_error("/", e.to_string()))
}

pub fn load_pentuple(text: &str, base: Option<&Path>) -> Result<CrtPentuple> {
    pentuple_from_value(&parse_json(text)?, &GroupResolver::relative_to(base))
}

pub fn serialize_pentuple(p: &CrtPentuple) -> String {
    to_canonical_json(&pentuple_to_value(p))
}
