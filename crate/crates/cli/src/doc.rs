//! JSON documents: posets, symmetry structures, names and formulas.
//!
//! Every document parses from a `serde_json::Value` so that schema errors can
//! name the offending field, and serializes back to a canonical value: keys
//! sorted, explicit posets in canonical element order with their covering
//! pairs, `version` at the top level.

use std::collections::{BTreeMap, BTreeSet};

use chaincond::completion::BoolAlgebra;
use chaincond::constructions::{
    add_poset, chain, col_poset, flat_poset, lottery, pair_forcing, product_drop_top, sequences, tree_from_sequences,
    tree_iteration, tree_poset, Lottery,
};
use chaincond::names::{Formula, HfSet, PName};
use chaincond::symmetry::{automorphism_group, Perm, PermGroup, SupportIdeal, SymmetryStructure};
use chaincond::FinitePoset;
use serde_json::{json, Map, Value};
use thiserror::Error;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{path}: {source}")]
    Build {
        path: String,
        #[source]
        source: chaincond::Error,
    },
}

type Result<T> = std::result::Result<T, DocError>;

fn schema<T>(path: &str, msg: impl Into<String>) -> Result<T> {
    Err(DocError::Schema {
        path: path.to_string(),
        msg: msg.into(),
    })
}

fn build<T>(path: &str, r: chaincond::Result<T>) -> Result<T> {
    r.map_err(|source| DocError::Build {
        path: path.to_string(),
        source,
    })
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| DocError::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

/// Canonical text of a value: sorted keys, two-space indent, trailing newline.
pub fn to_canonical_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

/// Field accessor that remembers where it is and rejects unknown keys.
struct Obj<'a> {
    path: String,
    map: &'a Map<String, Value>,
    seen: BTreeSet<&'static str>,
}

impl<'a> Obj<'a> {
    fn new(path: &str, v: &'a Value) -> Result<Self> {
        match v {
            Value::Object(map) => Ok(Obj {
                path: path.to_string(),
                map,
                seen: BTreeSet::new(),
            }),
            _ => schema(path, "expected an object"),
        }
    }

    fn at(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn opt(&mut self, key: &'static str) -> Option<&'a Value> {
        self.seen.insert(key);
        self.map.get(key)
    }

    fn req(&mut self, key: &'static str) -> Result<&'a Value> {
        match self.opt(key) {
            Some(v) => Ok(v),
            None => schema(&self.path, format!("missing field `{key}`")),
        }
    }

    fn usize(&mut self, key: &'static str) -> Result<usize> {
        let path = self.at(key);
        as_usize(&path, self.req(key)?)
    }

    fn string(&mut self, key: &'static str) -> Result<String> {
        let path = self.at(key);
        as_string(&path, self.req(key)?)
    }

    fn bool_or(&mut self, key: &'static str, default: bool) -> Result<bool> {
        let path = self.at(key);
        match self.opt(key) {
            None => Ok(default),
            Some(Value::Bool(b)) => Ok(*b),
            Some(_) => schema(&path, "expected a boolean"),
        }
    }

    fn finish(self) -> Result<()> {
        for k in self.map.keys() {
            if !self.seen.contains(k.as_str()) {
                return schema(&self.path, format!("unknown field `{k}`"));
            }
        }
        Ok(())
    }
}

fn as_usize(path: &str, v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .map_or_else(|| schema(path, "expected a non-negative integer"), Ok)
}

fn as_string(path: &str, v: &Value) -> Result<String> {
    v.as_str()
        .map(str::to_string)
        .map_or_else(|| schema(path, "expected a string"), Ok)
}

fn as_array<'a>(path: &str, v: &'a Value) -> Result<&'a [Value]> {
    v.as_array()
        .map(Vec::as_slice)
        .map_or_else(|| schema(path, "expected an array"), Ok)
}

fn usize_list(path: &str, v: &Value) -> Result<Vec<usize>> {
    as_array(path, v)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_usize(&format!("{path}[{i}]"), x))
        .collect()
}

fn string_list(path: &str, v: &Value) -> Result<Vec<String>> {
    as_array(path, v)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_string(&format!("{path}[{i}]"), x))
        .collect()
}

fn check_version(path: &str, v: Option<&Value>) -> Result<()> {
    match v {
        None => Ok(()),
        Some(x) if x.as_u64() == Some(FORMAT_VERSION) => Ok(()),
        Some(_) => schema(&format!("{path}.version"), format!("unsupported version (expected {FORMAT_VERSION})")),
    }
}

// ---------------------------------------------------------------- posets

/// Tree shapes accepted by tree-valued arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSpec {
    Full { arity: usize, height: usize },
    Sequences(Vec<Vec<usize>>),
}

impl TreeSpec {
    fn parse(path: &str, v: &Value) -> Result<Self> {
        if v.is_array() {
            let seqs = as_array(path, v)?
                .iter()
                .enumerate()
                .map(|(i, s)| usize_list(&format!("{path}[{i}]"), s))
                .collect::<Result<_>>()?;
            return Ok(TreeSpec::Sequences(seqs));
        }
        let mut o = Obj::new(path, v)?;
        let t = TreeSpec::Full {
            arity: o.usize("arity")?,
            height: o.usize("height")?,
        };
        o.finish()?;
        Ok(t)
    }

    fn sequences(&self) -> Vec<Vec<usize>> {
        match self {
            TreeSpec::Full { arity, height } => sequences(*arity, *height),
            TreeSpec::Sequences(s) => s.clone(),
        }
    }

    fn to_value(&self) -> Value {
        match self {
            TreeSpec::Full { arity, height } => json!({"arity": arity, "height": height}),
            TreeSpec::Sequences(s) => json!(s),
        }
    }
}

/// A poset expression: explicit, or one of the constructors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosetExpr {
    /// Stored in canonical form: built order, covering pairs.
    Explicit {
        elements: Vec<String>,
        le: Vec<(String, String)>,
        top: String,
    },
    Flat { top: String, atoms: Vec<String> },
    Chain { length: usize },
    Tree(TreeSpec),
    Col { k: usize, values: usize },
    PairForcing { k: usize, values: usize, tree: TreeSpec },
    ProductDropTop { q: Box<PosetExpr>, c: Box<PosetExpr> },
    LotterySum { parts: Vec<PosetExpr>, headless: bool },
    Add { sites: usize, lambda: usize, bound: usize },
    TreeIteration { arity: usize, height: usize, slot: Box<PosetExpr> },
    Completion(Box<PosetExpr>),
}

pub const CONSTRUCTORS: [&str; 11] = [
    "flat",
    "chain",
    "tree",
    "col",
    "pair_forcing",
    "product_drop_top",
    "lottery_sum",
    "add",
    "tree_iteration",
    "completion",
    "explicit",
];

/// A built poset, with the layout of a top-level lottery or Cohen-style
/// constructor kept for structure bindings.
#[derive(Debug, Clone)]
pub struct BuiltPoset {
    pub poset: FinitePoset,
    pub lottery: Option<Lottery>,
    pub parts: Vec<FinitePoset>,
    pub add: Option<(usize, usize, usize)>,
}

/// Elements sorted by corank, then id; the top comes first.
pub fn canonical_order(p: &FinitePoset) -> FinitePoset {
    let corank = p.corank();
    let mut order: Vec<usize> = p.elements().collect();
    order.sort_by(|&a, &b| (corank[a], p.id(a)).cmp(&(corank[b], p.id(b))));
    let mut perm = vec![0; p.len()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    p.permuted(&perm)
}

impl PosetExpr {
    pub fn parse(path: &str, v: &Value) -> Result<Self> {
        let map = match v {
            Value::Object(m) => m,
            _ => return schema(path, "expected a poset object"),
        };
        if map.contains_key("elements") {
            return Self::parse_explicit(path, v);
        }
        let keys: Vec<&String> = map.keys().filter(|k| k.as_str() != "version").collect();
        let [key] = keys.as_slice() else {
            return schema(
                path,
                format!("expected explicit `elements`/`le`/`top` or exactly one of {}", CONSTRUCTORS.join(", ")),
            );
        };
        let p = format!("{path}.{key}");
        let arg = &map[key.as_str()];
        let expr = match key.as_str() {
            "explicit" => Self::parse_explicit(&p, arg)?,
            "flat" => {
                let mut o = Obj::new(&p, arg)?;
                let top = o.string("top")?;
                let atoms = string_list(&o.at("atoms"), o.req("atoms")?)?;
                o.finish()?;
                PosetExpr::Flat { top, atoms }
            }
            "chain" => {
                let mut o = Obj::new(&p, arg)?;
                let length = o.usize("length")?;
                o.finish()?;
                PosetExpr::Chain { length }
            }
            "tree" => PosetExpr::Tree(TreeSpec::parse(&p, arg)?),
            "col" => {
                let mut o = Obj::new(&p, arg)?;
                let e = PosetExpr::Col {
                    k: o.usize("k")?,
                    values: o.usize("values")?,
                };
                o.finish()?;
                e
            }
            "pair_forcing" => {
                let mut o = Obj::new(&p, arg)?;
                let k = o.usize("k")?;
                let values = o.usize("values")?;
                let tree = TreeSpec::parse(&o.at("tree"), o.req("tree")?)?;
                o.finish()?;
                PosetExpr::PairForcing { k, values, tree }
            }
            "product_drop_top" => {
                let mut o = Obj::new(&p, arg)?;
                let q = Box::new(Self::parse(&o.at("q"), o.req("q")?)?);
                let c = Box::new(Self::parse(&o.at("c"), o.req("c")?)?);
                o.finish()?;
                PosetExpr::ProductDropTop { q, c }
            }
            "lottery_sum" => {
                let mut o = Obj::new(&p, arg)?;
                let pp = o.at("parts");
                let parts = as_array(&pp, o.req("parts")?)?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| Self::parse(&format!("{pp}[{i}]"), x))
                    .collect::<Result<Vec<_>>>()?;
                let headless = o.bool_or("headless", false)?;
                o.finish()?;
                PosetExpr::LotterySum { parts, headless }
            }
            "add" => {
                let mut o = Obj::new(&p, arg)?;
                let e = PosetExpr::Add {
                    sites: o.usize("sites")?,
                    lambda: o.usize("lambda")?,
                    bound: o.usize("bound")?,
                };
                o.finish()?;
                e
            }
            "tree_iteration" => {
                let mut o = Obj::new(&p, arg)?;
                let arity = o.usize("arity")?;
                let height = o.usize("height")?;
                if height == 0 {
                    return schema(&o.at("height"), "height must be at least 1");
                }
                let slot = Box::new(Self::parse(&o.at("slot"), o.req("slot")?)?);
                o.finish()?;
                PosetExpr::TreeIteration { arity, height, slot }
            }
            "completion" => {
                let mut o = Obj::new(&p, arg)?;
                let of = Box::new(Self::parse(&o.at("of"), o.req("of")?)?);
                o.finish()?;
                PosetExpr::Completion(of)
            }
            other => return schema(path, format!("unknown constructor `{other}`")),
        };
        Ok(expr)
    }

    fn parse_explicit(path: &str, v: &Value) -> Result<Self> {
        let mut o = Obj::new(path, v)?;
        o.opt("version");
        let elements = string_list(&o.at("elements"), o.req("elements")?)?;
        let lp = o.at("le");
        let mut pairs = Vec::new();
        for (i, x) in as_array(&lp, o.req("le")?)?.iter().enumerate() {
            let pp = format!("{lp}[{i}]");
            let pair = string_list(&pp, x)?;
            let [a, b] = pair.as_slice() else {
                return schema(&pp, "expected a pair [lower, upper]");
            };
            pairs.push((a.clone(), b.clone()));
        }
        let top = o.string("top")?;
        o.finish()?;
        let poset = build(path, FinitePoset::build(&elements, &pairs, Some(&top)))?;
        Ok(Self::explicit_of(&canonical_order(&poset)))
    }

    /// Explicit form of a poset in its own element order.
    pub fn explicit_of(p: &FinitePoset) -> Self {
        PosetExpr::Explicit {
            elements: p.ids().to_vec(),
            le: p
                .covers()
                .into_iter()
                .map(|(a, b)| (p.id(a).to_string(), p.id(b).to_string()))
                .collect(),
            top: p.id(p.top()).to_string(),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            PosetExpr::Explicit { elements, le, top } => {
                let le: Vec<Value> = le.iter().map(|(a, b)| json!([a, b])).collect();
                json!({"elements": elements, "le": le, "top": top})
            }
            PosetExpr::Flat { top, atoms } => json!({"flat": {"top": top, "atoms": atoms}}),
            PosetExpr::Chain { length } => json!({"chain": {"length": length}}),
            PosetExpr::Tree(t) => json!({"tree": t.to_value()}),
            PosetExpr::Col { k, values } => json!({"col": {"k": k, "values": values}}),
            PosetExpr::PairForcing { k, values, tree } => {
                json!({"pair_forcing": {"k": k, "values": values, "tree": tree.to_value()}})
            }
            PosetExpr::ProductDropTop { q, c } => {
                json!({"product_drop_top": {"q": q.to_value(), "c": c.to_value()}})
            }
            PosetExpr::LotterySum { parts, headless } => {
                let parts: Vec<Value> = parts.iter().map(PosetExpr::to_value).collect();
                json!({"lottery_sum": {"parts": parts, "headless": headless}})
            }
            PosetExpr::Add { sites, lambda, bound } => {
                json!({"add": {"sites": sites, "lambda": lambda, "bound": bound}})
            }
            PosetExpr::TreeIteration { arity, height, slot } => {
                json!({"tree_iteration": {"arity": arity, "height": height, "slot": slot.to_value()}})
            }
            PosetExpr::Completion(of) => json!({"completion": {"of": of.to_value()}}),
        }
    }

    pub fn build(&self, path: &str) -> Result<BuiltPoset> {
        let plain = |poset: FinitePoset| BuiltPoset {
            poset,
            lottery: None,
            parts: Vec::new(),
            add: None,
        };
        Ok(match self {
            PosetExpr::Explicit { elements, le, top } => {
                plain(build(path, FinitePoset::build(elements, le, Some(top)))?)
            }
            PosetExpr::Flat { top, atoms } => {
                let atoms: Vec<&str> = atoms.iter().map(String::as_str).collect();
                plain(build(path, flat_poset(top, &atoms))?)
            }
            PosetExpr::Chain { length } => {
                if *length == 0 {
                    return schema(path, "chain length must be at least 1");
                }
                plain(build(path, chain(*length))?)
            }
            PosetExpr::Tree(TreeSpec::Full { arity, height }) => {
                if *height == 0 {
                    return schema(path, "tree height must be at least 1");
                }
                plain(build(path, tree_poset(*arity, *height))?)
            }
            PosetExpr::Tree(TreeSpec::Sequences(s)) => plain(build(path, tree_from_sequences(s))?),
            PosetExpr::Col { k, values } => plain(build(path, col_poset(*k, *values))?),
            PosetExpr::PairForcing { k, values, tree } => {
                plain(build(path, pair_forcing(*k, *values, &tree.sequences()))?)
            }
            PosetExpr::ProductDropTop { q, c } => {
                let q = q.build(&format!("{path}.q"))?.poset;
                let c = c.build(&format!("{path}.c"))?.poset;
                plain(build(path, product_drop_top(&q, &c))?)
            }
            PosetExpr::LotterySum { parts, headless } => {
                let parts = parts
                    .iter()
                    .enumerate()
                    .map(|(i, x)| x.build(&format!("{path}.parts[{i}]")).map(|b| b.poset))
                    .collect::<Result<Vec<_>>>()?;
                let l = build(path, lottery(&parts, *headless))?;
                BuiltPoset {
                    poset: l.poset.clone(),
                    lottery: Some(l),
                    parts,
                    add: None,
                }
            }
            PosetExpr::Add { sites, lambda, bound } => BuiltPoset {
                poset: build(path, add_poset(*sites, *lambda, *bound))?,
                lottery: None,
                parts: Vec::new(),
                add: Some((*sites, *lambda, *bound)),
            },
            PosetExpr::TreeIteration { arity, height, slot } => {
                let b = slot.build(&format!("{path}.slot"))?.poset;
                plain(build(path, tree_iteration(*arity, *height, &b))?.poset)
            }
            PosetExpr::Completion(of) => {
                let p = of.build(&format!("{path}.of"))?.poset;
                let b = build(path, BoolAlgebra::regular_open_completion(&p))?;
                plain(build(path, b.forcing_poset())?.0)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetDocument {
    pub expr: PosetExpr,
}

impl PosetDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_value(&parse_json(text)?)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        check_version("$", v.get("version"))?;
        Ok(PosetDocument {
            expr: PosetExpr::parse("$", v)?,
        })
    }

    /// Explicit document for a poset, in canonical element order.
    pub fn from_poset(p: &FinitePoset) -> Self {
        PosetDocument {
            expr: PosetExpr::explicit_of(&canonical_order(p)),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = self.expr.to_value();
        v.as_object_mut()
            .expect("poset expressions are objects")
            .insert("version".into(), json!(FORMAT_VERSION));
        v
    }

    pub fn to_text(&self) -> String {
        to_canonical_text(&self.to_value())
    }

    pub fn build(&self) -> Result<BuiltPoset> {
        self.expr.build("$")
    }
}

// ------------------------------------------------------------- structures

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    /// Every element is its own support point.
    Elements,
    /// Supports are the summands of a top-level `lottery_sum`.
    Summands,
    /// Supports are the columns of a top-level `add`.
    Columns,
}

impl Binding {
    fn name(self) -> &'static str {
        match self {
            Binding::Elements => "elements",
            Binding::Summands => "summands",
            Binding::Columns => "columns",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Aut,
    Trivial,
    Symmetric,
    Generators(Vec<Vec<usize>>),
    PerSummand(Vec<GroupSpec>),
}

impl GroupSpec {
    fn parse(path: &str, v: &Value, allow_nested: bool) -> Result<Self> {
        match v {
            Value::String(s) => match s.as_str() {
                "aut" => Ok(GroupSpec::Aut),
                "trivial" => Ok(GroupSpec::Trivial),
                "symmetric" => Ok(GroupSpec::Symmetric),
                _ => schema(path, format!("unknown group `{s}` (expected aut, trivial, symmetric)")),
            },
            Value::Object(m) if m.contains_key("per_summand") && allow_nested => {
                let mut o = Obj::new(path, v)?;
                let pp = o.at("per_summand");
                let specs = as_array(&pp, o.req("per_summand")?)?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| GroupSpec::parse(&format!("{pp}[{i}]"), x, false))
                    .collect::<Result<Vec<_>>>()?;
                o.finish()?;
                Ok(GroupSpec::PerSummand(specs))
            }
            Value::Object(_) => {
                let mut o = Obj::new(path, v)?;
                let gp = o.at("generators");
                let gens = as_array(&gp, o.req("generators")?)?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| usize_list(&format!("{gp}[{i}]"), x))
                    .collect::<Result<Vec<_>>>()?;
                o.finish()?;
                Ok(GroupSpec::Generators(gens))
            }
            _ => schema(path, "expected a group name or an object"),
        }
    }

    fn to_value(&self) -> Value {
        match self {
            GroupSpec::Aut => json!("aut"),
            GroupSpec::Trivial => json!("trivial"),
            GroupSpec::Symmetric => json!("symmetric"),
            GroupSpec::Generators(g) => json!({"generators": g}),
            GroupSpec::PerSummand(s) => json!({"per_summand": s.iter().map(GroupSpec::to_value).collect::<Vec<_>>()}),
        }
    }

    /// The group on `degree` points; `poset` is used for `aut`.
    fn realize(&self, path: &str, degree: usize, poset: Option<&FinitePoset>) -> Result<PermGroup> {
        match self {
            GroupSpec::Aut => match poset {
                Some(p) => build(path, automorphism_group(p)),
                None => schema(path, "`aut` is not available here"),
            },
            GroupSpec::Trivial => Ok(PermGroup::trivial(degree)),
            GroupSpec::Symmetric => build(path, PermGroup::symmetric(degree)),
            GroupSpec::Generators(gens) => {
                let mut perms = Vec::new();
                for (i, g) in gens.iter().enumerate() {
                    let gp = format!("{path}.generators[{i}]");
                    if g.len() != degree {
                        return schema(&gp, format!("expected a permutation of {degree} points"));
                    }
                    perms.push(build(&gp, Perm::new(g.clone()))?);
                }
                build(path, PermGroup::generate(degree, perms))
            }
            GroupSpec::PerSummand(_) => schema(path, "`per_summand` needs the summands binding"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealSpec {
    Full,
    Trivial,
    Bounded { k: usize, union_closed: bool },
    Family { family: Vec<Vec<usize>>, union_closed: bool },
}

impl IdealSpec {
    fn parse(path: &str, v: &Value) -> Result<Self> {
        match v {
            Value::String(s) if s == "full" => Ok(IdealSpec::Full),
            Value::String(s) if s == "trivial" => Ok(IdealSpec::Trivial),
            Value::Object(m) if m.contains_key("bounded") => {
                let mut o = Obj::new(path, v)?;
                let k = o.usize("bounded")?;
                let union_closed = o.bool_or("union_closed", false)?;
                o.finish()?;
                Ok(IdealSpec::Bounded { k, union_closed })
            }
            Value::Object(_) => {
                let mut o = Obj::new(path, v)?;
                let fp = o.at("family");
                let family = as_array(&fp, o.req("family")?)?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| usize_list(&format!("{fp}[{i}]"), x))
                    .collect::<Result<Vec<_>>>()?;
                let union_closed = o.bool_or("union_closed", false)?;
                o.finish()?;
                Ok(IdealSpec::Family { family, union_closed })
            }
            _ => schema(path, "expected \"full\", \"trivial\", {\"bounded\": k} or {\"family\": [...]}"),
        }
    }

    fn to_value(&self) -> Value {
        match self {
            IdealSpec::Full => json!("full"),
            IdealSpec::Trivial => json!("trivial"),
            IdealSpec::Bounded { k, union_closed } => json!({"bounded": k, "union_closed": union_closed}),
            IdealSpec::Family { family, union_closed } => json!({"family": family, "union_closed": union_closed}),
        }
    }

    fn realize(&self, path: &str, base: usize) -> Result<SupportIdeal> {
        let (ideal, uc) = match self {
            IdealSpec::Full => (SupportIdeal::full(base), false),
            IdealSpec::Trivial => (SupportIdeal::trivial(base), false),
            IdealSpec::Bounded { k, union_closed } => (SupportIdeal::bounded(base, *k), *union_closed),
            IdealSpec::Family { family, union_closed } => {
                (build(path, SupportIdeal::from_family(base, family.clone()))?, *union_closed)
            }
        };
        Ok(if uc { ideal.union_closed() } else { ideal })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureDocument {
    pub support: Binding,
    pub group: GroupSpec,
    pub ideal: IdealSpec,
    pub include_trivial: bool,
}

impl StructureDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_value(&parse_json(text)?)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let mut o = Obj::new("$", v)?;
        check_version("$", o.opt("version"))?;
        let support = match o.opt("support") {
            None => Binding::Elements,
            Some(Value::String(s)) => match s.as_str() {
                "elements" => Binding::Elements,
                "summands" => Binding::Summands,
                "columns" => Binding::Columns,
                _ => return schema("$.support", format!("unknown support `{s}` (expected elements, summands, columns)")),
            },
            Some(_) => return schema("$.support", "expected a string"),
        };
        let group = GroupSpec::parse("$.group", o.req("group")?, support == Binding::Summands)?;
        let ideal = IdealSpec::parse("$.ideal", o.req("ideal")?)?;
        let include_trivial = o.bool_or("include_trivial", true)?;
        o.finish()?;
        Ok(StructureDocument {
            support,
            group,
            ideal,
            include_trivial,
        })
    }

    pub fn to_value(&self) -> Value {
        json!({
            "version": FORMAT_VERSION,
            "support": self.support.name(),
            "group": self.group.to_value(),
            "ideal": self.ideal.to_value(),
            "include_trivial": self.include_trivial,
        })
    }

    pub fn to_text(&self) -> String {
        to_canonical_text(&self.to_value())
    }

    /// Binds the structure to a built poset and checks normality.
    pub fn realize(&self, built: &BuiltPoset) -> Result<SymmetryStructure> {
        let s = match self.support {
            Binding::Elements => {
                let n = built.poset.len();
                let g = self.group.realize("$.group", n, Some(&built.poset))?;
                let ideal = self.ideal.realize("$.ideal", n)?;
                build("$", SymmetryStructure::on_elements(built.poset.clone(), g, ideal))?
            }
            Binding::Summands => {
                let Some(l) = &built.lottery else {
                    return schema("$.support", "`summands` needs a poset built by lottery_sum");
                };
                let ideal = self.ideal.realize("$.ideal", l.blocks.len())?;
                match &self.group {
                    GroupSpec::PerSummand(specs) => {
                        if specs.len() != built.parts.len() {
                            return schema("$.group.per_summand", format!("expected {} entries", built.parts.len()));
                        }
                        let groups = specs
                            .iter()
                            .zip(&built.parts)
                            .enumerate()
                            .map(|(i, (g, part))| g.realize(&format!("$.group.per_summand[{i}]"), part.len(), Some(part)))
                            .collect::<Result<Vec<_>>>()?;
                        build("$", SymmetryStructure::lottery(l, &groups, ideal))?
                    }
                    GroupSpec::Aut => {
                        let groups = built
                            .parts
                            .iter()
                            .map(|part| build("$.group", automorphism_group(part)))
                            .collect::<Result<Vec<_>>>()?;
                        build("$", SymmetryStructure::lottery(l, &groups, ideal))?
                    }
                    spec => {
                        let g = spec.realize("$.group", l.poset.len(), None)?;
                        build("$", SymmetryStructure::new(l.poset.clone(), g, l.blocks.clone(), ideal, None))?
                    }
                }
            }
            Binding::Columns => {
                let Some((sites, lambda, bound)) = built.add else {
                    return schema("$.support", "`columns` needs a poset built by add");
                };
                let site_group = self.group.realize("$.group", sites, None)?;
                let ideal = self.ideal.realize("$.ideal", sites * lambda)?;
                build("$", SymmetryStructure::add(sites, lambda, bound, &site_group, ideal))?
            }
        };
        let audit = s.normality_audit();
        if let Some(v) = audit.violations.first() {
            return schema(
                "$.ideal",
                format!("normality fails: support {:?} under {:?}: {}", v.support, v.perm.images(), v.reason),
            );
        }
        Ok(s)
    }
}

// ------------------------------------------------------------------ names

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HfExpr {
    Ordinal(usize),
    Set(Vec<HfExpr>),
    Pair(Box<HfExpr>, Box<HfExpr>),
}

impl HfExpr {
    fn parse(path: &str, v: &Value) -> Result<Self> {
        if let Some(n) = v.as_u64() {
            return Ok(HfExpr::Ordinal(n as usize));
        }
        let map = match v {
            Value::Object(m) if m.len() == 1 => m,
            _ => return schema(path, "expected an ordinal, {\"set\": [...]} or {\"pair\": [a, b]}"),
        };
        let (k, arg) = map.iter().next().expect("one key");
        let p = format!("{path}.{k}");
        let items = as_array(&p, arg)?
            .iter()
            .enumerate()
            .map(|(i, x)| HfExpr::parse(&format!("{p}[{i}]"), x))
            .collect::<Result<Vec<_>>>()?;
        match k.as_str() {
            "set" => Ok(HfExpr::Set(items)),
            "pair" => match <[HfExpr; 2]>::try_from(items) {
                Ok([a, b]) => Ok(HfExpr::Pair(Box::new(a), Box::new(b))),
                Err(_) => schema(&p, "expected exactly two members"),
            },
            _ => schema(path, format!("unknown set form `{k}`")),
        }
    }

    fn to_value(&self) -> Value {
        match self {
            HfExpr::Ordinal(n) => json!(n),
            HfExpr::Set(xs) => json!({"set": xs.iter().map(HfExpr::to_value).collect::<Vec<_>>()}),
            HfExpr::Pair(a, b) => json!({"pair": [a.to_value(), b.to_value()]}),
        }
    }

    pub fn value(&self) -> HfSet {
        match self {
            HfExpr::Ordinal(n) => HfSet::ordinal(*n),
            HfExpr::Set(xs) => HfSet::new(xs.iter().map(HfExpr::value).collect()),
            HfExpr::Pair(a, b) => HfSet::kuratowski(a.value(), b.value()),
        }
    }
}

/// A condition given by element id or canonical index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CondRef {
    Id(String),
    Index(usize),
}

impl CondRef {
    fn parse(path: &str, v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Ok(CondRef::Id(s.clone())),
            _ => as_usize(path, v).map(CondRef::Index),
        }
    }

    fn to_value(&self) -> Value {
        match self {
            CondRef::Id(s) => json!(s),
            CondRef::Index(i) => json!(i),
        }
    }

    fn resolve(&self, path: &str, p: &FinitePoset) -> Result<usize> {
        match self {
            CondRef::Id(s) => p
                .index_of(s)
                .map_or_else(|| schema(path, format!("unknown condition `{s}`")), Ok),
            CondRef::Index(i) if *i < p.len() => Ok(*i),
            CondRef::Index(i) => schema(path, format!("condition index {i} is out of range")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NameExpr {
    Ref(String),
    Check(HfExpr),
    Pair(HfExpr, HfExpr),
    Entries(Vec<(CondRef, NameExpr)>),
    Bullet(Vec<NameExpr>),
    Function(Vec<(CondRef, HfExpr, HfExpr)>),
}

impl NameExpr {
    pub fn parse(path: &str, v: &Value) -> Result<Self> {
        if let Value::String(s) = v {
            return Ok(NameExpr::Ref(s.clone()));
        }
        let map = match v {
            Value::Object(m) if m.len() == 1 => m,
            _ => {
                return schema(
                    path,
                    "expected a name reference or one of check, pair, entries, bullet, function, ref",
                )
            }
        };
        let (k, arg) = map.iter().next().expect("one key");
        let p = format!("{path}.{k}");
        let list = |arg: &Value| as_array(&p, arg).map(|a| a.to_vec());
        Ok(match k.as_str() {
            "ref" => NameExpr::Ref(as_string(&p, arg)?),
            "check" => NameExpr::Check(HfExpr::parse(&p, arg)?),
            "pair" => {
                let items = list(arg)?;
                let [a, b] = items.as_slice() else {
                    return schema(&p, "expected [u, w]");
                };
                NameExpr::Pair(HfExpr::parse(&format!("{p}[0]"), a)?, HfExpr::parse(&format!("{p}[1]"), b)?)
            }
            "entries" => {
                let mut out = Vec::new();
                for (i, e) in list(arg)?.iter().enumerate() {
                    let ep = format!("{p}[{i}]");
                    let items = as_array(&ep, e)?;
                    let [c, x] = items else {
                        return schema(&ep, "expected [condition, name]");
                    };
                    out.push((CondRef::parse(&format!("{ep}[0]"), c)?, NameExpr::parse(&format!("{ep}[1]"), x)?));
                }
                NameExpr::Entries(out)
            }
            "bullet" => NameExpr::Bullet(
                list(arg)?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| NameExpr::parse(&format!("{p}[{i}]"), x))
                    .collect::<Result<_>>()?,
            ),
            "function" => {
                let mut out = Vec::new();
                for (i, e) in list(arg)?.iter().enumerate() {
                    let ep = format!("{p}[{i}]");
                    let items = as_array(&ep, e)?;
                    let [c, u, w] = items else {
                        return schema(&ep, "expected [condition, input, value]");
                    };
                    out.push((
                        CondRef::parse(&format!("{ep}[0]"), c)?,
                        HfExpr::parse(&format!("{ep}[1]"), u)?,
                        HfExpr::parse(&format!("{ep}[2]"), w)?,
                    ));
                }
                NameExpr::Function(out)
            }
            _ => return schema(path, format!("unknown name form `{k}`")),
        })
    }

    pub fn to_value(&self) -> Value {
        match self {
            NameExpr::Ref(s) => json!(s),
            NameExpr::Check(x) => json!({"check": x.to_value()}),
            NameExpr::Pair(u, w) => json!({"pair": [u.to_value(), w.to_value()]}),
            NameExpr::Entries(es) => {
                let es: Vec<Value> = es.iter().map(|(c, x)| json!([c.to_value(), x.to_value()])).collect();
                json!({"entries": es})
            }
            NameExpr::Bullet(xs) => json!({"bullet": xs.iter().map(NameExpr::to_value).collect::<Vec<_>>()}),
            NameExpr::Function(g) => {
                let g: Vec<Value> = g
                    .iter()
                    .map(|(c, u, w)| json!([c.to_value(), u.to_value(), w.to_value()]))
                    .collect();
                json!({"function": g})
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamesDocument {
    pub names: BTreeMap<String, NameExpr>,
}

/// Names resolved against a poset, in key order.
#[derive(Debug, Clone)]
pub struct ResolvedNames {
    pub names: BTreeMap<String, PName>,
}

impl NamesDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_value(&parse_json(text)?)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let mut o = Obj::new("$", v)?;
        check_version("$", o.opt("version"))?;
        let nv = o.req("names")?;
        let Value::Object(m) = nv else {
            return schema("$.names", "expected an object of named names");
        };
        let mut names = BTreeMap::new();
        for (k, x) in m {
            names.insert(k.clone(), NameExpr::parse(&format!("$.names.{k}"), x)?);
        }
        o.finish()?;
        Ok(NamesDocument { names })
    }

    pub fn to_value(&self) -> Value {
        let names: Map<String, Value> = self.names.iter().map(|(k, x)| (k.clone(), x.to_value())).collect();
        json!({"version": FORMAT_VERSION, "names": names})
    }

    pub fn to_text(&self) -> String {
        to_canonical_text(&self.to_value())
    }

    pub fn resolve(&self, p: &FinitePoset) -> Result<ResolvedNames> {
        let mut done = BTreeMap::new();
        for k in self.names.keys() {
            let mut stack = Vec::new();
            let x = self.resolve_ref(k, p, &mut done, &mut stack)?;
            done.insert(k.clone(), x);
        }
        Ok(ResolvedNames { names: done })
    }

    fn resolve_ref(
        &self,
        key: &str,
        p: &FinitePoset,
        done: &mut BTreeMap<String, PName>,
        stack: &mut Vec<String>,
    ) -> Result<PName> {
        if let Some(x) = done.get(key) {
            return Ok(x.clone());
        }
        let path = format!("$.names.{key}");
        if stack.iter().any(|s| s == key) {
            return schema(&path, format!("cyclic reference through {}", stack.join(" -> ")));
        }
        let Some(e) = self.names.get(key) else {
            return schema(&path, "no such name");
        };
        stack.push(key.to_string());
        let x = self.resolve_expr(&path, e, p, done, stack)?;
        stack.pop();
        done.insert(key.to_string(), x.clone());
        Ok(x)
    }

    fn resolve_expr(
        &self,
        path: &str,
        e: &NameExpr,
        p: &FinitePoset,
        done: &mut BTreeMap<String, PName>,
        stack: &mut Vec<String>,
    ) -> Result<PName> {
        Ok(match e {
            NameExpr::Ref(k) => {
                if !self.names.contains_key(k) {
                    return schema(path, format!("unknown name `{k}`"));
                }
                self.resolve_ref(k, p, done, stack)?
            }
            NameExpr::Check(x) => PName::check(p, &x.value()),
            NameExpr::Pair(u, w) => PName::pair(p, &u.value(), &w.value()),
            NameExpr::Entries(es) => {
                let mut out = Vec::new();
                for (i, (c, x)) in es.iter().enumerate() {
                    let ep = format!("{path}.entries[{i}]");
                    out.push((c.resolve(&ep, p)?, self.resolve_expr(&ep, x, p, done, stack)?));
                }
                PName::new(out)
            }
            NameExpr::Bullet(xs) => {
                let mut out = Vec::new();
                for (i, x) in xs.iter().enumerate() {
                    out.push(self.resolve_expr(&format!("{path}.bullet[{i}]"), x, p, done, stack)?);
                }
                PName::bullet(p, &out)
            }
            NameExpr::Function(g) => {
                let mut graph = Vec::new();
                for (i, (c, u, w)) in g.iter().enumerate() {
                    graph.push((c.resolve(&format!("{path}.function[{i}]"), p)?, u.value(), w.value()));
                }
                PName::function(p, &graph)
            }
        })
    }
}

// --------------------------------------------------------------- formulas

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaExpr {
    Eq(NameExpr, NameExpr),
    Mem(NameExpr, NameExpr),
    Not(Box<FormulaExpr>),
    And(Box<FormulaExpr>, Box<FormulaExpr>),
    Or(Box<FormulaExpr>, Box<FormulaExpr>),
}

impl FormulaExpr {
    pub fn parse(path: &str, v: &Value) -> Result<Self> {
        let map = match v {
            Value::Object(m) if m.len() == 1 => m,
            _ => return schema(path, "expected one of eq, mem, not, and, or"),
        };
        let (k, arg) = map.iter().next().expect("one key");
        let p = format!("{path}.{k}");
        let two = |arg: &Value| -> Result<(Value, Value)> {
            match as_array(&p, arg)? {
                [a, b] => Ok((a.clone(), b.clone())),
                _ => schema(&p, "expected two operands"),
            }
        };
        Ok(match k.as_str() {
            "eq" | "mem" => {
                let (a, b) = two(arg)?;
                let a = NameExpr::parse(&format!("{p}[0]"), &a)?;
                let b = NameExpr::parse(&format!("{p}[1]"), &b)?;
                if k == "eq" {
                    FormulaExpr::Eq(a, b)
                } else {
                    FormulaExpr::Mem(a, b)
                }
            }
            "not" => FormulaExpr::Not(Box::new(FormulaExpr::parse(&p, arg)?)),
            "and" | "or" => {
                let (a, b) = two(arg)?;
                let a = Box::new(FormulaExpr::parse(&format!("{p}[0]"), &a)?);
                let b = Box::new(FormulaExpr::parse(&format!("{p}[1]"), &b)?);
                if k == "and" {
                    FormulaExpr::And(a, b)
                } else {
                    FormulaExpr::Or(a, b)
                }
            }
            _ => return schema(path, format!("unknown connective `{k}`")),
        })
    }

    pub fn to_value(&self) -> Value {
        match self {
            FormulaExpr::Eq(a, b) => json!({"eq": [a.to_value(), b.to_value()]}),
            FormulaExpr::Mem(a, b) => json!({"mem": [a.to_value(), b.to_value()]}),
            FormulaExpr::Not(f) => json!({"not": f.to_value()}),
            FormulaExpr::And(a, b) => json!({"and": [a.to_value(), b.to_value()]}),
            FormulaExpr::Or(a, b) => json!({"or": [a.to_value(), b.to_value()]}),
        }
    }

    pub fn resolve(&self, names: &NamesDocument, p: &FinitePoset) -> Result<Formula> {
        let name = |e: &NameExpr, path: &str| -> Result<PName> {
            let mut done = BTreeMap::new();
            names.resolve_expr(path, e, p, &mut done, &mut Vec::new())
        };
        Ok(match self {
            FormulaExpr::Eq(a, b) => Formula::eq(name(a, "$formula.eq[0]")?, name(b, "$formula.eq[1]")?),
            FormulaExpr::Mem(a, b) => Formula::mem(name(a, "$formula.mem[0]")?, name(b, "$formula.mem[1]")?),
            FormulaExpr::Not(f) => Formula::not(f.resolve(names, p)?),
            FormulaExpr::And(a, b) => Formula::and(a.resolve(names, p)?, b.resolve(names, p)?),
            FormulaExpr::Or(a, b) => Formula::or(a.resolve(names, p)?, b.resolve(names, p)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaDocument {
    pub formula: FormulaExpr,
}

impl FormulaDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_value(&parse_json(text)?)
    }

    /// Accepts `{"version": 1, "formula": φ}` or a bare formula.
    pub fn from_value(v: &Value) -> Result<Self> {
        if v.get("formula").is_some() {
            let mut o = Obj::new("$", v)?;
            check_version("$", o.opt("version"))?;
            let formula = FormulaExpr::parse("$.formula", o.req("formula")?)?;
            o.finish()?;
            return Ok(FormulaDocument { formula });
        }
        Ok(FormulaDocument {
            formula: FormulaExpr::parse("$", v)?,
        })
    }

    pub fn to_value(&self) -> Value {
        json!({"version": FORMAT_VERSION, "formula": self.formula.to_value()})
    }

    pub fn to_text(&self) -> String {
        to_canonical_text(&self.to_value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_constructor_builds_c3() {
        let d = PosetDocument::parse(r#"{"tree": {"arity": 2, "height": 3}}"#).unwrap();
        assert_eq!(d.build().unwrap().poset, tree_poset(2, 3).unwrap());
    }

    #[test]
    fn explicit_missing_top_is_a_schema_error() {
        let e = PosetDocument::parse(r#"{"elements": ["1", "a"], "le": [["a", "1"]]}"#).unwrap_err();
        assert_eq!(e.to_string(), "$: missing field `top`");
    }

    #[test]
    fn json_errors_carry_positions() {
        let e = PosetDocument::parse("{\n  \"tree\": \n}").unwrap_err();
        assert!(matches!(e, DocError::Json { line: 3, .. }), "{e}");
    }

    #[test]
    fn nested_field_paths() {
        let e = PosetDocument::parse(r#"{"lottery_sum": {"parts": [{"chain": {"length": 2}}, {"flat": {"top": "1"}}]}}"#)
            .unwrap_err();
        assert_eq!(e.to_string(), "$.lottery_sum.parts[1].flat: missing field `atoms`");
        let e = PosetDocument::parse(r#"{"tree": {"arity": 2, "height": 3, "depth": 1}}"#).unwrap_err();
        assert_eq!(e.to_string(), "$.tree: unknown field `depth`");
    }

    #[test]
    fn explicit_round_trip_is_canonical() {
        let d = PosetDocument::parse(r#"{"top": "1", "le": [["b","1"],["a","1"],["c","a"],["c","1"]], "elements": ["1","a","b","c"]}"#)
            .unwrap();
        let text = d.to_text();
        let again = PosetDocument::parse(&text).unwrap();
        assert_eq!(again, d);
        assert_eq!(again.to_text(), text);
        // the implied pair c <= 1 is not a cover
        assert!(!text.contains("[\n      \"c\",\n      \"1\"\n    ]"));
    }

    #[test]
    fn names_resolve_and_detect_cycles() {
        let p = tree_poset(2, 2).unwrap();
        let d = NamesDocument::parse(r#"{"names": {"x": {"entries": [["<0>", {"check": 0}]]}, "y": {"bullet": ["x"]}}}"#)
            .unwrap();
        let r = d.resolve(&p).unwrap();
        assert_eq!(r.names["y"].rank(), 2);
        let d = NamesDocument::parse(r#"{"names": {"x": {"bullet": ["y"]}, "y": {"bullet": ["x"]}}}"#).unwrap();
        assert!(d.resolve(&p).unwrap_err().to_string().contains("cyclic"));
    }

    #[test]
    fn structure_round_trip() {
        let s = StructureDocument::parse(r#"{"support": "summands", "group": "aut", "ideal": {"bounded": 1}}"#).unwrap();
        assert_eq!(StructureDocument::parse(&s.to_text()).unwrap(), s);
    }
}
