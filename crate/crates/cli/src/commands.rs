//! Command implementations. Each returns a report whose exit code is 0 when
//! the property holds (or a search exhausts) and 1 when a witness was found;
//! input problems come back as `Err` and exit 2.

use std::path::Path;

use chaincond::chain::{
    cc_abs, cc_rel, counterexample_search, implication_audit, named_predicate, CCReport, CCVariant, Corpus, Scope,
    PREDICATES,
};
use chaincond::completion::BoolAlgebra;
use chaincond::names::{
    atomic_formulas, forces, forces_recursive, is_hereditarily_symmetric, sym_group, verify_symmetry_lemma, Forcer,
    Formula, PName,
};
use chaincond::symmetry::{automorphism_group, SymmetryStructure};
use chaincond::{Check, FinitePoset, Witness};
use serde_json::{json, Value};

use crate::doc::{
    parse_json, BuiltPoset, DocError, FormulaDocument, NamesDocument, PosetDocument, StructureDocument,
};
use crate::report::{Report, EXIT_FAILS, EXIT_HOLDS};
use crate::{
    AnalyzeArgs, AuditArgs, CcArgs, Command, CompleteArgs, CorpusKind, DocKind, FmtArgs, ForceArgs, Output,
    SearchArgs, SymArgs,
};

type Result<T> = std::result::Result<T, String>;

pub fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Analyze(a) => analyze(a).map(Output::Report),
        Command::Cc(a) => cc(a).map(Output::Report),
        Command::Complete(a) => complete(a).map(Output::Report),
        Command::Force(a) => force(a).map(Output::Report),
        Command::Sym(a) => sym(a).map(Output::Report),
        Command::Audit(a) => audit(a).map(Output::Report),
        Command::Search(a) => search(a).map(Output::Report),
        Command::Fmt(a) => fmt(a).map(Output::Raw),
    }
}

fn verdict(holds: bool) -> i32 {
    if holds {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn in_file<T>(path: &Path, r: std::result::Result<T, DocError>) -> Result<T> {
    r.map_err(|e| format!("{}: {e}", path.display()))
}

fn lib<T>(r: chaincond::Result<T>) -> Result<T> {
    r.map_err(|e| e.to_string())
}

fn load_poset(path: &Path) -> Result<BuiltPoset> {
    let d = in_file(path, PosetDocument::parse(&read(path)?))?;
    in_file(path, d.build())
}

fn load_structure(path: &Path, built: &BuiltPoset) -> Result<(StructureDocument, SymmetryStructure)> {
    let d = in_file(path, StructureDocument::parse(&read(path)?))?;
    let s = in_file(path, d.realize(built))?;
    Ok((d, s))
}

fn load_names(path: &Path) -> Result<NamesDocument> {
    in_file(path, NamesDocument::parse(&read(path)?))
}

fn ids(p: &FinitePoset, xs: &[usize]) -> Value {
    json!(xs.iter().map(|&x| p.id(x)).collect::<Vec<_>>())
}

fn opt_ids(p: &FinitePoset, xs: &Option<Vec<usize>>) -> Value {
    xs.as_ref().map_or(Value::Null, |x| ids(p, x))
}

fn parse_ids(p: &FinitePoset, list: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    lib(p.subset_of_ids(&parts))
}

fn check_value(p: &FinitePoset, c: &Check) -> Value {
    let witness = match c.witness {
        None => Value::Null,
        Some(Witness::Element(x)) => json!([p.id(x)]),
        Some(Witness::Pair(x, y)) => json!([p.id(x), p.id(y)]),
    };
    json!({"holds": c.holds, "witness": witness})
}

fn cc_value(p: &FinitePoset, r: &CCReport) -> Value {
    json!({
        "variant": r.variant.name(),
        "scope": scope_name(r.scope),
        "threshold": r.threshold,
        "holds": r.holds,
        "witness": opt_ids(p, &r.witness),
        "certificate": {
            "examined": r.certificate.examined,
            "extremal": r.certificate.extremal,
            "refinement": opt_ids(p, &r.certificate.refinement),
            "refinement_examined": r.certificate.refinement_examined,
        },
    })
}

fn scope_name(s: Scope) -> &'static str {
    match s {
        Scope::Absolute => "absolute",
        Scope::Relative => "relative",
    }
}

fn structure_value(d: &StructureDocument, s: &SymmetryStructure) -> Value {
    json!({
        "document": d.to_value(),
        "group_order": s.group().order(),
        "supports": s.blocks().len(),
        "ideal_generators": s.ideal().generators(),
    })
}

fn analyze(a: &AnalyzeArgs) -> Result<Report> {
    let built = load_poset(&a.poset)?;
    let p = &built.poset;
    let corank = p.corank();
    let minimal = p.minimal_elements();
    let elements: Vec<Value> = p
        .elements()
        .map(|x| json!({"index": x, "id": p.id(x), "corank": corank[x], "minimal": minimal.contains(&x)}))
        .collect();
    let covers: Vec<Value> = p.covers().iter().map(|&(x, y)| json!([p.id(x), p.id(y)])).collect();
    let automorphisms = match automorphism_group(p) {
        Ok(aut) => {
            let orbits: Vec<Value> = aut.orbits().iter().map(|o| ids(p, o)).collect();
            let generators: Vec<Value> = aut.generators().iter().map(|g| json!(g.images())).collect();
            json!({"order": aut.order(), "generators": generators, "orbits": orbits})
        }
        Err(e) => json!({"unavailable": e.to_string()}),
    };
    let width = cc_abs(p, CCVariant::CC2, p.len()).ok().map(|r| r.certificate.extremal);
    let completion = match BoolAlgebra::regular_open_completion(p) {
        Ok(b) => json!({"atoms": b.atom_ids(), "size": b.size() as u64, "quotient_size": b.separative_quotient().len()}),
        Err(e) => json!({"unavailable": e.to_string()}),
    };
    let mut subsets = Vec::new();
    for s in &a.subsets {
        let xs = parse_ids(p, s)?;
        let r = lib(p.classify_subset(&xs))?;
        subsets.push(json!({
            "subset": ids(p, &xs),
            "antichain": check_value(p, &r.antichain),
            "maximal_antichain": check_value(p, &r.maximal_antichain),
            "predense": check_value(p, &r.predense),
            "dense": check_value(p, &r.dense),
            "open": check_value(p, &r.open),
            "perp": ids(p, &lib(p.perp(&xs))?),
        }));
    }
    let tree_violation = p.forcing_tree_violation().map(|(x, y)| json!([p.id(x), p.id(y)]));
    Ok(Report::new(
        "analyze",
        EXIT_HOLDS,
        json!({
            "size": p.len(),
            "top": p.id(p.top()),
            "elements": elements,
            "covers": covers,
            "separative": p.is_separative(),
            "forcing_tree": tree_violation.is_none(),
            "forcing_tree_witness": tree_violation,
            "width": width,
            "automorphisms": automorphisms,
            "completion": completion,
            "subsets": subsets,
        }),
    ))
}

fn cc(a: &CcArgs) -> Result<Report> {
    let built = load_poset(&a.poset)?;
    let p = &built.poset;
    if a.n == 0 {
        return Err("--n must be at least 1".into());
    }
    let structure = a.structure.as_deref().map(|s| load_structure(s, &built)).transpose()?;
    let variants: Vec<CCVariant> = if a.all || a.variants.is_empty() {
        CCVariant::ALL.to_vec()
    } else {
        let mut v = a.variants.clone();
        v.sort();
        v.dedup();
        v
    };
    let include_trivial = structure.as_ref().is_none_or(|(d, _)| d.include_trivial) && !a.exclude_trivial;
    let mut results = Vec::new();
    let mut witness = Value::Null;
    let mut holds = true;
    for v in variants {
        let r = match &structure {
            Some((_, s)) => lib(cc_rel(s, v, a.n, include_trivial))?,
            None => lib(cc_abs(p, v, a.n))?,
        };
        if !r.holds && holds {
            holds = false;
            witness = opt_ids(p, &r.witness);
        }
        results.push(cc_value(p, &r));
    }
    let mut body = json!({
        "size": p.len(),
        "threshold": a.n,
        "holds": holds,
        "witness": witness,
        "results": results,
    });
    if let Some((d, s)) = &structure {
        body["structure"] = structure_value(d, s);
        body["include_trivial"] = json!(include_trivial);
    }
    Ok(Report::new("cc", verdict(holds), body))
}

fn complete(a: &CompleteArgs) -> Result<Report> {
    let built = load_poset(&a.poset)?;
    let p = &built.poset;
    let b = lib(BoolAlgebra::regular_open_completion(p))?;
    let atom_ids = b.atom_ids();
    let atoms_of = |x: chaincond::completion::AtomSet| -> Value { json!(x.atoms().map(|i| atom_ids[i]).collect::<Vec<_>>()) };
    let embedding: Vec<Value> = p
        .elements()
        .map(|x| json!({"element": p.id(x), "atoms": atoms_of(b.embed(x))}))
        .collect();
    let mut body = json!({
        "size": p.len(),
        "atoms": atom_ids,
        "algebra_size": b.size() as u64,
        "quotient_size": b.separative_quotient().len(),
        "embedding": embedding,
    });
    let mut exit = EXIT_HOLDS;
    if let Some(list) = &a.extend {
        let xs = parse_ids(p, list)?;
        let images: Vec<_> = xs.iter().map(|&x| b.embed(x)).collect();
        let ext = lib(b.cba_maximal_extension(&images))?;
        // verify: pairwise disjoint, nonzero, join is one
        let disjoint = ext.iter().enumerate().all(|(i, x)| ext[i + 1..].iter().all(|y| x.is_disjoint(*y)));
        let covers = lib(b.join(&ext))? == b.one();
        let verified = disjoint && covers && ext.iter().all(|x| !x.is_zero());
        if !verified {
            exit = EXIT_FAILS;
        }
        body["extension"] = json!({
            "from": ids(p, &xs),
            "antichain": ext.iter().map(|x| atoms_of(*x)).collect::<Vec<_>>(),
            "verified": verified,
        });
    }
    Ok(Report::new("complete", exit, body))
}

fn load_formula(arg: &str) -> Result<FormulaDocument> {
    let path = Path::new(arg);
    if path.exists() {
        return in_file(path, FormulaDocument::parse(&read(path)?));
    }
    let v = parse_json(arg).map_err(|e| format!("formula is neither a file nor inline JSON: {e}"))?;
    FormulaDocument::from_value(&v).map_err(|e| format!("formula: {e}"))
}

fn force(a: &ForceArgs) -> Result<Report> {
    let built = load_poset(&a.poset)?;
    let p = &built.poset;
    let names = load_names(&a.names)?;
    let resolved = in_file(&a.names, names.resolve(p))?;
    let fd = load_formula(&a.formula)?;
    let phi = fd.formula.resolve(&names, p).map_err(|e| format!("formula: {e}"))?;
    let neg = Formula::not(phi.clone());
    let mut forcer = Forcer::new(p);
    let mut conditions = Vec::new();
    let mut witness = Value::Null;
    let mut agree = true;
    for c in p.elements() {
        let f = forces(p, c, &phi);
        let g = forces(p, c, &neg);
        let rec = forcer.forces(c, &phi);
        agree &= rec == f && forces_recursive(p, c, &phi) == f;
        if g && witness.is_null() {
            witness = json!(p.id(c));
        }
        conditions.push(json!({"condition": p.id(c), "forces": f, "forces_negation": g}));
    }
    let holds = forces(p, p.top(), &phi);
    let names_v: Vec<Value> = resolved
        .names
        .iter()
        .map(|(k, x)| json!({"name": k, "rank": x.rank(), "entries": x.entries().len()}))
        .collect();
    Ok(Report::new(
        "force",
        verdict(holds),
        json!({
            "formula": fd.formula.to_value(),
            "names": names_v,
            "holds": holds,
            "witness": witness,
            "recursive_agrees": agree,
            "conditions": conditions,
        }),
    ))
}

fn sym(a: &SymArgs) -> Result<Report> {
    let built = load_poset(&a.poset)?;
    let p = &built.poset;
    let (sd, s) = load_structure(&a.structure, &built)?;
    let names = load_names(&a.names)?;
    let resolved = in_file(&a.names, names.resolve(p))?;
    let mut rows = Vec::new();
    let mut witness = Value::Null;
    for (k, x) in &resolved.names {
        let h = lib(sym_group(&s, x))?;
        let support = lib(s.large_support(&h))?;
        let hs = lib(is_hereditarily_symmetric(&s, x))?;
        if !hs && witness.is_null() {
            witness = json!(k);
        }
        rows.push(json!({
            "name": k,
            "rank": x.rank(),
            "sym_order": h.order(),
            "support_points": support,
            "symmetric": support.is_some(),
            "hereditarily_symmetric": hs,
        }));
    }
    let pool: Vec<PName> = resolved.names.values().cloned().collect();
    let formulas = atomic_formulas(&pool);
    let violations = verify_symmetry_lemma(p, s.group(), &formulas);
    let lemma: Vec<Value> = violations
        .iter()
        .take(16)
        .map(|v| {
            json!({
                "condition": p.id(v.condition),
                "perm": v.perm.images(),
                "forced": v.forced,
                "forced_after_action": v.forced_after_action,
            })
        })
        .collect();
    let holds = witness.is_null() && violations.is_empty();
    Ok(Report::new(
        "sym",
        verdict(holds),
        json!({
            "structure": structure_value(&sd, &s),
            "names": rows,
            "holds": holds,
            "witness": witness,
            "lemma": {"formulas": formulas.len(), "violations": violations.len(), "examples": lemma},
        }),
    ))
}

fn audit(a: &AuditArgs) -> Result<Report> {
    let built = load_poset(&a.poset)?;
    let p = &built.poset;
    let structure = a.structure.as_deref().map(|s| load_structure(s, &built)).transpose()?;
    let include_trivial = structure.as_ref().is_none_or(|(d, _)| d.include_trivial) && !a.exclude_trivial;
    let r = lib(implication_audit(p, structure.as_ref().map(|(_, s)| (s, include_trivial))))?;
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({"scope": scope_name(row.scope), "n": row.n, "cc1": row.cc1, "cc2": row.cc2, "cc3": row.cc3, "cce": row.cce})
        })
        .collect();
    let implications: Vec<Value> = r
        .implications
        .iter()
        .map(|i| {
            json!({
                "scope": scope_name(i.scope),
                "from": i.from.name(),
                "to": i.to.name(),
                "provable": i.provable,
                "holds": i.holds,
                "witness": i.violations.first(),
                "violations": i.violations,
            })
        })
        .collect();
    let mut body = json!({
        "size": r.size,
        "rows": rows,
        "implications": implications,
        "provable_violations": r.provable_violations,
    });
    if let Some((d, s)) = &structure {
        body["structure"] = structure_value(d, s);
        body["include_trivial"] = json!(include_trivial);
    }
    Ok(Report::new("audit", verdict(r.provable_violations == 0), body))
}

/// Default corpus: full binary trees for the rank-minimal predicates, trees
/// for the tree predicate, every poset otherwise.
fn corpus_for(a: &SearchArgs) -> Corpus {
    let kind = a.corpus.unwrap_or(match (a.seed, a.predicate.as_str()) {
        (Some(_), _) => CorpusKind::Random,
        (None, "rank-minimal-not-predense" | "rank-minimal-dense-not-predense") => CorpusKind::BinaryTrees,
        (None, "tree-refinement-invalid") => CorpusKind::Trees,
        _ => CorpusKind::Exhaustive,
    });
    match kind {
        CorpusKind::Exhaustive => Corpus::Exhaustive { max_size: a.max_size },
        CorpusKind::Trees => Corpus::Trees { max_size: a.max_size },
        CorpusKind::BinaryTrees => {
            let mut h = 1;
            while (1usize << (h + 1)) - 1 <= a.max_size {
                h += 1;
            }
            Corpus::BinaryTrees { max_height: h }
        }
        CorpusKind::Random => Corpus::Random {
            count: a.count,
            max_size: a.max_size,
            seed: a.seed.unwrap_or(0),
        },
    }
}

fn search(a: &SearchArgs) -> Result<Report> {
    let pred = named_predicate(&a.predicate)
        .ok_or_else(|| format!("unknown predicate `{}` (expected one of {})", a.predicate, PREDICATES.join(", ")))?;
    let corpus = corpus_for(a);
    let r = lib(counterexample_search(pred.as_ref(), &corpus, a.witnesses))?;
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            let p = &w.poset;
            json!({
                "index": w.index,
                "poset": PosetDocument::from_poset(p).to_value(),
                "subset": opt_ids(p, &w.found.subset),
                "image": opt_ids(p, &w.found.image),
                "threshold": w.found.threshold,
                "note": w.found.note,
            })
        })
        .collect();
    Ok(Report::new(
        "search",
        verdict(r.exhausted),
        json!({
            "predicate": r.predicate,
            "description": pred.description(),
            "corpus": r.corpus,
            "examined": r.examined,
            "exhausted": r.exhausted,
            "witnesses": witnesses,
        }),
    ))
}

fn fmt(a: &FmtArgs) -> Result<String> {
    let text = read(&a.file)?;
    let f = &a.file;
    Ok(match a.kind {
        DocKind::Poset => in_file(f, PosetDocument::parse(&text))?.to_text(),
        DocKind::Structure => in_file(f, StructureDocument::parse(&text))?.to_text(),
        DocKind::Names => in_file(f, NamesDocument::parse(&text))?.to_text(),
        DocKind::Formula => in_file(f, FormulaDocument::parse(&text))?.to_text(),
    })
}
