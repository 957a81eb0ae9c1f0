//! File-driven front end: input documents, command dispatch and reports.
//!
//! An input document is JSON:
//!
//! ```json
//! {
//!   "torus_rank": 2,
//!   "product": [{"kind": "Delta", "n": 1}, {"kind": "Delta", "n": 1}],
//!   "labels": {"F1": [1, 0], "F2": [0, 1], "F3": [1, 1], "F4": [1, 2]},
//!   "options": {"max_degree": 8, "duality_check": true}
//! }
//! ```
//!
//! Instead of `product`, an explicit poset may be given by `facets` (names)
//! and `faces` (`{"id", "facets", "dim"}`); the whole space and the facets
//! themselves are added when missing. Containment is reverse inclusion of
//! facet sets unless `order` lists the covering pairs `[lower, upper]`.
//! Without `dimension`, the orbit space dimension is one more than the
//! largest face dimension listed (or `torus_rank` when only vertices are
//! listed). Label entries are integers or decimal strings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::gkm::{
    betti_numbers, intersection_form, module_generators, poincare_duality_holds, poincare_series_check_up_to,
    ring_structure, weights_from_labels, CohomologyRing, EquivariantClass, GkmError, GkmGraph,
};
use crate::lattice::{LabelMap, LatticeError};
use crate::linalg::Rat;
use crate::model::{build_model, is_manifold_model, slice_model, ModelError};
use crate::poly::{variable_names, Poly};
use crate::poset::{
    build_product_poset, check_properties, decompose_product, validate_nice, CombinatorialType, Face, FacePoset,
    Factor, PosetError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Weights,
    Betti,
    Generators,
    Ring,
    Form,
    Model,
    SliceModel,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Weights => "weights",
            Command::Betti => "betti",
            Command::Generators => "generators",
            Command::Ring => "ring",
            Command::Form => "form",
            Command::Model => "model",
            Command::SliceModel => "slice-model",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "torb", about = "Torus orbifolds from labelled orbit spaces: GKM cohomology and model spaces")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    pub input: PathBuf,
    /// Emit the machine-readable JSON report.
    #[arg(long)]
    pub json: bool,
    /// Truncation degree (cohomological) of the free-module series check.
    #[arg(long, value_name = "D")]
    pub max_degree: Option<usize>,
    /// Skip the rational Poincaré duality check on Betti numbers.
    #[arg(long)]
    pub no_duality_check: bool,
}

/// Failure classes, each with its own exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Schema(String),
    Property(String),
    Nondegeneracy(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Schema(_) => 2,
            Failure::Property(_) => 3,
            Failure::Nondegeneracy(_) => 4,
            Failure::Internal(_) => 5,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Schema(_) => "schema",
            Failure::Property(_) => "property",
            Failure::Nondegeneracy(_) => "nondegeneracy",
            Failure::Internal(_) => "internal",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Schema(m) | Failure::Property(m) | Failure::Nondegeneracy(m) | Failure::Internal(m) => m,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl From<PosetError> for Failure {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::EdgeVertexCount { .. } => Failure::Property(e.to_string()),
            _ => Failure::Schema(e.to_string()),
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::ColumnCount { .. } => Failure::Schema(e.to_string()),
            LatticeError::NotAVertex(_) | LatticeError::NoSuchFace(_) => Failure::Internal(e.to_string()),
            _ => Failure::Nondegeneracy(e.to_string()),
        }
    }
}

impl From<GkmError> for Failure {
    fn from(e: GkmError) -> Self {
        match e {
            GkmError::Poset(p) => p.into(),
            GkmError::Lattice(l) => l.into(),
            GkmError::RankMismatch { .. } | GkmError::FormRank(_) | GkmError::FormTop(_) => Failure::Schema(e.to_string()),
            GkmError::NotNice(_) | GkmError::EdgeFacets { .. } | GkmError::VertexDegree { .. } => {
                Failure::Property(e.to_string())
            }
            GkmError::DependentEdgeLabels(_) | GkmError::DependentVertexLabels(_) | GkmError::ParallelWeights(..) => {
                Failure::Nondegeneracy(e.to_string())
            }
            GkmError::NonvanishingAboveTop { .. }
            | GkmError::InvalidBasis { .. }
            | GkmError::Reduction(_)
            | GkmError::DegenerateForm => Failure::Internal(e.to_string()),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Poset(p) => p.into(),
            ModelError::Lattice(l) => l.into(),
            ModelError::RankMismatch { .. } => Failure::Schema(e.to_string()),
            ModelError::NotDecomposable => Failure::Property(e.to_string()),
            ModelError::NotRationallySurjective { .. }
            | ModelError::NotAlmostFree(_)
            | ModelError::FaceInconsistency(..)
            | ModelError::NotSurjective { .. }
            | ModelError::VertexNotIsomorphic { .. } => Failure::Nondegeneracy(e.to_string()),
            ModelError::Identity(_) => Failure::Internal(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Cohomological truncation degree of the series check; default `4n`.
    pub max_degree: Option<usize>,
    pub duality_check: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_degree: None, duality_check: true }
    }
}

/// A validated input document.
#[derive(Clone, Debug)]
pub struct InputDocument {
    pub torus_rank: usize,
    pub poset: FacePoset,
    pub labels: LabelMap,
    /// Set when the poset came from the product shorthand.
    pub shorthand: Option<CombinatorialType>,
    pub options: Options,
    /// `sha256:<hex>` of the document bytes.
    pub digest: String,
}

fn schema(msg: impl Into<String>) -> Failure {
    Failure::Schema(msg.into())
}

fn field_usize(v: &Value, path: &str) -> Result<usize, Failure> {
    v.as_u64().and_then(|x| usize::try_from(x).ok()).ok_or_else(|| schema(format!("field `{path}`: expected a non-negative integer")))
}

fn field_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, Failure> {
    v.as_str().ok_or_else(|| schema(format!("field `{path}`: expected a string")))
}

fn field_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, Failure> {
    v.as_array().ok_or_else(|| schema(format!("field `{path}`: expected an array")))
}

fn field_int(v: &Value, path: &str) -> Result<BigInt, Failure> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = v.as_str() {
        return s.trim().parse::<BigInt>().map_err(|_| schema(format!("field `{path}`: `{s}` is not a decimal integer")));
    }
    Err(schema(format!("field `{path}`: expected an integer or a decimal string")))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), Failure> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(schema(format!("{path}: unknown field `{k}`")));
        }
    }
    Ok(())
}

/// Reads and validates an input document from a file.
pub fn parse_input(path: &Path) -> Result<InputDocument, Failure> {
    let bytes = std::fs::read(path).map_err(|e| schema(format!("cannot read `{}`: {e}", path.display())))?;
    parse_document(&bytes)
}

/// Parses and validates the bytes of an input document.
pub fn parse_document(bytes: &[u8]) -> Result<InputDocument, Failure> {
    let digest = format!("sha256:{:x}", Sha256::digest(bytes));
    let root: Value = serde_json::from_slice(bytes)
        .map_err(|e| schema(format!("invalid JSON at line {} column {}: {e}", e.line(), e.column())))?;
    let obj = root.as_object().ok_or_else(|| schema("document must be a JSON object"))?;
    check_keys(obj, &["torus_rank", "dimension", "product", "facets", "faces", "order", "labels", "options"], "document")?;
    let k = field_usize(obj.get("torus_rank").ok_or_else(|| schema("missing field `torus_rank`"))?, "torus_rank")?;
    if k == 0 {
        return Err(schema("field `torus_rank`: must be positive"));
    }
    let dimension = obj.get("dimension").map(|v| field_usize(v, "dimension")).transpose()?;
    let (poset, shorthand) = match (obj.get("product"), obj.get("faces").or(obj.get("facets"))) {
        (Some(_), Some(_)) => return Err(schema("`product` and `facets`/`faces` are mutually exclusive")),
        (None, None) => return Err(schema("either `product` or `facets` and `faces` is required")),
        (Some(p), None) => {
            if obj.contains_key("order") {
                return Err(schema("`order` applies only to explicit posets"));
            }
            let ctype = parse_product(p)?;
            if dimension.is_some_and(|d| d != ctype.rank()) {
                return Err(schema(format!("field `dimension`: product has dimension {}", ctype.rank())));
            }
            (build_product_poset(&ctype), Some(ctype))
        }
        (None, Some(_)) => (parse_explicit(obj, k, dimension)?, None),
    };
    let labels = parse_labels(obj.get("labels").ok_or_else(|| schema("missing field `labels`"))?, &poset, k)?;
    let options = parse_options(obj.get("options"))?;
    Ok(InputDocument { torus_rank: k, poset, labels, shorthand, options, digest })
}

fn parse_product(v: &Value) -> Result<CombinatorialType, Failure> {
    let mut factors = Vec::new();
    for (i, f) in field_array(v, "product")?.iter().enumerate() {
        let path = format!("product[{i}]");
        let o = f.as_object().ok_or_else(|| schema(format!("field `{path}`: expected an object")))?;
        check_keys(o, &["kind", "n"], &path)?;
        let kind = field_str(o.get("kind").ok_or_else(|| schema(format!("missing field `{path}.kind`")))?, &format!("{path}.kind"))?;
        let n = field_usize(o.get("n").ok_or_else(|| schema(format!("missing field `{path}.n`")))?, &format!("{path}.n"))?;
        factors.push(match kind {
            "Delta" => Factor::Simplex(n),
            "Sigma" => Factor::Suspension(n),
            other => return Err(schema(format!("field `{path}.kind`: expected \"Delta\" or \"Sigma\", found \"{other}\""))),
        });
    }
    CombinatorialType::new(factors).map_err(|e| schema(format!("field `product`: {e}")))
}

fn parse_explicit(obj: &Map<String, Value>, k: usize, dimension: Option<usize>) -> Result<FacePoset, Failure> {
    let facet_values = field_array(obj.get("facets").ok_or_else(|| schema("missing field `facets`"))?, "facets")?;
    let mut facet_names = Vec::new();
    for (i, f) in facet_values.iter().enumerate() {
        facet_names.push(field_str(f, &format!("facets[{i}]"))?.to_string());
    }
    let index: BTreeMap<&str, usize> = facet_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    if index.len() != facet_names.len() {
        return Err(schema("field `facets`: facet names must be unique"));
    }
    let mut listed = Vec::new();
    let face_values = match obj.get("faces") {
        Some(v) => field_array(v, "faces")?.clone(),
        None => Vec::new(),
    };
    for (i, f) in face_values.iter().enumerate() {
        let path = format!("faces[{i}]");
        let o = f.as_object().ok_or_else(|| schema(format!("field `{path}`: expected an object")))?;
        check_keys(o, &["id", "facets", "dim"], &path)?;
        let id = field_str(o.get("id").ok_or_else(|| schema(format!("missing field `{path}.id`")))?, &format!("{path}.id"))?;
        let dim = field_usize(o.get("dim").ok_or_else(|| schema(format!("missing field `{path}.dim`")))?, &format!("{path}.dim"))?;
        let mut set = BTreeSet::new();
        let fs = field_array(o.get("facets").ok_or_else(|| schema(format!("missing field `{path}.facets`")))?, &format!("{path}.facets"))?;
        for (j, name) in fs.iter().enumerate() {
            let name = field_str(name, &format!("{path}.facets[{j}]"))?;
            let &idx = index.get(name).ok_or_else(|| schema(format!("field `{path}.facets[{j}]`: unknown facet `{name}`")))?;
            set.insert(idx);
        }
        listed.push(Face { id: id.to_string(), facets: set, dim });
    }
    let n = match dimension {
        Some(d) => d,
        None => listed.iter().map(|f| f.dim + 1).max().filter(|&d| d > 1).unwrap_or(k),
    };
    if n == 0 {
        return Err(schema("field `dimension`: must be positive"));
    }
    let mut faces = Vec::new();
    if !listed.iter().any(|f| f.facets.is_empty()) {
        faces.push(Face::new("Q", [], n));
    }
    for (i, name) in facet_names.iter().enumerate() {
        if !listed.iter().any(|f| f.facets.len() == 1 && f.facets.contains(&i)) {
            faces.push(Face::new(name.clone(), [i], n - 1));
        }
    }
    faces.extend(listed);
    match obj.get("order") {
        None => Ok(FacePoset::from_facet_sets(n, facet_names, faces)?),
        Some(order) => {
            let ids: BTreeMap<&str, usize> = faces.iter().enumerate().map(|(i, f)| (f.id.as_str(), i)).collect();
            let m = faces.len();
            let mut leq = vec![vec![false; m]; m];
            for a in 0..m {
                leq[a][a] = true;
                for b in 0..m {
                    // everything lies in the whole space and in its own facets
                    if faces[b].facets.is_empty() || (faces[b].facets.len() == 1 && faces[b].facets.is_subset(&faces[a].facets)) {
                        leq[a][b] = true;
                    }
                }
            }
            for (i, pair) in field_array(order, "order")?.iter().enumerate() {
                let path = format!("order[{i}]");
                let p = field_array(pair, &path)?;
                if p.len() != 2 {
                    return Err(schema(format!("field `{path}`: expected [lower, upper]")));
                }
                let lo = field_str(&p[0], &path)?;
                let hi = field_str(&p[1], &path)?;
                let (&a, &b) = ids
                    .get(lo)
                    .zip(ids.get(hi))
                    .ok_or_else(|| schema(format!("field `{path}`: unknown face in [{lo}, {hi}]")))?;
                leq[a][b] = true;
            }
            // transitive closure
            for c in 0..m {
                for a in 0..m {
                    if leq[a][c] {
                        for b in 0..m {
                            if leq[c][b] {
                                leq[a][b] = true;
                            }
                        }
                    }
                }
            }
            Ok(FacePoset::new(n, facet_names, faces, leq)?)
        }
    }
}

fn parse_labels(v: &Value, poset: &FacePoset, k: usize) -> Result<LabelMap, Failure> {
    let o = v.as_object().ok_or_else(|| schema("field `labels`: expected an object mapping facet names to vectors"))?;
    for key in o.keys() {
        if !poset.facet_names().contains(key) {
            return Err(schema(format!("field `labels.{key}`: unknown facet")));
        }
    }
    let mut columns = Vec::new();
    for name in poset.facet_names() {
        let path = format!("labels.{name}");
        let entries = field_array(o.get(name).ok_or_else(|| schema(format!("missing field `{path}`")))?, &path)?;
        if entries.len() != k {
            return Err(schema(format!("field `{path}`: expected {k} entries, found {}", entries.len())));
        }
        let col = entries.iter().enumerate().map(|(i, e)| field_int(e, &format!("{path}[{i}]"))).collect::<Result<Vec<_>, _>>()?;
        columns.push(col);
    }
    Ok(LabelMap::from_columns(k, &columns)?)
}

fn parse_options(v: Option<&Value>) -> Result<Options, Failure> {
    let mut options = Options::default();
    let Some(v) = v else { return Ok(options) };
    let o = v.as_object().ok_or_else(|| schema("field `options`: expected an object"))?;
    check_keys(o, &["max_degree", "duality_check"], "options")?;
    if let Some(d) = o.get("max_degree") {
        options.max_degree = Some(field_usize(d, "options.max_degree")?);
    }
    if let Some(d) = o.get("duality_check") {
        options.duality_check = d.as_bool().ok_or_else(|| schema("field `options.duality_check`: expected a boolean"))?;
    }
    Ok(options)
}

/// Outcome of a command: machine-readable sections plus the rendered text.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: Command,
    pub digest: String,
    pub results: Map<String, Value>,
    pub warnings: Vec<String>,
    pub text: String,
    /// The first failure; later steps of `all` are not run.
    pub failure: Option<Failure>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command.name(),
            "input_digest": self.digest,
            "results": Value::Object(self.results.clone()),
            "warnings": self.warnings,
            "error": self.failure.as_ref().map(|f| json!({"kind": f.kind(), "message": f.message(), "exit_code": f.exit_code()})),
        })
    }
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(i) => json!(i),
        None => json!(x.to_string()),
    }
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn rational(q: &Rat) -> Value {
    json!(q.to_string())
}

fn fmt_vec(v: &[BigInt]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

fn fmt_rats(v: &[Rat]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

fn class_strings(c: &EquivariantClass, names: &[String]) -> Vec<String> {
    c.components.iter().map(|p| p.display_with(names).to_string()).collect()
}

fn linear_form(w: &[BigInt], names: &[String]) -> String {
    Poly::linear(w).display_with(names).to_string()
}

struct Context<'a> {
    doc: &'a InputDocument,
    names: Vec<String>,
    graph: Option<GkmGraph>,
    ring: Option<CohomologyRing>,
}

impl<'a> Context<'a> {
    fn graph(&mut self) -> Result<&GkmGraph, Failure> {
        if self.graph.is_none() {
            self.graph = Some(weights_from_labels(&self.doc.poset, &self.doc.labels)?);
        }
        Ok(self.graph.as_ref().expect("just computed"))
    }

    fn ring(&mut self) -> Result<&CohomologyRing, Failure> {
        if self.ring.is_none() {
            let ring = ring_structure(self.graph()?)?;
            self.ring = Some(ring);
        }
        Ok(self.ring.as_ref().expect("just computed"))
    }
}

type Section = (Value, String);

fn validate(ctx: &mut Context) -> Result<(Section, Option<Failure>), Failure> {
    let poset = &ctx.doc.poset;
    let nice = validate_nice(poset);
    let props = check_properties(poset);
    let decomposition = if nice.nice && props.all_hold() { decompose_product(poset) } else { None };
    let mut text = String::new();
    writeln!(text, "{poset}").ok();
    writeln!(text, "nice: {}{}", nice.nice, if nice.nice { String::new() } else { format!(" (offending faces: {})", nice.witnesses.join(", ")) }).ok();
    let mut clauses = Vec::new();
    for c in &props.clauses {
        writeln!(
            text,
            "  ({}) {:<5} {}{}",
            c.clause.letter(),
            if c.holds { "ok" } else { "FAIL" },
            c.clause.statement(),
            c.witness.as_ref().map(|w| format!(" [face {w}]")).unwrap_or_default()
        )
        .ok();
        clauses.push(json!({
            "clause": c.clause.letter().to_string(),
            "statement": c.clause.statement(),
            "holds": c.holds,
            "witness": c.witness,
        }));
    }
    let decomposition_json = match &decomposition {
        Some(d) => {
            writeln!(text, "product decomposition: {}", d.ctype).ok();
            let factors: Vec<Value> = d
                .blocks
                .iter()
                .map(|b| {
                    let facets: Vec<&String> = b.facets.iter().map(|&f| &poset.facet_names()[f]).collect();
                    writeln!(text, "  {} on facets {}", b.factor, facets.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")).ok();
                    let (kind, n) = match b.factor {
                        Factor::Simplex(n) => ("Delta", n),
                        Factor::Suspension(n) => ("Sigma", n),
                    };
                    json!({"kind": kind, "n": n, "facets": facets})
                })
                .collect();
            json!({"type": d.ctype.to_string(), "factors": factors})
        }
        None => Value::Null,
    };
    let value = json!({
        "rank": poset.rank(),
        "facets": poset.facet_count(),
        "vertices": poset.vertices().len(),
        "nice": nice.nice,
        "non_nice_faces": nice.witnesses,
        "clauses": clauses,
        "decomposition": decomposition_json,
    });
    let failure = if !nice.nice {
        Some(Failure::Property(format!("orbit space is not nice; offending faces: {}", nice.witnesses.join(", "))))
    } else if let Some(c) = props.failures().next() {
        Some(Failure::Property(format!(
            "clause ({}) fails: {}{}",
            c.clause.letter(),
            c.clause.statement(),
            c.witness.as_ref().map(|w| format!(" (face `{w}`)")).unwrap_or_default()
        )))
    } else if decomposition.is_none() {
        Some(Failure::Internal("all clauses hold but no product decomposition was found".into()))
    } else {
        None
    };
    Ok(((value, text), failure))
}

fn weights(ctx: &mut Context, warnings: &mut Vec<String>) -> Result<Section, Failure> {
    warnings.push("edge weights are normalized to be primitive with first nonzero entry positive".into());
    let names = ctx.names.clone();
    let g = ctx.graph()?;
    let mut text = String::from("edge weights (primitive, first nonzero entry positive):\n");
    let mut edges = Vec::new();
    for e in g.edges() {
        let (a, b) = (&g.vertices()[e.ends.0], &g.vertices()[e.ends.1]);
        writeln!(text, "  {:<12} {} -- {}  {:<16} raw {}", e.face, a, b, linear_form(&e.weight, &names), linear_form(&e.raw_weight, &names)).ok();
        edges.push(json!({
            "edge": e.face,
            "ends": [a, b],
            "weight": ints(&e.weight),
            "raw_weight": ints(&e.raw_weight),
            "form": linear_form(&e.weight, &names),
            "raw_form": linear_form(&e.raw_weight, &names),
        }));
    }
    Ok((json!({"variables": names, "vertices": g.vertices(), "edges": edges}), text))
}

fn betti(ctx: &mut Context, warnings: &mut Vec<String>) -> Result<(Section, Option<Failure>), Failure> {
    let options = ctx.doc.options.clone();
    let g = ctx.graph()?;
    let n = g.rank();
    let b = betti_numbers(g)?;
    let top = options.max_degree.map_or(2 * n, |d| d / 2);
    let series = poincare_series_check_up_to(g, top);
    let total: usize = b.iter().sum();
    let duality = poincare_duality_holds(&b);
    let mut text = String::new();
    writeln!(text, "Betti numbers b0, b2, ..., b{}: {:?}", 2 * n, b).ok();
    writeln!(text, "sum = {total} (vertices: {})", g.vertex_count()).ok();
    writeln!(text, "equivariant dimensions by degree: {:?}", series.equivariant_dims).ok();
    writeln!(text, "free-module prediction:           {:?}  ({})", series.predicted_dims, if series.holds { "match" } else { "MISMATCH" }).ok();
    if options.duality_check {
        writeln!(text, "Poincare duality b_2d = b_2(n-d): {duality}").ok();
    } else {
        warnings.push("Poincare duality check disabled".into());
    }
    let value = json!({
        "betti": b,
        "total": total,
        "vertices": g.vertex_count(),
        "duality": if options.duality_check { json!(duality) } else { Value::Null },
        "series": {
            "truncation_degree": 2 * (series.equivariant_dims.len() - 1),
            "equivariant_dims": series.equivariant_dims,
            "predicted_dims": series.predicted_dims,
            "holds": series.holds,
        },
    });
    let failure = if total != g.vertex_count() {
        Some(Failure::Internal(format!("Betti numbers sum to {total}, expected {}", g.vertex_count())))
    } else if !series.holds {
        Some(Failure::Internal("equivariant cohomology is not free over the polynomial ring".into()))
    } else if options.duality_check && !duality {
        Some(Failure::Internal(format!("Betti numbers {b:?} violate Poincare duality")))
    } else {
        None
    };
    Ok(((value, text), failure))
}

fn class_json(c: &EquivariantClass, names: &[String], vertices: &[String]) -> Value {
    json!({
        "degree": 2 * c.degree,
        "components": vertices.iter().zip(class_strings(c, names)).map(|(v, s)| json!({"vertex": v, "value": s})).collect::<Vec<_>>(),
    })
}

fn generators(ctx: &mut Context) -> Result<Section, Failure> {
    let names = ctx.names.clone();
    let g = ctx.graph()?;
    let gens = module_generators(g)?;
    let vertices = g.vertices().to_vec();
    let mut text = String::from("module generators over the polynomial ring (vertex order ");
    writeln!(text, "{}):", vertices.join(", ")).ok();
    for c in &gens {
        writeln!(text, "  degree {}: ({})", 2 * c.degree, class_strings(c, &names).join(", ")).ok();
    }
    let value = json!({
        "vertices": vertices,
        "degrees": gens.iter().map(|c| 2 * c.degree).collect::<Vec<_>>(),
        "generators": gens.iter().map(|c| class_json(c, &names, &vertices)).collect::<Vec<_>>(),
    });
    Ok((value, text))
}

fn basis_name(d: usize, i: usize) -> String {
    format!("h{}_{}", 2 * d, i + 1)
}

fn ring(ctx: &mut Context) -> Result<Section, Failure> {
    let names = ctx.names.clone();
    let vertices = ctx.graph()?.vertices().to_vec();
    let ring = ctx.ring()?;
    let n = ring.rank();
    let mut text = String::from("basis of the rational cohomology:\n");
    let mut basis = Map::new();
    for d in 0..=n {
        let mut entries = Vec::new();
        for (i, c) in ring.basis(d).iter().enumerate() {
            writeln!(text, "  {} = [({})]", basis_name(d, i), class_strings(c, &names).join(", ")).ok();
            let mut v = class_json(c, &names, &vertices);
            v["name"] = json!(basis_name(d, i));
            entries.push(v);
        }
        basis.insert((2 * d).to_string(), Value::Array(entries));
    }
    text.push_str("products of positive-degree basis elements:\n");
    let mut products = Vec::new();
    for (&(d1, i, d2, j), coords) in ring.products() {
        if d1 == 0 {
            continue;
        }
        let terms: Vec<String> = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c} {}", basis_name(d1 + d2, k)))
            .collect();
        writeln!(text, "  {} * {} = {}", basis_name(d1, i), basis_name(d2, j), if terms.is_empty() { "0".into() } else { terms.join(" + ") }).ok();
        products.push(json!({
            "left": basis_name(d1, i),
            "right": basis_name(d2, j),
            "degree": 2 * (d1 + d2),
            "coordinates": coords.iter().map(rational).collect::<Vec<_>>(),
        }));
    }
    let assoc = ring.check_associative_commutative();
    if !assoc {
        return Err(Failure::Internal("structure constants are not associative and commutative".into()));
    }
    let value = json!({"betti": ring.betti(), "basis": basis, "products": products, "associative_commutative": assoc});
    Ok((value, text))
}

fn form(ctx: &mut Context, warnings: &mut Vec<String>) -> Result<Section, Failure> {
    let names = ctx.names.clone();
    let ring = ctx.ring()?;
    let f = intersection_form(ring)?;
    let mut text = String::new();
    writeln!(text, "H^4 generator h4_1 = [({})]", class_strings(&f.generator, &names).join(", ")).ok();
    if f.rank() == 0 {
        writeln!(text, "H^2 = 0: the form is empty").ok();
    }
    writeln!(text, "Gram matrix in basis h2_*:").ok();
    for row in &f.gram {
        writeln!(text, "  {}", fmt_rats(row)).ok();
    }
    writeln!(text, "diagonalization: {}", fmt_rats(&f.diagonal)).ok();
    writeln!(text, "square-free diagonal: {}", fmt_vec(&f.squarefree_diagonal())).ok();
    writeln!(text, "normalized diagonal: {}", fmt_vec(&f.normalized_diagonal())).ok();
    writeln!(text, "determinant square class: {}", f.determinant_class()).ok();
    let hyperbolic = f.hyperbolic_basis();
    if let Some([e, h]) = &hyperbolic {
        writeln!(text, "hyperbolic basis: e = {} , f = {} (e.e = f.f = 0, e.f = 1)", fmt_rats(e), fmt_rats(h)).ok();
    }
    warnings.push("the intersection form is determined up to global sign (orientation)".into());
    let value = json!({
        "generator": class_strings(&f.generator, &names),
        "gram": f.gram.iter().map(|r| r.iter().map(rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "change_of_basis": f.change_of_basis.iter().map(|r| r.iter().map(rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "diagonal": f.diagonal.iter().map(rational).collect::<Vec<_>>(),
        "squarefree_diagonal": ints(&f.squarefree_diagonal()),
        "normalized_diagonal": ints(&f.normalized_diagonal()),
        "determinant_class": int(&f.determinant_class()),
        "hyperbolic_basis": hyperbolic.map(|b| b.iter().map(|v| v.iter().map(rational).collect::<Vec<_>>()).collect::<Vec<_>>()),
    });
    Ok((value, text))
}

fn model(ctx: &mut Context, warnings: &mut Vec<String>) -> Result<Section, Failure> {
    let doc = ctx.doc;
    let m = build_model(&doc.poset, &doc.labels)?;
    let facet_names = doc.poset.facet_names();
    let order: Vec<&String> = m.blocks.iter().flat_map(|b| b.facets.iter().map(|&f| &facet_names[f])).collect();
    let mut text = String::new();
    writeln!(text, "combinatorial type: {}", m.ctype).ok();
    writeln!(
        text,
        "moment-angle complex: {} with T^{} action",
        m.moment_angle.sphere_dims.iter().map(|d| format!("S^{d}")).collect::<Vec<_>>().join(" x "),
        m.moment_angle.torus_rank
    )
    .ok();
    writeln!(text, "kernel basis (facet order {}):", facet_names.join(", ")).ok();
    for v in &m.kernel.basis {
        writeln!(text, "  {}", fmt_vec(v)).ok();
    }
    writeln!(text, "kernel basis by factor (facet order {}):", order.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")).ok();
    for v in &m.grouped_kernel.basis {
        writeln!(text, "  {}", fmt_vec(v)).ok();
    }
    writeln!(text, "component group: {}", if m.component_group.is_empty() { "trivial".to_string() } else { m.component_group.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ") }).ok();
    if m.uses_connected_reduction() {
        warnings.push("kernel is disconnected; its identity component is used (results up to rational equivalence)".into());
    }
    writeln!(text, "vertices:").ok();
    for v in &m.vertices {
        writeln!(text, "  {:<12} det {:>6}  local order (model) {}", v.vertex, v.determinant.to_string(), v.local_order).ok();
    }
    let manifold = is_manifold_model(&m);
    writeln!(text, "almost free: {}, free: {}, manifold: {}", m.almost_free, m.free, manifold).ok();
    let value = json!({
        "type": m.ctype.to_string(),
        "sphere_dims": m.moment_angle.sphere_dims,
        "acting_torus_rank": m.moment_angle.torus_rank,
        "kernel": m.kernel.basis.iter().map(|v| ints(v)).collect::<Vec<_>>(),
        "grouped_kernel": {"facet_order": order, "basis": m.grouped_kernel.basis.iter().map(|v| ints(v)).collect::<Vec<_>>()},
        "component_group": ints(&m.component_group),
        "connected_reduction": m.uses_connected_reduction(),
        "vertices": m.vertices.iter().map(|v| json!({"vertex": v.vertex, "determinant": int(&v.determinant), "local_order": int(&v.local_order)})).collect::<Vec<_>>(),
        "almost_free": m.almost_free,
        "free": m.free,
        "manifold": manifold,
    });
    Ok((value, text))
}

fn slice(ctx: &mut Context) -> Result<Section, Failure> {
    let doc = ctx.doc;
    let s = slice_model(&doc.poset, &doc.labels)?;
    let facet_names = doc.poset.facet_names();
    let mut text = String::new();
    writeln!(text, "combinatorial type: {}, T^{} acting, orbit space dimension {}", s.ctype, s.torus_rank, s.orbit_rank).ok();
    writeln!(text, "moment-angle complex: {}", s.moment_angle.sphere_dims.iter().map(|d| format!("S^{d}")).collect::<Vec<_>>().join(" x ")).ok();
    writeln!(text, "kernel basis (facet order {}):", facet_names.join(", ")).ok();
    for v in &s.kernel.basis {
        writeln!(text, "  {}", fmt_vec(v)).ok();
    }
    let mut blocks = Vec::new();
    for (b, w) in s.blocks.iter().zip(&s.block_weights) {
        let facets: Vec<&String> = b.facets.iter().map(|&f| &facet_names[f]).collect();
        writeln!(text, "  weights on {} ({}): {}", b.factor, facets.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", "), w.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>().join(" ")).ok();
        blocks.push(json!({"factor": b.factor.to_string(), "facets": facets, "weights": w.iter().map(|v| ints(v)).collect::<Vec<_>>()}));
    }
    writeln!(text, "free kernel action; manifold dimension {}, minimal orbit dimension {}, 2k = {} = n + m", s.manifold_dim, s.min_orbit_dim, 2 * s.torus_rank).ok();
    let value = json!({
        "type": s.ctype.to_string(),
        "torus_rank": s.torus_rank,
        "orbit_rank": s.orbit_rank,
        "sphere_dims": s.moment_angle.sphere_dims,
        "kernel": s.kernel.basis.iter().map(|v| ints(v)).collect::<Vec<_>>(),
        "block_weights": blocks,
        "manifold_dim": s.manifold_dim,
        "min_orbit_dim": s.min_orbit_dim,
        "slice_maximal": s.is_slice_maximal(),
        "free": true,
    });
    Ok((value, text))
}

/// Runs a command on a validated document.
pub fn run(command: Command, doc: &InputDocument) -> Report {
    let n = doc.poset.rank();
    let k = doc.torus_rank;
    let needs_equal = |name: &str| -> Result<(), Failure> {
        if k != n {
            return Err(schema(format!("`{name}` needs torus_rank equal to the orbit space dimension {n}, got {k}")));
        }
        Ok(())
    };
    let mut ctx = Context { doc, names: variable_names(n), graph: None, ring: None };
    let mut results = Map::new();
    let mut warnings = Vec::new();
    let mut text = String::new();
    let emit = |name: &str, section: Section, results: &mut Map<String, Value>, text: &mut String| {
        if command == Command::All {
            writeln!(text, "== {name} ==").ok();
        }
        text.push_str(&section.1);
        results.insert(name.to_string(), section.0);
    };
    let steps: Vec<Command> = match command {
        Command::All if k > n => vec![Command::Validate, Command::SliceModel],
        Command::All => {
            let mut s = vec![Command::Validate, Command::Weights, Command::Betti, Command::Generators, Command::Ring];
            if n == 2 {
                s.push(Command::Form);
            }
            s.push(Command::Model);
            s
        }
        c => vec![c],
    };
    let mut failure = None;
    for step in steps {
        let outcome = match step {
            Command::Validate => validate(&mut ctx),
            Command::Betti => needs_equal("betti").and_then(|_| betti(&mut ctx, &mut warnings)),
            other => {
                let section = match other {
                    Command::Weights => needs_equal("weights").and_then(|_| weights(&mut ctx, &mut warnings)),
                    Command::Generators => needs_equal("generators").and_then(|_| generators(&mut ctx)),
                    Command::Ring => needs_equal("ring").and_then(|_| ring(&mut ctx)),
                    Command::Form => needs_equal("form").and_then(|_| form(&mut ctx, &mut warnings)),
                    Command::Model => needs_equal("model").and_then(|_| model(&mut ctx, &mut warnings)),
                    Command::SliceModel => slice(&mut ctx),
                    Command::Validate | Command::Betti | Command::All => unreachable!("handled above"),
                };
                section.map(|s| (s, None))
            }
        };
        match outcome {
            Ok((section, problem)) => {
                emit(step.name(), section, &mut results, &mut text);
                if problem.is_some() {
                    failure = problem;
                    break;
                }
            }
            Err(problem) => {
                failure = Some(problem);
                break;
            }
        }
    }
    Report { command, digest: doc.digest.clone(), results, warnings, text, failure }
}

fn error_json(command: Command, digest: Option<&str>, failure: &Failure) -> Value {
    json!({
        "command": command.name(),
        "input_digest": digest,
        "error": {"kind": failure.kind(), "message": failure.message(), "exit_code": failure.exit_code()},
    })
}

/// Runs the command line; returns the process exit status.
pub fn main_with_args(args: Args) -> i32 {
    let start = Instant::now();
    let mut digest = None;
    let outcome = parse_input(&args.input).and_then(|mut doc| {
        if let Some(d) = args.max_degree {
            doc.options.max_degree = Some(d);
        }
        if args.no_duality_check {
            doc.options.duality_check = false;
        }
        digest = Some(doc.digest.clone());
        Ok(run(args.command, &doc))
    });
    let code = match outcome {
        Ok(report) => {
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable"));
            } else {
                print!("{}", report.text);
                for w in &report.warnings {
                    println!("note: {w}");
                }
            }
            match &report.failure {
                Some(failure) => {
                    eprintln!("torb: {failure}");
                    failure.exit_code()
                }
                None => 0,
            }
        }
        Err(failure) => {
            if args.json {
                println!("{}", serde_json::to_string_pretty(&error_json(args.command, digest.as_deref(), &failure)).expect("serializable"));
            }
            eprintln!("torb: {failure}");
            failure.exit_code()
        }
    };
    eprintln!("torb: {} finished in {} ms", args.command.name(), start.elapsed().as_millis());
    code
}

/// Entry point used by the `torb` binary.
pub fn main() -> i32 {
    main_with_args(Args::parse())
}
