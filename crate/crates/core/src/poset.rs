//! Orbit spaces as combinatorial face posets.
//!
//! A [`FacePoset`] stores faces by identifier together with the set of facets
//! containing each face and an explicit containment order. Facet sets are not
//! unique keys: the two suspension points of `Σ^m` share the full facet set,
//! and the faces of the cube quotient `[-1,1]^d/{±id}` are not determined by
//! their facet sets at all.
//!
//! The face poset of `Σ^m` used here (one face per proper facet subset plus
//! two vertices lying in every facet) is a reconstruction: it is the unique
//! choice compatible with `Σ^m` having `m` facets, rank `m` and every edge
//! carrying exactly two vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate face id `{0}`")]
    DuplicateFace(String),
    #[error("duplicate facet id `{0}`")]
    DuplicateFacet(String),
    #[error("face `{face}` refers to unknown facet index {facet}")]
    UnknownFacet { face: String, facet: usize },
    #[error("expected exactly one face with empty facet set (the whole space), found {0}")]
    TopFace(usize),
    #[error("facet `{0}` must appear as exactly one face whose facet set is itself")]
    FacetFace(String),
    #[error("containment relation is not a partial order ({0})")]
    NotAnOrder(String),
    #[error("face `{face}` lies in facet `{facet}` inconsistently with its facet set")]
    InconsistentFacets { face: String, facet: String },
    #[error("edge `{edge}` contains {count} vertices, expected 2")]
    EdgeVertexCount { edge: String, count: usize },
    #[error("invalid combinatorial type: {0}")]
    InvalidType(String),
    #[error("cube quotient needs d >= 3, got {0}")]
    CubeDimension(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    /// Indices of the facets containing this face.
    pub facets: BTreeSet<usize>,
    pub dim: usize,
}

impl Face {
    pub fn new(id: impl Into<String>, facets: impl IntoIterator<Item = usize>, dim: usize) -> Self {
        Face { id: id.into(), facets: facets.into_iter().collect(), dim }
    }
}

#[derive(Clone, Debug)]
pub struct FacePoset {
    rank: usize,
    facet_names: Vec<String>,
    faces: Vec<Face>,
    /// `leq[a][b]`: face `a` is contained in face `b`.
    leq: Vec<Vec<bool>>,
    top: usize,
    facet_faces: Vec<usize>,
}

impl FacePoset {
    /// Builds a poset from faces and an explicit containment relation.
    pub fn new(
        rank: usize,
        facet_names: Vec<String>,
        faces: Vec<Face>,
        leq: Vec<Vec<bool>>,
    ) -> Result<Self, PosetError> {
        let mut seen = BTreeSet::new();
        for name in &facet_names {
            if !seen.insert(name.as_str()) {
                return Err(PosetError::DuplicateFacet(name.clone()));
            }
        }
        let mut ids = BTreeSet::new();
        for f in &faces {
            if !ids.insert(f.id.as_str()) {
                return Err(PosetError::DuplicateFace(f.id.clone()));
            }
            if let Some(&bad) = f.facets.iter().find(|&&i| i >= facet_names.len()) {
                return Err(PosetError::UnknownFacet { face: f.id.clone(), facet: bad });
            }
        }
        let tops: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].facets.is_empty()).collect();
        if tops.len() != 1 {
            return Err(PosetError::TopFace(tops.len()));
        }
        let mut facet_faces = Vec::with_capacity(facet_names.len());
        for (k, name) in facet_names.iter().enumerate() {
            let hits: Vec<usize> = (0..faces.len())
                .filter(|&i| faces[i].facets.len() == 1 && faces[i].facets.contains(&k))
                .collect();
            if hits.len() != 1 {
                return Err(PosetError::FacetFace(name.clone()));
            }
            facet_faces.push(hits[0]);
        }
        let n = faces.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(PosetError::NotAnOrder("relation has wrong shape".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(PosetError::NotAnOrder(format!("`{}` not below itself", faces[a].id)));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(PosetError::NotAnOrder(format!("`{}` and `{}` are mutually below", faces[a].id, faces[b].id)));
                }
                if leq[a][b] {
                    for c in 0..n {
                        if leq[b][c] && !leq[a][c] {
                            return Err(PosetError::NotAnOrder("not transitive".into()));
                        }
                    }
                }
            }
        }
        for (a, face) in faces.iter().enumerate() {
            for (k, &ff) in facet_faces.iter().enumerate() {
                if face.facets.contains(&k) != leq[a][ff] {
                    return Err(PosetError::InconsistentFacets { face: face.id.clone(), facet: facet_names[k].clone() });
                }
            }
            if !leq[a][tops[0]] {
                return Err(PosetError::NotAnOrder(format!("`{}` not below the whole space", face.id)));
            }
        }
        Ok(FacePoset { rank, facet_names, faces, leq, top: tops[0], facet_faces })
    }

    /// Builds a poset whose order is reverse inclusion of facet sets; distinct
    /// faces with equal facet sets are incomparable.
    pub fn from_facet_sets(rank: usize, facet_names: Vec<String>, faces: Vec<Face>) -> Result<Self, PosetError> {
        let n = faces.len();
        let leq = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| a == b || (faces[b].facets.is_subset(&faces[a].facets) && faces[b].facets != faces[a].facets))
                    .collect()
            })
            .collect();
        Self::new(rank, facet_names, faces, leq)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn facet_count(&self) -> usize {
        self.facet_names.len()
    }

    pub fn facet_names(&self) -> &[String] {
        &self.facet_names
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.id == id)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn facet_face(&self, facet: usize) -> usize {
        self.facet_faces[facet]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn faces_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| self.faces[i].dim == d).collect()
    }

    /// Faces of dimension zero, in listing order.
    pub fn vertices(&self) -> Vec<usize> {
        self.faces_of_dim(0)
    }

    /// Faces contained in `f`, including `f`.
    pub fn below(&self, f: usize) -> Vec<usize> {
        (0..self.faces.len()).filter(|&g| self.leq[g][f]).collect()
    }

    pub fn vertices_of(&self, f: usize) -> Vec<usize> {
        self.below(f).into_iter().filter(|&g| self.faces[g].dim == 0).collect()
    }

    pub fn max_dim(&self) -> usize {
        self.faces.iter().map(|f| f.dim).max().unwrap_or(0)
    }

    /// The face `f` viewed as a face poset in its own right: its facets are
    /// the faces of `f` of dimension `dim f - 1`.
    pub fn face_subposet(&self, f: usize) -> Result<FacePoset, PosetError> {
        let sub = self.below(f);
        let d = self.faces[f].dim;
        let facets: Vec<usize> = sub.iter().copied().filter(|&g| self.faces[g].dim + 1 == d).collect();
        let names = facets.iter().map(|&g| self.faces[g].id.clone()).collect();
        let faces = sub
            .iter()
            .map(|&g| Face {
                id: self.faces[g].id.clone(),
                facets: (0..facets.len()).filter(|&k| self.leq[g][facets[k]]).collect(),
                dim: self.faces[g].dim,
            })
            .collect();
        let leq = sub.iter().map(|&a| sub.iter().map(|&b| self.leq[a][b]).collect()).collect();
        FacePoset::new(d, names, faces, leq)
    }

    /// Faces whose facet sets lie inside `block`, with dimensions shifted so
    /// that the whole space has dimension `rank`.
    fn induced_by_facets(&self, block: &[usize], rank: usize) -> Option<FacePoset> {
        let shift = self.rank.checked_sub(rank)?;
        let pos: HashMap<usize, usize> = block.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let sub: Vec<usize> = (0..self.faces.len())
            .filter(|&g| self.faces[g].facets.iter().all(|f| pos.contains_key(f)))
            .collect();
        let mut faces = Vec::with_capacity(sub.len());
        for &g in &sub {
            let face = &self.faces[g];
            faces.push(Face {
                id: face.id.clone(),
                facets: face.facets.iter().map(|f| pos[f]).collect(),
                dim: face.dim.checked_sub(shift)?,
            });
        }
        let names = block.iter().map(|&f| self.facet_names[f].clone()).collect();
        let leq = sub.iter().map(|&a| sub.iter().map(|&b| self.leq[a][b]).collect()).collect();
        FacePoset::new(rank, names, faces, leq).ok()
    }

    /// Applies a facet renaming/reordering: new facet `i` is old facet `perm[i]`.
    pub fn permute_facets(&self, perm: &[usize]) -> FacePoset {
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let faces = self
            .faces
            .iter()
            .map(|f| Face { id: f.id.clone(), facets: f.facets.iter().map(|&o| inverse[o]).collect(), dim: f.dim })
            .collect();
        let names = perm.iter().map(|&o| self.facet_names[o].clone()).collect();
        FacePoset::new(self.rank, names, faces, self.leq.clone()).expect("facet permutation preserves validity")
    }
}

impl fmt::Display for FacePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<usize> = (0..=self.max_dim()).map(|d| self.faces_of_dim(d).len()).collect();
        write!(f, "face poset of rank {} with {} facets, face counts by dimension {:?}", self.rank, self.facet_count(), counts)
    }
}

/// Prime factor of a product orbit space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    /// `Δ^n`, `n >= 1`, with `n + 1` facets.
    Simplex(usize),
    /// `Σ^m`, the suspension of `Δ^{m-1}`, `m >= 2`, with `m` facets.
    Suspension(usize),
}

impl Factor {
    pub fn rank(self) -> usize {
        match self {
            Factor::Simplex(n) | Factor::Suspension(n) => n,
        }
    }

    pub fn facet_count(self) -> usize {
        match self {
            Factor::Simplex(n) => n + 1,
            Factor::Suspension(m) => m,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Simplex(n) => write!(f, "Delta^{n}"),
            Factor::Suspension(m) => write!(f, "Sigma^{m}"),
        }
    }
}

/// Multiset of prime factors, kept sorted: simplices first, then suspensions,
/// each by ascending dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombinatorialType {
    factors: Vec<Factor>,
}

impl CombinatorialType {
    pub fn new(mut factors: Vec<Factor>) -> Result<Self, PosetError> {
        if factors.is_empty() {
            return Err(PosetError::InvalidType("no factors".into()));
        }
        for f in &factors {
            match *f {
                Factor::Simplex(0) => return Err(PosetError::InvalidType("Delta^0 is not allowed".into())),
                Factor::Suspension(m) if m < 2 => {
                    return Err(PosetError::InvalidType(format!("Sigma^{m} needs m >= 2")))
                }
                _ => {}
            }
        }
        factors.sort();
        Ok(CombinatorialType { factors })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank()).sum()
    }

    pub fn facet_count(&self) -> usize {
        self.factors.iter().map(|f| f.facet_count()).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Simplex(n) => n + 1,
                Factor::Suspension(_) => 2,
            })
            .product()
    }
}

impl fmt::Display for CombinatorialType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// One factor's faces: facet subsets plus an optional pole marker.
struct FactorFaces {
    facets: usize,
    faces: Vec<(BTreeSet<usize>, Option<char>)>,
}

fn factor_faces(factor: Factor) -> FactorFaces {
    let k = factor.facet_count();
    let mut faces = Vec::new();
    for mask in 0u64..(1 << k) {
        let set: BTreeSet<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        if set.len() == k {
            if let Factor::Suspension(_) = factor {
                faces.push((set.clone(), Some('N')));
                faces.push((set, Some('S')));
            }
            continue;
        }
        faces.push((set, None));
    }
    FactorFaces { facets: k, faces }
}

fn factor_leq(a: &(BTreeSet<usize>, Option<char>), b: &(BTreeSet<usize>, Option<char>)) -> bool {
    if a.0 == b.0 {
        a.1 == b.1
    } else {
        b.0.is_subset(&a.0)
    }
}

/// Face poset of `∏ Δ^{n_i} × ∏ Σ^{m_j}`. Facets are named `F1, F2, ...`,
/// simplex factors first, each factor's facets consecutive.
pub fn build_product_poset(ctype: &CombinatorialType) -> FacePoset {
    let factors: Vec<FactorFaces> = ctype.factors().iter().map(|&f| factor_faces(f)).collect();
    let offsets: Vec<usize> = factors
        .iter()
        .scan(0, |acc, f| {
            let o = *acc;
            *acc += f.facets;
            Some(o)
        })
        .collect();
    let names: Vec<String> = (1..=ctype.facet_count()).map(|i| format!("F{i}")).collect();
    let rank = ctype.rank();
    let is_sigma: Vec<bool> = ctype.factors().iter().map(|f| matches!(f, Factor::Suspension(_))).collect();

    // tuples of factor-face indices in mixed radix order
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for ff in &factors {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..ff.faces.len()).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    let mut faces = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let mut set = BTreeSet::new();
        let mut poles = Vec::new();
        for (k, &i) in t.iter().enumerate() {
            let (s, pole) = &factors[k].faces[i];
            set.extend(s.iter().map(|x| x + offsets[k]));
            if is_sigma[k] {
                poles.push(pole.unwrap_or('*'));
            }
        }
        let id = if set.is_empty() {
            "Q".to_string()
        } else {
            let mut id = set.iter().map(|&f| names[f].as_str()).collect::<Vec<_>>().join("&");
            if poles.iter().any(|&p| p != '*') {
                let marks: Vec<String> = poles.iter().map(char::to_string).collect();
                id.push_str(&format!("[{}]", marks.join(",")));
            }
            id
        };
        let dim = rank - set.len();
        faces.push(Face { id, facets: set, dim });
    }
    let leq = tuples
        .iter()
        .map(|a| {
            tuples
                .iter()
                .map(|b| (0..a.len()).all(|k| factor_leq(&factors[k].faces[a[k]], &factors[k].faces[b[k]])))
                .collect()
        })
        .collect();
    FacePoset::new(rank, names, faces, leq).expect("product posets are well formed")
}

/// Face poset of the cube `[-1,1]^d` modulo the global sign flip.
pub fn cube_quotient_poset(d: usize) -> Result<FacePoset, PosetError> {
    if d < 3 {
        return Err(PosetError::CubeDimension(d));
    }
    // patterns with entries in {-1, 0, 1}, first nonzero entry +1
    let mut patterns: Vec<Vec<i8>> = Vec::new();
    for code in 0..3usize.pow(d as u32) {
        let p: Vec<i8> = (0..d).map(|i| [0, 1, -1][code / 3usize.pow(i as u32) % 3]).collect();
        if p.iter().find(|&&x| x != 0) == Some(&1) {
            patterns.push(p);
        }
    }
    let mut all: Vec<Option<Vec<i8>>> = vec![None];
    all.extend(patterns.into_iter().map(Some));
    let names: Vec<String> = (1..=d).map(|i| format!("X{i}")).collect();
    let faces: Vec<Face> = all
        .iter()
        .map(|p| match p {
            None => Face::new("Q", [], d),
            Some(p) => {
                let support: BTreeSet<usize> = (0..d).filter(|&i| p[i] != 0).collect();
                let id: String = p.iter().map(|&x| match x { 1 => '+', -1 => '-', _ => '0' }).collect();
                Face { id, dim: d - support.len(), facets: support }
            }
        })
        .collect();
    let contained = |a: &Option<Vec<i8>>, b: &Option<Vec<i8>>| match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(p), Some(q)) => {
            let supp: Vec<usize> = (0..d).filter(|&i| q[i] != 0).collect();
            if supp.iter().any(|&i| p[i] == 0) {
                return false;
            }
            supp.iter().all(|&i| p[i] == q[i]) || supp.iter().all(|&i| p[i] == -q[i])
        }
    };
    let leq = all.iter().map(|a| all.iter().map(|b| contained(a, b)).collect()).collect();
    FacePoset::new(d, names, faces, leq)
}

/// Outcome of the niceness check: every face of codimension `k` lies in
/// exactly `k` facets and vertices lie in exactly `rank` facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceReport {
    pub nice: bool,
    pub witnesses: Vec<String>,
}

pub fn validate_nice(poset: &FacePoset) -> NiceReport {
    let n = poset.rank();
    let witnesses: Vec<String> = poset
        .faces()
        .iter()
        .filter(|f| f.dim > n || f.facets.len() != n - f.dim)
        .map(|f| f.id.clone())
        .collect();
    NiceReport { nice: witnesses.is_empty(), witnesses }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Clause {
    pub const ALL: [Clause; 6] = [Clause::A, Clause::B, Clause::C, Clause::D, Clause::E, Clause::F];

    pub fn letter(self) -> char {
        match self {
            Clause::A => 'a',
            Clause::B => 'b',
            Clause::C => 'c',
            Clause::D => 'd',
            Clause::E => 'e',
            Clause::F => 'f',
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Clause::A => "the vertex-edge graph of each face is connected",
            Clause::B => "each face contains at least one vertex",
            Clause::C => "each face of codimension k lies in exactly k facets",
            Clause::D => "each edge contains exactly two vertices",
            Clause::E => "each two-dimensional face contains at most four vertices",
            Clause::F => "no face of dimension d >= 3 is equivalent to the cube quotient [-1,1]^d/{+-id}",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseResult {
    pub clause: Clause,
    pub holds: bool,
    /// First offending face, if any.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub clauses: Vec<ClauseResult>,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn clause(&self, c: Clause) -> &ClauseResult {
        &self.clauses[c as usize]
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClauseResult> {
        self.clauses.iter().filter(|c| !c.holds)
    }
}

fn connected(poset: &FacePoset, face: usize) -> bool {
    let below = poset.below(face);
    let verts: Vec<usize> = below.iter().copied().filter(|&g| poset.face(g).dim == 0).collect();
    if verts.len() <= 1 {
        return true;
    }
    let index: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for &e in below.iter().filter(|&&g| poset.face(g).dim == 1) {
        let ends: Vec<usize> = poset.vertices_of(e).iter().map(|v| index[v]).collect();
        for w in ends.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (0..verts.len()).all(|i| find(&mut parent, i) == root)
}

fn is_cube_quotient(poset: &FacePoset, face: usize) -> bool {
    let d = poset.face(face).dim;
    let verts = poset.vertices_of(face).len();
    if d < 3 || d >= usize::BITS as usize || verts != 1 << (d - 1) {
        return false;
    }
    let Ok(sub) = poset.face_subposet(face) else { return false };
    if sub.facet_count() != d {
        return false;
    }
    let cube = cube_quotient_poset(d).expect("d >= 3");
    poset_isomorphic(&sub, &cube).is_some()
}

/// Checks the six combinatorial conditions on the face poset of the orbit
/// space of a simply connected rationally elliptic torus orbifold.
pub fn check_properties(poset: &FacePoset) -> PropertyReport {
    let n = poset.rank();
    let all: Vec<usize> = (0..poset.faces().len()).collect();
    let first = |pred: &dyn Fn(usize) -> bool| all.iter().copied().find(|&f| !pred(f));
    let witnesses = [
        first(&|f| connected(poset, f)),
        first(&|f| !poset.vertices_of(f).is_empty()),
        first(&|f| {
            let above = (0..poset.facet_count()).filter(|&k| poset.leq(f, poset.facet_face(k))).count();
            poset.face(f).dim <= n && above == n - poset.face(f).dim
        }),
        first(&|f| poset.face(f).dim != 1 || poset.vertices_of(f).len() == 2),
        first(&|f| poset.face(f).dim != 2 || poset.vertices_of(f).len() <= 4),
        first(&|f| !is_cube_quotient(poset, f)),
    ];
    let clauses = Clause::ALL
        .iter()
        .zip(witnesses)
        .map(|(&clause, w)| ClauseResult { clause, holds: w.is_none(), witness: w.map(|f| poset.face(f).id.clone()) })
        .collect();
    PropertyReport { clauses }
}

type Signature = (usize, Vec<usize>, Vec<usize>);

fn signatures(p: &FacePoset) -> Vec<Signature> {
    let width = p.max_dim() + 1;
    (0..p.faces().len())
        .map(|f| {
            let mut below = vec![0; width];
            let mut above = vec![0; width];
            for g in 0..p.faces().len() {
                if p.leq(g, f) {
                    below[p.face(g).dim] += 1;
                }
                if p.leq(f, g) {
                    above[p.face(g).dim] += 1;
                }
            }
            (p.face(f).dim, below, above)
        })
        .collect()
}

/// Searches for a dimension- and containment-preserving bijection between
/// faces. Returns `map` with `map[face of p] = face of q`.
pub fn poset_isomorphic(p: &FacePoset, q: &FacePoset) -> Option<Vec<usize>> {
    let n = p.faces().len();
    if n != q.faces().len() || p.facet_count() != q.facet_count() || p.max_dim() != q.max_dim() {
        return None;
    }
    let sp = signatures(p);
    let sq = signatures(q);
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&f| (std::cmp::Reverse(p.face(f).dim), f));
    let candidates: Vec<Vec<usize>> = order.iter().map(|&f| (0..n).filter(|&g| sq[g] == sp[f]).collect()).collect();

    struct Search<'a> {
        p: &'a FacePoset,
        q: &'a FacePoset,
        order: Vec<usize>,
        candidates: Vec<Vec<usize>>,
        map: Vec<Option<usize>>,
        used: Vec<bool>,
    }
    impl Search<'_> {
        fn consistent(&self, depth: usize, g: usize) -> bool {
            let f = self.order[depth];
            self.order[..depth].iter().all(|&h| {
                let gh = self.map[h].expect("assigned");
                self.p.leq(f, h) == self.q.leq(g, gh) && self.p.leq(h, f) == self.q.leq(gh, g)
            })
        }
        fn run(&mut self, depth: usize) -> bool {
            if depth == self.order.len() {
                return true;
            }
            let f = self.order[depth];
            for i in 0..self.candidates[depth].len() {
                let g = self.candidates[depth][i];
                if self.used[g] || !self.consistent(depth, g) {
                    continue;
                }
                self.used[g] = true;
                self.map[f] = Some(g);
                if self.run(depth + 1) {
                    return true;
                }
                self.used[g] = false;
                self.map[f] = None;
            }
            false
        }
    }
    let mut s = Search { p, q, order, candidates, map: vec![None; n], used: vec![false; n] };
    if s.run(0) {
        Some(s.map.into_iter().map(|x| x.expect("complete")).collect())
    } else {
        None
    }
}

/// One factor of a product decomposition, with the input facets it owns in
/// the factor's construction order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorBlock {
    pub factor: Factor,
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    pub ctype: CombinatorialType,
    pub blocks: Vec<FactorBlock>,
    /// The model poset `build_product_poset(ctype)`.
    pub product: FacePoset,
    /// `iso[face of input] = face of product`.
    pub iso: Vec<usize>,
}

impl ProductDecomposition {
    /// Input facet corresponding to each facet of the product, in product order.
    pub fn facet_order(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.facets.iter().copied()).collect()
    }
}

fn block_factor(poset: &FacePoset, block: &[usize], cache: &mut BTreeMap<Vec<usize>, Option<Factor>>) -> Option<Factor> {
    if let Some(hit) = cache.get(block) {
        return *hit;
    }
    let s = block.len();
    let mut found = None;
    for factor in [Factor::Simplex(s - 1), Factor::Suspension(s)] {
        let Some(sub) = poset.induced_by_facets(block, factor.rank()) else { continue };
        let model = build_product_poset(&CombinatorialType::new(vec![factor]).expect("valid factor"));
        if poset_isomorphic(&sub, &model).is_some() {
            found = Some(factor);
            break;
        }
    }
    cache.insert(block.to_vec(), found);
    found
}

/// Recognizes `poset` as the face poset of a product of simplices and
/// suspensions of simplices, returning the factors and an explicit
/// isomorphism onto [`build_product_poset`].
pub fn decompose_product(poset: &FacePoset) -> Option<ProductDecomposition> {
    let facets = poset.facet_count();
    // #facets = rank + #simplex factors
    let simplices = facets.checked_sub(poset.rank())?;
    let mut cache = BTreeMap::new();
    let mut blocks: Vec<(Factor, Vec<usize>)> = Vec::new();
    let mut assigned = vec![false; facets];
    search_partitions(poset, &mut assigned, &mut blocks, simplices, &mut cache)
}

fn search_partitions(
    poset: &FacePoset,
    assigned: &mut Vec<bool>,
    blocks: &mut Vec<(Factor, Vec<usize>)>,
    simplices_left: usize,
    cache: &mut BTreeMap<Vec<usize>, Option<Factor>>,
) -> Option<ProductDecomposition> {
    let Some(first) = assigned.iter().position(|&a| !a) else {
        return (simplices_left == 0).then(|| certify(poset, blocks)).flatten();
    };
    let rest: Vec<usize> = (first + 1..assigned.len()).filter(|&i| !assigned[i]).collect();
    for mask in 1u64..(1 << rest.len()) {
        let mut block = vec![first];
        block.extend((0..rest.len()).filter(|i| mask >> i & 1 == 1).map(|i| rest[i]));
        let Some(factor) = block_factor(poset, &block, cache) else { continue };
        let uses = usize::from(matches!(factor, Factor::Simplex(_)));
        if uses > simplices_left {
            continue;
        }
        for &f in &block {
            assigned[f] = true;
        }
        blocks.push((factor, block.clone()));
        let found = search_partitions(poset, assigned, blocks, simplices_left - uses, cache);
        blocks.pop();
        for &f in &block {
            assigned[f] = false;
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

fn certify(poset: &FacePoset, blocks: &[(Factor, Vec<usize>)]) -> Option<ProductDecomposition> {
    let ctype = CombinatorialType::new(blocks.iter().map(|b| b.0).collect()).ok()?;
    if ctype.rank() != poset.rank() {
        return None;
    }
    let product = build_product_poset(&ctype);
    let iso = poset_isomorphic(poset, &product)?;
    // read the facet blocks off the isomorphism
    let mut inverse_facet = vec![0; product.facet_count()];
    for k in 0..poset.facet_count() {
        let image = iso[poset.facet_face(k)];
        let j = *product.face(image).facets.iter().next().expect("facets map to facets");
        inverse_facet[j] = k;
    }
    let mut offset = 0;
    let blocks = ctype
        .factors()
        .iter()
        .map(|&factor| {
            let facets = inverse_facet[offset..offset + factor.facet_count()].to_vec();
            offset += factor.facet_count();
            FactorBlock { factor, facets }
        })
        .collect();
    Some(ProductDecomposition { ctype, blocks, product, iso })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    /// Face index of the edge.
    pub face: usize,
    /// Positions of the endpoints in [`VertexEdgeGraph::vertices`].
    pub ends: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexEdgeGraph {
    /// Face indices of the vertices.
    pub vertices: Vec<usize>,
    pub edges: Vec<GraphEdge>,
}

impl VertexEdgeGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.ends.0 == v || e.ends.1 == v).count()
    }
}

pub fn vertex_edge_graph(poset: &FacePoset) -> Result<VertexEdgeGraph, PosetError> {
    let vertices = poset.vertices();
    let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for e in poset.faces_of_dim(1) {
        let ends = poset.vertices_of(e);
        if ends.len() != 2 {
            return Err(PosetError::EdgeVertexCount { edge: poset.face(e).id.clone(), count: ends.len() });
        }
        edges.push(GraphEdge { face: e, ends: (pos[&ends[0]], pos[&ends[1]]) });
    }
    Ok(VertexEdgeGraph { vertices, edges })
}
