//! Finite pointed simplicial sets.
//!
//! A complex is presented by its nondegenerate simplices ("generators"),
//! each carrying its ordered list of faces.  Arbitrary simplices are
//! `SimplexRef`s: a generator together with a degeneracy word in
//! Eilenberg–Zilber normal form (strictly decreasing indices, so the
//! simplex is `s_{i1} s_{i2} … s_{ik} g` with `i1 > i2 > … > ik`).  All
//! operations return refs in normal form, which makes equality of
//! simplices literal equality of refs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SSetError {
    #[error("basepoint `{0}` is missing or not of dimension 0")]
    BadBasepoint(String),
    #[error("generator `{gen}`: {reason}")]
    BadGenerator { gen: String, reason: String },
    #[error("not a subcomplex: `{0}` has a face outside the set")]
    NotSubcomplex(String),
    #[error("subcomplex to collapse must contain the basepoint")]
    BasepointNotCollapsed,
    #[error("map does not commute with face {index} on generator `{gen}`")]
    NotSimplicial { gen: String, index: usize },
    #[error("map must send basepoint to basepoint")]
    NotPointed,
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A simplex of a complex: degeneracies applied to a nondegenerate generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimplexRef {
    pub gen: String,
    #[serde(rename = "degens")]
    pub word: Vec<usize>,
}

impl SimplexRef {
    pub fn nondeg(gen: impl Into<String>) -> SimplexRef {
        SimplexRef { gen: gen.into(), word: Vec::new() }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.word.is_empty()
    }

    /// Apply `s_i`, renormalizing via `s_i s_j = s_{j+1} s_i` for `i ≤ j`.
    pub fn degeneracy(&self, i: usize) -> SimplexRef {
        let mut word = self.word.clone();
        let mut pos = 0;
        while pos < word.len() && i <= word[pos] {
            word[pos] += 1;
            pos += 1;
        }
        word.insert(pos, i);
        SimplexRef { gen: self.gen.clone(), word }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub dim: usize,
    /// Faces `d_0 … d_n` (empty for dimension 0).
    pub faces: Vec<SimplexRef>,
}

/// A finite pointed simplicial set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSimplicialSet {
    pub generators: BTreeMap<String, Generator>,
    pub basepoint: String,
}

/// All degeneracy words of the given length applicable to a simplex of the
/// given dimension, in normal form.  There are C(dim+len, len) of them.
pub fn degeneracy_words(dim: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(
        prev: Option<usize>,
        cur_dim: usize,
        remaining: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if remaining == 0 {
            let mut w = acc.clone();
            w.reverse();
            out.push(w);
            return;
        }
        let lo = prev.map_or(0, |p| p + 1);
        for i in lo..=cur_dim {
            acc.push(i);
            go(Some(i), cur_dim + 1, remaining - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(None, dim, len, &mut Vec::new(), &mut out);
    out
}

/// The unique simplex of dimension `m` over a 0-dimensional generator.
pub fn basepoint_simplex(bp: &str, m: usize) -> SimplexRef {
    SimplexRef { gen: bp.to_string(), word: (0..m).rev().collect() }
}

impl FiniteSimplicialSet {
    pub fn gen_dim(&self, id: &str) -> usize {
        self.generators[id].dim
    }

    pub fn dim_of(&self, r: &SimplexRef) -> usize {
        self.gen_dim(&r.gen) + r.word.len()
    }

    /// Largest dimension carrying a nondegenerate simplex.
    pub fn max_dim(&self) -> usize {
        self.generators.values().map(|g| g.dim).max().unwrap_or(0)
    }

    pub fn basepoint_ref(&self, m: usize) -> SimplexRef {
        basepoint_simplex(&self.basepoint, m)
    }

    /// The zero-point complex.
    pub fn point() -> FiniteSimplicialSet {
        let mut generators = BTreeMap::new();
        generators.insert("*".to_string(), Generator { dim: 0, faces: vec![] });
        FiniteSimplicialSet { generators, basepoint: "*".to_string() }
    }

    /// `d_i`, computed by commuting the face through the degeneracy word
    /// (`d_i s_j = s_{j−1} d_i` for `i < j`, cancellation for `i ∈ {j, j+1}`,
    /// `d_i s_j = s_j d_{i−1}` for `i > j+1`) and then using the stored face
    /// of the generator.
    pub fn face(&self, r: &SimplexRef, i: usize) -> SimplexRef {
        let n = self.dim_of(r);
        assert!(n > 0 && i <= n, "face index {i} out of range for dimension {n}");
        let mut i = i;
        let mut prefix: Vec<usize> = Vec::new();
        for (t, &j) in r.word.iter().enumerate() {
            if i == j || i == j + 1 {
                let mut out =
                    SimplexRef { gen: r.gen.clone(), word: r.word[t + 1..].to_vec() };
                for &p in prefix.iter().rev() {
                    out = out.degeneracy(p);
                }
                return out;
            } else if i < j {
                prefix.push(j - 1);
            } else {
                prefix.push(j);
                i -= 1;
            }
        }
        let mut out = self.generators[&r.gen].faces[i].clone();
        for &p in prefix.iter().rev() {
            out = out.degeneracy(p);
        }
        out
    }

    pub fn degeneracy(&self, r: &SimplexRef, i: usize) -> SimplexRef {
        assert!(i <= self.dim_of(r), "degeneracy index out of range");
        r.degeneracy(i)
    }

    /// All simplices of dimension `n`, in a deterministic order.
    pub fn simplices_at(&self, n: usize) -> Vec<SimplexRef> {
        let mut out = Vec::new();
        for (id, g) in &self.generators {
            if g.dim > n {
                continue;
            }
            for word in degeneracy_words(g.dim, n - g.dim) {
                out.push(SimplexRef { gen: id.clone(), word });
            }
        }
        out
    }

    /// Functorial action of a monotone map `u : [m] → [n]` on an
    /// `n`-simplex, by epi–mono factorization into faces and degeneracies.
    pub fn apply_operator(&self, r: &SimplexRef, u: &[usize]) -> SimplexRef {
        let n = self.dim_of(r);
        assert!(!u.is_empty() && u.windows(2).all(|w| w[0] <= w[1]) && *u.last().unwrap() <= n);
        if u.len() == n + 1 && u.iter().enumerate().all(|(k, &v)| v == k) {
            return r.clone();
        }
        let image: BTreeSet<usize> = u.iter().copied().collect();
        if let Some(i) = (0..=n).rev().find(|v| !image.contains(v)) {
            let r2 = self.face(r, i);
            let u2: Vec<usize> =
                u.iter().map(|&v| if v > i { v - 1 } else { v }).collect();
            return self.apply_operator(&r2, &u2);
        }
        let j = (0..u.len() - 1).find(|&k| u[k] == u[k + 1]).unwrap();
        let mut u2 = u.to_vec();
        u2.remove(j);
        self.apply_operator(r, &u2).degeneracy(j)
    }

    /// True iff levels 0 and 1 each contain exactly one simplex.
    pub fn is_one_reduced(&self) -> bool {
        self.simplices_at(0).len() == 1 && self.simplices_at(1).len() == 1
    }

    /// Validate the presentation: basepoint, face dimensions, word
    /// well-formedness, and the simplicial identities `d_i d_j = d_{j−1} d_i`.
    pub fn validate(&self) -> Result<(), SSetError> {
        match self.generators.get(&self.basepoint) {
            Some(g) if g.dim == 0 => {}
            _ => return Err(SSetError::BadBasepoint(self.basepoint.clone())),
        }
        for (id, g) in &self.generators {
            let bad = |reason: String| SSetError::BadGenerator { gen: id.clone(), reason };
            let expected = if g.dim == 0 { 0 } else { g.dim + 1 };
            if g.faces.len() != expected {
                return Err(bad(format!(
                    "expected {expected} faces, found {}",
                    g.faces.len()
                )));
            }
            for (i, f) in g.faces.iter().enumerate() {
                let fg = self
                    .generators
                    .get(&f.gen)
                    .ok_or_else(|| bad(format!("face {i} references unknown `{}`", f.gen)))?;
                if !f.word.windows(2).all(|w| w[0] > w[1]) {
                    return Err(bad(format!("face {i} has a non-normalized word")));
                }
                for (t, &w) in f.word.iter().enumerate() {
                    if w > fg.dim + (f.word.len() - 1 - t) {
                        return Err(bad(format!("face {i} has an out-of-range word")));
                    }
                }
                if fg.dim + f.word.len() + 1 != g.dim {
                    return Err(bad(format!("face {i} has the wrong dimension")));
                }
            }
        }
        for (id, g) in &self.generators {
            if g.dim < 2 {
                continue;
            }
            let r = SimplexRef::nondeg(id.clone());
            for j in 1..=g.dim {
                for i in 0..j {
                    let lhs = self.face(&self.face(&r, j), i);
                    let rhs = self.face(&self.face(&r, i), j - 1);
                    if lhs != rhs {
                        return Err(SSetError::BadGenerator {
                            gen: id.clone(),
                            reason: format!("d_{i} d_{j} ≠ d_{} d_{i}", j - 1),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let dto = ComplexDto {
            generators: self
                .generators
                .iter()
                .map(|(id, g)| GeneratorDto {
                    id: id.clone(),
                    dim: g.dim,
                    faces: g.faces.clone(),
                })
                .collect(),
            basepoint: self.basepoint.clone(),
        };
        let mut s = serde_json::to_string_pretty(&dto).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<FiniteSimplicialSet, SSetError> {
        let dto: ComplexDto = serde_json::from_str(text)?;
        let mut generators = BTreeMap::new();
        for g in dto.generators {
            if generators
                .insert(g.id.clone(), Generator { dim: g.dim, faces: g.faces })
                .is_some()
            {
                return Err(SSetError::BadGenerator {
                    gen: g.id,
                    reason: "duplicate id".to_string(),
                });
            }
        }
        let out = FiniteSimplicialSet { generators, basepoint: dto.basepoint };
        out.validate()?;
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct GeneratorDto {
    id: String,
    dim: usize,
    faces: Vec<SimplexRef>,
}

#[derive(Serialize, Deserialize)]
struct ComplexDto {
    generators: Vec<GeneratorDto>,
    basepoint: String,
}

/// A pointed simplicial map, determined by where generators go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SSetMap {
    pub source: FiniteSimplicialSet,
    pub target: FiniteSimplicialSet,
    pub assignment: BTreeMap<String, SimplexRef>,
}

impl SSetMap {
    /// Build a map and check that it is pointed and commutes with faces.
    pub fn new(
        source: FiniteSimplicialSet,
        target: FiniteSimplicialSet,
        assignment: BTreeMap<String, SimplexRef>,
    ) -> Result<SSetMap, SSetError> {
        let map = SSetMap { source, target, assignment };
        map.check()?;
        Ok(map)
    }

    fn check(&self) -> Result<(), SSetError> {
        let bp_image = &self.assignment[&self.source.basepoint];
        if *bp_image != SimplexRef::nondeg(self.target.basepoint.clone()) {
            return Err(SSetError::NotPointed);
        }
        for (id, g) in &self.source.generators {
            let image = &self.assignment[id];
            assert_eq!(self.target.dim_of(image), g.dim, "image of `{id}` has wrong dimension");
            for i in 0..g.faces.len() {
                if self.apply(&g.faces[i]) != self.target.face(image, i) {
                    return Err(SSetError::NotSimplicial { gen: id.clone(), index: i });
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, r: &SimplexRef) -> SimplexRef {
        let mut out = self.assignment[&r.gen].clone();
        for &w in r.word.iter().rev() {
            out = out.degeneracy(w);
        }
        out
    }

    pub fn identity(x: &FiniteSimplicialSet) -> SSetMap {
        let assignment = x
            .generators
            .keys()
            .map(|id| (id.clone(), SimplexRef::nondeg(id.clone())))
            .collect();
        SSetMap { source: x.clone(), target: x.clone(), assignment }
    }

    /// The constant map to the basepoint of `y`.
    pub fn constant(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> SSetMap {
        let assignment = x
            .generators
            .iter()
            .map(|(id, g)| (id.clone(), basepoint_simplex(&y.basepoint, g.dim)))
            .collect();
        SSetMap { source: x.clone(), target: y.clone(), assignment }
    }

    /// self after other: (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &SSetMap) -> SSetMap {
        assert_eq!(other.target, self.source, "composition mismatch");
        let assignment = other
            .assignment
            .iter()
            .map(|(id, r)| (id.clone(), self.apply(r)))
            .collect();
        SSetMap { source: other.source.clone(), target: self.target.clone(), assignment }
    }

    pub fn equals(&self, other: &SSetMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.assignment == other.assignment
    }

    /// A simplicial map is an isomorphism iff it is a levelwise bijection
    /// up to the larger of the two generator dimension bounds.
    pub fn is_isomorphism(&self) -> bool {
        let bound = self.source.max_dim().max(self.target.max_dim());
        for n in 0..=bound {
            let mut images: Vec<SimplexRef> =
                self.source.simplices_at(n).iter().map(|r| self.apply(r)).collect();
            images.sort();
            if images.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
            if images != self.target.simplices_at(n) {
                return false;
            }
        }
        true
    }
}

/// The standard simplex Δⁿ, pointed at vertex 0.  Generator ids are the
/// vertex subsets, dot-separated ("0", "0.1", "0.1.2", …).
pub fn standard_simplex(n: usize) -> FiniteSimplicialSet {
    fn id_of(vertices: &[usize]) -> String {
        vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
    }
    let mut generators = BTreeMap::new();
    // Nonempty subsets of {0, …, n}.
    for mask in 1u32..(1 << (n + 1)) {
        let vertices: Vec<usize> = (0..=n).filter(|v| mask & (1 << v) != 0).collect();
        let dim = vertices.len() - 1;
        let faces = if dim == 0 {
            vec![]
        } else {
            (0..=dim)
                .map(|i| {
                    let mut w = vertices.clone();
                    w.remove(i);
                    SimplexRef::nondeg(id_of(&w))
                })
                .collect()
        };
        generators.insert(id_of(&vertices), Generator { dim, faces });
    }
    FiniteSimplicialSet { generators, basepoint: "0".to_string() }
}

/// The boundary ∂Δⁿ: the standard simplex minus its top cell.
pub fn boundary(n: usize) -> FiniteSimplicialSet {
    let mut x = standard_simplex(n);
    let top: Vec<String> =
        x.generators.iter().filter(|(_, g)| g.dim == n).map(|(id, _)| id.clone()).collect();
    for id in top {
        x.generators.remove(&id);
    }
    x
}

/// The sphere Sⁿ = Δⁿ/∂Δⁿ: one vertex and one `n`-cell.
pub fn sphere(n: usize) -> FiniteSimplicialSet {
    assert!(n >= 1, "sphere requires n ≥ 1");
    let delta = standard_simplex(n);
    let collapse: BTreeSet<String> = delta
        .generators
        .iter()
        .filter(|(_, g)| g.dim < n)
        .map(|(id, _)| id.clone())
        .collect();
    quotient(&delta, &collapse).expect("boundary is a subcomplex")
}

/// Δᵏ with a disjoint basepoint "+" adjoined (the pointed simplex Δᵏ₊).
pub fn standard_simplex_plus(k: usize) -> FiniteSimplicialSet {
    let mut x = standard_simplex(k);
    x.generators.insert("+".to_string(), Generator { dim: 0, faces: vec![] });
    x.basepoint = "+".to_string();
    x
}

/// Collapse a subcomplex (given by generator ids, containing the basepoint)
/// to the basepoint.
pub fn quotient(
    x: &FiniteSimplicialSet,
    collapse: &BTreeSet<String>,
) -> Result<FiniteSimplicialSet, SSetError> {
    if !collapse.contains(&x.basepoint) {
        return Err(SSetError::BasepointNotCollapsed);
    }
    for id in collapse {
        let g = x
            .generators
            .get(id)
            .ok_or_else(|| SSetError::NotSubcomplex(id.clone()))?;
        for f in &g.faces {
            if !collapse.contains(&f.gen) {
                return Err(SSetError::NotSubcomplex(id.clone()));
            }
        }
    }
    let bp = x.basepoint.clone();
    let mut generators = BTreeMap::new();
    generators.insert(bp.clone(), Generator { dim: 0, faces: vec![] });
    for (id, g) in &x.generators {
        if collapse.contains(id) {
            continue;
        }
        let faces = g
            .faces
            .iter()
            .map(|f| {
                if collapse.contains(&f.gen) {
                    basepoint_simplex(&bp, g.dim - 1)
                } else {
                    f.clone()
                }
            })
            .collect();
        generators.insert(id.clone(), Generator { dim: g.dim, faces });
    }
    Ok(FiniteSimplicialSet { generators, basepoint: bp })
}

/// The image of a simplex of `x` in the quotient of `x` by `collapse`.
pub fn quotient_ref(
    x: &FiniteSimplicialSet,
    collapse: &BTreeSet<String>,
    r: &SimplexRef,
) -> SimplexRef {
    if collapse.contains(&r.gen) {
        basepoint_simplex(&x.basepoint, x.dim_of(r))
    } else {
        r.clone()
    }
}

/// Smallest subcomplex of `x` containing the given simplices and the
/// basepoint, together with its inclusion.
pub fn subcomplex_generated(
    x: &FiniteSimplicialSet,
    seeds: &[SimplexRef],
) -> (FiniteSimplicialSet, SSetMap) {
    let mut keep: BTreeSet<String> = BTreeSet::new();
    keep.insert(x.basepoint.clone());
    let mut stack: Vec<String> = seeds.iter().map(|r| r.gen.clone()).collect();
    while let Some(id) = stack.pop() {
        if !keep.insert(id.clone()) {
            continue;
        }
        for f in &x.generators[&id].faces {
            stack.push(f.gen.clone());
        }
    }
    let generators = keep
        .iter()
        .map(|id| (id.clone(), x.generators[id].clone()))
        .collect();
    let sub = FiniteSimplicialSet { generators, basepoint: x.basepoint.clone() };
    let assignment = keep
        .iter()
        .map(|id| (id.clone(), SimplexRef::nondeg(id.clone())))
        .collect();
    let incl = SSetMap { source: sub.clone(), target: x.clone(), assignment };
    (sub, incl)
}

/// Wedge X ∨ Y: disjoint union with basepoints identified.  Generators of
/// the summands are prefixed `l:` and `r:`; the shared basepoint is `*`.
pub fn wedge(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> FiniteSimplicialSet {
    let mut generators = BTreeMap::new();
    generators.insert("*".to_string(), Generator { dim: 0, faces: vec![] });
    let mut add = |z: &FiniteSimplicialSet, prefix: &str| {
        let rename = |id: &str| {
            if id == z.basepoint {
                "*".to_string()
            } else {
                format!("{prefix}{id}")
            }
        };
        for (id, g) in &z.generators {
            if *id == z.basepoint {
                continue;
            }
            let faces = g
                .faces
                .iter()
                .map(|f| SimplexRef { gen: rename(&f.gen), word: f.word.clone() })
                .collect();
            generators.insert(rename(id), Generator { dim: g.dim, faces });
        }
    };
    add(x, "l:");
    add(y, "r:");
    FiniteSimplicialSet { generators, basepoint: "*".to_string() }
}

/// The inclusion of the left (side = 0) or right (side = 1) summand of a
/// wedge built by [`wedge`].
pub fn wedge_inclusion(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
    side: usize,
) -> SSetMap {
    let w = wedge(x, y);
    let (z, prefix) = if side == 0 { (x, "l:") } else { (y, "r:") };
    let assignment = z
        .generators
        .keys()
        .map(|id| {
            let image = if *id == z.basepoint {
                SimplexRef::nondeg("*")
            } else {
                SimplexRef::nondeg(format!("{prefix}{id}"))
            };
            (id.clone(), image)
        })
        .collect();
    SSetMap { source: z.clone(), target: w, assignment }
}

fn pair_id(a: &SimplexRef, b: &SimplexRef) -> String {
    format!("<{}{:?}|{}{:?}>", a.gen, a.word, b.gen, b.word)
}

fn words_disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|i| !b.contains(i))
}

/// Normal form of the pair (a, b) as a simplex of the product: repeatedly
/// split off the largest index common to both degeneracy words.
pub fn pair_normal_form(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
    a: &SimplexRef,
    b: &SimplexRef,
) -> SimplexRef {
    let mut a = a.clone();
    let mut b = b.clone();
    let mut outer = Vec::new();
    loop {
        match a.word.iter().filter(|i| b.word.contains(i)).max().copied() {
            Some(i) => {
                a = x.face(&a, i);
                b = y.face(&b, i);
                outer.push(i);
            }
            None => break,
        }
    }
    let mut r = SimplexRef::nondeg(pair_id(&a, &b));
    for &i in outer.iter().rev() {
        r = r.degeneracy(i);
    }
    r
}

/// Product X × Y, pointed at the pair of basepoints.  Generators are the
/// jointly nondegenerate pairs of simplices of equal dimension.
pub fn product(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> FiniteSimplicialSet {
    product_with_table(x, y).0
}

/// Product together with the components of each generator.
pub fn product_with_table(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
) -> (FiniteSimplicialSet, BTreeMap<String, (SimplexRef, SimplexRef)>) {
    let bound = x.max_dim() + y.max_dim();
    let mut generators = BTreeMap::new();
    let mut table = BTreeMap::new();
    for n in 0..=bound {
        for a in x.simplices_at(n) {
            for b in y.simplices_at(n) {
                if !words_disjoint(&a.word, &b.word) {
                    continue;
                }
                let faces = if n == 0 {
                    vec![]
                } else {
                    (0..=n)
                        .map(|i| pair_normal_form(x, y, &x.face(&a, i), &y.face(&b, i)))
                        .collect()
                };
                let id = pair_id(&a, &b);
                generators.insert(id.clone(), Generator { dim: n, faces });
                table.insert(id, (a.clone(), b.clone()));
            }
        }
    }
    let bp = pair_id(&x.basepoint_ref(0), &y.basepoint_ref(0));
    (FiniteSimplicialSet { generators, basepoint: bp }, table)
}

/// The product of two maps, landing in `product(x', y')`.
pub fn product_map(f: &SSetMap, g: &SSetMap) -> SSetMap {
    let (source, table) = product_with_table(&f.source, &g.source);
    let target = product(&f.target, &g.target);
    let assignment = table
        .iter()
        .map(|(id, (a, b))| {
            let image =
                pair_normal_form(&f.target, &g.target, &f.apply(a), &g.apply(b));
            (id.clone(), image)
        })
        .collect();
    SSetMap { source, target, assignment }
}

/// Generator ids of the wedge X∨Y sitting inside X×Y (pairs where one
/// component is a basepoint degeneracy).
fn axes_inside_product(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
    table: &BTreeMap<String, (SimplexRef, SimplexRef)>,
) -> BTreeSet<String> {
    table
        .iter()
        .filter(|(_, (a, b))| a.gen == x.basepoint || b.gen == y.basepoint)
        .map(|(id, _)| id.clone())
        .collect()
}

/// Smash product X ∧ Y = (X × Y)/(X ∨ Y).
pub fn smash(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> FiniteSimplicialSet {
    let (p, table) = product_with_table(x, y);
    let axes = axes_inside_product(x, y, &table);
    quotient(&p, &axes).expect("wedge is a subcomplex of the product")
}

/// The image of the pair (a, b) in the smash product X ∧ Y.
pub fn smash_pair_ref(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
    xy: &FiniteSimplicialSet,
    a: &SimplexRef,
    b: &SimplexRef,
) -> SimplexRef {
    let r = pair_normal_form(x, y, a, b);
    if xy.generators.contains_key(&r.gen) {
        r
    } else {
        // The underlying pair lies on an axis and is collapsed.
        basepoint_simplex(&xy.basepoint, x.dim_of(a))
    }
}

/// The smash of two maps, landing in `smash(x', y')`.
pub fn smash_map(f: &SSetMap, g: &SSetMap) -> SSetMap {
    let (p, table) = product_with_table(&f.source, &g.source);
    let axes = axes_inside_product(&f.source, &g.source, &table);
    let source = quotient(&p, &axes).expect("wedge is a subcomplex");
    let target = smash(&f.target, &g.target);
    let assignment = source
        .generators
        .keys()
        .map(|id| {
            let image = if *id == source.basepoint {
                SimplexRef::nondeg(target.basepoint.clone())
            } else {
                let (a, b) = &table[id];
                smash_pair_ref(&f.target, &g.target, &target, &f.apply(a), &g.apply(b))
            };
            (id.clone(), image)
        })
        .collect();
    SSetMap { source, target, assignment }
}

/// The swap isomorphism X ∧ Y → Y ∧ X.
pub fn smash_swap(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> SSetMap {
    let (p, table) = product_with_table(x, y);
    let axes = axes_inside_product(x, y, &table);
    let source = quotient(&p, &axes).expect("wedge is a subcomplex");
    let target = smash(y, x);
    let assignment = source
        .generators
        .keys()
        .map(|id| {
            let image = if *id == source.basepoint {
                SimplexRef::nondeg(target.basepoint.clone())
            } else {
                let (a, b) = &table[id];
                smash_pair_ref(y, x, &target, b, a)
            };
            (id.clone(), image)
        })
        .collect();
    SSetMap { source, target, assignment }
}

/// The levelwise equalizer of two parallel maps, as a subcomplex of their
/// common source, with its inclusion.
pub fn equalizer(f: &SSetMap, g: &SSetMap) -> (FiniteSimplicialSet, SSetMap) {
    assert_eq!(f.source, g.source, "equalizer needs parallel maps");
    assert_eq!(f.target, g.target, "equalizer needs parallel maps");
    let seeds: Vec<SimplexRef> = f
        .source
        .generators
        .keys()
        .filter(|id| f.assignment[*id] == g.assignment[*id])
        .map(|id| SimplexRef::nondeg(id.clone()))
        .collect();
    // Agreement is face-closed, so the agreeing generators already form a
    // subcomplex; closure only adds the basepoint when nothing else agrees.
    subcomplex_generated(&f.source, &seeds)
}

/// All pointed simplicial maps X → Y, by exhaustive search over generator
/// images with face-compatibility pruning.
pub fn enumerate_maps(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> Vec<SSetMap> {
    let mut gens: Vec<(&String, &Generator)> =
        x.generators.iter().filter(|(id, _)| **id != x.basepoint).collect();
    gens.sort_by_key(|(id, g)| (g.dim, (*id).clone()));

    let apply = |partial: &BTreeMap<String, SimplexRef>, r: &SimplexRef| {
        let mut out = partial[&r.gen].clone();
        for &w in r.word.iter().rev() {
            out = out.degeneracy(w);
        }
        out
    };

    let mut initial = BTreeMap::new();
    initial.insert(x.basepoint.clone(), SimplexRef::nondeg(y.basepoint.clone()));
    let mut partials = vec![initial];
    for (id, g) in gens {
        let candidates = y.simplices_at(g.dim);
        let mut next = Vec::new();
        for partial in &partials {
            for c in &candidates {
                let ok = (0..g.faces.len())
                    .all(|i| apply(partial, &g.faces[i]) == y.face(c, i));
                if ok {
                    let mut m = partial.clone();
                    m.insert(id.clone(), c.clone());
                    next.push(m);
                }
            }
        }
        partials = next;
    }
    partials
        .into_iter()
        .map(|assignment| SSetMap { source: x.clone(), target: y.clone(), assignment })
        .collect()
}

/// Level k of the mapping space Map(X, Y): pointed maps X ∧ Δᵏ₊ → Y.
pub fn mapping_space_level(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
    k: usize,
) -> Vec<SSetMap> {
    enumerate_maps(&smash(x, &standard_simplex_plus(k)), y)
}
