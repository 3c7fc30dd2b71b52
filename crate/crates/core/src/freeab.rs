//! The free-abelian-group comonad on simplicial abelian groups, with
//! symbolic elements.
//!
//! An element of K(A) = ℤ̃(underlying pointed set of A) is a finite integer
//! combination of brackets `[q]` of elements q of A; iterating gives nested
//! brackets.  `FreeElement` stores such combinations exactly.  A coalgebra
//! is a free simplicial abelian group with a distinguished basis and a
//! tabulated coaction δ sending each basis vector to a depth-1 element;
//! this module validates the coalgebra axioms, extracts the setlike
//! elements (those with δ(q) = [q]), reassembles them into a pointed
//! simplicial set, and computes the face/degeneracy closure of the support
//! of a finite set of elements as a finite-type subcoalgebra.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::intlinalg::{rank, solve, IntMatrix};
use crate::sab::SimplicialAbelianGroup;
use crate::sset::{basepoint_simplex, FiniteSimplicialSet, Generator, SimplexRef};

#[derive(Debug, Error)]
pub enum FreeabError {
    #[error("operation requires bracket depth ≥ 1")]
    DepthZero,
    #[error("setlike search at level {level} needs {candidates} candidates, over the budget")]
    SearchTooLarge { level: usize, candidates: u128 },
    #[error("coalgebra structure is invalid: {0}")]
    Invalid(String),
    #[error("setlike elements do not form a basis at level {0} for this bound")]
    NotInEssentialImage(usize),
}

/// An atom of a free element: either a base symbol or a bracketed element
/// one depth down.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom<B: Ord + Clone> {
    Base(B),
    Bracket(FreeElement<B>),
}

/// An integer combination of atoms at a fixed bracket depth.  Zero (empty
/// support) represents the basepoint class at every depth.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FreeElement<B: Ord + Clone> {
    pub depth: usize,
    pub terms: BTreeMap<Atom<B>, BigInt>,
}

impl<B: Ord + Clone> FreeElement<B> {
    pub fn zero(depth: usize) -> Self {
        FreeElement { depth, terms: BTreeMap::new() }
    }

    pub fn base(b: B) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Atom::Base(b), BigInt::one());
        FreeElement { depth: 0, terms }
    }

    /// The single-atom element `[e]`; brackets of zero are zero.
    pub fn bracket(e: FreeElement<B>) -> Self {
        let depth = e.depth + 1;
        if e.is_zero() {
            return FreeElement::zero(depth);
        }
        let mut terms = BTreeMap::new();
        terms.insert(Atom::Bracket(e), BigInt::one());
        FreeElement { depth, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, atom: Atom<B>, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let merged = match self.terms.get(&atom) {
            Some(v) => v + coeff,
            None => coeff.clone(),
        };
        if merged.is_zero() {
            self.terms.remove(&atom);
        } else {
            self.terms.insert(atom, merged);
        }
    }

    pub fn add(&self, other: &FreeElement<B>) -> FreeElement<B> {
        assert_eq!(self.depth, other.depth, "depth mismatch in addition");
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> FreeElement<B> {
        FreeElement {
            depth: self.depth,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> FreeElement<B> {
        if c.is_zero() {
            return FreeElement::zero(self.depth);
        }
        FreeElement {
            depth: self.depth,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    /// Apply a function to the content of every bracket atom, merging the
    /// results (depth ≥ 1).  The image depth is read off the outputs.
    pub fn map_brackets(
        &self,
        new_depth: usize,
        f: impl Fn(&FreeElement<B>) -> FreeElement<B>,
    ) -> Result<FreeElement<B>, FreeabError> {
        if self.depth == 0 {
            return Err(FreeabError::DepthZero);
        }
        let mut out = FreeElement::zero(new_depth);
        for (a, c) in &self.terms {
            match a {
                Atom::Base(_) => return Err(FreeabError::DepthZero),
                Atom::Bracket(q) => {
                    let img = f(q);
                    if !img.is_zero() {
                        out.add_term(Atom::Bracket(img), c);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// ε: strip one bracket layer, recombining coefficients.
pub fn counit<B: Ord + Clone>(e: &FreeElement<B>) -> Result<FreeElement<B>, FreeabError> {
    if e.depth == 0 {
        return Err(FreeabError::DepthZero);
    }
    let mut out = FreeElement::zero(e.depth - 1);
    for (a, c) in &e.terms {
        match a {
            Atom::Base(_) => return Err(FreeabError::DepthZero),
            Atom::Bracket(q) => {
                let scaled = q.scale(c);
                for (qa, qc) in &scaled.terms {
                    out.add_term(qa.clone(), qc);
                }
            }
        }
    }
    Ok(out)
}

/// Δ: double the outer bracket on each atom, `Σ γ_q [q] ↦ Σ γ_q [[q]]`.
pub fn comultiplication<B: Ord + Clone>(
    e: &FreeElement<B>,
) -> Result<FreeElement<B>, FreeabError> {
    e.map_brackets(e.depth + 1, |q| FreeElement::bracket(q.clone()))
}

/// G_p: the depth-0 elements appearing inside a depth-1 element's brackets.
pub fn support<B: Ord + Clone>(
    e: &FreeElement<B>,
) -> Result<Vec<FreeElement<B>>, FreeabError> {
    if e.depth != 1 {
        return Err(FreeabError::DepthZero);
    }
    let mut out = Vec::new();
    for a in e.terms.keys() {
        match a {
            Atom::Base(_) => return Err(FreeabError::DepthZero),
            Atom::Bracket(q) => out.push(q.clone()),
        }
    }
    Ok(out)
}

// --- Coalgebras --------------------------------------------------------------

/// A coalgebra for the comonad: a levelwise-free carrier with a coaction
/// tabulated on each basis vector.  Depth-0 atoms are basis indices of the
/// level the element lives in.
#[derive(Debug, Clone)]
pub struct KCoalgebra {
    pub carrier: SimplicialAbelianGroup,
    pub coaction: Vec<Vec<FreeElement<usize>>>,
}

/// Passed/failed flags for the three coalgebra axiom families, with human-
/// readable witnesses for anything that failed.
#[derive(Debug, Clone)]
pub struct CoalgebraReport {
    pub counit_ok: bool,
    pub coassoc_ok: bool,
    pub simplicial_ok: bool,
    pub failures: Vec<String>,
}

impl CoalgebraReport {
    pub fn all_ok(&self) -> bool {
        self.counit_ok && self.coassoc_ok && self.simplicial_ok
    }
}

fn vec_to_elem(v: &[BigInt]) -> FreeElement<usize> {
    let mut e = FreeElement::zero(0);
    for (i, c) in v.iter().enumerate() {
        e.add_term(Atom::Base(i), c);
    }
    e
}

fn elem_to_vec(e: &FreeElement<usize>, ngens: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); ngens];
    for (a, c) in &e.terms {
        match a {
            Atom::Base(i) => v[*i] = c.clone(),
            Atom::Bracket(_) => panic!("expected a depth-0 element"),
        }
    }
    v
}

impl KCoalgebra {
    pub fn degree_bound(&self) -> usize {
        self.carrier.bound()
    }

    /// δ extended additively to an arbitrary level-n vector.
    pub fn delta(&self, n: usize, v: &[BigInt]) -> FreeElement<usize> {
        let mut out = FreeElement::zero(1);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let img = self.coaction[n][i].scale(c);
                for (a, cc) in &img.terms {
                    out.add_term(a.clone(), cc);
                }
            }
        }
        out
    }

    /// The functor K applied to a structure map: a matrix acting inside
    /// every bracket.
    fn k_apply(
        &self,
        m: &IntMatrix,
        e: &FreeElement<usize>,
    ) -> Result<FreeElement<usize>, FreeabError> {
        e.map_brackets(e.depth, |q| {
            vec_to_elem(&m.apply(&elem_to_vec(q, m.cols())))
        })
    }

    /// Evaluate the counit, coassociativity, and simpliciality axioms on
    /// every basis vector up to the bound.
    pub fn check(&self) -> CoalgebraReport {
        let mut report = CoalgebraReport {
            counit_ok: true,
            coassoc_ok: true,
            simplicial_ok: true,
            failures: Vec::new(),
        };
        let b = self.degree_bound();
        for n in 0..=b {
            let ngens = self.carrier.levels[n].ngens();
            for i in 0..ngens {
                let d = &self.coaction[n][i];
                let id = FreeElement::base(i);
                match counit(d) {
                    Ok(e) if e == id => {}
                    _ => {
                        report.counit_ok = false;
                        report.failures.push(format!(
                            "counit fails on basis vector {i} at level {n}"
                        ));
                    }
                }
                let lhs = d.map_brackets(2, |q| self.delta(n, &elem_to_vec(q, ngens)));
                let rhs = comultiplication(d);
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) if l == r => {}
                    _ => {
                        report.coassoc_ok = false;
                        report.failures.push(format!(
                            "coassociativity fails on basis vector {i} at level {n}"
                        ));
                    }
                }
            }
        }
        for n in 1..=b {
            for (fi, face) in self.carrier.faces[n].iter().enumerate() {
                for i in 0..self.carrier.levels[n].ngens() {
                    let moved = self.delta(n - 1, &face.matrix.column(i));
                    let lifted = self
                        .k_apply(&face.matrix, &self.coaction[n][i])
                        .expect("coaction images are depth 1");
                    if moved != lifted {
                        report.simplicial_ok = false;
                        report.failures.push(format!(
                            "δ does not commute with face {fi} on basis vector {i} at level {n}"
                        ));
                    }
                }
            }
        }
        for n in 0..b {
            for (si, degen) in self.carrier.degens[n].iter().enumerate() {
                for i in 0..self.carrier.levels[n].ngens() {
                    let moved = self.delta(n + 1, &degen.matrix.column(i));
                    let lifted = self
                        .k_apply(&degen.matrix, &self.coaction[n][i])
                        .expect("coaction images are depth 1");
                    if moved != lifted {
                        report.simplicial_ok = false;
                        report.failures.push(format!(
                            "δ does not commute with degeneracy {si} on basis vector {i} at level {n}"
                        ));
                    }
                }
            }
        }
        report
    }
}

/// The cofree coalgebra on a pointed simplicial set: carrier ℤ̃X with
/// δ(x) = [x] on every basis simplex.
pub fn can(x: &FiniteSimplicialSet, bound: usize) -> KCoalgebra {
    let (carrier, basis) = crate::sab::free_reduced(x, bound);
    let coaction = basis
        .iter()
        .map(|level| {
            (0..level.len())
                .map(|i| FreeElement::bracket(FreeElement::base(i)))
                .collect()
        })
        .collect();
    KCoalgebra { carrier, coaction }
}

/// Largest candidate count accepted by the exhaustive setlike search.
const SEARCH_BUDGET: u128 = 3_000_000;

/// All level-n elements q with δ(q) = [q], as coordinate vectors.  When the
/// coaction is diagonal on the level these are exactly the basis vectors;
/// otherwise the equation is solved over the coefficient box |c| ≤ box.
pub fn setlike_elements(
    c: &KCoalgebra,
    n: usize,
    coeff_box: u32,
) -> Result<Vec<Vec<BigInt>>, FreeabError> {
    let ngens = c.carrier.levels[n].ngens();
    let diagonal = (0..ngens).all(|i| {
        c.coaction[n][i] == FreeElement::bracket(FreeElement::base(i))
    });
    if diagonal {
        return Ok((0..ngens)
            .map(|i| {
                let mut v = vec![BigInt::zero(); ngens];
                v[i] = BigInt::one();
                v
            })
            .collect());
    }
    let radius = coeff_box as i64;
    let base = (2 * radius + 1) as u128;
    let candidates = base.checked_pow(ngens as u32).unwrap_or(u128::MAX);
    if candidates > SEARCH_BUDGET {
        return Err(FreeabError::SearchTooLarge { level: n, candidates });
    }
    let mut out = Vec::new();
    let mut counter = vec![0u128; ngens];
    loop {
        let v: Vec<BigInt> =
            counter.iter().map(|&k| BigInt::from(k as i64 - radius)).collect();
        if v.iter().any(|c| !c.is_zero()) {
            let q = vec_to_elem(&v);
            if c.delta(n, &v) == FreeElement::bracket(q) {
                out.push(v);
            }
        }
        let mut pos = 0;
        loop {
            if pos == ngens {
                return Ok(out);
            }
            counter[pos] += 1;
            if counter[pos] < base {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
    }
}

/// The setlike elements of a coalgebra assembled into a pointed simplicial
/// set, with the dictionary from coordinate vectors to its simplices.
pub struct Primitives {
    pub space: FiniteSimplicialSet,
    pub reps: Vec<BTreeMap<Vec<BigInt>, SimplexRef>>,
}

pub fn primitives(c: &KCoalgebra, coeff_box: u32) -> Result<Primitives, FreeabError> {
    let b = c.degree_bound();
    let bp = "*".to_string();
    let mut generators: BTreeMap<String, Generator> = BTreeMap::new();
    generators.insert(bp.clone(), Generator { dim: 0, faces: vec![] });
    let mut reps: Vec<BTreeMap<Vec<BigInt>, SimplexRef>> = Vec::new();
    for n in 0..=b {
        let setlike: BTreeSet<Vec<BigInt>> =
            setlike_elements(c, n, coeff_box)?.into_iter().collect();
        let mut level: BTreeMap<Vec<BigInt>, SimplexRef> = BTreeMap::new();
        let mut fresh = 0usize;
        for q in &setlike {
            // Degenerate iff q = s_i(d_i q) with d_i q setlike one level down.
            let mut found: Option<SimplexRef> = None;
            for i in 0..n {
                let p = c.carrier.faces[n][i].matrix.apply(q);
                if c.carrier.degens[n - 1][i].matrix.apply(&p) == *q {
                    if p.iter().all(|v| v.is_zero()) {
                        found = Some(basepoint_simplex(&bp, n));
                    } else {
                        let below = reps[n - 1].get(&p).ok_or_else(|| {
                            FreeabError::Invalid(format!(
                                "degenerate setlike at level {n} over a non-setlike"
                            ))
                        })?;
                        found = Some(below.degeneracy(i));
                    }
                    break;
                }
            }
            let r = match found {
                Some(r) => r,
                None => {
                    let id = format!("q{n}.{fresh}");
                    fresh += 1;
                    let mut faces = Vec::new();
                    for i in 0..=n {
                        if n == 0 {
                            break;
                        }
                        let f = c.carrier.faces[n][i].matrix.apply(q);
                        if f.iter().all(|v| v.is_zero()) {
                            faces.push(basepoint_simplex(&bp, n - 1));
                        } else {
                            faces.push(reps[n - 1].get(&f).cloned().ok_or_else(
                                || {
                                    FreeabError::Invalid(format!(
                                        "face of a setlike at level {n} is not setlike"
                                    ))
                                },
                            )?);
                        }
                    }
                    generators.insert(id.clone(), Generator { dim: n, faces });
                    SimplexRef::nondeg(id)
                }
            };
            level.insert(q.clone(), r);
        }
        reps.push(level);
    }
    let space = FiniteSimplicialSet { generators, basepoint: bp };
    space
        .validate()
        .map_err(|e| FreeabError::Invalid(format!("primitives not simplicial: {e}")))?;
    Ok(Primitives { space, reps })
}

/// Recover a simplicial-set basis: the primitives of C together with the
/// levelwise change of basis (carrier coordinates → setlike coordinates),
/// verified to intertwine the coactions.  Fails when the setlike elements
/// are not a basis at some level within the bound.
pub fn recover_basis(
    c: &KCoalgebra,
    coeff_box: u32,
) -> Result<(Primitives, Vec<IntMatrix>), FreeabError> {
    let prims = primitives(c, coeff_box)?;
    let b = c.degree_bound();
    let mut changes = Vec::new();
    for n in 0..=b {
        let ngens = c.carrier.levels[n].ngens();
        let cols: Vec<Vec<BigInt>> = prims.reps[n].keys().cloned().collect();
        if cols.len() != ngens {
            return Err(FreeabError::NotInEssentialImage(n));
        }
        let t = IntMatrix::from_columns(ngens, &cols);
        // Invert over the integers by solving T x = e_i columnwise.
        let mut inv = IntMatrix::zero(ngens, ngens);
        for i in 0..ngens {
            let mut e = vec![BigInt::zero(); ngens];
            e[i] = BigInt::one();
            let sol = solve(&t, &e)
                .ok()
                .flatten()
                .ok_or(FreeabError::NotInEssentialImage(n))?;
            for (r, v) in sol.into_iter().enumerate() {
                inv.set(r, i, v);
            }
        }
        changes.push(inv);
    }
    // The isomorphism sends each setlike q to the corresponding simplex;
    // check it intertwines δ with the diagonal coaction of can(primitives).
    for n in 0..=b {
        let phi = &changes[n];
        let dict: Vec<&SimplexRef> = prims.reps[n].values().collect();
        let to_simplices = |v: &[BigInt]| -> FreeElement<SimplexRef> {
            let mut e = FreeElement::zero(0);
            for (r, c) in dict.iter().zip(phi.apply(v)) {
                e.add_term(Atom::Base((*r).clone()), &c);
            }
            e
        };
        let ngens = c.carrier.levels[n].ngens();
        for i in 0..ngens {
            let mut unit = vec![BigInt::zero(); ngens];
            unit[i] = BigInt::one();
            // lhs: δ_can(Φ e_i) = Σ_x coords_x [x].
            let mut lhs = FreeElement::zero(1);
            for (a, cc) in to_simplices(&unit).terms {
                if let Atom::Base(r) = a {
                    lhs.add_term(Atom::Bracket(FreeElement::base(r)), &cc);
                }
            }
            // rhs: KΦ(δ(e_i)).
            let mut rhs = FreeElement::zero(1);
            for (a, cc) in &c.coaction[n][i].terms {
                if let Atom::Bracket(q) = a {
                    let img = to_simplices(&elem_to_vec(q, ngens));
                    if !img.is_zero() {
                        rhs.add_term(Atom::Bracket(img), cc);
                    }
                }
            }
            if lhs != rhs {
                return Err(FreeabError::Invalid(format!(
                    "recovered basis does not intertwine the coaction on vector {i} at level {n}"
                )));
            }
        }
    }
    Ok((prims, changes))
}

/// Verification results for a generated subcoalgebra: the closed member
/// vectors per level and the three checks from the closure construction.
pub struct SubcoalgebraReport {
    pub members: Vec<BTreeSet<Vec<BigInt>>>,
    pub independent: bool,
    pub generators_spanned: bool,
    pub coaction_diagonal: bool,
}

/// Close the supports of δ on a finite set of elements under faces and
/// degeneracies, verify the closure is a dimensionwise-independent setlike
/// family spanning the inputs, and package it as a finite-type coalgebra
/// (diagonal coaction on the closure basis).
pub fn subcoalgebra_generated(
    c: &KCoalgebra,
    seeds: &[(usize, Vec<BigInt>)],
) -> Result<(KCoalgebra, SubcoalgebraReport), FreeabError> {
    let b = c.degree_bound();
    let mut members: Vec<BTreeSet<Vec<BigInt>>> = vec![BTreeSet::new(); b + 1];
    let mut stack: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for (n, v) in seeds {
        for q in support(&c.delta(*n, v)).expect("δ images are depth 1") {
            stack.push((*n, elem_to_vec(&q, c.carrier.levels[*n].ngens())));
        }
    }
    while let Some((n, v)) = stack.pop() {
        if v.iter().all(|x| x.is_zero()) || !members[n].insert(v.clone()) {
            continue;
        }
        if n >= 1 {
            for f in &c.carrier.faces[n] {
                stack.push((n - 1, f.matrix.apply(&v)));
            }
        }
        if n < b {
            for s in &c.carrier.degens[n] {
                stack.push((n + 1, s.matrix.apply(&v)));
            }
        }
    }
    let mut report = SubcoalgebraReport {
        members: members.clone(),
        independent: true,
        generators_spanned: true,
        coaction_diagonal: true,
    };
    for (n, level) in members.iter().enumerate() {
        let cols: Vec<Vec<BigInt>> = level.iter().cloned().collect();
        let t = IntMatrix::from_columns(c.carrier.levels[n].ngens(), &cols);
        if rank(&t) != cols.len() {
            report.independent = false;
        }
        for v in level {
            if c.delta(n, v) != FreeElement::bracket(vec_to_elem(v)) {
                report.coaction_diagonal = false;
            }
        }
    }
    for (n, v) in seeds {
        let cols: Vec<Vec<BigInt>> = members[*n].iter().cloned().collect();
        let t = IntMatrix::from_columns(c.carrier.levels[*n].ngens(), &cols);
        if !matches!(solve(&t, v), Ok(Some(_))) {
            report.generators_spanned = false;
        }
    }
    if !(report.independent && report.generators_spanned && report.coaction_diagonal) {
        return Err(FreeabError::Invalid(
            "support closure failed verification; the input was not a valid coalgebra"
                .to_string(),
        ));
    }
    // Assemble the subcoalgebra: free on the closure members, with faces and
    // degeneracies landing on members or the basepoint class by closedness.
    let index: Vec<BTreeMap<Vec<BigInt>, usize>> = members
        .iter()
        .map(|lvl| lvl.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect())
        .collect();
    let express = |n: usize, v: &[BigInt]| -> Vec<BigInt> {
        let mut col = vec![BigInt::zero(); members[n].len()];
        if let Some(&i) = index[n].get(v) {
            col[i] = BigInt::one();
        }
        col
    };
    let levels: Vec<crate::abgroup::AbGroup> =
        members.iter().map(|lvl| crate::abgroup::AbGroup::free(lvl.len())).collect();
    let mut faces = Vec::new();
    let mut degens = Vec::new();
    for n in 0..=b {
        let mut f = Vec::new();
        if n > 0 {
            for big in &c.carrier.faces[n] {
                let cols: Vec<Vec<BigInt>> = members[n]
                    .iter()
                    .map(|v| express(n - 1, &big.matrix.apply(v)))
                    .collect();
                let m = IntMatrix::from_columns(members[n - 1].len(), &cols);
                f.push(
                    crate::abgroup::GroupMap::new(
                        levels[n].clone(),
                        levels[n - 1].clone(),
                        m,
                    )
                    .unwrap(),
                );
            }
        }
        faces.push(f);
        let mut s = Vec::new();
        if n < b {
            for big in &c.carrier.degens[n] {
                let cols: Vec<Vec<BigInt>> = members[n]
                    .iter()
                    .map(|v| express(n + 1, &big.matrix.apply(v)))
                    .collect();
                let m = IntMatrix::from_columns(members[n + 1].len(), &cols);
                s.push(
                    crate::abgroup::GroupMap::new(
                        levels[n].clone(),
                        levels[n + 1].clone(),
                        m,
                    )
                    .unwrap(),
                );
            }
        }
        degens.push(s);
    }
    let coaction = members
        .iter()
        .map(|lvl| {
            (0..lvl.len())
                .map(|i| FreeElement::bracket(FreeElement::base(i)))
                .collect()
        })
        .collect();
    let carrier = SimplicialAbelianGroup { levels, faces, degens };
    carrier
        .validate()
        .map_err(|e| FreeabError::Invalid(format!("closure not simplicial: {e}")))?;
    Ok((KCoalgebra { carrier, coaction }, report))
}

// --- JSON --------------------------------------------------------------------

use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct TermDto {
    coeff: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bracket: Option<Vec<TermDto>>,
}

fn elem_to_dto(e: &FreeElement<usize>) -> Vec<TermDto> {
    e.terms
        .iter()
        .map(|(a, c)| match a {
            Atom::Base(i) => {
                TermDto { coeff: c.to_string(), base: Some(*i), bracket: None }
            }
            Atom::Bracket(q) => TermDto {
                coeff: c.to_string(),
                base: None,
                bracket: Some(elem_to_dto(q)),
            },
        })
        .collect()
}

fn elem_from_dto(depth: usize, terms: &[TermDto]) -> Option<FreeElement<usize>> {
    let mut e = FreeElement::zero(depth);
    for t in terms {
        let c: BigInt = t.coeff.parse().ok()?;
        match (&t.base, &t.bracket) {
            (Some(i), None) => {
                if depth != 0 {
                    return None;
                }
                e.add_term(Atom::Base(*i), &c);
            }
            (None, Some(inner)) => {
                if depth == 0 {
                    return None;
                }
                e.add_term(Atom::Bracket(elem_from_dto(depth - 1, inner)?), &c);
            }
            _ => return None,
        }
    }
    Some(e)
}

#[derive(Serialize, Deserialize)]
struct CoactionEntryDto {
    level: usize,
    basis_index: usize,
    image: Vec<TermDto>,
}

#[derive(Serialize, Deserialize)]
struct CoalgebraDto {
    space: serde_json::Value,
    bound: usize,
    coaction: Vec<CoactionEntryDto>,
}

/// Serialize a coalgebra whose carrier is ℤ̃ of a simplicial set, with the
/// coaction tabulated entry by entry.
pub fn coalgebra_to_json(x: &FiniteSimplicialSet, c: &KCoalgebra) -> String {
    let mut entries = Vec::new();
    for (n, level) in c.coaction.iter().enumerate() {
        for (i, e) in level.iter().enumerate() {
            entries.push(CoactionEntryDto {
                level: n,
                basis_index: i,
                image: elem_to_dto(e),
            });
        }
    }
    let dto = CoalgebraDto {
        space: serde_json::from_str(&x.to_json()).unwrap(),
        bound: c.degree_bound(),
        coaction: entries,
    };
    let mut s = serde_json::to_string_pretty(&dto).unwrap();
    s.push('\n');
    s
}

/// Parse a tabulated coalgebra; entries not listed default to the diagonal
/// coaction of can(space).
pub fn coalgebra_from_json(text: &str) -> Result<(FiniteSimplicialSet, KCoalgebra), FreeabError> {
    let dto: CoalgebraDto = serde_json::from_str(text)
        .map_err(|e| FreeabError::Invalid(format!("bad coalgebra JSON: {e}")))?;
    let space = FiniteSimplicialSet::from_json(&dto.space.to_string())
        .map_err(|e| FreeabError::Invalid(format!("bad carrier space: {e}")))?;
    let mut c = can(&space, dto.bound);
    for entry in &dto.coaction {
        if entry.level > dto.bound
            || entry.basis_index >= c.coaction[entry.level].len()
        {
            return Err(FreeabError::Invalid("coaction entry out of range".into()));
        }
        c.coaction[entry.level][entry.basis_index] = elem_from_dto(1, &entry.image)
            .ok_or_else(|| FreeabError::Invalid("malformed coaction image".into()))?;
    }
    Ok((space, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::GroupMap;
    use crate::sset::{product, sphere, wedge, SSetMap};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x_elem(pairs: &[(i64, &str)]) -> FreeElement<String> {
        let mut e = FreeElement::zero(0);
        for (c, s) in pairs {
            e.add_term(Atom::Base(s.to_string()), &BigInt::from(*c));
        }
        e
    }

    #[test]
    fn counit_and_comultiplication_formulas() {
        // 3[x] − [y] ↦ 3x − y; 3[x] − [y] ↦ 3[[x]] − [[y]].
        let mut e = FreeElement::zero(1);
        e.add_term(Atom::Bracket(x_elem(&[(1, "x")])), &BigInt::from(3));
        e.add_term(Atom::Bracket(x_elem(&[(1, "y")])), &BigInt::from(-1));
        assert_eq!(counit(&e).unwrap(), x_elem(&[(3, "x"), (-1, "y")]));
        let mut expected = FreeElement::zero(2);
        expected.add_term(
            Atom::Bracket(FreeElement::bracket(x_elem(&[(1, "x")]))),
            &BigInt::from(3),
        );
        expected.add_term(
            Atom::Bracket(FreeElement::bracket(x_elem(&[(1, "y")]))),
            &BigInt::from(-1),
        );
        assert_eq!(comultiplication(&e).unwrap(), expected);
        // [x] + [−x] ↦ 0 under ε.
        let mut f = FreeElement::zero(1);
        f.add_term(Atom::Bracket(x_elem(&[(1, "x")])), &BigInt::one());
        f.add_term(Atom::Bracket(x_elem(&[(-1, "x")])), &BigInt::one());
        assert!(counit(&f).unwrap().is_zero());
        // [2x − y] strips to 2x − y and doubles to [[2x − y]].
        let g = FreeElement::bracket(x_elem(&[(2, "x"), (-1, "y")]));
        assert_eq!(counit(&g).unwrap(), x_elem(&[(2, "x"), (-1, "y")]));
        assert_eq!(
            comultiplication(&g).unwrap(),
            FreeElement::bracket(FreeElement::bracket(x_elem(&[(2, "x"), (-1, "y")])))
        );
        assert!(counit(&x_elem(&[(1, "x")])).is_err());
        assert!(comultiplication(&x_elem(&[(1, "x")])).is_err());
        assert!(comultiplication(&FreeElement::<String>::zero(1)).unwrap().is_zero());
    }

    #[test]
    fn support_examples() {
        let mut e = FreeElement::zero(1);
        e.add_term(Atom::Bracket(x_elem(&[(1, "x")])), &BigInt::one());
        e.add_term(Atom::Bracket(x_elem(&[(1, "y")])), &BigInt::from(2));
        let s = support(&e).unwrap();
        assert_eq!(s.len(), 2);
        assert!(support(&FreeElement::<String>::zero(1)).unwrap().is_empty());
        let g = FreeElement::bracket(x_elem(&[(2, "x"), (-1, "y")])).scale(&5.into());
        assert_eq!(support(&g).unwrap(), vec![x_elem(&[(2, "x"), (-1, "y")])]);
    }

    fn random_element<R: Rng>(rng: &mut R, depth: usize) -> FreeElement<u32> {
        let mut e = FreeElement::zero(depth);
        for _ in 0..rng.gen_range(0..=4) {
            let c = BigInt::from(rng.gen_range(-9i64..=9));
            let atom = if depth == 0 {
                Atom::Base(rng.gen_range(0..5u32))
            } else {
                let d = rng.gen_range(0..depth);
                let inner = random_element(rng, d);
                if inner.is_zero() {
                    continue;
                }
                Atom::Bracket(inner)
            };
            e.add_term(atom, &c);
        }
        e
    }

    #[test]
    fn comonad_laws_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let depth = rng.gen_range(1..=3);
            let e = random_element(&mut rng, depth);
            let de = comultiplication(&e).unwrap();
            assert_eq!(counit(&de).unwrap(), e, "ε∘Δ = id");
            let ke = de
                .map_brackets(e.depth, |q| counit(q).unwrap())
                .unwrap();
            assert_eq!(ke, e, "Kε∘Δ = id");
            let lhs = de
                .map_brackets(e.depth + 2, |q| comultiplication(q).unwrap())
                .unwrap();
            let rhs = comultiplication(&de).unwrap();
            assert_eq!(lhs, rhs, "KΔ∘Δ = ΔK∘Δ");
        }
    }

    #[test]
    fn can_passes_checks_on_corpus() {
        for x in [
            FiniteSimplicialSet::point(),
            sphere(1),
            sphere(2),
            wedge(&sphere(1), &sphere(1)),
            product(&sphere(1), &sphere(1)),
            crate::sample::projective_plane(),
        ] {
            let c = can(&x, 4);
            let report = c.check();
            assert!(report.all_ok(), "{:?}", report.failures);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x = crate::sample::random_pointed_sset(&mut rng, 4);
            assert!(can(&x, 3).check().all_ok());
        }
    }

    #[test]
    fn mutated_coactions_are_rejected() {
        let mut c = can(&sphere(1), 3);
        c.coaction[1][0] = c.coaction[1][0].scale(&BigInt::from(2));
        let report = c.check();
        assert!(!report.counit_ok);
        assert!(report.failures.iter().any(|f| f.contains("level 1")));

        let mut c = can(&wedge(&sphere(1), &sphere(1)), 3);
        c.coaction[1][0] = c.coaction[1][1].clone();
        assert!(!c.check().counit_ok);
    }

    #[test]
    fn setlike_of_can_is_the_simplex_basis() {
        let x = wedge(&sphere(1), &sphere(1));
        let c = can(&x, 3);
        for n in 0..=3 {
            let s = setlike_elements(&c, n, 3).unwrap();
            assert_eq!(s.len(), c.carrier.levels[n].ngens());
            assert!(s.iter().all(|v| v.iter().filter(|c| !c.is_zero()).count() == 1));
        }
    }

    /// can(S¹∨S¹) with the level-1 basis changed to b₁ = x + y, b₂ = y.
    fn basis_changed_wedge(bound: usize) -> KCoalgebra {
        let mut c = can(&wedge(&sphere(1), &sphere(1)), bound);
        let t = IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]);
        let t_inv = IntMatrix::from_rows(&[vec![1, 0], vec![-1, 1]]);
        // Structure maps touching level 1, rewritten in the new basis.
        for f in c.carrier.faces[1].iter_mut() {
            *f = GroupMap::new(
                f.source.clone(),
                f.target.clone(),
                f.matrix.mul(&t),
            )
            .unwrap();
        }
        for f in c.carrier.faces[2].iter_mut() {
            *f = GroupMap::new(
                f.source.clone(),
                f.target.clone(),
                t_inv.mul(&f.matrix),
            )
            .unwrap();
        }
        for s in c.carrier.degens[1].iter_mut() {
            *s = GroupMap::new(
                s.source.clone(),
                s.target.clone(),
                s.matrix.mul(&t),
            )
            .unwrap();
        }
        for s in c.carrier.degens[0].iter_mut() {
            *s = GroupMap::new(
                s.source.clone(),
                s.target.clone(),
                t_inv.mul(&s.matrix),
            )
            .unwrap();
        }
        // δ(b_j) = Σ_i T_{ij} [e_i], with the bracket contents rewritten in
        // the new coordinates: δ(b₁) = [b₁ − b₂] + [b₂], δ(b₂) = [b₂].
        c.coaction[1] = (0..2)
            .map(|j| {
                let mut e = FreeElement::zero(1);
                for i in 0..2 {
                    e.add_term(
                        Atom::Bracket(vec_to_elem(&t_inv.column(i))),
                        &t.get(i, j),
                    );
                }
                e
            })
            .collect();
        c
    }

    #[test]
    fn setlike_search_sees_through_a_basis_change() {
        let c = basis_changed_wedge(3);
        assert!(c.check().all_ok());
        let s = setlike_elements(&c, 1, 3).unwrap();
        // x = b₁ − b₂ and y = b₂ in the new coordinates.
        let expect: BTreeSet<Vec<BigInt>> = [
            vec![BigInt::one(), BigInt::from(-1)],
            vec![BigInt::zero(), BigInt::one()],
        ]
        .into_iter()
        .collect();
        assert_eq!(s.into_iter().collect::<BTreeSet<_>>(), expect);
    }

    #[test]
    fn primitives_recovers_the_corpus() {
        for x in [
            FiniteSimplicialSet::point(),
            sphere(1),
            sphere(2),
            wedge(&sphere(1), &sphere(1)),
        ] {
            let bound = 5.min(x.max_dim() + 3);
            let c = can(&x, bound);
            let p = primitives(&c, 3).unwrap();
            // Identify each simplex of x with its setlike basis vector.
            let (_, basis) = crate::sab::free_reduced(&x, bound);
            let mut assignment = BTreeMap::new();
            assignment.insert(
                x.basepoint.clone(),
                SimplexRef::nondeg(p.space.basepoint.clone()),
            );
            for (id, g) in &x.generators {
                if *id == x.basepoint {
                    continue;
                }
                let i = basis[g.dim]
                    .iter()
                    .position(|r| *r == SimplexRef::nondeg(id.clone()))
                    .unwrap();
                let mut v = vec![BigInt::zero(); basis[g.dim].len()];
                v[i] = BigInt::one();
                assignment.insert(id.clone(), p.reps[g.dim][&v].clone());
            }
            let iso = SSetMap::new(x.clone(), p.space.clone(), assignment).unwrap();
            assert!(iso.is_isomorphism());
        }
    }

    #[test]
    fn recover_basis_examples() {
        let c = basis_changed_wedge(3);
        let (prims, changes) = recover_basis(&c, 3).unwrap();
        assert_eq!(
            prims.space.generators.values().filter(|g| g.dim == 1).count(),
            2
        );
        assert_eq!(changes[1].rows(), 2);
        let zero = can(&FiniteSimplicialSet::point(), 3);
        let (p, _) = recover_basis(&zero, 3).unwrap();
        assert_eq!(p.space.generators.len(), 1);
        // δ(x) = 2[x] is not a coalgebra: no setlike spans that level.
        let mut bad = can(&sphere(1), 2);
        bad.coaction[1][0] = bad.coaction[1][0].scale(&BigInt::from(2));
        assert!(recover_basis(&bad, 3).is_err());
    }

    #[test]
    fn subcoalgebra_closure() {
        // W = {x + y} in can(S¹∨S¹) pulls in both circles.
        let x = wedge(&sphere(1), &sphere(1));
        let c = can(&x, 3);
        let seed = vec![(1usize, vec![BigInt::one(), BigInt::one()])];
        let (sub, report) = subcoalgebra_generated(&c, &seed).unwrap();
        assert!(report.independent && report.generators_spanned);
        assert!(sub.check().all_ok());
        for n in 0..=3 {
            assert_eq!(sub.carrier.levels[n].ngens(), c.carrier.levels[n].ngens());
        }
        // W = ∅ gives the zero subcoalgebra.
        let (empty, _) = subcoalgebra_generated(&c, &[]).unwrap();
        assert!(empty.carrier.levels.iter().all(|g| g.is_trivial()));
        // The 2-cell of S² generates everything.
        let c2 = can(&sphere(2), 4);
        let (sub2, r2) = subcoalgebra_generated(&c2, &[(2, vec![BigInt::one()])]).unwrap();
        assert!(r2.independent);
        for n in 0..=4 {
            assert_eq!(sub2.carrier.levels[n].ngens(), c2.carrier.levels[n].ngens());
        }
        // Monotonicity of the closure in the generating set.
        let w1 = vec![(1usize, vec![BigInt::one(), BigInt::zero()])];
        let w2 = vec![
            (1usize, vec![BigInt::one(), BigInt::zero()]),
            (1usize, vec![BigInt::zero(), BigInt::one()]),
        ];
        let (_, small) = subcoalgebra_generated(&c, &w1).unwrap();
        let (_, big) = subcoalgebra_generated(&c, &w2).unwrap();
        for n in 0..=3 {
            assert!(small.members[n].is_subset(&big.members[n]));
        }
    }

    #[test]
    fn setlike_in_delta_supports() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..8 {
            let x = crate::sample::random_pointed_sset(&mut rng, 4);
            let c = can(&x, 3);
            for n in 0..=3 {
                for e in &c.coaction[n] {
                    for q in support(e).unwrap() {
                        let v = elem_to_vec(&q, c.carrier.levels[n].ngens());
                        assert_eq!(c.delta(n, &v), FreeElement::bracket(q));
                    }
                }
            }
        }
    }

    #[test]
    fn coalgebra_json_round_trip() {
        let x = wedge(&sphere(1), &sphere(1));
        let c = basis_changed_wedge(2);
        let text = coalgebra_to_json(&x, &c);
        let (x2, c2) = coalgebra_from_json(&text).unwrap();
        assert_eq!(x2, x);
        assert_eq!(c2.coaction[1], c.coaction[1]);
        assert_eq!(coalgebra_to_json(&x2, &c2), text);
        assert!(coalgebra_from_json("{\"nope\": 1}").is_err());
    }
}
