//! The comonads arising from the suspension–loops adjunction on pointed
//! simplicial sets.
//!
//! Suspension is smashing with an r-sphere; loops is the simplicial mapping
//! space out of it, computed literally on finite complexes by enumerating
//! pointed maps Sʳ ∧ Δᵏ₊ → Y level by level.  The module builds the cofree
//! coalgebras, checks the counit/coassociativity axioms on them, extracts
//! the underlying object back out of a coalgebra by a levelwise equalizer,
//! and provides the two categorical checks behind comonadicity: smashing
//! preserves equalizers, and suspension reflects isomorphisms.
//!
//! Complexity note: level k of the loop space enumerates all pointed maps
//! from Sʳ ∧ Δᵏ₊, whose generator count grows with k; everything here is
//! exact but intended for small bounds (the defaults stay ≤ 4).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::sab::surjection_of_word;
use crate::sset::{
    basepoint_simplex, equalizer, mapping_space_level, product_with_table, smash,
    smash_map, smash_pair_ref, sphere, standard_simplex_plus,
    FiniteSimplicialSet, Generator, SSetMap, SimplexRef,
};

#[derive(Debug, Error)]
pub enum SuspError {
    #[error("coalgebra structure is invalid: {0}")]
    Invalid(String),
}

/// The sphere Sʳ used by suspension: one vertex and one r-cell.
pub fn sphere_model(r: usize) -> FiniteSimplicialSet {
    sphere(r)
}

/// Σʳ X = X ∧ Sʳ.
pub fn suspend(x: &FiniteSimplicialSet, r: usize) -> FiniteSimplicialSet {
    smash(x, &sphere_model(r))
}

/// Level k of Ωʳ Y: all pointed maps Sʳ ∧ Δᵏ₊ → Y.
pub fn loops_level(y: &FiniteSimplicialSet, r: usize, k: usize) -> Vec<SSetMap> {
    mapping_space_level(&sphere_model(r), y, k)
}

/// The monotone map [m] → [n] underlying a simplex of Δⁿ (generator ids are
/// dot-separated vertex subsets).
fn delta_vals(t: &SimplexRef) -> Vec<usize> {
    let vs: Vec<usize> = t.gen.split('.').map(|v| v.parse().unwrap()).collect();
    let m = vs.len() - 1 + t.word.len();
    surjection_of_word(&t.word, m).iter().map(|&p| vs[p]).collect()
}

/// The simplex of Δⁿ named by a monotone value list, in normal form.
fn simplex_for_vals(vals: &[usize]) -> SimplexRef {
    let mut subset = vals.to_vec();
    subset.dedup();
    let gen =
        subset.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".");
    let word: Vec<usize> =
        (0..vals.len() - 1).filter(|&p| vals[p] == vals[p + 1]).rev().collect();
    SimplexRef { gen, word }
}

/// The pointed map Δᵐ₊ → Δⁿ₊ induced by a monotone `vals : [m] → [n]`.
fn operator_map_plus(m: usize, n: usize, vals: &[usize]) -> SSetMap {
    let source = standard_simplex_plus(m);
    let target = standard_simplex_plus(n);
    let assignment: BTreeMap<String, SimplexRef> = source
        .generators
        .keys()
        .map(|id| {
            let image = if id == "+" {
                SimplexRef::nondeg("+")
            } else {
                let picked: Vec<usize> = id
                    .split('.')
                    .map(|v| vals[v.parse::<usize>().unwrap()])
                    .collect();
                simplex_for_vals(&picked)
            };
            (id.clone(), image)
        })
        .collect();
    SSetMap::new(source, target, assignment).expect("operators act simplicially")
}

/// Ωʳ Y assembled as a finite pointed simplicial set up to a bound, with
/// the dictionaries between its simplices and the underlying maps.
pub struct LoopsComplex {
    pub space: FiniteSimplicialSet,
    /// The domain Sʳ ∧ Δᵏ₊ at each level, with its pair table.
    pub sources: Vec<FiniteSimplicialSet>,
    pub source_pairs: Vec<BTreeMap<String, (SimplexRef, SimplexRef)>>,
    /// All elements per level, and the two-way element ↔ simplex maps.
    pub elems: Vec<Vec<SSetMap>>,
    pub reps: Vec<BTreeMap<BTreeMap<String, SimplexRef>, SimplexRef>>,
    pub by_ref: Vec<BTreeMap<SimplexRef, usize>>,
    face_ops: Vec<Vec<SSetMap>>,
    degen_ops: Vec<Vec<SSetMap>>,
}

impl LoopsComplex {
    pub fn bound(&self) -> usize {
        self.elems.len() - 1
    }

    pub fn face_elem(&self, g: &SSetMap, k: usize, i: usize) -> SSetMap {
        g.compose(&self.face_ops[k][i])
    }

    pub fn degen_elem(&self, g: &SSetMap, k: usize, i: usize) -> SSetMap {
        g.compose(&self.degen_ops[k][i])
    }

    pub fn elem_for_ref(&self, k: usize, r: &SimplexRef) -> &SSetMap {
        &self.elems[k][self.by_ref[k][r]]
    }
}

fn smash_with_table(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
) -> (FiniteSimplicialSet, BTreeMap<String, (SimplexRef, SimplexRef)>) {
    let (_, table) = product_with_table(x, y);
    let z = smash(x, y);
    let pairs = table
        .into_iter()
        .filter(|(id, _)| z.generators.contains_key(id))
        .collect();
    (z, pairs)
}

/// Build Ωʳ Y up to `bound`, naming the nondegenerate non-constant maps.
pub fn loops_complex(y: &FiniteSimplicialSet, r: usize, bound: usize) -> LoopsComplex {
    let s = sphere_model(r);
    let bp = "*".to_string();
    let mut sources = Vec::new();
    let mut source_pairs = Vec::new();
    for k in 0..=bound {
        let (src, pairs) = smash_with_table(&s, &standard_simplex_plus(k));
        sources.push(src);
        source_pairs.push(pairs);
    }
    let ids = |x: &SSetMap| -> BTreeMap<String, SimplexRef> { x.assignment.clone() };
    let mut face_ops: Vec<Vec<SSetMap>> = vec![vec![]];
    let mut degen_ops: Vec<Vec<SSetMap>> = Vec::new();
    for k in 1..=bound {
        face_ops.push(
            (0..=k)
                .map(|i| {
                    let vals: Vec<usize> = (0..=k).filter(|&v| v != i).collect();
                    smash_map(
                        &SSetMap::identity(&s),
                        &operator_map_plus(k - 1, k, &vals),
                    )
                })
                .collect(),
        );
    }
    for k in 0..bound {
        degen_ops.push(
            (0..=k)
                .map(|i| {
                    let vals: Vec<usize> =
                        (0..=(k + 1)).map(|v| if v > i { v - 1 } else { v }).collect();
                    smash_map(
                        &SSetMap::identity(&s),
                        &operator_map_plus(k + 1, k, &vals),
                    )
                })
                .collect(),
        );
    }
    degen_ops.push(vec![]);
    let mut out = LoopsComplex {
        space: FiniteSimplicialSet {
            generators: BTreeMap::from([(bp.clone(), Generator { dim: 0, faces: vec![] })]),
            basepoint: bp.clone(),
        },
        sources,
        source_pairs,
        elems: Vec::new(),
        reps: Vec::new(),
        by_ref: Vec::new(),
        face_ops,
        degen_ops,
    };
    for k in 0..=bound {
        let mut elems = loops_level(y, r, k);
        elems.sort_by(|a, b| a.assignment.cmp(&b.assignment));
        let constant = SSetMap::constant(&out.sources[k], y);
        let mut reps: BTreeMap<BTreeMap<String, SimplexRef>, SimplexRef> = BTreeMap::new();
        let mut by_ref: BTreeMap<SimplexRef, usize> = BTreeMap::new();
        let mut fresh = 0usize;
        for (idx, g) in elems.iter().enumerate() {
            let rep = if g.equals(&constant) {
                basepoint_simplex(&bp, k)
            } else {
                let mut degenerate = None;
                for i in 0..k {
                    let p = out.face_elem(g, k, i);
                    if out.degen_elem(&p, k - 1, i).assignment == g.assignment {
                        let below = out.reps[k - 1][&p.assignment].clone();
                        degenerate = Some(below.degeneracy(i));
                        break;
                    }
                }
                match degenerate {
                    Some(r) => r,
                    None => {
                        let id = format!("l{k}.{fresh}");
                        fresh += 1;
                        let mut faces = Vec::new();
                        if k > 0 {
                            for i in 0..=k {
                                let f = out.face_elem(g, k, i);
                                faces.push(out.reps[k - 1][&f.assignment].clone());
                            }
                        }
                        out.space
                            .generators
                            .insert(id.clone(), Generator { dim: k, faces });
                        SimplexRef::nondeg(id)
                    }
                }
            };
            by_ref.insert(rep.clone(), idx);
            reps.insert(ids(g), rep);
        }
        out.elems.push(elems);
        out.reps.push(reps);
        out.by_ref.push(by_ref);
    }
    out.space.validate().expect("loop space levels close under the operators");
    out
}

/// The unit element η(x) ∈ (Ωʳ Σʳ X)_n for a level-n simplex x of X: the
/// map Sʳ ∧ Δⁿ₊ → X ∧ Sʳ sending ⟨a, t⟩ to [x·t, a].
fn unit_element(
    x: &FiniteSimplicialSet,
    s: &FiniteSimplicialSet,
    z: &FiniteSimplicialSet,
    loops: &LoopsComplex,
    rx: &SimplexRef,
    n: usize,
) -> SSetMap {
    let source = &loops.sources[n];
    let mut assignment = BTreeMap::new();
    for (id, g) in &source.generators {
        let image = if *id == source.basepoint {
            SimplexRef::nondeg(z.basepoint.clone())
        } else {
            let (a, t) = &loops.source_pairs[n][id];
            let moved = x.apply_operator(rx, &delta_vals(t));
            smash_pair_ref(x, s, z, &moved, a)
        };
        let _ = g;
        assignment.insert(id.clone(), image);
    }
    SSetMap::new(source.clone(), z.clone(), assignment)
        .expect("the unit is simplicial")
}

/// A coalgebra for the suspension comonad: a carrier with a coaction into
/// Σʳ Ωʳ(carrier), the loop space materialized up to the bound.
pub struct KrCoalgebra {
    pub r: usize,
    pub sphere: FiniteSimplicialSet,
    pub carrier: FiniteSimplicialSet,
    pub loops: LoopsComplex,
    /// Σʳ Ωʳ(carrier) with its pair table (loops simplex, sphere simplex).
    pub target: FiniteSimplicialSet,
    pub target_pairs: BTreeMap<String, (SimplexRef, SimplexRef)>,
    pub coaction: SSetMap,
}

/// The cofree coalgebra on X: carrier Σʳ X with coaction Σʳ(η_X).
pub fn can_r(x: &FiniteSimplicialSet, r: usize, bound: usize) -> KrCoalgebra {
    let s = sphere_model(r);
    let (z, z_pairs) = smash_with_table(x, &s);
    let loops = loops_complex(&z, r, bound);
    let (target, target_pairs) = smash_with_table(&loops.space, &s);
    let mut assignment = BTreeMap::new();
    for id in z.generators.keys() {
        let image = if *id == z.basepoint {
            SimplexRef::nondeg(target.basepoint.clone())
        } else {
            let (rx, ra) = &z_pairs[id];
            let n = z.gen_dim(id);
            let eta = unit_element(x, &s, &z, &loops, rx, n);
            let rep = loops.reps[n][&eta.assignment].clone();
            smash_pair_ref(&loops.space, &s, &target, &rep, ra)
        };
        assignment.insert(id.clone(), image);
    }
    let coaction =
        SSetMap::new(z.clone(), target.clone(), assignment).expect("Σʳη is simplicial");
    KrCoalgebra { r, sphere: s, carrier: z, loops, target, target_pairs, coaction }
}

/// Ωʳ(δ)(g) = δ ∘ g, an element of (Ωʳ ΣʳΩʳ Y)_k.
fn omega_delta(c: &KrCoalgebra, g: &SSetMap) -> SSetMap {
    c.coaction.compose(g)
}

/// η at the loop space: g ↦ (⟨b, t⟩ ↦ [g·t, b]), also in (Ωʳ ΣʳΩʳ Y)_k.
fn eta_loops(c: &KrCoalgebra, g: &SSetMap, k: usize) -> SSetMap {
    let source = &c.loops.sources[k];
    let mut assignment = BTreeMap::new();
    for id in source.generators.keys() {
        let image = if *id == source.basepoint {
            SimplexRef::nondeg(c.target.basepoint.clone())
        } else {
            let (b, t) = &c.loops.source_pairs[k][id];
            let m = source.gen_dim(id);
            let vals = delta_vals(t);
            let moved = g.compose(&smash_map(
                &SSetMap::identity(&c.sphere),
                &operator_map_plus(m, k, &vals),
            ));
            let rep = c.loops.reps[m][&moved.assignment].clone();
            smash_pair_ref(&c.loops.space, &c.sphere, &c.target, &rep, b)
        };
        assignment.insert(id.clone(), image);
    }
    SSetMap { source: source.clone(), target: c.target.clone(), assignment }
}

/// The two components of a simplex of a smash product, pushed through its
/// degeneracy word.
fn smash_components(
    pairs: &BTreeMap<String, (SimplexRef, SimplexRef)>,
    r: &SimplexRef,
) -> (SimplexRef, SimplexRef) {
    let (mut a, mut b) = pairs[&r.gen].clone();
    for &w in r.word.iter().rev() {
        a = a.degeneracy(w);
        b = b.degeneracy(w);
    }
    (a, b)
}

#[derive(Debug, Clone)]
pub struct KrReport {
    pub counit_ok: bool,
    pub coassoc_ok: bool,
    pub failures: Vec<String>,
}

impl KrReport {
    pub fn all_ok(&self) -> bool {
        self.counit_ok && self.coassoc_ok
    }
}

/// The counit ε : ΣʳΩʳY → Y, evaluating a loop element at its sphere
/// coordinate: [g, a] ↦ g(⟨a, ι⟩).
fn counit_map(c: &KrCoalgebra) -> Result<SSetMap, SuspError> {
    let mut assignment = BTreeMap::new();
    for id in c.target.generators.keys() {
        let image = if *id == c.target.basepoint {
            SimplexRef::nondeg(c.carrier.basepoint.clone())
        } else {
            let (lref, a) = &c.target_pairs[id];
            let n = c.target.gen_dim(id);
            let g = c.loops.elem_for_ref(n, lref);
            let top: Vec<usize> = (0..=n).collect();
            let iota = simplex_for_vals(&top);
            g.apply(&smash_pair_ref(
                &c.sphere,
                &standard_simplex_plus(n),
                &c.loops.sources[n],
                a,
                &iota,
            ))
        };
        assignment.insert(id.clone(), image);
    }
    SSetMap::new(c.target.clone(), c.carrier.clone(), assignment)
        .map_err(|e| SuspError::Invalid(format!("counit not simplicial: {e}")))
}

/// Check the comonad axioms on every generator of the carrier.
pub fn check_coalgebra_r(c: &KrCoalgebra) -> KrReport {
    let mut report = KrReport { counit_ok: true, coassoc_ok: true, failures: Vec::new() };
    match counit_map(c) {
        Ok(eps) => {
            let round = eps.compose(&c.coaction);
            if !round.equals(&SSetMap::identity(&c.carrier)) {
                report.counit_ok = false;
                for (id, img) in &round.assignment {
                    if *img != SimplexRef::nondeg(id.clone()) {
                        report
                            .failures
                            .push(format!("ε∘δ moves generator {id} to {img:?}"));
                    }
                }
            }
        }
        Err(e) => {
            report.counit_ok = false;
            report.failures.push(e.to_string());
        }
    }
    // Coassociativity, checked generatorwise on the smash decomposition of
    // the coaction image: both sides are pairs [element of ΩʳΣʳΩʳY, sphere
    // simplex] with the same sphere coordinate.
    for id in c.carrier.generators.keys() {
        if *id == c.carrier.basepoint {
            continue;
        }
        let img = c.coaction.apply(&SimplexRef::nondeg(id.clone()));
        if img.gen == c.target.basepoint {
            continue;
        }
        let n = c.carrier.gen_dim(id);
        let (lref, a) = smash_components(&c.target_pairs, &img);
        if a.gen == c.sphere.basepoint {
            continue;
        }
        let g = c.loops.elem_for_ref(n, &lref).clone();
        let lhs = omega_delta(c, &g);
        let rhs = eta_loops(c, &g, n);
        let constant = SSetMap::constant(&c.loops.sources[n], &c.target);
        let equal = lhs.assignment == rhs.assignment
            || (lhs.assignment == constant.assignment
                && rhs.assignment == constant.assignment);
        if !equal {
            report.coassoc_ok = false;
            report.failures.push(format!(
                "coassociativity fails on generator {id} at level {n}"
            ));
        }
    }
    report
}

/// The primitives of a coalgebra: the levelwise equalizer of η and Ωʳδ
/// inside Ωʳ(carrier), assembled as a pointed simplicial set.
pub struct PrimitivesR {
    pub space: FiniteSimplicialSet,
    pub reps: Vec<BTreeMap<BTreeMap<String, SimplexRef>, SimplexRef>>,
}

pub fn primitives_r(c: &KrCoalgebra) -> Result<PrimitivesR, SuspError> {
    // Deciding membership at level k compares maps out of Sʳ ∧ Δᵏ₊, whose
    // simplices reach level k + r; only levels k ≤ bound − r are decidable
    // from the materialized loop space.
    let bound = c.loops.bound().saturating_sub(c.r);
    let bp = "*".to_string();
    let mut space = FiniteSimplicialSet {
        generators: BTreeMap::from([(bp.clone(), Generator { dim: 0, faces: vec![] })]),
        basepoint: bp.clone(),
    };
    let mut reps: Vec<BTreeMap<BTreeMap<String, SimplexRef>, SimplexRef>> = Vec::new();
    for k in 0..=bound {
        let constant = SSetMap::constant(&c.loops.sources[k], &c.carrier);
        let mut level: BTreeMap<BTreeMap<String, SimplexRef>, SimplexRef> =
            BTreeMap::new();
        let mut fresh = 0usize;
        for g in &c.loops.elems[k] {
            if omega_delta(c, g).assignment != eta_loops(c, g, k).assignment {
                continue;
            }
            let rep = if g.equals(&constant) {
                basepoint_simplex(&bp, k)
            } else {
                let mut degenerate = None;
                for i in 0..k {
                    let p = c.loops.face_elem(g, k, i);
                    if c.loops.degen_elem(&p, k - 1, i).assignment == g.assignment {
                        let below = reps[k - 1].get(&p.assignment).ok_or_else(|| {
                            SuspError::Invalid(
                                "equalizer not closed under faces".to_string(),
                            )
                        })?;
                        degenerate = Some(below.degeneracy(i));
                        break;
                    }
                }
                match degenerate {
                    Some(r) => r,
                    None => {
                        let id = format!("p{k}.{fresh}");
                        fresh += 1;
                        let mut faces = Vec::new();
                        if k > 0 {
                            for i in 0..=k {
                                let f = c.loops.face_elem(g, k, i);
                                faces.push(
                                    reps[k - 1]
                                        .get(&f.assignment)
                                        .cloned()
                                        .ok_or_else(|| {
                                            SuspError::Invalid(
                                                "equalizer not closed under faces"
                                                    .to_string(),
                                            )
                                        })?,
                                );
                            }
                        }
                        space
                            .generators
                            .insert(id.clone(), Generator { dim: k, faces });
                        SimplexRef::nondeg(id)
                    }
                }
            };
            level.insert(g.assignment.clone(), rep);
        }
        reps.push(level);
    }
    space
        .validate()
        .map_err(|e| SuspError::Invalid(format!("primitives not simplicial: {e}")))?;
    Ok(PrimitivesR { space, reps })
}

#[derive(Debug, Clone, Copy)]
pub struct ReflectsIsoVerdict {
    pub f_iso: bool,
    pub sigma_f_iso: bool,
    /// Suspension reflects isomorphisms: Σʳf iso must force f iso.
    pub consistent: bool,
}

pub fn reflects_iso_check(f: &SSetMap, r: usize) -> ReflectsIsoVerdict {
    let f_iso = f.is_isomorphism();
    let sigma = smash_map(f, &SSetMap::identity(&sphere_model(r)));
    let sigma_f_iso = sigma.is_isomorphism();
    ReflectsIsoVerdict { f_iso, sigma_f_iso, consistent: !sigma_f_iso || f_iso }
}

/// equalizer(f ∧ Z, g ∧ Z) = equalizer(f, g) ∧ Z inside source ∧ Z,
/// compared levelwise up to the bound.
pub fn smash_equalizer_commutes(
    f: &SSetMap,
    g: &SSetMap,
    z: &FiniteSimplicialSet,
    bound: usize,
) -> bool {
    let idz = SSetMap::identity(z);
    let (_, incl_big) = equalizer(&smash_map(f, &idz), &smash_map(g, &idz));
    let (_, incl_small) = equalizer(f, g);
    let smashed = smash_map(&incl_small, &idz);
    for n in 0..=bound {
        let mut lhs: Vec<SimplexRef> = incl_big
            .source
            .simplices_at(n)
            .iter()
            .map(|r| incl_big.apply(r))
            .collect();
        let mut rhs: Vec<SimplexRef> = smashed
            .source
            .simplices_at(n)
            .iter()
            .map(|r| smashed.apply(r))
            .collect();
        lhs.sort();
        lhs.dedup();
        rhs.sort();
        rhs.dedup();
        if lhs != rhs {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{projective_plane, reduced_homology_oracle};
    use crate::sset::wedge;

    fn fold_map() -> SSetMap {
        let w = wedge(&sphere(1), &sphere(1));
        let s = sphere(1);
        let assignment = BTreeMap::from([
            ("*".to_string(), SimplexRef::nondeg("0")),
            ("l:0.1".to_string(), SimplexRef::nondeg("0.1")),
            ("r:0.1".to_string(), SimplexRef::nondeg("0.1")),
        ]);
        SSetMap::new(w, s, assignment).unwrap()
    }

    #[test]
    fn suspension_shifts_reduced_homology() {
        assert_eq!(
            suspend(&FiniteSimplicialSet::point(), 2).generators.len(),
            1
        );
        let s2ish = suspend(&sphere(1), 1);
        assert_eq!(reduced_homology_oracle(&s2ish, 2), (1, vec![]));
        for x in [sphere(1), sphere(2), wedge(&sphere(1), &sphere(2)), projective_plane()] {
            let sx = suspend(&x, 1);
            for n in 0..=3 {
                assert_eq!(
                    reduced_homology_oracle(&sx, n + 1),
                    reduced_homology_oracle(&x, n),
                    "degree {n}"
                );
            }
        }
    }

    #[test]
    fn loops_level_counts() {
        // Pointed maps S¹ → S¹: the identity and the constant.
        assert_eq!(loops_level(&sphere(1), 1, 0).len(), 2);
        assert_eq!(loops_level(&FiniteSimplicialSet::point(), 2, 1).len(), 1);
        // A target with basepoint r-skeleton admits only the constant.
        assert_eq!(loops_level(&sphere(3), 2, 0).len(), 1);
    }

    #[test]
    fn loops_complex_of_a_sphere() {
        let lc = loops_complex(&sphere(1), 1, 2);
        // Ω S¹ of the minimal circle: one extra vertex (the identity loop)
        // that must carry its degeneracies consistently.
        assert_eq!(lc.elems[0].len(), 2);
        lc.space.validate().unwrap();
    }

    #[test]
    fn cofree_coalgebras_pass_the_axioms() {
        let trivial = can_r(&FiniteSimplicialSet::point(), 2, 2);
        assert!(check_coalgebra_r(&trivial).all_ok());
        assert_eq!(trivial.carrier.generators.len(), 1);
        let c = can_r(&sphere(1), 1, 3);
        let report = check_coalgebra_r(&c);
        assert!(report.all_ok(), "{:?}", report.failures);
    }

    #[test]
    fn corrupted_coaction_fails() {
        let mut c = can_r(&sphere(1), 1, 3);
        // Send every 2-cell of the carrier to the basepoint class instead
        // of its unit element.
        let bp = c.target.basepoint.clone();
        for (id, img) in c.coaction.assignment.iter_mut() {
            if c.carrier.generators[id].dim == 2 {
                *img = basepoint_simplex(&bp, 2);
            }
        }
        let report = check_coalgebra_r(&c);
        assert!(!report.counit_ok, "{:?}", report.failures);
    }

    #[test]
    fn primitives_recover_the_suspended_object() {
        for (x, bound) in [
            (FiniteSimplicialSet::point(), 2),
            (sphere(1), 3),
            (sphere(2), 3),
        ] {
            let c = can_r(&x, 1, bound);
            let p = primitives_r(&c).unwrap();
            // The unit embeds X into the equalizer; check it is an iso.
            let mut assignment = BTreeMap::from([(
                x.basepoint.clone(),
                SimplexRef::nondeg(p.space.basepoint.clone()),
            )]);
            for (id, g) in &x.generators {
                if *id == x.basepoint {
                    continue;
                }
                let eta = unit_element(
                    &x,
                    &c.sphere,
                    &c.carrier,
                    &c.loops,
                    &SimplexRef::nondeg(id.clone()),
                    g.dim,
                );
                assignment.insert(id.clone(), p.reps[g.dim][&eta.assignment].clone());
            }
            let iso = SSetMap::new(x.clone(), p.space.clone(), assignment).unwrap();
            assert!(iso.is_isomorphism(), "primitives of can_r disagree");
        }
    }

    #[test]
    fn suspension_reflects_isomorphisms() {
        let id = SSetMap::identity(&sphere(1));
        let v = reflects_iso_check(&id, 1);
        assert!(v.f_iso && v.sigma_f_iso && v.consistent);
        let fold = fold_map();
        let v = reflects_iso_check(&fold, 1);
        assert!(!v.f_iso && !v.sigma_f_iso && v.consistent);
        let constant = SSetMap::constant(&sphere(1), &sphere(1));
        let v = reflects_iso_check(&constant, 1);
        assert!(!v.f_iso && !v.sigma_f_iso && v.consistent);
    }

    #[test]
    fn smash_preserves_equalizers() {
        let s1 = sphere(1);
        let id = SSetMap::identity(&s1);
        assert!(smash_equalizer_commutes(&id, &id, &s1, 4));
        let constant = SSetMap::constant(&s1, &s1);
        assert!(smash_equalizer_commutes(&id, &constant, &s1, 4));
        // All parallel pairs S¹∨S² → S¹∨S², smashed with S¹.
        let w = wedge(&sphere(1), &sphere(2));
        let maps = crate::sset::enumerate_maps(&w, &w);
        for f in &maps {
            for g in &maps {
                assert!(smash_equalizer_commutes(f, g, &s1, 5));
            }
        }
    }
}
