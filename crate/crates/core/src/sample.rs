//! Sample objects and independent reference computations used by tests and
//! by the randomized CLI checks: small fixed complexes, random pointed
//! simplicial sets built from abstract simplicial complexes, random chain
//! complexes, and a homology oracle that works directly from nondegenerate
//! simplices (bypassing the simplicial-abelian-group pipeline).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::abgroup::{AbGroup, GroupMap};
use crate::intlinalg::{rank, smith_normal_form, IntMatrix};
use crate::sab::ChainComplex;
use crate::sset::{quotient, FiniteSimplicialSet, Generator, SimplexRef};

/// A two-triangle model of the real projective plane, pointed at a vertex:
/// vertices v, w; edges a, b from w to v and a loop c at v; triangles U, L
/// glued so that the boundary circle a·b⁻¹ wraps twice around c.
pub fn projective_plane() -> FiniteSimplicialSet {
    let mut generators = std::collections::BTreeMap::new();
    let v = || SimplexRef::nondeg("v");
    generators.insert("v".to_string(), Generator { dim: 0, faces: vec![] });
    generators.insert("w".to_string(), Generator { dim: 0, faces: vec![] });
    generators.insert(
        "a".to_string(),
        Generator { dim: 1, faces: vec![SimplexRef::nondeg("w"), v()] },
    );
    generators.insert(
        "b".to_string(),
        Generator { dim: 1, faces: vec![SimplexRef::nondeg("w"), v()] },
    );
    generators.insert("c".to_string(), Generator { dim: 1, faces: vec![v(), v()] });
    generators.insert(
        "U".to_string(),
        Generator {
            dim: 2,
            faces: vec![
                SimplexRef::nondeg("b"),
                SimplexRef::nondeg("a"),
                SimplexRef::nondeg("c"),
            ],
        },
    );
    generators.insert(
        "L".to_string(),
        Generator {
            dim: 2,
            faces: vec![
                SimplexRef::nondeg("a"),
                SimplexRef::nondeg("b"),
                SimplexRef::nondeg("c"),
            ],
        },
    );
    let x = FiniteSimplicialSet { generators, basepoint: "v".to_string() };
    x.validate().expect("projective plane model is well formed");
    x
}

/// The simplicial boundary matrix ∂_m on nondegenerate simplices: the
/// alternating sum of faces, with degenerate faces contributing zero.
fn boundary_matrix(x: &FiniteSimplicialSet, m: usize) -> IntMatrix {
    let at = |d: usize| -> Vec<String> {
        x.generators
            .iter()
            .filter(|(_, g)| g.dim == d)
            .map(|(id, _)| id.clone())
            .collect()
    };
    let rows = at(m.saturating_sub(1));
    let cols = at(m);
    if m == 0 {
        return IntMatrix::zero(0, cols.len());
    }
    let mut d = IntMatrix::zero(rows.len(), cols.len());
    for (j, id) in cols.iter().enumerate() {
        for i in 0..=m {
            let f = x.face(&SimplexRef::nondeg(id.clone()), i);
            if f.word.is_empty() {
                let r = rows.iter().position(|s| *s == f.gen).unwrap();
                let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let v = d.get(r, j) + sign;
                d.set(r, j, v);
            }
        }
    }
    d
}

/// Reduced simplicial homology in degree `n`, as a `(rank, torsion)`
/// descriptor, computed from boundary matrices and Smith normal form alone.
pub fn reduced_homology_oracle(
    x: &FiniteSimplicialSet,
    n: usize,
) -> (usize, Vec<BigInt>) {
    let count = |d: usize| x.generators.values().filter(|g| g.dim == d).count();
    let chains = count(n);
    // Augmented complex: in degree 0 the boundary is the all-ones row.
    let rank_down = if n == 0 {
        if chains == 0 {
            0
        } else {
            1
        }
    } else {
        rank(&boundary_matrix(x, n))
    };
    let up = boundary_matrix(x, n + 1);
    let rank_up = rank(&up);
    let free = chains - rank_down - rank_up;
    let snf = smith_normal_form(&up);
    let torsion: Vec<BigInt> = (0..snf.rank)
        .map(|i| snf.d.get(i, i))
        .filter(|v| !v.is_one())
        .collect();
    (free, torsion)
}

/// A random finitely generated abelian group with bounded rank and a few
/// small torsion factors.
pub fn random_abgroup<R: Rng>(rng: &mut R, max_rank: usize) -> AbGroup {
    let rank = rng.gen_range(0..=max_rank);
    let torsion: Vec<u64> = (0..rng.gen_range(0..=2))
        .map(|_| *[2u64, 3, 4, 5, 6, 8, 9].choose(rng).unwrap())
        .collect();
    AbGroup::from_parts(rank, &torsion)
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let v = rng.gen_range(-2i64..=2);
            if v != 0 {
                m.set(i, j, BigInt::from(v));
            }
        }
    }
    m
}

/// A random chain complex of length `top`: degree 0 may have torsion, the
/// higher terms are free, and each differential beyond the first lands in
/// the kernel of the previous one so d∘d = 0 holds by construction.
pub fn random_chain_complex<R: Rng>(
    rng: &mut R,
    top: usize,
    max_rank: usize,
) -> ChainComplex {
    let mut terms = vec![random_abgroup(rng, max_rank)];
    let mut diffs: Vec<GroupMap> = Vec::new();
    for n in 1..=top {
        let c = AbGroup::free(rng.gen_range(0..=max_rank));
        let d = if n == 1 {
            GroupMap::new(
                c.clone(),
                terms[0].clone(),
                random_matrix(rng, terms[0].ngens(), c.ngens()),
            )
            .expect("maps from a free group are unconstrained")
        } else {
            let (ker, incl) = diffs[n - 2].kernel();
            let pick = GroupMap::new(
                c.clone(),
                ker.clone(),
                random_matrix(rng, ker.ngens(), c.ngens()),
            )
            .expect("maps from a free group are unconstrained");
            incl.compose(&pick)
        };
        terms.push(c);
        diffs.push(d);
    }
    ChainComplex::from_diffs(terms, diffs)
}

fn subset_id(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
}

/// A random pointed simplicial set: the simplicial set of a random abstract
/// simplicial complex on `nverts` vertices (downward closed, pointed at
/// vertex 0), optionally with a random subcomplex collapsed to the point.
pub fn random_pointed_sset<R: Rng>(rng: &mut R, nverts: usize) -> FiniteSimplicialSet {
    let mut facets: BTreeSet<Vec<usize>> = (0..nverts).map(|v| vec![v]).collect();
    let all: Vec<usize> = (0..nverts).collect();
    for _ in 0..rng.gen_range(1..=nverts + 2) {
        let size = rng.gen_range(2..=3.min(nverts)).min(nverts);
        let mut pick: Vec<usize> =
            all.choose_multiple(rng, size).copied().collect();
        pick.sort_unstable();
        facets.insert(pick);
    }
    // Downward closure.
    let mut complex = facets.clone();
    let mut stack: Vec<Vec<usize>> = facets.into_iter().collect();
    while let Some(f) = stack.pop() {
        if f.len() <= 1 {
            continue;
        }
        for i in 0..f.len() {
            let mut sub = f.clone();
            sub.remove(i);
            if complex.insert(sub.clone()) {
                stack.push(sub);
            }
        }
    }
    let generators = complex
        .iter()
        .map(|f| {
            let faces = (0..f.len())
                .filter(|_| f.len() > 1)
                .map(|i| {
                    let mut sub = f.clone();
                    sub.remove(i);
                    SimplexRef::nondeg(subset_id(&sub))
                })
                .collect();
            (subset_id(f), Generator { dim: f.len() - 1, faces })
        })
        .collect();
    let x = FiniteSimplicialSet { generators, basepoint: "0".to_string() };
    x.validate().expect("closed abstract complex is well formed");
    if rng.gen_bool(0.5) {
        // Collapse the subcomplex spanned by a random vertex subset.
        let k = rng.gen_range(1..=nverts);
        let mut verts: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
        verts.push(0);
        verts.sort_unstable();
        verts.dedup();
        let collapse: BTreeSet<String> = x
            .generators
            .keys()
            .filter(|id| {
                id.split('.').all(|v| verts.contains(&v.parse::<usize>().unwrap()))
            })
            .cloned()
            .collect();
        return quotient(&x, &collapse).expect("vertex span is a subcomplex");
    }
    x
}
