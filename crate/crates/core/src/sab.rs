//! Simplicial abelian groups of finite type.
//!
//! Levels are finitely generated abelian groups presented by a generating
//! basis with torsion orders, structure maps are integer matrices, and
//! everything is stored up to an explicit degree bound.  The module
//! provides the free reduced functor on pointed simplicial sets, the
//! normalized-chains functor `N` and its inverse `Γ` (with the natural
//! isomorphism `Γ N ≅ id`), homotopy groups via Smith normal form,
//! Eilenberg–MacLane objects, path objects, fibration detection,
//! pullbacks, and Postnikov truncation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::abgroup::{canonical_presentation, AbGroup, GroupError, GroupMap};
use crate::intlinalg::IntMatrix;
use crate::sset::{degeneracy_words, FiniteSimplicialSet, SimplexRef};

/// A simplicial abelian group stored through a degree bound.
/// `faces[n]` holds `d_0 … d_n : levels[n] → levels[n−1]` (empty at n = 0);
/// `degens[n]` holds `s_0 … s_n : levels[n] → levels[n+1]` (empty at the
/// top level, where the target is not stored).
#[derive(Debug, Clone)]
pub struct SimplicialAbelianGroup {
    pub levels: Vec<AbGroup>,
    pub faces: Vec<Vec<GroupMap>>,
    pub degens: Vec<Vec<GroupMap>>,
}

impl SimplicialAbelianGroup {
    pub fn bound(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn zero_object(bound: usize) -> SimplicialAbelianGroup {
        Self::constant(&AbGroup::zero(), bound)
    }

    /// The constant simplicial group on `g`.
    pub fn constant(g: &AbGroup, bound: usize) -> SimplicialAbelianGroup {
        let levels = vec![g.clone(); bound + 1];
        let faces = (0..=bound)
            .map(|n| if n == 0 { vec![] } else { vec![GroupMap::identity(g); n + 1] })
            .collect();
        let degens = (0..=bound)
            .map(|n| if n == bound { vec![] } else { vec![GroupMap::identity(g); n + 1] })
            .collect();
        SimplicialAbelianGroup { levels, faces, degens }
    }

    /// Forget levels above `new_bound`.
    pub fn restrict(&self, new_bound: usize) -> SimplicialAbelianGroup {
        assert!(new_bound <= self.bound());
        let mut out = SimplicialAbelianGroup {
            levels: self.levels[..=new_bound].to_vec(),
            faces: self.faces[..=new_bound].to_vec(),
            degens: self.degens[..=new_bound].to_vec(),
        };
        out.degens[new_bound] = vec![];
        out
    }

    /// Check the simplicial identities degreewise, as equality of
    /// homomorphisms.
    pub fn validate(&self) -> Result<(), GroupError> {
        let b = self.bound();
        let fail = || Err(GroupError::NotAHomomorphism);
        for n in 0..=b {
            if self.faces[n].len() != if n == 0 { 0 } else { n + 1 } {
                return fail();
            }
            if self.degens[n].len() != if n == b { 0 } else { n + 1 } {
                return fail();
            }
        }
        for n in 2..=b {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = self.faces[n - 1][i].compose(&self.faces[n][j]);
                    let rhs = self.faces[n - 1][j - 1].compose(&self.faces[n][i]);
                    if !lhs.equals(&rhs) {
                        return fail();
                    }
                }
            }
        }
        for n in 0..b.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = self.degens[n + 1][i].compose(&self.degens[n][j]);
                    let rhs = self.degens[n + 1][j + 1].compose(&self.degens[n][i]);
                    if !lhs.equals(&rhs) {
                        return fail();
                    }
                }
            }
        }
        for n in 0..b {
            for j in 0..=n {
                for i in 0..=(n + 1) {
                    let lhs = self.faces[n + 1][i].compose(&self.degens[n][j]);
                    let rhs = if i == j || i == j + 1 {
                        GroupMap::identity(&self.levels[n])
                    } else if i < j {
                        self.degens[n - 1][j - 1].compose(&self.faces[n][i])
                    } else {
                        self.degens[n - 1][j].compose(&self.faces[n][i - 1])
                    };
                    if !lhs.equals(&rhs) {
                        return fail();
                    }
                }
            }
        }
        Ok(())
    }
}

/// A map of simplicial abelian groups, one homomorphism per level up to the
/// common bound.
#[derive(Debug, Clone)]
pub struct SAbMap {
    pub source: SimplicialAbelianGroup,
    pub target: SimplicialAbelianGroup,
    pub maps: Vec<GroupMap>,
}

impl SAbMap {
    pub fn new(
        source: SimplicialAbelianGroup,
        target: SimplicialAbelianGroup,
        maps: Vec<GroupMap>,
    ) -> Result<SAbMap, GroupError> {
        let f = SAbMap { source, target, maps };
        f.validate()?;
        Ok(f)
    }

    pub fn bound(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let b = self.bound();
        assert!(b <= self.source.bound() && b <= self.target.bound());
        for n in 1..=b {
            for i in 0..=n {
                let lhs = self.maps[n - 1].compose(&self.source.faces[n][i]);
                let rhs = self.target.faces[n][i].compose(&self.maps[n]);
                if !lhs.equals(&rhs) {
                    return Err(GroupError::NotAHomomorphism);
                }
            }
        }
        for n in 0..b {
            for i in 0..=n {
                let lhs = self.maps[n + 1].compose(&self.source.degens[n][i]);
                let rhs = self.target.degens[n][i].compose(&self.maps[n]);
                if !lhs.equals(&rhs) {
                    return Err(GroupError::NotAHomomorphism);
                }
            }
        }
        Ok(())
    }

    pub fn identity(a: &SimplicialAbelianGroup) -> SAbMap {
        SAbMap {
            source: a.clone(),
            target: a.clone(),
            maps: a.levels.iter().map(GroupMap::identity).collect(),
        }
    }

    pub fn zero(a: &SimplicialAbelianGroup, b: &SimplicialAbelianGroup) -> SAbMap {
        let n = a.bound().min(b.bound());
        SAbMap {
            source: a.clone(),
            target: b.clone(),
            maps: (0..=n).map(|k| GroupMap::zero(&a.levels[k], &b.levels[k])).collect(),
        }
    }

    /// self after other.
    pub fn compose(&self, other: &SAbMap) -> SAbMap {
        let n = self.bound().min(other.bound());
        SAbMap {
            source: other.source.clone(),
            target: self.target.clone(),
            maps: (0..=n).map(|k| self.maps[k].compose(&other.maps[k])).collect(),
        }
    }

    pub fn is_levelwise_isomorphism(&self) -> bool {
        self.maps.iter().all(|m| m.is_isomorphism())
    }
}

/// A nonnegatively graded chain complex; `diffs[n] : terms[n] → terms[n−1]`
/// for n ≥ 1, and `diffs[0]` maps to the zero group.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub terms: Vec<AbGroup>,
    pub diffs: Vec<GroupMap>,
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn from_diffs(terms: Vec<AbGroup>, positive_diffs: Vec<GroupMap>) -> ChainComplex {
        assert_eq!(positive_diffs.len() + 1, terms.len());
        let mut diffs = vec![GroupMap::zero(&terms[0], &AbGroup::zero())];
        diffs.extend(positive_diffs);
        ChainComplex { terms, diffs }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        for n in 2..=self.top() {
            if !self.diffs[n - 1].compose(&self.diffs[n]).is_zero_map() {
                return Err(GroupError::NotAHomomorphism);
            }
        }
        Ok(())
    }

    /// H_n = ker(d_n) / im(d_{n+1}); requires the complex stored to n+1.
    pub fn homology(&self, n: usize) -> AbGroup {
        assert!(n + 1 <= self.top(), "insufficient degree data for homology");
        let (cycles, incl) = if n == 0 {
            (self.terms[0].clone(), GroupMap::identity(&self.terms[0]))
        } else {
            self.diffs[n].kernel()
        };
        let boundaries = self.diffs[n + 1]
            .factor_through(&incl)
            .expect("boundaries are cycles");
        let _ = cycles;
        boundaries.cokernel().0
    }
}

/// A chain map, one homomorphism per degree.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub maps: Vec<GroupMap>,
}

impl ChainMap {
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        maps: Vec<GroupMap>,
    ) -> Result<ChainMap, GroupError> {
        let top = maps.len() - 1;
        for n in 1..=top {
            let lhs = maps[n - 1].compose(&source.diffs[n]);
            let rhs = target.diffs[n].compose(&maps[n]);
            if !lhs.equals(&rhs) {
                return Err(GroupError::NotAHomomorphism);
            }
        }
        Ok(ChainMap { source, target, maps })
    }
}

/// The free reduced simplicial abelian group on a pointed simplicial set,
/// together with the simplex labeling each basis element.  Level n is free
/// on the n-simplices other than the basepoint degeneracy.
pub fn free_reduced(
    x: &FiniteSimplicialSet,
    bound: usize,
) -> (SimplicialAbelianGroup, Vec<Vec<SimplexRef>>) {
    let mut basis: Vec<Vec<SimplexRef>> = Vec::new();
    let mut index: Vec<BTreeMap<SimplexRef, usize>> = Vec::new();
    for n in 0..=bound {
        let b: Vec<SimplexRef> =
            x.simplices_at(n).into_iter().filter(|r| r.gen != x.basepoint).collect();
        let ix = b.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        basis.push(b);
        index.push(ix);
    }
    let levels: Vec<AbGroup> = basis.iter().map(|b| AbGroup::free(b.len())).collect();
    let column = |level: usize, r: &SimplexRef| -> Vec<BigInt> {
        let mut col = vec![BigInt::zero(); basis[level].len()];
        if let Some(&i) = index[level].get(r) {
            col[i] = BigInt::one();
        }
        col
    };
    let mut faces = Vec::new();
    let mut degens = Vec::new();
    for n in 0..=bound {
        let mut f = Vec::new();
        if n > 0 {
            for i in 0..=n {
                let cols: Vec<Vec<BigInt>> =
                    basis[n].iter().map(|r| column(n - 1, &x.face(r, i))).collect();
                let m = IntMatrix::from_columns(basis[n - 1].len(), &cols);
                f.push(GroupMap::new(levels[n].clone(), levels[n - 1].clone(), m).unwrap());
            }
        }
        faces.push(f);
        let mut s = Vec::new();
        if n < bound {
            for i in 0..=n {
                let cols: Vec<Vec<BigInt>> =
                    basis[n].iter().map(|r| column(n + 1, &r.degeneracy(i))).collect();
                let m = IntMatrix::from_columns(basis[n + 1].len(), &cols);
                s.push(GroupMap::new(levels[n].clone(), levels[n + 1].clone(), m).unwrap());
            }
        }
        degens.push(s);
    }
    (SimplicialAbelianGroup { levels, faces, degens }, basis)
}

/// The normalized chains of a simplicial abelian group:
/// N_n = ∩_{i=1..n} ker d_i with differential induced by d_0, together with
/// the inclusions N_n ↪ A_n.
pub struct NormalizedChains {
    pub complex: ChainComplex,
    pub incl: Vec<GroupMap>,
}

pub fn normalized_chains(a: &SimplicialAbelianGroup) -> NormalizedChains {
    let b = a.bound();
    let mut terms = vec![a.levels[0].clone()];
    let mut incl = vec![GroupMap::identity(&a.levels[0])];
    let mut diffs = vec![GroupMap::zero(&a.levels[0], &AbGroup::zero())];
    for n in 1..=b {
        // Stack d_1, …, d_n into one map and take its kernel.
        let mut stacked = a.faces[n][1].matrix.clone();
        let mut target = a.levels[n - 1].clone();
        for i in 2..=n {
            stacked = stacked.vstack(&a.faces[n][i].matrix);
            target = target.direct_sum(&a.levels[n - 1]);
        }
        let stacked_map = GroupMap::new(a.levels[n].clone(), target, stacked)
            .expect("faces are homomorphisms");
        let (kernel, kernel_incl) = stacked_map.kernel();
        let d0 = a.faces[n][0].compose(&kernel_incl);
        let diff = d0.factor_through(&incl[n - 1]).expect("d_0 preserves normalization");
        terms.push(kernel);
        incl.push(kernel_incl);
        diffs.push(diff);
    }
    NormalizedChains { complex: ChainComplex { terms, diffs }, incl }
}

/// The chain map N(f) induced on normalized chains.
pub fn normalized_map(f: &SAbMap) -> ChainMap {
    let ns = normalized_chains(&f.source);
    let nt = normalized_chains(&f.target);
    let b = f.bound();
    let maps: Vec<GroupMap> = (0..=b)
        .map(|n| {
            f.maps[n]
                .compose(&ns.incl[n])
                .factor_through(&nt.incl[n])
                .expect("maps preserve normalization")
        })
        .collect();
    ChainMap::new(ns.complex, nt.complex, maps).expect("N is functorial")
}

/// π_n(A) = H_n(N A).  Requires A stored to degree ≥ n+1.
pub fn homotopy_group(a: &SimplicialAbelianGroup, n: usize) -> AbGroup {
    normalized_chains(a).complex.homology(n)
}

/// The summands of Γ(C)_n: order surjections [n] ↠ [k] encoded as
/// degeneracy words, in a fixed deterministic order.
fn gamma_summands(c_top: usize, n: usize) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for k in 0..=n.min(c_top) {
        for word in degeneracy_words(k, n - k) {
            out.push((k, word));
        }
    }
    out
}

/// The surjection [n] ↠ [k] named by a degeneracy word, as a value table.
pub(crate) fn surjection_of_word(word: &[usize], n: usize) -> Vec<usize> {
    let mut vals: Vec<usize> = (0..=n).collect();
    for &i in word {
        for v in vals.iter_mut() {
            if *v > i {
                *v -= 1;
            }
        }
    }
    vals
}

/// The degeneracy word naming a surjection (its collapsed positions, in
/// decreasing order).
fn word_of_surjection(g: &[usize]) -> Vec<usize> {
    (0..g.len() - 1).filter(|&p| g[p] == g[p + 1]).rev().collect()
}

fn sum_of(c: &ChainComplex, summands: &[(usize, Vec<usize>)]) -> AbGroup {
    let mut g = AbGroup::zero();
    for (k, _) in summands {
        g = g.direct_sum(&c.terms[*k]);
    }
    g
}

/// The structure map of Γ(C) induced by a monotone `u : [m] → [n]`.  On the
/// summand indexed by σ : [n] ↠ [k] it is determined by the epi–mono
/// factorization σ∘u = ι∘β: the identity into summand β when ι = id, the
/// differential C_k → C_{k−1} when ι is the injection missing 0, and zero
/// otherwise.
fn gamma_operator(
    c: &ChainComplex,
    src: &[(usize, Vec<usize>)],
    dst: &[(usize, Vec<usize>)],
    n: usize,
    u: &[usize],
) -> IntMatrix {
    let mut dst_offset: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    let mut rows = 0;
    for (k, word) in dst {
        dst_offset.insert((*k, word.clone()), rows);
        rows += c.terms[*k].ngens();
    }
    let cols: usize = src.iter().map(|(k, _)| c.terms[*k].ngens()).sum();
    let mut m = IntMatrix::zero(rows, cols);
    let mut co = 0;
    for (k, word) in src {
        let sigma = surjection_of_word(word, n);
        let g: Vec<usize> = u.iter().map(|&j| sigma[j]).collect();
        let image: std::collections::BTreeSet<usize> = g.iter().copied().collect();
        let full: std::collections::BTreeSet<usize> = (0..=*k).collect();
        let tail: std::collections::BTreeSet<usize> = (1..=*k).collect();
        if image == full {
            let ro = dst_offset[&(*k, word_of_surjection(&g))];
            for t in 0..c.terms[*k].ngens() {
                m.set(ro + t, co + t, BigInt::one());
            }
        } else if *k >= 1 && image == tail {
            let beta: Vec<usize> = g.iter().map(|&v| v - 1).collect();
            let ro = dst_offset[&(*k - 1, word_of_surjection(&beta))];
            let d = &c.diffs[*k].matrix;
            for r in 0..d.rows() {
                for col in 0..d.cols() {
                    let v = d.get(r, col);
                    if !v.is_zero() {
                        m.set(ro + r, co + col, v);
                    }
                }
            }
        }
        co += c.terms[*k].ngens();
    }
    m
}

/// Dold–Kan inverse Γ: from a chain complex to a simplicial abelian group
/// with N(Γ C) ≅ C.
pub fn dold_kan_inverse(c: &ChainComplex, bound: usize) -> SimplicialAbelianGroup {
    let top = c.top();
    let summands: Vec<Vec<(usize, Vec<usize>)>> =
        (0..=bound).map(|n| gamma_summands(top, n)).collect();
    let levels: Vec<AbGroup> = summands.iter().map(|s| sum_of(c, s)).collect();
    let mut faces = Vec::new();
    let mut degens = Vec::new();
    for n in 0..=bound {
        let mut f = Vec::new();
        if n > 0 {
            for i in 0..=n {
                let u: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
                let m = gamma_operator(c, &summands[n], &summands[n - 1], n, &u);
                f.push(GroupMap::new(levels[n].clone(), levels[n - 1].clone(), m).unwrap());
            }
        }
        faces.push(f);
        let mut s = Vec::new();
        if n < bound {
            for i in 0..=n {
                let u: Vec<usize> =
                    (0..=(n + 1)).map(|v| if v > i { v - 1 } else { v }).collect();
                let m = gamma_operator(c, &summands[n], &summands[n + 1], n, &u);
                s.push(GroupMap::new(levels[n].clone(), levels[n + 1].clone(), m).unwrap());
            }
        }
        degens.push(s);
    }
    SimplicialAbelianGroup { levels, faces, degens }
}

/// Γ on chain maps (blockwise over the surjection summands).
pub fn gamma_map(f: &ChainMap, bound: usize) -> SAbMap {
    let src = dold_kan_inverse(&f.source, bound);
    let dst = dold_kan_inverse(&f.target, bound);
    let top_s = f.source.top();
    let top_t = f.target.top();
    assert_eq!(top_s, top_t, "Γ on maps expects complexes of equal length");
    let mut maps = Vec::new();
    for n in 0..=bound {
        let summands = gamma_summands(top_s, n);
        let mut rows = 0;
        let mut blocks: Option<IntMatrix> = None;
        for (k, _) in &summands {
            let b = &f.maps[*k].matrix;
            blocks = Some(match blocks {
                None => b.clone(),
                Some(acc) => acc.block_diag(b),
            });
            rows += b.rows();
        }
        let m = blocks.unwrap_or_else(|| IntMatrix::zero(0, 0));
        let _ = rows;
        maps.push(GroupMap::new(src.levels[n].clone(), dst.levels[n].clone(), m).unwrap());
    }
    SAbMap { source: src, target: dst, maps }
}

/// The natural isomorphism φ : Γ(N A) → A, given on the summand σ : [n] ↠ [k]
/// by the degeneracy composite s_σ ∘ (N_k ↪ A_k).
pub fn dold_kan_unit(a: &SimplicialAbelianGroup) -> SAbMap {
    let nc = normalized_chains(a);
    let b = a.bound();
    let gamma = dold_kan_inverse(&nc.complex, b);
    let mut maps = Vec::new();
    for n in 0..=b {
        let mut cols: Vec<IntMatrix> = Vec::new();
        for (k, word) in gamma_summands(nc.complex.top(), n) {
            let mut m = nc.incl[k].clone();
            let mut level = k;
            for &i in word.iter().rev() {
                m = a.degens[level][i].compose(&m);
                level += 1;
            }
            cols.push(m.matrix);
        }
        let matrix = cols
            .into_iter()
            .reduce(|acc, c| acc.hstack(&c))
            .unwrap_or_else(|| IntMatrix::zero(a.levels[n].ngens(), 0));
        maps.push(GroupMap::new(gamma.levels[n].clone(), a.levels[n].clone(), matrix).unwrap());
    }
    SAbMap { source: gamma, target: a.clone(), maps }
}

/// Eilenberg–MacLane object K(G, n): the levelwise tensor product of G with
/// the free reduced group on the n-sphere (the constant group for n = 0).
pub fn eilenberg_maclane(g: &AbGroup, n: usize, bound: usize) -> SimplicialAbelianGroup {
    if g.is_trivial() {
        return SimplicialAbelianGroup::zero_object(bound);
    }
    if n == 0 {
        return SimplicialAbelianGroup::constant(g, bound);
    }
    let (zs, _) = free_reduced(&crate::sset::sphere(n), bound);
    let copies = |m: usize| -> AbGroup {
        let mut out = AbGroup::zero();
        for _ in 0..zs.levels[m].ngens() {
            out = out.direct_sum(g);
        }
        out
    };
    let levels: Vec<AbGroup> = (0..=bound).map(copies).collect();
    let eye = IntMatrix::identity(g.ngens());
    let tensor = |f: &GroupMap, src: usize, dst: usize| -> GroupMap {
        GroupMap::new(levels[src].clone(), levels[dst].clone(), f.matrix.kronecker(&eye))
            .expect("tensoring preserves relations")
    };
    let faces = (0..=bound)
        .map(|m| zs.faces[m].iter().map(|f| tensor(f, m, m - 1)).collect())
        .collect();
    let degens = (0..=bound)
        .map(|m| zs.degens[m].iter().map(|s| tensor(s, m, m + 1)).collect())
        .collect();
    SimplicialAbelianGroup { levels, faces, degens }
}

/// An acyclic path object P(A) with its projection fibration P(A) ↠ A.
/// On normalized chains: E_n = C_n ⊕ C_{n+1} with d(a, b) = (da, a − db),
/// so that projecting to the first summand is a strict chain surjection;
/// transported back through Γ.  Trusted one degree below A's bound.
pub fn path_object(a: &SimplicialAbelianGroup) -> (SimplicialAbelianGroup, SAbMap) {
    let b = a.bound();
    assert!(b >= 1, "path object needs at least two stored levels");
    let nc = normalized_chains(a);
    let c = &nc.complex;
    let eb = b - 1;
    let mut terms = Vec::new();
    let mut diffs: Vec<GroupMap> = Vec::new();
    for n in 0..=eb {
        terms.push(c.terms[n].direct_sum(&c.terms[n + 1]));
    }
    diffs.push(GroupMap::zero(&terms[0], &AbGroup::zero()));
    for n in 1..=eb {
        // d(a, b) = (da, a − db)
        let da = &c.diffs[n].matrix;
        let top = da.hstack(&IntMatrix::zero(da.rows(), c.terms[n + 1].ngens()));
        let bottom = IntMatrix::identity(c.terms[n].ngens())
            .hstack(&c.diffs[n + 1].matrix.neg());
        diffs.push(
            GroupMap::new(terms[n].clone(), terms[n - 1].clone(), top.vstack(&bottom))
                .expect("cone differential is a homomorphism"),
        );
    }
    let e = ChainComplex { terms, diffs };
    e.validate().expect("cone squares to zero");
    // π : E → C, projection to the first summand.
    let c_restricted = ChainComplex {
        terms: c.terms[..=eb].to_vec(),
        diffs: c.diffs[..=eb].to_vec(),
    };
    let pi_maps: Vec<GroupMap> = (0..=eb)
        .map(|n| {
            let m = IntMatrix::identity(c.terms[n].ngens())
                .hstack(&IntMatrix::zero(c.terms[n].ngens(), c.terms[n + 1].ngens()));
            GroupMap::new(e.terms[n].clone(), c.terms[n].clone(), m).unwrap()
        })
        .collect();
    let pi = ChainMap::new(e.clone(), c_restricted, pi_maps).expect("projection is a chain map");
    let p = dold_kan_inverse(&e, eb);
    let gpi = gamma_map(&pi, eb);
    let phi = dold_kan_unit(&a.restrict(eb));
    let proj = SAbMap {
        source: p.clone(),
        target: a.restrict(eb),
        maps: (0..=eb).map(|n| phi.maps[n].compose(&gpi.maps[n])).collect(),
    };
    (p, proj)
}

/// A map is a fibration iff N(f) is surjective in every positive degree
/// (up to the stored bound).
pub fn is_fibration(f: &SAbMap) -> bool {
    let nf = normalized_map(f);
    (1..nf.maps.len()).all(|n| nf.maps[n].is_surjective())
}

/// Degreewise pullback of f : A → C and g : B → C, with its projections.
pub fn pullback(f: &SAbMap, g: &SAbMap) -> (SimplicialAbelianGroup, SAbMap, SAbMap) {
    let b = f.bound().min(g.bound());
    let mut levels = Vec::new();
    let mut incls = Vec::new();
    for n in 0..=b {
        let sum = f.source.levels[n].direct_sum(&g.source.levels[n]);
        let diff = GroupMap::new(
            sum.clone(),
            f.target.levels[n].clone(),
            f.maps[n].matrix.hstack(&g.maps[n].matrix.neg()),
        )
        .expect("difference map");
        let (p, incl) = diff.kernel();
        levels.push(p);
        incls.push(incl);
    }
    let mut faces = vec![vec![]];
    for n in 1..=b {
        let mut fs = Vec::new();
        for i in 0..=n {
            let d = GroupMap::direct_sum(&f.source.faces[n][i], &g.source.faces[n][i]);
            let fs_i = d
                .compose(&incls[n])
                .factor_through(&incls[n - 1])
                .expect("faces preserve the pullback");
            fs.push(fs_i);
        }
        faces.push(fs);
    }
    let mut degens = Vec::new();
    for n in 0..=b {
        let mut ss = Vec::new();
        if n < b {
            for i in 0..=n {
                let s = GroupMap::direct_sum(&f.source.degens[n][i], &g.source.degens[n][i]);
                ss.push(
                    s.compose(&incls[n])
                        .factor_through(&incls[n + 1])
                        .expect("degeneracies preserve the pullback"),
                );
            }
        }
        degens.push(ss);
    }
    let p = SimplicialAbelianGroup { levels, faces, degens };
    let proj = |slot: usize, side: &SimplicialAbelianGroup| -> SAbMap {
        let maps = (0..=b)
            .map(|n| {
                GroupMap::sum_projection(
                    &f.source.levels[n],
                    &g.source.levels[n],
                    slot,
                )
                .compose(&incls[n])
            })
            .collect();
        SAbMap { source: p.clone(), target: side.restrict(b), maps }
    };
    let p1 = proj(0, &f.source);
    let p2 = proj(1, &g.source);
    (p, p1, p2)
}

/// Good truncation τ_{≤n} of a chain complex, with the quotient chain map.
pub fn good_truncation(c: &ChainComplex, n: usize) -> (ChainComplex, ChainMap) {
    assert!(n < c.top(), "truncation needs the differential from degree n+1");
    let mut terms = c.terms[..=n].to_vec();
    let mut diffs = c.diffs[..=n].to_vec();
    // Replace degree n by C_n / im(d_{n+1}).
    let rels = c.diffs[n + 1].matrix.hstack(&c.terms[n].relations());
    let (q, proj, lift) = canonical_presentation(c.terms[n].ngens(), &rels);
    terms[n] = q.clone();
    if n >= 1 {
        let induced = c.diffs[n].matrix.mul(&lift);
        diffs[n] = GroupMap::new(q.clone(), c.terms[n - 1].clone(), induced)
            .expect("differential descends to the quotient");
    } else {
        diffs[0] = GroupMap::zero(&q, &AbGroup::zero());
    }
    for m in (n + 1)..=c.top() {
        terms.push(AbGroup::zero());
        let prev = terms[m - 1].clone();
        diffs.push(GroupMap::zero(&AbGroup::zero(), &prev));
    }
    let tau = ChainComplex { terms, diffs };
    let mut maps: Vec<GroupMap> = (0..n).map(|m| GroupMap::identity(&c.terms[m])).collect();
    maps.push(
        GroupMap::new(c.terms[n].clone(), q, proj).expect("projection is a homomorphism"),
    );
    for m in (n + 1)..=c.top() {
        maps.push(GroupMap::zero(&c.terms[m], &AbGroup::zero()));
    }
    let t = ChainMap::new(c.clone(), tau.clone(), maps).expect("truncation is a chain map");
    (tau, t)
}

/// Postnikov truncation of a simplicial abelian group: Γ of the good
/// truncation of its normalized chains, with the canonical map from A.
pub fn postnikov_truncation(
    a: &SimplicialAbelianGroup,
    n: usize,
) -> (SimplicialAbelianGroup, SAbMap) {
    let b = a.bound();
    let nc = normalized_chains(a);
    let (_, t) = good_truncation(&nc.complex, n.min(b - 1));
    let gt = gamma_map(&t, b);
    let phi = dold_kan_unit(a);
    let phi_inv: Vec<GroupMap> = phi
        .maps
        .iter()
        .map(|m| m.inverse().expect("Dold–Kan unit is an isomorphism"))
        .collect();
    let maps: Vec<GroupMap> =
        (0..=b).map(|k| gt.maps[k].compose(&phi_inv[k])).collect();
    let stage = gt.target.clone();
    (stage.clone(), SAbMap { source: a.clone(), target: stage, maps })
}

// --- JSON serialization -----------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LevelDto {
    rank: usize,
    torsion: Vec<String>,
    faces: Vec<Vec<Vec<String>>>,
    degens: Vec<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
struct SAbDto {
    bound: usize,
    levels: Vec<LevelDto>,
}

fn matrix_to_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn matrix_from_strings(rows: usize, cols: usize, data: &[Vec<String>]) -> Option<IntMatrix> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return None;
    }
    let mut m = IntMatrix::zero(rows, cols);
    for (i, row) in data.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, s.parse().ok()?);
        }
    }
    Some(m)
}

impl SimplicialAbelianGroup {
    /// Serialize with each level's basis reordered free-part-first, matching
    /// the `{rank, torsion, faces, degens}` layout.
    pub fn to_json(&self) -> String {
        let perm: Vec<Vec<usize>> = self
            .levels
            .iter()
            .map(|g| {
                let mut p: Vec<usize> =
                    (0..g.ngens()).filter(|&i| g.orders[i].is_zero()).collect();
                p.extend((0..g.ngens()).filter(|&i| !g.orders[i].is_zero()));
                p
            })
            .collect();
        let reorder = |m: &IntMatrix, src: usize, dst: usize| -> IntMatrix {
            m.select_rows(&perm[dst]).select_cols(&perm[src])
        };
        let levels = (0..=self.bound())
            .map(|n| {
                let g = &self.levels[n];
                let rank = g.orders.iter().filter(|o| o.is_zero()).count();
                let torsion = perm[n][rank..]
                    .iter()
                    .map(|&i| g.orders[i].to_string())
                    .collect();
                LevelDto {
                    rank,
                    torsion,
                    faces: self.faces[n]
                        .iter()
                        .map(|f| matrix_to_strings(&reorder(&f.matrix, n, n - 1)))
                        .collect(),
                    degens: self.degens[n]
                        .iter()
                        .map(|s| matrix_to_strings(&reorder(&s.matrix, n, n + 1)))
                        .collect(),
                }
            })
            .collect();
        let mut s =
            serde_json::to_string_pretty(&SAbDto { bound: self.bound(), levels }).unwrap();
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<SimplicialAbelianGroup, GroupError> {
        let dto: SAbDto =
            serde_json::from_str(text).map_err(|_| GroupError::ShapeMismatch)?;
        if dto.levels.len() != dto.bound + 1 {
            return Err(GroupError::ShapeMismatch);
        }
        let levels: Vec<AbGroup> = dto
            .levels
            .iter()
            .map(|l| {
                let torsion: Option<Vec<BigInt>> =
                    l.torsion.iter().map(|s| s.parse().ok()).collect();
                let mut orders = vec![BigInt::zero(); l.rank];
                orders.extend(torsion.ok_or(GroupError::ShapeMismatch)?);
                Ok(AbGroup { orders })
            })
            .collect::<Result<_, GroupError>>()?;
        let b = dto.bound;
        let mut faces = Vec::new();
        let mut degens = Vec::new();
        for n in 0..=b {
            let expect_faces = if n == 0 { 0 } else { n + 1 };
            let expect_degens = if n == b { 0 } else { n + 1 };
            if dto.levels[n].faces.len() != expect_faces
                || dto.levels[n].degens.len() != expect_degens
            {
                return Err(GroupError::ShapeMismatch);
            }
            let mut f = Vec::new();
            for data in &dto.levels[n].faces {
                let m = matrix_from_strings(levels[n - 1].ngens(), levels[n].ngens(), data)
                    .ok_or(GroupError::ShapeMismatch)?;
                f.push(GroupMap::new(levels[n].clone(), levels[n - 1].clone(), m)?);
            }
            faces.push(f);
            let mut s = Vec::new();
            for data in &dto.levels[n].degens {
                let m = matrix_from_strings(levels[n + 1].ngens(), levels[n].ngens(), data)
                    .ok_or(GroupError::ShapeMismatch)?;
                s.push(GroupMap::new(levels[n].clone(), levels[n + 1].clone(), m)?);
            }
            degens.push(s);
        }
        let out = SimplicialAbelianGroup { levels, faces, degens };
        out.validate()?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::sset::{product, smash, sphere, wedge, FiniteSimplicialSet};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z() -> AbGroup {
        AbGroup::free(1)
    }

    #[test]
    fn free_reduced_examples() {
        let (zero, _) = free_reduced(&FiniteSimplicialSet::point(), 3);
        assert!(zero.levels.iter().all(|g| g.is_trivial()));
        let (s2, _) = free_reduced(&sphere(2), 4);
        s2.validate().unwrap();
        assert_eq!(s2.levels[2].ngens(), 1);
        let (w, _) = free_reduced(&wedge(&sphere(1), &sphere(1)), 3);
        assert_eq!(w.levels[1].ngens(), 2);
    }

    #[test]
    fn normalized_chains_of_spheres() {
        for n in 1..=3 {
            let (a, _) = free_reduced(&sphere(n), n + 2);
            let nc = normalized_chains(&a);
            nc.complex.validate().unwrap();
            for m in 0..=n + 2 {
                let expected = if m == n { 1 } else { 0 };
                assert_eq!(
                    nc.complex.terms[m].ngens(),
                    expected,
                    "N(Z~S^{n}) degree {m}"
                );
            }
        }
        let (w, _) = free_reduced(&wedge(&sphere(1), &sphere(1)), 3);
        let nc = normalized_chains(&w);
        assert!(nc.complex.terms[1].is_isomorphic_to(&AbGroup::free(2)));
    }

    #[test]
    fn homotopy_groups_of_familiar_spaces() {
        let (s2, _) = free_reduced(&sphere(2), 4);
        assert!(homotopy_group(&s2, 2).is_isomorphic_to(&z()));
        assert!(homotopy_group(&s2, 1).is_trivial());
        assert!(homotopy_group(&s2, 3).is_trivial());
        let (torus, _) = free_reduced(&product(&sphere(1), &sphere(1)), 4);
        assert!(homotopy_group(&torus, 1).is_isomorphic_to(&AbGroup::free(2)));
        assert!(homotopy_group(&torus, 2).is_isomorphic_to(&z()));
        let zero = SimplicialAbelianGroup::zero_object(4);
        assert!(homotopy_group(&zero, 2).is_trivial());
    }

    #[test]
    fn homology_agrees_with_independent_oracle() {
        let corpus: Vec<(&str, FiniteSimplicialSet)> = vec![
            ("S1", sphere(1)),
            ("S2", sphere(2)),
            ("S1vS2", wedge(&sphere(1), &sphere(2))),
            ("torus", product(&sphere(1), &sphere(1))),
            ("RP2", sample::projective_plane()),
        ];
        for (name, x) in corpus {
            let (a, _) = free_reduced(&x, 6);
            for n in 0..=4 {
                let ours = homotopy_group(&a, n).descriptor();
                let oracle = sample::reduced_homology_oracle(&x, n);
                assert_eq!(ours, oracle, "{name} degree {n}");
            }
        }
        // And explicitly: the projective plane has Z/2 in degree 1.
        let (rp2, _) = free_reduced(&sample::projective_plane(), 4);
        assert!(homotopy_group(&rp2, 1).is_isomorphic_to(&AbGroup::cyclic(2)));
        assert!(homotopy_group(&rp2, 2).is_trivial());
    }

    #[test]
    fn eilenberg_maclane_concentration() {
        let cases: Vec<(AbGroup, usize)> = vec![
            (z(), 2),
            (AbGroup::cyclic(2), 3),
            (AbGroup::from_parts(2, &[]), 1),
            (AbGroup::cyclic(12), 0),
        ];
        for (g, n) in cases {
            let k = eilenberg_maclane(&g, n, n + 3);
            k.validate().unwrap();
            for m in 0..=n + 2 {
                let pi = homotopy_group(&k, m);
                if m == n {
                    assert!(pi.is_isomorphic_to(&g), "pi_{m} of K(.., {n})");
                } else {
                    assert!(pi.is_trivial(), "pi_{m} of K(.., {n})");
                }
            }
        }
        let trivial = eilenberg_maclane(&AbGroup::zero(), 2, 4);
        assert!(trivial.levels.iter().all(|g| g.is_trivial()));
    }

    #[test]
    fn gamma_of_concentrated_complexes() {
        let c0 = ChainComplex::from_diffs(vec![z()], vec![]);
        let constant = dold_kan_inverse(&c0, 3);
        constant.validate().unwrap();
        assert!(constant.levels.iter().all(|g| g.is_isomorphic_to(&z())));
        for n in 1..=3 {
            let mut terms = vec![AbGroup::zero(); n];
            terms.push(z());
            let mut diffs = Vec::new();
            for m in 1..=n {
                diffs.push(GroupMap::zero(&terms[m], &terms[m - 1]));
            }
            let c = ChainComplex::from_diffs(terms, diffs);
            let gamma = dold_kan_inverse(&c, n + 2);
            gamma.validate().unwrap();
            let (zs, _) = free_reduced(&sphere(n), n + 2);
            for m in 0..=n + 2 {
                assert_eq!(gamma.levels[m].ngens(), zs.levels[m].ngens(), "level {m}");
            }
        }
    }

    #[test]
    fn n_gamma_roundtrip_and_unit() {
        // Explicit small case: multiplication by 2 in degrees 1 → 0.
        let d = GroupMap::new(z(), z(), IntMatrix::from_dense(&[vec![BigInt::from(2)]]))
            .unwrap();
        let c = ChainComplex::from_diffs(vec![z(), z()], vec![d]);
        let gamma = dold_kan_inverse(&c, 4);
        gamma.validate().unwrap();
        let nc = normalized_chains(&gamma);
        for m in 0..=3 {
            assert!(nc.complex.terms[m].is_isomorphic_to(&c.terms[m.min(1)].clone())
                || m > 1 && nc.complex.terms[m].is_trivial());
        }
        assert!(nc.complex.homology(0).is_isomorphic_to(&AbGroup::cyclic(2)));
        // The unit φ : ΓN(A) → A is a simplicial isomorphism.
        for x in [sphere(1), wedge(&sphere(1), &sphere(2)), sample::projective_plane()] {
            let (a, _) = free_reduced(&x, 4);
            let phi = dold_kan_unit(&a);
            phi.validate().unwrap();
            assert!(phi.is_levelwise_isomorphism());
        }
    }

    #[test]
    fn n_gamma_roundtrip_on_random_complexes() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..25 {
            let c = sample::random_chain_complex(&mut rng, 4, 3);
            c.validate().unwrap();
            let gamma = dold_kan_inverse(&c, c.top() + 1);
            gamma.validate().unwrap();
            let nc = normalized_chains(&gamma);
            // Compare via the projection of N(ΓC)_n onto the top summand.
            for n in 0..=c.top() {
                assert!(
                    nc.complex.terms[n].is_isomorphic_to(&c.terms[n]),
                    "degree {n}"
                );
            }
            for n in 0..=c.top() {
                if n + 1 <= c.top() {
                    assert_eq!(
                        nc.complex.homology(n).descriptor(),
                        c.homology(n).descriptor(),
                        "homology {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn path_object_is_acyclic_fibration() {
        let k = eilenberg_maclane(&z(), 1, 5);
        let (p, proj) = path_object(&k);
        p.validate().unwrap();
        proj.validate().unwrap();
        for m in 0..=3 {
            assert!(homotopy_group(&p, m).is_trivial(), "pi_{m} of path object");
        }
        assert!(is_fibration(&proj));
        let zero = SimplicialAbelianGroup::zero_object(3);
        let (pz, _) = path_object(&zero);
        assert!(pz.levels.iter().all(|g| g.is_trivial()));
        let k2 = eilenberg_maclane(&AbGroup::cyclic(2), 2, 5);
        let (_, proj2) = path_object(&k2);
        let np = normalized_map(&proj2);
        for n in 1..np.maps.len() {
            assert!(np.maps[n].is_surjective());
        }
        // 0 → P → A is the zero map.
        let incl = SAbMap::zero(&SimplicialAbelianGroup::zero_object(proj2.bound()), &proj2.source);
        let comp = proj2.compose(&incl);
        assert!(comp.maps.iter().all(|m| m.is_zero_map()));
    }

    #[test]
    fn fibration_detection() {
        let k = eilenberg_maclane(&z(), 1, 4);
        let zero = SimplicialAbelianGroup::zero_object(4);
        let to_zero = SAbMap::zero(&k, &zero);
        assert!(is_fibration(&to_zero));
        let c = SimplicialAbelianGroup::constant(&z(), 4);
        let double = SAbMap {
            source: c.clone(),
            target: c.clone(),
            maps: (0..=4)
                .map(|n| {
                    GroupMap::new(
                        c.levels[n].clone(),
                        c.levels[n].clone(),
                        IntMatrix::from_dense(&[vec![BigInt::from(2)]]),
                    )
                    .unwrap()
                })
                .collect(),
        };
        double.validate().unwrap();
        assert!(is_fibration(&double));
    }

    #[test]
    fn pullback_examples() {
        let k = eilenberg_maclane(&z(), 2, 5);
        let id = SAbMap::identity(&k);
        let (p, _, _) = pullback(&id, &id);
        for n in 0..=5 {
            assert!(p.levels[n].is_isomorphic_to(&k.levels[n]));
        }
        let zero = SimplicialAbelianGroup::zero_object(4);
        let a = eilenberg_maclane(&z(), 1, 4);
        let b = eilenberg_maclane(&AbGroup::cyclic(2), 1, 4);
        let (sum, p1, p2) = pullback(&SAbMap::zero(&a, &zero), &SAbMap::zero(&b, &zero));
        p1.validate().unwrap();
        p2.validate().unwrap();
        for n in 0..=4 {
            assert!(sum.levels[n]
                .is_isomorphic_to(&a.levels[n].direct_sum(&b.levels[n])));
        }
        // Fiber of the path fibration over K(Z, 2) is a loop object: pi_1 = Z.
        let k2 = eilenberg_maclane(&z(), 2, 5);
        let (_, proj) = path_object(&k2);
        let zmap = SAbMap::zero(&SimplicialAbelianGroup::zero_object(proj.bound()), &proj.target);
        let (fiber, _, _) = pullback(&proj, &zmap);
        fiber.validate().unwrap();
        assert!(homotopy_group(&fiber, 1).is_isomorphic_to(&z()));
        assert!(homotopy_group(&fiber, 2).is_trivial());
    }

    #[test]
    fn postnikov_truncation_behaves() {
        let k = eilenberg_maclane(&z(), 2, 5);
        let (stage, map) = postnikov_truncation(&k, 2);
        map.validate().unwrap();
        assert!(map.is_levelwise_isomorphism());
        assert!(is_fibration(&map));
        for m in 0..=3 {
            let pi = homotopy_group(&stage, m);
            if m == 2 {
                assert!(pi.is_isomorphic_to(&z()));
            } else {
                assert!(pi.is_trivial());
            }
        }
        // Degree-0 truncation of something with higher homotopy.
        let (a, _) = free_reduced(&sphere(1), 4);
        let (stage0, map0) = postnikov_truncation(&a, 0);
        map0.validate().unwrap();
        assert!(is_fibration(&map0));
        assert!(homotopy_group(&stage0, 0)
            .is_isomorphic_to(&homotopy_group(&a, 0)));
        for m in 1..=2 {
            assert!(homotopy_group(&stage0, m).is_trivial());
        }
        // Smash of two circles: stage 2 keeps Z in degree 2 only.
        let (s2ish, _) = free_reduced(&smash(&sphere(1), &sphere(1)), 5);
        let (stage2, map2) = postnikov_truncation(&s2ish, 2);
        map2.validate().unwrap();
        for m in 0..=3 {
            let pi = homotopy_group(&stage2, m);
            if m == 2 {
                assert!(pi.is_isomorphic_to(&z()));
            } else {
                assert!(pi.is_trivial(), "degree {m}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let k = eilenberg_maclane(&AbGroup::from_parts(1, &[2]), 1, 3);
        let text = k.to_json();
        let back = SimplicialAbelianGroup::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        for n in 0..=3 {
            assert!(back.levels[n].is_isomorphic_to(&k.levels[n]));
        }
        assert!(SimplicialAbelianGroup::from_json("{}").is_err());
    }
}
