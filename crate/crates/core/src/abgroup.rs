//! Finitely generated abelian groups presented by generator orders, and
//! exact homomorphisms between them. Kernels, cokernels, factorizations
//! and isomorphism tests all reduce to Smith normal form computations.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::intlinalg::{
    self, column_lattice_basis, kernel_basis, smith_normal_form, IntMatrix,
};

/// A finitely generated abelian group with a chosen generating set.
/// `orders[j]` is the order of generator j: 0 means infinite (a Z factor),
/// otherwise the order is at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbGroup {
    pub orders: Vec<BigInt>,
}

impl AbGroup {
    pub fn free(rank: usize) -> Self {
        AbGroup { orders: vec![BigInt::zero(); rank] }
    }

    pub fn zero() -> Self {
        AbGroup { orders: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n != 1);
        AbGroup { orders: vec![BigInt::from(n)] }
    }

    pub fn from_parts(free_rank: usize, torsion: &[u64]) -> Self {
        let mut orders = vec![BigInt::zero(); free_rank];
        orders.extend(torsion.iter().map(|&t| BigInt::from(t)));
        AbGroup { orders }
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        AbGroup { orders }
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Relation matrix: diagonal with one column per finite-order generator.
    pub fn relations(&self) -> IntMatrix {
        let cols: Vec<(usize, &BigInt)> =
            self.orders.iter().enumerate().filter(|(_, t)| !t.is_zero()).collect();
        let mut m = IntMatrix::zero(self.ngens(), cols.len());
        for (j, (i, t)) in cols.into_iter().enumerate() {
            m.set(i, j, t.clone());
        }
        m
    }

    /// Reduce a coefficient vector modulo the generator orders, into the
    /// representative with coefficients in [0, order).
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ngens());
        v.iter()
            .zip(&self.orders)
            .map(|(x, t)| if t.is_zero() { x.clone() } else { num_integer::Integer::mod_floor(x, t) })
            .collect()
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Canonical descriptor: (free rank, invariant factors > 1 in a
    /// divisibility chain). Two groups are isomorphic iff these match.
    pub fn descriptor(&self) -> (usize, Vec<BigInt>) {
        canonical_presentation(self.ngens(), &self.relations()).0.parts()
    }

    pub fn is_isomorphic_to(&self, other: &AbGroup) -> bool {
        self.descriptor() == other.descriptor()
    }

    fn parts(&self) -> (usize, Vec<BigInt>) {
        let free = self.orders.iter().filter(|t| t.is_zero()).count();
        let torsion: Vec<BigInt> = self.orders.iter().filter(|t| !t.is_zero()).cloned().collect();
        (free, torsion)
    }

    /// Human-readable form, e.g. "Z^2 + Z/2 + Z/4", or "0".
    pub fn display(&self) -> String {
        let (free, torsion) = self.descriptor();
        let mut parts = Vec::new();
        match free {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        for t in &torsion {
            parts.push(format!("Z/{}", t));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Canonicalize a presentation Z^gens / columns(rels): returns the group in
/// canonical coordinates, a projection matrix (old coords -> canonical) and
/// a lift (canonical -> old), inverse to each other modulo relations.
pub fn canonical_presentation(gens: usize, rels: &IntMatrix) -> (AbGroup, IntMatrix, IntMatrix) {
    assert_eq!(rels.rows(), gens);
    let snf = smith_normal_form(rels);
    // coordinates y = U x; relation lattice becomes diagonal D
    let mut kept = Vec::new();
    let mut orders = Vec::new();
    for i in 0..gens {
        let d = if i < snf.rank { snf.d.get(i, i) } else { BigInt::zero() };
        if d.is_one() {
            continue;
        }
        kept.push(i);
        orders.push(d);
    }
    let proj = snf.u.select_rows(&kept);
    let lift = snf.u_inv.select_cols(&kept);
    (AbGroup { orders }, proj, lift)
}

#[derive(Debug, thiserror::Error)]
pub enum GroupError {
    #[error("matrix does not define a homomorphism (relation image nonzero)")]
    NotAHomomorphism,
    #[error("shape mismatch between matrix and groups")]
    ShapeMismatch,
    #[error("element does not factor through the given subgroup")]
    DoesNotFactor,
    #[error("map is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Linalg(#[from] intlinalg::LinalgError),
}

/// A homomorphism between finitely generated abelian groups, given by an
/// integer matrix on the chosen generators.
#[derive(Clone, Debug)]
pub struct GroupMap {
    pub source: AbGroup,
    pub target: AbGroup,
    pub matrix: IntMatrix,
}

impl GroupMap {
    pub fn new(source: AbGroup, target: AbGroup, matrix: IntMatrix) -> Result<Self, GroupError> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(GroupError::ShapeMismatch);
        }
        let m = GroupMap { source, target, matrix };
        if !m.is_well_defined() {
            return Err(GroupError::NotAHomomorphism);
        }
        Ok(m)
    }

    pub fn identity(g: &AbGroup) -> Self {
        GroupMap { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.ngens()) }
    }

    pub fn zero(source: &AbGroup, target: &AbGroup) -> Self {
        GroupMap {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zero(target.ngens(), source.ngens()),
        }
    }

    /// Each relation of the source must map to zero in the target.
    pub fn is_well_defined(&self) -> bool {
        let image_of_rels = self.matrix.mul(&self.source.relations());
        for j in 0..image_of_rels.cols() {
            if !self.target.is_zero_element(&image_of_rels.column(j)) {
                return false;
            }
        }
        true
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.apply(v))
    }

    /// self after other: (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        assert_eq!(other.target.ngens(), self.source.ngens(), "composition mismatch");
        GroupMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn add(&self, other: &GroupMap) -> GroupMap {
        GroupMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn sub(&self, other: &GroupMap) -> GroupMap {
        GroupMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    /// Equality as homomorphisms (entrywise modulo target orders).
    pub fn equals(&self, other: &GroupMap) -> bool {
        if self.matrix.rows() != other.matrix.rows() || self.matrix.cols() != other.matrix.cols() {
            return false;
        }
        for j in 0..self.matrix.cols() {
            let d: Vec<BigInt> = self
                .matrix
                .column(j)
                .iter()
                .zip(other.matrix.column(j).iter())
                .map(|(a, b)| a - b)
                .collect();
            if !self.target.is_zero_element(&d) {
                return false;
            }
        }
        true
    }

    pub fn is_zero_map(&self) -> bool {
        self.equals(&GroupMap::zero(&self.source, &self.target))
    }

    /// Kernel as a group in canonical coordinates, with its inclusion.
    pub fn kernel(&self) -> (AbGroup, GroupMap) {
        let ga = self.source.ngens();
        // solutions of F x = R_b y: kernel of [F | -R_b]
        let rb = self.target.relations();
        let combined = self.matrix.hstack(&rb.neg());
        let k = kernel_basis(&combined);
        let x_rows: Vec<usize> = (0..ga).collect();
        let x_part = k.select_rows(&x_rows);
        // lattice of solutions in the source coordinates
        let basis = column_lattice_basis(&x_part);
        // relations of the source, expressed in the lattice basis
        let ra = self.source.relations();
        let mut rel_cols = Vec::new();
        for j in 0..ra.cols() {
            let b = ra.column(j);
            let z = intlinalg::solve(&basis, &b)
                .expect("shape")
                .expect("source relation must lie in the kernel lattice");
            rel_cols.push(z);
        }
        let rels = IntMatrix::from_columns(basis.cols(), &rel_cols);
        let (group, _proj, lift) = canonical_presentation(basis.cols(), &rels);
        let incl_matrix = basis.mul(&lift);
        let incl = GroupMap { source: group.clone(), target: self.source.clone(), matrix: incl_matrix };
        (group, incl)
    }

    /// Cokernel in canonical coordinates, with the projection from the
    /// target.
    pub fn cokernel(&self) -> (AbGroup, GroupMap) {
        let rels = self.matrix.hstack(&self.target.relations());
        let (group, proj, _lift) = canonical_presentation(self.target.ngens(), &rels);
        let p = GroupMap { source: self.target.clone(), target: group.clone(), matrix: proj };
        (group, p)
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// For an isomorphism, the inverse homomorphism.
    pub fn inverse(&self) -> Result<GroupMap, GroupError> {
        if !self.is_isomorphism() {
            return Err(GroupError::NotInvertible);
        }
        let system = self.matrix.hstack(&self.target.relations());
        let mut cols = Vec::new();
        for j in 0..self.target.ngens() {
            let mut e = vec![BigInt::zero(); self.target.ngens()];
            e[j] = BigInt::one();
            let sol = intlinalg::solve(&system, &e)?.ok_or(GroupError::NotInvertible)?;
            cols.push(sol[..self.source.ngens()].to_vec());
        }
        let matrix = IntMatrix::from_columns(self.source.ngens(), &cols);
        Ok(GroupMap { source: self.target.clone(), target: self.source.clone(), matrix })
    }

    /// Factor self = incl ∘ g for an inclusion whose image contains the
    /// image of self; returns g.
    pub fn factor_through(&self, incl: &GroupMap) -> Result<GroupMap, GroupError> {
        assert_eq!(incl.target.ngens(), self.target.ngens(), "different ambient group");
        let system = incl.matrix.hstack(&self.target.relations());
        let mut cols = Vec::new();
        for j in 0..self.source.ngens() {
            let b = self.matrix.column(j);
            let sol = intlinalg::solve(&system, &b)?.ok_or(GroupError::DoesNotFactor)?;
            cols.push(sol[..incl.source.ngens()].to_vec());
        }
        let matrix = IntMatrix::from_columns(incl.source.ngens(), &cols);
        GroupMap::new(self.source.clone(), incl.source.clone(), matrix)
    }

    /// Inclusion of A into A ⊕ B (slot = 0) or B into A ⊕ B (slot = 1).
    pub fn sum_inclusion(a: &AbGroup, b: &AbGroup, slot: usize) -> GroupMap {
        let sum = a.direct_sum(b);
        let (src, offset) = if slot == 0 { (a, 0) } else { (b, a.ngens()) };
        let mut m = IntMatrix::zero(sum.ngens(), src.ngens());
        for j in 0..src.ngens() {
            m.set(offset + j, j, BigInt::one());
        }
        GroupMap { source: src.clone(), target: sum, matrix: m }
    }

    /// Projection from A ⊕ B onto the chosen slot.
    pub fn sum_projection(a: &AbGroup, b: &AbGroup, slot: usize) -> GroupMap {
        let sum = a.direct_sum(b);
        let (tgt, offset) = if slot == 0 { (a, 0) } else { (b, a.ngens()) };
        let mut m = IntMatrix::zero(tgt.ngens(), sum.ngens());
        for j in 0..tgt.ngens() {
            m.set(j, offset + j, BigInt::one());
        }
        GroupMap { source: sum, target: tgt.clone(), matrix: m }
    }

    /// Block map A ⊕ B -> C from two maps with common target.
    pub fn from_sum(f: &GroupMap, g: &GroupMap) -> GroupMap {
        assert_eq!(f.target.ngens(), g.target.ngens());
        GroupMap {
            source: f.source.direct_sum(&g.source),
            target: f.target.clone(),
            matrix: f.matrix.hstack(&g.matrix),
        }
    }

    /// Block map A -> B ⊕ C from two maps with common source.
    pub fn into_sum(f: &GroupMap, g: &GroupMap) -> GroupMap {
        assert_eq!(f.source.ngens(), g.source.ngens());
        GroupMap {
            source: f.source.clone(),
            target: f.target.direct_sum(&g.target),
            matrix: f.matrix.vstack(&g.matrix),
        }
    }

    pub fn direct_sum(f: &GroupMap, g: &GroupMap) -> GroupMap {
        GroupMap {
            source: f.source.direct_sum(&g.source),
            target: f.target.direct_sum(&g.target),
            matrix: f.matrix.block_diag(&g.matrix),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn z() -> AbGroup {
        AbGroup::free(1)
    }

    #[test]
    fn descriptor_canonicalizes() {
        // Z/2 + Z/3 = Z/6
        let a = AbGroup { orders: vec![BigInt::from(2), BigInt::from(3)] };
        let b = AbGroup { orders: vec![BigInt::from(6)] };
        assert!(a.is_isomorphic_to(&b));
        assert_eq!(a.display(), "Z/6");
        // Z/2 + Z/4 stays as is
        let c = AbGroup::from_parts(0, &[4, 2]);
        assert_eq!(c.descriptor(), (0, vec![BigInt::from(2), BigInt::from(4)]));
    }

    #[test]
    fn kernel_of_multiplication() {
        // x2 : Z -> Z has trivial kernel
        let f = GroupMap::new(z(), z(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert!(f.is_injective());
        assert!(!f.is_surjective());
        let (coker, _) = f.cokernel();
        assert_eq!(coker.descriptor(), (0, vec![BigInt::from(2)]));

        // x2 : Z/4 -> Z/4 has kernel Z/2
        let z4 = AbGroup::cyclic(4);
        let g = GroupMap::new(z4.clone(), z4.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let (k, incl) = g.kernel();
        assert_eq!(k.descriptor(), (0, vec![BigInt::from(2)]));
        // inclusion composed with g is zero
        assert!(g.compose(&incl).is_zero_map());
    }

    #[test]
    fn reject_ill_defined_map() {
        // Z/2 -> Z can only be zero on the torsion generator
        let bad = GroupMap::new(AbGroup::cyclic(2), z(), IntMatrix::from_rows(&[vec![1]]));
        assert!(matches!(bad, Err(GroupError::NotAHomomorphism)));
        let ok = GroupMap::new(AbGroup::cyclic(2), z(), IntMatrix::from_rows(&[vec![0]]));
        assert!(ok.is_ok());
    }

    #[test]
    fn inverse_roundtrip() {
        // Z/2 + Z/4 automorphism
        let g = AbGroup::from_parts(0, &[2, 4]);
        let f = GroupMap::new(g.clone(), g.clone(), IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]))
            .unwrap();
        assert!(f.is_isomorphism());
        let inv = f.inverse().unwrap();
        assert!(f.compose(&inv).equals(&GroupMap::identity(&g)));
        assert!(inv.compose(&f).equals(&GroupMap::identity(&g)));
    }

    #[test]
    fn factor_through_kernel() {
        // d: Z^2 -> Z, (a,b) -> a+b; v = (1,-1) factors through ker
        let f = GroupMap::new(AbGroup::free(2), z(), IntMatrix::from_rows(&[vec![1, 1]])).unwrap();
        let (k, incl) = f.kernel();
        assert_eq!(k.descriptor(), (1, vec![]));
        let v = GroupMap::new(z(), AbGroup::free(2), IntMatrix::from_rows(&[vec![1], vec![-1]]))
            .unwrap();
        let g = v.factor_through(&incl).unwrap();
        assert!(incl.compose(&g).equals(&v));
    }

    #[test]
    fn kernel_with_torsion_target() {
        // Z -> Z/6, 1 -> 2: kernel = 3Z = Z
        let f = GroupMap::new(z(), AbGroup::cyclic(6), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let (k, incl) = f.kernel();
        assert_eq!(k.descriptor(), (1, vec![]));
        assert_eq!(incl.matrix.get(0, 0).abs(), BigInt::from(3));
    }
}
