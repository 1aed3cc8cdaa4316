//! Finite groups as explicit multiplication tables, and their integral
//! representations on the toral lattice.
//!
//! Groups stay tiny here (the component group of a toral group at desk
//! scale), so the table form is canonical: permutation generators are
//! closed up into a table at construction and every representation stores
//! one unimodular matrix per element, not per generator.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::caps;
use crate::error::{Error, Result};
use crate::linalg::{kernel, IntMatrix, Lattice};

/// A finite group on elements `0..n` with `0` the identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Validate a multiplication table as a group law with identity 0.
    pub fn from_mult_table(mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if n > caps::MAX_GROUP_ORDER {
            return Err(Error::CapExceeded(format!(
                "group order {} exceeds {}",
                n,
                caps::MAX_GROUP_ORDER
            )));
        }
        for row in &mult {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::NotAGroup("table is not n x n over 0..n".into()));
            }
        }
        for a in 0..n {
            if mult[0][a] != a || mult[a][0] != a {
                return Err(Error::NotAGroup("0 is not an identity".into()));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mult[a][b] == 0 && mult[b][a] == 0) {
                Some(b) => inverse[a] = b,
                None => return Err(Error::NotAGroup(format!("element {a} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let generators = minimal_generators(&mult);
        Ok(FiniteGroup { order: n, mult, inverse, generators })
    }

    /// Close permutation generators (on points `0..deg`) into a table.
    pub fn from_permutations(deg: usize, gens: &[Vec<usize>]) -> Result<Self> {
        for g in gens {
            if g.len() != deg {
                return Err(Error::NotAGroup("permutation degree mismatch".into()));
            }
            let mut seen = vec![false; deg];
            for &x in g {
                if x >= deg || seen[x] {
                    return Err(Error::NotAGroup("not a permutation".into()));
                }
                seen[x] = true;
            }
        }
        let id: Vec<usize> = (0..deg).collect();
        let mut elements: Vec<Vec<usize>> = vec![id.clone()];
        let mut frontier = vec![id];
        while let Some(p) = frontier.pop() {
            for g in gens {
                let q: Vec<usize> = (0..deg).map(|i| g[p[i]]).collect();
                if !elements.contains(&q) {
                    if elements.len() >= caps::MAX_GROUP_ORDER {
                        return Err(Error::CapExceeded(format!(
                            "permutation closure exceeds group order cap {}",
                            caps::MAX_GROUP_ORDER
                        )));
                    }
                    elements.push(q.clone());
                    frontier.push(q);
                }
            }
        }
        let n = elements.len();
        let mut mult = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..deg).map(|i| elements[a][elements[b][i]]).collect();
                mult[a][b] = elements
                    .iter()
                    .position(|e| *e == prod)
                    .expect("closure is multiplication-closed");
            }
        }
        let mut group = Self::from_mult_table(mult)?;
        // keep the declared generators (as element indices) when possible
        let gen_ids: Vec<usize> = gens
            .iter()
            .filter_map(|g| elements.iter().position(|e| e == g))
            .collect();
        if !gen_ids.is_empty() {
            group.generators = gen_ids;
        }
        Ok(group)
    }

    pub fn trivial() -> Self {
        Self::from_mult_table(vec![vec![0]]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("cyclic group of order 0".into()));
        }
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_mult_table(mult)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Order of a single element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult
    }
}

fn minimal_generators(mult: &[Vec<usize>]) -> Vec<usize> {
    let n = mult.len();
    let closure = |gens: &[usize]| -> usize {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut frontier = vec![0usize];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = mult[a][g];
                if !seen[b] {
                    seen[b] = true;
                    frontier.push(b);
                }
            }
        }
        seen.iter().filter(|&&s| s).count()
    };
    let mut gens: Vec<usize> = Vec::new();
    while closure(&gens) < n {
        // greedily add the element extending the closure the most
        let best = (1..n)
            .max_by_key(|&c| {
                let mut trial = gens.clone();
                trial.push(c);
                closure(&trial)
            })
            .expect("nontrivial group has a generator");
        gens.push(best);
    }
    gens
}

/// An integral representation `ρ: W → GL_r(Z)`, one matrix per element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegralRep {
    group: FiniteGroup,
    rank: usize,
    matrices: Vec<IntMatrix>,
}

impl IntegralRep {
    /// Build from matrices for the group's stored generators; all other
    /// element matrices are synthesized by multiplying along the table.
    pub fn from_generator_matrices(
        group: FiniteGroup,
        rank: usize,
        gen_mats: &[IntMatrix],
    ) -> Result<Self> {
        if gen_mats.len() != group.generators().len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} generator matrices, got {}",
                group.generators().len(),
                gen_mats.len()
            )));
        }
        if rank > caps::MAX_RANK {
            return Err(Error::CapExceeded(format!("rank {} exceeds {}", rank, caps::MAX_RANK)));
        }
        for m in gen_mats {
            if m.rows != rank || m.cols != rank {
                return Err(Error::InvalidParameter("generator matrix shape".into()));
            }
        }
        let n = group.order();
        let mut matrices: Vec<Option<IntMatrix>> = vec![None; n];
        matrices[0] = Some(IntMatrix::identity(rank));
        let gens: Vec<usize> = group.generators().to_vec();
        let mut frontier = vec![0usize];
        while let Some(a) = frontier.pop() {
            for (gi, &g) in gens.iter().enumerate() {
                let b = group.mul(a, g);
                if matrices[b].is_none() {
                    let m = matrices[a].as_ref().unwrap().mul(&gen_mats[gi]);
                    matrices[b] = Some(m);
                    frontier.push(b);
                }
            }
        }
        if matrices.iter().any(|m| m.is_none()) {
            return Err(Error::InvalidParameter(
                "stored generators do not generate the group".into(),
            ));
        }
        let rep = IntegralRep {
            group,
            rank,
            matrices: matrices.into_iter().map(|m| m.unwrap()).collect(),
        };
        rep.validate()?;
        Ok(rep)
    }

    pub fn from_element_matrices(
        group: FiniteGroup,
        rank: usize,
        matrices: Vec<IntMatrix>,
    ) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::InvalidParameter("one matrix per element required".into()));
        }
        let rep = IntegralRep { group, rank, matrices };
        rep.validate()?;
        Ok(rep)
    }

    pub fn trivial(group: FiniteGroup, rank: usize) -> Self {
        let n = group.order();
        IntegralRep { group, rank, matrices: vec![IntMatrix::identity(rank); n] }
    }

    /// Check all homomorphism identities and unimodularity.
    pub fn validate(&self) -> Result<()> {
        if !self.matrices[0].is_identity() {
            return Err(Error::NotAHomomorphism("identity element must map to I".into()));
        }
        for w in self.group.elements() {
            let d = self.matrices[w].det().abs();
            if d != BigInt::from(1) {
                return Err(Error::NotUnimodular(format!("det ρ({w}) = ±{d}")));
            }
        }
        for u in self.group.elements() {
            for v in self.group.elements() {
                let uv = self.group.mul(u, v);
                if self.matrices[u].mul(&self.matrices[v]) != self.matrices[uv] {
                    return Err(Error::NotAHomomorphism(format!("ρ({u})ρ({v}) ≠ ρ({u}·{v})")));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self, w: usize) -> &IntMatrix {
        &self.matrices[w]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    /// Dual (contragredient) representation `w ↦ ρ(w⁻¹)ᵀ`.
    pub fn dual(&self) -> IntegralRep {
        let matrices = self
            .group
            .elements()
            .map(|w| self.matrices[self.group.inv(w)].transpose())
            .collect();
        IntegralRep { group: self.group.clone(), rank: self.rank, matrices }
    }

    /// Saturated sublattice of vectors fixed by every `ρ(w)`:
    /// the kernel of the stacked `ρ(w) - I`.
    pub fn fixed_sublattice(&self) -> Lattice {
        let mut stacked = IntMatrix::zero(0, self.rank);
        for w in self.group.elements().skip(1) {
            let diff = self.matrices[w].sub(&IntMatrix::identity(self.rank));
            stacked = stacked.vcat(&diff);
        }
        if stacked.rows == 0 {
            return Lattice::full(self.rank);
        }
        Lattice::from_generators(self.rank, &kernel(&stacked))
    }

    /// Direct sum with another representation of the same group.
    pub fn direct_sum(&self, other: &IntegralRep) -> Result<IntegralRep> {
        if self.group != other.group {
            return Err(Error::ContextMismatch("direct sum".into(), "different groups".into()));
        }
        let r = self.rank + other.rank;
        let matrices = self
            .group
            .elements()
            .map(|w| {
                IntMatrix::from_fn(r, r, |i, j| {
                    if i < self.rank && j < self.rank {
                        self.matrices[w][(i, j)].clone()
                    } else if i >= self.rank && j >= self.rank {
                        other.matrices[w][(i - self.rank, j - self.rank)].clone()
                    } else {
                        BigInt::from(0)
                    }
                })
            })
            .collect();
        Ok(IntegralRep { group: self.group.clone(), rank: r, matrices })
    }

    /// Regular representation of `W` by permutation matrices on `Z[W]`.
    pub fn regular(group: FiniteGroup) -> Result<IntegralRep> {
        let n = group.order();
        if n > caps::MAX_RANK {
            return Err(Error::CapExceeded(format!(
                "regular representation rank {} exceeds {}",
                n,
                caps::MAX_RANK
            )));
        }
        let matrices = group
            .elements()
            .map(|w| {
                IntMatrix::from_fn(n, n, |i, j| {
                    if i == group.mul(w, j) {
                        BigInt::from(1)
                    } else {
                        BigInt::from(0)
                    }
                })
            })
            .collect();
        Ok(IntegralRep { group, rank: n, matrices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::quotient_invariants;
    use crate::linalg::FiniteAbelianGroup;

    fn c2_swap() -> IntegralRep {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        IntegralRep::from_generator_matrices(
            c2,
            2,
            &[IntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]])],
        )
        .unwrap()
    }

    #[test]
    fn swap_is_valid_involution() {
        let rep = c2_swap();
        assert!(rep.validate().is_ok());
    }

    #[test]
    fn shear_is_not_an_involution() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let err = IntegralRep::from_generator_matrices(
            c2,
            2,
            &[IntMatrix::from_rows_i64(&[&[1, 1], &[0, 1]])],
        );
        assert!(matches!(err, Err(Error::NotAHomomorphism(_))));
    }

    #[test]
    fn c3_rotation_is_valid() {
        // cube the matrix and get the identity
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let r = IntMatrix::from_rows_i64(&[&[0, -1], &[1, -1]]);
        assert!(r.mul(&r).mul(&r).is_identity());
        let rep = IntegralRep::from_generator_matrices(c3, 2, &[r]).unwrap();
        assert!(rep.validate().is_ok());
    }

    #[test]
    fn fixed_sublattices() {
        let rep = c2_swap();
        let fix = rep.fixed_sublattice();
        assert_eq!(
            fix,
            Lattice::from_generator_vecs(2, &[vec![BigInt::from(1), BigInt::from(1)]])
        );

        let triv = IntegralRep::trivial(FiniteGroup::cyclic(2).unwrap(), 3);
        assert_eq!(triv.fixed_sublattice(), Lattice::full(3));

        let c2 = FiniteGroup::cyclic(2).unwrap();
        let sign =
            IntegralRep::from_generator_matrices(c2, 1, &[IntMatrix::from_rows_i64(&[&[-1]])])
                .unwrap();
        assert!(sign.fixed_sublattice().is_zero());
    }

    #[test]
    fn dual_is_involutive_and_fixed_ranks_agree() {
        let reps = [
            c2_swap(),
            IntegralRep::from_generator_matrices(
                FiniteGroup::cyclic(3).unwrap(),
                2,
                &[IntMatrix::from_rows_i64(&[&[0, -1], &[1, -1]])],
            )
            .unwrap(),
        ];
        for rep in reps {
            assert_eq!(rep.dual().dual(), rep);
            assert_eq!(
                rep.fixed_sublattice().rank(),
                rep.dual().fixed_sublattice().rank(),
                "fixed rank matches dual fixed rank"
            );
        }
    }

    #[test]
    fn permutation_closure_builds_s3() {
        let s3 = FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.order(), 6);
        let a = 1;
        let b = 2;
        assert_ne!(s3.mul(a, b), s3.mul(b, a), "S3 is non-abelian");
    }

    #[test]
    fn regular_rep_fixed_line() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let reg = IntegralRep::regular(c3).unwrap();
        reg.validate().unwrap();
        let fix = reg.fixed_sublattice();
        assert_eq!(fix.rank(), 1);
        let q = quotient_invariants(&fix, &fix.saturate()).unwrap();
        assert_eq!(q, FiniteAbelianGroup::trivial());
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroup::from_mult_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        let n = 13;
        let mult: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        assert!(matches!(FiniteGroup::from_mult_table(mult), Err(Error::CapExceeded(_))));
    }
}
