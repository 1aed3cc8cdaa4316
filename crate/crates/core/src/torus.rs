//! Closed subgroups of the torus `T = (Λ₀ ⊗ R)/Λ₀` with its component-group
//! action, encoded by annihilator sublattices of the character lattice.
//!
//! The annihilator `Ξ ⊆ Λ₀*` is the single source of truth: `S ↦ Ξ` is an
//! inclusion-reversing bijection between closed subgroups and sublattices,
//! so subgroup arithmetic is lattice arithmetic. `dim S = r − rank Ξ`,
//! `π₀(S)` is the torsion of `Λ₀*/Ξ`, and `S` is connected exactly when
//! `Ξ` is saturated.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::caps;
use crate::cohomology::LatticeModule;
use crate::error::{Error, Result};
use crate::group::IntegralRep;
use crate::isotypic;
use crate::linalg::{
    ambient_quotient, quotient_invariants, solve_exact, FiniteAbelianGroup, IntMatrix, Lattice,
};

/// Shared context: the representation of the component group on the toral
/// lattice, with its dual.
#[derive(Debug)]
pub struct TorusContext {
    pub name: String,
    pub rep: IntegralRep,
    pub dual: IntegralRep,
}

impl TorusContext {
    pub fn new(name: impl Into<String>, rep: IntegralRep) -> Arc<Self> {
        let dual = rep.dual();
        Arc::new(TorusContext { name: name.into(), rep, dual })
    }

    pub fn rank(&self) -> usize {
        self.rep.rank()
    }
}

impl PartialEq for TorusContext {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.rep == other.rep
    }
}
impl Eq for TorusContext {}

/// A closed subgroup of `T`, encoded by its annihilator.
#[derive(Clone, Debug)]
pub struct TorusSubgroup {
    ctx: Arc<TorusContext>,
    ann: Lattice,
}

impl PartialEq for TorusSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.ann == other.ann
    }
}
impl Eq for TorusSubgroup {}

impl TorusSubgroup {
    pub fn from_annihilator(ctx: Arc<TorusContext>, ann: Lattice) -> Result<Self> {
        if ann.ambient() != ctx.rank() {
            return Err(Error::DimensionMismatch(format!(
                "annihilator ambient {} vs context rank {}",
                ann.ambient(),
                ctx.rank()
            )));
        }
        Ok(TorusSubgroup { ctx, ann })
    }

    pub fn full_torus(ctx: Arc<TorusContext>) -> Self {
        let r = ctx.rank();
        TorusSubgroup { ctx, ann: Lattice::zero(r) }
    }

    pub fn trivial(ctx: Arc<TorusContext>) -> Self {
        let r = ctx.rank();
        TorusSubgroup { ctx, ann: Lattice::full(r) }
    }

    /// `T[n]`, the n-torsion subgroup; annihilator `n·Λ₀*`.
    pub fn torsion(ctx: Arc<TorusContext>, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("torsion subgroup requires n ≥ 1".into()));
        }
        let r = ctx.rank();
        let ann = Lattice::scaled_full(r, &BigInt::from(n));
        Ok(TorusSubgroup { ctx, ann })
    }

    /// The central torus `T₁`: identity component of the fixed points,
    /// with annihilator the saturation of `Σ_w (ρ*(w) − I) Λ₀*`.
    pub fn central_torus(ctx: Arc<TorusContext>) -> Self {
        let r = ctx.rank();
        let mut gens = IntMatrix::zero(r, 0);
        for w in ctx.rep.group().elements() {
            let diff = ctx.dual.matrix(w).sub(&IntMatrix::identity(r));
            gens = gens.hcat(&diff);
        }
        let ann = Lattice::from_generators(r, &gens).saturate();
        TorusSubgroup { ctx, ann }
    }

    /// The moving torus `T_f`: annihilator is the fixed sublattice of the
    /// dual representation (itself saturated).
    pub fn moving_torus(ctx: Arc<TorusContext>) -> Self {
        let ann = ctx.dual.fixed_sublattice();
        TorusSubgroup { ctx, ann }
    }

    pub fn context(&self) -> &Arc<TorusContext> {
        &self.ctx
    }

    pub fn annihilator(&self) -> &Lattice {
        &self.ann
    }

    pub fn ambient_rank(&self) -> usize {
        self.ctx.rank()
    }

    pub fn dim(&self) -> usize {
        self.ctx.rank() - self.ann.rank()
    }

    pub fn is_full_torus(&self) -> bool {
        self.ann.is_zero()
    }

    pub fn is_trivial_subgroup(&self) -> bool {
        self.ann.rank() == self.ctx.rank() && self.ann.is_full()
    }

    /// Component group `π₀(S)`, the torsion of `Λ₀*/Ξ`.
    pub fn pi0(&self) -> FiniteAbelianGroup {
        ambient_quotient(&self.ann).torsion()
    }

    /// Order when finite (dim 0), else `None`.
    pub fn order(&self) -> Option<BigInt> {
        if self.dim() > 0 {
            None
        } else {
            Some(self.pi0().torsion_order())
        }
    }

    pub fn is_connected(&self) -> bool {
        self.ann.is_saturated()
    }

    fn check_ctx(&self, other: &TorusSubgroup) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(
                self.ctx.name.clone(),
                other.ctx.name.clone(),
            ));
        }
        Ok(())
    }

    /// Subgroup sum: annihilators intersect.
    pub fn sum(&self, other: &TorusSubgroup) -> Result<TorusSubgroup> {
        self.check_ctx(other)?;
        Ok(TorusSubgroup { ctx: self.ctx.clone(), ann: self.ann.intersect(&other.ann)? })
    }

    /// Subgroup intersection: annihilators add.
    pub fn intersect(&self, other: &TorusSubgroup) -> Result<TorusSubgroup> {
        self.check_ctx(other)?;
        Ok(TorusSubgroup { ctx: self.ctx.clone(), ann: self.ann.sum(&other.ann)? })
    }

    /// `self ⊇ other` iff `Ξ_self ⊆ Ξ_other`.
    pub fn contains(&self, other: &TorusSubgroup) -> Result<bool> {
        self.check_ctx(other)?;
        other.ann.contains(&self.ann)
    }

    /// Invariance under the component-group action (dual action on `Ξ`).
    pub fn is_invariant(&self) -> bool {
        self.ctx.rep.group().generators().iter().all(|&g| {
            let image = self.ann.image(self.ctx.dual.matrix(g)).expect("shape");
            image == self.ann
        })
    }

    /// Identity component: saturate the annihilator.
    pub fn identity_component(&self) -> TorusSubgroup {
        TorusSubgroup { ctx: self.ctx.clone(), ann: self.ann.saturate() }
    }

    /// `S⁺ = {t : (ρ(w) − 1)t ∈ S for all w}`; annihilator is
    /// `Σ_w (ρ(w) − I)ᵀ Ξ`. Requires an invariant subgroup; the result is
    /// invariant and contains `S`.
    pub fn plus_operator(&self) -> Result<TorusSubgroup> {
        if !self.is_invariant() {
            return Err(Error::NonInvariant);
        }
        let r = self.ctx.rank();
        let mut gens = IntMatrix::zero(r, 0);
        for w in self.ctx.rep.group().elements() {
            let phi_t = self.ctx.rep.matrix(w).sub(&IntMatrix::identity(r)).transpose();
            gens = gens.hcat(&phi_t.mul(self.ann.basis()));
        }
        let ann = Lattice::from_generators(r, &gens);
        Ok(TorusSubgroup { ctx: self.ctx.clone(), ann })
    }

    /// The lattice `H₁(T/S) = Hom(Ξ, Z)` with its induced action, plus the
    /// restriction map `Λ₀ → Hom(Ξ, Z)` (the `H₁` of `T → T/S`).
    pub fn quotient_lattice(&self) -> Result<(LatticeModule, IntMatrix)> {
        if !self.is_invariant() {
            return Err(Error::NonInvariant);
        }
        let b = self.ann.basis();
        let k = self.ann.rank();
        let group = self.ctx.rep.group().clone();
        let mut action = Vec::with_capacity(group.order());
        for w in group.elements() {
            // ρ*(w⁻¹) B = B A_w; the Hom-action matrix is A_wᵀ
            let rho_t = self.ctx.rep.matrix(w).transpose();
            let a = solve_exact(b, &rho_t.mul(b)).ok_or(Error::NonInvariant)?;
            action.push(a.transpose());
        }
        let module = LatticeModule::new(group, k, action)?;
        let restriction = b.transpose();
        Ok((module, restriction))
    }

    /// Canonical ordering key: corank first (the full torus sorts first),
    /// then the annihilator basis bytes.
    pub fn sort_key(&self) -> (usize, String) {
        (self.ann.rank(), format!("{:?}", self.ann.basis()))
    }
}

/// Constraints for enumerating invariant subgroups. Bounds must make the
/// request finite or it is rejected.
#[derive(Clone, Debug, Default)]
pub struct EnumConstraints {
    /// required containments: every listed subgroup must be inside `S`
    pub contains: Vec<TorusSubgroup>,
    /// cap on the exponent of `π₀(S)`
    pub exponent_cap: Option<u64>,
    /// allowed coranks (rank of `Ξ`); `None` = all `0..=r`
    pub coranks: Option<Vec<usize>>,
}

/// Complete, duplicate-free, canonically ordered list of invariant closed
/// subgroups meeting the constraints.
pub fn enumerate_invariant_subgroups(
    ctx: &Arc<TorusContext>,
    constraints: &EnumConstraints,
) -> Result<Vec<TorusSubgroup>> {
    let r = ctx.rank();
    // Ξ must lie inside the largest invariant sublattice of ∩ Ann(required)
    let mut xi_max = Lattice::full(r);
    for s in &constraints.contains {
        if s.context() != ctx {
            return Err(Error::ContextMismatch(ctx.name.clone(), s.context().name.clone()));
        }
        xi_max = xi_max.intersect(s.annihilator())?;
    }
    // invariant core: ∩_w ρ*(w) Ξ_max
    let mut core = xi_max.clone();
    for w in ctx.rep.group().elements() {
        let image = xi_max.image(ctx.dual.matrix(w))?;
        core = core.intersect(&image)?;
    }
    let core_rank = core.rank();
    let allowed_ranks: Vec<usize> = match &constraints.coranks {
        Some(list) => list.clone(),
        None => (0..=core_rank).collect(),
    };

    // restricted dual action on the saturated core, for the span census
    let sat_core = core.saturate();
    let restricted = if sat_core.rank() == 0 {
        None
    } else {
        let b = sat_core.basis();
        let mats: Vec<IntMatrix> = ctx
            .rep
            .group()
            .elements()
            .map(|w| solve_exact(b, &ctx.dual.matrix(w).mul(b)).expect("core is invariant"))
            .collect();
        Some(IntegralRep::from_element_matrices(
            ctx.rep.group().clone(),
            sat_core.rank(),
            mats,
        )?)
    };

    // span census: all invariant rational subspaces, as saturated lattices
    // in ambient coordinates, grouped by rank
    let mut spans: Vec<Lattice> = vec![Lattice::zero(r)];
    if let Some(rep) = &restricted {
        let decomp = isotypic::decompose(rep)?;
        let multiplicity_free = decomp.pieces.iter().all(|p| p.multiplicity <= 1);
        if multiplicity_free {
            // subsets of the pieces
            let piece_lats: Vec<Lattice> = decomp
                .pieces
                .iter()
                .map(|p| {
                    sat_core
                        .basis()
                        .mul(p.integral.basis())
                        .pipe_to_lattice(r)
                })
                .collect();
            let mut subsets: Vec<Lattice> = vec![Lattice::zero(r)];
            for pl in &piece_lats {
                let mut next = subsets.clone();
                for s in &subsets {
                    next.push(s.sum(pl).expect("ambient match").saturate());
                }
                subsets = next;
            }
            subsets.retain(|l| l.rank() > 0);
            spans.extend(subsets);
        } else {
            // only the zero and full spans are certainly a finite census
            spans.push(sat_core.clone());
            let bad: Vec<usize> = allowed_ranks
                .iter()
                .copied()
                .filter(|&k| k != 0 && k != sat_core.rank())
                .collect();
            if !bad.is_empty() {
                return Err(Error::Unbounded(format!(
                    "isotypic multiplicity exceeds 1: infinitely many invariant spans of rank {:?}",
                    bad
                )));
            }
        }
    }
    spans.sort_by_key(|l| (l.rank(), format!("{:?}", l.basis())));
    spans.dedup();

    let mut out: Vec<TorusSubgroup> = Vec::new();
    for span in &spans {
        let k = span.rank();
        if !allowed_ranks.contains(&k) {
            continue;
        }
        if k == 0 {
            out.push(TorusSubgroup { ctx: ctx.clone(), ann: Lattice::zero(r) });
            continue;
        }
        let exponent = match constraints.exponent_cap {
            Some(e) if e >= 1 => e,
            _ => {
                return Err(Error::Unbounded(
                    "positive-corank enumeration requires an exponent cap".into(),
                ))
            }
        };
        // any Ξ with π₀-exponent E ≤ e contains E·sat(Ξ), hence contains
        // lcm(1..e)·span; that multiple is the sandwich floor
        let mut floor_scale = BigInt::one();
        for m in 2..=exponent {
            floor_scale = num_integer::lcm(floor_scale, BigInt::from(m));
        }
        let c_v = core.intersect(span)?;
        if c_v.rank() != k {
            continue;
        }
        let floor = span.scale(&floor_scale);
        if !c_v.contains(&floor)? {
            continue;
        }
        // coordinates of the floor inside C_V
        let floor_coords = solve_exact(c_v.basis(), floor.basis()).expect("floor inside");
        let floor_lat = Lattice::from_generators(k, &floor_coords);
        let index = ambient_quotient(&floor_lat).torsion_order();
        let index: u64 = index
            .to_string()
            .parse()
            .map_err(|_| Error::CapExceeded("sandwich index".into()))?;
        if index > caps::MAX_INDEX {
            return Err(Error::CapExceeded(format!(
                "sandwich of index {index} exceeds {}",
                caps::MAX_INDEX
            )));
        }
        // enumerate sublattices of Z^k containing floor_lat
        for mid in sublattices_containing(&floor_lat)? {
            let xi = Lattice::from_generators(r, &c_v.basis().mul(mid.basis()));
            let s = TorusSubgroup { ctx: ctx.clone(), ann: xi };
            if !s.is_invariant() {
                continue;
            }
            // exponent constraint on π₀(S)
            if s.pi0().exponent() > BigInt::from(exponent) {
                continue;
            }
            out.push(s);
        }
    }
    // required containments once more (sandwich guarantees Ξ ⊆ Ξ_max already)
    let mut filtered = Vec::new();
    'next: for s in out {
        for req in &constraints.contains {
            if !s.contains(req)? {
                continue 'next;
            }
        }
        filtered.push(s);
    }
    filtered.sort_by_key(|s| s.sort_key());
    filtered.dedup();
    Ok(filtered)
}

/// All sublattices of `Z^k` containing the given full-rank sublattice.
fn sublattices_containing(floor: &Lattice) -> Result<Vec<Lattice>> {
    let k = floor.ambient();
    if floor.rank() != k {
        return Err(Error::InvalidParameter("floor must be full rank".into()));
    }
    let quotient = ambient_quotient(floor);
    let order: u64 = quotient
        .torsion_order()
        .to_string()
        .parse()
        .map_err(|_| Error::CapExceeded("quotient order".into()))?;
    // enumerate HNF bases of index dividing the quotient order, keep those
    // containing the floor
    let mut out = Vec::new();
    for n in 1..=order {
        if order % n != 0 {
            continue;
        }
        for cand in hnf_lattices_of_index(k, n) {
            if cand.contains(floor)? {
                out.push(cand);
            }
        }
    }
    Ok(out)
}

/// All full-rank sublattices of `Z^k` of the given index, by upper
/// triangular Hermite bases.
pub fn hnf_lattices_of_index(k: usize, index: u64) -> Vec<Lattice> {
    let mut out = Vec::new();
    let mut diag = vec![1u64; k];
    gen_diagonals(k, index, 0, &mut diag, &mut out);
    out
}

fn gen_diagonals(k: usize, remaining: u64, pos: usize, diag: &mut Vec<u64>, out: &mut Vec<Lattice>) {
    if pos == k {
        if remaining == 1 {
            fill_offdiag(k, diag, out);
        }
        return;
    }
    let mut d = 1;
    while d <= remaining {
        if remaining % d == 0 {
            diag[pos] = d;
            gen_diagonals(k, remaining / d, pos + 1, diag, out);
        }
        d += 1;
    }
}

fn fill_offdiag(k: usize, diag: &[u64], out: &mut Vec<Lattice>) {
    // column-style lower data: basis columns b_j with b_jj = d_j and
    // entries b_ij for i < j ranging over 0..d_i
    let positions: Vec<(usize, usize)> = (0..k)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let mut values = vec![0u64; positions.len()];
    loop {
        let mut m = IntMatrix::zero(k, k);
        for j in 0..k {
            m[(j, j)] = BigInt::from(diag[j]);
        }
        for (idx, &(i, j)) in positions.iter().enumerate() {
            m[(i, j)] = BigInt::from(values[idx]);
        }
        out.push(Lattice::from_generators(k, &m));
        // increment mixed-radix counter with radix d_i at position (i, j)
        let mut carry = true;
        for (idx, &(i, _)) in positions.iter().enumerate() {
            if !carry {
                break;
            }
            values[idx] += 1;
            if values[idx] >= diag[i] {
                values[idx] = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            break;
        }
    }
}

trait PipeToLattice {
    fn pipe_to_lattice(self, ambient: usize) -> Lattice;
}
impl PipeToLattice for IntMatrix {
    fn pipe_to_lattice(self, ambient: usize) -> Lattice {
        Lattice::from_generators(ambient, &self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn swap_ctx() -> Arc<TorusContext> {
        let rep = IntegralRep::from_generator_matrices(
            FiniteGroup::cyclic(2).unwrap(),
            2,
            &[IntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]])],
        )
        .unwrap();
        TorusContext::new("swap", rep)
    }

    fn sign_ctx() -> Arc<TorusContext> {
        let rep = IntegralRep::from_generator_matrices(
            FiniteGroup::cyclic(2).unwrap(),
            1,
            &[IntMatrix::from_rows_i64(&[&[-1]])],
        )
        .unwrap();
        TorusContext::new("sign", rep)
    }

    fn trivial_ctx(r: usize) -> Arc<TorusContext> {
        TorusContext::new("trivial", IntegralRep::trivial(FiniteGroup::trivial(), r))
    }

    fn lat2(gens: &[[i64; 2]]) -> Lattice {
        Lattice::from_generator_vecs(
            2,
            &gens
                .iter()
                .map(|v| vec![BigInt::from(v[0]), BigInt::from(v[1])])
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn torsion_subgroup_shape() {
        let ctx = swap_ctx();
        let t2 = TorusSubgroup::torsion(ctx, 2).unwrap();
        assert_eq!(t2.dim(), 0);
        assert_eq!(t2.pi0(), FiniteAbelianGroup::from_factors_i64(&[2, 2], 0));
        assert!(TorusSubgroup::torsion(swap_ctx(), 0).is_err());
    }

    #[test]
    fn central_torus_of_swap_is_diagonal() {
        let ctx = swap_ctx();
        let t1 = TorusSubgroup::central_torus(ctx);
        assert_eq!(*t1.annihilator(), lat2(&[[1, -1]]));
        assert_eq!(t1.dim(), 1);
        assert!(t1.is_connected());
    }

    #[test]
    fn central_torus_of_trivial_action_is_everything() {
        let ctx = trivial_ctx(2);
        let t1 = TorusSubgroup::central_torus(ctx);
        assert!(t1.is_full_torus());
    }

    #[test]
    fn moving_torus_of_swap_is_antidiagonal() {
        let ctx = swap_ctx();
        let tf = TorusSubgroup::moving_torus(ctx);
        assert_eq!(*tf.annihilator(), lat2(&[[1, 1]]));
    }

    #[test]
    fn intersect_diagonal_with_two_torsion() {
        // points of order 2 on the diagonal circle
        let ctx = swap_ctx();
        let t1 = TorusSubgroup::central_torus(ctx.clone());
        let t2 = TorusSubgroup::torsion(ctx, 2).unwrap();
        let meet = t1.intersect(&t2).unwrap();
        assert_eq!(*meet.annihilator(), lat2(&[[1, -1], [2, 0]]));
        assert_eq!(meet.pi0(), FiniteAbelianGroup::from_factors_i64(&[2], 0));
        assert_eq!(meet.dim(), 0);
    }

    #[test]
    fn sum_with_trivial_is_identity() {
        let ctx = swap_ctx();
        let t1 = TorusSubgroup::central_torus(ctx.clone());
        let triv = TorusSubgroup::trivial(ctx);
        assert_eq!(t1.sum(&triv).unwrap(), t1);
    }

    #[test]
    fn invariance_checks() {
        let ctx = swap_ctx();
        // checkerboard: invariant
        let s = TorusSubgroup::from_annihilator(ctx.clone(), lat2(&[[1, 1], [1, -1]])).unwrap();
        assert!(s.is_invariant());
        // 2Z x Z: not invariant under the swap
        let s2 = TorusSubgroup::from_annihilator(ctx, lat2(&[[2, 0], [0, 1]])).unwrap();
        assert!(!s2.is_invariant());
    }

    #[test]
    fn plus_operator_examples() {
        // sign action in rank 1: T[n]⁺ = T[2n]
        let ctx = sign_ctx();
        for n in 1..=5u64 {
            let s = TorusSubgroup::torsion(ctx.clone(), n).unwrap();
            let plus = s.plus_operator().unwrap();
            assert_eq!(plus, TorusSubgroup::torsion(ctx.clone(), 2 * n).unwrap());
            assert!(plus.contains(&s).unwrap());
            assert!(plus.is_invariant());
        }
        // trivial action: everything has S⁺ = T
        let tctx = trivial_ctx(2);
        let s = TorusSubgroup::torsion(tctx.clone(), 3).unwrap();
        assert!(s.plus_operator().unwrap().is_full_torus());
        // swap, trivial subgroup: S⁺ is the diagonal circle
        let ctx = swap_ctx();
        let s = TorusSubgroup::trivial(ctx.clone());
        assert_eq!(s.plus_operator().unwrap(), TorusSubgroup::central_torus(ctx));
    }

    #[test]
    fn plus_operator_laws() {
        let ctx = swap_ctx();
        let full = TorusSubgroup::full_torus(ctx.clone());
        assert_eq!(full.plus_operator().unwrap(), full);
        let candidates = vec![
            TorusSubgroup::trivial(ctx.clone()),
            TorusSubgroup::torsion(ctx.clone(), 2).unwrap(),
            TorusSubgroup::central_torus(ctx.clone()),
            TorusSubgroup::moving_torus(ctx.clone()),
        ];
        for s in candidates {
            let plus = s.plus_operator().unwrap();
            assert!(plus.contains(&s).unwrap(), "S ⊆ S⁺");
            assert!(plus.is_invariant());
        }
        let non_inv = TorusSubgroup::from_annihilator(ctx, lat2(&[[2, 0], [0, 1]])).unwrap();
        assert!(matches!(non_inv.plus_operator(), Err(Error::NonInvariant)));
    }

    #[test]
    fn quotient_lattice_of_torsion_is_scaled_identity() {
        let ctx = swap_ctx();
        for n in [1u64, 2, 3] {
            let s = TorusSubgroup::torsion(ctx.clone(), n).unwrap();
            let (module, res) = s.quotient_lattice().unwrap();
            assert_eq!(module.rank(), 2);
            // action matches the original representation
            for w in 0..2 {
                assert_eq!(module.action(w), ctx.rep.matrix(w));
            }
            // restriction is multiplication by n
            assert_eq!(res, IntMatrix::identity(2).scale(&BigInt::from(n)));
        }
    }

    #[test]
    fn quotient_lattice_of_full_torus_is_zero() {
        let ctx = swap_ctx();
        let s = TorusSubgroup::full_torus(ctx);
        let (module, res) = s.quotient_lattice().unwrap();
        assert_eq!(module.rank(), 0);
        assert_eq!(res.rows, 0);
    }

    #[test]
    fn quotient_lattice_of_diagonal_is_sign_line() {
        let ctx = swap_ctx();
        let t1 = TorusSubgroup::central_torus(ctx);
        let (module, _) = t1.quotient_lattice().unwrap();
        assert_eq!(module.rank(), 1);
        assert_eq!(module.action(1), &IntMatrix::from_rows_i64(&[&[-1]]));
    }

    #[test]
    fn connectedness_matches_saturation() {
        let ctx = swap_ctx();
        let conn = TorusSubgroup::central_torus(ctx.clone());
        assert!(conn.is_connected());
        let disc = TorusSubgroup::from_annihilator(ctx, lat2(&[[2, -2]])).unwrap();
        assert!(!disc.is_connected());
        assert_eq!(disc.identity_component().annihilator(), &lat2(&[[1, -1]]));
    }

    #[test]
    fn enumerate_above_central_torus() {
        // invariant S ⊇ diagonal circle with π₀ exponent ≤ 2:
        // annihilators inside ⟨(1,−1)⟩ are k·(1,−1); exponent ≤ 2 leaves
        // k ∈ {1, 2}, plus the full torus. Brute-force count: 3.
        let ctx = swap_ctx();
        let t1 = TorusSubgroup::central_torus(ctx.clone());
        let list = enumerate_invariant_subgroups(
            &ctx,
            &EnumConstraints {
                contains: vec![t1.clone()],
                exponent_cap: Some(2),
                coranks: None,
            },
        )
        .unwrap();
        assert_eq!(list.len(), 3);
        for s in &list {
            assert!(s.is_invariant());
            assert!(s.contains(&t1).unwrap());
        }
        assert!(list[0].is_full_torus());
    }

    #[test]
    fn enumerate_finite_subgroups_of_circle_under_inversion() {
        // all subgroups of a circle are invariant under inversion
        let ctx = sign_ctx();
        let list = enumerate_invariant_subgroups(
            &ctx,
            &EnumConstraints {
                contains: vec![],
                exponent_cap: Some(3),
                coranks: Some(vec![1]),
            },
        )
        .unwrap();
        let orders: Vec<BigInt> = list.iter().map(|s| s.order().unwrap()).collect();
        assert_eq!(orders, vec![BigInt::one(), BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn enumerate_full_torus_constraint() {
        let ctx = swap_ctx();
        let full = TorusSubgroup::full_torus(ctx.clone());
        let list = enumerate_invariant_subgroups(
            &ctx,
            &EnumConstraints {
                contains: vec![full.clone()],
                exponent_cap: Some(10),
                coranks: None,
            },
        )
        .unwrap();
        assert_eq!(list, vec![full]);
    }

    #[test]
    fn enumerate_rejects_unbounded() {
        // trivial group in rank 2: every subspace is invariant, so ranks
        // between 0 and r are rejected
        let ctx = trivial_ctx(2);
        let err = enumerate_invariant_subgroups(
            &ctx,
            &EnumConstraints {
                contains: vec![],
                exponent_cap: Some(2),
                coranks: Some(vec![1]),
            },
        );
        assert!(matches!(err, Err(Error::Unbounded(_))));
        // missing exponent cap is also unbounded
        let err2 = enumerate_invariant_subgroups(
            &swap_ctx(),
            &EnumConstraints { contains: vec![], exponent_cap: None, coranks: Some(vec![2]) },
        );
        assert!(matches!(err2, Err(Error::Unbounded(_))));
    }

    #[test]
    fn enumerate_swap_full_rank() {
        // invariant full-rank annihilators with π₀ exponent ≤ 2:
        // brute force over HNF sublattices of index ≤ 4 containing 2Z²
        let ctx = swap_ctx();
        let list = enumerate_invariant_subgroups(
            &ctx,
            &EnumConstraints {
                contains: vec![],
                exponent_cap: Some(2),
                coranks: Some(vec![2]),
            },
        )
        .unwrap();
        // oracle: Ξ ⊇ 2Z², swap-invariant: Z², 2Z², checkerboard,
        // Λ₁-types ⟨(1,1),(2,0)⟩? (1,1),(1,-1) checkerboard;
        // ⟨(1,1),(0,2)⟩ = checkerboard; enumerate by brute force:
        let mut count = 0;
        for cand in hnf_lattices_of_index(2, 1)
            .into_iter()
            .chain(hnf_lattices_of_index(2, 2))
            .chain(hnf_lattices_of_index(2, 4))
        {
            let s = TorusSubgroup::from_annihilator(ctx.clone(), cand.clone()).unwrap();
            if s.is_invariant()
                && cand.contains(&Lattice::scaled_full(2, &BigInt::from(2))).unwrap()
                && s.pi0().exponent() <= BigInt::from(2)
            {
                count += 1;
            }
        }
        assert_eq!(list.len(), count);
        for s in &list {
            assert!(s.is_invariant());
        }
    }

    #[test]
    fn duality_laws() {
        let ctx = swap_ctx();
        let a = TorusSubgroup::central_torus(ctx.clone());
        let b = TorusSubgroup::torsion(ctx.clone(), 2).unwrap();
        // S1 ⊆ S2 iff Ξ2 ⊆ Ξ1
        let meet = a.intersect(&b).unwrap();
        assert!(a.contains(&meet).unwrap());
        assert!(b.contains(&meet).unwrap());
        let join = a.sum(&b).unwrap();
        assert!(join.contains(&a).unwrap());
        assert!(join.contains(&b).unwrap());
        // pi0(T[n]) = (n, n)
        for n in 2..=4u64 {
            let t = TorusSubgroup::torsion(ctx.clone(), n).unwrap();
            assert_eq!(
                t.pi0(),
                FiniteAbelianGroup {
                    invariant_factors: vec![BigInt::from(n), BigInt::from(n)],
                    free_rank: 0
                }
            );
        }
    }
}
