//! Subgroup classification for a toral group presentation, the block maps
//! τ/ω/λ with their fibres, standard neighbourhoods, cotorality, and the
//! catalog machinery (convergence, partition, Cantor-Bendixson rank).
//!
//! A toral group is given here by `(W, ρ, ε)`: the component group, its
//! integral representation on the lattice of the identity torus, and the
//! extension class `ε ∈ H³(W; Λ₀)` classifying `1 → T → H → W → 1`.
//! Conjugacy classes of full subgroups are pairs `(S, x)`: an invariant
//! subgroup of the torus that supports `ε`, and a class in the lift fibre
//! `H¹(W; T/S) ≅ H²(W; Λ_{S})`.

pub mod catalog;
pub mod builtin;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cohomology::{CohomCache, CohomClass, CohomGroup, InducedMap, LatticeModule};
use crate::error::{Error, Result};
use crate::group::IntegralRep;
use crate::isotypic::{self, BlockShape, IsotypicDecomposition};
use crate::linalg::{snf, solve_exact, IntMatrix, Lattice};
use crate::torus::{
    enumerate_invariant_subgroups, EnumConstraints, TorusContext, TorusSubgroup,
};

/// Selector for the extension class when building a spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsilonChoice {
    Zero,
    /// index into the generators of `H³(W; Λ₀)`
    Generator(usize),
    /// explicit normalized 3-cocycle, as a cochain coordinate vector
    Cocycle(Vec<BigInt>),
}

/// A toral group presentation with everything precomputed that the
/// classification needs: dual action, isotypic decomposition, `H³` and the
/// chosen extension class.
pub struct ToralGroupSpec {
    pub name: String,
    ctx: Arc<TorusContext>,
    module: LatticeModule,
    epsilon: CohomClass,
    h3: Arc<CohomGroup>,
    decomposition: IsotypicDecomposition,
    cache: CohomCache,
}

impl std::fmt::Debug for ToralGroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ToralGroupSpec")
            .field("name", &self.name)
            .field("rank", &self.rank())
            .field("group_order", &self.group_order())
            .field("epsilon", &self.epsilon.coords)
            .finish()
    }
}

impl ToralGroupSpec {
    pub fn new(name: impl Into<String>, rep: IntegralRep, eps: EpsilonChoice) -> Result<Arc<Self>> {
        let name = name.into();
        rep.validate()?;
        let module = LatticeModule::from_rep(&rep);
        let cache = CohomCache::new();
        let h3 = cache.get(&module, 3)?;
        let epsilon = match eps {
            EpsilonChoice::Zero => h3.zero_class(),
            EpsilonChoice::Generator(i) => {
                if i >= h3.group.invariant_factors.len() {
                    return Err(Error::InvalidParameter(format!(
                        "H^3 has {} generators, index {i} out of range",
                        h3.group.invariant_factors.len()
                    )));
                }
                let mut coords = vec![BigInt::zero(); h3.group.invariant_factors.len()];
                coords[i] = BigInt::from(1);
                h3.class_from_coords(&coords)?
            }
            EpsilonChoice::Cocycle(values) => h3.class_from_cocycle(values)?,
        };
        let decomposition = isotypic::decompose(&rep)?;
        let ctx = TorusContext::new(name.clone(), rep);
        Ok(Arc::new(ToralGroupSpec { name, ctx, module, epsilon, h3, decomposition, cache }))
    }

    pub fn rank(&self) -> usize {
        self.ctx.rank()
    }

    pub fn group_order(&self) -> usize {
        self.ctx.rep.group().order()
    }

    pub fn rep(&self) -> &IntegralRep {
        &self.ctx.rep
    }

    pub fn torus_ctx(&self) -> &Arc<TorusContext> {
        &self.ctx
    }

    pub fn epsilon(&self) -> &CohomClass {
        &self.epsilon
    }

    pub fn epsilon_is_zero(&self) -> bool {
        self.epsilon.is_zero()
    }

    pub fn h3(&self) -> &Arc<CohomGroup> {
        &self.h3
    }

    pub fn decomposition(&self) -> &IsotypicDecomposition {
        &self.decomposition
    }

    pub fn predicted_shape(&self) -> BlockShape {
        isotypic::predicted_block_shape(&self.decomposition)
    }

    pub fn full_torus(&self) -> TorusSubgroup {
        TorusSubgroup::full_torus(self.ctx.clone())
    }

    pub fn trivial_subgroup(&self) -> TorusSubgroup {
        TorusSubgroup::trivial(self.ctx.clone())
    }

    pub fn torsion_subgroup(&self, n: u64) -> Result<TorusSubgroup> {
        TorusSubgroup::torsion(self.ctx.clone(), n)
    }

    pub fn central_torus(&self) -> TorusSubgroup {
        TorusSubgroup::central_torus(self.ctx.clone())
    }

    pub fn moving_torus(&self) -> TorusSubgroup {
        TorusSubgroup::moving_torus(self.ctx.clone())
    }

    /// Exponent of `H³(W; Λ₀)` (1 when the group vanishes). Every invariant
    /// subgroup containing `T[n]` for this exponent `n` supports any class.
    pub fn exponent_h2t(&self) -> u64 {
        self.h3
            .group
            .exponent()
            .to_string()
            .parse()
            .expect("exponent fits in u64 at desk scale")
    }

    /// Exponent of the cover kernel `L_f` (1 when trivial).
    pub fn exponent_lf(&self) -> u64 {
        self.decomposition
            .kernel_lf
            .exponent()
            .to_string()
            .parse()
            .expect("kernel exponent fits in u64")
    }

    /// Default neighbourhood threshold, derived from the `H³` exponent and
    /// the cover-kernel exponent.
    pub fn default_threshold(&self) -> u64 {
        self.exponent_h2t().max(self.exponent_lf()).max(1)
    }

    /// `H^k(W; T/S)` computed through the dimension shift
    /// `H^k(W; T/S) = H^{k+1}(W; Λ_{S})` on the quotient lattice.
    pub fn torus_cohomology(&self, s: &TorusSubgroup, k: usize) -> Result<Arc<CohomGroup>> {
        if !(1..=2).contains(&k) {
            return Err(Error::DegreeOutOfRange(k));
        }
        let (module, _) = s.quotient_lattice()?;
        self.cache.get(&module, k + 1)
    }

    /// True iff `ε` maps to zero in `H³(W; Λ_{S})`, equivalently dies in
    /// `H²(W; T/S)`, equivalently some full subgroup sits over `S`.
    pub fn supports_epsilon(&self, s: &TorusSubgroup) -> Result<bool> {
        if !s.is_invariant() {
            return Err(Error::NonInvariant);
        }
        if self.epsilon.is_zero() {
            return Ok(true);
        }
        let (module, restriction) = s.quotient_lattice()?;
        let target = self.cache.get(&module, 3)?;
        let map = InducedMap::new(&self.module, &module, restriction, 3)?;
        let image = map.apply(&self.epsilon, &target)?;
        Ok(image.is_zero())
    }

    /// The fibre of the classification over `S`: `H¹(W; T/S) ≅ H²(W; Λ_S)`.
    pub fn lift_fibre(&self, s: &TorusSubgroup) -> Result<Arc<CohomGroup>> {
        if !self.supports_epsilon(s)? {
            return Err(Error::Unsupported);
        }
        self.torus_cohomology(s, 1)
    }

    /// One conjugacy class per element of the lift fibre over every
    /// enumerated invariant subgroup supporting `ε`, canonically ordered.
    pub fn classify(&self, bounds: &EnumConstraints) -> Result<Vec<SubgroupClass>> {
        let subgroups = enumerate_invariant_subgroups(&self.ctx, bounds)?;
        let mut out = Vec::new();
        for s in subgroups {
            if !self.supports_epsilon(&s)? {
                continue;
            }
            let fibre = self.lift_fibre(&s)?;
            for x in fibre.elements()? {
                out.push(SubgroupClass { subgroup: s.clone(), lift: x });
            }
        }
        out.sort_by_key(SubgroupClass::sort_key);
        Ok(out)
    }

    /// τ: intersection with the central torus.
    pub fn tau(&self, class: &SubgroupClass) -> TorusSubgroup {
        class
            .subgroup
            .intersect(&self.central_torus())
            .expect("same context")
    }

    /// Finite Weyl group iff `S ⊇ T₁` (equivalently `dim S⁺ = dim S`).
    pub fn has_finite_weyl(&self, class: &SubgroupClass) -> bool {
        class
            .subgroup
            .contains(&self.central_torus())
            .expect("same context")
    }

    /// ω: the cotoral hull. The subgroup grows to `S + (S⁺)_e` and the lift
    /// is pushed along the induced map β.
    pub fn omega(&self, class: &SubgroupClass) -> Result<SubgroupClass> {
        let s = &class.subgroup;
        let plus = s.plus_operator()?;
        let s_omega = s.sum(&plus.identity_component())?;
        let lift = self.beta(class, &s_omega)?;
        Ok(SubgroupClass { subgroup: s_omega, lift })
    }

    /// λ = (τ, ω).
    pub fn lambda(&self, class: &SubgroupClass) -> Result<(TorusSubgroup, SubgroupClass)> {
        Ok((self.tau(class), self.omega(class)?))
    }

    /// Push the lift of `class` into the fibre over the larger subgroup
    /// `target ⊇ S` (the map β induced by `T/S → T/target` on `H¹`).
    pub fn beta(&self, class: &SubgroupClass, target: &TorusSubgroup) -> Result<CohomClass> {
        let s = &class.subgroup;
        if !target.contains(s)? {
            return Err(Error::ContainmentViolated("beta needs S ⊆ target".into()));
        }
        let (src_module, _) = s.quotient_lattice()?;
        let (dst_module, _) = target.quotient_lattice()?;
        let dst_fibre = self.cache.get(&dst_module, 2)?;
        if dst_module.rank() == 0 {
            return Ok(dst_fibre.zero_class());
        }
        // inclusion Ξ_target ⊆ Ξ_S in source-basis coordinates; the map on
        // functionals is its transpose
        let e = solve_exact(s.annihilator().basis(), target.annihilator().basis())
            .ok_or_else(|| Error::ContainmentViolated("annihilator inclusion".into()))?;
        let map = InducedMap::new(&src_module, &dst_module, e.transpose(), 2)?;
        map.apply(&class.lift, &dst_fibre)
    }

    /// Cotoral order: `K ⊴ K'` with torus quotient. Checked as
    /// `S ⊆ S'`, `S' ⊆ S⁺`, `S'/S` connected, and `β(x) = x'`.
    pub fn cotoral_le(&self, lower: &SubgroupClass, upper: &SubgroupClass) -> Result<bool> {
        let s = &lower.subgroup;
        let s2 = &upper.subgroup;
        if !s2.contains(s)? {
            return Ok(false);
        }
        let plus = s.plus_operator()?;
        if !plus.contains(s2)? {
            return Ok(false);
        }
        // S'/S connected: Ξ_S / Ξ_{S'} torsion-free
        let q = crate::linalg::quotient_invariants(s2.annihilator(), s.annihilator())?;
        if !q.invariant_factors.is_empty() {
            return Ok(false);
        }
        let pushed = self.beta(lower, s2)?;
        Ok(pushed.coords == upper.lift.coords)
    }

    /// σ-merge of §-style flattening data: `(K̂ ∩ T_f) + R`.
    pub fn sigma_merge(&self, khat: &SubgroupClass, r: &TorusSubgroup) -> Result<TorusSubgroup> {
        if !self.central_torus().contains(r)? {
            return Err(Error::ContainmentViolated("sigma_merge needs R ⊆ T₁".into()));
        }
        khat.subgroup.intersect(&self.moving_torus())?.sum(r)
    }

    /// Annihilator of the image of `S` in the quotient torus `T/T_f`,
    /// in coordinates of the character lattice of `T/T_f`.
    pub fn central_image_ann(&self, s: &TorusSubgroup) -> Lattice {
        let f = self.moving_torus();
        let f_lat = f.annihilator(); // character lattice of T/T_f
        let meet = s
            .annihilator()
            .intersect(f_lat)
            .expect("same ambient");
        if f_lat.rank() == 0 {
            return Lattice::zero(0);
        }
        let coords = solve_exact(f_lat.basis(), meet.basis()).expect("meet inside F");
        Lattice::from_generators(f_lat.rank(), &coords)
    }

    /// Whether the image of `S` in `T/T_f` is the full quotient torus
    /// (`Full`) or exactly its `m`-torsion (`Torsion(m)`).
    pub fn central_image_matches(&self, s: &TorusSubgroup, point: &CentralTorusPoint) -> bool {
        let img = self.central_image_ann(s);
        match point {
            CentralTorusPoint::Full => img.is_zero(),
            CentralTorusPoint::Torsion(m) => {
                let d = img.ambient();
                img == Lattice::scaled_full(d, &BigInt::from(*m))
            }
        }
    }

    /// Standard neighbourhood membership: `S ⊇ T₁` and, for each nontrivial
    /// isotypic piece `i`, `S` contains the `a_i`-torsion of that piece's
    /// subtorus for some `a_i ≥ A_i`. Evaluated exactly on annihilators.
    pub fn in_neighbourhood(&self, class: &SubgroupClass, thresholds: &[NbhdThreshold]) -> Result<bool> {
        let moving: Vec<_> = self
            .decomposition
            .pieces
            .iter()
            .filter(|p| !p.is_trivial_type)
            .collect();
        if thresholds.len() != moving.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} thresholds, got {}",
                moving.len(),
                thresholds.len()
            )));
        }
        if !self.has_finite_weyl(class) {
            return Ok(false);
        }
        let xi = class.subgroup.annihilator();
        for (piece, bound) in moving.iter().zip(thresholds) {
            // P = annihilator of the piece's subtorus; the content of Ξ in
            // the free quotient Λ*/P decides which torsion levels sit in S
            let p = self
                .annihilator_of_piece_torus(&piece.integral)
                .expect("piece data is consistent");
            let content = content_in_quotient(xi, &p);
            let hit = match bound {
                NbhdThreshold::Infinite => content.is_zero(),
                NbhdThreshold::AtLeast(a) => {
                    content.is_zero() || content >= BigInt::from(*a)
                }
            };
            if !hit {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Annihilator of `exp(V_i)` for an isotypic piece given by its
    /// integral lattice: characters vanishing on the subspace.
    fn annihilator_of_piece_torus(&self, piece: &Lattice) -> Result<Lattice> {
        let b = piece.basis();
        Ok(Lattice::from_generators(
            self.rank(),
            &crate::linalg::kernel(&b.transpose()),
        ))
    }

    /// λ-fibre over `(A, K̂)`: classes within the index bound whose image in
    /// `T/T_f` is `A` and whose cotoral hull is `K̂`. Returns the classes and
    /// the threshold `D` beyond which every central point is guaranteed hit.
    pub fn lambda_fibre(
        &self,
        point: &CentralTorusPoint,
        khat: &SubgroupClass,
        index_cap: u64,
    ) -> Result<(Vec<SubgroupClass>, u64)> {
        let candidates = self.classes_up_to_index(index_cap)?;
        let mut fibre = Vec::new();
        for class in candidates {
            if !self.central_image_matches(&class.subgroup, point) {
                continue;
            }
            let omega = self.omega(&class)?;
            if &omega == khat {
                fibre.push(class);
            }
        }
        fibre.sort_by_key(SubgroupClass::sort_key);
        Ok((fibre, self.default_threshold()))
    }

    /// All classes whose annihilator has index at most `index_cap` inside
    /// its saturation (all coranks; spans must be multiplicity-free).
    pub fn classes_up_to_index(&self, index_cap: u64) -> Result<Vec<SubgroupClass>> {
        if index_cap > crate::caps::MAX_INDEX {
            return Err(Error::CapExceeded(format!(
                "index cap {index_cap} exceeds {}",
                crate::caps::MAX_INDEX
            )));
        }
        let dual_rep = self.ctx.dual.clone();
        let dual_decomp = isotypic::decompose(&dual_rep)?;
        if dual_decomp.pieces.iter().any(|p| p.multiplicity > 1) {
            return Err(Error::Unbounded(
                "dual representation is not multiplicity-free; span census is infinite".into(),
            ));
        }
        // all invariant spans: subsets of the dual isotypic pieces
        let r = self.rank();
        let mut spans: Vec<Lattice> = vec![Lattice::zero(r)];
        for p in &dual_decomp.pieces {
            let mut next = spans.clone();
            for s in &spans {
                next.push(s.sum(&p.integral).expect("ambient").saturate());
            }
            spans = next;
        }
        spans.sort_by_key(|l| (l.rank(), format!("{:?}", l.basis())));
        spans.dedup();

        let mut out = Vec::new();
        for span in &spans {
            let k = span.rank();
            if k == 0 {
                let s = self.full_torus();
                if self.supports_epsilon(&s)? {
                    for x in self.lift_fibre(&s)?.elements()? {
                        out.push(SubgroupClass { subgroup: s.clone(), lift: x });
                    }
                }
                continue;
            }
            for n in 1..=index_cap {
                for mid in crate::torus::hnf_lattices_of_index(k, n) {
                    let xi = Lattice::from_generators(r, &span.basis().mul(mid.basis()));
                    let s = TorusSubgroup::from_annihilator(self.ctx.clone(), xi)?;
                    if !s.is_invariant() {
                        continue;
                    }
                    if !self.supports_epsilon(&s)? {
                        continue;
                    }
                    for x in self.lift_fibre(&s)?.elements()? {
                        out.push(SubgroupClass { subgroup: s.clone(), lift: x });
                    }
                }
            }
        }
        out.sort_by_key(SubgroupClass::sort_key);
        out.dedup_by(|a, b| a == b);
        Ok(out)
    }
}

/// Points of the central quotient torus poset used as λ-fibre addresses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CentralTorusPoint {
    Torsion(u64),
    Full,
}

/// Threshold for one moving isotypic direction of a standard neighbourhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NbhdThreshold {
    AtLeast(u64),
    Infinite,
}

/// Content of the image of `xi` in the free quotient `Λ*/P`: the gcd of all
/// coordinates, zero when the image is zero.
fn content_in_quotient(xi: &Lattice, p: &Lattice) -> BigInt {
    let r = xi.ambient();
    let rank_p = p.rank();
    if rank_p == r {
        return BigInt::zero();
    }
    // coordinates on Z^r/P: SNF of the (saturated) basis gives a unimodular
    // change of coordinates in which P spans the first rank_p axes
    if rank_p == 0 {
        let mut g = BigInt::zero();
        let b = xi.basis();
        for i in 0..b.rows {
            for j in 0..b.cols {
                g = num_integer::gcd(g, b[(i, j)].clone());
            }
        }
        return g;
    }
    let (_, u, _) = snf(p.basis());
    let proj = u; // rows rank_p.. give the quotient coordinates
    let img = proj.mul(xi.basis());
    let mut g = BigInt::zero();
    for i in rank_p..img.rows {
        for j in 0..img.cols {
            g = num_integer::gcd(g, img[(i, j)].clone());
        }
    }
    g
}

/// A conjugacy class of full subgroups: the torus part and the lift class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub subgroup: TorusSubgroup,
    pub lift: CohomClass,
}

impl SubgroupClass {
    pub fn sort_key(&self) -> (usize, String, Vec<BigInt>) {
        let (corank, basis) = self.subgroup.sort_key();
        (corank, basis, self.lift.coords.clone())
    }

    /// Short display label: corank, π₀ and lift coordinates.
    pub fn label(&self) -> String {
        let pi0 = self.subgroup.pi0();
        let order = if self.subgroup.dim() == 0 {
            format!("|S|={}", pi0.torsion_order())
        } else {
            format!("dim {} π₀={}", self.subgroup.dim(), pi0)
        };
        if self.lift.coords.is_empty() {
            order
        } else {
            format!(
                "{order} x=({})",
                self.lift
                    .coords
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }
    }
}

#[cfg(test)]
mod tests;
