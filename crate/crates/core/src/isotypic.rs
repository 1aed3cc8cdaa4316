//! Rational isotypic decomposition of the toral lattice, the integral
//! pieces, cover kernels and multiplicities.
//!
//! The commutant of the representation is computed exactly over Q; central
//! idempotents come from factoring the minimal polynomial of a generic
//! central element, and multiplicities from iterated equivariant splitting
//! inside each piece. The division-algebra dimension of each simple type
//! is reported rather than assuming the base field splits anything.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::IntegralRep;
use crate::linalg::{quotient_invariants, FiniteAbelianGroup, IntMatrix, Lattice};
use crate::poly::{factor_q, QPoly};
use crate::qlinalg::QMatrix;

/// One isotypic piece of `Λ₀ ⊗ Q`.
#[derive(Clone, Debug)]
pub struct IsotypicPiece {
    /// saturated lattice basis of the rational subspace `V_i`
    pub subspace: Lattice,
    /// integral piece `Λ_i = Λ₀ ∩ V_i` (same lattice; kept for clarity)
    pub integral: Lattice,
    /// multiplicity of the simple type in this piece
    pub multiplicity: usize,
    pub dim: usize,
    pub is_trivial_type: bool,
    /// Q-dimension of the endomorphism division algebra of the simple type
    pub endo_division_dim: usize,
    /// Q-dimension of the simple type itself
    pub simple_dim: usize,
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomposition {
    pub pieces: Vec<IsotypicPiece>,
    /// kernel of `T̃_1 × ... × T̃_s → T`, i.e. torsion of `Λ₀ / ⊕Λ_i`
    pub kernel_l: FiniteAbelianGroup,
    /// kernel of `T̃_1 × T̃_f → T`
    pub kernel_lf: FiniteAbelianGroup,
    /// `Λ_f = Λ₀ ∩ V_f`, the integral moving part
    pub moving_lattice: Lattice,
    /// trivial-type integral piece (zero lattice when absent)
    pub trivial_lattice: Lattice,
}

/// Block-shape prediction: the poset factor from the trivial type and one
/// Stone factor of rank `m_i` per nontrivial isotype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockShape {
    pub poset_rank: usize,
    pub stone_ranks: Vec<usize>,
    pub total: usize,
}

/// Basis of `{X : ρ(w) X = X ρ(w) for all w}` over Q.
pub fn endo_algebra(rep: &IntegralRep) -> Vec<QMatrix> {
    commutant_of(&rep.matrices().iter().map(QMatrix::from_int).collect::<Vec<_>>(), rep.rank())
}

fn commutant_of(action: &[QMatrix], rank: usize) -> Vec<QMatrix> {
    if rank == 0 {
        return vec![];
    }
    // unknowns X_{ij}; equations A X - X A = 0 for each action matrix
    let n = rank;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for a in action {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![BigRational::zero(); n * n];
                // (A X)_{ij} = sum_k A_{ik} X_{kj}; (X A)_{ij} = sum_k X_{ik} A_{kj}
                for k in 0..n {
                    row[k * n + j] += a[(i, k)].clone();
                    row[i * n + k] -= a[(k, j)].clone();
                }
                rows.push(row);
            }
        }
    }
    let m = QMatrix::from_fn(rows.len(), n * n, |i, j| rows[i][j].clone());
    let ns = m.nullspace();
    (0..ns.cols)
        .map(|c| QMatrix::from_fn(n, n, |i, j| ns[(i * n + j, c)].clone()))
        .collect()
}

fn min_poly(m: &QMatrix) -> QPoly {
    let n = m.rows;
    // powers of m flattened as vectors; first linear dependency
    let mut powers: Vec<QMatrix> = vec![QMatrix::identity(n)];
    loop {
        let k = powers.len();
        let sys = QMatrix::from_fn(n * n, k, |i, j| {
            let (r, c) = (i / n, i % n);
            powers[j][(r, c)].clone()
        });
        let next = powers.last().unwrap().mul(m);
        let target: Vec<BigRational> =
            (0..n * n).map(|i| next[(i / n, i % n)].clone()).collect();
        if let Some(coeffs) = sys.solve(&target) {
            // m^k = sum coeffs_j m^j  =>  min poly = x^k - sum coeffs_j x^j
            let mut poly = vec![BigRational::zero(); k + 1];
            poly[k] = BigRational::one();
            for (j, c) in coeffs.iter().enumerate() {
                poly[j] = -c.clone();
            }
            return QPoly::new(poly);
        }
        powers.push(next);
    }
}

fn eval_matrix_poly(p: &QPoly, m: &QMatrix) -> QMatrix {
    let n = m.rows;
    let mut acc = QMatrix::zero(n, n);
    for c in p.coeffs.iter().rev() {
        acc = acc.mul(m);
        for i in 0..n {
            acc[(i, i)] += c.clone();
        }
    }
    acc
}

/// Invert a square rational matrix; `None` if singular.
fn invert(m: &QMatrix) -> Option<QMatrix> {
    let n = m.rows;
    let mut aug = QMatrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    let pivots = aug.rref();
    if pivots.len() < n || pivots.iter().enumerate().any(|(k, &c)| c != k) {
        return None;
    }
    Some(QMatrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
}

/// Full isotypic decomposition of a validated representation.
pub fn decompose(rep: &IntegralRep) -> Result<IsotypicDecomposition> {
    let r = rep.rank();
    if r == 0 {
        return Ok(IsotypicDecomposition {
            pieces: vec![],
            kernel_l: FiniteAbelianGroup::trivial(),
            kernel_lf: FiniteAbelianGroup::trivial(),
            moving_lattice: Lattice::zero(0),
            trivial_lattice: Lattice::zero(0),
        });
    }
    let action: Vec<QMatrix> = rep.matrices().iter().map(QMatrix::from_int).collect();
    let commutant = commutant_of(&action, r);
    let idempotents = central_idempotents(&commutant, &action)?;

    let mut pieces = Vec::new();
    for e in &idempotents {
        // V_i = image of the idempotent, saturated integral basis
        let img = image_lattice(e);
        let dim = img.rank();
        let basis_q = QMatrix::from_int(img.basis());
        let is_trivial = action.iter().all(|a| a.mul(&basis_q) == basis_q);
        let (mult, simple_dim, endo_dim) = multiplicities_in_piece(rep, &img)?;
        pieces.push(IsotypicPiece {
            subspace: img.clone(),
            integral: img,
            multiplicity: mult,
            dim,
            is_trivial_type: is_trivial,
            endo_division_dim: endo_dim,
            simple_dim,
        });
    }
    // trivial piece first, then canonical order
    pieces.sort_by_key(|p| {
        (
            !p.is_trivial_type,
            p.dim,
            format!("{:?}", p.integral.basis()),
        )
    });
    // sanity: dimensions fill the space, at most one trivial type
    let total: usize = pieces.iter().map(|p| p.dim).sum();
    if total != r {
        return Err(Error::Undecided(format!(
            "isotypic dimensions sum to {total}, expected {r}"
        )));
    }
    if pieces.iter().filter(|p| p.is_trivial_type).count() > 1 {
        return Err(Error::Undecided("multiple trivial-type pieces".into()));
    }

    let full = Lattice::full(r);
    let mut direct_sum = Lattice::zero(r);
    for p in &pieces {
        direct_sum = direct_sum.sum(&p.integral)?;
    }
    let kernel_l = quotient_invariants(&direct_sum, &full)?.torsion();

    let trivial_lattice = pieces
        .iter()
        .find(|p| p.is_trivial_type)
        .map(|p| p.integral.clone())
        .unwrap_or_else(|| Lattice::zero(r));
    let mut moving_sum = Lattice::zero(r);
    for p in pieces.iter().filter(|p| !p.is_trivial_type) {
        moving_sum = moving_sum.sum(&p.integral)?;
    }
    let moving_lattice = moving_sum.saturate();
    let lf_sum = trivial_lattice.sum(&moving_lattice)?;
    let kernel_lf = quotient_invariants(&lf_sum, &full)?.torsion();

    Ok(IsotypicDecomposition {
        pieces,
        kernel_l,
        kernel_lf,
        moving_lattice,
        trivial_lattice,
    })
}

fn image_lattice(e: &QMatrix) -> Lattice {
    e.column_span_saturated()
}

/// Central idempotents of the commutant: factor the minimal polynomial of
/// a generic central element and apply CRT interpolants.
fn central_idempotents(commutant: &[QMatrix], action: &[QMatrix]) -> Result<Vec<QMatrix>> {
    let n = action[0].rows;
    if commutant.is_empty() {
        return Err(Error::Undecided("empty commutant".into()));
    }
    // center of the commutant
    let k = commutant.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for b in commutant {
        // [sum_j c_j e_j, b] = 0 -> rows over coefficients c_j
        for i in 0..n {
            for jj in 0..n {
                let row: Vec<BigRational> = (0..k)
                    .map(|j| {
                        let lhs = commutant[j].mul(b);
                        let rhs = b.mul(&commutant[j]);
                        &lhs[(i, jj)] - &rhs[(i, jj)]
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    let sys = QMatrix::from_fn(rows.len(), k, |i, j| rows[i][j].clone());
    let center_coords = sys.nullspace();
    let center: Vec<QMatrix> = (0..center_coords.cols)
        .map(|c| {
            let mut m = QMatrix::zero(n, n);
            for j in 0..k {
                if !center_coords[(j, c)].is_zero() {
                    m = m.add(&commutant[j].scale(&center_coords[(j, c)]));
                }
            }
            m
        })
        .collect();
    let center_dim = center.len();

    // generic central element: deterministic small-coefficient sweeps until
    // the minimal polynomial has full degree
    let mut generic: Option<(QMatrix, QPoly)> = None;
    'outer: for round in 0..200u64 {
        let mut z = QMatrix::zero(n, n);
        for (j, c) in center.iter().enumerate() {
            // simple deterministic pseudo-random coefficients
            let coeff = BigRational::from(BigInt::from(
                1 + ((round * 37 + j as u64 * 17 + round * round % 23) % 19) as i64,
            ));
            z = z.add(&c.scale(&coeff));
        }
        let f = min_poly(&z);
        if f.degree() == center_dim {
            generic = Some((z, f));
            break 'outer;
        }
    }
    let (z, f) = generic.ok_or_else(|| Error::Undecided("no generic central element found".into()))?;
    let factors = factor_q(&f)?;
    if factors.iter().any(|(_, m)| *m > 1) {
        return Err(Error::Undecided("central minimal polynomial is not square-free".into()));
    }
    let mut idempotents = Vec::new();
    for (fi, _) in &factors {
        // e_i = g_i(z) * h_i(z) with g_i = f / f_i, h_i = g_i^{-1} mod f_i
        let (gi, rem) = f.div_rem(fi);
        debug_assert!(rem.is_zero());
        let hi = poly_inverse_mod(&gi, fi)
            .ok_or_else(|| Error::Undecided("CRT inverse failed".into()))?;
        let e = eval_matrix_poly(&gi.mul(&hi).rem(&f), &z);
        idempotents.push(e);
    }
    // verify projector laws
    let mut total = QMatrix::zero(n, n);
    for (i, e) in idempotents.iter().enumerate() {
        if e.mul(e) != *e {
            return Err(Error::Undecided("idempotent fails e^2 = e".into()));
        }
        for a in action {
            if a.mul(e) != e.mul(a) {
                return Err(Error::Undecided("idempotent not equivariant".into()));
            }
        }
        for (j, e2) in idempotents.iter().enumerate() {
            if i != j && !e.mul(e2).is_zero() {
                return Err(Error::Undecided("idempotents not orthogonal".into()));
            }
        }
        total = total.add(e);
    }
    if !total.is_identity() {
        return Err(Error::Undecided("idempotents do not sum to identity".into()));
    }
    Ok(idempotents)
}

fn poly_inverse_mod(a: &QPoly, modulus: &QPoly) -> Option<QPoly> {
    // extended euclid over Q[x]
    let (mut r0, mut r1) = (modulus.clone(), a.rem(modulus));
    let (mut t0, mut t1) = (QPoly::zero(), QPoly::new(vec![BigRational::one()]));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let t = t0.sub_poly(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if r0.degree() != 0 {
        return None;
    }
    let c = r0.coeffs[0].clone();
    Some(QPoly::new(t0.coeffs.iter().map(|x| x / &c).collect()).rem(modulus))
}

impl QPoly {
    fn sub_poly(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        QPoly::new(out)
    }
}

/// Multiplicity data inside one isotypic piece: `(m, dim S, dim_Q End(S))`.
fn multiplicities_in_piece(rep: &IntegralRep, piece: &Lattice) -> Result<(usize, usize, usize)> {
    let b = piece.basis();
    let k = piece.rank();
    // restricted action in the piece basis (integral by invariance)
    let restricted: Vec<IntMatrix> = rep
        .matrices()
        .iter()
        .map(|m| {
            crate::linalg::solve_exact(b, &m.mul(b)).expect("isotypic piece is invariant")
        })
        .collect();
    let action_q: Vec<QMatrix> = restricted.iter().map(QMatrix::from_int).collect();
    // scalar action means the simple type is 1-dimensional
    if action_q.iter().all(|a| {
        let c = a[(0, 0)].clone();
        *a == QMatrix::identity(k).scale(&c)
    }) {
        return Ok((k, 1, 1));
    }
    // iterated equivariant splitting
    let leaves = split_module(&action_q, k)?;
    let simple_dim = leaves[0];
    if leaves.iter().any(|&d| d != simple_dim) {
        return Err(Error::Undecided("leaves of an isotypic piece differ in dimension".into()));
    }
    let m = leaves.len();
    // Wedderburn cross-check: dim commutant = m^2 * dim D
    let cdim = commutant_of(&action_q, k).len();
    if cdim % (m * m) != 0 {
        return Err(Error::Undecided("commutant dimension incompatible with multiplicity".into()));
    }
    let d = cdim / (m * m);
    if simple_dim % d != 0 {
        return Err(Error::Undecided(
            "division algebra dimension does not divide the simple dimension".into(),
        ));
    }
    Ok((m, simple_dim, d))
}

/// Split a module (given by its action matrices) into simple summands,
/// returning the dimensions of the leaves.
fn split_module(action: &[QMatrix], dim: usize) -> Result<Vec<usize>> {
    let commutant = commutant_of(action, dim);
    if commutant.len() == 1 {
        return Ok(vec![dim]); // End = Q, simple
    }
    // candidate elements: basis, pairwise combinations, deterministic sweeps
    let mut candidates: Vec<QMatrix> = Vec::new();
    candidates.extend(commutant.iter().cloned());
    for i in 0..commutant.len() {
        for j in i + 1..commutant.len() {
            candidates.push(commutant[i].add(&commutant[j]));
            candidates.push(commutant[i].sub(&commutant[j]));
        }
    }
    for round in 0..120u64 {
        let mut z = QMatrix::zero(dim, dim);
        for (j, c) in commutant.iter().enumerate() {
            let coeff = BigRational::from(BigInt::from(
                ((round * 31 + j as u64 * 13 + 7) % 11) as i64 - 5,
            ));
            if !coeff.is_zero() {
                z = z.add(&c.scale(&coeff));
            }
        }
        candidates.push(z);
    }
    for c in &candidates {
        if c.is_zero() {
            continue;
        }
        // scalars split nothing
        let c00 = c[(0, 0)].clone();
        if *c == QMatrix::identity(dim).scale(&c00) {
            continue;
        }
        let f = min_poly(c);
        let factors = factor_q(&f)?;
        let split_basis: Option<(QMatrix, QMatrix)> = if factors.len() >= 2 {
            // primary component of the first factor
            let (f1, k1) = &factors[0];
            let mut pw = QPoly::new(vec![BigRational::one()]);
            for _ in 0..*k1 {
                pw = pw.mul(f1);
            }
            let m1 = eval_matrix_poly(&pw, c);
            let u = m1.nullspace();
            Some((u.clone(), equivariant_complement(action, &u)?))
        } else if factors.len() == 1 && factors[0].1 >= 2 {
            // single repeated factor: kernel of one application is proper
            let m1 = eval_matrix_poly(&factors[0].0, c);
            let u = m1.nullspace();
            if u.cols == 0 || u.cols == dim {
                None
            } else {
                Some((u.clone(), equivariant_complement(action, &u)?))
            }
        } else {
            None
        };
        if let Some((u, w)) = split_basis {
            if u.cols == 0 || u.cols == dim {
                continue;
            }
            let left = restrict_action(action, &u);
            let right = restrict_action(action, &w);
            let mut out = split_module(&left, u.cols)?;
            out.extend(split_module(&right, w.cols)?);
            return Ok(out);
        }
    }
    // nothing split it: declare simple (verified upstream by Wedderburn count)
    Ok(vec![dim])
}

/// W-stable complement of the column span of `u`, by averaging a projector.
fn equivariant_complement(action: &[QMatrix], u: &QMatrix) -> Result<QMatrix> {
    let n = u.rows;
    let k = u.cols;
    // extend u to a basis
    let mut p = u.clone();
    for j in 0..n {
        let mut trial = QMatrix::from_fn(n, p.cols + 1, |i, c| {
            if c < p.cols {
                p[(i, c)].clone()
            } else if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        });
        if trial.rref().len() == p.cols + 1 {
            p = QMatrix::from_fn(n, p.cols + 1, |i, c| {
                if c < p.cols {
                    p[(i, c)].clone()
                } else if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            });
        }
        if p.cols == n {
            break;
        }
    }
    let p_inv = invert(&p).ok_or_else(|| Error::Undecided("basis extension failed".into()))?;
    // projector onto u along the added directions
    let mut pi0 = QMatrix::zero(n, n);
    {
        let mut diag = QMatrix::zero(n, n);
        for i in 0..k {
            diag[(i, i)] = BigRational::one();
        }
        pi0 = pi0.add(&p.mul(&diag).mul(&p_inv));
    }
    // average over the group
    let order = action.len();
    let mut avg = QMatrix::zero(n, n);
    for a in action {
        let a_inv = invert(a).expect("action matrices are invertible");
        avg = avg.add(&a.mul(&pi0).mul(&a_inv));
    }
    let avg = avg.scale(&BigRational::new(BigInt::one(), BigInt::from(order as i64)));
    // complement = kernel of the averaged projector
    Ok(avg.nullspace())
}

fn restrict_action(action: &[QMatrix], basis: &QMatrix) -> Vec<QMatrix> {
    action
        .iter()
        .map(|a| {
            let image = a.mul(basis);
            // solve basis * X = image columnwise
            let cols: Vec<Vec<BigRational>> = (0..image.cols)
                .map(|j| {
                    let b: Vec<BigRational> = (0..image.rows).map(|i| image[(i, j)].clone()).collect();
                    basis.solve(&b).expect("invariant subspace")
                })
                .collect();
            QMatrix::from_fn(basis.cols, image.cols, |i, j| cols[j][i].clone())
        })
        .collect()
}

/// Predicted shape of the block controlled by this lattice: the trivial
/// piece drives a poset factor, every other isotype a Stone factor of rank
/// equal to its multiplicity.
pub fn predicted_block_shape(decomp: &IsotypicDecomposition) -> BlockShape {
    let poset_rank = decomp
        .pieces
        .iter()
        .find(|p| p.is_trivial_type)
        .map(|p| p.dim)
        .unwrap_or(0);
    let stone_ranks: Vec<usize> = decomp
        .pieces
        .iter()
        .filter(|p| !p.is_trivial_type)
        .map(|p| p.multiplicity)
        .collect();
    let total = poset_rank + stone_ranks.iter().sum::<usize>();
    BlockShape { poset_rank, stone_ranks, total }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn swap_rep() -> IntegralRep {
        IntegralRep::from_generator_matrices(
            FiniteGroup::cyclic(2).unwrap(),
            2,
            &[IntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]])],
        )
        .unwrap()
    }

    fn sign_rep() -> IntegralRep {
        IntegralRep::from_generator_matrices(
            FiniteGroup::cyclic(2).unwrap(),
            1,
            &[IntMatrix::from_rows_i64(&[&[-1]])],
        )
        .unwrap()
    }

    fn rot3_rep() -> IntegralRep {
        IntegralRep::from_generator_matrices(
            FiniteGroup::cyclic(3).unwrap(),
            2,
            &[IntMatrix::from_rows_i64(&[&[0, -1], &[1, -1]])],
        )
        .unwrap()
    }

    #[test]
    fn commutant_dimensions() {
        assert_eq!(endo_algebra(&swap_rep()).len(), 2);
        let triv = IntegralRep::trivial(FiniteGroup::cyclic(2).unwrap(), 3);
        assert_eq!(endo_algebra(&triv).len(), 9);
        assert_eq!(endo_algebra(&rot3_rep()).len(), 2);
    }

    #[test]
    fn decompose_swap() {
        let d = decompose(&swap_rep()).unwrap();
        assert_eq!(d.pieces.len(), 2);
        let triv = &d.pieces[0];
        assert!(triv.is_trivial_type);
        assert_eq!(
            triv.integral,
            Lattice::from_generator_vecs(2, &[vec![BigInt::from(1), BigInt::from(1)]])
        );
        let sign = &d.pieces[1];
        assert!(!sign.is_trivial_type);
        assert_eq!(
            sign.integral,
            Lattice::from_generator_vecs(2, &[vec![BigInt::from(1), BigInt::from(-1)]])
        );
        assert_eq!(d.kernel_l, FiniteAbelianGroup::from_factors_i64(&[2], 0));
        assert_eq!(d.kernel_lf, FiniteAbelianGroup::from_factors_i64(&[2], 0));
    }

    #[test]
    fn decompose_trivial_rep() {
        for r in 1..=4usize {
            let rep = IntegralRep::trivial(FiniteGroup::trivial(), r);
            let d = decompose(&rep).unwrap();
            assert_eq!(d.pieces.len(), 1);
            assert!(d.pieces[0].is_trivial_type);
            assert_eq!(d.pieces[0].multiplicity, r);
            assert!(d.kernel_l.is_trivial());
        }
    }

    #[test]
    fn decompose_c3_rotation() {
        let d = decompose(&rot3_rep()).unwrap();
        assert_eq!(d.pieces.len(), 1);
        let p = &d.pieces[0];
        assert!(!p.is_trivial_type);
        assert_eq!(p.multiplicity, 1);
        assert_eq!(p.dim, 2);
        assert_eq!(p.endo_division_dim, 2, "commutant of the rotation plane is a quadratic field");
        assert!(d.kernel_l.is_trivial());
    }

    #[test]
    fn decompose_sign_squared_multiplicity() {
        let rep = sign_rep().direct_sum(&sign_rep()).unwrap();
        let d = decompose(&rep).unwrap();
        assert_eq!(d.pieces.len(), 1);
        assert_eq!(d.pieces[0].multiplicity, 2);
        assert_eq!(d.pieces[0].simple_dim, 1);
        assert!(d.kernel_l.is_trivial(), "block-diagonal pieces sum to the full lattice");
    }

    #[test]
    fn decompose_rot3_squared_multiplicity() {
        let rep = rot3_rep().direct_sum(&rot3_rep()).unwrap();
        let d = decompose(&rep).unwrap();
        assert_eq!(d.pieces.len(), 1);
        assert_eq!(d.pieces[0].multiplicity, 2);
        assert_eq!(d.pieces[0].simple_dim, 2);
        assert_eq!(d.pieces[0].endo_division_dim, 2);
    }

    #[test]
    fn direct_sum_refines_trivial_dimension() {
        let a = decompose(&swap_rep()).unwrap();
        let sum_rep = swap_rep()
            .direct_sum(&IntegralRep::trivial(FiniteGroup::cyclic(2).unwrap(), 1))
            .unwrap();
        let b = decompose(&sum_rep).unwrap();
        let ta = a.pieces.iter().find(|p| p.is_trivial_type).unwrap().dim;
        let tb = b.pieces.iter().find(|p| p.is_trivial_type).unwrap().dim;
        assert_eq!(tb, ta + 1);
    }

    #[test]
    fn projector_laws_hold() {
        for rep in [swap_rep(), rot3_rep()] {
            let d = decompose(&rep).unwrap();
            let total: usize = d.pieces.iter().map(|p| p.dim).sum();
            assert_eq!(total, rep.rank());
            // pieces pairwise independent: pairwise intersections are zero
            for i in 0..d.pieces.len() {
                for j in i + 1..d.pieces.len() {
                    let meet = d.pieces[i].integral.intersect(&d.pieces[j].integral).unwrap();
                    assert!(meet.is_zero());
                }
            }
        }
    }

    #[test]
    fn predicted_shapes() {
        // swap: poset rank 1 + one Stone factor of rank 1
        let d = decompose(&swap_rep()).unwrap();
        assert_eq!(
            predicted_block_shape(&d),
            BlockShape { poset_rank: 1, stone_ranks: vec![1], total: 2 }
        );
        // trivial rank 1: pure poset
        let d = decompose(&IntegralRep::trivial(FiniteGroup::trivial(), 1)).unwrap();
        assert_eq!(
            predicted_block_shape(&d),
            BlockShape { poset_rank: 1, stone_ranks: vec![], total: 1 }
        );
        // sign rank 1: pure Stone of rank 1
        let d = decompose(&sign_rep()).unwrap();
        assert_eq!(
            predicted_block_shape(&d),
            BlockShape { poset_rank: 0, stone_ranks: vec![1], total: 1 }
        );
    }
}
