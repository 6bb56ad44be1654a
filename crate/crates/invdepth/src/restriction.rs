//! Restriction to subspaces of V and the comodule structure on F[V]^P
//! induced by the addition map C × V → V for C inside the fixed space V^P,
//! together with executable counit and coassociativity checks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::MatFp;
use crate::matgroup::{act_on_polynomial, fixed_subspace, Subspace};
use crate::poly::{Monomial, Polynomial};

/// The polynomial part of the cohomology of an elementary abelian p-group of
/// a given rank: F_p[t_1, …, t_r] with generators in algebraic degree 1. At
/// p = 2 this is the whole cohomology; at odd p the exterior classes are
/// omitted (they form a finite free module over this part, so depth and
/// regular-sequence questions are unaffected).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElemAbelianModel {
    pub p: u32,
    pub rank: usize,
}

/// An element of F[C] ⊗ F[V] in bilinear normal form: distinct left monomials
/// in the C-variables, each with a nonzero right polynomial factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    pub p: u32,
    /// number of C-variables (left factors)
    pub rank: usize,
    /// number of V-variables (right factors)
    pub nvars: usize,
    pub pairs: BTreeMap<Monomial, Polynomial>,
}

impl TensorElement {
    pub fn zero(p: u32, rank: usize, nvars: usize) -> Self {
        TensorElement {
            p,
            rank,
            nvars,
            pairs: BTreeMap::new(),
        }
    }

    pub fn add_pair(&mut self, left: Monomial, right: &Polynomial) {
        debug_assert_eq!(left.nvars(), self.rank);
        debug_assert_eq!(right.nvars(), self.nvars);
        let entry = self
            .pairs
            .entry(left)
            .or_insert_with(|| Polynomial::zero(self.p, self.nvars));
        *entry = entry.add(right).expect("compatible");
        self.pairs.retain(|_, g| !g.is_zero());
    }

    pub fn mul(&self, other: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(self.p, self.rank, self.nvars);
        for (la, ra) in &self.pairs {
            for (lb, rb) in &other.pairs {
                out.add_pair(la.mul(lb), &ra.mul(rb).expect("compatible"));
            }
        }
        out
    }

    /// Flatten into a single polynomial in rank + nvars variables
    /// (C-variables first).
    pub fn flatten(&self) -> Polynomial {
        let total = self.rank + self.nvars;
        let mut out = Polynomial::zero(self.p, total);
        for (l, r) in &self.pairs {
            for (m, c) in r.terms() {
                let mut e = l.0.clone();
                e.extend(&m.0);
                out.add_term(Monomial(e), c);
            }
        }
        out
    }
}

/// Restriction i_U: substitute x = λ_1 u_1 + … + λ_s u_s for the echelon
/// basis of U; the result lives in s variables.
pub fn restrict_to_subspace(f: &Polynomial, u: &Subspace) -> Result<Polynomial> {
    if u.ambient_dim() != f.nvars() || u.p() != f.p() {
        return Err(Error::Structural(
            "subspace and polynomial live in different spaces".into(),
        ));
    }
    let s = u.dim();
    let a: Vec<Vec<u32>> = (0..f.nvars())
        .map(|i| (0..s).map(|k| u.basis_rows()[k][i]).collect())
        .collect();
    f.apply_linear_substitution(&a)
}

/// Shift a polynomial's variables into a larger ring at a given offset.
fn embed(f: &Polynomial, total: usize, offset: usize) -> Polynomial {
    Polynomial::from_terms(
        f.p(),
        total,
        f.terms().map(|(m, c)| {
            let mut e = vec![0u16; total];
            e[offset..offset + m.nvars()].copy_from_slice(&m.0);
            (Monomial(e), c)
        }),
    )
}

fn check_c_in_fixed(c: &Subspace, p_elements: &[MatFp]) -> Result<()> {
    let fixed = fixed_subspace(c.p(), c.ambient_dim(), p_elements);
    if !c.is_subspace_of(&fixed) {
        return Err(Error::Precondition(
            "C must lie inside the fixed subspace V^P".into(),
        ));
    }
    Ok(())
}

/// Coaction Ψ(f) = f(c + v) expanded as Σ m(μ) ⊗ g_m(v), for c = Σ μ_i c_i
/// over the echelon basis of C. Requires C ⊆ V^P; the right tensor factors
/// are verified P-invariant.
pub fn coaction(f: &Polynomial, c: &Subspace, p_elements: &[MatFp]) -> Result<TensorElement> {
    check_c_in_fixed(c, p_elements)?;
    let n = f.nvars();
    let r = c.dim();
    let total = r + n;
    // x_i ↦ Σ_j c_j[i]·μ_j + x_i, with μ first and x after
    let a: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut row = vec![0u32; total];
            for (j, basis_vec) in c.basis_rows().iter().enumerate() {
                row[j] = basis_vec[i];
            }
            row[r + i] = 1;
            row
        })
        .collect();
    let flat = f.apply_linear_substitution(&a)?;
    let mut out = TensorElement::zero(f.p(), r, n);
    for (m, coeff) in flat.terms() {
        let left = Monomial(m.0[..r].to_vec());
        let right = Polynomial::monomial(f.p(), Monomial(m.0[r..].to_vec()), coeff);
        out.add_pair(left, &right);
    }
    for g in &out.pairs.values().cloned().collect::<Vec<_>>() {
        for e in p_elements {
            if act_on_polynomial(e, g)? != *g {
                return Err(Error::Inconsistency(
                    "coaction right factor is not P-invariant".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Counit identity: setting every μ_i = 0 in Ψ(f) recovers f exactly.
pub fn counit_check(f: &Polynomial, c: &Subspace, p_elements: &[MatFp]) -> Result<bool> {
    let psi = coaction(f, c, p_elements)?;
    let unit = Monomial::one(c.dim());
    let at_zero = psi
        .pairs
        .get(&unit)
        .cloned()
        .unwrap_or_else(|| Polynomial::zero(f.p(), f.nvars()));
    Ok(at_zero == *f)
}

/// Coassociativity: (Δ⊗1)∘Ψ = (1⊗Ψ)∘Ψ, with Δ induced by addition C×C → C.
/// Both composites must equal f evaluated at (c + c' + v); all three are
/// compared as polynomials in the 2r + n variables (μ, ν, x).
pub fn coassociativity_check(f: &Polynomial, c: &Subspace, p_elements: &[MatFp]) -> Result<bool> {
    let psi = coaction(f, c, p_elements)?;
    let n = f.nvars();
    let r = c.dim();
    let total = 2 * r + n;

    // direct: x_i ↦ Σ_j c_j[i]·(μ_j + ν_j) + x_i
    let a: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut row = vec![0u32; total];
            for (j, basis_vec) in c.basis_rows().iter().enumerate() {
                row[j] = basis_vec[i];
                row[r + j] = basis_vec[i];
            }
            row[2 * r + i] = 1;
            row
        })
        .collect();
    let direct = f.apply_linear_substitution(&a)?;

    // (Δ⊗1)Ψ: substitute μ_j ↦ μ_j + ν_j into each left factor; the
    // substitution is written on all 2r + n variables so that r = 0 (the
    // zero subspace) stays well-typed
    let mut delta = vec![vec![0u32; total]; total];
    for (j, row) in delta.iter_mut().enumerate() {
        row[j] = 1;
        if j < r {
            row[r + j] = 1;
        }
    }
    let mut lhs = Polynomial::zero(f.p(), total);
    for (l, g) in &psi.pairs {
        let left = embed(&Polynomial::monomial(f.p(), l.clone(), 1), total, 0)
            .apply_linear_substitution(&delta)?;
        let right = embed(g, total, 2 * r);
        lhs = lhs.add(&left.mul(&right)?)?;
    }

    // (1⊗Ψ)Ψ: apply Ψ again to each right factor, with ν as the new C-variables
    let mut rhs = Polynomial::zero(f.p(), total);
    for (l, g) in &psi.pairs {
        let psi_g = coaction(g, c, p_elements)?;
        // psi_g lives in (ν, x); shift ν to slots r..2r
        let inner = embed(&psi_g.flatten(), total, r);
        let left = embed(&Polynomial::monomial(f.p(), l.clone(), 1), total, 0);
        rhs = rhs.add(&left.mul(&inner)?)?;
    }

    Ok(lhs == direct && rhs == direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::MatrixGroup;

    fn swap_group() -> MatrixGroup {
        let s = MatFp::from_rows(2, vec![vec![0, 1], vec![1, 0]]);
        MatrixGroup::enumerate(2, 2, vec![s], 100).unwrap()
    }

    fn diag_c() -> Subspace {
        Subspace::from_spanning(2, 2, vec![vec![1, 1]])
    }

    #[test]
    fn restrict_examples() {
        let x = Polynomial::var(2, 2, 0);
        let y = Polynomial::var(2, 2, 1);
        // full space: identity change of basis
        let f = x.mul(&y).unwrap();
        let full = Subspace::full(2, 2);
        assert_eq!(restrict_to_subspace(&f, &full).unwrap(), {
            let a = Polynomial::var(2, 2, 0);
            let b = Polynomial::var(2, 2, 1);
            a.mul(&b).unwrap()
        });
        // xy on span{(1,1)}: λ^2
        let c = diag_c();
        let lam = Polynomial::var(2, 1, 0);
        assert_eq!(restrict_to_subspace(&f, &c).unwrap(), lam.mul(&lam).unwrap());
        // x+y on span{(1,0)}: λ
        let e1 = Subspace::from_spanning(2, 2, vec![vec![1, 0]]);
        assert_eq!(
            restrict_to_subspace(&x.add(&y).unwrap(), &e1).unwrap(),
            lam
        );
    }

    #[test]
    fn restriction_is_algebra_map() {
        let x = Polynomial::var(3, 2, 0);
        let y = Polynomial::var(3, 2, 1);
        let u = Subspace::from_spanning(3, 2, vec![vec![1, 2]]);
        let f = x.add(&y.scale(2)).unwrap();
        let g = x.mul(&y).unwrap().add(&x).unwrap();
        let lhs = restrict_to_subspace(&f.mul(&g).unwrap(), &u).unwrap();
        let rhs = restrict_to_subspace(&f, &u)
            .unwrap()
            .mul(&restrict_to_subspace(&g, &u).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coaction_constant() {
        let g = swap_group();
        let f = Polynomial::one(2, 2);
        let psi = coaction(&f, &diag_c(), g.elements()).unwrap();
        assert_eq!(psi.pairs.len(), 1);
        assert_eq!(psi.pairs[&Monomial::one(1)], f);
    }

    #[test]
    fn coaction_linear_cancels_in_char2() {
        // (x+μ)+(y+μ) = x+y: the two copies of μ cancel
        let g = swap_group();
        let x = Polynomial::var(2, 2, 0);
        let y = Polynomial::var(2, 2, 1);
        let f = x.add(&y).unwrap();
        let psi = coaction(&f, &diag_c(), g.elements()).unwrap();
        assert_eq!(psi.pairs.len(), 1);
        assert_eq!(psi.pairs[&Monomial::one(1)], f);
    }

    #[test]
    fn coaction_xy_expansion() {
        // (x+μ)(y+μ) = xy + μ(x+y) + μ²
        let g = swap_group();
        let x = Polynomial::var(2, 2, 0);
        let y = Polynomial::var(2, 2, 1);
        let f = x.mul(&y).unwrap();
        let psi = coaction(&f, &diag_c(), g.elements()).unwrap();
        assert_eq!(psi.pairs.len(), 3);
        assert_eq!(psi.pairs[&Monomial::one(1)], f);
        assert_eq!(psi.pairs[&Monomial(vec![1])], x.add(&y).unwrap());
        assert_eq!(psi.pairs[&Monomial(vec![2])], Polynomial::one(2, 2));
    }

    #[test]
    fn coaction_requires_c_in_fixed_space() {
        let g = swap_group();
        let e1 = Subspace::from_spanning(2, 2, vec![vec![1, 0]]);
        let f = Polynomial::one(2, 2);
        assert!(matches!(
            coaction(&f, &e1, g.elements()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn coaction_is_algebra_map() {
        let g = swap_group();
        let c = diag_c();
        let x = Polynomial::var(2, 2, 0);
        let y = Polynomial::var(2, 2, 1);
        let f = x.add(&y).unwrap();
        let h = x.mul(&y).unwrap();
        let lhs = coaction(&f.mul(&h).unwrap(), &c, g.elements()).unwrap();
        let rhs = coaction(&f, &c, g.elements())
            .unwrap()
            .mul(&coaction(&h, &c, g.elements()).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn counit_examples() {
        let g = swap_group();
        let c = diag_c();
        assert!(counit_check(&Polynomial::one(2, 2), &c, g.elements()).unwrap());
        let x = Polynomial::var(2, 2, 0);
        let y = Polynomial::var(2, 2, 1);
        assert!(counit_check(&x.mul(&y).unwrap(), &c, g.elements()).unwrap());
    }

    #[test]
    fn coassociativity_examples() {
        let g = swap_group();
        let c = diag_c();
        assert!(coassociativity_check(&Polynomial::one(2, 2), &c, g.elements()).unwrap());
        let x = Polynomial::var(2, 2, 0);
        let y = Polynomial::var(2, 2, 1);
        assert!(coassociativity_check(&x.mul(&y).unwrap(), &c, g.elements()).unwrap());
    }

    #[test]
    fn comodule_identities_on_invariant_basis() {
        // counit and coassociativity for every P-invariant up to degree 6
        let g = swap_group();
        let c = diag_c();
        let inv = crate::invariants::invariant_basis_up_to(&g, 6).unwrap();
        for d in 0..=6u32 {
            for f in &inv.basis(d).polys {
                assert!(counit_check(f, &c, g.elements()).unwrap());
                assert!(coassociativity_check(f, &c, g.elements()).unwrap());
            }
        }
    }
}
