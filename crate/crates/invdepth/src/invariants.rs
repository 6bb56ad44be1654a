//! Degree-by-degree computation of F[V]^G: invariant bases, Hilbert
//! coefficients, minimal algebra generators, Dickson invariants, and the
//! relative transfer.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::invm;
use crate::linalg::{MatFp, RowSpace};
use crate::matgroup::{act_on_polynomial, MatrixGroup, SubgroupHandle};
use crate::poly::{monomial_basis, monomial_count, Monomial, Polynomial};

/// Hard cap on the dimension of a single graded piece fed to linear algebra.
pub const DEFAULT_LINALG_CAP: u64 = 40_000;

/// Cap on p^n for the Dickson orbit-product expansion.
pub const DICKSON_POINT_CAP: u64 = 32;

/// Monomials of one degree with an index lookup.
pub struct MonomialIndex {
    pub monomials: Vec<Monomial>,
    map: HashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn new(n: usize, d: u32) -> Self {
        let monomials = monomial_basis(n, d);
        let map = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialIndex { monomials, map }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.map.get(m).copied()
    }

    pub fn to_vec(&self, f: &Polynomial) -> Vec<u32> {
        let mut v = vec![0u32; self.monomials.len()];
        for (m, c) in f.terms() {
            let i = self.map[m];
            v[i] = c;
        }
        v
    }

    pub fn from_vec(&self, p: u32, n: usize, v: &[u32]) -> Polynomial {
        let mut f = Polynomial::zero(p, n);
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                f.add_term(self.monomials[i].clone(), c);
            }
        }
        f
    }
}

/// RREF basis of one graded piece of an invariant ring, with the pivot
/// monomial of each basis vector. Pivot monomials are distinct and each
/// appears with coefficient 1 in its own vector and 0 in all others, so
/// coordinates of an invariant can be read off at the pivots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBasis {
    pub polys: Vec<Polynomial>,
    pub pivots: Vec<Monomial>,
}

impl DegreeBasis {
    pub fn dim(&self) -> usize {
        self.polys.len()
    }
}

/// Per-degree bases of (F[V]^G)_d for d = 0..=max_degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantBasis {
    pub p: u32,
    pub n: usize,
    pub bases: Vec<DegreeBasis>,
}

impl InvariantBasis {
    pub fn max_degree(&self) -> u32 {
        (self.bases.len() - 1) as u32
    }

    pub fn basis(&self, d: u32) -> &DegreeBasis {
        &self.bases[d as usize]
    }

    pub fn dim(&self, d: u32) -> usize {
        self.bases[d as usize].dim()
    }

    /// Coordinates of a homogeneous invariant with respect to the stored
    /// basis of its degree, or None if it does not lie in the span.
    pub fn coordinates(&self, f: &Polynomial) -> Option<Vec<u32>> {
        if f.is_zero() {
            return Some(vec![]);
        }
        let d = f.degree()?;
        if !f.is_homogeneous() || d > self.max_degree() {
            return None;
        }
        let basis = self.basis(d);
        let coords: Vec<u32> = basis.pivots.iter().map(|m| f.coefficient(m)).collect();
        // verify membership
        let mut residual = f.clone();
        for (c, b) in coords.iter().zip(&basis.polys) {
            if *c != 0 {
                residual = residual.sub(&b.scale(*c)).expect("compatible");
            }
        }
        if residual.is_zero() {
            Some(coords)
        } else {
            None
        }
    }

    pub fn hilbert_coefficients(&self) -> Vec<u64> {
        self.bases.iter().map(|b| b.dim() as u64).collect()
    }
}

/// Basis of (F[V]^G)_d as the kernel of the stacked maps (g_i* − 1) over the
/// generators; kernel for the generators equals kernel for the whole group.
///
/// When every group element permutes the variables, the basis is computed as
/// monomial orbit sums instead, which is exact in any characteristic and
/// avoids the dense kernel entirely.
pub fn invariant_basis(group: &MatrixGroup, d: u32) -> Result<DegreeBasis> {
    invariant_basis_of_generators(group.p(), group.n(), group.generators(), d)
}

pub fn invariant_basis_of_generators(
    p: u32,
    n: usize,
    gens: &[MatFp],
    d: u32,
) -> Result<DegreeBasis> {
    let dim = monomial_count(n, d);
    if dim > DEFAULT_LINALG_CAP {
        return Err(Error::Capacity(format!(
            "degree-{d} piece has dimension {dim}, beyond the linear-algebra cap"
        )));
    }
    if gens.is_empty() {
        let monos = monomial_basis(n, d);
        let polys = monos
            .iter()
            .map(|m| Polynomial::monomial(p, m.clone(), 1))
            .collect();
        return Ok(DegreeBasis {
            polys,
            pivots: monos,
        });
    }
    let perms: Option<Vec<Vec<usize>>> = gens.iter().map(crate::matgroup::variable_permutation).collect();
    if let Some(perms) = perms {
        return Ok(orbit_sum_basis(p, n, &perms, d));
    }

    let idx = MonomialIndex::new(n, d);
    let m = idx.len();
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(gens.len() * m);
    for g in gens {
        // row block of (g* - 1) acting on the monomial coordinates
        let mut block = vec![vec![0u32; m]; m];
        for (j, mono) in idx.monomials.iter().enumerate() {
            let f = Polynomial::monomial(p, mono.clone(), 1);
            let gf = act_on_polynomial(g, &f)?;
            for (mm, c) in gf.terms() {
                let i = idx.position(mm).expect("degree preserved");
                block[i][j] = c;
            }
            block[j][j] = crate::field::subm(block[j][j], 1, p);
        }
        rows.extend(block);
    }
    let a = MatFp::from_rows(p, rows);
    let kernel = a.kernel_basis();
    // echelonize the kernel vectors
    let mut km = MatFp::from_rows(p, kernel);
    let pivots_idx = km.rref();
    let mut polys = Vec::new();
    let mut pivots = Vec::new();
    for (r, &c) in pivots_idx.iter().enumerate() {
        polys.push(idx.from_vec(p, n, km.row(r)));
        pivots.push(idx.monomials[c].clone());
    }
    Ok(DegreeBasis { polys, pivots })
}

/// Orbit sums of monomials under a group acting by variable permutations.
fn orbit_sum_basis(p: u32, n: usize, gen_perms: &[Vec<usize>], d: u32) -> DegreeBasis {
    let monos = monomial_basis(n, d);
    let mut seen: HashMap<Monomial, ()> = HashMap::new();
    let mut polys = Vec::new();
    let mut pivots = Vec::new();
    for m in &monos {
        if seen.contains_key(m) {
            continue;
        }
        // BFS orbit under the generator permutations
        let mut orbit = vec![m.clone()];
        seen.insert(m.clone(), ());
        let mut frontier = 0;
        while frontier < orbit.len() {
            let cur = orbit[frontier].clone();
            frontier += 1;
            for sigma in gen_perms {
                let mut e = vec![0u16; n];
                for (i, &s) in sigma.iter().enumerate() {
                    e[s] = cur.0[i];
                }
                let img = Monomial(e);
                if !seen.contains_key(&img) {
                    seen.insert(img.clone(), ());
                    orbit.push(img);
                }
            }
        }
        let f = Polynomial::from_terms(p, n, orbit.into_iter().map(|mm| (mm, 1)));
        pivots.push(m.clone());
        polys.push(f);
    }
    DegreeBasis { polys, pivots }
}

/// Invariant basis for all degrees 0..=max_degree.
pub fn invariant_basis_up_to(group: &MatrixGroup, max_degree: u32) -> Result<InvariantBasis> {
    let bases = (0..=max_degree)
        .map(|d| invariant_basis(group, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantBasis {
        p: group.p(),
        n: group.n(),
        bases,
    })
}

pub fn subgroup_invariant_basis_up_to(
    p: u32,
    n: usize,
    sub: &SubgroupHandle,
    max_degree: u32,
) -> Result<InvariantBasis> {
    let g = sub.as_group(p, n);
    invariant_basis_up_to(&g, max_degree)
}

pub fn hilbert_coefficients(group: &MatrixGroup, max_degree: u32) -> Result<Vec<u64>> {
    Ok(invariant_basis_up_to(group, max_degree)?.hilbert_coefficients())
}

/// Minimal algebra generators up to a degree cap: at each degree, a basis of
/// the invariants modulo products of lower-degree invariants, chosen greedily
/// in the deterministic basis order.
pub fn minimal_generators(
    group: &MatrixGroup,
    max_degree: u32,
) -> Result<Vec<(u32, Polynomial)>> {
    let inv = invariant_basis_up_to(group, max_degree)?;
    minimal_generators_of(&inv)
}

pub fn minimal_generators_of(inv: &InvariantBasis) -> Result<Vec<(u32, Polynomial)>> {
    let p = inv.p;
    let n = inv.n;
    let mut out = Vec::new();
    for d in 1..=inv.max_degree() {
        let idx = MonomialIndex::new(n, d);
        let mut span = RowSpace::new(p, idx.len());
        for a in 1..d {
            for f in &inv.basis(a).polys {
                for g in &inv.basis(d - a).polys {
                    let prod = f.mul(g)?;
                    span.insert(&idx.to_vec(&prod));
                }
            }
        }
        for f in &inv.basis(d).polys {
            if span.insert(&idx.to_vec(f)) {
                out.push((d, f.clone()));
            }
        }
    }
    Ok(out)
}

/// The n Dickson invariants of GL_n(F_p), of algebraic degrees p^n − p^i for
/// i = n−1,…,0 (listed by increasing degree). Computed from the orbit
/// product Π_{v ∈ V*} (X + v) = Σ_i (−1)^{n−i} d_{n,i} X^{p^i}.
pub fn dickson_invariants(p: u32, n: usize) -> Result<Vec<Polynomial>> {
    let points = (p as u64).pow(n as u32);
    if points > DICKSON_POINT_CAP {
        return Err(Error::Capacity(format!(
            "Dickson orbit product over {points} linear forms exceeds cap"
        )));
    }
    // work in n+1 variables; the last one is the auxiliary X
    let nv = n + 1;
    let x_aux = Polynomial::var(p, nv, n);
    let mut prod = Polynomial::one(p, nv);
    // all linear forms Σ c_i x_i, including zero
    let mut coeffs = vec![0u32; n];
    loop {
        let mut factor = x_aux.clone();
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                factor.add_term(Monomial::var(nv, i), c);
            }
        }
        prod = prod.mul(&factor)?;
        let mut k = 0;
        loop {
            if k == n {
                // extract coefficients of X^{p^i}
                let mut out = Vec::new();
                for i in (0..n).rev() {
                    let xe = (p as u64).pow(i as u32) as u16;
                    let mut di = Polynomial::zero(p, n);
                    for (m, c) in prod.terms() {
                        if m.0[n] == xe {
                            let mm = Monomial(m.0[..n].to_vec());
                            di.add_term(mm, c);
                        }
                    }
                    // sign (−1)^{n−i}
                    if (n - i) % 2 == 1 {
                        di = di.neg();
                    }
                    out.push(di);
                }
                return Ok(out);
            }
            coeffs[k] += 1;
            if coeffs[k] < p {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
    }
}

/// Relative transfer Tr^G_H(f) = Σ_{gH ∈ G/H} g·f for an H-invariant f.
pub fn transfer(group: &MatrixGroup, h: &SubgroupHandle, f: &Polynomial) -> Result<Polynomial> {
    for e in h.elements() {
        if act_on_polynomial(e, f)? != *f {
            return Err(Error::Precondition(
                "transfer input is not invariant under the subgroup".into(),
            ));
        }
    }
    let reps = group.left_coset_reps(h);
    let mut out = Polynomial::zero(group.p(), group.n());
    for g in &reps {
        out = out.add(&act_on_polynomial(g, f)?)?;
    }
    for g in group.generators() {
        if act_on_polynomial(g, &out)? != out {
            return Err(Error::Inconsistency(
                "transfer output failed the G-invariance check".into(),
            ));
        }
    }
    Ok(out)
}

/// Rank of the averaging projector (1/|G|)Σ_g g* on F[V]_d. Only valid in
/// the nonmodular regime p ∤ |G|; used as an independent Hilbert oracle.
pub fn averaging_projector_rank(group: &MatrixGroup, d: u32) -> Result<usize> {
    let p = group.p();
    if group.order() % p as usize == 0 {
        return Err(Error::Precondition(
            "averaging projector requires p not dividing |G|".into(),
        ));
    }
    let n = group.n();
    let idx = MonomialIndex::new(n, d);
    let m = idx.len();
    let inv_order = invm(group.order() as u32 % p, p);
    let mut mat = vec![vec![0u32; m]; m];
    for (j, mono) in idx.monomials.iter().enumerate() {
        let f = Polynomial::monomial(p, mono.clone(), 1);
        let mut acc = Polynomial::zero(p, n);
        for g in group.elements() {
            acc = acc.add(&act_on_polynomial(g, &f)?)?;
        }
        for (mm, c) in acc.terms() {
            let i = idx.position(mm).expect("degree preserved");
            mat[i][j] = crate::field::mulm(c, inv_order, p);
        }
    }
    Ok(MatFp::from_rows(p, mat).rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::MatrixGroup;

    fn swap_group() -> MatrixGroup {
        let s = MatFp::from_rows(2, vec![vec![0, 1], vec![1, 0]]);
        MatrixGroup::enumerate(2, 2, vec![s], 100).unwrap()
    }

    fn z3_in_gl2f2() -> MatrixGroup {
        let a = MatFp::from_rows(2, vec![vec![0, 1], vec![1, 1]]);
        MatrixGroup::enumerate(2, 2, vec![a], 100).unwrap()
    }

    fn gl2f2() -> MatrixGroup {
        let s = MatFp::from_rows(2, vec![vec![0, 1], vec![1, 0]]);
        let a = MatFp::from_rows(2, vec![vec![0, 1], vec![1, 1]]);
        MatrixGroup::enumerate(2, 2, vec![s, a], 100).unwrap()
    }

    #[test]
    fn trivial_group_full_basis() {
        let g = MatrixGroup::trivial(2, 2);
        let b = invariant_basis(&g, 3).unwrap();
        assert_eq!(b.dim(), 4);
    }

    #[test]
    fn swap_degree1_and_2() {
        let g = swap_group();
        let b1 = invariant_basis(&g, 1).unwrap();
        assert_eq!(b1.dim(), 1);
        let x = Polynomial::var(2, 2, 0);
        let y = Polynomial::var(2, 2, 1);
        assert_eq!(b1.polys[0], x.add(&y).unwrap());

        let b2 = invariant_basis(&g, 2).unwrap();
        assert_eq!(b2.dim(), 2);
    }

    #[test]
    fn brute_force_kernel_agrees_with_orbit_sums() {
        // same group with the non-permutation path forced by composing with a
        // change of basis and back is hard to arrange; instead check every
        // orbit-sum basis element is generator-fixed and dimensions match the
        // dense kernel computed directly
        let g = swap_group();
        for d in 0..=6u32 {
            let b = invariant_basis(&g, d).unwrap();
            for f in &b.polys {
                for gen in g.generators() {
                    assert_eq!(act_on_polynomial(gen, f).unwrap(), *f);
                }
            }
            // dense kernel oracle
            let idx = MonomialIndex::new(2, d);
            let mut rows = Vec::new();
            for gen in g.generators() {
                for (j, mono) in idx.monomials.iter().enumerate() {
                    let f = Polynomial::monomial(2, mono.clone(), 1);
                    let gf = act_on_polynomial(gen, &f).unwrap();
                    let mut col = idx.to_vec(&gf);
                    col[j] = crate::field::subm(col[j], 1, 2);
                    rows.push(col);
                }
            }
            // rows here are columns of (g*-1); transpose irrelevant for nullity
            let a = MatFp::from_rows(2, rows);
            let nullity = idx.len() - a.rank();
            assert_eq!(b.dim(), nullity, "degree {d}");
        }
    }

    #[test]
    fn hilbert_swap_series() {
        let g = swap_group();
        let h = hilbert_coefficients(&g, 6).unwrap();
        assert_eq!(h, vec![1, 1, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn hilbert_trivial() {
        let g = MatrixGroup::trivial(2, 2);
        let h = hilbert_coefficients(&g, 4).unwrap();
        assert_eq!(h, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn hilbert_z3_nonmodular() {
        let g = z3_in_gl2f2();
        let h = hilbert_coefficients(&g, 6).unwrap();
        // over the algebraic closure the action diagonalizes with weights 1, 2
        // mod 3, so the invariants are F[u^3, v^3, uv] with one relation in
        // degree 6; series (1+t^3)/((1-t^2)(1-t^3))
        assert_eq!(h, vec![1, 0, 1, 2, 1, 2, 3]);
        // cross-check: averaging projector rank, valid since 2 ∤ 3... i.e. p ∤ |G|
        for d in 0..=6u32 {
            assert_eq!(h[d as usize], averaging_projector_rank(&g, d).unwrap() as u64);
        }
    }

    #[test]
    fn minimal_generators_swap() {
        let g = swap_group();
        let gens = minimal_generators(&g, 6).unwrap();
        let degs: Vec<u32> = gens.iter().map(|(d, _)| *d).collect();
        assert_eq!(degs, vec![1, 2]);
    }

    #[test]
    fn minimal_generators_trivial() {
        let g = MatrixGroup::trivial(2, 3);
        let gens = minimal_generators(&g, 4).unwrap();
        assert_eq!(gens.len(), 3);
        assert!(gens.iter().all(|(d, _)| *d == 1));
    }

    #[test]
    fn minimal_generators_gl2f2_are_dickson_degrees() {
        let g = gl2f2();
        let gens = minimal_generators(&g, 6).unwrap();
        let degs: Vec<u32> = gens.iter().map(|(d, _)| *d).collect();
        assert_eq!(degs, vec![2, 3]);
    }

    #[test]
    fn dickson_small_cases() {
        let d = dickson_invariants(2, 1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0], Polynomial::var(2, 1, 0));

        let d = dickson_invariants(3, 1).unwrap();
        let x = Polynomial::var(3, 1, 0);
        assert_eq!(d[0], x.mul(&x).unwrap());

        let d = dickson_invariants(2, 2).unwrap();
        assert_eq!(d.iter().map(|f| f.degree().unwrap()).collect::<Vec<_>>(), vec![2, 3]);
        // d2 = x^2 + xy + y^2, d3 = x^2 y + x y^2
        let expected2 = Polynomial::from_terms(
            2,
            2,
            [(Monomial(vec![2, 0]), 1), (Monomial(vec![1, 1]), 1), (Monomial(vec![0, 2]), 1)],
        );
        let expected3 = Polynomial::from_terms(
            2,
            2,
            [(Monomial(vec![2, 1]), 1), (Monomial(vec![1, 2]), 1)],
        );
        assert_eq!(d[0], expected2);
        assert_eq!(d[1], expected3);
    }

    #[test]
    fn dickson_invariance_under_gl() {
        let g = gl2f2();
        for f in dickson_invariants(2, 2).unwrap() {
            for e in g.elements() {
                assert_eq!(act_on_polynomial(e, &f).unwrap(), f);
            }
        }
    }

    #[test]
    fn dickson_capacity() {
        assert!(dickson_invariants(2, 6).is_err());
    }

    #[test]
    fn transfer_examples() {
        let g = swap_group();
        let h = g.subgroup_from(vec![MatFp::identity(2, 2)]);
        let x = Polynomial::var(2, 2, 0);
        let y = Polynomial::var(2, 2, 1);
        // trivial subgroup: orbit sum
        assert_eq!(transfer(&g, &h, &x).unwrap(), x.add(&y).unwrap());
        // H = G: identity
        let full = g.full_subgroup();
        let e1 = x.add(&y).unwrap();
        assert_eq!(transfer(&g, &full, &e1).unwrap(), e1);
        // already G-invariant input from trivial H: [G:H]·f = 2·f = 0 in char 2
        assert_eq!(transfer(&g, &h, &e1).unwrap(), Polynomial::zero(2, 2));
        // non-invariant input rejected when H is not trivial
        assert!(transfer(&g, &full, &x).is_err());
    }

    #[test]
    fn transfer_index_identity_nonmodular() {
        // G = Z/3 over F_2: index of trivial subgroup is 3 = 1 mod 2
        let g = z3_in_gl2f2();
        let h = g.subgroup_from(vec![MatFp::identity(2, 2)]);
        let inv = invariant_basis(&g, 2).unwrap();
        for f in &inv.polys {
            let t = transfer(&g, &h, f).unwrap();
            assert_eq!(t, f.scale(3));
        }
    }

    #[test]
    fn averaging_projector_matches_basis_dim() {
        let g = z3_in_gl2f2();
        for d in 0..=6u32 {
            let rank = averaging_projector_rank(&g, d).unwrap();
            assert_eq!(rank, invariant_basis(&g, d).unwrap().dim());
        }
        let modular = swap_group();
        assert!(averaging_projector_rank(&modular, 2).is_err());
    }
}
