//! Finite subgroups of GL_n(F_p): enumeration from generators, Sylow
//! p-subgroups, fixed subspaces, pointwise stabilizers, and the subspace
//! lattice of V = F_p^n.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::MatFp;
use crate::poly::Polynomial;

/// Default closure cap: |GL_2(F_7)| with headroom.
pub const DEFAULT_ORDER_CAP: usize = 20736;

pub const DEFAULT_SUBSPACE_CAP: u64 = 4096;

/// A finite subgroup of GL_n(F_p) with its full element list.
///
/// Elements are stored in BFS order from the identity with generators applied
/// in sorted order, so the list is deterministic for a given generator set.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    p: u32,
    n: usize,
    generators: Vec<MatFp>,
    elements: Vec<MatFp>,
    index: HashMap<MatFp, usize>,
}

/// A subgroup given by its member elements (a subset of some parent group).
#[derive(Debug, Clone)]
pub struct SubgroupHandle {
    elements: Vec<MatFp>,
    parent_order: usize,
}

impl SubgroupHandle {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn elements(&self) -> &[MatFp] {
        &self.elements
    }

    pub fn contains(&self, g: &MatFp) -> bool {
        self.elements.contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Reinterpret the subgroup as a stand-alone group.
    pub fn as_group(&self, p: u32, n: usize) -> MatrixGroup {
        let gens = self.elements.clone();
        MatrixGroup::enumerate(p, n, gens, self.elements.len().max(1))
            .expect("subgroup closure within its own order")
    }
}

impl MatrixGroup {
    /// Breadth-first closure of the generators under multiplication.
    pub fn enumerate(p: u32, n: usize, mut generators: Vec<MatFp>, cap: usize) -> Result<Self> {
        for g in &generators {
            if g.nrows() != n || g.ncols() != n || g.p() != p {
                return Err(Error::Structural(format!(
                    "generator is {}x{} over F_{}, expected {n}x{n} over F_{p}",
                    g.nrows(),
                    g.ncols(),
                    g.p()
                )));
            }
            if g.inverse().is_none() {
                return Err(Error::Structural("singular generator".into()));
            }
        }
        generators.sort();
        generators.dedup();
        let id = MatFp::identity(p, n);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut frontier = 0usize;
        while frontier < elements.len() {
            let cur = elements[frontier].clone();
            frontier += 1;
            for g in &generators {
                let next = g.mul(&cur);
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
        }
        Ok(MatrixGroup {
            p,
            n,
            generators,
            elements,
            index,
        })
    }

    pub fn trivial(p: u32, n: usize) -> Self {
        Self::enumerate(p, n, vec![], 1).expect("trivial group")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[MatFp] {
        &self.generators
    }

    pub fn elements(&self) -> &[MatFp] {
        &self.elements
    }

    pub fn contains(&self, g: &MatFp) -> bool {
        self.index.contains_key(g)
    }

    pub fn element_order(&self, g: &MatFp) -> usize {
        let id = MatFp::identity(self.p, self.n);
        let mut acc = g.clone();
        let mut k = 1;
        while acc != id {
            acc = acc.mul(g);
            k += 1;
            assert!(k <= self.order(), "element order exceeds group order");
        }
        k
    }

    /// Largest power of p dividing the group order.
    pub fn sylow_order(&self) -> usize {
        let mut m = self.order();
        let mut s = 1;
        while m % self.p as usize == 0 {
            m /= self.p as usize;
            s *= self.p as usize;
        }
        s
    }

    /// Brute-force Sylow p-subgroup: start from a p-element of maximal order
    /// and repeatedly adjoin normalizing p-elements. When p does not divide
    /// |G| this is the trivial subgroup.
    pub fn sylow_subgroup(&self) -> SubgroupHandle {
        let target = self.sylow_order();
        let id = MatFp::identity(self.p, self.n);
        if target == 1 {
            return SubgroupHandle {
                elements: vec![id],
                parent_order: self.order(),
            };
        }
        let p_elements: Vec<&MatFp> = self
            .elements
            .iter()
            .filter(|g| is_power_of(self.element_order(g), self.p as usize))
            .collect();
        let seed = p_elements
            .iter()
            .max_by_key(|g| self.element_order(g))
            .expect("p divides |G|, so a nontrivial p-element exists");
        let mut sub = self.closure_of(&[(*seed).clone()]);
        while sub.len() < target {
            let grown = p_elements.iter().find(|g| {
                !sub.contains(g)
                    && sub.iter().all(|h| {
                        let conj = g.mul(h).mul(&g.inverse().expect("invertible"));
                        sub.contains(&conj)
                    })
            });
            let g = grown.expect("a p-subgroup below Sylow order is normalized by an outside p-element");
            let mut gens = sub.clone();
            gens.push((*g).clone());
            sub = self.closure_of(&gens);
            debug_assert!(is_power_of(sub.len(), self.p as usize));
        }
        SubgroupHandle {
            elements: sub,
            parent_order: self.order(),
        }
    }

    /// Closure of a subset of this group's elements, in deterministic order.
    pub fn closure_of(&self, gens: &[MatFp]) -> Vec<MatFp> {
        let mut gens = gens.to_vec();
        gens.sort();
        gens.dedup();
        let id = MatFp::identity(self.p, self.n);
        let mut out = vec![id.clone()];
        let mut seen: HashMap<MatFp, ()> = HashMap::new();
        seen.insert(id, ());
        let mut frontier = 0;
        while frontier < out.len() {
            let cur = out[frontier].clone();
            frontier += 1;
            for g in &gens {
                let next = g.mul(&cur);
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), ());
                    out.push(next);
                }
            }
        }
        out
    }

    pub fn subgroup_from(&self, elements: Vec<MatFp>) -> SubgroupHandle {
        SubgroupHandle {
            elements,
            parent_order: self.order(),
        }
    }

    /// Whole group as a subgroup handle.
    pub fn full_subgroup(&self) -> SubgroupHandle {
        SubgroupHandle {
            elements: self.elements.clone(),
            parent_order: self.order(),
        }
    }

    /// Pointwise stabilizer G_U = {g ∈ G | g·u = u for all u ∈ U}.
    pub fn pointwise_stabilizer(&self, u: &Subspace) -> SubgroupHandle {
        let members: Vec<MatFp> = self
            .elements
            .iter()
            .filter(|g| {
                u.basis_rows()
                    .iter()
                    .all(|v| g.mat_vec(v) == *v)
            })
            .cloned()
            .collect();
        SubgroupHandle {
            elements: members,
            parent_order: self.order(),
        }
    }

    /// Left coset representatives of H in G, first-seen order.
    pub fn left_coset_reps(&self, h: &SubgroupHandle) -> Vec<MatFp> {
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for (i, g) in self.elements.iter().enumerate() {
            if covered[i] {
                continue;
            }
            reps.push(g.clone());
            for hh in h.elements() {
                let gh = g.mul(hh);
                let idx = *self.index.get(&gh).expect("H must lie inside G");
                covered[idx] = true;
            }
        }
        reps
    }

    /// If every generator is a permutation matrix, the variable permutations
    /// induced by the dual action of each group element.
    pub fn variable_permutations(&self) -> Option<Vec<Vec<usize>>> {
        self.elements
            .iter()
            .map(|g| variable_permutation(g))
            .collect()
    }
}

/// If g is a permutation matrix, the permutation σ with g·x_i = x_{σ(i)}
/// under the dual action (substitution by g⁻¹).
pub fn variable_permutation(g: &MatFp) -> Option<Vec<usize>> {
    let n = g.nrows();
    let inv = g.inverse()?;
    let mut sigma = vec![usize::MAX; n];
    for i in 0..n {
        let mut hit = None;
        for j in 0..n {
            match inv.get(i, j) {
                0 => {}
                1 if hit.is_none() => hit = Some(j),
                _ => return None,
            }
        }
        sigma[i] = hit?;
    }
    Some(sigma)
}

fn is_power_of(mut m: usize, p: usize) -> bool {
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// A subspace of F_p^n in canonical reduced-row-echelon form, so equal
/// subspaces compare equal bitwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u32,
    n: usize,
    basis: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn from_spanning(p: u32, n: usize, rows: Vec<Vec<u32>>) -> Self {
        let mut m = MatFp::from_rows(p, rows);
        let pivots = m.rref();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace { p, n, basis }
    }

    pub fn zero(p: u32, n: usize) -> Self {
        Subspace {
            p,
            n,
            basis: vec![],
        }
    }

    pub fn full(p: u32, n: usize) -> Self {
        Subspace {
            p,
            n,
            basis: MatFp::identity(p, n).rows_vec(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_rows(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        let mut rs = crate::linalg::RowSpace::new(self.p, self.n);
        for r in &self.basis {
            rs.insert(r);
        }
        rs.contains(v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains_vector(v))
    }

    /// All p^dim vectors of the subspace.
    pub fn vectors(&self) -> Vec<Vec<u32>> {
        let d = self.dim();
        let mut out = Vec::with_capacity((self.p as usize).pow(d as u32));
        let mut coeffs = vec![0u32; d];
        loop {
            let mut v = vec![0u32; self.n];
            for (c, row) in coeffs.iter().zip(&self.basis) {
                for (vi, &ri) in v.iter_mut().zip(row) {
                    *vi = (*vi + c * ri) % self.p;
                }
            }
            out.push(v);
            // odometer
            let mut k = 0;
            loop {
                if k == d {
                    return out;
                }
                coeffs[k] += 1;
                if coeffs[k] < self.p {
                    break;
                }
                coeffs[k] = 0;
                k += 1;
            }
        }
    }
}

/// Common fixed subspace of a set of matrices: ∩ ker(g − I), echelonized.
pub fn fixed_subspace(p: u32, n: usize, elements: &[MatFp]) -> Subspace {
    let mut rows = Vec::new();
    for g in elements {
        for i in 0..n {
            let mut row = vec![0u32; n];
            for j in 0..n {
                let mut v = g.get(i, j);
                if i == j {
                    v = crate::field::subm(v, 1, p);
                }
                row[j] = v;
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Subspace::full(p, n);
    }
    let m = MatFp::from_rows(p, rows);
    Subspace::from_spanning(p, n, m.kernel_basis())
}

/// Gaussian binomial [n choose s]_p.
pub fn gaussian_binomial(p: u64, n: u64, s: u64) -> u64 {
    if s > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..s {
        num *= (p as u128).pow((n - i) as u32) - 1;
        den *= (p as u128).pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

/// All s-dimensional subspaces of F_p^n, as canonical echelon bases, in a
/// deterministic order (pivot-column combinations, then free entries).
pub fn subspaces_of_dim(p: u32, n: usize, s: usize, cap: u64) -> Result<Vec<Subspace>> {
    assert!(s <= n);
    let count = gaussian_binomial(p as u64, n as u64, s as u64);
    if count > cap {
        return Err(Error::TooManySubspaces { count, cap });
    }
    if s == 0 {
        return Ok(vec![Subspace::zero(p, n)]);
    }
    let mut out = Vec::with_capacity(count as usize);
    for pivots in combinations(n, s) {
        // free positions: (row r, col c) with c > pivots[r] and c not a pivot
        let mut free = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in (pc + 1)..n {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let total = (p as u64).pow(free.len() as u32);
        for mut code in 0..total {
            let mut basis = vec![vec![0u32; n]; s];
            for (r, &pc) in pivots.iter().enumerate() {
                basis[r][pc] = 1;
            }
            for &(r, c) in &free {
                basis[r][c] = (code % p as u64) as u32;
                code /= p as u64;
            }
            out.push(Subspace { p, n, basis });
        }
    }
    debug_assert_eq!(out.len() as u64, count);
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Dual action of a group element on a polynomial: (g·f)(v) = f(g⁻¹·v),
/// i.e. substitution by the inverse matrix.
pub fn act_on_polynomial(g: &MatFp, f: &Polynomial) -> Result<Polynomial> {
    if g.ncols() != f.nvars() || g.p() != f.p() {
        return Err(Error::Structural(
            "group element and polynomial dimensions differ".into(),
        ));
    }
    let inv = g
        .inverse()
        .ok_or_else(|| Error::Structural("singular matrix cannot act".into()))?;
    f.apply_linear_substitution(&inv.rows_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn swap2() -> MatFp {
        MatFp::from_rows(2, vec![vec![0, 1], vec![1, 0]])
    }

    fn order3() -> MatFp {
        MatFp::from_rows(2, vec![vec![0, 1], vec![1, 1]])
    }

    #[test]
    fn enumerate_orders() {
        let g = MatrixGroup::enumerate(2, 2, vec![swap2()], 100).unwrap();
        assert_eq!(g.order(), 2);
        let g = MatrixGroup::enumerate(2, 2, vec![order3()], 100).unwrap();
        assert_eq!(g.order(), 3);
        let g = MatrixGroup::enumerate(2, 2, vec![swap2(), order3()], 100).unwrap();
        assert_eq!(g.order(), 6); // GL_2(F_2)
    }

    #[test]
    fn singular_generator_rejected() {
        let s = MatFp::from_rows(2, vec![vec![1, 1], vec![1, 1]]);
        assert!(MatrixGroup::enumerate(2, 2, vec![s], 100).is_err());
    }

    #[test]
    fn cap_enforced() {
        let g = MatrixGroup::enumerate(2, 2, vec![swap2(), order3()], 5);
        assert!(matches!(g, Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn closure_property() {
        let g = MatrixGroup::enumerate(2, 2, vec![swap2(), order3()], 100).unwrap();
        for a in g.elements() {
            for b in g.elements() {
                assert!(g.contains(&a.mul(b)));
            }
            assert!(g.contains(&a.inverse().unwrap()));
        }
    }

    #[test]
    fn sylow_examples() {
        let gl2 = MatrixGroup::enumerate(2, 2, vec![swap2(), order3()], 100).unwrap();
        let syl = gl2.sylow_subgroup();
        assert_eq!(syl.order(), 2);
        assert_eq!(gl2.order() % syl.order(), 0);

        let triv = MatrixGroup::trivial(2, 2);
        assert_eq!(triv.sylow_subgroup().order(), 1);

        let z3 = MatrixGroup::enumerate(2, 2, vec![order3()], 100).unwrap();
        assert_eq!(z3.sylow_subgroup().order(), 1); // p = 2 does not divide 3
    }

    #[test]
    fn fixed_subspace_examples() {
        let full = fixed_subspace(2, 2, &[MatFp::identity(2, 2)]);
        assert_eq!(full.dim(), 2);

        let f = fixed_subspace(2, 2, &[swap2()]);
        assert_eq!(f.dim(), 1);
        assert!(f.contains_vector(&[1, 1]));

        let z3 = MatrixGroup::enumerate(2, 2, vec![order3()], 100).unwrap();
        let f = fixed_subspace(2, 2, z3.elements());
        assert_eq!(f.dim(), 0);
    }

    #[test]
    fn pointwise_stabilizer_examples() {
        let g = MatrixGroup::enumerate(2, 2, vec![swap2()], 100).unwrap();
        let zero = Subspace::zero(2, 2);
        assert_eq!(g.pointwise_stabilizer(&zero).order(), 2);

        let diag = Subspace::from_spanning(2, 2, vec![vec![1, 1]]);
        assert_eq!(g.pointwise_stabilizer(&diag).order(), 2);

        let e1 = Subspace::from_spanning(2, 2, vec![vec![1, 0]]);
        assert_eq!(g.pointwise_stabilizer(&e1).order(), 1);
    }

    #[test]
    fn stabilizer_monotone() {
        let g = MatrixGroup::enumerate(2, 2, vec![swap2(), order3()], 100).unwrap();
        for u in subspaces_of_dim(2, 2, 1, 100).unwrap() {
            let gu = g.pointwise_stabilizer(&u);
            let gv = g.pointwise_stabilizer(&Subspace::full(2, 2));
            for e in gv.elements() {
                assert!(gu.contains(e));
            }
        }
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(subspaces_of_dim(2, 2, 1, 100).unwrap().len(), 3);
        assert_eq!(subspaces_of_dim(2, 2, 2, 100).unwrap().len(), 1);
        assert_eq!(subspaces_of_dim(3, 2, 1, 100).unwrap().len(), 4);
        assert_eq!(gaussian_binomial(2, 4, 2), 35);
        assert!(matches!(
            subspaces_of_dim(2, 6, 3, 100),
            Err(Error::TooManySubspaces { .. })
        ));
    }

    #[test]
    fn action_examples() {
        let f = Polynomial::var(2, 2, 0);
        let id = MatFp::identity(2, 2);
        assert_eq!(act_on_polynomial(&id, &f).unwrap(), f);

        let g = swap2();
        assert_eq!(act_on_polynomial(&g, &f).unwrap(), Polynomial::var(2, 2, 1));
    }

    #[test]
    fn action_is_left_action() {
        let gl2 = MatrixGroup::enumerate(2, 2, vec![swap2(), order3()], 100).unwrap();
        let x = Polynomial::var(2, 2, 0);
        let y = Polynomial::var(2, 2, 1);
        let f = x.mul(&x).unwrap().add(&x.mul(&y).unwrap()).unwrap();
        for g in gl2.elements() {
            for h in gl2.elements() {
                let lhs = act_on_polynomial(g, &act_on_polynomial(h, &f).unwrap()).unwrap();
                let rhs = act_on_polynomial(&g.mul(h), &f).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn coset_reps_partition() {
        let gl2 = MatrixGroup::enumerate(2, 2, vec![swap2(), order3()], 100).unwrap();
        let syl = gl2.sylow_subgroup();
        let reps = gl2.left_coset_reps(&syl);
        assert_eq!(reps.len() * syl.order(), gl2.order());
    }

    #[test]
    fn variable_permutations_detected() {
        let g = MatrixGroup::enumerate(2, 2, vec![swap2()], 100).unwrap();
        let perms = g.variable_permutations().unwrap();
        assert!(perms.contains(&vec![1, 0]));
        let gl2 = MatrixGroup::enumerate(2, 2, vec![swap2(), order3()], 100).unwrap();
        assert!(gl2.variable_permutations().is_none());
    }
}
