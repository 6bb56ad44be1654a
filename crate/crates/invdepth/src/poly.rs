//! Sparse multivariate polynomials over F_p with graded bookkeeping.
//!
//! Coefficients are canonical residues in [0, p), reduced eagerly; zero
//! coefficients are never stored. Monomials are exponent vectors of a fixed
//! length shared by every term of a polynomial.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{addm, invm, mulm, negm};

/// An exponent vector. Two monomials with equal exponent vectors are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }
}

/// Degree display convention: algebraic keeps generators in degree 1,
/// topological doubles every reported degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingConvention {
    Algebraic,
    Topological,
}

impl GradingConvention {
    pub fn display_degree(&self, d: u32) -> u32 {
        match self {
            GradingConvention::Algebraic => d,
            GradingConvention::Topological => 2 * d,
        }
    }
}

impl Default for GradingConvention {
    fn default() -> Self {
        GradingConvention::Algebraic
    }
}

/// A sparse polynomial over F_p in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    p: u32,
    nvars: usize,
    // serialized as a pair list: JSON maps require string keys
    #[serde(with = "term_list")]
    terms: BTreeMap<Monomial, u32>,
}

mod term_list {
    use super::Monomial;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<Monomial, u32>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(&Monomial, &u32)> = map.iter().collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<Monomial, u32>, D::Error> {
        let pairs = Vec::<(Monomial, u32)>::deserialize(d)?;
        Ok(pairs.into_iter().collect())
    }
}

impl Polynomial {
    pub fn zero(p: u32, nvars: usize) -> Self {
        Polynomial {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u32, nvars: usize, c: u32) -> Self {
        let mut f = Self::zero(p, nvars);
        f.add_term(Monomial::one(nvars), c);
        f
    }

    pub fn one(p: u32, nvars: usize) -> Self {
        Self::constant(p, nvars, 1)
    }

    pub fn var(p: u32, nvars: usize, i: usize) -> Self {
        let mut f = Self::zero(p, nvars);
        f.add_term(Monomial::var(nvars, i), 1);
        f
    }

    pub fn monomial(p: u32, m: Monomial, c: u32) -> Self {
        let mut f = Self::zero(p, m.nvars());
        f.add_term(m, c);
        f
    }

    pub fn from_terms<I>(p: u32, nvars: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u32)>,
    {
        let mut f = Self::zero(p, nvars);
        for (m, c) in it {
            f.add_term(m, c);
        }
        f
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Accumulate c into the coefficient of m, pruning zeros.
    pub fn add_term(&mut self, m: Monomial, c: u32) {
        debug_assert_eq!(m.nvars(), self.nvars);
        let c = c % self.p;
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = addm(*e.get(), c, self.p);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_compat(&self, other: &Polynomial) -> Result<()> {
        if self.p != other.p || self.nvars != other.nvars {
            return Err(Error::Structural(format!(
                "incompatible polynomials: ({} vars, p={}) vs ({} vars, p={})",
                self.nvars, self.p, other.nvars, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), negm(c, self.p));
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.p, self.nvars);
        for (m, c) in self.terms() {
            out.terms.insert(m.clone(), negm(c, self.p));
        }
        out
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let c = c % self.p;
        let mut out = Polynomial::zero(self.p, self.nvars);
        if c == 0 {
            return out;
        }
        for (m, a) in self.terms() {
            out.terms.insert(m.clone(), mulm(a, c, self.p));
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compat(other)?;
        let (small, big) = if self.num_terms() <= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: HashMap<Monomial, u32> =
            HashMap::with_capacity(small.num_terms() * big.num_terms() / 2 + 1);
        for (ma, ca) in small.terms() {
            for (mb, cb) in big.terms() {
                let c = mulm(ca, cb, self.p);
                let m = ma.mul(mb);
                let e = acc.entry(m).or_insert(0);
                *e = addm(*e, c, self.p);
            }
        }
        let mut out = Polynomial::zero(self.p, self.nvars);
        out.terms = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.p, self.nvars);
        let c = c % self.p;
        if c == 0 {
            return out;
        }
        for (ma, ca) in self.terms() {
            out.terms.insert(ma.mul(m), mulm(ca, c, self.p));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.p, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("compatible");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("compatible");
            }
        }
        acc
    }

    /// Total degree of the highest term, or None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.p, self.nvars);
        for (m, c) in self.terms() {
            if m.degree() == d {
                out.terms.insert(m.clone(), c);
            }
        }
        out
    }

    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in self.terms() {
            out.entry(m.degree())
                .or_insert_with(|| Polynomial::zero(self.p, self.nvars))
                .terms
                .insert(m.clone(), c);
        }
        out
    }

    /// Normalize so the leading coefficient under `cmp` is 1.
    pub fn monic(&self, cmp: impl Fn(&Monomial, &Monomial) -> std::cmp::Ordering) -> Polynomial {
        match self.leading_by(&cmp) {
            None => self.clone(),
            Some((_, c)) => self.scale(invm(c, self.p)),
        }
    }

    /// Leading term under an arbitrary monomial comparison.
    pub fn leading_by(
        &self,
        cmp: impl Fn(&Monomial, &Monomial) -> std::cmp::Ordering,
    ) -> Option<(Monomial, u32)> {
        self.terms()
            .max_by(|(a, _), (b, _)| cmp(a, b))
            .map(|(m, c)| (m.clone(), c))
    }

    /// Substitute x_i ↦ Σ_j A[i][j]·y_j where A is n×m row-major; the result
    /// lives in m variables.
    pub fn apply_linear_substitution(&self, a: &[Vec<u32>]) -> Result<Polynomial> {
        if a.len() != self.nvars {
            return Err(Error::Structural(format!(
                "substitution matrix has {} rows, polynomial has {} variables",
                a.len(),
                self.nvars
            )));
        }
        let m = if a.is_empty() { 0 } else { a[0].len() };
        if a.iter().any(|row| row.len() != m) {
            return Err(Error::Structural("ragged substitution matrix".into()));
        }
        let forms: Vec<Polynomial> = (0..self.nvars)
            .map(|i| {
                let mut f = Polynomial::zero(self.p, m);
                for (j, &c) in a[i].iter().enumerate() {
                    f.add_term(Monomial::var(m, j), c);
                }
                f
            })
            .collect();
        self.apply_substitution(&forms)
    }

    /// Substitute x_i ↦ subs[i] for arbitrary replacement polynomials, all in
    /// a common target variable set. Powers of each replacement are memoized
    /// across monomials.
    pub fn apply_substitution(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        if subs.len() != self.nvars {
            return Err(Error::Structural(format!(
                "{} substitutions for {} variables",
                subs.len(),
                self.nvars
            )));
        }
        let m = subs.first().map(|f| f.nvars()).unwrap_or(0);
        if subs.iter().any(|f| f.nvars() != m || f.p() != self.p) {
            return Err(Error::Structural(
                "substitution polynomials must share variables and characteristic".into(),
            ));
        }
        let mut pow_cache: HashMap<(usize, u16), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(self.p, m);
        for (mono, c) in self.terms() {
            let mut term = Polynomial::constant(self.p, m, c);
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powed = pow_cache
                    .entry((i, e))
                    .or_insert_with(|| subs[i].pow(e as u32))
                    .clone();
                term = term.mul(&powed)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Total Steenrod square at p = 2: Sq(x_i) = x_i + x_i², extended
    /// multiplicatively. Graded pieces of the output are the Sq^k(f).
    pub fn steenrod_total_square(&self) -> Result<Polynomial> {
        if self.p != 2 {
            return Err(Error::UnsupportedCharacteristic(format!(
                "total Steenrod square requires p = 2, got p = {}",
                self.p
            )));
        }
        let subs: Vec<Polynomial> = (0..self.nvars)
            .map(|i| {
                let mut f = Polynomial::var(2, self.nvars, i);
                let mut sq = Monomial::one(self.nvars);
                sq.0[i] = 2;
                f.add_term(sq, 1);
                f
            })
            .collect();
        self.apply_substitution(&subs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // descending lex for readability
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c != &1 || m.degree() == 0 {
                write!(f, "{c}")?;
                if m.degree() > 0 {
                    write!(f, "*")?;
                }
            }
            let mut firstv = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !firstv {
                    write!(f, "*")?;
                }
                firstv = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// All monomials of degree d in n variables, in descending lexicographic
/// order (powers of x_1 first). Count is C(d+n-1, n-1).
pub fn monomial_basis(n: usize, d: u32) -> Vec<Monomial> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut current = vec![0u16; n];
    fn rec(current: &mut Vec<u16>, pos: usize, rem: u32, out: &mut Vec<Monomial>) {
        if pos + 1 == current.len() {
            current[pos] = rem as u16;
            out.push(Monomial(current.clone()));
            return;
        }
        for e in (0..=rem).rev() {
            current[pos] = e as u16;
            rec(current, pos + 1, rem - e, out);
        }
    }
    rec(&mut current, 0, d, &mut out);
    out
}

/// C(d+n-1, n-1), the dimension of the degree-d piece of F[V].
pub fn monomial_count(n: usize, d: u32) -> u64 {
    let n = n as u64;
    let d = d as u64;
    let mut num = 1u64;
    for k in 0..(n - 1) {
        num = num * (d + n - 1 - k) / (k + 1);
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy_plus(p: u32) -> (Polynomial, Polynomial) {
        (Polynomial::var(p, 2, 0), Polynomial::var(p, 2, 1))
    }

    #[test]
    fn char2_frobenius_square() {
        let (x, y) = xy_plus(2);
        let s = x.add(&y).unwrap();
        let sq = s.mul(&s).unwrap();
        let expected = x.mul(&x).unwrap().add(&y.mul(&y).unwrap()).unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn mul_by_one_is_identity() {
        let (x, y) = xy_plus(5);
        let f = x.mul(&y).unwrap().add(&x).unwrap();
        assert_eq!(f.mul(&Polynomial::one(5, 2)).unwrap(), f);
    }

    #[test]
    fn f3_product_hand_expansion() {
        // (x+y)(xy) = x^2 y + x y^2 over F_3
        let (x, y) = xy_plus(3);
        let prod = x.add(&y).unwrap().mul(&x.mul(&y).unwrap()).unwrap();
        let mut expected = Polynomial::zero(3, 2);
        expected.add_term(Monomial(vec![2, 1]), 1);
        expected.add_term(Monomial(vec![1, 2]), 1);
        assert_eq!(prod, expected);
    }

    #[test]
    fn mismatched_vars_rejected() {
        let f = Polynomial::var(2, 2, 0);
        let g = Polynomial::var(2, 3, 0);
        assert!(f.mul(&g).is_err());
        let h = Polynomial::var(3, 2, 0);
        assert!(f.add(&h).is_err());
    }

    #[test]
    fn substitution_identity() {
        let f = Polynomial::var(5, 2, 0);
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(f.apply_linear_substitution(&id).unwrap(), f);
    }

    #[test]
    fn substitution_swap_symmetric() {
        let (x, y) = xy_plus(2);
        let f = x.mul(&y).unwrap();
        let swap = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(f.apply_linear_substitution(&swap).unwrap(), f);
    }

    #[test]
    fn substitution_frobenius_split() {
        // x^2 under x ↦ y1+y2 over F_2 gives y1^2 + y2^2
        let x = Polynomial::var(2, 1, 0);
        let f = x.mul(&x).unwrap();
        let a = vec![vec![1, 1]];
        let g = f.apply_linear_substitution(&a).unwrap();
        let mut expected = Polynomial::zero(2, 2);
        expected.add_term(Monomial(vec![2, 0]), 1);
        expected.add_term(Monomial(vec![0, 2]), 1);
        assert_eq!(g, expected);
    }

    #[test]
    fn substitution_dimension_mismatch() {
        let f = Polynomial::var(2, 2, 0);
        assert!(f.apply_linear_substitution(&[vec![1, 0]]).is_err());
    }

    #[test]
    fn monomial_basis_examples() {
        let b = monomial_basis(2, 3);
        assert_eq!(
            b,
            vec![
                Monomial(vec![3, 0]),
                Monomial(vec![2, 1]),
                Monomial(vec![1, 2]),
                Monomial(vec![0, 3])
            ]
        );
        assert_eq!(monomial_basis(1, 5), vec![Monomial(vec![5])]);
        assert_eq!(monomial_basis(3, 2).len(), 6);
        for (n, d) in [(2usize, 3u32), (3, 2), (4, 7), (1, 5)] {
            assert_eq!(monomial_basis(n, d).len() as u64, monomial_count(n, d));
        }
    }

    #[test]
    fn steenrod_examples() {
        let x = Polynomial::var(2, 1, 0);
        let sq = x.steenrod_total_square().unwrap();
        let expected = x.add(&x.mul(&x).unwrap()).unwrap();
        assert_eq!(sq, expected);

        let one = Polynomial::one(2, 1);
        assert_eq!(one.steenrod_total_square().unwrap(), one);

        // Sq(xy) = xy + x^2 y + x y^2 + x^2 y^2 by multiplicativity
        let (x, y) = xy_plus(2);
        let f = x.mul(&y).unwrap();
        let sq = f.steenrod_total_square().unwrap();
        let mut expected = Polynomial::zero(2, 2);
        for (a, b) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            expected.add_term(Monomial(vec![a, b]), 1);
        }
        assert_eq!(sq, expected);

        let f3 = Polynomial::var(3, 1, 0);
        assert!(f3.steenrod_total_square().is_err());
    }

    #[test]
    fn steenrod_multiplicative_cartan() {
        // direct Cartan-style oracle: Sq(fg) = Sq(f)Sq(g)
        let (x, y) = xy_plus(2);
        let f = x.add(&y).unwrap();
        let g = x.mul(&y).unwrap().add(&x).unwrap();
        let lhs = f.mul(&g).unwrap().steenrod_total_square().unwrap();
        let rhs = f
            .steenrod_total_square()
            .unwrap()
            .mul(&g.steenrod_total_square().unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}
