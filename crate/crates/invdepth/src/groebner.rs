//! A small Buchberger engine over F_p: reduced Gröbner bases, normal forms,
//! combinatorial Krull dimension, and colon-ideal non-zerodivisor tests.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::{invm, mulm};
use crate::poly::{Monomial, Polynomial};

const PAIR_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    GradedLex,
    GradedRevLex,
}

/// A degree-compatible monomial order with an optional variable priority
/// permutation (priority[0] is the most significant variable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Option<Vec<usize>>,
}

impl MonomialOrder {
    pub fn grlex() -> Self {
        MonomialOrder {
            kind: OrderKind::GradedLex,
            priority: None,
        }
    }

    pub fn grevlex() -> Self {
        MonomialOrder {
            kind: OrderKind::GradedRevLex,
            priority: None,
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let da = a.degree();
        let db = b.degree();
        if da != db {
            return da.cmp(&db);
        }
        match self.kind {
            OrderKind::GradedLex => {
                for i in self.var_order(a.nvars()) {
                    match a.0[i].cmp(&b.0[i]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::GradedRevLex => {
                for i in self.var_order(a.nvars()).into_iter().rev() {
                    match a.0[i].cmp(&b.0[i]) {
                        Ordering::Equal => {}
                        // smaller exponent in the least variable wins
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }

    fn var_order(&self, n: usize) -> Vec<usize> {
        match &self.priority {
            Some(p) => p.clone(),
            None => (0..n).collect(),
        }
    }
}

type Cmp<'a> = &'a dyn Fn(&Monomial, &Monomial) -> Ordering;

/// A reduced Gröbner basis: monic generators, no leading monomial divides
/// another's, every S-polynomial reduces to zero.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub generators: Vec<Polynomial>,
    pub order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| g.leading_by(|a, b| self.order.cmp(a, b)).expect("nonzero").0)
            .collect()
    }
}

/// Full reduction of f modulo a list of polynomials: every term of the
/// remainder is divisible by no leading monomial of the basis.
fn reduce_with(f: &Polynomial, basis: &[Polynomial], cmp: Cmp) -> Polynomial {
    let p = f.p();
    let leads: Vec<(Monomial, u32)> = basis
        .iter()
        .map(|b| b.leading_by(|a, c| cmp(a, c)).expect("nonzero basis element"))
        .collect();
    let mut work = f.clone();
    let mut remainder = Polynomial::zero(p, f.nvars());
    while let Some((m, c)) = work.leading_by(|a, b| cmp(a, b)) {
        let mut reduced = false;
        for (bi, (lm, lc)) in leads.iter().enumerate() {
            if lm.divides(&m) {
                let q = lm.quotient_into(&m);
                let factor = mulm(c, invm(*lc, p), p);
                let sub = basis[bi].mul_monomial(&q, factor);
                work = work.sub(&sub).expect("compatible");
                reduced = true;
                break;
            }
        }
        if !reduced {
            remainder.add_term(m.clone(), c);
            let mut t = Polynomial::zero(p, f.nvars());
            t.add_term(m, c);
            work = work.sub(&t).expect("compatible");
        }
    }
    remainder
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, cmp: Cmp) -> Polynomial {
    let p = f.p();
    let (lmf, lcf) = f.leading_by(|a, b| cmp(a, b)).expect("nonzero");
    let (lmg, lcg) = g.leading_by(|a, b| cmp(a, b)).expect("nonzero");
    let l = lmf.lcm(&lmg);
    let a = f.mul_monomial(&lmf.quotient_into(&l), invm(lcf, p));
    let b = g.mul_monomial(&lmg.quotient_into(&l), invm(lcg, p));
    a.sub(&b).expect("compatible")
}

fn buchberger_with(gens: &[Polynomial], cmp: Cmp) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = gens.iter().filter(|f| !f.is_zero()).cloned().collect();
    if basis.is_empty() {
        return Ok(vec![]);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    let mut processed = 0usize;
    while let Some(pos) = {
        // normal strategy: smallest lcm degree first
        pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(i, j))| {
                let lmi = basis[i].leading_by(|a, b| cmp(a, b)).unwrap().0;
                let lmj = basis[j].leading_by(|a, b| cmp(a, b)).unwrap().0;
                lmi.lcm(&lmj).degree()
            })
            .map(|(k, _)| k)
    } {
        let (i, j) = pairs.swap_remove(pos);
        processed += 1;
        if processed > PAIR_CAP {
            return Err(Error::Capacity("Buchberger pair queue exploded".into()));
        }
        let lmi = basis[i].leading_by(|a, b| cmp(a, b)).unwrap().0;
        let lmj = basis[j].leading_by(|a, b| cmp(a, b)).unwrap().0;
        // first Buchberger criterion: coprime leading monomials
        if lmi.lcm(&lmj).degree() == lmi.degree() + lmj.degree() {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], cmp);
        let r = reduce_with(&s, &basis, cmp);
        if !r.is_zero() {
            let k = basis.len();
            for idx in 0..k {
                pairs.push((idx, k));
            }
            basis.push(r);
        }
    }
    // minimalize: drop generators whose leading monomial is divisible by another's
    let leads: Vec<Monomial> = basis
        .iter()
        .map(|b| b.leading_by(|a, c| cmp(a, c)).unwrap().0)
        .collect();
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| {
            !(0..basis.len())
                .any(|j| j != i && leads[j].divides(&leads[i]) && (leads[i] != leads[j] || j < i))
        })
        .collect();
    let minimal: Vec<Polynomial> = basis
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(b, _)| b.clone())
        .collect();
    // inter-reduce and normalize
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| b.clone())
            .collect();
        let r = if others.is_empty() {
            minimal[i].clone()
        } else {
            reduce_with(&minimal[i], &others, cmp)
        };
        if !r.is_zero() {
            reduced.push(r.monic(|a, b| cmp(a, b)));
        }
    }
    reduced.sort_by(|a, b| {
        let la = a.leading_by(|x, y| cmp(x, y)).unwrap().0;
        let lb = b.leading_by(|x, y| cmp(x, y)).unwrap().0;
        cmp(&la, &lb)
    });
    Ok(reduced)
}

/// Reduced Gröbner basis of an ideal.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> Result<GroebnerBasis> {
    for g in gens.iter().skip(1) {
        if g.p() != gens[0].p() || g.nvars() != gens[0].nvars() {
            return Err(Error::Structural("mixed rings in ideal generators".into()));
        }
    }
    let cmp = |a: &Monomial, b: &Monomial| order.cmp(a, b);
    let generators = buchberger_with(gens, &cmp)?;
    Ok(GroebnerBasis {
        generators,
        order: order.clone(),
    })
}

/// Unique remainder of f modulo the (reduced) basis; zero iff f lies in the
/// ideal.
pub fn normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Polynomial {
    if basis.generators.is_empty() {
        return f.clone();
    }
    let cmp = |a: &Monomial, b: &Monomial| basis.order.cmp(a, b);
    reduce_with(f, &basis.generators, &cmp)
}

/// Krull dimension of F[V]/ideal(B): the size of the largest variable subset
/// S such that no leading monomial is supported entirely inside S.
pub fn krull_dimension(basis: &GroebnerBasis, nvars: usize) -> usize {
    let leads: Vec<Monomial> = basis.leading_monomials();
    let supports: Vec<u32> = leads
        .iter()
        .map(|m| {
            m.0.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u32, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    if supports.iter().any(|&s| s == 0) {
        // a unit leading monomial: the whole ring is killed
        return 0;
    }
    let mut best = 0usize;
    for mask in 0u32..(1 << nvars) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        if supports.iter().all(|&s| s & !mask != 0) {
            best = size;
        }
    }
    best
}

fn extend_vars(f: &Polynomial, extra: usize) -> Polynomial {
    let n = f.nvars();
    Polynomial::from_terms(
        f.p(),
        n + extra,
        f.terms().map(|(m, c)| {
            let mut e = m.0.clone();
            e.extend(std::iter::repeat(0).take(extra));
            (Monomial(e), c)
        }),
    )
}

fn drop_last_var(f: &Polynomial) -> Polynomial {
    let n = f.nvars();
    Polynomial::from_terms(
        f.p(),
        n - 1,
        f.terms().map(|(m, c)| (Monomial(m.0[..n - 1].to_vec()), c)),
    )
}

/// Exact division g / x for g in the principal ideal (x); panics otherwise.
fn divide_exact(g: &Polynomial, x: &Polynomial, cmp: Cmp) -> Polynomial {
    let p = g.p();
    let (lmx, lcx) = x.leading_by(|a, b| cmp(a, b)).expect("divisor nonzero");
    let mut work = g.clone();
    let mut quotient = Polynomial::zero(p, g.nvars());
    while let Some((m, c)) = work.leading_by(|a, b| cmp(a, b)) {
        assert!(lmx.divides(&m), "division is not exact");
        let q = lmx.quotient_into(&m);
        let factor = mulm(c, invm(lcx, p), p);
        quotient.add_term(q.clone(), factor);
        let sub = x.mul_monomial(&q, factor);
        work = work.sub(&sub).expect("compatible");
    }
    quotient
}

/// True iff x is a non-zerodivisor on F[V]/I, via (I : x) = I. The colon
/// ideal is computed by the elimination method: Gröbner basis of
/// t·I + (1−t)·(x) with t eliminated first, then divide the t-free part by x.
pub fn is_nonzerodivisor(x: &Polynomial, ideal: &[Polynomial]) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::Precondition(
            "zero is a zerodivisor unless the ring is zero".into(),
        ));
    }
    let n = x.nvars();
    let order = MonomialOrder::grlex();
    let base = buchberger(ideal, &order)?;
    // elimination order: exponent of t (last variable) first, then graded-lex
    let elim = move |a: &Monomial, b: &Monomial| -> Ordering {
        let t = a.nvars() - 1;
        match a.0[t].cmp(&b.0[t]) {
            Ordering::Equal => {
                let ar = Monomial(a.0[..t].to_vec());
                let br = Monomial(b.0[..t].to_vec());
                MonomialOrder::grlex().cmp(&ar, &br)
            }
            o => o,
        }
    };
    let t = Polynomial::var(x.p(), n + 1, n);
    let one = Polynomial::one(x.p(), n + 1);
    let mut gens = Vec::new();
    for f in ideal {
        gens.push(t.mul(&extend_vars(f, 1))?);
    }
    gens.push(one.sub(&t)?.mul(&extend_vars(x, 1))?);
    let gb = buchberger_with(&gens, &elim)?;
    let cmp_base = |a: &Monomial, b: &Monomial| order.cmp(a, b);
    for g in &gb {
        let involves_t = g.terms().any(|(m, _)| m.0[n] > 0);
        if involves_t {
            continue;
        }
        let g0 = drop_last_var(g);
        let q = divide_exact(&g0, x, &cmp_base);
        if !normal_form(&q, &base).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(p: u32, n: usize, i: usize) -> Polynomial {
        Polynomial::var(p, n, i)
    }

    #[test]
    fn trivial_bases() {
        let x = var(2, 2, 0);
        let gb = buchberger(&[x.clone()], &MonomialOrder::grlex()).unwrap();
        assert_eq!(gb.generators, vec![x.clone()]);

        let y = var(2, 2, 1);
        let gb = buchberger(&[x.add(&y).unwrap(), y.clone()], &MonomialOrder::grlex()).unwrap();
        assert_eq!(gb.generators.len(), 2);
        assert!(normal_form(&x, &gb).is_zero());
        assert!(normal_form(&y, &gb).is_zero());
    }

    #[test]
    fn monomial_ideal_reduced() {
        let x = var(2, 2, 0);
        let y = var(2, 2, 1);
        let x2 = x.mul(&x).unwrap();
        let xy = x.mul(&y).unwrap();
        let gb = buchberger(&[x2.clone(), xy.clone()], &MonomialOrder::grlex()).unwrap();
        // sorted ascending by leading monomial: xy < x^2 in graded-lex
        assert_eq!(gb.generators, vec![xy.clone(), x2.clone()]);
        // idempotence
        let gb2 = buchberger(&gb.generators, &MonomialOrder::grlex()).unwrap();
        assert_eq!(gb2.generators, gb.generators);
        // normal forms
        assert!(normal_form(&x2.add(&xy).unwrap(), &gb).is_zero());
        assert_eq!(normal_form(&y, &gb), y);
    }

    #[test]
    fn krull_dimension_examples() {
        let empty = buchberger(&[], &MonomialOrder::grlex()).unwrap();
        assert_eq!(krull_dimension(&empty, 2), 2);

        let x = var(2, 2, 0);
        let gb = buchberger(&[x.clone()], &MonomialOrder::grlex()).unwrap();
        assert_eq!(krull_dimension(&gb, 2), 1);

        // x^2+xy+y^2 over F_2: principal nonzero, drops dimension by one
        let y = var(2, 2, 1);
        let f = x
            .mul(&x)
            .unwrap()
            .add(&x.mul(&y).unwrap())
            .unwrap()
            .add(&y.mul(&y).unwrap())
            .unwrap();
        let gb = buchberger(&[f], &MonomialOrder::grlex()).unwrap();
        assert_eq!(krull_dimension(&gb, 2), 1);
    }

    #[test]
    fn nonzerodivisor_examples() {
        let t1 = var(2, 2, 0);
        let t2 = var(2, 2, 1);
        // a variable mod the zero ideal: domain
        assert!(is_nonzerodivisor(&t1, &[]).unwrap());
        // t1 mod (t1 t2): t2·t1 ∈ I but t2 ∉ I
        let prod = t1.mul(&t2).unwrap();
        assert!(!is_nonzerodivisor(&t1, &[prod.clone()]).unwrap());
        // t1 + t2 mod (t1 t2): nonzerodivisor
        let s = t1.add(&t2).unwrap();
        assert!(is_nonzerodivisor(&s, &[prod]).unwrap());
        // zero input
        assert!(is_nonzerodivisor(&Polynomial::zero(2, 2), &[]).is_err());
    }

    /// Degreewise injectivity oracle: multiplication by x on (R/I)_d is
    /// injective for all d up to the cutoff.
    fn injectivity_oracle(x: &Polynomial, ideal: &[Polynomial], cutoff: u32) -> bool {
        use crate::invariants::MonomialIndex;
        use crate::linalg::RowSpace;
        let p = x.p();
        let n = x.nvars();
        let e = x.degree().unwrap();
        for d in 0..=cutoff {
            let src = MonomialIndex::new(n, d);
            let dst = MonomialIndex::new(n, d + e);
            let mut span_src = RowSpace::new(p, src.len());
            let mut span_dst = RowSpace::new(p, dst.len());
            for f in ideal {
                let fd = f.degree().unwrap();
                if fd <= d {
                    for m in crate::poly::monomial_basis(n, d - fd) {
                        span_src.insert(&src.to_vec(&f.mul_monomial(&m, 1)));
                    }
                }
                if fd <= d + e {
                    for m in crate::poly::monomial_basis(n, d + e - fd) {
                        span_dst.insert(&dst.to_vec(&f.mul_monomial(&m, 1)));
                    }
                }
            }
            let base_dst = span_dst.rank();
            // rank of the composite (R)_d → (R/I)_{d+e}: stack images on I_{d+e}
            for m in crate::poly::monomial_basis(n, d) {
                span_dst.insert(&dst.to_vec(&x.mul_monomial(&m, 1)));
            }
            let rank_composite = span_dst.rank() - base_dst;
            let dim_quot_src = src.len() - span_src.rank();
            // injective on the quotient iff the composite has full rank
            if rank_composite < dim_quot_src {
                return false;
            }
        }
        true
    }

    #[test]
    fn nonzerodivisor_agrees_with_degreewise_oracle() {
        let t1 = var(2, 2, 0);
        let t2 = var(2, 2, 1);
        let prod = t1.mul(&t2).unwrap();
        let s = t1.add(&t2).unwrap();
        let sq = t1.mul(&t1).unwrap();
        let cases: Vec<(Polynomial, Vec<Polynomial>)> = vec![
            (t1.clone(), vec![]),
            (t1.clone(), vec![prod.clone()]),
            (s.clone(), vec![prod.clone()]),
            (t2.clone(), vec![sq.clone()]),
            (s.clone(), vec![sq.clone()]),
            (sq.clone(), vec![prod.clone()]),
        ];
        for (x, ideal) in cases {
            let fast = is_nonzerodivisor(&x, &ideal).unwrap();
            let slow = injectivity_oracle(&x, &ideal, 8);
            assert_eq!(fast, slow, "x={x}, ideal size {}", ideal.len());
        }
    }

    #[test]
    fn normal_form_idempotent_property() {
        let x = var(3, 3, 0);
        let y = var(3, 3, 1);
        let z = var(3, 3, 2);
        let g1 = x.mul(&y).unwrap().add(&z.mul(&z).unwrap()).unwrap();
        let g2 = y.mul(&y).unwrap().sub(&x.mul(&z).unwrap()).unwrap();
        let gb = buchberger(&[g1, g2], &MonomialOrder::grlex()).unwrap();
        let f = x.pow(3).add(&y.pow(2)).unwrap().add(&z).unwrap();
        let nf = normal_form(&f, &gb);
        let diff = f.sub(&nf).unwrap();
        assert!(normal_form(&diff, &gb).is_zero());
        assert_eq!(normal_form(&nf, &gb), nf);
    }

    #[test]
    fn krull_dimension_gl_invariant() {
        // dimension unchanged under an invertible change of variables
        let x = var(2, 2, 0);
        let y = var(2, 2, 1);
        let f = x.mul(&y).unwrap();
        let gb = buchberger(&[f.clone()], &MonomialOrder::grlex()).unwrap();
        let d1 = krull_dimension(&gb, 2);
        let a = vec![vec![1, 1], vec![0, 1]];
        let g = f.apply_linear_substitution(&a).unwrap();
        let gb2 = buchberger(&[g], &MonomialOrder::grlex()).unwrap();
        assert_eq!(d1, krull_dimension(&gb2, 2));
    }

    #[test]
    fn grevlex_order_sane() {
        let o = MonomialOrder::grevlex();
        // x^2 y > x y^2 in grevlex (least variable y has smaller exponent)
        let a = Monomial(vec![2, 1]);
        let b = Monomial(vec![1, 2]);
        assert_eq!(o.cmp(&a, &b), Ordering::Greater);
    }
}
