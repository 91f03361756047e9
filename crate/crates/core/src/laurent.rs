//! Exact arithmetic in the integral group ring of a free abelian group of
//! rank `m`, i.e. Laurent polynomials in `a1, ..., am` with integer
//! coefficients, together with valuations with respect to powers of the
//! augmentation ideal `Δ = (a1 - 1, ..., am - 1)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::syntax::Cursor;

/// Exponent vector of a Laurent monomial `a1^e1 ... am^em`.
///
/// Ordered degree-lexicographically: total degree first, then
/// lexicographically on the exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        Monomial(exponents)
    }

    pub fn one(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    /// The generator `a_index` (0-based index).
    pub fn generator(rank: usize, index: usize) -> Self {
        let mut e = vec![0; rank];
        e[index] = 1;
        Monomial(e)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.rank(), other.rank());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
///
/// No stored coefficient is ever zero, so structural equality is ring
/// equality. The zero polynomial is the empty term map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

/// Largest `k` with `p ∈ Δ^k`; infinite exactly for the zero polynomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AugValuation {
    Finite(u64),
    Infinity,
}

impl AugValuation {
    pub fn at_least(self, k: u64) -> bool {
        match self {
            AugValuation::Infinity => true,
            AugValuation::Finite(v) => v >= k,
        }
    }
}

impl fmt::Display for AugValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AugValuation::Finite(v) => write!(f, "{v}"),
            AugValuation::Infinity => f.write_str("infinity"),
        }
    }
}

fn check_rank(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::RankMismatch { left, right })
    }
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, BigInt::one())
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        Self::term(Monomial::one(rank), c)
    }

    pub fn term(monomial: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(monomial.rank());
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(monomial, c);
        }
        p
    }

    pub fn monomial(monomial: Monomial) -> Self {
        Self::term(monomial, 1)
    }

    /// The generator `a_{index+1}`.
    pub fn generator(rank: usize, index: usize) -> Self {
        Self::monomial(Monomial::generator(rank, index))
    }

    /// `a_{index+1} - 1`, a generator of the augmentation ideal.
    pub fn aug_generator(rank: usize, index: usize) -> Self {
        Self::generator(rank, index) - Self::one(rank)
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Result<Self> {
        let mut p = Self::zero(rank);
        for (m, c) in terms {
            check_rank(rank, m.rank())?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing degree-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        check_rank(self.rank, other.rank)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        check_rank(self.rank, other.rank)?;
        let mut out = Self::zero(self.rank);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplication by a unit monomial; only shifts exponents.
    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        debug_assert_eq!(self.rank, m.rank());
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut acc = Self::one(self.rank);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Value under the augmentation map `a_i ↦ 1` (sum of coefficients).
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Substitutes `a_{index+1} := 1`, keeping the rank.
    pub fn specialize_to_one(&self, index: usize) -> LaurentPoly {
        let mut out = Self::zero(self.rank);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[index] = 0;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Componentwise minimal `δ ≥ 0` such that `a^δ · p` has only
    /// non-negative exponents.
    pub fn clearing_monomial(&self) -> Monomial {
        let mut delta = vec![0i64; self.rank];
        for m in self.terms.keys() {
            for (d, &e) in delta.iter_mut().zip(&m.0) {
                *d = (*d).max(-e);
            }
        }
        Monomial(delta)
    }

    /// For a polynomial with non-negative exponents, returns
    /// `p(v_1 + shift, ..., v_m + shift)` expanded in the same variables.
    fn shift_variables(&self, shift: i64) -> LaurentPoly {
        let shift = BigInt::from(shift);
        let mut out = Self::zero(self.rank);
        for (m, c) in &self.terms {
            // partial products over the variables processed so far
            let mut partial: Vec<(Vec<i64>, BigInt)> = vec![(Vec::with_capacity(self.rank), c.clone())];
            for &e in &m.0 {
                assert!(e >= 0, "shift_variables requires non-negative exponents");
                let row = binomial_row(e as u64, &shift);
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for (exps, coeff) in &partial {
                    for (j, b) in row.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let mut ex = exps.clone();
                        ex.push(j as i64);
                        next.push((ex, coeff * b));
                    }
                }
                partial = next;
            }
            for (exps, coeff) in partial {
                out.add_term(Monomial(exps), coeff);
            }
        }
        out
    }

    /// Rewrites `p` in the variables `y_i = a_i - 1` after clearing
    /// denominators. Returns the polynomial in `y` (stored with the same
    /// rank, exponents all non-negative) and the clearing monomial `a^δ`,
    /// so that `a^δ · p = Y(a - 1)`.
    pub fn y_expansion(&self) -> (LaurentPoly, Monomial) {
        let delta = self.clearing_monomial();
        let cleared = self.mul_monomial(&delta);
        (cleared.shift_variables(1), delta)
    }

    /// Maximal `k` with `p ∈ Δ^k`.
    ///
    /// Monomials are units congruent to 1 modulo Δ, so multiplying by the
    /// clearing monomial does not change the valuation; in the `y`
    /// variables `Δ^k` is the ideal of polynomials of minimal degree `≥ k`.
    pub fn aug_valuation(&self) -> AugValuation {
        if self.is_zero() {
            return AugValuation::Infinity;
        }
        let (y, _) = self.y_expansion();
        let min = y
            .terms
            .keys()
            .map(Monomial::degree)
            .min()
            .expect("non-zero polynomial has a non-zero y-expansion");
        AugValuation::Finite(min as u64)
    }

    pub fn delta_membership(&self, k: u64) -> bool {
        self.aug_valuation().at_least(k)
    }

    /// Writes `p ∈ Δ^k` as `Σ_β c_β · q_β` over `|β| = k`, where
    /// `c_β = Π (a_i - 1)^{β_i}`. Only non-zero `q_β` are returned.
    ///
    /// Each `y`-monomial is assigned to the lexicographically least
    /// admissible `β` below its exponent vector.
    pub fn delta_decompose(&self, k: u64) -> Result<BTreeMap<Vec<u64>, LaurentPoly>> {
        let valuation = self.aug_valuation();
        if !valuation.at_least(k) {
            return Err(Error::precondition(format!(
                "polynomial {self} is not in Δ^{k}: augmentation valuation is {valuation}"
            )));
        }
        let (y, delta) = self.y_expansion();
        let mut quotients: BTreeMap<Vec<u64>, LaurentPoly> = BTreeMap::new();
        for (m, c) in &y.terms {
            let exps: Vec<u64> = m.0.iter().map(|&e| e as u64).collect();
            let beta = least_dominated_split(&exps, k);
            let rest: Vec<i64> = exps.iter().zip(&beta).map(|(e, b)| (e - b) as i64).collect();
            quotients
                .entry(beta)
                .or_insert_with(|| LaurentPoly::zero(self.rank))
                .add_term(Monomial(rest), c.clone());
        }
        let unclear = delta.inverse();
        Ok(quotients
            .into_iter()
            .map(|(beta, q)| (beta, q.shift_variables(-1).mul_monomial(&unclear)))
            .filter(|(_, q)| !q.is_zero())
            .collect())
    }

    /// True iff `a1 - 1` divides `p` in ℤA, i.e. `p` vanishes at `a1 = 1`.
    pub fn divisible_by_a1_minus_1(&self) -> bool {
        self.specialize_to_one(0).is_zero()
    }

    /// Parses the polynomial text grammar, e.g. `2*a1^3 - a2^-1 + 7`.
    pub fn parse(text: &str, rank: usize) -> Result<LaurentPoly> {
        let mut cur = Cursor::new(text);
        let p = parse_poly(&mut cur, rank)?;
        cur.expect_end()?;
        Ok(p)
    }
}

/// `c_β = Π (a_i - 1)^{β_i}`.
pub fn augmentation_power(rank: usize, beta: &[u64]) -> LaurentPoly {
    assert_eq!(beta.len(), rank);
    beta.iter()
        .enumerate()
        .fold(LaurentPoly::one(rank), |acc, (i, &b)| {
            &acc * &LaurentPoly::aug_generator(rank, i).pow(b as u32)
        })
}

/// All `β ∈ ℕ^rank` with `|β| = k`, in lexicographic order.
pub fn compositions(rank: usize, k: u64) -> Vec<Vec<u64>> {
    fn go(rank: usize, k: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if prefix.len() + 1 == rank {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=k {
            prefix.push(first);
            go(rank, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if rank == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(rank, k, &mut Vec::with_capacity(rank), &mut out);
    out
}

/// Lexicographically least `β ≤ e` (componentwise) with `|β| = k`; requires
/// `|e| ≥ k`.
fn least_dominated_split(e: &[u64], k: u64) -> Vec<u64> {
    let mut suffix: Vec<u64> = vec![0; e.len() + 1];
    for i in (0..e.len()).rev() {
        suffix[i] = suffix[i + 1] + e[i];
    }
    let mut remaining = k;
    e.iter()
        .enumerate()
        .map(|(i, _)| {
            let b = remaining.saturating_sub(suffix[i + 1]);
            remaining -= b;
            b
        })
        .collect()
}

/// `C(e, j) · shift^(e-j)` for `j = 0..=e`.
fn binomial_row(e: u64, shift: &BigInt) -> Vec<BigInt> {
    let mut binom = Vec::with_capacity(e as usize + 1);
    let mut c = BigInt::one();
    for j in 0..=e {
        binom.push(c.clone());
        c = c * (e - j) / (j + 1);
    }
    let mut powers = Vec::with_capacity(e as usize + 1);
    let mut s = BigInt::one();
    for _ in 0..=e {
        powers.push(s.clone());
        s *= shift;
    }
    (0..=e as usize).map(|j| &binom[j] * &powers[e as usize - j]).collect()
}

/// Geometric series `s` in `a1` with `s · (a1 - 1) = a1^γ - 1`.
pub fn geom_series(rank: usize, gamma: i64) -> LaurentPoly {
    let mut out = LaurentPoly::zero(rank);
    let power = |j: i64| {
        let mut e = vec![0; rank];
        e[0] = j;
        Monomial(e)
    };
    if gamma > 0 {
        for j in 0..gamma {
            out.add_term(power(j), BigInt::one());
        }
    } else {
        for j in 1..=-gamma {
            out.add_term(power(-j), -BigInt::one());
        }
    }
    out
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            /// Panics on rank mismatch; use the `try_` form for checked arithmetic.
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$inner(rhs).expect("Laurent polynomial rank mismatch")
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn write_factors(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "a{}", i + 1)?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing degree-lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                write_factors(f, m)?;
            }
        }
        Ok(())
    }
}

/// `term (('+'|'-') term)*`, each term a `*`-product of integers and
/// `a<i>[^e]` factors. Stops at the first character that cannot continue
/// the polynomial.
pub(crate) fn parse_poly(cur: &mut Cursor<'_>, rank: usize) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero(rank);
    let mut negative = if cur.eat('-') {
        true
    } else {
        cur.eat('+');
        false
    };
    loop {
        let (m, c) = parse_term(cur, rank)?;
        out.add_term(m, if negative { -c } else { c });
        if cur.eat('+') {
            negative = false;
        } else if cur.eat('-') {
            negative = true;
        } else {
            return Ok(out);
        }
    }
}

fn parse_term(cur: &mut Cursor<'_>, rank: usize) -> Result<(Monomial, BigInt)> {
    let mut coeff = BigInt::one();
    let mut exps = vec![0i64; rank];
    loop {
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => coeff *= cur.natural()?,
            Some('a') => {
                let before = cur.clone();
                let name = cur.ident().unwrap_or_default();
                let index: usize = match name[1..].parse() {
                    Ok(i) if i >= 1 && i <= rank => i,
                    _ => return before.error(format!("unknown generator `{name}` for rank {rank}")),
                };
                let e = if cur.eat('^') { cur.small_integer()? } else { 1 };
                exps[index - 1] += e;
            }
            Some(c) => return cur.error(format!("expected a coefficient or generator, found `{c}`")),
            None => return cur.error("expected a coefficient or generator, found end of input"),
        }
        if !cur.eat('*') {
            return Ok((Monomial(exps), coeff));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, rank: usize) -> LaurentPoly {
        LaurentPoly::parse(text, rank).unwrap()
    }

    fn y(rank: usize, i: usize) -> LaurentPoly {
        LaurentPoly::aug_generator(rank, i)
    }

    #[test]
    fn add_examples() {
        assert_eq!(p("a1 - 1", 1) + LaurentPoly::one(1), p("a1", 1));
        let q = p("2*a1^3 - a2^-1 + 7", 2);
        assert_eq!(&q + &LaurentPoly::zero(2), q);
        assert_eq!(p("2*a1*a2^-1", 2) + p("3*a1*a2^-1", 2), p("5*a1*a2^-1", 2));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("a1 - 1", 1) * p("a1 + 1", 1), p("a1^2 - 1", 1));
        let q = p("a1^-2 + 3*a2", 2);
        assert_eq!(&q * &LaurentPoly::one(2), q);
        assert_eq!(y(2, 0) * y(2, 1), p("a1*a2 - a1 - a2 + 1", 2));
    }

    #[test]
    fn rank_mismatch_is_rejected() {
        let err = LaurentPoly::one(1).try_add(&LaurentPoly::one(2)).unwrap_err();
        assert_eq!(err, Error::RankMismatch { left: 1, right: 2 });
        assert!(LaurentPoly::one(1).try_mul(&LaurentPoly::one(3)).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(LaurentPoly::zero(2).aug_valuation(), AugValuation::Infinity);
        assert_eq!(p("a1*a2 - a1 - a2 + 1", 2).aug_valuation(), AugValuation::Finite(2));
        assert_eq!(p("a1^-1 - 1", 1).aug_valuation(), AugValuation::Finite(1));
    }

    #[test]
    fn y_expansion_of_cubic() {
        // (y+1)^3 - 3(y+1) + 2 = y^3 + 3y^2
        let (yp, delta) = p("a1^3 - 3*a1 + 2", 1).y_expansion();
        assert!(delta.is_one());
        assert_eq!(yp, p("a1^3 + 3*a1^2", 1));
    }

    #[test]
    fn membership_examples() {
        let c = &y(2, 0).pow(2) * &y(2, 1);
        assert!(c.delta_membership(3));
        assert!(!c.delta_membership(4));
        assert!(!LaurentPoly::constant(1, 5).delta_membership(1));
        assert!(LaurentPoly::constant(1, 5).delta_membership(0));
        assert!(p("a1^3 - 3*a1 + 2", 1).delta_membership(2));
        assert!(!p("a1^3 - 3*a1 + 2", 1).delta_membership(3));
    }

    #[test]
    fn decompose_examples() {
        let d = y(1, 0).pow(2).delta_decompose(2).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&vec![2]], LaurentPoly::one(1));

        assert!(LaurentPoly::zero(1).delta_decompose(2).unwrap().is_empty());

        let q = &(&y(2, 0) * &y(2, 1)) + &y(2, 0).pow(2);
        let d = q.delta_decompose(2).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&vec![2, 0]], LaurentPoly::one(2));
        assert_eq!(d[&vec![1, 1]], LaurentPoly::one(2));
    }

    #[test]
    fn decompose_rejects_non_members() {
        let err = p("a1 - 1", 1).delta_decompose(2).unwrap_err();
        match err {
            Error::Precondition(msg) => assert!(msg.contains("valuation is 1"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn decompose_with_negative_exponents() {
        // a1^-2 (a1 - 1)^2 has a denominator to clear
        let q = &p("a1^-2", 1) * &y(1, 0).pow(2);
        let d = q.delta_decompose(2).unwrap();
        let back = d
            .iter()
            .fold(LaurentPoly::zero(1), |acc, (b, qb)| acc + &augmentation_power(1, b) * qb);
        assert_eq!(back, q);
    }

    #[test]
    fn geom_series_examples() {
        assert_eq!(geom_series(1, 3), p("1 + a1 + a1^2", 1));
        assert_eq!(geom_series(1, 0), LaurentPoly::zero(1));
        assert_eq!(geom_series(1, -2), p("-a1^-1 - a1^-2", 1));
        assert_eq!(&geom_series(1, -2) * &y(1, 0), p("a1^-2 - 1", 1));
    }

    #[test]
    fn geom_series_contract() {
        for gamma in -50..=50 {
            let target = &p(&format!("a1^{gamma}"), 2) - &LaurentPoly::one(2);
            assert_eq!(&geom_series(2, gamma) * &y(2, 0), target, "gamma = {gamma}");
        }
    }

    #[test]
    fn divisibility_examples() {
        assert!(p("a1^2 - 1", 1).divisible_by_a1_minus_1());
        assert!(!p("a2 - 1", 2).divisible_by_a1_minus_1());
        assert!(p("a1*a2 - a2", 2).divisible_by_a1_minus_1());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(2, 3).len(), 4);
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(compositions(1, 5), vec![vec![5]]);
        assert_eq!(compositions(2, 1), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn least_split_is_lexicographically_least() {
        assert_eq!(least_dominated_split(&[1, 1], 1), vec![0, 1]);
        assert_eq!(least_dominated_split(&[3, 1, 2], 4), vec![1, 1, 2]);
        assert_eq!(least_dominated_split(&[2, 0], 2), vec![2, 0]);
    }

    #[test]
    fn display_and_parse() {
        let q = p("2*a1^3 - a2^-1 + 7", 2);
        assert_eq!(q.to_string(), "2*a1^3 + 7 - a2^-1");
        assert_eq!(LaurentPoly::parse(&q.to_string(), 2).unwrap(), q);
        assert_eq!(LaurentPoly::zero(3).to_string(), "0");
        assert_eq!(p("-a1 + 1", 1).to_string(), "-a1 + 1");
        assert_eq!(p("a1*a1", 1), p("a1^2", 1));
        assert!(LaurentPoly::parse("a3", 2).is_err());
        assert!(LaurentPoly::parse("2 +", 1).is_err());
        assert!(LaurentPoly::parse("2 * x", 1).is_err());
    }

    fn arb_poly(rank: usize) -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((prop::collection::vec(-3i64..=3, rank), -5i64..=5), 0..5).prop_map(
            move |terms| {
                LaurentPoly::from_terms(
                    rank,
                    terms.into_iter().map(|(e, c)| (Monomial::new(e), BigInt::from(c))),
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn valuation_is_multiplicative(a in arb_poly(2), b in arb_poly(2)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let (AugValuation::Finite(va), AugValuation::Finite(vb)) = (a.aug_valuation(), b.aug_valuation()) else {
                unreachable!()
            };
            prop_assert_eq!((&a * &b).aug_valuation(), AugValuation::Finite(va + vb));
        }

        #[test]
        fn valuation_is_superadditive(a in arb_poly(2), b in arb_poly(2)) {
            let v = (&a + &b).aug_valuation();
            prop_assert!(v >= a.aug_valuation().min(b.aug_valuation()));
        }

        #[test]
        fn valuation_is_unit_invariant(a in arb_poly(3), e in prop::collection::vec(-4i64..=4, 3)) {
            let shifted = a.mul_monomial(&Monomial::new(e));
            prop_assert_eq!(shifted.aug_valuation(), a.aug_valuation());
        }

        #[test]
        fn decomposition_recomposes(a in arb_poly(2), beta in prop::collection::vec(0u64..=2, 2), k in 1u64..=3) {
            // force membership by multiplying with an element of Δ^k
            let gens: u64 = beta.iter().sum();
            let member = &a * &augmentation_power(2, &beta) * y(2, 0).pow(k.saturating_sub(gens) as u32);
            let k = k.max(gens);
            let parts = member.delta_decompose(k).unwrap();
            let back = parts.iter().try_fold(LaurentPoly::zero(2), |acc, (b, q)| {
                prop_assert_eq!(b.iter().sum::<u64>(), k);
                Ok(acc + &augmentation_power(2, b) * q)
            })?;
            prop_assert_eq!(back, member);
        }

        #[test]
        fn display_round_trips(a in arb_poly(3)) {
            prop_assert_eq!(LaurentPoly::parse(&a.to_string(), 3).unwrap(), a);
        }
    }
}
