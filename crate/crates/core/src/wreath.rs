//! The restricted wreath product `G = ℤⁿ ≀ ℤᵐ` in normal form.
//!
//! An element is `a·f` with `a` in the active group `A = ℤᵐ` and `f` in the
//! base group `N`. `N` is the free `ℤA`-module on `b1, ..., bn`, so `f` is
//! stored as its coordinate vector `(Q1, ..., Qn)` of Laurent polynomials.
//! Conjugating `u ∈ N` by `a^γ` multiplies every coordinate by the
//! monomial `a^γ`, which gives the product
//! `(a, f)·(a', f') = (a + a', f·a^{a'} + f')` and `[b, a] = b^{a - 1}`.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::laurent::{compositions, parse_poly, LaurentPoly, Monomial};
use crate::syntax::Cursor;

/// `ℤⁿ ≀ ℤᵐ`: `m` active generators `a_i`, `n` base generators `b_j`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupSpec {
    m: usize,
    n: usize,
}

impl GroupSpec {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Usage(format!(
                "wreath product ranks must be positive (got m = {m}, n = {n})"
            )));
        }
        Ok(GroupSpec { m, n })
    }

    /// Rank of the active group `A`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Rank of the base group `B`.
    pub fn n(&self) -> usize {
        self.n
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{} wr Z^{}", self.n, self.m)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WreathElement {
    spec: GroupSpec,
    active: Vec<i64>,
    base: Vec<LaurentPoly>,
}

impl WreathElement {
    pub fn new(spec: GroupSpec, active: Vec<i64>, base: Vec<LaurentPoly>) -> Result<Self> {
        if active.len() != spec.m {
            return Err(Error::RankMismatch {
                left: spec.m,
                right: active.len(),
            });
        }
        if base.len() != spec.n {
            return Err(Error::RankMismatch {
                left: spec.n,
                right: base.len(),
            });
        }
        if let Some(p) = base.iter().find(|p| p.rank() != spec.m) {
            return Err(Error::RankMismatch {
                left: spec.m,
                right: p.rank(),
            });
        }
        Ok(WreathElement { spec, active, base })
    }

    pub fn identity(spec: GroupSpec) -> Self {
        WreathElement {
            spec,
            active: vec![0; spec.m],
            base: vec![LaurentPoly::zero(spec.m); spec.n],
        }
    }

    /// `a^γ` for an exponent vector `γ`.
    pub fn from_active(spec: GroupSpec, active: Vec<i64>) -> Result<Self> {
        Self::new(spec, active, vec![LaurentPoly::zero(spec.m); spec.n])
    }

    /// The base element `Π b_j^{Q_j}`.
    pub fn from_base(spec: GroupSpec, base: Vec<LaurentPoly>) -> Result<Self> {
        Self::new(spec, vec![0; spec.m], base)
    }

    /// `a_{index+1}`.
    pub fn a(spec: GroupSpec, index: usize) -> Self {
        let mut g = Self::identity(spec);
        g.active[index] = 1;
        g
    }

    /// `a_{index+1}^e`.
    pub fn a_pow(spec: GroupSpec, index: usize, e: i64) -> Self {
        let mut g = Self::identity(spec);
        g.active[index] = e;
        g
    }

    /// `b_{index+1}`.
    pub fn b(spec: GroupSpec, index: usize) -> Self {
        Self::b_pow(spec, index, LaurentPoly::one(spec.m))
    }

    /// `b_{index+1}^p` for `p ∈ ℤA`.
    pub fn b_pow(spec: GroupSpec, index: usize, p: LaurentPoly) -> Self {
        assert_eq!(p.rank(), spec.m);
        let mut g = Self::identity(spec);
        g.base[index] = p;
        g
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn active(&self) -> &[i64] {
        &self.active
    }

    pub fn base(&self) -> &[LaurentPoly] {
        &self.base
    }

    pub fn coordinate(&self, j: usize) -> &LaurentPoly {
        &self.base[j]
    }

    /// The active part as a unit monomial of ℤA.
    pub fn active_monomial(&self) -> Monomial {
        Monomial::new(self.active.clone())
    }

    fn check_spec(&self, other: &WreathElement) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::spec_mismatch(self.spec, other.spec))
        }
    }

    pub fn multiply(&self, h: &WreathElement) -> Result<WreathElement> {
        self.check_spec(h)?;
        let shift = h.active_monomial();
        Ok(WreathElement {
            spec: self.spec,
            active: self.active.iter().zip(&h.active).map(|(x, y)| x + y).collect(),
            base: self
                .base
                .iter()
                .zip(&h.base)
                .map(|(p, q)| &p.mul_monomial(&shift) + q)
                .collect(),
        })
    }

    pub fn inverse(&self) -> WreathElement {
        let shift = self.active_monomial().inverse();
        WreathElement {
            spec: self.spec,
            active: self.active.iter().map(|e| -e).collect(),
            base: self.base.iter().map(|p| -p.mul_monomial(&shift)).collect(),
        }
    }

    /// `u^p` for `u ∈ N`: every coordinate multiplied by `p`.
    pub fn module_action(&self, p: &LaurentPoly) -> Result<WreathElement> {
        if !self.in_n() {
            return Err(Error::precondition(format!(
                "module action needs an element of the base group N, got {self}"
            )));
        }
        let base = self.base.iter().map(|q| q.try_mul(p)).collect::<Result<_>>()?;
        Ok(WreathElement {
            spec: self.spec,
            active: self.active.clone(),
            base,
        })
    }

    /// Membership in the base group `N` (the normal closure of `B`).
    pub fn in_n(&self) -> bool {
        self.active.iter().all(|&e| e == 0)
    }

    /// Membership in the active group `A`.
    pub fn in_a(&self) -> bool {
        self.base.iter().all(LaurentPoly::is_zero)
    }

    /// Membership in `N^{Δ^k}`; for `k ≥ 1` this is `Γ_{k+1}(G)`.
    pub fn in_delta_power(&self, k: u64) -> bool {
        self.in_n() && self.base.iter().all(|p| p.delta_membership(k))
    }

    pub fn is_identity(&self) -> bool {
        self.in_n() && self.in_a()
    }

    /// `[self, h] = self⁻¹ h⁻¹ self h`.
    pub fn commutator(&self, h: &WreathElement) -> Result<WreathElement> {
        GroupElement::commutator(self, h)
    }

    /// Left-normed `[self, gs[0], ..., gs[r-1]]`.
    pub fn commutator_left_normed(&self, gs: &[WreathElement]) -> Result<WreathElement> {
        self.commutator_chain(gs)
    }

    pub fn pow(&self, e: i64) -> WreathElement {
        self.try_pow(e).expect("powers stay in the same group")
    }

    pub fn parse(text: &str, spec: GroupSpec) -> Result<WreathElement> {
        let mut cur = Cursor::new(text);
        let g = parse_element(&mut cur, spec)?;
        cur.expect_end()?;
        Ok(g)
    }
}

fn parse_element(cur: &mut Cursor<'_>, spec: GroupSpec) -> Result<WreathElement> {
    cur.expect('{')?;
    if cur.ident() != Some("active") {
        return cur.error("expected `active`");
    }
    cur.expect(':')?;
    cur.skip_ws();
    let here = cur.clone();
    let active = cur.small_tuple()?;
    if active.len() != spec.m {
        return here.error(format!(
            "active part has {} exponents, group needs {}",
            active.len(),
            spec.m
        ));
    }
    cur.expect(';')?;
    let mut base = vec![LaurentPoly::zero(spec.m); spec.n];
    let mut seen = vec![false; spec.n];
    if !cur.eat('}') {
        loop {
            cur.skip_ws();
            let here = cur.clone();
            let name = cur.ident().unwrap_or_default();
            let j = match name.strip_prefix('b').map(str::parse::<usize>) {
                Some(Ok(j)) if (1..=spec.n).contains(&j) => j - 1,
                _ => return here.error(format!("expected a base generator b1..b{}", spec.n)),
            };
            if seen[j] {
                return here.error(format!("coordinate {name} given twice"));
            }
            seen[j] = true;
            cur.expect(':')?;
            base[j] = parse_poly(cur, spec.m)?;
            if cur.eat('}') {
                break;
            }
            cur.expect(',')?;
        }
    }
    Ok(WreathElement { spec, active, base })
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{ active: (")?;
        for (i, e) in self.active.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(") ;")?;
        let mut first = true;
        for (j, p) in self.base.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, " b{}: {}", j + 1, p)?;
        }
        f.write_str(" }")
    }
}

impl GroupElement for WreathElement {
    type Spec = GroupSpec;

    fn identity(spec: &GroupSpec) -> Self {
        WreathElement::identity(*spec)
    }

    fn belongs_to(&self, spec: &GroupSpec) -> bool {
        self.spec == *spec
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.multiply(rhs)
    }

    fn inverse(&self) -> Self {
        WreathElement::inverse(self)
    }

    fn is_identity(&self) -> bool {
        WreathElement::is_identity(self)
    }

    fn parse_literal(text: &str, line: usize, column: usize, spec: &GroupSpec) -> Result<Self> {
        let mut cur = Cursor::at(text, line, column);
        let g = parse_element(&mut cur, *spec)?;
        cur.expect_end()?;
        Ok(g)
    }
}

/// Basis commutator `[b_k, a_{j_1}, ..., a_{j_{i-1}}]` of `Γ_i(G)` modulo
/// `Γ_{i+1}(G)`; indices are 1-based and `js` is non-decreasing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LcsBasisElement {
    pub k: usize,
    pub js: Vec<usize>,
}

impl LcsBasisElement {
    /// The left-normed commutator this basis element names.
    pub fn element(&self, spec: GroupSpec) -> WreathElement {
        let gens: Vec<_> = self.js.iter().map(|&j| WreathElement::a(spec, j - 1)).collect();
        WreathElement::b(spec, self.k - 1)
            .commutator_left_normed(&gens)
            .expect("generators share the group")
    }
}

impl fmt::Display for LcsBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[b{}", self.k)?;
        for j in &self.js {
            write!(f, ",a{j}")?;
        }
        f.write_str("]")
    }
}

/// Free abelian basis of `Γ_i(G) / Γ_{i+1}(G)`, `i ≥ 2`.
pub fn lcs_basis(i: usize, spec: GroupSpec) -> Result<Vec<LcsBasisElement>> {
    if i < 2 {
        return Err(Error::Usage(format!("lower central series index must be at least 2, got {i}")));
    }
    let degree = (i - 1) as u64;
    let mut out = Vec::new();
    for k in 1..=spec.n {
        // exponent vectors of degree i-1 monomials, largest a1-power first
        for beta in compositions(spec.m, degree).into_iter().rev() {
            let js = beta
                .iter()
                .enumerate()
                .flat_map(|(j, &count)| std::iter::repeat_n(j + 1, count as usize))
                .collect();
            out.push(LcsBasisElement { k, js });
        }
    }
    Ok(out)
}

/// `n · C(i + m - 2, m - 1)`.
pub fn lcs_rank(i: usize, spec: GroupSpec) -> Result<BigInt> {
    if i < 2 {
        return Err(Error::Usage(format!("lower central series index must be at least 2, got {i}")));
    }
    let (top, choose) = ((i + spec.m - 2) as u64, (spec.m - 1) as u64);
    let mut c = BigInt::from(1u8);
    for t in 0..choose {
        c = c * (top - t) / (t + 1);
    }
    Ok(c * spec.n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(m: usize, n: usize) -> GroupSpec {
        GroupSpec::new(m, n).unwrap()
    }

    fn poly(text: &str, m: usize) -> LaurentPoly {
        LaurentPoly::parse(text, m).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let s = spec(1, 1);
        let a = WreathElement::a(s, 0);
        let a_inv = WreathElement::a_pow(s, 0, -1);
        assert!(a.multiply(&a_inv).unwrap().is_identity());

        let g = a.multiply(&WreathElement::b(s, 0)).unwrap();
        // (a1; b1:1)
        assert_eq!(g, WreathElement::new(s, vec![1], vec![LaurentPoly::one(1)]).unwrap());
        let prod = g.multiply(&a_inv).unwrap();
        assert_eq!(prod, WreathElement::b_pow(s, 0, poly("a1^-1", 1)));
        assert_eq!(g.multiply(&WreathElement::identity(s)).unwrap(), g);
    }

    #[test]
    fn inverse_examples() {
        let s = spec(1, 1);
        assert!(WreathElement::identity(s).inverse().is_identity());
        assert_eq!(WreathElement::a(s, 0).inverse(), WreathElement::a_pow(s, 0, -1));
        let g = WreathElement::new(s, vec![1], vec![LaurentPoly::one(1)]).unwrap();
        let expected = WreathElement::new(s, vec![-1], vec![poly("-a1^-1", 1)]).unwrap();
        assert_eq!(g.inverse(), expected);
        assert!(g.multiply(&expected).unwrap().is_identity());
    }

    #[test]
    fn commutator_examples() {
        let s = spec(2, 2);
        let b1 = WreathElement::b(s, 0);
        let a1 = WreathElement::a(s, 0);
        assert_eq!(b1.commutator(&a1).unwrap(), WreathElement::b_pow(s, 0, poly("a1 - 1", 2)));
        let g = WreathElement::new(s, vec![2, -1], vec![poly("a1 + 3", 2), poly("a2^-2", 2)]).unwrap();
        assert!(g.commutator(&g).unwrap().is_identity());
        assert_eq!(
            b1.commutator_left_normed(&[a1.clone(), a1]).unwrap(),
            WreathElement::b_pow(s, 0, poly("a1^2 - 2*a1 + 1", 2))
        );
    }

    #[test]
    fn spec_mismatch_is_rejected() {
        let g = WreathElement::a(spec(1, 1), 0);
        let h = WreathElement::a(spec(2, 1), 0);
        assert!(matches!(g.multiply(&h), Err(Error::SpecMismatch { .. })));
        assert!(GroupSpec::new(0, 1).is_err());
    }

    #[test]
    fn module_action_examples() {
        let s = spec(2, 2);
        let b1 = WreathElement::b(s, 0);
        assert_eq!(b1.module_action(&poly("a1 - 1", 2)).unwrap(), WreathElement::b_pow(s, 0, poly("a1 - 1", 2)));
        assert!(b1.module_action(&LaurentPoly::zero(2)).unwrap().is_identity());
        let b2 = WreathElement::b(s, 1);
        let p = &poly("a1 - 1", 2) * &poly("a2 - 1", 2);
        assert_eq!(b2.module_action(&p).unwrap(), WreathElement::b_pow(s, 1, poly("a1*a2 - a1 - a2 + 1", 2)));
        assert!(matches!(WreathElement::a(s, 0).module_action(&p), Err(Error::Precondition(_))));
    }

    #[test]
    fn membership_examples() {
        let s = spec(1, 1);
        let id = WreathElement::identity(s);
        assert!(id.in_n() && id.in_a());
        let u = WreathElement::b_pow(s, 0, poly("a1 - 1", 1));
        assert!(u.in_n() && !u.in_a());
        let g = WreathElement::new(s, vec![2], vec![LaurentPoly::one(1)]).unwrap();
        assert!(!g.in_n() && !g.in_a());
    }

    #[test]
    fn delta_power_examples() {
        let s = spec(1, 1);
        let c = WreathElement::b(s, 0).commutator(&WreathElement::a(s, 0)).unwrap();
        assert!(c.in_delta_power(1));
        assert!(!c.in_delta_power(2));
        for k in 0..6 {
            assert!(WreathElement::identity(s).in_delta_power(k));
        }
        assert!(!WreathElement::a(s, 0).in_delta_power(0));
    }

    #[test]
    fn lcs_examples() {
        let basis = lcs_basis(2, spec(2, 1)).unwrap();
        assert_eq!(basis.len(), 2);
        let names: Vec<_> = basis.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["[b1,a1]", "[b1,a2]"]);
        assert_eq!(lcs_rank(2, spec(2, 1)).unwrap(), BigInt::from(2));
        assert_eq!(lcs_rank(3, spec(2, 1)).unwrap(), BigInt::from(3));
        assert_eq!(lcs_rank(4, spec(1, 2)).unwrap(), BigInt::from(2));
        assert!(lcs_rank(1, spec(1, 1)).is_err());
    }

    #[test]
    fn literal_round_trip() {
        let s = spec(2, 2);
        let g = WreathElement::parse("{ active: (2,0) ; b1: a1 - 1 }", s).unwrap();
        assert_eq!(g.active(), &[2, 0]);
        assert_eq!(g.coordinate(0), &poly("a1 - 1", 2));
        assert_eq!(WreathElement::parse(&g.to_string(), s).unwrap(), g);
        let id = WreathElement::parse("{active:(0,0); }", s).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.to_string(), "{ active: (0,0) ; }");
        assert!(WreathElement::parse("{ active: (1) ; }", s).is_err());
        assert!(WreathElement::parse("{ active: (1,0) ; b3: 1 }", s).is_err());
        assert!(WreathElement::parse("{ active: (1,0) ; b1: 1, b1: 2 }", s).is_err());
    }

    fn arb_elem(s: GroupSpec) -> impl Strategy<Value = WreathElement> {
        let poly = prop::collection::vec((prop::collection::vec(-3i64..=3, s.m()), -3i64..=3), 0..=4)
            .prop_map(move |ts| {
                LaurentPoly::from_terms(s.m(), ts.into_iter().map(|(e, c)| (Monomial::new(e), BigInt::from(c))))
                    .unwrap()
            });
        (prop::collection::vec(-3i64..=3, s.m()), prop::collection::vec(poly, s.n()))
            .prop_map(move |(a, b)| WreathElement::new(s, a, b).unwrap())
    }

    proptest! {
        #[test]
        fn commutator_with_active_is_module_action(u in arb_elem(spec(2, 2)), x in prop::collection::vec(-3i64..=3, 2)) {
            let u = WreathElement::from_base(u.spec(), u.base().to_vec()).unwrap();
            let xa = WreathElement::from_active(u.spec(), x.clone()).unwrap();
            let p = &LaurentPoly::monomial(Monomial::new(x)) - &LaurentPoly::one(2);
            prop_assert_eq!(u.commutator(&xa).unwrap(), u.module_action(&p).unwrap());
        }

        #[test]
        fn literal_parses_back(g in arb_elem(spec(2, 3))) {
            prop_assert_eq!(WreathElement::parse(&g.to_string(), g.spec()).unwrap(), g);
        }
    }
}
