//! Seeded random generators for the property suites.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equations::Word;
use crate::interp::{IteratedSpec, NestedElement};
use crate::laurent::{augmentation_power, compositions, LaurentPoly, Monomial};
use crate::reduction::IntPolynomial;
use crate::wreath::{GroupSpec, WreathElement};

/// Bounds used for random group elements: exponents in `[-3, 3]`, at most
/// four base terms.
pub const EXP_BOUND: i64 = 3;
pub const MAX_BASE_TERMS: usize = 4;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn nonzero(&mut self, bound: i64) -> i64 {
        loop {
            let c = self.range(-bound, bound);
            if c != 0 {
                return c;
            }
        }
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    pub fn tuple(&mut self, len: usize, bound: i64) -> Vec<i64> {
        (0..len).map(|_| self.range(-bound, bound)).collect()
    }

    pub fn spec(&mut self, max_m: usize, max_n: usize) -> GroupSpec {
        let m = self.rng.gen_range(1..=max_m);
        let n = self.rng.gen_range(1..=max_n);
        GroupSpec::new(m, n).expect("positive ranks")
    }

    pub fn monomial(&mut self, rank: usize, bound: i64) -> Monomial {
        Monomial::new(self.tuple(rank, bound))
    }

    /// Up to `max_terms` terms, exponents in `[-exp_bound, exp_bound]`,
    /// coefficients in `[-coef_bound, coef_bound]`.
    pub fn laurent(&mut self, rank: usize, max_terms: usize, exp_bound: i64, coef_bound: i64) -> LaurentPoly {
        let count = self.rng.gen_range(0..=max_terms);
        let terms: Vec<_> = (0..count)
            .map(|_| (self.monomial(rank, exp_bound), BigInt::from(self.nonzero(coef_bound))))
            .collect();
        LaurentPoly::from_terms(rank, terms).expect("ranks agree")
    }

    /// Base-group element with at most [`MAX_BASE_TERMS`] terms overall.
    pub fn base_element(&mut self, spec: GroupSpec) -> WreathElement {
        let count = self.rng.gen_range(0..=MAX_BASE_TERMS);
        let mut coords = vec![Vec::new(); spec.n()];
        for _ in 0..count {
            let j = self.rng.gen_range(0..spec.n());
            coords[j].push((self.monomial(spec.m(), EXP_BOUND), BigInt::from(self.nonzero(5))));
        }
        let base = coords
            .into_iter()
            .map(|ts| LaurentPoly::from_terms(spec.m(), ts).expect("ranks agree"))
            .collect();
        WreathElement::from_base(spec, base).expect("shape matches spec")
    }

    pub fn nontrivial_base(&mut self, spec: GroupSpec) -> WreathElement {
        loop {
            let u = self.base_element(spec);
            if !u.is_identity() {
                return u;
            }
        }
    }

    pub fn active_element(&mut self, spec: GroupSpec) -> WreathElement {
        WreathElement::from_active(spec, self.tuple(spec.m(), EXP_BOUND)).expect("shape matches spec")
    }

    pub fn nontrivial_active(&mut self, spec: GroupSpec) -> WreathElement {
        loop {
            let x = self.active_element(spec);
            if !x.is_identity() {
                return x;
            }
        }
    }

    pub fn wreath(&mut self, spec: GroupSpec) -> WreathElement {
        let a = self.active_element(spec);
        let u = self.base_element(spec);
        a.multiply(&u).expect("same spec")
    }

    /// Element of the base group lying in `N^{Δ^k}`: a random combination
    /// of `(a - 1)^β` with `|β| = k`.
    pub fn delta_element(&mut self, spec: GroupSpec, k: u64) -> WreathElement {
        let betas = compositions(spec.m(), k);
        let mut coords = vec![LaurentPoly::zero(spec.m()); spec.n()];
        for _ in 0..self.rng.gen_range(0..=3) {
            let beta = betas.choose(&mut self.rng).expect("nonempty").clone();
            let j = self.rng.gen_range(0..spec.n());
            let c = self.laurent(spec.m(), 2, 2, 3);
            coords[j] = &coords[j] + &(&c * &augmentation_power(spec.m(), &beta));
        }
        WreathElement::from_base(spec, coords).expect("shape matches spec")
    }

    /// Random `f` with at most `max_vars` variables, total degree at most
    /// `max_degree`, `|t_α| <= coef_bound` and at most `max_terms` terms.
    pub fn int_polynomial(&mut self, max_vars: usize, max_degree: u32, coef_bound: i64, max_terms: usize) -> IntPolynomial {
        let s = self.rng.gen_range(1..=max_vars);
        let count = self.rng.gen_range(1..=max_terms);
        let terms: Vec<_> = (0..count)
            .map(|_| {
                let budget = self.rng.gen_range(0..=max_degree);
                let mut alpha = vec![0u32; s];
                for _ in 0..budget {
                    alpha[self.rng.gen_range(0..s)] += 1;
                }
                (alpha, BigInt::from(self.nonzero(coef_bound)))
            })
            .collect();
        IntPolynomial::from_terms(s, terms).expect("exponent vectors have length s")
    }

    /// Nonconstant `f` together with a root `z`, obtained by shifting the
    /// constant term.
    pub fn planted_root(&mut self) -> (IntPolynomial, Vec<i64>) {
        loop {
            let f = self.int_polynomial(3, 3, 10, 5);
            if f.degree() == 0 {
                continue;
            }
            let z = self.tuple(f.vars(), 5);
            let value = f.evaluate(&z).expect("tuple length matches");
            return (f.add_constant(&-value), z);
        }
    }

    pub fn nested(&mut self, spec: &IteratedSpec) -> NestedElement {
        match spec.inner() {
            None => NestedElement::Abelian(self.tuple(spec.ranks()[0], 2)),
            Some(inner) => {
                let active = self.nested(&inner);
                let count = self.rng.gen_range(0..=3);
                let base: Vec<_> = (0..count)
                    .map(|_| {
                        let key = self.nested(&inner);
                        let v = self.tuple(spec.outer_rank(), 3).into_iter().map(BigInt::from).collect();
                        (key, v)
                    })
                    .collect();
                NestedElement::wreath(active, base, spec.outer_rank()).expect("generated in shape")
            }
        }
    }

    /// Random word over `vars` of nesting depth at most `depth`.
    pub fn word<E>(&mut self, vars: &[&str], depth: u32, constant: &mut dyn FnMut(&mut Sampler) -> E) -> Word<E> {
        let leaf = depth == 0 || self.rng.gen_range(0..4) == 0;
        if leaf {
            return match self.rng.gen_range(0..5) {
                0 => Word::constant(constant(self)),
                1 => Word::var_inv(*vars.choose(&mut self.rng).expect("nonempty")),
                _ => Word::var(*vars.choose(&mut self.rng).expect("nonempty")),
            };
        }
        match self.rng.gen_range(0..3) {
            0 => {
                let len = self.rng.gen_range(0..=3);
                Word::concat((0..len).map(|_| self.word(vars, depth - 1, constant)).collect())
            }
            1 => {
                let u = self.word(vars, depth - 1, constant);
                let v = self.word(vars, depth - 1, constant);
                Word::commutator(u, v)
            }
            _ => {
                let e = self.range(-2, 2);
                Word::power(self.word(vars, depth - 1, constant), e)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let spec = GroupSpec::new(2, 2).unwrap();
        let a: Vec<_> = (0..5).map({
            let mut s = Sampler::new(7);
            move |_| s.wreath(spec)
        }).collect();
        let b: Vec<_> = (0..5).map({
            let mut s = Sampler::new(7);
            move |_| s.wreath(spec)
        }).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn bounds_hold() {
        let mut s = Sampler::new(1);
        for _ in 0..200 {
            let spec = s.spec(3, 3);
            let g = s.wreath(spec);
            assert!(g.active().iter().all(|e| e.abs() <= EXP_BOUND));
            assert!(g.base().iter().map(LaurentPoly::len).sum::<usize>() <= MAX_BASE_TERMS);
            let f = s.int_polynomial(3, 3, 10, 5);
            assert!(f.vars() <= 3 && f.degree() <= 3 && f.terms().count() <= 5);
        }
    }

    #[test]
    fn planted_roots_are_roots() {
        let mut s = Sampler::new(3);
        for _ in 0..50 {
            let (f, z) = s.planted_root();
            assert!(f.degree() >= 1);
            assert_eq!(f.evaluate(&z).unwrap(), BigInt::from(0));
        }
    }

    #[test]
    fn delta_elements_are_members() {
        let mut s = Sampler::new(4);
        for k in 1..=4 {
            let spec = s.spec(2, 2);
            assert!(s.delta_element(spec, k).in_delta_power(k));
        }
    }
}
