//! Compiler from integer polynomial equations `f(z) = 0` to systems of
//! group equations over `G = ℤⁿ ≀ ℤᵐ`, with witnesses, solution extraction
//! and a direct check in ℤA.
//!
//! For `f = Σ t_α z^α` of total degree `d`, an integer tuple `z` is encoded
//! by `x_i = a1^{z_i}` and `f` by
//! `e_f = Σ t_α (a1 - 1)^{d - |α|} Π (x_i - 1)^{α_i} ∈ ℤA`, which lies in
//! `Δ^{d+1}` exactly when `f(z) = 0`. The system forces every `x_i` into
//! `⟨a1⟩`, builds `b1^{e_f}` from commutators and constrains it to
//! `N^{Δ^{d+1}}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::equations::{extend_by_definitions, Assignment, Definition, Equation, System, Word};
use crate::error::{Error, Result};
use crate::gadgets::{
    define_flat, gadget_cyclic, gadget_delta_power, witness_cyclic, witness_delta_power, CyclicGadget,
    DeltaPowerGadget, GadgetNames,
};
use crate::laurent::{AugValuation, LaurentPoly, Monomial};
use crate::syntax::Cursor;
use crate::wreath::{GroupSpec, WreathElement};

/// Sparse integer polynomial in `z1, ..., zs` with non-negative exponents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPolynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPolynomial {
    pub fn zero(vars: usize) -> Self {
        IntPolynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (alpha, c) in terms {
            if alpha.len() != vars {
                return Err(Error::RankMismatch {
                    left: vars,
                    right: alpha.len(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, alpha: Vec<u32>, c: BigInt) {
        let entry = self.terms.entry(alpha).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// Number of variables `s`.
    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    /// Total degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|a| a.iter().map(|&e| e as u64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&vec![0; self.vars]).cloned().unwrap_or_default()
    }

    /// `self + c`.
    pub fn add_constant(&self, c: &BigInt) -> IntPolynomial {
        let mut out = self.clone();
        out.add_term(vec![0; self.vars], c.clone());
        out
    }

    pub fn evaluate(&self, z: &[i64]) -> Result<BigInt> {
        if z.len() != self.vars {
            return Err(Error::Usage(format!(
                "polynomial has {} variables, got a tuple of length {}",
                self.vars,
                z.len()
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|(alpha, c)| {
                alpha
                    .iter()
                    .zip(z)
                    .fold(c.clone(), |acc, (&e, &zi)| acc * BigInt::from(zi).pow(e))
            })
            .sum())
    }

    /// Parses e.g. `z1^2*z2 - 3*z1 + 7`. The number of variables is the
    /// largest index used, or `min_vars` if that is larger.
    pub fn parse(text: &str, min_vars: usize) -> Result<IntPolynomial> {
        let mut cur = Cursor::new(text);
        let mut raw: Vec<(BTreeMap<usize, u32>, BigInt)> = Vec::new();
        let mut negative = if cur.eat('-') {
            true
        } else {
            cur.eat('+');
            false
        };
        loop {
            let mut coeff = BigInt::one();
            let mut exps = BTreeMap::new();
            loop {
                match cur.peek() {
                    Some(c) if c.is_ascii_digit() => coeff *= cur.natural()?,
                    Some('z') => {
                        let before = cur.clone();
                        let name = cur.ident().unwrap_or_default();
                        let index: usize = match name[1..].parse() {
                            Ok(i) if i >= 1 => i,
                            _ => return before.error(format!("unknown variable `{name}`, expected z1, z2, ...")),
                        };
                        let e = if cur.eat('^') {
                            let here = cur.clone();
                            let e = cur.small_integer()?;
                            u32::try_from(e).or_else(|_| here.error("exponents must be non-negative"))?
                        } else {
                            1
                        };
                        *exps.entry(index).or_insert(0) += e;
                    }
                    Some(c) => return cur.error(format!("expected a coefficient or variable, found `{c}`")),
                    None => return cur.error("expected a coefficient or variable, found end of input"),
                }
                if !cur.eat('*') {
                    break;
                }
            }
            raw.push((exps, if negative { -coeff } else { coeff }));
            if cur.eat('+') {
                negative = false;
            } else if cur.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        cur.expect_end()?;
        let vars = raw
            .iter()
            .flat_map(|(e, _)| e.keys().copied())
            .max()
            .unwrap_or(0)
            .max(min_vars);
        let mut p = IntPolynomial::zero(vars);
        for (exps, c) in raw {
            let mut alpha = vec![0u32; vars];
            for (i, e) in exps {
                alpha[i - 1] = e;
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (alpha, c)) in terms.into_iter().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = alpha
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{e}", i + 1) })
                .collect();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The term `t_α z^α` together with the variable carrying `b1^{e_α}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub alpha: Vec<u32>,
    pub coefficient: BigInt,
    pub var: String,
}

/// Output of [`compile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutput {
    pub spec: GroupSpec,
    pub polynomial: IntPolynomial,
    pub system: System<WreathElement>,
    /// `x1, ..., xs`, bound to `z1, ..., zs`.
    pub solution_vars: Vec<String>,
    /// Total degree of the input.
    pub d: u64,
    /// Variable whose value is `b1^{e_f}`; absent for the zero polynomial.
    pub product_var: Option<String>,
    pub cyclic: Vec<CyclicGadget>,
    pub summands: Vec<Summand>,
    pub delta: Option<DeltaPowerGadget>,
    /// Variables determined by the solution variables, in evaluation order.
    derived: Vec<Definition<WreathElement>>,
}

pub fn compile(f: &IntPolynomial, spec: GroupSpec) -> ReductionOutput {
    let solution_vars: Vec<String> = (1..=f.vars()).map(|i| format!("x{i}")).collect();
    let d = f.degree();
    let mut out = ReductionOutput {
        spec,
        polynomial: f.clone(),
        system: System::new(),
        solution_vars,
        d,
        product_var: None,
        cyclic: Vec::new(),
        summands: Vec::new(),
        delta: None,
        derived: Vec::new(),
    };
    // every integer tuple solves f ≡ 0; its image is the empty system
    if f.is_zero() {
        return out;
    }

    let mut names = GadgetNames::new();
    for x in &out.solution_vars {
        let g = gadget_cyclic(x, spec, &mut names);
        out.system.extend(g.gadget.system.clone());
        out.cyclic.push(g);
    }

    let a1 = Word::constant(WreathElement::a(spec, 0));
    for (alpha, t) in f.terms() {
        let var = names.fresh("red", "y");
        let size: u64 = alpha.iter().map(|&e| e as u64).sum();
        let head = Word::constant(WreathElement::b_pow(spec, 0, LaurentPoly::constant(spec.m(), t.clone())));
        let tail = std::iter::repeat_n(a1.clone(), (d - size) as usize).chain(
            alpha
                .iter()
                .zip(&out.solution_vars)
                .flat_map(|(&e, x)| std::iter::repeat_n(Word::var(x.clone()), e as usize)),
        );
        let chain = Word::left_normed(head, tail);
        define_flat(&var, &chain, names.supply("red", "t"), &mut out.system, &mut out.derived);
        out.summands.push(Summand {
            alpha: alpha.clone(),
            coefficient: t.clone(),
            var,
        });
    }

    let product = "red_y".to_string();
    let def = Definition {
        var: product.clone(),
        word: Word::concat(out.summands.iter().map(|s| Word::var(s.var.clone())).collect()),
    };
    out.system.push(Equation::new(Word::var(product.clone()), def.word.clone()));
    out.derived.push(def);

    let delta = gadget_delta_power(&product, d + 1, spec, &mut names).expect("d + 1 ≥ 1");
    out.system.extend(delta.gadget.system.clone());
    out.delta = Some(delta);
    out.product_var = Some(product);
    out
}

impl ReductionOutput {
    /// Assignment satisfying the compiled system, built from a root `z`.
    pub fn witness(&self, z: &[i64]) -> Result<Assignment<WreathElement>> {
        let value = self.polynomial.evaluate(z)?;
        if !value.is_zero() {
            return Err(Error::precondition(format!(
                "({}) is not a root of {}: f(z) = {value}",
                join(z),
                self.polynomial
            )));
        }
        let mut asg = Assignment::new();
        if self.polynomial.is_zero() {
            return Ok(asg);
        }
        for (g, &zi) in self.cyclic.iter().zip(z) {
            asg.extend(witness_cyclic(g, zi, self.spec));
        }
        extend_by_definitions(&self.derived, &mut asg, &self.spec)?;
        let delta = self.delta.as_ref().expect("non-zero polynomial has a Δ gadget");
        let y = asg.get(&delta.x).expect("product variable is derived").clone();
        asg.extend(witness_delta_power(delta, &y)?);
        Ok(asg)
    }

    /// Reads `z` back from an assignment whose `x_i` are powers of `a1`.
    pub fn extract_solution(&self, asg: &Assignment<WreathElement>) -> Result<Vec<i64>> {
        self.solution_vars
            .iter()
            .map(|x| {
                let g = asg.get(x).ok_or_else(|| Error::UnboundVariable(x.clone()))?;
                if g.spec() != self.spec {
                    return Err(Error::spec_mismatch(g.spec(), self.spec));
                }
                if !g.in_a() || g.active()[1..].iter().any(|&e| e != 0) {
                    return Err(Error::precondition(format!(
                        "{x} = {g} is not a power of a1, so it cannot satisfy the cyclic gadget"
                    )));
                }
                Ok(g.active()[0])
            })
            .collect()
    }
}

pub fn witness(f: &IntPolynomial, z: &[i64], spec: GroupSpec) -> Result<Assignment<WreathElement>> {
    compile(f, spec).witness(z)
}

pub fn extract_solution(out: &ReductionOutput, asg: &Assignment<WreathElement>) -> Result<Vec<i64>> {
    out.extract_solution(asg)
}

fn join(z: &[i64]) -> String {
    z.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// `e_f` computed directly in ℤA and its `Δ^{d+1}` membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub e_f: LaurentPoly,
    pub d: u64,
    pub valuation: AugValuation,
    pub member: bool,
}

impl fmt::Display for OracleResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let need = self.d + 1;
        if self.member {
            write!(f, "valuation {} >= {need}: solution", self.valuation)
        } else {
            write!(f, "valuation {} < {need}: NOT a solution", self.valuation)
        }
    }
}

/// `e_α = t_α (a1 - 1)^{d - |α|} Π (a1^{z_i} - 1)^{α_i}` for every term.
pub fn oracle_summands(f: &IntPolynomial, z: &[i64], m: usize) -> Result<Vec<LaurentPoly>> {
    if z.len() != f.vars() {
        return Err(Error::Usage(format!(
            "polynomial has {} variables, got a tuple of length {}",
            f.vars(),
            z.len()
        )));
    }
    let d = f.degree();
    let y1 = LaurentPoly::aug_generator(m, 0);
    let shifted: Vec<LaurentPoly> = z
        .iter()
        .map(|&zi| {
            let mut e = vec![0; m];
            e[0] = zi;
            &LaurentPoly::monomial(Monomial::new(e)) - &LaurentPoly::one(m)
        })
        .collect();
    Ok(f.terms()
        .map(|(alpha, t)| {
            let size: u64 = alpha.iter().map(|&e| e as u64).sum();
            alpha
                .iter()
                .zip(&shifted)
                .fold(y1.pow((d - size) as u32).scale(t), |acc, (&e, p)| &acc * &p.pow(e))
        })
        .collect())
}

pub fn oracle_ef(f: &IntPolynomial, z: &[i64], m: usize) -> Result<OracleResult> {
    let e_f = oracle_summands(f, z, m)?
        .into_iter()
        .fold(LaurentPoly::zero(m), |acc, e| acc + e);
    let d = f.degree();
    let valuation = e_f.aug_valuation();
    Ok(OracleResult {
        member: valuation.at_least(d + 1),
        e_f,
        d,
        valuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::{check_system, evaluate};

    fn spec() -> GroupSpec {
        GroupSpec::new(1, 1).unwrap()
    }

    fn poly(text: &str) -> IntPolynomial {
        IntPolynomial::parse(text, 0).unwrap()
    }

    #[test]
    fn polynomial_parse_and_display() {
        let f = poly("z1^2*z2 - 3*z1 + 7");
        assert_eq!(f.vars(), 2);
        assert_eq!(f.degree(), 3);
        assert_eq!(f.to_string(), "z1^2*z2 - 3*z1 + 7");
        assert_eq!(IntPolynomial::parse(&f.to_string(), 0).unwrap(), f);
        assert_eq!(f.evaluate(&[2, 5]).unwrap(), BigInt::from(21));
        assert!(poly("z1 - z1").is_zero());
        assert_eq!(poly("7").vars(), 0);
        assert_eq!(IntPolynomial::parse("z1", 3).unwrap().vars(), 3);
        assert!(IntPolynomial::parse("z1^-1", 0).is_err());
        assert!(IntPolynomial::parse("x1", 0).is_err());
        assert!(IntPolynomial::parse("z0", 0).is_err());
    }

    #[test]
    fn compile_linear_example() {
        let out = compile(&poly("z1 - 2"), spec());
        assert_eq!(out.d, 1);
        assert_eq!(out.solution_vars, ["x1"]);
        assert_eq!(out.summands.len(), 2);
        // support {(0) ↦ -2, (1) ↦ 1}
        assert_eq!(out.summands[0].alpha, [0]);
        assert_eq!(out.summands[0].coefficient, BigInt::from(-2));
        assert_eq!(out.summands[1].alpha, [1]);
        assert_eq!(out.delta.as_ref().unwrap().k, 2);
        assert_eq!(out.cyclic.len(), 1);
    }

    #[test]
    fn compile_zero_polynomial() {
        let out = compile(&IntPolynomial::zero(1), spec());
        assert!(out.system.is_empty());
        assert!(out.system.declared_vars().is_empty());
        let w = out.witness(&[5]).unwrap();
        assert!(w.is_empty());
        assert!(check_system(&out.system, &w, &spec()).unwrap().is_satisfied());
    }

    #[test]
    fn compile_constant_polynomial() {
        let f = poly("7");
        let out = compile(&f, spec());
        assert_eq!(out.d, 0);
        assert_eq!(out.delta.as_ref().unwrap().k, 1);
        let o = oracle_ef(&f, &[], 1).unwrap();
        assert_eq!(o.e_f, LaurentPoly::constant(1, 7));
        assert_eq!(o.valuation, AugValuation::Finite(0));
        assert!(!o.member);
        assert!(matches!(out.witness(&[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn witness_linear_example() {
        let f = poly("z1 - 2");
        let out = compile(&f, spec());
        let w = out.witness(&[2]).unwrap();
        assert_eq!(w.get("x1").unwrap(), &WreathElement::a_pow(spec(), 0, 2));
        let y = w.get("red_y").unwrap();
        let expected = LaurentPoly::parse("a1^2 - 2*a1 + 1", 1).unwrap();
        assert_eq!(y, &WreathElement::b_pow(spec(), 0, expected));
        assert!(check_system(&out.system, &w, &spec()).unwrap().is_satisfied());
        assert_eq!(out.extract_solution(&w).unwrap(), [2]);
    }

    #[test]
    fn witness_rejects_non_roots() {
        let out = compile(&poly("z1 - 2"), spec());
        match out.witness(&[3]).unwrap_err() {
            Error::Precondition(msg) => assert!(msg.contains("f(z) = 1"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(out.witness(&[1, 2]).is_err());
    }

    #[test]
    fn witness_two_variable_example() {
        let s = GroupSpec::new(2, 2).unwrap();
        let f = poly("z1*z2 - 6");
        let out = compile(&f, s);
        let w = out.witness(&[2, 3]).unwrap();
        assert!(check_system(&out.system, &w, &s).unwrap().is_satisfied());
        assert_eq!(out.extract_solution(&w).unwrap(), [2, 3]);
    }

    #[test]
    fn extract_examples() {
        let out = compile(&poly("z1 - 2"), GroupSpec::new(2, 1).unwrap());
        let mut asg = Assignment::new();
        asg.insert("x1", WreathElement::identity(out.spec));
        assert_eq!(out.extract_solution(&asg).unwrap(), [0]);
        asg.insert("x1", WreathElement::a(out.spec, 1));
        assert!(matches!(out.extract_solution(&asg), Err(Error::Precondition(_))));
        assert!(matches!(out.extract_solution(&Assignment::new()), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn oracle_examples() {
        let f = poly("z1 - 2");
        let o = oracle_ef(&f, &[3], 1).unwrap();
        assert_eq!(o.e_f, LaurentPoly::parse("a1^3 - 2*a1 + 1", 1).unwrap());
        assert_eq!(o.valuation, AugValuation::Finite(1));
        assert!(!o.member);
        assert_eq!(o.to_string(), "valuation 1 < 2: NOT a solution");

        let o = oracle_ef(&f, &[2], 1).unwrap();
        assert!(o.member);
        assert_eq!(o.e_f, LaurentPoly::aug_generator(1, 0).pow(2));

        let o = oracle_ef(&IntPolynomial::zero(1), &[4], 1).unwrap();
        assert!(o.e_f.is_zero() && o.member);
    }

    #[test]
    fn group_path_matches_ring_path() {
        let s = GroupSpec::new(1, 1).unwrap();
        let f = poly("z1^2 - 2*z1*z2 + 3");
        let out = compile(&f, s);
        for z in [[1, 2], [0, 0], [-2, 3]] {
            let mut asg = Assignment::new();
            for (g, &zi) in out.cyclic.iter().zip(&z) {
                asg.extend(witness_cyclic(g, zi, s));
            }
            extend_by_definitions(&out.derived, &mut asg, &s).unwrap();
            let y = evaluate(&Word::var("red_y"), &asg, &s).unwrap();
            assert_eq!(y.coordinate(0), &oracle_ef(&f, &z, 1).unwrap().e_f);
        }
    }
}
