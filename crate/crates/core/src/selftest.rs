//! Randomized property suites shared by the acceptance harness and the
//! `selftest` command. Each suite is deterministic in its seed.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::equations::{check_system, evaluate, extend_by_definitions, flatten, Assignment, Equation, FreshNames, System, Word};
use crate::gadgets::{gadget_cyclic, gadget_delta_power, witness_cyclic, witness_delta_power, GadgetNames};
use crate::interp::{lift_system, project_assignment, IteratedSpec, NestedElement};
use crate::laurent::{augmentation_power, compositions, geom_series, LaurentPoly};
use crate::reduction::{compile, oracle_ef};
use crate::sample::Sampler;
use crate::wreath::{GroupSpec, WreathElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "ok" } else { "FAIL" };
        write!(
            f,
            "{verdict} {}: {} samples, {} violations",
            self.name, self.samples, self.violations
        )?;
        if let Some(v) = &self.first_violation {
            write!(f, " (first: {v})")?;
        }
        Ok(())
    }
}

type Check = std::result::Result<(), String>;

fn run(name: &'static str, samples: usize, seed: u64, mut body: impl FnMut(&mut Sampler) -> Check) -> SuiteReport {
    let mut sampler = Sampler::new(seed);
    let mut violations = 0;
    let mut first_violation = None;
    for _ in 0..samples {
        if let Err(e) = body(&mut sampler) {
            violations += 1;
            first_violation.get_or_insert(e);
        }
    }
    SuiteReport {
        name,
        samples,
        violations,
        first_violation,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn laurent_ring_axioms(samples: usize, seed: u64) -> SuiteReport {
    run("laurent ring axioms", samples, seed, |s| {
        let m = s.spec(3, 1).m();
        let p = s.laurent(m, 4, 3, 5);
        let q = s.laurent(m, 4, 3, 5);
        let r = s.laurent(m, 4, 3, 5);
        ensure(&(&p + &q) + &r == &p + &(&q + &r), || format!("+ not associative at {p}, {q}, {r}"))?;
        ensure(&(&p * &q) * &r == &p * &(&q * &r), || format!("* not associative at {p}, {q}, {r}"))?;
        ensure(&p + &q == &q + &p, || format!("+ not commutative at {p}, {q}"))?;
        ensure(&p * &q == &q * &p, || format!("* not commutative at {p}, {q}"))?;
        ensure(&p * &(&q + &r) == &(&p * &q) + &(&p * &r), || {
            format!("not distributive at {p}, {q}, {r}")
        })?;
        ensure((&p + &(-p.clone())).is_zero(), || format!("p + (-p) != 0 at {p}"))?;
        ensure(&p * &LaurentPoly::one(m) == p, || format!("p * 1 != p at {p}"))?;
        ensure(&p + &LaurentPoly::zero(m) == p, || format!("p + 0 != p at {p}"))
    })
}

pub fn laurent_valuation_laws(samples: usize, seed: u64) -> SuiteReport {
    run("augmentation valuation laws", samples, seed, |s| {
        let m = s.spec(3, 1).m();
        let p = s.laurent(m, 4, 3, 5);
        let q = s.laurent(m, 4, 3, 5);
        let vp = p.aug_valuation();
        let vq = q.aug_valuation();
        if let (crate::AugValuation::Finite(a), crate::AugValuation::Finite(b)) = (vp, vq) {
            ensure((&p * &q).aug_valuation() == crate::AugValuation::Finite(a + b), || {
                format!("valuation not multiplicative at {p}, {q}")
            })?;
        }
        ensure((&p + &q).aug_valuation() >= vp.min(vq), || {
            format!("valuation not superadditive at {p}, {q}")
        })?;
        let unit = LaurentPoly::monomial(s.monomial(m, 3));
        ensure((&unit * &p).aug_valuation() == vp, || format!("valuation not unit invariant at {p}"))?;
        // recomposition on a guaranteed member
        let k = s.range(1, 3) as u64;
        let member = &p * &augmentation_power(m, &compositions(m, k)[0]);
        let parts = ok(member.delta_decompose(k))?;
        let back = parts
            .iter()
            .fold(LaurentPoly::zero(m), |acc, (beta, c)| acc + c * &augmentation_power(m, beta));
        ensure(back == member, || format!("delta_decompose({member}, {k}) does not recompose"))?;
        let gamma = s.range(-50, 50);
        let lhs = &geom_series(m, gamma) * &LaurentPoly::aug_generator(m, 0);
        let mut e = vec![0; m];
        e[0] = gamma;
        let rhs = &LaurentPoly::monomial(crate::Monomial::new(e)) - &LaurentPoly::one(m);
        ensure(lhs == rhs, || format!("geom_series contract fails at gamma = {gamma}"))
    })
}

pub fn wreath_group_axioms(samples: usize, seed: u64) -> SuiteReport {
    run("wreath group axioms", samples, seed, |s| {
        let spec = s.spec(3, 3);
        let g = s.wreath(spec);
        let h = s.wreath(spec);
        let k = s.wreath(spec);
        let gh = ok(g.multiply(&h))?;
        let lhs = ok(gh.multiply(&k))?;
        let rhs = ok(g.multiply(&ok(h.multiply(&k))?))?;
        ensure(lhs == rhs, || format!("not associative at {g}, {h}, {k}"))?;
        ensure(ok(g.multiply(&g.inverse()))?.is_identity(), || format!("g g^-1 != 1 at {g}"))?;
        ensure(ok(g.inverse().multiply(&g))?.is_identity(), || format!("g^-1 g != 1 at {g}"))?;
        let e = WreathElement::identity(spec);
        ensure(ok(g.multiply(&e))? == g && ok(e.multiply(&g))? == g, || {
            format!("identity law fails at {g}")
        })?;
        // conjugation by an active element acts on base coordinates as the monomial
        let u = s.base_element(spec);
        let x = s.active_element(spec);
        let mono = LaurentPoly::monomial(x.active_monomial());
        let action = ok(u.module_action(&(&mono - &LaurentPoly::one(spec.m()))))?;
        ensure(ok(u.commutator(&x))? == action, || format!("[u, x] != u^(x-1) at {u}, {x}"))
    })
}

/// Centralizer of a base element: for nontrivial `u ∈ N`, `[g, u] = 1` iff `g ∈ N`.
pub fn centralizer_of_base(samples: usize, seed: u64) -> Vec<SuiteReport> {
    let forward = run("centralizer of base element: g in N commutes", samples, seed, |s| {
        let spec = s.spec(3, 3);
        let u = s.nontrivial_base(spec);
        let g = s.base_element(spec);
        ensure(ok(g.commutator(&u))?.is_identity(), || format!("[{g}, {u}] != 1"))
    });
    let backward = run("centralizer of base element: commuting g lies in N", samples, seed ^ 0x5a5a, |s| {
        let spec = s.spec(3, 3);
        let u = s.nontrivial_base(spec);
        let g = if s.coin() { s.wreath(spec) } else { s.base_element(spec) };
        let commutes = ok(g.commutator(&u))?.is_identity();
        ensure(!commutes || g.in_n(), || format!("{g} commutes with {u} but is not in N"))?;
        ensure(commutes || !g.in_n(), || format!("{g} in N does not commute with {u}"))
    });
    vec![forward, backward]
}

/// Centralizer of an active element: for nontrivial `x ∈ A`, `[g, x] = 1` iff `g ∈ A`.
pub fn centralizer_of_active(samples: usize, seed: u64) -> Vec<SuiteReport> {
    let forward = run("centralizer of active element: g in A commutes", samples, seed, |s| {
        let spec = s.spec(3, 3);
        let x = s.nontrivial_active(spec);
        let g = s.active_element(spec);
        ensure(ok(g.commutator(&x))?.is_identity(), || format!("[{g}, {x}] != 1"))
    });
    let backward = run("centralizer of active element: commuting g lies in A", samples, seed ^ 0xa5a5, |s| {
        let spec = s.spec(3, 3);
        let x = s.nontrivial_active(spec);
        let g = if s.coin() { s.wreath(spec) } else { s.active_element(spec) };
        let commutes = ok(g.commutator(&x))?.is_identity();
        ensure(!commutes || g.in_a(), || format!("{g} commutes with {x} but is not in A"))?;
        ensure(commutes || !g.in_a(), || format!("{g} in A does not commute with {x}"))
    });
    vec![forward, backward]
}

pub fn nested_group_axioms(samples: usize, seed: u64) -> SuiteReport {
    run("nested wreath group axioms", samples, seed, |s| {
        let depth = s.range(1, 3) as usize;
        let ranks: Vec<usize> = (0..depth).map(|_| s.range(1, 2) as usize).collect();
        let spec = IteratedSpec::new(ranks).expect("positive ranks");
        let g = s.nested(&spec);
        let h = s.nested(&spec);
        let k = s.nested(&spec);
        let lhs = ok(ok(g.multiply(&h))?.multiply(&k))?;
        let rhs = ok(g.multiply(&ok(h.multiply(&k))?))?;
        ensure(lhs == rhs, || format!("not associative at {g}, {h}, {k}"))?;
        ensure(ok(g.multiply(&g.inverse()))?.is_identity(), || format!("g g^-1 != 1 at {g}"))?;
        ensure(ok(g.inverse().multiply(&g))?.is_identity(), || format!("g^-1 g != 1 at {g}"))?;
        let e = NestedElement::identity(&spec);
        ensure(ok(g.multiply(&e))? == g && ok(e.multiply(&g))? == g, || {
            format!("identity law fails at {g}")
        })?;
        if depth >= 2 {
            let pg = ok(g.project())?;
            let ph = ok(h.project())?;
            ensure(ok(ok(g.multiply(&h))?.project())? == ok(pg.multiply(&ph))?, || {
                format!("project is not a homomorphism at {g}, {h}")
            })?;
        }
        Ok(())
    })
}

pub fn nested_flat_agreement(samples: usize, seed: u64) -> SuiteReport {
    run("two-level nested and flat products agree", samples, seed, |s| {
        let spec = s.spec(3, 3);
        let g = s.wreath(spec);
        let h = s.wreath(spec);
        let ng = NestedElement::from_flat(&g);
        let nh = NestedElement::from_flat(&h);
        ensure(ok(ng.to_flat())? == g, || format!("conversion does not round trip at {g}"))?;
        let product = ok(ng.multiply(&nh))?;
        ensure(ok(product.to_flat())? == ok(g.multiply(&h))?, || format!("products differ at {g}, {h}"))?;
        ensure(ok(ng.inverse().to_flat())? == g.inverse(), || format!("inverses differ at {g}"))
    })
}

/// Lifting soundness and projection completeness on `{x c^-1 = 1, [x, d] = [d, x]}`.
pub fn lifting_laws(samples: usize, seed: u64) -> SuiteReport {
    run("system lifting and projection", samples, seed, |s| {
        let inner_ranks: Vec<usize> = (0..s.range(1, 2)).map(|_| s.range(1, 2) as usize).collect();
        let inner = IteratedSpec::new(inner_ranks).expect("positive ranks");
        let c = s.nested(&inner);
        let d = s.nested(&inner);
        let mut sys = System::new();
        sys.push(Equation::new(Word::var("x"), Word::constant(c.clone())));
        sys.push(Equation::new(
            Word::concat(vec![Word::var("y"), Word::constant(d.clone())]),
            Word::concat(vec![Word::constant(d.clone()), Word::var("y")]),
        ));
        let mut asg = Assignment::new();
        asg.insert("x", c.clone());
        asg.insert("y", d.clone());
        ensure(ok(check_system(&sys, &asg, &inner))?.is_satisfied(), || "base assignment fails".into())?;

        let outer = s.range(1, 2) as usize;
        let lifted = ok(lift_system(&sys, &inner, outer))?;
        let up = lifted.lift_assignment(&asg);
        ensure(ok(check_system(&lifted.system, &up, &lifted.spec))?.is_satisfied(), || {
            format!("lifted assignment fails over {}", lifted.spec)
        })?;

        // perturb x and y by base elements and solve for the t's
        let mut other = Assignment::new();
        for (name, value) in up.iter().filter(|(n, _)| !lifted.t_vars.contains(n)) {
            let wiggle = NestedElement::wreath(
                NestedElement::identity(&inner),
                [(s.nested(&inner), s.tuple(outer, 2).into_iter().map(BigInt::from).collect())],
                outer,
            );
            other.insert(name.clone(), ok(value.multiply(&ok(wiggle)?))?);
        }
        for (eq, t) in sys.equations().iter().zip(&lifted.t_vars) {
            let lhs = ok(eq.lhs.map_constants(&mut |c: &NestedElement| Ok(NestedElement::embed(c.clone(), outer))))?;
            other.insert(t.clone(), ok(evaluate(&lhs, &other, &lifted.spec))?);
        }
        ensure(ok(check_system(&lifted.system, &other, &lifted.spec))?.is_satisfied(), || {
            "perturbed assignment does not satisfy the lift".into()
        })?;
        let down = ok(project_assignment(&other))?;
        ensure(ok(check_system(&sys, &down, &inner))?.is_satisfied(), || {
            "projection of a lifted solution fails".into()
        })
    })
}

pub fn flatten_equivalence(samples: usize, seed: u64) -> SuiteReport {
    run("flattening preserves values", samples, seed, |s| {
        let spec = s.spec(2, 2);
        let vars = ["x", "y", "z"];
        let w = s.word(&vars, 4, &mut |s: &mut Sampler| s.wreath(spec));
        let mut asg = Assignment::new();
        for v in vars {
            asg.insert(v, s.wreath(spec));
        }
        let flat = flatten(&w, &mut FreshNames::new("t"));
        let mut extended = asg.clone();
        ok(extend_by_definitions(&flat.definitions, &mut extended, &spec))?;
        let aux = flat.aux_system();
        ensure(ok(check_system(&aux, &extended, &spec))?.is_satisfied(), || {
            format!("definitions of {w} not satisfied by their own values")
        })?;
        let original = ok(evaluate(&w, &asg, &spec))?;
        let flattened = ok(evaluate(&flat.word, &extended, &spec))?;
        ensure(original == flattened, || format!("flattening changes the value of {w}"))?;
        // fresh values are forced: moving one breaks the auxiliary system
        if let Some(def) = flat.definitions.first() {
            let mut moved = extended.clone();
            let bumped = ok(extended.get(&def.var).expect("defined").multiply(&WreathElement::b(spec, 0)))?;
            moved.insert(def.var.clone(), bumped);
            ensure(!ok(check_system(&aux, &moved, &spec))?.is_satisfied(), || {
                format!("value of {} is not determined in {w}", def.var)
            })?;
        }
        Ok(())
    })
}

/// `oracle_ef` agrees with evaluation of `f`; also reports how many samples
/// were roots so callers can see both verdicts were exercised.
pub fn oracle_equivalence(samples: usize, seed: u64) -> (SuiteReport, usize) {
    let mut roots = 0;
    let report = run("oracle agrees with polynomial evaluation", samples, seed, |s| {
        let f = s.int_polynomial(3, 3, 10, 5);
        let z = s.tuple(f.vars(), 5);
        let value = ok(f.evaluate(&z))?;
        let oracle = ok(oracle_ef(&f, &z, 1))?;
        roots += usize::from(value.is_zero());
        ensure(oracle.member == value.is_zero(), || {
            format!("f = {f}, z = {z:?}: f(z) = {value} but oracle says {oracle}")
        })?;
        ensure(oracle.valuation.at_least(oracle.d), || format!("e_f below level d for f = {f}"))
    });
    (report, roots)
}

pub fn reduction_round_trip(samples: usize, seed: u64) -> SuiteReport {
    run("reduction witness verifies and extracts", samples, seed, |s| {
        let (f, z) = s.planted_root();
        let spec = GroupSpec::new(s.range(1, 2) as usize, s.range(1, 2) as usize).expect("positive ranks");
        let out = compile(&f, spec);
        let asg = ok(out.witness(&z))?;
        ensure(ok(check_system(&out.system, &asg, &spec))?.is_satisfied(), || {
            format!("witness for f = {f} at {z:?} fails")
        })?;
        let product = out.product_var.as_ref().expect("nonzero f");
        let oracle = ok(oracle_ef(&f, &z, spec.m()))?;
        ensure(asg.get(product).expect("bound").coordinate(0) == &oracle.e_f, || {
            format!("group and ring computations of e_f differ for f = {f}")
        })?;
        ensure(ok(out.extract_solution(&asg))? == z, || format!("extraction does not return {z:?}"))
    })
}

pub fn gadget_soundness(samples: usize, seed: u64) -> SuiteReport {
    run("gadget witnesses satisfy their gadgets", samples, seed, |s| {
        let spec = s.spec(2, 2);
        let mut names = GadgetNames::new();
        let cyc = gadget_cyclic("x", spec, &mut names);
        let gamma = s.range(-20, 20);
        ensure(ok(cyc.gadget.check(&witness_cyclic(&cyc, gamma, spec), spec))?, || {
            format!("cyclic witness fails for gamma = {gamma} in {spec}")
        })?;
        let k = s.range(1, 4) as u64;
        let g = s.delta_element(spec, k);
        let delta = ok(gadget_delta_power("x", k, spec, &mut names))?;
        let asg = ok(witness_delta_power(&delta, &g))?;
        ensure(ok(delta.gadget.check(&asg, spec))?, || format!("delta witness fails for {g}, k = {k}"))
    })
}

/// Every suite with its default sample count, or `samples` for each.
pub fn all_suites(samples: Option<usize>, seed: u64) -> Vec<SuiteReport> {
    let n = |default: usize| samples.unwrap_or(default);
    let mut out = vec![
        laurent_ring_axioms(n(1000), seed),
        laurent_valuation_laws(n(1000), seed.wrapping_add(1)),
        wreath_group_axioms(n(1000), seed.wrapping_add(2)),
    ];
    out.extend(centralizer_of_base(n(1000), seed.wrapping_add(3)));
    out.extend(centralizer_of_active(n(1000), seed.wrapping_add(4)));
    out.push(nested_group_axioms(n(1000), seed.wrapping_add(5)));
    out.push(nested_flat_agreement(n(500), seed.wrapping_add(6)));
    out.push(lifting_laws(n(200), seed.wrapping_add(7)));
    out.push(flatten_equivalence(n(200), seed.wrapping_add(8)));
    out.push(oracle_equivalence(n(2000), seed.wrapping_add(9)).0);
    out.push(reduction_round_trip(n(200), seed.wrapping_add(10)));
    out.push(gadget_soundness(n(100), seed.wrapping_add(11)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_briefly() {
        for report in all_suites(Some(20), 11) {
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn report_lines() {
        let r = run("demo", 3, 0, |_| Ok(()));
        assert_eq!(r.to_string(), "ok demo: 3 samples, 0 violations");
        let mut calls = 0;
        let r = run("demo", 2, 0, |_| {
            calls += 1;
            Err(format!("call {calls}"))
        });
        assert_eq!(r.to_string(), "FAIL demo: 2 samples, 2 violations (first: call 1)");
    }
}
