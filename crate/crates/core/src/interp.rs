//! Right-iterated wreath products `A_k ≀ (A_{k-1} ≀ (... ≀ A_1))` of free
//! abelian groups, and the lifting of equation systems from `H` to `K ≀ H`
//! used to carry the reduction up the tower.
//!
//! A nested element `(h, f)` has an active part `h ∈ H` and a finitely
//! supported base function `f : H → ℤ^{m_k}`, stored as a map from
//! canonical `H`-elements to non-zero vectors. The product is
//! `(h, f)·(h', f') = (h h', f·h' + f')` where `f·h'` moves the value at key
//! `x` to key `x h'`; for two levels this is exactly [`WreathElement`]
//! multiplication.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::equations::{Assignment, Equation, FreshNames, System, Word};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::laurent::{LaurentPoly, Monomial};
use crate::reduction::{compile, IntPolynomial, ReductionOutput};
use crate::syntax::Cursor;
use crate::wreath::{GroupSpec, WreathElement};

/// Ranks `(m_1, ..., m_k)`, innermost (active-most) first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IteratedSpec {
    ranks: Vec<usize>,
}

impl IteratedSpec {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        if ranks.is_empty() || ranks.contains(&0) {
            return Err(Error::Usage(format!("iterated wreath product needs positive ranks, got {ranks:?}")));
        }
        Ok(IteratedSpec { ranks })
    }

    /// From ranks listed outermost base first, `(m_k, ..., m_1)`.
    pub fn from_outermost_first(ranks: &[usize]) -> Result<Self> {
        Self::new(ranks.iter().rev().copied().collect())
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn depth(&self) -> usize {
        self.ranks.len()
    }

    /// Rank of the outermost base copy.
    pub fn outer_rank(&self) -> usize {
        *self.ranks.last().unwrap()
    }

    /// The acting group `H` of the outermost level.
    pub fn inner(&self) -> Option<IteratedSpec> {
        (self.ranks.len() > 1).then(|| IteratedSpec {
            ranks: self.ranks[..self.ranks.len() - 1].to_vec(),
        })
    }

    /// `K ≀ self` with `K = ℤ^rank`.
    pub fn extend(&self, rank: usize) -> IteratedSpec {
        let mut ranks = self.ranks.clone();
        ranks.push(rank);
        IteratedSpec { ranks }
    }

    /// The flat `ℤ^{m_2} ≀ ℤ^{m_1}` for depth 2.
    pub fn as_flat(&self) -> Option<GroupSpec> {
        match self.ranks[..] {
            [m, n] => GroupSpec::new(m, n).ok(),
            _ => None,
        }
    }
}

impl fmt::Display for IteratedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.ranks.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" wr ")?;
            }
            write!(f, "Z^{r}")?;
        }
        Ok(())
    }
}

/// Element of a right-iterated wreath product. Depth one is `ℤ^{m_1}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NestedElement {
    Abelian(Vec<i64>),
    Wreath {
        active: Box<NestedElement>,
        base: BTreeMap<NestedElement, Vec<BigInt>>,
        base_rank: usize,
    },
}

fn add_vectors(x: &mut [BigInt], y: &[BigInt]) {
    for (a, b) in x.iter_mut().zip(y) {
        *a += b;
    }
}

fn is_zero_vector(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

impl NestedElement {
    pub fn identity(spec: &IteratedSpec) -> Self {
        match spec.inner() {
            None => NestedElement::Abelian(vec![0; spec.ranks[0]]),
            Some(inner) => NestedElement::Wreath {
                active: Box::new(Self::identity(&inner)),
                base: BTreeMap::new(),
                base_rank: spec.outer_rank(),
            },
        }
    }

    /// Builds `(active, base)`, validating ranks and dropping zero vectors.
    pub fn wreath(active: NestedElement, base: impl IntoIterator<Item = (NestedElement, Vec<BigInt>)>, base_rank: usize) -> Result<Self> {
        let inner = active.spec();
        let mut map: BTreeMap<NestedElement, Vec<BigInt>> = BTreeMap::new();
        for (key, v) in base {
            if key.spec() != inner {
                return Err(Error::spec_mismatch(key.spec(), &inner));
            }
            if v.len() != base_rank {
                return Err(Error::RankMismatch {
                    left: base_rank,
                    right: v.len(),
                });
            }
            match map.get_mut(&key) {
                Some(existing) => add_vectors(existing, &v),
                None => {
                    map.insert(key, v);
                }
            }
        }
        map.retain(|_, v| !is_zero_vector(v));
        Ok(NestedElement::Wreath {
            active: Box::new(active),
            base: map,
            base_rank,
        })
    }

    /// `h ∈ H` viewed in `K ≀ H` with trivial base part.
    pub fn embed(h: NestedElement, base_rank: usize) -> Self {
        NestedElement::Wreath {
            active: Box::new(h),
            base: BTreeMap::new(),
            base_rank,
        }
    }

    /// The `j`-th generator (0-based) of the outermost base copy, placed
    /// at the identity of `H`.
    pub fn base_generator(spec: &IteratedSpec, j: usize) -> Result<Self> {
        let inner = spec
            .inner()
            .ok_or_else(|| Error::Usage("a free abelian group has no base generators".into()))?;
        let mut v = vec![BigInt::zero(); spec.outer_rank()];
        v[j] = 1.into();
        Self::wreath(Self::identity(&inner), [(Self::identity(&inner), v)], spec.outer_rank())
    }

    pub fn spec(&self) -> IteratedSpec {
        match self {
            NestedElement::Abelian(v) => IteratedSpec { ranks: vec![v.len()] },
            NestedElement::Wreath { active, base_rank, .. } => active.spec().extend(*base_rank),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            NestedElement::Abelian(_) => 1,
            NestedElement::Wreath { active, .. } => active.depth() + 1,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            NestedElement::Abelian(v) => v.iter().all(|&e| e == 0),
            NestedElement::Wreath { active, base, .. } => base.is_empty() && active.is_identity(),
        }
    }

    /// Coordinate map `K ≀ H → H`, `(h, f) ↦ h`.
    pub fn project(&self) -> Result<NestedElement> {
        match self {
            NestedElement::Abelian(_) => Err(Error::Usage("cannot project a free abelian group further".into())),
            NestedElement::Wreath { active, .. } => Ok((**active).clone()),
        }
    }

    pub fn multiply(&self, h: &NestedElement) -> Result<NestedElement> {
        match (self, h) {
            (NestedElement::Abelian(x), NestedElement::Abelian(y)) => {
                if x.len() != y.len() {
                    return Err(Error::RankMismatch {
                        left: x.len(),
                        right: y.len(),
                    });
                }
                Ok(NestedElement::Abelian(x.iter().zip(y).map(|(a, b)| a + b).collect()))
            }
            (
                NestedElement::Wreath {
                    active: a1,
                    base: f1,
                    base_rank: r1,
                },
                NestedElement::Wreath {
                    active: a2,
                    base: f2,
                    base_rank: r2,
                },
            ) => {
                if r1 != r2 {
                    return Err(Error::spec_mismatch(self.spec(), h.spec()));
                }
                let active = a1.multiply(a2)?;
                let mut base: BTreeMap<NestedElement, Vec<BigInt>> = BTreeMap::new();
                for (key, v) in f1 {
                    base.insert(key.multiply(a2)?, v.clone());
                }
                for (key, v) in f2 {
                    match base.get_mut(key) {
                        Some(existing) => add_vectors(existing, v),
                        None => {
                            base.insert(key.clone(), v.clone());
                        }
                    }
                }
                base.retain(|_, v| !is_zero_vector(v));
                Ok(NestedElement::Wreath {
                    active: Box::new(active),
                    base,
                    base_rank: *r1,
                })
            }
            _ => Err(Error::spec_mismatch(self.spec(), h.spec())),
        }
    }

    pub fn inverse(&self) -> NestedElement {
        match self {
            NestedElement::Abelian(x) => NestedElement::Abelian(x.iter().map(|e| -e).collect()),
            NestedElement::Wreath {
                active,
                base,
                base_rank,
            } => {
                let inv = active.inverse();
                let base = base
                    .iter()
                    .map(|(key, v)| {
                        let key = key.multiply(&inv).expect("keys live in the active group");
                        (key, v.iter().map(|c| -c).collect())
                    })
                    .collect();
                NestedElement::Wreath {
                    active: Box::new(inv),
                    base,
                    base_rank: *base_rank,
                }
            }
        }
    }

    /// Two-level element as a flat wreath element (coordinates as Laurent
    /// polynomials).
    pub fn to_flat(&self) -> Result<WreathElement> {
        let spec = self
            .spec()
            .as_flat()
            .ok_or_else(|| Error::Usage(format!("only two-level elements convert to flat form, got {}", self.spec())))?;
        let NestedElement::Wreath { active, base, .. } = self else {
            unreachable!("depth two is a wreath")
        };
        let NestedElement::Abelian(a) = &**active else {
            unreachable!("depth one is abelian")
        };
        let mut coords = vec![Vec::new(); spec.n()];
        for (key, v) in base {
            let NestedElement::Abelian(e) = key else {
                unreachable!("keys of a two-level element are abelian")
            };
            for (j, c) in v.iter().enumerate() {
                coords[j].push((Monomial::new(e.clone()), c.clone()));
            }
        }
        let base = coords
            .into_iter()
            .map(|ts| LaurentPoly::from_terms(spec.m(), ts))
            .collect::<Result<_>>()?;
        WreathElement::new(spec, a.clone(), base)
    }

    pub fn from_flat(g: &WreathElement) -> NestedElement {
        let spec = g.spec();
        let mut base: BTreeMap<NestedElement, Vec<BigInt>> = BTreeMap::new();
        for (j, p) in g.base().iter().enumerate() {
            for (mono, c) in p.terms() {
                base.entry(NestedElement::Abelian(mono.exponents().to_vec()))
                    .or_insert_with(|| vec![BigInt::zero(); spec.n()])[j] = c.clone();
            }
        }
        NestedElement::Wreath {
            active: Box::new(NestedElement::Abelian(g.active().to_vec())),
            base,
            base_rank: spec.n(),
        }
    }

    pub fn parse(text: &str, spec: &IteratedSpec) -> Result<NestedElement> {
        let mut cur = Cursor::new(text);
        let g = parse_nested(&mut cur, spec)?;
        cur.expect_end()?;
        Ok(g)
    }
}

fn parse_nested(cur: &mut Cursor<'_>, spec: &IteratedSpec) -> Result<NestedElement> {
    let Some(inner) = spec.inner() else {
        cur.skip_ws();
        let here = cur.clone();
        let v = cur.small_tuple()?;
        if v.len() != spec.ranks[0] {
            return here.error(format!("expected {} exponents, found {}", spec.ranks[0], v.len()));
        }
        return Ok(NestedElement::Abelian(v));
    };
    cur.expect('{')?;
    if cur.ident() != Some("active") {
        return cur.error("expected `active`");
    }
    cur.expect(':')?;
    let active = parse_nested(cur, &inner)?;
    cur.expect(';')?;
    let rank = spec.outer_rank();
    let mut base = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    if !cur.eat('}') {
        loop {
            cur.expect('[')?;
            cur.skip_ws();
            let here = cur.clone();
            let key = parse_nested(cur, &inner)?;
            if !seen.insert(key.clone()) {
                return here.error("base position given twice");
            }
            cur.expect('-')?;
            cur.expect('>')?;
            cur.skip_ws();
            let here = cur.clone();
            let v = cur.integer_tuple()?;
            if v.len() != rank {
                return here.error(format!("expected a vector of length {rank}, found {}", v.len()));
            }
            cur.expect(']')?;
            base.push((key, v));
            if cur.eat('}') {
                break;
            }
            cur.expect(',')?;
        }
    }
    NestedElement::wreath(active, base, rank)
}

fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, v: &[T]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

impl fmt::Display for NestedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NestedElement::Abelian(v) => write_tuple(f, v),
            NestedElement::Wreath { active, base, .. } => {
                write!(f, "{{ active: {active} ;")?;
                for (i, (key, v)) in base.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, " [ {key} -> ")?;
                    write_tuple(f, v)?;
                    f.write_str(" ]")?;
                }
                f.write_str(" }")
            }
        }
    }
}

impl GroupElement for NestedElement {
    type Spec = IteratedSpec;

    fn identity(spec: &IteratedSpec) -> Self {
        NestedElement::identity(spec)
    }

    fn belongs_to(&self, spec: &IteratedSpec) -> bool {
        self.spec() == *spec
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.multiply(rhs)
    }

    fn inverse(&self) -> Self {
        NestedElement::inverse(self)
    }

    fn is_identity(&self) -> bool {
        NestedElement::is_identity(self)
    }

    fn parse_literal(text: &str, line: usize, column: usize, spec: &IteratedSpec) -> Result<Self> {
        let mut cur = Cursor::at(text, line, column);
        let g = parse_nested(&mut cur, spec)?;
        cur.expect_end()?;
        Ok(g)
    }
}

/// A system over `H` lifted to `K ≀ H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedSystem {
    /// The group `K ≀ H`.
    pub spec: IteratedSpec,
    pub system: System<NestedElement>,
    /// The fresh variable attached to each original equation, in order.
    pub t_vars: Vec<String>,
    /// Distinguished base element whose centralizer is the base group.
    pub b: NestedElement,
}

/// Each equation `w = 1` over `H` becomes `w = t ∧ [t, b] = 1` over
/// `K ≀ H`, with `K = ℤ^outer_rank` and `b` the first generator of the
/// outermost base copy. Constants of `H` are embedded with trivial base.
pub fn lift_system(sys: &System<NestedElement>, inner: &IteratedSpec, outer_rank: usize) -> Result<LiftedSystem> {
    let spec = inner.extend(outer_rank);
    let b = NestedElement::base_generator(&spec, 0)?;
    let embedded = sys.map_constants(|c| {
        if c.spec() != *inner {
            return Err(Error::spec_mismatch(c.spec(), inner));
        }
        Ok(NestedElement::embed(c.clone(), outer_rank))
    })?;
    let mut fresh = FreshNames::new("t").avoiding(sys.declared_vars().iter().cloned());
    let mut system = System::new();
    for v in embedded.declared_vars() {
        system.declare(v.clone());
    }
    let mut t_vars = Vec::new();
    for eq in embedded.equations() {
        let t = fresh.fresh();
        system.push(Equation::new(eq.lhs.clone(), Word::var(t.clone())));
        system.push(Equation::trivial(Word::commutator(Word::var(t.clone()), Word::constant(b.clone()))));
        t_vars.push(t);
    }
    Ok(LiftedSystem {
        spec,
        system,
        t_vars,
        b,
    })
}

impl LiftedSystem {
    /// Lifts a solution over `H`: values embedded, every `t ↦ 1`.
    pub fn lift_assignment(&self, asg: &Assignment<NestedElement>) -> Assignment<NestedElement> {
        let rank = self.spec.outer_rank();
        let mut out: Assignment<NestedElement> = asg
            .iter()
            .map(|(k, v)| (k.clone(), NestedElement::embed(v.clone(), rank)))
            .collect();
        for t in &self.t_vars {
            out.insert(t.clone(), NestedElement::identity(&self.spec));
        }
        out
    }
}

/// Applies the coordinate map to every value.
pub fn project_assignment(asg: &Assignment<NestedElement>) -> Result<Assignment<NestedElement>> {
    asg.map_values(NestedElement::project)
}

/// The reduction compiled over `ℤ^{m_2} ≀ ℤ^{m_1}` and lifted through the
/// remaining levels of an iterated wreath product.
#[derive(Clone, Debug)]
pub struct IteratedReduction {
    pub spec: IteratedSpec,
    pub inner: ReductionOutput,
    pub system: System<NestedElement>,
    /// One entry per lifting step, innermost first.
    pub lifts: Vec<LiftedSystem>,
}

pub fn compile_iterated(f: &IntPolynomial, spec: &IteratedSpec) -> Result<IteratedReduction> {
    if spec.depth() < 2 {
        return Err(Error::Usage(format!(
            "the iterated reduction needs at least two levels, got {spec}"
        )));
    }
    let base_spec = IteratedSpec::new(spec.ranks[..2].to_vec())?;
    let flat = base_spec.as_flat().expect("two levels");
    let inner = compile(f, flat);
    let mut system = inner.system.map_constants(|c| Ok(NestedElement::from_flat(c)))?;
    let mut current = base_spec;
    let mut lifts = Vec::new();
    for &rank in &spec.ranks[2..] {
        let lifted = lift_system(&system, &current, rank)?;
        system = lifted.system.clone();
        current = lifted.spec.clone();
        lifts.push(lifted);
    }
    Ok(IteratedReduction {
        spec: spec.clone(),
        inner,
        system,
        lifts,
    })
}

impl IteratedReduction {
    pub fn witness(&self, z: &[i64]) -> Result<Assignment<NestedElement>> {
        let flat = self.inner.witness(z)?;
        let mut asg = flat.map_values(|g| Ok(NestedElement::from_flat(g)))?;
        for lift in &self.lifts {
            asg = lift.lift_assignment(&asg);
        }
        Ok(asg)
    }

    /// Projects down to the two-level group and reads off `z`.
    pub fn extract_solution(&self, asg: &Assignment<NestedElement>) -> Result<Vec<i64>> {
        let mut current = asg.clone();
        for _ in &self.lifts {
            current = project_assignment(&current)?;
        }
        let flat = current.map_values(NestedElement::to_flat)?;
        self.inner.extract_solution(&flat)
    }
}
