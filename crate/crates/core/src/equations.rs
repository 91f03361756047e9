//! Group words, equation systems and assignments, with evaluation,
//! flattening of nested commutators, and the line-based text formats.
//!
//! System files hold one equation `word = word` per line. A word is a
//! juxtaposition of factors: variables `x`, `x^-1`, element literals in
//! braces, commutators `[u, v]`, parenthesised groups, `1` for the empty
//! word, and `^e` powers. An optional `vars: ...` line lists declared
//! variables; `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::syntax::Cursor;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Word<E> {
    /// A variable or its inverse.
    Literal { name: String, inverted: bool },
    Constant(E),
    /// Product of the sub-words in order; empty is the identity.
    Concat(Vec<Word<E>>),
    Commutator(Box<Word<E>>, Box<Word<E>>),
    Power(Box<Word<E>>, i64),
}

impl<E> Word<E> {
    pub fn var(name: impl Into<String>) -> Self {
        Word::Literal {
            name: name.into(),
            inverted: false,
        }
    }

    pub fn var_inv(name: impl Into<String>) -> Self {
        Word::Literal {
            name: name.into(),
            inverted: true,
        }
    }

    pub fn constant(e: E) -> Self {
        Word::Constant(e)
    }

    pub fn identity() -> Self {
        Word::Concat(Vec::new())
    }

    pub fn concat(items: Vec<Word<E>>) -> Self {
        Word::Concat(items)
    }

    pub fn commutator(u: Word<E>, v: Word<E>) -> Self {
        Word::Commutator(Box::new(u), Box::new(v))
    }

    /// Left-normed `[first, rest[0], ..., rest[r-1]]`.
    pub fn left_normed(first: Word<E>, rest: impl IntoIterator<Item = Word<E>>) -> Self {
        rest.into_iter().fold(first, Word::commutator)
    }

    pub fn power(w: Word<E>, e: i64) -> Self {
        Word::Power(Box::new(w), e)
    }

    pub fn is_identity_word(&self) -> bool {
        matches!(self, Word::Concat(items) if items.is_empty())
    }

    fn is_atom(&self) -> bool {
        matches!(self, Word::Literal { .. } | Word::Constant(_))
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Word::Literal { name, .. } => {
                out.insert(name.clone());
            }
            Word::Constant(_) => {}
            Word::Concat(items) => items.iter().for_each(|w| w.collect_vars(out)),
            Word::Commutator(u, v) => {
                u.collect_vars(out);
                v.collect_vars(out);
            }
            Word::Power(w, _) => w.collect_vars(out),
        }
    }

    /// Replaces every constant, e.g. to embed constants into a larger group.
    pub fn map_constants<F, T>(&self, f: &mut F) -> Result<Word<T>>
    where
        F: FnMut(&E) -> Result<T>,
    {
        Ok(match self {
            Word::Literal { name, inverted } => Word::Literal {
                name: name.clone(),
                inverted: *inverted,
            },
            Word::Constant(c) => Word::Constant(f(c)?),
            Word::Concat(items) => {
                Word::Concat(items.iter().map(|w| w.map_constants(f)).collect::<Result<_>>()?)
            }
            Word::Commutator(u, v) => Word::commutator(u.map_constants(f)?, v.map_constants(f)?),
            Word::Power(w, e) => Word::power(w.map_constants(f)?, *e),
        })
    }

    fn into_items(self) -> Vec<Word<E>> {
        match self {
            Word::Concat(items) => items,
            other => vec![other],
        }
    }
}

impl<E: GroupElement> Word<E> {
    /// Syntactic inverse; evaluates to the group inverse.
    pub fn inverse(&self) -> Word<E> {
        match self {
            Word::Literal { name, inverted } => Word::Literal {
                name: name.clone(),
                inverted: !inverted,
            },
            Word::Constant(c) => Word::Constant(c.inverse()),
            Word::Concat(items) => Word::Concat(items.iter().rev().map(Word::inverse).collect()),
            // [u, v]⁻¹ = [v, u]
            Word::Commutator(u, v) => Word::Commutator(v.clone(), u.clone()),
            Word::Power(w, e) => Word::Power(w.clone(), -e),
        }
    }
}

/// An equation in normalized form `lhs = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Equation<E> {
    pub lhs: Word<E>,
}

impl<E: GroupElement> Equation<E> {
    /// `lhs = rhs`, stored as `lhs · rhs⁻¹ = 1`.
    pub fn new(lhs: Word<E>, rhs: Word<E>) -> Self {
        if rhs.is_identity_word() {
            return Equation { lhs };
        }
        let mut items = lhs.into_items();
        items.extend(rhs.inverse().into_items());
        let lhs = if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Word::Concat(items)
        };
        Equation { lhs }
    }

    pub fn trivial(lhs: Word<E>) -> Self {
        Equation { lhs }
    }
}

/// An ordered list of equations over declared variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct System<E> {
    equations: Vec<Equation<E>>,
    declared: BTreeSet<String>,
}

impl<E> Default for System<E> {
    fn default() -> Self {
        System {
            equations: Vec::new(),
            declared: BTreeSet::new(),
        }
    }
}

impl<E> System<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn equations(&self) -> &[Equation<E>] {
        &self.equations
    }

    pub fn declared_vars(&self) -> &BTreeSet<String> {
        &self.declared
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn declare(&mut self, name: impl Into<String>) {
        self.declared.insert(name.into());
    }

    /// Appends an equation, declaring its variables.
    pub fn push(&mut self, eq: Equation<E>) {
        eq.lhs.collect_vars(&mut self.declared);
        self.equations.push(eq);
    }

    pub fn extend(&mut self, other: System<E>) {
        self.declared.extend(other.declared);
        self.equations.extend(other.equations);
    }

    pub fn map_constants<F, T>(&self, mut f: F) -> Result<System<T>>
    where
        F: FnMut(&E) -> Result<T>,
    {
        Ok(System {
            equations: self
                .equations
                .iter()
                .map(|eq| Ok(Equation { lhs: eq.lhs.map_constants(&mut f)? }))
                .collect::<Result<_>>()?,
            declared: self.declared.clone(),
        })
    }
}

/// Values for variables; all values are expected to lie in one group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment<E>(BTreeMap<String, E>);

impl<E> Default for Assignment<E> {
    fn default() -> Self {
        Assignment(BTreeMap::new())
    }
}

impl<E> Assignment<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: E) -> Option<E> {
        self.0.insert(name.into(), value)
    }

    pub fn get(&self, name: &str) -> Option<&E> {
        self.0.get(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &E)> {
        self.0.iter()
    }

    pub fn extend(&mut self, other: Assignment<E>) {
        self.0.extend(other.0);
    }

    pub fn map_values<F, T>(&self, mut f: F) -> Result<Assignment<T>>
    where
        F: FnMut(&E) -> Result<T>,
    {
        Ok(Assignment(
            self.0
                .iter()
                .map(|(k, v)| Ok((k.clone(), f(v)?)))
                .collect::<Result<_>>()?,
        ))
    }
}

impl<E> FromIterator<(String, E)> for Assignment<E> {
    fn from_iter<I: IntoIterator<Item = (String, E)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

fn check_member<E: GroupElement>(g: &E, spec: &E::Spec) -> Result<()> {
    if g.belongs_to(spec) {
        Ok(())
    } else {
        Err(Error::spec_mismatch(g, spec))
    }
}

/// Structural evaluation of a word under an assignment.
pub fn evaluate<E: GroupElement>(w: &Word<E>, asg: &Assignment<E>, spec: &E::Spec) -> Result<E> {
    match w {
        Word::Literal { name, inverted } => {
            let g = asg.get(name).ok_or_else(|| Error::UnboundVariable(name.clone()))?;
            check_member(g, spec)?;
            Ok(if *inverted { g.inverse() } else { g.clone() })
        }
        Word::Constant(c) => {
            check_member(c, spec)?;
            Ok(c.clone())
        }
        Word::Concat(items) => items
            .iter()
            .try_fold(E::identity(spec), |acc, w| acc.try_mul(&evaluate(w, asg, spec)?)),
        Word::Commutator(u, v) => evaluate(u, asg, spec)?.commutator(&evaluate(v, asg, spec)?),
        Word::Power(u, e) => evaluate(u, asg, spec)?.try_pow(*e),
    }
}

/// Outcome of checking a system: indices of equations that do not hold.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SystemReport {
    pub equations: usize,
    pub failing: Vec<usize>,
}

impl SystemReport {
    pub fn is_satisfied(&self) -> bool {
        self.failing.is_empty()
    }
}

impl fmt::Display for SystemReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failing: BTreeSet<_> = self.failing.iter().collect();
        for i in 0..self.equations {
            let verdict = if failing.contains(&i) { "FAIL" } else { "ok" };
            writeln!(f, "equation {}: {verdict}", i + 1)?;
        }
        if self.is_satisfied() {
            write!(f, "satisfied ({} equations)", self.equations)
        } else {
            write!(f, "NOT satisfied ({} of {} equations fail)", self.failing.len(), self.equations)
        }
    }
}

pub fn check_system<E: GroupElement>(sys: &System<E>, asg: &Assignment<E>, spec: &E::Spec) -> Result<SystemReport> {
    if let Some(missing) = sys.declared.iter().find(|v| asg.get(v).is_none()) {
        return Err(Error::UnboundVariable(missing.clone()));
    }
    let mut failing = Vec::new();
    for (i, eq) in sys.equations.iter().enumerate() {
        if !evaluate(&eq.lhs, asg, spec)?.is_identity() {
            failing.push(i);
        }
    }
    Ok(SystemReport {
        equations: sys.equations.len(),
        failing,
    })
}

/// Deterministic fresh-name supply: `<prefix>1, <prefix>2, ...`, skipping
/// reserved names.
#[derive(Clone, Debug)]
pub struct FreshNames {
    prefix: String,
    next: usize,
    reserved: BTreeSet<String>,
}

impl FreshNames {
    pub fn new(prefix: impl Into<String>) -> Self {
        FreshNames {
            prefix: prefix.into(),
            next: 1,
            reserved: BTreeSet::new(),
        }
    }

    pub fn avoiding(mut self, names: impl IntoIterator<Item = String>) -> Self {
        self.reserved.extend(names);
        self
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = format!("{}{}", self.prefix, self.next);
            self.next += 1;
            if self.reserved.insert(name.clone()) {
                return name;
            }
        }
    }
}

impl Default for FreshNames {
    fn default() -> Self {
        FreshNames::new("t")
    }
}

/// `var = word`: a variable whose value is determined by the others.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Definition<E> {
    pub var: String,
    pub word: Word<E>,
}

impl<E: GroupElement> Definition<E> {
    pub fn equation(&self) -> Equation<E> {
        Equation::new(Word::var(self.var.clone()), self.word.clone())
    }
}

/// Result of [`flatten`]: a word without commutator or power nodes plus
/// definitions of the fresh variables, innermost first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Flattened<E> {
    pub word: Word<E>,
    pub definitions: Vec<Definition<E>>,
}

impl<E: GroupElement> Flattened<E> {
    pub fn aux_system(&self) -> System<E> {
        definitions_system(&self.definitions)
    }
}

pub fn definitions_system<E: GroupElement>(defs: &[Definition<E>]) -> System<E> {
    let mut sys = System::new();
    for d in defs {
        sys.push(d.equation());
    }
    sys
}

/// Replaces commutator and power nodes by fresh variables constrained by
/// flat auxiliary equations, so the output size stays linear in the input.
pub fn flatten<E: GroupElement>(w: &Word<E>, fresh: &mut FreshNames) -> Flattened<E> {
    let mut defs = Vec::new();
    let mut atoms = flatten_atoms(w, fresh, &mut defs);
    let word = if atoms.len() == 1 {
        atoms.pop().unwrap()
    } else {
        Word::Concat(atoms)
    };
    Flattened { word, definitions: defs }
}

fn flatten_atoms<E: GroupElement>(w: &Word<E>, fresh: &mut FreshNames, defs: &mut Vec<Definition<E>>) -> Vec<Word<E>> {
    match w {
        Word::Literal { .. } | Word::Constant(_) => vec![w.clone()],
        Word::Concat(items) => items.iter().flat_map(|u| flatten_atoms(u, fresh, defs)).collect(),
        Word::Commutator(u, v) => {
            let p = single_atom(u, fresh, defs);
            let q = single_atom(v, fresh, defs);
            let t = fresh.fresh();
            defs.push(Definition {
                var: t.clone(),
                word: Word::Concat(vec![p.inverse(), q.inverse(), p, q]),
            });
            vec![Word::var(t)]
        }
        Word::Power(u, e) => {
            if *e == 0 {
                return Vec::new();
            }
            let p = single_atom(u, fresh, defs);
            let p = if *e < 0 { p.inverse() } else { p };
            vec![p; e.unsigned_abs() as usize]
        }
    }
}

fn single_atom<E: GroupElement>(w: &Word<E>, fresh: &mut FreshNames, defs: &mut Vec<Definition<E>>) -> Word<E> {
    let mut atoms = flatten_atoms(w, fresh, defs);
    if atoms.len() == 1 && atoms[0].is_atom() {
        return atoms.pop().unwrap();
    }
    let s = fresh.fresh();
    defs.push(Definition {
        var: s.clone(),
        word: Word::Concat(atoms),
    });
    Word::var(s)
}

/// Evaluates definitions in order, adding each defined variable.
pub fn extend_by_definitions<E: GroupElement>(
    defs: &[Definition<E>],
    asg: &mut Assignment<E>,
    spec: &E::Spec,
) -> Result<()> {
    for d in defs {
        let value = evaluate(&d.word, asg, spec)?;
        asg.insert(d.var.clone(), value);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// text formats

fn write_factor<E: fmt::Display>(out: &mut String, w: &Word<E>) {
    match w {
        Word::Literal { name, inverted } => {
            out.push_str(name);
            if *inverted {
                out.push_str("^-1");
            }
        }
        Word::Constant(c) => {
            let _ = write!(out, "{c}");
        }
        Word::Concat(items) if items.is_empty() => out.push('1'),
        Word::Concat(items) => {
            out.push('(');
            write_items(out, items);
            out.push(')');
        }
        Word::Commutator(u, v) => {
            out.push('[');
            write_top(out, u);
            out.push_str(", ");
            write_top(out, v);
            out.push(']');
        }
        Word::Power(base, e) => {
            match &**base {
                Word::Literal { name, inverted: false } if *e != -1 => out.push_str(name),
                Word::Concat(items) if items.len() >= 2 => {
                    out.push('(');
                    write_items(out, items);
                    out.push(')');
                }
                other => {
                    out.push('(');
                    write_factor(out, other);
                    out.push(')');
                }
            }
            let _ = write!(out, "^{e}");
        }
    }
}

fn write_items<E: fmt::Display>(out: &mut String, items: &[Word<E>]) {
    for (i, w) in items.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write_factor(out, w);
    }
}

fn write_top<E: fmt::Display>(out: &mut String, w: &Word<E>) {
    match w {
        Word::Concat(items) if items.len() >= 2 => write_items(out, items),
        other => write_factor(out, other),
    }
}

impl<E: fmt::Display> fmt::Display for Word<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_top(&mut s, self);
        f.write_str(&s)
    }
}

pub fn serialize_system<E: GroupElement>(sys: &System<E>) -> String {
    let mut out = String::new();
    if !sys.declared.is_empty() {
        out.push_str("vars:");
        for v in &sys.declared {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
    }
    for eq in &sys.equations {
        write_top(&mut out, &eq.lhs);
        out.push_str(" = 1\n");
    }
    out
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_system<E: GroupElement>(text: &str, spec: &E::Spec) -> Result<System<E>> {
    let mut sys = System::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::at(line, i + 1, 1);
        if cur.clone().ident() == Some("vars") && {
            let mut probe = cur.clone();
            probe.ident();
            probe.peek() == Some(':')
        } {
            cur.ident();
            cur.expect(':')?;
            while !cur.at_end() {
                match cur.ident() {
                    Some(name) => sys.declare(name),
                    None => return cur.error("expected a variable name"),
                }
            }
            continue;
        }
        let lhs = parse_top::<E>(&mut cur, spec)?;
        cur.expect('=')?;
        let rhs = parse_top::<E>(&mut cur, spec)?;
        cur.expect_end()?;
        sys.push(Equation::new(lhs, rhs));
    }
    Ok(sys)
}

fn parse_sequence<E: GroupElement>(cur: &mut Cursor<'_>, spec: &E::Spec) -> Result<Vec<Word<E>>> {
    let mut items = Vec::new();
    loop {
        match cur.peek() {
            None | Some('=') | Some(',') | Some(']') | Some(')') => return Ok(items),
            _ => items.push(parse_factor(cur, spec)?),
        }
    }
}

fn parse_top<E: GroupElement>(cur: &mut Cursor<'_>, spec: &E::Spec) -> Result<Word<E>> {
    let mut items = parse_sequence(cur, spec)?;
    match items.len() {
        0 => cur.error("expected a word"),
        1 => Ok(items.pop().unwrap()),
        _ => Ok(Word::Concat(items)),
    }
}

fn parse_exponent(cur: &mut Cursor<'_>) -> Result<Option<i64>> {
    if cur.eat('^') {
        Ok(Some(cur.small_integer()?))
    } else {
        Ok(None)
    }
}

fn parse_factor<E: GroupElement>(cur: &mut Cursor<'_>, spec: &E::Spec) -> Result<Word<E>> {
    match cur.peek() {
        Some('(') => {
            cur.bump();
            let mut items = parse_sequence(cur, spec)?;
            cur.expect(')')?;
            match parse_exponent(cur)? {
                None => Ok(Word::Concat(items)),
                Some(e) => {
                    let base = match items.len() {
                        0 => return cur.error("empty parentheses"),
                        1 => items.pop().unwrap(),
                        _ => Word::Concat(items),
                    };
                    Ok(Word::power(base, e))
                }
            }
        }
        Some('[') => {
            cur.bump();
            let u = parse_top(cur, spec)?;
            cur.expect(',')?;
            let v = parse_top(cur, spec)?;
            cur.expect(']')?;
            let w = Word::commutator(u, v);
            Ok(match parse_exponent(cur)? {
                Some(e) => Word::power(w, e),
                None => w,
            })
        }
        Some('{') => {
            let (text, line, column) = cur.braced()?;
            let c = Word::Constant(E::parse_literal(text, line, column, spec)?);
            Ok(match parse_exponent(cur)? {
                Some(e) => Word::power(c, e),
                None => c,
            })
        }
        Some('1') => {
            let here = cur.clone();
            if cur.natural()? != 1u8.into() {
                return here.error("the only numeric factor is `1`");
            }
            Ok(match parse_exponent(cur)? {
                Some(e) => Word::power(Word::identity(), e),
                None => Word::identity(),
            })
        }
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            let name = cur.ident().unwrap().to_string();
            Ok(match parse_exponent(cur)? {
                Some(-1) => Word::var_inv(name),
                Some(e) => Word::power(Word::var(name), e),
                None => Word::var(name),
            })
        }
        Some(c) => cur.error(format!("unexpected `{c}` in word")),
        None => cur.error("unexpected end of input in word"),
    }
}

pub fn serialize_assignment<E: GroupElement>(asg: &Assignment<E>) -> String {
    let mut out = String::new();
    for (name, value) in asg.iter() {
        let _ = writeln!(out, "{name} := {value}");
    }
    out
}

pub fn parse_assignment<E: GroupElement>(text: &str, spec: &E::Spec) -> Result<Assignment<E>> {
    let mut asg = Assignment::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::at(line, i + 1, 1);
        let name = match cur.ident() {
            Some(n) => n.to_string(),
            None => return cur.error("expected a variable name"),
        };
        cur.expect(':')?;
        cur.expect('=')?;
        let (text, line_no, column) = cur.braced()?;
        let value = E::parse_literal(text, line_no, column, spec)?;
        cur.expect_end()?;
        if asg.insert(name.clone(), value).is_some() {
            return Err(Error::parse(i + 1, 1, format!("variable `{name}` assigned twice")));
        }
    }
    Ok(asg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use crate::wreath::{GroupSpec, WreathElement};

    fn spec() -> GroupSpec {
        GroupSpec::new(2, 2).unwrap()
    }

    fn a1() -> WreathElement {
        WreathElement::a(spec(), 0)
    }

    fn b1() -> WreathElement {
        WreathElement::b(spec(), 0)
    }

    fn asg(pairs: &[(&str, WreathElement)]) -> Assignment<WreathElement> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn evaluate_examples() {
        let w = Word::commutator(Word::var("x"), Word::var("y"));
        let g = evaluate(&w, &asg(&[("x", b1()), ("y", a1())]), &spec()).unwrap();
        assert_eq!(g, WreathElement::b_pow(spec(), 0, LaurentPoly::parse("a1 - 1", 2).unwrap()));

        let e: Word<WreathElement> = Word::identity();
        assert!(evaluate(&e, &Assignment::new(), &spec()).unwrap().is_identity());

        let p = Word::power(Word::var("x"), -2);
        assert_eq!(evaluate(&p, &asg(&[("x", a1())]), &spec()).unwrap(), WreathElement::a_pow(spec(), 0, -2));
    }

    #[test]
    fn evaluate_errors() {
        let w: Word<WreathElement> = Word::var("x");
        assert_eq!(evaluate(&w, &Assignment::new(), &spec()), Err(Error::UnboundVariable("x".into())));
        let other = GroupSpec::new(1, 1).unwrap();
        let w = Word::constant(WreathElement::a(other, 0));
        assert!(matches!(evaluate(&w, &Assignment::new(), &spec()), Err(Error::SpecMismatch { .. })));
    }

    fn commutes_with_b1() -> System<WreathElement> {
        let mut s = System::new();
        s.push(Equation::new(Word::commutator(Word::var("x"), Word::constant(b1())), Word::identity()));
        s
    }

    #[test]
    fn check_system_examples() {
        let empty: System<WreathElement> = System::new();
        assert!(check_system(&empty, &Assignment::new(), &spec()).unwrap().is_satisfied());

        let s = commutes_with_b1();
        let x = WreathElement::b_pow(spec(), 1, LaurentPoly::parse("a1", 2).unwrap());
        assert!(check_system(&s, &asg(&[("x", x)]), &spec()).unwrap().is_satisfied());

        let report = check_system(&s, &asg(&[("x", a1())]), &spec()).unwrap();
        assert_eq!(report.failing, vec![0]);
        assert!(check_system(&s, &Assignment::new(), &spec()).is_err());
    }

    #[test]
    fn equation_normalizes_rhs() {
        let eq: Equation<WreathElement> = Equation::new(Word::var("t"), Word::concat(vec![Word::var("x"), Word::var("y")]));
        assert_eq!(eq.lhs, Word::concat(vec![Word::var("t"), Word::var_inv("y"), Word::var_inv("x")]));
    }

    #[test]
    fn flatten_examples() {
        let mut fresh = FreshNames::default();
        let f = flatten::<WreathElement>(&Word::var("x"), &mut fresh);
        assert_eq!(f.word, Word::var("x"));
        assert!(f.definitions.is_empty());

        let mut fresh = FreshNames::default();
        let f = flatten::<WreathElement>(&Word::commutator(Word::var("x"), Word::var("y")), &mut fresh);
        assert_eq!(f.word, Word::var("t1"));
        assert_eq!(
            f.definitions,
            vec![Definition {
                var: "t1".into(),
                word: Word::concat(vec![Word::var_inv("x"), Word::var_inv("y"), Word::var("x"), Word::var("y")]),
            }]
        );

        let nested = Word::commutator(Word::commutator(Word::var("x"), Word::var("y")), Word::var("z"));
        let mut fresh = FreshNames::default();
        let f = flatten::<WreathElement>(&nested, &mut fresh);
        assert_eq!(f.word, Word::var("t2"));
        assert_eq!(f.definitions[1].word, Word::concat(vec![Word::var_inv("t1"), Word::var_inv("z"), Word::var("t1"), Word::var("z")]));

        // both forms agree on a concrete assignment
        let mut values = asg(&[("x", b1()), ("y", a1()), ("z", WreathElement::a(spec(), 1))]);
        let direct = evaluate(&nested, &values, &spec()).unwrap();
        extend_by_definitions(&f.definitions, &mut values, &spec()).unwrap();
        assert_eq!(evaluate(&f.word, &values, &spec()).unwrap(), direct);
        assert!(check_system(&f.aux_system(), &values, &spec()).unwrap().is_satisfied());
    }

    #[test]
    fn fresh_names_skip_reserved() {
        let mut fresh = FreshNames::new("t").avoiding(["t1".to_string(), "t3".to_string()]);
        assert_eq!(fresh.fresh(), "t2");
        assert_eq!(fresh.fresh(), "t4");
    }

    #[test]
    fn parse_examples() {
        let s = parse_system::<WreathElement>("", &spec()).unwrap();
        assert!(s.is_empty());

        let one = GroupSpec::new(1, 1).unwrap();
        let s = parse_system::<WreathElement>("[x, {active:(1); }] = 1", &one).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(
            s.equations()[0].lhs,
            Word::commutator(Word::var("x"), Word::constant(WreathElement::a(one, 0)))
        );
        assert_eq!(s.declared_vars().iter().collect::<Vec<_>>(), ["x"]);
    }

    #[test]
    fn parse_errors_carry_locations() {
        let err = parse_system::<WreathElement>("x = 1\n  [x, y = 1", &spec()).unwrap_err();
        match err {
            Error::Parse { location, .. } => assert_eq!(location.line, 2),
            other => panic!("{other:?}"),
        }
        let err = parse_system::<WreathElement>("x = { active: (1) ; }", &spec()).unwrap_err();
        match err {
            Error::Parse { location, .. } => assert_eq!((location.line, location.column), (1, 15)),
            other => panic!("{other:?}"),
        }
        assert!(parse_system::<WreathElement>("x y", &spec()).is_err());
        assert!(parse_system::<WreathElement>("x = 2", &spec()).is_err());
    }

    #[test]
    fn serialize_parse_round_trip() {
        let text = "# demo\nvars: w x y\n[x, y]^2 (x y)^-1 x^-1 (x)^-1 ((x))^3 = 1\n(x) = {active:(1,0); b2: a1 - 1}\n1 = [[x, {active:(0,1);}], (y)]\n";
        let s = parse_system::<WreathElement>(text, &spec()).unwrap();
        assert!(s.declared_vars().contains("w"));
        let out = serialize_system(&s);
        let back = parse_system::<WreathElement>(&out, &spec()).unwrap();
        assert_eq!(back, s);
        assert_eq!(serialize_system(&back), out);
    }

    #[test]
    fn assignment_round_trip() {
        let a = asg(&[("x", a1()), ("t1", b1().multiply(&a1()).unwrap())]);
        let text = serialize_assignment(&a);
        assert_eq!(text, "t1 := { active: (1,0) ; b1: a1 }\nx := { active: (1,0) ; }\n");
        assert_eq!(parse_assignment::<WreathElement>(&text, &spec()).unwrap(), a);
        assert!(parse_assignment::<WreathElement>("x := {active:(1,0);}\nx := {active:(1,0);}", &spec()).is_err());
    }
}
