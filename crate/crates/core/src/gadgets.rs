//! Equation systems defining subsets of `G = ℤⁿ ≀ ℤᵐ`, each paired with a
//! witness builder for the positive direction.
//!
//! All gadgets use the constants `a = a1` and `b = b1`.

use std::collections::BTreeMap;

use crate::equations::{
    check_system, definitions_system, extend_by_definitions, flatten, serialize_system, Assignment, Definition,
    Equation, FreshNames, System, Word,
};
use crate::error::{Error, Result};
use crate::laurent::{augmentation_power, compositions, geom_series, LaurentPoly};
use crate::wreath::{GroupSpec, WreathElement};

/// Hands out fresh auxiliary names `<gadget>_<role>_<counter>`, one
/// counter per gadget/role pair, so several gadgets can share a system.
#[derive(Clone, Debug, Default)]
pub struct GadgetNames {
    supplies: BTreeMap<String, FreshNames>,
}

impl GadgetNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn supply(&mut self, gadget: &str, role: &str) -> &mut FreshNames {
        let prefix = format!("{gadget}_{role}_");
        self.supplies.entry(prefix.clone()).or_insert_with(|| FreshNames::new(prefix))
    }

    pub fn fresh(&mut self, gadget: &str, role: &str) -> String {
        self.supply(gadget, role).fresh()
    }
}

/// A system with named interface variables and fresh auxiliary variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub interface_vars: Vec<String>,
    pub aux_vars: Vec<String>,
    pub system: System<WreathElement>,
}

impl Gadget {
    /// System file text with the interface and auxiliary variables listed
    /// in header comments.
    pub fn to_text(&self) -> String {
        format!(
            "# interface: {}\n# aux: {}\n{}",
            self.interface_vars.join(" "),
            self.aux_vars.join(" "),
            serialize_system(&self.system)
        )
    }

    pub fn check(&self, asg: &Assignment<WreathElement>, spec: GroupSpec) -> Result<bool> {
        Ok(check_system(&self.system, asg, &spec)?.is_satisfied())
    }
}

fn single(interface: &str, eq: Equation<WreathElement>) -> Gadget {
    let mut system = System::new();
    system.push(eq);
    Gadget {
        interface_vars: vec![interface.to_string()],
        aux_vars: Vec::new(),
        system,
    }
}

/// `[x, b1] = 1`, which defines the base group `N`.
pub fn gadget_in_n(x: &str, spec: GroupSpec) -> Gadget {
    single(
        x,
        Equation::trivial(Word::commutator(Word::var(x), Word::constant(WreathElement::b(spec, 0)))),
    )
}

/// `[x, a1] = 1`, which defines the active group `A`.
pub fn gadget_in_a(x: &str, spec: GroupSpec) -> Gadget {
    single(
        x,
        Equation::trivial(Word::commutator(Word::var(x), Word::constant(WreathElement::a(spec, 0)))),
    )
}

/// Membership of `x` in the cyclic subgroup `⟨a1⟩`:
/// `[x, a1] = 1 ∧ [z, b1] = 1 ∧ [b1, x] = [z, a1]` with one fresh `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicGadget {
    pub x: String,
    pub z: String,
    pub gadget: Gadget,
}

pub fn gadget_cyclic(x: &str, spec: GroupSpec, names: &mut GadgetNames) -> CyclicGadget {
    let z = names.fresh("cyc", "z");
    let a1 = Word::constant(WreathElement::a(spec, 0));
    let b1 = Word::constant(WreathElement::b(spec, 0));
    let mut system = System::new();
    system.push(Equation::trivial(Word::commutator(Word::var(x), a1.clone())));
    system.push(Equation::trivial(Word::commutator(Word::var(z.clone()), b1.clone())));
    system.push(Equation::new(
        Word::commutator(b1, Word::var(x)),
        Word::commutator(Word::var(z.clone()), a1),
    ));
    CyclicGadget {
        x: x.to_string(),
        z: z.clone(),
        gadget: Gadget {
            interface_vars: vec![x.to_string()],
            aux_vars: vec![z],
            system,
        },
    }
}

/// `x ↦ a1^γ`, `z ↦ b1^{s}` with `s · (a1 - 1) = a1^γ - 1`.
pub fn witness_cyclic(g: &CyclicGadget, gamma: i64, spec: GroupSpec) -> Assignment<WreathElement> {
    let mut asg = Assignment::new();
    asg.insert(g.x.clone(), WreathElement::a_pow(spec, 0, gamma));
    asg.insert(g.z.clone(), WreathElement::b_pow(spec, 0, geom_series(spec.m(), gamma)));
    asg
}

/// Decides whether the cyclic gadget has a solution with `x ↦ g`.
///
/// `[g, a1] = 1` forces `g ∈ A` and `[z, b1] = 1` forces `z ∈ N`; the last
/// equation then reads `b1^{g - 1} = z^{a1 - 1}`, solvable iff `a1 - 1`
/// divides `g - 1` in ℤA.
pub fn cyclic_gadget_solvable(g: &WreathElement) -> bool {
    if !g.in_a() {
        return false;
    }
    let m = g.spec().m();
    (&LaurentPoly::monomial(g.active_monomial()) - &LaurentPoly::one(m)).divisible_by_a1_minus_1()
}

/// One `β`-block of the `Δ^k` gadget: `[y, b1] = 1` and
/// `x = [y, a1 (β1 times), ..., am (βm times)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaBlock {
    pub beta: Vec<u64>,
    pub x: String,
    pub y: String,
}

/// Membership of `x` in `N^{Δ^k}`: `x = Π_β x_β` over all `|β| = k` with one
/// block per `β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPowerGadget {
    pub x: String,
    pub k: u64,
    pub blocks: Vec<DeltaBlock>,
    pub gadget: Gadget,
    definitions: Vec<Definition<WreathElement>>,
}

/// Emits `var = word` after flattening; the outermost commutator is
/// written out directly instead of through an extra temporary.
pub(crate) fn define_flat(
    var: &str,
    word: &Word<WreathElement>,
    fresh: &mut FreshNames,
    system: &mut System<WreathElement>,
    defs: &mut Vec<Definition<WreathElement>>,
) {
    let mut flat = flatten(word, fresh);
    let last_is_result = matches!(
        (&flat.word, flat.definitions.last()),
        (Word::Literal { name, inverted: false }, Some(d)) if *name == d.var
    );
    let rhs = if last_is_result {
        flat.definitions.pop().unwrap().word
    } else {
        flat.word
    };
    system.extend(definitions_system(&flat.definitions));
    defs.extend(flat.definitions);
    let def = Definition {
        var: var.to_string(),
        word: rhs,
    };
    system.push(def.equation());
    defs.push(def);
}

pub fn gadget_delta_power(x: &str, k: u64, spec: GroupSpec, names: &mut GadgetNames) -> Result<DeltaPowerGadget> {
    if k == 0 {
        return Err(Error::Usage("Δ-power gadget needs k ≥ 1".into()));
    }
    let m = spec.m();
    let b1 = Word::constant(WreathElement::b(spec, 0));
    let blocks: Vec<DeltaBlock> = compositions(m, k)
        .into_iter()
        .map(|beta| DeltaBlock {
            beta,
            x: names.fresh("delta", "x"),
            y: names.fresh("delta", "y"),
        })
        .collect();

    let mut system = System::new();
    system.push(Equation::new(
        Word::var(x),
        Word::concat(blocks.iter().map(|b| Word::var(b.x.clone())).collect()),
    ));
    let mut defs = Vec::new();
    let mut aux_vars = Vec::new();
    for block in &blocks {
        aux_vars.push(block.x.clone());
        aux_vars.push(block.y.clone());
        system.push(Equation::trivial(Word::commutator(Word::var(block.y.clone()), b1.clone())));
        let gens = block.beta.iter().enumerate().flat_map(|(i, &count)| {
            std::iter::repeat_n(Word::constant(WreathElement::a(spec, i)), count as usize)
        });
        let chain = Word::left_normed(Word::var(block.y.clone()), gens);
        let before = defs.len();
        define_flat(&block.x, &chain, names.supply("delta", "t"), &mut system, &mut defs);
        aux_vars.extend(defs[before..defs.len() - 1].iter().map(|d| d.var.clone()));
    }
    Ok(DeltaPowerGadget {
        x: x.to_string(),
        k,
        blocks,
        gadget: Gadget {
            interface_vars: vec![x.to_string()],
            aux_vars,
            system,
        },
        definitions: defs,
    })
}

/// Witness for `g ∈ N^{Δ^k}` from the decomposition of its coordinates:
/// `y_β = Π_j b_j^{q_{j,β}}` and `x_β = y_β^{c_β}`.
pub fn witness_delta_power(gadget: &DeltaPowerGadget, g: &WreathElement) -> Result<Assignment<WreathElement>> {
    let spec = g.spec();
    if !g.in_n() {
        return Err(Error::precondition(format!(
            "{g} is not in the base group N, so not in N^Δ^{}",
            gadget.k
        )));
    }
    let mut per_coordinate = Vec::with_capacity(spec.n());
    for (j, p) in g.base().iter().enumerate() {
        let valuation = p.aug_valuation();
        if !valuation.at_least(gadget.k) {
            return Err(Error::precondition(format!(
                "coordinate b{} = {p} has augmentation valuation {valuation} < {}",
                j + 1,
                gadget.k
            )));
        }
        per_coordinate.push(p.delta_decompose(gadget.k)?);
    }

    let mut asg = Assignment::new();
    asg.insert(gadget.x.clone(), g.clone());
    for block in &gadget.blocks {
        let coords = per_coordinate
            .iter()
            .map(|parts| parts.get(&block.beta).cloned().unwrap_or_else(|| LaurentPoly::zero(spec.m())))
            .collect();
        let y = WreathElement::from_base(spec, coords)?;
        asg.insert(block.x.clone(), y.module_action(&augmentation_power(spec.m(), &block.beta))?);
        asg.insert(block.y.clone(), y);
    }
    // temporaries of the flattened commutator chains
    let temps: Vec<_> = gadget
        .definitions
        .iter()
        .filter(|d| !gadget.blocks.iter().any(|b| b.x == d.var))
        .cloned()
        .collect();
    extend_by_definitions(&temps, &mut asg, &spec)?;
    Ok(asg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: usize, n: usize) -> GroupSpec {
        GroupSpec::new(m, n).unwrap()
    }

    fn poly(text: &str, m: usize) -> LaurentPoly {
        LaurentPoly::parse(text, m).unwrap()
    }

    fn one(name: &str, g: WreathElement) -> Assignment<WreathElement> {
        let mut a = Assignment::new();
        a.insert(name, g);
        a
    }

    #[test]
    fn in_n_gadget() {
        let s = spec(1, 2);
        let g = gadget_in_n("x", s);
        assert!(g.check(&one("x", WreathElement::b_pow(s, 1, poly("a1^2", 1))), s).unwrap());
        assert!(g.check(&one("x", WreathElement::identity(s)), s).unwrap());
        assert!(!g.check(&one("x", WreathElement::a(s, 0)), s).unwrap());
    }

    #[test]
    fn in_a_gadget() {
        let s = spec(2, 1);
        let g = gadget_in_a("x", s);
        assert!(g.check(&one("x", WreathElement::a(s, 1)), s).unwrap());
        assert!(g.check(&one("x", WreathElement::identity(s)), s).unwrap());
        assert!(!g.check(&one("x", WreathElement::b(s, 0)), s).unwrap());
    }

    #[test]
    fn cyclic_gadget_examples() {
        let s = spec(1, 1);
        let mut names = GadgetNames::new();
        let g = gadget_cyclic("x", s, &mut names);
        assert_eq!(g.z, "cyc_z_1");
        assert_eq!(g.gadget.system.len(), 3);

        let w = witness_cyclic(&g, 3, s);
        assert_eq!(w.get("z").cloned(), None);
        assert_eq!(w.get("cyc_z_1").unwrap(), &WreathElement::b_pow(s, 0, poly("1 + a1 + a1^2", 1)));
        assert!(g.gadget.check(&w, s).unwrap());

        let mut id = Assignment::new();
        id.insert("x", WreathElement::identity(s));
        id.insert("cyc_z_1", WreathElement::identity(s));
        assert!(g.gadget.check(&id, s).unwrap());
    }

    #[test]
    fn cyclic_witness_edge_cases() {
        let s = spec(2, 1);
        let g = gadget_cyclic("x", s, &mut GadgetNames::new());
        assert_eq!(witness_cyclic(&g, 1, s).get(&g.z).unwrap(), &WreathElement::b(s, 0));
        let w = witness_cyclic(&g, -2, s);
        assert_eq!(w.get(&g.z).unwrap(), &WreathElement::b_pow(s, 0, poly("-a1^-1 - a1^-2", 2)));
        // [b1, a1^-2] = [z, a1]
        let lhs = WreathElement::b(s, 0).commutator(&WreathElement::a_pow(s, 0, -2)).unwrap();
        let rhs = w.get(&g.z).unwrap().commutator(&WreathElement::a(s, 0)).unwrap();
        assert_eq!(lhs, rhs);
        for gamma in -20..=20 {
            assert!(g.gadget.check(&witness_cyclic(&g, gamma, s), s).unwrap(), "gamma = {gamma}");
        }
    }

    #[test]
    fn cyclic_refutation() {
        let s = spec(2, 1);
        assert!(!cyclic_gadget_solvable(&WreathElement::a(s, 1)));
        assert!(!cyclic_gadget_solvable(&WreathElement::b(s, 0)));
        assert!(!cyclic_gadget_solvable(&WreathElement::from_active(s, vec![3, 1]).unwrap()));
        assert!(cyclic_gadget_solvable(&WreathElement::a_pow(s, 0, -4)));
        assert!(cyclic_gadget_solvable(&WreathElement::identity(s)));
    }

    #[test]
    fn delta_gadget_shape_k1_m1() {
        let s = spec(1, 1);
        let g = gadget_delta_power("x", 1, s, &mut GadgetNames::new()).unwrap();
        assert_eq!(g.blocks.len(), 1);
        let text = serialize_system(&g.gadget.system);
        assert_eq!(
            text,
            "vars: delta_x_1 delta_y_1 x\n\
             x delta_x_1^-1 = 1\n\
             [delta_y_1, { active: (0) ; b1: 1 }] = 1\n\
             delta_x_1 { active: (-1) ; } delta_y_1^-1 { active: (1) ; } delta_y_1 = 1\n"
        );
    }

    #[test]
    fn delta_gadget_block_count() {
        let g = gadget_delta_power("x", 3, spec(2, 1), &mut GadgetNames::new()).unwrap();
        assert_eq!(g.blocks.len(), 4);
        assert!(gadget_delta_power("x", 0, spec(2, 1), &mut GadgetNames::new()).is_err());
    }

    #[test]
    fn delta_witness_examples() {
        let s = spec(1, 1);
        let g = gadget_delta_power("x", 2, s, &mut GadgetNames::new()).unwrap();
        let w = witness_delta_power(&g, &WreathElement::identity(s)).unwrap();
        assert!(w.iter().all(|(_, v)| v.is_identity()));
        assert!(g.gadget.check(&w, s).unwrap());

        let target = WreathElement::b_pow(s, 0, poly("a1 - 1", 1).pow(2));
        let w = witness_delta_power(&g, &target).unwrap();
        assert_eq!(w.get("delta_y_1").unwrap(), &WreathElement::b(s, 0));
        assert_eq!(w.get("delta_x_1").unwrap(), &target);
        assert!(g.gadget.check(&w, s).unwrap());

        let s = spec(2, 1);
        let g = gadget_delta_power("x", 2, s, &mut GadgetNames::new()).unwrap();
        let target = WreathElement::b_pow(s, 0, &poly("a1 - 1", 2) * &poly("a2 - 1", 2));
        let w = witness_delta_power(&g, &target).unwrap();
        for block in &g.blocks {
            let y = w.get(&block.y).unwrap();
            if block.beta == [1, 1] {
                assert_eq!(y, &WreathElement::b(s, 0));
            } else {
                assert!(y.is_identity());
            }
        }
        assert!(g.gadget.check(&w, s).unwrap());
    }

    #[test]
    fn delta_witness_rejects_non_members() {
        let s = spec(1, 2);
        let g = gadget_delta_power("x", 2, s, &mut GadgetNames::new()).unwrap();
        let bad = WreathElement::b_pow(s, 1, poly("a1 - 1", 1));
        match witness_delta_power(&g, &bad).unwrap_err() {
            Error::Precondition(msg) => assert!(msg.contains("b2") && msg.contains("valuation 1"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(witness_delta_power(&g, &WreathElement::a(s, 0)).is_err());
    }

    #[test]
    fn gadget_text_has_header() {
        let s = spec(1, 1);
        let g = gadget_cyclic("x1", s, &mut GadgetNames::new());
        let text = g.gadget.to_text();
        assert!(text.starts_with("# interface: x1\n# aux: cyc_z_1\n"));
        let back = crate::equations::parse_system::<WreathElement>(&text, &s).unwrap();
        assert_eq!(back, g.gadget.system);
    }
}
