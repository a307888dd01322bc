//! Built-in example algebras and their expected verdicts.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::presentation::{parse_presentation, AlgebraPresentation};

/// The sl3 singular-block algebra on `1 ⇄ 2 ⇄ 3`.
pub const CATO: &str = "\
# Quasi-hereditary algebra with duality on 1 <-> 2 <-> 3.
vertices: 3
arrow alpha 1 2
arrow alpha_o 2 1
arrow beta 2 3
arrow beta_o 3 2
relation alpha.alpha_o - beta_o.beta
relation beta.beta_o
duality alpha <-> alpha_o
duality beta <-> beta_o
";

/// Principal block of category O for so(4).
pub const SO4: &str = "\
# Principal block for so(4): a square 1 - 2, 1 - 3, 2 - 4, 3 - 4.
vertices: 4
arrow alpha 1 2
arrow alpha_o 2 1
arrow beta 1 3
arrow beta_o 3 1
arrow gamma 2 4
arrow gamma_o 4 2
arrow delta 3 4
arrow delta_o 4 3
relation gamma.alpha - delta.beta
relation alpha.alpha_o
relation beta.beta_o
relation gamma.gamma_o
relation delta.delta_o
relation alpha.beta_o - gamma_o.delta
relation beta.alpha_o - delta_o.gamma
relation alpha_o.gamma_o - beta_o.delta_o
duality alpha <-> alpha_o
duality beta <-> beta_o
duality gamma <-> gamma_o
duality delta <-> delta_o
";

/// The classical Koszul dual of CATO.
pub const PARA: &str = "\
# Parabolic counterpart of CATO.
vertices: 3
arrow alpha 1 2
arrow alpha_o 2 1
arrow beta 2 3
arrow beta_o 3 2
relation beta.alpha
relation alpha.alpha_o - beta_o.beta
relation beta.beta_o
relation alpha_o.beta_o
duality alpha <-> alpha_o
duality beta <-> beta_o
";

/// Dual extension of the Kronecker quiver; not multiplicity free.
pub const DUALEXT: &str = "\
# Dual extension of the Kronecker quiver 1 => 2.
vertices: 2
arrow alpha 1 2
arrow beta 1 2
arrow alpha_o 2 1
arrow beta_o 2 1
relation alpha.alpha_o
relation beta.alpha_o
relation alpha.beta_o
relation beta.beta_o
duality alpha <-> alpha_o
duality beta <-> beta_o
";

/// Radical-square-zero triangle: not quasi-hereditary.
pub const TRIANGLE: &str = "\
# Triangle 1 - 2 - 3 - 1 with paired arrows; every path of length 2 is zero.
vertices: 3
arrow a 1 2
arrow b 2 3
arrow c 1 3
arrow a_o 2 1
arrow b_o 3 2
arrow c_o 3 1
relation a.a_o
relation a_o.a
relation b.b_o
relation b_o.b
relation c.c_o
relation c_o.c
relation b.a
relation a_o.b_o
relation c_o.b
relation b_o.c
relation a.c_o
relation c.a_o
duality a <-> a_o
duality b <-> b_o
duality c <-> c_o
";

/// Dual extension of `1 -> 2 -> 3` plus `1 -> 3`: quasi-hereditary and
/// standard Koszul, but Δ3 has S1 in two different layers.
pub const ODDCYCLE: &str = "\
# Dual extension of the quiver a: 1 -> 2, b: 2 -> 3, c: 1 -> 3.
vertices: 3
arrow a 1 2
arrow b 2 3
arrow c 1 3
arrow a_o 2 1
arrow b_o 3 2
arrow c_o 3 1
relation a.a_o
relation c.a_o
relation a.c_o
relation c.c_o
relation b.b_o
duality a <-> a_o
duality b <-> b_o
duality c <-> c_o
";

/// The field itself: one vertex, no arrows.
pub const K: &str = "vertices: 1\n";

/// `k[x]/(x^2)` with a self-dual loop.
pub const LOOP2: &str = "vertices: 1\narrow x 1 1\nrelation x.x\nduality x <-> x\n";

/// `k[x]/(x^3)`: not Koszul.
pub const LOOP3: &str = "vertices: 1\narrow x 1 1\nrelation x.x.x\nduality x <-> x\n";

/// Γ for CATO as printed alongside the algebra (arrow names carry the
/// Ext degree: `_o` in degree 0, `_v` in degree 1).
pub const CATO_GAMMA: &str = "\
vertices: 3
arrow alpha_v 2 1 1
arrow alpha_o 2 1 0
arrow beta_v 3 2 1
arrow beta_o 3 2 0
relation alpha_v.beta_v
relation alpha_o.beta_v - alpha_v.beta_o
";

pub const PARA_GAMMA: &str = "\
vertices: 3
arrow alpha_v 2 1 1
arrow alpha_o 2 1 0
arrow beta_v 3 2 1
arrow beta_o 3 2 0
relation alpha_o.beta_v - alpha_v.beta_o
relation alpha_o.beta_o
";

pub const SO4_GAMMA: &str = "\
vertices: 4
arrow alpha_v 2 1 1
arrow alpha_o 2 1 0
arrow beta_v 3 1 1
arrow beta_o 3 1 0
arrow gamma_v 4 2 1
arrow gamma_o 4 2 0
arrow delta_v 4 3 1
arrow delta_o 4 3 0
relation alpha_v.gamma_v - beta_v.delta_v
relation alpha_o.gamma_v - beta_v.delta_o
relation alpha_v.gamma_o - beta_o.delta_v
relation alpha_o.gamma_o - beta_o.delta_o
";

pub const DUALEXT_GAMMA: &str = "\
vertices: 2
arrow alpha_v 2 1 1
arrow beta_v 2 1 1
arrow alpha_o 2 1 0
arrow beta_o 2 1 0
";

/// `A_{m+1}`: the chain `1 ⇄ 2 ⇄ … ⇄ m+1`.
///
/// Relations are `α_m α_m°` together with, for each `i` with both `α_{i-1}`
/// and `α_i` present, `α_i α_{i-1}`, `α_{i-1} α_{i-1}° - α_i° α_i` and
/// `α_{i-1}° α_i°`.
pub fn ak_source(m: usize) -> Result<String> {
    if m == 0 {
        return Err(Error::Presentation("AK needs m >= 1".into()));
    }
    let mut s = String::new();
    writeln!(s, "# A_{} chain algebra.", m + 1).unwrap();
    writeln!(s, "vertices: {}", m + 1).unwrap();
    for i in 1..=m {
        writeln!(s, "arrow a{i} {} {}", i, i + 1).unwrap();
        writeln!(s, "arrow a{i}_o {} {}", i + 1, i).unwrap();
    }
    writeln!(s, "relation a{m}.a{m}_o").unwrap();
    for i in 2..=m {
        let p = i - 1;
        writeln!(s, "relation a{i}.a{p}").unwrap();
        writeln!(s, "relation a{p}.a{p}_o - a{i}_o.a{i}").unwrap();
        writeln!(s, "relation a{p}_o.a{i}_o").unwrap();
    }
    for i in 1..=m {
        writeln!(s, "duality a{i} <-> a{i}_o").unwrap();
    }
    Ok(s)
}

/// Names accepted by [`fixture_source`].
pub const FIXTURE_NAMES: &[&str] = &[
    "CATO",
    "SO4",
    "PARA",
    "AK:<m>",
    "DUALEXT",
    "TRIANGLE",
    "ODDCYCLE",
    "K",
    "LOOP2",
    "LOOP3",
    "CATO+DUALEXT",
];

/// Fixtures used by the property suites (all with finite global dimension
/// except the loops, which are excluded).
pub const PROPERTY_FIXTURES: &[&str] = &[
    "CATO", "SO4", "PARA", "AK:2", "AK:3", "AK:4", "DUALEXT", "TRIANGLE", "ODDCYCLE", "K",
    "CATO+DUALEXT",
];

fn unknown(name: &str) -> Error {
    Error::UnknownFixture {
        name: name.to_string(),
        available: FIXTURE_NAMES.join(", "),
    }
}

/// Presentation text of a built-in fixture.
pub fn fixture_source(name: &str) -> Result<String> {
    let upper = name.trim().to_ascii_uppercase();
    let text = match upper.as_str() {
        "CATO" => CATO.to_string(),
        "SO4" => SO4.to_string(),
        "PARA" => PARA.to_string(),
        "DUALEXT" => DUALEXT.to_string(),
        "TRIANGLE" => TRIANGLE.to_string(),
        "ODDCYCLE" => ODDCYCLE.to_string(),
        "K" => K.to_string(),
        "LOOP2" => LOOP2.to_string(),
        "LOOP3" => LOOP3.to_string(),
        "CATO+DUALEXT" => {
            let a = parse_presentation(CATO)?;
            let b = parse_presentation(DUALEXT)?;
            format!(
                "# Disjoint union of CATO and DUALEXT.\n{}",
                a.disjoint_union(&b).to_text()
            )
        }
        other => {
            let m = other
                .strip_prefix("AK:")
                .or_else(|| other.strip_prefix("AK"))
                .ok_or_else(|| unknown(name))?;
            let m: usize = m.trim().parse().map_err(|_| unknown(name))?;
            ak_source(m)?
        }
    };
    Ok(text)
}

pub fn fixture(name: &str) -> Result<AlgebraPresentation> {
    parse_presentation(&fixture_source(name)?)
}

/// The published Γ presentation for a fixture, when there is one.
pub fn expected_gamma(name: &str) -> Option<&'static str> {
    match name.trim().to_ascii_uppercase().as_str() {
        "CATO" => Some(CATO_GAMMA),
        "PARA" | "AK:2" => Some(PARA_GAMMA),
        "SO4" => Some(SO4_GAMMA),
        "DUALEXT" => Some(DUALEXT_GAMMA),
        _ => None,
    }
}

/// Expected verdicts shipped with the registry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub quasi_hereditary: bool,
    pub standard_koszul: Option<bool>,
    /// Normalized height function when (H) is satisfiable.
    pub height: Option<Vec<i64>>,
    pub delta_koszul: Option<bool>,
}

pub fn expectation(name: &str) -> Option<Expectation> {
    let upper = name.trim().to_ascii_uppercase();
    let e = |qh, sk, h: Option<Vec<i64>>, dk| Expectation {
        quasi_hereditary: qh,
        standard_koszul: sk,
        height: h,
        delta_koszul: dk,
    };
    Some(match upper.as_str() {
        "CATO" | "PARA" => e(true, Some(true), Some(vec![0, 1, 2]), Some(true)),
        "SO4" => e(true, Some(true), Some(vec![0, 1, 1, 2]), Some(true)),
        "DUALEXT" => e(true, Some(true), Some(vec![0, 1]), Some(true)),
        "TRIANGLE" => e(false, None, None, None),
        "ODDCYCLE" => e(true, Some(true), None, None),
        "K" => e(true, Some(true), Some(vec![0]), Some(true)),
        "CATO+DUALEXT" => e(true, Some(true), Some(vec![0, 1, 2, 0, 1]), Some(true)),
        other => {
            let m: usize = other.strip_prefix("AK:")?.parse().ok()?;
            e(true, Some(true), Some((0..=m as i64).collect()), Some(true))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses() {
        for name in PROPERTY_FIXTURES.iter().chain(&["LOOP2", "LOOP3", "AK:6"]) {
            fixture(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        for g in [CATO_GAMMA, PARA_GAMMA, SO4_GAMMA, DUALEXT_GAMMA] {
            parse_presentation(g).unwrap();
        }
    }

    #[test]
    fn ak2_is_para() {
        let ak = fixture("AK:2").unwrap();
        let para = fixture("PARA").unwrap();
        assert_eq!(ak.relations.len(), para.relations.len());
        assert_eq!(ak.arrows.len(), para.arrows.len());
    }

    #[test]
    fn unknown_fixture_lists_registry() {
        let err = fixture("NOPE").unwrap_err();
        assert!(err.to_string().contains("CATO"));
        assert!(fixture("AK:x").is_err());
    }

    #[test]
    fn cato_source_has_expected_relations() {
        let p = fixture("CATO").unwrap();
        assert_eq!(p.vertex_count, 3);
        assert_eq!(p.arrows.len(), 4);
        let rels: Vec<String> = p.relations.iter().map(|r| p.format_relation(r)).collect();
        assert_eq!(rels, vec!["alpha.alpha_o - beta_o.beta", "beta.beta_o"]);
    }
}
