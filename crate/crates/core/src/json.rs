//! JSON forms of groups, homomorphisms, modules, cochains and embedding
//! problems.

use std::collections::BTreeMap;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::abelian::{AbMap, FinAbGroup, Matrix};
use crate::cochain::Cochain;
use crate::embedding::EmbeddingProblem;
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::groups::{standard_group, FiniteGroup, GroupHom, GroupKind};

/// Parses JSON text, reporting line and column on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

/// A group given by shorthand (`"A5"`, `"Z2xZ2"`), by family
/// (`{"kind": "sl2", "p": 5}`) or by Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Shorthand(String),
    Kind(GroupKind),
    Table(TableSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    #[serde(default = "default_label")]
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub table: Vec<Vec<usize>>,
}

fn default_label() -> String {
    "G".into()
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Shorthand(s) => standard_group(&s.parse()?),
            GroupSpec::Kind(k) => standard_group(k),
            GroupSpec::Table(t) => {
                if let Some(n) = t.order {
                    if n != t.table.len() {
                        return Err(Error::MalformedTable(format!(
                            "declared order {n} but the table has {} rows",
                            t.table.len()
                        )));
                    }
                }
                FiniteGroup::from_cayley_table(t.label.clone(), t.table.clone())
            }
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupSpec::Table(TableSpec {
            label: g.label().to_string(),
            order: Some(g.order()),
            table: g.table(),
        })
    }
}

impl From<GroupKind> for GroupSpec {
    fn from(k: GroupKind) -> Self {
        GroupSpec::Kind(k)
    }
}

impl From<&str> for GroupSpec {
    fn from(s: &str) -> Self {
        GroupSpec::Shorthand(s.to_string())
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupSpec::Shorthand(x) => x.serialize(s),
            GroupSpec::Kind(k) => k.serialize(s),
            GroupSpec::Table(t) => t.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        match &v {
            Value::String(s) => Ok(GroupSpec::Shorthand(s.clone())),
            Value::Object(o) if o.contains_key("table") => serde_json::from_value(v)
                .map(GroupSpec::Table)
                .map_err(|e| D::Error::custom(format!("group table: {e}"))),
            Value::Object(o) if o.contains_key("kind") => serde_json::from_value(v)
                .map(GroupSpec::Kind)
                .map_err(|e| D::Error::custom(format!("group kind: {e}"))),
            _ => Err(D::Error::custom(
                "a group is a shorthand string, an object with \"kind\", or an object with \"table\"",
            )),
        }
    }
}

/// A homomorphism given by the image of every element or of some generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HomSpec {
    Images { images: Vec<usize> },
    Generators { generators: Vec<(usize, usize)> },
}

impl HomSpec {
    pub fn build(&self, domain: &FiniteGroup, codomain: &FiniteGroup) -> Result<GroupHom> {
        match self {
            HomSpec::Images { images } => GroupHom::new(domain.clone(), codomain.clone(), images.clone()),
            HomSpec::Generators { generators } => GroupHom::from_generator_images(domain, codomain, generators),
        }
    }

    pub fn from_hom(h: &GroupHom) -> Self {
        HomSpec::Images {
            images: h.images().to_vec(),
        }
    }
}

pub fn matrix_from_rows(rows: &[Vec<i64>], nrows: usize, ncols: usize) -> Result<Matrix<i64>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidInput(format!("expected a {nrows}x{ncols} matrix")));
    }
    if nrows == 0 {
        return Ok(Matrix::zeros(0, ncols));
    }
    Matrix::from_rows(rows.to_vec()).ok_or_else(|| Error::InvalidInput("ragged matrix".into()))
}

/// `{"matrix": [[...]]}`; column `j` is the image of the `j`-th generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbMapSpec {
    pub matrix: Vec<Vec<i64>>,
}

impl AbMapSpec {
    pub fn build(&self, source: &FinAbGroup, target: &FinAbGroup) -> Result<AbMap> {
        AbMap::new(source, target, matrix_from_rows(&self.matrix, target.rank(), source.rank())?)
    }

    pub fn from_map(t: &AbMap) -> Self {
        AbMapSpec {
            matrix: t.matrix().to_rows(),
        }
    }
}

/// Action of chosen elements, keyed by element index; every other group
/// generator acts trivially.
pub type ActionSpec = BTreeMap<String, Vec<Vec<i64>>>;

pub fn build_action(group: &FiniteGroup, coeff: &FinAbGroup, action: &ActionSpec) -> Result<GModule> {
    let mut gens: Vec<(usize, AbMap)> = Vec::new();
    for (k, rows) in action {
        let g: usize = k
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("action key '{k}' is not an element index")))?;
        let m = AbMap::new(coeff, coeff, matrix_from_rows(rows, coeff.rank(), coeff.rank())?)?;
        gens.push((g, m));
    }
    for &g in group.generators() {
        if !gens.iter().any(|(x, _)| *x == g) {
            gens.push((g, AbMap::identity(coeff)));
        }
    }
    GModule::new(group, coeff, &gens)
}

/// `{"group": <group>, "coeff": {"factors": [...]}, "action": {"<element>": [[...]]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub group: GroupSpec,
    pub coeff: FinAbGroup,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action: ActionSpec,
}

impl ModuleSpec {
    pub fn build(&self) -> Result<GModule> {
        self.build_over(&self.group.build()?)
    }

    /// Builds the module over an already constructed copy of the group.
    pub fn build_over(&self, group: &FiniteGroup) -> Result<GModule> {
        build_action(group, &self.coeff, &self.action)
    }

    pub fn trivial(group: GroupSpec, coeff: FinAbGroup) -> Self {
        ModuleSpec {
            group,
            coeff,
            action: BTreeMap::new(),
        }
    }

    /// Records the action of the group's generators.
    pub fn from_module(m: &GModule, group: GroupSpec) -> Self {
        let action = m
            .group()
            .generators()
            .iter()
            .filter(|&&g| *m.action(g) != AbMap::identity(m.coeff()))
            .map(|&g| (g.to_string(), m.action(g).matrix().to_rows()))
            .collect();
        ModuleSpec {
            group,
            coeff: m.coeff().clone(),
            action,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntrySpec {
    pub tuple: Vec<usize>,
    pub value: Vec<i64>,
}

/// Normalized cochain listed by its nonzero values; tuples are element
/// indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainSpec {
    pub degree: usize,
    pub entries: Vec<EntrySpec>,
}

impl CochainSpec {
    pub fn build(&self, module: &GModule) -> Result<Cochain> {
        let mut c = Cochain::zero(module, self.degree)?;
        for e in &self.entries {
            if e.tuple.len() != self.degree {
                return Err(Error::InvalidInput(format!(
                    "tuple {:?} has length {} in a degree-{} cochain",
                    e.tuple,
                    e.tuple.len(),
                    self.degree
                )));
            }
            c.set(&e.tuple, &e.value)?;
        }
        Ok(c)
    }

    pub fn from_cochain(c: &Cochain) -> Self {
        CochainSpec {
            degree: c.degree(),
            entries: c
                .entries()
                .into_iter()
                .map(|(tuple, value)| EntrySpec { tuple, value })
                .collect(),
        }
    }
}

/// `{"base", "g1", "g2", "phi", "psi"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub base: GroupSpec,
    pub g1: GroupSpec,
    pub g2: GroupSpec,
    pub phi: HomSpec,
    pub psi: HomSpec,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<EmbeddingProblem> {
        let base = self.base.build()?;
        let g1 = self.g1.build()?;
        let g2 = self.g2.build()?;
        EmbeddingProblem::new(&self.phi.build(&g1, &g2)?, &self.psi.build(&base, &g2)?)
    }

    pub fn from_problem(e: &EmbeddingProblem) -> Self {
        ProblemSpec {
            base: GroupSpec::from_group(e.base()),
            g1: GroupSpec::from_group(e.g1()),
            g2: GroupSpec::from_group(e.g2()),
            phi: HomSpec::from_hom(e.phi()),
            psi: HomSpec::from_hom(e.psi()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_forms() {
        let a: GroupSpec = parse(r#""A5""#).unwrap();
        assert_eq!(a.build().unwrap().order(), 60);
        let b: GroupSpec = parse(r#"{"kind": "sl2", "p": 5}"#).unwrap();
        assert_eq!(b.build().unwrap().order(), 120);
        let c: GroupSpec = parse(r#"{"label": "Z2", "order": 2, "table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(c.build().unwrap().order(), 2);
        let t = GroupSpec::from_group(&c.build().unwrap());
        assert_eq!(parse::<GroupSpec>(&serde_json::to_string(&t).unwrap()).unwrap(), t);
    }

    #[test]
    fn malformed_group_reports_position() {
        let e = parse::<GroupSpec>("{\"table\": [[0,1],\n [1]]").unwrap_err();
        assert!(matches!(e, Error::InvalidInput(ref s) if s.contains("line 2")), "{e}");
        let bad: GroupSpec = parse(r#"{"table": [[0,1],[0,1]]}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn module_and_cochain_roundtrip() {
        let spec: ModuleSpec = parse(r#"{"group": "Z2", "coeff": {"factors": [3]}, "action": {"1": [[2]]}}"#).unwrap();
        let m = spec.build().unwrap();
        assert!(!m.is_trivial_action());
        let c = Cochain::from_fn(&m, 1, |t| vec![t[0] as i64]).unwrap();
        let cs = CochainSpec::from_cochain(&c);
        assert_eq!(cs.build(&m).unwrap(), c);
        let back = ModuleSpec::from_module(&m, "Z2".into());
        assert!(back.build().unwrap().same_as(&m));
    }
}
