//! JSON input documents: compositions, presentations and settings.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::HopfPresentation;
use crate::nc::{parse_coeff, parse_expr, parse_tensor, ParseContext, RelationTable, Trunc};
use crate::poly::ParamSpace;
use crate::report::SCHEMA;
use crate::scalar::Scalar;
use crate::tensor::{Basis, StructureTensor, TensorKind};

fn default_schema() -> String {
    SCHEMA.into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub parameters: Vec<String>,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub compositions: Vec<CompositionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationDoc>,
    #[serde(default, skip_serializing_if = "Settings::is_empty")]
    pub settings: Settings,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompositionKind {
    Bracket,
    Cobracket,
}

/// Bracket entries read `C^{upper}_{lower[0] lower[1]}`, cobracket entries
/// `D_{lower[0]}^{upper[0] upper[1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionDoc {
    pub name: String,
    pub kind: CompositionKind,
    pub entries: Vec<EntryDoc>,
}

/// `[left, right] = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub left: String,
    pub right: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub brackets: Vec<BracketDoc>,
    pub coproducts: IndexMap<String, String>,
    /// Missing generators have counit 0.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub counit: IndexMap<String, String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<u32>,
}

impl Settings {
    pub fn is_empty(&self) -> bool {
        self.order.is_none() && self.cap.is_none() && self.slack.is_none()
    }
}

/// Resolved computation settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub order: u32,
    pub cap: usize,
    pub slack: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config { order: 5, cap: 10, slack: 2 }
    }
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<InputDocument> {
        let doc: InputDocument =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("document: {e}")))?;
        if doc.schema != SCHEMA {
            return Err(Error::Input(format!(
                "unsupported schema `{}`, expected `{SCHEMA}`",
                doc.schema
            )));
        }
        let params = doc.params()?;
        let basis = doc.basis()?;
        for p in params.names() {
            if basis.index(p).is_some() {
                return Err(Error::Input(format!("`{p}` is both a parameter and a generator")));
            }
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn basis(&self) -> Result<Basis> {
        Basis::new(&self.generators)
    }

    pub fn params(&self) -> Result<ParamSpace> {
        ParamSpace::new(&self.parameters)
    }

    /// Document settings overridden by `over` where given.
    pub fn config(&self, over: Settings) -> Config {
        let d = Config::default();
        Config {
            order: over.order.or(self.settings.order).unwrap_or(d.order),
            cap: over.cap.or(self.settings.cap).unwrap_or(d.cap),
            slack: over.slack.or(self.settings.slack).unwrap_or(d.slack),
        }
    }

    pub fn composition_doc(&self, name: &str) -> Result<&CompositionDoc> {
        self.compositions
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::Input(format!("no composition named `{name}`")))
    }

    /// Builds a named composition over `params` (a sub- or superset of the
    /// declared parameters).
    pub fn composition(&self, name: &str, params: &ParamSpace, cfg: Config) -> Result<StructureTensor> {
        let c = self.composition_doc(name)?;
        let basis = self.basis()?;
        let ctx = ParseContext { basis: &basis, params, order: cfg.order, slack: cfg.slack, cap: cfg.cap };
        let arity = |v: &Vec<String>, n: usize, what: &str| -> Result<Vec<usize>> {
            if v.len() != n {
                return Err(Error::Input(format!(
                    "composition `{name}`: {what} needs {n} generator(s), got {}",
                    v.len()
                )));
            }
            v.iter().map(|g| basis.require(g)).collect()
        };
        match c.kind {
            CompositionKind::Bracket => {
                let mut rels = Vec::new();
                for e in &c.entries {
                    let lo = arity(&e.lower, 2, "lower")?;
                    let up = arity(&e.upper, 1, "upper")?;
                    rels.push(((lo[0], lo[1]), up[0], parse_coeff(&e.coeff, &ctx)?));
                }
                StructureTensor::bracket_from_relations(basis.clone(), params.clone(), cfg.order, &rels)
            }
            CompositionKind::Cobracket => {
                let mut rels = Vec::new();
                for e in &c.entries {
                    let lo = arity(&e.lower, 1, "lower")?;
                    let up = arity(&e.upper, 2, "upper")?;
                    rels.push((lo[0], (up[0], up[1]), parse_coeff(&e.coeff, &ctx)?));
                }
                StructureTensor::cobracket_from_relations(basis.clone(), params.clone(), cfg.order, &rels)
            }
        }
    }

    pub fn presentation(&self, cfg: Config) -> Result<HopfPresentation> {
        let pd = self
            .presentation
            .as_ref()
            .ok_or_else(|| Error::Input("document has no presentation".into()))?;
        let basis = self.basis()?;
        let params = self.params()?;
        let ctx = ParseContext { basis: &basis, params: &params, order: cfg.order, slack: cfg.slack, cap: cfg.cap };
        let mut rels = Vec::new();
        for b in &pd.brackets {
            let rhs = parse_expr(&b.rhs, &ctx).map_err(|e| located(e, &format!("[{},{}]", b.left, b.right)))?;
            rels.push(((basis.require(&b.left)?, basis.require(&b.right)?), rhs));
        }
        let table = RelationTable::new(basis.clone(), params.clone(), Trunc::new(cfg.order, cfg.cap), rels)?;
        for g in pd.coproducts.keys().chain(pd.counit.keys()) {
            basis.require(g)?;
        }
        let mut cops = Vec::new();
        let mut counit = Vec::new();
        for g in basis.names() {
            let text = pd
                .coproducts
                .get(g)
                .ok_or_else(|| Error::Input(format!("no coproduct for generator `{g}`")))?;
            cops.push(parse_tensor(text, &ctx).map_err(|e| located(e, &format!("Delta {g}")))?);
            counit.push(match pd.counit.get(g) {
                None => Scalar::zero(),
                Some(t) => {
                    let c = parse_coeff(t, &ctx)?;
                    if c.terms().any(|(m, _)| !m.is_one()) {
                        return Err(Error::Input(format!("counit of `{g}` must be a scalar")));
                    }
                    c.constant_term()
                }
            });
        }
        HopfPresentation::new(table, cops, counit)
    }

    /// Document carrying `h` in canonical form; brackets are listed for
    /// every pair `[x_j, x_i]`, `j > i`, with a nonzero right-hand side.
    pub fn from_presentation(h: &HopfPresentation, notes: Vec<String>) -> InputDocument {
        let basis = h.basis();
        let params = h.params();
        let mut brackets = Vec::new();
        for j in 0..basis.len() {
            for i in 0..j {
                let rhs = h.table().bracket(j, i);
                if !rhs.is_zero() {
                    brackets.push(BracketDoc {
                        left: basis.name(j).into(),
                        right: basis.name(i).into(),
                        rhs: rhs.display(basis, params).to_string(),
                    });
                }
            }
        }
        let coproducts = (0..basis.len())
            .map(|g| (basis.name(g).to_string(), h.coproduct(g).display(basis, params).to_string()))
            .collect();
        let counit = (0..basis.len())
            .filter(|&g| !h.counit(g).is_zero())
            .map(|g| (basis.name(g).to_string(), h.counit(g).to_string()))
            .collect();
        let tr = h.trunc();
        InputDocument {
            schema: SCHEMA.into(),
            parameters: params.names().to_vec(),
            generators: basis.names().to_vec(),
            compositions: Vec::new(),
            presentation: Some(PresentationDoc { brackets, coproducts, counit }),
            settings: Settings { order: Some(tr.order), cap: Some(tr.cap), slack: None },
            notes,
        }
    }

    /// Composition block for a tensor: one entry per stored orientation
    /// with `i < j` (brackets) or `j < k` (cobrackets).
    pub fn composition_from_tensor(name: &str, t: &StructureTensor) -> CompositionDoc {
        let b = t.basis();
        let mut entries = Vec::new();
        for (&(i, j, k), v) in t.entries() {
            let (lower, upper) = match t.kind() {
                TensorKind::Bracket if i < j => (vec![b.name(i), b.name(j)], vec![b.name(k)]),
                TensorKind::Cobracket if j < k => (vec![b.name(i)], vec![b.name(j), b.name(k)]),
                _ => continue,
            };
            entries.push(EntryDoc {
                lower: lower.into_iter().map(String::from).collect(),
                upper: upper.into_iter().map(String::from).collect(),
                coeff: v.display(t.params()).to_string(),
            });
        }
        let kind = match t.kind() {
            TensorKind::Bracket => CompositionKind::Bracket,
            TensorKind::Cobracket => CompositionKind::Cobracket,
        };
        CompositionDoc { name: name.into(), kind, entries }
    }
}

fn located(e: Error, at: &str) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos, msg: format!("{msg} (in {at})") },
        Error::Input(m) => Error::Input(format!("{m} (in {at})")),
        other => other,
    }
}
