//! Embedded reference documents and fixtures.

use indexmap::IndexMap;
use serde::Deserialize;

use crate::document::{BracketDoc, Config, InputDocument};
use crate::error::{Error, Result};
use crate::expansion::{compare_field, no_delta_report, CompareMode, ExpectedField, TangentField};
use crate::hopf::{compare_presentation, HopfPresentation};
use crate::nc::{parse_expr, parse_tensor, ParseContext};
use crate::report::CheckReport;

pub const CORRECTED: &str = include_str!("../data/corrected.json");
pub const VERBATIM: &str = include_str!("../data/verbatim.json");
const FIXTURES: &str = include_str!("../data/fixtures.json");

/// Names accepted by [`builtin`].
pub const BUILTINS: [&str; 2] = ["paper-corrected", "paper-verbatim"];

pub fn builtin_text(name: &str) -> Result<&'static str> {
    match name {
        "paper-corrected" => Ok(CORRECTED),
        "paper-verbatim" => Ok(VERBATIM),
        _ => Err(Error::Input(format!(
            "unknown builtin `{name}`; available: {}",
            BUILTINS.join(", ")
        ))),
    }
}

pub fn builtin(name: &str) -> Result<InputDocument> {
    InputDocument::from_json(builtin_text(name)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    presentation: String,
    specializations: Vec<SpecializationFixture>,
    fields: Vec<FieldFixture>,
}

fn fixture_file() -> FixtureFile {
    serde_json::from_str(FIXTURES).expect("embedded fixtures parse")
}

/// Builtin document the fixtures refer to.
pub fn fixture_presentation() -> String {
    fixture_file().presentation
}

/// Expected presentation after an assignment: nonzero brackets and
/// non-primitive coproducts only.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecializationFixture {
    pub name: String,
    pub assign: IndexMap<String, String>,
    pub brackets: Vec<BracketDoc>,
    pub coproducts: IndexMap<String, String>,
}

impl SpecializationFixture {
    pub fn assignments(&self) -> Vec<(String, String)> {
        self.assign.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    /// Compares a specialized presentation with the fixture.
    pub fn check(&self, h: &HopfPresentation, slack: u32) -> Result<CheckReport> {
        let tr = h.trunc();
        let ctx = ParseContext { basis: h.basis(), params: h.params(), order: tr.order, slack, cap: tr.cap };
        let mut brackets = Vec::new();
        for b in &self.brackets {
            let key = (h.basis().require(&b.left)?, h.basis().require(&b.right)?);
            brackets.push((key, parse_expr(&b.rhs, &ctx)?));
        }
        let mut cops = Vec::new();
        for (g, v) in &self.coproducts {
            cops.push((h.basis().require(g)?, parse_tensor(v, &ctx)?));
        }
        let mut r = compare_presentation(h, &brackets, &cops)?;
        r.check = format!("specialization {}", self.name);
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeDoc {
    Leading,
    Exact,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuEntryDoc {
    pub left: String,
    pub right: String,
    pub value: String,
}

/// `value` is written `x (x) y` for `x∧y`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaEntryDoc {
    pub generator: String,
    pub value: String,
}

/// Expected tangent field together with where to compute it.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFixture {
    pub name: String,
    #[serde(default)]
    pub at: IndexMap<String, String>,
    pub direction: String,
    mode: ModeDoc,
    /// The field must have no coproduct components at all.
    #[serde(default)]
    pub no_delta: bool,
    #[serde(default)]
    pub mu: Vec<MuEntryDoc>,
    #[serde(default)]
    pub delta: Vec<DeltaEntryDoc>,
}

impl FieldFixture {
    pub fn from_json(text: &str) -> Result<FieldFixture> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("field fixture: {e}")))
    }

    pub fn mode(&self) -> CompareMode {
        match self.mode {
            ModeDoc::Leading => CompareMode::LeadingTerms,
            ModeDoc::Exact => CompareMode::Exact,
        }
    }

    pub fn at(&self) -> Vec<(String, String)> {
        self.at.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn expected(&self, f: &TangentField, cfg: Config) -> Result<ExpectedField> {
        let b = f.basis();
        let ctx = ParseContext { basis: b, params: f.params(), order: cfg.order, slack: cfg.slack, cap: cfg.cap };
        let mut mu = Vec::new();
        for e in &self.mu {
            mu.push(((b.require(&e.left)?, b.require(&e.right)?), parse_expr(&e.value, &ctx)?));
        }
        let mut delta = Vec::new();
        for e in &self.delta {
            delta.push((b.require(&e.generator)?, parse_tensor(&e.value, &ctx)?));
        }
        Ok(ExpectedField { mu, delta })
    }

    /// Comparison report, plus the no-coproduct check when required.
    pub fn check(&self, f: &TangentField, cfg: Config, mode: Option<CompareMode>) -> Result<Vec<CheckReport>> {
        let mut r = compare_field(f, &self.expected(f, cfg)?, mode.unwrap_or(self.mode()))?;
        r.check = format!("{} {}", self.name, r.check);
        let mut out = vec![r];
        if self.no_delta {
            out.push(no_delta_report(f));
        }
        Ok(out)
    }
}

pub fn specialization_fixtures() -> Vec<SpecializationFixture> {
    fixture_file().specializations
}

pub fn field_fixtures() -> Vec<FieldFixture> {
    fixture_file().fields
}

pub fn field_fixture(name: &str) -> Result<FieldFixture> {
    let all = field_fixtures();
    let names: Vec<String> = all.iter().map(|f| f.name.clone()).collect();
    all.into_iter().find(|f| f.name == name).ok_or_else(|| {
        Error::Input(format!("unknown field fixture `{name}`; available: {}", names.join(", ")))
    })
}
