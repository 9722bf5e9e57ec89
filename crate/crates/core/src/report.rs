//! Check results with canonical, deterministic rendering.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::nc::{NCPoly, TensorPoly};
use crate::poly::{ParamPoly, ParamSpace};
use crate::tensor::{Basis, SparseTensor};

/// One nonzero defect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Defect {
    /// Where the defect lives, e.g. `pair [p_z,p_x]` or `generator l_x`.
    pub location: String,
    /// Canonical text of the nonzero value.
    pub value: String,
    /// Parameter monomials that carry nonzero coefficients.
    pub monomials: Vec<String>,
}

/// Outcome of one named check. Passes iff `defects` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub locations_checked: usize,
    pub pass: bool,
    pub defects: Vec<Defect>,
    /// Informational lines (solved antipode values and similar).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub info: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            locations_checked: 0,
            pass: true,
            defects: Vec::new(),
            info: Vec::new(),
        }
    }

    pub fn push(&mut self, d: Option<Defect>) {
        self.locations_checked += 1;
        if let Some(d) = d {
            self.pass = false;
            self.defects.push(d);
        }
    }

    pub fn fail_with(&mut self, location: impl Into<String>, value: impl Into<String>) {
        self.pass = false;
        self.defects.push(Defect {
            location: location.into(),
            value: value.into(),
            monomials: Vec::new(),
        });
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        writeln!(f, "[{verdict}] {} ({} locations)", self.check, self.locations_checked)?;
        for line in &self.info {
            writeln!(f, "    {line}")?;
        }
        for d in &self.defects {
            writeln!(f, "    {}: {}", d.location, d.value)?;
            if !d.monomials.is_empty() {
                writeln!(f, "      monomials: {}", d.monomials.join(", "))?;
            }
        }
        Ok(())
    }
}

fn monomials<'a>(coeffs: impl Iterator<Item = &'a ParamPoly>, params: &ParamSpace) -> Vec<String> {
    let mut set = BTreeSet::new();
    for c in coeffs {
        for (m, _) in c.sorted_terms() {
            set.insert((m.degree(), params.fmt_monomial(m)));
        }
    }
    set.into_iter()
        .map(|(_, s)| if s.is_empty() { "1".to_string() } else { s })
        .collect()
}

pub fn nc_defect(location: String, p: &NCPoly, basis: &Basis, params: &ParamSpace) -> Option<Defect> {
    if p.is_zero() {
        return None;
    }
    Some(Defect {
        location,
        value: p.display(basis, params).to_string(),
        monomials: monomials(p.terms().map(|(_, c)| c), params),
    })
}

pub fn tensor_defect(
    location: String,
    t: &TensorPoly,
    basis: &Basis,
    params: &ParamSpace,
) -> Option<Defect> {
    if t.is_zero() {
        return None;
    }
    Some(Defect {
        location,
        value: t.display(basis, params).to_string(),
        monomials: monomials(t.terms().map(|(_, c)| c), params),
    })
}

/// Renders nonzero entries of a sparse tensor as `[name, ...] = value`.
pub fn sparse_defect(
    location: String,
    t: &SparseTensor,
    basis: &Basis,
    params: &ParamSpace,
) -> Option<Defect> {
    if t.is_zero() {
        return None;
    }
    let parts: Vec<String> = t
        .nonzero()
        .map(|(k, v)| {
            let names: Vec<&str> = k.iter().map(|&i| basis.name(i)).collect();
            format!("[{}] = {}", names.join(","), v.display(params))
        })
        .collect();
    Some(Defect {
        location,
        value: parts.join("; "),
        monomials: monomials(t.nonzero().map(|(_, v)| v), params),
    })
}

/// A set of checks with an overall verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub settings: Vec<(String, String)>,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub pass: bool,
}

pub const SCHEMA: &str = "bialgebra-forge/1";

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            settings: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            pass: true,
        }
    }

    pub fn setting(&mut self, k: &str, v: impl ToString) {
        self.settings.push((k.to_string(), v.to_string()));
    }

    pub fn add(&mut self, c: CheckReport) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.command)?;
        if !self.settings.is_empty() {
            let s: Vec<String> = self.settings.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(f, "settings: {}", s.join(" "))?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        for c in &self.checks {
            write!(f, "{c}")?;
        }
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        writeln!(f, "summary: {verdict} ({} checks, {failed} failed)", self.checks.len())
    }
}
