use std::fs;

use bialgebra_core::dataset::{builtin_text, field_fixture, FieldFixture};
use bialgebra_core::document::{Config, InputDocument, Settings};
use bialgebra_core::expansion::{
    exclusions_report, extract_coefficients, tangent_field, verify_order2, verify_order3_thz,
    CompareMode,
};
use bialgebra_core::hopf::{
    class_f_check, coassociativity_defect, coproduct_hom_defect, counit_defect, jacobi_report,
    solve_antipode, specialize,
};
use bialgebra_core::lie::{
    antisymmetry_defect, build_family, check_four_pairs, cocycle_defect, cojacobi_defect,
    jacobi_defect, FamilyParams, FourPairNames,
};
use bialgebra_core::report::{sparse_defect, CheckReport, Report};
use bialgebra_core::{Error, ParamSpace, SparseTensor, StructureTensor, TensorKind};

use crate::{Cmd, Format, Global, HopfCheck, Mode, Which};

pub enum Failure {
    /// A check could not be completed because the data is defective.
    Defect(String),
    /// Unreadable or invalid input.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoAntipode { .. } | Error::HypothesisFailure(_) => Failure::Defect(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Out<T> = std::result::Result<T, Failure>;

fn load(file: &str) -> Out<InputDocument> {
    let text = match file.strip_prefix("builtin:") {
        Some(name) => builtin_text(name)?.to_string(),
        None => fs::read_to_string(file).map_err(|e| Failure::Input(format!("{file}: {e}")))?,
    };
    Ok(InputDocument::from_json(&text)?)
}

fn settings(g: &Global) -> Settings {
    Settings { order: g.order, cap: g.cap, slack: g.slack }
}

fn assignments(items: &[String]) -> Out<Vec<(String, String)>> {
    items
        .iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Failure::Input(format!("expected P=VALUE, got `{s}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn new_report(command: &str, echo: &str, file: &str, cfg: Config, doc: &InputDocument) -> Report {
    let mut r = Report::new(format!("{command}: {echo}"));
    r.setting("file", file);
    r.setting("order", cfg.order);
    r.setting("cap", cfg.cap);
    r.setting("slack", cfg.slack);
    r.notes = doc.notes.clone();
    r
}

fn write_out(g: &Global, text: &str) -> Out<()> {
    match &g.output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(g: &Global, r: &Report) -> String {
    match g.format {
        Format::Text => r.to_string(),
        Format::Json => r.to_json() + "\n",
    }
}

/// Writes the report (to `--output` unless the command emits a document).
fn finish(g: &Global, r: &Report, document: Option<&InputDocument>) -> Out<bool> {
    match document {
        Some(doc) => {
            match &g.output {
                Some(p) => {
                    fs::write(p, doc.to_json())
                        .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
                    print!("{}", render(g, r));
                }
                None if g.format == Format::Json => print!("{}", render(g, r)),
                None => print!("{}", doc.to_json()),
            }
        }
        None => write_out(g, &render(g, r))?,
    }
    Ok(r.pass)
}

pub fn run(cmd: &Cmd, g: &Global, echo: &str) -> Out<bool> {
    match cmd {
        Cmd::Check { file, which, names } => cmd_check(g, echo, file, *which, names),
        Cmd::Family { file, names, params } => cmd_family(g, echo, file, names.as_deref(), params),
        Cmd::Hopf { file, checks } => cmd_hopf(g, echo, file, checks),
        Cmd::Specialize { file, set } => cmd_specialize(g, echo, file, set),
        Cmd::Expand { file, names, up_to, set, compare } => {
            cmd_expand(g, echo, file, names, up_to, set, compare)
        }
        Cmd::Tangent { file, direction, at, expect, mode } => {
            cmd_tangent(g, echo, file, direction.as_deref(), at, expect.as_deref(), *mode)
        }
    }
}

fn sparse_check(name: String, t: &SparseTensor, s: &StructureTensor) -> CheckReport {
    let mut r = CheckReport::new(name.clone());
    r.push(sparse_defect(name, t, s.basis(), s.params()));
    r
}

fn names_of_kind(doc: &InputDocument, kind: TensorKind, cfg: Config, p: &ParamSpace) -> Out<Vec<String>> {
    let mut out = Vec::new();
    for c in &doc.compositions {
        if doc.composition(&c.name, p, cfg)?.kind() == kind {
            out.push(c.name.clone());
        }
    }
    Ok(out)
}

fn expect_kind(t: &StructureTensor, name: &str, kind: TensorKind) -> Out<()> {
    if t.kind() != kind {
        return Err(Failure::Input(format!("composition `{name}` is not a {kind:?}").to_lowercase()));
    }
    Ok(())
}

fn cmd_check(g: &Global, echo: &str, file: &str, which: Which, names: &[String]) -> Out<bool> {
    let doc = load(file)?;
    let cfg = doc.config(settings(g));
    let params = doc.params()?;
    let mut r = new_report("check", echo, file, cfg, &doc);
    let get = |n: &str| doc.composition(n, &params, cfg);
    match which {
        Which::Lie | Which::Colie => {
            let kind = if which == Which::Lie { TensorKind::Bracket } else { TensorKind::Cobracket };
            let list = if names.is_empty() { names_of_kind(&doc, kind, cfg, &params)? } else { names.to_vec() };
            for n in &list {
                let t = get(n)?;
                expect_kind(&t, n, kind)?;
                r.add(sparse_check(format!("antisymmetry {n}"), &antisymmetry_defect(&t), &t));
                let (label, d) = match kind {
                    TensorKind::Bracket => ("jacobi", jacobi_defect(&t)?),
                    TensorKind::Cobracket => ("cojacobi", cojacobi_defect(&t)?),
                };
                r.add(sparse_check(format!("{label} {n}"), &d, &t));
            }
        }
        Which::Bialgebra => {
            let [m, d] = names else {
                return Err(Failure::Input("bialgebra takes a bracket and a cobracket name".into()));
            };
            let (mu, de) = (get(m)?, get(d)?);
            expect_kind(&mu, m, TensorKind::Bracket)?;
            expect_kind(&de, d, TensorKind::Cobracket)?;
            r.add(sparse_check(format!("jacobi {m}"), &jacobi_defect(&mu)?, &mu));
            r.add(sparse_check(format!("cojacobi {d}"), &cojacobi_defect(&de)?, &de));
            r.add(sparse_check(format!("cocycle ({m}, {d})"), &cocycle_defect(&mu, &de)?, &mu));
        }
        Which::FourPairs => {
            let n = four_names(names)?;
            let ts = [get(&n.mu_100)?, get(&n.mu_001)?, get(&n.delta_010)?, get(&n.delta_001)?];
            expect_kind(&ts[0], &n.mu_100, TensorKind::Bracket)?;
            expect_kind(&ts[1], &n.mu_001, TensorKind::Bracket)?;
            expect_kind(&ts[2], &n.delta_010, TensorKind::Cobracket)?;
            expect_kind(&ts[3], &n.delta_001, TensorKind::Cobracket)?;
            let rep = check_four_pairs(&ts[0], &ts[1], &ts[2], &ts[3], &n)?;
            for (name, d) in rep.jacobi.iter().chain(rep.cojacobi.iter()) {
                r.add(sparse_check(name.clone(), d, &ts[0]));
            }
            r.add(sparse_check(format!("mixed jacobi ({}, {})", n.mu_100, n.mu_001), &rep.mixed_jacobi, &ts[0]));
            r.add(sparse_check(
                format!("mixed cojacobi ({}, {})", n.delta_010, n.delta_001),
                &rep.mixed_cojacobi,
                &ts[0],
            ));
            for ((m, d), t) in &rep.cocycle {
                r.add(sparse_check(format!("cocycle ({m}, {d})"), t, &ts[0]));
            }
            r.setting("hypotheses_satisfied", rep.hypotheses_satisfied);
        }
    }
    finish(g, &r, None)
}

fn four_names(names: &[String]) -> Out<FourPairNames> {
    match names {
        [] => Ok(FourPairNames::default()),
        [a, b, c, d] => Ok(FourPairNames {
            mu_100: a.clone(),
            mu_001: b.clone(),
            delta_010: c.clone(),
            delta_001: d.clone(),
        }),
        _ => Err(Failure::Input("four-pairs takes exactly four composition names".into())),
    }
}

fn cmd_family(g: &Global, echo: &str, file: &str, names: Option<&[String]>, params: &[String]) -> Out<bool> {
    let doc = load(file)?;
    let cfg = doc.config(settings(g));
    let n = four_names(names.unwrap_or(&[]))?;
    let [z_mu, t, z_delta, h] = params else {
        return Err(Failure::Input("--params takes four names".into()));
    };
    let fp = FamilyParams { z_mu: z_mu.clone(), t: t.clone(), z_delta: z_delta.clone(), h: h.clone() };
    // compositions may not use the family parameters
    let base: Vec<String> = doc.parameters.iter().filter(|p| !params.contains(p)).cloned().collect();
    let base = ParamSpace::new(&base)?;
    let get = |x: &str| doc.composition(x, &base, cfg);
    let ts = [get(&n.mu_100)?, get(&n.mu_001)?, get(&n.delta_010)?, get(&n.delta_001)?];
    let mut r = new_report("family", echo, file, cfg, &doc);
    let fam = match build_family(&ts[0], &ts[1], &ts[2], &ts[3], &n, &fp) {
        Ok(f) => f,
        Err(Error::HypothesisFailure(msg)) => {
            let mut c = CheckReport::new("four-pair hypotheses");
            c.fail_with("hypotheses", msg);
            r.add(c);
            r.notes.push("family refused".into());
            return finish(g, &r, None);
        }
        Err(e) => return Err(e.into()),
    };
    let (full, parts) = fam.split_cocycle_defect()?;
    let s = &fam.mu_family;
    r.add(sparse_check("family cocycle".into(), &full, s));
    for (((m, d), pair), part) in fam.report.cocycle.iter().zip(parts.iter()) {
        let mut c = CheckReport::new(format!("split component ({m}, {d})"));
        // base parameters keep their indices in the family space
        if pair != part {
            c.fail_with("monomial part", "differs from the pairwise cocycle defect");
        }
        c.locations_checked += 1;
        r.pass &= c.pass;
        r.checks.push(c);
    }
    let mut out = InputDocument {
        schema: doc.schema.clone(),
        parameters: s.params().names().to_vec(),
        generators: doc.generators.clone(),
        compositions: vec![
            InputDocument::composition_from_tensor("mu_family", &fam.mu_family),
            InputDocument::composition_from_tensor("delta_family", &fam.delta_family),
        ],
        presentation: None,
        settings: Settings { order: Some(cfg.order), cap: None, slack: None },
        notes: vec![format!(
            "mu_family = {z_mu}*{} + {t}*{}; delta_family = {z_delta}*{} + {h}*{}",
            n.mu_001, n.mu_100, n.delta_001, n.delta_010
        )],
    };
    out.notes.extend(doc.notes.iter().cloned());
    finish(g, &r, Some(&out))
}

fn hopf_presentation(doc: &InputDocument, cfg: Config) -> Out<bialgebra_core::hopf::HopfPresentation> {
    Ok(doc.presentation(cfg)?)
}

fn cmd_hopf(g: &Global, echo: &str, file: &str, checks: &[HopfCheck]) -> Out<bool> {
    let doc = load(file)?;
    let cfg = doc.config(settings(g));
    let h = hopf_presentation(&doc, cfg)?;
    let mut r = new_report("hopf", echo, file, cfg, &doc);
    let all = checks.contains(&HopfCheck::All);
    let on = |c: HopfCheck| all || checks.contains(&c);
    if on(HopfCheck::Jacobi) {
        r.add(jacobi_report(&h)?);
    }
    if on(HopfCheck::Hom) {
        r.add(coproduct_hom_defect(&h)?);
    }
    if on(HopfCheck::Coassoc) {
        r.add(coassociativity_defect(&h)?);
    }
    if on(HopfCheck::Counit) {
        r.add(counit_defect(&h));
    }
    if on(HopfCheck::Antipode) || on(HopfCheck::ClassF) {
        match solve_antipode(&h) {
            Ok((s, rep)) => {
                if on(HopfCheck::Antipode) {
                    r.add(rep);
                }
                if on(HopfCheck::ClassF) {
                    r.add(class_f_check(&h, &s)?);
                }
            }
            Err(e @ Error::NoAntipode { .. }) => {
                let mut c = CheckReport::new("antipode");
                c.fail_with("solve", e.to_string());
                r.add(c);
            }
            Err(e) => return Err(e.into()),
        }
    }
    finish(g, &r, None)
}

fn cmd_specialize(g: &Global, echo: &str, file: &str, set: &[String]) -> Out<bool> {
    let doc = load(file)?;
    let cfg = doc.config(settings(g));
    let h = hopf_presentation(&doc, cfg)?;
    let a = assignments(set)?;
    let s = specialize(&h, &a, cfg.slack)?;
    let mut notes = doc.notes.clone();
    if !a.is_empty() {
        let desc: Vec<String> = a.iter().map(|(k, v)| format!("{k}={v}")).collect();
        notes.push(format!("specialized with {}", desc.join(", ")));
    }
    notes.push(format!("series expanded to total degree {}; checks at a higher order need a fresh run", cfg.order));
    let mut out = InputDocument::from_presentation(&s, notes);
    out.settings.slack = Some(cfg.slack);
    let mut r = new_report("specialize", echo, file, cfg, &doc);
    r.setting("parameters", s.params().names().join(","));
    finish(g, &r, Some(&out))
}

fn cmd_expand(
    g: &Global,
    echo: &str,
    file: &str,
    names: &[String],
    up_to: &[u32],
    set: &[String],
    compare: &[String],
) -> Out<bool> {
    let doc = load(file)?;
    let cfg = doc.config(settings(g));
    let mut h = hopf_presentation(&doc, cfg)?;
    let a = assignments(set)?;
    if !a.is_empty() {
        h = specialize(&h, &a, cfg.slack)?;
    }
    let [t, hh, z] = names else {
        return Err(Failure::Input("--names takes three parameter names".into()));
    };
    let [i, j, k] = up_to else {
        return Err(Failure::Input("--up-to takes three bounds".into()));
    };
    let tbl = extract_coefficients(&h, [t.as_str(), hh.as_str(), z.as_str()], [*i, *j, *k])?;
    let mut r = new_report("expand", echo, file, cfg, &doc);
    let mut table = CheckReport::new("coefficient table");
    table.info = tbl.summary();
    r.add(table);
    r.add(exclusions_report(&tbl));
    r.add(verify_order2(&tbl)?);
    r.add(verify_order3_thz(&tbl)?);
    for name in compare {
        r.add(compare_composition(&doc, name, &tbl, cfg)?);
    }
    finish(g, &r, None)
}

/// `mu_ijk` / `delta_ijk` document composition against the extracted one.
fn compare_composition(
    doc: &InputDocument,
    name: &str,
    tbl: &bialgebra_core::expansion::CoefficientTable,
    cfg: Config,
) -> Out<CheckReport> {
    let (kind, digits) = if let Some(d) = name.strip_prefix("mu_") {
        (TensorKind::Bracket, d)
    } else if let Some(d) = name.strip_prefix("delta_") {
        (TensorKind::Cobracket, d)
    } else {
        return Err(Failure::Input(format!("`{name}` is not named mu_ijk or delta_ijk")));
    };
    let idx: Vec<u32> = digits.chars().filter_map(|c| c.to_digit(10)).collect();
    let [i, j, k] = idx[..] else {
        return Err(Failure::Input(format!("`{name}` needs three index digits")));
    };
    let expected = doc.composition(name, tbl.params(), cfg)?;
    let actual = match kind {
        TensorKind::Bracket => tbl.mu([i, j, k])?,
        TensorKind::Cobracket => tbl.delta([i, j, k])?,
    };
    let mut c = CheckReport::new(format!("extracted {name} equals document {name}"));
    let diff = actual.add(&expected.scale_by(&bialgebra_core::ParamPoly::one(cfg.order).neg()))?;
    let mut d = SparseTensor::new(3);
    for (&(a, b, e), v) in diff.entries() {
        d.insert(vec![a, b, e], v.clone());
    }
    c.push(sparse_defect(name.to_string(), &d, tbl.basis(), tbl.params()));
    Ok(c)
}

fn cmd_tangent(
    g: &Global,
    echo: &str,
    file: &str,
    direction: Option<&str>,
    at: &[String],
    expect: Option<&str>,
    mode: Option<Mode>,
) -> Out<bool> {
    let doc = load(file)?;
    let cfg = doc.config(settings(g));
    let h = hopf_presentation(&doc, cfg)?;
    let fixture = match expect {
        None => None,
        Some(e) if e.ends_with(".json") => {
            let text = fs::read_to_string(e).map_err(|x| Failure::Input(format!("{e}: {x}")))?;
            Some(FieldFixture::from_json(&text)?)
        }
        Some(e) => Some(field_fixture(e)?),
    };
    let mut a = assignments(at)?;
    let dir = match (direction, &fixture) {
        (Some(d), _) => d.to_string(),
        (None, Some(f)) => {
            if a.is_empty() {
                a = f.at();
            }
            f.direction.clone()
        }
        (None, None) => return Err(Failure::Input("--direction or --expect is required".into())),
    };
    let field = tangent_field(&h, &dir, &a, cfg.slack)?;
    let mut r = new_report("tangent", echo, file, cfg, &doc);
    r.setting("direction", &dir);
    let desc: Vec<String> = a.iter().map(|(k, v)| format!("{k}={v}")).collect();
    r.setting("at", desc.join(","));
    let mut c = CheckReport::new("tangent field");
    c.info = field.lines();
    r.add(c);
    if let Some(f) = fixture {
        let m = mode.map(|m| match m {
            Mode::Leading => CompareMode::LeadingTerms,
            Mode::Exact => CompareMode::Exact,
        });
        for c in f.check(&field, cfg, m)? {
            r.add(c);
        }
    }
    finish(g, &r, None)
}
