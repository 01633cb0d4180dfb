use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{anyhow, Context, Result};
use itertools::Itertools;
use nakayama_bimod::algebra::{residue, NakayamaAlgebra, TorusAlgebra};
use nakayama_bimod::bimodule::{is_isomorphic_seeded, LeftModule};
use nakayama_bimod::birep::{
    cell_birep_seeded, classify_from, generators, verify_adjunction_consequences, verify_block_structure,
    FinitaryBirep, LocalizationSpec, VerificationReport,
};
use nakayama_bimod::catalog::labels;
use nakayama_bimod::cells::{compute_cells, expected_product};
use nakayama_bimod::{cell_of, construct, tensor as tensor_product, Catalog, CellTag, Error, ExactMatrix, Family, StringLabel};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn new(json: impl Serialize, text: String, ok: bool) -> Result<Self> {
        Ok(Outcome { json: serde_json::to_value(json)?, text, ok })
    }
}

fn matrix_text(m: &ExactMatrix, indent: &str) -> String {
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    cells.iter().map(|r| format!("{indent}[{}]\n", r.iter().map(|s| format!("{s:>width$}")).join(" "))).collect()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn algebra(n: usize) -> Result<Outcome> {
    let base = NakayamaAlgebra::new(n)?;
    let torus = TorusAlgebra::new(n)?;
    let mut text = String::new();
    writeln!(text, "Λ_{n}: cyclic quiver with {n} vertices, dim {}", base.dim())?;
    writeln!(text, "Λ_{n} ⊗ Λ_{n}^op: {n}×{n} torus, {} arrows, {} relations, dim {}", torus.arrows.len(), torus.relations.len(), torus.dim())?;
    Outcome::new(json!({ "n": n, "algebra": base, "torus": torus }), text, true)
}

#[derive(Serialize)]
struct CatalogEntry {
    label: String,
    family: Family,
    i: usize,
    j: usize,
    k: Option<usize>,
    dim: usize,
    dims: BTreeMap<String, usize>,
    cell: String,
}

pub fn catalog(n: usize, max_valleys: usize) -> Result<Outcome> {
    let catalog = Catalog::new(n, max_valleys)?;
    let mut entries = Vec::new();
    let mut ok = true;
    for label in labels(n, max_valleys) {
        let b = catalog.bimodule(&label);
        ok &= b.satisfies_relations() && b.total_dim() == label.dim();
        let dims = b.vertices().filter(|&v| b.dim_at(v) > 0).map(|v| (v.to_string(), b.dim_at(v))).collect();
        entries.push(CatalogEntry {
            label: label.to_string(),
            family: label.family,
            i: label.i,
            j: label.j,
            k: label.k,
            dim: b.total_dim(),
            dims,
            cell: cell_of(&label).to_string(),
        });
    }
    let mut text = String::new();
    writeln!(text, "{:<14} {:>4}  {:<8} support", "label", "dim", "cell")?;
    for e in &entries {
        let support = e.dims.iter().map(|(v, d)| format!("{v}:{d}")).join(" ");
        writeln!(text, "{:<14} {:>4}  {:<8} {support}", e.label, e.dim, e.cell)?;
    }
    writeln!(text, "{} bimodules", entries.len())?;
    Outcome::new(json!({ "n": n, "max_valleys": max_valleys, "entries": entries }), text, ok)
}

pub fn tensor(n: usize, left: &str, right: &str, max_valleys: Option<usize>) -> Result<Outcome> {
    let u = StringLabel::parse(left, n).with_context(|| format!("parsing {left}"))?;
    let v = StringLabel::parse(right, n).with_context(|| format!("parsing {right}"))?;
    let bound = max_valleys.unwrap_or(u.k.unwrap_or(0) + v.k.unwrap_or(0) + 1);
    let catalog = Catalog::new(n, bound)?;
    let t = tensor_product(&construct(&u, n)?, &construct(&v, n)?)?;
    let report = catalog.decompose(&t)?;
    let json_report = report.to_json();
    let mut text = String::new();
    writeln!(text, "{u} ⊗ {v}  (dim {})", t.total_dim())?;
    for s in &json_report.summands {
        let label = StringLabel::new(s.family, n, s.i as i64, s.j as i64, s.k)?;
        writeln!(text, "  {:>2} × {:<14} {}", s.multiplicity, label.to_string(), s.cell)?;
    }
    if json_report.residual_dim > 0 {
        writeln!(text, "  undecomposed residual of dimension {}", json_report.residual_dim)?;
    }
    let ok = json_report.residual_dim == 0;
    let json = json!({
        "n": n,
        "left": u.to_string(),
        "right": v.to_string(),
        "max_valleys": bound,
        "input_dim": t.total_dim(),
        "summands": json_report.summands,
        "residual_dim": json_report.residual_dim,
    });
    Outcome::new(json, text, ok)
}

#[derive(Serialize)]
struct Mismatch {
    left: String,
    right: String,
    expected: Option<String>,
    found: Vec<String>,
}

pub fn multable(n: usize, k: usize) -> Result<Outcome> {
    if k == 0 {
        return Err(Error::ZeroValleys.into());
    }
    let catalog = Catalog::new(n, k)?;
    let gens = generators(n, k);
    let pairs: Vec<(StringLabel, StringLabel)> = gens.iter().copied().cartesian_product(gens.iter().copied()).collect();
    let results = pairs
        .par_iter()
        .map(|(u, v)| -> Result<Option<Mismatch>> {
            let t = tensor_product(&catalog.bimodule(u), &catalog.bimodule(v))?;
            let report = catalog.decompose(&t)?;
            let part = report.cell_part(CellTag::Valleys(k));
            let expected = expected_product(u, v, n);
            let want: BTreeMap<StringLabel, usize> = expected.iter().map(|l| (*l, 1)).collect();
            if part == want && report.residual.is_none() {
                return Ok(None);
            }
            let mut found: Vec<String> =
                part.iter().map(|(l, m)| if *m == 1 { l.to_string() } else { format!("{m}×{l}") }).collect();
            if report.residual.is_some() {
                found.push(format!("residual dim {}", report.residual_dim()));
            }
            Ok(Some(Mismatch { left: u.to_string(), right: v.to_string(), expected: expected.map(|l| l.to_string()), found }))
        })
        .collect::<Result<Vec<_>>>()?;
    let mismatches: Vec<Mismatch> = results.into_iter().flatten().collect();
    let mut text = String::new();
    writeln!(text, "J_{k}, n = {n}: {} products checked against the table", pairs.len())?;
    for m in &mismatches {
        writeln!(text, "  {} ⊗ {}: expected {:?}, found {}", m.left, m.right, m.expected, m.found.join(" + "))?;
    }
    writeln!(text, "{} ({} mismatches)", verdict(mismatches.is_empty()), mismatches.len())?;
    let ok = mismatches.is_empty();
    Outcome::new(json!({ "n": n, "k": k, "products": pairs.len(), "mismatches": mismatches }), text, ok)
}

#[derive(Serialize)]
struct CellJson {
    tag: String,
    size: usize,
    idempotent: bool,
    egg_box: Vec<Vec<Vec<String>>>,
}

pub fn cells(n: usize, max_valleys: usize) -> Result<Outcome> {
    let structure = compute_cells(n, max_valleys)?;
    let chain = structure.chain();
    let mut cells_json = Vec::new();
    let mut ok = chain.is_some();
    for (c, members) in structure.two_sided_cells.iter().enumerate() {
        let tag = structure.tag(c).ok_or_else(|| anyhow!("cell {c} has mixed tags"))?;
        let egg = structure.egg_box(tag).map(|e| e.grid).unwrap_or_default();
        if let CellTag::Valleys(_) = tag {
            ok &= egg.len() == 2 * n && egg.iter().all(|r| r.len() == 2 * n && r.iter().all(|c| c.len() == 1));
        }
        let idempotent = structure.is_idempotent_cell(c);
        ok &= idempotent == (tag != CellTag::M0);
        cells_json.push(CellJson {
            tag: tag.to_string(),
            size: members.len(),
            idempotent,
            egg_box: egg.iter().map(|r| r.iter().map(|c| c.iter().map(|l| l.to_string()).collect()).collect()).collect(),
        });
    }
    if let Some(order) = &chain {
        let rank: Vec<usize> = (0..order.len()).map(|c| order.iter().position(|&x| x == c).unwrap_or(c)).collect();
        let mut indexed: Vec<(usize, CellJson)> = cells_json.into_iter().enumerate().collect();
        indexed.sort_by_key(|(c, _)| rank[*c]);
        cells_json = indexed.into_iter().map(|(_, c)| c).collect();
    }
    let chain_tags: Option<Vec<String>> =
        chain.as_ref().map(|c| c.iter().map(|&x| structure.tag(x).map(|t| t.to_string()).unwrap_or_default()).collect());
    let mut text = String::new();
    match &chain_tags {
        Some(tags) => writeln!(text, "two-sided order: {}", tags.join(" > "))?,
        None => writeln!(text, "two-sided order is not a chain")?,
    }
    for c in &cells_json {
        writeln!(text, "{} ({} elements, {})", c.tag, c.size, if c.idempotent { "idempotent" } else { "not idempotent" })?;
        if c.tag.starts_with("J_") && c.tag[2..].parse::<usize>().is_ok() {
            let width = c.egg_box.iter().flatten().flatten().map(|s| s.len()).max().unwrap_or(1);
            for row in &c.egg_box {
                writeln!(text, "  {}", row.iter().map(|cell| format!("{:<width$}", cell.join(","))).join(" "))?;
            }
        }
    }
    writeln!(text, "{}", verdict(ok))?;
    let json = json!({
        "n": n,
        "max_valleys": max_valleys,
        "closed": structure.closed,
        "catalog_relative": structure.catalog_relative,
        "chain": chain_tags,
        "cells": cells_json,
    });
    Outcome::new(json, text, ok)
}

#[derive(Serialize)]
struct AdjunctionCheck {
    i: usize,
    j: usize,
    restriction: Vec<String>,
    restriction_ok: bool,
    hom_to_algebra_ok: bool,
}

pub fn adjunction(n: usize, k: usize, seed: u64) -> Result<Outcome> {
    let mut checks = Vec::new();
    for (i, j) in (1..=n as i64).cartesian_product(1..=n as i64) {
        let s = construct(&StringLabel::string(Family::S, n, i, j, k), n)?;
        let left = s.restrict_left();
        let mut expect: Vec<LeftModule> = (0..=k as i64).map(|t| LeftModule::Projective(residue(i + t, n))).collect();
        expect.sort();
        let dual = construct(&StringLabel::string(Family::N, n, j, i, k), n)?;
        checks.push(AdjunctionCheck {
            i: i as usize,
            j: j as usize,
            restriction: left.summands.iter().map(|m| m.to_string()).collect(),
            restriction_ok: left.residual_dim == 0 && left.summands == expect,
            hom_to_algebra_ok: is_isomorphic_seeded(&s.hom_to_algebra(), &dual, seed)?,
        });
    }
    let ok = checks.iter().all(|c| c.restriction_ok && c.hom_to_algebra_ok);
    let mut text = String::new();
    for c in &checks {
        writeln!(
            text,
            "S_{}|{}: restriction {} [{}], Hom(-, Λ) ≅ N_{}|{} [{}]",
            c.i,
            c.j,
            c.restriction.join(" ⊕ "),
            verdict(c.restriction_ok),
            c.j,
            c.i,
            verdict(c.hom_to_algebra_ok)
        )?;
    }
    writeln!(text, "{}", verdict(ok))?;
    Outcome::new(json!({ "n": n, "k": k, "checks": checks, "ok": ok }), text, ok)
}

#[derive(Serialize)]
struct ActionJson {
    label: String,
    matrix: ExactMatrix,
}

fn birep_json(b: &FinitaryBirep, reports: &[&VerificationReport]) -> Value {
    let mut checks = BTreeMap::new();
    let mut failures = Vec::new();
    for r in reports {
        for (name, ok) in &r.checks {
            *checks.entry(name.clone()).or_insert(true) &= *ok;
        }
        failures.extend(r.failures.iter().cloned());
    }
    json!({
        "n": b.n,
        "k": b.k,
        "j": b.j,
        "contracted": b.contracted,
        "objects": b.objects.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        "cartan": b.cartan(),
        "arrows": b.arrows,
        "actions": b.actions.iter().map(|a| ActionJson { label: a.label.to_string(), matrix: a.matrix.clone() }).collect::<Vec<_>>(),
        "arrow_images": b.actions.iter().map(|a| json!({ "label": a.label.to_string(), "images": a.arrow_images })).collect::<Vec<_>>(),
        "rank": b.rank(),
        "transitive": b.is_transitive(),
        "simple": b.is_simple(),
        "checks": checks,
        "failures": failures,
    })
}

fn birep_text(b: &FinitaryBirep, with_actions: bool) -> Result<String> {
    let mut text = String::new();
    writeln!(text, "objects: {}", b.objects.iter().join(" "))?;
    writeln!(text, "Cartan matrix:")?;
    text.push_str(&matrix_text(&b.cartan(), "  "));
    if with_actions {
        for a in &b.actions {
            writeln!(text, "[{}]", a.label)?;
            text.push_str(&matrix_text(&a.matrix, "  "));
        }
    }
    writeln!(text, "[F]:")?;
    text.push_str(&matrix_text(&b.f_matrix(), "  "));
    Ok(text)
}

pub fn cellrep(n: usize, k: usize, j: usize, seed: u64) -> Result<Outcome> {
    let b = cell_birep_seeded(n, k, j, seed)?;
    let blocks = verify_block_structure(&b);
    let adj = verify_adjunction_consequences(&b);
    let st = b.is_simple_transitive();
    let ok = blocks.is_ok() && adj.is_ok() && st;
    let mut text = birep_text(&b, true)?;
    for f in blocks.failures.iter().chain(&adj.failures) {
        writeln!(text, "  {f}")?;
    }
    writeln!(text, "simple transitive: {st}")?;
    writeln!(text, "{}", verdict(ok))?;
    Outcome::new(birep_json(&b, &[&blocks, &adj]), text, ok)
}

pub fn localize(n: usize, k: usize, j: usize, contract: &[usize], seed: u64) -> Result<Outcome> {
    let base = cell_birep_seeded(n, k, j, seed)?;
    let spec = LocalizationSpec::new(contract.iter().copied());
    let b = match base.localize(&spec) {
        Ok(b) => b,
        Err(Error::Unstable(msg)) => {
            let text = format!("not stable: {msg}\nFAIL\n");
            let json = json!({ "n": n, "k": k, "j": j, "contract": spec.contract, "stable": false, "reason": msg });
            return Outcome::new(json, text, false);
        }
        Err(e) => return Err(e.into()),
    };
    let blocks = verify_block_structure(&b);
    let adj = verify_adjunction_consequences(&b);
    let st = b.is_simple_transitive();
    let rank_ok = b.rank() == 2 * n - spec.contract.len();
    let ok = st && rank_ok && blocks.is_ok() && adj.is_ok();
    let mut text = String::new();
    writeln!(text, "contracted: {{{}}}", spec.contract.iter().join(","))?;
    writeln!(text, "rank: {}", b.rank())?;
    text.push_str(&birep_text(&b, false)?);
    writeln!(text, "fingerprint: {{{}}}", b.fingerprint().iter().join(","))?;
    writeln!(text, "simple transitive: {st}")?;
    writeln!(text, "{}", verdict(ok))?;
    let mut json = birep_json(&b, &[&blocks, &adj]);
    json["contract"] = json!(spec.contract);
    json["stable"] = json!(true);
    json["fingerprint"] = json!(b.fingerprint());
    json["simple_transitive"] = json!(st);
    Outcome::new(json, text, ok)
}

pub fn classify(n: usize, k: usize, seed: u64) -> Result<Outcome> {
    let report = classify_from(&cell_birep_seeded(n, k, 1, seed)?)?;
    let mut text = String::new();
    writeln!(text, "{:<12} {:>4}  {:<17} fingerprint", "I", "rank", "simple transitive")?;
    for e in &report.entries {
        writeln!(
            text,
            "{:<12} {:>4}  {:<17} {{{}}}",
            format!("{{{}}}", e.contract.iter().join(",")),
            e.rank,
            e.simple_transitive,
            e.fingerprint.iter().join(",")
        )?;
    }
    writeln!(text, "counts: {}", report.counts.iter().map(|(r, c)| format!("rank {r}: {c}")).join(", "))?;
    let ok = report.is_ok();
    writeln!(text, "{}", verdict(ok))?;
    Outcome::new(&report, text, ok)
}
