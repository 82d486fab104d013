//! Machine-readable reports. JSON objects use sorted keys and exact
//! rationals are rendered as `"p/q"` strings (`"p"` for integers).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::balances::{IndicialComponent, IndicialPoint, KowalevskiSpectrum};
use crate::classify::{classify, normalize, ClassKind, ClassLabel, GroupElement};
use crate::dynamics::{CheckOutcome, DriftReport};
use crate::exactmath::{render_rational, RatFunc, Rational};
use crate::laurent::{aci_test_with_order, ACIVerdict, Balance, LaurentError, ParamSlot};
use crate::system::LVSystem;

pub fn rational_json(r: &Rational) -> Value {
    Value::String(render_rational(r))
}

fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

fn ratfunc_json(f: &RatFunc) -> Value {
    match f.as_constant() {
        Some(c) => rational_json(&c),
        None => Value::String(f.to_string()),
    }
}

/// Finite floats as numbers, anything else as `null`.
pub fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn system_json(s: &LVSystem) -> Value {
    json!({ "a": rational_json(s.a()), "b": rational_json(s.b()), "c": rational_json(s.c()) })
}

fn group_json(g: &GroupElement) -> Value {
    json!({ "sigma": g.sigma.name(), "scale": rational_json(&g.scale) })
}

fn point_json(p: &IndicialPoint) -> Value {
    json!({ "coords": vector_json(&p.coords), "support": p.support_indices(), "trivial": p.is_trivial })
}

fn component_json(c: &IndicialComponent) -> Value {
    match c {
        IndicialComponent::Point { point } => json!({ "kind": "point", "point": point_json(point) }),
        IndicialComponent::Line { base, direction } => {
            json!({ "kind": "line", "point": point_json(base), "direction": vector_json(direction) })
        }
    }
}

fn spectrum_json(sp: &KowalevskiSpectrum) -> Value {
    json!({
        "coords": vector_json(&sp.point.coords),
        "exponents": vector_json(&sp.exponents),
        "all_rational": sp.all_rational,
        "char_poly": sp.char_poly.render("r"),
    })
}

fn balance_json(b: &Balance) -> Value {
    let params: Vec<Value> = b
        .free_params
        .iter()
        .map(|p| {
            let slot = match p.slot {
                ParamSlot::Line => "line".to_string(),
                ParamSlot::Series(i) => format!("p{i}"),
            };
            json!({ "step": p.step, "slot": slot, "basis": p.basis.iter().map(ratfunc_json).collect::<Vec<_>>() })
        })
        .collect();
    json!({
        "component": component_json(&b.component),
        "order": b.truncation_order,
        "obstructed_at": b.obstructed_at,
        "resonant_steps": b.resonant_steps,
        "free_params": params,
        "free_param_steps": b.free_param_steps(),
    })
}

pub fn label_json(l: &ClassLabel) -> Value {
    json!({
        "kind": l.kind.name(),
        "lambda": l.lambda.as_ref().map(rational_json),
        "mu": l.mu.as_ref().map(rational_json),
        "mu_orbit": vector_json(&l.mu_orbit),
        "witness": l.witness.as_ref().map(group_json),
        "representative": l.representative().as_ref().map(system_json),
        "also": l.also.iter().map(|k| k.name()).collect::<Vec<_>>(),
        "notes": l.notes,
    })
}

/// Everything the exact pipeline knows about one system.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub system: LVSystem,
    pub normal_form: (LVSystem, GroupElement),
    pub locus: Vec<IndicialComponent>,
    pub verdict: ACIVerdict,
    pub label: ClassLabel,
}

pub fn analyze(s: &LVSystem, order: Option<usize>) -> Result<AnalysisReport, LaurentError> {
    Ok(AnalysisReport {
        system: s.clone(),
        normal_form: normalize(s),
        locus: crate::balances::indicial_locus(s),
        verdict: aci_test_with_order(s, order)?,
        label: classify(s),
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> Value {
        let v = &self.verdict;
        let spectra: Vec<Value> = v
            .integrality
            .components
            .iter()
            .map(|c| {
                let mut sp = spectrum_json(&c.spectrum);
                sp["kind"] = json!(if c.component.is_line() { "line" } else { "point" });
                if c.component.is_line() {
                    sp["line_samples"] = Value::Array(c.line_samples.iter().map(spectrum_json).collect());
                    sp["constant_along_line"] = json!(c.constant_along_line());
                }
                sp
            })
            .collect();
        let witness_index = v.witness.as_ref().and_then(|w| v.balances.iter().position(|b| b.component == w.component));
        json!({
            "system": system_json(&self.system),
            "casimir_degree": rational_json(&self.system.casimir_degree()),
            "normal_form": { "representative": system_json(&self.normal_form.0), "map": group_json(&self.normal_form.1) },
            "locus": self.locus.iter().map(component_json).collect::<Vec<_>>(),
            "spectra": spectra,
            "integrality": { "all_integer": v.integrality.all_integer, "offending": vector_json(&v.integrality.offending) },
            "balances": v.balances.iter().map(balance_json).collect::<Vec<_>>(),
            "aci": { "is_aci": v.is_aci, "free_param_total": v.free_param_total, "witness": witness_index },
            "class": label_json(&self.label),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let v = &self.verdict;
        let _ = writeln!(out, "system        {}", self.system);
        let _ = writeln!(out, "a - b + c     {}", render_rational(&self.system.casimir_degree()));
        let _ = writeln!(out, "normal form   {} via {}", self.normal_form.0, self.normal_form.1);
        for c in &v.integrality.components {
            let kind = if c.component.is_line() { "line " } else { "point" };
            let coords: Vec<String> = c.spectrum.point.coords.iter().map(render_rational).collect();
            let exps: Vec<String> = c.spectrum.exponents.iter().map(render_rational).collect();
            let tail = if c.spectrum.all_rational { "" } else { " (irrational part)" };
            let _ = writeln!(out, "{kind}         ({})  exponents {}{tail}", coords.join(", "), exps.join(", "));
        }
        if !v.integrality.all_integer {
            let off: Vec<String> = v.integrality.offending.iter().map(render_rational).collect();
            let _ = writeln!(out, "non-integer   {}", off.join(", "));
        }
        for b in &v.balances {
            let coords: Vec<String> = b.component.base().coords.iter().map(render_rational).collect();
            let status = match b.obstructed_at {
                Some(k) => format!("obstructed at step {k}"),
                None => format!("free parameters at steps {:?}", b.free_param_steps()),
            };
            let _ = writeln!(out, "balance       ({})  {status}", coords.join(", "));
        }
        let _ = writeln!(out, "a.c.i.        {} ({} free parameters)", v.is_aci, v.free_param_total);
        let mut class = self.label.kind.name().to_string();
        if let Some(l) = &self.label.lambda {
            let _ = write!(class, " lambda={}", render_rational(l));
        }
        if let Some(m) = &self.label.mu {
            let _ = write!(class, " mu={}", render_rational(m));
        }
        if let Some(g) = &self.label.witness {
            let _ = write!(class, " via {g}");
        }
        let _ = writeln!(out, "class         {class}");
        for n in &self.label.notes {
            let _ = writeln!(out, "note          {n}");
        }
        out
    }
}

/// One orbit of the scan box.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub representative: LVSystem,
    pub members: usize,
    pub label: ClassLabel,
    pub is_aci: bool,
    /// Third exponent at each non-trivial point, ascending.
    pub third_exponents: Vec<Rational>,
    pub witness_steps: Vec<usize>,
}

impl ScanRow {
    pub fn agrees(&self) -> bool {
        self.label.predicts_aci() == self.is_aci
    }
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub max: i64,
    pub triples: usize,
    pub rows: Vec<ScanRow>,
}

/// Classifies every orbit of integer triples with `|a|,|b|,|c| ≤ max` once
/// and runs the free-parameter test on its representative.
pub fn scan(max: i64) -> ScanReport {
    let mut orbits: BTreeMap<LVSystem, usize> = BTreeMap::new();
    let mut triples = 0;
    for a in -max..=max {
        for b in -max..=max {
            for c in -max..=max {
                if let Ok(s) = LVSystem::from_ints(a, b, c) {
                    triples += 1;
                    *orbits.entry(normalize(&s).0).or_default() += 1;
                }
            }
        }
    }
    let keys: Vec<(LVSystem, usize)> = orbits.into_iter().collect();
    let rows = keys
        .par_iter()
        .map(|(rep, members)| {
            let verdict = crate::laurent::aci_test(rep);
            let mut third_exponents: Vec<Rational> = verdict
                .integrality
                .components
                .iter()
                .filter(|c| !c.component.is_line())
                .filter_map(|c| third_exponent(&c.spectrum))
                .collect();
            third_exponents.sort();
            ScanRow {
                representative: rep.clone(),
                members: *members,
                label: classify(rep),
                is_aci: verdict.is_aci,
                third_exponents,
                witness_steps: verdict.witness.map(|w| w.free_param_steps()).unwrap_or_default(),
            }
        })
        .collect();
    ScanReport { max, triples, rows }
}

/// The exponent left after removing one `−1` and one `1`.
pub fn third_exponent(sp: &KowalevskiSpectrum) -> Option<Rational> {
    if !sp.all_rational {
        return None;
    }
    let mut e = sp.exponents.clone();
    for target in [-Rational::from_integer(1.into()), Rational::from_integer(1.into())] {
        let i = e.iter().position(|x| *x == target)?;
        e.remove(i);
    }
    e.pop()
}

impl ScanReport {
    pub fn histogram(&self) -> BTreeMap<ClassKind, usize> {
        let mut h = BTreeMap::new();
        for r in &self.rows {
            *h.entry(r.label.kind).or_default() += 1;
        }
        h
    }

    pub fn disagreements(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| !r.agrees()).collect()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "representative": system_json(&r.representative),
                    "members": r.members,
                    "class": label_json(&r.label),
                    "is_aci": r.is_aci,
                    "agrees": r.agrees(),
                    "third_exponents": vector_json(&r.third_exponents),
                    "witness_steps": r.witness_steps,
                })
            })
            .collect();
        let hist: serde_json::Map<String, Value> =
            self.histogram().into_iter().map(|(k, n)| (k.name().to_string(), json!(n))).collect();
        json!({
            "max": self.max,
            "triples": self.triples,
            "orbits": self.rows.len(),
            "histogram": hist,
            "disagreements": self.disagreements().len(),
            "rows": rows,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "box |a|,|b|,|c| <= {}: {} triples, {} orbits", self.max, self.triples, self.rows.len());
        for r in self.rows.iter().filter(|r| r.label.kind != ClassKind::NotACI) {
            let exps: Vec<String> = r.third_exponents.iter().map(render_rational).collect();
            let _ = writeln!(
                out,
                "{:<10} {:<24} exponents {:<16} steps {:?}",
                r.label.kind.name(),
                r.representative.to_string(),
                exps.join(","),
                r.witness_steps
            );
        }
        for (k, n) in self.histogram() {
            let _ = writeln!(out, "{:<10} {n}", k.name());
        }
        let _ = writeln!(out, "disagreements {}", self.disagreements().len());
        out
    }
}

pub fn drift_json(d: &DriftReport) -> Value {
    json!({ "h_drift": float_json(d.h_drift), "f_drift": float_json(d.f_drift), "valid_region": d.valid_region })
}

pub fn outcome_json(o: &CheckOutcome) -> Value {
    let metrics: serde_json::Map<String, Value> = o.metrics.iter().map(|(k, v)| (k.clone(), float_json(*v))).collect();
    json!({ "name": o.name, "passed": o.passed, "metrics": metrics })
}
