//! Deterministic JSON and CSV renderings.
//!
//! Objects have sorted keys and every number is a decimal string.

use serde_json::{json, Map, Value};

use crate::arith::AbelianStructure;
use crate::audit::{audit, AuditEntry};
use crate::cubic::{class_group_cubic_with, make_field};
use crate::descent::{point_search, selmer_to_classgroup, DescentReport};
use crate::elliptic::{Curve, Point};
use crate::error::Result;
use crate::quad::{class_group_with, norm_power_class, Form, QuadField};
use crate::scan::{scan_cubic, CubicFamilyReport, FamilyReport, RowStatus, ScanSummary};

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn strs<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(s).collect())
}

fn structure(a: &AbelianStructure) -> Value {
    strs(&a.elementary_divisors)
}

fn point(p: &Point) -> Value {
    match p {
        Point::Infinity => json!("O"),
        Point::Affine { x, y } => json!({"x": s(x), "y": s(y)}),
    }
}

fn form(f: &Form) -> Value {
    strs([f.a, f.b, f.c])
}

pub fn render(v: &Value) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("serializable");
    out.push('\n');
    out
}

pub fn torsion_report(a: i64, b: i64) -> Result<Value> {
    let curve = Curve::integral(a, b)?;
    let t = curve.torsion_subgroup()?;
    let order = t.order() as u64;
    let mut checks = Vec::new();
    for p in curve.first_good_primes(3) {
        let count = curve.count_points_mod_p(p)?;
        checks.push(json!({"p": s(p), "count": s(count), "divides": count % order == 0}));
    }
    let affine: Vec<Value> = t
        .points
        .iter()
        .filter(|p| !p.is_infinity())
        .map(point)
        .collect();
    Ok(json!({
        "curve": {"a": s(a), "b": s(b)},
        "discriminant_quantity": s(curve.discriminant_quantity()),
        "order": s(order),
        "structure": structure(&t.structure),
        "structure_text": s(&t.structure),
        "points": affine,
        "generators": t.generators.iter().map(point).collect::<Vec<_>>(),
        "reduction_checks": checks,
    }))
}

pub fn classgroup_report(d: i64, budget: u64) -> Result<Value> {
    let field = QuadField::new(d)?;
    let g = class_group_with(&field, budget)?;
    Ok(json!({
        "d": s(d),
        "discriminant": s(g.discriminant),
        "class_number": s(g.class_number),
        "structure": structure(&g.structure),
        "structure_text": s(&g.structure),
        "generators": g.generators.iter().map(form).collect::<Vec<_>>(),
        "forms": g.forms.iter().map(form).collect::<Vec<_>>(),
    }))
}

pub fn cubic_report(m: i64, budget: u64) -> Result<Value> {
    let field = make_field(m)?;
    let g = class_group_cubic_with(&field, budget)?;
    let basis: Vec<Value> = field
        .basis_power_coords()
        .iter()
        .map(|row| strs(row.iter()))
        .collect();
    let factor_base: Vec<Value> = g
        .factor_base_summary()
        .iter()
        .map(|e| {
            let primes: Vec<Value> = e
                .primes
                .iter()
                .map(|p| json!({"label": s(&p.label), "e": s(p.e), "f": s(p.f)}))
                .collect();
            json!({"p": s(e.p), "primes": primes})
        })
        .collect();
    Ok(json!({
        "m": s(m),
        "field_m": s(field.m()),
        "index3": field.index3(),
        "discriminant": s(field.discriminant()),
        "minkowski_bound": s(format!("{:.6}", field.minkowski_bound())),
        "integral_basis": basis,
        "class_number": s(g.class_number),
        "structure": structure(&g.structure),
        "structure_text": s(&g.structure),
        "three_rank": s(g.l_rank(3)),
        "factor_base": factor_base,
        "relations": s(g.relations_found),
        "sweep_radius": s(g.radius),
        "saturation_radius": s(g.saturation_radius),
    }))
}

pub fn specialize_report(d: i64, u: i64, w: i64, p: u32) -> Result<Value> {
    let field = QuadField::new(d)?;
    let c = norm_power_class(&field, u, w, p)?;
    Ok(json!({
        "d": s(d),
        "discriminant": s(field.discriminant()),
        "u": s(u),
        "w": s(w),
        "p": s(p),
        "ideal_form": form(&c.ideal_form),
        "class": form(&c.class),
        "order": s(c.order),
        "primitive": c.primitive,
    }))
}

pub fn descent_report(n: i64, search_bound: i64, budget: u64) -> Result<Value> {
    let points = point_search(n, search_bound, budget)?;
    let rep = selmer_to_classgroup(n, &points, budget)?;
    Ok(descent_json(&rep, &points, search_bound))
}

pub fn descent_json(rep: &DescentReport, points: &[Point], search_bound: i64) -> Value {
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            json!({
                "point": s(&r.point),
                "bits": s(r.bits.iter().map(|b| b.to_string()).collect::<String>()),
                "odd_primes": strs(&r.square_class.odd_primes),
                "negative": r.square_class.negative,
                "independent": r.independent,
            })
        })
        .collect();
    let class_rows: Vec<Value> = rep
        .class_rows
        .iter()
        .map(|c| {
            json!({
                "point": s(&c.point),
                "alpha_norm": s(&c.alpha_norm),
                "a_norm": s(&c.a_norm),
                "a_hnf": c.a_hnf,
                "obstruction_norm": s(&c.obstruction_norm),
                "obstruction_hnf": c.obstruction_hnf,
                "class_coords": strs(&c.class_coords),
                "order": s(c.order),
                "relation_holds": c.relation_holds,
            })
        })
        .collect();
    json!({
        "n": s(rep.n),
        "search_bound": s(search_bound),
        "note": rep.note,
        "points": points.iter().map(point).collect::<Vec<_>>(),
        "excluded": strs(&rep.excluded),
        "columns": strs(&rep.columns),
        "rows": rows,
        "f2_rank": s(rep.f2_rank),
        "subgroup_order": s(1u128 << rep.f2_rank.min(127)),
        "class_number": rep.class_number.map(s).unwrap_or(Value::Null),
        "class_structure": rep.class_structure.as_ref().map(s).unwrap_or(Value::Null),
        "class_rows": class_rows,
    })
}

fn summary_json(sm: &ScanSummary) -> Value {
    let histogram: Map<String, Value> = sm
        .histogram
        .iter()
        .map(|(k, v)| (k.to_string(), s(v)))
        .collect();
    json!({
        "min": sm.min.map(s).unwrap_or(Value::Null),
        "max": sm.max.map(s).unwrap_or(Value::Null),
        "histogram": histogram,
        "verdict": sm.verdict.as_str(),
        "counterexamples": strs(&sm.counterexamples),
        "skipped": strs(&sm.skipped),
        "excluded": strs(&sm.excluded),
    })
}

fn status_fields(status: &RowStatus, rank_key: &str, obj: &mut Map<String, Value>) {
    match status {
        RowStatus::Computed(c) => {
            obj.insert("status".into(), json!("ok"));
            obj.insert("h".into(), s(c.h));
            obj.insert("divisors".into(), strs(&c.divisors));
            obj.insert(rank_key.into(), s(c.l_rank));
        }
        RowStatus::Skipped(why) => {
            obj.insert("status".into(), json!("skipped"));
            obj.insert("reason".into(), s(why));
        }
    }
}

pub fn scan_json(rep: &FamilyReport) -> Value {
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            let mut obj = Map::new();
            obj.insert("m".into(), s(r.m));
            obj.insert("raw".into(), s(r.raw));
            obj.insert("d".into(), s(r.d));
            obj.insert("discriminant".into(), s(r.discriminant));
            status_fields(&r.status, "l_rank", &mut obj);
            obj.insert(
                "specialization".into(),
                match &r.specialization {
                    Some(sp) => json!({"u": s(sp.u), "w": s(sp.w), "order": s(sp.order)}),
                    None => json!("n/a"),
                },
            );
            Value::Object(obj)
        })
        .collect();
    json!({
        "parameters": {"n": s(rep.n), "l": s(rep.l), "m_from": s(rep.m_from), "m_to": s(rep.m_to)},
        "rows": rows,
        "summary": summary_json(&rep.summary),
    })
}

pub const SCAN_CSV_HEADER: &str =
    "m,raw,d,discriminant,status,h,divisors,l_rank,spec_u,spec_w,spec_order";

/// One line per row; divisors are joined with `;`, empty cells for missing
/// values.
pub fn scan_csv(rep: &FamilyReport) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for r in &rep.rows {
        let (status, h, divisors, rank) = match &r.status {
            RowStatus::Computed(c) => (
                "ok".to_string(),
                c.h.to_string(),
                c.divisors
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(";"),
                c.l_rank.to_string(),
            ),
            RowStatus::Skipped(why) => (
                format!("skipped:{why}"),
                String::new(),
                String::new(),
                String::new(),
            ),
        };
        let (su, sw, so) = match &r.specialization {
            Some(sp) => (sp.u.to_string(), sp.w.to_string(), sp.order.to_string()),
            None => ("n/a".into(), "n/a".into(), "n/a".into()),
        };
        out.push_str(&format!(
            "{},{},{},{},{status},{h},{divisors},{rank},{su},{sw},{so}\n",
            r.m, r.raw, r.d, r.discriminant
        ));
    }
    out
}

pub fn scan_cubic_json(rep: &CubicFamilyReport) -> Value {
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| {
            let mut obj = Map::new();
            obj.insert("n".into(), s(r.n));
            status_fields(&r.status, "three_rank", &mut obj);
            Value::Object(obj)
        })
        .collect();
    json!({
        "parameters": {"from": s(rep.n_from), "to": s(rep.n_to), "l": s(3)},
        "rows": rows,
        "summary": summary_json(&rep.summary),
    })
}

pub fn scan_cubic_report(from: i64, to: i64, budget: u64) -> Result<Value> {
    Ok(scan_cubic_json(&scan_cubic(from, to, budget)?))
}

pub fn audit_json(entries: &[AuditEntry]) -> Value {
    let list: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "location": e.location,
                "quote": e.quote,
                "comparison": e.comparison,
                "computed": e.computed,
                "paper": e.paper,
                "status": e.status.as_str(),
            })
        })
        .collect();
    json!({ "entries": list })
}

pub fn audit_report(budget: u64) -> Result<Value> {
    Ok(audit_json(&audit(budget)?))
}
