//! Browser bindings: group and leaf summary, Calogero–Moser families, and
//! the completion-map relation check, each returning a JSON string.

use std::sync::Arc;

use cherednik::completion::{build_centralizer, verify_theta, ThetaSign};
use cherednik::exact::Cyclotomic;
use cherednik::invariants::leaf_census_c0;
use cherednik::rca::Param;
use cherednik::refl::{parabolic_classes, ReflGroup};
use cherednik::restricted::{cm_families, restricted_algebra};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Keeps the page responsive: restricted algebras up to `|W|³ = 512`.
const BROWSER_MAX_DIM: usize = 512;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `family` is `"cyclic"` or `"dihedral"`; `params` is a comma separated
/// list of scalar strings, one per reflection class (empty means zero).
fn session(family: &str, n: u32, params: &str) -> Result<(Arc<ReflGroup>, Param), String> {
    let mut cond = n;
    let values: Vec<&str> = params
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    for v in &values {
        let r = Cyclotomic::required_conductor(v).map_err(err)?;
        cond = cond / gcd(cond, r) * r;
    }
    let g = match family {
        "cyclic" => ReflGroup::cyclic(n, cond),
        "dihedral" => ReflGroup::dihedral(n, cond),
        other => return Err(format!("unknown family {other:?}")),
    }
    .map_err(err)?;
    let g = Arc::new(g);
    let param = if values.is_empty() {
        Param::zero(&g)
    } else {
        let vals = values
            .iter()
            .map(|v| Cyclotomic::parse(cond, v))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        Param::from_values(&g, vals).map_err(err)?
    };
    Ok((g, param))
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn group_summary_json(family: &str, n: u32, params: &str) -> Result<String, String> {
    let (g, c) = session(family, n, params)?;
    let census = leaf_census_c0(&g, 0).map_err(err)?;
    let classes: Vec<_> = (0..g.reflection_classes().len())
        .map(|i| json!({"label": g.reflection_class_label(i), "size": g.reflection_classes()[i].len(), "c": c.value(i).to_string()}))
        .collect();
    let strata: Vec<_> = parabolic_classes(&g)
        .map_err(err)?
        .classes
        .iter()
        .zip(&census.rows)
        .map(|(p, r)| json!({"label": p.label, "rank": p.rank, "order": p.order, "leaf_dim": r.sampled_leaf_dim}))
        .collect();
    Ok(json!({
        "group": g.name(),
        "order": g.order(),
        "rank": g.rank(),
        "reflection_classes": classes,
        "strata": strata,
    })
    .to_string())
}

pub fn families_json(family: &str, n: u32, params: &str) -> Result<String, String> {
    let (g, c) = session(family, n, params)?;
    let cube = g.order().pow(3);
    if cube > BROWSER_MAX_DIM {
        return Err(format!(
            "|W|³ = {cube} is too large for the browser (limit {BROWSER_MAX_DIM})"
        ));
    }
    let h = restricted_algebra(g.clone(), c).map_err(err)?;
    let fam = cm_families(&h).map_err(err)?;
    Ok(json!({"group": g.name(), "dim": h.dim(), "families": fam.families}).to_string())
}

/// Relation residuals of the completion map at the rank-one class `class`.
pub fn theta_json(m: u32, class: &str, params: &str, k: u32) -> Result<String, String> {
    if !(1..=3).contains(&k) {
        return Err("k must be 1, 2 or 3 in the browser".into());
    }
    let (g, c) = session("dihedral", m, params)?;
    let norm = |s: &str| s.replace(['<', '>', '(', ')', ' '], "");
    let poset = parabolic_classes(&g).map_err(err)?;
    let cls = poset
        .classes
        .iter()
        .find(|p| p.rank == 1 && norm(&p.label) == norm(class))
        .ok_or_else(|| format!("no rank-one parabolic class {class:?} in {}", g.name()))?;
    let cz = build_centralizer(&g, &c, &cls.representative.members, k, ThetaSign::Flipped)
        .map_err(err)?;
    let rep = verify_theta(&cz);
    Ok(json!({"all_zero": rep.all_zero(), "cosets": rep.cosets, "order": rep.order, "checked_at": rep.checked_at, "rows": rep.rows}).to_string())
}

#[wasm_bindgen]
pub fn group_summary(family: &str, n: u32, params: &str) -> Result<String, JsValue> {
    group_summary_json(family, n, params).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn families(family: &str, n: u32, params: &str) -> Result<String, JsValue> {
    families_json(family, n, params).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn theta_check(m: u32, class: &str, params: &str, k: u32) -> Result<String, JsValue> {
    theta_json(m, class, params, k).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn summary_of_i2_4() {
        let v = parse(group_summary_json("dihedral", 4, "").unwrap());
        assert_eq!(v["order"], 8);
        let dims: Vec<u64> = v["strata"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["leaf_dim"].as_u64().unwrap())
            .collect();
        assert_eq!(dims, vec![4, 2, 2, 0]);
    }

    #[test]
    fn z2_families_split_away_from_zero() {
        let v = parse(families_json("cyclic", 2, "1/2").unwrap());
        assert_eq!(v["families"].as_array().unwrap().len(), 2);
        let v = parse(families_json("cyclic", 2, "").unwrap());
        assert_eq!(v["families"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn theta_residuals_vanish() {
        let v = parse(theta_json(3, "b", "1", 2).unwrap());
        assert_eq!(v["all_zero"], true);
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(session("klein", 4, "").is_err());
        assert!(session("dihedral", 4, "1").is_err());
        assert!(families_json("dihedral", 6, "0, 0").is_err());
        assert!(theta_json(4, "I2(4)", "0,0", 2).is_err());
    }
}
