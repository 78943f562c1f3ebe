use std::fmt::Write;

use cherednik::completion::{
    build_centralizer, main_theorem_check, psi_automorphism, quoiso_check, verify_theta,
    Centralizer, ThetaSign,
};
use cherednik::invariants::{fundamental_invariants, leaf_census_c0, Space};
use cherednik::refl::{irreps, parabolic_classes};
use cherednik::restricted::{baby_verma, cm_families, restricted_algebra};
use serde_json::{json, Value};

use crate::config::{Analysis, Session};

/// What one analysis produced. `failure` names the violated invariant.
pub struct Outcome {
    pub report: Value,
    pub markdown: String,
    pub failure: Option<String>,
}

pub struct Limits {
    pub seed: u64,
    pub max_dim: usize,
}

pub fn run(session: &Session, a: &Analysis, limits: &Limits) -> cherednik::Result<Outcome> {
    match a {
        Analysis::GroupInfo => group_info(session),
        Analysis::LeafCensus => leaf_census(session, limits.seed),
        Analysis::RestrictedBlocks => restricted_blocks(session, limits.max_dim),
        Analysis::BeCheck {
            b,
            members,
            k,
            ideals,
            printed_sign,
        } => {
            let sign = if *printed_sign {
                ThetaSign::Printed
            } else {
                ThetaSign::Flipped
            };
            let cz = match (b, members) {
                (Some(b), _) => Centralizer::at_point(&session.group, &session.param, b, *k, sign)?,
                (None, Some(m)) => build_centralizer(&session.group, &session.param, m, *k, sign)?,
                (None, None) => unreachable!("resolved at load time"),
            };
            be_check(&cz, ideals)
        }
        Analysis::MainCheck { members, k, psi } => {
            let rep = main_theorem_check(&session.group, &session.param, members, psi.clone(), *k)?;
            let mut md = format!(
                "Matrix model for {} at W_b = ⟨{}⟩ (order {}), k = {}\n\n",
                rep.group,
                rep.members.join(", "),
                rep.sub_order,
                rep.order
            );
            let _ = writeln!(
                md,
                "- matrix size {}, cuspidal quotient dim {}, predicted dim {}",
                rep.matrix_size, rep.quotient_dim, rep.predicted_dim
            );
            for s in &rep.simples {
                let _ = writeln!(
                    md,
                    "- simple {} (s ↦ {}): induced degree {}, characters agree: {}",
                    s.label, s.eigenvalue, s.induced_degree, s.agree
                );
            }
            for c in &rep.central {
                let _ = writeln!(
                    md,
                    "- θ({}) scalar: {}, central entry: {}",
                    c.element, c.scalar, c.central_entry
                );
            }
            md.push('\n');
            md.push_str(&rep.residuals.to_markdown());
            let failure = if rep.consistent() {
                None
            } else if !rep.residuals.all_zero() {
                Some(nonzero_relation(&rep.residuals))
            } else if rep.simples.iter().any(|s| !s.agree) {
                Some(
                    "induced character of a cuspidal simple disagrees with the induction formula"
                        .into(),
                )
            } else {
                Some("a central image is not scalar with central entry".into())
            };
            Ok(Outcome {
                report: serde_json::to_value(&rep).expect("serializable"),
                markdown: md,
                failure,
            })
        }
    }
}

fn nonzero_relation(r: &cherednik::completion::ThetaReport) -> String {
    let row = r
        .rows
        .iter()
        .find(|row| row.residual_norm != "0")
        .expect("some row is nonzero");
    format!(
        "θ relation {} has nonzero residual at order {}",
        row.relation, row.order
    )
}

fn group_info(session: &Session) -> cherednik::Result<Outcome> {
    let g = &session.group;
    let degrees = fundamental_invariants(g, Space::H)?.degrees;
    let poset = parabolic_classes(g)?;
    let refl: Vec<Value> = g
        .reflection_classes()
        .iter()
        .enumerate()
        .map(|(i, cls)| {
            json!({
                "label": g.reflection_class_label(i),
                "size": cls.len(),
                "c": session.param.value(i).to_string(),
            })
        })
        .collect();
    let report = json!({
        "group": g.name(),
        "order": g.order(),
        "rank": g.rank(),
        "conductor": session.conductor,
        "conjugacy_classes": g.classes().len(),
        "reflections": g.reflections().len(),
        "reflection_classes": refl,
        "invariant_degrees": degrees,
        "parabolic_classes": poset.classes,
    });
    let mut md = format!(
        "{}: |W| = {}, rank {}, {} reflections in {} classes, invariant degrees {:?}\n\n",
        g.name(),
        g.order(),
        g.rank(),
        g.reflections().len(),
        g.reflection_classes().len(),
        degrees
    );
    md.push_str("| parabolic class | rank | order | stratum dim |\n|---|---|---|---|\n");
    for c in &poset.classes {
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} |",
            c.label, c.rank, c.order, c.stratum_dim
        );
    }
    Ok(Outcome {
        report,
        markdown: md,
        failure: None,
    })
}

fn leaf_census(session: &Session, seed: u64) -> cherednik::Result<Outcome> {
    let rep = leaf_census_c0(&session.group, seed)?;
    let failure = rep.rows.iter().find(|r| !r.ok).map(|r| {
        format!(
            "leaf through stratum {} has dim {}, expected {}",
            r.label, r.sampled_leaf_dim, r.expected_leaf_dim
        )
    });
    Ok(Outcome {
        markdown: rep.to_markdown(),
        report: serde_json::to_value(&rep).expect("serializable"),
        failure,
    })
}

fn restricted_blocks(session: &Session, max_dim: usize) -> cherednik::Result<Outcome> {
    let g = &session.group;
    let cube = g.order().pow(3);
    if cube > max_dim {
        return Err(cherednik::Error::Budget(format!(
            "|W|³ = {cube} exceeds --max-dim {max_dim}"
        )));
    }
    let h = restricted_algebra(g.clone(), session.param.clone())?;
    let reps = irreps(g)?;
    let verma: Vec<Value> = reps
        .iter()
        .map(|l| {
            let m = baby_verma(&h, l);
            json!({"irrep": l.label, "dim": m.dim(), "expected": g.order() * l.dim})
        })
        .collect();
    let families = cm_families(&h)?;
    let mut failure = None;
    if h.dim() != cube {
        failure = Some(format!("dim H̄ = {} but |W|³ = {cube}", h.dim()));
    } else if let Some(v) = verma.iter().find(|v| v["dim"] != v["expected"]) {
        failure = Some(format!(
            "baby Verma module of {} has dim {}",
            v["irrep"], v["dim"]
        ));
    }
    let mut md = format!(
        "Restricted algebra of {}: dim {} (|W|³ = {cube})\n\n",
        g.name(),
        h.dim()
    );
    md.push_str("| irrep | dim Δ(λ) |\n|---|---|\n");
    for v in &verma {
        let _ = writeln!(
            md,
            "| {} | {} |",
            v["irrep"].as_str().unwrap_or_default(),
            v["dim"]
        );
    }
    let fams: Vec<String> = families
        .families
        .iter()
        .map(|f| format!("{{{}}}", f.join(", ")))
        .collect();
    let _ = writeln!(md, "\nCalogero–Moser families: {}", fams.join(" "));
    Ok(Outcome {
        report: json!({
            "group": g.name(),
            "dim": h.dim(),
            "order_cubed": cube,
            "baby_verma": verma,
            "families": families.to_json(),
        }),
        markdown: md,
        failure,
    })
}

fn be_check(cz: &Centralizer, ideals: &[u32]) -> cherednik::Result<Outcome> {
    let theta = verify_theta(cz);
    let psi = psi_automorphism(cz, cz.order)?;
    let quoiso = ideals
        .iter()
        .map(|&j| quoiso_check(cz, j))
        .collect::<cherednik::Result<Vec<_>>>()?;
    let mut md = theta.to_markdown();
    let _ = writeln!(md, "\nΨ linear part determinant: {}", psi.determinant);
    for q in &quoiso {
        let _ = writeln!(
            md,
            "- ideal images j = {}: forward {}, backward {}",
            q.j, q.forward, q.backward
        );
    }
    let failure = if !theta.all_zero() {
        Some(nonzero_relation(&theta))
    } else if !psi.round_trip_is_identity() {
        Some("Ψ ∘ Ψ⁻¹ is not the identity".into())
    } else {
        quoiso
            .iter()
            .find(|q| !q.holds())
            .map(|q| format!("θ(m(b)^{0}) ≠ C(n(0)^{0}) at order {1}", q.j, q.k))
    };
    Ok(Outcome {
        report: json!({"theta": theta, "psi": psi, "ideals": quoiso}),
        markdown: md,
        failure,
    })
}
