//! The automorphism `P_i ↦ F_i(x + b) − F_i(b)` of the completed invariant
//! ring of `W_b` at the origin, cut at a finite degree.

use std::sync::Arc;

use serde::Serialize;

use super::Centralizer;
use crate::error::{Error, Result};
use crate::exact::poly::monomials_of_degree;
use crate::exact::{Cyclotomic, Matrix, Mono, MultiPoly};
use crate::invariants::{fundamental_invariants, Space};

/// `f ∈ K[h]^{W_b}` rewritten as a polynomial in the generators `gens`
/// (degrees `degs`), in variables `P1, …, Pn`.
pub fn express_in_invariants(f: &MultiPoly, gens: &[MultiPoly], degs: &[u32]) -> Result<MultiPoly> {
    let cond = f.conductor();
    let pvars = MultiPoly::names("P", gens.len());
    let top = f.total_degree().unwrap_or(0);
    // P-monomials of weighted degree ≤ top
    let mut pm: Vec<Mono> = Vec::new();
    for d in 0..=top {
        for m in monomials_of_degree(gens.len(), d) {
            let w: u32 = (0..gens.len()).map(|i| m.0[i] as u32 * degs[i]).sum();
            if w <= top {
                pm.push(m);
            }
        }
    }
    let images: Vec<MultiPoly> = pm
        .iter()
        .map(|m| {
            let mut p = MultiPoly::one(f.vars(), cond);
            for (i, g) in gens.iter().enumerate() {
                p = p.mul(&g.pow(m.0[i] as u32));
            }
            p
        })
        .collect();
    let mut rows_idx: Vec<Mono> = images
        .iter()
        .flat_map(|p| p.terms().keys().copied())
        .collect();
    rows_idx.extend(f.terms().keys().copied());
    rows_idx.sort();
    rows_idx.dedup();
    let rows: Vec<Vec<Cyclotomic>> = rows_idx
        .iter()
        .map(|r| images.iter().map(|p| p.coeff(r)).collect())
        .collect();
    let a = Matrix::with_conductor(rows, pm.len(), cond);
    let rhs: Vec<Cyclotomic> = rows_idx.iter().map(|r| f.coeff(r)).collect();
    let sol = a
        .solve(&rhs)
        .map_err(|_| Error::Invariant("polynomial is not invariant under W_b".into()))?;
    let mut out = MultiPoly::zero(&pvars, cond);
    for (m, c) in pm.iter().zip(sol) {
        out.add_term(*m, c);
    }
    Ok(out)
}

/// `Ψ` and its inverse, both in the variables `P1, …, Pn`, kept up to
/// total P-degree `order` inclusive.
#[derive(Debug, Clone, Serialize)]
pub struct PsiMap {
    pub order: u32,
    #[serde(serialize_with = "ser_polys")]
    pub images: Vec<MultiPoly>,
    #[serde(serialize_with = "ser_polys")]
    pub inverse: Vec<MultiPoly>,
    #[serde(serialize_with = "ser_matrix")]
    pub jacobian: Matrix,
    /// Invertibility certificate of the map on `n(0)/n(0)^2`.
    #[serde(serialize_with = "ser_cyc")]
    pub determinant: Cyclotomic,
    /// Degrees of the generators of `K[h]^{W_b}`.
    pub sub_degrees: Vec<u32>,
}

fn ser_polys<S: serde::Serializer>(v: &[MultiPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(
        m.rows()
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    )
}

fn ser_cyc<S: serde::Serializer>(c: &Cyclotomic, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

impl PsiMap {
    /// `self ∘ other` as substitution `P ↦ images(other(P))`, cut at the order.
    pub fn compose(f: &[MultiPoly], g: &[MultiPoly], order: u32) -> Vec<MultiPoly> {
        f.iter()
            .map(|p| p.compose(g).expect("same arity").truncate_degree(order + 1))
            .collect()
    }

    /// `Ψ ∘ Ψ⁻¹` is the identity up to the order.
    pub fn round_trip_is_identity(&self) -> bool {
        let id = Self::compose(&self.images, &self.inverse, self.order);
        let id2 = Self::compose(&self.inverse, &self.images, self.order);
        let cond = self.determinant.conductor();
        let vars = self.images[0].vars().clone();
        (0..self.images.len()).all(|i| {
            let v = MultiPoly::var(&vars, cond, i);
            id[i] == v && id2[i] == v
        })
    }
}

/// `Ψ` at the centralizer's base point, cut at P-degree `k`.
pub fn psi_automorphism(cz: &Centralizer, k: u32) -> Result<PsiMap> {
    let g = &cz.group;
    let cond = g.conductor();
    let vars = cz.small.x_vars().clone();
    let big = fundamental_invariants(g, Space::H)?;
    let small = if cz.sub.order() == g.order() {
        big.clone()
    } else {
        fundamental_invariants(&cz.sub, Space::H)?
    };
    let ps: Vec<MultiPoly> = small.gens.iter().map(|p| p.with_vars(&vars)).collect();
    let n = ps.len();
    let images: Vec<MultiPoly> = big
        .gens
        .iter()
        .map(|f| {
            let f = f.with_vars(&vars);
            let mut h = f.translate(&cz.point)?;
            h.add_term(Mono::one(), -&f.evaluate(&cz.point)?);
            Ok(express_in_invariants(&h, &ps, &small.degrees)?.truncate_degree(k + 1))
        })
        .collect::<Result<_>>()?;
    let jac_rows: Vec<Vec<Cyclotomic>> = images
        .iter()
        .map(|h| (0..n).map(|j| h.coeff(&Mono::var(j))).collect())
        .collect();
    let jacobian = Matrix::with_conductor(jac_rows, n, cond);
    let determinant = jacobian.det();
    if determinant.is_zero() {
        return Err(Error::Invariant(
            "linear part of the invariant translate map is singular; b is not in the expected stratum".into(),
        ));
    }
    let jinv = jacobian.inverse()?;
    let pvars: Arc<Vec<String>> = images[0].vars().clone();
    let pv: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(&pvars, cond, i)).collect();
    let nonlinear: Vec<MultiPoly> = images
        .iter()
        .map(|h| {
            let mut q = h.clone();
            for j in 0..n {
                q.add_term(Mono::var(j), -&h.coeff(&Mono::var(j)));
            }
            q
        })
        .collect();
    let apply_jinv = |v: &[MultiPoly]| -> Vec<MultiPoly> {
        (0..n)
            .map(|i| {
                let mut acc = MultiPoly::zero(&pvars, cond);
                for (j, vj) in v.iter().enumerate() {
                    acc.add_assign(&vj.scale(jinv.get(i, j)));
                }
                acc
            })
            .collect()
    };
    // Φ = J⁻¹ (P − H_nl(Φ)); each pass fixes one more degree
    let mut inverse = apply_jinv(&pv);
    for _ in 0..k {
        let hn = PsiMap::compose(&nonlinear, &inverse, k);
        let rhs: Vec<MultiPoly> = pv.iter().zip(&hn).map(|(p, q)| p.sub(q)).collect();
        inverse = apply_jinv(&rhs);
    }
    Ok(PsiMap {
        order: k,
        images,
        inverse,
        jacobian,
        determinant,
        sub_degrees: small.degrees.clone(),
    })
}
