//! Invariant theory of W on h, h* and h ⊕ h*: Reynolds averaging, fundamental
//! invariants, coinvariant bases and diagonal invariant samples.

mod leaves;

pub use leaves::{leaf_census_c0, leaf_dim_at, poisson_scale, StratumReport, StratumRow};

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::linalg::SpanBasis;
use crate::exact::poly::monomials_of_degree;
use crate::exact::{Cyclotomic, IdealBasis, Mono, MultiPoly, Rational};
use crate::rca::var_names;
use crate::refl::ReflGroup;

/// Which polynomial ring the invariants live in. `H` means functions on h,
/// i.e. polynomials in the x's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Space {
    H,
    HStar,
    HPlusHStar,
}

/// Variable names used for a space: `x1..xn`, `y1..yn` or both (`x`, `y` in
/// rank one).
pub fn space_vars(n: usize, space: Space) -> Arc<Vec<String>> {
    match space {
        Space::H => var_names("x", n),
        Space::HStar => var_names("y", n),
        Space::HPlusHStar => {
            let mut v = (*var_names("x", n)).clone();
            v.extend(var_names("y", n).iter().cloned());
            Arc::new(v)
        }
    }
}

/// `w · p`: the ring automorphism extending the linear action on coordinates.
pub fn act_poly(g: &ReflGroup, w: usize, p: &MultiPoly, space: Space) -> Result<MultiPoly> {
    let n = g.rank();
    let vars = p.vars().clone();
    let cond = g.conductor();
    let lin = |m: &crate::exact::Matrix, j: usize, offset: usize| {
        let mut coeffs = vec![Cyclotomic::zero(cond); vars.len()];
        for i in 0..n {
            coeffs[offset + i] = m.get(i, j).clone();
        }
        MultiPoly::linear(&vars, cond, &coeffs)
    };
    let images: Vec<MultiPoly> = match space {
        Space::H => (0..n).map(|j| lin(g.dual_matrix(w), j, 0)).collect(),
        Space::HStar => (0..n).map(|j| lin(g.matrix(w), j, 0)).collect(),
        Space::HPlusHStar => (0..n)
            .map(|j| lin(g.dual_matrix(w), j, 0))
            .chain((0..n).map(|j| lin(g.matrix(w), j, n)))
            .collect(),
    };
    p.compose(&images)
}

/// `|W|⁻¹ Σ_w w·p`.
pub fn reynolds(g: &ReflGroup, p: &MultiPoly, space: Space) -> Result<MultiPoly> {
    let mut acc = MultiPoly::zero(p.vars(), p.conductor());
    for w in 0..g.order() {
        acc.add_assign(&act_poly(g, w, p, space)?);
    }
    Ok(acc.scale(&Cyclotomic::from_rational(
        g.conductor(),
        Rational::new(1, g.order() as i64),
    )))
}

pub fn is_invariant(g: &ReflGroup, p: &MultiPoly, space: Space) -> Result<bool> {
    for &s in g.generators() {
        if act_poly(g, s, p, space)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantSet {
    pub space: Space,
    #[serde(serialize_with = "ser_polys")]
    pub gens: Vec<MultiPoly>,
    pub degrees: Vec<u32>,
    /// False for samples that are only known to span up to a degree bound.
    pub generating: bool,
}

fn ser_polys<S: serde::Serializer>(v: &[MultiPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

fn coords(p: &MultiPoly, monos: &[Mono]) -> Vec<Cyclotomic> {
    monos.iter().map(|m| p.coeff(m)).collect()
}

fn from_coords(vars: &Arc<Vec<String>>, cond: u32, monos: &[Mono], v: &[Cyclotomic]) -> MultiPoly {
    let mut p = MultiPoly::zero(vars, cond);
    for (m, c) in monos.iter().zip(v) {
        p.add_term(*m, c.clone());
    }
    p
}

/// Products of `gens` (with degrees `degs`) of total degree exactly `d`.
fn products_of_degree(gens: &[MultiPoly], degs: &[u32], d: u32, one: &MultiPoly) -> Vec<MultiPoly> {
    fn rec(
        i: usize,
        left: u32,
        cur: MultiPoly,
        gens: &[MultiPoly],
        degs: &[u32],
        out: &mut Vec<MultiPoly>,
    ) {
        if left == 0 {
            out.push(cur);
            return;
        }
        if i == gens.len() {
            return;
        }
        let mut c = cur;
        let mut l = left;
        loop {
            rec(i + 1, l, c.clone(), gens, degs, out);
            if degs[i] == 0 || degs[i] > l {
                break;
            }
            c = c.mul(&gens[i]);
            l -= degs[i];
        }
    }
    let mut out = Vec::new();
    rec(0, d, one.clone(), gens, degs, &mut out);
    out
}

/// Determinant of the Jacobian matrix `∂F_i/∂v_j`, symbolically.
pub fn jacobian_det(gens: &[MultiPoly]) -> MultiPoly {
    let n = gens.len();
    let m: Vec<Vec<MultiPoly>> = gens
        .iter()
        .map(|f| (0..n).map(|j| f.derivative(j)).collect())
        .collect();
    fn det(m: &[Vec<MultiPoly>], cols: &[usize]) -> MultiPoly {
        if cols.len() == 1 {
            return m[0][cols[0]].clone();
        }
        let mut acc = MultiPoly::zero(m[0][0].vars(), m[0][0].conductor());
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = m[0][c].mul(&det(&m[1..], &rest));
            acc = if k % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }
    det(&m, &(0..n).collect::<Vec<_>>())
}

/// Homogeneous algebraically independent generators of `K[space]^W`, found
/// degree by degree; default degree bound `2|W|`.
pub fn fundamental_invariants(g: &ReflGroup, space: Space) -> Result<InvariantSet> {
    fundamental_invariants_bounded(g, space, 2 * g.order() as u32)
}

pub fn fundamental_invariants_bounded(
    g: &ReflGroup,
    space: Space,
    bound: u32,
) -> Result<InvariantSet> {
    if space == Space::HPlusHStar {
        return Err(Error::Invalid(
            "fundamental invariants are defined for h and h* only; use diagonal_invariant_sample"
                .into(),
        ));
    }
    let n = g.rank();
    let cond = g.conductor();
    let vars = space_vars(n, space);
    let one = MultiPoly::one(&vars, cond);
    let mut gens: Vec<MultiPoly> = Vec::new();
    let mut degs: Vec<u32> = Vec::new();
    for d in 1..=bound {
        if gens.len() == n {
            break;
        }
        let monos = monomials_of_degree(n, d);
        let mut span = SpanBasis::new(cond, monos.len());
        for p in products_of_degree(&gens, &degs, d, &one) {
            span.insert(&coords(&p, &monos));
        }
        for m in monos.iter().rev() {
            let r = reynolds(
                g,
                &MultiPoly::monomial(&vars, *m, Cyclotomic::one(cond)),
                space,
            )?;
            if r.is_zero() {
                continue;
            }
            if span.insert(&coords(&r, &monos)) {
                gens.push(r.monic());
                degs.push(d);
                if gens.len() == n {
                    break;
                }
            }
        }
    }
    if gens.len() < n {
        return Err(Error::Budget(format!(
            "found {} of {} fundamental invariants below degree {bound}",
            gens.len(),
            n
        )));
    }
    if jacobian_det(&gens).is_zero() {
        return Err(Error::Invariant(
            "invariants found are algebraically dependent".into(),
        ));
    }
    Ok(InvariantSet {
        space,
        gens,
        degrees: degs,
        generating: true,
    })
}

/// Standard monomials of `K[space]/⟨K[space]^W_+⟩`.
#[derive(Debug, Clone)]
pub struct CoinvariantBasis {
    pub space: Space,
    pub monomials: Vec<Mono>,
    pub ideal: IdealBasis,
}

impl CoinvariantBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Mono) -> Option<usize> {
        self.monomials.binary_search(m).ok()
    }

    /// Coordinates of the normal form of `p` on the basis.
    pub fn reduce(&self, p: &MultiPoly) -> Result<Vec<Cyclotomic>> {
        let nf = self.ideal.normal_form(p);
        let mut v = vec![Cyclotomic::zero(p.conductor()); self.monomials.len()];
        for (m, c) in nf.terms() {
            let i = self
                .index_of(m)
                .ok_or_else(|| Error::Invariant("normal form left the coinvariant basis".into()))?;
            v[i] = c.clone();
        }
        Ok(v)
    }
}

pub fn coinvariant_basis(g: &ReflGroup, space: Space) -> Result<CoinvariantBasis> {
    let inv = fundamental_invariants(g, space)?;
    let ideal = IdealBasis::new(inv.gens.clone())?;
    let top: u32 = inv.degrees.iter().map(|d| d - 1).sum();
    let mut monomials = ideal.standard_monomials(top + 1)?;
    monomials.sort();
    if monomials.len() != g.order() {
        return Err(Error::Invariant(format!(
            "coinvariant algebra has dimension {} but |W| = {}",
            monomials.len(),
            g.order()
        )));
    }
    Ok(CoinvariantBasis {
        space,
        monomials,
        ideal,
    })
}

/// Spanning set of the bi-homogeneous invariants of `K[h ⊕ h*]` of total
/// degree `1..=degree_bound`, obtained by averaging every monomial.
pub fn diagonal_invariant_sample(g: &ReflGroup, degree_bound: u32) -> Result<InvariantSet> {
    if degree_bound < 2 {
        return Err(Error::Invalid("degree bound must be at least 2".into()));
    }
    let n = g.rank();
    let cond = g.conductor();
    let vars = space_vars(n, Space::HPlusHStar);
    let mut gens = Vec::new();
    let mut degrees = Vec::new();
    for d in 1..=degree_bound {
        for p in 0..=d {
            // bidegree (p, d − p)
            let xs = monomials_of_degree(n, p);
            let ys = monomials_of_degree(n, d - p);
            let monos: Vec<Mono> = {
                let mut v: Vec<Mono> = xs
                    .iter()
                    .flat_map(|a| {
                        ys.iter().map(move |b| {
                            let mut m = *a;
                            m.0[n..2 * n].copy_from_slice(&b.0[..n]);
                            m
                        })
                    })
                    .collect();
                v.sort();
                v
            };
            let mut span = SpanBasis::new(cond, monos.len());
            for m in &monos {
                let r = reynolds(
                    g,
                    &MultiPoly::monomial(&vars, *m, Cyclotomic::one(cond)),
                    Space::HPlusHStar,
                )?;
                span.insert(&coords(&r, &monos));
            }
            for v in span.basis() {
                gens.push(from_coords(&vars, cond, &monos, &v).monic());
                degrees.push(d);
            }
        }
    }
    Ok(InvariantSet {
        space: Space::HPlusHStar,
        gens,
        degrees,
        generating: false,
    })
}

/// Number of linearly independent invariants of each degree `0..=max`, from
/// Molien-style character averaging `|W|⁻¹ Σ_w tr(w | S^d)`.
pub fn invariant_dimensions(g: &ReflGroup, space: Space, max: u32) -> Result<Vec<usize>> {
    let n = g.rank();
    let mut out = Vec::new();
    for d in 0..=max {
        let monos = monomials_of_degree(n, d);
        let vars = space_vars(n, space);
        let mut tr = Cyclotomic::zero(g.conductor());
        for w in 0..g.order() {
            for m in &monos {
                let img = act_poly(
                    g,
                    w,
                    &MultiPoly::monomial(&vars, *m, Cyclotomic::one(g.conductor())),
                    space,
                )?;
                tr += &img.coeff(m);
            }
        }
        let avg = tr.scale(&Rational::new(1, g.order() as i64));
        let k = avg
            .as_rational()
            .and_then(|q| q.to_i64())
            .ok_or_else(|| Error::Invariant("non-integral invariant count".into()))?;
        out.push(k as usize);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
