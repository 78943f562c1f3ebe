//! Desk-scale evidence for `H_{c,χ} ≅ Mat_r(H_{c',ψ})` at a rank-one
//! parabolic: dimension, induced characters and central scalars.

use std::sync::Arc;

use serde::Serialize;

use super::factor::SplitCoordinates;
use super::{
    build_centralizer, verify_theta, Centralizer, CentralizerMatrix, ThetaReport, ThetaSign,
};
use crate::error::{Error, Result};
use crate::exact::linalg::SpanBasis;
use crate::exact::{Cyclotomic, Matrix, MultiPoly};
use crate::invariants::{fundamental_invariants, Space};
use crate::rca::Param;
use crate::refl::{induce_character, ClassFunction, ReflGroup};
use crate::restricted::{
    is_poisson_point, point_quotient, rank_one_presentation, restricted_algebra, FiniteQuotient,
    PointChi,
};

#[derive(Debug, Clone, Serialize)]
pub struct SimpleRow {
    pub label: String,
    /// Value of the generator of `W_b` on the simple module.
    pub eigenvalue: String,
    pub induced_degree: String,
    /// Induced character by class, from the coset model.
    pub model_character: Vec<String>,
    /// Same, from the induction formula.
    pub oracle_character: Vec<String>,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralRow {
    pub element: String,
    pub scalar: bool,
    /// The common diagonal entry commutes with `H(W_b, h)` at `t = 0`.
    pub central_entry: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MainTheoremReport {
    pub group: String,
    pub sub_order: usize,
    pub members: Vec<String>,
    pub cosets: Vec<String>,
    pub matrix_size: usize,
    pub c_prime: Vec<String>,
    pub psi: PointChi,
    pub cuspidal: bool,
    pub quotient_dim: usize,
    pub quotient: serde_json::Value,
    pub predicted_dim: usize,
    pub simples: Vec<SimpleRow>,
    pub central: Vec<CentralRow>,
    /// `θ` relation residuals one order down.
    pub residuals: ThetaReport,
    pub order: u32,
}

impl MainTheoremReport {
    pub fn consistent(&self) -> bool {
        self.cuspidal
            && self.simples.iter().all(|s| s.agree)
            && self.central.iter().all(|c| c.scalar && c.central_entry)
            && self.residuals.all_zero()
    }
}

/// `W_b` restricted to `t` as the standard cyclic group, with element maps.
struct CyclicModel {
    group: Arc<ReflGroup>,
    param: Param,
    /// `to_cyc[h]` for `h` an element of `W_b`.
    to_cyc: Vec<usize>,
}

fn cyclic_model(cz: &Centralizer) -> Result<CyclicModel> {
    let split = SplitCoordinates::new(&cz.small, &cz.point)?;
    let inner = split
        .inner
        .as_ref()
        .ok_or_else(|| Error::Invalid("W_b is trivial".into()))?;
    let tg = inner.group();
    if tg.rank() != 1 {
        return Err(Error::Unsupported(format!(
            "cuspidal data is available for rank-one parabolics only, not rank {}",
            tg.rank()
        )));
    }
    let cyc = Arc::new(ReflGroup::cyclic(tg.order() as u32, tg.conductor())?);
    let to_cyc: Vec<usize> = (0..tg.order())
        .map(|h| {
            cyc.index_of(tg.matrix(h))
                .ok_or_else(|| Error::Invariant("W_b on t is not the standard cyclic group".into()))
        })
        .collect::<Result<_>>()?;
    let mut from_cyc = vec![0; cyc.order()];
    for (h, &z) in to_cyc.iter().enumerate() {
        from_cyc[z] = h;
    }
    let vals: Vec<Cyclotomic> = cyc
        .reflection_classes()
        .iter()
        .map(|cls| {
            let h = from_cyc[cls[0]];
            let r = tg.reflection_of(h).expect("reflections correspond");
            inner.param().value(r.cls).clone()
        })
        .collect();
    let param = Param::from_values(&cyc, vals)?;
    Ok(CyclicModel {
        group: cyc,
        param,
        to_cyc,
    })
}

/// Eigenvalues of `s` on the one-dimensional simples of `q`, requiring
/// `q / rad q` to be commutative with simple `s`-spectrum.
fn simple_characters(
    q: &FiniteQuotient,
    s: &[Cyclotomic],
    order: usize,
) -> Result<Vec<Cyclotomic>> {
    let n = q.dim();
    let cond = s.first().map(|c| c.conductor()).unwrap_or(1);
    let mut rad = SpanBasis::new(cond, n);
    for v in q.radical() {
        rad.insert(&v);
    }
    let pivots = rad.pivots();
    let keep: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let basis = |i: usize| {
        let mut v = vec![Cyclotomic::zero(cond); n];
        v[i] = Cyclotomic::one(cond);
        v
    };
    let proj = |v: &[Cyclotomic]| -> Vec<Cyclotomic> {
        let r = rad.reduce(v);
        keep.iter().map(|&i| r[i].clone()).collect()
    };
    for &a in &keep {
        for &b in &keep {
            if proj(&q.mul(&basis(a), &basis(b))) != proj(&q.mul(&basis(b), &basis(a))) {
                return Err(Error::Unsupported(
                    "semisimple part of the cuspidal algebra is not commutative".into(),
                ));
            }
        }
    }
    let m = keep.len();
    let rows: Vec<Vec<Cyclotomic>> = {
        let cols: Vec<Vec<Cyclotomic>> = keep.iter().map(|&b| proj(&q.mul(s, &basis(b)))).collect();
        (0..m)
            .map(|i| (0..m).map(|j| cols[j][i].clone()).collect())
            .collect()
    };
    let ls = Matrix::with_conductor(rows, m, cond);
    let mut out = Vec::new();
    let mut total = 0;
    for j in 0..order as i64 {
        let eps = Cyclotomic::root_of_unity(cond, order as u32, j)?;
        let shifted = ls.sub(&Matrix::identity(cond, m).scale(&eps));
        let mult = shifted.nullspace().len();
        if mult > 1 {
            return Err(Error::Unsupported(
                "several simples share an eigenvalue of the generator of W_b".into(),
            ));
        }
        if mult == 1 {
            out.push(eps);
        }
        total += mult;
    }
    if total != m {
        return Err(Error::Invariant(
            "generator of W_b is not diagonalizable on the semisimple part".into(),
        ));
    }
    Ok(out)
}

/// Evidence triple for the rank-one parabolic `members` of `g` at the point
/// `ψ` of the rank-one centre (default `0`), with `θ` checks at order `k`.
pub fn main_theorem_check(
    g: &Arc<ReflGroup>,
    c: &Param,
    members: &[usize],
    psi: Option<Vec<Cyclotomic>>,
    k: u32,
) -> Result<MainTheoremReport> {
    let cz = build_centralizer(g, c, members, k, ThetaSign::Flipped)?;
    let cond = g.conductor();
    let model = cyclic_model(&cz)?;
    let pres = rank_one_presentation(&model.group, &model.param)?;
    let psi = PointChi::new(
        &pres,
        psi.unwrap_or_else(|| vec![Cyclotomic::zero(cond); pres.generators.len()]),
    )?;
    let cuspidal = is_poisson_point(&pres, &psi)?;
    if !cuspidal {
        return Err(Error::Invalid(
            "ψ is not a zero-dimensional leaf of the rank-one Calogero–Moser space".into(),
        ));
    }
    let h = restricted_algebra(model.group.clone(), model.param.clone())?;
    let q = point_quotient(&h, &pres, &psi)?;
    let d = q.dim();
    let r = cz.size();

    // simples of H_{c',ψ} and their induced characters
    let gen_sub = (0..cz.sub.order())
        .find(|&x| model.to_cyc[x] == model.group.generators()[0])
        .expect("generator is in the image");
    let s_image = q.image(&h, &h.algebra().group_element(model.group.generators()[0]));
    let eigen = simple_characters(&q, &s_image, cz.sub.order())?;
    let mut simples = Vec::new();
    for eps in eigen {
        // χ_M(gen^j) = ε^j
        let mut power = vec![usize::MAX; cz.sub.order()];
        let mut x = 0;
        for j in 0..cz.sub.order() {
            power[x] = j;
            x = cz.sub.mul(x, gen_sub);
        }
        let chi = ClassFunction::from_elements(&cz.sub, |x| eps.pow(power[x] as u32))?;
        let oracle = induce_character(g, &cz.sub, &chi)?;
        let model_char = ClassFunction::from_elements(g, |u| {
            let mut acc = Cyclotomic::zero(cond);
            for i in 0..r {
                let (j, hh) = cz.coset_move(i, u);
                if i == j {
                    acc += chi.at(&cz.sub, hh);
                }
            }
            acc
        })?;
        let label = if eps.is_one() {
            "triv".to_string()
        } else if (&eps + &Cyclotomic::one(cond)).is_zero() {
            "sign".to_string()
        } else {
            format!("ε = {eps}")
        };
        simples.push(SimpleRow {
            label,
            eigenvalue: eps.to_string(),
            induced_degree: model_char.degree().to_string(),
            model_character: model_char.values.iter().map(|v| v.to_string()).collect(),
            oracle_character: oracle.values.iter().map(|v| v.to_string()).collect(),
            agree: model_char == oracle,
        });
    }

    let central = central_scalars(&cz)?;
    let residuals = verify_theta(&cz);
    Ok(MainTheoremReport {
        group: g.name().to_string(),
        sub_order: cz.sub.order(),
        members: cz.embedding.iter().map(|&w| g.label(w)).collect(),
        cosets: cz.cosets.iter().map(|&w| g.label(w)).collect(),
        matrix_size: r,
        c_prime: model.param.values().iter().map(|v| v.to_string()).collect(),
        psi,
        cuspidal,
        quotient_dim: d,
        quotient: q.summary(),
        predicted_dim: r * r * d,
        simples,
        central,
        residuals,
        order: k,
    })
}

/// `θ(F_i − F_i(b))` and `θ(G_i)` at `t = 0`, modulo `n(0)^k`.
fn central_scalars(cz: &Centralizer) -> Result<Vec<CentralRow>> {
    let big = &cz.big;
    let fx = fundamental_invariants(&cz.group, Space::H)?;
    let gy = fundamental_invariants(&cz.group, Space::HStar)?;
    let mut elems = Vec::new();
    for (i, f) in fx.gens.iter().enumerate() {
        let f = f.with_vars(big.x_vars());
        let mut g = f.clone();
        g.add_term(crate::exact::Mono::one(), -&f.evaluate(&cz.point)?);
        elems.push((format!("F{} − F{}(b)", i + 1, i + 1), big.from_x_poly(&g)));
    }
    for (i, p) in gy.gens.iter().enumerate() {
        let p: MultiPoly = p.with_vars(big.y_vars());
        elems.push((format!("G{}(y)", i + 1), big.from_y_poly(&p)));
    }
    let k = cz.order;
    let rows = crate::par::map(&elems, |(name, e)| {
        let m: CentralizerMatrix = cz.reduce(&cz.theta(e).map(|x| x.at_t_zero()), k);
        let scalar = m.is_scalar();
        let d = &m.entries[0][0];
        let central_entry = scalar
            && cz.small.generators().iter().all(|gen| {
                let comm = d.commutator(gen).expect("same algebra").at_t_zero();
                cz.truncation(k).reduce(&comm).is_zero()
            });
        CentralRow {
            element: name.clone(),
            scalar,
            central_entry,
        }
    });
    Ok(rows)
}
