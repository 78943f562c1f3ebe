//! Completions of `H_{t,c}(W, h)` at a point `b ∈ h`, realized at finite
//! truncation order, and the matrix model `C(W, W_b, Ĥ_{t,c'}(W_b, h)_0)`
//! with the isomorphism `θ` between them.
//!
//! Everything here is exact: completions are replaced by quotients by
//! `m(b)^k · H` (resp. `n(0)^k · H`), and series are cut off at an x-degree
//! high enough that the discarded tail already lies in that ideal.

mod factor;
mod main_theorem;
mod psi;

pub use factor::{factor_tensor, FactoredElement, SplitCoordinates};
pub use main_theorem::{main_theorem_check, MainTheoremReport};
pub use psi::{express_in_invariants, psi_automorphism, PsiMap};

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::linalg::SpanBasis;
use crate::exact::{Cyclotomic, IdealBasis, Mono, MultiPoly};
use crate::invariants::{fundamental_invariants, Space};
use crate::rca::{Cherednik, Key, PBWElement, Param, TPoly};
use crate::refl::{parabolic_classes, stabilizer, ReflGroup};

/// The ideal `m(b)^k · K[h]`, with `m(b)` generated by `F_i(x) − F_i(b)` for
/// fundamental invariants `F_i` of the group.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub group: Arc<ReflGroup>,
    pub point: Vec<Cyclotomic>,
    pub order: u32,
    pub ideal: IdealBasis,
    /// `F_i(x) − F_i(b)`.
    pub generators: Vec<MultiPoly>,
}

impl Truncation {
    pub fn new(
        group: &Arc<ReflGroup>,
        point: &[Cyclotomic],
        order: u32,
        vars: &Arc<Vec<String>>,
    ) -> Result<Truncation> {
        if point.len() != group.rank() {
            return Err(Error::Arity(format!(
                "base point has {} coordinates",
                point.len()
            )));
        }
        let inv = fundamental_invariants(group, Space::H)?;
        let generators: Vec<MultiPoly> = inv
            .gens
            .iter()
            .map(|f| {
                let f = f.with_vars(vars);
                let v = f.evaluate(point)?;
                let mut g = f.clone();
                g.add_term(Mono::one(), -&v);
                Ok(g)
            })
            .collect::<Result<_>>()?;
        let ideal = IdealBasis::new(IdealBasis::power_generators(&generators, order))?;
        Ok(Truncation {
            group: group.clone(),
            point: point.to_vec(),
            order,
            ideal,
            generators,
        })
    }

    pub fn reduce_poly(&self, p: &MultiPoly) -> MultiPoly {
        self.ideal.normal_form(p)
    }

    /// Normal form of the x-leg of every PBW word.
    pub fn reduce(&self, e: &PBWElement) -> PBWElement {
        let alg = e.algebra().clone();
        let mut out = alg.zero();
        for (k, c) in e.terms() {
            for (m, d) in self.ideal.normal_form_monomial(&k.x).terms() {
                out.add_term(Key::new(*m, k.w as usize, k.y), &c.scale(d));
            }
        }
        out
    }
}

/// An element of `H / m(b)^k · H` in canonical form.
#[derive(Debug, Clone)]
pub struct TruncatedElement {
    pub truncation: Arc<Truncation>,
    pub payload: PBWElement,
}

impl TruncatedElement {
    pub fn is_zero(&self) -> bool {
        self.payload.is_zero()
    }
}

/// Reduces `a` modulo `m(b)^k · H`.
pub fn truncate(a: &PBWElement, b: &[Cyclotomic], k: u32) -> Result<TruncatedElement> {
    let alg = a.algebra();
    let tr = Arc::new(Truncation::new(alg.group(), b, k, alg.x_vars())?);
    let payload = tr.reduce(a);
    Ok(TruncatedElement {
        truncation: tr,
        payload,
    })
}

/// A point of `h` whose stabilizer is exactly the subgroup `members`.
pub fn base_point_for(g: &ReflGroup, members: &[usize]) -> Result<Vec<Cyclotomic>> {
    let mut want = members.to_vec();
    want.sort();
    want.dedup();
    for class in &parabolic_classes(g)?.classes {
        let rep = &class.representative;
        if !class.conjugates.contains(&want) {
            continue;
        }
        for u in 0..g.order() {
            let mut conj: Vec<usize> = rep.members.iter().map(|&h| g.conjugate(u, h)).collect();
            conj.sort();
            if conj == want {
                let b = g.act_h(u, &rep.point_b);
                debug_assert_eq!(stabilizer(g, &b)?.members, want);
                return Ok(b);
            }
        }
    }
    Err(Error::Invalid(
        "member set is not a parabolic subgroup".into(),
    ))
}

/// Sign in front of the Dunkl-type term of `θ(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThetaSign {
    /// `+2c_s/(1 − λ_s)` as printed in the isomorphism's formula.
    Printed,
    /// The opposite sign.
    Flipped,
}

/// Factory for the matrix model at a point `b` with stabilizer `W_b`.
pub struct Centralizer {
    pub group: Arc<ReflGroup>,
    /// `W_b` acting on all of `h`; its element `h` is `embedding[h]` in `W`.
    pub sub: Arc<ReflGroup>,
    pub embedding: Vec<usize>,
    /// Right coset representatives `w_i` of `W_b \ W`, by increasing index.
    pub cosets: Vec<usize>,
    pub point: Vec<Cyclotomic>,
    pub order: u32,
    /// x-degree at which the geometric series are cut.
    pub series_order: u32,
    pub sign: ThetaSign,
    pub big: Arc<Cherednik>,
    pub small: Arc<Cherednik>,
    truncations: RwLock<HashMap<u32, Arc<Truncation>>>,
    /// `sub_of[w]` = index in `sub` of `w ∈ W`, when `w ∈ W_b`.
    sub_of: HashMap<usize, usize>,
}

impl std::fmt::Debug for Centralizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "C({}, W_b of order {}, order {})",
            self.group.name(),
            self.sub.order(),
            self.order
        )
    }
}

/// An `r × r` matrix over `H_{t,c'}(W_b, h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralizerMatrix {
    pub entries: Vec<Vec<PBWElement>>,
}

impl CentralizerMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn zero(alg: &Arc<Cherednik>, r: usize) -> Self {
        CentralizerMatrix {
            entries: vec![vec![alg.zero(); r]; r],
        }
    }

    pub fn identity(alg: &Arc<Cherednik>, r: usize) -> Self {
        let mut m = Self::zero(alg, r);
        for i in 0..r {
            m.entries[i][i] = alg.one();
        }
        m
    }

    /// Matrix unit `E_ij` times `a`.
    pub fn unit(alg: &Arc<Cherednik>, r: usize, i: usize, j: usize, a: PBWElement) -> Self {
        let mut m = Self::zero(alg, r);
        m.entries[i][j] = a;
        m
    }

    pub fn mul(&self, o: &CentralizerMatrix) -> CentralizerMatrix {
        let r = self.size();
        let alg = self.entries[0][0].algebra().clone();
        let mut out = Self::zero(&alg, r);
        for i in 0..r {
            for k in 0..r {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..r {
                    if o.entries[k][j].is_zero() {
                        continue;
                    }
                    out.entries[i][j] =
                        &out.entries[i][j] + &(&self.entries[i][k] * &o.entries[k][j]);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &CentralizerMatrix) -> CentralizerMatrix {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &CentralizerMatrix) -> CentralizerMatrix {
        self.zip(o, |a, b| a - b)
    }

    fn zip(
        &self,
        o: &CentralizerMatrix,
        f: impl Fn(&PBWElement, &PBWElement) -> PBWElement,
    ) -> Self {
        CentralizerMatrix {
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| f(a, b)).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &TPoly) -> CentralizerMatrix {
        self.map(|e| e.scale_t(c))
    }

    pub fn map(&self, f: impl Fn(&PBWElement) -> PBWElement) -> CentralizerMatrix {
        CentralizerMatrix {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    /// Scalar matrix check: zero off the diagonal, equal diagonal entries.
    pub fn is_scalar(&self) -> bool {
        let r = self.size();
        (0..r).all(|i| {
            (0..r).all(|j| {
                if i == j {
                    self.entries[i][i] == self.entries[0][0]
                } else {
                    self.entries[i][j].is_zero()
                }
            })
        })
    }

    /// First nonzero entry, for reports.
    pub fn first_nonzero(&self) -> Option<String> {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    return Some(format!("({}, {}): {}", i, j, e));
                }
            }
        }
        None
    }
}

/// Generators of `H_{t,c}(W, h)` fed to `θ`.
#[derive(Debug, Clone)]
pub enum ThetaGen {
    Group(usize),
    /// `x_α` for `α ∈ h*` in x-coordinates.
    X(Vec<Cyclotomic>),
    /// `y_a` for `a ∈ h` in y-coordinates.
    Y(Vec<Cyclotomic>),
}

/// Builds the factory for `W_b` (a parabolic member set) at truncation order `k`.
pub fn build_centralizer(
    g: &Arc<ReflGroup>,
    c: &Param,
    members: &[usize],
    k: u32,
    sign: ThetaSign,
) -> Result<Centralizer> {
    if k < 1 {
        return Err(Error::Invalid("truncation order must be at least 1".into()));
    }
    let b = base_point_for(g, members)?;
    Centralizer::at_point(g, c, &b, k, sign)
}

impl Centralizer {
    pub fn at_point(
        g: &Arc<ReflGroup>,
        c: &Param,
        b: &[Cyclotomic],
        k: u32,
        sign: ThetaSign,
    ) -> Result<Centralizer> {
        if k < 1 {
            return Err(Error::Invalid("truncation order must be at least 1".into()));
        }
        let st = stabilizer(g, b)?;
        let sub = Arc::new(g.subgroup(&st.members, "W_b")?);
        let embedding = sub.embedding().expect("subgroup embedding").to_vec();
        let sub_of: HashMap<usize, usize> =
            embedding.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        for r in g.reflections() {
            if !sub_of.contains_key(&r.elem) && crate::refl::dot(&r.alpha, b).is_zero() {
                return Err(Error::Invalid("a reflection outside W_b fixes b".into()));
            }
        }
        // c' = restriction of c to the reflections of W_b
        let vals: Vec<Cyclotomic> = sub
            .reflection_classes()
            .iter()
            .map(|cls| {
                c.value(
                    g.reflection_of(embedding[cls[0]])
                        .expect("a reflection")
                        .cls,
                )
                .clone()
            })
            .collect();
        let cprime = Param::from_values(&sub, vals)?;
        let big = Cherednik::new(g.clone(), c.clone())?;
        let small = Cherednik::new(sub.clone(), cprime)?;
        let mut cosets: Vec<usize> = Vec::new();
        for w in 0..g.order() {
            let new = cosets
                .iter()
                .all(|&v| !sub_of.contains_key(&g.mul(w, g.inv(v))));
            if new {
                cosets.push(w);
            }
        }
        // (x)^N ⊂ n(0)^k once N ≥ k (1 + top coinvariant degree of W_b)
        let top: u32 = fundamental_invariants(&sub, Space::H)?
            .degrees
            .iter()
            .map(|d| d - 1)
            .sum();
        Ok(Centralizer {
            group: g.clone(),
            embedding,
            cosets,
            point: b.to_vec(),
            order: k,
            series_order: k * (top + 1),
            sign,
            big,
            small,
            sub,
            truncations: RwLock::new(HashMap::new()),
            sub_of,
        })
    }

    pub fn size(&self) -> usize {
        self.cosets.len()
    }

    /// `n(0)^j · K[h]` for `W_b`, cached.
    pub fn truncation(&self, j: u32) -> Arc<Truncation> {
        if let Some(t) = self.truncations.read().unwrap().get(&j) {
            return t.clone();
        }
        let zero = vec![Cyclotomic::zero(self.group.conductor()); self.group.rank()];
        let t = Arc::new(
            Truncation::new(&self.sub, &zero, j, self.small.x_vars()).expect("invariants of W_b"),
        );
        self.truncations.write().unwrap().insert(j, t.clone());
        t
    }

    pub fn reduce(&self, m: &CentralizerMatrix, j: u32) -> CentralizerMatrix {
        let t = self.truncation(j);
        m.map(|e| t.reduce(e))
    }

    /// `(j, h)` with `w_i u = h w_j`, `h ∈ W_b` given by its index in `sub`.
    pub fn coset_move(&self, i: usize, u: usize) -> (usize, usize) {
        let g = &self.group;
        let wu = g.mul(self.cosets[i], u);
        for (j, &wj) in self.cosets.iter().enumerate() {
            if let Some(&h) = self.sub_of.get(&g.mul(wu, g.inv(wj))) {
                return (j, h);
            }
        }
        unreachable!("cosets cover the group")
    }

    fn identity(&self) -> CentralizerMatrix {
        CentralizerMatrix::identity(&self.small, self.size())
    }

    /// `θ(u)`: `(θ(u) f)(w) = f(wu)`.
    pub fn theta_group(&self, u: usize) -> CentralizerMatrix {
        let r = self.size();
        let mut m = CentralizerMatrix::zero(&self.small, r);
        for i in 0..r {
            let (j, h) = self.coset_move(i, u);
            m.entries[i][j] = self.small.group_element(h);
        }
        m
    }

    /// The affine substitution `x_α ↦ x_{w_i α} + (w_i α)(b)` on x-polynomials.
    pub fn substitution(&self, i: usize) -> Vec<MultiPoly> {
        let g = &self.group;
        let n = g.rank();
        let vars = self.small.x_vars();
        let cond = g.conductor();
        (0..n)
            .map(|l| {
                let mut e = vec![Cyclotomic::zero(cond); n];
                e[l] = Cyclotomic::one(cond);
                let we = g.act_hstar(self.cosets[i], &e);
                let mut p = MultiPoly::linear(vars, cond, &we);
                p.add_term(Mono::one(), crate::refl::dot(&we, &self.point));
                p
            })
            .collect()
    }

    /// `θ` of an x-polynomial: diagonal with the substituted polynomials.
    pub fn theta_x_poly(&self, p: &MultiPoly) -> CentralizerMatrix {
        let r = self.size();
        let vars = self.small.x_vars();
        let p = p.with_vars(vars);
        let mut m = CentralizerMatrix::zero(&self.small, r);
        for i in 0..r {
            let q = p.compose(&self.substitution(i)).expect("same arity");
            m.entries[i][i] = self.small.from_x_poly(&q);
        }
        m
    }

    /// `1 / (x_α + a)` cut at x-degree `series_order`.
    fn inverse_series(&self, alpha: &[Cyclotomic], a: &Cyclotomic) -> PBWElement {
        let x = self.small.x_linear(alpha);
        let inv = a.inv().expect("nonzero by the stratum condition");
        let mut term = self.small.scalar(inv.clone());
        let mut out = self.small.zero();
        let step = x.scale(&-&inv);
        for _ in 0..self.series_order {
            out = &out + &term;
            term = &term * &step;
        }
        out
    }

    /// `θ(y_a)`.
    pub fn theta_y(&self, a: &[Cyclotomic]) -> CentralizerMatrix {
        let g = &self.group;
        let r = self.size();
        let cond = g.conductor();
        let mut m = CentralizerMatrix::zero(&self.small, r);
        let sign = match self.sign {
            ThetaSign::Printed => Cyclotomic::one(cond),
            ThetaSign::Flipped => -&Cyclotomic::one(cond),
        };
        for i in 0..r {
            let wa = g.act_h(self.cosets[i], a);
            m.entries[i][i] = &m.entries[i][i] + &self.small.y_linear(&wa);
            for refl in g.reflections() {
                if self.sub_of.contains_key(&refl.elem) {
                    continue;
                }
                let cs = self.big.param().value(refl.cls);
                if cs.is_zero() {
                    continue;
                }
                let pair = crate::refl::dot(&refl.alpha, &wa);
                if pair.is_zero() {
                    continue;
                }
                let one_minus = &Cyclotomic::one(cond) - &refl.lambda;
                let coef = &(&(&sign * &Cyclotomic::from_int(cond, 2)) * cs)
                    .checked_div(&one_minus)
                    .expect("λ ≠ 1")
                    * &pair;
                let series = self
                    .inverse_series(&refl.alpha, &crate::refl::dot(&refl.alpha, &self.point))
                    .scale(&coef);
                // f(s w_i) = h f(w_j)
                let (j, h) = self.coset_move_left(refl.elem, i);
                let hs = &series * &self.small.group_element(h);
                m.entries[i][j] = &m.entries[i][j] + &hs;
                m.entries[i][i] = &m.entries[i][i] - &series;
            }
        }
        m
    }

    /// `(j, h)` with `s w_i = h w_j`.
    fn coset_move_left(&self, s: usize, i: usize) -> (usize, usize) {
        let g = &self.group;
        let sw = g.mul(s, self.cosets[i]);
        for (j, &wj) in self.cosets.iter().enumerate() {
            if let Some(&h) = self.sub_of.get(&g.mul(sw, g.inv(wj))) {
                return (j, h);
            }
        }
        unreachable!("cosets cover the group")
    }

    /// `θ` on a generator, entries reduced modulo `n(0)^k`.
    pub fn be_theta(&self, gen: &ThetaGen) -> CentralizerMatrix {
        let m = match gen {
            ThetaGen::Group(u) => self.theta_group(*u),
            ThetaGen::X(alpha) => {
                let p = MultiPoly::linear(self.small.x_vars(), self.group.conductor(), alpha);
                self.theta_x_poly(&p)
            }
            ThetaGen::Y(a) => self.theta_y(a),
        };
        self.reduce(&m, self.order)
    }

    fn basis_vec(&self, l: usize) -> Vec<Cyclotomic> {
        let cond = self.group.conductor();
        let mut e = vec![Cyclotomic::zero(cond); self.group.rank()];
        e[l] = Cyclotomic::one(cond);
        e
    }

    /// `θ` of an arbitrary element of `H_{t,c}(W, h)`, word by word, reducing
    /// after every factor.
    pub fn theta(&self, e: &PBWElement) -> CentralizerMatrix {
        let n = self.group.rank();
        let xs: Vec<CentralizerMatrix> = (0..n)
            .map(|l| self.be_theta(&ThetaGen::X(self.basis_vec(l))))
            .collect();
        let ys: Vec<CentralizerMatrix> = (0..n)
            .map(|l| self.be_theta(&ThetaGen::Y(self.basis_vec(l))))
            .collect();
        let mut out = CentralizerMatrix::zero(&self.small, self.size());
        for (key, coeff) in e.terms() {
            let mut m = self.identity();
            for (l, x) in xs.iter().enumerate() {
                for _ in 0..key.x.0[l] {
                    m = self.reduce(&m.mul(x), self.order);
                }
            }
            m = m.mul(&self.theta_group(key.w as usize));
            for (l, y) in ys.iter().enumerate() {
                for _ in 0..key.y.0[l] {
                    m = self.reduce(&m.mul(y), self.order);
                }
            }
            out = out.add(&m.scale(coeff));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub relation: String,
    pub order: u32,
    /// `"0"` or the first nonzero entry.
    pub residual_norm: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaReport {
    pub group: String,
    pub order: u32,
    pub checked_at: u32,
    pub sign: ThetaSign,
    pub cosets: Vec<String>,
    pub rows: Vec<ResidualRow>,
}

impl ThetaReport {
    pub fn all_zero(&self) -> bool {
        self.rows.iter().all(|r| r.residual_norm == "0")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!(
            "θ residuals for {} at order {} (checked modulo n(0)^{}), cosets {}\n\n| relation | residual |\n|---|---|\n",
            self.group,
            self.order,
            self.checked_at,
            self.cosets.join(", ")
        );
        for r in &self.rows {
            s.push_str(&format!("| {} | {} |\n", r.relation, r.residual_norm));
        }
        s
    }
}

/// Images under `θ` of every defining relation of `H_{t,c}(W, h)`, reduced
/// modulo `n(0)^{k−1}`: one order is lost when a y-series multiplies a
/// truncated factor.
pub fn verify_theta(cz: &Centralizer) -> ThetaReport {
    verify_theta_at(cz, cz.order.saturating_sub(1))
}

/// Residuals reduced modulo `n(0)^at`.
pub fn verify_theta_at(cz: &Centralizer, at: u32) -> ThetaReport {
    let g = &cz.group;
    let n = g.rank();
    let xs: Vec<CentralizerMatrix> = (0..n)
        .map(|l| cz.be_theta(&ThetaGen::X(cz.basis_vec(l))))
        .collect();
    let ys: Vec<CentralizerMatrix> = (0..n)
        .map(|l| cz.be_theta(&ThetaGen::Y(cz.basis_vec(l))))
        .collect();
    let (xs, ys) = (&xs, &ys);
    let big = &cz.big;
    let xname = |l: usize| big.x_vars()[l].clone();
    let yname = |l: usize| big.y_vars()[l].clone();
    let mut jobs: Vec<(
        String,
        Box<dyn Fn() -> CentralizerMatrix + Sync + Send + '_>,
    )> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&xs[i], &xs[j]);
            jobs.push((
                format!("[{}, {}]", xname(i), xname(j)),
                Box::new(move || a.mul(b).sub(&b.mul(a))),
            ));
            let (a, b) = (&ys[i], &ys[j]);
            jobs.push((
                format!("[{}, {}]", yname(i), yname(j)),
                Box::new(move || a.mul(b).sub(&b.mul(a))),
            ));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let (y, x) = (&ys[i], &xs[j]);
            jobs.push((
                format!("[{}, {}]", yname(i), xname(j)),
                Box::new(move || {
                    let rhs = big.y(i).commutator(&big.x(j)).expect("same algebra");
                    y.mul(x).sub(&x.mul(y)).sub(&cz.theta(&rhs))
                }),
            ));
        }
    }
    for &s in g.generators() {
        for l in 0..n {
            let e = cz.basis_vec(l);
            jobs.push((
                format!("{} {} {}⁻¹", g.label(s), xname(l), g.label(s)),
                Box::new(move || {
                    let ts = cz.theta_group(s);
                    let moved = cz.be_theta(&ThetaGen::X(g.act_hstar(s, &e)));
                    ts.mul(&xs[l]).sub(&moved.mul(&ts))
                }),
            ));
            let e = cz.basis_vec(l);
            jobs.push((
                format!("{} {} {}⁻¹", g.label(s), yname(l), g.label(s)),
                Box::new(move || {
                    let ts = cz.theta_group(s);
                    let moved = cz.be_theta(&ThetaGen::Y(g.act_h(s, &e)));
                    ts.mul(&ys[l]).sub(&moved.mul(&ts))
                }),
            ));
        }
        jobs.push((
            format!("group law at {}", g.label(s)),
            Box::new(move || {
                (0..g.order())
                    .map(|w| {
                        cz.theta_group(s)
                            .mul(&cz.theta_group(w))
                            .sub(&cz.theta_group(g.mul(s, w)))
                    })
                    .find(|d| !d.is_zero())
                    .unwrap_or_else(|| CentralizerMatrix::zero(&cz.small, cz.size()))
            }),
        ));
    }
    let results: Vec<String> = crate::par::map(&jobs, |(_, f)| {
        let r = cz.reduce(&f(), at);
        r.first_nonzero().unwrap_or_else(|| "0".to_string())
    });
    ThetaReport {
        group: g.name().to_string(),
        order: cz.order,
        checked_at: at,
        sign: cz.sign,
        cosets: cz.cosets.iter().map(|&w| g.label(w)).collect(),
        rows: jobs
            .iter()
            .zip(results)
            .map(|((name, _), residual)| ResidualRow {
                relation: name.clone(),
                order: at,
                residual_norm: residual,
            })
            .collect(),
    }
}

const STANDARD_DEGREE_BOUND: u32 = 256;

/// Coordinates of matrices whose entries have no y-part, on the basis
/// `(i, j, standard x-monomial, h)`.
fn flatten(
    m: &CentralizerMatrix,
    index: &mut BTreeMap<(usize, usize, Key), usize>,
) -> Vec<(usize, Cyclotomic)> {
    let mut out = Vec::new();
    for (i, row) in m.entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            for (k, c) in e.terms() {
                let c = c.at_zero();
                if c.is_zero() {
                    continue;
                }
                let n = index.len();
                let idx = *index.entry((i, j, *k)).or_insert(n);
                out.push((idx, c));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct QuoisoReport {
    pub j: u32,
    pub k: u32,
    /// Every generator of `m(b)^j` lands in `n(0)^j` on every coset.
    pub forward: bool,
    /// Every `E_ab · p · h` with `p` a generator of `n(0)^j` is hit modulo order `k`.
    pub backward: bool,
    pub spanning_set: usize,
    pub targets: usize,
}

impl QuoisoReport {
    pub fn holds(&self) -> bool {
        self.forward && self.backward
    }
}

/// `θ(m(b)^j · H) = C(W, W_b, n(0)^j · H')` modulo order `k`, on the x-part.
/// The y-part follows by multiplying on the right.
pub fn quoiso_check(cz: &Centralizer, j: u32) -> Result<QuoisoReport> {
    let k = cz.order;
    if j > k {
        return Err(Error::Invalid(format!(
            "j = {j} exceeds the truncation order {k}"
        )));
    }
    let r = cz.size();
    let cond = cz.group.conductor();
    let vars = cz.small.x_vars().clone();
    let big_tr = Truncation::new(&cz.group, &cz.point, 1, &vars)?;
    let gens_m = if j == 0 {
        vec![MultiPoly::one(&vars, cond)]
    } else {
        IdealBasis::power_generators(&big_tr.generators, j)
    };
    // forward: φ_i(g) ∈ n(0)^j exactly
    let tj = cz.truncation(j.max(1));
    let forward = j == 0
        || gens_m.iter().all(|g| {
            (0..r).all(|i| {
                let q = g.compose(&cz.substitution(i)).expect("same arity");
                tj.reduce_poly(&q).is_zero()
            })
        });
    // backward: span of θ(g x^a w), reduced at order k
    let tk = cz.truncation(k);
    let mut index = BTreeMap::new();
    let mut vectors: Vec<Vec<(usize, Cyclotomic)>> = Vec::new();
    // g·x^a ≡ g·NF(x^a) modulo m(b)^k, so standard monomials suffice
    let monos = Truncation::new(&cz.group, &cz.point, k, &vars)?
        .ideal
        .standard_monomials(STANDARD_DEGREE_BOUND)?;
    for g in &gens_m {
        for a in &monos {
            let ga = g.mul(&MultiPoly::monomial(&vars, *a, Cyclotomic::one(cond)));
            let diag = cz.reduce(&cz.theta_x_poly(&ga), k);
            if diag.is_zero() {
                continue;
            }
            for w in 0..cz.group.order() {
                let m = cz.reduce(&diag.mul(&cz.theta_group(w)), k);
                vectors.push(flatten(&m, &mut index));
            }
        }
    }
    let sub_inv = fundamental_invariants(&cz.sub, Space::H)?;
    let ps: Vec<MultiPoly> = sub_inv.gens.iter().map(|p| p.with_vars(&vars)).collect();
    let gens_n = if j == 0 {
        vec![MultiPoly::one(&vars, cond)]
    } else {
        IdealBasis::power_generators(&ps, j)
    };
    let mut targets = Vec::new();
    for p in &gens_n {
        let pr = tk.reduce_poly(p);
        for a in 0..r {
            for b in 0..r {
                for h in 0..cz.sub.order() {
                    let e = &cz.small.from_x_poly(&pr) * &cz.small.group_element(h);
                    let m = CentralizerMatrix::unit(&cz.small, r, a, b, e);
                    targets.push(flatten(&m, &mut index));
                }
            }
        }
    }
    let dim = index.len();
    let dense = |v: &[(usize, Cyclotomic)]| {
        let mut out = vec![Cyclotomic::zero(cond); dim];
        for (i, c) in v {
            out[*i] = c.clone();
        }
        out
    };
    let mut span = SpanBasis::new(cond, dim);
    for v in &vectors {
        span.insert(&dense(v));
    }
    let backward = targets.iter().all(|t| span.contains(&dense(t)));
    Ok(QuoisoReport {
        j,
        k,
        forward,
        backward,
        spanning_set: vectors.len(),
        targets: targets.len(),
    })
}
