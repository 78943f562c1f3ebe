//! PBW normal forms for `H_{t,c}(W, h)`.
//!
//! Elements are finite sums `coeff · x^a · w · y^b` with `coeff ∈ K[t]`. The
//! defining relations used by the engine are
//!
//! ```text
//! [x, x'] = 0,   [y, y'] = 0,   w x w⁻¹ = w·x,   w y w⁻¹ = w·y,
//! [x, y]  = t (y, x) − Σ_s c(s) (y, α_s)(α_s^∨, x) s.
//! ```
//!
//! Moving `y` past a polynomial uses the derivation form of the last relation,
//! `[y, f] = −t ∂_y f + Σ_s c(s) (y, α_s) · 2/(1 − λ_s) · (f − s·f)/α_s · s`,
//! which specialises to it on linear `f` because `s·x = x − (1 − λ_s)/2 (α_s^∨, x) α_s`.

mod euler;
mod grammar;
mod tpoly;

pub use euler::{find_central, find_euler, poisson_bracket, CentralSet};
pub use tpoly::TPoly;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::exact::{Cyclotomic, Mono, MultiPoly};
use crate::refl::ReflGroup;

/// The parameter function `c`, one value per conjugacy class of reflections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    values: Vec<Cyclotomic>,
    labels: Vec<String>,
    conductor: u32,
}

impl Param {
    pub fn zero(g: &ReflGroup) -> Param {
        Param::uniform(g, Cyclotomic::zero(g.conductor()))
    }

    pub fn uniform(g: &ReflGroup, c: Cyclotomic) -> Param {
        let k = g.reflection_classes().len();
        Param {
            values: vec![c; k],
            labels: (0..k).map(|i| g.reflection_class_label(i)).collect(),
            conductor: g.conductor(),
        }
    }

    pub fn from_values(g: &ReflGroup, values: Vec<Cyclotomic>) -> Result<Param> {
        if values.len() != g.reflection_classes().len() {
            return Err(Error::Arity(format!(
                "{} parameter values for {} reflection classes",
                values.len(),
                g.reflection_classes().len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.conductor() != g.conductor()) {
            return Err(Error::ConductorMismatch(v.conductor(), g.conductor()));
        }
        Ok(Param {
            labels: (0..values.len())
                .map(|i| g.reflection_class_label(i))
                .collect(),
            values,
            conductor: g.conductor(),
        })
    }

    /// Builds from `(class label, value)` pairs; every class must be given.
    pub fn from_labels(g: &ReflGroup, pairs: &[(String, Cyclotomic)]) -> Result<Param> {
        let k = g.reflection_classes().len();
        let mut values: Vec<Option<Cyclotomic>> = vec![None; k];
        for (label, v) in pairs {
            let cls = g.reflection_class_by_label(label).ok_or_else(|| {
                Error::Invalid(format!(
                    "no reflection class labelled {label:?} in {}",
                    g.name()
                ))
            })?;
            values[cls] = Some(v.clone());
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::Invalid(format!(
                        "missing parameter for reflection class {:?}",
                        g.reflection_class_label(i)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Param::from_values(g, values)
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn value(&self, cls: usize) -> &Cyclotomic {
        &self.values[cls]
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn scale(&self, nu: &Cyclotomic) -> Param {
        Param {
            values: self.values.iter().map(|v| v * nu).collect(),
            ..self.clone()
        }
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.labels
            .iter()
            .zip(&self.values)
            .map(|(l, v)| (l.clone(), v.to_string()))
            .collect()
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.values)
            .map(|(l, v)| format!("c[{l}]={v}"))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Whether `t` is kept as a variable or set to zero during straightening.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TMode {
    Generic,
    /// Drops every `t` contribution; products land directly in `H_{0,c}`.
    Zero,
}

/// A PBW basis word `x^a · w · y^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub x: Mono,
    pub w: u32,
    pub y: Mono,
}

impl Key {
    pub fn new(x: Mono, w: usize, y: Mono) -> Key {
        Key { x, w: w as u32, y }
    }

    pub fn x_degree(&self) -> u32 {
        self.x.degree()
    }

    pub fn y_degree(&self) -> u32 {
        self.y.degree()
    }
}

pub type Lin = Arc<Vec<(Mono, Cyclotomic)>>;
type Straight = Arc<Vec<(Key, TPoly)>>;

struct ReflData {
    elem: usize,
    /// `c(s) (y_i, α_s) · 2/(1 − λ_s)` for each i.
    k: Vec<Cyclotomic>,
    alpha: MultiPoly,
}

/// The algebra `H_{t,c}(W, h)` together with its straightening caches.
pub struct Cherednik {
    group: Arc<ReflGroup>,
    param: Param,
    t_factor: Cyclotomic,
    mode: TMode,
    xvars: Arc<Vec<String>>,
    yvars: Arc<Vec<String>>,
    refl: Vec<ReflData>,
    yx: RwLock<HashMap<(Mono, Mono), Straight>>,
    act_x: RwLock<HashMap<(usize, Mono), Lin>>,
    act_y: RwLock<HashMap<(usize, Mono), Lin>>,
    delta: RwLock<HashMap<(usize, Mono), Lin>>,
}

impl fmt::Debug for Cherednik {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "H({}; {}; {:?})",
            self.group.name(),
            self.param,
            self.mode
        )
    }
}

pub(crate) fn var_names(prefix: &str, n: usize) -> Arc<Vec<String>> {
    if n == 1 {
        Arc::new(vec![prefix.to_string()])
    } else {
        MultiPoly::names(prefix, n)
    }
}

impl Cherednik {
    pub fn new(group: Arc<ReflGroup>, param: Param) -> Result<Arc<Cherednik>> {
        Cherednik::with_options(group, param, TMode::Generic, None)
    }

    /// `t_factor` rescales the `t` term of the relation (default 1).
    pub fn with_options(
        group: Arc<ReflGroup>,
        param: Param,
        mode: TMode,
        t_factor: Option<Cyclotomic>,
    ) -> Result<Arc<Cherednik>> {
        let cond = group.conductor();
        if param.conductor() != cond || param.values().len() != group.reflection_classes().len() {
            return Err(Error::Mismatch(format!(
                "parameter {param} does not belong to {}",
                group.name()
            )));
        }
        let n = group.rank();
        let xvars = var_names("x", n);
        let yvars = var_names("y", n);
        let mut refl = Vec::new();
        for r in group.reflections() {
            let c = param.value(r.cls);
            if c.is_zero() {
                continue;
            }
            let scale = (&Cyclotomic::one(cond) - &r.lambda)
                .inv()?
                .scale(&crate::exact::Rational::from_int(2));
            let k = r.alpha.iter().map(|a| &(c * a) * &scale).collect();
            refl.push(ReflData {
                elem: r.elem,
                k,
                alpha: MultiPoly::linear(&xvars, cond, &r.alpha),
            });
        }
        Ok(Arc::new(Cherednik {
            t_factor: t_factor.unwrap_or_else(|| Cyclotomic::one(cond)),
            group,
            param,
            mode,
            xvars,
            yvars,
            refl,
            yx: RwLock::new(HashMap::new()),
            act_x: RwLock::new(HashMap::new()),
            act_y: RwLock::new(HashMap::new()),
            delta: RwLock::new(HashMap::new()),
        }))
    }

    pub fn group(&self) -> &Arc<ReflGroup> {
        &self.group
    }

    pub fn param(&self) -> &Param {
        &self.param
    }

    pub fn mode(&self) -> TMode {
        self.mode
    }

    pub fn t_factor(&self) -> &Cyclotomic {
        &self.t_factor
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn conductor(&self) -> u32 {
        self.group.conductor()
    }

    pub fn x_vars(&self) -> &Arc<Vec<String>> {
        &self.xvars
    }

    pub fn y_vars(&self) -> &Arc<Vec<String>> {
        &self.yvars
    }

    /// Same group and parameter (possibly a different cache instance).
    pub fn compatible(&self, o: &Cherednik) -> bool {
        std::ptr::eq(self, o)
            || (Arc::ptr_eq(&self.group, &o.group)
                && self.param == o.param
                && self.mode == o.mode
                && self.t_factor == o.t_factor)
    }

    fn one_c(&self) -> Cyclotomic {
        Cyclotomic::one(self.conductor())
    }

    // ---- elements ----

    pub fn zero(self: &Arc<Self>) -> PBWElement {
        PBWElement {
            alg: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn term(self: &Arc<Self>, key: Key, coeff: TPoly) -> PBWElement {
        let mut e = self.zero();
        if !coeff.is_zero() {
            e.terms.insert(key, coeff);
        }
        e
    }

    pub fn scalar(self: &Arc<Self>, c: Cyclotomic) -> PBWElement {
        self.term(Key::new(Mono::one(), 0, Mono::one()), TPoly::constant(c))
    }

    pub fn one(self: &Arc<Self>) -> PBWElement {
        self.scalar(self.one_c())
    }

    pub fn t(self: &Arc<Self>) -> PBWElement {
        self.term(
            Key::new(Mono::one(), 0, Mono::one()),
            TPoly::t(self.conductor()),
        )
    }

    pub fn x(self: &Arc<Self>, i: usize) -> PBWElement {
        self.term(
            Key::new(Mono::var(i), 0, Mono::one()),
            TPoly::constant(self.one_c()),
        )
    }

    pub fn y(self: &Arc<Self>, i: usize) -> PBWElement {
        self.term(
            Key::new(Mono::one(), 0, Mono::var(i)),
            TPoly::constant(self.one_c()),
        )
    }

    pub fn group_element(self: &Arc<Self>, w: usize) -> PBWElement {
        self.term(
            Key::new(Mono::one(), w, Mono::one()),
            TPoly::constant(self.one_c()),
        )
    }

    /// Linear form `Σ v_i x_i`.
    pub fn x_linear(self: &Arc<Self>, v: &[Cyclotomic]) -> PBWElement {
        let mut e = self.zero();
        for (i, c) in v.iter().enumerate() {
            e.add_term(
                Key::new(Mono::var(i), 0, Mono::one()),
                &TPoly::constant(c.clone()),
            );
        }
        e
    }

    /// Vector `Σ v_i y_i ∈ h`.
    pub fn y_linear(self: &Arc<Self>, v: &[Cyclotomic]) -> PBWElement {
        let mut e = self.zero();
        for (i, c) in v.iter().enumerate() {
            e.add_term(
                Key::new(Mono::one(), 0, Mono::var(i)),
                &TPoly::constant(c.clone()),
            );
        }
        e
    }

    /// Embeds a polynomial in the x-variables.
    pub fn from_x_poly(self: &Arc<Self>, p: &MultiPoly) -> PBWElement {
        let mut e = self.zero();
        for (m, c) in p.terms() {
            e.add_term(Key::new(*m, 0, Mono::one()), &TPoly::constant(c.clone()));
        }
        e
    }

    /// Embeds a polynomial in the y-variables.
    pub fn from_y_poly(self: &Arc<Self>, p: &MultiPoly) -> PBWElement {
        let mut e = self.zero();
        for (m, c) in p.terms() {
            e.add_term(Key::new(Mono::one(), 0, *m), &TPoly::constant(c.clone()));
        }
        e
    }

    /// Generators used for centrality tests: x_i, y_i and the group generators.
    pub fn generators(self: &Arc<Self>) -> Vec<PBWElement> {
        let n = self.rank();
        let mut out: Vec<PBWElement> = (0..n).map(|i| self.x(i)).collect();
        out.extend((0..n).map(|i| self.y(i)));
        out.extend(
            self.group
                .generators()
                .iter()
                .map(|&g| self.group_element(g)),
        );
        out
    }

    // ---- straightening ----

    fn lin_poly(map: &MultiPoly) -> Lin {
        Arc::new(map.terms().iter().map(|(m, c)| (*m, c.clone())).collect())
    }

    /// `w · x^a` as a polynomial in x.
    pub fn act_x_mono(&self, w: usize, a: &Mono) -> Lin {
        if w == 0 || a.degree() == 0 {
            return Arc::new(vec![(*a, self.one_c())]);
        }
        if let Some(v) = self.act_x.read().unwrap().get(&(w, *a)) {
            return v.clone();
        }
        let d = self.group.dual_matrix(w);
        let images: Vec<MultiPoly> = (0..self.rank())
            .map(|j| MultiPoly::linear(&self.xvars, self.conductor(), &d.column(j)))
            .collect();
        let p = MultiPoly::monomial(&self.xvars, *a, self.one_c())
            .compose(&images)
            .expect("same arity");
        let out = Self::lin_poly(&p);
        self.act_x.write().unwrap().insert((w, *a), out.clone());
        out
    }

    /// `w · y^b` as a polynomial in y.
    pub fn act_y_mono(&self, w: usize, b: &Mono) -> Lin {
        if w == 0 || b.degree() == 0 {
            return Arc::new(vec![(*b, self.one_c())]);
        }
        if let Some(v) = self.act_y.read().unwrap().get(&(w, *b)) {
            return v.clone();
        }
        let m = self.group.matrix(w);
        let images: Vec<MultiPoly> = (0..self.rank())
            .map(|j| MultiPoly::linear(&self.yvars, self.conductor(), &m.column(j)))
            .collect();
        let p = MultiPoly::monomial(&self.yvars, *b, self.one_c())
            .compose(&images)
            .expect("same arity");
        let out = Self::lin_poly(&p);
        self.act_y.write().unwrap().insert((w, *b), out.clone());
        out
    }

    /// Divided difference `(x^a − s·x^a)/α_s` for the r-th active reflection.
    fn delta_mono(&self, r: usize, a: &Mono) -> Lin {
        if let Some(v) = self.delta.read().unwrap().get(&(r, *a)) {
            return v.clone();
        }
        let data = &self.refl[r];
        let f = MultiPoly::monomial(&self.xvars, *a, self.one_c());
        let mut sf = MultiPoly::zero(&self.xvars, self.conductor());
        for (m, c) in self.act_x_mono(data.elem, a).iter() {
            sf.add_term(*m, c.clone());
        }
        let q = f
            .sub(&sf)
            .div_exact(&data.alpha)
            .expect("divided differences are exact");
        let out = Self::lin_poly(&q);
        self.delta.write().unwrap().insert((r, *a), out.clone());
        out
    }

    /// Normal form of `y^b · x^a`.
    pub(crate) fn straighten(&self, b: &Mono, a: &Mono) -> Straight {
        if b.degree() == 0 || a.degree() == 0 {
            return Arc::new(vec![(Key::new(*a, 0, *b), TPoly::constant(self.one_c()))]);
        }
        if let Some(v) = self.yx.read().unwrap().get(&(*b, *a)) {
            return v.clone();
        }
        let n = self.rank();
        let i = (0..n).find(|&i| b.0[i] > 0).unwrap();
        let mut bp = *b;
        bp.0[i] -= 1;
        let yi = Mono::var(i);
        let mut acc: HashMap<Key, TPoly> = HashMap::new();
        // y^{b'} x^a y_i
        for (k, c) in self.straighten(&bp, a).iter() {
            add_into(
                &mut acc,
                Key {
                    y: k.y.mul(&yi),
                    ..*k
                },
                c,
            );
        }
        // −t ∂_i(x^a)
        if self.mode == TMode::Generic && a.0[i] > 0 {
            let mut am = *a;
            am.0[i] -= 1;
            let s = -&self
                .t_factor
                .scale(&crate::exact::Rational::from_int(a.0[i] as i64));
            for (k, c) in self.straighten(&bp, &am).iter() {
                add_into(&mut acc, *k, &c.shift().scale(&s));
            }
        }
        // Σ_s k_s Δ_s(x^a) s
        for (r, data) in self.refl.iter().enumerate() {
            let ks = &data.k[i];
            if ks.is_zero() {
                continue;
            }
            let s = data.elem;
            let sinv = self.group.inv(s);
            for (m, dm) in self.delta_mono(r, a).iter() {
                let f = ks * dm;
                for (k, c) in self.straighten(&bp, m).iter() {
                    let w = self.group.mul(k.w as usize, s);
                    for (ym, yc) in self.act_y_mono(sinv, &k.y).iter() {
                        add_into(&mut acc, Key::new(k.x, w, *ym), &c.scale(&(&f * yc)));
                    }
                }
            }
        }
        let out: Straight = Arc::new(finish(acc).into_iter().collect());
        self.yx.write().unwrap().insert((*b, *a), out.clone());
        out
    }

    /// Accumulates `coef · (x^a w y^b)(x^c v y^d)` into `acc`.
    fn mul_keys(&self, k1: &Key, k2: &Key, coef: &TPoly, acc: &mut HashMap<Key, TPoly>) {
        let w = k1.w as usize;
        let v = k2.w as usize;
        let vinv = self.group.inv(v);
        for (k, c) in self.straighten(&k1.y, &k2.x).iter() {
            let c = coef.mul(c);
            let g = self.group.mul(self.group.mul(w, k.w as usize), v);
            let xs = self.act_x_mono(w, &k.x);
            let ys = self.act_y_mono(vinv, &k.y);
            for (xm, xc) in xs.iter() {
                let xk = k1.x.mul(xm);
                for (ym, yc) in ys.iter() {
                    add_into(acc, Key::new(xk, g, ym.mul(&k2.y)), &c.scale(&(xc * yc)));
                }
            }
        }
    }

    /// Normal form of the product of two basis words.
    pub fn key_product(&self, k1: &Key, k2: &Key) -> Vec<(Key, TPoly)> {
        let mut acc = HashMap::new();
        self.mul_keys(k1, k2, &TPoly::constant(self.one_c()), &mut acc);
        finish(acc).into_iter().collect()
    }

    pub fn cache_sizes(&self) -> (usize, usize, usize) {
        (
            self.yx.read().unwrap().len(),
            self.act_x.read().unwrap().len() + self.act_y.read().unwrap().len(),
            self.delta.read().unwrap().len(),
        )
    }
}

fn add_into(acc: &mut HashMap<Key, TPoly>, k: Key, c: &TPoly) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&k) {
        Some(e) => e.add_assign(c),
        None => {
            acc.insert(k, c.clone());
        }
    }
}

fn finish(acc: HashMap<Key, TPoly>) -> BTreeMap<Key, TPoly> {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// An element of `H_{t,c}` in PBW normal form.
#[derive(Clone)]
pub struct PBWElement {
    alg: Arc<Cherednik>,
    terms: BTreeMap<Key, TPoly>,
}

impl PartialEq for PBWElement {
    fn eq(&self, o: &Self) -> bool {
        self.alg.compatible(&o.alg) && self.terms == o.terms
    }
}

impl Eq for PBWElement {}

impl PBWElement {
    pub fn algebra(&self) -> &Arc<Cherednik> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Key, TPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &Key) -> TPoly {
        self.terms
            .get(k)
            .cloned()
            .unwrap_or_else(|| TPoly::zero(self.alg.conductor()))
    }

    pub fn add_term(&mut self, k: Key, c: &TPoly) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&k) {
            Some(e) => {
                e.add_assign(c);
                e.is_zero()
            }
            None => {
                self.terms.insert(k, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&k);
        }
    }

    fn check(&self, o: &PBWElement) -> Result<()> {
        if self.alg.compatible(&o.alg) {
            Ok(())
        } else {
            Err(Error::Mismatch(format!("{:?} vs {:?}", self.alg, o.alg)))
        }
    }

    pub fn checked_add(&self, o: &PBWElement) -> Result<PBWElement> {
        self.check(o)?;
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, o: &PBWElement) -> Result<PBWElement> {
        self.checked_add(&o.neg())
    }

    pub fn neg(&self) -> PBWElement {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, s: &Cyclotomic) -> PBWElement {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn scale_t(&self, p: &TPoly) -> PBWElement {
        self.map_coeffs(|c| c.mul(p))
    }

    fn map_coeffs(&self, f: impl Fn(&TPoly) -> TPoly) -> PBWElement {
        PBWElement {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Normal form of the product.
    pub fn mul(&self, o: &PBWElement) -> Result<PBWElement> {
        self.check(o)?;
        let mut acc = HashMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                self.alg.mul_keys(k1, k2, &c1.mul(c2), &mut acc);
            }
        }
        Ok(PBWElement {
            alg: self.alg.clone(),
            terms: finish(acc),
        })
    }

    pub fn pow(&self, e: u32) -> PBWElement {
        let mut acc = self.alg.one();
        for _ in 0..e {
            acc = acc.mul(self).expect("same algebra");
        }
        acc
    }

    /// `AB − BA`.
    pub fn commutator(&self, o: &PBWElement) -> Result<PBWElement> {
        self.mul(o)?.checked_sub(&o.mul(self)?)
    }

    /// Sets `t = 0`.
    pub fn at_t_zero(&self) -> PBWElement {
        self.map_coeffs(|c| TPoly::from_coeffs(c.conductor(), vec![c.at_zero()]))
    }

    /// Exact division by `t`; fails if some coefficient has a constant term.
    pub fn div_t(&self) -> Result<PBWElement> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(*k, c.div_t()?);
        }
        Ok(PBWElement {
            alg: self.alg.clone(),
            terms,
        })
    }

    /// True iff `self` commutes with every x_i, y_i and group generator
    /// (modulo `t` when `at_t_zero`). Generators suffice: the commutant of a
    /// generating set is the commutant of the algebra it generates.
    pub fn is_central(&self, at_t_zero: bool) -> bool {
        self.alg.generators().iter().all(|g| {
            let c = self.commutator(g).expect("same algebra");
            if at_t_zero {
                c.at_t_zero().is_zero()
            } else {
                c.is_zero()
            }
        })
    }

    /// `deg x − deg y` if every term has the same value.
    pub fn grading(&self) -> Option<i64> {
        let mut it = self
            .terms
            .keys()
            .map(|k| k.x_degree() as i64 - k.y_degree() as i64);
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_x_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.x_degree()).max().unwrap_or(0)
    }

    pub fn max_y_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.y_degree()).max().unwrap_or(0)
    }

    /// Maximal t-degree among the coefficients.
    pub fn t_degree(&self) -> usize {
        self.terms
            .values()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0)
    }

    /// Conjugation `w · self · w⁻¹`.
    pub fn conjugate_by(&self, w: usize) -> PBWElement {
        let g = self.alg.group_element(w);
        let gi = self.alg.group_element(self.alg.group.inv(w));
        g.mul(self).and_then(|e| e.mul(&gi)).expect("same algebra")
    }
}

impl fmt::Debug for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl std::ops::$tr<&PBWElement> for &PBWElement {
            type Output = PBWElement;
            /// Panics when the operands live in different algebras.
            fn $m(self, o: &PBWElement) -> PBWElement {
                self.$call(o).expect("operands from the same algebra")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for &PBWElement {
    type Output = PBWElement;
    fn neg(self) -> PBWElement {
        PBWElement::neg(self)
    }
}

#[cfg(test)]
mod tests;
