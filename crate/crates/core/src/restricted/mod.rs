//! The restricted algebra `H̄ = H_{0,c} / ⟨K[h]^W_+, K[h*]^W_+⟩`, its centre,
//! baby Verma modules, Calogero–Moser families and finite quotients.
//!
//! Positive-degree invariants on either side are central at `t = 0`, so the
//! ideal they generate is spanned by PBW words whose x-part or y-part lies in
//! the respective coinvariant ideal. Reducing both legs independently is
//! therefore the whole quotient map.

mod quotient;
mod verma;

pub use quotient::{
    is_poisson_point, point_quotient, rank_one_presentation, FiniteQuotient, PointChi, Presentation,
};
pub use verma::{
    baby_verma, central_character, cm_families, cm_families_with, BabyVerma, BlockPartition,
};

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::exact::linalg::SpanBasis;
use crate::exact::{Cyclotomic, Matrix, Mono};
use crate::invariants::{coinvariant_basis, CoinvariantBasis, Space};
use crate::rca::{Cherednik, Key, PBWElement, Param, TMode};
use crate::refl::ReflGroup;

/// Largest `|W|³` for which the centre is computed.
pub const CENTRE_GUARD: usize = 1728;

pub type Sparse = Vec<(usize, Cyclotomic)>;

pub struct RestrictedAlgebra {
    alg: Arc<Cherednik>,
    cx: CoinvariantBasis,
    cy: CoinvariantBasis,
    basis: Vec<Key>,
    order: usize,
    products: RwLock<HashMap<(usize, usize), Arc<Sparse>>>,
    verma: verma::VermaCache,
}

impl std::fmt::Debug for RestrictedAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hbar({:?}, dim {})", self.alg, self.basis.len())
    }
}

pub fn restricted_algebra(group: Arc<ReflGroup>, param: Param) -> Result<RestrictedAlgebra> {
    RestrictedAlgebra::new(group, param)
}

impl RestrictedAlgebra {
    pub fn new(group: Arc<ReflGroup>, param: Param) -> Result<Self> {
        let cx = coinvariant_basis(&group, Space::H)?;
        let cy = coinvariant_basis(&group, Space::HStar)?;
        let order = group.order();
        let alg = Cherednik::with_options(group, param, TMode::Zero, None)?;
        let mut basis = Vec::with_capacity(cx.len() * order * cy.len());
        for a in &cx.monomials {
            for w in 0..order {
                for b in &cy.monomials {
                    basis.push(Key::new(*a, w, *b));
                }
            }
        }
        Ok(RestrictedAlgebra {
            alg,
            cx,
            cy,
            basis,
            order,
            products: RwLock::new(HashMap::new()),
            verma: Default::default(),
        })
    }

    pub fn algebra(&self) -> &Arc<Cherednik> {
        &self.alg
    }

    pub fn group(&self) -> &Arc<ReflGroup> {
        self.alg.group()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Key] {
        &self.basis
    }

    pub fn x_coinvariants(&self) -> &CoinvariantBasis {
        &self.cx
    }

    pub fn y_coinvariants(&self) -> &CoinvariantBasis {
        &self.cy
    }

    fn conductor(&self) -> u32 {
        self.alg.conductor()
    }

    pub fn zero_vec(&self) -> Vec<Cyclotomic> {
        vec![Cyclotomic::zero(self.conductor()); self.dim()]
    }

    pub fn index(&self, xi: usize, w: usize, yi: usize) -> usize {
        (xi * self.order + w) * self.cy.len() + yi
    }

    pub fn unit(&self) -> Vec<Cyclotomic> {
        let mut v = self.zero_vec();
        v[self.index(0, 0, 0)] = Cyclotomic::one(self.conductor());
        v
    }

    /// Coordinates of the normal form of `x^a` in the x-coinvariant basis.
    pub fn reduce_x(&self, a: &Mono) -> Vec<(usize, Cyclotomic)> {
        self.cx
            .ideal
            .normal_form_monomial(a)
            .terms()
            .iter()
            .map(|(m, c)| (self.cx.index_of(m).expect("standard monomial"), c.clone()))
            .collect()
    }

    pub fn reduce_y(&self, b: &Mono) -> Vec<(usize, Cyclotomic)> {
        self.cy
            .ideal
            .normal_form_monomial(b)
            .terms()
            .iter()
            .map(|(m, c)| (self.cy.index_of(m).expect("standard monomial"), c.clone()))
            .collect()
    }

    fn reduce_key_into(&self, k: &Key, c: &Cyclotomic, acc: &mut HashMap<usize, Cyclotomic>) {
        if c.is_zero() {
            return;
        }
        let xs = self.reduce_x(&k.x);
        if xs.is_empty() {
            return;
        }
        let ys = self.reduce_y(&k.y);
        for (xi, xc) in &xs {
            let f = xc * c;
            for (yi, yc) in &ys {
                let idx = self.index(*xi, k.w as usize, *yi);
                let v = &f * yc;
                match acc.get_mut(&idx) {
                    Some(e) => *e += &v,
                    None => {
                        acc.insert(idx, v);
                    }
                }
            }
        }
    }

    fn sparse(acc: HashMap<usize, Cyclotomic>) -> Sparse {
        let mut v: Sparse = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    /// Image of an element of `H_{0,c}` (coefficients taken at `t = 0`).
    pub fn reduce_sparse(&self, e: &PBWElement) -> Sparse {
        let mut acc = HashMap::new();
        for (k, c) in e.terms() {
            self.reduce_key_into(k, &c.at_zero(), &mut acc);
        }
        Self::sparse(acc)
    }

    pub fn reduce(&self, e: &PBWElement) -> Vec<Cyclotomic> {
        self.densify(&self.reduce_sparse(e))
    }

    pub fn densify(&self, s: &Sparse) -> Vec<Cyclotomic> {
        let mut v = self.zero_vec();
        for (i, c) in s {
            v[*i] = c.clone();
        }
        v
    }

    /// Lift to `H_{0,c}` as a combination of basis words.
    pub fn lift(&self, v: &[Cyclotomic]) -> PBWElement {
        let mut e = self.alg.zero();
        for (k, c) in self.basis.iter().zip(v) {
            if !c.is_zero() {
                e.add_term(*k, &crate::rca::TPoly::constant(c.clone()));
            }
        }
        e
    }

    /// `e_i · e_j`, memoized.
    pub fn mul_basis(&self, i: usize, j: usize) -> Arc<Sparse> {
        if let Some(v) = self.products.read().unwrap().get(&(i, j)) {
            return v.clone();
        }
        let mut acc = HashMap::new();
        for (k, c) in self.alg.key_product(&self.basis[i], &self.basis[j]) {
            self.reduce_key_into(&k, &c.at_zero(), &mut acc);
        }
        let out = Arc::new(Self::sparse(acc));
        self.products.write().unwrap().insert((i, j), out.clone());
        out
    }

    pub fn mul(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let mut out = self.zero_vec();
        let sa: Vec<(usize, &Cyclotomic)> =
            a.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let sb: Vec<(usize, &Cyclotomic)> =
            b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, ca) in &sa {
            for (j, cb) in &sb {
                let f = *ca * *cb;
                for (k, c) in self.mul_basis(*i, *j).iter() {
                    out[*k] += &(&f * c);
                }
            }
        }
        out
    }

    /// Sparse image of `g · e_k` (or `e_k · g`) for a PBW element `g`.
    fn gen_product(&self, g: &PBWElement, k: usize, left: bool) -> Sparse {
        let mut acc = HashMap::new();
        for (gk, gc) in g.terms() {
            let gc = gc.at_zero();
            let prod = if left {
                self.alg.key_product(gk, &self.basis[k])
            } else {
                self.alg.key_product(&self.basis[k], gk)
            };
            for (key, c) in prod {
                self.reduce_key_into(&key, &(&c.at_zero() * &gc), &mut acc);
            }
        }
        Self::sparse(acc)
    }

    /// `w e_k w⁻¹` in coordinates.
    fn conjugate_basis(&self, w: usize, k: usize) -> Sparse {
        let g = self.group();
        let key = &self.basis[k];
        let v = g.conjugate(w, key.w as usize);
        let mut acc = HashMap::new();
        for (xm, xc) in self.alg.act_x_mono(w, &key.x).iter() {
            for (ym, yc) in self.alg.act_y_mono(w, &key.y).iter() {
                self.reduce_key_into(&Key::new(*xm, v, *ym), &(xc * yc), &mut acc);
            }
        }
        Self::sparse(acc)
    }

    /// Dimension of the conjugation-invariant subspace, from characters:
    /// `|W|⁻¹ Σ_w χ_x(w) · |C_W(w)| · χ_y(w)`.
    pub fn invariant_dimension(&self) -> Result<usize> {
        let g = self.group();
        let mut acc = Cyclotomic::zero(self.conductor());
        for w in 0..g.order() {
            let mut tx = Cyclotomic::zero(self.conductor());
            for (i, m) in self.cx.monomials.iter().enumerate() {
                for (mm, c) in self.alg.act_x_mono(w, m).iter() {
                    for (j, d) in self.reduce_x(mm) {
                        if j == i {
                            tx += &(c * &d);
                        }
                    }
                }
            }
            let mut ty = Cyclotomic::zero(self.conductor());
            for (i, m) in self.cy.monomials.iter().enumerate() {
                for (mm, c) in self.alg.act_y_mono(w, m).iter() {
                    for (j, d) in self.reduce_y(mm) {
                        if j == i {
                            ty += &(c * &d);
                        }
                    }
                }
            }
            let cent = (0..g.order()).filter(|&v| g.conjugate(w, v) == v).count();
            acc += &(&tx * &ty).scale(&crate::exact::Rational::from_int(cent as i64));
        }
        let q = acc.scale(&crate::exact::Rational::new(1, g.order() as i64));
        q.as_rational()
            .and_then(|r| r.to_i64())
            .map(|k| k as usize)
            .ok_or_else(|| Error::Invariant("non-integral invariant dimension".into()))
    }

    /// Basis of the conjugation invariants, by averaging basis words until the
    /// character count is reached.
    pub fn conjugation_invariants(&self) -> Result<Vec<Vec<Cyclotomic>>> {
        let target = self.invariant_dimension()?;
        let g = self.group();
        let mut span = SpanBasis::new(self.conductor(), self.dim());
        for k in 0..self.dim() {
            if span.rank() == target {
                break;
            }
            let mut acc = HashMap::new();
            for w in 0..g.order() {
                for (i, c) in self.conjugate_basis(w, k) {
                    match acc.get_mut(&i) {
                        Some(e) => *e += &c,
                        None => {
                            acc.insert(i, c);
                        }
                    }
                }
            }
            let v = self.densify(&Self::sparse(acc));
            span.insert(&v);
        }
        if span.rank() != target {
            return Err(Error::Invariant(format!(
                "found {} conjugation invariants, expected {target}",
                span.rank()
            )));
        }
        Ok(span.basis())
    }

    /// Basis of the centre: conjugation invariants killed by `ad x_i` and `ad y_i`.
    pub fn centre_basis(&self) -> Result<Vec<Vec<Cyclotomic>>> {
        if self.dim() > CENTRE_GUARD {
            return Err(Error::Budget(format!(
                "restricted algebra of dimension {} exceeds the centre guard {CENTRE_GUARD}",
                self.dim()
            )));
        }
        let inv = self.conjugation_invariants()?;
        let n = self.alg.rank();
        let gens: Vec<PBWElement> = (0..n)
            .map(|i| self.alg.x(i))
            .chain((0..n).map(|i| self.alg.y(i)))
            .collect();
        let support: Vec<usize> = (0..self.dim())
            .filter(|&k| inv.iter().any(|v| !v[k].is_zero()))
            .collect();
        let mut rows: Vec<Vec<Cyclotomic>> = Vec::new();
        for g in &gens {
            let ad: Vec<(usize, Sparse)> = crate::par::map(&support, |&k| {
                let mut acc: HashMap<usize, Cyclotomic> = HashMap::new();
                for (i, c) in self.gen_product(g, k, true) {
                    acc.insert(i, c);
                }
                for (i, c) in self.gen_product(g, k, false) {
                    match acc.get_mut(&i) {
                        Some(e) => *e -= &c,
                        None => {
                            acc.insert(i, -&c);
                        }
                    }
                }
                (k, Self::sparse(acc))
            });
            let mut block = vec![vec![Cyclotomic::zero(self.conductor()); inv.len()]; self.dim()];
            for (j, v) in inv.iter().enumerate() {
                for (k, col) in &ad {
                    if v[*k].is_zero() {
                        continue;
                    }
                    for (i, c) in col {
                        block[*i][j] += &(c * &v[*k]);
                    }
                }
            }
            rows.extend(block.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())));
        }
        let m = Matrix::with_conductor(rows, inv.len(), self.conductor());
        let null = if m.nrows() == 0 {
            (0..inv.len())
                .map(|j| {
                    let mut e = vec![Cyclotomic::zero(self.conductor()); inv.len()];
                    e[j] = Cyclotomic::one(self.conductor());
                    e
                })
                .collect()
        } else {
            m.nullspace()
        };
        let mut out = Vec::new();
        for coeffs in null {
            let mut v = self.zero_vec();
            for (cj, basis) in coeffs.iter().zip(&inv) {
                if cj.is_zero() {
                    continue;
                }
                for (vi, bi) in v.iter_mut().zip(basis) {
                    if !bi.is_zero() {
                        *vi += &(cj * bi);
                    }
                }
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Centre as the commutant of the whole basis; quadratic in the dimension,
    /// meant for cross-checks on small algebras.
    pub fn centre_brute_force(&self) -> Result<Vec<Vec<Cyclotomic>>> {
        let d = self.dim();
        if d > 64 {
            return Err(Error::Budget(
                "brute-force commutant limited to dimension 64".into(),
            ));
        }
        let mut rows = Vec::new();
        for j in 0..d {
            let mut block = vec![vec![Cyclotomic::zero(self.conductor()); d]; d];
            for k in 0..d {
                for (i, c) in self.mul_basis(k, j).iter() {
                    block[*i][k] += c;
                }
                for (i, c) in self.mul_basis(j, k).iter() {
                    block[*i][k] -= c;
                }
            }
            rows.extend(block);
        }
        Ok(Matrix::with_conductor(rows, d, self.conductor()).nullspace())
    }

    pub fn is_central(&self, v: &[Cyclotomic]) -> bool {
        let n = self.alg.rank();
        let mut gens: Vec<PBWElement> = (0..n).map(|i| self.alg.x(i)).collect();
        gens.extend((0..n).map(|i| self.alg.y(i)));
        gens.extend(
            self.group()
                .generators()
                .iter()
                .map(|&s| self.alg.group_element(s)),
        );
        gens.iter().all(|g| {
            let gv = self.reduce(g);
            let a = self.mul(&gv, v);
            let b = self.mul(v, &gv);
            a == b
        })
    }
}

#[cfg(test)]
mod tests;
