//! `H(W_b, h) ≅ H(W_b, t) ⊗ D_t(s)` for `h = t ⊕ s`, `s = h^{W_b}` and
//! `t = (h*^{W_b})^⊥`, in coordinates adapted to the splitting.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{Cyclotomic, Matrix, Mono, MultiPoly, Rational};
use crate::rca::{Cherednik, Key, PBWElement, Param, TPoly};
use crate::refl::{stabilizer, ReflGroup};

/// Adapted coordinates: `Y_1..Y_r` span `t`, `Y_{r+1}..Y_n` span `s`, and
/// `X` is the dual basis.
#[derive(Debug)]
pub struct SplitCoordinates {
    /// `W_b` acting on `h`.
    pub sub: Arc<ReflGroup>,
    /// `H(W_b, h)`.
    pub full: Arc<Cherednik>,
    /// `H(W_b, t)`; `None` when `W_b` is trivial.
    pub inner: Option<Arc<Cherednik>>,
    pub rank_t: usize,
    /// Columns are the `Y` basis in old y-coordinates.
    pub basis: Matrix,
    pub inverse: Matrix,
}

/// A sum of `(X_t^a w Y_t^b) ⊗ (X_s^c Y_s^d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredElement {
    /// Keys of the `t`-part use `rank_t` variables; the `s`-part monomials
    /// use `n − rank_t`.
    pub terms: BTreeMap<(Key, Mono, Mono), TPoly>,
}

fn split_mono(m: &Mono, r: usize, n: usize) -> (Mono, Mono) {
    let a = Mono::from_slice(&m.0[..r]);
    let b = Mono::from_slice(&m.0[r..n]);
    (a, b)
}

fn join_mono(a: &Mono, b: &Mono, r: usize, n: usize) -> Mono {
    let mut e = vec![0u16; n];
    e[..r].copy_from_slice(&a.0[..r]);
    e[r..n].copy_from_slice(&b.0[..n - r]);
    Mono::from_slice(&e)
}

impl SplitCoordinates {
    /// Splitting for the algebra `full = H(W_b, h)` whose group fixes `b`.
    pub fn new(full: &Arc<Cherednik>, b: &[Cyclotomic]) -> Result<SplitCoordinates> {
        let sub = full.group().clone();
        let cond = sub.conductor();
        let n = sub.rank();
        let p = stabilizer(&sub, b)?;
        if p.members.len() != sub.order() {
            return Err(Error::Invalid(
                "the group does not fix the base point".into(),
            ));
        }
        let r = p.perp_space.len();
        let cols: Vec<&Vec<Cyclotomic>> = p.perp_space.iter().chain(&p.fixed_space).collect();
        if cols.len() != n {
            return Err(Error::Invariant("t ⊕ s does not span h".into()));
        }
        let rows: Vec<Vec<Cyclotomic>> = (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let basis = Matrix::with_conductor(rows, n, cond);
        let inverse = basis.inverse()?;
        let inner = if r == 0 {
            None
        } else {
            let images: Vec<Matrix> = sub
                .generators()
                .iter()
                .map(|&g| {
                    let m = inverse.mul(sub.matrix(g)).mul(&basis);
                    for i in 0..n {
                        for j in 0..n {
                            let off = (i < r) != (j < r);
                            if off && !m.get(i, j).is_zero() {
                                return Err(Error::Invariant("t and s are not W_b-stable".into()));
                            }
                        }
                    }
                    let block = (0..r)
                        .map(|i| (0..r).map(|j| m.get(i, j).clone()).collect())
                        .collect();
                    Ok(Matrix::with_conductor(block, r, cond))
                })
                .collect::<Result<_>>()?;
            let tg = Arc::new(sub.with_generator_images(&format!("{}|t", sub.name()), images)?);
            let vals = tg
                .reflection_classes()
                .iter()
                .map(|cls| {
                    let cls_full = sub
                        .reflection_of(cls[0])
                        .ok_or_else(|| Error::Invariant("reflection on t is not one on h".into()))?
                        .cls;
                    Ok(full.param().value(cls_full).clone())
                })
                .collect::<Result<Vec<_>>>()?;
            let param = Param::from_values(&tg, vals)?;
            Some(Cherednik::with_options(
                tg,
                param,
                full.mode(),
                Some(full.t_factor().clone()),
            )?)
        };
        Ok(SplitCoordinates {
            sub,
            full: full.clone(),
            inner,
            rank_t: r,
            basis,
            inverse,
        })
    }

    fn n(&self) -> usize {
        self.sub.rank()
    }

    fn new_vars(&self, p: &str) -> Arc<Vec<String>> {
        MultiPoly::names(p, self.n())
    }

    /// `x_i = Σ_j B[i][j] X_j` and `y_i = Σ_j B⁻¹[j][i] Y_j`.
    fn old_in_new(&self) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
        let n = self.n();
        let cond = self.sub.conductor();
        let (xv, yv) = (self.new_vars("X"), self.new_vars("Y"));
        let xs = (0..n)
            .map(|i| {
                MultiPoly::linear(
                    &xv,
                    cond,
                    &(0..n)
                        .map(|j| self.basis.get(i, j).clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let ys = (0..n)
            .map(|i| {
                MultiPoly::linear(
                    &yv,
                    cond,
                    &(0..n)
                        .map(|j| self.inverse.get(j, i).clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        (xs, ys)
    }

    /// `X_j = Σ_i B⁻¹[j][i] x_i` and `Y_j = Σ_i B[i][j] y_i`.
    fn new_in_old(&self) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
        let n = self.n();
        let cond = self.sub.conductor();
        let (xv, yv) = (self.full.x_vars(), self.full.y_vars());
        let xs = (0..n)
            .map(|j| {
                MultiPoly::linear(
                    xv,
                    cond,
                    &(0..n)
                        .map(|i| self.inverse.get(j, i).clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let ys = (0..n)
            .map(|j| {
                MultiPoly::linear(
                    yv,
                    cond,
                    &(0..n)
                        .map(|i| self.basis.get(i, j).clone())
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        (xs, ys)
    }

    pub fn x_s(&self, i: usize) -> PBWElement {
        let (xs, _) = self.new_in_old();
        self.full.from_x_poly(&xs[self.rank_t + i])
    }

    pub fn y_s(&self, i: usize) -> PBWElement {
        let (_, ys) = self.new_in_old();
        self.full.from_y_poly(&ys[self.rank_t + i])
    }

    pub fn factor(&self, e: &PBWElement) -> FactoredElement {
        let n = self.n();
        let r = self.rank_t;
        let cond = self.sub.conductor();
        let (xs, ys) = self.old_in_new();
        let mut terms: BTreeMap<(Key, Mono, Mono), TPoly> = BTreeMap::new();
        for (k, c) in e.terms() {
            let px = MultiPoly::monomial(self.full.x_vars(), k.x, Cyclotomic::one(cond))
                .compose(&xs)
                .expect("arity");
            let py = MultiPoly::monomial(self.full.y_vars(), k.y, Cyclotomic::one(cond))
                .compose(&ys)
                .expect("arity");
            for (a, ca) in px.terms() {
                for (b, cb) in py.terms() {
                    let (at, as_) = split_mono(a, r, n);
                    let (bt, bs) = split_mono(b, r, n);
                    let key = (Key::new(at, k.w as usize, bt), as_, bs);
                    let v = c.scale(&(ca * cb));
                    let slot = terms.entry(key).or_insert_with(|| TPoly::zero(cond));
                    slot.add_assign(&v);
                }
            }
        }
        terms.retain(|_, v| !v.is_zero());
        FactoredElement { terms }
    }

    pub fn recombine(&self, f: &FactoredElement) -> PBWElement {
        let n = self.n();
        let r = self.rank_t;
        let cond = self.sub.conductor();
        let (xs, ys) = self.new_in_old();
        let (xv, yv) = (self.new_vars("X"), self.new_vars("Y"));
        let mut out = self.full.zero();
        for ((kt, a_s, b_s), c) in &f.terms {
            let px = MultiPoly::monomial(&xv, join_mono(&kt.x, a_s, r, n), Cyclotomic::one(cond))
                .compose(&xs)
                .expect("arity");
            let py = MultiPoly::monomial(&yv, join_mono(&kt.y, b_s, r, n), Cyclotomic::one(cond))
                .compose(&ys)
                .expect("arity");
            let word = &(&self.full.from_x_poly(&px) * &self.full.group_element(kt.w as usize))
                * &self.full.from_y_poly(&py);
            out = &out + &word.scale_t(c);
        }
        out
    }

    /// Product in `H(W_b, t) ⊗ D_t(s)`: the `t`-parts multiply in the inner
    /// engine, the `s`-parts by Weyl normal ordering `Y^b X^c`.
    pub fn mul(&self, f: &FactoredElement, g: &FactoredElement) -> FactoredElement {
        let cond = self.sub.conductor();
        let m = self.n() - self.rank_t;
        let mut terms: BTreeMap<(Key, Mono, Mono), TPoly> = BTreeMap::new();
        for ((k1, a1, b1), c1) in &f.terms {
            for ((k2, a2, b2), c2) in &g.terms {
                let tpart: Vec<(Key, TPoly)> = match &self.inner {
                    Some(alg) => alg.key_product(k1, k2),
                    None => vec![(*k1, TPoly::constant(Cyclotomic::one(cond)))],
                };
                for (ys_xs, wc) in weyl_reorder(b1, a2, m, cond) {
                    let (xa, yb) = ys_xs;
                    let a = a1.mul(&xa);
                    let b = yb.mul(b2);
                    for (kt, ct) in &tpart {
                        let v = c1.mul(c2).mul(ct).mul(&wc);
                        let slot = terms
                            .entry((*kt, a, b))
                            .or_insert_with(|| TPoly::zero(cond));
                        slot.add_assign(&v);
                    }
                }
            }
        }
        terms.retain(|_, v| !v.is_zero());
        FactoredElement { terms }
    }
}

/// `Y^b X^c = Σ_k Π_j C(b_j,k_j) C(c_j,k_j) k_j! (−t)^{|k|} X^{c−k} Y^{b−k}`,
/// from `[Y_j, X_j] = −t`.
fn weyl_reorder(b: &Mono, c: &Mono, m: usize, cond: u32) -> Vec<((Mono, Mono), TPoly)> {
    let mut out = vec![(
        (Mono::one(), Mono::one()),
        TPoly::constant(Cyclotomic::one(cond)),
    )];
    for j in 0..m {
        let (bj, cj) = (b.0[j] as i64, c.0[j] as i64);
        let mut next = Vec::new();
        for ((xa, yb), coeff) in &out {
            for k in 0..=bj.min(cj) {
                let w = binom(bj, k) * binom(cj, k) * factorial(k);
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let mut tk = TPoly::constant(Cyclotomic::from_rational(
                    cond,
                    Rational::from_int(sign * w as i64),
                ));
                for _ in 0..k {
                    tk = tk.mul(&TPoly::t(cond));
                }
                let mut xe = xa.0;
                xe[j] = (cj - k) as u16;
                let mut ye = yb.0;
                ye[j] = (bj - k) as u16;
                next.push(((Mono(xe), Mono(ye)), coeff.mul(&tk)));
            }
        }
        out = next;
    }
    out
}

fn binom(n: i64, k: i64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn factorial(k: i64) -> i128 {
    (1..=k as i128).product()
}

/// Factors `e ∈ H(W_b, h)` along the splitting at `b`.
pub fn factor_tensor(
    full: &Arc<Cherednik>,
    b: &[Cyclotomic],
    e: &PBWElement,
) -> Result<(SplitCoordinates, FactoredElement)> {
    if !full.compatible(e.algebra()) {
        return Err(Error::Mismatch("element from another algebra".into()));
    }
    let sc = SplitCoordinates::new(full, b)?;
    let f = sc.factor(e);
    Ok((sc, f))
}
