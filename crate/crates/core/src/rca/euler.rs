//! Euler element, central elements and the Poisson bracket at `t = 0`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{poly::monomials_of_degree, Cyclotomic, Matrix, Mono};
use crate::rca::{Cherednik, Key, PBWElement, TMode, TPoly};

/// Coordinates of several elements on the union of their (key, t-degree)
/// supports, as columns.
fn columns(elems: &[PBWElement], conductor: u32) -> (Vec<(Key, usize)>, Vec<Vec<Cyclotomic>>) {
    let mut index: BTreeMap<(Key, usize), usize> = BTreeMap::new();
    for e in elems {
        for (k, c) in e.terms() {
            for (d, v) in c.coeffs().iter().enumerate() {
                if !v.is_zero() {
                    let len = index.len();
                    index.entry((*k, d)).or_insert(len);
                }
            }
        }
    }
    let mut rows = vec![vec![Cyclotomic::zero(conductor); elems.len()]; index.len()];
    for (j, e) in elems.iter().enumerate() {
        for (k, c) in e.terms() {
            for (d, v) in c.coeffs().iter().enumerate() {
                if let Some(&i) = index.get(&(*k, d)) {
                    rows[i][j] = v.clone();
                }
            }
        }
    }
    let mut keys = vec![(Key::new(Mono::one(), 0, Mono::one()), 0); index.len()];
    for (k, i) in index {
        keys[i] = k;
    }
    (keys, rows)
}

fn require_generic(alg: &Cherednik) -> Result<()> {
    if alg.mode() == TMode::Zero {
        return Err(Error::Unsupported(
            "this operation needs t as a variable; build the algebra with TMode::Generic".into(),
        ));
    }
    Ok(())
}

/// Solves for `eu = μ Σ x_i y_i + Σ_C κ_C Σ_{s ∈ C} s` with `[eu, x] = t x`,
/// `[eu, y] = −t y` and `[eu, w] = 0`. The additive constant is fixed to 0.
pub fn find_euler(alg: &Arc<Cherednik>) -> Result<PBWElement> {
    require_generic(alg)?;
    let g = alg.group().clone();
    let n = alg.rank();
    let cond = alg.conductor();
    let mut ansatz = vec![alg.zero()];
    for i in 0..n {
        ansatz[0] = &ansatz[0] + &(&alg.x(i) * &alg.y(i));
    }
    for cls in g.reflection_classes() {
        let mut e = alg.zero();
        for &r in cls {
            e = &e + &alg.group_element(r);
        }
        ansatz.push(e);
    }
    // one block of equations per test generator
    let mut lhs_blocks: Vec<Vec<PBWElement>> = Vec::new();
    let mut rhs: Vec<PBWElement> = Vec::new();
    for i in 0..n {
        lhs_blocks.push(
            ansatz
                .iter()
                .map(|a| a.commutator(&alg.x(i)).unwrap())
                .collect(),
        );
        rhs.push(&alg.t() * &alg.x(i));
        lhs_blocks.push(
            ansatz
                .iter()
                .map(|a| a.commutator(&alg.y(i)).unwrap())
                .collect(),
        );
        rhs.push(-&(&alg.t() * &alg.y(i)));
    }
    for &s in g.generators() {
        let gs = alg.group_element(s);
        lhs_blocks.push(ansatz.iter().map(|a| a.commutator(&gs).unwrap()).collect());
        rhs.push(alg.zero());
    }
    let mut rows = Vec::new();
    let mut b = Vec::new();
    for (block, r) in lhs_blocks.into_iter().zip(rhs) {
        let mut all = block;
        all.push(r);
        let (_, coords) = columns(&all, cond);
        for mut row in coords {
            b.push(row.pop().unwrap());
            rows.push(row);
        }
    }
    let m = Matrix::with_conductor(rows, ansatz.len(), cond);
    let sol = m
        .solve(&b)
        .map_err(|_| Error::Inconsistent("no Euler element of the expected shape".into()))?;
    let mut eu = alg.zero();
    for (a, k) in ansatz.iter().zip(&sol) {
        eu = &eu + &a.scale(k);
    }
    Ok(eu)
}

/// `{z1, z2} = ([z1, z2] / t)|_{t=0}` for elements central at `t = 0`.
pub fn poisson_bracket(z1: &PBWElement, z2: &PBWElement) -> Result<PBWElement> {
    require_generic(z1.algebra())?;
    for (name, z) in [("first", z1), ("second", z2)] {
        if !z.is_central(true) {
            return Err(Error::NotCentral(format!("{name} argument {z}")));
        }
    }
    Ok(z1.commutator(z2)?.div_t()?.at_t_zero())
}

/// Basis of the elements of `H_{0,c}` with grading `deg x − deg y = grading`
/// and total degree at most `max_total` that are central at `t = 0`.
pub fn find_central(alg: &Arc<Cherednik>, grading: i64, max_total: u32) -> Result<Vec<PBWElement>> {
    let n = alg.rank();
    let cond = alg.conductor();
    let order = alg.group().order();
    let mut keys = Vec::new();
    for p in 0..=max_total {
        let q = p as i64 - grading;
        if q < 0 || p as i64 + q > max_total as i64 {
            continue;
        }
        for a in monomials_of_degree(n, p) {
            for b in monomials_of_degree(n, q as u32) {
                for w in 0..order {
                    keys.push(Key::new(a, w, b));
                }
            }
        }
    }
    if keys.is_empty() {
        return Ok(Vec::new());
    }
    let one = TPoly::constant(Cyclotomic::one(cond));
    let basis: Vec<PBWElement> = keys.iter().map(|k| alg.term(*k, one.clone())).collect();
    let gens = alg.generators();
    let mut rows = Vec::new();
    for gen in &gens {
        let comms: Vec<PBWElement> = basis
            .iter()
            .map(|e| e.commutator(gen).map(|c| c.at_t_zero()))
            .collect::<Result<_>>()?;
        rows.extend(columns(&comms, cond).1);
    }
    let m = Matrix::with_conductor(rows, keys.len(), cond);
    let null = m.nullspace();
    Ok(null
        .into_iter()
        .map(|v| {
            let mut e = alg.zero();
            for (k, c) in keys.iter().zip(v) {
                e.add_term(*k, &TPoly::constant(c));
            }
            e
        })
        .collect())
}

/// Named elements certified central at `t = 0`.
#[derive(Clone, Debug)]
pub struct CentralSet {
    pub elements: Vec<PBWElement>,
    pub names: Vec<String>,
}

impl CentralSet {
    pub fn new() -> Self {
        CentralSet {
            elements: Vec::new(),
            names: Vec::new(),
        }
    }

    /// Adds `z` after checking centrality at `t = 0`.
    pub fn push(&mut self, name: &str, z: PBWElement) -> Result<()> {
        if !z.is_central(true) {
            return Err(Error::NotCentral(format!("{name} = {z}")));
        }
        self.names.push(name.to_string());
        self.elements.push(z);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PBWElement)> {
        self.names.iter().map(|s| s.as_str()).zip(&self.elements)
    }
}

impl Default for CentralSet {
    fn default() -> Self {
        Self::new()
    }
}
