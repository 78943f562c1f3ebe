//! Baby Verma modules `Δ(λ) = H̄ ⊗_{K[h*]_coinv ⋊ W} λ` and the block
//! partition of `Irr(W)` they induce.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::Serialize;

use super::RestrictedAlgebra;
use crate::error::{Error, Result};
use crate::exact::{Cyclotomic, Matrix, Mono};
use crate::rca::Key;
use crate::refl::{irreps, IrrRep};

/// `e_k · x^c` truncated to y-degree zero: `(x-coinvariant index, w, coeff)`.
type Action = Vec<(usize, usize, Cyclotomic)>;

/// Products `e_k · x^c` shared by every `Δ(λ)` of one algebra.
#[derive(Default)]
pub(super) struct VermaCache {
    products: RwLock<HashMap<(usize, usize), std::sync::Arc<Action>>>,
}

impl RestrictedAlgebra {
    fn verma_action(&self, k: usize, c: usize) -> std::sync::Arc<Action> {
        if let Some(a) = self.verma.products.read().unwrap().get(&(k, c)) {
            return a.clone();
        }
        let xc = Key::new(self.cx.monomials[c], 0, Mono::one());
        let mut acc: HashMap<(usize, usize), Cyclotomic> = HashMap::new();
        for (key, coeff) in self.alg.key_product(&self.basis[k], &xc) {
            if key.y.degree() > 0 {
                continue;
            }
            let coeff = coeff.at_zero();
            for (xi, d) in self.reduce_x(&key.x) {
                let v = &coeff * &d;
                acc.entry((xi, key.w as usize))
                    .and_modify(|e| *e += &v)
                    .or_insert(v);
            }
        }
        let mut out: Action = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, w), c)| (i, w, c))
            .collect();
        out.sort_by_key(|(i, w, _)| (*i, *w));
        let out = std::sync::Arc::new(out);
        self.verma
            .products
            .write()
            .unwrap()
            .insert((k, c), out.clone());
        out
    }
}

#[derive(Debug, Clone)]
pub struct BabyVerma {
    pub lambda: IrrRep,
    /// Basis `x^c ⊗ v_j` at index `c · dim λ + j`.
    pub basis: Vec<(Mono, usize)>,
    /// x-degree of each basis vector.
    pub grades: Vec<u32>,
    conductor: u32,
}

impl BabyVerma {
    pub fn new(h: &RestrictedAlgebra, lambda: &IrrRep) -> BabyVerma {
        let mut basis = Vec::new();
        let mut grades = Vec::new();
        for m in &h.cx.monomials {
            for j in 0..lambda.dim {
                basis.push((*m, j));
                grades.push(m.degree());
            }
        }
        BabyVerma {
            lambda: lambda.clone(),
            basis,
            grades,
            conductor: h.conductor(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Matrix of an element of `H̄` (dense coordinates) acting on `Δ(λ)`.
    pub fn action(&self, h: &RestrictedAlgebra, v: &[Cyclotomic]) -> Matrix {
        let d = self.lambda.dim;
        let mut m = Matrix::zero(self.conductor, self.dim(), self.dim());
        let ncx = h.cx.len();
        for (k, vk) in v.iter().enumerate() {
            if vk.is_zero() {
                continue;
            }
            for c in 0..ncx {
                for (xi, w, coeff) in h.verma_action(k, c).iter() {
                    let f = vk * coeff;
                    let rho = &self.lambda.matrices[*w];
                    for i in 0..d {
                        for j in 0..d {
                            let r = rho.get(i, j);
                            if r.is_zero() {
                                continue;
                            }
                            let (row, col) = (xi * d + i, c * d + j);
                            let cur = m.get(row, col) + &(&f * r);
                            m.set(row, col, cur);
                        }
                    }
                }
            }
        }
        m
    }

    /// Matrix of an element of `H_{0,c}`.
    pub fn action_of(&self, h: &RestrictedAlgebra, e: &crate::rca::PBWElement) -> Matrix {
        self.action(h, &h.reduce(e))
    }

    /// Indices of the basis vectors of x-degree `d`.
    pub fn grade(&self, d: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.grades[i] == d).collect()
    }
}

pub fn baby_verma(h: &RestrictedAlgebra, lambda: &IrrRep) -> BabyVerma {
    BabyVerma::new(h, lambda)
}

/// `tr(z | Δ(λ)) / dim Δ(λ)`, certified by nilpotency of `z − scalar`.
pub fn central_character(
    h: &RestrictedAlgebra,
    z: &[Cyclotomic],
    m: &BabyVerma,
) -> Result<Cyclotomic> {
    let a = m.action(h, z);
    let n = m.dim();
    let scalar = a.trace().scale(&crate::exact::Rational::new(1, n as i64));
    let shifted = a.sub(&Matrix::identity(h.conductor(), n).scale(&scalar));
    if !shifted.is_nilpotent() {
        return Err(Error::Invariant(format!(
            "element does not act by a generalized scalar on the baby Verma module of {}",
            m.lambda.label
        )));
    }
    Ok(scalar)
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockPartition {
    pub labels: Vec<String>,
    /// Families as lists of labels.
    pub families: Vec<Vec<String>>,
    /// Per irreducible, its central character on the centre basis used.
    pub character_vectors: Vec<Vec<String>>,
    #[serde(skip)]
    pub characters: Vec<Vec<Cyclotomic>>,
}

impl BlockPartition {
    pub fn family_of(&self, label: &str) -> Option<usize> {
        self.families
            .iter()
            .position(|f| f.iter().any(|l| l == label))
    }

    /// Family sizes, sorted decreasingly.
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.families.iter().map(|f| f.len()).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Calogero–Moser families from the computed centre of `H̄`.
pub fn cm_families(h: &RestrictedAlgebra) -> Result<BlockPartition> {
    let centre = h.centre_basis()?;
    cm_families_with(h, &centre)
}

/// Families from a caller-supplied spanning set of the centre.
pub fn cm_families_with(
    h: &RestrictedAlgebra,
    centre: &[Vec<Cyclotomic>],
) -> Result<BlockPartition> {
    let reps = irreps(h.group())?;
    let chars: Vec<Result<Vec<Cyclotomic>>> = crate::par::map(&reps, |lambda| {
        let m = BabyVerma::new(h, lambda);
        centre.iter().map(|z| central_character(h, z, &m)).collect()
    });
    let chars: Vec<Vec<Cyclotomic>> = chars.into_iter().collect::<Result<_>>()?;
    let mut families: Vec<Vec<usize>> = Vec::new();
    for (i, c) in chars.iter().enumerate() {
        match families.iter_mut().find(|f| chars[f[0]] == *c) {
            Some(f) => f.push(i),
            None => families.push(vec![i]),
        }
    }
    let labels: Vec<String> = reps.iter().map(|r| r.label.clone()).collect();
    Ok(BlockPartition {
        families: families
            .iter()
            .map(|f| f.iter().map(|&i| labels[i].clone()).collect())
            .collect(),
        character_vectors: chars
            .iter()
            .map(|v| v.iter().map(|c| c.to_string()).collect())
            .collect(),
        characters: chars,
        labels,
    })
}
