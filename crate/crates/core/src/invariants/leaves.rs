//! Leaf dimensions of `(h ⊕ h*)/W` at `c = 0` from ranks of Poisson bracket
//! matrices of invariants.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Cyclotomic, Matrix};
use crate::invariants::{diagonal_invariant_sample, fundamental_invariants, InvariantSet, Space};
use crate::rca::{Cherednik, Param};
use crate::refl::parabolic::fixed_basis;
use crate::refl::{parabolic_classes, stabilizer, ReflGroup};

/// The constants `κ_ij` with `{x_i, y_j} = κ_ij` at `c = 0`, read off the
/// engine's commutators `[x_i, y_j] = t κ_ij`.
pub fn poisson_scale(g: &Arc<ReflGroup>) -> Result<Matrix> {
    let alg = Cherednik::new(g.clone(), Param::zero(g))?;
    let n = g.rank();
    let mut k = Matrix::zero(g.conductor(), n, n);
    for i in 0..n {
        for j in 0..n {
            let b = alg.x(i).commutator(&alg.y(j))?.div_t()?.at_t_zero();
            let v = b.coeff(&crate::rca::Key::new(
                crate::exact::Mono::one(),
                0,
                crate::exact::Mono::one(),
            ));
            if b.len() > 1 || (b.len() == 1 && v.is_zero()) {
                return Err(Error::Invariant(
                    "bracket of coordinates is not a scalar".into(),
                ));
            }
            k.set(i, j, v.at_zero());
        }
    }
    Ok(k)
}

/// Rank of `[{f_a, f_b}(p)]` for the invariants of a diagonal sample, with
/// `p = (x-values, y-values)`.
pub fn leaf_dim_at(g: &Arc<ReflGroup>, inv: &InvariantSet, p: &[Cyclotomic]) -> Result<usize> {
    let k = poisson_scale(g)?;
    leaf_dim_with(&k, g.rank(), inv, p)
}

fn leaf_dim_with(k: &Matrix, n: usize, inv: &InvariantSet, p: &[Cyclotomic]) -> Result<usize> {
    if inv.space != Space::HPlusHStar {
        return Err(Error::Invalid(
            "leaf dimensions need invariants on h ⊕ h*".into(),
        ));
    }
    if p.len() != 2 * n {
        return Err(Error::Arity(format!(
            "point has {} coordinates, expected {}",
            p.len(),
            2 * n
        )));
    }
    let cond = k.conductor();
    let grads: Vec<Vec<Cyclotomic>> = inv
        .gens
        .iter()
        .map(|f| {
            (0..2 * n)
                .map(|v| f.derivative(v).evaluate(p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let m = grads.len();
    let mut b = Matrix::zero(cond, m, m);
    for a in 0..m {
        for c in a + 1..m {
            let mut acc = Cyclotomic::zero(cond);
            for i in 0..n {
                for j in 0..n {
                    let kij = k.get(i, j);
                    if kij.is_zero() {
                        continue;
                    }
                    let term =
                        &(&grads[a][i] * &grads[c][n + j]) - &(&grads[a][n + j] * &grads[c][i]);
                    acc += &(&term * kij);
                }
            }
            b.set(c, a, -&acc);
            b.set(a, c, acc);
        }
    }
    Ok(b.rank())
}

#[derive(Debug, Clone, Serialize)]
pub struct StratumRow {
    pub label: String,
    pub rank: usize,
    pub stratum_dim: usize,
    pub expected_leaf_dim: usize,
    pub sampled_leaf_dim: usize,
    pub points_used: usize,
    pub degree_bound: u32,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StratumReport {
    pub group: String,
    pub rows: Vec<StratumRow>,
    /// Leaf dimension → number of leaves.
    pub leaves_by_dim: BTreeMap<usize, usize>,
    /// Parabolic classes per rank.
    pub classes_by_rank: Vec<usize>,
}

impl StratumReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.sampled_leaf_dim).collect()
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("Leaves of {} at c = 0\n\n", self.group);
        s.push_str("| label | dim | # of leaves (c = 0) |\n|---|---|---|\n");
        let mut rows: Vec<&StratumRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| {
            b.sampled_leaf_dim
                .cmp(&a.sampled_leaf_dim)
                .then(a.rank.cmp(&b.rank))
        });
        for r in rows {
            let _ = writeln!(s, "| ({}) | {} | 1 |", r.label, r.sampled_leaf_dim);
        }
        s
    }
}

fn random_combination(
    basis: &[Vec<Cyclotomic>],
    n: usize,
    cond: u32,
    rng: &mut ChaCha8Rng,
) -> Vec<Cyclotomic> {
    let mut v = vec![Cyclotomic::zero(cond); n];
    for b in basis {
        let c = Cyclotomic::from_int(cond, rng.gen_range(1..=9));
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += &(bi * &c);
        }
    }
    v
}

const RETRIES: usize = 3;

/// One leaf per parabolic class: samples a point with that stabilizer and a
/// generic invariant covector, and checks the bracket rank is `2(n − r)`.
pub fn leaf_census_c0(g: &Arc<ReflGroup>, seed: u64) -> Result<StratumReport> {
    let n = g.rank();
    let cond = g.conductor();
    let poset = parabolic_classes(g)?;
    let k = poisson_scale(g)?;
    let base_bound = fundamental_invariants(g, Space::H)?
        .degrees
        .iter()
        .copied()
        .max()
        .unwrap_or(2)
        .max(2);
    let mut samples: BTreeMap<u32, InvariantSet> = BTreeMap::new();
    samples.insert(base_bound, diagonal_invariant_sample(g, base_bound)?);
    let mut rows = Vec::new();
    for (ci, class) in poset.classes.iter().enumerate() {
        let rep = &class.representative;
        let expected = 2 * (n - rep.rank);
        let dual_fixed = fixed_basis(g, &rep.members, true);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (ci as u64).wrapping_mul(0x9e37_79b9));
        let mut bound = base_bound;
        let mut used = 0;
        let mut best = 0;
        'outer: for _ in 0..2 {
            if let std::collections::btree_map::Entry::Vacant(e) = samples.entry(bound) {
                e.insert(diagonal_invariant_sample(g, bound)?);
            }
            let inv = &samples[&bound];
            for attempt in 0..RETRIES {
                let v = if attempt == 0 {
                    rep.point_b.clone()
                } else {
                    random_combination(&rep.fixed_space, n, cond, &mut rng)
                };
                if stabilizer(g, &v)?.members != rep.members {
                    continue;
                }
                let xi = random_combination(&dual_fixed, n, cond, &mut rng);
                let mut p = v;
                p.extend(xi);
                used += 1;
                best = best.max(leaf_dim_with(&k, n, inv, &p)?);
                if best >= expected {
                    break 'outer;
                }
            }
            bound += 1;
        }
        rows.push(StratumRow {
            label: class.label.clone(),
            rank: rep.rank,
            stratum_dim: class.stratum_dim,
            expected_leaf_dim: expected,
            sampled_leaf_dim: best,
            points_used: used,
            degree_bound: bound.min(base_bound + 1),
            ok: best == expected,
        });
    }
    let mut leaves_by_dim = BTreeMap::new();
    for r in &rows {
        *leaves_by_dim.entry(r.sampled_leaf_dim).or_insert(0) += 1;
    }
    Ok(StratumReport {
        group: g.name().to_string(),
        rows,
        leaves_by_dim,
        classes_by_rank: poset.counts_by_rank(n),
    })
}
