//! Parabolic subgroups: stabilizers of points of h, their conjugacy classes,
//! the containment order on classes and the rank / stratum bookkeeping.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Cyclotomic, Matrix};
use crate::refl::{dot, ReflGroup};

#[derive(Debug, Clone, Serialize)]
pub struct Parabolic {
    #[serde(skip)]
    pub point_b: Vec<Cyclotomic>,
    pub members: Vec<usize>,
    pub rank: usize,
    /// Basis of h^{W_b}.
    #[serde(skip)]
    pub fixed_space: Vec<Vec<Cyclotomic>>,
    /// Basis of (h^{*W_b})^⊥.
    #[serde(skip)]
    pub perp_space: Vec<Vec<Cyclotomic>>,
    pub class_id: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParabolicClass {
    pub label: String,
    pub rank: usize,
    /// dim h^{(W_b)}_reg / W = n − rank.
    pub stratum_dim: usize,
    pub order: usize,
    /// Representative, with a base point whose stabilizer is exactly it.
    pub representative: Parabolic,
    /// Member sets of all conjugates, sorted.
    #[serde(skip)]
    pub conjugates: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParabolicPoset {
    pub classes: Vec<ParabolicClass>,
    /// `ge[i][j]` iff (W_i) ≥ (W_j), i.e. W_i is conjugate into W_j.
    pub ge: Vec<Vec<bool>>,
}

impl ParabolicPoset {
    pub fn by_label(&self, label: &str) -> Option<usize> {
        let norm = |s: &str| s.replace(['(', ')', ' '], "");
        self.classes
            .iter()
            .position(|c| norm(&c.label) == norm(label))
    }

    /// Number of classes of each rank.
    pub fn counts_by_rank(&self, n: usize) -> Vec<usize> {
        let mut v = vec![0; n + 1];
        for c in &self.classes {
            v[c.rank] += 1;
        }
        v
    }

    pub fn class_of_members(&self, members: &[usize]) -> Option<usize> {
        let mut m = members.to_vec();
        m.sort();
        self.classes
            .iter()
            .position(|c| c.conjugates.contains(&m))
    }
}

/// Basis of the common fixed space of `members` on h (or on h* with `dual`).
pub(crate) fn fixed_basis(g: &ReflGroup, members: &[usize], dual: bool) -> Vec<Vec<Cyclotomic>> {
    let n = g.rank();
    let id = Matrix::identity(g.conductor(), n);
    let mut rows = Vec::new();
    for &w in members {
        let m = if dual { g.dual_matrix(w) } else { g.matrix(w) };
        rows.extend(m.sub(&id).into_rows());
    }
    if rows.is_empty() {
        return (0..n)
            .map(|i| {
                let mut v = vec![Cyclotomic::zero(g.conductor()); n];
                v[i] = Cyclotomic::one(g.conductor());
                v
            })
            .collect();
    }
    Matrix::with_conductor(rows, n, g.conductor()).nullspace()
}

fn members_fixing(g: &ReflGroup, b: &[Cyclotomic]) -> Vec<usize> {
    (0..g.order()).filter(|&w| g.act_h(w, b) == b).collect()
}

fn parabolic_from(g: &ReflGroup, b: &[Cyclotomic], members: Vec<usize>) -> Parabolic {
    let fixed_space = fixed_basis(g, &members, false);
    let fixed_dual = fixed_basis(g, &members, true);
    let perp_space = if fixed_dual.is_empty() {
        fixed_basis(g, &[], false)
    } else {
        Matrix::with_conductor(fixed_dual, g.rank(), g.conductor()).nullspace()
    };
    Parabolic {
        point_b: b.to_vec(),
        rank: perp_space.len(),
        members,
        fixed_space,
        perp_space,
        class_id: usize::MAX,
    }
}

/// Stab_W(b) with its splitting data and class.
pub fn stabilizer(g: &ReflGroup, b: &[Cyclotomic]) -> Result<Parabolic> {
    if b.len() != g.rank() {
        return Err(Error::Arity(format!(
            "point has {} coordinates, group has rank {}",
            b.len(),
            g.rank()
        )));
    }
    let members = members_fixing(g, b);
    let mut p = parabolic_from(g, b, members);
    let poset = parabolic_classes(g)?;
    p.class_id = poset
        .class_of_members(&p.members)
        .ok_or_else(|| Error::Invariant("stabilizer is not a known parabolic".into()))?;
    Ok(p)
}

fn conjugates(g: &ReflGroup, members: &[usize]) -> Vec<Vec<usize>> {
    let mut set = BTreeSet::new();
    for x in 0..g.order() {
        let mut c: Vec<usize> = members.iter().map(|&m| g.conjugate(x, m)).collect();
        c.sort();
        set.insert(c);
    }
    set.into_iter().collect()
}

/// Points of the flat `X` (given by a basis) tried in a fixed order: first the
/// sum of the basis vectors, then small integer combinations, then seeded
/// pseudo-random ones.
fn candidate_point(
    basis: &[Vec<Cyclotomic>],
    n: usize,
    cond: u32,
    attempt: usize,
) -> Vec<Cyclotomic> {
    let coeffs: Vec<i64> = match attempt {
        0 => vec![1; basis.len()],
        1 => (1..=basis.len() as i64).collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + attempt as u64);
            let span = 3 + attempt as i64;
            (0..basis.len()).map(|_| rng.gen_range(1..=span)).collect()
        }
    };
    let mut b = vec![Cyclotomic::zero(cond); n];
    for (v, c) in basis.iter().zip(coeffs) {
        let c = Cyclotomic::from_int(cond, c);
        for (bi, vi) in b.iter_mut().zip(v) {
            *bi += &(vi * &c);
        }
    }
    b
}

/// A point of `X` whose stabilizer fixes exactly `X`.
pub(crate) fn generic_point(g: &ReflGroup, basis: &[Vec<Cyclotomic>]) -> Result<Vec<Cyclotomic>> {
    let n = g.rank();
    let cond = g.conductor();
    // reflections whose hyperplane contains X
    let containing: Vec<bool> = g
        .reflections()
        .iter()
        .map(|r| basis.iter().all(|v| dot(&r.alpha, v).is_zero()))
        .collect();
    for attempt in 0..64 {
        let b = candidate_point(basis, n, cond, attempt);
        let ok = g
            .reflections()
            .iter()
            .zip(&containing)
            .all(|(r, &c)| c || !dot(&r.alpha, &b).is_zero());
        if ok {
            return Ok(b);
        }
    }
    Err(Error::Budget("no generic point found on a flat".into()))
}

fn greedy_generators(g: &ReflGroup, members: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span: BTreeSet<usize> = BTreeSet::from([0]);
    for &w in members.iter().filter(|&&w| g.is_reflection(w)) {
        if span.contains(&w) {
            continue;
        }
        gens.push(w);
        // close up
        let mut frontier: Vec<usize> = span.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let p = g.mul(x, s);
                if span.insert(p) {
                    frontier.push(p);
                }
            }
        }
    }
    gens
}

fn shortlex_key(g: &ReflGroup, gens: &[usize]) -> Vec<(usize, String)> {
    gens.iter()
        .map(|&w| (g.word(w).len(), g.word(w).to_string()))
        .collect()
}

/// All conjugacy classes of parabolic subgroups and their containment order.
pub fn parabolic_classes(g: &ReflGroup) -> Result<&ParabolicPoset> {
    if let Some(p) = g.parabolic_cache().get() {
        return Ok(p);
    }
    let poset = compute_classes(g)?;
    Ok(g.parabolic_cache().get_or_init(|| poset))
}

fn compute_classes(g: &ReflGroup) -> Result<ParabolicPoset> {
    let n = g.rank();
    let cond = g.conductor();
    // flats, represented by the row-reduced span of the linear forms α_s vanishing on them
    let mut flats: Vec<Matrix> = vec![Matrix::zero(cond, 0, n)];
    let mut head = 0;
    while head < flats.len() {
        let cur = flats[head].clone();
        for r in g.reflections() {
            let mut rows = cur.rows().to_vec();
            rows.push(r.alpha.clone());
            let (red, piv) = Matrix::with_conductor(rows, n, cond).rref();
            let red = Matrix::with_conductor(red.rows()[..piv.len()].to_vec(), n, cond);
            if !flats.contains(&red) {
                flats.push(red);
            }
        }
        head += 1;
    }
    let mut found: Vec<(Parabolic, Vec<Vec<usize>>)> = Vec::new();
    for eqs in &flats {
        let basis = if eqs.nrows() == 0 {
            fixed_basis(g, &[], false)
        } else {
            eqs.nullspace()
        };
        let b = if basis.is_empty() {
            vec![Cyclotomic::zero(cond); n]
        } else {
            generic_point(g, &basis)?
        };
        let members = members_fixing(g, &b);
        if found
            .iter()
            .any(|(_, conj)| conj.contains(&members))
        {
            continue;
        }
        let conj = conjugates(g, &members);
        found.push((parabolic_from(g, &b, members), conj));
    }
    // pick, in each class, the conjugate with shortlex-smallest generating reflections
    let mut classes: Vec<ParabolicClass> = Vec::new();
    for (p, conj) in found {
        let best = conj
            .iter()
            .min_by_key(|m| shortlex_key(g, &greedy_generators(g, m)))
            .unwrap()
            .clone();
        let gens = greedy_generators(g, &best);
        let label = if best.len() == 1 {
            "1".to_string()
        } else if best.len() == g.order() {
            g.name().to_string()
        } else {
            let ws: Vec<String> = gens.iter().map(|&w| g.label(w)).collect();
            format!("<{}>", ws.join(","))
        };
        let fixed = fixed_basis(g, &best, false);
        let b = if fixed.is_empty() {
            vec![Cyclotomic::zero(cond); n]
        } else {
            generic_point(g, &fixed)?
        };
        let rep = parabolic_from(g, &b, best);
        debug_assert_eq!(rep.rank, p.rank);
        classes.push(ParabolicClass {
            label,
            rank: rep.rank,
            stratum_dim: n - rep.rank,
            order: rep.members.len(),
            representative: rep,
            conjugates: conj,
        });
    }
    classes.sort_by(|a, b| {
        (
            a.rank,
            shortlex_key(g, &greedy_generators(g, &a.representative.members)),
        )
            .cmp(&(
                b.rank,
                shortlex_key(g, &greedy_generators(g, &b.representative.members)),
            ))
    });
    for (i, c) in classes.iter_mut().enumerate() {
        c.representative.class_id = i;
    }
    let k = classes.len();
    let mut ge = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            // W_i conjugate into W_j: some conjugate of W_i is contained in W_j
            let wj: BTreeSet<usize> = classes[j].representative.members.iter().copied().collect();
            ge[i][j] = classes[i]
                .conjugates
                .iter()
                .any(|c| c.iter().all(|m| wj.contains(m)));
        }
    }
    Ok(ParabolicPoset { classes, ge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(g: &ReflGroup) -> Vec<(String, usize)> {
        parabolic_classes(g)
            .unwrap()
            .classes
            .iter()
            .map(|c| (c.label.clone(), c.rank))
            .collect()
    }

    #[test]
    fn dihedral_classes() {
        let g5 = ReflGroup::dihedral(5, 5).unwrap();
        assert_eq!(
            labels(&g5),
            vec![("1".into(), 0), ("<b>".into(), 1), ("I2(5)".into(), 2)]
        );
        let g4 = ReflGroup::dihedral(4, 4).unwrap();
        assert_eq!(
            labels(&g4),
            vec![
                ("1".into(), 0),
                ("<b>".into(), 1),
                ("<ab>".into(), 1),
                ("I2(4)".into(), 2)
            ]
        );
        let dims: Vec<usize> = parabolic_classes(&g4)
            .unwrap()
            .classes
            .iter()
            .map(|c| c.stratum_dim)
            .collect();
        assert_eq!(dims, vec![2, 1, 1, 0]);
    }

    #[test]
    fn rank_counts_for_dihedral() {
        for m in 3..=8u32 {
            let g = ReflGroup::dihedral(m, m).unwrap();
            let counts = parabolic_classes(&g).unwrap().counts_by_rank(2);
            let mid = if m % 2 == 0 { 2 } else { 1 };
            assert_eq!(counts, vec![1, mid, 1], "m = {m}");
        }
    }

    #[test]
    fn poset_order() {
        let g = ReflGroup::dihedral(4, 4).unwrap();
        let p = parabolic_classes(&g).unwrap();
        let k = p.classes.len();
        for i in 0..k {
            assert!(p.ge[i][i]);
            assert!(p.ge[0][i], "(1) is the maximum");
            assert!(p.ge[i][k - 1], "(W) is the minimum");
            for j in 0..k {
                if i != j {
                    assert!(!(p.ge[i][j] && p.ge[j][i]), "antisymmetry");
                }
                for l in 0..k {
                    if p.ge[i][j] && p.ge[j][l] {
                        assert!(p.ge[i][l], "transitivity");
                    }
                }
            }
        }
        // the two rank-one classes are incomparable
        assert!(!p.ge[1][2] && !p.ge[2][1]);
    }

    /// Closure order check in h/W coordinates: a stratum of dimension d lies in the
    /// closure of another iff the orbit map sends a degenerating family there.
    /// For dihedral groups the closure of the (⟨s⟩) stratum is the image of the
    /// reflecting line, which contains the origin stratum, and the regular stratum
    /// closure is everything.
    #[test]
    fn order_matches_stratum_closures() {
        for m in [3u32, 4, 6] {
            let g = ReflGroup::dihedral(m, m).unwrap();
            let p = parabolic_classes(&g).unwrap();
            for (i, ci) in p.classes.iter().enumerate() {
                for (j, cj) in p.classes.iter().enumerate() {
                    // closure of stratum i contains stratum j iff a point with stabilizer
                    // conjugate to W_j is a limit of the flat of W_i: fixed space of some
                    // conjugate of W_j is contained in the fixed space of W_i
                    let fi = Matrix::with_conductor(ci.representative.fixed_space.clone(), 2, m);
                    let contains = cj.conjugates.iter().any(|q| {
                        let fj = fixed_basis(&g, q, false);
                        let mut rows = fi.rows().to_vec();
                        rows.extend(fj.clone());
                        fj.is_empty() || Matrix::with_conductor(rows, 2, m).rank() == fi.rank()
                    });
                    let dim_ok = ci.stratum_dim >= cj.stratum_dim;
                    assert_eq!(p.ge[i][j], contains && dim_ok, "m={m} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn stabilizer_examples() {
        let g = ReflGroup::dihedral(4, 4).unwrap();
        let c = |v: i64| Cyclotomic::from_int(4, v);
        let triv = stabilizer(&g, &[c(3), c(7)]).unwrap();
        assert_eq!((triv.members.len(), triv.rank), (1, 0));
        let all = stabilizer(&g, &[c(0), c(0)]).unwrap();
        assert_eq!((all.members.len(), all.rank), (8, 2));
        // b swaps the coordinates, so (1,1) lies on its reflecting line
        let pb = stabilizer(&g, &[c(1), c(1)]).unwrap();
        let brute: Vec<usize> = (0..8)
            .filter(|&w| g.matrix(w).mul_vec(&[c(1), c(1)]) == vec![c(1), c(1)])
            .collect();
        assert_eq!(pb.members, brute);
        assert_eq!((pb.members.len(), pb.rank), (2, 1));
        let p = parabolic_classes(&g).unwrap();
        assert_eq!(p.classes[pb.class_id].label, "<b>");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn stabilizer_is_equivariant(w in 0usize..8, a in -2i64..3, bb in -2i64..3, on_line in any::<bool>()) {
            let g = ReflGroup::dihedral(4, 4).unwrap();
            let c = |v: i64| Cyclotomic::from_int(4, v);
            let b = if on_line { vec![c(a), c(a)] } else { vec![c(a), c(bb)] };
            let s = stabilizer(&g, &b).unwrap();
            let wb = g.act_h(w, &b);
            let s2 = stabilizer(&g, &wb).unwrap();
            let mut conj: Vec<usize> = s.members.iter().map(|&m| g.conjugate(w, m)).collect();
            conj.sort();
            prop_assert_eq!(s2.members, conj);
            prop_assert_eq!(s2.class_id, s.class_id);
        }
    }
}
