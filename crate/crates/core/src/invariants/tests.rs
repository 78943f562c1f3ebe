use super::*;
use crate::refl::{irreps, ClassFunction};
use proptest::prelude::*;

fn dihedral(m: u32) -> Arc<ReflGroup> {
    Arc::new(ReflGroup::dihedral(m, m).unwrap())
}

fn cyclic(l: u32) -> Arc<ReflGroup> {
    Arc::new(ReflGroup::cyclic(l, l).unwrap())
}

fn poly(g: &ReflGroup, space: Space, s: &str) -> MultiPoly {
    MultiPoly::parse(&space_vars(g.rank(), space), g.conductor(), s).unwrap()
}

#[test]
fn reynolds_examples() {
    let g = cyclic(2);
    assert!(reynolds(&g, &poly(&g, Space::H, "x"), Space::H)
        .unwrap()
        .is_zero());
    let x2 = poly(&g, Space::H, "x^2");
    assert_eq!(reynolds(&g, &x2, Space::H).unwrap(), x2);
    let d4 = dihedral(4);
    let cubic = poly(&d4, Space::H, "3*x1^3 - x1^2*x2 + 5*x1*x2^2 + 7*x2^3");
    assert!(reynolds(&d4, &cubic, Space::H).unwrap().is_zero());
}

#[test]
fn fundamental_degrees() {
    let g = cyclic(2);
    let inv = fundamental_invariants(&g, Space::H).unwrap();
    assert_eq!(inv.degrees, vec![2]);
    assert_eq!(inv.gens[0], poly(&g, Space::H, "x^2"));
    for m in 3..=6 {
        let g = dihedral(m);
        for space in [Space::H, Space::HStar] {
            let inv = fundamental_invariants(&g, space).unwrap();
            assert_eq!(inv.degrees, vec![2, m]);
            assert_eq!(inv.degrees.iter().product::<u32>() as usize, g.order());
            for f in &inv.gens {
                assert!(is_invariant(&g, f, space).unwrap());
            }
        }
    }
}

/// Invariant counts per degree from characters alone: ⟨Sym^d(V), 1⟩ with the
/// symmetric power character computed from eigenvalue power sums.
#[test]
fn degrees_agree_with_character_count() {
    for m in 3..=6 {
        let g = dihedral(m);
        let dims = invariant_dimensions(&g, Space::H, m + 1).unwrap();
        // degrees {2, m}: number of (i, j) with 2i + m j = d
        for (d, &k) in dims.iter().enumerate() {
            let expected = (0..=d / 2)
                .filter(|i| (d - 2 * i) % m as usize == 0)
                .count();
            assert_eq!(k, expected, "I2({m}) degree {d}");
        }
        // the trivial character is the one counting invariants
        let reps = irreps(&g).unwrap();
        let triv = reps[0].character(&g);
        let one = ClassFunction::from_elements(&g, |_| Cyclotomic::one(g.conductor())).unwrap();
        assert!(triv.inner(&one, &g).is_one());
    }
}

#[test]
fn chevalley_coinvariants() {
    let groups: Vec<Arc<ReflGroup>> = (2..=6).map(cyclic).chain((3..=6).map(dihedral)).collect();
    for g in groups {
        for space in [Space::H, Space::HStar] {
            let cb = coinvariant_basis(&g, space).unwrap();
            assert_eq!(cb.len(), g.order(), "{}", g.name());
        }
    }
    let g = dihedral(4);
    let cb = coinvariant_basis(&g, Space::H).unwrap();
    // every monomial of degree ≤ 6 reduces into the span of the basis
    for d in 0..=6 {
        for m in monomials_of_degree(2, d) {
            let p = MultiPoly::monomial(&space_vars(2, Space::H), m, Cyclotomic::one(4));
            cb.reduce(&p).unwrap();
        }
    }
}

#[test]
fn diagonal_sample_contents() {
    let g = cyclic(2);
    let s = diagonal_invariant_sample(&g, 2).unwrap();
    let names: Vec<String> = s.gens.iter().map(|p| p.to_string()).collect();
    assert_eq!(s.gens.len(), 3);
    for want in ["x^2", "x*y", "y^2"] {
        assert!(names.iter().any(|n| n == want), "{names:?}");
    }
    let g = dihedral(4);
    let s = diagonal_invariant_sample(&g, 4).unwrap();
    let vars = space_vars(2, Space::HPlusHStar);
    let sum_xy = MultiPoly::parse(&vars, 4, "x1*y1 + x2*y2").unwrap();
    assert!(s.gens.contains(&sum_xy));
    for f in fundamental_invariants(&g, Space::H).unwrap().gens {
        let f = MultiPoly::parse(&vars, 4, &f.to_string()).unwrap();
        // embed x-polys in the h ⊕ h* ring and check they lie in the span
        let r = reynolds(&g, &f, Space::HPlusHStar).unwrap();
        assert_eq!(r, f);
        let deg = f.total_degree().unwrap();
        let same: Vec<&MultiPoly> = s
            .gens
            .iter()
            .filter(|p| p.total_degree() == Some(deg))
            .collect();
        let monos: Vec<Mono> = {
            let mut v: Vec<Mono> = same
                .iter()
                .flat_map(|p| p.terms().keys().copied())
                .chain(f.terms().keys().copied())
                .collect();
            v.sort();
            v.dedup();
            v
        };
        let mut span = SpanBasis::new(4, monos.len());
        for p in same {
            span.insert(&coords(p, &monos));
        }
        assert!(span.contains(&coords(&f, &monos)));
    }
}

#[test]
fn leaf_dimension_examples() {
    let g = dihedral(4);
    let inv = diagonal_invariant_sample(&g, 4).unwrap();
    let z = |v: i64| Cyclotomic::from_int(4, v);
    assert_eq!(leaf_dim_at(&g, &inv, &[z(0), z(0), z(0), z(0)]).unwrap(), 0);
    // trivial stabilizer
    let p = [z(1), z(3), z(2), z(-5)];
    assert!(stabilizer(&g, &p[..2]).unwrap().members.len() == 1);
    assert_eq!(leaf_dim_at(&g, &inv, &p).unwrap(), 4);
    // on the mirror of b: stabilizer of rank one
    let b = [z(2), z(2)];
    let st = stabilizer(&g, &b).unwrap();
    assert_eq!(st.rank, 1);
    assert_eq!(leaf_dim_at(&g, &inv, &[z(2), z(2), z(3), z(3)]).unwrap(), 2);
}

#[test]
fn poisson_scale_is_engine_bracket() {
    let k = poisson_scale(&dihedral(4)).unwrap();
    assert_eq!(k, Matrix::identity(4, 2));
}

#[test]
fn census_matches_parabolic_counts() {
    let expect: Vec<(Arc<ReflGroup>, Vec<usize>)> = vec![
        (dihedral(4), vec![4, 2, 2, 0]),
        (dihedral(5), vec![4, 2, 0]),
        (cyclic(2), vec![2, 0]),
        (cyclic(3), vec![2, 0]),
        (cyclic(4), vec![2, 0]),
    ];
    for (g, dims) in expect {
        let rep = leaf_census_c0(&g, 7).unwrap();
        assert!(rep.all_ok(), "{}", rep.to_markdown());
        assert_eq!(rep.dims(), dims, "{}", g.name());
        assert!(rep.rows.iter().all(|r| r.sampled_leaf_dim % 2 == 0));
        let n = g.rank();
        let mut by_rank = vec![0; n + 1];
        for r in &rep.rows {
            by_rank[n - r.sampled_leaf_dim / 2] += 1;
        }
        assert_eq!(by_rank, rep.classes_by_rank);
    }
}

use crate::exact::Matrix;
use crate::refl::stabilizer;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn reynolds_is_idempotent(coeffs in prop::collection::vec(-4i64..5, 10), m in 3u32..6) {
        let g = dihedral(m);
        let vars = space_vars(2, Space::H);
        let mut p = MultiPoly::zero(&vars, m);
        for (i, c) in coeffs.iter().enumerate() {
            let mono = Mono::from_slice(&[(i % 4) as u16, (i / 4) as u16]);
            p.add_term(mono, Cyclotomic::from_int(m, *c));
        }
        let r = reynolds(&g, &p, Space::H).unwrap();
        prop_assert_eq!(reynolds(&g, &r, Space::H).unwrap(), r.clone());
        prop_assert!(is_invariant(&g, &r, Space::H).unwrap());
    }

    #[test]
    fn leaf_dim_constant_on_orbits(a in -5i64..6, b in -5i64..6, c in -5i64..6, d in -5i64..6, w in 0usize..8) {
        let g = dihedral(4);
        let inv = diagonal_invariant_sample(&g, 4).unwrap();
        let z = |v: i64| Cyclotomic::from_int(4, v);
        let v = vec![z(a), z(b)];
        let xi = vec![z(c), z(d)];
        let mut p = v.clone();
        p.extend(xi.clone());
        let mut q = g.act_h(w, &v);
        q.extend(g.act_hstar(w, &xi));
        prop_assert_eq!(leaf_dim_at(&g, &inv, &p).unwrap(), leaf_dim_at(&g, &inv, &q).unwrap());
    }
}
