use super::*;
use crate::exact::MultiPoly;
use crate::refl::irreps;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(n: u32, v: i64) -> Cyclotomic {
    Cyclotomic::from_int(n, v)
}

fn cyclic(l: u32) -> Arc<ReflGroup> {
    Arc::new(ReflGroup::cyclic(l, l).unwrap())
}

fn dihedral(m: u32) -> Arc<ReflGroup> {
    Arc::new(ReflGroup::dihedral(m, m).unwrap())
}

fn hbar(g: &Arc<ReflGroup>, cval: i64) -> RestrictedAlgebra {
    RestrictedAlgebra::new(g.clone(), Param::uniform(g, c(g.conductor(), cval))).unwrap()
}

fn in_span(basis: &[Vec<Cyclotomic>], v: &[Cyclotomic]) -> bool {
    let mut s = SpanBasis::new(v[0].conductor(), v.len());
    for b in basis {
        s.insert(b);
    }
    s.contains(v)
}

fn same_span(a: &[Vec<Cyclotomic>], b: &[Vec<Cyclotomic>]) -> bool {
    a.len() == b.len() && b.iter().all(|v| in_span(a, v))
}

#[test]
fn dimensions_are_cubes() {
    assert_eq!(hbar(&cyclic(2), 1).dim(), 8);
    assert_eq!(hbar(&cyclic(3), 1).dim(), 27);
    assert_eq!(hbar(&dihedral(3), 1).dim(), 216);
}

#[test]
fn invariants_reduce_to_zero() {
    let h = hbar(&cyclic(2), 1);
    let alg = h.algebra().clone();
    assert!(h.reduce_sparse(&alg.x(0).pow(2)).is_empty());
    assert!(h.reduce_sparse(&alg.y(0).pow(2)).is_empty());
    assert!(!h.reduce_sparse(&alg.x(0)).is_empty());
}

/// The product on coordinates agrees with multiplying lifts in `H_{0,c}` and
/// reducing afterwards.
#[test]
fn multiplication_matches_engine() {
    let g = dihedral(3);
    let h = hbar(&g, 2);
    let alg = h.algebra().clone();
    let a = alg.parse("x1*[a] + 2*y2 - [b]").unwrap();
    let b = alg.parse("y1*x2 + 3*[ab]*y1^2").unwrap();
    assert_eq!(h.mul(&h.reduce(&a), &h.reduce(&b)), h.reduce(&(&a * &b)));
}

#[test]
fn centre_contains_euler_and_unit() {
    let g = cyclic(2);
    let h = hbar(&g, 1);
    let centre = h.centre_basis().unwrap();
    assert!(in_span(&centre, &h.unit()));
    // z0 = α α^∨ + 2c s, checked central in the algebra itself first
    let alg = h.algebra().clone();
    let r = &g.reflections()[0];
    let z0 = &(&alg.x_linear(&r.alpha) * &alg.y_linear(&r.alpha_check))
        + &alg.group_element(1).scale(&c(2, 2));
    assert!(z0.is_central(true));
    assert!(in_span(&centre, &h.reduce(&z0)));
    for v in &centre {
        assert!(h.is_central(v));
    }
}

#[test]
fn centre_routes_agree_for_z2() {
    for cval in [0, 1, 3] {
        let h = hbar(&cyclic(2), cval);
        let a = h.centre_basis().unwrap();
        let b = h.centre_brute_force().unwrap();
        assert!(same_span(&a, &b), "c = {cval}: {} vs {}", a.len(), b.len());
    }
}

#[test]
fn conjugation_invariant_count() {
    for g in [cyclic(2), cyclic(3), dihedral(3)] {
        let h = hbar(&g, 1);
        assert_eq!(h.invariant_dimension().unwrap(), g.order() * g.order());
    }
}

#[test]
fn baby_verma_shapes() {
    let g = cyclic(2);
    let h = hbar(&g, 1);
    let reps = irreps(&g).unwrap();
    assert_eq!(baby_verma(&h, &reps[0]).dim(), 2);
    let g4 = dihedral(4);
    let h4 = hbar(&g4, 1);
    let refl = irreps(&g4)
        .unwrap()
        .into_iter()
        .find(|r| r.dim == 2)
        .unwrap();
    let m = baby_verma(&h4, &refl);
    assert_eq!(m.dim(), 16);
    // grade 0 carries λ
    let bottom = m.grade(0);
    for w in 0..g4.order() {
        let a = m.action_of(&h4, &h4.algebra().group_element(w));
        let tr = bottom
            .iter()
            .fold(Cyclotomic::zero(4), |acc, &i| &acc + a.get(i, i));
        assert_eq!(tr, refl.matrices[w].trace());
    }
    let total: usize = irreps(&g4)
        .unwrap()
        .iter()
        .map(|l| baby_verma(&h4, l).dim() * l.dim)
        .sum();
    assert_eq!(total, 64);
}

/// Module axioms on sampled pairs of basis words.
#[test]
fn baby_verma_is_a_module() {
    let g = dihedral(3);
    let h = hbar(&g, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for lambda in irreps(&g).unwrap() {
        let m = baby_verma(&h, &lambda);
        for _ in 0..6 {
            let i = rng.gen_range(0..h.dim());
            let j = rng.gen_range(0..h.dim());
            let mut ei = h.zero_vec();
            ei[i] = c(3, 1);
            let mut ej = h.zero_vec();
            ej[j] = c(3, 1);
            let lhs = m.action(&h, &h.mul(&ei, &ej));
            let rhs = m.action(&h, &ei).mul(&m.action(&h, &ej));
            assert_eq!(lhs, rhs, "{} {i} {j}", lambda.label);
        }
        // y's lower the x-degree
        let y = m.action_of(&h, &h.algebra().y(0));
        for col in 0..m.dim() {
            for row in 0..m.dim() {
                if !y.get(row, col).is_zero() {
                    assert!(m.grades[row] < m.grades[col]);
                }
            }
        }
    }
}

#[test]
fn euler_separates_z2_at_nonzero_c() {
    let g = cyclic(2);
    let h = hbar(&g, 3);
    let alg = h.algebra().clone();
    let eu =
        crate::rca::find_euler(&Cherednik::new(g.clone(), Param::uniform(&g, c(2, 3))).unwrap())
            .unwrap();
    let eu = h.reduce(&eu);
    let reps = irreps(&g).unwrap();
    let vals: Vec<Cyclotomic> = reps
        .iter()
        .map(|l| central_character(&h, &eu, &baby_verma(&h, l)).unwrap())
        .collect();
    // on the lowest weight space eu acts by -c·λ(s)
    for (l, v) in reps.iter().zip(&vals) {
        assert_eq!(*v, &c(2, -3) * l.matrices[1].get(0, 0));
    }
    assert_ne!(vals[0], vals[1]);
    assert!(central_character(&h, &h.unit(), &baby_verma(&h, &reps[0]))
        .unwrap()
        .is_one());
    let _ = alg;
}

#[test]
fn families_of_small_groups() {
    let p = cm_families(&hbar(&cyclic(2), 1)).unwrap();
    assert_eq!(p.shape(), vec![1, 1]);
    let p = cm_families(&hbar(&cyclic(2), 0)).unwrap();
    assert_eq!(p.shape(), vec![2]);
    let p = cm_families(&hbar(&dihedral(3), 0)).unwrap();
    assert_eq!(p.shape(), vec![3]);
    let p = cm_families(&hbar(&cyclic(3), 1)).unwrap();
    assert_eq!(p.shape(), vec![1, 1, 1]);
    // equal parameters on I2(4): the linear characters of mixed sign join the
    // reflection representation
    let p = cm_families(&hbar(&dihedral(4), 1)).unwrap();
    assert_eq!(
        p.families,
        vec![vec!["triv"], vec!["sign"], vec!["eps1", "eps2", "rho1"]]
    );
}

#[test]
fn families_do_not_depend_on_centre_basis() {
    let h = hbar(&dihedral(3), 1);
    let centre = h.centre_basis().unwrap();
    let p = cm_families_with(&h, &centre).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2 {
        let mixed: Vec<Vec<Cyclotomic>> = (0..centre.len())
            .map(|i| {
                let mut v = centre[i].clone();
                for b in &centre {
                    let k = c(3, rng.gen_range(-3..4));
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &(y * &k);
                    }
                }
                v
            })
            .collect();
        assert_eq!(cm_families_with(&h, &mixed).unwrap().families, p.families);
    }
}

fn z2_pres(cval: i64) -> (Arc<ReflGroup>, Presentation) {
    let g = cyclic(2);
    let p = rank_one_presentation(&g, &Param::uniform(&g, c(2, cval))).unwrap();
    (g, p)
}

fn poly(p: &Presentation, s: &str) -> MultiPoly {
    MultiPoly::parse(&p.vars, 2, s).unwrap()
}

#[test]
fn z2_relation_matches_direct_expansion() {
    for cval in [0, 1, 5] {
        let (_, p) = z2_pres(cval);
        let want = poly(&p, &format!("u*v - z0^2 + {}", 4 * cval * cval));
        assert_eq!(p.relations.generators()[0], want);
        // direct: (α α^∨ + 2cs)^2 − α²(α^∨)² − 4c² vanishes at t = 0
        let alg = p.generators.elements[0].algebra().clone();
        let r = &alg.group().reflections()[0];
        let (a, b) = (alg.x_linear(&r.alpha), alg.y_linear(&r.alpha_check));
        let z = &(&a * &b) + &alg.group_element(1).scale(&c(2, 2 * cval));
        let lhs = &(&z * &z) - &(&a.pow(2) * &b.pow(2));
        assert_eq!(lhs.at_t_zero(), alg.scalar(c(2, 4 * cval * cval)));
    }
}

#[test]
fn z2_bracket_table() {
    for cval in [0, 2] {
        let (_, p) = z2_pres(cval);
        // Leibniz from {α, α^∨} = 2: {α², (α^∨)²} = 8 α α^∨, {α α^∨, α²} = −4 α²
        assert_eq!(p.brackets[0][1], poly(&p, "8*z0"));
        assert_eq!(p.brackets[2][0], poly(&p, "-4*u"));
        assert_eq!(p.brackets[1][2], poly(&p, "-4*v"));
    }
}

#[test]
fn cuspidal_quotient_z2() {
    let (g, p) = z2_pres(0);
    let h = hbar(&g, 0);
    let chi = PointChi::new(&p, vec![c(2, 0); 3]).unwrap();
    let q = point_quotient(&h, &p, &chi).unwrap();
    assert_eq!(q.dim(), 6);
    let mut labels = q.labels.clone();
    labels.sort();
    assert_eq!(
        labels,
        ["1", "[w1]", "[w1]*y", "x", "x*[w1]", "y"]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
    );
    assert!(q.is_associative());
    assert_eq!(q.radical_power_dims(3), vec![4, 0, 0]);
    assert_eq!(q.semisimple_dim(), 2);
    assert!(is_poisson_point(&p, &chi).unwrap());
}

#[test]
fn smooth_points_give_matrix_algebras() {
    let (g, p) = z2_pres(1);
    let h = hbar(&g, 1);
    for z in [2, -2] {
        let chi = PointChi::new(&p, vec![c(2, 0), c(2, 0), c(2, z)]).unwrap();
        let q = point_quotient(&h, &p, &chi).unwrap();
        assert_eq!(q.dim(), 4);
        assert!(q.radical().is_empty());
        assert_eq!(q.centre().len(), 1);
        assert!(!is_poisson_point(&p, &chi).unwrap());
    }
}

#[test]
fn invalid_points_are_rejected() {
    let (g, p) = z2_pres(1);
    assert!(matches!(
        PointChi::new(&p, vec![c(2, 0), c(2, 0), c(2, 1)]),
        Err(Error::Inconsistent(_))
    ));
    let chi = PointChi::new(&p, vec![c(2, 1), c(2, 3), c(2, 1)]);
    assert!(chi.is_err());
    // on the surface, away from Υ = 0
    let chi = PointChi::new(&p, vec![c(2, 1), c(2, 5), c(2, 3)]).unwrap();
    assert!(matches!(
        point_quotient(&hbar(&g, 1), &p, &chi),
        Err(Error::Invalid(_))
    ));
    let (_, p0) = z2_pres(0);
    let chi = PointChi::new(&p0, vec![c(2, 1), c(2, 4), c(2, 2)]).unwrap();
    assert!(!is_poisson_point(&p0, &chi).unwrap());
}

#[test]
fn presentations_only_for_cyclic() {
    let g = dihedral(3);
    assert!(matches!(
        rank_one_presentation(&g, &Param::zero(&g)),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn z3_presentation_round_trip() {
    let g = cyclic(3);
    let p = rank_one_presentation(&g, &Param::uniform(&g, c(3, 1))).unwrap();
    let r = &p.relations.generators()[0];
    assert!(p.evaluate(r).at_t_zero().is_zero());
    // every generator expresses as itself
    for (i, z) in p.generators.elements.iter().enumerate() {
        let e = p.express(z).unwrap();
        assert_eq!(e, MultiPoly::var(&p.vars, 3, i));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reduction_is_multiplicative(seed in 0u64..1000, cval in -2i64..3) {
        let g = cyclic(3);
        let h = hbar(&g, cval);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pick = || {
            let mut v = h.zero_vec();
            for _ in 0..3 {
                v[rng.gen_range(0..h.dim())] = c(3, rng.gen_range(-3..4));
            }
            v
        };
        let (a, b, d) = (pick(), pick(), pick());
        prop_assert_eq!(h.mul(&h.mul(&a, &b), &d), h.mul(&a, &h.mul(&b, &d)));
        let lifted = &h.lift(&a) * &h.lift(&b);
        prop_assert_eq!(h.reduce(&lifted), h.mul(&a, &b));
    }
}
