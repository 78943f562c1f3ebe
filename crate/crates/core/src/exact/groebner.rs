//! Reduced Gröbner bases (Buchberger with the product and chain criteria) and
//! normal forms modulo polynomial ideals.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::exact::poly::{monomials_of_degree, Mono, MultiPoly};

/// Default number of S-pair reductions before completion gives up.
pub const DEFAULT_BUDGET: usize = 20_000;

#[derive(Clone)]
pub struct IdealBasis {
    generators: Vec<MultiPoly>,
    groebner: Vec<MultiPoly>,
    nf_cache: Arc<RwLock<HashMap<Mono, MultiPoly>>>,
    vars: Arc<Vec<String>>,
    conductor: u32,
}

impl std::fmt::Debug for IdealBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdealBasis")
            .field("generators", &self.generators)
            .field("groebner", &self.groebner)
            .finish()
    }
}

/// Full reduction of `p` by the (not necessarily Gröbner) list `g`.
pub fn reduce(p: &MultiPoly, g: &[MultiPoly]) -> MultiPoly {
    let mut p = p.clone();
    let mut r = MultiPoly::zero(p.vars(), p.conductor());
    let leads: Vec<(Mono, crate::exact::Cyclotomic)> = g
        .iter()
        .map(|q| {
            let (m, c) = q.leading().expect("zero polynomial in reducer list");
            (*m, c.inv().expect("nonzero leading coefficient"))
        })
        .collect();
    while let Some((m, c)) = p.leading().map(|(m, c)| (*m, c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let q = leads[i].0.quotient(&m);
                let s = &c * &leads[i].1;
                p = p.sub(&g[i].mul_term(&q, &s));
            }
            None => {
                p.add_term(m, -&c);
                r.add_term(m, c);
            }
        }
    }
    r
}

fn s_poly(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (mf, cf) = f.leading().unwrap();
    let (mg, cg) = g.leading().unwrap();
    let l = mf.lcm(mg);
    let a = f.mul_term(&mf.quotient(&l), &cf.inv().unwrap());
    let b = g.mul_term(&mg.quotient(&l), &cg.inv().unwrap());
    a.sub(&b)
}

fn buchberger(gens: &[MultiPoly], budget: usize) -> Result<Vec<MultiPoly>> {
    let mut g: Vec<MultiPoly> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.monic())
        .collect();
    if g.is_empty() {
        return Ok(g);
    }
    // pairs keyed by (lcm, i, j) so the smallest lcm is processed first
    let mut pairs: BTreeSet<(Mono, usize, usize)> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..g.len() {
        for i in 0..j {
            let l = g[i].leading().unwrap().0.lcm(g[j].leading().unwrap().0);
            pairs.insert((l, i, j));
        }
    }
    let mut steps = 0usize;
    while let Some(&(l, i, j)) = pairs.iter().next() {
        pairs.remove(&(l, i, j));
        done.insert((i, j));
        let li = *g[i].leading().unwrap().0;
        let lj = *g[j].leading().unwrap().0;
        if li.is_coprime(&lj) {
            continue;
        }
        // chain criterion: some k with lm_k | lcm whose pairs with i and j are already handled
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && g[k].leading().unwrap().0.divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        steps += 1;
        if steps > budget {
            return Err(Error::Budget(format!(
                "Gröbner completion exceeded {budget} S-pair reductions"
            )));
        }
        let r = reduce(&s_poly(&g[i], &g[j]), &g);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        let lr = *r.leading().unwrap().0;
        let k = g.len();
        g.push(r);
        for idx in 0..k {
            let l = g[idx].leading().unwrap().0.lcm(&lr);
            pairs.insert((l, idx, k));
        }
    }
    Ok(interreduce(g))
}

fn interreduce(mut g: Vec<MultiPoly>) -> Vec<MultiPoly> {
    // drop elements whose leading monomial is divisible by another's
    g.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for p in g {
        let lp = *p.leading().unwrap().0;
        if minimal.iter().any(|q| q.leading().unwrap().0.divides(&lp)) {
            continue;
        }
        minimal.push(p);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MultiPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        // the leading term survives because no other leading monomial divides it
        let (lm, lc) = minimal[i].leading().unwrap();
        let mut tail = minimal[i].clone();
        tail.add_term(*lm, -lc);
        let mut r = reduce(&tail, &others);
        r.add_term(*lm, lc.clone());
        out.push(r.monic());
    }
    out
}

impl IdealBasis {
    /// Builds the ideal and completes it to a reduced Gröbner basis.
    pub fn new(generators: Vec<MultiPoly>) -> Result<Self> {
        Self::with_budget(generators, DEFAULT_BUDGET)
    }

    pub fn with_budget(generators: Vec<MultiPoly>, budget: usize) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Invalid("ideal needs at least one generator".into()))?;
        let vars = first.vars().clone();
        let conductor = first.conductor();
        for g in &generators {
            if g.nvars() != vars.len() {
                return Err(Error::Arity("generators in different rings".into()));
            }
            if g.conductor() != conductor {
                return Err(Error::ConductorMismatch(g.conductor(), conductor));
            }
        }
        let groebner = buchberger(&generators, budget)?;
        Ok(IdealBasis {
            generators,
            groebner,
            nf_cache: Arc::new(RwLock::new(HashMap::new())),
            vars,
            conductor,
        })
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn groebner(&self) -> &[MultiPoly] {
        &self.groebner
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// True for the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.groebner
            .iter()
            .any(|g| g.leading().map(|(m, _)| m.degree() == 0).unwrap_or(false))
    }

    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        reduce(p, &self.groebner)
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Normal form of a single monomial, memoized.
    pub fn normal_form_monomial(&self, m: &Mono) -> MultiPoly {
        if let Some(p) = self.nf_cache.read().unwrap().get(m) {
            return p.clone();
        }
        let p = self.normal_form(&MultiPoly::monomial(
            &self.vars,
            *m,
            crate::exact::Cyclotomic::one(self.conductor),
        ));
        self.nf_cache.write().unwrap().insert(*m, p.clone());
        p
    }

    pub fn is_standard(&self, m: &Mono) -> bool {
        !self
            .groebner
            .iter()
            .any(|g| g.leading().unwrap().0.divides(m))
    }

    /// Standard monomials (a basis of the quotient ring) when the quotient is
    /// finite dimensional; errors if standard monomials persist past `max_degree`.
    pub fn standard_monomials(&self, max_degree: u32) -> Result<Vec<Mono>> {
        let n = self.vars.len();
        let mut out = Vec::new();
        for d in 0..=max_degree + 1 {
            let layer: Vec<Mono> = monomials_of_degree(n, d)
                .into_iter()
                .filter(|m| self.is_standard(m))
                .collect();
            if layer.is_empty() {
                return Ok(out);
            }
            if d == max_degree + 1 {
                break;
            }
            out.extend(layer);
        }
        Err(Error::Budget(format!(
            "quotient ring has standard monomials beyond degree {max_degree}"
        )))
    }

    /// Generators of the k-th power: all products of k generators.
    pub fn power_generators(gens: &[MultiPoly], k: u32) -> Vec<MultiPoly> {
        if k == 0 {
            return vec![MultiPoly::one(gens[0].vars(), gens[0].conductor())];
        }
        let mut out = Vec::new();
        fn rec(
            gens: &[MultiPoly],
            start: usize,
            left: u32,
            acc: MultiPoly,
            out: &mut Vec<MultiPoly>,
        ) {
            if left == 0 {
                out.push(acc);
                return;
            }
            for i in start..gens.len() {
                rec(gens, i, left - 1, acc.mul(&gens[i]), out);
            }
        }
        rec(
            gens,
            0,
            k,
            MultiPoly::one(gens[0].vars(), gens[0].conductor()),
            &mut out,
        );
        out
    }
}

/// Convenience: normal form of `p` modulo `ideal`.
pub fn groebner_normal_form(p: &MultiPoly, ideal: &IdealBasis) -> MultiPoly {
    ideal.normal_form(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::linalg::Matrix;
    use crate::exact::Cyclotomic;
    use proptest::prelude::*;

    fn xy() -> Arc<Vec<String>> {
        Arc::new(vec!["x".into(), "y".into()])
    }

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(&xy(), 1, s).unwrap()
    }

    #[test]
    fn principal_ideals() {
        let i = IdealBasis::new(vec![p("x")]).unwrap();
        assert!(groebner_normal_form(&p("x^2"), &i).is_zero());
        let j = IdealBasis::new(vec![p("x^2 - y")]).unwrap();
        assert_eq!(j.normal_form(&p("x^2 + y")), p("2*y"));
    }

    #[test]
    fn coinvariants_of_swap_times_rotation() {
        // ⟨x y, x^4 + y^4⟩ has a quotient of dimension 8
        let i = IdealBasis::new(vec![p("x*y"), p("x^4 + y^4")]).unwrap();
        assert_eq!(i.standard_monomials(10).unwrap().len(), 8);
        assert!(!i.is_unit());
    }

    #[test]
    fn unit_ideal_detected() {
        let i = IdealBasis::new(vec![p("x*y - 1"), p("x")]).unwrap();
        assert!(i.is_unit());
    }

    #[test]
    fn truncation_by_fourth_power() {
        // 𝔪(0)² for ℤ/2 on a line is ⟨x^4⟩; normal form deletes x^4 and above
        let v = Arc::new(vec!["x".to_string()]);
        let x2 = MultiPoly::parse(&v, 1, "x^2").unwrap();
        let gens = IdealBasis::power_generators(&[x2], 2);
        let i = IdealBasis::new(gens).unwrap();
        let f = MultiPoly::parse(&v, 1, "3*x^6 - x^4 + 2*x^3 + 5*x - 7").unwrap();
        assert_eq!(
            i.normal_form(&f),
            MultiPoly::parse(&v, 1, "2*x^3 + 5*x - 7").unwrap()
        );
    }

    /// Membership in I ∩ (degree ≤ d) by brute-force linear algebra: does `f`
    /// lie in the span of {m·g : g generator, deg(m·g) ≤ d}?
    fn brute_member(gens: &[MultiPoly], f: &MultiPoly, d: u32) -> bool {
        let mut cols: Vec<Mono> = Vec::new();
        for e in 0..=d {
            cols.extend(monomials_of_degree(2, e));
        }
        let index = |m: &Mono| cols.iter().position(|c| c == m).unwrap();
        let mut rows = Vec::new();
        for g in gens {
            let gd = g.total_degree().unwrap();
            if gd > d {
                continue;
            }
            for e in 0..=d - gd {
                for m in monomials_of_degree(2, e) {
                    let h = g.mul_term(&m, &Cyclotomic::one(1));
                    let mut row = vec![Cyclotomic::zero(1); cols.len()];
                    for (mm, c) in h.terms() {
                        row[index(mm)] = c.clone();
                    }
                    rows.push(row);
                }
            }
        }
        let base = Matrix::from_rows(rows.clone(), cols.len()).rank();
        let mut frow = vec![Cyclotomic::zero(1); cols.len()];
        for (mm, c) in f.terms() {
            frow[index(mm)] = c.clone();
        }
        rows.push(frow);
        Matrix::from_rows(rows, cols.len()).rank() == base
    }

    fn arb_poly(max_deg: u16) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0..=max_deg), (0..=max_deg), -4i64..5), 1..6).prop_map(|ts| {
            let mut f = MultiPoly::zero(&xy(), 1);
            for (a, b, c) in ts {
                f.add_term(Mono::from_slice(&[a, b]), Cyclotomic::from_int(1, c));
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn normal_form_is_idempotent(f in arb_poly(5), g1 in arb_poly(2), g2 in arb_poly(2)) {
            let gens: Vec<MultiPoly> = [g1, g2].into_iter().filter(|g| !g.is_zero()).collect();
            prop_assume!(!gens.is_empty());
            let i = IdealBasis::new(gens).unwrap();
            let nf = i.normal_form(&f);
            prop_assert!(i.normal_form(&f.sub(&nf)).is_zero());
            prop_assert_eq!(i.normal_form(&nf), nf);
            for g in i.generators() {
                prop_assert!(i.normal_form(g).is_zero());
            }
        }

        #[test]
        fn membership_matches_linear_algebra(
            a in arb_poly(2), b in arb_poly(2), m1 in arb_poly(2), m2 in arb_poly(2)
        ) {
            // homogenise nothing: work with x^2 - y, x*y style generators of bounded degree
            let gens: Vec<MultiPoly> = [a, b].into_iter().filter(|g| !g.is_zero()).collect();
            prop_assume!(gens.len() == 2);
            let i = IdealBasis::new(gens.clone()).unwrap();
            // a genuine member of degree ≤ 6
            let member = gens[0].mul(&m1).add(&gens[1].mul(&m2));
            prop_assume!(member.total_degree().map(|d| d <= 6).unwrap_or(false));
            prop_assert!(i.contains(&member));
            // a random degree-≤6 polynomial: Gröbner says member ⇒ brute force must agree
            // whenever a degree-6 certificate exists, and non-membership must never be
            // contradicted by brute force
            let f = member.add(&MultiPoly::monomial(&xy(), Mono::from_slice(&[1, 1]), Cyclotomic::one(1)));
            if brute_member(&gens, &f, 6) {
                prop_assert!(i.contains(&f));
            }
            if !i.contains(&f) {
                prop_assert!(!brute_member(&gens, &f, 6));
            }
        }
    }

    #[test]
    fn membership_degree_by_degree_homogeneous() {
        // for homogeneous ideals the degree-d truncation is exact, so both routes agree fully
        let gens = vec![p("x^2 - 3*x*y"), p("x*y^2 + y^3")];
        let i = IdealBasis::new(gens.clone()).unwrap();
        for d in 0..=6u32 {
            for m in monomials_of_degree(2, d) {
                let f = MultiPoly::monomial(&xy(), m, Cyclotomic::one(1));
                assert_eq!(i.contains(&f), brute_member(&gens, &f, d), "{f}");
            }
        }
    }
}
