//! Class functions, explicit irreducible representations for cyclic and
//! dihedral groups, and induction from subgroups.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Cyclotomic, Matrix, Rational};
use crate::refl::{Family, ReflGroup};

/// A function on conjugacy classes, indexed like [`ReflGroup::classes`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassFunction {
    pub values: Vec<Cyclotomic>,
}

impl ClassFunction {
    /// Builds from per-element values, checking constancy on classes.
    pub fn from_elements(g: &ReflGroup, f: impl Fn(usize) -> Cyclotomic) -> Result<Self> {
        let mut values = Vec::new();
        for cls in g.classes() {
            let v = f(cls[0]);
            if cls.iter().any(|&w| f(w) != v) {
                return Err(Error::Invalid("function is not constant on a class".into()));
            }
            values.push(v);
        }
        Ok(ClassFunction { values })
    }

    pub fn at(&self, g: &ReflGroup, w: usize) -> &Cyclotomic {
        &self.values[g.class_of(w)]
    }

    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }

    /// ⟨χ, ψ⟩ = |G|^{-1} Σ_g χ(g) conj(ψ(g)).
    pub fn inner(&self, other: &ClassFunction, g: &ReflGroup) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(g.conductor());
        for (c, cls) in g.classes().iter().enumerate() {
            let term = &self.values[c] * &other.values[c].conj();
            acc += &term.scale(&Rational::from_int(cls.len() as i64));
        }
        acc.scale(&Rational::new(1, g.order() as i64))
    }

    /// Restriction to a subgroup built by [`ReflGroup::subgroup`].
    pub fn restrict(&self, g: &ReflGroup, sub: &ReflGroup) -> Result<ClassFunction> {
        let emb = sub.embedding().ok_or_else(|| {
            Error::Invalid("restriction needs a subgroup with an embedding".into())
        })?;
        ClassFunction::from_elements(sub, |h| self.at(g, emb[h]).clone())
    }
}

/// Ind_H^G χ(g) = |H|^{-1} Σ_{x ∈ G, x g x^{-1} ∈ H} χ(x g x^{-1}).
pub fn induce_character(
    g: &ReflGroup,
    sub: &ReflGroup,
    chi: &ClassFunction,
) -> Result<ClassFunction> {
    let emb = sub
        .embedding()
        .ok_or_else(|| Error::Invalid("induction needs a subgroup with an embedding".into()))?;
    let mut back = vec![None; g.order()];
    for (h, &w) in emb.iter().enumerate() {
        back[w] = Some(h);
    }
    let inv_h = Rational::new(1, sub.order() as i64);
    ClassFunction::from_elements(g, |w| {
        let mut acc = Cyclotomic::zero(g.conductor());
        for x in 0..g.order() {
            if let Some(h) = back[g.conjugate(x, w)] {
                acc += chi.at(sub, h);
            }
        }
        acc.scale(&inv_h)
    })
}

/// An irreducible representation given by matrices for every group element.
#[derive(Debug, Clone)]
pub struct IrrRep {
    pub label: String,
    pub dim: usize,
    /// Matrices for the group generators, in generator order.
    pub gen_images: Vec<Matrix>,
    /// Matrices for all elements, indexed like the group.
    pub matrices: Vec<Matrix>,
}

impl IrrRep {
    fn from_generators(g: &ReflGroup, label: &str, gen_images: Vec<Matrix>) -> Result<IrrRep> {
        let dim = gen_images[0].nrows();
        let mut matrices = vec![Matrix::identity(g.conductor(), dim); g.order()];
        for w in 1..g.order() {
            let word = g.word(w);
            let mut m = Matrix::identity(g.conductor(), dim);
            for c in word.chars() {
                let gi = g.generator_names().iter().position(|&x| x == c).unwrap();
                m = m.mul(&gen_images[gi]);
            }
            matrices[w] = m;
        }
        let rep = IrrRep {
            label: label.to_string(),
            dim,
            gen_images,
            matrices,
        };
        rep.check_homomorphism(g)?;
        Ok(rep)
    }

    pub fn check_homomorphism(&self, g: &ReflGroup) -> Result<()> {
        for &s in g.generators() {
            for w in 0..g.order() {
                if self.matrices[w].mul(&self.matrices[s]) != self.matrices[g.mul(w, s)] {
                    return Err(Error::Invariant(format!(
                        "representation {} violates a group relation",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn character(&self, g: &ReflGroup) -> ClassFunction {
        ClassFunction::from_elements(g, |w| self.matrices[w].trace())
            .expect("characters are class functions")
    }
}

fn scalar(c: Cyclotomic) -> Matrix {
    Matrix::from_rows(vec![vec![c]], 1)
}

fn cyclic_irreps(g: &ReflGroup, order: u32, generator: usize) -> Result<Vec<IrrRep>> {
    // element generator^j acts by ζ^{jk} in χ_k
    let n = g.conductor();
    let mut power_of = vec![0u32; g.order()];
    let mut cur = 0usize;
    for j in 0..order {
        power_of[cur] = j;
        cur = g.mul(cur, generator);
    }
    let mut out = Vec::new();
    for k in 0..order {
        let label = match (order, k) {
            (_, 0) => "triv".to_string(),
            (2, 1) => "sign".to_string(),
            _ => format!("chi{k}"),
        };
        let gens: Vec<Matrix> = g
            .generators()
            .iter()
            .map(|&s| {
                let e = (power_of[s] * k) % order;
                if order <= 2 {
                    // ±1 lives in every conductor
                    Ok(scalar(Cyclotomic::from_int(n, if e == 0 { 1 } else { -1 })))
                } else {
                    Cyclotomic::root_of_unity(n, order, e as i64).map(scalar)
                }
            })
            .collect::<Result<_>>()?;
        out.push(IrrRep::from_generators(g, &label, gens)?);
    }
    Ok(out)
}

fn dihedral_irreps(g: &ReflGroup, m: u32) -> Result<Vec<IrrRep>> {
    let n = g.conductor();
    let one = || Cyclotomic::one(n);
    let neg = || Cyclotomic::from_int(n, -1);
    let mut out = vec![
        IrrRep::from_generators(g, "triv", vec![scalar(one()), scalar(one())])?,
        IrrRep::from_generators(g, "sign", vec![scalar(one()), scalar(neg())])?,
    ];
    if m.is_multiple_of(2) {
        out.push(IrrRep::from_generators(
            g,
            "eps1",
            vec![scalar(neg()), scalar(one())],
        )?);
        out.push(IrrRep::from_generators(
            g,
            "eps2",
            vec![scalar(neg()), scalar(neg())],
        )?);
    }
    for j in 1..=((m - 1) / 2) {
        let z = Cyclotomic::root_of_unity(n, m, j as i64)?;
        let zi = Cyclotomic::root_of_unity(n, m, -(j as i64))?;
        let o = Cyclotomic::zero(n);
        let a = Matrix::from_rows(vec![vec![z, o.clone()], vec![o.clone(), zi]], 2);
        let b = Matrix::from_rows(vec![vec![o.clone(), one()], vec![one(), o]], 2);
        out.push(IrrRep::from_generators(g, &format!("rho{j}"), vec![a, b])?);
    }
    Ok(out)
}

/// Irreducible representations, for cyclic groups (any presentation) and for
/// the built-in dihedral family.
pub fn irreps(g: &ReflGroup) -> Result<Vec<IrrRep>> {
    match g.family() {
        Family::Dihedral(m) => dihedral_irreps(g, m),
        _ => {
            let size = g.order() as u32;
            match (0..g.order()).find(|&w| g.element_order(w) == size) {
                Some(gen) => {
                    if size > 2 && !g.conductor().is_multiple_of(size) {
                        return Err(Error::ConductorMismatch(size, g.conductor()));
                    }
                    cyclic_irreps(g, size, gen)
                }
                None => Err(Error::Unsupported(format!(
                    "irreducible representations of {} (only cyclic and dihedral groups)",
                    g.name()
                ))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn groups() -> Vec<ReflGroup> {
        vec![
            ReflGroup::cyclic(2, 2).unwrap(),
            ReflGroup::cyclic(3, 3).unwrap(),
            ReflGroup::dihedral(3, 3).unwrap(),
            ReflGroup::dihedral(4, 4).unwrap(),
            ReflGroup::dihedral(5, 5).unwrap(),
            ReflGroup::dihedral(6, 6).unwrap(),
        ]
    }

    #[test]
    fn irreps_are_orthonormal_and_complete() {
        for g in groups() {
            let reps = irreps(&g).unwrap();
            let sum: usize = reps.iter().map(|r| r.dim * r.dim).sum();
            assert_eq!(sum, g.order(), "{}", g.name());
            assert_eq!(reps.len(), g.classes().len());
            let chars: Vec<ClassFunction> = reps.iter().map(|r| r.character(&g)).collect();
            for (i, a) in chars.iter().enumerate() {
                for (j, b) in chars.iter().enumerate() {
                    let ip = a.inner(b, &g);
                    assert_eq!(ip.is_one(), i == j);
                    assert_eq!(ip.is_zero(), i != j);
                }
            }
        }
    }

    #[test]
    fn induction_degrees() {
        let g = ReflGroup::dihedral(6, 6).unwrap();
        let triv_sub = g.subgroup(&[0], "1").unwrap();
        let one = ClassFunction::from_elements(&triv_sub, |_| Cyclotomic::one(6)).unwrap();
        let reg = induce_character(&g, &triv_sub, &one).unwrap();
        assert_eq!(reg.degree(), &Cyclotomic::from_int(6, 12));
        for w in 1..g.order() {
            assert!(reg.at(&g, w).is_zero());
        }
        let b = g.parse_element("b").unwrap();
        let sb = g.subgroup(&[0, b], "<b>").unwrap();
        let t = ClassFunction::from_elements(&sb, |_| Cyclotomic::one(6)).unwrap();
        assert_eq!(
            induce_character(&g, &sb, &t).unwrap().degree(),
            &Cyclotomic::from_int(6, 6)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn frobenius_reciprocity(i in 0usize..6, j in 0usize..2, m in 3u32..7) {
            let g = ReflGroup::dihedral(m, m).unwrap();
            let b = g.parse_element("b").unwrap();
            let sb = g.subgroup(&[0, b], "<b>").unwrap();
            let reps = irreps(&g).unwrap();
            let sub_reps = irreps(&sb).unwrap();
            let psi = reps[i % reps.len()].character(&g);
            let chi = sub_reps[j].character(&sb);
            let lhs = induce_character(&g, &sb, &chi).unwrap().inner(&psi, &g);
            let rhs = chi.inner(&psi.restrict(&g, &sb).unwrap(), &sb);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
