//! Finite complex reflection groups realised as explicit matrix groups on
//! `h = ℂ^n` over a cyclotomic field.
//!
//! Elements act on `h` by their matrices `M_w` (coordinates in the basis
//! `y_1, …, y_n`) and on `h*` by the contragredient `(M_w^{-1})^T`
//! (coordinates in the dual basis `x_1, …, x_n`).

pub mod characters;
pub mod parabolic;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exact::{Cyclotomic, Matrix};

pub use characters::{induce_character, irreps, ClassFunction, IrrRep};
pub use parabolic::{parabolic_classes, stabilizer, Parabolic, ParabolicClass, ParabolicPoset};

pub const DEFAULT_BOUND: usize = 10_000;
const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cyclic(u32),
    Dihedral(u32),
    Custom,
}

#[derive(Debug, Clone)]
pub struct Reflection {
    pub elem: usize,
    /// α_s in x-coordinates.
    pub alpha: Vec<Cyclotomic>,
    /// α_s^∨ in y-coordinates.
    pub alpha_check: Vec<Cyclotomic>,
    /// Nontrivial eigenvalue of s on h* (the eigenvalue on α_s).
    pub lambda: Cyclotomic,
    /// Index of the reflection conjugacy class.
    pub cls: usize,
}

#[derive(Debug)]
pub struct ReflGroup {
    name: String,
    family: Family,
    n: usize,
    conductor: u32,
    elements: Vec<Matrix>,
    dual: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
    table: Option<Vec<u32>>,
    inverse: Vec<usize>,
    orders: Vec<u32>,
    words: Vec<String>,
    gen_names: Vec<char>,
    generators: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    reflections: Vec<Reflection>,
    refl_of: Vec<Option<usize>>,
    refl_classes: Vec<Vec<usize>>,
    /// For subgroups: element index in the parent group.
    embedding: Option<Vec<usize>>,
    parabolics: OnceLock<ParabolicPoset>,
}

fn letters() -> impl Iterator<Item = char> {
    "abcdefghijklmnopqrstuvwxyz".chars()
}

/// Compresses runs in a word: `aab` ↦ `a^2b`. The identity is `e`.
pub fn compress_word(w: &str) -> String {
    if w.is_empty() {
        return "e".into();
    }
    let mut out = String::new();
    let chars: Vec<char> = w.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let mut j = i;
        while j < chars.len() && chars[j] == chars[i] {
            j += 1;
        }
        out.push(chars[i]);
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    out
}

impl ReflGroup {
    /// Closes the generators under multiplication. Generator `i` is named by the
    /// i-th entry of `names` (single letters).
    pub fn build(
        name: &str,
        generators: Vec<Matrix>,
        names: Option<Vec<char>>,
        bound: usize,
    ) -> Result<ReflGroup> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Invalid("a group needs at least one generator".into()))?;
        let n = first.nrows();
        let conductor = first.conductor();
        if n == 0 || n > 4 {
            return Err(Error::Unsupported(format!("rank {n} (supported: 1 to 4)")));
        }
        for g in &generators {
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::Arity("generator matrices of different sizes".into()));
            }
            if g.conductor() != conductor {
                return Err(Error::ConductorMismatch(g.conductor(), conductor));
            }
            if g.det().is_zero() {
                return Err(Error::Invalid("singular generator matrix".into()));
            }
        }
        let gen_names: Vec<char> =
            names.unwrap_or_else(|| letters().take(generators.len()).collect());
        if gen_names.len() != generators.len() {
            return Err(Error::Arity("one name per generator".into()));
        }
        let id = Matrix::identity(conductor, n);
        let mut elements = vec![id.clone()];
        let mut words = vec![String::new()];
        let mut index: HashMap<Matrix, usize> = HashMap::from([(id, 0)]);
        let mut gen_idx = vec![usize::MAX; generators.len()];
        let mut head = 0;
        // breadth-first search gives shortlex-minimal words
        while head < elements.len() {
            for (gi, g) in generators.iter().enumerate() {
                let prod = elements[head].mul(g);
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= bound {
                            return Err(Error::Budget(format!(
                                "group closure exceeds {bound} elements"
                            )));
                        }
                        let i = elements.len();
                        index.insert(prod.clone(), i);
                        elements.push(prod);
                        words.push(format!("{}{}", words[head], gen_names[gi]));
                        i
                    }
                };
                if head == 0 {
                    gen_idx[gi] = idx;
                }
            }
            head += 1;
        }
        let size = elements.len();
        let lookup = |m: &Matrix| -> usize { *index.get(m).expect("closure is a group") };
        let table = if size <= TABLE_LIMIT {
            let mut t = vec![0u32; size * size];
            for i in 0..size {
                for j in 0..size {
                    t[i * size + j] = lookup(&elements[i].mul(&elements[j])) as u32;
                }
            }
            Some(t)
        } else {
            None
        };
        let mut g = ReflGroup {
            name: name.to_string(),
            family: Family::Custom,
            n,
            conductor,
            dual: Vec::new(),
            inverse: Vec::new(),
            orders: Vec::new(),
            elements,
            index,
            table,
            words,
            gen_names,
            generators: gen_idx,
            classes: Vec::new(),
            class_of: Vec::new(),
            reflections: Vec::new(),
            refl_of: Vec::new(),
            refl_classes: Vec::new(),
            embedding: None,
            parabolics: OnceLock::new(),
        };
        g.finish()?;
        Ok(g)
    }

    fn finish(&mut self) -> Result<()> {
        let size = self.elements.len();
        self.inverse = (0..size)
            .map(|i| {
                (0..size)
                    .find(|&j| self.mul(i, j) == 0)
                    .expect("every element has an inverse")
            })
            .collect();
        self.dual = (0..size)
            .map(|i| self.elements[self.inverse[i]].transpose())
            .collect();
        self.orders = (0..size)
            .map(|i| {
                let mut k = 1;
                let mut cur = i;
                while cur != 0 {
                    cur = self.mul(cur, i);
                    k += 1;
                }
                k
            })
            .collect();
        // conjugacy classes in order of first element
        let mut class_of = vec![usize::MAX; size];
        let mut classes = Vec::new();
        for x in 0..size {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..size).map(|g| self.conjugate(g, x)).collect();
            cls.sort();
            cls.dedup();
            for &y in &cls {
                class_of[y] = classes.len();
            }
            classes.push(cls);
        }
        self.classes = classes;
        self.class_of = class_of;
        self.find_reflections()
    }

    fn find_reflections(&mut self) -> Result<()> {
        let n = self.n;
        let cond = self.conductor;
        let id = Matrix::identity(cond, n);
        let mut refl_of = vec![None; self.elements.len()];
        let mut raw = Vec::new();
        for (w, m) in self.elements.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let diff = m.sub(&id);
            if diff.rank() != 1 {
                continue;
            }
            let ddiff = self.dual[w].sub(&id);
            let col = (0..n)
                .find(|&j| ddiff.column(j).iter().any(|c| !c.is_zero()))
                .expect("rank one");
            let alpha = ddiff.column(col);
            let hcol = (0..n)
                .find(|&j| diff.column(j).iter().any(|c| !c.is_zero()))
                .expect("rank one");
            let v = diff.column(hcol);
            let pairing = dot(&alpha, &v);
            if pairing.is_zero() {
                return Err(Error::Unsupported(format!(
                    "element {} is a transvection, not a reflection",
                    self.words[w]
                )));
            }
            let scale = Cyclotomic::from_int(cond, 2).checked_div(&pairing)?;
            let alpha_check: Vec<Cyclotomic> = v.iter().map(|c| c * &scale).collect();
            let lambda = self.dual[w].det();
            refl_of[w] = Some(raw.len());
            raw.push(Reflection {
                elem: w,
                alpha,
                alpha_check,
                lambda,
                cls: 0,
            });
        }
        // reflection classes, ordered by smallest member
        let mut refl_classes: Vec<Vec<usize>> = Vec::new();
        let mut cls_of_class: HashMap<usize, usize> = HashMap::new();
        for r in raw.iter_mut() {
            let c = self.class_of[r.elem];
            let id = *cls_of_class.entry(c).or_insert_with(|| {
                refl_classes.push(Vec::new());
                refl_classes.len() - 1
            });
            r.cls = id;
            refl_classes[id].push(r.elem);
        }
        self.reflections = raw;
        self.refl_of = refl_of;
        self.refl_classes = refl_classes;
        Ok(())
    }

    /// Cyclic group ℤ/ℓ acting on ℂ by ζ_ℓ, realised over ℚ(ζ_N) with ℓ | N.
    pub fn cyclic(l: u32, conductor: u32) -> Result<ReflGroup> {
        if l < 2 {
            return Err(Error::Invalid("cyclic group needs order at least 2".into()));
        }
        let z = Cyclotomic::root_of_unity(conductor, l, 1)?;
        let gen = Matrix::from_rows(vec![vec![z]], 1);
        let mut g = ReflGroup::build(&format!("Z/{l}"), vec![gen], Some(vec!['s']), DEFAULT_BOUND)?;
        g.family = Family::Cyclic(l);
        Ok(g)
    }

    /// Dihedral group I₂(m) in the complex basis where the rotation is
    /// `a = diag(ζ_m, ζ_m^{-1})` and `b` swaps the coordinates.
    pub fn dihedral(m: u32, conductor: u32) -> Result<ReflGroup> {
        if m < 2 {
            return Err(Error::Invalid("dihedral group needs m at least 2".into()));
        }
        let z = Cyclotomic::root_of_unity(conductor, m, 1)?;
        let zi = Cyclotomic::root_of_unity(conductor, m, -1)?;
        let o = Cyclotomic::zero(conductor);
        let one = Cyclotomic::one(conductor);
        let a = Matrix::from_rows(vec![vec![z, o.clone()], vec![o.clone(), zi]], 2);
        let b = Matrix::from_rows(vec![vec![o.clone(), one.clone()], vec![one, o]], 2);
        let mut g = ReflGroup::build(
            &format!("I2({m})"),
            vec![a, b],
            Some(vec!['a', 'b']),
            DEFAULT_BOUND,
        )?;
        g.family = Family::Dihedral(m);
        Ok(g)
    }

    /// The subgroup with the given member set, generated by a greedily chosen
    /// subset of its members. Indices of the result map back through
    /// [`ReflGroup::embedding`].
    pub fn subgroup(&self, members: &[usize], name: &str) -> Result<ReflGroup> {
        let mut members = members.to_vec();
        members.sort();
        members.dedup();
        // prefer reflections as generators, then the remaining members, in index order
        let mut order: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&w| self.is_reflection(w))
            .collect();
        order.extend(
            members
                .iter()
                .copied()
                .filter(|&w| w != 0 && !self.is_reflection(w)),
        );
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for w in order {
            if span.contains(&w) {
                continue;
            }
            gens.push(w);
            span = self.closure(&gens);
            if span.len() == members.len() {
                break;
            }
        }
        if span.len() != members.len() || span.iter().any(|w| !members.contains(w)) {
            return Err(Error::Invalid("member set is not a subgroup".into()));
        }
        if gens.is_empty() {
            // trivial subgroup: use the identity as a formal generator
            gens.push(0);
        }
        // keep single-letter parent names where possible
        let mut used = Vec::new();
        let mut names = Vec::new();
        for &w in &gens {
            let word = &self.words[w];
            let c = if word.chars().count() == 1 && !used.contains(&word.chars().next().unwrap()) {
                word.chars().next().unwrap()
            } else {
                "rstuvpq"
                    .chars()
                    .chain(letters())
                    .find(|c| !used.contains(c) && !self.gen_names.contains(c))
                    .unwrap()
            };
            used.push(c);
            names.push(c);
        }
        let mats: Vec<Matrix> = gens.iter().map(|&w| self.elements[w].clone()).collect();
        let mut sub = ReflGroup::build(name, mats, Some(names), DEFAULT_BOUND)?;
        let emb: Vec<usize> = sub.elements.iter().map(|m| self.index[m]).collect();
        sub.embedding = Some(emb);
        Ok(sub)
    }

    /// The group generated by `images[i]` in place of generator `i`, whose
    /// element `k` is required to correspond to element `k` of `self`
    /// (used for faithful restrictions to invariant subspaces).
    pub fn with_generator_images(&self, name: &str, images: Vec<Matrix>) -> Result<ReflGroup> {
        let g = ReflGroup::build(name, images, Some(self.gen_names.clone()), DEFAULT_BOUND)?;
        if g.order() != self.order() || g.words != self.words {
            return Err(Error::Invalid(
                "generator images do not give a faithful copy of the group".into(),
            ));
        }
        Ok(g)
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = vec![0usize];
        let mut head = 0;
        while head < set.len() {
            for &g in gens {
                let p = self.mul(set[head], g);
                if !set.contains(&p) {
                    set.push(p);
                }
            }
            head += 1;
        }
        set.sort();
        set
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix(&self, w: usize) -> &Matrix {
        &self.elements[w]
    }

    /// Matrix of `w` on h* in x-coordinates: column j is `w·x_j`.
    pub fn dual_matrix(&self, w: usize) -> &Matrix {
        &self.dual[w]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.index[&self.elements[a].mul(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g x g^{-1}`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        let gi = self.inverse.get(g).copied().unwrap_or_else(|| {
            (0..self.elements.len())
                .find(|&j| self.mul(g, j) == 0)
                .unwrap()
        });
        self.mul(self.mul(g, x), gi)
    }

    pub fn element_order(&self, w: usize) -> u32 {
        self.orders[w]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Shortlex-minimal word (empty for the identity).
    pub fn word(&self, w: usize) -> &str {
        &self.words[w]
    }

    /// Readable label such as `a^2b`, or `e`.
    pub fn label(&self, w: usize) -> String {
        compress_word(&self.words[w])
    }

    pub fn generator_names(&self) -> &[char] {
        &self.gen_names
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, w: usize) -> usize {
        self.class_of[w]
    }

    pub fn reflections(&self) -> &[Reflection] {
        &self.reflections
    }

    pub fn reflection_of(&self, w: usize) -> Option<&Reflection> {
        self.refl_of[w].map(|i| &self.reflections[i])
    }

    pub fn is_reflection(&self, w: usize) -> bool {
        self.refl_of[w].is_some()
    }

    /// Element lists of the reflection conjugacy classes.
    pub fn reflection_classes(&self) -> &[Vec<usize>] {
        &self.refl_classes
    }

    /// Label of a reflection class: the word of its shortlex-smallest member.
    pub fn reflection_class_label(&self, cls: usize) -> String {
        self.label(self.refl_classes[cls][0])
    }

    pub fn reflection_class_by_label(&self, label: &str) -> Option<usize> {
        (0..self.refl_classes.len()).find(|&c| {
            self.reflection_class_label(c) == label || self.words[self.refl_classes[c][0]] == label
        })
    }

    pub fn embedding(&self) -> Option<&[usize]> {
        self.embedding.as_deref()
    }

    /// Image of a vector of h under w.
    pub fn act_h(&self, w: usize, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        self.elements[w].mul_vec(v)
    }

    /// Image of a linear form (x-coordinates) under w.
    pub fn act_hstar(&self, w: usize, xi: &[Cyclotomic]) -> Vec<Cyclotomic> {
        self.dual[w].mul_vec(xi)
    }

    /// Parses an element reference: `w3` (index), `e`/`1`, or a word such as
    /// `abab` or `a^2b` in the generator letters.
    pub fn parse_element(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        if s == "e" || s == "1" || s.is_empty() {
            return Ok(0);
        }
        if let Some(rest) = s.strip_prefix('w') {
            if let Ok(i) = rest.parse::<usize>() {
                return if i < self.order() {
                    Ok(i)
                } else {
                    Err(Error::Parse(format!("no group element w{i}")))
                };
            }
        }
        let chars: Vec<char> = s.chars().collect();
        let mut acc = 0usize;
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let gi = self
                .gen_names
                .iter()
                .position(|&g| g == c)
                .ok_or_else(|| Error::Parse(format!("unknown generator {c:?} in [{s}]")))?;
            i += 1;
            let mut e = 1u32;
            if i < chars.len() && chars[i] == '^' {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                e = chars[start..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in [{s}]")))?;
                i = j;
            }
            for _ in 0..e {
                acc = self.mul(acc, self.generators[gi]);
            }
        }
        Ok(acc)
    }

    pub(crate) fn parabolic_cache(&self) -> &OnceLock<ParabolicPoset> {
        &self.parabolics
    }
}

pub fn dot(a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
    let cond = a.first().map(|c| c.conductor()).unwrap_or(1);
    let mut acc = Cyclotomic::zero(cond);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// `build_group` with the default closure bound.
pub fn build_group(name: &str, generators: Vec<Matrix>) -> Result<Arc<ReflGroup>> {
    Ok(Arc::new(ReflGroup::build(
        name,
        generators,
        None,
        DEFAULT_BOUND,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_has_one_reflection() {
        let g = ReflGroup::cyclic(2, 2).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.reflections().len(), 1);
        let r = &g.reflections()[0];
        assert_eq!(dot(&r.alpha, &r.alpha_check), Cyclotomic::from_int(2, 2));
        assert_eq!(r.lambda, Cyclotomic::from_int(2, -1));
    }

    #[test]
    fn dihedral_counts() {
        let g4 = ReflGroup::dihedral(4, 4).unwrap();
        assert_eq!(g4.order(), 8);
        assert_eq!(g4.reflections().len(), 4);
        assert_eq!(g4.reflection_classes().len(), 2);
        assert_eq!(g4.reflection_class_label(0), "b");
        assert_eq!(g4.reflection_class_label(1), "ab");
        let g5 = ReflGroup::dihedral(5, 5).unwrap();
        assert_eq!(g5.reflections().len(), 5);
        assert_eq!(g5.reflection_classes().len(), 1);
    }

    #[test]
    fn reflection_normalisation_and_eigenvalue() {
        for g in [
            ReflGroup::dihedral(4, 4).unwrap(),
            ReflGroup::dihedral(3, 3).unwrap(),
            ReflGroup::cyclic(3, 3).unwrap(),
            ReflGroup::cyclic(5, 5).unwrap(),
        ] {
            for r in g.reflections() {
                assert_eq!(
                    dot(&r.alpha, &r.alpha_check),
                    Cyclotomic::from_int(g.conductor(), 2)
                );
                // s·α^∨ = λ^{-1} α^∨ on h, s·α = λ α on h*
                let lhs = g.act_h(r.elem, &r.alpha_check);
                let li = r.lambda.inv().unwrap();
                let rhs: Vec<_> = r.alpha_check.iter().map(|c| c * &li).collect();
                assert_eq!(lhs, rhs);
                let lhs = g.act_hstar(r.elem, &r.alpha);
                let rhs: Vec<_> = r.alpha.iter().map(|c| c * &r.lambda).collect();
                assert_eq!(lhs, rhs);
                assert!(!r.lambda.is_one());
            }
        }
    }

    #[test]
    fn parse_elements() {
        let g = ReflGroup::dihedral(4, 4).unwrap();
        let ab = g.parse_element("ab").unwrap();
        assert_eq!(g.word(ab), "ab");
        assert_eq!(g.parse_element("a^4").unwrap(), 0);
        assert_eq!(g.parse_element(&format!("w{ab}")).unwrap(), ab);
        assert!(g.parse_element("c").is_err());
    }

    #[test]
    fn subgroup_embedding() {
        let g = ReflGroup::dihedral(4, 4).unwrap();
        let b = g.parse_element("b").unwrap();
        let sub = g.subgroup(&[0, b], "<b>").unwrap();
        assert_eq!(sub.order(), 2);
        assert_eq!(sub.embedding().unwrap(), &[0, b]);
        assert_eq!(sub.generator_names(), &['b']);
        assert!(g
            .subgroup(&[0, g.parse_element("a").unwrap()], "bad")
            .is_err());
    }
}
