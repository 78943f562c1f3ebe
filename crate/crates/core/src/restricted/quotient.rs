//! Centre presentations, points `χ` of the Calogero–Moser space, and the
//! finite quotients `H_{c,χ} = H_{0,c} / ⟨ker χ⟩`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use super::RestrictedAlgebra;
use crate::error::{Error, Result};
use crate::exact::linalg::SpanBasis;
use crate::exact::poly::monomials_of_degree;
use crate::exact::{Cyclotomic, IdealBasis, Matrix, Mono, MultiPoly};
use crate::invariants::{fundamental_invariants, Space};
use crate::rca::{
    find_euler, poisson_bracket, CentralSet, Cherednik, Key, PBWElement, Param, TMode,
};
use crate::refl::{Family, ReflGroup};

/// Generators of the centre `Z_c` of `H_{0,c}`, their relations, and the
/// Poisson brackets between them written back in the generators.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub generators: CentralSet,
    pub vars: Arc<Vec<String>>,
    pub relations: IdealBasis,
    /// `brackets[i][j] = {z_i, z_j}` as a polynomial in the generators.
    pub brackets: Vec<Vec<MultiPoly>>,
    /// `(deg x − deg y, filtration degree)` of each generator.
    degrees: Vec<(i64, u32)>,
}

fn filtration_degree(e: &PBWElement) -> u32 {
    e.terms()
        .keys()
        .map(|k| k.x_degree() + k.y_degree())
        .max()
        .unwrap_or(0)
}

fn generator_degrees(gens: &CentralSet) -> Result<Vec<(i64, u32)>> {
    gens.iter()
        .map(|(name, z)| {
            let g = z.grading().ok_or_else(|| {
                Error::Invalid(format!(
                    "generator {name} is not homogeneous for the Euler grading"
                ))
            })?;
            Ok((g, filtration_degree(z)))
        })
        .collect()
}

/// Exponent vectors `e` with `Σ e_i g_i = grading` and `Σ e_i d_i ≤ total`.
fn candidate_monomials(degrees: &[(i64, u32)], grading: i64, total: u32) -> Vec<Mono> {
    let n = degrees.len();
    let mut out = Vec::new();
    for d in 0..=total {
        for m in monomials_of_degree(n, d) {
            let (mut g, mut t) = (0i64, 0u32);
            for (i, (gi, di)) in degrees.iter().enumerate() {
                let e = m.0[i] as i64;
                g += e * gi;
                t += e as u32 * di;
            }
            if g == grading && t <= total {
                out.push(m);
            }
        }
    }
    out
}

fn coordinates(elems: &[PBWElement], cond: u32) -> Vec<Vec<Cyclotomic>> {
    let mut index: BTreeMap<Key, usize> = BTreeMap::new();
    for e in elems {
        for k in e.terms().keys() {
            let n = index.len();
            index.entry(*k).or_insert(n);
        }
    }
    let mut rows = vec![vec![Cyclotomic::zero(cond); elems.len()]; index.len()];
    for (j, e) in elems.iter().enumerate() {
        for (k, c) in e.terms() {
            rows[index[k]][j] = c.at_zero();
        }
    }
    rows
}

impl Presentation {
    fn monomial_value(&self, m: &Mono, cache: &mut HashMap<Mono, PBWElement>) -> PBWElement {
        if let Some(e) = cache.get(m) {
            return e.clone();
        }
        let alg = self.generators.elements[0].algebra().clone();
        let mut e = alg.one();
        for (i, z) in self.generators.elements.iter().enumerate() {
            for _ in 0..m.0[i] {
                e = (&e * z).at_t_zero();
            }
        }
        cache.insert(*m, e.clone());
        e
    }

    fn express_with(&self, z: &PBWElement, allowed: impl Fn(&Mono) -> bool) -> Result<MultiPoly> {
        let z = z.at_t_zero();
        let cond = z.algebra().conductor();
        if z.is_zero() {
            return Ok(MultiPoly::zero(&self.vars, cond));
        }
        let grading = z.grading().ok_or_else(|| {
            Error::Invalid(format!("{z} is not homogeneous for the Euler grading"))
        })?;
        let cands: Vec<Mono> = candidate_monomials(&self.degrees, grading, filtration_degree(&z))
            .into_iter()
            .filter(|m| allowed(m))
            .collect();
        let mut cache = HashMap::new();
        let mut elems: Vec<PBWElement> = cands
            .iter()
            .map(|m| self.monomial_value(m, &mut cache))
            .collect();
        elems.push(z.clone());
        let mut rows = coordinates(&elems, cond);
        let b: Vec<Cyclotomic> = rows.iter_mut().map(|r| r.pop().unwrap()).collect();
        let sol = Matrix::with_conductor(rows, cands.len(), cond)
            .solve(&b)
            .map_err(|_| {
                Error::Inconsistent(format!("{z} is not a polynomial in the centre generators"))
            })?;
        let mut p = MultiPoly::zero(&self.vars, cond);
        for (m, c) in cands.iter().zip(sol) {
            p.add_term(*m, c);
        }
        Ok(p)
    }

    /// Writes a central element as the normal form of a polynomial in the generators.
    pub fn express(&self, z: &PBWElement) -> Result<MultiPoly> {
        self.express_with(z, |m| self.relations.is_standard(m))
    }

    /// Evaluates a polynomial in the generators back in `H_{0,c}`.
    pub fn evaluate(&self, p: &MultiPoly) -> PBWElement {
        let alg = self.generators.elements[0].algebra().clone();
        let mut cache = HashMap::new();
        let mut e = alg.zero();
        for (m, c) in p.terms() {
            e = &e + &self.monomial_value(m, &mut cache).scale(c);
        }
        e
    }

    /// Builds a presentation from certified central generators and relation
    /// polynomials over their names; brackets are computed.
    pub fn new(generators: CentralSet, relations: Vec<MultiPoly>) -> Result<Presentation> {
        if generators.is_empty() {
            return Err(Error::Invalid(
                "a presentation needs at least one generator".into(),
            ));
        }
        let alg = generators.elements[0].algebra().clone();
        if alg.mode() != TMode::Generic {
            return Err(Error::Unsupported(
                "presentations need t as a variable for brackets".into(),
            ));
        }
        let vars = Arc::new(generators.names.clone());
        let cond = alg.conductor();
        let relations: Vec<MultiPoly> = relations.into_iter().map(|r| r.with_vars(&vars)).collect();
        let ideal = if relations.is_empty() {
            IdealBasis::new(vec![MultiPoly::zero(&vars, cond)])?
        } else {
            IdealBasis::new(relations)?
        };
        let mut pres = Presentation {
            degrees: generator_degrees(&generators)?,
            generators,
            vars,
            relations: ideal,
            brackets: Vec::new(),
        };
        for r in pres.relations.generators().to_vec() {
            if !pres.evaluate(&r).at_t_zero().is_zero() {
                return Err(Error::Inconsistent(format!(
                    "relation {r} does not hold in the centre"
                )));
            }
        }
        pres.brackets = pres.bracket_table()?;
        Ok(pres)
    }

    fn bracket_table(&self) -> Result<Vec<Vec<MultiPoly>>> {
        let n = self.generators.len();
        let cond = self.relations.conductor();
        let mut table = vec![vec![MultiPoly::zero(&self.vars, cond); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b =
                    poisson_bracket(&self.generators.elements[i], &self.generators.elements[j])?;
                let p = self.express(&b)?;
                table[j][i] = p.neg();
                table[i][j] = p;
            }
        }
        Ok(table)
    }

    pub fn names(&self) -> &[String] {
        &self.generators.names
    }

    /// Values of `χ` on the fundamental invariants of `h` and of `h*`: the
    /// point `Υ(χ)` of `h/W × h*/W`.
    pub fn upsilon(&self, chi: &PointChi) -> Result<(Vec<Cyclotomic>, Vec<Cyclotomic>)> {
        let alg = self.generators.elements[0].algebra().clone();
        let g = alg.group().clone();
        let mut sides = Vec::new();
        for space in [Space::H, Space::HStar] {
            let inv = fundamental_invariants(&g, space)?;
            let mut vals = Vec::new();
            for f in &inv.gens {
                let e = match space {
                    Space::H => alg.from_x_poly(f),
                    _ => alg.from_y_poly(f),
                };
                vals.push(chi.eval(&self.express(&e)?)?);
            }
            sides.push(vals);
        }
        let y = sides.pop().unwrap();
        Ok((sides.pop().unwrap(), y))
    }
}

/// Built-in presentation for `ℤ/ℓ`: `u = α^ℓ`, `v = (α^∨)^ℓ` and `z0`, the
/// Euler element rescaled to contain `α α^∨` with coefficient one. The single
/// relation `uv = f(z0)` is found by the PBW engine.
pub fn rank_one_presentation(g: &Arc<ReflGroup>, c: &Param) -> Result<Presentation> {
    if g.rank() != 1 || !matches!(g.family(), Family::Cyclic(_)) {
        return Err(Error::Unsupported(format!(
            "built-in centre presentations exist for cyclic groups only, not {}",
            g.name()
        )));
    }
    let alg = Cherednik::new(g.clone(), c.clone())?;
    let l = g.order() as u32;
    let r = &g.reflections()[0];
    let ax = alg.x_linear(&r.alpha);
    let ay = alg.y_linear(&r.alpha_check);
    let u = ax.pow(l).at_t_zero();
    let v = ay.pow(l).at_t_zero();
    let xy = (&ax * &ay).at_t_zero();
    let eu = find_euler(&alg)?;
    // eu = μ·xy + (group part); rescale so the xy-part matches α α^∨
    let key = Key::new(Mono::var(0), 0, Mono::var(0));
    let mu = eu.coeff(&key).at_zero();
    let z0 = eu.scale(&xy.coeff(&key).at_zero().checked_div(&mu)?);
    let mut gens = CentralSet::new();
    gens.push("u", u.clone())?;
    gens.push("v", v.clone())?;
    gens.push("z0", z0)?;
    let vars = Arc::new(gens.names.clone());
    let cond = alg.conductor();
    let mut pres = Presentation {
        degrees: generator_degrees(&gens)?,
        generators: gens,
        vars: vars.clone(),
        relations: IdealBasis::new(vec![MultiPoly::zero(&vars, cond)])?,
        brackets: Vec::new(),
    };
    let uv = (&u * &v).at_t_zero();
    // before the relation is known, normal monomials are those not divisible by uv
    let rhs = pres.express_with(&uv, |m| m.0[0] == 0 || m.0[1] == 0)?;
    let uv_mono = MultiPoly::monomial(&vars, Mono::from_slice(&[1, 1, 0]), Cyclotomic::one(cond));
    pres.relations = IdealBasis::new(vec![uv_mono.sub(&rhs)])?;
    pres.brackets = pres.bracket_table()?;
    Ok(pres)
}

/// An algebra map `χ : Z_c → K`, given by its values on the generators of a
/// presentation and checked against the relations.
#[derive(Debug, Clone, Serialize)]
pub struct PointChi {
    pub names: Vec<String>,
    #[serde(serialize_with = "crate::restricted::quotient::ser_values")]
    pub values: Vec<Cyclotomic>,
}

fn ser_values<S: serde::Serializer>(
    v: &[Cyclotomic],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl PointChi {
    pub fn new(pres: &Presentation, values: Vec<Cyclotomic>) -> Result<PointChi> {
        if values.len() != pres.generators.len() {
            return Err(Error::Arity(format!(
                "point has {} values for {} generators",
                values.len(),
                pres.generators.len()
            )));
        }
        let chi = PointChi {
            names: pres.names().to_vec(),
            values,
        };
        for r in pres.relations.generators() {
            if !chi.eval(r)?.is_zero() {
                return Err(Error::Inconsistent(format!(
                    "χ violates the relation {r} = 0"
                )));
            }
        }
        Ok(chi)
    }

    pub fn eval(&self, p: &MultiPoly) -> Result<Cyclotomic> {
        p.evaluate(&self.values)
    }
}

/// Whether `{χ}` is a zero-dimensional symplectic leaf: every bracket of
/// generators vanishes at `χ`, so `ker χ` is a Poisson ideal.
pub fn is_poisson_point(pres: &Presentation, chi: &PointChi) -> Result<bool> {
    PointChi::new(pres, chi.values.clone())?;
    for row in &pres.brackets {
        for b in row {
            if !chi.eval(b)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A finite-dimensional algebra given by structure constants.
#[derive(Debug, Clone)]
pub struct FiniteQuotient {
    /// Names of the basis vectors (images of PBW words).
    pub labels: Vec<String>,
    /// `table[a][b]` = coordinates of `e_a e_b`.
    pub table: Vec<Vec<Vec<Cyclotomic>>>,
    /// Coordinates of the identity.
    pub unit: Vec<Cyclotomic>,
    conductor: u32,
    /// The submodule quotiented out and the surviving coordinates.
    kernel: SpanBasis,
    keep: Vec<usize>,
}

/// `H_{c,χ}` realized inside `H̄` as `H̄ / Σ_i (z_i − χ(z_i)) H̄`.
pub fn point_quotient(
    h: &RestrictedAlgebra,
    pres: &Presentation,
    chi: &PointChi,
) -> Result<FiniteQuotient> {
    let chi = PointChi::new(pres, chi.values.clone())?;
    let (ux, uy) = pres.upsilon(&chi)?;
    if ux.iter().chain(&uy).any(|v| !v.is_zero()) {
        return Err(Error::Invalid(
            "Υ(χ) ≠ 0: the quotient does not factor through the restricted algebra".into(),
        ));
    }
    let cond = h.conductor();
    let d = h.dim();
    let unit = h.unit();
    let mut span = SpanBasis::new(cond, d);
    for (z, val) in pres.generators.elements.iter().zip(&chi.values) {
        let mut zv = h.reduce(z);
        for (a, b) in zv.iter_mut().zip(&unit) {
            *a -= &(b * val);
        }
        let support: Vec<(usize, Cyclotomic)> = zv
            .iter()
            .cloned()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let rows: Vec<Vec<Cyclotomic>> = crate::par::map(&(0..d).collect::<Vec<_>>(), |&k| {
            let mut out = vec![Cyclotomic::zero(cond); d];
            for (i, c) in &support {
                for (j, p) in h.mul_basis(*i, k).iter() {
                    out[*j] += &(c * p);
                }
            }
            out
        });
        for r in rows {
            span.insert(&r);
        }
    }
    let pivots = span.pivots();
    let keep: Vec<usize> = (0..d).filter(|i| !pivots.contains(i)).collect();
    let project = |v: &[Cyclotomic]| project_onto(&span, &keep, v);
    let table: Vec<Vec<Vec<Cyclotomic>>> = keep
        .iter()
        .map(|&a| {
            keep.iter()
                .map(|&b| project(&h.densify(&h.mul_basis(a, b))))
                .collect()
        })
        .collect();
    let alg = h.algebra();
    let one = crate::rca::TPoly::constant(Cyclotomic::one(cond));
    let labels = keep
        .iter()
        .map(|&i| alg.term(h.basis()[i], one.clone()).to_string())
        .collect();
    Ok(FiniteQuotient {
        labels,
        table,
        unit: project(&unit),
        conductor: cond,
        kernel: span,
        keep,
    })
}

fn project_onto(span: &SpanBasis, keep: &[usize], v: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let r = span.reduce(v);
    keep.iter().map(|&i| r[i].clone()).collect()
}

impl FiniteQuotient {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Coordinates of the image of an element of `H_{0,c}`.
    pub fn image(&self, h: &RestrictedAlgebra, e: &PBWElement) -> Vec<Cyclotomic> {
        project_onto(&self.kernel, &self.keep, &h.reduce(e))
    }

    fn zero(&self) -> Vec<Cyclotomic> {
        vec![Cyclotomic::zero(self.conductor); self.dim()]
    }

    pub fn mul(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let f = ai * bj;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o += &(&f * t);
                    }
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `a`.
    pub fn left_matrix(&self, a: &[Cyclotomic]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.conductor, n, n);
        for j in 0..n {
            let mut e = self.zero();
            e[j] = Cyclotomic::one(self.conductor);
            for (i, v) in self.mul(a, &e).into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    fn basis_vector(&self, i: usize) -> Vec<Cyclotomic> {
        let mut e = self.zero();
        e[i] = Cyclotomic::one(self.conductor);
        e
    }

    pub fn trace_form(&self) -> Matrix {
        let n = self.dim();
        let mut t = Matrix::zero(self.conductor, n, n);
        for i in 0..n {
            for j in 0..n {
                let p = &self.table[i][j];
                t.set(i, j, self.left_matrix(p).trace());
            }
        }
        t
    }

    /// Jacobson radical as the radical of the trace form.
    pub fn radical(&self) -> Vec<Vec<Cyclotomic>> {
        self.trace_form().nullspace()
    }

    fn span_of(&self, vs: impl IntoIterator<Item = Vec<Cyclotomic>>) -> SpanBasis {
        let mut s = SpanBasis::new(self.conductor, self.dim());
        for v in vs {
            s.insert(&v);
        }
        s
    }

    /// `[dim R, dim R², dim R³, …]` up to `R^k`.
    pub fn radical_power_dims(&self, k: usize) -> Vec<usize> {
        let r = self.radical();
        let mut dims = vec![r.len()];
        let mut cur = r.clone();
        for _ in 1..k {
            let prods: Vec<Vec<Cyclotomic>> = cur
                .iter()
                .flat_map(|a| r.iter().map(move |b| (a, b)))
                .map(|(a, b)| self.mul(a, b))
                .collect();
            cur = self.span_of(prods).basis();
            dims.push(cur.len());
        }
        dims
    }

    pub fn semisimple_dim(&self) -> usize {
        self.dim() - self.radical().len()
    }

    pub fn centre(&self) -> Vec<Vec<Cyclotomic>> {
        let n = self.dim();
        let mut rows = Vec::new();
        for j in 0..n {
            let e = self.basis_vector(j);
            let l = self.left_matrix(&e);
            // right multiplication by e_j as a matrix
            let mut r = Matrix::zero(self.conductor, n, n);
            for i in 0..n {
                for (k, v) in self.table[i][j].iter().enumerate() {
                    r.set(k, i, v.clone());
                }
            }
            rows.extend(l.sub(&r).into_rows());
        }
        Matrix::with_conductor(rows, n, self.conductor).nullspace()
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let (ea, eb, ec) = (
                        self.basis_vector(a),
                        self.basis_vector(b),
                        self.basis_vector(c),
                    );
                    self.mul(&self.mul(&ea, &eb), &ec) == self.mul(&ea, &self.mul(&eb, &ec))
                })
            })
        })
    }

    /// Summary used by reports.
    pub fn summary(&self) -> serde_json::Value {
        let powers = self.radical_power_dims(3);
        serde_json::json!({
            "dim": self.dim(),
            "basis": self.labels,
            "radical_dims": powers,
            "semisimple_dim": self.semisimple_dim(),
            "centre_dim": self.centre().len(),
        })
    }
}
