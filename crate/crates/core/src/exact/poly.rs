//! Sparse multivariate polynomials over ℚ(ζ_N) with a fixed variable list.
//!
//! Terms are kept in a `BTreeMap` ordered by degree-reverse-lexicographic order
//! with `x1 > x2 > … > xn`, so the last entry is the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::expr::{self, Expr};
use crate::exact::{Cyclotomic, Rational};

pub const MAX_VARS: usize = 8;

/// Exponent vector. Unused trailing slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [u16; MAX_VARS]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut m = Mono::one();
        m.0[i] = 1;
        m
    }

    pub fn from_slice(e: &[u16]) -> Self {
        let mut m = Mono::one();
        m.0[..e.len()].copy_from_slice(e);
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        m
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self | o`.
    pub fn quotient(&self, o: &Mono) -> Mono {
        let mut m = *o;
        for (a, b) in m.0.iter_mut().zip(self.0.iter()) {
            *a -= *b;
        }
        m
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = (*a).max(*b);
        }
        m
    }

    pub fn is_coprime(&self, o: &Mono) -> bool {
        self.0
            .iter()
            .zip(o.0.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..MAX_VARS).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All exponent vectors of `nvars` variables with total degree exactly `d`,
/// in increasing monomial order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = [0u16; MAX_VARS];
    fn rec(i: usize, n: usize, left: u32, cur: &mut [u16; MAX_VARS], out: &mut Vec<Mono>) {
        if i + 1 == n {
            cur[i] = left as u16;
            out.push(Mono(*cur));
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(i + 1, n, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Mono::one());
        }
        return out;
    }
    rec(0, nvars, d, &mut cur, &mut out);
    out.sort();
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    conductor: u32,
    terms: BTreeMap<Mono, Cyclotomic>,
}

impl MultiPoly {
    pub fn zero(vars: &Arc<Vec<String>>, conductor: u32) -> Self {
        assert!(vars.len() <= MAX_VARS, "too many variables");
        MultiPoly {
            vars: vars.clone(),
            conductor,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<Vec<String>>, c: Cyclotomic) -> Self {
        let mut p = Self::zero(vars, c.conductor());
        p.add_term(Mono::one(), c);
        p
    }

    pub fn one(vars: &Arc<Vec<String>>, conductor: u32) -> Self {
        Self::constant(vars, Cyclotomic::one(conductor))
    }

    pub fn var(vars: &Arc<Vec<String>>, conductor: u32, i: usize) -> Self {
        Self::monomial(vars, Mono::var(i), Cyclotomic::one(conductor))
    }

    pub fn monomial(vars: &Arc<Vec<String>>, m: Mono, c: Cyclotomic) -> Self {
        let mut p = Self::zero(vars, c.conductor());
        p.add_term(m, c);
        p
    }

    /// Linear form `Σ coeffs[i]·var_i`.
    pub fn linear(vars: &Arc<Vec<String>>, conductor: u32, coeffs: &[Cyclotomic]) -> Self {
        let mut p = Self::zero(vars, conductor);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Mono::var(i), c.clone());
        }
        p
    }

    /// Variable list `prefix1, …, prefixn`.
    pub fn names(prefix: &str, n: usize) -> Arc<Vec<String>> {
        Arc::new((1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Cyclotomic> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Mono, Cyclotomic> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Cyclotomic {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Cyclotomic::zero(self.conductor))
    }

    pub fn add_term(&mut self, m: Mono, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &Cyclotomic)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Mono::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        let mut p = Self::zero(&self.vars, self.conductor);
        for (m, c) in &self.terms {
            if m.degree() == d {
                p.terms.insert(*m, c.clone());
            }
        }
        p
    }

    /// Terms of total degree `< d`.
    pub fn truncate_degree(&self, d: u32) -> MultiPoly {
        let mut p = Self::zero(&self.vars, self.conductor);
        for (m, c) in &self.terms {
            if m.degree() < d {
                p.terms.insert(*m, c.clone());
            }
        }
        p
    }

    pub fn constant_term(&self) -> Cyclotomic {
        self.coeff(&Mono::one())
    }

    fn check_compat(&self, o: &MultiPoly) -> Result<()> {
        if self.vars.len() != o.vars.len() {
            return Err(Error::Arity(format!(
                "{} variables vs {}",
                self.vars.len(),
                o.vars.len()
            )));
        }
        if self.conductor != o.conductor {
            return Err(Error::ConductorMismatch(self.conductor, o.conductor));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.check_compat(o)?;
        Ok(self.add(o))
    }

    pub fn checked_mul(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.check_compat(o)?;
        Ok(self.mul(o))
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.vars.len(), o.vars.len());
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c.clone());
        }
        p
    }

    pub fn add_assign(&mut self, o: &MultiPoly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, -c);
        }
        p
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            conductor: self.conductor,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Cyclotomic) -> MultiPoly {
        if s.is_zero() {
            return Self::zero(&self.vars, self.conductor);
        }
        MultiPoly {
            vars: self.vars.clone(),
            conductor: self.conductor,
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, s: &Cyclotomic) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            conductor: self.conductor,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut p = Self::zero(&self.vars, self.conductor);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(&self.vars, self.conductor);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn evaluate(&self, point: &[Cyclotomic]) -> Result<Cyclotomic> {
        if point.len() != self.vars.len() {
            return Err(Error::Arity(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut acc = Cyclotomic::zero(self.conductor);
        // cache powers per variable
        let mut pows: Vec<Vec<Cyclotomic>> = point
            .iter()
            .map(|v| vec![Cyclotomic::one(self.conductor), v.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0[..self.vars.len()].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap() * &point[i];
                    pows[i].push(next);
                }
                t = &t * &pows[i][e as usize];
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Ring homomorphism sending variable `i` to `images[i]`; the images may
    /// live in a different polynomial ring.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.vars.len() {
            return Err(Error::Arity(format!(
                "{} images for {} variables",
                images.len(),
                self.vars.len()
            )));
        }
        let target_vars = match images.first() {
            Some(p) => p.vars.clone(),
            None => self.vars.clone(),
        };
        let mut pows: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(&target_vars, self.conductor), p.clone()])
            .collect();
        let mut out = MultiPoly::zero(&target_vars, self.conductor);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target_vars, c.clone());
            for (i, &e) in m.0[..self.vars.len()].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap().mul(&images[i]);
                    pows[i].push(next);
                }
                t = t.mul(&pows[i][e as usize]);
            }
            out.add_assign(&t);
        }
        Ok(out)
    }

    /// Replaces one variable by a polynomial, leaving the others alone.
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> Result<MultiPoly> {
        self.check_compat(value)?;
        if var >= self.vars.len() {
            return Err(Error::Arity(format!("no variable with index {var}")));
        }
        let images: Vec<MultiPoly> = (0..self.vars.len())
            .map(|i| {
                if i == var {
                    value.clone()
                } else {
                    MultiPoly::var(&self.vars, self.conductor, i)
                }
            })
            .collect();
        self.compose(&images)
    }

    /// Translate: `p(x) ↦ p(x + b)`.
    pub fn translate(&self, b: &[Cyclotomic]) -> Result<MultiPoly> {
        if b.len() != self.vars.len() {
            return Err(Error::Arity("translation vector length".into()));
        }
        let images: Vec<MultiPoly> = (0..self.vars.len())
            .map(|i| {
                let mut v = MultiPoly::var(&self.vars, self.conductor, i);
                v.add_term(Mono::one(), b[i].clone());
                v
            })
            .collect();
        self.compose(&images)
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut p = Self::zero(&self.vars, self.conductor);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.0[i] -= 1;
            p.add_term(m2, c.scale(&Rational::from_int(e as i64)));
        }
        p
    }

    /// Exact quotient `self / d`; errors if the division leaves a remainder.
    pub fn div_exact(&self, d: &MultiPoly) -> Result<MultiPoly> {
        let (lm, lc) = d.leading().ok_or(Error::DivisionByZero)?;
        let lm = *lm;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut q = Self::zero(&self.vars, self.conductor);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return Err(Error::Invalid("polynomial division is not exact".into()));
            }
            let qm = lm.quotient(m);
            let qc = c * &lc_inv;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            q.add_term(qm, qc);
        }
        Ok(q)
    }

    /// Makes the leading coefficient 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn with_vars(&self, vars: &Arc<Vec<String>>) -> MultiPoly {
        assert_eq!(vars.len(), self.vars.len());
        MultiPoly {
            vars: vars.clone(),
            conductor: self.conductor,
            terms: self.terms.clone(),
        }
    }

    /// Parses a polynomial in the given variables; scalars may use `zM`.
    pub fn parse(vars: &Arc<Vec<String>>, conductor: u32, s: &str) -> Result<MultiPoly> {
        let e = expr::parse(s)?;
        Self::eval_expr(vars, conductor, &e)
    }

    fn eval_expr(vars: &Arc<Vec<String>>, n: u32, e: &Expr) -> Result<MultiPoly> {
        Ok(match e {
            Expr::Num(q) => MultiPoly::constant(vars, Cyclotomic::from_rational(n, q.clone())),
            Expr::Var(v) => {
                if let Some(i) = vars.iter().position(|x| x == v) {
                    MultiPoly::var(vars, n, i)
                } else {
                    MultiPoly::constant(vars, Cyclotomic::eval_expr(n, e)?)
                }
            }
            Expr::Group(g) => {
                return Err(Error::Parse(format!("group element [{g}] in polynomial")))
            }
            Expr::Add(a, b) => Self::eval_expr(vars, n, a)?.add(&Self::eval_expr(vars, n, b)?),
            Expr::Sub(a, b) => Self::eval_expr(vars, n, a)?.sub(&Self::eval_expr(vars, n, b)?),
            Expr::Mul(a, b) => Self::eval_expr(vars, n, a)?.mul(&Self::eval_expr(vars, n, b)?),
            Expr::Div(a, b) => {
                let d = Self::eval_expr(vars, n, b)?;
                if d.total_degree().unwrap_or(0) > 0 {
                    return Err(Error::Parse("division by a non-constant polynomial".into()));
                }
                Self::eval_expr(vars, n, a)?.scale(&d.constant_term().inv()?)
            }
            Expr::Neg(a) => Self::eval_expr(vars, n, a)?.neg(),
            Expr::Pow(a, k) => Self::eval_expr(vars, n, a)?.pow(*k),
        })
    }

    fn fmt_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.0[..self.vars.len()].iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], e)),
            }
        }
        parts.join("*")
    }
}

/// Formats `coeff * rest`, where `rest` may be empty, as a signed summand.
pub(crate) fn fmt_scaled(c: &Cyclotomic, rest: &str, first: bool) -> String {
    let compound = c.as_rational().is_none();
    let (neg, shown) = match c.as_rational() {
        Some(q) if q.is_negative() => (true, Cyclotomic::from_rational(c.conductor(), -q)),
        _ => (false, c.clone()),
    };
    let sign = match (first, neg) {
        (true, false) => String::new(),
        (true, true) => "-".into(),
        (false, false) => " + ".into(),
        (false, true) => " - ".into(),
    };
    let body = if rest.is_empty() {
        if compound {
            format!("({shown})")
        } else {
            shown.to_string()
        }
    } else if shown.is_one() {
        rest.to_string()
    } else if compound {
        format!("({shown})*{rest}")
    } else {
        format!("{shown}*{rest}")
    };
    format!("{sign}{body}")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest terms first reads more naturally
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            write!(f, "{}", fmt_scaled(c, &self.fmt_mono(m), k == 0))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Operation selector for [`poly_arith`].
pub enum PolyOp<'a> {
    Add(&'a MultiPoly),
    Mul(&'a MultiPoly),
    Substitute(usize, &'a MultiPoly),
    Evaluate(&'a [Cyclotomic]),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolyValue {
    Poly(MultiPoly),
    Scalar(Cyclotomic),
}

pub fn poly_arith(p: &MultiPoly, op: PolyOp<'_>) -> Result<PolyValue> {
    Ok(match op {
        PolyOp::Add(q) => PolyValue::Poly(p.checked_add(q)?),
        PolyOp::Mul(q) => PolyValue::Poly(p.checked_mul(q)?),
        PolyOp::Substitute(i, q) => PolyValue::Poly(p.substitute(i, q)?),
        PolyOp::Evaluate(pt) => PolyValue::Scalar(p.evaluate(pt)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<Vec<String>> {
        Arc::new(vec!["x".into(), "y".into()])
    }

    #[test]
    fn difference_of_squares() {
        let v = xy();
        let p = MultiPoly::parse(&v, 1, "(x+y)*(x-y)").unwrap();
        assert_eq!(p, MultiPoly::parse(&v, 1, "x^2 - y^2").unwrap());
    }

    #[test]
    fn evaluate_and_substitute() {
        let v = xy();
        let p = MultiPoly::parse(&v, 1, "x^2*y").unwrap();
        let r = poly_arith(
            &p,
            PolyOp::Evaluate(&[Cyclotomic::from_int(1, 2), Cyclotomic::from_int(1, 3)]),
        )
        .unwrap();
        assert_eq!(r, PolyValue::Scalar(Cyclotomic::from_int(1, 12)));
        let f = MultiPoly::parse(&v, 1, "x^2").unwrap();
        let shifted = f
            .substitute(0, &MultiPoly::parse(&v, 1, "x + 1").unwrap())
            .unwrap();
        assert_eq!(shifted, MultiPoly::parse(&v, 1, "x^2 + 2*x + 1").unwrap());
        assert!(p.evaluate(&[Cyclotomic::one(1)]).is_err());
    }

    #[test]
    fn grevlex_order() {
        // x1 > x2 > x3 in degree 1, and x1*x3 > x2^2 in degree 2
        let x1 = Mono::var(0);
        let x2 = Mono::var(1);
        let x3 = Mono::var(2);
        assert!(x1 > x2 && x2 > x3);
        assert!(x1.mul(&x3) < x2.mul(&x2));
        assert!(Mono::from_slice(&[2]) > Mono::from_slice(&[0, 1]));
    }

    #[test]
    fn exact_division() {
        let v = xy();
        let p = MultiPoly::parse(&v, 1, "x^3 - y^3").unwrap();
        let d = MultiPoly::parse(&v, 1, "x - y").unwrap();
        let q = p.div_exact(&d).unwrap();
        assert_eq!(q, MultiPoly::parse(&v, 1, "x^2 + x*y + y^2").unwrap());
        assert!(MultiPoly::parse(&v, 1, "x^2 + 1")
            .unwrap()
            .div_exact(&d)
            .is_err());
    }

    #[test]
    fn display_round_trip() {
        let v = xy();
        let p = MultiPoly::parse(&v, 4, "z4*x^2 - 1/2*x*y + (1 + z4)*y - 3").unwrap();
        let s = p.to_string();
        assert_eq!(MultiPoly::parse(&v, 4, &s).unwrap(), p);
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(0, 0).len(), 1);
    }
}
