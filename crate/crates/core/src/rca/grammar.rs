//! Text form of PBW elements: `coeff*x1^2*x2*[w3]*y1 + ...`, with `t` allowed
//! inside coefficients. Parsing accepts arbitrary products and straightens
//! them, so `y*x` is a valid input.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::cyclotomic::parse_zeta_name;
use crate::exact::{expr, Cyclotomic, Expr, Mono};
use crate::rca::{Cherednik, PBWElement};

fn mono_str(vars: &[String], m: &Mono) -> Vec<String> {
    vars.iter()
        .enumerate()
        .filter(|(i, _)| m.0[*i] > 0)
        .map(|(i, v)| match m.0[i] {
            1 => v.clone(),
            e => format!("{v}^{e}"),
        })
        .collect()
}

impl fmt::Display for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let alg = &self.alg;
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let mut parts = mono_str(alg.x_vars(), &k.x);
            if k.w != 0 {
                parts.push(format!("[w{}]", k.w));
            }
            parts.extend(mono_str(alg.y_vars(), &k.y));
            let rest = parts.join("*");
            let s = match c.as_constant() {
                Some(c) => crate::exact::poly::fmt_scaled(&c, &rest, first),
                None => {
                    let sign = if first { "" } else { " + " };
                    if rest.is_empty() {
                        format!("{sign}({c})")
                    } else {
                        format!("{sign}({c})*{rest}")
                    }
                }
            };
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

impl Cherednik {
    /// Parses and straightens an element written in the text grammar.
    pub fn parse(self: &Arc<Self>, s: &str) -> Result<PBWElement> {
        let e = expr::parse(s)?;
        self.eval(&e)
    }

    fn var_index(names: &[String], v: &str) -> Option<usize> {
        names.iter().position(|n| n == v).or_else(|| {
            // accept x1/y1 in rank one and bare x/y when unambiguous
            if names.len() == 1 && (v.len() == 2 && v.ends_with('1')) {
                (v[..1] == names[0]).then_some(0)
            } else {
                None
            }
        })
    }

    fn eval(self: &Arc<Self>, e: &Expr) -> Result<PBWElement> {
        let n = self.conductor();
        Ok(match e {
            Expr::Num(q) => self.scalar(Cyclotomic::from_rational(n, q.clone())),
            Expr::Var(v) => {
                if v == "t" {
                    self.t()
                } else if let Some(i) = Self::var_index(self.x_vars(), v) {
                    self.x(i)
                } else if let Some(i) = Self::var_index(self.y_vars(), v) {
                    self.y(i)
                } else if let Some(d) = parse_zeta_name(v) {
                    self.scalar(Cyclotomic::root_of_unity(n, d, 1)?)
                } else {
                    return Err(Error::Parse(format!("unknown symbol {v:?}")));
                }
            }
            Expr::Group(g) => self.group_element(self.group().parse_element(g)?),
            Expr::Add(a, b) => self.eval(a)?.checked_add(&self.eval(b)?)?,
            Expr::Sub(a, b) => self.eval(a)?.checked_sub(&self.eval(b)?)?,
            Expr::Mul(a, b) => self.eval(a)?.mul(&self.eval(b)?)?,
            Expr::Div(a, b) => {
                let d = Cyclotomic::eval_expr(n, b)
                    .map_err(|_| Error::Parse("only division by scalars is supported".into()))?;
                self.eval(a)?.scale(&d.inv()?)
            }
            Expr::Neg(a) => self.eval(a)?.neg(),
            Expr::Pow(a, k) => self.eval(a)?.pow(*k),
        })
    }
}
