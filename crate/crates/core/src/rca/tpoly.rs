use std::fmt;

use crate::error::{Error, Result};
use crate::exact::Cyclotomic;

/// A polynomial in the deformation parameter `t`, dense in increasing degree,
/// never carrying trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TPoly {
    conductor: u32,
    coeffs: Vec<Cyclotomic>,
}

impl TPoly {
    pub fn zero(n: u32) -> Self {
        TPoly {
            conductor: n,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Cyclotomic) -> Self {
        let n = c.conductor();
        TPoly::from_coeffs(n, vec![c])
    }

    pub fn t(n: u32) -> Self {
        TPoly::from_coeffs(n, vec![Cyclotomic::zero(n), Cyclotomic::one(n)])
    }

    pub fn from_coeffs(n: u32, mut coeffs: Vec<Cyclotomic>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TPoly {
            conductor: n,
            coeffs,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Cyclotomic {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(|| Cyclotomic::zero(self.conductor))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<Cyclotomic> {
        match self.coeffs.len() {
            0 => Some(Cyclotomic::zero(self.conductor)),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn at_zero(&self) -> Cyclotomic {
        self.coeff(0)
    }

    pub fn eval(&self, t: &Cyclotomic) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.conductor);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    pub fn add_assign(&mut self, o: &TPoly) {
        if self.coeffs.len() < o.coeffs.len() {
            self.coeffs
                .resize(o.coeffs.len(), Cyclotomic::zero(self.conductor));
        }
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
        self.trim();
    }

    /// `self += o * s`
    pub fn add_scaled(&mut self, o: &TPoly, s: &Cyclotomic) {
        if s.is_zero() {
            return;
        }
        if self.coeffs.len() < o.coeffs.len() {
            self.coeffs
                .resize(o.coeffs.len(), Cyclotomic::zero(self.conductor));
        }
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += &(b * s);
        }
        self.trim();
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn scale(&self, s: &Cyclotomic) -> TPoly {
        if s.is_zero() {
            return TPoly::zero(self.conductor);
        }
        TPoly {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn neg(&self) -> TPoly {
        TPoly {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, o: &TPoly) -> TPoly {
        if self.is_zero() || o.is_zero() {
            return TPoly::zero(self.conductor);
        }
        if o.coeffs.len() == 1 {
            return self.scale(&o.coeffs[0]);
        }
        if self.coeffs.len() == 1 {
            return o.scale(&self.coeffs[0]);
        }
        let mut out =
            vec![Cyclotomic::zero(self.conductor); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        TPoly::from_coeffs(self.conductor, out)
    }

    /// Multiplies by `t`.
    pub fn shift(&self) -> TPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Cyclotomic::zero(self.conductor));
        coeffs.extend(self.coeffs.iter().cloned());
        TPoly {
            conductor: self.conductor,
            coeffs,
        }
    }

    /// Exact division by `t`.
    pub fn div_t(&self) -> Result<TPoly> {
        match self.coeffs.first() {
            None => Ok(self.clone()),
            Some(c) if c.is_zero() => Ok(TPoly {
                conductor: self.conductor,
                coeffs: self.coeffs[1..].to_vec(),
            }),
            Some(_) => Err(Error::NotCentral("commutator is not divisible by t".into())),
        }
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let rest = match d {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{d}"),
            };
            write!(f, "{}", crate::exact::poly::fmt_scaled(c, &rest, first))?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_division() {
        let n = 1;
        let t = TPoly::t(n);
        let two = TPoly::constant(Cyclotomic::from_int(n, 2));
        let mut p = t.mul(&t);
        p.add_assign(&two.mul(&t));
        assert_eq!(p.to_string(), "t^2 + 2*t");
        assert_eq!(p.div_t().unwrap().to_string(), "t + 2");
        assert!(two.div_t().is_err());
        assert_eq!(
            p.eval(&Cyclotomic::from_int(n, 3)),
            Cyclotomic::from_int(n, 15)
        );
        let mut q = p.clone();
        q.add_scaled(&p, &Cyclotomic::from_int(n, -1));
        assert!(q.is_zero());
    }
}
