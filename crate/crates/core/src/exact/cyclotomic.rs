//! Exact arithmetic in the cyclotomic field ℚ(ζ_N), stored in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}` and kept fully reduced modulo the N-th cyclotomic
//! polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::expr::{self, Expr};
use crate::exact::Rational;

/// Precomputed data for one conductor.
#[derive(Debug)]
pub struct CycTables {
    pub conductor: u32,
    pub phi: usize,
    /// Integer coefficients of Φ_N, lowest degree first.
    pub cyclotomic_poly: Vec<i64>,
    /// `powers[k]` = coordinates of ζ^k in the power basis, `0 <= k < N`.
    powers: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = *den.last().unwrap();
    assert!(lead == 1 || lead == -1);
    let mut quot = vec![0i64; num.len() + 1 - dl];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dl - 1] * lead;
        quot[i] = q;
        for j in 0..dl {
            rem[i + j] -= q * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // Φ_n = (x^n - 1) / Π_{d | n, d < n} Φ_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

impl CycTables {
    fn build(n: u32) -> CycTables {
        assert!(n >= 1);
        let phi_poly = cyclotomic_poly(n);
        let phi = phi_poly.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by ζ: shift, then reduce the overflow coefficient
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c -= top * phi_poly[i];
                }
            }
        }
        CycTables {
            conductor: n,
            phi,
            cyclotomic_poly: phi_poly,
            powers,
        }
    }

    pub fn get(n: u32) -> &'static CycTables {
        static CACHE: OnceLock<RwLock<HashMap<u32, &'static CycTables>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(t) = cache.read().unwrap().get(&n) {
            return t;
        }
        let mut w = cache.write().unwrap();
        w.entry(n)
            .or_insert_with(|| Box::leak(Box::new(CycTables::build(n))))
    }

    pub fn power_coords(&self, k: i64) -> &[i64] {
        let n = self.conductor as i64;
        &self.powers[k.rem_euclid(n) as usize]
    }
}

/// An element of ℚ(ζ_N).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(n: u32) -> Self {
        let t = CycTables::get(n);
        Cyclotomic {
            conductor: n,
            coeffs: vec![Rational::zero(); t.phi],
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, Rational::one())
    }

    pub fn from_rational(n: u32, q: Rational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(n: u32, k: i64) -> Self {
        Self::from_rational(n, Rational::from_int(k))
    }

    /// ζ_N^k.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let t = CycTables::get(n);
        Cyclotomic {
            conductor: n,
            coeffs: t
                .power_coords(k)
                .iter()
                .map(|&c| Rational::from_int(c))
                .collect(),
        }
    }

    /// ζ_d^k embedded in ℚ(ζ_N); requires `d | N`.
    pub fn root_of_unity(n: u32, d: u32, k: i64) -> Result<Self> {
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::ConductorMismatch(d, n));
        }
        Ok(Self::zeta_pow(n, k * (n / d) as i64))
    }

    pub fn from_coeffs(n: u32, coeffs: Vec<Rational>) -> Result<Self> {
        let t = CycTables::get(n);
        if coeffs.len() != t.phi {
            return Err(Error::Arity(format!(
                "expected {} coordinates for conductor {n}, got {}",
                t.phi,
                coeffs.len()
            )));
        }
        Ok(Cyclotomic {
            conductor: n,
            coeffs,
        })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.conductor != other.conductor {
            Err(Error::ConductorMismatch(self.conductor, other.conductor))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * other)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(
            self.conductor, other.conductor,
            "cyclotomic conductor mismatch"
        );
        let t = CycTables::get(self.conductor);
        let phi = t.phi;
        if phi == 1 {
            return Cyclotomic {
                conductor: self.conductor,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        // raw convolution, then fold ζ^k for k >= φ back into the basis
        let mut raw = vec![Rational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += &(a * b);
            }
        }
        let mut out: Vec<Rational> = raw[..phi].to_vec();
        for (k, r) in raw.iter().enumerate().skip(phi) {
            if r.is_zero() {
                continue;
            }
            for (l, &c) in t.power_coords(k as i64).iter().enumerate() {
                if c != 0 {
                    out[l] += &(r * &Rational::from_int(c));
                }
            }
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: out,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse, by solving the linear system `a · v = 1` in the power basis.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.conductor, q.inv()?));
        }
        let n = self.conductor;
        let phi = self.coeffs.len();
        // column i = coordinates of self * ζ^i
        let cols: Vec<Cyclotomic> = (0..phi)
            .map(|i| self * &Cyclotomic::zeta_pow(n, i as i64))
            .collect();
        let mut m: Vec<Vec<Rational>> = (0..phi)
            .map(|r| {
                let mut row: Vec<Rational> = cols.iter().map(|c| c.coeffs[r].clone()).collect();
                row.push(if r == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                });
                row
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(col, piv);
            let inv = m[col][col].inv()?;
            for v in m[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..phi {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=phi {
                        let d = &m[col][c] * &f;
                        m[r][c] -= &d;
                    }
                }
            }
        }
        Ok(Cyclotomic {
            conductor: n,
            coeffs: m.into_iter().map(|row| row[phi].clone()).collect(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * &other.inv()?)
    }

    /// Complex conjugation, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// The Galois automorphism ζ ↦ ζ^k (k coprime to N).
    pub fn galois(&self, k: i64) -> Self {
        let t = CycTables::get(self.conductor);
        let mut out = vec![Rational::zero(); t.phi];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (l, &c) in t.power_coords(k * i as i64).iter().enumerate() {
                if c != 0 {
                    out[l] += &(a * &Rational::from_int(c));
                }
            }
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: out,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Cyclotomic::one(self.conductor);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Parses strings like `"1/2*z6^2 - 1"`; `zM` denotes ζ_M and requires `M | n`.
    pub fn parse(n: u32, s: &str) -> Result<Self> {
        let e = expr::parse(s)?;
        Self::eval_expr(n, &e)
    }

    pub fn eval_expr(n: u32, e: &Expr) -> Result<Self> {
        Ok(match e {
            Expr::Num(q) => Self::from_rational(n, q.clone()),
            Expr::Var(v) => {
                let d = parse_zeta_name(v)
                    .ok_or_else(|| Error::Parse(format!("unknown scalar symbol {v:?}")))?;
                Self::root_of_unity(n, d, 1)?
            }
            Expr::Group(g) => return Err(Error::Parse(format!("group element [{g}] in scalar"))),
            Expr::Add(a, b) => &Self::eval_expr(n, a)? + &Self::eval_expr(n, b)?,
            Expr::Sub(a, b) => &Self::eval_expr(n, a)? - &Self::eval_expr(n, b)?,
            Expr::Mul(a, b) => &Self::eval_expr(n, a)? * &Self::eval_expr(n, b)?,
            Expr::Div(a, b) => Self::eval_expr(n, a)?.checked_div(&Self::eval_expr(n, b)?)?,
            Expr::Neg(a) => -&Self::eval_expr(n, a)?,
            Expr::Pow(a, k) => Self::eval_expr(n, a)?.pow(*k),
        })
    }

    /// Smallest conductor in which the scalar string makes sense.
    pub fn required_conductor(s: &str) -> Result<u32> {
        let e = expr::parse(s)?;
        let mut n = 1u32;
        let mut bad = None;
        e.for_each_var(&mut |v| match parse_zeta_name(v) {
            Some(d) => n = num_integer::lcm(n, d),
            None => bad = Some(v.to_string()),
        });
        match bad {
            Some(v) => Err(Error::Parse(format!("unknown scalar symbol {v:?}"))),
            None => Ok(n),
        }
    }
}

pub(crate) fn parse_zeta_name(v: &str) -> Option<u32> {
    let rest = v.strip_prefix('z')?;
    let d: u32 = rest.parse().ok()?;
    (d > 0).then_some(d)
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, abs) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let z = match i {
                0 => String::new(),
                1 => format!("z{}", self.conductor),
                _ => format!("z{}^{}", self.conductor, i),
            };
            if z.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{z}")?;
            } else {
                write!(f, "{abs}*{z}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        assert_eq!(
            self.conductor, rhs.conductor,
            "cyclotomic conductor mismatch"
        );
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        assert_eq!(
            self.conductor, rhs.conductor,
            "cyclotomic conductor mismatch"
        );
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.mul_impl(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        assert_eq!(
            self.conductor, rhs.conductor,
            "cyclotomic conductor mismatch"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        assert_eq!(
            self.conductor, rhs.conductor,
            "cyclotomic conductor mismatch"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &Cyclotomic) {
        *self = self.mul_impl(rhs);
    }
}

/// Binary field operation selector, mirroring the workbench's `field_arith` entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Conj,
}

/// `inv` and `conj` ignore `b` apart from the conductor check.
pub fn field_arith(a: &Cyclotomic, b: &Cyclotomic, op: FieldOp) -> Result<Cyclotomic> {
    a.check(b)?;
    match op {
        FieldOp::Add => Ok(a + b),
        FieldOp::Mul => Ok(a * b),
        FieldOp::Inv => a.inv(),
        FieldOp::Conj => Ok(a.conj()),
    }
}
