//! Rational functions of the dimension symbol n with exact coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial in n with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> QPoly {
        QPoly(vec![c]).trimmed()
    }

    pub fn from_int(c: i64) -> QPoly {
        QPoly::constant(BigRational::from_integer(c.into()))
    }

    /// The symbol n.
    pub fn n() -> QPoly {
        QPoly(vec![BigRational::zero(), BigRational::one()])
    }

    /// a·n + b.
    pub fn linear(a: i64, b: i64) -> QPoly {
        QPoly(vec![BigRational::from_integer(b.into()), BigRational::from_integer(a.into())]).trimmed()
    }

    pub fn from_coeffs(c: Vec<BigRational>) -> QPoly {
        QPoly(c).trimmed()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    fn trimmed(mut self) -> QPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly(self.0.iter().map(|a| a * c).collect()).trimmed()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Quotient and remainder of Euclidean division.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap_or(0);
        let dl = d.lead();
        let mut rem = self.0.clone();
        let mut quo = vec![BigRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &dl;
            let shift = top - dd;
            for (i, dc) in d.0.iter().enumerate() {
                rem[shift + i] = &rem[shift + i] - &c * dc;
            }
            quo[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (QPoly(quo).trimmed(), QPoly(rem).trimmed())
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(BigRational::one() / l))
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Integer coefficients with content 1 and the factor removed: self = factor · result.
    pub fn primitive(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::one(), Vec::new());
        }
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let ints: Vec<BigInt> = ints.into_iter().map(|c| c / &content).collect();
        (BigRational::new(content, lcm), ints)
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let len = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        QPoly((0..len).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect()).trimmed()
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        self + &(-o)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        QPoly(out).trimmed()
    }
}

/// Element of ℚ(n): num/den with gcd 1 and monic den.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimRational {
    num: QPoly,
    den: QPoly,
}

impl DimRational {
    pub fn new(num: QPoly, den: QPoly) -> Result<DimRational> {
        if den.is_zero() {
            return Err(Error::Argument("zero denominator".into()));
        }
        Ok(DimRational::canonical(num, den))
    }

    fn canonical(num: QPoly, den: QPoly) -> DimRational {
        if num.is_zero() {
            return DimRational { num, den: QPoly::from_int(1) };
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let l = den.lead();
        let inv = BigRational::one() / l;
        DimRational { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: QPoly) -> DimRational {
        DimRational { num: p, den: QPoly::from_int(1) }
    }

    pub fn from_int(c: i64) -> DimRational {
        DimRational::from_poly(QPoly::from_int(c))
    }

    pub fn from_rational(c: BigRational) -> DimRational {
        DimRational::from_poly(QPoly::constant(c))
    }

    pub fn n() -> DimRational {
        DimRational::from_poly(QPoly::n())
    }

    /// a·n + b.
    pub fn linear(a: i64, b: i64) -> DimRational {
        DimRational::from_poly(QPoly::linear(a, b))
    }

    pub fn zero() -> DimRational {
        DimRational::from_int(0)
    }

    pub fn one() -> DimRational {
        DimRational::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.degree() == Some(0) && self.num == self.den
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    /// Sign of the leading numerator coefficient (den is normalized positive).
    pub fn is_negative(&self) -> bool {
        self.num.lead().is_negative()
    }

    pub fn abs(&self) -> DimRational {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<DimRational> {
        DimRational::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> DimRational {
        (0..e).fold(DimRational::one(), |acc, _| &acc * self)
    }

    /// Exact value at an integer n.
    pub fn eval(&self, n0: i64) -> Result<BigRational> {
        let x = BigRational::from_integer(n0.into());
        let d = self.den.eval(&x);
        if d.is_zero() {
            return Err(Error::Pole(n0));
        }
        Ok(self.num.eval(&x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    /// Integer-coefficient numerator and denominator, content-normalized, den leading coefficient > 0.
    pub fn integer_parts(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let (cn, pn) = self.num.primitive();
        let (cd, pd) = self.den.primitive();
        // self = (cn/cd) · pn/pd
        let ratio = cn / cd;
        let num: Vec<BigInt> = pn.iter().map(|c| c * ratio.numer()).collect();
        let mut den: Vec<BigInt> = pd.iter().map(|c| c * ratio.denom()).collect();
        let mut num = num;
        if den.last().is_some_and(|c| c.is_negative()) {
            den.iter_mut().for_each(|c| *c = -c.clone());
            num.iter_mut().for_each(|c| *c = -c.clone());
        }
        if num.is_empty() {
            return (vec![BigInt::zero()], vec![BigInt::one()]);
        }
        (num, den)
    }
}

impl Add for &DimRational {
    type Output = DimRational;
    fn add(self, o: &DimRational) -> DimRational {
        if self.den == o.den {
            return DimRational::canonical(&self.num + &o.num, self.den.clone());
        }
        DimRational::canonical(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &DimRational {
    type Output = DimRational;
    fn sub(self, o: &DimRational) -> DimRational {
        self + &(-o)
    }
}

impl Neg for &DimRational {
    type Output = DimRational;
    fn neg(self) -> DimRational {
        DimRational { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &DimRational {
    type Output = DimRational;
    fn mul(self, o: &DimRational) -> DimRational {
        if self.is_zero() || o.is_zero() {
            return DimRational::zero();
        }
        DimRational::canonical(&self.num * &o.num, &self.den * &o.den)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &DimRational {
    type Output = Result<DimRational>;
    fn div(self, o: &DimRational) -> Result<DimRational> {
        Ok(self * &o.recip()?)
    }
}

fn int_poly_text(c: &[BigInt]) -> (String, usize) {
    let mut out = String::new();
    let mut terms = 0;
    for (deg, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let neg = a.is_negative();
        let mag = a.abs();
        if terms == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mono = match deg {
            0 => String::new(),
            1 => "n".to_string(),
            d => format!("n^{d}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
        terms += 1;
    }
    if terms == 0 {
        out.push('0');
    }
    (out, terms)
}

/// Atom-safe text: wraps in parentheses unless it is a single unsigned term.
fn wrap(s: &str, terms: usize) -> String {
    if terms > 1 || s.starts_with('-') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

impl fmt::Display for DimRational {
    /// Compact text such as `1/(n-1)` or `(n^2+n-2)/(2*n+1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.integer_parts();
        let (ns, nt) = int_poly_text(&num);
        if den.len() == 1 && den[0].is_one() {
            return f.write_str(&ns);
        }
        let (ds, dt) = int_poly_text(&den);
        let num_part = if nt > 1 { format!("({ns})") } else { ns };
        write!(f, "{}/{}", num_part, wrap(&ds, dt))
    }
}

impl PartialOrd for DimRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DimRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

/// Exact factorial.
pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        // (n^2-1)/(2n-2) = (n+1)/2
        let num = &QPoly::linear(1, 1) * &QPoly::linear(1, -1);
        let r = DimRational::new(num, QPoly::linear(2, -2)).unwrap();
        assert_eq!(r, DimRational::new(QPoly::linear(1, 1), QPoly::from_int(2)).unwrap());
        assert_eq!(r.to_string(), "(n+1)/2");
        let (num, den) = r.integer_parts();
        assert_eq!(num, vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(den, vec![BigInt::from(2)]);
    }

    #[test]
    fn negative_denominator_normalized() {
        let r = DimRational::new(QPoly::from_int(1), QPoly::linear(-1, 1)).unwrap();
        assert_eq!(r.to_string(), "-1/(n-1)");
        assert!(r.is_negative());
        let (_, den) = r.integer_parts();
        assert!(den.last().unwrap().is_positive());
    }

    #[test]
    fn field_ops() {
        let a = DimRational::new(QPoly::from_int(1), QPoly::linear(1, -1)).unwrap();
        let b = DimRational::new(QPoly::from_int(1), QPoly::linear(1, 1)).unwrap();
        let s = &a + &b; // 2n/(n^2-1)
        assert_eq!(s.to_string(), "2*n/(n^2-1)");
        assert_eq!(s.eval(3).unwrap(), rat(3, 4));
        assert!(s.eval(1).is_err());
        let q = (&s / &a).unwrap();
        assert_eq!(q.to_string(), "2*n/(n+1)");
        assert!((&(&s - &a) - &b).is_zero());
    }

    #[test]
    fn zero_and_one() {
        assert_eq!(DimRational::zero().to_string(), "0");
        assert!(DimRational::one().is_one());
        assert!(DimRational::new(QPoly::from_int(1), QPoly::zero()).is_err());
    }
}
