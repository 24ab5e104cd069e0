use std::fmt;

use super::text::parse_terms;
use super::PolyError;
use crate::ff::{Field, Fq, MidField};

/// Dense polynomial over F_q in the symbol `a`, lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Fq>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Fq) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Fq(1))
    }

    /// The polynomial `a`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Fq(0), Fq(1)])
    }

    /// c·a^n.
    pub fn monomial(c: Fq, n: usize) -> Self {
        let mut coeffs = vec![Fq(0); n + 1];
        coeffs[n] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last() == Some(&Fq(0)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// From integer encodings, lowest degree first.
    pub fn from_encodings(encs: &[u32]) -> Self {
        Self::from_coeffs(encs.iter().map(|&e| Fq(e)).collect())
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq(0))
    }

    pub fn add(&self, other: &Self, f: &MidField) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self, f: &MidField) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, f: &MidField) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fq, f: &MidField) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Multiplication by a^n.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Fq(0); n];
        coeffs.extend_from_slice(&self.coeffs);
        UniPoly { coeffs }
    }

    pub fn mul(&self, other: &Self, f: &MidField) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Fq(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == Fq(0) {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, mut n: u64, f: &MidField) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Horner evaluation at a ∈ F_q.
    pub fn eval(&self, a: Fq, f: &MidField) -> Fq {
        self.coeffs.iter().rev().fold(Fq(0), |acc, &c| f.add(f.mul(acc, a), c))
    }

    /// p(c1·a + c0).
    pub fn compose_linear(&self, c1: Fq, c0: Fq, f: &MidField) -> Self {
        let lin = Self::from_coeffs(vec![c0, c1]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, &c| acc.mul(&lin, f).add(&Self::constant(c), f))
    }

    /// Quotient and remainder; `None` when dividing by zero.
    pub fn divrem(&self, d: &Self, f: &MidField) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lead_inv = f.inv(d.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![Fq(0); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c != Fq(0) {
                for (j, &dj) in d.coeffs.iter().enumerate() {
                    rem[i + j] = f.sub(rem[i + j], f.mul(c, dj));
                }
            }
        }
        Some((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    pub fn div_exact(&self, d: &Self, f: &MidField) -> Result<Self, PolyError> {
        match self.divrem(d, f) {
            Some((q, r)) if r.is_zero() => Ok(q),
            _ => Err(PolyError::InexactDivision),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self, f: &MidField) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, f).expect("b is nonzero");
            a = b;
            b = r;
        }
        match f.inv(a.lead()) {
            Some(i) => a.scale(i, f),
            None => a,
        }
    }

    /// Formal derivative.
    pub fn derivative(&self, f: &MidField) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, f.of_int(i as i64))).collect())
    }

    /// Parses text such as `a^2 + 2*a + 1` (coefficients are encodings).
    pub fn parse(text: &str, f: &MidField) -> Result<Self, PolyError> {
        let mut out = Self::zero();
        for t in parse_terms(text, 'a')? {
            if t.exp2 < 0 || t.exp2 % 2 != 0 {
                return Err(PolyError::Parse(format!(
                    "exponents of a polynomial in a must be nonnegative integers: `{text}`"
                )));
            }
            if t.coeff >= f.q() as u64 {
                return Err(PolyError::InvalidCoefficient(t.coeff));
            }
            let c = if t.negative { f.neg(Fq(t.coeff as u32)) } else { Fq(t.coeff as u32) };
            out = out.add(&Self::monomial(c, (t.exp2 / 2) as usize), f);
        }
        Ok(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return fm.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == Fq(0) {
                continue;
            }
            if !first {
                fm.write_str(" + ")?;
            }
            first = false;
            match (i, c.0) {
                (0, c) => write!(fm, "{c}")?,
                (1, 1) => fm.write_str("a")?,
                (1, c) => write!(fm, "{c}*a")?,
                (i, 1) => write!(fm, "a^{i}")?,
                (i, c) => write!(fm, "{c}*a^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldCtx;

    #[test]
    fn spec_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let f = f2.mid();
        let ap1 = UniPoly::from_encodings(&[1, 1]);
        assert_eq!(ap1.mul(&ap1, f), UniPoly::from_encodings(&[1, 0, 1]));

        let f7 = FieldCtx::new(7, 1).unwrap();
        let p = UniPoly::parse("a^2 - 4", f7.mid()).unwrap();
        assert_eq!(p.eval(Fq(3), f7.mid()), Fq(5));

        let f3 = FieldCtx::new(3, 1).unwrap();
        let f = f3.mid();
        let num = UniPoly::parse("a^2 - 1", f).unwrap();
        let den = UniPoly::parse("a - 1", f).unwrap();
        assert_eq!(num.div_exact(&den, f).unwrap(), UniPoly::parse("a + 1", f).unwrap());
        assert_eq!(num.div_exact(&UniPoly::var(), f), Err(PolyError::InexactDivision));
    }

    #[test]
    fn display_round_trip() {
        let c = FieldCtx::new(3, 2).unwrap();
        let f = c.mid();
        let p = UniPoly::from_encodings(&[5, 1, 0, 8]);
        assert_eq!(p.to_string(), "8*a^3 + a + 5");
        assert_eq!(UniPoly::parse(&p.to_string(), f).unwrap(), p);
        assert_eq!(UniPoly::zero().to_string(), "0");
        assert_eq!(UniPoly::parse("0", f).unwrap(), UniPoly::zero());
    }

    #[test]
    fn compose_and_gcd() {
        let c = FieldCtx::new(5, 1).unwrap();
        let f = c.mid();
        // (a+1)^2 composed with a -> 2a + 3 is (2a+4)^2 = 4a^2 + 16a + 16
        let p = UniPoly::parse("a^2 + 2*a + 1", f).unwrap();
        let got = p.compose_linear(Fq(2), Fq(3), f);
        assert_eq!(got, UniPoly::from_encodings(&[1, 1, 4]));
        let g = p.gcd(&UniPoly::parse("a^2 - 1", f).unwrap(), f);
        assert_eq!(g, UniPoly::parse("a + 1", f).unwrap());
        assert_eq!(p.derivative(f), UniPoly::parse("2*a + 2", f).unwrap());
    }
}
