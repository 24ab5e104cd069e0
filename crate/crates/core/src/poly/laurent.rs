use std::collections::BTreeMap;
use std::fmt;

use super::text::{format_exponent, parse_terms};
use super::PolyError;
use crate::ff::{ExtField, Field, FieldCtx, Fq, Fq2, MidField};

/// Sparse Laurent polynomial over F_q in `x` whose exponents are integers or
/// halves of integers. Keys are twice the exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Fq>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Fq) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(Fq(1))
    }

    /// c·x^n for an integer exponent n.
    pub fn monomial(c: Fq, n: i64) -> Self {
        Self::monomial2(c, 2 * n)
    }

    /// c·x^(exp2/2).
    pub fn monomial2(c: Fq, exp2: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != Fq(0) {
            terms.insert(exp2, c);
        }
        LaurentPoly { terms }
    }

    /// Sum of c·x^n over integer exponents; like terms are added.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Fq)>, f: &MidField) -> Self {
        let mut out = Self::zero();
        for (n, c) in terms {
            out.add_term2(2 * n, c, f);
        }
        out
    }

    /// x^n + ... with coefficient 1 on each listed integer exponent.
    pub fn from_exponents(exps: &[i64], f: &MidField) -> Self {
        Self::from_terms(exps.iter().map(|&n| (n, Fq(1))), f)
    }

    pub fn add_term2(&mut self, exp2: i64, c: Fq, f: &MidField) {
        let entry = self.terms.entry(exp2).or_insert(Fq(0));
        *entry = f.add(*entry, c);
        if *entry == Fq(0) {
            self.terms.remove(&exp2);
        }
    }

    /// (twice the exponent, coefficient), ascending by exponent.
    pub fn terms2(&self) -> impl DoubleEndedIterator<Item = (i64, Fq)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff2(&self, exp2: i64) -> Fq {
        self.terms.get(&exp2).copied().unwrap_or(Fq(0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_half_exponents(&self) -> bool {
        self.terms.keys().any(|e| e % 2 != 0)
    }

    /// Smallest and largest twice-exponent.
    pub fn exp2_range(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    /// Integer exponents and coefficients; `HalfExponent` if any is fractional.
    pub fn integer_terms(&self) -> Result<Vec<(i64, Fq)>, PolyError> {
        self.terms
            .iter()
            .map(|(&e, &c)| if e % 2 == 0 { Ok((e / 2, c)) } else { Err(PolyError::HalfExponent) })
            .collect()
    }

    pub fn add(&self, other: &Self, f: &MidField) -> Self {
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term2(e, c, f);
        }
        out
    }

    pub fn neg(&self, f: &MidField) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (e, f.neg(c))).collect() }
    }

    pub fn sub(&self, other: &Self, f: &MidField) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Fq, f: &MidField) -> Self {
        if c == Fq(0) {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(&e, &x)| (e, f.mul(x, c))).collect() }
    }

    /// Multiplication by x^(exp2/2).
    pub fn shift2(&self, exp2: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (e + exp2, c)).collect() }
    }

    pub fn mul(&self, other: &Self, f: &MidField) -> Self {
        let mut out = Self::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &other.terms {
                out.add_term2(e1 + e2, f.mul(c1, c2), f);
            }
        }
        out
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

    /// Substitutes x ↦ x^m (m may be negative); exponents scale by m.
    pub fn substitute_power(&self, m: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (e * m, c)).collect() }
    }

    /// Returns the polynomial with all exponents doubled when any exponent is
    /// fractional, i.e. the polynomial in x² instead of x.
    pub fn to_integer_exponents(&self) -> (Self, bool) {
        if self.has_half_exponents() {
            (self.substitute_power(2), true)
        } else {
            (self.clone(), false)
        }
    }

    /// Inverse of doubling: halves every exponent. Only valid on polynomials
    /// whose exponents are all integers.
    pub fn halve_exponents(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (e / 2, c)).collect() }
    }

    /// Exponent of x for a term on μ_{q+1}, reduced into [0, q].
    pub fn resolve_exponent_on_mu(exp2: i64, ctx: &FieldCtx) -> Result<u64, PolyError> {
        let m = ctx.q() as i64 + 1;
        if exp2 % 2 == 0 {
            return Ok((exp2 / 2).rem_euclid(m) as u64);
        }
        if !ctx.is_char2() {
            return Err(PolyError::HalfExponentInOddCharacteristic);
        }
        // q + 1 is odd here; 2⁻¹ ≡ (q + 2)/2
        let inv2 = (m + 1) / 2;
        Ok((exp2.rem_euclid(m) * inv2).rem_euclid(m) as u64)
    }

    /// Σ c·x^e at a point x ∈ μ_{q+1}.
    pub fn eval_on_mu(&self, ctx: &FieldCtx, x: Fq2) -> Result<Fq2, PolyError> {
        let top = ctx.top();
        if !top.is_on_mu(x) {
            return Err(PolyError::NotOnMu);
        }
        let mut acc = Fq2(0);
        for (&e, &c) in &self.terms {
            let n = Self::resolve_exponent_on_mu(e, ctx)?;
            acc = top.add(acc, top.mul(top.embed(c), top.pow(x, n)));
        }
        Ok(acc)
    }

    /// Values at ζ^i for i = 0..=q, where ζ is the context's generator of μ_{q+1}.
    pub fn values_on_mu(&self, ctx: &FieldCtx) -> Result<Vec<Fq2>, PolyError> {
        let top = ctx.top();
        let m = ctx.q() as usize + 1;
        let zeta_pows = mu_powers(top);
        let resolved = self
            .terms
            .iter()
            .map(|(&e, &c)| Ok((Self::resolve_exponent_on_mu(e, ctx)? as usize, top.embed(c))))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Ok((0..m)
            .map(|i| resolved.iter().fold(Fq2(0), |acc, &(n, c)| top.add(acc, top.mul(c, zeta_pows[i * n % m]))))
            .collect())
    }

    /// Evaluation at a nonzero x ∈ F_{q²} for integer exponents.
    pub fn eval_top(&self, top: &ExtField, x: Fq2) -> Result<Fq2, PolyError> {
        let mut acc = Fq2(0);
        for (&e, &c) in &self.terms {
            if e % 2 != 0 {
                return Err(PolyError::HalfExponent);
            }
            let xe = top.pow_signed(x, e / 2).ok_or(PolyError::ZeroPoint)?;
            acc = top.add(acc, top.mul(top.embed(c), xe));
        }
        Ok(acc)
    }

    /// Exact division in the Laurent ring over y = x^(1/2): clear the lowest
    /// exponents, divide as ordinary polynomials in y, check the remainder.
    pub fn div_exact(&self, d: &Self, f: &MidField) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (dlo, dhi) = d.exp2_range().ok_or(PolyError::InexactDivision)?;
        let (nlo, nhi) = self.exp2_range().expect("nonzero");
        let dense = |p: &Self, lo: i64, hi: i64| {
            let mut v = vec![Fq(0); (hi - lo) as usize + 1];
            for (&e, &c) in &p.terms {
                v[(e - lo) as usize] = c;
            }
            v
        };
        let mut rem = dense(self, nlo, nhi);
        let dv = dense(d, dlo, dhi);
        let dd = (dhi - dlo) as usize;
        if rem.len() <= dd {
            return Err(PolyError::InexactDivision);
        }
        let lead_inv = f.inv(dv[dd]).expect("leading coefficient is nonzero");
        let mut quot = vec![Fq(0); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c != Fq(0) {
                for (j, &dj) in dv.iter().enumerate() {
                    rem[i + j] = f.sub(rem[i + j], f.mul(c, dj));
                }
            }
        }
        if rem.iter().any(|&c| c != Fq(0)) {
            return Err(PolyError::InexactDivision);
        }
        let mut out = Self::zero();
        for (i, c) in quot.into_iter().enumerate() {
            out.add_term2(nlo - dlo + i as i64, c, f);
        }
        Ok(out)
    }

    /// Parses text such as `1*x^3 + 1*x^2 + 1*x^-1` or `x^-1/2 + x + 1`.
    pub fn parse(text: &str, f: &MidField) -> Result<Self, PolyError> {
        Self::parse_symbol(text, 'x', f)
    }

    /// Like [`LaurentPoly::parse`] with another symbol, e.g. `a^1/2 + 1`.
    pub fn parse_symbol(text: &str, symbol: char, f: &MidField) -> Result<Self, PolyError> {
        let mut out = Self::zero();
        for t in parse_terms(text, symbol)? {
            if t.coeff >= f.q() as u64 {
                return Err(PolyError::InvalidCoefficient(t.coeff));
            }
            let c = Fq(t.coeff as u32);
            out.add_term2(t.exp2, if t.negative { f.neg(c) } else { c }, f);
        }
        Ok(out)
    }
}

/// ζ^i for i = 0..=q.
pub(crate) fn mu_powers(top: &ExtField) -> Vec<Fq2> {
    top.mu()
}

impl LaurentPoly {
    /// Highest exponent first, every term as `c*s^e` except constants.
    pub fn to_string_in(&self, symbol: char) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .rev()
            .map(|(&e, &c)| if e == 0 { c.0.to_string() } else { format!("{}*{symbol}^{}", c.0, format_exponent(e)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.write_str(&self.to_string_in('x'))
    }
}
