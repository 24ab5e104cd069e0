//! From (h₁(a), h₂(a)) back to h(x), and from h(x) to f(x) = x^r·h(x^(q−1)).

pub mod family;

use serde::Serialize;
use thiserror::Error;

use crate::ff::{Field, FieldCtx, Fq, MidField};
use crate::poly::{LaurentPoly, PolyError, UniPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("h1 and h2 are both zero")]
    ZeroPair,
    #[error("h is the zero polynomial")]
    ZeroPolynomial,
    #[error("division loop did not terminate")]
    NonTerminating,
    #[error("half-integer exponents need characteristic 2")]
    HalfExponentInOddCharacteristic,
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// σ = x^(1/2) + x^(−1/2); σ² = x + x⁻¹ in characteristic 2.
fn sigma(f: &MidField) -> LaurentPoly {
    LaurentPoly::monomial2(Fq(1), 1).add(&LaurentPoly::monomial2(Fq(1), -1), f)
}

fn x_plus_inverse(f: &MidField) -> LaurentPoly {
    LaurentPoly::monomial(Fq(1), 1).add(&LaurentPoly::monomial(Fq(1), -1), f)
}

/// x − x⁻¹.
fn x_minus_inverse(f: &MidField) -> LaurentPoly {
    LaurentPoly::monomial(Fq(1), 1).sub(&LaurentPoly::monomial(Fq(1), -1), f)
}

/// Substitutes a = x + x⁻¹ into a polynomial in `a` whose exponents may be
/// halves (given as a [`LaurentPoly`] read in the symbol `a`). Half powers
/// use a^(1/2) = x^(1/2) + x^(−1/2), valid in characteristic 2 only.
pub fn substitute_a(ctx: &FieldCtx, p: &LaurentPoly) -> Result<LaurentPoly, ConstructError> {
    let f = ctx.mid();
    if p.exp2_range().is_some_and(|(lo, _)| lo < 0) {
        return Err(PolyError::Parse("negative power of a".into()).into());
    }
    let half = p.has_half_exponents();
    if half && !ctx.is_char2() {
        return Err(ConstructError::HalfExponentInOddCharacteristic);
    }
    let (step, unit) = if half { (sigma(f), 1) } else { (x_plus_inverse(f), 2) };
    let Some((_, hi)) = p.exp2_range() else {
        return Ok(LaurentPoly::zero());
    };
    let mut acc = LaurentPoly::zero();
    let mut e = hi;
    while e >= 0 {
        acc = acc.mul(&step, f).add(&LaurentPoly::constant(p.coeff2(e)), f);
        e -= unit;
    }
    Ok(acc)
}

/// Algorithm 2: h(x) = h₁(x + x⁻¹)·x + h₂(x + x⁻¹), then strip the factors
/// vanishing at x = ±1. Characteristic 2 divides by x^(1/2) + x^(−1/2)
/// while h(1) = 0; odd characteristic divides by x − x⁻¹ while
/// h(1) = h(−1) = 0.
pub fn construct_h(ctx: &FieldCtx, h1: &UniPoly, h2: &UniPoly) -> Result<LaurentPoly, ConstructError> {
    construct_h_dyadic(ctx, &lift_a(ctx, h1), &lift_a(ctx, h2))
}

/// [`construct_h`] for h₁, h₂ with possible a^(n/2) terms, each given as a
/// [`LaurentPoly`] in the symbol `a`.
pub fn construct_h_dyadic(ctx: &FieldCtx, h1: &LaurentPoly, h2: &LaurentPoly) -> Result<LaurentPoly, ConstructError> {
    construct_h_counted(ctx, h1, h2).map(|(h, _)| h)
}

/// [`construct_h_dyadic`] that also reports how many divisions were made.
/// In odd characteristic (x − x⁻¹)^(q−1) = −1 on μ_{q+1}, so each division
/// negates g(x) = x·h(x)^(q−1); in characteristic 2 g is unchanged.
pub fn construct_h_counted(
    ctx: &FieldCtx,
    h1: &LaurentPoly,
    h2: &LaurentPoly,
) -> Result<(LaurentPoly, u32), ConstructError> {
    if h1.is_zero() && h2.is_zero() {
        return Err(ConstructError::ZeroPair);
    }
    let f = ctx.mid();
    let x = LaurentPoly::monomial(Fq(1), 1);
    let mut h = substitute_a(ctx, h1)?.mul(&x, f).add(&substitute_a(ctx, h2)?, f);
    let divisions = strip_unit_roots(ctx, &mut h)?;
    Ok((h, divisions))
}

/// Lifts a polynomial in a to a [`LaurentPoly`] read in the symbol a.
pub fn lift_a(ctx: &FieldCtx, u: &UniPoly) -> LaurentPoly {
    LaurentPoly::from_terms(u.coeffs().iter().enumerate().map(|(i, &c)| (i as i64, c)), ctx.mid())
}

/// h at x = 1 (every x^e evaluates to 1).
fn value_at_one(f: &MidField, h: &LaurentPoly) -> Fq {
    h.terms2().fold(Fq(0), |acc, (_, c)| f.add(acc, c))
}

/// h at x = −1 for integer exponents.
fn value_at_minus_one(f: &MidField, h: &LaurentPoly) -> Fq {
    h.terms2().fold(Fq(0), |acc, (e2, c)| if (e2 / 2) % 2 == 0 { f.add(acc, c) } else { f.sub(acc, c) })
}

fn strip_unit_roots(ctx: &FieldCtx, h: &mut LaurentPoly) -> Result<u32, ConstructError> {
    let f = ctx.mid();
    let (divisor, bound) = match h.exp2_range() {
        None => return Err(ConstructError::ZeroPolynomial),
        Some((lo, hi)) => {
            let d = if ctx.is_char2() { sigma(f) } else { x_minus_inverse(f) };
            (d, (hi - lo) as usize + 1)
        }
    };
    for count in 0..bound {
        let vanishes = if ctx.is_char2() {
            value_at_one(f, h) == Fq(0)
        } else {
            value_at_one(f, h) == Fq(0) && value_at_minus_one(f, h) == Fq(0)
        };
        if !vanishes {
            return Ok(count as u32);
        }
        *h = h.div_exact(&divisor, f)?;
    }
    Err(ConstructError::NonTerminating)
}

/// f(x) = x^r·h(x^(q−1)) as a sparse polynomial over F_{q²}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssembledPP {
    /// (exponent, coefficient encoding), exponents ascending in [1, q²−1].
    pub terms: Vec<(u64, u32)>,
    pub r: i64,
    /// True when the exponents describe f(x²) because h had half exponents.
    pub doubled: bool,
}

impl AssembledPP {
    pub fn exponents(&self) -> Vec<u64> {
        self.terms.iter().map(|&(e, _)| e).collect()
    }

    pub fn sparse(&self) -> Vec<(u64, Fq)> {
        self.terms.iter().map(|&(e, c)| (e, Fq(c))).collect()
    }

    /// `c*x^e` terms, highest exponent first.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().rev().map(|&(e, c)| format!("{c}*x^{e}")).collect::<Vec<_>>().join(" + ")
    }
}

/// Exponents r + e(q−1) reduced into [1, q²−1], so that f(0) = 0 is kept.
pub fn assemble_f(ctx: &FieldCtx, h: &LaurentPoly, r: i64) -> Result<AssembledPP, ConstructError> {
    if h.is_zero() {
        return Err(ConstructError::ZeroPolynomial);
    }
    let (h, doubled) = h.to_integer_exponents();
    if doubled && !ctx.is_char2() {
        return Err(ConstructError::HalfExponentInOddCharacteristic);
    }
    let r_eff = if doubled { 2 * r } else { r };
    let n = (ctx.q2() - 1) as i128;
    let q = ctx.q() as i128;
    let f = ctx.mid();
    let mut merged = std::collections::BTreeMap::<u64, Fq>::new();
    for (e, c) in h.integer_terms()? {
        let mut exp = (r_eff as i128 + e as i128 * (q - 1)).rem_euclid(n);
        if exp == 0 {
            exp = n;
        }
        let slot = merged.entry(exp as u64).or_insert(Fq(0));
        *slot = f.add(*slot, c);
    }
    let terms = merged.into_iter().filter(|&(_, c)| c != Fq(0)).map(|(e, c)| (e, c.0)).collect();
    Ok(AssembledPP { terms, r, doubled })
}
