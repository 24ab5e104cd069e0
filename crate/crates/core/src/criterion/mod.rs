//! The verification engine: the sets S and T, the rational maps R, ψ and
//! L, and the four-condition test for x^r·h(x^(q−1)) to permute F_{q²}.

use serde::Serialize;
use thiserror::Error;

use crate::construct::{assemble_f, ConstructError};
use crate::ff::{sqrt, Field, FieldCtx, Fq, Fq2, MidField};
use crate::numtheory::gcd;
use crate::oracle::{check_on_set, check_sparse_poly, Failure, PermVerdict};
use crate::poly::{LaurentPoly, PolyError, UniPoly};
use crate::reduce::{dickson, dickson_value, reduce_h, ReducedPair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriterionError {
    #[error("S built by definition and as the image of the unit circle disagree")]
    InternalMismatch,
    #[error("denominator of R vanishes identically")]
    ZeroDenominatorPolynomial,
    #[error("denominator of psi vanishes identically")]
    DegenerateDenominator,
    #[error("discriminant has no polynomial square root")]
    NonPolynomialSquareRoot,
    #[error("h is the zero polynomial")]
    ZeroPolynomial,
    #[error("exponent r must be positive, got {0}")]
    InvalidExponent(i64),
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("operation requires characteristic 2")]
    OddCharacteristic,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// A sorted subset of F_q (S or T).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    pub elems: Vec<Fq>,
    pub even_char: bool,
}

impl ParamSet {
    pub fn contains(&self, a: Fq) -> bool {
        self.elems.binary_search(&a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

fn in_s(f: &MidField, a: Fq) -> bool {
    if f.p() == 2 {
        f.inv(a).is_some_and(|ia| f.trace(ia) == 1)
    } else {
        f.eta(f.sub(f.mul(a, a), f.of_int(4))) == -1
    }
}

/// S = {a ≠ 0 : Tr(1/a) = 1} (char 2) or {a : η(a² − 4) = −1} (odd),
/// checked against {x + x^q : x ∈ μ_{q+1} \ {±1}}.
pub fn build_s(ctx: &FieldCtx) -> Result<ParamSet, CriterionError> {
    let f = ctx.mid();
    let top = ctx.top();
    let by_definition: Vec<Fq> = f.elements().filter(|&a| in_s(f, a)).collect();
    let minus_one = top.neg(top.one());
    let mut image: Vec<Fq> =
        top.mu().into_iter().filter(|&x| x != top.one() && x != minus_one).map(|x| top.trace_to_mid(x)).collect();
    image.sort();
    image.dedup();
    if image != by_definition {
        return Err(CriterionError::InternalMismatch);
    }
    Ok(ParamSet { elems: by_definition, even_char: ctx.is_char2() })
}

/// S by its defining predicate only.
pub fn s_elements(ctx: &FieldCtx) -> Vec<Fq> {
    let f = ctx.mid();
    f.elements().filter(|&a| in_s(f, a)).collect()
}

/// {2, −2} ∪ S, which is {0} ∪ S in characteristic 2. Sorted.
pub fn s_with_poles(ctx: &FieldCtx) -> Vec<Fq> {
    let f = ctx.mid();
    let mut out = s_elements(ctx);
    out.push(f.of_int(2));
    out.push(f.of_int(-2));
    out.sort();
    out.dedup();
    out
}

/// Membership in T for a single element.
pub fn in_t(f: &MidField, b: Fq) -> bool {
    if f.p() == 2 {
        f.trace(b) == 1
    } else {
        f.eta(b) == -1 && f.eta(f.add(b, f.of_int(4))) == 1
    }
}

/// T = {b : Tr(b) = 1} (char 2) or {b : η(b) = −1, η(b + 4) = 1} (odd).
pub fn build_t(ctx: &FieldCtx) -> ParamSet {
    let f = ctx.mid();
    ParamSet { elems: f.elements().filter(|&b| in_t(f, b)).collect(), even_char: ctx.is_char2() }
}

/// num(a) / den(a) with polynomial numerator and denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl RationalMap {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        RationalMap { num, den }
    }

    /// `None` at a pole.
    pub fn eval(&self, a: Fq, f: &MidField) -> Option<Fq> {
        f.div(self.num.eval(a, f), self.den.eval(a, f))
    }

    /// num(1/b)/den(1/b) rewritten over polynomials in b.
    pub fn at_reciprocal(&self) -> RationalMap {
        let d = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        let rev = |p: &UniPoly| {
            let mut c = vec![Fq(0); d + 1];
            for (i, &x) in p.coeffs().iter().enumerate() {
                c[d - i] = x;
            }
            UniPoly::from_coeffs(c)
        };
        RationalMap { num: rev(&self.num), den: rev(&self.den) }
    }
}

impl std::fmt::Display for RationalMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// R(a) = (h₁²D_{r−2} + h₂²D_r + 2h₁h₂D_{r−1}) / (h₁² + h₁h₂a + h₂²).
pub fn big_r(ctx: &FieldCtx, pair: &ReducedPair, r: i64) -> Result<RationalMap, CriterionError> {
    let f = ctx.mid();
    let (h1, h2) = (&pair.h1, &pair.h2);
    let h11 = h1.mul(h1, f);
    let h22 = h2.mul(h2, f);
    let h12 = h1.mul(h2, f);
    let num = h11
        .mul(&dickson(f, r - 2), f)
        .add(&h22.mul(&dickson(f, r), f), f)
        .add(&h12.mul(&dickson(f, r - 1), f).scale(f.of_int(2), f), f);
    let den = h11.add(&h12.mul(&UniPoly::var(), f), f).add(&h22, f);
    if den.is_zero() {
        return Err(CriterionError::ZeroDenominatorPolynomial);
    }
    Ok(RationalMap { num, den })
}

/// R(a) at a point; `None` where the denominator vanishes.
pub fn r_value(f: &MidField, h1a: Fq, h2a: Fq, r: i64, a: Fq) -> Option<Fq> {
    let h11 = f.mul(h1a, h1a);
    let h22 = f.mul(h2a, h2a);
    let h12 = f.mul(h1a, h2a);
    let num = f.add(
        f.add(f.mul(h11, dickson_value(f, r - 2, a)), f.mul(h22, dickson_value(f, r, a))),
        f.mul(f.mul(f.of_int(2), h12), dickson_value(f, r - 1, a)),
    );
    let den = f.add(f.add(h11, f.mul(h12, a)), h22);
    f.div(num, den)
}

/// ψ = h₁/(h₁ + h₂), characteristic 2.
pub fn even_psi(ctx: &FieldCtx, pair: &ReducedPair) -> Result<RationalMap, CriterionError> {
    if !ctx.is_char2() {
        return Err(CriterionError::OddCharacteristic);
    }
    let f = ctx.mid();
    let den = pair.h1.add(&pair.h2, f);
    if den.is_zero() {
        return Err(CriterionError::DegenerateDenominator);
    }
    Ok(RationalMap { num: pair.h1.clone(), den })
}

/// ψ = (h₁² − h₂²)/(h₁h₂a + h₁² + h₂²), odd characteristic.
pub fn odd_psi(ctx: &FieldCtx, pair: &ReducedPair) -> Result<RationalMap, CriterionError> {
    if ctx.is_char2() {
        return Err(CriterionError::EvenCharacteristic);
    }
    let f = ctx.mid();
    let (h1, h2) = (&pair.h1, &pair.h2);
    let h11 = h1.mul(h1, f);
    let h22 = h2.mul(h2, f);
    let num = h11.sub(&h22, f);
    let den = h1.mul(h2, f).mul(&UniPoly::var(), f).add(&h11, f).add(&h22, f);
    if den.is_zero() {
        return Err(CriterionError::DegenerateDenominator);
    }
    Ok(RationalMap { num, den })
}

/// The odd-characteristic map (a² − 4)ψ(a)² + 4 at a point.
pub fn odd_r_value(f: &MidField, psi: &RationalMap, a: Fq) -> Option<Fq> {
    let p = psi.eval(a, f)?;
    let b = f.sub(f.mul(a, a), f.of_int(4));
    Some(f.add(f.mul(b, f.mul(p, p)), f.of_int(4)))
}

/// L(b) = b + l(b) + l(b)² with l(b) = ψ(1/b), characteristic 2.
pub fn even_l_value(f: &MidField, psi: &RationalMap, b: Fq) -> Option<Fq> {
    let l = psi.eval(f.inv(b)?, f)?;
    Some(f.add(f.add(b, l), f.mul(l, l)))
}

/// L(b) = b·l(b)² with l(b) = ψ(ε), ε² = b + 4 (the smaller-encoded root).
pub fn odd_l_value(f: &MidField, psi: &RationalMap, b: Fq) -> Option<Fq> {
    let eps = sqrt(f, f.add(b, f.of_int(4)))?;
    let l = psi.eval(eps, f)?;
    Some(f.mul(b, f.mul(l, l)))
}

/// Tests whether `l_map` permutes T: injective with images in T. Images
/// leaving T are reported as escapes.
pub fn check_l_permutes_t(ctx: &FieldCtx, l_map: impl Fn(Fq) -> Option<Fq>) -> PermVerdict {
    let t: Vec<u64> = build_t(ctx).elems.into_iter().map(|b| b.0 as u64).collect();
    check_on_set(&t, ctx.q() as u64, false, |b| l_map(Fq(b as u32)).map(|y| y.0 as u64))
}

/// Which square root of the discriminant to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Exact square root of a polynomial in odd characteristic; the leading
/// coefficient of the root is the smaller-encoded square root.
pub fn poly_sqrt(f: &MidField, n: &UniPoly) -> Option<UniPoly> {
    let Some(deg) = n.degree() else {
        return Some(UniPoly::zero());
    };
    if deg % 2 != 0 {
        return None;
    }
    let m = deg / 2;
    let mut s = vec![Fq(0); m + 1];
    s[m] = sqrt(f, n.lead())?;
    let two_lead_inv = f.inv(f.mul(f.of_int(2), s[m]))?;
    for i in 1..=m {
        let mut acc = n.coeff(2 * m - i);
        for j in 1..i {
            acc = f.sub(acc, f.mul(s[m - j], s[m - i + j]));
        }
        s[m - i] = f.mul(acc, two_lead_inv);
    }
    let s = UniPoly::from_coeffs(s);
    (s.mul(&s, f) == *n).then_some(s)
}

/// Solves (ψ − 1)H² + aψH + ψ + 1 = 0 for H = h₁/h₂ given ψ = num/den:
/// h₁ = −a·num ± √N, h₂ = 2(num − den), N = (a² − 4)num² + 4den².
/// When num = den the equation is linear: h₁ = −(num + den), h₂ = a·num.
pub fn invert_h_from_psi(ctx: &FieldCtx, psi: &RationalMap, branch: Branch) -> Result<ReducedPair, CriterionError> {
    if ctx.is_char2() {
        return Err(CriterionError::EvenCharacteristic);
    }
    let f = ctx.mid();
    let (num, den) = (&psi.num, &psi.den);
    let a = UniPoly::var();
    let h2 = num.sub(den, f).scale(f.of_int(2), f);
    if h2.is_zero() {
        return Ok(ReducedPair::new(num.add(den, f).neg(f), a.mul(num, f)));
    }
    let a2m4 = UniPoly::from_coeffs(vec![f.of_int(-4), Fq(0), Fq(1)]);
    let n = a2m4.mul(&num.mul(num, f), f).add(&den.mul(den, f).scale(f.of_int(4), f), f);
    let root = poly_sqrt(f, &n).ok_or(CriterionError::NonPolynomialSquareRoot)?;
    let root = match branch {
        Branch::Plus => root,
        Branch::Minus => root.neg(f),
    };
    let h1 = a.mul(num, f).neg(f).add(&root, f);
    Ok(ReducedPair::new(h1, h2))
}

/// A counterexample attached to a failed condition. Elements are encodings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Witness {
    Gcd { r: i64, gcd: u64 },
    GFixed { x: u64, g: u64 },
    HZero { x: u64 },
    DegeneratePoint { a: u64 },
    RNotPermutation { failure: Failure },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub gcd_ok: bool,
    pub g_fixed_ok: bool,
    pub h_nonzero_ok: bool,
    pub r_permutes_ok: bool,
    #[serde(rename = "oracle")]
    pub oracle_verdict: Option<bool>,
    pub witnesses: Vec<Witness>,
    /// True when h had half exponents and f(x²) was examined instead.
    pub doubled: bool,
}

impl VerifyReport {
    pub fn conditions_hold(&self) -> bool {
        self.gcd_ok && self.g_fixed_ok && self.h_nonzero_ok && self.r_permutes_ok
    }

    /// The four conditions agree with the oracle (vacuously when it was not run).
    pub fn consistent(&self) -> bool {
        self.oracle_verdict.is_none_or(|v| v == self.conditions_hold())
    }
}

/// g(x) = x^r·h(x)^q/h(x) at each ζ^i, from the values of h on μ_{q+1}.
/// `None` where h vanishes.
pub fn g_on_mu(ctx: &FieldCtx, h_on_mu: &[Fq2], r: u64) -> Vec<Option<Fq2>> {
    let top = ctx.top();
    let mu = top.mu();
    let m = mu.len();
    (0..m)
        .map(|i| {
            // h(x)^q = h(x^q) = h(x⁻¹) because h has coefficients in F_q
            let hq = h_on_mu[(m - i) % m];
            let xr = mu[(i as u64 * (r % m as u64) % m as u64) as usize];
            top.div(top.mul(xr, hq), h_on_mu[i])
        })
        .collect()
}

/// Checks conditions (i)–(iv) for f = x^r·h(x^(q−1)), optionally against
/// the brute-force oracle on F_{q²}.
pub fn check_conditions(
    ctx: &FieldCtx,
    h: &LaurentPoly,
    r: i64,
    run_oracle: bool,
) -> Result<VerifyReport, CriterionError> {
    if h.is_zero() {
        return Err(CriterionError::ZeroPolynomial);
    }
    if r < 1 {
        return Err(CriterionError::InvalidExponent(r));
    }
    let (h_int, doubled) = h.to_integer_exponents();
    if doubled && !ctx.is_char2() {
        return Err(PolyError::HalfExponentInOddCharacteristic.into());
    }
    let r_eff = if doubled { 2 * r } else { r };
    let f = ctx.mid();
    let top = ctx.top();
    let mut witnesses = Vec::new();

    let g = gcd(r_eff as u64, ctx.q() as u64 - 1);
    let gcd_ok = g == 1;
    if !gcd_ok {
        witnesses.push(Witness::Gcd { r: r_eff, gcd: g });
    }

    let hv = h_int.values_on_mu(ctx)?;
    let mu = top.mu();
    let mut h_nonzero_ok = true;
    for (i, v) in hv.iter().enumerate() {
        if *v == Fq2(0) {
            h_nonzero_ok = false;
            witnesses.push(Witness::HZero { x: mu[i].0 as u64 });
        }
    }

    let one = top.one();
    let minus_one = top.neg(one);
    let mut g_fixed_ok = true;
    for (i, gv) in g_on_mu(ctx, &hv, r_eff as u64).into_iter().enumerate() {
        let Some(gv) = gv else { continue };
        let x = mu[i];
        if (gv == one && x != one) || (gv == minus_one && x != minus_one) {
            g_fixed_ok = false;
            witnesses.push(Witness::GFixed { x: x.0 as u64, g: gv.0 as u64 });
        }
    }

    let pair = reduce_h(ctx, &h_int)?;
    let domain = s_with_poles(ctx);
    let mut values = Vec::with_capacity(domain.len());
    let mut degenerate = false;
    for &a in &domain {
        match r_value(f, pair.h1.eval(a, f), pair.h2.eval(a, f), r_eff, a) {
            Some(v) => values.push((a, v)),
            None => {
                degenerate = true;
                witnesses.push(Witness::DegeneratePoint { a: a.0 as u64 });
            }
        }
    }
    let r_permutes_ok = !degenerate && {
        let elems: Vec<u64> = domain.iter().map(|a| a.0 as u64).collect();
        let lookup = |a: u64| values.iter().find(|(x, _)| x.0 as u64 == a).map(|(_, v)| v.0 as u64);
        let verdict = check_on_set(&elems, ctx.q() as u64, false, lookup);
        if let Some(failure) = verdict.failure {
            witnesses.push(Witness::RNotPermutation { failure });
        }
        verdict.is_permutation
    };

    let oracle_verdict = if run_oracle {
        let pp = assemble_f(ctx, h, r)?;
        Some(check_sparse_poly(ctx, &pp.sparse()).is_permutation)
    } else {
        None
    };

    Ok(VerifyReport { gcd_ok, g_fixed_ok, h_nonzero_ok, r_permutes_ok, oracle_verdict, witnesses, doubled })
}

/// The conditions of the T-level theorems for f = x·h(x^(q−1)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TLevelReport {
    /// h(1) ≠ 0 (and h(−1) ≠ 0 in odd characteristic).
    pub h_unit_ok: bool,
    /// h₁ ≠ h₂ on S (char 2) or h₁² ≠ h₂² at ε(b) for b ∈ T (odd).
    pub h_ratio_ok: bool,
    pub l_verdict: PermVerdict,
}

impl TLevelReport {
    pub fn holds(&self) -> bool {
        self.h_unit_ok && self.h_ratio_ok && self.l_verdict.is_permutation
    }
}

/// Evaluates the T-level characterisation for r = 1 from h directly.
pub fn check_t_level(ctx: &FieldCtx, h: &LaurentPoly) -> Result<TLevelReport, CriterionError> {
    let (h_int, _) = h.to_integer_exponents();
    let pair = reduce_h(ctx, &h_int)?;
    check_t_level_pair(ctx, h, &pair)
}

/// As [`check_t_level`] with the reduced pair of h already known, which
/// avoids reducing h over large fields.
pub fn check_t_level_pair(ctx: &FieldCtx, h: &LaurentPoly, pair: &ReducedPair) -> Result<TLevelReport, CriterionError> {
    let (h_int, _) = h.to_integer_exponents();
    let f = ctx.mid();
    let at = |x: i64| {
        h_int.terms2().fold(Fq(0), |acc, (e2, c)| {
            let sign = if x == -1 && (e2 / 2) % 2 != 0 { f.neg(c) } else { c };
            f.add(acc, sign)
        })
    };
    if ctx.is_char2() {
        let h_unit_ok = at(1) != Fq(0);
        let h_ratio_ok = s_elements(ctx).into_iter().all(|a| pair.h1.eval(a, f) != pair.h2.eval(a, f));
        let psi = even_psi(ctx, pair)?;
        let l_verdict = check_l_permutes_t(ctx, |b| even_l_value(f, &psi, b));
        Ok(TLevelReport { h_unit_ok, h_ratio_ok, l_verdict })
    } else {
        let h_unit_ok = at(1) != Fq(0) && at(-1) != Fq(0);
        let t = build_t(ctx);
        let h_ratio_ok = t.elems.iter().all(|&b| {
            let eps = sqrt(f, f.add(b, f.of_int(4))).expect("b + 4 is a square on T");
            let (u, v) = (pair.h1.eval(eps, f), pair.h2.eval(eps, f));
            f.mul(u, u) != f.mul(v, v)
        });
        let psi = odd_psi(ctx, pair)?;
        let l_verdict = check_l_permutes_t(ctx, |b| odd_l_value(f, &psi, b));
        Ok(TLevelReport { h_unit_ok, h_ratio_ok, l_verdict })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, k: u32) -> FieldCtx {
        FieldCtx::new(p, k).unwrap()
    }

    #[test]
    fn s_examples() {
        let c = ctx(2, 2);
        assert_eq!(build_s(&c).unwrap().elems, vec![Fq(2), Fq(3)]);
        assert_eq!(build_s(&ctx(2, 1)).unwrap().elems, vec![Fq(1)]);
        assert_eq!(build_s(&ctx(3, 1)).unwrap().elems, vec![Fq(0)]);
        for (p, k) in [(2, 5), (3, 3), (5, 2), (7, 2), (2, 8)] {
            build_s(&ctx(p, k)).unwrap();
        }
    }

    #[test]
    fn t_examples() {
        assert_eq!(build_t(&ctx(2, 2)).elems, vec![Fq(2), Fq(3)]);
        assert_eq!(build_t(&ctx(2, 3)).len(), 4);
        assert_eq!(build_t(&ctx(7, 1)).elems, vec![Fq(5)]);
    }

    #[test]
    fn big_r_examples() {
        let c = ctx(5, 1);
        let f = c.mid();
        let pair = ReducedPair::new(UniPoly::one(), UniPoly::one());
        let r = big_r(&c, &pair, 1).unwrap();
        for a in f.elements() {
            if let Some(v) = r.eval(a, f) {
                assert_eq!(v, Fq(2));
            }
        }
        // char 2, Example 1 pair: R = a / (a³ + a² + 1)
        let c = ctx(2, 4);
        let f = c.mid();
        let pair = ReducedPair::new(UniPoly::parse("a + 1", f).unwrap(), UniPoly::var());
        let r = big_r(&c, &pair, 1).unwrap();
        let want = RationalMap::new(UniPoly::var(), UniPoly::parse("a^3 + a^2 + 1", f).unwrap());
        assert_eq!(r, want);
        let zero = ReducedPair::new(UniPoly::zero(), UniPoly::zero());
        assert_eq!(big_r(&c, &zero, 1), Err(CriterionError::ZeroDenominatorPolynomial));
    }

    #[test]
    fn psi_examples() {
        let c = ctx(2, 4);
        let f = c.mid();
        let pair = ReducedPair::new(UniPoly::var(), UniPoly::parse("a + 1", f).unwrap());
        let psi = even_psi(&c, &pair).unwrap();
        assert_eq!(psi, RationalMap::new(UniPoly::var(), UniPoly::one()));
        // l(b) = ψ(1/b) = 1/b
        let l = psi.at_reciprocal();
        assert_eq!(l, RationalMap::new(UniPoly::one(), UniPoly::var()));
        let pair = ReducedPair::new(UniPoly::parse("a^2", f).unwrap(), UniPoly::one());
        let l = even_psi(&c, &pair).unwrap().at_reciprocal();
        assert_eq!(l, RationalMap::new(UniPoly::one(), UniPoly::parse("a^2 + 1", f).unwrap()));
        let same = ReducedPair::new(UniPoly::var(), UniPoly::var());
        assert_eq!(even_psi(&c, &same), Err(CriterionError::DegenerateDenominator));

        let c = ctx(5, 1);
        let f = c.mid();
        let psi = odd_psi(&c, &ReducedPair::new(UniPoly::zero(), UniPoly::one())).unwrap();
        // a = 1 lies in S for q = 5; a = 3 = −2 does not
        assert_eq!(psi.eval(Fq(1), f), Some(f.of_int(-1)));
        assert_eq!(odd_r_value(f, &psi, Fq(1)), Some(Fq(1)));
        let psi = odd_psi(&c, &ReducedPair::new(UniPoly::one(), UniPoly::one())).unwrap();
        assert_eq!(odd_r_value(f, &psi, Fq(1)), Some(Fq(4)));
        assert_eq!(odd_r_value(f, &psi, Fq(3)), None);
    }

    #[test]
    fn invert_case_one() {
        // ψ = (a² − 4)^((p^m − 1)/2) with p = 3, m = 1: Δ = a^6, root a^3
        let c = ctx(3, 2);
        let f = c.mid();
        let a2m4 = UniPoly::from_coeffs(vec![f.of_int(-4), Fq(0), Fq(1)]);
        let psi = RationalMap::new(a2m4.clone(), UniPoly::one());
        let pair = invert_h_from_psi(&c, &psi, Branch::Plus).unwrap();
        // h1 = −aψ + a³ = 4a, h2 = 2ψ − 2
        assert_eq!(pair.h1, UniPoly::from_coeffs(vec![Fq(0), f.of_int(4)]));
        assert_eq!(pair.h2, a2m4.scale(f.of_int(2), f).sub(&UniPoly::constant(f.of_int(2)), f));
        let zero = RationalMap::new(UniPoly::zero(), UniPoly::one());
        let pair = invert_h_from_psi(&c, &zero, Branch::Plus).unwrap();
        // H = h1/h2 = 1 in characteristic 3
        assert_eq!(pair.h1, pair.h2);
        let bad = RationalMap::new(UniPoly::from_coeffs(vec![Fq(1), Fq(1)]), UniPoly::one());
        assert_eq!(invert_h_from_psi(&c, &bad, Branch::Plus), Err(CriterionError::NonPolynomialSquareRoot));
    }

    #[test]
    fn conditions_on_examples() {
        let c = ctx(2, 3);
        let f = c.mid();
        let h = LaurentPoly::parse("x^2 + x + x^-1", f).unwrap();
        let rep = check_conditions(&c, &h, 1, true).unwrap();
        assert!(rep.conditions_hold());
        assert_eq!(rep.oracle_verdict, Some(true));

        let rep = check_conditions(&c, &LaurentPoly::one(), 1, true).unwrap();
        assert!(rep.conditions_hold() && rep.consistent());

        let c = ctx(2, 2);
        let h = LaurentPoly::parse("x + 1", c.mid()).unwrap();
        let rep = check_conditions(&c, &h, 1, true).unwrap();
        assert!(!rep.h_nonzero_ok);
        assert_eq!(rep.oracle_verdict, Some(false));
        assert!(rep.witnesses.contains(&Witness::HZero { x: 1 }));
    }
}
