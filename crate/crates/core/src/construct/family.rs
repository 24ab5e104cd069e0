//! Explicit permutation families with their predicted status.
//!
//! Characteristic-2 families go through the pair (h₁, h₂) and Algorithm 2.
//! The odd-characteristic families use the closed forms for h, reduced
//! modulo x^(q+1) − 1; this leaves f unchanged as a map on F_{q²} because
//! (x^(q−1))^(q+1) = 1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{assemble_f, construct_h, AssembledPP, ConstructError};
use crate::ff::{Field, FieldCtx, Fq, MidField};
use crate::numtheory::gcd;
use crate::poly::{LaurentPoly, UniPoly};
use crate::reduce::ReducedPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    #[serde(rename = "PP_s_minus_1")]
    SMinus1,
    #[serde(rename = "PP_s_minus_2")]
    SMinus2,
    #[serde(rename = "s3")]
    S3,
    #[serde(rename = "s4")]
    S4,
    #[serde(rename = "q4")]
    Q4,
    #[serde(rename = "lin_mon_i")]
    LinMonI,
    #[serde(rename = "lin_mon_ii")]
    LinMonII,
    #[serde(rename = "lin_mon_iii")]
    LinMonIII,
    #[serde(rename = "lin_bin_i")]
    LinBinI,
    #[serde(rename = "lin_bin_ii")]
    LinBinII,
    #[serde(rename = "lin_bin_iii")]
    LinBinIII,
    #[serde(rename = "lin_bin_iv")]
    LinBinIV,
    #[serde(rename = "trinomial_b_b4_b8")]
    TrinomialB4B8,
    #[serde(rename = "trinomial_b_b2_b8")]
    TrinomialB2B8,
    #[serde(rename = "odd_case_I")]
    OddCaseI,
    #[serde(rename = "odd_case_II")]
    OddCaseII,
    #[serde(rename = "odd_case_III")]
    OddCaseIII,
    #[serde(rename = "odd_case_IV")]
    OddCaseIV,
}

impl FamilyId {
    pub const ALL: [FamilyId; 18] = [
        FamilyId::SMinus1,
        FamilyId::SMinus2,
        FamilyId::S3,
        FamilyId::S4,
        FamilyId::Q4,
        FamilyId::LinMonI,
        FamilyId::LinMonII,
        FamilyId::LinMonIII,
        FamilyId::LinBinI,
        FamilyId::LinBinII,
        FamilyId::LinBinIII,
        FamilyId::LinBinIV,
        FamilyId::TrinomialB4B8,
        FamilyId::TrinomialB2B8,
        FamilyId::OddCaseI,
        FamilyId::OddCaseII,
        FamilyId::OddCaseIII,
        FamilyId::OddCaseIV,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::SMinus1 => "PP_s_minus_1",
            FamilyId::SMinus2 => "PP_s_minus_2",
            FamilyId::S3 => "s3",
            FamilyId::S4 => "s4",
            FamilyId::Q4 => "q4",
            FamilyId::LinMonI => "lin_mon_i",
            FamilyId::LinMonII => "lin_mon_ii",
            FamilyId::LinMonIII => "lin_mon_iii",
            FamilyId::LinBinI => "lin_bin_i",
            FamilyId::LinBinII => "lin_bin_ii",
            FamilyId::LinBinIII => "lin_bin_iii",
            FamilyId::LinBinIV => "lin_bin_iv",
            FamilyId::TrinomialB4B8 => "trinomial_b_b4_b8",
            FamilyId::TrinomialB2B8 => "trinomial_b_b2_b8",
            FamilyId::OddCaseI => "odd_case_I",
            FamilyId::OddCaseII => "odd_case_II",
            FamilyId::OddCaseIII => "odd_case_III",
            FamilyId::OddCaseIV => "odd_case_IV",
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, FamilyId::OddCaseI | FamilyId::OddCaseII | FamilyId::OddCaseIII | FamilyId::OddCaseIV)
    }

    /// Families built from a linearized l(b) = Σ αᵢ b^(2^i).
    pub fn is_linearized(self) -> bool {
        matches!(
            self,
            FamilyId::LinMonI
                | FamilyId::LinMonII
                | FamilyId::LinMonIII
                | FamilyId::LinBinI
                | FamilyId::LinBinII
                | FamilyId::LinBinIII
                | FamilyId::LinBinIV
                | FamilyId::TrinomialB4B8
                | FamilyId::TrinomialB2B8
        )
    }

    /// Whether the family exists over F_{p^k} at all.
    pub fn applies_to(self, p: u32, k: u32) -> bool {
        if self.is_odd() {
            return p != 2;
        }
        if p != 2 {
            return false;
        }
        match self {
            FamilyId::S3 => k % 2 == 1,
            FamilyId::S4 => k % 2 == 0,
            FamilyId::Q4 => k % 4 == 0,
            FamilyId::LinMonII | FamilyId::LinBinI => k >= 2,
            FamilyId::LinMonIII | FamilyId::LinBinIII => k >= 2,
            FamilyId::LinBinII => k >= 3,
            FamilyId::LinBinIV => k >= 3,
            FamilyId::TrinomialB4B8 | FamilyId::TrinomialB2B8 => k >= 3,
            _ => true,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = ConstructError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConstructError::InvalidParams(format!("unknown family {s}")))
    }
}

/// Discrete and field-valued parameters. Unused fields stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j2: Option<u32>,
    /// α₀ for lin_mon_i, lin_bin_i, lin_bin_iii; α_j otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    /// α_j for lin_bin_i; α_{j2} for lin_bin_ii.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<u32>,
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, v) in
            [("m", self.m), ("t", self.t), ("j", self.j), ("j2", self.j2), ("alpha", self.alpha), ("beta", self.beta)]
        {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        f.write_str(&parts.join(" "))
    }
}

/// One member of a family, ready for checking.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub family: FamilyId,
    pub params: FamilyParams,
    /// (h₁, h₂) for the characteristic-2 families.
    pub pair: Option<ReducedPair>,
    /// α₀, …, α_t for the linearized families.
    pub alphas: Option<Vec<Fq>>,
    pub h: LaurentPoly,
    pub predicted: bool,
    pub pp: AssembledPP,
}

fn invalid(msg: impl Into<String>) -> ConstructError {
    ConstructError::InvalidParams(msg.into())
}

fn need(v: Option<u32>, name: &str) -> Result<u32, ConstructError> {
    v.ok_or_else(|| invalid(format!("missing parameter {name}")))
}

fn field_elem(f: &MidField, v: Option<u32>, name: &str) -> Result<Fq, ConstructError> {
    let v = need(v, name)?;
    if v >= f.q() {
        return Err(invalid(format!("{name}={v} is not an element of F_{}", f.q())));
    }
    Ok(Fq(v))
}

/// a ↦ a^(2^e) in characteristic 2, with e taken modulo k.
fn frob2(f: &MidField, a: Fq, e: i64) -> Fq {
    f.frobenius(a, e.rem_euclid(f.k() as i64) as u32)
}

/// N_{2^k/2^d}(c) = c^((2^k − 1)/(2^d − 1)).
pub fn norm_to_subfield(f: &MidField, c: Fq, d: u32) -> Fq {
    let e = (f.q() as u64 - 1) / ((1u64 << d) - 1);
    f.pow(c, e)
}

/// The coefficients α₀..α_t prescribed by a linearized family, together
/// with the predicted permutation status.
pub fn linearized_alphas(
    f: &MidField,
    family: FamilyId,
    params: &FamilyParams,
) -> Result<(Vec<Fq>, bool), ConstructError> {
    let k = f.k();
    let one = Fq(1);
    let nonzero = |a: Fq, name: &str| if a == Fq(0) { Err(invalid(format!("{name} must be nonzero"))) } else { Ok(a) };
    let not_01 = |a: Fq, name: &str| {
        if a == Fq(0) || a == one {
            Err(invalid(format!("{name} must not be 0 or 1")))
        } else {
            Ok(a)
        }
    };
    // the norm criterion for L = c·b + b^(2^e) up to Frobenius
    let norm_ok = |c: Fq, e: u32| {
        let d = gcd(e as u64, k as u64) as u32;
        norm_to_subfield(f, c, d) != one
    };
    let div = |a: Fq, b: Fq| f.div(a, b).expect("nonzero by the family constraints");
    match family {
        FamilyId::LinMonI => {
            let a0 = nonzero(field_elem(f, params.alpha, "alpha")?, "alpha")?;
            Ok(((0..k).map(|i| frob2(f, a0, i as i64)).collect(), true))
        }
        FamilyId::LinMonII => {
            let j = need(params.j, "j")?;
            if j == 0 || j >= k {
                return Err(invalid("j must lie in [1, k-1]"));
            }
            let aj = nonzero(field_elem(f, params.alpha, "alpha")?, "alpha")?;
            let alphas = (0..k)
                .map(|i| {
                    let (i, j) = (i as i64, j as i64);
                    if i >= j {
                        frob2(f, aj, i - j)
                    } else {
                        f.add(one, frob2(f, aj, k as i64 + i - j))
                    }
                })
                .collect();
            Ok((alphas, true))
        }
        FamilyId::LinMonIII => {
            let t = need(params.t, "t")?;
            if t + 2 > k {
                return Err(invalid("t must be at most k-2"));
            }
            Ok((vec![one; t as usize + 1], true))
        }
        FamilyId::LinBinI => {
            let j = need(params.j, "j")?;
            if j == 0 || j >= k {
                return Err(invalid("j must lie in [1, k-1]"));
            }
            let a0 = field_elem(f, params.alpha, "alpha")?;
            let aj = nonzero(field_elem(f, params.beta, "beta")?, "beta")?;
            let a0j = frob2(f, a0, j as i64);
            let lead = f.add(f.add(frob2(f, aj, (k - j) as i64), a0), one);
            if aj == a0j || lead == Fq(0) {
                return Err(invalid("coefficients make L(b) a monomial"));
            }
            let alphas =
                (0..k).map(|i| if i < j { frob2(f, a0, i as i64) } else { frob2(f, aj, (i - j) as i64) }).collect();
            Ok((alphas, norm_ok(div(lead, f.add(aj, a0j)), j)))
        }
        FamilyId::LinBinII => {
            let (j1, j2) = (need(params.j, "j")?, need(params.j2, "j2")?);
            if !(1 <= j1 && j1 < j2 && j2 < k) {
                return Err(invalid("need 1 <= j < j2 <= k-1"));
            }
            let a1 = field_elem(f, params.alpha, "alpha")?;
            let a2 = nonzero(field_elem(f, params.beta, "beta")?, "beta")?;
            let low = f.add(f.add(a1, frob2(f, a2, (k - j2 + j1) as i64)), one);
            let high = f.add(a2, frob2(f, a1, (j2 - j1) as i64));
            if low == Fq(0) || high == Fq(0) {
                return Err(invalid("coefficients make L(b) a monomial"));
            }
            let alphas = (0..k)
                .map(|i| {
                    if i < j1 {
                        f.add(one, frob2(f, a2, (k - j2 + i) as i64))
                    } else if i < j2 {
                        frob2(f, a1, (i - j1) as i64)
                    } else {
                        frob2(f, a2, (i - j2) as i64)
                    }
                })
                .collect();
            Ok((alphas, norm_ok(div(high, low), k - j2 + j1)))
        }
        FamilyId::LinBinIII => {
            let t = need(params.t, "t")?;
            if t + 2 > k {
                return Err(invalid("t must be at most k-2"));
            }
            let a0 = not_01(field_elem(f, params.alpha, "alpha")?, "alpha")?;
            let alphas = (0..=t).map(|i| frob2(f, a0, i as i64)).collect();
            let c = div(f.add(one, a0), frob2(f, a0, t as i64 + 1));
            Ok((alphas, norm_ok(c, t + 1)))
        }
        FamilyId::LinBinIV => {
            let (t, j) = (need(params.t, "t")?, need(params.j, "j")?);
            if t + 2 > k || j == 0 || j > t {
                return Err(invalid("need 1 <= j <= t <= k-2"));
            }
            let aj = not_01(field_elem(f, params.alpha, "alpha")?, "alpha")?;
            let alphas = (0..=t).map(|i| if i < j { one } else { frob2(f, aj, (i - j) as i64) }).collect();
            let c = div(frob2(f, aj, (t - j + 1) as i64), f.add(aj, one));
            Ok((alphas, norm_ok(c, k + j - t - 1)))
        }
        FamilyId::TrinomialB4B8 => Ok((vec![Fq(0), Fq(0), one], k % 7 != 0)),
        FamilyId::TrinomialB2B8 => Ok((vec![Fq(0), one, one], k % 7 != 0)),
        _ => Err(invalid(format!("{family} is not a linearized family"))),
    }
}

/// h₁ = Σ αᵢ a^(2^t − 2^i), h₂ = h₁ + a^(2^t), from ψ(a) = l(1/a).
pub fn linearized_pair(f: &MidField, alphas: &[Fq]) -> ReducedPair {
    let t = alphas.len() - 1;
    let top = 1usize << t;
    let mut c = vec![Fq(0); top + 1];
    for (i, &a) in alphas.iter().enumerate() {
        c[top - (1 << i)] = f.add(c[top - (1 << i)], a);
    }
    let h1 = UniPoly::from_coeffs(c);
    let h2 = h1.add(&UniPoly::monomial(Fq(1), top), f);
    ReducedPair::new(h1, h2)
}

/// The pair for l(b) = b^s with s > 0: ψ(a) = a^(−s), h₁ = 1, h₂ = a^s + 1.
pub fn monomial_pair(s: usize) -> ReducedPair {
    assert!(s > 0, "monomial_pair needs a positive exponent");
    let mut c = vec![Fq(0); s + 1];
    c[0] = Fq(1);
    c[s] = Fq(1);
    ReducedPair::new(UniPoly::one(), UniPoly::from_coeffs(c))
}

fn even_pair(ctx: &FieldCtx, family: FamilyId) -> Result<ReducedPair, ConstructError> {
    let f = ctx.mid();
    let k = ctx.k();
    let a = UniPoly::var();
    Ok(match family {
        FamilyId::SMinus1 => ReducedPair::new(a.clone(), a.add(&UniPoly::one(), f)),
        FamilyId::SMinus2 => {
            let a2 = UniPoly::monomial(Fq(1), 2);
            ReducedPair::new(a2.clone(), a2.add(&UniPoly::one(), f))
        }
        FamilyId::S3 => monomial_pair((((1u64 << (k + 1)) - 1) / 3) as usize),
        FamilyId::S4 => {
            let m = k / 2;
            let low = UniPoly::monomial(Fq(1), 1 << (m - 1));
            let high = UniPoly::monomial(Fq(1), 1 << (k - 1));
            ReducedPair::new(low.clone(), high.add(&low, f))
        }
        FamilyId::Q4 => {
            // over F_Q with Q = q², s = (2q² − q − 1)/3
            let big_q = ctx.q() as u64;
            let small_q = 1u64 << (k / 2);
            monomial_pair(((2 * big_q - small_q - 1) / 3) as usize)
        }
        _ => return Err(invalid(format!("{family} has no fixed pair"))),
    })
}

/// U_n(x) = x^n + x^(n−2) + ⋯ + 1 for even n, as a cyclic vector.
fn cyclic_u(n: u64, len: usize, f: &MidField) -> Vec<Fq> {
    let mut v = vec![Fq(0); len];
    for i in (0..=n).step_by(2) {
        let e = (i % len as u64) as usize;
        v[e] = f.add(v[e], Fq(1));
    }
    v
}

fn cyclic_mul(a: &[Fq], b: &[Fq], f: &MidField) -> Vec<Fq> {
    let sparse: Vec<(usize, Fq)> = b.iter().copied().enumerate().filter(|&(_, c)| c != Fq(0)).collect();
    cyclic_mul_sparse(a, &sparse, f)
}

fn cyclic_mul_sparse(a: &[Fq], b: &[(usize, Fq)], f: &MidField) -> Vec<Fq> {
    let n = a.len();
    let mut out = vec![Fq(0); n];
    for (i, &x) in a.iter().enumerate() {
        if x == Fq(0) {
            continue;
        }
        for &(j, y) in b {
            let e = (i + j) % n;
            out[e] = f.add(out[e], f.mul(x, y));
        }
    }
    out
}

/// (x + c·x⁻¹)^e modulo x^len − 1 with c in the prime field. Writes e in
/// base p and uses (x + c·x⁻¹)^(p^i) = x^(p^i) + c·x^(−p^i), so each digit
/// contributes a sparse factor of at most p terms.
fn cyclic_binomial_pow(len: usize, c: Fq, mut e: u64, f: &MidField) -> Vec<Fq> {
    let p = f.p() as u64;
    let mut acc = vec![Fq(0); len];
    acc[0] = Fq(1);
    let mut pi = 1u64 % len as u64;
    while e > 0 {
        let d = e % p;
        e /= p;
        if d > 0 {
            // Σ_j C(d, j) c^j x^((d − 2j)·p^i)
            let mut factor = Vec::with_capacity(d as usize + 1);
            let mut binom = 1u64;
            let mut cj = Fq(1);
            for j in 0..=d {
                let exp = ((d as i64 - 2 * j as i64) * pi as i64).rem_euclid(len as i64) as usize;
                factor.push((exp, f.mul(f.of_int(binom as i64), cj)));
                binom = binom * (d - j) % p * crate::numtheory::inv_mod(j + 1, p).unwrap_or(0) % p;
                cj = f.mul(cj, c);
            }
            acc = cyclic_mul_sparse(&acc, &factor, f);
        }
        pi = pi * p % len as u64;
    }
    acc
}

fn cyclic_monomial(c: Fq, e: i64, len: usize) -> Vec<Fq> {
    let mut v = vec![Fq(0); len];
    v[e.rem_euclid(len as i64) as usize] = c;
    v
}

fn cyclic_add(a: &[Fq], b: &[Fq], f: &MidField) -> Vec<Fq> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

/// h for the odd-characteristic families, as a polynomial of degree ≤ q
/// agreeing with the closed form on μ_{q+1} (where x^q = x⁻¹).
pub fn odd_family_h(ctx: &FieldCtx, family: FamilyId, m: u32) -> Result<LaurentPoly, ConstructError> {
    if ctx.is_char2() || !family.is_odd() {
        return Err(invalid(format!("{family} needs odd characteristic")));
    }
    if m == 0 {
        return Err(invalid("m must be positive"));
    }
    let f = ctx.mid();
    let len = ctx.q() as usize + 1;
    let pm = (ctx.p() as u64).checked_pow(m).ok_or_else(|| invalid("p^m overflows"))?;
    let one = Fq(1);
    let two = f.of_int(2);
    let x = cyclic_monomial(one, 1, len);
    let x_plus = cyclic_add(&x, &cyclic_monomial(one, -1, len), f);
    let scale = |v: &[Fq], c: Fq| v.iter().map(|&y| f.mul(y, c)).collect::<Vec<_>>();
    // ±[−x(x + x⁻¹)(x − x⁻¹)^e + 2(x − x⁻¹)^e]
    let head = |e: u64, sign: Fq| {
        let d = cyclic_binomial_pow(len, f.neg(one), e, f);
        let t1 = scale(&cyclic_mul(&cyclic_mul(&x, &x_plus, f), &d, f), f.neg(one));
        let t2 = scale(&d, two);
        scale(&cyclic_add(&t1, &t2, f), sign)
    };
    let sign = if matches!(family, FamilyId::OddCaseI | FamilyId::OddCaseII) { one } else { f.neg(one) };
    let v = match family {
        FamilyId::OddCaseI | FamilyId::OddCaseIII => {
            // + x·U_{p^m−1} − x^(−(p^m−2))·U_{p^m−3}
            let tail1 = cyclic_mul(&x, &cyclic_u(pm - 1, len, f), f);
            let shift = cyclic_monomial(one, -((pm - 2) as i64 % len as i64), len);
            let tail2 = scale(&cyclic_mul(&shift, &cyclic_u(pm - 3, len, f), f), f.neg(one));
            cyclic_add(&cyclic_add(&head(pm - 2, sign), &tail1, f), &tail2, f)
        }
        _ => {
            // − x(x + x⁻¹)^(p^m) − 2
            let tail = cyclic_mul(&x, &cyclic_binomial_pow(len, one, pm, f), f);
            let mut v = cyclic_add(&head(pm - 1, sign), &scale(&tail, f.neg(one)), f);
            v[0] = f.sub(v[0], two);
            v
        }
    };
    Ok(LaurentPoly::from_terms(v.into_iter().enumerate().map(|(i, c)| (i as i64, c)), f))
}

/// Predicted status of the odd families: gcd(e, p^k − 1) = gcd(e, (p^k − 1)/2)
/// with e = (p^m − 1)/2 (cases I, II) or (p^k + p^m − 2)/2 (cases III, IV).
pub fn odd_family_prediction(p: u32, k: u32, m: u32, family: FamilyId) -> bool {
    let pk = (p as u64).pow(k);
    let pm = (p as u64).pow(m);
    let e = match family {
        FamilyId::OddCaseI | FamilyId::OddCaseII => (pm - 1) / 2,
        _ => (pk + pm - 2) / 2,
    };
    gcd(e, pk - 1) == gcd(e, (pk - 1) / 2)
}

/// Exact status of the odd families from H(a) ≠ ±1 on S. With
/// ε = (a + 2)/(a − 2), a ∈ S exactly when ε is a nonsquare, and H(a) = ±1
/// reduces to ε^A = σ with (A, σ) = ((p^m − 1)/2, 1), ((p^m + 1)/2, −1),
/// ((p^m − 1)/2, −1), ((p^m + 1)/2, 1) for cases I–IV. f permutes iff no
/// nonsquare ε solves it, i.e. no odd j with j·A ≡ 0 or (q − 1)/2 mod q − 1.
pub fn odd_family_exact(p: u32, k: u32, m: u32, family: FamilyId) -> bool {
    let n = (p as u64).pow(k) - 1;
    let pm = (p as u64).pow(m);
    let (a, target) = match family {
        FamilyId::OddCaseI => ((pm - 1) / 2, 0),
        FamilyId::OddCaseII => (pm.div_ceil(2), n / 2),
        FamilyId::OddCaseIII => ((pm - 1) / 2, n / 2),
        _ => (pm.div_ceil(2), 0),
    };
    let a = a % n;
    !(1..n).step_by(2).any(|j| j * a % n == target)
}

/// Builds one member of a family and its predicted permutation status.
pub fn family_generate(
    ctx: &FieldCtx,
    family: FamilyId,
    params: &FamilyParams,
) -> Result<FamilyInstance, ConstructError> {
    if !family.applies_to(ctx.p(), ctx.k()) {
        return Err(invalid(format!("{family} is not defined for p={} k={}", ctx.p(), ctx.k())));
    }
    let f = ctx.mid();
    let (pair, alphas, h, predicted) = if family.is_odd() {
        let m = need(params.m, "m")?;
        if m > 2 * ctx.k() + 2 {
            // p^m mod (q+1) repeats with period 2k; larger m add nothing
            return Err(invalid("m must be at most 2k+2"));
        }
        let h = odd_family_h(ctx, family, m)?;
        (None, None, h, odd_family_prediction(ctx.p(), ctx.k(), m, family))
    } else if family.is_linearized() {
        let (alphas, predicted) = linearized_alphas(f, family, params)?;
        let pair = linearized_pair(f, &alphas);
        let h = construct_h(ctx, &pair.h1, &pair.h2)?;
        (Some(pair), Some(alphas), h, predicted)
    } else {
        let pair = even_pair(ctx, family)?;
        let h = construct_h(ctx, &pair.h1, &pair.h2)?;
        (Some(pair), None, h, true)
    };
    let pp = assemble_f(ctx, &h, 1)?;
    Ok(FamilyInstance { family, params: params.clone(), pair, alphas, h, predicted, pp })
}

/// The discrete shape of a parameter tuple plus the field-valued slots.
#[derive(Clone, Debug)]
struct Shape {
    base: FamilyParams,
    /// Number of field-valued slots (0, 1 or 2), each ranging over F_q.
    slots: u32,
}

/// Every admissible parameter tuple of a family over a field, indexed so
/// that large spaces can be sampled without materialising them.
#[derive(Clone, Debug)]
pub struct ParamSpace {
    q: u64,
    shapes: Vec<Shape>,
    offsets: Vec<u64>,
    total: u64,
}

impl ParamSpace {
    pub fn new(ctx: &FieldCtx, family: FamilyId) -> ParamSpace {
        let k = ctx.k();
        let mut shapes = Vec::new();
        let mut push = |base: FamilyParams, slots: u32| shapes.push(Shape { base, slots });
        let d = FamilyParams::default;
        if family.applies_to(ctx.p(), k) {
            match family {
                FamilyId::OddCaseI | FamilyId::OddCaseII | FamilyId::OddCaseIII | FamilyId::OddCaseIV => {
                    for m in 1..=2 * k {
                        push(FamilyParams { m: Some(m), ..d() }, 0);
                    }
                }
                FamilyId::LinMonI => push(d(), 1),
                FamilyId::LinMonII => {
                    for j in 1..k {
                        push(FamilyParams { j: Some(j), ..d() }, 1);
                    }
                }
                FamilyId::LinMonIII => {
                    for t in 0..=k - 2 {
                        push(FamilyParams { t: Some(t), ..d() }, 0);
                    }
                }
                FamilyId::LinBinI => {
                    for j in 1..k {
                        push(FamilyParams { j: Some(j), ..d() }, 2);
                    }
                }
                FamilyId::LinBinII => {
                    for j in 1..k {
                        for j2 in j + 1..k {
                            push(FamilyParams { j: Some(j), j2: Some(j2), ..d() }, 2);
                        }
                    }
                }
                FamilyId::LinBinIII => {
                    for t in 0..=k - 2 {
                        push(FamilyParams { t: Some(t), ..d() }, 1);
                    }
                }
                FamilyId::LinBinIV => {
                    for t in 1..=k - 2 {
                        for j in 1..=t {
                            push(FamilyParams { t: Some(t), j: Some(j), ..d() }, 1);
                        }
                    }
                }
                _ => push(d(), 0),
            }
        }
        let q = ctx.q() as u64;
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut total = 0u64;
        for s in &shapes {
            offsets.push(total);
            total += q.pow(s.slots);
        }
        ParamSpace { q, shapes, offsets, total }
    }

    /// Number of raw tuples, before the family constraints are applied.
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// The `i`-th raw tuple; it may still violate the family constraints,
    /// which [`family_generate`] reports as `InvalidParams`.
    pub fn get(&self, i: u64) -> FamilyParams {
        let s = self.offsets.partition_point(|&o| o <= i) - 1;
        let shape = &self.shapes[s];
        let mut rest = i - self.offsets[s];
        let mut params = shape.base.clone();
        if shape.slots >= 1 {
            params.alpha = Some((rest % self.q) as u32);
            rest /= self.q;
        }
        if shape.slots >= 2 {
            params.beta = Some((rest % self.q) as u32);
        }
        params
    }
}
