//! Known permutation trinomials x·h(x^(q−1)) in characteristic 2, each
//! given by its g(x) on μ_{q+1} and, where available, by l(b).

use serde::Serialize;

use crate::criterion::{build_t, check_l_permutes_t, check_t_level_pair, even_l_value, even_psi};
use crate::ff::{ExtField, Field, FieldCtx, Fq, Fq2, MidField};
use crate::oracle::{check_on_set, PermVerdict};
use crate::poly::{LaurentPoly, UniPoly};
use crate::reduce::reduce_h;

use super::SearchError;

/// When a row applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KnownCondition {
    /// k > 0.
    Any,
    /// gcd(3, k) = 1.
    CoprimeTo3,
    /// k even.
    Even,
    /// k ≢ 0 (mod 4).
    NotDivisibleBy4,
}

impl KnownCondition {
    pub fn holds(self, k: u32) -> bool {
        match self {
            KnownCondition::Any => k > 0,
            KnownCondition::CoprimeTo3 => k % 3 != 0,
            KnownCondition::Even => k % 2 == 0,
            KnownCondition::NotDivisibleBy4 => k % 4 != 0,
        }
    }
}

/// One row: g(x) = num/den with coefficients in F_2 (listed by exponent),
/// l(b) = l_num/l_den likewise. Rows whose L cannot be checked
/// independently carry `l_checked = false`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnownEntry {
    pub row: u8,
    pub g_num: &'static [u32],
    pub g_den: &'static [u32],
    pub l_num: &'static [u32],
    pub l_den: &'static [u32],
    pub l_checked: bool,
    pub condition: KnownCondition,
}

const fn row(
    row: u8,
    g_num: &'static [u32],
    g_den: &'static [u32],
    l_num: &'static [u32],
    l_den: &'static [u32],
    l_checked: bool,
    condition: KnownCondition,
) -> KnownEntry {
    KnownEntry { row, g_num, g_den, l_num, l_den, l_checked, condition }
}

const KNOWN: [KnownEntry; 9] = [
    row(1, &[3, 2, 0], &[3, 1, 0], &[0], &[1], true, KnownCondition::Any),
    row(2, &[4, 3, 1], &[3, 1, 0], &[2], &[0], true, KnownCondition::CoprimeTo3),
    row(3, &[5, 4, 0], &[5, 1, 0], &[0], &[1], true, KnownCondition::Any),
    row(4, &[5, 2, 1], &[4, 3, 0], &[0], &[2, 0], true, KnownCondition::Even),
    row(5, &[5, 4, 1], &[4, 1, 0], &[0], &[1, 0], true, KnownCondition::Even),
    row(6, &[6, 2, 1], &[5, 4, 0], &[2], &[0], true, KnownCondition::CoprimeTo3),
    row(7, &[7, 5, 0], &[7, 2, 0], &[0], &[2], true, KnownCondition::Any),
    row(8, &[7, 6, 1], &[6, 1, 0], &[2], &[3, 1, 0], false, KnownCondition::CoprimeTo3),
    row(9, &[9, 3, 1], &[8, 6, 0], &[3], &[4, 3, 0], false, KnownCondition::NotDivisibleBy4),
];

pub fn known_entries() -> &'static [KnownEntry] {
    &KNOWN
}

fn text(exps: &[u32], var: char) -> String {
    exps.iter()
        .map(|&e| match e {
            0 => "1".to_string(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl KnownEntry {
    pub fn g_numerator(&self, f: &MidField) -> LaurentPoly {
        binary_poly(self.g_num, f)
    }

    pub fn g_denominator(&self, f: &MidField) -> LaurentPoly {
        binary_poly(self.g_den, f)
    }

    pub fn g_text(&self) -> String {
        format!("({}) / ({})", text(self.g_num, 'x'), text(self.g_den, 'x'))
    }

    pub fn l_text(&self) -> String {
        format!("({}) / ({})", text(self.l_num, 'b'), text(self.l_den, 'b'))
    }

    /// l(b), or `None` at a pole.
    pub fn l_value(&self, f: &MidField, b: Fq) -> Option<Fq> {
        let ev = |exps: &[u32]| exps.iter().fold(Fq(0), |acc, &e| f.add(acc, f.pow(b, e as u64)));
        f.div(ev(self.l_num), ev(self.l_den))
    }

    /// g(x) at a point of F_{q²}, or `None` at a pole.
    pub fn g_value(&self, top: &ExtField, x: Fq2) -> Option<Fq2> {
        let ev = |exps: &[u32]| exps.iter().fold(Fq2(0), |acc, &e| top.add(acc, top.pow(x, e as u64)));
        top.div(ev(self.g_num), ev(self.g_den))
    }
}

fn binary_poly(exps: &[u32], f: &MidField) -> LaurentPoly {
    LaurentPoly::from_terms(exps.iter().map(|&e| (e as i64, Fq(1))), f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnownOutcome {
    pub row: u8,
    pub k: u32,
    pub condition_holds: bool,
    /// g, with common factors of numerator and denominator cancelled,
    /// permutes μ_{q+1}.
    pub direct: Option<PermVerdict>,
    /// h(x) with x·h(x)^(q−1) = g on μ_{q+1}, as text.
    pub h: Option<String>,
    /// h(1) ≠ 0 and h₁ ≠ h₂ on S for that h.
    pub side_conditions: Option<bool>,
    /// The listed L(b) = b + l(b) + l(b)² permutes T.
    pub l_verdict: Option<PermVerdict>,
    /// The listed L agrees on T with the L obtained from h.
    pub l_matches: Option<bool>,
    /// Side conditions and the listed L together.
    pub via_l: Option<bool>,
    pub verdict: Option<bool>,
}

/// g = num/den with common factors cancelled.
pub fn reduced_g(entry: &KnownEntry, f: &MidField) -> (UniPoly, UniPoly) {
    let poly = |exps: &[u32]| {
        let mut c = vec![Fq(0); *exps.iter().max().unwrap() as usize + 1];
        for &e in exps {
            c[e as usize] = f.add(c[e as usize], Fq(1));
        }
        UniPoly::from_coeffs(c)
    };
    let (n, d) = (poly(entry.g_num), poly(entry.g_den));
    let g = n.gcd(&d, f);
    (n.div_exact(&g, f).expect("gcd divides"), d.div_exact(&g, f).expect("gcd divides"))
}

/// An h with x·h(x)^(q−1) = num/den on μ_{q+1}, when num = x^s·den*(x)
/// (den* the reversal of den). Then h = x^(−e)·den with
/// 1 + 2e − deg(den) ≡ s (mod q + 1), since h(x)^q = h(x⁻¹) on μ_{q+1}.
pub fn h_from_g(ctx: &FieldCtx, num: &UniPoly, den: &UniPoly) -> Option<LaurentPoly> {
    let f = ctx.mid();
    let d = den.degree()?;
    if den.coeff(0) == Fq(0) {
        return None;
    }
    let rev = UniPoly::from_coeffs(den.coeffs().iter().rev().copied().collect());
    let s = num.degree()?.checked_sub(d)?;
    if rev.shift(s) != *num {
        return None;
    }
    let m = ctx.q() as i64 + 1;
    let inv2 = (m + 1) / 2;
    let e = ((s as i64 + d as i64 - 1) * inv2).rem_euclid(m);
    Some(LaurentPoly::from_terms(den.coeffs().iter().enumerate().map(|(i, &c)| (i as i64 - e, c)), f))
}

fn eval_uni_top(top: &ExtField, p: &UniPoly, x: Fq2) -> Fq2 {
    p.coeffs().iter().rev().fold(Fq2(0), |acc, &c| top.add(top.mul(acc, x), top.embed(c)))
}

/// Checks a row at the context's k by both routes. A row whose condition
/// fails is skipped; a disagreement between the routes is an error.
pub fn verify_known(ctx: &FieldCtx, entry: &KnownEntry) -> Result<KnownOutcome, SearchError> {
    if !ctx.is_char2() {
        return Err(SearchError::Characteristic("even"));
    }
    let k = ctx.k();
    let skipped = KnownOutcome {
        row: entry.row,
        k,
        condition_holds: false,
        direct: None,
        h: None,
        side_conditions: None,
        l_verdict: None,
        l_matches: None,
        via_l: None,
        verdict: None,
    };
    if !entry.condition.holds(k) {
        return Ok(skipped);
    }
    let f = ctx.mid();
    let top = ctx.top();
    let (num, den) = reduced_g(entry, f);
    let mu: Vec<u64> = top.mu().into_iter().map(|x| x.0 as u64).collect();
    let direct = check_on_set(&mu, ctx.q2(), false, |x| {
        let x = Fq2(x as u32);
        top.div(eval_uni_top(top, &num, x), eval_uni_top(top, &den, x)).map(|y| y.0 as u64)
    });
    let mut out =
        KnownOutcome { condition_holds: true, direct: Some(direct), verdict: Some(direct.is_permutation), ..skipped };
    if !entry.l_checked {
        return Ok(out);
    }
    let h = h_from_g(ctx, &num, &den)
        .ok_or_else(|| SearchError::Invalid(format!("row {}: g is not x·h^(q−1)", entry.row)))?;
    let pair = reduce_h(ctx, &h)?;
    let t_level = check_t_level_pair(ctx, &h, &pair)?;
    let listed_l = |b: Fq| {
        let l = entry.l_value(f, b)?;
        Some(f.add(f.add(b, l), f.mul(l, l)))
    };
    let l_verdict = check_l_permutes_t(ctx, listed_l);
    let psi = even_psi(ctx, &pair)?;
    let l_matches = build_t(ctx).elems.iter().all(|&b| listed_l(b) == even_l_value(f, &psi, b));
    let side = t_level.h_unit_ok && t_level.h_ratio_ok;
    let via_l = side && l_verdict.is_permutation;
    out.h = Some(h.to_string());
    out.side_conditions = Some(side);
    out.l_verdict = Some(l_verdict);
    out.l_matches = Some(l_matches);
    out.via_l = Some(via_l);
    if via_l != direct.is_permutation {
        return Err(SearchError::VerdictMismatch { row: entry.row, k, direct: direct.is_permutation, via_l });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(k: u32) -> FieldCtx {
        FieldCtx::new(2, k).unwrap()
    }

    #[test]
    fn row_one_at_k6() {
        let out = verify_known(&ctx(6), &KNOWN[0]).unwrap();
        assert_eq!(out.verdict, Some(true));
        assert_eq!(out.via_l, Some(true));
    }

    #[test]
    fn condition_skips() {
        let out = verify_known(&ctx(3), &KNOWN[3]).unwrap();
        assert!(!out.condition_holds);
        assert_eq!(out.verdict, None);
    }

    #[test]
    fn row_two_where_gcd_condition_holds() {
        assert_eq!(verify_known(&ctx(4), &KNOWN[1]).unwrap().verdict, Some(true));
        assert_eq!(verify_known(&ctx(5), &KNOWN[1]).unwrap().verdict, Some(true));
    }

    #[test]
    fn all_rows_all_k() {
        for e in known_entries() {
            for k in 1..=10 {
                let out = verify_known(&ctx(k), e).unwrap();
                // row 5's g is identically 1 on μ_5 ⊂ μ_{q+1} when k ≡ 2 (mod 4)
                let expected = e.condition.holds(k) && !(e.row == 5 && k % 4 == 2);
                assert_eq!(out.verdict, e.condition.holds(k).then_some(expected), "row {} k={k}", e.row);
                if let Some(m) = out.l_matches {
                    assert_eq!(m, e.row != 5, "row {} k={k}", e.row);
                }
            }
        }
    }

    #[test]
    fn h_from_g_reproduces_g() {
        let c = ctx(4);
        let top = c.top();
        for e in known_entries() {
            let (n, d) = reduced_g(e, c.mid());
            let h = h_from_g(&c, &n, &d).unwrap();
            let g = crate::criterion::g_on_mu(&c, &h.values_on_mu(&c).unwrap(), 1);
            for (i, x) in top.mu().into_iter().enumerate() {
                let want = top.div(eval_uni_top(top, &n, x), eval_uni_top(top, &d, x));
                assert_eq!(g[i], want, "row {}", e.row);
            }
        }
    }

    #[test]
    fn common_factor_cancelled() {
        let c = ctx(3);
        let (n, d) = reduced_g(&KNOWN[2], c.mid());
        assert_eq!((n.degree(), d.degree()), (Some(3), Some(3)));
        assert_eq!(verify_known(&c, &KNOWN[2]).unwrap().verdict, Some(true));
    }

    #[test]
    fn texts() {
        assert_eq!(KNOWN[0].g_text(), "(x^3 + x^2 + 1) / (x^3 + x + 1)");
        assert_eq!(KNOWN[3].l_text(), "(1) / (b^2 + 1)");
    }
}
