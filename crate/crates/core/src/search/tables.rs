//! Monomial searches: l(b) = b^s with L permuting T.

use rayon::prelude::*;
use serde::Serialize;

use crate::construct::construct_h;
use crate::construct::family::{family_generate, monomial_pair, FamilyId, FamilyParams};
use crate::criterion::in_t;
use crate::ff::{Field, FieldCtx, Fq};
use crate::oracle::{check_xr_h_poly, Bitset};

use super::SearchError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub p: u32,
    pub k: u32,
    /// Sorted, duplicate-free.
    pub hits: Vec<u64>,
    /// The exclusion rule applied, empty when every s was tested.
    pub excluded: String,
}

impl SearchResult {
    /// One "p,k,s" line per hit.
    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        self.hits.iter().map(move |s| format!("{},{},{}", self.p, self.k, s))
    }
}

/// {2^i mod (q − 1)}: the exponents skipped by the even search.
pub fn powers_of_two(q: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (0..q.trailing_zeros().max(1)).map(|i| (1u64 << i) % (q - 1)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Exponents i·s mod (q − 1) taken through the discrete log, so that b^s
/// costs one table lookup. Returns (T as encodings, log of each element of T).
fn t_with_logs(ctx: &FieldCtx) -> (Vec<Fq>, Vec<u64>) {
    let f = ctx.mid();
    let t: Vec<Fq> = f.elements().filter(|&b| b != Fq(0) && in_t(f, b)).collect();
    let logs = t.iter().map(|&b| f.log(b).expect("T excludes 0") as u64).collect();
    (t, logs)
}

fn permutes_t(ctx: &FieldCtx, t: &[Fq], logs: &[u64], member: &Bitset, map: impl Fn(Fq, u64) -> Fq) -> bool {
    let mut seen = Bitset::new(ctx.q() as u64);
    t.iter().zip(logs).all(|(&b, &lb)| {
        let y = map(b, lb).0 as u64;
        member.contains(y) && seen.insert(y)
    })
}

fn t_bitset(ctx: &FieldCtx, t: &[Fq]) -> Bitset {
    let mut member = Bitset::new(ctx.q() as u64);
    for &b in t {
        member.insert(b.0 as u64);
    }
    member
}

/// Characteristic 2: every s in [1, q − 2] with L(b) = b + b^s + b^(2s)
/// permuting T, skipping s ∈ {2^i mod (q − 1)} unless `include_frobenius`.
pub fn search_monomial_even(ctx: &FieldCtx, include_frobenius: bool) -> Result<SearchResult, SearchError> {
    if !ctx.is_char2() {
        return Err(SearchError::Characteristic("even"));
    }
    let f = ctx.mid();
    let q = ctx.q() as u64;
    let (t, logs) = t_with_logs(ctx);
    let member = t_bitset(ctx, &t);
    let skip = if include_frobenius { Vec::new() } else { powers_of_two(q) };
    let hits: Vec<u64> = (1..q.saturating_sub(1))
        .into_par_iter()
        .filter(|s| skip.binary_search(s).is_err())
        .filter(|&s| {
            permutes_t(ctx, &t, &logs, &member, |b, lb| {
                let bs = f.exp(lb * s % (q - 1));
                f.add(f.add(b, bs), f.mul(bs, bs))
            })
        })
        .collect();
    let excluded = if include_frobenius { String::new() } else { "s = 2^i mod (q-1) skipped".into() };
    Ok(SearchResult { p: 2, k: ctx.k(), hits, excluded })
}

/// Odd characteristic: every s in [1, q − 2] with L(b) = b^(2s+1) permuting T.
pub fn search_monomial_odd(ctx: &FieldCtx) -> Result<SearchResult, SearchError> {
    if ctx.is_char2() {
        return Err(SearchError::Characteristic("odd"));
    }
    let f = ctx.mid();
    let q = ctx.q() as u64;
    let (t, logs) = t_with_logs(ctx);
    let member = t_bitset(ctx, &t);
    let hits: Vec<u64> = (1..q - 1)
        .into_par_iter()
        .filter(|&s| permutes_t(ctx, &t, &logs, &member, |_, lb| f.exp(lb * ((2 * s + 1) % (q - 1)) % (q - 1))))
        .collect();
    Ok(SearchResult { p: ctx.p(), k: ctx.k(), hits, excluded: String::new() })
}

/// Builds f = x·h(x^(q−1)) from the pair (1, a^s + 1) of an even hit and
/// tests it on F_{q²}.
pub fn even_hit_permutes(ctx: &FieldCtx, s: u64) -> Result<bool, SearchError> {
    let pair = monomial_pair(s as usize);
    let h = construct_h(ctx, &pair.h1, &pair.h2)?;
    Ok(check_xr_h_poly(ctx, &h, 1)?.is_permutation)
}

/// The odd families whose l(b) is b^s as a function on F_q*: s ≡ (p^m − 1)/2
/// (cases I, II) or (p^k + p^m − 2)/2 (cases III, IV) modulo q − 1.
pub fn odd_hit_families(ctx: &FieldCtx, s: u64) -> Vec<(FamilyId, u32)> {
    let (p, k, q) = (ctx.p() as u64, ctx.k(), ctx.q() as u64);
    let mut out = Vec::new();
    for m in 1..=2 * k {
        let pm = p.pow(m);
        if (pm - 1) / 2 % (q - 1) == s {
            out.push((FamilyId::OddCaseI, m));
            out.push((FamilyId::OddCaseII, m));
        }
        if (q + pm - 2) / 2 % (q - 1) == s {
            out.push((FamilyId::OddCaseIII, m));
            out.push((FamilyId::OddCaseIV, m));
        }
    }
    out
}

/// For an odd hit: each family member realising it, with its predicted
/// status and the verdict on F_{q²}.
pub fn odd_hit_checks(ctx: &FieldCtx, s: u64) -> Result<Vec<(FamilyId, u32, bool, bool)>, SearchError> {
    odd_hit_families(ctx, s)
        .into_iter()
        .map(|(fam, m)| {
            let inst = family_generate(ctx, fam, &FamilyParams { m: Some(m), ..Default::default() })?;
            let verdict = check_xr_h_poly(ctx, &inst.h, 1)?.is_permutation;
            Ok((fam, m, inst.predicted, verdict))
        })
        .collect()
}
