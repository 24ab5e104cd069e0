//! Exhaustive checks of the characteristic-2 lemmas the constructions rest
//! on, each by direct root counting or image tracking.

use rayon::prelude::*;
use serde::Serialize;

use crate::construct::family::norm_to_subfield;
use crate::criterion::{check_l_permutes_t, in_t};
use crate::ff::{Field, FieldCtx, Fq};
use crate::numtheory::gcd;

use super::linearized::{check_linearized_perm, eval_linearized, linearized_l_coeffs};
use super::SearchError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: &'static str,
    pub k: u32,
    pub checked: u64,
    pub violations: u64,
    /// Encodings of the first offending input.
    pub first_violation: Option<Vec<u32>>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

fn even_ctx(k: u32) -> Result<FieldCtx, SearchError> {
    Ok(FieldCtx::new(2, k)?)
}

fn report(lemma: &'static str, k: u32, results: Vec<(u64, Option<Vec<u32>>)>) -> LemmaReport {
    let checked = results.iter().map(|r| r.0).sum();
    let bad: Vec<_> = results.into_iter().filter_map(|r| r.1).collect();
    LemmaReport { lemma, k, checked, violations: bad.len() as u64, first_violation: bad.into_iter().next() }
}

/// x² + ux + v (u ≠ 0) has a root in F_q iff Tr(v/u²) = 0.
pub fn check_quadratic(k: u32) -> Result<LemmaReport, SearchError> {
    let ctx = even_ctx(k)?;
    let f = ctx.mid();
    let q = ctx.q();
    let results = (1..q)
        .into_par_iter()
        .flat_map_iter(|u| {
            let u = Fq(u);
            let mut solvable = vec![false; q as usize];
            for x in f.elements() {
                solvable[f.add(f.mul(x, x), f.mul(u, x)).0 as usize] = true;
            }
            let u2 = f.mul(u, u);
            (0..q)
                .map(move |v| {
                    let predicted = f.trace(f.div(Fq(v), u2).unwrap()) == 0;
                    (1, (predicted != solvable[v as usize]).then(|| vec![u.0, v]))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(report("quadratic_solvability", k, results))
}

/// x³ + ux + v (v ≠ 0) has exactly one root in F_q iff Tr(u³/v² + 1) ≠ 0.
pub fn check_cubic(k: u32) -> Result<LemmaReport, SearchError> {
    let ctx = even_ctx(k)?;
    let f = ctx.mid();
    let q = ctx.q();
    let results = (0..q)
        .into_par_iter()
        .flat_map_iter(|u| {
            let u = Fq(u);
            let mut roots = vec![0u32; q as usize];
            for x in f.elements() {
                roots[f.add(f.pow(x, 3), f.mul(u, x)).0 as usize] += 1;
            }
            let u3 = f.pow(u, 3);
            (1..q)
                .map(move |v| {
                    let v = Fq(v);
                    let c = f.add(f.div(u3, f.mul(v, v)).unwrap(), Fq(1));
                    let predicted = f.trace(c) != 0;
                    (1, (predicted != (roots[v.0 as usize] == 1)).then(|| vec![u.0, v.0]))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(report("cubic_unique_root", k, results))
}

/// For b ∈ T, x⁴ + x³ + b²x² + b²x + b⁵ has no root in F_q.
pub fn check_quartic(k: u32) -> Result<LemmaReport, SearchError> {
    let ctx = even_ctx(k)?;
    let f = ctx.mid();
    let t: Vec<Fq> = f.elements().filter(|&b| in_t(f, b)).collect();
    let results = t
        .par_iter()
        .map(|&b| {
            let b2 = f.mul(b, b);
            let b5 = f.mul(f.mul(b2, b2), b);
            let root = f.elements().find(|&x| {
                let x2 = f.mul(x, x);
                let v = f.add(f.add(f.mul(x2, x2), f.mul(x2, x)), f.add(f.mul(b2, f.add(x2, x)), b5));
                v == Fq(0)
            });
            (1, root.map(|x| vec![b.0, x.0]))
        })
        .collect();
    Ok(report("quartic_no_root", k, results))
}

/// For every l(b) = Σ_{i ≤ t} αᵢ·b^(2^i) with α_t ≠ 0 and t ≤ `t_max`:
/// L = b + l + l² permutes T iff it permutes F_q.
pub fn check_t_equivalence(k: u32, t_max: u32) -> Result<LemmaReport, SearchError> {
    let ctx = even_ctx(k)?;
    let f = ctx.mid();
    let q = ctx.q() as u64;
    let mut results = Vec::new();
    for t in 0..=t_max.min(k - 1) {
        let space = (q - 1) * q.pow(t);
        let part: Vec<_> = (0..space)
            .into_par_iter()
            .map(|mut i| {
                let mut alphas: Vec<Fq> = (0..t)
                    .map(|_| {
                        let c = Fq((i % q) as u32);
                        i /= q;
                        c
                    })
                    .collect();
                alphas.push(Fq((i + 1) as u32));
                let coeffs = linearized_l_coeffs(f, &alphas);
                let on_t = check_l_permutes_t(&ctx, |b| Some(eval_linearized(f, &coeffs, b))).is_permutation;
                let on_field = check_linearized_perm(&ctx, &alphas);
                (1, (on_t != on_field).then(|| alphas.iter().map(|a| a.0).collect()))
            })
            .collect();
        results.extend(part);
    }
    Ok(report("t_vs_field_equivalence", k, results))
}

/// x^(2^r) + cx permutes F_{2^k} iff N_{2^k/2^d}(c) ≠ 1, d = gcd(k, r),
/// for all c ≠ 0 and 1 ≤ r ≤ k. A nonzero x is in the kernel iff
/// x^(2^r − 1) = c, so the map permutes iff c is not such a power.
pub fn check_norm_criterion(k: u32) -> Result<LemmaReport, SearchError> {
    let ctx = even_ctx(k)?;
    let f = ctx.mid();
    let q = ctx.q();
    let results = (1..=k)
        .into_par_iter()
        .flat_map_iter(|r| {
            let d = gcd(k as u64, r as u64) as u32;
            let mut hit = vec![false; q as usize];
            for x in f.elements().skip(1) {
                hit[f.div(f.frobenius(x, r % k), x).unwrap().0 as usize] = true;
            }
            (1..q)
                .map(move |c| {
                    let c = Fq(c);
                    let permutes = !hit[c.0 as usize];
                    let predicted = norm_to_subfield(f, c, d) != Fq(1);
                    (1, (permutes != predicted).then(|| vec![r, c.0]))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(report("linearized_binomial_norm", k, results))
}
