//! Randomized cross-checks between the criterion, the reduction and the
//! brute-force oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construct::{construct_h_counted, lift_a};
use crate::criterion::{check_conditions, g_on_mu, r_value};
use crate::ff::{Field, FieldCtx, Fq, Fq2, MidField};
use crate::poly::{LaurentPoly, UniPoly};
use crate::reduce::{reduce_h, ReducedPair};

use super::SearchError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialReport {
    pub check: &'static str,
    pub p: u32,
    pub k: u32,
    pub seed: u64,
    pub trials: u64,
    /// Trials whose instance was a permutation (iff trials) or that had at
    /// least one division (round trip).
    pub positives: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

impl TrialReport {
    fn new(check: &'static str, ctx: &FieldCtx, seed: u64) -> Self {
        TrialReport {
            check,
            p: ctx.p(),
            k: ctx.k(),
            seed,
            trials: 0,
            positives: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn violation(&mut self, what: impl FnOnce() -> String) {
        self.violations += 1;
        if self.first_violation.is_none() {
            self.first_violation = Some(what());
        }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

fn rng_for(ctx: &FieldCtx, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (ctx.p() as u64) << 40 ^ (ctx.k() as u64) << 32)
}

fn nonzero(rng: &mut ChaCha8Rng, f: &MidField) -> Fq {
    Fq(rng.gen_range(1..f.q()))
}

/// A random h with one to four terms and exponents in [−2, q + 2]. A
/// quarter of the draws are monomials, whose f is a monomial x^n and so
/// permutes exactly when gcd(n, q² − 1) = 1.
pub fn random_h(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> LaurentPoly {
    let f = ctx.mid();
    let q = ctx.q() as i64;
    let terms = if rng.gen_bool(0.25) { 1 } else { rng.gen_range(1..=4) };
    loop {
        let h = LaurentPoly::from_terms((0..terms).map(|_| (rng.gen_range(-2..=q + 2), nonzero(rng, f))), f);
        if !h.is_zero() {
            return h;
        }
    }
}

/// Conditions (i)–(iv) against the brute-force oracle on F_{q²} for
/// `trials` random (h, r).
pub fn iff_trials(ctx: &FieldCtx, trials: u64, seed: u64) -> Result<TrialReport, SearchError> {
    let mut rng = rng_for(ctx, seed);
    let mut rep = TrialReport::new("conditions_iff_oracle", ctx, seed);
    let q2 = ctx.q2() as i64;
    for _ in 0..trials {
        let h = random_h(ctx, &mut rng);
        let r = rng.gen_range(1..q2 - 1);
        let report = check_conditions(ctx, &h, r, true)?;
        rep.trials += 1;
        if report.oracle_verdict == Some(true) {
            rep.positives += 1;
        }
        if !report.consistent() {
            rep.violation(|| {
                format!("h = {h}, r = {r}: conditions {} oracle {:?}", report.conditions_hold(), report.oracle_verdict)
            });
        }
    }
    Ok(rep)
}

/// R(a) = g(x) + g(x)^q with a = x + x^q at every x ∈ μ_{q+1} where h(x) ≠ 0.
pub fn r_identity_trials(ctx: &FieldCtx, trials: u64, seed: u64) -> Result<TrialReport, SearchError> {
    let mut rng = rng_for(ctx, seed);
    let mut rep = TrialReport::new("r_equals_g_plus_gq", ctx, seed);
    let f = ctx.mid();
    let top = ctx.top();
    let mu = top.mu();
    let q2 = ctx.q2() as i64;
    for _ in 0..trials {
        let h = random_h(ctx, &mut rng);
        let r = rng.gen_range(1..q2 - 1);
        let pair = reduce_h(ctx, &h)?;
        let hv = h.values_on_mu(ctx)?;
        let g = g_on_mu(ctx, &hv, r as u64);
        rep.trials += 1;
        for (i, &x) in mu.iter().enumerate() {
            let Some(gx) = g[i] else { continue };
            let a = top.trace_to_mid(x);
            let expected = top.add(gx, top.conj(gx));
            let got = r_value(f, pair.h1.eval(a, f), pair.h2.eval(a, f), r, a).map(|v| top.embed(v));
            if got != Some(expected) {
                rep.violation(|| format!("h = {h}, r = {r}, x = {}: R = {got:?}, g + g^q = {}", x.0, expected.0));
                break;
            }
        }
    }
    Ok(rep)
}

fn random_uni(ctx: &FieldCtx, rng: &mut ChaCha8Rng, max_deg: usize) -> UniPoly {
    let f = ctx.mid();
    let deg = rng.gen_range(0..=max_deg);
    UniPoly::from_coeffs((0..=deg).map(|_| Fq(rng.gen_range(0..f.q()))).collect())
}

/// Adjusts h₂ so that h = x·h₁(a) + h₂(a) vanishes at x = 1 (and x = −1 in
/// odd characteristic), forcing the division step to run.
pub fn force_unit_roots(ctx: &FieldCtx, pair: &ReducedPair) -> ReducedPair {
    let f = ctx.mid();
    let (h1, h2) = (&pair.h1, &pair.h2);
    if ctx.is_char2() {
        // x = 1 gives a = 0
        let c0 = f.add(h1.eval(Fq(0), f), h2.eval(Fq(0), f));
        return ReducedPair::new(h1.clone(), h2.add(&UniPoly::constant(c0), f));
    }
    let two = f.of_int(2);
    let m2 = f.neg(two);
    // need c0 + 2c1 = −h1(2) − h2(2) and c0 − 2c1 = h1(−2) − h2(−2)
    let a = f.neg(f.add(h1.eval(two, f), h2.eval(two, f)));
    let b = f.sub(h1.eval(m2, f), h2.eval(m2, f));
    let c0 = f.div(f.add(a, b), two).unwrap();
    let c1 = f.div(f.sub(a, b), f.of_int(4)).unwrap();
    ReducedPair::new(h1.clone(), h2.add(&UniPoly::from_coeffs(vec![c0, c1]), f))
}

/// x·H(x)^(q−1) on μ_{q+1} for H(x) = x·h₁(a) + h₂(a); `None` where H vanishes.
fn g_from_pair(ctx: &FieldCtx, pair: &ReducedPair, r: u64) -> Vec<Option<Fq2>> {
    let hv: Vec<Fq2> = ctx.top().mu().into_iter().map(|x| pair.eval_at(ctx, x)).collect();
    g_on_mu(ctx, &hv, r)
}

/// construct_h then reduce_h: g(x) = x·h(x)^(q−1) is preserved on μ_{q+1}
/// up to the sign (−1)^divisions in odd characteristic, and the reduced
/// pair of the constructed h gives the same g again.
pub fn round_trip_trials(ctx: &FieldCtx, trials: u64, seed: u64) -> Result<TrialReport, SearchError> {
    let mut rng = rng_for(ctx, seed);
    let mut rep = TrialReport::new("construct_reduce_round_trip", ctx, seed);
    let top = ctx.top();
    let m = ctx.q() as usize + 1;
    let mu = top.mu();
    let mut done = 0;
    while done < trials {
        let mut pair = ReducedPair::new(random_uni(ctx, &mut rng, 4), random_uni(ctx, &mut rng, 4));
        if rng.gen_bool(0.5) {
            pair = force_unit_roots(ctx, &pair);
        }
        if pair.h1.is_zero() && pair.h2.is_zero() {
            continue;
        }
        done += 1;
        rep.trials += 1;
        let (h, divisions) = construct_h_counted(ctx, &lift_a(ctx, &pair.h1), &lift_a(ctx, &pair.h2))?;
        if divisions > 0 {
            rep.positives += 1;
        }
        let flip = !ctx.is_char2() && divisions % 2 == 1;
        let g_orig = g_from_pair(ctx, &pair, 1);
        let g_new = g_on_mu(ctx, &h.values_on_mu(ctx)?, 1);
        // the reduced pair describes h (or h(x²) when h has half exponents)
        let (h_int, doubled) = h.to_integer_exponents();
        let reduced = reduce_h(ctx, &h_int)?;
        let g_red = g_from_pair(ctx, &reduced, if doubled { 2 } else { 1 });
        let unit = |x: Fq2| x == top.one() || x == top.neg(top.one());
        for (i, &x) in mu.iter().enumerate() {
            let want = g_orig[i].map(|v| if flip { top.neg(v) } else { v });
            let got = g_new[i];
            let bad_new = match (want, got) {
                (Some(a), Some(b)) => a != b,
                (None, None) => false,
                // H(±1) = 0 is what the divisions remove
                _ => !unit(x),
            };
            let red_at = if doubled { g_red[(0..m).find(|&j| j * 2 % m == i).unwrap()] } else { g_red[i] };
            if bad_new || red_at != got {
                rep.violation(|| {
                    format!(
                        "h1 = {}, h2 = {}, x = {}: expected {want:?}, constructed {got:?}, reduced {red_at:?}",
                        pair.h1, pair.h2, x.0
                    )
                });
                break;
            }
        }
    }
    Ok(rep)
}
