//! Reduction of h(x) on μ_{q+1} to h₁(a)·x + h₂(a), where a = x + x⁻¹.
//!
//! Every x ∈ μ_{q+1} is a root of X² − aX + 1, so x^n = φ_n(a)·x + χ_n(a)
//! with φ₀ = 0, χ₀ = 1, φ_{n+1} = aφ_n + χ_n, χ_{n+1} = −φ_n. The conjugate
//! root x⁻¹ = a − x gives x^(−n) = −φ_n(a)·x + φ_{n+1}(a).

use serde::Serialize;

use crate::ff::{Field, FieldCtx, Fq, Fq2, MidField};
use crate::poly::{LaurentPoly, PolyError, UniPoly};

/// h(x) = h1(a)·x + h2(a) on μ_{q+1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedPair {
    pub h1: UniPoly,
    pub h2: UniPoly,
}

impl ReducedPair {
    pub fn new(h1: UniPoly, h2: UniPoly) -> Self {
        ReducedPair { h1, h2 }
    }

    /// h1(a)·x + h2(a) at x ∈ μ_{q+1}.
    pub fn eval_at(&self, ctx: &FieldCtx, x: Fq2) -> Fq2 {
        let top = ctx.top();
        let a = top.trace_to_mid(x);
        let f = ctx.mid();
        top.add(top.mul(top.embed(self.h1.eval(a, f)), x), top.embed(self.h2.eval(a, f)))
    }

    pub fn texts(&self) -> PairText {
        PairText { h1: self.h1.to_string(), h2: self.h2.to_string() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PairText {
    pub h1: String,
    pub h2: String,
}

/// (φ_n, χ_n) for n ≥ 0.
pub fn phi_chi(f: &MidField, n: u64) -> (UniPoly, UniPoly) {
    let mut phi = UniPoly::zero();
    let mut chi = UniPoly::one();
    for _ in 0..n {
        let next = UniPoly::var().mul(&phi, f).add(&chi, f);
        chi = phi.neg(f);
        phi = next;
    }
    (phi, chi)
}

/// The sequence φ_0, …, φ_{n} and χ_0, …, χ_{n}.
fn phi_chi_table(f: &MidField, n: usize) -> (Vec<UniPoly>, Vec<UniPoly>) {
    let mut phis = vec![UniPoly::zero()];
    let mut chis = vec![UniPoly::one()];
    for i in 0..n {
        let next = UniPoly::var().mul(&phis[i], f).add(&chis[i], f);
        chis.push(phis[i].neg(f));
        phis.push(next);
    }
    (phis, chis)
}

/// Algorithm 1 extended to negative exponents.
pub fn reduce_h(ctx: &FieldCtx, h: &LaurentPoly) -> Result<ReducedPair, PolyError> {
    let f = ctx.mid();
    let terms = h.integer_terms()?;
    let top = terms.iter().map(|&(e, _)| e.unsigned_abs() as usize + 1).max().unwrap_or(1);
    let (phis, chis) = phi_chi_table(f, top);
    let mut h1 = UniPoly::zero();
    let mut h2 = UniPoly::zero();
    for (e, c) in terms {
        let n = e.unsigned_abs() as usize;
        if e >= 0 {
            h1 = h1.add(&phis[n].scale(c, f), f);
            h2 = h2.add(&chis[n].scale(c, f), f);
        } else {
            h1 = h1.sub(&phis[n].scale(c, f), f);
            h2 = h2.add(&phis[n + 1].scale(c, f), f);
        }
    }
    Ok(ReducedPair { h1, h2 })
}

/// Dickson polynomial D_e(a) of the first kind, D_e(x + x⁻¹) = x^e + x^(−e).
/// Negative indices use D_{−e} = D_e.
pub fn dickson(f: &MidField, e: i64) -> UniPoly {
    let e = e.unsigned_abs();
    let mut prev = UniPoly::constant(f.of_int(2));
    if e == 0 {
        return prev;
    }
    let mut cur = UniPoly::var();
    for _ in 1..e {
        let next = UniPoly::var().mul(&cur, f).sub(&prev, f);
        prev = cur;
        cur = next;
    }
    cur
}

/// D_e(a) evaluated at a point, by the Lucas-sequence doubling ladder.
pub fn dickson_value(f: &MidField, e: i64, a: Fq) -> Fq {
    let e = e.unsigned_abs();
    let two = f.of_int(2);
    // invariant: (v0, v1) = (D_n, D_{n+1})
    let (mut v0, mut v1) = (two, a);
    for bit in (0..64 - e.leading_zeros()).rev() {
        let cross = f.sub(f.mul(v0, v1), a);
        if (e >> bit) & 1 == 1 {
            v0 = cross;
            v1 = f.sub(f.mul(v1, v1), two);
        } else {
            v0 = f.sub(f.mul(v0, v0), two);
            v1 = cross;
        }
    }
    v0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_chi_examples() {
        let c = FieldCtx::new(5, 1).unwrap();
        let f = c.mid();
        assert_eq!(phi_chi(f, 1), (UniPoly::one(), UniPoly::zero()));
        assert_eq!(phi_chi(f, 2), (UniPoly::var(), UniPoly::parse("-1", f).unwrap()));
        assert_eq!(phi_chi(f, 4), (UniPoly::parse("a^3 - 2*a", f).unwrap(), UniPoly::parse("-a^2 + 1", f).unwrap()));
    }

    #[test]
    fn reduce_examples() {
        let c = FieldCtx::new(2, 4).unwrap();
        let f = c.mid();
        let pair = reduce_h(&c, &LaurentPoly::parse("1 + x^2 + x^-1", f).unwrap()).unwrap();
        assert_eq!(pair.h1, UniPoly::parse("a + 1", f).unwrap());
        assert_eq!(pair.h2, UniPoly::var());
        let pair = reduce_h(&c, &LaurentPoly::parse("x", f).unwrap()).unwrap();
        assert_eq!((pair.h1, pair.h2), (UniPoly::one(), UniPoly::zero()));

        let c = FieldCtx::new(3, 2).unwrap();
        let f = c.mid();
        let pair = reduce_h(&c, &LaurentPoly::parse("x^3", f).unwrap()).unwrap();
        assert_eq!(pair.h1, UniPoly::parse("a^2 - 1", f).unwrap());
        assert_eq!(pair.h2, UniPoly::parse("-a", f).unwrap());

        let half = LaurentPoly::parse("x^1/2", f).unwrap();
        assert_eq!(reduce_h(&c, &half), Err(PolyError::HalfExponent));
    }

    #[test]
    fn dickson_examples() {
        let c = FieldCtx::new(7, 1).unwrap();
        let f = c.mid();
        assert_eq!(dickson(f, 3), UniPoly::parse("a^3 - 3*a", f).unwrap());
        assert_eq!(dickson(f, 0), UniPoly::constant(Fq(2)));
        assert_eq!(dickson(f, 2), UniPoly::parse("a^2 - 2", f).unwrap());
        assert_eq!(dickson(f, -2), dickson(f, 2));
    }

    #[test]
    fn dickson_value_matches_polynomial() {
        for (p, k) in [(2, 3), (3, 2), (5, 1)] {
            let c = FieldCtx::new(p, k).unwrap();
            let f = c.mid();
            for e in 0..40 {
                let d = dickson(f, e);
                for a in f.elements() {
                    assert_eq!(dickson_value(f, e, a), d.eval(a, f), "p={p} k={k} e={e}");
                }
            }
        }
    }
}
