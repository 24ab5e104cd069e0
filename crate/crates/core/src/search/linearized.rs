//! Linearized l(b) = Σ αᵢ·b^(2^i): the shape of L(b) = b + l(b) + l(b)² and
//! its bijectivity on F_q.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ff::{Field, FieldCtx, Fq, MidField};

use super::SearchError;

/// Coefficients c_j of L(b) = Σ c_j·b^(2^j), j < k, folding b^(2^k) = b.
pub fn linearized_l_coeffs(f: &MidField, alphas: &[Fq]) -> Vec<Fq> {
    let k = f.k() as usize;
    let mut c = vec![Fq(0); k];
    c[0] = Fq(1);
    for (i, &a) in alphas.iter().enumerate() {
        c[i % k] = f.add(c[i % k], a);
        c[(i + 1) % k] = f.add(c[(i + 1) % k], f.mul(a, a));
    }
    c
}

/// Σ c_j·b^(2^j).
pub fn eval_linearized(f: &MidField, coeffs: &[Fq], b: Fq) -> Fq {
    let mut acc = Fq(0);
    let mut x = b;
    for &c in coeffs {
        acc = f.add(acc, f.mul(c, x));
        x = f.mul(x, x);
    }
    acc
}

/// L(b) = b + l(b) + l(b)² permutes F_q, decided by kernel triviality.
pub fn check_linearized_perm(ctx: &FieldCtx, alphas: &[Fq]) -> bool {
    let f = ctx.mid();
    let c = linearized_l_coeffs(f, alphas);
    f.elements().skip(1).all(|b| eval_linearized(f, &c, b) != Fq(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearShape {
    Monomial,
    Binomial,
    Other,
}

impl LinearShape {
    pub fn of_term_count(n: usize) -> LinearShape {
        match n {
            1 => LinearShape::Monomial,
            2 => LinearShape::Binomial,
            _ => LinearShape::Other,
        }
    }
}

fn frob(f: &MidField, a: Fq, i: u32) -> Fq {
    f.frobenius(a, i % f.k())
}

/// The monomial classification: L is a monomial iff (α₀..α_t) matches one
/// of three coefficient patterns (α_t ≠ 0 assumed).
pub fn predicted_monomial(f: &MidField, alphas: &[Fq]) -> bool {
    let k = f.k() as usize;
    let t = alphas.len() - 1;
    let zero = Fq(0);
    if t + 1 == k {
        // (α₀, α₀², …, α₀^(2^(k−1))), α₀ ≠ 0
        let case_i = alphas[0] != zero && (0..k).all(|i| alphas[i] == frob(f, alphas[0], i as u32));
        // (1 + α_j^(2^(k−j)), …, α_j, …, α_j^(2^(k−j−1))), α_j ≠ 0
        let case_ii = (1..k).any(|j| {
            let aj = alphas[j];
            aj != zero
                && (0..k).all(|i| {
                    let want = if i >= j {
                        frob(f, aj, (i - j) as u32)
                    } else {
                        f.add(Fq(1), frob(f, aj, (k + i - j) as u32))
                    };
                    alphas[i] == want
                })
        });
        case_i || case_ii
    } else if t + 2 <= k {
        alphas.iter().all(|&a| a == Fq(1))
    } else {
        false
    }
}

/// The binomial classification, four coefficient patterns (α_t ≠ 0 assumed).
pub fn predicted_binomial(f: &MidField, alphas: &[Fq]) -> bool {
    let k = f.k() as usize;
    let t = alphas.len() - 1;
    let (zero, one) = (Fq(0), Fq(1));
    if t + 1 == k {
        let a0 = alphas[0];
        let case_i = (1..k).any(|j| {
            let aj = alphas[j];
            aj != zero
                && aj != frob(f, a0, j as u32)
                && f.add(f.add(frob(f, aj, (k - j) as u32), a0), one) != zero
                && (0..k).all(|i| {
                    let want = if i < j { frob(f, a0, i as u32) } else { frob(f, aj, (i - j) as u32) };
                    alphas[i] == want
                })
        });
        let case_ii = (1..k).any(|j1| {
            (j1 + 1..k).any(|j2| {
                let (a1, a2) = (alphas[j1], alphas[j2]);
                f.add(f.add(a1, frob(f, a2, (k - j2 + j1) as u32)), one) != zero
                    && a2 != frob(f, a1, (j2 - j1) as u32)
                    && (0..k).all(|i| {
                        let want = if i < j1 {
                            f.add(one, frob(f, a2, (k - j2 + i) as u32))
                        } else if i < j2 {
                            frob(f, a1, (i - j1) as u32)
                        } else {
                            frob(f, a2, (i - j2) as u32)
                        };
                        alphas[i] == want
                    })
            })
        });
        case_i || case_ii
    } else if t + 2 <= k {
        let a0 = alphas[0];
        let case_iii = a0 != zero && a0 != one && (0..=t).all(|i| alphas[i] == frob(f, a0, i as u32));
        let case_iv = (1..=t).any(|j| {
            let aj = alphas[j];
            aj != zero
                && aj != one
                && (0..=t).all(|i| alphas[i] == if i < j { one } else { frob(f, aj, (i - j) as u32) })
        });
        case_iii || case_iv
    } else {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub p: u32,
    pub k: u32,
    pub t: u32,
    /// None when every vector was enumerated.
    pub seed: Option<u64>,
    pub checked: u64,
    pub monomials: u64,
    pub binomials: u64,
    pub mismatches: u64,
    /// Encodings of (α₀..α_t) for the first mismatch.
    pub first_mismatch: Option<Vec<u32>>,
}

/// Full enumeration when q^(t+1) is at most this.
pub const CLASSIFY_FULL_LIMIT: u64 = 1 << 20;
pub const CLASSIFY_SAMPLES: u64 = 10_000;

/// Compares the term count of L(b) with the monomial and binomial
/// classifications over all (α₀..α_t) with α_t ≠ 0, or over
/// [`CLASSIFY_SAMPLES`] random vectors when q^(t+1) exceeds
/// [`CLASSIFY_FULL_LIMIT`].
pub fn classify_linearized(ctx: &FieldCtx, t: u32, seed: u64) -> Result<ClassifyReport, SearchError> {
    if !ctx.is_char2() {
        return Err(SearchError::Characteristic("even"));
    }
    let k = ctx.k();
    if t >= k {
        return Err(SearchError::Invalid(format!("t={t} must be below k={k}")));
    }
    let f = ctx.mid();
    let q = ctx.q() as u64;
    let space = (q - 1).saturating_mul(q.saturating_pow(t));
    let full = q.saturating_pow(t + 1) <= CLASSIFY_FULL_LIMIT;
    let decode = |mut i: u64| {
        let mut v: Vec<Fq> = (0..t)
            .map(|_| {
                let c = Fq((i % q) as u32);
                i /= q;
                c
            })
            .collect();
        v.push(Fq((i % (q - 1) + 1) as u32));
        v
    };
    let indices: Vec<u64> = if full {
        (0..space).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..CLASSIFY_SAMPLES).map(|_| rng.gen_range(0..space)).collect()
    };
    let rows: Vec<(LinearShape, bool, Vec<Fq>)> = indices
        .par_iter()
        .map(|&i| {
            let alphas = decode(i);
            let terms = linearized_l_coeffs(f, &alphas).iter().filter(|&&c| c != Fq(0)).count();
            let shape = LinearShape::of_term_count(terms);
            let predicted = if predicted_monomial(f, &alphas) {
                LinearShape::Monomial
            } else if predicted_binomial(f, &alphas) {
                LinearShape::Binomial
            } else {
                LinearShape::Other
            };
            (shape, predicted == shape, alphas)
        })
        .collect();
    let count = |s| rows.iter().filter(|r| r.0 == s).count() as u64;
    let first_mismatch = rows.iter().find(|r| !r.1).map(|r| r.2.iter().map(|a| a.0).collect());
    Ok(ClassifyReport {
        p: 2,
        k,
        t,
        seed: (!full).then_some(seed),
        checked: rows.len() as u64,
        monomials: count(LinearShape::Monomial),
        binomials: count(LinearShape::Binomial),
        mismatches: rows.iter().filter(|r| !r.1).count() as u64,
        first_mismatch,
    })
}
