//! Exhaustive permutation tests with bitset image tracking.

use serde::Serialize;

use crate::ff::{ExtField, Field, FieldCtx, Fq, Fq2};
use crate::poly::{LaurentPoly, PolyError};

/// Why a map failed to permute its domain. Values are integer encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    /// Two distinct inputs share an image.
    Collision { first: u64, second: u64, image: u64 },
    /// The map is not defined at the input (a pole).
    Undefined { input: u64 },
    /// The image lies outside the domain.
    Escape { input: u64, image: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PermVerdict {
    pub is_permutation: bool,
    pub failure: Option<Failure>,
    pub domain_size: u64,
}

#[derive(Clone, Debug)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: u64) -> Self {
        Bitset { words: vec![0; len.div_ceil(64) as usize] }
    }

    #[inline]
    pub fn contains(&self, i: u64) -> bool {
        self.words[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    /// Sets bit `i`; returns false if it was already set.
    #[inline]
    pub fn insert(&mut self, i: u64) -> bool {
        let w = &mut self.words[(i >> 6) as usize];
        let bit = 1u64 << (i & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }
}

/// The sets over which permutation claims are made.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    ExtField,
    Mu,
    /// {2, −2} ∪ S ⊂ F_q ({0} ∪ S in characteristic 2).
    SWithPoles,
    T,
    MidField,
}

impl Domain {
    /// Encodings of the domain's elements, in a fixed order.
    pub fn elements(self, ctx: &FieldCtx) -> Vec<u64> {
        match self {
            Domain::ExtField => (0..ctx.q2()).collect(),
            Domain::Mu => ctx.top().mu().into_iter().map(|x| x.0 as u64).collect(),
            Domain::SWithPoles => crate::criterion::s_with_poles(ctx).into_iter().map(|a| a.0 as u64).collect(),
            Domain::T => crate::criterion::build_t(ctx).elems.into_iter().map(|b| b.0 as u64).collect(),
            Domain::MidField => (0..ctx.q() as u64).collect(),
        }
    }

    fn universe(self, ctx: &FieldCtx) -> u64 {
        match self {
            Domain::ExtField | Domain::Mu => ctx.q2(),
            _ => ctx.q() as u64,
        }
    }
}

/// Decides whether `map` permutes `domain`: injective with image inside the
/// domain. `map` returns `None` where it is undefined.
pub fn check_permutation(ctx: &FieldCtx, domain: Domain, map: impl Fn(u64) -> Option<u64>) -> PermVerdict {
    let elems = domain.elements(ctx);
    let closed = matches!(domain, Domain::ExtField | Domain::MidField);
    check_on_set(&elems, domain.universe(ctx), closed, map)
}

/// Permutation test on an explicit finite set of encodings below `universe`.
/// When `closed` is false, images are also checked for membership.
pub fn check_on_set(elems: &[u64], universe: u64, closed: bool, map: impl Fn(u64) -> Option<u64>) -> PermVerdict {
    let domain_size = elems.len() as u64;
    let mut member = Bitset::new(universe);
    if !closed {
        for &e in elems {
            member.insert(e);
        }
    }
    let mut seen = Bitset::new(universe);
    for (idx, &x) in elems.iter().enumerate() {
        let fail = |failure| PermVerdict { is_permutation: false, failure: Some(failure), domain_size };
        let Some(y) = map(x) else {
            return fail(Failure::Undefined { input: x });
        };
        if y >= universe || (!closed && !member.contains(y)) {
            return fail(Failure::Escape { input: x, image: y });
        }
        if !seen.insert(y) {
            let first = elems[..idx]
                .iter()
                .copied()
                .find(|&w| map(w) == Some(y))
                .expect("an earlier input produced this image");
            return fail(Failure::Collision { first, second: x, image: y });
        }
    }
    PermVerdict { is_permutation: true, failure: None, domain_size }
}

/// f(x) = x^r · H(x^(q−1)) on F_{q²}, where `h_on_mu[i]` is H(ζ^i) and
/// ζ = g^(q−1). Walks x = g^j so that x^(q−1) = ζ^j; f(0) = 0.
pub fn check_xr_h(ctx: &FieldCtx, r: u64, h_on_mu: &[Fq2]) -> PermVerdict {
    let top = ctx.top();
    let q2 = ctx.q2();
    let m = ctx.q() as usize + 1;
    assert_eq!(h_on_mu.len(), m);
    let g = top.generator();
    let gr = top.pow(g, r);
    let mut seen = Bitset::new(q2);
    seen.insert(0);
    let mut x = top.one();
    let mut xr = top.one();
    for j in 0..(q2 - 1) as usize {
        let y = top.mul(xr, h_on_mu[j % m]);
        let fresh = seen.insert(y.0 as u64);
        if !fresh {
            let failure = collision_in_walk(top, r, h_on_mu, j, y, x);
            return PermVerdict { is_permutation: false, failure: Some(failure), domain_size: q2 };
        }
        x = top.mul(x, g);
        xr = top.mul(xr, gr);
    }
    PermVerdict { is_permutation: true, failure: None, domain_size: q2 }
}

/// f(x) = x^r·h(x^(q−1)) for a Laurent h. Half exponents (characteristic 2)
/// are cleared by testing f(x²) = x^(2r)·h(x^(2(q−1))) instead.
pub fn check_xr_h_poly(ctx: &FieldCtx, h: &LaurentPoly, r: u64) -> Result<PermVerdict, PolyError> {
    let (h, doubled) = h.to_integer_exponents();
    if doubled && !ctx.is_char2() {
        return Err(PolyError::HalfExponentInOddCharacteristic);
    }
    let r = if doubled { 2 * r } else { r };
    Ok(check_xr_h(ctx, r, &h.values_on_mu(ctx)?))
}

fn collision_in_walk(top: &ExtField, r: u64, h_on_mu: &[Fq2], j: usize, y: Fq2, x: Fq2) -> Failure {
    if y.0 == 0 {
        return Failure::Collision { first: 0, second: x.0 as u64, image: 0 };
    }
    let g = top.generator();
    let gr = top.pow(g, r);
    let m = h_on_mu.len();
    let (mut w, mut wr) = (top.one(), top.one());
    for i in 0..j {
        if top.mul(wr, h_on_mu[i % m]) == y {
            return Failure::Collision { first: w.0 as u64, second: x.0 as u64, image: y.0 as u64 };
        }
        w = top.mul(w, g);
        wr = top.mul(wr, gr);
    }
    unreachable!("a repeated image must have an earlier preimage")
}

/// Σ c·x^e over F_{q²}, evaluated by walking x = g^j and keeping each
/// x^e as a running product. Independent of any structure in the exponents.
pub fn check_sparse_poly(ctx: &FieldCtx, terms: &[(u64, Fq)]) -> PermVerdict {
    let top = ctx.top();
    let q2 = ctx.q2();
    let g = top.generator();
    let steps: Vec<Fq2> = terms.iter().map(|&(e, _)| top.pow(g, e)).collect();
    let coeffs: Vec<Fq2> = terms.iter().map(|&(_, c)| top.embed(c)).collect();
    let f0 = terms.iter().filter(|&&(e, _)| e == 0).fold(Fq2(0), |acc, &(_, c)| top.add(acc, top.embed(c)));
    let mut seen = Bitset::new(q2);
    seen.insert(f0.0 as u64);
    let mut cur: Vec<Fq2> = vec![top.one(); terms.len()];
    let mut x = top.one();
    let eval_at = |x: Fq2| -> Fq2 {
        terms.iter().fold(Fq2(0), |acc, &(e, c)| top.add(acc, top.mul(top.embed(c), top.pow(x, e))))
    };
    for _ in 0..q2 - 1 {
        let mut y = Fq2(0);
        for (c, xe) in coeffs.iter().zip(&cur) {
            y = top.add(y, top.mul(*c, *xe));
        }
        if !seen.insert(y.0 as u64) {
            let first = std::iter::once(Fq2(0))
                .chain(top.elements())
                .find(|&w| w != x && eval_at(w) == y)
                .expect("a repeated image must have another preimage");
            let failure = Failure::Collision { first: first.0 as u64, second: x.0 as u64, image: y.0 as u64 };
            return PermVerdict { is_permutation: false, failure: Some(failure), domain_size: q2 };
        }
        for (xe, s) in cur.iter_mut().zip(&steps) {
            *xe = top.mul(*xe, *s);
        }
        x = top.mul(x, g);
    }
    PermVerdict { is_permutation: true, failure: None, domain_size: q2 }
}
