//! Finite fields F_p ⊂ F_q ⊂ F_{q²}.
//!
//! F_q is a polynomial-basis extension of F_p with table-driven arithmetic;
//! F_{q²} is a degree-2 tower over F_q so that x ↦ x^q, the subfield test and
//! x + x^q are cheap.

mod ext;
mod mid;
mod predicates;
pub(crate) mod prime_poly;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use ext::{ExtField, Fq2};
pub use mid::{Fq, MidField};
pub use predicates::{cubic_unique_root, quadratic_character, quadratic_solvable, sqrt};

/// Default cap on p^(2k), the size of the largest field we enumerate.
pub const DEFAULT_BOUND: u64 = 1 << 32;

/// Common arithmetic over a finite field with copyable element handles.
pub trait Field: Sync {
    type Elem: Copy + Eq + Ord + std::hash::Hash + fmt::Debug + Send + Sync;

    fn characteristic(&self) -> u32;
    fn order(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn pow(&self, a: Self::Elem, e: u64) -> Self::Elem;
    /// Element with the given integer encoding (not range checked).
    fn elem(&self, enc: u64) -> Self::Elem;
    fn encode(&self, a: Self::Elem) -> u64;

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Option<Self::Elem> {
        Some(self.mul(a, self.inv(b)?))
    }

    /// The image of an integer in the prime subfield.
    fn of_int(&self, n: i64) -> Self::Elem {
        self.elem(n.rem_euclid(self.characteristic() as i64) as u64)
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    /// a^e for a signed exponent; `None` for a negative power of zero.
    fn pow_signed(&self, a: Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            Some(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Base,
    Mid,
    Top,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Base => "base",
            Level::Mid => "mid",
            Level::Top => "top",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{level} modulus {coeffs:?} is not irreducible")]
    NotIrreducible { level: Level, coeffs: Vec<u64> },
    #[error("invalid {level} modulus: {reason}")]
    InvalidModulus { level: Level, reason: String },
    #[error("field of size {size} exceeds the enumeration bound {bound}")]
    BoundExceeded { size: u64, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live at different levels ({0} and {1})")]
    LevelMismatch(Level, Level),
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("operation requires characteristic 2")]
    OddCharacteristic,
    #[error("coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("{enc} is not a valid {level} element")]
    InvalidElement { level: Level, enc: u64 },
    #[error("wrong number of operands for {0}")]
    Arity(&'static str),
    #[error("modulus file: {0}")]
    ModulusFile(String),
}

/// User overrides for context construction.
#[derive(Clone, Debug, Default)]
pub struct CtxOptions {
    /// Monic degree-k polynomial over F_p, constant term first.
    pub mid_modulus: Option<Vec<u32>>,
    /// (m0, m1) for Y² + m1·Y + m0 over F_q, as encodings.
    pub top_modulus: Option<(u32, u32)>,
    /// Cap on p^(2k); defaults to [`DEFAULT_BOUND`].
    pub bound: Option<u64>,
}

/// F_q = F_{p^k} together with F_{q²}. Immutable once built.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    top: ExtField,
}

impl FieldCtx {
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        Self::with_options(p, k, &CtxOptions::default())
    }

    pub fn with_options(p: u32, k: u32, opts: &CtxOptions) -> Result<Self, FieldError> {
        if !crate::numtheory::is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        // encodings of F_{q²} must fit in a u32, so the bound can only be lowered
        let bound = opts.bound.unwrap_or(DEFAULT_BOUND).min(DEFAULT_BOUND);
        let size = (p as u128).checked_pow(2 * k).unwrap_or(u128::MAX);
        if size > bound as u128 {
            return Err(FieldError::BoundExceeded { size: size.min(u64::MAX as u128) as u64, bound });
        }

        let modulus = match &opts.mid_modulus {
            Some(m) => {
                validate_mid_modulus(p, k, m)?;
                m.clone()
            }
            None => prime_poly::smallest_irreducible(p, k),
        };
        let mid = MidField::from_modulus(p, modulus)?;
        let (m0, m1) = match opts.top_modulus {
            Some((m0, m1)) => {
                let q = mid.q();
                if m0 >= q || m1 >= q {
                    return Err(FieldError::InvalidModulus {
                        level: Level::Top,
                        reason: format!("coefficients must be below q = {q}"),
                    });
                }
                let (m0, m1) = (Fq(m0), Fq(m1));
                if has_root(&mid, m0, m1) {
                    return Err(FieldError::NotIrreducible {
                        level: Level::Top,
                        coeffs: vec![m0.0 as u64, m1.0 as u64, 1],
                    });
                }
                (m0, m1)
            }
            None => smallest_top_modulus(&mid),
        };
        Ok(FieldCtx { top: ExtField::new(mid, m0, m1) })
    }

    pub fn p(&self) -> u32 {
        self.mid().p()
    }

    pub fn k(&self) -> u32 {
        self.mid().k()
    }

    pub fn q(&self) -> u32 {
        self.mid().q()
    }

    /// q² as u64 (it can equal 2^32).
    pub fn q2(&self) -> u64 {
        self.q() as u64 * self.q() as u64
    }

    pub fn is_char2(&self) -> bool {
        self.p() == 2
    }

    pub fn mid(&self) -> &MidField {
        self.top.mid()
    }

    pub fn top(&self) -> &ExtField {
        &self.top
    }

    pub fn mid_modulus(&self) -> &[u32] {
        self.mid().modulus()
    }

    /// Encoding Σ cᵢ·pⁱ of the mid modulus, leading coefficient included.
    pub fn mid_modulus_encoding(&self) -> u64 {
        prime_poly::encode(self.mid_modulus(), self.p())
    }

    /// [m0, m1, 1].
    pub fn top_modulus(&self) -> [u32; 3] {
        let (m0, m1) = self.top.modulus();
        [m0.0, m1.0, 1]
    }

    /// Encoding m0 + m1·q + q² of the top modulus.
    pub fn top_modulus_encoding(&self) -> u64 {
        let q = self.q() as u64;
        let [m0, m1, _] = self.top_modulus();
        m0 as u64 + m1 as u64 * q + q * q
    }

    pub fn mid_generator(&self) -> Fq {
        self.mid().generator()
    }

    pub fn top_generator(&self) -> Fq2 {
        self.top.generator()
    }

    /// Validates and wraps an encoding at the given level.
    pub fn element(&self, level: Level, enc: u64) -> Result<FieldElement, FieldError> {
        let size = match level {
            Level::Base => self.p() as u64,
            Level::Mid => self.q() as u64,
            Level::Top => self.q2(),
        };
        if enc >= size {
            return Err(FieldError::InvalidElement { level, enc });
        }
        Ok(FieldElement { level, enc })
    }

    /// Field operation on dynamically-levelled elements.
    pub fn arith(&self, op: ArithOp, operands: &[FieldElement]) -> Result<FieldElement, FieldError> {
        let level = operands.first().map(|e| e.level).ok_or(FieldError::Arity(op.name()))?;
        for e in operands {
            if e.level != level {
                return Err(FieldError::LevelMismatch(level, e.level));
            }
            self.element(e.level, e.enc)?;
        }
        let enc = match level {
            Level::Base => apply(&PrimeField(self.p()), op, operands)?,
            Level::Mid => apply(self.mid(), op, operands)?,
            Level::Top => apply(&self.top, op, operands)?,
        };
        Ok(FieldElement { level, enc })
    }

    /// Tr: F_q → F_p.
    pub fn trace_to_prime(&self, e: FieldElement) -> Result<FieldElement, FieldError> {
        if e.level != Level::Mid {
            return Err(FieldError::LevelMismatch(Level::Mid, e.level));
        }
        let t = self.mid().trace(Fq(e.enc as u32));
        Ok(FieldElement { level: Level::Base, enc: t as u64 })
    }

    /// Every element of the requested set, in a fixed order.
    pub fn enumerate(&self, set: EnumSet) -> Box<dyn Iterator<Item = FieldElement> + '_> {
        match set {
            EnumSet::MidField => Box::new((0..self.q() as u64).map(|enc| FieldElement { level: Level::Mid, enc })),
            EnumSet::TopField => Box::new((0..self.q2()).map(|enc| FieldElement { level: Level::Top, enc })),
            EnumSet::Mu => {
                Box::new(self.top.mu().into_iter().map(|x| FieldElement { level: Level::Top, enc: x.0 as u64 }))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumSet {
    MidField,
    TopField,
    Mu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow(i64),
}

impl ArithOp {
    fn name(self) -> &'static str {
        match self {
            ArithOp::Add => "add",
            ArithOp::Sub => "sub",
            ArithOp::Mul => "mul",
            ArithOp::Inv => "inv",
            ArithOp::Pow(_) => "pow",
        }
    }
}

/// An element tagged with the level it lives at. The encoding is the
/// integer Σ cᵢ·pⁱ (mid over base) or c0 + c1·q (top over mid).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldElement {
    pub level: Level,
    pub enc: u64,
}

impl FieldElement {
    /// Full-length coefficient vector over the next-lower level.
    pub fn coeffs(&self, ctx: &FieldCtx) -> Vec<u64> {
        match self.level {
            Level::Base => vec![self.enc],
            Level::Mid => prime_poly::digits(self.enc, ctx.p(), ctx.k() as usize).into_iter().map(u64::from).collect(),
            Level::Top => vec![self.enc % ctx.q() as u64, self.enc / ctx.q() as u64],
        }
    }
}

fn apply<F: Field>(f: &F, op: ArithOp, xs: &[FieldElement]) -> Result<u64, FieldError> {
    let arg = |i: usize| f.elem(xs[i].enc);
    let want = match op {
        ArithOp::Add | ArithOp::Sub | ArithOp::Mul => 2,
        ArithOp::Inv | ArithOp::Pow(_) => 1,
    };
    if xs.len() != want {
        return Err(FieldError::Arity(op.name()));
    }
    let out = match op {
        ArithOp::Add => f.add(arg(0), arg(1)),
        ArithOp::Sub => f.sub(arg(0), arg(1)),
        ArithOp::Mul => f.mul(arg(0), arg(1)),
        ArithOp::Inv => f.inv(arg(0)).ok_or(FieldError::DivisionByZero)?,
        ArithOp::Pow(e) => f.pow_signed(arg(0), e).ok_or(FieldError::DivisionByZero)?,
    };
    Ok(f.encode(out))
}

/// F_p by plain modular arithmetic.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField(pub u32);

impl Field for PrimeField {
    type Elem = u32;

    fn characteristic(&self) -> u32 {
        self.0
    }
    fn order(&self) -> u64 {
        self.0 as u64
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.0
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }
    fn neg(&self, a: u32) -> u32 {
        (self.0 - a) % self.0
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }
    fn inv(&self, a: u32) -> Option<u32> {
        crate::numtheory::inv_mod(a as u64, self.0 as u64).map(|x| x as u32)
    }
    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
    fn elem(&self, enc: u64) -> u32 {
        enc as u32
    }
    fn encode(&self, a: u32) -> u64 {
        a as u64
    }
}

fn validate_mid_modulus(p: u32, k: u32, m: &[u32]) -> Result<(), FieldError> {
    let bad = |reason: String| FieldError::InvalidModulus { level: Level::Mid, reason };
    if m.len() != k as usize + 1 {
        return Err(bad(format!("expected {} coefficients, got {}", k + 1, m.len())));
    }
    if let Some(&c) = m.iter().find(|&&c| c >= p) {
        return Err(bad(format!("coefficient {c} is not below p = {p}")));
    }
    if m[k as usize] != 1 {
        return Err(bad("leading coefficient must be 1".into()));
    }
    if !prime_poly::is_irreducible(m, p) {
        return Err(FieldError::NotIrreducible { level: Level::Mid, coeffs: m.iter().map(|&c| c as u64).collect() });
    }
    Ok(())
}

fn has_root(mid: &MidField, m0: Fq, m1: Fq) -> bool {
    mid.elements().any(|y| mid.add(mid.mul(y, mid.add(y, m1)), m0) == Fq(0))
}

/// Y² + m1·Y + m0 is irreducible iff it has no root: in characteristic 2
/// that is m1 ≠ 0 and Tr(m0/m1²) = 1, otherwise the discriminant is a
/// nonsquare.
fn top_irreducible(mid: &MidField, m0: Fq, m1: Fq) -> bool {
    if mid.p() == 2 {
        match mid.inv(mid.mul(m1, m1)) {
            None => false,
            Some(i) => mid.trace(mid.mul(m0, i)) == 1,
        }
    } else {
        let disc = mid.sub(mid.mul(m1, m1), mid.mul(mid.of_int(4), m0));
        mid.eta(disc) == -1
    }
}

fn smallest_top_modulus(mid: &MidField) -> (Fq, Fq) {
    (0..mid.q())
        .flat_map(|m1| (0..mid.q()).map(move |m0| (Fq(m0), Fq(m1))))
        .find(|&(m0, m1)| top_irreducible(mid, m0, m1))
        .expect("an irreducible quadratic exists over every finite field")
}

/// Overrides read from a modulus file: lines `mid: c0 c1 ... 1` and
/// `top: m0 m1 1`, coefficients constant term first. `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModulusSpec {
    pub mid: Option<Vec<u32>>,
    pub top: Option<(u32, u32)>,
}

impl ModulusSpec {
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let mut spec = ModulusSpec::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| FieldError::ModulusFile(format!("line {}: {msg}", lineno + 1));
            let (key, rest) = line.split_once(':').ok_or_else(|| err("expected `mid:` or `top:`"))?;
            let coeffs = rest
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| err(&format!("bad coefficient `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            match key.trim() {
                "mid" => spec.mid = Some(coeffs),
                "top" => {
                    if coeffs.len() != 3 || coeffs[2] != 1 {
                        return Err(err("top modulus must be `m0 m1 1`"));
                    }
                    spec.top = Some((coeffs[0], coeffs[1]));
                }
                other => return Err(err(&format!("unknown level `{other}`"))),
            }
        }
        Ok(spec)
    }

    pub fn apply(&self, opts: &mut CtxOptions) {
        if let Some(m) = &self.mid {
            opts.mid_modulus = Some(m.clone());
        }
        if let Some(t) = self.top {
            opts.top_modulus = Some(t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        let c = FieldCtx::new(2, 3).unwrap();
        assert_eq!(c.mid_modulus(), &[1, 1, 0, 1]);
        assert_eq!(c.mid_modulus_encoding(), 11);
        let c = FieldCtx::new(2, 1).unwrap();
        assert_eq!(c.mid_modulus(), &[0, 1]);
        assert_eq!(c.q(), 2);
        // x² + x + 1 is the only irreducible quadratic over F_2
        assert_eq!(c.top_modulus(), [1, 1, 1]);
        let c = FieldCtx::new(3, 2).unwrap();
        assert_eq!((c.q(), c.q2(), c.top().mu().len()), (9, 81, 10));
    }

    #[test]
    fn default_top_modulus_has_no_root() {
        for (p, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let c = FieldCtx::new(p, k).unwrap();
            let [m0, m1, _] = c.top_modulus();
            assert!(!has_root(c.mid(), Fq(m0), Fq(m1)), "p={p} k={k}");
            // every smaller candidate has a root
            let q = c.q();
            for enc in 0..(m0 + m1 * q) {
                assert!(has_root(c.mid(), Fq(enc % q), Fq(enc / q)));
            }
        }
    }

    #[test]
    fn generators_have_full_order() {
        for (p, k) in [(2, 4), (3, 2), (5, 2), (7, 1)] {
            let c = FieldCtx::new(p, k).unwrap();
            let mid = c.mid();
            let g = c.mid_generator();
            let orbit: std::collections::HashSet<_> = (0..mid.q() - 1).map(|i| mid.pow(g, i as u64)).collect();
            assert_eq!(orbit.len() as u32, mid.q() - 1);
            let top = c.top();
            let g = c.top_generator();
            let mut cur = top.one();
            let mut seen = std::collections::HashSet::new();
            for _ in 0..c.q2() - 1 {
                assert!(seen.insert(cur));
                cur = top.mul(cur, g);
            }
            assert_eq!(cur, top.one());
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(FieldCtx::new(2, 17), Err(FieldError::BoundExceeded { .. })));
        let opts = CtxOptions { mid_modulus: Some(vec![1, 0, 1]), ..Default::default() };
        assert!(matches!(
            FieldCtx::with_options(2, 2, &opts),
            Err(FieldError::NotIrreducible { level: Level::Mid, .. })
        ));
        let opts = CtxOptions { top_modulus: Some((1, 0)), ..Default::default() };
        assert!(matches!(
            FieldCtx::with_options(2, 2, &opts),
            Err(FieldError::NotIrreducible { level: Level::Top, .. })
        ));
        let opts = CtxOptions { bound: Some(1 << 10), ..Default::default() };
        assert!(FieldCtx::with_options(2, 5, &opts).is_ok());
        assert!(FieldCtx::with_options(2, 6, &opts).is_err());
    }

    #[test]
    fn dynamic_arith() {
        let c = FieldCtx::new(2, 3).unwrap();
        let t = c.element(Level::Mid, 2).unwrap();
        let t2 = c.element(Level::Mid, 4).unwrap();
        assert_eq!(c.arith(ArithOp::Mul, &[t, t2]).unwrap().enc, 3);
        assert_eq!(c.arith(ArithOp::Pow(0), &[t]).unwrap().enc, 1);
        let z = c.element(Level::Mid, 0).unwrap();
        assert_eq!(c.arith(ArithOp::Inv, &[z]), Err(FieldError::DivisionByZero));
        assert_eq!(c.arith(ArithOp::Pow(-1), &[z]), Err(FieldError::DivisionByZero));
        let inv = c.arith(ArithOp::Inv, &[t]).unwrap();
        assert_eq!(c.arith(ArithOp::Pow(-3), &[t]).unwrap(), c.arith(ArithOp::Pow(3), &[inv]).unwrap());
        let top = c.element(Level::Top, 9).unwrap();
        assert_eq!(c.arith(ArithOp::Add, &[t, top]), Err(FieldError::LevelMismatch(Level::Mid, Level::Top)));
        assert_eq!(c.trace_to_prime(t).unwrap().enc, 0);
        assert_eq!(c.element(Level::Mid, 4).unwrap().coeffs(&c), vec![0, 0, 1]);

        let c7 = FieldCtx::new(7, 1).unwrap();
        let three = c7.element(Level::Base, 3).unwrap();
        assert_eq!(c7.arith(ArithOp::Inv, &[three]).unwrap().enc, 5);
    }

    #[test]
    fn f4_trace_of_omega() {
        let c = FieldCtx::new(2, 2).unwrap();
        assert_eq!(c.mid_modulus(), &[1, 1, 1]);
        assert_eq!(c.mid().trace(Fq(2)), 1);
    }

    #[test]
    fn mu_enumeration() {
        for (p, k) in [(2, 1), (3, 1), (2, 3), (5, 1), (3, 2)] {
            let c = FieldCtx::new(p, k).unwrap();
            let top = c.top();
            let mu = top.mu();
            assert_eq!(mu.len() as u32, c.q() + 1);
            let distinct: std::collections::HashSet<_> = mu.iter().collect();
            assert_eq!(distinct.len(), mu.len());
            for &x in &mu {
                assert_eq!(top.pow(x, c.q() as u64 + 1), top.one());
                assert_eq!(top.conj(x), top.inv(x).unwrap());
                assert!(top.is_on_mu(x));
            }
            if p == 2 {
                let prod = mu.iter().fold(top.one(), |acc, &x| top.mul(acc, x));
                assert_eq!(prod, top.one());
            }
        }
    }

    #[test]
    fn modulus_file() {
        let spec = ModulusSpec::parse("# F_8\nmid: 1 1 0 1\ntop: 3 1 1\n").unwrap();
        assert_eq!(spec.mid, Some(vec![1, 1, 0, 1]));
        assert_eq!(spec.top, Some((3, 1)));
        assert!(ModulusSpec::parse("side: 1 1").is_err());
        assert!(ModulusSpec::parse("mid: 1 x").is_err());
        assert!(ModulusSpec::parse("top: 1 1").is_err());
        let mut opts = CtxOptions::default();
        ModulusSpec::parse("mid: 1 0 1 1").unwrap().apply(&mut opts);
        let c = FieldCtx::with_options(2, 3, &opts).unwrap();
        assert_eq!(c.mid_modulus_encoding(), 13);
    }
}
