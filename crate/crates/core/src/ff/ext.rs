use super::mid::{Fq, MidField};
use super::Field;

/// Element c0 + c1·Y of F_{q²} = F_q[Y]/(Y² + m1·Y + m0), encoded as
/// c0 + c1·q.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq2(pub u32);

/// The quadratic extension F_{q²} as a tower over [`MidField`].
#[derive(Clone, Debug)]
pub struct ExtField {
    mid: MidField,
    q: u32,
    m0: Fq,
    m1: Fq,
    generator: Fq2,
}

impl ExtField {
    pub(crate) fn new(mid: MidField, m0: Fq, m1: Fq) -> Self {
        let q = mid.q();
        let mut ext = ExtField { mid, q, m0, m1, generator: Fq2(0) };
        ext.generator = ext.find_generator();
        ext
    }

    fn find_generator(&self) -> Fq2 {
        let order = self.order() - 1;
        let factors = crate::numtheory::prime_factors(order);
        (1..self.order())
            .map(|e| Fq2(e as u32))
            .find(|&c| factors.iter().all(|&l| self.pow(c, order / l) != Fq2(1)))
            .expect("a cyclic group has a generator")
    }

    pub fn mid(&self) -> &MidField {
        &self.mid
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// (m0, m1) of the modulus Y² + m1·Y + m0.
    pub fn modulus(&self) -> (Fq, Fq) {
        (self.m0, self.m1)
    }

    pub fn generator(&self) -> Fq2 {
        self.generator
    }

    /// ζ = g^(q−1), a generator of μ_{q+1}.
    pub fn mu_generator(&self) -> Fq2 {
        self.pow(self.generator, self.q as u64 - 1)
    }

    #[inline]
    pub fn split(&self, a: Fq2) -> (Fq, Fq) {
        (Fq(a.0 % self.q), Fq(a.0 / self.q))
    }

    #[inline]
    pub fn join(&self, c0: Fq, c1: Fq) -> Fq2 {
        Fq2(c0.0 + c1.0 * self.q)
    }

    /// c1·y + c0 with y the root of the top modulus and c0, c1 in
    /// polynomial-basis form over F_p.
    pub fn basis_form(&self, a: Fq2) -> String {
        let (c0, c1) = self.split(a);
        let m = &self.mid;
        match (c1.0, c0.0) {
            (0, _) => m.basis_form(c0),
            (_, 0) => format!("({})*y", m.basis_form(c1)),
            _ => format!("({})*y + {}", m.basis_form(c1), m.basis_form(c0)),
        }
    }

    #[inline]
    pub fn embed(&self, c: Fq) -> Fq2 {
        Fq2(c.0)
    }

    /// `Some(c)` when `a` lies in the subfield F_q.
    pub fn as_mid(&self, a: Fq2) -> Option<Fq> {
        (a.0 < self.q).then_some(Fq(a.0))
    }

    /// a^q, the nontrivial automorphism over F_q: Y ↦ −m1 − Y.
    #[inline]
    pub fn conj(&self, a: Fq2) -> Fq2 {
        let m = &self.mid;
        let (c0, c1) = self.split(a);
        self.join(m.sub(c0, m.mul(self.m1, c1)), m.neg(c1))
    }

    /// a + a^q.
    #[inline]
    pub fn trace_to_mid(&self, a: Fq2) -> Fq {
        let m = &self.mid;
        let (c0, c1) = self.split(a);
        m.sub(m.add(c0, c0), m.mul(self.m1, c1))
    }

    /// a^(q+1).
    #[inline]
    pub fn norm_to_mid(&self, a: Fq2) -> Fq {
        let m = &self.mid;
        let (c0, c1) = self.split(a);
        let t = m.sub(m.mul(c0, c0), m.mul(self.m1, m.mul(c0, c1)));
        m.add(t, m.mul(self.m0, m.mul(c1, c1)))
    }

    pub fn is_on_mu(&self, a: Fq2) -> bool {
        self.norm_to_mid(a) == Fq(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq2> + '_ {
        (0..self.order()).map(|e| Fq2(e as u32))
    }

    /// μ_{q+1} as ζ^i, i = 0..q.
    pub fn mu(&self) -> Vec<Fq2> {
        let z = self.mu_generator();
        let mut out = Vec::with_capacity(self.q as usize + 1);
        let mut cur = Fq2(1);
        for _ in 0..=self.q {
            out.push(cur);
            cur = self.mul(cur, z);
        }
        out
    }
}

impl Field for ExtField {
    type Elem = Fq2;

    fn characteristic(&self) -> u32 {
        self.mid.p()
    }

    fn order(&self) -> u64 {
        self.q as u64 * self.q as u64
    }

    fn zero(&self) -> Fq2 {
        Fq2(0)
    }

    fn one(&self) -> Fq2 {
        Fq2(1)
    }

    #[inline]
    fn add(&self, a: Fq2, b: Fq2) -> Fq2 {
        let m = &self.mid;
        let (a0, a1) = self.split(a);
        let (b0, b1) = self.split(b);
        self.join(m.add(a0, b0), m.add(a1, b1))
    }

    #[inline]
    fn neg(&self, a: Fq2) -> Fq2 {
        let m = &self.mid;
        let (a0, a1) = self.split(a);
        self.join(m.neg(a0), m.neg(a1))
    }

    #[inline]
    fn sub(&self, a: Fq2, b: Fq2) -> Fq2 {
        let m = &self.mid;
        let (a0, a1) = self.split(a);
        let (b0, b1) = self.split(b);
        self.join(m.sub(a0, b0), m.sub(a1, b1))
    }

    #[inline]
    fn mul(&self, a: Fq2, b: Fq2) -> Fq2 {
        let m = &self.mid;
        let (a0, a1) = self.split(a);
        let (b0, b1) = self.split(b);
        // Y² = −m1·Y − m0
        let hi = m.mul(a1, b1);
        let c0 = m.sub(m.mul(a0, b0), m.mul(self.m0, hi));
        let c1 = m.sub(m.add(m.mul(a0, b1), m.mul(a1, b0)), m.mul(self.m1, hi));
        self.join(c0, c1)
    }

    fn inv(&self, a: Fq2) -> Option<Fq2> {
        let n = self.mid.inv(self.norm_to_mid(a))?;
        Some(self.mul(self.conj(a), self.embed(n)))
    }

    fn pow(&self, a: Fq2, e: u64) -> Fq2 {
        let mut acc = Fq2(1);
        let mut base = a;
        let mut e = if a.0 == 0 || e == 0 { e } else { (e - 1) % (self.order() - 1) + 1 };
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn elem(&self, enc: u64) -> Fq2 {
        debug_assert!(enc < self.order());
        Fq2(enc as u32)
    }

    fn encode(&self, a: Fq2) -> u64 {
        a.0 as u64
    }
}
