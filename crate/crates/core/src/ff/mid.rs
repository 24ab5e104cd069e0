use super::prime_poly;
use super::{Field, FieldError};

/// Element of F_q = F_p[t]/(m(t)), stored as its integer encoding
/// Σ cᵢ·pⁱ (constant term least significant).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub u32);

const NO_LOG: u32 = u32::MAX;

/// The field F_{p^k}, backed by log/exp tables. Addition in odd
/// characteristic goes through a Zech logarithm table; in characteristic 2
/// it is XOR of encodings.
#[derive(Clone, Debug)]
pub struct MidField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Fq,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    trace_of_basis: Vec<u32>,
    pow_p: Vec<u32>,
}

impl MidField {
    /// Builds F_{p^k} from a monic modulus of degree k (constant term first).
    /// The modulus is assumed to be irreducible; see [`super::FieldCtx`] for
    /// the validating constructor.
    pub(crate) fn from_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        let k = (modulus.len() - 1) as u32;
        let q = (p as u64).pow(k);
        if q > u32::MAX as u64 / 2 {
            return Err(FieldError::BoundExceeded { size: q, bound: u32::MAX as u64 / 2 });
        }
        let q = q as u32;
        let pow_p: Vec<u32> = (0..k).map(|i| p.pow(i)).collect();
        let to_poly = |enc: u32| prime_poly::digits(enc as u64, p, k as usize);
        let from_poly = |c: &[u32]| prime_poly::encode(c, p) as u32;

        let order = (q - 1) as u64;
        let factors = crate::numtheory::prime_factors(order);
        let generator = (1..q)
            .find(|&cand| {
                let c = to_poly(cand);
                factors.iter().all(|&l| {
                    let r = prime_poly::powmod(&c, order / l, &modulus, p);
                    r != [1]
                })
            })
            .expect("a cyclic group has a generator");

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![NO_LOG; q as usize];
        let g = to_poly(generator);
        let mut cur = vec![1u32];
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            let enc = from_poly(&cur);
            *slot = enc;
            log[enc as usize] = i as u32;
            cur = prime_poly::mulmod(&cur, &g, &modulus, p);
        }
        for i in n..exp.len() {
            exp[i] = exp[i - n];
        }

        let mut field = MidField {
            p,
            k,
            q,
            modulus,
            generator: Fq(generator),
            exp,
            log,
            zech: Vec::new(),
            trace_of_basis: Vec::new(),
            pow_p,
        };
        if p != 2 {
            field.zech = (0..n)
                .map(|i| {
                    let v = field.exp[i];
                    let w = field.add_digits(1, v);
                    if w == 0 {
                        NO_LOG
                    } else {
                        field.log[w as usize]
                    }
                })
                .collect();
        }
        field.trace_of_basis = (0..k)
            .map(|i| {
                let mut acc = Fq(0);
                let mut cur = Fq(p.pow(i));
                for _ in 0..k {
                    acc = field.add(acc, cur);
                    cur = field.pow(cur, p as u64);
                }
                acc.0
            })
            .collect();
        Ok(field)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        for &w in &self.pow_p {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * w;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, constant term first, length k+1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Fq {
        self.generator
    }

    /// Discrete log with respect to the generator. `None` for zero.
    pub fn log(&self, a: Fq) -> Option<u32> {
        match self.log[a.0 as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    /// g^i for any i (reduced mod q-1).
    pub fn exp(&self, i: u64) -> Fq {
        Fq(self.exp[(i % (self.q as u64 - 1)) as usize])
    }

    /// Absolute trace Tr: F_q → F_p, returned as an integer in [0, p).
    pub fn trace(&self, a: Fq) -> u32 {
        let mut e = a.0;
        let mut acc = 0u64;
        for &t in &self.trace_of_basis {
            acc += (e % self.p) as u64 * t as u64;
            e /= self.p;
        }
        (acc % self.p as u64) as u32
    }

    /// η(a) for odd q: 0 on zero, otherwise ±1 by parity of the discrete log.
    pub fn eta(&self, a: Fq) -> i8 {
        match self.log(a) {
            None => 0,
            Some(l) if l % 2 == 0 => 1,
            Some(_) => -1,
        }
    }

    /// a^(p^i).
    pub fn frobenius(&self, a: Fq, i: u32) -> Fq {
        match self.log(a) {
            None => a,
            Some(l) => {
                let m = self.q as u64 - 1;
                let mut e = l as u64;
                for _ in 0..i {
                    e = e * self.p as u64 % m;
                }
                self.exp(e)
            }
        }
    }

    /// The coefficient vector of `a` (length k, constant term first).
    pub fn coeffs(&self, a: Fq) -> Vec<u32> {
        prime_poly::digits(a.0 as u64, self.p, self.k as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fq {
        Fq(prime_poly::encode(c, self.p) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q).map(Fq)
    }

    /// Polynomial-basis form in the root `z` of the modulus, e.g. "z^2 + 1".
    pub fn basis_form(&self, a: Fq) -> String {
        let terms: Vec<String> = self
            .coeffs(a)
            .iter()
            .enumerate()
            .rev()
            .filter(|&(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "z".into(),
                (1, c) => format!("{c}*z"),
                (i, 1) => format!("z^{i}"),
                (i, c) => format!("{c}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl Field for MidField {
    type Elem = Fq;

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn order(&self) -> u64 {
        self.q as u64
    }

    fn zero(&self) -> Fq {
        Fq(0)
    }

    fn one(&self) -> Fq {
        Fq(1)
    }

    #[inline]
    fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let n = self.q - 1;
        let d = if lb >= la { lb - la } else { lb + n - la };
        match self.zech[d as usize] {
            NO_LOG => Fq(0),
            z => Fq(self.exp[(la + z) as usize]),
        }
    }

    #[inline]
    fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        let half = (self.q - 1) / 2;
        Fq(self.exp[(self.log[a.0 as usize] + half) as usize])
    }

    #[inline]
    fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq(0);
        }
        Fq(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    fn inv(&self, a: Fq) -> Option<Fq> {
        let l = self.log(a)?;
        let n = self.q - 1;
        Some(Fq(self.exp[((n - l) % n) as usize]))
    }

    fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq(1);
        }
        match self.log(a) {
            None => Fq(0),
            Some(l) => {
                let n = self.q as u64 - 1;
                self.exp((l as u64 % n) * (e % n) % n)
            }
        }
    }

    fn elem(&self, enc: u64) -> Fq {
        debug_assert!(enc < self.q as u64);
        Fq(enc as u32)
    }

    fn encode(&self, a: Fq) -> u64 {
        a.0 as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, k: u32) -> MidField {
        MidField::from_modulus(p, prime_poly::smallest_irreducible(p, k)).unwrap()
    }

    #[test]
    fn f8_cube_of_t() {
        let f8 = f(2, 3);
        let t = Fq(2);
        // t^3 = t + 1
        assert_eq!(f8.mul(t, f8.mul(t, t)), Fq(3));
        assert_eq!(f8.trace(t), 0);
        assert_eq!(f8.trace(Fq(1)), 1);
    }

    #[test]
    fn f7_basics() {
        let f7 = f(7, 1);
        assert_eq!(f7.inv(Fq(3)), Some(Fq(5)));
        assert_eq!(f7.add(Fq(5), Fq(4)), Fq(2));
        assert_eq!(f7.sub(Fq(2), Fq(4)), Fq(5));
        assert_eq!(f7.neg(Fq(1)), Fq(6));
        assert_eq!(f7.eta(Fq(2)), 1);
        assert_eq!(f7.eta(Fq(3)), -1);
        assert_eq!(f7.trace(Fq(3)), 3);
    }

    #[test]
    fn f2_is_trivial_extension() {
        let f2 = f(2, 1);
        assert_eq!(f2.q(), 2);
        assert_eq!(f2.generator(), Fq(1));
        assert_eq!(f2.mul(Fq(1), Fq(1)), Fq(1));
        assert_eq!(f2.inv(Fq(1)), Some(Fq(1)));
        assert_eq!(f2.trace(Fq(1)), 1);
    }

    #[test]
    fn add_matches_digitwise_sum() {
        for (p, k) in [(3, 3), (5, 2), (7, 2)] {
            let fld = f(p, k);
            for a in 0..fld.q() {
                for b in 0..fld.q() {
                    assert_eq!(fld.add(Fq(a), Fq(b)).0, fld.add_digits(a, b));
                }
            }
        }
    }

    #[test]
    fn mul_matches_schoolbook() {
        let fld = f(3, 3);
        for a in 0..fld.q() {
            for b in 0..fld.q() {
                let want = prime_poly::mulmod(&fld.coeffs(Fq(a)), &fld.coeffs(Fq(b)), fld.modulus(), 3);
                let mut want = want;
                want.resize(3, 0);
                assert_eq!(fld.mul(Fq(a), Fq(b)), fld.from_coeffs(&want));
            }
        }
    }

    #[test]
    fn basis_form() {
        let g = f(2, 3);
        assert_eq!(g.basis_form(Fq(0)), "0");
        assert_eq!(g.basis_form(Fq(1)), "1");
        assert_eq!(g.basis_form(Fq(6)), "z^2 + z");
        let h = f(3, 2);
        assert_eq!(h.basis_form(Fq(5)), "z + 2");
        assert_eq!(h.basis_form(Fq(6)), "2*z");
    }
}
