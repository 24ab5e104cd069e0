use super::{Field, FieldError, Fq, MidField};

/// η(a) ∈ {−1, 0, 1} via Euler's criterion.
pub fn quadratic_character<F: Field>(f: &F, a: F::Elem) -> Result<i8, FieldError> {
    if f.characteristic() == 2 {
        return Err(FieldError::EvenCharacteristic);
    }
    if f.is_zero(a) {
        return Ok(0);
    }
    Ok(if f.pow(a, (f.order() - 1) / 2) == f.one() { 1 } else { -1 })
}

/// A square root of `a`, the smaller-encoded of the two when there are two.
pub fn sqrt<F: Field>(f: &F, a: F::Elem) -> Option<F::Elem> {
    let q = f.order();
    if f.is_zero(a) {
        return Some(a);
    }
    if f.characteristic() == 2 {
        return Some(f.pow(a, q / 2));
    }
    if f.pow(a, (q - 1) / 2) != f.one() {
        return None;
    }
    let r = if q % 4 == 3 { f.pow(a, (q + 1) / 4) } else { tonelli_shanks(f, a) };
    let s = f.neg(r);
    Some(if f.encode(s) < f.encode(r) { s } else { r })
}

fn tonelli_shanks<F: Field>(f: &F, a: F::Elem) -> F::Elem {
    let q = f.order();
    let s = (q - 1).trailing_zeros();
    let t = (q - 1) >> s;
    let z =
        (2..q).map(|e| f.elem(e)).find(|&z| f.pow(z, (q - 1) / 2) != f.one()).expect("odd fields contain nonresidues");
    let mut c = f.pow(z, t);
    let mut x = f.pow(a, t.div_ceil(2));
    let mut b = f.pow(a, t);
    let mut m = s;
    while b != f.one() {
        let mut i = 0;
        let mut b2 = b;
        while b2 != f.one() {
            b2 = f.mul(b2, b2);
            i += 1;
        }
        let mut w = c;
        for _ in 0..(m - i - 1) {
            w = f.mul(w, w);
        }
        x = f.mul(x, w);
        c = f.mul(w, w);
        b = f.mul(b, c);
        m = i;
    }
    x
}

/// Whether x² + ux + v has a root in F_{2^k}: Tr(v/u²) = 0.
pub fn quadratic_solvable(f: &MidField, u: Fq, v: Fq) -> Result<bool, FieldError> {
    if f.p() != 2 {
        return Err(FieldError::OddCharacteristic);
    }
    let iu2 = f.inv(f.mul(u, u)).ok_or(FieldError::ZeroCoefficient)?;
    Ok(f.trace(f.mul(v, iu2)) == 0)
}

/// Whether x³ + ux + v has exactly one root in F_{2^k}: Tr(u³/v² + 1) ≠ 0.
pub fn cubic_unique_root(f: &MidField, u: Fq, v: Fq) -> Result<bool, FieldError> {
    if f.p() != 2 {
        return Err(FieldError::OddCharacteristic);
    }
    let iv2 = f.inv(f.mul(v, v)).ok_or(FieldError::ZeroCoefficient)?;
    let u3 = f.mul(u, f.mul(u, u));
    Ok(f.trace(f.add(f.mul(u3, iv2), Fq(1))) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldCtx;

    #[test]
    fn sqrt_f7() {
        let c = FieldCtx::new(7, 1).unwrap();
        assert_eq!(sqrt(c.mid(), Fq(2)), Some(Fq(3)));
        assert_eq!(sqrt(c.mid(), Fq(3)), None);
        assert_eq!(quadratic_character(c.mid(), Fq(2)), Ok(1));
        assert_eq!(quadratic_character(c.mid(), Fq(3)), Ok(-1));
        assert_eq!(quadratic_character(c.mid(), Fq(1)), Ok(1));
    }

    #[test]
    fn sqrt_exhaustive_small_fields() {
        // q ≡ 1 mod 4 exercises Tonelli–Shanks: 5, 9, 13, 25, 81
        for (p, k) in [(3, 1), (5, 1), (13, 1), (3, 2), (5, 2), (3, 4), (7, 2), (2, 4)] {
            let c = FieldCtx::new(p, k).unwrap();
            let f = c.mid();
            for a in f.elements() {
                match sqrt(f, a) {
                    Some(r) => {
                        assert_eq!(f.mul(r, r), a);
                        assert!(f.neg(r).0 >= r.0);
                    }
                    None => assert_eq!(f.eta(a), -1),
                }
                if p != 2 {
                    assert_eq!(quadratic_character(f, a).unwrap(), f.eta(a));
                }
            }
        }
    }

    #[test]
    fn sqrt_at_top_level() {
        for (p, k) in [(3, 1), (5, 1), (2, 2)] {
            let c = FieldCtx::new(p, k).unwrap();
            let t = c.top();
            for a in t.elements() {
                if let Some(r) = sqrt(t, a) {
                    assert_eq!(t.mul(r, r), a);
                } else {
                    assert_eq!(quadratic_character(t, a), Ok(-1));
                }
            }
        }
    }

    #[test]
    fn predicate_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(quadratic_solvable(f2.mid(), Fq(1), Fq(1)), Ok(false));
        assert_eq!(cubic_unique_root(f2.mid(), Fq(0), Fq(1)), Ok(true));
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(quadratic_solvable(f4.mid(), Fq(1), Fq(1)), Ok(true));
        assert_eq!(cubic_unique_root(f4.mid(), Fq(0), Fq(1)), Ok(false));
        let f8 = FieldCtx::new(2, 3).unwrap();
        assert_eq!(quadratic_solvable(f8.mid(), Fq(1), Fq(2)), Ok(true));
        assert_eq!(cubic_unique_root(f8.mid(), Fq(1), Fq(1)), Ok(false));
        assert_eq!(quadratic_solvable(f8.mid(), Fq(0), Fq(1)), Err(FieldError::ZeroCoefficient));
        assert_eq!(cubic_unique_root(f8.mid(), Fq(1), Fq(0)), Err(FieldError::ZeroCoefficient));
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(quadratic_solvable(f3.mid(), Fq(1), Fq(1)), Err(FieldError::OddCharacteristic));
        assert_eq!(quadratic_character(f8.mid(), Fq(1)), Err(FieldError::EvenCharacteristic));
    }
}
