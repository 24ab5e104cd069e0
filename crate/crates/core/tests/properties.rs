use proptest::prelude::*;

use xrh_core::construct::{assemble_f, construct_h};
use xrh_core::ff::{quadratic_character, sqrt, ExtField, Field, FieldCtx, Fq, Fq2, MidField};
use xrh_core::oracle::check_sparse_poly;
use xrh_core::poly::{LaurentPoly, UniPoly};
use xrh_core::reduce::{dickson, phi_chi, reduce_h};

const SMALL: [(u32, u32); 6] = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)];

fn ctx_strategy() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(SMALL.to_vec()).prop_map(|(p, k)| FieldCtx::new(p, k).unwrap())
}

fn uni(f: &MidField, coeffs: &[u32]) -> UniPoly {
    UniPoly::from_coeffs(coeffs.iter().map(|&c| Fq(c % f.q())).collect())
}

fn laurent(f: &MidField, terms: &[(i64, u32)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Fq(c % f.q()))), f)
}

fn terms_strategy() -> impl Strategy<Value = Vec<(i64, u32)>> {
    prop::collection::vec((-12i64..=12, 0u32..1 << 12), 1..6)
}

/// x^e on μ_{q+1} by direct exponentiation.
fn pow_mu(top: &ExtField, x: Fq2, e: i64) -> Fq2 {
    top.pow_signed(x, e).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_and_sqrt(c in ctx_strategy(), raw in 1u32..1 << 16) {
        let f = c.mid();
        let a = Fq(raw % (f.q() - 1) + 1);
        prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        match sqrt(f, a) {
            Some(r) => prop_assert_eq!(f.mul(r, r), a),
            None => prop_assert_eq!(quadratic_character(f, a).unwrap(), -1),
        }
        let top = c.top();
        let x = Fq2((raw as u64 % (c.q2() - 1) + 1) as u32);
        prop_assert_eq!(top.mul(x, top.inv(x).unwrap()), top.one());
    }

    #[test]
    fn trace_is_additive(c in ctx_strategy(), a in 0u32..1 << 16, b in 0u32..1 << 16) {
        let f = c.mid();
        let (a, b) = (Fq(a % f.q()), Fq(b % f.q()));
        prop_assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % c.p());
    }

    #[test]
    fn uni_ring_laws(
        c in ctx_strategy(),
        x in prop::collection::vec(0u32..1 << 12, 0..6),
        y in prop::collection::vec(0u32..1 << 12, 0..6),
        z in prop::collection::vec(0u32..1 << 12, 0..6),
    ) {
        let f = c.mid();
        let (x, y, z) = (uni(f, &x), uni(f, &y), uni(f, &z));
        prop_assert_eq!(x.mul(&y, f).mul(&z, f), x.mul(&y.mul(&z, f), f));
        prop_assert_eq!(x.mul(&y.add(&z, f), f), x.mul(&y, f).add(&x.mul(&z, f), f));
        if !y.is_zero() {
            let (quo, rem) = x.divrem(&y, f).unwrap();
            prop_assert_eq!(quo.mul(&y, f).add(&rem, f), x);
        }
    }

    #[test]
    fn laurent_eval_is_multiplicative(c in ctx_strategy(), l in terms_strategy(), m in terms_strategy()) {
        let f = c.mid();
        let top = c.top();
        let (l, m) = (laurent(f, &l), laurent(f, &m));
        let lm = l.mul(&m, f);
        for x in top.mu() {
            let lhs = top.mul(l.eval_on_mu(&c, x).unwrap(), m.eval_on_mu(&c, x).unwrap());
            prop_assert_eq!(lhs, lm.eval_on_mu(&c, x).unwrap());
        }
    }

    #[test]
    fn doubled_form_is_composition_with_squaring(k in 2u32..=4, terms in prop::collection::vec((-12i64..=12, 0u32..1 << 12), 1..6)) {
        let c = FieldCtx::new(2, k).unwrap();
        let f = c.mid();
        let top = c.top();
        let mut h = LaurentPoly::zero();
        for (e2, v) in terms {
            h.add_term2(e2, Fq(v % f.q()), f);
        }
        let (d, doubled) = h.to_integer_exponents();
        prop_assert_eq!(doubled, h.has_half_exponents());
        if doubled {
            for x in top.mu() {
                let x2 = top.mul(x, x);
                prop_assert_eq!(d.eval_on_mu(&c, x).unwrap(), h.eval_on_mu(&c, x2).unwrap());
            }
        }
    }

    #[test]
    fn reduced_pair_matches_h(c in ctx_strategy(), terms in terms_strategy(), other in terms_strategy()) {
        let f = c.mid();
        let h = laurent(f, &terms);
        let g = laurent(f, &other);
        let rh = reduce_h(&c, &h).unwrap();
        for x in c.top().mu() {
            prop_assert_eq!(rh.eval_at(&c, x), h.eval_on_mu(&c, x).unwrap());
        }
        // linearity
        let rg = reduce_h(&c, &g).unwrap();
        let sum = reduce_h(&c, &h.add(&g, f)).unwrap();
        prop_assert_eq!(sum.h1, rh.h1.add(&rg.h1, f));
        prop_assert_eq!(sum.h2, rh.h2.add(&rg.h2, f));
    }

    #[test]
    fn assembled_f_matches_direct_evaluation(c in ctx_strategy(), terms in terms_strategy(), r in 1i64..6) {
        let f = c.mid();
        let top = c.top();
        let h = laurent(f, &terms);
        prop_assume!(!h.is_zero());
        let pp = assemble_f(&c, &h, r).unwrap();
        let q = c.q() as u64;
        for x in top.elements().filter(|&x| x != top.zero()) {
            let xq1 = top.pow(x, q - 1);
            let direct = top.mul(top.pow(x, r as u64), h.eval_top(top, xq1).unwrap());
            let via_terms = pp
                .terms
                .iter()
                .fold(top.zero(), |acc, &(e, cf)| top.add(acc, top.mul(top.embed(Fq(cf)), top.pow(x, e))));
            prop_assert_eq!(direct, via_terms);
        }
    }

    #[test]
    fn constructed_h_keeps_a_unit_root_alive(c in ctx_strategy(), a in prop::collection::vec(0u32..1 << 12, 1..5), b in prop::collection::vec(0u32..1 << 12, 1..5)) {
        let f = c.mid();
        let (h1, h2) = (uni(f, &a), uni(f, &b));
        prop_assume!(!(h1.is_zero() && h2.is_zero()));
        let h = construct_h(&c, &h1, &h2).unwrap();
        let (d, doubled) = h.to_integer_exponents();
        let top = c.top();
        let at = |x: Fq2| d.eval_top(top, x).unwrap();
        let one = top.one();
        let minus_one = top.neg(one);
        prop_assert!(at(one) != top.zero() || at(minus_one) != top.zero(), "doubled={}", doubled);
    }
}

#[test]
fn mu_elements_are_distinct_and_inverted_by_frobenius() {
    for (p, k) in SMALL {
        let c = FieldCtx::new(p, k).unwrap();
        let top = c.top();
        let mu = top.mu();
        let q = c.q() as u64;
        assert_eq!(mu.len() as u64, q + 1);
        let mut sorted = mu.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), mu.len());
        for x in mu {
            assert_eq!(top.pow(x, q + 1), top.one());
            assert_eq!(top.pow(x, q), top.inv(x).unwrap());
            assert_eq!(top.conj(x), top.inv(x).unwrap());
        }
    }
}

#[test]
fn dickson_and_phi_chi_on_mu() {
    for (p, k) in SMALL {
        let c = FieldCtx::new(p, k).unwrap();
        let top = c.top();
        let f = c.mid();
        let q = c.q() as i64;
        for e in 0..=2 * (q + 1) {
            let d = dickson(f, e);
            let (phi, chi) = phi_chi(f, e as u64);
            for x in top.mu() {
                let a = top.trace_to_mid(x);
                let want = top.add(pow_mu(top, x, e), pow_mu(top, x, -e));
                assert_eq!(top.embed(d.eval(a, f)), want, "p={p} k={k} e={e}");
                if e <= q + 1 {
                    let xn = top.add(top.mul(top.embed(phi.eval(a, f)), x), top.embed(chi.eval(a, f)));
                    assert_eq!(xn, pow_mu(top, x, e), "p={p} k={k} n={e}");
                }
            }
        }
    }
}

#[test]
fn dickson_fixes_two_in_odd_characteristic() {
    for (p, k) in [(3, 2), (5, 1), (7, 2)] {
        let c = FieldCtx::new(p, k).unwrap();
        let f = c.mid();
        for e in 0..=100 {
            assert_eq!(dickson(f, e).eval(f.of_int(2), f), f.of_int(2), "p={p} e={e}");
        }
    }
}

#[test]
fn sparse_oracle_agrees_with_assembled_structure() {
    // x^r h(x^(q-1)) checked through the generic sparse evaluator
    let c = FieldCtx::new(2, 3).unwrap();
    let f = c.mid();
    let h = LaurentPoly::parse("1*x^2 + 1*x^1 + 1*x^-1", f).unwrap();
    let pp = assemble_f(&c, &h, 1).unwrap();
    assert!(check_sparse_poly(&c, &pp.sparse()).is_permutation);
}
