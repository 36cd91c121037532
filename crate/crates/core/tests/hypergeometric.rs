use supercong::arith::{int, rat};
use supercong::engine::key_sum;
use supercong::hyp::{f_m, f_m_shifted, hyp_sum, verify_hyp, verify_i0};

const CASES: [(u64, u32); 6] = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)];

#[test]
fn sums_are_divisible_and_forms_agree() {
    for (p, n) in CASES {
        let c = verify_hyp(p, n).unwrap();
        assert!(c.forms_agree, "p={p} n={n}");
        assert!(c.bridge, "p={p} n={n}");
        assert!(c.pass, "p={p} n={n} min={}", c.min_valuation);
    }
}

#[test]
fn smallest_sum() {
    assert_eq!(hyp_sum(3, 1).unwrap().coeffs(), &[rat(-3, 2), rat(3, 2)]);
}

#[test]
fn top_coefficients_are_the_i0_sums() {
    for (p, n) in CASES {
        let half = ((p.pow(n) - 1) / 2) as usize;
        let s = hyp_sum(p, n).unwrap();
        let i0 = verify_i0(p, n).unwrap();
        assert_eq!(s.coeff(half), i0.value);
        assert_eq!(s.coeff(half), key_sum(p, n, 0));
        assert!(i0.pass);
    }
}

#[test]
fn reflection_relates_the_two_families() {
    for m in 0..=60 {
        assert_eq!(f_m_shifted(m), f_m(m).poly.reflect());
        assert_eq!(f_m(m).poly.eval(&int(1)), f_m_shifted(m).eval(&int(0)));
    }
}
