use hopfq_core::fields::{canonicalize_biquadratic, classify_cyclic_case, BasisDescriptor, Field};
use hopfq_core::hopf::{self, HopfStructureId};
use hopfq_core::linalg::{det as det_rat, inverse, rat, ratio, RatMatrix, Rational};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn cyclic_field() -> impl Strategy<Value = Field> {
    (-15i64..=15, 1i64..=30, 1i64..=30).prop_filter_map("invalid cyclic parameters", |(a, b, c)| {
        Field::cyclic(2 * a + 1, b, c).ok()
    })
}

fn biquadratic_field() -> impl Strategy<Value = Field> {
    (-30i64..=30, -30i64..=30).prop_filter_map("invalid radicands", |(m, n)| Field::biquadratic(m, n).ok())
}

fn any_field() -> impl Strategy<Value = Field> {
    prop_oneof![cyclic_field(), biquadratic_field()]
}

fn structures(f: &Field) -> Vec<HopfStructureId> {
    HopfStructureId::nonclassical(f)
}

/// A sequence of elementary row operations: `(kind, i, j, factor)`.
fn row_ops(len: usize, rows: usize, max_factor: i64) -> impl Strategy<Value = Vec<(u8, usize, usize, i64)>> {
    prop::collection::vec((0u8..3, 0..rows, 0..rows, -max_factor..=max_factor), 1..=len)
}

fn apply_row_ops(m: &mut RatMatrix, ops: &[(u8, usize, usize, i64)]) {
    for &(kind, i, j, f) in ops {
        match kind {
            0 if i != j => {
                for c in 0..m.cols() {
                    let add = &m[(j, c)] * rat(f);
                    m[(i, c)] += add;
                }
            }
            1 => m.swap_rows(i, j),
            _ => {
                for c in 0..m.cols() {
                    m[(i, c)] = -m[(i, c)].clone();
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn index_is_invariant_under_unimodular_rows(f in any_field(), ops in row_ops(40, 16, 3), slot in 0usize..3) {
        let ids = structures(&f);
        let id = ids[slot % ids.len()];
        let a = hopf::analyze(&f, id).unwrap();
        let mut m = a.action.clone();
        apply_row_ops(&mut m, &ops);
        let r = hopf::reduction_report(&m).unwrap();
        prop_assert_eq!(r.index, a.reduction.index.clone());
        prop_assert_eq!(r.d, a.reduction.d);
    }

    #[test]
    fn integral_basis_choice_does_not_matter(
        f in any_field(),
        ops in row_ops(4, 4, 1),
        betas in prop::collection::vec(prop::array::uniform4(-5i64..=5), 6),
    ) {
        // V = E^T for elementary E, applied as column operations on the descriptor
        let mut vt = RatMatrix::identity(4);
        apply_row_ops(&mut vt, &ops);
        let v = vt.transpose();
        prop_assume!(v.entries().iter().all(|x| x.abs() <= rat(3)));
        let v_inv = inverse(&v).unwrap();
        let base = f.integral_basis();
        let moved = BasisDescriptor::from_matrix(base.matrix().mul(&v));
        for id in structures(&f) {
            let a = hopf::analyze(&f, id).unwrap();
            let gram = hopf::change_basis(&hopf::gram(&f, id).unwrap(), &moved).unwrap();
            let b = hopf::analyze_gram(gram, id).unwrap();
            prop_assert_eq!(&b.reduction.index, &a.reduction.index);
            for beta in &betas {
                let old: Vec<Rational> = beta.iter().map(|&x| rat(x)).collect();
                let new = v_inv.mul_vec(&old);
                let as_int = |v: &[Rational]| -> [BigInt; 4] { std::array::from_fn(|i| v[i].to_integer()) };
                let d_old = hopf::generator_determinant(&a.action, &as_int(&old));
                let d_new = hopf::generator_determinant(&b.action, &as_int(&new));
                prop_assert_eq!(d_old.abs(), d_new.abs());
            }
        }
    }

    #[test]
    fn integral_basis_is_a_ring_with_the_right_discriminant(f in any_field()) {
        let basis = f.integral_basis();
        let p = basis.matrix();
        let p_inv = inverse(p).unwrap();
        let table = hopf::mult_table(&f);
        // closed under multiplication
        for i in 0..4 {
            for j in 0..4 {
                let prod = p_inv.mul_vec(&table.mul(&basis.gamma(i), &basis.gamma(j)));
                prop_assert!(prod.iter().all(Rational::is_integer), "gamma_{} gamma_{} = {:?}", i, j, prod);
            }
        }
        let det = basis.det().abs();
        prop_assert!([rat(1), ratio(1, 2), ratio(1, 4), ratio(1, 8), ratio(1, 16)].contains(&det), "det {}", det);
        if let Field::Biquadratic(bp) = f {
            // trace of a reference-basis vector is 4 times its first coordinate
            let trace_form = RatMatrix::from_vec(
                4,
                4,
                (0..16).map(|ij| rat(4) * &table.mul(&basis.gamma(ij / 4), &basis.gamma(ij % 4))[0]).collect(),
            );
            let quad_disc = |r: i64| if r.rem_euclid(4) == 1 { r } else { 4 * r };
            let want = quad_disc(bp.m) * quad_disc(bp.n) * quad_disc(bp.k);
            prop_assert_eq!(det_rat(&trace_form).unwrap(), rat(want));
        }
    }

    #[test]
    fn canonical_form_ignores_input_order(m in -30i64..=30, n in -30i64..=30) {
        let Ok(p) = canonicalize_biquadratic(m, n) else { return Ok(()) };
        let sorted = |x: [i64; 3]| { let mut x = x; x.sort_unstable(); x };
        for (x, y) in [(n, m), (m, p.user[2]), (p.user[2], n)] {
            let q = canonicalize_biquadratic(x, y).unwrap();
            prop_assert_eq!(sorted([q.m, q.n, q.k]), sorted([p.m, p.n, p.k]));
            prop_assert_eq!(q.ty, p.ty);
        }
        let mut perm = p.perm;
        perm.sort_unstable();
        prop_assert_eq!(perm, [0, 1, 2]);
        prop_assert_eq!(p.m * p.n, p.d * p.d * p.k);
        prop_assert_eq!(p.d, num_integer::gcd(p.m, p.n));
    }

    #[test]
    fn cyclic_case_is_total(f in cyclic_field()) {
        let Field::Cyclic(p) = f else { unreachable!() };
        let n = classify_cyclic_case(&p).number();
        prop_assert!((1..=5).contains(&n));
    }
}

#[test]
fn fixture_matches_power_basis_structure() {
    let text = include_str!("fixtures/power_basis_gram.txt");
    let gram = hopf::parse_gram(text).unwrap();
    let f = Field::cyclic(1, 3, 1).unwrap();
    let col = |v: [i64; 4]| v.map(rat);
    let power = BasisDescriptor::from_columns([col([1, 0, 0, 0]), col([0, 0, 1, 0]), col([10, 3, 0, 0]), col([0, 0, 19, 3])]);
    let computed = hopf::change_basis(&hopf::gram(&f, HopfStructureId::CyclicNonclassical).unwrap(), &power).unwrap();
    assert_eq!(computed, gram);
}
