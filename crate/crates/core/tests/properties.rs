use proptest::prelude::*;
use znlab_core::operators::flat_blocks;
use znlab_core::orlicz::{luxemburg_solve, DEFAULT_MAX_ITER};
use znlab_core::rochberg::{default_witnesses, pairing_gram};
use znlab_core::scalar::relative_gap;
use znlab_core::seq::DEFAULT_ENTRY_BUDGET;
use znlab_core::*;

fn coord(max_dim: usize) -> impl Strategy<Value = CoordVector<f64>> {
    prop::collection::vec(
        prop_oneof![1 => Just(0.0), 3 => -10.0..10.0f64],
        1..=max_dim,
    )
    .prop_map(|v| CoordVector::from_values(&v).unwrap())
}

fn nonzero_coord(max_dim: usize) -> impl Strategy<Value = CoordVector<f64>> {
    coord(max_dim).prop_filter("nonzero", |x| !x.is_zero())
}

fn rochberg(n: usize, max_dim: usize) -> impl Strategy<Value = RochbergVector<f64>> {
    prop::collection::vec(coord(max_dim), n).prop_map(|c| RochbergVector::new(c).unwrap())
}

fn order_and_vector(max_n: usize) -> impl Strategy<Value = RochbergVector<f64>> {
    (1..=max_n).prop_flat_map(|n| rochberg(n, 8))
}

fn order_and_pair(
    max_n: usize,
) -> impl Strategy<Value = (RochbergVector<f64>, RochbergVector<f64>)> {
    (1..=max_n).prop_flat_map(|n| (rochberg(n, 8), rochberg(n, 8)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph_isometry(n in 1usize..=6, u in coord(64)) {
        let q = graph_vector(n, &u).quasinorm().unwrap();
        prop_assert!(relative_gap(q, u.l2_norm()) <= 1e-9);
    }

    #[test]
    fn homogeneity(v in order_and_vector(5), lambda in prop_oneof![-1e3..-1e-3f64, 1e-3..1e3f64]) {
        let q = v.quasinorm().unwrap();
        let ql = v.scale(lambda).quasinorm().unwrap();
        prop_assert!(relative_gap(ql, lambda.abs() * q) <= 1e-12);
    }

    #[test]
    fn iota_isometry(v in order_and_vector(5), extra in 0usize..=3) {
        let n = v.order() + extra;
        let q = v.quasinorm().unwrap();
        prop_assert!(relative_gap(v.embed(n).unwrap().quasinorm().unwrap(), q) <= 1e-12);
    }

    #[test]
    fn quasi_triangle_within_budget((v, w) in order_and_pair(5)) {
        let n = v.order() as i32;
        let lhs = v.add(&w).unwrap().quasinorm().unwrap();
        let rhs = v.quasinorm().unwrap() + w.quasinorm().unwrap();
        prop_assert!(lhs <= 4f64.powi(n) * rhs + 1e-12);
    }

    #[test]
    fn duality_within_budget((x, y) in order_and_pair(5)) {
        let n = x.order() as i32;
        let d = duality_pairing(&x, &y).unwrap().abs();
        prop_assert!(d <= 4f64.powi(n) * x.quasinorm().unwrap() * y.quasinorm().unwrap() + 1e-12);
    }

    #[test]
    fn diagonal_pairing_structure(x in order_and_vector(6)) {
        let n = x.order();
        let c = x.coords();
        let d = duality_pairing(&x, &x).unwrap();
        if n % 2 == 0 {
            prop_assert_eq!(d, 0.0);
        } else {
            let mid = &c[(n - 1) / 2];
            let sign = if n.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
            let mut expected = sign * mid.pair(mid);
            for t in 0..(n - 1) / 2 {
                let outer = 2.0 * c[t].pair(&c[n - 1 - t]);
                expected += if t % 2 == 0 { -outer } else { outer };
            }
            prop_assert!((d - expected).abs() <= 1e-12 * expected.abs().max(1.0));
            let only_mid = RochbergVector::new(
                (0..n).map(|t| if 2 * t + 1 == n { mid.clone() } else { CoordVector::zero() }).collect(),
            )
            .unwrap();
            prop_assert_eq!(duality_pairing(&only_mid, &only_mid).unwrap(), sign * mid.pair(mid));
        }
    }

    #[test]
    fn pairing_form_symmetry((x, y) in order_and_pair(6)) {
        let n = x.order();
        let xy = duality_pairing(&x, &y).unwrap();
        let yx = duality_pairing(&y, &x).unwrap();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        prop_assert!((xy - sign * yx).abs() <= 1e-12 * xy.abs().max(1.0));
    }

    #[test]
    fn omega_default_witnesses_reach_sup_norm(n in 1usize..=5, u in nonzero_coord(16)) {
        let x = RochbergVector::top(n, u.clone());
        let w = default_witnesses(&x, DEFAULT_ENTRY_BUDGET).unwrap();
        let omega = omega_lower_bound(&x, &w).unwrap();
        prop_assert!(omega >= u.max_abs() * (1.0 - 1e-12));
        prop_assert!(omega <= 4f64.powi(n as i32) * x.quasinorm().unwrap());
    }

    #[test]
    fn lemma4_bound(n in 1usize..=5, x in coord(64), y in coord(64)) {
        let (value, bound) = lemma4_sum(n, &x, &y);
        prop_assert!(value <= bound * (1.0 + 1e-9) + 1e-300);
    }

    #[test]
    fn kp_defect_within_budget(m in 1usize..=4, x in coord(16), y in coord(16)) {
        let (d, b) = quasilinearity_defect(m, &x, &y).unwrap();
        prop_assert!(d <= 4f64.powi(m as i32) * b + 1e-12);
    }

    #[test]
    fn luxemburg_homogeneity_and_residual(j in 0u32..4, x in nonzero_coord(16), lambda in 1e-3..1e3f64) {
        let f = OrliczFunction::new(j);
        let s = luxemburg_solve(f, &x, 1e-12, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(s.residual <= 1e-12);
        let scaled = luxemburg_norm(f, &x.scale(lambda), 1e-12).unwrap();
        prop_assert!(relative_gap(scaled, lambda * s.rho) <= 1e-9);
    }

    #[test]
    fn luxemburg_monotone(j in 0u32..4, x in nonzero_coord(16), bump in coord(16)) {
        let f = OrliczFunction::new(j);
        let abs_x = x.map_nonzero(f64::abs);
        let larger = abs_x.add(&bump.map_nonzero(f64::abs)).unwrap();
        let a = luxemburg_norm(f, &abs_x, 1e-12).unwrap();
        let b = luxemburg_norm(f, &larger, 1e-12).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-9));
    }

    #[test]
    fn l2_is_the_j0_norm(x in nonzero_coord(64)) {
        let r = luxemburg_norm(OrliczFunction::new(0), &x, 1e-13).unwrap();
        prop_assert!(relative_gap(r, x.l2_norm()) <= 1e-9);
    }

    #[test]
    fn domain_norm_homogeneity(n in 2usize..=5, x in coord(16), lambda in -1e3..1e3f64) {
        let d = domain_norm(n, &x).unwrap();
        let dl = domain_norm(n, &x.scale(lambda)).unwrap();
        prop_assert!((dl - lambda.abs() * d).abs() <= 1e-12 * dl.max(1e-300));
    }

    #[test]
    fn commutator_defect_is_scale_invariant(k in 1usize..=4, x in nonzero_coord(16), d in nonzero_coord(16), lambda in prop_oneof![-1e3..-1e-3f64, 1e-3..1e3f64]) {
        let tau = ScaleOperator::multiplier(d);
        let a = commutator_defect(&tau, k, &x).unwrap();
        let b = commutator_defect(&tau, k, &x.scale(lambda)).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn permutation_commutes_with_kp(k in 1usize..=5, x in coord(16), shift in 0u64..16) {
        let tau = ScaleOperator::permutation(Permutation::cyclic(16, shift));
        prop_assert!(commutator_defect(&tau, k, &x).unwrap() <= 1e-12);
    }

    #[test]
    fn block_operator_domain_identity(n in 1usize..=5, len in 1u64..=6, coeffs in coord(6)) {
        let blocks = flat_blocks::<f64>(len, 6).unwrap();
        let t = OperatorMatrix::block_operator(n, &blocks).unwrap();
        let lhs = t.apply(&RochbergVector::bottom(n, coeffs.clone())).unwrap();
        let mut rhs = RochbergVector::zero(n);
        for (v, c) in coeffs.entries() {
            rhs = rhs.add(&graph_vector(n, &blocks[v as usize - 1]).scale(c)).unwrap();
        }
        for (a, b) in lhs.coords().iter().zip(rhs.coords()) {
            let diff = a.sub(b).unwrap();
            prop_assert!(diff.max_abs() <= 1e-12 * (1.0 + b.max_abs()));
        }
    }

    #[test]
    fn block_operator_preserves_pairing(n in 2usize..=4, len in 1u64..=4, x in rochberg(4, 6), y in rochberg(4, 6)) {
        let blocks = flat_blocks::<f64>(len, 6).unwrap();
        let t = OperatorMatrix::block_operator(n, &blocks).unwrap();
        let x = x.project(n).unwrap();
        let y = y.project(n).unwrap();
        let dev = operators::pairing_preservation_check(&t, &[(x, y)]).unwrap();
        prop_assert!(dev <= 1e-9);
    }

    #[test]
    fn finite_and_matrix_agree(n in 1usize..=4, x in rochberg(4, 6), d in coord(6), k in 0usize..=4) {
        let op = OperatorMatrix::shift_power(n, k.min(n))
            .add(&OperatorMatrix::diagonal(n, OperatorAtom::Multiplier(d)))
            .unwrap();
        let x = x.project(n).unwrap();
        let fin = op.to_finite(6, 6).unwrap();
        let a = fin.apply(&x).unwrap();
        let b = op.apply(&x).unwrap();
        for (p, q) in a.coords().iter().zip(b.coords()) {
            prop_assert!(p.sub(q).unwrap().max_abs() <= 1e-12);
        }
    }

    #[test]
    fn adjoint_is_an_anti_morphism(n in 1usize..=3, d1 in coord(5), d2 in coord(5), s1 in 0usize..3, s2 in 0usize..3) {
        let a = OperatorMatrix::shift_power(n, s1.min(n))
            .add(&OperatorMatrix::diagonal(n, OperatorAtom::Multiplier(d1)))
            .unwrap()
            .to_finite(5, 5)
            .unwrap();
        let b = OperatorMatrix::shift_power(n, s2.min(n))
            .add(&OperatorMatrix::diagonal(n, OperatorAtom::Multiplier(d2)))
            .unwrap()
            .to_finite(5, 5)
            .unwrap();
        let ab = a.compose(&b).unwrap();
        let rhs = b.adjoint_plus().compose(&a.adjoint_plus()).unwrap();
        prop_assert!(ab.adjoint_plus().max_abs_diff(&rhs) <= 1e-9);
        prop_assert!(a.adjoint_plus().adjoint_plus().max_abs_diff(&a) <= 1e-12);
    }

    #[test]
    fn corners_commute(n in 2usize..=4, diag in prop::collection::vec(coord(4), 4), s in 0usize..=3) {
        let mut r = OperatorMatrix::shift_power(n, s.min(n));
        for (i, d) in diag.into_iter().take(n).enumerate() {
            let slot = OperatorMatrix::from_fn(n, n, |a, b| {
                if a == i && b == i { OperatorAtom::Multiplier(d.clone()) } else { OperatorAtom::Zero }
            });
            r = r.add(&slot).unwrap();
        }
        for k in 1..n {
            let c = r.corner_extract(k).unwrap();
            let iota = OperatorMatrix::iota(k, n).unwrap();
            let pi = OperatorMatrix::pi(n, n - k).unwrap();
            prop_assert_eq!(r.compose(&iota).unwrap(), iota.compose(&c.leading).unwrap());
            prop_assert_eq!(pi.compose(&r).unwrap(), c.trailing.compose(&pi).unwrap());
        }
    }

    #[test]
    fn gram_cache_is_transparent(n in 1usize..=6, m in 1usize..=8) {
        prop_assert_eq!(&*pairing_gram(n, m), &PairingGram::new(n, m));
        let gram = PairingGram::new(n, m);
        let j = gram.to_dense::<f64>();
        prop_assert!(j.matmul(&gram.inverse_dense()).max_abs_diff(&DenseMatrix::identity(n * m)) <= 1e-12);
    }

    #[test]
    fn coord_vector_round_trips(x in coord(16)) {
        prop_assert_eq!(&x.to_string().parse::<CoordVector<f64>>().unwrap(), &x);
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(&serde_json::from_str::<CoordVector<f64>>(&json).unwrap(), &x);
    }

    #[test]
    fn rochberg_vector_round_trips(x in order_and_vector(4)) {
        prop_assert_eq!(&x.to_string().parse::<RochbergVector<f64>>().unwrap(), &x);
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(&serde_json::from_str::<RochbergVector<f64>>(&json).unwrap(), &x);
    }
}

#[test]
fn shift_powers_compose() {
    for n in 1..=6 {
        for k in 0..=n {
            for l in 0..=n {
                let lhs = OperatorMatrix::<f64>::shift_power(n, k)
                    .compose(&OperatorMatrix::shift_power(n, l))
                    .unwrap();
                assert_eq!(lhs, OperatorMatrix::shift_power(n, (k + l).min(n)));
            }
        }
    }
}

#[test]
fn f32_instantiation() {
    let u = CoordVector::<f32>::from_values(&[0.6, 0.8]).unwrap();
    let q = graph_vector(3, &u).quasinorm().unwrap();
    assert!((q - 1.0).abs() < 1e-6);
    let r = luxemburg_norm(OrliczFunction::new(1), &u, 1e-5f32).unwrap();
    assert!(r > 0.9 && r < 1.1);
}
