use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use pseudochiral::{
    build_dimer, decompose, dimer_pseudochiral, evolve, expectation_t, uniform_times, Convention,
    DimerSpec64, Operator64, Propagator, Role, C64,
};

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix(dim: usize) -> impl Strategy<Value = DMatrix<C64>> {
    proptest::collection::vec(complex(), dim * dim)
        .prop_map(move |v| DMatrix::from_vec(dim, dim, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_is_biorthonormal(m in matrix(5)) {
        let h = Operator64::new(m, Role::Hamiltonian).unwrap();
        let dec = decompose(&h).unwrap();
        prop_assume!(!dec.has_ep());
        let gram = dec.left_vectors().transpose() * dec.right_vectors();
        let defect = (gram - DMatrix::identity(5, 5)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(defect < 1e-6, "defect {}", defect);
        for mu in 0..5 {
            let r = dec.right(mu);
            let res = (h.matrix() * &r - &r * dec.eigenvalue(mu)).norm();
            prop_assert!(res < 1e-8 * dec.hamiltonian_norm().max(1.0));
        }
    }

    #[test]
    fn spectrum_is_permutation_invariant(m in matrix(4), shift in 1usize..4) {
        let perm: Vec<usize> = (0..4).map(|i| (i + shift) % 4).collect();
        let pm = DMatrix::from_fn(4, 4, |i, j| m[(perm[i], perm[j])]);
        let a = decompose(&Operator64::new(m, Role::Hamiltonian).unwrap()).unwrap();
        let b = decompose(&Operator64::new(pm, Role::Hamiltonian).unwrap()).unwrap();
        let mut used = [false; 4];
        for w in a.eigenvalues() {
            let (k, d) = b.eigenvalues().iter().enumerate().filter(|(k, _)| !used[*k])
                .map(|(k, v)| (k, (v - w).norm())).min_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
            used[k] = true;
            prop_assert!(d < 1e-6 * a.hamiltonian_norm().max(1.0), "eigenvalue moved by {}", d);
        }
    }

    #[test]
    fn antisymmetric_pairing_vanishes(b in [complex(), complex(), complex()], p in [complex(), complex()], t in 0.1..10.0f64) {
        let h = build_dimer(&DimerSpec64::new(b[0], b[1], b[2])).unwrap();
        let psi0 = DVector::from_vec(p.to_vec());
        let traj = evolve(&h, &psi0, &uniform_times(t, 20), Propagator::MatrixExponential).unwrap();
        let sy = dimer_pseudochiral::<f64>();
        for (psi, power) in traj.states().iter().zip(traj.power_series()) {
            let v = expectation_t(psi, sy.matrix()).unwrap();
            prop_assert!(v.norm() <= 1e-12 * power.max(1e-300));
        }
        let s = traj.expectation_series("sigma2", sy.matrix(), Convention::Transpose).unwrap();
        prop_assert!(s.drift() <= 1e-12 * traj.power_series().into_iter().fold(1.0, f64::max));
    }
}
