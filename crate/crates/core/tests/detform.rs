use minmod::detform::{
    c64, connected_from_kernel, cycles, kernel_k0, kernel_k0_direct, nonconnected_detprime, partition_sum,
    permutations, set_partitions, w2_differential_identity, w2_leading, x_of, KernelMatrix,
};
use minmod::exact::{q, qf, Field, Gauss, Q};
use num_traits::Signed;
use proptest::prelude::*;

fn g(n: i64) -> Gauss {
    Gauss::from_i64(n)
}

fn gq(v: Q) -> Gauss {
    Gauss::real(v)
}

#[test]
fn w2_examples() {
    let w = w2_leading(&g(2), &g(3), &g(1)).unwrap();
    assert_eq!(w.z_form, gq(qf(6, 25)));
    assert_eq!(w.x_form, w.z_form);
    let a = w2_leading(&gq(qf(1, 3)), &gq(qf(-5, 2)), &gq(qf(3, 7))).unwrap();
    let b = w2_leading(&gq(qf(-5, 2)), &gq(qf(1, 3)), &gq(qf(3, 7))).unwrap();
    assert_eq!(a, b);
    assert!(w2_differential_identity(&qf(5, 2), &q(1)));
    assert!(w2_differential_identity(&qf(-4, 3), &qf(3, 7)));
    assert!(w2_leading(&g(1), &g(3), &g(1)).is_err());
    assert!(w2_leading(&g(2), &gq(qf(1, 2)), &g(1)).is_err());
}

#[test]
fn k0_examples() {
    let u0 = g(1);
    let k12 = kernel_k0(&g(2), &g(3), &u0).unwrap();
    let k21 = kernel_k0(&g(3), &g(2), &u0).unwrap();
    assert_eq!(k12.square(), k21.square());
    let (a, b) = (k12.to_complex(), k21.to_complex());
    assert!((a + b).norm() <= 1e-12 * a.norm());
    let direct = kernel_k0_direct(c64(&x_of(&g(2), &u0)), c64(&x_of(&g(3), &u0)), c64(&u0));
    assert!(direct.iter().any(|d| (d - a).norm() <= 1e-12 * a.norm()));
    assert!(kernel_k0(&g(2), &gq(qf(1, 2)), &u0).is_err());
}

#[test]
fn k0_residue_on_diagonal() {
    let u0 = gq(qf(3, 2));
    let z1 = gq(qf(5, 2));
    let x1 = x_of(&z1, &u0);
    let mut last = Q::from_integer(1000.into());
    for k in 2..8 {
        let z2 = z1.clone() + gq(Q::new(1.into(), 10i64.pow(k).into()));
        let dx = x1.clone() - x_of(&z2, &u0);
        let sq = kernel_k0(&z1, &z2, &u0).unwrap().square() * dx.clone() * dx;
        assert!(sq.im.is_zero());
        let err = (sq.re - q(1)).abs();
        assert!(err < last);
        last = err;
    }
    assert!(last < qf(1, 1_000_000));
}

fn all_ones(n: usize) -> KernelMatrix<Q> {
    let pts: Vec<Q> = (1..=n as i64).map(q).collect();
    let off = vec![vec![q(1); n]; n];
    KernelMatrix::from_kernel(pts, off, vec![q(1); n]).unwrap()
}

#[test]
fn connected_examples() {
    let km = all_ones(3);
    assert_eq!(connected_from_kernel(&km, &[0, 1, 2]).unwrap(), q(2));
    assert_eq!(connected_from_kernel(&km, &[1]).unwrap(), q(1));
    let pts = vec![qf(1, 2), q(3)];
    let off = vec![vec![q(0), qf(2, 3)], vec![q(-5), q(0)]];
    let km = KernelMatrix::from_kernel(pts, off, vec![q(7), qf(1, 4)]).unwrap();
    let d = qf(1, 2) - q(3);
    let w2 = -(q(1) / (d.clone() * d)) - qf(2, 3) * q(-5);
    assert_eq!(connected_from_kernel(&km, &[0, 1]).unwrap(), w2);
    assert_eq!(nonconnected_detprime(&km).unwrap(), q(7) * qf(1, 4) + w2);
    assert_eq!(nonconnected_detprime(&all_ones(1)).unwrap(), q(1));
}

#[test]
fn combinatorics() {
    assert_eq!(permutations(4).len(), 24);
    assert_eq!(set_partitions(4).len(), 15);
    assert_eq!(cycles(&[1, 2, 0, 3]).len(), 2);
}

#[test]
fn shape_validation() {
    let bad = KernelMatrix::new(vec![q(1), q(2)], vec![vec![q(0); 2]; 2], vec![q(1)], vec![vec![q(0); 2]; 2]);
    assert!(bad.is_err());
    let asym = vec![vec![q(0), q(1)], vec![q(2), q(0)]];
    assert!(KernelMatrix::new(vec![q(1), q(2)], asym.clone(), vec![q(1); 2], asym).is_err());
    assert!(KernelMatrix::from_kernel(vec![q(1), q(1)], vec![vec![q(0); 2]; 2], vec![q(1); 2]).is_err());
}

fn rat() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| qf(n, d))
}

fn kernel() -> impl Strategy<Value = KernelMatrix<Q>> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (
                prop::collection::btree_set(-20i64..=20, n),
                prop::collection::vec(prop::collection::vec(rat(), n), n),
                prop::collection::vec(rat(), n),
            )
        })
        .prop_map(|(pts, mut off, diag)| {
            for (i, row) in off.iter_mut().enumerate() {
                row[i] = q(0);
            }
            KernelMatrix::from_kernel(pts.into_iter().map(|p| qf(p, 3)).collect(), off, diag).unwrap()
        })
}

fn relabel(km: &KernelMatrix<Q>, perm: &[usize]) -> KernelMatrix<Q> {
    let pick = |m: &Vec<Vec<Q>>| perm.iter().map(|&i| perm.iter().map(|&j| m[i][j].clone()).collect()).collect();
    KernelMatrix::new(
        perm.iter().map(|&i| km.points[i].clone()).collect(),
        pick(&km.offdiag),
        perm.iter().map(|&i| km.diag[i].clone()).collect(),
        pick(&km.pairprod),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moment_cumulant_duality(km in kernel()) {
        prop_assert_eq!(nonconnected_detprime(&km).unwrap(), partition_sum(&km).unwrap());
    }

    #[test]
    fn relabeling_invariance(km in kernel(), seed in 0usize..24) {
        let n = km.len();
        let perms = permutations(n);
        let perm = &perms[seed % perms.len()];
        let all: Vec<usize> = (0..n).collect();
        let moved = relabel(&km, perm);
        prop_assert_eq!(connected_from_kernel(&km, &all).unwrap(), connected_from_kernel(&moved, &all).unwrap());
        prop_assert_eq!(nonconnected_detprime(&km).unwrap(), nonconnected_detprime(&moved).unwrap());
    }

    #[test]
    fn w2_forms_agree(a in rat(), b in rat(), c in rat(), d in rat(), u in 1i64..=9) {
        let (z1, z2) = (Gauss::new(a, b), Gauss::new(c, d));
        let bad = |z: &Gauss| z.is_zero() || *z == g(1) || *z == g(-1);
        prop_assume!(!bad(&z1) && !bad(&z2) && z1 != z2);
        prop_assume!(!(z1.clone() * z2.clone() - g(1)).is_zero());
        prop_assume!(x_of(&z1, &g(u)) != x_of(&z2, &g(u)));
        let w = w2_leading(&z1, &z2, &g(u)).unwrap();
        prop_assert_eq!(w.x_form, w.z_form);
    }
}
