use std::collections::BTreeSet;

use nalgebra::DVector;
use num_integer::Integer;
use num_rational::Ratio;
use proptest::prelude::*;

use eqlift_core::certifier::spectral::orbit_average;
use eqlift_core::certifier::{max_coprime_subset, RotationBlocks};
use eqlift_core::complex::{EmbeddedComplex, SimplicialComplex, VertexAction};
use eqlift_core::exact::{determinant, int, Rational};
use eqlift_core::forge::{build_slit_cover, exponent_order, orbit_audit, riemann_hurwitz};
use eqlift_core::group::make_cyclic;
use eqlift_core::lifter::{
    build_block_rep, dense_mul, dense_transpose, determinant_extend, is_identity, stack_embedding,
    verify_equivariance, DEFAULT_DIMENSION_CAP,
};

/// Exhaustive oracle: all subsets of the distinct values, largest pairwise
/// coprime one, ties to the lexicographically smallest ascending sequence.
fn brute_force_coprime(values: &[u64]) -> Vec<u64> {
    let distinct: Vec<u64> = values.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut best: Vec<u64> = Vec::new();
    for mask in 0u32..(1 << distinct.len()) {
        let pick: Vec<u64> = (0..distinct.len()).filter(|i| mask >> i & 1 == 1).map(|i| distinct[i]).collect();
        let ok = pick.iter().enumerate().all(|(i, a)| pick[i + 1..].iter().all(|b| a.gcd(b) == 1));
        if ok && (pick.len() > best.len() || (pick.len() == best.len() && pick < best)) {
            best = pick;
        }
    }
    best
}

fn to_rational(a: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    a.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn coprime_subset_matches_exhaustive_search(values in prop::collection::vec(2u64..=100, 0..16)) {
        let distinct: BTreeSet<u64> = values.iter().copied().collect();
        prop_assume!(distinct.len() <= 12);
        let p = max_coprime_subset(&values).unwrap();
        prop_assert_eq!(&p.chosen, &brute_force_coprime(&values));
        prop_assert_eq!(p.bound, 2 * p.l);
    }

    #[test]
    fn block_representation_is_a_homomorphism_into_orthogonal_matrices(n in 1usize..=12, d in 1usize..=3) {
        let g = make_cyclic(n).unwrap();
        let rep = build_block_rep(&g, d).unwrap().extended();
        for a in g.elements() {
            let ma = rep.dense(a);
            prop_assert!(is_identity(&dense_mul(&ma, &dense_transpose(&ma))));
            prop_assert_eq!(rep.det(a), 1);
            for b in g.elements() {
                prop_assert_eq!(dense_mul(&ma, &rep.dense(b)), rep.dense(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn structural_determinant_matches_elimination(n in 1usize..=16, d in 1usize..=3) {
        prop_assume!(d * n <= 48);
        let g = make_cyclic(n).unwrap();
        let rep = build_block_rep(&g, d).unwrap();
        let ext = rep.clone().extended();
        for a in g.elements() {
            prop_assert_eq!(determinant(&to_rational(&rep.dense(a))), int(rep.block_det(a) as i64));
            prop_assert_eq!(ext.detcol(a), Some(rep.block_det(a)));
            prop_assert_eq!(determinant(&to_rational(&ext.dense(a))), int(1));
        }
    }

    #[test]
    fn orbit_mean_is_fixed_and_deviation_sums_to_zero(
        dens in prop::collection::vec(2i64..=9, 1..4),
        nums in prop::collection::vec(1i64..=8, 4),
        x in prop::collection::vec(-5.0f64..5.0, 8),
    ) {
        let angles: Vec<Ratio<i64>> = dens.iter().zip(&nums).map(|(&den, &num)| Ratio::new(num % (den - 1) + 1, den)).collect();
        let blocks = RotationBlocks { angles, fixed: 1 };
        let m = blocks.dim();
        let a = blocks.to_dense();
        let w = blocks.angles.iter().fold(1i64, |acc, r| acc.lcm(r.denom())) as usize;
        let x = DVector::from_column_slice(&x[..m]);
        let avg = orbit_average(&a, &x, w, 1e-9).unwrap();
        prop_assert!(avg.fixed_residual < 1e-9);
        prop_assert!(avg.sum_residual < 1e-9);
        // only the fixed axis survives averaging
        prop_assert!((avg.mean[m - 1] - x[m - 1]).abs() < 1e-12);
        prop_assert!(avg.mean.rows(0, m - 1).norm() < 1e-9);
    }

    #[test]
    fn random_slit_covers_satisfy_riemann_hurwitz(
        order in 2u64..=12,
        raw in prop::collection::vec(1u64..12, 1..5),
    ) {
        // close the sum to zero mod P; keep every exponent nonzero
        let mut shifts: Vec<u64> = raw.iter().map(|a| a % order).filter(|&a| a != 0).collect();
        let rest = (order - shifts.iter().sum::<u64>() % order) % order;
        prop_assume!(rest != 0);
        shifts.push(rest);
        prop_assume!(shifts.len() >= 2);
        prop_assume!(shifts.iter().fold(order, |g, a| g.gcd(a)) == 1);

        let s = build_slit_cover(order, &shifts).unwrap();
        let indices: Vec<u64> = shifts.iter().map(|&a| exponent_order(a, order)).collect();
        let rh = riemann_hurwitz(order, &indices).unwrap();
        prop_assert_eq!(s.complex.euler_characteristic(), rh.chi);
        prop_assert!(rh.chi <= 2 && rh.chi % 2 == 0);
        prop_assert!(s.complex.orient().is_some());
        let audit = orbit_audit(&s);
        prop_assert!(audit.cone_fibers.iter().all(|c| c.result.passed));
        prop_assert!(audit.free_elsewhere.passed);
    }

    #[test]
    fn stacked_lifts_are_equivariant(n in 1usize..=6, k in 1usize..=3, seed in 0i64..1000) {
        // Z_n permuting n copies of k vertices, with edges between copies
        let v = n * k;
        let coords: Vec<Vec<Rational>> = (0..v)
            .map(|i| vec![int(i as i64), Rational::new(((i as i64 * 7 + seed) % 11).into(), 3.into())])
            .collect();
        let mut edges = Vec::new();
        for c in 0..n {
            for j in 0..k.saturating_sub(1) {
                edges.push([c * k + j, c * k + j + 1]);
            }
            if n > 1 {
                edges.push([c * k, ((c + 1) % n) * k]);
            }
        }
        edges.iter_mut().for_each(|e| e.sort_unstable());
        let complex = SimplicialComplex::new(v, &edges, &[]).unwrap();
        let e = EmbeddedComplex::new(complex, 2, coords).unwrap();
        let perms = (0..n)
            .map(|s| (0..v).map(|x| ((x / k + s) % n) * k + x % k).collect())
            .collect();
        let a = VertexAction::new(make_cyclic(n).unwrap(), perms).unwrap();
        let le = determinant_extend(stack_embedding(&e, &a, DEFAULT_DIMENSION_CAP).unwrap());
        prop_assert!(verify_equivariance(&le, &a).passed());
        prop_assert!(le.rep().group().elements().all(|g| le.rep().det(g) == 1));
        let expected = 2 * n + usize::from(le.rep().is_extended());
        prop_assert_eq!(le.dim(), expected);
    }
}
