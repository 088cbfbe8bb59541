use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qtoda_core::algebra::{parse_poly, RatFunc};
use qtoda_core::conservation::*;
use qtoda_core::flag::{fixed_points, inverse_lambda_sum, relabel_lambda, weyl_character};
use qtoda_core::hyperquot::*;
use qtoda_core::localization::*;
use qtoda_core::operator::*;
use qtoda_core::qgroup::*;
use qtoda_core::series::*;

fn dv(v: &[u32]) -> DegreeVector {
    DegreeVector::new(v.to_vec())
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

// ---- quasimap projective spaces

#[test]
fn quasimap_weight_lists() {
    assert_eq!(quasimap_weights(1, 0).unwrap().len(), 2);
    assert_eq!(quasimap_weights(1, 1).unwrap().len(), 4);
    assert_eq!(quasimap_weights(2, 1).unwrap().len(), 6);
    assert_eq!(quasimap_weights(3, 2).unwrap().len(), 12);
}

#[test]
fn projective_space_characters() {
    for r in 1..=2 {
        for d in 0..=3 {
            let w = quasimap_weights(r, d).unwrap();
            assert!(chi_projective(&w, 0).unwrap().is_one());
            for z in 0..=3 {
                let h = symmetric_h_oracle(&w, z).unwrap();
                assert_eq!(chi_projective(&w, -z).unwrap().as_poly().unwrap(), &h);
            }
        }
    }
    // 1 <= z <= N-1 is the vanishing range
    let w = quasimap_weights(2, 1).unwrap();
    for z in 1..=5 {
        assert!(chi_projective(&w, z).unwrap().is_zero());
    }
    assert!(!chi_projective(&w, 6).unwrap().is_zero());
}

#[test]
fn repeated_weights_are_rejected() {
    let m = qtoda_core::algebra::Monomial::q(1);
    assert!(WeightedProjectiveData::new(vec![m.clone(), m]).is_err());
    assert!(symmetric_h_oracle(&quasimap_weights(1, 0).unwrap(), -1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // Serre duality on P^{N-1}, with the dual weights on the other side
    #[test]
    fn serre_duality_on_quasimap_spaces(r in 1usize..=2, d in 0u32..=2, z in -3i32..=3) {
        let w = quasimap_weights(r, d).unwrap();
        let n = w.len() as i32;
        let dual = WeightedProjectiveData::new(w.weights().iter().map(|x| x.inv()).collect()).unwrap();
        let top = w.weights().iter().fold(qtoda_core::algebra::Monomial::one(), |a, x| a.mul(x));
        let lhs = chi_projective(&w, z).unwrap();
        let rhs = chi_projective(&dual, n - z).unwrap().mul_monomial(&top.inv());
        let sign = if n % 2 == 0 { -1 } else { 1 };
        prop_assert_eq!(lhs, rhs.scale(&int(sign)));
    }
}

#[test]
fn generating_function_rank_one() {
    for z in 0..=2 {
        let g = genfun_G(1, &[z], 3).unwrap();
        for d in 0..=3 {
            let geo = chi_projective(&quasimap_weights(1, d).unwrap(), z).unwrap();
            assert_eq!(g[&dv(&[d])], geo, "d={d} z={z}");
        }
    }
    // degree one at twist -1: (1+q^-1)(Λ_0+Λ_1)
    let g = genfun_G(1, &[-1], 1).unwrap();
    assert_eq!(
        g[&dv(&[1])].as_poly().unwrap(),
        &parse_poly("(1 + q^-1)*(Λ1 + Λ1^-1)").unwrap()
    );
}

#[test]
fn generating_function_is_a_character() {
    for z in [[0, 0], [1, 0], [0, 2], [2, 1], [-1, -1]] {
        let g = genfun_G(2, &z, 2).unwrap();
        for (d, v) in &g {
            assert!(v.is_laurent_polynomial(), "z={z:?} d={:?}", d.entries());
            if z == [0, 0] {
                for pi in fixed_points(2).unwrap() {
                    assert_eq!(&relabel_lambda(&pi, v), v);
                }
            }
        }
        assert_eq!(
            g[&DegreeVector::zero(2)],
            qtoda_core::localization::chi_line_bundle(2, &z).unwrap()
        );
    }
}

#[test]
fn residue_matches_generating_function() {
    for z in [[0, 0], [1, 0], [1, 1], [-1, -1], [-2, 1]] {
        let g = genfun_G(2, &z, 2).unwrap();
        for (d, v) in &g {
            assert_eq!(&residue_G_r2(&z, d).unwrap(), v, "z={z:?} d={:?}", d.entries());
        }
    }
    assert!(residue_G_r2(&[0, 0], &DegreeVector::zero(2)).unwrap().is_one());
    assert_eq!(
        residue_G_r2(&[-1, 0], &DegreeVector::zero(2)).unwrap().as_poly().unwrap(),
        &weyl_character(2, &[1, 0]).unwrap()
    );
}

#[test]
fn residue_numerator_from_one_disagrees() {
    let z = [-1, -1];
    let d = dv(&[1, 0]);
    let g = genfun_G(2, &z, 1).unwrap();
    assert_ne!(residue_G_r2_with_start(&z, &d, 1).unwrap(), g[&d]);
}

// ---- hyperquot

#[test]
fn census_counts() {
    for d in 0..=8 {
        assert_eq!(enumerate_hq_fixed_points(1, &dv(&[d])).unwrap().len(), 2 * (d as usize + 1));
    }
    for d in degrees_up_to(2, 3) {
        let a = enumerate_hq_fixed_points(2, &d).unwrap();
        assert_eq!(a, brute_force_hq_fixed_points(2, &d).unwrap());
        assert!(a.iter().all(|p| satisfies_constraints(2, &d, &p.delta_plus, &p.delta_minus)));
    }
    // one fixed point per flag fixed point when d = 0
    assert_eq!(enumerate_hq_fixed_points(3, &dv(&[0, 0, 0])).unwrap().len(), 24);
}

#[test]
fn canonical_class_examples() {
    assert_eq!(k_d(&dv(&[1])), 2);
    assert_eq!(k_d(&dv(&[2])), 6);
    assert_eq!(k_d(&dv(&[1, 1])), 3);
    assert_eq!(canonical_exponents(&dv(&[1])), CanonicalClassData { k_d: 2, p_exponents: vec![4] });
    assert_eq!(canonical_exponents(&dv(&[0, 0])).p_exponents, vec![2, 2]);
    assert_eq!(canonical_exponents(&dv(&[1, 1])).p_exponents, vec![3, 3]);
    for r in 1..=4 {
        for d in degrees_up_to(r, 6) {
            let sq: i64 = (1..=r + 1).map(|i| (d.get(i) - d.get(i - 1)).pow(2)).sum();
            assert_eq!(sq % 2, 0);
        }
    }
}

#[test]
fn pole_gap_bounds() {
    let rep = verify_pole_gap(&solve_jseries(1, 6).unwrap()).unwrap();
    assert!(rep.passed() && rep.sharp());
    let rep = verify_pole_gap(&solve_jseries(2, 3).unwrap()).unwrap();
    assert!(rep.passed());
    assert!(rep.rows.iter().any(|r| r.margin() == 0));
}

// ---- q-binomials

#[test]
fn gaussian_binomial_properties() {
    for m in 0..=10u32 {
        for k in 0..=m {
            let b = q_binomial(m, k).unwrap();
            assert_eq!(b, q_binomial(m, m - k).unwrap());
            let p = b.as_poly().unwrap();
            assert_eq!(&q_binomial_pascal(m, k), p);
            assert_eq!(&q_binomial_pascal_dual(m, k), p);
            let at_one = b.evaluate(&[Some(int(1))]).unwrap().constant_value().unwrap();
            let ordinary = (1..=k as i64).fold(int(1), |acc, i| acc * int(m as i64 - k as i64 + i) / int(i));
            assert_eq!(at_one, ordinary);
        }
    }
    assert_eq!(
        q_binomial(4, 2).unwrap().as_poly().unwrap(),
        &parse_poly("1 + q + 2*q^2 + q^3 + q^4").unwrap()
    );
}

#[test]
fn finite_binomial_theorem() {
    for m in 0..=8 {
        assert!(verify_qbinom_identity(m).unwrap());
    }
    let (l, r) = qbinom_sides(2, 1).unwrap();
    assert_eq!(l, r);
    assert_eq!(l[1], parse_poly("-1 - q").unwrap());
}

#[test]
fn serre_relations_admit_characters() {
    for rank in 1..=5 {
        for cd in CartanData::all_type_a(rank).unwrap() {
            for i in 0..rank {
                for j in 0..rank {
                    if i != j {
                        for sign in [1, -1] {
                            assert!(serre_scalar_check(&cd, i, j, sign).unwrap());
                        }
                    }
                }
            }
        }
    }
}

// ---- operators and conservation laws

#[test]
fn toda_operator_terms() {
    let h = build_toda_operator(1).unwrap();
    assert_eq!(h.shifts().cloned().collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0]]);
    assert!(h.coefficient(&[1, 0], &[0]).is_one());
    assert!(h.coefficient(&[0, 1], &[0]).is_one());
    let h2 = build_toda_operator(2).unwrap();
    assert_eq!(h2.shifts().count(), 3);
    // symbol mod Q: r+1 bare translations
    let bare = h2.monomials().filter(|(_, a, _)| a.iter().all(|&x| x == 0)).count();
    assert_eq!(bare, 3);
    let hh = compose(&h2, &h2).unwrap();
    for m in hh.shifts() {
        assert_eq!(m.iter().sum::<i32>(), 2);
    }
}

#[test]
fn composition_rules() {
    let t0 = DifferenceOperator::translation(1, vec![1, 0]);
    let q1 = DifferenceOperator::q_multiplication(1, vec![1]);
    assert_eq!(
        compose(&t0, &q1).unwrap(),
        DifferenceOperator::monomial(1, vec![1, 0], vec![1], RatFunc::q_pow(1))
    );
    let h = build_toda_operator(3).unwrap();
    let id = DifferenceOperator::identity(3);
    assert_eq!(compose(&h, &id).unwrap(), h);
    assert!(compose(&h, &DifferenceOperator::identity(2)).is_err());
    assert!(commutator(&h, &total_translation(3)).unwrap().is_zero());
}

#[test]
fn eigenfunction_checks() {
    for (r, d) in [(1, 4), (2, 3)] {
        let s = solve_jseries(r, d).unwrap();
        assert!(check_eigen(&s).unwrap().passed());
        let v = verify_common_eigen(&build_toda_operator(r).unwrap(), &s).unwrap();
        assert_eq!(v.eigenvalue(), Some(&RatFunc::from_poly(inverse_lambda_sum(r))));
        assert!(verify_common_eigen(&total_translation(r), &s).unwrap().eigenvalue().unwrap().is_one());
    }
}

#[test]
fn operator_truncation_budget() {
    let s = solve_jseries(2, 2).unwrap();
    let h = build_toda_operator(2).unwrap();
    assert_eq!(apply_operator(&h, &s).unwrap().truncation(), 1);
    let big = DifferenceOperator::q_multiplication(2, vec![2, 1]);
    assert!(apply_operator(&big, &s).is_err());
}

#[test]
fn rank_one_commutant() {
    let a = OperatorAnsatz::new(1, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], 1);
    let c = commutant_search(&a).unwrap();
    assert!(c.contains(&DifferenceOperator::identity(1)));
    assert!(c.contains(&build_toda_operator(1).unwrap()));
    assert!(c.contains(&total_translation(1)));
    assert_eq!(c.dimension(), 3);
}

#[test]
fn rank_two_commutant() {
    let c = commutant_search(&OperatorAnsatz::binary(2, 1)).unwrap();
    assert_eq!(c.dimension(), 4);
    assert!(c.contains(&DifferenceOperator::identity(2)));
    assert!(c.contains(&build_toda_operator(2).unwrap()));
    assert!(c.contains(&total_translation(2)));
    for x in &c.operators {
        for y in &c.operators {
            assert!(commutator(x, y).unwrap().is_zero());
        }
    }
    let s = solve_jseries(2, 3).unwrap();
    for op in &c.operators {
        let v = verify_common_eigen(op, &s).unwrap();
        let lam = v.eigenvalue().expect("eigenfunction");
        // read off at d = 0, so constant in Q; it also turns out free of q
        assert!(lam.is_laurent_polynomial());
        assert!(!lam.uses_var(0));
    }
}
