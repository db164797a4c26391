mod common;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qperm::exactla::{int, is_positive_definite, ratio, BigRational};
use qperm::laws::*;
use qperm::partitions::PartitionKind;
use qperm::Error;

fn param(p: i64, q: i64) -> LawParameter {
    LawParameter::new(ratio(p, q)).unwrap()
}

#[test]
fn unit_parameter_gives_catalan_and_bell() {
    let cat = common::catalan_table(8);
    let bell = common::bell_table(8);
    let one = param(1, 1);
    for k in 1..=8 {
        assert_eq!(free_poisson_moment(k, &one).unwrap(), int(cat[k] as i64));
        assert_eq!(poisson_moment(k, &one).unwrap(), int(bell[k] as i64));
    }
}

/// Stirling numbers of the second kind by S(k, j) = j S(k−1, j) + S(k−1, j−1).
fn stirling2(k: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..k {
        let mut next = vec![0u64; row.len() + 1];
        for (j, &v) in row.iter().enumerate() {
            next[j] += v * j as u64;
            next[j + 1] += v;
        }
        row = next;
    }
    row
}

#[test]
fn histograms_are_narayana_and_stirling() {
    for k in 1..=7usize {
        let nc = block_count_histogram(k, PartitionKind::NonCrossing).unwrap();
        let all = block_count_histogram(k, PartitionKind::All).unwrap();
        let st = stirling2(k);
        for (j, &stirling) in st.iter().enumerate() {
            let h = nc.get(j).copied().unwrap_or(0);
            assert_eq!(BigInt::from(h), narayana(k as u64, j as u64), "k={k} j={j}");
            assert_eq!(all.get(j).copied().unwrap_or(0), stirling, "k={k} j={j}");
        }
    }
}

#[test]
fn cumulants_are_constant_and_additive() {
    for (p, q) in [(1, 3), (1, 2), (1, 1), (5, 2)] {
        let t = param(p, q);
        let free = cumulants_from_moments(&free_poisson_moments(7, &t).unwrap(), PartitionKind::NonCrossing).unwrap();
        let classical = cumulants_from_moments(&poisson_moments(7, &t).unwrap(), PartitionKind::All).unwrap();
        assert!(free.iter().all(|c| c == t.value()));
        assert!(classical.iter().all(|c| c == t.value()));
    }
    for kind in [PartitionKind::NonCrossing, PartitionKind::All] {
        let report = semigroup_check(&param(1, 3), &param(3, 4), 7, kind).unwrap();
        assert_eq!(report.rows.len(), 7);
        assert!(report.holds());
    }
}

#[test]
fn bell_moments_have_free_cumulants_one_one_one_two() {
    let bell = MomentSequence::new((1..=4).map(|k| int(common::bell_table(4)[k] as i64)).collect());
    let kappa = cumulants_from_moments(&bell, PartitionKind::NonCrossing).unwrap();
    assert_eq!(kappa, vec![int(1), int(1), int(1), int(2)]);
}

#[test]
fn hankel_matrices_are_positive_definite() {
    for (p, q) in [(1, 4), (1, 2), (1, 1), (2, 1)] {
        let t = param(p, q);
        for seq in [poisson_moments(6, &t).unwrap(), free_poisson_moments(6, &t).unwrap()] {
            for size in 1..=3 {
                let h = seq.hankel(size).unwrap();
                // A free Poisson law with t < 1 has an atom and a continuous
                // part, so it has infinite support and all sizes are definite.
                assert!(is_positive_definite(&h).unwrap(), "t={p}/{q} size={size}");
            }
        }
    }
    assert!(poisson_moments(3, &param(1, 1)).unwrap().hankel(3).is_err());
}

#[test]
fn density_moments_agree_with_exact_values() {
    for (p, q) in [(1, 2), (1, 1), (2, 1)] {
        let t = param(p, q);
        let tf = p as f64 / q as f64;
        assert!((mp_density_moment(0, tf, 1e-9).unwrap() - 1.0).abs() < 1e-6);
        for k in 1..=6 {
            let exact = free_poisson_moment(k, &t).unwrap();
            let exact = exact.numer().to_string().parse::<f64>().unwrap()
                / exact.denom().to_string().parse::<f64>().unwrap();
            let approx = mp_density_moment(k as u32, tf, 1e-9).unwrap();
            assert!((approx - exact).abs() < 1e-6, "k={k} t={tf}: {approx} vs {exact}");
        }
    }
    assert!(matches!(mp_density_moment(2, -1.0, 1e-9), Err(Error::InvalidArgument(_))));
}

#[test]
fn convergence_errors_shrink_like_one_over_n() {
    let ns = [8u64, 16, 32, 64];
    for side in [Side::Free, Side::Classical] {
        for (p, q) in [(1, 4), (1, 2)] {
            let report = convergence_report(4, &param(p, q), &ns, side).unwrap();
            for k in 2..=4 {
                let rows: Vec<_> = report.order(k).collect();
                assert!(rows.last().unwrap().error < rows[0].error, "{side:?} k={k}");
                let band: Vec<&BigRational> = rows.iter().map(|r| &r.error_times_n).collect();
                let max = band.iter().max().unwrap();
                let min = band.iter().min().unwrap();
                assert!(*max <= &(*min * int(4)), "{side:?} t={p}/{q} k={k}");
            }
        }
    }
    let exact = convergence_report(5, &param(1, 1), &ns, Side::Free).unwrap();
    assert!(exact.rows.iter().all(|r| r.error.is_zero()));
}

#[test]
fn convergence_report_serialises() {
    let report = convergence_report(2, &param(1, 2), &[8, 10], Side::Classical).unwrap();
    assert_eq!(report.rows.iter().map(|r| r.s).collect::<Vec<_>>(), vec![4, 4, 5, 5]);
    let csv = report.to_csv().unwrap();
    assert!(csv.starts_with("n,s,k,moment,target,error,error_times_n\n"));
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(report.to_json()["rows"].as_array().unwrap().len(), 4);
    assert!(matches!(convergence_report(2, &param(3, 2), &[8], Side::Free), Err(Error::Domain(_))));
    assert!(matches!(convergence_report(2, &param(1, 20), &[8], Side::Free), Err(Error::Domain(_))));
}

#[test]
fn truncation_rounds_halves_up() {
    assert_eq!(truncation_for(&ratio(1, 2), 9), 5);
    assert_eq!(truncation_for(&ratio(1, 4), 10), 3);
    assert_eq!(truncation_for(&ratio(1, 3), 10), 3);
    assert!(LawParameter::new(BigRational::zero()).is_err());
    assert_eq!(param(1, 4).atom_at_zero(), ratio(3, 4));
    assert!(param(2, 1).atom_at_zero().is_zero());
    assert_eq!(MomentSequence::new(vec![]).get(0), Some(BigRational::one()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cumulant_transforms_are_inverse(
        raw in prop::collection::vec((-9i64..10, 1i64..6), 1..=7),
        free in any::<bool>(),
    ) {
        let kind = if free { PartitionKind::NonCrossing } else { PartitionKind::All };
        let kappa: Vec<BigRational> = raw.iter().map(|&(p, q)| ratio(p, q)).collect();
        let m = moments_from_cumulants(&kappa, kind).unwrap();
        prop_assert_eq!(m.order(), kappa.len());
        prop_assert_eq!(cumulants_from_moments(&m, kind).unwrap(), kappa);
    }

    #[test]
    fn moments_are_polynomials_in_t(p in 1i64..20, q in 1i64..20, k in 1usize..=6) {
        let t = param(p, q);
        let tv = t.value().clone();
        let hist = block_count_histogram(k, PartitionKind::NonCrossing).unwrap();
        let expect = hist.iter().enumerate().fold(BigRational::zero(), |acc, (j, &c)| {
            acc + int(c as i64) * num_traits::pow(tv.clone(), j)
        });
        prop_assert_eq!(free_poisson_moment(k, &t).unwrap(), expect);
    }
}
