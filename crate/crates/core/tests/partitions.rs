use num_rational::Rational64;
use proptest::prelude::*;
use qperm::partitions::{enumerate, Partition, PartitionKind};

/// Catalan numbers by the convolution recurrence C_{m+1} = Σ C_i C_{m-i}.
fn catalan_table(max: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for m in 0..max {
        c.push((0..=m).map(|i| c[i] * c[m - i]).sum());
    }
    c
}

/// Bell numbers via the Bell triangle.
fn bell_table(max: usize) -> Vec<u64> {
    let mut bells = vec![1u64];
    let mut row = vec![1u64];
    for _ in 0..max {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        bells.push(next[0]);
        row = next;
    }
    bells
}

fn crossing_brute_force(p: &Partition) -> bool {
    let l = p.labels();
    let k = l.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    if l[a] == l[c] && l[b] == l[d] && l[a] != l[b] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[test]
fn family_sizes_match_independent_recurrences() {
    let cat = catalan_table(8);
    let bell = bell_table(8);
    for k in 1..=8 {
        assert_eq!(enumerate(k, PartitionKind::NonCrossing).unwrap().len() as u64, cat[k]);
        assert_eq!(enumerate(k, PartitionKind::All).unwrap().len() as u64, bell[k]);
    }
}

#[test]
fn noncrossing_family_is_filtered_all_family() {
    for k in 1..=8 {
        let all = enumerate(k, PartitionKind::All).unwrap();
        let filtered: Vec<Partition> = all
            .iter()
            .filter(|p| !crossing_brute_force(p))
            .cloned()
            .collect();
        let nc = enumerate(k, PartitionKind::NonCrossing).unwrap();
        assert_eq!(nc.members(), filtered.as_slice(), "k = {k}");
    }
}

#[test]
fn is_noncrossing_agrees_with_quadruple_scan() {
    for k in 1..=7 {
        for p in &enumerate(k, PartitionKind::All).unwrap() {
            assert_eq!(p.is_noncrossing(), !crossing_brute_force(p), "{p}");
        }
    }
    let four = enumerate(4, PartitionKind::All).unwrap();
    assert_eq!(four.iter().filter(|p| p.is_noncrossing()).count(), 14);
}

#[test]
fn order_is_strictly_lexicographic_and_indexed() {
    for kind in [PartitionKind::NonCrossing, PartitionKind::All] {
        let fam = enumerate(6, kind).unwrap();
        for w in fam.members().windows(2) {
            assert!(w[0].labels() < w[1].labels());
        }
        for (i, p) in fam.iter().enumerate() {
            assert_eq!(fam.position(p), Some(i));
        }
    }
}

#[test]
fn join_lattice_laws_exhaustive_k5() {
    let all = enumerate(5, PartitionKind::All).unwrap();
    let one = Partition::one_block(5);
    let bottom = Partition::discrete(5);
    for p in &all {
        assert_eq!(p.join(p).unwrap(), *p);
        assert_eq!(p.join(&bottom).unwrap(), *p);
        assert_eq!(p.join(&one).unwrap(), one);
        for q in &all {
            let pq = p.join(q).unwrap();
            assert_eq!(pq, q.join(p).unwrap());
            for r in &all {
                assert_eq!(pq.join(r).unwrap(), p.join(&q.join(r).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn join_exponent_claim_exhaustive_k6() {
    let zero = Rational64::from_integer(0);
    let minus_half = Rational64::new(-1, 2);
    for k in 1..=6 {
        let nc = enumerate(k, PartitionKind::NonCrossing).unwrap();
        for p in &nc {
            for q in &nc {
                let e = p.join_exponent(q).unwrap();
                if p == q {
                    assert_eq!(e, zero);
                } else {
                    assert!(e <= minus_half, "{p} {q} {e}");
                }
            }
        }
    }
    // The maximum over distinct pairs in NC(5) is exactly -1/2.
    let nc5 = enumerate(5, PartitionKind::NonCrossing).unwrap();
    let max = nc5
        .iter()
        .flat_map(|p| nc5.iter().filter(move |q| *q != p).map(move |q| p.join_exponent(q).unwrap()))
        .max()
        .unwrap();
    assert_eq!(max, minus_half);
}

fn all_indices(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=n).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn delta_of_join_is_product() {
    let all = enumerate(4, PartitionKind::All).unwrap();
    let idx = all_indices(4, 3);
    for p in &all {
        for q in &all {
            let j = p.join(q).unwrap();
            for i in &idx {
                assert_eq!(
                    j.delta(i).unwrap(),
                    p.delta(i).unwrap() && q.delta(i).unwrap()
                );
            }
        }
    }
}

#[test]
fn delta_sum_counts_constant_colourings() {
    for n in 1..=4usize {
        let idx = all_indices(4, n);
        for p in &enumerate(4, PartitionKind::All).unwrap() {
            let count = idx.iter().filter(|i| p.delta(i).unwrap()).count();
            assert_eq!(count, n.pow(p.block_count() as u32));
        }
    }
}

proptest! {
    #[test]
    fn canonical_form_ignores_labelling(
        labels in prop::collection::vec(0u8..6, 1..10),
        shift in prop::array::uniform6(0u32..1000),
    ) {
        let relabelled: Vec<u32> = labels.iter().map(|&l| shift[l as usize] * 7 + l as u32).collect();
        let a = Partition::from_labels(&labels).unwrap();
        let b = Partition::from_labels(&relabelled).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(Partition::from_growth(a.labels().to_vec()).unwrap(), a);
    }

    #[test]
    fn block_notation_and_json_round_trip(labels in prop::collection::vec(0u8..5, 1..10)) {
        let p = Partition::from_labels(&labels).unwrap();
        let text = p.to_string();
        prop_assert_eq!(text.parse::<Partition>().unwrap(), p.clone());
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Partition>(&json).unwrap(), p.clone());
        prop_assert_eq!(Partition::from_blocks(&p.blocks()).unwrap(), p);
    }
}
