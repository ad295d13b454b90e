mod common;

use common::dims;
use entangle_atlas::error::SampleCoord;
use entangle_atlas::survey::{replay_sample, run_dims, run_range};
use entangle_atlas::{evaluate_all, merge_records, Statistic, Tolerances};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn any_split_merges_to_the_whole(cuts in prop::collection::btree_set(1u64..120, 0..5), seed in any::<u64>()) {
        let tol = Tolerances::default();
        let d = dims(2, 3);
        let whole = run_range(d, seed, 0..120, Some(2.0), &tol).unwrap();
        let mut bounds: Vec<u64> = std::iter::once(0).chain(cuts).chain(std::iter::once(120)).collect();
        bounds.dedup();
        let mut parts: Vec<_> = bounds.windows(2).map(|w| run_range(d, seed, w[0]..w[1], Some(2.0), &tol).unwrap()).collect();
        prop_assert_eq!(&merge_records(&parts).unwrap(), &whole);
        parts.reverse();
        prop_assert_eq!(&merge_records(&parts).unwrap(), &whole);
    }
}

#[test]
fn worker_count_does_not_change_records() {
    let tol = Tolerances::default();
    let d = dims(3, 3);
    let one = run_dims(d, 2_000, 17, 1, None, &tol).unwrap();
    for w in [2, 4, 7] {
        assert_eq!(run_dims(d, 2_000, 17, w, None, &tol).unwrap(), one, "workers={w}");
    }
}

#[test]
fn two_by_n_surveys_record_no_anomalies() {
    let tol = Tolerances::default();
    for nb in 2..=6 {
        let rec = run_dims(dims(2, nb), 2_000, 2, 1, None, &tol).unwrap();
        assert!(rec.anomalies.is_empty());
        assert_eq!(rec.count(Statistic::AgreePptReduction), rec.samples);
        assert_eq!(rec.count(Statistic::Ppt), rec.count(Statistic::Reduction));
    }
}

#[test]
fn replay_coordinate_regenerates_the_sample() {
    let tol = Tolerances::default();
    let d = dims(3, 4);
    let rec = run_range(d, 9, 37..38, None, &tol).unwrap();
    let coord = SampleCoord {
        n_a: 3,
        n_b: 4,
        stream_id: 37,
        index: 0,
    };
    let v = evaluate_all(&replay_sample(9, coord).unwrap(), None).unwrap();
    assert_eq!(rec.count(Statistic::Ppt), v.ppt as u64);
    assert_eq!(rec.count(Statistic::Reduction), v.reduction as u64);
    assert_eq!(rec.count(Statistic::Majorization), v.majorization as u64);
}

#[test]
fn merging_different_dimensions_fails() {
    let tol = Tolerances::default();
    let a = run_range(dims(2, 2), 0, 0..5, None, &tol).unwrap();
    let b = run_range(dims(2, 3), 0, 0..5, None, &tol).unwrap();
    assert!(merge_records(&[a, b]).is_err());
    assert!(merge_records(&[]).is_err());
}
