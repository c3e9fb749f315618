use lectern::detectors::{
    ar_anomaly_detect, grad_diff_score, motion_entropy_score, window_drop_detect, DetectorParams, FlowField, FrameGrid,
};
use proptest::prelude::*;

fn grid_pair() -> impl Strategy<Value = (FrameGrid, FrameGrid)> {
    (2usize..9, 2usize..9, prop::sample::select(vec![1usize, 3])).prop_flat_map(|(r, c, ch)| {
        let n = r * c * ch;
        (prop::collection::vec(-10.0f64..10.0, n), prop::collection::vec(-10.0f64..10.0, n))
            .prop_map(move |(a, b)| (FrameGrid::new(r, c, ch, a).unwrap(), FrameGrid::new(r, c, ch, b).unwrap()))
    })
}

fn flow() -> impl Strategy<Value = FlowField> {
    (2usize..9, 2usize..9).prop_flat_map(|(r, c)| {
        (prop::collection::vec(-3.0f64..3.0, r * c), prop::collection::vec(-3.0f64..3.0, r * c))
            .prop_map(move |(u, v)| FlowField::new(r, c, u, v).unwrap())
    })
}

fn shifted(g: &FrameGrid, k: f64) -> FrameGrid {
    let (r, c, ch) = g.shape();
    FrameGrid::from_fn(r, c, ch, |i, j, l| g.get(i, j, l) + k)
}

proptest! {
    #[test]
    fn grad_diff_identity_symmetry_offset((a, b) in grid_pair(), k in -50.0f64..50.0) {
        prop_assert_eq!(grad_diff_score(&a, &a).unwrap(), 0.0);
        let ab = grad_diff_score(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab, grad_diff_score(&b, &a).unwrap());
        let shifted_b = grad_diff_score(&a, &shifted(&b, k)).unwrap();
        prop_assert!((shifted_b - ab).abs() <= 1e-9 * (1.0 + ab));
    }

    #[test]
    fn entropy_within_range(f in flow(), bins in 2usize..16) {
        let h = motion_entropy_score(&f, bins).unwrap();
        prop_assert!(h > 0.0 && h <= 2.0 * (bins as f64).ln());
    }

    #[test]
    fn detectors_are_causal_and_binary(
        series in prop::collection::vec(-5.0f64..5.0, 60..120),
        cut in 0usize..60,
        seed in any::<u64>(),
    ) {
        let p = DetectorParams { ar_window: 10, drop_window: 4, ..DetectorParams::default() };
        let cut = cut.min(series.len() - 1);
        // reverse-rotate the tail after `cut` by a seed-dependent amount
        let mut permuted = series.clone();
        let tail = &mut permuted[cut + 1..];
        if !tail.is_empty() {
            let k = (seed as usize) % tail.len();
            tail.rotate_left(k);
            tail.reverse();
        }
        for detect in [ar_anomaly_detect, window_drop_detect] {
            let a = detect(&series, &p).unwrap();
            let b = detect(&permuted, &p).unwrap();
            prop_assert_eq!(a.len(), series.len());
            prop_assert!(a.iter().all(|&x| x <= 1));
            prop_assert_eq!(&a[..=cut], &b[..=cut]);
        }
    }
}

#[test]
fn zero_flow_entropy_is_maximal() {
    for bins in [2, 4, 9, 16] {
        let h = motion_entropy_score(&FlowField::zeros(5, 7), bins).unwrap();
        assert_eq!(h, 2.0 * (bins as f64).ln());
    }
}

#[test]
fn ar_short_series_rejected() {
    let p = DetectorParams::default();
    assert!(ar_anomaly_detect(&[1.0; 50], &p).is_err());
    assert!(window_drop_detect(&[1.0; 49], &p).is_err());
}
