use mvhota::{parse_dataset_str, remap_gt_ids, Dataset, Geometry, Point, Role};
use proptest::prelude::*;

fn ground_truth() -> impl Strategy<Value = Dataset> {
    (1usize..=3, 1usize..=5).prop_flat_map(|(n_views, n_frames)| {
        prop::collection::btree_set((0..n_views, 0..n_frames, 0u8..6), 0..30).prop_flat_map(
            move |keys| {
                let n = keys.len();
                (
                    Just(keys),
                    prop::collection::vec((0.0..=320.0f64, 0.0..=240.0f64), n),
                    prop::collection::vec(prop::option::of("[a-c]"), n),
                )
                    .prop_map(move |(keys, xy, classes)| {
                        let points = keys
                            .into_iter()
                            .zip(xy)
                            .zip(classes)
                            .map(|(((v, f, id), (x, y)), class)| {
                                let p = Point::new(v, f, x, y, Some(&format!("pt{id}")));
                                match class {
                                    Some(c) => p.with_class(&c),
                                    None => p,
                                }
                            })
                            .collect();
                        Dataset::new(
                            Role::GroundTruth,
                            Geometry::new(n_views, n_frames, 320, 240),
                            points,
                        )
                        .unwrap()
                    })
            },
        )
    })
}

proptest! {
    #[test]
    fn json_round_trip_is_lossless(gt in ground_truth()) {
        let text = gt.to_json();
        let back = parse_dataset_str(&text, Role::GroundTruth).unwrap();
        prop_assert_eq!(&back, &gt);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn remapping_is_a_per_view_bijection(gt in ground_truth()) {
        let (local, map) = remap_gt_ids(&gt).unwrap();
        prop_assert_eq!(local.len(), gt.len());
        for (a, b) in gt.points().iter().zip(local.points()) {
            prop_assert_eq!((a.view, a.frame, a.x, a.y), (b.view, b.frame, b.x, b.y));
            let l: usize = b.id.as_deref().unwrap().parse().unwrap();
            prop_assert!(l < map.n_local(a.view));
            let g = map.global_of_local(a.view, l).unwrap();
            prop_assert_eq!(map.global_id(g), a.id.as_deref().unwrap());
        }
        prop_assert_eq!(map.restore(&local).unwrap(), gt);
    }
}

#[test]
fn unknown_fields_and_bad_types_are_rejected() {
    let base = r#"{"n_views":1,"n_frames":1,"image_width":10,"image_height":10,"points":[{"view":0,"frame":0,"x":1,"y":1,"id":"a","class":null}]}"#;
    assert!(parse_dataset_str(base, Role::GroundTruth).is_ok());
    let extra = base.replace("\"class\":null", "\"class\":null,\"score\":1");
    assert!(parse_dataset_str(&extra, Role::GroundTruth).is_err());
    let bad = base.replace("\"x\":1", "\"x\":\"1\"");
    assert!(parse_dataset_str(&bad, Role::GroundTruth).is_err());
}
