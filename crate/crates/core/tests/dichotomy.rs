use coarsehom::amenability::{folner_profile, verdict, Classification, Thresholds};
use coarsehom::chains::{capacity_profile, MinimalCapacity};
use coarsehom::generators::{exhaustion, Family};

fn evidence(family: Family, radii: &[usize]) -> (Vec<num::BigRational>, Vec<MinimalCapacity>, Classification) {
    let windows = exhaustion(family, radii).unwrap();
    let profile = folner_profile(radii, &windows).unwrap();
    let caps = capacity_profile(&windows, 64).unwrap();
    let v = verdict(&profile, &caps, &Thresholds::default()).unwrap();
    (profile.ratios().cloned().collect(), caps, v.classification)
}

#[test]
fn channels_never_certify_opposite_trends() {
    let t = Thresholds::default();
    let cases = [
        (Family::Grid { n: 2 }, (2..=12).collect::<Vec<_>>(), false),
        (Family::Tree { d: 3 }, (1..=12).collect(), true),
        (Family::HyperbolicTiling { p: 4, q: 5 }, (1..=12).collect(), true),
    ];
    for (family, radii, non_amenable) in cases {
        let (ratios, caps, class) = evidence(family, &radii);
        let folner_small = ratios.windows(2).all(|w| w[1] <= w[0]) && *ratios.last().unwrap() < t.epsilon;
        let folner_large = ratios.iter().all(|r| *r >= t.delta);
        let tail = &caps[caps.len() - t.trend_window..];
        let growing = tail.windows(2).all(|w| w[0].exact().unwrap() < w[1].exact().unwrap());
        let constant = tail.iter().all(|k| *k == tail[0]);
        assert!(!(folner_small && constant), "{family:?}");
        assert!(!(folner_large && growing), "{family:?}");
        assert_eq!(class == Classification::NonAmenableTrend, non_amenable, "{family:?} {caps:?}");
    }
}

#[test]
fn spaced_grid_radii_read_as_amenable() {
    let (_, caps, class) = evidence(Family::Grid { n: 2 }, &[4, 8, 12, 16]);
    assert_eq!(caps, [1, 3, 4, 5].map(MinimalCapacity::Exact));
    assert_eq!(class, Classification::AmenableTrend);
}
