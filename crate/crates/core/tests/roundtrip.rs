use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use relocviz_core::dataset_io::parse_polygon_file;
use relocviz_core::vectorizer::{
    extract_regions, rasterize_oracle, simplify_collinear, vectorize, RasterImage,
};
use relocviz_core::Color;

/// Flat-color map: a background plus random rectangles and random-walk blobs.
fn random_map(rng: &mut StdRng) -> RasterImage {
    let (w, h) = (rng.random_range(1..=64), rng.random_range(1..=64));
    let palette: Vec<Color> = (0..rng.random_range(1..=8))
        .map(|_| Color::new(rng.random(), rng.random(), rng.random()))
        .collect();
    let mut img = RasterImage::filled(w, h, palette[0]);
    for _ in 0..rng.random_range(0..12) {
        let c = palette[rng.random_range(0..palette.len())];
        let (x0, y0) = (rng.random_range(0..w), rng.random_range(0..h));
        let (x1, y1) = (rng.random_range(x0..w), rng.random_range(y0..h));
        for y in y0..=y1 {
            for x in x0..=x1 {
                img.set(x, y, c);
            }
        }
    }
    for _ in 0..rng.random_range(0..6) {
        let c = palette[rng.random_range(0..palette.len())];
        let (mut x, mut y) = (rng.random_range(0..w), rng.random_range(0..h));
        for _ in 0..rng.random_range(1..200) {
            img.set(x, y, c);
            match rng.random_range(0..4) {
                0 => x = (x + 1).min(w - 1),
                1 => x = x.saturating_sub(1),
                2 => y = (y + 1).min(h - 1),
                _ => y = y.saturating_sub(1),
            }
        }
    }
    img
}

#[test]
fn random_maps_round_trip_exactly() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..200 {
        let img = random_map(&mut rng);
        let set = vectorize(&img, 0, 1);
        assert_eq!(rasterize_oracle(&set), img, "case {case}");
    }
}

#[test]
fn scattered_noise_round_trips() {
    // Every pixel independent: maximal pinches and diagonal contacts.
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..50 {
        let (w, h) = (rng.random_range(1..=24), rng.random_range(1..=24));
        let palette = [Color::new(255, 0, 0), Color::new(0, 0, 255), Color::new(0, 255, 0)];
        let pixels = (0..w * h).map(|_| palette[rng.random_range(0..3)]).collect();
        let img = RasterImage::new(w, h, pixels).unwrap();
        assert_eq!(rasterize_oracle(&vectorize(&img, 0, 1)), img);
    }
}

fn arb_image() -> impl Strategy<Value = RasterImage> {
    any::<u64>().prop_map(|seed| random_map(&mut StdRng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip(img in arb_image()) {
        prop_assert_eq!(rasterize_oracle(&vectorize(&img, 0, 1)), img);
    }

    #[test]
    fn regions_partition_the_image(img in arb_image()) {
        let regions = extract_regions(&img, 0);
        let mut seen = vec![false; img.pixels().len()];
        for region in &regions {
            prop_assert!(!region.pixels.is_empty());
            for &(x, y) in &region.pixels {
                let i = (y * img.width() + x) as usize;
                prop_assert!(!seen[i]);
                seen[i] = true;
                prop_assert_eq!(img.get(x, y), region.color);
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn traced_polygons_are_rectilinear(img in arb_image()) {
        for entry in vectorize(&img, 0, 1).entries {
            let poly = &entry.polygon;
            prop_assert!(poly.len() >= 4 && poly.len() % 2 == 0);
            for (a, b) in poly.edges() {
                prop_assert!(a.x == b.x || a.y == b.y);
            }
            prop_assert_eq!(&simplify_collinear(poly), poly);
        }
    }

    #[test]
    fn polygon_file_round_trips_and_is_deterministic(img in arb_image()) {
        let set = vectorize(&img, 0, 1);
        let text = set.to_text();
        prop_assert_eq!(&vectorize(&img, 0, 1).to_text(), &text);
        let parsed = parse_polygon_file(&text).unwrap();
        prop_assert_eq!(parsed, set);
    }

    #[test]
    fn ppm_round_trip(img in arb_image()) {
        prop_assert_eq!(RasterImage::decode(&img.to_ppm()).unwrap(), img);
    }
}
