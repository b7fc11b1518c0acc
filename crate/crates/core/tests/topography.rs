mod common;

use common::{jittered_base, random_forest};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stamr_swe::mesh::leaf_interfaces;
use stamr_swe::topography::{allocate_subcell_heights, build_subcells, BottomField};

fn quad(rng: &mut impl Rng) -> [[f64; 2]; 4] {
    // tensor order, convex for jitter < 0.25
    let j = |r: &mut dyn rand::RngCore| 0.2 * (r.gen::<f64>() - 0.5);
    [
        [j(rng), j(rng)],
        [1.0 + j(rng), j(rng)],
        [j(rng), 1.0 + j(rng)],
        [1.0 + j(rng), 1.0 + j(rng)],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bottom_is_continuous_across_interfaces(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut base = jittered_base(&mut rng, 3, 3, 0.2);
        let b = (0..base.nodes().len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        base.set_node_bottom(b).unwrap();
        let f = random_forest(&mut rng, base, 3, 3);
        let bottom = BottomField::build(&f).unwrap();
        for i in leaf_interfaces(&f).unwrap() {
            let Some(r) = i.right_cell() else { continue };
            for g in 0..2 {
                let (bl, _) = bottom.at(&f, i.left, i.gauss[g]);
                let (br, _) = bottom.at(&f, r, i.gauss_right(g));
                prop_assert!((bl - br).abs() <= 1e-12, "{bl} vs {br}");
            }
        }
    }

    #[test]
    fn subcell_fit_interpolates_corners(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = quad(&mut rng);
        let b: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let geo = build_subcells(c, b).unwrap();
        // T1 = (c0, c2, c3), T2 = (c0, c1, c3)
        for (t, idx) in [(0, [0, 2, 3]), (1, [0, 1, 3])] {
            for i in idx {
                let (v, _) = geo.eval(t, c[i]);
                prop_assert!((v - b[i]).abs() <= 1e-12);
            }
        }
        prop_assert!(geo.alpha > 0.0 && geo.alpha < 1.0);
    }

    #[test]
    fn allocation_conserves_and_keeps_surface_flat(
        seed in any::<u64>(),
        h in 0.0f64..2.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = quad(&mut rng);
        let b: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let geo = build_subcells(c, b).unwrap();
        let (h1, h2) = allocate_subcell_heights(h, &geo);
        prop_assert!(h1 >= 0.0 && h2 >= 0.0);
        let mass = geo.alpha * h1 + (1.0 - geo.alpha) * h2;
        prop_assert!((mass - h).abs() <= 1e-13 * h.max(1.0));
        if h1 > 0.0 && h2 > 0.0 {
            let (e1, e2) = (h1 + geo.avg[0], h2 + geo.avg[1]);
            prop_assert!((e1 - e2).abs() <= 1e-13 * e1.abs().max(1.0));
        }
    }
}
