use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use xab_core::empirical::{
    empirical_measure, invariance_defect, weak_star_distance, FourierCoefficients, MapChoice,
};
use xab_core::entropy::{count_r, growth_bound, itinerary_choices};
use xab_core::moran::{box_count, moran_dims, realize_intervals, MoranStructure};
use xab_core::numtheory::ln_biguint;
use xab_core::{orbit_grid, DigitWord, TorusPoint};

fn point() -> impl Strategy<Value = TorusPoint> {
    (1u64..1_000_000_000)
        .prop_flat_map(|den| (0..den, Just(den)))
        .prop_map(|(num, den)| TorusPoint::new(num, den).unwrap())
}

fn mult() -> impl Strategy<Value = u64> {
    2u64..12
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_entries_are_iterated_maps(x in point(), a in mult(), b in mult(), n in 1usize..12) {
        let grid = orbit_grid(&x, a, b, n).unwrap();
        let mut start = x.clone();
        for row in &grid {
            let mut y = start.clone();
            for entry in row {
                prop_assert_eq!(entry, &y);
                y = y.times(b);
            }
            start = start.times(a);
        }
    }

    #[test]
    fn maps_commute(x in point(), a in mult(), b in mult()) {
        prop_assert_eq!(x.times(a).times(b), x.times(b).times(a));
        prop_assert_eq!(x.times(a).times(b), x.times(a * b));
    }

    #[test]
    fn digit_prefix_brackets_point(x in point(), base in 2u32..40, len in 0usize..30) {
        let word = x.digits(base, len).unwrap();
        let left = word.point().to_rational();
        let width = BigRational::new(1.into(), BigUint::from(base).pow(len as u32).into());
        let xr = x.to_rational();
        prop_assert!(left <= xr && xr < left + width);
        let text = word.to_string();
        prop_assert_eq!(text.parse::<DigitWord>().unwrap(), word);
    }

    #[test]
    fn invariance_defect_is_at_most_two_over_n(
        x in point(), k in -20i64..=20, n in 1usize..60, a in mult(), b in mult(),
    ) {
        prop_assume!(k != 0);
        for map in [MapChoice::A, MapChoice::B] {
            let d = invariance_defect::<f64>(&x, a, b, n, k, map).unwrap();
            prop_assert!(d <= 2.0 / n as f64 + 1e-12);
        }
    }

    #[test]
    fn empirical_measures_are_probability_measures(x in point(), n in 1usize..40, depth in 1usize..20) {
        let mu = empirical_measure::<f64>(&x, 2, 3, n, depth, 4).unwrap();
        prop_assert_eq!(mu.counts().iter().sum::<u64>(), (n * n) as u64);
        prop_assert!((mu.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for k in 1..=4 {
            prop_assert!(mu.fourier().get(k).unwrap().norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn weak_star_distance_is_a_metric(x in point(), y in point(), z in point(), n in 1usize..20) {
        let f = |p: &TorusPoint| empirical_measure::<f64>(p, 2, 3, n, 1, 8).unwrap().fourier().clone();
        let (fx, fy, fz) = (f(&x), f(&y), f(&z));
        let d = |u: &FourierCoefficients<f64>, v: &FourierCoefficients<f64>| weak_star_distance(u, v).unwrap();
        prop_assert_eq!(d(&fx, &fx), 0.0);
        prop_assert!((d(&fx, &fy) - d(&fy, &fx)).abs() < 1e-15);
        prop_assert!(d(&fx, &fz) <= d(&fx, &fy) + d(&fy, &fz) + 1e-12);
        // Lebesgue coefficients vanish and the others have modulus <= 1
        prop_assert!(d(&fx, &FourierCoefficients::lebesgue(8)) <= 2.0);
    }

    #[test]
    fn single_precision_tracks_double(x in point(), n in 1usize..30) {
        let m64 = empirical_measure::<f64>(&x, 3, 5, n, 4, 3).unwrap();
        let m32 = empirical_measure::<f32>(&x, 3, 5, n, 4, 3).unwrap();
        prop_assert_eq!(m64.counts(), m32.counts());
        for k in 1..=3 {
            let (c64, c32) = (m64.fourier().get(k).unwrap(), m32.fourier().get(k).unwrap());
            prop_assert!((c64.re - c32.re as f64).abs() < 1e-5);
            prop_assert!((c64.im - c32.im as f64).abs() < 1e-5);
        }
    }

    #[test]
    fn moran_bounds_are_ordered(
        terms in prop::collection::vec((1u64..6, 2i64..9), 3..25),
        periodic in any::<bool>(),
    ) {
        let (n, c): (Vec<u64>, Vec<BigRational>) = terms
            .iter()
            .map(|&(n, d)| (n, BigRational::new(1.into(), (n as i64 * d).into())))
            .unzip();
        let levels = n.len();
        let s = if periodic {
            MoranStructure::periodic(n, c).unwrap()
        } else {
            MoranStructure::explicit(n, c).unwrap()
        };
        let d = moran_dims::<f64>(&s, levels).unwrap();
        prop_assert!(d.s2 <= d.s1 + 1e-12);
        prop_assert!(d.s1 >= 0.0 && d.s1 <= 1.0 + 1e-12);
    }

    #[test]
    fn realized_intervals_are_nested_and_disjoint(
        terms in prop::collection::vec((1u64..4, 1i64..4), 1..6),
    ) {
        let (n, c): (Vec<u64>, Vec<BigRational>) = terms
            .iter()
            .map(|&(n, extra)| (n, BigRational::new(1.into(), (n as i64 + extra).into())))
            .unzip();
        let s = MoranStructure::explicit(n, c).unwrap();
        let depth = terms.len();
        let deep = realize_intervals(&s, depth, 1 << 20).unwrap();
        let shallow = realize_intervals(&s, depth - 1, 1 << 20).unwrap();
        for w in deep.windows(2) {
            prop_assert!(w[0].right() <= w[1].left);
        }
        for iv in &deep {
            prop_assert!(iv.left >= BigRational::zero() && iv.right() <= BigRational::one());
            prop_assert!(shallow.iter().any(|p| p.left <= iv.left && iv.right() <= p.right()));
        }
        let eps = BigRational::new(1.into(), 7.into());
        let half = &eps / BigRational::from_integer(2.into());
        prop_assert!(box_count(&deep, &half) >= box_count(&deep, &eps));
    }

    #[test]
    fn type_class_counts_obey_growth_bound(k in 1usize..5, n in 1usize..60, t in 0.0f64..1.5) {
        let c = count_r(k, n, t).unwrap();
        prop_assert!(c <= BigUint::from(k).pow(n as u32));
        prop_assert!(c >= BigUint::from(k));
        prop_assert!(ln_biguint(&c) / n as f64 <= growth_bound(k, n, t) + 1e-12);
    }

    #[test]
    fn itinerary_of_rational_is_eventually_periodic(p in 0i64..97, m in 1usize..4) {
        // T_2 on p/97 has period dividing ord_97(2) = 48
        let x = TorusPoint::new(p, 97).unwrap();
        let rec = itinerary_choices::<f64>(&x, 2, 2, m, 200).unwrap();
        for j in 0..200 - 48 {
            prop_assert_eq!(rec.indices[j], rec.indices[j + 48]);
        }
    }
}

#[test]
fn lebesgue_coefficients_vanish() {
    let leb = FourierCoefficients::<f64>::lebesgue(5);
    assert_eq!(leb.get(0).unwrap().re, 1.0);
    assert!((1..=5).all(|k| leb.get(k).unwrap().norm().is_zero()));
}
