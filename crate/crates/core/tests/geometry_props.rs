use gridthresh::geometry::{
    bounding_rect, in_convex_position, lattice_points_in_scaled, orientation,
    orientation_equivalence_check, prime_points_in_triangle_direct,
    prime_points_in_triangle_mobius, LatticeTriangle, Orientation, Segment,
};
use gridthresh::numtheory::ArithTables;
use gridthresh::{Constants, GridPoint};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{convex_position_oracle as opposite_sides_oracle, det, p};

/// The eight symmetries of the square lattice fixing the origin.
fn sym(k: u8, q: GridPoint) -> GridPoint {
    let (x, y) = if k & 4 != 0 { (q.y, q.x) } else { (q.x, q.y) };
    let x = if k & 1 != 0 { -x } else { x };
    let y = if k & 2 != 0 { -y } else { y };
    p(x, y)
}

fn pt() -> impl Strategy<Value = GridPoint> {
    (-50i32..50, -50i32..50).prop_map(|(x, y)| p(x, y))
}

fn seg() -> impl Strategy<Value = Segment<i32>> {
    (pt(), pt())
        .prop_filter("distinct", |(a, b)| a != b)
        .prop_map(|(a, b)| Segment::new(a, b))
}

proptest! {
    #[test]
    fn orientation_antisymmetric_and_cyclic(a in pt(), b in pt(), c in pt()) {
        let o = orientation(a, b, c).unwrap();
        prop_assert_eq!(orientation(a, c, b).unwrap(), o.reversed());
        prop_assert_eq!(orientation(b, c, a).unwrap(), o);
        prop_assert_eq!(orientation(c, a, b).unwrap(), o);
        let expect = match det(a, b, c).signum() {
            1 => Orientation::Counterclockwise,
            -1 => Orientation::Clockwise,
            _ => Orientation::Collinear,
        };
        prop_assert_eq!(o, expect);
    }

    #[test]
    fn convex_position_symmetries(s1 in seg(), s2 in seg(), dx in -100i32..100, dy in -100i32..100) {
        let base = in_convex_position(s1, s2);
        prop_assert_eq!(base, opposite_sides_oracle(s1.a, s1.b, s2.a, s2.b));
        prop_assert_eq!(in_convex_position(s2, s1), base);
        prop_assert_eq!(in_convex_position(Segment { a: s1.b, b: s1.a }, s2), base);
        let shift = |q: GridPoint| p(q.x + dx, q.y + dy);
        prop_assert_eq!(
            in_convex_position(Segment::new(shift(s1.a), shift(s1.b)), Segment::new(shift(s2.a), shift(s2.b))),
            base
        );
        for k in 0..8u8 {
            let s = |q| sym(k, q);
            prop_assert_eq!(
                in_convex_position(Segment::new(s(s1.a), s(s1.b)), Segment::new(s(s2.a), s(s2.b))),
                base,
                "symmetry {}", k
            );
        }
    }

    #[test]
    fn circumscribed_rectangle_touches_hull(s1 in seg(), s2 in seg()) {
        prop_assume!(in_convex_position(s1, s2));
        let pts = [s1.a, s1.b, s2.a, s2.b];
        let r = bounding_rect(&pts).unwrap();
        prop_assert!(!r.is_degenerate());
        let f = r.far_corner();
        prop_assert!(pts.iter().any(|q| q.x == r.origin.x));
        prop_assert!(pts.iter().any(|q| q.x == f.x));
        prop_assert!(pts.iter().any(|q| q.y == r.origin.y));
        prop_assert!(pts.iter().any(|q| q.y == f.y));
        prop_assert!(pts.iter().all(|&q| r.contains(q)));
    }

    #[test]
    fn mobius_matches_direct_random(a in pt(), b in pt(), c in pt(), which in 0usize..3) {
        prop_assume!(det(a, b, c) != 0);
        let t = LatticeTriangle::new(a, b, c).unwrap();
        let apex = [a, b, c][which];
        let tables = ArithTables::new(t.extent() as usize).unwrap();
        prop_assert_eq!(
            prime_points_in_triangle_mobius(&t, apex, &tables).unwrap(),
            prime_points_in_triangle_direct(&t, apex).unwrap()
        );
    }
}

#[test]
fn lemma_equivalence_exhaustive_five_by_five() {
    let pts: Vec<GridPoint> = (0..5).flat_map(|y| (0..5).map(move |x| p(x, y))).collect();
    let mut agree_true = 0u64;
    for &a in &pts {
        for &b in &pts {
            if a == b {
                continue;
            }
            for &c in &pts {
                for &d in &pts {
                    if c == d {
                        continue;
                    }
                    let cp = in_convex_position(Segment::new(a, b), Segment::new(c, d));
                    assert_eq!(orientation_equivalence_check(a, b, c, d), cp, "{a} {b} {c} {d}");
                    assert_eq!(opposite_sides_oracle(a, b, c, d), cp, "{a} {b} {c} {d}");
                    agree_true += cp as u64;
                }
            }
        }
    }
    assert!(agree_true > 0);
}

#[test]
fn mobius_matches_direct_small_grid_exhaustive() {
    let tables = ArithTables::new(32).unwrap();
    let pts: Vec<GridPoint> = (0..7).flat_map(|y| (0..7).map(move |x| p(x, y))).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let (a, b, c) = (pts[i], pts[j], pts[k]);
                if det(a, b, c) == 0 {
                    continue;
                }
                let t = LatticeTriangle::new(a, b, c).unwrap();
                for apex in [a, b, c] {
                    assert_eq!(
                        prime_points_in_triangle_mobius(&t, apex, &tables).unwrap(),
                        prime_points_in_triangle_direct(&t, apex).unwrap(),
                        "{a} {b} {c} apex {apex}"
                    );
                }
            }
        }
    }
}

#[test]
fn mobius_matches_direct_hundred_box_seeded() {
    let tables = ArithTables::new(256).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 200 {
        let mut q = || p(rng.gen_range(0..100), rng.gen_range(0..100));
        let (a, b, c) = (q(), q(), q());
        if det(a, b, c) == 0 {
            continue;
        }
        let t = LatticeTriangle::new(a, b, c).unwrap();
        assert_eq!(
            prime_points_in_triangle_mobius(&t, a, &tables).unwrap(),
            prime_points_in_triangle_direct(&t, a).unwrap()
        );
        done += 1;
    }
}

#[test]
fn scaled_counts_by_brute_force() {
    let t = LatticeTriangle::new(p(2, 1), p(9, 4), p(4, 8)).unwrap();
    for apex in [p(2, 1), p(9, 4), p(4, 8)] {
        for h in 1..=12i32 {
            let mut direct = 0;
            for y in -20..20 {
                for x in -20..20 {
                    let q = p(apex.x + h * x, apex.y + h * y);
                    let s1 = det(t.a, t.b, q).signum();
                    let s2 = det(t.b, t.c, q).signum();
                    let s3 = det(t.c, t.a, q).signum();
                    if (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0) {
                        direct += 1;
                    }
                }
            }
            assert_eq!(lattice_points_in_scaled(&t, apex, h as u64).unwrap(), direct, "h={h}");
        }
    }
}

#[test]
fn prime_density_of_dilated_triangles() {
    let six = Constants::<f64>::new().six_over_pi2;
    let tables = ArithTables::new(4096).unwrap();
    let mut devs = Vec::new();
    for k in [4i32, 16, 64, 256] {
        let t = LatticeTriangle::new(p(0, 0), p(3 * k, k), p(k, 4 * k)).unwrap();
        let area = t.doubled_area() as f64 / 2.0;
        let prime = prime_points_in_triangle_mobius(&t, p(0, 0), &tables).unwrap() as f64;
        let dev = (prime / area - six).abs();
        if area >= 1e4 {
            assert!(dev / six <= 0.05, "k={k} dev={dev}");
        }
        devs.push(dev);
    }
    assert!(devs.last() < devs.first(), "{devs:?}");
}
