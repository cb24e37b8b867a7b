use gridthresh::asymptotics::{convergence_table, k_threshold_bounds, predict, TableLimits};
use gridthresh::Ext;
use num_bigint::BigInt;
use proptest::prelude::*;

fn fact(k: u32) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

fn big(b: u32, e: u32) -> BigInt {
    BigInt::from(b).pow(e)
}

/// Whether the improved coefficient is below `6^k / k!`, by cross-multiplying.
fn improved_smaller_oracle(k: u32) -> bool {
    let h = k / 2;
    let trivial = (big(6, k), fact(k));
    let improved = if k % 2 == 0 {
        (big(5, k), big(12, h) * fact(h))
    } else {
        (big(5, k - 1) * 6, big(12, h) * fact(h) * k)
    };
    improved.0 * trivial.1 < trivial.0 * improved.1
}

#[test]
fn crossovers() {
    for k in 2..=40 {
        let b = k_threshold_bounds(k).unwrap();
        assert_eq!(b.improved_is_smaller, improved_smaller_oracle(k), "k={k}");
        let expect = if k % 2 == 0 { k <= 22 } else { k <= 23 };
        assert_eq!(b.improved_is_smaller, expect, "k={k}");
    }
}

#[test]
fn main_terms_scale() {
    let b = k_threshold_bounds(3).unwrap();
    let (t1, i1) = b.main_terms(4, 4);
    let (t2, i2) = b.main_terms(8, 4);
    assert!((t2 / t1 - 64.0).abs() < 1e-9);
    assert!((i2 / i1 - 64.0).abs() < 1e-9);
}

#[test]
fn convergence_table_small() {
    let rows = convergence_table(&[(2, 2), (3, 3), (4, 4)], TableLimits::default()).unwrap();
    let got: Vec<_> = rows.iter().map(|r| (r.t, r.q, r.p, r.t2)).collect();
    assert_eq!(
        got,
        vec![
            (14, Some(2), Some(2), Some(16)),
            (58, Some(134), Some(90), Some(189)),
            (174, Some(1464), Some(1118), Some(1620)),
        ]
    );
    assert!(convergence_table(&[], TableLimits::default()).is_err());
    let tight = TableLimits {
        census_guard: 4,
        q_cells: 4,
        t2_cells: 4,
    };
    let r = &convergence_table(&[(3, 3)], tight).unwrap()[0];
    assert_eq!((r.q, r.p, r.t2), (None, None, None));
    assert_eq!(r.p_ratio, None);
}

#[test]
fn p_ratio_moves_toward_one() {
    let limits = TableLimits {
        q_cells: 0,
        t2_cells: 0,
        ..TableLimits::default()
    };
    let rows = convergence_table(&[(4, 4), (8, 8), (12, 12)], limits).unwrap();
    let gaps: Vec<f64> = rows.iter().map(|r| (r.p_ratio.unwrap() - 1.0).abs()).collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    let t_gaps: Vec<f64> = rows.iter().map(|r| (r.t_ratio - 1.0).abs()).collect();
    assert!(t_gaps[2] < t_gaps[0]);
}

proptest! {
    #[test]
    fn predict_is_monotone(m in 1u32..2000, n in 1u32..2000) {
        let (t, p) = predict::<Ext>(m, n).unwrap();
        let (t2, p2) = predict::<Ext>(m + 1, n).unwrap();
        let (t3, p3) = predict::<Ext>(m, n + 1).unwrap();
        prop_assert!(t2 > t && p2 > p && t3 > t && p3 > p);
        let (tf, _) = predict::<f64>(m, n).unwrap();
        prop_assert!(((tf - t.0) / tf).abs() < 1e-14);
    }
}
