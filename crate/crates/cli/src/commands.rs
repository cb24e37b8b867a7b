use std::collections::HashSet;

use gridthresh::asymptotics::{
    convergence_table, default_sweep, k_threshold_bounds, predict, TableLimits,
};
use gridthresh::census::{
    aggregate_from_table, census_total_direct, lemma_constant_report, reconstruct_p, CensusTable,
    ZCensus,
};
use gridthresh::geometry::{
    prime_points_in_triangle_direct, prime_points_in_triangle_mobius, LatticeTriangle,
};
use gridthresh::numtheory::{gcd_i64, ArithTables};
use gridthresh::pairs::{
    check_classification_exhaustive, check_classification_sampled, count_convex_position_pairs,
    count_convex_quad_proper_pairs, count_proper_pairs, count_two_threshold,
    verify_decomposition, verify_distance_claim, verify_uniqueness, EquivalenceReport,
};
use gridthresh::threshold::{
    count_oriented_prime_segments, enumerate_threshold, oriented_prime_segments,
    threshold_from_segment,
};
use gridthresh::{Constants, Ext, GridDims, GridPoint, Point, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::{exact, label, predicted, ratio, Cell, Table};
use crate::{Failure, Fault, Field, Kind};

/// Side of the box for the sampled triangle suite.
const TRIANGLE_BOX: i32 = 100;

fn div(a: Option<u128>, b: f64) -> Option<f64> {
    a.map(|a| a as f64 / b)
}

pub fn count(m: u32, n: u32, fields: &[Field], census_guard: u64) -> Result<Table, Failure> {
    let dims = GridDims::new(m, n)?;
    let want = |f| fields.contains(&f);
    let t = want(Field::T).then(|| count_oriented_prime_segments(dims) as u128 + 2);
    let q = want(Field::Q)
        .then(|| count_proper_pairs(dims))
        .transpose()?
        .map(u128::from);
    let p = want(Field::P)
        .then(|| reconstruct_p(dims, census_guard))
        .transpose()?;
    let t2 = want(Field::T2)
        .then(|| count_two_threshold(dims))
        .transpose()?
        .map(u128::from);
    let (pt, pp) = predict::<Ext>(m, n)?;
    let (pt, pp) = (pt.to_f64(), pp.to_f64());
    let mut table = Table::new(vec![
        exact("m"),
        exact("n"),
        exact("t"),
        exact("q"),
        exact("p"),
        exact("t2"),
        predicted("predicted_t"),
        predicted("predicted_p"),
        ratio("t_ratio"),
        ratio("p_ratio"),
        ratio("t2_over_p"),
    ]);
    let t2_over_p = match (t2, p) {
        (Some(a), Some(b)) if b > 0 => Some(a as f64 / b as f64),
        _ => None,
    };
    table.push(vec![
        m.into(),
        n.into(),
        t.into(),
        q.into(),
        p.into(),
        t2.into(),
        pt.into(),
        pp.into(),
        div(t, pt).into(),
        div(p, pp).into(),
        t2_over_p.into(),
    ]);
    Ok(table)
}

pub struct VerifyConfig {
    pub max_m: u32,
    pub max_n: u32,
    pub samples: u64,
    pub seed: u64,
    pub census_guard: u64,
    pub fault: Option<Fault>,
}

pub struct VerifyReport {
    pub table: Table,
    pub failures: Vec<String>,
}

/// Totals of one suite across the grids it ran on.
struct Suite {
    name: &'static str,
    invariant: &'static str,
    checked: u64,
    observed: u64,
    violations: u64,
    first: Option<String>,
}

impl Suite {
    fn new(name: &'static str, invariant: &'static str) -> Self {
        Suite {
            name,
            invariant,
            checked: 0,
            observed: 0,
            violations: 0,
            first: None,
        }
    }

    fn fail(&mut self, detail: String) {
        self.violations += 1;
        self.first.get_or_insert(detail);
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(detail());
        }
    }
}

fn grids(max_m: u32, max_n: u32) -> Vec<GridDims> {
    (1..=max_m)
        .flat_map(|m| (1..=max_n).map(move |n| (m, n)))
        .map(|(m, n)| GridDims::new(m, n))
        .collect::<Result<_, _>>()
        .expect("positive dims")
}

fn describe(r: &EquivalenceReport) -> Option<String> {
    r.mismatches.first().map(|x| {
        let (a, b, c, d) = x.pair.points();
        format!(
            "{}: A={a} B={b} C={c} D={d} class {:?} proper {}",
            x.dims, x.class, x.proper
        )
    })
}

fn bijection_suite(all: &[GridDims]) -> Result<Suite, Failure> {
    let mut s = Suite::new("threshold-bijection", "distinct segments give distinct functions; t = segments + 2");
    for &d in all {
        let segs = oriented_prime_segments(d);
        let mut seen = HashSet::with_capacity(segs.len());
        let mut injective = true;
        for seg in &segs {
            injective &= seen.insert(threshold_from_segment(d, *seg)?);
        }
        let t = enumerate_threshold(d)?.len();
        s.observed += t as u64;
        s.check(
            injective && t == segs.len() + 2 && count_oriented_prime_segments(d) == segs.len() as u64,
            || format!("{d}: t={t} segments={}", segs.len()),
        );
    }
    Ok(s)
}

fn pair_suites(all: &[GridDims]) -> Result<Vec<Suite>, Failure> {
    let mut uniq = Suite::new("uniqueness", "boundary-true proper 2-threshold functions have one proper pair");
    let mut deco = Suite::new("decomposition", "t2 and q partition identities");
    let mut dist = Suite::new("distance", "interior proper pairs lie within distance one of each other's line");
    let mut class = Suite::new("classification-exhaustive", "geometric class is proper iff the pair is proper");
    let mut shared = Suite::new("classification-shared-endpoint", "shared-endpoint disagreements are head-on-tail");
    let mut recon = Suite::new("reconstruction", "census reconstruction equals direct p");
    let mut quad = Suite::new("convex-quad", "convex-position pairs equal convex-quad proper pairs");
    for &d in all {
        let u = verify_uniqueness(d)?;
        uniq.checked += 1;
        uniq.observed += u.defined_functions;
        if !u.passed() {
            uniq.violations += u.violations.count;
            uniq.first.get_or_insert_with(|| format!("{d}: {:?}", u.violations.examples.first()));
        }

        let r = verify_decomposition(d)?;
        deco.checked += 1;
        deco.observed += r.t2;
        if !r.passed() {
            deco.violations += r.violations.count;
            deco.first.get_or_insert_with(|| format!("{d}: {:?}", r.violations.examples.first()));
        }

        let r = verify_distance_claim(d)?;
        dist.checked += r.checked;
        dist.observed += r.skipped;
        if !r.passed() {
            dist.violations += r.violations.count;
            dist.first.get_or_insert_with(|| format!("{d}: {:?}", r.violations.examples.first()));
        }

        let r = check_classification_exhaustive(d)?;
        class.checked += r.checked;
        class.observed += r.proper;
        class.violations += r.mismatches.len() as u64;
        if let Some(x) = describe(&r) {
            class.first.get_or_insert(x);
        }
        shared.checked += r.checked;
        shared.observed += r.shared_endpoint_anomalies.len() as u64;
        if !r.anomalies_are_head_on_tail() {
            shared.fail(format!("{d}: anomaly without a head on a tail"));
        }

        let p = count_convex_position_pairs(d)?;
        let rp = reconstruct_p(d, u64::MAX)?;
        recon.observed += p;
        recon.check(rp == p as u128, || format!("{d}: reconstructed {rp}, direct {p}"));

        let cq = count_convex_quad_proper_pairs(d)?;
        quad.observed += cq;
        quad.check(cq == p, || format!("{d}: convex-quad {cq}, p {p}"));
    }
    Ok(vec![uniq, deco, dist, class, shared, recon, quad])
}

fn mobius_suites(top: GridDims, samples: u64, seed: u64) -> Result<Vec<Suite>, Failure> {
    let extent = (top.m() + top.n()) as usize;
    let tables = ArithTables::new(extent.max(2 * TRIANGLE_BOX as usize))?;
    let mut ex = Suite::new("mobius-exhaustive", "Moebius prime-point count equals direct count");
    let pts: Vec<GridPoint> = top.points().collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let Ok(t) = LatticeTriangle::new(pts[i], pts[j], pts[k]) else {
                    continue;
                };
                for apex in [pts[i], pts[j], pts[k]] {
                    let a = prime_points_in_triangle_mobius(&t, apex, &tables)?;
                    let b = prime_points_in_triangle_direct(&t, apex)?;
                    ex.observed += a;
                    ex.check(a == b, || format!("{:?} apex {apex}: {a} vs {b}", t));
                }
            }
        }
    }
    let mut sm = Suite::new("mobius-sampled", "Moebius prime-point count equals direct count");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while sm.checked < samples {
        let mut q = || Point::new(rng.gen_range(0..TRIANGLE_BOX), rng.gen_range(0..TRIANGLE_BOX));
        let (a, b, c) = (q(), q(), q());
        let Ok(t) = LatticeTriangle::new(a, b, c) else {
            continue;
        };
        let x = prime_points_in_triangle_mobius(&t, a, &tables)?;
        let y = prime_points_in_triangle_direct(&t, a)?;
        sm.observed += x;
        sm.check(x == y, || format!("{a} {b} {c}: {x} vs {y}"));
    }
    Ok(vec![ex, sm])
}

fn census_suite(cfg: &VerifyConfig) -> Result<Suite, Failure> {
    let (mu, mv) = (cfg.max_m, cfg.max_n);
    let table = CensusTable::build(mu, mv, cfg.census_guard)?;
    let mut rows: Vec<ZCensus> = table.rows().to_vec();
    if cfg.fault == Some(Fault::Census) {
        if let Some(z) = rows.last_mut() {
            z.z1a += 1;
        }
    }
    let mut s = Suite::new("census-partition", "class counts partition Z(u,v); z2b = 0 when gcd(u,v) > 1");
    for z in &rows {
        let direct = census_total_direct(z.u, z.v, cfg.census_guard)?;
        let gcd_ok = gcd_i64(z.u as i64, z.v as i64) == 1 || z.z2b == 0;
        let transposed_ok = match table.get(z.v, z.u) {
            Some(t) => *t == z.transposed() || cfg.fault.is_some(),
            None => true,
        };
        s.observed += z.total();
        s.check(z.is_consistent() && gcd_ok && direct == z.total() && transposed_ok, || {
            format!(
                "{}x{}: z1={} z1a+z1b={} z2={} z2a+z2b+z2c={} direct={}",
                z.u,
                z.v,
                z.z[1],
                z.z1a + z.z1b,
                z.z[2],
                z.z2a + z.z2b + z.z2c,
                direct
            )
        });
    }
    Ok(s)
}

pub fn verify(cfg: &VerifyConfig) -> Result<VerifyReport, Failure> {
    let top = GridDims::new(cfg.max_m, cfg.max_n)?;
    let all = grids(cfg.max_m, cfg.max_n);
    let mut suites = vec![bijection_suite(&all)?];
    suites.extend(pair_suites(&all)?);

    let r = check_classification_sampled(top, cfg.samples, cfg.seed);
    let mut sampled = Suite::new("classification-sampled", "geometric class is proper iff the pair is proper");
    match r {
        Ok(r) => {
            sampled.checked = r.checked;
            sampled.observed = r.proper;
            sampled.violations = r.mismatches.len() as u64;
            sampled.first = describe(&r);
        }
        // a 1x1 grid has no segments to sample
        Err(gridthresh::Error::InvalidArgument(_)) if top.cells() < 2 => {}
        Err(e) => return Err(e.into()),
    }
    suites.push(sampled);
    suites.extend(mobius_suites(top, cfg.samples, cfg.seed)?);
    suites.push(census_suite(cfg)?);

    let mut table = Table::new(vec![
        label("suite"),
        label("invariant"),
        exact("m"),
        exact("n"),
        exact("seed"),
        exact("checked"),
        exact("observed"),
        exact("violations"),
        label("passed"),
        label("first_violation"),
    ]);
    let mut failures = Vec::new();
    for s in suites {
        let passed = s.violations == 0;
        if !passed {
            failures.push(format!(
                "{} ({}): {} violation(s); first: {}",
                s.name,
                s.invariant,
                s.violations,
                s.first.clone().unwrap_or_default()
            ));
        }
        table.push(vec![
            s.name.into(),
            s.invariant.into(),
            cfg.max_m.into(),
            cfg.max_n.into(),
            cfg.seed.into(),
            s.checked.into(),
            s.observed.into(),
            s.violations.into(),
            passed.into(),
            s.first.unwrap_or_default().into(),
        ]);
    }
    Ok(VerifyReport { table, failures })
}

pub struct TableConfig {
    pub kind: Kind,
    pub sweep: Option<Vec<(u32, u32)>>,
    pub bounds_k: Option<(u32, u32)>,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub census_guard: u64,
}

pub fn table(cfg: &TableConfig) -> Result<Table, Failure> {
    match cfg.kind {
        Kind::Convergence => convergence(cfg),
        Kind::Census => census_rows(cfg),
        Kind::Lemmas => lemmas(cfg),
        Kind::Aggregate => aggregate(cfg),
        Kind::Bounds => bounds(cfg),
    }
}

fn convergence(cfg: &TableConfig) -> Result<Table, Failure> {
    let sizes = cfg.sweep.clone().unwrap_or_else(|| default_sweep(16));
    let limits = TableLimits {
        census_guard: cfg.census_guard,
        ..TableLimits::default()
    };
    let rows = convergence_table(&sizes, limits)?;
    let mut table = Table::new(vec![
        exact("m"),
        exact("n"),
        exact("t"),
        exact("q"),
        exact("p"),
        exact("t2"),
        predicted("predicted_t"),
        predicted("predicted_p"),
        ratio("t_ratio"),
        ratio("p_ratio"),
        ratio("t2_over_q"),
        ratio("t2_over_p"),
    ]);
    for r in rows {
        table.push(vec![
            r.m.into(),
            r.n.into(),
            r.t.into(),
            r.q.into(),
            r.p.into(),
            r.t2.into(),
            r.predicted_t.into(),
            r.predicted_p.into(),
            r.t_ratio.into(),
            r.p_ratio.into(),
            r.t2_over_q.into(),
            r.t2_over_p.into(),
        ]);
    }
    Ok(table)
}

fn census_rows(cfg: &TableConfig) -> Result<Table, Failure> {
    let (mu, mv) = (cfg.m.unwrap_or(8), cfg.n.unwrap_or(8));
    let t = CensusTable::build(mu, mv, cfg.census_guard)?;
    let mut table = Table::new(ZCensus::CSV_HEADER.iter().map(|&h| exact(h)).collect());
    for z in t.rows() {
        table.push(z.csv_fields().iter().map(|&v| v.into()).collect());
    }
    Ok(table)
}

fn lemmas(cfg: &TableConfig) -> Result<Table, Failure> {
    let sizes = cfg
        .sweep
        .clone()
        .unwrap_or_else(|| vec![(4, 4), (8, 8), (8, 9), (12, 12), (12, 13), (16, 16), (16, 17)]);
    let rows = lemma_constant_report(&sizes, cfg.census_guard)?;
    let mut table = Table::new(vec![
        exact("u"),
        exact("v"),
        exact("z0"),
        predicted("z0_main"),
        ratio("z0_ratio"),
        exact("z1a"),
        predicted("z1a_main"),
        ratio("z1a_ratio"),
        exact("z1b"),
        predicted("z1b_main"),
        ratio("z1b_ratio"),
        ratio("z1b_band"),
        exact("z2a"),
        ratio("z2a_over_band"),
        exact("z2b"),
        predicted("z2b_main"),
        ratio("z2b_ratio"),
        exact("z2c"),
        predicted("z2c_main"),
        ratio("z2c_ratio"),
        ratio("z34_over_uv"),
    ]);
    for r in rows {
        let z = r.census;
        table.push(vec![
            z.u.into(),
            z.v.into(),
            z.z[0].into(),
            r.z0_main.into(),
            r.z0_ratio().into(),
            z.z1a.into(),
            r.z1a_main.into(),
            r.z1a_ratio().into(),
            z.z1b.into(),
            r.z1b_main.into(),
            r.z1b_ratio().into(),
            r.z1b_band.into(),
            z.z2a.into(),
            r.z2a_over_band.into(),
            z.z2b.into(),
            r.z2b_main.into(),
            r.z2b_ratio().into(),
            z.z2c.into(),
            r.z2c_main.into(),
            r.z2c_ratio().into(),
            r.z34_over_uv.into(),
        ]);
    }
    Ok(table)
}

fn aggregate(cfg: &TableConfig) -> Result<Table, Failure> {
    let sizes = cfg.sweep.clone().unwrap_or_else(|| vec![(8, 8), (12, 12), (16, 16)]);
    let max_u = sizes.iter().map(|s| s.0).max().unwrap_or(1) - 1;
    let max_v = sizes.iter().map(|s| s.1).max().unwrap_or(1) - 1;
    let census = CensusTable::build(max_u, max_v, cfg.census_guard)?;
    let c = Constants::<Ext>::new();
    let mut table = Table::new(vec![
        exact("m"),
        exact("n"),
        exact("opposite_same"),
        predicted("opposite_same_main"),
        ratio("opposite_same_ratio"),
        exact("dominant"),
        predicted("dominant_main"),
        ratio("dominant_ratio"),
        exact("boundary_one"),
        predicted("boundary_one_main"),
        ratio("boundary_one_ratio"),
    ]);
    for (m, n) in sizes {
        let dims = GridDims::new(m, n)?;
        let a = aggregate_from_table(&census, dims)?;
        let mn4 = Ext::from_u64(m as u64 * n as u64).powi(4);
        let main = |num, den| (c.over_pi4(num, den) * mn4).to_f64();
        table.push(vec![
            m.into(),
            n.into(),
            a.opposite_same.into(),
            main(1, 24).into(),
            a.opposite_same_ratio.into(),
            a.dominant.into(),
            main(31, 24).into(),
            a.dominant_ratio.into(),
            a.boundary_one.into(),
            main(3, 4).into(),
            a.boundary_one_ratio.into(),
        ]);
    }
    Ok(table)
}

fn bounds(cfg: &TableConfig) -> Result<Table, Failure> {
    let (lo, hi) = cfg.bounds_k.unwrap_or((2, 40));
    let grid = cfg.m.zip(cfg.n);
    let mut table = Table::new(vec![
        exact("k"),
        exact("trivial"),
        exact("improved"),
        label("improved_is_smaller"),
        ratio("improved_over_trivial"),
        predicted("trivial_main"),
        predicted("improved_main"),
    ]);
    for k in lo..=hi {
        let b = k_threshold_bounds(k)?;
        let q = b.improved_over_trivial();
        let (tm, im) = match grid {
            Some((m, n)) => {
                let (a, b) = b.main_terms(m, n);
                (Some(a), Some(b))
            }
            None => (None, None),
        };
        table.push(vec![
            k.into(),
            Cell::Text(b.trivial.to_string()),
            Cell::Text(b.improved.to_string()),
            b.improved_is_smaller.into(),
            q.into(),
            tm.into(),
            im.into(),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_one_by_one() {
        let t = count(1, 1, &[Field::T, Field::Q, Field::P, Field::T2], 4096).unwrap();
        let v = t.to_json();
        assert_eq!(v[0]["t"], 2);
        assert_eq!(v[0]["p"], 0);
        assert_eq!(v[0]["t2"], 2);
        assert_eq!(v[0]["q"], 0);
    }
}
