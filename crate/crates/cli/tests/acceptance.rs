//! Acceptance suite: one test per criterion, exact arithmetic throughout.
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion summary lines.

#![allow(clippy::needless_range_loop)]

use std::process::Command;
use std::time::{Duration, Instant};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use plumbing_census::cycles::aligned_word;
use plumbing_census::*;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn tuples(lo: i64, hi: i64, len: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (lo..=hi).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

fn sweep(lo: i64, hi: i64, lens: std::ops::RangeInclusive<usize>) -> Vec<Vec<i64>> {
    lens.flat_map(|n| tuples(lo, hi, n)).collect()
}

fn report(criterion: u32, elapsed: Duration, detail: &str) {
    println!(
        "criterion {criterion:02}: PASS in {:.2}s -- {detail}",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_01_appendix_sweep() {
    let start = Instant::now();
    let mut checked = 0usize;
    for t in sweep(2, 6, 2..=6) {
        let r = verify_appendix(&t).unwrap();
        assert!(r.all_hold(), "{t:?}: {r:?}");
        if t[0] >= 3 {
            assert!(
                matches!(r.growth, LemmaCheck::Holds { .. }),
                "growth gate wrong for {t:?}"
            );
        } else {
            assert!(matches!(r.growth, LemmaCheck::NotApplicable { .. }));
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    report(1, elapsed, &format!("four lemmas hold on {checked} tuples"));
}

#[test]
fn criterion_02_determinant_identity() {
    let start = Instant::now();
    let mut checked = 0usize;
    for t in sweep(2, 6, 2..=6) {
        assert!(convergents(&t).unwrap().determinant().is_one(), "{t:?}");
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    report(2, elapsed, &format!("p'q - q'p = 1 on {checked} tuples"));
}

/// Independent Stern-Brocot oracle: enumerate the tessellation vertices by
/// mediant subdivision, order them around the circle by exact value
/// comparison, and pick bypass answers by index arithmetic.
mod farey_oracle {
    use plumbing_census::{Side, Slope};
    use std::collections::BTreeMap;

    fn canon(mer: i64, lon: i64) -> (i64, i64) {
        if mer < 0 || (mer == 0 && lon < 0) {
            (-mer, -lon)
        } else {
            (mer, lon)
        }
    }

    fn subdivide(u: (i64, i64), v: (i64, i64), depth: usize, out: &mut Vec<(i64, i64)>) {
        if depth == 0 {
            return;
        }
        let m = (u.0 + v.0, u.1 + v.1);
        out.push(canon(m.0, m.1));
        subdivide(u, m, depth - 1, out);
        subdivide(m, v, depth - 1, out);
    }

    pub struct Circle {
        /// canonical vectors in circular order: infinity, then decreasing value
        pub points: Vec<(i64, i64)>,
        pub index: BTreeMap<(i64, i64), usize>,
    }

    pub fn build(depth: usize) -> Circle {
        let mut raw = vec![canon(1, 0), canon(1, 1), canon(0, 1), canon(1, -1)];
        // the four level-zero arcs of the tessellation, oriented so mediants
        // land inside them
        subdivide((1, 0), (1, 1), depth, &mut raw);
        subdivide((1, 1), (0, 1), depth, &mut raw);
        subdivide((0, -1), (1, -1), depth, &mut raw);
        subdivide((1, -1), (1, 0), depth, &mut raw);
        raw.sort_by(|a, b| {
            // infinity first, then by decreasing slope value
            match (a.0 == 0, b.0 == 0) {
                (true, true) => std::cmp::Ordering::Equal,
                (true, false) => std::cmp::Ordering::Less,
                (false, true) => std::cmp::Ordering::Greater,
                (false, false) => {
                    let lhs = b.1 as i128 * a.0 as i128;
                    let rhs = a.1 as i128 * b.0 as i128;
                    lhs.cmp(&rhs)
                }
            }
        });
        raw.dedup();
        let index = raw.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Circle { points: raw, index }
    }

    impl Circle {
        fn pos(&self, s: Slope) -> usize {
            self.index[&(s.mer(), s.lon())]
        }

        /// Farey neighbors of `s` within the vertex set, as circle indices.
        pub fn neighbors(&self, s: Slope) -> Vec<usize> {
            self.points
                .iter()
                .enumerate()
                .filter(|(_, &(m, l))| {
                    (m as i128 * s.lon() as i128 - s.mer() as i128 * l as i128).abs() == 1
                })
                .map(|(i, _)| i)
                .collect()
        }

        /// Nearest-to-r neighbor of s inside the half-open arc.
        pub fn bypass(&self, s: Slope, r: Slope, side: Side, nbs: &[usize]) -> Slope {
            let n = self.points.len();
            let (start, end) = match side {
                Side::Front => (self.pos(r), self.pos(s)),
                Side::Back => (self.pos(s), self.pos(r)),
            };
            let span = (end + n - start) % n;
            let mut best: Option<usize> = None; // delta from start
            for &i in nbs {
                let delta = (i + n - start) % n;
                if delta == 0 || delta > span {
                    continue;
                }
                best = Some(match (best, side) {
                    (None, _) => delta,
                    (Some(b), Side::Front) => b.min(delta),
                    (Some(b), Side::Back) => b.max(delta),
                });
            }
            let delta = best.expect("oracle found no candidate");
            let (mer, lon) = self.points[(start + delta) % n];
            Slope::new(mer, lon).unwrap()
        }
    }
}

#[test]
fn criterion_03_farey_oracle_equivalence() {
    let start = Instant::now();
    let circle = farey_oracle::build(14);

    let mut grid = vec![Slope::infinity()];
    for mer in 1..=12i64 {
        for lon in -12..=12i64 {
            if num::integer::gcd(mer, lon.abs()) == 1 {
                grid.push(Slope::new(mer, lon).unwrap());
            }
        }
    }
    // every grid slope is a vertex at depth 14
    for &s in &grid {
        assert!(
            circle.index.contains_key(&(s.mer(), s.lon())),
            "{s} missing from depth-14 vertex set"
        );
    }

    let mut pairs = 0usize;
    for &s in &grid {
        let nbs = circle.neighbors(s);
        for &r in &grid {
            if r == s {
                continue;
            }
            for side in [Side::Front, Side::Back] {
                let expected = circle.bypass(s, r, side, &nbs);
                let got = bypass_slope(s, r, side).unwrap();
                assert_eq!(got, expected, "s={s} r={r} side={side:?}");
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    report(
        3,
        elapsed,
        &format!("oracle agreement on {pairs} attachments"),
    );
}

#[test]
fn criterion_04_edge_rounding_formula() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(41);
    let mut checked = 0usize;
    while checked < 1000 {
        let k = rng.gen_range(1..=8u32);
        let a = rng.gen_range(1..=30i64);
        let b = rng.gen_range(-30..=30i64);
        let t = rng.gen_range(-30..=30i64);
        if num::integer::gcd(a, b.abs()) != 1 || num::integer::gcd(a, t.abs()) != 1 {
            continue;
        }
        let s0 = Slope::new(a, b).unwrap();
        let s1 = Slope::new(a, t).unwrap();
        let got = edge_round_slope(k, s0, s1).unwrap();
        let expected = rat(k as i64 * b + k as i64 * t + 1, k as i64 * a);
        assert_eq!(rat(got.lon(), got.mer()), expected);
        checked += 1;
    }
    let elapsed = start.elapsed();
    report(
        4,
        elapsed,
        "formula matches direct rational evaluation on 1000 inputs",
    );
}

fn criterion5_specs() -> Vec<PlumbingSpec> {
    let mut specs = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        for a1 in 3..=4i64 {
            for rest in sweep(2, 4, 1..=2) {
                let mut a = vec![a1];
                a.extend(&rest);
                for z in sweep(2, 4, 1..=2) {
                    specs.push(PlumbingSpec::new(sign, a.clone(), z).unwrap());
                }
            }
        }
    }
    specs
}

#[test]
fn criterion_05_census_formulas() {
    let start = Instant::now();
    let specs = criterion5_specs();
    for spec in &specs {
        let r = census(spec, &CensusOptions::default()).unwrap();
        let a_product: u64 = spec.a().iter().map(|&x| (x - 1) as u64).product();
        let z_product: u64 = spec.z().iter().map(|&x| (x - 1) as u64).product();
        let torsion_product: u64 = spec.z()[0] as u64
            * spec.z()[1..]
                .iter()
                .map(|&x| (x - 1) as u64)
                .product::<u64>();
        assert_eq!(r.counts.min_twisting, a_product * z_product, "{spec}");
        assert_eq!(r.counts.per_torsion, torsion_product, "{spec}");
        let expected_ng = match spec.sign() {
            Sign::Plus => r.counts.min_twisting,
            Sign::Minus => r.counts.min_twisting + r.counts.per_torsion,
        };
        assert_eq!(r.counts.no_giroux, expected_ng, "{spec}");
        for l in 0..=2 {
            let n = enumerate_tight(spec, l).unwrap().len() as u64;
            let expected = if l == 0 {
                r.counts.min_twisting
            } else {
                r.counts.per_torsion
            };
            assert_eq!(n, expected, "{spec} at l={l}");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    report(
        5,
        elapsed,
        &format!("products and enumerations agree on {} specs", specs.len()),
    );
}

#[test]
fn criterion_06_honda_cross_check() {
    let start = Instant::now();
    let mut checked = 0usize;
    for t in sweep(2, 6, 2..=6) {
        let mut dec = t.clone();
        *dec.last_mut().unwrap() -= 1;
        let product: u64 = t.iter().map(|&x| (x - 1) as u64).product();
        assert_eq!(honda_count(&dec).unwrap(), product, "{t:?}");

        let rev: Vec<i64> = t.iter().rev().copied().collect();
        let expected: u64 = t[0] as u64 * t[1..].iter().map(|&x| (x - 1) as u64).product::<u64>();
        assert_eq!(honda_count(&rev).unwrap(), expected, "{t:?}");
        checked += 1;
    }
    let elapsed = start.elapsed();
    report(
        6,
        elapsed,
        &format!("both count identities on {checked} tuples"),
    );
}

#[test]
fn criterion_07_worked_instance() {
    let start = Instant::now();
    let spec = PlumbingSpec::new(Sign::Minus, vec![3, 2], vec![2]).unwrap();
    let opts = CensusOptions {
        resolve_embeddable: true,
        ..Default::default()
    };
    let r = census(&spec, &opts).unwrap();
    assert_eq!(r.counts.min_twisting, 2);
    assert_eq!(r.counts.per_torsion, 2);
    assert_eq!(r.counts.no_giroux, 4);

    let pi_family: Vec<_> = r.structures.iter().filter(|d| d.torsion == 1).collect();
    assert_eq!(pi_family.len(), 2);
    for d in &pi_family {
        assert_eq!(d.twisting, Twisting::Pi(1));
        assert_eq!(d.fillability, Fillability::SteinIfEmbeddable);
    }

    // the verdict in the report is exactly what the Kirby engine says
    let chain = CyclicChain::new(vec![3, 2], Sign::Minus).unwrap();
    let direct = is_embeddable(&chain, opts.max_k).unwrap();
    assert_eq!(r.embeddable, Some(direct));
    let elapsed = start.elapsed();
    report(
        7,
        elapsed,
        "no-torsion total 4 = 2 + 2 with resolved conditional tag",
    );
}

#[test]
fn criterion_08_kirby_engine() {
    let start = Instant::now();
    let mut duals = 0usize;
    for word in sweep(2, 5, 1..=5) {
        if !word.iter().any(|&x| x >= 3) {
            continue;
        }
        for sign in [Sign::Plus, Sign::Minus] {
            let chain = CyclicChain::new(word.clone(), sign).unwrap();
            let dual = dual_cycle(&chain).unwrap();
            let (_, c0) = monodromy(&chain).unwrap();
            let (_, c1) = monodromy(&dual).unwrap();
            assert_eq!(c0.trace.abs(), c1.trace.abs(), "{word:?}");
            assert_eq!(dual_cycle(&dual).unwrap(), chain, "{word:?}");
            duals += 1;
        }
    }

    let mut moves = 0usize;
    for len in 2..=6usize {
        for word in tuples(0, 6, len) {
            let chain = CyclicChain::new(word, Sign::Plus).unwrap();
            for edge in 0..len {
                let up = blow_up(&chain, edge, BlowupStyle::Internal).unwrap();
                assert_eq!(blow_down(&up, edge + 1).unwrap(), chain);
                moves += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    report(
        8,
        elapsed,
        &format!("{duals} dual involutions, {moves} move inversions"),
    );
}

#[test]
fn criterion_09_embeddability() {
    let start = Instant::now();
    let mut certified = 0usize;
    for k in 0..=5usize {
        for node in blowup_census(k, 8).unwrap() {
            let d = node.chain.framings().to_vec();
            // the sum-pruning rule never fires on a true positive
            let sum: i64 = d.iter().sum();
            assert!(sum >= 3 * (d.len() as i64 - 2), "{d:?} would be pruned");
            match find_dominating_blowup(&d, 8).unwrap() {
                Embeddability::Embeddable { witness } => {
                    // equal length and entry sum force the witness to be the
                    // blowup itself
                    assert_eq!(witness.blowup, node.chain, "{d:?}");
                    let aligned = aligned_word(&witness.blowup, witness.offset, witness.reflected);
                    assert!(aligned.iter().zip(&d).all(|(c, d)| c <= d));
                }
                other => panic!("{d:?} not certified: {other:?}"),
            }
            certified += 1;
        }
    }
    assert!(!find_dominating_blowup(&[1, 1, 0], 8)
        .unwrap()
        .is_embeddable());
    let elapsed = start.elapsed();
    report(
        9,
        elapsed,
        &format!("{certified} blowups self-certified, (1,1,0) refused"),
    );
}

#[test]
fn criterion_10_legendrian_invariants() {
    let start = Instant::now();
    // the surgered chain front: K_1 is the longitude, K_2..K_m standard unknots
    let k1 = invariants(&FrontDiagram::longitudinal(0, 0, 0)).unwrap();
    assert_eq!((k1.tb, k1.rot), (0, 0));
    for _ in 2..=4 {
        let ki = invariants(&FrontDiagram::standard_unknot()).unwrap();
        assert_eq!((ki.tb, ki.rot), (-1, 0));
    }
    // z_1 = 2: two stabilization choices on K_1
    let vs = enumerate_rotation_vectors(&[(0, -2)]).unwrap();
    assert_eq!(vs.len(), 2);
    assert_eq!(vs, vec![RotationVector(vec![-1]), RotationVector(vec![1])]);
    let elapsed = start.elapsed();
    report(
        10,
        elapsed,
        "tb(K_1)=0, tb(K_i)=-1, r=0; z_1=2 gives 2 choices",
    );
}

#[test]
fn criterion_11_d3_sanity() {
    let start = Instant::now();
    let empty = FillingData::new(vec![], 0).unwrap();
    assert_eq!(d3(&empty, &RotationVector(vec![])).unwrap(), rat(-1, 2));

    let l = FillingData::new(vec![vec![-2]], 0).unwrap();
    assert_eq!(d3(&l, &RotationVector(vec![0])).unwrap(), rat(-1, 4));

    // invariance under simultaneous unimodular change of basis
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0usize;
    while checked < 40 {
        let n = if checked.is_multiple_of(2) { 2 } else { 3 };
        let mut l = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let e = rng.gen_range(-3..=3);
                l[i][j] = e;
                l[j][i] = e;
            }
        }
        let v = RotationVector((0..n).map(|_| rng.gen_range(-2..=2)).collect());
        let f = FillingData::new(l.clone(), 0).unwrap();
        let base = match d3(&f, &v) {
            Ok(d) => d,
            Err(_) => continue,
        };
        // P = product of random shears
        let mut p: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        for _ in 0..5 {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            let c = rng.gen_range(-2..=2i64);
            for col in 0..n {
                p[i][col] += c * p[j][col];
            }
        }
        let mut lp = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                lp[i][j] = (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .map(|(r, c)| p[r][i] * l[r][c] * p[c][j])
                    .sum();
            }
        }
        let vp = RotationVector(
            (0..n)
                .map(|i| (0..n).map(|r| p[r][i] * v.0[r]).sum())
                .collect(),
        );
        assert_eq!(d3(&FillingData::new(lp, 0).unwrap(), &vp).unwrap(), base);
        checked += 1;
    }
    let elapsed = start.elapsed();
    report(11, elapsed, "normalizations and unimodular invariance hold");
}

fn grid_args() -> Vec<&'static str> {
    vec![
        "census",
        "--grid",
        "--a-entries",
        "2..4",
        "--a-len",
        "2..3",
        "--z-entries",
        "2..4",
        "--z-len",
        "1..2",
        "--signs",
        "+,-",
    ]
}

fn run_cli(args: &[&str]) -> (Vec<u8>, Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_plumbing-census"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.stderr, out.status.code().unwrap_or(-1))
}

#[test]
fn criterion_12_cli_determinism() {
    let start = Instant::now();
    for format in ["json", "tsv"] {
        let mut args = grid_args();
        args.extend(["--format", format]);
        let (first, err1, code1) = run_cli(&args);
        let (second, err2, code2) = run_cli(&args);
        assert_eq!(code1, 0);
        assert_eq!(code2, 0);
        assert!(err1.is_empty() && err2.is_empty());
        assert_eq!(first, second, "{format} output not byte-identical");

        let golden_path = format!(
            "{}/tests/golden/criterion5_grid.{format}",
            env!("CARGO_MANIFEST_DIR")
        );
        let golden = std::fs::read(&golden_path).expect("golden file present");
        assert_eq!(first, golden, "{format} output differs from {golden_path}");
    }

    // the JSON report re-parses into the emitting data model
    let mut args = grid_args();
    args.extend(["--format", "json"]);
    let (json, _, _) = run_cli(&args);
    let parsed: plumbing_census_cli::GridReport =
        serde_json::from_slice(&json).expect("grid report parses");
    assert_eq!(parsed.rows.len(), 576);
    assert_eq!(parsed.summary.rows, 576);
    let reserialized = {
        let mut s = serde_json::to_string_pretty(&parsed).unwrap();
        s.push('\n');
        s
    };
    assert_eq!(reserialized.into_bytes(), json);

    // per-spec counts in the grid match the library
    for row in &parsed.rows {
        let expected = census(&row.spec, &CensusOptions::default()).unwrap();
        assert_eq!(row.counts, expected.counts);
    }
    let elapsed = start.elapsed();
    report(
        12,
        elapsed,
        "grid output byte-stable, golden-matched, re-parseable",
    );
}
