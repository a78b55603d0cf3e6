//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if any fail.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use clap::Parser;
use hammaps::cayley::{self, CayleyDatum};
use hammaps::classify::{self, CensusJson, Certification, Existence, SearchConfig};
use hammaps::cli::{self, Cli, ReportConfig};
use hammaps::ffield::{Field, FieldElement};
use hammaps::nt;
use hammaps::omap::{CanonicalCode, MapType, OrientedMap, PetrieConvention};

type Check = Result<String, String>;
type Reports = [(usize, u64, classify::HammingReport, Duration)];
type GoldenRow = (usize, u64, (usize, usize, usize), u64, usize);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gf(q: u64) -> Field {
    Field::of_order(q).expect("prime power")
}

fn code(d: usize, w: &FieldElement) -> CanonicalCode {
    cayley::hamming_map(d, w)
        .expect("valid generator")
        .canonical_code()
        .clone()
}

/// `(d, q)` with `q^d · d(q−1) <= 40000` for a spread of fields.
fn test_matrix() -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9, 13, 16, 25] {
        for d in 1.. {
            let arcs = q.pow(d as u32) * d as u64 * (q - 1);
            if arcs > 40_000 {
                break;
            }
            out.push((d, q));
        }
    }
    out
}

fn golden_table() -> Check {
    let rows: [GoldenRow; 13] = [
        (2, 2, (4, 2, 4), 0, 8),
        (2, 3, (4, 4, 6), 1, 36),
        (2, 4, (6, 6, 4), 9, 96),
        (2, 5, (8, 8, 10), 26, 200),
        (2, 7, (12, 12, 14), 99, 588),
        (3, 2, (6, 3, 4), 1, 24),
        (3, 3, (9, 6, 6), 19, 162),
        (3, 4, (9, 9, 4), 81, 576),
        (4, 2, (8, 4, 4), 5, 64),
        (4, 3, (8, 8, 6), 82, 648),
        (5, 2, (10, 5, 4), 17, 160),
        (6, 2, (12, 6, 4), 49, 384),
        (2, 25, (48, 48, 10), 6876, 30000),
    ];
    let start = Instant::now();
    for (d, q, (m, n, l), genus, aut) in rows {
        let args = [
            "hammaps".to_string(),
            "report".into(),
            d.to_string(),
            q.to_string(),
        ];
        let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
        let cfg = ReportConfig::from_cli(&cli, None).map_err(|e| e.to_string())?;
        let out = cli::run(&cli, &cfg).map_err(|e| format!("report {d} {q}: {e}"))?;
        let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let got = (
            serde_json::from_value::<MapType>(v["type"].clone()).map_err(|e| e.to_string())?,
            v["genus"].as_u64(),
            v["aut_order"].as_u64(),
        );
        let want = (MapType { m, n, l }, Some(genus), Some(aut as u64));
        ensure(got == want, || {
            format!("H({d},{q}): got {got:?}, want {want:?}")
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("13 rows in {:.2}s", t.as_secs_f64()))
}

const CENSUS_CASES: [(usize, u64, usize, u64); 13] = [
    (1, 3, 1, 300),
    (1, 4, 1, 300),
    (1, 5, 2, 300),
    (1, 7, 2, 300),
    (2, 2, 1, 300),
    (2, 3, 1, 300),
    (2, 4, 1, 300),
    (2, 5, 2, 300),
    (3, 3, 1, 300),
    (1, 6, 0, 60),
    (3, 2, 2, 300),
    (2, 6, 0, 1800),
    (2, 7, 2, 1800),
];

fn enumeration_counts(reports: &Reports) -> Check {
    let mut parts = Vec::new();
    for ((d, q, want, limit), (_, _, r, t)) in CENSUS_CASES.iter().zip(reports) {
        let json = CensusJson::new(&r.census, r.expected_count);
        ensure(json.certified_by == Certification::Search, || {
            "not search-certified".into()
        })?;
        ensure(r.census.len() == *want, || {
            format!("H({d},{q}): {} maps, want {want}", r.census.len())
        })?;
        ensure(*t < Duration::from_secs(*limit), || {
            format!("H({d},{q}) took {t:?}")
        })?;
        parts.push(format!("H({d},{q})={}", r.census.len()));
    }
    Ok(parts.join(" "))
}

fn oracle_equivalence(reports: &Reports) -> Check {
    let mut checked = 0;
    for (d, q, r, _) in reports {
        if *q == 2 {
            continue;
        }
        let census: BTreeSet<&CanonicalCode> = r.census.codes().into_iter().collect();
        let constructed: BTreeSet<CanonicalCode> = match Field::of_order(*q) {
            Ok(f) => f.generators().iter().map(|w| code(*d, w)).collect(),
            Err(_) => BTreeSet::new(),
        };
        let constructed: BTreeSet<&CanonicalCode> = constructed.iter().collect();
        let divergences = census.symmetric_difference(&constructed).count();
        ensure(divergences == 0, || {
            format!("H({d},{q}): {divergences} divergences")
        })?;
        ensure(r.consistent, || format!("H({d},{q}) report inconsistent"))?;
        checked += 1;
    }
    Ok(format!("{checked} cases, 0 divergences"))
}

fn frobenius_classes() -> Check {
    let f = gf(25);
    let gens = f.generators();
    ensure(gens.len() == 8, || format!("{} generators", gens.len()))?;
    let classes = f.generator_classes();
    for d in [1usize, 2] {
        let codes: Vec<CanonicalCode> = gens.iter().map(|w| code(d, w)).collect();
        let mut pairs = 0;
        for i in 0..8 {
            for j in i + 1..8 {
                let same_class = classes.class_of(&gens[i]) == classes.class_of(&gens[j]);
                let iso = codes[i] == codes[j];
                ensure(same_class == iso, || {
                    format!(
                        "d={d}: {} vs {}: iso {iso}, same class {same_class}",
                        gens[i], gens[j]
                    )
                })?;
                pairs += 1;
            }
        }
        let distinct: HashSet<&CanonicalCode> = codes.iter().collect();
        ensure(pairs == 28 && distinct.len() == 4, || {
            format!("d={d}: {pairs} pairs, {} classes", distinct.len())
        })?;
    }
    Ok("d=1,2: 28 pairs each, 4 classes".into())
}

fn invariant_suites() -> Check {
    let mut maps = 0;
    for (d, q) in test_matrix() {
        let (p, _) = nt::prime_power(q).unwrap();
        for w in gf(q).generators() {
            let m = cayley::hamming_map(d, &w).map_err(|e| e.to_string())?;
            let t = m.map_type().ok_or("non-uniform type")?;
            let alt = m.type_profile(PetrieConvention::LeftFirst).uniform();
            ensure(alt == Some(t), || {
                format!("H({d},{w}) Petrie conventions differ")
            })?;
            // Petrie length: 2p, except the single edge H(1,2) where α(s) − s = 0
            let want_l = if (d, q) == (1, 2) { 2 } else { 2 * p as usize };
            ensure(t.l == want_l, || format!("H({d},{w}) l = {}", t.l))?;
            let pred = cayley::cayley_prediction(&CayleyDatum::hamming(d, &w).unwrap());
            ensure(pred.petrie_length as usize == t.l, || {
                format!("H({d},{w}) Petrie prediction")
            })?;
            let minus_alpha_fixed_point_free = q > 3 || (q == 3 && d % 2 == 0);
            ensure(
                pred.face_valency.is_some() == minus_alpha_fixed_point_free,
                || format!("H({d},{w}) −α fixed points"),
            )?;
            if let Some(fv) = pred.face_valency {
                ensure(fv as usize == t.m, || {
                    format!("H({d},{w}) face valency {fv} vs {}", t.m)
                })?;
            }
            ensure(t == cayley::predicted_type(d, q).unwrap(), || {
                format!("H({d},{w}) type {t}")
            })?;
            ensure(m.genus().ok() == cayley::predicted_genus(d, q).ok(), || {
                format!("H({d},{w}) genus")
            })?;
            let reg = m.is_orientably_regular();
            ensure(reg.regular && reg.aut_order == m.arc_count(), || {
                format!("H({d},{w}) not regular")
            })?;
            maps += 1;
        }
        let sum = cayley::matrix_power_sum(d, &gf(q).default_generator()).unwrap();
        let ok = if q == 2 {
            sum.rows().iter().flatten().all(|&x| x == 1)
        } else {
            sum.is_zero()
        };
        ensure(ok, || format!("power sum for ({d},{q}): {sum:?}"))?;
    }

    let mut scans = 0;
    for (d, q) in test_matrix() {
        if q.pow(d as u32) * d as u64 * (q - 1) > 10_000 {
            continue;
        }
        for w in gf(q).generators() {
            let s = cayley::scan_orders(d, &w, 10_000).map_err(|e| e.to_string())?;
            ensure(s.involution_rule_holds, || {
                format!("involutions in G({d},{q}), ω = {w}")
            })?;
            ensure(s.order_n_rule_holds || q == 2, || {
                format!("order-n elements in G({d},{q})")
            })?;
            scans += 1;
        }
    }

    let mut algebra = 0;
    let f25 = gf(25);
    let sample25 = [f25.generators()[0].clone(), f25.generators()[5].clone()];
    let cases: Vec<(usize, Vec<FieldElement>)> = vec![
        (1, gf(5).generators()),
        (2, gf(5).generators()),
        (2, sample25.to_vec()),
    ];
    for (d, ws) in cases {
        for w in ws {
            let m = cayley::hamming_map(d, &w).unwrap();
            let n = m.uniform_valency().unwrap() as i64;
            let units: Vec<i64> = nt::units(n as u64).into_iter().map(|j| j as i64).collect();
            ensure(m.mirror().mirror().to_text() == m.to_text(), || {
                "mirror is not an involution".into()
            })?;
            let inv = w.inv().unwrap();
            ensure(m.mirror().canonical_code() == &code(d, &inv), || {
                format!("mirror of H({d},{w}) is not H({d},{inv})")
            })?;
            for &j in &units {
                let hj = m.wilson(j).unwrap();
                let wj = w.pow(j).unwrap();
                ensure(hj.canonical_code() == &code(d, &wj), || {
                    format!("H_{j}(H({d},{w})) is not H({d},{wj})")
                })?;
                ensure(
                    hj.is_orientably_regular().aut_order == m.arc_count(),
                    || "automorphism orders differ".into(),
                )?;
            }
            for &j in units.iter().take(4) {
                for &k in units.iter().rev().take(4) {
                    let twice = m.wilson(j).unwrap().wilson(k).unwrap();
                    ensure(
                        twice.to_text() == m.wilson(j * k % n).unwrap().to_text(),
                        || format!("H_{k} H_{j} != H_{}", j * k % n),
                    )?;
                }
            }
            ensure(m.wilson(n - 1).unwrap().is_isomorphic(&m.mirror()), || {
                "H_{-1} is not the mirror".into()
            })?;
            algebra += 1;
        }
    }
    Ok(format!(
        "{maps} maps, {scans} order scans, {algebra} Wilson/mirror checks"
    ))
}

fn reflexibility() -> Check {
    let mut count = 0;
    for (d, q) in test_matrix() {
        for w in gf(q).generator_classes().representatives() {
            let m = cayley::hamming_map(d, &w).unwrap();
            let want = q <= 4;
            ensure(m.reflexible() == want, || {
                format!("H({d},{w}) reflexible = {}", !want)
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} maps over {} (d,q) pairs",
        test_matrix().len()
    ))
}

fn galois() -> Check {
    let degrees: Vec<u64> = [2u64, 3, 4, 5, 7, 25]
        .iter()
        .map(|&q| classify::galois_structure(q).map(|g| g.degree))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(degrees == [1, 1, 1, 2, 2, 4], || {
        format!("degrees {degrees:?}")
    })?;
    let g = classify::galois_structure(25).unwrap();
    ensure(g.quotient == [2, 2], || {
        format!("quotient {:?}", g.quotient)
    })?;
    for (d, q) in [(1usize, 5u64), (2, 5), (2, 25)] {
        ensure(classify::galois_orbit_check(d, q).unwrap(), || {
            format!("orbit check ({d},{q})")
        })?;
    }
    Ok("degrees 1,1,1,2,2,4; Z*_24/<5> = C2 x C2; orbits (1,5),(2,5),(2,25)".into())
}

fn merged() -> Check {
    let cfg = SearchConfig::default();
    for (d, q, k) in [(2usize, 4u64, vec![2usize]), (2, 5, vec![2])] {
        let v = classify::merged_existence(d, q, &k, &cfg).map_err(|e| e.to_string())?;
        ensure(
            v.verdict == Existence::None && v.certified_by == Certification::Search,
            || format!("({d},{q},{k:?}): {v:?}"),
        )?;
    }
    let v = classify::merged_existence(2, 4, &[1, 2], &cfg).map_err(|e| e.to_string())?;
    ensure(v.verdict == Existence::ExistsComplete, || {
        format!("{:?}", v.verdict)
    })?;
    let w: &OrientedMap = v.witness.as_ref().ok_or("no witness")?;
    let complete = w.vertex_count() == 16
        && w.underlying_adjacency()
            .unwrap()
            .values()
            .all(|ns| ns.len() == 15);
    ensure(complete && w.is_orientably_regular().regular, || {
        "witness is not a regular K_16 map".into()
    })?;
    let cited = classify::merged_existence(3, 4, &[2], &cfg).map_err(|e| e.to_string())?;
    ensure(cited.certified_by == Certification::Theorem, || {
        "parity case not flagged as theorem-cited".into()
    })?;
    let json = serde_json::to_value(&cited).unwrap();
    ensure(json["certified_by"] == "theorem", || {
        "theorem flag missing from JSON".into()
    })?;
    Ok("(2,4,{2}), (2,5,{2}) none by search; (2,4,{1,2}) K_16; (3,4,{2}) theorem-cited".into())
}

fn main() {
    let cfg = SearchConfig::default();
    let reports: Result<Vec<_>, String> = CENSUS_CASES
        .iter()
        .map(|&(d, q, _, _)| {
            let start = Instant::now();
            let r =
                classify::classify_hamming(d, q, &cfg).map_err(|e| format!("H({d},{q}): {e}"))?;
            Ok((d, q, r, start.elapsed()))
        })
        .collect();

    let census_check = |f: fn(&Reports) -> Check| match &reports {
        Ok(r) => f(r),
        Err(e) => Err(e.clone()),
    };
    let results: Vec<(&str, Check)> = vec![
        ("1 golden table", golden_table()),
        ("2 enumeration counts", census_check(enumeration_counts)),
        (
            "3 oracle/construction equivalence",
            census_check(oracle_equivalence),
        ),
        ("4 Frobenius classes over F_25", frobenius_classes()),
        ("5 invariant suites", invariant_suites()),
        ("6 reflexibility", reflexibility()),
        ("7 Galois structure", galois()),
        ("8 merged graphs", merged()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", results.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", results.len());
}
