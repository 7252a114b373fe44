//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values come from the transcribed tables in the CLI's
//! golden directory.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use soplr::classify::{isotopism_count, main_class_levels, ExtensionMethod};
use soplr::enumeration::{
    count_plr_by_size, count_sor_by_size, count_sor_exact_symbols, enumerate_sor, sigma_closed_form,
    sigma_near_full_printed, sor_total_formula,
};
use soplr::groebner::{buchberger, hilbert_function, standard_monomials, variety, BoolIdeal, TermOrder};
use soplr::hamming::{closed_form_count, HammingGraph, IndependenceOptions};
use soplr::ideals::{
    ideal_corner_b, ideal_corner_c, ideal_extension, ideal_isotopism, ideal_plr, ideal_sor, PlrEncoding,
};
use soplr::strategies::{corner_b_blocks, corner_pairs, sor_distribution_direct_sum, sor_distribution_stratified};
use soplr::{PartialLatinRectangle, SizeDistribution};

type Outcome = Result<String, String>;

/// `(r, s, n) -> (counts by size, total if listed)`.
type Golden = BTreeMap<(usize, usize, usize), (Vec<BigUint>, Option<BigUint>)>;

fn golden(name: &str) -> Golden {
    let path = format!("{}/../cli/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let mut table = Golden::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let key = (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap());
        let entry = table.entry(key).or_default();
        let value: BigUint = f[4].parse().unwrap();
        match f[3].parse::<i64>().unwrap() {
            -1 => entry.1 = Some(value),
            m => {
                assert_eq!(m as usize, entry.0.len(), "{name}: rows out of order");
                entry.0.push(value);
            }
        }
    }
    table
}

fn expect_eq<T: PartialEq + std::fmt::Display>(what: &str, expected: &T, got: &T) -> Result<(), String> {
    if expected == got {
        Ok(())
    } else {
        Err(format!("{what}: expected {expected}, got {got}"))
    }
}

fn expect_column(key: (usize, usize, usize), entry: &(Vec<BigUint>, Option<BigUint>), got: &SizeDistribution, how: &str) -> Result<(), String> {
    let (r, s, n) = key;
    for (m, want) in entry.0.iter().enumerate() {
        expect_eq(&format!("{how} {r}.{s}.{n} m={m}"), want, &got.get(m))?;
    }
    if let Some(total) = &entry.1 {
        expect_eq(&format!("{how} {r}.{s}.{n} length"), &entry.0.len(), &got.len())?;
        expect_eq(&format!("{how} {r}.{s}.{n} total"), total, &got.total())?;
    }
    Ok(())
}

fn within(limit: Duration, start: Instant) -> Result<String, String> {
    let elapsed = start.elapsed();
    if elapsed <= limit {
        Ok(format!("{:.1?} (limit {:?})", elapsed, limit))
    } else {
        Err(format!("took {elapsed:.1?}, limit {limit:?}"))
    }
}

/// Plain rectangles: all 20 columns r <= s <= n <= 4 by search and by
/// independence polynomial.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let table = golden("plr_sizes.csv");
    if table.len() != 20 {
        return Err(format!("expected 20 columns, golden file has {}", table.len()));
    }
    for (&(r, s, n), entry) in &table {
        let searched = count_plr_by_size(r, s, n, None).map_err(|e| e.to_string())?;
        expect_column((r, s, n), entry, &searched, "search")?;
        let poly = HammingGraph::build(r, s, n)
            .and_then(|h| h.independence_polynomial(&IndependenceOptions::default()))
            .map_err(|e| e.to_string())?;
        expect_column((r, s, n), entry, &poly, "independence polynomial")?;
    }
    within(Duration::from_secs(600), start)
}

/// Self-orthogonal squares of order 2 and 3 on up to 9 symbols.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let table = golden("sor_sizes.csv");
    for (&(r, _, n), entry) in &table {
        let got = count_sor_by_size(r, n, None).map_err(|e| e.to_string())?;
        expect_column((r, r, n), entry, &got, "search")?;
    }
    expect_eq("columns", &18, &table.len())?;
    within(Duration::from_secs(900), start)
}

/// Order 4: full columns n <= 4 by search and by corner decomposition;
/// rows m <= 6 for n = 5..9 by stratification.
fn criterion_3() -> Outcome {
    let start = Instant::now();
    let table = golden("sor4_sizes.csv");
    for (&(r, _, n), entry) in &table {
        if n <= 4 {
            let direct = count_sor_by_size(r, n, None).map_err(|e| e.to_string())?;
            expect_column((r, r, n), entry, &direct, "search")?;
            let blocks = sor_distribution_direct_sum(2, 2, n).map_err(|e| e.to_string())?;
            expect_column((r, r, n), entry, &blocks, "direct sum")?;
        } else {
            let strat = sor_distribution_stratified(r, n, Some(6)).map_err(|e| e.to_string())?;
            expect_column((r, r, n), entry, &strat, "stratified")?;
            if strat.len() != 7 {
                return Err(format!("stratified 4.{n} has {} rows", strat.len()));
            }
        }
    }
    expect_eq(
        "|SOR_{4,9:6}|",
        &BigUint::from(1_731_190_176u64),
        &sor_distribution_stratified(4, 9, Some(6)).map_err(|e| e.to_string())?.get(6),
    )?;
    within(Duration::from_secs(900), start)
}

/// Main-class counts and sigma values for r = 1, 2, 3, with class sizes
/// from stabilizer orders, confirmed by direct counting.
fn criterion_4() -> Outcome {
    let start = Instant::now();
    let path = format!("{}/../cli/tests/golden/main_classes.csv", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut expected: BTreeMap<usize, Vec<(usize, BigUint)>> = BTreeMap::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        expected
            .entry(f[0].parse().unwrap())
            .or_default()
            .push((f[2].parse().unwrap(), f[3].parse().unwrap()));
    }
    for (&r, rows) in &expected {
        let levels = main_class_levels(r, r * r, ExtensionMethod::Direct).map_err(|e| e.to_string())?;
        for (s, (classes, sigma)) in rows.iter().enumerate().map(|(i, x)| (i + 1, x)) {
            expect_eq(&format!("classes r={r} s={s}"), classes, &levels[s].len())?;
            expect_eq(&format!("sigma r={r} s={s}"), sigma, &levels[s].sigma())?;
            let direct = count_sor_exact_symbols(r, s, None).map_err(|e| e.to_string())?.total();
            expect_eq(&format!("direct sigma r={r} s={s}"), sigma, &direct)?;
        }
    }
    within(Duration::from_secs(1800), start)
}

/// Closed forms against counts.
fn criterion_5() -> Outcome {
    for r in 1..=3 {
        for n in 1..=9 {
            let total = BigInt::from(count_sor_by_size(r, n, None).map_err(|e| e.to_string())?.total());
            expect_eq(&format!("total polynomial r={r} n={n}"), &sor_total_formula(r, n).map_err(|e| e.to_string())?, &total)?;
        }
    }
    for r in 1..=5 {
        for s in 1..=5 {
            for n in 1..=5 {
                let counts = count_plr_by_size(r, s, n, Some(2)).map_err(|e| e.to_string())?;
                for m in 0..=2 {
                    let closed = closed_form_count(r, s, n, m).map_err(|e| e.to_string())?;
                    expect_eq(&format!("size-{m} closed form {r}.{s}.{n}"), &closed, &counts.get(m))?;
                }
            }
        }
    }
    let mut report = Vec::new();
    for r in 1..=3 {
        for s in 0..=r * r + 2 {
            if let Some(v) = sigma_closed_form(r, s) {
                let counted = count_sor_exact_symbols(r, s, None).map_err(|e| e.to_string())?.total();
                expect_eq(&format!("sigma closed form r={r} s={s}"), &v, &counted)?;
            }
        }
    }
    for r in 2..=3 {
        let counted = count_sor_exact_symbols(r, r * r - 1, None).map_err(|e| e.to_string())?.total();
        let printed = sigma_near_full_printed(r).ok_or("printed formula not integral")?;
        if printed != counted {
            report.push(format!("printed one-empty-cell formula gives {printed} at r={r}, counts give {counted}"));
        }
    }
    Ok(format!("reported: {}", report.join("; ")))
}

fn variety_matches_hilbert(name: &str, ideal: &BoolIdeal, oracle: usize) -> Result<(), String> {
    let basis = buchberger(ideal, TermOrder::Lex);
    let hf = hilbert_function(&basis).total();
    let points = variety(ideal).len();
    expect_eq(&format!("{name}: variety vs Hilbert total"), &BigUint::from(points), &hf)?;
    expect_eq(&format!("{name}: variety vs combinatorial count"), &oracle, &points)
}

/// Gröbner engine properties.
fn criterion_6() -> Outcome {
    let mut checked = 0usize;
    // (a) the rectangle ideal is its own reduced basis
    for r in 1..=3 {
        for s in 1..=3 {
            for n in 1..=3 {
                let ideal = ideal_plr(r, s, n).map_err(|e| e.to_string())?;
                let basis = buchberger(&ideal, TermOrder::Lex);
                let gens: HashSet<_> = ideal.generators.iter().cloned().collect();
                let reduced: HashSet<_> = basis.polys().iter().cloned().collect();
                if gens != reduced || !basis.is_reduced() {
                    return Err(format!("reduced basis of the {r}.{s}.{n} ideal differs from its generators"));
                }
            }
        }
    }
    // (b) every family with at most 16 variables
    for r in 1..=4 {
        for s in 1..=4 {
            for n in 1..=16 {
                if r * s * n <= 16 {
                    let oracle = count_plr_by_size(r, s, n, None).map_err(|e| e.to_string())?.total();
                    variety_matches_hilbert(&format!("rectangles {r}.{s}.{n}"), &ideal_plr(r, s, n).unwrap(), oracle.try_into().unwrap())?;
                    checked += 1;
                }
            }
        }
    }
    for (r, n) in [(1, 1), (1, 5), (1, 16), (2, 1), (2, 2), (2, 3), (2, 4)] {
        let oracle = count_sor_by_size(r, n, None).unwrap().total();
        variety_matches_hilbert(&format!("self-orthogonal {r}.{n}"), &ideal_sor(r, n).unwrap(), oracle.try_into().unwrap())?;
        checked += 1;
    }
    for (r, s) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3), (3, 1), (3, 2)] {
        let members: Vec<_> = enumerate_sor(r, s, None).unwrap().collect();
        for p in members.iter().step_by(members.len().div_ceil(6)) {
            for q in members.iter().step_by(members.len().div_ceil(6)) {
                let oracle: usize = isotopism_count(p, q, s).unwrap().try_into().unwrap();
                variety_matches_hilbert(&format!("isotopisms {p} -> {q}"), &ideal_isotopism(p, q, s).unwrap(), oracle)?;
                checked += 1;
            }
        }
    }
    for (r, r2, n) in [(1, 1, 2), (1, 1, 4), (1, 2, 2), (2, 1, 2), (2, 2, 1)] {
        for (p, q) in corner_pairs(r, r2, n).unwrap() {
            let blocks = corner_b_blocks(&p, &q).unwrap();
            variety_matches_hilbert(&format!("upper-right block {p} / {q}"), &ideal_corner_b(&p, &q).unwrap(), blocks.len())?;
            for b in blocks {
                let sum = p.direct_sum(&q).unwrap();
                let oracle = brute_lower_left(&sum, r, &b, n);
                variety_matches_hilbert(&format!("lower-left block {p} / {q} / {b}"), &ideal_corner_c(&p, &q, &b).unwrap(), oracle)?;
                checked += 2;
            }
        }
    }
    for r in 2..=3 {
        let levels = main_class_levels(r, 2, ExtensionMethod::Direct).unwrap();
        for s in 1..=2 {
            for base in levels[s - 1].representatives() {
                let base = base.with_symbol_bound(s).unwrap();
                let oracle = 1 + soplr::strategies::extend_by_new_symbol(&base, s).unwrap().len();
                variety_matches_hilbert(&format!("extension of {base}"), &ideal_extension(&base, s).unwrap(), oracle)?;
                checked += 1;
            }
        }
    }
    // (c) standard monomials are exactly the rectangles 2.2.2
    let ideal = ideal_plr(2, 2, 2).unwrap();
    let basis = buchberger(&ideal, TermOrder::Lex);
    let enc = PlrEncoding::new(2, 2, 2).unwrap();
    let from_monomials: BTreeSet<PartialLatinRectangle> = standard_monomials(&basis, 8)
        .into_iter()
        .flatten()
        .map(|m| enc.decode(m.0))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut all = BTreeSet::new();
    for code in 0..3u32.pow(4) {
        let cells = (0..4).map(|c| (code / 3u32.pow(c) % 3) as u8).collect();
        if let Ok(p) = PartialLatinRectangle::from_cells(2, 2, 2, cells) {
            all.insert(p);
        }
    }
    expect_eq("standard monomials vs rectangles 2.2.2", &35, &from_monomials.len())?;
    if from_monomials != all {
        return Err("standard monomials of the 2.2.2 ideal are not the 2.2.2 rectangles".into());
    }
    // (d) isotopism sets against ideal varieties
    for r in 1..=2 {
        for s in 1..=2 {
            let members: Vec<_> = enumerate_sor(r, s, None).unwrap().collect();
            for p in &members {
                for q in &members {
                    let searched = isotopism_count(p, q, s).unwrap();
                    let points = variety(&ideal_isotopism(p, q, s).unwrap()).len();
                    expect_eq(&format!("isotopisms {p} -> {q}"), &searched, &BigUint::from(points))?;
                }
            }
        }
    }
    let members: Vec<_> = enumerate_sor(3, 3, None).unwrap().collect();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut nonempty = 0;
    for _ in 0..100 {
        let p = members.choose(&mut rng).unwrap();
        // half the pairs are isotopic by construction
        let q = if nonempty < 50 {
            let alpha = soplr::Permutation::all(3).collect::<Vec<_>>().choose(&mut rng).unwrap().clone();
            let gamma = soplr::Permutation::all(3).collect::<Vec<_>>().choose(&mut rng).unwrap().clone();
            p.apply_isotopism(&soplr::Isotopism::diagonal(alpha, gamma)).unwrap()
        } else {
            members.choose(&mut rng).unwrap().clone()
        };
        let searched = isotopism_count(p, &q, 3).unwrap();
        let points = variety(&ideal_isotopism(p, &q, 3).unwrap()).len();
        expect_eq(&format!("isotopisms {p} -> {q}"), &searched, &BigUint::from(points))?;
        nonempty += (points > 0) as usize;
    }
    Ok(format!("{checked} ideals checked for (b)"))
}

/// Lower-left blocks by exhaustive filling of the off-diagonal cells.
fn brute_lower_left(sum: &PartialLatinRectangle, r: usize, block: &PartialLatinRectangle, n: usize) -> usize {
    let m = sum.rows();
    let mut cells = sum.raw_cells().to_vec();
    for i in 0..r {
        for j in r..m {
            cells[i * m + j] = block.get(i, j - r).unwrap_or(0);
        }
    }
    let free: Vec<usize> = (r..m).flat_map(|i| (0..r).map(move |j| i * m + j)).collect();
    let mut count = 0;
    for code in 0..(n as u64 + 1).pow(free.len() as u32) {
        let mut c = cells.clone();
        let mut x = code;
        for &f in &free {
            c[f] = (x % (n as u64 + 1)) as u8;
            x /= n as u64 + 1;
        }
        if let Ok(p) = PartialLatinRectangle::from_cells(m, m, n, c) {
            count += p.is_self_orthogonal().unwrap() as usize;
        }
    }
    count
}

/// Search, stratification and corner decomposition agree.
fn criterion_7() -> Outcome {
    let mut compared = 0;
    for order in 2..=4 {
        for n in 1..=4 {
            let direct = count_sor_by_size(order, n, None).map_err(|e| e.to_string())?;
            let strat = sor_distribution_stratified(order, n, None).map_err(|e| e.to_string())?;
            expect_eq(&format!("stratified {order}.{n}"), &direct, &strat)?;
            for r2 in 1..order {
                let blocks = sor_distribution_direct_sum(order - r2, r2, n).map_err(|e| e.to_string())?;
                expect_eq(&format!("direct sum {}+{r2}, n={n}", order - r2), &direct, &blocks)?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} corner splits compared"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("rectangle size distributions, r <= s <= n <= 4, two methods", criterion_1),
        ("self-orthogonal size distributions, r <= 3, n <= 9", criterion_2),
        ("order-4 distributions: n <= 4 full, n <= 9 sizes <= 6", criterion_3),
        ("main classes and sigma for r <= 3", criterion_4),
        ("closed forms", criterion_5),
        ("Groebner engine properties", criterion_6),
        ("cross-strategy consistency", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{detail}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
