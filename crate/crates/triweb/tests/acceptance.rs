//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use triweb_core::diffset::{presentation_from_difference_set, singer_difference_set, standardize};
use triweb_core::geometry::{generalized_binomial, q_binomial};
use triweb_core::gf::is_prime;
use triweb_core::presentation::{builtin_exotic_15_1, degenerate, verify_axioms, verify_condition_6_variants};
use triweb_core::webfun::{all_pass, Instance};
use triweb_core::ybe::{
    check_involutive, check_ybe, column_census_violations, density_report, rhat, rhat_closed_form, signed_swap,
};
use triweb_core::{FunctorContext, PrimeField, Rationals, ScalarField, TrianglePresentation};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn q7() -> TrianglePresentation {
    let d = standardize(57, 7, &[1, 6, 7, 9, 19, 38, 42, 49]).unwrap();
    presentation_from_difference_set(57, 7, &d.set).unwrap()
}

fn singer(q: u64) -> TrianglePresentation {
    let d = singer_difference_set(q).unwrap();
    presentation_from_difference_set(d.modulus, q, &d.set).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let a = standardize(21, 4, &[0, 1, 4, 14, 16]).map_err(|e| e.to_string())?;
    ensure(a.set == [7, 9, 14, 15, 18], || format!("Z/21 gave {:?}", a.set))?;
    let b = standardize(57, 7, &[1, 6, 7, 9, 19, 38, 42, 49]).map_err(|e| e.to_string())?;
    ensure(b.set == [1, 6, 7, 9, 19, 38, 42, 49], || format!("Z/57 gave {:?}", b.set))?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("Z/21 -> {:?}, Z/57 -> {:?}", a.set, b.set))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let tp = builtin_exotic_15_1();
    let points = tp.elements_of_dim(1).len();
    let lines = tp.elements_of_dim(2).len();
    ensure(points == 13 && lines == 13, || format!("{points} points, {lines} lines"))?;
    ensure(tp.triples().len() == 104, || format!("|T| = {}", tp.triples().len()))?;
    let report = verify_axioms(&tp);
    ensure(report.all_pass(), || format!("{report:?}"))?;
    let v = verify_condition_6_variants(&tp).map_err(|e| e.to_string())?;
    ensure(v.six && v.six_prime && v.six_double_prime, || format!("{v:?}"))?;
    let l3 = tp.id_of("l3").ok_or("no l3")?;
    let on_l3: BTreeSet<&str> = tp.geometry().incident_of_dim(l3, 1).into_iter().map(|p| tp.name(p)).collect();
    ensure(on_l3 == BTreeSet::from(["p3", "p4", "p7", "p9"]), || format!("l3 = {on_l3:?}"))?;
    within(Duration::from_secs(1), start)?;
    Ok("13 points, 13 lines, |T| = 104, l3 = {p3,p4,p7,p9}".into())
}

fn suite<K: ScalarField>(label: &str, tp: TrianglePresentation, field: K) -> Result<usize, String> {
    let ctx = FunctorContext::new(tp, field).map_err(|e| format!("{label}: {e}"))?;
    let reports = ctx.run_full_suite(usize::MAX).map_err(|e| format!("{label}: {e}"))?;
    let relations: BTreeSet<&str> = reports.iter().map(|r| r.relation.as_str()).collect();
    ensure(relations.len() >= 10, || format!("{label}: only {relations:?}"))?;
    match reports.iter().find(|r| !r.pass) {
        Some(r) => Err(format!("{label}: {} {:?} failed at {:?}", r.relation, r.labels, r.witness)),
        None => Ok(reports.len()),
    }
}

fn criterion_3() -> Outcome {
    let mut summary = Vec::new();
    let start = Instant::now();
    summary.push(("15.1/p2", suite("15.1/p2", builtin_exotic_15_1(), PrimeField::new(2).unwrap())?));
    summary.push(("singer4/p3", suite("singer4/p3", singer(4), PrimeField::new(3).unwrap())?));
    let d21 = standardize(21, 4, &[0, 1, 4, 14, 16]).unwrap();
    let z21 = presentation_from_difference_set(21, 4, &d21.set).unwrap();
    summary.push(("z21/p3", suite("z21/p3", z21, PrimeField::new(3).unwrap())?));
    for n in 3..=5 {
        summary.push(("degenerate/Q", suite(&format!("degenerate {n}"), degenerate(n).unwrap(), Rationals)?));
    }
    within(Duration::from_secs(30), start)?;
    let start = Instant::now();
    for p in [2, 3] {
        summary.push(("q7", suite(&format!("q7/p{p}"), q7(), PrimeField::new(p).unwrap())?));
    }
    within(Duration::from_secs(120), start)?;
    let total: usize = summary.iter().map(|s| s.1).sum();
    Ok(format!("{total} relation instances over 8 fixtures, all exact"))
}

fn criterion_4() -> Outcome {
    let mut seen = Vec::new();
    for p in [2u64, 3, 5, 7, 11] {
        let ctx = FunctorContext::with_override(singer(2), PrimeField::new(p).unwrap());
        let bigon = ctx.run_instance(&Instance::Bigon(1, 1)).map_err(|e| e.to_string())?;
        ensure(!bigon.pass, || format!("p={p}: bigon (1,1) passed"))?;
        let w = bigon.witness.ok_or_else(|| format!("p={p}: bigon failure without witness"))?;
        let raw = (3 % p).to_string();
        ensure(w.lhs == raw || w.rhs == raw, || format!("p={p}: witness {w:?} lacks diagonal {raw}"))?;
        let reports = ctx.run_full_suite(usize::MAX).map_err(|e| e.to_string())?;
        ensure(!all_pass(&reports), || format!("p={p}: full suite passed"))?;
        let sol = rhat(&ctx).map_err(|e| e.to_string())?;
        let inv = check_involutive(&sol).map_err(|e| e.to_string())?;
        ensure(!inv.pass && inv.witness.is_some(), || format!("p={p}: R̂² = id"))?;
        seen.push(format!("p={p} ({},{}) {} vs {}", w.row, w.col, w.lhs, w.rhs));
    }
    Ok(format!("Fano bigon witnesses: {}", seen.join("; ")))
}

fn ybe_fixture<K: ScalarField>(label: &str, tp: TrianglePresentation, field: K) -> Result<String, String> {
    let start = Instant::now();
    let ctx = FunctorContext::new(tp.clone(), field.clone()).map_err(|e| e.to_string())?;
    let sol = rhat(&ctx).map_err(|e| e.to_string())?;
    let n = sol.points;
    ensure(check_involutive(&sol).map_err(|e| e.to_string())?.pass, || format!("{label}: R̂² ≠ id"))?;
    ensure(check_ybe(&sol).map_err(|e| e.to_string())?.pass, || format!("{label}: braid equation fails"))?;
    let closed = rhat_closed_form(&tp, field).map_err(|e| e.to_string())?;
    ensure(closed == sol.matrix, || format!("{label}: closed form differs"))?;
    let counts: BTreeSet<usize> = sol.matrix.column_counts().into_iter().collect();
    ensure(counts.is_subset(&BTreeSet::from([1, sol.q as usize])), || {
        format!("{label}: column counts {counts:?}")
    })?;
    ensure(column_census_violations(&sol, &tp).is_empty(), || format!("{label}: census"))?;
    let density = density_report(&sol);
    ensure(density.bound_ok, || format!("{label}: nnz {} not below {}·{n}²", density.nnz, sol.q))?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("{label}: {}-dim triple space, nnz {} < {}", n * n * n, density.nnz, sol.q as usize * n * n))
}

fn criterion_5() -> Outcome {
    let a = ybe_fixture("15.1/p2", builtin_exotic_15_1(), PrimeField::new(2).unwrap())?;
    let b = ybe_fixture("singer4/p3", singer(4), PrimeField::new(3).unwrap())?;
    Ok(format!("{a}; {b}"))
}

fn criterion_6() -> Outcome {
    let fixtures: Vec<(&str, TrianglePresentation, u64, u64)> = vec![
        ("15.1", builtin_exotic_15_1(), 3, 2),
        ("singer3", singer(3), 3, 2),
        ("singer4", singer(4), 4, 3),
        ("q7", q7(), 7, 2),
    ];
    let mut dims = Vec::new();
    for (label, tp, q, p) in fixtures {
        let ctx = FunctorContext::new(tp, PrimeField::new(p).unwrap()).map_err(|e| e.to_string())?;
        for a in 0..=3 {
            let want = u64::try_from(q_binomial(3, a as i64, q)).unwrap();
            ensure(ctx.dim(a) as u64 == want, || format!("{label}: dim V_{a} = {} ≠ {want}", ctx.dim(a)))?;
        }
        let lines = ctx.presentation().elements_of_dim(2);
        let distinct: BTreeSet<Vec<usize>> =
            lines.iter().map(|&l| ctx.presentation().geometry().incident_of_dim(l, 1)).collect();
        ensure(distinct.len() == ctx.dim(2), || format!("{label}: translates"))?;
        dims.push(ctx.dim(1));
    }
    for ground in 3..=5usize {
        let ctx = FunctorContext::new(degenerate(ground).unwrap(), Rationals).map_err(|e| e.to_string())?;
        for a in 0..=ground {
            let subsets = (0u32..1 << ground).filter(|m| m.count_ones() as usize == a).count();
            ensure(ctx.dim(a) == subsets, || format!("degenerate {ground}: dim V_{a}"))?;
        }
    }
    ensure(dims == [13, 13, 21, 57], || format!("dim V_1 = {dims:?}"))?;
    Ok(format!("dim V_1 = {dims:?}; all V_a match q-binomials"))
}

fn criterion_7() -> Outcome {
    let fixtures = vec![builtin_exotic_15_1(), singer(3), singer(4), degenerate(4).unwrap()];
    for tp in &fixtures {
        for t in tp.triples() {
            ensure(tp.contains(&[t[1], t[2], t[0]]), || format!("rotation of {}", tp.show(t)))?;
            let mirror = [tp.sigma(t[0]), tp.sigma(t[2]), tp.sigma(t[1])];
            ensure(tp.contains(&mirror), || format!("mirror of {}", tp.show(t)))?;
        }
        let v = verify_condition_6_variants(tp).map_err(|e| e.to_string())?;
        ensure(v.agree(), || format!("{v:?}"))?;
        let ctx = FunctorContext::with_override(tp.clone(), Rationals);
        let n = ctx.n();
        for a in 0..=n {
            for b in 0..=n - a {
                let merge = ctx.merge(a, b).map_err(|e| e.to_string())?;
                ensure(ctx.split(a, b).map_err(|e| e.to_string())? == &merge.transpose(), || {
                    format!("split({a},{b})")
                })?;
                ensure(merge.column_counts().iter().all(|&c| c <= 1), || format!("merge({a},{b}) columns"))?;
            }
        }
    }
    for q in [3u64, 4, 7] {
        for p in (2..q).filter(|&p| is_prime(p) && (q - 1) % p == 0) {
            for n in 0..=6i64 {
                for k in 0..=n {
                    let lhs = u64::try_from(q_binomial(n, k, q)).unwrap() % p;
                    let rhs = i64::try_from(generalized_binomial(n, k as u64)).unwrap().rem_euclid(p as i64);
                    ensure(lhs == rhs as u64, || format!("n={n} k={k} q={q} p={p}"))?;
                }
            }
        }
    }
    let ctx = FunctorContext::new(degenerate(4).unwrap(), Rationals).map_err(|e| e.to_string())?;
    let sol = rhat(&ctx).map_err(|e| e.to_string())?;
    ensure(sol.matrix == signed_swap(4, Rationals), || "degenerate 4: R̂ is not the signed swap".into())?;
    Ok("closure, split/merge, 6-form agreement, q-binomial grid, signed swap".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("standardization regression", criterion_1),
        ("15.1 fixture", criterion_2),
        ("relation suite", criterion_3),
        ("Fano negative control", criterion_4),
        ("Yang-Baxter", criterion_5),
        ("dimension law", criterion_6),
        ("property suites", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({:.2?}) {detail}", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({:.2?}) {why}", i + 1, start.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
