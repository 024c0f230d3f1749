//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

mod common;

use std::time::{Duration, Instant};

use chm6::catalog::{self, angle_grid, HFamilyParams};
use chm6::equivalence::are_equivalent;
use chm6::identities::{admissible_scale_factor, chord3_class, four_term_partner, ChordClass, Partner};
use chm6::scalar::complex_sum;
use chm6::search::{self, classify_h3, Alphabet, H3Class};
use chm6::substructure::{find_h2_blocks, find_h3_blocks, find_rank1_2x3, is_h2_reducible};
use chm6::{CMatrix64, Classification};
use common::*;
use rand::seq::SliceRandom;
use rand::Rng;

type Check = Result<(), String>;

/// Id, title, check, runtime limit in seconds.
type Criterion = (&'static str, &'static str, fn() -> Check, Option<u64>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn h_samples() -> Vec<CMatrix64> {
    let mut r = rng(100);
    (0..100).map(|_| random_h_family(&mut r)).collect()
}

fn karlsson_grid_samples() -> Vec<CMatrix64> {
    let g = angle_grid::<f64>(32);
    let params = search::karlsson_samples(&g, &g, 4, 2024).expect("grid within range");
    params.iter().map(|p| catalog::karlsson(p, &tol()).expect("completed parameters are valid")).collect()
}

fn ac1() -> Check {
    let t = tol();
    let mut all = vec![("tao", catalog::tao()), ("m1", catalog::m1()), ("m2", catalog::m2())];
    all.extend(h_samples().into_iter().map(|m| ("h_family", m)));
    all.extend(karlsson_grid_samples().into_iter().map(|m| ("karlsson", m)));
    ensure(all.len() == 3 + 100 + 4096, || format!("sample count {}", all.len()))?;
    for (name, m) in &all {
        ensure(m.is_chm(&t) && m.gram_defect() < 1e-8, || format!("{name}: defect {}", m.gram_defect()))?;
    }
    Ok(())
}

fn ac2() -> Check {
    let t = tol();
    ensure(!is_h2_reducible(&catalog::tao::<f64>(), &t), || "tao is H2-reducible".into())?;
    ensure(is_h2_reducible(&catalog::m1::<f64>(), &t), || "m1 not H2-reducible".into())?;
    ensure(is_h2_reducible(&catalog::m2::<f64>(), &t), || "m2 not H2-reducible".into())?;
    for m in h_samples() {
        ensure(is_h2_reducible(&m, &t), || "h_family sample not H2-reducible".into())?;
    }
    for m in karlsson_grid_samples() {
        let n = find_h2_blocks(&m, &t).len();
        ensure(n >= 9, || format!("karlsson sample with {n} H2 blocks"))?;
    }
    Ok(())
}

fn ac3() -> Check {
    let t = tol();
    let a = Alphabet::new((0..3).map(|p| U::root_of_unity(p, 3)).collect(), &t).map_err(|e| e.to_string())?;
    let found = search::find_chm_cliques(&a, &t);
    ensure(!found.is_empty(), || "no CHM over cube roots".into())?;
    for m in &found {
        let w = are_equivalent(m, &catalog::tao(), &t).map_err(|e| e.to_string())?;
        ensure(w.is_some(), || "result not equivalent to Tao".into())?;
    }
    Ok(())
}

fn ac4() -> Check {
    let reports = search::scan_two_element(&search::two_element_samples::<f64>(360), &tol()).map_err(|e| e.to_string())?;
    ensure(reports.len() == 360, || format!("{} reports", reports.len()))?;
    let hits: Vec<_> = reports.iter().filter(|r| !r.is_empty()).map(|r| r.parameter.clone()).collect();
    ensure(hits.is_empty(), || format!("hits at {hits:?}"))
}

fn ac5() -> Check {
    let samples = search::three_element_samples::<f64>(180);
    let reports = search::scan_three_element(&samples, &tol()).map_err(|e| e.to_string())?;
    ensure(reports.len() == 182, || format!("{} reports", reports.len()))?;
    for (k, r) in reports.iter().enumerate() {
        let at_pm_i = k >= 180;
        ensure(r.is_empty() != at_pm_i, || format!("unexpected hit pattern at {}", r.parameter))?;
        ensure(!r.counterexample && r.is_consistent(), || format!("counterexample at {}", r.parameter))?;
        for (c, d) in r.classifications.iter().zip(&r.details) {
            ensure(!d.h2_reducible || *c == Classification::EquivM2, || format!("H2 hit not M2 at {}", r.parameter))?;
            ensure(d.parity_dichotomy == Some(true), || format!("parity fails at {}", r.parameter))?;
        }
    }
    Ok(())
}

fn ac6() -> Check {
    let t = tol();
    let mut r = rng(600);
    for _ in 0..100 {
        let p = HFamilyParams::new(random_unit(&mut r), random_unit(&mut r));
        let (s, _) = scramble(&catalog::h_family(&p, &t).unwrap(), &mut r);
        match classify_h3(&s, &t).map_err(|e| e.to_string())? {
            H3Class::HFamilyMember { params, witness } => {
                let target = catalog::h_family(&params, &t).map_err(|e| e.to_string())?;
                ensure(witness.verifies(&s, &target, t.witness_eps()), || "h_family witness fails".into())?;
            }
            other => return Err(format!("h_family scramble classified as {other:?}")),
        }
    }
    for _ in 0..100 {
        let (s, _) = scramble(&catalog::tao(), &mut r);
        match classify_h3(&s, &t).map_err(|e| e.to_string())? {
            H3Class::EquivTao { witness } => {
                ensure(witness.verifies(&s, &catalog::tao(), t.witness_eps()), || "tao witness fails".into())?
            }
            other => return Err(format!("tao scramble classified as {other:?}")),
        }
    }
    Ok(())
}

fn ac7() -> Check {
    let t = tol();
    let mut r = rng(700);
    let mut members: Vec<(&str, CMatrix64)> = catalog::named::<f64>();
    members.push(("h_family", random_h_family(&mut r)));
    members.push(("karlsson", random_karlsson(&mut r)));
    for (name, m) in &members {
        for _ in 0..50 {
            let (s, _) = scramble(m, &mut r);
            let w = are_equivalent(m, &s, &t).map_err(|e| e.to_string())?;
            let w = w.ok_or_else(|| format!("{name}: scramble not recognised"))?;
            ensure(w.deviation(m, &s) < t.witness_eps(), || format!("{name}: witness deviation {}", w.deviation(m, &s)))?;
        }
    }
    let cross = are_equivalent(&catalog::tao::<f64>(), &catalog::m2(), &t).map_err(|e| e.to_string())?;
    ensure(cross.is_none(), || "tao equivalent to m2".into())
}

fn ac8() -> Check {
    let t = tol();
    let mut r = rng(800);
    let mut ms: Vec<(String, CMatrix64)> = catalog::named::<f64>().into_iter().map(|(n, m)| (n.to_string(), m)).collect();
    ms.extend((0..50).map(|k| (format!("karlsson #{k}"), random_karlsson(&mut r))));
    for (name, m) in &ms {
        ensure(find_h2_blocks(m, &t) == h2_oracle(m, &t), || format!("{name}: h2 mismatch"))?;
        ensure(find_h3_blocks(m, &t) == h3_oracle(m, &t), || format!("{name}: h3 mismatch"))?;
        ensure(find_rank1_2x3(m, &t) == rank1_oracle(m, &t), || format!("{name}: rank1 mismatch"))?;
    }
    Ok(())
}

fn ac9() -> Check {
    let t = tol();
    let mut r = rng(900);
    let w = U::omega();
    for case in 0..10_000 {
        let u = random_unit(&mut r);
        let bar = r.random_bool(0.5);
        let step = if bar { w.conj() } else { w };
        let (a, b, c) = (u, u * step, u * step * step);
        let ok = match chord3_class(a, b, c, &t).map_err(|e| e.to_string())? {
            ChordClass::OmegaOrder { scale } => !bar && scale.approx_eq(&a, t.eps_eq),
            ChordClass::OmegaBarOrder { scale } => bar && scale.approx_eq(&a, t.eps_eq),
            ChordClass::NonZeroSum => false,
        };
        ensure(ok, || format!("chord case {case}"))?;
    }
    for case in 0..10_000 {
        let (u, v) = (random_unit(&mut r), random_unit(&mut r));
        let mut rest = [v, -u, -v];
        rest.shuffle(&mut r);
        let p = four_term_partner(u, rest[0], rest[1], rest[2], &t).map_err(|e| format!("partner case {case}: {e}"))?;
        let idx = match p {
            Partner::B => 0,
            Partner::C => 1,
            Partner::D => 2,
        };
        ensure(rest[idx].approx_eq(&-u, t.eps_eq), || format!("partner case {case}"))?;
    }
    let roots: Vec<U> = (0..3).map(|p| U::root_of_unity(p, 3)).collect();
    let allowed: Vec<U> = (0..6).map(|p| U::root_of_unity(p, 6)).collect();
    let mut checked = 0;
    while checked < 10_000 {
        let g: [U; 6] = [(); 6].map(|_| roots[r.random_range(0..3)]);
        let num = complex_sum(g[..3].iter().copied());
        let den = complex_sum(g[3..].iter().copied());
        let all_eq = |s: &[U]| s.iter().all(|x| x.approx_eq(&s[0], 1e-12));
        if all_eq(&g[..3]) || all_eq(&g[3..]) || num.norm() < 1e-6 || den.norm() < 1e-6 {
            continue;
        }
        let k = admissible_scale_factor(&g, &t).map_err(|e| format!("scale case {checked}: {e}"))?;
        let raw = -num / den;
        ensure((k.to_complex() - raw).norm() < t.eps_eq, || format!("scale case {checked}: k mismatch"))?;
        ensure(allowed.iter().any(|a| a.approx_eq(&k, t.eps_eq)), || format!("scale case {checked}: k outside set"))?;
        checked += 1;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", "catalog validity", ac1, Some(10)),
        ("AC2", "H2-reducibility ground truths", ac2, Some(5)),
        ("AC3", "cube-root alphabet gives Tao", ac3, Some(60)),
        ("AC4", "no two-element CHM over 360 samples", ac4, Some(120)),
        ("AC5", "three-element scan hits only at x = ±i, all M2", ac5, Some(300)),
        ("AC6", "3x3-block classification pipeline", ac6, Some(120)),
        ("AC7", "equivalence engine soundness", ac7, Some(60)),
        ("AC8", "detectors agree with brute-force oracles", ac8, None),
        ("AC9", "unimodular sum identities, 10000 cases each", ac9, None),
    ];
    let mut failed = 0;
    for (id, title, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let limit_text = limit.map_or(String::new(), |s| format!(", limit {s}s"));
        match (&outcome, over) {
            (Ok(()), false) => println!("{id} PASS {title} ({:.2}s{limit_text})", elapsed.as_secs_f64()),
            (Ok(()), true) => println!("{id} FAIL {title}: runtime {:.2}s exceeds limit{limit_text}", elapsed.as_secs_f64()),
            (Err(e), _) => println!("{id} FAIL {title}: {e} ({:.2}s{limit_text})", elapsed.as_secs_f64()),
        }
        if outcome.is_err() || over {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
