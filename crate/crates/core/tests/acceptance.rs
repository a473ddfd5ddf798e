//! Acceptance suite: one line per criterion, exact integer comparisons.
//! Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use rayon::prelude::*;

use finsub::constructions::{
    based_subset3, finite_subset_space, reduced, sub3_homology_via_coproduct, symmetric_product,
    w2_chain_model, Options, ReducedKind,
};
use finsub::homology::pi1::{fundamental_presentation, tietze_simplify, Pi1Status, TietzeBudget};
use finsub::homology::ring::Coefficients;
use finsub::homology::{homology, induced_map, sset_homology, HomologyGroup};
use finsub::space::{circle, rp2, sphere, torus, OrderedComplexSpec};
use finsub::sset::SimplicialSet;
use finsub::surface::{sp_chain_complex, SurfacePresentation};
use finsub::verify::{catalog, run_case, Status};

type Outcome = Result<String, String>;

const Z: Coefficients = Coefficients::Integers;
const F2: Coefficients = Coefficients::Mod(2);

/// `(betti, torsion)` per degree, starting at 0.
fn g(spec: &[(usize, &[u64])]) -> Vec<(usize, Vec<u64>)> {
    spec.iter().map(|(b, t)| (*b, t.to_vec())).collect()
}

/// Expected groups in the listed degrees, zero in every other certified
/// degree; every listed degree must be certified.
fn expect(label: &str, computed: &[HomologyGroup], expected: &[(usize, Vec<u64>)]) -> Result<(), String> {
    for (k, (b, t)) in expected.iter().enumerate() {
        let c = computed.get(k).ok_or(format!("{label}: H_{k} missing"))?;
        if !c.reliable || c.betti != *b || c.torsion != *t {
            return Err(format!("{label}: H_{k} = {c} (certified: {}), expected betti {b} torsion {t:?}", c.reliable));
        }
    }
    for c in computed.iter().skip(expected.len()) {
        if c.reliable && !c.is_zero() {
            return Err(format!("{label}: H_{} = {c}, expected 0", c.dim));
        }
    }
    Ok(())
}

fn show(h: &[HomologyGroup]) -> String {
    h.iter()
        .take_while(|x| x.reliable)
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn opts() -> Options {
    Options::default()
}

fn sub(x: &OrderedComplexSpec, n: usize) -> Arc<SimplicialSet> {
    finite_subset_space(x, n, &opts()).unwrap().space
}

fn sp(x: &OrderedComplexSpec, n: usize) -> Arc<SimplicialSet> {
    symmetric_product(x, n, &opts()).unwrap().space
}

fn h(s: &SimplicialSet) -> Vec<HomologyGroup> {
    sset_homology(s, Z).unwrap()
}

fn pi1_trivial(s: &SimplicialSet) -> bool {
    let p = fundamental_presentation(s).unwrap();
    tietze_simplify(&p, TietzeBudget::default()).status == Pi1Status::Trivial
}

fn c1() -> Outcome {
    let s1 = circle(3).unwrap();
    let (a, b) = (sub(&s1, 2), sp(&s1, 2));
    let ha = h(&a);
    expect("Sub2(S1)", &ha, &g(&[(1, &[]), (1, &[])]))?;
    expect("SP2(S1)", &h(&b), &g(&[(1, &[]), (1, &[])]))?;
    if a.cell_counts() != b.cell_counts() {
        return Err("Sub2(S1) and SP2(S1) differ".into());
    }
    Ok(format!("Sub2(S1) = SP2(S1): {}", show(&ha)))
}

fn c2() -> Outcome {
    let s1 = circle(3).unwrap();
    let bsub = h(&reduced(&s1, 2, ReducedKind::Sub, &opts()).unwrap().space);
    expect("barSub2(S1)", &bsub, &g(&[(1, &[]), (0, &[2])]))?;
    let bsp = h(&reduced(&s1, 2, ReducedKind::Sp, &opts()).unwrap().space);
    expect("barSP2(S1)", &bsp, &g(&[(1, &[])]))?;
    Ok(format!("barSub2(S1): {}; barSP2(S1): {}", show(&bsub), show(&bsp)))
}

fn c3() -> Outcome {
    let s = sub(&circle(3).unwrap(), 3);
    let hs = h(&s);
    expect("Sub3(S1)", &hs, &g(&[(1, &[]), (0, &[]), (0, &[]), (1, &[])]))?;
    if !pi1_trivial(&s) {
        return Err("pi1 of Sub3(S1) did not trivialize".into());
    }
    Ok(format!("Sub3(S1): {}; pi1 trivial", show(&hs)))
}

fn c4() -> Outcome {
    let hs = h(&sub(&circle(3).unwrap(), 4));
    expect("Sub4(S1)", &hs, &g(&[(1, &[]), (0, &[]), (0, &[]), (1, &[])]))?;
    let stretch = match finite_subset_space(&circle(3).unwrap(), 5, &opts()) {
        Ok(r) => {
            let h5 = h(&r.space);
            let ok = expect("Sub5(S1)", &h5, &g(&[(1, &[]), (0, &[]), (0, &[]), (0, &[]), (0, &[]), (1, &[])])).is_ok();
            format!("stretch Sub5(S1) {}: {}", if ok { "pass" } else { "FAIL" }, show(&h5))
        }
        Err(e) => format!("stretch Sub5(S1) skipped: {e}"),
    };
    Ok(format!("Sub4(S1): {}; {stretch}", show(&hs)))
}

fn c5() -> Outcome {
    let s2 = sphere(2).unwrap();
    let a = h(&sp(&s2, 2));
    expect("SP2(S2)", &a, &g(&[(1, &[]), (0, &[]), (1, &[]), (0, &[]), (1, &[])]))?;
    let b = h(&reduced(&s2, 2, ReducedKind::Sp, &opts()).unwrap().space);
    expect("barSP2(S2)", &b, &g(&[(1, &[]), (0, &[]), (0, &[]), (0, &[]), (1, &[])]))?;
    let c = h(&reduced(&s2, 2, ReducedKind::Sub, &opts()).unwrap().space);
    expect("barSub2(S2)", &c, &g(&[(1, &[]), (0, &[]), (0, &[2]), (0, &[]), (1, &[])]))?;
    Ok(format!("SP2(S2): {}; barSP2(S2): {}; barSub2(S2): {}", show(&a), show(&b), show(&c)))
}

fn c6() -> Outcome {
    let s2 = sphere(2).unwrap();
    let s = sub(&s2, 3);
    let hs = h(&s);
    expect(
        "Sub3(S2)",
        &hs,
        &g(&[(1, &[]), (0, &[]), (0, &[]), (0, &[]), (1, &[2]), (0, &[]), (1, &[])]),
    )?;
    let low = finite_subset_space(&s2, 3, &Options::truncation(3)).unwrap().space;
    if !pi1_trivial(&low) {
        return Err("pi1 of Sub3(S2) did not trivialize".into());
    }
    let stretch = match finite_subset_space(&s2, 4, &opts()) {
        Ok(r) => format!("stretch Sub4(S2): H6 = {}", h(&r.space)[6]),
        Err(e) => format!("stretch Sub4(S2) skipped: {e}"),
    };
    Ok(format!("Sub3(S2): {}; pi1 trivial; {stretch}", show(&hs)))
}

fn c7() -> Outcome {
    let expected = g(&[(1, &[]), (2, &[]), (2, &[]), (2, &[]), (1, &[])]);
    let quotient = h(&sp(&torus(), 2));
    expect("SP2(T) quotient", &quotient, &expected)?;
    let model = homology(&sp_chain_complex(&SurfacePresentation::torus(), 2).unwrap(), Z).unwrap();
    expect("SP2(T) cellular", &model, &expected)?;
    Ok(format!("SP2(T): {} in both models", show(&quotient)))
}

fn c8() -> Outcome {
    let mut lines = Vec::new();
    for (x, expected) in [
        (circle(3).unwrap(), g(&[(1, &[])])),
        (sphere(2).unwrap(), g(&[(1, &[]), (0, &[]), (0, &[]), (0, &[]), (1, &[])])),
        (torus(), g(&[(1, &[]), (0, &[]), (1, &[]), (2, &[]), (1, &[])])),
    ] {
        let quotient = h(&based_subset3(&x, &opts()).unwrap().space);
        let chains = homology(&w2_chain_model(&x, &opts()).unwrap(), Z).unwrap();
        let coproduct = sub3_homology_via_coproduct(&x, &opts()).unwrap().groups;
        for (label, groups) in [("quotient", &quotient), ("W2", &chains), ("coproduct", &coproduct)] {
            expect(&format!("Sub3({},x0) {label}", x.name), groups, &expected)?;
        }
        lines.push(format!("{}: {}", x.name, show(&quotient)));
    }
    Ok(format!("three models agree; {}", lines.join("; ")))
}

fn c9() -> Outcome {
    let s2 = sphere(2).unwrap();
    let r = symmetric_product(&s2, 2, &Options::truncation(3)).unwrap();
    let diag = induced_map(r.map("diag").unwrap(), 2).unwrap();
    if diag.matrix.len() != 1 || diag.matrix[0].len() != 1 || diag.matrix[0][0].abs() != BigInt::from(2) {
        return Err(format!("diagonal on H2(SP2 S2) is {:?}, expected [±2]", diag.matrix));
    }
    let j2 = induced_map(r.map("j_n").unwrap(), 2).unwrap();
    if !j2.is_isomorphism() {
        return Err(format!("j2 on H2 is {:?}, expected an isomorphism", j2.matrix));
    }

    let model = sub3_homology_via_coproduct(&torus(), &opts()).unwrap();
    let based = model.diagonal_image(2, 0);
    if based.iter().all(Zero::is_zero) {
        return Err("j_x0,*[T] = 0 in H2(Sub3(T,x0))".into());
    }

    // j: T -> Sub3 T. Chains through degree 3 are complete at truncation 3,
    // so H2 is exact; the construction is well under the cell cap.
    let sub3 = finite_subset_space(&torus(), 3, &Options::truncation(3)).unwrap();
    let j = induced_map(sub3.map("j").unwrap(), 2).unwrap();
    let image = j.image_of(0);
    if image.iter().all(Zero::is_zero) {
        return Err(format!(
            "diag on H2(SP2 S2) = {}, j2 iso, j_x0,*[T] = {:?} != 0 pass; \
             but j_*[T] = {:?} in H2(Sub3 T) = {} (expected nonzero)",
            diag.matrix[0][0],
            based.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            image.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            j.target
        ));
    }
    Ok(format!(
        "diag = ×2 on H2(SP2 S2); j2 iso; j_x0,*[T] != 0; j_*[T] = {:?} != 0",
        image.iter().map(|x| x.to_string()).collect::<Vec<_>>()
    ))
}

fn c10() -> Outcome {
    let top = |s: &SimplicialSet, k: usize, c: Coefficients| sset_homology(s, c).unwrap()[k].clone();
    let mut all: Vec<(String, HomologyGroup, usize)> = vec![
        ("H4(SP2 S2; Z)".into(), top(&sp(&sphere(2).unwrap(), 2), 4, Z), 1),
        ("H6(SP2 S3; Z)".into(), top(&sp(&sphere(3).unwrap(), 2), 6, Z), 0),
        ("H4(SP2 RP2; Z)".into(), top(&sp(&rp2(), 2), 4, Z), 0),
        ("H4(SP2 RP2; F2)".into(), top(&sp(&rp2(), 2), 4, F2), 1),
    ];
    let model = |p: &SurfacePresentation, n: usize, k: usize, c: Coefficients| {
        homology(&sp_chain_complex(p, n).unwrap(), c).unwrap()[k].clone()
    };
    all.push(("model H6(SP3 T; Z)".into(), model(&SurfacePresentation::torus(), 3, 6, Z), 1));
    for (name, p, r) in [("T", SurfacePresentation::torus(), 2), ("genus 2", SurfacePresentation::orientable(2), 4)] {
        for n in [2usize, 3] {
            let label = format!("model H{}(SP{n} {name}; F2)", 2 * n - 1);
            all.push((label, model(&p, n, 2 * n - 1, F2), r));
        }
    }
    for (label, group, betti) in &all {
        if !group.reliable || group.betti != *betti || !group.torsion.is_empty() {
            return Err(format!("{label} = {group}, expected rank {betti}"));
        }
    }
    Ok(all.iter().map(|(l, g, _)| format!("{l} has rank {}", g.betti)).collect::<Vec<_>>().join("; "))
}

fn c11() -> Outcome {
    let hw = homology(&w2_chain_model(&sphere(3).unwrap(), &opts()).unwrap(), Z).unwrap();
    expect("Sub3(S3,x0)", &hw, &g(&[(1, &[]), (0, &[]), (0, &[]), (0, &[]), (0, &[]), (0, &[2])]))?;
    Ok(format!("Sub3(S3,x0): {}", show(&hw)))
}

/// The property suites, run through the library's verification catalog.
fn c12() -> Outcome {
    let cases: Vec<_> = catalog().into_iter().filter(|c| c.criterion == 12).collect();
    let reports: Vec<_> = cases.par_iter().map(run_case).collect();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| r.status != Status::Pass)
        .map(|r| format!("{} {:?}: {}", r.id, r.status, r.computed))
        .collect();
    if !failed.is_empty() {
        return Err(failed.join("; "));
    }
    Ok(reports.iter().map(|r| r.id.as_str()).collect::<Vec<_>>().join(", "))
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, fn() -> Outcome); 12] = [
        (1, "Sub2(S1) = SP2(S1)", c1),
        (2, "barSub2(S1) = RP2, barSP2(S1) acyclic", c2),
        (3, "Sub3(S1) ~ S3, simply connected", c3),
        (4, "Sub4(S1) ~ S3", c4),
        (5, "SP2(S2), barSP2(S2), barSub2(S2)", c5),
        (6, "Sub3(S2)", c6),
        (7, "SP2(T) in two models", c7),
        (8, "Sub3(X,x0) in three models", c8),
        (9, "induced maps", c9),
        (10, "top dimension", c10),
        (11, "Sub3(S3,x0)", c11),
        (12, "property suites", c12),
    ];
    let mut failed = 0;
    for (k, title, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {k:>2} PASS  {title} ({secs:.1} s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k:>2} FAIL  {title} ({secs:.1} s): {msg}");
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
