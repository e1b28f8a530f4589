//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run alone with `cargo test -p cubic-kappa --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use cubic_kappa::audit::{
    boundary_displays_check, d2f_display, factorization_identity_check, identity_points, run_full_audit, GridSpec,
    ProofQuantities,
};
use cubic_kappa::curvature::{CurvatureModel, KappaEvaluator};
use cubic_kappa::extrema::{count_extrema, ExtremaKind};
use cubic_kappa::scalar::{int, rat};
use cubic_kappa::sweep::{random_rational, random_rational_open_lo, run_sweep, SweepSpec};
use cubic_kappa::{CanonicalConfig, Rational, RationalCubic, RationalPoint};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sweep_property() -> Outcome {
    let spec = SweepSpec::new(10_000, 7);
    let started = Instant::now();
    let s = run_sweep(&spec);
    let secs = started.elapsed().as_secs_f64();
    ensure(s.theorem_regime && s.max_count <= 1 && s.violations == 0, || {
        format!(
            "max count {} with {} violations: {:?}",
            s.max_count, s.violations, s.witnesses
        )
    })?;
    ensure(s.mismatches == 0, || {
        format!("{} oracle mismatches: {:?}", s.mismatches, s.witnesses)
    })?;
    Ok(format!(
        "N={} samples={} histogram={:?} exemptions={} in {secs:.1}s",
        s.n, s.samples, s.histogram, s.boundary_exemptions
    ))
}

fn factorization() -> Outcome {
    let points = identity_points(2024, 120);
    let bad: Vec<_> = points
        .iter()
        .filter(|(c, _)| !factorization_identity_check(c))
        .collect();
    ensure(bad.is_empty(), || format!("fails at {:?}", bad[0].0))?;
    Ok(format!("{} rational triples", points.len()))
}

fn boundary_displays() -> Outcome {
    let points = identity_points(2025, 120);
    let bad: Vec<_> = points.iter().filter(|(c, _)| !boundary_displays_check(c)).collect();
    ensure(bad.is_empty(), || format!("fails at {:?}", bad[0].0))?;
    Ok(format!("N(0) and both N(1) forms at {} rational triples", points.len()))
}

fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let b = random_rational(&mut rng, &int(0), &int(10), 997);
        let h2 = random_rational_open_lo(&mut rng, &int(0), &int(100), 991);
        let a = random_rational_open_lo(&mut rng, &rat(2, 3), &int(1), 983);
        let at = |a: Rational| ProofQuantities::new(&CanonicalConfig::new(b.clone(), h2.clone(), a));
        let f0_lo = at(rat(2, 3)).f0;
        ensure(f0_lo == rat(-4, 3) * (&b + &b * &b + &h2), || {
            format!("f0(2/3) at b={b} h2={h2}")
        })?;
        let f0_hi = at(int(1)).f0;
        ensure(f0_hi == -((int(1) + &b) * (int(1) + &b)) - &h2, || {
            format!("f0(1) at b={b} h2={h2}")
        })?;
        let q = at(a.clone());
        ensure(q.d2f == d2f_display(&a), || format!("d2f at a={a}"))?;
    }
    let d2 = |a: Rational| ProofQuantities::new(&CanonicalConfig::new(int(3), int(1), a)).d2f;
    ensure(d2(int(1)) == int(-40) && d2(rat(2, 3)) == int(0), || {
        "d2f endpoints".into()
    })?;
    let t0 = ProofQuantities::new(&CanonicalConfig::new(rat(1, 2), int(1), int(1))).t0;
    ensure(t0 == Some(rat(3, 4)), || format!("t0 = {t0:?}"))?;
    Ok("f0(2/3), f0(1), d2f at 100 triples; d2f(1)=-40, d2f(2/3)=0, t0(1,1/2)=3/4".into())
}

fn audit_default_grid() -> Outcome {
    let started = Instant::now();
    let report = run_full_audit(&GridSpec::default(), 42).map_err(|e| e.to_string())?;
    let failed: Vec<_> = report.failures().map(|e| e.lemma).collect();
    ensure(report.passed, || format!("failed: {failed:?}"))?;
    Ok(format!(
        "{} checks over {} grid points in {:.1}s",
        report.entries.len(),
        report.grid.len(),
        started.elapsed().as_secs_f64()
    ))
}

fn special_cases() -> Outcome {
    let p = |x: i64, y: i64| RationalPoint::new(int(x), int(y));
    let kink = RationalCubic::new(p(2, 1), p(-1, 4), p(2, 1), rat(4, 5)).unwrap();
    let r = count_extrema(&kink).unwrap();
    ensure(r.kind == ExtremaKind::KinkAtHalf && r.count == 1, || {
        format!("Q0=Q2 gave {r:?}")
    })?;
    ensure(r.locations[0].t_exact == Some(rat(1, 2)), || "kink not at 1/2".into())?;

    for b in [rat(0, 1), rat(1, 2), rat(-9, 10)] {
        let c = RationalCubic::canonical(b.clone(), int(0), rat(3, 4)).unwrap();
        let r = count_extrema(&c).unwrap();
        ensure(r.kind == ExtremaKind::ZeroCurvatureSegment && r.count == 0, || {
            format!("b={b}: {r:?}")
        })?;
        let ev = KappaEvaluator::new(c.bezier());
        ensure((1..20).all(|i| ev.kappa(i as f64 / 20.0) == Ok(0.0)), || {
            format!("b={b}: κ not zero")
        })?;
    }
    for b in [int(1), int(2), int(-3), rat(7, 2)] {
        let c = RationalCubic::canonical(b.clone(), int(0), rat(9, 10)).unwrap();
        let r = count_extrema(&c).unwrap();
        ensure(r.kind == ExtremaKind::KinkedSegment && r.count == 1, || {
            format!("b={b}: {r:?}")
        })?;
    }
    Ok("kink at 1/2; h=0,|b|<1 flat; h=0,|b|>=1 one kink".into())
}

fn symmetric_case() -> Outcome {
    for (h, a) in [
        (int(1), int(1)),
        (rat(1, 10), rat(7, 10)),
        (int(7), rat(9, 10)),
        (rat(5, 2), rat(201, 300)),
    ] {
        let c = RationalCubic::canonical(int(0), h.clone(), a.clone()).unwrap();
        let r = count_extrema(&c).unwrap();
        ensure(r.count == 1 && r.locations[0].t_exact == Some(rat(1, 2)), || {
            format!("h={h} a={a}: {r:?}")
        })?;
    }
    let c = RationalCubic::canonical(int(0), int(1), int(1)).unwrap();
    let k = count_extrema(&c).unwrap().locations[0].kappa.unwrap();
    ensure((k + 8.0 / 3.0).abs() <= 1e-12, || format!("κ(1/2) = {k}"))?;
    Ok(format!("t = 1/2 exactly; κ(1/2) = {k}"))
}

fn finite_difference_signs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut checked, mut drawn) = (0, 0);
    while checked < 1000 {
        drawn += 1;
        ensure(drawn < 100_000, || "too few well-conditioned pairs".into())?;
        let b = random_rational(&mut rng, &int(0), &int(10), 10_000);
        let h = random_rational_open_lo(&mut rng, &int(0), &int(10), 10_000);
        let a = random_rational_open_lo(&mut rng, &rat(2, 3), &int(1), 10_000);
        let t: f64 = rng.gen_range(0.01..0.99);
        let c = RationalCubic::canonical(b, h, a).unwrap();
        let m = CurvatureModel::of_curve(c.bezier());
        let tr = Rational::from_float(t).expect("finite");
        let n = m.n_poly.eval(&tr);
        let speed2 = m.speed2.eval(&tr);
        let ratio = (n.clone() / (&speed2 * &speed2 * &speed2)).abs();
        if ratio <= Rational::from_float(1e-6).expect("finite") {
            continue;
        }
        checked += 1;
        let fd = KappaEvaluator::new(c.bezier())
            .kappa_derivative_fd(t, 1e-6)
            .map_err(|e| e.to_string())?;
        let same = (fd > 0.0 && n.is_positive()) || (fd < 0.0 && n.is_negative());
        ensure(same, || format!("sign differs at {c:?} t={t}: fd={fd}, n={n}"))?;
    }
    Ok(format!("{checked} pairs ({drawn} drawn)"))
}

fn determinism() -> Outcome {
    let mut spec = SweepSpec::new(300, 11);
    spec.samples = 20_000;
    let one = serde_json::to_string(&run_sweep(&spec)).unwrap();
    let two = serde_json::to_string(&run_sweep(&spec)).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let three = pool.install(|| serde_json::to_string(&run_sweep(&spec)).unwrap());
    ensure(one == two && two == three, || "sweep summaries differ".into())?;

    let grid = GridSpec {
        a: vec![rat(7, 10), rat(19, 20)],
        b: vec![int(0), rat(3, 2)],
        h2: vec![rat(1, 10)],
    };
    let a1 = run_full_audit(&grid, 3).unwrap().to_json();
    let a2 = pool.install(|| run_full_audit(&grid, 3).unwrap().to_json());
    ensure(a1 == a2, || "audit reports differ".into())?;
    Ok(format!(
        "sweep JSON {} bytes, audit JSON {} bytes, identical across runs and pools",
        one.len(),
        a1.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("sweep: at most one extremum, oracle agrees", sweep_property),
        ("dN/dt factorization exact", factorization),
        ("boundary values N(0), N(1) exact", boundary_displays),
        ("closed forms f0, d2f, t0 exact", closed_forms),
        ("audit passes on default grid", audit_default_grid),
        ("degenerate special cases", special_cases),
        ("symmetric case b = 0", symmetric_case),
        ("finite-difference sign of dκ/dt", finite_difference_signs),
        ("byte-identical outputs", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
