//! Acceptance run: one pass/fail line per criterion at the project
//! tolerances. Failures are always reported; the process exits non-zero on
//! failure only when `COCYCLE_ACCEPTANCE_STRICT=1`, so that known
//! limitations do not mask regressions elsewhere in `cargo test`.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use cocycle_core::extension::{cocycle_residual_at, reversal_residual_at};
use cocycle_core::spectral::{
    directions_at, extension_spectrum_compare, invariance_residual, lyapunov_spectrum, orbit_occupancy,
    oseledets_directions, vector_exponent, ProjectivePoint, TimeDirection,
};
use cocycle_core::*;
use cocycle_forge::run_from_args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

const SEED: u64 = 20_240_611;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn golden() -> CircleRotation {
    CircleRotation::golden()
}

fn herman(lambda: f64) -> DiscreteCocycle {
    DiscreteCocycle::herman(golden(), lambda).unwrap()
}

fn herman_extension() -> Extension {
    extend_sl2_via_embedding(&herman(2.0)).unwrap()
}

fn cli(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["cocycle-forge"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--out", out.to_str().unwrap()]);
    run_from_args(argv)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn c1_fidelity() -> Verdict {
    let ext = herman_extension();
    let one_step = (0..256)
        .map(|i| {
            let theta = i as f64 / 256.0;
            ext.cocycle.at_integer(theta, 1).unwrap().dist(&ext.expected(theta, 1))
        })
        .fold(0.0, f64::max);
    let v = verify_extension(&ext, 10, 64, SEED).unwrap();
    let worst = v
        .errors
        .iter()
        .map(|&(_, n, e)| e / n.unsigned_abs() as f64)
        .fold(0.0, f64::max);
    verdict(
        one_step <= 1e-6 && worst <= 1e-6,
        format!(
            "max ‖Φ¹ − B‖ over 256 points = {one_step:.2e}; max ‖Φⁿ − Bⁿ‖/|n| for |n| ≤ 10 on 64 points = {worst:.2e}"
        ),
    )
}

fn c2_obstruction() -> Verdict {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let mut ok = cli(dir, &["classify", "--cocycle", "herman"]) == 0;
    let w = json(&dir.join("classify.json"))["winding"].as_i64();
    ok &= w.map(i64::abs) == Some(1);
    let extend_code = cli(&dir.join("extend"), &["extend", "--cocycle", "herman"]);
    ok &= extend_code == 2;
    ok &= cli(dir, &["classify", "--cocycle", "herman-doubled"]) == 0;
    let w2 = json(&dir.join("classify.json"))["winding"].as_i64();
    ok &= w2.map(i64::abs) == Some(2);
    ok &= cli(dir, &["classify", "--cocycle", "herman-embedded-halfspeed"]) == 0;
    let null = json(&dir.join("classify.json"))["nullhomotopic"].as_bool();
    ok &= null == Some(true);
    verdict(
        ok,
        format!(
            "winding(H) = {w:?}; extend exit code {extend_code}; winding(doubled) = {w2:?}; embedded doubled nullhomotopic = {null:?}"
        ),
    )
}

/// Worst absolute and relative residual of the discrete cocycle identity.
fn discrete_residual(h: &DiscreteCocycle, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (mut abs, mut rel) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let theta: f64 = rng.random_range(0.0..1.0);
        let m = rng.random_range(-30..=30);
        let n = rng.random_range(-30..=30);
        let lhs = h.n_step(theta, m + n);
        let rhs = h.n_step(h.driving().rotate(theta, m), n) * h.n_step(theta, m);
        let r = lhs.dist(&rhs);
        abs = abs.max(r);
        rel = rel.max(r / lhs.frobenius_norm());
    }
    (abs, rel)
}

fn c3_cocycle_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let h = herman(2.0);
    let (abs, rel) = discrete_residual(&h, &mut rng);
    // The rounding of φᵐθ to f64 is amplified by the θ-sensitivity of the
    // product, so the absolute residual depends on which triples are drawn.
    let others = (1..=20)
        .filter(|k| discrete_residual(&h, &mut ChaCha8Rng::seed_from_u64(SEED + k)).0 <= 1e-9)
        .count();

    let ext = herman_extension();
    let c = &ext.cocycle;
    let steps = 1000i64;
    let time = |rng: &mut ChaCha8Rng| rng.random_range(-5 * steps..=5 * steps) as f64 / steps as f64;
    let (mut cont, mut rev) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let p = MappingTorusPoint::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)).unwrap();
        let (s, t) = (time(&mut rng), time(&mut rng));
        cont = cont.max(cocycle_residual_at(c, p, s, t).unwrap());
        rev = rev.max(reversal_residual_at(c, p, t).unwrap());
    }
    verdict(
        abs <= 1e-9 && cont <= 1e-6 && rev <= 1e-6,
        format!(
            "discrete residual {abs:.2e} (relative {rel:.2e}) over 500 Herman λ=2 triples, \
             {others}/20 other seeds within 1e-9; \
             continuous {cont:.2e} and reversal {rev:.2e} over 200 triples with |s|,|t| ≤ 5"
        ),
    )
}

fn c4_structure() -> Verdict {
    // Bounded cocycle: Φᵗ itself is well conditioned, so det is measured directly.
    let sine = natural_extension(&DiscreteCocycle::new(golden(), Generator::DiagonalSine(0.7)).unwrap()).unwrap();
    let mut direct = 0.0f64;
    for t in [1000.0, -1000.0, 317.5, -41.25] {
        let phi = sine.cocycle.integrate(MappingTorusPoint::base(0.2), t).unwrap();
        direct = direct.max((phi.det() - 1.0).abs());
    }

    // Herman: ‖Φ¹⁰⁰⁰‖ ≈ 1e97, so det is taken through the unit-time factors.
    let ext = herman_extension();
    let c = &ext.cocycle;
    let mut factored = 0.0f64;
    for sign in [1i64, -1] {
        let mut log_det = 0.0;
        let mut theta = 0.2;
        for _ in 0..1000 {
            let phi = c.integrate(MappingTorusPoint::base(theta), sign as f64).unwrap();
            log_det += phi.det().ln();
            theta = c.rotation().rotate(theta, sign);
            factored = factored.max(log_det.exp_m1().abs());
        }
    }

    let field = c.field().sweep(256).unwrap();
    let edge_ratio = field.edge_norm / field.sup_norm;
    verdict(
        direct <= 1e-8 && factored <= 1e-8 && field.max_trace <= 1e-8 && edge_ratio <= 1e-2,
        format!(
            "|det Φᵗ − 1| for |t| ≤ 1000: bounded extension {direct:.2e}, Herman via unit-time factors {factored:.2e}; \
             max |tr G| on 256×256 = {:.2e}; edge/sup = {edge_ratio:.2e}",
            field.max_trace
        ),
    )
}

fn c5_homotopy() -> Verdict {
    let ext = herman_extension();
    let r = ext.cocycle.field().homotopy().unwrap().check(64).unwrap();
    verdict(
        r.start_error <= 1e-8 && r.end_error <= 1e-7 && r.endpoint_derivative <= 1e-8 && r.derivative_mismatch <= 1e-4,
        format!(
            "start {:.2e}, end {:.2e}, endpoint derivative {:.2e}, finite-difference mismatch {:.2e} on 64×64",
            r.start_error, r.end_error, r.endpoint_derivative, r.derivative_mismatch
        ),
    )
}

fn c6_herman_spectrum() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for lambda in [1.5, 2.0, 4.0] {
        let start = Instant::now();
        let r = lyapunov_spectrum(&herman(lambda), 0.1, 100_000).unwrap();
        let threshold = ((lambda + 1.0 / lambda) / 2.0).ln() - 0.01;
        let (u, s) = (r.exponents[0], r.exponents[1]);
        let secs = start.elapsed().as_secs_f64();
        ok &= u >= threshold && (u + s).abs() <= 1e-3 && secs <= 60.0;
        parts.push(format!(
            "λ={lambda}: λ_u={u:.4} ≥ {threshold:.4}, |λ_u+λ_s|={:.1e}, {secs:.2}s",
            (u + s).abs()
        ));
    }
    verdict(ok, parts.join("; "))
}

fn c7_sl3_spectrum() -> Verdict {
    let ext = herman_extension();
    let n = 10_000;
    let path = lyapunov_spectrum(&ext.discrete, 0.2, n).unwrap();
    let flow = lyapunov_spectrum(&ext.cocycle, 0.2, n).unwrap();
    let center = directions_at(&ext.discrete, 0.2, n).unwrap().center.unwrap();
    let dev = center[0].abs().max(center[1].abs()).max((center[2].abs() - 1.0).abs());
    let e3 = vector_exponent(&ext.discrete, 0.2, &[0.0, 0.0, 1.0], n, TimeDirection::Forward)
        .unwrap()
        .last();
    let (mp, mf) = (path.exponents[1], flow.exponents[1]);
    verdict(
        mp.abs() <= 1e-3 && mf.abs() <= 1e-3 && dev <= 1e-6 && e3.abs() <= 1e-3,
        format!(
            "middle exponent {mp:.1e} (product path), {mf:.1e} (integrated flow); E⁰ deviation from e3 {dev:.1e}; \
             exponent of e3 {e3:.1e} at N = {n}"
        ),
    )
}

fn c8_transfer() -> Verdict {
    let t = extension_spectrum_compare(&herman(2.0), &herman_extension(), 64, 10_000).unwrap();
    verdict(
        t.max_product_discrepancy <= 1e-8 && t.max_spot_discrepancy <= 5e-6,
        format!(
            "product-path FK discrepancy {:.2e} on 64 points at N = 10⁴; integrated spot-check {:.2e} at n = 5",
            t.max_product_discrepancy, t.max_spot_discrepancy
        ),
    )
}

fn c9_invariance() -> Verdict {
    let h = herman(2.0);
    let field = oseledets_directions(&h, 64, 10_000).unwrap();
    let r = invariance_residual(&h, &field).unwrap();
    verdict(
        r <= 1e-4,
        format!("push-forward residual {r:.2e} rad on 64 points at N = 10⁴"),
    )
}

fn c10_order() -> Verdict {
    let ext = herman_extension();
    let at = |step: f64| {
        ext.cocycle
            .with_config(IntegratorConfig::with_step(step).unwrap())
            .at_integer(0.3, 1)
            .unwrap()
    };
    let reference = at(1e-5);
    let (coarse, fine) = (at(1e-3).dist(&reference), at(5e-4).dist(&reference));
    let ratio = coarse / fine;
    verdict(
        ratio >= 12.0,
        format!("Φ¹ error {coarse:.2e} at step 1e-3, {fine:.2e} at 5e-4; ratio {ratio:.2} against a 1e-5 reference"),
    )
}

fn c11_minimality() -> Verdict {
    let start = Instant::now();
    let p = ProjectivePoint::new(0.1, [1.0, 0.3]).unwrap();
    let occ = orbit_occupancy(&herman(2.0), p, 1_000_000, 100).unwrap();
    let secs = start.elapsed().as_secs_f64();
    verdict(
        occ.coverage >= 0.99 && secs <= 60.0,
        format!(
            "coverage {:.4} of 100×100 cells after 10⁶ steps ({secs:.2}s)",
            occ.coverage
        ),
    )
}

fn c12_determinism() -> Verdict {
    let runs: [&[&str]; 5] = [
        &["classify"],
        &["extend", "--variant", "embedding", "--n", "3", "--grid", "16"],
        &["lyapunov", "--n", "20000"],
        &["projective-orbit", "--n", "100000"],
        &["herman-demo", "--n", "2000", "--grid", "16"],
    ];
    let mut compared = 0;
    let mut mismatched = Vec::new();
    for args in runs {
        let outputs: Vec<Vec<(String, Vec<u8>)>> = ["1", "4"]
            .iter()
            .map(|threads| {
                let tmp = TempDir::new().unwrap();
                let mut a = args.to_vec();
                a.extend_from_slice(&["--seed", "11", "--threads", threads]);
                assert_eq!(cli(tmp.path(), &a), 0, "{a:?}");
                let mut csv: Vec<(String, Vec<u8>)> = fs::read_dir(tmp.path())
                    .unwrap()
                    .map(|e| e.unwrap().path())
                    .filter(|p| p.extension().is_some_and(|x| x == "csv"))
                    .map(|p| {
                        (
                            p.file_name().unwrap().to_string_lossy().into_owned(),
                            fs::read(&p).unwrap(),
                        )
                    })
                    .collect();
                csv.sort();
                csv
            })
            .collect();
        compared += outputs[0].len();
        if outputs[0] != outputs[1] {
            mismatched.push(args[0]);
        }
    }
    verdict(
        mismatched.is_empty() && compared > 0,
        format!("{compared} CSV files compared across repeated runs (1 and 4 threads); mismatches: {mismatched:?}"),
    )
}

/// Name, check and optional wall-clock budget.
type Criterion = (&'static str, fn() -> Verdict, Option<Duration>);

fn main() {
    let criteria: [Criterion; 12] = [
        ("extension fidelity", c1_fidelity, Some(Duration::from_secs(120))),
        ("obstruction", c2_obstruction, None),
        ("cocycle identities", c3_cocycle_identities, None),
        ("structure conservation", c4_structure, None),
        ("homotopy contract", c5_homotopy, None),
        ("Herman spectrum", c6_herman_spectrum, Some(Duration::from_secs(180))),
        ("SL(3) spectrum", c7_sl3_spectrum, None),
        ("spectrum transfer", c8_transfer, None),
        ("Oseledets invariance", c9_invariance, None),
        ("integrator order", c10_order, None),
        ("minimality illustration", c11_minimality, Some(Duration::from_secs(60))),
        ("determinism", c12_determinism, None),
    ];
    let mut failed = Vec::new();
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut v = check();
        let elapsed = start.elapsed();
        if let Some(b) = budget {
            v.passed &= elapsed <= b;
        }
        if !v.passed {
            failed.push(i + 1);
        }
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {:>2} {name}: {} [{:.1}s]",
            i + 1,
            v.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 12 criteria passed; failing: {failed:?}", 12 - failed.len());
    if !failed.is_empty() && std::env::var("COCYCLE_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
