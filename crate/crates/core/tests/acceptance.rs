//! One test per acceptance criterion; each prints a single PASS/FAIL line.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sharphardy::closed_form::{
    hardy_constant, sharp_constant_general_k_p2, sharp_constant_p2, ConstantKind, ExponentPair,
};
use sharphardy::identity::{
    ckn_extremal_check, config_rng, r_functional, random_ckn_config, random_e2_config, random_ep_config, verify_cknp,
    verify_e2, verify_ep, BoxRule,
};
use sharphardy::lemma::{default_eps_list as lemma_eps, lemma1_check, XiSpec};
use sharphardy::optimizer::maximize;
use sharphardy::params::{admissible_hardy, k_value, CknParams, HardyParams};
use sharphardy::quadrature::QuadratureSpec;
use sharphardy::rayleigh::{default_eps_list, default_sigma_list, sweep_and_extrapolate, sweep_spec};
use sharphardy::special::{beta, sin_power_integral, sin_power_integral_numeric};
use sharphardy::weight::{adapted_step, default_step, divergence_oracle, weight_p2, weight_p2_scale, Norms, WeightSpec};

fn report(id: u32, name: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} [{name}]: {status} ({detail})");
    assert!(pass, "criterion {id} failed: {detail}");
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

#[test]
fn criterion_01_reference_constant() {
    let params = HardyParams::new(3, 2.0, -0.5, -0.5).unwrap();
    let start = Instant::now();
    let c = hardy_constant(&params).unwrap();
    let elapsed = start.elapsed();
    let expected = (2.0 * 3f64.sqrt() - 3.0) / 4.0;
    let err = (c.value - expected).abs();
    let pass = err <= 1e-12 && c.kind == ConstantKind::Sharp && elapsed < Duration::from_millis(1);
    report(1, "reference constant", pass, format!("C = {:.17}, |err| = {err:.2e}, {:?}", c.value, elapsed));
}

#[test]
fn criterion_02_equal_exponents_formula() {
    let mut worst: f64 = 0.0;
    for n in 3..=10usize {
        let params = HardyParams::new(n, 2.0, -0.5, -0.5).unwrap();
        let c = sharp_constant_p2(&params).unwrap().value;
        let nf = n as f64;
        let expected = (nf * nf - 6.0 * nf + 6.0) / 4.0 + (2.0 * nf - 3.0).sqrt() / 2.0;
        worst = worst.max((c - expected).abs());
    }
    report(2, "equal exponents formula", worst <= 1e-12, format!("max |err| = {worst:.2e} over n = 3..10"));
}

fn random_admissible(rng: &mut ChaCha8Rng, n: usize, k: usize) -> HardyParams {
    loop {
        let a = rng.gen_range(-2.0..2.0);
        let b = rng.gen_range(-2.0..2.0);
        let params = HardyParams::with_k(n, k, 2.0, a, b).unwrap();
        if admissible_hardy(&params) {
            return params;
        }
    }
}

#[test]
fn criterion_03_oracle_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let n = rng.gen_range(2..=5);
        let params = random_admissible(&mut rng, n, n - 1);
        let closed = sharp_constant_p2(&params).unwrap().value;
        match maximize(&params) {
            Ok(r) => {
                let d = (r.value - closed).abs() / (1.0 + closed.abs());
                worst = worst.max(d);
                if d > 1e-6 {
                    failures.push(format!("#{i} {params:?}: {} vs {closed}", r.value));
                }
            }
            Err(e) => failures.push(format!("#{i} {params:?}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    for f in &failures {
        println!("  mismatch {f}");
    }
    let pass = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(3, "oracle agreement", pass, format!("200 instances, max scaled diff {worst:.2e}, {}", secs(elapsed)));
}

#[test]
fn criterion_04_general_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(4048);
    let mut findings = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = rng.gen_range(3..=5);
        let k = rng.gen_range(1..=n - 2);
        let params = random_admissible(&mut rng, n, k);
        let conj = sharp_constant_general_k_p2(&params).unwrap();
        assert_eq!(conj.kind, ConstantKind::Conjectured);
        match maximize(&params) {
            Ok(r) => {
                let d = (r.value - conj.value).abs();
                worst = worst.max(d);
                if d > 1e-6 {
                    findings.push(format!("#{i} n={n} k={k} {params:?}: optimizer {} vs {}", r.value, conj.value));
                }
            }
            Err(e) => findings.push(format!("#{i} {params:?}: {e}")),
        }
    }
    for f in &findings {
        println!("  finding {f}");
    }
    report(4, "general k", findings.is_empty(), format!("100 instances, max |diff| {worst:.2e}"));
}

#[test]
fn criterion_05_sweep_k_gt_1() {
    let params = HardyParams::new(3, 2.0, -0.5, -0.5).unwrap();
    let start = Instant::now();
    let r = sweep_and_extrapolate(&params, &default_eps_list(), &[], &sweep_spec()).unwrap();
    let elapsed = start.elapsed();
    let c = r.constant.value;
    let above = r.rows.iter().all(|row| row.quotient >= c * (1.0 - 1e-6));
    let decreasing = r.rows.windows(2).all(|w| w[1].quotient < w[0].quotient);
    let rel = (r.extrapolated - c).abs() / c;
    for row in &r.rows {
        println!("  eps {:e}: Q = {:.12}", row.epsilon, row.quotient);
    }
    let pass = above && decreasing && rel <= 0.02 && elapsed < Duration::from_secs(30);
    report(
        5,
        "sweep K > 1",
        pass,
        format!("limit {:.8} vs C {c:.8}, rel {rel:.2e}, above {above}, decreasing {decreasing}, {}", r.extrapolated, secs(elapsed)),
    );
}

#[test]
fn criterion_06_sweep_general_p() {
    let params = HardyParams::new(3, 3.0, 0.0, 0.5).unwrap();
    let start = Instant::now();
    let r = sweep_and_extrapolate(&params, &default_eps_list(), &default_sigma_list(), &sweep_spec()).unwrap();
    let elapsed = start.elapsed();
    let c = (2.0f64 / 3.0).powi(3);
    let rel = (r.extrapolated - c).abs() / c;
    let pass = (r.constant.value - c).abs() <= 1e-15 && rel <= 0.02 && elapsed < Duration::from_secs(120);
    report(6, "sweep general p", pass, format!("limit {:.8} vs {c:.8}, rel {rel:.2e}, {}", r.extrapolated, secs(elapsed)));
}

#[test]
fn criterion_07_sweep_k_le_1() {
    let params = HardyParams::new(3, 2.0, 0.0, -0.05).unwrap();
    let start = Instant::now();
    let r = sweep_and_extrapolate(&params, &default_eps_list(), &default_sigma_list(), &sweep_spec()).unwrap();
    let elapsed = start.elapsed();
    let c = 1.0;
    let rel = (r.extrapolated - c).abs() / c;
    report(7, "sweep K <= 1", rel <= 0.02, format!("limit {:.8} vs {c}, rel {rel:.2e}, {}", r.extrapolated, secs(elapsed)));
}

#[test]
fn criterion_08_identity_suite() {
    let rule = BoxRule::default();
    let start = Instant::now();
    let mut e2: f64 = 0.0;
    for i in 0..20 {
        let (w, u) = random_e2_config(&mut config_rng(8, i));
        e2 = e2.max(verify_e2(&w, &u, &rule).unwrap().residual_rel);
    }
    let ps = [1.5, 2.0, 3.0, 4.0];
    let mut ep: f64 = 0.0;
    for i in 0..20u64 {
        let (w, u) = random_ep_config(&mut config_rng(80, i), ps[i as usize % ps.len()]);
        ep = ep.max(verify_ep(&w, &u, &rule).unwrap().residual_rel);
    }
    let mut ckn: f64 = 0.0;
    let mut slack = f64::INFINITY;
    let mut weight_check: f64 = 0.0;
    for i in 0..10 {
        let (c, u) = random_ckn_config(&mut config_rng(800, i));
        let r = verify_cknp(&c, &u, &rule).unwrap();
        ckn = ckn.max(r.residual_rel);
        slack = slack.min(r.slack.unwrap());
        weight_check = weight_check.max(r.weight_check_rel.unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8000);
    let mut r_min = f64::INFINITY;
    let mut r_errors = 0;
    for _ in 0..100_000 {
        let dim = rng.gen_range(1..=4);
        let p = rng.gen_range(1.0..=5.0f64).max(1.0 + 1e-9);
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
        match r_functional(&x, &y, p) {
            Ok(v) => r_min = r_min.min(v),
            Err(_) => r_errors += 1,
        }
    }
    let pass = e2 <= 1e-6 && ep <= 1e-5 && ckn <= 1e-5 && slack >= -1e-8 && weight_check <= 1e-6 && r_min >= -1e-12 && r_errors == 0;
    report(
        8,
        "identity suite",
        pass,
        format!(
            "E2 {e2:.2e}, Ep {ep:.2e}, CKNp {ckn:.2e}, CKN weight {weight_check:.2e}, slack {slack:.2e}, min R {r_min:.2e}, {}",
            secs(start.elapsed())
        ),
    );
}

#[test]
fn criterion_09_ckn_extremal() {
    let ckn = CknParams::new(3, 2.0, 0.0, 0.0, 0.0, -0.5, 0.0, 0.0).unwrap();
    let r = ckn_extremal_check(&ckn, &QuadratureSpec::default()).unwrap();
    let pass = (r.quotient - 1.0).abs() <= 1e-3 && r.residual_r_max <= 1e-12 && (r.constant - 1.0).abs() <= 1e-15;
    report(9, "CKN extremal", pass, format!("quotient {:.12}, max R {:.2e}, R_max {}", r.quotient, r.residual_r_max, r.r_max));
}

#[test]
fn criterion_10_special_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut beta_err: f64 = 0.0;
    for _ in 0..1000 {
        let t = rng.gen_range(0.05..30.0);
        let g = rng.gen_range(0.05..30.0);
        let lhs = beta(t + 1.0, g).unwrap();
        let rhs = t / (t + g) * beta(t, g).unwrap();
        beta_err = beta_err.max((lhs - rhs).abs() / rhs.abs());
    }
    let spec = QuadratureSpec::default();
    let mut sin_err: f64 = 0.0;
    for i in 0..50 {
        let lam = -0.9 + 10.9 * i as f64 / 49.0;
        let closed = sin_power_integral(lam).unwrap();
        let numeric = sin_power_integral_numeric(lam, &spec).unwrap();
        sin_err = sin_err.max((numeric - closed).abs() / closed);
    }
    let k = k_value(3, -0.5, -0.5);
    let b = -0.5f64;
    let kernels = [XiSpec::new(2.0 * b - 1.0 + k.sqrt(), -b - k.sqrt() / 2.0).unwrap(), XiSpec::new(1.0, -1.0).unwrap()];
    let eps = lemma_eps();
    let mut pos_slope: f64 = 0.0;
    for xi in &kernels {
        pos_slope = pos_slope.max(lemma1_check(xi, &eps, &spec).unwrap().slope_vs_log_eps.abs());
    }
    let neg_slope = lemma1_check(&XiSpec::new(1.0, -0.6).unwrap(), &eps, &spec).unwrap().slope_vs_log_eps.abs();
    let pass = beta_err <= 1e-13 && sin_err <= 1e-9 && pos_slope <= 1e-2 && neg_slope >= 0.1;
    report(
        10,
        "special functions",
        pass,
        format!("beta rec {beta_err:.2e}, sin power {sin_err:.2e}, lemma slopes {pos_slope:.2e} / {neg_slope:.2e}"),
    );
}

/// Closed-form weight against the divergence oracle, relative to the size
/// of the two weight terms so that points where they cancel are not penalised.
fn weight_error(spec: &WeightSpec, x: &[f64]) -> f64 {
    let closed = weight_p2(x, spec).unwrap();
    let fd = divergence_oracle(&|z: &[f64]| spec.v(z), &|z: &[f64]| spec.f(z), x, adapted_step(x, spec.params.k())).unwrap();
    let scale = weight_p2_scale(x, spec).unwrap();
    (closed - fd).abs() / scale.max(closed.abs()).max(f64::MIN_POSITIVE)
}

#[test]
fn criterion_11_weight_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(2..=5);
        let params = random_admissible(&mut rng, n, n - 1);
        let pair = ExponentPair::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let spec = WeightSpec::pair(params, pair);
        let mut count = 0;
        while count < 50 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let nm = Norms::of(&x, n - 1);
            if nm.x < 0.2 || nm.y < 0.25 * nm.x {
                continue;
            }
            worst = worst.max(weight_error(&spec, &x));
            count += 1;
        }
    }
    let mut leray: f64 = 0.0;
    let v = |x: &[f64]| x[0].abs() / x[0].hypot(x[1]);
    let f = |x: &[f64]| (-(x[0].hypot(x[1])).ln()).sqrt();
    let mut count = 0;
    while count < 50 {
        let x: [f64; 2] = [rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0)];
        let r = x[0].hypot(x[1]);
        if !(0.05..=0.9).contains(&r) || x[0] < 0.05 {
            continue;
        }
        let expected = x[0].abs() / (4.0 * r.powi(3) * r.ln().powi(2));
        let w = divergence_oracle(&v, &f, &x, default_step(&x)).unwrap();
        leray = leray.max((w - expected).abs() / expected);
        count += 1;
    }
    report(11, "weight oracle", worst <= 1e-6 && leray <= 1e-6, format!("weight_p2 {worst:.2e} over 1000 points, Leray {leray:.2e}"));
}
