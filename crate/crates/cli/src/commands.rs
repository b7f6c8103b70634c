use std::fs;

use serde_json::{json, Value};

use sharphardy::closed_form::{ckn_constant, hardy_constant, ConstantKind};
use sharphardy::identity::{ckn_extremal_check, verify_cknp, BoxRule};
use sharphardy::bump::BumpFunction;
use sharphardy::optimizer::maximize;
use sharphardy::params::{admissible_ckn, admissible_hardy, compute_k, CknParams, HardyParams};
use sharphardy::quadrature::QuadratureSpec;
use sharphardy::rayleigh::{
    default_eps_list, default_sigma_list, select_family, sweep_and_extrapolate, sweep_spec, FamilyKind, SweepResult,
};

use crate::cli::{CknArgs, CknExponents, ConstantArgs, HardyArgs, RayleighArgs, ReportArgs, VerifyArgs, Which};
use crate::config::{parse_list, Settings};
use crate::error::CliError;
use crate::suites::{self, Batch};

/// Columns of every sweep table.
pub const SWEEP_COLUMNS: [&str; 5] = ["epsilon", "sigma", "numerator", "denominator", "quotient"];

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<String>,
}

#[derive(Debug)]
pub struct Outcome {
    pub result: Value,
    pub passed: bool,
    pub tables: Vec<Table>,
    /// Overrides the 0/1 exit code derived from `passed`.
    pub exit_code: Option<i32>,
}

impl Outcome {
    fn new(result: Value, passed: bool) -> Self {
        Self { result, passed, tables: Vec::new(), exit_code: None }
    }
}

fn hardy_params(args: &HardyArgs, s: &mut Settings) -> Result<HardyParams, CliError> {
    let n: usize = s.required("n", args.n)?;
    if n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
    }
    let k = s.with_default("k", args.k, n - 1)?;
    let p = s.with_default("p", args.p, 2.0)?;
    let alpha = s.required("alpha", args.alpha)?;
    let beta = s.required("beta", args.beta)?;
    Ok(HardyParams::with_k(n, k, p, alpha, beta)?)
}

fn ckn_params(args: &HardyArgs, e: &CknExponents, s: &mut Settings) -> Result<CknParams, CliError> {
    let n: usize = s.required("n", args.n)?;
    let p = s.with_default("p", args.p, 2.0)?;
    let alpha = s.required("alpha", args.alpha)?;
    let beta = s.required("beta", args.beta)?;
    let mu = s.required("mu", e.mu)?;
    let g1 = s.required("gamma1", e.gamma1)?;
    let g2 = s.required("gamma2", e.gamma2)?;
    let g3 = s.required("gamma3", e.gamma3)?;
    Ok(CknParams::new(n, p, alpha, beta, mu, g1, g2, g3)?)
}

fn inadmissible(result: Value, violations: &[String]) -> Outcome {
    let mut out = Outcome::new(result, false);
    out.exit_code = Some(2);
    eprintln!("inadmissible parameters: {}", violations.join("; "));
    out
}

pub fn constant(args: &ConstantArgs, s: &mut Settings) -> Result<Outcome, CliError> {
    if s.switch("ckn", args.ckn)? {
        let ckn = ckn_params(&args.hardy, &args.ckn_exponents, s)?;
        let flags = admissible_ckn(&ckn);
        if !(flags.integrable && flags.balanced) {
            let v = ckn.violations();
            return Ok(inadmissible(json!({ "admissible": false, "conditions": flags, "violations": v }), &v));
        }
        let c = ckn_constant(&ckn)?;
        let result = json!({
            "admissible": true, "conditions": flags, "K": null, "regime": null,
            "constant": c.value, "kind": c.kind, "branch": c.branch,
        });
        return Ok(Outcome::new(result, true));
    }
    let params = hardy_params(&args.hardy, s)?;
    if !admissible_hardy(&params) {
        let v = params.violations();
        return Ok(inadmissible(json!({ "admissible": false, "violations": v }), &v));
    }
    // K and its regime belong to the p = 2 theory
    let regime = if params.p() == 2.0 { Some(compute_k(&params)?) } else { None };
    let c = hardy_constant(&params)?;
    let result = json!({
        "admissible": true,
        "K": regime.map(|r| r.k_value),
        "regime": regime.map(|r| r.family.label()),
        "constant": c.value, "kind": c.kind, "branch": c.branch,
    });
    Ok(Outcome::new(result, true))
}

pub fn optimize(args: &HardyArgs, s: &mut Settings) -> Result<Outcome, CliError> {
    let params = hardy_params(args, s)?;
    if !admissible_hardy(&params) {
        let v = params.violations();
        return Ok(inadmissible(json!({ "admissible": false, "violations": v }), &v));
    }
    let report = maximize(&params)?;
    let closed = hardy_constant(&params)?;
    let discrepancy = (report.value - closed.value).abs();
    let passed = discrepancy <= 1e-6 * (1.0 + closed.value.abs());
    let result = json!({ "report": report, "closed_form": closed, "discrepancy": discrepancy, "agree": passed });
    Ok(Outcome::new(result, passed))
}

fn sweep_table(name: &str, r: &SweepResult) -> Table {
    Table {
        name: name.to_string(),
        header: SWEEP_COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows: r
            .rows
            .iter()
            .map(|row| {
                [row.epsilon, row.sigma, row.numerator, row.denominator, row.quotient].iter().map(|v| v.to_string()).collect()
            })
            .collect(),
        footer: vec![format!("extrapolated={}", r.extrapolated)],
    }
}

pub fn rayleigh(args: &RayleighArgs, s: &mut Settings) -> Result<Outcome, CliError> {
    let params = hardy_params(&args.hardy, s)?;
    if !admissible_hardy(&params) {
        let v = params.violations();
        return Ok(inadmissible(json!({ "admissible": false, "violations": v }), &v));
    }
    let family = select_family(&params)?;
    let eps = match s.optional::<String>("eps-list", args.eps_list.clone())? {
        Some(text) => parse_list("eps-list", &text)?,
        None => default_eps_list(),
    };
    let sigmas = match s.optional::<String>("sigma-list", args.sigma_list.clone())? {
        Some(text) => parse_list("sigma-list", &text)?,
        None if family == FamilyKind::P2KGt1 => Vec::new(),
        None => default_sigma_list(),
    };
    let r = sweep_and_extrapolate(&params, &eps, &sigmas, &sweep_spec())?;
    let c = r.constant.value;
    let above = r.rows.iter().all(|row| row.quotient >= c * (1.0 - 1e-6));
    let rel = (r.extrapolated - c).abs() / c.abs();
    let mut out = Outcome::new(json!({ "sweep": r, "all_above_constant": above, "rel_gap": rel }), above);
    out.tables.push(sweep_table("rayleigh", &r));
    Ok(out)
}

fn batch_table(b: &Batch) -> Table {
    Table {
        name: b.name.clone(),
        header: vec!["index".into(), "passed".into(), "value".into()],
        rows: b
            .items
            .iter()
            .map(|i| {
                let v = ["report", "max_rel_error", "rel_error", "min"]
                    .iter()
                    .find_map(|k| i.data.get(k))
                    .map(|v| v.get("residual_rel").or(v.get("slope_vs_log_eps")).unwrap_or(v).to_string())
                    .unwrap_or_default();
                vec![i.index.to_string(), i.passed.to_string(), v]
            })
            .collect(),
        footer: vec![format!("passed={}", b.passed), format!("worst={}", b.worst)],
    }
}

pub fn verify(args: &VerifyArgs, s: &mut Settings, seed: u64) -> Result<Outcome, CliError> {
    let which = match args.which {
        Some(w) => w,
        None => match s.raw("which") {
            Some(text) => <Which as clap::ValueEnum>::from_str(text, false)
                .map_err(|_| CliError::Usage(format!("config value for 'which' is invalid: {text}")))?,
            None => return Err(CliError::Usage("missing required --which".into())),
        },
    };
    let name = clap::ValueEnum::to_possible_value(&which).map(|v| v.get_name().to_string()).unwrap_or_default();
    s.resolved.insert("which".into(), name);
    let default_count = match which {
        Which::E2 | Which::Ep | Which::Weights => 20,
        Which::Cknp => 10,
        Which::Leray => 50,
        Which::Lemma1 => 3,
    };
    let count: usize = s.with_default("count", args.count, default_count)?;
    if count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    let batch = match which {
        Which::E2 => suites::e2_batch(seed, count),
        Which::Ep => suites::ep_batch(seed, count),
        Which::Cknp => suites::cknp_batch(seed, count),
        Which::Weights => suites::weights_batch(seed, count),
        Which::Leray => suites::leray_batch(seed, count),
        Which::Lemma1 => suites::lemma_batch(),
    };
    let passed = batch.passed;
    let mut out = Outcome::new(serde_json::to_value(&batch).unwrap_or(Value::Null), passed);
    out.tables.push(batch_table(&batch));
    Ok(out)
}

pub fn ckn(args: &CknArgs, s: &mut Settings) -> Result<Outcome, CliError> {
    let ckn = ckn_params(&args.hardy, &args.exponents, s)?;
    let flags = admissible_ckn(&ckn);
    if !(flags.integrable && flags.balanced) {
        let v = ckn.violations();
        return Ok(inadmissible(json!({ "admissible": false, "conditions": flags, "violations": v }), &v));
    }
    let c = ckn_constant(&ckn)?;
    let mut passed = true;
    let extremal = if c.kind == ConstantKind::Sharp {
        let r = ckn_extremal_check(&ckn, &QuadratureSpec::default())?;
        passed &= (r.quotient - c.value).abs() <= 1e-3 * c.value.abs().max(1.0) && r.residual_r_max <= 1e-12;
        Some(r)
    } else {
        None
    };
    let identity = if flags.normalized {
        let n = ckn.n();
        let bump = BumpFunction::plain(vec![1.0; n], 0.1)?;
        let r = verify_cknp(&ckn, &bump, &BoxRule::default())?;
        passed &= r.residual_rel <= suites::CKN_TOLERANCE
            && r.slack.map_or(true, |s| s >= -1e-8)
            && r.weight_check_rel.map_or(true, |w| w <= 1e-6);
        Some(r)
    } else {
        None
    };
    let result = json!({
        "admissible": true, "conditions": flags, "constant": c,
        "extremal": extremal, "identity": identity, "passed": passed,
    });
    Ok(Outcome::new(result, passed))
}

pub fn report(args: &ReportArgs, s: &mut Settings, seed: u64, quiet: bool) -> Result<Outcome, CliError> {
    let csv_dir = s.optional::<String>("csv-dir", args.csv_dir.as_ref().map(|p| p.display().to_string()))?;
    let progress = |name: &str| {
        if !quiet {
            eprintln!("running {name}");
        }
    };
    let (checks, sweeps) = suites::acceptance(seed, &progress);
    let passed = checks.iter().all(|c| c.passed);
    let tables: Vec<Table> = sweeps
        .iter()
        .filter_map(|sw| sw.result.as_ref().map(|r| sweep_table(sw.name, r)))
        .collect();
    if let Some(dir) = csv_dir {
        fs::create_dir_all(&dir)?;
        for t in &tables {
            fs::write(std::path::Path::new(&dir).join(format!("{}.csv", t.name)), crate::output::table_csv(t))?;
        }
    }
    let summary: Vec<Value> = checks.iter().map(|c| json!({ "id": c.id, "name": c.name, "passed": c.passed })).collect();
    let mut out = Outcome::new(json!({ "summary": summary, "checks": checks }), passed);
    out.tables = tables;
    Ok(out)
}
