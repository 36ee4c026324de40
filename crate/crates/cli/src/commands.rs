//! One handler per subcommand. Handlers are pure: they read the config and
//! return records; writing and exit codes belong to the runner.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use dslab_core::arith::{dirichlet_convolve, euler_phi, EpsilonParams, MultiplicativeWeight};
use dslab_core::dsgen::{build_family, family_diagnostics, valuation_structure, Variant};
use dslab_core::intervals::{count_solutions, psi_mass, SupportFunction};
use dslab_core::measures::jsonl::{matrix_records, pair_set_records};
use dslab_core::measures::{build_edge_set, layer_matrix, mu_pairs};
use dslab_core::rational::{self, int, Rational};
use dslab_core::report::{exact, float, stamp_sweep_max, RatioReport};
use dslab_core::verify::{
    anatomy_count, anatomy_divisor_sum, anatomy_improved, bilinear_bound_violations, calibration_instances,
    concentration_check, main_theorem_ratio, overlap_rhs, prop54_sweep, prop6_bounds, random_instance,
    run_main_sweep, second_moment, AnatomyTarget, Decision, ELabel, OverlapMode, PairClassifier, Prop6Variant,
    DEFAULT_HYPOTHESIS_THRESHOLD,
};

use crate::config::ExperimentConfig;
use crate::psi::parse_psi;
use crate::CliError;

#[derive(Debug, Default)]
pub struct Outcome {
    pub records: Vec<Value>,
    /// Extra fields for the summary record.
    pub summary: Map<String, Value>,
    /// Failed assertable invariants; non-empty means exit status 2.
    pub violations: Vec<String>,
}

impl Outcome {
    fn note(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

fn psi(cfg: &ExperimentConfig, default_hi: Option<u64>) -> Result<SupportFunction, CliError> {
    parse_psi(cfg.required("psi")?, default_hi)
}

fn theta(cfg: &ExperimentConfig, psi: &SupportFunction, default_hi: Option<u64>) -> Result<SupportFunction, CliError> {
    match cfg.raw("theta") {
        Some(spec) => parse_psi(spec, default_hi),
        None => Ok(psi.clone()),
    }
}

fn weight(cfg: &ExperimentConfig) -> Result<MultiplicativeWeight, CliError> {
    match cfg.raw("weight").unwrap_or("phi") {
        "phi" | "totient" => Ok(MultiplicativeWeight::totient()),
        "one" => Ok(MultiplicativeWeight::constant_one()),
        "unit" => Ok(MultiplicativeWeight::unit()),
        "id" => Ok(MultiplicativeWeight::identity()),
        other => Err(CliError::Usage(format!("--weight: unknown weight `{other}`"))),
    }
}

fn eps_params(cfg: &ExperimentConfig, default: &str) -> Result<EpsilonParams, CliError> {
    let eps = cfg.rational("eps", Some(default))?;
    let p0 = cfg.get("p0", 10u64)?;
    EpsilonParams::new(eps, p0).map_err(|e| CliError::Usage(format!("--eps: {e}")))
}

fn decision(d: Decision) -> &'static str {
    match d {
        Decision::Holds => "holds",
        Decision::Fails => "fails",
        Decision::Indeterminate => "indeterminate",
    }
}

fn count_value(n: u64) -> Value {
    exact(&int(n))
}

pub fn dispatch(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.command.as_str() {
        "phi" => phi(cfg),
        "count" => count(cfg),
        "psi-mass" => psi_mass_cmd(cfg),
        "overlap" => overlap(cfg),
        "edge-set" => edge_set(cfg),
        "layer-matrix" => layer_matrix_cmd(cfg),
        "verify-main" => verify_main(cfg),
        "verify-prop54" => verify_prop54(cfg),
        "verify-concentration" => verify_concentration(cfg),
        "anatomy" => anatomy(cfg),
        "anatomy-improved" => anatomy_improved_cmd(cfg),
        "second-moment" => second_moment_cmd(cfg),
        "classify" => classify(cfg),
        "prop6" => prop6(cfg),
        "dsgen" => dsgen(cfg),
        other => Err(CliError::Usage(format!("unknown subcommand `{other}`"))),
    }
}

fn phi(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n: u64 = cfg.need("n")?;
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let gauss = dirichlet_convolve(&MultiplicativeWeight::constant_one(), &MultiplicativeWeight::totient(), n);
    let mut out = Outcome::default();
    if gauss != int(n) {
        out.violations.push(format!("(1 * phi)({n}) != {n}"));
    }
    out.records.push(json!({
        "record": "phi",
        "n": n,
        "phi": count_value(euler_phi(n)),
        "divisor_sum": exact(&gauss),
    }));
    Ok(out)
}

fn count(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let alpha = cfg.rational("alpha", None)?;
    let n: u64 = cfg.need("n")?;
    let psi = psi(cfg, Some(n))?;
    let s = count_solutions(&alpha, n, &psi).map_err(|e| CliError::Usage(e.to_string()))?;
    let mass = psi_mass(n, &psi);
    let ratio = (!mass.is_zero()).then(|| s as f64 / rational::to_f64(&mass));
    let mut out = Outcome::default();
    out.records.push(json!({
        "record": "count",
        "alpha": exact(&alpha),
        "n": n,
        "S": count_value(s),
        "psi_mass": exact(&mass),
        "ratio": ratio.map(float),
    }));
    Ok(out)
}

fn psi_mass_cmd(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n: u64 = cfg.need("n")?;
    let psi = psi(cfg, Some(n))?;
    let mut out = Outcome::default();
    out.records.push(json!({ "record": "psi_mass", "n": n, "psi_mass": exact(&psi_mass(n, &psi)) }));
    Ok(out)
}

fn overlap(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n: u64 = cfg.need("n")?;
    let m: u64 = cfg.need("m")?;
    let psi = psi(cfg, Some(n.max(m)))?;
    let mode = match cfg.raw("mode").unwrap_or("constant") {
        "constant" => OverlapMode::Constant,
        "general" => OverlapMode::General {
            u: cfg.real("u", None)?,
            t: cfg.real("t", None)?,
        },
        "optimized" => OverlapMode::Optimized {
            rho: cfg.real("rho", Some(0.1))?,
        },
        other => return Err(CliError::Usage(format!("--mode: unknown mode `{other}`"))),
    };
    let r = overlap_rhs(n, m, &psi, mode).map_err(compute)?;
    let mut out = Outcome::default();
    out.records.push(json!({
        "record": "overlap",
        "n": n,
        "m": m,
        "D": exact(&r.d),
        "product": exact(&r.product),
        "error_term": r.error_term.map(float),
        "u": r.parameters.map(|p| float(p.0)),
        "T": r.parameters.map(|p| float(p.1)),
        "factor": float(r.factor),
        "overlap": exact(&r.overlap),
        "independent": exact(&r.independent),
        "ratio": r.ratio().map(float),
    }));
    Ok(out)
}

fn edge_inputs(cfg: &ExperimentConfig) -> Result<(SupportFunction, SupportFunction, f64, Rational), CliError> {
    let psi = psi(cfg, None)?;
    let theta = theta(cfg, &psi, None)?;
    let t = cfg.real("t", Some(1.0))?;
    if !(t >= 1.0) {
        return Err(CliError::Usage("--t must be at least 1".into()));
    }
    let c = cfg.rational("c", Some("0"))?;
    Ok((psi, theta, t, c))
}

fn edge_set(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (psi, theta, t, c) = edge_inputs(cfg)?;
    let e = build_edge_set(&psi, &theta, t, &c);
    let phi = MultiplicativeWeight::totient();
    let mut out = Outcome::default();
    out.records = pair_set_records(&e);
    out.note("edges", json!(e.len()));
    out.note("mu", exact(&mu_pairs(&e, &phi, &phi)));
    Ok(out)
}

fn layer_matrix_cmd(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (psi, theta, t, c) = edge_inputs(cfg)?;
    let p: u64 = cfg.need("p")?;
    let e = build_edge_set(&psi, &theta, t, &c);
    let phi = MultiplicativeWeight::totient();
    let mm = layer_matrix(&e, &phi, &phi, p).map_err(compute)?;
    let mut out = Outcome::default();
    out.records = matrix_records(&mm);
    if cfg.raw("c1").is_some() {
        let c1 = cfg.rational("c1", None)?;
        let eps = eps_params(cfg, "2/5")?;
        let b = bilinear_bound_violations(&mm, &eps, &c1);
        let cells = |s: &std::collections::BTreeSet<(u32, u32)>| s.iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>();
        out.records.push(json!({
            "record": "bilinear",
            "c1": exact(&c1),
            "violations": cells(&b.violations),
            "indeterminate": cells(&b.indeterminate),
        }));
    }
    Ok(out)
}

fn main_record(report: &RatioReport, p_count: u64, bound: Decision, edges: usize) -> Value {
    let mut r = report.to_json();
    r["P"] = json!(p_count);
    r["absolute_bound"] = json!(decision(bound));
    r["edges"] = json!(edges);
    r
}

fn verify_main(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let w = weight(cfg)?;
    let eps = eps_params(cfg, "2/5")?;
    let mut out = Outcome::default();
    if cfg.flag("sweep")? {
        let hi: u64 = cfg.get("hi", 30)?;
        let random: usize = cfg.get("random", 200)?;
        let instances = calibration_instances(hi, random, cfg.seed);
        let outcomes = run_main_sweep(&instances, &w, &w, &eps).map_err(compute)?;
        let mut reports: Vec<RatioReport> = outcomes.iter().map(|o| o.report.clone()).collect();
        let max = stamp_sweep_max(&mut reports);
        for (o, r) in outcomes.iter().zip(&reports) {
            if o.absolute_bound != Decision::Holds {
                out.violations.push(format!("{}: absolute bound {}", r.instance_id, decision(o.absolute_bound)));
            }
            out.records.push(main_record(r, o.p_count, o.absolute_bound, o.edges));
        }
        out.note("instances", json!(outcomes.len()));
        out.note("max_ratio", float(max));
        return Ok(out);
    }
    let (psi, theta, t, c) = edge_inputs(cfg)?;
    let e = build_edge_set(&psi, &theta, t, &c);
    let o = main_theorem_ratio("verify-main", &e, &w, &w, &eps, t, &c).map_err(compute)?;
    if o.absolute_bound != Decision::Holds {
        out.violations.push(format!("absolute bound {}", decision(o.absolute_bound)));
    }
    out.records.push(main_record(&o.report, o.p_count, o.absolute_bound, o.edges));
    Ok(out)
}

fn verify_prop54(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let x: f64 = cfg.real("x", None)?;
    let y: f64 = cfg.real("y", None)?;
    if !(x >= 1.0 && y >= x) {
        return Err(CliError::Usage("need 1 <= x <= y".into()));
    }
    let psi = psi(cfg, Some(y.floor() as u64))?;
    let ts: Vec<f64> = cfg.list("ts", "1,2,4,8,16")?;
    let level = cfg.rational("level", Some("10"))?;
    let band = cfg.real("band", Some(2.0))?;
    let s = prop54_sweep(&psi, x, y, &ts, &level, band).map_err(compute)?;
    let mut out = Outcome::default();
    out.records = s.reports.iter().map(RatioReport::to_json).collect();
    out.note("vacuous", json!(s.vacuous));
    out.note("within_band", json!(s.within_band));
    out.note("min", float(s.min));
    out.note("max", float(s.max));
    Ok(out)
}

fn verify_concentration(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let count: usize = cfg.get("count", 100)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let instances: Vec<_> = (0..count).map(|_| random_instance(&mut rng)).collect();
    let mut out = Outcome::default();
    for (i, inst) in instances.iter().enumerate() {
        let o = concentration_check(inst).map_err(compute)?;
        if !o.c1_bound_holds {
            out.violations.push(format!("instance {i}: c1 below c2/(1+(2C3-1)lambda)"));
        }
        out.records.push(json!({
            "record": "concentration",
            "index": i,
            "q": exact(&inst.q),
            "lambda": exact(&inst.lambda),
            "c1": exact(&inst.c1),
            "c2": exact(&inst.c2),
            "c3": float(inst.c3),
            "k": o.k,
            "offdiag_mass": exact(&o.offdiag_mass),
            "c1_lower": exact(&o.c1_lower),
            "holds": o.c1_bound_holds,
        }));
    }
    Ok(out)
}

enum Target {
    X(f64),
    M(u64),
}

fn target(cfg: &ExperimentConfig) -> Result<Target, CliError> {
    match (cfg.raw("x"), cfg.raw("m")) {
        (Some(_), None) => Ok(Target::X(cfg.real("x", None)?)),
        (None, Some(_)) => Ok(Target::M(cfg.need("m")?)),
        _ => Err(CliError::Usage("give exactly one of --x and --m".into())),
    }
}

fn anatomy(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let target = target(cfg)?;
    let t: f64 = cfg.real("t", None)?;
    let c = cfg.rational("c", None)?;
    let result = match target {
        Target::X(x) => anatomy_count(x, t, &c),
        Target::M(m) => anatomy_divisor_sum(m, &weight(cfg)?, t, &c),
    }
    .map_err(compute)?;
    let mut r = result.report.to_json();
    r["record"] = json!("anatomy");
    r["value"] = exact(&result.value);
    let mut out = Outcome::default();
    out.records.push(r);
    Ok(out)
}

fn anatomy_improved_cmd(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let target = target(cfg)?;
    let t: f64 = cfg.real("t", None)?;
    let c = cfg.rational("c", None)?;
    let eps: f64 = cfg.real("eps", None)?;
    let threshold = cfg.real("threshold", Some(DEFAULT_HYPOTHESIS_THRESHOLD))?;
    let w = weight(cfg)?;
    let t_arg = match target {
        Target::X(x) => AnatomyTarget::Count(x),
        Target::M(m) => AnatomyTarget::DivisorSum(m, &w),
    };
    let o = anatomy_improved(t_arg, t, &c, eps, threshold).map_err(compute)?;
    let mut r = o.report.to_json();
    r["record"] = json!("anatomy_improved");
    r["value"] = exact(&o.value);
    r["ln_core"] = float(o.ln_core);
    r["shifted_threshold"] = float(o.shifted_threshold);
    r["hypothesis_value"] = float(o.hypothesis_value);
    let mut out = Outcome::default();
    out.records.push(r);
    Ok(out)
}

fn second_moment_cmd(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n: u64 = cfg.need("n")?;
    let psi = psi(cfg, Some(n))?;
    let s = second_moment(n, &psi).map_err(compute)?;
    let mut out = Outcome::default();
    if s.sum < &s.psi_mass * &s.psi_mass {
        out.violations.push("second moment below Psi(N)^2".into());
    }
    if s.sum < s.psi_mass {
        out.violations.push("second moment below Psi(N)".into());
    }
    out.records.push(json!({
        "record": "second_moment",
        "n": n,
        "sum": exact(&s.sum),
        "psi_mass": exact(&s.psi_mass),
        "ratio_to_psi_sq": s.ratio_to_psi_sq.map(float),
    }));
    Ok(out)
}

fn classify(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n: u64 = cfg.need("n")?;
    let psi = psi(cfg, Some(n))?;
    let delta = cfg.real("delta", Some(0.005))?;
    let cls = PairClassifier::new(&psi, n, delta).map_err(compute)?;
    let labels = cls.classify_all();
    let mut out = Outcome::default();
    let mut tally = [0u64; 5];
    for ((a, b), label) in &labels {
        tally[label.e as usize] += 1;
        if label.e == ELabel::E5 && label.f.is_empty() {
            out.violations.push(format!("E5 pair ({a}, {b}) carries no F-label"));
        }
    }
    if labels.len() as u64 != n * n {
        out.violations.push(format!("{} labels for {} pairs", labels.len(), n * n));
    }
    if cfg.flag("pairs")? {
        out.records = labels
            .iter()
            .map(|((a, b), l)| {
                json!({
                    "record": "pair",
                    "n": a,
                    "m": b,
                    "e": format!("{:?}", l.e),
                    "f": l.f.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>(),
                })
            })
            .collect();
    }
    let mut counts = json!({ "record": "partition", "n": n, "psi_mass": exact(cls.psi_mass()) });
    for (i, name) in ["E1", "E2", "E3", "E4", "E5"].iter().enumerate() {
        counts[*name] = json!(tally[i]);
    }
    out.records.push(counts);
    Ok(out)
}

fn prop6(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let n: u64 = cfg.need("n")?;
    let psi = psi(cfg, Some(n))?;
    let s = cfg.rational("s", None)?;
    let variant = match cfg.raw("variant").unwrap_or("gcd") {
        "gcd" => Prop6Variant::Gcd {
            s,
            eps: cfg.rational("eps", Some("1/100"))?,
        },
        "anatomy" => Prop6Variant::Anatomy {
            s,
            t: cfg.real("t", None)?,
            a: cfg.rational("a", None)?,
            eta: cfg.real("eta", Some(0.1))?,
        },
        other => return Err(CliError::Usage(format!("--variant: unknown variant `{other}`"))),
    };
    let r = prop6_bounds(&psi, n, &variant).map_err(compute)?;
    let mut out = Outcome::default();
    out.records.push(r.to_json());
    Ok(out)
}

fn dsgen(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let k: u32 = cfg.need("k")?;
    let range = cfg.required("p-range")?;
    let (a, b) = range
        .split_once(':')
        .and_then(|(a, b)| Some((a.trim().parse::<u64>().ok()?, b.trim().parse::<u64>().ok()?)))
        .ok_or_else(|| CliError::Usage(format!("--p-range: expected a:b, got `{range}`")))?;
    let variant: Variant = cfg.raw("variant").unwrap_or("full").parse().map_err(CliError::Usage)?;
    let fam = build_family(k, a, b, variant).map_err(|e| CliError::Usage(e.to_string()))?;
    let (structured, witnesses) = valuation_structure(&fam);
    let mut out = Outcome::default();
    out.records.push(json!({
        "record": "family",
        "k": k,
        "n0": a,
        "n1": b,
        "variant": format!("{variant:?}").to_lowercase(),
        "modulus": fam.modulus,
        "primes": fam.primes,
        "eps_k": exact(&fam.eps_k),
        "support_size": fam.psi.len(),
        "mass": exact(&fam.mass()),
        "valuation_structure": structured,
        "valuation_witnesses": witnesses.iter().map(|&(v, w)| json!([v, w])).collect::<Vec<_>>(),
    }));
    if cfg.flag("diagnostics")? {
        let d = family_diagnostics(&fam).map_err(compute)?;
        let two_eps = int(2) * &fam.eps_k;
        if !d.consistent {
            out.violations.push("interval engine disagrees with the closed forms".into());
        }
        if d.sum_a > two_eps {
            out.violations.push("sum_A exceeds 2 eps_k".into());
        }
        if variant == Variant::Full && d.union_e != two_eps {
            out.violations.push("union_E differs from 2 eps_k".into());
        }
        out.records.push(json!({
            "record": "diagnostics",
            "union_E": exact(&d.union_e),
            "sum_E": exact(&d.sum_e),
            "sum_A": exact(&d.sum_a),
            "closed_union_E": d.closed_union_e.as_ref().map(exact),
            "closed_sum_E": exact(&d.closed_sum_e),
            "closed_sum_A": exact(&d.closed_sum_a),
            "mass": exact(&d.mass),
            "consistent": d.consistent,
        }));
    }
    if cfg.flag("pairs")? {
        out.records.extend(pair_set_records(&fam.to_pair_set(cfg.flag("diagonal")?)));
    }
    Ok(out)
}
