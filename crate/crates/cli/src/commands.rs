use std::fmt::Display;

use bikraw::angular::{ninej_orthocheck, NineJArgs};
use bikraw::chain::{
    build_state_space, discriminants, eigenvalues_analytic, fixed_point_residuals, fixed_point_residuals_as_printed,
    kernel_closed, kernel_convolution, kernel_f3, max_abs, solve_fixed_points, stationary_distribution,
    verify_spectrum, ChainParams, FixedPointSolution, KernelMatrix, FLOAT_TOL,
};
use bikraw::montecarlo::{estimate_kernel, run_chain, tv_distance, SimConfig, BURN_IN_FRACTION, GENERATOR};
use bikraw::poly::{
    eta_from_p, etabar_from_p, grid, orthonormal_r, orthonormal_r_exact, poly_p, r_gram_exact, r_gram_residual_f64,
    tuvw_from_p, PParams, TuvwParams,
};
use bikraw::scalar::{is_exact_literal, parse_rational};
use bikraw::{Backend, Error, Rational, Scalar};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::output::{self, document, Emit};
use crate::{
    BackendArg, ChainFlags, Evaluator, Format, KernelArgs, NinejArgs, PolyArgs, SimMode, SimulateArgs, SpectrumArgs,
};

/// A rendered document and whether every requested check passed.
pub struct Output {
    pub text: String,
    pub checks_passed: bool,
}

type CmdResult = Result<Output, String>;

fn json_output(command: &str, inputs: Map<String, Value>, results: Value, checks_passed: bool) -> CmdResult {
    let doc = document(command, inputs, results);
    let text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
    Ok(Output { text, checks_passed })
}

fn flag_error(flag: &str, e: impl Display) -> String {
    format!("--{flag}: {e}")
}

/// Maps a library error to a message naming the offending flag.
fn param_error(e: Error) -> String {
    match e {
        Error::InvalidParameter { name, reason } => format!("--{}: {reason}", name.replace('+', "/--")),
        other => other.to_string(),
    }
}

fn choose_backend(values: &[&str], explicit: Option<BackendArg>) -> Backend {
    match explicit {
        Some(BackendArg::Exact) => Backend::Exact,
        Some(BackendArg::Float) => Backend::Float64,
        None if values.iter().all(|v| is_exact_literal(v)) => Backend::Exact,
        None => Backend::Float64,
    }
}

fn parse_scalar<S: Scalar>(flag: &str, s: &str) -> Result<S, String> {
    parse_rational(s).map(|r| S::from_rational(&r)).map_err(|e| flag_error(flag, e))
}

fn parse_list<S: Scalar>(flag: &str, s: &str, len: usize) -> Result<Vec<S>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != len {
        return Err(flag_error(flag, format!("expected {len} comma-separated values, got {}", parts.len())));
    }
    parts.iter().map(|p| parse_scalar(flag, p)).collect()
}

/// Zero in the exact backend, below [`FLOAT_TOL`] in floats.
fn negligible<S: Scalar>(v: &S) -> bool {
    match S::BACKEND {
        Backend::Exact => v.is_zero(),
        Backend::Float64 => v.to_f64().abs() <= FLOAT_TOL,
    }
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Exact => "exact",
        Backend::Float64 => "float",
    }
}

impl ChainFlags {
    fn backend(&self) -> Backend {
        choose_backend(&[&self.alpha1, &self.alpha2, &self.beta1, &self.beta2], self.backend)
    }

    fn params<S: Scalar>(&self) -> Result<ChainParams<S>, String> {
        ChainParams::new(
            self.n,
            parse_scalar("alpha1", &self.alpha1)?,
            parse_scalar("alpha2", &self.alpha2)?,
            parse_scalar("beta1", &self.beta1)?,
            parse_scalar("beta2", &self.beta2)?,
        )
        .map_err(param_error)
    }

    fn inputs(&self, backend: Backend) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("n".into(), json!(self.n));
        m.insert("alpha1".into(), json!(self.alpha1));
        m.insert("alpha2".into(), json!(self.alpha2));
        m.insert("beta1".into(), json!(self.beta1));
        m.insert("beta2".into(), json!(self.beta2));
        m.insert("backend".into(), json!(backend_name(backend)));
        m
    }
}

fn params_json<S: Emit>(p: &ChainParams<S>) -> Value {
    json!({
        "n": p.n,
        "alpha1": p.alpha1.emit(),
        "alpha2": p.alpha2.emit(),
        "beta1": p.beta1.emit(),
        "beta2": p.beta2.emit(),
    })
}

fn tuvw_json<S: Emit>(q: &TuvwParams<S>) -> Value {
    json!({ "t": q.t.emit(), "u": q.u.emit(), "v": q.v.emit(), "w": q.w.emit() })
}

fn states_json(states: &[(u32, u32)]) -> Value {
    states.iter().map(|&(a, b)| json!([a, b])).collect()
}

// ---------------------------------------------------------------- kernel

pub fn kernel(a: &KernelArgs) -> CmdResult {
    match a.chain.backend() {
        Backend::Exact => kernel_with::<Rational>(a),
        Backend::Float64 => kernel_with::<f64>(a),
    }
}

fn kernel_with<S: Scalar + Emit>(a: &KernelArgs) -> CmdResult {
    let p: ChainParams<S> = a.chain.params()?;
    let mut discrepancies = None;
    let matrix = match a.evaluator {
        Evaluator::Conv => kernel_convolution(&p),
        Evaluator::Closed => kernel_closed(&p),
        Evaluator::F3 => kernel_f3(&p),
        Evaluator::All => {
            let closed = kernel_closed(&p);
            let conv = kernel_convolution(&p);
            let f3 = kernel_f3(&p);
            let pairs = [
                ("closed_vs_conv", closed.max_difference(&conv)),
                ("closed_vs_f3", closed.max_difference(&f3)),
                ("conv_vs_f3", conv.max_difference(&f3)),
            ];
            let ok = pairs.iter().all(|(_, d)| negligible(d));
            discrepancies = Some((pairs.into_iter().map(|(k, d)| (k.to_string(), d.emit())).collect::<Map<_, _>>(), ok));
            closed
        }
    };

    let residual = matrix.column_sum_residual();
    let mut passed = negligible(&residual);
    if let Some((_, ok)) = &discrepancies {
        passed &= *ok;
    }

    let mut inputs = a.chain.inputs(S::BACKEND);
    inputs.insert("evaluator".into(), json!(format!("{:?}", a.evaluator).to_lowercase()));

    if a.format == Format::Csv {
        return Ok(Output { text: kernel_csv(&matrix), checks_passed: passed });
    }

    let mut results = Map::new();
    results.insert(
        "orientation".into(),
        json!("matrix[d][s] = P(next = states[d] | current = states[s]); every column sums to 1"),
    );
    results.insert("states".into(), states_json(&matrix.space.states));
    results.insert(
        "matrix".into(),
        matrix.entries.iter().map(|row| row.iter().map(Emit::emit).collect::<Value>()).collect(),
    );
    results.insert("column_sum_residual".into(), residual.emit());
    if let Some((d, _)) = discrepancies {
        results.insert("evaluator_discrepancy".into(), Value::Object(d));
    }
    json_output("kernel", inputs, Value::Object(results), passed)
}

/// Rows are source states, columns destination states.
fn kernel_csv<S: Scalar + Emit>(k: &KernelMatrix<S>) -> String {
    let label = |&(a, b): &(u32, u32)| format!("\"({a},{b})\"");
    let mut out = String::from("source\\destination");
    for s in &k.space.states {
        out.push(',');
        out.push_str(&label(s));
    }
    out.push('\n');
    for (src, s) in k.space.states.iter().enumerate() {
        out.push_str(&label(s));
        for dest in 0..k.space.len() {
            out.push(',');
            out.push_str(&k.get(dest, src).cell());
        }
        out.push('\n');
    }
    out.pop();
    out
}

// -------------------------------------------------------------- spectrum

pub fn spectrum(a: &SpectrumArgs) -> CmdResult {
    match a.chain.backend() {
        Backend::Exact => spectrum_with::<Rational>(a),
        Backend::Float64 => spectrum_with::<f64>(a),
    }
}

fn spectrum_with<S: Scalar + Emit>(a: &SpectrumArgs) -> CmdResult {
    let p: ChainParams<S> = a.chain.params()?;
    let (d1, d2) = discriminants(&p);
    let mut results = Map::new();
    results.insert("parameters".into(), params_json(&p));
    results.insert("degenerate".into(), json!(p.is_degenerate()));
    results.insert(
        "discriminant".into(),
        json!({
            "primary": d1.emit(),
            "alternate": d2.emit(),
            "agree": negligible(&(d1.clone() - d2.clone())),
        }),
    );
    let mut passed = negligible(&(d1 - d2));

    let analytic = match solve_fixed_points(&p) {
        Ok(fps) => analytic_json(&p, &fps),
        Err(Error::IrrationalDiscriminant(_)) => {
            // Exact parameters with an irrational root: solve in floats instead.
            let pf = p.to_f64();
            let fps = solve_fixed_points(&pf).map_err(param_error)?;
            let mut v = analytic_json(&pf, &fps);
            v.0["note"] = json!("the discriminant is not a rational square; roots computed in f64");
            v
        }
        Err(e) => return Err(param_error(e)),
    };
    let (analytic, ok) = analytic;
    passed &= ok;
    results.insert("analytic".into(), analytic);

    if a.arbitrate {
        let report = verify_spectrum(&p).map_err(param_error)?;
        let second = report.numeric.get(1).copied();
        results.insert(
            "numeric".into(),
            json!({
                "eigenvalues": report.numeric.iter().map(|v| output::float(*v)).collect::<Vec<_>>(),
                "multiplicities": report
                    .multiplicities
                    .iter()
                    .map(|(v, k)| json!({ "value": output::float(*v), "multiplicity": k }))
                    .collect::<Vec<_>>(),
                "second_largest": second.map(output::float),
                "symmetry_defect": output::float(report.symmetry_defect),
                "confined": report.confined,
            }),
        );
        results.insert(
            "arbitration".into(),
            json!({
                "candidates": report
                    .candidates
                    .iter()
                    .map(|c| json!({
                        "family": c.family,
                        "assignment": c.assignment,
                        "max_deviation": output::float(c.max_deviation),
                        "matched": c.matched,
                    }))
                    .collect::<Vec<_>>(),
                "matched_families": report.matched_families,
                "unambiguous": report.unambiguous,
                "verdict": report.verdict(),
            }),
        );
        passed &= report.unambiguous && report.confined;
    }

    let mut inputs = a.chain.inputs(S::BACKEND);
    inputs.insert("arbitrate".into(), json!(a.arbitrate));
    json_output("spectrum", inputs, Value::Object(results), passed)
}

/// Fixed points and eigenvalue candidates; the flag says whether every
/// relation residual vanishes and every candidate has `lambda_{0,0} = 1`.
fn analytic_json<T: Scalar + Emit>(
    p: &ChainParams<T>,
    fps: &(FixedPointSolution<T>, FixedPointSolution<T>),
) -> (Value, bool) {
    let mut ok = true;
    let solutions: Vec<Value> = [&fps.0, &fps.1]
        .iter()
        .map(|fp| {
            let res = max_abs(&fixed_point_residuals(p, &fp.tuvw));
            let printed = max_abs(&fixed_point_residuals_as_printed(p, &fp.tuvw));
            ok &= negligible(&res);
            json!({
                "branch": fp.branch,
                "tuvw": tuvw_json(&fp.tuvw),
                "relation_residual": res.emit(),
                "printed_relation_residual": printed.emit(),
            })
        })
        .collect();
    let candidates: Vec<Value> = eigenvalues_analytic(p, fps)
        .iter()
        .map(|c| {
            let first = c.values.first().map(|(_, v)| v.clone()).unwrap_or_else(T::zero);
            ok &= negligible(&(first - T::one()));
            json!({
                "family": c.family,
                "assignment": c.assignment,
                "values": c.values
                    .iter()
                    .map(|((m, n), v)| json!({ "m": m, "n": n, "lambda": v.emit() }))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut v = Map::new();
    v.insert("backend".into(), json!(backend_name(T::BACKEND)));
    v.insert("fixed_points".into(), Value::Array(solutions));
    v.insert("candidates".into(), Value::Array(candidates));
    (Value::Object(v), ok)
}

// ------------------------------------------------------------------ poly

pub fn poly(a: &PolyArgs) -> CmdResult {
    let raw = a.p.as_deref().or(a.tuvw.as_deref()).unwrap_or_default();
    let parts: Vec<&str> = raw.split(',').collect();
    match choose_backend(&parts, a.backend) {
        Backend::Exact => poly_with::<Rational>(a, |m, n, x, y, big_n, p| {
            orthonormal_r_exact(m, n, x, y, big_n, p).map(|s| output::surd(&s))
        }),
        Backend::Float64 => poly_with::<f64>(a, |m, n, x, y, big_n, p| {
            orthonormal_r(m, n, x, y, big_n, p).map(output::float)
        }),
    }
}

type REval<S> = fn(u32, u32, u32, u32, u32, &PParams<S>) -> bikraw::Result<Value>;

fn poly_with<S: Scalar + Emit + GramResidual>(a: &PolyArgs, r_eval: REval<S>) -> CmdResult {
    let big_n = a.n;
    let degrees: Vec<(u32, u32)> = match (a.m, a.mm) {
        (Some(m), Some(n)) => {
            if m + n > big_n {
                return Err(flag_error("m", format!("degree m + mm = {} exceeds --n {big_n}", m + n)));
            }
            vec![(m, n)]
        }
        _ => grid(big_n),
    };
    let points = grid(big_n);

    let mut inputs = Map::new();
    inputs.insert("n".into(), json!(big_n));
    if let Some(m) = a.m {
        inputs.insert("m".into(), json!(m));
    }
    if let Some(mm) = a.mm {
        inputs.insert("mm".into(), json!(mm));
    }
    inputs.insert("backend".into(), json!(backend_name(S::BACKEND)));

    let mut results = Map::new();
    let mut passed = true;
    let (q, pp) = if let Some(p) = &a.p {
        inputs.insert("p".into(), json!(p));
        let v: Vec<S> = parse_list("p", p, 4)?;
        let pp = PParams::new([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
            .map_err(|e| flag_error("p", e))?;
        pp.check_nondegenerate().map_err(|e| flag_error("p", e))?;
        (tuvw_from_p(&pp), Some(pp))
    } else {
        let t = a.tuvw.as_deref().unwrap_or_default();
        inputs.insert("tuvw".into(), json!(t));
        let v: Vec<S> = parse_list("tuvw", t, 4)?;
        (TuvwParams::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()), None)
    };
    results.insert("tuvw".into(), tuvw_json(&q));

    let table = |f: &dyn Fn(u32, u32, u32, u32) -> bikraw::Result<Value>| -> Result<Value, String> {
        degrees
            .iter()
            .map(|&(m, n)| {
                let values = points
                    .iter()
                    .map(|&(x, y)| f(m, n, x, y).map(|v| json!({ "x": x, "y": y, "value": v })))
                    .collect::<bikraw::Result<Vec<_>>>()
                    .map_err(param_error)?;
                Ok(json!({ "m": m, "n": n, "values": values }))
            })
            .collect::<Result<Vec<_>, String>>()
            .map(Value::Array)
    };
    results.insert("p_table".into(), table(&|m, n, x, y| poly_p(m, n, x, y, big_n, &q).map(|v| v.emit()))?);

    if let Some(pp) = &pp {
        let eta = eta_from_p(pp).map_err(|e| flag_error("p", e))?;
        let etabar = etabar_from_p(pp).map_err(|e| flag_error("p", e))?;
        results.insert("eta".into(), json!([eta.eta1.emit(), eta.eta2.emit()]));
        results.insert("etabar".into(), json!([etabar.eta1.emit(), etabar.eta2.emit()]));
        results.insert("r_table".into(), table(&|m, n, x, y| r_eval(m, n, x, y, big_n, pp))?);
        let (residual, ok) = S::gram_residual(big_n, pp).map_err(param_error)?;
        results.insert("orthonormality_residual".into(), residual);
        passed &= ok;
    }
    json_output("poly", inputs, Value::Object(results), passed)
}

/// `max |G - I|` over the Gram matrix of `R_{m,n}` and whether it passes.
trait GramResidual: Sized {
    fn gram_residual(big_n: u32, p: &PParams<Self>) -> bikraw::Result<(Value, bool)>;
}

impl GramResidual for Rational {
    fn gram_residual(big_n: u32, p: &PParams<Rational>) -> bikraw::Result<(Value, bool)> {
        let g = r_gram_exact(big_n, p)?;
        let mut worst = Rational::zero();
        let mut exact = true;
        for (i, row) in g.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                let target = if i == j { Rational::one() } else { Rational::zero() };
                match s.to_rational() {
                    Some(r) => {
                        let d = (r - target).abs();
                        if d > worst {
                            worst = d;
                        }
                    }
                    None => exact = false,
                }
            }
        }
        let ok = exact && worst.is_zero();
        Ok((if exact { output::rational(&worst) } else { json!("irrational entry") }, ok))
    }
}

impl GramResidual for f64 {
    fn gram_residual(big_n: u32, p: &PParams<f64>) -> bikraw::Result<(Value, bool)> {
        let r = r_gram_residual_f64(big_n, p)?;
        Ok((output::float(r), r <= FLOAT_TOL * 10.0))
    }
}

// ----------------------------------------------------------------- ninej

pub fn ninej(a: &NinejArgs) -> CmdResult {
    if let Some(max) = a.orthocheck {
        let report = ninej_orthocheck(max);
        let passed = report.passed();
        let mut inputs = Map::new();
        inputs.insert("orthocheck".into(), json!(max));
        let results = json!({
            "max_two_j": report.max_two_j,
            "tuples": report.tuples,
            "sums": report.sums,
            "failures": report.failures,
            "passed": passed,
        });
        return json_output("ninej", inputs, results, passed);
    }
    let raw = a.args.as_deref().unwrap_or_default();
    let two_j = raw
        .split(',')
        .map(|v| {
            v.trim().parse::<u32>().map_err(|_| flag_error("args", format!("{v:?} is not a nonnegative integer 2j")))
        })
        .collect::<Result<Vec<u32>, String>>()?;
    let arr: [u32; 9] = two_j
        .try_into()
        .map_err(|v: Vec<u32>| flag_error("args", format!("expected nine 2j values, got {}", v.len())))?;
    let args = NineJArgs::from_two_j(arr);
    let value = bikraw::angular::ninej(&args);
    let mut inputs = Map::new();
    inputs.insert("args".into(), json!(arr));
    let results = json!({
        "value": output::surd(&value),
        "triads_ok": args.all_triads_ok(),
    });
    json_output("ninej", inputs, results, true)
}

// -------------------------------------------------------------- simulate

pub fn simulate(a: &SimulateArgs) -> CmdResult {
    let p: ChainParams<f64> = a.chain.params()?;
    if a.tv_tol.is_nan() || a.tv_tol < 0.0 {
        return Err(flag_error("tv-tol", "must be nonnegative"));
    }
    let config = SimConfig::new(a.seed, a.replicas, a.steps, p.clone()).map_err(|e| match e {
        Error::InvalidParameter { name: "replicas", reason } => flag_error("replicas", reason),
        Error::InvalidParameter { name: "steps_per_replica", reason } => flag_error("steps", reason),
        other => other.to_string(),
    })?;
    let config = config.with_workers(a.workers);

    let mut inputs = a.chain.inputs(Backend::Float64);
    inputs.insert("seed".into(), json!(a.seed));
    inputs.insert("steps".into(), json!(a.steps));
    inputs.insert("replicas".into(), json!(a.replicas));
    inputs.insert("mode".into(), json!(format!("{:?}", a.mode).to_lowercase()));
    inputs.insert("tv_tol".into(), output::float(a.tv_tol));

    let mut results = Map::new();
    results.insert(
        "generator".into(),
        json!({ "name": GENERATOR, "seed": a.seed, "replicas": a.replicas, "steps_per_replica": a.steps }),
    );
    let space = build_state_space(p.n);
    results.insert("states".into(), states_json(&space.states));

    let tv = match a.mode {
        SimMode::Kernel => {
            let exact = kernel_closed(&p);
            let est = estimate_kernel(&config);
            let per_source: Vec<f64> = (0..space.len())
                .map(|src| {
                    let col: Vec<f64> = (0..space.len()).map(|d| *exact.get(d, src)).collect();
                    tv_distance(&est.column(src), &col).expect("equal lengths")
                })
                .collect();
            let worst = per_source.iter().copied().fold(0f64, f64::max);
            results.insert("counts".into(), json!(est.counts));
            results.insert("trials_per_source".into(), json!(est.totals));
            results.insert(
                "tv_per_source".into(),
                per_source.iter().map(|v| output::float(*v)).collect(),
            );
            results.insert("tv_max".into(), output::float(worst));
            worst
        }
        SimMode::Stationary => {
            let start = match &a.start {
                Some(s) => parse_state(s)?,
                None => (p.n, 0),
            };
            inputs.insert("start".into(), json!([start.0, start.1]));
            let run = run_chain(&config, start).map_err(|e| flag_error("start", e))?;
            let psi = stationary_distribution(&p);
            let tv = tv_distance(&run.occupancy, &psi).expect("equal lengths");
            let second = verify_spectrum(&p).ok().and_then(|r| r.numeric.get(1).copied());
            results.insert("burn_in_fraction".into(), output::float(BURN_IN_FRACTION));
            results.insert("burn_in_steps".into(), json!(run.burn_in));
            results.insert("occupancy_counts".into(), json!(run.occupancy_counts));
            results.insert("stationary".into(), psi.iter().map(|v| output::float(*v)).collect());
            results.insert("tv".into(), output::float(tv));
            results.insert("lag1_autocorrelation".into(), output::float(run.lag1_autocorrelation));
            results.insert("second_eigenvalue".into(), second.map(output::float).unwrap_or(Value::Null));
            tv
        }
    };
    let passed = tv <= a.tv_tol;
    results.insert("passed".into(), json!(passed));
    json_output("simulate", inputs, Value::Object(results), passed)
}

fn parse_state(s: &str) -> Result<(u32, u32), String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.trim().parse().map_err(|e| flag_error("start", e))?;
            let b = b.trim().parse().map_err(|e| flag_error("start", e))?;
            Ok((a, b))
        }
        _ => Err(flag_error("start", "expected i1,i2")),
    }
}
