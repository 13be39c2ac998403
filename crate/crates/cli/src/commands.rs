//! Command bodies. Each returns the JSON object printed on stdout.

use itertools::Itertools;
use matpoly::leaves::{classify as classify_leaf, closure_contains, drinfeld_coordinates, drinfeld_numeric, sl_reduce, LeafDescriptor, MonopoleChart};
use matpoly::poisson::symbolic::casimir_table;
use matpoly::poisson::{bracket_tt, convergence_order, flow_integrate, CoordIndex, FlowOptions, PlusPolyMat};
use matpoly::smith::{is_divisibility_chain, minor_gcd_oracle, smith_normal_form};
use matpoly::spectral::{
    factorize, match_spectra, product, relative_distance, spectrum, swap_adjacent, transition, eigenvalues,
    Factorization, OrderedPartition, Tolerances,
};
use matpoly::verify::{run_suites, Suite};
use matpoly::{Complex64, ComplexMonic, Field, Mat, MonicMatPoly, RatMonic, RatPoly, Rational};
use serde_json::{json, Value};

use crate::document::{
    loose_complex, matpoly_json, parse_json, parse_loose_mat, poly_json, AnyMonic, FactorsDocument, Input,
    JsonScalar, MatPolyDocument,
};
use crate::error::CliError;

pub type Output = Result<Value, CliError>;

fn rational(doc: &MatPolyDocument, command: &str) -> Result<RatMonic, CliError> {
    match doc.parse()? {
        AnyMonic::Rational(p) => Ok(p),
        AnyMonic::Complex(_) => Err(CliError::field("rational", command)),
    }
}

fn c_json(c: &Complex64) -> Value {
    c.to_json()
}

fn sorted_spectrum(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn partition_json(p: &OrderedPartition) -> Value {
    Value::Array(p.blocks().iter().map(|b| b.iter().map(c_json).collect()).collect())
}

/// Blocks as a JSON array of `n` arrays of `m` values; a value is a number,
/// a `[re, im]` pair or a rational string.
pub fn parse_partition(value: &Value, location: &str) -> Result<OrderedPartition, CliError> {
    let bad = || CliError::input("usage", "a partition is an array of blocks of eigenvalues", Some(location.into()));
    let blocks = value.as_array().ok_or_else(bad)?;
    let blocks = blocks
        .iter()
        .enumerate()
        .map(|(b, block)| {
            block
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .enumerate()
                .map(|(k, v)| loose_complex(v, &format!("{location}[{b}][{k}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrderedPartition::new(blocks)?)
}

fn flag_json(text: &str, flag: &str) -> Result<Value, CliError> {
    parse_json(text).map_err(|e| CliError::input("usage", format!("--{flag}: {}", e.message), Some(format!("--{flag}"))))
}

pub fn parse_complex_flag(text: &str, flag: &str) -> Result<Complex64, CliError> {
    loose_complex(&flag_json(text, flag)?, &format!("--{flag}"))
}

/// `i,j,r;k,l,s`, 1-based.
pub fn parse_indices(text: &str) -> Result<(CoordIndex, CoordIndex), CliError> {
    let bad = || CliError::input("usage", format!("expected --indices i,j,r;k,l,s, found {text:?}"), Some("--indices".into()));
    let coords = text
        .split(';')
        .map(|part| {
            let v: Vec<usize> = part.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
            match v[..] {
                [i, j, r] => Ok(CoordIndex::new(i, j, r)),
                _ => Err(bad()),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    match coords[..] {
        [a, b] => Ok((a, b)),
        _ => Err(bad()),
    }
}

fn descriptor_json(leaf: &LeafDescriptor<Rational>) -> Value {
    json!({
        "m": leaf.m,
        "n": leaf.n,
        "type": leaf.type_alpha,
        "dimension": leaf.dimension,
        "invariants": leaf.invariants.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "invariant_coeffs": leaf.invariants.iter().map(|d| poly_json(d)["coeffs"].clone()).collect::<Vec<_>>(),
        "determinant": poly_json(&leaf.determinant),
    })
}

pub fn snf(doc: &MatPolyDocument) -> Output {
    let p = rational(doc, "snf")?;
    let s = smith_normal_form(&p.to_z())?;
    Ok(json!({
        "command": "snf",
        "m": doc.m,
        "n": doc.n,
        "U": matpoly_json(&s.u),
        "D": matpoly_json(&s.d),
        "V": matpoly_json(&s.v),
        "invariants": s.invariants.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "invariant_coeffs": s.invariants.iter().map(|d| poly_json(d)["coeffs"].clone()).collect::<Vec<_>>(),
    }))
}

pub fn classify(doc: &MatPolyDocument) -> Output {
    let leaf = classify_leaf(&rational(doc, "classify")?)?;
    let mut out = descriptor_json(&leaf);
    out["command"] = json!("classify");
    if let Ok(sl) = sl_reduce(&leaf) {
        out["sl_invariants"] = json!(sl.q.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    Ok(out)
}

pub fn closure(doc: &MatPolyDocument, other: &MatPolyDocument) -> Output {
    let s = classify_leaf(&rational(doc, "closure")?)?;
    let t = classify_leaf(&rational(other, "closure")?)?;
    Ok(json!({
        "command": "closure",
        "contains": closure_contains(&s, &t)?,
        "contained_in": closure_contains(&t, &s)?,
        "leaf": descriptor_json(&s),
        "other": descriptor_json(&t),
    }))
}

fn chart_json<F: JsonScalar>(chart: &MonopoleChart<F>) -> Value {
    let components: Vec<Value> = chart
        .components
        .iter()
        .map(|c| {
            json!({
                "i": c.i,
                "a": poly_json(&c.a),
                "b": poly_json(&c.b),
                "numerator": poly_json(&c.numerator),
                "denominator": poly_json(&c.denominator),
                "k": c.k,
                "simple": c.simple,
                "poles": c.poles.iter().map(|r| json!({"pole": c_json(&r.pole), "residue": c_json(&r.residue)})).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({"components": components, "in_open_subset": chart.in_open_subset})
}

/// Worst `|denominator(pole)|` relative to the denominator's coefficients.
fn pole_residual<F: Field>(chart: &MonopoleChart<F>) -> f64 {
    chart
        .components
        .iter()
        .flat_map(|c| {
            let d = c.denominator.map(Field::to_c64);
            let scale = d.coeffs().iter().map(|x| x.norm()).fold(1.0, f64::max);
            c.poles.iter().map(move |r| d.eval(&r.pole).norm() / scale)
        })
        .fold(0.0, f64::max)
}

pub fn drinfeld(doc: &MatPolyDocument, min_separation: f64) -> Output {
    let mut out = match doc.parse()? {
        AnyMonic::Rational(p) => chart_json(&drinfeld_coordinates(&p)?),
        AnyMonic::Complex(p) => {
            let chart = drinfeld_numeric(&p, min_separation)?;
            let mut out = chart_json(&chart);
            out["residuals"] = json!({"pole": pole_residual(&chart)});
            out
        }
    };
    out["command"] = json!("drinfeld");
    Ok(out)
}

fn default_partition(p: &ComplexMonic, tol: &Tolerances) -> Result<OrderedPartition, CliError> {
    let mut values = spectrum(p, tol).values();
    sorted_spectrum(&mut values);
    Ok(OrderedPartition::from_sequence(&values, p.dim())?)
}

fn factorize_doc(doc: &MatPolyDocument, partition: Option<&str>, tol: &Tolerances) -> Result<Factorization, CliError> {
    let p = doc.parse()?.to_complex();
    let part = match partition {
        Some(text) => parse_partition(&flag_json(text, "partition")?, "--partition")?,
        None => default_partition(&p, tol)?,
    };
    Ok(factorize(&p, &part, tol)?)
}

fn factorization_json(f: &Factorization) -> Value {
    let doc = FactorsDocument::from_factors(&f.factors);
    json!({
        "m": doc.m,
        "field": doc.field,
        "factors": doc.factors,
        "partition": partition_json(&f.partition),
    })
}

pub fn factor(doc: &MatPolyDocument, partition: Option<&str>, tol: &Tolerances) -> Output {
    let f = factorize_doc(doc, partition, tol)?;
    let mut out = factorization_json(&f);
    out["command"] = json!("factor");
    out["residuals"] = json!({
        "product": f.residual,
        "spectral": f.spectral_error,
        "conditions": f.conditions,
    });
    Ok(out)
}

fn input_factorization(input: &Input, partition: Option<&str>, tol: &Tolerances) -> Result<Factorization, CliError> {
    match input {
        Input::Poly(doc) => factorize_doc(doc, partition, tol),
        Input::Factors(doc) => Ok(Factorization::from_factors(doc.parse()?)?),
    }
}

fn first_eigenvalue(a: &Mat<Complex64>) -> Complex64 {
    let mut v = eigenvalues(a);
    sorted_spectrum(&mut v);
    v[0]
}

pub struct SwapArgs<'a> {
    pub partition: Option<&'a str>,
    /// 1-based; factors `position` and `position + 1` are exchanged.
    pub position: usize,
    pub lambda: Option<&'a str>,
    pub mu: Option<&'a str>,
}

pub fn swap(input: &Input, args: &SwapArgs, tol: &Tolerances) -> Output {
    let f = input_factorization(input, args.partition, tol)?;
    let n = f.factors.len();
    if args.position == 0 || args.position >= n {
        return Err(CliError::input(
            "usage",
            format!("--position must lie in 1..{} for {n} factors", n.max(2) - 1),
            Some("--position".into()),
        ));
    }
    let k = args.position - 1;
    let (a, b) = (&f.factors[k], &f.factors[k + 1]);
    let lambda = match args.lambda {
        Some(t) => parse_complex_flag(t, "lambda")?,
        None => first_eigenvalue(a),
    };
    let mu = match args.mu {
        Some(t) => parse_complex_flag(t, "mu")?,
        None => first_eigenvalue(b),
    };
    let (a2, b2) = swap_adjacent(a, b, lambda, mu, tol)?;
    let mut factors = f.factors.clone();
    factors[k] = a2;
    factors[k + 1] = b2;
    let before = product(&f.factors)?;
    let after = product(&factors)?;
    let doc = FactorsDocument::from_factors(&factors);
    Ok(json!({
        "command": "swap",
        "m": doc.m,
        "field": doc.field,
        "factors": doc.factors,
        "position": args.position,
        "lambda": c_json(&lambda),
        "mu": c_json(&mu),
        "residuals": {"product": relative_distance(&after, &before)},
    }))
}

pub fn orbit(input: &Input, partition: Option<&str>, sequence: &str, tol: &Tolerances) -> Output {
    let start = input_factorization(input, partition, tol)?;
    let targets = flag_json(sequence, "sequence")?;
    let targets = targets
        .as_array()
        .ok_or_else(|| CliError::input("usage", "--sequence is an array of partitions", Some("--sequence".into())))?
        .iter()
        .enumerate()
        .map(|(i, t)| parse_partition(t, &format!("--sequence[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let reference = start.product();
    let mut current = start.clone();
    let mut charts = Vec::new();
    let mut worst = 0.0f64;
    for target in &targets {
        let t = transition(&current, target, tol)?;
        let drift = relative_distance(&t.factorization.product(), &reference);
        worst = worst.max(drift);
        let mut chart = factorization_json(&t.factorization);
        chart["steps"] = Value::Array(
            t.steps
                .iter()
                .map(|s| json!({"position": s.position + 1, "lambda": c_json(&s.lambda), "mu": c_json(&s.mu)}))
                .collect(),
        );
        chart["residuals"] = json!({"product": drift});
        charts.push(chart);
        current = t.factorization;
    }
    Ok(json!({
        "command": "orbit",
        "start": factorization_json(&start),
        "charts": charts,
        "residuals": {"max_product": worst},
    }))
}

fn bracket_generic<F: JsonScalar>(p: &MonicMatPoly<F>, indices: Option<&str>) -> Output {
    let (m, n) = (p.dim(), p.degree());
    let numeric = !F::EXACT;
    match indices {
        Some(text) => {
            let (a, b) = parse_indices(text)?;
            let ab = bracket_tt(p, a, b)?;
            let mut out = json!({"command": "bracket", "value": ab.to_json()});
            if numeric {
                let ba = bracket_tt(p, b, a)?;
                out["residuals"] = json!({"antisymmetry": (ab + ba).modulus()});
            }
            Ok(out)
        }
        None => {
            let coords = CoordIndex::all(m, n);
            let table = coords
                .iter()
                .map(|&a| coords.iter().map(|&b| bracket_tt(p, a, b)).collect::<Result<Vec<F>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let mut out = json!({
                "command": "bracket",
                "coordinates": coords.iter().map(|c| [c.i, c.j, c.r]).collect::<Vec<_>>(),
                "table": table.iter().map(|row| row.iter().map(F::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            if numeric {
                let asym = (0..table.len())
                    .cartesian_product(0..table.len())
                    .map(|(i, j)| (table[i][j].clone() + table[j][i].clone()).modulus())
                    .fold(0.0, f64::max);
                let casimir = casimir_table(p).iter().flatten().map(Field::modulus).fold(0.0, f64::max);
                out["residuals"] = json!({"antisymmetry": asym, "casimir": casimir});
            }
            Ok(out)
        }
    }
}

pub fn bracket(doc: &MatPolyDocument, indices: Option<&str>) -> Output {
    match doc.parse()? {
        AnyMonic::Rational(p) => bracket_generic(&p, indices),
        AnyMonic::Complex(p) => bracket_generic(&p, indices),
    }
}

/// A JSON array of `m x m` matrices `A_0, A_1, ...` (coefficient of `z^k`),
/// inline or as a file path.
pub fn parse_hamiltonian(text: &str, m: usize) -> Result<PlusPolyMat<Complex64>, CliError> {
    let trimmed = text.trim_start();
    let value = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        flag_json(text, "hamiltonian")?
    } else {
        let body = std::fs::read_to_string(text)
            .map_err(|e| CliError::input("io", format!("cannot read {text}: {e}"), Some("--hamiltonian".into())))?;
        flag_json(&body, "hamiltonian")?
    };
    let mats = value
        .as_array()
        .filter(|a| !a.is_empty())
        .ok_or_else(|| CliError::input("usage", "--hamiltonian is a nonempty array of matrices", Some("--hamiltonian".into())))?;
    let coeffs = mats
        .iter()
        .enumerate()
        .map(|(k, v)| parse_loose_mat(v, m, &format!("--hamiltonian[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PlusPolyMat::new(coeffs))
}

pub struct FlowArgs<'a> {
    pub hamiltonian: &'a str,
    pub time: f64,
    pub step: f64,
    pub max_step_drift: Option<f64>,
    pub estimate_order: bool,
}

pub fn flow(doc: &MatPolyDocument, args: &FlowArgs, tol: &Tolerances) -> Output {
    let p = doc.parse()?.to_complex();
    let a = parse_hamiltonian(args.hamiltonian, p.dim())?;
    let mut opts = FlowOptions::new(args.time, args.step);
    opts.step_drift_bound = args.max_step_drift;
    opts.record_every = usize::MAX;
    let res = flow_integrate(&p, &a, &opts)?;
    let end = res.endpoint();
    let shift = match_spectra(&spectrum(&p, tol).values(), &spectrum(end, tol).values());
    let mut residuals = json!({
        "max_drift": res.max_drift,
        "final_drift": res.final_drift,
        "spectrum_shift": shift,
    });
    if args.estimate_order {
        // null when the drift is already at rounding level
        residuals["convergence_order"] = json!(convergence_order(&p, &a, args.time, args.step).ok());
    }
    Ok(json!({
        "command": "flow",
        "time": args.time,
        "step": args.step,
        "steps": res.steps,
        "endpoint": MatPolyDocument::from_monic(end, doc.variable),
        "residuals": residuals,
    }))
}

pub fn parse_suite(name: &str) -> Result<Vec<Suite>, CliError> {
    match name {
        "all" => Ok(Suite::ALL.to_vec()),
        other => Suite::ALL
            .into_iter()
            .find(|s| s.name() == other)
            .map(|s| vec![s])
            .ok_or_else(|| CliError::usage(format!("unknown suite {other:?}; expected snf, poisson, factor or all"))),
    }
}

fn fixture_check(suite: Suite, p: &AnyMonic, tol: &Tolerances) -> Value {
    let (pass, detail) = match (suite, p) {
        (Suite::Snf, AnyMonic::Rational(p)) => {
            let z = p.to_z();
            match smith_normal_form(&z) {
                Ok(s) => {
                    let m = z.dim();
                    let minors = (1..=m).all(|r| {
                        let tail = s.invariants[m - r..].iter().fold(RatPoly::one(), |acc, d| &acc * d);
                        minor_gcd_oracle(&z, r).is_ok_and(|g| g == tail)
                    });
                    let ok = s.reconstruct() == z && is_divisibility_chain(&s.invariants) && minors;
                    (ok, format!("invariants {}", s.invariants.iter().join(", ")))
                }
                Err(e) => (false, e.to_string()),
            }
        }
        (Suite::Snf, AnyMonic::Complex(_)) => return json!({"skipped": "complex document"}),
        (Suite::Poisson, AnyMonic::Rational(p)) => {
            let bad = casimir_table(p).iter().flatten().filter(|v| **v != Rational::from_i64(0)).count();
            (bad == 0, format!("{bad} nonzero Casimir brackets"))
        }
        (Suite::Poisson, AnyMonic::Complex(p)) => {
            let worst = casimir_table(p).iter().flatten().map(Field::modulus).fold(0.0, f64::max);
            let scale = p.coeffs().iter().map(Mat::max_modulus).fold(1.0, f64::max).powi(2 * p.degree() as i32);
            (worst <= tol.tol_eig * scale, format!("max Casimir bracket {worst:.3e}"))
        }
        (Suite::Factor, p) => {
            let c = p.to_complex();
            if !spectrum(&c, tol).generic {
                return json!({"skipped": "spectrum is not generic"});
            }
            match default_partition(&c, tol).and_then(|part| Ok(factorize(&c, &part, tol)?)) {
                Ok(f) => (f.residual <= tol.tol_div, format!("product residual {:.3e}", f.residual)),
                Err(e) => (false, e.message),
            }
        }
    };
    json!({"passed": pass, "detail": detail})
}

pub fn verify(suites: &[Suite], seed: u64, cases: Option<usize>, doc: Option<&MatPolyDocument>, tol: &Tolerances) -> Result<(Value, bool), CliError> {
    let fixture = doc.map(MatPolyDocument::parse).transpose()?;
    let reports = run_suites(suites, seed, cases, tol);
    let mut all = reports.iter().all(|r| r.ok());
    let suites_json: Vec<Value> = reports
        .iter()
        .map(|r| {
            let mut s = json!({
                "suite": r.suite.name(),
                "seed": r.seed,
                "cases": r.cases,
                "passed": r.passed,
                "failed": r.failed(),
                "failed_cases": r.failed_cases,
            });
            if r.suite == Suite::Factor {
                s["residuals"] = json!({"max": r.max_residual});
            }
            if let Some(p) = &fixture {
                let check = fixture_check(r.suite, p, tol);
                all &= check["passed"].as_bool() != Some(false);
                s["fixture"] = check;
            }
            s
        })
        .collect();
    Ok((json!({"command": "verify", "seed": seed, "suites": suites_json, "all_passed": all}), all))
}
