use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use serde_json::{json, Value};

use rdt_core::embedding::TorusEmbedding;
use rdt_core::format::{
    datum_from_json, datum_to_json, group_to_json, matrix_value, rational_value, spectrum_to_json,
    vector_value,
};
use rdt_core::linalg::{parse_rational, Rational};
use rdt_core::rootdatum::{DatumType, DatumViolation, EuclideanRootDatum};
use rdt_core::rootsystem::{Family, DEFAULT_WEYL_CAP};
use rdt_core::spectrum::{self, MultiplicitySet};
use rdt_core::Error;

use crate::report::{CmdResult, InputError, Report};
use crate::{Command, TypeArgs};

pub fn run(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Validate { datum } => validate(&load(datum)?),
        Command::Standard { ty, out } => standard(ty, out.as_deref()),
        Command::Classify { datum } => classify(&load(datum)?),
        Command::Pi1 { datum } => pi1(&load(datum)?),
        Command::Split { datum } => split(&load(datum)?),
        Command::Polysphere { datum } => polysphere(&load(datum)?),
        Command::Iso { first, second } => iso(&load(first)?, &load(second)?),
        Command::Spectrum {
            datum,
            ty,
            mults,
            bound,
        } => spectrum_cmd(datum.as_deref(), ty, mults, bound),
        Command::FirstEigencheck { datum, ty, mults } => first_eigencheck(datum.as_deref(), ty, mults),
        Command::Embed {
            datum,
            ty,
            samples,
            tol,
            a,
            csv,
        } => embed(datum.as_deref(), ty, *samples, *tol, *a, csv.as_deref()),
    }
}

fn load(path: &Path) -> Result<EuclideanRootDatum, InputError> {
    let shown = path.display();
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{shown}: {e}")))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| InputError(format!("{shown}: {e}")))?;
    datum_from_json(&value).map_err(|e| InputError(format!("{shown}: {e}")))
}

fn parse_type(ty: &TypeArgs) -> Result<DatumType, InputError> {
    let letter = ty
        .family
        .as_deref()
        .ok_or_else(|| InputError("--type is required without a datum file".into()))?;
    let family = Family::from_letter(letter.trim_end_matches("-hat"))
        .ok_or_else(|| InputError(format!("unknown type \"{letter}\"; expected A, B, C, D or BC")))?;
    let rank = ty
        .rank
        .ok_or_else(|| InputError("--rank is required with --type".into()))?;
    let length_sq = parse_rational(&ty.length2).map_err(|e| InputError(format!("--length2: {e}")))?;
    if family == Family::D && rank == 1 {
        warn!("D in rank 1 is the same datum as A0-hat");
    }
    Ok(DatumType::new(family, rank, length_sq)?)
}

/// Type from a datum file (through classification) or from the flags.
fn resolve_type(datum: Option<&Path>, ty: &TypeArgs) -> Result<std::result::Result<DatumType, Report>, InputError> {
    match (datum, &ty.family) {
        (Some(_), Some(_)) => Err(InputError("give either a datum file or --type, not both".into())),
        (Some(path), None) => Ok(match load(path)?.classify() {
            Ok(rep) => Ok(rep.datum_type),
            Err(e) => Err(classify_failure(e)?),
        }),
        (None, _) => Ok(Ok(parse_type(ty)?)),
    }
}

fn parse_mults(s: &str) -> Result<MultiplicitySet, InputError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let values: Vec<u32> = parts
        .iter()
        .map(|p| p.parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| InputError(format!("--mults: expected four nonnegative integers, got \"{s}\"")))?;
    match values.as_slice() {
        [m1, m2, mp, mm] => Ok(MultiplicitySet::new(*m1, *m2, *mp, *mm)),
        _ => Err(InputError(format!("--mults: expected m1,m2,m+,m-, got \"{s}\""))),
    }
}

fn weyl_cap() -> Result<usize, InputError> {
    match std::env::var("RDT_MAX_WEYL") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| InputError(format!("RDT_MAX_WEYL: expected a positive integer, got \"{v}\""))),
        Err(_) => Ok(DEFAULT_WEYL_CAP),
    }
}

fn violation_json(v: &DatumViolation) -> Value {
    match v {
        DatumViolation::NotFull { rank, dim } => json!({"violation": "lattice not full", "rank": rank, "dim": dim}),
        DatumViolation::Roots(a) => json!({"violation": format!("root axiom: {}", a.axiom())}),
        DatumViolation::Gamma0NotContained { witness } => {
            json!({"violation": "gamma0 not contained in lattice", "witness": vector_value(witness)})
        }
        DatumViolation::NotInGamma1 { root, witness } => json!({
            "violation": "lattice not contained in gamma1",
            "root": vector_value(root),
            "witness": vector_value(witness),
        }),
    }
}

/// Valid-but-negative answers become an `invalid` report; anything else is
/// an input error.
fn classify_failure(e: Error) -> Result<Report, InputError> {
    let payload = match &e {
        Error::InvalidDatum(_) => json!({"reason": "invalid datum"}),
        Error::NotRectangular => json!({"reason": "not rectangular"}),
        Error::NotCubic => json!({"reason": "not cubic"}),
        Error::Decomposable { factor_dims } => json!({"reason": "decomposable", "factor_dims": factor_dims}),
        Error::ShapeViolation { root } => json!({"reason": "shape violation", "root": vector_value(root)}),
        Error::PatternMismatch => json!({"reason": "no matching family"}),
        Error::NoSignAssignment(_) => json!({"reason": "no sign normalization"}),
        _ => return Err(e.into()),
    };
    Ok(Report::invalid(payload, e.to_string()))
}

fn require_valid(d: &EuclideanRootDatum) -> Option<Report> {
    d.validate().err().map(|v| {
        let mut payload = violation_json(&v);
        payload["valid"] = json!(false);
        Report::invalid(payload, v.to_string())
    })
}

fn validate(d: &EuclideanRootDatum) -> CmdResult {
    Ok(require_valid(d).unwrap_or_else(|| Report::ok(json!({"valid": true}))))
}

fn standard(ty: &TypeArgs, out: Option<&Path>) -> CmdResult {
    let t = parse_type(ty)?;
    let d = EuclideanRootDatum::standard(&t);
    let doc = datum_to_json(&d);
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(&doc).expect("datum serializes");
        text.push('\n');
        fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    Ok(Report::ok(json!({"type": t.label(), "datum": doc})))
}

fn classify(d: &EuclideanRootDatum) -> CmdResult {
    if let Some(r) = require_valid(d) {
        return Ok(r);
    }
    let rep = match d.classify() {
        Ok(rep) => rep,
        Err(e) => return classify_failure(e),
    };
    let t = &rep.datum_type;
    let cap = weyl_cap()?;
    let (weyl_order, warning) = match d.roots().weyl_group(cap) {
        Ok(w) => (json!(w.order()), None),
        Err(Error::WeylCapExceeded { cap }) => {
            warn!("Weyl group larger than {cap} elements; order not reported");
            (Value::Null, Some(format!("Weyl group exceeds the cap of {cap} elements")))
        }
        Err(e) => return Err(e.into()),
    };
    let report = Report::ok(json!({
        "type": t.label(),
        "family": t.family.letter(),
        "rank": t.rank,
        "length2": rational_value(&t.length_sq),
        "case": rep.case.to_string(),
        "pi1": rep.fundamental_group.to_string(),
        "fundamental_group": group_to_json(&rep.fundamental_group),
        "cubic_basis": rep.cubic_basis.vectors.iter().map(vector_value).collect::<Vec<_>>(),
        "signs": rep.signs,
        "weyl_order": weyl_order,
    }));
    Ok(match warning {
        Some(w) => report.with_warning(w),
        None => report,
    })
}

fn pi1(d: &EuclideanRootDatum) -> CmdResult {
    if let Some(r) = require_valid(d) {
        return Ok(r);
    }
    let g = d.fundamental_group()?;
    let mut payload = group_to_json(&g);
    payload["pi1"] = json!(g.to_string());
    Ok(Report::ok(payload))
}

fn split(d: &EuclideanRootDatum) -> CmdResult {
    if let Some(r) = require_valid(d) {
        return Ok(r);
    }
    let factors = d.split()?;
    Ok(Report::ok(json!({
        "indecomposable": factors.len() == 1,
        "factors": factors.iter().map(datum_to_json).collect::<Vec<_>>(),
    })))
}

fn polysphere(d: &EuclideanRootDatum) -> CmdResult {
    if let Some(r) = require_valid(d) {
        return Ok(r);
    }
    Ok(Report::ok(json!({"admits_polysphere": d.admits_polysphere()?})))
}

fn iso(a: &EuclideanRootDatum, b: &EuclideanRootDatum) -> CmdResult {
    for d in [a, b] {
        if let Some(r) = require_valid(d) {
            return Ok(r);
        }
    }
    Ok(match a.is_isomorphic(b)? {
        Some(phi) => Report::ok(json!({"isomorphic": true, "isometry": matrix_value(&phi)})),
        None => Report::invalid(
            json!({"isomorphic": false, "result": "not isomorphic"}),
            "no isometry maps the first datum onto the second",
        ),
    })
}

fn spectrum_cmd(datum: Option<&Path>, ty: &TypeArgs, mults: &str, bound: &str) -> CmdResult {
    let t = match resolve_type(datum, ty)? {
        Ok(t) => t,
        Err(report) => return Ok(report),
    };
    let m = parse_mults(mults)?;
    let bound: Rational = parse_rational(bound).map_err(|e| InputError(format!("--bound: {e}")))?;
    let entries = spectrum::enumerate_spectrum(&t, &m, &bound)?;
    Ok(Report::ok(json!({
        "type": t.label(),
        "mults": [m.m1, m.m2, m.m_plus, m.m_minus],
        "bound": rational_value(&bound),
        "spectrum": spectrum_to_json(&entries),
    })))
}

fn first_eigencheck(datum: Option<&Path>, ty: &TypeArgs, mults: &str) -> CmdResult {
    let t = match resolve_type(datum, ty)? {
        Ok(t) => t,
        Err(report) => return Ok(report),
    };
    let m = parse_mults(mults)?;
    let minimal = spectrum::first_eigenspace_check(&t, &m)?;
    let mut e1 = vec![0i64; t.rank];
    e1[0] = 1;
    let lambda = spectrum::eigenvalue(&t, &m, &e1)?;
    Ok(Report::ok(json!({
        "type": t.label(),
        "mults": [m.m1, m.m2, m.m_plus, m.m_minus],
        "lambda_e1_scaled": rational_value(&lambda),
        "first_eigenspace_minimal": minimal,
    })))
}

fn embed(
    datum: Option<&Path>,
    ty: &TypeArgs,
    samples: usize,
    tol: f64,
    a: f64,
    csv: Option<&Path>,
) -> CmdResult {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(InputError("--a must be a finite nonnegative number".into()));
    }
    let t = match resolve_type(datum, ty)? {
        Ok(t) => t,
        Err(report) => return Ok(report),
    };
    let report = EuclideanRootDatum::standard(&t).classify()?;
    let e = TorusEmbedding::build(&report, a);
    let checks = e.run_checks(samples, tol)?;
    if let Some(path) = csv {
        write_csv(&e, samples, path)?;
    }
    let payload = json!({
        "type": t.label(),
        "case": t.case().to_string(),
        "samples": checks.samples,
        "tolerance": checks.tolerance,
        "max_planarity_residual": checks.max_planarity_residual,
        "max_orthogonality_residual": checks.max_orthogonality_residual,
        "max_metric_distortion": checks.max_metric_distortion,
        "lattice_closure_residual": checks.lattice_closure_residual,
        "min_return_separation": checks.min_return_separation,
        "pass": checks.pass,
    });
    Ok(if checks.pass {
        Report::ok(payload)
    } else {
        Report::invalid(payload, format!("failed checks: {}", checks.failures().join(", ")))
    })
}

fn write_csv(e: &TorusEmbedding, samples: usize, path: &Path) -> Result<(), InputError> {
    let io_err = |err: std::io::Error| InputError(format!("{}: {err}", path.display()));
    let mut out = Vec::new();
    let r = e.rank();
    let mut header: Vec<String> = (1..=r).map(|j| format!("h{j}")).collect();
    for i in 1..=e.complex_dim() {
        header.push(format!("re{i}"));
        header.push(format!("im{i}"));
    }
    writeln!(out, "{}", header.join(",")).map_err(io_err)?;
    for h in e.sample_grid(samples) {
        let p = e.phi_real(&h)?;
        let row: Vec<String> = h.iter().chain(&p).map(|x| format!("{x:.16e}")).collect();
        writeln!(out, "{}", row.join(",")).map_err(io_err)?;
    }
    fs::write(PathBuf::from(path), out).map_err(io_err)
}
