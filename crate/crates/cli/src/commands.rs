use nalgebra::DVector;
use nctorus::gns::{
    gns_build, is_positive, schwarz_check, state_action, AlgebraKind, FiniteAlgebra, GnsOptions, PositiveForm,
    DEFAULT_TOLERANCE as GNS_TOL,
};
use nctorus::grid::{GridFunction1D, GridFunction2D};
use nctorus::heisenberg::{
    apply_p, apply_q, calibrate_q, rep_lattice_measure, solve_inner_generator, weyl_p, weyl_q, DerivationData,
    InnerSolverOptions,
};
use nctorus::lattice::write_json;
use nctorus::matrep::{
    circle_check_relations, circle_eval, clock_shift, equivariance_check, eval_section, section_family, unit_samples,
    CircleElement, CircleSpec, CircleTerm, EquivarianceCheck, SectionEntry,
};
use nctorus::torus::{
    adjoint, apply_derivation, check_derivation_relation, d_power, decompose_derivation, inner_derivation, l2_state,
    q_mul_with, reorder_phase, smooth_seminorm, trace, DerivationSpec, Generator, RelationCheck, TorusElement,
    TorusState, DEFAULT_TOLERANCE as TORUS_TOL,
};
use nctorus::twisted::{
    decay_warnings, fourier_bridge_error, gauge_iso, half_moyal, hbar_smoothness_probe, heisenberg_group_conv,
    moyal_star, other_twisted_conv, plain_conv, rescaled_conv, twisted_conv, GaugeDirection, PolySymbol,
};
use nctorus::{Complex64, Exec, PhaseQ};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{Command, ConvChoice, GlobalArgs};
use crate::input::{complex, decode, element, lattice, load, load_value, pair, phase_flag, resolve_q, to_value};
use crate::suite::run_suite;
use crate::{Cli, Failure, Outcome};

/// Relative boundary mass above which a 1D sample is reported as not decayed.
const BOUNDARY_WARNING: f64 = 1e-12;
/// Golden-ratio offset for circle samples.
const SAMPLE_OFFSET: f64 = 0.618_033_988_749_894_8;

pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let g = &cli.global;
    let q = phase_flag(g.q.as_deref())?;
    match &cli.command {
        Command::TorusMul { inputs, reorder } => torus_mul(q, inputs, reorder.as_deref()),
        Command::TorusAdjoint { input } => torus_adjoint(element(input, "input", q)?),
        Command::TorusSeminorm { input, word, state } => torus_seminorm(g, q, input, word.as_deref(), state.as_deref()),
        Command::TorusDerive {
            input,
            power,
            inner,
            derivation,
        } => torus_derive(g, q, input, power.as_deref(), inner.as_deref(), derivation.as_deref()),
        Command::TorusCheckDerivation { input } => torus_check_derivation(g, q, input),
        Command::MatrepEval { input, u, v, family } => {
            matrep_eval(element(input, "input", q)?, u.as_deref(), v.as_deref(), family.as_deref())
        }
        Command::CircleCheck {
            input,
            element,
            z,
            samples,
        } => circle_check(g, q, input, element.as_deref(), z.as_deref(), *samples),
        Command::WeylCheck { input, t, s } => weyl_check(g, input.as_deref(), *t, *s),
        Command::RepLattice { input, sigma, probe } => rep_lattice(g, input, *sigma, probe.as_deref()),
        Command::SolveInner { input } => solve_inner(g, input),
        Command::TwistedConv { inputs, kind } => twisted(g, inputs, *kind),
        Command::MoyalStar { f, g: second, half } => moyal(g, f, second, *half),
        Command::FourierBridge { inputs } => bridge(g, inputs),
        Command::HbarProbe { inputs, delta } => probe(g, inputs, *delta),
        Command::GnsBuild { algebra, form } => gns_build_cmd(g, algebra, form),
        Command::GnsCheck { algebra, form, element } => gns_check(g, algebra, form, element),
        Command::Suite { only } => suite(g, only),
    }
}

fn positive(value: f64, field: &str) -> Result<f64, Failure> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Failure::input(format!("{field}: expected a positive number, got {value}")))
    }
}

fn hbar(g: &GlobalArgs, default: f64) -> Result<f64, Failure> {
    let h = g.hbar.unwrap_or(default);
    if h.is_finite() && h >= 0.0 {
        Ok(h)
    } else {
        Err(Failure::input(format!("hbar: expected a finite non-negative number, got {h}")))
    }
}

fn tol(g: &GlobalArgs, default: f64) -> Result<f64, Failure> {
    positive(g.tol.unwrap_or(default), "tol")
}

fn torus_mul(q: Option<PhaseQ>, inputs: &[String], reorder: Option<&str>) -> Result<Outcome, Failure> {
    if let Some(src) = reorder {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Word {
            n: usize,
            word: Vec<(usize, i64)>,
            q: Option<PhaseQ>,
        }
        let w: Word = load(src, "reorder")?;
        let q = w.q.or(q).unwrap_or(PhaseQ::ONE);
        let word: Vec<Generator> = w.word.iter().map(|&(i, e)| Generator::new(i, e)).collect();
        let r = reorder_phase(&word, w.n, q)?;
        return Ok(Outcome::ok(json!({
            "exponents": r.exponents,
            "phase_exponent": r.phase_exponent,
            "phase": pair(r.phase),
            "q": q,
        })));
    }
    let [a, b] = inputs else {
        return Err(Failure::input("torus-mul: expected two elements, or --reorder"));
    };
    let (fa, qa) = lattice(a, "left")?;
    let (fb, qb) = lattice(b, "right")?;
    let qa = resolve_q(qa, q, "left")?;
    let qb = resolve_q(qb, q, "right")?;
    if qa != qb {
        return Err(Failure::input(format!("q mismatch: left has {qa} but right has {qb}")));
    }
    let product = q_mul_with(Exec::default(), &TorusElement::new(fa, qa), &TorusElement::new(fb, qb))?;
    Ok(Outcome::ok(to_value(&product)))
}

fn torus_adjoint(f: TorusElement) -> Result<Outcome, Failure> {
    Ok(Outcome::ok(json!({
        "adjoint": adjoint(&f),
        "trace": pair(trace(&f)),
        "l2_state": l2_state(&f),
        "primed": f.coeffs.to_primed(&f.q),
    })))
}

fn torus_seminorm(
    g: &GlobalArgs,
    q: Option<PhaseQ>,
    input: &str,
    word: Option<&str>,
    state: Option<&str>,
) -> Result<Outcome, Failure> {
    let (coeffs, own_q) = lattice(input, "input")?;
    let m = g.order.unwrap_or(0);
    let normalized: Value =
        serde_json::from_slice(&write_json(&coeffs)).expect("write_json produces valid JSON");
    let mut report = json!({
        "order": m,
        "seminorm": coeffs.seminorm(m),
        "lattice": normalized,
    });
    if word.is_some() || state.is_some() {
        let f = TorusElement::new(coeffs, resolve_q(own_q, q, "input")?);
        let word: Vec<(u32, u32)> = word.map(|w| load(w, "word")).transpose()?.unwrap_or_default();
        let st = match state {
            None => TorusState::Trace,
            Some(src) => match load_value(src, "state")? {
                Value::String(s) if s == "trace" => TorusState::Trace,
                Value::String(s) => return Err(Failure::input(format!("state: unknown state `{s}`"))),
                _ => TorusState::Vector(element(src, "state", Some(f.q))?),
            },
        };
        report["smooth_seminorm"] = json!(smooth_seminorm(&f, &word, &st)?);
        report["word"] = json!(word);
    }
    Ok(Outcome::ok(report))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DerivationDoc {
    du: Value,
    dv: Value,
    q: Option<PhaseQ>,
}

fn derivation_spec(src: &str, q: Option<PhaseQ>) -> Result<DerivationSpec, Failure> {
    let doc: DerivationDoc = load(src, "derivation")?;
    let du = nctorus::lattice::read_json(&serde_json::to_vec(&doc.du).expect("re-encoding"))
        .map_err(|e| Failure::input(format!("derivation.du: {e}")))?;
    let dv = nctorus::lattice::read_json(&serde_json::to_vec(&doc.dv).expect("re-encoding"))
        .map_err(|e| Failure::input(format!("derivation.dv: {e}")))?;
    Ok(DerivationSpec::new(du, dv, resolve_q(doc.q, q, "derivation")?))
}

fn torus_derive(
    g: &GlobalArgs,
    q: Option<PhaseQ>,
    input: &str,
    power: Option<&str>,
    inner: Option<&str>,
    derivation: Option<&str>,
) -> Result<Outcome, Failure> {
    let f = element(input, "input", q)?;
    let (mode, result) = if let Some(p) = power {
        let [m, n]: [u32; 2] = load(p, "power")?;
        ("power", d_power(&f, m, n))
    } else if let Some(a) = inner {
        let a = element(a, "inner", Some(f.q))?;
        ("inner", inner_derivation(&a, &f)?)
    } else if let Some(d) = derivation {
        let d = derivation_spec(d, Some(f.q))?;
        ("derivation", apply_derivation(&d, &f, tol(g, TORUS_TOL)?)?)
    } else {
        return Err(Failure::input("torus-derive: one of --power, --inner, --derivation is required"));
    };
    Ok(Outcome::ok(json!({"mode": mode, "result": result})))
}

fn torus_check_derivation(g: &GlobalArgs, q: Option<PhaseQ>, input: &str) -> Result<Outcome, Failure> {
    let d = derivation_spec(input, q)?;
    let tol = tol(g, TORUS_TOL)?;
    match check_derivation_relation(&d, tol) {
        RelationCheck::Ok { max_residual } => {
            let decomposition = match decompose_derivation(&d, tol) {
                Ok(dec) => json!({
                    "inner": dec.inner,
                    "outer_u": dec.outer_u,
                    "outer_v": dec.outer_v,
                    "residual": dec.residual,
                }),
                Err(e) => json!({"error": e.to_string()}),
            };
            Ok(Outcome::ok(json!({
                "result": "derivation",
                "max_residual": max_residual,
                "decomposition": decomposition,
            })))
        }
        RelationCheck::Violation { k, l, residual } => Ok(Outcome {
            report: json!({"result": "violation", "k": k, "l": l, "residual": residual}),
            violations: vec![format!("derivation relation violated at ({k}, {l}), residual {residual:e}")],
        }),
    }
}

fn matrep_eval(f: TorusElement, u: Option<&str>, v: Option<&str>, family: Option<&str>) -> Result<Outcome, Failure> {
    let (u0, v0) = clock_shift(f.q)?;
    let one = Complex64::new(1.0, 0.0);
    let u = u.map(|s| complex(s, "u")).transpose()?.unwrap_or(one);
    let v = v.map(|s| complex(s, "v")).transpose()?.unwrap_or(one);
    let family: Vec<SectionEntry> = match family {
        Some(src) => load(src, "family")?,
        None => section_family(&f)?,
    };
    let mut report = json!({
        "u0": u0,
        "v0": v0,
        "u": pair(u),
        "v": pair(v),
        "value": eval_section(&f, u, v)?,
    });
    let mut violations = Vec::new();
    match equivariance_check(&family, f.q)? {
        EquivarianceCheck::Ok => report["equivariance"] = json!({"result": "ok"}),
        EquivarianceCheck::Violation { k, l, s, t } => {
            report["equivariance"] = json!({"result": "violation", "k": k, "l": l, "s": s, "t": t});
            violations.push(format!("section term ({k}, {l}, {s}, {t}) is not equivariant"));
        }
    }
    Ok(Outcome { report, violations })
}

fn circle_check(
    g: &GlobalArgs,
    q: Option<PhaseQ>,
    input: &str,
    element: Option<&str>,
    z: Option<&str>,
    samples: usize,
) -> Result<Outcome, Failure> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        a: i64,
        b: i64,
        q: Option<PhaseQ>,
        a_prime: Option<i64>,
        b_prime: Option<i64>,
    }
    let doc: Doc = load(input, "input")?;
    let q = resolve_q(doc.q, q, "input")?;
    let spec = match (doc.a_prime, doc.b_prime) {
        (Some(ap), Some(bp)) => CircleSpec::with_bezout(doc.a, doc.b, ap, bp, q)?,
        (None, None) => CircleSpec::new(doc.a, doc.b, q)?,
        _ => return Err(Failure::input("input: give both a_prime and b_prime or neither")),
    };
    if samples == 0 {
        return Err(Failure::input("samples: expected at least one sample"));
    }
    let tol = tol(g, 1e-12)?;
    let residual = circle_check_relations(Exec::default(), &spec, &unit_samples(samples, SAMPLE_OFFSET))?;
    let mut report = json!({"spec": spec, "order": spec.order(), "samples": samples, "residual": residual});
    if let Some(src) = element {
        let coeffs: Vec<CircleTerm> = load(src, "element")?;
        let z = z.map(|s| complex(s, "z")).transpose()?.unwrap_or(Complex64::new(1.0, 0.0));
        report["z"] = pair(z);
        report["value"] = to_value(&circle_eval(&CircleElement { spec, coeffs }, z)?);
    }
    let violations = if residual > tol {
        vec![format!("circle relations residual {residual:e} exceeds {tol:e}")]
    } else {
        Vec::new()
    };
    Ok(Outcome { report, violations })
}

fn grid_1d(g: &GlobalArgs, src: Option<&str>, field: &str) -> Result<GridFunction1D, Failure> {
    match src {
        Some(s) => load(s, field),
        None => {
            let l = positive(g.grid_extent.unwrap_or(16.0), "grid-extent")?;
            let n = g.grid_n.unwrap_or(512);
            Ok(GridFunction1D::from_fn(l, n, |u| {
                Complex64::new((-u * u / 2.0).exp(), 0.0) * Complex64::cis(0.3 * u)
            })?)
        }
    }
}

fn weyl_check(g: &GlobalArgs, input: Option<&str>, t: f64, s: f64) -> Result<Outcome, Failure> {
    let f = grid_1d(g, input, "input")?;
    let h = hbar(g, 1.0)?;
    let tol = tol(g, 1e-8)?;
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Err(Failure::input("input: the function is zero"));
    }
    let comm = apply_q(&apply_p(&f, h)).sub(&apply_p(&apply_q(&f), h))?;
    let commutator = comm.sub(&f.scale(Complex64::new(0.0, h)))?.l2_norm() / (h.max(f64::MIN_POSITIVE) * norm);
    let qp = weyl_q(t, &weyl_p(s, &f, h));
    let pq = weyl_p(s, &weyl_q(t, &f), h);
    let relation = qp.sub(&pq.scale(Complex64::cis(-t * s * h)))?.max_abs();
    let group_p = weyl_p(s, &weyl_p(t, &f, h), h).sub(&weyl_p(s + t, &f, h))?.max_abs();
    let group_q = weyl_q(s, &weyl_q(t, &f)).sub(&weyl_q(s + t, &f))?.max_abs();
    let unitarity = ((weyl_q(t, &f).l2_norm() - norm).abs()).max((weyl_p(s, &f, h).l2_norm() - norm).abs()) / norm;
    let boundary = f.boundary_mass() / f.max_abs();
    let mut report = json!({
        "hbar": h,
        "t": t,
        "s": s,
        "commutator_rel": commutator,
        "weyl_relation": relation,
        "group_law_p": group_p,
        "group_law_q": group_q,
        "unitarity": unitarity,
    });
    if boundary > BOUNDARY_WARNING {
        report["warning"] = json!({"field": "input", "boundary_mass": boundary});
    }
    let violations = [
        ("commutator", commutator),
        ("weyl relation", relation),
        ("group law of P", group_p),
        ("group law of Q", group_q),
        ("unitarity", unitarity),
    ]
    .iter()
    .filter(|(_, r)| *r > tol)
    .map(|(name, r)| format!("{name} residual {r:e} exceeds {tol:e}"))
    .collect();
    Ok(Outcome { report, violations })
}

fn rep_lattice(g: &GlobalArgs, input: &str, sigma: f64, probe: Option<&str>) -> Result<Outcome, Failure> {
    let (c, _) = lattice(input, "input")?;
    let h = hbar(g, 0.5)?;
    let f = grid_1d(g, probe, "probe")?;
    let calibration = calibrate_q(sigma, h, &f)?;
    let image = rep_lattice_measure(&c, sigma, h, &f)?;
    Ok(Outcome::ok(json!({
        "sigma": sigma,
        "hbar": h,
        "calibration": calibration,
        "image": image,
    })))
}

fn solve_inner(g: &GlobalArgs, input: &str) -> Result<Outcome, Failure> {
    let d: DerivationData = load(input, "input")?;
    let mut opts = InnerSolverOptions::default();
    if let Some(t) = g.tol {
        opts.compatibility_tol = positive(t, "tol")?;
    }
    Ok(Outcome::ok(to_value(&solve_inner_generator(&d, &opts)?)))
}

fn grids_2d(g: &GlobalArgs, inputs: &[String], l: f64, n: usize) -> Result<(GridFunction2D, GridFunction2D), Failure> {
    match inputs {
        [a, b] => Ok((load(a, "left")?, load(b, "right")?)),
        [] => {
            let l = positive(g.grid_extent.unwrap_or(l), "grid-extent")?;
            let n = g.grid_n.unwrap_or(n);
            let gauss = |t0: f64, s0: f64, w: f64| {
                GridFunction2D::square(l, n, move |t, s| {
                    Complex64::new((-((t - t0).powi(2) + (s - s0).powi(2)) / (2.0 * w * w)).exp(), 0.0)
                })
            };
            Ok((gauss(0.5, 0.0, 1.0)?, gauss(0.0, -0.5, 1.2)?))
        }
        _ => Err(Failure::input("inputs: expected two grid functions or none")),
    }
}

fn twisted(g: &GlobalArgs, inputs: &[String], kind: ConvChoice) -> Result<Outcome, Failure> {
    let h = hbar(g, 0.5)?;
    let gauge = matches!(kind, ConvChoice::GaugeForward | ConvChoice::GaugeInverse);
    let (result, warnings) = if gauge {
        let [a] = inputs else {
            return Err(Failure::input("inputs: gauge maps take one grid function"));
        };
        let a: GridFunction2D = load(a, "input")?;
        let direction = if kind == ConvChoice::GaugeForward {
            GaugeDirection::Forward
        } else {
            GaugeDirection::Inverse
        };
        (gauge_iso(&a, h, direction), decay_warnings(&[("input", &a)]))
    } else {
        let [a, b] = inputs else {
            return Err(Failure::input("inputs: convolutions take two grid functions"));
        };
        let a: GridFunction2D = load(a, "left")?;
        let b: GridFunction2D = load(b, "right")?;
        let r = match kind {
            ConvChoice::Twisted => twisted_conv(&a, &b, h)?,
            ConvChoice::Symplectic => other_twisted_conv(&a, &b, h)?,
            ConvChoice::Group => heisenberg_group_conv(&a, &b, h)?,
            ConvChoice::Plain => plain_conv(&a, &b)?,
            ConvChoice::Rescaled => rescaled_conv(&a, &b, h)?,
            ConvChoice::GaugeForward | ConvChoice::GaugeInverse => unreachable!(),
        };
        (r, decay_warnings(&[("left", &a), ("right", &b)]))
    };
    Ok(Outcome::ok(json!({
        "kind": kind_name(kind),
        "hbar": h,
        "result": result,
        "warnings": warnings,
    })))
}

fn kind_name(kind: ConvChoice) -> &'static str {
    match kind {
        ConvChoice::Twisted => "twisted",
        ConvChoice::Symplectic => "symplectic",
        ConvChoice::Group => "group",
        ConvChoice::Plain => "plain",
        ConvChoice::Rescaled => "rescaled",
        ConvChoice::GaugeForward => "gauge-forward",
        ConvChoice::GaugeInverse => "gauge-inverse",
    }
}

fn moyal(g: &GlobalArgs, f: &str, second: &str, half: bool) -> Result<Outcome, Failure> {
    let f: PolySymbol = load(f, "f")?;
    let h: PolySymbol = load(second, "g")?;
    let order = g.order.unwrap_or(2) as usize;
    let series = if half {
        half_moyal(&f, &h, order)?
    } else {
        moyal_star(&f, &h, order)?
    };
    Ok(Outcome::ok(json!({
        "product": if half { "half_moyal" } else { "moyal" },
        "order": order,
        "series": series,
    })))
}

fn bridge(g: &GlobalArgs, inputs: &[String]) -> Result<Outcome, Failure> {
    let (a, b) = grids_2d(g, inputs, 12.0, 64)?;
    let h = hbar(g, 0.05)?;
    let order = g.order.unwrap_or(8);
    let errors = (0..=order)
        .map(|k| fourier_bridge_error(&a, &b, h, k))
        .collect::<Result<Vec<_>, _>>()?;
    let error = errors[order as usize];
    let report = json!({
        "hbar": h,
        "order": order,
        "error": error,
        "errors_by_order": errors,
        "warnings": decay_warnings(&[("left", &a), ("right", &b)]),
    });
    let violations = match g.tol {
        Some(t) if error > t => vec![format!("bridge error {error:e} exceeds {t:e}")],
        _ => Vec::new(),
    };
    Ok(Outcome { report, violations })
}

fn probe(g: &GlobalArgs, inputs: &[String], delta: f64) -> Result<Outcome, Failure> {
    let (a, b) = grids_2d(g, inputs, 8.0, 64)?;
    let h = hbar(g, 0.5)?;
    let p = hbar_smoothness_probe(&a, &b, h, positive(delta, "delta")?)?;
    let violations = if p.derivative_norm > 1e-10 && !(3.5..=4.5).contains(&p.ratio) {
        vec![format!("Richardson ratio {} outside [3.5, 4.5]", p.ratio)]
    } else {
        Vec::new()
    };
    Ok(Outcome {
        report: json!({"hbar0": h, "delta": delta, "probe": p}),
        violations,
    })
}

fn gns_inputs(algebra: &str, form: &str) -> Result<(FiniteAlgebra, PositiveForm), Failure> {
    let kind: AlgebraKind = load(algebra, "algebra")?;
    let alg = FiniteAlgebra::new(kind)?;
    let phi = match load_value(form, "form")? {
        Value::String(s) if s == "trace" => PositiveForm::trace(&alg),
        Value::String(s) => return Err(Failure::input(format!("form: unknown form `{s}`"))),
        Value::Object(mut m) if m.contains_key("vector") => {
            let w: Vec<Complex64> = decode(m.remove("vector").expect("checked"), "form.vector")?;
            PositiveForm::vector_state(&alg, &w)?
        }
        other => decode(other, "form")?,
    };
    if phi.values.len() != alg.dim() {
        return Err(Failure::input(format!(
            "form: expected {} values, found {}",
            alg.dim(),
            phi.values.len()
        )));
    }
    Ok((alg, phi))
}

fn gns_build_cmd(g: &GlobalArgs, algebra: &str, form: &str) -> Result<Outcome, Failure> {
    let (alg, phi) = gns_inputs(algebra, form)?;
    let tol = tol(g, GNS_TOL)?;
    let positivity = is_positive(&phi, &alg, tol)?;
    if !positivity.is_yes() {
        return Ok(Outcome {
            report: json!({"positivity": positivity}),
            violations: vec!["form is not positive".into()],
        });
    }
    let triplet = gns_build(&phi, &alg, &GnsOptions { tol, order: None })?;
    Ok(Outcome::ok(json!({"positivity": positivity, "triplet": triplet})))
}

fn gns_check(g: &GlobalArgs, algebra: &str, form: &str, element: &str) -> Result<Outcome, Failure> {
    let (alg, phi) = gns_inputs(algebra, form)?;
    let tol = tol(g, GNS_TOL)?;
    let f: Vec<Complex64> = load(element, "element")?;
    if f.len() != alg.dim() {
        return Err(Failure::input(format!("element: expected {} entries, found {}", alg.dim(), f.len())));
    }
    let f = DVector::from_vec(f);
    let action = state_action(&phi, &f, &alg)?;
    let positivity = is_positive(&action, &alg, tol)?;
    let schwarz = schwarz_check(&phi, &f, &alg)?;
    let mut violations = Vec::new();
    if !positivity.is_yes() {
        violations.push("f* . phi . f is not positive".into());
    }
    if schwarz > tol {
        violations.push(format!("Schwarz residual {schwarz:e} exceeds {tol:e}"));
    }
    Ok(Outcome {
        report: json!({
            "state_action": action,
            "positivity": positivity,
            "schwarz_residual": schwarz,
        }),
        violations,
    })
}

fn suite(g: &GlobalArgs, only: &[u32]) -> Result<Outcome, Failure> {
    if let Some(bad) = only.iter().find(|&&id| !(1..=13).contains(&id)) {
        return Err(Failure::input(format!("only: no criterion {bad}")));
    }
    let report = run_suite(g.seed, only);
    let violations = report
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("criterion {} ({}) failed", c.id, c.title))
        .collect();
    Ok(Outcome {
        report: to_value(&report),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_probe_grid_decays() {
        let g = GlobalArgs {
            q: None,
            hbar: None,
            tol: None,
            seed: 0,
            out: None,
            grid_n: None,
            grid_extent: None,
            order: None,
        };
        let f = grid_1d(&g, None, "input").unwrap();
        assert!(f.boundary_mass() / f.max_abs() < BOUNDARY_WARNING);
    }
}
