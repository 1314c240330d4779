//! The pipelines behind each subcommand.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use arctic_core::curves::{curve_for, tangency_points, ParametricCurve};
use arctic_core::gv::{det_bareiss, det_ratio_last_column, lu_exact, ExactMatrix};
use arctic_core::kernel::{int_rational, pow2, rational_to_f64, rational_to_string};
use arctic_core::models::profile::expected_monotonicity;
use arctic_core::models::vsasm::{n_vsasm, n_vsasm_refined, raz_strog_sides};
use arctic_core::oracle::{
    count_nilp_by_exit, count_nilp_with_budget, enumerate_vsasm, model_exits, model_family, osculating_config_check,
    DEFAULT_BUDGET,
};
use arctic_core::tangent::{analytic_saddle, envelope as envelope_of, finite_n_scan, tangent_family};
use arctic_core::{ExactRational, GvModel, ModelId, OnePointProfile, TangentLine, TangentSetup};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{Check, Report};
use crate::svg::{emit_svg, Figure, Frame};
use crate::{usage, CliError, CurveArgs, EnvelopeArgs, OracleArgs, PlotArgs, SaddleArgs, SizeArgs};

pub const BUDGET_ENV: &str = "ARCTIC_ORACLE_BUDGET";

fn params<T: Serialize>(args: &T, extra: Value) -> Value {
    let mut v = serde_json::to_value(args).expect("args serialize");
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn write_artifact(out_dir: &Path, name: &str, contents: &str, report: &mut Report) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join(name), contents)?;
    report.artifacts.push(name.to_string());
    Ok(())
}

/// Writes `<command>-<model>.json` next to the artifacts.
fn finish(report: Report, out_dir: &Path) -> Result<Report, CliError> {
    fs::create_dir_all(out_dir)?;
    fs::write(
        out_dir.join(format!("{}-{}.json", report.command, report.model)),
        report.to_json(),
    )?;
    Ok(report)
}

fn gv_model(a: &SizeArgs) -> Result<GvModel, CliError> {
    let model = a.common.model;
    if model == ModelId::RedHalfHex && a.k < 2 {
        return Err(usage("the red-path model needs --k >= 2"));
    }
    GvModel::new(model, a.n, a.k).map_err(usage)
}

fn vsasm_size(n: usize) -> Result<i64, CliError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(usage(format!("vsasm needs an odd size >= 3, got {n}")));
    }
    Ok(n as i64)
}

pub fn verify(a: &SizeArgs) -> Result<Report, CliError> {
    let model = a.common.model;
    let mut r = Report::new("verify", model.slug(), params(a, json!({})));
    if model == ModelId::Vsasm {
        verify_vsasm(vsasm_size(a.n)?, &mut r)?;
        return finish(r, &a.common.out_dir);
    }
    let gv = gv_model(a)?;
    let m = gv.matrix();
    let det = det_bareiss(&m).map_err(usage)?;
    let z = BigRational::from_integer(gv.partition());
    r.push(Check::exact("det = closed partition product", &z, &det));
    if matches!(
        gv,
        GvModel::Aztec { .. } | GvModel::Staircase { .. } | GvModel::StaircaseAlt { .. }
    ) {
        let two = BigRational::from_integer(pow2((a.n * (a.n + 1) / 2) as u32));
        r.push(Check::exact("det = 2^(n(n+1)/2)", &two, &det));
    }
    let closed = gv.closed_lu();
    match lu_exact(&m) {
        Ok(lu) => {
            r.push(Check::flag("closed L = elimination L", closed.l == lu.l));
            r.push(Check::flag(
                "closed U diagonal = elimination U diagonal",
                closed.u_diagonal == lu.u.diagonal(),
            ));
        }
        Err(e) => r.push(Check::failed("LU without pivoting", json!("exists"), e)),
    }
    let id = ExactMatrix::identity(gv.dim());
    r.push(Check::flag(
        "closed L^-1 L = I",
        closed.l_inv.try_mul(&closed.l).map(|p| p == id).unwrap_or(false),
    ));
    let d = gv.dim();
    let row = closed.l_inv.row(d - 1).to_vec();
    let (lo, hi) = gv.ell_range();
    for ell in lo..=hi {
        let slow = det_bareiss(&gv.modified_matrix(ell).map_err(usage)?).map_err(usage)? / &det;
        let b: Vec<ExactRational> = gv
            .last_column(ell)
            .map_err(usage)?
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let fast = det_ratio_last_column(&row, &b, &closed.u_diagonal[d - 1]).map_err(usage)?;
        r.push(Check::exact(format!("det ratio via L^-1 row, l={ell}"), &slow, &fast));
        match gv.one_point(ell) {
            Ok(h) => r.push(Check::exact(format!("closed one-point H({ell})"), &slow, &h)),
            Err(e) => r.push(Check::failed(
                format!("closed one-point H({ell})"),
                json!(rational_to_string(&slow)),
                e,
            )),
        }
    }
    finish(r, &a.common.out_dir)
}

fn verify_vsasm(size: i64, r: &mut Report) -> Result<(), CliError> {
    let total = n_vsasm(size).map_err(usage)?;
    let refined: Vec<BigInt> = (1..=size)
        .map(|l| n_vsasm_refined(size, l))
        .collect::<Result<_, _>>()
        .map_err(usage)?;
    r.push(Check::equal(
        "refined counts sum to total",
        total.to_string(),
        refined.iter().sum::<BigInt>().to_string(),
    ));
    r.push(Check::flag(
        "refined counts nonnegative",
        refined.iter().all(|v| v.sign() != num_bigint::Sign::Minus),
    ));
    if size as usize <= arctic_core::oracle::MAX_VSASM_SIZE {
        let e = enumerate_vsasm(size as usize).map_err(usage)?;
        r.push(Check::equal(
            "enumerated count",
            total.to_string(),
            e.matrices.len().to_string(),
        ));
        let hist: Vec<String> = e.histogram.iter().map(|v| v.to_string()).collect();
        let want: Vec<String> = refined.iter().map(|v| v.to_string()).collect();
        r.push(Check::equal("refined histogram", want, hist));
    }
    for t in [(1, 3), (1, 2), (1, 1), (2, 1), (3, 1)] {
        let t = BigRational::new(BigInt::from(t.0), BigInt::from(t.1));
        let (lhs, rhs) = raz_strog_sides(size, &t).map_err(usage)?;
        r.push(Check::exact(
            format!("refined VSASM/ASM generating identity at t={}", rational_to_string(&t)),
            &rhs,
            &lhs,
        ));
    }
    Ok(())
}

pub fn onepoint(a: &SizeArgs) -> Result<Report, CliError> {
    let model = a.common.model;
    let mut r = Report::new("onepoint", model.slug(), params(a, json!({})));
    let profile = if model == ModelId::Vsasm {
        OnePointProfile::vsasm(vsasm_size(a.n)?).map_err(usage)?
    } else {
        let gv = gv_model(a)?;
        let p = OnePointProfile::of_model(&gv).map_err(usage)?;
        let reference = p.get(gv.reference_ell()).cloned().unwrap_or_default();
        r.push(Check::exact("H(reference) = 1", &BigRational::one(), &reference));
        p
    };
    r.push(Check::flag("0 <= H <= 1", profile.is_bounded()));
    if let Some(dir) = expected_monotonicity(model) {
        r.push(Check::flag(format!("H {dir:?} in l"), profile.is_monotone(dir)));
    }
    if model == ModelId::Vsasm {
        let sum = profile
            .values
            .iter()
            .fold(BigRational::from_integer(0.into()), |acc, v| acc + v);
        r.push(Check::exact("refined fractions sum to 1", &int_rational(1), &sum));
    }
    let mut csv = String::from("ell,h_exact,h_float\n");
    for (i, v) in profile.values.iter().enumerate() {
        let ell = profile.ell_start + i as i64;
        writeln!(csv, "{ell},{},{}", rational_to_string(v), rational_to_f64(v)).unwrap();
    }
    write_artifact(
        &a.common.out_dir,
        &format!("onepoint-{}.csv", model.slug()),
        &csv,
        &mut r,
    )?;
    finish(r, &a.common.out_dir)
}

fn oracle_budget() -> Result<u64, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| usage(format!("{BUDGET_ENV} must be a positive integer, got '{s}'"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

pub fn oracle(a: &OracleArgs) -> Result<Report, CliError> {
    let s = &a.sized;
    let model = s.common.model;
    let budget = oracle_budget()?;
    let mut r = Report::new("oracle", model.slug(), params(a, json!({ "budget": budget })));
    if model == ModelId::Vsasm {
        let size = vsasm_size(s.n)?;
        let e = enumerate_vsasm(size as usize).map_err(usage)?;
        let total = n_vsasm(size).map_err(usage)?;
        r.push(Check::equal(
            "|VSASM| = product formula",
            total.to_string(),
            e.matrices.len().to_string(),
        ));
        for (i, h) in e.histogram.iter().enumerate() {
            let want = n_vsasm_refined(size, i as i64 + 1).map_err(usage)?;
            r.push(Check::equal(
                format!("first-column 1 in row {}", i + 1),
                want.to_string(),
                h.to_string(),
            ));
        }
        r.push(Check::flag(
            "all osculating configurations valid",
            e.matrices.iter().all(osculating_config_check),
        ));
        if let Some(path) = &a.dump {
            let mut nd = String::new();
            for m in &e.matrices {
                nd.push_str(&serde_json::to_string(m).expect("matrix serializes"));
                nd.push('\n');
            }
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, nd)?;
            r.artifacts.push(path.display().to_string());
        }
        return finish(r, &s.common.out_dir);
    }
    if a.dump.is_some() {
        return Err(usage("--dump is only available for vsasm"));
    }
    let gv = gv_model(s)?;
    let det = det_bareiss(&gv.matrix()).map_err(usage)?;
    let family = model_family(&gv);
    match count_nilp_with_budget(&family, budget) {
        Ok(c) => r.push(Check::exact("NILP count = det", &det, &BigRational::from_integer(c))),
        Err(e) => {
            r.push(Check::failed("NILP count = det", json!(rational_to_string(&det)), e));
            return finish(r, &s.common.out_dir);
        }
    }
    let exits = model_exits(&gv);
    let points: Vec<_> = exits.iter().map(|e| e.1).collect();
    match count_nilp_by_exit(&family, &points) {
        Ok(masses) => {
            let reference = gv.reference_ell();
            let ref_point = exits.iter().find(|e| e.0 == reference).expect("reference exit").1;
            let z_ref = masses[&ref_point].clone();
            for (ell, p) in exits {
                let ratio = BigRational::new(masses[&p].clone(), z_ref.clone());
                let h = gv.one_point(ell).map_err(usage)?;
                r.push(Check::exact(format!("exit mass ratio = H({ell})"), &h, &ratio));
            }
        }
        Err(e) => r.push(Check::failed("exit masses", json!("counts"), e)),
    }
    finish(r, &s.common.out_dir)
}

fn setup(model: ModelId, x: f64) -> Result<TangentSetup, CliError> {
    TangentSetup::new(model, x).map_err(usage)
}

pub fn saddle(a: &SaddleArgs) -> Result<Report, CliError> {
    let model = a.common.model;
    if !(a.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let s = setup(model, a.x)?;
    let grid = a.grid.grid(model, 16);
    let zs = grid.points();
    let results = finite_n_scan(&s, a.n, &zs, a.crossover).map_err(usage)?;
    let mut r = Report::new("saddle", model.slug(), params(a, json!({ "resolved_grid": grid })));
    let mut csv = String::from("z,xi_hat,xi_star,ell_star,plateau_width,degenerate\n");
    let mut worst: f64 = 0.0;
    for res in &results {
        let star = analytic_saddle(&s, res.z).map_err(usage)?;
        worst = worst.max((res.xi_hat - star).abs());
        r.push(Check::within(format!("xi_hat at z={}", res.z), star, res.xi_hat, a.tol));
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            res.z, res.xi_hat, star, res.ell_star, res.plateau_width, res.degenerate
        )
        .unwrap();
    }
    r.push(Check::at_most("max |xi_hat - xi_star|", worst, a.tol));
    write_artifact(&a.common.out_dir, &format!("saddle-{}.csv", model.slug()), &csv, &mut r)?;
    finish(r, &a.common.out_dir)
}

/// Scaled-domain frame, optional boundary polygon and a sampled closed-form curve for figures.
fn scene(model: ModelId, x: f64) -> Result<(Frame, Vec<(f64, f64)>, Vec<(f64, f64)>), CliError> {
    let samples = 400;
    let arc = |c: ParametricCurve, lo: f64, hi: f64| -> Vec<(f64, f64)> {
        (0..=samples)
            .map(|i| c.eval(lo + (hi - lo) * i as f64 / samples as f64).expect("in interval"))
            .collect()
    };
    let (frame, boundary, curve) = match model {
        ModelId::Aztec => {
            let r = 0.5f64.sqrt();
            let circle = (0..=samples)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / samples as f64;
                    (r * t.cos(), 1.0 + r * t.sin())
                })
                .collect();
            (
                Frame::new(-1.0, 1.0, 0.0, 2.0),
                vec![(0.0, 0.0), (1.0, 1.0), (0.0, 2.0), (-1.0, 1.0)],
                circle,
            )
        }
        ModelId::DyckHalfHex | ModelId::RedHalfHex => {
            if !(x > 0.0) {
                return Err(usage("--x must be positive"));
            }
            let v = 2.0 * (1.0 + x).sqrt();
            (
                Frame::new(0.0, 2.0 * x, 0.0, v),
                Vec::new(),
                arc(ParametricCurve::HalfHexEllipse { x }, 0.0, std::f64::consts::PI),
            )
        }
        ModelId::Staircase | ModelId::StaircaseAlt => {
            let mut c = arc(ParametricCurve::StaircaseAltArc, 2.0, 1.0);
            c.extend(arc(ParametricCurve::StaircaseArc, 1.5, 2.0).into_iter().skip(1));
            (Frame::new(0.0, 2.0, 0.0, 1.0), Vec::new(), c)
        }
        ModelId::Vsasm => (
            Frame::new(0.0, 1.0, 0.0, 1.0),
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
            arc(ParametricCurve::Vsasm, 0.0, 1.0),
        ),
    };
    Ok((frame.map_err(usage)?.padded(0.05), boundary, curve))
}

/// `count` lines evenly picked from the family, always including both ends when count ≥ 2.
fn pick(lines: &[TangentLine], count: usize) -> Vec<TangentLine> {
    match count.min(lines.len()) {
        0 => Vec::new(),
        1 => vec![lines[lines.len() / 2]],
        c => (0..c).map(|i| lines[i * (lines.len() - 1) / (c - 1)]).collect(),
    }
}

fn family(model: ModelId, x: f64, grid: &crate::GridArgs, default_count: usize) -> Result<Vec<TangentLine>, CliError> {
    let g = grid.grid(model, default_count);
    if g.count < 8 {
        return Err(usage(format!(
            "tangent families need at least 8 grid points, got {}",
            g.count
        )));
    }
    tangent_family(&setup(model, x)?, &g.points()).map_err(usage)
}

pub fn envelope(a: &EnvelopeArgs) -> Result<Report, CliError> {
    let model = a.common.model;
    if !(a.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let lines = family(model, a.x, &a.grid, 200)?;
    let env = envelope_of(&lines).map_err(usage)?;
    let curve = curve_for(model, a.x).map_err(usage)?;
    let grid = a.grid.grid(model, 200);
    let mut r = Report::new("envelope", model.slug(), params(a, json!({ "resolved_grid": grid })));
    let mut csv = String::from("z,xi_star,slope,intercept,env_x,env_y,residual\n");
    let mut worst: f64 = 0.0;
    for (l, e) in lines[1..lines.len() - 1].iter().zip(&env) {
        let res = curve.residual((e.x, e.y)).value;
        worst = worst.max(res);
        writeln!(
            csv,
            "{},{},{},{},{},{},{:e}",
            l.z, l.xi, l.slope, l.intercept, e.x, e.y, res
        )
        .unwrap();
    }
    r.push(Check::at_most("max envelope residual", worst, a.tol));
    r.push(Check::flag(
        "envelope systems well conditioned",
        env.iter().all(|e| e.condition.is_finite()),
    ));
    let slug = model.slug();
    write_artifact(&a.common.out_dir, &format!("envelope-{slug}.csv"), &csv, &mut r)?;
    let (frame, boundary, samples) = scene(model, a.x)?;
    let pts: Vec<(f64, f64)> = env.iter().map(|e| (e.x, e.y)).collect();
    let svg = emit_svg(&Figure {
        title: &format!("{slug} tangent envelope"),
        frame,
        lines: &pick(&lines, 24),
        envelope: &pts,
        curve: &samples,
        boundary: &boundary,
    })
    .map_err(usage)?;
    write_artifact(&a.common.out_dir, &format!("envelope-{slug}.svg"), &svg, &mut r)?;
    finish(r, &a.common.out_dir)
}

pub fn curve(a: &CurveArgs) -> Result<Report, CliError> {
    let model = a.common.model;
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    if !(a.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let implicit = curve_for(model, a.x).map_err(usage)?;
    let param = match model {
        ModelId::Aztec => ParametricCurve::AztecArc,
        ModelId::DyckHalfHex | ModelId::RedHalfHex => ParametricCurve::HalfHexEllipse { x: a.x },
        ModelId::Staircase => ParametricCurve::StaircaseArc,
        ModelId::StaircaseAlt => ParametricCurve::StaircaseAltArc,
        ModelId::Vsasm => ParametricCurve::Vsasm,
    };
    let (lo, hi) = param.interval();
    let mut r = Report::new("curve", model.slug(), params(a, json!({ "parametric": param })));
    let mut csv = String::from("param,x,y,residual\n");
    let mut worst: f64 = 0.0;
    for i in 0..a.samples {
        let f = i as f64 / (a.samples - 1) as f64;
        let s = if hi.is_finite() {
            lo + f * (hi - lo)
        } else {
            1.0 / (1.0 - 0.999 * f)
        };
        let p = param.eval(s).map_err(usage)?;
        let res = implicit.residual(p).value;
        worst = worst.max(res);
        writeln!(csv, "{s},{},{},{res:e}", p.0, p.1).unwrap();
    }
    r.push(Check::at_most("max parametric residual", worst, a.tol));
    for t in tangency_points(model, a.x).map_err(usage)? {
        r.push(Check::at_most(
            format!("tangency point {} on curve", t.label),
            implicit.residual(t.point).value,
            a.tol,
        ));
        r.push(Check::at_most(
            format!("tangency point {} on boundary", t.label),
            t.boundary.offset(t.point).abs(),
            a.tol,
        ));
    }
    write_artifact(&a.common.out_dir, &format!("curve-{}.csv", model.slug()), &csv, &mut r)?;
    finish(r, &a.common.out_dir)
}

pub fn plot(a: &PlotArgs) -> Result<Report, CliError> {
    let model = a.common.model;
    let grid = a.grid.grid(model, 200);
    let mut r = Report::new("plot", model.slug(), params(a, json!({ "resolved_grid": grid })));
    let (frame, boundary, samples) = scene(model, a.x)?;
    let (drawn, pts) = if a.lines == 0 {
        (Vec::new(), Vec::new())
    } else {
        let lines = family(model, a.x, &a.grid, 200)?;
        let env = envelope_of(&lines).map_err(usage)?;
        (pick(&lines, a.lines), env.iter().map(|e| (e.x, e.y)).collect())
    };
    let slug = model.slug();
    let svg = emit_svg(&Figure {
        title: &format!("{slug} arctic curve"),
        frame,
        lines: &drawn,
        envelope: &pts,
        curve: &samples,
        boundary: &boundary,
    })
    .map_err(usage)?;
    r.push(Check::equal(
        "tangent lines drawn",
        a.lines.min(grid.count),
        drawn.len(),
    ));
    write_artifact(&a.common.out_dir, &format!("plot-{slug}.svg"), &svg, &mut r)?;
    finish(r, &a.common.out_dir)
}
