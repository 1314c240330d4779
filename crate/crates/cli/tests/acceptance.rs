//! Acceptance suite. One PASS/FAIL line per criterion; exits nonzero if any fails.
//!
//! Run with `cargo test -p arctic-cli --test acceptance`.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use arctic_core::curves::{curve_for, tangency_points, ParametricCurve};
use arctic_core::gv::det_bareiss;
use arctic_core::kernel::{binomial, int_rational, inverse_binomial_sum, pow2, rational};
use arctic_core::models::dyck::{pols_p, pols_q, pols_value, slem_sum, tlem_ratio};
use arctic_core::models::profile::DEFAULT_CROSSOVER;
use arctic_core::models::red::partition_products_agree;
use arctic_core::models::vsasm::{n_asm, n_vsasm, n_vsasm_refined, raz_strog_sides};
use arctic_core::oracle::{count_nilp, enumerate_asm, enumerate_vsasm, model_family};
use arctic_core::tangent::{
    analytic_saddle, default_grid, envelope, finite_n_scan, tangent_family, Grid, Spacing, TangentSetup,
};
use arctic_core::{GvModel, ModelId};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn det_of(model: &GvModel) -> Result<BigRational, String> {
    det_bareiss(&model.matrix()).map_err(|e| format!("{model:?}: {e}"))
}

fn partition_functions() -> Outcome {
    for n in 0..=40usize {
        let want = BigRational::from_integer(pow2((n * (n + 1) / 2) as u32));
        for model in [
            GvModel::Aztec { n },
            GvModel::Staircase { n },
            GvModel::StaircaseAlt { n },
        ] {
            ensure(det_of(&model)? == want, || format!("{model:?}: det != 2^(n(n+1)/2)"))?;
        }
    }
    for n in 0..=12usize {
        for k in 1..=12usize {
            for model in [GvModel::Dyck { n, k }, GvModel::Red { n, k }] {
                let product = BigRational::from_integer(model.partition());
                ensure(det_of(&model)? == product, || format!("{model:?}: det != product"))?;
            }
        }
    }
    for n in 0..=20 {
        for k in 1..=20 {
            ensure(partition_products_agree(n, k), || {
                format!("half-hexagon products differ at n={n} k={k}")
            })?;
        }
    }
    Ok("n <= 40 powers of two, n,k <= 12 products, n,k <= 20 product identity".into())
}

fn oracle_models() -> Vec<GvModel> {
    let mut v = Vec::new();
    for n in 0..=4 {
        v.extend([
            GvModel::Aztec { n },
            GvModel::Staircase { n },
            GvModel::StaircaseAlt { n },
        ]);
    }
    for n in 0..=3 {
        for k in 1..=3 {
            v.push(GvModel::Dyck { n, k });
        }
        // The red-path one-point function needs k >= 2.
        for k in 2..=3 {
            v.push(GvModel::Red { n, k });
        }
    }
    v
}

fn oracle_equivalence() -> Outcome {
    let models = oracle_models();
    for model in &models {
        let brute = count_nilp(&model_family(model)).map_err(|e| format!("{model:?}: {e}"))?;
        ensure(BigRational::from_integer(brute.clone()) == det_of(model)?, || {
            format!("{model:?}: {brute} paths vs determinant")
        })?;
    }
    Ok(format!("{} families enumerated", models.len()))
}

fn one_point_closed_forms() -> Outcome {
    let mut checked = 0usize;
    for model in oracle_models() {
        let z = det_of(&model)?;
        let (lo, hi) = model.ell_range();
        for ell in lo..=hi {
            let m = model
                .modified_matrix(ell)
                .map_err(|e| format!("{model:?} ℓ={ell}: {e}"))?;
            let ratio = det_bareiss(&m).map_err(|e| e.to_string())? / &z;
            let closed = model.one_point(ell).map_err(|e| format!("{model:?} ℓ={ell}: {e}"))?;
            ensure(closed == ratio, || format!("{model:?} ℓ={ell}: {closed} vs {ratio}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (model, ℓ) pairs"))
}

/// Coefficients of a truncated power series, lowest degree first.
fn series_pow(base: &[BigInt], e: usize, len: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); len];
    acc[0] = BigInt::one();
    for _ in 0..e {
        let mut next = vec![BigInt::zero(); len];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in base.iter().enumerate().take(len - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

fn identity_suites() -> Outcome {
    for n in 0..=8 {
        for ell in 0..=n {
            for k in 0..=8 {
                ensure(slem_sum(n, k, ell) == binomial(2 * n + 2 * k, n + ell), || {
                    format!("slem n={n} ℓ={ell} k={k}")
                })?;
            }
        }
    }
    for n in 0..=6 {
        for ell in n + 1..=n + 6 {
            for j in 1..=n + 1 {
                ensure(tlem_ratio(n, ell, j) == int_rational(1), || {
                    format!("tlem n={n} ℓ={ell} j={j}")
                })?;
            }
        }
    }
    for n in 0..=5 {
        for ell in 0..=n + 4 {
            for j in 1..=n + 1 {
                let k = int_rational(-j - n);
                let want = pols_value(n, ell, j);
                ensure(pols_p(n, ell, &k) == want && pols_q(n, ell, &k) == want, || {
                    format!("pols n={n} ℓ={ell} j={j}")
                })?;
            }
        }
    }
    for n in 0..=20usize {
        let len = n + 2;
        let binom = series_pow(&[BigInt::one(), BigInt::one()], n, len);
        let geometric = vec![BigInt::one(); len];
        for k in 0..=n {
            let want = binomial(n as i64, k as i64);
            let a = series_pow(&geometric, k + 1, len);
            let b = series_pow(&geometric, n - k + 1, len);
            ensure(
                binom[k] == want && binom[n - k] == want && a[n - k] == want && b[k] == want,
                || format!("coefficient forms of C({n},{k})"),
            )?;
        }
        for a in 1..=6 {
            let s = inverse_binomial_sum(n as i64, a).map_err(|e| e.to_string())?;
            ensure(s * int_rational(binomial(n as i64 + a, a)) == int_rational(1), || {
                format!("inverse binomial n={n} a={a}")
            })?;
        }
    }
    Ok("slem, tlem, pols, coefficient forms, inverse binomial".into())
}

fn asm_numbers() -> Outcome {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    for (n, want) in [(3usize, 7u32), (4, 42), (5, 429)] {
        let brute = enumerate_asm(n).map_err(|e| err(&e))?.len();
        let formula = n_asm(n as i64).map_err(|e| err(&e))?;
        ensure(formula == BigInt::from(brute) && formula == BigInt::from(want), || {
            format!("ASM n={n}: formula {formula}, brute force {brute}")
        })?;
    }
    for (size, want) in [(3usize, 1u32), (5, 3), (7, 26)] {
        let e = enumerate_vsasm(size).map_err(|e| err(&e))?;
        let formula = n_vsasm(size as i64).map_err(|e| err(&e))?;
        ensure(
            formula == BigInt::from(e.matrices.len()) && formula == BigInt::from(want),
            || format!("VSASM size {size}: formula {formula}, brute force {}", e.matrices.len()),
        )?;
        if size >= 5 {
            for ell in 1..=size {
                let refined = n_vsasm_refined(size as i64, ell as i64).map_err(|e| err(&e))?;
                ensure(refined == BigInt::from(e.histogram[ell - 1]), || {
                    format!("refined VSASM size {size} ℓ={ell}")
                })?;
            }
        }
    }
    let ts = [
        rational(1, 3),
        rational(1, 2),
        int_rational(1),
        int_rational(2),
        int_rational(3),
    ];
    for size in [5i64, 7, 9] {
        for t in &ts {
            let (lhs, rhs) = raz_strog_sides(size, t).map_err(|e| err(&e))?;
            ensure(lhs == rhs, || {
                format!("generating identity size {size} t={t}: {lhs} vs {rhs}")
            })?;
        }
    }
    Ok("7, 42, 429; 1, 3, 26; refined histograms; 15 generating identities".into())
}

fn scan_setups() -> Result<Vec<TangentSetup>, String> {
    let s = |m, x| TangentSetup::new(m, x).map_err(|e| e.to_string());
    Ok(vec![
        TangentSetup::of(ModelId::Aztec),
        TangentSetup::of(ModelId::Staircase),
        TangentSetup::of(ModelId::StaircaseAlt),
        s(ModelId::DyckHalfHex, 1.0)?,
        s(ModelId::RedHalfHex, 1.0)?,
        TangentSetup::of(ModelId::Vsasm),
    ])
}

fn saddle_convergence() -> Outcome {
    let mut worst = Vec::new();
    for setup in scan_setups()? {
        let zs = default_grid(setup.model, 16).points();
        let results = finite_n_scan(&setup, 4096, &zs, DEFAULT_CROSSOVER).map_err(|e| e.to_string())?;
        let mut max: f64 = 0.0;
        for r in &results {
            let xi = analytic_saddle(&setup, r.z).map_err(|e| e.to_string())?;
            max = max.max((r.xi_hat - xi).abs());
        }
        ensure(max <= 0.01, || {
            format!("{}: max |ξ̂ - ξ*| = {max:.3e}", setup.model.slug())
        })?;
        worst.push(format!("{} {max:.1e}", setup.model.slug()));
    }
    Ok(format!("max error at n=4096: {}", worst.join(", ")))
}

fn envelope_residuals() -> Outcome {
    let mut setups: Vec<TangentSetup> = [
        ModelId::Aztec,
        ModelId::Staircase,
        ModelId::StaircaseAlt,
        ModelId::Vsasm,
    ]
    .map(TangentSetup::of)
    .to_vec();
    for x in [0.5, 1.0, 2.0] {
        for m in [ModelId::DyckHalfHex, ModelId::RedHalfHex] {
            setups.push(TangentSetup::new(m, x).map_err(|e| e.to_string())?);
        }
    }
    let mut worst: f64 = 0.0;
    for setup in &setups {
        let curve = curve_for(setup.model, setup.x).map_err(|e| e.to_string())?;
        let lines = tangent_family(setup, &default_grid(setup.model, 200).points()).map_err(|e| e.to_string())?;
        ensure(lines.len() == 200, || {
            format!("{}: {} lines", setup.model.slug(), lines.len())
        })?;
        for p in envelope(&lines).map_err(|e| e.to_string())? {
            let r = curve.residual((p.x, p.y)).value;
            ensure(r <= 1e-3, || {
                format!("{} x={} z={}: residual {r:.3e}", setup.model.slug(), setup.x, p.z)
            })?;
            worst = worst.max(r);
        }
    }
    // The two staircase formulations trace complementary arcs of one parabola, meeting at (3/2, 1).
    let para = curve_for(ModelId::Staircase, 1.0).map_err(|e| e.to_string())?;
    let mut gap = Vec::new();
    for (m, hi) in [(ModelId::Staircase, 6.0), (ModelId::StaircaseAlt, 2.0)] {
        let zs = Grid::new(1.001, hi, 200, Spacing::Log).points();
        let pts = envelope(&tangent_family(&TangentSetup::of(m), &zs).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let worst = pts.iter().map(|p| para.residual((p.x, p.y)).value).fold(0.0, f64::max);
        ensure(worst <= 1e-3, || format!("{} arc residual {worst:.3e}", m.slug()))?;
        gap.push(
            pts.iter()
                .map(|p| (p.x - 1.5).hypot(p.y - 1.0))
                .fold(f64::INFINITY, f64::min),
        );
    }
    ensure(gap.iter().all(|&g| g < 0.01), || {
        format!("staircase arcs end {gap:?} from (3/2, 1)")
    })?;
    Ok(format!(
        "{} families, max residual {worst:.1e}, staircase arcs meet",
        setups.len()
    ))
}

fn parametric_consistency() -> Outcome {
    let curve = ParametricCurve::Vsasm;
    let implicit = curve.implicit();
    let samples = curve.sample(1000);
    ensure(samples.len() == 1000, || format!("{} samples", samples.len()))?;
    let worst = samples.iter().map(|&p| implicit.residual(p).value).fold(0.0, f64::max);
    ensure(worst <= 1e-12, || format!("VSASM parametric residual {worst:.3e}"))?;
    let mut count = 0;
    for (model, x) in [
        (ModelId::Aztec, 1.0),
        (ModelId::Staircase, 1.0),
        (ModelId::DyckHalfHex, 1.0),
    ] {
        let c = curve_for(model, x).map_err(|e| e.to_string())?;
        for t in tangency_points(model, x).map_err(|e| e.to_string())? {
            let on_curve = c.residual(t.point).value;
            let on_boundary = t.boundary.offset(t.point).abs();
            ensure(on_curve <= 1e-12 && on_boundary <= 1e-12, || {
                format!(
                    "{} {}: curve {on_curve:.3e}, boundary {on_boundary:.3e}",
                    model.slug(),
                    t.label
                )
            })?;
            count += 1;
        }
    }
    Ok(format!("max parametric residual {worst:.1e}, {count} tangency points"))
}

/// Every artifact-producing command, run from inside a scratch directory so that reports only carry relative paths.
const RUNS: &[&[&str]] = &[
    &["verify", "--model", "aztec", "--n", "8"],
    &["verify", "--model", "red", "--n", "4", "--k", "3"],
    &["verify", "--model", "vsasm", "--n", "7"],
    &["onepoint", "--model", "dyck", "--n", "10", "--k", "4"],
    &["onepoint", "--model", "staircase", "--n", "10"],
    &["oracle", "--model", "vsasm", "--n", "5", "--dump", "vsasm-5.ndjson"],
    &["oracle", "--model", "staircase-alt", "--n", "3"],
    &["saddle", "--model", "staircase"],
    &["saddle", "--model", "red", "--x", "0.5"],
    &["envelope", "--model", "aztec"],
    &["envelope", "--model", "dyck", "--x", "2"],
    &["envelope", "--model", "vsasm"],
    &["curve", "--model", "vsasm"],
    &["curve", "--model", "red", "--x", "0.5"],
    &["plot", "--model", "staircase-alt"],
    &["plot", "--model", "aztec", "--lines", "0"],
];

fn run_suite(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut files = BTreeMap::new();
    for (i, args) in RUNS.iter().enumerate() {
        let out = Command::new(env!("CARGO_BIN_EXE_arctic"))
            .args(*args)
            .current_dir(dir)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || {
            format!("`arctic {}` exited with {}", args.join(" "), out.status)
        })?;
        files.insert(format!("stdout-{i:02}"), out.stdout);
    }
    collect(dir, dir, &mut files)?;
    Ok(files)
}

fn collect(root: &Path, dir: &Path, files: &mut BTreeMap<String, Vec<u8>>) -> Result<(), String> {
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.is_dir() {
            collect(root, &path, files)?;
        } else {
            let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
            files.insert(rel, std::fs::read(&path).map_err(|e| e.to_string())?);
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = run_suite(a.path())?;
    let second = run_suite(b.path())?;
    ensure(first.keys().eq(second.keys()), || {
        "runs produced different file sets".into()
    })?;
    for (name, bytes) in &first {
        ensure(second[name] == *bytes, || format!("{name} differs between runs"))?;
    }
    let kinds = ["json", "csv", "svg"]
        .iter()
        .map(|ext| format!("{} {ext}", first.keys().filter(|k| k.ends_with(ext)).count()))
        .collect::<Vec<_>>();
    ensure(kinds.iter().all(|k| !k.starts_with("0 ")), || {
        format!("missing artifact kinds: {kinds:?}")
    })?;
    Ok(format!("{} files byte-identical ({})", first.len(), kinds.join(", ")))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "exact partition functions",
            budget: Some(Duration::from_secs(60)),
            run: partition_functions,
        },
        Criterion {
            id: 2,
            name: "oracle equivalence",
            budget: None,
            run: oracle_equivalence,
        },
        Criterion {
            id: 3,
            name: "one-point closed forms",
            budget: None,
            run: one_point_closed_forms,
        },
        Criterion {
            id: 4,
            name: "identity suites",
            budget: None,
            run: identity_suites,
        },
        Criterion {
            id: 5,
            name: "ASM/VSASM numbers",
            budget: Some(Duration::from_secs(300)),
            run: asm_numbers,
        },
        Criterion {
            id: 6,
            name: "saddle convergence",
            budget: Some(Duration::from_secs(120)),
            run: saddle_convergence,
        },
        Criterion {
            id: 7,
            name: "envelope residuals",
            budget: None,
            run: envelope_residuals,
        },
        Criterion {
            id: 8,
            name: "parametric/implicit consistency",
            budget: None,
            run: parametric_consistency,
        },
        Criterion {
            id: 9,
            name: "determinism",
            budget: None,
            run: determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(budget)) = (&outcome, c.budget) {
            if elapsed > budget {
                outcome = Err(format!("took {elapsed:.1?}, budget {budget:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("criterion {} {} ... PASS [{elapsed:.2?}] {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {} {} ... FAIL [{elapsed:.2?}] {why}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
