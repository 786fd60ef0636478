//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! with its runtime and exits non-zero if any criterion fails.

use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cliffhopf::conformal::{
    conformality, klein_residual, make_map, mobius, rotor, vahlen_check, MapKind, Paravector,
    QuadricPoint, VahlenMatrix, DEFAULT_FD_STEP,
};
use cliffhopf::hopfalg::hopf_check;
use cliffhopf::kappagen::{conformal_generators, gamma5, nilpotent_arg, suite, SUITE_NAMES};
use cliffhopf::mvcore::sampling::{
    random_antisymmetric, random_complex_multivector, random_multivector, random_vector,
};
use cliffhopf::mvcore::{series_apply, SeriesFn};
use cliffhopf::qdeform::{
    bmul, wick, wick_iso_check, HyperbolicPair, Matrix2, PeriodicitySplit, WickDirection,
};
use cliffhopf::relcheck::{
    fit, parse, run, synthetic_suite, DeformMode, Env, EvalConfig, FitConfig, FitFamily,
};
use cliffhopf::{BasisKind, Complex64, Deformation, Multivector, Signature, Tolerance};

const CORPUS: &str = include_str!("../../core/tests/data/expressions.txt");
const BIN: &str = env!("CARGO_BIN_EXE_cliffhopf");

type Check = Result<String, String>;

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn blades(sig: &Arc<Signature>) -> Vec<Multivector> {
    (0..sig.blade_count() as u32)
        .map(|m| Multivector::from_mask(sig, m, 1.0))
        .collect()
}

fn cli(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CLIFFHOPF_TOL")
        .output()
        .expect("binary runs")
}

fn clifford_core() -> Check {
    let s = Signature::cl13();
    let g: Vec<Multivector> = (0..4)
        .map(|i| Multivector::basis_vector(&s, i).unwrap())
        .collect();
    let mut anti: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let sum = ok(g[mu].gmul(&g[nu]))? + ok(g[nu].gmul(&g[mu]))?;
            let want = if mu == nu { 2.0 * s.metric(mu) } else { 0.0 };
            anti = anti.max(ok(sum.dist(&Multivector::scalar(&s, want)))?);
        }
    }
    ensure(anti <= 1e-14, format!("anticommutator residual {anti:e}"))?;
    let g5 = gamma5(&s);
    ensure(
        ok(g5.gmul(&g5))? == Multivector::scalar(&s, -1.0),
        "gamma5^2 != -1",
    )?;

    let c = Signature::cl24();
    let mut r = rng(1);
    let mut assoc: f64 = 0.0;
    for _ in 0..100 {
        let (a, b, d) = (
            random_complex_multivector(&c, &mut r),
            random_complex_multivector(&c, &mut r),
            random_complex_multivector(&c, &mut r),
        );
        let l = ok(ok(a.gmul(&b))?.gmul(&d))?;
        let rr = ok(a.gmul(&ok(b.gmul(&d))?))?;
        assoc = assoc.max(ok(l.dist(&rr))?);
    }
    ensure(assoc <= 1e-10, format!("associativity residual {assoc:e}"))?;

    let bl = blades(&c);
    let (mut leib, mut dual): (f64, f64) = (0.0, 0.0);
    for i in 0..c.dim() {
        let v = ok(Multivector::basis_vector(&c, i))?;
        for psi in &bl {
            let d = ok(v.left_contract(psi))? + ok(psi.grade_involution().right_contract(&v))?;
            dual = dual.max(d.norm_max());
            for phi in &bl {
                let lhs = ok(v.left_contract(&ok(psi.wedge(phi))?))?;
                let rhs = ok(ok(v.left_contract(psi))?.wedge(phi))?
                    + ok(psi.grade_involution().wedge(&ok(v.left_contract(phi))?))?;
                leib = leib.max(ok(lhs.dist(&rhs))?);
            }
        }
    }
    ensure(
        leib <= 1e-12 && dual <= 1e-12,
        format!("Leibniz {leib:e}, duality {dual:e}"),
    )?;
    Ok(format!(
        "anticomm {anti:.1e}, assoc {assoc:.1e}, Leibniz {leib:.1e}, duality {dual:.1e}"
    ))
}

fn conformal_algebra() -> Check {
    let env = ok(Env::for_basis(
        BasisKind::Conformal,
        None,
        EvalConfig::default(),
    ))?;
    let mut detail = Vec::new();
    for name in ["conformal", "conformal_symmetry"] {
        let s = ok(suite(name, None))?;
        ensure(
            s.relations.len() == 9,
            format!("{name}: {} families", s.relations.len()),
        )?;
        let r = run(&s, &env);
        let max = r.max_residual().unwrap_or(f64::INFINITY);
        ensure(
            r.summary.pass == r.rows.len() && max <= 1e-12,
            format!(
                "{name}: {} of {} pass, max {max:e}",
                r.summary.pass,
                r.rows.len()
            ),
        )?;
        detail.push(format!(
            "{name} {}/{} max {max:.1e}",
            r.summary.pass,
            r.rows.len()
        ));
    }
    Ok(detail.join("; "))
}

fn hopf_axioms() -> Check {
    let mut detail = Vec::new();
    for sig in [Signature::cl13(), Signature::cl24()] {
        let r = ok(hopf_check(&sig))?;
        ensure(r.blades == sig.blade_count(), "blade sweep incomplete")?;
        ensure(r.max_residual() <= 1e-12, format!("{sig}: {r}"))?;
        detail.push(format!("{} blades max {:.1e}", r.blades, r.max_residual()));
    }
    Ok(detail.join("; "))
}

fn quantum_clifford() -> Check {
    let s = Signature::cl24();
    let mut r = rng(4);
    let (mut inv, mut quad, mut assoc, mut iso): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let bl = blades(&s);
    for _ in 0..20 {
        let d = ok(Deformation::new(&s, random_antisymmetric(6, &mut r)))?;
        for b in &bl {
            let fwd = ok(wick(&d, WickDirection::Forward, b))?;
            let back = ok(wick(&d.negated(), WickDirection::Forward, &fwd))?;
            inv = inv.max(ok(back.dist(b))?);
        }
        for _ in 0..5 {
            let u = random_vector(&s, &mut r);
            let q: f64 = (0..6)
                .map(|i| s.metric(i) * u.coeff(1 << i).re.powi(2))
                .sum();
            quad = quad.max(ok(ok(bmul(&u, &u, &d))?.dist(&Multivector::scalar(&s, q)))?);
            let (a, b, c) = (
                random_multivector(&s, &mut r),
                random_multivector(&s, &mut r),
                random_multivector(&s, &mut r),
            );
            let l = ok(bmul(&ok(bmul(&a, &b, &d))?, &c, &d))?;
            let rr = ok(bmul(&a, &ok(bmul(&b, &c, &d))?, &d))?;
            assoc = assoc.max(ok(l.dist(&rr))?);
        }
        for n in 1..=4usize {
            let keep: Vec<usize> = (0..n).collect();
            let sub = ok(s.without(&(n..6).collect::<Vec<_>>()))?;
            let dn = ok(d.restrict(&keep, &sub))?;
            for mask in 0u32..1 << n {
                let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                iso = iso.max(ok(wick_iso_check(&dn, &idx))?);
            }
        }
    }
    ensure(inv <= 1e-12, format!("Wick inverse {inv:e}"))?;
    ensure(quad <= 1e-12, format!("u∘u residual {quad:e}"))?;
    ensure(assoc <= 1e-10, format!("bmul associativity {assoc:e}"))?;
    ensure(iso <= 1e-12, format!("wick_iso_check {iso:e}"))?;
    Ok(format!(
        "inverse {inv:.1e}, u∘u {quad:.1e}, assoc {assoc:.1e}, iso {iso:.1e}"
    ))
}

fn periodicity() -> Check {
    let s = Signature::cl41();
    let p = ok(PeriodicitySplit::new(
        &s,
        HyperbolicPair { plus: 4, minus: 0 },
        None,
    ))?;
    let red = p.reduced_signature().clone();
    let e4 = ok(Multivector::basis_vector(&s, 4))?;
    let e0 = ok(Multivector::basis_vector(&s, 0))?;
    let cases = [
        ("E4", e4.clone(), [[0.0, 1.0], [1.0, 0.0]]),
        ("E0", e0.clone(), [[0.0, -1.0], [1.0, 0.0]]),
        ("E+", (&e4 + &e0).scale(0.5), [[0.0, 0.0], [1.0, 0.0]]),
        ("E-", (&e4 - &e0).scale(0.5), [[0.0, 1.0], [0.0, 0.0]]),
        ("E4E0", ok(e4.gmul(&e0))?, [[1.0, 0.0], [0.0, -1.0]]),
    ];
    for (name, x, m) in cases {
        ensure(
            ok(p.split(&x))? == Matrix2::scalars(&red, m),
            format!("{name} matrix differs"),
        )?;
    }
    let mut r = rng(5);
    let (mut hom, mut round): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let a = random_complex_multivector(&s, &mut r);
        let b = random_complex_multivector(&s, &mut r);
        let lhs = ok(p.split(&ok(a.gmul(&b))?))?;
        let rhs = ok(ok(p.split(&a))?.gmul(&ok(p.split(&b))?))?;
        hom = hom.max(ok(lhs.dist(&rhs))?);
        round = round.max(ok(ok(p.assemble(&ok(p.split(&a))?))?.dist(&a))?);
    }
    ensure(hom <= 1e-12, format!("homomorphism {hom:e}"))?;
    ensure(round <= 1e-15, format!("assemble∘split {round:e}"))?;
    Ok(format!(
        "5 matrices exact, hom {hom:.1e}, round trip {round:.1e}"
    ))
}

fn rel_close(a: [f64; 4], b: [f64; 4], tol: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
}

fn conformal_action() -> Check {
    use rand::Rng;
    let tol = Tolerance::default();
    let mut r = rng(6);
    let point = |r: &mut ChaCha8Rng| [0; 4].map(|_| r.gen_range(-2.0..2.0));
    let inversion = ok(make_map(&MapKind::Inversion))?;
    let mut klein: f64 = 0.0;
    for _ in 0..20 {
        let x = point(&mut r);
        let h = point(&mut r);
        let rho: f64 = r.gen_range(0.1..5.0);
        let p = Paravector::from_coords(x);
        let t = ok(mobius(
            &ok(make_map(&MapKind::Translation(Paravector::from_coords(h))))?,
            &p,
            tol,
        ))?;
        ensure(
            t.x_prime.coords() == [0, 1, 2, 3].map(|i| x[i] + h[i]),
            "translation is not x+h",
        )?;
        let d = ok(mobius(&ok(make_map(&MapKind::Dilation(rho)))?, &p, tol))?;
        ensure(
            rel_close(d.x_prime.coords(), x.map(|v| rho * v), 1e-15),
            "dilation is not rho*x",
        )?;
        let n = x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
        if n.abs() > 1e-6 {
            let inv = ok(mobius(&inversion, &p, tol))?;
            let want = [-x[0] / n, x[1] / n, x[2] / n, x[3] / n];
            ensure(
                rel_close(inv.x_prime.coords(), want, 1e-12),
                "inversion mismatch",
            )?;
        }
        klein = klein.max(klein_residual(&QuadricPoint::from_paravector(&p)));
    }
    ensure(klein <= 1e-12, format!("Klein residual {klein:e}"))?;

    let h = Paravector::from_coords([0.3, -1.2, 0.5, 2.0]);
    let maps: Vec<VahlenMatrix> = [
        MapKind::Translation(h.clone()),
        MapKind::Dilation(2.5),
        ok(rotor(0, 1, 0.7))?,
        ok(rotor(1, 2, -1.9))?,
        MapKind::Inversion,
        MapKind::Transvection(h),
    ]
    .iter()
    .map(make_map)
    .collect::<Result<_, _>>()
    .map_err(|e| e.to_string())?;
    let trial = [Paravector::from_coords([0.2, 0.4, -0.1, 1.5])];
    for g in &maps {
        let c = ok(vahlen_check(g, &trial, tol))?;
        ensure(
            c.all(),
            format!("Vahlen conditions failed: {:?}", c.failures()),
        )?;
    }
    let loose = ok(Tolerance::new(1e-9))?;
    let mut group: f64 = 0.0;
    for _ in 0..20 {
        let p = Paravector::from_coords(point(&mut r));
        for g1 in &maps {
            for g2 in &maps {
                let prod = ok(g1.mul(g2))?;
                let (Ok(step), Ok(direct), Ok(neg)) = (
                    mobius(g2, &p, loose).and_then(|y| mobius(g1, &y.x_prime, loose)),
                    mobius(&prod, &p, loose),
                    mobius(&prod.neg(), &p, loose),
                ) else {
                    continue;
                };
                let scale = 1.0
                    + direct
                        .x_prime
                        .coords()
                        .iter()
                        .fold(0.0f64, |m, v| m.max(v.abs()));
                for (a, b) in [
                    (step.x_prime.coords(), direct.x_prime.coords()),
                    (neg.x_prime.coords(), direct.x_prime.coords()),
                ] {
                    for k in 0..4 {
                        group = group.max((a[k] - b[k]).abs() / scale);
                    }
                }
            }
        }
    }
    ensure(group <= 1e-9, format!("group law {group:e}"))?;

    let x = Paravector::from_coords([0.7, -0.3, 1.1, 0.4]);
    let lt = ok(conformality(&maps[0], &x, DEFAULT_FD_STEP, tol))?;
    ensure(
        (lt.lambda - 1.0).abs() <= 1e-4,
        format!("translation lambda {}", lt.lambda),
    )?;
    let ld = ok(conformality(&maps[1], &x, DEFAULT_FD_STEP, tol))?;
    ensure(
        (ld.lambda - 6.25).abs() <= 1e-4,
        format!("dilation lambda {}", ld.lambda),
    )?;
    Ok(format!(
        "Klein {klein:.1e}, group {group:.1e}, lambda {:.6} / {:.6}",
        lt.lambda, ld.lambda
    ))
}

fn kappa_machinery() -> Check {
    let s = Signature::cl13();
    let x = nilpotent_arg();
    ensure(ok(x.gmul(&x))?.is_zero_within(0.0), "X^2 != 0")?;
    for kappa in [0.5, 1.0, 10.0] {
        let xk = x.scale(1.0 / kappa);
        let sh = ok(series_apply(SeriesFn::Sinh, &xk, 32, Tolerance::default()))?;
        let ch = ok(series_apply(SeriesFn::Cosh, &xk, 32, Tolerance::default()))?;
        ensure(
            sh.value == xk && sh.terms_used <= 1,
            "sinh(X/kappa) != X/kappa",
        )?;
        ensure(
            ch.value == Multivector::one(&s) && ch.terms_used <= 1,
            "cosh(X/kappa) != 1",
        )?;
    }
    let ig5 = gamma5(&s).scale(Complex64::new(0.0, 1.0));
    let one = Multivector::one(&s);
    let pp = (&one + &ig5).scale(0.5);
    let pm = (&one - &ig5).scale(0.5);
    ensure(
        ok(pp.gmul(&pp))? == pp && ok(pm.gmul(&pm))? == pm,
        "projectors not idempotent",
    )?;
    ensure(
        ok(pp.gmul(&pm))?.is_zero_within(0.0) && ok(pm.gmul(&pp))?.is_zero_within(0.0),
        "projectors do not annihilate",
    )?;
    let set = conformal_generators();
    for mu in 0..4 {
        for nu in 0..4 {
            for n in ["P", "K"] {
                let a = set.get(&format!("{n}{mu}")).ok_or("missing generator")?;
                let b = set.get(&format!("{n}{nu}")).ok_or("missing generator")?;
                ensure(
                    ok(a.gmul(b))?.is_zero_within(0.0),
                    format!("{n}{mu}{n}{nu} != 0"),
                )?;
            }
        }
    }
    Ok("X^2 = 0, series truncate after 2 terms, projectors exact, PP = KK = 0".into())
}

fn kappa_suites() -> Check {
    let mut rows = 0;
    for kappa in ["0.5", "1", "10"] {
        for name in &SUITE_NAMES[2..] {
            let out = cli(&["verify", name, "--kappa", kappa, "--json"]);
            ensure(
                out.status.code() == Some(0),
                format!("{name} at kappa {kappa}: exit {:?}", out.status.code()),
            )?;
            let v: serde_json::Value = ok(serde_json::from_slice(&out.stdout))?;
            let expect = ok(suite(name, Some(ok(kappa.parse())?)))?.row_count();
            let got = v["rows"].as_array().ok_or("no rows array")?;
            ensure(
                got.len() == expect,
                format!("{name}: {} rows, expected {expect}", got.len()),
            )?;
            for row in got {
                ensure(
                    row["status"] == "diagnostic",
                    format!("{name}: non-diagnostic row"),
                )?;
                ensure(
                    row.get("note").is_none(),
                    format!("{name}: row error {}", row["note"]),
                )?;
            }
            rows += got.len();
        }
    }
    Ok(format!("18 runs, {rows} diagnostic rows, all exit 0"))
}

fn fitter() -> Check {
    let conf = ok(suite("conformal", None))?;
    let z = ok(fit(&conf, FitFamily::default(), &FitConfig::default()))?;
    ensure(
        z.iterations == 0 && z.trace.first() == Some(&0.0),
        format!("conformal objective {} at start", z.objective),
    )?;

    let sig = Signature::cl13();
    let target = ok(Deformation::from_upper(
        &sig,
        &[
            ((0, 1), Complex64::new(0.2, -0.1)),
            ((0, 2), Complex64::new(-0.3, 0.0)),
            ((1, 3), Complex64::new(0.1, 0.25)),
            ((2, 3), Complex64::new(0.0, -0.15)),
        ],
    ))?;
    let syn = ok(synthetic_suite(&target))?;
    let mut cfg = FitConfig {
        seed: 11,
        max_iter: 2000,
        ..Default::default()
    };
    cfg.eval.deform_mode = DeformMode::Product;
    let r = ok(fit(&syn, FitFamily::default(), &cfg))?;
    ensure(
        r.objective <= 1e-8,
        format!("synthetic objective {:e}", r.objective),
    )?;
    ensure(r.iterations <= 2000, "iteration budget exceeded")?;
    ensure(r.trace.windows(2).all(|w| w[1] <= w[0]), "trace increases")?;
    Ok(format!(
        "conformal 0 at iteration 0; synthetic {:.1e} after {} iterations (start {:.2e})",
        r.objective, r.iterations, r.trace[0]
    ))
}

fn parser_and_cli() -> Check {
    let lines: Vec<&str> = CORPUS.lines().filter(|l| !l.trim().is_empty()).collect();
    ensure(
        lines.len() == 50,
        format!("corpus has {} expressions", lines.len()),
    )?;
    for line in &lines {
        let t = ok(parse(line))?;
        let printed = t.to_string();
        ensure(
            ok(parse(&printed))? == t,
            format!("round trip changed '{line}'"),
        )?;
    }
    let v = cli(&["verify", "conformal"]);
    ensure(
        v.status.code() == Some(0),
        format!("verify conformal exit {:?}", v.status.code()),
    )?;

    let a = cli(&["verify", "conformal", "--json"]);
    let b = cli(&["verify", "conformal", "--json"]);
    ensure(
        a.stdout == b.stdout && !a.stdout.is_empty(),
        "verify reports differ",
    )?;

    let dir = ok(tempfile::tempdir())?;
    let path = dir.path().join("synthetic.json");
    let target = ok(Deformation::from_upper(
        &Signature::cl13(),
        &[((0, 1), Complex64::new(0.3, 0.1))],
    ))?;
    ok(ok(synthetic_suite(&target))?.save(&path))?;
    let p = path.to_string_lossy().to_string();
    let args = [
        "fit",
        p.as_str(),
        "--mode",
        "product",
        "--seed",
        "7",
        "--max-iter",
        "200",
        "--json",
    ];
    let f1 = cli(&args);
    let f2 = cli(&args);
    ensure(
        f1.status.code() == Some(0),
        format!("fit exit {:?}", f1.status.code()),
    )?;
    ensure(
        f1.stdout == f2.stdout,
        "fit outputs differ for the same seed",
    )?;
    Ok(format!(
        "{} expressions stable; verify exit 0; reports byte-identical",
        lines.len()
    ))
}

fn main() {
    type Criterion = (&'static str, u64, fn() -> Check);
    let criteria: [Criterion; 10] = [
        ("Clifford core", 5, clifford_core),
        ("conformal algebra", 10, conformal_algebra),
        ("Hopf axioms", 10, hopf_axioms),
        ("quantum Clifford layer", 30, quantum_clifford),
        ("periodicity", 5, periodicity),
        ("conformal action", 10, conformal_action),
        ("kappa machinery", 5, kappa_machinery),
        ("kappa diagnostic suites", 60, kappa_suites),
        ("fitter", 120, fitter),
        ("parser and CLI", 60, parser_and_cli),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|d| {
            if took <= Duration::from_secs(*limit) {
                Ok(d)
            } else {
                Err(format!(
                    "took {:.2} s, limit {limit} s; {d}",
                    took.as_secs_f64()
                ))
            }
        });
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => {
                failed += 1;
                ("FAIL", e.clone())
            }
        };
        println!(
            "{tag} {:>2} {name:<24} {:>7.2} s  {detail}",
            k + 1,
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
