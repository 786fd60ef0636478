use super::generators::BasisKind;
use crate::error::{Error, Result};
use crate::relcheck::{expand_sum, Relation, RelationSuite};

pub const SUITE_NAMES: &[&str] = &[
    "conformal",
    "conformal_symmetry",
    "kappa_algebra",
    "kappa_coalgebra",
    "ringK_algebra",
    "ringK_coalgebra",
    "bicross_algebra",
    "bicross_coalgebra",
];

/// `(γ_0 + iγ_0γ_5)/κ`, the argument of every sinh/cosh below.
const XK: &str = "(gamma0 + i*gamma0*gamma5)/kappa";
const PROJ: &str = "(1+i*gamma5)";

fn x(template: &str) -> String {
    template.replace("{X}", XK).replace("{Pp}", PROJ)
}

fn rel(name: &str, lhs: &str, rhs: &str) -> Relation {
    Relation::new(name, x(lhs), x(rhs))
}

fn spacetime(r: Relation, vars: &[&str]) -> Relation {
    vars.iter().fold(r, |r, v| r.over(v, 0, 3))
}

fn spatial(r: Relation, vars: &[&str]) -> Relation {
    vars.iter().fold(r, |r, v| r.over(v, 1, 3))
}

const MM_RHS: &str =
    "g{mu}{rho}*M{nu}{sig} + g{nu}{sig}*M{mu}{rho} - g{mu}{sig}*M{nu}{rho} - g{nu}{rho}*M{mu}{sig}";

fn lorentz(name: &str) -> Relation {
    spacetime(
        rel(name, "comm(M{mu}{nu},M{sig}{rho})", MM_RHS),
        &["mu", "nu", "sig", "rho"],
    )
}

/// The nine commutator families, with `p`, `k`, `d` standing for the images
/// of `P_μ`, `K_μ`, `D`.
fn conformal_families(s: &mut RelationSuite, p: &str, k: &str, d: &str) {
    let sub = |t: &str| t.replace("<P>", p).replace("<K>", k).replace("<D>", d);
    let fam = |name: &str, lhs: &str, rhs: &str, vars: &[&str]| {
        spacetime(rel(name, &sub(lhs), &sub(rhs)), vars)
    };
    s.push(fam("PP", "comm(<P>{mu},<P>{nu})", "0", &["mu", "nu"]));
    s.push(fam("KK", "comm(<K>{mu},<K>{nu})", "0", &["mu", "nu"]));
    s.push(fam("MD", "comm(M{mu}{nu},<D>)", "0", &["mu", "nu"]));
    s.push(fam(
        "MP",
        "comm(M{mu}{nu},<P>{lam})",
        "-(g{mu}{lam}*<P>{nu} - g{nu}{lam}*<P>{mu})",
        &["mu", "nu", "lam"],
    ));
    s.push(fam(
        "MK",
        "comm(M{mu}{nu},<K>{lam})",
        "-(g{mu}{lam}*<K>{nu} - g{nu}{lam}*<K>{mu})",
        &["mu", "nu", "lam"],
    ));
    s.push(lorentz("MM"));
    s.push(fam(
        "PK",
        "comm(<P>{mu},<K>{nu})",
        "2*(g{mu}{nu}*<D> - M{mu}{nu})",
        &["mu", "nu"],
    ));
    s.push(fam("PD", "comm(<P>{mu},<D>)", "<P>{mu}", &["mu"]));
    s.push(fam("KD", "comm(<K>{mu},<D>)", "-<K>{mu}", &["mu"]));
}

fn conformal() -> RelationSuite {
    let mut s = RelationSuite::new("conformal", BasisKind::Conformal);
    conformal_families(&mut s, "P", "K", "D");
    s
}

/// The conformal relations after `P ↦ −K`, `K ↦ −P`, `D ↦ −D`. The placeholders expand
/// to parenthesized negations so that e.g. `-<K>{mu}` becomes `-(-P0)`.
fn conformal_symmetry() -> RelationSuite {
    let mut s = RelationSuite::new("conformal_symmetry", BasisKind::Conformal);
    let mut tmp = RelationSuite::new("", BasisKind::Conformal);
    conformal_families(&mut tmp, "<p>", "<k>", "<d>");
    for mut r in tmp.relations {
        for side in [&mut r.lhs, &mut r.rhs] {
            let mut t = side.clone();
            for (ph, gen) in [("<p>", "K"), ("<k>", "P")] {
                while let Some(at) = t.find(ph) {
                    let rest = &t[at + ph.len()..];
                    let end = rest.find('}').map_or(0, |e| e + 1);
                    let replaced = format!("(-{gen}{})", &rest[..end]);
                    t = format!("{}{}{}", &t[..at], replaced, &rest[end..]);
                }
            }
            *side = t.replace("<d>", "(-D)");
        }
        s.push(r);
    }
    s
}

fn kappa_algebra() -> RelationSuite {
    let mut s = RelationSuite::new("kappa_algebra", BasisKind::Kappa);
    s.push(spacetime(
        rel("PP", "comm(P{mu},P{nu})", "0"),
        &["mu", "nu"],
    ));
    s.push(spatial(rel("MijP0", "comm(M{i}{j},P0)", "0"), &["i", "j"]));
    s.push(spatial(
        rel(
            "epsMP",
            &format!(
                "comm({}, P{{l}})",
                expand_sum(&["i", "j"], 1, 3, "lc{i}{j}{k}*M{i}{j}")
            ),
            &format!("i*{}", expand_sum(&["r"], 1, 3, "lc{k}{l}{r}*P{r}")),
        ),
        &["k", "l"],
    ));
    s.push(rel("K3P0", "comm(K3,P0)", "i/2*gamma3*{Pp}"));
    s.push(rel("K3P2", "comm(K3,P2)", "i/(2*kappa)*gamma2*gamma3*{Pp}"));
    s.push(rel(
        "P3K3",
        "comm(P3,K3)",
        "i/(2*kappa)*{Pp} - i*kappa*sinh({X})",
    ));
    s.push(rel("K3P1", "comm(K3,P1)", "i/(2*kappa)*gamma3*gamma1*{Pp}"));
    s.push(rel("KpP0", "comm(Kp,P0)", "1/2*(-gamma2 + i*gamma1)*{Pp}"));
    s.push(rel("KmP0", "comm(Km,P0)", "1/2*(gamma2 + i*gamma1)*{Pp}"));
    s.push(rel(
        "KpP2",
        "comm(Kp,P2)",
        "-i*kappa*sinh({X}) + 1/(2*kappa)*gamma3*{Pp}",
    ));
    s.push(rel(
        "KmP2",
        "comm(Km,P2)",
        "i*kappa*sinh({X}) - 1/(2*kappa)*gamma3*{Pp}",
    ));
    s.push(rel(
        "KpP1",
        "comm(Kp,P1)",
        "i*kappa*sinh({X}) - i/(2*kappa)*gamma3*{Pp}",
    ));
    s.push(rel(
        "KmP1",
        "comm(Km,P1)",
        "i*kappa*sinh({X}) - i/(2*kappa)*gamma3*{Pp}",
    ));
    s.push(rel(
        "KpP3",
        "comm(Kp,P3)",
        "-1/(2*kappa)*gamma3*(gamma2 - i*gamma1)*(1+i*gamma5)",
    ));
    s.push(rel(
        "KmP3",
        "comm(Km,P3)",
        "1/(2*kappa)*gamma3*(gamma2 + i*gamma1)*(1-i*gamma5)",
    ));
    s.push(rel("MpMm", "comm(Mp,Mm)", "1/2*(gamma1^gamma2)"));
    s.push(rel(
        "M12Mp",
        "comm(M12,Mp)",
        "1/2*gamma3*(gamma1 + i*gamma2)",
    ));
    s.push(rel(
        "M12Mm",
        "comm(M12,Mm)",
        "-1/2*gamma3*(gamma1 - i*gamma2)",
    ));
    s.push(rel(
        "KpKm",
        "comm(Kp,Km)",
        "-(gamma1^gamma2)*cosh({X}) - sinh({X})",
    ));
    let kk_tail = "1/(8*kappa)*((i+1)*(gamma3^gamma0)*(gamma2 + i*gamma1)*{Pp})";
    s.push(rel(
        "KpK3",
        "comm(Kp,K3)",
        &format!("1 + gamma0/(4*kappa)*{{Pp}}*gamma3*(gamma2 - i*gamma1) + {kk_tail}"),
    ));
    s.push(rel(
        "KmK3",
        "comm(Km,K3)",
        &format!("-1 - gamma0/(4*kappa)*{{Pp}}*gamma3*(gamma2 - i*gamma1) + {kk_tail}"),
    ));
    s.push(rel(
        "MpKp",
        "comm(Mp,Kp)",
        "-1/(8*kappa)*gamma3*(1 + i*gamma1*gamma2)*(1 - 1)*{Pp}",
    ));
    s.push(rel(
        "MmKm",
        "comm(Mm,Km)",
        "1/(8*kappa)*gamma3*(1 + i*gamma1*gamma2)*(1 + 1)*{Pp}",
    ));
    s.push(rel("M12K3", "comm(M12,K3)", "0"));
    s.push(rel(
        "M12Kp",
        "comm(M12,Kp)",
        "-1/2*((gamma1 + i*gamma2)^gamma0)",
    ));
    s.push(rel(
        "M12Km",
        "comm(M12,Km)",
        "1/2*((gamma1 - i*gamma2)^gamma0)",
    ));
    s.push(rel(
        "MpKm",
        "comm(Mp,Km)",
        "(-gamma3 + i/(8*kappa)*(1 - 1)*((1 - gamma1*gamma2)^gamma3))*(1-i*gamma5) + 1/4*(-(gamma1^gamma2) + 2)*gamma3*{Pp}",
    ));
    s.push(rel(
        "MmKp",
        "comm(Mm,Kp)",
        "(gamma3 + i/(8*kappa)*(1 + 1)*((1 - gamma1*gamma2)^gamma3))*(1-i*gamma5) + 1/4*((gamma1^gamma2) - 2)*gamma3*{Pp}",
    ));
    s.push(rel(
        "MpK3",
        "comm(Mp,K3)",
        "-1/2*((gamma1 + i*gamma2)^gamma0) + 1/(8*kappa)*(gamma1^gamma2)*(gamma1 + i*gamma2)*{Pp} + i/(4*kappa)*(gamma2 - i*gamma1)*{Pp}",
    ));
    s.push(rel(
        "MmK3",
        "comm(Mm,K3)",
        "1/2*((gamma1 - i*gamma2)^gamma0) - 1/(8*kappa)*(gamma1^gamma2)*(gamma1 + i*gamma2)*{Pp} + i/(4*kappa)*(gamma2 + i*gamma1)*{Pp}",
    ));
    s
}

const ONE_PLUS: &str = "(1 + gamma0/(2*kappa)*{Pp})";
const ONE_MINUS: &str = "(1 - gamma0/(2*kappa)*{Pp})";

fn delta_p0() -> Relation {
    rel(
        "Delta_P0",
        "Delta(P0)",
        "1/2*(gamma0*{Pp} ox 1 + 1 ox gamma0*{Pp})",
    )
}

/// The printed right-hand side misses a closing parenthesis; it is closed
/// after each `(1 + γ_0(1+iγ_5))` factor.
fn delta_pi() -> Relation {
    spatial(
        rel(
            "Delta_P",
            "Delta(P{i})",
            "1/2*(gamma{i}*{Pp} ox (1 + gamma0*{Pp}) + (1 + gamma0*{Pp}) ox gamma{i}*{Pp})",
        ),
        &["i"],
    )
}

fn counits(s: &mut RelationSuite, boosts: &str) {
    s.push(spacetime(
        rel("eps_M", "eps(M{mu}{nu})", "0"),
        &["mu", "nu"],
    ));
    s.push(spacetime(rel("eps_P", "eps(P{mu})", "0"), &["mu"]));
    s.push(spatial(
        rel("eps_K", &format!("eps({boosts}{{j}})"), "0"),
        &["j"],
    ));
}

fn kappa_coalgebra() -> RelationSuite {
    let mut s = RelationSuite::new("kappa_coalgebra", BasisKind::Kappa);
    s.push(spatial(rel("S_M", "S(M{i}{j})", "-M{i}{j}"), &["i", "j"]));
    s.push(spacetime(rel("S_P", "S(P{mu})", "-P{mu}"), &["mu"]));
    s.push(rel(
        "S_K3",
        "S(K3)",
        "-1/2*gamma3*(1-i*gamma5) + i/(2*kappa)*gamma3*{Pp} + gamma1/(2*kappa)",
    ));
    s.push(rel(
        "S_Kp",
        "S(Kp)",
        "-1/2*((gamma1 + i*gamma2)^gamma0) + 1/(2*kappa)*(gamma2 - i*gamma1) - i/(4*kappa)*(gamma1 - i*gamma2)*{Pp}",
    ));
    s.push(rel(
        "S_Km",
        "S(Km)",
        "-1/2*((gamma1 + i*gamma2)^gamma0) - 1/(2*kappa)*(gamma2 + i*gamma1) + i/(4*kappa)*(gamma1 + i*gamma2)*{Pp}",
    ));
    s.push(spatial(
        rel(
            "Delta_M",
            "Delta(M{i}{j})",
            "1/2*((gamma{i}^gamma{j}) ox 1 + 1 ox (gamma{i}^gamma{j}))",
        ),
        &["i", "j"],
    ));
    s.push(rel(
        "Delta_K3",
        "Delta(K3)",
        &format!(
            "-gamma3/2*(1-i*gamma5) ox {ONE_PLUS} + {ONE_MINUS} ox gamma3/2*(1-i*gamma5) \
             + 1/(4*kappa)*{ONE_MINUS}*((gamma2^gamma3) ox gamma2*{{Pp}})"
        ),
    ));
    for (name, up) in [("Delta_Kp", true), ("Delta_Km", false)] {
        let (pm, mp) = if up { ("+", "-") } else { ("-", "+") };
        s.push(rel(
            name,
            &format!("Delta(K{})", if up { "p" } else { "m" }),
            &format!(
                "-1/2*((gamma1 {pm} i*gamma2)^gamma0) ox {ONE_PLUS} + {ONE_MINUS} ox gamma3/2*(1-i*gamma5) \
                 + 1/(2*kappa)*{ONE_MINUS}*(gamma2 {mp} i*gamma1) ox 1/2*(gamma1^gamma2)*{ONE_PLUS} \
                 - {ONE_MINUS}*1/2*(gamma2 {mp} i*gamma1) ox (gamma2 {mp} i*gamma1) \
                 {mp} i/(2*kappa)*{ONE_PLUS}*(gamma3^(gamma1 {pm} i*gamma2)) ox gamma3*{{Pp}}"
            ),
        ));
    }
    s.push(delta_pi());
    counits(&mut s, "RK");
    s
}

fn ring_k_algebra() -> RelationSuite {
    let mut s = RelationSuite::new("ringK_algebra", BasisKind::RingK);
    s.push(lorentz("M"));
    s.push(spatial(
        rel(
            "MjRK",
            "comm(M{j},RK{k})",
            &format!("i*{}", expand_sum(&["l"], 1, 3, "lc{j}{k}{l}*RK{l}")),
        ),
        &["j", "k"],
    ));
    s.push(spatial(
        rel("RKP0", "comm(RK{k},P0)", "i/2*gamma{k}*{Pp}"),
        &["k"],
    ));
    s.push(spatial(
        rel("RKP", "comm(RK{j},P{k})", "i*kappa*g{k}{j}*sinh({X})"),
        &["j", "k"],
    ));
    s.push(spatial(
        rel(
            "RKRK",
            "comm(RK{j},RK{k})",
            &format!(
                "-i*(gamma{{j}}^gamma{{k}})*cosh({{X}}) - 1/(4*kappa*kappa)*{}",
                expand_sum(
                    &["r", "p", "q"],
                    1,
                    3,
                    "lc{r}{p}{q}*gamma{k}*(g{r}{r}*gamma{r})*gamma5*((g{p}{p}*gamma{p})^(g{q}{q}*gamma{q}))"
                )
            ),
        ),
        &["j", "k"],
    ));
    s
}

fn ring_k_coalgebra() -> RelationSuite {
    let mut s = RelationSuite::new("ringK_coalgebra", BasisKind::RingK);
    s.push(spatial(
        rel(
            "Delta_M",
            "Delta(M{i}{j})",
            "1/2*((gamma{i}^gamma{j}) ox 1 + 1 ox (gamma{i}^gamma{j}))",
        ),
        &["i", "j"],
    ));
    s.push(delta_p0());
    let first =
        "-1/4*((1 + (gamma{i} + gamma0)*(1-i*gamma5)) ox (1 + (gamma{i} + gamma0)*(1-i*gamma5)))";
    let sum = expand_sum(
        &["j", "k"],
        1,
        3,
        "lc{i}{j}{k}*(gamma{j}*{Pp} ox gamma{i}*gamma{j}*(1 + 2/kappa*gamma0*{Pp}) \
         + gamma{i}*gamma{j}*(1 - 2/kappa*gamma0*{Pp}) ox gamma{j}*{Pp})",
    );
    s.push(spatial(
        rel(
            "Delta_RK",
            "Delta(RK{i})",
            &format!("{first} + i/(2*kappa)*{sum}"),
        ),
        &["i"],
    ));
    s.push(delta_pi());
    counits(&mut s, "RK");
    s.push(spacetime(
        rel("S_M", "S(M{mu}{nu})", "gamma{mu}^gamma{nu}"),
        &["mu", "nu"],
    ));
    s.push(spacetime(rel("S_P", "S(P{mu})", "P{mu}"), &["mu"]));
    s.push(spatial(
        rel(
            "S_RK",
            "S(RK{j})",
            "gamma{j}*(1/2*(1-i*gamma5) + 3*i/(4*kappa)*1/2*{Pp})",
        ),
        &["j"],
    ));
    s
}

fn bicross_algebra() -> RelationSuite {
    let mut s = RelationSuite::new("bicross_algebra", BasisKind::Bicross);
    s.push(lorentz("M"));
    s.push(spacetime(
        rel(
            "MK",
            "comm(M{mu}{nu},K{lam})",
            "-(g{mu}{lam}*K{nu} - g{nu}{lam}*K{mu})",
        ),
        &["mu", "nu", "lam"],
    ));
    s.push(spatial(
        rel(
            "KP0",
            "comm(K{j},P0)",
            "-i*gamma{j}*(1 - gamma0*(1-i*gamma5)/(2*kappa))*1/2*{Pp}",
        ),
        &["j"],
    ));
    s.push(spatial(
        rel(
            "PK",
            "comm(P{k},K{j})",
            "i*g{k}{j}*gamma0*({Pp}/2)*(1 - 4/kappa) + 2/kappa*gamma0*(1 - {Pp}/(4*kappa))*gamma{j}*gamma{k}*gamma5",
        ),
        &["k", "j"],
    ));
    s
}

fn bicross_coalgebra() -> RelationSuite {
    let mut s = RelationSuite::new("bicross_coalgebra", BasisKind::Bicross);
    s.push(spatial(
        rel(
            "Delta_M",
            "Delta(M{i}{j})",
            "1/2*(gamma{i}*gamma{j} ox 1 + 1 ox gamma{i}*gamma{j})",
        ),
        &["i", "j"],
    ));
    s.push(delta_p0());
    let sum = expand_sum(
        &["j", "k"],
        1,
        3,
        "lc{i}{j}{k}*(gamma{j}*{Pp} ox gamma{i}*gamma{j})",
    );
    s.push(spatial(
        rel(
            "Delta_K",
            "Delta(K{i})",
            &format!(
                "-1/2*(gamma{{i}}*{{Pp}} ox 1 + 4/kappa*(1 - gamma0*{{Pp}}) ox gamma{{i}}*{{Pp}}) + 1/(2*kappa)*{sum}"
            ),
        ),
        &["i"],
    ));
    s.push(delta_pi());
    s
}

/// Built-in relation suite by name. The κ suites need `kappa`, are marked
/// diagnostic and carry κ in their parameters.
pub fn suite(name: &str, kappa: Option<f64>) -> Result<RelationSuite> {
    let (mut s, needs_kappa) = match name {
        "conformal" => (conformal(), false),
        "conformal_symmetry" => (conformal_symmetry(), false),
        "kappa_algebra" => (kappa_algebra(), true),
        "kappa_coalgebra" => (kappa_coalgebra(), true),
        "ringK_algebra" => (ring_k_algebra(), true),
        "ringK_coalgebra" => (ring_k_coalgebra(), true),
        "bicross_algebra" => (bicross_algebra(), true),
        "bicross_coalgebra" => (bicross_coalgebra(), true),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    if needs_kappa {
        let k = kappa.ok_or_else(|| Error::MissingParameter("kappa".into()))?;
        if k <= 0.0 || !k.is_finite() {
            return Err(Error::BadParameter(format!(
                "kappa must be positive, got {k}"
            )));
        }
        s.parameters.insert("kappa".into(), k);
        s.relations = s.relations.into_iter().map(Relation::diagnostic).collect();
    }
    Ok(s)
}
