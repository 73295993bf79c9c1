use std::sync::Arc;

use anyhow::Result;
use grfit_core::bsd::{
    dihedral_congruence_check, dihedral_q, euler_factor, h_f_psi, height_matrix_nr, key_product,
    log_resolvent, u_psi, varrho, DihedralStructure, EulerNormalisation, KeyProductInput,
    KeyProductMode, QInputs,
};
use grfit_core::complexes::{
    annihilation_idempotent, char_component_compat, characteristic_element,
    characteristic_element_with, AdmissibleComplex, Splitting, Surjection, Trivialisation,
};
use grfit_core::fitting::{dual_basis_pool, fitting_invariant_matrix, FitOptions, Presentation};
use grfit_core::group_algebra::{GroupAlgebra, GroupRingElement};
use grfit_core::linalg::Matrix;
use grfit_core::organiser::{
    canonical_presentations, integrality_pipeline, organising_matrix, special_element,
    verify_organiser_identity, AnnihilationStatus, MembershipVerdict, PipelineInput, Witness,
};
use grfit_core::plattice::{EquivariantHom, FinPModule};
use grfit_core::scalars::{CycloElement, Rational};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::encode as enc;
use crate::schema::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
    #[serde(rename = "ERROR")]
    Error,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Error => "ERROR",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive | Verdict::Error => 2,
        }
    }

    fn of(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Fail dominates; otherwise an inconclusive membership makes the run inconclusive.
    fn with_memberships(pass: bool, ms: &[MembershipVerdict]) -> Self {
        if !pass || ms.contains(&MembershipVerdict::NotMember) {
            Verdict::Fail
        } else if ms.contains(&MembershipVerdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

pub const TASKS: [&str; 8] = [
    "check-admissible",
    "char-element",
    "organise",
    "fitting",
    "special-element",
    "integrality",
    "bsd-product",
    "dihedral-congruence",
];

pub struct Context {
    pub ga: Arc<GroupAlgebra>,
    pub p: u64,
    pub seed: u64,
}

pub struct Outcome {
    pub verdict: Verdict,
    pub flags: Map<String, Value>,
    pub outputs: Value,
}

pub fn run_task(task: &str, cx: &Context, payload: &Value) -> Result<Outcome> {
    ensure_object(payload, "payload")?;
    match task {
        "check-admissible" => check_admissible(cx, payload),
        "char-element" => char_element(cx, payload),
        "organise" => organise(cx, payload),
        "fitting" => fitting(cx, payload),
        "special-element" => special(cx, payload),
        "integrality" => integrality(cx, payload),
        "bsd-product" => bsd_product(cx, payload),
        "dihedral-congruence" => dihedral(cx, payload),
        other => Err(schema_err(format!("unknown task {other:?}"))),
    }
}

const P: &str = "payload";

fn complex(cx: &Context, v: &Value, path: &str) -> Result<AdmissibleComplex> {
    let n = cx.ga.order();
    let start = match opt(v, "start") {
        Some(s) => int(s, &join(path, "start"))? as i32,
        None => 1,
    };
    let dpath = join(path, "differentials");
    let diffs = array(field(v, "differentials", path)?, &dpath)?
        .iter()
        .enumerate()
        .map(|(i, m)| gr_matrix(m, &idx(&dpath, i), n, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(
        match opt_central(v, "idempotent", path, cx.ga.num_chars())? {
            Some(e) => AdmissibleComplex::with_idempotent(&cx.ga, cx.p, start, diffs, e)?,
            None => AdmissibleComplex::new(&cx.ga, cx.p, start, diffs)?,
        },
    )
}

fn trivialisation(
    cx: &Context,
    v: &Value,
    c: &AdmissibleComplex,
    required: bool,
) -> Result<Trivialisation> {
    match opt(v, "trivialisation") {
        Some(m) => Ok(Trivialisation::new(gr_matrix(
            m,
            &join(P, "trivialisation"),
            cx.ga.order(),
            Some(c.rank_at(1)),
        )?)),
        None if required => Err(parse_err(&join(P, "trivialisation"), "missing field")),
        None => Ok(Trivialisation::zero(c)),
    }
}

/// Homomorphisms given by their values on the standard basis of F¹, restricted to cocycles.
fn homs(cx: &Context, v: &Value, c: &AdmissibleComplex) -> Result<Vec<EquivariantHom>> {
    let path = join(P, "homs");
    let zb = c.cocycle_basis(1)?;
    let Some(list) = opt(v, "homs") else {
        return Ok(vec![]);
    };
    array(list, &path)?
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let hp = idx(&path, i);
            let cols = gr_vector(
                field(h, "columns", &hp)?,
                &join(&hp, "columns"),
                cx.ga.order(),
            )?;
            if cols.len() != c.rank_at(1) {
                return Err(parse_err(
                    &join(&hp, "columns"),
                    format!("expected {} values", c.rank_at(1)),
                ));
            }
            Ok(EquivariantHom::from_columns(cx.ga.group(), cx.p, &cols)?.restrict(zb.clone()))
        })
        .collect()
}

fn check_admissible(cx: &Context, v: &Value) -> Result<Outcome> {
    let c = complex(cx, v, P)?;
    let r = c.check_admissible()?;
    Ok(Outcome {
        verdict: Verdict::of(r.all_pass()),
        flags: Map::new(),
        outputs: enc::serde(&r),
    })
}

fn char_element(cx: &Context, v: &Value) -> Result<Outcome> {
    let ga = &cx.ga;
    let c = complex(cx, v, P)?;
    let t = trivialisation(cx, v, &c, false)?;
    let l = match opt(v, "splitting").and_then(|s| s.as_str()) {
        Some("random") => characteristic_element_with(&c, &t, Splitting::Random(cx.seed))?,
        None | Some("orthogonal") => characteristic_element(&c, &t)?,
        Some(other) => {
            return Err(parse_err(
                &join(P, "splitting"),
                format!("unknown splitting {other:?}"),
            ))
        }
    };
    let compat = char_component_compat(&c, &t)?;
    let mut flags = Map::new();
    flags.insert("compat".into(), enc::serde(&compat.verdict));
    Ok(Outcome {
        verdict: Verdict::of(compat.verdict.passed()),
        flags,
        outputs: json!({
            "char_element": enc::central(ga, &l.value),
            "splitting": enc::serde(&l.splitting),
            "e0": enc::central(ga, &compat.e0),
            "l0": enc::central(ga, &compat.l0),
            "l0_direct": enc::central(ga, &compat.l0_direct),
            "ratio": enc::central(ga, &compat.ratio),
            "exact_match": compat.exact_match(),
        }),
    })
}

fn organise(cx: &Context, v: &Value) -> Result<Outcome> {
    let ga = &cx.ga;
    let n = ga.order();
    let d = complex(cx, v, P)?;
    let z = match opt(v, "z") {
        Some(z) => gr_element(z, &join(P, "z"), n)?,
        None => GroupRingElement::one(n),
    };
    let phis = homs(cx, v, &d)?;
    let om = organising_matrix(&d, &z, &phis)?;
    let e0 = annihilation_idempotent(&d);
    let l0 = if e0.is_zero() {
        ga.central_zero()
    } else {
        let d0 = d.component(&e0)?;
        characteristic_element(&d0, &Trivialisation::zero(&d0))?.value
    };
    let id = verify_organiser_identity(&om, &l0, &e0, None)?;
    let shown = om.displayed_element(&l0, &e0)?;
    let pres = canonical_presentations(&om, &shown, None, &FitOptions::default())?;
    let mut flags = Map::new();
    flags.insert("fit0_tot".into(), enc::serde(&pres.fit0_tot.flag));
    flags.insert("fit_a".into(), enc::serde(&pres.fit_a.flag));
    if let Some(u) = id.unit {
        flags.insert("identity_unit".into(), enc::serde(&u));
    }
    Ok(Outcome {
        verdict: Verdict::with_memberships(
            id.passed(),
            &[pres.fit0_tot_verdict, pres.fit_a_verdict],
        ),
        flags,
        outputs: json!({
            "a": om.a,
            "phi": enc::gr_matrix(&om.phi),
            "nr_phi": enc::central(ga, &id.rhs),
            "displayed": enc::central(ga, &id.lhs),
            "ratio": enc::opt_central(ga, id.ratio.as_ref()),
            "exact": id.exact,
            "fit0_tot_membership": enc::serde(&pres.fit0_tot_verdict),
            "fit_a_membership": enc::serde(&pres.fit_a_verdict),
        }),
    })
}

fn fitting(cx: &Context, v: &Value) -> Result<Outcome> {
    let ga = &cx.ga;
    let n = ga.order();
    let m = gr_matrix(field(v, "matrix", P)?, &join(P, "matrix"), n, None)?;
    let a = match opt(v, "a") {
        Some(x) => uint(x, &join(P, "a"))? as usize,
        None => 0,
    };
    let pool = match opt(v, "pool") {
        Some(list) => {
            let path = join(P, "pool");
            array(list, &path)?
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    let cols = gr_vector(h, &idx(&path, i), n)?;
                    Ok(EquivariantHom::from_columns(ga.group(), cx.p, &cols)?)
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => dual_basis_pool(ga, cx.p, m.cols()),
    };
    let pres = Presentation::new(ga, cx.p, m)?;
    let fit = fitting_invariant_matrix(ga, cx.p, pres.matrix(), a, &pool, &FitOptions::default())?;
    let element = opt_central(v, "element", P, ga.num_chars())?;
    let membership = element.as_ref().map(|x| {
        if fit.lattice.contains(x) {
            MembershipVerdict::Member
        } else if fit.lattice.flag == grfit_core::fitting::Exactness::Exact {
            MembershipVerdict::NotMember
        } else {
            MembershipVerdict::Inconclusive
        }
    });
    let mut flags = Map::new();
    flags.insert("lattice".into(), enc::serde(&fit.lattice.flag));
    Ok(Outcome {
        verdict: Verdict::with_memberships(true, membership.as_slice()),
        flags,
        outputs: json!({
            "a": a,
            "basis": fit.lattice.basis().iter().map(|b| enc::central(ga, b)).collect::<Vec<_>>(),
            "minors_enumerated": fit.minors_enumerated,
            "generators_exact": fit.generators_exact,
            "contains_one": fit.lattice.contains_one(),
            "membership": membership.map_or(Value::Null, |m| enc::serde(&m)),
        }),
    })
}

struct SpecialInputs {
    c: AdmissibleComplex,
    t: Trivialisation,
    pi: Surjection,
    xs: Vec<Vec<Rational>>,
    l: Option<grfit_core::group_algebra::CentralElement>,
}

fn special_inputs(cx: &Context, v: &Value) -> Result<SpecialInputs> {
    let ga = &cx.ga;
    let n = ga.order();
    let c = complex(cx, v, P)?;
    let t = trivialisation(cx, v, &c, true)?;
    let pi = match opt(v, "surjection") {
        Some(s) => {
            let sp = join(P, "surjection");
            let m = gr_matrix(field(s, "matrix", &sp)?, &join(&sp, "matrix"), n, None)?;
            let rel = match opt(s, "relations") {
                Some(r) => gr_matrix(r, &join(&sp, "relations"), n, Some(m.cols()))?,
                None => Matrix::from_rows(vec![], m.cols()),
            };
            Surjection::new(&c, rel, m)?
        }
        None => Surjection::identity(&c)?,
    };
    let path = join(P, "xs");
    let xs = array(field(v, "xs", P)?, &path)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let xp = idx(&path, i);
            let vec = gr_vector(x, &xp, n)?;
            if vec.len() != pi.target_rank() {
                return Err(parse_err(
                    &xp,
                    format!("expected {} entries", pi.target_rank()),
                ));
            }
            ga.group()
                .flatten(&vec)
                .ok_or_else(|| parse_err(&xp, "elements of 𝒳 must be rational"))
        })
        .collect::<Result<Vec<_>>>()?;
    let l = opt_central(v, "char_element", P, ga.num_chars())?;
    Ok(SpecialInputs { c, t, pi, xs, l })
}

fn special(cx: &Context, v: &Value) -> Result<Outcome> {
    let ga = &cx.ga;
    let s = special_inputs(cx, v)?;
    let l = match s.l {
        Some(l) => l,
        None => characteristic_element(&s.c, &s.t)?.value,
    };
    let se = special_element(&s.c, &s.t, &l, &s.pi, &s.xs, cx.seed)?;
    Ok(Outcome {
        verdict: Verdict::of(se.eta.is_galois_stable()),
        flags: Map::new(),
        outputs: json!({
            "eta": enc::central(ga, &se.eta.coords),
            "e_pi": enc::central(ga, &se.e_pi),
            "e_a": enc::central(ga, &se.e_a),
            "x_coords": enc::central(ga, &se.x_coords),
            "transport": enc::central(ga, &se.transport),
            "char_element": enc::central(ga, &l),
            "galois_stable": se.eta.is_galois_stable(),
        }),
    })
}

fn integrality(cx: &Context, v: &Value) -> Result<Outcome> {
    let ga = &cx.ga;
    let n = ga.order();
    let s = special_inputs(cx, v)?;
    let phis = homs(cx, v, &s.c)?;
    let witness = match opt(v, "witness") {
        None => Witness::Z(GroupRingElement::one(n)),
        Some(w) => {
            let wp = join(P, "witness");
            match (opt(w, "z"), opt(w, "y")) {
                (Some(z), None) => Witness::Z(gr_element(z, &join(&wp, "z"), n)?),
                (None, Some(y)) => Witness::Y(gr_element(y, &join(&wp, "y"), n)?),
                _ => return Err(parse_err(&wp, "give exactly one of \"z\" and \"y\"")),
            }
        }
    };
    let x = opt_central(v, "x", P, ga.num_chars())?;
    let input = PipelineInput {
        complex: &s.c,
        trivialisation: &s.t,
        char_element: s.l,
        surjection: &s.pi,
        xs: s.xs,
        phis,
        x,
        witness,
        seed: cx.seed,
    };
    let r = integrality_pipeline(&input)?;
    let mut flags = Map::new();
    let mut ms = vec![];
    let organiser = match &r.organiser {
        Some(o) => {
            flags.insert("fit0_tot".into(), enc::serde(&o.fit0_tot_flag));
            flags.insert("fit_a".into(), enc::serde(&o.fit_a_flag));
            if let Some(u) = o.value_unit {
                flags.insert("value_unit".into(), enc::serde(&u));
            }
            ms = vec![o.fit0_tot, o.fit_a];
            json!({
                "identity_exact": o.identity.exact,
                "identity_passed": o.identity.passed(),
                "value_ratio": enc::opt_central(ga, o.value_ratio.as_ref()),
                "fit0_tot_membership": enc::serde(&o.fit0_tot),
                "fit_a_membership": enc::serde(&o.fit_a),
            })
        }
        None => Value::Null,
    };
    let ann = &r.annihilation;
    Ok(Outcome {
        verdict: Verdict::with_memberships(r.passed(), &ms),
        flags,
        outputs: json!({
            "a": r.a,
            "e_a": enc::central(ga, &r.e_a),
            "e_above": enc::central(ga, &r.e_above),
            "e_pi": enc::central(ga, &r.e_pi),
            "char_element": enc::central(ga, &r.char_element),
            "eta": enc::central(ga, &r.special.eta.coords),
            "value": enc::central(ga, &r.value),
            "outside_reduction": r.outside_reduction,
            "organiser": organiser,
            "annihilation": {
                "element": enc::central(ga, &ann.element),
                "integral": ann.integral,
                "status": enc::serde(&ann.status),
            },
            "annihilation_pass": ann.status != AnnihilationStatus::UserWitnessFail,
        }),
    })
}

fn bsd_product(cx: &Context, v: &Value) -> Result<Outcome> {
    let ga = &cx.ga;
    let n = ga.order();
    let k = ga.num_chars();
    let mode = match opt(v, "mode").and_then(|m| m.as_str()) {
        None | Some("general") => KeyProductMode::General,
        Some("classical-selmer") => KeyProductMode::ClassicalSelmer,
        Some(other) => {
            return Err(parse_err(
                &join(P, "mode"),
                format!("unknown mode {other:?}"),
            ))
        }
    };
    let a = opt(v, "a")
        .map(|x| uint(x, &join(P, "a")))
        .transpose()?
        .unwrap_or(0) as usize;
    let d = opt(v, "d")
        .map(|x| uint(x, &join(P, "d")))
        .transpose()?
        .unwrap_or(1) as u32;
    let gre = |key: &str| {
        opt(v, key)
            .map(|x| gr_element(x, &join(P, key), n))
            .transpose()
    };
    let e_above = opt_central(v, "e_above", P, k)?;

    let mut euler = Vec::new();
    if let Some(list) = opt(v, "euler") {
        let path = join(P, "euler");
        for (i, e) in array(list, &path)?.iter().enumerate() {
            let ep = idx(&path, i);
            if e.is_array() {
                euler.push(central(e, &ep, k)?);
                continue;
            }
            let frob = uint(field(e, "frob", &ep)?, &join(&ep, "frob"))? as usize;
            let a_v = int(field(e, "a_v", &ep)?, &join(&ep, "a_v"))?;
            let nv = uint(field(e, "nv", &ep)?, &join(&ep, "nv"))?;
            let norm = match opt(e, "customary").and_then(|c| c.as_bool()) {
                Some(true) => EulerNormalisation::Customary,
                _ => EulerNormalisation::AsPrinted,
            };
            euler.push(euler_factor(ga, frob, a_v, nv, norm)?.value);
        }
    }
    let log_res = match opt(v, "log_resolvent") {
        Some(x) if x.is_array() => Some(central(x, &join(P, "log_resolvent"), k)?),
        Some(x) => {
            let lp = join(P, "log_resolvent");
            Some(log_resolvent(
                ga,
                &gr_matrix(field(x, "matrix", &lp)?, &join(&lp, "matrix"), n, None)?,
            )?)
        }
        None => None,
    };
    let height = match opt(v, "height") {
        Some(x) if x.is_array() => Some(central(x, &join(P, "height"), k)?),
        Some(x) => {
            let hp = join(P, "height");
            let pp = join(&hp, "pairings");
            let tables = array(field(x, "pairings", &hp)?, &pp)?
                .iter()
                .enumerate()
                .map(|(g, m)| scalar_matrix(m, &idx(&pp, g)))
                .collect::<Result<Vec<_>>>()?;
            let e = e_above.clone().unwrap_or_else(|| ga.central_one());
            Some(height_matrix_nr(ga, &tables, a, &e)?)
        }
        None => None,
    };
    let varrho_list = match opt(v, "varrho") {
        Some(list) => {
            let path = join(P, "varrho");
            let mut out = Vec::new();
            for (i, x) in array(list, &path)?.iter().enumerate() {
                let xp = idx(&path, i);
                if x.is_array() {
                    out.push(central(x, &xp, k)?);
                    continue;
                }
                let nv = uint(field(x, "nv", &xp)?, &join(&xp, "nv"))?;
                let dp = join(&xp, "fixed_dims");
                let dims = array(field(x, "fixed_dims", &xp)?, &dp)?
                    .iter()
                    .enumerate()
                    .map(|(j, d)| Ok(uint(d, &idx(&dp, j))? as usize))
                    .collect::<Result<Vec<_>>>()?;
                if dims.len() != k {
                    return Err(parse_err(&dp, format!("expected {k} dimensions")));
                }
                out.push(varrho(&dims, nv));
            }
            Some(out)
        }
        None => None,
    };
    let sha = match opt(v, "sha") {
        Some(s) => {
            let sp = join(P, "sha");
            let xp = join(&sp, "exponents");
            let exps = array(field(s, "exponents", &sp)?, &xp)?
                .iter()
                .enumerate()
                .map(|(i, e)| Ok(uint(e, &idx(&xp, i))? as u32))
                .collect::<Result<Vec<_>>>()?;
            Some(match opt(s, "action") {
                Some(act) => {
                    let ap = join(&sp, "action");
                    let mats = array(act, &ap)?
                        .iter()
                        .enumerate()
                        .map(|(g, m)| {
                            let mp = idx(&ap, g);
                            scalar_matrix(m, &mp)?.try_map(|c| {
                                c.to_rational()
                                    .ok_or_else(|| parse_err(&mp, "action must be rational"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    FinPModule::new(cx.p, exps, mats)?
                }
                None => FinPModule::with_trivial_action(cx.p, exps, n)?,
            })
        }
        None => None,
    };
    let selmer = match opt(v, "selmer") {
        Some(m) => Some(Presentation::new(
            ga,
            cx.p,
            gr_matrix(m, &join(P, "selmer"), n, None)?,
        )?),
        None => None,
    };
    let input = KeyProductInput {
        a,
        d,
        alpha: gre("alpha")?,
        y: gre("y")?,
        e_above,
        euler,
        l_value: opt_central(v, "l_value", P, k)?,
        omega: opt_central(v, "omega", P, k)?,
        root_number: opt_central(v, "root_number", P, k)?,
        log_resolvent: log_res,
        height,
        tau_star: opt_central(v, "tau_star", P, k)?,
        varrho: varrho_list,
        sha,
        selmer,
    };
    let r = key_product(ga, cx.p, &input, mode)?;
    let mut flags = Map::new();
    if let Some(f) = r.fit_flag {
        flags.insert("fit_a".into(), enc::serde(&f));
    }
    let ms: Vec<_> = r.fit_membership.into_iter().collect();
    Ok(Outcome {
        verdict: Verdict::with_memberships(r.integral && r.annihilates != Some(false), &ms),
        flags,
        outputs: json!({
            "mode": enc::serde(&r.mode),
            "element": enc::central(ga, &r.element),
            "coefficients": enc::gr(&r.coefficients),
            "integral": r.integral,
            "coefficient_integral": r.coefficient_integral,
            "annihilates": r.annihilates,
            "fit_membership": r.fit_membership.map_or(Value::Null, |m| enc::serde(&m)),
        }),
    })
}

fn per_char<'a>(
    v: &'a Value,
    key: &str,
    k: usize,
    optional: bool,
) -> Result<Vec<Option<&'a Value>>> {
    match opt(v, key) {
        Some(list) => {
            let path = join(P, key);
            let items = array(list, &path)?;
            if items.len() != k {
                return Err(parse_err(
                    &path,
                    format!("expected {k} per-character entries"),
                ));
            }
            Ok(items.iter().map(Some).collect())
        }
        None if optional => Ok(vec![None; k]),
        None => Err(parse_err(&join(P, key), "missing field")),
    }
}

fn q_value(
    ds: &DihedralStructure,
    chi: usize,
    i_q: u8,
    v: &Value,
    path: &str,
) -> Result<CycloElement> {
    if !v.is_object() {
        return scalar(v, path);
    }
    let sc = |key: &str| scalar(field(v, key, path)?, &join(path, key));
    let count = |key: &str| -> Result<usize> {
        Ok(opt(v, key)
            .map(|x| uint(x, &join(path, key)))
            .transpose()?
            .unwrap_or(0) as usize)
    };
    let h = match (opt(v, "h"), opt(v, "pairing")) {
        (Some(h), _) => scalar(h, &join(path, "h"))?,
        (None, Some(p)) => {
            let pp = join(path, "pairing");
            let vals = array(p, &pp)?
                .iter()
                .enumerate()
                .map(|(g, x)| scalar(x, &idx(&pp, g)))
                .collect::<Result<Vec<_>>>()?;
            h_f_psi(ds, chi, i_q, &vals)?
        }
        (None, None) => h_f_psi(ds, chi, i_q, &[])?,
    };
    let u = match (opt(v, "u"), opt(v, "frobenius")) {
        (Some(u), _) => Some(scalar(u, &join(path, "u"))?),
        (None, Some(f)) => {
            let fp = join(path, "frobenius");
            let mats = array(f, &fp)?
                .iter()
                .enumerate()
                .map(|(i, m)| scalar_matrix(m, &idx(&fp, i)))
                .collect::<Result<Vec<_>>>()?;
            Some(u_psi(&mats)?)
        }
        (None, None) => None,
    };
    let radicand = opt(v, "radicand")
        .map(|r| rational(r, &join(path, "radicand")))
        .transpose()?;
    let inputs = QInputs {
        s_ram: count("s_ram")?,
        s_ram_split: count("s_ram_split")?,
        sqrt: sc("sqrt")?,
        radicand,
        l_value: sc("l_value")?,
        omega: sc("omega")?,
        h,
        u,
    };
    Ok(dihedral_q(ds, chi, &inputs)?)
}

fn dihedral(cx: &Context, v: &Value) -> Result<Outcome> {
    let ga = &cx.ga;
    let k = ga.num_chars();
    let ds = DihedralStructure::new(ga, cx.p)?;
    let i_q = uint(field(v, "i_q", P)?, &join(P, "i_q"))? as u8;
    let t_q = opt(v, "t_q")
        .map(|x| int(x, &join(P, "t_q")))
        .transpose()?
        .unwrap_or(1);
    let qs = per_char(v, "q", k, false)?;
    let q = qs
        .iter()
        .enumerate()
        .map(|(chi, x)| q_value(&ds, chi, i_q, x.expect("present"), &idx(&join(P, "q"), chi)))
        .collect::<Result<Vec<_>>>()?;
    let delta = per_char(v, "delta", k, true)?
        .iter()
        .enumerate()
        .map(|(chi, x)| {
            x.map_or(Ok(CycloElement::one()), |x| {
                scalar(x, &idx(&join(P, "delta"), chi))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let r = dihedral_congruence_check(&ds, &q, t_q, &delta, i_q)?;
    let classes: Vec<Value> = (0..k)
        .map(|chi| {
            json!({
                "label": ga.label(chi),
                "class": enc::serde(&ds.class(chi)),
                "q": enc::scalar(&q[chi]),
            })
        })
        .collect();
    let table: Vec<Value> = r
        .verdicts
        .iter()
        .map(|g| json!({ "g": g.g, "label": ga.group().label(g.g), "value": enc::scalar(&g.value), "pass": g.pass }))
        .collect();
    Ok(Outcome {
        verdict: Verdict::of(r.passed()),
        flags: Map::new(),
        outputs: json!({
            "tau": ds.tau,
            "characters": classes,
            "per_g": table,
            "failures": r.failures(),
        }),
    })
}
